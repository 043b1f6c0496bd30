//! Command-line surface. Exit 0 on success, 1 on a domain error, 2 on a
//! usage error; diagnostics are one `error[<code>]: ...` line on stderr.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::cetd::{cetd_profile, CetdParams};
use crate::compose::{assemble_disjoint, assemble_overlap, combine, link, LinkRule};
use crate::concept::validate;
use crate::io::dot::export_dot;
use crate::io::format::{parse_matrix, parse_plan, serialize_matrix};
use crate::io::scenario::{cetd_report, execute, load_matrix, load_plan, load_scenario, load_table, Emit};
use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "cogmap", version, about = "Cognitive and relational map calculus")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Run a scenario file
    Run {
        scenario: PathBuf,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        summary: bool,
    },
    /// ATD/RTD/CETD profile of a raw table
    Cetd {
        table: PathBuf,
        /// Comma-separated alphas in [0, 1]
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        alpha: Vec<f64>,
        /// Round ATD and column stats before banding
        #[arg(long)]
        decimals: Option<u32>,
    },
    /// Build a matrix from pieces and print it
    #[command(subcommand)]
    Compose(ComposeCmd),
    /// Export a matrix
    #[command(subcommand)]
    Export(ExportCmd),
    /// Check a matrix, table, plan or scenario file
    Validate { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum ComposeCmd {
    /// Entrywise sum
    Combine {
        #[arg(required = true)]
        matrices: Vec<PathBuf>,
    },
    /// Disjoint block assembly from a plan
    Disjoint { plan: PathBuf },
    /// Overlap block assembly from a plan
    Overlap { plan: PathBuf },
    /// Thresholded product a.b
    Link(LinkArgs),
}

#[derive(Debug, Args)]
struct LinkArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long, default_value = "neutro", value_parser = ["neutro", "real-first"])]
    rule: String,
    /// Use the transpose of b
    #[arg(long)]
    transpose_b: bool,
}

#[derive(Debug, Subcommand)]
enum ExportCmd {
    /// Graphviz digraph
    Dot { matrix: PathBuf },
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn diag(err: &mut dyn Write, code: &str, msg: &str) {
    let _ = writeln!(err, "error[{code}]: {}", one_line(msg));
}

/// Validation failures are reported on stdout; the diagnostic tallies them.
struct Rejected(Vec<String>);

enum Failure {
    Domain(Error),
    Rejected(PathBuf, Rejected),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn validate_file(path: &Path) -> Result<String, Failure> {
    let text = read(path)?;
    let content: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let is_plan = content
        .iter()
        .any(|l| l.starts_with("class:") || l.starts_with("block:"));
    let first = content.first().copied().unwrap_or("");
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    if is_plan {
        parse_plan(&text).map_err(|err| Error::Format {
            path: path.to_path_buf(),
            err,
        })?;
        let (plan, blocks) = load_plan(path)?;
        let mut bad = Vec::new();
        for (b, e) in blocks.iter().zip(parse_plan(&text).expect("parsed above").entries) {
            for v in validate(b).violations {
                bad.push(format!("{}: {v}", e.block));
            }
        }
        plan.check().map_err(Error::from)?;
        if !bad.is_empty() {
            return Err(Failure::Rejected(path.to_path_buf(), Rejected(bad)));
        }
        let shape = if plan.is_equal_sized() { "equal" } else { "unequal" };
        Ok(format!("ok plan {} blocks {shape}\n", blocks.len()))
    } else if first.starts_with("kind:") {
        let m = parse_matrix(&text).map_err(|err| Error::Format {
            path: path.to_path_buf(),
            err,
        })?;
        let rep = validate(&m);
        if !rep.is_ok() {
            let lines = rep.violations.iter().map(|v| v.to_string()).collect();
            return Err(Failure::Rejected(path.to_path_buf(), Rejected(lines)));
        }
        Ok(format!("ok {} {}x{}\n", m.kind, m.n_rows(), m.n_cols()))
    } else if ext == "scn" || first.contains('=') {
        let sc = load_scenario(path)?;
        Ok(format!("ok scenario kind={}\n", sc.kind.name()))
    } else {
        let t = load_table(path)?;
        Ok(format!("ok table {}x{}\n", t.row_labels().len(), t.col_labels().len()))
    }
}

fn dispatch(cmd: Cmd) -> Result<String, Failure> {
    Ok(match cmd {
        Cmd::Run {
            scenario,
            trace,
            dot,
            summary,
        } => {
            let sc = load_scenario(&scenario)?;
            execute(&sc, Emit { trace, dot, summary })?
        }
        Cmd::Cetd { table, alpha, decimals } => {
            let t = load_table(&table)?;
            let params = CetdParams {
                alphas: alpha,
                decimals,
            };
            let p = cetd_profile(&t, &params).map_err(Error::from)?;
            cetd_report(&t, &params, &p)
        }
        Cmd::Compose(c) => {
            let m = match c {
                ComposeCmd::Combine { matrices } => {
                    let ms = matrices.iter().map(|p| load_matrix(p)).collect::<Result<Vec<_>, _>>()?;
                    combine(&ms).map_err(Error::from)?
                }
                ComposeCmd::Disjoint { plan } => {
                    let (plan, blocks) = load_plan(&plan)?;
                    assemble_disjoint(&plan, &blocks).map_err(Error::from)?
                }
                ComposeCmd::Overlap { plan } => {
                    let (plan, blocks) = load_plan(&plan)?;
                    assemble_overlap(&plan, &blocks).map_err(Error::from)?
                }
                ComposeCmd::Link(l) => {
                    let a = load_matrix(&l.a)?;
                    let mut b = load_matrix(&l.b)?;
                    if l.transpose_b {
                        b = b.transpose();
                    }
                    let rule = LinkRule::from_name(&l.rule).expect("clap restricts values");
                    link(&a, &b, rule).map_err(Error::from)?
                }
            };
            serialize_matrix(&m)
        }
        Cmd::Export(ExportCmd::Dot { matrix }) => {
            let m = load_matrix(&matrix)?;
            let rep = validate(&m);
            if !rep.is_ok() {
                let lines = rep.violations.iter().map(|v| v.to_string()).collect();
                return Err(Failure::Rejected(matrix, Rejected(lines)));
            }
            export_dot(&m)
        }
        Cmd::Validate { file } => validate_file(&file)?,
    })
}

/// Entry point shared by the binary and the tests. `argv[0]` is the program name.
pub fn run_cli(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let text = e.to_string();
                    let first = text.lines().next().unwrap_or("bad arguments");
                    diag(err, "usage", first.strip_prefix("error: ").unwrap_or(first));
                    2
                }
            };
        }
    };
    match dispatch(cli.cmd) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(Failure::Domain(e)) => {
            diag(err, e.code(), &e.to_string());
            1
        }
        Err(Failure::Rejected(path, Rejected(lines))) => {
            for l in &lines {
                let _ = writeln!(out, "{l}");
            }
            let first = lines.first().map(String::as_str).unwrap_or("");
            diag(
                err,
                "validate",
                &format!("{}: {} violation(s), first: {first}", path.display(), lines.len()),
            );
            1
        }
    }
}
