//! `key=value` scenario files: one file drives one run.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::cetd::{cetd_profile, CetdParams, CetdProfile, RawDataTable};
use crate::compose::{assemble_disjoint, assemble_overlap, combine, link, BlockPlan, LinkRule};
use crate::concept::{validate, ConceptSpace, ConnectionMatrix, MatrixKind, StateVector};
use crate::dynamics::{run_bam, run_cognitive, run_relational, BamConfig, BamMode, Side, DEFAULT_MAX_ITERS};
use crate::io::dot::export_dot;
use crate::io::format::{parse_matrix, parse_plan, parse_table, serialize_matrix};
use crate::io::trace;
use crate::neutro::{NegativeMode, ThresholdPolicy, TieRule, TriState};
use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("line {line}: key `{key}` does not apply to kind={kind}")]
    Irrelevant {
        line: usize,
        key: String,
        kind: &'static str,
    },
    #[error("line {line}: unknown label `{label}`")]
    UnknownLabel { line: usize, label: String },
    #[error("line {line}: seed mixes domain and range labels")]
    MixedSeed { line: usize },
    #[error("kind={run} needs a {want} matrix, `{path}` is {got}")]
    KindMismatch {
        run: &'static str,
        want: &'static str,
        got: &'static str,
        path: String,
    },
    #[error("`{path}` has I entries but kind={run} is crisp; use the neutrosophic kind")]
    IndetInCrisp { run: &'static str, path: String },
    #[error("`{path}` fails validation: {what}")]
    Invalid { path: String, what: String },
    #[error("line {line}: {msg}")]
    Value { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RunKind {
    Fcm,
    Ncm,
    Frm,
    Nrm,
    Bam,
    Cetd,
    Compose,
}

impl RunKind {
    pub fn name(self) -> &'static str {
        match self {
            RunKind::Fcm => "fcm",
            RunKind::Ncm => "ncm",
            RunKind::Frm => "frm",
            RunKind::Nrm => "nrm",
            RunKind::Bam => "bam",
            RunKind::Cetd => "cetd",
            RunKind::Compose => "compose",
        }
    }

    fn from_name(s: &str) -> Option<RunKind> {
        [
            RunKind::Fcm,
            RunKind::Ncm,
            RunKind::Frm,
            RunKind::Nrm,
            RunKind::Bam,
            RunKind::Cetd,
            RunKind::Compose,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }

    fn matrix_kind(self) -> Option<MatrixKind> {
        match self {
            RunKind::Fcm | RunKind::Ncm => Some(MatrixKind::Cognitive),
            RunKind::Frm | RunKind::Nrm => Some(MatrixKind::Relational),
            RunKind::Bam => Some(MatrixKind::Bam),
            _ => None,
        }
    }

    fn crisp(self) -> bool {
        matches!(self, RunKind::Fcm | RunKind::Frm)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Emit {
    pub trace: bool,
    pub dot: bool,
    pub summary: bool,
}

impl Emit {
    pub fn union(self, o: Emit) -> Emit {
        Emit {
            trace: self.trace || o.trace,
            dot: self.dot || o.dot,
            summary: self.summary || o.summary,
        }
    }

    pub fn is_empty(self) -> bool {
        !(self.trace || self.dot || self.summary)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComposeOp {
    Combine,
    Disjoint,
    Overlap,
    Link,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Cognitive { seed: StateVector },
    Relational { seed: StateVector, side: Side },
    Bam { input: Vec<i64>, cfg: BamConfig },
    Cetd { table: RawDataTable, params: CetdParams },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub kind: RunKind,
    /// The matrix the dynamics run on; for compose jobs, the composed result.
    pub matrix: Option<ConnectionMatrix>,
    pub compose: Option<ComposeOp>,
    /// Dynamics or profiling job; compose-only scenarios have none.
    pub job: Option<Job>,
    pub policy: ThresholdPolicy,
    pub max_iters: usize,
    pub emit: Emit,
}

const KEYS: &[&str] = &[
    "kind",
    "matrix",
    "seed",
    "side",
    "k_on",
    "k_indet",
    "tie",
    "negative",
    "alphas",
    "decimals",
    "table",
    "max_iters",
    "emit",
    "input",
    "thresholds_u",
    "thresholds_v",
    "mode",
    "initial_y",
    "op",
    "matrices",
    "plan",
    "rule",
];

struct Entries {
    map: BTreeMap<&'static str, (usize, String)>,
}

impl Entries {
    fn get(&self, k: &str) -> Option<(usize, &str)> {
        self.map.get(k).map(|(l, v)| (*l, v.as_str()))
    }

    fn line(&self, k: &str) -> usize {
        self.map.get(k).map_or(0, |(l, _)| *l)
    }

    fn require(&self, k: &'static str) -> Result<(usize, &str), ScenarioError> {
        self.get(k).ok_or(ScenarioError::MissingKey(k))
    }

    fn parse<T: std::str::FromStr>(&self, k: &str) -> Result<Option<T>, ScenarioError> {
        match self.get(k) {
            None => Ok(None),
            Some((line, v)) => v.parse().map(Some).map_err(|_| ScenarioError::Value {
                line,
                msg: format!("bad value `{v}` for `{k}`"),
            }),
        }
    }

    fn forbid(&self, keys: &[&str], kind: RunKind) -> Result<(), ScenarioError> {
        for &k in keys {
            if let Some((line, _)) = self.get(k) {
                return Err(ScenarioError::Irrelevant {
                    line,
                    key: k.to_string(),
                    kind: kind.name(),
                });
            }
        }
        Ok(())
    }
}

fn list(v: &str) -> Vec<&str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn int_list(line: usize, key: &str, v: &str) -> Result<Vec<i64>, ScenarioError> {
    list(v)
        .into_iter()
        .map(|t| {
            t.parse().map_err(|_| ScenarioError::Value {
                line,
                msg: format!("bad integer `{t}` in `{key}`"),
            })
        })
        .collect()
}

fn split_lines(text: &str) -> Result<Entries, ScenarioError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (k, v) = l.split_once('=').ok_or_else(|| ScenarioError::Syntax {
            line,
            msg: format!("expected `key=value`, got `{l}`"),
        })?;
        let k = k.trim();
        let key = KEYS
            .iter()
            .copied()
            .find(|x| *x == k)
            .ok_or_else(|| ScenarioError::UnknownKey {
                line,
                key: k.to_string(),
            })?;
        if map.insert(key, (line, v.trim().to_string())).is_some() {
            return Err(ScenarioError::DuplicateKey {
                line,
                key: k.to_string(),
            });
        }
    }
    Ok(Entries { map })
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_matrix(path: &Path) -> Result<ConnectionMatrix, Error> {
    parse_matrix(&read(path)?).map_err(|err| Error::Format {
        path: path.to_path_buf(),
        err,
    })
}

pub fn load_table(path: &Path) -> Result<RawDataTable, Error> {
    parse_table(&read(path)?).map_err(|err| Error::Format {
        path: path.to_path_buf(),
        err,
    })
}

fn check_valid(m: &ConnectionMatrix, path: &str) -> Result<(), ScenarioError> {
    let rep = validate(m);
    match rep.violations.first() {
        None => Ok(()),
        Some(v) => Err(ScenarioError::Invalid {
            path: path.to_string(),
            what: v.to_string(),
        }),
    }
}

/// `path` or `path:T` for the transpose.
fn matrix_ref(base: &Path, spec: &str) -> Result<ConnectionMatrix, Error> {
    let (p, t) = match spec.strip_suffix(":T") {
        Some(p) => (p, true),
        None => (spec, false),
    };
    let m = load_matrix(&base.join(p))?;
    Ok(if t { m.transpose() } else { m })
}

/// Loads a plan and its blocks; block paths resolve against the plan's directory.
pub fn load_plan(path: &Path) -> Result<(BlockPlan, Vec<ConnectionMatrix>), Error> {
    let text = read(path)?;
    let pf = parse_plan(&text).map_err(|err| Error::Format {
        path: path.to_path_buf(),
        err,
    })?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let fmt_err = |line: usize, msg: String| Error::Format {
        path: path.to_path_buf(),
        err: crate::io::format::FormatError { line, msg },
    };
    let mut blocks = Vec::with_capacity(pf.entries.len());
    for e in &pf.entries {
        let b = load_matrix(&dir.join(&e.block))?;
        if b.kind != pf.kind {
            return Err(fmt_err(
                e.line,
                format!("block `{}` is {}, plan is {}", e.block, b.kind, pf.kind),
            ));
        }
        if b.rows.labels() != e.rows.as_slice() || b.cols.labels() != e.cols.as_slice() {
            return Err(fmt_err(
                e.line,
                format!("block `{}` labels differ from its class", e.block),
            ));
        }
        blocks.push(b);
    }
    let rows = ConceptSpace::new(pf.row_labels()).map_err(|e| fmt_err(1, e.to_string()))?;
    let cols = ConceptSpace::new(pf.col_labels()).map_err(|e| fmt_err(1, e.to_string()))?;
    let plan = BlockPlan::from_blocks(pf.kind, rows, cols, &blocks, true)?;
    Ok((plan, blocks))
}

fn seed_state(e: &Entries, m: &ConnectionMatrix, relational: bool) -> Result<(StateVector, Side), ScenarioError> {
    let line = e.line("seed");
    let labels = e.get("seed").map(|(_, v)| list(v)).unwrap_or_default();
    let side = match e.get("side") {
        Some((l, "domain")) | Some((l, "rows")) => Some((l, Side::Domain)),
        Some((l, "range")) | Some((l, "cols")) => Some((l, Side::Range)),
        Some((l, v)) => {
            return Err(ScenarioError::Value {
                line: l,
                msg: format!("side must be domain or range, got `{v}`"),
            })
        }
        None => None,
    };
    if !relational {
        if let Some((l, _)) = side {
            return Err(ScenarioError::Irrelevant {
                line: l,
                key: "side".into(),
                kind: "fcm/ncm",
            });
        }
    }
    let side = match side {
        Some((_, s)) => s,
        None if !relational => Side::Domain,
        None => {
            let in_rows = labels.iter().all(|l| m.rows.contains(l));
            let in_cols = labels.iter().all(|l| m.cols.contains(l));
            match (in_rows, in_cols) {
                (true, _) => Side::Domain,
                (false, true) => Side::Range,
                _ if labels.iter().any(|l| !m.rows.contains(l) && !m.cols.contains(l)) => Side::Domain,
                _ => return Err(ScenarioError::MixedSeed { line }),
            }
        }
    };
    let space = if side == Side::Domain { &m.rows } else { &m.cols };
    let mut s = StateVector::off(space.len());
    for l in labels {
        let i = space.position(l).ok_or_else(|| ScenarioError::UnknownLabel {
            line,
            label: l.to_string(),
        })?;
        s.states[i] = TriState::On;
        s.clamp.insert(i);
    }
    Ok((s, side))
}

fn policy(e: &Entries) -> Result<ThresholdPolicy, ScenarioError> {
    let k_on = e.parse::<i32>("k_on")?.unwrap_or(1);
    let k_indet = e.parse::<i32>("k_indet")?.unwrap_or(k_on);
    let mut p = ThresholdPolicy::with_k(k_on, k_indet);
    if !p.is_valid() {
        return Err(ScenarioError::Value {
            line: e.line("k_on").max(e.line("k_indet")),
            msg: "thresholds must be >= 1".into(),
        });
    }
    match e.get("tie") {
        None | Some((_, "off")) => {}
        Some((_, "indet")) => p = p.tie(TieRule::Indet),
        Some((line, v)) => {
            return Err(ScenarioError::Value {
                line,
                msg: format!("tie must be off or indet, got `{v}`"),
            })
        }
    }
    match e.get("negative") {
        None | Some((_, "clip")) => {}
        Some((_, "bipolar")) => p = p.negative_mode(NegativeMode::Bipolar),
        Some((line, v)) => {
            return Err(ScenarioError::Value {
                line,
                msg: format!("negative must be clip or bipolar, got `{v}`"),
            })
        }
    }
    Ok(p)
}

fn emit(e: &Entries) -> Result<Emit, ScenarioError> {
    let mut out = Emit::default();
    if let Some((line, v)) = e.get("emit") {
        for t in list(v) {
            match t {
                "trace" => out.trace = true,
                "dot" => out.dot = true,
                "summary" => out.summary = true,
                other => {
                    return Err(ScenarioError::Value {
                        line,
                        msg: format!("unknown emit target `{other}`"),
                    })
                }
            }
        }
    }
    Ok(out)
}

fn bam_config(e: &Entries, m: &ConnectionMatrix) -> Result<(Vec<i64>, BamConfig), ScenarioError> {
    let (line, v) = e.require("input")?;
    let input = int_list(line, "input", v)?;
    if input.len() != m.n_rows() {
        return Err(ScenarioError::Value {
            line,
            msg: format!("input has {} values, matrix has {} rows", input.len(), m.n_rows()),
        });
    }
    let mut cfg = BamConfig::default();
    if let Some((l, v)) = e.get("thresholds_u") {
        cfg.thresholds_u = int_list(l, "thresholds_u", v)?;
    }
    if let Some((l, v)) = e.get("thresholds_v") {
        cfg.thresholds_v = int_list(l, "thresholds_v", v)?;
    }
    match e.get("mode") {
        None | Some((_, "binary")) => {}
        Some((_, "bipolar")) => cfg.mode = BamMode::Bipolar,
        Some((line, v)) => {
            return Err(ScenarioError::Value {
                line,
                msg: format!("mode must be binary or bipolar, got `{v}`"),
            })
        }
    }
    if let Some((line, v)) = e.get("initial_y") {
        let ys = list(v)
            .into_iter()
            .map(|t| match t {
                "0" => Ok(TriState::Off),
                "1" => Ok(TriState::On),
                _ => Err(ScenarioError::Value {
                    line,
                    msg: format!("initial_y takes 0 or 1, got `{t}`"),
                }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        cfg.initial_y = Some(ys);
    }
    Ok((input, cfg))
}

fn cetd_job(e: &Entries, base: &Path) -> Result<Job, Error> {
    let (_, t) = e.require("table")?;
    let table = load_table(&base.join(t))?;
    let (line, v) = e.require("alphas")?;
    let mut alphas = Vec::new();
    for a in list(v) {
        let x: f64 = a.parse().map_err(|_| ScenarioError::Value {
            line,
            msg: format!("bad alpha `{a}`"),
        })?;
        if !(0.0..=1.0).contains(&x) {
            return Err(ScenarioError::Value {
                line,
                msg: format!("alpha {a} is outside [0, 1]"),
            }
            .into());
        }
        alphas.push(x);
    }
    if alphas.is_empty() {
        return Err(ScenarioError::Value {
            line,
            msg: "alphas is empty".into(),
        }
        .into());
    }
    let params = CetdParams {
        alphas,
        decimals: e.parse::<u32>("decimals")?,
    };
    Ok(Job::Cetd { table, params })
}

fn compose_matrix(e: &Entries, base: &Path) -> Result<(ComposeOp, ConnectionMatrix), Error> {
    let (line, op) = e.require("op")?;
    let op = match op {
        "combine" => ComposeOp::Combine,
        "disjoint" => ComposeOp::Disjoint,
        "overlap" => ComposeOp::Overlap,
        "link" => ComposeOp::Link,
        other => {
            return Err(ScenarioError::Value {
                line,
                msg: format!("unknown op `{other}`"),
            }
            .into())
        }
    };
    let rule = match e.get("rule") {
        None => LinkRule::default(),
        Some((line, v)) => LinkRule::from_name(v).ok_or_else(|| ScenarioError::Value {
            line,
            msg: format!("unknown link rule `{v}`"),
        })?,
    };
    let m = match op {
        ComposeOp::Combine | ComposeOp::Link => {
            e.forbid(&["plan"], RunKind::Compose)?;
            let (line, v) = e.require("matrices")?;
            let ms = list(v)
                .into_iter()
                .map(|p| matrix_ref(base, p))
                .collect::<Result<Vec<_>, _>>()?;
            if op == ComposeOp::Combine {
                combine(&ms)?
            } else {
                if ms.len() != 2 {
                    return Err(ScenarioError::Value {
                        line,
                        msg: format!("link takes two matrices, got {}", ms.len()),
                    }
                    .into());
                }
                link(&ms[0], &ms[1], rule)?
            }
        }
        ComposeOp::Disjoint | ComposeOp::Overlap => {
            e.forbid(&["matrices", "rule"], RunKind::Compose)?;
            let (_, p) = e.require("plan")?;
            let (plan, blocks) = load_plan(&base.join(p))?;
            if op == ComposeOp::Disjoint {
                assemble_disjoint(&plan, &blocks)?
            } else {
                assemble_overlap(&plan, &blocks)?
            }
        }
    };
    Ok((op, m))
}

/// Parses a scenario and loads everything it references; relative paths
/// resolve against `base`.
pub fn parse_scenario(text: &str, base: &Path) -> Result<Scenario, Error> {
    let e = split_lines(text)?;
    let (line, k) = e.require("kind")?;
    let kind = RunKind::from_name(k).ok_or_else(|| ScenarioError::Value {
        line,
        msg: format!("unknown kind `{k}`"),
    })?;
    let policy = policy(&e)?;
    let max_iters = e.parse::<usize>("max_iters")?.unwrap_or(DEFAULT_MAX_ITERS);
    if max_iters == 0 {
        return Err(ScenarioError::Value {
            line: e.line("max_iters"),
            msg: "max_iters must be >= 1".into(),
        }
        .into());
    }
    let emit = emit(&e)?;
    const DYN: &[&str] = &["seed", "side", "k_on", "k_indet", "tie", "negative"];
    const BAM: &[&str] = &["input", "thresholds_u", "thresholds_v", "mode", "initial_y"];
    const CETD: &[&str] = &["table", "alphas", "decimals"];
    const COMPOSE: &[&str] = &["op", "matrices", "plan", "rule"];
    let mut sc = Scenario {
        kind,
        matrix: None,
        compose: None,
        job: None,
        policy,
        max_iters,
        emit,
    };
    match kind {
        RunKind::Cetd => {
            e.forbid(&["matrix"], kind)?;
            e.forbid(DYN, kind)?;
            e.forbid(BAM, kind)?;
            e.forbid(COMPOSE, kind)?;
            sc.job = Some(cetd_job(&e, base)?);
        }
        RunKind::Compose => {
            e.forbid(&["matrix"], kind)?;
            e.forbid(BAM, kind)?;
            e.forbid(CETD, kind)?;
            let (op, m) = compose_matrix(&e, base)?;
            sc.compose = Some(op);
            if e.get("seed").is_some() {
                let rel = m.kind != MatrixKind::Cognitive;
                let (seed, side) = seed_state(&e, &m, rel)?;
                sc.job = Some(if rel {
                    Job::Relational { seed, side }
                } else {
                    Job::Cognitive { seed }
                });
            }
            sc.matrix = Some(m);
        }
        _ => {
            e.forbid(CETD, kind)?;
            e.forbid(COMPOSE, kind)?;
            let (_, path) = e.require("matrix")?;
            let m = load_matrix(&base.join(path))?;
            let want = kind.matrix_kind().expect("dynamics kind");
            if m.kind != want {
                return Err(ScenarioError::KindMismatch {
                    run: kind.name(),
                    want: want.name(),
                    got: m.kind.name(),
                    path: path.to_string(),
                }
                .into());
            }
            check_valid(&m, path)?;
            if kind.crisp() && m.has_indet() {
                return Err(ScenarioError::IndetInCrisp {
                    run: kind.name(),
                    path: path.to_string(),
                }
                .into());
            }
            sc.job = Some(match kind {
                RunKind::Bam => {
                    e.forbid(DYN, kind)?;
                    let (input, cfg) = bam_config(&e, &m)?;
                    Job::Bam { input, cfg }
                }
                RunKind::Fcm | RunKind::Ncm => {
                    e.forbid(BAM, kind)?;
                    Job::Cognitive {
                        seed: seed_state(&e, &m, false)?.0,
                    }
                }
                _ => {
                    e.forbid(BAM, kind)?;
                    let (seed, side) = seed_state(&e, &m, true)?;
                    Job::Relational { seed, side }
                }
            });
            sc.matrix = Some(m);
        }
    }
    Ok(sc)
}

pub fn load_scenario(path: &Path) -> Result<Scenario, Error> {
    let text = read(path)?;
    let base: PathBuf = path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    parse_scenario(&text, &base)
}

fn fixed(x: f64, d: usize) -> String {
    let s = format!("{x:.d$}");
    // avoid "-0.00"
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Fixed-column text report of a CETD profile.
pub fn cetd_report(table: &RawDataTable, params: &CetdParams, p: &CetdProfile) -> String {
    let d = params.decimals.unwrap_or(4) as usize;
    let mut out = String::new();
    let nums = |xs: &[f64]| xs.iter().map(|&x| fixed(x, d)).collect::<Vec<_>>().join(" ");
    let ints = |xs: &[i32]| xs.iter().map(i32::to_string).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "columns {}", table.col_labels().join(" "));
    let _ = writeln!(out, "atd");
    for (l, r) in table.row_labels().iter().zip(&p.atd) {
        let _ = writeln!(out, "  {l} {}", nums(r));
    }
    let _ = writeln!(out, "mean {}", nums(&p.stats.mean));
    let _ = writeln!(out, "std {}", nums(&p.stats.std));
    for (alpha, r) in &p.rtds {
        let _ = writeln!(out, "rtd alpha={alpha}");
        for (l, row) in table.row_labels().iter().zip(r) {
            let _ = writeln!(out, "  {l} {}", ints(row));
        }
    }
    let _ = writeln!(out, "cetd");
    for (l, row) in table.row_labels().iter().zip(&p.cetd) {
        let _ = writeln!(out, "  {l} {}", ints(row));
    }
    let _ = writeln!(out, "row_sums {}", ints(&p.row_sums));
    let _ = writeln!(out, "peak {}", p.peak_labels(table).join(" "));
    out
}

/// Runs a scenario; `extra` adds emit targets. With nothing requested the
/// summary is printed.
pub fn execute(sc: &Scenario, extra: Emit) -> Result<String, Error> {
    let mut emit = sc.emit.union(extra);
    if emit.is_empty() {
        emit.summary = true;
    }
    let mut out = String::new();
    let kind = sc.kind.name();
    let m = sc.matrix.as_ref();
    if emit.summary && sc.kind == RunKind::Compose {
        out.push_str(&serialize_matrix(m.expect("compose result")));
    }
    match &sc.job {
        None => {}
        Some(Job::Cetd { table, params }) => {
            let p = cetd_profile(table, params)?;
            out.push_str(&cetd_report(table, params, &p));
            return Ok(out);
        }
        Some(Job::Cognitive { seed }) => {
            let m = m.expect("matrix");
            let hp = run_cognitive(m, seed, &sc.policy, sc.max_iters)?;
            if emit.summary {
                out.push_str(&trace::cognitive_summary(kind, &m.rows, &hp));
            }
            if emit.dot {
                out.push_str(&export_dot(m));
            }
            if emit.trace {
                out.push_str(&trace::cognitive_trace(&hp));
            }
            return Ok(out);
        }
        Some(Job::Relational { seed, side }) => {
            let m = m.expect("matrix");
            let rp = run_relational(m, seed, *side, &sc.policy, sc.max_iters)?;
            if emit.summary {
                out.push_str(&trace::relational_summary(kind, &m.rows, &m.cols, &rp));
            }
            if emit.dot {
                out.push_str(&export_dot(m));
            }
            if emit.trace {
                out.push_str(&trace::relational_trace(&rp));
            }
            return Ok(out);
        }
        Some(Job::Bam { input, cfg }) => {
            let m = m.expect("matrix");
            let run = run_bam(m, input, cfg, sc.max_iters)?;
            if emit.summary {
                out.push_str(&trace::relational_summary(kind, &m.rows, &m.cols, &run.pattern));
            }
            if emit.dot {
                out.push_str(&export_dot(m));
            }
            if emit.trace {
                out.push_str(&trace::bam_trace(&run));
            }
            return Ok(out);
        }
    }
    if emit.dot {
        if let Some(m) = m {
            out.push_str(&export_dot(m));
        }
    }
    Ok(out)
}
