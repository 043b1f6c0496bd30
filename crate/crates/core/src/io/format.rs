//! Text formats: matrix files, raw tables and block plans.

use std::fmt::Write as _;

use thiserror::Error;

use crate::cetd::{CetdError, RawDataTable};
use crate::concept::{ConceptSpace, ConnectionMatrix, MatrixKind};
use crate::neutro::NeutroValue;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct FormatError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError { line, msg: msg.into() }
}

/// Non-blank, non-comment lines with 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn header<'a>(line: usize, text: &'a str, key: &str) -> Result<&'a str, FormatError> {
    text.strip_prefix(key)
        .and_then(|r| r.strip_prefix(':'))
        .map(str::trim)
        .ok_or_else(|| err(line, format!("expected `{key}:`")))
}

fn space(line: usize, labels: &str) -> Result<ConceptSpace, FormatError> {
    let s = ConceptSpace::new(labels.split_whitespace()).map_err(|e| err(line, e.to_string()))?;
    if s.is_empty() {
        return Err(err(line, "no labels"));
    }
    Ok(s)
}

pub fn parse_matrix(text: &str) -> Result<ConnectionMatrix, FormatError> {
    let mut lines = content_lines(text).peekable();
    let (ln, first) = lines.next().ok_or_else(|| err(1, "empty matrix file"))?;
    let kind_name = header(ln, first, "kind")?;
    let kind = MatrixKind::from_name(kind_name).ok_or_else(|| err(ln, format!("unknown kind `{kind_name}`")))?;
    let (ln, l) = lines.next().ok_or_else(|| err(ln + 1, "missing `rows:`"))?;
    let rows = space(ln, header(ln, l, "rows")?)?;
    let mut cols = rows.clone();
    let mut last = ln;
    if kind != MatrixKind::Cognitive {
        let (ln, l) = lines.next().ok_or_else(|| err(last + 1, "missing `cols:`"))?;
        cols = space(ln, header(ln, l, "cols")?)?;
        last = ln;
    }
    let mut scale = None;
    if let Some(&(ln, l)) = lines.peek() {
        if l.starts_with("scale:") {
            if kind != MatrixKind::Bam {
                return Err(err(ln, "`scale:` is only meaningful for bam matrices"));
            }
            let s = header(ln, l, "scale")?;
            let v: i32 = s.parse().map_err(|_| err(ln, format!("bad scale `{s}`")))?;
            if v < 1 {
                return Err(err(ln, "scale must be >= 1"));
            }
            scale = Some(v);
            lines.next();
            last = ln;
        }
    }
    let mut grid = Vec::with_capacity(rows.len());
    for (ln, l) in lines {
        let row = l
            .split_whitespace()
            .map(|t| t.parse::<NeutroValue>().map_err(|e| err(ln, e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != cols.len() {
            return Err(err(
                ln,
                format!("row has {} entries, expected {}", row.len(), cols.len()),
            ));
        }
        if grid.len() == rows.len() {
            return Err(err(ln, format!("more than {} rows", rows.len())));
        }
        grid.push(row);
        last = ln;
    }
    if grid.len() != rows.len() {
        return Err(err(last + 1, format!("{} rows, expected {}", grid.len(), rows.len())));
    }
    let m = ConnectionMatrix::from_grid(kind, rows, cols, grid).map_err(|e| err(last, e.to_string()))?;
    Ok(match scale {
        Some(s) => m.with_scale(s),
        None => m,
    })
}

/// Canonical text: single spaces, no comments, trailing newline.
pub fn serialize_matrix(m: &ConnectionMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kind: {}", m.kind);
    let _ = writeln!(out, "rows: {}", m.rows.labels().join(" "));
    if m.kind != MatrixKind::Cognitive {
        let _ = writeln!(out, "cols: {}", m.cols.labels().join(" "));
    }
    if let Some(s) = m.scale {
        let _ = writeln!(out, "scale: {s}");
    }
    for i in 0..m.n_rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

/// Header of column labels, then `<label> <interval> <counts...>` rows.
pub fn parse_table(text: &str) -> Result<RawDataTable, FormatError> {
    let mut lines = content_lines(text);
    let (hl, head) = lines.next().ok_or_else(|| err(1, "empty table"))?;
    let cols: Vec<String> = head.split_whitespace().map(String::from).collect();
    let mut labels = Vec::new();
    let mut intervals = Vec::new();
    let mut counts = Vec::new();
    let mut last = hl;
    for (ln, l) in lines {
        let mut toks = l.split_whitespace();
        let label = toks.next().unwrap_or_default().to_string();
        let iv = toks.next().ok_or_else(|| err(ln, "missing interval"))?;
        let iv: f64 = iv.parse().map_err(|_| err(ln, format!("bad interval `{iv}`")))?;
        let row = toks
            .map(|t| t.parse::<u64>().map_err(|_| err(ln, format!("bad count `{t}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != cols.len() {
            return Err(err(ln, format!("{} counts, header has {}", row.len(), cols.len())));
        }
        if !iv.is_finite() || iv <= 0.0 {
            return Err(err(ln, "interval must be positive"));
        }
        labels.push(label);
        intervals.push(iv);
        counts.push(row);
        last = ln;
    }
    RawDataTable::new(labels, cols, intervals, counts).map_err(|e| {
        let line = match e {
            CetdError::Empty => hl + 1,
            _ => last,
        };
        err(line, e.to_string())
    })
}

fn fmt_num(x: f64) -> String {
    if x.fract() == 0.0 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

pub fn serialize_table(t: &RawDataTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", t.col_labels().join(" "));
    for ((l, iv), row) in t.row_labels().iter().zip(t.intervals()).zip(t.counts()) {
        let cs: Vec<String> = row.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "{l} {} {}", fmt_num(*iv), cs.join(" "));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanEntry {
    pub line: usize,
    pub rows: Vec<String>,
    /// Same as `rows` for cognitive plans.
    pub cols: Vec<String>,
    pub block: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanFile {
    pub kind: MatrixKind,
    /// Target order; defaults to first appearance across classes.
    pub rows: Option<Vec<String>>,
    pub cols: Option<Vec<String>>,
    pub entries: Vec<PlanEntry>,
}

impl PlanFile {
    fn default_space(&self, pick: impl Fn(&PlanEntry) -> &Vec<String>) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for e in &self.entries {
            for l in pick(e) {
                if !out.contains(l) {
                    out.push(l.clone());
                }
            }
        }
        out
    }

    pub fn row_labels(&self) -> Vec<String> {
        self.rows.clone().unwrap_or_else(|| self.default_space(|e| &e.rows))
    }

    pub fn col_labels(&self) -> Vec<String> {
        match self.kind {
            MatrixKind::Cognitive => self.row_labels(),
            _ => self.cols.clone().unwrap_or_else(|| self.default_space(|e| &e.cols)),
        }
    }
}

/// `class:` / `block:` pairs with optional `kind:`, `rows:`, `cols:` headers.
pub fn parse_plan(text: &str) -> Result<PlanFile, FormatError> {
    let mut plan = PlanFile {
        kind: MatrixKind::Cognitive,
        rows: None,
        cols: None,
        entries: Vec::new(),
    };
    let mut pending: Option<(usize, Vec<String>, Vec<String>)> = None;
    let mut last = 0;
    for (ln, l) in content_lines(text) {
        last = ln;
        let (key, val) = l.split_once(':').ok_or_else(|| err(ln, "expected `key: value`"))?;
        let val = val.trim();
        let words = || val.split_whitespace().map(String::from).collect::<Vec<_>>();
        match key.trim() {
            "kind" => {
                if !plan.entries.is_empty() || pending.is_some() {
                    return Err(err(ln, "`kind:` must precede classes"));
                }
                plan.kind = MatrixKind::from_name(val)
                    .filter(|k| *k != MatrixKind::Bam)
                    .ok_or_else(|| err(ln, format!("plans are cognitive or relational, not `{val}`")))?;
            }
            "rows" => plan.rows = Some(words()),
            "cols" => plan.cols = Some(words()),
            "class" => {
                if pending.is_some() {
                    return Err(err(ln, "class without a block"));
                }
                let (r, c) = match (plan.kind, val.split_once('|')) {
                    (MatrixKind::Cognitive, None) => (words(), words()),
                    (MatrixKind::Cognitive, Some(_)) => return Err(err(ln, "`|` only in relational plans")),
                    (_, Some((r, c))) => (
                        r.split_whitespace().map(String::from).collect(),
                        c.split_whitespace().map(String::from).collect(),
                    ),
                    (_, None) => return Err(err(ln, "relational class needs `rows | cols`")),
                };
                let r: Vec<String> = r;
                let c: Vec<String> = c;
                if r.is_empty() || c.is_empty() {
                    return Err(err(ln, "empty class"));
                }
                pending = Some((ln, r, c));
            }
            "block" => {
                let (cl, rows, cols) = pending.take().ok_or_else(|| err(ln, "block without a class"))?;
                if val.is_empty() {
                    return Err(err(ln, "missing block path"));
                }
                plan.entries.push(PlanEntry {
                    line: cl,
                    rows,
                    cols,
                    block: val.to_string(),
                });
            }
            other => return Err(err(ln, format!("unknown plan key `{other}`"))),
        }
    }
    if let Some((ln, _, _)) = pending {
        return Err(err(ln, "class without a block"));
    }
    if plan.entries.is_empty() {
        return Err(err(last.max(1), "plan has no blocks"));
    }
    if plan.kind == MatrixKind::Cognitive && plan.cols.is_some() {
        return Err(err(1, "`cols:` only in relational plans"));
    }
    Ok(plan)
}
