//! Line-oriented rendering of runs.

use std::fmt::Write as _;

use crate::concept::{tokens, ConceptSpace};
use crate::dynamics::{BamRun, HiddenPattern, PatternKind, RelationalPattern, Side};
use crate::neutro::TriState;

pub fn pattern_line(kind: PatternKind, len: usize) -> String {
    match kind {
        PatternKind::FixedPoint => "pattern=fixed".to_string(),
        PatternKind::LimitCycle => format!("pattern=cycle len={len}"),
    }
}

fn side_tag(s: Side) -> &'static str {
    match s {
        Side::Domain => "D",
        Side::Range => "R",
    }
}

fn ints(xs: &[i64]) -> String {
    xs.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

pub fn cognitive_trace(hp: &HiddenPattern) -> String {
    let mut out = String::new();
    for (k, s) in hp.trace.iter().enumerate() {
        let _ = writeln!(out, "t={k} {}", tokens(s));
    }
    let _ = writeln!(out, "{}", pattern_line(hp.kind, hp.states.len()));
    out
}

/// Half-steps in the order they are computed.
pub fn relational_trace(rp: &RelationalPattern) -> String {
    let mut out = String::new();
    let order = match rp.seed_side {
        Side::Domain => [Side::Domain, Side::Range],
        Side::Range => [Side::Range, Side::Domain],
    };
    for (k, p) in rp.trace.iter().enumerate() {
        for s in order {
            let v = if s == Side::Domain { &p.domain } else { &p.range };
            let _ = writeln!(out, "t={k} {} {}", side_tag(s), tokens(v));
        }
    }
    let _ = writeln!(out, "{}", pattern_line(rp.kind, rp.pairs.len()));
    out
}

/// The row field leads at t=0 (external input), the column field leads after.
pub fn bam_trace(run: &BamRun) -> String {
    let mut out = String::new();
    let rp = &run.pattern;
    for (k, (p, st)) in rp.trace.iter().zip(&run.steps).enumerate() {
        let d = format!("t={k} D {} act={}", tokens(&p.domain), ints(&st.domain_activation));
        let r = match &st.range_activation {
            Some(a) => format!("t={k} R {} act={}", tokens(&p.range), ints(a)),
            None => format!("t={k} R {}", tokens(&p.range)),
        };
        if st.range_activation.is_some() {
            let _ = writeln!(out, "{r}\n{d}");
        } else {
            let _ = writeln!(out, "{d}\n{r}");
        }
    }
    let _ = writeln!(out, "{}", pattern_line(rp.kind, rp.pairs.len()));
    out
}

fn labelled(out: &mut String, tag: &str, space: &ConceptSpace, s: &[TriState]) {
    let pick = |want: TriState| -> String {
        (0..s.len())
            .filter(|&i| s[i] == want)
            .map(|i| space.label(i))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let _ = writeln!(out, "{tag}on: {}", pick(TriState::On));
    let _ = writeln!(out, "{tag}indet: {}", pick(TriState::Indet));
}

fn head(out: &mut String, kind: &str, p: PatternKind, len: usize, iterations: usize) {
    let _ = writeln!(out, "kind={kind}");
    let _ = writeln!(out, "{} iterations={iterations}", pattern_line(p, len));
}

pub fn cognitive_summary(kind: &str, space: &ConceptSpace, hp: &HiddenPattern) -> String {
    let mut out = String::new();
    head(&mut out, kind, hp.kind, hp.states.len(), hp.iterations);
    for s in &hp.states {
        let _ = writeln!(out, "state {}", tokens(s));
    }
    if hp.kind == PatternKind::FixedPoint {
        labelled(&mut out, "", space, hp.terminal());
    }
    out
}

pub fn relational_summary(kind: &str, rows: &ConceptSpace, cols: &ConceptSpace, rp: &RelationalPattern) -> String {
    let mut out = String::new();
    head(&mut out, kind, rp.kind, rp.pairs.len(), rp.iterations);
    for p in &rp.pairs {
        let _ = writeln!(out, "domain {}", tokens(&p.domain));
        let _ = writeln!(out, "range {}", tokens(&p.range));
    }
    if rp.kind == PatternKind::FixedPoint {
        labelled(&mut out, "domain_", rows, &rp.terminal().domain);
        labelled(&mut out, "range_", cols, &rp.terminal().range);
    }
    out
}
