//! Iteration of state vectors to their hidden pattern.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::concept::{ConnectionMatrix, StateVector};
use crate::neutro::{collapse, neutro_dot, Activation, NeutroError, NeutroValue, ThresholdPolicy, TriState};

pub const DEFAULT_MAX_ITERS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("no revisit within {0} iterations")]
    NonConvergence(usize),
    #[error("state has {got} coordinates, space has {want}")]
    LengthMismatch { want: usize, got: usize },
    #[error("cognitive run needs a square matrix, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("thresholds must be >= 1 (k_on={0}, k_indet={1})")]
    BadPolicy(i32, i32),
    #[error("max_iters must be >= 1")]
    ZeroIters,
    #[error("bam needs plain integer weights, found {0}")]
    NonIntegerWeight(NeutroValue),
    #[error("activation overflow")]
    ActivationOverflow,
    #[error(transparent)]
    Arithmetic(#[from] NeutroError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternKind {
    FixedPoint,
    LimitCycle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HiddenPattern {
    pub kind: PatternKind,
    /// One state for a fixed point, the repeating segment for a cycle.
    pub states: Vec<Vec<TriState>>,
    /// Every visited state, ending with the first repeated one.
    pub trace: Vec<Vec<TriState>>,
    pub iterations: usize,
}

impl HiddenPattern {
    pub fn terminal(&self) -> &[TriState] {
        self.states.last().expect("pattern has at least one state")
    }
}

/// Which space a relational seed lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Domain,
    Range,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairState {
    pub domain: Vec<TriState>,
    pub range: Vec<TriState>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationalPattern {
    pub kind: PatternKind,
    pub seed_side: Side,
    pub pairs: Vec<PairState>,
    pub trace: Vec<PairState>,
    pub iterations: usize,
}

impl RelationalPattern {
    pub fn terminal(&self) -> &PairState {
        self.pairs.last().expect("pattern has at least one pair")
    }
}

fn check_policy(p: &ThresholdPolicy) -> Result<(), DynamicsError> {
    if p.is_valid() {
        Ok(())
    } else {
        Err(DynamicsError::BadPolicy(p.k_on, p.k_indet))
    }
}

/// Collapses every coordinate, then forces the clamp set ON.
pub fn threshold_update(raw: &[NeutroValue], prev: &StateVector, p: &ThresholdPolicy) -> StateVector {
    let mut states: Vec<TriState> = raw.iter().map(|&v| collapse(v, p)).collect();
    for &c in &prev.clamp {
        states[c] = TriState::On;
    }
    StateVector {
        states,
        clamp: prev.clamp.clone(),
    }
}

/// x . m via the column view of m.
fn product(cols: &[Vec<NeutroValue>], x: &[TriState]) -> Result<Vec<NeutroValue>, NeutroError> {
    cols.iter().map(|c| neutro_dot(c, x)).collect()
}

fn columns(m: &ConnectionMatrix) -> Vec<Vec<NeutroValue>> {
    (0..m.n_cols()).map(|j| m.column(j)).collect()
}

fn rows(m: &ConnectionMatrix) -> Vec<Vec<NeutroValue>> {
    (0..m.n_rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Splits a history at the first revisit of `next`.
fn close<T: Clone + Eq + std::hash::Hash>(
    history: &[T],
    seen: &HashMap<T, usize>,
    next: &T,
) -> Option<(PatternKind, Vec<T>)> {
    let &i = seen.get(next)?;
    if i + 1 == history.len() {
        Some((PatternKind::FixedPoint, vec![history[i].clone()]))
    } else {
        Some((PatternKind::LimitCycle, history[i..].to_vec()))
    }
}

pub fn step_cognitive(
    m: &ConnectionMatrix,
    x: &StateVector,
    p: &ThresholdPolicy,
) -> Result<StateVector, DynamicsError> {
    let raw = product(&columns(m), &x.states)?;
    Ok(threshold_update(&raw, x, p))
}

pub fn run_cognitive(
    m: &ConnectionMatrix,
    x0: &StateVector,
    p: &ThresholdPolicy,
    max_iters: usize,
) -> Result<HiddenPattern, DynamicsError> {
    check_policy(p)?;
    if max_iters == 0 {
        return Err(DynamicsError::ZeroIters);
    }
    if m.n_rows() != m.n_cols() {
        return Err(DynamicsError::NotSquare(m.n_rows(), m.n_cols()));
    }
    if x0.len() != m.n_rows() {
        return Err(DynamicsError::LengthMismatch {
            want: m.n_rows(),
            got: x0.len(),
        });
    }
    let cols = columns(m);
    let mut x = x0.clone();
    for &c in &x.clamp {
        x.states[c] = TriState::On;
    }
    let mut history = vec![x.states.clone()];
    let mut seen = HashMap::from([(x.states.clone(), 0usize)]);
    for k in 1..=max_iters {
        let raw = product(&cols, &x.states)?;
        x = threshold_update(&raw, &x, p);
        if let Some((kind, states)) = close(&history, &seen, &x.states) {
            history.push(x.states);
            return Ok(HiddenPattern {
                kind,
                states,
                trace: history,
                iterations: k,
            });
        }
        seen.insert(x.states.clone(), history.len());
        history.push(x.states.clone());
    }
    Err(DynamicsError::NonConvergence(max_iters))
}

/// Alternates through m and its transpose, clamping only the seeded side.
pub fn run_relational(
    m: &ConnectionMatrix,
    seed: &StateVector,
    side: Side,
    p: &ThresholdPolicy,
    max_iters: usize,
) -> Result<RelationalPattern, DynamicsError> {
    check_policy(p)?;
    if max_iters == 0 {
        return Err(DynamicsError::ZeroIters);
    }
    let (fwd, back) = match side {
        Side::Domain => (columns(m), rows(m)),
        Side::Range => (rows(m), columns(m)),
    };
    let want = match side {
        Side::Domain => m.n_rows(),
        Side::Range => m.n_cols(),
    };
    if seed.len() != want {
        return Err(DynamicsError::LengthMismatch { want, got: seed.len() });
    }
    let free = StateVector {
        states: Vec::new(),
        clamp: BTreeSet::new(),
    };
    let mut s = seed.clone();
    for &c in &s.clamp {
        s.states[c] = TriState::On;
    }
    let mut o = threshold_update(&product(&fwd, &s.states)?, &free, p);
    let pair = |s: &StateVector, o: &StateVector| match side {
        Side::Domain => PairState {
            domain: s.states.clone(),
            range: o.states.clone(),
        },
        Side::Range => PairState {
            domain: o.states.clone(),
            range: s.states.clone(),
        },
    };
    let first = pair(&s, &o);
    let mut seen = HashMap::from([(first.clone(), 0usize)]);
    let mut history = vec![first];
    for k in 1..=max_iters {
        s = threshold_update(&product(&back, &o.states)?, &s, p);
        o = threshold_update(&product(&fwd, &s.states)?, &free, p);
        let next = pair(&s, &o);
        if let Some((kind, pairs)) = close(&history, &seen, &next) {
            history.push(next);
            return Ok(RelationalPattern {
                kind,
                seed_side: side,
                pairs,
                trace: history,
                iterations: k,
            });
        }
        seen.insert(next.clone(), history.len());
        history.push(next);
    }
    Err(DynamicsError::NonConvergence(max_iters))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BamMode {
    #[default]
    Binary,
    Bipolar,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BamConfig {
    /// Per row-neuron thresholds; empty means all zero.
    pub thresholds_u: Vec<i64>,
    /// Per column-neuron thresholds; empty means all zero.
    pub thresholds_v: Vec<i64>,
    pub mode: BamMode,
    /// Initial column-field signal; defaults to all OFF.
    pub initial_y: Option<Vec<TriState>>,
}

pub fn bam_signal(x: i64, threshold: i64, prev: Activation, mode: BamMode) -> Activation {
    if x > threshold {
        Activation::On
    } else if x == threshold {
        prev
    } else {
        match mode {
            BamMode::Binary => Activation::Off,
            BamMode::Bipolar => Activation::Inhibited,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BamStep {
    /// Activation reaching the row field, `None` for the external input.
    pub domain_activation: Vec<i64>,
    pub range_activation: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BamRun {
    pub pattern: RelationalPattern,
    /// Aligned with `pattern.trace`.
    pub steps: Vec<BamStep>,
}

fn signal_weight(a: Activation) -> i64 {
    match a {
        Activation::On => 1,
        Activation::Inhibited => -1,
        Activation::Off | Activation::Indet => 0,
    }
}

fn bam_product(lines: &[Vec<i64>], s: &[Activation]) -> Result<Vec<i64>, DynamicsError> {
    lines
        .iter()
        .map(|l| {
            l.iter().zip(s).try_fold(0i64, |acc, (&w, &a)| {
                acc.checked_add(w * signal_weight(a))
                    .ok_or(DynamicsError::ActivationOverflow)
            })
        })
        .collect()
}

fn signals(act: &[i64], thr: &[i64], prev: &[Activation], mode: BamMode) -> Vec<Activation> {
    act.iter()
        .enumerate()
        .map(|(i, &a)| bam_signal(a, thr.get(i).copied().unwrap_or(0), prev[i], mode))
        .collect()
}

fn states(s: &[Activation]) -> Vec<TriState> {
    s.iter().map(|a| a.state()).collect()
}

pub fn run_bam(
    m: &ConnectionMatrix,
    x_input: &[i64],
    cfg: &BamConfig,
    max_iters: usize,
) -> Result<BamRun, DynamicsError> {
    if max_iters == 0 {
        return Err(DynamicsError::ZeroIters);
    }
    let (n, p) = (m.n_rows(), m.n_cols());
    let check = |want: usize, got: usize| {
        if got == want || got == 0 {
            Ok(())
        } else {
            Err(DynamicsError::LengthMismatch { want, got })
        }
    };
    if x_input.len() != n {
        return Err(DynamicsError::LengthMismatch {
            want: n,
            got: x_input.len(),
        });
    }
    check(n, cfg.thresholds_u.len())?;
    check(p, cfg.thresholds_v.len())?;
    let mut cols = vec![vec![0i64; n]; p];
    let mut rows = vec![vec![0i64; p]; n];
    for i in 0..n {
        for j in 0..p {
            let v = m.get(i, j);
            if v.has_indet() {
                return Err(DynamicsError::NonIntegerWeight(v));
            }
            cols[j][i] = v.real as i64;
            rows[i][j] = v.real as i64;
        }
    }
    let mut sx = signals(x_input, &cfg.thresholds_u, &vec![Activation::Off; n], cfg.mode);
    let mut sy: Vec<Activation> = match &cfg.initial_y {
        Some(y) => {
            check(p, y.len())?;
            y.iter()
                .map(|s| match s {
                    TriState::On => Activation::On,
                    _ => Activation::Off,
                })
                .collect()
        }
        None => vec![Activation::Off; p],
    };
    let first = (sx.clone(), sy.clone());
    let mut seen = HashMap::from([(first.clone(), 0usize)]);
    let mut history = vec![first];
    let mut steps = vec![BamStep {
        domain_activation: x_input.to_vec(),
        range_activation: None,
    }];
    let to_pair = |(x, y): &(Vec<Activation>, Vec<Activation>)| PairState {
        domain: states(x),
        range: states(y),
    };
    for k in 1..=max_iters {
        let ay = bam_product(&cols, &sx)?;
        sy = signals(&ay, &cfg.thresholds_v, &sy, cfg.mode);
        let ax = bam_product(&rows, &sy)?;
        sx = signals(&ax, &cfg.thresholds_u, &sx, cfg.mode);
        steps.push(BamStep {
            domain_activation: ax,
            range_activation: Some(ay),
        });
        let next = (sx.clone(), sy.clone());
        if let Some((kind, pairs)) = close(&history, &seen, &next) {
            history.push(next);
            return Ok(BamRun {
                pattern: RelationalPattern {
                    kind,
                    seed_side: Side::Domain,
                    pairs: pairs.iter().map(to_pair).collect(),
                    trace: history.iter().map(to_pair).collect(),
                    iterations: k,
                },
                steps,
            });
        }
        seen.insert(next.clone(), history.len());
        history.push(next);
    }
    Err(DynamicsError::NonConvergence(max_iters))
}
