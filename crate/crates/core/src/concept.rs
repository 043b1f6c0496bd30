//! Labelled concept spaces, connection matrices and state vectors.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::neutro::{NeutroValue, TriState};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConceptError {
    #[error("empty concept label")]
    EmptyLabel,
    #[error("duplicate concept label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown concept label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("self-loop on `{0}` in a cognitive map")]
    SelfLoop(String),
    #[error("grid is {got_rows}x{got_cols}, spaces need {rows}x{cols}")]
    Shape {
        rows: usize,
        cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
}

/// Ordered, duplicate-free list of concept names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptSpace {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl ConceptSpace {
    pub fn new<I, S>(labels: I) -> Result<Self, ConceptError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = ConceptSpace {
            labels: Vec::new(),
            index: HashMap::new(),
        };
        for l in labels {
            let l = l.into();
            if l.is_empty() {
                return Err(ConceptError::EmptyLabel);
            }
            if out.index.contains_key(&l) {
                return Err(ConceptError::DuplicateLabel(l));
            }
            out.index.insert(l.clone(), out.labels.len());
            out.labels.push(l);
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn resolve(&self, label: &str) -> Result<usize, ConceptError> {
        self.position(label)
            .ok_or_else(|| ConceptError::UnknownLabel(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    pub fn is_disjoint(&self, other: &ConceptSpace) -> bool {
        self.labels.iter().all(|l| !other.contains(l))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    Cognitive,
    Relational,
    Bam,
}

impl MatrixKind {
    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::Cognitive => "cognitive",
            MatrixKind::Relational => "relational",
            MatrixKind::Bam => "bam",
        }
    }

    pub fn from_name(s: &str) -> Option<MatrixKind> {
        match s {
            "cognitive" => Some(MatrixKind::Cognitive),
            "relational" => Some(MatrixKind::Relational),
            "bam" => Some(MatrixKind::Bam),
            _ => None,
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Dense labelled matrix. For cognitive maps `cols` is the same space as
/// `rows`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionMatrix {
    pub kind: MatrixKind,
    pub rows: ConceptSpace,
    pub cols: ConceptSpace,
    /// Declared BAM scale s, entries must lie in [-s, s].
    pub scale: Option<i32>,
    entries: Vec<NeutroValue>,
}

impl ConnectionMatrix {
    pub fn from_grid(
        kind: MatrixKind,
        rows: ConceptSpace,
        cols: ConceptSpace,
        grid: Vec<Vec<NeutroValue>>,
    ) -> Result<Self, ConceptError> {
        let shape_err = |got_rows, got_cols| ConceptError::Shape {
            rows: rows.len(),
            cols: cols.len(),
            got_rows,
            got_cols,
        };
        if grid.len() != rows.len() {
            let got_cols = grid.first().map_or(0, Vec::len);
            return Err(shape_err(grid.len(), got_cols));
        }
        if let Some(bad) = grid.iter().find(|r| r.len() != cols.len()) {
            return Err(shape_err(grid.len(), bad.len()));
        }
        let entries = grid.into_iter().flatten().collect();
        Ok(ConnectionMatrix {
            kind,
            rows,
            cols,
            scale: None,
            entries,
        })
    }

    pub fn zeros(kind: MatrixKind, rows: ConceptSpace, cols: ConceptSpace) -> Self {
        let n = rows.len() * cols.len();
        ConnectionMatrix {
            kind,
            rows,
            cols,
            scale: None,
            entries: vec![NeutroValue::ZERO; n],
        }
    }

    /// Square matrix over one space.
    pub fn cognitive(space: ConceptSpace, grid: Vec<Vec<NeutroValue>>) -> Result<Self, ConceptError> {
        ConnectionMatrix::from_grid(MatrixKind::Cognitive, space.clone(), space, grid)
    }

    pub fn with_scale(mut self, scale: i32) -> Self {
        self.scale = Some(scale);
        self
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, i: usize, j: usize) -> NeutroValue {
        self.entries[i * self.cols.len() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: NeutroValue) {
        let w = self.cols.len();
        self.entries[i * w + j] = v;
    }

    pub fn entry(&self, row: &str, col: &str) -> Result<NeutroValue, ConceptError> {
        Ok(self.get(self.rows.resolve(row)?, self.cols.resolve(col)?))
    }

    pub fn row(&self, i: usize) -> &[NeutroValue] {
        let w = self.cols.len();
        &self.entries[i * w..(i + 1) * w]
    }

    pub fn column(&self, j: usize) -> Vec<NeutroValue> {
        (0..self.rows.len()).map(|i| self.get(i, j)).collect()
    }

    pub fn grid(&self) -> Vec<Vec<NeutroValue>> {
        (0..self.rows.len()).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn has_indet(&self) -> bool {
        self.entries.iter().any(|v| v.has_indet())
    }

    /// Rows and columns swapped. A cognitive map stays cognitive.
    pub fn transpose(&self) -> ConnectionMatrix {
        let mut t = ConnectionMatrix::zeros(self.kind, self.cols.clone(), self.rows.clone());
        t.scale = self.scale;
        for i in 0..self.n_rows() {
            for j in 0..self.n_cols() {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Nonzero entries as (row label, col label, weight), row-major.
    pub fn edges(&self) -> Vec<(String, String, NeutroValue)> {
        let mut out = Vec::new();
        for i in 0..self.n_rows() {
            for j in 0..self.n_cols() {
                let v = self.get(i, j);
                if !v.is_zero() {
                    out.push((self.rows.label(i).to_string(), self.cols.label(j).to_string(), v));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotSquare {
        rows: usize,
        cols: usize,
    },
    SpacesDiffer,
    NonzeroDiagonal {
        label: String,
        value: NeutroValue,
    },
    LabelCollision {
        label: String,
    },
    MissingScale,
    NotInteger {
        row: String,
        col: String,
        value: NeutroValue,
    },
    OutOfScale {
        row: String,
        col: String,
        value: NeutroValue,
        scale: i32,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotSquare { rows, cols } => {
                write!(f, "cognitive matrix is not square ({rows}x{cols})")
            }
            Violation::SpacesDiffer => f.write_str("cognitive matrix has different row and column labels"),
            Violation::NonzeroDiagonal { label, value } => {
                write!(f, "nonzero diagonal entry {value} at ({label}, {label})")
            }
            Violation::LabelCollision { label } => {
                write!(f, "label `{label}` appears in both row and column spaces")
            }
            Violation::MissingScale => f.write_str("bam matrix has no declared scale"),
            Violation::NotInteger { row, col, value } => {
                write!(f, "bam entry {value} at ({row}, {col}) is not a plain integer")
            }
            Violation::OutOfScale { row, col, value, scale } => {
                write!(f, "bam entry {value} at ({row}, {col}) is outside [-{scale}, {scale}]")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate(m: &ConnectionMatrix) -> ValidationReport {
    let mut v = Vec::new();
    match m.kind {
        MatrixKind::Cognitive => {
            if m.n_rows() != m.n_cols() {
                v.push(Violation::NotSquare {
                    rows: m.n_rows(),
                    cols: m.n_cols(),
                });
            } else {
                if m.rows != m.cols {
                    v.push(Violation::SpacesDiffer);
                }
                for i in 0..m.n_rows() {
                    let d = m.get(i, i);
                    if !d.is_zero() {
                        v.push(Violation::NonzeroDiagonal {
                            label: m.rows.label(i).to_string(),
                            value: d,
                        });
                    }
                }
            }
        }
        MatrixKind::Relational => {
            for l in m.rows.labels() {
                if m.cols.contains(l) {
                    v.push(Violation::LabelCollision { label: l.clone() });
                }
            }
        }
        MatrixKind::Bam => {
            if m.scale.is_none() {
                v.push(Violation::MissingScale);
            }
            let s = m.scale.unwrap_or(i32::MAX);
            for i in 0..m.n_rows() {
                for j in 0..m.n_cols() {
                    let e = m.get(i, j);
                    let (row, col) = (m.rows.label(i).to_string(), m.cols.label(j).to_string());
                    if e.has_indet() {
                        v.push(Violation::NotInteger { row, col, value: e });
                    } else if m.scale.is_some() && (e.real < -s || e.real > s) {
                        v.push(Violation::OutOfScale {
                            row,
                            col,
                            value: e,
                            scale: s,
                        });
                    }
                }
            }
        }
    }
    ValidationReport { violations: v }
}

/// Builds a matrix from an edge list; unlisted entries are zero.
pub fn from_edges(
    kind: MatrixKind,
    rows: ConceptSpace,
    cols: ConceptSpace,
    edges: &[(&str, &str, NeutroValue)],
) -> Result<ConnectionMatrix, ConceptError> {
    let mut m = ConnectionMatrix::zeros(kind, rows, cols);
    let mut seen = BTreeSet::new();
    for &(from, to, w) in edges {
        let i = m.rows.resolve(from)?;
        let j = m.cols.resolve(to)?;
        if kind == MatrixKind::Cognitive && from == to {
            return Err(ConceptError::SelfLoop(from.to_string()));
        }
        if !seen.insert((i, j)) {
            return Err(ConceptError::DuplicateEdge(from.to_string(), to.to_string()));
        }
        m.set(i, j, w);
    }
    Ok(m)
}

/// Tri-state activation vector; `clamp` holds the coordinates re-asserted ON
/// after every update.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateVector {
    pub states: Vec<TriState>,
    pub clamp: BTreeSet<usize>,
}

impl StateVector {
    pub fn off(n: usize) -> Self {
        StateVector {
            states: vec![TriState::Off; n],
            clamp: BTreeSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn tokens(&self) -> String {
        tokens(&self.states)
    }
}

pub fn tokens(states: &[TriState]) -> String {
    states.iter().map(|s| s.token()).collect::<Vec<_>>().join(" ")
}

/// All OFF except `on`, which are ON and clamped.
pub fn zero_state(space: &ConceptSpace, on: &[&str]) -> Result<StateVector, ConceptError> {
    let mut s = StateVector::off(space.len());
    for l in on {
        let i = space.resolve(l)?;
        s.states[i] = TriState::On;
        s.clamp.insert(i);
    }
    Ok(s)
}
