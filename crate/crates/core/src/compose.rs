//! Combined, block-assembled and linked maps.

use thiserror::Error;

use crate::concept::{ConceptError, ConceptSpace, ConnectionMatrix, MatrixKind};
use crate::neutro::{collapse, NeutroError, NeutroValue, ThresholdPolicy, TieRule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("nothing to combine")]
    Empty,
    #[error("matrix {index} does not share kind and spaces with the first")]
    Mismatch { index: usize },
    #[error("block {index}: {reason}")]
    BadBlock { index: usize, reason: String },
    #[error("blocks {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("link needs a's columns to equal b's rows")]
    LinkSpaces,
    #[error(transparent)]
    Concept(#[from] ConceptError),
    #[error(transparent)]
    Arithmetic(#[from] NeutroError),
}

/// Entrywise sum of matrices over identical spaces.
pub fn combine(ms: &[ConnectionMatrix]) -> Result<ConnectionMatrix, ComposeError> {
    let first = ms.first().ok_or(ComposeError::Empty)?;
    let mut out = first.clone();
    for (index, m) in ms.iter().enumerate().skip(1) {
        if m.kind != first.kind || m.rows != first.rows || m.cols != first.cols {
            return Err(ComposeError::Mismatch { index });
        }
        for i in 0..out.n_rows() {
            for j in 0..out.n_cols() {
                out.set(i, j, out.get(i, j).checked_add(m.get(i, j))?);
            }
        }
    }
    Ok(out)
}

/// Index sets a block occupies in the target matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockClass {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl BlockClass {
    fn touches(&self, other: &BlockClass) -> bool {
        self.rows.iter().any(|r| other.rows.contains(r)) && self.cols.iter().any(|c| other.cols.contains(c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPlan {
    pub kind: MatrixKind,
    pub rows: ConceptSpace,
    pub cols: ConceptSpace,
    pub classes: Vec<BlockClass>,
    pub overlap_allowed: bool,
}

impl BlockPlan {
    /// Classes from each block's own labels, resolved against the target spaces.
    pub fn from_blocks(
        kind: MatrixKind,
        rows: ConceptSpace,
        cols: ConceptSpace,
        blocks: &[ConnectionMatrix],
        overlap_allowed: bool,
    ) -> Result<Self, ComposeError> {
        let mut classes = Vec::with_capacity(blocks.len());
        for b in blocks {
            let r = b
                .rows
                .labels()
                .iter()
                .map(|l| rows.resolve(l))
                .collect::<Result<_, _>>()?;
            let c = b
                .cols
                .labels()
                .iter()
                .map(|l| cols.resolve(l))
                .collect::<Result<_, _>>()?;
            classes.push(BlockClass { rows: r, cols: c });
        }
        Ok(BlockPlan {
            kind,
            rows,
            cols,
            classes,
            overlap_allowed,
        })
    }

    pub fn check(&self) -> Result<(), ComposeError> {
        for (index, c) in self.classes.iter().enumerate() {
            let bad = |reason: &str| ComposeError::BadBlock {
                index,
                reason: reason.to_string(),
            };
            if c.rows.is_empty() || c.cols.is_empty() {
                return Err(bad("empty class"));
            }
            if c.rows.iter().any(|&r| r >= self.rows.len()) || c.cols.iter().any(|&j| j >= self.cols.len()) {
                return Err(bad("index out of range"));
            }
            if self.kind == MatrixKind::Cognitive && c.rows != c.cols {
                return Err(bad("cognitive block must be square over one class"));
            }
        }
        if !self.overlap_allowed {
            for a in 0..self.classes.len() {
                for b in a + 1..self.classes.len() {
                    if self.classes[a].touches(&self.classes[b]) {
                        return Err(ComposeError::Overlap(a, b));
                    }
                }
            }
        }
        Ok(())
    }

    /// True when every class has the same row count and the same column count.
    pub fn is_equal_sized(&self) -> bool {
        self.classes
            .windows(2)
            .all(|w| w[0].rows.len() == w[1].rows.len() && w[0].cols.len() == w[1].cols.len())
    }
}

fn place(plan: &BlockPlan, blocks: &[ConnectionMatrix]) -> Result<ConnectionMatrix, ComposeError> {
    plan.check()?;
    if blocks.len() != plan.classes.len() {
        return Err(ComposeError::BadBlock {
            index: blocks.len().min(plan.classes.len()),
            reason: format!("{} blocks for {} classes", blocks.len(), plan.classes.len()),
        });
    }
    let mut out = ConnectionMatrix::zeros(plan.kind, plan.rows.clone(), plan.cols.clone());
    for (index, (c, b)) in plan.classes.iter().zip(blocks).enumerate() {
        if b.n_rows() != c.rows.len() || b.n_cols() != c.cols.len() {
            return Err(ComposeError::BadBlock {
                index,
                reason: format!(
                    "sub-matrix is {}x{}, class is {}x{}",
                    b.n_rows(),
                    b.n_cols(),
                    c.rows.len(),
                    c.cols.len()
                ),
            });
        }
        for (bi, &i) in c.rows.iter().enumerate() {
            for (bj, &j) in c.cols.iter().enumerate() {
                out.set(i, j, out.get(i, j).checked_add(b.get(bi, bj))?);
            }
        }
    }
    Ok(out)
}

pub fn assemble_disjoint(plan: &BlockPlan, blocks: &[ConnectionMatrix]) -> Result<ConnectionMatrix, ComposeError> {
    let strict = BlockPlan {
        overlap_allowed: false,
        ..plan.clone()
    };
    place(&strict, blocks)
}

/// Overlapping cells accumulate.
pub fn assemble_overlap(plan: &BlockPlan, blocks: &[ConnectionMatrix]) -> Result<ConnectionMatrix, ComposeError> {
    let loose = BlockPlan {
        overlap_allowed: true,
        ..plan.clone()
    };
    place(&loose, blocks)
}

/// Per-entry collapse applied to a linked product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LinkRule {
    /// Unit-threshold collapse with ties going to I.
    #[default]
    Neutro,
    /// Real part >= 1 gives 1, otherwise any I gives I.
    RealFirst,
}

impl LinkRule {
    pub fn from_name(s: &str) -> Option<LinkRule> {
        match s {
            "neutro" => Some(LinkRule::Neutro),
            "real-first" => Some(LinkRule::RealFirst),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LinkRule::Neutro => "neutro",
            LinkRule::RealFirst => "real-first",
        }
    }
}

pub fn link_collapse(v: NeutroValue, rule: LinkRule) -> NeutroValue {
    match rule {
        LinkRule::Neutro => collapse(v, &ThresholdPolicy::simple().tie(TieRule::Indet)).lift(),
        LinkRule::RealFirst => {
            if v.real >= 1 {
                NeutroValue::ONE
            } else if v.indet >= 1 {
                NeutroValue::I
            } else {
                NeutroValue::ZERO
            }
        }
    }
}

/// Product a.b collapsed entrywise; the result relates a's rows to b's columns.
pub fn link(a: &ConnectionMatrix, b: &ConnectionMatrix, rule: LinkRule) -> Result<ConnectionMatrix, ComposeError> {
    if a.cols != b.rows {
        return Err(ComposeError::LinkSpaces);
    }
    let mut out = ConnectionMatrix::zeros(MatrixKind::Relational, a.rows.clone(), b.cols.clone());
    for i in 0..a.n_rows() {
        for j in 0..b.n_cols() {
            let mut acc = NeutroValue::ZERO;
            for k in 0..a.n_cols() {
                acc = acc.checked_add(a.get(i, k).checked_mul(b.get(k, j))?)?;
            }
            out.set(i, j, link_collapse(acc, rule));
        }
    }
    Ok(out)
}
