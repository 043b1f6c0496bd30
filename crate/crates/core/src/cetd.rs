//! Raw counts to ATD, RTD bands, and the cumulative CETD profile.

use thiserror::Error;

/// Slack on band comparisons so values printed at fixed precision land on
/// the boundary they were meant to hit.
const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CetdError {
    #[error("table has no rows")]
    Empty,
    #[error("table has no attribute columns")]
    NoColumns,
    #[error("row `{label}` has {got} counts, header has {want}")]
    RowWidth { label: String, want: usize, got: usize },
    #[error("row `{0}` has a non-positive interval")]
    BadInterval(String),
    #[error("{0} labels and {1} rows")]
    LabelCount(usize, usize),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("alpha {0} is outside [0, 1]")]
    BadAlpha(f64),
    #[error("at least one alpha is required")]
    NoAlphas,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawDataTable {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    intervals: Vec<f64>,
    counts: Vec<Vec<u64>>,
}

impl RawDataTable {
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        intervals: Vec<f64>,
        counts: Vec<Vec<u64>>,
    ) -> Result<Self, CetdError> {
        if counts.is_empty() {
            return Err(CetdError::Empty);
        }
        if col_labels.is_empty() {
            return Err(CetdError::NoColumns);
        }
        if row_labels.len() != counts.len() || intervals.len() != counts.len() {
            return Err(CetdError::LabelCount(
                row_labels.len().min(intervals.len()),
                counts.len(),
            ));
        }
        for (i, l) in col_labels.iter().enumerate() {
            if col_labels[..i].contains(l) {
                return Err(CetdError::DuplicateLabel(l.clone()));
            }
        }
        for (i, (l, row)) in row_labels.iter().zip(&counts).enumerate() {
            if row_labels[..i].contains(l) {
                return Err(CetdError::DuplicateLabel(l.clone()));
            }
            if row.len() != col_labels.len() {
                return Err(CetdError::RowWidth {
                    label: l.clone(),
                    want: col_labels.len(),
                    got: row.len(),
                });
            }
            if !intervals[i].is_finite() || intervals[i] <= 0.0 {
                return Err(CetdError::BadInterval(l.clone()));
            }
        }
        Ok(RawDataTable {
            row_labels,
            col_labels,
            intervals,
            counts,
        })
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn intervals(&self) -> &[f64] {
        &self.intervals
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }
}

pub type RealMatrix = Vec<Vec<f64>>;
pub type BandMatrix = Vec<Vec<i32>>;

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnStats {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

/// Half-away-from-zero rounding to `d` decimals.
pub fn round_to(x: f64, d: u32) -> f64 {
    let s = 10f64.powi(d as i32);
    (x * s).round() / s
}

pub fn atd(raw: &RawDataTable) -> RealMatrix {
    raw.counts
        .iter()
        .zip(&raw.intervals)
        .map(|(row, &len)| row.iter().map(|&c| c as f64 / len).collect())
        .collect()
}

/// Column means and population standard deviations.
pub fn column_stats(atd: &RealMatrix) -> Result<ColumnStats, CetdError> {
    let m = atd.len();
    if m == 0 {
        return Err(CetdError::Empty);
    }
    let w = atd[0].len();
    let mut mean = vec![0.0; w];
    let mut std = vec![0.0; w];
    for j in 0..w {
        let mu = atd.iter().map(|r| r[j]).sum::<f64>() / m as f64;
        let var = atd.iter().map(|r| (r[j] - mu) * (r[j] - mu)).sum::<f64>() / m as f64;
        mean[j] = mu;
        std[j] = var.sqrt();
    }
    Ok(ColumnStats { mean, std })
}

fn check_alpha(alpha: f64) -> Result<(), CetdError> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(CetdError::BadAlpha(alpha))
    }
}

pub fn band(a: f64, mu: f64, sigma: f64, alpha: f64) -> i32 {
    if a <= mu - alpha * sigma + EPS {
        -1
    } else if a > mu + alpha * sigma + EPS {
        1
    } else {
        0
    }
}

pub fn rtd(atd: &RealMatrix, stats: &ColumnStats, alpha: f64) -> Result<BandMatrix, CetdError> {
    check_alpha(alpha)?;
    Ok(atd
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .map(|(j, &a)| band(a, stats.mean[j], stats.std[j], alpha))
                .collect()
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CetdParams {
    pub alphas: Vec<f64>,
    /// Round ATD entries and column stats to this many decimals before banding.
    pub decimals: Option<u32>,
}

impl CetdParams {
    pub fn new(alphas: Vec<f64>) -> Self {
        CetdParams { alphas, decimals: None }
    }

    pub fn decimals(mut self, d: u32) -> Self {
        self.decimals = Some(d);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CetdProfile {
    pub atd: RealMatrix,
    pub stats: ColumnStats,
    pub rtds: Vec<(f64, BandMatrix)>,
    pub cetd: BandMatrix,
    pub row_sums: Vec<i32>,
    /// Row indices reaching the maximum row sum.
    pub peak: Vec<usize>,
}

pub fn row_sums(m: &BandMatrix) -> Vec<i32> {
    m.iter().map(|r| r.iter().sum()).collect()
}

/// Indices of every maximal entry.
pub fn argmax_all(xs: &[i32]) -> Vec<usize> {
    match xs.iter().max() {
        Some(&top) => (0..xs.len()).filter(|&i| xs[i] == top).collect(),
        None => Vec::new(),
    }
}

pub fn cetd_profile(raw: &RawDataTable, params: &CetdParams) -> Result<CetdProfile, CetdError> {
    if params.alphas.is_empty() {
        return Err(CetdError::NoAlphas);
    }
    for &a in &params.alphas {
        check_alpha(a)?;
    }
    let mut a = atd(raw);
    if let Some(d) = params.decimals {
        for r in &mut a {
            for x in r.iter_mut() {
                *x = round_to(*x, d);
            }
        }
    }
    let mut stats = column_stats(&a)?;
    if let Some(d) = params.decimals {
        for x in stats.mean.iter_mut().chain(stats.std.iter_mut()) {
            *x = round_to(*x, d);
        }
    }
    let w = raw.col_labels.len();
    let mut cetd = vec![vec![0; w]; a.len()];
    let mut rtds = Vec::with_capacity(params.alphas.len());
    for &alpha in &params.alphas {
        let r = rtd(&a, &stats, alpha)?;
        for (crow, rrow) in cetd.iter_mut().zip(&r) {
            for (c, e) in crow.iter_mut().zip(rrow) {
                *c += e;
            }
        }
        rtds.push((alpha, r));
    }
    let sums = row_sums(&cetd);
    let peak = argmax_all(&sums);
    Ok(CetdProfile {
        atd: a,
        stats,
        rtds,
        cetd,
        row_sums: sums,
        peak,
    })
}

impl CetdProfile {
    pub fn peak_labels<'a>(&self, raw: &'a RawDataTable) -> Vec<&'a str> {
        self.peak.iter().map(|&i| raw.row_labels[i].as_str()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table(intervals: &[f64], counts: &[&[u64]]) -> RawDataTable {
        RawDataTable::new(
            (0..counts.len()).map(|i| format!("r{i}")).collect(),
            (0..counts[0].len()).map(|j| format!("c{j}")).collect(),
            intervals.to_vec(),
            counts.iter().map(|r| r.to_vec()).collect(),
        )
        .unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn atd_examples() {
        let t = table(&[10.0, 5.0], &[&[22, 10, 21, 20, 18, 12], &[17, 4, 14, 15, 12, 8]]);
        let a = atd(&t);
        assert!(close(&a[0], &[2.2, 1.0, 2.1, 2.0, 1.8, 1.2], 1e-12));
        assert!(close(&a[1], &[3.4, 0.8, 2.8, 3.0, 2.4, 1.6], 1e-12));
        let z = table(&[3.0], &[&[0, 0]]);
        assert_eq!(atd(&z), vec![vec![0.0, 0.0]]);
    }

    #[test]
    fn population_std() {
        let s = column_stats(&vec![vec![1.0, 5.0], vec![3.0, 5.0]]).unwrap();
        assert_eq!(s.mean, vec![2.0, 5.0]);
        assert_eq!(s.std, vec![1.0, 0.0]);
        assert_eq!(column_stats(&Vec::new()).unwrap_err(), CetdError::Empty);
    }

    #[test]
    fn band_edges() {
        let a = vec![vec![1.0, 2.0], vec![3.0, 2.0]];
        let s = column_stats(&a).unwrap();
        // alpha 0: point band, mean maps to -1
        assert_eq!(rtd(&a, &s, 0.0).unwrap(), vec![vec![-1, -1], vec![1, -1]]);
        // upper boundary (mu + sigma = 3) stays in the zero band
        assert_eq!(rtd(&a, &s, 1.0).unwrap(), vec![vec![-1, -1], vec![0, -1]]);
        assert_eq!(rtd(&a, &s, 1.5).unwrap_err(), CetdError::BadAlpha(1.5));
    }

    #[test]
    fn single_alpha_profile_is_its_rtd() {
        let t = table(&[1.0, 2.0, 4.0], &[&[1, 2], &[6, 2], &[4, 9]]);
        let p = cetd_profile(&t, &CetdParams::new(vec![0.4])).unwrap();
        assert_eq!(p.cetd, p.rtds[0].1);
        assert_eq!(
            cetd_profile(&t, &CetdParams::new(vec![])).unwrap_err(),
            CetdError::NoAlphas
        );
    }

    #[test]
    fn peak_reports_ties() {
        assert_eq!(argmax_all(&[3, 7, -1, 7]), vec![1, 3]);
        assert_eq!(argmax_all(&[]), Vec::<usize>::new());
    }

    #[test]
    fn rounding_half_away() {
        assert_eq!(round_to(1.4545, 2), 1.45);
        assert_eq!(round_to(0.125, 2), 0.13);
        assert_eq!(round_to(-0.125, 2), -0.13);
    }

    #[test]
    fn table_validation() {
        let bad = RawDataTable::new(vec!["a".into()], vec!["x".into()], vec![0.0], vec![vec![1]]);
        assert_eq!(bad.unwrap_err(), CetdError::BadInterval("a".into()));
        let bad = RawDataTable::new(vec!["a".into()], vec!["x".into(), "y".into()], vec![1.0], vec![vec![1]]);
        assert!(matches!(bad, Err(CetdError::RowWidth { .. })));
        let bad = RawDataTable::new(vec![], vec!["x".into()], vec![], vec![]);
        assert_eq!(bad.unwrap_err(), CetdError::Empty);
    }

    fn tables() -> impl Strategy<Value = RawDataTable> {
        (1usize..=6, 1usize..=5).prop_flat_map(|(m, w)| {
            (
                proptest::collection::vec(1u32..=12, m),
                proptest::collection::vec(proptest::collection::vec(0u64..=30, w), m),
            )
                .prop_map(move |(iv, counts)| {
                    RawDataTable::new(
                        (0..m).map(|i| format!("r{i}")).collect(),
                        (0..w).map(|j| format!("c{j}")).collect(),
                        iv.into_iter().map(f64::from).collect(),
                        counts,
                    )
                    .unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn cetd_entries_bounded(t in tables(), alphas in proptest::collection::vec(0.0f64..=1.0, 1..4)) {
            let p = cetd_profile(&t, &CetdParams::new(alphas.clone())).unwrap();
            let k = alphas.len() as i32;
            for r in &p.cetd {
                for &e in r { prop_assert!((-k..=k).contains(&e)); }
            }
            for (_, r) in &p.rtds {
                for row in r { for &e in row { prop_assert!((-1..=1).contains(&e)); } }
            }
        }

        #[test]
        fn zero_column_keeps_peak(t in tables(), alphas in proptest::collection::vec(0.0f64..=1.0, 1..4)) {
            let mut cols = t.col_labels().to_vec();
            cols.push("zero".into());
            let counts = t.counts().iter().map(|r| { let mut r = r.clone(); r.push(0); r }).collect();
            let wide = RawDataTable::new(t.row_labels().to_vec(), cols, t.intervals().to_vec(), counts).unwrap();
            let a = cetd_profile(&t, &CetdParams::new(alphas.clone())).unwrap();
            let b = cetd_profile(&wide, &CetdParams::new(alphas)).unwrap();
            prop_assert_eq!(a.peak, b.peak);
        }
    }
}
