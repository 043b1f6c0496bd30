//! Shared helpers: fixture access, in-process CLI runs, brute-force oracles
//! and the random-case generators behind the property suites.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use cogmap::cetd::{cetd_profile, CetdParams, RawDataTable};
use cogmap::compose::{assemble_disjoint, assemble_overlap, link, BlockPlan, LinkRule};
use cogmap::concept::{ConceptSpace, ConnectionMatrix, MatrixKind, StateVector};
use cogmap::dynamics::{run_cognitive, PatternKind};
use cogmap::io::scenario::load_matrix;
use cogmap::neutro::{NeutroValue, ThresholdPolicy, TriState};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(rel: &str) -> PathBuf {
    fixtures().join(rel)
}

pub fn mat(name: &str) -> ConnectionMatrix {
    let p = fixture(&format!("matrices/{name}"));
    load_matrix(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

pub fn cli(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["cogmap".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cogmap::cli::run_cli(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Every scenario under fixtures/scenarios, sorted by name.
pub fn scenarios() -> Vec<(String, PathBuf)> {
    let mut v: Vec<_> = std::fs::read_dir(fixture("scenarios"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .map(|p| (p.file_stem().unwrap().to_string_lossy().into_owned(), p))
        .collect();
    v.sort();
    v
}

pub fn expected(name: &str) -> String {
    std::fs::read_to_string(fixture(&format!("expected/{name}.out"))).unwrap()
}

pub fn states(tokens: &str) -> Vec<TriState> {
    tokens
        .split_whitespace()
        .map(|t| TriState::from_token(t).unwrap())
        .collect()
}

pub fn space(prefix: &str, n: usize) -> ConceptSpace {
    ConceptSpace::new((0..n).map(|i| format!("{prefix}{i}"))).unwrap()
}

// ---- oracles

/// `(real, indet)` pairs multiplied with I*I = I.
fn pmul(x: (i64, i64), y: (i64, i64)) -> (i64, i64) {
    (x.0 * y.0, x.0 * y.1 + x.1 * y.0 + x.1 * y.1)
}

fn lift(s: TriState) -> (i64, i64) {
    match s {
        TriState::Off => (0, 0),
        TriState::On => (1, 0),
        TriState::Indet => (0, 1),
    }
}

/// Default collapse: larger coefficient wins if it reaches 1, ties go OFF.
fn collapse_pair((a, b): (i64, i64)) -> TriState {
    if a > b && a >= 1 {
        TriState::On
    } else if b > a && b >= 1 {
        TriState::Indet
    } else {
        TriState::Off
    }
}

/// One threshold-and-update step under the default policy.
pub fn oracle_step(m: &ConnectionMatrix, x: &[TriState], clamp: &BTreeSet<usize>) -> Vec<TriState> {
    (0..m.n_cols())
        .map(|j| {
            if clamp.contains(&j) {
                return TriState::On;
            }
            let mut acc = (0i64, 0i64);
            for (i, &s) in x.iter().enumerate() {
                let v = m.get(i, j);
                let p = pmul(lift(s), (v.real as i64, v.indet as i64));
                acc = (acc.0 + p.0, acc.1 + p.1);
            }
            collapse_pair(acc)
        })
        .collect()
}

/// Plain integer FCM iteration with 0/1 states; returns the visited sequence
/// up to and including the first repeat.
pub fn fcm_oracle(w: &[Vec<i64>], seed: &[usize]) -> Vec<Vec<u8>> {
    let n = w.len();
    let mut x = vec![0u8; n];
    for &s in seed {
        x[s] = 1;
    }
    let mut hist = vec![x.clone()];
    loop {
        let mut y: Vec<u8> = (0..n)
            .map(|j| {
                let s: i64 = (0..n).map(|i| x[i] as i64 * w[i][j]).sum();
                u8::from(s >= 1)
            })
            .collect();
        for &s in seed {
            y[s] = 1;
        }
        let seen = hist.contains(&y);
        hist.push(y.clone());
        if seen {
            return hist;
        }
        x = y;
    }
}

pub fn bool_product(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let (n, k, p) = (a.len(), b.len(), b[0].len());
    (0..n)
        .map(|i| {
            (0..p)
                .map(|j| u8::from((0..k).any(|t| a[i][t] == 1 && b[t][j] == 1)))
                .collect()
        })
        .collect()
}

pub fn grid_of(bits: &[Vec<u8>]) -> Vec<Vec<NeutroValue>> {
    bits.iter()
        .map(|r| r.iter().map(|&b| NeutroValue::int(b as i32)).collect())
        .collect()
}

// ---- generators

fn diag_free(n: usize, cell: BoxedStrategy<NeutroValue>) -> impl Strategy<Value = ConnectionMatrix> {
    proptest::collection::vec(cell, n * n).prop_map(move |cells| {
        let grid = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { NeutroValue::ZERO } else { cells[i * n + j] })
                    .collect()
            })
            .collect();
        ConnectionMatrix::cognitive(space("C", n), grid).unwrap()
    })
}

pub fn crisp_cell() -> BoxedStrategy<NeutroValue> {
    prop_oneof![Just(-1), Just(0), Just(0), Just(1)]
        .prop_map(NeutroValue::int)
        .boxed()
}

pub fn neutro_cell() -> BoxedStrategy<NeutroValue> {
    prop_oneof![
        2 => Just(NeutroValue::ZERO),
        2 => Just(NeutroValue::ONE),
        1 => Just(NeutroValue::I),
        1 => Just(NeutroValue::int(-1)),
    ]
    .boxed()
}

/// Cognitive map of size 1..=8 with a random seed set.
pub fn neutro_map() -> impl Strategy<Value = (ConnectionMatrix, Vec<usize>)> {
    (1usize..=8)
        .prop_flat_map(|n| {
            (
                diag_free(n, neutro_cell()),
                proptest::collection::btree_set(0..n, 0..=n.min(3)),
            )
        })
        .prop_map(|(m, s)| (m, s.into_iter().collect()))
}

pub fn crisp_map() -> impl Strategy<Value = (ConnectionMatrix, Vec<usize>)> {
    (1usize..=8)
        .prop_flat_map(|n| {
            (
                diag_free(n, crisp_cell()),
                proptest::collection::btree_set(0..n, 0..=n.min(3)),
            )
        })
        .prop_map(|(m, s)| (m, s.into_iter().collect()))
}

pub fn bits(r: usize, c: usize) -> impl Strategy<Value = Vec<Vec<u8>>> {
    proptest::collection::vec(proptest::collection::vec(0u8..=1, c), r)
}

pub fn bit_pair() -> impl Strategy<Value = (Vec<Vec<u8>>, Vec<Vec<u8>>)> {
    (1usize..=6, 1usize..=6, 1usize..=6).prop_flat_map(|(n, k, p)| (bits(n, k), bits(k, p)))
}

/// A target space and a partition of it into classes, each with its own block.
pub fn disjoint_plan() -> impl Strategy<Value = (ConceptSpace, Vec<ConnectionMatrix>)> {
    (2usize..=8)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(0usize..3, n)))
        .prop_flat_map(|(n, owner)| {
            let sp = space("C", n);
            let mut classes: Vec<Vec<usize>> = vec![Vec::new(); 3];
            for (i, &o) in owner.iter().enumerate() {
                classes[o].push(i);
            }
            classes.retain(|c| !c.is_empty());
            let blocks: Vec<_> = classes
                .into_iter()
                .map(|c| {
                    let labels: Vec<String> = c.iter().map(|&i| sp.label(i).to_string()).collect();
                    let k = labels.len();
                    diag_free(k, neutro_cell()).prop_map(move |b| {
                        let cs = ConceptSpace::new(labels.clone()).unwrap();
                        ConnectionMatrix::cognitive(cs, b.grid()).unwrap()
                    })
                })
                .collect();
            (Just(sp), blocks)
        })
}

pub fn table() -> impl Strategy<Value = RawDataTable> {
    (2usize..=6, 1usize..=5)
        .prop_flat_map(|(r, c)| {
            (
                proptest::collection::vec(1u32..=12, r),
                proptest::collection::vec(proptest::collection::vec(0u64..=60, c), r),
                Just(c),
            )
        })
        .prop_map(|(iv, counts, c)| {
            RawDataTable::new(
                (0..counts.len()).map(|i| format!("g{i}")).collect(),
                (0..c).map(|j| format!("v{j}")).collect(),
                iv.into_iter().map(f64::from).collect(),
                counts,
            )
            .unwrap()
        })
}

pub fn alpha_grid() -> impl Strategy<Value = f64> {
    (0u32..=10).prop_map(|k| k as f64 / 10.0)
}

// ---- property bodies, shared by the property suite and the acceptance run

pub fn prop_termination((m, seed): (ConnectionMatrix, Vec<usize>)) -> Result<(), TestCaseError> {
    let n = m.n_rows();
    let mut x0 = StateVector::off(n);
    for &s in &seed {
        x0.states[s] = TriState::On;
        x0.clamp.insert(s);
    }
    // 3^n states at most; n <= 8 keeps the bound small.
    let bound = 3usize.pow(n as u32) + 1;
    let hp = run_cognitive(&m, &x0, &ThresholdPolicy::simple(), bound)
        .map_err(|e| TestCaseError::fail(format!("no termination: {e}")))?;
    prop_assert!(hp.iterations <= bound);
    let k = hp.states.len();
    for (i, s) in hp.states.iter().enumerate() {
        let next = oracle_step(&m, s, &x0.clamp);
        prop_assert_eq!(&next, &hp.states[(i + 1) % k]);
        for &c in &x0.clamp {
            prop_assert_eq!(s[c], TriState::On);
        }
    }
    match hp.kind {
        PatternKind::FixedPoint => prop_assert_eq!(k, 1),
        PatternKind::LimitCycle => prop_assert!(k >= 2),
    }
    prop_assert_eq!(hp.trace.last(), hp.trace.get(hp.trace.len() - 1 - k));
    Ok(())
}

pub fn prop_fcm_embedding((m, seed): (ConnectionMatrix, Vec<usize>)) -> Result<(), TestCaseError> {
    let n = m.n_rows();
    let w: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).real as i64).collect())
        .collect();
    let want = fcm_oracle(&w, &seed);
    let mut x0 = StateVector::off(n);
    for &s in &seed {
        x0.states[s] = TriState::On;
        x0.clamp.insert(s);
    }
    let hp = run_cognitive(&m, &x0, &ThresholdPolicy::simple(), 10_000).unwrap();
    let got: Vec<Vec<u8>> = hp
        .trace
        .iter()
        .map(|s| {
            s.iter()
                .map(|t| match t {
                    TriState::Off => 0,
                    TriState::On => 1,
                    TriState::Indet => 9,
                })
                .collect()
        })
        .collect();
    prop_assert_eq!(got, want);
    Ok(())
}

pub fn prop_disjoint_is_overlap((sp, blocks): (ConceptSpace, Vec<ConnectionMatrix>)) -> Result<(), TestCaseError> {
    let plan = BlockPlan::from_blocks(MatrixKind::Cognitive, sp.clone(), sp.clone(), &blocks, false).unwrap();
    let d = assemble_disjoint(&plan, &blocks).unwrap();
    let o = assemble_overlap(&plan, &blocks).unwrap();
    prop_assert_eq!(&d, &o);
    let mut want = ConnectionMatrix::zeros(MatrixKind::Cognitive, sp.clone(), sp.clone());
    for b in &blocks {
        for (i, r) in b.rows.labels().iter().enumerate() {
            for (j, c) in b.cols.labels().iter().enumerate() {
                let (ti, tj) = (sp.position(r).unwrap(), sp.position(c).unwrap());
                want.set(ti, tj, b.get(i, j));
            }
        }
    }
    prop_assert_eq!(&d, &want);
    Ok(())
}

pub fn prop_link_boolean((a, b): (Vec<Vec<u8>>, Vec<Vec<u8>>)) -> Result<(), TestCaseError> {
    let (n, k, p) = (a.len(), b.len(), b[0].len());
    let ma = ConnectionMatrix::from_grid(MatrixKind::Relational, space("X", n), space("Y", k), grid_of(&a)).unwrap();
    let mb = ConnectionMatrix::from_grid(MatrixKind::Relational, space("Y", k), space("Z", p), grid_of(&b)).unwrap();
    let want = grid_of(&bool_product(&a, &b));
    for rule in [LinkRule::Neutro, LinkRule::RealFirst] {
        let l = link(&ma, &mb, rule).unwrap();
        prop_assert_eq!(l.grid(), want.clone());
        prop_assert_eq!(l.rows.labels(), ma.rows.labels());
        prop_assert_eq!(l.cols.labels(), mb.cols.labels());
    }
    Ok(())
}

pub fn prop_rtd_monotone((t, a1, a2): (RawDataTable, f64, f64)) -> Result<(), TestCaseError> {
    let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
    let p = cetd_profile(&t, &CetdParams::new(vec![lo, hi])).unwrap();
    let (r_lo, r_hi) = (&p.rtds[0].1, &p.rtds[1].1);
    for (x, y) in r_lo.iter().flatten().zip(r_hi.iter().flatten()) {
        // A wider band can only pull entries towards 0.
        if *y != 0 {
            prop_assert_eq!(x, y);
        }
    }
    let nz = |r: &Vec<Vec<i32>>| r.iter().flatten().filter(|v| **v != 0).count();
    prop_assert!(nz(r_hi) <= nz(r_lo));
    Ok(())
}

pub fn prop_cetd_ratio((t, c, alphas): (RawDataTable, u32, Vec<f64>)) -> Result<(), TestCaseError> {
    let params = CetdParams::new(alphas);
    let base = cetd_profile(&t, &params).unwrap();
    // Same count/interval ratios: exactly the same profile.
    let joint = RawDataTable::new(
        t.row_labels().to_vec(),
        t.col_labels().to_vec(),
        t.intervals().iter().map(|v| v * c as f64).collect(),
        t.counts()
            .iter()
            .map(|r| r.iter().map(|x| x * c as u64).collect())
            .collect(),
    )
    .unwrap();
    prop_assert_eq!(&cetd_profile(&joint, &params).unwrap(), &base);
    // Scaling the counts alone scales ATD, mean and sigma together; bands stay put.
    let counts_only = RawDataTable::new(
        t.row_labels().to_vec(),
        t.col_labels().to_vec(),
        t.intervals().to_vec(),
        t.counts()
            .iter()
            .map(|r| r.iter().map(|x| x * c as u64).collect())
            .collect(),
    )
    .unwrap();
    let scaled = cetd_profile(&counts_only, &params).unwrap();
    prop_assert_eq!(&scaled.cetd, &base.cetd);
    prop_assert_eq!(&scaled.row_sums, &base.row_sums);
    prop_assert_eq!(&scaled.peak, &base.peak);
    Ok(())
}

pub fn ratio_case() -> impl Strategy<Value = (RawDataTable, u32, Vec<f64>)> {
    (table(), 1u32..=10, proptest::collection::vec(alpha_grid(), 1..=3))
}

pub fn monotone_case() -> impl Strategy<Value = (RawDataTable, f64, f64)> {
    (table(), alpha_grid(), alpha_grid())
}
