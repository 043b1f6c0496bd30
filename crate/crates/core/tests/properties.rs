mod common;

use cogmap::compose::combine;
use cogmap::concept::{ConnectionMatrix, MatrixKind};
use cogmap::io::format::{parse_matrix, serialize_matrix};
use cogmap::neutro::NeutroValue;
use common::*;
use proptest::prelude::*;

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cases(1000))]

    #[test]
    fn cognitive_runs_terminate_and_self_check(case in neutro_map()) {
        prop_termination(case)?;
    }

    #[test]
    fn crisp_maps_run_like_plain_integer_fcm(case in crisp_map()) {
        prop_fcm_embedding(case)?;
    }

    #[test]
    fn disjoint_plans_assemble_the_same_both_ways(case in disjoint_plan()) {
        prop_disjoint_is_overlap(case)?;
    }

    #[test]
    fn link_matches_boolean_product(case in bit_pair()) {
        prop_link_boolean(case)?;
    }

    #[test]
    fn rtd_is_monotone_in_alpha(case in monotone_case()) {
        prop_rtd_monotone(case)?;
    }

    #[test]
    fn cetd_depends_on_ratios_only(case in ratio_case()) {
        prop_cetd_ratio(case)?;
    }
}

fn any_matrix() -> impl Strategy<Value = ConnectionMatrix> {
    let cell = (-3i32..=3, -2i32..=2).prop_map(|(a, b)| NeutroValue::new(a, b));
    (1usize..=5, 1usize..=5, any::<bool>()).prop_flat_map(move |(r, c, cog)| {
        let c = if cog { r } else { c };
        proptest::collection::vec(proptest::collection::vec(cell.clone(), c), r).prop_map(move |g| {
            if cog {
                ConnectionMatrix::cognitive(space("N", r), g).unwrap()
            } else {
                ConnectionMatrix::from_grid(MatrixKind::Relational, space("R", r), space("K", c), g).unwrap()
            }
        })
    })
}

proptest! {
    #![proptest_config(cases(300))]

    #[test]
    fn serialize_parse_round_trip(m in any_matrix()) {
        let text = serialize_matrix(&m);
        let back = parse_matrix(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(serialize_matrix(&back), text);
    }

    #[test]
    fn neutro_tokens_round_trip(a in -50i32..=50, b in -50i32..=50) {
        let v = NeutroValue::new(a, b);
        prop_assert_eq!(v.to_string().parse::<NeutroValue>().unwrap(), v);
    }

    #[test]
    fn transpose_is_an_involution(m in any_matrix()) {
        prop_assert_eq!(m.transpose().transpose(), m);
    }

    #[test]
    fn combine_is_order_free((a, _) in neutro_map(), seed in any::<u64>()) {
        let n = a.n_rows();
        let grid = (0..n)
            .map(|i| (0..n).map(|j| if i == j { NeutroValue::ZERO } else { NeutroValue::int(((seed >> ((i * n + j) % 60)) & 1) as i32) }).collect())
            .collect();
        let b = ConnectionMatrix::cognitive(a.rows.clone(), grid).unwrap();
        prop_assert_eq!(combine(&[a.clone(), b.clone()]).unwrap(), combine(&[b, a]).unwrap());
    }
}
