mod common;

use common::{order, z};
use nichols::braiding::{BraidingClass, BraidingMatrix};
use nichols::cartan::{cartan_data, cartan_entry, classify_gcm, CartanEntry, GcmClass, DEFAULT_N_MAX};
use nichols::groupoid::{enumerate, gk_dimension, reflect_matrix, simple_reflection, Caps, Verdict};
use nichols::rank2::Rank2Params;
use nichols::expr::parse_scalar;
use nichols::scalars::parse_literal;
use nichols::Scalar;
use proptest::prelude::*;

/// (order, exponents) for a θ×θ matrix of powers of ζ_order with q_ii ≠ 1.
fn torsion(theta: usize, max_order: u32) -> impl Strategy<Value = BraidingMatrix> {
    (2..=max_order)
        .prop_flat_map(move |n| (Just(n), prop::collection::vec(0..n as i64, theta * theta)))
        .prop_filter_map("q_ii = 1", move |(n, ks)| {
            let rows = ks.chunks(theta).map(|r| r.iter().map(|&k| z(n, k)).collect()).collect();
            BraidingMatrix::new(rows).ok()
        })
}

/// Entries c·ζ_n^k·q^e with small integer c.
fn mixed_entry() -> impl Strategy<Value = Scalar> {
    (1..=12u32, 0..12i64, -3..=3i64, prop_oneof![Just(1i64), Just(-1), Just(2), Just(3)])
        .prop_map(|(n, k, e, c)| Scalar::from_int(c) * z(n, k) * Scalar::q_pow(e))
}

fn mixed_rank2() -> impl Strategy<Value = BraidingMatrix> {
    prop::collection::vec(mixed_entry(), 4).prop_filter_map("q_ii = 1", |v| {
        BraidingMatrix::new(vec![vec![v[0].clone(), v[1].clone()], vec![v[2].clone(), v[3].clone()]]).ok()
    })
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reflection_is_an_involution_on_diagrams(m in prop_oneof![torsion(2, 12), torsion(3, 8)], i in 0usize..3) {
        let i = i % m.theta();
        if let Ok(r) = reflect_matrix(&m, i) {
            let back = reflect_matrix(&r, i).expect("a reflected matrix reflects back");
            prop_assert_eq!(back.diagram(), m.diagram());
        }
    }

    #[test]
    fn root_maps_compose_to_identity(m in prop_oneof![torsion(2, 12), torsion(3, 8)], i in 0usize..3) {
        let i = i % m.theta();
        let d = cartan_data(&m, DEFAULT_N_MAX).unwrap();
        if d.reflectable[i] {
            let r = reflect_matrix(&m, i).unwrap();
            let dr = cartan_data(&r, DEFAULT_N_MAX).unwrap();
            prop_assert!(dr.reflectable[i]);
            // c_ij is unchanged by R^i, so s_i is the same map on both sides.
            prop_assert_eq!(&dr.c[i], &d.c[i]);
            let s = simple_reflection(i, &d.c[i]).unwrap();
            let sr = simple_reflection(i, &dr.c[i]).unwrap();
            prop_assert_eq!(matmul(&sr, &s), identity(m.theta()));
        }
    }

    #[test]
    fn gk_is_invariant_under_reflection(m in torsion(2, 12), i in 0usize..2) {
        let caps = Caps::default();
        let Ok(r) = reflect_matrix(&m, i) else { return Ok(()) };
        let a = enumerate(&m, &caps).unwrap();
        let b = enumerate(&r, &caps).unwrap();
        if matches!(a.verdict, Verdict::CapExceeded(_)) || matches!(b.verdict, Verdict::CapExceeded(_)) {
            return Ok(());
        }
        prop_assert_eq!(gk_dimension(&a), gk_dimension(&b));
        prop_assert_eq!(a.is_finite(), b.is_finite());
        if a.is_finite() {
            prop_assert_eq!(a.seed_roots().len(), b.seed_roots().len());
        }
    }

    #[test]
    fn p_closed_form_matches_bicharacter(m in prop_oneof![torsion(2, 12), mixed_rank2()]) {
        let p = Rank2Params::from_matrix(&m).unwrap();
        for k in 0..=10u64 {
            let b = Rank2Params::beta(k);
            prop_assert_eq!(p.p(k), m.bq(&b, &b).unwrap());
            let direct = m.get(0, 0).powu(k * k) * p.qt().powu(k) * m.get(1, 1);
            prop_assert_eq!(p.p(k), direct);
        }
    }

    #[test]
    fn cartan_entry_bounds(m in prop_oneof![torsion(2, 12), torsion(3, 8)]) {
        for i in 0..m.theta() {
            let n = order(m.get(i, i)).expect("torsion");
            for j in 0..m.theta() {
                if i == j {
                    continue;
                }
                let e = cartan_entry(&m, i, j, DEFAULT_N_MAX).unwrap();
                // A finite-order diagonal always yields a value.
                let CartanEntry::Value(c) = e else { panic!("{e:?}") };
                prop_assert!(c <= 0 && -c <= n as i64 - 1);
                prop_assert_eq!(c == 0, m.qtilde(i, j).unwrap().is_one());
            }
        }
    }

    #[test]
    fn rank_two_gcm_rule(a in -8i64..=0, b in -8i64..=0) {
        prop_assume!((a == 0) == (b == 0));
        let got = classify_gcm(&[vec![2, a], vec![b, 2]]);
        if a == 0 {
            prop_assert!(got.is_err());
        } else {
            let want = match a * b {
                x if x <= 3 => GcmClass::Finite,
                4 => GcmClass::Affine,
                _ => GcmClass::Indefinite,
            };
            prop_assert_eq!(got.unwrap(), want);
        }
    }

    #[test]
    fn diagram_depends_only_on_symmetrization(m in prop_oneof![torsion(2, 12), mixed_rank2()], k in 0i64..12, e in -2i64..=2) {
        // Move a unit factor from q_12 to q_21.
        let u = z(12, k) * Scalar::q_pow(e);
        let mut rows = m.rows();
        rows[0][1] = &rows[0][1] * &u;
        rows[1][0] = &rows[1][0] / &u;
        let t = BraidingMatrix::new(rows).unwrap();
        prop_assert_eq!(t.diagram(), m.diagram());
        prop_assert_eq!(t.classify_class(), m.classify_class());
    }

    #[test]
    fn class_agrees_with_brute_force_orders(m in prop_oneof![torsion(2, 12), mixed_rank2(), torsion(3, 6)]) {
        let n = m.theta();
        let fin = |s: &Scalar| order(s).is_some();
        let diag: Vec<bool> = (0..n).map(|i| fin(m.get(i, i))).collect();
        let qts: Vec<Scalar> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| m.qtilde(i, j).unwrap())
            .collect();
        let want = if diag.iter().all(|&d| d) && qts.iter().all(fin) {
            BraidingClass::Torsion
        } else if diag.iter().all(|&d| !d) && qts.iter().all(|t| t.is_one() || !fin(t)) {
            BraidingClass::Generic
        } else {
            BraidingClass::Semigeneric
        };
        prop_assert_eq!(m.classify_class(), want);
    }

    #[test]
    fn matrix_json_roundtrip(m in prop_oneof![torsion(2, 12), mixed_rank2(), torsion(3, 6)]) {
        prop_assume!(u64::from(m.cyclotomic_order()) <= nichols::braiding::MAX_JSON_ORDER);
        let text = m.to_json().to_string();
        prop_assert_eq!(BraidingMatrix::from_json_str(&text).unwrap(), m);
    }

    #[test]
    fn scalar_field_axioms(a in mixed_entry(), b in mixed_entry(), c in mixed_entry()) {
        let s = &a + &b;
        prop_assert_eq!(&s - &b, a.clone());
        prop_assert_eq!(&s * &c, &a * &c + &b * &c);
        if !s.is_zero() {
            prop_assert_eq!((&a / &s) * &s, a.clone());
            prop_assert_eq!(s.inv().unwrap().inv().unwrap(), s.clone());
        }
        let m = s.cyclotomic_order();
        let mo = a.cyclotomic_order();
        prop_assert_eq!(parse_scalar(&a.to_string(), mo, 'z').unwrap(), a.clone());
        if a.as_monomial().is_some() {
            prop_assert_eq!(parse_literal(&a.to_string(), mo).unwrap(), a.clone());
        }
        let lifted = s.lift_to(m * 2).unwrap();
        prop_assert_eq!(lifted.normalize(), s.normalize());
    }
}
