use hyperharm::clifford::{paravector_norm_check, MultiVector};
use hyperharm::harmonic::{poisson_kernel, AtomicHarmonic, ScalarField};
use hyperharm::lab::{check_main_ball, check_main_sharp, liu_constant, operator_norm, JacobianMatrix};
use hyperharm::mobius::{bracket, hyperbolic_metric, mobius_jacobian, mobius_map, pseudo_metric};
use hyperharm::octonion::Octonion;
use hyperharm::point::{norm, norm_sqr};
use proptest::prelude::*;

/// Point with `|x| <= r` built from a direction and a radius fraction.
fn ball_point(n: usize, r: f64) -> impl Strategy<Value = Vec<f64>> {
    (prop::collection::vec(-1.0f64..1.0, n), 0.0f64..1.0).prop_filter_map("nonzero direction", move |(v, t)| {
        let len = norm(&v);
        (len > 1e-6).then(|| v.iter().map(|c| c / len * t * r).collect())
    })
}

fn pair(r: f64) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..=8).prop_flat_map(move |n| (ball_point(n, r), ball_point(n, r)))
}

fn triple(r: f64) -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
    (2usize..=8).prop_flat_map(move |n| (ball_point(n, r), ball_point(n, r), ball_point(n, r)))
}

fn unit(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n).prop_filter_map("nonzero", |v| {
        let len = norm(&v);
        (len > 1e-3).then(|| v.iter().map(|c| c / len).collect())
    })
}

fn atomic(n: usize) -> impl Strategy<Value = AtomicHarmonic> {
    prop::collection::vec((0.1f64..10.0, unit(n)), 1..=5)
        .prop_map(move |atoms| AtomicHarmonic::new(n, atoms).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn mobius_is_an_involution_of_the_ball((a, x) in pair(0.95)) {
        let y = mobius_map(&a, &x);
        prop_assert!(norm(&y) < 1.0);
        let back = mobius_map(&a, &y);
        for (p, q) in back.iter().zip(&x) {
            prop_assert!((p - q).abs() < 1e-11);
        }
        // swaps a and 0
        prop_assert!(norm(&mobius_map(&a, &a)) < 1e-12);
    }

    #[test]
    fn mobius_preserves_the_pseudo_metric((a, x, y) in triple(0.9)) {
        let before = pseudo_metric(&x, &y).unwrap();
        let after = pseudo_metric(&mobius_map(&a, &x), &mobius_map(&a, &y)).unwrap();
        prop_assert!((before - after).abs() < 1e-10);
    }

    #[test]
    fn mobius_jacobian_is_a_scaled_rotation((a, x) in pair(0.9)) {
        // |J v| = (1 - |a|^2) / [x, a]^2 for unit v
        let j = mobius_jacobian(&a, &x);
        let scale = (1.0 - norm_sqr(&a)) / bracket(&x, &a).powi(2);
        prop_assert!((operator_norm(&j) - scale).abs() < 1e-9 * scale.max(1.0));
    }

    #[test]
    fn hyperbolic_triangle_inequality((x, y, z) in triple(0.95)) {
        let d = |p: &[f64], q: &[f64]| hyperbolic_metric(p, q).unwrap();
        prop_assert!(d(&x, &y) <= d(&x, &z) + d(&z, &y) + 1e-9);
        prop_assert!((d(&x, &y) - d(&y, &x)).abs() < 1e-12);
    }

    #[test]
    fn clifford_norm_is_multiplicative_on_paravectors(
        (coeffs, x) in (2usize..=6).prop_flat_map(|m| (
            prop::collection::vec(-1.0f64..1.0, 1 << m),
            prop::collection::vec(-1.0f64..1.0, m + 1),
        ))
    ) {
        let m = x.len() - 1;
        let a = MultiVector::from_coeffs(m, coeffs).unwrap();
        for r in paravector_norm_check(&a, &x).unwrap() {
            prop_assert!(r.pass, "{:?}", r);
        }
    }

    #[test]
    fn octonion_norm_is_multiplicative(
        a in prop::array::uniform8(-1.0f64..1.0),
        b in prop::array::uniform8(-1.0f64..1.0),
    ) {
        let (a, b) = (Octonion(a), Octonion(b));
        let lhs = (a * b).norm();
        prop_assert!((lhs - a.norm() * b.norm()).abs() < 1e-13);
        // alternativity: (a a) b = a (a b)
        let assoc = Octonion::associator(&a, &a, &b);
        prop_assert!(assoc.norm() < 1e-13);
    }

    #[test]
    fn poisson_kernel_is_positive((n, x, xi) in (2usize..=8).prop_flat_map(|n| (Just(n), ball_point(n, 0.99), unit(n)))) {
        let p = poisson_kernel(&x, &xi).unwrap();
        prop_assert!(p > 0.0);
        // (1 - |x|)/(1 + |x|)^{n-1} <= P <= (1 + |x|)/(1 - |x|)^{n-1}
        let r = norm(&x);
        let lo = (1.0 - r) / (1.0 + r).powi(n as i32 - 1);
        let hi = (1.0 + r) / (1.0 - r).powi(n as i32 - 1);
        prop_assert!(lo * (1.0 - 1e-12) <= p && p <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn sharp_gradient_estimate_holds((f, x) in (2usize..=8).prop_flat_map(|n| (atomic(n), ball_point(n, 0.99)))) {
        let r = check_main_sharp(&f, &x).unwrap();
        prop_assert!(r.pass, "{:?}", r);
    }

    #[test]
    fn harnack_chain_holds((f, x, y) in (2usize..=8).prop_flat_map(|n| (atomic(n), ball_point(n, 0.95), ball_point(n, 0.95)))) {
        for r in check_main_ball(&f, &x, &y).unwrap() {
            prop_assert!(r.pass, "{:?}", r);
        }
    }

    #[test]
    fn atomic_gradient_matches_finite_differences((f, x) in (2usize..=5).prop_flat_map(|n| (atomic(n), ball_point(n, 0.8)))) {
        let g = f.gradient(&x);
        let h = 1e-6;
        for i in 0..x.len() {
            let mut p = x.clone();
            let mut m = x.clone();
            p[i] += h;
            m[i] -= h;
            let fd = (f.value(&p) - f.value(&m)) / (2.0 * h);
            prop_assert!((fd - g[i]).abs() < 1e-5 * (1.0 + g[i].abs()));
        }
    }

    #[test]
    fn operator_norm_dominates_every_direction(
        (rows, v) in (1usize..=4, 1usize..=5).prop_flat_map(|(r, c)| (
            prop::collection::vec(prop::collection::vec(-3.0f64..3.0, c), r),
            unit(c),
        ))
    ) {
        let j = JacobianMatrix::from_rows(&rows).unwrap();
        let op = operator_norm(&j);
        prop_assert!(norm(&j.apply(&v)) <= op * (1.0 + 1e-12) + 1e-14);
        if rows.len() == 1 {
            prop_assert!((op - norm(&rows[0])).abs() < 1e-12 * op.max(1.0));
        }
    }
}

#[test]
fn liu_constant_recurrence() {
    // r_n r_{n-1} = n / (2 pi) with r_n = liu(n) / 2
    for n in 2..=60 {
        let prod = liu_constant(n) * liu_constant(n - 1) / 4.0;
        let expected = n as f64 / (2.0 * std::f64::consts::PI);
        assert!((prod - expected).abs() < 1e-13 * expected, "n = {n}");
    }
}
