use std::f64::consts::PI;

use proptest::prelude::*;
use qtet::qnum::{
    factorial_table, log_brace_factorial, log_quantum_factorial, quantum_integer, signed_log_sum,
    OddLevel, QuarterPhaseLog,
};
use qtet::volfun::lobachevsky;

fn odd_level() -> impl Strategy<Value = OddLevel> {
    (1u32..100).prop_map(|k| OddLevel::new(2 * k + 1).unwrap())
}

proptest! {
    #[test]
    fn chebyshev_recurrence(level in odd_level(), n in -300i64..300) {
        // [n+1] = [2]_q [n] - [n-1] with [2]_q = q + 1/q = 2 cos(2π/r)
        let two = 2.0 * (2.0 * PI / level.get() as f64).cos();
        let lhs = quantum_integer(level, n + 1);
        let rhs = two * quantum_integer(level, n) - quantum_integer(level, n - 1);
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn quantum_integer_is_odd_and_periodic(level in odd_level(), n in -300i64..300) {
        let r = level.get() as i64;
        prop_assert!((quantum_integer(level, -n) + quantum_integer(level, n)).abs() < 1e-12);
        prop_assert!((quantum_integer(level, n + r) - quantum_integer(level, n)).abs() < 1e-9);
    }

    #[test]
    fn factorial_matches_direct_product(level in odd_level(), frac in 0.0f64..1.0) {
        let n = (frac * level.max_color() as f64) as u32;
        let direct: f64 = (1..=n).map(|k| quantum_integer(level, k as i64)).product();
        let logged = log_quantum_factorial(level, n as i64).unwrap();
        let value = logged.to_real().unwrap();
        prop_assert!((value - direct).abs() <= 1e-10 * direct.abs().max(1e-300));
    }

    #[test]
    fn mul_div_round_trip(a in -50.0f64..50.0, pa in 0i32..4, b in -50.0f64..50.0, pb in 0i32..4) {
        let x = QuarterPhaseLog::new(a, pa);
        let y = QuarterPhaseLog::new(b, pb);
        let back = (x * y) / y;
        prop_assert_eq!(back.phase(), x.phase());
        prop_assert!((back.log_mag() - a).abs() < 1e-12);
        let prod = (x * y).to_complex();
        let naive = x.to_complex() * y.to_complex();
        prop_assert!((prod - naive).norm() <= 1e-12 * naive.norm());
    }

    #[test]
    fn signed_sum_matches_naive(terms in prop::collection::vec((-5.0f64..5.0, prop::sample::select(vec![-1i8, 1])), 1..40)) {
        let naive: f64 = terms.iter().map(|&(l, s)| s as f64 * l.exp()).sum();
        let total: f64 = terms.iter().map(|&(l, _)| l.exp()).sum();
        let got = signed_log_sum(&terms);
        let value = got.to_real().unwrap_or(0.0);
        prop_assert!((value - naive).abs() <= 1e-12 * total);
    }
}

#[test]
fn factorial_vanishes_from_r() {
    for r in [5u32, 11, 101] {
        let t = factorial_table(OddLevel::new(r).unwrap());
        assert!(t.get(r).is_zero());
        assert!(t.get(r + 3).is_zero());
        assert!(!t.get(r - 1).is_zero());
    }
}

#[test]
fn factorial_domain() {
    let level = OddLevel::new(11).unwrap();
    assert!(log_quantum_factorial(level, -1).is_err());
    assert!(log_quantum_factorial(level, 10).is_err());
    assert!(log_quantum_factorial(level, 9).is_ok());
    assert!(log_brace_factorial(level, 0).is_err());
    assert!(log_brace_factorial(level, 11).is_err());
}

#[test]
fn invalid_levels_rejected() {
    for r in [0u32, 1, 2, 4, 100] {
        assert!(OddLevel::new(r).is_err(), "r = {r}");
    }
    assert_eq!(OddLevel::new(3).unwrap().max_color(), 1);
}

/// `log|{n}!| + (r/2π) Λ(2πn/r)` stays within `C log r` uniformly in `n`.
/// The constant is not known in closed form, so fit it and check it does not grow with r.
#[test]
fn brace_factorial_lobachevsky_bound() {
    let ratios: Vec<f64> = [101u32, 401, 1601]
        .iter()
        .map(|&r| {
            let level = OddLevel::new(r).unwrap();
            let worst = (1..r as i64)
                .map(|n| {
                    let main = -(r as f64) / (2.0 * PI) * lobachevsky(2.0 * PI * n as f64 / r as f64);
                    (log_brace_factorial(level, n).unwrap() - main).abs()
                })
                .fold(0.0f64, f64::max);
            worst / (r as f64).ln()
        })
        .collect();
    let c = ratios.iter().cloned().fold(0.0f64, f64::max);
    assert!(c < 1.0, "fitted C = {c}, ratios {ratios:?}");
    assert!(ratios[2] <= ratios[0] * 1.5, "ratio grows with r: {ratios:?}");
}
