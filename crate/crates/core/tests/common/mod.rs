#![allow(dead_code)]

use std::f64::consts::PI;

use qtet::gram::{signature, AlphaSixTuple, AngleSixTuple, GramMatrix, DEFAULT_TOL};
use qtet::qnum::OddLevel;
use qtet::sixj::ColorSixTuple;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_alpha(rng: &mut impl Rng) -> AlphaSixTuple {
    AlphaSixTuple::new(std::array::from_fn(|_| rng.gen_range(0.0..2.0 * PI))).unwrap()
}

pub fn random_admissible_alpha(rng: &mut impl Rng) -> AlphaSixTuple {
    loop {
        let a = random_alpha(rng);
        if qtet::gram::admissible(&a) {
            return a;
        }
    }
}

pub fn random_theta(rng: &mut impl Rng) -> AngleSixTuple {
    AngleSixTuple::new(std::array::from_fn(|_| rng.gen_range(0.0..PI))).unwrap()
}

pub fn is_hyperbolic(theta: &AngleSixTuple) -> bool {
    let s = signature(&GramMatrix::from_angles(theta), DEFAULT_TOL);
    (s.pos, s.neg) == (3, 1)
}

pub fn random_hyperbolic_theta(rng: &mut impl Rng) -> AngleSixTuple {
    loop {
        let t = random_theta(rng);
        if is_hyperbolic(&t) {
            return t;
        }
    }
}

pub fn random_coloring(rng: &mut impl Rng, max_level: u32) -> ColorSixTuple {
    loop {
        let r = 2 * rng.gen_range(1..=(max_level - 1) / 2) + 1;
        let level = OddLevel::new(r).unwrap();
        let colors = std::array::from_fn(|_| rng.gen_range(0..=r - 2));
        if let Ok(t) = ColorSixTuple::new(colors, level) {
            return t;
        }
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `-∫_0^θ log|2 sin t| dt` for θ in [0, π], by quadrature of the defining integral.
/// The endpoint logarithms are integrated in closed form; the remainder is smooth.
pub fn lobachevsky_quadrature(theta: f64) -> f64 {
    assert!((0.0..=PI).contains(&theta));
    if theta == 0.0 {
        return 0.0;
    }
    let smooth = |t: f64| (2.0 * t.sin() / (t * (PI - t))).ln();
    let nodes = gauss_legendre(24);
    let panels = 16;
    let h = theta / panels as f64;
    let mut integral = 0.0;
    for p in 0..panels {
        let (a, b) = (p as f64 * h, (p + 1) as f64 * h);
        for &(x, w) in &nodes {
            integral += 0.5 * h * w * smooth(0.5 * (a + b) + 0.5 * (b - a) * x);
        }
    }
    let xlogx = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() };
    let log_t = xlogx(theta) - theta;
    let log_pi_minus_t = xlogx(PI) - PI - (xlogx(PI - theta) - (PI - theta));
    -(integral + log_t + log_pi_minus_t)
}
