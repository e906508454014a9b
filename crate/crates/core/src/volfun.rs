//! Lobachevsky function, dilogarithm on the unit circle, and the volume function whose
//! critical value is the volume of a generalized hyperbolic tetrahedron.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram::{signature, AlphaSixTuple, AngleSixTuple, BranchSigns, GramMatrix, DEFAULT_TOL};
use crate::sixj::{QUADS, VERTEX_TRIPLES};
use crate::tetra::{edge_length, vertex_type, VertexType};

const CLAUSEN_TERMS: usize = 40;

// c_k = ζ(2k) / (k (2k+1) (2π)^{2k}), so Cl2(x) = x - x ln|x| + Σ c_k x^{2k+1} on |x| <= π
fn clausen_coefficients() -> &'static [f64; CLAUSEN_TERMS] {
    static COEFFS: OnceLock<[f64; CLAUSEN_TERMS]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let exact = [
            PI.powi(2) / 6.0,
            PI.powi(4) / 90.0,
            PI.powi(6) / 945.0,
            PI.powi(8) / 9450.0,
            PI.powi(10) / 93555.0,
        ];
        std::array::from_fn(|i| {
            let k = i + 1;
            let zeta = exact.get(i).copied().unwrap_or_else(|| {
                (1..=60).rev().map(|n| (n as f64).powi(-2 * k as i32)).sum::<f64>()
            });
            zeta / (k as f64 * (2 * k + 1) as f64 * (2.0 * PI).powi(2 * k as i32))
        })
    })
}

/// Clausen function `Cl2(x) = -∫_0^x log|2 sin(t/2)| dt`.
pub fn clausen(x: f64) -> f64 {
    let y = x - 2.0 * PI * (x / (2.0 * PI)).round();
    if y == 0.0 {
        return 0.0;
    }
    let y2 = y * y;
    let (mut pow, mut tail) = (y * y2, 0.0);
    for c in clausen_coefficients() {
        let term = c * pow;
        tail += term;
        if term.abs() < 1e-18 * tail.abs() {
            break;
        }
        pow *= y2;
    }
    y - y * y.abs().ln() + tail
}

/// `Λ(θ) = -∫_0^θ log|2 sin t| dt`; odd and π-periodic.
pub fn lobachevsky(theta: f64) -> f64 {
    0.5 * clausen(2.0 * theta)
}

/// `Li2(e^{2iθ})` for θ in `[0, π]`.
pub fn dilog_unit_circle(theta: f64) -> Complex64 {
    Complex64::new(PI * PI / 6.0 + theta * (theta - PI), 2.0 * lobachevsky(theta))
}

// L(x) = Li2(e^{2ix}) + x^2, with the argument of the dilogarithm reduced into [0, π)
fn big_l(x: f64) -> Complex64 {
    let reduced = x - PI * (x / PI).floor();
    dilog_unit_circle(reduced) + x * x
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauEta {
    pub tau: [f64; 4],
    pub eta: [f64; 3],
}

pub fn tau_eta(alpha: &AlphaSixTuple) -> TauEta {
    let a = alpha.values();
    TauEta {
        tau: VERTEX_TRIPLES.map(|t| (a[t[0]] + a[t[1]] + a[t[2]]) / 2.0),
        eta: QUADS.map(|q| (a[q[0]] + a[q[1]] + a[q[2]] + a[q[3]]) / 2.0),
    }
}

pub fn delta_vertex(a: f64, b: f64, c: f64) -> f64 {
    -0.5 * lobachevsky((b + c - a) / 2.0) - 0.5 * lobachevsky((a + c - b) / 2.0)
        - 0.5 * lobachevsky((a + b - c) / 2.0)
        + 0.5 * lobachevsky((a + b + c) / 2.0)
}

fn delta_sum(alpha: &AlphaSixTuple) -> f64 {
    let a = alpha.values();
    VERTEX_TRIPLES.iter().map(|t| delta_vertex(a[t[0]], a[t[1]], a[t[2]])).sum()
}

/// The ξ-dependent part of `V`: `Σ Λ(ξ-τ_i) + Σ Λ(η_j-ξ) - Λ(ξ)`.
fn s_fun(te: &TauEta, xi: f64) -> f64 {
    te.tau.iter().map(|t| lobachevsky(xi - t)).sum::<f64>()
        + te.eta.iter().map(|e| lobachevsky(e - xi)).sum::<f64>()
        - lobachevsky(xi)
}

fn s_prime(te: &TauEta, xi: f64) -> f64 {
    let num = xi.sin().abs().ln() + te.eta.iter().map(|e| (e - xi).sin().abs().ln()).sum::<f64>();
    let den: f64 = te.tau.iter().map(|t| (xi - t).sin().abs().ln()).sum();
    num - den
}

fn s_second(te: &TauEta, xi: f64) -> f64 {
    let cot = |x: f64| x.cos() / x.sin();
    -te.tau.iter().map(|t| cot(xi - t)).sum::<f64>() - te.eta.iter().map(|e| cot(e - xi)).sum::<f64>()
        + cot(xi)
}

pub fn big_v(alpha: &AlphaSixTuple, xi: f64) -> f64 {
    delta_sum(alpha) + s_fun(&tau_eta(alpha), xi)
}

pub fn big_u(alpha: &AlphaSixTuple, xi: f64) -> Complex64 {
    let te = tau_eta(alpha);
    let mut u = Complex64::new(0.0, 0.0);
    for t in te.tau {
        for e in te.eta {
            u -= 0.5 * big_l(e - t);
        }
        u += 0.5 * big_l(t - PI) + big_l(xi - t);
    }
    for e in te.eta {
        u += big_l(e - xi);
    }
    u - big_l(xi - PI)
}

/// Coefficients and roots of `A z^2 + B z + C = 0` whose unit-modulus roots are `e^{-2iξ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalData {
    #[serde(with = "complex_pair")]
    pub a: Complex64,
    #[serde(with = "complex_pair")]
    pub b: Complex64,
    #[serde(with = "complex_pair")]
    pub c: Complex64,
    pub disc: f64,
    #[serde(with = "complex_pair")]
    pub z: Complex64,
    #[serde(with = "complex_pair")]
    pub z_star: Complex64,
    /// In `[π, 2π)`, from the `+sqrt` root.
    pub xi: f64,
    pub xi_star: f64,
}

mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

fn quadratic_coefficients(alpha: &AlphaSixTuple) -> (Complex64, Complex64, Complex64) {
    let u = alpha.values().map(|a| Complex64::from_polar(1.0, a));
    let form = |u: &[Complex64; 6]| {
        u[0] * u[3] + u[1] * u[4] + u[2] * u[5]
            - u[0] * u[1] * u[5]
            - u[0] * u[2] * u[4]
            - u[1] * u[2] * u[3]
            - u[3] * u[4] * u[5]
            + u.iter().product::<Complex64>()
    };
    let a = form(&u);
    let c = form(&u.map(|x| x.inv()));
    let b = -(0..3)
        .map(|k| (u[k] - u[k].inv()) * (u[k + 3] - u[k + 3].inv()))
        .sum::<Complex64>();
    (a, b, c)
}

fn xi_from_root(z: Complex64) -> f64 {
    (-z.arg() / 2.0).rem_euclid(PI) + PI
}

pub fn critical_xi(alpha: &AlphaSixTuple) -> Result<CriticalData> {
    let (a, b, c) = quadratic_coefficients(alpha);
    // Flat tuples kill all three coefficients; V vanishes identically there and the
    // critical point degenerates to 3π/2.
    if a.norm().max(b.norm()).max(c.norm()) < 1e-12 {
        let z = Complex64::new(1.0, 0.0);
        let xi = 1.5 * PI;
        return Ok(CriticalData { a, b, c, disc: 0.0, z, z_star: z, xi, xi_star: xi });
    }
    let disc_c = b * b - 4.0 * a * c;
    let scale = (b.norm_sqr() + 4.0 * (a * c).norm()).max(1.0);
    if disc_c.im.abs() > 1e-9 * scale {
        return Err(Error::NoCriticalPoint);
    }
    let disc = disc_c.re;
    if disc > 1e-12 * scale || a.norm() < 1e-14 {
        return Err(Error::NoCriticalPoint);
    }
    let root = Complex64::new(0.0, (-disc).max(0.0).sqrt());
    let z = (-b + root) / (2.0 * a);
    let z_star = (-b - root) / (2.0 * a);
    if (z.norm() - 1.0).abs() > 1e-6 || (z_star.norm() - 1.0).abs() > 1e-6 {
        return Err(Error::NoCriticalPoint);
    }
    Ok(CriticalData { a, b, c, disc, z, z_star, xi: xi_from_root(z), xi_star: xi_from_root(z_star) })
}

/// Volume of the generalized hyperbolic tetrahedron with dihedral angles `theta`,
/// evaluated on the branch `α = π + μθ`.
pub fn volume(theta: &AngleSixTuple, mu: BranchSigns) -> Result<f64> {
    volume_alpha(&AlphaSixTuple::from_angles(theta, mu))
}

pub fn volume_alpha(alpha: &AlphaSixTuple) -> Result<f64> {
    let crit = critical_xi(alpha)?;
    Ok(big_v(alpha, crit.xi))
}

pub const BISECTION_STEPS: usize = 60;

/// Maximize `V(ξ)` over `[max τ, min(min η, 2π)]`. Needs a hyperideal vertex.
pub fn volume_by_max(alpha: &AlphaSixTuple) -> Result<(f64, f64)> {
    let g = GramMatrix::from_angles(&alpha.angles());
    if !(0..4).any(|i| vertex_type(&g, i, DEFAULT_TOL) == VertexType::Hyperideal) {
        return Err(Error::NoHyperidealVertex);
    }
    let te = tau_eta(alpha);
    let lo0 = te.tau.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let hi0 = te.eta.iter().cloned().fold(2.0 * PI, f64::min);
    if lo0 >= hi0 {
        return Ok((lo0, big_v(alpha, lo0)));
    }
    let (mut lo, mut hi) = (lo0, hi0);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if s_prime(&te, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let xi0 = 0.5 * (lo + hi);
    let width = hi0 - lo0;
    for x in [xi0, lo0 + 0.25 * width, lo0 + 0.5 * width, lo0 + 0.75 * width] {
        let d2 = s_second(&te, x);
        if d2.is_finite() && d2 > 1e-9 {
            return Err(Error::ConcavityFailed(x));
        }
    }
    Ok((xi0, big_v(alpha, xi0)))
}

fn stratum(theta: &AngleSixTuple) -> Result<[VertexType; 4]> {
    let g = GramMatrix::from_angles(theta);
    let sig = signature(&g, DEFAULT_TOL);
    if (sig.pos, sig.neg) != (3, 1) {
        return Err(Error::NotHyperbolic);
    }
    Ok(std::array::from_fn(|i| vertex_type(&g, i, DEFAULT_TOL)))
}

/// `∂Vol/∂θ_k + l_k/2` by central differences with step `h`, one entry per angle.
pub fn schlafli_residual(theta: &AngleSixTuple, mu: BranchSigns, h: f64) -> Result<[f64; 6]> {
    let base = stratum(theta)?;
    if base.contains(&VertexType::Ideal) {
        return Err(Error::StepCrossesStratum);
    }
    let g = GramMatrix::from_angles(theta);
    let mut out = [0.0; 6];
    for (k, slot) in out.iter_mut().enumerate() {
        let t = theta.values()[k];
        let plus = theta.with(k, t + h).map_err(|_| Error::StepCrossesStratum)?;
        let minus = theta.with(k, t - h).map_err(|_| Error::StepCrossesStratum)?;
        for p in [&plus, &minus] {
            if stratum(p).ok() != Some(base) {
                return Err(Error::StepCrossesStratum);
            }
        }
        let fd = (volume(&plus, mu)? - volume(&minus, mu)?) / (2.0 * h);
        *slot = fd + 0.5 * edge_length(&g, k, DEFAULT_TOL)?;
    }
    Ok(out)
}
