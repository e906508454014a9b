//! Dihedral-angle tuples, their Gram matrices and the signature classification.
//!
//! Angle `k` (0-based) is the dihedral angle between faces `ANGLE_FACES[k]`, so the
//! Gram matrix has `-cos θ_k` at that position. Vertex `v` is opposite face `v`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Face pairs carrying each angle.
pub const ANGLE_FACES: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 2), (2, 3), (1, 3), (0, 3)];
/// Angles at the edges through vertex `v`. Row `v` matches `sixj::VERTEX_TRIPLES[3 - v]`.
pub const VERTEX_ANGLES: [[usize; 3]; 4] = [[2, 3, 4], [1, 3, 5], [0, 4, 5], [0, 1, 2]];

pub const DEFAULT_TOL: f64 = 1e-9;

/// Dihedral angles, each in `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleSixTuple([f64; 6]);

impl AngleSixTuple {
    pub fn new(theta: [f64; 6]) -> Result<Self> {
        if theta.iter().all(|t| t.is_finite() && (0.0..=PI).contains(t)) {
            Ok(Self(theta))
        } else {
            Err(Error::NotAdmissible)
        }
    }

    pub fn uniform(theta: f64) -> Result<Self> {
        Self::new([theta; 6])
    }

    pub fn values(&self) -> [f64; 6] {
        self.0
    }

    pub fn with(&self, k: usize, value: f64) -> Result<Self> {
        let mut t = self.0;
        t[k] = value;
        Self::new(t)
    }
}

/// One sign per angle, picking `α = π + μθ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchSigns([i8; 6]);

impl BranchSigns {
    pub const ALL_MINUS: Self = Self([-1; 6]);
    pub const ALL_PLUS: Self = Self([1; 6]);

    pub fn new(mu: [i8; 6]) -> Result<Self> {
        if mu.iter().all(|m| *m == 1 || *m == -1) {
            Ok(Self(mu))
        } else {
            Err(Error::NotAdmissible)
        }
    }

    /// Branch `bits`: bit `k` set means a plus sign on angle `k`.
    pub fn from_bits(bits: u8) -> Self {
        Self(std::array::from_fn(|k| if bits >> k & 1 == 1 { 1 } else { -1 }))
    }

    pub fn all() -> impl Iterator<Item = Self> {
        (0u8..64).map(Self::from_bits)
    }

    pub fn values(&self) -> [i8; 6] {
        self.0
    }
}

impl Default for BranchSigns {
    fn default() -> Self {
        Self::ALL_MINUS
    }
}

impl FromStr for BranchSigns {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let signs: Vec<i8> = s
            .chars()
            .filter(|c| *c != ',' && !c.is_whitespace())
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(format!("expected '+' or '-', found {other:?}")),
            })
            .collect::<std::result::Result<_, _>>()?;
        let arr: [i8; 6] = signs
            .try_into()
            .map_err(|v: Vec<i8>| format!("expected six signs, found {}", v.len()))?;
        Ok(Self(arr))
    }
}

impl fmt::Display for BranchSigns {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in self.0 {
            f.write_str(if m > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// Angles `α ∈ [0, 2π]`, related to dihedral angles by `θ = |π - α|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaSixTuple([f64; 6]);

impl AlphaSixTuple {
    pub fn new(alpha: [f64; 6]) -> Result<Self> {
        if alpha.iter().all(|a| a.is_finite() && (0.0..=2.0 * PI).contains(a)) {
            Ok(Self(alpha))
        } else {
            Err(Error::NotAdmissible)
        }
    }

    pub fn from_angles(theta: &AngleSixTuple, mu: BranchSigns) -> Self {
        Self(std::array::from_fn(|k| PI + mu.0[k] as f64 * theta.0[k]))
    }

    pub fn values(&self) -> [f64; 6] {
        self.0
    }

    pub fn angles(&self) -> AngleSixTuple {
        AngleSixTuple(self.0.map(|a| (PI - a).abs()))
    }

    /// The branch; `α = π` is assigned a minus sign.
    pub fn branch(&self) -> BranchSigns {
        BranchSigns(self.0.map(|a| if a > PI { 1 } else { -1 }))
    }
}

fn triples_of(alpha: &[f64; 6]) -> impl Iterator<Item = [f64; 3]> + '_ {
    crate::sixj::VERTEX_TRIPLES.iter().map(move |t| [alpha[t[0]], alpha[t[1]], alpha[t[2]]])
}

/// Closed admissibility: triangle inequalities and sum at most 4π at every corner.
pub fn admissible(alpha: &AlphaSixTuple) -> bool {
    triples_of(&alpha.0).all(|[a, b, c]| {
        b + c - a >= 0.0 && a + c - b >= 0.0 && a + b - c >= 0.0 && a + b + c <= 4.0 * PI
    })
}

/// Open admissibility, additionally excluding `α ∈ {0, π, 2π}`.
pub fn strictly_admissible(alpha: &AlphaSixTuple) -> bool {
    alpha.0.iter().all(|&a| a > 0.0 && a < 2.0 * PI && a != PI)
        && triples_of(&alpha.0).all(|[a, b, c]| {
            b + c - a > 0.0 && a + c - b > 0.0 && a + b - c > 0.0 && a + b + c < 4.0 * PI
        })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramMatrix(Matrix4<f64>);

impl GramMatrix {
    pub fn from_angles(theta: &AngleSixTuple) -> Self {
        let mut m = Matrix4::identity();
        for (k, &(i, j)) in ANGLE_FACES.iter().enumerate() {
            let c = -theta.0[k].cos();
            m[(i, j)] = c;
            m[(j, i)] = c;
        }
        Self(m)
    }

    /// Wraps a symmetric matrix; asymmetric input is symmetrized.
    pub fn from_matrix(m: Matrix4<f64>) -> Self {
        Self((m + m.transpose()) * 0.5)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn det(&self) -> f64 {
        self.0.determinant()
    }

    /// Signed cofactor `(-1)^(i+j) det(G without row i, column j)`, 0-based.
    pub fn cofactor(&self, i: usize, j: usize) -> f64 {
        let rows: Vec<usize> = (0..4).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
        let minor = Matrix3::from_fn(|a, b| self.0[(rows[a], cols[b])]);
        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        sign * minor.determinant()
    }

    pub fn cofactors(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|i, j| self.cofactor(i, j))
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        crate::eigen::symmetric_eigen(&self.0).0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub pos: u8,
    pub neg: u8,
    pub zero: u8,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.pos, self.neg, self.zero)
    }
}

/// Eigenvalue sign counts; an eigenvalue counts as zero below `tol` times the spectral norm.
pub fn signature(g: &GramMatrix, tol: f64) -> Signature {
    let ev = g.eigenvalues();
    let norm = ev.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let thr = tol * norm;
    let count = |p: &dyn Fn(f64) -> bool| ev.iter().filter(|&&e| p(e)).count() as u8;
    Signature {
        pos: count(&|e| e > thr),
        neg: count(&|e| e < -thr),
        zero: count(&|e| e.abs() <= thr),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeometryClass {
    Spherical,
    GeneralizedEuclidean,
    GeneralizedHyperbolic,
    EuclideanLines,
    HyperbolicLines,
    Indeterminate,
}

impl GeometryClass {
    pub fn from_signature(s: Signature) -> Self {
        match (s.pos, s.neg) {
            (4, 0) => Self::Spherical,
            (3, 0) => Self::GeneralizedEuclidean,
            (3, 1) => Self::GeneralizedHyperbolic,
            (2, 0) | (1, 0) => Self::EuclideanLines,
            (2, 1) => Self::HyperbolicLines,
            _ => Self::Indeterminate,
        }
    }
}

pub fn classify(alpha: &AlphaSixTuple, tol: f64) -> Result<GeometryClass> {
    if !admissible(alpha) {
        return Err(Error::NotAdmissible);
    }
    let g = GramMatrix::from_angles(&alpha.angles());
    Ok(GeometryClass::from_signature(signature(&g, tol)))
}

/// Replace the three angles involving face `v` by their supplements.
pub fn change_angles_opposite_vertex(theta: &AngleSixTuple, v: usize) -> Result<AngleSixTuple> {
    if v > 3 {
        return Err(Error::IndexOutOfRange { index: v, max: 3 });
    }
    let mut t = theta.0;
    for (k, &(i, j)) in ANGLE_FACES.iter().enumerate() {
        if i == v || j == v {
            t[k] = PI - t[k];
        }
    }
    Ok(AngleSixTuple(t))
}

/// All four vertex angle sums below π.
pub fn hyperideal_by_bonahon_bao(theta: &AngleSixTuple) -> bool {
    VERTEX_ANGLES.iter().all(|v| v.iter().map(|&k| theta.0[k]).sum::<f64>() < PI)
}
