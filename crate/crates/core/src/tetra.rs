//! Generalized hyperbolic tetrahedra: normals and vertices in Minkowski space, vertex
//! types, edge lengths and the sign-pattern case labels.

use std::fmt;

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::eigen::symmetric_eigen;
use crate::error::{Error, Result};
use crate::gram::{signature, GramMatrix, ANGLE_FACES};

/// Vector in R^{3,1}, time coordinate last.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinkowskiVector(pub Vector4<f64>);

impl MinkowskiVector {
    pub fn inner(&self, other: &Self) -> f64 {
        let (a, b) = (&self.0, &other.0);
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3]
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0 * s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexType {
    Regular,
    Ideal,
    Hyperideal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DistanceKind {
    VertexVertex,
    VertexPlane,
    PlanePlane,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeDistance {
    /// `+inf` when an endpoint is ideal.
    pub d: f64,
    pub kind: DistanceKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentSide {
    /// The geodesic segment between the two points crosses the ball.
    SegmentMeets,
    /// The complementary part of the line crosses the ball.
    ComplementMeets,
}

/// Cofactor data of a Gram matrix with a tolerance for zero tests.
#[derive(Debug, Clone, Copy)]
struct Cofactors {
    cof: Matrix4<f64>,
    zero: f64,
}

impl Cofactors {
    fn new(g: &GramMatrix, tol: f64) -> Self {
        let cof = g.cofactors();
        let scale = cof.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        Self { cof, zero: tol * scale }
    }

    fn vertex_type(&self, i: usize) -> VertexType {
        let c = self.cof[(i, i)];
        if c > self.zero {
            VertexType::Regular
        } else if c < -self.zero {
            VertexType::Hyperideal
        } else {
            VertexType::Ideal
        }
    }
}

pub fn vertex_type(g: &GramMatrix, i: usize, tol: f64) -> VertexType {
    Cofactors::new(g, tol).vertex_type(i)
}

/// Distance between vertices `i` and `j` (or the truncation planes for hyperideal ones).
pub fn distance(g: &GramMatrix, i: usize, j: usize, tol: f64) -> Result<EdgeDistance> {
    distance_with(&Cofactors::new(g, tol), i, j)
}

fn distance_with(c: &Cofactors, i: usize, j: usize) -> Result<EdgeDistance> {
    use VertexType::*;
    let (ti, tj) = (c.vertex_type(i), c.vertex_type(j));
    let (gii, gjj, gij) = (c.cof[(i, i)], c.cof[(j, j)], c.cof[(i, j)]);
    let kind = match (ti, tj) {
        (Hyperideal, Hyperideal) => DistanceKind::PlanePlane,
        (Hyperideal, _) | (_, Hyperideal) => DistanceKind::VertexPlane,
        _ => DistanceKind::VertexVertex,
    };
    if ti == Ideal || tj == Ideal {
        return Ok(EdgeDistance { d: f64::INFINITY, kind });
    }
    let d = if (gii > 0.0) == (gjj > 0.0) {
        let x = gij.abs() / (gii * gjj).sqrt();
        if x < 1.0 - 1e-9 {
            return Err(Error::InconsistentGram(format!(
                "cosh of distance {x} below 1 between vertices {i} and {j}"
            )));
        }
        x.max(1.0).acosh()
    } else {
        (gij.abs() / (-gii * gjj).sqrt()).asinh()
    };
    Ok(EdgeDistance { d, kind })
}

/// Signed length of the edge carrying angle `k`: the distance between the two vertices
/// off faces `ANGLE_FACES[k]`, negative when their cofactor is not positive.
pub fn edge_length(g: &GramMatrix, k: usize, tol: f64) -> Result<f64> {
    edge_length_with(&Cofactors::new(g, tol), k)
}

fn edge_length_with(c: &Cofactors, k: usize) -> Result<f64> {
    if k > 5 {
        return Err(Error::IndexOutOfRange { index: k, max: 5 });
    }
    let (a, b) = ANGLE_FACES[k];
    let mut rest = (0..4).filter(|&v| v != a && v != b);
    let (p, q) = (rest.next().unwrap(), rest.next().unwrap());
    let d = distance_with(c, p, q)?.d;
    Ok(if c.cof[(p, q)] > 0.0 { d } else { -d })
}

/// Which part of the line through two hyperideal vertices meets the ball.
pub fn segment_side(g: &GramMatrix, i: usize, j: usize, tol: f64) -> Result<SegmentSide> {
    let c = Cofactors::new(g, tol);
    if c.vertex_type(i) != VertexType::Hyperideal || c.vertex_type(j) != VertexType::Hyperideal {
        return Err(Error::InconsistentGram("segment side needs two hyperideal vertices".into()));
    }
    let bound = (c.cof[(i, i)] * c.cof[(j, j)]).sqrt();
    let gij = c.cof[(i, j)];
    if gij >= bound * (1.0 - 1e-12) {
        Ok(SegmentSide::SegmentMeets)
    } else if gij <= -bound * (1.0 - 1e-12) {
        Ok(SegmentSide::ComplementMeets)
    } else {
        Err(Error::LineMissesBall)
    }
}

/// Sign-pattern label: family 1..=5 (number of hyperideal vertices plus one), a letter,
/// and the vertices whose opposite angles were supplemented to reach the pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseLabel {
    pub family: u8,
    pub pattern: char,
    pub flips: Vec<usize>,
}

impl CaseLabel {
    /// The letter used for "otherwise" in this family.
    pub fn otherwise_letter(&self) -> char {
        match self.family {
            1 | 5 => 'd',
            _ => 'e',
        }
    }

    pub fn reduced(&self) -> bool {
        !self.flips.is_empty()
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.flips.is_empty() {
            write!(f, "{}{}", self.family, self.pattern)
        } else {
            let flips: Vec<String> = self.flips.iter().map(|v| (v + 1).to_string()).collect();
            write!(
                f,
                "{}{} -> {}{} (flips at {})",
                self.family,
                self.otherwise_letter(),
                self.family,
                self.pattern,
                flips.join(",")
            )
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Req {
    Pos,
    NonPos,
    Neg,
}

// Roles (i, j, k, l) = (0, 1, 2, 3); listed pairs carry the requirement, all others must be positive.
type Pattern = (char, &'static [((usize, usize), Req)]);

const FAMILY_1: &[Pattern] = &[
    ('a', &[]),
    ('b', &[((0, 3), Req::Neg), ((1, 3), Req::Neg), ((2, 3), Req::Neg)]),
    ('c', &[((0, 2), Req::Neg), ((0, 3), Req::Neg), ((1, 2), Req::Neg), ((1, 3), Req::Neg)]),
];
const FAMILY_2: &[Pattern] = &[
    ('a', &[]),
    ('b', &[((2, 3), Req::NonPos)]),
    ('c', &[((1, 3), Req::NonPos), ((2, 3), Req::NonPos)]),
    ('d', &[((0, 3), Req::NonPos), ((1, 3), Req::NonPos), ((2, 3), Req::NonPos)]),
];
const FAMILY_3: &[Pattern] = &[
    ('a', &[]),
    ('b', &[((1, 2), Req::NonPos)]),
    ('c', &[((0, 2), Req::NonPos), ((1, 2), Req::NonPos)]),
    ('d', &[((0, 3), Req::NonPos), ((1, 2), Req::NonPos)]),
];
const FAMILY_4: &[Pattern] = &[
    ('a', &[]),
    ('b', &[((0, 1), Req::NonPos)]),
    ('c', &[((2, 3), Req::Neg)]),
    ('d', &[((0, 1), Req::NonPos), ((2, 3), Req::Neg)]),
];
const FAMILY_5: &[Pattern] = &[
    ('a', &[]),
    ('b', &[((2, 3), Req::Neg)]),
    ('c', &[((0, 1), Req::Neg), ((2, 3), Req::Neg)]),
];

fn permutations() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in (0..4).filter(|&b| b != a) {
            for c in (0..4).filter(|&c| c != a && c != b) {
                out.push([a, b, c, 6 - a - b - c]);
            }
        }
    }
    out
}

fn match_pattern(off: &Matrix4<f64>, zero: f64, hyper: &[bool; 4], family: u8) -> Option<char> {
    let patterns = match family {
        1 => FAMILY_1,
        2 => FAMILY_2,
        3 => FAMILY_3,
        4 => FAMILY_4,
        _ => FAMILY_5,
    };
    // number of leading roles that must be non-hyperideal
    let regular_roles = (5 - family) as usize;
    let perms = permutations();
    for &(letter, reqs) in patterns {
        for p in &perms {
            if (0..4).any(|role| hyper[p[role]] != (role >= regular_roles)) {
                continue;
            }
            let ok = (0..4).all(|x| {
                (x + 1..4).all(|y| {
                    let v = off[(p[x], p[y])];
                    let req = reqs
                        .iter()
                        .find(|((a, b), _)| (*a, *b) == (x, y))
                        .map(|(_, r)| *r)
                        .unwrap_or(Req::Pos);
                    match req {
                        Req::Pos => v > zero,
                        Req::NonPos => v <= zero,
                        Req::Neg => v < -zero,
                    }
                })
            });
            if ok {
                return Some(letter);
            }
        }
    }
    None
}

/// Case label of a generalized hyperbolic tetrahedron. Patterns are tried directly first;
/// otherwise the vertices flipped are the first subset (by size, then lexicographic) that
/// lands in a listed pattern.
pub fn case_label(g: &GramMatrix, tol: f64) -> Result<CaseLabel> {
    let c = Cofactors::new(g, tol);
    let hyper: [bool; 4] = std::array::from_fn(|i| c.vertex_type(i) == VertexType::Hyperideal);
    let family = hyper.iter().filter(|h| **h).count() as u8 + 1;
    // flipping a vertex set S negates the cofactors with exactly one index in S;
    // S and its complement act the same, so subsets avoiding vertex 3 suffice
    let subsets: [&[usize]; 8] = [&[], &[0], &[1], &[2], &[3], &[0, 1], &[0, 2], &[0, 3]];
    for s in subsets {
        let flipped = Matrix4::from_fn(|i, j| {
            if s.contains(&i) != s.contains(&j) {
                -c.cof[(i, j)]
            } else {
                c.cof[(i, j)]
            }
        });
        if let Some(pattern) = match_pattern(&flipped, c.zero, &hyper, family) {
            return Ok(CaseLabel { family, pattern, flips: s.to_vec() });
        }
    }
    Err(Error::UnclassifiedPattern)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedTetrahedron {
    pub gram: GramMatrix,
    /// Outward unit normals of the four faces.
    pub normals: [MinkowskiVector; 4],
    /// Vertices; unit time/space-like for regular/hyperideal, light-like for ideal.
    pub vertices: [MinkowskiVector; 4],
    pub vertex_types: [VertexType; 4],
    /// Signed edge lengths, one per angle slot.
    pub edge_lengths: [f64; 6],
    pub case: CaseLabel,
}

/// Realize a Gram matrix of signature (3,1) by normals `u_i` with `<u_i, u_j> = G_ij`.
pub fn reconstruct(g: &GramMatrix, tol: f64) -> Result<GeneralizedTetrahedron> {
    let sig = signature(g, tol);
    if (sig.pos, sig.neg) != (3, 1) {
        return Err(Error::NotHyperbolic);
    }
    let (eigenvalues, eigenvectors) = symmetric_eigen(g.matrix());
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| eigenvalues[b].total_cmp(&eigenvalues[a]));
    // row k of U is sqrt|λ| times the k-th eigenvector; the negative one becomes time
    let u = Matrix4::from_fn(|k, i| {
        let e = order[k];
        eigenvalues[e].abs().sqrt() * eigenvectors[(i, e)]
    });
    let normals: [MinkowskiVector; 4] = std::array::from_fn(|i| MinkowskiVector(u.column(i).into()));

    let c = Cofactors::new(g, tol);
    let det = g.det();
    let vertex_types: [VertexType; 4] = std::array::from_fn(|i| c.vertex_type(i));
    let vertices = std::array::from_fn(|i| {
        let w = (0..4).fold(Vector4::zeros(), |acc, j| acc + normals[j].0 * c.cof[(i, j)]);
        let w = MinkowskiVector(w);
        match vertex_types[i] {
            VertexType::Ideal => w,
            _ => w.scaled(1.0 / (c.cof[(i, i)] * det).abs().sqrt()),
        }
    });
    let mut edge_lengths = [0.0; 6];
    for (k, l) in edge_lengths.iter_mut().enumerate() {
        *l = edge_length_with(&c, k)?;
    }
    Ok(GeneralizedTetrahedron {
        gram: *g,
        normals,
        vertices,
        vertex_types,
        edge_lengths,
        case: case_label(g, tol)?,
    })
}
