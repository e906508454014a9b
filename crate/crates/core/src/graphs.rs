//! Trivalent graphs grown from the tetrahedral graph by blow-up moves, their Kauffman
//! brackets as products of 6j-symbols, and the prism case.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram::{AlphaSixTuple, AngleSixTuple, BranchSigns};
use crate::growth::{colors_for_r, fit_growth, GrowthFit, GrowthSample};
use crate::qnum::{quantum_integer, OddLevel, QuarterPhaseLog};
use crate::sixj::{sixj_log, ColorSixTuple, VERTEX_TRIPLES};
use crate::volfun::volume;

/// Value of an unknotted loop colored `i`: `(-1)^(i+1) [i+1]`.
pub fn loop_value(level: OddLevel, i: u32) -> f64 {
    let sign = if i % 2 == 0 { -1.0 } else { 1.0 };
    sign * quantum_integer(level, i as i64 + 1)
}

/// A graph obtained from the tetrahedral graph by replacing vertices with triangles.
///
/// Edge ids are assigned in creation order (0..6 for the tetrahedron, then three per move).
/// Vertex ids likewise: 0..4, then three new ones per move; a blown-up vertex disappears.
/// Each move adds one tetrahedron to the decomposition whose slots 0..3 are the edges
/// that met at the removed vertex and slots 3..6 the new triangle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowUpGraph {
    tets: Vec<[usize; 6]>,
    /// Live vertices: (tetrahedron, corner) holding their star.
    vertices: Vec<Option<(usize, usize)>>,
    moves: Vec<usize>,
}

impl BlowUpGraph {
    pub fn tetrahedral() -> Self {
        Self {
            tets: vec![[0, 1, 2, 3, 4, 5]],
            vertices: (0..4).map(|c| Some((0, c))).collect(),
            moves: Vec::new(),
        }
    }

    pub fn from_moves(moves: &[usize]) -> Result<Self> {
        let mut g = Self::tetrahedral();
        for &v in moves {
            g.blow_up(v)?;
        }
        Ok(g)
    }

    /// Prism graph: edges 0..3 vertical, 3..6 one base, 6..9 the other.
    pub fn prism() -> Self {
        Self::from_moves(&[0]).expect("vertex 0 exists")
    }

    pub fn blow_up(&mut self, v: usize) -> Result<()> {
        let (t, corner) = self
            .vertices
            .get(v)
            .copied()
            .flatten()
            .ok_or(Error::UnknownVertex(v))?;
        let star = VERTEX_TRIPLES[corner].map(|s| self.tets[t][s]);
        let n = self.edge_count();
        self.tets.push([star[0], star[1], star[2], n, n + 1, n + 2]);
        let new_t = self.tets.len() - 1;
        self.vertices[v] = None;
        self.vertices.extend((1..4).map(|c| Some((new_t, c))));
        self.moves.push(v);
        Ok(())
    }

    pub fn edge_count(&self) -> usize {
        6 + 3 * self.moves.len()
    }

    pub fn moves(&self) -> &[usize] {
        &self.moves
    }

    pub fn tet_decomposition(&self) -> &[[usize; 6]] {
        &self.tets
    }

    pub fn live_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices.iter().enumerate().filter(|(_, v)| v.is_some()).map(|(i, _)| i)
    }
}

/// Kauffman bracket of a colored blow-up graph: the product of the 6j-symbols of its pieces.
pub fn bracket_blowup(g: &BlowUpGraph, colors: &[u32], level: OddLevel) -> Result<QuarterPhaseLog> {
    if colors.len() != g.edge_count() {
        return Err(Error::ColoringLength { expected: g.edge_count(), got: colors.len() });
    }
    g.tets.iter().enumerate().try_fold(QuarterPhaseLog::ONE, |acc, (index, tet)| {
        let t = ColorSixTuple::new(tet.map(|e| colors[e]), level)
            .map_err(|e| Error::Tetrahedron { index, source: Box::new(e) })?;
        Ok(acc * sixj_log(&t))
    })
}

/// Dihedral angles of a prism: vertical edges and the two bases, listed so that
/// `base[k]` lies on the face opposite vertical edge `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrismSpec {
    pub vertical: [f64; 3],
    pub base_b: [f64; 3],
    pub base_c: [f64; 3],
}

impl PrismSpec {
    /// The two tetrahedra obtained by cutting along the plane dual to the apex.
    pub fn pieces(&self) -> Result<[AngleSixTuple; 2]> {
        let join = |base: &[f64; 3]| {
            let [a1, a2, a3] = self.vertical;
            AngleSixTuple::new([a1, a2, a3, base[0], base[1], base[2]])
        };
        Ok([join(&self.base_b)?, join(&self.base_c)?])
    }

    fn check_apex(&self) -> Result<()> {
        if self.vertical.iter().sum::<f64>() < PI {
            Ok(())
        } else {
            Err(Error::ApexNotHyperideal)
        }
    }
}

/// `Vol(T1) + Vol(T2)`, each piece evaluated on the branch `mu`.
pub fn prism_volume(p: &PrismSpec, mu: BranchSigns) -> Result<f64> {
    p.check_apex()?;
    let pieces = p.pieces()?;
    pieces.iter().enumerate().try_fold(0.0, |acc, (index, t)| {
        volume(t, mu)
            .map(|v| acc + v)
            .map_err(|e| Error::Tetrahedron { index, source: Box::new(e) })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrismCheck {
    pub fit: GrowthFit,
    pub volume: f64,
    pub gap: f64,
}

/// Fit the growth of the prism bracket along rounded colorings and compare with the volume.
pub fn prism_conjecture_check(p: &PrismSpec, levels: &[OddLevel]) -> Result<PrismCheck> {
    let vol = prism_volume(p, BranchSigns::ALL_MINUS)?;
    let graph = BlowUpGraph::prism();
    let [t1, t2] = p.pieces()?;
    let a1 = AlphaSixTuple::from_angles(&t1, BranchSigns::ALL_MINUS);
    let a2 = AlphaSixTuple::from_angles(&t2, BranchSigns::ALL_MINUS);
    let samples: Vec<GrowthSample> = levels
        .par_iter()
        .filter_map(|&level| {
            let c1 = colors_for_r(&a1, level).ok()?.colors();
            let c2 = colors_for_r(&a2, level).ok()?.colors();
            let mut colors = c1.to_vec();
            colors.extend_from_slice(&c2[3..]);
            let b = bracket_blowup(&graph, &colors, level).ok()?;
            let r = level.get();
            Some(GrowthSample {
                r,
                log_abs: b.log_mag(),
                scaled: 2.0 * PI / r as f64 * b.log_mag(),
                sign: b.real_sign().unwrap_or(0),
            })
        })
        .collect();
    let mut samples = samples;
    samples.sort_by_key(|s| s.r);
    let fit = fit_growth(&samples)?;
    Ok(PrismCheck { fit, volume: vol, gap: (fit.c0 - vol).abs() })
}
