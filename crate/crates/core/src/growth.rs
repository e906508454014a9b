//! Exponential growth of 6j-symbol sequences along rounded colorings, and the fit of
//! their scaled logarithms.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram::{AlphaSixTuple, AngleSixTuple, BranchSigns, GramMatrix, DEFAULT_TOL};
use crate::qnum::OddLevel;
use crate::sixj::{sixj_log, ColorSixTuple};
use crate::tetra::{edge_length, vertex_type, VertexType};
use crate::volfun::volume;

pub const MIN_FIT_SAMPLES: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthPlan {
    pub theta: AngleSixTuple,
    pub mu: BranchSigns,
    pub levels: Vec<OddLevel>,
    /// Worker threads; 0 lets rayon decide.
    pub workers: usize,
}

impl GrowthPlan {
    /// Levels `start, start + step, ...` up to `end`; `step` must be even so every level stays odd.
    pub fn with_range(
        theta: AngleSixTuple,
        mu: BranchSigns,
        start: u32,
        end: u32,
        step: u32,
    ) -> Result<Self> {
        if step == 0 || step % 2 == 1 {
            return Err(Error::InvalidLevel(step));
        }
        let levels = (start..=end)
            .step_by(step as usize)
            .map(OddLevel::new)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { theta, mu, levels, workers: 0 })
    }

    pub fn alpha(&self) -> AlphaSixTuple {
        AlphaSixTuple::from_angles(&self.theta, self.mu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthSample {
    pub r: u32,
    pub log_abs: f64,
    /// `(2π/r) log|6j|`.
    pub scaled: f64,
    /// Sign of a real symbol; 0 when the symbol is purely imaginary.
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedLevel {
    pub r: u32,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthSeries {
    pub samples: Vec<GrowthSample>,
    pub skipped: Vec<SkippedLevel>,
}

/// `c0 + c1 ln(r)/r + c2/r`, least squares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub residual_rms: f64,
}

/// Nearest even integer to `r α / 2π` (ties downward), clamped to the even colors `0..=r-3`.
pub fn colors_for_r(alpha: &AlphaSixTuple, level: OddLevel) -> Result<ColorSixTuple> {
    let r = level.get();
    let colors = alpha.values().map(|a| {
        let x = r as f64 * a / (2.0 * PI);
        let below = 2.0 * (x / 2.0).floor();
        let even = if x - below <= 1.0 { below } else { below + 2.0 };
        even.clamp(0.0, (r - 3) as f64) as u32
    });
    ColorSixTuple::new(colors, level).map_err(|_| Error::NoAdmissibleRounding(r))
}

pub fn growth_sample(alpha: &AlphaSixTuple, level: OddLevel) -> Result<GrowthSample> {
    let t = colors_for_r(alpha, level)?;
    let v = sixj_log(&t);
    let r = level.get();
    Ok(GrowthSample {
        r,
        log_abs: v.log_mag(),
        scaled: 2.0 * PI / r as f64 * v.log_mag(),
        sign: v.real_sign().unwrap_or(0),
    })
}

pub fn growth_series(plan: &GrowthPlan) -> Result<GrowthSeries> {
    let alpha = plan.alpha();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.workers)
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))?;
    let results: Vec<(u32, Result<GrowthSample>)> = pool.install(|| {
        plan.levels.par_iter().map(|&l| (l.get(), growth_sample(&alpha, l))).collect()
    });
    let mut samples = Vec::new();
    let mut skipped = Vec::new();
    for (r, res) in results {
        match res {
            Ok(s) => samples.push(s),
            Err(e) => skipped.push(SkippedLevel { r, reason: e.to_string() }),
        }
    }
    samples.sort_by_key(|s| s.r);
    skipped.sort_by_key(|s| s.r);
    Ok(GrowthSeries { samples, skipped })
}

pub fn fit_growth(samples: &[GrowthSample]) -> Result<GrowthFit> {
    if samples.len() < MIN_FIT_SAMPLES {
        return Err(Error::TooFewSamples { needed: MIN_FIT_SAMPLES, got: samples.len() });
    }
    let n = samples.len();
    let design = DMatrix::from_fn(n, 3, |i, j| {
        let r = samples[i].r as f64;
        match j {
            0 => 1.0,
            1 => r.ln() / r,
            _ => 1.0 / r,
        }
    });
    let y = DVector::from_iterator(n, samples.iter().map(|s| s.scaled));
    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if svd.singular_values.min() <= 1e-12 * smax {
        return Err(Error::RankDeficient);
    }
    let c = svd.solve(&y, 1e-14 * smax).map_err(|_| Error::RankDeficient)?;
    let resid = &design * &c - &y;
    Ok(GrowthFit {
        c0: c[0],
        c1: c[1],
        c2: c[2],
        residual_rms: (resid.norm_squared() / n as f64).sqrt(),
    })
}

/// Leading-order prediction of `|6j|` at one level, in log form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Asymp2Prediction {
    pub r: u32,
    pub log_predicted: f64,
    pub log_actual: f64,
}

impl Asymp2Prediction {
    /// `|6j| / prediction`.
    pub fn ratio(&self) -> f64 {
        (self.log_actual - self.log_predicted).exp()
    }
}

pub fn asymp2_prediction(
    theta: &AngleSixTuple,
    mu: BranchSigns,
    level: OddLevel,
) -> Result<Asymp2Prediction> {
    let alpha = AlphaSixTuple::from_angles(theta, mu);
    let colors = colors_for_r(&alpha, level)?;
    let r = level.get() as f64;
    let rounded_alpha =
        AlphaSixTuple::new(colors.colors().map(|a| 2.0 * PI * a as f64 / r))?;
    let theta_r = rounded_alpha.angles();
    let g = GramMatrix::from_angles(&theta_r);
    if (0..4).any(|i| vertex_type(&g, i, DEFAULT_TOL) == VertexType::Ideal) {
        return Err(Error::PredictionUndefined);
    }
    let det = g.det();
    if det >= 0.0 {
        return Err(Error::PredictionUndefined);
    }
    let mut length_term = 0.0;
    for k in 0..6 {
        length_term += mu.values()[k] as f64 * edge_length(&g, k, DEFAULT_TOL)?;
    }
    let vol = volume(&theta_r, mu)?;
    let log_predicted = (2f64.sqrt() * PI).ln() - 1.5 * r.ln() - 0.5 * length_term
        - 0.25 * (-det).ln()
        + r / (2.0 * PI) * vol;
    Ok(Asymp2Prediction {
        r: level.get(),
        log_predicted,
        log_actual: sixj_log(&colors).log_mag(),
    })
}
