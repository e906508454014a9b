use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use qtet::gram::{
    admissible, signature, strictly_admissible, AlphaSixTuple, AngleSixTuple, GeometryClass,
    GramMatrix,
};
use qtet::graphs::{prism_conjecture_check, PrismSpec};
use qtet::growth::{fit_growth, growth_series, GrowthFit, GrowthPlan, GrowthSample, SkippedLevel};
use qtet::qnum::OddLevel;
use qtet::sixj::{sixj_log, ColorSixTuple};
use qtet::tetra::{reconstruct, vertex_type, MinkowskiVector, VertexType};
use qtet::volfun::{self, critical_xi, lobachevsky, schlafli_residual, tau_eta};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::angle::AngleLiteral;
use crate::{CliError, Format, LevelRange, RunConfig};

type CmdResult = Result<(), CliError>;

fn theta_of(angles: &[AngleLiteral]) -> Result<AngleSixTuple, CliError> {
    let values: [f64; 6] = angles
        .iter()
        .map(|a| a.radians())
        .collect::<Vec<_>>()
        .try_into()
        .map_err(|v: Vec<f64>| CliError::Parse(format!("expected six angles, got {}", v.len())))?;
    Ok(AngleSixTuple::new(values)?)
}

fn json_only(cfg: &RunConfig, command: &str) -> CmdResult {
    match cfg.format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Parse(format!(
            "{command} has no tabular output; csv is available for growth and lobachevsky-table"
        ))),
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, report: &T) -> CmdResult {
    let text = serde_json::to_string(report).map_err(|e| CliError::Parse(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn rows(m: &nalgebra::Matrix4<f64>) -> [[f64; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]))
}

fn coords(v: &MinkowskiVector) -> [f64; 4] {
    std::array::from_fn(|i| v.0[i])
}

#[derive(Serialize)]
struct ClassifyReport {
    theta: [f64; 6],
    alpha: [f64; 6],
    admissible: bool,
    strictly_admissible: bool,
    gram: [[f64; 4]; 4],
    det: f64,
    eigenvalues: [f64; 4],
    signature: String,
    class: GeometryClass,
    cofactor_signs: [i8; 4],
    vertex_types: Option<[VertexType; 4]>,
}

pub fn classify(cfg: &RunConfig, angles: &[AngleLiteral], out: &mut dyn Write) -> CmdResult {
    json_only(cfg, "classify")?;
    let theta = theta_of(angles)?;
    let alpha = AlphaSixTuple::from_angles(&theta, cfg.mu);
    let g = GramMatrix::from_angles(&theta);
    let sig = signature(&g, cfg.tol);
    let class = GeometryClass::from_signature(sig);
    let scale = g.cofactors().abs().max();
    let cofactor_signs = std::array::from_fn(|i| {
        let c = g.cofactor(i, i);
        if c.abs() <= cfg.tol * scale { 0 } else { c.signum() as i8 }
    });
    let vertex_types = (class == GeometryClass::GeneralizedHyperbolic)
        .then(|| std::array::from_fn(|i| vertex_type(&g, i, cfg.tol)));
    emit(
        out,
        &ClassifyReport {
            theta: theta.values(),
            alpha: alpha.values(),
            admissible: admissible(&alpha),
            strictly_admissible: strictly_admissible(&alpha),
            gram: rows(g.matrix()),
            det: g.det(),
            eigenvalues: g.eigenvalues(),
            signature: sig.to_string(),
            class,
            cofactor_signs,
            vertex_types,
        },
    )
}

#[derive(Serialize)]
struct RandomClassifyReport {
    samples: usize,
    seed: u64,
    mu: String,
    inadmissible: usize,
    /// Class counts over the admissible samples.
    classes: BTreeMap<String, usize>,
}

pub fn classify_random(cfg: &RunConfig, samples: usize, out: &mut dyn Write) -> CmdResult {
    json_only(cfg, "classify")?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut classes = BTreeMap::new();
    let mut inadmissible = 0;
    for _ in 0..samples {
        let theta = AngleSixTuple::new(std::array::from_fn(|_| rng.gen_range(0.0..=PI)))?;
        let alpha = AlphaSixTuple::from_angles(&theta, cfg.mu);
        if !admissible(&alpha) {
            inadmissible += 1;
            continue;
        }
        let sig = signature(&GramMatrix::from_angles(&theta), cfg.tol);
        *classes.entry(format!("{:?}", GeometryClass::from_signature(sig))).or_insert(0) += 1;
    }
    emit(out, &RandomClassifyReport { samples, seed: cfg.seed, mu: cfg.mu.to_string(), inadmissible, classes })
}

#[derive(Serialize)]
struct TetraReport {
    theta: [f64; 6],
    case: String,
    vertex_types: [VertexType; 4],
    /// Signed; `null` stands for an infinite length at an ideal vertex.
    edge_lengths: [f64; 6],
    normals: [[f64; 4]; 4],
    vertices: [[f64; 4]; 4],
}

pub fn tetra(cfg: &RunConfig, angles: &[AngleLiteral], out: &mut dyn Write) -> CmdResult {
    json_only(cfg, "tetra")?;
    let theta = theta_of(angles)?;
    let tet = reconstruct(&GramMatrix::from_angles(&theta), cfg.tol)?;
    emit(
        out,
        &TetraReport {
            theta: theta.values(),
            case: tet.case.to_string(),
            vertex_types: tet.vertex_types,
            edge_lengths: tet.edge_lengths,
            normals: tet.normals.each_ref().map(coords),
            vertices: tet.vertices.each_ref().map(coords),
        },
    )
}

#[derive(Serialize)]
struct VolumeReport {
    theta: [f64; 6],
    alpha: [f64; 6],
    mu: String,
    tau: [f64; 4],
    eta: [f64; 3],
    xi: f64,
    xi_star: f64,
    vol: f64,
    /// Present when the angles realize a generalized hyperbolic tetrahedron.
    edge_lengths: Option<[f64; 6]>,
}

pub fn volume(cfg: &RunConfig, angles: &[AngleLiteral], out: &mut dyn Write) -> CmdResult {
    json_only(cfg, "volume")?;
    let theta = theta_of(angles)?;
    let alpha = AlphaSixTuple::from_angles(&theta, cfg.mu);
    let crit = critical_xi(&alpha)?;
    let te = tau_eta(&alpha);
    let vol = volfun::volume(&theta, cfg.mu)?;
    let edge_lengths = reconstruct(&GramMatrix::from_angles(&theta), cfg.tol).ok().map(|t| t.edge_lengths);
    emit(
        out,
        &VolumeReport {
            theta: theta.values(),
            alpha: alpha.values(),
            mu: cfg.mu.to_string(),
            tau: te.tau,
            eta: te.eta,
            xi: crit.xi,
            xi_star: crit.xi_star,
            vol,
            edge_lengths,
        },
    )
}

#[derive(Serialize)]
struct SixjReport {
    colors: [u32; 6],
    r: u32,
    log_abs: f64,
    /// Power of i carried by the value.
    phase: u8,
    re: f64,
    im: f64,
}

pub fn sixj(cfg: &RunConfig, colors: &[u32], r: u32, out: &mut dyn Write) -> CmdResult {
    json_only(cfg, "sixj")?;
    let colors: [u32; 6] = colors
        .try_into()
        .map_err(|_| CliError::Parse(format!("expected six colors, got {}", colors.len())))?;
    let t = ColorSixTuple::new(colors, OddLevel::new(r)?)?;
    let v = sixj_log(&t);
    let z = v.to_complex();
    emit(out, &SixjReport { colors, r, log_abs: v.log_mag(), phase: v.phase(), re: z.re, im: z.im })
}

#[derive(Serialize)]
struct GrowthSummary {
    theta: [f64; 6],
    alpha: [f64; 6],
    vol: f64,
    fit: GrowthFit,
    gap: f64,
    skipped: Vec<SkippedLevel>,
}

fn write_samples_csv(samples: &[GrowthSample], out: &mut dyn Write) -> CmdResult {
    let mut w = csv::Writer::from_writer(out);
    for s in samples {
        w.serialize(s).map_err(|e| CliError::Io(e.into()))?;
    }
    w.flush()?;
    Ok(())
}

/// JSON lines: one object per sample, then a summary with the fit.
pub fn growth(cfg: &RunConfig, angles: &[AngleLiteral], range: &LevelRange, out: &mut dyn Write) -> CmdResult {
    let theta = theta_of(angles)?;
    let mut plan = GrowthPlan::with_range(theta, cfg.mu, range.r_start, range.r_end, range.r_step)?;
    plan.workers = cfg.workers;
    let series = growth_series(&plan)?;
    if cfg.format == Format::Csv {
        return write_samples_csv(&series.samples, out);
    }
    for s in &series.samples {
        writeln!(out, "{}", serde_json::to_string(s).map_err(|e| CliError::Parse(e.to_string()))?)?;
    }
    let vol = volfun::volume(&theta, cfg.mu)?;
    let fit = fit_growth(&series.samples)?;
    let summary = GrowthSummary {
        theta: theta.values(),
        alpha: plan.alpha().values(),
        vol,
        fit,
        gap: (fit.c0 - vol).abs(),
        skipped: series.skipped,
    };
    writeln!(out, "{}", serde_json::to_string(&summary).map_err(|e| CliError::Parse(e.to_string()))?)?;
    Ok(())
}

/// Angles in a spec file may be written as numbers or as angle literals.
#[derive(Deserialize)]
#[serde(untagged)]
enum SpecAngle {
    Number(f64),
    Literal(String),
}

impl SpecAngle {
    fn radians(&self) -> Result<f64, CliError> {
        match self {
            Self::Number(x) => Ok(*x),
            Self::Literal(s) => s
                .parse::<AngleLiteral>()
                .map(AngleLiteral::radians)
                .map_err(|e| CliError::Parse(e.to_string())),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PrismFile {
    vertical: [SpecAngle; 3],
    base_b: [SpecAngle; 3],
    base_c: [SpecAngle; 3],
}

fn read_prism(path: &Path) -> Result<PrismSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let file: PrismFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let triple = |t: &[SpecAngle; 3]| -> Result<[f64; 3], CliError> {
        Ok([t[0].radians()?, t[1].radians()?, t[2].radians()?])
    };
    Ok(PrismSpec { vertical: triple(&file.vertical)?, base_b: triple(&file.base_b)?, base_c: triple(&file.base_c)? })
}

#[derive(Serialize)]
struct PrismReport {
    vertical: [f64; 3],
    base_b: [f64; 3],
    base_c: [f64; 3],
    vol: f64,
    fit: GrowthFit,
    gap: f64,
}

pub fn prism(cfg: &RunConfig, spec: &Path, range: &LevelRange, out: &mut dyn Write) -> CmdResult {
    json_only(cfg, "prism")?;
    let p = read_prism(spec)?;
    let levels = (range.r_start..=range.r_end)
        .step_by(range.r_step as usize)
        .map(OddLevel::new)
        .collect::<qtet::Result<Vec<_>>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| qtet::Error::ThreadPool(e.to_string()))?;
    let check = pool.install(|| prism_conjecture_check(&p, &levels))?;
    emit(
        out,
        &PrismReport {
            vertical: p.vertical,
            base_b: p.base_b,
            base_c: p.base_c,
            vol: check.volume,
            fit: check.fit,
            gap: check.gap,
        },
    )
}

#[derive(Serialize)]
struct SchlafliReport {
    theta: [f64; 6],
    h: f64,
    residuals: [f64; 6],
    max_abs: f64,
}

pub fn schlafli(cfg: &RunConfig, angles: &[AngleLiteral], h: f64, out: &mut dyn Write) -> CmdResult {
    json_only(cfg, "schlafli")?;
    let theta = theta_of(angles)?;
    let residuals = schlafli_residual(&theta, cfg.mu, h)?;
    let max_abs = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    emit(out, &SchlafliReport { theta: theta.values(), h, residuals, max_abs })
}

#[derive(Serialize)]
struct LobachevskyRow {
    theta: f64,
    lobachevsky: f64,
}

pub fn lobachevsky_table(cfg: &RunConfig, steps: usize, out: &mut dyn Write) -> CmdResult {
    if steps == 0 {
        return Err(CliError::Parse("steps must be positive".into()));
    }
    let table: Vec<LobachevskyRow> = (0..=steps)
        .map(|k| {
            let theta = PI * k as f64 / steps as f64;
            LobachevskyRow { theta, lobachevsky: lobachevsky(theta) }
        })
        .collect();
    match cfg.format {
        Format::Json => emit(out, &table),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in &table {
                w.serialize(row).map_err(|e| CliError::Io(e.into()))?;
            }
            w.flush()?;
            Ok(())
        }
    }
}
