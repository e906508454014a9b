//! Acceptance criteria, one line per criterion. Exits non-zero if a gating criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use qtet::gram::{
    classify, strictly_admissible, AlphaSixTuple, AngleSixTuple,
    BranchSigns, GeometryClass, GramMatrix, DEFAULT_TOL,
};
use qtet::graphs::{prism_conjecture_check, PrismSpec};
use qtet::growth::{asymp2_prediction, fit_growth, growth_series, GrowthPlan};
use qtet::qnum::OddLevel;
use qtet::sixj::{change_colors_face, change_colors_quad, sixj_exact_small, sixj_log};
use qtet::tetra::{vertex_type, VertexType};
use qtet::volfun::{critical_xi, schlafli_residual, tau_eta, volume, volume_alpha, volume_by_max};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn example_theta() -> AngleSixTuple {
    let (x, y) = (1.2, PI - 1.2);
    AngleSixTuple::new([x, y, y, x, y, y]).unwrap()
}

fn odd_levels(start: u32, end: u32) -> Vec<OddLevel> {
    (start..=end).step_by(2).map(|r| OddLevel::new(r).unwrap()).collect()
}

fn has_hyperideal(theta: &AngleSixTuple) -> bool {
    let g = GramMatrix::from_angles(theta);
    (0..4).any(|i| vertex_type(&g, i, DEFAULT_TOL) == VertexType::Hyperideal)
}

fn symmetric_critical_point() -> Outcome {
    let a = AlphaSixTuple::new([PI; 6]).unwrap();
    let c = critical_xi(&a).unwrap();
    let (e1, e2) = ((c.xi - 7.0 * PI / 4.0).abs(), (c.xi_star - 5.0 * PI / 4.0).abs());
    let te = tau_eta(&a);
    let interval_ok = te.tau.iter().all(|t| (t - 1.5 * PI).abs() < 1e-15)
        && te.eta.iter().all(|e| (e - 2.0 * PI).abs() < 1e-15);
    outcome(
        e1 <= 1e-12 && e2 <= 1e-12 && interval_ok,
        format!("|xi - 7pi/4| = {e1:.1e}, |xi* - 5pi/4| = {e2:.1e}"),
    )
}

fn flat_volumes() -> Outcome {
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for t in [[PI, 0.0, 0.0, PI, 0.0, 0.0], [PI, PI, PI, 0.0, 0.0, 0.0]] {
        match volume(&AngleSixTuple::new(t).unwrap(), BranchSigns::ALL_MINUS) {
            Ok(v) => worst = worst.max(v.abs()),
            Err(e) => {
                worst = f64::INFINITY;
                notes.push(e.to_string());
            }
        }
    }
    outcome(worst <= 1e-10, format!("max |Vol| = {worst:.1e} {}", notes.join("; ")))
}

fn discriminant_identity() -> Outcome {
    let mut rng = common::rng(3);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let t = common::random_hyperbolic_theta(&mut rng);
        let a = AlphaSixTuple::from_angles(&t, BranchSigns::ALL_MINUS);
        let c = critical_xi(&a).unwrap();
        let det16 = 16.0 * GramMatrix::from_angles(&t).det();
        worst = worst.max((c.disc - det16).abs() / det16.abs());
    }
    outcome(worst <= 1e-9, format!("max relative error {worst:.1e} over 1e4 tuples"))
}

fn classification_law() -> Outcome {
    use GeometryClass::*;
    let mut rng = common::rng(4);
    let (mut bad, mut strict_bad, mut cof_bad, mut strict_count) = (0, 0, 0, 0);
    for _ in 0..100_000 {
        let a = common::random_admissible_alpha(&mut rng);
        let class = classify(&a, DEFAULT_TOL).unwrap();
        if !matches!(class, Spherical | GeneralizedEuclidean | GeneralizedHyperbolic | EuclideanLines) {
            bad += 1;
        }
        if strictly_admissible(&a) {
            strict_count += 1;
            if !matches!(class, Spherical | GeneralizedEuclidean | GeneralizedHyperbolic) {
                strict_bad += 1;
            }
        }
        if has_hyperideal(&a.angles()) && class != GeneralizedHyperbolic {
            cof_bad += 1;
        }
    }
    outcome(
        bad + strict_bad + cof_bad == 0,
        format!(
            "violations: law {bad}, strict law {strict_bad} ({strict_count} strict), G_ii<0 => (3,1) {cof_bad}"
        ),
    )
}

fn octahedron_volume() -> Outcome {
    let v = volume(&AngleSixTuple::uniform(0.0).unwrap(), BranchSigns::ALL_MINUS).unwrap();
    let oracle = 8.0 * common::lobachevsky_quadrature(PI / 4.0);
    let err = (v - oracle).abs();
    outcome(err <= 1e-9, format!("Vol = {v:.15}, quadrature 8 Lambda(pi/4) = {oracle:.15}, err {err:.1e}"))
}

fn formula_cross_agreement() -> Outcome {
    let mut rng = common::rng(6);
    let (mut worst_vol, mut worst_arg, mut n, mut errors) = (0.0f64, 0.0f64, 0, 0);
    while n < 1000 {
        let a = common::random_admissible_alpha(&mut rng);
        if !has_hyperideal(&a.angles()) {
            continue;
        }
        n += 1;
        match (volume_alpha(&a), volume_by_max(&a), critical_xi(&a)) {
            (Ok(v), Ok((xi0, vmax)), Ok(c)) => {
                worst_vol = worst_vol.max((v - vmax).abs());
                // ξ is defined modulo π
                let d = (xi0 - c.xi).rem_euclid(PI);
                worst_arg = worst_arg.max(d.min(PI - d));
            }
            _ => errors += 1,
        }
    }
    outcome(
        worst_vol <= 1e-9 && worst_arg <= 1e-6 && errors == 0,
        format!("max |dVol| = {worst_vol:.1e}, max |argmax - xi(+root)| = {worst_arg:.1e}, errors {errors}"),
    )
}

fn branch_invariance() -> Outcome {
    let mut rng = common::rng(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let t = common::random_hyperbolic_theta(&mut rng);
        let base = volume(&t, BranchSigns::ALL_MINUS).unwrap();
        for mu in BranchSigns::all() {
            let v = volume(&t, mu).map_or(f64::INFINITY, |v| (v - base).abs());
            worst = worst.max(v);
        }
    }
    outcome(worst <= 1e-9, format!("max spread over 64 branches {worst:.1e}"))
}

fn schlafli() -> Outcome {
    let mut rng = common::rng(8);
    let (mut worst, mut n, mut rejected) = (0.0f64, 0, 0);
    while n < 100 {
        let t = common::random_hyperbolic_theta(&mut rng);
        let g = GramMatrix::from_angles(&t);
        // stay clear of ideal vertices, where edge lengths blow up
        if (0..4).any(|i| g.cofactor(i, i).abs() < 1e-2) {
            rejected += 1;
            continue;
        }
        match schlafli_residual(&t, BranchSigns::ALL_MINUS, 1e-4) {
            Ok(res) => {
                n += 1;
                worst = res.iter().fold(worst, |m, x| m.max(x.abs()));
            }
            Err(_) => rejected += 1,
        }
    }
    outcome(worst < 1e-5, format!("max |residual| = {worst:.1e} ({rejected} tuples rejected near strata)"))
}

fn sixj_oracle() -> Outcome {
    let mut rng = common::rng(9);
    let (mut worst, mut worst_sym) = (0.0f64, 0.0f64);
    let (mut moves, mut flips, mut zeros) = (0usize, 0usize, 0usize);
    for _ in 0..10_000 {
        let t = common::random_coloring(&mut rng, 101);
        let exact = sixj_exact_small(&t).unwrap();
        let base = sixj_log(&t);
        if base.is_zero() || exact.norm() < 1e-300 {
            zeros += 1;
            continue;
        }
        worst = worst.max((base.to_complex() - exact).norm() / exact.norm());
        let moved = (1..=4)
            .map(|k| change_colors_face(&t, k).unwrap())
            .chain((1..=3).map(|k| change_colors_quad(&t, k).unwrap()));
        for m in moved {
            let v = sixj_log(&m);
            // Compare magnitudes; the phase may pick up a sign under the square-root convention.
            worst_sym = worst_sym.max((v.log_mag() - base.log_mag()).exp_m1().abs());
            moves += 1;
            if v.phase() != base.phase() {
                flips += 1;
            }
        }
    }
    outcome(
        worst < 1e-9 && worst_sym < 1e-9,
        format!(
            "max relative log/exact gap {worst:.1e}, max |6j| move deviation {worst_sym:.1e} \
             ({flips}/{moves} moves flip the sign, {zeros} vanishing symbols skipped)"
        ),
    )
}

fn growth_reproduction(theta: AngleSixTuple) -> Outcome {
    let plan = GrowthPlan::with_range(theta, BranchSigns::ALL_MINUS, 101, 2001, 2).unwrap();
    let series = growth_series(&plan).unwrap();
    let fit = fit_growth(&series.samples).unwrap();
    let vol = volume(&theta, BranchSigns::ALL_MINUS).unwrap();
    let gap = (fit.c0 - vol).abs();
    outcome(
        gap < 1e-2,
        format!(
            "c0 = {:.5}, Vol = {vol:.5}, gap = {gap:.2e}, {} levels, {} skipped",
            fit.c0,
            series.samples.len(),
            series.skipped.len()
        ),
    )
}

fn negative_growth() -> Outcome {
    let theta = example_theta();
    let plan = GrowthPlan::with_range(theta, BranchSigns::ALL_MINUS, 501, 2001, 2).unwrap();
    let series = growth_series(&plan).unwrap();
    let max_scaled = series.samples.iter().map(|s| s.scaled).fold(f64::NEG_INFINITY, f64::max);
    let vol = volume(&theta, BranchSigns::ALL_MINUS).unwrap();
    outcome(
        max_scaled < 0.0 && vol > 0.0 && series.skipped.is_empty(),
        format!("max scaled log over r in [501, 2001] = {max_scaled:.4}, Vol = {vol:.5}"),
    )
}

fn prism() -> Outcome {
    let s = PI / 6.0;
    let p = PrismSpec { vertical: [s; 3], base_b: [s; 3], base_c: [s; 3] };
    let check = prism_conjecture_check(&p, &odd_levels(101, 2001)).unwrap();
    outcome(
        check.gap < 1e-2,
        format!("c0 = {:.5}, Vol = {:.5}, gap = {:.2e}", check.fit.c0, check.volume, check.gap),
    )
}

fn asymp2_trend() -> Outcome {
    let t = AngleSixTuple::uniform(PI / 6.0).unwrap();
    let ratios: Vec<f64> = [501, 1001, 2001]
        .iter()
        .map(|&r| asymp2_prediction(&t, BranchSigns::ALL_MINUS, OddLevel::new(r).unwrap()).unwrap().ratio())
        .collect();
    let trending = ratios.windows(2).all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs());
    let last = ratios[2];
    outcome(
        (0.5..=2.0).contains(&last) && trending,
        format!("ratios at r = 501, 1001, 2001: {:.5}, {:.5}, {:.5}", ratios[0], ratios[1], ratios[2]),
    )
}

fn main() {
    let criteria: Vec<(&str, bool, fn() -> Outcome)> = vec![
        ("01 symmetric critical point", true, symmetric_critical_point),
        ("02 flat tetrahedra have zero volume", true, flat_volumes),
        ("03 discriminant equals 16 det G", true, discriminant_identity),
        ("04 classification law", true, classification_law),
        ("05 regular ideal octahedron volume", true, octahedron_volume),
        ("06 critical value equals maximum", true, formula_cross_agreement),
        ("07 branch invariance", true, branch_invariance),
        ("08 Schlafli residuals", true, schlafli),
        ("09 6j log path vs exact oracle, color moves", true, sixj_oracle),
        ("10a growth rate, all angles pi/6", true, || growth_reproduction(AngleSixTuple::uniform(PI / 6.0).unwrap())),
        ("10b growth rate, example tetrahedron", true, || growth_reproduction(example_theta())),
        ("11 negative growth with positive volume", true, negative_growth),
        ("12 prism growth rate", true, prism),
        ("13 asymp2 ratio trend (reported only)", false, asymp2_trend),
    ];
    let mut failed = Vec::new();
    for (name, gating, run) in criteria {
        let start = Instant::now();
        let o = run();
        let tag = match (o.pass, gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "INFO",
        };
        println!("[{tag}] {name}: {} ({:.1}s)", o.detail, start.elapsed().as_secs_f64());
        if !o.pass && gating {
            failed.push(name);
        }
    }
    // keep admissible/signature imports honest for readers grepping the criteria
    if failed.is_empty() {
        println!("all gating criteria passed");
    } else {
        println!("{} gating criteria failed: {}", failed.len(), failed.join(", "));
        std::process::exit(1);
    }
}
