//! Quantum 6j-symbols of r-admissible colorings and the color-change symmetries.
//!
//! Slot layout: colors `a1..a6` (indices 0..5), opposite pairs (a1,a4), (a2,a5), (a3,a6).
//! The four admissible triples sit at the corners of the tetrahedral graph.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qnum::{factorial_table, signed_log_sum, FactorialTable, OddLevel, QuarterPhaseLog};

/// Triples of slots meeting at a corner.
pub const VERTEX_TRIPLES: [[usize; 3]; 4] = [[0, 1, 2], [0, 4, 5], [1, 3, 5], [2, 3, 4]];
/// Face `k` is the triple of slots not touching corner `k`.
pub const FACES: [[usize; 3]; 4] = [[3, 4, 5], [1, 2, 3], [0, 2, 4], [0, 1, 5]];
/// Quadrilateral `k` leaves one opposite pair untouched; the colors summed in the k-th upper bound.
pub const QUADS: [[usize; 4]; 3] = [[0, 1, 3, 4], [0, 2, 3, 5], [1, 2, 4, 5]];
pub const OPPOSITE_PAIRS: [(usize, usize); 3] = [(0, 3), (1, 4), (2, 5)];

pub const MAX_ORACLE_LEVEL: u32 = 201;

pub fn is_admissible_triple(a: u32, b: u32, c: u32, level: OddLevel) -> bool {
    let m = level.max_color();
    a <= m
        && b <= m
        && c <= m
        && a <= b + c
        && b <= a + c
        && c <= a + b
        && a + b + c <= 2 * m
        && (a + b + c) % 2 == 0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColorSixTuple {
    colors: [u32; 6],
    level: OddLevel,
}

impl ColorSixTuple {
    pub fn new(colors: [u32; 6], level: OddLevel) -> Result<Self> {
        if let Some(&c) = colors.iter().find(|&&c| c > level.max_color()) {
            return Err(Error::ColorOutOfRange { color: c as i64, level: level.get() });
        }
        let ok = VERTEX_TRIPLES
            .iter()
            .all(|t| is_admissible_triple(colors[t[0]], colors[t[1]], colors[t[2]], level));
        if ok {
            Ok(Self { colors, level })
        } else {
            Err(Error::InadmissibleTuple(colors))
        }
    }

    pub fn colors(&self) -> [u32; 6] {
        self.colors
    }

    pub fn level(&self) -> OddLevel {
        self.level
    }

    /// Colors strictly above (r-2)/2, as a bitmask over slots.
    fn big_mask(&self) -> u8 {
        let m = self.level.max_color();
        self.colors
            .iter()
            .enumerate()
            .filter(|(_, &c)| 2 * c > m)
            .fold(0u8, |acc, (i, _)| acc | 1 << i)
    }

    fn flipped(&self, slots: &[usize]) -> Self {
        let mut colors = self.colors;
        for &s in slots {
            colors[s] = self.level.max_color() - colors[s];
        }
        // flips preserve admissibility
        Self { colors, level: self.level }
    }

    fn sum_bounds(&self) -> ([u32; 4], [u32; 3]) {
        let a = &self.colors;
        let lower = VERTEX_TRIPLES.map(|t| (a[t[0]] + a[t[1]] + a[t[2]]) / 2);
        let upper = QUADS.map(|q| (a[q[0]] + a[q[1]] + a[q[2]] + a[q[3]]) / 2);
        (lower, upper)
    }
}

pub fn delta_triple(a: u32, b: u32, c: u32, level: OddLevel) -> Result<QuarterPhaseLog> {
    if !is_admissible_triple(a, b, c, level) {
        return Err(Error::InadmissibleTriple(a, b, c));
    }
    Ok(delta_from_table(&factorial_table(level), a, b, c))
}

fn delta_from_table(f: &FactorialTable, a: u32, b: u32, c: u32) -> QuarterPhaseLog {
    let radicand = f.get((a + b - c) / 2) * f.get((b + c - a) / 2) * f.get((a + c - b) / 2)
        / f.get((a + b + c) / 2 + 1);
    radicand.sqrt_real().expect("factorial ratios are real")
}

/// The summands of the alternating sum, indexed by the summation variable.
/// Summands that vanish because `[z+1]! = 0` are omitted.
pub fn sixj_terms(t: &ColorSixTuple) -> Vec<(u32, QuarterPhaseLog)> {
    let f = factorial_table(t.level);
    terms_from_table(&f, t)
}

fn terms_from_table(f: &FactorialTable, t: &ColorSixTuple) -> Vec<(u32, QuarterPhaseLog)> {
    let (lower, upper) = t.sum_bounds();
    let lo = *lower.iter().max().unwrap();
    let hi = (*upper.iter().min().unwrap()).min(t.level.max_color());
    if lo > hi {
        return Vec::new();
    }
    (lo..=hi)
        .map(|z| {
            let den = lower
                .iter()
                .map(|&l| f.get(z - l))
                .chain(upper.iter().map(|&u| f.get(u - z)))
                .fold(QuarterPhaseLog::ONE, |acc, x| acc * x);
            let sign = QuarterPhaseLog::i_pow(2 * z as i64);
            (z, sign * f.get(z + 1) / den)
        })
        .collect()
}

/// The 6j-symbol in log space. Purely imaginary when the color sum plus the number of
/// negative Δ radicands is odd; real otherwise.
pub fn sixj_log(t: &ColorSixTuple) -> QuarterPhaseLog {
    let f = factorial_table(t.level);
    let a = t.colors;
    let total: u32 = a.iter().sum();
    let deltas = VERTEX_TRIPLES
        .iter()
        .map(|v| delta_from_table(&f, a[v[0]], a[v[1]], a[v[2]]))
        .fold(QuarterPhaseLog::ONE, |acc, d| acc * d);
    let terms: Vec<(f64, i8)> = terms_from_table(&f, t)
        .into_iter()
        .map(|(_, s)| (s.log_mag(), s.real_sign().expect("summands are real")))
        .collect();
    QuarterPhaseLog::i_pow(-(total as i64)) * deltas * signed_log_sum(&terms)
}

/// Direct evaluation in linear complex arithmetic with compensated summation.
/// Independent of the log-space tables; only for r <= 201.
pub fn sixj_exact_small(t: &ColorSixTuple) -> Result<Complex64> {
    let r = t.level.get();
    if r > MAX_ORACLE_LEVEL {
        return Err(Error::OracleLevelTooLarge(r));
    }
    let q = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / r as f64);
    let qint = |n: u32| -> Complex64 { (q.powu(n) - q.powu(n).inv()) / (q - q.inv()) };
    let fact = |n: u32| -> Complex64 { (1..=n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * qint(k)) };
    let sqrt_conv = |x: Complex64| -> Complex64 {
        // radicands are real up to rounding
        if x.re < 0.0 {
            Complex64::new(0.0, (-x.re).sqrt())
        } else {
            Complex64::new(x.re.sqrt(), 0.0)
        }
    };
    let a = t.colors;
    let delta = |x: u32, y: u32, z: u32| -> Complex64 {
        let s = (x + y + z) / 2;
        sqrt_conv(fact(s - z) * fact(s - x) * fact(s - y) / fact(s + 1))
    };
    let pref = VERTEX_TRIPLES
        .iter()
        .map(|v| delta(a[v[0]], a[v[1]], a[v[2]]))
        .fold(Complex64::i().powi(-(a.iter().sum::<u32>() as i32)), |acc, d| acc * d);

    let (lower, upper) = t.sum_bounds();
    let lo = *lower.iter().max().unwrap();
    let hi = (*upper.iter().min().unwrap()).min(r - 2);
    let mut sum = Neumaier::default();
    for z in lo..=hi {
        let mut term = fact(z + 1);
        for &l in &lower {
            term /= fact(z - l);
        }
        for &u in &upper {
            term /= fact(u - z);
        }
        if z % 2 == 1 {
            term = -term;
        }
        sum.add(term);
    }
    Ok(pref * sum.total())
}

#[derive(Default)]
struct Neumaier {
    sum: Complex64,
    comp: Complex64,
}

impl Neumaier {
    fn add(&mut self, x: Complex64) {
        self.sum.re = step(self.sum.re, x.re, &mut self.comp.re);
        self.sum.im = step(self.sum.im, x.im, &mut self.comp.im);
        fn step(s: f64, x: f64, c: &mut f64) -> f64 {
            let t = s + x;
            *c += if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
            t
        }
    }

    fn total(&self) -> Complex64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColorMove {
    /// 1-based face index.
    Face(usize),
    /// 1-based quadrilateral index.
    Quad(usize),
}

impl ColorMove {
    fn slots(self) -> &'static [usize] {
        match self {
            ColorMove::Face(k) => &FACES[k - 1],
            ColorMove::Quad(k) => &QUADS[k - 1],
        }
    }

    pub fn apply(self, t: &ColorSixTuple) -> Result<ColorSixTuple> {
        match self {
            ColorMove::Face(k) if !(1..=4).contains(&k) => Err(Error::IndexOutOfRange { index: k, max: 4 }),
            ColorMove::Quad(k) if !(1..=3).contains(&k) => Err(Error::IndexOutOfRange { index: k, max: 3 }),
            _ => Ok(t.flipped(self.slots())),
        }
    }
}

/// Replace the three colors around face `k` (1..=4) by `r - 2 - a`.
pub fn change_colors_face(t: &ColorSixTuple, k: usize) -> Result<ColorSixTuple> {
    ColorMove::Face(k).apply(t)
}

/// Replace the four colors of quadrilateral `k` (1..=3) by `r - 2 - a`.
pub fn change_colors_quad(t: &ColorSixTuple, k: usize) -> Result<ColorSixTuple> {
    ColorMove::Quad(k).apply(t)
}

/// Which of the three canonical shapes the large colors form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CanonicalShape {
    AllSmall,
    OneLarge(usize),
    OppositePair(usize, usize),
}

fn shape_of(mask: u8) -> Option<CanonicalShape> {
    match mask.count_ones() {
        0 => Some(CanonicalShape::AllSmall),
        1 => Some(CanonicalShape::OneLarge(mask.trailing_zeros() as usize)),
        2 => OPPOSITE_PAIRS
            .iter()
            .find(|(i, j)| mask == (1 << i) | (1 << j))
            .map(|&(i, j)| CanonicalShape::OppositePair(i, j)),
        _ => None,
    }
}

/// Bring a tuple to one of the canonical shapes with at most one color move.
/// Candidates are tried in the order: none, faces 1..4, quads 1..3.
pub fn canonicalize(t: &ColorSixTuple) -> (ColorSixTuple, Vec<ColorMove>, CanonicalShape) {
    let candidates = std::iter::once(None)
        .chain((1..=4).map(|k| Some(ColorMove::Face(k))))
        .chain((1..=3).map(|k| Some(ColorMove::Quad(k))));
    for mv in candidates {
        let out = match mv {
            Some(m) => t.flipped(m.slots()),
            None => *t,
        };
        if let Some(shape) = shape_of(out.big_mask()) {
            return (out, mv.into_iter().collect(), shape);
        }
    }
    unreachable!("every coset of the move group meets a canonical shape")
}
