//! Quantum integers and factorials at q = exp(2πi/r), carried as (log-magnitude, quarter phase).

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::ops::{Div, Mul};
use std::rc::Rc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct OddLevel(u32);

impl OddLevel {
    pub fn new(r: u32) -> Result<Self> {
        if r >= 3 && r % 2 == 1 {
            Ok(Self(r))
        } else {
            Err(Error::InvalidLevel(r))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Largest admissible color, r - 2.
    pub fn max_color(self) -> u32 {
        self.0 - 2
    }

    fn angle(self, n: i64) -> f64 {
        2.0 * PI * n as f64 / self.0 as f64
    }
}

impl TryFrom<u32> for OddLevel {
    type Error = Error;
    fn try_from(r: u32) -> Result<Self> {
        Self::new(r)
    }
}

impl From<OddLevel> for u32 {
    fn from(l: OddLevel) -> u32 {
        l.0
    }
}

/// A complex number of the form `i^phase * exp(log_mag)`; `log_mag = -inf` is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarterPhaseLog {
    log_mag: f64,
    phase: u8,
}

impl QuarterPhaseLog {
    pub const ZERO: Self = Self { log_mag: f64::NEG_INFINITY, phase: 0 };
    pub const ONE: Self = Self { log_mag: 0.0, phase: 0 };

    pub fn new(log_mag: f64, phase: i32) -> Self {
        if log_mag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self { log_mag, phase: phase.rem_euclid(4) as u8 }
        }
    }

    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::new(x.abs().ln(), if x < 0.0 { 2 } else { 0 })
        }
    }

    /// `i^k`.
    pub fn i_pow(k: i64) -> Self {
        Self { log_mag: 0.0, phase: k.rem_euclid(4) as u8 }
    }

    /// Multiply by the positive real `exp(x)`.
    pub fn times_exp(self, x: f64) -> Self {
        if self.is_zero() {
            self
        } else {
            Self { log_mag: self.log_mag + x, phase: self.phase }
        }
    }

    pub fn log_mag(self) -> f64 {
        self.log_mag
    }

    pub fn phase(self) -> u8 {
        self.phase
    }

    pub fn is_zero(self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    /// Square root of a real value, with sqrt(x) = i sqrt(|x|) for negative x.
    /// Returns `None` for the purely imaginary phases.
    pub fn sqrt_real(self) -> Option<Self> {
        match self.phase {
            0 | 2 if self.is_zero() => Some(Self::ZERO),
            0 => Some(Self { log_mag: 0.5 * self.log_mag, phase: 0 }),
            2 => Some(Self { log_mag: 0.5 * self.log_mag, phase: 1 }),
            _ => None,
        }
    }

    /// Real value when the phase is 0 or 2; may overflow to infinity.
    pub fn to_real(self) -> Option<f64> {
        match self.phase {
            0 => Some(self.log_mag.exp()),
            2 => Some(-self.log_mag.exp()),
            _ => None,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        let m = self.log_mag.exp();
        match self.phase {
            0 => Complex64::new(m, 0.0),
            1 => Complex64::new(0.0, m),
            2 => Complex64::new(-m, 0.0),
            _ => Complex64::new(0.0, -m),
        }
    }

    /// +1 or -1 for real values, 0 for zero.
    pub fn real_sign(self) -> Option<i8> {
        if self.is_zero() {
            return Some(0);
        }
        match self.phase {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }
}

impl Mul for QuarterPhaseLog {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.log_mag + rhs.log_mag, self.phase as i32 + rhs.phase as i32)
    }
}

impl Div for QuarterPhaseLog {
    type Output = Self;
    /// Panics on division by zero.
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "division by a zero quantum quantity");
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.log_mag - rhs.log_mag, self.phase as i32 - rhs.phase as i32)
    }
}

/// `[n] = sin(2πn/r) / sin(2π/r)`.
pub fn quantum_integer(level: OddLevel, n: i64) -> f64 {
    let r = level.get() as i64;
    let m = n.rem_euclid(r);
    sin_turn(level, m) / level.angle(1).sin()
}

// sin(2πm/r) for 0 <= m < r, folded so the argument stays in [0, π/2].
fn sin_turn(level: OddLevel, m: i64) -> f64 {
    let r = level.get() as i64;
    // 2πm/r = π * (2m)/r; fold 2m into [0, r] then reflect about r/2
    let (num, sign) = if 2 * m <= r { (2 * m, 1.0) } else { (2 * m - r, -1.0) };
    let num = num.min(r - num);
    sign * (PI * num as f64 / r as f64).sin()
}

/// Prefix table of `log|[n]!|` and the sign of `[n]!` for 0 <= n <= r - 1.
/// `[n]!` vanishes for n >= r.
#[derive(Debug, Clone)]
pub struct FactorialTable {
    level: OddLevel,
    log_abs: Vec<f64>,
    negative: Vec<bool>,
}

impl FactorialTable {
    pub fn new(level: OddLevel) -> Self {
        let r = level.get() as usize;
        let denom = level.angle(1).sin().ln();
        let mut log_abs = Vec::with_capacity(r);
        let mut negative = Vec::with_capacity(r);
        log_abs.push(0.0);
        negative.push(false);
        // Kahan-compensated running sum keeps the prefix error flat in n
        let (mut acc, mut comp) = (0.0f64, 0.0f64);
        for n in 1..r {
            let s = sin_turn(level, n as i64);
            let y = (s.abs().ln() - denom) - comp;
            let t = acc + y;
            comp = (t - acc) - y;
            acc = t;
            log_abs.push(acc);
            negative.push(negative[n - 1] ^ (s < 0.0));
        }
        Self { level, log_abs, negative }
    }

    pub fn level(&self) -> OddLevel {
        self.level
    }

    /// `[n]!` for any n >= 0, zero from n = r on.
    pub fn get(&self, n: u32) -> QuarterPhaseLog {
        match self.log_abs.get(n as usize) {
            Some(&l) => QuarterPhaseLog::new(l, if self.negative[n as usize] { 2 } else { 0 }),
            None => QuarterPhaseLog::ZERO,
        }
    }
}

thread_local! {
    static TABLES: RefCell<HashMap<u32, Rc<FactorialTable>>> = RefCell::new(HashMap::new());
}

const TABLE_CACHE_LIMIT: usize = 64;

/// Shared per-thread factorial table for `level`.
pub fn factorial_table(level: OddLevel) -> Rc<FactorialTable> {
    TABLES.with(|cell| {
        let mut map = cell.borrow_mut();
        if let Some(t) = map.get(&level.get()) {
            return Rc::clone(t);
        }
        if map.len() >= TABLE_CACHE_LIMIT {
            map.clear();
        }
        let t = Rc::new(FactorialTable::new(level));
        map.insert(level.get(), Rc::clone(&t));
        t
    })
}

/// `[n]!` for 0 <= n <= r - 2.
pub fn log_quantum_factorial(level: OddLevel, n: i64) -> Result<QuarterPhaseLog> {
    if n < 0 || n > level.max_color() as i64 {
        return Err(Error::ColorOutOfRange { color: n, level: level.get() });
    }
    Ok(factorial_table(level).get(n as u32))
}

/// `log |{n}!|` where `{n}! = prod_{k=1}^n 2 sin(2πk/r)`, for 0 < n < r.
pub fn log_brace_factorial(level: OddLevel, n: i64) -> Result<f64> {
    if n <= 0 || n >= level.get() as i64 {
        return Err(Error::ColorOutOfRange { color: n, level: level.get() });
    }
    Ok((1..=n).map(|k| (2.0 * sin_turn(level, k).abs()).ln()).sum())
}

/// Sum of signed terms `sign * exp(log_mag)`: scaled by the largest magnitude, then
/// summed pairwise. Returns a real `QuarterPhaseLog` (phase 0 or 2).
pub fn signed_log_sum(terms: &[(f64, i8)]) -> QuarterPhaseLog {
    let max = terms
        .iter()
        .filter(|(_, s)| *s != 0)
        .map(|(l, _)| *l)
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return QuarterPhaseLog::ZERO;
    }
    let scaled: Vec<f64> = terms.iter().map(|&(l, s)| s as f64 * (l - max).exp()).collect();
    QuarterPhaseLog::from_real(pairwise_sum(&scaled)).times_exp(max)
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (lo, hi) = xs.split_at(xs.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}
