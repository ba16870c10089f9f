//! Upper and lower beta-sieve functions `F`, `f` for the semi-linear
//! (`κ = 1/2`, `β = 1`) and linear (`κ = 1`, `β = 2`) sieves.
//!
//! On their initial ranges the functions have closed forms:
//!
//! | function | range | value |
//! |---|---|---|
//! | `F₁` | `0 < s ≤ 2` | `2 (e^γ / (π s))^{1/2}` |
//! | `f₁` | `1 ≤ s ≤ 3` | `(e^γ / (π s))^{1/2} log(1 + 2(s−1) + 2√(s(s−1)))` |
//! | `F₂` | `1 ≤ s ≤ 3` | `2e^γ / s` |
//! | `f₂` | `2 ≤ s ≤ 4` | `2e^γ log(s−1) / s` |
//!
//! Beyond them the pair solves
//! `(s^κ F)' = κ s^{κ−1} f(s−1)` and `(s^κ f)' = κ s^{κ−1} F(s−1)`.
//! Since the right-hand sides only involve retarded values, each grid step is a
//! quadrature over already-known data.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp;
use crate::EXP_GAMMA;

/// Largest admissible grid spacing.
pub const MAX_STEP: f64 = 1e-3;
/// Smallest admissible tabulation limit.
pub const MIN_S_MAX: f64 = 10.0;
pub const DEFAULT_S_MAX: f64 = 60.0;
pub const DEFAULT_STEP: f64 = 1e-4;
/// Overlap-consistency tolerance enforced by [`SieveFunctionTable::tabulate`].
pub const OVERLAP_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SieveDimension {
    /// `κ = 1/2`, `β = 1`.
    SemiLinear,
    /// `κ = 1`, `β = 2`.
    Linear,
}

/// Upper (`F`) or lower (`f`) sieve function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Which {
    Upper,
    Lower,
}

impl Which {
    pub fn other(self) -> Self {
        match self {
            Which::Upper => Which::Lower,
            Which::Lower => Which::Upper,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Which::Upper => "F",
            Which::Lower => "f",
        }
    }
}

impl SieveDimension {
    pub fn kappa(self) -> f64 {
        match self {
            SieveDimension::SemiLinear => 0.5,
            SieveDimension::Linear => 1.0,
        }
    }

    pub fn beta(self) -> u32 {
        match self {
            SieveDimension::SemiLinear => 1,
            SieveDimension::Linear => 2,
        }
    }

    pub fn from_kappa(kappa: f64) -> Result<Self> {
        if kappa == 0.5 {
            Ok(SieveDimension::SemiLinear)
        } else if kappa == 1.0 {
            Ok(SieveDimension::Linear)
        } else {
            Err(Error::domain("kappa", kappa, "{1/2, 1}"))
        }
    }

    /// Lower end of the domain. For `F₁` it is excluded.
    pub fn domain_start(self, which: Which) -> f64 {
        match (self, which) {
            (SieveDimension::SemiLinear, Which::Upper) => 0.0,
            (SieveDimension::SemiLinear, Which::Lower) => 1.0,
            (SieveDimension::Linear, Which::Upper) => 1.0,
            (SieveDimension::Linear, Which::Lower) => 2.0,
        }
    }

    /// Right end of the closed-form range; continuation starts here.
    pub fn closed_end(self, which: Which) -> f64 {
        match (self, which) {
            (SieveDimension::SemiLinear, Which::Upper) => 2.0,
            (SieveDimension::SemiLinear, Which::Lower) => 3.0,
            (SieveDimension::Linear, Which::Upper) => 3.0,
            (SieveDimension::Linear, Which::Lower) => 4.0,
        }
    }

    fn in_domain(self, which: Which, s: f64) -> bool {
        let start = self.domain_start(which);
        if start == 0.0 {
            s > 0.0
        } else {
            s >= start
        }
    }

    fn closed_raw(self, which: Which, s: f64) -> f64 {
        match (self, which) {
            (SieveDimension::SemiLinear, Which::Upper) => upper_semilinear_raw(s),
            (SieveDimension::SemiLinear, Which::Lower) => lower_semilinear_raw(s),
            (SieveDimension::Linear, Which::Upper) => upper_linear_raw(s),
            (SieveDimension::Linear, Which::Lower) => lower_linear_raw(s),
        }
    }

    /// Closed form of `which` at `s`; domain error outside its range.
    pub fn closed_form(self, which: Which, s: f64) -> Result<f64> {
        if !(self.in_domain(which, s) && s <= self.closed_end(which)) {
            return Err(Error::domain("s", s, closed_range_label(self, which)));
        }
        Ok(self.closed_raw(which, s))
    }

    /// Derivative of the closed form of `which` at `s`.
    pub fn closed_form_derivative(self, which: Which, s: f64) -> Result<f64> {
        self.closed_form(which, s)?;
        let a = (EXP_GAMMA / std::f64::consts::PI).sqrt();
        Ok(match (self, which) {
            (SieveDimension::SemiLinear, Which::Upper) => -a * s.powf(-1.5),
            (SieveDimension::SemiLinear, Which::Lower) => {
                let l = semilinear_log(s);
                a * (-0.5 * s.powf(-1.5) * l + s.powf(-0.5) / (s * (s - 1.0)).sqrt())
            }
            (SieveDimension::Linear, Which::Upper) => -2.0 * EXP_GAMMA / (s * s),
            (SieveDimension::Linear, Which::Lower) => {
                2.0 * EXP_GAMMA * (1.0 / ((s - 1.0) * s) - (s - 1.0).ln() / (s * s))
            }
        })
    }

    /// Value of `which` for an argument at or below the closed-form end, extended
    /// by zero below the domain for the lower function. `None` means undefined.
    fn retarded_closed(self, which: Which, t: f64) -> Option<f64> {
        if self.in_domain(which, t) {
            Some(self.closed_raw(which, t))
        } else if which == Which::Lower {
            Some(0.0)
        } else {
            None
        }
    }
}

fn closed_range_label(dim: SieveDimension, which: Which) -> &'static str {
    match (dim, which) {
        (SieveDimension::SemiLinear, Which::Upper) => "(0, 2]",
        (SieveDimension::SemiLinear, Which::Lower) => "[1, 3]",
        (SieveDimension::Linear, Which::Upper) => "[1, 3]",
        (SieveDimension::Linear, Which::Lower) => "[2, 4]",
    }
}

fn semilinear_log(s: f64) -> f64 {
    (1.0 + 2.0 * (s - 1.0) + 2.0 * (s * (s - 1.0)).sqrt()).ln()
}

fn upper_semilinear_raw(s: f64) -> f64 {
    2.0 * (EXP_GAMMA / (std::f64::consts::PI * s)).sqrt()
}

fn lower_semilinear_raw(s: f64) -> f64 {
    (EXP_GAMMA / (std::f64::consts::PI * s)).sqrt() * semilinear_log(s)
}

fn upper_linear_raw(s: f64) -> f64 {
    2.0 * EXP_GAMMA / s
}

fn lower_linear_raw(s: f64) -> f64 {
    2.0 * EXP_GAMMA * (s - 1.0).ln() / s
}

/// `F₁(s) = 2 (e^γ / (π s))^{1/2}` for `0 < s ≤ 2`.
pub fn upper_semilinear_closed(s: f64) -> Result<f64> {
    SieveDimension::SemiLinear.closed_form(Which::Upper, s)
}

/// `f₁(s) = (e^γ / (π s))^{1/2} log(1 + 2(s−1) + 2√(s(s−1)))` for `1 ≤ s ≤ 3`.
pub fn lower_semilinear_closed(s: f64) -> Result<f64> {
    SieveDimension::SemiLinear.closed_form(Which::Lower, s)
}

/// `F₂(s) = 2e^γ / s` for `1 ≤ s ≤ 3`.
pub fn upper_linear_closed(s: f64) -> Result<f64> {
    SieveDimension::Linear.closed_form(Which::Upper, s)
}

/// `f₂(s) = 2e^γ log(s−1) / s` for `2 ≤ s ≤ 4`.
pub fn lower_linear_closed(s: f64) -> Result<f64> {
    SieveDimension::Linear.closed_form(Which::Lower, s)
}

// 8-point Gauss-Legendre on [0, 1].
#[allow(clippy::excessive_precision)]
const GL8: [(f64, f64); 8] = {
    const X: [f64; 4] = [
        0.183_434_642_495_649_8,
        0.525_532_409_916_329_0,
        0.796_666_477_413_626_7,
        0.960_289_856_497_536_3,
    ];
    const W: [f64; 4] = [
        0.362_683_783_378_362_0,
        0.313_706_645_877_887_3,
        0.222_381_034_453_374_5,
        0.101_228_536_290_376_3,
    ];
    [
        ((1.0 - X[3]) / 2.0, W[3] / 2.0),
        ((1.0 - X[2]) / 2.0, W[2] / 2.0),
        ((1.0 - X[1]) / 2.0, W[1] / 2.0),
        ((1.0 - X[0]) / 2.0, W[0] / 2.0),
        ((1.0 + X[0]) / 2.0, W[0] / 2.0),
        ((1.0 + X[1]) / 2.0, W[1] / 2.0),
        ((1.0 + X[2]) / 2.0, W[2] / 2.0),
        ((1.0 + X[3]) / 2.0, W[3] / 2.0),
    ]
};

/// `∫_a^{a+h} g(t) dt` with `t = a + h v²`, which absorbs square-root type
/// behaviour of `g` at `a`.
fn gl_left_singular(a: f64, h: f64, g: impl Fn(f64) -> f64) -> f64 {
    GL8.iter()
        .map(|&(v, w)| w * 2.0 * h * v * g(a + h * v * v))
        .sum()
}

/// Where a marched function reads its retarded partner from.
struct Retarded<'a> {
    dim: SieveDimension,
    which: Which,
    /// Grid values of the partner; only read beyond its closed range.
    values: &'a [f64],
}

/// Uniform grid `s_i = i / inv_step`.
#[derive(Debug, Clone, Copy)]
struct Grid {
    inv_step: u64,
}

impl Grid {
    fn s(self, i: usize) -> f64 {
        i as f64 / self.inv_step as f64
    }

    fn h(self) -> f64 {
        1.0 / self.inv_step as f64
    }

    fn index(self, s: f64) -> usize {
        (s * self.inv_step as f64).round() as usize
    }
}

/// Increment of `s^κ G(s)` over grid cell `[s_{i−1}, s_i]`.
fn step_increment(kappa: f64, grid: Grid, i: usize, partner: &Retarded) -> f64 {
    let a = grid.s(i - 1);
    let h = grid.h();
    let weight = |t: f64| {
        if kappa == 1.0 {
            1.0
        } else {
            kappa * t.powf(kappa - 1.0)
        }
    };
    let shift = grid.inv_step as usize;
    let closed_end = partner.dim.closed_end(partner.which);
    // Retarded cell is [a − 1, s_i − 1]; grid-aligned so it sits entirely in one regime.
    if i <= shift || grid.s(i - shift) <= closed_end {
        gl_left_singular(a, h, |t| {
            weight(t)
                * partner
                    .dim
                    .retarded_closed(partner.which, t - 1.0)
                    .expect("retarded argument below the partner's domain")
        })
    } else {
        let j = i - 1 - shift;
        let y = partner.values;
        let m0 = interp::interior_slope(y[j - 1], y[j], y[j + 1], h);
        let m1 = interp::interior_slope(y[j], y[j + 1], y[j + 2], h);
        let mid = interp::hermite_mid(y[j], y[j + 1], m0, m1, h);
        h / 6.0 * (weight(a) * y[j] + 4.0 * weight(a + h / 2.0) * mid + weight(a + h) * y[j + 1])
    }
}

/// Residual of marching one function through its closed-form range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapCheck {
    pub dimension: SieveDimension,
    pub which: Which,
    pub from: f64,
    pub to: f64,
    pub max_residual: f64,
}

/// Start the delay equation for each function at the left end of its closed-form
/// range and march to the right end, comparing with the closed form.
///
/// `F₁` starts at `s = 1` rather than at its excluded endpoint `0`.
pub fn overlap_checks(step: f64) -> Result<Vec<OverlapCheck>> {
    let inv_step = validate_step(step)?;
    let grid = Grid { inv_step };
    let mut out = Vec::new();
    for dim in [SieveDimension::SemiLinear, SieveDimension::Linear] {
        for which in [Which::Upper, Which::Lower] {
            let from = match (dim, which) {
                (SieveDimension::SemiLinear, Which::Upper) => 1.0,
                _ => dim.domain_start(which),
            };
            let to = dim.closed_end(which);
            let partner = Retarded {
                dim,
                which: which.other(),
                values: &[],
            };
            let kappa = dim.kappa();
            let i0 = grid.index(from);
            let i1 = grid.index(to);
            let mut y = from.powf(kappa) * dim.closed_raw(which, from);
            let mut max_residual: f64 = 0.0;
            for i in i0 + 1..=i1 {
                y += step_increment(kappa, grid, i, &partner);
                let s = grid.s(i);
                let value = y / s.powf(kappa);
                max_residual = max_residual.max((value - dim.closed_raw(which, s)).abs());
            }
            out.push(OverlapCheck {
                dimension: dim,
                which,
                from,
                to,
                max_residual,
            });
        }
    }
    Ok(out)
}

/// One-sided derivative of the continuation at a handoff point versus the
/// derivative of the closed form there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HandoffCheck {
    pub dimension: SieveDimension,
    pub which: Which,
    pub s: f64,
    pub continuation_derivative: f64,
    pub closed_form_derivative: f64,
}

impl HandoffCheck {
    pub fn mismatch(&self) -> f64 {
        (self.continuation_derivative - self.closed_form_derivative).abs()
    }
}

fn validate_step(step: f64) -> Result<u64> {
    if !(step > 0.0 && step <= MAX_STEP) {
        return Err(Error::domain("step", step, "(0, 1e-3]"));
    }
    let inv = 1.0 / step;
    let n = inv.round();
    if (inv - n).abs() > 1e-9 * n {
        return Err(Error::domain("step", step, "1/step must be an integer"));
    }
    Ok(n as u64)
}

/// Tabulated `F` and `f` of one sieve dimension on `s_i = i · step`, `0 ≤ s_i ≤ s_max`.
///
/// Grid nodes outside a function's domain hold `NaN`.
#[derive(Debug, Clone)]
pub struct SieveFunctionTable {
    dimension: SieveDimension,
    s_max: f64,
    step: f64,
    inv_step: u64,
    upper: Vec<f64>,
    lower: Vec<f64>,
    upper_slopes: Vec<f64>,
    lower_slopes: Vec<f64>,
}

/// Whether [`SieveFunctionTable::load_or_tabulate`] reused a cache file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CacheStatus {
    Hit,
    Written,
    Disabled,
}

impl SieveFunctionTable {
    pub fn tabulate(dimension: SieveDimension, s_max: f64, step: f64) -> Result<Self> {
        let inv_step = validate_step(step)?;
        let count = grid_count(s_max, inv_step)?;
        let worst = overlap_checks(step)?
            .iter()
            .map(|c| c.max_residual)
            .fold(0.0, f64::max);
        if worst.is_nan() || worst > OVERLAP_TOLERANCE {
            return Err(Error::Refinement {
                residual: worst,
                tolerance: OVERLAP_TOLERANCE,
            });
        }

        let grid = Grid { inv_step };
        let kappa = dimension.kappa();
        let mut upper = vec![f64::NAN; count];
        let mut lower = vec![f64::NAN; count];
        let upper_end = grid.index(dimension.closed_end(Which::Upper));
        let lower_end = grid.index(dimension.closed_end(Which::Lower));
        for i in 0..count {
            let s = grid.s(i);
            for which in [Which::Upper, Which::Lower] {
                let end = if which == Which::Upper { upper_end } else { lower_end };
                let value = if i <= end {
                    if dimension.in_domain(which, s) {
                        dimension.closed_raw(which, s)
                    } else {
                        f64::NAN
                    }
                } else {
                    let (own, partner_values) = match which {
                        Which::Upper => (&upper, &lower),
                        Which::Lower => (&lower, &upper),
                    };
                    let partner = Retarded {
                        dim: dimension,
                        which: which.other(),
                        values: partner_values,
                    };
                    let prev = grid.s(i - 1);
                    let y = prev.powf(kappa) * own[i - 1] + step_increment(kappa, grid, i, &partner);
                    y / s.powf(kappa)
                };
                match which {
                    Which::Upper => upper[i] = value,
                    Which::Lower => lower[i] = value,
                }
            }
        }
        Ok(Self::from_values(dimension, s_max, step, inv_step, upper, lower))
    }

    fn from_values(
        dimension: SieveDimension,
        s_max: f64,
        step: f64,
        inv_step: u64,
        upper: Vec<f64>,
        lower: Vec<f64>,
    ) -> Self {
        let h = 1.0 / inv_step as f64;
        let upper_slopes = interp::slopes(&upper, h);
        let lower_slopes = interp::slopes(&lower, h);
        SieveFunctionTable {
            dimension,
            s_max,
            step,
            inv_step,
            upper,
            lower,
            upper_slopes,
            lower_slopes,
        }
    }

    pub fn dimension(&self) -> SieveDimension {
        self.dimension
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.upper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upper.is_empty()
    }

    /// Grid abscissa of node `i`.
    pub fn s_at(&self, i: usize) -> f64 {
        Grid {
            inv_step: self.inv_step,
        }
        .s(i)
    }

    /// Raw grid values (`NaN` outside the domain).
    pub fn values(&self, which: Which) -> &[f64] {
        match which {
            Which::Upper => &self.upper,
            Which::Lower => &self.lower,
        }
    }

    /// `F` or `f` at `s`: closed form on its range, monotone cubic interpolation
    /// beyond, flat continuation past `s_max`.
    pub fn eval(&self, which: Which, s: f64) -> Result<f64> {
        if s.is_nan() || !self.dimension.in_domain(which, s) {
            let label = match (self.dimension, which) {
                (SieveDimension::SemiLinear, Which::Upper) => "s > 0",
                (SieveDimension::SemiLinear, Which::Lower) | (SieveDimension::Linear, Which::Upper) => "s >= 1",
                (SieveDimension::Linear, Which::Lower) => "s >= 2",
            };
            return Err(Error::domain("s", s, label));
        }
        Ok(self.value(which, s))
    }

    /// As [`eval`](Self::eval) without the domain check.
    pub(crate) fn value(&self, which: Which, s: f64) -> f64 {
        if s <= self.dimension.closed_end(which) {
            return self.dimension.closed_raw(which, s);
        }
        let (y, m) = match which {
            Which::Upper => (&self.upper, &self.upper_slopes),
            Which::Lower => (&self.lower, &self.lower_slopes),
        };
        let last = y.len() - 1;
        if s >= self.s_max {
            return y[last];
        }
        let x = s * self.inv_step as f64;
        let k = (x.floor() as usize).min(last - 1);
        let t = x - k as f64;
        interp::hermite(y[k], y[k + 1], m[k], m[k + 1], 1.0 / self.inv_step as f64, t)
    }

    /// C¹ handoff comparison at the continuation start of each function.
    pub fn handoff_checks(&self) -> Vec<HandoffCheck> {
        let kappa = self.dimension.kappa();
        [Which::Upper, Which::Lower]
            .into_iter()
            .map(|which| {
                let s = self.dimension.closed_end(which);
                let own = self.dimension.closed_raw(which, s);
                let partner = self.value(which.other(), s - 1.0);
                HandoffCheck {
                    dimension: self.dimension,
                    which,
                    s,
                    continuation_derivative: kappa * (partner - own) / s,
                    closed_form_derivative: self
                        .dimension
                        .closed_form_derivative(which, s)
                        .expect("handoff point lies in the closed range"),
                }
            })
            .collect()
    }

    pub fn cache_file_name(dimension: SieveDimension, s_max: f64, step: f64) -> String {
        format!(
            "sieve-kappa{}-smax{}-step{}.bin",
            dimension.kappa(),
            s_max,
            step
        )
    }

    /// Write the table in the cache format: little-endian header
    /// `κ: f64, β: u64, s_max: f64, step: f64, count: u64`, then `count` values of
    /// `F` and `count` values of `f`, each an `f64`.
    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("bin.tmp");
        {
            let mut w = BufWriter::new(File::create(&tmp)?);
            w.write_all(&self.dimension.kappa().to_le_bytes())?;
            w.write_all(&(self.dimension.beta() as u64).to_le_bytes())?;
            w.write_all(&self.s_max.to_le_bytes())?;
            w.write_all(&self.step.to_le_bytes())?;
            w.write_all(&(self.upper.len() as u64).to_le_bytes())?;
            for v in self.upper.iter().chain(&self.lower) {
                w.write_all(&v.to_le_bytes())?;
            }
            w.flush()?;
        }
        std::fs::rename(tmp, path)?;
        Ok(())
    }

    /// Read a cache file, requiring its header to match the requested
    /// parameters exactly.
    pub fn read_cache(path: &Path, dimension: SieveDimension, s_max: f64, step: f64) -> Result<Self> {
        let inv_step = validate_step(step)?;
        let count = grid_count(s_max, inv_step)?;
        let mut r = BufReader::new(File::open(path)?);
        let mut b8 = [0u8; 8];
        let mut next = |r: &mut BufReader<File>| -> Result<[u8; 8]> {
            r.read_exact(&mut b8)?;
            Ok(b8)
        };
        let kappa = f64::from_le_bytes(next(&mut r)?);
        let beta = u64::from_le_bytes(next(&mut r)?);
        let file_s_max = f64::from_le_bytes(next(&mut r)?);
        let file_step = f64::from_le_bytes(next(&mut r)?);
        let file_count = u64::from_le_bytes(next(&mut r)?);
        if kappa.to_bits() != dimension.kappa().to_bits()
            || beta != dimension.beta() as u64
            || file_s_max.to_bits() != s_max.to_bits()
            || file_step.to_bits() != step.to_bits()
            || file_count != count as u64
        {
            return Err(Error::Cache(format!(
                "header mismatch in {}: (κ={kappa}, β={beta}, s_max={file_s_max}, step={file_step}, count={file_count})",
                path.display()
            )));
        }
        let mut raw = vec![0u8; 16 * count];
        r.read_exact(&mut raw)
            .map_err(|e| Error::Cache(format!("truncated {}: {e}", path.display())))?;
        let mut values = raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")));
        let upper: Vec<f64> = values.by_ref().take(count).collect();
        let lower: Vec<f64> = values.collect();
        Ok(Self::from_values(dimension, s_max, step, inv_step, upper, lower))
    }

    /// Reuse `dir/<cache_file_name>` when present and matching, otherwise
    /// tabulate and write it. `None` disables caching.
    pub fn load_or_tabulate(
        dir: Option<&Path>,
        dimension: SieveDimension,
        s_max: f64,
        step: f64,
    ) -> Result<(Self, CacheStatus)> {
        let Some(dir) = dir else {
            return Ok((Self::tabulate(dimension, s_max, step)?, CacheStatus::Disabled));
        };
        let path: PathBuf = dir.join(Self::cache_file_name(dimension, s_max, step));
        if path.exists() {
            if let Ok(table) = Self::read_cache(&path, dimension, s_max, step) {
                return Ok((table, CacheStatus::Hit));
            }
        }
        let table = Self::tabulate(dimension, s_max, step)?;
        std::fs::create_dir_all(dir)?;
        table.write_cache(&path)?;
        Ok((table, CacheStatus::Written))
    }
}

fn grid_count(s_max: f64, inv_step: u64) -> Result<usize> {
    if !(s_max.is_finite() && s_max >= MIN_S_MAX) {
        return Err(Error::domain("s_max", s_max, "[10, ∞)"));
    }
    let n = s_max * inv_step as f64;
    if (n - n.round()).abs() > 1e-6 {
        return Err(Error::domain("s_max", s_max, "a multiple of step"));
    }
    Ok(n.round() as usize + 1)
}
