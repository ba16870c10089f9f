//! Two-variable vector-sieve functions built from the semi-linear and linear
//! sieve functions along the budget line `s₁/σ₁ + s₂/σ₂ = 1`:
//!
//! - `F(σ₁, σ₂) = inf F₁(s₁) F₂(s₂)` over `s₁ > 0`, `s₂ ≥ 1`;
//! - `f(σ₁, σ₂) = sup f₁(s₁) F₂(s₂) + f₂(s₂) F₁(s₁) − F₁(s₁) F₂(s₂)` over `s₁ ≥ 1`, `s₂ ≥ 2`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sieve_functions::{CacheStatus, SieveDimension, SieveFunctionTable, Which};

/// Spacing of the bracketing scan over `s₁`.
pub const SCAN_STEP: f64 = 1e-4;
/// Left end of the scan for the upper function (its `s₁ > 0` bound is open).
pub const SCAN_START: f64 = 1e-4;
const GOLDEN_TOLERANCE: f64 = 1e-12;
const FEASIBILITY_SLACK: f64 = 1e-12;

/// The semi-linear and linear tables used together.
#[derive(Debug, Clone)]
pub struct SieveTables {
    semilinear: SieveFunctionTable,
    linear: SieveFunctionTable,
}

impl SieveTables {
    pub fn new(semilinear: SieveFunctionTable, linear: SieveFunctionTable) -> Result<Self> {
        if semilinear.dimension() != SieveDimension::SemiLinear
            || linear.dimension() != SieveDimension::Linear
        {
            return Err(Error::Cache("tables passed in the wrong order".into()));
        }
        Ok(SieveTables { semilinear, linear })
    }

    pub fn tabulate(s_max: f64, step: f64) -> Result<Self> {
        let (a, b) = rayon::join(
            || SieveFunctionTable::tabulate(SieveDimension::SemiLinear, s_max, step),
            || SieveFunctionTable::tabulate(SieveDimension::Linear, s_max, step),
        );
        Self::new(a?, b?)
    }

    pub fn load_or_tabulate(dir: Option<&Path>, s_max: f64, step: f64) -> Result<(Self, [CacheStatus; 2])> {
        let (a, b) = rayon::join(
            || SieveFunctionTable::load_or_tabulate(dir, SieveDimension::SemiLinear, s_max, step),
            || SieveFunctionTable::load_or_tabulate(dir, SieveDimension::Linear, s_max, step),
        );
        let (a, sa) = a?;
        let (b, sb) = b?;
        Ok((Self::new(a, b)?, [sa, sb]))
    }

    pub fn semilinear(&self) -> &SieveFunctionTable {
        &self.semilinear
    }

    pub fn linear(&self) -> &SieveFunctionTable {
        &self.linear
    }

    fn upper1(&self, s: f64) -> f64 {
        self.semilinear.value(Which::Upper, s)
    }

    fn lower1(&self, s: f64) -> f64 {
        self.semilinear.value(Which::Lower, s)
    }

    fn upper2(&self, s: f64) -> f64 {
        self.linear.value(Which::Upper, s)
    }

    fn lower2(&self, s: f64) -> f64 {
        self.linear.value(Which::Lower, s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CombinerResult {
    pub value: f64,
    pub s1: f64,
    pub s2: f64,
    pub feasible: bool,
}

/// `s₂` on the budget line through `s₁`.
pub fn budget_s2(sigma1: f64, sigma2: f64, s1: f64) -> f64 {
    sigma2 * (1.0 - s1 / sigma1)
}

/// `F₁(s₁) F₂(s₂)` on the budget line.
pub fn upper_objective(tables: &SieveTables, sigma1: f64, sigma2: f64, s1: f64) -> f64 {
    let s2 = budget_s2(sigma1, sigma2, s1).max(1.0);
    tables.upper1(s1) * tables.upper2(s2)
}

/// `f₁F₂ + f₂F₁ − F₁F₂` on the budget line.
pub fn lower_objective(tables: &SieveTables, sigma1: f64, sigma2: f64, s1: f64) -> f64 {
    let s2 = budget_s2(sigma1, sigma2, s1).max(2.0);
    let (u1, u2) = (tables.upper1(s1), tables.upper2(s2));
    tables.lower1(s1) * u2 + tables.lower2(s2) * u1 - u1 * u2
}

fn check_sigmas(sigma1: f64, sigma2: f64) -> Result<()> {
    if !(sigma1.is_finite() && sigma1 > 0.0) {
        return Err(Error::domain("sigma1", sigma1, "(0, ∞)"));
    }
    if !(sigma2.is_finite() && sigma2 > 0.0) {
        return Err(Error::domain("sigma2", sigma2, "(0, ∞)"));
    }
    Ok(())
}

/// `F(σ₁, σ₂)`. Infeasible unless `σ₂ > 1`.
pub fn upper_combined(sigma1: f64, sigma2: f64, tables: &SieveTables) -> Result<CombinerResult> {
    check_sigmas(sigma1, sigma2)?;
    if sigma2 <= 1.0 {
        return Err(Error::Infeasible(format!(
            "F({sigma1}, {sigma2}): s2 >= 1 requires sigma2 > 1"
        )));
    }
    let hi = sigma1 * (1.0 - 1.0 / sigma2);
    let lo = SCAN_START.min(hi);
    let (s1, value) = minimize(lo, hi, |s1| upper_objective(tables, sigma1, sigma2, s1));
    Ok(CombinerResult {
        value,
        s1,
        s2: budget_s2(sigma1, sigma2, s1).max(1.0),
        feasible: true,
    })
}

/// `f(σ₁, σ₂)`. Infeasible unless `1/σ₁ + 2/σ₂ ≤ 1`.
pub fn lower_combined(sigma1: f64, sigma2: f64, tables: &SieveTables) -> Result<CombinerResult> {
    check_sigmas(sigma1, sigma2)?;
    let budget = 1.0 / sigma1 + 2.0 / sigma2;
    if budget > 1.0 + FEASIBILITY_SLACK {
        return Err(Error::Infeasible(format!(
            "f({sigma1}, {sigma2}): 1/sigma1 + 2/sigma2 = {budget} > 1"
        )));
    }
    let hi = (sigma1 * (1.0 - 2.0 / sigma2)).max(1.0);
    let (s1, neg) = minimize(1.0, hi, |s1| -lower_objective(tables, sigma1, sigma2, s1));
    Ok(CombinerResult {
        value: -neg,
        s1,
        s2: budget_s2(sigma1, sigma2, s1).max(2.0),
        feasible: true,
    })
}

/// Minimize `g` on `[lo, hi]`: scan at [`SCAN_STEP`], then golden-section search
/// inside the cell pair around the best scan point. Ties keep the smallest argument.
fn minimize(lo: f64, hi: f64, g: impl Fn(f64) -> f64) -> (f64, f64) {
    let span = hi - lo;
    if span <= 0.0 {
        return (lo, g(lo));
    }
    let n = (span / SCAN_STEP).floor() as usize;
    let node = |k: usize| if k > n { hi } else { lo + k as f64 * SCAN_STEP };
    let last = if node(n) < hi { n + 1 } else { n };
    let mut best_k = 0;
    let mut best = g(lo);
    for k in 1..=last {
        let v = g(node(k));
        if v < best {
            best = v;
            best_k = k;
        }
    }
    let a = node(best_k.saturating_sub(1));
    let b = node((best_k + 1).min(last));
    let (x, v) = golden_section(a, b, &g);
    if v < best {
        (x, v)
    } else {
        (node(best_k), best)
    }
}

fn golden_section(mut a: f64, mut b: f64, g: impl Fn(f64) -> f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    while b - a > GOLDEN_TOLERANCE {
        if gc <= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
    }
    if gc <= gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, v) = golden_section(0.0, 3.0, |x| (x - 1.234).powi(2) + 0.5);
        assert!((x - 1.234).abs() < 1e-6);
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn minimize_prefers_smallest_argument_on_plateau() {
        let (x, v) = minimize(0.0, 1.0, |x| if x < 0.3 { 1.0 - x } else { 0.7 });
        assert_eq!(v, 0.7);
        assert!((x - 0.3).abs() < 2e-4);
    }

    #[test]
    fn minimize_handles_degenerate_interval() {
        assert_eq!(minimize(2.0, 2.0, |x| x * x), (2.0, 4.0));
    }
}
