//! The objectives
//!
//! `G(θ₁, θ₂) = K f((2θ₁)⁻¹, (2θ₂)⁻¹) / (θ₁^{1/2} θ₂) − 2c₁c₂²c₃ C(θ₁) / (θ₂ min(θ₁, 1/2 − θ₂))`
//!
//! and `H(λ, θ, θ₁, θ₂) = G(θ₁, θ₂) − λ K I(θ, θ₁, θ₂) / (θ₁^{1/2} θ₂)`, with
//! `K = C e^{−3γ/2} / 4`, together with the grid searches over them.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combiner::{lower_combined, SieveTables};
use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::integrals::{integral_c, integral_i};
use crate::EULER_GAMMA;

/// A point `(λ, θ, θ₁, θ₂)` with `0 < θ₂ < θ₁ < 1/2`, `θ₁ > 1/4`, `θ₂ < θ < 1/2`, `λ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    pub lambda: f64,
    pub theta: f64,
    pub theta1: f64,
    pub theta2: f64,
}

fn check_thetas(theta1: f64, theta2: f64) -> Result<()> {
    if !(theta2 > 0.0 && theta2 < 0.5) {
        return Err(Error::domain("theta2", theta2, "(0, 1/2)"));
    }
    if !(theta1 > 0.25 && theta1 < 0.5) {
        return Err(Error::domain("theta1", theta1, "(1/4, 1/2)"));
    }
    if theta1 <= theta2 {
        return Err(Error::domain("theta1", theta1, "(theta2, 1/2)"));
    }
    Ok(())
}

impl SearchParams {
    pub fn new(lambda: f64, theta: f64, theta1: f64, theta2: f64) -> Result<Self> {
        let p = SearchParams {
            lambda,
            theta,
            theta1,
            theta2,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_thetas(self.theta1, self.theta2)?;
        if !(self.theta > self.theta2 && self.theta < 0.5) {
            return Err(Error::domain("theta", self.theta, "(theta2, 1/2)"));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::domain("lambda", self.lambda, "(0, ∞)"));
        }
        Ok(())
    }

    /// `1/λ + 1/θ`.
    pub fn omega_bound(&self) -> f64 {
        1.0 / self.lambda + 1.0 / self.theta
    }

    fn key(&self) -> [f64; 4] {
        [self.lambda, self.theta, self.theta1, self.theta2]
    }
}

/// Largest integer strictly below `omega`.
pub fn integer_below(omega: f64) -> i64 {
    omega.ceil() as i64 - 1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GReport {
    pub theta1: f64,
    pub theta2: f64,
    /// `f((2θ₁)⁻¹, (2θ₂)⁻¹)`.
    pub f_value: f64,
    /// `C(θ₁)`.
    pub c_theta1: f64,
    pub term_main: f64,
    pub term_switching: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveReport {
    pub params: SearchParams,
    pub f_value: f64,
    pub c_theta1: f64,
    /// `I(θ, θ₁, θ₂)`.
    pub i_value: f64,
    pub term_main: f64,
    pub term_switching: f64,
    pub term_weighted: f64,
    pub h_value: f64,
    pub omega_bound: f64,
    pub omega_integer_bound: i64,
}

/// Inclusive arithmetic grid `lo, lo + step, …, ≤ hi`; points are rounded to `1e-10`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

fn round10(x: f64) -> f64 {
    (x * 1e10).round() / 1e10
}

fn key10(x: f64) -> i64 {
    (x * 1e10).round() as i64
}

impl Axis {
    pub fn new(lo: f64, hi: f64, step: f64) -> Self {
        Axis { lo, hi, step }
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::domain("step", self.step, "(0, ∞)"));
        }
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.hi < self.lo {
            return Err(Error::EmptyGrid(format!("[{}, {}]", self.lo, self.hi)));
        }
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        Ok((0..=n).map(|k| round10(self.lo + k as f64 * self.step)).collect())
    }
}

/// Ranges for the `G` search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GSearchSpec {
    pub theta1: Axis,
    pub theta2: Axis,
}

impl GSearchSpec {
    /// `θ₁ ∈ (1/4, 1/2)`, `θ₂ ∈ (0, 0.05]` at a common step.
    pub fn with_step(step: f64) -> Self {
        GSearchSpec {
            theta1: Axis::new(0.25, 0.5, step),
            theta2: Axis::new(0.0, 0.05, step),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GSearchOutcome {
    /// Largest `θ₂` with a positive `G`, and the maximizing `θ₁` there.
    pub best: GReport,
    /// Every evaluated cell, in scan order, when recording was requested.
    pub rows: Vec<GRow>,
}

/// One scanned cell; `value` is `None` when the lower function is infeasible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GRow {
    pub theta1: f64,
    pub theta2: f64,
    pub term_main: Option<f64>,
    pub term_switching: Option<f64>,
    pub value: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HSearchSpec {
    pub lambda: Axis,
    pub theta: Axis,
    pub theta1: Axis,
    pub theta2: Axis,
    pub refine_rounds: u32,
}

impl HSearchSpec {
    /// The point lies inside every axis range.
    pub fn contains(&self, p: &SearchParams) -> bool {
        let inside = |a: &Axis, v: f64| v >= a.lo - 1e-12 && v <= a.hi + 1e-12;
        inside(&self.lambda, p.lambda)
            && inside(&self.theta, p.theta)
            && inside(&self.theta1, p.theta1)
            && inside(&self.theta2, p.theta2)
    }
}

impl Default for HSearchSpec {
    fn default() -> Self {
        HSearchSpec {
            lambda: Axis::new(0.05, 0.5, 0.01),
            theta: Axis::new(0.05, 0.45, 0.01),
            theta1: Axis::new(0.25, 0.5, 0.001),
            theta2: Axis::new(0.001, 0.05, 0.001),
            refine_rounds: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HSearchOutcome {
    pub incumbent: ObjectiveReport,
    /// Incumbent `ω` bound after the coarse scan and after each refinement round.
    pub history: Vec<f64>,
    /// One row per `(θ, θ₁, θ₂)` cell whose weighted integral was evaluated,
    /// at the largest grid `λ` keeping `H > 0` (or the smallest grid `λ` if none does).
    pub rows: Vec<ObjectiveReport>,
}

/// Objective evaluator with memoized `C(θ₁)`, `I(θ, θ₁, θ₂)` and `f(σ₁, σ₂)`.
pub struct Objective<'a> {
    tables: &'a SieveTables,
    constants: Constants,
    c_cache: Mutex<HashMap<i64, f64>>,
    i_cache: Mutex<HashMap<[i64; 3], std::result::Result<f64, String>>>,
    f_cache: Mutex<HashMap<[i64; 2], Option<f64>>>,
}

impl<'a> Objective<'a> {
    pub fn new(tables: &'a SieveTables, constants: Constants) -> Self {
        Objective {
            tables,
            constants,
            c_cache: Mutex::default(),
            i_cache: Mutex::default(),
            f_cache: Mutex::default(),
        }
    }

    pub fn constants(&self) -> Constants {
        self.constants
    }

    /// `K = C e^{−3γ/2} / 4`.
    pub fn k_factor(&self) -> f64 {
        self.constants.c * (-1.5 * EULER_GAMMA).exp() / 4.0
    }

    fn c_theta1(&self, theta1: f64) -> Result<f64> {
        let key = key10(theta1);
        if let Some(&v) = self.c_cache.lock().expect("cache lock").get(&key) {
            return Ok(v);
        }
        let v = integral_c(theta1)?.value;
        self.c_cache.lock().expect("cache lock").insert(key, v);
        Ok(v)
    }

    fn lower_value(&self, theta1: f64, theta2: f64) -> Result<Option<f64>> {
        let key = [key10(theta1), key10(theta2)];
        if let Some(&v) = self.f_cache.lock().expect("cache lock").get(&key) {
            return Ok(v);
        }
        let v = match lower_combined(1.0 / (2.0 * theta1), 1.0 / (2.0 * theta2), self.tables) {
            Ok(r) => Some(r.value),
            Err(Error::Infeasible(_)) => None,
            Err(e) => return Err(e),
        };
        self.f_cache.lock().expect("cache lock").insert(key, v);
        Ok(v)
    }

    /// `I(θ, θ₁, θ₂)`.
    pub fn weighted_integral(&self, theta: f64, theta1: f64, theta2: f64) -> Result<f64> {
        let key = [key10(theta), key10(theta1), key10(theta2)];
        if let Some(v) = self.i_cache.lock().expect("cache lock").get(&key) {
            return v.clone().map_err(Error::Infeasible);
        }
        let v = match integral_i(theta, theta1, theta2, self.tables) {
            Ok(r) => Ok(r.value),
            Err(Error::Infeasible(msg)) => Err(msg),
            Err(e) => return Err(e),
        };
        self.i_cache.lock().expect("cache lock").insert(key, v.clone());
        v.map_err(Error::Infeasible)
    }

    /// Weighted term per unit `λ`: `K I(θ, θ₁, θ₂) / (θ₁^{1/2} θ₂)`.
    pub fn weighted_term_per_lambda(&self, theta: f64, theta1: f64, theta2: f64) -> Result<f64> {
        Ok(self.k_factor() * self.weighted_integral(theta, theta1, theta2)? / (theta1.sqrt() * theta2))
    }

    /// `G(θ₁, θ₂)`; an infeasible lower function is an [`Error::Infeasible`].
    pub fn eval_g(&self, theta1: f64, theta2: f64) -> Result<GReport> {
        check_thetas(theta1, theta2)?;
        let f_value = self.lower_value(theta1, theta2)?.ok_or_else(|| {
            Error::Infeasible(format!(
                "f((2θ1)^-1, (2θ2)^-1) at θ1 = {theta1}, θ2 = {theta2}: 2θ1 + 4θ2 > 1"
            ))
        })?;
        let c_theta1 = self.c_theta1(theta1)?;
        let Constants { c1, c2, c3, .. } = self.constants;
        let term_main = self.k_factor() * f_value / (theta1.sqrt() * theta2);
        let term_switching = 2.0 * c1 * c2 * c2 * c3 * c_theta1 / (theta2 * theta1.min(0.5 - theta2));
        Ok(GReport {
            theta1,
            theta2,
            f_value,
            c_theta1,
            term_main,
            term_switching,
            value: term_main - term_switching,
        })
    }

    /// `H(λ, θ, θ₁, θ₂)` with its three terms.
    pub fn eval_h(&self, params: &SearchParams) -> Result<ObjectiveReport> {
        params.validate()?;
        let g = self.eval_g(params.theta1, params.theta2)?;
        let i_value = self.weighted_integral(params.theta, params.theta1, params.theta2)?;
        let term_weighted = params.lambda * self.k_factor() * i_value / (params.theta1.sqrt() * params.theta2);
        let omega_bound = params.omega_bound();
        Ok(ObjectiveReport {
            params: *params,
            f_value: g.f_value,
            c_theta1: g.c_theta1,
            i_value,
            term_main: g.term_main,
            term_switching: g.term_switching,
            term_weighted,
            h_value: g.term_main - g.term_switching - term_weighted,
            omega_bound,
            omega_integer_bound: integer_below(omega_bound),
        })
    }

    /// Scan `θ₂` downward; at the first `θ₂` where some `θ₁` gives `G > 0`,
    /// return the `G`-maximizing `θ₁` (smallest on ties).
    pub fn search_g(&self, spec: &GSearchSpec, record: bool) -> Result<GSearchOutcome> {
        let theta1s = spec.theta1.points()?;
        let mut theta2s = spec.theta2.points()?;
        theta2s.reverse();
        let mut rows = Vec::new();
        let mut best_seen: Option<GReport> = None;
        let mut any_cell = false;
        for &theta2 in &theta2s {
            let cells: Vec<f64> = theta1s
                .iter()
                .copied()
                .filter(|&t1| check_thetas(t1, theta2).is_ok())
                .collect();
            if cells.is_empty() {
                continue;
            }
            any_cell = true;
            let evaluated: Vec<Option<GReport>> = cells
                .par_iter()
                .map(|&t1| match self.eval_g(t1, theta2) {
                    Ok(r) => Ok(Some(r)),
                    Err(Error::Infeasible(_)) => Ok(None),
                    Err(e) => Err(e),
                })
                .collect::<Result<_>>()?;
            if record {
                rows.extend(cells.iter().zip(&evaluated).map(|(&t1, r)| GRow {
                    theta1: t1,
                    theta2,
                    term_main: r.map(|r| r.term_main),
                    term_switching: r.map(|r| r.term_switching),
                    value: r.map(|r| r.value),
                }));
            }
            let row_best = evaluated
                .iter()
                .flatten()
                .fold(None::<GReport>, |acc, r| match acc {
                    Some(a) if a.value >= r.value => Some(a),
                    _ => Some(*r),
                });
            if let Some(b) = row_best {
                if b.value > 0.0 {
                    return Ok(GSearchOutcome { best: b, rows });
                }
                if best_seen.is_none_or(|s| b.value > s.value) {
                    best_seen = Some(b);
                }
            }
        }
        if !any_cell {
            return Err(Error::EmptyGrid("no (θ1, θ2) cell satisfies 0 < θ2 < θ1, 1/4 < θ1 < 1/2".into()));
        }
        Err(Error::NoPositivePoint {
            best: best_seen.map(|b| (vec![b.theta1, b.theta2], b.value)),
        })
    }

    /// Minimize `1/λ + 1/θ` subject to `H > 0`: coarse grid scan followed by
    /// `refine_rounds` rounds of local moves with halved steps, kept inside the
    /// axis ranges.
    ///
    /// Cells with `G ≤ 0` are skipped exactly, since the weighted term is
    /// non-negative. For each remaining `(θ, θ₁, θ₂)` only the largest grid `λ`
    /// with `H > 0` can be optimal.
    pub fn search_h(&self, spec: &HSearchSpec, record: bool) -> Result<HSearchOutcome> {
        let lambdas: Vec<f64> = spec.lambda.points()?.into_iter().filter(|&l| l > 0.0).collect();
        let thetas = spec.theta.points()?;
        let theta1s = spec.theta1.points()?;
        let theta2s = spec.theta2.points()?;

        let pairs: Vec<(f64, f64)> = theta1s
            .iter()
            .flat_map(|&t1| theta2s.iter().map(move |&t2| (t1, t2)))
            .filter(|&(t1, t2)| check_thetas(t1, t2).is_ok())
            .collect();
        if pairs.is_empty() || lambdas.is_empty() {
            return Err(Error::EmptyGrid(
                "no (λ, θ1, θ2) grid point satisfies λ > 0, 0 < θ2 < θ1, 1/4 < θ1 < 1/2".into(),
            ));
        }
        let positive: Vec<GReport> = pairs
            .par_iter()
            .map(|&(t1, t2)| match self.eval_g(t1, t2) {
                Ok(r) => Ok(Some(r)),
                Err(Error::Infeasible(_)) => Ok(None),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .filter(|g| g.value > 0.0)
            .collect();

        let cells: Vec<(f64, GReport)> = thetas
            .iter()
            .flat_map(|&th| positive.iter().map(move |g| (th, *g)))
            .filter(|(th, g)| *th > g.theta2 && *th < 0.5)
            .collect();
        let evaluated: Vec<Option<ObjectiveReport>> = cells
            .par_iter()
            .map(|&(th, g)| {
                let w = match self.weighted_term_per_lambda(th, g.theta1, g.theta2) {
                    Ok(w) => w,
                    Err(Error::Infeasible(_)) => return Ok(None),
                    Err(e) => return Err(e),
                };
                let lambda = lambdas
                    .iter()
                    .rev()
                    .copied()
                    .find(|&l| g.value - l * w > 0.0)
                    .unwrap_or(lambdas[0]);
                let params = SearchParams {
                    lambda,
                    theta: th,
                    theta1: g.theta1,
                    theta2: g.theta2,
                };
                Ok(Some(self.report_from(params, &g, w)))
            })
            .collect::<Result<_>>()?;
        let rows: Vec<ObjectiveReport> = evaluated.into_iter().flatten().collect();
        let incumbent = rows
            .iter()
            .filter(|r| r.h_value > 0.0)
            .copied()
            .min_by(rank);
        let Some(mut incumbent) = incumbent else {
            let best = rows
                .iter()
                .max_by(|a, b| a.h_value.total_cmp(&b.h_value))
                .map(|r| (r.params.key().to_vec(), r.h_value))
                .or_else(|| {
                    pairs.first().map(|&(t1, t2)| (vec![f64::NAN, f64::NAN, t1, t2], f64::NAN))
                });
            return Err(Error::NoPositivePoint { best });
        };

        let mut history = vec![incumbent.omega_bound];
        let mut steps = [spec.lambda.step, spec.theta.step, spec.theta1.step, spec.theta2.step];
        for _ in 0..spec.refine_rounds {
            for s in &mut steps {
                *s /= 2.0;
            }
            for _ in 0..64 {
                let candidates: Vec<SearchParams> = neighbours(&incumbent.params, &steps)
                    .into_iter()
                    .filter(|p| spec.contains(p))
                    .collect();
                let better = candidates
                    .par_iter()
                    .map(|p| match self.eval_h(p) {
                        Ok(r) => Ok(Some(r)),
                        Err(Error::Infeasible(_)) | Err(Error::Domain { .. }) => Ok(None),
                        Err(e) => Err(e),
                    })
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .flatten()
                    .filter(|r| r.h_value > 0.0 && rank(r, &incumbent) == Ordering::Less)
                    .min_by(rank);
                match better {
                    Some(r) => incumbent = r,
                    None => break,
                }
            }
            history.push(incumbent.omega_bound);
        }
        Ok(HSearchOutcome {
            incumbent,
            history,
            rows: if record { rows } else { Vec::new() },
        })
    }

    fn report_from(&self, params: SearchParams, g: &GReport, w: f64) -> ObjectiveReport {
        let term_weighted = params.lambda * w;
        let omega_bound = params.omega_bound();
        ObjectiveReport {
            params,
            f_value: g.f_value,
            c_theta1: g.c_theta1,
            i_value: w * params.theta1.sqrt() * params.theta2 / self.k_factor(),
            term_main: g.term_main,
            term_switching: g.term_switching,
            term_weighted,
            h_value: g.term_main - g.term_switching - term_weighted,
            omega_bound,
            omega_integer_bound: integer_below(omega_bound),
        }
    }
}

/// Order by `ω` bound, then lexicographically by `(λ, θ, θ₁, θ₂)`.
fn rank(a: &ObjectiveReport, b: &ObjectiveReport) -> Ordering {
    a.omega_bound.total_cmp(&b.omega_bound).then_with(|| {
        a.params
            .key()
            .iter()
            .zip(b.params.key())
            .map(|(x, y)| x.total_cmp(&y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// Moves that can lower `1/λ + 1/θ`: raise `λ` or `θ` by one step, each combined
/// with every shift of `θ₁`, `θ₂` by `−1, 0, +1` steps.
fn neighbours(p: &SearchParams, steps: &[f64; 4]) -> Vec<SearchParams> {
    let mut out = Vec::new();
    for (dl, dt) in [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
        for d1 in [-1.0, 0.0, 1.0] {
            for d2 in [-1.0, 0.0, 1.0] {
                out.push(SearchParams {
                    lambda: round10(p.lambda + dl * steps[0]),
                    theta: round10(p.theta + dt * steps[1]),
                    theta1: round10(p.theta1 + d1 * steps[2]),
                    theta2: round10(p.theta2 + d2 * steps[3]),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_bound_is_strict() {
        assert_eq!(integer_below(11.4907), 11);
        assert_eq!(integer_below(12.0), 11);
        assert_eq!(integer_below(11.0000001), 11);
    }

    #[test]
    fn params_validation() {
        assert!(SearchParams::new(0.14, 0.23, 0.449, 0.011).is_ok());
        assert!(SearchParams::new(0.0, 0.23, 0.449, 0.011).is_err());
        assert!(SearchParams::new(0.14, 0.5, 0.449, 0.011).is_err());
        assert!(SearchParams::new(0.14, 0.23, 0.25, 0.011).is_err());
        assert!(SearchParams::new(0.14, 0.23, 0.449, 0.449).is_err());
        assert!(SearchParams::new(0.14, 0.01, 0.449, 0.011).is_err());
        let p = SearchParams::new(0.14, 0.23, 0.449, 0.011).unwrap();
        assert!((p.omega_bound() - 11.4907).abs() < 1e-4);
    }

    #[test]
    fn axis_points() {
        let a = Axis::new(0.25, 0.5, 0.05).points().unwrap();
        assert_eq!(a, vec![0.25, 0.3, 0.35, 0.4, 0.45, 0.5]);
        assert!(Axis::new(0.5, 0.25, 0.05).points().is_err());
        assert!(Axis::new(0.0, 1.0, 0.0).points().is_err());
        assert_eq!(Axis::new(0.0219, 0.0219, 1e-4).points().unwrap(), vec![0.0219]);
    }

    #[test]
    fn rank_breaks_ties_lexicographically() {
        let base = ObjectiveReport {
            params: SearchParams {
                lambda: 0.2,
                theta: 0.2,
                theta1: 0.4,
                theta2: 0.01,
            },
            f_value: 0.0,
            c_theta1: 0.0,
            i_value: 0.0,
            term_main: 0.0,
            term_switching: 0.0,
            term_weighted: 0.0,
            h_value: 1.0,
            omega_bound: 10.0,
            omega_integer_bound: 9,
        };
        let mut other = base;
        other.params.theta1 = 0.39;
        assert_eq!(rank(&other, &base), Ordering::Less);
        other.omega_bound = 10.5;
        assert_eq!(rank(&other, &base), Ordering::Greater);
    }
}
