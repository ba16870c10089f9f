//! The switching integral `C(θ₁)` and the weighted-sieve integral `I(θ, θ₁, θ₂)`.

use crate::combiner::{upper_combined, SieveTables};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureResult};

/// Requested absolute tolerance for `C(θ₁)`.
pub const C_TOLERANCE: f64 = 1e-11;
/// Requested absolute tolerance for `I(θ, θ₁, θ₂)`.
pub const I_TOLERANCE: f64 = 1e-8;
const MAX_EVALUATIONS: usize = 200_000;

/// `C(θ₁) = ∫₀^{1−2θ₁} β^{−1/2} (1−β)^{−1} log((1−β−θ₁)/θ₁) dβ` for `1/4 < θ₁ ≤ 1/2`,
/// evaluated as `∫₀^{√(1−2θ₁)} 2 log((1−u²−θ₁)/θ₁) / (1−u²) du`.
pub fn integral_c(theta1: f64) -> Result<QuadratureResult> {
    integral_c_with_tolerance(theta1, C_TOLERANCE)
}

pub fn integral_c_with_tolerance(theta1: f64, tolerance: f64) -> Result<QuadratureResult> {
    if !(theta1 > 0.25 && theta1 <= 0.5) {
        return Err(Error::domain("theta1", theta1, "(1/4, 1/2]"));
    }
    let upper = (1.0 - 2.0 * theta1).sqrt();
    let r = integrate(
        |u: f64| -> Result<f64> {
            let w = 1.0 - u * u;
            Ok(2.0 * ((w - theta1) / theta1).ln() / w)
        },
        0.0,
        upper,
        tolerance,
        MAX_EVALUATIONS,
    )?;
    require_converged(r, tolerance)
}

/// `I(θ, θ₁, θ₂) = ∫_{θ₂}^{θ} (1 − α/θ) F((1−2α)/(2θ₁), (1−2α)/(2θ₂)) dα/α`.
pub fn integral_i(theta: f64, theta1: f64, theta2: f64, tables: &SieveTables) -> Result<QuadratureResult> {
    integral_i_with_tolerance(theta, theta1, theta2, tables, I_TOLERANCE)
}

pub fn integral_i_with_tolerance(
    theta: f64,
    theta1: f64,
    theta2: f64,
    tables: &SieveTables,
    tolerance: f64,
) -> Result<QuadratureResult> {
    if !(theta2 > 0.0 && theta2 < 0.5) {
        return Err(Error::domain("theta2", theta2, "(0, 1/2)"));
    }
    if !(theta1 > theta2 && theta1 < 0.5) {
        return Err(Error::domain("theta1", theta1, "(theta2, 1/2)"));
    }
    if !(theta >= theta2 && theta < 0.5) {
        return Err(Error::domain("theta", theta, "[theta2, 1/2)"));
    }
    if theta == theta2 {
        return Ok(QuadratureResult::zero());
    }
    let r = integrate(
        |alpha: f64| -> Result<f64> {
            let sigma1 = (1.0 - 2.0 * alpha) / (2.0 * theta1);
            let sigma2 = (1.0 - 2.0 * alpha) / (2.0 * theta2);
            let f = upper_combined(sigma1, sigma2, tables).map_err(|e| match e {
                Error::Infeasible(msg) => Error::Infeasible(format!("at alpha = {alpha}: {msg}")),
                other => other,
            })?;
            Ok((1.0 - alpha / theta) * f.value / alpha)
        },
        theta2,
        theta,
        tolerance,
        MAX_EVALUATIONS,
    )?;
    require_converged(r, tolerance)
}

fn require_converged(r: QuadratureResult, tolerance: f64) -> Result<QuadratureResult> {
    if r.converged {
        Ok(r)
    } else {
        Err(Error::Quadrature {
            tolerance,
            achieved: r.abs_error_estimate,
            evaluations: r.evaluations,
        })
    }
}
