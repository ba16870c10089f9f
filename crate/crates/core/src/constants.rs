//! Euler-product constants
//!
//! - `C  = 9/4 ∏_{p>3, p≡3(4)} (1 − (3p−1)/(p−1)³) ∏_{p≡1(4)} (1 − 1/(p−1)²)`
//! - `c₁ = ∏_{p>3} (1 + 1/(p−2)²)`
//! - `c₂ = ∏_{p>2} (1 − 1/(p−1)²)`
//! - `c₃ = 2/√π ∏_{p≡1(4)} (1−1/p)^{1/2} (1 + p²/(p−1)³) ∏_{p≡3(4)} (1−1/p)^{1/2}`
//!
//! The `c₃` product converges only conditionally. Each local factor is divided by
//! `(1 − χ₄(p)/p)^{−1/2}`; the product of those model factors over odd primes is
//! `L(1, χ₄)^{1/2} = (π/4)^{1/2}`, which cancels the prefactor exactly, leaving an
//! absolutely convergent product of residual factors
//! `1 + (2p−1)/(p(p−1)²)` for `p ≡ 1 (mod 4)` and `(1 − 1/p²)^{1/2}` for `p ≡ 3 (mod 4)`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::{primes_up_to, ResidueClass};
use crate::summation::CompensatedSum;

pub const MIN_CUTOFF: u64 = 100_000;
pub const MIN_CUTOFF_C3: u64 = 1_000_000;
pub const DEFAULT_CUTOFF: u64 = 100_000_000;

/// Values frozen at cutoff `10⁸`, sequential order of increasing `p`.
pub const REFERENCE: Constants = Constants {
    c: 1.772_720_316_506_379_4,
    c1: 1.202_502_581_982_082_3,
    c2: 0.660_161_816_187_617_8,
    c3: 1.060_688_678_862_141,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstantName {
    #[serde(rename = "C")]
    C,
    #[serde(rename = "c1")]
    C1,
    #[serde(rename = "c2")]
    C2,
    #[serde(rename = "c3")]
    C3,
}

impl ConstantName {
    pub const ALL: [ConstantName; 4] = [ConstantName::C, ConstantName::C1, ConstantName::C2, ConstantName::C3];

    pub fn label(self) -> &'static str {
        match self {
            ConstantName::C => "C",
            ConstantName::C1 => "c1",
            ConstantName::C2 => "c2",
            ConstantName::C3 => "c3",
        }
    }
}

/// Which square appears in the `p ≡ 1 (mod 4)` factors of `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CVariant {
    /// `1 − 1/(p−1)²`, forced by the local-density computation.
    #[default]
    PMinusOne,
    /// `1 − 1/(p−2)²`, for comparison.
    PMinusTwo,
}

/// The four constants together.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantValue {
    pub name: ConstantName,
    pub value: f64,
    pub cutoff: u64,
    pub tail_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub cutoff: u64,
    pub values: Vec<ConstantValue>,
    /// Wall time; kept out of serialized output so reruns diff cleanly.
    #[serde(skip)]
    pub runtime_seconds: f64,
}

impl ConstantsReport {
    pub fn get(&self, name: ConstantName) -> Option<&ConstantValue> {
        self.values.iter().find(|v| v.name == name)
    }

    pub fn constants(&self) -> Constants {
        let v = |n| self.get(n).map(|c| c.value).unwrap_or(f64::NAN);
        Constants {
            c: v(ConstantName::C),
            c1: v(ConstantName::C1),
            c2: v(ConstantName::C2),
            c3: v(ConstantName::C3),
        }
    }
}

/// Relative tail estimate `3 / (X log X)` for products with factors `1 + O(3/p²)`.
pub fn tail_bound(cutoff: u64) -> f64 {
    let x = cutoff as f64;
    3.0 / (x * x.ln())
}

/// `log` of one local factor of `name` at prime `p`; `None` when `p` contributes nothing.
fn log_factor(name: ConstantName, variant: CVariant, p: u64, class: ResidueClass) -> Option<f64> {
    let q = p as f64;
    match name {
        ConstantName::C => match class {
            ResidueClass::ThreeMod4 if p > 3 => Some((-(3.0 * q - 1.0) / (q - 1.0).powi(3)).ln_1p()),
            ResidueClass::OneMod4 => {
                let d = match variant {
                    CVariant::PMinusOne => q - 1.0,
                    CVariant::PMinusTwo => q - 2.0,
                };
                Some((-1.0 / (d * d)).ln_1p())
            }
            _ => None,
        },
        ConstantName::C1 => (p > 3).then(|| (1.0 / (q - 2.0).powi(2)).ln_1p()),
        ConstantName::C2 => (p > 2).then(|| (-1.0 / (q - 1.0).powi(2)).ln_1p()),
        ConstantName::C3 => match class {
            ResidueClass::OneMod4 => Some(((2.0 * q - 1.0) / (q * (q - 1.0).powi(2))).ln_1p()),
            ResidueClass::ThreeMod4 => Some(0.5 * (-1.0 / (q * q)).ln_1p()),
            ResidueClass::Two => None,
        },
    }
}

fn prefactor(name: ConstantName) -> f64 {
    match name {
        ConstantName::C => 2.25,
        // 2/√π · L(1, χ₄)^{1/2} = 1.
        ConstantName::C3 => 1.0,
        _ => 1.0,
    }
}

/// Partial products of all four constants over primes `<= cutoff`,
/// accumulated in increasing `p` with compensated log sums.
pub fn partial_products(cutoff: u64, variant: CVariant) -> Constants {
    let mut sums = [CompensatedSum::default(); 4];
    for (p, class) in primes_up_to(cutoff) {
        for (k, name) in ConstantName::ALL.into_iter().enumerate() {
            if let Some(l) = log_factor(name, variant, p, class) {
                sums[k].add(l);
            }
        }
    }
    let v = |k: usize| prefactor(ConstantName::ALL[k]) * sums[k].value().exp();
    Constants {
        c: v(0),
        c1: v(1),
        c2: v(2),
        c3: v(3),
    }
}

/// The unaccelerated interleaved partial product for `c₃`, prefactor included.
pub fn c3_raw_partial(cutoff: u64) -> f64 {
    let mut sum = CompensatedSum::default();
    for (p, class) in primes_up_to(cutoff) {
        let q = p as f64;
        match class {
            ResidueClass::OneMod4 => {
                sum.add(0.5 * (-1.0 / q).ln_1p());
                sum.add((q * q / (q - 1.0).powi(3)).ln_1p());
            }
            ResidueClass::ThreeMod4 => sum.add(0.5 * (-1.0 / q).ln_1p()),
            ResidueClass::Two => {}
        }
    }
    2.0 / std::f64::consts::PI.sqrt() * sum.value().exp()
}

fn single(name: ConstantName, cutoff: u64, variant: CVariant) -> Result<ConstantValue> {
    let min = if name == ConstantName::C3 { MIN_CUTOFF_C3 } else { MIN_CUTOFF };
    if cutoff < min {
        return Err(Error::domain("cutoff", cutoff as f64, if min == MIN_CUTOFF { "[1e5, ∞)" } else { "[1e6, ∞)" }));
    }
    let all = partial_products(cutoff, variant);
    let value = pick(&all, name);
    Ok(ConstantValue {
        name,
        value,
        cutoff,
        tail_error: value * tail_bound(cutoff),
    })
}

fn pick(c: &Constants, name: ConstantName) -> f64 {
    match name {
        ConstantName::C => c.c,
        ConstantName::C1 => c.c1,
        ConstantName::C2 => c.c2,
        ConstantName::C3 => c.c3,
    }
}

pub fn compute_c(cutoff: u64, variant: CVariant) -> Result<ConstantValue> {
    single(ConstantName::C, cutoff, variant)
}

pub fn compute_c1(cutoff: u64) -> Result<ConstantValue> {
    single(ConstantName::C1, cutoff, CVariant::default())
}

pub fn compute_c2(cutoff: u64) -> Result<ConstantValue> {
    single(ConstantName::C2, cutoff, CVariant::default())
}

pub fn compute_c3(cutoff: u64) -> Result<ConstantValue> {
    single(ConstantName::C3, cutoff, CVariant::default())
}

/// Accelerated `c₃` at `cutoff` and `cutoff / 10`; fails when they differ by
/// more than `tolerance`.
pub fn compute_c3_checked(cutoff: u64, tolerance: f64) -> Result<ConstantValue> {
    let v = compute_c3(cutoff)?;
    let coarse = partial_products(cutoff / 10, CVariant::default()).c3;
    let diff = (v.value - coarse).abs();
    if diff > tolerance {
        return Err(Error::Acceleration {
            achieved: diff,
            requested: tolerance,
        });
    }
    Ok(v)
}

/// All four constants in a single pass over the primes.
pub fn compute_all(cutoff: u64, variant: CVariant) -> Result<ConstantsReport> {
    if cutoff < MIN_CUTOFF_C3 {
        return Err(Error::domain("cutoff", cutoff as f64, "[1e6, ∞)"));
    }
    let start = Instant::now();
    let all = partial_products(cutoff, variant);
    let tail = tail_bound(cutoff);
    let values = ConstantName::ALL
        .into_iter()
        .map(|name| {
            let value = pick(&all, name);
            ConstantValue {
                name,
                value,
                cutoff,
                tail_error: value * tail,
            }
        })
        .collect();
    Ok(ConstantsReport {
        cutoff,
        values,
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_expansions_at_ten() {
        let c = partial_products(10, CVariant::PMinusOne);
        // p = 5 (≡ 1) and p = 7 (≡ 3); p = 2, 3 contribute nothing.
        let expect_c = 2.25 * (15.0 / 16.0) * (49.0 / 54.0);
        assert!((c.c - expect_c).abs() < 1e-15);
        let expect_c1 = (1.0 + 1.0 / 9.0) * (1.0 + 1.0 / 25.0);
        assert!((c.c1 - expect_c1).abs() < 1e-15);
        let expect_c2 = (1.0 - 1.0 / 4.0) * (1.0 - 1.0 / 16.0) * (1.0 - 1.0 / 36.0);
        assert!((c.c2 - expect_c2).abs() < 1e-15);
    }

    #[test]
    fn prefactor_only_raw_c3() {
        assert!((c3_raw_partial(2) - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-15);
    }

    #[test]
    fn residual_factors_match_local_over_model() {
        for p in [5u64, 13, 101, 7, 11, 103] {
            let q = p as f64;
            let (local, chi) = if p % 4 == 1 {
                ((1.0 - 1.0 / q).sqrt() * (1.0 + q * q / (q - 1.0).powi(3)), 1.0)
            } else {
                ((1.0 - 1.0 / q).sqrt(), -1.0)
            };
            let model = (1.0 - chi / q).powf(-0.5);
            let got = log_factor(ConstantName::C3, CVariant::default(), p, ResidueClass::of(p))
                .unwrap()
                .exp();
            assert!((got - local / model).abs() < 1e-14, "p = {p}");
        }
    }

    #[test]
    fn local_factors_in_unit_window() {
        for (p, class) in primes_up_to(10_000) {
            for name in ConstantName::ALL {
                for variant in [CVariant::PMinusOne, CVariant::PMinusTwo] {
                    if let Some(l) = log_factor(name, variant, p, class) {
                        let f = l.exp();
                        assert!(f > 0.0 && f < 2.0, "{name:?} at {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn preconditions() {
        assert!(compute_c(99_999, CVariant::default()).is_err());
        assert!(compute_c3(999_999).is_err());
        assert!(compute_all(10, CVariant::default()).is_err());
    }
}
