//! Exact enumeration at desk scale: the sifted sets behind the sieve argument,
//! the identities and inequalities they satisfy, and a census of primes
//! `p = m² + n² + 1` with `Ω(p+2) ≤ k`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use crate::factor::{FactorSieve, FACTOR_SIEVE_CAP};
use crate::factor::factor_window;
use crate::primes::{isqrt, small_primes};
use crate::summation::CompensatedSum;

/// Relative tolerance for floating-point sides of the weighted chain.
pub const CHAIN_TOLERANCE: f64 = 1e-9;

fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// `n = a² + b²` with `a, b ≥ 1`, by direct search over `a`.
pub fn brute_force_sum_two_pos_squares(n: u64) -> bool {
    let mut a = 1;
    while 2 * a * a <= n {
        if is_square(n - a * a) {
            return true;
        }
        a += 1;
    }
    false
}

/// Decide the positive-parts question once the classical criterion is known:
/// a representation with non-negative parts exists, and only a perfect square
/// can need a zero part.
fn pos_squares_given(n: u64, odd_three_mod_four: bool) -> bool {
    if n == 0 || odd_three_mod_four {
        return false;
    }
    if is_square(n) {
        brute_force_sum_two_pos_squares(n)
    } else {
        true
    }
}

/// `n = a² + b²` with `a, b ≥ 1`.
pub fn is_sum_two_pos_squares(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut odd = false;
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if p % 4 == 3 && e % 2 == 1 {
            odd = true;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 && m % 4 == 3 {
        odd = true;
    }
    pos_squares_given(n, odd)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub x: u64,
    pub k: u32,
    /// `#{p ≤ x : p = m² + n² + 1 (m, n ≥ 1), Ω(p+2) ≤ k}`.
    pub count: u64,
    /// `count · (log x)^{5/2} / x`.
    pub normalized: f64,
}

const CENSUS_WINDOW: u64 = 1 << 18;

/// Census at every checkpoint in one streaming pass up to the largest.
pub fn census_checkpoints(checkpoints: &[u64], k: u32) -> Result<Vec<CensusReport>> {
    let Some(&x) = checkpoints.iter().max() else {
        return Ok(Vec::new());
    };
    if x + 2 > FACTOR_SIEVE_CAP {
        return Err(Error::CapExceeded {
            limit: x,
            cap: FACTOR_SIEVE_CAP - 2,
        });
    }
    let base = small_primes(isqrt(x + 2) + 1);
    let windows = x.div_ceil(CENSUS_WINDOW);
    let counts = (0..windows)
        .into_par_iter()
        .map(|w| {
            let lo = (w * CENSUS_WINDOW).max(2);
            let hi = ((w + 1) * CENSUS_WINDOW).min(x + 1);
            let mut local = vec![0u64; checkpoints.len()];
            if lo >= hi {
                return local;
            }
            // entries cover [lo − 1, hi + 2)
            let f = factor_window(lo - 1, hi + 2, &base);
            for p in lo..hi {
                let i = (p - (lo - 1)) as usize;
                if f[i].big_omega != 1 {
                    continue;
                }
                let below = f[i - 1];
                if !pos_squares_given(p - 1, below.odd_three_mod_four) {
                    continue;
                }
                if f[i + 2].big_omega as u32 > k {
                    continue;
                }
                for (c, &cp) in local.iter_mut().zip(checkpoints) {
                    if p <= cp {
                        *c += 1;
                    }
                }
            }
            local
        })
        .reduce(
            || vec![0u64; checkpoints.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(checkpoints
        .iter()
        .zip(counts)
        .map(|(&x, count)| CensusReport {
            x,
            k,
            count,
            normalized: normalized(count, x),
        })
        .collect())
}

fn normalized(count: u64, x: u64) -> f64 {
    if x < 2 {
        return 0.0;
    }
    let l = (x as f64).ln();
    count as f64 * l.powf(2.5) / x as f64
}

pub fn census(x: u64, k: u32) -> Result<CensusReport> {
    Ok(census_checkpoints(&[x], k)?[0])
}

/// `10, 100, …` up to `x`, with `x` itself appended when not a power of ten.
pub fn log_checkpoints(x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut c = 10u64;
    while c < x {
        out.push(c);
        c = c.saturating_mul(10);
    }
    out.push(x);
    out
}

/// A member `n = p − 1` of the sifted set, with its distinct prime factors `≡ 3 (mod 4)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiftedMember {
    pub n: u64,
    pub q_primes: Vec<u64>,
}

impl SiftedMember {
    /// Coprime to every prime `q < z` with `q ≡ 3 (mod 4)`.
    pub fn survives(&self, z: f64) -> bool {
        self.q_primes.iter().all(|&q| q as f64 >= z)
    }
}

/// An element `b = p + 2` with its factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BMember {
    pub b: u64,
    pub factors: Vec<(u64, u32)>,
}

impl BMember {
    pub fn little_omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

/// The sets
/// `𝒜 = {p − 1 : p ≤ x − 2, p ≡ 3 (mod 8), (p + 2, P(x^{θ₂})) = 1}`,
/// `𝒜⁽⁰⁾ ⊂ 𝒜` (no prime factor `≡ 3 (mod 4)`), and `ℬ = {p + 2 : p − 1 ∈ 𝒜⁽⁰⁾}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiftedSets {
    pub x: u64,
    pub theta1: f64,
    pub theta2: f64,
    pub a: Vec<SiftedMember>,
    pub a0: Vec<u64>,
    pub b: Vec<BMember>,
}

impl SiftedSets {
    pub fn build(x: u64, theta1: f64, theta2: f64) -> Result<Self> {
        let sieve = FactorSieve::new(x + 2)?;
        Self::build_with(&sieve, x, theta1, theta2)
    }

    /// Requires `0 < θ₂ < θ₁ ≤ 1/2` and a sieve covering `x`.
    pub fn build_with(sieve: &FactorSieve, x: u64, theta1: f64, theta2: f64) -> Result<Self> {
        if !(theta2 > 0.0 && theta2 < 0.5) {
            return Err(Error::domain("theta2", theta2, "(0, 1/2)"));
        }
        if !(theta1 > theta2 && theta1 <= 0.5) {
            return Err(Error::domain("theta1", theta1, "(theta2, 1/2]"));
        }
        if sieve.limit() < x {
            return Err(Error::domain("x", x as f64, "<= factor sieve limit"));
        }
        let z2 = (x as f64).powf(theta2);
        let mut a = Vec::new();
        let mut a0 = Vec::new();
        let mut b = Vec::new();
        let mut p = 3;
        while p + 2 <= x {
            if sieve.is_prime(p) {
                let plus = sieve.factorize(p + 2);
                if plus.iter().all(|&(q, _)| q as f64 >= z2) {
                    let n = p - 1;
                    let q_primes: Vec<u64> = sieve
                        .factorize(n)
                        .into_iter()
                        .filter(|&(q, _)| q % 4 == 3)
                        .map(|(q, _)| q)
                        .collect();
                    if q_primes.is_empty() {
                        a0.push(n);
                        b.push(BMember { b: p + 2, factors: plus });
                    }
                    a.push(SiftedMember { n, q_primes });
                }
            }
            p += 8;
        }
        Ok(SiftedSets {
            x,
            theta1,
            theta2,
            a,
            a0,
            b,
        })
    }

    pub fn z1(&self) -> f64 {
        (self.x as f64).powf(self.theta1)
    }

    pub fn z2(&self) -> f64 {
        (self.x as f64).powf(self.theta2)
    }

    /// `S(𝒜, 𝒬, z)`.
    pub fn sifting_function(&self, z: f64) -> u64 {
        self.a.iter().filter(|m| m.survives(z)).count() as u64
    }

    /// `S(𝒜_d, 𝒬, z)` for a prime `d`.
    pub fn sifting_function_multiples(&self, d: u64, z: f64) -> u64 {
        self.a
            .iter()
            .filter(|m| m.n % d == 0 && m.survives(z))
            .count() as u64
    }

    /// Primes `q ≡ 3 (mod 4)` with `x^{θ₁} < q ≤ √x`.
    fn switching_primes(&self) -> Vec<u64> {
        let z1 = self.z1();
        small_primes(isqrt(self.x))
            .into_iter()
            .filter(|&q| q % 4 == 3 && q as f64 > z1)
            .collect()
    }

    pub fn buchstab_check(&self) -> BuchstabReport {
        let sqrt_x = (self.x as f64).sqrt();
        let lhs = self.sifting_function(sqrt_x);
        let s_theta1 = self.sifting_function(self.z1());
        let sum: u64 = self
            .switching_primes()
            .into_iter()
            .map(|q| self.sifting_function_multiples(q, q as f64))
            .sum();
        BuchstabReport {
            x: self.x,
            theta1: self.theta1,
            lhs,
            s_theta1,
            switching_sum: sum,
            residual: lhs as i64 - (s_theta1 as i64 - sum as i64),
            a0_count: self.a0.len() as u64,
        }
    }

    /// Evaluate every step of the weighted-sieve inequality chain on `ℬ`
    /// with `y = x^θ` and weights `w_p = 1 − log p / log y`.
    pub fn weighted_chain_check(&self, theta: f64, lambda: f64) -> Result<ChainReport> {
        if !(theta > self.theta2 && theta < 1.0) {
            return Err(Error::domain("theta", theta, "(theta2, 1)"));
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::domain("lambda", lambda, "[0, ∞)"));
        }
        let x = self.x as f64;
        let ln_y = theta * x.ln();
        let y = x.powf(theta);
        let z2 = self.z2();
        let omega_cut = if lambda > 0.0 { 1.0 / lambda + 1.0 / theta } else { f64::INFINITY };

        let mut restricted = CompensatedSum::default();
        let mut full = CompensatedSum::default();
        let mut per_b = CompensatedSum::default();
        let mut log_bound = CompensatedSum::default();
        let mut weighted_count = CompensatedSum::default();
        let mut below_cut = 0u64;
        let mut below_cut_squarefree = 0u64;
        let mut not_squarefree = 0u64;
        for m in &self.b {
            let omega = m.little_omega() as f64;
            let mut log_sum = 0.0;
            for &(p, _) in &m.factors {
                let lp = (p as f64).ln();
                let w = 1.0 - lp / ln_y;
                log_sum += lp;
                if p >= 3 {
                    full.add(w);
                }
                if p as f64 >= z2 && p as f64 <= y {
                    restricted.add(w);
                }
            }
            per_b.add(omega - log_sum / ln_y);
            log_bound.add(omega - 1.0 / theta);
            weighted_count.add(1.0 + lambda / theta - lambda * omega);
            if omega < omega_cut {
                below_cut += 1;
                if m.is_squarefree() {
                    below_cut_squarefree += 1;
                }
            }
            if !m.is_squarefree() {
                not_squarefree += 1;
            }
        }
        let nonsquarefree_bound: u64 = small_primes(isqrt(self.x + 2))
            .into_iter()
            .filter(|&p| p as f64 >= z2)
            .map(|p| (self.x + 2) / (p * p))
            .sum();

        let b_count = self.b.len() as f64;
        let restricted = restricted.value();
        let full = full.value();
        let per_b = per_b.value();
        let log_bound = log_bound.value();
        let weighted_count = weighted_count.value();
        let scale = 1.0 + lambda / theta;
        let lhs_main = b_count - lambda * restricted;
        let s_half = self.sifting_function(x.sqrt());

        let checks = vec![
            InequalityCheck::ge(
                "sum_{z2<=p<=y} w_p #B_p >= sum_{3<=p<=x} w_p #B_p",
                restricted,
                full,
            ),
            InequalityCheck::eq(
                "sum_{3<=p<=x} w_p #B_p = sum_b (omega(b) - sum_{p|b} log p / log y)",
                full,
                per_b,
            ),
            InequalityCheck::ge(
                "sum_b (omega(b) - sum_{p|b} log p / log y) >= sum_b (omega(b) - 1/theta)",
                per_b,
                log_bound,
            ),
            InequalityCheck::eq("S(A, Q, x^(1/2)) = #B", s_half as f64, b_count),
            InequalityCheck::ge(
                "sum_b (1 + lambda/theta - lambda omega(b)) >= #B - lambda sum_{z2<=p<=y} w_p #B_p",
                weighted_count,
                lhs_main,
            ),
            InequalityCheck::ge(
                "(1 + lambda/theta) #{omega(b) < 1/lambda + 1/theta} >= sum_b (1 + lambda/theta - lambda omega(b))",
                scale * below_cut as f64,
                weighted_count,
            ),
            InequalityCheck::ge(
                "(1 + lambda/theta) (#{omega(b) < cut, b squarefree} + N) >= (1 + lambda/theta) #{omega(b) < cut}",
                scale * (below_cut_squarefree + nonsquarefree_bound) as f64,
                scale * below_cut as f64,
            ),
            InequalityCheck::ge(
                "N = sum_{z2<=p<=sqrt(x+2)} floor((x+2)/p^2) >= #{b not squarefree}",
                nonsquarefree_bound as f64,
                not_squarefree as f64,
            ),
        ];
        Ok(ChainReport {
            x: self.x,
            theta1: self.theta1,
            theta2: self.theta2,
            theta,
            lambda,
            b_count: self.b.len() as u64,
            all_hold: checks.iter().all(|c| c.holds),
            checks,
        })
    }

    /// For every `n` counted by `Σ_{x^{θ₁} < p₁ ≤ √x, p₁ ≡ 3 (4)} S(𝒜_{p₁}, 𝒬, p₁)`, check
    /// `n = 2 m p₁ p₂` with `p₁ ≤ p₂` both `≡ 3 (mod 4)`, every prime of `m`
    /// `≡ 1 (mod 4)`, `x^{θ₁} < p₁ ≤ √x`, `m < x / (2 x^{2θ₁})` and `p₁ < (x / 2m)^{1/2}`.
    pub fn switching_structure_check(&self, sieve: &FactorSieve) -> Result<SwitchingReport> {
        if self.theta1 <= 0.25 {
            return Err(Error::domain("theta1", self.theta1, "(1/4, 1/2]"));
        }
        let x = self.x as f64;
        let z1 = self.z1();
        let mut counted = 0u64;
        let mut p2_above_sqrt_x = 0u64;
        let mut equal_factors = 0u64;
        let mut violations = Vec::new();
        for member in &self.a {
            let Some(&p1) = member.q_primes.first() else {
                continue;
            };
            if !(p1 as f64 > z1 && p1 * p1 <= self.x) {
                continue;
            }
            counted += 1;
            let n = member.n;
            let mut problems = Vec::new();
            if n % 2 != 0 || (n / 2) % 2 == 0 {
                problems.push("n/2 is not odd".to_string());
            }
            let odd_part = n / 2;
            let factors = sieve.factorize(odd_part);
            let q_with_mult: Vec<u64> = factors
                .iter()
                .filter(|&&(q, _)| q % 4 == 3)
                .flat_map(|&(q, e)| std::iter::repeat_n(q, e as usize))
                .collect();
            if q_with_mult.len() != 2 {
                problems.push(format!("{} prime factors = 3 mod 4, expected 2", q_with_mult.len()));
            } else {
                let (a, b) = (q_with_mult[0], q_with_mult[1]);
                if a != p1 {
                    problems.push(format!("smallest factor {a} != p1 {p1}"));
                }
                if a > b {
                    problems.push(format!("p1 = {a} exceeds p2 = {b}"));
                } else if a == b {
                    equal_factors += 1;
                }
                if b * b > self.x {
                    p2_above_sqrt_x += 1;
                }
                let m = odd_part / (a * b);
                if !(m as f64 * 2.0 * z1 * z1 < x) {
                    problems.push(format!("m = {m} not below x/(2 z1^2)"));
                }
                if !((a as f64) < (x / (2.0 * m as f64)).sqrt()) {
                    problems.push(format!("p1 = {a} not below (x/2m)^(1/2)"));
                }
            }
            if !problems.is_empty() {
                violations.push(SwitchingViolation { n, problems });
            }
        }
        Ok(SwitchingReport {
            x: self.x,
            theta1: self.theta1,
            counted,
            conforming: counted - violations.len() as u64,
            p2_above_sqrt_x,
            equal_factors,
            passes: violations.is_empty(),
            violations,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BuchstabReport {
    pub x: u64,
    pub theta1: f64,
    /// `S(𝒜, 𝒬, x^{1/2})`.
    pub lhs: u64,
    /// `S(𝒜, 𝒬, x^{θ₁})`.
    pub s_theta1: u64,
    /// `Σ S(𝒜_{p₁}, 𝒬, p₁)` over `x^{θ₁} < p₁ ≤ √x`, `p₁ ≡ 3 (mod 4)`.
    pub switching_sum: u64,
    pub residual: i64,
    /// `|𝒜⁽⁰⁾|`, counted independently.
    pub a0_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl InequalityCheck {
    fn tolerance(lhs: f64, rhs: f64) -> f64 {
        CHAIN_TOLERANCE * lhs.abs().max(rhs.abs()).max(1.0)
    }

    fn ge(name: &str, lhs: f64, rhs: f64) -> Self {
        InequalityCheck {
            name: name.to_string(),
            lhs,
            rhs,
            holds: lhs >= rhs - Self::tolerance(lhs, rhs),
        }
    }

    fn eq(name: &str, lhs: f64, rhs: f64) -> Self {
        InequalityCheck {
            name: name.to_string(),
            lhs,
            rhs,
            holds: (lhs - rhs).abs() <= Self::tolerance(lhs, rhs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub x: u64,
    pub theta1: f64,
    pub theta2: f64,
    pub theta: f64,
    pub lambda: f64,
    pub b_count: u64,
    pub checks: Vec<InequalityCheck>,
    pub all_hold: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchingViolation {
    pub n: u64,
    pub problems: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwitchingReport {
    pub x: u64,
    pub theta1: f64,
    pub counted: u64,
    pub conforming: u64,
    /// Counted elements whose larger factor `p₂` exceeds `√x`.
    pub p2_above_sqrt_x: u64,
    /// Counted elements of the form `2 m p₁²`.
    pub equal_factors: u64,
    pub passes: bool,
    pub violations: Vec<SwitchingViolation>,
}

/// `S₂(t) = Σ_{m ≤ t} b*(m) m / φ(m)²`, where `b*(m) = 1` iff every prime
/// factor of `m` is `≡ 1 (mod 4)` (so `b*(1) = 1`).
pub fn s2_direct_sum(t: u64) -> Result<f64> {
    let sieve = FactorSieve::new(t)?;
    let mut sum = CompensatedSum::default();
    for m in 1..=t {
        let factors = sieve.factorize(m);
        if factors.iter().all(|&(p, _)| p % 4 == 1) {
            let phi = factors.iter().fold(m, |acc, &(p, _)| acc / p * (p - 1)) as f64;
            sum.add(m as f64 / (phi * phi));
        }
    }
    Ok(sum.value())
}
