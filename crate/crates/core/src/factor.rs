//! Smallest-prime-factor tables and windowed factorization.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::primes::{isqrt, small_primes};

/// Largest limit accepted by [`FactorSieve::new`].
pub const FACTOR_SIEVE_CAP: u64 = 2_000_000_000;

const CHUNK: usize = 1 << 20;

/// Smallest-prime-factor table for `0..=limit`.
///
/// `spf[0] = spf[1] = 0`; for `n >= 2`, `spf[n]` is the least prime dividing `n`.
#[derive(Debug, Clone)]
pub struct FactorSieve {
    limit: u64,
    spf: Vec<u32>,
}

impl FactorSieve {
    pub fn new(limit: u64) -> Result<Self> {
        if limit > FACTOR_SIEVE_CAP {
            return Err(Error::CapExceeded {
                limit,
                cap: FACTOR_SIEVE_CAP,
            });
        }
        let n = limit as usize + 1;
        let base = small_primes(isqrt(limit));
        let mut spf = vec![0u32; n];
        spf.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, chunk)| {
            let lo = (ci * CHUNK) as u64;
            let hi = lo + chunk.len() as u64;
            for &p in &base {
                if p * p >= hi {
                    break;
                }
                let start = (p * p).max(lo.div_ceil(p) * p);
                let mut m = start;
                while m < hi {
                    let slot = &mut chunk[(m - lo) as usize];
                    if *slot == 0 {
                        *slot = p as u32;
                    }
                    m += p;
                }
            }
            for (i, slot) in chunk.iter_mut().enumerate() {
                let v = lo + i as u64;
                if *slot == 0 && v >= 2 {
                    *slot = v as u32;
                }
            }
        });
        Ok(FactorSieve { limit, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn check(&self, n: u64) {
        assert!(
            n <= self.limit,
            "{n} exceeds factor sieve limit {}",
            self.limit
        );
    }

    pub fn smallest_prime_factor(&self, n: u64) -> u64 {
        self.check(n);
        self.spf[n as usize] as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.smallest_prime_factor(n) == n
    }

    /// Prime factorization of `n >= 1` as ascending `(prime, exponent)` pairs.
    pub fn factorize(&self, n: u64) -> Vec<(u64, u32)> {
        self.check(n);
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            m /= p;
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Number of prime factors counted with multiplicity.
    pub fn big_omega(&self, n: u64) -> u32 {
        self.factorize(n).iter().map(|&(_, e)| e).sum()
    }

    /// Number of distinct prime factors.
    pub fn little_omega(&self, n: u64) -> u32 {
        self.factorize(n).len() as u32
    }

    /// Euler's totient.
    pub fn phi(&self, n: u64) -> u64 {
        self.factorize(n)
            .iter()
            .fold(n, |acc, &(p, _)| acc / p * (p - 1))
    }
}

/// Factorization summary of one integer produced by [`factor_window`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WindowEntry {
    /// `Ω(n)`.
    pub big_omega: u8,
    /// Some prime `q ≡ 3 (mod 4)` divides `n` to an odd power.
    pub odd_three_mod_four: bool,
}

/// Factor every integer in `[lo, hi)` by trial division with `base`
/// (all primes up to at least `sqrt(hi - 1)`), segment style.
pub fn factor_window(lo: u64, hi: u64, base: &[u64]) -> Vec<WindowEntry> {
    let len = (hi - lo) as usize;
    let mut rem: Vec<u64> = (lo..hi).collect();
    let mut out = vec![WindowEntry::default(); len];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let mut m = lo.div_ceil(p) * p;
        while m < hi {
            let i = (m - lo) as usize;
            let mut e = 0u8;
            while rem[i] % p == 0 {
                rem[i] /= p;
                e += 1;
            }
            out[i].big_omega += e;
            if p % 4 == 3 && e % 2 == 1 {
                out[i].odd_three_mod_four = true;
            }
            m += p;
        }
    }
    for (i, r) in rem.into_iter().enumerate() {
        if r > 1 {
            out[i].big_omega += 1;
            if r % 4 == 3 {
                out[i].odd_three_mod_four = true;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn spf_small() {
        let s = FactorSieve::new(20).unwrap();
        assert_eq!(s.smallest_prime_factor(15), 3);
        assert_eq!(s.smallest_prime_factor(17), 17);
        assert_eq!(s.smallest_prime_factor(1), 0);
        assert_eq!(s.big_omega(12), 3);
        assert_eq!(s.little_omega(12), 2);
        assert_eq!(s.phi(12), 4);
        assert!(s.is_prime(19) && !s.is_prime(1) && !s.is_prime(20));
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            FactorSieve::new(FACTOR_SIEVE_CAP + 1),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn chunk_boundaries() {
        let limit = 3 * CHUNK as u64 + 5;
        let s = FactorSieve::new(limit).unwrap();
        for n in (CHUNK as u64 - 50..CHUNK as u64 + 50).chain(limit - 100..=limit) {
            assert_eq!(s.factorize(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn window_matches_spf() {
        let s = FactorSieve::new(200_000).unwrap();
        let base = small_primes(isqrt(200_000) + 1);
        let lo = 150_001;
        let w = factor_window(lo, 200_001, &base);
        for (i, e) in w.iter().enumerate() {
            let n = lo + i as u64;
            let f = s.factorize(n);
            assert_eq!(e.big_omega as u32, s.big_omega(n));
            let odd = f.iter().any(|&(p, k)| p % 4 == 3 && k % 2 == 1);
            assert_eq!(e.odd_three_mod_four, odd, "n = {n}");
        }
    }
}
