//! Segmented prime enumeration.

use serde::{Deserialize, Serialize};

/// Residue class of a prime modulo 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ResidueClass {
    /// The even prime 2.
    Two,
    OneMod4,
    ThreeMod4,
}

impl ResidueClass {
    pub fn of(p: u64) -> Self {
        match p % 4 {
            1 => ResidueClass::OneMod4,
            3 => ResidueClass::ThreeMod4,
            _ => ResidueClass::Two,
        }
    }
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// All primes `<= limit` by a plain sieve of Eratosthenes.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

const SEGMENT: u64 = 1 << 19;

/// Streaming iterator over the primes `<= cutoff` in increasing order.
///
/// Memory use is `O(sqrt(cutoff) + SEGMENT)`.
#[derive(Debug, Clone)]
pub struct Primes {
    cutoff: u64,
    base: Vec<u64>,
    next_lo: u64,
    buf: Vec<u64>,
    pos: usize,
    emitted_two: bool,
}

impl Primes {
    pub fn new(cutoff: u64) -> Self {
        Primes {
            cutoff,
            base: small_primes(isqrt(cutoff))
                .into_iter()
                .filter(|&p| p > 2)
                .collect(),
            next_lo: 3,
            buf: Vec::new(),
            pos: 0,
            emitted_two: false,
        }
    }

    fn fill(&mut self) -> bool {
        self.buf.clear();
        self.pos = 0;
        while self.buf.is_empty() {
            if self.next_lo > self.cutoff {
                return false;
            }
            let lo = self.next_lo;
            let hi = (lo + 2 * SEGMENT).min(self.cutoff.saturating_add(1));
            sieve_odd_segment(lo, hi, &self.base, &mut self.buf);
            self.next_lo = hi + (hi % 2 == 0) as u64;
        }
        true
    }
}

/// Push the odd primes in `[lo, hi)` (`lo` odd) onto `out`.
fn sieve_odd_segment(lo: u64, hi: u64, base: &[u64], out: &mut Vec<u64>) {
    if hi <= lo {
        return;
    }
    let len = ((hi - lo) as usize).div_ceil(2);
    let mut composite = vec![false; len];
    for &p in base {
        let p2 = p * p;
        if p2 >= hi {
            break;
        }
        let mut start = if p2 >= lo { p2 } else { lo.div_ceil(p) * p };
        if start % 2 == 0 {
            start += p;
        }
        let mut j = ((start - lo) / 2) as usize;
        while j < len {
            composite[j] = true;
            j += p as usize;
        }
    }
    for (j, &c) in composite.iter().enumerate() {
        let n = lo + 2 * j as u64;
        if !c && n > 1 {
            out.push(n);
        }
    }
}

impl Iterator for Primes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if !self.emitted_two {
            self.emitted_two = true;
            if self.cutoff >= 2 {
                return Some(2);
            }
        }
        if self.pos >= self.buf.len() && !self.fill() {
            return None;
        }
        let p = self.buf[self.pos];
        self.pos += 1;
        Some(p)
    }
}

/// Primes `<= cutoff` paired with their residue class modulo 4.
pub fn primes_up_to(cutoff: u64) -> impl Iterator<Item = (u64, ResidueClass)> {
    Primes::new(cutoff).map(|p| (p, ResidueClass::of(p)))
}

pub fn prime_count(cutoff: u64) -> u64 {
    Primes::new(cutoff).count() as u64
}
