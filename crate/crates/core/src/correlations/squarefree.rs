//! Correlations and spectral measure of the square-free indicator `μ²`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{domain, Error, Result};
use crate::numeric::NeumaierSum;

pub const SIX_OVER_PI_SQ: f64 = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);

/// The Euler product `D = Π_p (1 − 2/p²)`, truncated at a prime cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MirskyConstant {
    pub value: f64,
    pub prime_cutoff: u64,
    /// Bound on `Σ_{p > cutoff} 2/p²`, hence on the relative truncation error.
    pub tail_bound: f64,
}

impl MirskyConstant {
    pub const DEFAULT_CUTOFF: u64 = 1_000_000;

    pub fn new(prime_cutoff: u64) -> Result<Self> {
        if prime_cutoff < 1000 {
            return Err(domain(format!("prime cutoff must be at least 1000, got {prime_cutoff}")));
        }
        let log: NeumaierSum = arith::primes_up_to(prime_cutoff)
            .into_iter()
            .map(|p| (-2.0 / (p as f64 * p as f64)).ln_1p())
            .collect();
        let c = prime_cutoff as f64;
        Ok(Self { value: log.sum().exp(), prime_cutoff, tail_bound: 2.0 / (c * c.ln()) })
    }

    /// Mirsky's `D(h)`: `6/π²` at `h = 0`, else `D Π_{p² | h} (1 + 1/(p² − 2))`.
    pub fn d_of_h(&self, h: u64) -> f64 {
        if h == 0 {
            return SIX_OVER_PI_SQ;
        }
        arith::factorize(h)
            .into_iter()
            .filter(|&(_, e)| e >= 2)
            .fold(self.value, |acc, (p, _)| acc * (1.0 + 1.0 / ((p * p) as f64 - 2.0)))
    }
}

/// `D(h)` with the Euler product truncated at `prime_cutoff`.
pub fn mirsky_d(h: u64, prime_cutoff: u64) -> Result<f64> {
    Ok(MirskyConstant::new(prime_cutoff)?.d_of_h(h))
}

/// One residue class of atoms: mass `mass_per_atom` at every `j/d²`, `0 ≤ j < d²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomComb {
    pub d: u64,
    pub mass_per_atom: f64,
}

/// The atomic spectral measure of `μ²`, kept as combs over square-free `d ≤ d_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct SqfreeAtoms {
    pub d_max: u64,
    pub mirsky: MirskyConstant,
    pub combs: Vec<AtomComb>,
}

/// Largest number of explicit atoms [`SqfreeAtoms::atoms`] will produce.
pub const MAX_EXPLICIT_ATOMS: u64 = 2_000_000;

impl SqfreeAtoms {
    pub fn new(d_max: u64, mirsky: MirskyConstant) -> Result<Self> {
        if d_max == 0 {
            return Err(domain("d_max must be at least 1"));
        }
        let mut combs = Vec::new();
        for d in 1..=d_max {
            let f = arith::factorize(d);
            if f.iter().any(|&(_, e)| e > 1) {
                continue;
            }
            let d2 = (d * d) as f64;
            let w = f.iter().fold(1.0, |acc, &(p, _)| acc / ((p * p) as f64 - 2.0));
            combs.push(AtomComb { d, mass_per_atom: mirsky.value * w / d2 });
        }
        Ok(Self { d_max, mirsky, combs })
    }

    pub fn total_mass(&self) -> f64 {
        self.combs.iter().map(|c| c.mass_per_atom * (c.d * c.d) as f64).collect::<NeumaierSum>().sum()
    }

    /// `χ̂(h) = Σ_{d² | h} d² · mass`, which reproduces `D(h)` as `d_max → ∞`.
    pub fn fourier(&self, h: i64) -> f64 {
        let h = h.unsigned_abs();
        self.combs
            .iter()
            .filter(|c| h.is_multiple_of(c.d * c.d))
            .map(|c| c.mass_per_atom * (c.d * c.d) as f64)
            .collect::<NeumaierSum>()
            .sum()
    }

    /// Mass of the half-open arc `[a, b)` of the circle (turns), `b − a ≤ 1`.
    pub fn interval_mass(&self, a: f64, b: f64) -> f64 {
        assert!(a <= b && b - a <= 1.0, "arc [{a}, {b}) must have length at most one turn");
        self.combs
            .iter()
            .map(|c| {
                let q = (c.d * c.d) as f64;
                let count = (b * q).ceil() - (a * q).ceil();
                c.mass_per_atom * count
            })
            .collect::<NeumaierSum>()
            .sum()
    }

    pub fn atom_count(&self) -> u64 {
        self.combs.iter().map(|c| c.d * c.d).sum()
    }

    /// Explicit atoms `(position in turns, mass)` sorted by position, co-located atoms merged.
    pub fn atoms(&self) -> Result<Vec<(f64, f64)>> {
        let n = self.atom_count();
        if n > MAX_EXPLICIT_ATOMS {
            return Err(Error::Capacity {
                msg: format!("d_max = {} expands to {n} atoms", self.d_max),
                required: n,
            });
        }
        // key: reduced fraction (num, den)
        let mut merged: BTreeMap<(u64, u64), f64> = BTreeMap::new();
        for c in &self.combs {
            let q = c.d * c.d;
            for j in 0..q {
                let g = gcd(j, q);
                *merged.entry((j / g, q / g)).or_default() += c.mass_per_atom;
            }
        }
        let mut out: Vec<(f64, f64)> = merged.into_iter().map(|((j, q), m)| (j as f64 / q as f64, m)).collect();
        out.sort_by(|x, y| x.0.total_cmp(&y.0));
        Ok(out)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `Σ_{0≤k≤x} μ²(k) μ²(k+h)` from a precomputed indicator slice starting at 0.
pub fn sqfree_correlation_sum(indicator: &[bool], x: u64, h: u64) -> Result<u64> {
    let need = x + h + 1;
    if (indicator.len() as u64) < need {
        return Err(Error::Range { have_lo: 0, have_hi: indicator.len() as u64, need_lo: 0, need_hi: need });
    }
    let (x, h) = (x as usize, h as usize);
    Ok((0..=x).filter(|&k| indicator[k] && indicator[k + h]).count() as u64)
}
