//! Monte-Carlo estimators over independent seeds.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::numeric::{e_int_turns, hash64, ComplexSum};
use crate::sequences::{generate, MultiplierKind};

/// Trial seeds are derived from the run seed and the trial index only.
fn trial_seed(seed: u64, trial: u64) -> u64 {
    hash64(seed, trial)
}

fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Exponents declared for the moment bound `E|Σ|² ≲ η x^{1+b}` on the range
/// `x^{a−1} ≤ η ≤ 1`, `h ≤ η x^{1−a}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChowlaRegime {
    pub a: f64,
    pub b: f64,
}

impl Default for ChowlaRegime {
    fn default() -> Self {
        Self { a: 0.5, b: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChowlaReport {
    pub mean_sq: f64,
    pub std_err: f64,
    pub bound: f64,
    pub trials: u64,
    /// `h = 0`: the sum is `Σ|ξ|²`, outside the range of the moment bound.
    pub diagonal: bool,
    pub low_confidence: bool,
}

pub const CHOWLA_MIN_TRIALS: u64 = 50;

/// Mean of `|Σ_{x≤k<(1+η)x} ξ(k) conj ξ(k+h)|²` over independent seeds.
pub fn chowla_moment_mc(
    kind: MultiplierKind,
    x: u64,
    eta: f64,
    h: u64,
    trials: u64,
    seed: u64,
    regime: ChowlaRegime,
) -> Result<ChowlaReport> {
    if !matches!(kind, MultiplierKind::RandMult { .. } | MultiplierKind::RandComplMult { .. }) {
        return Err(domain(format!("Chowla moments are defined for rand_mult / rand_compl_mult, got {}", kind.name())));
    }
    let ChowlaRegime { a, b } = regime;
    if !(a > 0.0 && a < 1.0 && b >= 0.0) {
        return Err(Error::Precondition(format!("need 0 < a < 1 and b >= 0, got a = {a}, b = {b}")));
    }
    if x < 2 {
        return Err(Error::Precondition("x must be at least 2".into()));
    }
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    let xf = x as f64;
    if !(eta >= xf.powf(a - 1.0) && eta <= 1.0) {
        return Err(Error::Precondition(format!("eta = {eta} outside [x^(a-1), 1] = [{}, 1]", xf.powf(a - 1.0))));
    }
    if h as f64 > eta * xf.powf(1.0 - a) {
        return Err(Error::Precondition(format!("h = {h} exceeds eta x^(1-a) = {}", eta * xf.powf(1.0 - a))));
    }
    let end = (xf * (1.0 + eta)).ceil() as u64;
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let seq = generate(kind, x, end + h, trial_seed(seed, t))?;
            let v = seq.values();
            let len = (end - x) as usize;
            let s: ComplexSum = (0..len).map(|i| v[i] * v[i + h as usize].conj()).collect();
            Ok(s.sum().norm_sqr())
        })
        .collect::<Result<_>>()?;
    let (mean_sq, std_err) = mean_and_stderr(&samples);
    Ok(ChowlaReport {
        mean_sq,
        std_err,
        bound: eta * xf.powf(1.0 + b),
        trials,
        diagonal: h == 0,
        low_confidence: trials < CHOWLA_MIN_TRIALS,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnticoncentrationReport {
    pub estimate: f64,
    pub std_err: f64,
    /// Grid point attaining the maximum.
    pub z_best: (f64, f64),
    pub trials: u64,
}

pub const ANTICONCENTRATION_MIN_TRIALS: u64 = 1000;

/// `max_Z P[|S(θ) − Z| < ε]` over the grid, `S(θ) = Σ_{k<n} c_k ξ(k) e(kθ)`.
#[allow(clippy::too_many_arguments)]
pub fn anticoncentration_mc(
    kind: MultiplierKind,
    n: u64,
    theta: f64,
    eps: f64,
    z_grid: &[Complex64],
    coeffs: Option<&[Complex64]>,
    trials: u64,
    seed: u64,
) -> Result<AnticoncentrationReport> {
    if !matches!(kind, MultiplierKind::IidGaussian | MultiplierKind::IidRademacher | MultiplierKind::IidSteinhaus) {
        return Err(domain(format!("anti-concentration needs an iid kind, got {}", kind.name())));
    }
    if z_grid.is_empty() {
        return Err(domain("empty Z grid"));
    }
    if n == 0 || !(eps > 0.0) {
        return Err(domain("need n >= 1 and eps > 0"));
    }
    if trials < ANTICONCENTRATION_MIN_TRIALS {
        return Err(Error::Precondition(format!(
            "anti-concentration needs at least {ANTICONCENTRATION_MIN_TRIALS} trials, got {trials}"
        )));
    }
    if let Some(c) = coeffs {
        if c.len() as u64 != n {
            return Err(domain(format!("{} coefficients supplied for n = {n}", c.len())));
        }
    }
    let phases: Vec<Complex64> = (0..n)
        .map(|k| coeffs.map_or(Complex64::new(1.0, 0.0), |c| c[k as usize]) * e_int_turns(k, theta))
        .collect();
    let hits: Vec<Vec<bool>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let seq = generate(kind, 0, n, trial_seed(seed, t))?;
            let s: ComplexSum = seq.values().iter().zip(&phases).map(|(x, p)| x * p).collect();
            let s = s.sum();
            Ok(z_grid.iter().map(|z| (s - z).norm() < eps).collect())
        })
        .collect::<Result<_>>()?;
    let mut best = (0usize, 0u64);
    for j in 0..z_grid.len() {
        let count = hits.iter().filter(|row| row[j]).count() as u64;
        if count > best.1 {
            best = (j, count);
        }
    }
    let p = best.1 as f64 / trials as f64;
    let z = z_grid[best.0];
    Ok(AnticoncentrationReport {
        estimate: p,
        std_err: (p * (1.0 - p) / trials as f64).sqrt(),
        z_best: (z.re, z.im),
        trials,
    })
}

/// Exact `P[|Σ_{k<n} ξ(k) e(kθ) − Z| < ε]` for Rademacher signs, by enumerating all `2^n` patterns.
pub fn rademacher_exact_probability(n: u32, theta: f64, eps: f64, z: Complex64) -> Result<f64> {
    if n == 0 || n > 26 {
        return Err(domain(format!("exact enumeration supports 1 <= n <= 26, got {n}")));
    }
    let phases: Vec<Complex64> = (0..n as u64).map(|k| e_int_turns(k, theta)).collect();
    let hits = (0u64..1 << n)
        .into_par_iter()
        .filter(|mask| {
            let s: ComplexSum =
                phases.iter().enumerate().map(|(k, p)| if mask >> k & 1 == 1 { *p } else { -*p }).collect();
            (s.sum() - z).norm() < eps
        })
        .count();
    Ok(hits as f64 / (1u64 << n) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::PrimeDistribution;

    #[test]
    fn exact_enumeration_central_term() {
        let p = rademacher_exact_probability(8, 0.0, 0.5, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(p, 70.0 / 256.0);
    }

    #[test]
    fn anticoncentration_single_variable() {
        let z = [Complex64::new(1.0, 0.0)];
        let rep = anticoncentration_mc(MultiplierKind::IidRademacher, 1, 0.0, 0.5, &z, None, 4000, 1).unwrap();
        assert!((rep.estimate - 0.5).abs() < 4.0 * 0.5 / (4000f64).sqrt());
        assert!(anticoncentration_mc(MultiplierKind::IidRademacher, 1, 0.0, 0.5, &z, None, 10, 1).is_err());
        assert!(anticoncentration_mc(MultiplierKind::IidRademacher, 1, 0.0, 0.5, &[], None, 4000, 1).is_err());
    }

    #[test]
    fn chowla_flags_and_preconditions() {
        let kind = MultiplierKind::RandMult { base: PrimeDistribution::Rademacher };
        let one = chowla_moment_mc(kind, 10_000, 0.1, 1, 1, 5, ChowlaRegime::default()).unwrap();
        assert!(one.low_confidence && !one.diagonal && one.std_err.is_nan());
        let diag = chowla_moment_mc(kind, 10_000, 0.1, 0, 1, 5, ChowlaRegime::default()).unwrap();
        assert!(diag.diagonal);
        assert!(matches!(
            chowla_moment_mc(kind, 10_000, 0.1, 100, 60, 5, ChowlaRegime::default()),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            chowla_moment_mc(kind, 10_000, 1e-4, 1, 60, 5, ChowlaRegime::default()),
            Err(Error::Precondition(_))
        ));
    }
}
