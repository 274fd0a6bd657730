//! Binary correlations, partial-sum maxima and spectral models.

pub mod conditions;
pub mod monte_carlo;
pub mod spectral;
pub mod squarefree;
pub mod thue_morse;

pub use conditions::{
    check_condition1, check_condition2, check_lemma5a_conditions, ConditionReport, CorrelationModel, Lemma5aReport,
    TestFunction,
};
pub use monte_carlo::{anticoncentration_mc, chowla_moment_mc, rademacher_exact_probability, ChowlaRegime};
pub use spectral::{empirical_spectral_density, SpectralJson, SpectralModel};
pub use squarefree::{mirsky_d, MirskyConstant, SqfreeAtoms};
pub use thue_morse::{tm_riesz_density, tm_sigma, tm_sigma_f64, TmCorrelationSums};

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::numeric::ComplexSum;
use crate::sequences::SequenceBuffer;

/// `(1/X) Σ_{0≤n<X} ξ(n) conj ξ(n+h)`.
pub fn autocorr(seq: &SequenceBuffer, x: u64, h: u64) -> Result<Complex64> {
    if x == 0 {
        return Err(domain("autocorrelation needs X >= 1"));
    }
    seq.require(0, x + h)?;
    let v = seq.slice(0, x + h)?;
    let (x, h) = (x as usize, h as usize);
    let s: ComplexSum = (0..x).map(|n| v[n] * v[n + h].conj()).collect();
    Ok(s.sum() / x as f64)
}

/// `max_{M1≤k≤M2} |Σ_{k≤s≤M2} ξ(s) conj ξ(s+h)|` in one backward pass.
pub fn s_star(seq: &SequenceBuffer, m1: u64, m2: u64, h: u64) -> Result<f64> {
    if m1 > m2 {
        return Err(domain(format!("empty window [{m1}, {m2}]")));
    }
    let v = seq.slice(m1, m2 + h + 1)?;
    let h = h as usize;
    let mut acc = ComplexSum::new();
    let mut best = 0.0f64;
    for i in (0..=(m2 - m1) as usize).rev() {
        acc += v[i] * v[i + h].conj();
        best = best.max(acc.sum().norm());
    }
    Ok(best)
}

/// Largest `|Σ_{0≤s≤M} ξ(s) conj ξ(s+h)| / (h (1 + ln M))` over `1 ≤ M ≤ m_max`, with its `M`.
pub fn correlation_growth_ratio(seq: &SequenceBuffer, m_max: u64, h: u64) -> Result<(f64, u64)> {
    if h == 0 || m_max == 0 {
        return Err(domain("growth ratio needs h >= 1 and M >= 1"));
    }
    let v = seq.slice(0, m_max + h + 1)?;
    let h_us = h as usize;
    let mut acc = v[0] * v[h_us].conj();
    let mut best = (0.0, 1);
    for m in 1..=m_max as usize {
        acc += v[m] * v[m + h_us].conj();
        let r = acc.norm() / (h as f64 * (1.0 + (m as f64).ln()));
        if r > best.0 {
            best = (r, m as u64);
        }
    }
    Ok(best)
}
