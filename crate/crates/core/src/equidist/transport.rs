//! Finite-family proxy for the discrepancy `Di_{d_ρ}(γ₁, γ)`: both one-sided
//! neighborhood inequalities checked on a list of disks.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{GaugeKind, RadialGauge};
use crate::error::{domain, Error, Result};

/// Finite point measure with multiplicities.
#[derive(Debug, Clone, Default)]
pub struct PointMeasure {
    points: Vec<(Complex64, u64)>,
}

impl PointMeasure {
    pub fn new(points: Vec<(Complex64, u64)>) -> Self {
        Self { points }
    }

    /// `ℤ² ∩ [−b, b]²`.
    pub fn lattice(b: i64) -> Self {
        let points =
            (-b..=b).flat_map(|x| (-b..=b).map(move |y| (Complex64::new(x as f64, y as f64), 1))).collect();
        Self { points }
    }

    /// Mass of the closed disk.
    pub fn disk_mass(&self, center: Complex64, r: f64) -> f64 {
        self.points.iter().filter(|(p, _)| (p - center).norm() <= r).fold(0.0, |acc, &(_, m)| acc + m as f64)
    }
}

pub fn lebesgue_disk(_center: Complex64, r: f64) -> f64 {
    std::f64::consts::PI * r * r
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportOptions {
    pub tau: f64,
    /// Upper end of the bisection for the minimal `τ`.
    pub tau_max: f64,
    /// Both measures are only known inside `|z| ≤ coverage`.
    pub coverage: Option<f64>,
}

impl Default for TransportOptions {
    fn default() -> Self {
        Self { tau: 2.0, tau_max: 16.0, coverage: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransportRow {
    pub center: Complex64,
    pub r: f64,
    /// Radius of the disk containing the `d_ρ`-`τ`-enlargement.
    pub r_enlarged: f64,
    pub gamma1: f64,
    pub gamma: f64,
    pub gamma1_enlarged: f64,
    pub gamma_enlarged: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportReport {
    pub tau: f64,
    pub rows: Vec<TransportRow>,
    pub all_pass: bool,
    /// Smallest `τ ≤ tau_max` at which every disk passes, to `10⁻⁶` relative.
    /// Values of `τ` that push an enlargement outside the coverage count as failing.
    pub tau_min: Option<f64>,
}

/// Radius of a disk containing all points within `d_ρ`-distance `τ` of `D(c, r)`:
/// `r + τ max ρ` over the enlarged band, iterated to a fixed point.
fn enlarged_radius(g: &RadialGauge, center: Complex64, r: f64, tau: f64) -> Result<f64> {
    if tau == 0.0 {
        return Ok(r);
    }
    if let GaugeKind::Constant { rho0 } = g.kind {
        return Ok(r + tau * rho0);
    }
    let c = center.norm();
    let mut d = 0.0;
    for _ in 0..6 {
        d = tau * g.rho_max_on((c - r - d).max(1.0 + 1e-9), c + r + d)?;
    }
    Ok(r + d)
}

/// Checks `γ₁(U) ≤ γ(U_{+τ})` and `γ(U) ≤ γ₁(U_{+τ})` on every disk `U`.
///
/// Enlargements are over-approximated by disks, so a pass here is weaker than the
/// inequality for true `d_ρ`-neighborhoods.
pub fn transport_check<A, B>(
    disks: &[(Complex64, f64)],
    g: &RadialGauge,
    gamma1: A,
    gamma: B,
    opts: TransportOptions,
) -> Result<TransportReport>
where
    A: Fn(Complex64, f64) -> Result<f64> + Sync,
    B: Fn(Complex64, f64) -> Result<f64> + Sync,
{
    if !(opts.tau >= 0.0 && opts.tau_max > 0.0) {
        return Err(domain("need tau >= 0 and tau_max > 0"));
    }
    if disks.iter().any(|&(c, r)| !(r > 0.0 && c.re.is_finite() && c.im.is_finite())) {
        return Err(domain("transport check needs disks with positive radius"));
    }
    let rows_at = |tau: f64| -> Result<Vec<TransportRow>> {
        disks
            .par_iter()
            .map(|&(center, r)| {
                let re = enlarged_radius(g, center, r, tau)?;
                if let Some(cov) = opts.coverage {
                    if center.norm() + re > cov {
                        return Err(Error::Precondition(format!(
                            "coverage: enlarged disk |z - {center}| <= {re} leaves the computed domain |z| <= {cov}"
                        )));
                    }
                }
                let (g1, g0) = (gamma1(center, r)?, gamma(center, r)?);
                let (g1e, g0e) = (gamma1(center, re)?, gamma(center, re)?);
                Ok(TransportRow {
                    center,
                    r,
                    r_enlarged: re,
                    gamma1: g1,
                    gamma: g0,
                    gamma1_enlarged: g1e,
                    gamma_enlarged: g0e,
                    pass: g1 <= g0e && g0 <= g1e,
                })
            })
            .collect()
    };
    // A τ whose enlargements leave the covered domain cannot be certified.
    let all_pass_at = |tau: f64| -> Result<bool> {
        match rows_at(tau) {
            Ok(rows) => Ok(rows.iter().all(|r| r.pass)),
            Err(Error::Precondition(_)) => Ok(false),
            Err(e) => Err(e),
        }
    };

    let rows = rows_at(opts.tau)?;
    let all_pass = rows.iter().all(|r| r.pass);
    let upper = if all_pass_at(opts.tau_max)? {
        Some(opts.tau_max)
    } else if all_pass && opts.tau <= opts.tau_max {
        Some(opts.tau)
    } else {
        None
    };
    let tau_min = if all_pass_at(0.0)? {
        Some(0.0)
    } else if let Some(upper) = upper {
        let (mut lo, mut hi) = (0.0, upper);
        while hi - lo > 1e-6 * hi {
            let mid = 0.5 * (lo + hi);
            if all_pass_at(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    } else {
        None
    };
    Ok(TransportReport { tau: opts.tau, rows, all_pass, tau_min })
}
