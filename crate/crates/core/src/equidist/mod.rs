//! Radial gauges, the metric `d_ρ`, boundary neighborhoods and discrepancy reports.

mod lattice;
mod transport;

pub use lattice::{gauss_lattice_check, LatticeRegion, LatticeReport};
pub use transport::{lebesgue_disk, transport_check, PointMeasure, TransportOptions, TransportReport, TransportRow};

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numeric::quad;
use crate::weights::SmoothWeight;
use crate::zeros::{Contour, Shape, ZeroCountReport};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GaugeKind {
    /// `ρ = R √(log σ / σ)`
    SqrtLog,
    /// `ρ = R σ^{−c}`, `0 < c < ½`
    Power { c: f64 },
    /// `ρ = R σ^{−1/2} (log σ)^{(a+1)/2}`
    Diophantine { a: f64 },
    /// `ρ = R e^{−c √(log σ)}`
    ExpSqrt { c: f64 },
    Constant { rho0: f64 },
}

impl GaugeKind {
    pub fn validate(&self) -> std::result::Result<(), String> {
        match *self {
            Self::SqrtLog => Ok(()),
            Self::Power { c } if c > 0.0 && c < 0.5 => Ok(()),
            Self::Power { c } => Err(format!("c must lie in (0, 1/2), got {c}")),
            Self::Diophantine { a } if a >= 0.0 && a.is_finite() => Ok(()),
            Self::Diophantine { a } => Err(format!("a must be non-negative, got {a}")),
            Self::ExpSqrt { c } if c > 0.0 && c.is_finite() => Ok(()),
            Self::ExpSqrt { c } => Err(format!("c must be positive, got {c}")),
            Self::Constant { rho0 } if rho0 > 0.0 && rho0.is_finite() => Ok(()),
            Self::Constant { rho0 } => Err(format!("rho0 must be positive, got {rho0}")),
        }
    }
}

/// Slowly varying local scale `ρ(|z|)`.
#[derive(Debug, Clone)]
pub struct RadialGauge {
    pub kind: GaugeKind,
    pub weight: SmoothWeight,
}

impl RadialGauge {
    pub fn new(kind: GaugeKind, weight: SmoothWeight) -> Result<Self> {
        kind.validate().map_err(Error::Domain)?;
        Ok(Self { kind, weight })
    }

    /// `ρ(R)`.
    pub fn rho(&self, r: f64) -> Result<f64> {
        if let GaugeKind::Constant { rho0 } = self.kind {
            return Ok(rho0);
        }
        if !(r > 1.0) {
            return Err(domain(format!("gauge needs R > 1, got {r}")));
        }
        let s = self.weight.sigma(r)?;
        if !(s > 1.0) {
            return Err(domain(format!("gauge undefined: sigma = {s} <= 1 at R = {r}")));
        }
        let l = s.ln();
        Ok(match self.kind {
            GaugeKind::SqrtLog => r * (l / s).sqrt(),
            GaugeKind::Power { c } => r * s.powf(-c),
            GaugeKind::Diophantine { a } => r / s.sqrt() * l.powf(0.5 * (a + 1.0)),
            GaugeKind::ExpSqrt { c } => r * (-c * l.sqrt()).exp(),
            GaugeKind::Constant { .. } => unreachable!(),
        })
    }

    /// `β = ρ/R`.
    pub fn beta(&self, r: f64) -> Result<f64> {
        Ok(self.rho(r)? / r)
    }

    /// Central-difference `ρ'(R)`.
    pub fn rho_prime(&self, r: f64) -> Result<f64> {
        let h = 1e-5 * r.max(1.0);
        Ok((self.rho(r + h)? - self.rho(r - h)?) / (2.0 * h))
    }

    /// Smallest grid radius above which `|ρ'| ≤ 0.1` all the way to `r_max`.
    pub fn slow_variation_threshold(&self, r_max: f64) -> Result<Option<f64>> {
        let n = 400;
        let lo = 1.0 + 1e-3;
        let grid: Vec<f64> = (0..=n).map(|i| lo * (r_max / lo).powf(i as f64 / n as f64)).collect();
        let mut threshold = None;
        for &r in grid.iter().rev() {
            match self.rho_prime(r) {
                Ok(d) if d.abs() <= 0.1 => threshold = Some(r),
                _ => break,
            }
        }
        Ok(threshold)
    }

    /// `ρ` at `|w| = r`, where points outside the gauge domain read as `None`.
    fn rho_opt(&self, r: f64) -> Option<f64> {
        self.rho(r).ok()
    }

    /// Largest `ρ` on `lo ≤ |w| ≤ hi`, sampled.
    fn rho_max_on(&self, lo: f64, hi: f64) -> Result<f64> {
        let n = 32;
        (0..=n)
            .filter_map(|i| self.rho_opt(lo + (hi - lo) * i as f64 / n as f64))
            .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))))
            .ok_or_else(|| domain(format!("gauge undefined on the whole band [{lo}, {hi}]")))
    }
}

const D_RHO_TOL: f64 = 1e-10;

fn segment_length(g: &RadialGauge, a: Complex64, b: Complex64) -> Result<f64> {
    let len = (b - a).norm();
    if len == 0.0 {
        return Ok(0.0);
    }
    // σ grows with |w|, so the point of the segment nearest the origin decides membership.
    let d = b - a;
    let s0 = (-(a.conj() * d).re / d.norm_sqr()).clamp(0.0, 1.0);
    g.rho((a + s0 * d).norm()).map_err(|e| domain(format!("path leaves the gauge domain: {e}")))?;
    quad::integrate(|s| len / g.rho((a + s * d).norm()).unwrap_or(f64::NAN), 0.0, 1.0, D_RHO_TOL * (1.0 + len))
}

/// Upper bound for `d_ρ(z1, z2)`: the straight segment, improved by one round of
/// radial midpoint detours.
pub fn d_rho(g: &RadialGauge, z1: Complex64, z2: Complex64) -> Result<f64> {
    if z1 == z2 {
        return Ok(0.0);
    }
    let straight = segment_length(g, z1, z2)?;
    if matches!(g.kind, GaugeKind::Constant { .. }) {
        return Ok(straight);
    }
    let mid = 0.5 * (z1 + z2);
    let m = mid.norm();
    if m == 0.0 {
        return Ok(straight);
    }
    let step = (z2 - z1).norm() / m;
    let mut best = straight;
    for f in [-0.2, -0.1, -0.05, 0.05, 0.1, 0.2] {
        let w = mid * (1.0 + f * step);
        if let (Ok(a), Ok(b)) = (segment_length(g, z1, w), segment_length(g, w, z2)) {
            best = best.min(a + b);
        }
    }
    Ok(best)
}

/// Test sets of the discrepancy definition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TestRegion {
    Disk { center: Complex64, r: f64 },
    /// Origin-centred, angles in turns.
    AnnulusSector { r1: f64, r2: f64, theta1: f64, theta2: f64 },
}

impl TestRegion {
    pub fn contour(&self) -> Contour {
        match *self {
            Self::Disk { center, r } => Contour::circle(center, r),
            Self::AnnulusSector { r1, r2, theta1, theta2 } => Contour::annulus_sector(r1, r2, theta1, theta2),
        }
    }

    pub fn from_shape(shape: &Shape) -> Result<Self> {
        match *shape {
            Shape::Circle { center, r } => Ok(Self::Disk { center, r }),
            Shape::AnnulusSector { center, r1, r2, theta1, theta2 } if center == Complex64::new(0.0, 0.0) => {
                Ok(Self::AnnulusSector { r1, r2, theta1, theta2 })
            }
            _ => Err(domain(format!("{shape:?} is not a test region"))),
        }
    }

    fn check(&self) -> Result<()> {
        let ok = match *self {
            Self::Disk { center, r } => r > 0.0 && r.is_finite() && center.re.is_finite() && center.im.is_finite(),
            Self::AnnulusSector { r1, r2, theta1, theta2 } => {
                r1 >= 0.0 && r1 < r2 && r2.is_finite() && theta1 < theta2 && theta2 - theta1 <= 1.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(domain(format!("degenerate test region {self:?}")))
        }
    }

    pub fn gamma_mass(&self, w: &SmoothWeight) -> Result<f64> {
        self.check()?;
        match *self {
            Self::Disk { center, r } => w.gamma_disk(center, r),
            Self::AnnulusSector { r1, r2, theta1, theta2 } => Ok((theta2 - theta1) * (w.nu(r2)? - w.nu(r1)?)),
        }
    }
}

/// `γ((∂K)_{+τ})` over-approximated by thickening, plus the near-constancy check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NeighborhoodMass {
    pub mass: f64,
    /// `σ(r)ρ(r)/r` varies by more than 2× across some thickened band, so the
    /// band is too wide for the local-constancy picture.
    pub flagged: bool,
}

/// Angular fraction (turns) covered at radius `r` by a union of arcs `[a, b]`.
fn union_measure(mut arcs: Vec<(f64, f64)>) -> f64 {
    if arcs.is_empty() {
        return 0.0;
    }
    arcs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut total = 0.0;
    let (mut lo, mut hi) = arcs[0];
    for &(a, b) in &arcs[1..] {
        if a > hi {
            total += hi - lo;
            (lo, hi) = (a, b);
        } else {
            hi = hi.max(b);
        }
    }
    (total + hi - lo).min(1.0)
}

impl RadialGauge {
    fn near_constancy_ratio(&self, lo: f64, hi: f64) -> Option<f64> {
        let q = |r: f64| Some(self.weight.sigma(r).ok()? * self.rho_opt(r)? / r);
        let vals: Vec<f64> = [lo, 0.5 * (lo + hi), hi].iter().filter_map(|&r| q(r)).collect();
        if vals.len() < 2 {
            return None;
        }
        let max = vals.iter().cloned().fold(f64::MIN, f64::max);
        let min = vals.iter().cloned().fold(f64::MAX, f64::min);
        Some(max / min)
    }

    /// γ-mass of the thickened boundary of `K`. Arcs at radius `R` grow by `2τρ(R)`
    /// radially; radial edges by `2τρ(r)/r` radians on each side. For disks not centred
    /// at the origin the boundary circle is thickened uniformly by `2τ max ρ`.
    pub fn boundary_neighborhood_mass(&self, k: &TestRegion, tau: f64) -> Result<NeighborhoodMass> {
        if !(tau > 0.0) {
            return Err(domain(format!("tau must be positive, got {tau}")));
        }
        k.check()?;
        let w = &self.weight;
        match *k {
            TestRegion::Disk { center, r } if center.norm() > 0.0 => {
                let c = center.norm();
                let mut d = 0.0;
                for _ in 0..4 {
                    d = 2.0 * tau * self.rho_max_on((c - r - d).max(1.0 + 1e-9), c + r + d)?;
                }
                let outer = w.gamma_disk(center, r + d)?;
                let inner = if r > d { w.gamma_disk(center, r - d)? } else { 0.0 };
                let ratio = self.near_constancy_ratio((c - r - d).max(1.0 + 1e-9), c + r + d);
                Ok(NeighborhoodMass { mass: outer - inner, flagged: ratio.is_none_or(|q| q > 2.0) })
            }
            TestRegion::Disk { r, .. } => self.sector_neighborhood(0.0, r, 0.0, 1.0, tau),
            TestRegion::AnnulusSector { r1, r2, theta1, theta2 } => self.sector_neighborhood(r1, r2, theta1, theta2, tau),
        }
    }

    fn sector_neighborhood(&self, r1: f64, r2: f64, t1: f64, t2: f64, tau: f64) -> Result<NeighborhoodMass> {
        let full = t2 - t1 >= 1.0;
        let band = |r: f64| -> Result<(f64, f64)> {
            let d = 2.0 * tau * self.rho(r)?;
            Ok(((r - d).max(0.0), r + d))
        };
        let outer = band(r2)?;
        let inner = if r1 > 0.0 { Some(band(r1)?) } else { None };
        let lo = inner.map_or(0.0, |b| b.0);
        let hi = outer.1;
        // Half-width in turns of the thickened radial edges at radius r.
        let edge = |r: f64| match self.rho_opt(r) {
            Some(p) if r > 0.0 => (2.0 * tau * p / (std::f64::consts::TAU * r)).min(0.5),
            _ => 0.5,
        };
        let covered = |r: f64| {
            let mut arcs = Vec::with_capacity(3);
            let in_band = |b: Option<(f64, f64)>| b.is_some_and(|(a, c)| a <= r && r <= c);
            if in_band(Some(outer)) || in_band(inner) {
                arcs.push((t1, t2));
            }
            if !full {
                let e = edge(r);
                // Edges wrapping past a full turn are not folded back; the union only grows.
                arcs.push((t1 - e, t1 + e));
                arcs.push((t2 - e, t2 + e));
            }
            union_measure(arcs)
        };
        let mut cuts = vec![lo.max(1.0), hi.max(1.0), outer.0.max(1.0), outer.1.max(1.0)];
        if let Some(b) = inner {
            cuts.extend([b.0.max(1.0), b.1.max(1.0)]);
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let density = |r: f64| self.weight.sigma(r).map(|s| s / r).unwrap_or(f64::NAN);
        let scale = 1.0 + self.weight.nu(hi)?;
        let mut mass = 0.0;
        for w in cuts.windows(2) {
            mass += quad::integrate(|r| covered(r) * density(r), w[0], w[1], 1e-9 * scale)?;
        }
        let mut flagged = false;
        for b in std::iter::once(outer).chain(inner) {
            flagged |= self.near_constancy_ratio(b.0.max(1.0 + 1e-9), b.1).is_none_or(|q| q > 2.0);
        }
        Ok(NeighborhoodMass { mass, flagged })
    }
}

/// Count and γ-mass of one region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionCount {
    pub region: TestRegion,
    pub count: u64,
    pub gamma: f64,
}

impl TryFrom<&ZeroCountReport> for RegionCount {
    type Error = Error;

    fn try_from(r: &ZeroCountReport) -> Result<Self> {
        let gamma = r.gamma_mass.ok_or_else(|| domain("zero count carries no gamma mass"))?;
        Ok(Self { region: TestRegion::from_shape(&r.region.shape)?, count: r.count, gamma })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyRow {
    pub region: TestRegion,
    pub count: u64,
    pub gamma: f64,
    pub discrepancy: f64,
    pub neighborhood_mass: f64,
    pub bound: f64,
    /// `discrepancy / γ((∂K)_{+τ})`: the smallest `C` this row needs.
    pub ratio: f64,
    pub pass: bool,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub tau: f64,
    pub c: f64,
    pub rows: Vec<DiscrepancyRow>,
    /// Smallest `C` making every row pass at this `τ`.
    pub min_c: f64,
    pub passed: usize,
}

/// `|n(K) − γ(K)|` against `C γ((∂K)_{+τ})` for every row.
pub fn equidist_report(rows: &[RegionCount], g: &RadialGauge, tau: f64, c: f64) -> Result<DiscrepancyReport> {
    let out: Vec<DiscrepancyRow> = rows
        .par_iter()
        .map(|row| {
            let nb = g.boundary_neighborhood_mass(&row.region, tau)?;
            let discrepancy = (row.count as f64 - row.gamma).abs();
            let bound = c * nb.mass;
            let ratio = if discrepancy == 0.0 { 0.0 } else { discrepancy / nb.mass };
            Ok(DiscrepancyRow {
                region: row.region,
                count: row.count,
                gamma: row.gamma,
                discrepancy,
                neighborhood_mass: nb.mass,
                bound,
                ratio,
                pass: discrepancy <= bound,
                flagged: nb.flagged,
            })
        })
        .collect::<Result<_>>()?;
    let min_c = out.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let passed = out.iter().filter(|r| r.pass).count();
    Ok(DiscrepancyReport { tau, c, rows: out, min_c, passed })
}

impl DiscrepancyReport {
    /// One line per region: geometry, count, γ, discrepancy, bound, ratio, pass.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "kind", "cx", "cy", "r", "r1", "r2", "theta1", "theta2", "count", "gamma", "discrepancy", "bound", "ratio",
            "pass",
        ])?;
        for row in &self.rows {
            let geom: [String; 8] = match row.region {
                TestRegion::Disk { center, r } => [
                    "disk".into(),
                    center.re.to_string(),
                    center.im.to_string(),
                    r.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ],
                TestRegion::AnnulusSector { r1, r2, theta1, theta2 } => [
                    "annulus_sector".into(),
                    "0".into(),
                    "0".into(),
                    String::new(),
                    r1.to_string(),
                    r2.to_string(),
                    theta1.to_string(),
                    theta2.to_string(),
                ],
            };
            let mut rec: Vec<String> = geom.to_vec();
            rec.extend([
                row.count.to_string(),
                row.gamma.to_string(),
                row.discrepancy.to_string(),
                row.bound.to_string(),
                row.ratio.to_string(),
                row.pass.to_string(),
            ]);
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }
}
