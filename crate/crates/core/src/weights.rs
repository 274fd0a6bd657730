//! Smooth coefficients `a(n) = exp(-∫_0^n φ)` and the quantities derived from φ.
//!
//! Everything is kept in the log domain: [`SmoothWeight::coeff_log`] returns
//! `log a(n)` and `a(n)` itself is never formed by this module.
//!
//! Notation used in the method names:
//!
//! * `psi` is the inverse of `phi`,
//! * `nu(R) = psi(ln R)` is the smoothed central index,
//! * `sigma(R) = psi'(ln R)` sets the width of the central block,
//! * `log_mu(R) = ∫_0^{ln R} psi` is the log of the smoothed maximal term,
//! * `omega_R(t) = t ln R - ∫_0^t phi`, so that `a(k) R^k = exp(omega_R(k))`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, numeric, Error, Result};
use crate::numeric::pchip::MonotoneCubic;
use crate::numeric::quad;

/// The defining function φ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightFamily {
    /// `φ(t) = α ln(1 + t)`; `α = 1/2` gives `a(n) ≈ (n!)^{-1/2}`.
    LogFamily { alpha: f64 },
    /// `φ(t) = c((1 + t)^β − 1)` with `0 < β < 1`.
    PowerFamily { beta: f64, c: f64 },
    /// Knots `(t, φ(t))`, strictly increasing in both coordinates, starting at `(0, 0)`.
    Tabulated { points: Vec<(f64, f64)> },
}

impl WeightFamily {
    pub fn validate(&self) -> std::result::Result<(), String> {
        match self {
            Self::LogFamily { alpha } => {
                if !(alpha.is_finite() && *alpha > 0.0) {
                    return Err(format!("log_family alpha must be positive, got {alpha}"));
                }
            }
            Self::PowerFamily { beta, c } => {
                if !(beta.is_finite() && *beta > 0.0 && *beta < 1.0) {
                    return Err(format!("power_family beta must lie in (0, 1), got {beta}"));
                }
                if !(c.is_finite() && *c > 0.0) {
                    return Err(format!("power_family c must be positive, got {c}"));
                }
            }
            Self::Tabulated { points } => {
                if points.len() < 3 {
                    return Err("tabulated family needs at least 3 knots".into());
                }
                if points[0] != (0.0, 0.0) {
                    return Err("tabulated family must start at (0, 0)".into());
                }
                for w in points.windows(2) {
                    let ok = w[1].0.is_finite() && w[1].1.is_finite() && w[1].0 > w[0].0 && w[1].1 > w[0].1;
                    if !ok {
                        return Err("tabulated knots must be finite and strictly increasing in t and φ(t)".into());
                    }
                }
            }
        }
        Ok(())
    }
}

/// Origin-centred regions on which the reference measure has closed forms.
/// Angles are in turns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GammaRegion {
    Disk { r: f64 },
    AnnulusSector { r1: f64, r2: f64, theta1: f64, theta2: f64 },
}

#[derive(Debug, Clone)]
pub struct SmoothWeight {
    family: WeightFamily,
    interp: Option<MonotoneCubic>,
    inversion_tol: f64,
    quadrature_tol: f64,
}

impl PartialEq for SmoothWeight {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
            && self.inversion_tol == other.inversion_tol
            && self.quadrature_tol == other.quadrature_tol
    }
}

impl SmoothWeight {
    pub const DEFAULT_INVERSION_TOL: f64 = 1e-12;
    pub const DEFAULT_QUADRATURE_TOL: f64 = 1e-10;

    pub fn new(family: WeightFamily) -> Result<Self> {
        family.validate().map_err(Error::Domain)?;
        let interp = match &family {
            WeightFamily::Tabulated { points } => {
                let (t, p): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
                Some(MonotoneCubic::new(t, p))
            }
            _ => None,
        };
        Ok(Self {
            family,
            interp,
            inversion_tol: Self::DEFAULT_INVERSION_TOL,
            quadrature_tol: Self::DEFAULT_QUADRATURE_TOL,
        })
    }

    pub fn log_family(alpha: f64) -> Result<Self> {
        Self::new(WeightFamily::LogFamily { alpha })
    }

    pub fn power_family(beta: f64, c: f64) -> Result<Self> {
        Self::new(WeightFamily::PowerFamily { beta, c })
    }

    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(WeightFamily::Tabulated { points })
    }

    pub fn with_tolerances(mut self, inversion_tol: f64, quadrature_tol: f64) -> Self {
        self.inversion_tol = inversion_tol;
        self.quadrature_tol = quadrature_tol;
        self
    }

    pub fn family(&self) -> &WeightFamily {
        &self.family
    }

    fn table(&self) -> &MonotoneCubic {
        self.interp.as_ref().expect("tabulated weight carries an interpolant")
    }

    fn check_t(&self, t: f64) -> Result<()> {
        if !(t >= 0.0) {
            return Err(domain(format!("phi argument must be non-negative, got {t}")));
        }
        if let Some(p) = &self.interp {
            if t > p.x_max() {
                return Err(domain(format!("t = {t} lies outside the tabulated grid [0, {}]", p.x_max())));
            }
        }
        Ok(())
    }

    pub fn phi(&self, t: f64) -> Result<f64> {
        self.check_t(t)?;
        Ok(match self.family {
            WeightFamily::LogFamily { alpha } => alpha * t.ln_1p(),
            WeightFamily::PowerFamily { beta, c } => c * (beta * t.ln_1p()).exp_m1(),
            WeightFamily::Tabulated { .. } => self.table().value(t),
        })
    }

    pub fn phi_prime(&self, t: f64) -> Result<f64> {
        self.check_t(t)?;
        Ok(match self.family {
            WeightFamily::LogFamily { alpha } => alpha / (1.0 + t),
            WeightFamily::PowerFamily { beta, c } => c * beta * ((beta - 1.0) * t.ln_1p()).exp(),
            WeightFamily::Tabulated { .. } => self.table().derivative(t),
        })
    }

    pub fn phi_second(&self, t: f64) -> Result<f64> {
        self.check_t(t)?;
        Ok(match self.family {
            WeightFamily::LogFamily { alpha } => -alpha / ((1.0 + t) * (1.0 + t)),
            WeightFamily::PowerFamily { beta, c } => c * beta * (beta - 1.0) * ((beta - 2.0) * t.ln_1p()).exp(),
            WeightFamily::Tabulated { .. } => self.table().second_derivative(t),
        })
    }

    /// `∫_0^t φ`.
    pub fn phi_integral(&self, t: f64) -> Result<f64> {
        self.check_t(t)?;
        Ok(match self.family {
            WeightFamily::LogFamily { alpha } => alpha * ((1.0 + t) * t.ln_1p() - t),
            WeightFamily::PowerFamily { beta, c } => {
                let b1 = beta + 1.0;
                c * ((b1 * t.ln_1p()).exp_m1() / b1 - t)
            }
            WeightFamily::Tabulated { .. } => self.table().integral_to(t),
        })
    }

    pub fn psi(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(domain(format!("psi argument must be non-negative, got {s}")));
        }
        match self.family {
            WeightFamily::LogFamily { alpha } => Ok((s / alpha).exp_m1()),
            WeightFamily::PowerFamily { beta, c } => Ok(((s / c).ln_1p() / beta).exp_m1()),
            WeightFamily::Tabulated { .. } => self.psi_by_inversion(s),
        }
    }

    /// Inverts φ numerically: Newton inside a bracket, bisecting whenever a
    /// step would leave it.
    pub fn psi_by_inversion(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(domain(format!("psi argument must be non-negative, got {s}")));
        }
        if s == 0.0 {
            return Ok(0.0);
        }
        let mut lo = 0.0;
        let mut hi = match &self.interp {
            Some(p) => {
                if s > p.y_max() {
                    return Err(Error::OutOfRange(format!(
                        "s = {s} exceeds sup phi = {} over the tabulated domain",
                        p.y_max()
                    )));
                }
                p.x_max()
            }
            None => {
                let mut hi = 1.0;
                while self.phi(hi)? < s {
                    hi *= 2.0;
                    if !hi.is_finite() {
                        return Err(numeric(format!("cannot bracket psi({s})")));
                    }
                }
                hi
            }
        };
        let mut t = 0.5 * (lo + hi);
        for _ in 0..200 {
            let f = self.phi(t)? - s;
            if f > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let d = self.phi_prime(t)?;
            let newton = t - f / d;
            let next = if d > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if (next - t).abs() <= self.inversion_tol * next.abs().max(1e-300) || hi - lo <= self.inversion_tol * hi {
                return Ok(next);
            }
            t = next;
        }
        Err(numeric(format!("psi inversion did not converge at s = {s}")))
    }

    pub fn psi_prime(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(domain(format!("psi argument must be non-negative, got {s}")));
        }
        match self.family {
            WeightFamily::LogFamily { alpha } => Ok((s / alpha).exp() / alpha),
            WeightFamily::PowerFamily { beta, c } => Ok(((1.0 / beta - 1.0) * (s / c).ln_1p()).exp() / (c * beta)),
            WeightFamily::Tabulated { .. } => {
                let t = self.psi(s)?;
                let d = self.phi_prime(t)?;
                if d <= 0.0 {
                    return Err(numeric(format!("interpolated phi' vanishes at t = {t}")));
                }
                Ok(1.0 / d)
            }
        }
    }

    /// `(ν(R), σ(R))` for `R > 1`.
    pub fn nu_sigma(&self, r: f64) -> Result<(f64, f64)> {
        if !(r > 1.0) {
            return Err(domain(format!("nu/sigma need R > 1, got {r}")));
        }
        let s = r.ln();
        Ok((self.psi(s)?, self.psi_prime(s)?))
    }

    /// `ν(R)`, extended by 0 to `R ≤ 1` where the reference measure has no mass.
    pub fn nu(&self, r: f64) -> Result<f64> {
        if r <= 1.0 {
            return Ok(0.0);
        }
        self.psi(r.ln())
    }

    pub fn sigma(&self, r: f64) -> Result<f64> {
        Ok(self.nu_sigma(r)?.1)
    }

    pub fn log_mu(&self, r: f64) -> Result<f64> {
        if !(r >= 1.0) {
            return Err(domain(format!("log mu needs R >= 1, got {r}")));
        }
        let s = r.ln();
        match self.family {
            WeightFamily::LogFamily { alpha } => Ok(alpha * (s / alpha).exp_m1() - s),
            WeightFamily::PowerFamily { beta, c } => {
                let e = 1.0 / beta + 1.0;
                Ok(c / e * (e * (s / c).ln_1p()).exp_m1() - s)
            }
            WeightFamily::Tabulated { .. } => self.log_mu_by_quadrature(r),
        }
    }

    /// `∫_0^{ln R} ψ` by adaptive quadrature, regardless of family.
    pub fn log_mu_by_quadrature(&self, r: f64) -> Result<f64> {
        if !(r >= 1.0) {
            return Err(domain(format!("log mu needs R >= 1, got {r}")));
        }
        let top = r.ln();
        // ψ is cheap for closed forms; for tables each call is a root solve.
        let f = |s: f64| self.psi(s).unwrap_or(f64::NAN);
        quad::integrate(f, 0.0, top, self.quadrature_tol)
    }

    /// `log a(n) = −∫_0^n φ`.
    pub fn coeff_log(&self, n: u64) -> Result<f64> {
        Ok(-self.phi_integral(n as f64)?)
    }

    /// `ω_R(t) = t ln R − ∫_0^t φ`.
    pub fn omega(&self, r: f64, t: f64) -> Result<f64> {
        if !(r > 1.0) {
            return Err(domain(format!("omega needs R > 1, got {r}")));
        }
        Ok(t * r.ln() - self.phi_integral(t)?)
    }

    /// γ-mass of an origin-centred disk or annulus sector (angles in turns).
    pub fn gamma_mass(&self, region: &GammaRegion) -> Result<f64> {
        match *region {
            GammaRegion::Disk { r } => {
                if !(r >= 0.0) {
                    return Err(domain(format!("disk radius must be non-negative, got {r}")));
                }
                self.nu(r)
            }
            GammaRegion::AnnulusSector { r1, r2, theta1, theta2 } => {
                let ok = r1 >= 1.0 && r1 <= r2 && r2.is_finite() && theta1 <= theta2 && theta2 <= theta1 + 1.0;
                if !ok {
                    return Err(domain(format!(
                        "malformed annulus sector r=[{r1}, {r2}], theta=[{theta1}, {theta2}]"
                    )));
                }
                Ok((theta2 - theta1) * (self.nu(r2)? - self.nu(r1)?))
            }
        }
    }

    /// γ-mass of the closed disk `|w − center| ≤ r`.
    ///
    /// Integrates `σ(s)/s` against the angular fraction of the circle `|w| = s`
    /// that lies inside the disk.
    pub fn gamma_disk(&self, center: Complex64, r: f64) -> Result<f64> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(domain(format!("disk radius must be non-negative, got {r}")));
        }
        let c = center.norm();
        if c <= 1e-12 * r.max(1.0) {
            return self.nu(r);
        }
        let inner_full = (r - c).max(0.0);
        let mut mass = self.nu(inner_full)?;
        let lo = (c - r).abs().max(1.0);
        let hi = c + r;
        if lo >= hi {
            return Ok(mass);
        }
        let frac = |s: f64| {
            let x = (s * s + c * c - r * r) / (2.0 * s * c);
            x.clamp(-1.0, 1.0).acos() / std::f64::consts::PI
        };
        // s = mid − half cos u clusters nodes at the square-root endpoints.
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let integrand = |u: f64| {
            let s = mid - half * u.cos();
            let sig = self.sigma(s).unwrap_or(f64::NAN);
            sig / s * frac(s) * half * u.sin()
        };
        let tol = self.quadrature_tol * (1.0 + self.nu(hi)?);
        mass += quad::integrate(integrand, 0.0, std::f64::consts::PI, tol)?;
        Ok(mass)
    }

    /// Pointwise view of the regularity of φ on a grid.
    pub fn regularity_report(&self, t_grid: &[f64], eps: f64, bounds: RegularityBounds) -> Result<Vec<RegularityRow>> {
        if !(eps > 0.0) {
            return Err(domain(format!("epsilon must be positive, got {eps}")));
        }
        t_grid
            .iter()
            .map(|&t| {
                if !(t > 0.0) {
                    return Err(domain(format!("regularity grid points must be positive, got {t}")));
                }
                let d1 = self.phi_prime(t)?;
                let d2 = self.phi_second(t)?;
                let ratio_plus = d2.abs() / d1.powf(2.0 + eps);
                let ratio_minus = d2.abs() / d1.powf(2.0 - eps);
                let flagged = ratio_plus < bounds.lower || ratio_minus > bounds.upper;
                Ok(RegularityRow {
                    t,
                    phi_prime: d1,
                    phi_second: d2,
                    ratio_plus,
                    ratio_minus,
                    delta: d2.abs() / (d1 * d1),
                    flagged,
                })
            })
            .collect()
    }
}

/// Thresholds for flagging the two-sided condition `(φ')^{2+ε} ≲ |φ''| ≲ (φ')^{2−ε}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityBounds {
    /// Rows with `|φ''| / (φ')^{2+ε}` below this are flagged.
    pub lower: f64,
    /// Rows with `|φ''| / (φ')^{2−ε}` above this are flagged.
    pub upper: f64,
}

impl Default for RegularityBounds {
    fn default() -> Self {
        Self { lower: 1e-2, upper: 1e2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityRow {
    pub t: f64,
    pub phi_prime: f64,
    pub phi_second: f64,
    pub ratio_plus: f64,
    pub ratio_minus: f64,
    /// Pointwise `Δ(1/φ') = |φ''| / (φ')²`.
    pub delta: f64,
    pub flagged: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn half() -> SmoothWeight {
        SmoothWeight::log_family(0.5).unwrap()
    }

    fn sample_table() -> SmoothWeight {
        let pts: Vec<(f64, f64)> = (0..=400)
            .map(|i| {
                let t = if i == 0 { 0.0 } else { (i as f64 * 0.05).exp_m1() };
                (t, 0.5 * t.ln_1p())
            })
            .collect();
        SmoothWeight::tabulated(pts).unwrap()
    }

    #[test]
    fn phi_examples() {
        assert_relative_eq!(half().phi(3.0).unwrap(), 0.5 * 4f64.ln(), epsilon = 1e-15);
        assert_eq!(half().phi(0.0).unwrap(), 0.0);
        let p = SmoothWeight::power_family(0.5, 1.0).unwrap();
        assert_relative_eq!(p.phi(8.0).unwrap(), 2.0, epsilon = 1e-14);
        assert_eq!(p.phi(0.0).unwrap(), 0.0);
    }

    #[test]
    fn psi_examples() {
        assert_relative_eq!(half().psi(1.0).unwrap(), 1f64.exp().powi(2) - 1.0, epsilon = 1e-12);
        assert_eq!(half().psi(0.0).unwrap(), 0.0);
        let p = SmoothWeight::power_family(0.5, 1.0).unwrap();
        assert_relative_eq!(p.psi(2.0).unwrap(), 8.0, epsilon = 1e-13);
        assert_relative_eq!(p.psi_by_inversion(2.0).unwrap(), 8.0, epsilon = 1e-11);
    }

    #[test]
    fn nu_sigma_examples() {
        let (nu, sigma) = half().nu_sigma(10.0).unwrap();
        assert_relative_eq!(nu, 99.0, epsilon = 1e-12);
        assert_relative_eq!(sigma, 200.0, epsilon = 1e-12);
        let (nu, sigma) = half().nu_sigma(0.5f64.exp()).unwrap();
        assert_relative_eq!(nu, 1f64.exp() - 1.0, epsilon = 1e-14);
        assert_relative_eq!(sigma, 2.0 * 1f64.exp(), epsilon = 1e-14);
        let one = SmoothWeight::log_family(1.0).unwrap();
        let (nu, sigma) = one.nu_sigma(100.0).unwrap();
        assert_relative_eq!(nu, 99.0, epsilon = 1e-12);
        assert_relative_eq!(sigma, 100.0, epsilon = 1e-12);
        assert!(matches!(half().nu_sigma(1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn log_mu_examples_and_quadrature_route() {
        let w = half();
        let closed = (99.0) / 2.0 - 10f64.ln();
        assert_relative_eq!(w.log_mu(10.0).unwrap(), closed, epsilon = 1e-12);
        assert_relative_eq!(w.log_mu_by_quadrature(10.0).unwrap(), closed, epsilon = 1e-9);
        assert_eq!(w.log_mu(1.0).unwrap(), 0.0);
        let one = SmoothWeight::log_family(1.0).unwrap();
        assert_relative_eq!(one.log_mu(1f64.exp()).unwrap(), 1f64.exp() - 2.0, epsilon = 1e-14);
        let p = SmoothWeight::power_family(0.7, 2.0).unwrap();
        assert_relative_eq!(p.log_mu(50.0).unwrap(), p.log_mu_by_quadrature(50.0).unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn coeff_log_examples() {
        let w = half();
        assert_relative_eq!(w.coeff_log(1).unwrap(), -0.5 * (2.0 * 2f64.ln() - 1.0), epsilon = 1e-15);
        assert_eq!(w.coeff_log(0).unwrap(), 0.0);
        let closed = -0.5 * (101.0 * 101f64.ln() - 100.0);
        assert_relative_eq!(w.coeff_log(100).unwrap(), closed, epsilon = 1e-12);
        let quad = quad::integrate(|t| w.phi(t).unwrap(), 0.0, 100.0, 1e-11).unwrap();
        assert_relative_eq!(-quad, closed, epsilon = 1e-10);
        // close to log (100!)^{-1/2}
        let lf: f64 = (1..=100).map(|k| (k as f64).ln()).sum();
        assert!((w.coeff_log(100).unwrap() + 0.5 * lf).abs() < 3.0);
    }

    #[test]
    fn omega_examples() {
        let w = half();
        assert_relative_eq!(w.omega(10.0, 99.0).unwrap(), w.log_mu(10.0).unwrap(), epsilon = 1e-10);
        let d = w.omega(10.0, 109.0).unwrap() - w.omega(10.0, 99.0).unwrap();
        let by_quad = 10.0 * 10f64.ln() - quad::integrate(|t| w.phi(t).unwrap(), 99.0, 109.0, 1e-12).unwrap();
        assert_relative_eq!(d, by_quad, epsilon = 1e-10);
        assert!((d + 0.24204).abs() < 1e-4);
        assert_eq!(w.omega(10.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn gamma_mass_examples() {
        let w = half();
        assert_relative_eq!(w.gamma_mass(&GammaRegion::Disk { r: 10.0 }).unwrap(), 99.0, epsilon = 1e-12);
        let sector = GammaRegion::AnnulusSector { r1: 5.0, r2: 10.0, theta1: 0.0, theta2: 0.25 };
        assert_relative_eq!(w.gamma_mass(&sector).unwrap(), 18.75, epsilon = 1e-12);
        assert_eq!(w.gamma_mass(&GammaRegion::Disk { r: 1.0 }).unwrap(), 0.0);
        let bad = GammaRegion::AnnulusSector { r1: 5.0, r2: 4.0, theta1: 0.0, theta2: 0.25 };
        assert!(w.gamma_mass(&bad).is_err());
    }

    #[test]
    fn offset_disk_mass_matches_area_density() {
        // For alpha = 1/2 the density is σ/(2π r²) = (1/π)(1 + 1/(... )) ≈ 1/π away from the origin.
        let w = half();
        let m = w.gamma_disk(Complex64::new(20.0, 0.0), 3.0).unwrap();
        // ν(r) = r² − 1 so σ(r)/r = 2r: density exactly 1/π for r > 1.
        assert_relative_eq!(m, 9.0, epsilon = 1e-8);
        let centred = w.gamma_disk(Complex64::new(0.0, 0.0), 7.0).unwrap();
        assert_relative_eq!(centred, 48.0, epsilon = 1e-12);
        // disk straddling the unit circle
        let m = w.gamma_disk(Complex64::new(1.5, 0.0), 1.0).unwrap();
        assert!(m > 0.0 && m < 1.0);
    }

    #[test]
    fn regularity_examples() {
        let rows = half().regularity_report(&[3.0, 1e3], 0.1, RegularityBounds::default()).unwrap();
        assert_relative_eq!(rows[0].phi_prime, 0.125, epsilon = 1e-15);
        assert_relative_eq!(rows[0].phi_second, -0.03125, epsilon = 1e-15);
        assert_relative_eq!(rows[0].delta, 2.0, epsilon = 1e-12);
        assert!(rows[1].ratio_plus.is_finite() && rows[1].ratio_minus.is_finite());
        assert!(!rows[1].flagged);
        let p = SmoothWeight::power_family(0.99, 1.0).unwrap();
        let rows = p.regularity_report(&[10.0], 0.1, RegularityBounds::default()).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(half().regularity_report(&[0.0], 0.1, RegularityBounds::default()).is_err());
    }

    #[test]
    fn tabulated_family_agrees_with_closed_form() {
        let tab = sample_table();
        let w = half();
        for &t in &[0.5, 3.0, 40.0, 1000.0] {
            assert_relative_eq!(tab.phi(t).unwrap(), w.phi(t).unwrap(), max_relative = 1e-5);
        }
        let (nu_t, sig_t) = tab.nu_sigma(10.0).unwrap();
        assert_relative_eq!(nu_t, 99.0, max_relative = 1e-4);
        assert_relative_eq!(sig_t, 200.0, max_relative = 1e-3);
        assert_relative_eq!(tab.log_mu(10.0).unwrap(), w.log_mu(10.0).unwrap(), max_relative = 1e-4);
        // log μ = ω(ν) holds for the interpolant as well
        let (nu, _) = tab.nu_sigma(10.0).unwrap();
        assert_relative_eq!(tab.log_mu(10.0).unwrap(), tab.omega(10.0, nu).unwrap(), epsilon = 1e-8);
        assert!(matches!(tab.phi(1e9), Err(Error::Domain(_))));
        assert!(matches!(tab.psi(1e3), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn tabulated_validation() {
        assert!(SmoothWeight::tabulated(vec![(0.0, 0.0), (1.0, 1.0)]).is_err());
        assert!(SmoothWeight::tabulated(vec![(0.0, 0.0), (1.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(SmoothWeight::tabulated(vec![(0.0, 0.1), (1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(SmoothWeight::log_family(-1.0).is_err());
        assert!(SmoothWeight::power_family(1.0, 1.0).is_err());
    }
}
