//! Evaluation of `F_ξ(R e(θ)) / μ(R)` through the central block, the Gaussian
//! Weyl sums `W_R(θ)`, and their averaged second moment.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::correlations::TestFunction;
use crate::error::{domain, numeric, Error, Result};
use crate::numeric::quad::gauss_legendre_on;
use crate::numeric::{e_int_turns, e_turns, ComplexSum, NeumaierSum};
use crate::sequences::SequenceBuffer;
use crate::weights::SmoothWeight;

pub const DEFAULT_WINDOW_A: f64 = 6.0;

/// Smallest σ for which the central window is defined.
pub const MIN_WINDOW_SIGMA: f64 = 3.0;

/// Weight, multipliers and window constant defining `F_ξ` and its evaluators.
#[derive(Debug, Clone)]
pub struct SeriesSpec {
    weight: SmoothWeight,
    seq: Arc<SequenceBuffer>,
    window_a: f64,
    /// `ln a(k)` for every stored index; NaN where the weight is undefined.
    log_a: Arc<Vec<f64>>,
    full: Arc<OnceLock<LogPolynomial>>,
}

/// Coefficients `c_k` of `Σ_k c_k e(kθ)` for `n_lo ≤ k ≤ n_hi` at a fixed radius.
#[derive(Debug, Clone)]
pub struct RadialSlice {
    pub n_lo: u64,
    pub coeffs: Vec<Complex64>,
}

impl RadialSlice {
    /// Horner in `u = e(θ)`, then the factor `e(n_lo θ)`.
    pub fn eval(&self, theta: f64) -> Complex64 {
        let u = e_turns(theta);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * u + c;
        }
        acc * e_int_turns(self.n_lo, theta)
    }

    /// Compensated direct summation, slower but independent of Horner.
    pub fn eval_direct(&self, theta: f64) -> Complex64 {
        let s: ComplexSum =
            self.coeffs.iter().enumerate().map(|(i, c)| c * e_int_turns(self.n_lo + i as u64, theta)).collect();
        s.sum()
    }
}

impl SeriesSpec {
    /// The sequence must start at index 0; its end is the `max_index` of the spec.
    pub fn new(weight: SmoothWeight, seq: impl Into<Arc<SequenceBuffer>>, window_a: f64) -> Result<Self> {
        let seq = seq.into();
        if !(window_a > 0.0 && window_a.is_finite()) {
            return Err(domain(format!("window constant A must be positive, got {window_a}")));
        }
        if seq.n0() != 0 {
            return Err(domain(format!("series multipliers must start at index 0, got {}", seq.n0())));
        }
        let log_a = (0..seq.n1()).map(|k| weight.coeff_log(k).unwrap_or(f64::NAN)).collect();
        Ok(Self { weight, seq, window_a, log_a: Arc::new(log_a), full: Arc::default() })
    }

    pub fn weight(&self) -> &SmoothWeight {
        &self.weight
    }

    pub fn sequence(&self) -> &SequenceBuffer {
        &self.seq
    }

    pub fn window_a(&self) -> f64 {
        self.window_a
    }

    /// Exclusive upper end of the stored multipliers.
    pub fn max_index(&self) -> u64 {
        self.seq.n1()
    }

    /// `max_index` needed to evaluate windows for every radius up to `r_max`.
    pub fn required_max_index(weight: &SmoothWeight, r_max: f64, window_a: f64) -> Result<u64> {
        let (nu, sigma) = weight.nu_sigma(r_max)?;
        let n = window_a * (sigma * sigma.ln().max(0.0)).sqrt();
        let top = (nu + n).ceil();
        if !(top < crate::sequences::MAX_LEN as f64) {
            return Err(Error::OutOfRange(format!(
                "R = {r_max} needs about {top:e} multipliers, more than the supported {}",
                crate::sequences::MAX_LEN
            )));
        }
        Ok(top as u64 + 1)
    }

    /// `(n_lo, n_hi)` with `N = A√(σ log σ)`, `n_lo = max(0, ⌊ν − N⌋)`, `n_hi = ⌈ν + N⌉`.
    pub fn central_window(&self, r: f64) -> Result<(u64, u64)> {
        let (nu, sigma) = self.weight.nu_sigma(r)?;
        if sigma < MIN_WINDOW_SIGMA {
            return Err(domain(format!("central window needs sigma >= 3, got {sigma} at R = {r}")));
        }
        let n = self.window_a * (sigma * sigma.ln()).sqrt();
        let lo = (nu - n).floor().max(0.0) as u64;
        let hi = (nu + n).ceil() as u64;
        if hi >= self.max_index() {
            return Err(Error::Capacity {
                msg: format!("window [{lo}, {hi}] at R = {r} exceeds the {} stored multipliers", self.max_index()),
                required: hi + 1,
            });
        }
        Ok((lo, hi))
    }

    /// Coefficients `ξ(k) exp(ω(k) − ω(ν))` on the central window.
    pub fn slice(&self, r: f64) -> Result<RadialSlice> {
        let (lo, hi) = self.central_window(r)?;
        let nu = self.weight.nu(r)?;
        let ln_r = r.ln();
        let phi_nu = self.weight.phi_integral(nu)?;
        let xi = self.seq.slice(lo, hi + 1)?;
        let log_a = &self.log_a[lo as usize..=hi as usize];
        if log_a.iter().any(|v| !v.is_finite()) {
            return Err(domain(format!("weight undefined on the window [{lo}, {hi}]")));
        }
        let coeffs = (lo..=hi)
            .zip(xi.iter().zip(log_a))
            .map(|(k, (x, la))| {
                // (k − ν) ln R − ∫_ν^k φ, differenced before exponentiating
                let e = (k as f64 - nu) * ln_r + (la + phi_nu);
                x * e.exp()
            })
            .collect();
        Ok(RadialSlice { n_lo: lo, coeffs })
    }

    /// Coefficients `ξ(k) exp(−(k − ν)²/(2σ))` on the central window.
    pub fn gaussian_slice(&self, r: f64) -> Result<RadialSlice> {
        let (lo, hi) = self.central_window(r)?;
        let (nu, sigma) = self.weight.nu_sigma(r)?;
        let xi = self.seq.slice(lo, hi + 1)?;
        let coeffs = (lo..=hi)
            .zip(xi)
            .map(|(k, x)| {
                let d = k as f64 - nu;
                x * (-d * d / (2.0 * sigma)).exp()
            })
            .collect();
        Ok(RadialSlice { n_lo: lo, coeffs })
    }

    /// `Σ_{n_lo≤k≤n_hi} ξ(k) e(kθ) exp(ω(k) − ω(ν))`, i.e. `F_ξ(R e(θ)) / μ(R)` up to the tails.
    pub fn eval_normalized(&self, r: f64, theta: f64) -> Result<Complex64> {
        Ok(self.slice(r)?.eval_direct(theta))
    }

    /// `W_R(θ) = Σ_{|n−ν|≤N} ξ(n) e(nθ) exp(−(n−ν)²/(2σ))`.
    pub fn weyl_sum(&self, r: f64, theta: f64) -> Result<Complex64> {
        Ok(self.gaussian_slice(r)?.eval_direct(theta))
    }

    /// `Σ_{k<max_index} ξ(k) a(k) R^k e(kθ) / μ(R)`, the whole stored series.
    pub fn full_normalized(&self, r: f64, theta: f64) -> Result<Complex64> {
        let log_mu = self.weight.log_mu(r)?;
        let ln_r = r.ln();
        let s: ComplexSum = self
            .seq
            .values()
            .iter()
            .enumerate()
            .map(|(k, x)| {
                let e = k as f64 * ln_r + self.weight.coeff_log(k as u64)? - log_mu;
                Ok(x * e.exp() * e_int_turns(k as u64, theta))
            })
            .collect::<Result<_>>()?;
        Ok(s.sum())
    }

    /// The whole stored series as a log-domain polynomial.
    pub fn full_truncation(&self) -> Result<LogPolynomial> {
        if self.log_a.iter().any(|v| !v.is_finite()) {
            return Err(domain("weight undefined on part of the stored index range"));
        }
        Ok(LogPolynomial::from_parts(&self.log_a, self.seq.values()))
    }

    /// True when the central window is defined at `R` (it may still exceed the stored range).
    pub fn has_window(&self, r: f64) -> bool {
        r > 1.0 && self.weight.sigma(r).is_ok_and(|s| s >= MIN_WINDOW_SIGMA)
    }

    /// `F_ξ(e^{log_r} e(θ))` divided by a positive function of the radius: the central
    /// block where the window is defined, otherwise the whole stored series scaled by its
    /// largest term.
    pub fn eval_log_polar(&self, log_r: f64, theta: f64) -> Result<Complex64> {
        let r = log_r.exp();
        if self.has_window(r) {
            return Ok(self.slice(r)?.eval(theta));
        }
        if let Some(p) = self.full.get() {
            return Ok(p.eval_log_polar(log_r, theta));
        }
        let p = self.full_truncation()?;
        Ok(self.full.get_or_init(|| p).eval_log_polar(log_r, theta))
    }

    /// `X = ∫_R^{R(1+β)} ∫ |W_s(θ)|² g((ϑ−θ)/β) dθ dν(s)` by tensor Gauss–Legendre
    /// quadrature, doubling both grids until the value settles to `rel_tol`.
    pub fn x_statistic(&self, r: f64, vartheta: f64, beta: f64, g: &TestFunction, opts: XOptions) -> Result<XReport> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(domain(format!("beta must lie in (0, 1), got {beta}")));
        }
        let r_hi = r * (1.0 + beta);
        self.central_window(r_hi)?;
        let nu_hi = self.weight.nu(r_hi)?;
        // |W|² oscillates on the scale 1/ν in θ; start from spacing ≤ 1/(4ν)
        let min_theta = (4.0 * nu_hi * beta).ceil() as usize;
        let mut n_s = opts.s_nodes.max(16);
        let mut n_t = opts.theta_nodes.max(min_theta).max(16);
        let mut prev: Option<f64> = None;
        for level in 0..=opts.max_doublings {
            let value = self.x_on_grid(r, r_hi, vartheta, beta, g, n_s, n_t)?;
            if let Some(p) = prev {
                if (value - p).abs() <= opts.rel_tol * value.abs().max(1e-300) {
                    return Ok(XReport { value, s_nodes: n_s, theta_nodes: n_t, doublings: level });
                }
            }
            prev = Some(value);
            n_s *= 2;
            n_t *= 2;
        }
        Err(numeric(format!(
            "X statistic did not settle to {:e} after {} doublings (last value {:?}, grid {}x{})",
            opts.rel_tol,
            opts.max_doublings,
            prev,
            n_s / 2,
            n_t / 2
        )))
    }

    #[allow(clippy::too_many_arguments)]
    fn x_on_grid(
        &self,
        r: f64,
        r_hi: f64,
        vartheta: f64,
        beta: f64,
        g: &TestFunction,
        n_s: usize,
        n_t: usize,
    ) -> Result<f64> {
        const PANEL: usize = 16;
        let s_nodes = if n_s <= 64 { gauss_legendre_on(n_s, r, r_hi) } else { composite_nodes(n_s, PANEL, r, r_hi) };
        let t_nodes = composite_nodes(n_t, PANEL, vartheta - 0.5 * beta, vartheta + 0.5 * beta);
        let g_vals: Vec<f64> = t_nodes.iter().map(|&(t, _)| g.value((vartheta - t) / beta)).collect();
        let rows: Vec<f64> = s_nodes
            .par_iter()
            .map(|&(s, ws)| {
                let slice = self.gaussian_slice(s)?;
                let dnu = self.weight.sigma(s)? / s;
                let inner: NeumaierSum =
                    t_nodes.iter().zip(&g_vals).map(|(&(t, wt), gv)| wt * gv * slice.eval(t).norm_sqr()).collect();
                Ok(ws * dnu * inner.sum())
            })
            .collect::<Result<_>>()?;
        Ok(rows.into_iter().collect::<NeumaierSum>().sum())
    }

    /// Largest `|W_{R'}(θ')|` on an `n_r × n_theta` grid over
    /// `[R, R(1+β)] × (ϑ−β, ϑ+β)`.
    pub fn weyl_witness(&self, r: f64, vartheta: f64, beta: f64, n_r: usize, n_theta: usize) -> Result<Witness> {
        if n_r < 2 || n_theta < 2 {
            return Err(domain("witness grid needs at least 2 points per axis"));
        }
        let rows: Vec<Witness> = (0..n_r)
            .into_par_iter()
            .map(|i| {
                let rr = r * (1.0 + beta * i as f64 / (n_r - 1) as f64);
                let slice = self.gaussian_slice(rr)?;
                let mut best = Witness { r: rr, theta: vartheta, modulus: -1.0 };
                for j in 0..n_theta {
                    // open interval: stay strictly inside (ϑ−β, ϑ+β)
                    let t = vartheta - beta + 2.0 * beta * (j as f64 + 0.5) / n_theta as f64;
                    let m = slice.eval(t).norm();
                    if m > best.modulus {
                        best = Witness { r: rr, theta: t, modulus: m };
                    }
                }
                Ok(best)
            })
            .collect::<Result<_>>()?;
        Ok(rows.into_iter().max_by(|a, b| a.modulus.total_cmp(&b.modulus)).expect("n_r >= 2"))
    }
}

fn composite_nodes(n: usize, panel: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let panels = n.div_ceil(panel).max(1);
    let h = (b - a) / panels as f64;
    (0..panels).flat_map(|i| gauss_legendre_on(panel, a + i as f64 * h, a + (i + 1) as f64 * h)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XOptions {
    pub s_nodes: usize,
    pub theta_nodes: usize,
    pub rel_tol: f64,
    pub max_doublings: u32,
}

impl Default for XOptions {
    fn default() -> Self {
        Self { s_nodes: 64, theta_nodes: 256, rel_tol: 1e-6, max_doublings: 6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XReport {
    pub value: f64,
    pub s_nodes: usize,
    pub theta_nodes: usize,
    pub doublings: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub r: f64,
    pub theta: f64,
    pub modulus: f64,
}

/// `Σ_k c_k z^k` with coefficients stored as `(ln|c_k|, c_k/|c_k|)`, evaluated
/// as `Σ_k c_k z^k / max_k |c_k z^k|` so that huge radii and coefficients stay finite.
#[derive(Debug, Clone)]
pub struct LogPolynomial {
    /// `(k, ln|c_k|, c_k/|c_k|)` for the non-zero coefficients.
    terms: Vec<(u64, f64, Complex64)>,
    degree: u64,
}

impl LogPolynomial {
    /// From `ln a(k)` and multipliers `ξ(k)`: `c_k = ξ(k) a(k)`.
    pub fn from_parts(log_a: &[f64], xi: &[Complex64]) -> Self {
        let terms: Vec<_> = log_a
            .iter()
            .zip(xi)
            .enumerate()
            .filter(|(_, (_, x))| x.norm() > 0.0)
            .map(|(k, (la, x))| (k as u64, la + x.norm().ln(), x / x.norm()))
            .collect();
        let degree = terms.last().map_or(0, |t| t.0);
        Self { terms, degree }
    }

    pub fn from_coeffs(c: &[Complex64]) -> Self {
        let zeros = vec![0.0; c.len()];
        Self::from_parts(&zeros, c)
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// `ln ρ` of the Cauchy bound `ρ = 1 + max_{k<d} |c_k / c_d|`; all zeros lie in `|z| < ρ`.
    pub fn log_cauchy_bound(&self) -> f64 {
        let Some(&(_, top, _)) = self.terms.last() else { return 0.0 };
        let m = self.terms[..self.terms.len() - 1].iter().map(|t| t.1 - top).fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return 0.0;
        }
        // ln(1 + e^m)
        if m > 0.0 {
            m + (-m).exp().ln_1p()
        } else {
            m.exp().ln_1p()
        }
    }

    /// Index of the largest term at radius `e^{log_r}`.
    pub fn central_index(&self, log_r: f64) -> u64 {
        self.terms
            .iter()
            .map(|&(k, l, _)| (k, l + k as f64 * log_r))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map_or(0, |t| t.0)
    }

    /// Value at `e^{log_r} e(θ)` divided by the largest term modulus there.
    pub fn eval_log_polar(&self, log_r: f64, theta: f64) -> Complex64 {
        let m = self.terms.iter().map(|&(k, l, _)| l + k as f64 * log_r).fold(f64::NEG_INFINITY, f64::max);
        let s: ComplexSum = self
            .terms
            .iter()
            .map(|&(k, l, u)| {
                let e = l + k as f64 * log_r - m;
                if e < -745.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    u * e.exp() * e_int_turns(k, theta)
                }
            })
            .collect();
        s.sum()
    }
}
