//! Numerical checks of the hypotheses behind the lower bounds for Weyl-type sums.
//!
//! "≪" is read as "ratio at most a threshold" (default 1); every report carries
//! the raw ratio so that the reader can judge margins.

use serde::Serialize;

use super::s_star;
use crate::error::{domain, Result};
use crate::numeric::quad::gauss_legendre_on;
use crate::numeric::NeumaierSum;
use crate::sequences::SequenceBuffer;
use crate::weights::SmoothWeight;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl ConditionReport {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, ratio: lhs / rhs }
    }
}

/// `Σ_{ν ≤ k ≤ ν + βσ/2} |ξ(k)|²` against `βσ`.
pub fn check_condition1(seq: &SequenceBuffer, w: &SmoothWeight, r: f64, beta: f64) -> Result<ConditionReport> {
    check_beta(beta)?;
    let (nu, sigma) = w.nu_sigma(r)?;
    let lo = nu.ceil() as u64;
    let hi = (nu + 0.5 * beta * sigma).floor() as u64;
    let lhs = if hi >= lo { seq.slice(lo, hi + 1)?.iter().map(|z| z.norm_sqr()).sum() } else { 0.0 };
    Ok(ConditionReport::new(lhs, beta * sigma))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Condition2Report {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub m1: u64,
    pub m2: u64,
    /// Largest shift kept in the sum.
    pub h_cut: u64,
}

/// Window and truncation used by [`check_condition2`].
pub fn condition2_window(w: &SmoothWeight, r: f64, beta: f64, q: f64, a: f64) -> Result<(u64, u64, u64)> {
    check_beta(beta)?;
    let (nu, sigma) = w.nu_sigma(r)?;
    let m1 = (nu - beta * sigma).max(0.0).floor() as u64;
    let m2 = (w.nu(r * (1.0 + beta))? + beta * sigma).ceil() as u64;
    let by_q = beta.powf(-q);
    let by_window = a * (sigma * sigma.ln()).sqrt();
    Ok((m1, m2, by_q.min(by_window).floor().max(1.0) as u64))
}

/// `Σ_{1≤h≤h_cut} (1+βh)^{-p} S*(M1, M2; h)` against `βσ`, with
/// `M1 = ν(R) − βσ`, `M2 = ν(R(1+β)) + βσ`, `h_cut = min(β^{-q}, A√(σ log σ))`.
pub fn check_condition2(
    seq: &SequenceBuffer,
    w: &SmoothWeight,
    r: f64,
    beta: f64,
    p: f64,
    q: f64,
    a: f64,
) -> Result<Condition2Report> {
    if !(p > 1.0) {
        return Err(domain(format!("p must exceed 1, got {p}")));
    }
    if !(q > 1.0) {
        return Err(domain(format!("q must exceed 1, got {q}")));
    }
    let (m1, m2, h_cut) = condition2_window(w, r, beta, q, a)?;
    seq.require(m1, m2 + h_cut + 1)?;
    let mut lhs = NeumaierSum::new();
    for h in 1..=h_cut {
        lhs += (1.0 + beta * h as f64).powf(-p) * s_star(seq, m1, m2, h)?;
    }
    let sigma = w.sigma(r)?;
    let base = ConditionReport::new(lhs.sum(), beta * sigma);
    Ok(Condition2Report { lhs: base.lhs, rhs: base.rhs, ratio: base.ratio, m1, m2, h_cut })
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(domain(format!("beta must lie in (0, 1), got {beta}")));
    }
    Ok(())
}

/// Non-negative even test functions supported in `(−1/2, 1/2)` with unit integral.
#[derive(Debug, Clone)]
pub struct TestFunction {
    kind: TestFunctionKind,
    scale: f64,
    nodes: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunctionKind {
    /// Equal to 1 on `[−1/4, 1/4]`, with the surplus mass carried by two bumps near `±3/8`.
    Plateau,
    /// `exp(−1/(1 − 4x²))`, normalized; not constant on `[−1/4, 1/4]`.
    Bump,
}

fn smooth_exp(y: f64) -> f64 {
    if y <= 0.0 {
        0.0
    } else {
        (-1.0 / y).exp()
    }
}

/// 0 for `y ≤ 0`, 1 for `y ≥ 1`, smooth in between.
fn smooth_step(y: f64) -> f64 {
    let a = smooth_exp(y);
    let b = smooth_exp(1.0 - y);
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

fn unit_bump(y: f64) -> f64 {
    if y.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - y * y)).exp()
    }
}

impl TestFunction {
    const PANELS: usize = 256;
    const NODES_PER_PANEL: usize = 16;

    pub fn new(kind: TestFunctionKind) -> Self {
        let mut nodes = Vec::with_capacity(Self::PANELS * Self::NODES_PER_PANEL);
        for i in 0..Self::PANELS {
            let a = -0.5 + i as f64 / Self::PANELS as f64;
            nodes.extend(gauss_legendre_on(Self::NODES_PER_PANEL, a, a + 1.0 / Self::PANELS as f64));
        }
        let mut g = Self { kind, scale: 1.0, nodes };
        if kind == TestFunctionKind::Plateau {
            // fix the bump weight so that the integral is one
            let step: f64 = g.nodes.iter().map(|&(x, w)| w * g.raw_step(x)).sum();
            let bump: f64 = g.nodes.iter().map(|&(x, w)| w * g.raw_bumps(x)).sum();
            g.scale = (1.0 - step) / bump;
        } else {
            let total: f64 = g.nodes.iter().map(|&(x, w)| w * unit_bump(2.0 * x)).sum();
            g.scale = 1.0 / total;
        }
        g
    }

    pub fn plateau() -> Self {
        Self::new(TestFunctionKind::Plateau)
    }

    pub fn bump() -> Self {
        Self::new(TestFunctionKind::Bump)
    }

    pub fn kind(&self) -> TestFunctionKind {
        self.kind
    }

    fn raw_step(&self, x: f64) -> f64 {
        smooth_step((0.5 - x.abs()) * 4.0)
    }

    fn raw_bumps(&self, x: f64) -> f64 {
        unit_bump((x.abs() - 0.375) * 8.0)
    }

    pub fn value(&self, x: f64) -> f64 {
        match self.kind {
            TestFunctionKind::Plateau => self.raw_step(x) + self.scale * self.raw_bumps(x),
            TestFunctionKind::Bump => self.scale * unit_bump(2.0 * x),
        }
    }

    /// `ĝ(λ) = ∫ g(x) e(−λx) dx`, real since `g` is even.
    pub fn fourier(&self, lambda: f64) -> f64 {
        let t = std::f64::consts::TAU * lambda;
        self.nodes.iter().map(|&(x, w)| w * self.value(x) * (t * x).cos()).collect::<NeumaierSum>().sum()
    }
}

/// Model inputs: `ε1(X; h)`, `ε2(η)` and the shift range `H(X)`.
pub struct CorrelationModel<'a> {
    pub name: String,
    pub eps1: Box<dyn Fn(f64, u64) -> f64 + Send + Sync + 'a>,
    pub eps2: Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>,
    pub h_range: Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>,
}

impl CorrelationModel<'static> {
    /// Square-free model: `ε1 = X^{−1/3+ε}`, `ε2(β) = β^{3/2}`, `H(X) = X`.
    pub fn mirsky(eps: f64) -> Self {
        Self {
            name: "squarefree".into(),
            eps1: Box::new(move |x, _| x.powf(-1.0 / 3.0 + eps)),
            eps2: Box::new(|b| b.powf(1.5)),
            h_range: Box::new(|x| x),
        }
    }

    /// Thue–Morse model: `ε1 = h log X / X`, `ε2(β) = exp(−c0 (log β)²)`, `H(X) = X`.
    pub fn thue_morse(c0: f64) -> Self {
        Self {
            name: "thue_morse".into(),
            eps1: Box::new(|x, h| h as f64 * x.ln() / x),
            eps2: Box::new(move |b: f64| (-c0 * b.ln() * b.ln()).exp()),
            h_range: Box::new(|x| x),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub pass: bool,
}

impl ConditionCheck {
    fn new(lhs: f64, rhs: f64, threshold: f64) -> Self {
        let ratio = lhs / rhs;
        Self { lhs, rhs, ratio, pass: ratio <= threshold }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma5aReport {
    pub model: String,
    pub nu: f64,
    pub sigma: f64,
    pub beta: f64,
    pub q: f64,
    pub a: ConditionCheck,
    pub b: ConditionCheck,
    pub c: ConditionCheck,
    pub d: ConditionCheck,
    /// Largest `βh` included in the tail sum of (d).
    pub d_lambda_max: f64,
}

impl Lemma5aReport {
    pub fn all_pass(&self) -> bool {
        self.a.pass && self.b.pass && self.c.pass && self.d.pass
    }
}

/// Evaluates conditions (a)–(d):
///
/// * (a) `β^{-q} ≤ min(√σ, H(ν/2))`
/// * (b) `β^{-(1+2q)} ≪ σ ε2(β)`
/// * (c) `ν Σ_{0≤h≤β^{-q}} ε1(ν/2; h) ≪ β σ ε2(β)`
/// * (d) `Σ_{h>β^{-q}} |ĝ(βh)| ≪ ε2(β)`
///
/// The tail in (d) is summed while `βh ≤ lambda_max`.
#[allow(clippy::too_many_arguments)]
pub fn check_lemma5a_conditions(
    w: &SmoothWeight,
    r: f64,
    beta: f64,
    q: f64,
    model: &CorrelationModel<'_>,
    g: &TestFunction,
    threshold: f64,
    lambda_max: f64,
) -> Result<Lemma5aReport> {
    check_beta(beta)?;
    if !(q > 1.0) {
        return Err(domain(format!("q must exceed 1, got {q}")));
    }
    let (nu, sigma) = w.nu_sigma(r)?;
    let hq = beta.powf(-q);
    let e2 = (model.eps2)(beta);

    let a = ConditionCheck::new(hq, sigma.sqrt().min((model.h_range)(0.5 * nu)), 1.0);
    let b = ConditionCheck::new(beta.powf(-(1.0 + 2.0 * q)), sigma * e2, threshold);
    let c_sum: NeumaierSum = (0..=hq.floor() as u64).map(|h| (model.eps1)(0.5 * nu, h)).collect();
    let c = ConditionCheck::new(nu * c_sum.sum(), beta * sigma * e2, threshold);
    let first = hq.floor() as u64 + 1;
    let last = (lambda_max / beta).floor() as u64;
    let d_sum: NeumaierSum = (first..=last).map(|h| g.fourier(beta * h as f64).abs()).collect();
    let d = ConditionCheck::new(d_sum.sum(), e2, threshold);
    Ok(Lemma5aReport { model: model.name.clone(), nu, sigma, beta, q, a, b, c, d, d_lambda_max: last as f64 * beta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{generate, MultiplierKind};

    #[test]
    fn test_functions_are_normalized() {
        for g in [TestFunction::plateau(), TestFunction::bump()] {
            assert!((g.fourier(0.0) - 1.0).abs() < 1e-12, "{:?}", g.kind());
            assert_eq!(g.value(0.5), 0.0);
            assert!(g.value(0.3) >= 0.0);
        }
        let p = TestFunction::plateau();
        for &x in &[0.0, 0.1, -0.25, 0.25] {
            assert!((p.value(x) - 1.0).abs() < 1e-15);
        }
        // smooth functions: fast decay of the transform
        assert!(p.fourier(60.0).abs() < 1e-4);
    }

    #[test]
    fn condition1_unit_modulus() {
        let w = SmoothWeight::log_family(0.5).unwrap();
        for (kind, r) in [(MultiplierKind::Constant, 30.0), (MultiplierKind::ThueMorse, 41.5)] {
            let (nu, sigma) = w.nu_sigma(r).unwrap();
            let beta = 0.1;
            let seq = generate(kind, 0, (nu + sigma) as u64, 0).unwrap();
            let rep = check_condition1(&seq, &w, r, beta).unwrap();
            assert!((rep.ratio - 0.5).abs() <= 1.0 / (beta * sigma), "{kind:?}: {}", rep.ratio);
        }
    }

    #[test]
    fn condition2_constant_fails() {
        let w = SmoothWeight::log_family(0.5).unwrap();
        let r = 20.0;
        let (_, sigma) = w.nu_sigma(r).unwrap();
        let beta = sigma.powf(-0.3);
        let (_, m2, h_cut) = condition2_window(&w, r, beta, 1.1, 6.0).unwrap();
        let seq = generate(MultiplierKind::Constant, 0, m2 + h_cut + 2, 0).unwrap();
        let rep = check_condition2(&seq, &w, r, beta, 2.0, 1.1, 6.0).unwrap();
        assert!(rep.ratio > 3.0, "{rep:?}");
    }

    #[test]
    fn lemma5a_squarefree_desk_scale() {
        // σ = 10⁶, β = σ^{-0.09}: (a)–(c) hold; the tail of ĝ in (d) is not yet
        // small against β^{3/2} ≈ 0.15 at this β, so (d) fails honestly.
        let w = SmoothWeight::log_family(0.5).unwrap();
        let r = (0.5e6f64).sqrt();
        let beta = w.sigma(r).unwrap().powf(-0.09);
        let model = CorrelationModel::mirsky(0.01);
        let rep = check_lemma5a_conditions(&w, r, beta, 1.1, &model, &TestFunction::plateau(), 1.0, 200.0).unwrap();
        assert!(rep.a.pass && rep.b.pass && rep.c.pass, "{rep:?}");
        assert!(rep.c.ratio > 0.5);
        assert!(!rep.d.pass && rep.d.ratio > 1.0);
    }

    #[test]
    fn lemma5a_thue_morse_small_c() {
        let w = SmoothWeight::log_family(0.5).unwrap();
        let r = (0.5e6f64).sqrt();
        let sigma = w.sigma(r).unwrap();
        let beta = (-0.1 * sigma.ln().sqrt()).exp();
        let model = CorrelationModel::thue_morse(1.0);
        let rep = check_lemma5a_conditions(&w, r, beta, 2.0, &model, &TestFunction::plateau(), 1.0, 200.0).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
    }

    #[test]
    fn lemma5a_b_fails_for_large_beta_exponent() {
        let w = SmoothWeight::log_family(0.5).unwrap();
        let r = (0.5e6f64).sqrt();
        let sigma = w.sigma(r).unwrap();
        let beta = sigma.powf(-0.5);
        let rep = check_lemma5a_conditions(
            &w,
            r,
            beta,
            1.1,
            &CorrelationModel::mirsky(0.01),
            &TestFunction::plateau(),
            1.0,
            50.0,
        )
        .unwrap();
        assert!(!rep.b.pass);
    }
}
