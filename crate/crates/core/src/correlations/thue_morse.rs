//! Thue–Morse correlations and the Riesz-product spectral density.

use std::collections::HashMap;

use num_rational::Ratio;

use crate::numeric::dd::frac_mul;
use crate::sequences::tm_value;

pub type Rational = Ratio<i128>;

/// Limiting correlation `σ(h) = lim (1/x) Σ_{k<x} ξ(k) ξ(k+h)`, exact.
///
/// Uses `σ(0) = 1`, `σ(2h) = σ(h)`, `σ(2h+1) = −(σ(h) + σ(h+1))/2`;
/// the `h = 0` instance of the odd rule forces `σ(1) = −1/3`.
pub fn tm_sigma(h: u64) -> Rational {
    sigma_pair(h).0
}

pub fn tm_sigma_f64(h: u64) -> f64 {
    let s = tm_sigma(h);
    *s.numer() as f64 / *s.denom() as f64
}

/// `(σ(h), σ(h+1))`.
fn sigma_pair(h: u64) -> (Rational, Rational) {
    let half = Rational::new(-1, 2);
    if h == 0 {
        return (Rational::from_integer(1), Rational::new(-1, 3));
    }
    let (a, b) = sigma_pair(h / 2);
    let odd = half * (a + b);
    if h.is_multiple_of(2) {
        (a, odd)
    } else {
        (odd, b)
    }
}

/// Exact `S(x, h) = Σ_{0≤k<x} ξ(k) ξ(k+h)` through the halving recurrence.
#[derive(Debug, Default)]
pub struct TmCorrelationSums {
    memo: HashMap<(u64, u64), i64>,
}

impl TmCorrelationSums {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, x: u64, h: u64) -> i64 {
        if x == 0 {
            return 0;
        }
        if h == 0 {
            return x as i64;
        }
        if x == 1 {
            return tm_value(h) as i64;
        }
        if let Some(&v) = self.memo.get(&(x, h)) {
            return v;
        }
        let (y, g) = (x / 2, h / 2);
        let v = match (x % 2, h % 2) {
            (0, 0) => 2 * self.get(y, g),
            (1, 0) => self.get(y + 1, g) + self.get(y, g),
            (0, _) => -self.get(y, g) - self.get(y, g + 1),
            _ => -self.get(y + 1, g) - self.get(y, g + 1),
        };
        self.memo.insert((x, h), v);
        v
    }
}

/// Direct `Σ_{0≤k<x} ξ(k) ξ(k+h)`.
pub fn tm_correlation_brute(x: u64, h: u64) -> i64 {
    (0..x).map(|k| (tm_value(k) * tm_value(k + h)) as i64).sum()
}

/// `Π_{0≤j<n} 2 sin²(π 2^j t)`, the density of `|P_{2^n}(t)|² / 2^n`.
pub fn tm_riesz_density(t: f64, depth: u32) -> f64 {
    (0..depth)
        .map(|j| {
            // 2^j t mod 1 is exact for doubles; the reduction keeps sin accurate.
            let r = frac_mul(t, 1u128 << j);
            let s = (std::f64::consts::PI * r).sin();
            2.0 * s * s
        })
        .product()
}

/// `χ_{2^n}([a, b])` for the Thue–Morse prefix of length `2^n`, computed from
/// the finite autocorrelations of the prefix.
pub fn tm_prefix_interval_mass(depth: u32, a: f64, b: f64) -> f64 {
    let n = 1u64 << depth;
    let mut sums = TmCorrelationSums::new();
    let acf: Vec<f64> = (0..n).map(|d| sums.get(n - d, d) as f64).collect();
    interval_mass_from_acf(&acf, n as f64, a, b)
}

/// `∫_a^b (1/N)|Σ ξ(k) e(kt)|² dt` from `A(d) = Σ_{k+d<N} ξ(k) ξ(k+d)`, `d ≥ 0`.
pub(crate) fn interval_mass_from_acf(acf: &[f64], n: f64, a: f64, b: f64) -> f64 {
    use std::f64::consts::TAU;
    let mut total = crate::numeric::NeumaierSum::new();
    total += acf[0] * (b - a);
    for (d, &c) in acf.iter().enumerate().skip(1) {
        if c == 0.0 {
            continue;
        }
        let d = d as u64;
        let sb = (TAU * frac_mul(b, d as u128)).sin();
        let sa = (TAU * frac_mul(a, d as u128)).sin();
        total += 2.0 * c * (sb - sa) / (TAU * d as f64);
    }
    total.sum() / n
}
