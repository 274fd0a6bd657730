//! Multiplier sequences ξ materialized over index ranges.

mod io;

pub use io::{read_csv, write_csv};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{domain, Error, Result};
use crate::numeric::{dd, e_turns, hash64};

/// Largest number of values a single buffer may hold.
pub const MAX_LEN: u64 = 1 << 31;

/// Distribution of the prime values `X_p` of the random multiplicative kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeDistribution {
    Rademacher,
    Steinhaus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MultiplierKind {
    IidGaussian,
    IidRademacher,
    IidSteinhaus,
    /// `ξ(n) = e(α n²)`.
    Quadratic { alpha: f64 },
    /// `ξ(n) = μ²(n) Π_{p | n} X_p`.
    RandMult { base: PrimeDistribution },
    /// Completely multiplicative, `ξ(p^m) = X_p^m`.
    RandComplMult { base: PrimeDistribution },
    /// Golay–Rudin–Shapiro.
    Grs,
    /// `μ²(n)`.
    Squarefree,
    ThueMorse,
    Constant,
}

impl MultiplierKind {
    pub fn is_random(&self) -> bool {
        matches!(
            self,
            Self::IidGaussian | Self::IidRademacher | Self::IidSteinhaus | Self::RandMult { .. } | Self::RandComplMult { .. }
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::IidGaussian => "iid_gaussian",
            Self::IidRademacher => "iid_rademacher",
            Self::IidSteinhaus => "iid_steinhaus",
            Self::Quadratic { .. } => "quadratic",
            Self::RandMult { .. } => "rand_mult",
            Self::RandComplMult { .. } => "rand_compl_mult",
            Self::Grs => "grs",
            Self::Squarefree => "squarefree",
            Self::ThueMorse => "thue_morse",
            Self::Constant => "constant",
        }
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        if let Self::Quadratic { alpha } = self {
            if !alpha.is_finite() {
                return Err(format!("quadratic alpha must be finite, got {alpha}"));
            }
        }
        Ok(())
    }
}

/// An immutable range `[n0, n1)` of multiplier values.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceBuffer {
    kind: MultiplierKind,
    n0: u64,
    n1: u64,
    seed: u64,
    values: Vec<Complex64>,
}

impl SequenceBuffer {
    pub(crate) fn from_parts(kind: MultiplierKind, n0: u64, seed: u64, values: Vec<Complex64>) -> Self {
        let n1 = n0 + values.len() as u64;
        Self { kind, n0, n1, seed, values }
    }

    pub fn kind(&self) -> MultiplierKind {
        self.kind
    }

    pub fn n0(&self) -> u64 {
        self.n0
    }

    pub fn n1(&self) -> u64 {
        self.n1
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: u64) -> Option<Complex64> {
        if n >= self.n0 && n < self.n1 {
            Some(self.values[(n - self.n0) as usize])
        } else {
            None
        }
    }

    /// Errors unless the buffer covers `[lo, hi)`.
    pub fn require(&self, lo: u64, hi: u64) -> Result<()> {
        if lo < self.n0 || hi > self.n1 {
            return Err(Error::Range { have_lo: self.n0, have_hi: self.n1, need_lo: lo, need_hi: hi });
        }
        Ok(())
    }

    /// Values on `[lo, hi)`; errors if not covered.
    pub fn slice(&self, lo: u64, hi: u64) -> Result<&[Complex64]> {
        self.require(lo, hi)?;
        Ok(&self.values[(lo - self.n0) as usize..(hi - self.n0) as usize])
    }
}

/// `ξ(n)` for `n` in `[n0, n1)`.
pub fn generate(kind: MultiplierKind, n0: u64, n1: u64, seed: u64) -> Result<SequenceBuffer> {
    kind.validate().map_err(Error::Domain)?;
    if n1 <= n0 {
        return Err(domain(format!("empty range [{n0}, {n1})")));
    }
    if n1 - n0 > MAX_LEN {
        return Err(Error::Capacity { msg: format!("range [{n0}, {n1}) holds more than 2^31 values"), required: n1 - n0 });
    }
    let seed = if kind.is_random() { seed } else { 0 };
    let one = Complex64::new(1.0, 0.0);
    let values: Vec<Complex64> = match kind {
        MultiplierKind::IidGaussian => (n0..n1).map(|n| iid_gaussian(seed, n)).collect(),
        MultiplierKind::IidRademacher => (n0..n1).map(|n| iid_rademacher(seed, n)).collect(),
        MultiplierKind::IidSteinhaus => (n0..n1).map(|n| iid_steinhaus(seed, n)).collect(),
        MultiplierKind::Quadratic { alpha } => {
            if n1 > 1 << 52 {
                return Err(domain("quadratic phases need n < 2^52"));
            }
            (n0..n1).map(|n| quad_phase(alpha, n)).collect()
        }
        MultiplierKind::RandMult { base } => multiplicative(n0, n1, |_, p, e| {
            if e >= 2 {
                Complex64::new(0.0, 0.0)
            } else {
                prime_value(base, seed, p)
            }
        }),
        MultiplierKind::RandComplMult { base } => {
            multiplicative(n0, n1, |_, p, e| prime_value(base, seed, p).powu(e))
        }
        MultiplierKind::Grs => (n0..n1).map(|n| Complex64::new(grs_value(n) as f64, 0.0)).collect(),
        MultiplierKind::ThueMorse => (n0..n1).map(|n| Complex64::new(tm_value(n) as f64, 0.0)).collect(),
        MultiplierKind::Squarefree => squarefree_segment(n0, n1)
            .into_iter()
            .map(|b| Complex64::new(if b { 1.0 } else { 0.0 }, 0.0))
            .collect(),
        MultiplierKind::Constant => vec![one; (n1 - n0) as usize],
    };
    Ok(SequenceBuffer { kind, n0, n1, seed, values })
}

fn index_rng(seed: u64, n: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(hash64(seed, n))
}

fn iid_gaussian(seed: u64, n: u64) -> Complex64 {
    let mut rng = index_rng(seed, n);
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn iid_rademacher(seed: u64, n: u64) -> Complex64 {
    let s = if index_rng(seed, n).gen::<bool>() { 1.0 } else { -1.0 };
    Complex64::new(s, 0.0)
}

fn iid_steinhaus(seed: u64, n: u64) -> Complex64 {
    e_turns(index_rng(seed, n).gen::<f64>())
}

// Keeps the prime values independent of the iid streams under the same seed.
const PRIME_SALT: u64 = 0x5851_F42D_4C95_7F2D;

/// The random value `X_p` attached to a prime `p`.
pub fn prime_value(base: PrimeDistribution, seed: u64, p: u64) -> Complex64 {
    let h = hash64(seed ^ PRIME_SALT, p);
    match base {
        PrimeDistribution::Rademacher => Complex64::new(if h >> 63 == 1 { 1.0 } else { -1.0 }, 0.0),
        PrimeDistribution::Steinhaus => e_turns((h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)),
    }
}

fn multiplicative(n0: u64, n1: u64, local: impl Fn(u64, u64, u32) -> Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity((n1 - n0) as usize);
    if n0 == 0 {
        out.push(Complex64::new(0.0, 0.0));
    }
    arith::factor_segment(n0, n1, |n, f| {
        let v = f.iter().fold(Complex64::new(1.0, 0.0), |acc, &(p, e)| acc * local(n, p, e));
        out.push(v);
    });
    out
}

/// Square-free indicator on `[n0, n1)` by a segmented sieve; `μ²(0) = 0`.
fn squarefree_segment(n0: u64, n1: u64) -> Vec<bool> {
    let mut flags = vec![true; (n1 - n0) as usize];
    if n0 == 0 {
        flags[0] = false;
    }
    for p in arith::primes_up_to(arith::isqrt(n1.saturating_sub(1))) {
        let q = p * p;
        let mut m = n0.div_ceil(q).max(1) * q;
        while m < n1 {
            flags[(m - n0) as usize] = false;
            m += q;
        }
    }
    flags
}

/// Golay–Rudin–Shapiro: `(−1)` to the number of adjacent `11` pairs in binary.
pub fn grs_value(n: u64) -> i8 {
    if (n & (n >> 1)).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Thue–Morse: `(−1)` to the number of ones in binary.
pub fn tm_value(n: u64) -> i8 {
    if n.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `μ²(n)`; zero for `n = 0`.
pub fn sqfree_value(n: u64) -> u8 {
    (n > 0 && arith::is_squarefree(n)) as u8
}

/// `e(α n²)` with `α n² mod 1` reduced in double-double arithmetic.
pub fn quad_phase(alpha: f64, n: u64) -> Complex64 {
    let n = n as u128;
    e_turns(dd::frac_mul(alpha, n * n))
}
