//! Small numerical kernels shared by the modules.

pub mod dd;
pub mod pchip;
pub mod quad;
pub mod sum;

pub use sum::{ComplexSum, NeumaierSum};

use num_complex::Complex64;
use std::f64::consts::TAU;

/// `e(t) = exp(2 pi i t)` with `t` in turns.
#[inline]
pub fn e_turns(t: f64) -> Complex64 {
    let r = t - t.floor();
    let (s, c) = (TAU * r).sin_cos();
    Complex64::new(c, s)
}

/// `e(k t)` with `k t` reduced modulo 1 in extended precision.
#[inline]
pub fn e_int_turns(k: u64, t: f64) -> Complex64 {
    e_turns(dd::frac_mul(t, k as u128))
}

/// SplitMix64 finalizer used to derive independent per-index streams.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic 64-bit hash of `(seed, key)`.
#[inline]
pub fn hash64(seed: u64, key: u64) -> u64 {
    mix64(mix64(seed) ^ key.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}
