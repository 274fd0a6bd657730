//! Fitted constants, calibrated once and then frozen as regression thresholds.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

const BUILTIN: &str = include_str!("../constants.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrozenConstants {
    pub schema_version: u32,
    /// Bound on `|Σ_{s≤M} ξ(s)ξ(s+h)| / (h(1 + log M))` for Rudin–Shapiro.
    pub grs_growth: f64,
    /// `K` in `|F/μ − W_R| ≤ K Δ(σ)(log σ)^{3/2}`.
    pub laplace_k: f64,
    /// `K'` in `|F/μ| ≤ K' √σ` for `|ξ| ≤ 1`.
    pub laplace_upper_k: f64,
    /// `C` of the local-disk discrepancy regression.
    pub local_disks_c: f64,
    pub local_disks_tau: f64,
    /// Largest values seen during calibration, for reference.
    #[serde(default)]
    pub observed: BTreeMap<String, f64>,
}

impl FrozenConstants {
    pub fn parse(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text)?;
        if c.schema_version != 1 {
            return Err(Error::Format(format!("unsupported constants schema version {}", c.schema_version)));
        }
        let named = [
            ("grs_growth", c.grs_growth),
            ("laplace_k", c.laplace_k),
            ("laplace_upper_k", c.laplace_upper_k),
            ("local_disks_c", c.local_disks_c),
            ("local_disks_tau", c.local_disks_tau),
        ];
        for (name, v) in named {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Format(format!("constant {name} must be positive and finite, got {v}")));
            }
        }
        Ok(c)
    }

    /// The constants shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("shipped constants are valid")
    }

    pub fn builtin_text() -> &'static str {
        BUILTIN
    }
}

/// Hex SHA-256 of raw bytes.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
