//! Spectral measures on the circle `[0, 1)` (turns) and their JSON form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::squarefree::{MirskyConstant, SqfreeAtoms};
use super::thue_morse::{interval_mass_from_acf, tm_prefix_interval_mass, tm_riesz_density};
use crate::error::{domain, Error, Result};
use crate::numeric::{e_int_turns, ComplexSum};
use crate::sequences::SequenceBuffer;

/// Largest prefix for which [`SpectralModel::interval_mass`] forms all autocorrelations.
pub const MAX_EMPIRICAL_MASS_N: u64 = 1 << 15;

#[derive(Debug, Clone)]
pub enum SpectralModel {
    Lebesgue,
    SqfreeAtoms(SqfreeAtoms),
    /// `χ_{2^depth}` of the Thue–Morse prefix.
    TmRiesz { depth: u32 },
    /// `(1/N)|Σ_{k<N} ξ(k) e(kt)|² dt` for a stored prefix.
    Empirical { values: Vec<Complex64> },
}

impl SpectralModel {
    pub fn sqfree_atoms(d_max: u64) -> Result<Self> {
        Ok(Self::SqfreeAtoms(SqfreeAtoms::new(d_max, MirskyConstant::new(MirskyConstant::DEFAULT_CUTOFF)?)?))
    }

    pub fn tm_riesz(depth: u32) -> Result<Self> {
        if depth == 0 || depth > 24 {
            return Err(domain(format!("Riesz depth must lie in 1..=24, got {depth}")));
        }
        Ok(Self::TmRiesz { depth })
    }

    pub fn empirical(seq: &SequenceBuffer, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(domain("empirical spectrum needs N >= 1"));
        }
        Ok(Self::Empirical { values: seq.slice(0, n)?.to_vec() })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Lebesgue => "lebesgue",
            Self::SqfreeAtoms(_) => "sqfree_atoms",
            Self::TmRiesz { .. } => "tm_riesz",
            Self::Empirical { .. } => "empirical",
        }
    }

    /// Density at `t`, if the model is absolutely continuous.
    pub fn density(&self, t: f64) -> Option<f64> {
        match self {
            Self::Lebesgue => Some(1.0),
            Self::SqfreeAtoms(_) => None,
            Self::TmRiesz { depth } => Some(tm_riesz_density(t, *depth)),
            Self::Empirical { values } => Some(density_of(values, t)),
        }
    }

    /// `χ([a, b))`, for `a ≤ b ≤ a + 1`.
    pub fn interval_mass(&self, a: f64, b: f64) -> Result<f64> {
        if !(a <= b && b - a <= 1.0) {
            return Err(domain(format!("arc [{a}, {b}) must have length in [0, 1]")));
        }
        Ok(match self {
            Self::Lebesgue => b - a,
            Self::SqfreeAtoms(m) => m.interval_mass(a, b),
            Self::TmRiesz { depth } => tm_prefix_interval_mass(*depth, a, b),
            Self::Empirical { values } => {
                let n = values.len() as u64;
                if n > MAX_EMPIRICAL_MASS_N {
                    return Err(Error::Capacity {
                        msg: format!("interval mass of an empirical spectrum with N = {n}"),
                        required: n,
                    });
                }
                let acf = real_acf(values)?;
                interval_mass_from_acf(&acf, n as f64, a, b)
            }
        })
    }

    pub fn to_json(&self) -> Result<Value> {
        let (params, atoms) = match self {
            Self::Lebesgue => (json!({}), Vec::new()),
            Self::SqfreeAtoms(m) => (
                json!({"d_max": m.d_max, "prime_cutoff": m.mirsky.prime_cutoff, "D": m.mirsky.value}),
                m.atoms()?,
            ),
            Self::TmRiesz { depth } => (json!({"depth": depth}), Vec::new()),
            Self::Empirical { values } => (json!({"N": values.len()}), Vec::new()),
        };
        let atoms: Vec<AtomJson> = atoms.into_iter().map(|(pos_turns, mass)| AtomJson { pos_turns, mass }).collect();
        Ok(serde_json::to_value(SpectralJson { kind: self.kind().to_string(), params, atoms })?)
    }
}

/// `(1/N)|Σ_{k<N} ξ(k) e(kt)|²`.
fn density_of(values: &[Complex64], t: f64) -> f64 {
    let s: ComplexSum = values.iter().enumerate().map(|(k, &x)| x * e_int_turns(k as u64, t)).collect();
    s.sum().norm_sqr() / values.len() as f64
}

/// `(1/N)|Σ_{0≤k<N} ξ(k) e(kt)|²` over a buffer starting at index 0.
pub fn empirical_spectral_density(seq: &SequenceBuffer, n: u64, t: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain("empirical spectrum needs N >= 1"));
    }
    Ok(density_of(seq.slice(0, n)?, t))
}

fn real_acf(values: &[Complex64]) -> Result<Vec<f64>> {
    if values.iter().any(|z| z.im != 0.0) {
        return Err(domain("interval masses of empirical spectra need a real sequence"));
    }
    let n = values.len();
    Ok((0..n).map(|d| (0..n - d).map(|k| values[k].re * values[k + d].re).sum()).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomJson {
    pub pos_turns: f64,
    pub mass: f64,
}

/// Serialized form `{kind, params, atoms: [{pos_turns, mass}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralJson {
    pub kind: String,
    pub params: Value,
    pub atoms: Vec<AtomJson>,
}

impl SpectralJson {
    /// Parses and checks the document: known kind, atoms in `[0, 1)` with
    /// finite non-negative masses.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text)?;
        if !["lebesgue", "sqfree_atoms", "tm_riesz", "empirical"].contains(&doc.kind.as_str()) {
            return Err(Error::Format(format!("unknown spectral model kind {:?}", doc.kind)));
        }
        for a in &doc.atoms {
            let ok = a.pos_turns.is_finite() && (0.0..1.0).contains(&a.pos_turns) && a.mass.is_finite() && a.mass >= 0.0;
            if !ok {
                return Err(Error::Format(format!("invalid atom at {} with mass {}", a.pos_turns, a.mass)));
            }
        }
        Ok(doc)
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{generate, MultiplierKind};

    #[test]
    fn constant_density_examples() {
        let c = generate(MultiplierKind::Constant, 0, 4, 0).unwrap();
        assert!((empirical_spectral_density(&c, 4, 0.0).unwrap() - 4.0).abs() < 1e-12);
        assert!(empirical_spectral_density(&c, 4, 0.25).unwrap() < 1e-24);
        assert!(empirical_spectral_density(&c, 5, 0.0).is_err());
    }

    #[test]
    fn riesz_model_matches_empirical_tm() {
        let tm = generate(MultiplierKind::ThueMorse, 0, 1 << 10, 0).unwrap();
        for &t in &[0.1, 0.377, 0.9] {
            let e = empirical_spectral_density(&tm, 1 << 10, t).unwrap();
            assert!((e - tm_riesz_density(t, 10)).abs() <= 1e-9 * e.max(1e-3));
        }
        let emp = SpectralModel::empirical(&tm, 64).unwrap();
        let riesz = SpectralModel::tm_riesz(6).unwrap();
        let (a, b) = (0.2, 0.45);
        assert!((emp.interval_mass(a, b).unwrap() - riesz.interval_mass(a, b).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn json_roundtrip() {
        let m = SpectralModel::sqfree_atoms(3).unwrap();
        let text = serde_json::to_string(&m.to_json().unwrap()).unwrap();
        let doc = SpectralJson::parse(&text).unwrap();
        assert_eq!(doc.kind, "sqfree_atoms");
        assert_eq!(doc.atoms.len(), 12);
        if let SpectralModel::SqfreeAtoms(a) = &m {
            assert!((doc.total_mass() - a.total_mass()).abs() < 1e-12);
        }
        assert!(SpectralJson::parse(r#"{"kind":"x","params":{},"atoms":[]}"#).is_err());
        assert!(SpectralJson::parse(r#"{"kind":"lebesgue","params":{},"atoms":[{"pos_turns":1.5,"mass":1}]}"#).is_err());
    }
}
