//! Versioned JSON experiment configuration and its static validation.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use zerolab::correlations::spectral::MAX_EMPIRICAL_MASS_N;
use zerolab::correlations::squarefree::MAX_EXPLICIT_ATOMS;
use zerolab::equidist::{GaugeKind, LatticeRegion};
use zerolab::evaluator::{SeriesSpec, DEFAULT_WINDOW_A};
use zerolab::sequences::{sqfree_value, MultiplierKind, MAX_LEN};
use zerolab::weights::{SmoothWeight, WeightFamily};
use zerolab::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

fn default_window_a() -> f64 {
    DEFAULT_WINDOW_A
}
fn default_min_samples() -> usize {
    zerolab::zeros::DEFAULT_MIN_SAMPLES
}
fn default_tau() -> f64 {
    2.0
}
fn default_one() -> f64 {
    1.0
}
fn default_radius_factor() -> f64 {
    3.0
}
fn default_lambda_max() -> f64 {
    200.0
}
fn default_q() -> f64 {
    1.1
}
fn default_tau_max() -> f64 {
    16.0
}
fn default_r_max() -> f64 {
    50.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub seed: u64,
    pub weight: WeightFamily,
    pub sequence: MultiplierKind,
    #[serde(default = "default_window_a")]
    pub window_a: f64,
    /// Stored multipliers; defaults to what the largest radius needs.
    #[serde(default)]
    pub max_index: Option<u64>,
    #[serde(default)]
    pub experiments: Vec<Experiment>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpectralSpec {
    Lebesgue,
    TmRiesz { depth: u32 },
    SqfreeAtoms { d_max: u64 },
    Empirical { n: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConditionModelSpec {
    Squarefree { eps: f64 },
    ThueMorse { c0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunctionSpec {
    Plateau,
    Bump,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TransportSource {
    /// `ℤ² ∩ [−half_width, half_width]²` against Lebesgue measure.
    Lattice { half_width: i64 },
    /// Localized zeros of the configured series against γ.
    Zeros { coverage: f64, cell_diameter: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Experiment {
    ZeroCountSweep {
        radii: Vec<f64>,
        #[serde(default = "default_min_samples")]
        min_samples: usize,
    },
    SectorEquidist {
        r1: f64,
        r2: f64,
        sectors: u32,
        gauge: GaugeKind,
        #[serde(default = "default_tau")]
        tau: f64,
        #[serde(default = "default_one")]
        c: f64,
    },
    LocalDisks {
        disks: usize,
        r_min: f64,
        r_max: f64,
        gauge: GaugeKind,
        /// Disk radius in units of `ρ(|center|)`.
        #[serde(default = "default_radius_factor")]
        radius_factor: f64,
        /// Defaults to the frozen constants.
        #[serde(default)]
        tau: Option<f64>,
        #[serde(default)]
        c: Option<f64>,
    },
    CorrelationSuite {
        x: u64,
        h_max: u64,
    },
    SpectralSuite {
        model: SpectralSpec,
        grid: usize,
        #[serde(default)]
        intervals: usize,
    },
    WeylScan {
        radii: Vec<f64>,
        thetas: usize,
    },
    ConditionCheck {
        model: ConditionModelSpec,
        radius: f64,
        #[serde(default)]
        beta: Option<f64>,
        /// `β = σ^{−beta_exponent}`.
        #[serde(default)]
        beta_exponent: Option<f64>,
        #[serde(default = "default_q")]
        q: f64,
        #[serde(default = "default_one")]
        threshold: f64,
        #[serde(default = "default_lambda_max")]
        lambda_max: f64,
        test_function: TestFunctionSpec,
    },
    TransportCheck {
        source: TransportSource,
        disks: usize,
        /// Range of `|center|`.
        r_min: f64,
        r_max: f64,
        disk_radius_max: f64,
        gauge: GaugeKind,
        #[serde(default = "default_tau")]
        tau: f64,
        #[serde(default = "default_tau_max")]
        tau_max: f64,
    },
    LatticeBaseline {
        #[serde(default)]
        regions: Vec<LatticeRegion>,
        /// Additional random disks and rectangles.
        #[serde(default)]
        random: usize,
        #[serde(default = "default_r_max")]
        r_max: f64,
    },
}

impl Experiment {
    pub fn type_name(&self) -> &'static str {
        match self {
            Self::ZeroCountSweep { .. } => "zero_count_sweep",
            Self::SectorEquidist { .. } => "sector_equidist",
            Self::LocalDisks { .. } => "local_disks",
            Self::CorrelationSuite { .. } => "correlation_suite",
            Self::SpectralSuite { .. } => "spectral_suite",
            Self::WeylScan { .. } => "weyl_scan",
            Self::ConditionCheck { .. } => "condition_check",
            Self::TransportCheck { .. } => "transport_check",
            Self::LatticeBaseline { .. } => "lattice_baseline",
        }
    }

    /// Largest `|z|` at which the series is evaluated, if any.
    pub fn max_radius(&self, local_rho: impl Fn(&GaugeKind, f64) -> Option<f64>) -> Option<f64> {
        match self {
            Self::ZeroCountSweep { radii, .. } => radii.iter().cloned().reduce(f64::max),
            Self::SectorEquidist { r2, .. } => Some(*r2),
            Self::LocalDisks { r_max, gauge, radius_factor, .. } => {
                Some(r_max + radius_factor * local_rho(gauge, *r_max).unwrap_or(0.0))
            }
            Self::WeylScan { radii, .. } => radii.iter().cloned().reduce(f64::max),
            Self::TransportCheck { source: TransportSource::Zeros { coverage, .. }, .. } => Some(*coverage),
            _ => None,
        }
    }
}

fn positive(errs: &mut Vec<String>, field: &str, v: f64) {
    if !(v > 0.0 && v.is_finite()) {
        errs.push(format!("{field}: must be positive and finite, got {v}"));
    }
}

fn gauge_ok(errs: &mut Vec<String>, field: &str, g: &GaugeKind) {
    if let Err(e) = g.validate() {
        errs.push(format!("{field}: {e}"));
    }
}

fn part<T: DeserializeOwned>(errs: &mut Vec<String>, obj: &serde_json::Map<String, Value>, key: &str) -> Option<T> {
    match obj.get(key) {
        None => {
            errs.push(format!("{key}: missing"));
            None
        }
        Some(v) => match serde_json::from_value(v.clone()) {
            Ok(t) => Some(t),
            Err(e) => {
                errs.push(format!("{key}: {e}"));
                None
            }
        },
    }
}

impl ExperimentConfig {
    /// Parses and validates; every problem found is reported, each prefixed by its field.
    pub fn parse(text: &str) -> Result<Self> {
        let errs = Self::check_text(text);
        if !errs.is_empty() {
            return Err(Error::Validation(errs));
        }
        Ok(serde_json::from_str(text)?)
    }

    /// Static validation without computing anything beyond window sizes.
    pub fn check_text(text: &str) -> Vec<String> {
        let value: Value = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => return vec![format!("config: not valid JSON: {e}")],
        };
        let Some(obj) = value.as_object() else { return vec!["config: must be a JSON object".into()] };
        let mut errs = Vec::new();
        const KNOWN: [&str; 7] = ["schema_version", "seed", "weight", "sequence", "window_a", "max_index", "experiments"];
        for k in obj.keys() {
            if !KNOWN.contains(&k.as_str()) {
                errs.push(format!("{k}: unknown field"));
            }
        }
        match obj.get("schema_version").and_then(Value::as_u64) {
            Some(v) if v == SCHEMA_VERSION as u64 => {}
            Some(v) => errs.push(format!("schema_version: unsupported version {v}, expected {SCHEMA_VERSION}")),
            None => errs.push("schema_version: missing or not an integer".into()),
        }
        if let Some(s) = obj.get("seed") {
            if s.as_u64().is_none() {
                errs.push("seed: must be an unsigned 64-bit integer".into());
            }
        }
        let weight: Option<WeightFamily> = part(&mut errs, obj, "weight");
        let weight = weight.and_then(|w| match w.validate() {
            Ok(()) => SmoothWeight::new(w).map_err(|e| errs.push(format!("weight: {e}"))).ok(),
            Err(e) => {
                errs.push(format!("weight: {e}"));
                None
            }
        });
        let seq: Option<MultiplierKind> = part(&mut errs, obj, "sequence");
        if let Some(Err(e)) = seq.map(|s| s.validate()) {
            errs.push(format!("sequence: {e}"));
        }
        let window_a = obj.get("window_a").map_or(Some(DEFAULT_WINDOW_A), Value::as_f64);
        match window_a {
            Some(a) if a > 0.0 && a.is_finite() => {}
            _ => errs.push("window_a: must be a positive number".into()),
        }
        let max_index = match obj.get("max_index") {
            None | Some(Value::Null) => None,
            Some(v) => match v.as_u64() {
                Some(n) => Some(n),
                None => {
                    errs.push("max_index: must be an unsigned integer".into());
                    None
                }
            },
        };
        let mut exps = Vec::new();
        match obj.get("experiments") {
            None => {}
            Some(Value::Array(list)) => {
                for (i, e) in list.iter().enumerate() {
                    match serde_json::from_value::<Experiment>(e.clone()) {
                        Ok(x) => exps.push((i, x)),
                        Err(err) => errs.push(format!("experiments[{i}]: {err}")),
                    }
                }
            }
            Some(_) => errs.push("experiments: must be an array".into()),
        }
        for (i, e) in &exps {
            check_experiment(&mut errs, &format!("experiments[{i}]"), e, seq.as_ref());
        }
        if let (Some(w), Some(a)) = (&weight, window_a) {
            let rho = |g: &GaugeKind, r: f64| {
                zerolab::equidist::RadialGauge::new(*g, w.clone()).ok()?.rho(r).ok()
            };
            for (i, e) in &exps {
                let Some(r) = e.max_radius(rho) else { continue };
                match SeriesSpec::required_max_index(w, r, a) {
                    Ok(need) => {
                        if let Some(have) = max_index {
                            if have < need {
                                errs.push(format!(
                                    "max_index: {have} is below the {need} required by experiments[{i}] at |z| = {r}"
                                ));
                            }
                        }
                        if need > MAX_LEN {
                            errs.push(format!("experiments[{i}]: radius {r} needs {need} multipliers, above {MAX_LEN}"));
                        }
                    }
                    Err(e) => errs.push(format!("experiments[{i}]: radius {r}: {e}")),
                }
            }
        }
        // Anything the field checks let through but the typed parse rejects,
        // e.g. duplicate keys, which the generic JSON value silently merges.
        if errs.is_empty() {
            if let Err(e) = serde_json::from_str::<Self>(text) {
                errs.push(format!("config: {e}"));
            }
        }
        errs
    }

    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

fn check_experiment(errs: &mut Vec<String>, at: &str, e: &Experiment, seq: Option<&MultiplierKind>) {
    let radius_ok = |errs: &mut Vec<String>, field: String, r: f64| {
        if !(r > 1.0 && r.is_finite()) {
            errs.push(format!("{field}: radius must exceed 1, got {r}"));
        }
    };
    match e {
        Experiment::ZeroCountSweep { radii, min_samples } => {
            if radii.is_empty() {
                errs.push(format!("{at}.radii: empty"));
            }
            for (j, &r) in radii.iter().enumerate() {
                radius_ok(errs, format!("{at}.radii[{j}]"), r);
            }
            if *min_samples < 4 {
                errs.push(format!("{at}.min_samples: must be at least 4"));
            }
        }
        Experiment::SectorEquidist { r1, r2, sectors, gauge, tau, c } => {
            radius_ok(errs, format!("{at}.r1"), *r1);
            if !(r2 > r1) {
                errs.push(format!("{at}.r2: must exceed r1"));
            }
            if *sectors == 0 {
                errs.push(format!("{at}.sectors: must be at least 1"));
            }
            gauge_ok(errs, &format!("{at}.gauge"), gauge);
            positive(errs, &format!("{at}.tau"), *tau);
            positive(errs, &format!("{at}.c"), *c);
        }
        Experiment::LocalDisks { disks, r_min, r_max, gauge, radius_factor, tau, c } => {
            if *disks == 0 {
                errs.push(format!("{at}.disks: must be at least 1"));
            }
            radius_ok(errs, format!("{at}.r_min"), *r_min);
            if !(r_max >= r_min) {
                errs.push(format!("{at}.r_max: must be at least r_min"));
            }
            gauge_ok(errs, &format!("{at}.gauge"), gauge);
            positive(errs, &format!("{at}.radius_factor"), *radius_factor);
            if let Some(t) = tau {
                positive(errs, &format!("{at}.tau"), *t);
            }
            if let Some(c) = c {
                positive(errs, &format!("{at}.c"), *c);
            }
        }
        Experiment::CorrelationSuite { x, h_max } => {
            if *x == 0 {
                errs.push(format!("{at}.x: must be at least 1"));
            }
            if x.saturating_add(*h_max) >= MAX_LEN {
                errs.push(format!("{at}.x: x + h_max must stay below {MAX_LEN}"));
            }
        }
        Experiment::SpectralSuite { model, grid, intervals } => {
            if *grid == 0 && *intervals == 0 {
                errs.push(format!("{at}.grid: grid and intervals cannot both be 0"));
            }
            match *model {
                SpectralSpec::TmRiesz { depth } if depth == 0 || depth > 24 => {
                    errs.push(format!("{at}.model.depth: must lie in 1..=24, got {depth}"))
                }
                SpectralSpec::SqfreeAtoms { d_max: 0 } => errs.push(format!("{at}.model.d_max: must be at least 1")),
                SpectralSpec::SqfreeAtoms { d_max } => {
                    // The table writes every atom explicitly.
                    let atoms: u64 = if d_max > 1 << 20 {
                        u64::MAX
                    } else {
                        (1..=d_max).filter(|&d| sqfree_value(d) == 1).map(|d| d * d).sum()
                    };
                    if atoms > MAX_EXPLICIT_ATOMS {
                        errs.push(format!("{at}.model.d_max: {d_max} expands to more than {MAX_EXPLICIT_ATOMS} atoms"));
                    }
                }
                SpectralSpec::Empirical { n } => {
                    if n == 0 {
                        errs.push(format!("{at}.model.n: must be at least 1"));
                    }
                    if *intervals > 0 && n > MAX_EMPIRICAL_MASS_N {
                        errs.push(format!("{at}.model.n: interval masses need n <= {MAX_EMPIRICAL_MASS_N}"));
                    }
                    if *intervals > 0 && seq.is_some_and(|s| s.is_random() || matches!(s, MultiplierKind::Quadratic { .. })) {
                        errs.push(format!("{at}.intervals: interval masses of empirical spectra need a real deterministic sequence"));
                    }
                }
                _ => {}
            }
        }
        Experiment::WeylScan { radii, thetas } => {
            if radii.is_empty() {
                errs.push(format!("{at}.radii: empty"));
            }
            for (j, &r) in radii.iter().enumerate() {
                radius_ok(errs, format!("{at}.radii[{j}]"), r);
            }
            if *thetas == 0 {
                errs.push(format!("{at}.thetas: must be at least 1"));
            }
        }
        Experiment::ConditionCheck { model, radius, beta, beta_exponent, q, threshold, lambda_max, .. } => {
            radius_ok(errs, format!("{at}.radius"), *radius);
            match (beta, beta_exponent) {
                (Some(b), None) if *b > 0.0 && *b < 1.0 => {}
                (Some(b), None) => errs.push(format!("{at}.beta: must lie in (0, 1), got {b}")),
                (None, Some(e)) => positive(errs, &format!("{at}.beta_exponent"), *e),
                _ => errs.push(format!("{at}.beta: give exactly one of beta and beta_exponent")),
            }
            if !(*q > 1.0) {
                errs.push(format!("{at}.q: must exceed 1, got {q}"));
            }
            positive(errs, &format!("{at}.threshold"), *threshold);
            positive(errs, &format!("{at}.lambda_max"), *lambda_max);
            match *model {
                ConditionModelSpec::Squarefree { eps } if !(0.0..1.0 / 3.0).contains(&eps) => {
                    errs.push(format!("{at}.model.eps: must lie in [0, 1/3), got {eps}"))
                }
                ConditionModelSpec::ThueMorse { c0 } => positive(errs, &format!("{at}.model.c0"), c0),
                _ => {}
            }
        }
        Experiment::TransportCheck { source, disks, r_min, r_max, disk_radius_max, gauge, tau, tau_max } => {
            if *disks == 0 {
                errs.push(format!("{at}.disks: must be at least 1"));
            }
            if !(*r_min >= 0.0 && r_max >= r_min) {
                errs.push(format!("{at}.r_max: need 0 <= r_min <= r_max"));
            }
            positive(errs, &format!("{at}.disk_radius_max"), *disk_radius_max);
            gauge_ok(errs, &format!("{at}.gauge"), gauge);
            if !(*tau >= 0.0) {
                errs.push(format!("{at}.tau: must be non-negative"));
            }
            positive(errs, &format!("{at}.tau_max"), *tau_max);
            match *source {
                TransportSource::Lattice { half_width } if half_width <= 0 || half_width > 2000 => {
                    errs.push(format!("{at}.source.half_width: must lie in 1..=2000"))
                }
                TransportSource::Zeros { coverage, cell_diameter } => {
                    radius_ok(errs, format!("{at}.source.coverage"), coverage);
                    positive(errs, &format!("{at}.source.cell_diameter"), cell_diameter);
                }
                _ => {}
            }
        }
        Experiment::LatticeBaseline { regions, random, r_max } => {
            if regions.is_empty() && *random == 0 {
                errs.push(format!("{at}.regions: no regions and no random ones requested"));
            }
            positive(errs, &format!("{at}.r_max"), *r_max);
        }
    }
}
