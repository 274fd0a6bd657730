//! Executes an [`ExperimentConfig`], writing one table per experiment plus `summary.json`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use zerolab::constants::{sha256_hex, FrozenConstants};
use zerolab::correlations::squarefree::{MirskyConstant, SIX_OVER_PI_SQ};
use zerolab::correlations::{check_lemma5a_conditions, tm_sigma_f64, CorrelationModel, SpectralModel, TestFunction};
use zerolab::equidist::{
    equidist_report, gauss_lattice_check, lebesgue_disk, transport_check, GaugeKind, LatticeRegion, PointMeasure,
    RadialGauge, RegionCount, TestRegion, TransportOptions,
};
use zerolab::evaluator::SeriesSpec;
use zerolab::numeric::{e_turns, hash64};
use zerolab::sequences::{generate, MultiplierKind, SequenceBuffer};
use zerolab::weights::SmoothWeight;
use zerolab::zeros::{count_region, localize_zeros, write_zeros_csv, Contour};
use zerolab::{Error, Result};

use crate::config::{ConditionModelSpec, Experiment, ExperimentConfig, SpectralSpec, TestFunctionSpec, TransportSource};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Provenance stamped into every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunMeta {
    pub version: String,
    pub config_sha256: String,
    pub constants_sha256: String,
    pub seed: u64,
}

impl RunMeta {
    fn header(&self) -> String {
        format!(
            "# zerolab {} config_sha256={} constants_sha256={} seed={}\n",
            self.version, self.config_sha256, self.constants_sha256, self.seed
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentSummary {
    pub index: usize,
    #[serde(rename = "type")]
    pub kind: String,
    pub files: Vec<String>,
    /// `None` for purely descriptive tables.
    pub pass: Option<bool>,
    pub details: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    #[serde(flatten)]
    pub meta: RunMeta,
    pub experiments: Vec<ExperimentSummary>,
}

pub struct Runner {
    config: ExperimentConfig,
    constants: FrozenConstants,
    meta: RunMeta,
    out: PathBuf,
    weight: SmoothWeight,
    series: OnceLock<SeriesSpec>,
}

impl Runner {
    /// `constants_text` is hashed verbatim, so the summary pins the exact file used.
    pub fn new(config: ExperimentConfig, constants_text: &str, out: impl Into<PathBuf>) -> Result<Self> {
        let constants = FrozenConstants::parse(constants_text)?;
        let weight = SmoothWeight::new(config.weight.clone())?;
        let meta = RunMeta {
            version: VERSION.to_string(),
            config_sha256: sha256_hex(config.to_canonical_json().as_bytes()),
            constants_sha256: sha256_hex(constants_text.as_bytes()),
            seed: config.seed,
        };
        Ok(Self { config, constants, meta, out: out.into(), weight, series: OnceLock::new() })
    }

    pub fn meta(&self) -> &RunMeta {
        &self.meta
    }

    /// Runs every experiment in order. An empty list writes nothing.
    pub fn run(&self) -> Result<RunSummary> {
        let mut experiments = Vec::with_capacity(self.config.experiments.len());
        if !self.config.experiments.is_empty() {
            fs::create_dir_all(&self.out)?;
        }
        for (i, e) in self.config.experiments.iter().enumerate() {
            experiments.push(self.run_one(i, e)?);
        }
        let summary = RunSummary { meta: self.meta.clone(), experiments };
        if !summary.experiments.is_empty() {
            let f = BufWriter::new(File::create(self.out.join("summary.json"))?);
            serde_json::to_writer_pretty(f, &summary)?;
        }
        Ok(summary)
    }

    fn series(&self) -> Result<&SeriesSpec> {
        if let Some(s) = self.series.get() {
            return Ok(s);
        }
        let rho = |g: &GaugeKind, r: f64| RadialGauge::new(*g, self.weight.clone()).ok()?.rho(r).ok();
        let mut need = 1u64;
        for e in &self.config.experiments {
            if let Some(r) = e.max_radius(rho) {
                need = need.max(SeriesSpec::required_max_index(&self.weight, r, self.config.window_a)?);
            }
        }
        let n = self.config.max_index.unwrap_or(need);
        let seq = generate(self.config.sequence, 0, n, self.config.seed)?;
        let spec = SeriesSpec::new(self.weight.clone(), seq, self.config.window_a)?;
        Ok(self.series.get_or_init(|| spec))
    }

    fn gauge(&self, kind: GaugeKind) -> Result<RadialGauge> {
        RadialGauge::new(kind, self.weight.clone())
    }

    fn rng(&self, index: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(hash64(self.config.seed, 0x5eed_0000 + index as u64))
    }

    fn path(&self, index: usize, e: &Experiment, suffix: &str) -> (PathBuf, String) {
        let name = format!("{index:02}_{}{suffix}", e.type_name());
        (self.out.join(&name), name)
    }

    fn csv(&self, path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
        let mut f = BufWriter::new(File::create(path)?);
        f.write_all(self.meta.header().as_bytes())?;
        Ok(csv::Writer::from_writer(f))
    }

    fn json(&self, path: &Path, body: Value) -> Result<()> {
        let doc = json!({ "meta": self.meta, "data": body });
        let f = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(f, &doc)?;
        Ok(())
    }

    fn run_one(&self, index: usize, e: &Experiment) -> Result<ExperimentSummary> {
        let (csv_path, csv_name) = self.path(index, e, ".csv");
        let mut files = vec![csv_name];
        let (pass, details) = match e {
            Experiment::ZeroCountSweep { radii, min_samples } => {
                let spec = self.series()?;
                let reports: Vec<_> = radii
                    .par_iter()
                    .map(|&r| count_region(spec, &Contour::circle(Complex64::new(0.0, 0.0), r).with_min_samples(*min_samples)))
                    .collect::<Result<_>>()?;
                let mut w = self.csv(&csv_path)?;
                w.write_record(["r", "count", "nu", "deviation", "relative", "min_boundary_modulus", "samples"])?;
                let mut worst = 0.0f64;
                for (r, rep) in radii.iter().zip(&reports) {
                    let nu = self.weight.nu(*r)?;
                    let dev = rep.count as f64 - nu;
                    worst = worst.max((dev / nu).abs());
                    w.write_record([
                        r.to_string(),
                        rep.count.to_string(),
                        nu.to_string(),
                        dev.to_string(),
                        (dev / nu).to_string(),
                        rep.min_boundary_modulus.to_string(),
                        rep.samples.to_string(),
                    ])?;
                }
                w.flush()?;
                (None, json!({ "max_relative_deviation": worst }))
            }
            Experiment::SectorEquidist { r1, r2, sectors, gauge, tau, c } => {
                let spec = self.series()?;
                let regions: Vec<TestRegion> = (0..*sectors)
                    .map(|j| TestRegion::AnnulusSector {
                        r1: *r1,
                        r2: *r2,
                        theta1: j as f64 / *sectors as f64,
                        theta2: (j + 1) as f64 / *sectors as f64,
                    })
                    .collect();
                let rows = count_rows(spec, &regions)?;
                let rep = equidist_report(&rows, &self.gauge(*gauge)?, *tau, *c)?;
                rep.write_csv(self.csv(&csv_path)?.into_inner().map_err(|e| Error::Io(e.into_error()))?)?;
                let worst = rows.iter().map(|r| (r.count as f64 - r.gamma).abs() / r.gamma).fold(0.0, f64::max);
                (
                    Some(rep.passed == rep.rows.len()),
                    json!({ "min_c": rep.min_c, "passed": rep.passed, "regions": rep.rows.len(), "max_relative_deviation": worst }),
                )
            }
            Experiment::LocalDisks { disks, r_min, r_max, gauge, radius_factor, tau, c } => {
                let spec = self.series()?;
                let g = self.gauge(*gauge)?;
                let mut rng = self.rng(index);
                let regions: Vec<TestRegion> = (0..*disks)
                    .map(|_| {
                        let m = if r_max > r_min { rng.gen_range(*r_min..*r_max) } else { *r_min };
                        let center = m * e_turns(rng.gen());
                        Ok(TestRegion::Disk { center, r: radius_factor * g.rho(m)? })
                    })
                    .collect::<Result<_>>()?;
                let rows = count_rows(spec, &regions)?;
                let tau = tau.unwrap_or(self.constants.local_disks_tau);
                let c = c.unwrap_or(self.constants.local_disks_c);
                let rep = equidist_report(&rows, &g, tau, c)?;
                rep.write_csv(self.csv(&csv_path)?.into_inner().map_err(|e| Error::Io(e.into_error()))?)?;
                (
                    Some(rep.passed == rep.rows.len()),
                    json!({ "min_c": rep.min_c, "passed": rep.passed, "regions": rep.rows.len(), "tau": tau, "c": c }),
                )
            }
            Experiment::CorrelationSuite { x, h_max } => {
                let seq = generate(self.config.sequence, 0, x + h_max + 1, self.config.seed)?;
                let rows = correlation_rows(&seq, *x, *h_max, &self.constants)?;
                let mut w = self.csv(&csv_path)?;
                w.write_record(["h", "empirical", "predicted", "abs_diff", "bound", "pass"])?;
                for r in &rows {
                    let opt = |v: Option<f64>| v.map_or(String::new(), |v| v.to_string());
                    w.write_record([
                        r.h.to_string(),
                        r.empirical.to_string(),
                        opt(r.predicted),
                        opt(r.predicted.map(|p| (r.empirical - p).abs())),
                        opt(r.bound),
                        r.pass.map_or(String::new(), |p| p.to_string()),
                    ])?;
                }
                w.flush()?;
                let checked: Vec<bool> = rows.iter().filter_map(|r| r.pass).collect();
                let pass = if checked.is_empty() { None } else { Some(checked.iter().all(|&p| p)) };
                (pass, json!({ "rows": rows.len(), "checked": checked.len(), "failed": checked.iter().filter(|&&p| !p).count() }))
            }
            Experiment::SpectralSuite { model, grid, intervals } => {
                let m = match *model {
                    SpectralSpec::Lebesgue => SpectralModel::Lebesgue,
                    SpectralSpec::TmRiesz { depth } => SpectralModel::tm_riesz(depth)?,
                    SpectralSpec::SqfreeAtoms { d_max } => SpectralModel::sqfree_atoms(d_max)?,
                    SpectralSpec::Empirical { n } => {
                        SpectralModel::empirical(&generate(self.config.sequence, 0, n, self.config.seed)?, n)?
                    }
                };
                let mut w = self.csv(&csv_path)?;
                w.write_record(["t", "density", "interval_end", "interval_mass"])?;
                let rows = (*grid).max(*intervals);
                let density: Vec<Option<f64>> =
                    (0..*grid).into_par_iter().map(|i| m.density((i as f64 + 0.5) / *grid as f64)).collect();
                let masses: Vec<f64> = (0..*intervals)
                    .map(|j| m.interval_mass(j as f64 / *intervals as f64, (j + 1) as f64 / *intervals as f64))
                    .collect::<Result<_>>()?;
                for i in 0..rows {
                    let (t, d) = match density.get(i) {
                        Some(d) => (((i as f64 + 0.5) / *grid as f64).to_string(), d.map_or(String::new(), |v| v.to_string())),
                        None => (String::new(), String::new()),
                    };
                    let (b, mass) = match masses.get(i) {
                        Some(v) => (((i + 1) as f64 / *intervals as f64).to_string(), v.to_string()),
                        None => (String::new(), String::new()),
                    };
                    w.write_record([t, d, b, mass])?;
                }
                w.flush()?;
                let (json_path, json_name) = self.path(index, e, ".json");
                self.json(&json_path, m.to_json()?)?;
                files.push(json_name);
                (None, json!({ "kind": m.kind(), "total_interval_mass": masses.iter().sum::<f64>() }))
            }
            Experiment::WeylScan { radii, thetas } => {
                let spec = self.series()?;
                let mut w = self.csv(&csv_path)?;
                w.write_record(["r", "theta", "sigma", "weyl_abs", "normalized_abs", "sigma_quarter"])?;
                let rows: Vec<Vec<[f64; 6]>> = radii
                    .par_iter()
                    .map(|&r| {
                        let sigma = self.weight.sigma(r)?;
                        let ws = spec.gaussian_slice(r)?;
                        let fs = spec.slice(r)?;
                        Ok((0..*thetas)
                            .map(|j| {
                                let t = j as f64 / *thetas as f64;
                                [r, t, sigma, ws.eval(t).norm(), fs.eval(t).norm(), sigma.powf(0.25)]
                            })
                            .collect())
                    })
                    .collect::<Result<_>>()?;
                for row in rows.iter().flatten() {
                    w.write_record(row.iter().map(f64::to_string))?;
                }
                w.flush()?;
                (None, json!({ "rows": rows.iter().map(Vec::len).sum::<usize>() }))
            }
            Experiment::ConditionCheck { model, radius, beta, beta_exponent, q, threshold, lambda_max, test_function } => {
                let sigma = self.weight.sigma(*radius)?;
                let beta = match (beta, beta_exponent) {
                    (Some(b), _) => *b,
                    (None, Some(e)) => sigma.powf(-e),
                    (None, None) => return Err(Error::Validation(vec!["beta: missing".into()])),
                };
                let model = match *model {
                    ConditionModelSpec::Squarefree { eps } => CorrelationModel::mirsky(eps),
                    ConditionModelSpec::ThueMorse { c0 } => CorrelationModel::thue_morse(c0),
                };
                let g = match test_function {
                    TestFunctionSpec::Plateau => TestFunction::plateau(),
                    TestFunctionSpec::Bump => TestFunction::bump(),
                };
                let rep = check_lemma5a_conditions(&self.weight, *radius, beta, *q, &model, &g, *threshold, *lambda_max)?;
                let mut w = self.csv(&csv_path)?;
                w.write_record(["condition", "lhs", "rhs", "ratio", "pass"])?;
                for (name, c) in [("a", &rep.a), ("b", &rep.b), ("c", &rep.c), ("d", &rep.d)] {
                    w.write_record([name.to_string(), c.lhs.to_string(), c.rhs.to_string(), c.ratio.to_string(), c.pass.to_string()])?;
                }
                w.flush()?;
                (Some(rep.all_pass()), serde_json::to_value(&rep)?)
            }
            Experiment::TransportCheck { source, disks, r_min, r_max, disk_radius_max, gauge, tau, tau_max } => {
                let g = self.gauge(*gauge)?;
                let mut rng = self.rng(index);
                let family: Vec<(Complex64, f64)> = (0..*disks)
                    .map(|_| {
                        let m = if r_max > r_min { rng.gen_range(*r_min..*r_max) } else { *r_min };
                        (m * e_turns(rng.gen()), rng.gen_range(0.0..*disk_radius_max).max(1e-3 * disk_radius_max))
                    })
                    .collect();
                let rep = match *source {
                    TransportSource::Lattice { half_width } => {
                        let lat = PointMeasure::lattice(half_width);
                        let opts = TransportOptions { tau: *tau, tau_max: *tau_max, coverage: Some(half_width as f64) };
                        transport_check(&family, &g, |c, r| Ok(lat.disk_mass(c, r)), |c, r| Ok(lebesgue_disk(c, r)), opts)?
                    }
                    TransportSource::Zeros { coverage, cell_diameter } => {
                        let spec = self.series()?;
                        let zeros = localize_zeros(spec, &Contour::circle(Complex64::new(0.0, 0.0), coverage), cell_diameter)?;
                        let (zpath, zname) = self.path(index, e, "_zeros.csv");
                        let mut f = BufWriter::new(File::create(zpath)?);
                        f.write_all(self.meta.header().as_bytes())?;
                        write_zeros_csv(&zeros, f)?;
                        files.push(zname);
                        let pm = PointMeasure::new(zeros.iter().map(|z| (z.center, z.multiplicity)).collect());
                        let opts = TransportOptions { tau: *tau, tau_max: *tau_max, coverage: Some(coverage) };
                        let w = &self.weight;
                        transport_check(&family, &g, |c, r| Ok(pm.disk_mass(c, r)), |c, r| w.gamma_disk(c, r), opts)?
                    }
                };
                let mut w = self.csv(&csv_path)?;
                w.write_record(["cx", "cy", "r", "r_enlarged", "gamma1", "gamma", "gamma1_enlarged", "gamma_enlarged", "pass"])?;
                for r in &rep.rows {
                    w.write_record([
                        r.center.re.to_string(),
                        r.center.im.to_string(),
                        r.r.to_string(),
                        r.r_enlarged.to_string(),
                        r.gamma1.to_string(),
                        r.gamma.to_string(),
                        r.gamma1_enlarged.to_string(),
                        r.gamma_enlarged.to_string(),
                        r.pass.to_string(),
                    ])?;
                }
                w.flush()?;
                (Some(rep.all_pass), json!({ "tau": rep.tau, "tau_min": rep.tau_min, "disks": rep.rows.len() }))
            }
            Experiment::LatticeBaseline { regions, random, r_max } => {
                let mut rng = self.rng(index);
                let mut all = regions.clone();
                for i in 0..*random {
                    let c = Complex64::new(rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0));
                    if i % 2 == 0 {
                        all.push(LatticeRegion::Disk { center: c, r: rng.gen_range(0.1..*r_max) });
                    } else {
                        let (w, h) = (rng.gen_range(0.1..2.0 * r_max), rng.gen_range(0.1..2.0 * r_max));
                        all.push(LatticeRegion::Rectangle { x0: c.re, y0: c.im, x1: c.re + w, y1: c.im + h });
                    }
                }
                let reps: Vec<_> = all.par_iter().map(gauss_lattice_check).collect::<Result<_>>()?;
                let mut w = self.csv(&csv_path)?;
                w.write_record(["kind", "params", "count", "area", "deviation", "bound", "pass"])?;
                for (k, r) in all.iter().zip(&reps) {
                    let (kind, params) = match *k {
                        LatticeRegion::Disk { center, r } => ("disk", format!("{} {} {}", center.re, center.im, r)),
                        LatticeRegion::Rectangle { x0, y0, x1, y1 } => ("rectangle", format!("{x0} {y0} {x1} {y1}")),
                    };
                    w.write_record([
                        kind.to_string(),
                        params,
                        r.count.to_string(),
                        r.area.to_string(),
                        r.deviation().to_string(),
                        r.bound.to_string(),
                        r.pass.to_string(),
                    ])?;
                }
                w.flush()?;
                (Some(reps.iter().all(|r| r.pass)), json!({ "regions": reps.len() }))
            }
        };
        Ok(ExperimentSummary { index, kind: e.type_name().to_string(), files, pass, details })
    }
}

fn count_rows(spec: &SeriesSpec, regions: &[TestRegion]) -> Result<Vec<RegionCount>> {
    regions
        .par_iter()
        .map(|k| {
            let rep = count_region(spec, &k.contour())?;
            // The count may come from a perturbed contour; γ is taken for the region as asked.
            Ok(RegionCount { region: *k, count: rep.count, gamma: k.gamma_mass(spec.weight())? })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationRow {
    pub h: u64,
    /// `(1/x) Σ_{n<x} ξ(n) conj ξ(n+h)`, real part.
    pub empirical: f64,
    pub predicted: Option<f64>,
    pub bound: Option<f64>,
    pub pass: Option<bool>,
}

/// Predicted limit and admissible deviation of the normalized correlation at `x`, where known.
fn prediction(kind: MultiplierKind, h: u64, x: u64, mirsky: &OnceLock<MirskyConstant>, k: &FrozenConstants) -> Option<(f64, f64)> {
    let xf = x as f64;
    let exact = 1e-12;
    let sqfree_bound = 5.0 * xf.powf(0.68) / xf;
    match kind {
        MultiplierKind::ThueMorse => Some((tm_sigma_f64(h), 8.0 * h.max(1) as f64 * (xf + 1.0).ln() / xf)),
        MultiplierKind::Squarefree => {
            let m = mirsky.get_or_init(|| MirskyConstant::new(MirskyConstant::DEFAULT_CUTOFF).expect("default cutoff"));
            Some((m.d_of_h(h), sqfree_bound))
        }
        MultiplierKind::Constant => Some((1.0, exact)),
        MultiplierKind::Grs if h == 0 => Some((1.0, exact)),
        MultiplierKind::Grs => Some((0.0, k.grs_growth * h as f64 * (1.0 + xf.ln()) / xf)),
        MultiplierKind::Quadratic { .. } if h == 0 => Some((1.0, exact)),
        MultiplierKind::Quadratic { alpha } => {
            let gap = (Complex64::new(1.0, 0.0) - e_turns(-2.0 * alpha * h as f64)).norm();
            Some((0.0, 2.0 / gap / xf + exact))
        }
        MultiplierKind::IidRademacher | MultiplierKind::IidSteinhaus if h == 0 => Some((1.0, exact)),
        MultiplierKind::IidRademacher | MultiplierKind::IidSteinhaus | MultiplierKind::IidGaussian => {
            Some((if h == 0 { 1.0 } else { 0.0 }, 5.0 / xf.sqrt()))
        }
        MultiplierKind::RandMult { .. } if h == 0 => Some((SIX_OVER_PI_SQ, sqfree_bound)),
        MultiplierKind::RandComplMult { .. } if h == 0 => Some((1.0, exact)),
        MultiplierKind::RandMult { .. } | MultiplierKind::RandComplMult { .. } => None,
    }
}

pub fn correlation_rows(seq: &SequenceBuffer, x: u64, h_max: u64, k: &FrozenConstants) -> Result<Vec<CorrelationRow>> {
    let mirsky = OnceLock::new();
    (0..=h_max)
        .into_par_iter()
        .map(|h| {
            let empirical = zerolab::correlations::autocorr(seq, x, h)?.re;
            let p = prediction(seq.kind(), h, x, &mirsky, k);
            Ok(CorrelationRow {
                h,
                empirical,
                predicted: p.map(|p| p.0),
                bound: p.map(|p| p.1),
                pass: p.map(|(v, b)| (empirical - v).abs() <= b),
            })
        })
        .collect()
}
