//! Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.
//! Runs without the libtest harness so the lines always reach stdout.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zerolab::constants::FrozenConstants;
use zerolab::correlations::squarefree::{sqfree_correlation_sum, SIX_OVER_PI_SQ};
use zerolab::correlations::{
    anticoncentration_mc, autocorr, chowla_moment_mc, correlation_growth_ratio, empirical_spectral_density,
    rademacher_exact_probability, tm_riesz_density, tm_sigma, tm_sigma_f64, ChowlaRegime, MirskyConstant, SqfreeAtoms,
    TmCorrelationSums,
};
use zerolab::equidist::{equidist_report, gauss_lattice_check, GaugeKind, LatticeRegion, RadialGauge, RegionCount, TestRegion};
use zerolab::evaluator::{SeriesSpec, DEFAULT_WINDOW_A};
use zerolab::numeric::e_turns;
use zerolab::sequences::{generate, sqfree_value, MultiplierKind, PrimeDistribution};
use zerolab::weights::SmoothWeight;
use zerolab::zeros::{count_region, winding_count, Contour};
use zerolab::Result;

// AC1
const WEIGHT_REL_TOL: f64 = 1e-8;
// AC3
const TM_X: u64 = 1 << 20;
const TM_H_MAX: u64 = 256;
const TM_BOUND: f64 = 8.0;
// AC4
const SQ_X: u64 = 1_000_000;
const SQ_SHIFTS: [u64; 7] = [0, 1, 2, 4, 9, 12, 36];
const SQ_BOUND: f64 = 5.0;
const SQ_EXPONENT: f64 = 0.68;
// AC5
const GRS_M_MAX: u64 = 1 << 20;
const GRS_H_MAX: u64 = 256;
const GRS_CALIBRATION_CEILING: f64 = 10.0;
// AC6
const RIESZ_MAX_DEPTH: u32 = 14;
const RIESZ_POINTS: usize = 1000;
const RIESZ_REL_TOL: f64 = 1e-9;
// AC7
const ATOMS_D_MAX: u64 = 1000;
const ATOMS_MASS_TOL: f64 = 1e-3;
const ATOMS_ACF_X: u64 = 1 << 22;
const ATOMS_ACF_H_MAX: u64 = 36;
const ATOMS_ACF_TOL: f64 = 1e-3;
// AC8
const LAPLACE_POINTS: usize = 30;
const LAPLACE_R: (f64, f64) = (1.5, 4.0);
const LAPLACE_MAX_INDEX: u64 = 400;
// AC9
const DEGREE_CASES: usize = 20;
const DEGREE_MAX: u64 = 800;
// AC10
const GEF_SEEDS: u64 = 5;
const GEF_RADII: [f64; 3] = [10.0, 15.0, 20.0];
const GEF_EACH_TOL: f64 = 0.1;
const GEF_MEAN_TOL: f64 = 0.05;
// AC11
const SECTOR_ANNULUS: (f64, f64) = (20.0, 30.0);
const SECTORS: u32 = 8;
const SECTOR_TOL: f64 = 0.15;
// AC12
const LOCAL_DISKS: usize = 40;
const LOCAL_MIN_PASS: usize = 38;
const LOCAL_CENTERS: (f64, f64) = (15.0, 25.0);
const LOCAL_RADIUS_FACTOR: f64 = 3.0;
// AC13
const WITNESS_CASES: usize = 10;
const WITNESS_SIGMA: (f64, f64) = (1e3, 1e4);
const WITNESS_FACTOR: f64 = 0.1;
const WITNESS_GRID: (usize, usize) = (16, 64);
// AC14
const CHOWLA_X: u64 = 100_000;
const CHOWLA_ETA: f64 = 0.05;
const CHOWLA_SHIFTS: [u64; 3] = [1, 3, 7];
const CHOWLA_TRIALS: u64 = 100;
const CHOWLA_DIAGONAL_RATIO: f64 = 10.0;
// AC15
const ANTI_TRIALS: u64 = 20_000;
const ANTI_SIGMAS: f64 = 3.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn gef_weight() -> SmoothWeight {
    SmoothWeight::log_family(0.5).unwrap()
}

fn series(kind: MultiplierKind, seed: u64, r_max: f64) -> Result<SeriesSpec> {
    let w = gef_weight();
    let n = SeriesSpec::required_max_index(&w, r_max, DEFAULT_WINDOW_A)?;
    SeriesSpec::new(w, generate(kind, 0, n, seed)?, DEFAULT_WINDOW_A)
}

fn origin() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn ac1() -> Result<Outcome> {
    let w = gef_weight();
    let mut worst = 0.0f64;
    for i in 1..=100 {
        let r = 1e3f64.powf(i as f64 / 100.0);
        let r2 = r * r;
        let dn = (w.nu(r)? - (r2 - 1.0)).abs() / r2;
        let dm = (w.log_mu(r)? - ((r2 - 1.0) / 2.0 - r.ln())).abs() / r2;
        worst = worst.max(dn).max(dm);
    }
    outcome(worst <= WEIGHT_REL_TOL, format!("max relative error {worst:.2e} <= {WEIGHT_REL_TOL:e}"))
}

fn ac2() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut regions = vec![LatticeRegion::Disk { center: origin(), r: 10.0 }];
    for i in 0..100 {
        let c = Complex64::new(rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0));
        if i % 2 == 0 {
            regions.push(LatticeRegion::Disk { center: c, r: rng.gen_range(0.05..50.0) });
        } else {
            let (w, h) = (rng.gen_range(0.05..100.0), rng.gen_range(0.05..100.0));
            regions.push(LatticeRegion::Rectangle { x0: c.re, y0: c.im, x1: c.re + w, y1: c.im + h });
        }
    }
    let reps = regions.iter().map(gauss_lattice_check).collect::<Result<Vec<_>>>()?;
    let bad = reps.iter().filter(|r| !r.pass).count();
    outcome(bad == 0 && reps[0].count == 317, format!("disk r=10 count {}, {bad}/100 random regions violate", reps[0].count))
}

fn ac3() -> Result<Outcome> {
    let oracle = tm_sigma(1) == num_rational::Ratio::new(-1, 3) && tm_sigma(3) == num_rational::Ratio::new(1, 3);
    let seq = generate(MultiplierKind::ThueMorse, 0, TM_X + TM_H_MAX, 0)?;
    let mut sums = TmCorrelationSums::new();
    let x = TM_X as f64;
    let mut worst = 0.0f64;
    let mut mismatch = 0;
    for h in 0..=TM_H_MAX {
        let s = sums.get(TM_X, h);
        // The recurrence and the generated sequence must agree exactly.
        if (autocorr(&seq, TM_X, h)?.re * x - s as f64).abs() > 1e-6 {
            mismatch += 1;
        }
        let dev = (s as f64 - tm_sigma_f64(h) * x).abs();
        let bound = TM_BOUND * h as f64 * (x + 1.0).ln();
        worst = worst.max(if bound > 0.0 { dev / bound } else if dev == 0.0 { 0.0 } else { f64::INFINITY });
    }
    outcome(
        oracle && mismatch == 0 && worst <= 1.0,
        format!("max |S - sigma x| / (8 h log(x+1)) = {worst:.3}; sigma(1) = -1/3, sigma(3) = 1/3: {oracle}"),
    )
}

fn ac4() -> Result<Outcome> {
    let ind: Vec<bool> = (0..=SQ_X + 36).map(|n| sqfree_value(n) == 1).collect();
    let m = MirskyConstant::new(MirskyConstant::DEFAULT_CUTOFF)?;
    let x = SQ_X as f64;
    let bound = SQ_BOUND * x.powf(SQ_EXPONENT);
    let mut worst = 0.0f64;
    for h in SQ_SHIFTS {
        let s = sqfree_correlation_sum(&ind, SQ_X, h)? as f64;
        worst = worst.max((s - m.d_of_h(h) * x).abs() / bound);
    }
    outcome(
        worst <= 1.0 && (m.d_of_h(0) - 6.0 / (PI * PI)).abs() < 1e-15,
        format!("max |S - D(h) x| / (5 x^0.68) = {worst:.3}"),
    )
}

fn ac5() -> Result<Outcome> {
    let k = FrozenConstants::builtin();
    let seq = generate(MultiplierKind::Grs, 0, GRS_M_MAX + GRS_H_MAX + 1, 0)?;
    let mut worst = (0.0, 0, 0);
    for h in 1..=GRS_H_MAX {
        let (r, m) = correlation_growth_ratio(&seq, GRS_M_MAX, h)?;
        if r > worst.0 {
            worst = (r, h, m);
        }
    }
    outcome(
        worst.0 <= k.grs_growth && k.grs_growth <= GRS_CALIBRATION_CEILING,
        format!("max ratio {:.3} (h = {}, M = {}) vs frozen {}", worst.0, worst.1, worst.2, k.grs_growth),
    )
}

fn ac6() -> Result<Outcome> {
    let seq = generate(MultiplierKind::ThueMorse, 0, 1 << RIESZ_MAX_DEPTH, 0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let ts: Vec<f64> = (0..RIESZ_POINTS).map(|_| rng.gen()).collect();
    let mut worst = 0.0f64;
    for n in 0..=RIESZ_MAX_DEPTH {
        for &t in &ts {
            let e = empirical_spectral_density(&seq, 1 << n, t)?;
            let r = tm_riesz_density(t, n);
            // Relative error with an absolute floor near the zeros of the product.
            worst = worst.max((e - r).abs() / r.max(1e-6));
        }
    }
    outcome(worst <= RIESZ_REL_TOL, format!("max relative error {worst:.2e} over n <= {RIESZ_MAX_DEPTH}"))
}

fn ac7() -> Result<Outcome> {
    let atoms = SqfreeAtoms::new(ATOMS_D_MAX, MirskyConstant::new(MirskyConstant::DEFAULT_CUTOFF)?)?;
    let mass_err = (atoms.total_mass() - SIX_OVER_PI_SQ).abs();
    let seq = generate(MultiplierKind::Squarefree, 0, ATOMS_ACF_X + ATOMS_ACF_H_MAX, 0)?;
    let mut worst = 0.0f64;
    for h in 0..=ATOMS_ACF_H_MAX {
        worst = worst.max((autocorr(&seq, ATOMS_ACF_X, h)?.re - atoms.fourier(h as i64)).abs());
    }
    outcome(
        mass_err <= ATOMS_MASS_TOL && worst <= ATOMS_ACF_TOL,
        format!("|mass - 6/pi^2| = {mass_err:.2e}, max |acf(h) - atom transform(h)| = {worst:.2e}"),
    )
}

fn ac8() -> Result<Outcome> {
    let k = FrozenConstants::builtin();
    let w = gef_weight();
    let kinds = [
        MultiplierKind::IidSteinhaus,
        MultiplierKind::IidRademacher,
        MultiplierKind::Constant,
        MultiplierKind::Grs,
        MultiplierKind::ThueMorse,
        MultiplierKind::RandMult { base: PrimeDistribution::Steinhaus },
        MultiplierKind::Quadratic { alpha: std::f64::consts::SQRT_2 },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut k1, mut k2) = (0.0f64, 0.0f64);
    for kind in kinds {
        let spec = SeriesSpec::new(w.clone(), generate(kind, 0, LAPLACE_MAX_INDEX, 8)?, DEFAULT_WINDOW_A)?;
        for _ in 0..LAPLACE_POINTS {
            let r = rng.gen_range(LAPLACE_R.0..LAPLACE_R.1);
            let theta: f64 = rng.gen();
            let (nu, sigma) = w.nu_sigma(r)?;
            // Δ = |φ''| / φ'² at ν.
            let delta = w.phi_second(nu)?.abs() / w.phi_prime(nu)?.powi(2);
            let diff = (spec.full_normalized(r, theta)? - spec.weyl_sum(r, theta)?).norm();
            k1 = k1.max(diff / (delta * sigma.ln().powf(1.5)));
            k2 = k2.max(spec.eval_normalized(r, theta)?.norm() / sigma.sqrt());
        }
    }
    outcome(
        k1 <= k.laplace_k && k2 <= k.laplace_upper_k,
        format!("K = {k1:.3} (frozen {}), K' = {k2:.3} (frozen {})", k.laplace_k, k.laplace_upper_k),
    )
}

fn ac9() -> Result<Outcome> {
    let w = gef_weight();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let kinds = [MultiplierKind::IidGaussian, MultiplierKind::IidSteinhaus, MultiplierKind::IidRademacher];
    let mut bad = Vec::new();
    for i in 0..DEGREE_CASES {
        let d = rng.gen_range(10..=DEGREE_MAX);
        let kind = kinds[i % kinds.len()];
        let spec = SeriesSpec::new(w.clone(), generate(kind, 0, d + 1, i as u64)?, DEFAULT_WINDOW_A)?;
        let p = spec.full_truncation()?;
        let c = Contour::log_circle(p.log_cauchy_bound());
        let base = winding_count(&p, &c)?;
        let doubled = winding_count(&p, &c.with_min_samples(2 * base.samples))?;
        if p.degree() != d || base.count != d || doubled.count != d {
            bad.push(format!("d = {d}: {} / {}", base.count, doubled.count));
        }
    }
    outcome(bad.is_empty(), format!("{} of {DEGREE_CASES} truncations miscounted {bad:?}", bad.len()))
}

fn ac10() -> Result<Outcome> {
    let w = gef_weight();
    let mut counts = vec![Vec::new(); GEF_RADII.len()];
    for seed in 0..GEF_SEEDS {
        let spec = series(MultiplierKind::IidGaussian, seed, 20.5)?;
        for (j, &r) in GEF_RADII.iter().enumerate() {
            counts[j].push(count_region(&spec, &Contour::circle(origin(), r))?.count as f64);
        }
    }
    let mut pass = true;
    let mut parts = Vec::new();
    for (j, &r) in GEF_RADII.iter().enumerate() {
        let nu = w.nu(r)?;
        let each = counts[j].iter().map(|c| (c - nu).abs() / nu).fold(0.0, f64::max);
        let mean = (counts[j].iter().sum::<f64>() / counts[j].len() as f64 - nu).abs() / nu;
        pass &= each <= GEF_EACH_TOL && mean <= GEF_MEAN_TOL;
        parts.push(format!("R={r}: worst {each:.3}, mean {mean:.3}"));
    }
    outcome(pass, parts.join("; "))
}

fn ac11() -> Result<Outcome> {
    let (r1, r2) = SECTOR_ANNULUS;
    let spec = series(MultiplierKind::Quadratic { alpha: std::f64::consts::SQRT_2 }, 0, r2 + 0.5)?;
    let w = gef_weight();
    let expected = (w.nu(r2)? - w.nu(r1)?) / SECTORS as f64;
    let mut counts = Vec::new();
    for j in 0..SECTORS {
        let s = Contour::annulus_sector(r1, r2, j as f64 / SECTORS as f64, (j + 1) as f64 / SECTORS as f64);
        counts.push(count_region(&spec, &s)?.count);
    }
    let worst = counts.iter().map(|&c| (c as f64 - expected).abs() / expected).fold(0.0, f64::max);
    outcome(
        worst <= SECTOR_TOL && (expected - 62.5).abs() < 1e-9,
        format!("counts {counts:?} vs {expected}; worst {worst:.3}"),
    )
}

fn ac12() -> Result<Outcome> {
    let k = FrozenConstants::builtin();
    let w = gef_weight();
    let g = RadialGauge::new(GaugeKind::SqrtLog, w.clone())?;
    let r_top = LOCAL_CENTERS.1 + LOCAL_RADIUS_FACTOR * g.rho(LOCAL_CENTERS.1)? + 0.5;
    let spec = series(MultiplierKind::IidGaussian, 12, r_top)?;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut rows = Vec::new();
    for _ in 0..LOCAL_DISKS {
        let m = rng.gen_range(LOCAL_CENTERS.0..LOCAL_CENTERS.1);
        let region = TestRegion::Disk { center: m * e_turns(rng.gen()), r: LOCAL_RADIUS_FACTOR * g.rho(m)? };
        let count = count_region(&spec, &region.contour())?.count;
        rows.push(RegionCount { region, count, gamma: region.gamma_mass(&w)? });
    }
    let rep = equidist_report(&rows, &g, k.local_disks_tau, k.local_disks_c)?;
    outcome(
        rep.passed >= LOCAL_MIN_PASS,
        format!("{}/{LOCAL_DISKS} disks within C = {} (tau = {}); fitted C = {:.4}", rep.passed, k.local_disks_c, k.local_disks_tau, rep.min_c),
    )
}

fn ac13() -> Result<Outcome> {
    let w = gef_weight();
    let r_top = (WITNESS_SIGMA.1 / 2.0).sqrt() * 1.1;
    let spec = series(MultiplierKind::Quadratic { alpha: std::f64::consts::SQRT_2 }, 0, r_top)?;
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst = f64::INFINITY;
    for _ in 0..WITNESS_CASES {
        let sigma = WITNESS_SIGMA.0 * (WITNESS_SIGMA.1 / WITNESS_SIGMA.0).powf(rng.gen());
        // σ = 2R² for this weight.
        let r = (sigma / 2.0).sqrt();
        debug_assert!((w.sigma(r).unwrap() - sigma).abs() < 1e-6 * sigma);
        let beta = (sigma.ln() / sigma).sqrt();
        let wit = spec.weyl_witness(r, rng.gen(), beta, WITNESS_GRID.0, WITNESS_GRID.1)?;
        worst = worst.min(wit.modulus / (WITNESS_FACTOR * sigma.powf(0.25)));
    }
    outcome(worst >= 1.0, format!("min |W| / (0.1 sigma^(1/4)) = {worst:.2}"))
}

fn ac14() -> Result<Outcome> {
    let kind = MultiplierKind::RandMult { base: PrimeDistribution::Rademacher };
    let mut worst = 0.0f64;
    let mut bound = 0.0;
    for h in CHOWLA_SHIFTS {
        let rep = chowla_moment_mc(kind, CHOWLA_X, CHOWLA_ETA, h, CHOWLA_TRIALS, 14, ChowlaRegime::default())?;
        worst = worst.max(rep.mean_sq / rep.bound);
        bound = rep.bound;
    }
    let diag = chowla_moment_mc(kind, CHOWLA_X, CHOWLA_ETA, 0, CHOWLA_TRIALS, 14, ChowlaRegime::default())?;
    let ratio = diag.mean_sq / bound;
    outcome(
        worst <= 1.0 && ratio >= CHOWLA_DIAGONAL_RATIO,
        format!("max mean/bound {worst:.3}; diagonal / bound = {ratio:.0}"),
    )
}

fn ac15() -> Result<Outcome> {
    let z = Complex64::new(0.0, 0.0);
    let exact8 = rademacher_exact_probability(8, 0.0, 0.5, z)?;
    let mut pass = exact8 == 70.0 / 256.0;
    let mut parts = vec![format!("P8 = {exact8}")];
    for n in [8u64, 64] {
        // At θ = 0 the ε = 1/2 window around 0 only catches S = 0, so P = C(n, n/2) / 2^n.
        let p = (1..=n / 2).fold(1.0, |acc, k| acc * (n / 2 + k) as f64 / k as f64) / 2f64.powi(n as i32);
        let mc = anticoncentration_mc(MultiplierKind::IidRademacher, n, 0.0, 0.5, &[z], None, ANTI_TRIALS, 15)?;
        let se = (p * (1.0 - p) / ANTI_TRIALS as f64).sqrt();
        let z_score = (mc.estimate - p).abs() / se;
        pass &= z_score <= ANTI_SIGMAS;
        parts.push(format!("n = {n}: MC {:.4} vs {p:.4} ({z_score:.2} se)", mc.estimate));
    }
    outcome(pass, parts.join("; "))
}

fn main() {
    type Criterion = (&'static str, fn() -> Result<Outcome>, Duration);
    let secs = Duration::from_secs;
    let criteria: [Criterion; 15] = [
        ("AC1", ac1, secs(1)),
        ("AC2", ac2, secs(5)),
        ("AC3", ac3, secs(30)),
        ("AC4", ac4, secs(30)),
        ("AC5", ac5, secs(60)),
        ("AC6", ac6, secs(20)),
        ("AC7", ac7, secs(60)),
        ("AC8", ac8, secs(60)),
        ("AC9", ac9, secs(120)),
        ("AC10", ac10, secs(600)),
        ("AC11", ac11, secs(600)),
        ("AC12", ac12, secs(900)),
        ("AC13", ac13, secs(300)),
        ("AC14", ac14, secs(300)),
        ("AC15", ac15, secs(30)),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| a.starts_with("AC")).collect();
    let mut failed = 0;
    for (name, f, limit) in criteria {
        if !filter.is_empty() && !filter.iter().any(|a| a == name) {
            continue;
        }
        let t = Instant::now();
        let res = f();
        let el = t.elapsed();
        let (pass, detail) = match res {
            Ok(o) => (o.pass && el <= limit, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{name:<5} {} [{:.2}s / {}s] {detail}",
            if pass { "PASS" } else { "FAIL" },
            el.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
