//! Zero counting by the argument principle and localization by subdivision.

mod io;
mod localize;

pub use io::{read_zeros_csv, write_zeros_csv};
pub use localize::{localize_zeros, Enclosure};

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, numeric, Error, Result};
use crate::evaluator::{LogPolynomial, SeriesSpec};
use crate::numeric::e_turns;

pub const DEFAULT_MIN_SAMPLES: usize = 256;

/// Radial perturbation factor applied when a contour runs into a zero.
pub const PERTURB_FACTOR: f64 = 1.0 + 1e-6;
pub const MAX_PERTURBATIONS: u32 = 8;

/// `min |F|` below this fraction of the RMS of `|F|` on the contour counts as a hit.
const NEAR_ZERO_REL: f64 = 1e-12;
const MAX_BISECTIONS: u32 = 40;
/// Initial density, samples per turn of expected phase.
const SAMPLES_PER_TURN: f64 = 8.0;
const PROBE_POINTS: usize = 64;
const LOG_R_FLOOR: f64 = -700.0;

/// Evaluator along one circle, angle in turns.
pub type CircleEval<'a> = Box<dyn Fn(f64) -> Result<Complex64> + Sync + 'a>;

/// Anything we can count zeros of: evaluated in polar form and normalized by a
/// positive function of `|z|`, which leaves the argument untouched.
pub trait Analytic: Sync {
    fn eval_log_polar(&self, log_r: f64, theta: f64) -> Result<Complex64>;

    /// Expected phase turns of `F` per turn of `z` around the origin at radius `e^{log_r}`.
    fn phase_rate(&self, log_r: f64) -> f64;

    /// Evaluator along the circle `|z| = e^{log_r}`; override to reuse per-radius work.
    fn on_circle<'a>(&'a self, log_r: f64) -> Result<CircleEval<'a>> {
        Ok(Box::new(move |t| self.eval_log_polar(log_r, t)))
    }

    fn gamma_mass(&self, _shape: &Shape) -> Option<f64> {
        None
    }
}

impl Analytic for SeriesSpec {
    fn eval_log_polar(&self, log_r: f64, theta: f64) -> Result<Complex64> {
        SeriesSpec::eval_log_polar(self, log_r, theta)
    }

    fn phase_rate(&self, log_r: f64) -> f64 {
        self.weight().nu(log_r.exp()).unwrap_or(0.0)
    }

    fn on_circle<'a>(&'a self, log_r: f64) -> Result<CircleEval<'a>> {
        let r = log_r.exp();
        if self.has_window(r) {
            let slice = self.slice(r)?;
            return Ok(Box::new(move |t| Ok(slice.eval(t))));
        }
        Ok(Box::new(move |t| SeriesSpec::eval_log_polar(self, log_r, t)))
    }

    fn gamma_mass(&self, shape: &Shape) -> Option<f64> {
        let w = self.weight();
        match *shape {
            Shape::Circle { center, r } => w.gamma_disk(center, r).ok(),
            Shape::LogCircle { log_r } => w.nu(log_r.exp()).ok(),
            Shape::AnnulusSector { center, r1, r2, theta1, theta2 } if center == Complex64::new(0.0, 0.0) => {
                Some((theta2 - theta1) * (w.nu(r2).ok()? - w.nu(r1).ok()?))
            }
            Shape::AnnulusSector { .. } => None,
        }
    }
}

impl Analytic for LogPolynomial {
    fn eval_log_polar(&self, log_r: f64, theta: f64) -> Result<Complex64> {
        Ok(LogPolynomial::eval_log_polar(self, log_r, theta))
    }

    fn phase_rate(&self, log_r: f64) -> f64 {
        self.central_index(log_r) as f64
    }
}

/// A closed region bounded by arcs and segments; angles in turns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Circle { center: Complex64, r: f64 },
    /// Origin-centred circle of radius `e^{log_r}`, for radii beyond `f64`.
    LogCircle { log_r: f64 },
    /// `{center + ρ e(θ) : r1 ≤ ρ ≤ r2, θ1 ≤ θ ≤ θ2}`.
    AnnulusSector { center: Complex64, r1: f64, r2: f64, theta1: f64, theta2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub shape: Shape,
    pub min_samples: usize,
}

impl Contour {
    pub fn circle(center: Complex64, r: f64) -> Self {
        Self::new(Shape::Circle { center, r })
    }

    pub fn log_circle(log_r: f64) -> Self {
        Self::new(Shape::LogCircle { log_r })
    }

    pub fn annulus_sector(r1: f64, r2: f64, theta1: f64, theta2: f64) -> Self {
        Self::sector_about(Complex64::new(0.0, 0.0), r1, r2, theta1, theta2)
    }

    pub fn sector_about(center: Complex64, r1: f64, r2: f64, theta1: f64, theta2: f64) -> Self {
        Self::new(Shape::AnnulusSector { center, r1, r2, theta1, theta2 })
    }

    fn new(shape: Shape) -> Self {
        Self { shape, min_samples: DEFAULT_MIN_SAMPLES }
    }

    pub fn with_min_samples(mut self, n: usize) -> Self {
        self.min_samples = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.shape {
            Shape::Circle { center, r } => r > 0.0 && r.is_finite() && center.re.is_finite() && center.im.is_finite(),
            Shape::LogCircle { log_r } => log_r.is_finite(),
            Shape::AnnulusSector { center, r1, r2, theta1, theta2 } => {
                r1 >= 0.0
                    && r1 <= r2
                    && r2.is_finite()
                    && theta1.is_finite()
                    && theta1 <= theta2
                    && theta2 - theta1 <= 1.0
                    && center.re.is_finite()
                    && center.im.is_finite()
            }
        };
        if !ok {
            return Err(domain(format!("malformed contour {:?}", self.shape)));
        }
        if self.min_samples < 4 {
            return Err(domain(format!("min_samples must be at least 4, got {}", self.min_samples)));
        }
        Ok(())
    }

    /// Zero area: nothing to count.
    pub fn is_degenerate(&self) -> bool {
        matches!(self.shape, Shape::AnnulusSector { r1, r2, theta1, theta2, .. } if r1 == r2 || theta1 == theta2)
    }

    /// The `k`-th deterministic perturbation: radii scaled by `PERTURB_FACTOR^k`, sector
    /// edges also turned by `k·10⁻⁶` turns (a radial scaling never moves a zero off a ray).
    pub fn perturbed(&self, k: u32) -> Self {
        let f = PERTURB_FACTOR.powi(k as i32);
        let shape = match self.shape {
            Shape::Circle { center, r } => Shape::Circle { center, r: r * f },
            Shape::LogCircle { log_r } => Shape::LogCircle { log_r: log_r + f.ln() },
            Shape::AnnulusSector { center, r1, r2, theta1, theta2 } => {
                let turn = if theta2 - theta1 < 1.0 { k as f64 * 1e-6 } else { 0.0 };
                Shape::AnnulusSector { center, r1: r1 * f, r2: r2 * f, theta1: theta1 + turn, theta2: theta2 + turn }
            }
        };
        Self { shape, ..*self }
    }

    /// Positively oriented boundary pieces.
    fn pieces(&self) -> Vec<Piece> {
        match self.shape {
            Shape::Circle { center, r } => vec![Piece::arc(center, r, 0.0, 1.0)],
            Shape::LogCircle { log_r } => vec![Piece::OriginArc { log_r, t0: 0.0, t1: 1.0 }],
            Shape::AnnulusSector { center, r1, r2, theta1, theta2 } => {
                let at = |r: f64, t: f64| center + r * e_turns(t);
                let mut out = Vec::with_capacity(4);
                if theta2 - theta1 >= 1.0 {
                    out.push(Piece::arc(center, r2, theta1, theta1 + 1.0));
                    if r1 > 0.0 {
                        out.push(Piece::arc(center, r1, theta1 + 1.0, theta1));
                    }
                } else {
                    out.push(Piece::Segment { a: at(r1, theta1), b: at(r2, theta1) });
                    out.push(Piece::arc(center, r2, theta1, theta2));
                    out.push(Piece::Segment { a: at(r2, theta2), b: at(r1, theta2) });
                    if r1 > 0.0 {
                        out.push(Piece::arc(center, r1, theta2, theta1));
                    }
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    OriginArc { log_r: f64, t0: f64, t1: f64 },
    Arc { center: Complex64, r: f64, t0: f64, t1: f64 },
    Segment { a: Complex64, b: Complex64 },
}

impl Piece {
    fn arc(center: Complex64, r: f64, t0: f64, t1: f64) -> Self {
        if center == Complex64::new(0.0, 0.0) {
            Self::OriginArc { log_r: r.ln(), t0, t1 }
        } else {
            Self::Arc { center, r, t0, t1 }
        }
    }

    /// `(ln|z|, arg z / 2π)` at parameter `s ∈ [0, 1]`.
    fn polar(&self, s: f64) -> (f64, f64) {
        let z = match *self {
            Self::OriginArc { log_r, t0, t1 } => return (log_r, t0 + s * (t1 - t0)),
            Self::Arc { center, r, t0, t1 } => center + r * e_turns(t0 + s * (t1 - t0)),
            Self::Segment { a, b } => a + s * (b - a),
        };
        let n = z.norm();
        let log_r = if n > 0.0 { n.ln().max(LOG_R_FLOOR) } else { LOG_R_FLOOR };
        (log_r, z.arg() / TAU)
    }

    fn length_hint(&self) -> f64 {
        match *self {
            Self::OriginArc { t0, t1, .. } => (t1 - t0).abs(),
            Self::Arc { r, t0, t1, .. } => TAU * r * (t1 - t0).abs(),
            Self::Segment { a, b } => (b - a).norm(),
        }
    }
}

/// Turns of phase expected along a piece: `ν·Δarg z` plus the drift of `ν` itself.
fn expected_turns(f: &dyn Analytic, piece: &Piece) -> f64 {
    let pts: Vec<(f64, f64)> = (0..=PROBE_POINTS).map(|i| piece.polar(i as f64 / PROBE_POINTS as f64)).collect();
    let rate: Vec<f64> = pts.iter().map(|p| f.phase_rate(p.0)).collect();
    pts.windows(2)
        .zip(rate.windows(2))
        .map(|(p, q)| {
            let mut d = (p[1].1 - p[0].1).abs();
            d = d.min(1.0 - d);
            q[0].max(q[1]) * d + (q[1] - q[0]).abs()
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroCountReport {
    /// The contour actually integrated over, after any perturbation.
    pub region: Contour,
    pub count: u64,
    /// γ-mass of the region, `None` where it is not available in closed form.
    pub gamma_mass: Option<f64>,
    /// `min |F|` over the samples, relative to their RMS.
    pub min_boundary_modulus: f64,
    /// Deepest local bisection below the initial grid.
    pub refinement_depth: u32,
    pub samples: usize,
    pub perturbations: u32,
}

struct Winding {
    turns: i64,
    min_rel: f64,
    depth: u32,
    samples: usize,
}

enum Attempt {
    Done(Winding),
    NearZero(f64),
}

/// Accumulated phase of one sample interval after local bisection.
struct Step {
    arg: f64,
    depth: u32,
    evals: usize,
    min_mod: f64,
    sum_sq: f64,
}

fn refine<E>(eval: &E, piece: &Piece, s0: f64, f0: Complex64, s1: f64, f1: Complex64, depth: u32) -> Result<Option<Step>>
where
    E: Fn(&Piece, f64) -> Result<Complex64>,
{
    let d = (f1 / f0).arg();
    if d.abs() < FRAC_PI_2 {
        return Ok(Some(Step { arg: d, depth, evals: 0, min_mod: f64::INFINITY, sum_sq: 0.0 }));
    }
    if depth >= MAX_BISECTIONS {
        return Ok(None);
    }
    let sm = 0.5 * (s0 + s1);
    let fm = eval(piece, sm)?;
    if fm.norm() == 0.0 || !fm.is_finite() {
        return Ok(None);
    }
    let Some(a) = refine(eval, piece, s0, f0, sm, fm, depth + 1)? else { return Ok(None) };
    let Some(b) = refine(eval, piece, sm, fm, s1, f1, depth + 1)? else { return Ok(None) };
    Ok(Some(Step {
        arg: a.arg + b.arg,
        depth: a.depth.max(b.depth),
        evals: a.evals + b.evals + 1,
        min_mod: a.min_mod.min(b.min_mod).min(fm.norm()),
        sum_sq: a.sum_sq + b.sum_sq + fm.norm_sqr(),
    }))
}

fn wind_once(f: &dyn Analytic, contour: &Contour) -> Result<Attempt> {
    let pieces = contour.pieces();
    let total_len: f64 = pieces.iter().map(Piece::length_hint).sum();
    let circle_evals: Vec<Option<CircleEval<'_>>> = pieces
        .iter()
        .map(|p| match *p {
            Piece::OriginArc { log_r, .. } => f.on_circle(log_r).map(Some),
            _ => Ok(None),
        })
        .collect::<Result<_>>()?;
    let eval = |idx: usize, piece: &Piece, s: f64| -> Result<Complex64> {
        let (log_r, theta) = piece.polar(s);
        match &circle_evals[idx] {
            Some(g) => g(theta),
            None => f.eval_log_polar(log_r, theta),
        }
    };

    let mut turns_arg = 0.0;
    let mut depth = 0;
    let mut samples = 0;
    let mut min_mod = f64::INFINITY;
    let mut sum_sq = 0.0;
    for (idx, piece) in pieces.iter().enumerate() {
        let share = if total_len > 0.0 { piece.length_hint() / total_len } else { 1.0 / pieces.len() as f64 };
        let by_phase = (SAMPLES_PER_TURN * expected_turns(f, piece)).ceil() as usize;
        let n = by_phase.max((contour.min_samples as f64 * share).ceil() as usize).max(8);
        let values: Vec<Complex64> =
            (0..=n).into_par_iter().map(|i| eval(idx, piece, i as f64 / n as f64)).collect::<Result<_>>()?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(numeric(format!("non-finite value on the contour {:?}", contour.shape)));
        }
        samples += n + 1;
        for v in &values {
            min_mod = min_mod.min(v.norm());
            sum_sq += v.norm_sqr();
        }
        if min_mod == 0.0 {
            return Ok(Attempt::NearZero(0.0));
        }
        let eval_piece = |p: &Piece, s: f64| eval(idx, p, s);
        let steps: Vec<Option<Step>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let (s0, s1) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
                refine(&eval_piece, piece, s0, values[i], s1, values[i + 1], 0)
            })
            .collect::<Result<_>>()?;
        for st in steps {
            let Some(st) = st else { return Ok(Attempt::NearZero(min_mod / (sum_sq / samples as f64).sqrt())) };
            turns_arg += st.arg;
            depth = depth.max(st.depth);
            samples += st.evals;
            min_mod = min_mod.min(st.min_mod);
            sum_sq += st.sum_sq;
        }
    }
    let rms = (sum_sq / samples as f64).sqrt();
    let min_rel = min_mod / rms;
    if !(min_rel >= NEAR_ZERO_REL) {
        return Ok(Attempt::NearZero(min_rel));
    }
    let w = turns_arg / TAU;
    let turns = w.round();
    if (w - turns).abs() > 1e-3 {
        return Err(numeric(format!("winding {w} is not an integer on {:?}", contour.shape)));
    }
    Ok(Attempt::Done(Winding { turns: turns as i64, min_rel, depth, samples }))
}

fn report(f: &dyn Analytic, contour: Contour, w: Winding, perturbations: u32) -> Result<ZeroCountReport> {
    if w.turns < 0 {
        return Err(numeric(format!("negative winding {} on {:?}", w.turns, contour.shape)));
    }
    Ok(ZeroCountReport {
        gamma_mass: f.gamma_mass(&contour.shape),
        region: contour,
        count: w.turns as u64,
        min_boundary_modulus: w.min_rel,
        refinement_depth: w.depth,
        samples: w.samples,
        perturbations,
    })
}

/// Counts with at most `max_perturbations` deterministic perturbations of the contour.
pub(crate) fn count_with(f: &dyn Analytic, contour: &Contour, max_perturbations: u32) -> Result<ZeroCountReport> {
    contour.validate()?;
    let mut last = f64::NAN;
    for k in 0..=max_perturbations {
        let c = contour.perturbed(k);
        match wind_once(f, &c)? {
            Attempt::Done(w) => return report(f, c, w, k),
            Attempt::NearZero(m) => last = m,
        }
    }
    Err(Error::OnContourZero { attempts: max_perturbations, min_modulus: last })
}

/// Number of zeros inside the contour, from the unwrapped phase of `F` along it.
pub fn winding_count(f: &dyn Analytic, contour: &Contour) -> Result<ZeroCountReport> {
    count_with(f, contour, MAX_PERTURBATIONS)
}

/// [`winding_count`] with the γ-mass attached; degenerate sectors report 0 directly.
pub fn count_region(f: &dyn Analytic, region: &Contour) -> Result<ZeroCountReport> {
    region.validate()?;
    if region.is_degenerate() {
        return Ok(ZeroCountReport {
            region: *region,
            count: 0,
            gamma_mass: Some(0.0),
            min_boundary_modulus: f64::INFINITY,
            refinement_depth: 0,
            samples: 0,
            perturbations: 0,
        });
    }
    winding_count(f, region)
}

/// Sum of several counts; fails unless every member succeeded.
pub fn count_partition(f: &dyn Analytic, parts: &[Contour]) -> Result<Vec<ZeroCountReport>> {
    parts.par_iter().map(|c| count_region(f, c)).collect()
}
