use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{count_with, winding_count, Analytic, Contour, Shape};
use crate::error::{domain, Error, Result};
use crate::numeric::e_turns;

/// Largest region count [`localize_zeros`] accepts.
pub const MAX_LOCALIZE_COUNT: u64 = 10_000;

const SPLIT_ATTEMPTS: u32 = 8;
const MAX_DEPTH: u32 = 64;

/// A disk containing `multiplicity` zeros, the winding number of its cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Enclosure {
    pub center: Complex64,
    pub radius: f64,
    pub multiplicity: u64,
    /// False when every attempted split of the cell ran into zeros on its edges.
    pub resolved: bool,
}

/// Subdivides `region` until cells with non-zero winding have diameter at most
/// `target_diameter`. Cells are disjoint and their multiplicities add up to the
/// region count.
pub fn localize_zeros(f: &dyn Analytic, region: &Contour, target_diameter: f64) -> Result<Vec<Enclosure>> {
    if !(target_diameter > 0.0) {
        return Err(domain(format!("target cell diameter must be positive, got {target_diameter}")));
    }
    if matches!(region.shape, Shape::LogCircle { .. }) {
        return Err(domain("localization needs a circle or sector given by its radius"));
    }
    let root = winding_count(f, region)?;
    if root.count > MAX_LOCALIZE_COUNT {
        return Err(Error::Precondition(format!(
            "region holds {} zeros, localization is limited to {MAX_LOCALIZE_COUNT}",
            root.count
        )));
    }
    let mut out = descend(f, root.region, root.count, target_diameter, 0)?;
    out.sort_by(|a, b| a.center.re.total_cmp(&b.center.re).then(a.center.im.total_cmp(&b.center.im)));
    Ok(out)
}

fn descend(f: &dyn Analytic, cell: Contour, count: u64, target: f64, depth: u32) -> Result<Vec<Enclosure>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let (center, radius) = enclosing_disk(&cell.shape);
    if 2.0 * radius <= target || depth >= MAX_DEPTH {
        return Ok(vec![Enclosure { center, radius, multiplicity: count, resolved: true }]);
    }
    for attempt in 0..SPLIT_ATTEMPTS {
        let children = split(&cell, attempt);
        // Children must tile the cell exactly, so they are counted unperturbed.
        let counts: Vec<Result<u64>> = children.par_iter().map(|c| count_with(f, c, 0).map(|r| r.count)).collect();
        let counts: Vec<u64> = match counts.into_iter().collect::<Result<Vec<_>>>() {
            Ok(c) => c,
            Err(Error::OnContourZero { .. }) => continue,
            Err(e) => return Err(e),
        };
        if counts.iter().sum::<u64>() != count {
            continue;
        }
        let parts: Vec<Vec<Enclosure>> = children
            .into_par_iter()
            .zip(counts)
            .map(|(c, n)| descend(f, c, n, target, depth + 1))
            .collect::<Result<_>>()?;
        return Ok(parts.into_iter().flatten().collect());
    }
    Ok(vec![Enclosure { center, radius, multiplicity: count, resolved: false }])
}

/// A disk splits into its inner half-radius disk and four quarter annulus sectors; a
/// sector into 2×2 sub-sectors. Later attempts shift the cut lines.
fn split(cell: &Contour, attempt: u32) -> Vec<Contour> {
    let frac = 0.5 + 0.037 * attempt as f64;
    let turn = 0.0113 * attempt as f64;
    let with = |shape| Contour { shape, min_samples: cell.min_samples };
    match cell.shape {
        Shape::Circle { center, r } => {
            let ri = r * frac;
            let mut out = vec![with(Shape::Circle { center, r: ri })];
            out.extend((0..4).map(|j| {
                let t0 = turn + j as f64 / 4.0;
                with(Shape::AnnulusSector { center, r1: ri, r2: r, theta1: t0, theta2: t0 + 0.25 })
            }));
            out
        }
        Shape::AnnulusSector { center, r1, r2, theta1, theta2 } => {
            let rm = r1 + frac * (r2 - r1);
            let tm = theta1 + frac * (theta2 - theta1);
            let mut out = Vec::with_capacity(4);
            for (a, b) in [(r1, rm), (rm, r2)] {
                for (s, t) in [(theta1, tm), (tm, theta2)] {
                    out.push(with(Shape::AnnulusSector { center, r1: a, r2: b, theta1: s, theta2: t }));
                }
            }
            out
        }
        Shape::LogCircle { .. } => unreachable!("rejected before subdivision"),
    }
}

/// A disk covering the cell (not necessarily the smallest one).
fn enclosing_disk(shape: &Shape) -> (Complex64, f64) {
    match *shape {
        Shape::Circle { center, r } => (center, r),
        Shape::LogCircle { log_r } => (Complex64::new(0.0, 0.0), log_r.exp()),
        Shape::AnnulusSector { center, r1, r2, theta1, theta2 } => {
            let mid = center + 0.5 * (r1 + r2) * e_turns(0.5 * (theta1 + theta2));
            // Distance to a sector is maximized on its boundary; arcs are sampled finely
            // enough for the chord error to stay below 1e-4 of the radius.
            let n = 64;
            let mut far = 0.0f64;
            for i in 0..=n {
                let t = theta1 + (theta2 - theta1) * i as f64 / n as f64;
                for r in [r1, r2] {
                    far = far.max((center + r * e_turns(t) - mid).norm());
                }
            }
            let chord = r2 * (std::f64::consts::TAU * (theta2 - theta1) / n as f64).powi(2) / 8.0;
            (mid, far + chord)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::LogPolynomial;

    fn from_roots(roots: &[Complex64]) -> LogPolynomial {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &z in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, &a) in c.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * z;
            }
            c = next;
        }
        LogPolynomial::from_coeffs(&c)
    }

    #[test]
    fn monomial_single_enclosure() {
        let p = from_roots(&[Complex64::new(0.0, 0.0); 3]);
        let e = localize_zeros(&p, &Contour::circle(Complex64::new(0.0, 0.0), 1.0), 0.05).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].multiplicity, 3);
        assert!(e[0].center.norm() <= e[0].radius);
    }

    #[test]
    fn synthetic_roots_are_enclosed() {
        let roots: Vec<Complex64> =
            (0..12).map(|k| (0.3 + 0.05 * k as f64) * e_turns(k as f64 * 0.61803398875)).collect();
        let p = from_roots(&roots);
        let e = localize_zeros(&p, &Contour::circle(Complex64::new(0.0, 0.0), 1.0), 0.02).unwrap();
        assert_eq!(e.iter().map(|x| x.multiplicity).sum::<u64>(), 12);
        assert_eq!(e.len(), 12);
        for z in &roots {
            assert!(e.iter().any(|x| (x.center - z).norm() <= x.radius), "{z} not enclosed");
        }
    }
}
