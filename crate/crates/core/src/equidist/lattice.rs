use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LatticeRegion {
    /// Closed disk.
    Disk { center: Complex64, r: f64 },
    /// Half-open `[x0, x1) × [y0, y1)`.
    Rectangle { x0: f64, y0: f64, x1: f64, y1: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeReport {
    pub count: u64,
    pub area: f64,
    /// Area of the `√2`-neighborhood of the boundary.
    pub bound: f64,
    pub pass: bool,
}

impl LatticeReport {
    pub fn deviation(&self) -> f64 {
        (self.count as f64 - self.area).abs()
    }
}

/// `#(ℤ² ∩ K)` by enumeration, against `m(K)` and `m((∂K)_{+√2})`.
pub fn gauss_lattice_check(k: &LatticeRegion) -> Result<LatticeReport> {
    let (count, area, bound) = match *k {
        LatticeRegion::Disk { center, r } => {
            if !(r > 0.0 && r.is_finite() && center.re.is_finite() && center.im.is_finite()) {
                return Err(domain(format!("bad lattice disk {k:?}")));
            }
            let mut count = 0u64;
            let r2 = r * r;
            for x in (center.re - r).ceil() as i64..=(center.re + r).floor() as i64 {
                let dx = x as f64 - center.re;
                let h = (r2 - dx * dx).max(0.0).sqrt();
                // Widen the candidate range by one and decide each end point exactly.
                let mut lo = (center.im - h).ceil() as i64 - 1;
                let mut hi = (center.im + h).floor() as i64 + 1;
                let inside = |y: i64| {
                    let dy = y as f64 - center.im;
                    dx * dx + dy * dy <= r2
                };
                while lo <= hi && !inside(lo) {
                    lo += 1;
                }
                while hi >= lo && !inside(hi) {
                    hi -= 1;
                }
                if lo <= hi {
                    count += (hi - lo + 1) as u64;
                }
            }
            let s = SQRT_2;
            let inner = (r - s).max(0.0);
            (count, PI * r2, PI * ((r + s).powi(2) - inner * inner))
        }
        LatticeRegion::Rectangle { x0, y0, x1, y1 } => {
            if !(x0 < x1 && y0 < y1 && [x0, y0, x1, y1].iter().all(|v| v.is_finite())) {
                return Err(domain(format!("bad lattice rectangle {k:?}")));
            }
            let nx = (x1.ceil() - x0.ceil()).max(0.0) as u64;
            let ny = (y1.ceil() - y0.ceil()).max(0.0) as u64;
            let (w, h) = (x1 - x0, y1 - y0);
            let s = SQRT_2;
            let outer = (w + 2.0 * s) * (h + 2.0 * s) - (4.0 - PI) * s * s;
            let inner = (w - 2.0 * s).max(0.0) * (h - 2.0 * s).max(0.0);
            (nx * ny, w * h, outer - inner)
        }
    };
    Ok(LatticeReport { count, area, bound, pass: (count as f64 - area).abs() <= bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let d = gauss_lattice_check(&LatticeRegion::Disk { center: Complex64::new(0.0, 0.0), r: 10.0 }).unwrap();
        assert_eq!(d.count, 317);
        assert!((d.deviation() - 2.84).abs() < 0.01);
        assert!((d.bound - 177.7).abs() < 0.1 && d.pass);
        let sq = gauss_lattice_check(&LatticeRegion::Rectangle { x0: 0.0, y0: 0.0, x1: 1.0, y1: 1.0 }).unwrap();
        assert_eq!((sq.count, sq.area, sq.deviation()), (1, 1.0, 0.0));
        let small = gauss_lattice_check(&LatticeRegion::Disk { center: Complex64::new(0.5, 0.5), r: 0.4 }).unwrap();
        assert_eq!(small.count, 0);
        assert!((small.area - 0.5027).abs() < 1e-4 && small.pass);
    }
}
