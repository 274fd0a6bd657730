//! Monotone piecewise-cubic Hermite interpolation (Fritsch–Carlson slopes).

#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
    /// Cumulative integral of the interpolant from `x[0]` to `x[i]`.
    cum: Vec<f64>,
}

impl MonotoneCubic {
    /// Needs at least two knots with strictly increasing `x`.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        assert!(n >= 2 && n == y.len());
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = delta[0];
            d[1] = delta[0];
        } else {
            for i in 1..n - 1 {
                if delta[i - 1] * delta[i] <= 0.0 {
                    d[i] = 0.0;
                } else {
                    // weighted harmonic mean
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                }
            }
            d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        let mut cum = vec![0.0; n];
        for i in 0..n - 1 {
            // Simpson is exact on cubics.
            let mid = 0.5 * (x[i] + x[i + 1]);
            let ym = Self::piece_value(&x, &y, &d, i, mid);
            cum[i + 1] = cum[i] + h[i] / 6.0 * (y[i] + 4.0 * ym + y[i + 1]);
        }
        Self { x, y, d, cum }
    }

    pub fn x_min(&self) -> f64 {
        self.x[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.x.last().unwrap()
    }

    pub fn y_max(&self) -> f64 {
        *self.y.last().unwrap()
    }

    fn segment(&self, t: f64) -> usize {
        match self.x.partition_point(|&xi| xi <= t) {
            0 => 0,
            k if k >= self.x.len() => self.x.len() - 2,
            k => k - 1,
        }
    }

    fn piece_value(x: &[f64], y: &[f64], d: &[f64], i: usize, t: f64) -> f64 {
        let h = x[i + 1] - x[i];
        let s = (t - x[i]) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        h00 * y[i] + h10 * h * d[i] + h01 * y[i + 1] + h11 * h * d[i + 1]
    }

    pub fn value(&self, t: f64) -> f64 {
        let i = self.segment(t);
        Self::piece_value(&self.x, &self.y, &self.d, i, t)
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let dh00 = 6.0 * s * (s - 1.0) / h;
        let dh10 = (1.0 - s) * (1.0 - 3.0 * s);
        let dh01 = -dh00;
        let dh11 = s * (3.0 * s - 2.0);
        dh00 * self.y[i] + dh10 * self.d[i] + dh01 * self.y[i + 1] + dh11 * self.d[i + 1]
    }

    pub fn second_derivative(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let a = (12.0 * s - 6.0) / (h * h);
        let b = (6.0 * s - 4.0) / h;
        let c = (6.0 * s - 2.0) / h;
        a * (self.y[i] - self.y[i + 1]) + b * self.d[i] + c * self.d[i + 1]
    }

    /// Integral of the interpolant over `[x_min, t]`.
    pub fn integral_to(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let a = self.x[i];
        let mid = 0.5 * (a + t);
        let ya = self.y[i];
        let ym = Self::piece_value(&self.x, &self.y, &self.d, i, mid);
        let yt = Self::piece_value(&self.x, &self.y, &self.d, i, t);
        self.cum[i] + (t - a) / 6.0 * (ya + 4.0 * ym + yt)
    }
}

fn end_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d.signum() != del0.signum() {
        0.0
    } else if del0.signum() != del1.signum() && d.abs() > 3.0 * del0.abs() {
        3.0 * del0
    } else {
        d
    }
}
