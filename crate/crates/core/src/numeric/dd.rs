//! Double-double arithmetic, just enough for exact phase reduction.
//!
//! A value is the unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
pub fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact product of two doubles.
    pub fn from_prod(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    pub fn add_dd(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let (t, f) = two_sum(self.lo, other.lo);
        let (s, e) = fast_two_sum(s, e + t);
        let (hi, lo) = fast_two_sum(s, e + f);
        Self { hi, lo }
    }

    pub fn add_f64(self, x: f64) -> Self {
        self.add_dd(Self::from_f64(x))
    }

    pub fn mul_f64(self, x: f64) -> Self {
        let (p, e) = two_prod(self.hi, x);
        let (hi, lo) = fast_two_sum(p, e + self.lo * x);
        Self { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Fractional part in `[0, 1)`, keeping the low word.
    pub fn frac(self) -> f64 {
        let fh = self.hi.floor();
        let r = Self { hi: self.hi - fh, lo: self.lo };
        // hi - floor(hi) is exact; renormalize and fold into [0, 1).
        let (hi, lo) = two_sum(r.hi, r.lo);
        let f = hi.floor();
        let v = (hi - f) + lo;
        if v >= 1.0 {
            v - 1.0
        } else if v < 0.0 {
            v + 1.0
        } else {
            v
        }
    }
}

/// Splits an integer `< 2^105` into two doubles whose exact sum is `n`.
pub fn split_u128(n: u128) -> (f64, f64) {
    let lo_bits = n & ((1u128 << 52) - 1);
    let hi_bits = n - lo_bits;
    (hi_bits as f64, lo_bits as f64)
}

/// `frac(a * n)` for `n < 2^105`; the absolute error is about `|a n| * 2^-104`.
pub fn frac_mul(a: f64, n: u128) -> f64 {
    let (hi, lo) = split_u128(n);
    let p = DoubleDouble::from_prod(a, hi);
    let q = DoubleDouble::from_prod(a, lo);
    // Reduce the large piece before adding so the low word survives.
    let p = DoubleDouble { hi: p.hi - p.hi.floor(), lo: p.lo };
    let q = DoubleDouble { hi: q.hi - q.hi.floor(), lo: q.lo };
    p.add_dd(q).frac()
}
