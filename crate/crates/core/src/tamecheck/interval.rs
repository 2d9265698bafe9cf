use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

/// Real interval with possibly infinite endpoints. Arithmetic rounds
/// outward, so a propagated interval always contains the true range.
///
/// Openness is tracked only for display and containment of user-declared
/// intervals; arithmetic results are closed hulls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

#[inline]
fn down(x: f64) -> f64 {
    if x == 0.0 || x.is_infinite() {
        x
    } else if x.is_nan() {
        f64::NEG_INFINITY
    } else {
        x.next_down()
    }
}

#[inline]
fn up(x: f64) -> f64 {
    if x == 0.0 || x.is_infinite() {
        x
    } else if x.is_nan() {
        f64::INFINITY
    } else {
        x.next_up()
    }
}

// 0 * inf = 0 for endpoint products
#[inline]
fn emul(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 { 0.0 } else { a * b }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    pub fn with_openness(lo: f64, hi: f64, lo_open: bool, hi_open: bool) -> Self {
        Self {
            lo,
            hi,
            lo_open,
            hi_open,
        }
    }

    pub fn point(v: f64) -> Self {
        Self::new(v, v)
    }

    pub fn entire() -> Self {
        Self::with_openness(f64::NEG_INFINITY, f64::INFINITY, true, true)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && self.hi >= 0.0
    }

    /// Whether `self` lies inside `outer`, respecting `outer`'s open ends.
    pub fn is_subset_of(&self, outer: &Interval) -> bool {
        let lo_ok = self.lo > outer.lo || (self.lo == outer.lo && (!outer.lo_open || self.lo_open));
        let hi_ok = self.hi < outer.hi || (self.hi == outer.hi && (!outer.hi_open || self.hi_open));
        lo_ok && hi_ok
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(down(self.lo + o.lo), up(self.hi + o.hi))
    }

    pub fn neg(&self) -> Interval {
        Interval::with_openness(-self.hi, -self.lo, self.hi_open, self.lo_open)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = [
            emul(self.lo, o.lo),
            emul(self.lo, o.hi),
            emul(self.hi, o.lo),
            emul(self.hi, o.hi),
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo), up(hi))
    }

    pub fn recip(&self) -> Interval {
        if self.lo > 0.0 || self.hi < 0.0 {
            Interval::new(down(1.0 / self.hi), up(1.0 / self.lo))
        } else if self.lo == 0.0 && self.hi > 0.0 {
            Interval::new(down(1.0 / self.hi), f64::INFINITY)
        } else if self.hi == 0.0 && self.lo < 0.0 {
            Interval::new(f64::NEG_INFINITY, up(1.0 / self.lo))
        } else {
            Interval::entire()
        }
    }

    pub fn powi(&self, n: i64) -> Interval {
        if n == 0 {
            return Interval::point(1.0);
        }
        if n < 0 {
            return self.powi(-n).recip();
        }
        let n32 = n.min(i32::MAX as i64) as i32;
        let a = self.lo.powi(n32);
        let b = self.hi.powi(n32);
        if n % 2 == 1 {
            Interval::new(down(a), up(b))
        } else if self.contains_zero() {
            Interval::new(0.0, up(a.max(b)))
        } else {
            Interval::new(down(a.min(b)).max(0.0), up(a.max(b)))
        }
    }

    /// `x^r` for non-negative intervals and non-integer `r`.
    pub fn powf_nonneg(&self, r: f64) -> Interval {
        let lo = self.lo.max(0.0);
        let a = lo.powf(r);
        let b = self.hi.powf(r);
        if r > 0.0 {
            Interval::new(down(a).max(0.0), up(b))
        } else {
            Interval::new(down(b).max(0.0), up(a))
        }
    }

    pub fn exp(&self) -> Interval {
        Interval::new(down(self.lo.exp()).max(0.0), up(self.hi.exp()))
    }

    pub fn ln(&self) -> Interval {
        if self.hi <= 0.0 {
            return Interval::entire();
        }
        let lo = if self.lo <= 0.0 { f64::NEG_INFINITY } else { down(self.lo.ln()) };
        Interval::new(lo, up(self.hi.ln()))
    }

    pub fn sin(&self) -> Interval {
        if !self.is_bounded() || self.hi - self.lo >= 2.0 * PI {
            return Interval::new(-1.0, 1.0);
        }
        let (a, b) = (self.lo.sin(), self.hi.sin());
        let mut lo = a.min(b);
        let mut hi = a.max(b);
        let hits = |offset: f64| {
            // some offset + 2k*pi inside [self.lo, self.hi]
            let k = ((self.lo - offset) / (2.0 * PI)).ceil();
            offset + 2.0 * PI * k <= self.hi
        };
        if hits(FRAC_PI_2) {
            hi = 1.0;
        }
        if hits(-FRAC_PI_2) {
            lo = -1.0;
        }
        Interval::new(down(lo).max(-1.0), up(hi).min(1.0))
    }

    pub fn cos(&self) -> Interval {
        Interval::new(self.lo + FRAC_PI_2, self.hi + FRAC_PI_2).widened().sin()
    }

    fn widened(&self) -> Interval {
        Interval::new(down(self.lo), up(self.hi))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_open { '(' } else { '[' },
            self.lo,
            self.hi,
            if self.hi_open { ')' } else { ']' }
        )
    }
}
