//! Double precision intervals with outward rounding.
//!
//! Rounding is done without touching the FPU rounding mode: every
//! operation computes the round-to-nearest result together with an
//! error-free remainder (TwoSum, FMA based TwoProd, FMA residuals for
//! division and square root) and steps one ulp outward only when the
//! remainder shows the result was inexact in that direction. Exact
//! operations therefore stay exact, which keeps integer arithmetic
//! tight.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Products whose magnitude drops below this may lose bits in the FMA
/// residual, so we widen unconditionally there.
const TINY: f64 = 1.0e-290;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn overflow_down(s: f64) -> f64 {
    if s == f64::INFINITY {
        f64::MAX
    } else {
        s
    }
}

#[inline]
fn overflow_up(s: f64) -> f64 {
    if s == f64::NEG_INFINITY {
        f64::MIN
    } else {
        s
    }
}

#[inline]
pub(crate) fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        return if a.is_finite() && b.is_finite() { overflow_down(s) } else { s };
    }
    if e < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
pub(crate) fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        return if a.is_finite() && b.is_finite() { overflow_up(s) } else { s };
    }
    if e > 0.0 {
        s.next_up()
    } else {
        s
    }
}

#[inline]
pub(crate) fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        if p.is_nan() {
            return f64::NEG_INFINITY;
        }
        return if a.is_finite() && b.is_finite() { overflow_down(p) } else { p };
    }
    if p.abs() < TINY {
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        let r = p.next_down();
        return if (a > 0.0) == (b > 0.0) { r.max(0.0) } else { r };
    }
    let e = a.mul_add(b, -p);
    if e < 0.0 {
        p.next_down()
    } else {
        p
    }
}

#[inline]
pub(crate) fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        if p.is_nan() {
            return f64::INFINITY;
        }
        return if a.is_finite() && b.is_finite() { overflow_up(p) } else { p };
    }
    if p.abs() < TINY {
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        let r = p.next_up();
        return if (a > 0.0) != (b > 0.0) { r.min(0.0) } else { r };
    }
    let e = a.mul_add(b, -p);
    if e > 0.0 {
        p.next_up()
    } else {
        p
    }
}

#[inline]
fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if q.is_nan() {
        return f64::NEG_INFINITY;
    }
    if !q.is_finite() {
        return if a.is_finite() && b != 0.0 { overflow_down(q) } else { q };
    }
    if a == 0.0 {
        return 0.0;
    }
    if b.is_infinite() || q.abs() < TINY || a.abs() < TINY {
        return q.next_down();
    }
    // a - q*b is exact here and its sign against b says which side of q
    // the true quotient lies on
    let r = (-q).mul_add(b, a);
    let true_below = (r < 0.0 && b > 0.0) || (r > 0.0 && b < 0.0);
    if true_below {
        q.next_down()
    } else {
        q
    }
}

#[inline]
fn div_up(a: f64, b: f64) -> f64 {
    -div_down(-a, b)
}

#[inline]
fn sqrt_down(a: f64) -> f64 {
    let s = a.sqrt();
    if a == 0.0 || !s.is_finite() {
        return s;
    }
    if a < TINY {
        return s.next_down().max(0.0);
    }
    let r = (-s).mul_add(s, a);
    if r < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
fn sqrt_up(a: f64) -> f64 {
    let s = a.sqrt();
    if a == 0.0 || !s.is_finite() {
        return s;
    }
    if a < TINY {
        return s.next_up();
    }
    let r = (-s).mul_add(s, a);
    if r > 0.0 {
        s.next_up()
    } else {
        s
    }
}

/// Closed interval `[lo, hi]` of doubles, `lo <= hi`.
///
/// A NaN produced anywhere collapses to the entire line. Code that
/// turns intervals into certificates or serialized output rejects
/// non-finite endpoints explicitly.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    pub const ENTIRE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    #[inline]
    pub(crate) fn raw(lo: f64, hi: f64) -> Self {
        if lo.is_nan() || hi.is_nan() {
            return Interval::ENTIRE;
        }
        debug_assert!(lo <= hi, "bad interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    #[inline]
    pub fn point(x: f64) -> Self {
        Interval::raw(x, x)
    }

    /// Enclosure of the exact rational `num / den`.
    pub fn ratio(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Interval::from_i128(num).checked_div(Interval::from_i128(den))
    }

    pub fn from_i128(v: i128) -> Self {
        let f = v as f64;
        // i128 -> f64 rounds to nearest, compare back to find the side
        let back = f as i128;
        if f.is_infinite() || back > v {
            Interval::raw(f.next_down(), f)
        } else if back < v {
            Interval::raw(f, f.next_up())
        } else {
            Interval::point(f)
        }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Midpoint, rounded to nearest. Not an enclosure of anything.
    pub fn mid(&self) -> f64 {
        if self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY {
            return 0.0;
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        if m.is_finite() {
            m
        } else {
            self.lo.max(f64::MIN).min(f64::MAX)
        }
    }

    /// Upper bound for the radius about [`Interval::mid`].
    pub fn rad(&self) -> f64 {
        let m = self.mid();
        add_up(self.hi, -m).max(add_up(m, -self.lo))
    }

    /// Upper bound for `hi - lo`.
    pub fn width(&self) -> f64 {
        add_up(self.hi, -self.lo)
    }

    /// Upper bound on `|x|` over the interval.
    #[inline]
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Lower bound on `|x|` over the interval.
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn interior_of(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then(|| Interval::raw(lo, hi))
    }

    pub fn disjoint(&self, other: &Interval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    /// `[lo - r, hi + r]` rounded outward.
    pub fn widen(&self, r: f64) -> Interval {
        Interval::raw(add_down(self.lo, -r), add_up(self.hi, r))
    }

    /// The ball `mid ± rad` rounded outward.
    pub fn ball(mid: f64, rad: f64) -> Interval {
        Interval::point(mid).widen(rad)
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            -*self
        } else {
            Interval::raw(0.0, self.mag())
        }
    }

    pub fn sqr(&self) -> Interval {
        let a = self.abs();
        Interval::raw(mul_down(a.lo, a.lo), mul_up(a.hi, a.hi))
    }

    pub fn checked_div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let (a, b) = (self, rhs);
        let cands_lo = [
            div_down(a.lo, b.lo),
            div_down(a.lo, b.hi),
            div_down(a.hi, b.lo),
            div_down(a.hi, b.hi),
        ];
        let cands_hi = [
            div_up(a.lo, b.lo),
            div_up(a.lo, b.hi),
            div_up(a.hi, b.lo),
            div_up(a.hi, b.hi),
        ];
        let lo = cands_lo.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = cands_hi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Interval::raw(lo, hi))
    }

    pub fn sqrt(self) -> Result<Interval> {
        if self.hi < 0.0 {
            return Err(Error::NegativeSqrt);
        }
        if self.lo < 0.0 {
            return Err(Error::NegativeSqrt);
        }
        Ok(Interval::raw(sqrt_down(self.lo), sqrt_up(self.hi)))
    }

    /// Integer power by repeated squaring, exact sign handling for even
    /// exponents.
    pub fn powi(self, n: u32) -> Interval {
        if n == 0 {
            return Interval::ONE;
        }
        let base = if n % 2 == 0 { self.abs() } else { self };
        let mut acc = Interval::ONE;
        let mut b = base;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b;
            }
            e >>= 1;
            if e > 0 {
                b = if b.lo >= 0.0 { b * b } else { b.sqr() };
            }
        }
        acc
    }

    pub fn max(self, other: Interval) -> Interval {
        Interval::raw(self.lo.max(other.lo), self.hi.max(other.hi))
    }

    pub fn min(self, other: Interval) -> Interval {
        Interval::raw(self.lo.min(other.lo), self.hi.min(other.hi))
    }

    /// Reject NaN-derived or unbounded intervals at output boundaries.
    pub fn ensure_finite(&self, what: &str) -> Result<Interval> {
        if self.is_finite() {
            Ok(*self)
        } else {
            Err(Error::NonFinite(what.to_string()))
        }
    }
}

impl Default for Interval {
    fn default() -> Self {
        Interval::ZERO
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval::raw(add_down(self.lo, rhs.lo), add_up(self.hi, rhs.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        Interval::raw(add_down(self.lo, -rhs.hi), add_up(self.hi, -rhs.lo))
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b) = (self, rhs);
        if a.lo >= 0.0 && b.lo >= 0.0 {
            return Interval::raw(mul_down(a.lo, b.lo), mul_up(a.hi, b.hi));
        }
        if a.hi <= 0.0 && b.hi <= 0.0 {
            return Interval::raw(mul_down(a.hi, b.hi), mul_up(a.lo, b.lo));
        }
        if a.lo >= 0.0 && b.hi <= 0.0 {
            return Interval::raw(mul_down(a.hi, b.lo), mul_up(a.lo, b.hi));
        }
        if a.hi <= 0.0 && b.lo >= 0.0 {
            return Interval::raw(mul_down(a.lo, b.hi), mul_up(a.hi, b.lo));
        }
        let lo = mul_down(a.lo, b.hi)
            .min(mul_down(a.hi, b.lo))
            .min(mul_down(a.lo, b.lo))
            .min(mul_down(a.hi, b.hi));
        let hi = mul_up(a.lo, b.lo)
            .max(mul_up(a.hi, b.hi))
            .max(mul_up(a.lo, b.hi))
            .max(mul_up(a.hi, b.lo));
        Interval::raw(lo, hi)
    }
}

impl Div for Interval {
    type Output = Interval;
    /// Division by an interval containing zero yields the entire line;
    /// use [`Interval::checked_div`] to get an error instead.
    fn div(self, rhs: Interval) -> Interval {
        self.checked_div(rhs).unwrap_or(Interval::ENTIRE)
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

impl AddAssign for Interval {
    fn add_assign(&mut self, rhs: Interval) {
        *self = *self + rhs;
    }
}

impl SubAssign for Interval {
    fn sub_assign(&mut self, rhs: Interval) {
        *self = *self - rhs;
    }
}

impl MulAssign for Interval {
    fn mul_assign(&mut self, rhs: Interval) {
        *self = *self * rhs;
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |a, b| a + b)
    }
}
