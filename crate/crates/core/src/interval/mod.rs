//! Rigorous interval arithmetic.
//!
//! Two layers share one [`Scalar`] interface: [`Interval`] on doubles
//! and [`BigInterval`] on MPFR. Algorithms that only need
//! `+ - * / sqrt` with outward rounding are written once against the
//! trait and run at either precision.

mod big;
mod float;
mod linalg;

pub use big::BigInterval;
pub use float::Interval;
pub use linalg::{opnorm_l1, opnorm_linf, IntervalMatrix};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Working precision in bits. 53 means plain doubles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Precision(u32);

impl Precision {
    pub const DOUBLE: Precision = Precision(53);
    pub const DEFAULT: Precision = Precision(128);
    pub const MIN_BITS: u32 = 24;
    pub const MAX_BITS: u32 = 1 << 16;

    pub fn new(bits: u32) -> Result<Self> {
        if !(Self::MIN_BITS..=Self::MAX_BITS).contains(&bits) {
            return Err(Error::InvalidPrecision(bits));
        }
        Ok(Precision(bits))
    }

    pub(crate) fn new_unchecked(bits: u32) -> Self {
        Precision(bits.max(Self::MIN_BITS))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn doubled(self) -> Precision {
        Precision((self.0 * 2).min(Self::MAX_BITS))
    }

    /// Significant decimal digits that keep outward decimal strings tight.
    pub fn decimal_digits(self) -> usize {
        (self.0 as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

/// Interval scalar with outward rounded arithmetic.
pub trait Scalar: Clone + std::fmt::Debug + Send + Sync + 'static {
    fn from_f64(x: f64, prec: Precision) -> Self;
    fn from_i128(v: i128, prec: Precision) -> Self;
    fn ratio(num: i128, den: i128, prec: Precision) -> Result<Self>;
    fn from_interval(x: &Interval, prec: Precision) -> Self;
    fn zero(prec: Precision) -> Self {
        Self::from_f64(0.0, prec)
    }
    fn one(prec: Precision) -> Self {
        Self::from_f64(1.0, prec)
    }
    fn precision(&self) -> Precision;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div(&self, o: &Self) -> Result<Self>;
    fn sqrt(&self) -> Result<Self>;
    fn sqr(&self) -> Self;
    fn abs(&self) -> Self;
    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self = self.add(&a.mul(b));
    }

    fn hull(&self, o: &Self) -> Self;
    fn intersect(&self, o: &Self) -> Option<Self>;
    fn subset_of(&self, o: &Self) -> bool;
    fn widen(&self, r: f64) -> Self;
    fn contains_f64(&self, x: f64) -> bool;
    fn contains_zero(&self) -> bool {
        self.contains_f64(0.0)
    }
    fn is_finite(&self) -> bool;

    fn lo_f64(&self) -> f64;
    fn hi_f64(&self) -> f64;
    fn mid_f64(&self) -> f64;
    fn rad_f64(&self) -> f64;
    fn mag_f64(&self) -> f64 {
        self.lo_f64().abs().max(self.hi_f64().abs())
    }
    /// Point interval at the midpoint, at native precision.
    fn mid_point(&self) -> Self;
    fn to_interval(&self) -> Interval;
}

impl Scalar for Interval {
    fn from_f64(x: f64, _prec: Precision) -> Self {
        Interval::point(x)
    }
    fn from_i128(v: i128, _prec: Precision) -> Self {
        Interval::from_i128(v)
    }
    fn ratio(num: i128, den: i128, _prec: Precision) -> Result<Self> {
        Interval::ratio(num, den)
    }
    fn from_interval(x: &Interval, _prec: Precision) -> Self {
        *x
    }
    fn precision(&self) -> Precision {
        Precision::DOUBLE
    }
    fn add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn sub(&self, o: &Self) -> Self {
        *self - *o
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn div(&self, o: &Self) -> Result<Self> {
        self.checked_div(*o)
    }
    fn sqrt(&self) -> Result<Self> {
        Interval::sqrt(*self)
    }
    fn sqr(&self) -> Self {
        Interval::sqr(self)
    }
    fn abs(&self) -> Self {
        Interval::abs(self)
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += *a * *b;
    }
    fn hull(&self, o: &Self) -> Self {
        Interval::hull(self, o)
    }
    fn intersect(&self, o: &Self) -> Option<Self> {
        Interval::intersect(self, o)
    }
    fn subset_of(&self, o: &Self) -> bool {
        Interval::subset_of(self, o)
    }
    fn widen(&self, r: f64) -> Self {
        Interval::widen(self, r)
    }
    fn contains_f64(&self, x: f64) -> bool {
        self.contains(x)
    }
    fn is_finite(&self) -> bool {
        Interval::is_finite(self)
    }
    fn lo_f64(&self) -> f64 {
        self.lo()
    }
    fn hi_f64(&self) -> f64 {
        self.hi()
    }
    fn mid_f64(&self) -> f64 {
        self.mid()
    }
    fn rad_f64(&self) -> f64 {
        self.rad()
    }
    fn mag_f64(&self) -> f64 {
        self.mag()
    }
    fn mid_point(&self) -> Self {
        Interval::point(self.mid())
    }
    fn to_interval(&self) -> Interval {
        *self
    }
}

impl Scalar for BigInterval {
    fn from_f64(x: f64, prec: Precision) -> Self {
        BigInterval::from_f64(x, prec)
    }
    fn from_i128(v: i128, prec: Precision) -> Self {
        BigInterval::from_i128(v, prec)
    }
    fn ratio(num: i128, den: i128, prec: Precision) -> Result<Self> {
        BigInterval::ratio(num, den, prec)
    }
    fn from_interval(x: &Interval, prec: Precision) -> Self {
        BigInterval::from_interval(x, prec)
    }
    fn precision(&self) -> Precision {
        BigInterval::precision(self)
    }
    fn add(&self, o: &Self) -> Self {
        BigInterval::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        BigInterval::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        BigInterval::mul(self, o)
    }
    fn neg(&self) -> Self {
        BigInterval::neg(self)
    }
    fn div(&self, o: &Self) -> Result<Self> {
        self.checked_div(o)
    }
    fn sqrt(&self) -> Result<Self> {
        BigInterval::sqrt(self)
    }
    fn sqr(&self) -> Self {
        BigInterval::sqr(self)
    }
    fn abs(&self) -> Self {
        BigInterval::abs(self)
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        BigInterval::add_mul(self, a, b)
    }
    fn hull(&self, o: &Self) -> Self {
        BigInterval::hull(self, o)
    }
    fn intersect(&self, o: &Self) -> Option<Self> {
        BigInterval::intersect(self, o)
    }
    fn subset_of(&self, o: &Self) -> bool {
        BigInterval::subset_of(self, o)
    }
    fn widen(&self, r: f64) -> Self {
        BigInterval::widen(self, r)
    }
    fn contains_f64(&self, x: f64) -> bool {
        BigInterval::contains_f64(self, x)
    }
    fn is_finite(&self) -> bool {
        BigInterval::is_finite(self)
    }
    fn lo_f64(&self) -> f64 {
        BigInterval::lo_f64(self)
    }
    fn hi_f64(&self) -> f64 {
        BigInterval::hi_f64(self)
    }
    fn mid_f64(&self) -> f64 {
        BigInterval::mid_f64(self)
    }
    fn rad_f64(&self) -> f64 {
        BigInterval::rad_f64(self)
    }
    fn mid_point(&self) -> Self {
        BigInterval::point(self.mid())
    }
    fn to_interval(&self) -> Interval {
        BigInterval::to_interval(self)
    }
}
