//! Multiple precision intervals on top of MPFR directed rounding.

use std::cmp::Ordering;
use std::fmt;

use rug::float::{Constant, Round};
use rug::ops::{AddAssignRound, AssignRound};
use rug::Float;

use super::float::Interval;
use super::Precision;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct BigInterval {
    lo: Float,
    hi: Float,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sign {
    Pos,
    Neg,
    Mixed,
}

fn down<T>(prec: u32, v: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    let mut f = Float::new(prec);
    f.assign_round(v, Round::Down);
    f
}

fn up<T>(prec: u32, v: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    let mut f = Float::new(prec);
    f.assign_round(v, Round::Up);
    f
}

fn lo_fix(mut f: Float) -> Float {
    if f.is_nan() {
        f.assign_round_inf(false);
    }
    f
}

fn hi_fix(mut f: Float) -> Float {
    if f.is_nan() {
        f.assign_round_inf(true);
    }
    f
}

trait InfExt {
    fn assign_round_inf(&mut self, positive: bool);
}

impl InfExt for Float {
    fn assign_round_inf(&mut self, positive: bool) {
        let inf = if positive { rug::float::Special::Infinity } else { rug::float::Special::NegInfinity };
        rug::Assign::assign(self, inf);
    }
}

impl BigInterval {
    fn from_parts(lo: Float, hi: Float) -> Self {
        let lo = lo_fix(lo);
        let hi = hi_fix(hi);
        debug_assert!(lo <= hi, "bad big interval");
        BigInterval { lo, hi }
    }

    pub fn new(lo: Float, hi: Float) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidInterval { lo: lo.to_f64(), hi: hi.to_f64() });
        }
        Ok(BigInterval { lo, hi })
    }

    pub fn zero(prec: Precision) -> Self {
        Self::from_f64(0.0, prec)
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_f64(1.0, prec)
    }

    /// Exact when `prec >= 53`, otherwise rounded outward.
    pub fn from_f64(x: f64, prec: Precision) -> Self {
        let p = prec.bits();
        BigInterval::from_parts(down(p, x), up(p, x))
    }

    pub fn from_i128(v: i128, prec: Precision) -> Self {
        let p = prec.bits();
        BigInterval::from_parts(down(p, v), up(p, v))
    }

    pub fn from_interval(x: &Interval, prec: Precision) -> Self {
        let p = prec.bits();
        BigInterval::from_parts(down(p, x.lo()), up(p, x.hi()))
    }

    pub fn ratio(num: i128, den: i128, prec: Precision) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Self::from_i128(num, prec).checked_div(&Self::from_i128(den, prec))
    }

    /// Enclosure of pi.
    pub fn pi(prec: Precision) -> Self {
        let p = prec.bits();
        BigInterval::from_parts(down(p, Constant::Pi), up(p, Constant::Pi))
    }

    /// Point interval at an MPFR number, kept at its own precision.
    pub fn point(x: Float) -> Self {
        BigInterval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn precision(&self) -> Precision {
        Precision::new_unchecked(self.prec())
    }

    /// Midpoint as an MPFR number (rounded to nearest).
    pub fn mid(&self) -> Float {
        if !self.is_finite() {
            return Float::with_val(self.prec(), 0);
        }
        let mut m = Float::with_val(self.prec() + 1, &self.lo + &self.hi);
        m /= 2;
        Float::with_val(self.prec(), m)
    }

    pub fn mid_f64(&self) -> f64 {
        if !self.is_finite() {
            return 0.0;
        }
        self.mid().to_f64()
    }

    /// Upper bound on the radius about [`BigInterval::mid`].
    pub fn rad_f64(&self) -> f64 {
        let m = self.mid();
        let a = up(53, &self.hi - &m);
        let b = up(53, &m - &self.lo);
        a.max(&b).to_f64_round(Round::Up)
    }

    pub fn width_f64(&self) -> f64 {
        up(53, &self.hi - &self.lo).to_f64_round(Round::Up)
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_round(Round::Up)
    }

    pub fn mag_f64(&self) -> f64 {
        self.lo_f64().abs().max(self.hi_f64().abs())
    }

    /// Outward rounding to a double interval.
    pub fn to_interval(&self) -> Interval {
        Interval::raw(self.lo_f64(), self.hi_f64())
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.lo <= x && self.hi >= x
    }

    pub fn contains_zero(&self) -> bool {
        self.contains_f64(0.0)
    }

    pub fn contains(&self, x: &Float) -> bool {
        self.lo <= *x && self.hi >= *x
    }

    pub fn subset_of(&self, other: &BigInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn disjoint(&self, other: &BigInterval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    pub fn hull(&self, other: &BigInterval) -> BigInterval {
        let lo = if self.lo <= other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi >= other.hi { self.hi.clone() } else { other.hi.clone() };
        BigInterval { lo, hi }
    }

    pub fn intersect(&self, other: &BigInterval) -> Option<BigInterval> {
        let lo = if self.lo >= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi <= other.hi { &self.hi } else { &other.hi };
        (lo <= hi).then(|| BigInterval { lo: lo.clone(), hi: hi.clone() })
    }

    /// Raise the working precision, enclosure unchanged.
    pub fn with_prec(&self, prec: Precision) -> BigInterval {
        let p = prec.bits();
        BigInterval::from_parts(down(p, &self.lo), up(p, &self.hi))
    }

    pub fn widen(&self, r: f64) -> BigInterval {
        let p = self.prec();
        BigInterval::from_parts(down(p, &self.lo - r), up(p, &self.hi + r))
    }

    fn sign(&self) -> Sign {
        if self.lo >= 0 {
            Sign::Pos
        } else if self.hi <= 0 {
            Sign::Neg
        } else {
            Sign::Mixed
        }
    }

    pub fn neg(&self) -> BigInterval {
        BigInterval { lo: Float::with_val(self.hi.prec(), -&self.hi), hi: Float::with_val(self.lo.prec(), -&self.lo) }
    }

    pub fn add(&self, o: &BigInterval) -> BigInterval {
        let p = self.prec().max(o.prec());
        BigInterval::from_parts(down(p, &self.lo + &o.lo), up(p, &self.hi + &o.hi))
    }

    pub fn sub(&self, o: &BigInterval) -> BigInterval {
        let p = self.prec().max(o.prec());
        BigInterval::from_parts(down(p, &self.lo - &o.hi), up(p, &self.hi - &o.lo))
    }

    pub fn add_assign(&mut self, o: &BigInterval) {
        self.lo.add_assign_round(&o.lo, Round::Down);
        self.hi.add_assign_round(&o.hi, Round::Up);
        if self.lo.is_nan() || self.hi.is_nan() {
            *self = BigInterval::from_parts(self.lo.clone(), self.hi.clone());
        }
    }

    pub fn mul(&self, o: &BigInterval) -> BigInterval {
        let p = self.prec().max(o.prec());
        let (a, b) = (self, o);
        let pair = |x: &Float, y: &Float, z: &Float, w: &Float| {
            BigInterval::from_parts(lo_fix(down(p, x * y)), hi_fix(up(p, z * w)))
        };
        match (a.sign(), b.sign()) {
            (Sign::Pos, Sign::Pos) => pair(&a.lo, &b.lo, &a.hi, &b.hi),
            (Sign::Pos, Sign::Neg) => pair(&a.hi, &b.lo, &a.lo, &b.hi),
            (Sign::Pos, Sign::Mixed) => pair(&a.hi, &b.lo, &a.hi, &b.hi),
            (Sign::Neg, Sign::Pos) => pair(&a.lo, &b.hi, &a.hi, &b.lo),
            (Sign::Neg, Sign::Neg) => pair(&a.hi, &b.hi, &a.lo, &b.lo),
            (Sign::Neg, Sign::Mixed) => pair(&a.lo, &b.hi, &a.lo, &b.lo),
            (Sign::Mixed, Sign::Pos) => pair(&a.lo, &b.hi, &a.hi, &b.hi),
            (Sign::Mixed, Sign::Neg) => pair(&a.hi, &b.lo, &a.lo, &b.lo),
            (Sign::Mixed, Sign::Mixed) => {
                let l1 = lo_fix(down(p, &a.lo * &b.hi));
                let l2 = lo_fix(down(p, &a.hi * &b.lo));
                let h1 = hi_fix(up(p, &a.lo * &b.lo));
                let h2 = hi_fix(up(p, &a.hi * &b.hi));
                let lo = if l1 <= l2 { l1 } else { l2 };
                let hi = if h1 >= h2 { h1 } else { h2 };
                BigInterval::from_parts(lo, hi)
            }
        }
    }

    /// `self += a * b`.
    pub fn add_mul(&mut self, a: &BigInterval, b: &BigInterval) {
        let t = a.mul(b);
        self.add_assign(&t);
    }

    pub fn sqr(&self) -> BigInterval {
        let p = self.prec();
        match self.sign() {
            Sign::Pos => BigInterval::from_parts(down(p, self.lo.square_ref()), up(p, self.hi.square_ref())),
            Sign::Neg => BigInterval::from_parts(down(p, self.hi.square_ref()), up(p, self.lo.square_ref())),
            Sign::Mixed => {
                let m = if self.lo.clone().abs() >= self.hi.clone().abs() { &self.lo } else { &self.hi };
                BigInterval::from_parts(Float::with_val(p, 0), up(p, m.square_ref()))
            }
        }
    }

    pub fn abs(&self) -> BigInterval {
        match self.sign() {
            Sign::Pos => self.clone(),
            Sign::Neg => self.neg(),
            Sign::Mixed => {
                let a = Float::with_val(self.prec(), self.lo.abs_ref());
                let hi = if a >= self.hi { a } else { self.hi.clone() };
                BigInterval { lo: Float::with_val(self.prec(), 0), hi }
            }
        }
    }

    pub fn checked_div(&self, o: &BigInterval) -> Result<BigInterval> {
        if o.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.prec().max(o.prec());
        let (a, b) = (self, o);
        let pair = |x: &Float, y: &Float, z: &Float, w: &Float| {
            BigInterval::from_parts(lo_fix(down(p, x / y)), hi_fix(up(p, z / w)))
        };
        Ok(match (a.sign(), b.sign()) {
            (Sign::Pos, Sign::Pos) => pair(&a.lo, &b.hi, &a.hi, &b.lo),
            (Sign::Pos, _) => pair(&a.hi, &b.hi, &a.lo, &b.lo),
            (Sign::Neg, Sign::Pos) => pair(&a.lo, &b.lo, &a.hi, &b.hi),
            (Sign::Neg, _) => pair(&a.hi, &b.lo, &a.lo, &b.hi),
            (Sign::Mixed, Sign::Pos) => pair(&a.lo, &b.lo, &a.hi, &b.lo),
            (Sign::Mixed, _) => pair(&a.hi, &b.hi, &a.lo, &b.hi),
        })
    }

    pub fn sqrt(&self) -> Result<BigInterval> {
        if self.lo < 0 {
            return Err(Error::NegativeSqrt);
        }
        let p = self.prec();
        Ok(BigInterval::from_parts(down(p, self.lo.sqrt_ref()), up(p, self.hi.sqrt_ref())))
    }

    pub fn powi(&self, n: u32) -> BigInterval {
        let mut acc = BigInterval::one(self.precision());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        if n % 2 == 0 && acc.lo < 0 {
            acc.lo = Float::with_val(acc.lo.prec(), 0);
        }
        acc
    }

    /// `x^s` for a point base `x >= 0` and real exponent `s >= 0`, using
    /// monotonicity in the base.
    pub fn pow_real(&self, s: f64) -> Result<BigInterval> {
        use rug::ops::Pow;
        if self.lo < 0 || s < 0.0 || s.is_nan() {
            return Err(Error::Domain(format!("real power of {self:?} to {s}")));
        }
        let p = self.prec();
        let e = Float::with_val(53, s);
        Ok(BigInterval::from_parts(down(p, (&self.lo).pow(&e)), up(p, (&self.hi).pow(&e))))
    }

    /// Cosine enclosure via endpoint values plus interior extrema.
    pub fn cos(&self) -> BigInterval {
        let p = self.prec();
        let prec = self.precision();
        if !self.is_finite() || self.width_f64() >= 6.0 {
            return BigInterval::from_parts(Float::with_val(p, -1), Float::with_val(p, 1));
        }
        let pi = BigInterval::pi(prec);
        let c_lo = BigInterval::from_parts(down(p, self.lo.cos_ref()), up(p, self.lo.cos_ref()));
        let c_hi = BigInterval::from_parts(down(p, self.hi.cos_ref()), up(p, self.hi.cos_ref()));
        let mut out = c_lo.hull(&c_hi);
        // extrema of cos sit at j*pi, check which multiples may be inside
        let jlo = down(p, &self.lo / &pi.hi).floor();
        let jlo2 = down(p, &self.lo / &pi.lo).floor();
        let jhi = up(p, &self.hi / &pi.lo).ceil();
        let jhi2 = up(p, &self.hi / &pi.hi).ceil();
        let start = if jlo <= jlo2 { jlo } else { jlo2 };
        let end = if jhi >= jhi2 { jhi } else { jhi2 };
        let mut j = start;
        while j <= end {
            let jp_lo = down(p, &j * if j >= 0 { &pi.lo } else { &pi.hi });
            let jp_hi = up(p, &j * if j >= 0 { &pi.hi } else { &pi.lo });
            let may_contain = !(jp_hi < self.lo || jp_lo > self.hi);
            if may_contain {
                let odd = j.to_f64().rem_euclid(2.0) == 1.0;
                let ext = BigInterval::from_f64(if odd { -1.0 } else { 1.0 }, prec);
                out = out.hull(&ext);
            }
            j += 1;
        }
        out.clamp_unit()
    }

    pub fn sin(&self) -> BigInterval {
        let half_pi = BigInterval::pi(self.precision()).mul(&BigInterval::ratio(1, 2, self.precision()).unwrap());
        self.sub(&half_pi).cos()
    }

    fn clamp_unit(self) -> BigInterval {
        let p = self.prec();
        let lo = if self.lo < -1 { Float::with_val(p, -1) } else { self.lo };
        let hi = if self.hi > 1 { Float::with_val(p, 1) } else { self.hi };
        BigInterval { lo, hi }
    }

    /// Outward decimal strings with `digits` significant digits.
    pub fn to_decimal_pair(&self, digits: usize) -> Result<(String, String)> {
        if !self.is_finite() {
            return Err(Error::NonFinite("interval to decimal".into()));
        }
        Ok((
            self.lo.to_string_radix_round(10, Some(digits), Round::Down),
            self.hi.to_string_radix_round(10, Some(digits), Round::Up),
        ))
    }

    /// Parse `[lo, hi]` decimal strings with outward rounding.
    pub fn from_decimal_pair(lo: &str, hi: &str, prec: Precision) -> Result<BigInterval> {
        let p = prec.bits();
        let pl = Float::parse(lo).map_err(|e| Error::Parse(format!("{lo}: {e}")))?;
        let ph = Float::parse(hi).map_err(|e| Error::Parse(format!("{hi}: {e}")))?;
        BigInterval::new(down(p, pl), up(p, ph))
    }

    pub fn cmp_lo_hi(&self, other: &BigInterval) -> Option<Ordering> {
        self.hi.partial_cmp(&other.lo)
    }
}

impl fmt::Debug for BigInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.lo.to_string_radix_round(10, Some(20), Round::Down),
            self.hi.to_string_radix_round(10, Some(20), Round::Up)
        )
    }
}
