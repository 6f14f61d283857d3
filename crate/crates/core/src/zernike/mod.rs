//! Zernike series on the unit disk.
//!
//! The basis is `Q_n^{k,m}(r, θ) = e^{imθ} r^{|m|} P_n^{(k,|m|)}(2r^2 - 1)`.
//! A single-mode series holds the coefficients of one wave number `m`
//! at grading `k`, a full series is a sparse map over `m`.

mod operators;
mod product;

pub use operators::{SequenceOperator, Space};
pub use product::{multiplication_matrix, multiply, product_order};

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{BigInterval, Interval, Precision, Scalar};
use crate::jacobi::{JacobiWeight, RecurrenceTable};

/// Admissible weights `w_{m,n}` for the weighted `l1` norms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightPolicy {
    Trivial,
    /// `nu^{2n + |m|}`, `nu >= 1`
    Geometric { nu: f64 },
    /// `(1 + 2n + |m|)^s`
    Algebraic { s: f64 },
}

impl WeightPolicy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            WeightPolicy::Trivial => Ok(()),
            WeightPolicy::Geometric { nu } if nu >= 1.0 && nu.is_finite() => Ok(()),
            WeightPolicy::Algebraic { s } if s.is_finite() => Ok(()),
            other => Err(Error::InvalidWeight(format!("{other:?}"))),
        }
    }

    /// Enclosure of `w_{m,n}`. Negative `s` gives the dual-type weights
    /// used by the shifted spaces.
    pub fn weight(&self, m: i32, n: usize) -> Interval {
        let e = 2 * n as u64 + m.unsigned_abs() as u64;
        match *self {
            WeightPolicy::Trivial => Interval::ONE,
            WeightPolicy::Geometric { nu } => Interval::point(nu).powi(e as u32),
            WeightPolicy::Algebraic { s } => {
                let base = (1 + e) as f64;
                if s.fract() == 0.0 && s.abs() < 64.0 {
                    let p = Interval::point(base).powi(s.abs() as u32);
                    if s >= 0.0 {
                        p
                    } else {
                        Interval::ONE / p
                    }
                } else {
                    let b = BigInterval::from_f64(base, Precision::new_unchecked(64));
                    let p = b.pow_real(s.abs()).expect("positive base").to_interval();
                    if s >= 0.0 {
                        p
                    } else {
                        Interval::ONE / p
                    }
                }
            }
        }
    }
}

/// `binom(k + n, n)`, the value of `Q_n^{k,m}` on the boundary for `m = 0`.
pub fn binomial_weight(k: u32, n: usize) -> Interval {
    let mut acc = Interval::ONE;
    for i in 1..=k as i128 {
        acc = acc * Interval::ratio(n as i128 + i, i).unwrap();
    }
    acc
}

/// `<m, n>_{k,w} = w_{m,n} binom(k + n, n)`.
pub fn norm_weight(policy: &WeightPolicy, k: u32, m: i32, n: usize) -> Interval {
    policy.weight(m, n) * binomial_weight(k, n)
}

/// Element of `V^{k,m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleModeSeries<S> {
    pub k: u32,
    pub m: i32,
    pub coeffs: Vec<S>,
}

impl<S: Scalar> SingleModeSeries<S> {
    pub fn new(k: u32, m: i32, coeffs: Vec<S>) -> Self {
        SingleModeSeries { k, m, coeffs }
    }

    pub fn basis(k: u32, m: i32, n: usize, prec: Precision) -> Self {
        let mut coeffs = vec![S::zero(prec); n + 1];
        coeffs[n] = S::one(prec);
        SingleModeSeries { k, m, coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn jacobi_weight(&self) -> JacobiWeight {
        JacobiWeight::new(self.k, self.m.unsigned_abs())
    }

    pub fn to_big(&self, prec: Precision) -> SingleModeSeries<BigInterval> {
        SingleModeSeries {
            k: self.k,
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| BigInterval::from_interval(&c.to_interval(), prec)).collect(),
        }
    }

    pub fn to_interval(&self) -> SingleModeSeries<Interval> {
        SingleModeSeries { k: self.k, m: self.m, coeffs: self.coeffs.iter().map(|c| c.to_interval()).collect() }
    }

    /// Index of the last coefficient that may be nonzero.
    pub fn support_max(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !(c.lo_f64() == 0.0 && c.hi_f64() == 0.0))
    }
}

/// Element of `V^k`, a finite sum of single modes.
#[derive(Clone, Debug, PartialEq)]
pub struct ZernikeSeries<S> {
    pub k: u32,
    pub modes: BTreeMap<i32, Vec<S>>,
}

impl<S: Scalar> ZernikeSeries<S> {
    pub fn new(k: u32) -> Self {
        ZernikeSeries { k, modes: BTreeMap::new() }
    }

    pub fn from_mode(s: SingleModeSeries<S>) -> Self {
        let mut z = ZernikeSeries::new(s.k);
        z.modes.insert(s.m, s.coeffs);
        z
    }

    pub fn mode(&self, m: i32) -> Option<SingleModeSeries<S>> {
        self.modes.get(&m).map(|c| SingleModeSeries { k: self.k, m, coeffs: c.clone() })
    }
}

/// Rigorous enclosure of `sum |a_n| <m,n>_{k,w}`; its upper end is the
/// norm bound.
pub fn norm_single<S: Scalar>(a: &SingleModeSeries<S>, policy: &WeightPolicy) -> Interval {
    a.coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| c.to_interval().abs() * norm_weight(policy, a.k, a.m, n))
        .sum()
}

pub fn norm_v<S: Scalar>(a: &ZernikeSeries<S>, policy: &WeightPolicy) -> Interval {
    a.modes
        .iter()
        .map(|(&m, c)| norm_single(&SingleModeSeries { k: a.k, m, coeffs: c.clone() }, policy))
        .sum()
}

/// Enclosure of `(Re, Im)` of a single mode at `(r, θ)`, `0 <= r <= 1`.
pub fn eval_single(
    a: &SingleModeSeries<BigInterval>,
    r: &BigInterval,
    theta: &BigInterval,
) -> Result<(BigInterval, BigInterval)> {
    if r.lo() < &0 || r.hi() > &1 {
        return Err(Error::Domain("radius outside [0, 1]".into()));
    }
    let degree = a.len().saturating_sub(1);
    // extra bits against the wrapping growth of the interval recurrence
    let prec = Precision::new_unchecked(r.prec().max(theta.prec()).max(64) + 2 * degree as u32 + 16);
    let r = r.with_prec(prec);
    let x = r.sqr().mul(&BigInterval::from_f64(2.0, prec)).sub(&BigInterval::one(prec));
    let x = x.intersect(&BigInterval::from_interval(&Interval::new(-1.0, 1.0)?, prec)).unwrap_or(x);
    let table = RecurrenceTable::<BigInterval>::new(a.jacobi_weight(), degree.max(1), prec);
    let vals = table.eval_all(degree, &x);
    let mut radial = BigInterval::zero(prec);
    for (c, v) in a.coeffs.iter().zip(&vals) {
        radial.add_mul(c, v);
    }
    let q = a.m.unsigned_abs();
    if q > 0 {
        // r^{|m|} vanishes identically at the pole
        radial = if r.is_point() && r.contains_zero() { BigInterval::zero(prec) } else { radial.mul(&r.powi(q)) };
    }
    if a.m == 0 {
        return Ok((radial, BigInterval::zero(prec)));
    }
    let angle = theta.with_prec(prec).mul(&BigInterval::from_i128(a.m as i128, prec));
    Ok((radial.mul(&angle.cos()), radial.mul(&angle.sin())))
}

pub fn eval(u: &ZernikeSeries<BigInterval>, r: &BigInterval, theta: &BigInterval) -> Result<(BigInterval, BigInterval)> {
    let prec = r.precision();
    let mut re = BigInterval::zero(prec);
    let mut im = BigInterval::zero(prec);
    for (&m, c) in &u.modes {
        let (a, b) = eval_single(&SingleModeSeries { k: u.k, m, coeffs: c.clone() }, r, theta)?;
        re = re.add(&a);
        im = im.add(&b);
    }
    Ok((re, im))
}

/// Polar lattice for plotting, `nr` radii in `[0, 1]` and `ntheta`
/// angles in `[0, 2π)`.
#[derive(Clone, Copy, Debug)]
pub struct PolarGrid {
    pub nr: usize,
    pub ntheta: usize,
}

/// Write `r,theta,re,im` rows using enclosure midpoints.
pub fn write_grid_csv<W: Write>(u: &ZernikeSeries<BigInterval>, grid: PolarGrid, prec: Precision, out: &mut W) -> Result<()> {
    writeln!(out, "r,theta,re,im")?;
    let nr = grid.nr.max(2);
    for i in 0..nr {
        let r = i as f64 / (nr - 1) as f64;
        for j in 0..grid.ntheta.max(1) {
            let t = 2.0 * std::f64::consts::PI * j as f64 / grid.ntheta.max(1) as f64;
            let (re, im) = eval(u, &BigInterval::from_f64(r, prec), &BigInterval::from_f64(t, prec))?;
            writeln!(out, "{r:.17e},{t:.17e},{:.17e},{:.17e}", re.mid_f64(), im.mid_f64())?;
        }
    }
    Ok(())
}
