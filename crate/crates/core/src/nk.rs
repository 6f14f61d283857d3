//! Newton–Kantorovich radii polynomial.
//!
//! Given bounds `Y0 >= |A F(x0)|`, `Z1 >= |I - A DF(x0)|` and
//! `Z2(r) >= sup_{|c - x0| <= r} |A (DF(c) - DF(x0))| / r`, a zero of `F`
//! exists, is unique and lies within `r` of `x0` as soon as
//!
//! ```text
//! p(r) = Z2(r) r^2 - (1 - Z1) r + Y0 < 0.
//! ```
//!
//! All evaluation is done in double interval arithmetic and a probe
//! counts only if the upper end of `p(r)` is negative.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// The `Z2` bound, constant or depending on the radius.
#[derive(Clone)]
pub enum Z2Bound {
    Constant(Interval),
    Function(Arc<dyn Fn(f64) -> Interval + Send + Sync>),
}

impl Z2Bound {
    pub fn at(&self, r: f64) -> Interval {
        match self {
            Z2Bound::Constant(z) => *z,
            Z2Bound::Function(f) => f(r),
        }
    }
}

impl fmt::Debug for Z2Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Z2Bound::Constant(z) => write!(f, "Constant({z:?})"),
            Z2Bound::Function(_) => write!(f, "Function(..)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RadiiData {
    pub y0: Interval,
    pub z1: Interval,
    pub z2: Z2Bound,
}

impl RadiiData {
    pub fn new(y0: Interval, z1: Interval, z2: Interval) -> Self {
        RadiiData { y0, z1, z2: Z2Bound::Constant(z2) }
    }
}

/// Candidate radii: start just above `Y0 / (1 - Z1)` and grow
/// geometrically. The first negative probe wins.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeSchedule {
    pub safety: f64,
    pub growth: f64,
    pub max_probes: usize,
}

impl Default for ProbeSchedule {
    fn default() -> Self {
        ProbeSchedule { safety: (-20f64).exp2(), growth: 0.25f64.exp2(), max_probes: 256 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifiedRadius {
    pub r0: f64,
    pub p_hi: f64,
    pub probes: usize,
    pub schedule: ProbeSchedule,
}

/// Enclosure of `p(r)`.
pub fn radii_polynomial(data: &RadiiData, r: f64) -> Interval {
    let ri = Interval::point(r);
    data.z2.at(r) * ri.sqr() - (Interval::ONE - data.z1) * ri + data.y0
}

pub fn certify(data: &RadiiData) -> Result<CertifiedRadius> {
    certify_with(data, ProbeSchedule::default())
}

pub fn certify_with(data: &RadiiData, schedule: ProbeSchedule) -> Result<CertifiedRadius> {
    for (name, v) in [("Y0", data.y0), ("Z1", data.z1)] {
        v.ensure_finite(name)?;
        if v.hi() < 0.0 {
            return Err(Error::Domain(format!("{name} bound is negative")));
        }
    }
    let z1 = data.z1.hi();
    if z1 >= 1.0 {
        return Err(Error::InverseTooPoor { z1 });
    }
    let slack = Interval::ONE - Interval::point(z1);
    let base = (Interval::point(data.y0.hi()) / slack).hi() * (1.0 + schedule.safety);
    let mut r = if base > 0.0 { base } else { f64::MIN_POSITIVE };
    let mut best = (r, f64::INFINITY);
    for probe in 1..=schedule.max_probes {
        let z2 = data.z2.at(r);
        z2.ensure_finite("Z2")?;
        let p = radii_polynomial(data, r);
        if p.hi() < 0.0 {
            return Ok(CertifiedRadius { r0: r, p_hi: p.hi(), probes: probe, schedule });
        }
        if p.hi() < best.1 {
            best = (r, p.hi());
        }
        r *= schedule.growth;
        if !r.is_finite() {
            break;
        }
    }
    Err(Error::RadiiPolynomialFails { best_r: best.0, best_p: best.1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_published_radius() {
        // m = -1 row of the published table
        let data = RadiiData::new(Interval::point(1.57e-14), Interval::point(0.149), Interval::point(0.46));
        let c = certify(&data).unwrap();
        assert!((c.r0 / 1.85e-14 - 1.0).abs() < 0.01, "{}", c.r0);
        assert_eq!(c.probes, 1);
        assert!(radii_polynomial(&data, c.r0).hi() < 0.0);
    }

    #[test]
    fn small_y0_gives_proportional_radius() {
        let data = RadiiData::new(Interval::point(1e-14), Interval::point(0.149), Interval::point(0.46));
        let c = certify(&data).unwrap();
        assert!((c.r0 * 0.851 / 1e-14 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn z1_at_least_one_is_rejected() {
        let data = RadiiData::new(Interval::point(1e-10), Interval::point(1.0), Interval::point(1.0));
        assert!(matches!(certify(&data), Err(Error::InverseTooPoor { .. })));
    }

    #[test]
    fn large_y0_fails_with_best_probe() {
        let data = RadiiData::new(Interval::point(1.0), Interval::point(0.5), Interval::point(1.0));
        match certify(&data) {
            Err(Error::RadiiPolynomialFails { best_r, best_p }) => {
                assert!(best_r > 0.0);
                assert!(best_p > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_residual_still_certifies() {
        let data = RadiiData::new(Interval::ZERO, Interval::point(0.1), Interval::point(3.0));
        let c = certify(&data).unwrap();
        assert!(c.r0 > 0.0 && c.r0 < 1e-300);
    }

    #[test]
    fn radius_dependent_z2() {
        let z2 = Z2Bound::Function(Arc::new(|r: f64| Interval::point(1.0 + r)));
        let data = RadiiData { y0: Interval::point(1e-8), z1: Interval::point(0.2), z2 };
        let c = certify(&data).unwrap();
        assert!(c.r0 < 2e-8);
    }
}
