//! Jacobi polynomials `P_n^{(k,m)}` for the weight `(1-x)^k (1+x)^m`.
//!
//! Normalisation is the classical one, `P_n(1) = binom(n+k, n)`. The
//! three-term recurrence
//!
//! ```text
//! p_{n+1}(x) = (alpha_n x - beta_n) p_n(x) - gamma_n p_{n-1}(x)
//! ```
//!
//! has rational coefficients which are kept exact and enclosed at the
//! requested precision only when used. Two evaluation methods live
//! here: the interval Forsythe recurrence and a Newton–Kantorovich
//! certified solve of the lower-banded linear system that the
//! recurrence defines. A third method, via certified eigenvectors, is in
//! [`crate::quadrature`].

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, Precision, Scalar};
use crate::nk::{self, RadiiData};

pub type Rational = Ratio<i128>;

/// Jacobi weight `(1-x)^k (1+x)^m` on `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JacobiWeight {
    pub k: u32,
    pub m: u32,
}

impl JacobiWeight {
    pub fn new(k: u32, m: u32) -> Self {
        JacobiWeight { k, m }
    }

    fn km(&self) -> (i128, i128) {
        (self.k as i128, self.m as i128)
    }
}

impl std::fmt::Display for JacobiWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.k, self.m)
    }
}

pub fn alpha(w: JacobiWeight, n: usize) -> Rational {
    let (k, m) = w.km();
    let n = n as i128;
    Rational::new((2 * n + k + m + 1) * (2 * n + k + m + 2), 2 * (n + 1) * (n + k + m + 1))
}

/// `beta_0 = (m - k)/2`, and zero whenever `k = m` so the `0/0` at
/// `n = 0, k = m = 0` never arises.
pub fn beta(w: JacobiWeight, n: usize) -> Rational {
    let (k, m) = w.km();
    if k == m {
        return Rational::from_integer(0);
    }
    let n = n as i128;
    Rational::new((m * m - k * k) * (2 * n + k + m + 1), 2 * (n + 1) * (n + k + m + 1) * (2 * n + k + m))
}

/// `gamma_0` multiplies `p_{-1} = 0` and is set to zero.
pub fn gamma(w: JacobiWeight, n: usize) -> Rational {
    if n == 0 {
        return Rational::from_integer(0);
    }
    let (k, m) = w.km();
    let n = n as i128;
    Rational::new((n + k) * (n + m) * (2 * n + k + m + 2), (n + 1) * (n + k + m + 1) * (2 * n + k + m))
}

pub fn enclose<S: Scalar>(q: &Rational, prec: Precision) -> S {
    S::ratio(*q.numer(), *q.denom(), prec).expect("nonzero denominator")
}

/// Interval enclosures of `(alpha_n, beta_n, gamma_n)`.
#[derive(Clone, Debug)]
pub struct RecurrenceCoeffs<S> {
    pub alpha: S,
    pub beta: S,
    pub gamma: S,
}

pub fn recurrence_coeffs<S: Scalar>(w: JacobiWeight, n: usize, prec: Precision) -> RecurrenceCoeffs<S> {
    RecurrenceCoeffs {
        alpha: enclose(&alpha(w, n), prec),
        beta: enclose(&beta(w, n), prec),
        gamma: enclose(&gamma(w, n), prec),
    }
}

/// Recurrence coefficients for `n = 0..len`, enclosed once and reused.
#[derive(Clone, Debug)]
pub struct RecurrenceTable<S> {
    pub weight: JacobiWeight,
    pub prec: Precision,
    coeffs: Vec<RecurrenceCoeffs<S>>,
}

impl<S: Scalar> RecurrenceTable<S> {
    pub fn new(weight: JacobiWeight, len: usize, prec: Precision) -> Self {
        RecurrenceTable { weight, prec, coeffs: (0..len).map(|n| recurrence_coeffs(weight, n, prec)).collect() }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, n: usize) -> &RecurrenceCoeffs<S> {
        &self.coeffs[n]
    }

    /// `p_0(x), ..., p_degree(x)` by the interval Forsythe recurrence.
    pub fn eval_all(&self, degree: usize, x: &S) -> Vec<S> {
        assert!(degree <= self.len(), "recurrence table too short");
        let mut out = Vec::with_capacity(degree + 1);
        out.push(S::one(self.prec));
        if degree == 0 {
            return out;
        }
        let c = &self.coeffs[0];
        out.push(c.alpha.mul(x).sub(&c.beta));
        for n in 1..degree {
            let c = &self.coeffs[n];
            let next = c.alpha.mul(x).sub(&c.beta).mul(&out[n]).sub(&c.gamma.mul(&out[n - 1]));
            out.push(next);
        }
        out
    }
}

/// `p_n(x)` by the interval Forsythe recurrence.
pub fn eval_forsythe<S: Scalar>(w: JacobiWeight, n: usize, x: &S, prec: Precision) -> S {
    let table = RecurrenceTable::<S>::new(w, n.max(1), prec);
    table.eval_all(n, x).pop().unwrap()
}

/// All values `p_0(x) .. p_n(x)` by the interval Forsythe recurrence.
pub fn eval_forsythe_all<S: Scalar>(w: JacobiWeight, n: usize, x: &S, prec: Precision) -> Vec<S> {
    let table = RecurrenceTable::<S>::new(w, n.max(1), prec);
    table.eval_all(n, x)
}

/// Scaling factor `W_n = ∫ p_n^2 (1-x)^k (1+x)^m dx`, that is
///
/// ```text
/// W_n = 2^{k+m+1} / (2n+k+m+1) * prod_{i=1}^{k} (n+i) / (n+m+i)
/// ```
///
/// evaluated as a running product of small rationals so no factorials
/// are formed.
pub fn scaling_factor<S: Scalar>(w: JacobiWeight, n: usize, prec: Precision) -> Result<S> {
    let (k, m) = w.km();
    let n = n as i128;
    let mut acc = S::one(prec);
    let two = S::from_i128(2, prec);
    for _ in 0..(k + m + 1) {
        acc = acc.mul(&two);
    }
    acc = acc.mul(&S::ratio(1, 2 * n + k + m + 1, prec)?);
    for i in 1..=k {
        acc = acc.mul(&S::ratio(n + i, n + m + i, prec)?);
    }
    if acc.contains_zero() {
        return Err(Error::DegenerateScaling(n as usize));
    }
    Ok(acc)
}

/// `∫ (1-x)^k (1+x)^m dx = 2^{k+m+1} k! m! / (k+m+1)!`.
pub fn weight_integral<S: Scalar>(w: JacobiWeight, prec: Precision) -> S {
    scaling_factor(w, 0, prec).expect("weight integral is positive")
}

/// Certified solution of `A(x) p = e_0` where row `i` of the unit
/// lower-banded `A(x)` reads
/// `p_i - (alpha_{i-1} x - beta_{i-1}) p_{i-1} + gamma_{i-1} p_{i-2} = 0`.
///
/// The approximate inverse of `A(mid x)` comes from double precision
/// forward substitution; the residual is computed at the precision of
/// `S` and the Newton–Kantorovich bounds in double intervals. The
/// returned enclosure is `p_hat ± r` in the max norm.
pub fn eval_linear_system<S: Scalar>(w: JacobiWeight, n: usize, x: &S, prec: Precision) -> Result<Vec<S>> {
    let dim = n + 1;
    let table = RecurrenceTable::<S>::new(w, n.max(1), prec);
    // theta_i = -(alpha_{i-1} x - beta_{i-1}) for i >= 1; g_i = gamma_{i-1} for i >= 2
    let theta: Vec<S> = (0..dim)
        .map(|i| if i == 0 { S::zero(prec) } else { table.get(i - 1).alpha.mul(x).sub(&table.get(i - 1).beta).neg() })
        .collect();
    let g: Vec<S> = (0..dim).map(|i| if i < 2 { S::zero(prec) } else { table.get(i - 1).gamma.clone() }).collect();

    // approximate solution by forward substitution on midpoints
    let mut p_hat: Vec<S> = Vec::with_capacity(dim);
    let xm = x.mid_point();
    for i in 0..dim {
        let v = if i == 0 {
            S::one(prec)
        } else {
            let c = table.get(i - 1);
            let t = c.alpha.mid_point().mul(&xm).sub(&c.beta.mid_point()).mul(&p_hat[i - 1]);
            if i >= 2 {
                t.sub(&c.gamma.mid_point().mul(&p_hat[i - 2]))
            } else {
                t
            }
        };
        p_hat.push(v.mid_point());
    }

    // residual A(x) p_hat - e_0, rigorous at the precision of S
    let residual: Vec<Interval> = (0..dim)
        .map(|i| {
            let mut r = p_hat[i].clone();
            if i == 0 {
                r = r.sub(&S::one(prec));
            }
            if i >= 1 {
                r.add_mul(&theta[i], &p_hat[i - 1]);
            }
            if i >= 2 {
                r.add_mul(&g[i], &p_hat[i - 2]);
            }
            r.to_interval()
        })
        .collect();

    let th: Vec<Interval> = theta.iter().map(|v| v.to_interval()).collect();
    let gg: Vec<Interval> = g.iter().map(|v| v.to_interval()).collect();
    let th_mid: Vec<f64> = th.iter().map(|v| v.mid()).collect();
    let g_mid: Vec<f64> = gg.iter().map(|v| v.mid()).collect();

    // B = A(mid x)^{-1}, lower triangular, column by column
    let mut b = vec![0.0f64; dim * dim];
    for j in 0..dim {
        b[j * dim + j] = 1.0;
        for i in j + 1..dim {
            let mut v = -th_mid[i] * b[(i - 1) * dim + j];
            if i >= 2 && i - 2 >= j {
                v -= g_mid[i] * b[(i - 2) * dim + j];
            }
            b[i * dim + j] = v;
        }
    }

    // Y0 = |B r|_inf, Z1 = |I - B A(x)|_inf
    let mut y0 = Interval::ZERO;
    let mut z1 = Interval::ZERO;
    for i in 0..dim {
        let row = &b[i * dim..(i + 1) * dim];
        let mut br = Interval::ZERO;
        for l in 0..=i {
            br += Interval::point(row[l]) * residual[l];
        }
        y0 = y0.max(Interval::point(br.mag()));
        let mut zrow = Interval::ZERO;
        for j in 0..=i {
            // (B A)_{ij} = B_ij + B_{i,j+1} theta_{j+1} + B_{i,j+2} g_{j+2}
            let mut e = Interval::point(row[j]);
            if j < i {
                e += Interval::point(row[j + 1]) * th[j + 1];
            }
            if j + 1 < i {
                e += Interval::point(row[j + 2]) * gg[j + 2];
            }
            let d = if i == j { Interval::ONE - e } else { -e };
            zrow += Interval::point(d.mag());
        }
        z1 = z1.max(zrow);
    }
    let cert = nk::certify(&RadiiData::new(y0, z1, Interval::ZERO))?;
    Ok(p_hat.into_iter().map(|v| v.widen(cert.r0)).collect())
}

/// Which evaluation method to use for Jacobi values at points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMethod {
    Forsythe,
    Linsys,
    Eigvec,
}

impl std::str::FromStr for EvalMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "forsythe" => Ok(EvalMethod::Forsythe),
            "linsys" | "linear" | "linear-system" => Ok(EvalMethod::Linsys),
            "eigvec" | "eigenvector" => Ok(EvalMethod::Eigvec),
            other => Err(Error::Parse(format!("unknown evaluation method {other}"))),
        }
    }
}

/// Largest radius of `p_n` and wall time of each method over `points`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MethodComparison {
    pub n: usize,
    pub forsythe_radius: f64,
    pub linsys_radius: f64,
    pub forsythe_seconds: f64,
    pub linsys_seconds: f64,
}

/// Evaluate `p_0 .. p_n` of `w` at each point with both methods, in
/// multiple precision intervals of `prec`.
pub fn compare_methods(w: JacobiWeight, n: usize, points: &[f64], prec: Precision) -> Result<MethodComparison> {
    use crate::interval::BigInterval;
    use std::time::Instant;
    let xs: Vec<BigInterval> = points.iter().map(|&x| BigInterval::from_f64(x, prec)).collect();
    let clock = Instant::now();
    let mut forsythe_radius = 0.0f64;
    for x in &xs {
        forsythe_radius = forsythe_radius.max(eval_forsythe(w, n, x, prec).rad_f64());
    }
    let forsythe_seconds = clock.elapsed().as_secs_f64();
    let clock = Instant::now();
    let mut linsys_radius = 0.0f64;
    for x in &xs {
        let v = eval_linear_system(w, n, x, prec)?;
        linsys_radius = linsys_radius.max(v[n].rad_f64());
    }
    let linsys_seconds = clock.elapsed().as_secs_f64();
    Ok(MethodComparison { n, forsythe_radius, linsys_radius, forsythe_seconds, linsys_seconds })
}
