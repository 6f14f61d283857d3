//! Exact rational reference computations shared by the tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use diskcap::interval::{BigInterval, Precision};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap()
}

/// True if the exact rational lies in the MPFR interval. The rational
/// is enclosed with 512 guard bits, so only values within that distance
/// of an endpoint can give a false negative.
pub fn big_contains(iv: &BigInterval, x: &Q) -> bool {
    let prec = Precision::new(iv.prec() + 512).unwrap();
    let n = x.numer().to_string();
    let d = x.denom().to_string();
    let num = BigInterval::from_decimal_pair(&n, &n, prec).unwrap();
    let den = BigInterval::from_decimal_pair(&d, &d, prec).unwrap();
    num.checked_div(&den).unwrap().subset_of(iv)
}

pub fn binom(n: i64, k: i64) -> Q {
    if k < 0 || k > n {
        return Q::zero();
    }
    let mut acc = Q::one();
    for i in 0..k {
        acc = acc * q(n - i, i + 1);
    }
    acc
}

/// Dense polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<Q>);

impl Poly {
    pub fn constant(c: Q) -> Poly {
        Poly(vec![c])
    }

    pub fn x() -> Poly {
        Poly(vec![Q::zero(), Q::one()])
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n)
            .map(|i| self.0.get(i).cloned().unwrap_or_else(Q::zero) + o.0.get(i).cloned().unwrap_or_else(Q::zero))
            .collect())
    }

    pub fn scale(&self, c: &Q) -> Poly {
        Poly(self.0.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(Q::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::constant(Q::zero());
        }
        Poly(self.0.iter().enumerate().skip(1).map(|(i, c)| c * Q::from_integer(BigInt::from(i))).collect())
    }

    /// `∫_{-1}^{1} p(x) dx`.
    pub fn integral(&self) -> Q {
        let mut acc = Q::zero();
        for (j, c) in self.0.iter().enumerate() {
            if j % 2 == 0 {
                acc += c * q(2, j as i64 + 1);
            }
        }
        acc
    }
}

/// `(1-x)^k (1+x)^m`.
pub fn weight_poly(k: u32, m: u32) -> Poly {
    let one_minus = Poly(vec![Q::one(), -Q::one()]);
    let one_plus = Poly(vec![Q::one(), Q::one()]);
    one_minus.pow(k).mul(&one_plus.pow(m))
}

pub fn weighted_integral(p: &Poly, k: u32, m: u32) -> Q {
    p.mul(&weight_poly(k, m)).integral()
}

/// Classical Jacobi polynomials from the explicit binomial sum
/// `P_n = sum_s binom(n+k, n-s) binom(n+m, s) ((x-1)/2)^s ((x+1)/2)^{n-s}`.
pub fn jacobi_explicit(k: u32, m: u32, nmax: usize) -> Vec<Poly> {
    let half_minus = Poly(vec![q(-1, 2), q(1, 2)]);
    let half_plus = Poly(vec![q(1, 2), q(1, 2)]);
    (0..=nmax)
        .map(|n| {
            let n = n as i64;
            let mut acc = Poly::constant(Q::zero());
            for s in 0..=n {
                let c = binom(n + k as i64, n - s) * binom(n + m as i64, s);
                let t = half_minus.pow(s as u32).mul(&half_plus.pow((n - s) as u32)).scale(&c);
                acc = acc.add(&t);
            }
            acc
        })
        .collect()
}

/// Coefficients of `x^d` in the Jacobi basis, exact, by projecting with
/// the exact integrals.
pub fn monomial_in_jacobi(k: u32, m: u32, d: usize) -> Vec<Q> {
    let polys = jacobi_explicit(k, m, d);
    let mono = {
        let mut v = vec![Q::zero(); d + 1];
        v[d] = Q::one();
        Poly(v)
    };
    polys
        .iter()
        .map(|p| weighted_integral(&mono.mul(p), k, m) / weighted_integral(&p.mul(p), k, m))
        .collect()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

pub fn monomial(d: usize) -> Poly {
    let mut v = vec![Q::zero(); d + 1];
    v[d] = Q::one();
    Poly(v)
}

/// Tight MPFR enclosure of a rational.
pub fn enclose(c: &Q, prec: Precision) -> BigInterval {
    let n = c.numer().to_string();
    let d = c.denom().to_string();
    let p = Precision::new(prec.bits() + 64).unwrap();
    let num = BigInterval::from_decimal_pair(&n, &n, p).unwrap();
    let den = BigInterval::from_decimal_pair(&d, &d, p).unwrap();
    num.checked_div(&den).unwrap().with_prec(prec)
}
