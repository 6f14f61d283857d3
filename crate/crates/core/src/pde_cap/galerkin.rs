//! Plain double precision Galerkin model used to find `U0` and `A^N`.
//! Nothing here is rigorous.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::interval::{Interval, Precision};
use crate::jacobi::JacobiWeight;
use crate::quadrature::{eval_f64, scaling_f64, FloatRule};
use crate::zernike::{SequenceOperator, Space};

use super::Problem;

/// Truncated model of `F_m` on `π^N`.
pub struct Galerkin {
    pub problem: Problem,
    pub n: usize,
    /// `π^N Δ0^{-1} (R^-)^m` (or `π^N Δ0^{-1}`), `(N + 1) x (N + 2)`.
    linear: DMatrix<f64>,
    /// `(R^+_{0,0})^{-1}` on `π^N`, only for `m = -1`.
    inv_r: Option<DMatrix<f64>>,
    /// Node values of the multiplier basis, nodes x `(N + 1)`.
    mult_basis: DMatrix<f64>,
    /// Node values of the argument basis, nodes x `(N + 1)`.
    arg_basis: DMatrix<f64>,
    /// Rows `0..N+2` of the inverse transform, `(N + 2)` x nodes.
    inverse: DMatrix<f64>,
}

fn mid_matrix(a: &crate::interval::IntervalMatrix<Interval>) -> DMatrix<f64> {
    a.mid_f64()
}

impl Galerkin {
    pub fn new(problem: Problem, n: usize) -> Result<Self> {
        let prec = Precision::DOUBLE;
        let linear = mid_matrix(&problem.linear_block::<Interval>(n, prec)?);
        let inv_r = if problem.m < 0 {
            Some(mid_matrix(&SequenceOperator::InvRPlus.matrix::<Interval>(Space::new(0, 1), n + 1, n + 1, prec)?))
        } else {
            None
        };
        let mult_w = JacobiWeight::new(0, problem.multiplier_mode().unsigned_abs());
        let arg_w = JacobiWeight::new(0, problem.q());
        let out_w = JacobiWeight::new(0, problem.product_mode().unsigned_abs());
        // degree of multiplier + argument + output row
        let order = (3 * n + 1).div_ceil(2);
        let rule = FloatRule::new(out_w, order);
        let nodes = rule.nodes.len();
        let mut mult_basis = DMatrix::zeros(nodes, n + 1);
        let mut arg_basis = DMatrix::zeros(nodes, n + 1);
        let mut inverse = DMatrix::zeros(n + 2, nodes);
        let scale: Vec<f64> = (0..n + 2).map(|i| scaling_f64(out_w, i)).collect();
        for (j, &x) in rule.nodes.iter().enumerate() {
            for (l, v) in eval_f64(mult_w, n, x).into_iter().enumerate() {
                mult_basis[(j, l)] = v;
            }
            for (l, v) in eval_f64(arg_w, n, x).into_iter().enumerate() {
                arg_basis[(j, l)] = v;
            }
            for (i, v) in eval_f64(out_w, n + 1, x).into_iter().enumerate() {
                inverse[(i, j)] = rule.weights[j] * v / scale[i];
            }
        }
        Ok(Galerkin { problem, n, linear, inv_r, mult_basis, arg_basis, inverse })
    }

    fn multiplier(&self, u: &DVector<f64>) -> DVector<f64> {
        match &self.inv_r {
            Some(a) => a * u,
            None => u.clone(),
        }
    }

    /// Rows `0..N+2` of `h -> a * h` for `h` on `π^N`.
    fn product_matrix(&self, a: &DVector<f64>) -> DMatrix<f64> {
        let vals = &self.mult_basis * a;
        let mut scaled = self.arg_basis.clone();
        for (j, v) in vals.iter().enumerate() {
            scaled.row_mut(j).scale_mut(*v);
        }
        &self.inverse * scaled
    }

    pub fn residual(&self, u: &DVector<f64>) -> DVector<f64> {
        let p = self.product_matrix(&self.multiplier(u));
        u + &self.linear * (p * u)
    }

    pub fn jacobian(&self, u: &DVector<f64>) -> DMatrix<f64> {
        let p = self.product_matrix(&self.multiplier(u));
        DMatrix::identity(self.n + 1, self.n + 1) + 2.0 * &self.linear * p
    }
}

#[derive(Clone, Debug)]
pub struct NewtonReport {
    pub u: Vec<f64>,
    pub history: Vec<f64>,
}

pub const NEWTON_TOL: f64 = 1e-13;
const MAX_ITER: usize = 60;

/// Newton on the Galerkin model. Stops at `||F||_1 < 1e-13`, or once the
/// residual stops decreasing at rounding level.
pub fn newton(g: &Galerkin, guess: &[f64]) -> Result<NewtonReport> {
    let n = g.n;
    let mut u = DVector::from_iterator(n + 1, (0..=n).map(|i| guess.get(i).copied().unwrap_or(0.0)));
    let mut history = Vec::new();
    let mut f = g.residual(&u);
    let mut norm = f.lp_norm(1);
    history.push(norm);
    let mut best = (norm, u.clone());
    for _ in 0..MAX_ITER {
        if !norm.is_finite() || norm < NEWTON_TOL {
            break;
        }
        let jac = g.jacobian(&u);
        let step = jac.lu().solve(&f).ok_or(Error::SingularJacobian)?;
        u -= step;
        f = g.residual(&u);
        let next = f.lp_norm(1);
        history.push(next);
        if next < best.0 {
            best = (next, u.clone());
        }
        // stagnation at rounding level
        let floor = 64.0 * f64::EPSILON * u.lp_norm(1).max(1.0);
        if next >= 0.5 * norm && next < floor {
            break;
        }
        norm = next;
    }
    let (norm, u) = best;
    let floor = 1e-8 * u.lp_norm(1).max(1.0);
    if !norm.is_finite() || norm > floor {
        return Err(Error::Divergence { history });
    }
    Ok(NewtonReport { u: u.iter().copied().collect(), history })
}

/// Seed from the radial profile. With `u = r^q g`, `g` solves
/// `g'' + (2q+1)/r g' + r^{p+q} g^2 = 0`, `g(0) = 1`; if `ρ` is its first
/// zero then `u(r) = r^q ρ^{p+q+2} g(ρ r)` vanishes at `r = 1`.
pub fn shooting_seed(problem: Problem, n: usize) -> Result<Vec<f64>> {
    let q = problem.q() as f64;
    let a = (problem.radial_power() + problem.q() as i32) as f64;
    let profile = RadialProfile::integrate(q, a)?;
    let w = JacobiWeight::new(0, problem.q());
    let rule = FloatRule::new(w, 2 * n + 2);
    let s = profile.zero;
    let amp = s.powf(a + 2.0);
    let mut c = vec![0.0; n + 1];
    for (&x, &wt) in rule.nodes.iter().zip(&rule.weights) {
        let r = ((1.0 + x) / 2.0).max(0.0).sqrt();
        let h = amp * profile.value(s * r);
        for (i, p) in eval_f64(w, n, x).into_iter().enumerate() {
            c[i] += wt * h * p;
        }
    }
    for (i, ci) in c.iter_mut().enumerate() {
        *ci /= scaling_f64(w, i);
    }
    Ok(c)
}

struct RadialProfile {
    /// `g ≈ 1 - c r^b` below `r0`
    c: f64,
    b: f64,
    r0: f64,
    h: f64,
    g: Vec<f64>,
    dg: Vec<f64>,
    zero: f64,
}

impl RadialProfile {
    fn integrate(q: f64, a: f64) -> Result<Self> {
        let rhs = |r: f64, g: f64, d: f64| -> (f64, f64) { (d, -(2.0 * q + 1.0) / r * d - r.powf(a) * g * g) };
        // series start away from the regular singular point
        let b = a + 2.0;
        let c = 1.0 / (b * (b + 2.0 * q));
        let r0: f64 = 1e-3;
        let h = 1e-4;
        let (mut g, mut d) = (1.0 - c * r0.powf(b), -c * b * r0.powf(b - 1.0));
        let mut gs = vec![g];
        let mut ds = vec![d];
        let mut r = r0;
        for _ in 0..2_000_000 {
            let (k1g, k1d) = rhs(r, g, d);
            let (k2g, k2d) = rhs(r + h / 2.0, g + h / 2.0 * k1g, d + h / 2.0 * k1d);
            let (k3g, k3d) = rhs(r + h / 2.0, g + h / 2.0 * k2g, d + h / 2.0 * k2d);
            let (k4g, k4d) = rhs(r + h, g + h * k3g, d + h * k3d);
            let ng = g + h / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
            let nd = d + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
            if ng <= 0.0 {
                // Newton on the cubic Hermite piece
                let mut t = g / (g - ng);
                for _ in 0..50 {
                    let (v, dv) = hermite(g, d * h, ng, nd * h, t);
                    let step = v / dv;
                    t -= step;
                    if step.abs() < 1e-16 {
                        break;
                    }
                }
                gs.push(ng);
                ds.push(nd);
                return Ok(RadialProfile { c, b, r0, h, g: gs, dg: ds, zero: r + t * h });
            }
            g = ng;
            d = nd;
            r += h;
            gs.push(g);
            ds.push(d);
        }
        Err(Error::Shooting("no zero of the radial profile found".into()))
    }

    fn value(&self, r: f64) -> f64 {
        if r <= self.r0 {
            return 1.0 - self.c * r.powf(self.b);
        }
        let s = (r - self.r0) / self.h;
        let i = (s.floor() as usize).min(self.g.len() - 2);
        let t = s - i as f64;
        hermite(self.g[i], self.dg[i] * self.h, self.g[i + 1], self.dg[i + 1] * self.h, t).0
    }
}

/// Cubic Hermite value and `t`-derivative.
fn hermite(p0: f64, m0: f64, p1: f64, m1: f64, t: f64) -> (f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    let v = (2.0 * t3 - 3.0 * t2 + 1.0) * p0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * p1 + (t3 - t2) * m1;
    let dv = (6.0 * t2 - 6.0 * t) * p0 + (3.0 * t2 - 4.0 * t + 1.0) * m0 + (-6.0 * t2 + 6.0 * t) * p1 + (3.0 * t2 - 2.0 * t) * m1;
    (v, dv)
}
