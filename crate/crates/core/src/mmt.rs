//! Matrix multiplication transform.
//!
//! The forward matrix maps Jacobi coefficients to values on Gauss
//! nodes, `M[j][n] = P_n(x_j)`. When the polynomial family and the node
//! family agree, the inverse is explicit:
//! `Minv[n][j] = w_j P_n(x_j) / W_n`, so no matrix is ever inverted.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interval::{BigInterval, IntervalMatrix, Precision, Scalar};
use crate::jacobi::{self, EvalMethod, JacobiWeight, RecurrenceTable};
use crate::quadrature::{self, QuadratureConfig, QuadratureRule};

/// Shared precision policy and cache of certified rules and matrices.
pub struct MmtContext {
    pub prec: Precision,
    pub max_prec: Precision,
    /// Target for the scaled entry radius, see [`TransformPair::scaled_error`].
    pub accuracy: f64,
    pub method: EvalMethod,
    rules: Mutex<HashMap<(JacobiWeight, usize, Precision), Arc<QuadratureRule>>>,
    pairs: Mutex<HashMap<PairKey, Arc<TransformPair>>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct PairKey {
    basis: JacobiWeight,
    nodes_from: JacobiWeight,
    order: usize,
    degree: usize,
    method: EvalMethod,
    inverse: bool,
}

impl MmtContext {
    pub fn new(prec: Precision) -> Self {
        MmtContext {
            prec,
            max_prec: Precision::new_unchecked((prec.bits() * 16).min(8192)),
            accuracy: 1e-16,
            method: EvalMethod::Forsythe,
            rules: Mutex::new(HashMap::new()),
            pairs: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_accuracy(mut self, accuracy: f64) -> Self {
        self.accuracy = accuracy;
        self
    }

    pub fn with_method(mut self, method: EvalMethod) -> Self {
        self.method = method;
        self
    }

    pub fn with_max_prec(mut self, max_prec: Precision) -> Self {
        self.max_prec = max_prec.max(self.prec);
        self
    }

    /// Certified rule for `w` with `order + 1` nodes at (at least) `prec`.
    pub fn rule(&self, w: JacobiWeight, order: usize, prec: Precision) -> Result<Arc<QuadratureRule>> {
        if let Some(r) = self.rules.lock().unwrap().get(&(w, order, prec)) {
            return Ok(r.clone());
        }
        let cfg = QuadratureConfig { prec, max_prec: self.max_prec.max(prec) };
        let rule = Arc::new(quadrature::gauss_jacobi(w, order, cfg)?);
        self.rules.lock().unwrap().insert((w, order, prec), rule.clone());
        Ok(rule)
    }

    /// Cached forward (and optionally inverse) transform.
    pub fn pair(
        &self,
        basis: JacobiWeight,
        nodes_from: JacobiWeight,
        order: usize,
        degree: usize,
        inverse: bool,
    ) -> Result<Arc<TransformPair>> {
        let method = if self.method == EvalMethod::Eigvec && (basis != nodes_from || degree > order) {
            EvalMethod::Forsythe
        } else {
            self.method
        };
        let key = PairKey { basis, nodes_from, order, degree, method, inverse };
        if let Some(p) = self.pairs.lock().unwrap().get(&key) {
            return Ok(p.clone());
        }
        let mut pair = build_mmt(basis, nodes_from, order, degree, method, self)?;
        if inverse {
            pair = build_immt(pair)?;
        }
        let pair = Arc::new(pair);
        self.pairs.lock().unwrap().insert(key, pair.clone());
        Ok(pair)
    }

    pub fn max_bits_used(&self) -> u32 {
        self.pairs.lock().unwrap().values().map(|p| p.prec.bits()).max().unwrap_or(self.prec.bits())
    }
}

#[derive(Clone, Debug)]
pub struct TransformPair {
    pub basis: JacobiWeight,
    pub nodes_from: JacobiWeight,
    pub order: usize,
    /// Highest polynomial degree, the forward matrix has `degree + 1`
    /// columns.
    pub degree: usize,
    pub method: EvalMethod,
    pub prec: Precision,
    pub rule: Arc<QuadratureRule>,
    /// `(order + 1) x (degree + 1)`, `M[j][n] = P_n(x_j)`.
    pub forward: IntervalMatrix<BigInterval>,
    /// `(order + 1) x (order + 1)`, present only for matching weights.
    pub inverse: Option<IntervalMatrix<BigInterval>>,
}

/// Extra working bits for the interval recurrence; its radius can grow
/// by up to `1 + sqrt 2` per step near the interval ends.
fn forsythe_extra_bits(degree: usize) -> u32 {
    (1.3 * degree as f64).ceil() as u32 + 16
}

fn forward_at(
    basis: JacobiWeight,
    rule: &QuadratureRule,
    degree: usize,
    method: EvalMethod,
    prec: Precision,
) -> Result<IntervalMatrix<BigInterval>> {
    let rows: Vec<Vec<BigInterval>> = match method {
        EvalMethod::Forsythe => {
            let table = RecurrenceTable::<BigInterval>::new(basis, degree.max(1), prec);
            rule.nodes.par_iter().map(|x| table.eval_all(degree, x)).collect()
        }
        EvalMethod::Linsys => rule
            .nodes
            .par_iter()
            .map(|x| jacobi::eval_linear_system::<BigInterval>(basis, degree, x, prec))
            .collect::<Result<_>>()?,
        EvalMethod::Eigvec => {
            if basis != rule.weight {
                return Err(Error::UnsupportedOperator(
                    "eigenvector evaluation needs the node weight to match the basis".into(),
                ));
            }
            let m = rule.eigvec_values(degree)?;
            (0..m.rows()).map(|j| m.row(j).to_vec()).collect()
        }
    };
    Ok(IntervalMatrix::from_fn(rule.len(), degree + 1, |j, n| rows[j][n].clone()))
}

/// Forward transform for polynomials of `basis` up to `degree` on the
/// `order + 1` Gauss nodes of `nodes_from`. Precision is raised until
/// the scaled error guard of the context holds.
pub fn build_mmt(
    basis: JacobiWeight,
    nodes_from: JacobiWeight,
    order: usize,
    degree: usize,
    method: EvalMethod,
    ctx: &MmtContext,
) -> Result<TransformPair> {
    let mut prec = match method {
        EvalMethod::Forsythe => Precision::new_unchecked(ctx.prec.bits() + forsythe_extra_bits(degree)),
        _ => ctx.prec,
    };
    loop {
        let rule = ctx.rule(nodes_from, order, prec)?;
        let work = rule.prec.max(prec);
        let forward = forward_at(basis, &rule, degree, method, work)?;
        let pair = TransformPair { basis, nodes_from, order, degree, method, prec: work, rule, forward, inverse: None };
        let err = pair.scaled_error();
        if err <= ctx.accuracy {
            return Ok(pair);
        }
        if work >= ctx.max_prec {
            return Err(Error::ConditioningExceeded { degree, radius: err });
        }
        prec = work.doubled().min(ctx.max_prec);
    }
}

/// Attach the explicit inverse `Minv[n][j] = w_j P_n(x_j) / W_n`.
pub fn build_immt(mut pair: TransformPair) -> Result<TransformPair> {
    if pair.basis != pair.nodes_from {
        return Err(Error::MissingInverse(format!(
            "basis {} differs from node weight {}",
            pair.basis, pair.nodes_from
        )));
    }
    let n = pair.order + 1;
    let rule = pair.rule.clone();
    let prec = pair.prec;
    let vals: Vec<Vec<BigInterval>> = if pair.degree >= pair.order {
        (0..n).map(|j| pair.forward.row(j)[..n].to_vec()).collect()
    } else {
        let m = forward_at(pair.basis, &rule, pair.order, pair.method, prec)?;
        (0..n).map(|j| m.row(j).to_vec()).collect()
    };
    let inv_w: Vec<BigInterval> = (0..n)
        .map(|k| {
            let w: BigInterval = jacobi::scaling_factor(pair.basis, k, prec)?;
            BigInterval::one(prec).checked_div(&w)
        })
        .collect::<Result<_>>()?;
    let inverse = IntervalMatrix::from_fn(n, n, |k, j| rule.weights[j].mul(&vals[j][k]).mul(&inv_w[k]));
    pair.inverse = Some(inverse);
    Ok(pair)
}

impl TransformPair {
    /// Largest entry radius measured against the orthonormal scale,
    /// `rad M[j][n] / sqrt(W_n / w_j)` and `rad Minv[n][j] / sqrt(w_j / W_n)`.
    /// Both scales bound the entries themselves, by the Christoffel
    /// identity `sum_n w_j P_n(x_j)^2 / W_n = 1`.
    pub fn scaled_error(&self) -> f64 {
        let w: Vec<f64> = self.rule.weights.iter().map(|v| v.mid_f64()).collect();
        let cols = self.forward.cols().max(self.inverse.as_ref().map_or(0, |m| m.rows()));
        let s: Vec<f64> = (0..cols).map(|n| quadrature::scaling_f64(self.basis, n)).collect();
        let mut worst = 0.0f64;
        for j in 0..self.forward.rows() {
            for n in 0..self.forward.cols() {
                let e = self.forward.get(j, n);
                let scale = (s[n] / w[j]).sqrt();
                worst = worst.max(scaled(e, scale));
            }
        }
        if let Some(inv) = &self.inverse {
            for n in 0..inv.rows() {
                for j in 0..inv.cols() {
                    let scale = (w[j] / s[n]).sqrt();
                    worst = worst.max(scaled(inv.get(n, j), scale));
                }
            }
        }
        worst
    }

    pub fn inverse(&self) -> Result<&IntervalMatrix<BigInterval>> {
        self.inverse.as_ref().ok_or_else(|| Error::MissingInverse("cross-weight transform".into()))
    }
}

fn scaled(e: &BigInterval, scale: f64) -> f64 {
    if !e.is_finite() || !scale.is_finite() || scale <= 0.0 {
        return f64::INFINITY;
    }
    e.rad_f64() / scale
}

/// Zero padding `a -> (a, 0, ..., 0)` to length `target + 1`.
pub fn pad<S: Scalar>(a: &[S], target: usize, prec: Precision) -> Result<Vec<S>> {
    if a.len() > target + 1 {
        return Err(Error::PadTooShort { from: a.len(), to: target + 1 });
    }
    let mut out = a.to_vec();
    out.resize(target + 1, S::zero(prec));
    Ok(out)
}

/// Values on the nodes of coefficient vector `a` (zero padded to the
/// degree of the pair).
pub fn to_grid(pair: &TransformPair, a: &[BigInterval]) -> Result<Vec<BigInterval>> {
    let a = pad(a, pair.degree, pair.prec)?;
    pair.forward.matvec(&a)
}

pub fn to_coeffs(pair: &TransformPair, f: &[BigInterval]) -> Result<Vec<BigInterval>> {
    let inv = pair.inverse()?;
    inv.matvec(f)
}

pub fn hadamard<S: Scalar>(u: &[S], v: &[S]) -> Result<Vec<S>> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), found: v.len() });
    }
    Ok(u.iter().zip(v).map(|(a, b)| a.mul(b)).collect())
}
