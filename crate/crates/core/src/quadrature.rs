//! Certified Gauss–Jacobi quadrature.
//!
//! Nodes are the eigenvalues of the symmetric Jacobi matrix with
//! diagonal `mu_j = beta_j / alpha_j` and off-diagonal
//! `eta_j = sqrt(gamma_j / (alpha_{j-1} alpha_j))`. Every eigenpair is
//! refined in MPFR and then certified by a Newton–Kantorovich argument on
//! `F(lambda, u) = (u.u - 1, T u - lambda u)`. Weights follow from the
//! first eigenvector component, `w_j = Q_0(x_j)^2 ∫ weight`.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use rug::Float;

use crate::error::{Error, Result};
use crate::interval::{BigInterval, Interval, IntervalMatrix, Precision, Scalar};
use crate::jacobi::{self, JacobiWeight, Rational, RecurrenceTable};
use crate::nk::{self, RadiiData};

/// Symmetric tridiagonal Jacobi matrix of size `order + 1`.
#[derive(Clone, Debug)]
pub struct TridiagonalSystem<S> {
    pub weight: JacobiWeight,
    pub order: usize,
    /// `mu_0 .. mu_N`
    pub diag: Vec<S>,
    /// `eta_1 .. eta_N`, `off[j - 1] = eta_j`
    pub off: Vec<S>,
}

fn mu_exact(w: JacobiWeight, j: usize) -> Rational {
    jacobi::beta(w, j) / jacobi::alpha(w, j)
}

fn eta_sq_exact(w: JacobiWeight, j: usize) -> Rational {
    jacobi::gamma(w, j) / (jacobi::alpha(w, j - 1) * jacobi::alpha(w, j))
}

pub fn build_tridiagonal<S: Scalar>(w: JacobiWeight, order: usize, prec: Precision) -> Result<TridiagonalSystem<S>> {
    let diag = (0..=order).map(|j| jacobi::enclose::<S>(&mu_exact(w, j), prec)).collect();
    let off = (1..=order)
        .map(|j| jacobi::enclose::<S>(&eta_sq_exact(w, j), prec).sqrt())
        .collect::<Result<Vec<S>>>()?;
    Ok(TridiagonalSystem { weight: w, order, diag, off })
}

impl<S: Scalar> TridiagonalSystem<S> {
    pub fn dim(&self) -> usize {
        self.order + 1
    }

    pub fn mid_f64(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut t = DMatrix::zeros(n, n);
        for j in 0..n {
            t[(j, j)] = self.diag[j].mid_f64();
        }
        for j in 1..n {
            let e = self.off[j - 1].mid_f64();
            t[(j - 1, j)] = e;
            t[(j, j - 1)] = e;
        }
        t
    }
}

/// One certified eigenpair with a common max-norm radius.
#[derive(Clone, Debug)]
pub struct CertifiedEigenpair {
    pub node: BigInterval,
    pub vector: Vec<BigInterval>,
    pub radius: f64,
    pub y0: f64,
    pub z1: f64,
}

fn f64_inverse(m: DMatrix<f64>) -> Option<DMatrix<f64>> {
    m.try_inverse()
}

/// Refine `(lambda_hat, u_hat)` in MPFR and prove a true eigenpair lies
/// within the returned radius.
pub fn certify_eigenpair(
    t: &TridiagonalSystem<BigInterval>,
    lambda_hat: f64,
    u_hat: &[f64],
) -> Result<CertifiedEigenpair> {
    let n = t.dim();
    if u_hat.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: u_hat.len() });
    }
    let fail = |reason: String| Error::EigenpairFailed { index: 0, reason };
    let prec = t.diag[0].prec();
    let dim = n + 1;

    // approximate inverse of DF at the double precision guess
    let tm = t.mid_f64();
    let mut df = DMatrix::zeros(dim, dim);
    for i in 0..n {
        df[(0, 1 + i)] = 2.0 * u_hat[i];
        df[(1 + i, 0)] = -u_hat[i];
        for j in 0..n {
            df[(1 + i, 1 + j)] = tm[(i, j)] - if i == j { lambda_hat } else { 0.0 };
        }
    }
    let mut a = f64_inverse(df).ok_or_else(|| fail("singular derivative".into()))?;

    // MPFR quasi-Newton refinement
    let mu: Vec<Float> = t.diag.iter().map(|v| v.mid()).collect();
    let eta: Vec<Float> = t.off.iter().map(|v| v.mid()).collect();
    let mut lam = Float::with_val(prec, lambda_hat);
    let mut u: Vec<Float> = u_hat.iter().map(|&v| Float::with_val(prec, v)).collect();
    let tol = (-(prec as f64) + 4.0).exp2();
    for _ in 0..(4 + prec as usize / 8) {
        let mut f = vec![0.0f64; dim];
        let mut s = Float::with_val(prec, -1);
        for ui in &u {
            s += ui * ui;
        }
        f[0] = s.to_f64();
        for i in 0..n {
            let mut r = Float::with_val(prec, &mu[i] * &u[i]);
            r -= &lam * &u[i];
            if i > 0 {
                r += &eta[i - 1] * &u[i - 1];
            }
            if i + 1 < n {
                r += &eta[i] * &u[i + 1];
            }
            f[1 + i] = r.to_f64();
        }
        let mut step_max = 0.0f64;
        for r in 0..dim {
            let mut d = 0.0;
            for c in 0..dim {
                d += a[(r, c)] * f[c];
            }
            step_max = step_max.max(d.abs());
            if r == 0 {
                lam -= d;
            } else {
                u[r - 1] -= d;
            }
        }
        if step_max <= tol {
            break;
        }
    }
    if u[0] < 0 {
        // DF(lambda, -u) = S DF(lambda, u) S with S = diag(-1, I)
        for ui in u.iter_mut() {
            *ui = -ui.clone();
        }
        for c in 1..dim {
            a[(0, c)] = -a[(0, c)];
            a[(c, 0)] = -a[(c, 0)];
        }
    }

    // residual enclosure at the refined point
    let lam_i = BigInterval::point(lam.clone());
    let u_i: Vec<BigInterval> = u.iter().map(|v| BigInterval::point(v.clone())).collect();
    let mut res = Vec::with_capacity(dim);
    let mut s = BigInterval::from_f64(-1.0, Precision::new_unchecked(prec));
    for ui in &u_i {
        s.add_assign(&ui.sqr());
    }
    res.push(s.to_interval());
    for i in 0..n {
        let mut r = t.diag[i].sub(&lam_i).mul(&u_i[i]);
        if i > 0 {
            r.add_mul(&t.off[i - 1], &u_i[i - 1]);
        }
        if i + 1 < n {
            r.add_mul(&t.off[i], &u_i[i + 1]);
        }
        res.push(r.to_interval());
    }

    let ud: Vec<Interval> = u_i.iter().map(|v| v.to_interval()).collect();
    let ld = lam_i.to_interval();
    let mud: Vec<Interval> = t.diag.iter().map(|v| v.to_interval() - ld).collect();
    let etad: Vec<Interval> = t.off.iter().map(|v| v.to_interval()).collect();
    let two = Interval::point(2.0);
    let big_n = Interval::point(2.0 * n as f64);

    let mut y0 = Interval::ZERO;
    let mut z1 = Interval::ZERO;
    let mut z2 = Interval::ZERO;
    for r in 0..dim {
        let row: Vec<Interval> = (0..dim).map(|c| Interval::point(a[(r, c)])).collect();
        let af: Interval = row.iter().zip(&res).map(|(x, y)| *x * *y).sum();
        y0 = y0.max(Interval::point(af.mag()));

        // (A DF)_{r,0} = -sum_i A_{r,1+i} u_i
        let mut c0 = Interval::ZERO;
        for i in 0..n {
            c0 -= row[1 + i] * ud[i];
        }
        let mut zrow = Interval::point((if r == 0 { Interval::ONE - c0 } else { -c0 }).mag());
        for j in 0..n {
            let mut e = row[0] * two * ud[j] + row[1 + j] * mud[j];
            if j > 0 {
                e += row[j] * etad[j - 1];
            }
            if j + 1 < n {
                e += row[2 + j] * etad[j];
            }
            let d = if r == 1 + j { Interval::ONE - e } else { -e };
            zrow += Interval::point(d.mag());
        }
        z1 = z1.max(zrow);

        let tail: Interval = row[1..].iter().map(|v| Interval::point(v.mag())).sum();
        z2 = z2.max(big_n * Interval::point(row[0].mag()) + two * tail);
    }
    let cert = nk::certify(&RadiiData::new(y0, z1, z2)).map_err(|e| fail(e.to_string()))?;
    let r0 = cert.r0;
    Ok(CertifiedEigenpair {
        node: lam_i.widen(r0),
        vector: u_i.iter().map(|v| v.widen(r0)).collect(),
        radius: r0,
        y0: y0.hi(),
        z1: z1.hi(),
    })
}

/// Precision handling for node computation.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureConfig {
    pub prec: Precision,
    /// Precision is doubled on failure up to this many bits.
    pub max_prec: Precision,
}

impl QuadratureConfig {
    pub fn new(prec: Precision) -> Self {
        QuadratureConfig { prec, max_prec: Precision::new_unchecked((prec.bits() * 8).min(4096)) }
    }

    pub fn fixed(prec: Precision) -> Self {
        QuadratureConfig { prec, max_prec: prec }
    }
}

/// Certified nodes and eigenvectors, sorted by node.
#[derive(Clone, Debug)]
pub struct NodeSet {
    pub weight: JacobiWeight,
    pub order: usize,
    pub prec: Precision,
    pub pairs: Vec<CertifiedEigenpair>,
}

fn nodes_at(w: JacobiWeight, order: usize, prec: Precision) -> Result<NodeSet> {
    let t = build_tridiagonal::<BigInterval>(w, order, prec)?;
    let eig = SymmetricEigen::new(t.mid_f64());
    let mut idx: Vec<usize> = (0..t.dim()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let pairs = idx
        .par_iter()
        .enumerate()
        .map(|(pos, &j)| {
            let u: Vec<f64> = eig.eigenvectors.column(j).iter().copied().collect();
            certify_eigenpair(&t, eig.eigenvalues[j], &u).map_err(|e| match e {
                Error::EigenpairFailed { reason, .. } => Error::EigenpairFailed { index: pos, reason },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    for (i, p) in pairs.iter().enumerate() {
        if !(p.node.lo_f64() > -1.0 && p.node.hi_f64() < 1.0) || p.node.lo() <= &-1 || p.node.hi() >= &1 {
            return Err(Error::NodeOutside(i));
        }
        // sorted midpoints plus adjacent disjointness give pairwise disjointness
        if i > 0 && !(pairs[i - 1].node.hi() < p.node.lo()) {
            return Err(Error::NodesOverlap { i: i - 1, j: i });
        }
    }
    Ok(NodeSet { weight: w, order, prec, pairs })
}

fn escalates(e: &Error) -> bool {
    matches!(
        e,
        Error::EigenpairFailed { .. } | Error::NodesOverlap { .. } | Error::NodeOutside(_) | Error::WeightNotPositive(_)
    )
}

fn with_escalation<T>(cfg: QuadratureConfig, mut f: impl FnMut(Precision) -> Result<T>) -> Result<T> {
    let mut prec = cfg.prec;
    loop {
        match f(prec) {
            Err(e) if escalates(&e) && prec < cfg.max_prec => prec = prec.doubled().min(cfg.max_prec),
            other => return other,
        }
    }
}

/// All `order + 1` nodes with disjoint enclosures strictly inside
/// `(-1, 1)`, doubling precision on failure.
pub fn all_nodes(w: JacobiWeight, order: usize, cfg: QuadratureConfig) -> Result<NodeSet> {
    with_escalation(cfg, |prec| nodes_at(w, order, prec))
}

/// Gauss–Jacobi rule exact for polynomials of degree `2 order + 1`.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub weight: JacobiWeight,
    pub order: usize,
    pub prec: Precision,
    pub nodes: Vec<BigInterval>,
    pub weights: Vec<BigInterval>,
    /// Certified normalised eigenvectors, one per node.
    pub vectors: Vec<Vec<BigInterval>>,
}

pub fn compute_weights(set: NodeSet) -> Result<QuadratureRule> {
    let total: BigInterval = jacobi::weight_integral(set.weight, set.prec);
    let mut nodes = Vec::with_capacity(set.pairs.len());
    let mut weights = Vec::with_capacity(set.pairs.len());
    let mut vectors = Vec::with_capacity(set.pairs.len());
    for (i, p) in set.pairs.into_iter().enumerate() {
        let w = p.vector[0].sqr().mul(&total);
        if !(w.lo() > &0) {
            return Err(Error::WeightNotPositive(i));
        }
        nodes.push(p.node);
        weights.push(w);
        vectors.push(p.vector);
    }
    Ok(QuadratureRule { weight: set.weight, order: set.order, prec: set.prec, nodes, weights, vectors })
}

/// Certified nodes and weights in one call.
pub fn gauss_jacobi(w: JacobiWeight, order: usize, cfg: QuadratureConfig) -> Result<QuadratureRule> {
    with_escalation(cfg, |prec| compute_weights(nodes_at(w, order, prec)?))
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exactness(&self) -> usize {
        2 * self.order + 1
    }

    /// `∫ f (1-x)^k (1+x)^m` for `f = sum_n c_n P_n` of degree at most
    /// `2 order + 1`.
    pub fn integrate(&self, coeffs: &[BigInterval]) -> Result<BigInterval> {
        let degree = coeffs.len().saturating_sub(1);
        if degree > self.exactness() {
            return Err(Error::DegreeOverflow { degree, limit: self.exactness() });
        }
        let table = RecurrenceTable::<BigInterval>::new(self.weight, degree.max(1), self.prec);
        let mut acc = BigInterval::zero(self.prec);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let vals = table.eval_all(degree, x);
            let mut f = BigInterval::zero(self.prec);
            for (c, v) in coeffs.iter().zip(&vals) {
                f.add_mul(c, v);
            }
            acc.add_mul(&f, w);
        }
        Ok(acc)
    }

    /// `P_n(x_j)` for `n = 0..=degree` from the certified eigenvectors,
    /// `P_n(x_j) = Q_n / (d_n Q_0)` with `d_0 = 1` and
    /// `d_{i+1} = d_i sqrt(alpha_{i+1} / (alpha_i gamma_{i+1}))`. Row `j`
    /// is node `j`. Only degrees up to `order` are available.
    pub fn eigvec_values(&self, degree: usize) -> Result<IntervalMatrix<BigInterval>> {
        if degree > self.order {
            return Err(Error::DegreeOverflow { degree, limit: self.order });
        }
        let w = self.weight;
        let mut d = vec![BigInterval::one(self.prec)];
        for i in 0..degree {
            let ratio = jacobi::alpha(w, i + 1) / (jacobi::alpha(w, i) * jacobi::gamma(w, i + 1));
            let f = jacobi::enclose::<BigInterval>(&ratio, self.prec).sqrt()?;
            let next = d[i].mul(&f);
            d.push(next);
        }
        let mut out = IntervalMatrix::zeros(self.len(), degree + 1, self.prec);
        for (j, q) in self.vectors.iter().enumerate() {
            for (n, dn) in d.iter().enumerate() {
                out.set(j, n, q[n].checked_div(&dn.mul(&q[0]))?);
            }
        }
        Ok(out)
    }
}

/// Plain double precision Gauss–Jacobi rule, no enclosures. Weights use
/// the Christoffel formula `1 / sum_n P_n(x)^2 / W_n` which keeps full
/// relative accuracy where the eigenvector route would not.
#[derive(Clone, Debug)]
pub struct FloatRule {
    pub weight: JacobiWeight,
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl FloatRule {
    pub fn new(w: JacobiWeight, order: usize) -> FloatRule {
        let n = order + 1;
        let mut t = DMatrix::zeros(n, n);
        for j in 0..n {
            t[(j, j)] = ratio_f64(&mu_exact(w, j));
        }
        for j in 1..n {
            let e = ratio_f64(&eta_sq_exact(w, j)).sqrt();
            t[(j - 1, j)] = e;
            t[(j, j - 1)] = e;
        }
        let mut nodes: Vec<f64> = SymmetricEigen::new(t).eigenvalues.iter().copied().collect();
        nodes.sort_by(f64::total_cmp);
        let scale: Vec<f64> = (0..=order).map(|k| scaling_f64(w, k)).collect();
        let weights = nodes
            .iter()
            .map(|&x| {
                let vals = eval_f64(w, order, x);
                1.0 / vals.iter().zip(&scale).map(|(p, s)| p * p / s).sum::<f64>()
            })
            .collect();
        FloatRule { weight: w, order, nodes, weights }
    }
}

pub(crate) fn ratio_f64(q: &Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// `W_n` in plain doubles.
pub fn scaling_f64(w: JacobiWeight, n: usize) -> f64 {
    let (k, m) = (w.k as f64, w.m as f64);
    let nf = n as f64;
    let mut acc = (k + m + 1.0).exp2() / (2.0 * nf + k + m + 1.0);
    for i in 1..=w.k {
        acc *= (nf + i as f64) / (nf + m + i as f64);
    }
    acc
}

/// `P_0(x) .. P_degree(x)` in plain doubles.
pub fn eval_f64(w: JacobiWeight, degree: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(degree + 1);
    out.push(1.0);
    if degree == 0 {
        return out;
    }
    out.push(ratio_f64(&jacobi::alpha(w, 0)) * x - ratio_f64(&jacobi::beta(w, 0)));
    for n in 1..degree {
        let a = ratio_f64(&jacobi::alpha(w, n));
        let b = ratio_f64(&jacobi::beta(w, n));
        let g = ratio_f64(&jacobi::gamma(w, n));
        let next = (a * x - b) * out[n] - g * out[n - 1];
        out.push(next);
    }
    out
}
