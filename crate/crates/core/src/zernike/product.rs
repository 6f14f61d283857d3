//! Products of single-mode series through values on Gauss nodes.
//!
//! `Q^{k,m1} Q^{k,m2}` lives in mode `m3 = m1 + m2`. When the signs
//! agree the radial parts multiply as `r^{|m1|} r^{|m2|} = r^{|m3|}`, so
//! both factors are promoted to the `|m3|` Jacobi basis and multiplied on
//! the `(k, |m3|)` nodes. When the signs differ there is a leftover
//! `r^{2 m̄} = ((1 + x) / 2)^{m̄}` with `m̄ = min(|m1|, |m2|)`, which is
//! applied as an extra factor on the nodes.

use crate::error::{Error, Result};
use crate::interval::{BigInterval, IntervalMatrix};
use crate::jacobi::JacobiWeight;
use crate::mmt::{self, MmtContext};

use super::{SequenceOperator, SingleModeSeries, Space};

/// `(m3, m̄)` for a product of modes `m1` and `m2`.
pub fn product_order(m1: i32, m2: i32) -> (i32, u32) {
    let mbar = if (m1 as i64) * (m2 as i64) >= 0 { 0 } else { m1.unsigned_abs().min(m2.unsigned_abs()) };
    (m1 + m2, mbar)
}

fn boundary_factor(x: &BigInterval, mbar: u32) -> BigInterval {
    let prec = x.precision();
    let half = BigInterval::from_f64(0.5, prec);
    x.add(&BigInterval::one(prec)).mul(&half).powi(mbar)
}

/// Values of the Jacobi part of `a` on the `(k, |m3|)` nodes. With equal
/// signs the factor is first rewritten in the `|m3|` basis; otherwise it
/// is read in its own basis.
fn factor_values(
    a: &SingleModeSeries<BigInterval>,
    m3: i32,
    mbar: u32,
    order: usize,
    ctx: &MmtContext,
) -> Result<Vec<BigInterval>> {
    let k = a.k;
    let q3 = m3.unsigned_abs();
    let nodes = JacobiWeight::new(k, q3);
    let degree = a.len().saturating_sub(1);
    if mbar == 0 {
        let steps = q3 - a.m.unsigned_abs();
        let (_, promoted) = SequenceOperator::promote_by(steps).apply(Space::new(k, a.m), &a.coeffs, ctx.prec)?;
        let pair = ctx.pair(nodes, nodes, order, promoted.len().saturating_sub(1), false)?;
        mmt::to_grid(&pair, &promoted)
    } else {
        let pair = ctx.pair(JacobiWeight::new(k, a.m.unsigned_abs()), nodes, order, degree, false)?;
        mmt::to_grid(&pair, &a.coeffs)
    }
}

/// Rigorous product `a * b` in `V^{k, m1 + m2}` with at most
/// `N1 + N2 + m̄ + 1` coefficients.
pub fn multiply(
    a: &SingleModeSeries<BigInterval>,
    b: &SingleModeSeries<BigInterval>,
    ctx: &MmtContext,
) -> Result<SingleModeSeries<BigInterval>> {
    if a.k != b.k {
        return Err(Error::GradingMismatch(format!("product of gradings {} and {}", a.k, b.k)));
    }
    let (m3, mbar) = product_order(a.m, b.m);
    let prec = ctx.prec;
    if a.is_empty() || b.is_empty() {
        return Ok(SingleModeSeries::new(a.k, m3, vec![BigInterval::zero(prec)]));
    }
    let order = a.len() - 1 + b.len() - 1 + mbar as usize;
    let fa = factor_values(a, m3, mbar, order, ctx)?;
    let fb = factor_values(b, m3, mbar, order, ctx)?;
    let w3 = JacobiWeight::new(a.k, m3.unsigned_abs());
    let inv = ctx.pair(w3, w3, order, order, true)?;
    let mut f = mmt::hadamard(&fa, &fb)?;
    if mbar > 0 {
        for (v, x) in f.iter_mut().zip(&inv.rule.nodes) {
            *v = v.mul(&boundary_factor(x, mbar));
        }
    }
    let coeffs = mmt::to_coeffs(&inv, &f)?;
    Ok(SingleModeSeries::new(a.k, m3, coeffs.into_iter().map(|c| c.with_prec(prec)).collect()))
}

/// Rows `0..rows`, columns `0..cols` of the linear map `h -> a * h` from
/// `V^{k,m_other}` to `V^{k, m + m_other}`.
pub fn multiplication_matrix(
    a: &SingleModeSeries<BigInterval>,
    m_other: i32,
    rows: usize,
    cols: usize,
    ctx: &MmtContext,
) -> Result<IntervalMatrix<BigInterval>> {
    let (m3, mbar) = product_order(a.m, m_other);
    let k = a.k;
    let q3 = m3.unsigned_abs();
    let w3 = JacobiWeight::new(k, q3);
    let na = a.len().saturating_sub(1);
    // integrand degree in x: factor, column, row and boundary factor
    let total = na + cols.saturating_sub(1) + rows.saturating_sub(1) + mbar as usize;
    let order = total.div_ceil(2).max(rows.saturating_sub(1));
    let fa = {
        let p = ctx.pair(JacobiWeight::new(k, a.m.unsigned_abs()), w3, order, na, false)?;
        mmt::to_grid(&p, &a.coeffs)?
    };
    let cols_pair = ctx.pair(JacobiWeight::new(k, m_other.unsigned_abs()), w3, order, cols.saturating_sub(1), false)?;
    let inv_pair = ctx.pair(w3, w3, order, order, true)?;
    let inv = inv_pair.inverse()?;
    let mut scale = fa;
    if mbar > 0 {
        for (v, x) in scale.iter_mut().zip(&inv_pair.rule.nodes) {
            *v = v.mul(&boundary_factor(x, mbar));
        }
    }
    let nodes = scale.len();
    // left = Minv[0..rows] diag(scale)
    let left = IntervalMatrix::from_fn(rows, nodes, |n, j| inv.get(n, j).mul(&scale[j]));
    let right = IntervalMatrix::from_fn(nodes, cols, |j, l| cols_pair.forward.get(j, l).clone());
    let out = left.matmul(&right)?;
    Ok(IntervalMatrix::from_fn(rows, cols, |i, j| out.get(i, j).with_prec(ctx.prec)))
}
