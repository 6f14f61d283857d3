//! Dense interval matrices and rigorous operator norms.

use nalgebra::DMatrix;

use super::{Interval, Precision, Scalar};
use crate::error::{Error, Result};

/// Row-major dense matrix of interval scalars.
#[derive(Clone, Debug)]
pub struct IntervalMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> IntervalMatrix<S> {
    pub fn zeros(rows: usize, cols: usize, prec: Precision) -> Self {
        IntervalMatrix { rows, cols, data: vec![S::zero(prec); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntervalMatrix { rows, cols, data }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<S>], prec: Precision) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols, prec);
        for (j, c) in columns.iter().enumerate() {
            for (i, v) in c.iter().enumerate().take(rows) {
                m.data[i * cols + j] = v.clone();
            }
        }
        m
    }

    pub fn identity(n: usize, prec: Precision) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one(prec) } else { S::zero(prec) })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn matvec(&self, x: &[S]) -> Result<Vec<S>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: x.len() });
        }
        let prec = x.first().map(|v| v.precision()).unwrap_or_default();
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = S::zero(prec);
                for (a, b) in self.row(i).iter().zip(x) {
                    acc.add_mul(a, b);
                }
                acc
            })
            .collect())
    }

    pub fn matmul(&self, other: &IntervalMatrix<S>) -> Result<IntervalMatrix<S>> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let prec = self.data.first().map(|v| v.precision()).unwrap_or_default();
        let mut out = Self::zeros(self.rows, other.cols, prec);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.lo_f64() == 0.0 && a.hi_f64() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx].add_mul(a, other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &IntervalMatrix<S>) -> Result<IntervalMatrix<S>> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, found: other.rows * other.cols });
        }
        Ok(IntervalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> IntervalMatrix<S> {
        let (r0, c0) = (rows.start, cols.start);
        IntervalMatrix::from_fn(rows.len(), cols.len(), |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Outward rounding into double intervals.
    pub fn to_interval(&self) -> IntervalMatrix<Interval> {
        IntervalMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v.to_interval()).collect() }
    }

    pub fn mid_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mid_f64())
    }

    pub fn max_rad(&self) -> f64 {
        self.data.iter().map(|v| v.rad_f64()).fold(0.0, f64::max)
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

impl IntervalMatrix<Interval> {
    /// Point matrix from doubles.
    pub fn from_f64(m: &DMatrix<f64>) -> Self {
        IntervalMatrix::from_fn(m.nrows(), m.ncols(), |i, j| Interval::point(m[(i, j)]))
    }
}

/// Rigorous upper bound for the induced norm from weighted `l1` to
/// weighted `l1`: `max_j sum_i |a_ij| w_out[i] / w_in[j]`. Unit weights
/// are used when a slice is `None`.
pub fn opnorm_l1<S: Scalar>(a: &IntervalMatrix<S>, w_in: Option<&[Interval]>, w_out: Option<&[Interval]>) -> Interval {
    let mut best = Interval::ZERO;
    for j in 0..a.cols() {
        let mut s = Interval::ZERO;
        for i in 0..a.rows() {
            let mut t = Interval::point(a.get(i, j).to_interval().mag());
            if let Some(w) = w_out {
                t = t * w[i];
            }
            s += t;
        }
        if let Some(w) = w_in {
            s = s / w[j];
        }
        best = best.max(s);
    }
    Interval::raw(best.lo().max(0.0), best.hi())
}

/// Rigorous upper bound for the induced infinity norm.
pub fn opnorm_linf<S: Scalar>(a: &IntervalMatrix<S>) -> Interval {
    let mut best = Interval::ZERO;
    for i in 0..a.rows() {
        let s: Interval = a.row(i).iter().map(|v| Interval::point(v.to_interval().mag())).sum();
        best = best.max(s);
    }
    best
}
