//! Banded sequence operators between the `V^{k,m}` spaces.
//!
//! Each primitive is given by the image of a basis vector `e_n`, a short
//! list of `(index, coefficient)` pairs in the target space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{IntervalMatrix, Precision, Scalar};
use crate::jacobi::{enclose, Rational};

/// Grading `k` and wave number `m` of a coefficient space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Space {
    pub k: u32,
    pub m: i32,
}

impl Space {
    pub fn new(k: u32, m: i32) -> Self {
        Space { k, m }
    }

    fn q(self) -> i64 {
        self.m.unsigned_abs() as i64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SequenceOperator {
    /// `2 ∂/∂z̄`, `(k, m) -> (k + 1, m + 1)`
    DPlus,
    /// `2 ∂/∂z`, `(k, m) -> (k + 1, m - 1)`
    DMinus,
    /// `(k, m) -> (k + 2, m)`
    Laplacian,
    /// Identity written in the next grading, `(k, m) -> (k + 1, m)`.
    Conversion,
    /// Multiplication by `z`, `(k, m) -> (k, m + 1)`
    RPlus,
    /// Multiplication by `z̄`, `(k, m) -> (k, m - 1)`
    RMinus,
    /// Solution operator of `Δu = f`, `u = 0` on the boundary, within
    /// `V^{0,m}`.
    InvDirichletLaplacian,
    /// Inverse of `RPlus` on `(0, m) -> (0, m + 1)`, `m >= 0`. Maps
    /// `(0, m + 1)` to `(0, m)`; dense upper triangular.
    InvRPlus,
    /// Rewrite `Q^{k,m}` in the `|m| + 1` Jacobi basis keeping the
    /// function. The image of `P_n^{(k,|m|)}` has the same support.
    Promote,
    /// Applied left to right.
    Compose(Vec<SequenceOperator>),
}

fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n as i128, d as i128)
}

impl SequenceOperator {
    pub fn r_minus_pow(p: u32) -> SequenceOperator {
        SequenceOperator::Compose(vec![SequenceOperator::RMinus; p as usize])
    }

    pub fn promote_by(p: u32) -> SequenceOperator {
        SequenceOperator::Compose(vec![SequenceOperator::Promote; p as usize])
    }

    pub fn then(self, next: SequenceOperator) -> SequenceOperator {
        match self {
            SequenceOperator::Compose(mut v) => {
                v.push(next);
                SequenceOperator::Compose(v)
            }
            first => SequenceOperator::Compose(vec![first, next]),
        }
    }

    /// Change of the algebraic weight exponent `s` across the operator,
    /// i.e. it is bounded from `V_s` to `V_{s + shift}`.
    pub fn s_shift(&self) -> i32 {
        match self {
            SequenceOperator::DPlus | SequenceOperator::DMinus => -1,
            SequenceOperator::Laplacian => -2,
            SequenceOperator::InvDirichletLaplacian => 2,
            SequenceOperator::InvRPlus => -1,
            SequenceOperator::Compose(v) => v.iter().map(|o| o.s_shift()).sum(),
            _ => 0,
        }
    }

    pub fn target(&self, src: Space) -> Result<Space> {
        use SequenceOperator::*;
        Ok(match self {
            DPlus => Space::new(src.k + 1, src.m + 1),
            DMinus => Space::new(src.k + 1, src.m - 1),
            Laplacian => Space::new(src.k + 2, src.m),
            Conversion => Space::new(src.k + 1, src.m),
            RPlus => Space::new(src.k, src.m + 1),
            RMinus => Space::new(src.k, src.m - 1),
            InvDirichletLaplacian => {
                if src.k != 0 {
                    return Err(Error::GradingMismatch(format!("Dirichlet inverse needs k = 0, got {}", src.k)));
                }
                src
            }
            InvRPlus => {
                if src.k != 0 || src.m < 1 {
                    return Err(Error::UnsupportedOperator(format!("inverse of z on ({}, {})", src.k, src.m)));
                }
                Space::new(0, src.m - 1)
            }
            Promote => Space::new(src.k, if src.m >= 0 { src.m + 1 } else { src.m - 1 }),
            Compose(v) => {
                let mut s = src;
                for o in v {
                    s = o.target(s)?;
                }
                s
            }
        })
    }

    /// Image of `e_n`, for primitives only.
    fn stencil<S: Scalar>(&self, src: Space, n: usize, prec: Precision) -> Result<Vec<(usize, S)>> {
        use SequenceOperator::*;
        let (k, q, ni) = (src.k as i64, src.q(), n as i64);
        let m = src.m as i64;
        let mut out: Vec<(i64, Rational)> = Vec::with_capacity(3);
        match self {
            DPlus => {
                if m >= 0 {
                    out.push((ni - 1, ratio(2 * (ni + k + m + 1), 1)));
                } else {
                    out.push((ni, ratio(2 * (ni + q), 1)));
                }
            }
            DMinus => {
                if m > 0 {
                    out.push((ni, ratio(2 * (ni + m), 1)));
                } else {
                    out.push((ni - 1, ratio(2 * (ni + k + q + 1), 1)));
                }
            }
            Laplacian => out.push((ni - 1, ratio(4 * (ni + q) * (ni + k + q + 1), 1))),
            Conversion => {
                let d = 2 * ni + k + q + 1;
                out.push((ni, ratio(ni + k + q + 1, d)));
                out.push((ni - 1, ratio(-(ni + q), d)));
            }
            RPlus | RMinus | Promote => {
                let up = match self {
                    RPlus => m >= 0,
                    RMinus => m <= 0,
                    _ => true,
                };
                let d = 2 * ni + k + q + 1;
                if up {
                    out.push((ni, ratio(ni + k + q + 1, d)));
                    out.push((ni - 1, ratio(ni + k, d)));
                } else {
                    out.push((ni + 1, ratio(ni + 1, d)));
                    out.push((ni, ratio(ni + q, d)));
                }
            }
            InvDirichletLaplacian => {
                self.target(src)?;
                if ni == 0 {
                    let c = ratio(1, 4 * (q + 1) * (q + 2));
                    out.push((1, c));
                    out.push((0, -c));
                } else {
                    let a = 2 * ni + q;
                    out.push((ni + 1, ratio(1, 4 * (a + 1) * (a + 2))));
                    out.push((ni, ratio(-1, 2 * (a + 2) * a)));
                    out.push((ni - 1, ratio(1, 4 * a * (a + 1))));
                }
            }
            InvRPlus => {
                // column n of the inverse of RPlus from (0, q - 1):
                // x_i = (-1)^{n-i} (2i + q) / (n + q) prod_{t=1}^{q-1} (i + t) / (n + t)
                self.target(src)?;
                let p = q - 1;
                let mut col = Vec::with_capacity(n + 1);
                for i in 0..=ni {
                    let mut v = enclose::<S>(&ratio(2 * i + p + 1, ni + p + 1), prec);
                    for t in 1..=p {
                        v = v.mul(&enclose::<S>(&ratio(i + t, ni + t), prec));
                    }
                    if (ni - i) % 2 == 1 {
                        v = v.neg();
                    }
                    col.push((i as usize, v));
                }
                return Ok(col);
            }
            Compose(_) => return Err(Error::UnsupportedOperator("stencil of a composition".into())),
        }
        Ok(out
            .into_iter()
            .filter(|(i, c)| *i >= 0 && *c.numer() != 0)
            .map(|(i, c)| (i as usize, enclose::<S>(&c, prec)))
            .collect())
    }

    /// Apply to a coefficient vector of `src`. The output keeps every
    /// index the images reach.
    pub fn apply<S: Scalar>(&self, src: Space, a: &[S], prec: Precision) -> Result<(Space, Vec<S>)> {
        if let SequenceOperator::Compose(v) = self {
            let mut s = src;
            let mut cur = a.to_vec();
            for o in v {
                let (t, next) = o.apply(s, &cur, prec)?;
                s = t;
                cur = next;
            }
            return Ok((s, cur));
        }
        let target = self.target(src)?;
        let mut out: Vec<S> = Vec::new();
        for (n, c) in a.iter().enumerate() {
            if c.lo_f64() == 0.0 && c.hi_f64() == 0.0 {
                continue;
            }
            for (i, v) in self.stencil::<S>(src, n, prec)? {
                if out.len() <= i {
                    out.resize(i + 1, S::zero(prec));
                }
                out[i].add_mul(c, &v);
            }
        }
        if out.is_empty() {
            out.push(S::zero(prec));
        }
        Ok((target, out))
    }

    /// `rows x cols` truncation, column `n` is the image of `e_n`.
    pub fn matrix<S: Scalar>(&self, src: Space, rows: usize, cols: usize, prec: Precision) -> Result<IntervalMatrix<S>> {
        let mut columns = Vec::with_capacity(cols);
        for n in 0..cols {
            let mut e = vec![S::zero(prec); n + 1];
            e[n] = S::one(prec);
            let (_, mut img) = self.apply(src, &e, prec)?;
            img.resize(rows.max(img.len()), S::zero(prec));
            img.truncate(rows);
            columns.push(img);
        }
        Ok(IntervalMatrix::from_columns(rows, &columns, prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::{BigInterval, Interval};
    use crate::zernike::{eval_single, SingleModeSeries};
    use proptest::prelude::*;
    use SequenceOperator::*;

    const P: Precision = Precision::DEFAULT;

    fn basis(n: usize) -> Vec<Interval> {
        let mut e = vec![Interval::ZERO; n + 1];
        e[n] = Interval::ONE;
        e
    }

    fn point(v: &[Interval]) -> Vec<f64> {
        v.iter().map(|x| x.mid()).collect()
    }

    #[test]
    fn small_examples() {
        let (t, v) = DPlus.apply(Space::new(0, 0), &basis(1), P).unwrap();
        assert_eq!(t, Space::new(1, 1));
        assert_eq!(point(&v), vec![4.0]);
        let (t, v) = DMinus.then(DPlus).apply(Space::new(0, 0), &basis(1), P).unwrap();
        assert_eq!(t, Space::new(2, 0));
        assert_eq!(point(&v), vec![8.0]);
        let (_, v) = Laplacian.apply(Space::new(0, 1), &basis(2), P).unwrap();
        assert_eq!(point(&v), vec![0.0, 48.0]);
        let (_, v) = Conversion.apply(Space::new(0, 0), &basis(1), P).unwrap();
        assert!(v[1].contains(2.0 / 3.0) && v[0].contains(-1.0 / 3.0));
        let (t, v) = Promote.apply(Space::new(0, 0), &basis(1), P).unwrap();
        assert_eq!(t, Space::new(0, 1));
        assert_eq!(v.len(), 2);
        assert!(v[1].contains(2.0 / 3.0) && v[0].contains(1.0 / 3.0), "{v:?}");
    }

    #[test]
    fn inverse_r_plus_closed_forms() {
        let a = InvRPlus.matrix::<Interval>(Space::new(0, 2), 6, 6, P).unwrap();
        assert_eq!(a.get(0, 0).mid(), 1.0);
        for j in 0..6 {
            for i in 0..=j {
                let s = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                let want = s * 2.0 * ((i + 1) * (i + 1)) as f64 / ((j + 1) * (j + 2)) as f64;
                assert!(a.get(i, j).contains(want) || (a.get(i, j).mid() - want).abs() < 1e-15);
            }
        }
        let b = InvRPlus.matrix::<Interval>(Space::new(0, 1), 5, 5, P).unwrap();
        let r = RPlus.matrix::<Interval>(Space::new(0, 0), 5, 5, P).unwrap();
        let id = r.matmul(&b).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert!(id.get(i, j).contains(if i == j { 1.0 } else { 0.0 }));
            }
        }
    }

    #[test]
    fn dirichlet_inverse_columns_vanish_on_boundary() {
        for m in [0, 1, 3, 20] {
            let a = InvDirichletLaplacian.matrix::<Interval>(Space::new(0, m), 12, 10, P).unwrap();
            for j in 0..10 {
                let s: Interval = a.column(j).into_iter().sum();
                assert!(s.contains(0.0), "m={m} col={j}");
            }
        }
    }

    #[test]
    fn laplacian_inverts_dirichlet_inverse() {
        // Δ maps into grading two, so the identity there is C_{1,m} C_{0,m}
        for m in [0, 2, 5] {
            let src = Space::new(0, m);
            let lhs = InvDirichletLaplacian.then(Laplacian);
            let rhs = Conversion.then(Conversion);
            for n in 0..8 {
                let (t1, a) = lhs.apply(src, &basis(n), P).unwrap();
                let (t2, b) = rhs.apply(src, &basis(n), P).unwrap();
                assert_eq!(t1, t2);
                for i in 0..a.len().max(b.len()) {
                    let x = a.get(i).copied().unwrap_or(Interval::ZERO);
                    let y = b.get(i).copied().unwrap_or(Interval::ZERO);
                    assert!(!x.disjoint(&y), "m={m} n={n} i={i}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn dirichlet_errors_on_graded_space() {
        assert!(InvDirichletLaplacian.apply(Space::new(1, 0), &basis(0), P).is_err());
        assert!(InvRPlus.apply(Space::new(0, 0), &basis(0), P).is_err());
    }

    #[test]
    fn shifts_compose() {
        assert_eq!(SequenceOperator::r_minus_pow(3).s_shift(), 0);
        assert_eq!(InvDirichletLaplacian.then(Laplacian).s_shift(), 0);
        assert_eq!(SequenceOperator::r_minus_pow(3).target(Space::new(0, 6)).unwrap(), Space::new(0, 3));
    }

    fn eval_at(k: u32, m: i32, c: &[Interval], r: f64, t: f64) -> (BigInterval, BigInterval) {
        let s = SingleModeSeries::new(k, m, c.to_vec()).to_big(P);
        eval_single(&s, &BigInterval::from_f64(r, P), &BigInterval::from_f64(t, P)).unwrap()
    }

    fn close(a: &BigInterval, b: f64, tol: f64) -> bool {
        (a.mid_f64() - b).abs() <= tol * (1.0 + b.abs())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn multiplication_by_z(k in 0u32..3, m in -4i32..5, c in prop::collection::vec(-1.0f64..1.0, 1..6),
                               r in 0.05f64..0.95, t in 0.0f64..6.28) {
            let c: Vec<Interval> = c.into_iter().map(Interval::point).collect();
            let (re, im) = eval_at(k, m, &c, r, t);
            for (op, sgn) in [(RPlus, 1.0), (RMinus, -1.0)] {
                let (dst, out) = op.apply(Space::new(k, m), &c, P).unwrap();
                let (re2, im2) = eval_at(dst.k, dst.m, &out, r, t);
                let (zr, zi) = (r * t.cos(), sgn * r * t.sin());
                let wr = zr * re.mid_f64() - zi * im.mid_f64();
                let wi = zr * im.mid_f64() + zi * re.mid_f64();
                prop_assert!(close(&re2, wr, 1e-12) && close(&im2, wi, 1e-12));
            }
        }

        #[test]
        fn conversion_and_promotion_keep_values(k in 0u32..3, m in -4i32..5,
                                                c in prop::collection::vec(-1.0f64..1.0, 1..6),
                                                r in 0.0f64..1.0, t in 0.0f64..6.28) {
            let c: Vec<Interval> = c.into_iter().map(Interval::point).collect();
            let (re, im) = eval_at(k, m, &c, r, t);
            let (dst, out) = Conversion.apply(Space::new(k, m), &c, P).unwrap();
            let (re2, im2) = eval_at(dst.k, dst.m, &out, r, t);
            prop_assert!(close(&re2, re.mid_f64(), 1e-12) && close(&im2, im.mid_f64(), 1e-12));
            let (dst, out) = Promote.apply(Space::new(k, m), &c, P).unwrap();
            prop_assert_eq!(out.len(), c.len());
            // same Jacobi polynomial in the |m| + 1 basis, so read as a
            // mode |m| + 1 series it picks up one extra factor r
            let (re3, _) = eval_at(dst.k, dst.m, &out, r, 0.0);
            let (re4, _) = eval_at(k, m, &c, r, 0.0);
            if r > 0.0 {
                prop_assert!(close(&re3, re4.mid_f64() * r, 1e-12));
            }
        }

        #[test]
        fn d_plus_matches_finite_difference(m in 0i32..4, c in prop::collection::vec(-1.0f64..1.0, 1..5),
                                            r in 0.2f64..0.8, t in 0.0f64..6.28) {
            // 2 ∂/∂z̄ = e^{iθ} (∂_r + i/r ∂_θ)
            let c: Vec<Interval> = c.into_iter().map(Interval::point).collect();
            let h = 1e-6;
            let f = |r: f64, t: f64| { let (a, b) = eval_at(0, m, &c, r, t); (a.mid_f64(), b.mid_f64()) };
            let (ar, ai) = { let (p, q) = (f(r + h, t), f(r - h, t)); ((p.0 - q.0) / (2.0 * h), (p.1 - q.1) / (2.0 * h)) };
            let (tr, ti) = { let (p, q) = (f(r, t + h), f(r, t - h)); ((p.0 - q.0) / (2.0 * h), (p.1 - q.1) / (2.0 * h)) };
            // ∂_r + i/r ∂_θ applied to a + ib
            let (gr, gi) = (ar - ti / r, ai + tr / r);
            let (wr, wi) = (t.cos() * gr - t.sin() * gi, t.cos() * gi + t.sin() * gr);
            let (dst, out) = DPlus.apply(Space::new(0, m), &c, P).unwrap();
            let (re, im) = eval_at(dst.k, dst.m, &out, r, t);
            prop_assert!(close(&re, wr, 1e-6) && close(&im, wi, 1e-6), "{} {} vs {} {}", re.mid_f64(), im.mid_f64(), wr, wi);
        }
    }
}
