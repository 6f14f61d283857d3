//! Property tests of structural invariants across modules.

use proptest::prelude::*;

use diskcap::interval::Interval;
use diskcap::jacobi::{weight_integral, JacobiWeight};
use diskcap::mmt::{to_coeffs, to_grid, MmtContext};
use diskcap::nk::{certify, radii_polynomial, RadiiData};
use diskcap::pde_cap::{proof_context, residual, Problem};
use diskcap::quadrature::{gauss_jacobi, QuadratureConfig};
use diskcap::zernike::{eval_single, SequenceOperator, SingleModeSeries, Space};
use diskcap::{BigInterval, Precision};

const P: Precision = Precision::DEFAULT;

fn big(v: &[f64]) -> Vec<BigInterval> {
    v.iter().map(|&x| BigInterval::from_f64(x, P)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn float_ops_enclose_high_precision(a in -1e6f64..1e6, b in -1e6f64..1e6) {
        let (x, y) = (Interval::point(a), Interval::point(b));
        let (bx, by) = (BigInterval::from_f64(a, P), BigInterval::from_f64(b, P));
        prop_assert!(!(x + y).disjoint(&bx.add(&by).to_interval()));
        prop_assert!((x * y).contains(bx.mul(&by).mid_f64()));
        prop_assert!((x - y).contains(bx.sub(&by).mid_f64()));
        if b != 0.0 {
            let q = x.checked_div(y).unwrap();
            prop_assert!(q.contains(bx.checked_div(&by).unwrap().mid_f64()));
        }
    }

    #[test]
    fn quadrature_weights_are_positive_and_sum(k in 0u32..2, m in 0u32..4, order in 0usize..12) {
        let w = JacobiWeight::new(k, m);
        let rule = gauss_jacobi(w, order, QuadratureConfig::new(P)).unwrap();
        prop_assert_eq!(rule.len(), order + 1);
        let total = rule.weights.iter().fold(BigInterval::zero(P), |s, x| s.add(x));
        let want: BigInterval = weight_integral(w, P);
        prop_assert!(!total.disjoint(&want));
        prop_assert!(rule.weights.iter().all(|x| x.lo() > &0));
        // nodes strictly increasing inside (-1, 1)
        for pair in rule.nodes.windows(2) {
            prop_assert!(pair[0].hi() < pair[1].lo());
        }
    }

    #[test]
    fn transform_round_trip(k in 0u32..2, m in 0u32..3, c in prop::collection::vec(-10.0f64..10.0, 1..12)) {
        let w = JacobiWeight::new(k, m);
        let ctx = MmtContext::new(P);
        let order = c.len() - 1;
        let pair = ctx.pair(w, w, order, order, true).unwrap();
        let back = to_coeffs(&pair, &to_grid(&pair, &big(&c)).unwrap()).unwrap();
        for (x, y) in back.iter().zip(&c) {
            prop_assert!(x.contains_f64(*y) && x.rad_f64() < 1e-25);
        }
    }

    #[test]
    fn dirichlet_inverse_vanishes_on_boundary(m in 0i32..6, c in prop::collection::vec(-1.0f64..1.0, 1..10), t in 0.0f64..6.3) {
        let (target, u) = SequenceOperator::InvDirichletLaplacian.apply(Space::new(0, m), &big(&c), P).unwrap();
        prop_assert_eq!(target, Space::new(0, m));
        let s = SingleModeSeries::new(0, m, u);
        let (re, im) = eval_single(&s, &BigInterval::one(P), &BigInterval::from_f64(t, P)).unwrap();
        prop_assert!(re.contains_zero() && im.contains_zero());
        prop_assert!(re.width_f64() < 1e-25);
    }

    #[test]
    fn residual_support_is_exact(m in -1i32..4, c in prop::collection::vec(0.1f64..1.0, 1..8)) {
        let problem = Problem::new(m).unwrap();
        let n = c.len() - 1;
        let u = SingleModeSeries::new(0, problem.q() as i32, big(&c));
        let f = residual(problem, &u, &proof_context(128).unwrap()).unwrap();
        prop_assert_eq!(f.len(), problem.residual_support(n) + 1);
    }

    #[test]
    fn certified_radius_makes_polynomial_negative(y0 in 1e-16f64..1e-3, z1 in 0.0f64..0.9, z2 in 0.0f64..100.0) {
        let data = RadiiData::new(Interval::point(y0), Interval::point(z1), Interval::point(z2));
        let disc = (1.0 - z1).powi(2) - 4.0 * y0 * z2;
        match certify(&data) {
            Ok(c) => {
                prop_assert!(radii_polynomial(&data, c.r0).hi() < 0.0);
                prop_assert!(c.r0 >= y0);
            }
            // only near a double root may the probes miss
            Err(_) => prop_assert!(disc < 0.05 * (1.0 - z1).powi(2), "disc {disc}"),
        }
    }
}

#[test]
fn two_point_transform_matrix() {
    let ctx = MmtContext::new(P);
    let pair = ctx.pair(JacobiWeight::new(0, 0), JacobiWeight::new(0, 0), 1, 1, true).unwrap();
    let x = 1.0 / 3f64.sqrt();
    let want = [[1.0, -x], [1.0, x]];
    for (j, row) in want.iter().enumerate() {
        for (n, v) in row.iter().enumerate() {
            let e = pair.forward.get(j, n);
            assert!((e.mid_f64() - v).abs() < 1e-15 && e.rad_f64() < 1e-30);
        }
    }
}
