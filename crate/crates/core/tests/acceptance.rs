//! Acceptance suite, one PASS/FAIL line per criterion.
//!
//! Exits 0 after reporting so that `cargo test` stays usable while a
//! criterion is red; set `DISKCAP_ACCEPTANCE_STRICT=1` to exit 1 on any
//! failure.

#[path = "../src/test_oracle.rs"]
mod test_oracle;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use diskcap::interval::{opnorm_l1, Interval};
use diskcap::jacobi::{compare_methods, eval_forsythe_all, JacobiWeight};
use diskcap::mmt::{to_coeffs, to_grid, MmtContext};
use diskcap::pde_cap::{
    boundary_enclosure, default_fixture_dir, proof_context, prove, verify_certificate, GuessSource, ProofOutcome,
};
use diskcap::quadrature::{gauss_jacobi, QuadratureConfig};
use diskcap::zernike::{self, multiply, norm_single, norm_weight, SequenceOperator, SingleModeSeries, Space, WeightPolicy};
use diskcap::{BigInterval, Precision};

use test_oracle::{big_contains, jacobi_explicit, weighted_integral};

const P128: Precision = Precision::DEFAULT;

// criterion 1: published reference values (m, N, Y0, Z1, Z2, r)
const TABLE: [(i32, usize, f64, f64, f64, f64); 5] = [
    (-1, 36, 1.57e-14, 1.49e-1, 0.46, 1.85e-14),
    (0, 36, 7.62e-16, 4.28e-3, 0.71, 7.65e-16),
    (1, 36, 2.89e-14, 2.36e-2, 0.14, 2.96e-14),
    (2, 36, 5.34e-14, 5.61e-2, 0.058, 5.66e-14),
    (20, 75, 1.52e-7, 8.86e-1, 0.0013, 1.33e-6),
];
/// Z1 and Z2 must lie in `[ref / 2, 2 ref]`.
const Z_FACTOR: f64 = 2.0;
/// Y0 and r must not exceed `10 ref`.
const Y_FACTOR: f64 = 10.0;
const PROOF_BITS: u32 = 128;
const M20_SECONDS: f64 = 1800.0;

// criterion 2
const QUAD_WIDTH: f64 = 1e-12;
// criterion 3
const MMT_RADIUS: f64 = 1e-16;
// criterion 7
const TRACE_WIDTH: f64 = 1e-8;
const TRACE_ANGLES: usize = 32;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(failures: Vec<String>, ok: String) -> Verdict {
    if failures.is_empty() {
        Verdict { pass: true, detail: ok }
    } else {
        let shown: Vec<_> = failures.iter().take(6).cloned().collect();
        let more = if failures.len() > 6 { format!(" (+{} more)", failures.len() - 6) } else { String::new() };
        Verdict { pass: false, detail: format!("{}{more}", shown.join("; ")) }
    }
}

fn within(x: f64, reference: f64, factor: f64) -> bool {
    x >= reference / factor && x <= reference * factor
}

fn certified_bounds(proofs: &mut Vec<(i32, Result<ProofOutcome, String>)>) -> Verdict {
    let dir = default_fixture_dir();
    let mut fails = Vec::new();
    let mut rows = Vec::new();
    for &(m, n, y0, z1, z2, r) in &TABLE {
        let clock = Instant::now();
        let res = prove(m, n, PROOF_BITS, &GuessSource::FixtureDir(dir.clone())).map_err(|e| e.to_string());
        let secs = clock.elapsed().as_secs_f64();
        match &res {
            Err(e) => fails.push(format!("m={m}: proof failed: {e}")),
            Ok(o) => {
                let b = &o.bounds;
                let (gy, g1, g2, gr) = (b.y0.hi(), b.z1.hi(), b.z2.hi(), o.radius.r0);
                rows.push(format!("m={m} Y0={gy:.2e} Z1={g1:.3e} Z2={g2:.3e} r={gr:.2e} ({secs:.0}s)"));
                if let Err(e) = verify_certificate(&o.certificate) {
                    fails.push(format!("m={m}: certificate does not re-verify: {e}"));
                }
                if !within(g1, z1, Z_FACTOR) {
                    fails.push(format!("m={m}: Z1 {g1:.3e} not within x{Z_FACTOR} of {z1:.3e}"));
                }
                if !within(g2, z2, Z_FACTOR) {
                    fails.push(format!("m={m}: Z2 {g2:.3e} not within x{Z_FACTOR} of {z2:.3e}"));
                }
                if gy > Y_FACTOR * y0 {
                    fails.push(format!("m={m}: Y0 {gy:.2e} above {Y_FACTOR} x {y0:.2e}"));
                }
                if gr > Y_FACTOR * r {
                    fails.push(format!("m={m}: r {gr:.2e} above {Y_FACTOR} x {r:.2e}"));
                }
                if m == 20 && secs > M20_SECONDS {
                    fails.push(format!("m=20 took {secs:.0}s"));
                }
            }
        }
        proofs.push((m, res.map(|o| o)));
    }
    let ok = rows.join(", ");
    let mut v = verdict(fails, ok.clone());
    if !v.pass {
        v.detail = format!("{} | {ok}", v.detail);
    }
    v
}

fn quadrature_exactness() -> Verdict {
    let mut fails = Vec::new();
    let mut worst = 0.0f64;
    for (k, m) in [(0, 0), (1, 1), (0, 2)] {
        let w = JacobiWeight::new(k, m);
        let exact = jacobi_explicit(k, m, 8);
        let norms: Vec<_> = exact.iter().map(|p| weighted_integral(&p.mul(p), k, m)).collect();
        let cross: Vec<_> = exact.iter().map(|p| weighted_integral(&p.mul(&exact[0]), k, m)).collect();
        for order in 0..=8usize {
            let rule = match gauss_jacobi(w, order, QuadratureConfig::new(P128)) {
                Ok(r) => r,
                Err(e) => {
                    fails.push(format!("({k},{m}) N={order}: {e}"));
                    continue;
                }
            };
            let mut sq = vec![BigInterval::zero(P128); order + 1];
            let mut with0 = vec![BigInterval::zero(P128); order + 1];
            for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
                let v = eval_forsythe_all::<BigInterval>(w, order, x, P128);
                for n in 0..=order {
                    sq[n].add_mul(wt, &v[n].sqr());
                    with0[n].add_mul(wt, &v[n].mul(&v[0]));
                }
            }
            for n in 0..=order {
                for (what, got, want) in [("p_n^2", &sq[n], &norms[n]), ("p_n p_0", &with0[n], &cross[n])] {
                    worst = worst.max(got.width_f64());
                    if !big_contains(got, want) {
                        fails.push(format!("({k},{m}) N={order} n={n}: {what} misses the exact value"));
                    }
                    if got.width_f64() >= QUAD_WIDTH {
                        fails.push(format!("({k},{m}) N={order} n={n}: {what} width {:.1e}", got.width_f64()));
                    }
                }
            }
        }
    }
    verdict(fails, format!("3 weights, N <= 8, max width {worst:.1e}"))
}

fn scaled(x: &BigInterval) -> f64 {
    x.rad_f64() / (1.0 + x.mid_f64().abs())
}

fn mmt_roundtrip() -> Verdict {
    let ctx = MmtContext::new(P128);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let orders = [0usize, 1, 2, 4, 8, 16, 32, 64];
    let mut fails = Vec::new();
    let mut worst = 0.0f64;
    let mut vectors = 0;
    for (k, m) in [(0, 0), (0, 1), (0, 2), (1, 1)] {
        let w = JacobiWeight::new(k, m);
        for &order in &orders {
            let pair = match ctx.pair(w, w, order, order, true) {
                Ok(p) => p,
                Err(e) => {
                    fails.push(format!("({k},{m}) N'={order}: {e}"));
                    continue;
                }
            };
            let inv = pair.inverse.as_ref().expect("same weight pair has an inverse");
            for mat in [&pair.forward, inv] {
                for i in 0..mat.rows() {
                    for j in 0..mat.cols() {
                        let s = scaled(mat.get(i, j));
                        worst = worst.max(s);
                        if s >= MMT_RADIUS {
                            fails.push(format!("({k},{m}) N'={order}: entry ({i},{j}) scaled radius {s:.1e}"));
                        }
                    }
                }
            }
            let prod = inv.matmul(&pair.forward).expect("square");
            for i in 0..prod.rows() {
                for j in 0..prod.cols() {
                    if !prod.get(i, j).contains_f64(if i == j { 1.0 } else { 0.0 }) {
                        fails.push(format!("({k},{m}) N'={order}: M^-1 M misses I at ({i},{j})"));
                    }
                }
            }
        }
        // 100 random coefficient vectors per weight
        for _ in 0..100 {
            let order = orders[rng.random_range(0..orders.len())];
            let pair = match ctx.pair(w, w, order, order, true) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let a: Vec<f64> = (0..=order).map(|_| rng.random_range(-1.0..1.0)).collect();
            let big: Vec<BigInterval> = a.iter().map(|&x| BigInterval::from_f64(x, P128)).collect();
            let back = to_grid(&pair, &big).and_then(|g| to_coeffs(&pair, &g));
            vectors += 1;
            match back {
                Err(e) => fails.push(format!("({k},{m}) N'={order}: {e}")),
                Ok(b) => {
                    if b.iter().zip(&a).any(|(x, &y)| !x.contains_f64(y)) {
                        fails.push(format!("({k},{m}) N'={order}: coefficients not recovered"));
                    }
                }
            }
        }
    }
    verdict(fails, format!("4 weights, N' <= 64, {vectors} vectors, max scaled radius {worst:.1e}"))
}

fn random_series(rng: &mut ChaCha8Rng, k: u32, m: i32) -> SingleModeSeries<BigInterval> {
    let len = rng.random_range(1..=10);
    SingleModeSeries::new(k, m, (0..len).map(|_| BigInterval::from_f64(rng.random_range(-1.0..1.0), P128)).collect())
}

fn banach_algebra() -> Verdict {
    let ctx = MmtContext::new(P128);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let policies = [WeightPolicy::Trivial, WeightPolicy::Geometric { nu: 1.05 }, WeightPolicy::Algebraic { s: 2.0 }];
    let mut fails = Vec::new();
    let mut mixed = 0;
    let mut max_ratio = 0.0f64;
    for policy in &policies {
        for t in 0..100 {
            let k = rng.random_range(0..=1);
            let m1: i32 = rng.random_range(-4..=4);
            let mut m2 = rng.random_range(-4..=4);
            // every other pair with opposite signs
            if t % 2 == 0 && m1 != 0 {
                m2 = -m1.signum() * rng.random_range(1..=4);
            }
            if m1 * m2 < 0 {
                mixed += 1;
            }
            let a = random_series(&mut rng, k, m1);
            let b = random_series(&mut rng, k, m2);
            match multiply(&a, &b, &ctx) {
                Err(e) => fails.push(format!("{policy:?} k={k} ({m1},{m2}): {e}")),
                Ok(c) => {
                    let lhs = norm_single(&c, policy);
                    let rhs = norm_single(&a, policy) * norm_single(&b, policy);
                    max_ratio = max_ratio.max(lhs.hi() / rhs.lo());
                    // room for the interval radii only
                    if lhs.lo() > rhs.hi() || lhs.hi() > rhs.hi() * (1.0 + 1e-12) {
                        fails.push(format!("{policy:?} k={k} ({m1},{m2}): {:.6e} > {:.6e}", lhs.hi(), rhs.hi()));
                    }
                }
            }
        }
    }
    verdict(fails, format!("300 products, {mixed} with mixed signs, max ||a*b||/(||a|| ||b||) = {max_ratio:.4}"))
}

fn basis(n: usize) -> Vec<BigInterval> {
    let mut v = vec![BigInterval::zero(P128); n + 1];
    v[n] = BigInterval::one(P128);
    v
}

fn operator_identities() -> Verdict {
    use SequenceOperator::*;
    let mut fails = Vec::new();

    // Δ ∘ Δ0^{-1} is the identity, written in grading 2
    for q in [0, 1, 2, 5] {
        let src = Space::new(0, q);
        for n in 0..=20 {
            let e = basis(n);
            let lhs = InvDirichletLaplacian.then(Laplacian).apply(src, &e, P128);
            let rhs = Conversion.then(Conversion).apply(src, &e, P128);
            match (lhs, rhs) {
                (Ok((s1, a)), Ok((s2, b))) => {
                    let len = a.len().max(b.len());
                    let z = BigInterval::zero(P128);
                    let bad = (0..len).any(|i| {
                        let (x, y) = (a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z));
                        x.disjoint(y) || x.width_f64() > 1e-20
                    });
                    if s1 != s2 || bad {
                        fails.push(format!("Δ Δ0^-1 e_{n} on m={q} differs from the identity"));
                    }
                }
                (Err(e), _) | (_, Err(e)) => fails.push(format!("Δ Δ0^-1 on m={q}: {e}")),
            }
        }
    }

    // Δ0^{-1} outputs vanish on the boundary
    for q in [0, 1, 2, 20] {
        let m = InvDirichletLaplacian.matrix::<BigInterval>(Space::new(0, q), 202, 201, P128);
        match m {
            Err(e) => fails.push(format!("row sums m={q}: {e}")),
            Ok(m) => {
                for j in 0..=200 {
                    let mut s = BigInterval::zero(P128);
                    for i in 0..m.rows() {
                        s = s.add(m.get(i, j));
                    }
                    if !s.contains_zero() {
                        fails.push(format!("column {j} of Δ0^-1 on m={q} sums away from 0"));
                    }
                }
            }
        }
    }

    // ||(R^-)^m||_1 <= 1, full columns of the truncation
    let mut worst_r = 0.0f64;
    for m in 1..=20u32 {
        let cols = 40;
        match SequenceOperator::r_minus_pow(m).matrix::<BigInterval>(Space::new(0, 2 * m as i32), cols + m as usize, cols, P128) {
            Err(e) => fails.push(format!("(R^-)^{m}: {e}")),
            Ok(a) => {
                // upper bound; the enclosure of the exact column sums checks it is attained
                let upper = opnorm_l1(&a, None, None).hi();
                let mut exact_max = BigInterval::zero(P128);
                for j in 0..cols {
                    let mut s = BigInterval::zero(P128);
                    for i in 0..a.rows() {
                        s = s.add(&a.get(i, j).abs());
                    }
                    if s.mid_f64() > exact_max.mid_f64() {
                        exact_max = s;
                    }
                }
                worst_r = worst_r.max(upper);
                if !exact_max.contains_f64(1.0) || exact_max.width_f64() > 1e-30 || upper > 1.0 + 1e-12 {
                    fails.push(format!("||(R^-)^{m}|| in [{:e}, {:e}], bound {upper:.17}", exact_max.lo_f64(), exact_max.hi_f64()));
                }
            }
        }
    }

    // R^+ ∘ (R^+)^{-1} on (0,2) -> (0,1) -> (0,2)
    for t in 1..=30 {
        let inv = InvRPlus.matrix::<BigInterval>(Space::new(0, 2), t, t, P128);
        let r = RPlus.matrix::<BigInterval>(Space::new(0, 1), t, t, P128);
        match (inv, r) {
            (Ok(inv), Ok(r)) => {
                let p = r.matmul(&inv).expect("square");
                let bad = (0..t).any(|i| (0..t).any(|j| !p.get(i, j).contains_f64(if i == j { 1.0 } else { 0.0 })));
                if bad {
                    fails.push(format!("R^+ (R^+)^-1 misses I at truncation {t}"));
                }
            }
            (Err(e), _) | (_, Err(e)) => fails.push(format!("R^+ inverse at {t}: {e}")),
        }
    }

    // weighted norm of (R^+)^{-1}: V^{0,2}_0 -> V^{0,1}_{-1} equals 1/2
    let cols = 200;
    let half = match InvRPlus.matrix::<BigInterval>(Space::new(0, 2), cols, cols, P128) {
        Err(e) => {
            fails.push(format!("(R^+)^-1 norm: {e}"));
            None
        }
        Ok(a) => {
            let out = WeightPolicy::Algebraic { s: -1.0 };
            let mut best = Interval::ZERO;
            for j in 0..cols {
                let mut s = Interval::ZERO;
                for i in 0..=j {
                    s += a.get(i, j).to_interval().abs() * norm_weight(&out, 0, 1, i);
                }
                best = best.max(s);
            }
            // truncated maxima reach 1/2 from below, the analytic value caps them above
            if !(best.lo() <= 0.5 && best.hi() >= 0.5 && best.hi() <= 0.5 * (1.0 + 1e-12)) {
                fails.push(format!("(R^+)^-1 norm enclosure [{:e}, {:e}] does not pin 1/2", best.lo(), best.hi()));
            }
            Some(best)
        }
    };
    let half = half.map_or(String::from("-"), |h| format!("[{:.15}, {:.15}]", h.lo(), h.hi()));
    verdict(fails, format!("max ||(R^-)^m|| = {worst_r:.15}, ||(R^+)^-1|| in {half}"))
}

fn method_comparison() -> Verdict {
    let prec = Precision::DOUBLE;
    let w = JacobiWeight::new(1, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let points: Vec<f64> = (0..50).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut fails = Vec::new();
    let mut rows = Vec::new();
    for n in [10usize, 20, 40, 80] {
        // best of three runs against scheduler noise
        let runs: Vec<_> = (0..3).map(|_| compare_methods(w, n, &points, prec)).collect::<Result<_, _>>().unwrap();
        let f = runs.iter().map(|c| c.forsythe_seconds).fold(f64::INFINITY, f64::min);
        let l = runs.iter().map(|c| c.linsys_seconds).fold(f64::INFINITY, f64::min);
        let c = runs[0];
        rows.push(format!("N={n}: radius {:.1e}/{:.1e}, time {:.1}/{:.1} ms", c.forsythe_radius, c.linsys_radius, f * 1e3, l * 1e3));
        if f >= l {
            fails.push(format!("N={n}: Forsythe {f:.2e}s not faster than linsys {l:.2e}s"));
        }
        if n == 80 && c.forsythe_radius <= c.linsys_radius {
            fails.push(format!("N=80: Forsythe radius {:.1e} <= linsys {:.1e}", c.forsythe_radius, c.linsys_radius));
        }
    }
    let ok = format!("Forsythe/linsys {}", rows.join("; "));
    verdict(fails, ok)
}

fn boundary_and_pole(proofs: &[(i32, Result<ProofOutcome, String>)]) -> Verdict {
    let ctx = match proof_context(PROOF_BITS) {
        Ok(c) => c,
        Err(e) => return Verdict { pass: false, detail: e.to_string() },
    };
    let mut fails = Vec::new();
    let mut worst = 0.0f64;
    for (m, res) in proofs {
        let o = match res {
            Ok(o) => o,
            Err(e) => {
                fails.push(format!("m={m}: no certified solution ({e})"));
                continue;
            }
        };
        for t in 0..TRACE_ANGLES {
            let theta = 2.0 * std::f64::consts::PI * t as f64 / TRACE_ANGLES as f64;
            match boundary_enclosure(&o.solution, o.radius.r0, theta, &ctx) {
                Err(e) => fails.push(format!("m={m} θ={theta:.3}: {e}")),
                Ok((re, im)) => {
                    worst = worst.max(re.width_f64()).max(im.width_f64());
                    if !re.contains_zero() || !im.contains_zero() {
                        fails.push(format!("m={m} θ={theta:.3}: trace enclosure excludes 0"));
                    }
                    if re.width_f64() >= TRACE_WIDTH || im.width_f64() >= TRACE_WIDTH {
                        fails.push(format!("m={m} θ={theta:.3}: trace width {:.1e}", re.width_f64().max(im.width_f64())));
                    }
                }
            }
        }
        if m.unsigned_abs() >= 1 {
            let u = o.solution.series(P128);
            for theta in [0.0, 1.0, 2.5] {
                match zernike::eval_single(&u, &BigInterval::zero(P128), &BigInterval::from_f64(theta, P128)) {
                    Err(e) => fails.push(format!("m={m} pole: {e}")),
                    Ok((re, im)) => {
                        if !(re.is_point() && im.is_point() && re.contains_zero() && im.contains_zero()) {
                            fails.push(format!("m={m}: value at the pole is not exactly 0"));
                        }
                    }
                }
            }
        }
    }
    verdict(fails, format!("{} solutions, {TRACE_ANGLES} angles, max trace width {worst:.1e}", proofs.len()))
}

fn guarded(f: impl FnOnce() -> Verdict) -> Verdict {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Verdict { pass: false, detail: format!("panicked: {msg}") }
    })
}

fn main() {
    // libtest flags such as --nocapture are ignored
    let mut proofs = Vec::new();
    let mut results: Vec<(&str, Verdict)> = Vec::new();
    results.push(("1 table of certified bounds", guarded(|| certified_bounds(&mut proofs))));
    results.push(("2 quadrature exactness", guarded(quadrature_exactness)));
    results.push(("3 transform roundtrip", guarded(mmt_roundtrip)));
    results.push(("4 Banach algebra inequality", guarded(banach_algebra)));
    results.push(("5 operator identities", guarded(operator_identities)));
    results.push(("6 evaluation method comparison", guarded(method_comparison)));
    results.push(("7 boundary trace and pole", guarded(|| boundary_and_pole(&proofs))));

    let mut failed = 0;
    for (name, v) in &results {
        let tag = if v.pass { "PASS" } else { "FAIL" };
        if !v.pass {
            failed += 1;
        }
        println!("{tag} criterion {name}: {}", v.detail);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 && std::env::var_os("DISKCAP_ACCEPTANCE_STRICT").is_some_and(|v| v == "1") {
        std::process::exit(1);
    }
}
