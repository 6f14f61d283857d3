//! Existence proofs for `Δv + z̄^m v^2 = 0` (and `Δv + v^2 / z = 0` for
//! `m = -1`) on the unit disk with zero boundary values.
//!
//! With `v = e^{i|m|θ} u(r)` the problem is the zero finding problem
//! `F_m(U) = U + Δ0^{-1} P(U) = 0` on `V^{0,|m|}`, where
//! `P(U) = (R^-)^m (U * U)` for `m >= 0` and
//! `P(U) = ((R^+_{0,0})^{-1} U) * U` for `m = -1`, the latter being
//! `(R^+_{0,1})^{-1} (U * U)` without the dense inverse.

mod certificate;
mod galerkin;

pub use certificate::{verify_certificate, write_atomic, Certificate, VerifyReport};
pub use galerkin::{newton, shooting_seed, Galerkin, NewtonReport, NEWTON_TOL};

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{opnorm_l1, BigInterval, Interval, IntervalMatrix, Precision, Scalar};
use crate::mmt::MmtContext;
use crate::nk::{self, CertifiedRadius, ProbeSchedule, RadiiData};
use crate::serial::SCHEMA_VERSION;
use crate::zernike::{self, multiplication_matrix, multiply, PolarGrid, SequenceOperator, SingleModeSeries, Space, ZernikeSeries};

/// Scaled entry accuracy asked of every transform used in a proof.
pub const PROOF_ACCURACY: f64 = 1e-24;

/// Refinement steps against the multiple precision residual before the bounds.
pub const POLISH_STEPS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Problem {
    pub m: i32,
}

impl Problem {
    pub fn new(m: i32) -> Result<Self> {
        if m < -1 {
            return Err(Error::Domain(format!("problem index {m} < -1")));
        }
        Ok(Problem { m })
    }

    /// Wave number of the unknown.
    pub fn q(&self) -> u32 {
        self.m.unsigned_abs()
    }

    pub fn space(&self) -> Space {
        Space::new(0, self.q() as i32)
    }

    /// `p` in `u'' + u'/r - q^2 u / r^2 + r^p u^2 = 0`.
    pub fn radial_power(&self) -> i32 {
        self.m
    }

    /// Mode of the factor multiplying the unknown in `DP(U) h = 2 a * h`.
    pub fn multiplier_mode(&self) -> i32 {
        if self.m < 0 {
            0
        } else {
            self.m
        }
    }

    pub fn product_mode(&self) -> i32 {
        self.multiplier_mode() + self.q() as i32
    }

    /// Largest index of `Δ0^{-1} P(U)` when `U = π^N U`.
    pub fn residual_support(&self, n: usize) -> usize {
        if self.m < 0 {
            2 * n + 1
        } else {
            2 * n + self.m as usize + 1
        }
    }

    /// The linear part applied after the product, `Δ0^{-1} (R^-)^m` from
    /// `V^{0, 2m}` (or `Δ0^{-1}` on `V^{0,1}`).
    pub fn linear_operator(&self) -> (Space, SequenceOperator) {
        if self.m < 0 {
            (Space::new(0, 1), SequenceOperator::InvDirichletLaplacian)
        } else {
            (
                Space::new(0, 2 * self.m),
                SequenceOperator::r_minus_pow(self.m as u32).then(SequenceOperator::InvDirichletLaplacian),
            )
        }
    }

    /// `π^N (linear part) π^{N+1}`, `(N + 1) x (N + 2)`. Rows up to `N`
    /// only see inputs up to `N + 1` as `(R^-)^m` is lower triangular and
    /// `Δ0^{-1}` lowers the index by at most one.
    pub fn linear_block<S: Scalar>(&self, n: usize, prec: Precision) -> Result<IntervalMatrix<S>> {
        let (src, op) = self.linear_operator();
        op.matrix::<S>(src, n + 1, n + 2, prec)
    }
}

/// Approximate zero `U0 = π^N U0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxSolution {
    pub m: i32,
    #[serde(rename = "N")]
    pub n: usize,
    pub u0: Vec<f64>,
    /// `||π^N F(U0)||_1` of the double precision model at each step.
    #[serde(default)]
    pub history: Vec<f64>,
}

impl ApproxSolution {
    pub fn problem(&self) -> Result<Problem> {
        Problem::new(self.m)
    }

    pub fn validate(&self) -> Result<()> {
        self.problem()?;
        if self.u0.len() != self.n + 1 {
            return Err(Error::DimensionMismatch { expected: self.n + 1, found: self.u0.len() });
        }
        if let Some(i) = self.u0.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("U0[{i}]")));
        }
        Ok(())
    }

    pub fn series(&self, prec: Precision) -> SingleModeSeries<BigInterval> {
        SingleModeSeries::new(0, self.m.unsigned_abs() as i32, self.u0.iter().map(|&x| BigInterval::from_f64(x, prec)).collect())
    }

    pub fn norm_l1(&self) -> Interval {
        self.u0.iter().map(|x| Interval::point(x.abs())).sum()
    }

    /// Padded or truncated copy with `N = n`.
    pub fn resized(&self, n: usize) -> ApproxSolution {
        let mut u0 = self.u0.clone();
        u0.resize(n + 1, 0.0);
        ApproxSolution { m: self.m, n, u0, history: Vec::new() }
    }
}

/// Stored initial guess.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub schema: u32,
    pub m: i32,
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: String,
    pub residual_l1: f64,
    pub u0: Vec<f64>,
}

impl Fixture {
    pub fn from_solution(sol: &ApproxSolution, seed: &str) -> Self {
        Fixture {
            schema: SCHEMA_VERSION,
            m: sol.m,
            n: sol.n,
            seed: seed.to_string(),
            residual_l1: sol.history.last().copied().unwrap_or(f64::NAN),
            u0: sol.u0.clone(),
        }
    }

    pub fn solution(&self) -> ApproxSolution {
        ApproxSolution { m: self.m, n: self.n, u0: self.u0.clone(), history: Vec::new() }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let f: Fixture = serde_json::from_str(&text)?;
        if f.u0.len() != f.n + 1 {
            return Err(Error::Parse(format!("{}: U0 has {} entries for N = {}", path.display(), f.u0.len(), f.n)));
        }
        Ok(f)
    }
}

pub fn fixture_file_name(m: i32) -> String {
    if m < 0 {
        format!("u0_m_minus{}.json", m.unsigned_abs())
    } else {
        format!("u0_m{m}.json")
    }
}

/// Fixtures shipped with the crate.
pub fn default_fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[derive(Clone, Debug, PartialEq)]
pub enum GuessSource {
    /// Regenerate from the radial shooting profile.
    Auto,
    /// `u0_m<m>.json` in the directory.
    FixtureDir(PathBuf),
    File(PathBuf),
    Values(Vec<f64>),
}

impl GuessSource {
    pub fn resolve(&self, problem: Problem, n: usize) -> Result<Vec<f64>> {
        let mut g = match self {
            GuessSource::Auto => shooting_seed(problem, n)?,
            GuessSource::FixtureDir(dir) => load_guess(&dir.join(fixture_file_name(problem.m)), problem)?,
            GuessSource::File(path) => load_guess(path, problem)?,
            GuessSource::Values(v) => v.clone(),
        };
        g.resize(n + 1, 0.0);
        Ok(g)
    }
}

fn load_guess(path: &Path, problem: Problem) -> Result<Vec<f64>> {
    let f = Fixture::load(path)?;
    if f.m != problem.m {
        return Err(Error::Parse(format!("{} holds a guess for m = {}", path.display(), f.m)));
    }
    Ok(f.u0)
}

/// Newton on the Galerkin model from `guess`.
pub fn newton_refine(problem: Problem, n: usize, guess: &[f64]) -> Result<ApproxSolution> {
    let g = Galerkin::new(problem, n)?;
    let report = newton(&g, guess)?;
    Ok(ApproxSolution { m: problem.m, n, u0: report.u, history: report.history })
}

/// Iterative refinement of `U0` against the multiple precision residual.
/// The double precision model stalls near `eps ||U0||^2`; here each step
/// solves `J s = mid F(U0)` with `F` evaluated at the working precision, so
/// the residual drops to the rounding of `U0` itself. Not rigorous.
pub fn polish(sol: &ApproxSolution, steps: usize, ctx: &MmtContext) -> Result<ApproxSolution> {
    let problem = sol.problem()?;
    let n = sol.n;
    let f_of = |u: &ApproxSolution| -> Result<(Vec<f64>, f64)> {
        let f = residual(problem, &u.series(ctx.prec), ctx)?;
        let head: Vec<f64> = (0..=n).map(|i| f.coeffs.get(i).map_or(0.0, |x| x.mid_f64())).collect();
        let norm = head.iter().map(|x| x.abs()).sum();
        Ok((head, norm))
    };
    let mut best = sol.clone();
    let (mut f, mut norm) = f_of(&best)?;
    for _ in 0..steps {
        let a = build_an(&best)?;
        let step = &a.an * nalgebra::DVector::from_vec(f.clone());
        let mut next = best.clone();
        for (x, s) in next.u0.iter_mut().zip(step.iter()) {
            *x -= s;
        }
        let (nf, nnorm) = f_of(&next)?;
        if !(nnorm < norm) {
            break;
        }
        next.history.push(nnorm);
        best = next;
        f = nf;
        norm = nnorm;
    }
    Ok(best)
}

#[derive(Clone, Debug)]
pub struct ApproxInverse {
    /// `(N + 1) x (N + 1)`, the tail acts as the identity.
    pub an: DMatrix<f64>,
    /// `||J||_1 ||A^N||_1` of the double precision Jacobian.
    pub condition: f64,
    /// `||I - A^N J||_1` in doubles.
    pub defect: f64,
}

pub fn build_an(sol: &ApproxSolution) -> Result<ApproxInverse> {
    sol.validate()?;
    let g = Galerkin::new(sol.problem()?, sol.n)?;
    let j = g.jacobian(&nalgebra::DVector::from_column_slice(&sol.u0));
    let an = j.clone().try_inverse().ok_or(Error::SingularJacobian)?;
    if an.iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularJacobian);
    }
    let n1 = |a: &DMatrix<f64>| a.column_iter().map(|c| c.lp_norm(1)).fold(0.0, f64::max);
    let defect = n1(&(DMatrix::identity(sol.n + 1, sol.n + 1) - &an * &j));
    Ok(ApproxInverse { condition: n1(&j) * n1(&an), defect, an })
}

fn check_len(what: &str, len: usize, max_index: usize) -> Result<()> {
    if len > max_index + 1 {
        return Err(Error::Domain(format!("{what} has {len} coefficients, support allows {}", max_index + 1)));
    }
    Ok(())
}

/// Rigorous `P(U)`, in the input space of the linear part.
pub fn nonlinear_term(problem: Problem, u: &SingleModeSeries<BigInterval>, ctx: &MmtContext) -> Result<Vec<BigInterval>> {
    let n = u.len().saturating_sub(1);
    if problem.m < 0 {
        let (_, w) = SequenceOperator::InvRPlus.apply(Space::new(0, 1), &u.coeffs, ctx.prec)?;
        check_len("(R+)^{-1} U", w.len(), n)?;
        let p = multiply(&SingleModeSeries::new(0, 0, w), u, ctx)?;
        check_len("product", p.len(), 2 * n)?;
        Ok(p.coeffs)
    } else {
        let p = multiply(u, u, ctx)?;
        check_len("product", p.len(), 2 * n)?;
        let (_, v) = SequenceOperator::r_minus_pow(problem.m as u32).apply(Space::new(0, 2 * problem.m), &p.coeffs, ctx.prec)?;
        check_len("lowered product", v.len(), 2 * n + problem.m as usize)?;
        Ok(v)
    }
}

/// Rigorous `Δ0^{-1} P(U)`.
pub fn nonlinear_image(problem: Problem, u: &SingleModeSeries<BigInterval>, ctx: &MmtContext) -> Result<Vec<BigInterval>> {
    let n = u.len().saturating_sub(1);
    let v = nonlinear_term(problem, u, ctx)?;
    let (_, t) = SequenceOperator::InvDirichletLaplacian.apply(problem.space(), &v, ctx.prec)?;
    check_len("Δ0^{-1} P(U)", t.len(), problem.residual_support(n))?;
    Ok(t)
}

/// Rigorous `F_m(U)`.
pub fn residual(problem: Problem, u: &SingleModeSeries<BigInterval>, ctx: &MmtContext) -> Result<SingleModeSeries<BigInterval>> {
    if u.k != 0 || u.m.unsigned_abs() != problem.q() {
        return Err(Error::GradingMismatch(format!("unknown must lie in V^(0,{})", problem.q())));
    }
    let mut t = nonlinear_image(problem, u, ctx)?;
    if t.len() < u.len() {
        t.resize(u.len(), BigInterval::zero(ctx.prec));
    }
    for (ti, ui) in t.iter_mut().zip(&u.coeffs) {
        *ti = ti.add(ui);
    }
    Ok(SingleModeSeries::new(0, problem.q() as i32, t))
}

/// Factor `a` in `DP(U0) h = 2 a * h`.
fn multiplier(problem: Problem, u: &SingleModeSeries<BigInterval>, prec: Precision) -> Result<SingleModeSeries<BigInterval>> {
    if problem.m < 0 {
        let (_, w) = SequenceOperator::InvRPlus.apply(Space::new(0, 1), &u.coeffs, prec)?;
        Ok(SingleModeSeries::new(0, 0, w))
    } else {
        Ok(u.clone())
    }
}

/// `π^N Δ0^{-1} (R^-)^m DG(U0)` on columns `0..=cols_max`.
pub fn derivative_block(problem: Problem, sol: &ApproxSolution, cols_max: usize, ctx: &MmtContext) -> Result<IntervalMatrix<Interval>> {
    let n = sol.n;
    let u = sol.series(ctx.prec);
    let a = multiplier(problem, &u, ctx.prec)?;
    let prod = multiplication_matrix(&a, problem.q() as i32, n + 2, cols_max + 1, ctx)?;
    let lin = problem.linear_block::<BigInterval>(n, ctx.prec)?;
    let two = BigInterval::from_f64(2.0, ctx.prec);
    let d = lin.matmul(&prod)?;
    Ok(IntervalMatrix::from_fn(d.rows(), d.cols(), |i, j| d.get(i, j).mul(&two).to_interval()))
}

fn identity(n: usize) -> IntervalMatrix<Interval> {
    IntervalMatrix::identity(n, Precision::DOUBLE)
}

fn vec_l1(v: &[Interval]) -> Interval {
    v.iter().map(|x| Interval::point(x.mag())).sum()
}

/// Individual terms of the three bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundTerms {
    pub y0_finite: f64,
    pub y0_tail: f64,
    pub z0: f64,
    pub z1_cross: f64,
    pub z1_tail: f64,
    pub z2_finite: f64,
    pub z2_tail: f64,
    pub u0_norm: f64,
}

#[derive(Clone, Debug)]
pub struct Bounds {
    pub y0: Interval,
    pub z1: Interval,
    pub z2: Interval,
    pub terms: BoundTerms,
}

fn an_interval(a: &ApproxInverse) -> IntervalMatrix<Interval> {
    IntervalMatrix::<Interval>::from_f64(&a.an)
}

/// `||A^N (U0 + π^N T)||_1 + ||(π^J - π^N) T||_1`, `T = Δ0^{-1} P(U0)`.
pub fn bound_y0(problem: Problem, sol: &ApproxSolution, a: &ApproxInverse, ctx: &MmtContext) -> Result<(Interval, Interval)> {
    let n = sol.n;
    let u = sol.series(ctx.prec);
    let t = nonlinear_image(problem, &u, ctx)?;
    let head: Vec<Interval> = (0..=n)
        .map(|i| {
            let ti = t.get(i).cloned().unwrap_or_else(|| BigInterval::zero(ctx.prec));
            ti.add(&u.coeffs[i]).to_interval()
        })
        .collect();
    let finite = vec_l1(&an_interval(a).matvec(&head)?);
    let tail = vec_l1(&t.iter().skip(n + 1).map(|x| x.to_interval()).collect::<Vec<_>>());
    Ok((finite, tail))
}

/// `max(Z0, cross) + tail`.
pub fn bound_z1(problem: Problem, sol: &ApproxSolution, a: &ApproxInverse, ctx: &MmtContext) -> Result<(Interval, Interval, Interval)> {
    let n = sol.n;
    let j = problem.residual_support(n);
    let d = derivative_block(problem, sol, j, ctx)?;
    let an = an_interval(a);
    // π^N (I + DT) π^N
    let jn = IntervalMatrix::from_fn(n + 1, n + 1, |i, k| *d.get(i, k) + if i == k { Interval::ONE } else { Interval::ZERO });
    let z0 = opnorm_l1(&identity(n + 1).sub(&an.matmul(&jn)?)?, None, None);
    let cross = opnorm_l1(&an.matmul(&d.submatrix(0..n + 1, n + 1..j + 1))?, None, None);
    let tail = if problem.m < 0 {
        let u = sol.series(ctx.prec);
        let w = multiplier(problem, &u, ctx.prec)?;
        let wn = vec_l1(&w.coeffs.iter().map(|x| x.to_interval()).collect::<Vec<_>>());
        wn / Interval::from_i128(2 * (n * n) as i128)
    } else {
        let d = (2 * (n + 1) + problem.m as usize) as i128;
        Interval::from_i128(2) * sol.norm_l1() / Interval::from_i128(d * d)
    };
    Ok((z0, cross, tail))
}

/// Finite part and analytic tail of `Z2`.
pub fn bound_z2(problem: Problem, n: usize, a: &ApproxInverse) -> Result<(Interval, Interval)> {
    let prec = Precision::DOUBLE;
    let an = an_interval(a);
    if problem.m < 0 {
        let lap = SequenceOperator::InvDirichletLaplacian.matrix::<Interval>(Space::new(0, 1), n + 1, n + 1, prec)?;
        let inv = SequenceOperator::InvRPlus.matrix::<Interval>(Space::new(0, 2), n + 1, n + 1, prec)?;
        let finite = Interval::from_i128(2) * opnorm_l1(&an.matmul(&lap.matmul(&inv)?)?, None, None);
        let tail = Interval::ratio(16, 15)? * opnorm_l1(&an, None, None) / Interval::from_i128(n as i128 + 3)
            + Interval::ratio(1, 2 * n as i128)?;
        Ok((finite, tail))
    } else {
        let lin = problem.linear_block::<Interval>(n, prec)?;
        let finite = Interval::from_i128(2) * opnorm_l1(&an.matmul(&lin)?, None, None);
        let d = (2 * (n + 1) + problem.m as usize) as i128;
        Ok((finite, Interval::ratio(2, d * d)?))
    }
}

pub fn compute_bounds(problem: Problem, sol: &ApproxSolution, a: &ApproxInverse, ctx: &MmtContext) -> Result<Bounds> {
    sol.validate()?;
    if sol.n == 0 {
        return Err(Error::Domain("truncation N must be positive".into()));
    }
    let (y_fin, y_tail) = bound_y0(problem, sol, a, ctx)?;
    let (z0, cross, z1_tail) = bound_z1(problem, sol, a, ctx)?;
    let (z2_fin, z2_tail) = bound_z2(problem, sol.n, a)?;
    let y0 = y_fin + y_tail;
    let z1 = z0.max(cross) + z1_tail;
    let z2 = z2_fin + z2_tail;
    for (name, v) in [("Y0", y0), ("Z1", z1), ("Z2", z2)] {
        v.ensure_finite(name)?;
    }
    Ok(Bounds {
        y0,
        z1,
        z2,
        terms: BoundTerms {
            y0_finite: y_fin.hi(),
            y0_tail: y_tail.hi(),
            z0: z0.hi(),
            z1_cross: cross.hi(),
            z1_tail: z1_tail.hi(),
            z2_finite: z2_fin.hi(),
            z2_tail: z2_tail.hi(),
            u0_norm: sol.norm_l1().hi(),
        },
    })
}

pub fn proof_context(bits: u32) -> Result<MmtContext> {
    Ok(MmtContext::new(Precision::new(bits)?).with_accuracy(PROOF_ACCURACY))
}

#[derive(Clone, Debug)]
pub struct ProofOutcome {
    pub solution: ApproxSolution,
    pub inverse: ApproxInverse,
    pub bounds: Bounds,
    pub radius: CertifiedRadius,
    pub certificate: Certificate,
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Newton, approximate inverse, bounds and the radii polynomial.
pub fn prove(m: i32, n: usize, bits: u32, guess: &GuessSource) -> Result<ProofOutcome> {
    let started = unix_now();
    let clock = Instant::now();
    let problem = Problem::new(m)?;
    if n == 0 {
        return Err(Error::Domain("truncation N must be positive".into()));
    }
    let ctx = proof_context(bits)?;
    let seed = guess.resolve(problem, n)?;
    let solution = polish(&newton_refine(problem, n, &seed)?, POLISH_STEPS, &ctx)?;
    if solution.u0.iter().all(|&x| x == 0.0) {
        return Err(Error::Domain("Newton converged to the trivial solution".into()));
    }
    let inverse = build_an(&solution)?;
    let bounds = compute_bounds(problem, &solution, &inverse, &ctx)?;
    let data = RadiiData::new(bounds.y0, bounds.z1, bounds.z2);
    let radius = nk::certify_with(&data, ProbeSchedule::default())?;
    let certificate = Certificate::new(
        &solution,
        &bounds,
        &radius,
        bits,
        ctx.max_bits_used(),
        started,
        unix_now(),
        clock.elapsed().as_secs_f64(),
    )?;
    Ok(ProofOutcome { solution, inverse, bounds, radius, certificate })
}

/// Enclosure of the boundary trace `u(1, θ)` of the solution certified in
/// the ball of radius `r` around `U0`.
///
/// That solution lies within `r + ||F(U0)||_1` of `-Δ0^{-1} P(U0)`, whose
/// trace vanishes because every column of `Δ0^{-1}` sums to zero; the
/// enclosure therefore holds zero, with width set by the interval row
/// sums and the two radii. `|Q_n(1, θ)| = 1` on `V^{0,q}`.
pub fn boundary_enclosure(sol: &ApproxSolution, r: f64, theta: f64, ctx: &MmtContext) -> Result<(BigInterval, BigInterval)> {
    let problem = sol.problem()?;
    let prec = ctx.prec;
    let u = sol.series(prec);
    let t = nonlinear_image(problem, &u, ctx)?;
    let minus_t = SingleModeSeries::new(0, problem.q() as i32, t.iter().map(|x| x.neg()).collect());
    let f = residual(problem, &u, ctx)?;
    let f_norm = vec_l1(&f.coeffs.iter().map(|x| x.to_interval()).collect::<Vec<_>>()).hi();
    let (re, im) = zernike::eval_single(&minus_t, &BigInterval::one(prec), &BigInterval::from_f64(theta, prec))?;
    let rho = Interval::point(r) + Interval::point(f_norm);
    Ok((re.widen(rho.hi()), im.widen(rho.hi())))
}

/// Plotting grid of the approximate solution.
pub fn export_solution_grid<W: Write>(sol: &ApproxSolution, grid: PolarGrid, out: &mut W) -> Result<()> {
    let prec = Precision::DEFAULT;
    let z = ZernikeSeries::from_mode(sol.series(prec));
    zernike::write_grid_csv(&z, grid, prec, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: Precision = Precision::DEFAULT;

    fn ctx() -> MmtContext {
        proof_context(128).unwrap()
    }

    fn point(v: &[BigInterval]) -> Vec<f64> {
        v.iter().map(|x| x.mid_f64()).collect()
    }

    #[test]
    fn residual_of_zero_is_zero() {
        for m in [-1, 0, 3] {
            let p = Problem::new(m).unwrap();
            let u = SingleModeSeries::new(0, p.q() as i32, vec![BigInterval::zero(P); 4]);
            let f = residual(p, &u, &ctx()).unwrap();
            assert!(f.coeffs.iter().all(|c| c.contains_zero() && c.mag_f64() == 0.0));
        }
    }

    #[test]
    fn residual_of_constant() {
        // e0 + Δ0^{-1}(e0 * e0) = e0 + (e1 - e0) / 8
        let p = Problem::new(0).unwrap();
        let u = SingleModeSeries::new(0, 0, vec![BigInterval::one(P)]);
        let f = residual(p, &u, &ctx()).unwrap();
        assert!(f.coeffs[0].contains_f64(0.875) && f.coeffs[1].contains_f64(0.125));
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn dense_inverse_path_agrees() {
        // (R+_{0,1})^{-1}(U * U) against ((R+_{0,0})^{-1} U) * U
        let p = Problem::new(-1).unwrap();
        let c = ctx();
        let u = SingleModeSeries::new(0, 1, vec![BigInterval::from_f64(1.0, P), BigInterval::from_f64(-0.5, P), BigInterval::from_f64(0.25, P)]);
        let via_switch = nonlinear_term(p, &u, &c).unwrap();
        let sq = multiply(&u, &u, &c).unwrap();
        let (_, direct) = SequenceOperator::InvRPlus.apply(Space::new(0, 2), &sq.coeffs, P).unwrap();
        for i in 0..direct.len().max(via_switch.len()) {
            let a = direct.get(i).cloned().unwrap_or_else(|| BigInterval::zero(P));
            let b = via_switch.get(i).cloned().unwrap_or_else(|| BigInterval::zero(P));
            assert!(!a.disjoint(&b), "{i}: {:?} {:?}", point(&[a.clone()]), point(&[b.clone()]));
        }
    }

    #[test]
    fn trivial_inverse_and_bounds() {
        let p = Problem::new(0).unwrap();
        let sol = ApproxSolution { m: 0, n: 6, u0: vec![0.0; 7], history: vec![] };
        let a = build_an(&sol).unwrap();
        assert!((a.an.clone() - DMatrix::identity(7, 7)).abs().max() < 1e-15);
        let b = compute_bounds(p, &sol, &a, &ctx()).unwrap();
        assert_eq!(b.y0.hi(), 0.0);
        assert_eq!(b.z1.hi(), 0.0);
        let zero = ApproxInverse { an: DMatrix::zeros(7, 7), condition: 0.0, defect: 0.0 };
        let (fin, tail) = bound_z2(p, 6, &zero).unwrap();
        assert_eq!(fin.hi(), 0.0);
        assert!(tail.contains(2.0 / 196.0));
    }

    #[test]
    fn dirichlet_tail_constants_dominate_columns() {
        // ||π^∞ Δ0^{-1}||_1 <= 1 / (2(N+1)+m)^2 on V^{0,m}
        for m in [0u32, 1, 2, 20] {
            let n = 36usize;
            let a = SequenceOperator::InvDirichletLaplacian.matrix::<Interval>(Space::new(0, m as i32), n + 60, n + 51, Precision::DOUBLE).unwrap();
            let bound = 1.0 / ((2 * (n + 1) + m as usize) as f64).powi(2);
            for col in 0..=n + 50 {
                let s: f64 = (n + 1..n + 60).map(|i| a.get(i, col).mag()).sum();
                assert!(s <= bound, "m={m} col={col}: {s} > {bound}");
            }
        }
        // weighted versions used for m = -1
        let n = 36usize;
        let a = SequenceOperator::InvDirichletLaplacian.matrix::<Interval>(Space::new(0, 1), n + 60, n + 51, Precision::DOUBLE).unwrap();
        for col in 0..=n + 50 {
            let w1 = (2 * col + 2) as f64;
            let tail: f64 = (n + 1..n + 60).map(|i| a.get(i, col).mag()).sum::<f64>() * w1;
            assert!(tail <= 1.0 / (2.0 * n as f64), "col={col}");
            let full: f64 = (0..n + 60).map(|i| a.get(i, col).mag()).sum::<f64>() * w1 * w1;
            // attained at col = 1
            assert!(full <= 16.0 / 15.0 * (1.0 + 1e-12), "col={col}: {full}");
        }
        let inv = SequenceOperator::InvRPlus.matrix::<Interval>(Space::new(0, 2), n + 51, n + 51, Precision::DOUBLE).unwrap();
        for col in n + 1..=n + 50 {
            let s: f64 = (0..=col).map(|i| inv.get(i, col).mag() / (2 * i + 2) as f64 / (2 * i + 2) as f64).sum();
            assert!(s <= 1.0 / (2.0 * (n + 3) as f64) * (1.0 + 1e-12), "col={col}: {s}");
        }
    }

    #[test]
    fn fixture_names() {
        assert_eq!(fixture_file_name(-1), "u0_m_minus1.json");
        assert_eq!(fixture_file_name(20), "u0_m20.json");
    }
}
