use std::io::Write;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use diskcap::jacobi::{compare_methods, EvalMethod, JacobiWeight};
use diskcap::mmt::MmtContext;
use diskcap::pde_cap::{
    self, export_solution_grid, fixture_file_name, polish, proof_context, verify_certificate, write_atomic, Certificate,
    Fixture, GuessSource, Problem,
};
use diskcap::quadrature::{gauss_jacobi, QuadratureConfig};
use diskcap::serial::{MatrixJson, RuleJson, SCHEMA_VERSION};
use diskcap::zernike::PolarGrid;
use diskcap::Precision;

use crate::config::Config;
use crate::Failure;

/// Write to `out`, or to stdout when absent.
fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(p) => write_atomic(p, bytes)?,
        None => {
            let mut s = std::io::stdout().lock();
            s.write_all(bytes)?;
            s.flush()?;
        }
    }
    Ok(())
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(out, text.as_bytes())
}

fn with_path(e: diskcap::Error, path: &Path) -> Failure {
    let f = Failure::from(e);
    Failure::new(&f.kind, format!("{}: {}", path.display(), f.message))
}

pub fn quadrature(cfg: &Config, k: u32, m: u32, order: usize, bits: Option<u32>, out: Option<&Path>) -> Result<(), Failure> {
    cfg.check_order(order)?;
    let prec = Precision::new(bits.unwrap_or(cfg.bits))?;
    let rule = gauss_jacobi(JacobiWeight::new(k, m), order, QuadratureConfig::new(prec))?;
    emit_json(out, &RuleJson::from_rule(&rule)?)
}

#[derive(Serialize)]
struct TransformJson {
    schema: u32,
    basis: [u32; 2],
    nodes_from: [u32; 2],
    order: usize,
    degree: usize,
    method: EvalMethod,
    /// Precision the matrices were built at.
    bits: u32,
    forward: MatrixJson,
    inverse: Option<MatrixJson>,
}

#[allow(clippy::too_many_arguments)]
pub fn mmt(
    cfg: &Config,
    basis: (u32, u32),
    nodes: (u32, u32),
    order: usize,
    degree: Option<usize>,
    method: EvalMethod,
    inverse: bool,
    bits: Option<u32>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    cfg.check_order(order)?;
    let degree = degree.unwrap_or(order);
    cfg.check_order(degree)?;
    let prec = Precision::new(bits.unwrap_or(cfg.bits))?;
    let ctx = MmtContext::new(prec).with_method(method);
    let b = JacobiWeight::new(basis.0, basis.1);
    let n = JacobiWeight::new(nodes.0, nodes.1);
    let pair = ctx.pair(b, n, order, degree, inverse)?;
    let used = pair.prec.bits();
    let doc = TransformJson {
        schema: SCHEMA_VERSION,
        basis: [basis.0, basis.1],
        nodes_from: [nodes.0, nodes.1],
        order,
        degree,
        method: pair.method,
        bits: used,
        forward: MatrixJson::from_big(&pair.forward, used)?,
        inverse: pair.inverse.as_ref().map(|m| MatrixJson::from_big(m, used)).transpose()?,
    };
    emit_json(out, &doc)
}

pub fn bench(
    weight: (u32, u32),
    ns: &[usize],
    bits: u32,
    trials: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let prec = Precision::new(bits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<f64> = (0..trials.max(1)).map(|_| rng.random_range(-1.0..1.0)).collect();
    let w = JacobiWeight::new(weight.0, weight.1);
    let mut csv = String::from("N,method,max_radius,seconds\n");
    for &n in ns {
        let c = compare_methods(w, n, &points, prec)?;
        csv.push_str(&format!("{n},forsythe,{:e},{:e}\n", c.forsythe_radius, c.forsythe_seconds));
        csv.push_str(&format!("{n},linsys,{:e},{:e}\n", c.linsys_radius, c.linsys_seconds));
    }
    emit(out, csv.as_bytes())
}

pub fn guess_source(cfg: &Config, guess: &str) -> GuessSource {
    match guess {
        "auto" => GuessSource::Auto,
        "fixture" => GuessSource::FixtureDir(cfg.fixture_dir()),
        path => GuessSource::File(PathBuf::from(path)),
    }
}

pub fn cert_file_name(m: i32) -> String {
    fixture_file_name(m).replacen("u0_", "cert_", 1)
}

fn prove_one(m: i32, n: usize, bits: u32, guess: &GuessSource, path: &Path) -> Result<serde_json::Value, Failure> {
    let outcome = pde_cap::prove(m, n, bits, guess)?;
    // exit status 0 promises a certificate that re-verifies
    let report = verify_certificate(&outcome.certificate)?;
    outcome.certificate.save(path)?;
    let c = &outcome.certificate;
    Ok(json!({
        "m": m,
        "N": n,
        "y0": c.y0,
        "z1": c.z1,
        "z2": c.z2,
        "r": report.r,
        "max_bits": c.max_bits,
        "seconds": c.elapsed_seconds,
        "certificate": path.display().to_string(),
    }))
}

pub fn prove(cfg: &Config, ms: &[i32], n: usize, bits: Option<u32>, guess: &str, out: Option<&Path>) -> Result<(), Failure> {
    cfg.check_n(n)?;
    let bits = bits.unwrap_or(cfg.bits);
    Precision::new(bits)?;
    if ms.is_empty() {
        return Err(Failure::new("usage", "no value of m given"));
    }
    let guess = guess_source(cfg, guess);
    let dir = match out {
        Some(p) if ms.len() > 1 => Some(p.to_path_buf()),
        Some(_) => None,
        None => Some(cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from("."))),
    };
    let paths: Vec<PathBuf> =
        ms.iter().map(|&m| dir.as_ref().map_or_else(|| out.unwrap().to_path_buf(), |d| d.join(cert_file_name(m)))).collect();
    let results: Vec<_> = ms.par_iter().zip(&paths).map(|(&m, p)| prove_one(m, n, bits, &guess, p)).collect();
    let mut failed = Vec::new();
    for (r, &m) in results.into_iter().zip(ms) {
        match r {
            Ok(summary) => println!("{summary}"),
            Err(e) => failed.push((m, e)),
        }
    }
    match failed.len() {
        0 => Ok(()),
        1 => {
            let (m, e) = failed.pop().unwrap();
            Err(Failure::new(&e.kind, format!("m = {m}: {}", e.message)))
        }
        _ => {
            let message = failed.iter().map(|(m, e)| format!("m = {m}: {}", e.message)).collect::<Vec<_>>().join("; ");
            Err(Failure::new("multiple", message))
        }
    }
}

pub fn verify(path: &Path) -> Result<(), Failure> {
    let cert = Certificate::load(path).map_err(|e| with_path(e, path))?;
    let report = verify_certificate(&cert)?;
    println!("{}", serde_json::to_string(&report)?);
    Ok(())
}

/// Solution for plotting: a certificate or fixture file, else a fresh
/// Newton solution.
pub fn grid(
    cfg: &Config,
    source: GridSource,
    nr: usize,
    ntheta: usize,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let sol = match source {
        GridSource::Certificate(p) => Certificate::load(&p).map_err(|e| with_path(e, &p))?.solution(),
        GridSource::Fixture(p) => Fixture::load(&p).map_err(|e| with_path(e, &p))?.solution(),
        GridSource::Solve { m, n, guess } => {
            cfg.check_n(n)?;
            let problem = Problem::new(m)?;
            let seed = guess_source(cfg, &guess).resolve(problem, n)?;
            pde_cap::newton_refine(problem, n, &seed)?
        }
    };
    sol.validate()?;
    let mut buf = Vec::new();
    export_solution_grid(&sol, PolarGrid { nr, ntheta }, &mut buf)?;
    emit(out, &buf)
}

pub enum GridSource {
    Certificate(PathBuf),
    Fixture(PathBuf),
    Solve { m: i32, n: usize, guess: String },
}

/// Regenerate a fixture: shooting seed, Galerkin Newton, then refinement
/// against the multiple precision residual.
pub fn guess(cfg: &Config, m: i32, n: usize, bits: Option<u32>, out: Option<&Path>) -> Result<(), Failure> {
    cfg.check_n(n)?;
    let problem = Problem::new(m)?;
    let ctx = proof_context(bits.unwrap_or(cfg.bits))?;
    let seed = GuessSource::Auto.resolve(problem, n)?;
    let sol = polish(&pde_cap::newton_refine(problem, n, &seed)?, pde_cap::POLISH_STEPS, &ctx)?;
    emit_json(out, &Fixture::from_solution(&sol, "shooting"))
}
