//! Proof certificates.
//!
//! A certificate stores `U0`, the three bounds as outward decimal
//! intervals and the certified radius. It is re-checked by evaluating the
//! radii polynomial on the stored values, without recomputing any bound.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::nk::{radii_polynomial, CertifiedRadius, ProbeSchedule, RadiiData};
use crate::serial::{interval_to_pair, pair_to_interval, IntervalPair, SCHEMA_VERSION};

use super::{ApproxSolution, BoundTerms, Bounds};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub m: i32,
    #[serde(rename = "N")]
    pub n: usize,
    /// Requested working precision.
    pub bits: u32,
    /// Highest precision any transform needed.
    pub max_bits: u32,
    pub y0: IntervalPair,
    pub z1: IntervalPair,
    pub z2: IntervalPair,
    pub r: f64,
    pub p_r: f64,
    pub probes: usize,
    pub schedule: ProbeSchedule,
    pub terms: BoundTerms,
    pub u0_sha256: String,
    pub u0: Vec<f64>,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub elapsed_seconds: f64,
    /// SHA-256 of the JSON form with this field empty.
    pub content_sha256: String,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn u0_digest(u0: &[f64]) -> String {
    let mut h = Sha256::new();
    for x in u0 {
        h.update(x.to_le_bytes());
    }
    hex(&h.finalize())
}

impl Certificate {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        sol: &ApproxSolution,
        bounds: &Bounds,
        radius: &CertifiedRadius,
        bits: u32,
        max_bits: u32,
        started_unix: u64,
        finished_unix: u64,
        elapsed_seconds: f64,
    ) -> Result<Self> {
        let mut c = Certificate {
            schema: SCHEMA_VERSION,
            m: sol.m,
            n: sol.n,
            bits,
            max_bits,
            y0: interval_to_pair(&bounds.y0),
            z1: interval_to_pair(&bounds.z1),
            z2: interval_to_pair(&bounds.z2),
            r: radius.r0,
            p_r: radius.p_hi,
            probes: radius.probes,
            schedule: radius.schedule,
            terms: bounds.terms.clone(),
            u0_sha256: u0_digest(&sol.u0),
            u0: sol.u0.clone(),
            started_unix,
            finished_unix,
            elapsed_seconds,
            content_sha256: String::new(),
        };
        c.content_sha256 = c.content_digest()?;
        Ok(c)
    }

    pub fn content_digest(&self) -> Result<String> {
        let mut copy = self.clone();
        copy.content_sha256 = String::new();
        let text = serde_json::to_vec(&copy)?;
        Ok(hex(&Sha256::digest(&text)))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json()?.as_bytes())
    }

    pub fn bounds(&self) -> Result<(Interval, Interval, Interval)> {
        Ok((pair_to_interval(&self.y0)?, pair_to_interval(&self.z1)?, pair_to_interval(&self.z2)?))
    }

    pub fn solution(&self) -> ApproxSolution {
        ApproxSolution { m: self.m, n: self.n, u0: self.u0.clone(), history: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub m: i32,
    #[serde(rename = "N")]
    pub n: usize,
    pub r: f64,
    /// Upper end of `p(r)` recomputed from the stored bounds.
    pub p_r: f64,
}

/// Re-check a certificate from its stored values.
pub fn verify_certificate(c: &Certificate) -> Result<VerifyReport> {
    let bad = |why: String| Err(Error::InvalidCertificate(why));
    if c.schema != SCHEMA_VERSION {
        return bad(format!("schema {} is not {}", c.schema, SCHEMA_VERSION));
    }
    if c.content_digest()? != c.content_sha256 {
        return bad("content digest does not match".into());
    }
    if u0_digest(&c.u0) != c.u0_sha256 || c.u0.len() != c.n + 1 {
        return bad("U0 digest or length does not match".into());
    }
    let (y0, z1, z2) = c.bounds()?;
    if y0.lo() < 0.0 || z1.lo() < 0.0 || z2.lo() < 0.0 {
        return bad("negative bound".into());
    }
    if !(z1.hi() < 1.0) {
        return bad(format!("Z1 = {} is not below 1", z1.hi()));
    }
    if !(c.r.is_finite() && c.r > 0.0) {
        return bad(format!("radius {} is not positive", c.r));
    }
    let p = radii_polynomial(&RadiiData::new(y0, z1, z2), c.r);
    if !(p.hi() < 0.0) {
        return bad(format!("p(r) <= {} is not negative", p.hi()));
    }
    Ok(VerifyReport { m: c.m, n: c.n, r: c.r, p_r: p.hi() })
}

/// Write through a temporary file and rename it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}
