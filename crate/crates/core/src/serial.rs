//! JSON forms of intervals, rules, matrices and series.
//!
//! An interval is a pair of decimal strings `[lo, hi]`. For double
//! intervals the shortest round-trip form of each end is written, which
//! parses back to the same double. Multiple precision ends are rounded
//! outward when converted to decimal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{BigInterval, Interval, IntervalMatrix, Precision};
use crate::quadrature::QuadratureRule;
use crate::zernike::{SingleModeSeries, ZernikeSeries};

pub const SCHEMA_VERSION: u32 = 1;

pub type IntervalPair = [String; 2];

pub fn interval_to_pair(x: &Interval) -> IntervalPair {
    [format!("{:e}", x.lo()), format!("{:e}", x.hi())]
}

pub fn pair_to_interval(p: &IntervalPair) -> Result<Interval> {
    let parse = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("{s}: {e}")));
    Interval::new(parse(&p[0])?, parse(&p[1])?)
}

pub fn big_to_pair(x: &BigInterval) -> Result<IntervalPair> {
    let (lo, hi) = x.to_decimal_pair(x.precision().decimal_digits())?;
    Ok([lo, hi])
}

pub fn pair_to_big(p: &IntervalPair, prec: Precision) -> Result<BigInterval> {
    BigInterval::from_decimal_pair(&p[0], &p[1], prec)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleJson {
    pub schema: u32,
    pub k: u32,
    pub m: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub bits: u32,
    pub nodes: Vec<IntervalPair>,
    pub weights: Vec<IntervalPair>,
}

impl RuleJson {
    pub fn from_rule(rule: &QuadratureRule) -> Result<Self> {
        Ok(RuleJson {
            schema: SCHEMA_VERSION,
            k: rule.weight.k,
            m: rule.weight.m,
            n: rule.order,
            bits: rule.prec.bits(),
            nodes: rule.nodes.iter().map(big_to_pair).collect::<Result<_>>()?,
            weights: rule.weights.iter().map(big_to_pair).collect::<Result<_>>()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub schema: u32,
    pub rows: usize,
    pub cols: usize,
    pub bits: u32,
    /// Row-major.
    pub entries: Vec<Vec<IntervalPair>>,
}

impl MatrixJson {
    pub fn from_big(m: &IntervalMatrix<BigInterval>, bits: u32) -> Result<Self> {
        let entries = (0..m.rows()).map(|i| m.row(i).iter().map(big_to_pair).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        Ok(MatrixJson { schema: SCHEMA_VERSION, rows: m.rows(), cols: m.cols(), bits, entries })
    }

    pub fn to_big(&self, prec: Precision) -> Result<IntervalMatrix<BigInterval>> {
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(Error::Parse("matrix shape does not match its entries".into()));
        }
        let mut out = IntervalMatrix::zeros(self.rows, self.cols, prec);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                out.set(i, j, pair_to_big(p, prec)?);
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeJson {
    pub m: i32,
    pub coeffs: Vec<IntervalPair>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub schema: u32,
    pub k: u32,
    pub modes: Vec<ModeJson>,
}

impl SeriesJson {
    pub fn from_series(s: &ZernikeSeries<BigInterval>) -> Result<Self> {
        let modes = s
            .modes
            .iter()
            .map(|(&m, c)| Ok(ModeJson { m, coeffs: c.iter().map(big_to_pair).collect::<Result<_>>()? }))
            .collect::<Result<_>>()?;
        Ok(SeriesJson { schema: SCHEMA_VERSION, k: s.k, modes })
    }

    pub fn from_single(s: &SingleModeSeries<BigInterval>) -> Result<Self> {
        Self::from_series(&ZernikeSeries::from_mode(s.clone()))
    }

    pub fn to_series(&self, prec: Precision) -> Result<ZernikeSeries<BigInterval>> {
        let mut out = ZernikeSeries::new(self.k);
        for mode in &self.modes {
            let c = mode.coeffs.iter().map(|p| pair_to_big(p, prec)).collect::<Result<Vec<_>>>()?;
            if out.modes.insert(mode.m, c).is_some() {
                return Err(Error::Parse(format!("mode {} listed twice", mode.m)));
            }
        }
        Ok(out)
    }
}
