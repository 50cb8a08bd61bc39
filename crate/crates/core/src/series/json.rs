use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{RingTag, TruncLaurent};
use crate::error::{Error, Result};
use crate::scalar::{PrimeContext, WittScalar, INF};

/// Serialized coefficient: coordinates of `p^denom * c` with absolute
/// precision `prec` (relative to the scaled value).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarDoc {
    pub coords: Vec<i64>,
    pub prec: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesDoc {
    pub lo: i64,
    pub hi: Option<i64>,
    pub coeffs: BTreeMap<String, ScalarDoc>,
    pub tag: RingTag,
    #[serde(default)]
    pub denom: i64,
    pub prec: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<String>,
}

impl ScalarDoc {
    pub fn from_scalar(c: &WittScalar, denom: i64) -> Self {
        let coords = c.coords_scaled(denom).into_iter().map(|x| x as i64).collect();
        let prec = if c.is_exact_zero() { INF } else { c.abs_prec() + denom };
        Self { coords, prec: prec.min(c.ctx().n() as i64 + denom.max(0)).max(0) }
    }

    pub fn to_scalar(&self, ctx: &Arc<PrimeContext>, denom: i64) -> Result<WittScalar> {
        if self.coords.len() != ctx.a() {
            return Err(Error::Malformed(format!("expected {} coordinates", ctx.a())));
        }
        if self.prec < 0 {
            return Err(Error::Malformed("negative precision".into()));
        }
        let prec = self.prec.min(ctx.n() as i64) as u32;
        Ok(WittScalar::from_coords(ctx, &self.coords, prec).shift(-denom))
    }
}

impl SeriesDoc {
    pub fn from_series(f: &TruncLaurent) -> Self {
        let denom = f.nonzero_terms().map(|(_, c)| -c.valuation()).max().unwrap_or(0).max(0);
        let mut coeffs = BTreeMap::new();
        for (e, c) in f.terms() {
            if c.is_exact_zero() {
                continue;
            }
            coeffs.insert(e.to_string(), ScalarDoc::from_scalar(c, denom));
        }
        let prec = f.min_abs_prec().saturating_add(denom).min(f.ctx().n() as i64 + denom);
        Self {
            lo: f.lo(),
            hi: f.hi(),
            coeffs,
            tag: f.tag(),
            denom,
            prec,
            radius: f.radius().map(|r| r.to_string()),
        }
    }

    pub fn to_series(&self, ctx: &Arc<PrimeContext>) -> Result<TruncLaurent> {
        let top = self
            .coeffs
            .keys()
            .map(|k| k.parse::<i64>().map_err(|_| Error::Malformed(format!("bad exponent {k:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let max_e = top.iter().copied().max().unwrap_or(self.lo);
        let end = self.hi.unwrap_or(max_e + 1);
        if let Some(&bad) = top.iter().find(|&&e| e < self.lo || e >= end) {
            return Err(Error::Malformed(format!("exponent {bad} outside the window")));
        }
        if end <= self.lo {
            return Err(Error::Malformed("empty window".into()));
        }
        let mut coeffs = vec![WittScalar::zero(ctx); (end - self.lo) as usize];
        for (k, doc) in &self.coeffs {
            let e: i64 = k.parse().expect("checked above");
            coeffs[(e - self.lo) as usize] = doc.to_scalar(ctx, self.denom)?;
        }
        let radius = match &self.radius {
            Some(r) => Some(r.parse::<Ratio<i64>>().map_err(|_| Error::Malformed(format!("bad radius {r:?}")))?),
            None => None,
        };
        let f = TruncLaurent::new(ctx, self.lo, coeffs, self.hi, self.tag).map_err(|e| Error::Malformed(e.to_string()))?;
        Ok(f.with_radius(radius))
    }
}
