//! Free F-modules over `Omega`.

mod matrix;
mod rank1;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::froblift::{FrobeniusLift, LiftDoc};
use crate::linalg::char_poly;
use crate::scalar::{PrimeContext, WittScalar};
use crate::series::{gauss_valuation, laurent_canonical_factor, NewtonPolygon, RingTag, SeriesDoc, TruncLaurent, Q};

pub use matrix::{subsets, SeriesMatrix};
pub(crate) use rank1::normalize_constant;
pub use rank1::{congruent_mod_pt, rank1_normalize, Rank1Doc, Rank1Report};

/// `F(e_j) = p^twist * sum_i Phi_ij e_i`, semilinear over the lift.
#[derive(Clone, Debug, PartialEq)]
pub struct FModule {
    lift: FrobeniusLift,
    phi: SeriesMatrix,
    twist: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FModuleDoc {
    pub lift: LiftDoc,
    pub rank: usize,
    pub phi: Vec<Vec<SeriesDoc>>,
    #[serde(default)]
    pub twist: i64,
}

/// Slopes `l_i / m` of `F^m v_i = p^{l_i} v_i` at the special fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeData {
    pub m: usize,
    pub slopes: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenReport {
    pub eigen_ok: bool,
    pub in_m: bool,
    /// Exponents `[lo, hi)` on which the check is conclusive (`hi = None`
    /// when exact).
    pub certified_window: (i64, Option<i64>),
}

impl FModule {
    pub fn new(lift: FrobeniusLift, phi: SeriesMatrix, twist: i64) -> Result<Self> {
        if phi.nrows() == 0 || phi.nrows() != phi.ncols() {
            return Err(Error::InvalidParameter("Phi must be a nonempty square matrix".into()));
        }
        if phi.rows().iter().flatten().any(|f| f.lo() < 0 && f.terms().any(|(e, c)| e < 0 && !c.is_zero())) {
            return Err(Error::InvalidParameter("Phi entries must lie in Omega".into()));
        }
        let phi = phi.map(|f| f.clone().with_tag(RingTag::Omega))?;
        Ok(Self { lift, phi, twist })
    }

    pub fn ctx(&self) -> &Arc<PrimeContext> {
        self.lift.ctx()
    }

    pub fn lift(&self) -> &FrobeniusLift {
        &self.lift
    }

    pub fn phi(&self) -> &SeriesMatrix {
        &self.phi
    }

    pub fn rank(&self) -> usize {
        self.phi.nrows()
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn from_doc(ctx: &Arc<PrimeContext>, doc: &FModuleDoc) -> Result<Self> {
        if doc.phi.len() != doc.rank || doc.phi.iter().any(|r| r.len() != doc.rank) {
            return Err(Error::Malformed(format!("phi must be {0} x {0}", doc.rank)));
        }
        let lift = FrobeniusLift::from_doc(ctx, &doc.lift)?;
        let rows = doc
            .phi
            .iter()
            .map(|r| r.iter().map(|d| d.to_series(ctx)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(lift, SeriesMatrix::from_rows(rows)?, doc.twist)
    }

    pub fn to_doc(&self) -> FModuleDoc {
        FModuleDoc {
            lift: self.lift.to_doc(),
            rank: self.rank(),
            phi: self.phi.rows().iter().map(|r| r.iter().map(SeriesDoc::from_series).collect()).collect(),
            twist: self.twist,
        }
    }

    /// `F(v) = p^twist Phi sigma(v)`.
    pub fn apply_f(&self, v: &[TruncLaurent]) -> Result<Vec<TruncLaurent>> {
        if v.len() != self.rank() {
            return Err(Error::InvalidParameter("vector length differs from the rank".into()));
        }
        let sv = v.iter().map(|x| self.lift.apply(x)).collect::<Result<Vec<_>>>()?;
        let pt = WittScalar::p_power(self.ctx(), self.twist);
        Ok(self.phi.apply(&sv)?.into_iter().map(|x| x.scale(&pt)).collect())
    }
}

/// `k` with `det Phi = p^k * (unit of Omega)`.
pub fn isogeny_check(m: &FModule) -> Result<i64> {
    let det = m.phi.det()?;
    if det.is_zero() {
        return Err(Error::NotIsogeny("determinant vanishes".into()));
    }
    let g = gauss_valuation(&det, Q::from_integer(0));
    let cf = laurent_canonical_factor(&det.clone().with_tag(RingTag::Gamma)?)?;
    if cf.n != 0 {
        return Err(Error::NotIsogeny(format!(
            "determinant is p^{} t^{} times a unit, not a p-power times a unit of Omega",
            cf.c.valuation(),
            cf.n
        )));
    }
    if !g.certified {
        return Err(Error::PrecisionLoss("determinant tail could dominate".into()));
    }
    Ok(cf.c.valuation() + m.twist * m.rank() as i64)
}

/// The F-module on `wedge^d M`, with Phi given by the `d x d` minors.
pub fn exterior_power(m: &FModule, d: usize) -> Result<FModule> {
    let n = m.rank();
    if d == 0 || d > n {
        return Err(Error::InvalidParameter(format!("exterior degree {d} outside 1..={n}")));
    }
    let basis = subsets(n, d);
    let rows = basis
        .iter()
        .map(|i| basis.iter().map(|j| m.phi.minor(i, j)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    FModule::new(m.lift.clone(), SeriesMatrix::from_rows(rows)?, m.twist * d as i64)
}

/// Slopes of `F^m` on the fiber at `t = 0`, with `m` the order of the
/// Frobenius power on the residue field.
pub fn special_slopes(m: &FModule) -> Result<SlopeData> {
    let ctx = m.ctx();
    let period = ctx.residue_order();
    let phi0 = m.phi.at_zero();
    let mut a = phi0.clone();
    for e in 1..period {
        a = a.mul(&phi0.frobenius(e as i64));
    }
    if a.det().is_zero() {
        return Err(Error::NotIsogenyAtOrigin);
    }
    let cp = char_poly(&a);
    let pts: Vec<(i64, Q)> = cp
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64, Q::from_integer(c.valuation())))
        .collect();
    let np = NewtonPolygon::from_points(&pts)?;
    let shift = Q::from_integer(m.twist);
    let mut slopes: Vec<Q> = np
        .root_valuations()
        .into_iter()
        .flat_map(|(v, k)| std::iter::repeat_n(v / Q::from_integer(period as i64) + shift, k as usize))
        .collect();
    slopes.sort();
    Ok(SlopeData { m: period, slopes })
}

/// Check `F v = p^l v` and whether `v` lies in `M` (no negative powers).
pub fn verify_eigenvector(m: &FModule, v: &[TruncLaurent], ell: i64) -> Result<EigenReport> {
    let fv = m.apply_f(v)?;
    let pl = WittScalar::p_power(m.ctx(), ell);
    let mut lo = i64::MAX;
    let mut hi: Option<i64> = None;
    let mut eigen_ok = true;
    for (a, x) in fv.iter().zip(v) {
        let diff = a.sub(&x.scale(&pl));
        lo = lo.min(diff.lo());
        hi = match (hi, diff.hi()) {
            (None, h) => h,
            (h, None) => h,
            (Some(x), Some(y)) => Some(x.min(y)),
        };
        if !diff.is_zero() {
            eigen_ok = false;
        }
    }
    let in_m = v.iter().all(|x| x.terms().all(|(e, c)| e >= 0 || c.is_zero()));
    Ok(EigenReport { eigen_ok, in_m, certified_window: (if lo == i64::MAX { 0 } else { lo }, hi) })
}
