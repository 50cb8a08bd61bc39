use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{extension_degree_for_root, ExtensionSearch, FiniteField};
use crate::froblift::FrobeniusLift;
use crate::scalar::{teichmuller, WittScalar};
use crate::series::{RingTag, ScalarDoc, SeriesDoc, TruncLaurent};

/// Outcome of [`rank1_normalize`].
#[derive(Clone, Debug)]
pub struct Rank1Report {
    /// `b = a^{-1} c sigma(a)`, with `b(0) = 1`.
    pub b: TruncLaurent,
    pub iterations: usize,
    pub precision: u32,
    /// `b sigma(u) = u mod (p, t)^K`, checked after the iteration.
    pub fixed_point_ok: bool,
    /// `c sigma(a u) = a u mod (p, t)^K`, i.e. `F(a u v) = p^l a u v`.
    pub eigen_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Rank1Doc {
    pub a: ScalarDoc,
    pub u: SeriesDoc,
    pub b: SeriesDoc,
    pub iterations: usize,
    pub precision: u32,
    pub fixed_point_ok: bool,
    pub eigen_ok: bool,
}

impl Rank1Doc {
    pub fn new(a: &WittScalar, u: &TruncLaurent, r: &Rank1Report) -> Self {
        Self {
            a: ScalarDoc::from_scalar(a, 0),
            u: SeriesDoc::from_series(u),
            b: SeriesDoc::from_series(&r.b),
            iterations: r.iterations,
            precision: r.precision,
            fixed_point_ok: r.fixed_point_ok,
            eigen_ok: r.eigen_ok,
        }
    }
}

/// `f = g mod (p, t)^K`: the coefficient of `t^e` agrees modulo `p^{K-e}`
/// and nothing survives at negative exponents.
pub fn congruent_mod_pt(f: &TruncLaurent, g: &TruncLaurent, k: u32) -> bool {
    let k = k as i64;
    let d = f.sub(g);
    if d.terms().any(|(e, c)| e < 0 && !c.is_zero()) {
        return false;
    }
    (0..k).all(|e| d.coeff(e).is_some_and(|c| c.valuation() >= k - e))
}

fn residue_root(field: &FiniteField, eq: &[(u64, Vec<u64>)], nonzero: bool) -> Result<Vec<u64>> {
    if let Some(r) = field.roots(eq).into_iter().find(|r| !nonzero || !field.is_zero(r)) {
        return Ok(r);
    }
    match extension_degree_for_root(field, eq, nonzero) {
        ExtensionSearch::Degree(d) => Err(Error::ExtensionRequired(d)),
        ExtensionSearch::Exhausted => Err(Error::ExtensionSearchLimit),
    }
}

/// Find `a` in `W` with `a^{-1} c0 sigma^m(a) = 1`: a residue root of
/// `X^{q^m-1} = c0^{-1}`, then digit-by-digit correction by Artin-Schreier
/// residue equations.
pub(crate) fn normalize_constant(c0: &WittScalar, m: u32) -> Result<WittScalar> {
    let ctx = c0.ctx().clone();
    if !c0.is_unit() {
        return Err(Error::NotUnit("c(0) is not a p-adic unit".into()));
    }
    let field = ctx.residue_field();
    let q = ctx.q().checked_pow(m).ok_or_else(|| Error::InvalidParameter("q^m overflows".into()))?;
    let gamma = field.inv(&c0.residue()).expect("unit residue");
    let eq = vec![(q - 1, field.one()), (0, field.neg(&gamma))];
    let root = residue_root(field, &eq, true)?;
    let mut a = teichmuller(&ctx, &root);
    for _ in 0..=ctx.n() {
        let b0 = a.inv()?.mul(c0).mul(&a.frobenius(m as i64));
        let delta = b0.sub(&WittScalar::one(&ctx));
        if delta.is_zero() {
            return Ok(a);
        }
        let j = delta.valuation();
        let beta = delta.shift(-j).residue();
        // (1 + p^j y) changes b0 by p^j (sigma^m(y) - y)
        let eq = vec![(q, field.one()), (1, field.neg(&field.one())), (0, beta)];
        let y = residue_root(field, &eq, false)?;
        let corr = WittScalar::one(&ctx).add(&WittScalar::lift_residue(&ctx, &y).shift(j));
        a = a.mul(&corr);
    }
    Err(Error::PrecisionLoss("constant normalization did not converge".into()))
}

/// Normalize the rank-one F-module `F v = p^l c v`: returns `a` in `W` and
/// `u` in `Omega` with `b sigma(u) = u mod (p, t)^K` for
/// `b = a^{-1} c sigma(a)`, so that `w = a u v` satisfies `F w = p^l w`.
pub fn rank1_normalize(
    sigma: &FrobeniusLift,
    c: &TruncLaurent,
    k: u32,
) -> Result<(WittScalar, TruncLaurent, Rank1Report)> {
    let ctx = sigma.ctx().clone();
    if k == 0 || k > ctx.n() {
        return Err(Error::InvalidParameter(format!("precision target must lie in 1..={}", ctx.n())));
    }
    if c.lo() < 0 && c.terms().any(|(e, x)| e < 0 && !x.is_zero()) {
        return Err(Error::NotUnit("c has negative powers of t".into()));
    }
    if c.hi().is_some_and(|h| h < k as i64) {
        return Err(Error::PrecisionExhausted(k as usize));
    }
    let a = normalize_constant(&c.constant_term(), 1)?;
    let b = c.scale(&a.inv()?.mul(&a.frobenius(1)));
    let bw = b.truncate(k as i64)?;
    let mut u = TruncLaurent::one(&ctx, RingTag::Omega).truncate(k as i64)?;
    let mut iterations = 0;
    let mut stable = false;
    for _ in 0..(4 * k as usize + 8) {
        iterations += 1;
        let next = bw.mul(&sigma.apply(&u)?)?.truncate(k as i64)?;
        let done = congruent_mod_pt(&next, &u, k);
        u = next;
        if done {
            stable = true;
            break;
        }
    }
    if !stable {
        return Err(Error::PrecisionExhausted(k as usize));
    }
    let fixed_point_ok = congruent_mod_pt(&b.mul(&sigma.apply(&u)?)?, &u, k);
    let au = u.scale(&a);
    let eigen_ok = congruent_mod_pt(&c.mul(&sigma.apply(&au)?)?, &au, k);
    if !fixed_point_ok {
        return Err(Error::InvariantViolation("b sigma(u) = u fails after stabilization".into()));
    }
    Ok((a, u, Rank1Report { b, iterations, precision: k, fixed_point_ok, eigen_ok }))
}
