//! Frobenius lifts `t -> t^sigma` on series rings.

mod radius;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{PrimeContext, WittScalar};
use crate::series::{RingTag, SeriesDoc, TruncLaurent, DEFAULT_EXPANSION};

pub use radius::{min_preimage_valuation, radius_lambda, radius_mu, RadiusDirection, RadiusMap};

/// A Frobenius lift, given by the image `T = t^sigma` (a power series) and
/// the Frobenius power `q = p^s` of the context.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusLift {
    image: TruncLaurent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftDoc {
    pub image: SeriesDoc,
    pub s: u32,
}

impl FrobeniusLift {
    /// Validate that `image` lifts the q-power map.
    pub fn new(image: TruncLaurent) -> Result<Self> {
        let ctx = image.ctx().clone();
        if image.lo() < 0 && image.terms().any(|(e, c)| e < 0 && !c.is_zero()) {
            return Err(Error::InvariantViolation("t^sigma must be a power series".into()));
        }
        let q = ctx.q() as i64;
        if image.hi().is_some_and(|h| h <= q) {
            return Err(Error::InvariantViolation(format!("t^sigma window must contain t^{q}")));
        }
        let one = WittScalar::one(&ctx);
        for e in 0..image.top().max(q + 1) {
            let c = image.coeff(e).expect("inside window");
            let expected_unit = e == q;
            let ok = if expected_unit { c.valuation() == 0 && c.sub(&one).valuation() >= 1 } else { c.valuation() >= 1 };
            if !ok {
                return Err(Error::InvariantViolation(format!(
                    "coefficient of t^{e} violates lifting the q-power map modulo p (q = {q})"
                )));
            }
        }
        let image = image.with_tag(RingTag::Omega)?;
        Ok(Self { image })
    }

    /// `t^sigma = t^q`.
    pub fn standard(ctx: &Arc<PrimeContext>) -> Self {
        let t = TruncLaurent::monomial(WittScalar::one(ctx), ctx.q() as i64, RingTag::Omega);
        Self { image: t }
    }

    /// `t^sigma = (1 + t)^q - 1`.
    pub fn cyclotomic(ctx: &Arc<PrimeContext>) -> Self {
        let q = ctx.q();
        let mut coeffs = vec![0i64; q as usize + 1];
        let mut binom = 1i64;
        for (k, slot) in coeffs.iter_mut().enumerate().skip(1) {
            binom = binom * (q as i64 - k as i64 + 1) / k as i64;
            *slot = binom;
        }
        let image = TruncLaurent::from_ints(ctx, 0, &coeffs, None, RingTag::Omega).expect("polynomial");
        Self { image }
    }

    pub fn from_doc(ctx: &Arc<PrimeContext>, doc: &LiftDoc) -> Result<Self> {
        if doc.s != ctx.s() {
            return Err(Error::Malformed(format!("lift has s = {} but the context has s = {}", doc.s, ctx.s())));
        }
        Self::new(doc.image.to_series(ctx)?)
    }

    pub fn to_doc(&self) -> LiftDoc {
        LiftDoc { image: SeriesDoc::from_series(&self.image), s: self.ctx().s() }
    }

    pub fn ctx(&self) -> &Arc<PrimeContext> {
        self.image.ctx()
    }

    pub fn image(&self) -> &TruncLaurent {
        &self.image
    }

    pub fn q(&self) -> u64 {
        self.ctx().q()
    }

    /// Coefficient `a_i` of `t^sigma` (`None` beyond the window).
    pub fn coeff(&self, i: i64) -> Option<WittScalar> {
        self.image.coeff(i)
    }

    pub fn is_zero_centered(&self) -> bool {
        self.image.constant_term().is_zero()
    }

    /// The coefficient `c` with `t^sigma = c t mod t^2`.
    pub fn linear_coefficient(&self) -> WittScalar {
        self.image.coeff(1).expect("window contains t^q")
    }

    /// Lowest exponent with a nonzero coefficient in `t^sigma`.
    fn lowest_exponent(&self) -> i64 {
        self.image.nonzero_terms().next().map_or(0, |(e, _)| e)
    }

    fn is_monomial(&self) -> bool {
        self.image.is_exact() && self.image.nonzero_terms().count() == 1
    }

    /// `sigma(f)`. The output window ends at `q h` when `f` has a bounded
    /// tail, and at `m h` (with `t^m` the lowest term of `t^sigma`) otherwise.
    pub fn apply(&self, f: &TruncLaurent) -> Result<TruncLaurent> {
        let ctx = self.ctx().clone();
        let q = self.q() as i64;
        let m1 = if self.is_zero_centered() { self.lowest_exponent() } else { 0 };
        let t_img = &self.image;
        let hi_out = match f.hi() {
            Some(h) => {
                let reach = if f.tail_bound().is_some() { q * h } else { m1 * h };
                min_opt(Some(reach), t_img.hi())
            }
            None if f.lo() < 0 && !self.is_monomial() => {
                min_opt(Some(q * f.top().max(1) + DEFAULT_EXPANSION), t_img.hi())
            }
            None => t_img.hi(),
        };
        if hi_out.is_some_and(|h| h <= f.lo().min(0) * q) {
            return Err(Error::WindowCollapse);
        }
        let work = hi_out.unwrap_or(i64::MAX / 8);
        let mut total = TruncLaurent::zero(&ctx, RingTag::Gamma);
        if f.top() > 0 {
            let mut acc = TruncLaurent::zero(&ctx, RingTag::Omega);
            for n in (0..f.top()).rev() {
                if acc.terms().any(|(_, c)| !c.is_exact_zero()) {
                    acc = acc.mul(t_img)?.part_below(work);
                }
                let c = f.coeff(n).expect("stored").frobenius(1);
                acc = acc.add(&TruncLaurent::constant(c, RingTag::Omega));
            }
            total = total.add(&acc.with_tag(RingTag::Gamma)?);
        }
        if f.lo() < 0 {
            let tinv = if self.is_monomial() {
                let (e, c) = t_img.nonzero_terms().next().expect("monomial");
                TruncLaurent::monomial(c.inv()?, -e, RingTag::Gamma)
            } else {
                t_img.clone().with_tag(RingTag::Gamma)?.invert_within(work)?
            };
            let mut acc = TruncLaurent::zero(&ctx, RingTag::Gamma);
            for n in f.lo()..0 {
                let c = f.coeff(n).expect("stored").frobenius(1);
                acc = acc.add(&TruncLaurent::constant(c, RingTag::Gamma)).mul(&tinv)?;
            }
            total = total.add(&acc);
        }
        let mut out = match hi_out {
            Some(h) => total.with_hi(Some(h)).map_err(|_| Error::WindowCollapse)?,
            None => total,
        };
        if let (Some(h), Some(tb)) = (f.hi(), f.tail_bound()) {
            // unknown c_n T^n (n >= h) reach t^e with valuation >= h - floor(e/q)
            let exact_below = if m1 >= 1 && h > 0 { m1 * h } else { i64::MIN };
            let caps: Vec<(i64, WittScalar)> = out
                .terms()
                .filter(|(e, _)| *e >= exact_below)
                .map(|(e, c)| (e, c.with_abs_prec(tb.saturating_add(h - e.div_euclid(q)))))
                .collect();
            for (e, c) in caps {
                out = out.replace_coeff(e, c);
            }
        }
        out.with_tag(f.tag()).map_err(|_| Error::WindowCollapse)
    }

    /// `sigma^e(f)` by repeated application.
    pub fn apply_iter(&self, f: &TruncLaurent, e: u32) -> Result<TruncLaurent> {
        let mut out = f.clone();
        for _ in 0..e {
            out = self.apply(&out)?;
            if out.hi().is_some_and(|h| h <= out.lo()) {
                return Err(Error::WindowCollapse);
            }
        }
        Ok(out)
    }

    /// Evaluate `T(x)` at a scalar `x` in `pW`.
    pub fn eval_scalar(&self, x: &WittScalar) -> WittScalar {
        let mut acc = WittScalar::zero(self.ctx());
        for e in (0..self.image.top()).rev() {
            acc = acc.mul(x).add(&self.image.coeff(e).expect("stored"));
        }
        match (self.image.hi(), self.image.tail_bound()) {
            (Some(m), Some(tb)) => acc.with_abs_prec(tb.saturating_add(m.saturating_mul(x.valuation().max(0)))),
            _ => acc,
        }
    }
}

/// `f^{sigma^e}`.
pub fn lift_apply(sigma: &FrobeniusLift, f: &TruncLaurent, e: u32) -> Result<TruncLaurent> {
    if e == 0 {
        return Err(Error::InvalidParameter("lift_apply needs e >= 1".into()));
    }
    sigma.apply_iter(f, e)
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// `f(t + c)` for a power series `f` and `c` in `pW`.
pub fn taylor_shift(f: &TruncLaurent, c: &WittScalar) -> Result<TruncLaurent> {
    let ctx = f.ctx().clone();
    if f.lo() < 0 {
        return Err(Error::InvalidParameter("taylor_shift needs a power series".into()));
    }
    let lin = TruncLaurent::new(&ctx, 0, vec![c.clone(), WittScalar::one(&ctx)], None, RingTag::Omega)?;
    let mut acc = TruncLaurent::zero(&ctx, RingTag::Omega);
    for n in (0..f.top()).rev() {
        acc = acc.mul(&lin)?.add(&TruncLaurent::constant(f.coeff(n).expect("stored"), RingTag::Omega));
    }
    match f.hi() {
        None => Ok(acc),
        Some(m) => {
            let tb = f.tail_bound().unwrap_or(0);
            let vc = c.valuation();
            let mut out = acc.with_hi(Some(m))?;
            for e in 0..m {
                let cur = out.coeff(e).expect("inside window");
                out = out.replace_coeff(e, cur.with_abs_prec(tb.saturating_add((m - e).saturating_mul(vc))));
            }
            Ok(out)
        }
    }
}

/// Conjugate `sigma` to a zero-centered lift: returns the fixed point `c`
/// of `x -> sigma^{-1}(T(x))` and `sigma'` with `t^{sigma'} = T(t + c) -
/// sigma(c)`, so that `sigma'(f(t + c)) = (sigma f)(t + c)`.
pub fn zero_center(sigma: &FrobeniusLift) -> Result<(WittScalar, FrobeniusLift)> {
    let ctx = sigma.ctx().clone();
    if sigma.is_zero_centered() {
        return Ok((WittScalar::zero(&ctx), sigma.clone()));
    }
    let mut x = WittScalar::zero(&ctx);
    for _ in 0..(2 * ctx.n() + 4) {
        let next = sigma.eval_scalar(&x).frobenius(-1);
        if next == x {
            break;
        }
        x = next;
    }
    let shifted = taylor_shift(sigma.image(), &x)?;
    let sc = x.frobenius(1);
    let mut image = shifted.sub(&TruncLaurent::constant(sc, RingTag::Omega));
    image = image.replace_coeff(0, WittScalar::zero(&ctx));
    Ok((x, FrobeniusLift::new(image)?))
}

#[cfg(test)]
mod tests;
