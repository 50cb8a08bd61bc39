use super::{RingTag, TruncLaurent, DEFAULT_EXPANSION};
use crate::error::{Error, Result};
use crate::scalar::WittScalar;

/// `f = c * t^n * u * b` with `u` a principal unit of `Omega` and
/// `b = 1 + (terms of negative degree with positive valuation)`.
#[derive(Clone, Debug)]
pub struct CanonicalFactor {
    pub c: WittScalar,
    pub n: i64,
    pub u: TruncLaurent,
    pub b: TruncLaurent,
}

impl CanonicalFactor {
    /// Product `c t^n u b`.
    pub fn product(&self) -> Result<TruncLaurent> {
        self.u.mul(&self.b).map(|x| x.scale(&self.c).shift(self.n))
    }
}

/// Factor a unit of `Gamma` as `c t^n u b`.
pub fn laurent_canonical_factor(f: &TruncLaurent) -> Result<CanonicalFactor> {
    let ctx = f.ctx().clone();
    let (n, _) = f.dominant_term().ok_or_else(|| Error::NotUnit("zero series".into()))?;
    let c = f.coeff(n).expect("dominant term lies in the window");
    let g = f.scale(&c.inv()?).shift(-n).with_tag(RingTag::Gamma)?;
    let width = match g.hi() {
        Some(h) => h,
        None => g.top().max(1) + DEFAULT_EXPANSION,
    };
    let depth = (-g.lo()).max(0);
    let one = TruncLaurent::one(&ctx, RingTag::Omega);
    let mut u = one.clone();
    let mut b = g.clone();
    let max_iter = 4 * ctx.n() as usize + 8;
    for _ in 0..max_iter {
        let uinv = u.invert_within(width)?.padded(width + depth)?;
        b = g.mul(&uinv)?;
        let b_pos = b.part_from(0);
        if b_pos.sub(&one).is_zero() {
            break;
        }
        u = u.mul(&b_pos.with_tag(RingTag::Omega)?)?;
        if u.hi().is_none() {
            continue;
        }
        u = u.truncate(width)?;
    }
    let u0 = u.constant_term();
    let (c, u) = if u0.congruent(&WittScalar::one(&ctx)) {
        (c, u)
    } else {
        (c.mul(&u0), u.scale(&u0.inv()?))
    };
    Ok(CanonicalFactor { c, n, u, b })
}
