//! Laurent series over `W[1/p]` on a finite exponent window.
//!
//! A series stores the coefficients of `t^lo, ..., t^{hi-1}`. Coefficients
//! below `lo` vanish; coefficients at or above `hi` are unknown. A series
//! with `hi = None` is an exact Laurent polynomial. Each coefficient carries
//! its own p-adic precision.

mod factor;
mod json;
mod newton;
mod poly;

use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{PrimeContext, WittScalar, INF};

pub use factor::{laurent_canonical_factor, CanonicalFactor};
pub use json::{ScalarDoc, SeriesDoc};
pub use newton::{gauss_valuation, newton_polygon, GaussValue, NewtonPolygon};
pub use poly::{annulus_split, weierstrass_prepare};

pub type Q = Ratio<i64>;

/// Working width used when an exact series has to be expanded into an
/// infinite one (inverses and similar).
pub const DEFAULT_EXPANSION: i64 = 32;

/// The ambient ring a series is declared to live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingTag {
    Omega,
    Gamma,
    Rplus,
    Robba,
}

impl RingTag {
    /// Least common ring in the lattice `Omega < {Gamma, Rplus} < Robba`.
    pub fn join(self, other: Self) -> Self {
        use RingTag::*;
        match (self, other) {
            (a, b) if a == b => a,
            (Omega, b) => b,
            (a, Omega) => a,
            _ => Robba,
        }
    }

    fn allows_negative(self) -> bool {
        matches!(self, RingTag::Gamma | RingTag::Robba)
    }
}

#[derive(Clone, Debug)]
pub struct TruncLaurent {
    ctx: Arc<PrimeContext>,
    lo: i64,
    hi: Option<i64>,
    coeffs: Vec<WittScalar>,
    tag: RingTag,
    radius: Option<Q>,
}

impl PartialEq for TruncLaurent {
    fn eq(&self, other: &Self) -> bool {
        self.lo == other.lo && self.hi == other.hi && self.tag == other.tag && self.coeffs == other.coeffs
    }
}

impl TruncLaurent {
    /// Series with coefficients `coeffs[i]` at `t^{lo+i}`. With `hi` given
    /// the vector is padded with exact zeros (or truncated) to `hi - lo`.
    pub fn new(
        ctx: &Arc<PrimeContext>,
        lo: i64,
        mut coeffs: Vec<WittScalar>,
        hi: Option<i64>,
        tag: RingTag,
    ) -> Result<Self> {
        if let Some(h) = hi {
            if h <= lo {
                return Err(Error::EmptyWindow);
            }
            coeffs.resize((h - lo) as usize, WittScalar::zero(ctx));
        }
        let s = Self { ctx: ctx.clone(), lo, hi, coeffs, tag, radius: None }.normalized();
        if s.tag == RingTag::Omega && s.lo < 0 {
            return Err(Error::InvalidParameter("an Omega series has no negative exponents".into()));
        }
        Ok(s)
    }

    /// Series from integer coefficients (exact integers in `W`).
    pub fn from_ints(ctx: &Arc<PrimeContext>, lo: i64, coeffs: &[i64], hi: Option<i64>, tag: RingTag) -> Result<Self> {
        let c = coeffs.iter().map(|&c| WittScalar::from_int(ctx, c)).collect();
        Self::new(ctx, lo, c, hi, tag)
    }

    pub fn zero(ctx: &Arc<PrimeContext>, tag: RingTag) -> Self {
        Self { ctx: ctx.clone(), lo: 0, hi: None, coeffs: Vec::new(), tag, radius: None }
    }

    pub fn constant(c: WittScalar, tag: RingTag) -> Self {
        Self::monomial(c, 0, tag)
    }

    pub fn one(ctx: &Arc<PrimeContext>, tag: RingTag) -> Self {
        Self::constant(WittScalar::one(ctx), tag)
    }

    /// `c * t^e`.
    pub fn monomial(c: WittScalar, e: i64, tag: RingTag) -> Self {
        let ctx = c.ctx().clone();
        let tag = if e < 0 && !tag.allows_negative() { RingTag::Gamma } else { tag };
        Self { ctx, lo: e, hi: None, coeffs: vec![c], tag, radius: None }.normalized()
    }

    pub fn ctx(&self) -> &Arc<PrimeContext> {
        &self.ctx
    }
    pub fn lo(&self) -> i64 {
        self.lo
    }
    pub fn hi(&self) -> Option<i64> {
        self.hi
    }
    pub fn tag(&self) -> RingTag {
        self.tag
    }
    pub fn radius(&self) -> Option<Q> {
        self.radius
    }
    pub fn is_exact(&self) -> bool {
        self.hi.is_none()
    }

    /// One past the last stored exponent.
    pub fn top(&self) -> i64 {
        self.lo + self.coeffs.len() as i64
    }

    pub fn with_radius(mut self, r: Option<Q>) -> Self {
        self.radius = r;
        self
    }

    pub fn with_tag(mut self, tag: RingTag) -> Result<Self> {
        if tag == RingTag::Omega && self.lo < 0 && self.coeffs.iter().any(|c| !c.is_exact_zero()) {
            return Err(Error::InvalidParameter("an Omega series has no negative exponents".into()));
        }
        self.tag = tag;
        Ok(self.normalized())
    }

    /// Drop exact zeros at both ends of an exact series and at the bottom of
    /// a windowed one.
    fn normalized(mut self) -> Self {
        if matches!(self.tag, RingTag::Omega | RingTag::Gamma) {
            // integral rings live modulo p^N
            let n = self.ctx.n() as i64;
            for c in self.coeffs.iter_mut() {
                if !c.is_exact_zero() && c.abs_prec() > n {
                    *c = c.with_abs_prec(n);
                }
            }
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_exact_zero()).count();
        if lead == self.coeffs.len() {
            if self.hi.is_none() {
                self.coeffs.clear();
                self.lo = self.lo.max(0);
                return self;
            }
            if self.tag == RingTag::Omega && self.lo < 0 {
                let cut = (-self.lo) as usize;
                self.coeffs.drain(..cut.min(self.coeffs.len()));
                self.lo = 0;
            }
            return self;
        }
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i64;
        }
        if self.hi.is_none() {
            while self.coeffs.last().is_some_and(|c| c.is_exact_zero()) {
                self.coeffs.pop();
            }
        }
        self
    }

    /// Coefficient of `t^e`: exact zero below the window, `None` when unknown.
    pub fn coeff(&self, e: i64) -> Option<WittScalar> {
        if let Some(h) = self.hi {
            if e >= h {
                return None;
            }
        }
        if e < self.lo || e >= self.top() {
            return Some(WittScalar::zero(&self.ctx));
        }
        Some(self.coeffs[(e - self.lo) as usize].clone())
    }

    /// Stored coefficients with their exponents.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &WittScalar)> {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.lo + i as i64, c))
    }

    /// Stored coefficients that are nonzero at their precision.
    pub fn nonzero_terms(&self) -> impl Iterator<Item = (i64, &WittScalar)> {
        self.terms().filter(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Smallest exponent with a nonzero coefficient together with the
    /// minimal valuation over the window, attained first at `exponent`.
    pub fn dominant_term(&self) -> Option<(i64, i64)> {
        let mut best: Option<(i64, i64)> = None;
        for (e, c) in self.nonzero_terms() {
            let v = c.valuation();
            if best.is_none_or(|(_, bv)| v < bv) {
                best = Some((e, v));
            }
        }
        best
    }

    /// Lower bound on the valuation of the unknown coefficients beyond `hi`.
    /// Integral-type rings bound their tail by the minimal valuation of the
    /// window; analytic rings leave it unbounded.
    pub fn tail_bound(&self) -> Option<i64> {
        if self.hi.is_none() {
            return Some(INF);
        }
        match self.tag {
            RingTag::Omega | RingTag::Gamma => {
                Some(self.dominant_term().map_or_else(|| self.min_abs_prec(), |(_, v)| v))
            }
            _ => None,
        }
    }

    /// Smallest absolute precision over the stored coefficients.
    pub fn min_abs_prec(&self) -> i64 {
        self.coeffs.iter().map(|c| c.abs_prec()).min().unwrap_or(INF)
    }

    /// Extend the window to `new_hi`, filling unknown coefficients with zeros
    /// at the tail bound.
    pub fn padded(&self, new_hi: i64) -> Result<Self> {
        let Some(h) = self.hi else {
            let mut out = self.clone();
            out.hi = Some(new_hi.max(self.lo + 1));
            out.coeffs.resize((out.hi.unwrap() - out.lo) as usize, WittScalar::zero(&self.ctx));
            out.coeffs.truncate((new_hi - out.lo).max(1) as usize);
            return Ok(out);
        };
        if new_hi <= h {
            return self.truncate(new_hi);
        }
        let tb = self.tail_bound().ok_or_else(|| Error::InvalidParameter("series tail is unbounded".into()))?;
        let mut out = self.clone();
        out.coeffs.resize((new_hi - self.lo) as usize, WittScalar::zero_mod(&self.ctx, tb));
        out.hi = Some(new_hi);
        Ok(out)
    }

    /// Forget every coefficient at exponent `>= hi`.
    pub fn truncate(&self, hi: i64) -> Result<Self> {
        let hi = self.hi.map_or(hi, |h| h.min(hi));
        if hi <= self.lo {
            return Err(Error::EmptyWindow);
        }
        let mut out = self.clone();
        out.coeffs.resize((hi - self.lo) as usize, WittScalar::zero(&self.ctx));
        out.hi = Some(hi);
        Ok(out)
    }

    /// Truncate to `hi` without failing on empty windows (returns the exact
    /// zero series of the same tag).
    pub fn truncate_or_empty(&self, hi: i64) -> Option<Self> {
        self.truncate(hi).ok()
    }

    /// Restrict the stored window to exponents `>= lo` (dropping the rest),
    /// used to take positive parts.
    pub fn part_from(&self, lo: i64) -> Self {
        let mut out = self.clone();
        if lo > out.lo {
            let cut = ((lo - out.lo) as usize).min(out.coeffs.len());
            out.coeffs.drain(..cut);
            out.lo = lo;
            debug_assert!(out.hi.is_none_or(|h| h > lo));
        }
        out.normalized()
    }

    /// Part with exponents `< hi`, as an exact series.
    pub fn part_below(&self, hi: i64) -> Self {
        let mut out = self.clone();
        let keep = (hi - out.lo).clamp(0, out.coeffs.len() as i64) as usize;
        out.coeffs.truncate(keep);
        out.hi = None;
        out.normalized()
    }

    /// Cap every coefficient at absolute precision `abs`.
    pub fn cap_precision(&self, abs: i64) -> Self {
        self.map(|c| c.with_abs_prec(abs))
    }

    pub fn map(&self, f: impl Fn(&WittScalar) -> WittScalar) -> Self {
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().map(f).collect();
        out.normalized()
    }

    /// Apply `sigma^e` to each coefficient (not to `t`).
    pub fn frobenius_coeffs(&self, e: i64) -> Self {
        self.map(|c| c.frobenius(e))
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, c: &WittScalar) -> Self {
        if c.is_exact_zero() {
            return Self::zero(&self.ctx, self.tag);
        }
        self.map(|x| x.mul(c))
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = self.clone();
        out.lo += k;
        out.hi = out.hi.map(|h| h + k);
        if out.lo < 0 && !out.tag.allows_negative() {
            out.tag = RingTag::Gamma;
        }
        out
    }

    fn joint_hi(a: Option<i64>, b: Option<i64>) -> Option<i64> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let lo = self.lo.min(other.lo);
        let hi = Self::joint_hi(self.hi, other.hi);
        let end = hi.unwrap_or_else(|| self.top().max(other.top())).max(lo);
        let coeffs = (lo..end)
            .map(|e| {
                let x = self.coeff(e).unwrap_or_else(|| WittScalar::zero(&self.ctx));
                let y = other.coeff(e).unwrap_or_else(|| WittScalar::zero(&self.ctx));
                x.add(&y)
            })
            .collect();
        let tag = self.tag.join(other.tag);
        let radius = min_opt(self.radius, other.radius);
        Self { ctx: self.ctx.clone(), lo, hi, coeffs, tag, radius }.normalized()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product on the window `[lo_f+lo_g, min(lo_f+hi_g, lo_g+hi_f))`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let lo = self.lo + other.lo;
        let hi = Self::joint_hi(self.hi.map(|h| h + other.lo), other.hi.map(|h| h + self.lo));
        if let Some(h) = hi {
            if h <= lo {
                return Err(Error::EmptyWindow);
            }
        }
        let tag = self.tag.join(other.tag);
        let radius = min_opt(self.radius, other.radius);
        let len = match hi {
            Some(h) => (h - lo) as usize,
            None => (self.coeffs.len() + other.coeffs.len()).saturating_sub(1),
        };
        let coeffs = convolve(&self.ctx, &self.coeffs, &other.coeffs, len);
        Ok(Self { ctx: self.ctx.clone(), lo, hi, coeffs, tag, radius }.normalized())
    }

    /// Product truncated to exponents below `hi` (the cheap path when only
    /// a prefix is needed).
    pub fn mul_trunc(&self, other: &Self, hi: i64) -> Result<Self> {
        let a = self.limit(hi - other.lo);
        let b = other.limit(hi - self.lo);
        a.mul(&b)?.truncate(hi)
    }

    /// Drop stored coefficients at exponents `>= hi`, keeping the window.
    fn limit(&self, hi: i64) -> Self {
        if hi >= self.top() || hi <= self.lo {
            return self.clone();
        }
        let mut out = self.clone();
        out.coeffs.truncate((hi - self.lo) as usize);
        out.hi = Some(self.hi.map_or(hi, |h| h.min(hi)));
        out
    }

    pub fn pow(&self, e: u64) -> Result<Self> {
        let mut r = Self::one(&self.ctx, self.tag);
        for _ in 0..e {
            r = r.mul(self)?;
        }
        Ok(r)
    }

    /// Congruence on the common window at the joint precision.
    pub fn congruent(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Value at `t = 0` of a power series.
    pub fn constant_term(&self) -> WittScalar {
        self.coeff(0).unwrap_or_else(|| WittScalar::zero(&self.ctx))
    }

    /// Inverse by geometric expansion around the dominant monomial.
    pub fn invert(&self) -> Result<Self> {
        let hi = match self.hi {
            Some(h) => h,
            None => {
                let (n0, _) = self.dominant_term().ok_or(Error::NotUnit("zero series".into()))?;
                self.top().max(n0 + 1) + DEFAULT_EXPANSION
            }
        };
        self.invert_within(hi)
    }

    /// Inverse computed on the window ending at `hi - 2 n0` (for exact
    /// inputs, `hi` is the working window of the input).
    pub fn invert_within(&self, hi: i64) -> Result<Self> {
        let (n0, _) = self.dominant_term().ok_or_else(|| Error::NotUnit("no nonzero coefficient".into()))?;
        if matches!(self.tag, RingTag::Omega | RingTag::Rplus) && (n0 != 0 || self.lo < 0) {
            return Err(Error::NotUnit(format!("dominant term at t^{n0} is not the constant term")));
        }
        let c = self.coeffs[(n0 - self.lo) as usize].clone();
        let cinv = c.inv()?;
        let exact_input = self.hi.is_none();
        let base = if exact_input { self.clone() } else { self.truncate(hi)? };
        // eps = f / (c t^n0) - 1
        let mut eps = base.scale(&cinv).shift(-n0);
        let one = WittScalar::one(&self.ctx);
        let idx = (0 - eps.lo) as usize;
        eps.coeffs[idx] = eps.coeffs[idx].sub(&one);
        let eps = eps.normalized();
        let hi_eps = if exact_input { hi - n0 } else { eps.hi.unwrap() };
        let floor = self.ctx.n() as i64;
        let neg_depth = (-eps.lo).max(0);
        let neg_val = eps.terms().filter(|(e, c)| *e < 0 && !c.is_zero()).map(|(_, c)| c.valuation()).min();
        let minus_eps = eps.neg().part_below(hi_eps);
        let mut term = Self::one(&self.ctx, RingTag::Gamma);
        let mut acc = Self::one(&self.ctx, RingTag::Gamma);
        let limit = (hi_eps.max(1) + floor * (neg_depth + 1) + 4) as usize;
        for _ in 0..limit {
            term = term.mul(&minus_eps)?.part_below(hi_eps);
            term = term.drop_small(floor);
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        let mut acc = acc.part_below(hi_eps).cap_precision(floor);
        acc.hi = Some(hi_eps);
        acc.coeffs.resize((hi_eps - acc.lo).max(0) as usize, WittScalar::zero(&self.ctx));
        if acc.coeffs.is_empty() {
            return Err(Error::EmptyWindow);
        }
        if !exact_input {
            // unknown eps coefficients reach exponent e through negative factors
            if let Some(nv) = neg_val {
                let lo = acc.lo;
                for (i, c) in acc.coeffs.iter_mut().enumerate() {
                    let e = lo + i as i64;
                    let steps = (hi_eps - e + neg_depth - 1) / neg_depth.max(1);
                    *c = c.with_abs_prec(steps * nv);
                }
            }
        }
        acc.tag = if self.tag == RingTag::Omega { RingTag::Omega } else { self.tag.join(RingTag::Gamma) };
        if self.tag == RingTag::Rplus {
            acc.tag = RingTag::Rplus;
        }
        acc.radius = self.radius;
        Ok(acc.scale(&cinv).shift(-n0).normalized())
    }

    /// Drop coefficients whose valuation is at least `floor`.
    fn drop_small(&self, floor: i64) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            if c.valuation() >= floor {
                *c = WittScalar::zero(&self.ctx);
            }
        }
        out.normalized()
    }

    /// Replace the coefficient at `e`, extending the stored range if needed.
    pub fn replace_coeff(&self, e: i64, c: WittScalar) -> Self {
        let mut out = self.clone();
        if e < out.lo {
            let pad = (out.lo - e) as usize;
            out.coeffs.splice(0..0, std::iter::repeat_n(WittScalar::zero(&self.ctx), pad));
            out.lo = e;
        }
        let idx = (e - out.lo) as usize;
        if idx >= out.coeffs.len() {
            out.coeffs.resize(idx + 1, WittScalar::zero(&self.ctx));
        }
        out.coeffs[idx] = c;
        out.normalized()
    }

    /// Relabel the window end of an exact series (used by callers that know
    /// the series continues with unknown terms).
    pub fn with_hi(&self, hi: Option<i64>) -> Result<Self> {
        match hi {
            Some(h) => {
                let mut out = self.clone();
                if h <= out.lo {
                    return Err(Error::EmptyWindow);
                }
                out.coeffs.resize((h - out.lo) as usize, WittScalar::zero(&self.ctx));
                out.hi = Some(h);
                Ok(out)
            }
            None => {
                let mut out = self.clone();
                out.hi = None;
                Ok(out.normalized())
            }
        }
    }
}

fn min_opt(a: Option<Q>, b: Option<Q>) -> Option<Q> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        _ => None,
    }
}

/// First `len` coefficients of the product of two coefficient vectors.
pub(crate) fn convolve(ctx: &Arc<PrimeContext>, a: &[WittScalar], b: &[WittScalar], len: usize) -> Vec<WittScalar> {
    let mut out = vec![WittScalar::zero(ctx); len];
    let bnz: Vec<(usize, &WittScalar)> = b.iter().enumerate().filter(|(_, c)| !c.is_exact_zero()).collect();
    for (i, x) in a.iter().enumerate() {
        if i >= len {
            break;
        }
        if x.is_exact_zero() {
            continue;
        }
        for &(j, y) in &bnz {
            let k = i + j;
            if k >= len {
                break;
            }
            out[k] = out[k].add(&x.mul(y));
        }
    }
    out
}

#[cfg(test)]
mod tests;
