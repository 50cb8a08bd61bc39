//! Polynomial factorizations: Weierstrass preparation and Newton-polygon
//! splitting by Hensel lifting.

use std::sync::Arc;

use super::newton::NewtonPolygon;
use super::{newton_polygon, RingTag, TruncLaurent, Q};
use crate::error::{Error, Result};
use crate::linalg::ScalarMatrix;
use crate::scalar::{PrimeContext, WittScalar};

type Poly = Vec<WittScalar>;

fn zero(ctx: &Arc<PrimeContext>) -> WittScalar {
    WittScalar::zero(ctx)
}

fn at(a: &[WittScalar], i: usize, ctx: &Arc<PrimeContext>) -> WittScalar {
    a.get(i).cloned().unwrap_or_else(|| zero(ctx))
}

pub(crate) fn padd(ctx: &Arc<PrimeContext>, a: &[WittScalar], b: &[WittScalar]) -> Poly {
    (0..a.len().max(b.len())).map(|i| at(a, i, ctx).add(&at(b, i, ctx))).collect()
}

pub(crate) fn psub(ctx: &Arc<PrimeContext>, a: &[WittScalar], b: &[WittScalar]) -> Poly {
    (0..a.len().max(b.len())).map(|i| at(a, i, ctx).sub(&at(b, i, ctx))).collect()
}

pub(crate) fn pmul(ctx: &Arc<PrimeContext>, a: &[WittScalar], b: &[WittScalar]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    super::convolve(ctx, a, b, a.len() + b.len() - 1)
}

/// Division by a polynomial whose leading coefficient is invertible.
pub(crate) fn pdivrem(ctx: &Arc<PrimeContext>, a: &[WittScalar], b: &[WittScalar]) -> Result<(Poly, Poly)> {
    let db = b.len() - 1;
    let lead_inv = b[db].inv()?;
    let mut r = a.to_vec();
    if r.len() <= db {
        return Ok((Vec::new(), r));
    }
    let mut q = vec![zero(ctx); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].mul(&lead_inv);
        for (i, bc) in b.iter().enumerate() {
            r[k + i] = r[k + i].sub(&c.mul(bc));
        }
        r[k + db] = zero(ctx).with_abs_prec(r[k + db].abs_prec());
        q[k] = c;
    }
    r.truncate(db);
    Ok((q, r))
}

fn trim(mut a: Poly) -> Poly {
    while a.last().is_some_and(|c| c.is_exact_zero()) {
        a.pop();
    }
    a
}

fn to_series(ctx: &Arc<PrimeContext>, a: Poly) -> TruncLaurent {
    TruncLaurent::new(ctx, 0, a, None, RingTag::Omega).expect("polynomial")
}

/// Coefficients of an exact power series as a dense vector.
fn dense(f: &TruncLaurent, len: usize) -> Poly {
    (0..len as i64).map(|e| f.coeff(e).unwrap_or_else(|| WittScalar::zero(f.ctx()))).collect()
}

/// Power-series inverse modulo `t^len` of a series with unit constant term.
fn series_inverse(ctx: &Arc<PrimeContext>, a: &[WittScalar], len: usize) -> Result<Poly> {
    let a0inv = a[0].inv()?;
    let mut out = vec![zero(ctx); len];
    for k in 0..len {
        let mut acc = if k == 0 { WittScalar::one(ctx) } else { zero(ctx) };
        for j in 1..=k.min(a.len().saturating_sub(1)) {
            acc = acc.sub(&a[j].mul(&out[k - j]));
        }
        out[k] = acc.mul(&a0inv);
    }
    Ok(out)
}

/// Weierstrass preparation `f = P * u` in `Omega`: `P` monic of degree
/// `d` congruent to `t^d` mod p, `u` a unit.
pub fn weierstrass_prepare(f: &TruncLaurent) -> Result<(TruncLaurent, TruncLaurent)> {
    let ctx = f.ctx().clone();
    if f.lo() < 0 && f.terms().any(|(e, c)| e < 0 && !c.is_zero()) {
        return Err(Error::InvalidParameter("weierstrass_prepare needs a power series".into()));
    }
    let d = f
        .nonzero_terms()
        .find(|(_, c)| c.valuation() <= 0)
        .ok_or(Error::NotPrepared)?;
    if d.1.valuation() < 0 {
        return Err(Error::NotPrepared);
    }
    let d = d.0 as usize;
    let n = ctx.n() as usize;
    let len = match f.hi() {
        Some(h) => h as usize,
        None => (f.top().max(0) as usize).max(d + 1) + d * (n + 2) + 1,
    };
    let fv = dense(f, len);
    let f_lo: Poly = fv[..d].to_vec();
    let f_hi: Poly = fv[d..].to_vec();
    let lq = len - d;
    let fhi_inv = series_inverse(&ctx, &f_hi, lq)?;
    let one = WittScalar::one(&ctx);
    let mut q = fhi_inv.clone();
    for _ in 0..(4 * n + 16) {
        // alpha(q f_lo)_j = sum_i f_i q_{j+d-i}; beyond lq q is unknown integral
        let mut shifted = vec![zero(&ctx); lq];
        for (j, slot) in shifted.iter_mut().enumerate() {
            let mut acc = zero(&ctx);
            for (i, fi) in f_lo.iter().enumerate() {
                let idx = j + d - i;
                let term = if idx < lq { fi.mul(&q[idx]) } else { zero(&ctx).with_abs_prec(fi.valuation()) };
                acc = acc.add(&term);
            }
            *slot = acc;
        }
        let mut rhs: Poly = shifted.iter().map(|x| x.neg()).collect();
        rhs[0] = rhs[0].add(&one);
        let next = super::convolve(&ctx, &fhi_inv, &rhs, lq);
        if next == q {
            break;
        }
        q = next;
    }
    // P = t^d + (q f_lo)_{<d}
    let qf = pmul(&ctx, &q, &f_lo);
    let mut p_coeffs: Poly = (0..d).map(|i| at(&qf, i, &ctx)).collect();
    p_coeffs.push(one.clone());
    let p_series = to_series(&ctx, p_coeffs.clone());
    let unit = if f.is_exact() {
        let (u, r) = pdivrem(&ctx, &trim(fv), &p_coeffs)?;
        if r.iter().any(|c| !c.is_zero()) {
            return Err(Error::PrecisionLoss("division by the distinguished polynomial left a remainder".into()));
        }
        to_series(&ctx, trim(u))
    } else {
        let u = series_inverse(&ctx, &q, lq)?;
        TruncLaurent::new(&ctx, 0, u, Some(lq as i64), RingTag::Omega)?
    };
    Ok((p_series, unit))
}

/// Exact polynomial coefficients of an exact power series.
fn exact_poly(f: &TruncLaurent) -> Result<Poly> {
    if !f.is_exact() || f.lo() < 0 {
        return Err(Error::InvalidParameter("expected an exact polynomial".into()));
    }
    Ok(trim(dense(f, f.top().max(0) as usize)))
}

/// Split `f = A * B` with `A` monic carrying the roots of valuation
/// `> gamma` (including the roots at 0) and `B` the rest.
fn split_at(ctx: &Arc<PrimeContext>, f: &[WittScalar], np: &NewtonPolygon, gamma: Q) -> Result<(Poly, Poly)> {
    let low = np.vertices[0].0 as usize;
    let k = low + np.roots_above(gamma) as usize;
    let deg = f.len() - 1;
    let one = vec![WittScalar::one(ctx)];
    if k == 0 {
        return Ok((one, f.to_vec()));
    }
    if k == deg {
        let inv = f[deg].inv()?;
        return Ok((f.iter().map(|c| c.mul(&inv)).collect(), vec![f[deg].clone()]));
    }
    let fk_inv = f[k].inv()?;
    let mut a: Poly = f[..=k].iter().map(|c| c.mul(&fk_inv)).collect();
    a[k] = WittScalar::one(ctx);
    let mut b: Poly = f[k..].to_vec();
    let mut e = psub(ctx, f, &pmul(ctx, &a, &b));
    let db = deg - k;
    for iter in 0..96 {
        if e.iter().all(|c| c.is_zero()) {
            return Ok((a, b));
        }
        // S with S*B + T*A = 1, deg S < k, deg T < db
        let size = k + db;
        let mut sylv = ScalarMatrix::zeros(ctx, size, size);
        for j in 0..k {
            for (i, c) in b.iter().enumerate() {
                if i + j < size {
                    sylv.set(i + j, j, c.clone());
                }
            }
        }
        for j in 0..db {
            for (i, c) in a.iter().enumerate() {
                if i + j < size {
                    sylv.set(i + j, k + j, c.clone());
                }
            }
        }
        if iter == 0 {
            let res = sylv.det();
            if res.is_zero() || res.valuation() >= ctx.n() as i64 {
                return Err(Error::PrecisionLoss(format!(
                    "factors not separated at working precision (v(Res) >= {})",
                    res.valuation()
                )));
            }
        }
        let mut rhs = vec![zero(ctx); size];
        rhs[0] = WittScalar::one(ctx);
        let sol = sylv.solve(&rhs)?;
        let s: Poly = sol[..k].to_vec();
        let (_, da) = pdivrem(ctx, &pmul(ctx, &s, &e), &a)?;
        let (db_poly, rem) = pdivrem(ctx, &psub(ctx, &e, &pmul(ctx, &da, &b)), &a)?;
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::PrecisionLoss("Hensel correction is not exact".into()));
        }
        a = padd(ctx, &a, &da);
        a[k] = WittScalar::one(ctx);
        b = padd(ctx, &b, &db_poly);
        b.truncate(db + 1);
        e = psub(ctx, f, &pmul(ctx, &a, &b));
    }
    Err(Error::PrecisionLoss("Hensel iteration did not converge".into()))
}

/// Factor a polynomial `f = g * h` where `g` (monic) carries exactly the
/// roots with valuation in `(alpha, beta]`.
pub fn annulus_split(f: &TruncLaurent, alpha: Q, beta: Q) -> Result<(TruncLaurent, TruncLaurent)> {
    let ctx = f.ctx().clone();
    if alpha >= beta {
        return Err(Error::InvalidParameter("empty valuation interval".into()));
    }
    let fv = exact_poly(f)?;
    let np = newton_polygon(f)?;
    let inside: u64 = np.root_valuations().iter().filter(|(v, _)| *v > alpha && *v <= beta).map(|(_, m)| m).sum();
    if inside == 0 {
        return Err(Error::NoSplit("no root valuation lies in the interval".into()));
    }
    let (above, rest) = split_at(&ctx, &fv, &np, beta)?;
    let rest_np = newton_polygon(&to_series(&ctx, rest.clone()))?;
    let (g, below) = split_at(&ctx, &rest, &rest_np, alpha)?;
    let h = pmul(&ctx, &above, &below);
    let (g, h) = normalize_pair(&ctx, g, h);
    Ok((to_series(&ctx, trim(g)), to_series(&ctx, trim(h))))
}

/// Move the leading coefficient of `g` into `h` so that `g` is monic.
fn normalize_pair(ctx: &Arc<PrimeContext>, g: Poly, h: Poly) -> (Poly, Poly) {
    let g = trim(g);
    let lead = g.last().cloned().unwrap_or_else(|| WittScalar::one(ctx));
    match lead.inv() {
        Ok(inv) if !lead.congruent(&WittScalar::one(ctx)) => {
            let g2 = g.iter().map(|c| c.mul(&inv)).collect();
            let h2 = h.iter().map(|c| c.mul(&lead)).collect();
            (g2, h2)
        }
        _ => (g, h),
    }
}
