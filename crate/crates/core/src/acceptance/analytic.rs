use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::froblift::{lift_apply, min_preimage_valuation, radius_lambda, radius_mu, FrobeniusLift};
use crate::scalar::{PrimeContext, WittScalar};
use crate::series::{annulus_split, gauss_valuation, newton_polygon, weierstrass_prepare, NewtonPolygon, RingTag, TruncLaurent, Q};

fn poly(c: &Arc<PrimeContext>, coeffs: &[i64]) -> Result<TruncLaurent> {
    TruncLaurent::from_ints(c, 0, coeffs, None, RingTag::Omega)
}

pub(super) fn cyclotomic_log(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let c = PrimeContext::new(3, 1, 6, 1)?;
    let h = 200i64;
    let coeffs = (0..h)
        .map(|n| {
            if n == 0 {
                return Ok(WittScalar::zero(&c));
            }
            let sign = if n % 2 == 1 { 1 } else { -1 };
            WittScalar::from_int(&c, sign).div(&WittScalar::from_int(&c, n))
        })
        .collect::<Result<Vec<_>>>()?;
    let log = TruncLaurent::new(&c, 0, coeffs, Some(h), RingTag::Rplus)?;
    let img = lift_apply(&FrobeniusLift::cyclotomic(&c), &log, 1)?;
    let mut bad = Vec::new();
    for e in 1..h {
        let ok = match (img.coeff(e), log.coeff(e)) {
            (Some(got), Some(x)) => got.congruent(&x.mul_int(3)) && got.rel_prec() > 0,
            _ => false,
        };
        if !ok {
            bad.push(e);
        }
    }
    let window_ok = img.hi() == Some(h);
    let detail = format!("{} of {} coefficients agree with 3x, window [0, {:?})", h - 1 - bad.len() as i64, h - 1, img.hi());
    Ok((bad.is_empty() && window_ok, detail))
}

/// Zero-centered lift `t^p + p * (random)` with `deg <= p + 2`.
fn random_lift(rng: &mut ChaCha8Rng, c: &Arc<PrimeContext>) -> Result<FrobeniusLift> {
    let p = c.p() as usize;
    let deg = p + rng.gen_range(0..=2);
    let mut coeffs = vec![0i64; deg + 1];
    for (i, slot) in coeffs.iter_mut().enumerate().skip(1) {
        *slot = p as i64 * rng.gen_range(-3..=3);
        if i == p {
            *slot += 1;
        }
    }
    if coeffs[deg] == 0 {
        coeffs[deg] = p as i64;
    }
    FrobeniusLift::new(poly(c, &coeffs)?)
}

pub(super) fn lift_inequality(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let samples = [Q::new(1, 4), Q::new(1, 2), Q::from_integer(1), Q::from_integer(2)];
    let mut checks = 0;
    let mut failures = 0;
    let mut first = String::new();
    for i in 0..100 {
        let p = if i % 2 == 0 { 2 } else { 3 };
        // the precision floor N + s e must clear the bound for e >= h
        let c = PrimeContext::new(p, 1, 24, 1)?;
        let sigma = random_lift(rng, &c)?;
        let q = Q::from_integer(sigma.q() as i64);
        for h in 1..=20 {
            let th = TruncLaurent::monomial(WittScalar::one(&c), h, RingTag::Omega);
            let img = lift_apply(&sigma, &th, 1)?;
            for &s in &samples {
                let w = gauss_valuation(&img, s);
                checks += 1;
                if w.lower_bound.is_none_or(|b| b < (q * s).min(s + 1) * h) {
                    if failures == 0 {
                        first = format!("; first failure: t^sigma = {:?}, h = {h}, s = {s}", sigma.image().terms().map(|(e, c)| (e, c.to_int())).collect::<Vec<_>>());
                    }
                    failures += 1;
                }
            }
        }
    }
    Ok((failures == 0, format!("{checks} comparisons, {failures} failures{first}")))
}

/// Monic, lower coefficients `p^e * unit` (`e` in 1..=2) or zero; nonzero
/// constant term.
fn random_distinguished(rng: &mut ChaCha8Rng, c: &Arc<PrimeContext>, deg: usize) -> Result<TruncLaurent> {
    let p = c.p() as i64;
    let mut coeffs = vec![0i64; deg + 1];
    coeffs[deg] = 1;
    for (i, slot) in coeffs.iter_mut().enumerate().take(deg) {
        if i > 0 && rng.gen_bool(0.4) {
            continue;
        }
        let unit = loop {
            let u = rng.gen_range(-4..=4);
            if u % p != 0 {
                break u;
            }
        };
        *slot = p.pow(rng.gen_range(1..=2)) * unit;
    }
    poly(c, &coeffs)
}

/// Lower hull by brute force: `L(x)` minimizes over all chords through
/// `x`; the slope multiset is read off unit steps.
fn hull_oracle(points: &[(i64, Q)]) -> Vec<Q> {
    let lo = points.iter().map(|p| p.0).min().unwrap_or(0);
    let hi = points.iter().map(|p| p.0).max().unwrap_or(0);
    let lower = |x: i64| -> Q {
        let mut best: Option<Q> = None;
        for &(a, va) in points {
            for &(b, vb) in points {
                if a <= x && x <= b && (a < b || a == x) {
                    let v = if a == b { va } else { va + (vb - va) * Q::new(x - a, b - a) };
                    best = Some(best.map_or(v, |w: Q| w.min(v)));
                }
            }
        }
        best.expect("x lies between two points")
    };
    (lo..hi).map(|x| lower(x + 1) - lower(x)).collect()
}

fn points(f: &TruncLaurent) -> Vec<(i64, Q)> {
    f.nonzero_terms().map(|(e, c)| (e, Q::from_integer(c.valuation()))).collect()
}

fn same_series(a: &TruncLaurent, b: &TruncLaurent) -> bool {
    a.sub(b).is_zero()
}

/// Unit polynomial `1 + p r_0 + t * (...)` of degree at most 2.
fn random_unit(rng: &mut ChaCha8Rng, c: &Arc<PrimeContext>) -> Result<TruncLaurent> {
    let p = c.p() as i64;
    let coeffs = [1 + p * rng.gen_range(-1..=1), rng.gen_range(-2..=2), rng.gen_range(-2..=2)];
    poly(c, &coeffs)
}

pub(super) fn newton_weierstrass(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut prepared = 0;
    let mut split = 0;
    let mut hull_ok = 0;
    let mut union_ok = 0;
    let mut failures: Vec<String> = Vec::new();
    let total = 200;
    for i in 0..total {
        let p = if i % 2 == 0 { 2 } else { 3 };
        let wc = PrimeContext::new(p, 1, 6, 1)?;
        let sc = PrimeContext::new(p, 1, if p == 2 { 40 } else { 30 }, 1)?;
        let deg = rng.gen_range(1..=12);
        let coeff_seed: u64 = rng.gen();
        let mk = |c: &Arc<PrimeContext>| {
            let mut r = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(coeff_seed);
            random_distinguished(&mut r, c, deg)
        };
        // preparation of P * u recovers P and the unit
        let pw = mk(&wc)?;
        let u = random_unit(rng, &wc)?;
        let f = pw.mul(&u)?;
        match weierstrass_prepare(&f) {
            Ok((d, v)) if same_series(&d, &pw) && same_series(&d.mul(&v)?, &f) => prepared += 1,
            Ok(_) => failures.push(format!("#{i}: preparation mismatch")),
            Err(e) => failures.push(format!("#{i}: preparation: {e}")),
        }
        let ps = mk(&sc)?;
        let np = newton_polygon(&ps)?;
        if np.slope_multiset() == hull_oracle(&points(&ps)) {
            hull_ok += 1;
        } else {
            failures.push(format!("#{i}: hull mismatch"));
        }
        let vals: Vec<Q> = np.root_valuations().into_iter().map(|(v, _)| v).collect();
        let k = rng.gen_range(0..vals.len());
        let (alpha, beta) = if k + 1 < vals.len() { (vals[k + 1], vals[k]) } else { (vals[k] - 1, vals[k]) };
        match annulus_split(&ps, alpha, beta) {
            Ok((g, h)) => {
                let inside = newton_polygon(&g)?.root_valuations().iter().all(|(v, _)| *v > alpha && *v <= beta);
                if same_series(&g.mul(&h)?, &ps) && inside {
                    split += 1;
                } else {
                    failures.push(format!("#{i}: split mismatch"));
                }
            }
            Err(e) => failures.push(format!("#{i}: split: {e}")),
        }
        let odeg = rng.gen_range(1..=6);
        let other = random_distinguished(rng, &sc, odeg)?;
        let mut union = np.slope_multiset();
        union.extend(newton_polygon(&other)?.slope_multiset());
        union.sort();
        if newton_polygon(&ps.mul(&other)?)?.slope_multiset() == union {
            union_ok += 1;
        } else {
            failures.push(format!("#{i}: product slopes"));
        }
    }
    let ok = failures.is_empty();
    let mut detail = format!(
        "{total} polynomials: prepared {prepared}, split {split}, hull {hull_ok}, product union {union_ok}"
    );
    if let Some(first) = failures.first() {
        detail.push_str(&format!("; first failure {first}"));
    }
    Ok((ok, detail))
}

/// Independent Newton oracle: the largest root valuation of
/// `t^sigma - x` with `v(x) = target`, from the hull of the points.
fn preimage_oracle(sigma: &FrobeniusLift, target: Q) -> Result<Q> {
    let mut pts = vec![(0, target)];
    pts.extend(points(sigma.image()).into_iter().filter(|(e, _)| *e > 0));
    let np = NewtonPolygon::from_points(&pts)?;
    np.root_valuations().into_iter().map(|(v, _)| v).max().ok_or(Error::ZeroSeries)
}

pub(super) fn radius_suite(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let c3 = PrimeContext::new(3, 1, 8, 1)?;
    let c2 = PrimeContext::new(2, 1, 12, 1)?;
    let lifts = [
        FrobeniusLift::standard(&c3),
        FrobeniusLift::new(poly(&c3, &[0, 3, 0, 1])?)?,
        FrobeniusLift::new(poly(&c3, &[0, 3, 9, 1, 3])?)?,
        FrobeniusLift::new(poly(&c2, &[0, 2, 1])?)?,
        FrobeniusLift::cyclotomic(&c2),
    ];
    let mut inverse_ok = 0;
    for i in 0..50 {
        let sigma = &lifts[i % lifts.len()];
        let (mu, lam) = (radius_mu(sigma)?, radius_lambda(sigma)?);
        let s = Q::new(i as i64 + 1, 7);
        if mu.eval(lam.eval(s)) == s {
            inverse_ok += 1;
        }
    }
    let mut preimage_ok = 0;
    for (j, sigma) in lifts.iter().enumerate() {
        let lam = radius_lambda(sigma)?;
        for k in 1..=4 {
            let target = Q::new(k * (j as i64 + 2), 3);
            let v = min_preimage_valuation(sigma, target)?;
            if lam.eval(v) == target && v == preimage_oracle(sigma, target)? {
                preimage_ok += 1;
            }
        }
    }
    Ok((
        inverse_ok == 50 && preimage_ok == 20,
        format!("mu(lambda(s)) = s on {inverse_ok}/50, preimage consistent on {preimage_ok}/20"),
    ))
}
