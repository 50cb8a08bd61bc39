use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Exponents of `X_0..X_{L-1}, Y_0..Y_{L-1}`.
pub type Monomial = Vec<u16>;

const MAX_TERMS: usize = 400_000;

/// Integer polynomial in `X_0..X_{L-1}, Y_0..Y_{L-1}`, terms sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: Vec<(Monomial, i128)>,
}

type Acc = HashMap<Monomial, i128>;

fn overflow() -> Error {
    Error::InvalidParameter("Witt polynomial coefficients overflow 128 bits".into())
}

impl IntPoly {
    fn from_acc(nvars: usize, acc: Acc) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort();
        Self { nvars, terms }
    }

    pub fn constant(nvars: usize, c: i128) -> Self {
        Self::from_acc(nvars, [(vec![0; nvars], c)].into_iter().collect())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self { nvars, terms: vec![(e, 1)] }
    }

    pub fn terms(&self) -> &[(Monomial, i128)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut acc: Acc = self.terms.iter().cloned().collect();
        for (e, c) in &other.terms {
            let x = acc.entry(e.clone()).or_insert(0);
            *x = x.checked_add(*c).ok_or_else(overflow)?;
        }
        Ok(Self::from_acc(self.nvars, acc))
    }

    pub fn scale(&self, k: i128) -> Result<Self> {
        let terms = self.terms.iter().map(|(e, c)| Ok((e.clone(), c.checked_mul(k).ok_or_else(overflow)?)));
        Ok(Self::from_acc(self.nvars, terms.collect::<Result<Acc>>()?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1)?)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut acc: Acc = HashMap::with_capacity(self.len() * other.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = c1.checked_mul(*c2).ok_or_else(overflow)?;
                let x = acc.entry(e).or_insert(0);
                *x = x.checked_add(c).ok_or_else(overflow)?;
            }
        }
        if acc.len() > MAX_TERMS {
            return Err(Error::InvalidParameter("Witt polynomial table too large".into()));
        }
        Ok(Self::from_acc(self.nvars, acc))
    }

    pub fn pow(&self, k: u64) -> Result<Self> {
        let mut out = Self::constant(self.nvars, 1);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(out)
    }

    /// Exact division by `d`, `None` if some coefficient is not divisible.
    pub fn div_exact(&self, d: i128) -> Option<Self> {
        if self.terms.iter().any(|(_, c)| c % d != 0) {
            return None;
        }
        Some(Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c / d)).collect() })
    }

    /// Value at an integer point, `None` on overflow.
    pub fn eval(&self, point: &[i128]) -> Option<i128> {
        let mut sum: i128 = 0;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (x, k) in point.iter().zip(e) {
                t = t.checked_mul(x.checked_pow(*k as u32)?)?;
            }
            sum = sum.checked_add(t)?;
        }
        Some(sum)
    }
}

/// Sum and product polynomials of p-typical Witt vectors of length `L`.
#[derive(Debug)]
pub struct WittPolyTable {
    p: u64,
    len: usize,
    sum: Vec<IntPoly>,
    prod: Vec<IntPoly>,
    sum_mod_p: Vec<Vec<(Monomial, u64)>>,
    prod_mod_p: Vec<Vec<(Monomial, u64)>>,
}

/// `w_n(Z) = sum_i p^i Z_i^{p^{n-i}}` for polynomials `Z_i`.
fn ghost(z: &[IntPoly], p: u64, n: usize) -> Result<IntPoly> {
    let mut g = IntPoly::constant(z[0].nvars, 0);
    for (i, zi) in z.iter().enumerate().take(n + 1) {
        let term = zi.pow(p.pow((n - i) as u32))?.scale((p as i128).pow(i as u32))?;
        g = g.add(&term)?;
    }
    Ok(g)
}

/// Solve `w_n(T) = g_n` triangularly, checking integrality at each step.
fn solve_ghost(targets: impl Fn(usize) -> Result<IntPoly>, p: u64, len: usize) -> Result<Vec<IntPoly>> {
    let mut out: Vec<IntPoly> = Vec::with_capacity(len);
    for n in 0..len {
        let mut g = targets(n)?;
        for (i, ti) in out.iter().enumerate() {
            g = g.sub(&ti.pow(p.pow((n - i) as u32))?.scale((p as i128).pow(i as u32))?)?;
        }
        let pn = (p as i128).pow(n as u32);
        let tn = g.div_exact(pn).ok_or_else(|| {
            Error::InvariantViolation(format!("Witt polynomial of index {n} is not integral"))
        })?;
        out.push(tn);
    }
    Ok(out)
}

fn reduce_mod_p(polys: &[IntPoly], p: u64) -> Vec<Vec<(Monomial, u64)>> {
    polys
        .iter()
        .map(|f| {
            f.terms
                .iter()
                .filter_map(|(e, c)| {
                    let r = c.rem_euclid(p as i128) as u64;
                    (r != 0).then(|| (e.clone(), r))
                })
                .collect()
        })
        .collect()
}

impl WittPolyTable {
    fn build(p: u64, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidParameter("Witt length must be at least 1".into()));
        }
        if p.checked_pow(len as u32 - 1).is_none_or(|x| x > u16::MAX as u64 / 2) {
            return Err(Error::InvalidParameter(format!("Witt length {len} too large for p = {p}")));
        }
        let nv = 2 * len;
        let xs: Vec<IntPoly> = (0..len).map(|i| IntPoly::var(nv, i)).collect();
        let ys: Vec<IntPoly> = (0..len).map(|i| IntPoly::var(nv, len + i)).collect();
        let sum = solve_ghost(|n| ghost(&xs, p, n)?.add(&ghost(&ys, p, n)?), p, len)?;
        let prod = solve_ghost(|n| ghost(&xs, p, n)?.mul(&ghost(&ys, p, n)?), p, len)?;
        let table = Self {
            p,
            len,
            sum_mod_p: reduce_mod_p(&sum, p),
            prod_mod_p: reduce_mod_p(&prod, p),
            sum,
            prod,
        };
        table.verify_ghost(16, 0x5eed)?;
        Ok(table)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sum_poly(&self, n: usize) -> &IntPoly {
        &self.sum[n]
    }

    pub fn prod_poly(&self, n: usize) -> &IntPoly {
        &self.prod[n]
    }

    pub(crate) fn sum_mod_p(&self, n: usize) -> &[(Monomial, u64)] {
        &self.sum_mod_p[n]
    }

    pub(crate) fn prod_mod_p(&self, n: usize) -> &[(Monomial, u64)] {
        &self.prod_mod_p[n]
    }

    /// The ghost identities as polynomial identities over `Z`.
    pub fn verify_ghost_symbolic(&self) -> Result<bool> {
        let nv = 2 * self.len;
        let xs: Vec<IntPoly> = (0..self.len).map(|i| IntPoly::var(nv, i)).collect();
        let ys: Vec<IntPoly> = (0..self.len).map(|i| IntPoly::var(nv, self.len + i)).collect();
        for n in 0..self.len {
            let (gx, gy) = (ghost(&xs, self.p, n)?, ghost(&ys, self.p, n)?);
            if ghost(&self.sum, self.p, n)? != gx.add(&gy)? || ghost(&self.prod, self.p, n)? != gx.mul(&gy)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Check `w_n(S) = w_n(X) + w_n(Y)` and `w_n(P) = w_n(X) w_n(Y)` at
    /// random small integer points, skipping points whose values overflow.
    /// Returns the number of points checked.
    pub fn verify_ghost(&self, samples: usize, seed: u64) -> Result<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = self.p as i128;
        let mut checked = 0;
        let ghost_at = |vals: &[i128], n: usize| -> Option<i128> {
            let mut g: i128 = 0;
            for (i, v) in vals.iter().enumerate().take(n + 1) {
                g = g.checked_add(p.checked_pow(i as u32)?.checked_mul(v.checked_pow((self.p).pow((n - i) as u32) as u32)?)?)?;
            }
            Some(g)
        };
        for _ in 0..samples {
            let point: Vec<i128> = (0..2 * self.len).map(|_| rng.gen_range(-2..=2)).collect();
            let (x, y) = point.split_at(self.len);
            let s: Option<Vec<i128>> = self.sum.iter().map(|f| f.eval(&point)).collect();
            let m: Option<Vec<i128>> = self.prod.iter().map(|f| f.eval(&point)).collect();
            let (Some(s), Some(m)) = (s, m) else { continue };
            for n in 0..self.len {
                let (Some(gx), Some(gy), Some(gs), Some(gm)) =
                    (ghost_at(x, n), ghost_at(y, n), ghost_at(&s, n), ghost_at(&m, n))
                else {
                    continue;
                };
                if gx.checked_add(gy) != Some(gs) || gx.checked_mul(gy).is_some_and(|v| v != gm) {
                    return Err(Error::InvariantViolation(format!("ghost identity fails at index {n}")));
                }
            }
            checked += 1;
        }
        Ok(checked)
    }
}

type TableCache = Mutex<HashMap<(u64, usize), Arc<WittPolyTable>>>;

/// Cached table for `(p, L)`.
pub fn witt_polynomials(p: u64, len: usize) -> Result<Arc<WittPolyTable>> {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("table cache").get(&(p, len)) {
        return Ok(t.clone());
    }
    let t = Arc::new(WittPolyTable::build(p, len)?);
    cache.lock().expect("table cache").insert((p, len), t.clone());
    Ok(t)
}
