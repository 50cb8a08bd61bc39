use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FiniteField;

/// Element of `F_q`, as coordinates in the standard basis.
pub type Fq = Vec<u64>;

/// Sparse Laurent polynomial over `F_q`, known below `hi`.
///
/// Stored terms are nonzero and lie below `hi`; coefficients below the
/// lowest stored term are exactly zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentModP {
    field: Arc<FiniteField>,
    terms: BTreeMap<i64, Fq>,
    hi: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentDoc {
    pub terms: Vec<(i64, Vec<u64>)>,
    #[serde(default)]
    pub hi: Option<i64>,
}

fn min_hi(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl LaurentModP {
    pub fn new(field: &Arc<FiniteField>, terms: impl IntoIterator<Item = (i64, Fq)>, hi: Option<i64>) -> Self {
        let mut out = Self::zero_below(field, hi);
        for (e, c) in terms {
            out.add_term(e, &c);
        }
        out
    }

    pub fn zero(field: &Arc<FiniteField>) -> Self {
        Self::zero_below(field, None)
    }

    /// `O(t^hi)`.
    pub fn zero_below(field: &Arc<FiniteField>, hi: Option<i64>) -> Self {
        Self { field: field.clone(), terms: BTreeMap::new(), hi }
    }

    pub fn one(field: &Arc<FiniteField>) -> Self {
        Self::monomial(field, field.one(), 0)
    }

    pub fn monomial(field: &Arc<FiniteField>, c: Fq, e: i64) -> Self {
        Self::new(field, [(e, c)], None)
    }

    /// `t^e`.
    pub fn t_pow(field: &Arc<FiniteField>, e: i64) -> Self {
        Self::monomial(field, field.one(), e)
    }

    /// Integer coefficients reduced into the prime field.
    pub fn from_ints(field: &Arc<FiniteField>, terms: &[(i64, i64)], hi: Option<i64>) -> Self {
        Self::new(field, terms.iter().map(|&(e, c)| (e, int_to_fq(field, c))), hi)
    }

    fn add_term(&mut self, e: i64, c: &[u64]) {
        if self.hi.is_some_and(|h| e >= h) || self.field.is_zero(c) {
            return;
        }
        let f = &self.field;
        match self.terms.get_mut(&e) {
            Some(x) => {
                let s = f.add(x, c);
                if f.is_zero(&s) {
                    self.terms.remove(&e);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(e, c.to_vec());
            }
        }
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn hi(&self) -> Option<i64> {
        self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.hi.is_none()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Fq)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `None` at or above `hi`.
    pub fn coeff(&self, e: i64) -> Option<Fq> {
        if self.hi.is_some_and(|h| e >= h) {
            return None;
        }
        Some(self.terms.get(&e).cloned().unwrap_or_else(|| self.field.zero()))
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Lower end of the window: the valuation, or `hi` for an unknown zero.
    pub fn lo(&self) -> Option<i64> {
        self.valuation().or(self.hi)
    }

    pub fn top(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Zero on the known window.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.hi.is_none()
    }

    /// Only the constant coefficient is nonzero, and it lies in `F_p`.
    pub fn is_prime_field_constant(&self) -> bool {
        self.terms.iter().all(|(e, c)| *e == 0 && c.iter().skip(1).all(|&x| x == 0))
    }

    pub fn truncate(&self, hi: i64) -> Self {
        let hi = min_hi(self.hi, Some(hi));
        Self::new(&self.field, self.terms.iter().map(|(e, c)| (*e, c.clone())), hi)
    }

    pub fn with_hi(&self, hi: Option<i64>) -> Self {
        let mut out = self.clone();
        out.hi = hi;
        out.terms.retain(|e, _| hi.is_none_or(|h| *e < h));
        out
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self { field: f.clone(), terms: self.terms.iter().map(|(e, c)| (*e, f.neg(c))).collect(), hi: self.hi }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.with_hi(min_hi(self.hi, other.hi));
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &[u64]) -> Self {
        let f = &self.field;
        Self::new(f, self.terms.iter().map(|(e, x)| (*e, f.mul(x, c))), self.hi)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&int_to_fq(&self.field, k))
    }

    pub fn shift(&self, k: i64) -> Self {
        Self {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            hi: self.hi.map(|h| h + k),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(&self.field);
        }
        let hi = min_hi(
            self.hi.map(|h| h + other.lo().expect("nonzero")),
            other.hi.map(|h| h + self.lo().expect("nonzero")),
        );
        let f = &self.field;
        let mut out = Self::zero_below(f, hi);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, &f.mul(c1, c2));
            }
        }
        out
    }

    /// `x^p`, coefficientwise in characteristic `p`.
    pub fn frobenius(&self) -> Self {
        let f = &self.field;
        let p = f.p() as i64;
        Self {
            field: f.clone(),
            terms: self.terms.iter().map(|(e, c)| (e * p, f.pow(c, p as u64))).collect(),
            hi: self.hi.map(|h| h * p),
        }
    }

    /// `x^k`, using Frobenius for the base-`p` digits of `k`.
    pub fn pow(&self, k: u64) -> Self {
        let p = self.field.p();
        let mut out = Self::one(&self.field);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            let d = k % p;
            for _ in 0..d {
                out = out.mul(&base);
            }
            k /= p;
            if k > 0 {
                base = base.frobenius();
            }
        }
        out
    }

    /// `x^{1/p^j}`; every exponent must be divisible by `p^j`.
    pub fn root(&self, j: u32) -> Result<Self> {
        let f = &self.field;
        let pj = (f.p() as i64).pow(j);
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e % pj != 0 {
                return Err(Error::RootDivisibility { exponent: *e, divisor: pj as u64 });
            }
            let mut r = c.clone();
            for _ in 0..j {
                r = f.pth_root(&r);
            }
            terms.insert(e / pj, r);
        }
        Ok(Self { field: f.clone(), terms, hi: self.hi.map(|h| h.div_euclid(pj) + i64::from(h.rem_euclid(pj) != 0)) })
    }

    pub fn to_doc(&self) -> LaurentDoc {
        LaurentDoc { terms: self.terms.iter().map(|(e, c)| (*e, c.clone())).collect(), hi: self.hi }
    }

    pub fn from_doc(field: &Arc<FiniteField>, doc: &LaurentDoc) -> Result<Self> {
        for (_, c) in &doc.terms {
            if c.len() != field.degree() || c.iter().any(|&x| x >= field.p()) {
                return Err(Error::Malformed(format!("coefficient {c:?} is not an element of F_{}", field.size())));
            }
        }
        Ok(Self::new(field, doc.terms.iter().cloned(), doc.hi))
    }
}

pub(crate) fn int_to_fq(field: &FiniteField, k: i64) -> Fq {
    let mut c = field.zero();
    c[0] = k.rem_euclid(field.p() as i64) as u64;
    c
}
