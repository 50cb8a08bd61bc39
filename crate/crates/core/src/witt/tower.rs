use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::laurent::{LaurentDoc, LaurentModP};
use crate::error::{Error, Result};
use crate::field::FiniteField;

/// Exponents of `z_1, z_2, ...` with trailing zeros trimmed.
pub type GenExp = Vec<u32>;

/// `sum_m a_m z^m` with every exponent below `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerElem {
    field: Arc<FiniteField>,
    parts: BTreeMap<GenExp, LaurentModP>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerElemDoc {
    pub parts: Vec<(GenExp, LaurentDoc)>,
}

fn trim(mut e: GenExp) -> GenExp {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn add_exp(a: &[u32], b: &[u32]) -> GenExp {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)).collect())
}

impl TowerElem {
    pub fn zero(field: &Arc<FiniteField>) -> Self {
        Self { field: field.clone(), parts: BTreeMap::new() }
    }

    pub fn base(x: LaurentModP) -> Self {
        Self::from_part(Vec::new(), x)
    }

    fn from_part(e: GenExp, x: LaurentModP) -> Self {
        let mut out = Self::zero(x.field());
        out.add_part(trim(e), x);
        out
    }

    fn add_part(&mut self, e: GenExp, x: LaurentModP) {
        let sum = match self.parts.remove(&e) {
            Some(y) => y.add(&x),
            None => x,
        };
        if !sum.is_exact_zero() {
            self.parts.insert(e, sum);
        }
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn parts(&self) -> impl Iterator<Item = (&GenExp, &LaurentModP)> {
        self.parts.iter()
    }

    /// Coefficient of the generator-free monomial.
    pub fn base_part(&self) -> LaurentModP {
        self.parts.get(&Vec::new()).cloned().unwrap_or_else(|| LaurentModP::zero(&self.field))
    }

    /// No generator appears with a nonzero coefficient on its window.
    pub fn is_generator_free(&self) -> bool {
        self.parts.iter().all(|(e, x)| e.is_empty() || x.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.parts.values().all(LaurentModP::is_zero)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// Smallest `hi` among the parts.
    pub fn hi(&self) -> Option<i64> {
        self.parts.values().filter_map(LaurentModP::hi).min()
    }

    /// Lowest exponent of `t` with a nonzero coefficient in any part.
    pub fn valuation(&self) -> Option<i64> {
        self.parts.values().filter_map(LaurentModP::valuation).min()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, x) in &other.parts {
            out.add_part(e.clone(), x.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { field: self.field.clone(), parts: self.parts.iter().map(|(e, x)| (e.clone(), x.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn map_parts(&self, f: impl Fn(&LaurentModP) -> LaurentModP) -> Self {
        let mut out = Self::zero(&self.field);
        for (e, x) in &self.parts {
            out.add_part(e.clone(), f(x));
        }
        out
    }

    pub fn shift(&self, k: i64) -> Self {
        self.map_parts(|x| x.shift(k))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.map_parts(|x| x.scale_int(k))
    }

    pub fn truncate(&self, hi: i64) -> Self {
        self.map_parts(|x| x.truncate(hi))
    }

    pub fn to_doc(&self) -> TowerElemDoc {
        TowerElemDoc { parts: self.parts.iter().map(|(e, x)| (e.clone(), x.to_doc())).collect() }
    }

    pub fn from_doc(field: &Arc<FiniteField>, doc: &TowerElemDoc) -> Result<Self> {
        let mut out = Self::zero(field);
        for (e, x) in &doc.parts {
            if e.iter().any(|&k| k as u64 >= field.p()) {
                return Err(Error::Malformed(format!("generator exponent in {e:?} is not reduced")));
            }
            out.add_part(trim(e.clone()), LaurentModP::from_doc(field, x)?);
        }
        Ok(out)
    }
}

/// Artin-Schreier tower over `F_q((t))`: generators `z_k` with
/// `z_k^p - z_k = c_k`, each `c_k` using only earlier generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ASTower {
    field: Arc<FiniteField>,
    relations: Vec<TowerElem>,
    depth_cap: usize,
    /// Exponent at which geometric series are cut off.
    series_hi: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ASTowerDoc {
    pub relations: Vec<TowerElemDoc>,
    pub depth_cap: usize,
    pub series_hi: i64,
}

pub const DEFAULT_DEPTH_CAP: usize = 4;

impl ASTower {
    pub fn new(field: &Arc<FiniteField>, depth_cap: usize, series_hi: i64) -> Self {
        Self { field: field.clone(), relations: Vec::new(), depth_cap, series_hi }
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn depth(&self) -> usize {
        self.relations.len()
    }

    pub fn depth_cap(&self) -> usize {
        self.depth_cap
    }

    pub fn series_hi(&self) -> i64 {
        self.series_hi
    }

    pub fn with_series_hi(mut self, hi: i64) -> Self {
        self.series_hi = hi;
        self
    }

    /// Right side `c_k` of the relation for generator `k` (from 1).
    pub fn relation(&self, k: usize) -> &TowerElem {
        &self.relations[k - 1]
    }

    pub fn relations(&self) -> &[TowerElem] {
        &self.relations
    }

    pub fn generator(&self, k: usize) -> TowerElem {
        let mut e = vec![0; k];
        e[k - 1] = 1;
        TowerElem::from_part(e, LaurentModP::one(&self.field))
    }

    /// Adjoin `z` with `z^p - z = c`.
    pub fn adjoin(&mut self, c: TowerElem) -> Result<TowerElem> {
        if self.depth() >= self.depth_cap {
            return Err(Error::DepthExceeded(self.depth_cap));
        }
        if c.parts.keys().any(|e| e.len() > self.depth()) {
            return Err(Error::InvalidParameter("relation uses a generator that does not exist yet".into()));
        }
        self.relations.push(c);
        Ok(self.generator(self.depth()))
    }

    fn reduce(&self, x: TowerElem) -> TowerElem {
        let p = self.field.p() as u32;
        let mut pending = x;
        let mut out = TowerElem::zero(&self.field);
        loop {
            let mut next = TowerElem::zero(&self.field);
            for (e, a) in pending.parts {
                match e.iter().rposition(|&k| k >= p) {
                    None => out.add_part(e, a),
                    Some(k) => {
                        // z^e = z^{e - p} (z + c)
                        let mut lower = e.clone();
                        lower[k] -= p;
                        let mut with_z = lower.clone();
                        with_z[k] += 1;
                        next.add_part(trim(with_z), a.clone());
                        let lower = trim(lower);
                        for (ce, cx) in &self.relations[k].parts {
                            next.add_part(add_exp(&lower, ce), a.mul(cx));
                        }
                    }
                }
            }
            if next.parts.is_empty() {
                return out;
            }
            pending = next;
        }
    }

    pub fn mul(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        let mut out = TowerElem::zero(&self.field);
        for (e1, x1) in &a.parts {
            for (e2, x2) in &b.parts {
                out.add_part(add_exp(e1, e2), x1.mul(x2));
            }
        }
        self.reduce(out)
    }

    pub fn pow(&self, a: &TowerElem, k: u64) -> TowerElem {
        if a.parts.keys().all(Vec::is_empty) {
            return TowerElem::base(a.base_part().pow(k));
        }
        let mut out = TowerElem::base(LaurentModP::one(&self.field));
        let mut base = a.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = self.mul(&out, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        out
    }

    /// `x^p`: `sum a_m^p prod_k (z_k + c_k)^{m_k}`.
    pub fn frobenius(&self, x: &TowerElem) -> TowerElem {
        let mut out = TowerElem::zero(&self.field);
        for (e, a) in &x.parts {
            let mut term = TowerElem::base(a.frobenius());
            for (k, &m) in e.iter().enumerate() {
                if m > 0 {
                    let zc = self.generator(k + 1).add(&self.relations[k]);
                    term = self.mul(&term, &self.pow(&zc, m as u64));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// `z^p - z + c`, zero on the windows when `z` solves the equation.
    pub fn artin_schreier_residual(&self, z: &TowerElem, c: &TowerElem) -> TowerElem {
        self.frobenius(z).sub(z).add(c)
    }

    pub fn to_doc(&self) -> ASTowerDoc {
        ASTowerDoc {
            relations: self.relations.iter().map(TowerElem::to_doc).collect(),
            depth_cap: self.depth_cap,
            series_hi: self.series_hi,
        }
    }
}

/// Solve `z^p - z = -c`, extending the tower by one generator when no
/// solution exists inside it.
pub fn solve_artin_schreier(c: &TowerElem, mut tower: ASTower) -> Result<(TowerElem, ASTower)> {
    let field = tower.field.clone();
    if c.is_exact_zero() {
        return Ok((TowerElem::zero(&field), tower));
    }
    let p = field.p() as i64;
    let gamma = c.neg();
    let mut g = gamma.base_part();
    let mut z = LaurentModP::zero(&field);
    let mut rest = LaurentModP::zero(&field);
    // negative part: a t^{pe} is y^p - y + y for y = a^{1/p} t^e
    while let Some(e) = g.valuation().filter(|&e| e < 0) {
        let a = g.coeff(e).expect("known");
        g = g.sub(&LaurentModP::monomial(&field, a.clone(), e));
        if e % p == 0 {
            let y = LaurentModP::monomial(&field, field.pth_root(&a), e / p);
            z = z.add(&y);
            g = g.add(&y);
        } else {
            rest = rest.add(&LaurentModP::monomial(&field, a, e));
        }
    }
    if let Some(a) = g.coeff(0).filter(|a| !field.is_zero(a)) {
        g = g.sub(&LaurentModP::monomial(&field, a.clone(), 0));
        let eq = vec![(p as u64, field.one()), (1, field.neg(&field.one())), (0, field.neg(&a))];
        match field.roots(&eq).into_iter().next() {
            Some(y) => z = z.add(&LaurentModP::monomial(&field, y, 0)),
            None => rest = rest.add(&LaurentModP::monomial(&field, a, 0)),
        }
    }
    // positive part: z = -(g + g^p + g^{p^2} + ...)
    if !g.is_zero() || !g.is_exact() {
        let cut = g.hi().map_or(tower.series_hi, |h| h.min(tower.series_hi));
        let mut term = g.truncate(cut);
        let mut series = LaurentModP::zero_below(&field, Some(cut));
        while !term.is_zero() {
            series = series.add(&term);
            term = term.frobenius().truncate(cut);
        }
        z = z.sub(&series);
    }
    let gens: TowerElem = TowerElem {
        field: field.clone(),
        parts: gamma.parts.iter().filter(|(e, _)| !e.is_empty()).map(|(e, x)| (e.clone(), x.clone())).collect(),
    };
    let leftover = gens.add(&TowerElem::base(rest));
    let mut out = TowerElem::base(z);
    if !leftover.is_zero() {
        out = out.add(&tower.adjoin(leftover)?);
    }
    Ok((out, tower))
}
