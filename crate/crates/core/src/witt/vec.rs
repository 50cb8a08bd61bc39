use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::laurent::LaurentModP;
use super::table::{Monomial, WittPolyTable};
use super::tower::{ASTower, TowerElem, TowerElemDoc};
use crate::error::{Error, Result};
use crate::field::FiniteField;

/// Truncated p-typical Witt vector `(x_0, ..., x_{L-1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittVec {
    comps: Vec<TowerElem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittVecDoc {
    pub len: usize,
    pub components: Vec<TowerElemDoc>,
}

impl WittVec {
    pub fn from_components(comps: Vec<TowerElem>) -> Result<Self> {
        if comps.is_empty() {
            return Err(Error::InvalidParameter("Witt vectors need at least one component".into()));
        }
        Ok(Self { comps })
    }

    pub fn zero(field: &Arc<FiniteField>, len: usize) -> Self {
        Self { comps: vec![TowerElem::zero(field); len] }
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn component(&self, i: usize) -> &TowerElem {
        &self.comps[i]
    }

    pub fn components(&self) -> &[TowerElem] {
        &self.comps
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        self.comps[0].field()
    }

    /// Components `0..k` vanish on their windows, i.e. `x` lies in `V^k`.
    pub fn in_v_power(&self, k: usize) -> bool {
        self.comps.iter().take(k).all(TowerElem::is_zero)
    }

    /// Index of the first component that is nonzero on its window.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.comps.iter().position(|c| !c.is_zero())
    }

    pub fn map(&self, f: impl Fn(&TowerElem) -> TowerElem) -> Self {
        Self { comps: self.comps.iter().map(f).collect() }
    }

    /// Shift right by one, dropping the last component.
    pub fn verschiebung(&self) -> Self {
        let mut comps = vec![TowerElem::zero(self.field())];
        comps.extend(self.comps.iter().take(self.len() - 1).cloned());
        Self { comps }
    }

    pub fn verschiebung_n(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |x, _| x.verschiebung())
    }

    pub fn to_doc(&self) -> WittVecDoc {
        WittVecDoc { len: self.len(), components: self.comps.iter().map(TowerElem::to_doc).collect() }
    }

    pub fn from_doc(field: &Arc<FiniteField>, doc: &WittVecDoc) -> Result<Self> {
        if doc.components.len() != doc.len {
            return Err(Error::Malformed(format!("expected {} components", doc.len)));
        }
        Self::from_components(doc.components.iter().map(|c| TowerElem::from_doc(field, c)).collect::<Result<_>>()?)
    }
}

/// Witt vector arithmetic of a fixed length over a tower.
#[derive(Clone, Copy, Debug)]
pub struct WittRing<'a> {
    pub table: &'a WittPolyTable,
    pub tower: &'a ASTower,
}

struct PowCache<'a> {
    tower: &'a ASTower,
    vals: Vec<&'a TowerElem>,
    cache: HashMap<(usize, u16), TowerElem>,
}

impl PowCache<'_> {
    fn get(&mut self, var: usize, e: u16) -> TowerElem {
        if e == 1 {
            return self.vals[var].clone();
        }
        let tower = self.tower;
        let base = self.vals[var];
        self.cache.entry((var, e)).or_insert_with(|| tower.pow(base, e as u64)).clone()
    }
}

impl<'a> WittRing<'a> {
    pub fn new(table: &'a WittPolyTable, tower: &'a ASTower) -> Self {
        Self { table, tower }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    fn field(&self) -> &Arc<FiniteField> {
        self.tower.field()
    }

    fn check(&self, x: &WittVec) -> Result<()> {
        if x.len() != self.len() {
            return Err(Error::InvalidParameter(format!("Witt vector of length {} in a ring of length {}", x.len(), self.len())));
        }
        Ok(())
    }

    fn eval(&self, polys: impl Fn(usize) -> &'a [(Monomial, u64)], x: &WittVec, y: &WittVec) -> Result<WittVec> {
        self.check(x)?;
        self.check(y)?;
        let l = self.len();
        let vals: Vec<&TowerElem> = x.comps.iter().chain(&y.comps).collect();
        let live: Vec<bool> = vals.iter().map(|v| !v.is_exact_zero()).collect();
        let mut cache = PowCache { tower: self.tower, vals, cache: HashMap::new() };
        let mut comps = Vec::with_capacity(l);
        for n in 0..l {
            let mut acc = TowerElem::zero(self.field());
            for (mono, c) in polys(n) {
                if mono.iter().enumerate().any(|(v, &e)| e > 0 && !live[v]) {
                    continue;
                }
                let mut term: Option<TowerElem> = None;
                for (v, &e) in mono.iter().enumerate().filter(|(_, &e)| e > 0) {
                    let f = cache.get(v, e);
                    term = Some(match term {
                        None => f,
                        Some(t) => self.tower.mul(&t, &f),
                    });
                }
                let term = term.unwrap_or_else(|| TowerElem::base(LaurentModP::one(self.field())));
                acc = acc.add(&term.scale_int(*c as i64));
            }
            comps.push(acc);
        }
        Ok(WittVec { comps })
    }

    pub fn add(&self, x: &WittVec, y: &WittVec) -> Result<WittVec> {
        let t = self.table;
        self.eval(|n| t.sum_mod_p(n), x, y)
    }

    pub fn mul(&self, x: &WittVec, y: &WittVec) -> Result<WittVec> {
        let t = self.table;
        self.eval(|n| t.prod_mod_p(n), x, y)
    }

    /// `-1`: `(-1, 0, 0, ...)` for odd `p`, `(1, 1, 1, ...)` for `p = 2`.
    pub fn minus_one(&self) -> WittVec {
        let f = self.field();
        let one = TowerElem::base(LaurentModP::one(f));
        if f.p() == 2 {
            WittVec { comps: vec![one; self.len()] }
        } else {
            let mut comps = vec![TowerElem::zero(f); self.len()];
            comps[0] = one.neg();
            WittVec { comps }
        }
    }

    pub fn neg(&self, x: &WittVec) -> Result<WittVec> {
        if self.field().p() == 2 {
            self.mul(x, &self.minus_one())
        } else {
            self.check(x)?;
            Ok(x.map(TowerElem::neg))
        }
    }

    pub fn sub(&self, x: &WittVec, y: &WittVec) -> Result<WittVec> {
        self.add(x, &self.neg(y)?)
    }

    pub fn zero(&self) -> WittVec {
        WittVec::zero(self.field(), self.len())
    }

    /// `[a] = (a, 0, 0, ...)`.
    pub fn teich(&self, a: TowerElem) -> WittVec {
        let mut comps = vec![TowerElem::zero(self.field()); self.len()];
        comps[0] = a;
        WittVec { comps }
    }

    pub fn teich_base(&self, a: LaurentModP) -> WittVec {
        self.teich(TowerElem::base(a))
    }

    pub fn one(&self) -> WittVec {
        self.teich_base(LaurentModP::one(self.field()))
    }

    /// Witt vector Frobenius: every component to the `p`-th power.
    pub fn frobenius(&self, x: &WittVec) -> WittVec {
        x.map(|c| self.tower.frobenius(c))
    }

    pub fn frobenius_n(&self, x: &WittVec, n: usize) -> WittVec {
        (0..n).fold(x.clone(), |y, _| self.frobenius(&y))
    }

    /// `p x = V(F(x))`.
    pub fn mul_p(&self, x: &WittVec) -> WittVec {
        self.frobenius(x).verschiebung()
    }

    /// `k x` by double-and-add.
    pub fn scale_int(&self, x: &WittVec, k: i64) -> Result<WittVec> {
        let mut out = self.zero();
        let mut base = if k < 0 { self.neg(x)? } else { x.clone() };
        let mut k = k.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                out = self.add(&out, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base)?;
            }
        }
        Ok(out)
    }
}
