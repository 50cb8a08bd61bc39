//! Small finite fields `F_{p^a}` with brute-force root finding and
//! extension-degree search.

use crate::arith::{invmod, QuotientRing};

/// Field elements at desk scale are enumerated exhaustively; beyond this
/// size root searches give up.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    ring: QuotientRing,
}

/// Sparse polynomial equation `sum coeff_i * r^{exp_i} = 0` with coefficients
/// in some base field.
pub type SparseEquation = Vec<(u64, Vec<u64>)>;

/// Lexicographically first monic irreducible polynomial of degree `a` over
/// `F_p`, low degree first. Coefficient vectors are compared from the
/// constant term upward.
pub fn first_irreducible(p: u64, a: usize) -> Vec<u64> {
    assert!(a >= 1);
    if a == 1 {
        return vec![0, 1];
    }
    let count = p.pow(a as u32);
    for idx in 0..count {
        let mut f = Vec::with_capacity(a + 1);
        let mut k = idx;
        for _ in 0..a {
            f.push(k % p);
            k /= p;
        }
        f.push(1);
        if is_irreducible(p, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn poly_rem_modp(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = invmod(b[db], p).expect("nonzero leading coefficient");
    while r.len() > db {
        let c = (r[r.len() - 1] * lead_inv) % p;
        let shift = r.len() - 1 - db;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - (c * bc) % p) % p;
        }
        r.pop();
        while r.len() > 1 && *r.last().unwrap() == 0 && r.len() > db {
            r.pop();
        }
    }
    while r.len() > 1 && *r.last().unwrap() == 0 {
        r.pop();
    }
    r
}

/// Irreducibility by trial division by every monic polynomial of degree
/// at most `deg/2`.
pub fn is_irreducible(p: u64, f: &[u64]) -> bool {
    let d = f.len() - 1;
    for k in 1..=d / 2 {
        let count = p.pow(k as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(k + 1);
            let mut m = idx;
            for _ in 0..k {
                g.push(m % p);
                m /= p;
            }
            g.push(1);
            let r = poly_rem_modp(p, f, &g);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    pub fn new(p: u64, poly: Vec<u64>) -> Self {
        Self { p, ring: QuotientRing::new(p, poly) }
    }

    /// `F_{p^a}` defined by the lexicographically first irreducible.
    pub fn standard(p: u64, a: usize) -> Self {
        Self::new(p, first_irreducible(p, a))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.ring.degree()
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.degree() as u32)
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn zero(&self) -> Vec<u64> {
        self.ring.zero()
    }

    pub fn one(&self) -> Vec<u64> {
        self.ring.one()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.ring.add(a, b)
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.ring.sub(a, b)
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        self.ring.neg(a)
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.ring.mul(a, b)
    }

    pub fn pow(&self, a: &[u64], e: u64) -> Vec<u64> {
        self.ring.pow(a, e)
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        self.ring.is_zero(a)
    }

    pub fn inv(&self, a: &[u64]) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        Some(self.pow(a, self.size() - 2))
    }

    /// `a^{1/p}`, the inverse of the absolute Frobenius.
    pub fn pth_root(&self, a: &[u64]) -> Vec<u64> {
        self.pow(a, self.size() / self.p)
    }

    /// Element with index `idx` in the enumeration order (coordinates read
    /// as base-`p` digits, constant coordinate least significant).
    pub fn element(&self, idx: u64) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.degree());
        let mut k = idx;
        for _ in 0..self.degree() {
            v.push(k % self.p);
            k /= self.p;
        }
        v
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.size()).map(move |i| self.element(i))
    }

    /// Order of a nonzero element in the multiplicative group.
    pub fn mult_order(&self, a: &[u64]) -> u64 {
        let n = self.size() - 1;
        let mut order = n;
        for (q, _) in factorize(n) {
            while order.is_multiple_of(q) && self.pow(a, order / q) == self.one() {
                order /= q;
            }
        }
        order
    }

    /// Image of the generator of `base` in `self`, if `base` embeds.
    pub fn embedding_of(&self, base: &FiniteField) -> Option<Vec<u64>> {
        if !self.degree().is_multiple_of(base.degree()) || self.p != base.p {
            return None;
        }
        if base.degree() == 1 {
            return Some(self.zero());
        }
        self.elements().find(|y| self.ring.is_zero(&self.ring.eval_int_poly(base.ring.poly(), y)))
    }

    /// Map an element of `base` into `self` given the generator image.
    pub fn embed(&self, base: &FiniteField, gen_image: &[u64], a: &[u64]) -> Vec<u64> {
        if base.degree() == 1 {
            return self.ring.int(a[0] as i64);
        }
        let mut acc = self.zero();
        let mut pw = self.one();
        for &c in a {
            acc = self.add(&acc, &self.ring.scale(&pw, c));
            pw = self.mul(&pw, gen_image);
        }
        acc
    }

    pub fn eval_equation(&self, eq: &[(u64, Vec<u64>)], r: &[u64]) -> Vec<u64> {
        let mut acc = self.zero();
        for (e, c) in eq {
            acc = self.add(&acc, &self.mul(c, &self.pow(r, *e)));
        }
        acc
    }

    /// All roots of `eq` in this field, in enumeration order.
    pub fn roots(&self, eq: &[(u64, Vec<u64>)]) -> Vec<Vec<u64>> {
        self.elements().filter(|r| self.is_zero(&self.eval_equation(eq, r))).collect()
    }
}

/// Result of searching for the smallest field extension containing a root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionSearch {
    /// Root exists over the extension of this relative degree.
    Degree(usize),
    /// No root found in any extension within [`MAX_FIELD_SIZE`].
    Exhausted,
}

/// Smallest `d >= 2` such that `eq` (coefficients in `base`) has a root
/// satisfying `accept` in `F_{p^{a d}}`.
pub fn extension_degree_for_root(
    base: &FiniteField,
    eq: &[(u64, Vec<u64>)],
    nonzero_only: bool,
) -> ExtensionSearch {
    let a = base.degree();
    let mut d = 2;
    loop {
        let size = (base.p as u128).pow((a * d) as u32);
        if size > MAX_FIELD_SIZE as u128 {
            return ExtensionSearch::Exhausted;
        }
        let big = FiniteField::standard(base.p, a * d);
        let gen = big.embedding_of(base).expect("subfield embeds");
        let big_eq: Vec<(u64, Vec<u64>)> =
            eq.iter().map(|(e, c)| (*e, big.embed(base, &gen, c))).collect();
        let found = big
            .elements()
            .any(|r| (!nonzero_only || !big.is_zero(&r)) && big.is_zero(&big.eval_equation(&big_eq, &r)));
        if found {
            return ExtensionSearch::Degree(d);
        }
        d += 1;
    }
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            let mut e = 0;
            while n.is_multiple_of(q) {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).len() == 1 && factorize(n)[0].1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducible_choices() {
        assert_eq!(first_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(first_irreducible(3, 2), vec![1, 0, 1]);
        assert!(is_irreducible(2, &[1, 1, 0, 1]));
        assert!(!is_irreducible(2, &[1, 0, 1]));
    }

    #[test]
    fn field_inverse_and_order() {
        let f = FiniteField::standard(3, 2);
        for x in f.elements().skip(1) {
            let y = f.inv(&x).unwrap();
            assert_eq!(f.mul(&x, &y), f.one());
            assert_eq!(f.pow(&x, f.mult_order(&x)), f.one());
        }
    }

    #[test]
    fn artin_schreier_needs_degree_p() {
        // r^3 - r = 1 has no root in F_3 but one in F_27
        let f = FiniteField::standard(3, 1);
        let eq = vec![(3, vec![1]), (1, vec![2]), (0, vec![2])];
        assert!(f.roots(&eq).is_empty());
        assert_eq!(extension_degree_for_root(&f, &eq, false), ExtensionSearch::Degree(3));
    }

    #[test]
    fn embedding_respects_arithmetic() {
        let small = FiniteField::standard(2, 2);
        let big = FiniteField::standard(2, 4);
        let g = big.embedding_of(&small).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                let lhs = big.embed(&small, &g, &small.mul(&a, &b));
                let rhs = big.mul(&big.embed(&small, &g, &a), &big.embed(&small, &g, &b));
                assert_eq!(lhs, rhs);
            }
        }
    }
}
