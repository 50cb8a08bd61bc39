//! Dense matrices over `W[1/p]` with valuation-pivoted elimination.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{PrimeContext, WittScalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    data: Vec<WittScalar>,
}

impl ScalarMatrix {
    pub fn zeros(ctx: &Arc<PrimeContext>, rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![WittScalar::zero(ctx); rows * cols] }
    }

    pub fn identity(ctx: &Arc<PrimeContext>, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, WittScalar::one(ctx));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<WittScalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(entries: &[WittScalar]) -> Self {
        let ctx = entries[0].ctx().clone();
        let mut m = Self::zeros(&ctx, entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &WittScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: WittScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn map(&self, f: impl Fn(&WittScalar) -> WittScalar) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn frobenius(&self, e: i64) -> Self {
        self.map(|x| x.frobenius(e))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let ctx = self.data[0].ctx().clone();
        let mut out = Self::zeros(&ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = WittScalar::zero(&ctx);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Determinant by pivoted elimination.
    pub fn det(&self) -> WittScalar {
        assert_eq!(self.rows, self.cols);
        let ctx = self.data[0].ctx().clone();
        let (pivots, factor, m) = self.echelon_limited(self.cols);
        if pivots.len() < self.rows {
            let prec = m.data.iter().map(|x| x.abs_prec()).min().unwrap_or(0);
            return WittScalar::zero_mod(&ctx, prec);
        }
        // column permutation sign
        let perm: Vec<usize> = pivots.iter().map(|&(_, j)| j).collect();
        let mut sign = factor;
        let mut seen = vec![false; perm.len()];
        for s in 0..perm.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut k = s;
            while !seen[k] {
                seen[k] = true;
                k = perm[k];
                len += 1;
            }
            if len % 2 == 0 {
                sign = sign.neg();
            }
        }
        pivots.iter().fold(sign, |acc, &(i, j)| acc.mul(m.get(i, j)))
    }

    /// Solve `self * x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[WittScalar]) -> Result<Vec<WittScalar>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(self.data[0].ctx(), n, n + 1);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n, b[i].clone());
        }
        let (pivots, _, m) = aug.echelon_limited(n);
        if pivots.len() < n {
            return Err(Error::PrecisionLoss("singular system at working precision".into()));
        }
        let mut x = vec![WittScalar::zero(self.data[0].ctx()); n];
        for &(i, j) in &pivots {
            x[j] = m.get(i, n).div(m.get(i, j))?;
        }
        Ok(x)
    }

    /// Echelon form pivoting only inside the first `ncols` columns.
    /// Returns the pivot positions, the sign of the row permutation and the
    /// reduced matrix.
    fn echelon_limited(&self, ncols: usize) -> (Vec<(usize, usize)>, WittScalar, Self) {
        let ctx = self.data[0].ctx().clone();
        let mut m = self.clone();
        let mut sign = WittScalar::one(&ctx);
        let mut pivots = Vec::new();
        let mut used = vec![false; ncols];
        let mut row = 0;
        while row < self.rows {
            let mut best: Option<(usize, usize, i64)> = None;
            for i in row..self.rows {
                for (j, &u) in used.iter().enumerate() {
                    let x = m.get(i, j);
                    if !u && !x.is_zero() && best.is_none_or(|(_, _, v)| x.valuation() < v) {
                        best = Some((i, j, x.valuation()));
                    }
                }
            }
            let Some((pi, pj, _)) = best else { break };
            if pi != row {
                for j in 0..m.cols {
                    m.data.swap(pi * m.cols + j, row * m.cols + j);
                }
                sign = sign.neg();
            }
            used[pj] = true;
            let inv = m.get(row, pj).inv().expect("pivot is nonzero");
            for i in 0..self.rows {
                if i == row {
                    continue;
                }
                let f = m.get(i, pj).mul(&inv);
                if f.is_exact_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = if j == pj { WittScalar::zero(&ctx) } else { m.get(i, j).sub(&f.mul(m.get(row, j))) };
                    m.set(i, j, v);
                }
            }
            pivots.push((row, pj));
            row += 1;
        }
        (pivots, sign, m)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.rows;
        let ctx = self.data[0].ctx().clone();
        let mut out = Self::zeros(&ctx, n, n);
        for j in 0..n {
            let mut e = vec![WittScalar::zero(&ctx); n];
            e[j] = WittScalar::one(&ctx);
            let col = self.solve(&e)?;
            for (i, v) in col.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    /// Basis of the kernel, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<WittScalar>> {
        let ctx = self.data[0].ctx().clone();
        let (pivots, _, m) = self.echelon_limited(self.cols);
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, j)| j).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![WittScalar::zero(&ctx); self.cols];
            v[free] = WittScalar::one(&ctx);
            for &(i, j) in &pivots {
                // m[i][j] x_j + m[i][free] = 0
                v[j] = m.get(i, free).neg().div(m.get(i, j)).expect("pivot nonzero");
            }
            basis.push(v);
        }
        basis
    }

    pub fn column(&self, j: usize) -> Vec<WittScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(cols: &[Vec<WittScalar>]) -> Self {
        let n = cols[0].len();
        let rows = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        Self::from_rows(rows)
    }
}

/// Characteristic polynomial `det(X I - A)` by Laplace expansion, low
/// degree first.
pub fn char_poly(a: &ScalarMatrix) -> Vec<WittScalar> {
    let n = a.rows();
    let ctx = a.get(0, 0).ctx().clone();
    // entries of X I - A as polynomials
    let entry = |i: usize, j: usize| -> Vec<WittScalar> {
        let c = a.get(i, j).neg();
        if i == j {
            vec![c, WittScalar::one(&ctx)]
        } else {
            vec![c]
        }
    };
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (0..n).collect();
    laplace(&ctx, &entry, &rows, &cols)
}

fn poly_add(ctx: &Arc<PrimeContext>, a: &[WittScalar], b: &[WittScalar]) -> Vec<WittScalar> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(|| WittScalar::zero(ctx));
            let y = b.get(i).cloned().unwrap_or_else(|| WittScalar::zero(ctx));
            x.add(&y)
        })
        .collect()
}

fn poly_mul(ctx: &Arc<PrimeContext>, a: &[WittScalar], b: &[WittScalar]) -> Vec<WittScalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![WittScalar::zero(ctx); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

fn laplace(
    ctx: &Arc<PrimeContext>,
    entry: &dyn Fn(usize, usize) -> Vec<WittScalar>,
    rows: &[usize],
    cols: &[usize],
) -> Vec<WittScalar> {
    if rows.is_empty() {
        return vec![WittScalar::one(ctx)];
    }
    let r = rows[0];
    let mut acc: Vec<WittScalar> = Vec::new();
    for (k, &c) in cols.iter().enumerate() {
        let e = entry(r, c);
        if e.iter().all(|x| x.is_exact_zero()) {
            continue;
        }
        let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = laplace(ctx, entry, &rows[1..], &sub_cols);
        let mut term = poly_mul(ctx, &e, &minor);
        if k % 2 == 1 {
            term = term.iter().map(|x| x.neg()).collect();
        }
        acc = poly_add(ctx, &acc, &term);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<PrimeContext> {
        PrimeContext::new(3, 1, 8, 1).unwrap()
    }

    fn m(c: &Arc<PrimeContext>, rows: &[&[i64]]) -> ScalarMatrix {
        ScalarMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| WittScalar::from_int(c, x)).collect()).collect())
    }

    #[test]
    fn determinant_and_inverse() {
        let c = ctx();
        let a = m(&c, &[&[1, 2, 0], &[3, 1, 1], &[0, 9, 2]]);
        // 1*(2-9) - 2*(6-0) + 0 = -19
        assert_eq!(a.det(), WittScalar::from_int(&c, -19));
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).sub(&ScalarMatrix::identity(&c, 3)).is_zero());
    }

    #[test]
    fn kernel_of_rank_one() {
        let c = ctx();
        let a = m(&c, &[&[1, 2], &[3, 6]]);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        let r0 = WittScalar::from_int(&c, 1).mul(&v[0]).add(&WittScalar::from_int(&c, 2).mul(&v[1]));
        assert!(r0.is_zero());
    }

    #[test]
    fn char_poly_of_companion() {
        let c = ctx();
        let a = m(&c, &[&[0, 3], &[1, 0]]);
        let cp = char_poly(&a);
        assert_eq!(cp[0], WittScalar::from_int(&c, -3));
        assert!(cp[1].is_zero());
        assert_eq!(cp[2], WittScalar::one(&c));
    }
}
