use std::sync::Arc;

use crate::error::{Error, Result};
use crate::froblift::FrobeniusLift;
use crate::linalg::ScalarMatrix;
use crate::scalar::{PrimeContext, WittScalar};
use crate::series::{RingTag, SeriesDoc, TruncLaurent};

/// Square-or-rectangular matrix of series.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesMatrix {
    rows: Vec<Vec<TruncLaurent>>,
}

impl SeriesMatrix {
    pub fn from_rows(rows: Vec<Vec<TruncLaurent>>) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidParameter("ragged matrix".into()));
        }
        Ok(Self { rows })
    }

    pub fn from_docs(ctx: &Arc<PrimeContext>, docs: &[Vec<SeriesDoc>]) -> Result<Self> {
        let rows = docs
            .iter()
            .map(|r| r.iter().map(|d| d.to_series(ctx)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows).map_err(|_| Error::Malformed("ragged matrix".into()))
    }

    pub fn to_docs(&self) -> Vec<Vec<SeriesDoc>> {
        self.rows.iter().map(|r| r.iter().map(SeriesDoc::from_series).collect()).collect()
    }

    pub fn identity(ctx: &Arc<PrimeContext>, n: usize) -> Self {
        Self::diagonal(&vec![TruncLaurent::one(ctx, RingTag::Omega); n], ctx)
    }

    pub fn diagonal(entries: &[TruncLaurent], ctx: &Arc<PrimeContext>) -> Self {
        let n = entries.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { entries[i].clone() } else { TruncLaurent::zero(ctx, RingTag::Omega) })
                    .collect()
            })
            .collect();
        Self { rows }
    }

    /// Constant matrix from scalars.
    pub fn constant(m: &ScalarMatrix) -> Self {
        let rows = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| TruncLaurent::constant(m.get(i, j).clone(), RingTag::Omega)).collect())
            .collect();
        Self { rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn get(&self, i: usize, j: usize) -> &TruncLaurent {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<TruncLaurent>] {
        &self.rows
    }

    pub fn map(&self, f: impl Fn(&TruncLaurent) -> Result<TruncLaurent>) -> Result<Self> {
        let rows = self.rows.iter().map(|r| r.iter().map(&f).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        Ok(Self { rows })
    }

    /// Apply the lift entrywise.
    pub fn frobenius(&self, sigma: &FrobeniusLift) -> Result<Self> {
        self.map(|f| sigma.apply(f))
    }

    /// Matrix of constant terms.
    pub fn at_zero(&self) -> ScalarMatrix {
        ScalarMatrix::from_rows(self.rows.iter().map(|r| r.iter().map(|f| f.constant_term()).collect()).collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ncols() != other.nrows() {
            return Err(Error::InvalidParameter("matrix shapes do not match".into()));
        }
        let ctx = self.ctx();
        let mut rows = Vec::with_capacity(self.nrows());
        for i in 0..self.nrows() {
            let mut row = Vec::with_capacity(other.ncols());
            for j in 0..other.ncols() {
                let mut acc = TruncLaurent::zero(&ctx, RingTag::Omega);
                for k in 0..self.ncols() {
                    acc = acc.add(&self.rows[i][k].mul(&other.rows[k][j])?);
                }
                row.push(acc);
            }
            rows.push(row);
        }
        Ok(Self { rows })
    }

    /// `M v` for a column vector.
    pub fn apply(&self, v: &[TruncLaurent]) -> Result<Vec<TruncLaurent>> {
        let ctx = self.ctx();
        self.rows
            .iter()
            .map(|row| {
                row.iter().zip(v).try_fold(TruncLaurent::zero(&ctx, RingTag::Omega), |acc, (a, x)| Ok(acc.add(&a.mul(x)?)))
            })
            .collect()
    }

    pub fn scale(&self, c: &WittScalar) -> Self {
        Self { rows: self.rows.iter().map(|r| r.iter().map(|f| f.scale(c)).collect()).collect() }
    }

    fn ctx(&self) -> Arc<PrimeContext> {
        self.rows[0][0].ctx().clone()
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> Result<TruncLaurent> {
        if self.nrows() != self.ncols() || self.rows.is_empty() {
            return Err(Error::InvalidParameter("determinant needs a nonempty square matrix".into()));
        }
        let idx: Vec<usize> = (0..self.nrows()).collect();
        self.minor(&idx, &idx)
    }

    /// Determinant of the submatrix on the given rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<TruncLaurent> {
        if rows.len() == 1 {
            return Ok(self.rows[rows[0]][cols[0]].clone());
        }
        let ctx = self.ctx();
        let mut acc = TruncLaurent::zero(&ctx, RingTag::Omega);
        let rest_rows = &rows[1..];
        for (k, &c) in cols.iter().enumerate() {
            let entry = &self.rows[rows[0]][c];
            if entry.is_zero() && entry.is_exact() {
                continue;
            }
            let rest_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = entry.mul(&self.minor(rest_rows, &rest_cols)?)?;
            acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        Ok(acc)
    }
}

/// Increasing `d`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fn go(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, d, cur, out);
            cur.pop();
        }
    }
    go(0, n, d, &mut cur, &mut out);
    out
}
