//! Dwork's trick: a basis over `R^+` in which `F^m` is diagonal.

mod basis;
mod json;
mod probe;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fmodule::{FModule, SeriesMatrix};
use crate::froblift::FrobeniusLift;
use crate::scalar::{solve_sigma_linear, PrimeContext, WittScalar, INF};
use crate::series::{gauss_valuation, RingTag, TruncLaurent, Q};

pub use basis::{dm_basis_mod_t, iterate_matrix, DmBasis};
pub use json::{parse_probes, DworkProblemDoc, DworkSolutionDoc, ProbeRowDoc, ValuationRow};
pub use probe::{descent_sequence, overconvergence_probe, ProbeReport, ProbeRow};

pub const DEFAULT_ORDER: usize = 32;

pub fn default_probes() -> Vec<Q> {
    vec![Q::from_integer(2), Q::from_integer(1), Q::new(1, 2), Q::new(1, 4)]
}

/// Input to [`dwork_diagonalize`]: `phi` is the matrix of `F^m` with
/// `phi = D mod t`, `D = diag(p^{ells})`.
#[derive(Clone, Debug)]
pub struct DworkProblem {
    lift: FrobeniusLift,
    phi: SeriesMatrix,
    ells: Vec<i64>,
    m: usize,
    h0: usize,
    c_m: WittScalar,
}

#[derive(Clone, Debug, Default)]
pub struct DworkOptions {
    /// Target t-adic order `H`.
    pub order: usize,
    pub probes: Vec<Q>,
    /// Replace the canonical solution of entry `(i, j)` at step `h`.
    pub overrides: BTreeMap<(usize, usize, usize), WittScalar>,
    /// Resume from `U_h` (with `U_h^{-1}` recomputed).
    pub start: Option<(usize, SeriesMatrix)>,
    pub keep_history: bool,
}

impl DworkOptions {
    pub fn new(order: usize) -> Self {
        Self { order, probes: default_probes(), ..Self::default() }
    }
}

#[derive(Clone, Debug)]
pub struct DworkSolution {
    pub u: SeriesMatrix,
    pub uinv: SeriesMatrix,
    /// Largest `r` with `U^{-1} Phi sigma^m(U) = D mod t^r` at certified
    /// precision.
    pub residual: usize,
    pub order: usize,
    /// Smallest absolute precision among the coefficients of `U`.
    pub precision: i64,
    /// `(r, w_r(U), certified)`.
    pub valuation_table: Vec<(Q, Q, bool)>,
    /// `U_h` for `h = start..=H` when requested.
    pub history: Vec<(usize, SeriesMatrix)>,
    pub q: u64,
    pub m: usize,
}

impl DworkProblem {
    /// Problem for `phi` (matrix of `F^m`, `phi(0) = diag(p^{ells})`).
    pub fn new(lift: FrobeniusLift, phi: SeriesMatrix, ells: Vec<i64>, m: usize, h0: Option<usize>) -> Result<Self> {
        if !lift.is_zero_centered() {
            return Err(Error::NotZeroCentered);
        }
        let n = ells.len();
        if phi.nrows() != n || phi.ncols() != n || m == 0 {
            return Err(Error::InvalidParameter("Phi, D and m do not fit together".into()));
        }
        let ctx = lift.ctx().clone();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { WittScalar::p_power(&ctx, ells[i]) } else { WittScalar::zero(&ctx) };
                if !phi.get(i, j).constant_term().sub(&want).is_zero() {
                    return Err(Error::InvariantViolation(format!("Phi(0) differs from D at ({i}, {j})")));
                }
            }
        }
        let c = lift.linear_coefficient();
        let mut c_m = c.clone();
        for k in 1..m {
            c_m = c_m.mul(&c.frobenius(k as i64));
        }
        let spread = ells.iter().max().unwrap() - ells.iter().min().unwrap();
        let min_h0 = if c_m.is_zero() || spread == 0 {
            0
        } else {
            (spread + c_m.valuation() - 1) / c_m.valuation()
        } as usize;
        let h0 = match h0 {
            Some(h) if h < min_h0 && !c_m.is_zero() => {
                return Err(Error::InvalidParameter(format!("h0 = {h} violates h0 v(c) >= {spread}")));
            }
            Some(h) => h,
            None => min_h0,
        };
        let phi = phi.map(|f| f.clone().with_tag(RingTag::Rplus))?;
        Ok(Self { lift, phi, ells, m, h0, c_m })
    }

    /// Problem for an F-module, after choosing a basis with
    /// [`dm_basis_mod_t`].
    pub fn from_module(module: &FModule, h0: Option<usize>) -> Result<(Self, DmBasis)> {
        let b = dm_basis_mod_t(module)?;
        let prob = Self::new(module.lift().clone(), b.phi_m.clone(), b.ells.clone(), b.m, h0)?;
        Ok((prob, b))
    }

    pub fn ctx(&self) -> &Arc<PrimeContext> {
        self.lift.ctx()
    }

    pub fn h0(&self) -> usize {
        self.h0
    }

    pub fn c_m(&self) -> &WittScalar {
        &self.c_m
    }

    pub fn ells(&self) -> &[i64] {
        &self.ells
    }

    pub fn phi(&self) -> &SeriesMatrix {
        &self.phi
    }

    pub fn lift(&self) -> &FrobeniusLift {
        &self.lift
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn d_inv(&self) -> SeriesMatrix {
        let ctx = self.ctx();
        let entries: Vec<TruncLaurent> = self
            .ells
            .iter()
            .map(|&l| TruncLaurent::constant(WittScalar::p_power(ctx, -l), RingTag::Rplus))
            .collect();
        SeriesMatrix::diagonal(&entries, ctx)
    }

    fn sigma_m(&self, u: &SeriesMatrix, below: usize) -> Result<SeriesMatrix> {
        u.map(|f| {
            let g = f.truncate(below as i64)?;
            Ok(self.lift.apply_iter(&g, self.m as u32)?.part_below(below as i64))
        })
    }

    /// `U^{-1} Phi sigma^m(U) D^{-1} - I`, exact below `t^below`.
    fn defect(&self, u: &SeriesMatrix, uinv: &SeriesMatrix, below: usize) -> Result<SeriesMatrix> {
        let n = self.ells.len();
        let cut = |x: &SeriesMatrix| x.map(|f| Ok(f.part_below(below as i64)));
        let phi = cut(&self.phi)?;
        let prod = cut(&cut(&uinv.mul(&phi)?)?.mul(&self.sigma_m(u, below)?)?)?.mul(&self.d_inv())?;
        let id = identity(self.ctx(), n);
        SeriesMatrix::from_rows((0..n).map(|i| (0..n).map(|j| prod.get(i, j).sub(id.get(i, j))).collect()).collect())
    }
}

fn identity(ctx: &Arc<PrimeContext>, n: usize) -> SeriesMatrix {
    SeriesMatrix::diagonal(&vec![TruncLaurent::one(ctx, RingTag::Rplus); n], ctx)
}

/// `(I + V t^h)^{-1} mod t^order`.
fn inverse_step(v: &SeriesMatrix, h: usize, order: usize, ctx: &Arc<PrimeContext>) -> Result<SeriesMatrix> {
    let n = v.nrows();
    let step = v.map(|f| Ok(f.shift(h as i64).neg()))?;
    let mut term = identity(ctx, n);
    let mut acc = identity(ctx, n);
    let mut k = h;
    while k < order {
        term = term.mul(&step)?.map(|f| Ok(f.part_below(order as i64)))?;
        acc = add(&acc, &term)?;
        k += h;
    }
    Ok(acc)
}

fn add(a: &SeriesMatrix, b: &SeriesMatrix) -> Result<SeriesMatrix> {
    let n = a.nrows();
    SeriesMatrix::from_rows((0..n).map(|i| (0..a.ncols()).map(|j| a.get(i, j).add(b.get(i, j))).collect()).collect())
}

/// Inverse of `U = I mod t` modulo `t^order`.
fn unipotent_inverse(u: &SeriesMatrix, order: usize, ctx: &Arc<PrimeContext>) -> Result<SeriesMatrix> {
    let n = u.nrows();
    let id = identity(ctx, n);
    let nil = SeriesMatrix::from_rows((0..n).map(|i| (0..n).map(|j| id.get(i, j).sub(u.get(i, j))).collect()).collect())?;
    let mut term = id.clone();
    let mut acc = id;
    for _ in 1..order {
        term = term.mul(&nil)?.map(|f| Ok(f.part_below(order as i64)))?;
        if term.rows().iter().flatten().all(|f| f.is_zero() && f.is_exact()) {
            break;
        }
        acc = add(&acc, &term)?;
    }
    Ok(acc)
}

/// Coefficient of `t^h` in each entry.
fn coefficient_matrix(y: &SeriesMatrix, h: usize) -> Vec<Vec<WittScalar>> {
    y.rows().iter().map(|r| r.iter().map(|f| f.coeff(h as i64).expect("exact below the cut")).collect()).collect()
}

/// Run the iteration `U_{h+1} = U_h (I + V_h t^h)` up to order `H`.
pub fn dwork_diagonalize(prob: &DworkProblem, opts: &DworkOptions) -> Result<DworkSolution> {
    let ctx = prob.ctx().clone();
    let n = prob.ells.len();
    let order = if opts.order == 0 { DEFAULT_ORDER } else { opts.order };
    let (start, mut u) = match &opts.start {
        Some((h, u)) => (*h, u.map(|f| f.part_below(*h as i64).with_tag(RingTag::Rplus))?),
        None => (1, identity(&ctx, n)),
    };
    let mut uinv = unipotent_inverse(&u, order, &ctx)?;
    let mut history = Vec::new();
    if opts.keep_history {
        history.push((start, u.clone()));
    }
    for h in start..order {
        let y = prob.defect(&u, &uinv, h + 1)?;
        // loop invariant: Y_h = 0 mod t^h
        for (i, row) in y.rows().iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                if let Some(e) = (0..h as i64).find(|&e| !f.coeff(e).expect("exact").is_zero()) {
                    return Err(Error::InvariantViolation(format!("defect entry ({i}, {j}) has a t^{e} term at step {h}")));
                }
            }
        }
        let x: Vec<Vec<WittScalar>> =
            coefficient_matrix(&y, h).into_iter().map(|r| r.into_iter().map(|c| c.neg()).collect()).collect();
        let ch = prob.c_m.pow(h as u64);
        let mut v_rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let xij = &x[i][j];
                if !xij.is_exact_zero() && xij.abs_prec() <= 0 && xij.is_zero() {
                    return Err(Error::PrecisionExhausted(h));
                }
                let lambda = ch.mul(&WittScalar::p_power(&ctx, prob.ells[i] - prob.ells[j]));
                let v = match opts.overrides.get(&(h, i, j)) {
                    Some(v) => {
                        let lhs = lambda.mul(&v.frobenius(prob.m as i64)).sub(v);
                        if !lhs.sub(xij).is_zero() {
                            return Err(Error::InvalidParameter(format!("override at step {h}, entry ({i}, {j}) does not solve the step equation")));
                        }
                        v.clone()
                    }
                    None => solve_sigma_linear(&lambda, prob.m as i64, xij)?,
                };
                row.push(TruncLaurent::constant(v, RingTag::Rplus));
            }
            v_rows.push(row);
        }
        let v = SeriesMatrix::from_rows(v_rows)?;
        let step = add(&identity(&ctx, n), &v.map(|f| Ok(f.shift(h as i64)))?)?;
        u = u.mul(&step)?.map(|f| Ok(f.part_below(order as i64)))?;
        uinv = inverse_step(&v, h, order, &ctx)?.mul(&uinv)?.map(|f| Ok(f.part_below(order as i64)))?;
        if opts.keep_history {
            history.push((h + 1, u.clone()));
        }
    }
    let final_defect = prob.defect(&u, &uinv, order)?;
    let residual = (0..order)
        .find(|&e| final_defect.rows().iter().flatten().any(|f| !f.coeff(e as i64).expect("exact").is_zero()))
        .unwrap_or(order);
    let precision = u
        .rows()
        .iter()
        .flatten()
        .flat_map(|f| f.terms().map(|(_, c)| c.abs_prec()).collect::<Vec<_>>())
        .min()
        .unwrap_or(INF);
    let exact = residual == order && prob.phi.rows().iter().flatten().all(|f| f.is_exact()) && is_exact_solution(prob, &u)?;
    let window = |m: &SeriesMatrix| m.map(|f| if exact { Ok(f.clone()) } else { f.with_hi(Some(order as i64)) });
    let u = window(&u)?;
    let uinv = window(&uinv)?;
    let valuation_table = opts
        .probes
        .iter()
        .map(|&r| {
            let vals: Vec<_> = u.rows().iter().flatten().map(|f| gauss_valuation(f, r)).collect();
            let w = vals.iter().map(|g| g.value).min().unwrap_or(Q::from_integer(INF));
            (r, w, vals.iter().all(|g| g.certified))
        })
        .collect();
    Ok(DworkSolution { u, uinv, residual, order, precision, valuation_table, history, q: prob.lift.q(), m: prob.m })
}

/// `Phi sigma^m(U) = U D mod t^r`, coefficient by coefficient at the
/// certified precision of each coefficient.
pub fn check_conjugation(prob: &DworkProblem, u: &SeriesMatrix, r: i64) -> Result<bool> {
    let ctx = prob.ctx();
    let su = u.map(|f| Ok(prob.lift.apply_iter(&f.part_below(r), prob.m as u32)?.part_below(r)))?;
    let lhs = prob.phi.mul(&su)?;
    let d: Vec<TruncLaurent> =
        prob.ells.iter().map(|&l| TruncLaurent::constant(WittScalar::p_power(ctx, l), RingTag::Rplus)).collect();
    let rhs = u.mul(&SeriesMatrix::diagonal(&d, ctx))?;
    let n = u.nrows();
    Ok((0..n).all(|i| {
        (0..n).all(|j| {
            let diff = lhs.get(i, j).sub(rhs.get(i, j));
            (0..r).all(|e| diff.coeff(e).is_none_or(|c| c.is_zero()))
        })
    }))
}

/// `U` exact and `Phi sigma^m(U) = U D` as exact series.
fn is_exact_solution(prob: &DworkProblem, u: &SeriesMatrix) -> Result<bool> {
    let ctx = prob.ctx();
    let su = u.map(|f| prob.lift.apply_iter(f, prob.m as u32))?;
    if su.rows().iter().flatten().any(|f| !f.is_exact()) {
        return Ok(false);
    }
    let lhs = prob.phi.mul(&su)?;
    let d: Vec<TruncLaurent> =
        prob.ells.iter().map(|&l| TruncLaurent::constant(WittScalar::p_power(ctx, l), RingTag::Rplus)).collect();
    let rhs = u.mul(&SeriesMatrix::diagonal(&d, ctx))?;
    let n = u.nrows();
    Ok((0..n).all(|i| (0..n).all(|j| lhs.get(i, j).sub(rhs.get(i, j)).is_zero())))
}

#[cfg(test)]
mod tests;
