use crate::error::{Error, Result};
use crate::fmodule::{special_slopes, FModule, SeriesMatrix};
use crate::linalg::{char_poly, ScalarMatrix};
use crate::scalar::{teichmuller, WittScalar};
use crate::series::RingTag;

/// Basis at `t = 0` in which `F^m` is `diag(p^{l_i})`.
#[derive(Clone, Debug)]
pub struct DmBasis {
    pub m: usize,
    /// Columns are the new basis vectors in the old coordinates.
    pub basis: ScalarMatrix,
    pub ells: Vec<i64>,
    /// Matrix of `F^m` (semilinear over `sigma^m`) in the new basis.
    pub phi_m: SeriesMatrix,
}

/// Matrix of `F^m` in the given basis: `Phi sigma(Phi) ... sigma^{m-1}(Phi)`.
pub fn iterate_matrix(module: &FModule, m: usize) -> Result<SeriesMatrix> {
    let sigma = module.lift();
    let phi = module.phi().map(|f| f.clone().with_tag(RingTag::Rplus))?;
    let mut acc = phi.clone();
    let mut conj = phi;
    for _ in 1..m {
        conj = conj.frobenius(sigma)?;
        acc = acc.mul(&conj)?;
    }
    let scale = WittScalar::p_power(module.ctx(), module.twist() * m as i64);
    Ok(acc.scale(&scale))
}

/// Unit root of `chi` of valuation `ell` for a slope of multiplicity one,
/// by Newton iteration from the residue root.
fn simple_unit_root(chi: &[WittScalar], ell: i64) -> Option<WittScalar> {
    let ctx = chi[0].ctx().clone();
    let scaled: Vec<WittScalar> = chi.iter().enumerate().map(|(i, c)| c.shift(ell * i as i64)).collect();
    let floor = scaled.iter().filter(|c| !c.is_zero()).map(WittScalar::valuation).min()?;
    let g: Vec<WittScalar> = scaled.iter().map(|c| c.shift(-floor)).collect();
    let field = ctx.residue_field();
    let eq: Vec<(u64, Vec<u64>)> = g
        .iter()
        .enumerate()
        .filter(|(_, c)| c.valuation() == 0)
        .map(|(i, c)| (i as u64, c.residue()))
        .collect();
    let r = field.roots(&eq).into_iter().find(|r| !field.is_zero(r))?;
    let mut x = teichmuller(&ctx, &r);
    for _ in 0..(2 * ctx.n() + 2) {
        let (mut val, mut der) = (WittScalar::zero(&ctx), WittScalar::zero(&ctx));
        for c in g.iter().rev() {
            der = der.mul(&x).add(&val);
            val = val.mul(&x).add(c);
        }
        if val.is_zero() {
            break;
        }
        x = x.sub(&val.div(&der).ok()?);
    }
    Some(x)
}

/// Choose a basis at `t = 0` with `F^m e_i = p^{l_i} e_i mod t`.
pub fn dm_basis_mod_t(module: &FModule) -> Result<DmBasis> {
    let ctx = module.ctx().clone();
    let slopes = special_slopes(module)?;
    let m = slopes.m;
    let phi_m = iterate_matrix(module, m)?;
    let a = phi_m.at_zero();
    let n = module.rank();
    let mut groups: Vec<(i64, usize)> = Vec::new();
    for s in &slopes.slopes {
        let ell = s * num_rational::Ratio::from_integer(m as i64);
        if !ell.is_integer() {
            return Err(Error::NotDiagonalizable(format!("slope {s} has F^{m}-eigenvalue valuation {ell}, not an integer")));
        }
        let ell = ell.to_integer();
        match groups.last_mut() {
            Some((e, k)) if *e == ell => *k += 1,
            _ => groups.push((ell, 1)),
        }
    }
    let mut columns: Vec<Vec<WittScalar>> = Vec::new();
    let mut ells = Vec::new();
    for &(ell, k) in &groups {
        let pl = WittScalar::p_power(&ctx, ell);
        let shifted = a.sub(&ScalarMatrix::diagonal(&vec![pl; n]));
        let ker = shifted.kernel();
        if ker.len() == k {
            columns.extend(ker);
            ells.extend(std::iter::repeat_n(ell, k));
            continue;
        }
        if k == 1 {
            // eigenvalue p^l u with u != 1: rescaling needs sigma^m(a)/a = u^{-1}
            let chi = char_poly(&a);
            let u = simple_unit_root(&chi, ell)
                .ok_or_else(|| Error::NotDiagonalizable(format!("no eigenvalue of valuation {ell} found")))?;
            crate::fmodule::normalize_constant(&u, m as u32)?;
        }
        return Err(Error::NotDiagonalizable(format!(
            "eigenvalue p^{ell} has a {}-dimensional eigenspace but multiplicity {k}",
            ker.len()
        )));
    }
    let basis = ScalarMatrix::from_columns(&columns);
    let inv = basis.inverse().map_err(|_| Error::NotDiagonalizable("eigenvectors are dependent".into()))?;
    let to_series = |s: &ScalarMatrix| {
        SeriesMatrix::constant(s).map(|f| f.clone().with_tag(RingTag::Rplus))
    };
    let new_phi = to_series(&inv)?.mul(&phi_m)?.mul(&to_series(&basis.frobenius(m as i64))?)?;
    Ok(DmBasis { m, basis, ells, phi_m: new_phi })
}
