use num_traits::Zero;

use super::DworkSolution;
use crate::series::{gauss_valuation, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeRow {
    pub r: Q,
    /// `w_r(U)` over the known window, `None` when some entry is zero.
    pub w_u: Option<Q>,
    pub w_uinv: Option<Q>,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub rows: Vec<ProbeRow>,
    pub descent: Vec<Q>,
}

/// `r_{i+1} = max(r_i / q, r_i - 1)` from `r0` while above `floor`.
pub fn descent_sequence(r0: Q, q: u64, floor: Q, max_len: usize) -> Vec<Q> {
    let mut out = vec![r0];
    let q = Q::from_integer(q as i64);
    while out.len() < max_len {
        let r = *out.last().unwrap();
        if r <= floor || r <= Q::zero() {
            break;
        }
        out.push((r / q).max(r - 1));
    }
    out
}

fn matrix_w(m: &crate::fmodule::SeriesMatrix, r: Q) -> (Option<Q>, bool) {
    let vals: Vec<_> = m.rows().iter().flatten().filter(|f| !f.is_zero()).map(|f| gauss_valuation(f, r)).collect();
    let w = vals.iter().map(|g| g.value).min();
    let certified = vals.iter().all(|g| g.certified) && m.rows().iter().flatten().all(|f| !f.is_zero() || f.is_exact());
    (w, certified)
}

/// Gauss valuations of `U` and `U^{-1}` at the sampled radii, and the
/// descent sequence from `r0` down to `floor`.
pub fn overconvergence_probe(sol: &DworkSolution, rs: &[Q], r0: Q, floor: Q) -> ProbeReport {
    let rows = rs
        .iter()
        .map(|&r| {
            let (w_u, cu) = matrix_w(&sol.u, r);
            let (w_uinv, ci) = matrix_w(&sol.uinv, r);
            ProbeRow { r, w_u, w_uinv, certified: cu && ci }
        })
        .collect();
    ProbeReport { rows, descent: descent_sequence(r0, sol.q, floor, 64) }
}
