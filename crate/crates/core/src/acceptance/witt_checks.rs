use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::counterexample::{ce_init, ce_solution_space_probe, ce_step_bx, run_counterexample, CeConfig, CeReport};
use crate::error::Result;
use crate::field::FiniteField;
use crate::witt::{witt_polynomials, ASTower, LaurentModP, TowerElem, WittRing, WittVec};

fn random_laurent(rng: &mut ChaCha8Rng, f: &Arc<FiniteField>) -> LaurentModP {
    let p = f.p() as i64;
    let terms: Vec<(i64, i64)> = (0..rng.gen_range(0..=3)).map(|_| (rng.gen_range(-2..=4), rng.gen_range(1..p))).collect();
    LaurentModP::from_ints(f, &terms, None)
}

fn random_vec(rng: &mut ChaCha8Rng, f: &Arc<FiniteField>, len: usize) -> Result<WittVec> {
    WittVec::from_components((0..len).map(|_| TowerElem::base(random_laurent(rng, f))).collect())
}

/// Commutativity, associativity, distributivity, `FV = VF = p` and
/// Teichmuller multiplicativity on one triple.
fn triple_ok(r: &WittRing<'_>, x: &WittVec, y: &WittVec, z: &WittVec, a: &LaurentModP, b: &LaurentModP) -> Result<bool> {
    let comm = r.add(x, y)? == r.add(y, x)? && r.mul(x, y)? == r.mul(y, x)?;
    let assoc = r.add(&r.add(x, y)?, z)? == r.add(x, &r.add(y, z)?)? && r.mul(&r.mul(x, y)?, z)? == r.mul(x, &r.mul(y, z)?)?;
    let dist = r.mul(x, &r.add(y, z)?)? == r.add(&r.mul(x, y)?, &r.mul(x, z)?)?;
    let mut px = r.zero();
    for _ in 0..r.table.p() {
        px = r.add(&px, x)?;
    }
    let fv = r.frobenius(&x.verschiebung()) == px && r.frobenius(x).verschiebung() == px;
    let teich = r.mul(&r.teich_base(a.clone()), &r.teich_base(b.clone()))? == r.teich_base(a.mul(b));
    Ok(comm && assoc && dist && fv && teich)
}

pub(super) fn ring_laws(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let len = 4;
    let mut passed = 0;
    let mut symbolic = true;
    for p in [2u64, 3] {
        symbolic &= witt_polynomials(p, len)?.verify_ghost_symbolic()?;
    }
    for i in 0..50 {
        let p = if i % 2 == 0 { 2 } else { 3 };
        let f = Arc::new(FiniteField::standard(p, 1));
        let table = witt_polynomials(p, len)?;
        let tower = ASTower::new(&f, 0, 64);
        let r = WittRing::new(&table, &tower);
        let (x, y, z) = (random_vec(rng, &f, len)?, random_vec(rng, &f, len)?, random_vec(rng, &f, len)?);
        let (a, b) = (random_laurent(rng, &f), random_laurent(rng, &f));
        if triple_ok(&r, &x, &y, &z, &a, &b)? {
            passed += 1;
        }
    }
    Ok((passed == 50 && symbolic, format!("{passed}/50 triples satisfy the ring laws; symbolic ghost identities: {symbolic}")))
}

fn pipeline_summary(rep: &CeReport) -> String {
    format!(
        "p={} L={}: checks {}, e = {:?}, d0 = t^-p {}, v in M {}, slopes generic {{{}}} special {{{}}}",
        rep.config.p,
        rep.config.len,
        if rep.all_ok { "green" } else { "red" },
        rep.e.components.iter().take(rep.e.certified).map(|c| c.unwrap_or(0)).collect::<Vec<_>>(),
        rep.descent.d0_is_t_neg_p,
        rep.descent.v_in_m,
        rep.slopes.generic.join(", "),
        rep.slopes.special.join(", "),
    )
}

pub(super) fn counterexample(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut ok = true;
    let mut special_ok = true;
    let mut parts = Vec::new();
    for (p, len, steps) in [(2u64, 6usize, 4usize), (3, 5, 3)] {
        let rep = run_counterexample(&CeConfig::new(p, len, steps), None)?;
        ok &= rep.all_ok && rep.slopes.generic == ["0", "2"];
        special_ok &= rep.slopes.special == ["0", "2"];
        parts.push(pipeline_summary(&rep));
    }
    let mut detail = parts.join("; ");
    if !special_ok {
        detail.push_str("; the t = 0 fiber has x(0) = 0, so its slopes are {1, 1}, not {0, 2}");
    }
    Ok((ok && special_ok, detail))
}

pub(super) fn solution_probe(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut s = ce_init(&CeConfig::new(2, 6, 4))?;
    for _ in 0..2 {
        s = ce_step_bx(s)?;
    }
    let c = ce_solution_space_probe(&s, 1, 4)?;
    Ok((
        c.solutions == 2 && c.multiples_found,
        format!("{} of {} candidates on window {:?} solve the defect equation", c.solutions, c.candidates, c.window),
    ))
}
