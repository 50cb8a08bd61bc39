use super::*;
use crate::fmodule::{congruent_mod_pt, rank1_normalize};
use crate::linalg::ScalarMatrix;

fn ctx(p: u64, a: usize, n: u32) -> Arc<PrimeContext> {
    PrimeContext::new(p, a, n, 1).unwrap()
}

fn poly(c: &Arc<PrimeContext>, coeffs: &[i64]) -> TruncLaurent {
    TruncLaurent::from_ints(c, 0, coeffs, None, RingTag::Omega).unwrap()
}

fn mat(rows: Vec<Vec<TruncLaurent>>) -> SeriesMatrix {
    SeriesMatrix::from_rows(rows).unwrap()
}

fn int(c: &Arc<PrimeContext>, x: i64) -> WittScalar {
    WittScalar::from_int(c, x)
}

fn solves(prob: &DworkProblem, u: &SeriesMatrix, r: i64) -> bool {
    check_conjugation(prob, u, r).unwrap()
}

#[test]
fn identity_phi_gives_identity() {
    let c = ctx(3, 1, 6);
    let one = poly(&c, &[1]);
    let zero = poly(&c, &[0]);
    let phi = mat(vec![vec![one.clone(), zero.clone()], vec![zero, poly(&c, &[3])]]);
    let prob = DworkProblem::new(FrobeniusLift::standard(&c), phi, vec![0, 1], 1, None).unwrap();
    let sol = dwork_diagonalize(&prob, &DworkOptions::new(12)).unwrap();
    assert_eq!(sol.residual, 12);
    for i in 0..2 {
        for j in 0..2 {
            let want = if i == j { 1 } else { 0 };
            assert!(sol.u.get(i, j).sub(&poly(&c, &[want])).is_zero());
        }
    }
    assert!(sol.u.rows().iter().flatten().all(TruncLaurent::is_exact));
}

#[test]
fn rank_one_agrees_with_rank1_normalize() {
    let c = ctx(3, 1, 8);
    let sigma = FrobeniusLift::standard(&c);
    let cser = poly(&c, &[1, 1]);
    let prob = DworkProblem::new(sigma.clone(), mat(vec![vec![cser.clone()]]), vec![0], 1, None).unwrap();
    let sol = dwork_diagonalize(&prob, &DworkOptions::new(10)).unwrap();
    assert_eq!(sol.residual, 10);
    // Phi sigma(U) = U means U^{-1} is the rank1 fixed point u = c sigma(u)
    let (_, u, _) = rank1_normalize(&sigma, &cser, 6).unwrap();
    let uinv = sol.uinv.get(0, 0).clone().with_tag(RingTag::Omega).unwrap();
    let direct = sol.u.get(0, 0).clone().with_tag(RingTag::Omega).unwrap();
    assert!(congruent_mod_pt(&uinv, &u, 6) || congruent_mod_pt(&direct, &u, 6));
    assert!(solves(&prob, &sol.u, 10));
}

#[test]
fn upper_triangular_example() {
    let c = ctx(3, 1, 12);
    let phi = mat(vec![vec![poly(&c, &[1]), poly(&c, &[0, 1])], vec![poly(&c, &[0]), poly(&c, &[3])]]);
    let prob = DworkProblem::new(FrobeniusLift::standard(&c), phi, vec![0, 1], 1, None).unwrap();
    let sol = dwork_diagonalize(&prob, &DworkOptions::new(40)).unwrap();
    assert_eq!(sol.residual, 40);
    assert!(solves(&prob, &sol.u, 40));
    assert!(sol.u.get(1, 0).is_zero());
    assert!(sol.u.get(0, 0).sub(&poly(&c, &[1])).is_zero());
    assert!(sol.u.get(1, 1).sub(&poly(&c, &[1])).is_zero());
    // 3 x = x(t^3) + t, so x = t/3 + t^3/9 + t^9/27 + ...
    let x = sol.u.get(0, 1);
    let third = WittScalar::p_power(&c, -1);
    assert!(x.coeff(0).unwrap().is_zero());
    assert!(x.coeff(1).unwrap().sub(&third).is_zero());
    assert!(x.coeff(3).unwrap().sub(&third.mul(&third)).is_zero());
    assert!(x.coeff(2).unwrap().is_zero());
}

#[test]
fn basis_mod_t() {
    let c = ctx(3, 1, 6);
    let phi = mat(vec![vec![poly(&c, &[1]), poly(&c, &[1])], vec![poly(&c, &[0]), poly(&c, &[3])]]);
    let module = FModule::new(FrobeniusLift::standard(&c), phi, 0).unwrap();
    let b = dm_basis_mod_t(&module).unwrap();
    assert_eq!(b.ells, vec![0, 1]);
    let p = &b.basis;
    let a = module.phi().at_zero();
    let conj = p.inverse().unwrap().mul(&a).mul(p);
    let want = ScalarMatrix::diagonal(&[int(&c, 1), int(&c, 3)]);
    assert!(conj.sub(&want).is_zero());
    let (prob, _) = DworkProblem::from_module(&module, None).unwrap();
    assert!(dwork_diagonalize(&prob, &DworkOptions::new(8)).is_ok());
}

#[test]
fn swap_is_not_diagonalizable() {
    let c = ctx(3, 1, 6);
    let phi = mat(vec![vec![poly(&c, &[0]), poly(&c, &[3])], vec![poly(&c, &[1]), poly(&c, &[0])]]);
    let module = FModule::new(FrobeniusLift::standard(&c), phi, 0).unwrap();
    assert!(matches!(dm_basis_mod_t(&module), Err(Error::NotDiagonalizable(_))));
}

#[test]
fn requires_zero_centered_lift() {
    let c = ctx(3, 1, 6);
    let image = TruncLaurent::from_ints(&c, 0, &[3, 0, 0, 1], None, RingTag::Omega).unwrap();
    let lift = FrobeniusLift::new(image).unwrap();
    let phi = mat(vec![vec![poly(&c, &[1])]]);
    assert_eq!(DworkProblem::new(lift, phi, vec![0], 1, None).unwrap_err(), Error::NotZeroCentered);
}

#[test]
fn cyclotomic_solutions_are_not_unique() {
    // sigma(t) = (1+t)^3 - 1 has c = 3, so lambda = 3 * p^{-1} = 1 at (h, i, j) = (1, 1, 0)
    // and x = 0 there: every v in Z_3 solves the step
    let c = ctx(3, 1, 8);
    let lift = FrobeniusLift::cyclotomic(&c);
    let phi = mat(vec![vec![poly(&c, &[3]), poly(&c, &[0, 1])], vec![poly(&c, &[0]), poly(&c, &[1])]]);
    let prob = DworkProblem::new(lift, phi, vec![1, 0], 1, Some(1)).unwrap();
    let base = dwork_diagonalize(&prob, &DworkOptions::new(8)).unwrap();
    let canonical = base.u.get(1, 0).coeff(1).unwrap();
    let mut opts = DworkOptions::new(8);
    opts.overrides.insert((1, 1, 0), canonical.add(&int(&c, 1)));
    let other = dwork_diagonalize(&prob, &opts).unwrap();
    assert_eq!(base.residual, 8);
    assert_eq!(other.residual, 8);
    assert!(!other.u.get(1, 0).sub(base.u.get(1, 0)).is_zero());
    assert!(solves(&prob, &base.u, 8));
    assert!(solves(&prob, &other.u, 8));
    let mut bad = DworkOptions::new(8);
    bad.overrides.insert((1, 0, 1), int(&c, 5));
    assert!(matches!(dwork_diagonalize(&prob, &bad), Err(Error::InvalidParameter(_))));
}

#[test]
fn resuming_from_a_checkpoint_is_deterministic() {
    let c = ctx(3, 1, 10);
    let phi = mat(vec![vec![poly(&c, &[1, 2]), poly(&c, &[0, 1, 1])], vec![poly(&c, &[0, 3]), poly(&c, &[3, 0, 1])]]);
    let prob = DworkProblem::new(FrobeniusLift::standard(&c), phi, vec![0, 1], 1, None).unwrap();
    let mut opts = DworkOptions::new(12);
    opts.keep_history = true;
    let full = dwork_diagonalize(&prob, &opts).unwrap();
    let (h, uh) = full.history[4].clone();
    assert!(h > prob.h0());
    let mut resume = DworkOptions::new(12);
    resume.start = Some((h, uh));
    let again = dwork_diagonalize(&prob, &resume).unwrap();
    assert_eq!(again.residual, full.residual);
    for i in 0..2 {
        for j in 0..2 {
            assert!(again.u.get(i, j).congruent(full.u.get(i, j)));
        }
    }
}

#[test]
fn descent_from_five() {
    let s = descent_sequence(Q::from_integer(5), 3, Q::new(1, 10), 64);
    let want: Vec<Q> = vec![
        Q::from_integer(5),
        Q::from_integer(4),
        Q::from_integer(3),
        Q::from_integer(2),
        Q::from_integer(1),
        Q::new(1, 3),
        Q::new(1, 9),
        Q::new(1, 27),
    ];
    assert_eq!(s, want);
}

#[test]
fn identity_probe_is_certified_zero() {
    let c = ctx(3, 1, 6);
    let phi = mat(vec![vec![poly(&c, &[1])]]);
    let prob = DworkProblem::new(FrobeniusLift::standard(&c), phi, vec![0], 1, None).unwrap();
    let sol = dwork_diagonalize(&prob, &DworkOptions::new(6)).unwrap();
    let rep = overconvergence_probe(&sol, &default_probes(), Q::from_integer(2), Q::new(1, 4));
    for row in &rep.rows {
        assert_eq!(row.w_u, Some(Q::from_integer(0)));
        assert!(row.certified);
    }
    for (_, w, cert) in &sol.valuation_table {
        assert_eq!(*w, Q::from_integer(0));
        assert!(cert);
    }
}
