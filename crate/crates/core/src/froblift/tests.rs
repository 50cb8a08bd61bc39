use proptest::prelude::*;

use super::*;
use crate::series::{gauss_valuation, newton_polygon, Q};

fn ctx(p: u64, n: u32) -> Arc<PrimeContext> {
    PrimeContext::new(p, 1, n, 1).unwrap()
}

fn poly(c: &Arc<PrimeContext>, coeffs: &[i64]) -> TruncLaurent {
    TruncLaurent::from_ints(c, 0, coeffs, None, RingTag::Omega).unwrap()
}

fn lift(c: &Arc<PrimeContext>, coeffs: &[i64]) -> FrobeniusLift {
    FrobeniusLift::new(poly(c, coeffs)).unwrap()
}

fn q(a: i64, b: i64) -> Q {
    Q::new(a, b)
}

#[test]
fn validation_rejects_non_lifts() {
    let c = ctx(3, 6);
    assert!(matches!(FrobeniusLift::new(poly(&c, &[0, 1, 0, 1])), Err(Error::InvariantViolation(_))));
    assert!(matches!(FrobeniusLift::new(poly(&c, &[0, 0, 0, 2])), Err(Error::InvariantViolation(_))));
    assert!(FrobeniusLift::new(poly(&c, &[3, 0, 0, 4])).is_ok());
    assert!(FrobeniusLift::cyclotomic(&c).is_zero_centered());
}

#[test]
fn standard_lift_examples() {
    let c = PrimeContext::new(3, 2, 5, 1).unwrap();
    let sigma = FrobeniusLift::standard(&c);
    let t = TruncLaurent::monomial(WittScalar::one(&c), 1, RingTag::Omega);
    assert_eq!(lift_apply(&sigma, &t, 1).unwrap(), TruncLaurent::monomial(WittScalar::one(&c), 3, RingTag::Omega));
    assert_eq!(lift_apply(&sigma, &t, 2).unwrap(), TruncLaurent::monomial(WittScalar::one(&c), 9, RingTag::Omega));
    let x = WittScalar::from_coords(&c, &[2, 5], 5);
    let k = TruncLaurent::constant(x.clone(), RingTag::Omega);
    let img = lift_apply(&sigma, &k, 1).unwrap();
    assert_eq!(img.constant_term(), x.frobenius(1));
    let tinv = TruncLaurent::monomial(WittScalar::one(&c), -2, RingTag::Gamma);
    assert_eq!(sigma.apply(&tinv).unwrap(), TruncLaurent::monomial(WittScalar::one(&c), -6, RingTag::Gamma));
}

#[test]
fn cyclotomic_log_scales_by_p() {
    let p = 3i64;
    let c = ctx(3, 8);
    let h = 12;
    let coeffs: Vec<WittScalar> = (0..h)
        .map(|n| {
            if n == 0 {
                WittScalar::zero(&c)
            } else {
                let sign = if n % 2 == 1 { 1 } else { -1 };
                WittScalar::from_int(&c, sign).div(&WittScalar::from_int(&c, n)).unwrap()
            }
        })
        .collect();
    let log = TruncLaurent::new(&c, 0, coeffs, Some(h), RingTag::Rplus).unwrap();
    let img = FrobeniusLift::cyclotomic(&c).apply(&log).unwrap();
    assert_eq!(img.hi(), Some(h));
    for e in 1..h {
        let got = img.coeff(e).unwrap();
        let want = log.coeff(e).unwrap().mul_int(p);
        assert!(got.congruent(&want), "t^{e}: {got:?} vs {want:?}");
        assert!(got.rel_prec() > 0);
    }
}

#[test]
fn windowed_omega_input_is_capped() {
    let c = ctx(3, 6);
    let sigma = lift(&c, &[0, 3, 0, 1]);
    let f = TruncLaurent::from_ints(&c, 0, &[1, 1, 1], Some(3), RingTag::Omega).unwrap();
    let img = sigma.apply(&f).unwrap();
    assert_eq!(img.hi(), Some(9));
    // below t^3 nothing unknown reaches
    assert!(img.coeff(2).unwrap().abs_prec() >= 6);
    assert!(img.coeff(8).unwrap().abs_prec() <= 3 - 2);
}

/// Remainder of `g` divided by `t - c`, by synthetic division.
fn synthetic_remainder(g: &TruncLaurent, c: &WittScalar) -> WittScalar {
    let mut r = WittScalar::zero(g.ctx());
    for e in (0..g.top()).rev() {
        r = r.mul(c).add(&g.coeff(e).unwrap());
    }
    r
}

#[test]
fn zero_center_shifted_standard_lift() {
    let c = ctx(3, 6);
    let sigma = lift(&c, &[3, 0, 0, 1]);
    let (x, centered) = zero_center(&sigma).unwrap();
    assert!(!x.is_zero());
    assert!(x.valuation() >= 1);
    assert!(centered.is_zero_centered());
    let g = sigma.image().sub(&TruncLaurent::constant(x.frobenius(1), RingTag::Omega));
    assert!(synthetic_remainder(&g, &x).is_zero());
    let (x2, again) = zero_center(&centered).unwrap();
    assert!(x2.is_zero());
    assert_eq!(again, centered);
}

#[test]
fn zero_center_trivial_cases() {
    let c = ctx(5, 4);
    for sigma in [FrobeniusLift::standard(&c), FrobeniusLift::cyclotomic(&c)] {
        let (x, s2) = zero_center(&sigma).unwrap();
        assert!(x.is_exact_zero());
        assert_eq!(s2, sigma);
    }
}

#[test]
fn conjugation_consistency() {
    let c = PrimeContext::new(3, 2, 6, 1).unwrap();
    let a0 = WittScalar::from_coords(&c, &[1, 2], 6).shift(1);
    let img = TruncLaurent::new(
        &c,
        0,
        vec![a0, WittScalar::from_int(&c, 3), WittScalar::zero(&c), WittScalar::one(&c)],
        None,
        RingTag::Omega,
    )
    .unwrap();
    let sigma = FrobeniusLift::new(img).unwrap();
    let (x, centered) = zero_center(&sigma).unwrap();
    let f = TruncLaurent::new(
        &c,
        0,
        vec![WittScalar::from_coords(&c, &[0, 1], 6), WittScalar::one(&c), WittScalar::from_int(&c, 2)],
        None,
        RingTag::Omega,
    )
    .unwrap();
    let lhs = centered.apply(&taylor_shift(&f, &x).unwrap()).unwrap();
    let rhs = taylor_shift(&sigma.apply(&f).unwrap(), &x).unwrap();
    assert!(lhs.congruent(&rhs));
}

#[test]
fn valuation_inequality_on_monomials() {
    let c = ctx(3, 8);
    for sigma in [lift(&c, &[0, 3, 0, 1]), lift(&c, &[0, 3, 9, 1, 3]), FrobeniusLift::cyclotomic(&c)] {
        let qq = sigma.q() as i64;
        for (a, b) in [(1, 7), (1, 3), (1, 2), (2, 3), (1, 1), (3, 2), (5, 1)] {
            let s = q(a, b);
            let r = (s * qq).min(s + 1);
            for h in 1..6 {
                let th = TruncLaurent::monomial(WittScalar::one(&c), h, RingTag::Omega);
                let w = gauss_valuation(&sigma.apply(&th).unwrap(), s);
                assert!(w.value >= r * h, "s = {s}, h = {h}");
            }
        }
    }
}

#[test]
fn inexact_zero_coefficients_keep_their_error_bar() {
    let c = ctx(3, 6);
    let f = TruncLaurent::new(&c, 0, vec![WittScalar::one(&c), WittScalar::zero_mod(&c, 2)], None, RingTag::Omega).unwrap();
    let img = FrobeniusLift::standard(&c).apply(&f).unwrap();
    let top = img.coeff(3).expect("t^3 is inside the window");
    assert!(top.is_zero());
    assert!(!top.is_exact_zero());
}

#[test]
fn negative_powers_under_a_general_lift() {
    let c = ctx(3, 6);
    let sigma = lift(&c, &[0, 3, 0, 1]);
    let t = TruncLaurent::monomial(WittScalar::one(&c), 1, RingTag::Gamma);
    let tinv = TruncLaurent::monomial(WittScalar::one(&c), -1, RingTag::Gamma);
    let prod = sigma.apply(&t).unwrap().mul(&sigma.apply(&tinv).unwrap()).unwrap();
    assert!(prod.congruent(&TruncLaurent::one(&c, RingTag::Gamma)));
}

#[test]
fn radius_maps() {
    let c = ctx(3, 6);
    let std = FrobeniusLift::standard(&c);
    let mu = radius_mu(&std).unwrap();
    let lam = radius_lambda(&std).unwrap();
    for s in [q(1, 5), q(1, 1), q(7, 2)] {
        assert_eq!(mu.eval(s), s / 3);
        assert_eq!(lam.eval(s), s * 3);
    }
    let sigma = lift(&c, &[0, 3, 0, 1]);
    let lam = radius_lambda(&sigma).unwrap();
    let mu = radius_mu(&sigma).unwrap();
    // (s - 1) = s / 3 at s = 3/2
    assert_eq!(mu.breakpoints, vec![(q(3, 2), q(1, 2))]);
    for k in 1..30 {
        let s = q(k, 7);
        assert_eq!(mu.eval(lam.eval(s)), s);
        assert!(lam.eval(s) > s);
    }
    assert_eq!(mu.eval(q(1, 10)), q(1, 30));
    assert!(!lam.beyond_q);
    assert_eq!(radius_mu(&lift(&c, &[3, 0, 0, 1])), Err(Error::NotZeroCentered));
}

#[test]
fn radius_uncertified_marker() {
    let c = ctx(3, 6);
    let img = TruncLaurent::new(
        &c,
        0,
        vec![WittScalar::zero(&c), WittScalar::zero_mod(&c, 2), WittScalar::zero(&c), WittScalar::one(&c)],
        None,
        RingTag::Omega,
    )
    .unwrap();
    let lam = radius_lambda(&FrobeniusLift::new(img).unwrap()).unwrap();
    // 2 + y meets 3 y at y = 1
    assert_eq!(lam.certified_below, Some(q(1, 1)));
    assert!(lam.is_certified(q(1, 2)));
    assert!(!lam.is_certified(q(1, 1)));
}

#[test]
fn min_preimage_examples() {
    let c = ctx(3, 8);
    assert_eq!(min_preimage_valuation(&FrobeniusLift::standard(&c), q(1, 1)).unwrap(), q(1, 3));
    let sigma = lift(&c, &[0, 3, 0, 1]);
    assert_eq!(min_preimage_valuation(&sigma, q(2, 1)).unwrap(), q(1, 1));
    let lam = radius_lambda(&sigma).unwrap();
    for k in 1..21 {
        let v = q(k, 4);
        assert_eq!(lam.eval(min_preimage_valuation(&sigma, v).unwrap()), v);
    }
    // Newton polygon of t^sigma - p^k: the root of largest valuation
    for k in 1..5 {
        let g = sigma.image().sub(&TruncLaurent::constant(WittScalar::one(&c).shift(k), RingTag::Omega));
        let np = newton_polygon(&g).unwrap();
        let top = np.root_valuations().into_iter().map(|(v, _)| v).max().unwrap();
        assert_eq!(min_preimage_valuation(&sigma, q(k, 1)).unwrap(), top);
    }
}

#[test]
fn lift_json_round_trip() {
    let c = ctx(3, 6);
    let sigma = lift(&c, &[3, 3, 0, 1]);
    let doc = sigma.to_doc();
    let text = serde_json::to_string(&doc).unwrap();
    let back = FrobeniusLift::from_doc(&c, &serde_json::from_str(&text).unwrap()).unwrap();
    assert!(back.image().congruent(sigma.image()));
}

fn small_poly(c: &Arc<PrimeContext>, v: &[i64]) -> TruncLaurent {
    poly(c, v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ring_map_on_polynomials(f in prop::collection::vec(-20i64..20, 1..5), g in prop::collection::vec(-20i64..20, 1..5), a1 in 0i64..3) {
        let c = ctx(3, 6);
        let sigma = lift(&c, &[0, 3 * a1, 3, 1]);
        let (f, g) = (small_poly(&c, &f), small_poly(&c, &g));
        let lhs = sigma.apply(&f.mul(&g).unwrap()).unwrap();
        let rhs = sigma.apply(&f).unwrap().mul(&sigma.apply(&g).unwrap()).unwrap();
        prop_assert!(lhs.congruent(&rhs));
    }

    #[test]
    fn zero_center_is_idempotent(a0 in 1i64..8, a1 in 0i64..4) {
        let c = ctx(3, 6);
        let sigma = lift(&c, &[3 * a0, 3 * a1, 0, 1]);
        let (_, s1) = zero_center(&sigma).unwrap();
        let (x, s2) = zero_center(&s1).unwrap();
        prop_assert!(x.is_zero());
        prop_assert_eq!(s1, s2);
    }
}
