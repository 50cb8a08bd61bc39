use super::*;

fn ctx(p: u64, n: u32) -> Arc<PrimeContext> {
    PrimeContext::new(p, 1, n, 1).unwrap()
}

fn poly(c: &Arc<PrimeContext>, coeffs: &[i64]) -> TruncLaurent {
    TruncLaurent::from_ints(c, 0, coeffs, None, RingTag::Omega).unwrap()
}

fn q(a: i64, b: i64) -> Q {
    Q::new(a, b)
}

#[test]
fn product_window_rule() {
    let c = ctx(3, 6);
    let f = TruncLaurent::from_ints(&c, 0, &[1, 2, 3], Some(5), RingTag::Omega).unwrap();
    let g = TruncLaurent::from_ints(&c, 2, &[1, 1], Some(6), RingTag::Omega).unwrap();
    let h = f.mul(&g).unwrap();
    assert_eq!((h.lo(), h.hi()), (2, Some(6)));
    let t = TruncLaurent::monomial(WittScalar::one(&c), 1, RingTag::Gamma);
    let tinv = TruncLaurent::monomial(WittScalar::one(&c), -1, RingTag::Gamma);
    assert_eq!(t.mul(&tinv).unwrap(), TruncLaurent::one(&c, RingTag::Gamma));
}

#[test]
fn invert_one_minus_t() {
    let c = ctx(5, 6);
    let f = TruncLaurent::from_ints(&c, 0, &[1, -1], Some(10), RingTag::Omega).unwrap();
    let g = f.invert().unwrap();
    for e in 0..10 {
        assert_eq!(g.coeff(e).unwrap(), WittScalar::one(&c));
    }
    assert!(f.mul(&g).unwrap().congruent(&TruncLaurent::one(&c, RingTag::Omega)));
}

#[test]
fn invert_monomial_in_gamma() {
    let c = ctx(3, 6);
    let t = TruncLaurent::monomial(WittScalar::one(&c), 1, RingTag::Gamma);
    let inv = t.invert().unwrap();
    assert_eq!(inv.coeff(-1).unwrap(), WittScalar::one(&c));
    assert!(inv.coeff(0).unwrap().is_zero());
}

#[test]
fn invert_one_plus_t_over_p() {
    // (1 + t/p)^{-1} = (p/t) (1 + p/t)^{-1} = sum_i (-1)^i (p/t)^{i+1}
    let c = ctx(3, 8);
    let f = TruncLaurent::new(&c, 0, vec![WittScalar::one(&c), WittScalar::one(&c).shift(-1)], None, RingTag::Gamma)
        .unwrap();
    let g = f.invert_within(4).unwrap();
    for i in 0..6i64 {
        let expect = WittScalar::from_int(&c, if i % 2 == 0 { 1 } else { -1 }).shift(i + 1);
        let got = g.coeff(-(i + 1)).unwrap();
        assert!(got.congruent(&expect), "coefficient of t^{}: {got:?}", -(i + 1));
    }
    assert!(g.coeff(0).unwrap().is_zero());
}

#[test]
fn gauss_examples() {
    let c = ctx(3, 6);
    let t = poly(&c, &[0, 1]);
    assert_eq!(gauss_valuation(&t, q(2, 3)), GaussValue { value: q(2, 3), certified: true, lower_bound: Some(q(2, 3)) });
    let f = poly(&c, &[3, 0, 1]);
    assert_eq!(gauss_valuation(&f, q(1, 4)), GaussValue { value: q(1, 2), certified: true, lower_bound: Some(q(1, 2)) });
    let w = TruncLaurent::from_ints(&c, 0, &[3, 0, 1], Some(3), RingTag::Rplus).unwrap();
    assert!(!gauss_valuation(&w, q(1, 4)).certified);
}

#[test]
fn newton_examples() {
    let c = ctx(3, 6);
    let np = newton_polygon(&poly(&c, &[1, 1])).unwrap();
    assert_eq!(np.slopes, vec![(q(0, 1), 1)]);
    let np = newton_polygon(&poly(&c, &[3, 1])).unwrap();
    assert_eq!(np.slopes, vec![(q(-1, 1), 1)]);
    let np = newton_polygon(&poly(&c, &[3, 3, 1])).unwrap();
    assert_eq!(np.vertices, vec![(0, q(1, 1)), (2, q(0, 1))]);
    assert_eq!(np.slopes, vec![(q(-1, 2), 2)]);
    assert_eq!(newton_polygon(&TruncLaurent::zero(&c, RingTag::Omega)), Err(Error::ZeroSeries));
}

#[test]
fn weierstrass_examples() {
    let c = ctx(3, 8);
    let (d, u) = weierstrass_prepare(&poly(&c, &[-3, 1])).unwrap();
    assert_eq!(d, poly(&c, &[-3, 1]));
    assert_eq!(u, poly(&c, &[1]));
    let (d, u) = weierstrass_prepare(&poly(&c, &[1, 1])).unwrap();
    assert_eq!(d, poly(&c, &[1]));
    assert_eq!(u, poly(&c, &[1, 1]));
    let f = poly(&c, &[3, 3, 1]);
    let (d, u) = weierstrass_prepare(&f).unwrap();
    assert!(d.mul(&u).unwrap().congruent(&f));
    assert_eq!(weierstrass_prepare(&poly(&c, &[3, 9])), Err(Error::NotPrepared));
}

#[test]
fn weierstrass_on_series_window() {
    let c = ctx(3, 8);
    // p + p t + t^2 + t^3 + ... on [0, 20)
    let mut coeffs = vec![3, 3];
    coeffs.extend(std::iter::repeat_n(1, 18));
    let f = TruncLaurent::from_ints(&c, 0, &coeffs, Some(20), RingTag::Omega).unwrap();
    let (d, u) = weierstrass_prepare(&f).unwrap();
    assert_eq!(d.top(), 3);
    assert!(d.mul(&u).unwrap().congruent(&f));
}

#[test]
fn annulus_split_example() {
    let c = ctx(3, 10);
    let a = poly(&c, &[-3, 1]);
    let b = poly(&c, &[-3, 0, 1]);
    let f = a.mul(&b).unwrap();
    let (g, h) = annulus_split(&f, q(1, 3), q(2, 3)).unwrap();
    assert!(g.congruent(&b));
    assert!(h.congruent(&a));
    let sq = poly(&c, &[-9, 0, 1]);
    let (g, h) = annulus_split(&sq, q(0, 1), q(1, 1)).unwrap();
    assert!(g.congruent(&sq));
    assert!(h.congruent(&poly(&c, &[1])));
    assert!(matches!(annulus_split(&sq, q(2, 1), q(3, 1)), Err(Error::NoSplit(_))));
}

#[test]
fn canonical_factor_examples() {
    let c = ctx(3, 6);
    let t2 = TruncLaurent::monomial(WittScalar::one(&c), 2, RingTag::Gamma);
    let cf = laurent_canonical_factor(&t2).unwrap();
    assert_eq!((cf.c.clone(), cf.n), (WittScalar::one(&c), 2));
    assert!(cf.u.congruent(&poly(&c, &[1])));
    let f = TruncLaurent::from_ints(&c, 1, &[3, 3], None, RingTag::Gamma).unwrap();
    let cf = laurent_canonical_factor(&f).unwrap();
    assert!(cf.c.congruent(&WittScalar::from_int(&c, 3)));
    assert_eq!(cf.n, 1);
    assert!(cf.u.congruent(&poly(&c, &[1, 1])));
    assert!(cf.b.congruent(&TruncLaurent::one(&c, RingTag::Gamma)));
    let f = TruncLaurent::from_ints(&c, 0, &[3, 1], None, RingTag::Gamma).unwrap();
    let cf = laurent_canonical_factor(&f).unwrap();
    assert_eq!(cf.n, 1);
    assert!(cf.b.coeff(-1).unwrap().congruent(&WittScalar::from_int(&c, 3)));
    assert!(cf.product().unwrap().congruent(&f));
}

#[test]
fn canonical_factor_mixed_tail() {
    let c = ctx(3, 6);
    let f = TruncLaurent::from_ints(&c, -2, &[9, 3, 2, 1, 1], Some(12), RingTag::Gamma).unwrap();
    let cf = laurent_canonical_factor(&f).unwrap();
    assert_eq!(cf.n, 0);
    assert!(cf.u.constant_term().congruent(&WittScalar::one(&c)));
    for (e, x) in cf.b.terms() {
        if e < 0 {
            assert!(x.valuation() >= 1);
        }
    }
    assert!(cf.product().unwrap().congruent(&f));
}
