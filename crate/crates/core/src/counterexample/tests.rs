use super::*;

fn state(p: u64, len: usize) -> CounterexampleState {
    ce_init(&CeConfig::new(p, len, len - 2)).unwrap()
}

#[test]
fn init_p2() {
    let s = state(2, 6);
    let r = s.ring();
    assert_eq!(s.x(), &r.teich_base(LaurentModP::t_pow(s.tower().field(), 2)));
    assert_eq!(s.b(), &r.teich_base(LaurentModP::t_pow(s.tower().field(), 1)));
    // defect at n = 0 is -p^2 [t]
    let want = r.neg(&s.p2(&r.teich_base(LaurentModP::t_pow(s.tower().field(), 1)))).unwrap();
    assert_eq!(s.b_defect().unwrap(), want);
}

#[test]
fn first_step_p2() {
    let s = state(2, 6);
    let s = ce_step_bx(s).unwrap();
    let r = s.ring();
    let minus_t = r.neg(&r.teich_base(LaurentModP::t_pow(s.tower().field(), 1))).unwrap();
    let delta = s.delta().unwrap();
    // Delta_0 = -[t] on the components the defect determines
    for j in 0..4 {
        assert_eq!(delta.component(j), minus_t.component(j));
    }
    let b1 = r.add(&r.teich_base(LaurentModP::t_pow(s.tower().field(), 1)), &minus_t.verschiebung_n(2)).unwrap();
    assert_eq!(s.b(), &b1);
    assert!(s.bx_log()[0].ok());
    assert!(s.b_defect().unwrap().in_v_power(3));
}

#[test]
fn bx_chain_holds() {
    for (p, len) in [(2u64, 6usize), (3, 4)] {
        let mut s = state(p, len);
        for _ in 0..len - 2 {
            s = ce_step_bx(s).unwrap();
        }
        assert!(s.bx_log().iter().all(BxStepLog::ok), "p = {p}: {:?}", s.bx_log());
        assert_eq!(ce_step_bx(s).unwrap_err(), Error::LengthExhausted);
    }
}

#[test]
fn matrix_and_w() {
    let mut s = state(2, 6);
    for _ in 0..3 {
        s = ce_step_bx(s).unwrap();
    }
    let (phi, w, rep) = ce_matrix_and_w(&s).unwrap();
    assert_eq!(rep.rows_ok, [true, true]);
    assert!(rep.det_is_p2);
    assert_eq!(w[1], *s.b());
    assert_eq!(phi[1][1], *s.x());
}

#[test]
fn d_chain_p2() {
    let mut s = state(2, 6);
    assert_eq!(s.d().component(0), &TowerElem::base(LaurentModP::t_pow(s.tower().field(), -2)));
    assert!(s.d().components()[1..].iter().all(TowerElem::is_exact_zero));
    for _ in 0..4 {
        s = ce_step_bx(s).unwrap();
    }
    for _ in 0..4 {
        s = ce_step_d(s).unwrap();
    }
    assert!(s.d_log().iter().all(DStepLog::ok), "{:?}", s.d_log());
    assert_eq!(s.tower().depth(), 0);
    let e = ce_verify_e(&s).unwrap();
    assert_eq!(e.certified, 5);
    assert!(e.in_zp && e.sigma_fixed);
    assert_eq!(e.components[0], Some(1));
    assert!(e.components[5].is_none());
    let dr = ce_verify_descent_and_membership(&s).unwrap();
    assert!(dr.descends && dr.d0_is_t_neg_p && dr.fv_equals_v);
    assert!(!dr.v_in_m);
}

#[test]
fn d_step_needs_bx() {
    let s = state(2, 6);
    assert!(matches!(ce_step_d(s), Err(Error::InvalidParameter(_))));
}

#[test]
fn narrow_window_is_reported() {
    let mut cfg = CeConfig::new(2, 6, 4);
    cfg.window_lo = -2;
    let mut s = ce_init(&cfg).unwrap();
    for _ in 0..4 {
        s = ce_step_bx(s).unwrap();
    }
    let mut err = None;
    for _ in 0..4 {
        match ce_step_d(s.clone()) {
            Ok(next) => s = next,
            Err(e) => {
                err = Some(e);
                break;
            }
        }
    }
    assert_eq!(err, Some(Error::WindowExhausted));
}

#[test]
fn slopes_generic_and_special() {
    let mut s = state(3, 4);
    s = ce_step_bx(s).unwrap();
    let rep = ce_slopes(&s).unwrap();
    assert_eq!(rep.generic, vec!["0", "2"]);
    assert_eq!(rep.special, vec!["1", "1"]);
}

#[test]
fn solution_space() {
    let mut s = state(2, 6);
    for _ in 0..2 {
        s = ce_step_bx(s).unwrap();
    }
    let c = ce_solution_space_probe(&s, 1, 4).unwrap();
    assert_eq!(c.candidates, 16);
    assert_eq!(c.solutions, 2);
    assert!(c.multiples_found);
    assert!(matches!(ce_solution_space_probe(&s, 1, 40), Err(Error::Infeasible(_))));
}

#[test]
fn full_run_p3() {
    let rep = run_counterexample(&CeConfig::new(3, 4, 2), Some((1, 3))).unwrap();
    assert!(rep.all_ok, "{rep:?}");
    assert_eq!(rep.e.components[0], Some(1));
    assert_eq!(rep.probe.unwrap().solutions, 3);
}
