//! The rank-two Witt F-module with a Frobenius-fixed vector over
//! `W(k((t)))` that does not descend to `W(k[[t]])`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::fmodule::{special_slopes, FModule, SeriesMatrix};
use crate::froblift::FrobeniusLift;
use crate::scalar::{teichmuller, PrimeContext, WittScalar};
use crate::series::{NewtonPolygon, RingTag, TruncLaurent, Q};
use crate::witt::{
    solve_artin_schreier, witt_polynomials, ASTower, LaurentModP, TowerElem, WittPolyTable, WittRing, WittVec,
    WittVecDoc,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CeConfig {
    pub p: u64,
    pub a: usize,
    pub len: usize,
    pub steps: usize,
    pub depth_cap: usize,
    /// Component `i` of `d` may not reach below `window_lo * p^i`.
    pub window_lo: i64,
    /// Cutoff for geometric series in Artin-Schreier solutions.
    pub window_hi: i64,
    /// Largest enumeration the solution-space probe will attempt.
    pub probe_bound: u64,
}

impl CeConfig {
    pub fn new(p: u64, len: usize, steps: usize) -> Self {
        let ps = p.saturating_pow(steps as u32) as i64;
        Self {
            p,
            a: 1,
            len,
            steps,
            depth_cap: crate::witt::DEFAULT_DEPTH_CAP,
            window_lo: -(p as i64) * ps,
            window_hi: ps.saturating_mul((p * p) as i64),
            probe_bound: 1 << 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BxStepLog {
    pub n: usize,
    /// Components `0..=n+1` of the defect vanished before the step.
    pub defect_in: bool,
    /// Components `0..=n+2` vanish after it.
    pub defect_out: bool,
    pub b_stable: bool,
    pub x_stable: bool,
    pub b0_is_t: bool,
    pub x0_is_teich: bool,
}

impl BxStepLog {
    pub fn ok(&self) -> bool {
        self.defect_in && self.defect_out && self.b_stable && self.x_stable && self.b0_is_t && self.x0_is_teich
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DStepLog {
    pub n: usize,
    /// Components `0..n` of the defect vanished before the step.
    pub defect_in: bool,
    /// Components `0..=n` vanish after it.
    pub defect_out: bool,
    pub d_stable: bool,
    /// The Artin-Schreier solution `z_n` satisfies its equation.
    pub z_ok: bool,
    pub tower_depth: usize,
}

impl DStepLog {
    pub fn ok(&self) -> bool {
        self.defect_in && self.defect_out && self.d_stable && self.z_ok
    }
}

#[derive(Clone, Debug)]
pub struct CounterexampleState {
    field: Arc<FiniteField>,
    table: Arc<WittPolyTable>,
    config: CeConfig,
    /// Steps of the `b`, `x` recursion done.
    n: usize,
    x: WittVec,
    b: WittVec,
    delta: Option<WittVec>,
    tower: ASTower,
    /// `d = d_k` with `k = d_index`.
    d: WittVec,
    d_index: usize,
    bx_log: Vec<BxStepLog>,
    d_log: Vec<DStepLog>,
}

impl CounterexampleState {
    pub fn ring(&self) -> WittRing<'_> {
        WittRing::new(&self.table, &self.tower)
    }

    pub fn config(&self) -> &CeConfig {
        &self.config
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &WittVec {
        &self.x
    }

    pub fn b(&self) -> &WittVec {
        &self.b
    }

    /// `Delta` of the last `b`, `x` step.
    pub fn delta(&self) -> Option<&WittVec> {
        self.delta.as_ref()
    }

    pub fn d(&self) -> &WittVec {
        &self.d
    }

    pub fn d_index(&self) -> usize {
        self.d_index
    }

    pub fn tower(&self) -> &ASTower {
        &self.tower
    }

    pub fn bx_log(&self) -> &[BxStepLog] {
        &self.bx_log
    }

    pub fn d_log(&self) -> &[DStepLog] {
        &self.d_log
    }

    fn t_pow(&self, e: i64) -> TowerElem {
        TowerElem::base(LaurentModP::t_pow(&self.field, e))
    }

    fn p2(&self, y: &WittVec) -> WittVec {
        let r = self.ring();
        r.mul_p(&r.mul_p(y))
    }

    /// `-sigma^2(b) + x sigma(b) - p^2 b`.
    pub fn b_defect(&self) -> Result<WittVec> {
        let r = self.ring();
        let sb = r.frobenius(&self.b);
        let lhs = r.sub(&r.mul(&self.x, &sb)?, &r.frobenius(&sb))?;
        r.sub(&lhs, &self.p2(&self.b))
    }

    /// `-p^2 sigma^2(d) + x sigma(d) - d`.
    pub fn d_defect(&self, d: &WittVec) -> Result<WittVec> {
        let r = self.ring();
        let sd = r.frobenius(d);
        let lhs = r.sub(&r.mul(&self.x, &sd)?, &self.p2(&r.frobenius(&sd)))?;
        r.sub(&lhs, d)
    }
}

pub fn ce_init(config: &CeConfig) -> Result<CounterexampleState> {
    if config.len < 3 {
        return Err(Error::InvalidParameter("Witt length must be at least 3".into()));
    }
    let ctx = PrimeContext::new(config.p, config.a, 1, 1)?;
    let field = Arc::new(ctx.residue_field().clone());
    let table = witt_polynomials(config.p, config.len)?;
    let tower = ASTower::new(&field, config.depth_cap, config.window_hi);
    let p = config.p as i64;
    let r = WittRing::new(&table, &tower);
    let x = r.teich_base(LaurentModP::t_pow(&field, p * p - p));
    let b = r.teich_base(LaurentModP::t_pow(&field, 1));
    let d = r.teich_base(LaurentModP::t_pow(&field, -p));
    Ok(CounterexampleState {
        field,
        table,
        config: config.clone(),
        n: 0,
        x,
        b,
        delta: None,
        tower,
        d,
        d_index: 1,
        bx_log: Vec::new(),
        d_log: Vec::new(),
    })
}

/// `p^2 y^{V^n} = V^{n+2}(sigma^2 y)`: read `y` off components `n+2..`.
fn unshift_p2(defect: &WittVec, n: usize) -> Result<WittVec> {
    let field = defect.field().clone();
    let comps = (0..defect.len())
        .map(|j| match defect.components().get(n + 2 + j) {
            None => Ok(TowerElem::zero(&field)),
            Some(c) => {
                if !c.is_generator_free() {
                    return Err(Error::InvariantViolation("defect over k[[t]] involves a tower generator".into()));
                }
                Ok(TowerElem::base(c.base_part().root(2)?))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    WittVec::from_components(comps)
}

pub fn ce_step_bx(mut s: CounterexampleState) -> Result<CounterexampleState> {
    let n = s.n;
    if n + 2 >= s.config.len {
        return Err(Error::LengthExhausted);
    }
    let p = s.config.p as i64;
    let defect = s.b_defect()?;
    let defect_in = defect.in_v_power(n + 2);
    let delta = unshift_p2(&defect, n)?;
    let (b, x) = {
        let r = s.ring();
        let b = r.add(&s.b, &delta.verschiebung_n(n + 2))?;
        let corr = r.mul(&r.teich(s.t_pow(p * p - 2 * p)), &r.mul_p(&delta.verschiebung_n(n + 1)))?;
        (b, r.sub(&s.x, &corr)?)
    };
    let (b_stable, x_stable) = {
        let r = s.ring();
        (r.sub(&b, &s.b)?.in_v_power(n + 2), r.sub(&x, &s.x)?.in_v_power(n + 2))
    };
    s.b = b;
    s.x = x;
    s.delta = Some(delta);
    let defect_out = s.b_defect()?.in_v_power(n + 3);
    let log = BxStepLog {
        n,
        defect_in,
        defect_out,
        b_stable,
        x_stable,
        b0_is_t: s.b.component(0) == &s.t_pow(1),
        x0_is_teich: s.x.component(0) == &s.t_pow(p * p - p),
    };
    s.bx_log.push(log);
    s.n += 1;
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixReport {
    /// Components `0..=n+1` of `F w - p^2 w` vanish, row by row.
    pub rows_ok: [bool; 2],
    pub checked_through: usize,
    /// `det = p^2`.
    pub det_is_p2: bool,
}

/// Matrix `[[0, p^2], [-1, x]]` (row-major), `w = (sigma(b), b)` and the
/// check of `F w = p^2 w`.
pub fn ce_matrix_and_w(s: &CounterexampleState) -> Result<([[WittVec; 2]; 2], [WittVec; 2], MatrixReport)> {
    let r = s.ring();
    let p2 = s.p2(&r.one());
    let phi = [[r.zero(), p2.clone()], [r.minus_one(), s.x.clone()]];
    let w = [r.frobenius(&s.b), s.b.clone()];
    let sw = [r.frobenius(&w[0]), r.frobenius(&w[1])];
    let fw: Vec<WittVec> = phi
        .iter()
        .map(|row| r.add(&r.mul(&row[0], &sw[0])?, &r.mul(&row[1], &sw[1])?))
        .collect::<Result<_>>()?;
    let k = s.n + 2;
    let rows_ok = [r.sub(&fw[0], &s.p2(&w[0]))?.in_v_power(k), r.sub(&fw[1], &s.p2(&w[1]))?.in_v_power(k)];
    let det = r.sub(&r.mul(&phi[0][0], &phi[1][1])?, &r.mul(&phi[0][1], &phi[1][0])?)?;
    Ok((phi, w, MatrixReport { rows_ok, checked_through: k - 1, det_is_p2: det == p2 }))
}

pub fn ce_step_d(mut s: CounterexampleState) -> Result<CounterexampleState> {
    let n = s.d_index;
    if n >= s.config.len {
        return Err(Error::LengthExhausted);
    }
    if s.n < n {
        return Err(Error::InvalidParameter(format!("b and x are built to step {}, need {n}", s.n)));
    }
    let p = s.config.p as i64;
    let defect = s.d_defect(&s.d)?;
    let defect_in = defect.in_v_power(n);
    let pn1 = p.pow(n as u32 + 1);
    let c = defect.component(n).shift(pn1);
    let tower = std::mem::replace(&mut s.tower, ASTower::new(&s.field, 0, 0));
    let (z, tower) = solve_artin_schreier(&c, tower.with_series_hi(s.config.window_hi))?;
    s.tower = tower;
    let z_ok = s.tower.artin_schreier_residual(&z, &c).is_zero();
    let d = {
        let r = s.ring();
        let step = r.mul(&r.teich(s.t_pow(-p)), &r.teich(z).verschiebung_n(n))?;
        r.add(&s.d, &step)?
    };
    for (i, comp) in d.components().iter().enumerate() {
        let floor = s.config.window_lo.saturating_mul(p.saturating_pow(i as u32));
        if comp.valuation().is_some_and(|v| v < floor) {
            return Err(Error::WindowExhausted);
        }
    }
    let d_stable = s.ring().sub(&d, &s.d)?.in_v_power(n);
    let defect_out = s.d_defect(&d)?.in_v_power(n + 1);
    s.d = d;
    s.d_index += 1;
    s.d_log.push(DStepLog { n, defect_in, defect_out, d_stable, z_ok, tower_depth: s.tower.depth() });
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EReport {
    /// Components of `e` that are certified (`0..certified`).
    pub certified: usize,
    /// Per component: `Some(c)` for a certified constant in `F_p`.
    pub components: Vec<Option<u64>>,
    /// Certified components are constants in `F_p`.
    pub in_zp: bool,
    /// `sigma(e) - e` vanishes on the certified components.
    pub sigma_fixed: bool,
    /// `e mod p^certified`.
    pub value: u64,
}

/// `e = sigma(b) d - p^2 b sigma(d)`.
pub fn ce_e(s: &CounterexampleState) -> Result<WittVec> {
    let r = s.ring();
    let lhs = r.mul(&r.frobenius(&s.b), &s.d)?;
    r.sub(&lhs, &s.p2(&r.mul(&s.b, &r.frobenius(&s.d))?))
}

fn certified_index(s: &CounterexampleState) -> usize {
    s.d_index.min(s.n + 2).min(s.config.len)
}

/// Teichmuller lift of `a in F_p` modulo `p^k`.
fn teich_mod(a: u64, p: u64, k: u32) -> u64 {
    let m = p.pow(k) as u128;
    let mut t = a as u128 % m;
    for _ in 0..k {
        let mut acc = 1u128;
        for _ in 0..p {
            acc = acc * t % m;
        }
        t = acc;
    }
    t as u64
}

pub fn ce_verify_e(s: &CounterexampleState) -> Result<EReport> {
    let e = ce_e(s)?;
    let k = certified_index(s);
    let p = s.config.p;
    let components: Vec<Option<u64>> = e
        .components()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if i >= k || !c.is_generator_free() {
                return None;
            }
            let x = c.base_part();
            x.is_prime_field_constant().then(|| x.coeff(0).map_or(0, |v| v[0]))
        })
        .collect();
    let in_zp = components.iter().take(k).all(Option::is_some);
    let r = s.ring();
    let sigma_fixed = r.sub(&r.frobenius(&e), &e)?.in_v_power(k);
    let m = p.pow(k as u32);
    let value = components
        .iter()
        .take(k)
        .enumerate()
        .map(|(i, c)| (p.pow(i as u32) as u128 * teich_mod(c.unwrap_or(0), p, k as u32) as u128 % m as u128) as u64)
        .fold(0u64, |acc, v| ((acc as u128 + v as u128) % m as u128) as u64);
    Ok(EReport { certified: k, components, in_zp, sigma_fixed, value })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    /// Components `0..certified` of `d` contain no tower generator.
    pub descends: bool,
    pub certified: usize,
    /// Component 0 of `d` is `t^{-p}`.
    pub d0_is_t_neg_p: bool,
    /// `v` has entries in `W(k[[t]])`; false is the counterexample.
    pub v_in_m: bool,
    /// Components `0..certified` of `F v - v` vanish.
    pub fv_equals_v: bool,
    pub v: [WittVecDoc; 2],
}

pub fn ce_verify_descent_and_membership(s: &CounterexampleState) -> Result<DescentReport> {
    let k = certified_index(s);
    let p = s.config.p as i64;
    let descends = s.d.components().iter().take(k).all(TowerElem::is_generator_free);
    let d0_is_t_neg_p = s.d.component(0) == &s.t_pow(-p);
    let r = s.ring();
    let v = [s.p2(&r.frobenius(&s.d)), s.d.clone()];
    let v_in_m = v.iter().all(|y| y.components().iter().all(|c| c.valuation().is_none_or(|e| e >= 0)));
    let sv = [r.frobenius(&v[0]), r.frobenius(&v[1])];
    let fv0 = s.p2(&sv[1]);
    let fv1 = r.add(&r.neg(&sv[0])?, &r.mul(&s.x, &sv[1])?)?;
    let fv_equals_v = r.sub(&fv0, &v[0])?.in_v_power(k) && r.sub(&fv1, &v[1])?.in_v_power(k);
    Ok(DescentReport { descends, certified: k, d0_is_t_neg_p, v_in_m, fv_equals_v, v: [v[0].to_doc(), v[1].to_doc()] })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlopeReport {
    /// Slopes over `W(k((t)))`, where `x` is a unit.
    pub generic: Vec<String>,
    /// Slopes of the fiber at `t = 0`.
    pub special: Vec<String>,
}

/// Value in `W(F_q)` of a Witt vector with constant components.
fn constant_witt_value(ctx: &Arc<PrimeContext>, y: &WittVec) -> WittScalar {
    let field = ctx.residue_field();
    let mut acc = WittScalar::zero(ctx);
    for (i, c) in y.components().iter().enumerate() {
        let mut a = c.base_part().coeff(0).unwrap_or_else(|| field.zero());
        for _ in 0..i {
            a = field.pth_root(&a);
        }
        acc = acc.add(&teichmuller(ctx, &a).mul(&WittScalar::p_power(ctx, i as i64)));
    }
    acc
}

pub fn ce_slopes(s: &CounterexampleState) -> Result<SlopeReport> {
    let vx = s.x.first_nonzero().unwrap_or(s.config.len) as i64;
    let np = NewtonPolygon::from_points(&[(0, Q::from_integer(2)), (1, Q::from_integer(vx)), (2, Q::from_integer(0))])?;
    let mut generic: Vec<Q> = np.root_valuations().into_iter().flat_map(|(v, k)| std::iter::repeat_n(v, k as usize)).collect();
    generic.sort();
    let ctx = PrimeContext::new(s.config.p, s.config.a, s.config.len as u32, 1)?;
    let at_zero = s.x.map(|c| TowerElem::base(c.base_part().truncate(1)));
    let x0 = constant_witt_value(&ctx, &at_zero);
    let c = |w: WittScalar| TruncLaurent::constant(w, RingTag::Omega);
    let phi = SeriesMatrix::from_rows(vec![
        vec![c(WittScalar::zero(&ctx)), c(WittScalar::p_power(&ctx, 2))],
        vec![c(WittScalar::from_int(&ctx, -1)), c(x0)],
    ])?;
    let module = FModule::new(FrobeniusLift::standard(&ctx), phi, 0)?;
    let special = special_slopes(&module)?.slopes;
    Ok(SlopeReport { generic: generic.iter().map(Q::to_string).collect(), special: special.iter().map(Q::to_string).collect() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeCount {
    pub n: usize,
    pub window: (i64, i64),
    pub candidates: u64,
    pub solutions: u64,
    /// The residues of the multiples `r p^n d`, `0 <= r < p`, are solutions.
    pub multiples_found: bool,
}

/// Count `D = V^n [y]`, `y` supported on `window`, with
/// `-p^2 sigma^2 D + x sigma D - D = 0 mod V^{n+1}`.
pub fn ce_solution_space_probe(s: &CounterexampleState, n: usize, width: usize) -> Result<ProbeCount> {
    if n + 1 >= s.config.len {
        return Err(Error::LengthExhausted);
    }
    let q = s.field.size();
    let candidates = q.checked_pow(width as u32).filter(|&c| c <= s.config.probe_bound).ok_or(Error::Infeasible(
        q.saturating_pow(width as u32),
    ))?;
    let p = s.config.p as i64;
    let anchor = -p.pow(n as u32 + 1);
    let lo = anchor - width as i64 / 2;
    let window = (lo, lo + width as i64);
    let r = s.ring();
    let mut solutions = Vec::new();
    for idx in 0..candidates {
        let mut k = idx;
        let terms: Vec<(i64, Vec<u64>)> = (0..width as i64)
            .map(|j| {
                let c = s.field.element(k % q);
                k /= q;
                (lo + j, c)
            })
            .collect();
        let y = LaurentModP::new(&s.field, terms, None);
        let dd = r.teich_base(y.clone()).verschiebung_n(n);
        if s.d_defect(&dd)?.in_v_power(n + 1) {
            solutions.push(y);
        }
    }
    // r p^n d = V^n F^n (r d): component n is r t^{-p^{n+1}}
    let multiples_found = (0..s.config.p as i64).all(|m| {
        let y = LaurentModP::from_ints(&s.field, &[(anchor, m)], None);
        solutions.contains(&y)
    });
    Ok(ProbeCount { n, window, candidates, solutions: solutions.len() as u64, multiples_found })
}

#[derive(Clone, Debug, Serialize)]
pub struct CeReport {
    pub config: CeConfig,
    pub bx_steps: Vec<BxStepLog>,
    pub d_steps: Vec<DStepLog>,
    pub tower_depths: Vec<usize>,
    pub matrix: MatrixReport,
    pub e: EReport,
    pub descent: DescentReport,
    pub slopes: SlopeReport,
    pub probe: Option<ProbeCount>,
    pub all_ok: bool,
}

/// Run the full construction and every check.
pub fn run_counterexample(config: &CeConfig, probe: Option<(usize, usize)>) -> Result<CeReport> {
    let mut s = ce_init(config)?;
    for _ in 0..config.steps {
        s = ce_step_bx(s)?;
    }
    for _ in 0..config.steps {
        s = ce_step_d(s)?;
    }
    let (_, _, matrix) = ce_matrix_and_w(&s)?;
    let e = ce_verify_e(&s)?;
    let descent = ce_verify_descent_and_membership(&s)?;
    let slopes = ce_slopes(&s)?;
    let probe = probe.map(|(n, w)| ce_solution_space_probe(&s, n, w)).transpose()?;
    let all_ok = s.bx_log.iter().all(BxStepLog::ok)
        && s.d_log.iter().all(DStepLog::ok)
        && matrix.rows_ok.iter().all(|&b| b)
        && matrix.det_is_p2
        && e.in_zp
        && e.sigma_fixed
        && descent.descends
        && descent.d0_is_t_neg_p
        && !descent.v_in_m
        && descent.fv_equals_v
        && probe.as_ref().is_none_or(|c| c.solutions == config.p && c.multiples_found);
    Ok(CeReport {
        config: config.clone(),
        tower_depths: s.d_log.iter().map(|l| l.tower_depth).collect(),
        bx_steps: s.bx_log,
        d_steps: s.d_log,
        matrix,
        e,
        descent,
        slopes,
        probe,
        all_ok,
    })
}

#[cfg(test)]
mod tests;
