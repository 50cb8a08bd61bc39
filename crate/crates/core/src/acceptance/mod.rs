//! The acceptance suite: one deterministic verdict per criterion.

mod algebra;
mod analytic;
mod witt_checks;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(&mut ChaCha8Rng) -> Result<(bool, String)>;

const CRITERIA: [(u32, &str, Check); 10] = [
    (1, "cyclotomic eigen-identity", analytic::cyclotomic_log),
    (2, "Frobenius lift valuation inequality", analytic::lift_inequality),
    (3, "Dwork diagonalization", algebra::dwork_suite),
    (4, "non-uniqueness witness", algebra::non_uniqueness),
    (5, "Newton and Weierstrass suite", analytic::newton_weierstrass),
    (6, "Witt ring laws", witt_checks::ring_laws),
    (7, "counterexample pipeline", witt_checks::counterexample),
    (8, "solution-space probe", witt_checks::solution_probe),
    (9, "radius maps and minimal preimages", analytic::radius_suite),
    (10, "descent on constructed instances", algebra::descent_instances),
];

pub const CRITERION_COUNT: u32 = CRITERIA.len() as u32;

fn rng_for(seed: u64, id: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (u64::from(id) << 56))
}

/// Run criterion `id` (1-based).
pub fn run_criterion(id: u32, seed: u64) -> Option<CriterionResult> {
    let (id, name, check) = *CRITERIA.iter().find(|c| c.0 == id)?;
    let (passed, detail) = match check(&mut rng_for(seed, id)) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Some(CriterionResult { id, name: name.to_string(), passed, detail })
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    (1..=CRITERION_COUNT).filter_map(|id| run_criterion(id, seed)).collect()
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        format!("[{mark}] {:>2} {}: {}", self.id, self.name, self.detail)
    }
}
