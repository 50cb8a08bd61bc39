use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{DworkProblem, DworkSolution, ProbeReport};
use crate::error::{Error, Result};
use crate::fmodule::{FModule, SeriesMatrix};
use crate::froblift::{FrobeniusLift, LiftDoc};
use crate::scalar::PrimeContext;
use crate::series::{SeriesDoc, Q};

/// A Dwork problem. Without `ells` the matrix is read as an F-module and a
/// basis diagonal mod `t` is chosen first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DworkProblemDoc {
    pub lift: LiftDoc,
    pub phi: Vec<Vec<SeriesDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ells: Option<Vec<i64>>,
    #[serde(default = "one")]
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0: Option<usize>,
    #[serde(default)]
    pub twist: i64,
}

fn one() -> usize {
    1
}

impl DworkProblemDoc {
    pub fn to_problem(&self, ctx: &Arc<PrimeContext>) -> Result<DworkProblem> {
        let lift = FrobeniusLift::from_doc(ctx, &self.lift)?;
        let phi = SeriesMatrix::from_docs(ctx, &self.phi)?;
        match &self.ells {
            Some(ells) => DworkProblem::new(lift, phi, ells.clone(), self.m, self.h0),
            None => Ok(DworkProblem::from_module(&FModule::new(lift, phi, self.twist)?, self.h0)?.0),
        }
    }

    pub fn from_problem(prob: &DworkProblem) -> Self {
        Self {
            lift: prob.lift().to_doc(),
            phi: prob.phi().to_docs(),
            ells: Some(prob.ells().to_vec()),
            m: prob.m(),
            h0: Some(prob.h0()),
            twist: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationRow {
    pub r: String,
    pub w_u: String,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeRowDoc {
    pub r: String,
    pub w_u: Option<String>,
    pub w_uinv: Option<String>,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DworkSolutionDoc {
    pub u: Vec<Vec<SeriesDoc>>,
    pub uinv: Vec<Vec<SeriesDoc>>,
    pub residual: usize,
    pub order: usize,
    pub precision: i64,
    pub valuation_table: Vec<ValuationRow>,
    pub q: u64,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub probe: Vec<ProbeRowDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub descent: Vec<String>,
}

impl DworkSolutionDoc {
    pub fn new(sol: &DworkSolution, probe: Option<&ProbeReport>) -> Self {
        let (probe, descent) = match probe {
            Some(rep) => (
                rep.rows
                    .iter()
                    .map(|row| ProbeRowDoc {
                        r: row.r.to_string(),
                        w_u: row.w_u.map(|w| w.to_string()),
                        w_uinv: row.w_uinv.map(|w| w.to_string()),
                        certified: row.certified,
                    })
                    .collect(),
                rep.descent.iter().map(Q::to_string).collect(),
            ),
            None => (Vec::new(), Vec::new()),
        };
        Self {
            u: sol.u.to_docs(),
            uinv: sol.uinv.to_docs(),
            residual: sol.residual,
            order: sol.order,
            precision: sol.precision,
            valuation_table: sol
                .valuation_table
                .iter()
                .map(|(r, w, c)| ValuationRow { r: r.to_string(), w_u: w.to_string(), certified: *c })
                .collect(),
            q: sol.q,
            m: sol.m,
            probe,
            descent,
        }
    }

    pub fn u(&self, ctx: &Arc<PrimeContext>) -> Result<SeriesMatrix> {
        SeriesMatrix::from_docs(ctx, &self.u)
    }
}

/// Parse `"2,1,1/2"` into rationals.
pub fn parse_probes(s: &str) -> Result<Vec<Q>> {
    s.split(',')
        .map(|x| x.trim().parse::<Q>().map_err(|_| Error::Malformed(format!("bad rational {x:?}"))))
        .collect()
}
