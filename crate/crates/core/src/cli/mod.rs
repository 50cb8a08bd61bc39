//! Command-line front end. Reports are JSON on standard output (or
//! `--output`); progress lines go to standard error.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::acceptance;
use crate::counterexample::{run_counterexample, CeConfig};
use crate::dwork::{dwork_diagonalize, overconvergence_probe, parse_probes, DworkOptions, DworkProblemDoc, DworkSolutionDoc};
use crate::error::Error;
use crate::fmodule::{rank1_normalize, special_slopes, verify_eigenvector, FModule, FModuleDoc, Rank1Doc};
use crate::froblift::{lift_apply, zero_center, FrobeniusLift, LiftDoc};
use crate::scalar::{PrimeContext, WittScalar};
use crate::series::{annulus_split, newton_polygon, weierstrass_prepare, RingTag, ScalarDoc, SeriesDoc, TruncLaurent, Q};

pub const MAX_P: u64 = 13;
pub const MAX_PRECISION: u32 = 64;
pub const MAX_WITT_LEN: usize = 8;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) if !e.is_input_error() => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "frobmod", version, about = "Frobenius lifts, F-modules, Dwork diagonalization and Witt vectors")]
pub struct Cli {
    /// Write the JSON report to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Coefficient ring `W_N(F_{p^a})` and Frobenius power `q = p^s`.
#[derive(Debug, Clone, Args)]
pub struct RingArgs {
    #[arg(long, default_value_t = 3)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub a: usize,
    /// p-adic precision N.
    #[arg(long = "prec", default_value_t = 8)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub s: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Conjugate a Frobenius lift so that t^sigma has no constant term.
    ZeroCenter {
        #[command(flatten)]
        ring: RingArgs,
        /// Lift document.
        #[arg(long)]
        input: PathBuf,
    },
    /// Apply sigma^e to a series.
    ApplyFrob {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        series: PathBuf,
        #[arg(long, default_value_t = 1)]
        iterate: u32,
    },
    /// Newton polygon of a series.
    Newton {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        input: PathBuf,
    },
    /// Weierstrass preparation, or a split across the annulus alpha < v <= beta.
    Weierstrass {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        input: PathBuf,
        /// `alpha,beta` as rationals.
        #[arg(long)]
        annulus: Option<String>,
    },
    /// Normalize a rank-one F-module.
    Rank1 {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        input: PathBuf,
        /// Precision target K; defaults to N.
        #[arg(long)]
        k: Option<u32>,
    },
    /// Slopes of the fiber at t = 0.
    Slopes {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        input: PathBuf,
    },
    /// Diagonalize F^m over R^+ up to order H.
    Dwork {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = crate::dwork::DEFAULT_ORDER)]
        order: usize,
        /// Radii for the Gauss valuation table.
        #[arg(long, default_value = "2,1,1/2,1/4")]
        probe: String,
    },
    /// Check F(v) = p^ell v and membership of v in M.
    VerifyEigen {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        input: PathBuf,
        /// JSON array of series.
        #[arg(long)]
        vector: PathBuf,
        #[arg(long, default_value_t = 0)]
        ell: i64,
    },
    /// Build and verify the Witt vector counterexample.
    WittCe {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 6)]
        len: usize,
        #[arg(long, default_value_t = 4)]
        steps: usize,
        #[arg(long, default_value_t = crate::witt::DEFAULT_DEPTH_CAP)]
        depth_cap: usize,
        /// Run the solution-space probe at this index.
        #[arg(long)]
        probe_order: Option<usize>,
        #[arg(long, default_value_t = 4)]
        probe_width: usize,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run only these criteria (comma separated ids).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

/// A finished command: the report and whether its checks passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub ok: bool,
}

impl Outcome {
    fn new(report: impl Serialize, ok: bool) -> CliResult<Self> {
        let report = serde_json::to_value(report).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(Self { report, ok })
    }

    pub fn exit_code(&self) -> i32 {
        if self.ok {
            0
        } else {
            1
        }
    }
}

fn check_p(p: u64) -> CliResult<()> {
    if !(2..=MAX_P).contains(&p) || !crate::field::is_prime(p) {
        return Err(CliError::Usage(format!("p must be a prime in 2..={MAX_P}, got {p}")));
    }
    Ok(())
}

impl RingArgs {
    pub fn context(&self) -> CliResult<Arc<PrimeContext>> {
        check_p(self.p)?;
        if self.n == 0 || self.n > MAX_PRECISION {
            return Err(CliError::Usage(format!("precision must lie in 1..={MAX_PRECISION}, got {}", self.n)));
        }
        Ok(PrimeContext::new(self.p, self.a, self.n, self.s)?)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.to_owned(), source })
}

fn read_lift(ctx: &Arc<PrimeContext>, path: &Path) -> CliResult<FrobeniusLift> {
    Ok(FrobeniusLift::from_doc(ctx, &read_json::<LiftDoc>(path)?)?)
}

fn read_series(ctx: &Arc<PrimeContext>, path: &Path) -> CliResult<TruncLaurent> {
    Ok(read_json::<SeriesDoc>(path)?.to_series(ctx)?)
}

fn read_module(ctx: &Arc<PrimeContext>, path: &Path) -> CliResult<FModule> {
    Ok(FModule::from_doc(ctx, &read_json::<FModuleDoc>(path)?)?)
}

fn parse_pair(s: &str) -> CliResult<(Q, Q)> {
    match parse_probes(s)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(CliError::Usage(format!("expected alpha,beta, got {s:?}"))),
    }
}

/// Run one command. Errors carry their exit code.
pub fn run(cmd: &Command) -> CliResult<Outcome> {
    match cmd {
        Command::ZeroCenter { ring, input } => {
            let ctx = ring.context()?;
            let sigma = read_lift(&ctx, input)?;
            let (c, centered) = zero_center(&sigma)?;
            Outcome::new(json!({ "c": ScalarDoc::from_scalar(&c, 0), "lift": centered.to_doc() }), centered.is_zero_centered())
        }
        Command::ApplyFrob { ring, input, series, iterate } => {
            let ctx = ring.context()?;
            let sigma = read_lift(&ctx, input)?;
            let f = read_series(&ctx, series)?;
            Outcome::new(SeriesDoc::from_series(&lift_apply(&sigma, &f, *iterate)?), true)
        }
        Command::Newton { ring, input } => {
            let ctx = ring.context()?;
            let np = newton_polygon(&read_series(&ctx, input)?)?;
            let q = |x: &Q| x.to_string();
            Outcome::new(
                json!({
                    "vertices": np.vertices.iter().map(|(e, v)| json!([e, q(v)])).collect::<Vec<_>>(),
                    "slopes": np.slopes.iter().map(|(s, n)| json!([q(s), n])).collect::<Vec<_>>(),
                    "root_valuations": np.root_valuations().iter().map(|(v, n)| json!([q(v), n])).collect::<Vec<_>>(),
                }),
                true,
            )
        }
        Command::Weierstrass { ring, input, annulus } => {
            let ctx = ring.context()?;
            let f = read_series(&ctx, input)?;
            let (g, h, names) = match annulus {
                Some(s) => {
                    let (alpha, beta) = parse_pair(s)?;
                    let (g, h) = annulus_split(&f, alpha, beta)?;
                    (g, h, ["inside", "outside"])
                }
                None => {
                    let (d, u) = weierstrass_prepare(&f)?;
                    (d, u, ["distinguished", "unit"])
                }
            };
            let ok = g.mul(&h)?.sub(&f).is_zero();
            Outcome::new(
                json!({ names[0]: SeriesDoc::from_series(&g), names[1]: SeriesDoc::from_series(&h), "product_ok": ok }),
                ok,
            )
        }
        Command::Rank1 { ring, input, k } => {
            let ctx = ring.context()?;
            let m = read_module(&ctx, input)?;
            if m.rank() != 1 {
                return Err(CliError::Usage(format!("rank1 needs a rank-one module, got rank {}", m.rank())));
            }
            let entry = m.phi().get(0, 0);
            let shift = entry.constant_term().valuation();
            if shift >= ctx.n() as i64 {
                return Err(Error::NotUnit("Phi(0) vanishes".into()).into());
            }
            let c = entry.scale(&WittScalar::p_power(&ctx, -shift));
            let (a, u, rep) = rank1_normalize(m.lift(), &c, k.unwrap_or(ctx.n()))?;
            let ok = rep.fixed_point_ok && rep.eigen_ok;
            let mut doc = serde_json::to_value(Rank1Doc::new(&a, &u, &rep)).map_err(|e| CliError::Usage(e.to_string()))?;
            doc["ell"] = json!(shift + m.twist());
            Outcome::new(doc, ok)
        }
        Command::Slopes { ring, input } => {
            let ctx = ring.context()?;
            let sd = special_slopes(&read_module(&ctx, input)?)?;
            Outcome::new(json!({ "m": sd.m, "slopes": sd.slopes.iter().map(Q::to_string).collect::<Vec<_>>() }), true)
        }
        Command::Dwork { ring, input, order, probe } => {
            let ctx = ring.context()?;
            let prob = read_json::<DworkProblemDoc>(input)?.to_problem(&ctx)?;
            let mut opts = DworkOptions::new(*order);
            opts.probes = parse_probes(probe)?;
            let sol = dwork_diagonalize(&prob, &opts)?;
            let hi = opts.probes.iter().copied().max().unwrap_or(Q::from_integer(1));
            let lo = opts.probes.iter().copied().min().unwrap_or(Q::from_integer(1));
            let report = overconvergence_probe(&sol, &opts.probes, hi, lo);
            eprintln!("dwork: residual {} of {}, certified precision {}, h0 = {}", sol.residual, order, sol.precision, prob.h0());
            for (r, w, c) in &sol.valuation_table {
                eprintln!("  w_{r}(U) = {w}{}", if *c { "" } else { " (uncertified)" });
            }
            let ok = sol.residual >= *order && sol.precision > 0;
            Outcome::new(DworkSolutionDoc::new(&sol, Some(&report)), ok)
        }
        Command::VerifyEigen { ring, input, vector, ell } => {
            let ctx = ring.context()?;
            let m = read_module(&ctx, input)?;
            let v = read_json::<Vec<SeriesDoc>>(vector)?
                .iter()
                .map(|d| d.to_series(&ctx)?.with_tag(RingTag::Gamma))
                .collect::<crate::Result<Vec<_>>>()?;
            let rep = verify_eigenvector(&m, &v, *ell)?;
            let ok = rep.eigen_ok;
            Outcome::new(rep, ok)
        }
        Command::WittCe { p, len, steps, depth_cap, probe_order, probe_width } => {
            check_p(*p)?;
            if *len == 0 || *len > MAX_WITT_LEN {
                return Err(CliError::Usage(format!("len must lie in 1..={MAX_WITT_LEN}, got {len}")));
            }
            let mut cfg = CeConfig::new(*p, *len, *steps);
            cfg.depth_cap = *depth_cap;
            eprintln!("witt-ce: p = {p}, L = {len}, {steps} steps");
            let rep = run_counterexample(&cfg, probe_order.map(|n| (n, *probe_width)))?;
            eprintln!("witt-ce: checks {}", if rep.all_ok { "green" } else { "red" });
            let ok = rep.all_ok;
            Outcome::new(rep, ok)
        }
        Command::Selftest { seed, only } => {
            let ids: Vec<u32> = if only.is_empty() { (1..=acceptance::CRITERION_COUNT).collect() } else { only.clone() };
            let mut results = Vec::new();
            for id in ids {
                let r = acceptance::run_criterion(id, *seed).ok_or_else(|| CliError::Usage(format!("no criterion {id}")))?;
                eprintln!("{}", r.line());
                results.push(r);
            }
            let passed = results.iter().filter(|r| r.passed).count();
            eprintln!("selftest: {passed}/{} criteria pass", results.len());
            let ok = passed == results.len();
            Outcome::new(json!({ "seed": seed, "passed": passed, "total": results.len(), "results": results }), ok)
        }
    }
}

/// Serialize a report the way the binary prints it.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Parse, run and emit; returns the process exit code.
pub fn main_with(cli: &Cli) -> i32 {
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let text = render(&outcome.report);
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{text}"),
    }
    outcome.exit_code()
}
