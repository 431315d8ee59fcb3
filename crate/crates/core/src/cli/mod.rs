//! Command-line front end. [`run`] parses arguments, writes the report to
//! `out` and diagnostics to `err`, and returns the process exit code.

mod selftest;

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::algebra::{AlgebraError, RingR};
use crate::cross_balance::{cross_balance_run, AuxProvider, CbOutcome, CrossConfig, CrossError, GraphStep, RoundRecord};
use crate::driver::{factor_driver, DriverError, FactorReport};
use crate::field::{FieldCtx, FpElem};
use crate::oracle::{check_engine, d_set_sequence, RootedInstance, SurveyMode, SurveyResult};
use crate::poly::DensePoly;
use crate::splitter::endomorphism_hook;
use crate::square_balance::{square_balance_test, SbOutcome};

pub const SCHEMA_VERSION: u32 = 1;

pub mod exit {
    pub const OK: i32 = 0;
    pub const MISMATCH: i32 = 1;
    pub const FAILURE: i32 = 2;
    pub const INVALID_INPUT: i32 = 3;
    pub const REGIME: i32 = 4;
    pub const DEFECT: i32 = 5;
}

#[derive(Parser, Debug)]
#[command(name = "cbfactor", version, about = "Deterministic root-balance splitting of polynomials over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor a polynomial into linear factors and a root-free remainder.
    Factor(RunArgs),
    /// Run the square-balance test on a squarefree, completely splitting input.
    SbTest(RunArgs),
    /// Run the multi-round refinement loop without fallback.
    CbTest(RunArgs),
    /// Print neighbourhood sets and graphs from explicit roots.
    Oracle(OracleArgs),
    /// Count square-balanced root sets.
    Survey(SurveyArgs),
    /// Run the built-in golden examples.
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Aux {
    Power,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Args, Debug, Clone)]
struct InputArgs {
    /// Prime modulus.
    #[arg(long)]
    modulus: u64,
    /// Coefficients, lowest degree first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "roots")]
    coeffs: Option<Vec<i64>>,
    /// Roots; the input is their product of linear factors.
    #[arg(long, value_delimiter = ',', required_unless_present = "coeffs")]
    roots: Option<Vec<u64>>,
}

#[derive(Args, Debug, Clone)]
struct EngineArgs {
    /// Round budget (default 4 * ceil(log2 n) + 4).
    #[arg(long)]
    k: Option<usize>,
    /// Small-degree cutoff.
    #[arg(long, default_value_t = 1)]
    c: usize,
    #[arg(long, value_enum, default_value_t = Aux::Power)]
    aux: Aux,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    modified_rule: bool,
}

impl EngineArgs {
    fn config(&self) -> CrossConfig {
        let provider = match self.aux {
            Aux::Power => AuxProvider::Power,
            Aux::Random => AuxProvider::SeededRandom { seed: self.seed },
        };
        CrossConfig { k: self.k, c: self.c, provider, modified_rule: self.modified_rule }
    }
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    allow_fallback: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug, Clone)]
struct OracleArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    engine: EngineArgs,
    /// Number of rounds to show.
    #[arg(long, default_value_t = 1)]
    rounds: usize,
    /// Also run the engine and diff it against the oracle.
    #[arg(long)]
    check: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug, Clone)]
struct SurveyArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    mode: Mode,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// A failure mapped to an exit code and a message.
struct Fail(i32, String);

impl From<crate::field::FieldError> for Fail {
    fn from(e: crate::field::FieldError) -> Self {
        Fail(exit::INVALID_INPUT, e.to_string())
    }
}

impl From<crate::oracle::OracleError> for Fail {
    fn from(e: crate::oracle::OracleError) -> Self {
        Fail(exit::INVALID_INPUT, e.to_string())
    }
}

impl From<AlgebraError> for Fail {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::PTooSmall { .. } => Fail(exit::REGIME, e.to_string()),
            _ => Fail(exit::INVALID_INPUT, e.to_string()),
        }
    }
}

impl From<CrossError> for Fail {
    fn from(e: CrossError) -> Self {
        match e {
            CrossError::Algebra(a) => a.into(),
            CrossError::ParameterRegime { .. } | CrossError::PTooSmallForNodes { .. } => Fail(exit::REGIME, e.to_string()),
            CrossError::EvenDegree(_) | CrossError::DegreeTooSmall(_) | CrossError::BadConfig => {
                Fail(exit::INVALID_INPUT, e.to_string())
            }
            _ => Fail(exit::DEFECT, e.to_string()),
        }
    }
}

impl From<DriverError> for Fail {
    fn from(e: DriverError) -> Self {
        match e {
            DriverError::ParameterRegime { .. } => Fail(exit::REGIME, e.to_string()),
            DriverError::ConstantInput => Fail(exit::INVALID_INPUT, e.to_string()),
            DriverError::Cross(c) => c.into(),
            DriverError::Algebra(a) => a.into(),
            DriverError::CrossBalanceFailure { .. } => Fail(exit::FAILURE, e.to_string()),
            _ => Fail(exit::DEFECT, e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputEcho {
    pub p: u64,
    pub coeffs: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<u64>>,
}

struct Input {
    ctx: FieldCtx,
    f: DensePoly,
    echo: InputEcho,
}

impl InputArgs {
    fn parse(&self) -> Result<Input, Fail> {
        let ctx = FieldCtx::new(self.modulus)?;
        let (f, roots) = match (&self.coeffs, &self.roots) {
            (Some(c), _) => (DensePoly::from_i64s(ctx, c), None),
            (None, Some(r)) => {
                let elems: Vec<FpElem> = r.iter().map(|&v| ctx.elem(v)).collect();
                (DensePoly::from_roots(ctx, &elems), Some(elems.iter().map(|e| e.value()).collect()))
            }
            (None, None) => return Err(Fail(exit::INVALID_INPUT, "one of --coeffs or --roots is required".into())),
        };
        if f.degree().is_none_or(|d| d == 0) {
            return Err(Fail(exit::INVALID_INPUT, "input must have degree at least 1".into()));
        }
        let echo = InputEcho { p: ctx.p(), coeffs: f.coeff_values(), roots };
        Ok(Input { ctx, f, echo })
    }

    fn instance(&self) -> Result<RootedInstance, Fail> {
        let ctx = FieldCtx::new(self.modulus)?;
        let roots = self
            .roots
            .as_ref()
            .ok_or_else(|| Fail(exit::INVALID_INPUT, "this command needs --roots".into()))?;
        Ok(RootedInstance::new(ctx, roots.iter().map(|&r| ctx.elem(r)).collect())?)
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::INVALID_INPUT } else { exit::OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Factor(a) => cmd_factor(a, out),
        Command::SbTest(a) => cmd_sb_test(a, out),
        Command::CbTest(a) => cmd_cb_test(a, out),
        Command::Oracle(a) => cmd_oracle(a, out),
        Command::Survey(a) => cmd_survey(a, out),
        Command::Selftest => Ok(selftest::run(out)),
    };
    match result {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn coeffs(p: &DensePoly) -> Vec<u64> {
    p.coeff_values()
}

fn emit_json(out: &mut dyn Write, value: &serde_json::Value) {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn graph_text(g: &Option<GraphStep>) -> String {
    match g {
        None => "-".into(),
        Some(GraphStep::Balanced { degree }) => format!("balanced t'={degree}"),
        Some(GraphStep::Refined { degree }) => format!("refined t'={degree}"),
        Some(GraphStep::Unchanged { degree }) => format!("unchanged t'={degree}"),
    }
}

fn trace_text(out: &mut dyn Write, trace: &[RoundRecord]) {
    for r in trace {
        let aux: Vec<String> = r.aux.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "  round {}: aux {} | {} | {:?}", r.round, aux.join(","), graph_text(&r.graph), r.event);
    }
}

fn factor_outcome(report: &FactorReport) -> serde_json::Value {
    let factors: Vec<serde_json::Value> = report
        .factors
        .iter()
        .map(|lf| {
            let lin = DensePoly::linear(*report.remainder.ctx(), lf.root);
            json!({ "factor": coeffs(&lin), "root": lf.root, "multiplicity": lf.multiplicity })
        })
        .collect();
    json!({ "status": "factored", "factors": factors, "remainder": coeffs(&report.remainder) })
}

fn cmd_factor(a: &RunArgs, out: &mut dyn Write) -> Result<i32, Fail> {
    let input = a.input.parse()?;
    let cfg = a.engine.config();
    let start = Instant::now();
    let seed = a.engine.seed;
    let base = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "factor",
        "input": input.echo,
        "config": cfg,
        "allow_fallback": a.allow_fallback,
        "seed": seed,
    });
    match factor_driver(&input.f, cfg, a.allow_fallback, seed) {
        Ok(report) => {
            let ok = report.multiply_back() == input.f.monic();
            if !ok {
                return Err(Fail(exit::DEFECT, "factors do not multiply back to the input".into()));
            }
            match a.format {
                Format::Json => {
                    let mut v = base;
                    v["outcome"] = factor_outcome(&report);
                    v["multiply_back_ok"] = json!(ok);
                    v["trace"] = json!(report.traces);
                    v["fallback_used"] = json!(report.fallback_used);
                    v["timing_ms"] = json!(elapsed_ms(start));
                    emit_json(out, &v);
                }
                Format::Text => {
                    let _ = writeln!(out, "p = {}, f = {}", input.ctx.p(), input.f.monic());
                    for lf in &report.factors {
                        let lin = DensePoly::linear(input.ctx, lf.root);
                        let _ = writeln!(out, "factor {} (root {}) multiplicity {}", lin.to_text(), lf.root, lf.multiplicity);
                    }
                    let _ = writeln!(out, "remainder {}", report.remainder.to_text());
                    for t in &report.traces {
                        let m: Vec<String> = t.modulus.iter().map(u64::to_string).collect();
                        let _ = writeln!(out, "piece {} via {:?}{}", m.join(","), t.route,
                            t.fallback.map(|r| format!(" ({r:?})")).unwrap_or_default());
                        trace_text(out, &t.rounds);
                    }
                    let _ = writeln!(out, "fallback used: {}", report.fallback_used);
                }
            }
            Ok(exit::OK)
        }
        Err(DriverError::CrossBalanceFailure { degree, modulus, trace }) => {
            match a.format {
                Format::Json => {
                    let mut v = base;
                    v["outcome"] = json!({ "status": "cross_balance_failure", "degree": degree, "modulus": modulus });
                    v["trace"] = json!([{ "modulus": modulus, "route": "cross_balance", "rounds": trace, "fallback": null }]);
                    v["fallback_used"] = json!(false);
                    v["timing_ms"] = json!(elapsed_ms(start));
                    emit_json(out, &v);
                }
                Format::Text => {
                    let _ = writeln!(out, "cross-balance failure on degree {degree} piece");
                    trace_text(out, &trace);
                }
            }
            Ok(exit::FAILURE)
        }
        Err(e) => Err(e.into()),
    }
}

fn rpoly_json(h: &crate::algebra::RPoly) -> Vec<Vec<u64>> {
    h.coeffs().iter().map(coeffs).collect()
}

fn cmd_sb_test(a: &RunArgs, out: &mut dyn Write) -> Result<i32, Fail> {
    let input = a.input.parse()?;
    let start = Instant::now();
    let ring = RingR::new(input.f.monic())?;
    let outcome = square_balance_test(&ring)?;
    match a.format {
        Format::Json => {
            let res = match &outcome {
                SbOutcome::Balanced { h, t } => json!({ "status": "balanced", "t": t, "h": rpoly_json(h) }),
                SbOutcome::Split(c) => json!({ "status": "split", "factor": coeffs(c.factor()) }),
            };
            emit_json(out, &json!({
                "schema_version": SCHEMA_VERSION,
                "command": "sb-test",
                "input": input.echo,
                "outcome": res,
                "timing_ms": elapsed_ms(start),
            }));
        }
        Format::Text => {
            let _ = match &outcome {
                SbOutcome::Balanced { h, t } => {
                    let hs: Vec<String> = h.coeffs().iter().map(DensePoly::to_text).collect();
                    writeln!(out, "Balanced t={t}\nh: [{}]", hs.join("; "))
                }
                SbOutcome::Split(c) => writeln!(out, "Split {}", c.factor().to_text()),
            };
        }
    }
    Ok(exit::OK)
}

fn cmd_cb_test(a: &RunArgs, out: &mut dyn Write) -> Result<i32, Fail> {
    let input = a.input.parse()?;
    let cfg = a.engine.config();
    let start = Instant::now();
    let ring = RingR::new(input.f.monic())?;
    let outcome = cross_balance_run(&ring, cfg, endomorphism_hook)?;
    let code = match outcome {
        CbOutcome::Split { .. } => exit::OK,
        CbOutcome::Failure { .. } => exit::FAILURE,
    };
    match a.format {
        Format::Json => {
            let res = match &outcome {
                CbOutcome::Split { cert, .. } => json!({ "status": "split", "factor": coeffs(cert.factor()) }),
                CbOutcome::Failure { final_g, .. } => json!({ "status": "failure", "final_g": rpoly_json(final_g) }),
            };
            emit_json(out, &json!({
                "schema_version": SCHEMA_VERSION,
                "command": "cb-test",
                "input": input.echo,
                "config": cfg,
                "outcome": res,
                "trace": outcome.trace(),
                "timing_ms": elapsed_ms(start),
            }));
        }
        Format::Text => {
            trace_text(out, outcome.trace());
            let _ = match &outcome {
                CbOutcome::Split { cert, .. } => writeln!(out, "Split {}", cert.factor().to_text()),
                CbOutcome::Failure { .. } => writeln!(out, "Failure"),
            };
        }
    }
    Ok(code)
}

fn cmd_oracle(a: &OracleArgs, out: &mut dyn Write) -> Result<i32, Fail> {
    let inst = a.input.instance()?;
    let ctx = *inst.ctx();
    let n = inst.n();
    let mut cfg = a.engine.config();
    cfg.k = Some(a.rounds.max(1));
    let aux = crate::cross_balance::aux_sequence(ctx, n, cfg.provider, a.rounds.max(1));
    let snaps = d_set_sequence(&inst, &aux, cfg.modified_rule);
    let root = |j: usize| inst.roots()[j].value();
    let check = if a.check { Some(check_engine(&inst, &cfg)?) } else { None };
    match a.format {
        Format::Json => {
            emit_json(out, &json!({
                "schema_version": SCHEMA_VERSION,
                "command": "oracle",
                "roots": inst.roots(),
                "snapshots": snaps,
                "check": check,
            }));
        }
        Format::Text => {
            for (s, p_l) in snaps.iter().zip(&aux) {
                let (delta, _) = inst.delta_sets(p_l);
                let _ = writeln!(out, "round {}: aux {}", s.round, p_l.to_text());
                for i in 0..n {
                    let d: Vec<String> = delta[i].iter().map(|&j| root(j).to_string()).collect();
                    let g: Vec<String> = s.d_sets[i].iter().map(|&j| root(j).to_string()).collect();
                    let _ = writeln!(out, "  {}: delta {{{}}} D {{{}}}", root(i), d.join(","), g.join(","));
                }
                let reg = match s.regularity {
                    Some(t) => format!("{t}-regular"),
                    None => "not regular".into(),
                };
                let change = if s.round == 1 {
                    String::new()
                } else if s.equals_previous {
                    ", unchanged".into()
                } else {
                    ", changed".into()
                };
                let _ = writeln!(out, "G{}: {reg}{change}", s.round);
            }
            if let Some(c) = &check {
                let _ = writeln!(out, "engine trace:");
                trace_text(out, &c.engine);
                let _ = writeln!(out, "check: {}", if c.ok() { "match" } else { "MISMATCH" });
            }
        }
    }
    Ok(match check {
        Some(c) if !c.ok() => exit::MISMATCH,
        _ => exit::OK,
    })
}

fn cmd_survey(a: &SurveyArgs, out: &mut dyn Write) -> Result<i32, Fail> {
    let ctx = FieldCtx::new(a.p)?;
    let mode = match a.mode {
        Mode::Exhaustive => SurveyMode::Exhaustive,
        Mode::Sampled => SurveyMode::Sampled { trials: a.trials, seed: a.seed },
    };
    let res = crate::oracle::survey_square_balanced(ctx, a.n, mode)?;
    let _ = writeln!(out, "{}\n{}", SurveyResult::csv_header(), res.csv_row());
    Ok(exit::OK)
}

/// Runs the CLI on `args` and captures stdout, stderr and the exit code.
pub fn run_captured(args: &[&str]) -> (i32, String, String) {
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("cbfactor").chain(args.iter().copied()), &mut o, &mut e);
    (code, String::from_utf8_lossy(&o).into_owned(), String::from_utf8_lossy(&e).into_owned())
}

/// Drops the `timing_ms` field so two artifacts can be compared byte for byte.
pub fn strip_timing(json_text: &str) -> String {
    let mut v: serde_json::Value = serde_json::from_str(json_text).expect("artifact is JSON");
    if let Some(obj) = v.as_object_mut() {
        obj.remove("timing_ms");
    }
    serde_json::to_string(&v).expect("serializable")
}
