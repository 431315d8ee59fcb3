//! Top-level factoring pipeline: isolate the roots in F_p, split the product
//! of distinct linear factors with the deterministic tests, and fall back to
//! the randomized splitter only when asked.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, RingR};
use crate::cross_balance::{cross_balance_run, regime_bound, CbOutcome, CrossConfig, CrossError, RoundRecord};
use crate::field::FpElem;
use crate::poly::{split_part, DensePoly, PolyError};
use crate::splitter::{cz_random_split, endomorphism_hook, SplitterError};
use crate::square_balance::{square_balance_test, SbOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DriverError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Cross(#[from] CrossError),
    #[error(transparent)]
    Splitter(#[from] SplitterError),
    #[error("input must have degree at least 1")]
    ConstantInput,
    #[error("refinement loop failed on a degree-{degree} factor and fallback is disabled")]
    CrossBalanceFailure { degree: usize, modulus: Vec<u64>, trace: Vec<RoundRecord> },
    #[error("degree {n} needs p > {bound}, got p = {p}; fallback is disabled")]
    ParameterRegime { n: usize, p: u64, bound: u64 },
    #[error("defect: {0}")]
    Defect(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    SquareBalance,
    CrossBalance,
    Fallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FallbackReason {
    CrossBalanceFailure,
    ParameterRegime,
}

/// How one squarefree, completely splitting piece was split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubproblemTrace {
    pub modulus: Vec<u64>,
    pub route: Route,
    pub rounds: Vec<RoundRecord>,
    pub fallback: Option<FallbackReason>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LinearFactor {
    pub root: FpElem,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorReport {
    /// Sorted by root.
    pub factors: Vec<LinearFactor>,
    /// The part of the monic input with no root in F_p.
    pub remainder: DensePoly,
    pub traces: Vec<SubproblemTrace>,
    pub fallback_used: bool,
}

impl FactorReport {
    /// `x - root` for each factor, repeated by multiplicity.
    pub fn linear_factors(&self) -> Vec<DensePoly> {
        let ctx = *self.remainder.ctx();
        self.factors
            .iter()
            .flat_map(|lf| std::iter::repeat_n(DensePoly::linear(ctx, lf.root), lf.multiplicity))
            .collect()
    }

    pub fn multiply_back(&self) -> DensePoly {
        self.linear_factors().iter().fold(self.remainder.clone(), |acc, l| &acc * l)
    }
}

/// Seed for the `index`-th fallback call of a run.
pub fn fallback_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Factors `f_raw` into linear factors over F_p times a root-free remainder.
pub fn factor_driver(
    f_raw: &DensePoly,
    cfg: CrossConfig,
    allow_fallback: bool,
    seed: u64,
) -> Result<FactorReport, DriverError> {
    if f_raw.degree().is_none_or(|d| d == 0) {
        return Err(DriverError::ConstantInput);
    }
    let f = f_raw.monic();
    let ctx = *f.ctx();
    let (split, _) = split_part(&f)?;

    let mut traces = Vec::new();
    let mut fallback_calls = 0u64;
    let mut roots = Vec::new();
    let mut work = vec![split];
    while let Some(g) = work.pop() {
        let n = g.degree().unwrap_or(0);
        if n == 0 {
            continue;
        }
        if n == 1 {
            roots.push(ctx.neg(g.coeff(0)));
            continue;
        }
        let modulus = g.coeff_values();
        let odd_bound = if n % 2 == 1 { regime_bound(n) } else { n as u64 };
        let regime_ok = ctx.p() > odd_bound.max(n as u64);
        let (cert, trace) = if !regime_ok {
            if !allow_fallback {
                return Err(DriverError::ParameterRegime { n, p: ctx.p(), bound: odd_bound.max(n as u64) });
            }
            let cert = cz_random_split(&g, fallback_seed(seed, fallback_calls))?;
            fallback_calls += 1;
            let trace = SubproblemTrace {
                modulus,
                route: Route::Fallback,
                rounds: Vec::new(),
                fallback: Some(FallbackReason::ParameterRegime),
            };
            (cert, trace)
        } else if n % 2 == 0 {
            let ring = RingR::new(g.clone())?;
            match square_balance_test(&ring)? {
                SbOutcome::Split(cert) => {
                    let trace =
                        SubproblemTrace { modulus, route: Route::SquareBalance, rounds: Vec::new(), fallback: None };
                    (cert, trace)
                }
                SbOutcome::Balanced { .. } => return Err(DriverError::Defect("even degree reported balanced")),
            }
        } else {
            let ring = RingR::new(g.clone())?;
            match cross_balance_run(&ring, cfg, endomorphism_hook)? {
                CbOutcome::Split { cert, trace } => {
                    let trace = SubproblemTrace { modulus, route: Route::CrossBalance, rounds: trace, fallback: None };
                    (cert, trace)
                }
                CbOutcome::Failure { trace, .. } => {
                    if !allow_fallback {
                        return Err(DriverError::CrossBalanceFailure { degree: n, modulus, trace });
                    }
                    let cert = cz_random_split(&g, fallback_seed(seed, fallback_calls))?;
                    fallback_calls += 1;
                    let trace = SubproblemTrace {
                        modulus,
                        route: Route::Fallback,
                        rounds: trace,
                        fallback: Some(FallbackReason::CrossBalanceFailure),
                    };
                    (cert, trace)
                }
            }
        };
        traces.push(trace);
        work.push(cert.cofactor());
        work.push(cert.factor().clone());
    }

    roots.sort();
    let mut remainder = f;
    let mut factors = Vec::with_capacity(roots.len());
    for root in roots {
        let lin = DensePoly::linear(ctx, root);
        let mut multiplicity = 0;
        while let Some(q) = remainder.exact_div(&lin)? {
            remainder = q;
            multiplicity += 1;
        }
        factors.push(LinearFactor { root, multiplicity });
    }
    Ok(FactorReport { factors, remainder, traces, fallback_used: fallback_calls > 0 })
}
