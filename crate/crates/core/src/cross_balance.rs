//! The multi-round refinement loop. Each round maps the roots through an
//! auxiliary polynomial `p_l`, reruns the square-balance test on the image,
//! and intersects the resulting neighbourhoods with the running polynomial
//! `g(y)`. Any irregularity on the way becomes a proper factor of `f`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Outcome, RPoly, RingR, SplitCert};
use crate::field::{FieldCtx, FpElem};
use crate::poly::{interpolate_monic, perfect_power_decompose, DensePoly, PolyError};
use crate::splitter::SplitterError;
use crate::square_balance::{square_balance_test, SbOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrossError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Splitter(#[from] SplitterError),
    #[error("degree {0} is even; the refinement loop needs odd degree")]
    EvenDegree(usize),
    #[error("degree {0} is below 3")]
    DegreeTooSmall(usize),
    #[error("p = {p} must exceed n(n-1)/2 = {bound} for degree {n}")]
    ParameterRegime { n: usize, p: u64, bound: u64 },
    #[error("{nodes} interpolation nodes need p > {nodes}, got p = {p}")]
    PTooSmallForNodes { nodes: usize, p: u64 },
    #[error("round budget and cutoff must be at least 1")]
    BadConfig,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(&'static str),
}

/// Source of the auxiliary polynomials `p_1 = y, p_2, ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AuxProvider {
    /// `p_l = y^l`.
    Power,
    /// Degree `n - 1` polynomials drawn from a seeded ChaCha8 stream.
    SeededRandom { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossConfig {
    /// Round budget; `None` means `4 * ceil(log2 n) + 4`.
    pub k: Option<usize>,
    /// Degrees at or below `c` go to the small-degree splitter.
    pub c: usize,
    pub provider: AuxProvider,
    /// Pick the smaller of gcd and quotient when refining.
    pub modified_rule: bool,
}

impl Default for CrossConfig {
    fn default() -> Self {
        CrossConfig { k: None, c: 1, provider: AuxProvider::Power, modified_rule: true }
    }
}

impl CrossConfig {
    pub fn rounds(&self, n: usize) -> usize {
        self.k.unwrap_or_else(|| default_rounds(n))
    }
}

pub fn default_rounds(n: usize) -> usize {
    4 * ceil_log2(n) + 4
}

pub fn ceil_log2(n: usize) -> usize {
    n.max(1).next_power_of_two().trailing_zeros() as usize
}

/// Smallest admissible characteristic is `n(n-1)/2 + 1`.
pub fn regime_bound(n: usize) -> u64 {
    (n as u64) * (n as u64 - 1) / 2
}

/// The first `k` auxiliary polynomials for degree `n`.
pub fn aux_sequence(ctx: FieldCtx, n: usize, provider: AuxProvider, k: usize) -> Vec<DensePoly> {
    match provider {
        AuxProvider::Power => (1..=k).map(|l| DensePoly::monomial(ctx, l)).collect(),
        AuxProvider::SeededRandom { seed } => {
            let mut out = vec![DensePoly::x(ctx)];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let degree = n.saturating_sub(1).max(2);
            while out.len() < k {
                let mut coeffs: Vec<u64> = (0..degree).map(|_| rng.gen_range(0..ctx.p())).collect();
                coeffs.push(rng.gen_range(1..ctx.p()));
                let cand = DensePoly::from_u64s(ctx, &coeffs);
                if !out.contains(&cand) {
                    out.push(cand);
                }
            }
            out.truncate(k);
            out
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphStep {
    /// First graph, straight from the square-balance test.
    Balanced { degree: usize },
    Refined { degree: usize },
    Unchanged { degree: usize },
}

impl GraphStep {
    pub fn degree(&self) -> usize {
        match *self {
            GraphStep::Balanced { degree } | GraphStep::Refined { degree } | GraphStep::Unchanged { degree } => {
                degree
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RoundEvent {
    Continue,
    PowerFormViolation,
    NotSquareBalanced,
    OutDegreeSplit,
    InDegreeSplit,
    EndomorphismSplit,
    SmallDegree { order: Option<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    /// Coefficients of `p_l`, lowest first.
    pub aux: Vec<u64>,
    pub graph: Option<GraphStep>,
    pub event: RoundEvent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CbOutcome {
    Split { cert: SplitCert, trace: Vec<RoundRecord> },
    Failure { trace: Vec<RoundRecord>, final_g: RPoly },
}

impl CbOutcome {
    pub fn trace(&self) -> &[RoundRecord] {
        match self {
            CbOutcome::Split { trace, .. } | CbOutcome::Failure { trace, .. } => trace,
        }
    }
}

/// Result of the small-degree splitter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SmallDegreeOutcome {
    Split(SplitCert),
    /// No factor found; carries the permutation order when known.
    Stalled(Option<u64>),
}

/// A splitter that never splits.
pub fn stall_hook(_: &RingR, _: &RPoly) -> Result<SmallDegreeOutcome, CrossError> {
    Ok(SmallDegreeOutcome::Stalled(None))
}

/// `f_l = prod (x - p_l(xi_i))`.
pub fn build_fl(ring: &RingR, p_l: &DensePoly) -> Result<DensePoly, AlgebraError> {
    ring.char_poly(&ring.reduce(p_l))
}

/// Writes `f_l = ftilde^d` with `ftilde` squarefree, or splits `f` through
/// `gcd(p_l(y) - p_l(X), f(y))` when the root images have uneven
/// multiplicities.
pub fn power_form_check(
    ring: &RingR,
    p_l: &DensePoly,
    f_l: &DensePoly,
) -> Result<Outcome<(DensePoly, usize)>, CrossError> {
    if let Some(pair) = perfect_power_decompose(f_l)? {
        return Ok(Outcome::Value(pair));
    }
    let image = ring.reduce(p_l);
    let diff = ring.rpoly_sub(&ring.rpoly_from_scalar(p_l), &RPoly::new(vec![image]));
    let f_y = ring.rpoly_from_scalar(ring.modulus());
    match ring.rpoly_gcd(&diff, &f_y)? {
        Outcome::Split(cert) => Ok(Outcome::Split(cert)),
        Outcome::Value(_) => Err(CrossError::InternalInconsistency("uneven image multiplicities did not split")),
    }
}

/// `gcd(gtilde(p_l(x)) mod f, f)` for a proper factor `gtilde` of `f_l`.
pub fn pullback_factor(gtilde: &DensePoly, p_l: &DensePoly, f: &DensePoly) -> Result<SplitCert, AlgebraError> {
    let composed = gtilde.compose_mod(p_l, f)?;
    SplitCert::new(composed.gcd(f)?, f.clone())
}

/// Substitutes `x <- p_l(X)` in every coefficient of `h`.
pub fn lift_h(h: &RPoly, p_l: &DensePoly, ring: &RingR) -> RPoly {
    let image = ring.reduce(p_l);
    RPoly::new(h.coeffs().iter().map(|a| ring.eval_at(a, &image)).collect())
}

/// One refinement step. Returns the new `g` and whether it changed.
pub fn refine(
    ring: &RingR,
    g_prev: &RPoly,
    hprime: &RPoly,
    p_l: &DensePoly,
    modified: bool,
) -> Result<Outcome<(RPoly, bool)>, AlgebraError> {
    let composed = ring.rpoly_compose_scalar(hprime, p_l);
    let gcd = crate::try_value!(ring.rpoly_gcd(g_prev, &composed)?);
    let dg = gcd.degree().unwrap_or(0);
    let chosen = if modified {
        let (quot, rem) = ring.rpoly_divrem_monic(g_prev, &gcd)?;
        debug_assert!(rem.is_zero());
        let dq = quot.degree().unwrap_or(0);
        match (dg, dq) {
            (0, 0) => None,
            (0, _) => Some(quot),
            (_, 0) => Some(gcd),
            _ if dq < dg => Some(quot),
            _ => Some(gcd),
        }
    } else {
        (dg > 0).then_some(gcd)
    };
    Ok(Outcome::Value(match chosen {
        Some(g) if g != *g_prev => (g, true),
        _ => (g_prev.clone(), false),
    }))
}

/// `r(x) = prod_j (x - xi_j)^(k_j)` with `k_j` the in-degree of root `j` in
/// the graph encoded by `g`. Needs odd `n`.
pub fn in_degree_polynomial(ring: &RingR, g: &RPoly) -> Result<DensePoly, CrossError> {
    let ctx = *ring.ctx();
    let nodes = ring.degree() * g.degree().unwrap_or(0);
    if ctx.p() <= nodes as u64 {
        return Err(CrossError::PTooSmallForNodes { nodes, p: ctx.p() });
    }
    let points = (0..nodes as u64)
        .map(|s| {
            let y = ctx.elem(s);
            let c = ring.char_poly(&ring.rpoly_eval_scalar(g, y))?;
            Ok((y, ctx.neg(c.coeff(0))))
        })
        .collect::<Result<Vec<(FpElem, FpElem)>, CrossError>>()?;
    Ok(interpolate_monic(ctx, &points, nodes)?)
}

/// Splits `f` when the in-degrees encoded by `g` are uneven.
pub fn in_degree_check(ring: &RingR, g: &RPoly) -> Result<Outcome<()>, CrossError> {
    let f = ring.modulus();
    let n = ring.degree();
    let mut cur = in_degree_polynomial(ring, g)?;
    for _ in 0..g.degree().unwrap_or(0) {
        let common = cur.gcd(f)?;
        if common.degree().is_some_and(|d| d > 0 && d < n) {
            return Ok(Outcome::Split(SplitCert::new(common, f.clone())?));
        }
        match cur.exact_div(f)? {
            Some(q) => cur = q,
            None => break,
        }
    }
    Ok(Outcome::Value(()))
}

/// The refinement loop, one round per [`CrossBalance::step`].
#[derive(Debug, Clone)]
pub struct CrossBalance {
    ring: RingR,
    cfg: CrossConfig,
    aux: Vec<DensePoly>,
    g: Option<RPoly>,
    hprime: Option<RPoly>,
    trace: Vec<RoundRecord>,
}

impl CrossBalance {
    pub fn new(ring: RingR, cfg: CrossConfig) -> Result<Self, CrossError> {
        let n = ring.degree();
        let p = ring.ctx().p();
        if n < 3 {
            return Err(CrossError::DegreeTooSmall(n));
        }
        if n % 2 == 0 {
            return Err(CrossError::EvenDegree(n));
        }
        if p <= regime_bound(n) {
            return Err(CrossError::ParameterRegime { n, p, bound: regime_bound(n) });
        }
        let k = cfg.rounds(n);
        if k == 0 || cfg.c == 0 {
            return Err(CrossError::BadConfig);
        }
        let aux = aux_sequence(*ring.ctx(), n, cfg.provider, k);
        Ok(CrossBalance { ring, cfg, aux, g: None, hprime: None, trace: Vec::new() })
    }

    pub fn ring(&self) -> &RingR {
        &self.ring
    }

    pub fn aux(&self) -> &[DensePoly] {
        &self.aux
    }

    /// Current `g`, once the first round has balanced.
    pub fn g(&self) -> Option<&RPoly> {
        self.g.as_ref()
    }

    /// The lifted `h'` of the most recent round, if it got that far.
    pub fn last_hprime(&self) -> Option<&RPoly> {
        self.hprime.as_ref()
    }

    pub fn trace(&self) -> &[RoundRecord] {
        &self.trace
    }

    /// Runs the next round; `Some` once the loop is over.
    pub fn step<F>(&mut self, hook: &mut F) -> Result<Option<CbOutcome>, CrossError>
    where
        F: FnMut(&RingR, &RPoly) -> Result<SmallDegreeOutcome, CrossError>,
    {
        let l = self.trace.len() + 1;
        let p_l = self.aux[l - 1].clone();
        let mut rec = RoundRecord { round: l, aux: p_l.coeff_values(), graph: None, event: RoundEvent::Continue };
        self.hprime = None;
        let ring = &self.ring;

        let f_l = build_fl(ring, &p_l)?;
        let ftilde = match power_form_check(ring, &p_l, &f_l)? {
            Outcome::Value((s, _)) => s,
            Outcome::Split(cert) => return Ok(Some(self.split(rec, RoundEvent::PowerFormViolation, cert))),
        };
        let h = if ftilde.degree() == Some(1) {
            RPoly::new(vec![ring.one()])
        } else {
            match square_balance_test(&RingR::new(ftilde)?)? {
                SbOutcome::Balanced { h, .. } => h,
                SbOutcome::Split(c) => {
                    let cert = pullback_factor(c.factor(), &p_l, ring.modulus())?;
                    return Ok(Some(self.split(rec, RoundEvent::NotSquareBalanced, cert)));
                }
            }
        };
        let hprime = lift_h(&h, &p_l, ring);

        let (g, step) = match &self.g {
            None => {
                let degree = hprime.degree().unwrap_or(0);
                (hprime.clone(), GraphStep::Balanced { degree })
            }
            Some(prev) => match refine(ring, prev, &hprime, &p_l, self.cfg.modified_rule)? {
                Outcome::Split(cert) => {
                    self.hprime = Some(hprime);
                    return Ok(Some(self.split(rec, RoundEvent::OutDegreeSplit, cert)));
                }
                Outcome::Value((g, true)) => {
                    let degree = g.degree().unwrap_or(0);
                    (g, GraphStep::Refined { degree })
                }
                Outcome::Value((g, false)) => {
                    let degree = g.degree().unwrap_or(0);
                    (g, GraphStep::Unchanged { degree })
                }
            },
        };
        self.hprime = Some(hprime);
        rec.graph = Some(step);
        let degree = step.degree();
        self.g = Some(g);

        if !matches!(step, GraphStep::Unchanged { .. }) {
            let g = self.g.as_ref().expect("just set");
            if degree <= self.cfg.c {
                match hook(&self.ring, g)? {
                    SmallDegreeOutcome::Split(cert) => {
                        return Ok(Some(self.split(rec, RoundEvent::EndomorphismSplit, cert)));
                    }
                    SmallDegreeOutcome::Stalled(order) => {
                        rec.event = RoundEvent::SmallDegree { order };
                        self.trace.push(rec);
                        return Ok(Some(self.failure()));
                    }
                }
            }
            if let Outcome::Split(cert) = in_degree_check(&self.ring, g)? {
                return Ok(Some(self.split(rec, RoundEvent::InDegreeSplit, cert)));
            }
        }
        self.trace.push(rec);
        Ok((self.trace.len() == self.aux.len()).then(|| self.failure()))
    }

    fn split(&mut self, mut rec: RoundRecord, event: RoundEvent, cert: SplitCert) -> CbOutcome {
        rec.event = event;
        self.trace.push(rec);
        CbOutcome::Split { cert, trace: self.trace.clone() }
    }

    fn failure(&self) -> CbOutcome {
        let final_g = self.g.clone().unwrap_or_else(RPoly::zero);
        CbOutcome::Failure { trace: self.trace.clone(), final_g }
    }
}

/// Runs the loop to completion.
pub fn cross_balance_run<F>(ring: &RingR, cfg: CrossConfig, mut hook: F) -> Result<CbOutcome, CrossError>
where
    F: FnMut(&RingR, &RPoly) -> Result<SmallDegreeOutcome, CrossError>,
{
    let mut cb = CrossBalance::new(ring.clone(), cfg)?;
    loop {
        if let Some(out) = cb.step(&mut hook)? {
            return Ok(out);
        }
    }
}
