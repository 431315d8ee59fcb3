//! Reference semantics computed directly from explicit roots.
//!
//! Everything here works with root indices and the field square root only;
//! no quotient-ring arithmetic is involved, so agreement with the engine is a
//! genuine cross-check.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{RPoly, RingR};
use crate::cross_balance::{
    aux_sequence, CrossBalance, CrossConfig, CrossError, GraphStep, RoundEvent, RoundRecord,
};
use crate::field::{FieldCtx, FpElem};
use crate::poly::{lagrange, DensePoly};
use crate::splitter::endomorphism_hook;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("roots must be pairwise distinct")]
    DuplicateRoot,
    #[error("need at least two roots")]
    TooFewRoots,
    #[error("round {0} is not balanced")]
    NotBalancedAtRound(usize),
    #[error("C({p}, {n}) = {count} subsets exceeds the exhaustive limit")]
    TooLargeForExhaustive { p: u64, n: usize, count: u128 },
    #[error("no subgroup of order {n} in F_{p}^*")]
    NoSubgroup { p: u64, n: usize },
    #[error("need 1 <= n <= p")]
    BadSurveyParams,
}

pub type IndexSet = BTreeSet<usize>;

/// Distinct roots `xi_0, ..., xi_{n-1}` in F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedInstance {
    ctx: FieldCtx,
    roots: Vec<FpElem>,
}

impl RootedInstance {
    pub fn new(ctx: FieldCtx, roots: Vec<FpElem>) -> Result<Self, OracleError> {
        if roots.len() < 2 {
            return Err(OracleError::TooFewRoots);
        }
        if roots.iter().collect::<BTreeSet<_>>().len() != roots.len() {
            return Err(OracleError::DuplicateRoot);
        }
        Ok(RootedInstance { ctx, roots })
    }

    /// `n` distinct uniformly random roots.
    pub fn random(ctx: FieldCtx, n: usize, rng: &mut impl rand::Rng) -> Result<Self, OracleError> {
        let mut seen = BTreeSet::new();
        let mut roots = Vec::with_capacity(n);
        while roots.len() < n {
            let r = ctx.elem(rng.gen_range(0..ctx.p()));
            if seen.insert(r) {
                roots.push(r);
            }
        }
        Self::new(ctx, roots)
    }

    /// `a * H + b` for the subgroup `H` of order `n`. For odd `n` and
    /// `p = 3 mod 4` the instance is square balanced.
    pub fn subgroup_coset(ctx: FieldCtx, n: usize, a: FpElem, b: FpElem) -> Result<Self, OracleError> {
        let p = ctx.p();
        let nn = n as u64;
        if n < 2 || a.is_zero() || (p - 1) % nn != 0 {
            return Err(OracleError::NoSubgroup { p, n });
        }
        let primes: Vec<u64> = (2..=nn).filter(|&q| nn % q == 0 && crate::field::is_prime_u64(q)).collect();
        let gen = (2..p)
            .map(|z| ctx.pow(ctx.elem(z), (p - 1) / nn))
            .find(|&h| primes.iter().all(|&q| ctx.pow(h, nn / q) != FpElem::ONE))
            .ok_or(OracleError::NoSubgroup { p, n })?;
        let mut roots = Vec::with_capacity(n);
        let mut h = FpElem::ONE;
        for _ in 0..n {
            roots.push(ctx.add(ctx.mul(a, h), b));
            h = ctx.mul(h, gen);
        }
        Self::new(ctx, roots)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn roots(&self) -> &[FpElem] {
        &self.roots
    }

    pub fn n(&self) -> usize {
        self.roots.len()
    }

    pub fn modulus(&self) -> DensePoly {
        DensePoly::from_roots(self.ctx, &self.roots)
    }

    pub fn ring(&self) -> Result<RingR, crate::algebra::AlgebraError> {
        RingR::new(self.modulus())
    }

    /// Whether `b` lies in the out-neighbourhood of `a`: `a != b` and
    /// `sigma((a - b)^2) = b - a`.
    pub fn edge(&self, a: FpElem, b: FpElem) -> bool {
        let ctx = &self.ctx;
        let d = ctx.sub(a, b);
        !d.is_zero() && ctx.sigma(ctx.mul(d, d)).expect("a square") == ctx.neg(d)
    }

    /// Neighbourhoods of the root images under `p_l`, and their complements
    /// in `{j != i}`.
    pub fn delta_sets(&self, p_l: &DensePoly) -> (Vec<IndexSet>, Vec<IndexSet>) {
        let vals: Vec<FpElem> = self.roots.iter().map(|&r| p_l.eval(r)).collect();
        let n = self.n();
        let delta: Vec<IndexSet> =
            (0..n).map(|i| (0..n).filter(|&j| self.edge(vals[i], vals[j])).collect()).collect();
        let comp = (0..n).map(|i| (0..n).filter(|&j| j != i && !delta[i].contains(&j)).collect()).collect();
        (delta, comp)
    }

    /// The RPoly over `F_p[x]/(f)` whose component at root `i` is the monic
    /// polynomial with roots `comps[i]`.
    pub fn assemble(&self, comps: &[Vec<FpElem>]) -> Result<RPoly, OracleError> {
        let degree = comps[0].len();
        if comps.iter().any(|c| c.len() != degree) {
            return Err(OracleError::NotBalancedAtRound(0));
        }
        let polys: Vec<DensePoly> = comps.iter().map(|c| DensePoly::from_roots(self.ctx, c)).collect();
        let coeffs = (0..=degree)
            .map(|u| {
                let pts: Vec<(FpElem, FpElem)> =
                    self.roots.iter().zip(&polys).map(|(&x, p)| (x, p.coeff(u))).collect();
                lagrange(self.ctx, &pts).expect("distinct roots")
            })
            .collect();
        Ok(RPoly::new(coeffs))
    }
}

fn uniform<T: PartialEq>(xs: impl IntoIterator<Item = T>) -> Option<T> {
    let mut it = xs.into_iter();
    let first = it.next()?;
    it.all(|x| x == first).then_some(first)
}

/// Regularity of the digraph with out-neighbourhoods `d`.
pub fn regularity(d: &[IndexSet]) -> Option<usize> {
    let out = uniform(d.iter().map(BTreeSet::len))?;
    let mut indeg = vec![0usize; d.len()];
    d.iter().flatten().for_each(|&j| indeg[j] += 1);
    (uniform(indeg)? == out).then_some(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphSnapshot {
    pub round: usize,
    pub d_sets: Vec<IndexSet>,
    pub regular: bool,
    pub regularity: Option<usize>,
    pub equals_previous: bool,
}

/// One step of the neighbourhood recurrence.
///
/// `D ∩ Δ` is kept unless it is empty everywhere (then `D` stays). With the
/// modified rule `D ∩ Δ̄` is taken instead when both candidates have uniform
/// nonzero size and the complement is strictly smaller.
fn next_d(prev: &[IndexSet], delta: &[IndexSet], comp: &[IndexSet], modified: bool) -> Vec<IndexSet> {
    let a: Vec<IndexSet> = prev.iter().zip(delta).map(|(d, s)| d & s).collect();
    let b: Vec<IndexSet> = prev.iter().zip(comp).map(|(d, s)| d & s).collect();
    if a.iter().all(BTreeSet::is_empty) {
        return prev.to_vec();
    }
    if modified {
        let sa = uniform(a.iter().map(BTreeSet::len));
        let sb = uniform(b.iter().map(BTreeSet::len));
        if let (Some(sa), Some(sb)) = (sa, sb) {
            if sb > 0 && sb < sa {
                return b;
            }
        }
    }
    a
}

/// Graphs `G_1, G_2, ...` for the given auxiliary polynomials.
pub fn d_set_sequence(inst: &RootedInstance, aux: &[DensePoly], modified: bool) -> Vec<GraphSnapshot> {
    let mut out: Vec<GraphSnapshot> = Vec::with_capacity(aux.len());
    for (idx, p_l) in aux.iter().enumerate() {
        let (delta, comp) = inst.delta_sets(p_l);
        let d_sets = match out.last() {
            None => delta,
            Some(prev) => next_d(&prev.d_sets, &delta, &comp, modified),
        };
        let regularity = regularity(&d_sets);
        let equals_previous = out.last().is_some_and(|s| s.d_sets == d_sets);
        out.push(GraphSnapshot { round: idx + 1, d_sets, regular: regularity.is_some(), regularity, equals_previous });
    }
    out
}

/// Round-level facts about `p_l` on the roots, or the stage at which the
/// engine would split.
enum RoundView {
    PowerFormViolation,
    NotSquareBalanced,
    Balanced { delta: Vec<IndexSet>, comp: Vec<IndexSet> },
}

fn view(inst: &RootedInstance, p_l: &DensePoly) -> RoundView {
    let vals: Vec<FpElem> = inst.roots.iter().map(|&r| p_l.eval(r)).collect();
    if uniform(vals.iter().map(|v| vals.iter().filter(|w| *w == v).count())).is_none() {
        return RoundView::PowerFormViolation;
    }
    let (delta, comp) = inst.delta_sets(p_l);
    if uniform(delta.iter().map(BTreeSet::len)).is_none() {
        return RoundView::NotSquareBalanced;
    }
    RoundView::Balanced { delta, comp }
}

/// The image values under `p_l` of the roots in `set`, without repeats.
fn image_values(inst: &RootedInstance, p_l: &DensePoly, set: &IndexSet) -> Vec<FpElem> {
    let v: BTreeSet<FpElem> = set.iter().map(|&j| p_l.eval(inst.roots[j])).collect();
    v.into_iter().collect()
}

/// The lifted `h'_l`: component `i` has roots at the image values of the
/// neighbours of root `i`.
pub fn expected_h(inst: &RootedInstance, l: usize, aux: &[DensePoly]) -> Result<RPoly, OracleError> {
    let p_l = &aux[l - 1];
    match view(inst, p_l) {
        RoundView::Balanced { delta, .. } => {
            let comps: Vec<Vec<FpElem>> = delta.iter().map(|d| image_values(inst, p_l, d)).collect();
            inst.assemble(&comps).map_err(|_| OracleError::NotBalancedAtRound(l))
        }
        _ => Err(OracleError::NotBalancedAtRound(l)),
    }
}

/// Neighbourhood sets after round `l`, following the engine's refinement.
pub fn expected_d_sets(
    inst: &RootedInstance,
    l: usize,
    aux: &[DensePoly],
    modified: bool,
) -> Result<Vec<IndexSet>, OracleError> {
    let mut d: Option<Vec<IndexSet>> = None;
    for (idx, p_l) in aux.iter().take(l).enumerate() {
        let RoundView::Balanced { delta, comp } = view(inst, p_l) else {
            return Err(OracleError::NotBalancedAtRound(idx + 1));
        };
        d = Some(match d {
            None => delta,
            Some(prev) => {
                let a: Vec<IndexSet> = prev.iter().zip(&delta).map(|(x, s)| x & s).collect();
                if uniform(a.iter().map(BTreeSet::len)).is_none() {
                    return Err(OracleError::NotBalancedAtRound(idx + 1));
                }
                next_d(&prev, &delta, &comp, modified)
            }
        });
    }
    d.ok_or(OracleError::NotBalancedAtRound(l))
}

/// `g_l`: component `i` is `prod_{j in D_i} (y - xi_j)`.
pub fn expected_g(inst: &RootedInstance, l: usize, aux: &[DensePoly], modified: bool) -> Result<RPoly, OracleError> {
    let d = expected_d_sets(inst, l, aux, modified)?;
    let comps: Vec<Vec<FpElem>> = d.iter().map(|s| s.iter().map(|&j| inst.roots[j]).collect()).collect();
    inst.assemble(&comps).map_err(|_| OracleError::NotBalancedAtRound(l))
}

/// What the orbit method does on the permutation `delta`.
fn simulate_orbit(delta: &[usize]) -> RoundEvent {
    let n = delta.len();
    let bound = (n as u64).pow(3);
    let mut cur = delta.to_vec();
    for m in 1..=bound {
        let fixed = (0..n).filter(|&i| cur[i] == i).count();
        if fixed == n {
            return RoundEvent::SmallDegree { order: Some(m) };
        }
        if fixed > 0 {
            return RoundEvent::EndomorphismSplit;
        }
        cur = cur.iter().map(|&i| delta[i]).collect();
    }
    RoundEvent::SmallDegree { order: None }
}

/// The round records the engine should produce, with the orbit method as
/// the small-degree splitter.
pub fn predict_trace(inst: &RootedInstance, cfg: &CrossConfig) -> Vec<RoundRecord> {
    let n = inst.n();
    let aux = aux_sequence(inst.ctx, n, cfg.provider, cfg.rounds(n));
    let mut trace = Vec::new();
    let mut d: Option<Vec<IndexSet>> = None;
    for (idx, p_l) in aux.iter().enumerate() {
        let mut rec = RoundRecord { round: idx + 1, aux: p_l.coeff_values(), graph: None, event: RoundEvent::Continue };
        let (delta, comp) = match view(inst, p_l) {
            RoundView::PowerFormViolation => {
                rec.event = RoundEvent::PowerFormViolation;
                trace.push(rec);
                return trace;
            }
            RoundView::NotSquareBalanced => {
                rec.event = RoundEvent::NotSquareBalanced;
                trace.push(rec);
                return trace;
            }
            RoundView::Balanced { delta, comp } => (delta, comp),
        };
        let (next, step) = match d.take() {
            None => {
                let degree = delta[0].len();
                (delta, GraphStep::Balanced { degree })
            }
            Some(prev) => {
                let a: Vec<IndexSet> = prev.iter().zip(&delta).map(|(x, s)| x & s).collect();
                if uniform(a.iter().map(BTreeSet::len)).is_none() {
                    rec.event = RoundEvent::OutDegreeSplit;
                    trace.push(rec);
                    return trace;
                }
                let next = next_d(&prev, &delta, &comp, cfg.modified_rule);
                let degree = next[0].len();
                if next == prev {
                    (next, GraphStep::Unchanged { degree })
                } else {
                    (next, GraphStep::Refined { degree })
                }
            }
        };
        rec.graph = Some(step);
        let degree = step.degree();
        if !matches!(step, GraphStep::Unchanged { .. }) {
            if degree <= cfg.c {
                rec.event = if degree == 1 {
                    let perm: Vec<usize> = next.iter().map(|s| *s.iter().next().expect("degree one")).collect();
                    simulate_orbit(&perm)
                } else {
                    RoundEvent::SmallDegree { order: None }
                };
                trace.push(rec);
                return trace;
            }
            if regularity(&next).is_none() {
                rec.event = RoundEvent::InDegreeSplit;
                trace.push(rec);
                return trace;
            }
        }
        d = Some(next);
        trace.push(rec);
    }
    trace
}

/// Per-round comparison of the engine against the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub engine: Vec<RoundRecord>,
    pub oracle: Vec<RoundRecord>,
    pub trace_match: bool,
    /// Rounds where the lifted `h'` differs from [`expected_h`].
    pub h_mismatches: Vec<usize>,
    /// Rounds where `g` differs from [`expected_g`].
    pub g_mismatches: Vec<usize>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.trace_match && self.h_mismatches.is_empty() && self.g_mismatches.is_empty()
    }
}

/// Runs the engine round by round and compares traces, `h'` and `g`.
pub fn check_engine(inst: &RootedInstance, cfg: &CrossConfig) -> Result<CheckReport, CrossError> {
    let ring = inst.ring()?;
    let mut cb = CrossBalance::new(ring, *cfg)?;
    let aux = cb.aux().to_vec();
    let mut hook = endomorphism_hook;
    let (mut h_mismatches, mut g_mismatches) = (Vec::new(), Vec::new());
    loop {
        let done = cb.step(&mut hook)?;
        let l = cb.trace().len();
        if let Some(h) = cb.last_hprime() {
            if expected_h(inst, l, &aux).ok().as_ref() != Some(h) {
                h_mismatches.push(l);
            }
        }
        if cb.trace()[l - 1].graph.is_some()
            && expected_g(inst, l, &aux, cfg.modified_rule).ok().as_ref() != cb.g()
        {
            g_mismatches.push(l);
        }
        if done.is_some() {
            break;
        }
    }
    let engine = cb.trace().to_vec();
    let oracle = predict_trace(inst, cfg);
    Ok(CheckReport { trace_match: engine == oracle, engine, oracle, h_mismatches, g_mismatches })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurveyMode {
    Exhaustive,
    Sampled { trials: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveyResult {
    pub p: u64,
    pub n: usize,
    pub mode: SurveyMode,
    pub total: u64,
    pub balanced: u64,
}

impl SurveyResult {
    pub fn frequency(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.balanced as f64 / self.total as f64
        }
    }

    pub fn csv_header() -> &'static str {
        "p,n,mode,total,balanced,frequency"
    }

    pub fn csv_row(&self) -> String {
        let mode = match self.mode {
            SurveyMode::Exhaustive => "exhaustive",
            SurveyMode::Sampled { .. } => "sampled",
        };
        format!("{},{},{},{},{},{}", self.p, self.n, mode, self.total, self.balanced, self.frequency())
    }
}

pub const EXHAUSTIVE_LIMIT: u128 = 10_000_000;

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Counts `n`-subsets of F_p whose root tournament has equal out-degrees.
pub fn survey_square_balanced(ctx: FieldCtx, n: usize, mode: SurveyMode) -> Result<SurveyResult, OracleError> {
    let p = ctx.p();
    if n == 0 || n as u64 > p {
        return Err(OracleError::BadSurveyParams);
    }
    // out[d]: whether b is an out-neighbour of a when a - b = d
    let out: Vec<bool> = (0..p)
        .map(|d| {
            let d = ctx.elem(d);
            !d.is_zero() && ctx.sigma(ctx.mul(d, d)).expect("a square") == ctx.neg(d)
        })
        .collect();
    let balanced_set = |set: &[u64]| {
        let degs = set.iter().map(|&a| set.iter().filter(|&&b| out[((a + p - b) % p) as usize]).count());
        uniform(degs).is_some()
    };
    let (total, balanced) = match mode {
        SurveyMode::Exhaustive => {
            let count = binomial(p, n as u64);
            if count > EXHAUSTIVE_LIMIT {
                return Err(OracleError::TooLargeForExhaustive { p, n, count });
            }
            let mut idx: Vec<u64> = (0..n as u64).collect();
            let mut balanced = 0u64;
            loop {
                if balanced_set(&idx) {
                    balanced += 1;
                }
                // next combination in lexicographic order
                let Some(i) = (0..n).rev().find(|&i| idx[i] < p - (n - i) as u64) else { break };
                idx[i] += 1;
                for j in i + 1..n {
                    idx[j] = idx[j - 1] + 1;
                }
            }
            (count as u64, balanced)
        }
        SurveyMode::Sampled { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let balanced = (0..trials)
                .filter(|_| {
                    let set: Vec<u64> = sample(&mut rng, p as usize, n).into_iter().map(|v| v as u64).collect();
                    balanced_set(&set)
                })
                .count() as u64;
            (trials, balanced)
        }
    };
    Ok(SurveyResult { p, n, mode, total, balanced })
}
