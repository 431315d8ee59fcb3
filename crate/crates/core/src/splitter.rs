//! Terminal splitting paths: the endomorphism orbit for regularity one and a
//! seeded equal-degree splitter used as an explicit fallback.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{AlgebraError, RPoly, RingR, SplitCert};
use crate::cross_balance::{CrossError, SmallDegreeOutcome};
use crate::poly::{DensePoly, PolyError};

/// Attempts before the randomized splitter gives up. Each attempt fails with
/// probability about `2^(1-n)`.
pub const CZ_MAX_ATTEMPTS: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitterError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("beta is not a root of f(y) in R")]
    NotAnEndomorphismRoot,
    #[error("beta equals X")]
    Identity,
    #[error("degree {0} is too small to split")]
    DegreeTooSmall(usize),
    #[error("no split after {0} random attempts")]
    Exhausted(usize),
}

/// Iterates the endomorphism `X -> beta` of R.
///
/// Componentwise `beta` permutes the roots by some `delta`. The m-th iterate
/// `beta^(m)` is compared with `X`: equality means `delta^m` is the identity
/// and the orbit method stalls with order `m`; a zero divisor means `delta^m`
/// fixes some roots but not all, and its gcd with `f` is returned.
pub fn endomorphism_split(ring: &RingR, beta: &DensePoly) -> Result<SmallDegreeOutcome, SplitterError> {
    let beta = ring.reduce(beta);
    let x = ring.x();
    if beta == x {
        return Err(SplitterError::Identity);
    }
    if !ring.eval_at(ring.modulus(), &beta).is_zero() {
        return Err(SplitterError::NotAnEndomorphismRoot);
    }
    let bound = (ring.degree() as u64).pow(3);
    let mut cur = beta.clone();
    for m in 1..=bound {
        if cur == x {
            return Ok(SmallDegreeOutcome::Stalled(Some(m)));
        }
        if let Some(cert) = ring.zero_divisor_split(&ring.sub(&cur, &x))? {
            return Ok(SmallDegreeOutcome::Split(cert));
        }
        cur = ring.eval_at(&cur, &beta);
    }
    Ok(SmallDegreeOutcome::Stalled(None))
}

/// Small-degree hook for the refinement loop: runs the orbit method when
/// `g = y - beta`, stalls otherwise.
pub fn endomorphism_hook(ring: &RingR, g: &RPoly) -> Result<SmallDegreeOutcome, CrossError> {
    if g.degree() != Some(1) {
        return Ok(SmallDegreeOutcome::Stalled(None));
    }
    let beta = ring.neg(g.coeff(0).expect("degree one"));
    Ok(endomorphism_split(ring, &beta)?)
}

/// Splits a squarefree, completely splitting `f` with `gcd((x + a)^((p-1)/2) - 1, f)`
/// for seeded random `a`.
pub fn cz_random_split(f: &DensePoly, seed: u64) -> Result<SplitCert, SplitterError> {
    let n = f.degree().unwrap_or(0);
    if n < 2 {
        return Err(SplitterError::DegreeTooSmall(n));
    }
    let f = f.monic();
    let ctx = *f.ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = DensePoly::one(ctx);
    for _ in 0..CZ_MAX_ATTEMPTS {
        let a = ctx.elem(rng.gen_range(0..ctx.p()));
        let base = DensePoly::linear(ctx, ctx.neg(a));
        let g = (&base.pow_mod((ctx.p() - 1) / 2, &f)? - &one).gcd(&f)?;
        if g.degree().is_some_and(|d| d > 0 && d < n) {
            return Ok(SplitCert::new(g, f)?);
        }
    }
    Err(SplitterError::Exhausted(CZ_MAX_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldCtx, FpElem};
    use proptest::prelude::*;

    fn ring(p: u64, roots: &[u64]) -> RingR {
        let ctx = FieldCtx::new(p).unwrap();
        let roots: Vec<FpElem> = roots.iter().map(|&r| ctx.elem(r)).collect();
        RingR::new(DensePoly::from_roots(ctx, &roots)).unwrap()
    }

    /// The element of R taking value `images[i]` at `roots[i]`.
    fn by_values(r: &RingR, roots: &[u64], images: &[u64]) -> DensePoly {
        let ctx = *r.ctx();
        let pts: Vec<(FpElem, FpElem)> =
            roots.iter().zip(images).map(|(&a, &b)| (ctx.elem(a), ctx.elem(b))).collect();
        crate::poly::lagrange(ctx, &pts).unwrap()
    }

    #[test]
    fn two_cycle_times_three_cycle() {
        // delta = (12)(345); delta^2 fixes 1 and 2 already
        let roots = [1, 2, 3, 4, 5];
        let r = ring(11, &roots);
        let beta = by_values(&r, &roots, &[2, 1, 4, 5, 3]);
        match endomorphism_split(&r, &beta).unwrap() {
            SmallDegreeOutcome::Split(c) => {
                let ctx = *r.ctx();
                assert_eq!(c.factor(), &DensePoly::from_roots(ctx, &[ctx.elem(1), ctx.elem(2)]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn three_cycle_stalls() {
        let roots = [1, 2, 4];
        let r = ring(7, &roots);
        let beta = by_values(&r, &roots, &[2, 4, 1]);
        assert_eq!(endomorphism_split(&r, &beta).unwrap(), SmallDegreeOutcome::Stalled(Some(3)));
    }

    #[test]
    fn endomorphism_errors() {
        let r = ring(7, &[1, 2, 4]);
        assert_eq!(endomorphism_split(&r, &r.x()), Err(SplitterError::Identity));
        let bad = r.scalar(r.ctx().elem(3));
        assert_eq!(endomorphism_split(&r, &bad), Err(SplitterError::NotAnEndomorphismRoot));
    }

    #[test]
    fn cz_examples() {
        let ctx = FieldCtx::new(7).unwrap();
        let f = DensePoly::from_i64s(ctx, &[-1, 0, 0, 1]);
        let a = cz_random_split(&f, 42).unwrap();
        assert_eq!(a, cz_random_split(&f, 42).unwrap());
        assert!(a.factor().divides(&f).unwrap());

        let q = DensePoly::from_u64s(ctx, &[2, 4, 1]);
        let c = cz_random_split(&q, 1).unwrap();
        let mut parts = vec![c.factor().coeff_values(), c.cofactor().coeff_values()];
        parts.sort();
        assert_eq!(parts, vec![vec![5, 1], vec![6, 1]]);

        assert_eq!(cz_random_split(&DensePoly::from_u64s(ctx, &[1, 1]), 0), Err(SplitterError::DegreeTooSmall(1)));
    }

    proptest! {
        #[test]
        fn orbit_split_matches_permutation(perm in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle()) {
            prop_assume!(perm.iter().enumerate().any(|(i, &j)| i != j));
            let roots = [2u64, 3, 5, 7, 11, 13];
            let r = ring(101, &roots);
            let ctx = *r.ctx();
            let images: Vec<u64> = perm.iter().map(|&j| roots[j]).collect();
            let beta = by_values(&r, &roots, &images);
            // first power of the permutation that fixes something
            let mut cur: Vec<usize> = perm.clone();
            let mut m = 1u64;
            let expected = loop {
                let fixed: Vec<FpElem> = (0..6).filter(|&i| cur[i] == i).map(|i| ctx.elem(roots[i])).collect();
                if fixed.len() == 6 { break SmallDegreeOutcome::Stalled(Some(m)); }
                if !fixed.is_empty() {
                    let f = DensePoly::from_roots(ctx, &fixed);
                    break SmallDegreeOutcome::Split(SplitCert::new(f, r.modulus().clone()).unwrap());
                }
                cur = cur.iter().map(|&i| perm[i]).collect();
                m += 1;
            };
            prop_assert_eq!(endomorphism_split(&r, &beta).unwrap(), expected);
        }
    }
}
