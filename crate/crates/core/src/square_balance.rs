//! The square-balance test: either a proper factor of `f` or the polynomial
//! `h(y)` whose component at each root lists that root's out-neighbours in the
//! square-root tournament.

use crate::algebra::{AlgebraError, Outcome, RPoly, RingR, SAlg, SplitCert};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SbOutcome {
    Split(SplitCert),
    /// `h` is monic of degree `t = (n - 1) / 2`.
    Balanced { h: RPoly, t: usize },
}

/// Runs the test on `R = F_p[x]/(f)`.
///
/// With `C = (X + Y + sigma((X - Y)^2)) / 2` in S, the characteristic
/// polynomial of `C` over R is `(y - X)^t h(y)` for the largest possible `t`.
/// Factors `y - X` are peeled while the value at `X` vanishes; a zero-divisor
/// value yields the split.
pub fn square_balance_test(ring: &RingR) -> Result<SbOutcome, AlgebraError> {
    let s = SAlg::new(ring.clone());
    let (x, y) = (s.x(), s.y());
    let d = s.sub(&x, &y);
    let root = s.sigma(&s.mul(&d, &d));
    let c = s.scale(&s.add(&s.add(&x, &y), &root), ring.ctx().half());
    let mut h = s.char_poly_over_r(&c)?;

    let lin = ring.rpoly_linear(&ring.x());
    let mut t = 0;
    loop {
        let v = ring.rpoly_eval(&h, &ring.x());
        if v.is_zero() {
            h = ring.rpoly_divrem_monic(&h, &lin)?.0;
            t += 1;
            continue;
        }
        return Ok(match ring.invert(&v)? {
            Outcome::Value(_) => {
                debug_assert_eq!(h.degree(), Some(t));
                SbOutcome::Balanced { h, t }
            }
            Outcome::Split(cert) => SbOutcome::Split(cert),
        });
    }
}
