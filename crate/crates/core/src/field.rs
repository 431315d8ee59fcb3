//! Arithmetic in F_p for word-sized odd primes, together with the 2-adic
//! structure of F_p^* and the canonical square-root map built on it.
//!
//! Write `p - 1 = 2^e * w` with `w` odd and let `eta` be a primitive `2^e`-th
//! root of unity. Every nonzero `a` factors uniquely as `a = eta^u * theta`
//! with `theta^w = 1` and `0 <= u < 2^e`. Of the two square roots of a
//! nonzero square, exactly one has `u < 2^(e-1)`; [`FieldCtx::sigma`] returns
//! that one. When `p = 3 mod 4` this is the root that is itself a quadratic
//! residue.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Upper bound (exclusive) on supported moduli.
pub const MAX_MODULUS: u64 = 1 << 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not an odd prime")]
    NotPrime(u64),
    #[error("modulus {0} is outside the supported range [3, 2^62)")]
    OutOfRange(u64),
    #[error("operation is undefined at zero")]
    ZeroInput,
    #[error("{0} is not a square modulo the field characteristic")]
    NotASquare(u64),
}

/// An element of F_p, always reduced into `[0, p)`.
///
/// The element does not carry its modulus; it is only meaningful together
/// with the [`FieldCtx`] that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FpElem(u64);

impl FpElem {
    pub const ZERO: FpElem = FpElem(0);
    pub const ONE: FpElem = FpElem(1);

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Wraps a value the caller knows is already reduced.
    #[inline]
    pub(crate) const fn from_reduced(v: u64) -> Self {
        FpElem(v)
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A prime field F_p together with the data the square-root map needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FieldCtx {
    p: u64,
    e: u32,
    w: u64,
    eta: FpElem,
    q0: u64,
}

impl FieldCtx {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !(3..MAX_MODULUS).contains(&p) {
            if p == 2 {
                return Err(FieldError::NotPrime(p));
            }
            return Err(FieldError::OutOfRange(p));
        }
        if p % 2 == 0 || !is_prime_u64(p) {
            return Err(FieldError::NotPrime(p));
        }
        let e = (p - 1).trailing_zeros();
        let w = (p - 1) >> e;
        let half = (p - 1) / 2;
        let q0 = (2..p)
            .find(|&q| pow_mod(q, half, p) == p - 1)
            .expect("an odd prime has a quadratic nonresidue");
        let eta = FpElem(pow_mod(q0, w, p));
        Ok(FieldCtx { p, e, w, eta, q0 })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// 2-adic valuation of `p - 1`.
    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }

    /// Odd part of `p - 1`.
    #[inline]
    pub fn w(&self) -> u64 {
        self.w
    }

    /// Primitive `2^e`-th root of unity, `q0^w`.
    #[inline]
    pub fn eta(&self) -> FpElem {
        self.eta
    }

    /// Smallest quadratic nonresidue.
    #[inline]
    pub fn q0(&self) -> u64 {
        self.q0
    }

    #[inline]
    pub fn elem(&self, v: u64) -> FpElem {
        FpElem(v % self.p)
    }

    pub fn from_i128(&self, v: i128) -> FpElem {
        FpElem(v.rem_euclid(self.p as i128) as u64)
    }

    #[inline]
    pub fn add(&self, a: FpElem, b: FpElem) -> FpElem {
        let s = a.0 + b.0;
        FpElem(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    pub fn sub(&self, a: FpElem, b: FpElem) -> FpElem {
        FpElem(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
    }

    #[inline]
    pub fn neg(&self, a: FpElem) -> FpElem {
        FpElem(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    #[inline]
    pub fn mul(&self, a: FpElem, b: FpElem) -> FpElem {
        FpElem(mul_mod(a.0, b.0, self.p))
    }

    pub fn pow(&self, a: FpElem, exp: u64) -> FpElem {
        FpElem(pow_mod(a.0, exp, self.p))
    }

    pub fn inv(&self, a: FpElem) -> Result<FpElem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroInput);
        }
        Ok(self.pow(a, self.p - 2))
    }

    /// `1/2`, i.e. `(p + 1) / 2`.
    #[inline]
    pub fn half(&self) -> FpElem {
        FpElem((self.p + 1) / 2)
    }

    pub fn is_qr(&self, a: FpElem) -> Result<bool, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroInput);
        }
        Ok(self.pow(a, (self.p - 1) / 2) == FpElem::ONE)
    }

    /// Writes `a = eta^u * theta` with `theta^w = 1` and `0 <= u < 2^e`.
    pub fn two_adic_split(&self, a: FpElem) -> Result<(u64, FpElem), FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroInput);
        }
        // a^w = (eta^w)^u, and eta^w generates the same 2-group as eta, so u is
        // a discrete log in a group of order 2^e, recovered one bit at a time.
        let g = self.pow(self.eta, self.w);
        let g_inv = self.inv(g)?;
        let target = self.pow(a, self.w);
        let mut u = 0u64;
        let mut rem = target;
        let mut g_inv_pow = g_inv; // g^(-2^k)
        for k in 0..self.e {
            let test = self.pow(rem, 1u64 << (self.e - 1 - k));
            if test != FpElem::ONE {
                u |= 1 << k;
                rem = self.mul(rem, g_inv_pow);
            }
            g_inv_pow = self.mul(g_inv_pow, g_inv_pow);
        }
        debug_assert_eq!(rem, FpElem::ONE);
        // a^w = eta^(u w) and theta = a / eta^u then satisfies theta^w = 1.
        let theta = self.mul(a, self.inv(self.pow(self.eta, u))?);
        Ok((u, theta))
    }

    /// Canonical square root: `sigma(0) = 0`; for a nonzero square, the root
    /// whose 2-adic exponent is below `2^(e-1)`.
    pub fn sigma(&self, a: FpElem) -> Result<FpElem, FieldError> {
        if a.is_zero() {
            return Ok(FpElem::ZERO);
        }
        if !self.is_qr(a)? {
            return Err(FieldError::NotASquare(a.0));
        }
        let root = self.tonelli_shanks(a);
        let (u, _) = self.two_adic_split(root)?;
        if u < (1u64 << (self.e - 1)) {
            Ok(root)
        } else {
            Ok(self.neg(root))
        }
    }

    /// Some square root of a nonzero square.
    fn tonelli_shanks(&self, a: FpElem) -> FpElem {
        let mut x = self.pow(a, (self.w + 1) / 2);
        let mut t = self.pow(a, self.w);
        let mut c = self.eta;
        let mut m = self.e;
        while t != FpElem::ONE {
            let mut i = 0;
            let mut t2 = t;
            while t2 != FpElem::ONE {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            x = self.mul(x, b);
            c = self.mul(b, b);
            t = self.mul(t, c);
            m = i;
        }
        x
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve primes as bases are
/// sufficient for every 64-bit input.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
