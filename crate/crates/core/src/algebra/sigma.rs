use crate::field::{FieldCtx, FpElem};
use crate::poly::DensePoly;

use super::{RingR, SAlg, SElem};

/// A commutative F_p-algebra isomorphic to a product of copies of F_p.
pub trait Componentwise {
    type Elem: Clone;

    fn field(&self) -> &FieldCtx;
    fn c_scalar(&self, c: FpElem) -> Self::Elem;
    fn c_add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn c_scale(&self, a: &Self::Elem, c: FpElem) -> Self::Elem;
    fn c_mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn c_pow(&self, a: &Self::Elem, mut exp: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.c_scalar(FpElem::ONE);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.c_mul(&acc, &base);
            }
            base = self.c_mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// `a^(2^k)`.
    fn c_square_k(&self, a: &Self::Elem, k: u32) -> Self::Elem {
        (0..k).fold(a.clone(), |acc, _| self.c_mul(&acc, &acc))
    }
}

/// `(1 + tau)/2 + (1 - tau)/2 * c`: equals 1 where `tau = 1` and `c` where
/// `tau = -1`.
fn select<A: Componentwise + ?Sized>(alg: &A, tau: &A::Elem, c: FpElem) -> A::Elem {
    let ctx = alg.field();
    let h = ctx.half();
    let plus = ctx.mul(h, ctx.add(FpElem::ONE, c));
    let minus = ctx.mul(h, ctx.sub(FpElem::ONE, c));
    alg.c_add(&alg.c_scalar(plus), &alg.c_scale(tau, minus))
}

/// Canonical square root taken in every component at once.
///
/// Components that are nonzero squares get the root with 2-adic exponent
/// below `2^(e-1)`; zero components stay zero. No branching on element
/// values and no inversions.
pub fn masked_sqrt<A: Componentwise + ?Sized>(alg: &A, a: &A::Elem) -> A::Elem {
    let ctx = *alg.field();
    let (e, w) = (ctx.e(), ctx.w());
    let mut x = alg.c_pow(a, w.div_ceil(2));
    let mut t = alg.c_pow(a, w);
    for i in (1..e).rev() {
        let tau = alg.c_square_k(&t, i - 1);
        let c = ctx.pow(ctx.eta(), 1u64 << (e - 1 - i));
        let m = select(alg, &tau, c);
        x = alg.c_mul(&x, &m);
        let m2 = alg.c_mul(&m, &m);
        t = alg.c_mul(&t, &m2);
    }

    // Strip the low e-1 bits of the 2-adic exponent of x; what remains is
    // -1 exactly where the top bit is set.
    let g_inv = ctx.inv(ctx.pow(ctx.eta(), w)).expect("eta is nonzero");
    let mut z = alg.c_pow(&x, w);
    for k in 0..e - 1 {
        let tau = alg.c_square_k(&z, e - 1 - k);
        let c = ctx.pow(g_inv, 1u64 << k);
        z = alg.c_mul(&z, &select(alg, &tau, c));
    }
    alg.c_mul(&x, &z)
}

impl Componentwise for RingR {
    type Elem = DensePoly;

    fn field(&self) -> &FieldCtx {
        self.ctx()
    }

    fn c_scalar(&self, c: FpElem) -> DensePoly {
        self.scalar(c)
    }

    fn c_add(&self, a: &DensePoly, b: &DensePoly) -> DensePoly {
        self.add(a, b)
    }

    fn c_scale(&self, a: &DensePoly, c: FpElem) -> DensePoly {
        self.scale(a, c)
    }

    fn c_mul(&self, a: &DensePoly, b: &DensePoly) -> DensePoly {
        self.mul(a, b)
    }
}

impl Componentwise for SAlg {
    type Elem = SElem;

    fn field(&self) -> &FieldCtx {
        self.ring().ctx()
    }

    fn c_scalar(&self, c: FpElem) -> SElem {
        self.scalar(c)
    }

    fn c_add(&self, a: &SElem, b: &SElem) -> SElem {
        self.add(a, b)
    }

    fn c_scale(&self, a: &SElem, c: FpElem) -> SElem {
        self.scale(a, c)
    }

    fn c_mul(&self, a: &SElem, b: &SElem) -> SElem {
        self.mul(a, b)
    }
}

impl SAlg {
    /// Componentwise canonical square root.
    pub fn sigma(&self, a: &SElem) -> SElem {
        masked_sqrt(self, a)
    }
}

impl RingR {
    /// Componentwise canonical square root.
    pub fn sigma(&self, a: &DensePoly) -> DensePoly {
        masked_sqrt(self, a)
    }
}
