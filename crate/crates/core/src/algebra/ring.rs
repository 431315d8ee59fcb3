use crate::field::{FieldCtx, FpElem};
use crate::poly::{split_part, DensePoly};

use super::{AlgebraError, Outcome, SplitCert};

/// `F_p[x]/(f)` for a monic, squarefree, completely splitting `f`.
///
/// Elements are [`DensePoly`] values of degree below `n = deg f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingR {
    ctx: FieldCtx,
    f: DensePoly,
    n: usize,
}

impl RingR {
    /// Validates the modulus: monic, `2 <= n < p`, squarefree and a product
    /// of linear factors.
    pub fn new(f: DensePoly) -> Result<Self, AlgebraError> {
        let n = match f.degree() {
            Some(n) if n >= 2 && f.is_monic() => n,
            _ => return Err(AlgebraError::BadModulus),
        };
        let ctx = *f.ctx();
        if ctx.p() <= n as u64 {
            return Err(AlgebraError::PTooSmall { n, p: ctx.p() });
        }
        if !f.gcd(&f.derivative())?.is_one() {
            return Err(AlgebraError::NotSquarefree);
        }
        let (split, _) = split_part(&f)?;
        if split != f {
            return Err(AlgebraError::NotCompletelySplitting);
        }
        Ok(RingR { ctx, f, n })
    }

    /// Ring over a factor of a validated modulus; degree one is allowed.
    pub(crate) fn sub_ring(f: DensePoly) -> Self {
        let n = f.degree().expect("nonzero modulus");
        debug_assert!(n >= 1 && f.is_monic());
        RingR { ctx: *f.ctx(), f, n }
    }

    #[inline]
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    #[inline]
    pub fn modulus(&self) -> &DensePoly {
        &self.f
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn zero(&self) -> DensePoly {
        DensePoly::zero(self.ctx)
    }

    pub fn one(&self) -> DensePoly {
        DensePoly::one(self.ctx)
    }

    pub fn scalar(&self, c: FpElem) -> DensePoly {
        DensePoly::constant(self.ctx, c)
    }

    /// The class `X` of `x`.
    pub fn x(&self) -> DensePoly {
        self.reduce(&DensePoly::x(self.ctx))
    }

    pub fn reduce(&self, a: &DensePoly) -> DensePoly {
        if a.degree().is_none_or(|d| d < self.n) {
            return a.clone();
        }
        a.rem(&self.f).expect("same field, nonzero modulus")
    }

    pub fn add(&self, a: &DensePoly, b: &DensePoly) -> DensePoly {
        a + b
    }

    pub fn sub(&self, a: &DensePoly, b: &DensePoly) -> DensePoly {
        a - b
    }

    pub fn neg(&self, a: &DensePoly) -> DensePoly {
        -a
    }

    pub fn mul(&self, a: &DensePoly, b: &DensePoly) -> DensePoly {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        if a.degree() == Some(0) {
            return b.scale(a.coeff(0));
        }
        if b.degree() == Some(0) {
            return a.scale(b.coeff(0));
        }
        self.reduce(&(a * b))
    }

    pub fn scale(&self, a: &DensePoly, c: FpElem) -> DensePoly {
        a.scale(c)
    }

    pub fn pow(&self, a: &DensePoly, mut exp: u64) -> DensePoly {
        let mut base = self.reduce(a);
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// `poly(at)` evaluated in the ring.
    pub fn eval_at(&self, poly: &DensePoly, at: &DensePoly) -> DensePoly {
        poly.coeffs()
            .iter()
            .rev()
            .fold(self.zero(), |acc, &c| &self.mul(&acc, at) + &self.scalar(c))
    }

    /// The inverse of `rho`, or the proper factor `gcd(rho, f)` when `rho` is
    /// a zero divisor.
    pub fn invert(&self, rho: &DensePoly) -> Result<Outcome<DensePoly>, AlgebraError> {
        let rho = self.reduce(rho);
        if rho.is_zero() {
            return Err(AlgebraError::ZeroElement);
        }
        if rho.degree() == Some(0) {
            let inv = self.ctx.inv(rho.coeff(0)).expect("nonzero scalar");
            return Ok(Outcome::Value(self.scalar(inv)));
        }
        let (g, s, _) = rho.ext_gcd(&self.f)?;
        if g.is_one() {
            Ok(Outcome::Value(self.reduce(&s)))
        } else {
            Ok(Outcome::Split(SplitCert::new(g, self.f.clone())?))
        }
    }

    /// `Some(cert)` when `rho` is a nonzero zero divisor.
    pub fn zero_divisor_split(&self, rho: &DensePoly) -> Result<Option<SplitCert>, AlgebraError> {
        let rho = self.reduce(rho);
        if rho.is_zero() {
            return Ok(None);
        }
        let g = rho.gcd(&self.f)?;
        if g.is_one() {
            Ok(None)
        } else {
            Ok(Some(SplitCert::new(g, self.f.clone())?))
        }
    }

    /// Characteristic polynomial over F_p of multiplication by `alpha`,
    /// i.e. `prod_i (x - alpha(xi_i))`.
    ///
    /// Builds the matrix of `alpha` in the basis `1, X, ..., X^(n-1)`,
    /// evaluates `det(y I - M)` at `y = 0, 1, ..., n-1` and interpolates.
    pub fn char_poly(&self, alpha: &DensePoly) -> Result<DensePoly, AlgebraError> {
        let n = self.n;
        if self.ctx.p() <= n as u64 {
            return Err(AlgebraError::PTooSmall { n, p: self.ctx.p() });
        }
        let ctx = self.ctx;
        let x = self.x();
        let mut col = self.reduce(alpha);
        let mut matrix = vec![vec![FpElem::ZERO; n]; n];
        for j in 0..n {
            for (i, row) in matrix.iter_mut().enumerate() {
                row[j] = col.coeff(i);
            }
            col = self.mul(&col, &x);
        }
        let points: Vec<(FpElem, FpElem)> = (0..n as u64)
            .map(|s| {
                let y = ctx.elem(s);
                let mut a = matrix.clone();
                for (i, row) in a.iter_mut().enumerate() {
                    for (j, v) in row.iter_mut().enumerate() {
                        *v = if i == j { ctx.sub(y, *v) } else { ctx.neg(*v) };
                    }
                }
                (y, det_fp(&ctx, a))
            })
            .collect();
        Ok(crate::poly::interpolate_monic(ctx, &points, n)?)
    }

    /// CRT: the element congruent to `a` modulo `self` and to `b` modulo
    /// `other`, in the ring modulo the product. The moduli must be coprime.
    pub(crate) fn crt(
        &self,
        other: &RingR,
        a: &DensePoly,
        b: &DensePoly,
        inv_self_mod_other: &DensePoly,
    ) -> DensePoly {
        // a + f1 * ((b - a) * f1^{-1} mod f2)
        let diff = other.reduce(&(b - a));
        let t = other.mul(&diff, inv_self_mod_other);
        a + &(&self.f * &t)
    }
}

/// Determinant over F_p by Gaussian elimination.
pub(crate) fn det_fp(ctx: &FieldCtx, mut a: Vec<Vec<FpElem>>) -> FpElem {
    let n = a.len();
    let mut det = FpElem::ONE;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return FpElem::ZERO;
        };
        if piv != col {
            a.swap(piv, col);
            det = ctx.neg(det);
        }
        let pv = a[col][col];
        det = ctx.mul(det, pv);
        let inv = ctx.inv(pv).expect("nonzero pivot");
        for r in col + 1..n {
            let factor = ctx.mul(a[r][col], inv);
            if factor.is_zero() {
                continue;
            }
            for k in col..n {
                let t = ctx.mul(factor, a[col][k]);
                a[r][k] = ctx.sub(a[r][k], t);
            }
        }
    }
    det
}
