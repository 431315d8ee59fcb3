//! Dense univariate polynomials over F_p and the reductions that bring an
//! arbitrary input down to a monic, squarefree, completely splitting one.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::field::{FieldCtx, FpElem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live over different prime fields")]
    CtxMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("degree {degree} is not below the characteristic {p}")]
    DegreeTooLargeForP { degree: usize, p: u64 },
    #[error("interpolation node {0} appears twice")]
    DuplicateNode(u64),
    #[error("expected {expected} interpolation points, got {got}")]
    TooFewPoints { expected: usize, got: usize },
    #[error("polynomial must be monic of positive degree")]
    NotMonic,
    #[error("cannot parse coefficient list: {0}")]
    Parse(String),
}

/// A polynomial over F_p, lowest-degree coefficient first, with no trailing
/// zero coefficients. The zero polynomial has an empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DensePoly {
    ctx: FieldCtx,
    coeffs: Vec<FpElem>,
}

impl fmt::Debug for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensePoly[{}; {}]", self.ctx.p(), self.to_text())
    }
}

impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c.value()) {
                (0, v) => write!(f, "{v}")?,
                (1, 1) => write!(f, "x")?,
                (1, v) => write!(f, "{v}*x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, v) => write!(f, "{v}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl DensePoly {
    pub fn new(ctx: FieldCtx, mut coeffs: Vec<FpElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DensePoly { ctx, coeffs }
    }

    pub fn from_u64s(ctx: FieldCtx, coeffs: &[u64]) -> Self {
        Self::new(ctx, coeffs.iter().map(|&c| ctx.elem(c)).collect())
    }

    pub fn from_i64s(ctx: FieldCtx, coeffs: &[i64]) -> Self {
        Self::new(ctx, coeffs.iter().map(|&c| ctx.from_i128(c as i128)).collect())
    }

    pub fn zero(ctx: FieldCtx) -> Self {
        DensePoly { ctx, coeffs: Vec::new() }
    }

    pub fn one(ctx: FieldCtx) -> Self {
        Self::constant(ctx, FpElem::ONE)
    }

    pub fn constant(ctx: FieldCtx, c: FpElem) -> Self {
        Self::new(ctx, vec![c])
    }

    /// The polynomial `x`.
    pub fn x(ctx: FieldCtx) -> Self {
        Self::monomial(ctx, 1)
    }

    pub fn monomial(ctx: FieldCtx, degree: usize) -> Self {
        let mut coeffs = vec![FpElem::ZERO; degree + 1];
        coeffs[degree] = FpElem::ONE;
        DensePoly { ctx, coeffs }
    }

    /// `x - root`.
    pub fn linear(ctx: FieldCtx, root: FpElem) -> Self {
        DensePoly { ctx, coeffs: vec![ctx.neg(root), FpElem::ONE] }
    }

    /// `prod (x - r)` over the given roots (with repetition).
    pub fn from_roots(ctx: FieldCtx, roots: &[FpElem]) -> Self {
        roots.iter().fold(Self::one(ctx), |acc, &r| &acc * &Self::linear(ctx, r))
    }

    #[inline]
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    #[inline]
    pub fn coeffs(&self) -> &[FpElem] {
        &self.coeffs
    }

    pub fn coeff_values(&self) -> Vec<u64> {
        self.coeffs.iter().map(|c| c.value()).collect()
    }

    #[inline]
    pub fn coeff(&self, i: usize) -> FpElem {
        self.coeffs.get(i).copied().unwrap_or(FpElem::ZERO)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FpElem::ONE
    }

    /// `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<FpElem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(FpElem::ONE)
    }

    pub fn check_ctx(&self, other: &DensePoly) -> Result<(), PolyError> {
        if self.ctx.p() == other.ctx.p() {
            Ok(())
        } else {
            Err(PolyError::CtxMismatch)
        }
    }

    pub fn scale(&self, c: FpElem) -> Self {
        let ctx = self.ctx;
        Self::new(ctx, self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial is returned
    /// unchanged.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) if lc == FpElem::ONE => self.clone(),
            Some(lc) => self.scale(self.ctx.inv(lc).expect("leading coefficient is nonzero")),
        }
    }

    pub fn eval(&self, x: FpElem) -> FpElem {
        let ctx = &self.ctx;
        self.coeffs.iter().rev().fold(FpElem::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Self {
        let ctx = self.ctx;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| ctx.mul(c, ctx.elem(i as u64)))
            .collect();
        Self::new(ctx, coeffs)
    }

    /// Quotient and remainder; the divisor only needs a nonzero (hence
    /// invertible) leading coefficient.
    pub fn divrem(&self, b: &DensePoly) -> Result<(DensePoly, DensePoly), PolyError> {
        self.check_ctx(b)?;
        let db = b.degree().ok_or(PolyError::DivisionByZeroPoly)?;
        let ctx = self.ctx;
        if self.coeffs.len() <= db {
            return Ok((Self::zero(ctx), self.clone()));
        }
        let lc_inv = match b.coeffs[db] {
            FpElem::ONE => FpElem::ONE,
            lc => ctx.inv(lc).expect("nonzero leading coefficient"),
        };
        let mut rem = self.coeffs.clone();
        let mut quot = vec![FpElem::ZERO; self.coeffs.len() - db];
        for i in (0..quot.len()).rev() {
            let c = ctx.mul(rem[i + db], lc_inv);
            quot[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &bj) in b.coeffs.iter().enumerate() {
                rem[i + j] = ctx.sub(rem[i + j], ctx.mul(c, bj));
            }
        }
        rem.truncate(db);
        Ok((Self::new(ctx, quot), Self::new(ctx, rem)))
    }

    pub fn rem(&self, b: &DensePoly) -> Result<DensePoly, PolyError> {
        Ok(self.divrem(b)?.1)
    }

    /// Returns the quotient when `b` divides `self` exactly.
    pub fn exact_div(&self, b: &DensePoly) -> Result<Option<DensePoly>, PolyError> {
        let (q, r) = self.divrem(b)?;
        Ok(r.is_zero().then_some(q))
    }

    pub fn divides(&self, other: &DensePoly) -> Result<bool, PolyError> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &DensePoly) -> Result<DensePoly, PolyError> {
        self.check_ctx(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Returns `(g, s, t)` with `g = gcd(a, b)` monic and `s*a + t*b = g`.
    pub fn ext_gcd(&self, other: &DensePoly) -> Result<(DensePoly, DensePoly, DensePoly), PolyError> {
        self.check_ctx(other)?;
        let ctx = self.ctx;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(ctx), Self::zero(ctx));
        let (mut t0, mut t1) = (Self::zero(ctx), Self::one(ctx));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading() {
            None => Ok((r0, s0, t0)),
            Some(lc) => {
                let inv = ctx.inv(lc).expect("nonzero");
                Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
            }
        }
    }

    /// Inverse of `self` modulo `m` when they are coprime.
    pub fn inverse_mod(&self, m: &DensePoly) -> Result<Option<DensePoly>, PolyError> {
        let (g, s, _) = self.ext_gcd(m)?;
        if g.is_one() {
            Ok(Some(s.rem(m)?))
        } else {
            Ok(None)
        }
    }

    pub fn mul_mod(&self, other: &DensePoly, m: &DensePoly) -> Result<DensePoly, PolyError> {
        (self * other).rem(m)
    }

    /// `self^exp mod m` by square-and-multiply.
    pub fn pow_mod(&self, mut exp: u64, m: &DensePoly) -> Result<DensePoly, PolyError> {
        let mut base = self.rem(m)?;
        let mut acc = Self::one(self.ctx).rem(m)?;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_mod(&base, m)?;
            }
            base = base.mul_mod(&base, m)?;
            exp >>= 1;
        }
        Ok(acc)
    }

    /// `self(inner) mod m`, by Horner's rule.
    pub fn compose_mod(&self, inner: &DensePoly, m: &DensePoly) -> Result<DensePoly, PolyError> {
        let inner = inner.rem(m)?;
        let mut acc = Self::zero(self.ctx);
        for &c in self.coeffs.iter().rev() {
            acc = (&acc.mul_mod(&inner, m)? + &Self::constant(self.ctx, c)).rem(m)?;
        }
        Ok(acc)
    }

    /// `self(inner)` without reduction.
    pub fn compose(&self, inner: &DensePoly) -> DensePoly {
        let mut acc = Self::zero(self.ctx);
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(self.ctx, c);
        }
        acc
    }

    pub fn pow(&self, exp: usize) -> DensePoly {
        (0..exp).fold(Self::one(self.ctx), |acc, _| &acc * self)
    }

    /// Comma-separated coefficients, lowest degree first; `"0"` for zero.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs.iter().map(|c| c.value().to_string()).collect::<Vec<_>>().join(",")
    }

    /// Parses the comma-separated form produced by [`DensePoly::to_text`].
    /// Negative and out-of-range integers are reduced modulo p.
    pub fn parse_text(ctx: FieldCtx, text: &str) -> Result<DensePoly, PolyError> {
        let coeffs = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i128>()
                    .map(|v| ctx.from_i128(v))
                    .map_err(|_| PolyError::Parse(t.trim().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(ctx, coeffs))
    }
}

impl Add for &DensePoly {
    type Output = DensePoly;

    fn add(self, rhs: &DensePoly) -> DensePoly {
        assert_eq!(self.ctx.p(), rhs.ctx.p(), "field mismatch");
        let ctx = self.ctx;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensePoly::new(ctx, (0..n).map(|i| ctx.add(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl Sub for &DensePoly {
    type Output = DensePoly;

    fn sub(self, rhs: &DensePoly) -> DensePoly {
        assert_eq!(self.ctx.p(), rhs.ctx.p(), "field mismatch");
        let ctx = self.ctx;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensePoly::new(ctx, (0..n).map(|i| ctx.sub(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl Neg for &DensePoly {
    type Output = DensePoly;

    fn neg(self) -> DensePoly {
        let ctx = self.ctx;
        DensePoly::new(ctx, self.coeffs.iter().map(|&c| ctx.neg(c)).collect())
    }
}

impl Mul for &DensePoly {
    type Output = DensePoly;

    fn mul(self, rhs: &DensePoly) -> DensePoly {
        assert_eq!(self.ctx.p(), rhs.ctx.p(), "field mismatch");
        let ctx = self.ctx;
        if self.is_zero() || rhs.is_zero() {
            return DensePoly::zero(ctx);
        }
        let p = ctx.p() as u128;
        let mut out = vec![0u128; self.coeffs.len() + rhs.coeffs.len() - 1];
        // Products are below 2^124, so eight of them can be summed before a
        // reduction is needed.
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                let slot = &mut out[i + j];
                *slot += a.value() as u128 * b.value() as u128;
                if *slot >= 1 << 126 {
                    *slot %= p;
                }
            }
        }
        DensePoly::new(ctx, out.into_iter().map(|v| FpElem::from_reduced((v % p) as u64)).collect())
    }
}

/// Radical of a monic polynomial: `f / gcd(f, f')`, valid when `p > deg f`.
pub fn squarefree_part(f: &DensePoly) -> Result<DensePoly, PolyError> {
    let degree = match f.degree() {
        Some(d) if d >= 1 && f.is_monic() => d,
        _ => return Err(PolyError::NotMonic),
    };
    if f.ctx().p() <= degree as u64 {
        return Err(PolyError::DegreeTooLargeForP { degree, p: f.ctx().p() });
    }
    let g = f.gcd(&f.derivative())?;
    Ok(f.divrem(&g)?.0)
}

/// If `g = s^d` with `s` squarefree, returns `(s, d)`.
pub fn perfect_power_decompose(g: &DensePoly) -> Result<Option<(DensePoly, usize)>, PolyError> {
    let s = squarefree_part(g)?;
    let (dg, ds) = (g.degree().unwrap_or(0), s.degree().unwrap_or(0));
    if ds == 0 || dg % ds != 0 {
        return Ok(None);
    }
    let d = dg / ds;
    Ok((s.pow(d) == *g).then_some((s, d)))
}

/// Splits a monic polynomial into `gcd(x^p - x, f)` (the product of its
/// distinct linear factors) and `f` divided by that product.
pub fn split_part(f: &DensePoly) -> Result<(DensePoly, DensePoly), PolyError> {
    if !f.is_monic() {
        return Err(PolyError::NotMonic);
    }
    let ctx = *f.ctx();
    if f.degree() == Some(0) {
        return Ok((f.clone(), f.clone()));
    }
    let xp = DensePoly::x(ctx).pow_mod(ctx.p(), f)?;
    let split = (&xp - &DensePoly::x(ctx)).gcd(f)?;
    let split = if split.is_zero() { f.clone() } else { split };
    let remainder = f.divrem(&split)?.0;
    Ok((split, remainder))
}

/// The unique monic polynomial of degree `m` taking value `v_s` at node `y_s`.
///
/// Interpolates `v_s - y_s^m` in Lagrange form (degree below `m`) and adds
/// `x^m`.
pub fn interpolate_monic(
    ctx: FieldCtx,
    points: &[(FpElem, FpElem)],
    m: usize,
) -> Result<DensePoly, PolyError> {
    if points.len() != m {
        return Err(PolyError::TooFewPoints { expected: m, got: points.len() });
    }
    let shifted: Vec<(FpElem, FpElem)> =
        points.iter().map(|&(y, v)| (y, ctx.sub(v, ctx.pow(y, m as u64)))).collect();
    let low = lagrange(ctx, &shifted)?;
    Ok(&low + &DensePoly::monomial(ctx, m))
}

/// Lagrange interpolation through pairwise-distinct nodes; the result has
/// degree below the number of points.
pub fn lagrange(ctx: FieldCtx, points: &[(FpElem, FpElem)]) -> Result<DensePoly, PolyError> {
    let mut seen = std::collections::HashSet::new();
    for &(y, _) in points {
        if !seen.insert(y) {
            return Err(PolyError::DuplicateNode(y.value()));
        }
    }
    let nodes: Vec<FpElem> = points.iter().map(|&(y, _)| y).collect();
    let full = DensePoly::from_roots(ctx, &nodes);
    let mut acc = DensePoly::zero(ctx);
    for &(y, v) in points {
        if v.is_zero() {
            continue;
        }
        let basis = full.divrem(&DensePoly::linear(ctx, y))?.0;
        let denom = basis.eval(y);
        let scale = ctx.mul(v, ctx.inv(denom).expect("distinct nodes"));
        acc = &acc + &basis.scale(scale);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f7() -> FieldCtx {
        FieldCtx::new(7).unwrap()
    }

    fn poly(ctx: FieldCtx, c: &[i64]) -> DensePoly {
        DensePoly::from_i64s(ctx, c)
    }

    #[test]
    fn arithmetic_examples() {
        let c = f7();
        let g = poly(c, &[-1, 0, 1]).gcd(&poly(c, &[-1, 1])).unwrap();
        assert_eq!(g.coeff_values(), vec![6, 1]);
        let prod = DensePoly::from_roots(c, &[c.elem(1), c.elem(2), c.elem(4)]);
        assert_eq!(prod.coeff_values(), vec![6, 0, 0, 1]);
        let (q, r) = poly(c, &[-1, 0, 0, 1]).divrem(&poly(c, &[-1, 1])).unwrap();
        assert_eq!(q.coeff_values(), vec![1, 1, 1]);
        assert!(r.is_zero());
    }

    #[test]
    fn errors() {
        let c = f7();
        let c11 = FieldCtx::new(11).unwrap();
        assert_eq!(poly(c, &[1, 1]).divrem(&DensePoly::zero(c)), Err(PolyError::DivisionByZeroPoly));
        assert_eq!(poly(c, &[1, 1]).gcd(&poly(c11, &[1, 1])), Err(PolyError::CtxMismatch));
        assert!(matches!(DensePoly::parse_text(c, "1,x"), Err(PolyError::Parse(_))));
    }

    #[test]
    fn text_form() {
        let c = f7();
        let f = DensePoly::parse_text(c, "1, 4,1,1").unwrap();
        assert_eq!(f.to_text(), "1,4,1,1");
        assert_eq!(DensePoly::parse_text(c, "-1,8,0").unwrap().to_text(), "6,1");
        assert_eq!(f.to_string(), "x^3 + x^2 + 4*x + 1");
    }

    #[test]
    fn squarefree_examples() {
        let c = f7();
        let f = poly(c, &[-1, 1]).pow(2);
        let f = &f * &poly(c, &[-2, 1]);
        assert_eq!(squarefree_part(&f).unwrap().coeff_values(), vec![2, 4, 1]);
        let sq = poly(c, &[-1, 0, 0, 1]);
        assert_eq!(squarefree_part(&sq).unwrap(), sq);
        let cube = poly(c, &[-1, 1]).pow(3);
        assert_eq!(squarefree_part(&cube).unwrap().coeff_values(), vec![6, 1]);
        let big = poly(c, &[-1, 1]).pow(7);
        assert_eq!(squarefree_part(&big), Err(PolyError::DegreeTooLargeForP { degree: 7, p: 7 }));
    }

    #[test]
    fn perfect_power_examples() {
        let c = f7();
        let cube = poly(c, &[-1, 1]).pow(3);
        let (s, d) = perfect_power_decompose(&cube).unwrap().unwrap();
        assert_eq!((s.coeff_values(), d), (vec![6, 1], 3));
        let sq = poly(c, &[-1, 0, 0, 1]);
        assert_eq!(perfect_power_decompose(&sq).unwrap(), Some((sq.clone(), 1)));
        let mixed = &poly(c, &[-1, 1]).pow(2) * &poly(c, &[-2, 1]);
        assert_eq!(perfect_power_decompose(&mixed).unwrap(), None);
        // radical degree divides but the multiplicities differ
        let uneven = &poly(c, &[-1, 1]).pow(3) * &poly(c, &[-2, 1]);
        assert_eq!(perfect_power_decompose(&uneven).unwrap(), None);
    }

    #[test]
    fn split_part_examples() {
        let c = f7();
        let (s, r) = split_part(&poly(c, &[1, 0, 1])).unwrap();
        assert!(s.is_one());
        assert_eq!(r.coeff_values(), vec![1, 0, 1]);
        let (s, r) = split_part(&poly(c, &[-1, 0, 0, 1])).unwrap();
        assert_eq!(s.coeff_values(), vec![6, 0, 0, 1]);
        assert!(r.is_one());
        let (s, r) = split_part(&poly(c, &[0, 1, 0, 1])).unwrap();
        assert_eq!(s.coeff_values(), vec![0, 1]);
        assert_eq!(r.coeff_values(), vec![1, 0, 1]);
    }

    #[test]
    fn interpolation_examples() {
        let c = f7();
        let e = |v| c.elem(v);
        let r = interpolate_monic(c, &[(e(0), e(5))], 1).unwrap();
        assert_eq!(r.coeff_values(), vec![5, 1]);
        let r = interpolate_monic(c, &[(e(0), e(1)), (e(1), e(0))], 2).unwrap();
        assert_eq!(r.coeff_values(), vec![1, 5, 1]);
        let g = &poly(c, &[-1, 1]).pow(2) * &poly(c, &[-2, 1]);
        let pts: Vec<_> = (0..3).map(|y| (e(y), g.eval(e(y)))).collect();
        assert_eq!(interpolate_monic(c, &pts, 3).unwrap().coeff_values(), vec![5, 5, 3, 1]);
        assert_eq!(
            interpolate_monic(c, &[(e(1), e(0)), (e(1), e(2))], 2),
            Err(PolyError::DuplicateNode(1))
        );
        assert_eq!(
            interpolate_monic(c, &[(e(1), e(0))], 2),
            Err(PolyError::TooFewPoints { expected: 2, got: 1 })
        );
    }

    /// Solves the Vandermonde system for the low coefficients directly.
    fn interpolate_by_linear_system(ctx: FieldCtx, points: &[(FpElem, FpElem)], m: usize) -> DensePoly {
        let mut rows: Vec<Vec<FpElem>> = points
            .iter()
            .map(|&(y, v)| {
                let mut row: Vec<FpElem> = (0..m).map(|k| ctx.pow(y, k as u64)).collect();
                row.push(ctx.sub(v, ctx.pow(y, m as u64)));
                row
            })
            .collect();
        for col in 0..m {
            let piv = (col..m).find(|&r| !rows[r][col].is_zero()).unwrap();
            rows.swap(col, piv);
            let inv = ctx.inv(rows[col][col]).unwrap();
            for k in 0..=m {
                rows[col][k] = ctx.mul(rows[col][k], inv);
            }
            for r in 0..m {
                if r != col && !rows[r][col].is_zero() {
                    let f = rows[r][col];
                    for k in 0..=m {
                        let t = ctx.mul(f, rows[col][k]);
                        rows[r][k] = ctx.sub(rows[r][k], t);
                    }
                }
            }
        }
        let mut coeffs: Vec<FpElem> = rows.iter().map(|r| r[m]).collect();
        coeffs.push(FpElem::ONE);
        DensePoly::new(ctx, coeffs)
    }

    fn arb_poly(ctx: FieldCtx, max_len: usize) -> impl Strategy<Value = DensePoly> {
        proptest::collection::vec(0..ctx.p(), 0..max_len)
            .prop_map(move |c| DensePoly::from_u64s(ctx, &c))
    }

    proptest! {
        #[test]
        fn divrem_round_trip(a in arb_poly(FieldCtx::new(101).unwrap(), 12),
                             b in arb_poly(FieldCtx::new(101).unwrap(), 8)) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree().map_or(true, |d| d < b.degree().unwrap()));
        }

        #[test]
        fn gcd_of_factored_products(common in proptest::collection::vec(0u64..31, 0..4),
                                    a_only in proptest::collection::vec(0u64..31, 0..4),
                                    b_only in proptest::collection::vec(0u64..31, 0..4)) {
            let c = FieldCtx::new(31).unwrap();
            let el = |v: &Vec<u64>| v.iter().map(|&x| c.elem(x)).collect::<Vec<_>>();
            let g0 = DensePoly::from_roots(c, &el(&common));
            let a = &g0 * &DensePoly::from_roots(c, &el(&a_only));
            let b = &g0 * &DensePoly::from_roots(c, &el(&b_only));
            let g = a.gcd(&b).unwrap();
            prop_assert!(g.divides(&a).unwrap() && g.divides(&b).unwrap());
            prop_assert!(g0.divides(&g).unwrap());
            let (h, s, t) = a.ext_gcd(&b).unwrap();
            prop_assert_eq!(&h, &g);
            prop_assert_eq!(&(&s * &a) + &(&t * &b), g);
        }

        #[test]
        fn interpolation_round_trip(tail in proptest::collection::vec(0u64..97, 0..10)) {
            let c = FieldCtx::new(97).unwrap();
            let mut coeffs = tail.clone();
            coeffs.push(1);
            let g = DensePoly::from_u64s(c, &coeffs);
            let m = g.degree().unwrap();
            let pts: Vec<_> = (0..m as u64).map(|y| (c.elem(y), g.eval(c.elem(y)))).collect();
            let r = interpolate_monic(c, &pts, m).unwrap();
            prop_assert_eq!(&r, &g);
            prop_assert_eq!(interpolate_by_linear_system(c, &pts, m), g);
        }

        #[test]
        fn split_part_separates_roots(roots in proptest::collection::vec(0u64..23, 0..5),
                                      quad in 0u64..23) {
            let c = FieldCtx::new(23).unwrap();
            let mut uniq = roots.clone();
            uniq.sort();
            uniq.dedup();
            let lin = DensePoly::from_roots(c, &uniq.iter().map(|&r| c.elem(r)).collect::<Vec<_>>());
            // x^2 - n for a nonresidue n has no roots
            let nr = (1..23).find(|&v| !c.is_qr(c.elem(v)).unwrap()).unwrap();
            let s2 = c.elem((quad % 22 + 1).pow(2));
            let irr = DensePoly::from_u64s(c, &[c.neg(c.mul(c.elem(nr), s2)).value(), 0, 1]);
            let f = &lin * &irr;
            let (s, r) = split_part(&f).unwrap();
            prop_assert_eq!(&(&s * &r), &f);
            prop_assert!((0..23).all(|v| !r.eval(c.elem(v)).is_zero()));
            prop_assert!(s.degree().unwrap() == uniq.len());
        }
    }
}
