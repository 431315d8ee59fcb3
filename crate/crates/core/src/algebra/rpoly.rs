use crate::field::FpElem;
use crate::poly::DensePoly;

use super::{AlgebraError, Outcome, RingR, SplitCert};

/// A polynomial in `y` over [`RingR`], lowest coefficient first, without
/// trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RPoly {
    coeffs: Vec<DensePoly>,
}

impl RPoly {
    pub fn new(mut coeffs: Vec<DensePoly>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RPoly { coeffs }
    }

    pub fn zero() -> Self {
        RPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[DensePoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&DensePoly> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, i: usize) -> Option<&DensePoly> {
        self.coeffs.get(i)
    }

    /// The polynomial in F_p[y] seen at the root `xi` of the modulus of `ring`.
    pub fn at_root_in(&self, ring: &RingR, xi: FpElem) -> DensePoly {
        DensePoly::new(*ring.ctx(), self.coeffs.iter().map(|c| c.eval(xi)).collect())
    }
}

impl RingR {
    /// Lifts a polynomial over F_p to one over R with scalar coefficients.
    pub fn rpoly_from_scalar(&self, g: &DensePoly) -> RPoly {
        RPoly::new(g.coeffs().iter().map(|&c| self.scalar(c)).collect())
    }

    /// `y - a`.
    pub fn rpoly_linear(&self, a: &DensePoly) -> RPoly {
        RPoly::new(vec![self.neg(&self.reduce(a)), self.one()])
    }

    pub fn rpoly_add(&self, a: &RPoly, b: &RPoly) -> RPoly {
        let len = a.coeffs.len().max(b.coeffs.len());
        let z = self.zero();
        RPoly::new(
            (0..len)
                .map(|i| self.add(a.coeffs.get(i).unwrap_or(&z), b.coeffs.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn rpoly_sub(&self, a: &RPoly, b: &RPoly) -> RPoly {
        let len = a.coeffs.len().max(b.coeffs.len());
        let z = self.zero();
        RPoly::new(
            (0..len)
                .map(|i| self.sub(a.coeffs.get(i).unwrap_or(&z), b.coeffs.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn rpoly_mul(&self, a: &RPoly, b: &RPoly) -> RPoly {
        if a.is_zero() || b.is_zero() {
            return RPoly::zero();
        }
        let mut out = vec![self.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                out[i + j] = self.add(&out[i + j], &self.mul(ai, bj));
            }
        }
        RPoly::new(out)
    }

    pub fn rpoly_scale(&self, a: &RPoly, c: &DensePoly) -> RPoly {
        RPoly::new(a.coeffs.iter().map(|ai| self.mul(ai, c)).collect())
    }

    pub fn rpoly_reduce(&self, a: &RPoly) -> RPoly {
        RPoly::new(a.coeffs.iter().map(|c| self.reduce(c)).collect())
    }

    /// Division by a monic divisor.
    pub fn rpoly_divrem_monic(&self, a: &RPoly, b: &RPoly) -> Result<(RPoly, RPoly), AlgebraError> {
        if !b.is_monic() {
            return Err(AlgebraError::NonMonicDivisor);
        }
        let db = b.coeffs.len() - 1;
        let mut r = a.coeffs.clone();
        if r.len() <= db {
            return Ok((RPoly::zero(), a.clone()));
        }
        let mut q = vec![self.zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let c = r[k + db].clone();
            if c.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                r[k + j] = self.sub(&r[k + j], &self.mul(&c, bj));
            }
            q[k] = c;
        }
        r.truncate(db);
        Ok((RPoly::new(q), RPoly::new(r)))
    }

    /// `g(at)` for an element `at` of R.
    pub fn rpoly_eval(&self, g: &RPoly, at: &DensePoly) -> DensePoly {
        g.coeffs
            .iter()
            .rev()
            .fold(self.zero(), |acc, c| self.add(&self.mul(&acc, at), c))
    }

    /// `g(s)` for a scalar `s`.
    pub fn rpoly_eval_scalar(&self, g: &RPoly, s: FpElem) -> DensePoly {
        g.coeffs
            .iter()
            .rev()
            .fold(self.zero(), |acc, c| self.add(&acc.scale(s), c))
    }

    /// `g(p(y))` for a scalar polynomial `p`.
    pub fn rpoly_compose_scalar(&self, g: &RPoly, p: &DensePoly) -> RPoly {
        let inner = self.rpoly_from_scalar(p);
        g.coeffs.iter().rev().fold(RPoly::zero(), |acc, c| {
            self.rpoly_add(&self.rpoly_mul(&acc, &inner), &RPoly::new(vec![c.clone()]))
        })
    }

    /// Scales `a` to be monic, or splits on a zero-divisor leading coefficient.
    pub fn rpoly_monic(&self, a: &RPoly) -> Result<Outcome<RPoly>, AlgebraError> {
        let lc = a.leading().ok_or(AlgebraError::ZeroElement)?;
        if lc.is_one() {
            return Ok(Outcome::Value(a.clone()));
        }
        let inv = crate::try_value!(self.invert(lc)?);
        Ok(Outcome::Value(self.rpoly_scale(a, &inv)))
    }

    /// Monic gcd in `R[y]`, equal at every root of the modulus to the gcd of
    /// the specialized polynomials.
    ///
    /// A zero-divisor leading coefficient `d` splits the ring into the parts
    /// modulo `gcd` and cofactor; the gcd is recomputed in each part and the
    /// two answers are glued back by CRT when their degrees agree. Split is
    /// returned exactly when the degree differs between roots.
    pub fn rpoly_gcd(&self, g: &RPoly, h: &RPoly) -> Result<Outcome<RPoly>, AlgebraError> {
        if g.is_zero() && h.is_zero() {
            return Err(AlgebraError::BothZero);
        }
        match self.euclid(g, h)? {
            Ok(v) => Ok(Outcome::Value(v)),
            Err(d) => self.recombine(g, h, d),
        }
    }

    /// Plain Euclid; `Err(d)` carries the zero-divisor gcd that stopped it.
    fn euclid(&self, g: &RPoly, h: &RPoly) -> Result<Result<RPoly, DensePoly>, AlgebraError> {
        let (mut a, mut b) = (self.rpoly_reduce(g), self.rpoly_reduce(h));
        loop {
            if b.is_zero() {
                return Ok(match self.rpoly_monic(&a)? {
                    Outcome::Value(v) => Ok(v),
                    Outcome::Split(c) => Err(c.factor().clone()),
                });
            }
            b = match self.rpoly_monic(&b)? {
                Outcome::Value(v) => v,
                Outcome::Split(c) => return Ok(Err(c.factor().clone())),
            };
            let (_, r) = self.rpoly_divrem_monic(&a, &b)?;
            a = b;
            b = r;
        }
    }

    fn recombine(&self, g: &RPoly, h: &RPoly, d: DensePoly) -> Result<Outcome<RPoly>, AlgebraError> {
        let f = self.modulus();
        let cof = f.exact_div(&d)?.ok_or(AlgebraError::NotAProperFactor)?;
        let r1 = RingR::sub_ring(d.clone());
        let r2 = RingR::sub_ring(cof);
        let part = |r: &RingR| -> Result<Outcome<Option<RPoly>>, AlgebraError> {
            let (a, b) = (r.rpoly_reduce(g), r.rpoly_reduce(h));
            if a.is_zero() && b.is_zero() {
                return Ok(Outcome::Value(None));
            }
            Ok(match r.rpoly_gcd(&a, &b)? {
                Outcome::Value(v) => Outcome::Value(Some(v)),
                Outcome::Split(c) => Outcome::Split(SplitCert::new(c.factor().clone(), f.clone())?),
            })
        };
        let g1 = crate::try_value!(part(&r1)?);
        let g2 = crate::try_value!(part(&r2)?);
        let (g1, g2) = match (g1, g2) {
            (Some(a), Some(b)) if a.degree() == b.degree() => (a, b),
            _ => return Ok(Outcome::Split(SplitCert::new(d, f.clone())?)),
        };
        let inv = match r2.invert(&r2.reduce(&d))? {
            Outcome::Value(v) => v,
            Outcome::Split(_) => unreachable!("coprime parts of a squarefree modulus"),
        };
        let coeffs = g1
            .coeffs
            .iter()
            .zip(&g2.coeffs)
            .map(|(a, b)| r1.crt(&r2, a, b, &inv))
            .collect();
        Ok(Outcome::Value(RPoly::new(coeffs)))
    }
}
