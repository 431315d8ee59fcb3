use crate::field::FpElem;
use crate::poly::DensePoly;

use super::{AlgebraError, RPoly, RingR};

/// `S = R[y]/(f')` where `f(y) = (y - X) f'(y)` over R.
#[derive(Debug, Clone)]
pub struct SAlg {
    ring: RingR,
    fprime: RPoly,
    m: usize,
}

/// An element of S, stored as its reduced representative in `R[y]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SElem(RPoly);

impl SElem {
    pub fn as_rpoly(&self) -> &RPoly {
        &self.0
    }

    /// Component at the root pair `(xi, xj)`, `xi != xj`.
    pub fn at_pair(&self, xi: FpElem, xj: FpElem) -> FpElem {
        let ctx = match self.0.coeffs().first() {
            Some(c) => *c.ctx(),
            None => return FpElem::ZERO,
        };
        self.0
            .coeffs()
            .iter()
            .rev()
            .fold(FpElem::ZERO, |acc, c| ctx.add(ctx.mul(acc, xj), c.eval(xi)))
    }
}

impl SAlg {
    pub fn new(ring: RingR) -> Self {
        let f_y = ring.rpoly_from_scalar(ring.modulus());
        let lin = ring.rpoly_linear(&ring.x());
        let (fprime, rem) = ring.rpoly_divrem_monic(&f_y, &lin).expect("y - X is monic");
        debug_assert!(rem.is_zero());
        let m = ring.degree() - 1;
        SAlg { ring, fprime, m }
    }

    pub fn ring(&self) -> &RingR {
        &self.ring
    }

    pub fn fprime(&self) -> &RPoly {
        &self.fprime
    }

    /// Rank of S over R, `n - 1`.
    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn elem(&self, a: &RPoly) -> SElem {
        let a = self.ring.rpoly_reduce(a);
        if a.degree().is_none_or(|d| d < self.m) {
            return SElem(a);
        }
        SElem(self.ring.rpoly_divrem_monic(&a, &self.fprime).expect("monic").1)
    }

    pub fn zero(&self) -> SElem {
        SElem(RPoly::zero())
    }

    pub fn one(&self) -> SElem {
        self.from_r(&self.ring.one())
    }

    /// The image of an element of R.
    pub fn from_r(&self, r: &DensePoly) -> SElem {
        SElem(RPoly::new(vec![self.ring.reduce(r)]))
    }

    pub fn scalar(&self, c: FpElem) -> SElem {
        self.from_r(&self.ring.scalar(c))
    }

    /// The class `X`.
    pub fn x(&self) -> SElem {
        self.from_r(&self.ring.x())
    }

    /// The class `Y`.
    pub fn y(&self) -> SElem {
        self.elem(&RPoly::new(vec![self.ring.zero(), self.ring.one()]))
    }

    pub fn add(&self, a: &SElem, b: &SElem) -> SElem {
        SElem(self.ring.rpoly_add(&a.0, &b.0))
    }

    pub fn sub(&self, a: &SElem, b: &SElem) -> SElem {
        SElem(self.ring.rpoly_sub(&a.0, &b.0))
    }

    pub fn neg(&self, a: &SElem) -> SElem {
        self.sub(&self.zero(), a)
    }

    pub fn scale(&self, a: &SElem, c: FpElem) -> SElem {
        SElem(RPoly::new(a.0.coeffs().iter().map(|x| x.scale(c)).collect()))
    }

    pub fn scale_r(&self, a: &SElem, r: &DensePoly) -> SElem {
        SElem(self.ring.rpoly_scale(&a.0, r))
    }

    pub fn mul(&self, a: &SElem, b: &SElem) -> SElem {
        self.elem(&self.ring.rpoly_mul(&a.0, &b.0))
    }

    pub fn pow(&self, a: &SElem, mut exp: u64) -> SElem {
        let mut base = a.clone();
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

    /// Characteristic polynomial over R of multiplication by `c` on the free
    /// R-module S with basis `1, Y, ..., Y^(m-1)`.
    ///
    /// Berkowitz's division-free recurrence, so zero divisors in R never need
    /// to be inverted.
    pub fn char_poly_over_r(&self, c: &SElem) -> Result<RPoly, AlgebraError> {
        let (n, p) = (self.ring.degree(), self.ring.ctx().p());
        if p <= n as u64 {
            return Err(AlgebraError::PTooSmall { n, p });
        }
        let m = self.m;
        let r = &self.ring;
        let y = self.y();
        let mut col = c.clone();
        let mut a = vec![vec![r.zero(); m]; m];
        for j in 0..m {
            for (i, row) in a.iter_mut().enumerate() {
                row[j] = col.0.coeff(i).cloned().unwrap_or_else(|| r.zero());
            }
            col = self.mul(&col, &y);
        }

        // Coefficients highest degree first.
        let mut vec = vec![r.one()];
        for k in (0..m).rev() {
            let s = m - 1 - k;
            let mut t = Vec::with_capacity(s + 2);
            t.push(r.one());
            t.push(r.neg(&a[k][k]));
            let mut d: Vec<DensePoly> = (k + 1..m).map(|i| a[i][k].clone()).collect();
            for _ in 0..s {
                let rd = (0..s).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(&a[k][k + 1 + j], &d[j])));
                t.push(r.neg(&rd));
                d = (0..s)
                    .map(|i| {
                        (0..s).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(&a[k + 1 + i][k + 1 + j], &d[j])))
                    })
                    .collect();
            }
            vec = (0..s + 2)
                .map(|i| {
                    (0..=i.min(s)).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(&t[i - j], &vec[j])))
                })
                .collect();
        }
        vec.reverse();
        Ok(RPoly::new(vec))
    }
}
