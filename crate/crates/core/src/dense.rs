//! Dense univariate polynomials over the rationals.
//!
//! Internal workhorse behind the univariate views: Euclidean division, gcd,
//! squarefree decomposition, evaluation. Coefficients are stored ascending.

use num_traits::{One, Signed, Zero};

use crate::error::PolyError;
use crate::scalar::{rat_gcd, rat_to_f64, Int, Rat};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DensePoly(Vec<Rat>);

impl DensePoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        DensePoly(coeffs)
    }

    pub fn zero() -> Self {
        DensePoly(Vec::new())
    }

    pub fn one() -> Self {
        DensePoly(vec![Rat::one()])
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// x^n with unit coefficient.
    pub fn monomial(n: usize) -> Self {
        let mut v = vec![Rat::zero(); n + 1];
        v[n] = Rat::one();
        DensePoly(v)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rat::from_integer(Int::from(c))).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.0.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> Rat {
        self.0.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.0.iter().rev() {
            acc = acc * x + rat_to_f64(c);
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + other.coeff(i));
        }
        Self::new(v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) - other.coeff(i));
        }
        Self::new(v)
    }

    pub fn neg(&self) -> Self {
        DensePoly(self.0.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        DensePoly(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::new(v)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        for _ in 0..e {
            result = result.mul(self);
        }
        result
    }

    /// Euclidean division over the field of rationals.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().unwrap();
        if self.0.len() < divisor.0.len() {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.0.clone();
        let mut quot = vec![Rat::zero(); self.0.len() - divisor.0.len() + 1];
        let dlc = divisor.lc();
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / dlc.clone();
            if !c.is_zero() {
                for (j, b) in divisor.0.iter().enumerate() {
                    rem[k + j] -= &c * b;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn exact_div(&self, divisor: &Self) -> Result<Self, PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let (q, r) = self.div_rem(divisor);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::NotDivisible)
        }
    }

    pub fn derivative(&self) -> Self {
        if self.0.len() <= 1 {
            return Self::zero();
        }
        let mut v = Vec::with_capacity(self.0.len() - 1);
        for (i, c) in self.0.iter().enumerate().skip(1) {
            v.push(c * Rat::from_integer(Int::from(i)));
        }
        Self::new(v)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.lc();
        self.scale(&(Rat::one() / lc))
    }

    /// Monic gcd; `gcd(0, q)` is the monic normalization of `q`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Content: positive rational g with self/g integer-primitive.
    pub fn content(&self) -> Rat {
        let mut g = Rat::zero();
        for c in &self.0 {
            g = rat_gcd(&g, c);
        }
        g
    }

    /// Primitive integer form with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        DensePoly(self.0.iter().map(|x| x / &c).collect())
    }

    /// Coefficients as integers; only valid on integer-coefficient polys
    /// (e.g. after `primitive_part`).
    pub fn int_coeffs(&self) -> Option<Vec<Int>> {
        self.0
            .iter()
            .map(|c| {
                if c.denom().is_one() {
                    Some(c.numer().clone())
                } else {
                    None
                }
            })
            .collect()
    }

    /// Squarefree part: same roots, multiplicity one; primitive, positive lc.
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        if self.degree() == Some(0) {
            return Self::one();
        }
        let g = self.gcd(&self.derivative());
        let q = self.div_rem(&g).0;
        q.primitive_part()
    }

    /// Yun's squarefree decomposition: pairs `(factor, multiplicity)` with
    /// the factors squarefree, pairwise coprime, primitive.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let p = self.primitive_part();
        if p.is_constant() {
            return Vec::new();
        }
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        let mut b = p.div_rem(&a0).0;
        let mut c = dp.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut mult = 1u32;
        loop {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.primitive_part(), mult));
            }
            b = b.div_rem(&a).0;
            if b.is_constant() {
                break;
            }
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            mult += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn div_rem_roundtrip() {
        let p = DensePoly::from_i64(&[-1, 0, 0, 0, 1]); // x^4 - 1
        let d = DensePoly::from_i64(&[-1, 1]); // x - 1
        let (q, r) = p.div_rem(&d);
        assert!(r.is_zero());
        assert_eq!(q, DensePoly::from_i64(&[1, 1, 1, 1]));
    }

    #[test]
    fn gcd_shared_root() {
        // gcd(x^2-1, x^2-2x+1) = x-1
        let a = DensePoly::from_i64(&[-1, 0, 1]);
        let b = DensePoly::from_i64(&[1, -2, 1]);
        assert_eq!(a.gcd(&b), DensePoly::from_i64(&[-1, 1]));
    }

    #[test]
    fn gcd_coprime() {
        let a = DensePoly::from_i64(&[1, 0, 1]);
        let b = DensePoly::from_i64(&[-1, 0, 1]);
        assert_eq!(a.gcd(&b), DensePoly::one());
    }

    #[test]
    fn gcd_with_zero() {
        let q = DensePoly::from_i64(&[2, 4]);
        assert_eq!(DensePoly::zero().gcd(&q), q.monic());
    }

    #[test]
    fn squarefree_part_drops_multiplicity() {
        // (x-1)^2 (x+2) -> (x-1)(x+2)
        let p = DensePoly::from_i64(&[-1, 1]).pow(2).mul(&DensePoly::from_i64(&[2, 1]));
        let sf = p.squarefree_part();
        assert_eq!(sf, DensePoly::from_i64(&[-1, 1]).mul(&DensePoly::from_i64(&[2, 1])));
    }

    #[test]
    fn yun_decomposition() {
        // x^2 (x^3 - 5x^2 + x - 1): factors x (mult 2) and the cubic (mult 1)
        let cubic = DensePoly::from_i64(&[-1, 1, -5, 1]);
        let p = DensePoly::monomial(2).mul(&cubic);
        let dec = p.squarefree_decomposition();
        assert_eq!(dec.len(), 2);
        assert_eq!(dec[0], (cubic, 1));
        assert_eq!(dec[1], (DensePoly::monomial(1), 2));
    }

    #[test]
    fn primitive_part_sign() {
        let p = DensePoly::new(vec![rat(2, 3), rat(-4, 3)]);
        assert_eq!(p.primitive_part(), DensePoly::from_i64(&[-1, 2]));
    }
}
