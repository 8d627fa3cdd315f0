//! Exact arithmetic in real quadratic extensions Q[sqrt(s)].

use num_traits::{Signed, Zero};
use std::fmt;

use crate::intfact::squarefree_core;
use crate::scalar::{rat_to_f64, Int, Rat};

/// `a + b*sqrt(s)` with `s` a squarefree integer >= 2; purely rational
/// values carry `b = 0` and `s = 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadExt {
    pub a: Rat,
    pub b: Rat,
    pub s: Int,
}

impl QuadExt {
    pub fn rational(a: Rat) -> Self {
        QuadExt {
            a,
            b: Rat::zero(),
            s: Int::from(1),
        }
    }

    /// `a + b*sqrt(rad)` for a nonnegative rational radicand, normalizing
    /// the radicand to its squarefree integer core.
    pub fn with_root(a: Rat, b: Rat, rad: &Rat) -> Option<Self> {
        if rad.is_negative() {
            return None;
        }
        if rad.is_zero() || b.is_zero() {
            return Some(Self::rational(a));
        }
        // sqrt(p/q) = sqrt(p q) / q
        let pq = rad.numer() * rad.denom();
        let (core, sq) = squarefree_core(&pq);
        let scale = Rat::new(sq, rad.denom().clone());
        if core == Int::from(1) {
            return Some(Self::rational(a + b * scale));
        }
        Some(QuadExt {
            a,
            b: b * scale,
            s: core,
        })
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<Rat> {
        self.is_rational().then(|| self.a.clone())
    }

    fn compatible(&self, other: &Self) -> bool {
        self.is_rational() || other.is_rational() || self.s == other.s
    }

    fn joint_s(&self, other: &Self) -> Int {
        if self.is_rational() {
            other.s.clone()
        } else {
            self.s.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Option<Self> {
        if !self.compatible(other) {
            return None;
        }
        let s = self.joint_s(other);
        let out = QuadExt {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            s,
        };
        Some(out.normalized())
    }

    pub fn sub(&self, other: &Self) -> Option<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QuadExt {
            a: -self.a.clone(),
            b: -self.b.clone(),
            s: self.s.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Option<Self> {
        if !self.compatible(other) {
            return None;
        }
        let s = self.joint_s(other);
        let srat = Rat::from_integer(s.clone());
        let a = &self.a * &other.a + &self.b * &other.b * srat;
        let b = &self.a * &other.b + &self.b * &other.a;
        Some(QuadExt { a, b, s }.normalized())
    }

    /// Field norm `a^2 - b^2 s`.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - &self.b * &self.b * Rat::from_integer(self.s.clone())
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(QuadExt {
            a: &self.a / &n,
            b: -self.b.clone() / n,
            s: self.s.clone(),
        }
        .normalized())
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        self.mul(&other.inv()?)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn normalized(mut self) -> Self {
        if self.b.is_zero() {
            self.s = Int::from(1);
        }
        self
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        rat_to_f64(&self.a) + rat_to_f64(&self.b) * self.s.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    /// Evaluate a dense rational polynomial at this value.
    pub fn eval_poly(&self, p: &crate::dense::DensePoly) -> QuadExt {
        let mut acc = QuadExt::rational(Rat::zero());
        for c in p.coeffs().iter().rev() {
            acc = acc
                .mul(self)
                .and_then(|t| t.add(&QuadExt::rational(c.clone())))
                .expect("same extension");
        }
        acc
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt({})", self.b, self.s)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn radicand_normalization() {
        // sqrt(8) = 2 sqrt(2)
        let x = QuadExt::with_root(rat_int(0), rat_int(1), &rat_int(8)).unwrap();
        assert_eq!(x.b, rat_int(2));
        assert_eq!(x.s, Int::from(2));
        // sqrt(9/4) = 3/2 is rational
        let y = QuadExt::with_root(rat_int(1), rat_int(1), &rat(9, 4)).unwrap();
        assert_eq!(y.as_rational(), Some(rat(5, 2)));
    }

    #[test]
    fn arithmetic_in_sqrt5() {
        // (2 + sqrt 5)(2 - sqrt 5) = -1
        let p = QuadExt::with_root(rat_int(2), rat_int(1), &rat_int(5)).unwrap();
        let q = QuadExt::with_root(rat_int(2), rat_int(-1), &rat_int(5)).unwrap();
        assert_eq!(p.mul(&q).unwrap().as_rational(), Some(rat_int(-1)));
        // division
        let r = p.div(&q).unwrap();
        assert_eq!(r.mul(&q).unwrap(), p);
    }

    #[test]
    fn incompatible_extensions() {
        let a = QuadExt::with_root(rat_int(0), rat_int(1), &rat_int(2)).unwrap();
        let b = QuadExt::with_root(rat_int(0), rat_int(1), &rat_int(3)).unwrap();
        assert!(a.add(&b).is_none());
    }

    #[test]
    fn poly_evaluation() {
        // M_8 = 2v^2 - 1 vanishes at sqrt(2)/2
        let m8 = crate::dense::DensePoly::from_i64(&[-1, 0, 2]);
        let v = QuadExt::with_root(rat_int(0), rat(1, 2), &rat_int(2)).unwrap();
        assert!(v.eval_poly(&m8).is_zero());
    }
}
