//! Arithmetic in the quotient ring Q[t]/(m): exact verification of power
//! relations among roots of a defining polynomial.

use num_traits::One;

use crate::dense::DensePoly;
use crate::scalar::Rat;

pub fn polymod_mul(a: &DensePoly, b: &DensePoly, m: &DensePoly) -> DensePoly {
    a.mul(b).rem(m)
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm; `None`
/// when `gcd(a, m)` is nonconstant.
pub fn polymod_inv(a: &DensePoly, m: &DensePoly) -> Option<DensePoly> {
    // maintain r = s * a mod m
    let mut r0 = m.clone();
    let mut r1 = a.rem(m);
    let mut s0 = DensePoly::zero();
    let mut s1 = DensePoly::one();
    while !r1.is_zero() {
        let (q, r2) = r0.div_rem(&r1);
        let s2 = s0.sub(&q.mul(&s1));
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if r0.degree() != Some(0) {
        return None;
    }
    let inv_lead = Rat::one() / r0.lc();
    Some(s0.scale(&inv_lead).rem(m))
}

/// `a^e mod m`, with negative exponents through the modular inverse.
pub fn polymod_pow(a: &DensePoly, e: i64, m: &DensePoly) -> Option<DensePoly> {
    let base = if e < 0 {
        polymod_inv(a, m)?
    } else {
        a.rem(m)
    };
    let mut acc = DensePoly::one();
    let mut b = base;
    let mut k = e.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc = polymod_mul(&acc, &b, m);
        }
        b = polymod_mul(&b, &b, m);
        k >>= 1;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn inverse_round_trip() {
        // m = t^2 - (3/2) t + 1, a = t: a * a^-1 = 1
        let m = DensePoly::new(vec![rat(1, 1), rat(-3, 2), rat(1, 1)]);
        let t = DensePoly::from_i64(&[0, 1]);
        let inv = polymod_inv(&t, &m).unwrap();
        assert_eq!(polymod_mul(&t, &inv, &m), DensePoly::one());
    }

    #[test]
    fn product_of_roots_is_constant_term() {
        // m = t^2 - (3/2)t + 1: roots mu, conj with mu*conj = 1:
        // t * ((3/2) - t) mod m == 1
        let m = DensePoly::new(vec![rat(1, 1), rat(-3, 2), rat(1, 1)]);
        let t = DensePoly::from_i64(&[0, 1]);
        let other = DensePoly::new(vec![rat(3, 2)]).sub(&t);
        assert_eq!(polymod_mul(&t, &other, &m), DensePoly::one());
    }

    #[test]
    fn cyclotomic_power_identity() {
        // t^8 mod Phi_8 = 1, t^4 mod Phi_8 = -1
        let m = DensePoly::from_i64(&[1, 0, 0, 0, 1]);
        assert_eq!(polymod_pow(&DensePoly::from_i64(&[0, 1]), 8, &m).unwrap(), DensePoly::one());
        assert_eq!(
            polymod_pow(&DensePoly::from_i64(&[0, 1]), 4, &m).unwrap(),
            DensePoly::from_i64(&[-1])
        );
    }

    #[test]
    fn negative_power() {
        // in Q[t]/(t^2 - 2): t^-2 = 1/2
        let m = DensePoly::from_i64(&[-2, 0, 1]);
        let r = polymod_pow(&DensePoly::from_i64(&[0, 1]), -2, &m).unwrap();
        assert_eq!(r, DensePoly::new(vec![rat(1, 2)]));
    }
}
