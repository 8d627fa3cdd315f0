//! Univariate factorization over the rationals, bounded by a degree budget.
//!
//! Squarefree decomposition first, then rational roots, then Kronecker
//! interpolation for factors up to the budget. Anything the budget (or a
//! divisor-enumeration cap) cannot settle is returned as a flagged, possibly
//! reducible remainder: a true divisor either way.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

use crate::dense::DensePoly;
use crate::error::PolyError;
use crate::intfact::divisors_capped;
use crate::scalar::{rat_sqrt, Int, Rat};
use crate::unipoly::UniPoly;

/// Combined cap on divisor combinations per Kronecker attempt.
const KRONECKER_COMBO_CAP: usize = 200_000;

/// Result of bounded factorization: `input = unit * prod irreducible^mult *
/// prod unsplit^mult`, with the `unsplit` parts true divisors that the
/// budget could not resolve further.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub unit: Rat,
    pub irreducible: Vec<(DensePoly, u32)>,
    pub unsplit: Vec<(DensePoly, u32)>,
}

impl Factorization {
    /// All factor pieces, irreducible or not.
    pub fn all_factors(&self) -> impl Iterator<Item = &(DensePoly, u32)> {
        self.irreducible.iter().chain(self.unsplit.iter())
    }

    pub fn reassemble(&self) -> DensePoly {
        let mut p = DensePoly::constant(self.unit.clone());
        for (f, m) in self.all_factors() {
            p = p.mul(&f.pow(*m));
        }
        p
    }
}

/// All rational roots of `p` with multiplicities. `p` must be nonzero.
pub fn rational_roots_dense(p: &DensePoly) -> Vec<(Rat, u32)> {
    assert!(!p.is_zero(), "rational roots of the zero polynomial");
    let mut out = Vec::new();
    let mut work = p.clone();
    // roots at zero
    let zshift = work.coeffs().iter().position(|c| !c.is_zero()).unwrap();
    if zshift > 0 {
        out.push((Rat::zero(), zshift as u32));
        work = DensePoly::new(work.coeffs()[zshift..].to_vec());
    }
    if work.is_constant() {
        return out;
    }
    let prim = work.primitive_part();
    let ints = prim.int_coeffs().expect("primitive part is integer");
    let a0 = ints.first().unwrap().clone();
    let alead = ints.last().unwrap().clone();
    let ps = divisors_capped(&a0, usize::MAX).expect("uncapped");
    let qs = divisors_capped(&alead, usize::MAX).expect("uncapped");
    let mut candidates = BTreeSet::new();
    for num in &ps {
        for den in &qs {
            if num.gcd(den).is_one() {
                let r = Rat::new(num.clone(), den.clone());
                candidates.insert(r.clone());
                candidates.insert(-r);
            }
        }
    }
    let mut rest = prim;
    for r in candidates {
        if !rest.eval(&r).is_zero() {
            continue;
        }
        // divide out (x - r) repeatedly
        let lin = DensePoly::new(vec![-r.clone(), Rat::one()]);
        let mut mult = 0;
        loop {
            let (q, rem) = rest.div_rem(&lin);
            if rem.is_zero() {
                rest = q;
                mult += 1;
            } else {
                break;
            }
        }
        out.push((r, mult));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Exact square root of a univariate polynomial, normalized to positive
/// leading coefficient; `None` when `p` is not a perfect square.
pub fn dense_sqrt(p: &DensePoly) -> Option<DensePoly> {
    if p.is_zero() {
        return None;
    }
    let deg = p.degree().unwrap();
    if deg % 2 != 0 {
        return None;
    }
    if p.lc().is_negative() {
        return None;
    }
    let d = deg / 2;
    let mut q = vec![Rat::zero(); d + 1];
    q[d] = rat_sqrt(&p.lc())?;
    let two_qd = q[d].clone() * Rat::from_integer(Int::from(2));
    for j in (0..d).rev() {
        // match the coefficient of x^(d+j): p[d+j] = 2 q_d q_j + known terms
        let mut s = p.coeff(d + j);
        for i in j + 1..d {
            s -= q[i].clone() * q[d + j - i].clone();
        }
        q[j] = s / two_qd.clone();
    }
    let cand = DensePoly::new(q);
    if cand.mul(&cand) == *p {
        Some(cand)
    } else {
        None
    }
}

/// Search for a degree-`dd` divisor of squarefree primitive-integer `p` by
/// Kronecker interpolation. `Ok(None)`: certified no such divisor.
/// `Err(())`: the divisor enumeration cap was hit, nothing certified.
fn kronecker_divisor(p: &DensePoly, dd: usize) -> Result<Option<DensePoly>, ()> {
    // evaluation points 0, 1, -1, 2, -2, ...
    let mut points = Vec::with_capacity(dd + 1);
    let mut k = 0i64;
    while points.len() < dd + 1 {
        points.push(Rat::from_integer(Int::from(k)));
        if k > 0 {
            k = -k;
        } else {
            k = -k + 1;
        }
    }
    let mut divisor_lists: Vec<Vec<Int>> = Vec::with_capacity(points.len());
    let mut combos = 1usize;
    for (i, t) in points.iter().enumerate() {
        let v = p.eval(t);
        debug_assert!(v.denom().is_one());
        let vi = v.numer().clone();
        if vi.is_zero() {
            // rational root; callers strip those first
            return Err(());
        }
        let divs = divisors_capped(&vi, KRONECKER_COMBO_CAP).ok_or(())?;
        let mut signed: Vec<Int> = Vec::with_capacity(divs.len() * 2);
        for d in divs {
            signed.push(d.clone());
            if i > 0 {
                signed.push(-d);
            }
        }
        combos = combos.checked_mul(signed.len()).ok_or(())?;
        if combos > KRONECKER_COMBO_CAP {
            return Err(());
        }
        divisor_lists.push(signed);
    }
    // odometer over divisor choices
    let mut idx = vec![0usize; divisor_lists.len()];
    loop {
        let values: Vec<Rat> = idx
            .iter()
            .enumerate()
            .map(|(i, &j)| Rat::from_integer(divisor_lists[i][j].clone()))
            .collect();
        if let Some(g) = interpolate(&points, &values) {
            if g.degree() == Some(dd) {
                let gp = g.primitive_part();
                if !gp.is_constant() && p.div_rem(&gp).1.is_zero() {
                    return Ok(Some(gp));
                }
            }
        }
        // advance
        let mut pos = 0;
        loop {
            idx[pos] += 1;
            if idx[pos] < divisor_lists[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
            if pos == idx.len() {
                return Ok(None);
            }
        }
    }
}

/// Lagrange interpolation; `None` if the data is degenerate.
fn interpolate(points: &[Rat], values: &[Rat]) -> Option<DensePoly> {
    let mut acc = DensePoly::zero();
    for (i, (ti, vi)) in points.iter().zip(values).enumerate() {
        let mut basis = DensePoly::one();
        let mut denom = Rat::one();
        for (j, tj) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = basis.mul(&DensePoly::new(vec![-tj.clone(), Rat::one()]));
            denom *= ti.clone() - tj.clone();
        }
        if denom.is_zero() {
            return None;
        }
        acc = acc.add(&basis.scale(&(vi.clone() / denom)));
    }
    Some(acc)
}

/// Split a squarefree primitive-integer polynomial with no rational roots.
/// Returns `(irreducible pieces, unsplit pieces)`.
fn split_squarefree(p: DensePoly, budget: u32) -> (Vec<DensePoly>, Vec<DensePoly>) {
    let deg = match p.degree() {
        None | Some(0) => return (Vec::new(), Vec::new()),
        Some(d) => d,
    };
    if deg == 1 {
        return (vec![p], Vec::new());
    }
    let half = deg / 2;
    let mut capped = false;
    for dd in 2..=half.min(budget as usize) {
        match kronecker_divisor(&p, dd) {
            Ok(Some(g)) => {
                let rest = p.div_rem(&g).0.primitive_part();
                let (mut i1, mut u1) = split_squarefree(g, budget);
                let (i2, u2) = split_squarefree(rest, budget);
                i1.extend(i2);
                u1.extend(u2);
                return (i1, u1);
            }
            Ok(None) => {}
            Err(()) => capped = true,
        }
    }
    // no divisor of degree <= min(half, budget): irreducible iff the whole
    // search space was covered without hitting the cap
    if !capped && budget as usize >= half {
        (vec![p], Vec::new())
    } else {
        (Vec::new(), vec![p])
    }
}

/// Bounded factorization of a dense univariate polynomial.
pub fn factor_bounded_dense(p: &DensePoly, budget: u32) -> Factorization {
    assert!(!p.is_zero(), "factorization of the zero polynomial");
    let mut unit = p.content();
    if p.lc().is_negative() {
        unit = -unit;
    }
    let prim = p.primitive_part();
    let mut fact = Factorization {
        unit,
        irreducible: Vec::new(),
        unsplit: Vec::new(),
    };
    if prim.is_constant() {
        return fact;
    }
    for (sf, mult) in prim.squarefree_decomposition() {
        let mut rest = sf.clone();
        for (root, rmult) in rational_roots_dense(&sf) {
            debug_assert_eq!(rmult, 1);
            let lin = DensePoly::new(vec![-root.clone(), Rat::one()]).primitive_part();
            rest = rest.div_rem(&DensePoly::new(vec![-root, Rat::one()])).0;
            fact.irreducible.push((lin, mult));
        }
        let rest = rest.primitive_part();
        let (irr, unsplit) = split_squarefree(rest, budget);
        for f in irr {
            fact.irreducible.push((f, mult));
        }
        for f in unsplit {
            fact.unsplit.push((f, mult));
        }
    }
    fact.irreducible.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    fact
}

impl UniPoly<Rat> {
    /// Monic gcd; requires parameter-free coefficients.
    pub fn gcd_uni(&self, other: &Self) -> Result<UniPoly<Rat>, PolyError> {
        if self.is_zero() {
            return Ok(Self::from_dense(
                other.var_name(),
                &other.to_dense()?.monic(),
            ));
        }
        if other.is_zero() {
            return Ok(Self::from_dense(self.var_name(), &self.to_dense()?.monic()));
        }
        let a = self.to_dense()?;
        let b = other.to_dense()?;
        Ok(Self::from_dense(self.var_name(), &a.gcd(&b)))
    }

    /// Squarefree part (same roots, multiplicity one).
    pub fn squarefree_part(&self) -> Result<UniPoly<Rat>, PolyError> {
        Ok(Self::from_dense(
            self.var_name(),
            &self.to_dense()?.squarefree_part(),
        ))
    }

    /// All rational roots with multiplicities.
    pub fn rational_roots(&self) -> Result<Vec<(Rat, u32)>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(rational_roots_dense(&self.to_dense()?))
    }

    /// Exact polynomial square root (positive leading coefficient), or
    /// `None` when the polynomial is not a square.
    pub fn poly_sqrt(&self) -> Result<Option<UniPoly<Rat>>, PolyError> {
        let d = self.to_dense()?;
        Ok(dense_sqrt(&d).map(|q| Self::from_dense(self.var_name(), &q)))
    }

    /// Bounded factorization (see [`factor_bounded_dense`]).
    pub fn factor_bounded(&self, budget: u32) -> Result<Factorization, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(factor_bounded_dense(&self.to_dense()?, budget))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn roots_of_quadratic() {
        // 2x^2 - 3x + 1 = (2x-1)(x-1)
        let p = DensePoly::from_i64(&[1, -3, 2]);
        let roots = rational_roots_dense(&p);
        assert_eq!(roots, vec![(rat(1, 2), 1), (rat(1, 1), 1)]);
    }

    #[test]
    fn double_root() {
        // (4a-5)^2 = 16a^2 - 40a + 25, root 5/4 twice
        let p = DensePoly::from_i64(&[25, -40, 16]);
        assert_eq!(rational_roots_dense(&p), vec![(rat(5, 4), 2)]);
    }

    #[test]
    fn no_rational_roots() {
        // a^2 - a - 1
        let p = DensePoly::from_i64(&[-1, -1, 1]);
        assert!(rational_roots_dense(&p).is_empty());
    }

    #[test]
    fn sqrt_of_square() {
        let q = DensePoly::from_i64(&[-1, 2, 4]); // 4v^2+2v-1
        let sq = q.mul(&q);
        assert_eq!(dense_sqrt(&sq), Some(q));
        assert_eq!(dense_sqrt(&DensePoly::from_i64(&[1, 0, 1])), None);
    }

    #[test]
    fn sqrt_perfect_square_with_negative_lc_candidate() {
        // (x+1)^2 but from the negated polynomial: not a square
        let p = DensePoly::from_i64(&[-1, -2, -1]);
        assert_eq!(dense_sqrt(&p), None);
    }

    #[test]
    fn factor_with_multiplicity() {
        // -y^2 (y^3 - 5y^2 + y - 1)
        let cubic = DensePoly::from_i64(&[-1, 1, -5, 1]);
        let p = DensePoly::monomial(2).mul(&cubic).neg();
        let f = factor_bounded_dense(&p, 6);
        assert_eq!(f.unit, rat(-1, 1));
        assert!(f.unsplit.is_empty());
        assert_eq!(f.irreducible.len(), 2);
        assert_eq!(f.irreducible[0], (DensePoly::monomial(1), 2));
        assert_eq!(f.irreducible[1], (cubic, 1));
        assert_eq!(f.reassemble(), p);
    }

    #[test]
    fn factor_x_squared_minus_one() {
        let p = DensePoly::from_i64(&[-1, 0, 1]);
        let f = factor_bounded_dense(&p, 6);
        let fs: Vec<_> = f.irreducible.iter().map(|(p, m)| (p.clone(), *m)).collect();
        assert_eq!(
            fs,
            vec![
                (DensePoly::from_i64(&[-1, 1]), 1),
                (DensePoly::from_i64(&[1, 1]), 1)
            ]
        );
    }

    #[test]
    fn factor_quartic_product_of_quadratics() {
        // (mu^2+mu+1)(5mu^2-7mu+5)
        let a = DensePoly::from_i64(&[1, 1, 1]);
        let b = DensePoly::from_i64(&[5, -7, 5]);
        let p = a.mul(&b);
        let f = factor_bounded_dense(&p, 6);
        assert!(f.unsplit.is_empty());
        let got: Vec<DensePoly> = f.irreducible.iter().map(|(p, _)| p.clone()).collect();
        assert!(got.contains(&a));
        assert!(got.contains(&b));
    }

    #[test]
    fn quartic_irreducible() {
        // mu^4 + 1
        let p = DensePoly::from_i64(&[1, 0, 0, 0, 1]);
        let f = factor_bounded_dense(&p, 6);
        assert_eq!(f.irreducible, vec![(p, 1)]);
        assert!(f.unsplit.is_empty());
    }
}
