//! Sparse multivariate polynomials over a coefficient scalar.
//!
//! Terms live in a `BTreeMap` keyed by graded-lex monomials, so every
//! polynomial is in canonical form by construction: no zero coefficients are
//! stored and the zero polynomial has an empty term map.

use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::PolyError;
use crate::monomial::Monomial;
use crate::scalar::{rat_gcd, Coeff, Rat};

/// Ordered list of variable names shared by a family of polynomials.
#[derive(Clone, Debug, Eq)]
pub struct VarSet(Arc<Vec<String>>);

impl VarSet {
    pub fn new<S: Into<String>>(names: Vec<S>) -> Self {
        VarSet(Arc::new(names.into_iter().map(Into::into).collect()))
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.0[idx]
    }

    /// Union preserving `self`'s order, then unseen names of `other` in order.
    pub fn merged(&self, other: &VarSet) -> VarSet {
        if self.same(other) {
            return self.clone();
        }
        let mut names: Vec<String> = self.0.as_ref().clone();
        for n in other.0.iter() {
            if !names.iter().any(|m| m == n) {
                names.push(n.clone());
            }
        }
        VarSet(Arc::new(names))
    }

    fn same(&self, other: &VarSet) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

/// Sparse multivariate polynomial with coefficients in `C`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly<C: Coeff> {
    vars: VarSet,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> MultiPoly<C> {
    pub fn zero(vars: &VarSet) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &VarSet, c: C) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::unit(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, C::one())
    }

    /// The monomial `var^exp`.
    pub fn var_pow(vars: &VarSet, var: usize, exp: u32) -> Self {
        let mut p = Self::zero(vars);
        p.terms.insert(Monomial::of_var(vars.len(), var, exp), C::one());
        p
    }

    pub fn var(vars: &VarSet, var: usize) -> Self {
        Self::var_pow(vars, var, 1)
    }

    pub fn from_terms(vars: &VarSet, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_unit())
    }

    pub fn constant_value(&self) -> Option<C> {
        if self.terms.is_empty() {
            return Some(C::zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn contains_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(var) > 0)
    }

    /// Indices of variables that actually occur.
    pub fn vars_present(&self) -> Vec<usize> {
        (0..self.vars.len()).filter(|&i| self.contains_var(i)).collect()
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> C {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(C::zero)
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Rebuild this polynomial over a superset variable universe.
    pub fn with_vars(&self, vars: &VarSet) -> Self {
        if self.vars == *vars {
            let mut p = self.clone();
            p.vars = vars.clone();
            return p;
        }
        let map: Vec<usize> = self
            .vars
            .names()
            .iter()
            .map(|n| vars.index_of(n).expect("with_vars requires a superset"))
            .collect();
        let mut p = Self::zero(vars);
        for (m, c) in &self.terms {
            p.terms.insert(m.remap(&map, vars.len()), c.clone());
        }
        p
    }

    /// Align two polynomials onto a common variable universe.
    pub fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        if a.vars == b.vars {
            (a.clone(), b.clone())
        } else {
            let vars = a.vars.merged(&b.vars);
            (a.with_vars(&vars), b.with_vars(&vars))
        }
    }

    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> MultiPoly<D> {
        let mut p = MultiPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let d = f(c);
            if !d.is_zero() {
                p.terms.insert(m.clone(), d);
            }
        }
        p
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        self.map_coeffs(|x| x.clone() * c.clone())
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &C) -> Self {
        let mut p = Self::zero(&self.vars);
        if c.is_zero() {
            return p;
        }
        for (mm, cc) in &self.terms {
            p.terms.insert(mm.mul(m), cc.clone() * c.clone());
        }
        p
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut p = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[var] = e - 1;
            let mut factor = C::zero();
            for _ in 0..e {
                factor = factor + C::one();
            }
            p.add_term(Monomial::from_exponents(exps), c.clone() * factor);
        }
        p
    }

    /// Full evaluation at a point (one value per declared variable).
    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.vars.len());
        // power tables per variable
        let mut pows: Vec<Vec<C>> = Vec::with_capacity(point.len());
        for (i, v) in point.iter().enumerate() {
            let d = self.degree_in(i);
            let mut t = Vec::with_capacity(d as usize + 1);
            t.push(C::one());
            for k in 1..=d {
                let prev = t[(k - 1) as usize].clone();
                t.push(prev * v.clone());
            }
            pows.push(t);
        }
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = t * pows[i][e as usize].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Coefficients with respect to powers of `var`: entry `k` is the
    /// coefficient polynomial of `var^k` (with the `var` slot zeroed).
    pub fn coeffs_in(&self, var: usize) -> Vec<Self> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(&self.vars); d + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(var) as usize;
            let mut exps = m.exponents().to_vec();
            exps[var] = 0;
            out[e].add_term(Monomial::from_exponents(exps), c.clone());
        }
        out
    }

    /// Substitute `replacement` for `var` (Horner in `var`).
    pub fn subst(&self, var: usize, replacement: &Self) -> Self {
        let rep = if replacement.vars == self.vars {
            replacement.clone()
        } else {
            let vars = self.vars.merged(&replacement.vars);
            return self.with_vars(&vars).subst(var, &replacement.with_vars(&vars));
        };
        let coeffs = self.coeffs_in(var);
        let mut acc = Self::zero(&self.vars);
        for c in coeffs.into_iter().rev() {
            acc = &(&acc * &rep) + &c;
        }
        acc
    }

    /// Exact division; `Err(NotDivisible)` when `self` is not a multiple.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let (mut rem, div) = Self::aligned(self, divisor);
        let vars = rem.vars.clone();
        let (dm, dc) = {
            let (m, c) = div.leading().unwrap();
            (m.clone(), c.clone())
        };
        let mut quot = Self::zero(&vars);
        while !rem.is_zero() {
            let (rm, rc) = {
                let (m, c) = rem.leading().unwrap();
                (m.clone(), c.clone())
            };
            let qm = rm.try_div(&dm).ok_or(PolyError::NotDivisible)?;
            let qc = rc / dc.clone();
            let t = div.mul_monomial(&qm, &qc);
            rem = &rem - &t;
            quot.add_term(qm, qc);
            // progress check: leading monomial must strictly decrease
            if let Some((m2, _)) = rem.leading() {
                if *m2 >= rm {
                    return Err(PolyError::NotDivisible);
                }
            }
        }
        Ok(quot)
    }

    pub fn divides(&self, multiple: &Self) -> bool {
        multiple.exact_div(self).is_ok()
    }
}

impl MultiPoly<Rat> {
    /// Content: positive rational `g` with `self / g` integer and primitive.
    pub fn content(&self) -> Rat {
        let mut g = Rat::zero();
        for c in self.terms.values() {
            g = rat_gcd(&g, c);
        }
        g
    }

    /// Signed content: carries the sign of the leading coefficient, so the
    /// primitive part has a positive leading coefficient.
    pub fn signed_content(&self) -> Rat {
        let c = self.content();
        if self.leading_coeff().is_negative() {
            -c
        } else {
            c
        }
    }

    /// Primitive part: integer coefficients, content 1, positive leading
    /// coefficient. Zero stays zero.
    pub fn primitive_part(&self) -> MultiPoly<Rat> {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.signed_content();
        self.map_coeffs(|x| x / &c)
    }

    /// Evaluate at a rational point.
    pub fn eval_rat(&self, point: &[Rat]) -> Rat {
        self.eval(point)
    }

    /// Numeric evaluation through `f64`.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.map_coeffs(crate::scalar::rat_to_f64).eval(point)
    }
}

impl<C: Coeff> Add for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(self, rhs: Self) -> MultiPoly<C> {
        let (mut a, b) = MultiPoly::aligned(self, rhs);
        for (m, c) in b.terms {
            a.add_term(m, c);
        }
        a
    }
}

impl<C: Coeff> Sub for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(self, rhs: Self) -> MultiPoly<C> {
        let (mut a, b) = MultiPoly::aligned(self, rhs);
        for (m, c) in b.terms {
            a.add_term(m, -c);
        }
        a
    }
}

impl<C: Coeff> Mul for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, rhs: Self) -> MultiPoly<C> {
        let (a, b) = MultiPoly::aligned(self, rhs);
        let mut out = MultiPoly::zero(a.vars());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        self.map_coeffs(|c| -c.clone())
    }
}

impl<C: Coeff> Add for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(self, rhs: Self) -> MultiPoly<C> {
        &self + &rhs
    }
}

impl<C: Coeff> Sub for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(self, rhs: Self) -> MultiPoly<C> {
        &self - &rhs
    }
}

impl<C: Coeff> Mul for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, rhs: Self) -> MultiPoly<C> {
        &self * &rhs
    }
}

impl<C: Coeff> Neg for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        -&self
    }
}

impl fmt::Display for MultiPoly<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_is_one = abs.is_one();
            if m.is_unit() {
                write!(f, "{}", abs)?;
            } else {
                let mut wrote = false;
                if !coeff_is_one {
                    write!(f, "{}", abs)?;
                    wrote = true;
                }
                for (i, &e) in m.exponents().iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if wrote {
                        write!(f, "*")?;
                    }
                    wrote = true;
                    if e == 1 {
                        write!(f, "{}", self.vars.name(i))?;
                    } else {
                        write!(f, "{}^{}", self.vars.name(i), e)?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    fn xy() -> VarSet {
        VarSet::new(vec!["x", "y"])
    }

    fn x_poly() -> MultiPoly<Rat> {
        MultiPoly::var(&xy(), 0)
    }

    fn y_poly() -> MultiPoly<Rat> {
        MultiPoly::var(&xy(), 1)
    }

    #[test]
    fn difference_of_squares() {
        let x = x_poly();
        let one = MultiPoly::one(&xy());
        let p = &(&x + &one) * &(&x - &one);
        let expect = &(&x * &x) - &one;
        assert_eq!(p, expect);
    }

    #[test]
    fn cancellation_gives_empty_term_map() {
        let x = x_poly();
        let y = y_poly();
        let p = &(&x * &y) - &(&y * &x);
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn derivative_power_rule() {
        // d/dx (x^3 - 5x^2 + x - 1) = 3x^2 - 10x + 1
        let vars = VarSet::new(vec!["x"]);
        let x = MultiPoly::<Rat>::var(&vars, 0);
        let p = &(&(&x.pow(3) - &x.pow(2).scale(&rat_int(5))) + &x)
            - &MultiPoly::one(&vars);
        let d = p.derivative(0);
        let expect = &(&x.pow(2).scale(&rat_int(3)) - &x.scale(&rat_int(10)))
            + &MultiPoly::one(&vars);
        assert_eq!(d, expect);
    }

    #[test]
    fn exact_div_detects_non_divisor() {
        let x = x_poly();
        let one = MultiPoly::one(&xy());
        let p = &x.pow(2) - &one; // (x-1)(x+1)
        assert!(p.exact_div(&(&x - &one)).is_ok());
        assert_eq!(
            p.exact_div(&(&x + &(&one + &one))),
            Err(PolyError::NotDivisible)
        );
    }

    #[test]
    fn align_by_name() {
        let vx = VarSet::new(vec!["x"]);
        let vy = VarSet::new(vec!["y"]);
        let p = MultiPoly::<Rat>::var(&vx, 0);
        let q = MultiPoly::<Rat>::var(&vy, 0);
        let s = &p + &q;
        assert_eq!(s.vars().names(), &["x".to_string(), "y".to_string()]);
        assert_eq!(s.num_terms(), 2);
    }

    #[test]
    fn primitive_part_normalizes() {
        let x = x_poly();
        let p = &x.scale(&crate::scalar::rat(-4, 3)) + &MultiPoly::constant(&xy(), crate::scalar::rat(-2, 3));
        let prim = p.primitive_part();
        // -(4x + 2)/3 -> primitive 2x + 1
        let expect = &x.scale(&rat_int(2)) + &MultiPoly::one(&xy());
        assert_eq!(prim, expect);
    }

    #[test]
    fn subst_composes() {
        // p = x^2 + y, substitute x -> y+1: (y+1)^2 + y = y^2 + 3y + 1
        let p = &x_poly().pow(2) + &y_poly();
        let rep = &y_poly() + &MultiPoly::one(&xy());
        let q = p.subst(0, &rep);
        let y = y_poly();
        let expect = &(&y.pow(2) + &y.scale(&rat_int(3))) + &MultiPoly::one(&xy());
        assert_eq!(q, expect);
    }

    #[test]
    fn display_round_readable() {
        let p = &x_poly().pow(2).scale(&rat_int(2)) - &MultiPoly::constant(&xy(), crate::scalar::rat(1, 2));
        assert_eq!(p.to_string(), "2*x^2 - 1/2");
    }
}
