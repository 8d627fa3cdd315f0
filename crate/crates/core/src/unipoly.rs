//! Univariate view of a multivariate polynomial.
//!
//! A [`UniPoly`] is a [`MultiPoly`] with a distinguished variable; the other
//! variables ride along as coefficient symbols. This is the shape resultants
//! and elimination work with.

use std::fmt;

use crate::dense::DensePoly;
use crate::error::PolyError;
use crate::multipoly::{MultiPoly, VarSet};
use crate::scalar::{Coeff, Rat};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly<C: Coeff> {
    poly: MultiPoly<C>,
    var: usize,
}

impl<C: Coeff> UniPoly<C> {
    pub fn new(poly: MultiPoly<C>, var_name: &str) -> Result<Self, PolyError> {
        let var = poly
            .vars()
            .index_of(var_name)
            .ok_or_else(|| PolyError::UnknownVariable(var_name.to_string()))?;
        Ok(UniPoly { poly, var })
    }

    pub fn from_index(poly: MultiPoly<C>, var: usize) -> Self {
        assert!(var < poly.vars().len());
        UniPoly { poly, var }
    }

    pub fn poly(&self) -> &MultiPoly<C> {
        &self.poly
    }

    pub fn into_poly(self) -> MultiPoly<C> {
        self.poly
    }

    pub fn var_index(&self) -> usize {
        self.var
    }

    pub fn var_name(&self) -> &str {
        self.poly.vars().name(self.var)
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Degree in the distinguished variable; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        if self.poly.is_zero() {
            None
        } else {
            Some(self.poly.degree_in(self.var))
        }
    }

    /// Coefficient polynomials by ascending power of the main variable.
    pub fn coeffs(&self) -> Vec<MultiPoly<C>> {
        self.poly.coeffs_in(self.var)
    }

    /// Leading coefficient (in the main variable).
    pub fn lc(&self) -> MultiPoly<C> {
        self.coeffs().pop().unwrap_or_else(|| MultiPoly::zero(self.poly.vars()))
    }

    pub fn from_coeffs(vars: &VarSet, var: usize, coeffs: Vec<MultiPoly<C>>) -> Self {
        let mut acc = MultiPoly::zero(vars);
        for (k, c) in coeffs.into_iter().enumerate() {
            let xk = MultiPoly::var_pow(vars, var, k as u32);
            acc = &acc + &(&c.with_vars(vars) * &xk);
        }
        UniPoly { poly: acc, var }
    }

    /// True when no variable besides the main one occurs.
    pub fn has_constant_coeffs(&self) -> bool {
        self.poly
            .vars_present()
            .iter()
            .all(|&i| i == self.var)
    }

    pub fn derivative(&self) -> Self {
        UniPoly {
            poly: self.poly.derivative(self.var),
            var: self.var,
        }
    }
}

impl UniPoly<Rat> {
    /// Dense coefficient vector; fails when symbolic coefficients remain.
    pub fn to_dense(&self) -> Result<DensePoly, PolyError> {
        if let Some(&bad) = self
            .poly
            .vars_present()
            .iter()
            .find(|&&i| i != self.var)
        {
            return Err(PolyError::SymbolicCoefficients(
                self.poly.vars().name(bad).to_string(),
            ));
        }
        let coeffs = self
            .coeffs()
            .into_iter()
            .map(|c| c.constant_value().expect("constant coefficient"))
            .collect();
        Ok(DensePoly::new(coeffs))
    }

    /// Univariate polynomial over a fresh single-variable universe.
    pub fn from_dense(var_name: &str, dense: &DensePoly) -> Self {
        let vars = VarSet::new(vec![var_name.to_string()]);
        let coeffs: Vec<MultiPoly<Rat>> = dense
            .coeffs()
            .iter()
            .map(|c| MultiPoly::constant(&vars, c.clone()))
            .collect();
        Self::from_coeffs(&vars, 0, coeffs)
    }

    /// Evaluate at a rational value of the main variable, leaving the other
    /// variables symbolic.
    pub fn eval_at(&self, x: &Rat) -> MultiPoly<Rat> {
        let vars = self.poly.vars().clone();
        let mut acc = MultiPoly::zero(&vars);
        let xc = MultiPoly::constant(&vars, x.clone());
        for c in self.coeffs().into_iter().rev() {
            acc = &(&acc * &xc) + &c;
        }
        acc
    }
}

impl fmt::Display for UniPoly<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    #[test]
    fn coeff_extraction() {
        let vars = VarSet::new(vec!["x", "a"]);
        let x = MultiPoly::<Rat>::var(&vars, 0);
        let a = MultiPoly::<Rat>::var(&vars, 1);
        // a*x^2 + (a+1)*x + 3
        let p = &(&(&a * &x.pow(2)) + &(&(&a + &MultiPoly::one(&vars)) * &x))
            + &MultiPoly::constant(&vars, rat_int(3));
        let u = UniPoly::new(p.clone(), "x").unwrap();
        assert_eq!(u.degree(), Some(2));
        let cs = u.coeffs();
        assert_eq!(cs[2], a);
        assert_eq!(cs[0], MultiPoly::constant(&vars, rat_int(3)));
        assert!(!u.has_constant_coeffs());
        assert!(u.to_dense().is_err());
        let rebuilt = UniPoly::from_coeffs(&vars, 0, cs);
        assert_eq!(rebuilt.poly(), &p);
    }

    #[test]
    fn dense_roundtrip() {
        let d = DensePoly::from_i64(&[-1, 1, -5, 1]);
        let u = UniPoly::from_dense("x", &d);
        assert_eq!(u.degree(), Some(3));
        assert_eq!(u.to_dense().unwrap(), d);
    }
}
