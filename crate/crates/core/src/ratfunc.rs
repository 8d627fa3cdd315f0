//! Reduced rational functions over the rationals.
//!
//! Canonical form: numerator and denominator share no polynomial factor, the
//! denominator is primitive (integer, content 1) with positive leading
//! coefficient, and rational content rides on the numerator.

use num_traits::Zero;
use std::fmt;

use crate::error::PolyError;
use crate::gcd::reduce_fraction;
use crate::multipoly::{MultiPoly, VarSet};
use crate::scalar::Rat;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    num: MultiPoly<Rat>,
    den: MultiPoly<Rat>,
}

impl RatFunc {
    pub fn new(num: MultiPoly<Rat>, den: MultiPoly<Rat>) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        let (num, den) = MultiPoly::aligned(&num, &den);
        let (n, d) = reduce_fraction(&num, &den);
        Ok(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: MultiPoly<Rat>) -> Self {
        let one = MultiPoly::one(p.vars());
        RatFunc { num: p, den: one }
    }

    pub fn zero(vars: &VarSet) -> Self {
        Self::from_poly(MultiPoly::zero(vars))
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::from_poly(MultiPoly::one(vars))
    }

    pub fn constant(vars: &VarSet, c: Rat) -> Self {
        Self::from_poly(MultiPoly::constant(vars, c))
    }

    pub fn var(vars: &VarSet, idx: usize) -> Self {
        Self::from_poly(MultiPoly::var(vars, idx))
    }

    pub fn num(&self) -> &MultiPoly<Rat> {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly<Rat> {
        &self.den
    }

    pub fn vars(&self) -> &VarSet {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_constant() {
            Some(self.num.constant_value()? / self.den.constant_value()?)
        } else {
            None
        }
    }

    pub fn is_poly(&self) -> bool {
        self.den.constant_value().map_or(false, |c| c == Rat::from_integer(1.into()))
    }

    pub fn with_vars(&self, vars: &VarSet) -> Self {
        RatFunc {
            num: self.num.with_vars(vars),
            den: self.den.with_vars(vars),
        }
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        if a.vars() == b.vars() {
            (a.clone(), b.clone())
        } else {
            let vars = a.vars().merged(b.vars());
            (a.with_vars(&vars), b.with_vars(&vars))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = Self::aligned(self, other);
        let num = &(&a.num * &b.den) + &(&b.num * &a.den);
        let den = &a.den * &b.den;
        RatFunc::new(num, den).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::aligned(self, other);
        RatFunc::new(&a.num * &b.num, &a.den * &b.den).expect("nonzero denominator")
    }

    pub fn div(&self, other: &Self) -> Result<Self, PolyError> {
        if other.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        let (a, b) = Self::aligned(self, other);
        RatFunc::new(&a.num * &b.den, &a.den * &b.num)
    }

    pub fn reciprocal(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    /// Integer power, negative exponents through the reciprocal.
    pub fn powi(&self, e: i64) -> Result<Self, PolyError> {
        let base = if e < 0 { self.reciprocal()? } else { self.clone() };
        let mut acc = Self::one(self.vars());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    pub fn derivative(&self, var: usize) -> Self {
        let num = &(&self.num.derivative(var) * &self.den) - &(&self.num * &self.den.derivative(var));
        let den = &self.den * &self.den;
        RatFunc::new(num, den).expect("nonzero denominator")
    }

    /// Exact evaluation; `None` when the denominator vanishes at the point.
    pub fn eval_rat(&self, point: &[Rat]) -> Option<Rat> {
        let d = self.den.eval_rat(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_rat(point) / d)
    }

    pub fn eval_f64(&self, point: &[f64]) -> Option<f64> {
        let d = self.den.eval_f64(point);
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let n = self.num.eval_f64(point);
        if !n.is_finite() {
            return None;
        }
        Some(n / d)
    }
}

/// Evaluate a polynomial at rational-function arguments (one per declared
/// variable of `g`), producing a single reduced fraction. The composition is
/// assembled over the common denominator, so the expensive gcd reduction
/// happens once.
pub fn eval_poly_at_ratfuncs(g: &MultiPoly<Rat>, args: &[RatFunc]) -> RatFunc {
    assert_eq!(args.len(), g.vars().len());
    if g.is_zero() {
        return RatFunc::zero(args.first().map(|a| a.vars()).unwrap_or_else(|| g.vars()));
    }
    // align all arguments
    let mut vars = args
        .first()
        .map(|a| a.vars().clone())
        .unwrap_or_else(|| g.vars().clone());
    for a in args {
        vars = vars.merged(a.vars());
    }
    let args: Vec<RatFunc> = args.iter().map(|a| a.with_vars(&vars)).collect();
    let degs: Vec<u32> = (0..g.vars().len()).map(|i| g.degree_in(i)).collect();
    // power tables for numerators and denominators
    let pow_table = |p: &MultiPoly<Rat>, d: u32| {
        let mut t = Vec::with_capacity(d as usize + 1);
        t.push(MultiPoly::one(&vars));
        for k in 1..=d {
            let prev: &MultiPoly<Rat> = &t[(k - 1) as usize];
            t.push(prev * p);
        }
        t
    };
    let num_pows: Vec<Vec<MultiPoly<Rat>>> = args
        .iter()
        .zip(&degs)
        .map(|(a, &d)| pow_table(&a.num, d))
        .collect();
    let den_pows: Vec<Vec<MultiPoly<Rat>>> = args
        .iter()
        .zip(&degs)
        .map(|(a, &d)| pow_table(&a.den, d))
        .collect();
    let mut num_acc = MultiPoly::zero(&vars);
    for (m, c) in g.terms() {
        let mut t = MultiPoly::constant(&vars, c.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            t = &t * &num_pows[i][e as usize];
            t = &t * &den_pows[i][(degs[i] - e) as usize];
        }
        num_acc = &num_acc + &t;
    }
    let mut den_acc = MultiPoly::one(&vars);
    for (i, &d) in degs.iter().enumerate() {
        den_acc = &den_acc * &den_pows[i][d as usize];
    }
    RatFunc::new(num_acc, den_acc).expect("denominator is a product of nonzero denominators")
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            return write!(f, "{}", self.num);
        }
        // a single term like 3*x*y needs no parentheses in the numerator
        // (same precedence as /), the denominator only when it is a single
        // variable power or a plain constant
        let num_simple = self.num.num_terms() <= 1;
        let den_atomic = self.den.num_terms() == 1 && {
            let (m, c) = self.den.leading().unwrap();
            use num_traits::One;
            c.is_one() && m.exponents().iter().filter(|&&e| e > 0).count() == 1
        };
        match (num_simple, den_atomic) {
            (true, true) => write!(f, "{}/{}", self.num, self.den),
            (true, false) => write!(f, "{}/({})", self.num, self.den),
            (false, true) => write!(f, "({})/{}", self.num, self.den),
            (false, false) => write!(f, "({})/({})", self.num, self.den),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn setup() -> (VarSet, RatFunc, RatFunc) {
        let vars = VarSet::new(vec!["x", "y"]);
        (
            vars.clone(),
            RatFunc::var(&vars, 0),
            RatFunc::var(&vars, 1),
        )
    }

    #[test]
    fn arithmetic_reduces() {
        let (_, x, y) = setup();
        // x/y + y/x = (x^2+y^2)/(xy)
        let s = x.div(&y).unwrap().add(&y.div(&x).unwrap());
        let num_terms = s.num().num_terms();
        assert_eq!(num_terms, 2);
        assert_eq!(s.den().num_terms(), 1);
        // (x^2-y^2)/(x-y) = x+y
        let vars = x.vars();
        let num = &x.num().pow(2) - &y.num().pow(2);
        let den = x.num() - y.num();
        let r = RatFunc::new(num, den).unwrap();
        assert!(r.is_poly());
        assert_eq!(r.num(), &(x.num() + y.num()));
        let _ = vars;
    }

    #[test]
    fn powi_negative() {
        let (_, x, _) = setup();
        let r = x.powi(-2).unwrap();
        assert_eq!(r.num().constant_value(), Some(rat_int(1)));
        assert_eq!(r.den(), &x.num().pow(2));
    }

    #[test]
    fn derivative_quotient_rule() {
        let (vars, x, y) = setup();
        // d/dx (x/y) = 1/y
        let q = x.div(&y).unwrap();
        let d = q.derivative(0);
        assert_eq!(d, RatFunc::one(&vars).div(&y).unwrap());
        // d/dy (x/y) = -x/y^2
        let dy = q.derivative(1);
        let expect = x.neg().div(&y.mul(&y)).unwrap();
        assert_eq!(dy, expect);
    }

    #[test]
    fn composition_single_fraction() {
        let (vars, x, y) = setup();
        // g = x^2 + y, args x -> y, y -> 1/x: g = y^2 + 1/x
        let g = &x.num().pow(2) + &y.num().clone();
        let args = vec![y.clone(), RatFunc::one(&vars).div(&x).unwrap()];
        let r = eval_poly_at_ratfuncs(&g, &args);
        // (x y^2 + 1)/x
        assert_eq!(r.den(), x.num());
        assert_eq!(r.num(), &(&(&y.num().pow(2) * x.num()) + &MultiPoly::one(&vars)));
    }

    #[test]
    fn eval_with_pole() {
        let (_, x, y) = setup();
        let q = x.div(&y).unwrap();
        assert_eq!(q.eval_rat(&[rat_int(3), rat_int(2)]), Some(rat(3, 2)));
        assert_eq!(q.eval_rat(&[rat_int(3), rat_int(0)]), None);
    }

    #[test]
    fn display_forms() {
        let (vars, x, y) = setup();
        assert_eq!(x.to_string(), "x");
        assert_eq!(x.div(&y).unwrap().to_string(), "x/y");
        let sum = x.add(&RatFunc::one(&vars)).div(&y).unwrap();
        assert_eq!(sum.to_string(), "(x + 1)/y");
    }
}
