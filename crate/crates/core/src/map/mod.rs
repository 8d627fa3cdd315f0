//! The rational-map data model: components, Jacobians, characteristic
//! polynomial data, fixed-point systems, composition and evaluation.

pub mod fixed;
pub mod parse;

use std::fmt;

use crate::error::MapError;
use crate::multipoly::{MultiPoly, VarSet};
use crate::ratfunc::{eval_poly_at_ratfuncs, RatFunc};
use crate::resultant::resultant_in;
use crate::scalar::Rat;
use crate::unipoly::UniPoly;

/// An n-component map of reduced rational functions in state variables and
/// free parameters.
#[derive(Clone, PartialEq, Debug)]
pub struct RationalMap {
    state_vars: Vec<String>,
    params: Vec<String>,
    vars: VarSet,
    components: Vec<RatFunc>,
}

impl RationalMap {
    pub fn new(
        state_vars: Vec<String>,
        params: Vec<String>,
        components: Vec<RatFunc>,
    ) -> Result<Self, MapError> {
        if components.len() != state_vars.len() {
            return Err(MapError::DimensionMismatch {
                expected: state_vars.len(),
                found: components.len(),
            });
        }
        let all: Vec<String> = state_vars.iter().chain(params.iter()).cloned().collect();
        let vars = VarSet::new(all);
        for (i, c) in components.iter().enumerate() {
            if c.den().is_zero() {
                return Err(MapError::ZeroDenominator(i));
            }
            for name in c.vars().names() {
                if vars.index_of(name).is_none() {
                    return Err(MapError::UndeclaredVariable(name.clone()));
                }
            }
        }
        let components = components.into_iter().map(|c| c.with_vars(&vars)).collect();
        Ok(RationalMap {
            state_vars,
            params,
            vars,
            components,
        })
    }

    pub fn n(&self) -> usize {
        self.state_vars.len()
    }

    pub fn state_vars(&self) -> &[String] {
        &self.state_vars
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &RatFunc {
        &self.components[i]
    }

    pub fn is_parameter_free(&self) -> bool {
        self.params.is_empty()
    }

    /// Symbolic Jacobian with respect to the state variables.
    pub fn jacobian(&self) -> Vec<Vec<RatFunc>> {
        self.components
            .iter()
            .map(|c| (0..self.n()).map(|j| c.derivative(j)).collect())
            .collect()
    }

    /// Characteristic polynomial data of the Jacobian at a general point.
    pub fn char_poly(&self) -> CharPolyData {
        let jac = self.jacobian();
        // fresh eigenvalue variable
        let mut mu = "mu".to_string();
        while self.vars.index_of(&mu).is_some() {
            mu.push('_');
        }
        let mut names: Vec<String> = self.vars.names().to_vec();
        names.push(mu.clone());
        let evars = VarSet::new(names);
        let mu_rf = RatFunc::var(&evars, evars.len() - 1);
        let n = self.n();
        let mut mat = vec![vec![RatFunc::zero(&evars); n]; n];
        for i in 0..n {
            for j in 0..n {
                let a = jac[i][j].with_vars(&evars);
                mat[i][j] = if i == j { mu_rf.sub(&a) } else { a.neg() };
            }
        }
        let cp = det_ratfunc(&mat);
        let trace = (0..n)
            .map(|i| jac[i][i].clone())
            .fold(RatFunc::zero(&self.vars), |a, b| a.add(&b));
        let det = det_ratfunc(&jac);
        CharPolyData {
            mu,
            numerator: cp.num().clone(),
            denominator: cp.den().clone(),
            trace,
            det,
        }
    }

    /// Numerator equations and denominator nondegeneracy conditions of the
    /// fixed-point system.
    pub fn fixed_point_system(&self) -> FixedPointSystem {
        let mut eqs = Vec::with_capacity(self.n());
        let mut nondeg = Vec::with_capacity(self.n());
        for (i, c) in self.components.iter().enumerate() {
            let xi = MultiPoly::var(&self.vars, i);
            let s = &(c.num().clone()) - &(&xi * c.den());
            eqs.push(s);
            nondeg.push(c.den().clone());
        }
        FixedPointSystem {
            numerator_equations: eqs,
            nondegeneracy: nondeg,
        }
    }

    /// Per-coordinate eliminants for planar maps: the resultant in the
    /// second variable (first variable eliminated) and vice versa.
    pub fn planar_eliminants(&self) -> Result<PlanarEliminants, MapError> {
        assert_eq!(self.n(), 2, "planar eliminants need a planar map");
        let sys = self.fixed_point_system();
        let s1 = &sys.numerator_equations[0];
        let s2 = &sys.numerator_equations[1];
        if s1.is_zero() || s2.is_zero() {
            return Err(MapError::DegenerateElimination(
                "a fixed-point equation vanishes identically (continuum of fixed points)".into(),
            ));
        }
        let x = &self.state_vars[0];
        let y = &self.state_vars[1];
        let in_second = resultant_in(s1, s2, x)?;
        let in_first = resultant_in(s1, s2, y)?;
        if in_second.is_zero() || in_first.is_zero() {
            return Err(MapError::DegenerateElimination(
                "eliminant vanishes identically (continuum of fixed points)".into(),
            ));
        }
        Ok(PlanarEliminants {
            in_second: UniPoly::new(in_second, y)?,
            in_first: UniPoly::new(in_first, x)?,
        })
    }

    /// Exact evaluation at a rational state point (parameter-free maps).
    pub fn evaluate(&self, point: &[Rat]) -> Result<Vec<Rat>, MapError> {
        if !self.is_parameter_free() {
            return Err(MapError::FreeParameters(self.params.join(", ")));
        }
        assert_eq!(point.len(), self.n());
        let mut out = Vec::with_capacity(self.n());
        for (i, c) in self.components.iter().enumerate() {
            match c.eval_rat(point) {
                Some(v) => out.push(v),
                None => return Err(MapError::PoleAtPoint { component: i }),
            }
        }
        Ok(out)
    }

    /// Exact orbit: the `steps` successive images of `start`.
    pub fn iterate(&self, start: &[Rat], steps: usize) -> Result<Vec<Vec<Rat>>, MapError> {
        let mut orbit = Vec::with_capacity(steps);
        let mut cur = start.to_vec();
        for _ in 0..steps {
            cur = self.evaluate(&cur)?;
            orbit.push(cur.clone());
        }
        Ok(orbit)
    }

    /// Composition `self âˆ˜ other` (apply `other` first).
    pub fn compose(&self, other: &RationalMap) -> Result<RationalMap, MapError> {
        if self.n() != other.n() {
            return Err(MapError::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        // arguments: state components from `other`, parameters unchanged
        let vars = self.vars.merged(&other.vars);
        let mut args: Vec<RatFunc> = other
            .components
            .iter()
            .map(|c| c.with_vars(&vars))
            .collect();
        for p in &self.params {
            let idx = vars.index_of(p).expect("parameter declared");
            args.push(RatFunc::var(&vars, idx));
        }
        let mut comps = Vec::with_capacity(self.n());
        for c in &self.components {
            let num = eval_poly_at_ratfuncs(c.num(), &args);
            let den = eval_poly_at_ratfuncs(c.den(), &args);
            if den.is_zero() {
                return Err(MapError::ZeroDenominator(comps.len()));
            }
            comps.push(num.div(&den)?);
        }
        RationalMap::new(self.state_vars.clone(), self.params.clone(), comps)
    }

    pub fn is_identity(&self) -> bool {
        self.components
            .iter()
            .enumerate()
            .all(|(i, c)| *c == RatFunc::var(&self.vars, i))
    }

    /// Substitute a rational value for a parameter.
    pub fn specialize(&self, param: &str, value: &Rat) -> Result<RationalMap, MapError> {
        let pidx = self
            .vars
            .index_of(param)
            .filter(|_| self.params.iter().any(|p| p == param))
            .ok_or_else(|| MapError::UndeclaredVariable(param.to_string()))?;
        let cval = MultiPoly::constant(&self.vars, value.clone());
        let params: Vec<String> = self.params.iter().filter(|p| *p != param).cloned().collect();
        let mut comps = Vec::with_capacity(self.n());
        for (i, c) in self.components.iter().enumerate() {
            let num = c.num().subst(pidx, &cval);
            let den = c.den().subst(pidx, &cval);
            if den.is_zero() {
                return Err(MapError::ZeroDenominator(i));
            }
            comps.push(RatFunc::new(num, den)?);
        }
        let keep: Vec<String> = self
            .state_vars
            .iter()
            .chain(params.iter())
            .cloned()
            .collect();
        let new_vars = VarSet::new(keep);
        let comps = comps
            .into_iter()
            .map(|c| {
                // the specialized variable no longer occurs; rebuild over the
                // smaller universe by round-tripping through coefficients
                let renum = project(c.num(), &new_vars);
                let reden = project(c.den(), &new_vars);
                RatFunc::new(renum, reden).expect("nonzero denominator")
            })
            .collect();
        RationalMap::new(self.state_vars.clone(), params, comps)
    }

    /// Canonical map-definition source (reparses to an identical map).
    pub fn render(&self) -> String {
        let mut s = format!("vars {};", self.state_vars.join(", "));
        if !self.params.is_empty() {
            s.push_str(&format!(" params {};", self.params.join(", ")));
        }
        let comps: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        s.push_str(&format!(" f = ({})", comps.join(", ")));
        s
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Project onto a subset variable universe; panics if a dropped variable
/// still occurs.
fn project(p: &MultiPoly<Rat>, vars: &VarSet) -> MultiPoly<Rat> {
    let map: Vec<Option<usize>> = p
        .vars()
        .names()
        .iter()
        .map(|n| vars.index_of(n))
        .collect();
    let mut out = MultiPoly::zero(vars);
    for (m, c) in p.terms() {
        let mut exps = vec![0u32; vars.len()];
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                let j = map[i].expect("projected variable still occurs");
                exps[j] = e;
            }
        }
        out = &out + &MultiPoly::from_terms(vars, [(crate::monomial::Monomial::from_exponents(exps), c.clone())]);
    }
    out
}

fn det_ratfunc(m: &[Vec<RatFunc>]) -> RatFunc {
    let n = m.len();
    match n {
        0 => panic!("empty matrix"),
        1 => m[0][0].clone(),
        _ => {
            let mut acc: Option<RatFunc> = None;
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<RatFunc>> = (1..n)
                    .map(|i| {
                        (0..n)
                            .filter(|&k| k != j)
                            .map(|k| m[i][k].clone())
                            .collect()
                    })
                    .collect();
                let mut t = m[0][j].mul(&det_ratfunc(&minor));
                if j % 2 == 1 {
                    t = t.neg();
                }
                acc = Some(match acc {
                    None => t,
                    Some(a) => a.add(&t),
                });
            }
            acc.unwrap_or_else(|| RatFunc::zero(m[0][0].vars()))
        }
    }
}

/// Numerator equations `S_i = Num(f_i - x_i)` plus the denominators that
/// must stay nonzero at admissible solutions.
#[derive(Clone, Debug)]
pub struct FixedPointSystem {
    pub numerator_equations: Vec<MultiPoly<Rat>>,
    pub nondegeneracy: Vec<MultiPoly<Rat>>,
}

/// Characteristic-polynomial data of the Jacobian at a general point.
#[derive(Clone, Debug)]
pub struct CharPolyData {
    /// Name of the eigenvalue variable (appended after the map's variables).
    pub mu: String,
    /// Numerator of det(mu I - Df) as a polynomial in state vars, params, mu.
    pub numerator: MultiPoly<Rat>,
    /// The cleared denominator.
    pub denominator: MultiPoly<Rat>,
    /// Trace of the Jacobian.
    pub trace: RatFunc,
    /// Determinant of the Jacobian.
    pub det: RatFunc,
}

/// Planar fixed-point eliminants: `in_second` is the resultant eliminating
/// the first variable (a polynomial in the second), and vice versa.
#[derive(Clone, Debug)]
pub struct PlanarEliminants {
    pub in_second: UniPoly<Rat>,
    pub in_first: UniPoly<Rat>,
}
