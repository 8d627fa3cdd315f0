//! Symbolic verification of candidate first integrals, functional
//! independence, and a numeric orbit-invariance harness.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::MapError;
use crate::map::RationalMap;
use crate::multipoly::MultiPoly;
use crate::ratfunc::{eval_poly_at_ratfuncs, RatFunc};
use crate::scalar::{Int, Rat};

/// Outcome of the exact first-integral check.
#[derive(Clone, Debug)]
pub struct VerifyOutcome {
    pub holds: bool,
    /// The nonzero residual polynomial when the identity fails.
    pub residual: Option<MultiPoly<Rat>>,
}

/// Exact check of G(f(x)) H(x) = G(x) H(f(x)) for a candidate R = G/H:
/// compose, clear every composed denominator once, and test the polynomial
/// identity.
pub fn verify_first_integral(
    map: &RationalMap,
    candidate: &RatFunc,
) -> Result<VerifyOutcome, MapError> {
    let vars = map.vars().merged(candidate.vars());
    let g = candidate.num().with_vars(&vars);
    let h = candidate.den().with_vars(&vars);
    // composition arguments: map components for the state variables,
    // parameters unchanged
    let mut args: Vec<RatFunc> = map
        .components()
        .iter()
        .map(|c| c.with_vars(&vars))
        .collect();
    for p in map.params() {
        let idx = vars.index_of(p).expect("parameter declared");
        args.push(RatFunc::var(&vars, idx));
    }
    // extra candidate-only symbols (treated as constants) ride along
    for name in vars.names().iter().skip(map.vars().len()) {
        let idx = vars.index_of(name).unwrap();
        args.push(RatFunc::var(&vars, idx));
    }
    let gf = eval_poly_at_ratfuncs(&g, &args);
    let hf = eval_poly_at_ratfuncs(&h, &args);
    // G(f) H Den(H(f)) - G H(f) Den(G(f)) = 0 after clearing
    let lhs = &(gf.num() * &h) * hf.den();
    let rhs = &(&g * hf.num()) * gf.den();
    let residual = &lhs - &rhs;
    if residual.is_zero() {
        Ok(VerifyOutcome {
            holds: true,
            residual: None,
        })
    } else {
        Ok(VerifyOutcome {
            holds: false,
            residual: Some(residual),
        })
    }
}

/// Certainty of an independence verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndependenceCertainty {
    /// A maximal minor was certified nonzero (witness point) or all minors
    /// were expanded symbolically.
    Exact,
    /// The sampling budget ran out without a nonzero minor and the arity was
    /// too large for symbolic expansion.
    ProbablyDependent,
}

#[derive(Clone, Debug)]
pub struct IndependenceOutcome {
    pub independent: bool,
    pub certainty: IndependenceCertainty,
    pub witness: Option<Vec<Rat>>,
}

/// Functional independence of candidates via the rank of their Jacobian
/// with respect to the state variables: random rational evaluation with an
/// exact symbolic fallback at small arity.
pub fn functional_independence(
    map: &RationalMap,
    candidates: &[RatFunc],
    seed: u64,
) -> IndependenceOutcome {
    assert!(!candidates.is_empty());
    let n = map.n();
    let m = candidates.len();
    let vars = candidates
        .iter()
        .fold(map.vars().clone(), |acc, c| acc.merged(c.vars()));
    let jac: Vec<Vec<RatFunc>> = candidates
        .iter()
        .map(|c| (0..n).map(|j| c.with_vars(&vars).derivative(j)).collect())
        .collect();
    if m > n {
        return IndependenceOutcome {
            independent: false,
            certainty: IndependenceCertainty::Exact,
            witness: None,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'draws: for _ in 0..20 {
        let point: Vec<Rat> = (0..vars.len())
            .map(|_| {
                let num = rng.gen_range(-1000i64..=1000);
                let den = rng.gen_range(1i64..=1000);
                Rat::new(Int::from(num), Int::from(den))
            })
            .collect();
        let mut mat: Vec<Vec<Rat>> = Vec::with_capacity(m);
        for row in &jac {
            let mut r = Vec::with_capacity(n);
            for entry in row {
                match entry.eval_rat(&point) {
                    Some(v) => r.push(v),
                    None => continue 'draws, // pole: redraw
                }
            }
            mat.push(r);
        }
        if rational_rank(mat) == m {
            return IndependenceOutcome {
                independent: true,
                certainty: IndependenceCertainty::Exact,
                witness: Some(point),
            };
        }
    }
    // sampling failed; small arities get the exact symbolic answer
    if m <= 3 {
        let mut any_nonzero = false;
        for cols in combinations(n, m) {
            let minor = symbolic_minor(&jac, &cols);
            if !minor.is_zero() {
                any_nonzero = true;
                break;
            }
        }
        return IndependenceOutcome {
            independent: any_nonzero,
            certainty: IndependenceCertainty::Exact,
            witness: None,
        };
    }
    IndependenceOutcome {
        independent: false,
        certainty: IndependenceCertainty::ProbablyDependent,
        witness: None,
    }
}

fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m == 0 || m > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        out.push(idx.clone());
        let mut i = m as isize - 1;
        while i >= 0 && idx[i as usize] == n - m + i as usize {
            i -= 1;
        }
        if i < 0 {
            return out;
        }
        let i = i as usize;
        idx[i] += 1;
        for j in i + 1..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn symbolic_minor(jac: &[Vec<RatFunc>], cols: &[usize]) -> RatFunc {
    let m = cols.len();
    match m {
        1 => jac[0][cols[0]].clone(),
        2 => {
            let a = &jac[0][cols[0]];
            let b = &jac[0][cols[1]];
            let c = &jac[1][cols[0]];
            let d = &jac[1][cols[1]];
            a.mul(d).sub(&b.mul(c))
        }
        3 => {
            let e = |i: usize, j: usize| &jac[i][cols[j]];
            let m00 = e(1, 1).mul(e(2, 2)).sub(&e(1, 2).mul(e(2, 1)));
            let m01 = e(1, 0).mul(e(2, 2)).sub(&e(1, 2).mul(e(2, 0)));
            let m02 = e(1, 0).mul(e(2, 1)).sub(&e(1, 1).mul(e(2, 0)));
            e(0, 0)
                .mul(&m00)
                .sub(&e(0, 1).mul(&m01))
                .add(&e(0, 2).mul(&m02))
        }
        _ => unreachable!("symbolic fallback is limited to three candidates"),
    }
}

fn rational_rank(mut mat: Vec<Vec<Rat>>) -> usize {
    let rows = mat.len();
    if rows == 0 {
        return 0;
    }
    let cols = mat[0].len();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = (rank..rows).find(|&r| !mat[r][c].is_zero());
        let Some(p) = pivot else { continue };
        mat.swap(rank, p);
        let inv = Rat::new(Int::from(1), 1.into()) / mat[rank][c].clone();
        for r in rank + 1..rows {
            if mat[r][c].is_zero() {
                continue;
            }
            let factor = mat[r][c].clone() * &inv;
            for cc in c..cols {
                let t = &mat[rank][cc] * &factor;
                mat[r][cc] -= t;
            }
        }
        rank += 1;
    }
    rank
}

/// Numeric orbit report.
#[derive(Clone, Debug)]
pub struct OrbitReport {
    /// max over the orbit of |R(x_k) - R(x_0)| in float evaluation.
    pub max_deviation: f64,
    pub steps_completed: usize,
    /// Step index at which the orbit hit a pole, if it did.
    pub pole_at: Option<usize>,
}

/// Iterate the map in floating point and track the candidate's deviation
/// from its initial value.
pub fn orbit_invariance_numeric(
    map: &RationalMap,
    candidate: &RatFunc,
    start: &[Rat],
    steps: usize,
) -> Result<OrbitReport, MapError> {
    if !map.is_parameter_free() {
        return Err(MapError::FreeParameters(map.params().join(", ")));
    }
    let vars = map.vars().merged(candidate.vars());
    let cand = candidate.with_vars(&vars);
    let comps: Vec<RatFunc> = map.components().iter().map(|c| c.with_vars(&vars)).collect();
    let mut cur: Vec<f64> = start.iter().map(crate::scalar::rat_to_f64).collect();
    let full = |p: &Vec<f64>| -> Vec<f64> {
        let mut v = p.clone();
        v.resize(vars.len(), 0.0);
        v
    };
    let r0 = match cand.eval_f64(&full(&cur)) {
        Some(v) => v,
        None => {
            return Ok(OrbitReport {
                max_deviation: f64::NAN,
                steps_completed: 0,
                pole_at: Some(0),
            })
        }
    };
    let mut max_dev = 0.0f64;
    for step in 1..=steps {
        let mut next = Vec::with_capacity(map.n());
        for c in &comps {
            match c.eval_f64(&full(&cur)) {
                Some(v) => next.push(v),
                None => {
                    return Ok(OrbitReport {
                        max_deviation: max_dev,
                        steps_completed: step - 1,
                        pole_at: Some(step),
                    })
                }
            }
        }
        cur = next;
        match cand.eval_f64(&full(&cur)) {
            Some(v) => max_dev = max_dev.max((v - r0).abs()),
            None => {
                return Ok(OrbitReport {
                    max_deviation: max_dev,
                    steps_completed: step,
                    pole_at: Some(step),
                })
            }
        }
    }
    Ok(OrbitReport {
        max_deviation: max_dev,
        steps_completed: steps,
        pole_at: None,
    })
}

/// Exact orbit invariance: the candidate value along an exact rational
/// orbit; returns the number of steps for which it stayed exactly constant.
pub fn orbit_invariance_exact(
    map: &RationalMap,
    candidate: &RatFunc,
    start: &[Rat],
    steps: usize,
) -> Result<bool, MapError> {
    let vars = map.vars().merged(candidate.vars());
    let cand = candidate.with_vars(&vars);
    let r0 = cand
        .eval_rat(start)
        .ok_or(MapError::PoleAtPoint { component: 0 })?;
    let mut cur = start.to_vec();
    for _ in 0..steps {
        cur = map.evaluate(&cur)?;
        let v = cand
            .eval_rat(&cur)
            .ok_or(MapError::PoleAtPoint { component: 0 })?;
        if v != r0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::parse::{parse_expr_in, parse_map};
    use crate::scalar::{rat, rat_int};

    fn check(map_src: &str, integral: &str) -> bool {
        let m = parse_map(map_src).unwrap();
        let r = parse_expr_in(integral, m.vars()).unwrap();
        verify_first_integral(&m, &r).unwrap().holds
    }

    #[test]
    fn known_invariants_hold() {
        // b = 1 member of the difference-equation family
        assert!(check(
            "vars x,y; params c; f = (y, -x + c/y)",
            "x^2*y^2 - c*x*y"
        ));
        // period-6 map, both invariants
        assert!(check("vars x,y; f = (y, y/x)", "x + 1/x + y + 1/y + x/y + y/x"));
        assert!(check(
            "vars x,y; f = (y, y/x)",
            "x*y + 1/(x*y) + x^2/y + y/x^2 + x/y^2 + y^2/x"
        ));
        // third-order shift map with symbolic parameter
        assert!(check(
            "vars x,y,z; params a; f = (y, z, (a+y+z)/x)",
            "(x+1)*(y+1)*(z+1)*(a+x+y+z)/(x*y*z)"
        ));
        assert!(check(
            "vars x,y,z; params a; f = (y, z, (a+y+z)/x)",
            "(1+x+y)*(1+y+z)*(a+x+y+z+x*z)/(x*y*z)"
        ));
        // four-dimensional map
        assert!(check(
            "vars x,y,z,t; params a,b,c; f = (z, t, (a*z+b*t+c)/x, (a*z+b*t+c)/y)",
            "(x*y+a*y+b*x)*(z*t+a*t+b*z)*(a*x+a*z+b*t+b*y+c)/(x*y*z*t)"
        ));
    }

    #[test]
    fn negative_control_fails_with_residual() {
        let m = parse_map("vars x,y; f = (y, 2*x)").unwrap();
        let r = parse_expr_in("x", m.vars()).unwrap();
        let out = verify_first_integral(&m, &r).unwrap();
        assert!(!out.holds);
        assert!(out.residual.is_some());
    }

    #[test]
    fn affine_change_preserves_verdict() {
        let m = parse_map("vars x,y; f = (y, y/x)").unwrap();
        let h = parse_expr_in("x + 1/x + y + 1/y + x/y + y/x", m.vars()).unwrap();
        for (a, b) in [(rat_int(2), rat_int(3)), (rat(-1, 2), rat(5, 7))] {
            let scaled = h
                .mul(&RatFunc::constant(h.vars(), a.clone()))
                .add(&RatFunc::constant(h.vars(), b.clone()));
            assert!(verify_first_integral(&m, &scaled).unwrap().holds);
        }
    }

    #[test]
    fn independence_of_pair() {
        let m = parse_map("vars x,y; f = (y, y/x)").unwrap();
        let h1 = parse_expr_in("x + 1/x + y + 1/y + x/y + y/x", m.vars()).unwrap();
        let h2 = parse_expr_in("x*y + 1/(x*y) + x^2/y + y/x^2 + x/y^2 + y^2/x", m.vars()).unwrap();
        let out = functional_independence(&m, &[h1.clone(), h2], 42);
        assert!(out.independent);
        assert_eq!(out.certainty, IndependenceCertainty::Exact);
        // H and H^2 are dependent (symbolically certified)
        let out2 = functional_independence(&m, &[h1.clone(), h1.mul(&h1)], 42);
        assert!(!out2.independent);
        assert_eq!(out2.certainty, IndependenceCertainty::Exact);
    }

    #[test]
    fn single_candidate_independent_iff_nonconstant() {
        let m = parse_map("vars x,y; f = (y, y/x)").unwrap();
        let h = parse_expr_in("x + y", m.vars()).unwrap();
        assert!(functional_independence(&m, &[h], 1).independent);
        let c = parse_expr_in("7/2", m.vars()).unwrap();
        assert!(!functional_independence(&m, &[c], 1).independent);
    }

    #[test]
    fn orbit_checks() {
        let m = parse_map("vars x,y; f = (y, y/x)").unwrap();
        let h1 = parse_expr_in("x + 1/x + y + 1/y + x/y + y/x", m.vars()).unwrap();
        let rep =
            orbit_invariance_numeric(&m, &h1, &[rat_int(2), rat_int(3)], 100).unwrap();
        assert!(rep.pole_at.is_none());
        assert!(rep.max_deviation < 1e-9, "deviation {}", rep.max_deviation);
        assert!(orbit_invariance_exact(&m, &h1, &[rat_int(2), rat_int(3)], 100).unwrap());
        // negative control grows
        let m2 = parse_map("vars x,y; f = (y, 2*x)").unwrap();
        let r = parse_expr_in("x", m2.vars()).unwrap();
        let rep2 = orbit_invariance_numeric(&m2, &r, &[rat_int(1), rat_int(1)], 20).unwrap();
        assert!(rep2.max_deviation > 1.0);
    }

    #[test]
    fn pole_reported_with_step() {
        // f = (y, 1/x) from (0, 1) hits the pole immediately
        let m = parse_map("vars x,y; f = (y, 1/x)").unwrap();
        let r = parse_expr_in("x + y", m.vars()).unwrap();
        let rep = orbit_invariance_numeric(&m, &r, &[rat_int(0), rat_int(1)], 5).unwrap();
        assert_eq!(rep.pole_at, Some(1));
    }
}
