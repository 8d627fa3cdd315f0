//! The n-dimensional pipeline: eliminate the state variables from the
//! fixed-point system joined with the characteristic polynomial numerator,
//! split off cyclotomic eigenvalue factors, and test the final eigenvalue
//! polynomial against every cyclotomic polynomial of admissible degree.

use num_traits::Zero;

use crate::cyclo::{self, cyclotomic_dense, indices_with_cyclo_degree_at_most};
use crate::dense::DensePoly;
use crate::error::MapError;
use crate::factor::rational_roots_dense;
use crate::gcd::multigcd;
use crate::map::parse::ParamConstraint;
use crate::map::RationalMap;
use crate::multipoly::{MultiPoly, VarSet};
use crate::resultant::resultant_in;
use crate::scalar::Rat;
use crate::unipoly::UniPoly;

use super::{CertificateEntry, MapAnalysis, Verdict};

/// Lift a dense polynomial into `vars` along variable `var`.
fn lift_dense(d: &DensePoly, vars: &VarSet, var: usize) -> MultiPoly<Rat> {
    let v = MultiPoly::<Rat>::var(vars, var);
    let mut acc = MultiPoly::zero(vars);
    for c in d.coeffs().iter().rev() {
        acc = &(&acc * &v) + &MultiPoly::constant(vars, c.clone());
    }
    acc
}

/// Divide out the content of `p` with respect to `mu` (polynomial gcd of
/// the mu-coefficients). Returns (content, primitive-in-mu part).
fn mu_content_split(p: &MultiPoly<Rat>, mu: usize) -> (MultiPoly<Rat>, MultiPoly<Rat>) {
    let coeffs = p.coeffs_in(mu);
    let mut g = MultiPoly::zero(p.vars());
    for c in &coeffs {
        if !c.is_zero() {
            g = multigcd(&g, c);
        }
        if g.is_constant() && !g.is_zero() {
            break;
        }
    }
    if g.is_zero() || g.is_constant() {
        return (MultiPoly::one(p.vars()), p.clone());
    }
    let q = p.exact_div(&g).expect("content divides");
    (g, q)
}

/// Repeatedly divide by cyclotomic polynomials in `mu`; returns the split
/// indices (with multiplicity) and the quotient.
fn split_cyclotomic_factors(p: &MultiPoly<Rat>, mu: usize) -> (Vec<u64>, MultiPoly<Rat>) {
    let mut rest = p.clone();
    let mut split = Vec::new();
    let mut d = 1u64;
    loop {
        let deg = rest.degree_in(mu) as u64;
        if deg == 0 || d > 2 * deg * deg + 1 {
            break;
        }
        if cyclo::totient(d) <= deg {
            let phi = lift_dense(&cyclotomic_dense(d), rest.vars(), mu);
            while let Ok(q) = rest.exact_div(&phi) {
                split.push(d);
                rest = q;
                if rest.degree_in(mu) == 0 {
                    break;
                }
            }
        }
        d += 1;
    }
    (split, rest)
}

/// Run the whole pipeline on a map with no or one free parameter.
pub fn analyze_ndim(
    map: &RationalMap,
    constraint: Option<&ParamConstraint>,
    budget: u32,
) -> Result<MapAnalysis, MapError> {
    let mut cert: Vec<CertificateEntry> = Vec::new();
    let verdict = ndim_pipeline(map, constraint, budget, &mut cert)?;
    Ok(MapAnalysis {
        fixed_points: Vec::new(),
        verdict,
        certificate: cert,
    })
}

fn inconclusive(msg: impl Into<String>) -> Verdict {
    Verdict::Inconclusive(msg.into())
}

pub fn ndim_pipeline(
    map: &RationalMap,
    constraint: Option<&ParamConstraint>,
    budget: u32,
    cert: &mut Vec<CertificateEntry>,
) -> Result<Verdict, MapError> {
    let n = map.n();
    let sys = map.fixed_point_system();
    if sys.numerator_equations.iter().any(|s| s.is_zero()) {
        return Ok(inconclusive("continuum of fixed points"));
    }
    let cp = map.char_poly();
    let evars = cp.numerator.vars().clone();
    let mu_idx = evars.index_of(&cp.mu).expect("mu variable present");
    cert.push(CertificateEntry::new(
        "char_poly_numerator",
        &cp.numerator,
    ));
    let mut state_eqs: Vec<MultiPoly<Rat>> = sys
        .numerator_equations
        .iter()
        .map(|s| s.with_vars(&evars))
        .collect();
    let mut rpoly = cp.numerator.clone();
    // eliminate all but the last state variable
    for v in 0..n.saturating_sub(1) {
        let vname = map.state_vars()[v].clone();
        let (with_v, rest): (Vec<_>, Vec<_>) =
            state_eqs.into_iter().partition(|p| p.contains_var(v));
        if with_v.is_empty() {
            state_eqs = rest;
            if rpoly.contains_var(v) {
                return Ok(inconclusive(format!(
                    "no fixed-point equation involves `{vname}`, cannot eliminate it"
                )));
            }
            continue;
        }
        let pivot_pos = with_v
            .iter()
            .enumerate()
            .min_by_key(|(_, p)| (p.degree_in(v), p.num_terms()))
            .map(|(i, _)| i)
            .unwrap();
        let pivot = with_v[pivot_pos].clone();
        let mut next = rest;
        for (i, other) in with_v.into_iter().enumerate() {
            if i == pivot_pos {
                continue;
            }
            let r = resultant_in(&pivot, &other, &vname)?;
            if r.is_zero() {
                return Ok(inconclusive(format!(
                    "elimination collapsed at `{vname}` (zero resultant)"
                )));
            }
            next.push(r.primitive_part());
        }
        if rpoly.contains_var(v) {
            rpoly = resultant_in(&pivot, &rpoly, &vname)?;
            if rpoly.is_zero() {
                return Ok(inconclusive(format!(
                    "elimination collapsed at `{vname}` while reducing the eigenvalue polynomial"
                )));
            }
            rpoly = rpoly.primitive_part();
        }
        state_eqs = next;
    }
    if state_eqs.len() > 1 {
        return Ok(inconclusive(format!(
            "{} constraints remain after elimination; unsupported system shape",
            state_eqs.len()
        )));
    }
    let constraint_eq = state_eqs.pop();
    if let Some(g) = &constraint_eq {
        cert.push(CertificateEntry::new("reduced_fixed_point_equation", g));
    }
    // reduce the eigenvalue polynomial modulo the remaining constraint by a
    // linear substitution when one is available, then strip mu-free content
    // and split cyclotomic eigenvalue factors
    let mut reduced = rpoly.clone();
    if let Some(g) = &constraint_eq {
        if let Some((w, expr)) = linear_solve_target(g) {
            reduced = reduced.subst(w, &expr);
            cert.push(CertificateEntry::new(
                "substituted_symbol",
                evars.name(w).to_string(),
            ));
        }
    }
    let (content, mut reduced) = mu_content_split(&reduced, mu_idx);
    if !content.is_constant() {
        cert.push(CertificateEntry::new("discarded_mu_free_content", &content));
    }
    let (split, rest) = split_cyclotomic_factors(&reduced, mu_idx);
    reduced = rest;
    if !split.is_empty() {
        cert.push(CertificateEntry::new(
            "split_cyclotomic_eigenvalue_factors",
            format!("{split:?}"),
        ));
    }
    cert.push(CertificateEntry::new("reduced_eigenvalue_equation", &reduced));
    // final elimination against the constraint
    let last = n - 1;
    let final_poly = match &constraint_eq {
        Some(g) if reduced.contains_var(last) => {
            let p = resultant_in(g, &reduced, &map.state_vars()[last])?;
            if p.is_zero() {
                return Ok(inconclusive(
                    "final resultant vanished identically (degenerate elimination)",
                ));
            }
            p
        }
        Some(g) if g.contains_var(last) => {
            // the eigenvalue polynomial no longer involves the last state
            // variable; the constraint only pins the fixed points
            let _ = g;
            reduced.clone()
        }
        _ => reduced.clone(),
    };
    if final_poly.degree_in(mu_idx) == 0 {
        return Ok(inconclusive(
            "eigenvalue variable disappeared from the final polynomial",
        ));
    }
    cert.push(CertificateEntry::new("eigenvalue_poly", &final_poly));
    // dispatch on the number of parameters
    if map.params().is_empty() {
        let up = UniPoly::new(final_poly.clone(), &cp.mu)?;
        let dense = match up.to_dense() {
            Ok(d) => d,
            Err(_) => {
                return Ok(inconclusive(
                    "a state variable survived the elimination; unsupported system shape",
                ))
            }
        };
        let deg = dense.degree().unwrap_or(0) as u32;
        let mut hits = Vec::new();
        for j in indices_with_cyclo_degree_at_most(deg.max(1)).indices {
            let phi = cyclotomic_dense(j);
            if phi.degree().unwrap_or(0) as u32 > deg {
                continue;
            }
            let r = resultant_in(
                &lift_dense(&dense, final_poly.vars(), mu_idx),
                &lift_dense(&phi, final_poly.vars(), mu_idx),
                &cp.mu,
            )?;
            let rv = r.constant_value().expect("constant resultant");
            cert.push(CertificateEntry::new(
                format!("res(eigenvalue_poly, cyclotomic[{j}])"),
                rv.to_string(),
            ));
            if rv.is_zero() {
                hits.push(j);
            }
        }
        return Ok(if hits.is_empty() {
            Verdict::Excluded
        } else {
            Verdict::CandidateIndices(hits)
        });
    }
    parametric_candidates(&final_poly, &cp.mu, &map.params()[0], constraint, budget, cert)
}

/// Solve a constraint linearly for one symbol: find `w` with the constraint
/// linear in `w` and a constant leading coefficient, returning the
/// substitution polynomial for `w`.
fn linear_solve_target(g: &MultiPoly<Rat>) -> Option<(usize, MultiPoly<Rat>)> {
    let vars = g.vars().clone();
    // prefer the last occurring symbol (typically the parameter)
    for w in (0..vars.len()).rev() {
        if g.degree_in(w) != 1 {
            continue;
        }
        let coeffs = g.coeffs_in(w);
        if let Some(c) = coeffs[1].constant_value() {
            if !c.is_zero() {
                // g = c*w + rest  =>  w = -rest/c
                let rest = &coeffs[0];
                let expr = rest.scale(&(-Rat::from_integer(1.into()) / c));
                return Some((w, expr));
            }
        }
    }
    None
}

/// For a one-parameter eigenvalue polynomial: resultants against every
/// admissible cyclotomic polynomial give conditions on the parameter; the
/// rational roots are candidates, and a candidate survives when the fully
/// specialized polynomial has only roots of unity.
pub fn parametric_candidates(
    final_poly: &MultiPoly<Rat>,
    mu: &str,
    param: &str,
    constraint: Option<&ParamConstraint>,
    budget: u32,
    cert: &mut Vec<CertificateEntry>,
) -> Result<Verdict, MapError> {
    let _ = budget;
    let vars = final_poly.vars().clone();
    let mu_idx = vars.index_of(mu).expect("mu present");
    let param_idx = vars.index_of(param).expect("param present");
    let deg = final_poly.degree_in(mu_idx);
    let mut candidates: Vec<(Rat, u64)> = Vec::new();
    for j in indices_with_cyclo_degree_at_most(deg.max(1)).indices {
        let phi = cyclotomic_dense(j);
        if phi.degree().unwrap_or(0) as u32 > deg {
            continue;
        }
        let r = resultant_in(final_poly, &lift_dense(&phi, &vars, mu_idx), mu)?;
        if r.is_zero() {
            cert.push(CertificateEntry::new(
                format!("res(eigenvalue_poly, cyclotomic[{j}])"),
                "0 (holds for every parameter value)",
            ));
            return Ok(inconclusive(format!(
                "the cyclotomic condition for index {j} holds identically in `{param}`"
            )));
        }
        let dense = UniPoly::new(r.clone(), param)?.to_dense()?;
        cert.push(CertificateEntry::new(
            format!("res(eigenvalue_poly, cyclotomic[{j}])"),
            UniPoly::from_dense(param, &dense),
        ));
        for (root, _) in rational_roots_dense(&dense) {
            if constraint.map_or(true, |c| c.satisfied_by(&root)) {
                candidates.push((root, j));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    candidates.dedup_by(|a, b| a.0 == b.0);
    cert.push(CertificateEntry::new(
        "parameter_candidates",
        format!(
            "{:?}",
            candidates
                .iter()
                .map(|(r, j)| format!("{param}={r} (index {j})"))
                .collect::<Vec<_>>()
        ),
    ));
    // survivor filter: every root of the specialized polynomial must be a
    // root of unity
    let mut survivors: Vec<Rat> = Vec::new();
    for (root, _) in &candidates {
        let spec = final_poly.subst(param_idx, &MultiPoly::constant(&vars, root.clone()));
        let dense = UniPoly::new(spec, mu)?.to_dense()?;
        if dense.is_zero() {
            cert.push(CertificateEntry::new(
                format!("root_of_unity_filter[{param}={root}]"),
                "specialized polynomial vanished; flagged, not counted",
            ));
            continue;
        }
        let check = cyclo::is_root_of_unity(&dense);
        cert.push(CertificateEntry::new(
            format!("root_of_unity_filter[{param}={root}]"),
            match &check.witness {
                cyclo::CycloProduct::Product(ix) => format!("all roots of unity {ix:?}"),
                cyclo::CycloProduct::NonMonic => "rejected: non-monic primitive part".to_string(),
                cyclo::CycloProduct::Remainder(r) => {
                    format!("rejected: non-cyclotomic remainder {}", UniPoly::from_dense(mu, r))
                }
            },
        ));
        if check.is_root_of_unity {
            survivors.push(root.clone());
        }
    }
    survivors.sort();
    Ok(Verdict::candidate_params(&survivors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::parse::parse_map;

    #[test]
    fn prime_diagonal_map_is_excluded() {
        let m = parse_map("vars x,y,z; f = (2*x, 3*y, 5*z)").unwrap();
        let out = analyze_ndim(&m, None, 6).unwrap();
        assert!(out.verdict.is_excluded(), "verdict {:?}", out.verdict);
        // eigenvalue polynomial is (mu-2)(mu-3)(mu-5)
        let ep = out
            .certificate
            .iter()
            .find(|e| e.label == "eigenvalue_poly")
            .unwrap();
        assert!(ep.value.contains("mu^3"), "got {}", ep.value);
    }

    #[test]
    fn identity_map_is_continuum() {
        let m = parse_map("vars x,y,z; f = (x, y, z)").unwrap();
        let out = analyze_ndim(&m, None, 6).unwrap();
        assert!(matches!(out.verdict, Verdict::Inconclusive(ref msg) if msg.contains("continuum")));
    }

    #[test]
    fn third_order_shift_map_parametric_candidates() {
        let m = parse_map("vars x,y,z; params a; f = (y, z, (a+y+z)/x)").unwrap();
        let out = analyze_ndim(&m, None, 6).unwrap();
        match &out.verdict {
            Verdict::CandidateParams(vals) => assert_eq!(vals, &["-1", "1"]),
            other => panic!("unexpected verdict {other:?}"),
        }
        // the reduced eigenvalue equation matches the hand reduction
        let red = out
            .certificate
            .iter()
            .find(|e| e.label == "reduced_eigenvalue_equation")
            .unwrap();
        assert_eq!(red.value, "z*mu^2 - z*mu + z - mu");
        // the split factor is mu + 1 (index 2)
        let split = out
            .certificate
            .iter()
            .find(|e| e.label == "split_cyclotomic_eigenvalue_factors")
            .unwrap();
        assert_eq!(split.value, "[2]");
    }

    #[test]
    fn quoted_resultants_for_shift_map() {
        let m = parse_map("vars x,y,z; params a; f = (y, z, (a+y+z)/x)").unwrap();
        let out = analyze_ndim(&m, None, 6).unwrap();
        let find = |label: &str| {
            out.certificate
                .iter()
                .find(|e| e.label == label)
                .unwrap_or_else(|| panic!("missing {label}"))
                .value
                .clone()
        };
        // Res(P4, Phi_3) = (4a-5)^2 = 16a^2 - 40a + 25
        assert_eq!(find("res(eigenvalue_poly, cyclotomic[3])"), "16*a^2 - 40*a + 25");
        // the product formula forces (a-1)^4 here; its only rational root
        // is a = 1 either way
        assert_eq!(
            find("res(eigenvalue_poly, cyclotomic[8])"),
            "a^4 - 4*a^3 + 6*a^2 - 4*a + 1"
        );
        // Res(P4, Phi_10) = (a^2-a-1)^2
        assert_eq!(
            find("res(eigenvalue_poly, cyclotomic[10])"),
            "a^4 - 2*a^3 - a^2 + 2*a + 1"
        );
    }
}
