//! Planar obstruction pipelines: hypothesis checks at a fixed point, the
//! eliminant-refined obstruction polynomial, the cyclotomic-resultant
//! battery, fast paths for rational and quadratic fixed points, the
//! two-integral classification, and the one-parameter planar analysis.

use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

use crate::cyclo::{self, indices_with_cos_degree_at_most, min_poly_cos};
use crate::dense::DensePoly;
use crate::error::MapError;
use crate::factor::{factor_bounded_dense, rational_roots_dense};
use crate::gcd::multigcd;
use crate::map::fixed::{
    enumerate_real_fixed_points, eval_at_shared, FixedPoint, FixedPointEnumeration,
    SharedAlgebraic,
};
use crate::map::parse::ParamConstraint;
use crate::map::RationalMap;
use crate::multipoly::{MultiPoly, VarSet};
use crate::quadext::QuadExt;
use crate::ratfunc::RatFunc;
use crate::realroot::isolate_dense;
use crate::resonance::{rank_conjugate_pair, ConjugatePair};
use crate::resultant::resultant_in;
use crate::scalar::{rat_int, Rat};
use crate::unipoly::UniPoly;

use super::{
    cos_minpoly_battery, CertificateEntry, FixedPointOutcome, HypothesisCheck, MapAnalysis,
    Verdict,
};

fn sign_str(s: Ordering) -> &'static str {
    match s {
        Ordering::Less => "negative",
        Ordering::Equal => "zero",
        Ordering::Greater => "positive",
    }
}

fn sign_mul(a: Ordering, b: Ordering) -> Ordering {
    match (a, b) {
        (Ordering::Equal, _) | (_, Ordering::Equal) => Ordering::Equal,
        (x, y) if x == y => Ordering::Greater,
        _ => Ordering::Less,
    }
}

/// Trace/determinant data of the Jacobian evaluated at a shared-algebraic
/// fixed point: four dense polynomials in theta plus theta itself.
struct PairAtPoint {
    shared: SharedAlgebraic,
    tn: DensePoly,
    td: DensePoly,
    dn: DensePoly,
    dd: DensePoly,
}

impl PairAtPoint {
    fn new(map: &RationalMap, shared: &SharedAlgebraic) -> Self {
        let cp = map.char_poly();
        PairAtPoint {
            shared: shared.clone(),
            tn: eval_at_shared(cp.trace.num(), shared),
            td: eval_at_shared(cp.trace.den(), shared),
            dn: eval_at_shared(cp.det.num(), shared),
            dd: eval_at_shared(cp.det.den(), shared),
        }
    }

    fn theta(&self) -> &crate::realroot::RealAlgebraic {
        &self.shared.theta
    }

    fn m(&self) -> &DensePoly {
        self.shared.theta.minpoly()
    }

    /// Sign of trace^2 - 4 det.
    fn discriminant_sign(&self) -> Ordering {
        let num = self
            .tn
            .mul(&self.tn)
            .mul(&self.dd)
            .sub(&self.dn.mul(&self.td).mul(&self.td).scale(&rat_int(4)))
            .rem(self.m());
        let den = self.td.mul(&self.td).mul(&self.dd).rem(self.m());
        sign_mul(self.theta().sign_of(&num), self.theta().sign_of(&den))
    }

    /// Sign of det - 1.
    fn det_minus_one_sign(&self) -> Ordering {
        let num = self.dn.sub(&self.dd).rem(self.m());
        sign_mul(self.theta().sign_of(&num), self.theta().sign_of(&self.dd))
    }

    /// Numerator/denominator of v = trace^2/(2 det) - 1 as polynomials in
    /// theta.
    fn ratio_value(&self) -> (DensePoly, DensePoly) {
        let num = self
            .tn
            .mul(&self.tn)
            .mul(&self.dd)
            .sub(&self.dn.mul(&self.td).mul(&self.td).scale(&rat_int(2)))
            .rem(self.m());
        let den = self
            .dn
            .mul(&self.td)
            .mul(&self.td)
            .scale(&rat_int(2))
            .rem(self.m());
        (num, den)
    }

    /// Exact test: does the univariate `f` vanish at vn/vd evaluated at
    /// theta?
    fn vanishes_at_ratio(&self, f: &DensePoly, vn: &DensePoly, vd: &DensePoly) -> bool {
        let d = match f.degree() {
            Some(d) => d,
            None => return true,
        };
        let mut acc = DensePoly::zero();
        let mut vn_pow = DensePoly::one();
        let mut vd_pows = vec![DensePoly::one()];
        for _ in 0..d {
            let last = vd_pows.last().unwrap().mul(vd).rem(self.m());
            vd_pows.push(last);
        }
        for (i, c) in f.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let term = vn_pow.scale(c).mul(&vd_pows[d - i]).rem(self.m());
                acc = acc.add(&term);
            }
            if i < d {
                vn_pow = vn_pow.mul(vn).rem(self.m());
            }
        }
        self.theta().sign_of(&acc.rem(self.m())) == Ordering::Equal
    }

    /// Conjugate-pair data for the resonance cross-check.
    fn conjugate_pair(&self, map: &RationalMap, budget: u32) -> Option<ConjugatePair> {
        crate::resonance::conjugate_pair_at(map, &self.shared, budget)
    }
}

/// Select the factors of `poly` (bounded factorization) that vanish at a
/// value, using an exact vanishing test; unsplit chunks can be refined by a
/// caller-provided divisor hint.
fn select_vanishing(
    poly: &DensePoly,
    budget: u32,
    vanishes: impl Fn(&DensePoly) -> bool,
    refine_hint: impl Fn() -> Option<DensePoly>,
) -> Vec<DensePoly> {
    let fact = factor_bounded_dense(poly, budget);
    let mut selected = Vec::new();
    for (f, _mult) in &fact.irreducible {
        if vanishes(f) {
            selected.push(f.clone());
        }
    }
    for (chunk, _mult) in &fact.unsplit {
        if !vanishes(chunk) {
            continue;
        }
        // possibly reducible: try to replace the chunk by a certified
        // divisor that still vanishes at the value
        if let Some(hint) = refine_hint() {
            if !hint.is_constant()
                && chunk.div_rem(&hint).1.is_zero()
                && vanishes(&hint)
            {
                selected.push(hint);
                continue;
            }
        }
        selected.push(chunk.clone());
    }
    selected.sort_by(|a, b| a.degree().cmp(&b.degree()).then(a.coeffs().cmp(b.coeffs())));
    selected.dedup();
    selected
}

/// The planar obstruction pipeline at one certified fixed point.
pub fn planar_pipeline_at(
    map: &RationalMap,
    fp: &FixedPoint,
    budget: u32,
) -> Result<FixedPointOutcome, MapError> {
    assert_eq!(map.n(), 2);
    let point: Vec<String> = fp.coords.iter().map(|c| c.to_string()).collect();
    let shared = match (&fp.shared, fp.exact) {
        (Some(s), true) => s.clone(),
        _ => {
            return Ok(FixedPointOutcome {
                point,
                hypothesis_checks: Vec::new(),
                verdict: Verdict::Inconclusive(
                    "fixed point could not be certified exactly".into(),
                ),
                certificate: Vec::new(),
            })
        }
    };
    let pair = PairAtPoint::new(map, &shared);
    let mut checks = Vec::new();
    let disc = pair.discriminant_sign();
    checks.push(HypothesisCheck {
        name: "complex_conjugate_eigenvalues".into(),
        outcome: format!("trace^2 - 4*det is {}", sign_str(disc)),
        holds: disc == Ordering::Less,
    });
    let dm1 = pair.det_minus_one_sign();
    checks.push(HypothesisCheck {
        name: "modulus_not_one".into(),
        outcome: format!("det - 1 is {}", sign_str(dm1)),
        holds: dm1 != Ordering::Equal,
    });
    if checks.iter().any(|c| !c.holds) {
        return Ok(FixedPointOutcome {
            point,
            hypothesis_checks: checks,
            verdict: Verdict::Inconclusive("hypothesis failed at this fixed point".into()),
            certificate: Vec::new(),
        });
    }

    let mut cert: Vec<CertificateEntry> = Vec::new();
    let sys = map.fixed_point_system();
    let xn = map.state_vars()[0].clone();
    let yn = map.state_vars()[1].clone();
    cert.push(CertificateEntry::new(
        format!("fixed_eq[{xn}]"),
        &sys.numerator_equations[0],
    ));
    cert.push(CertificateEntry::new(
        format!("fixed_eq[{yn}]"),
        &sys.numerator_equations[1],
    ));

    // the modulus-ratio condition polynomial in (x, y, v)
    let cp = map.char_poly();
    let mut names: Vec<String> = map.vars().names().to_vec();
    let mut vname = "v".to_string();
    while names.iter().any(|n| *n == vname) {
        vname.push('_');
    }
    names.push(vname.clone());
    let wvars = VarSet::new(names);
    let vvar = MultiPoly::<Rat>::var(&wvars, wvars.len() - 1);
    let lift = |p: &MultiPoly<Rat>| p.with_vars(&wvars);
    let t1 = lift(cp.trace.num());
    let t2 = lift(cp.trace.den());
    let d1 = lift(cp.det.num());
    let d2 = lift(cp.det.den());
    let one = MultiPoly::one(&wvars);
    let w = &(&(&t1 * &t1) * &d2)
        - &(&(&(&one + &vvar).scale(&rat_int(2)) * &(&t2 * &t2)) * &d1);
    cert.push(CertificateEntry::new("ratio_condition_poly", &w));

    // reduced route: eliminants, factors through the fixed point
    let elim = match map.planar_eliminants() {
        Ok(e) => e,
        Err(MapError::DegenerateElimination(msg)) => {
            return Ok(FixedPointOutcome {
                point,
                hypothesis_checks: checks,
                verdict: Verdict::Inconclusive(format!("degenerate elimination: {msg}")),
                certificate: cert,
            })
        }
        Err(e) => return Err(e),
    };
    let t1e = elim.in_second.to_dense()?;
    let t3e = elim.in_first.to_dense()?;
    cert.push(CertificateEntry::new(
        format!("eliminant[{yn}]"),
        &elim.in_second,
    ));
    cert.push(CertificateEntry::new(
        format!("eliminant[{xn}]"),
        &elim.in_first,
    ));

    let coord_vanishes = |coord_expr: &DensePoly, f: &DensePoly| -> bool {
        // f(coord) with coord = expr(theta): compose and reduce
        let m = shared.theta.minpoly();
        let mut acc = DensePoly::zero();
        for c in f.coeffs().iter().rev() {
            acc = acc.mul(coord_expr).rem(m).add(&DensePoly::constant(c.clone()));
        }
        shared.theta.sign_of(&acc.rem(m)) == Ordering::Equal
    };
    let v1_parts = select_vanishing(
        &t1e,
        budget,
        |f| coord_vanishes(&shared.exprs[1], f),
        || None,
    );
    let v3_parts = select_vanishing(
        &t3e,
        budget,
        |f| coord_vanishes(&shared.exprs[0], f),
        || None,
    );
    if v1_parts.is_empty() || v3_parts.is_empty() {
        return Ok(FixedPointOutcome {
            point,
            hypothesis_checks: checks,
            verdict: Verdict::Inconclusive(
                "no eliminant factor vanishes at the fixed point".into(),
            ),
            certificate: cert,
        });
    }
    let v1 = v1_parts
        .iter()
        .fold(DensePoly::one(), |acc, f| acc.mul(f));
    let v3 = v3_parts
        .iter()
        .fold(DensePoly::one(), |acc, f| acc.mul(f));
    cert.push(CertificateEntry::new(
        format!("selected_eliminant_factor[{yn}]"),
        UniPoly::from_dense(&yn, &v1),
    ));
    cert.push(CertificateEntry::new(
        format!("selected_eliminant_factor[{xn}]"),
        UniPoly::from_dense(&xn, &v3),
    ));

    // obstruction polynomial from the reduced system
    let lift_dense = |d: &DensePoly, var: usize| -> MultiPoly<Rat> {
        let mut acc = MultiPoly::zero(&wvars);
        let v = MultiPoly::<Rat>::var(&wvars, var);
        for c in d.coeffs().iter().rev() {
            acc = &(&acc * &v) + &MultiPoly::constant(&wvars, c.clone());
        }
        acc
    };
    let v1_lift = lift_dense(&v1, 1);
    let v3_lift = lift_dense(&v3, 0);
    let inner = resultant_in(&w, &v1_lift, &yn)?;
    let u_raw = if inner.is_zero() {
        MultiPoly::zero(&wvars)
    } else {
        resultant_in(&inner, &v3_lift, &xn)?
    };
    if u_raw.is_zero() {
        return Ok(FixedPointOutcome {
            point,
            hypothesis_checks: checks,
            verdict: Verdict::Inconclusive("obstruction polynomial vanished identically".into()),
            certificate: cert,
        });
    }
    let u_dense = UniPoly::new(u_raw.clone(), &vname)?.to_dense()?;
    cert.push(CertificateEntry::new(
        "obstruction_poly_raw",
        UniPoly::from_dense(&vname, &u_dense),
    ));
    cert.push(CertificateEntry::new(
        "obstruction_poly",
        UniPoly::from_dense(&vname, &u_dense.primitive_part()),
    ));

    // select the factor(s) vanishing at v = trace^2/(2 det) - 1
    let (vn, vd) = pair.ratio_value();
    let minpoly_hint = || -> Option<DensePoly> {
        // eliminate theta from v*vd(t) - vn(t): a defining polynomial for
        // the ratio value; its vanishing irreducible factor is the minimal
        // polynomial
        let tvars = VarSet::new(vec!["t".to_string(), vname.clone()]);
        let tv = MultiPoly::<Rat>::var(&tvars, 0);
        let vv = MultiPoly::<Rat>::var(&tvars, 1);
        let lift_t = |d: &DensePoly| -> MultiPoly<Rat> {
            let mut acc = MultiPoly::zero(&tvars);
            for c in d.coeffs().iter().rev() {
                acc = &(&acc * &tv) + &MultiPoly::constant(&tvars, c.clone());
            }
            acc
        };
        let elim_input = &(&vv * &lift_t(&vd)) - &lift_t(&vn);
        let mp = lift_t(shared.theta.minpoly());
        let res = resultant_in(&mp, &elim_input, "t").ok()?;
        let dense = UniPoly::new(res, &vname).ok()?.to_dense().ok()?;
        if dense.is_zero() {
            return None;
        }
        let fact = factor_bounded_dense(&dense, 6);
        let hit = fact
            .all_factors()
            .map(|(f, _)| f.clone())
            .find(|f| !f.is_constant() && pair.vanishes_at_ratio(f, &vn, &vd));
        hit
    };
    let selected = select_vanishing(
        &u_dense,
        budget,
        |f| pair.vanishes_at_ratio(f, &vn, &vd),
        minpoly_hint,
    );
    if selected.is_empty() {
        return Ok(FixedPointOutcome {
            point,
            hypothesis_checks: checks,
            verdict: Verdict::Inconclusive(
                "no obstruction factor vanishes at the eigenvalue ratio".into(),
            ),
            certificate: cert,
        });
    }
    let mut hits: Vec<u64> = Vec::new();
    for (i, f) in selected.iter().enumerate() {
        let fp_norm = f.primitive_part();
        cert.push(CertificateEntry::new(
            format!("selected_obstruction_factor[{i}]"),
            UniPoly::from_dense(&vname, &fp_norm),
        ));
        let battery = cos_minpoly_battery(&fp_norm, &format!("factor[{i}]"));
        cert.extend(battery.entries);
        hits.extend(battery.hits);
    }
    hits.sort();
    hits.dedup();

    // cross-check: the unreduced route through the full eliminant
    full_route_cross_check(&sys.numerator_equations, &w, &t1e, &yn, &xn, &vname, &mut cert, &hits);

    // cross-check: the resonance-side conjugate-pair test must agree
    if let Some(cpair) = pair.conjugate_pair(map, budget) {
        if let Ok(out) = rank_conjugate_pair(&cpair) {
            cert.push(CertificateEntry::new(
                "resonance_cross_check",
                format!(
                    "conjugate-pair lattice rank {} (matched index {:?})",
                    out.lattice.rank(),
                    out.matched_index
                ),
            ));
        }
    }

    let verdict = if hits.is_empty() {
        Verdict::Excluded
    } else {
        Verdict::CandidateIndices(hits)
    };
    Ok(FixedPointOutcome {
        point,
        hypothesis_checks: checks,
        verdict,
        certificate: cert,
    })
}

/// The literal three-equation route: T2(y,v) = Res_x(S1, W), then
/// U = Res_y(T1, T2). Degenerate output is repaired once by stripping the
/// common gcd. Candidate indices from this route must contain the refined
/// ones; both sets are recorded.
#[allow(clippy::too_many_arguments)]
fn full_route_cross_check(
    s: &[MultiPoly<Rat>],
    w: &MultiPoly<Rat>,
    t1e: &DensePoly,
    yn: &str,
    xn: &str,
    vname: &str,
    cert: &mut Vec<CertificateEntry>,
    refined_hits: &[u64],
) {
    let run = || -> Option<(Vec<u64>, String)> {
        let s1 = s[0].with_vars(w.vars());
        let t2f = resultant_in(&s1, w, xn).ok()?;
        let t1_lift = {
            let vars = w.vars().clone();
            let yv = MultiPoly::<Rat>::var(&vars, vars.index_of(yn)?);
            let mut acc = MultiPoly::zero(&vars);
            for c in t1e.coeffs().iter().rev() {
                acc = &(&acc * &yv) + &MultiPoly::constant(&vars, c.clone());
            }
            acc
        };
        if t2f.is_zero() {
            return Some((Vec::new(), "unreduced route degenerated (T2 = 0)".into()));
        }
        let u_full = resultant_in(&t1_lift, &t2f, yn).ok()?;
        let (u, note) = if u_full.is_zero() {
            // repair: strip the common gcd and retry once
            let g = multigcd(&t1_lift, &t2f);
            if g.is_constant() {
                return Some((Vec::new(), "unreduced route degenerated (U = 0)".into()));
            }
            let t1r = t1_lift.exact_div(&g).ok()?;
            let t2r = t2f.exact_div(&g).ok()?;
            let u2 = resultant_in(&t1r, &t2r, yn).ok()?;
            if u2.is_zero() {
                return Some((
                    Vec::new(),
                    "unreduced route degenerated (U = 0 after gcd repair)".into(),
                ));
            }
            (u2, "gcd-repaired".to_string())
        } else {
            (u_full, "direct".to_string())
        };
        let dense = UniPoly::new(u, vname).ok()?.to_dense().ok()?;
        let battery = cos_minpoly_battery(&dense.primitive_part(), "full_route");
        Some((battery.hits, format!("{note}, degree {}", dense.degree().unwrap_or(0))))
    };
    match run() {
        Some((hits, note)) => {
            let consistent = refined_hits.iter().all(|h| hits.contains(h));
            cert.push(CertificateEntry::new(
                "unreduced_route",
                format!(
                    "{note}; candidate indices {:?}; refined subset of full: {consistent}",
                    hits
                ),
            ));
        }
        None => {
            cert.push(CertificateEntry::new(
                "unreduced_route",
                "could not be computed".to_string(),
            ));
        }
    }
}

/// Fast path for a rational fixed point: excluded unless trace^2/det lands
/// in the finite admissible set (regenerated from the rational cos values).
pub fn fast_path_rational_fp(trace: &Rat, det: &Rat) -> Result<(Verdict, Option<u64>), MapError> {
    let disc = trace * trace - Rat::from_integer(4.into()) * det;
    if !disc.is_negative() {
        return Err(MapError::DegenerateElimination(
            "eigenvalues are not complex conjugates".into(),
        ));
    }
    if det.is_one() {
        return Err(MapError::DegenerateElimination(
            "eigenvalues have modulus one".into(),
        ));
    }
    let v = trace * trace / (Rat::from_integer(2.into()) * det) - Rat::one();
    match cyclo::rational_cos_index(&v) {
        Some(p) => Ok((Verdict::CandidateIndices(vec![p]), Some(p))),
        None => Ok((Verdict::Excluded, None)),
    }
}

/// Fast path for a fixed point with coordinates in a real quadratic
/// extension: same test, evaluated exactly in Q[sqrt(s)] against the
/// degree <= 2 cos-minimal-polynomials.
pub fn fast_path_quadratic_fp(
    trace: &QuadExt,
    det: &QuadExt,
) -> Result<(Verdict, Option<u64>), MapError> {
    let four = QuadExt::rational(rat_int(4));
    let two = QuadExt::rational(rat_int(2));
    let disc = trace
        .mul(trace)
        .and_then(|t2| t2.sub(&four.mul(det)?))
        .ok_or_else(|| MapError::DegenerateElimination("incompatible extensions".into()))?;
    if quad_sign(&disc) != Ordering::Less {
        return Err(MapError::DegenerateElimination(
            "eigenvalues are not complex conjugates".into(),
        ));
    }
    let one = QuadExt::rational(Rat::one());
    let dm1 = det
        .sub(&one)
        .ok_or_else(|| MapError::DegenerateElimination("incompatible extensions".into()))?;
    if dm1.is_zero() {
        return Err(MapError::DegenerateElimination(
            "eigenvalues have modulus one".into(),
        ));
    }
    let v = trace
        .mul(trace)
        .and_then(|t2| t2.div(&two.mul(det)?))
        .and_then(|q| q.sub(&one))
        .ok_or_else(|| MapError::DegenerateElimination("incompatible extensions".into()))?;
    if let Some(r) = v.as_rational() {
        return Ok(match cyclo::rational_cos_index(&r) {
            Some(p) => (Verdict::CandidateIndices(vec![p]), Some(p)),
            None => (Verdict::Excluded, None),
        });
    }
    for p in indices_with_cos_degree_at_most(2).indices {
        let mp = min_poly_cos(p);
        if mp.degree() == 2 && v.eval_poly(&mp.poly).is_zero() {
            return Ok((Verdict::CandidateIndices(vec![p]), Some(p)));
        }
    }
    Ok((Verdict::Excluded, None))
}

fn quad_sign(x: &QuadExt) -> Ordering {
    if x.is_zero() {
        return Ordering::Equal;
    }
    if x.b.is_zero() {
        return if x.a.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        };
    }
    if x.a.is_zero() {
        return if x.b.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        };
    }
    let a_pos = x.a.is_positive();
    let b_pos = x.b.is_positive();
    if a_pos == b_pos {
        return if a_pos { Ordering::Greater } else { Ordering::Less };
    }
    // signs differ: compare a^2 against b^2 s
    let lhs = &x.a * &x.a;
    let rhs = &x.b * &x.b * Rat::from_integer(x.s.clone());
    match lhs.cmp(&rhs) {
        Ordering::Greater => {
            if a_pos {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        }
        Ordering::Less => {
            if b_pos {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        }
        Ordering::Equal => Ordering::Equal,
    }
}

/// Lemma-style classification: a planar real map with characteristic
/// polynomial mu^2 + b mu + c at a real fixed point can have two
/// functionally independent meromorphic first integrals only if every
/// eigenvalue is a root of unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwoIntegralVerdict {
    Possible { witness: Vec<u64> },
    Impossible(String),
}

pub fn two_integral_classification(b: &Rat, c: &Rat) -> TwoIntegralVerdict {
    let charpoly = DensePoly::new(vec![c.clone(), b.clone(), Rat::one()]);
    let check = cyclo::is_root_of_unity(&charpoly);
    if check.is_root_of_unity {
        match check.witness {
            cyclo::CycloProduct::Product(idx) => TwoIntegralVerdict::Possible { witness: idx },
            _ => unreachable!(),
        }
    } else {
        let disc = b * b - Rat::from_integer(4.into()) * c;
        let reason = if disc.is_negative() {
            if c.is_one() {
                "eigenvalues on the unit circle but not roots of unity".to_string()
            } else {
                format!("complex eigenvalues with det = {c} != 1")
            }
        } else {
            "real eigenvalues other than +/-1".to_string()
        };
        TwoIntegralVerdict::Impossible(reason)
    }
}

/// Sweep the two-exponent power maps f(x,y) = (y, x^p y^q): which (p, q)
/// admit two functionally independent first integrals by the
/// classification (characteristic polynomial mu^2 - q mu - p at (1,1)).
pub fn sweep_power_maps(bound: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for p in -bound..=bound {
        if p == 0 {
            continue;
        }
        for q in -bound..=bound {
            let b = Rat::from_integer((-q).into());
            let c = Rat::from_integer((-p).into());
            if matches!(
                two_integral_classification(&b, &c),
                TwoIntegralVerdict::Possible { .. }
            ) {
                out.push((p, q));
            }
        }
    }
    out.sort();
    out
}

/// Parameter-free planar analysis: one pipeline run per certified real
/// fixed point, aggregated.
pub fn analyze_planar(map: &RationalMap, budget: u32) -> Result<MapAnalysis, MapError> {
    let fps = match enumerate_real_fixed_points(map)? {
        FixedPointEnumeration::Points(p) => p,
        FixedPointEnumeration::Continuum => {
            return Ok(MapAnalysis {
                fixed_points: Vec::new(),
                verdict: Verdict::Inconclusive("continuum of fixed points".into()),
                certificate: Vec::new(),
            })
        }
    };
    if fps.is_empty() {
        return Ok(MapAnalysis {
            fixed_points: Vec::new(),
            verdict: Verdict::Inconclusive("no real fixed point found".into()),
            certificate: Vec::new(),
        });
    }
    let mut outcomes = Vec::new();
    for fp in &fps {
        outcomes.push(planar_pipeline_at(map, fp, budget)?);
    }
    let verdict = aggregate_verdicts(&outcomes);
    Ok(MapAnalysis {
        fixed_points: outcomes,
        verdict,
        certificate: Vec::new(),
    })
}

/// Excluded wins (one certified obstruction suffices); otherwise candidate
/// index sets are reported per fixed point and the map verdict stays
/// non-committal.
fn aggregate_verdicts(outcomes: &[FixedPointOutcome]) -> Verdict {
    if let Some(o) = outcomes.iter().find(|o| o.verdict.is_excluded()) {
        let _ = o;
        return Verdict::Excluded;
    }
    let mut all_indices: Vec<u64> = Vec::new();
    let mut any_candidates = false;
    for o in outcomes {
        if let Verdict::CandidateIndices(ix) = &o.verdict {
            any_candidates = true;
            all_indices.extend(ix.iter().copied());
        }
    }
    if any_candidates {
        all_indices.sort();
        all_indices.dedup();
        return Verdict::CandidateIndices(all_indices);
    }
    Verdict::Inconclusive("no fixed point produced a verdict".into())
}

/// One-parameter planar analysis at rational fixed points that persist for
/// every parameter value: hypothesis-region analysis, the rational-value
/// condition on trace^2/det, exception values where the hypothesis fails,
/// and a final per-candidate confirmation through the specialized pipeline.
pub fn analyze_planar_parametric(
    map: &RationalMap,
    constraint: Option<&ParamConstraint>,
    budget: u32,
) -> Result<MapAnalysis, MapError> {
    assert_eq!(map.n(), 2);
    assert_eq!(map.params().len(), 1);
    let param = map.params()[0].clone();
    if let Some(c) = constraint {
        if c.param != param {
            return Err(MapError::UndeclaredVariable(c.param.clone()));
        }
    }
    let mut cert: Vec<CertificateEntry> = Vec::new();
    let fps = parametric_rational_fixed_points(map)?;
    if fps.is_empty() {
        return Ok(MapAnalysis {
            fixed_points: Vec::new(),
            verdict: Verdict::Inconclusive(
                "no rational fixed point persists across the parameter".into(),
            ),
            certificate: cert,
        });
    }
    let mut per_fp: Vec<FixedPointOutcome> = Vec::new();
    let mut candidate_sets: Vec<Vec<Rat>> = Vec::new();
    for (x0, y0) in &fps {
        let outcome = parametric_pipeline_at_point(map, x0, y0, constraint, budget, &mut cert)?;
        if let Verdict::CandidateParams(vals) = &outcome.verdict {
            candidate_sets.push(
                vals.iter()
                    .map(|s| {
                        crate::map::parse::parse_rat_list(s).expect("rendered rational")[0].clone()
                    })
                    .collect(),
            );
        }
        per_fp.push(outcome);
    }
    let verdict = if per_fp.iter().any(|o| o.verdict.is_excluded()) {
        Verdict::Excluded
    } else if let Some(first) = candidate_sets.first() {
        // intersect over fixed points that produced candidate sets
        let mut inter: Vec<Rat> = first.clone();
        for set in &candidate_sets[1..] {
            inter.retain(|v| set.contains(v));
        }
        inter.sort();
        Verdict::candidate_params(&inter)
    } else {
        Verdict::Inconclusive("no fixed point produced a parametric verdict".into())
    };
    Ok(MapAnalysis {
        fixed_points: per_fp,
        verdict,
        certificate: cert,
    })
}

/// Rational fixed points (x0, y0) with S_i(x0, y0, a) = 0 identically in
/// the parameter.
fn parametric_rational_fixed_points(map: &RationalMap) -> Result<Vec<(Rat, Rat)>, MapError> {
    let sys = map.fixed_point_system();
    if sys.numerator_equations.iter().any(|s| s.is_zero()) {
        return Ok(Vec::new());
    }
    let elim = match map.planar_eliminants() {
        Ok(e) => e,
        Err(MapError::DegenerateElimination(_)) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    let param = &map.params()[0];
    let cand = |u: &UniPoly<Rat>, main: &str| -> Result<Vec<Rat>, MapError> {
        // gcd across the parameter powers: roots valid for every parameter
        let pu = UniPoly::new(u.poly().clone(), param)?;
        let mut g = MultiPoly::zero(u.poly().vars());
        for c in pu.coeffs() {
            g = multigcd(&g, &c);
        }
        if g.is_constant() {
            return Ok(Vec::new());
        }
        let dense = UniPoly::new(g, main)?.to_dense()?;
        Ok(rational_roots_dense(&dense).into_iter().map(|(r, _)| r).collect())
    };
    let ys = cand(&elim.in_second, &map.state_vars()[1])?;
    let xs = cand(&elim.in_first, &map.state_vars()[0])?;
    let mut out = Vec::new();
    for x0 in &xs {
        for y0 in &ys {
            // back-substitute: all S_i identically zero in the parameter
            let ok = sys.numerator_equations.iter().all(|s| {
                let v = s.subst(0, &MultiPoly::constant(s.vars(), x0.clone())).subst(
                    1,
                    &MultiPoly::constant(s.vars(), y0.clone()),
                );
                v.is_zero()
            });
            // and no denominator vanishes identically
            let deg_ok = sys.nondegeneracy.iter().all(|q| {
                let v = q.subst(0, &MultiPoly::constant(q.vars(), x0.clone())).subst(
                    1,
                    &MultiPoly::constant(q.vars(), y0.clone()),
                );
                !v.is_zero()
            });
            if ok && deg_ok {
                out.push((x0.clone(), y0.clone()));
            }
        }
    }
    Ok(out)
}

/// Specialize a rational function at a rational planar point, leaving the
/// parameter: returns (numerator, denominator) as dense polynomials in it.
fn at_point_in_param(
    r: &RatFunc,
    x0: &Rat,
    y0: &Rat,
    param: &str,
) -> Result<(DensePoly, DensePoly), MapError> {
    let sub = |p: &MultiPoly<Rat>| -> Result<DensePoly, MapError> {
        let v = p
            .subst(0, &MultiPoly::constant(p.vars(), x0.clone()))
            .subst(1, &MultiPoly::constant(p.vars(), y0.clone()));
        Ok(UniPoly::new(v, param)?.to_dense()?)
    };
    Ok((sub(r.num())?, sub(r.den())?))
}

/// Rational roots of `p` strictly inside the constraint region.
fn rational_roots_in_region(p: &DensePoly, constraint: Option<&ParamConstraint>) -> Vec<Rat> {
    if p.is_zero() {
        return Vec::new();
    }
    rational_roots_dense(p)
        .into_iter()
        .map(|(r, _)| r)
        .filter(|r| constraint.map_or(true, |c| c.satisfied_by(r)))
        .collect()
}

/// Check that `num/den < 0` everywhere on the constraint region except at
/// finitely many roots; returns false when a subinterval has the wrong sign.
fn negative_on_region(
    num: &DensePoly,
    den: &DensePoly,
    constraint: Option<&ParamConstraint>,
) -> bool {
    let prod = num.mul(den);
    if prod.is_zero() {
        return false;
    }
    // breakpoints: all real roots of num*den
    let roots = isolate_dense(&prod);
    // sample points: midpoints between consecutive root intervals, plus
    // outside extremes
    let mut samples: Vec<Rat> = Vec::new();
    let mut bounds: Vec<(Rat, Rat)> = Vec::new();
    for r in &roots {
        let mut rr = r.clone();
        // separate the root intervals
        for other in &roots {
            if other.interval().lo == rr.interval().lo && other.interval().hi == rr.interval().hi {
                continue;
            }
            while !(rr.interval().hi < other.interval().lo
                || other.interval().hi < rr.interval().lo)
            {
                rr = rr.refine_step();
            }
        }
        bounds.push((rr.interval().lo.clone(), rr.interval().hi.clone()));
    }
    bounds.sort_by(|a, b| a.0.cmp(&b.0));
    let one = Rat::one();
    if bounds.is_empty() {
        samples.push(Rat::zero());
    } else {
        samples.push(&bounds[0].0 - &one);
        for w in bounds.windows(2) {
            samples.push((&w[0].1 + &w[1].0) / Rat::from_integer(2.into()));
        }
        samples.push(&bounds.last().unwrap().1 + &one);
    }
    for s in samples {
        let in_region = constraint.map_or(true, |c| c.satisfied_by(&s));
        if !in_region {
            continue;
        }
        let dv = den.eval(&s);
        if dv.is_zero() {
            continue;
        }
        let val = num.eval(&s) / dv;
        if !val.is_negative() {
            return false;
        }
    }
    true
}

#[allow(clippy::too_many_arguments)]
fn parametric_pipeline_at_point(
    map: &RationalMap,
    x0: &Rat,
    y0: &Rat,
    constraint: Option<&ParamConstraint>,
    budget: u32,
    cert: &mut Vec<CertificateEntry>,
) -> Result<FixedPointOutcome, MapError> {
    let param = map.params()[0].clone();
    let point = vec![x0.to_string(), y0.to_string()];
    let cp = map.char_poly();
    let (tn, td) = at_point_in_param(&cp.trace, x0, y0, &param)?;
    let (dn, dd) = at_point_in_param(&cp.det, x0, y0, &param)?;
    let label = format!("fp({x0},{y0})");
    cert.push(CertificateEntry::new(
        format!("{label}: trace[{param}]"),
        format!(
            "({})/({})",
            UniPoly::from_dense(&param, &tn),
            UniPoly::from_dense(&param, &td)
        ),
    ));
    cert.push(CertificateEntry::new(
        format!("{label}: det[{param}]"),
        format!(
            "({})/({})",
            UniPoly::from_dense(&param, &dn),
            UniPoly::from_dense(&param, &dd)
        ),
    ));
    // the map must stay a local diffeomorphism: det != 0 except at finitely
    // many parameter values
    if dn.is_zero() {
        return Ok(FixedPointOutcome {
            point,
            hypothesis_checks: vec![HypothesisCheck {
                name: "invertible_jacobian".into(),
                outcome: "det Df vanishes identically in the parameter".into(),
                holds: false,
            }],
            verdict: Verdict::Inconclusive(
                "Jacobian is singular at this fixed point for every parameter value".into(),
            ),
            certificate: Vec::new(),
        });
    }
    // hypothesis region: trace^2 - 4 det < 0 across the region
    let disc_num = tn.mul(&tn).mul(&dd).sub(&dn.mul(&td).mul(&td).scale(&rat_int(4)));
    let disc_den = td.mul(&td).mul(&dd);
    let mut checks = Vec::new();
    let disc_ok = negative_on_region(&disc_num, &disc_den, constraint);
    checks.push(HypothesisCheck {
        name: "complex_conjugate_eigenvalues".into(),
        outcome: if disc_ok {
            "trace^2 - 4*det < 0 on the parameter region".into()
        } else {
            "trace^2 - 4*det changes sign on the parameter region".into()
        },
        holds: disc_ok,
    });
    if !disc_ok {
        return Ok(FixedPointOutcome {
            point,
            hypothesis_checks: checks,
            verdict: Verdict::Inconclusive(
                "eigenvalues are not complex conjugate across the region".into(),
            ),
            certificate: Vec::new(),
        });
    }
    // exception values: hypothesis fails at finitely many parameter values
    let mut exceptions: Vec<(Rat, String)> = Vec::new();
    // |mu| = 1 at det = 1: roots of dn - dd
    for r in rational_roots_in_region(&dn.sub(&dd), constraint) {
        exceptions.push((r, "modulus-one eigenvalues (hypothesis fails)".into()));
    }
    // complex-pair boundary inside the region
    for r in rational_roots_in_region(&disc_num, constraint) {
        exceptions.push((r, "double eigenvalue (hypothesis fails)".into()));
    }
    // singular Jacobian
    for r in rational_roots_in_region(&dn, constraint) {
        exceptions.push((r, "singular Jacobian (hypothesis fails)".into()));
    }
    // fixed point degenerates when a denominator vanishes
    let sys = map.fixed_point_system();
    for q in &sys.nondegeneracy {
        let v = q
            .subst(0, &MultiPoly::constant(q.vars(), x0.clone()))
            .subst(1, &MultiPoly::constant(q.vars(), y0.clone()));
        let dq = UniPoly::new(v, &param)?.to_dense()?;
        for r in rational_roots_in_region(&dq, constraint) {
            exceptions.push((r, "fixed point degenerates (denominator vanishes)".into()));
        }
    }
    // candidates: trace^2/(2 det) - 1 must be a rational cosine value
    let mut candidates: Vec<(Rat, u64)> = Vec::new();
    for p in indices_with_cos_degree_at_most(1).indices {
        let mp = min_poly_cos(p);
        if mp.degree() != 1 {
            continue;
        }
        let v0 = -mp.poly.coeff(0) / mp.poly.coeff(1);
        // tn^2 dd - (2 + 2 v0) td^2 dn = 0
        let scale = Rat::from_integer(2.into()) + Rat::from_integer(2.into()) * &v0;
        let cond = tn.mul(&tn).mul(&dd).sub(&dn.mul(&td).mul(&td).scale(&scale));
        cert.push(CertificateEntry::new(
            format!("{label}: ratio_condition[p={p}]"),
            UniPoly::from_dense(&param, &cond.primitive_part()),
        ));
        if cond.is_zero() {
            // the condition holds identically: flagged, not merged
            return Ok(FixedPointOutcome {
                point,
                hypothesis_checks: checks,
                verdict: Verdict::Inconclusive(format!(
                    "ratio condition for p = {p} holds for every parameter value"
                )),
                certificate: Vec::new(),
            });
        }
        for r in rational_roots_in_region(&cond, constraint) {
            candidates.push((r, p));
        }
    }
    // assemble: candidates that satisfy the hypothesis, plus exceptions
    let mut final_set: Vec<(Rat, String)> = Vec::new();
    for (r, p) in candidates {
        if exceptions.iter().any(|(e, _)| e == &r) {
            continue; // reported as exception below
        }
        final_set.push((r, format!("cos index p = {p}")));
    }
    for (r, why) in &exceptions {
        final_set.push((r.clone(), why.clone()));
    }
    final_set.sort_by(|a, b| a.0.cmp(&b.0));
    final_set.dedup_by(|a, b| a.0 == b.0);
    // final confirmation: re-run each survivor through the specialized
    // pipeline
    let mut confirmed: Vec<Rat> = Vec::new();
    for (r, why) in &final_set {
        let spec = map.specialize(&param, r)?;
        let out = analyze_planar(&spec, budget)?;
        let keep = !out.verdict.is_excluded();
        cert.push(CertificateEntry::new(
            format!("{label}: confirm[{param}={r}]"),
            format!(
                "{why}; specialized verdict: {}",
                match &out.verdict {
                    Verdict::Excluded => "excluded".to_string(),
                    Verdict::CandidateIndices(ix) => format!("candidate indices {ix:?}"),
                    Verdict::CandidateParams(_) => "candidate params".to_string(),
                    Verdict::Inconclusive(msg) => format!("inconclusive ({msg})"),
                }
            ),
        ));
        if keep {
            confirmed.push(r.clone());
        }
    }
    confirmed.sort();
    Ok(FixedPointOutcome {
        point,
        hypothesis_checks: checks,
        verdict: Verdict::candidate_params(&confirmed),
        certificate: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::parse::{parse_constraint, parse_map};
    use crate::scalar::rat;

    #[test]
    fn fast_path_rational_examples() {
        // T = 0, D = 2: v = -1, p = 2: not excluded
        let (v, p) = fast_path_rational_fp(&rat_int(0), &rat_int(2)).unwrap();
        assert_eq!(v, Verdict::CandidateIndices(vec![2]));
        assert_eq!(p, Some(2));
        // T = 1, D = 5: excluded
        let (v, _) = fast_path_rational_fp(&rat_int(1), &rat_int(5)).unwrap();
        assert!(v.is_excluded());
        // T = 3/2, D = 7/8 (a = 7/4 in the one-parameter family): v = 2/7
        let (v, _) = fast_path_rational_fp(&rat(3, 2), &rat(7, 8)).unwrap();
        assert!(v.is_excluded());
    }

    #[test]
    fn fast_path_quadratic_examples() {
        // T^2/D = 2 + sqrt 2 -> p = 8. Realize with T = 2 + sqrt 2, D = T.
        let t = QuadExt::with_root(rat_int(2), rat_int(1), &rat_int(2)).unwrap();
        let (v, p) = fast_path_quadratic_fp(&t, &t).unwrap();
        assert_eq!(p, Some(8));
        assert_eq!(v, Verdict::CandidateIndices(vec![8]));
        // T^2/D = 1 + sqrt 2 is in (0,4) but not an admissible value
        let t2 = QuadExt::with_root(rat_int(1), rat_int(1), &rat_int(2)).unwrap();
        let (v2, _) = fast_path_quadratic_fp(&t2, &t2).unwrap();
        assert!(v2.is_excluded());
        // T^2/D = (3 - sqrt 5)/2 -> p = 5 (or 10; the minimal polynomial
        // decides). Realize with T = that value, D = T.
        let t3 = QuadExt::with_root(rat(3, 2), rat(-1, 2), &rat_int(5)).unwrap();
        let (v3, p3) = fast_path_quadratic_fp(&t3, &t3).unwrap();
        assert!(matches!(v3, Verdict::CandidateIndices(_)));
        assert!(p3 == Some(5) || p3 == Some(10));
    }

    #[test]
    fn classification_cases() {
        // (b, c) = (0, -1): swap map, possible
        assert!(matches!(
            two_integral_classification(&rat_int(0), &rat_int(-1)),
            TwoIntegralVerdict::Possible { .. }
        ));
        // (0, 2): complex with c != 1, impossible
        assert!(matches!(
            two_integral_classification(&rat_int(0), &rat_int(2)),
            TwoIntegralVerdict::Impossible(_)
        ));
        // (1, 1): mu^2 + mu + 1 cyclotomic: possible
        assert!(matches!(
            two_integral_classification(&rat_int(1), &rat_int(1)),
            TwoIntegralVerdict::Possible { .. }
        ));
    }

    #[test]
    fn power_map_sweep_gives_six_maps() {
        let got = sweep_power_maps(5);
        assert_eq!(
            got,
            vec![(-1, -2), (-1, -1), (-1, 0), (-1, 1), (-1, 2), (1, 0)]
        );
    }

    #[test]
    fn modulus_one_fixed_point_is_inconclusive() {
        // f = (y, -x) at (0,0): eigenvalues +/- i
        let m = parse_map("vars x,y; f = (y, -x)").unwrap();
        let out = analyze_planar(&m, 6).unwrap();
        assert!(matches!(out.verdict, Verdict::Inconclusive(_)));
        assert_eq!(out.fixed_points.len(), 1);
        let checks = &out.fixed_points[0].hypothesis_checks;
        assert!(checks.iter().any(|c| c.name == "modulus_not_one" && !c.holds));
    }

    #[test]
    fn specialized_family_member_excluded() {
        // the one-parameter family at a = 7/4: v = 2/7 is not a cosine value
        let m = parse_map("vars x,y; params a; f = (x*y, (a+(2-a)*x)*y/(1+x*y))")
            .unwrap()
            .specialize("a", &rat(7, 4))
            .unwrap();
        let out = analyze_planar(&m, 6).unwrap();
        assert!(out.verdict.is_excluded(), "verdict: {:?}", out.verdict);
    }

    #[test]
    fn parametric_family_candidates() {
        let m = parse_map("vars x,y; params a; f = (x*y, (a+(2-a)*x)*y/(1+x*y))").unwrap();
        let constraint = parse_constraint("a > 9/8").unwrap();
        let out = analyze_planar_parametric(&m, Some(&constraint), 6).unwrap();
        match &out.verdict {
            Verdict::CandidateParams(vals) => {
                assert_eq!(vals, &["3/2", "2", "9/4", "9/2"]);
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }
}
