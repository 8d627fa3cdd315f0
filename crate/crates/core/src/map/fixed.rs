//! Enumeration and certification of real fixed points.
//!
//! Candidates come from per-coordinate eliminants; spurious pairings are
//! discarded by back-substitution, exactly where the coordinates live in a
//! common univariate world (rational entries, or one shared algebraic
//! number), and by interval certification otherwise.

use num_traits::{One, Zero};
use std::cmp::Ordering;

use crate::dense::DensePoly;
use crate::elim::eliminate_vars;
use crate::error::MapError;
use crate::multipoly::MultiPoly;
use crate::realroot::{certify_sign, isolate_dense, Coordinate, RealAlgebraic};
use crate::scalar::{Int, Rat};
use crate::unipoly::UniPoly;

use super::{FixedPointSystem, RationalMap};

/// Width cutoff for interval separation during spurious-root filtering.
pub fn separation_cutoff() -> Rat {
    Rat::new(Int::one(), Int::from(10u32).pow(30))
}

/// A certified fixed point.
#[derive(Clone, Debug)]
pub struct FixedPoint {
    pub coords: Vec<Coordinate>,
    /// All equations checked exactly (true), or only interval-filtered.
    pub exact: bool,
    /// When every coordinate lives in one algebraic number: that number and
    /// each coordinate expressed as a dense polynomial in it.
    pub shared: Option<SharedAlgebraic>,
}

/// Coordinates expressed inside a single real algebraic extension.
#[derive(Clone, Debug)]
pub struct SharedAlgebraic {
    pub theta: RealAlgebraic,
    /// coordinate i = exprs[i](theta)
    pub exprs: Vec<DensePoly>,
}

impl FixedPoint {
    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.to_f64()).collect()
    }

    pub fn all_rational(&self) -> Option<Vec<Rat>> {
        self.coords.iter().map(|c| c.as_rational()).collect()
    }
}

/// Outcome of fixed-point enumeration.
#[derive(Clone, Debug)]
pub enum FixedPointEnumeration {
    /// Isolated real fixed points (possibly none).
    Points(Vec<FixedPoint>),
    /// Some eliminant vanished identically.
    Continuum,
}

/// Evaluate a polynomial at a point whose coordinates are polynomials in one
/// algebraic number; the result is a dense polynomial in that number,
/// reduced modulo its defining polynomial.
pub fn eval_at_shared(p: &MultiPoly<Rat>, shared: &SharedAlgebraic) -> DensePoly {
    let m = shared.theta.minpoly();
    let mut acc = DensePoly::zero();
    for (mono, c) in p.terms() {
        let mut t = DensePoly::constant(c.clone());
        for (i, &e) in mono.exponents().iter().enumerate() {
            for _ in 0..e {
                t = t.mul(&shared.exprs[i]).rem(m);
            }
        }
        acc = acc.add(&t);
    }
    acc.rem(m)
}

/// Enumerate the real fixed points of a parameter-free map.
pub fn enumerate_real_fixed_points(
    map: &RationalMap,
) -> Result<FixedPointEnumeration, MapError> {
    if !map.is_parameter_free() {
        return Err(MapError::FreeParameters(map.params().join(", ")));
    }
    let sys = map.fixed_point_system();
    if sys.numerator_equations.iter().any(|s| s.is_zero()) {
        return Ok(FixedPointEnumeration::Continuum);
    }
    let n = map.n();
    // per-coordinate eliminants
    let mut coord_roots: Vec<Vec<Coordinate>> = Vec::with_capacity(n);
    for i in 0..n {
        let elim_order: Vec<String> = (0..n)
            .filter(|&j| j != i)
            .map(|j| map.state_vars()[j].clone())
            .collect();
        let eqs = match eliminate_vars(sys.numerator_equations.clone(), &elim_order) {
            Ok(e) => e,
            Err(MapError::DegenerateElimination(_)) => {
                return Ok(FixedPointEnumeration::Continuum)
            }
            Err(e) => return Err(e),
        };
        // intersect root sets of all remaining equations via gcd
        let mut g = DensePoly::zero();
        for eq in &eqs {
            let up = UniPoly::new(eq.clone(), &map.state_vars()[i])?;
            let d = up.to_dense()?;
            g = g.gcd(&d);
        }
        if g.is_zero() {
            return Ok(FixedPointEnumeration::Continuum);
        }
        if g.is_constant() {
            coord_roots.push(Vec::new());
            continue;
        }
        let roots = isolate_dense(&g)
            .into_iter()
            .map(|r| match r.as_rational() {
                Some(q) => Coordinate::Rational(q),
                None => Coordinate::Algebraic(r),
            })
            .collect();
        coord_roots.push(roots);
    }
    // cartesian product of candidates
    let mut combos: usize = 1;
    for r in &coord_roots {
        combos = combos.saturating_mul(r.len().max(1));
    }
    if coord_roots.iter().any(|r| r.is_empty()) {
        return Ok(FixedPointEnumeration::Points(Vec::new()));
    }
    if combos > 4096 {
        return Err(MapError::DegenerateElimination(format!(
            "too many fixed-point candidates ({combos})"
        )));
    }
    let mut points = Vec::new();
    let mut idx = vec![0usize; n];
    'outer: loop {
        let cand: Vec<Coordinate> = idx
            .iter()
            .enumerate()
            .map(|(i, &j)| coord_roots[i][j].clone())
            .collect();
        if let Some(fp) = confirm_candidate(&cand, &sys) {
            points.push(fp);
        }
        let mut pos = 0;
        loop {
            idx[pos] += 1;
            if idx[pos] < coord_roots[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
            if pos == n {
                break 'outer;
            }
        }
    }
    Ok(FixedPointEnumeration::Points(points))
}

/// Build the shared-algebraic view of a candidate when possible: all
/// algebraic coordinates must be the same number. Fully rational points get
/// a trivial extension (theta = 0) so downstream code is uniform.
fn shared_view(cand: &[Coordinate]) -> Option<SharedAlgebraic> {
    let mut theta: Option<RealAlgebraic> = None;
    for c in cand {
        if let Coordinate::Algebraic(a) = c {
            match &theta {
                None => theta = Some(a.clone()),
                Some(t) => {
                    if !t.eq_algebraic(a) {
                        return None;
                    }
                }
            }
        }
    }
    let theta = theta.unwrap_or_else(|| RealAlgebraic::from_rational(Rat::zero()));
    let exprs = cand
        .iter()
        .map(|c| match c.as_rational() {
            Some(q) => DensePoly::constant(q),
            None => DensePoly::monomial(1),
        })
        .collect();
    Some(SharedAlgebraic { theta, exprs })
}

fn confirm_candidate(cand: &[Coordinate], sys: &FixedPointSystem) -> Option<FixedPoint> {
    // fully rational: exact evaluation
    if let Some(point) = cand
        .iter()
        .map(|c| c.as_rational())
        .collect::<Option<Vec<Rat>>>()
    {
        for s in &sys.numerator_equations {
            if !s.eval_rat(&point).is_zero() {
                return None;
            }
        }
        for q in &sys.nondegeneracy {
            if q.eval_rat(&point).is_zero() {
                return None;
            }
        }
        return Some(FixedPoint {
            coords: point.into_iter().map(Coordinate::Rational).collect(),
            exact: true,
            shared: shared_view(cand),
        });
    }
    // one shared algebraic number (diagonal-style points): exact
    if let Some(shared) = shared_view(cand) {
        for s in &sys.numerator_equations {
            let val = eval_at_shared(s, &shared);
            if shared.theta.sign_of(&val) != Ordering::Equal {
                return None;
            }
        }
        for q in &sys.nondegeneracy {
            let val = eval_at_shared(q, &shared);
            if shared.theta.sign_of(&val) == Ordering::Equal {
                return None;
            }
        }
        return Some(FixedPoint {
            coords: cand.to_vec(),
            exact: true,
            shared: Some(shared),
        });
    }
    // general pair: interval filtering only
    let cutoff = separation_cutoff();
    for s in &sys.numerator_equations {
        if let Some(sign) = certify_sign(s, cand, &cutoff) {
            if sign != Ordering::Equal {
                return None;
            }
        }
    }
    for q in &sys.nondegeneracy {
        match certify_sign(q, cand, &cutoff) {
            Some(Ordering::Equal) | None => {
                // cannot certify the denominator nonzero
                return None;
            }
            Some(_) => {}
        }
    }
    Some(FixedPoint {
        coords: cand.to_vec(),
        exact: false,
        shared: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::parse::parse_map;
    use crate::scalar::rat_int;

    #[test]
    fn conc_map_has_single_diagonal_fixed_point() {
        let m = parse_map("vars x,y; f = (x + y^2 - x*y, (x^2 + x*y + 1)/(x^2 - 3*y + 1))")
            .unwrap();
        let fps = match enumerate_real_fixed_points(&m).unwrap() {
            FixedPointEnumeration::Points(p) => p,
            _ => panic!("expected isolated points"),
        };
        assert_eq!(fps.len(), 1);
        let fp = &fps[0];
        assert!(fp.exact);
        let v = fp.to_f64();
        assert!((v[0] - 4.836).abs() < 1e-2);
        assert!((v[1] - 4.836).abs() < 1e-2);
        assert!(fp.shared.is_some());
    }

    #[test]
    fn power_map_fixed_point() {
        let m = parse_map("vars x,y; f = (y, y/x)").unwrap();
        let fps = match enumerate_real_fixed_points(&m).unwrap() {
            FixedPointEnumeration::Points(p) => p,
            _ => panic!(),
        };
        // (1,1) is fixed; (0,0) is excluded by the denominator
        assert_eq!(fps.len(), 1);
        assert_eq!(
            fps[0].all_rational(),
            Some(vec![rat_int(1), rat_int(1)])
        );
    }

    #[test]
    fn diagonal_continuum_detected() {
        // f = (y, y^2/x) fixes every diagonal point (t, t) with t != 0
        let m = parse_map("vars x,y; f = (y, y^2/x)").unwrap();
        assert!(matches!(
            enumerate_real_fixed_points(&m).unwrap(),
            FixedPointEnumeration::Continuum
        ));
    }

    #[test]
    fn identity_map_is_continuum() {
        let m = parse_map("vars x,y; f = (x, y)").unwrap();
        assert!(matches!(
            enumerate_real_fixed_points(&m).unwrap(),
            FixedPointEnumeration::Continuum
        ));
    }

    #[test]
    fn todd_specialized_diagonal_points() {
        // a = 1: fixed points (x,x,x) with x^2 = 2x + 1, x = 1 ± sqrt(2)
        let m = parse_map("vars x,y,z; params a; f = (y, z, (a+y+z)/x)")
            .unwrap()
            .specialize("a", &rat_int(1))
            .unwrap();
        let fps = match enumerate_real_fixed_points(&m).unwrap() {
            FixedPointEnumeration::Points(p) => p,
            _ => panic!(),
        };
        assert_eq!(fps.len(), 2);
        for fp in &fps {
            assert!(fp.exact);
            assert!(fp.shared.is_some());
            let v = fp.to_f64();
            assert!((v[0] - v[1]).abs() < 1e-9 && (v[1] - v[2]).abs() < 1e-9);
            assert!((v[0] - (1.0 + 2f64.sqrt())).abs() < 1e-6
                || (v[0] - (1.0 - 2f64.sqrt())).abs() < 1e-6);
        }
    }

    #[test]
    fn diagonal_linear_map_origin() {
        let m = parse_map("vars x,y,z; f = (2*x, 3*y, 5*z)").unwrap();
        let fps = match enumerate_real_fixed_points(&m).unwrap() {
            FixedPointEnumeration::Points(p) => p,
            _ => panic!(),
        };
        assert_eq!(fps.len(), 1);
        assert_eq!(
            fps[0].all_rational(),
            Some(vec![rat_int(0), rat_int(0), rat_int(0)])
        );
    }
}
