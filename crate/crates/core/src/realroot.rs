//! Real algebraic numbers: Sturm isolation, interval refinement, certified
//! sign evaluation.

use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::dense::DensePoly;
use crate::factor::rational_roots_dense;
use crate::multipoly::MultiPoly;
use crate::scalar::{rat, rat_to_f64, Rat};

/// Closed rational interval.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntervalQ {
    pub lo: Rat,
    pub hi: Rat,
}

impl IntervalQ {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        IntervalQ { lo, hi }
    }

    pub fn point(v: Rat) -> Self {
        IntervalQ { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(2.into())
    }

    pub fn contains(&self, v: &Rat) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Certified sign, when the interval excludes zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        IntervalQ::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Self) -> Self {
        IntervalQ::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn neg(&self) -> Self {
        IntervalQ::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        IntervalQ { lo, hi }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_negative() {
            IntervalQ::new(&self.hi * c, &self.lo * c)
        } else {
            IntervalQ::new(&self.lo * c, &self.hi * c)
        }
    }

    /// Interval quotient; `None` when the divisor straddles zero.
    pub fn div_checked(&self, other: &Self) -> Option<Self> {
        if other.contains_zero() {
            return None;
        }
        let cands = [
            &self.lo / &other.lo,
            &self.lo / &other.hi,
            &self.hi / &other.lo,
            &self.hi / &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Some(IntervalQ { lo, hi })
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return IntervalQ::point(Rat::one());
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        // tighten even powers when the interval straddles zero
        if e % 2 == 0 && self.contains_zero() && acc.lo.is_negative() {
            acc.lo = Rat::zero();
        }
        acc
    }
}

impl fmt::Display for IntervalQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Sturm chain of a squarefree polynomial.
fn sturm_chain(p: &DensePoly) -> Vec<DensePoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.neg());
    }
    chain
}

fn variations(chain: &[DensePoly], x: &Rat) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for p in chain {
        let v = p.eval(x);
        if v.is_zero() {
            continue;
        }
        let sign = v.is_positive();
        if let Some(prev) = last {
            if prev != sign {
                count += 1;
            }
        }
        last = Some(sign);
    }
    count
}

/// Cauchy root bound: all real roots lie strictly inside (-b, b).
fn root_bound(p: &DensePoly) -> Rat {
    let lc = p.lc();
    let mut m = Rat::zero();
    for c in p.coeffs() {
        let a = (c / &lc).abs();
        if a > m {
            m = a;
        }
    }
    m + Rat::one()
}

/// Real algebraic number: squarefree primitive integer defining polynomial
/// plus an isolating interval on which it changes sign exactly once.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RealAlgebraic {
    minpoly: DensePoly,
    interval: IntervalQ,
}

impl RealAlgebraic {
    pub fn minpoly(&self) -> &DensePoly {
        &self.minpoly
    }

    pub fn interval(&self) -> &IntervalQ {
        &self.interval
    }

    /// Exact rational value when the defining polynomial is linear.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.minpoly.degree() == Some(1) {
            Some(-self.minpoly.coeff(0) / self.minpoly.coeff(1))
        } else {
            None
        }
    }

    pub fn from_rational(v: Rat) -> Self {
        let minpoly = DensePoly::new(vec![-v.clone(), Rat::one()]).primitive_part();
        let eps = rat(1, 2);
        RealAlgebraic {
            minpoly,
            interval: IntervalQ::new(&v - &eps, &v + &eps),
        }
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.as_rational() {
            return rat_to_f64(&r);
        }
        let fine = self.refined_to(&rat(1, 1i64 << 60));
        rat_to_f64(&fine.interval.midpoint())
    }

    /// One bisection step: halves the interval (or better).
    pub fn refine_step(&self) -> Self {
        if let Some(v) = self.as_rational() {
            let w = self.interval.width() / Rat::from_integer(4.into());
            return RealAlgebraic {
                minpoly: self.minpoly.clone(),
                interval: IntervalQ::new(&v - &w, &v + &w),
            };
        }
        let mid = self.interval.midpoint();
        let pm = self.minpoly.eval(&mid);
        if pm.is_zero() {
            // the root is exactly the midpoint: shrink symmetrically
            let w = self.interval.width() / Rat::from_integer(8.into());
            return RealAlgebraic {
                minpoly: self.minpoly.clone(),
                interval: IntervalQ::new(&mid - &w, &mid + &w),
            };
        }
        let plo = self.minpoly.eval(&self.interval.lo);
        let interval = if plo.is_positive() != pm.is_positive() {
            IntervalQ::new(self.interval.lo.clone(), mid)
        } else {
            IntervalQ::new(mid, self.interval.hi.clone())
        };
        RealAlgebraic {
            minpoly: self.minpoly.clone(),
            interval,
        }
    }

    /// Refine until the interval width is at most `width`.
    pub fn refined_to(&self, width: &Rat) -> Self {
        assert!(width.is_positive(), "refinement width must be positive");
        let mut cur = self.clone();
        while cur.interval.width() > *width {
            cur = cur.refine_step();
        }
        cur
    }

    /// Certified sign of `q` at this number. Exact: the zero case is decided
    /// by a gcd computation, nonzero cases by interval refinement.
    pub fn sign_of(&self, q: &DensePoly) -> Ordering {
        if q.is_zero() {
            return Ordering::Equal;
        }
        if let Some(v) = self.as_rational() {
            let val = q.eval(&v);
            return if val.is_zero() {
                Ordering::Equal
            } else if val.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
        let g = self.minpoly.gcd(q);
        if g.degree().unwrap_or(0) >= 1 && {
            let chain = sturm_chain(&g.squarefree_part());
            let lo = &self.interval.lo;
            let hi = &self.interval.hi;
            // endpoints of an isolating interval are not roots of minpoly,
            // but can be roots of g; nudge via direct evaluation
            if g.eval(lo).is_zero() || g.eval(hi).is_zero() {
                // a rational root of g equal to an endpoint is not this
                // (irrational) number; count strictly inside
                let mut c = self.clone();
                while g.eval(&c.interval.lo).is_zero() || g.eval(&c.interval.hi).is_zero() {
                    c = c.refine_step();
                }
                variations(&chain, &c.interval.lo) != variations(&chain, &c.interval.hi)
            } else {
                variations(&chain, lo) != variations(&chain, hi)
            }
        } {
            return Ordering::Equal;
        }
        // q(theta) != 0: refine until the interval evaluation separates
        let mut cur = self.clone();
        loop {
            let iv = eval_dense_on_interval(q, &cur.interval);
            if let Some(s) = iv.sign() {
                return s;
            }
            cur = cur.refine_step();
        }
    }

    /// Replace the defining polynomial by a divisor that still vanishes
    /// here (e.g. an irreducible factor). The isolating interval is reused:
    /// the factor's root in it is exactly this number.
    pub fn restricted_to_factor(&self, f: &DensePoly) -> RealAlgebraic {
        debug_assert_eq!(self.sign_of(f), Ordering::Equal);
        RealAlgebraic {
            minpoly: f.primitive_part(),
            interval: self.interval.clone(),
        }
    }

    /// Exact equality test between two real algebraic numbers.
    pub fn eq_algebraic(&self, other: &Self) -> bool {
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => return a == b,
            (Some(a), None) => {
                return other.sign_of(&DensePoly::new(vec![-a, Rat::one()])) == Ordering::Equal
            }
            (None, Some(b)) => {
                return self.sign_of(&DensePoly::new(vec![-b, Rat::one()])) == Ordering::Equal
            }
            (None, None) => {}
        }
        let g = self.minpoly.gcd(&other.minpoly);
        if g.degree().unwrap_or(0) == 0 {
            return false;
        }
        if self.sign_of(&g) != Ordering::Equal || other.sign_of(&g) != Ordering::Equal {
            return false;
        }
        // both are roots of g: equal iff they sit in the same isolating
        // interval of g
        let groots = isolate_dense(&g);
        let locate = |x: &RealAlgebraic| -> Option<usize> {
            let mut cur = x.clone();
            loop {
                let hits: Vec<usize> = groots
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| {
                        !(cur.interval.hi < r.interval.lo || r.interval.hi < cur.interval.lo)
                    })
                    .map(|(i, _)| i)
                    .collect();
                match hits.len() {
                    0 => return None,
                    1 => return Some(hits[0]),
                    _ => cur = cur.refine_step(),
                }
            }
        };
        match (locate(self), locate(other)) {
            (Some(i), Some(j)) => i == j,
            _ => false,
        }
    }
}

impl fmt::Display for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of [{:?}] in {}", self.minpoly.coeffs(), self.interval)
    }
}

/// Enclose `q([lo,hi])` by interval Horner evaluation.
pub fn eval_dense_on_interval(q: &DensePoly, iv: &IntervalQ) -> IntervalQ {
    // Horner over intervals
    let mut acc = IntervalQ::point(Rat::zero());
    let x = iv.clone();
    for c in q.coeffs().iter().rev() {
        acc = acc.mul(&x).add(&IntervalQ::point(c.clone()));
    }
    acc
}

/// Isolate the real roots of a dense polynomial, ascending. Rational roots
/// come out with linear defining polynomials.
pub fn isolate_dense(p: &DensePoly) -> Vec<RealAlgebraic> {
    assert!(!p.is_zero(), "root isolation of the zero polynomial");
    let sf = p.squarefree_part();
    if sf.is_constant() {
        return Vec::new();
    }
    // strip rational roots
    let rats: Vec<Rat> = rational_roots_dense(&sf).into_iter().map(|(r, _)| r).collect();
    let mut rest = sf.clone();
    for r in &rats {
        rest = rest
            .div_rem(&DensePoly::new(vec![-r.clone(), Rat::one()]))
            .0;
    }
    let mut alg: Vec<RealAlgebraic> = Vec::new();
    if rest.degree().unwrap_or(0) >= 1 {
        let rest = rest.primitive_part();
        let chain = sturm_chain(&rest);
        let b = root_bound(&rest);
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = variations(&chain, &lo) - variations(&chain, &hi);
            if n == 0 {
                continue;
            }
            if n == 1 {
                alg.push(RealAlgebraic {
                    minpoly: rest.clone(),
                    interval: IntervalQ::new(lo, hi),
                });
                continue;
            }
            // rest has no rational roots, so no midpoint is ever a root
            let mid = (&lo + &hi) / Rat::from_integer(2.into());
            debug_assert!(!rest.eval(&mid).is_zero());
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        // keep each algebraic interval clear of the stripped rational roots
        for a in alg.iter_mut() {
            let mut cur = a.clone();
            while rats.iter().any(|r| cur.interval.contains(r)) {
                cur = cur.refine_step();
            }
            *a = cur;
        }
    }
    for r in &rats {
        // shrink around the rational root until disjoint from everything else
        let mut iv = RealAlgebraic::from_rational(r.clone());
        let overlaps = |iv: &RealAlgebraic| {
            alg.iter()
                .any(|a| !(iv.interval.hi < a.interval.lo || a.interval.hi < iv.interval.lo))
                || rats
                    .iter()
                    .filter(|s| *s != r)
                    .any(|s| iv.interval.contains(s))
        };
        while overlaps(&iv) {
            iv = iv.refine_step();
        }
        alg.push(iv);
    }
    alg.sort_by(|a, b| a.interval.lo.cmp(&b.interval.lo));
    alg
}

/// A coordinate of an algebraic point: exact rational or real algebraic.
#[derive(Clone, Debug)]
pub enum Coordinate {
    Rational(Rat),
    Algebraic(RealAlgebraic),
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coordinate::Rational(r) => write!(f, "{r}"),
            Coordinate::Algebraic(a) => write!(f, "{a}"),
        }
    }
}

impl Coordinate {
    pub fn to_f64(&self) -> f64 {
        match self {
            Coordinate::Rational(r) => rat_to_f64(r),
            Coordinate::Algebraic(a) => a.to_f64(),
        }
    }

    pub fn as_rational(&self) -> Option<Rat> {
        match self {
            Coordinate::Rational(r) => Some(r.clone()),
            Coordinate::Algebraic(a) => a.as_rational(),
        }
    }

    pub fn interval(&self, width: &Rat) -> IntervalQ {
        match self {
            Coordinate::Rational(r) => IntervalQ::point(r.clone()),
            Coordinate::Algebraic(a) => a.refined_to(width).interval().clone(),
        }
    }
}

/// Enclose `q(point)` by interval arithmetic after refining every algebraic
/// coordinate to `width`.
pub fn eval_interval(q: &MultiPoly<Rat>, point: &[Coordinate], width: &Rat) -> IntervalQ {
    assert_eq!(point.len(), q.vars().len());
    let ivs: Vec<IntervalQ> = point.iter().map(|c| c.interval(width)).collect();
    let mut acc = IntervalQ::point(Rat::zero());
    for (m, c) in q.terms() {
        let mut t = IntervalQ::point(c.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                t = t.mul(&ivs[i].pow(e));
            }
        }
        acc = acc.add(&t);
    }
    acc
}

/// Certified sign of `q(point)` by repeated refinement, or `None` when the
/// enclosing interval still straddles zero at `width_cutoff`.
pub fn certify_sign(
    q: &MultiPoly<Rat>,
    point: &[Coordinate],
    width_cutoff: &Rat,
) -> Option<Ordering> {
    let mut width = rat(1, 16);
    loop {
        let iv = eval_interval(q, point, &width);
        if let Some(s) = iv.sign() {
            return Some(s);
        }
        if width < *width_cutoff {
            return None;
        }
        width = &width * &rat(1, 1024);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::VarSet;
    use crate::scalar::rat_int;

    #[test]
    fn isolates_single_real_root() {
        // x^3 - 5x^2 + x - 1 has exactly one real root near 4.836
        let p = DensePoly::from_i64(&[-1, 1, -5, 1]);
        let roots = isolate_dense(&p);
        assert_eq!(roots.len(), 1);
        let x = roots[0].to_f64();
        assert!((x - 4.836).abs() < 1e-3, "got {x}");
    }

    #[test]
    fn no_real_roots() {
        let p = DensePoly::from_i64(&[1, 0, 1]);
        assert!(isolate_dense(&p).is_empty());
    }

    #[test]
    fn rational_and_irrational_roots_disjoint() {
        // (x-1)(x^2-2): roots 1, ±sqrt(2)
        let p = DensePoly::from_i64(&[-1, 1]).mul(&DensePoly::from_i64(&[-2, 0, 1]));
        let roots = isolate_dense(&p);
        assert_eq!(roots.len(), 3);
        for w in roots.windows(2) {
            assert!(w[0].interval().hi < w[1].interval().lo);
        }
        let vals: Vec<f64> = roots.iter().map(|r| r.to_f64()).collect();
        assert!((vals[0] + std::f64::consts::SQRT_2).abs() < 1e-9);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        assert!((vals[2] - std::f64::consts::SQRT_2).abs() < 1e-9);
    }

    #[test]
    fn refine_halves_width() {
        let p = DensePoly::from_i64(&[-2, 0, 1]);
        let r = isolate_dense(&p).pop().unwrap();
        let w0 = r.interval().width();
        let r2 = r.refine_step();
        assert!(r2.interval().width() * rat_int(2) <= w0);
        let tight = r.refined_to(&rat(1, 1_000_000));
        assert!(tight.interval().width() <= rat(1, 1_000_000));
    }

    #[test]
    fn sign_of_detects_exact_zero() {
        let p = DensePoly::from_i64(&[-2, 0, 1]);
        let r = isolate_dense(&p).pop().unwrap(); // sqrt(2)
        assert_eq!(r.sign_of(&p), Ordering::Equal);
        // x^2 - 3 at sqrt(2) is negative
        assert_eq!(r.sign_of(&DensePoly::from_i64(&[-3, 0, 1])), Ordering::Less);
        // x - 1 at sqrt(2) is positive
        assert_eq!(r.sign_of(&DensePoly::from_i64(&[-1, 1])), Ordering::Greater);
    }

    #[test]
    fn eval_interval_encloses_zero_tightly() {
        // q = x^2 - 2 at sqrt(2)
        let vars = VarSet::new(vec!["x"]);
        let x = MultiPoly::<Rat>::var(&vars, 0);
        let q = &x.pow(2) - &MultiPoly::constant(&vars, rat_int(2));
        let root = isolate_dense(&DensePoly::from_i64(&[-2, 0, 1])).pop().unwrap();
        let iv = eval_interval(&q, &[Coordinate::Algebraic(root)], &rat(1, 1_000_000));
        assert!(iv.contains_zero());
        assert!(iv.width() < rat(1, 100_000));
    }

    #[test]
    fn algebraic_equality() {
        let p = DensePoly::from_i64(&[-2, 0, 1]);
        let roots = isolate_dense(&p);
        let q = DensePoly::from_i64(&[-2, 0, 1]).mul(&DensePoly::from_i64(&[-3, 0, 1]));
        let roots_q = isolate_dense(&q);
        // sqrt(2) from p equals sqrt(2) from q, not sqrt(3)
        let sqrt2_p = &roots[1];
        assert!(roots_q.iter().filter(|r| sqrt2_p.eq_algebraic(r)).count() == 1);
    }
}
