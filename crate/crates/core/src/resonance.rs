//! Resonance lattices of eigenvalue tuples: the rank of
//! {k in Z^n : mu^k = 1} bounds the number of functionally independent
//! meromorphic first integrals at a fixed point.

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

use crate::cyclo::{self, CycloProduct};
use crate::dense::DensePoly;
use crate::error::MapError;
use crate::factor::factor_bounded_dense;
use crate::intfact::factor_int;
use crate::map::fixed::{eval_at_shared, FixedPoint, SharedAlgebraic};
use crate::map::RationalMap;
use crate::polymod::{polymod_mul, polymod_pow};
use crate::realroot::{eval_dense_on_interval, IntervalQ, RealAlgebraic};
use crate::scalar::{rat_to_f64, Int, Rat};
use crate::unipoly::UniPoly;

/// Certification level of a resonance lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeStatus {
    /// Complete and certified: the basis generates the full lattice.
    Exact,
    /// Every basis vector is exactly verified; completeness is only claimed
    /// up to the searched exponent bound.
    HeuristicVerified,
    /// Nothing could be verified.
    HeuristicUnverified,
}

/// Basis of the resonance lattice together with its certification status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResonanceLattice {
    pub basis: Vec<Vec<Int>>,
    pub status: LatticeStatus,
    /// Exponent bound the search ran to (heuristic lattices only).
    pub searched_bound: Option<u32>,
}

impl ResonanceLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn empty(status: LatticeStatus, bound: Option<u32>) -> Self {
        ResonanceLattice {
            basis: Vec::new(),
            status,
            searched_bound: bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ResonanceError {
    #[error("eigenvalue is zero (not a local diffeomorphism)")]
    ZeroEigenvalue,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Hermite-style row reduction over the integers; returns a canonical basis
/// (zero rows dropped, pivots positive).
pub fn hnf_rows(mut rows: Vec<Vec<Int>>) -> Vec<Vec<Int>> {
    if rows.is_empty() {
        return rows;
    }
    let ncols = rows[0].len();
    let mut rank = 0usize;
    for col in 0..ncols {
        // find a pivot and clear the column below via gcd steps
        loop {
            let mut nonzero: Vec<usize> =
                (rank..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            if nonzero.len() == 1 {
                let i = nonzero[0];
                rows.swap(rank, i);
                break;
            }
            // reduce the larger by the smaller
            nonzero.sort_by_key(|&i| rows[i][col].abs());
            let (small, big) = (nonzero[0], nonzero[1]);
            let q = Int::from(&rows[big][col] / &rows[small][col]);
            for c in 0..ncols {
                let t = &rows[small][c] * &q;
                rows[big][c] -= t;
            }
        }
        if rank < rows.len() && !rows[rank][col].is_zero() {
            if rows[rank][col].is_negative() {
                for c in 0..ncols {
                    rows[rank][c] = -rows[rank][c].clone();
                }
            }
            // reduce the rows above to the canonical range
            let pivot = rows[rank][col].clone();
            for i in 0..rank {
                let q = rows[i][col].div_floor(&pivot);
                if !q.is_zero() {
                    for c in 0..ncols {
                        let t = &rows[rank][c] * &q;
                        rows[i][c] -= t;
                    }
                }
            }
            rank += 1;
        }
    }
    rows.truncate(rank);
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    rows
}

/// Kernel lattice {k : M k = 0} of an integer matrix (rows x cols) as a
/// canonical basis of row vectors of length `cols`.
pub fn int_kernel(m: &[Vec<Int>], cols: usize) -> Vec<Vec<Int>> {
    let rows = m.len();
    // work on [M^T | I]
    let mut a: Vec<Vec<Int>> = (0..cols)
        .map(|j| {
            let mut row: Vec<Int> = (0..rows).map(|i| m[i][j].clone()).collect();
            for k in 0..cols {
                row.push(if k == j { Int::one() } else { Int::zero() });
            }
            row
        })
        .collect();
    // eliminate the first `rows` columns
    let mut r = 0usize;
    for col in 0..rows {
        loop {
            let nonzero: Vec<usize> = (r..a.len()).filter(|&i| !a[i][col].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            if nonzero.len() == 1 {
                a.swap(r, nonzero[0]);
                break;
            }
            let mut sorted = nonzero;
            sorted.sort_by_key(|&i| a[i][col].abs());
            let (small, big) = (sorted[0], sorted[1]);
            let q = Int::from(&a[big][col] / &a[small][col]);
            for c in 0..a[0].len() {
                let t = &a[small][c] * &q;
                a[big][c] -= t;
            }
        }
        if r < a.len() && !a[r][col].is_zero() {
            r += 1;
        }
    }
    let kernel: Vec<Vec<Int>> = a[r..]
        .iter()
        .map(|row| row[rows..].to_vec())
        .collect();
    hnf_rows(kernel)
}

/// Exact resonance lattice of a tuple of nonzero rationals: factor into
/// primes, take the integer kernel of the exponent matrix, and intersect
/// with the sign-parity condition.
pub fn rank_rational_eigs(mu: &[Rat]) -> Result<ResonanceLattice, ResonanceError> {
    if mu.iter().any(|m| m.is_zero()) {
        return Err(ResonanceError::ZeroEigenvalue);
    }
    let n = mu.len();
    // union of primes across all numerators and denominators
    let mut primes: Vec<Int> = Vec::new();
    let mut expo: Vec<std::collections::BTreeMap<Int, i64>> = Vec::with_capacity(n);
    for m in mu {
        let mut e: std::collections::BTreeMap<Int, i64> = std::collections::BTreeMap::new();
        for (p, k) in factor_int(m.numer()) {
            *e.entry(p).or_insert(0) += k as i64;
        }
        for (p, k) in factor_int(m.denom()) {
            *e.entry(p).or_insert(0) -= k as i64;
        }
        e.retain(|_, v| *v != 0);
        for p in e.keys() {
            if !primes.contains(p) {
                primes.push(p.clone());
            }
        }
        expo.push(e);
    }
    primes.sort();
    let matrix: Vec<Vec<Int>> = primes
        .iter()
        .map(|p| {
            (0..n)
                .map(|i| Int::from(*expo[i].get(p).unwrap_or(&0)))
                .collect()
        })
        .collect();
    let kernel = int_kernel(&matrix, n);
    // parity condition for the signs
    let signs: Vec<u8> = mu.iter().map(|m| u8::from(m.is_negative())).collect();
    let basis = intersect_parity(kernel, &signs);
    Ok(ResonanceLattice {
        basis: hnf_rows(basis),
        status: LatticeStatus::Exact,
        searched_bound: None,
    })
}

/// Intersect a lattice with {k : sum_i k_i s_i even}.
fn intersect_parity(basis: Vec<Vec<Int>>, signs: &[u8]) -> Vec<Vec<Int>> {
    let parity = |v: &Vec<Int>| -> bool {
        let mut acc = 0u8;
        for (k, s) in v.iter().zip(signs) {
            if *s == 1 && k.is_odd() {
                acc ^= 1;
            }
        }
        acc == 1
    };
    let odd_pos: Vec<usize> = basis
        .iter()
        .enumerate()
        .filter(|(_, v)| parity(v))
        .map(|(i, _)| i)
        .collect();
    if odd_pos.is_empty() {
        return basis;
    }
    let pivot = odd_pos[0];
    let mut out = Vec::with_capacity(basis.len());
    for (i, v) in basis.iter().enumerate() {
        if i == pivot {
            out.push(v.iter().map(|x| x * Int::from(2)).collect());
        } else if odd_pos.contains(&i) {
            out.push(
                v.iter()
                    .zip(&basis[pivot])
                    .map(|(a, b)| a + b)
                    .collect(),
            );
        } else {
            out.push(v.clone());
        }
    }
    out
}

/// Conjugate-pair data at a fixed point: trace and determinant expressed in
/// one real algebraic number.
#[derive(Clone, Debug)]
pub struct ConjugatePair {
    pub theta: RealAlgebraic,
    pub trace_expr: DensePoly,
    pub det_expr: DensePoly,
}

impl ConjugatePair {
    pub fn from_rational(trace: Rat, det: Rat) -> Self {
        ConjugatePair {
            theta: RealAlgebraic::from_rational(Rat::zero()),
            trace_expr: DensePoly::constant(trace),
            det_expr: DensePoly::constant(det),
        }
    }
}

/// Conjugate-pair data at a shared-algebraic fixed point of a planar map.
/// The defining polynomial is restricted to an irreducible factor so the
/// trace/det denominators invert in the quotient ring.
pub fn conjugate_pair_at(
    map: &RationalMap,
    shared: &SharedAlgebraic,
    budget: u32,
) -> Option<ConjugatePair> {
    assert_eq!(map.n(), 2);
    let cp = map.char_poly();
    let tn = eval_at_shared(cp.trace.num(), shared);
    let td = eval_at_shared(cp.trace.den(), shared);
    let dn = eval_at_shared(cp.det.num(), shared);
    let dd = eval_at_shared(cp.det.den(), shared);
    let theta = &shared.theta;
    if let Some(_r) = theta.as_rational() {
        if td.coeff(0).is_zero() || dd.coeff(0).is_zero() {
            return None;
        }
        return Some(ConjugatePair::from_rational(
            tn.coeff(0) / td.coeff(0),
            dn.coeff(0) / dd.coeff(0),
        ));
    }
    let fact = factor_bounded_dense(theta.minpoly(), budget);
    let factor = fact
        .all_factors()
        .map(|(f, _)| f.clone())
        .find(|f| theta.sign_of(f) == Ordering::Equal)?;
    let theta2 = theta.restricted_to_factor(&factor);
    let m = theta2.minpoly().clone();
    let ti = crate::polymod::polymod_inv(&td.rem(&m), &m)?;
    let di = crate::polymod::polymod_inv(&dd.rem(&m), &m)?;
    Some(ConjugatePair {
        trace_expr: tn.mul(&ti).rem(&m),
        det_expr: dn.mul(&di).rem(&m),
        theta: theta2,
    })
}

/// Result of the conjugate-pair analysis.
#[derive(Clone, Debug)]
pub struct ConjugatePairOutcome {
    pub lattice: ResonanceLattice,
    /// The p with Re(mu/conj mu) = cos(2 pi n / p), when matched.
    pub matched_index: Option<u64>,
    /// Went through the |mu| = 1 branch.
    pub modulus_one: bool,
}

/// Resonance lattice of a complex-conjugate eigenvalue pair given by trace
/// and determinant. Requires trace^2 - 4 det < 0 (certified); dispatches on
/// |mu| = 1 (det = 1) vs not.
pub fn rank_conjugate_pair(pair: &ConjugatePair) -> Result<ConjugatePairOutcome, ResonanceError> {
    let theta = &pair.theta;
    let m = theta.minpoly().clone();
    let t = &pair.trace_expr;
    let d = &pair.det_expr;
    // trace^2 - 4 det < 0
    let disc = polymod_mul(t, t, &m).sub(&d.scale(&crate::scalar::rat_int(4))).rem(&m);
    match theta.sign_of(&disc) {
        Ordering::Less => {}
        s => {
            return Err(ResonanceError::Hypothesis(format!(
                "trace^2 - 4 det is {} at the fixed point, eigenvalues are not complex conjugates",
                match s {
                    Ordering::Equal => "zero",
                    _ => "positive",
                }
            )))
        }
    }
    // det - 1 sign decides |mu| = 1
    let d_minus_1 = d.sub(&DensePoly::one()).rem(&m);
    if theta.sign_of(&d_minus_1) == Ordering::Equal {
        // |mu| = 1: mu * conj(mu) = 1 is always a relation; rank 2 iff mu is
        // a root of unity
        let mu_minpoly = eigen_minpoly_over_q(pair)?;
        let check = cyclo::is_root_of_unity(&mu_minpoly);
        if check.is_root_of_unity {
            let order = match &check.witness {
                CycloProduct::Product(idx) => {
                    idx.iter().fold(1u64, |acc, &d| acc.lcm(&d))
                }
                _ => unreachable!(),
            };
            let basis = vec![
                vec![Int::one(), Int::one()],
                vec![Int::from(order), Int::zero()],
            ];
            return Ok(ConjugatePairOutcome {
                lattice: ResonanceLattice {
                    basis: hnf_rows(basis),
                    status: LatticeStatus::Exact,
                    searched_bound: None,
                },
                matched_index: check.order,
                modulus_one: true,
            });
        }
        return Ok(ConjugatePairOutcome {
            lattice: ResonanceLattice {
                basis: vec![vec![Int::one(), Int::one()]],
                status: LatticeStatus::Exact,
                searched_bound: None,
            },
            matched_index: None,
            modulus_one: true,
        });
    }
    // |mu| != 1: any relation has k2 = -k1, and (mu/conj mu)^k = 1 iff
    // v = trace^2/(2 det) - 1 = cos(2 pi n/p) for some p; then (p, -p) is
    // the primitive relation.
    let v_num = polymod_mul(t, t, &m).sub(&d.scale(&crate::scalar::rat_int(2))).rem(&m);
    let v_den = d.scale(&crate::scalar::rat_int(2)).rem(&m);
    match match_cos_value(theta, &v_num, &v_den) {
        Some(p) => {
            let basis = vec![vec![Int::from(p), Int::from(-(p as i64))]];
            Ok(ConjugatePairOutcome {
                lattice: ResonanceLattice {
                    basis,
                    status: LatticeStatus::Exact,
                    searched_bound: None,
                },
                matched_index: Some(p),
                modulus_one: false,
            })
        }
        None => Ok(ConjugatePairOutcome {
            lattice: ResonanceLattice::empty(LatticeStatus::Exact, None),
            matched_index: None,
            modulus_one: false,
        }),
    }
}

/// Minimal-polynomial-style defining polynomial of mu over Q for the
/// conjugate pair: eliminate theta from mu^2 - T(theta) mu + D(theta).
fn eigen_minpoly_over_q(pair: &ConjugatePair) -> Result<DensePoly, ResonanceError> {
    if let Some(_r) = pair.theta.as_rational() {
        // trace/det already rational constants
        let t = pair.trace_expr.coeff(0);
        let d = pair.det_expr.coeff(0);
        return Ok(DensePoly::new(vec![d, -t, Rat::one()]));
    }
    use crate::multipoly::{MultiPoly, VarSet};
    let vars = VarSet::new(vec!["t", "mu"]);
    let tv = MultiPoly::<Rat>::var(&vars, 0);
    let muv = MultiPoly::<Rat>::var(&vars, 1);
    let lift = |p: &DensePoly| -> MultiPoly<Rat> {
        let mut acc = MultiPoly::zero(&vars);
        for (i, c) in p.coeffs().iter().enumerate() {
            acc = &acc + &tv.pow(i as u32).scale(c);
        }
        acc
    };
    let charpoly = &(&muv.pow(2) - &(&lift(&pair.trace_expr) * &muv)) + &lift(&pair.det_expr);
    let minp = lift(pair.theta.minpoly());
    let res = crate::resultant::resultant_in(&minp, &charpoly, "t")
        .map_err(MapError::from)?;
    let dense = UniPoly::new(res, "mu")
        .map_err(MapError::from)?
        .to_dense()
        .map_err(MapError::from)?;
    if dense.is_zero() {
        return Err(ResonanceError::Hypothesis(
            "eigenvalue elimination degenerated".into(),
        ));
    }
    Ok(dense)
}

/// Decide whether (v_num/v_den)(theta) equals cos(2 pi n / p) for some p
/// with gcd(n, p) = 1, and return that p.
fn match_cos_value(
    theta: &RealAlgebraic,
    v_num: &DensePoly,
    v_den: &DensePoly,
) -> Option<u64> {
    assert!(theta.sign_of(v_den) != Ordering::Equal, "cos value undefined");
    // rational value?
    if let Some(r) = rational_value(theta, v_num, v_den) {
        return cyclo::rational_cos_index(&r);
    }
    // eliminate theta from v * den(t) - num(t) to get a defining polynomial
    // for v, then select the irreducible factor vanishing at the actual value
    use crate::multipoly::{MultiPoly, VarSet};
    let vars = VarSet::new(vec!["t", "v"]);
    let tv = MultiPoly::<Rat>::var(&vars, 0);
    let vv = MultiPoly::<Rat>::var(&vars, 1);
    let lift = |p: &DensePoly| -> MultiPoly<Rat> {
        let mut acc = MultiPoly::zero(&vars);
        for (i, c) in p.coeffs().iter().enumerate() {
            acc = &acc + &tv.pow(i as u32).scale(c);
        }
        acc
    };
    let elim_input = &(&vv * &lift(v_den)) - &lift(v_num);
    let minp = lift(theta.minpoly());
    let res = crate::resultant::resultant_in(&minp, &elim_input, "t").ok()?;
    let dense = UniPoly::new(res, "v").ok()?.to_dense().ok()?;
    if dense.is_zero() {
        return None;
    }
    let selected = select_vanishing_factors(&dense, |w| {
        let th = theta.refined_to(w);
        let ni = eval_dense_on_interval(v_num, th.interval());
        let di = eval_dense_on_interval(v_den, th.interval());
        ni.div_checked(&di)
    })?;
    // v is a cos(2 pi n/p) iff its minimal polynomial is one of the swept
    // cos-polynomials; a unique irreducible match decides it
    for factor in &selected {
        let deg = factor.degree().unwrap_or(0) as u32;
        if deg == 0 {
            continue;
        }
        for p in cyclo::indices_with_cos_degree_at_most(deg).indices {
            let mp = cyclo::min_poly_cos(p);
            if mp.poly == factor.primitive_part() {
                return Some(p);
            }
        }
    }
    None
}

/// Exact rational value of v = num/den at theta, if it is rational: v is
/// rational iff den * r - num vanishes at theta for the interval-guessed r.
fn rational_value(theta: &RealAlgebraic, num: &DensePoly, den: &DensePoly) -> Option<Rat> {
    if let Some(t) = theta.as_rational() {
        let d = den.eval(&t);
        if d.is_zero() {
            return None;
        }
        return Some(num.eval(&t) / d);
    }
    // guess from a tight interval, then verify exactly
    let th = theta.refined_to(&crate::map::fixed::separation_cutoff());
    let ni = eval_dense_on_interval(num, th.interval());
    let di = eval_dense_on_interval(den, th.interval());
    let iv = ni.div_checked(&di)?;
    let guess = simplest_rational_in(&iv.lo, &iv.hi)?;
    let test = den.scale(&guess).sub(num);
    (theta.sign_of(&test) == Ordering::Equal).then_some(guess)
}

/// The rational with smallest denominator inside [lo, hi] (Stern-Brocot).
pub fn simplest_rational_in(lo: &Rat, hi: &Rat) -> Option<Rat> {
    if lo > hi {
        return None;
    }
    // walk the Stern-Brocot tree
    fn simplest(lo: &Rat, hi: &Rat) -> Rat {
        // assumes 0 <= lo <= hi
        let fl = lo.floor();
        if &fl >= lo {
            // lo is an integer
            return fl;
        }
        if fl < hi.floor() || &hi.floor() == hi && hi.floor() > fl {
            return fl + Rat::one();
        }
        // both in (fl, fl+1)
        let lo2 = lo - &fl;
        let hi2 = hi - &fl;
        // 1/(simplest in [1/hi2, 1/lo2])
        let inv = simplest(&(Rat::one() / hi2), &(Rat::one() / lo2));
        fl + Rat::one() / inv
    }
    if lo.is_negative() && hi.is_negative() {
        return Some(-simplest(&-hi.clone(), &-lo.clone()));
    }
    if lo.is_negative() {
        return Some(Rat::zero());
    }
    Some(simplest(lo, hi))
}

/// Select the factors of `elim` that vanish at the value enclosed by
/// `approx(width)`, by refining until all others are excluded. Returns all
/// still-unseparated factors at the cutoff (a conservative superset).
pub fn select_vanishing_factors(
    elim: &DensePoly,
    approx: impl Fn(&Rat) -> Option<IntervalQ>,
) -> Option<Vec<DensePoly>> {
    let fact = factor_bounded_dense(elim, 6);
    let mut candidates: Vec<DensePoly> = fact.all_factors().map(|(f, _)| f.clone()).collect();
    let cutoff = crate::map::fixed::separation_cutoff();
    let mut width = crate::scalar::rat(1, 16);
    loop {
        let iv = approx(&width)?;
        candidates.retain(|f| eval_dense_on_interval(f, &iv).contains_zero());
        if candidates.len() <= 1 || width < cutoff {
            break;
        }
        width = &width * &crate::scalar::rat(1, 1024);
    }
    (!candidates.is_empty()).then_some(candidates)
}

/// One eigenvalue for the heuristic search: float approximation plus exact
/// defining data.
#[derive(Clone, Debug)]
pub struct HeuristicEigen {
    pub approx: Complex64,
    /// Defining polynomial with rational coefficients (need not be
    /// irreducible; used for exact verification).
    pub defining: DensePoly,
    /// Index of a shared defining polynomial when this eigenvalue and
    /// another are the two roots of one quadratic (enables exact pair
    /// verification).
    pub quadratic_partner: Option<usize>,
}

/// Search for integer relations mu^k = 1 up to the exponent bound, verify
/// each candidate exactly, and return the lattice generated by the verified
/// relations.
pub fn rank_heuristic(eigs: &[HeuristicEigen], bound: u32) -> ResonanceLattice {
    let n = eigs.len();
    if n == 0 {
        return ResonanceLattice::empty(LatticeStatus::Exact, Some(bound));
    }
    if eigs.iter().any(|e| !e.approx.norm().is_finite() || e.approx.norm() == 0.0) {
        return ResonanceLattice::empty(LatticeStatus::HeuristicUnverified, Some(bound));
    }
    // adapt the bound so the enumeration stays in budget
    let mut b = bound.max(1);
    loop {
        let combos = ((2 * b + 1) as f64).powi(n as i32);
        if combos <= 5_000_000.0 || b == 1 {
            break;
        }
        b -= 1;
    }
    let logs: Vec<f64> = eigs.iter().map(|e| e.approx.norm().ln()).collect();
    let args: Vec<f64> = eigs.iter().map(|e| e.approx.arg()).collect();
    let eps = 1e-7;
    let mut verified: Vec<Vec<Int>> = Vec::new();
    let mut k = vec![-(b as i64); n];
    'outer: loop {
        // skip zero and sign duplicates (first nonzero entry positive)
        if let Some(first) = k.iter().find(|&&x| x != 0) {
            if *first > 0 {
                let logsum: f64 = k.iter().zip(&logs).map(|(&ki, l)| ki as f64 * l).sum();
                if logsum.abs() < eps {
                    let argsum: f64 = k.iter().zip(&args).map(|(&ki, a)| ki as f64 * a).sum();
                    let frac = (argsum / (2.0 * std::f64::consts::PI)).rem_euclid(1.0);
                    if frac < eps || frac > 1.0 - eps {
                        if verify_relation(eigs, &k) {
                            verified.push(k.iter().map(|&x| Int::from(x)).collect());
                        }
                    }
                }
            }
        }
        // odometer
        let mut pos = 0;
        loop {
            k[pos] += 1;
            if k[pos] <= b as i64 {
                break;
            }
            k[pos] = -(b as i64);
            pos += 1;
            if pos == n {
                break 'outer;
            }
        }
    }
    ResonanceLattice {
        basis: hnf_rows(verified),
        status: LatticeStatus::HeuristicVerified,
        searched_bound: Some(b),
    }
}

/// Exact verification of a single relation mu^k = 1.
fn verify_relation(eigs: &[HeuristicEigen], k: &[i64]) -> bool {
    let support: Vec<usize> = (0..k.len()).filter(|&i| k[i] != 0).collect();
    // all-rational support: direct arithmetic
    if support.iter().all(|&i| eigs[i].defining.degree() == Some(1)) {
        let mut acc = Rat::one();
        for &i in &support {
            let root = -eigs[i].defining.coeff(0) / eigs[i].defining.coeff(1);
            if root.is_zero() {
                return false;
            }
            let e = k[i];
            let p = if e < 0 {
                Rat::one() / root
            } else {
                root
            };
            for _ in 0..e.unsigned_abs() {
                acc *= &p;
            }
        }
        return acc.is_one();
    }
    // single eigenvalue: t^k mod defining == 1 proves it for every root
    if support.len() == 1 {
        let i = support[0];
        let q = eigs[i].defining.monic();
        if q.coeff(0).is_zero() {
            return false;
        }
        let t = DensePoly::from_i64(&[0, 1]);
        return polymod_pow(&t, k[i], &q).map_or(false, |r| r == DensePoly::one());
    }
    // two eigenvalues sharing one quadratic: mu1 = t, mu2 = S - t in
    // Q[t]/(t^2 - S t + P); the identity holds for both root labelings
    if support.len() == 2 {
        let (i, j) = (support[0], support[1]);
        if eigs[i].quadratic_partner == Some(j) && eigs[j].quadratic_partner == Some(i) {
            let q = eigs[i].defining.monic();
            if q.degree() == Some(2) && !q.coeff(0).is_zero() {
                let s = -q.coeff(1);
                let t = DensePoly::from_i64(&[0, 1]);
                let other = DensePoly::constant(s).sub(&t);
                let a = match polymod_pow(&t, k[i], &q) {
                    Some(a) => a,
                    None => return false,
                };
                let bpow = |base: &DensePoly, e: i64| -> Option<DensePoly> {
                    if e >= 0 {
                        let mut acc = DensePoly::one();
                        for _ in 0..e {
                            acc = polymod_mul(&acc, base, &q);
                        }
                        Some(acc)
                    } else {
                        let inv = crate::polymod::polymod_inv(base, &q)?;
                        let mut acc = DensePoly::one();
                        for _ in 0..(-e) {
                            acc = polymod_mul(&acc, &inv, &q);
                        }
                        Some(acc)
                    }
                };
                let b = match bpow(&other, k[j]) {
                    Some(b) => b,
                    None => return false,
                };
                return polymod_mul(&a, &b, &q) == DensePoly::one();
            }
        }
    }
    false
}

/// Outcome of the Theorem-1 style bound at a fixed point.
#[derive(Clone, Debug)]
pub struct IntegralBound {
    pub bound: usize,
    pub lattice: ResonanceLattice,
    pub note: String,
}

/// Upper bound for the number of functionally independent meromorphic first
/// integrals at a certified fixed point: the rank of the resonance lattice
/// of the eigenvalues of the Jacobian there.
pub fn theorem1_bound(
    map: &RationalMap,
    fp: &FixedPoint,
    search_bound: u32,
) -> Result<IntegralBound, ResonanceError> {
    let shared = fp.shared.as_ref().ok_or_else(|| {
        ResonanceError::Hypothesis("fixed point lacks an exact algebraic description".into())
    })?;
    let charpoly = match specialized_char_poly(map, shared) {
        Ok(c) => c,
        Err(ResonanceError::Hypothesis(msg))
            if map.n() == 2 && msg.contains("proper extension") =>
        {
            // planar fixed point in a proper extension: the conjugate-pair
            // test works directly on trace/det in the quotient ring
            let pair = conjugate_pair_at(map, shared, 6).ok_or_else(|| {
                ResonanceError::Hypothesis(
                    "could not restrict the fixed point to an irreducible extension".into(),
                )
            })?;
            let out = rank_conjugate_pair(&pair)?;
            return Ok(IntegralBound {
                bound: out.lattice.rank(),
                lattice: out.lattice,
                note: match out.matched_index {
                    Some(p) => format!("conjugate pair, eigenvalue ratio of order {p}"),
                    None => "conjugate pair, no resonance".into(),
                },
            });
        }
        Err(e) => return Err(e),
    };
    // det Df != 0: the constant term of the specialized char poly carries it
    if charpoly.coeff(0).is_zero() {
        return Err(ResonanceError::Hypothesis(
            "Jacobian is singular at the fixed point".into(),
        ));
    }
    let n = map.n();
    // all roots rational?
    let fact = factor_bounded_dense(&charpoly, 6);
    let linear_roots: Vec<(Rat, u32)> = fact
        .irreducible
        .iter()
        .filter(|(f, _)| f.degree() == Some(1))
        .map(|(f, m)| (-f.coeff(0) / f.coeff(1), *m))
        .collect();
    let total_linear: u32 = linear_roots.iter().map(|(_, m)| m).sum();
    if total_linear as usize == n {
        let mut mu = Vec::with_capacity(n);
        for (r, m) in linear_roots {
            for _ in 0..m {
                mu.push(r.clone());
            }
        }
        let lattice = rank_rational_eigs(&mu)?;
        return Ok(IntegralBound {
            bound: lattice.rank(),
            lattice,
            note: "rational eigenvalues, exact lattice".into(),
        });
    }
    // all eigenvalues roots of unity?
    let unity = cyclo::is_root_of_unity(&charpoly);
    if unity.is_root_of_unity {
        let order = match &unity.witness {
            CycloProduct::Product(idx) => idx.iter().fold(1u64, |acc, &d| acc.lcm(&d)),
            _ => unreachable!(),
        };
        let basis: Vec<Vec<Int>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Int::from(order) } else { Int::zero() })
                    .collect()
            })
            .collect();
        return Ok(IntegralBound {
            bound: n,
            lattice: ResonanceLattice {
                basis: hnf_rows(basis),
                status: LatticeStatus::Exact,
                searched_bound: None,
            },
            note: format!("all eigenvalues are roots of unity (order divides {order})"),
        });
    }
    // planar complex-conjugate pair
    if n == 2 {
        let disc = {
            // b^2 - 4 a c for a mu^2 + b mu + c
            let a = charpoly.coeff(2);
            let b = charpoly.coeff(1);
            let c = charpoly.coeff(0);
            &b * &b - Rat::from_integer(Int::from(4)) * &a * &c
        };
        if disc.is_negative() && charpoly.degree() == Some(2) {
            let a = charpoly.coeff(2);
            let pair = ConjugatePair::from_rational(
                -charpoly.coeff(1) / &a,
                charpoly.coeff(0) / &a,
            );
            let out = rank_conjugate_pair(&pair)?;
            return Ok(IntegralBound {
                bound: out.lattice.rank(),
                lattice: out.lattice,
                note: match out.matched_index {
                    Some(p) => format!("conjugate pair, eigenvalue ratio of order {p}"),
                    None => "conjugate pair, no resonance".into(),
                },
            });
        }
    }
    // general position: heuristic search with exact verification
    let roots = complex_roots(&charpoly);
    if roots.len() != n {
        return Err(ResonanceError::Hypothesis(
            "could not approximate the full eigenvalue tuple".into(),
        ));
    }
    let quadratic = charpoly.degree() == Some(2) && n == 2;
    let eigs: Vec<HeuristicEigen> = roots
        .iter()
        .enumerate()
        .map(|(i, &r)| HeuristicEigen {
            approx: r,
            defining: charpoly.clone(),
            quadratic_partner: quadratic.then_some(1 - i),
        })
        .collect();
    let lattice = rank_heuristic(&eigs, search_bound);
    Ok(IntegralBound {
        bound: lattice.rank(),
        lattice,
        note: "general position, verified relations up to the searched bound".into(),
    })
}

/// Characteristic polynomial of the Jacobian specialized at a shared-
/// algebraic fixed point, as a dense polynomial in mu with rational
/// coefficients obtained by reducing modulo the defining polynomial.
///
/// Only valid when the reduction leaves constants, i.e. the fixed point's
/// coordinates generate the extension the coefficients land in; for a
/// rational point this is immediate.
fn specialized_char_poly(
    map: &RationalMap,
    shared: &SharedAlgebraic,
) -> Result<DensePoly, ResonanceError> {
    let cp = map.char_poly();
    let nvars = map.vars().len();
    let mu_coeffs = UniPoly::new(cp.numerator.clone(), &cp.mu)
        .map_err(MapError::from)?
        .coeffs();
    let mut out: Vec<Rat> = Vec::with_capacity(mu_coeffs.len());
    let mut pending: Vec<DensePoly> = Vec::with_capacity(mu_coeffs.len());
    for c in &mu_coeffs {
        // c is a polynomial in the state vars (no mu); drop the mu slot and
        // evaluate at the shared coordinates
        let proj = project_to_vars(c, nvars);
        pending.push(eval_at_shared(&proj, shared));
    }
    // rational normal form requires the theta-reduced coefficients constant
    for d in &pending {
        if d.degree().unwrap_or(0) >= 1 {
            // not expressible in Q: fall back to the algebraic-coefficient
            // form by multiplying out the minimal polynomial — out of scope
            return Err(ResonanceError::Hypothesis(
                "characteristic polynomial does not specialize to rational coefficients; \
                 the eigenvalue data lives in a proper extension"
                    .into(),
            ));
        }
        out.push(d.coeff(0));
    }
    let dense = DensePoly::new(out);
    if dense.is_zero() {
        return Err(ResonanceError::Hypothesis(
            "characteristic polynomial vanished at the fixed point".into(),
        ));
    }
    Ok(dense)
}

fn project_to_vars(p: &crate::multipoly::MultiPoly<Rat>, nvars: usize) -> crate::multipoly::MultiPoly<Rat> {
    use crate::monomial::Monomial;
    use crate::multipoly::{MultiPoly, VarSet};
    let names: Vec<String> = p.vars().names()[..nvars].to_vec();
    let vars = VarSet::new(names);
    let mut out = MultiPoly::zero(&vars);
    let terms: Vec<(Monomial, Rat)> = p
        .terms()
        .map(|(m, c)| {
            (
                Monomial::from_exponents(m.exponents()[..nvars].to_vec()),
                c.clone(),
            )
        })
        .collect();
    for (m, c) in terms {
        out = &out + &MultiPoly::from_terms(&vars, [(m, c)]);
    }
    out
}

/// Complex roots by Durand-Kerner iteration (float precision; callers must
/// verify anything they conclude).
pub fn complex_roots(p: &DensePoly) -> Vec<Complex64> {
    let deg = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Vec::new(),
    };
    let lead = rat_to_f64(&p.lc());
    let coeffs: Vec<Complex64> = p
        .coeffs()
        .iter()
        .map(|c| Complex64::new(rat_to_f64(c) / lead, 0.0))
        .collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|i| Complex64::new(0.4, 0.9).powu(i as u32 + 1))
        .collect();
    for _ in 0..200 {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn primes_have_no_resonance() {
        let l = rank_rational_eigs(&[rat_int(2), rat_int(3)]).unwrap();
        assert_eq!(l.rank(), 0);
        assert_eq!(l.status, LatticeStatus::Exact);
        let l3 = rank_rational_eigs(&[rat_int(2), rat_int(3), rat_int(5)]).unwrap();
        assert_eq!(l3.rank(), 0);
    }

    #[test]
    fn reciprocal_pair() {
        let l = rank_rational_eigs(&[rat_int(2), rat(1, 2)]).unwrap();
        assert_eq!(l.rank(), 1);
        assert_eq!(l.basis, vec![ints(&[1, 1])]);
    }

    #[test]
    fn ones_have_full_rank() {
        let l = rank_rational_eigs(&[rat_int(1), rat_int(1)]).unwrap();
        assert_eq!(l.rank(), 2);
    }

    #[test]
    fn sign_condition() {
        // (-1, 2): -1 has order 2: lattice {k1 even, k2 = 0}
        let l = rank_rational_eigs(&[rat_int(-1), rat_int(2)]).unwrap();
        assert_eq!(l.basis, vec![ints(&[2, 0])]);
        // (-2, 2): (-2)^k1 2^k2 = 1 requires k1 + k2 = 0 and k1 even
        let l2 = rank_rational_eigs(&[rat_int(-2), rat_int(2)]).unwrap();
        assert_eq!(l2.rank(), 1);
        assert_eq!(l2.basis, vec![ints(&[2, -2])]);
    }

    #[test]
    fn zero_eigenvalue_rejected() {
        assert_eq!(
            rank_rational_eigs(&[rat_int(0), rat_int(2)]),
            Err(ResonanceError::ZeroEigenvalue)
        );
    }

    #[test]
    fn brute_force_agreement_small() {
        // random-ish tuples from {±2^a 3^b}, checked against brute force
        let cases: Vec<Vec<Rat>> = vec![
            vec![rat_int(2), rat_int(4)],
            vec![rat_int(6), rat(2, 3)],
            vec![rat(-4, 9), rat(2, 3)],
            vec![rat_int(2), rat_int(3), rat(1, 6)],
            vec![rat(8, 27), rat(2, 3)],
        ];
        for mu in cases {
            let l = rank_rational_eigs(&mu).unwrap();
            let bf = brute_force_rank(&mu, 6);
            assert_eq!(l.rank(), bf, "tuple {mu:?}");
        }
    }

    pub fn brute_force_rank(mu: &[Rat], bound: i64) -> usize {
        // collect all relations with |k|_inf <= bound, return lattice rank
        let n = mu.len();
        let mut rels: Vec<Vec<Int>> = Vec::new();
        let mut k = vec![-bound; n];
        'outer: loop {
            if k.iter().any(|&x| x != 0) {
                let mut acc = Rat::one();
                let mut ok = true;
                for (i, &ki) in k.iter().enumerate() {
                    if mu[i].is_zero() {
                        ok = false;
                        break;
                    }
                    let base = if ki < 0 {
                        Rat::one() / mu[i].clone()
                    } else {
                        mu[i].clone()
                    };
                    for _ in 0..ki.unsigned_abs() {
                        acc *= &base;
                    }
                }
                if ok && acc.is_one() {
                    rels.push(k.iter().map(|&x| Int::from(x)).collect());
                }
            }
            let mut pos = 0;
            loop {
                k[pos] += 1;
                if k[pos] <= bound {
                    break;
                }
                k[pos] = -bound;
                pos += 1;
                if pos == n {
                    break 'outer;
                }
            }
        }
        hnf_rows(rels).len()
    }

    #[test]
    fn conjugate_pair_rational_cases() {
        // T = 0, D = 2: v = -1 = cos(pi), p = 2, basis {(2, -2)}
        let out =
            rank_conjugate_pair(&ConjugatePair::from_rational(rat_int(0), rat_int(2))).unwrap();
        assert!(!out.modulus_one);
        assert_eq!(out.matched_index, Some(2));
        assert_eq!(out.lattice.basis, vec![ints(&[2, -2])]);
        // T = 3/2, D = 1 (modulus-one branch, not a root of unity)
        let out2 =
            rank_conjugate_pair(&ConjugatePair::from_rational(rat(3, 2), rat_int(1))).unwrap();
        assert!(out2.modulus_one);
        assert_eq!(out2.lattice.rank(), 1);
        assert_eq!(out2.lattice.basis, vec![ints(&[1, 1])]);
        // T = 1, D = 1: mu primitive 6th root: rank 2
        let out3 =
            rank_conjugate_pair(&ConjugatePair::from_rational(rat_int(1), rat_int(1))).unwrap();
        assert!(out3.modulus_one);
        assert_eq!(out3.lattice.rank(), 2);
        assert_eq!(out3.matched_index, Some(6));
        // T = 1, D = 5: v = 1/10 - 1 = -9/10 not a cos value: rank 0
        let out4 =
            rank_conjugate_pair(&ConjugatePair::from_rational(rat_int(1), rat_int(5))).unwrap();
        assert_eq!(out4.lattice.rank(), 0);
        assert_eq!(out4.matched_index, None);
    }

    #[test]
    fn conjugate_pair_hypothesis_violation() {
        // T = 3, D = 1: real eigenvalues
        let err = rank_conjugate_pair(&ConjugatePair::from_rational(rat_int(3), rat_int(1)))
            .unwrap_err();
        assert!(matches!(err, ResonanceError::Hypothesis(_)));
    }

    #[test]
    fn heuristic_finds_product_relation() {
        // roots of t^2 - (3/2) t + 1: |mu| = 1, mu * conj = 1
        let q = DensePoly::new(vec![rat_int(1), rat(-3, 2), rat_int(1)]);
        let roots = complex_roots(&q);
        let eigs: Vec<HeuristicEigen> = roots
            .iter()
            .enumerate()
            .map(|(i, &r)| HeuristicEigen {
                approx: r,
                defining: q.clone(),
                quadratic_partner: Some(1 - i),
            })
            .collect();
        let l = rank_heuristic(&eigs, 20);
        assert_eq!(l.status, LatticeStatus::HeuristicVerified);
        assert_eq!(l.rank(), 1);
        assert_eq!(l.basis, vec![ints(&[1, 1])]);
    }

    #[test]
    fn heuristic_no_relation_for_primes() {
        let eigs: Vec<HeuristicEigen> = [2.0, 3.0]
            .iter()
            .map(|&v| HeuristicEigen {
                approx: Complex64::new(v, 0.0),
                defining: DensePoly::from_i64(&[-(v as i64), 1]),
                quadratic_partner: None,
            })
            .collect();
        let l = rank_heuristic(&eigs, 20);
        assert_eq!(l.rank(), 0);
        assert_eq!(l.searched_bound, Some(20));
    }

    #[test]
    fn heuristic_cube_roots_of_unity() {
        let q = DensePoly::from_i64(&[1, 1, 1]);
        let roots = complex_roots(&q);
        let eigs: Vec<HeuristicEigen> = roots
            .iter()
            .enumerate()
            .map(|(i, &r)| HeuristicEigen {
                approx: r,
                defining: q.clone(),
                quadratic_partner: Some(1 - i),
            })
            .collect();
        let l = rank_heuristic(&eigs, 10);
        assert_eq!(l.rank(), 2);
        // the lattice contains (3,0) and (0,3); with pair verification it
        // also finds (1,1), so the index is finer
        assert!(l.basis.iter().any(|b| b.iter().any(|x| !x.is_zero())));
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(
            simplest_rational_in(&rat(2, 7), &rat(1, 3)),
            Some(rat(1, 3))
        );
        assert_eq!(
            simplest_rational_in(&rat(-1, 10), &rat(1, 10)),
            Some(rat_int(0))
        );
        assert_eq!(simplest_rational_in(&rat(5, 2), &rat(7, 2)), Some(rat_int(3)));
    }
}

#[cfg(test)]
mod bound_tests {
    use super::*;
    use crate::map::fixed::{enumerate_real_fixed_points, FixedPointEnumeration};
    use crate::map::parse::parse_map;

    fn sole_fixed_point(src: &str) -> (crate::map::RationalMap, FixedPoint) {
        let m = parse_map(src).unwrap();
        let fps = match enumerate_real_fixed_points(&m).unwrap() {
            FixedPointEnumeration::Points(p) => p,
            _ => panic!("expected isolated fixed points"),
        };
        assert_eq!(fps.len(), 1, "{src}");
        let fp = fps[0].clone();
        (m, fp)
    }

    #[test]
    fn prime_diagonal_has_bound_zero() {
        let (m, fp) = sole_fixed_point("vars x,y,z; f = (2*x, 3*y, 5*z)");
        let out = theorem1_bound(&m, &fp, 20).unwrap();
        assert_eq!(out.bound, 0);
        assert_eq!(out.lattice.status, LatticeStatus::Exact);
    }

    #[test]
    fn sixth_root_map_has_bound_two() {
        let (m, fp) = sole_fixed_point("vars x,y; f = (y, y/x)");
        let out = theorem1_bound(&m, &fp, 20).unwrap();
        assert_eq!(out.bound, 2);
        assert_eq!(out.lattice.status, LatticeStatus::Exact);
    }

    #[test]
    fn unipotent_linear_part_has_full_bound() {
        // f = (x + y^2, y + x^2) fixes the origin with Df = I
        let m = parse_map("vars x,y; f = (x + y^2, y + x^2)").unwrap();
        let fps = match enumerate_real_fixed_points(&m).unwrap() {
            FixedPointEnumeration::Points(p) => p,
            _ => panic!(),
        };
        let origin = fps
            .iter()
            .find(|fp| {
                fp.all_rational()
                    .map_or(false, |v| v.iter().all(|x| x.is_zero()))
            })
            .unwrap();
        let out = theorem1_bound(&m, origin, 20).unwrap();
        assert_eq!(out.bound, 2);
    }

    #[test]
    fn conjugate_pair_fixed_point_bound() {
        // the concrete cubic-fixed-point map: bound 0 at (s, s)
        let (m, fp) = sole_fixed_point(
            "vars x,y; f = (x + y^2 - x*y, (x^2 + x*y + 1)/(x^2 - 3*y + 1))",
        );
        let out = theorem1_bound(&m, &fp, 20).unwrap();
        assert_eq!(out.bound, 0);
    }
}
