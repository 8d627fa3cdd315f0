//! Cyclotomic polynomials, totient sweeps, minimal polynomials of
//! cos(2*pi*n/p), and root-of-unity membership tests.

use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::Mutex;
use std::sync::OnceLock;

use crate::dense::DensePoly;
use crate::error::PolyError;
use crate::factor::dense_sqrt;
use crate::multipoly::{MultiPoly, VarSet};
use crate::resultant::resultant;
use crate::scalar::Rat;
use crate::unipoly::UniPoly;

pub fn totient(p: u64) -> u64 {
    assert!(p >= 1);
    let mut n = p;
    let mut result = p;
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            while n % q == 0 {
                n /= q;
            }
            result -= result / q;
        }
        q += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u64) -> Vec<u64> {
    let mut divs = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
        }
        i += 1;
    }
    divs.sort();
    divs
}

fn cyclo_cache() -> &'static Mutex<BTreeMap<u64, DensePoly>> {
    static CACHE: OnceLock<Mutex<BTreeMap<u64, DensePoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// Dense coefficients of the p-th cyclotomic polynomial, computed by exact
/// division of x^p - 1 by the proper-divisor cyclotomics. Memoized.
pub fn cyclotomic_dense(p: u64) -> DensePoly {
    assert!(p >= 1);
    if let Some(hit) = cyclo_cache().lock().unwrap().get(&p) {
        return hit.clone();
    }
    let result = if p == 1 {
        DensePoly::from_i64(&[-1, 1])
    } else {
        let mut num = DensePoly::monomial(p as usize).sub(&DensePoly::one());
        for d in divisors(p) {
            if d == p {
                continue;
            }
            let phi_d = cyclotomic_dense(d);
            num = num.exact_div(&phi_d).expect("cyclotomic division is exact");
        }
        num
    };
    cyclo_cache().lock().unwrap().insert(p, result.clone());
    result
}

/// The p-th cyclotomic polynomial as a univariate polynomial in `x`.
pub fn cyclotomic_poly(p: u64) -> UniPoly<Rat> {
    UniPoly::from_dense("x", &cyclotomic_dense(p))
}

/// A complete inverse-totient sweep: all p with phi(p) <= threshold.
/// Complete because phi(p) >= sqrt(p/2), so p <= 2*threshold^2.
pub fn indices_with_phi_at_most(threshold: u64) -> Vec<u64> {
    let bound = 2 * threshold * threshold + 1;
    (1..=bound).filter(|&p| totient(p) <= threshold).collect()
}

/// Index set of cyclotomic indices filtered by a degree threshold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicIndexSet {
    /// The degree bound `k` the set was built for.
    pub bound: u32,
    /// The totient threshold actually applied.
    pub threshold: u64,
    /// All indices p with `phi(p) <= threshold`, ascending.
    pub indices: Vec<u64>,
}

/// All p whose cos-minimal-polynomial degree is at most k, i.e.
/// phi(p)/2 <= k (p = 1, 2 have degree-1 polynomials and always qualify).
pub fn indices_with_cos_degree_at_most(k: u32) -> CyclotomicIndexSet {
    assert!(k >= 1);
    let threshold = 2 * k as u64;
    CyclotomicIndexSet {
        bound: k,
        threshold,
        indices: indices_with_phi_at_most(threshold),
    }
}

/// All p with deg Phi_p <= k.
pub fn indices_with_cyclo_degree_at_most(k: u32) -> CyclotomicIndexSet {
    assert!(k >= 1);
    let threshold = k as u64;
    CyclotomicIndexSet {
        bound: k,
        threshold,
        indices: indices_with_phi_at_most(threshold),
    }
}

/// All p with phi(p)/2 exactly m (the cos-polynomial degree classes).
pub fn indices_with_cos_degree_exactly(m: u32) -> Vec<u64> {
    assert!(m >= 1);
    indices_with_phi_at_most(2 * m as u64)
        .into_iter()
        .filter(|&p| p > 2 && totient(p) == 2 * m as u64)
        .collect()
}

/// Minimal polynomial of cos(2*pi*n/p) over the rationals, primitive with
/// positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinPolyCos {
    pub p: u64,
    pub poly: DensePoly,
}

impl MinPolyCos {
    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap()
    }

    pub fn unipoly(&self, var: &str) -> UniPoly<Rat> {
        UniPoly::from_dense(var, &self.poly)
    }
}

/// Compute the minimal polynomial of cos(2*pi*n/p) as the square root of
/// Res_x(Phi_p(x), x^2 - 2xv + 1). For p <= 2 the resultant degenerates
/// (cos values 1 and -1) and the linear polynomials are returned directly.
pub fn min_poly_cos(p: u64) -> MinPolyCos {
    assert!(p >= 1);
    if p == 1 {
        return MinPolyCos {
            p,
            poly: DensePoly::from_i64(&[-1, 1]),
        };
    }
    if p == 2 {
        return MinPolyCos {
            p,
            poly: DensePoly::from_i64(&[1, 1]),
        };
    }
    let vars = VarSet::new(vec!["x", "v"]);
    let x = MultiPoly::<Rat>::var(&vars, 0);
    let v = MultiPoly::<Rat>::var(&vars, 1);
    let phi = UniPoly::from_dense("x", &cyclotomic_dense(p))
        .poly()
        .with_vars(&vars);
    let quad = &(&x.pow(2) - &(&x * &v).scale(&crate::scalar::rat_int(2))) + &MultiPoly::one(&vars);
    let res = resultant(
        &UniPoly::from_index(phi, 0),
        &UniPoly::from_index(quad, 0),
    )
    .expect("nonzero inputs");
    let dense = UniPoly::new(res, "v")
        .expect("v present")
        .to_dense()
        .expect("resultant in v only");
    let sq = dense_sqrt(&dense)
        .expect("Res_x(Phi_p, x^2-2xv+1) must be a perfect square");
    let poly = sq.primitive_part();
    debug_assert_eq!(poly.degree().unwrap() as u64, totient(p) / 2);
    MinPolyCos { p, poly }
}

/// For a rational value v, the unique p with v = cos(2*pi*n/p), gcd(n,p)=1,
/// if one exists. Regenerated from the degree-1 sweep, not hard-coded.
pub fn rational_cos_index(v: &Rat) -> Option<u64> {
    for p in indices_with_cos_degree_at_most(1).indices {
        if totient(p) / 2 <= 1 {
            let m = min_poly_cos(p);
            if m.degree() == 1 && m.poly.eval(v).is_zero() {
                return Some(p);
            }
        }
    }
    None
}

/// Outcome of the cyclotomic-product test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycloProduct {
    /// Product of the listed cyclotomic indices (with multiplicity), up to a
    /// rational unit.
    Product(Vec<u64>),
    /// The primitive part is not monic up to sign, so some root is not an
    /// algebraic integer, let alone a root of unity.
    NonMonic,
    /// A monic remainder with no cyclotomic divisor.
    Remainder(DensePoly),
}

impl CycloProduct {
    pub fn is_product(&self) -> bool {
        matches!(self, CycloProduct::Product(_))
    }
}

/// Decide whether `p` is, up to a rational unit, a product of cyclotomic
/// polynomials; the witness lists the indices with multiplicity.
pub fn is_cyclotomic_product_dense(p: &DensePoly) -> CycloProduct {
    assert!(!p.is_zero());
    let prim = p.primitive_part();
    if prim.is_constant() {
        return CycloProduct::Product(Vec::new());
    }
    if !prim.lc().is_one() {
        return CycloProduct::NonMonic;
    }
    let mut rest = prim;
    let mut witness = Vec::new();
    let mut d = 1u64;
    loop {
        let deg = rest.degree().unwrap_or(0) as u64;
        if deg == 0 {
            break;
        }
        // no cyclotomic of index d can divide once phi(d) > deg; the sweep
        // bound follows from phi(d) >= sqrt(d/2)
        if d > 2 * deg * deg + 1 {
            break;
        }
        if totient(d) <= deg {
            let phi = cyclotomic_dense(d);
            loop {
                match rest.exact_div(&phi) {
                    Ok(q) => {
                        witness.push(d);
                        rest = q;
                    }
                    Err(_) => break,
                }
            }
        }
        d += 1;
    }
    if rest.is_constant() {
        debug_assert!(rest.lc().is_one());
        CycloProduct::Product(witness)
    } else {
        CycloProduct::Remainder(rest)
    }
}

pub fn is_cyclotomic_product(p: &UniPoly<Rat>) -> Result<CycloProduct, PolyError> {
    Ok(is_cyclotomic_product_dense(&p.to_dense()?))
}

/// Root-of-unity test for an algebraic number presented by a defining
/// polynomial: true iff the squarefree primitive part is a product of
/// cyclotomics. The order is reported when a single index occurs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootOfUnityCheck {
    pub is_root_of_unity: bool,
    pub order: Option<u64>,
    pub witness: CycloProduct,
}

pub fn is_root_of_unity(p: &DensePoly) -> RootOfUnityCheck {
    assert!(!p.is_zero());
    let sf = p.squarefree_part();
    let witness = is_cyclotomic_product_dense(&sf);
    match &witness {
        CycloProduct::Product(idx) => {
            let mut distinct: Vec<u64> = idx.clone();
            distinct.dedup();
            let order = if distinct.len() == 1 { Some(distinct[0]) } else { None };
            RootOfUnityCheck {
                is_root_of_unity: true,
                order,
                witness,
            }
        }
        _ => RootOfUnityCheck {
            is_root_of_unity: false,
            order: None,
            witness,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn totient_values() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(12), 4);
        assert_eq!(totient(18), 6);
        assert_eq!(totient(97), 96);
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_dense(1), DensePoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic_dense(2), DensePoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic_dense(3), DensePoly::from_i64(&[1, 1, 1]));
        assert_eq!(cyclotomic_dense(4), DensePoly::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic_dense(6), DensePoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic_dense(8), DensePoly::from_i64(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic_dense(12), DensePoly::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn cyclotomic_product_identity() {
        for n in 1..=30u64 {
            let mut prod = DensePoly::one();
            for d in divisors(n) {
                prod = prod.mul(&cyclotomic_dense(d));
            }
            let expect = DensePoly::monomial(n as usize).sub(&DensePoly::one());
            assert_eq!(prod, expect, "n = {n}");
        }
    }

    #[test]
    fn index_sets_match_known_degree_classes() {
        assert_eq!(indices_with_cos_degree_at_most(1).indices, vec![1, 2, 3, 4, 6]);
        assert_eq!(indices_with_cos_degree_exactly(2), vec![5, 8, 10, 12]);
        assert_eq!(indices_with_cos_degree_exactly(3), vec![7, 9, 14, 18]);
    }

    #[test]
    fn min_poly_cos_table() {
        assert_eq!(min_poly_cos(1).poly, DensePoly::from_i64(&[-1, 1]));
        assert_eq!(min_poly_cos(2).poly, DensePoly::from_i64(&[1, 1]));
        assert_eq!(min_poly_cos(5).poly, DensePoly::from_i64(&[-1, 2, 4]));
        assert_eq!(min_poly_cos(7).poly, DensePoly::from_i64(&[-1, -4, 4, 8]));
        assert_eq!(min_poly_cos(9).poly, DensePoly::from_i64(&[1, -6, 0, 8]));
        assert_eq!(min_poly_cos(14).poly, DensePoly::from_i64(&[1, -4, -4, 8]));
        assert_eq!(min_poly_cos(18).poly, DensePoly::from_i64(&[-1, -6, 0, 8]));
    }

    #[test]
    fn rational_cos_values() {
        assert_eq!(rational_cos_index(&rat(1, 1)), Some(1));
        assert_eq!(rational_cos_index(&rat(-1, 1)), Some(2));
        assert_eq!(rational_cos_index(&rat(-1, 2)), Some(3));
        assert_eq!(rational_cos_index(&rat(0, 1)), Some(4));
        assert_eq!(rational_cos_index(&rat(1, 2)), Some(6));
        assert_eq!(rational_cos_index(&rat(1, 3)), None);
        assert_eq!(rational_cos_index(&rat(2, 7)), None);
    }

    #[test]
    fn cyclotomic_product_witnesses() {
        // -(x-1)^4
        let p = DensePoly::from_i64(&[-1, 1]).pow(4).neg();
        assert_eq!(
            is_cyclotomic_product_dense(&p),
            CycloProduct::Product(vec![1, 1, 1, 1])
        );
        // x^4 + 1 = Phi_8
        assert_eq!(
            is_cyclotomic_product_dense(&DensePoly::from_i64(&[1, 0, 0, 0, 1])),
            CycloProduct::Product(vec![8])
        );
        // (x^2+x+1)(5x^2-7x+5)/4: non-monic primitive part
        let q = DensePoly::from_i64(&[1, 1, 1])
            .mul(&DensePoly::from_i64(&[5, -7, 5]))
            .scale(&rat(1, 4));
        assert_eq!(is_cyclotomic_product_dense(&q), CycloProduct::NonMonic);
        // monic but not cyclotomic
        let r = DensePoly::from_i64(&[-2, 1]);
        assert!(matches!(
            is_cyclotomic_product_dense(&r),
            CycloProduct::Remainder(_)
        ));
    }

    #[test]
    fn root_of_unity_with_order() {
        let check = is_root_of_unity(&DensePoly::from_i64(&[1, 1, 1]));
        assert!(check.is_root_of_unity);
        assert_eq!(check.order, Some(3));
        let no = is_root_of_unity(&DensePoly::from_i64(&[-2, 1]));
        assert!(!no.is_root_of_unity);
        let a3 = is_root_of_unity(&DensePoly::from_i64(&[5, -7, 5]));
        assert!(!a3.is_root_of_unity);
    }
}
