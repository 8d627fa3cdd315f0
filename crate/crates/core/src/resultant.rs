//! Sylvester resultants, computed by fraction-free (Bareiss) elimination on
//! small matrices and by the subresultant polynomial remainder sequence on
//! larger ones. Both routes produce the exact Sylvester determinant,
//! including its sign; the test suite cross-checks them against each other.
//!
//! Entries live in the polynomial ring of the non-eliminated variables, so
//! the resultant of parametric inputs is the exact elimination polynomial.

use num_traits::One;

use crate::error::PolyError;
use crate::multipoly::MultiPoly;
use crate::scalar::Rat;
use crate::unipoly::UniPoly;

/// Sylvester sizes up to this go through Bareiss elimination.
const BAREISS_SIZE_LIMIT: usize = 12;

/// Resultant of `p` and `q` with respect to their shared main variable.
///
/// Rejects zero inputs. The result is the raw Sylvester determinant (no
/// normalization), a polynomial in the remaining variables.
pub fn resultant(p: &UniPoly<Rat>, q: &UniPoly<Rat>) -> Result<MultiPoly<Rat>, PolyError> {
    if p.is_zero() || q.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    assert_eq!(
        p.var_name(),
        q.var_name(),
        "resultant arguments must share the eliminated variable"
    );
    let (pp, qq) = MultiPoly::aligned(p.poly(), q.poly());
    let vars = pp.vars().clone();
    let var = vars.index_of(p.var_name()).unwrap();
    let m = pp.degree_in(var) as usize;
    let n = qq.degree_in(var) as usize;
    if m + n == 0 {
        return Ok(MultiPoly::one(&vars));
    }
    if m + n > BAREISS_SIZE_LIMIT {
        return Ok(subresultant_prs(&pp, &qq, var));
    }
    Ok(sylvester_bareiss(&pp, &qq, var))
}

/// The resultant as the determinant of the Sylvester matrix, eliminated
/// fraction-free.
pub fn sylvester_bareiss(
    pp: &MultiPoly<Rat>,
    qq: &MultiPoly<Rat>,
    var: usize,
) -> MultiPoly<Rat> {
    let vars = pp.vars().clone();
    let m = pp.degree_in(var) as usize;
    let n = qq.degree_in(var) as usize;
    if m + n == 0 {
        return MultiPoly::one(&vars);
    }
    let pc = UniPoly::from_index(pp.clone(), var).coeffs();
    let qc = UniPoly::from_index(qq.clone(), var).coeffs();
    let size = m + n;
    let zero = MultiPoly::zero(&vars);
    let mut mat = vec![vec![zero.clone(); size]; size];
    // n rows of p's coefficients, descending, shifted
    for i in 0..n {
        for (k, c) in pc.iter().enumerate() {
            // descending: column i + (m - k)
            mat[i][i + m - k] = c.clone();
        }
    }
    // m rows of q's coefficients
    for i in 0..m {
        for (k, c) in qc.iter().enumerate() {
            mat[n + i][i + n - k] = c.clone();
        }
    }
    bareiss_det(mat, &zero)
}

/// Pseudo-remainder with the full premultiplication lc(B)^(deg A - deg B + 1).
fn prem_full(a: &MultiPoly<Rat>, b: &MultiPoly<Rat>, var: usize) -> MultiPoly<Rat> {
    let db = b.degree_in(var);
    let lb = b.coeffs_in(var)[db as usize].clone();
    let vars = a.vars().clone();
    let mut r = a.clone();
    let mut e = (a.degree_in(var) - db + 1) as i64;
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        if dr < db {
            break;
        }
        let lr = r.coeffs_in(var)[dr as usize].clone();
        let shift = MultiPoly::var_pow(&vars, var, dr - db);
        r = &(&r * &lb) - &(&(b * &lr) * &shift);
        e -= 1;
        debug_assert!(r.is_zero() || r.degree_in(var) < dr);
    }
    for _ in 0..e {
        r = &r * &lb;
    }
    r
}

/// Subresultant PRS resultant (Cohen, Algorithm 3.3.7); exact Sylvester
/// value including sign.
pub fn subresultant_prs(
    pp: &MultiPoly<Rat>,
    qq: &MultiPoly<Rat>,
    var: usize,
) -> MultiPoly<Rat> {
    let vars = pp.vars().clone();
    let (mut a, mut b) = (pp.clone(), qq.clone());
    let (da, db) = (a.degree_in(var), b.degree_in(var));
    let mut sign = Rat::one();
    if da < db {
        std::mem::swap(&mut a, &mut b);
        if (da % 2 == 1) && (db % 2 == 1) {
            sign = -sign;
        }
    }
    if b.degree_in(var) == 0 {
        // Res(A, const) = const^(deg A)
        let d = a.degree_in(var);
        let mut acc = MultiPoly::one(&vars);
        for _ in 0..d {
            acc = &acc * &b;
        }
        return acc.scale(&sign);
    }
    let mut g = MultiPoly::one(&vars);
    let mut h = MultiPoly::one(&vars);
    let mut s = sign;
    loop {
        let da = a.degree_in(var);
        let db = b.degree_in(var);
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = prem_full(&a, &b, var);
        a = b;
        // divide by g * h^delta
        let mut divisor = g.clone();
        for _ in 0..delta {
            divisor = &divisor * &h;
        }
        b = match r.exact_div(&divisor) {
            Ok(q) => q,
            Err(_) => unreachable!("subresultant division is exact"),
        };
        g = a.coeffs_in(var)[a.degree_in(var) as usize].clone();
        // h = h^(1-delta) g^delta
        h = if delta == 0 {
            h
        } else {
            let mut num = MultiPoly::one(&vars);
            for _ in 0..delta {
                num = &num * &g;
            }
            let mut den = MultiPoly::one(&vars);
            for _ in 0..delta.saturating_sub(1) {
                den = &den * &h;
            }
            num.exact_div(&den).expect("h update is exact")
        };
        if b.is_zero() {
            return MultiPoly::zero(&vars);
        }
        if b.degree_in(var) == 0 {
            // res = s * lc(B)^(deg A) / h^(deg A - 1)
            let da = a.degree_in(var) as usize;
            let mut num = MultiPoly::one(&vars);
            for _ in 0..da {
                num = &num * &b;
            }
            let mut den = MultiPoly::one(&vars);
            for _ in 0..da.saturating_sub(1) {
                den = &den * &h;
            }
            let out = num.exact_div(&den).expect("final division is exact");
            return out.scale(&s);
        }
    }
}

/// Convenience wrapper eliminating `var` from two multivariate polynomials.
pub fn resultant_in(
    p: &MultiPoly<Rat>,
    q: &MultiPoly<Rat>,
    var_name: &str,
) -> Result<MultiPoly<Rat>, PolyError> {
    let (pp, qq) = MultiPoly::aligned(p, q);
    let up = UniPoly::new(pp, var_name)?;
    let uq = UniPoly::new(qq, var_name)?;
    resultant(&up, &uq)
}

/// Fraction-free determinant. Entries must share a variable universe.
fn bareiss_det(mut mat: Vec<Vec<MultiPoly<Rat>>>, zero: &MultiPoly<Rat>) -> MultiPoly<Rat> {
    let n = mat.len();
    if n == 0 {
        return MultiPoly::one(zero.vars());
    }
    let mut sign_flip = false;
    let mut prev = MultiPoly::one(zero.vars());
    for k in 0..n - 1 {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&i| !mat[i][k].is_zero()) {
                Some(i) => {
                    mat.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return zero.clone(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&mat[k][k] * &mat[i][j]) - &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss division is exact over an integral domain");
            }
            mat[i][k] = zero.clone();
        }
        prev = mat[k][k].clone();
    }
    let det = mat[n - 1][n - 1].clone();
    if sign_flip {
        -&det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DensePoly;
    use crate::multipoly::VarSet;
    use crate::scalar::{rat_int, Rat};

    fn uni(coeffs: &[i64]) -> UniPoly<Rat> {
        UniPoly::from_dense("x", &DensePoly::from_i64(coeffs))
    }

    #[test]
    fn linear_pair() {
        // Res_x(x-1, x-2) = -1
        let r = resultant(&uni(&[-1, 1]), &uni(&[-2, 1])).unwrap();
        assert_eq!(r.constant_value(), Some(rat_int(-1)));
    }

    #[test]
    fn constant_second_argument() {
        // Res_x(x^2+1, 1) = 1
        let r = resultant(&uni(&[1, 0, 1]), &uni(&[1])).unwrap();
        assert_eq!(r.constant_value(), Some(rat_int(1)));
    }

    #[test]
    fn zero_input_rejected() {
        assert_eq!(
            resultant(&uni(&[]), &uni(&[1, 1])),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn shared_root_vanishes() {
        // Res((x-3)(x+1), (x-3)) = 0
        let p = uni(&[-3, -2, 1]);
        let q = uni(&[-3, 1]);
        assert!(resultant(&p, &q).unwrap().is_zero());
    }

    #[test]
    fn parametric_elimination() {
        // Res_x(x - a, x - b) = a - b in the Sylvester convention
        let vars = VarSet::new(vec!["x", "a", "b"]);
        let x = MultiPoly::<Rat>::var(&vars, 0);
        let a = MultiPoly::<Rat>::var(&vars, 1);
        let b = MultiPoly::<Rat>::var(&vars, 2);
        let r = resultant_in(&(&x - &a), &(&x - &b), "x").unwrap();
        assert_eq!(r, &a - &b);
    }

    #[test]
    fn degree_two_against_linear() {
        // Res_x(x^2 + 1, x - t) = t^2 + 1
        let vars = VarSet::new(vec!["x", "t"]);
        let x = MultiPoly::<Rat>::var(&vars, 0);
        let t = MultiPoly::<Rat>::var(&vars, 1);
        let p = &x.pow(2) + &MultiPoly::one(&vars);
        let q = &x - &t;
        let r = resultant_in(&p, &q, "x").unwrap();
        assert_eq!(r, &t.pow(2) + &MultiPoly::one(&vars));
    }

    #[test]
    fn matches_product_formula_small() {
        // Res(f,g) = lc(f)^deg g * prod g(root_i) for f = (x-1)(x-2) = x^2-3x+2,
        // g = x^2 - 5: g(1)*g(2) = (-4)*(-1) = 4
        let f = uni(&[2, -3, 1]);
        let g = uni(&[-5, 0, 1]);
        let r = resultant(&f, &g).unwrap();
        assert_eq!(r.constant_value(), Some(rat_int(4)));
    }
}

#[cfg(test)]
mod prs_tests {
    use super::*;
    use crate::multipoly::VarSet;
    use crate::scalar::{rat, Int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prs_equals_bareiss_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let vars = VarSet::new(vec!["x", "a"]);
        for _ in 0..60 {
            let mk = |rng: &mut ChaCha8Rng| {
                let dx = rng.gen_range(1..=4u32);
                let da = rng.gen_range(0..=1u32);
                let mut p = MultiPoly::zero(&vars);
                for ex in 0..=dx {
                    for ea in 0..=da {
                        let c = rng.gen_range(-4i64..=4);
                        if c != 0 {
                            let m = crate::monomial::Monomial::from_exponents(vec![ex, ea]);
                            p = &p
                                + &MultiPoly::from_terms(
                                    &vars,
                                    [(m, Rat::from_integer(Int::from(c)))],
                                );
                        }
                    }
                }
                p
            };
            let p = mk(&mut rng);
            let q = mk(&mut rng);
            if p.degree_in(0) == 0 || q.degree_in(0) == 0 || p.is_zero() || q.is_zero() {
                continue;
            }
            let via_bareiss = sylvester_bareiss(&p, &q, 0);
            let via_prs = subresultant_prs(&p, &q, 0);
            assert_eq!(via_bareiss, via_prs, "p = {p}, q = {q}");
        }
    }

    #[test]
    fn prs_handles_rational_coefficients() {
        let vars = VarSet::new(vec!["x"]);
        let x = MultiPoly::<Rat>::var(&vars, 0);
        // (3/2 x^2 + 1, x - 1/3): res = 3/2 * (1/3)^2 + 1 = 7/6... checked
        // against the product formula res = lc(f)^deg g * f-free form
        let f = &x.pow(2).scale(&rat(3, 2)) + &MultiPoly::one(&vars);
        let g = &x - &MultiPoly::constant(&vars, rat(1, 3));
        let rb = sylvester_bareiss(&f, &g, 0);
        let rp = subresultant_prs(&f, &g, 0);
        assert_eq!(rb, rp);
        assert_eq!(rb.constant_value(), Some(rat(7, 6)));
    }
}
