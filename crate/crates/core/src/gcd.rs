//! Multivariate polynomial gcd over the rationals.
//!
//! Primitive PRS on a chosen main variable; coefficient contents recurse on
//! fewer variables. Monomial contents are split off first so the common
//! cases (fraction reduction against a monomial denominator) are cheap.

use num_traits::Zero;

use crate::monomial::Monomial;
use crate::multipoly::MultiPoly;
use crate::scalar::Rat;

/// Primitive gcd (integer coefficients, content 1, positive leading
/// coefficient). `gcd(0, q)` is the primitive part of `q`.
pub fn multigcd(a: &MultiPoly<Rat>, b: &MultiPoly<Rat>) -> MultiPoly<Rat> {
    if a.is_zero() {
        return b.primitive_part();
    }
    if b.is_zero() {
        return a.primitive_part();
    }
    let (a, b) = MultiPoly::aligned(a, b);
    let vars = a.vars().clone();
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(&vars);
    }
    // common monomial factor
    let mono_gcd = {
        let mut g: Option<Monomial> = None;
        for (m, _) in a.terms().chain(b.terms()) {
            g = Some(match g {
                None => m.clone(),
                Some(x) => x.gcd(m),
            });
        }
        g.unwrap()
    };
    let strip = |p: &MultiPoly<Rat>| {
        if mono_gcd.is_unit() {
            p.clone()
        } else {
            MultiPoly::from_terms(
                &vars,
                p.terms()
                    .map(|(m, c)| (m.try_div(&mono_gcd).unwrap_or_else(|| m.clone()), c.clone())),
            )
        }
    };
    // strip only when it divides every term of that polynomial
    let all_div = |p: &MultiPoly<Rat>| p.terms().all(|(m, _)| m.try_div(&mono_gcd).is_some());
    let (a2, b2, common_mono) = if !mono_gcd.is_unit() && all_div(&a) && all_div(&b) {
        (strip(&a), strip(&b), Some(mono_gcd))
    } else {
        (a.clone(), b.clone(), None)
    };

    let shared: Vec<usize> = (0..vars.len())
        .filter(|&i| a2.contains_var(i) && b2.contains_var(i))
        .collect();
    let core = if shared.is_empty() {
        MultiPoly::one(&vars)
    } else {
        // main variable: smallest worst-case degree keeps the PRS short
        let main = *shared
            .iter()
            .min_by_key(|&&i| a2.degree_in(i).max(b2.degree_in(i)))
            .unwrap();
        prs_gcd(&a2, &b2, main)
    };
    let out = match common_mono {
        Some(m) => core.mul_monomial(&m, &Rat::from_integer(1.into())),
        None => core,
    };
    out.primitive_part()
}

fn coeff_content(coeffs: &[MultiPoly<Rat>]) -> MultiPoly<Rat> {
    let mut g = MultiPoly::zero(coeffs[0].vars());
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        g = multigcd(&g, c);
        if g.is_constant() {
            break;
        }
    }
    if g.is_zero() {
        MultiPoly::one(coeffs[0].vars())
    } else {
        g
    }
}

fn primitive_wrt(p: &MultiPoly<Rat>, var: usize) -> (MultiPoly<Rat>, MultiPoly<Rat>) {
    let coeffs = p.coeffs_in(var);
    let cont = coeff_content(&coeffs);
    let prim = p.exact_div(&cont).expect("content divides");
    (prim, cont)
}

/// Pseudo-remainder of `f` by `g` in `var` (premultiplied by a power of
/// `lc(g)` so the division stays polynomial). Requires `deg_var(g) >= 1`.
fn prem(f: &MultiPoly<Rat>, g: &MultiPoly<Rat>, var: usize) -> MultiPoly<Rat> {
    let dg = g.degree_in(var);
    debug_assert!(dg >= 1);
    let g_coeffs = g.coeffs_in(var);
    let lg = &g_coeffs[dg as usize];
    let vars = f.vars().clone();
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(var) >= dg {
        let dr = r.degree_in(var);
        let lr = r.coeffs_in(var)[dr as usize].clone();
        let shift = MultiPoly::var_pow(&vars, var, dr - dg);
        r = &(&r * lg) - &(&(g * &lr) * &shift);
        debug_assert!(r.is_zero() || r.degree_in(var) < dr);
    }
    r
}

fn prs_gcd(a: &MultiPoly<Rat>, b: &MultiPoly<Rat>, var: usize) -> MultiPoly<Rat> {
    let (pa, ca) = primitive_wrt(a, var);
    let (pb, cb) = primitive_wrt(b, var);
    let cont_gcd = multigcd(&ca, &cb);
    let (mut f, mut g) = if pa.degree_in(var) >= pb.degree_in(var) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let r = prem(&f, &g, var);
        if r.is_zero() {
            break;
        }
        if r.degree_in(var) == 0 {
            // coprime in the main variable
            g = MultiPoly::one(f.vars());
            break;
        }
        let (rp, _) = primitive_wrt(&r, var);
        f = g;
        g = rp;
    }
    let g_prim = if g.is_constant() {
        MultiPoly::one(f.vars())
    } else {
        primitive_wrt(&g, var).0
    };
    &cont_gcd * &g_prim
}

/// Reduce a fraction `num/den`: divide by the polynomial gcd, make the
/// denominator primitive with positive leading coefficient.
pub fn reduce_fraction(
    num: &MultiPoly<Rat>,
    den: &MultiPoly<Rat>,
) -> (MultiPoly<Rat>, MultiPoly<Rat>) {
    assert!(!den.is_zero(), "zero denominator");
    let (num, den) = MultiPoly::aligned(num, den);
    if num.is_zero() {
        return (num, MultiPoly::one(den.vars()));
    }
    let g = multigcd(&num, &den);
    let (mut n, mut d) = if g.is_constant() {
        (num, den)
    } else {
        (
            num.exact_div(&g).expect("gcd divides"),
            den.exact_div(&g).expect("gcd divides"),
        )
    };
    let c = d.signed_content();
    if !c.is_zero() {
        d = d.map_coeffs(|x| x / &c);
        n = n.map_coeffs(|x| x / &c);
    }
    (n, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::VarSet;
    use crate::scalar::rat_int;

    fn setup() -> (VarSet, MultiPoly<Rat>, MultiPoly<Rat>) {
        let vars = VarSet::new(vec!["x", "y"]);
        let x = MultiPoly::var(&vars, 0);
        let y = MultiPoly::var(&vars, 1);
        (vars, x, y)
    }

    #[test]
    fn univariate_case() {
        let (vars, x, _) = setup();
        let one = MultiPoly::one(&vars);
        // gcd(x^2-1, x^2-2x+1) = x-1
        let p = &x.pow(2) - &one;
        let q = &(&x.pow(2) - &x.scale(&rat_int(2))) + &one;
        assert_eq!(multigcd(&p, &q), &x - &one);
    }

    #[test]
    fn bivariate_common_factor() {
        let (vars, x, y) = setup();
        let one = MultiPoly::one(&vars);
        let f = &x + &y; // common
        let p = &f * &(&x - &one);
        let q = &f * &(&y + &one);
        assert_eq!(multigcd(&p, &q), f);
    }

    #[test]
    fn coprime_gives_one() {
        let (vars, x, y) = setup();
        assert_eq!(multigcd(&x, &y), MultiPoly::one(&vars));
    }

    #[test]
    fn monomial_content() {
        let (_, x, y) = setup();
        // gcd(x^2 y, x y^2) = x y
        let p = &x.pow(2) * &y;
        let q = &x * &y.pow(2);
        assert_eq!(multigcd(&p, &q), &x * &y);
    }

    #[test]
    fn fraction_reduction() {
        let (vars, x, y) = setup();
        let one = MultiPoly::one(&vars);
        // (x^2-1)*y / ((x+1)*y) -> (x-1, 1) after full reduction
        let num = &(&x.pow(2) - &one) * &y;
        let den = &(&x + &one) * &y;
        let (n, d) = reduce_fraction(&num, &den);
        assert_eq!(n, &x - &one);
        assert_eq!(d, one);
    }

    #[test]
    fn denominator_sign_normalized() {
        let (vars, x, _) = setup();
        let num = MultiPoly::one(&vars);
        let den = x.scale(&rat_int(-2));
        let (n, d) = reduce_fraction(&num, &den);
        assert_eq!(d, x);
        assert_eq!(n, MultiPoly::constant(&vars, crate::scalar::rat(-1, 2)));
    }
}
