//! Successive-resultant elimination of variables from polynomial systems.

use crate::error::MapError;
use crate::multipoly::MultiPoly;
use crate::resultant::resultant_in;
use crate::scalar::Rat;

/// Eliminate the listed variables (in order) from the system by successive
/// resultants. To eliminate `v`, the lowest-degree equation containing `v`
/// is paired against every other equation containing `v`; equations not
/// containing `v` pass through. Results are reduced to primitive parts.
///
/// Errors with the failing stage when a resultant collapses to zero.
pub fn eliminate_vars(
    system: Vec<MultiPoly<Rat>>,
    elim_names: &[String],
) -> Result<Vec<MultiPoly<Rat>>, MapError> {
    let mut eqs = system;
    for name in elim_names {
        let var = match eqs
            .first()
            .and_then(|p| p.vars().index_of(name))
        {
            Some(v) => v,
            None => continue,
        };
        let (with_v, mut rest): (Vec<_>, Vec<_>) =
            eqs.into_iter().partition(|p| p.contains_var(var));
        if with_v.is_empty() {
            eqs = rest;
            continue;
        }
        let pivot_pos = with_v
            .iter()
            .enumerate()
            .min_by_key(|(_, p)| (p.degree_in(var), p.num_terms()))
            .map(|(i, _)| i)
            .unwrap();
        let pivot = with_v[pivot_pos].clone();
        for (i, other) in with_v.into_iter().enumerate() {
            if i == pivot_pos {
                continue;
            }
            let r = resultant_in(&pivot, &other, name)?;
            if r.is_zero() {
                return Err(MapError::DegenerateElimination(format!(
                    "resultant in `{name}` vanished identically"
                )));
            }
            rest.push(r.primitive_part());
        }
        eqs = rest;
    }
    Ok(eqs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::VarSet;
    use crate::scalar::rat_int;

    #[test]
    fn triangular_solve_by_elimination() {
        // {y - x, z - y, a + 2z - z^2} eliminating x then y leaves the last
        let vars = VarSet::new(vec!["x", "y", "z", "a"]);
        let x = MultiPoly::<Rat>::var(&vars, 0);
        let y = MultiPoly::<Rat>::var(&vars, 1);
        let z = MultiPoly::<Rat>::var(&vars, 2);
        let a = MultiPoly::<Rat>::var(&vars, 3);
        let sys = vec![
            &y - &x,
            &z - &y,
            &(&a + &z.scale(&rat_int(2))) - &z.pow(2),
        ];
        let out = eliminate_vars(sys, &["x".into(), "y".into()]).unwrap();
        assert_eq!(out.len(), 1);
        // the z-equation never met a resultant, so it passes through as-is
        let expect = &(&a + &z.scale(&rat_int(2))) - &z.pow(2);
        assert_eq!(out[0], expect);
    }

    #[test]
    fn degenerate_system_reports_stage() {
        let vars = VarSet::new(vec!["x", "y"]);
        let x = MultiPoly::<Rat>::var(&vars, 0);
        let y = MultiPoly::<Rat>::var(&vars, 1);
        let s = &y - &x;
        let err = eliminate_vars(vec![s.clone(), -&s], &["x".into()]).unwrap_err();
        match err {
            MapError::DegenerateElimination(msg) => assert!(msg.contains("`x`")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
