//! Decision pipelines for excluding meromorphic first integrals: the planar
//! eliminant/cyclotomic-resultant battery, its fast paths, the planar
//! classification lemma, and the n-dimensional elimination pipeline.

pub mod ndim;
pub mod planar;

use serde::{Deserialize, Serialize};

use crate::dense::DensePoly;
use crate::cyclo::{indices_with_cos_degree_at_most, min_poly_cos};
use crate::error::MapError;
use crate::map::parse::ParamConstraint;
use crate::map::RationalMap;
use crate::resultant::resultant;
use crate::scalar::Rat;
use crate::unipoly::UniPoly;

/// Outcome of an obstruction pipeline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    /// Certified: no meromorphic first integral can exist.
    Excluded,
    /// A finite set of parameter values survives every filter.
    CandidateParams(Vec<String>),
    /// The surviving cyclotomic indices (necessary-condition matches).
    CandidateIndices(Vec<u64>),
    /// Hypothesis failure or degenerate elimination; nothing is claimed.
    Inconclusive(String),
}

impl Verdict {
    pub fn candidate_params(values: &[Rat]) -> Verdict {
        Verdict::CandidateParams(values.iter().map(|v| v.to_string()).collect())
    }

    pub fn is_excluded(&self) -> bool {
        matches!(self, Verdict::Excluded)
    }
}

/// One replayable certificate entry: a named polynomial or value, rendered
/// canonically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub label: String,
    pub value: String,
}

impl CertificateEntry {
    pub fn new(label: impl Into<String>, value: impl ToString) -> Self {
        CertificateEntry {
            label: label.into(),
            value: value.to_string(),
        }
    }
}

/// A verdict with its replayable certificate trail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionVerdict {
    pub kind: Verdict,
    pub certificate: Vec<CertificateEntry>,
}

/// Result of a cyclotomic-resultant battery run.
#[derive(Clone, Debug)]
pub struct BatteryOutcome {
    /// Indices whose cos-minimal-polynomial resultant vanished.
    pub hits: Vec<u64>,
    /// Certificate entries: one resultant value per index tried.
    pub entries: Vec<CertificateEntry>,
    /// The battery polynomials tried, in index order.
    pub polynomials: Vec<(u64, DensePoly)>,
}

/// Run the resultant battery of a univariate factor against every minimal
/// polynomial of cos(2 pi n/p) with degree at most deg(factor). The battery
/// is regenerated from the totient sweep, never hard-coded.
pub fn cos_minpoly_battery(factor: &DensePoly, label: &str) -> BatteryOutcome {
    let k = factor.degree().unwrap_or(0) as u32;
    let mut hits = Vec::new();
    let mut entries = Vec::new();
    let mut polynomials = Vec::new();
    if k == 0 {
        return BatteryOutcome {
            hits,
            entries,
            polynomials,
        };
    }
    let fu = UniPoly::from_dense("v", factor);
    for p in indices_with_cos_degree_at_most(k).indices {
        let mp = min_poly_cos(p);
        if mp.degree() as u32 > k {
            continue;
        }
        let mu = UniPoly::from_dense("v", &mp.poly);
        let r = resultant(&fu, &mu).expect("nonzero battery inputs");
        let rv = r.constant_value().expect("univariate resultant is constant");
        entries.push(CertificateEntry::new(
            format!("{label}: res(selected_factor, cos_minpoly[p={p}])"),
            rv.to_string(),
        ));
        polynomials.push((p, mp.poly.clone()));
        if num_traits::Zero::is_zero(&rv) {
            hits.push(p);
        }
    }
    BatteryOutcome {
        hits,
        entries,
        polynomials,
    }
}

/// Aggregated analysis of one map: per-fixed-point outcomes and a combined
/// verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapAnalysis {
    pub fixed_points: Vec<FixedPointOutcome>,
    pub verdict: Verdict,
    pub certificate: Vec<CertificateEntry>,
}

/// Outcome of the pipeline at one fixed point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixedPointOutcome {
    /// Rendered coordinates (exact rationals or isolating intervals).
    pub point: Vec<String>,
    pub hypothesis_checks: Vec<HypothesisCheck>,
    pub verdict: Verdict,
    pub certificate: Vec<CertificateEntry>,
}

/// A certified sign/hypothesis check at a fixed point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub outcome: String,
    pub holds: bool,
}

/// Top-level dispatch: planar maps go through the eliminant battery (with
/// the parametric variant when one parameter is present), higher dimensions
/// through the successive-resultant pipeline.
pub fn analyze(
    map: &RationalMap,
    constraint: Option<&ParamConstraint>,
    factor_budget: u32,
) -> Result<MapAnalysis, MapError> {
    match (map.n(), map.params().len()) {
        (2, 0) => planar::analyze_planar(map, factor_budget),
        (2, 1) => planar::analyze_planar_parametric(map, constraint, factor_budget),
        (_, 0) | (_, 1) => ndim::analyze_ndim(map, constraint, factor_budget),
        (_, k) => Ok(MapAnalysis {
            fixed_points: Vec::new(),
            verdict: Verdict::Inconclusive(format!(
                "{k} free parameters: obstruction polynomials are reported, \
                 no finite candidate extraction"
            )),
            certificate: Vec::new(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DensePoly;

    #[test]
    fn battery_for_degree_three_has_thirteen_polynomials() {
        // the degree <= 3 battery must regenerate the complete list of
        // thirteen integer polynomials with a cos(2 pi n/p) root
        let u3 = DensePoly::from_i64(&[4874, 15650, 16607, 5833]);
        let out = cos_minpoly_battery(&u3, "t");
        assert_eq!(out.polynomials.len(), 13);
        let expect: Vec<(u64, DensePoly)> = vec![
            (1, DensePoly::from_i64(&[-1, 1])),
            (2, DensePoly::from_i64(&[1, 1])),
            (3, DensePoly::from_i64(&[1, 2])),
            (4, DensePoly::from_i64(&[0, 1])),
            (5, DensePoly::from_i64(&[-1, 2, 4])),
            (6, DensePoly::from_i64(&[-1, 2])),
            (7, DensePoly::from_i64(&[-1, -4, 4, 8])),
            (8, DensePoly::from_i64(&[-1, 0, 2])),
            (9, DensePoly::from_i64(&[1, -6, 0, 8])),
            (10, DensePoly::from_i64(&[-1, -2, 4])),
            (12, DensePoly::from_i64(&[-3, 0, 4])),
            (14, DensePoly::from_i64(&[1, -4, -4, 8])),
            (18, DensePoly::from_i64(&[-1, -6, 0, 8])),
        ];
        assert_eq!(out.polynomials, expect);
        // all thirteen resultants nonzero for this factor
        assert!(out.hits.is_empty());
    }
}
