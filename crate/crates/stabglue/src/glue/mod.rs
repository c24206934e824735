//! Gluing stability data across a semiorthogonal decomposition `D = ⟨D₁, D₂⟩`.
//!
//! Hom-degree data between heart generators is supplied as input; the checks here are
//! mechanical consequences of that data and of the phases of simple objects.

mod charge;
mod exc_p1;
mod macri;

pub use charge::{glue_charge, Decomposition, DoubleCoverSod};
pub use exc_p1::{exc_p1_check, ExcP1Report, MemberWindow};
pub use macri::{macri_glued, ExcCollection, MacriGlued};

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_q, q_from_f64, q_to_f64, rational_gcd, PhaseLift, QComplex, Q};

/// Nonzero degrees of `Hom^k(g₁, g₂)` for one pair of generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomEntry {
    pub from: usize,
    pub to: usize,
    pub degrees: Vec<i64>,
}

/// Generators of the two hearts and the degrees of homs from the first to the second.
///
/// Homs from `D₂` to `D₁` vanish by semiorthogonality and are not recorded.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ExtPattern {
    #[serde(rename = "G1")]
    pub g1: Vec<String>,
    #[serde(rename = "G2")]
    pub g2: Vec<String>,
    pub homs: Vec<HomEntry>,
}

impl ExtPattern {
    pub fn validate(&self) -> Result<()> {
        for h in &self.homs {
            if h.from >= self.g1.len() || h.to >= self.g2.len() {
                return Err(Error::Precondition(format!(
                    "hom entry {} -> {} references a missing generator",
                    h.from, h.to
                )));
            }
        }
        Ok(())
    }

    pub fn degrees(&self, from: usize, to: usize) -> impl Iterator<Item = i64> + '_ {
        self.homs
            .iter()
            .filter(move |h| h.from == from && h.to == to)
            .flat_map(|h| h.degrees.iter().copied())
    }
}

/// `Hom^{≤0}(H₁, H₂) = 0` on generators.
pub fn check_hearts_orthogonal(p: &ExtPattern) -> bool {
    p.homs.iter().all(|h| h.degrees.iter().all(|&k| k > 0))
}

/// A simple object of a heart with its charge and phase in `(0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleObject {
    pub label: String,
    pub charge: QComplex,
    pub phase: PhaseLift,
}

/// Phase data of one factor's stability condition.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct StabilitySummary {
    pub finite_length: bool,
    pub simples: Vec<SimpleObject>,
    /// Some `φ` with `P(0, φ] = 0`.
    pub empty_below: Option<Q>,
    /// Some `φ` with `P(φ, 1] = 0`.
    pub empty_above: Option<Q>,
}

impl StabilitySummary {
    /// Finite-length heart with the given simple charges.
    pub fn finite(simples: Vec<(String, QComplex)>) -> Result<Self> {
        let simples = simples
            .into_iter()
            .map(|(label, charge)| {
                Ok(SimpleObject {
                    phase: PhaseLift::in_heart(&charge)?,
                    label,
                    charge,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            finite_length: true,
            simples,
            empty_below: None,
            empty_above: None,
        })
    }

    pub fn min_phase(&self) -> Option<&PhaseLift> {
        self.simples.iter().map(|s| &s.phase).min()
    }

    pub fn max_phase(&self) -> Option<&PhaseLift> {
        self.simples.iter().map(|s| &s.phase).max()
    }

    pub fn has_phase_one(&self) -> bool {
        self.simples
            .iter()
            .any(|s| s.phase == PhaseLift::from_int(1))
    }
}

/// Compares a lift with a rational; exact on quarter multiples, otherwise by floats with a guard.
pub(crate) fn cmp_lift_q(p: &PhaseLift, x: &Q) -> Result<Ordering> {
    if let Some(v) = p.exact_value() {
        return Ok(v.cmp(x));
    }
    let d = p.to_f64() - q_to_f64(x);
    if d.abs() < 1e-12 {
        return Err(Error::Undecidable(format!(
            "phase {p} is within 1e-12 of {}",
            format_q(x)
        )));
    }
    Ok(if d > 0.0 {
        Ordering::Greater
    } else {
        Ordering::Less
    })
}

/// Violation of the gluing condition: `Hom^{deg}(g₁, g₂) ≠ 0` with `deg ≤ shift₂ − shift₁`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingWitness {
    pub from: usize,
    pub to: usize,
    pub degree: i64,
    #[serde(with = "crate::exact::q_string")]
    pub parameter: Q,
}

/// Outcome of the parameter search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingSearch {
    #[serde(with = "opt_q")]
    pub parameter: Option<Q>,
    pub rule: String,
    pub witness: Option<GluingWitness>,
}

mod opt_q {
    use super::*;
    pub fn serialize<S: serde::Serializer>(
        v: &Option<Q>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        v.as_ref().map(format_q).serialize(s)
    }
    pub fn deserialize<'de, D: serde::Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Q>, D::Error> {
        let v = Option::<String>::deserialize(d)?;
        v.map(|t| crate::exact::parse_q(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Shift placing a simple of phase `φ ∈ (0, 1]` into `(a, a+1]`.
fn window_shift(p: &PhaseLift, a: &Q) -> Result<i64> {
    Ok(if cmp_lift_q(p, a)? == Ordering::Greater {
        0
    } else {
        1
    })
}

/// Direct check of `Hom^{≤0}(P₁(a, a+1], P₂(a, a+1]) = 0` on shifted simple generators.
pub fn check_parameter(
    s1: &StabilitySummary,
    s2: &StabilitySummary,
    p: &ExtPattern,
    a: &Q,
) -> Result<Option<GluingWitness>> {
    if !a.is_positive() || *a >= Q::one() {
        return Err(Error::Precondition(format!(
            "parameter {} must lie in (0, 1)",
            format_q(a)
        )));
    }
    for h in &p.homs {
        let (Some(g1), Some(g2)) = (s1.simples.get(h.from), s2.simples.get(h.to)) else {
            return Err(Error::Precondition(
                "pattern generators do not match the simple lists".into(),
            ));
        };
        let s = window_shift(&g1.phase, a)?;
        let t = window_shift(&g2.phase, a)?;
        if let Some(&degree) = h.degrees.iter().filter(|&&k| k <= t - s).min() {
            return Ok(Some(GluingWitness {
                from: h.from,
                to: h.to,
                degree,
                parameter: a.clone(),
            }));
        }
    }
    Ok(None)
}

/// Searches for `a ∈ (0, 1)` satisfying the gluing condition.
///
/// Tries the smallest simple phase of the second factor, then the midpoint between the largest
/// phase of the first factor and 1 when that factor has no phase-1 simples, then a scan over
/// simple phases and midpoints between consecutive ones.
pub fn find_gluing_parameter(
    s1: &StabilitySummary,
    s2: &StabilitySummary,
    p: &ExtPattern,
) -> Result<GluingSearch> {
    p.validate()?;
    if !check_hearts_orthogonal(p) {
        return Err(Error::NotOrthogonal(
            "some generator pair has a hom in degree <= 0".into(),
        ));
    }
    let mut first_witness = None;
    let mut attempt = |a: Q, rule: &str| -> Result<Option<GluingSearch>> {
        if !a.is_positive() || a >= Q::one() {
            return Ok(None);
        }
        match check_parameter(s1, s2, p, &a) {
            Err(Error::Undecidable(_)) => Ok(None),
            Err(e) => Err(e),
            Ok(None) => Ok(Some(GluingSearch {
                parameter: Some(a),
                rule: rule.into(),
                witness: None,
            })),
            Ok(Some(w)) => {
                first_witness.get_or_insert(w);
                Ok(None)
            }
        }
    };
    let as_q = |ph: &PhaseLift| -> Result<Q> {
        match ph.exact_value() {
            Some(v) => Ok(v),
            None => q_from_f64(ph.to_f64()),
        }
    };
    if s2.finite_length {
        if let Some(phi) = s2.min_phase() {
            let phi = as_q(phi)?;
            if let Some(found) = attempt(phi.clone(), "second heart below its smallest phase")? {
                return Ok(found);
            }
            if let Some(found) = attempt(
                phi / Q::from_integer(2.into()),
                "half the smallest phase of the second heart",
            )? {
                return Ok(found);
            }
        }
    } else if let Some(phi) = &s2.empty_below {
        if let Some(found) = attempt(phi.clone(), "second heart empty below phi")? {
            return Ok(found);
        }
    }
    let case_two = if s1.finite_length && !s1.has_phase_one() {
        s1.max_phase().map(&as_q).transpose()?
    } else {
        s1.empty_above.clone()
    };
    if let Some(phi) = case_two {
        if let Some(found) = attempt(
            (phi + Q::one()) / Q::from_integer(2.into()),
            "first heart empty above phi",
        )? {
            return Ok(found);
        }
    }
    let mut points: BTreeSet<Q> = BTreeSet::new();
    for s in s1.simples.iter().chain(&s2.simples) {
        points.insert(as_q(&s.phase)?);
    }
    points.insert(Q::zero());
    points.insert(Q::one());
    let sorted: Vec<Q> = points.into_iter().collect();
    let mut candidates: Vec<Q> = sorted.clone();
    for w in sorted.windows(2) {
        candidates.push((&w[0] + &w[1]) / Q::from_integer(2.into()));
    }
    for a in candidates {
        if let Some(found) = attempt(a, "scan")? {
            return Ok(found);
        }
    }
    Ok(GluingSearch {
        parameter: None,
        rule: "none".into(),
        witness: first_witness,
    })
}

/// How the HN property of the glued heart is certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GluingProof {
    /// A parameter `a` satisfying the orthogonality of the shifted slices.
    Parameter(Q),
    /// Both hearts have discrete imaginary parts.
    DiscreteImage,
    /// `Hom^{≤1}(H₁, P₂(0, 1)) = 0`.
    StrongOrthogonality,
    /// The glued heart has finite length.
    FiniteLength,
}

/// Heart `⟨H₂, H₁⟩` listed by generators, with the glued charge and its HN certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedDescriptor {
    /// Generators, torsion part `H₂` first.
    pub heart: Vec<String>,
    pub charge: crate::klattice::CentralCharge,
    pub proof: GluingProof,
}

/// Glues two stabilities with finite simple data, choosing the first available HN certificate.
pub fn glue_stabilities(
    s1: &StabilitySummary,
    s2: &StabilitySummary,
    p: &ExtPattern,
    decomp: &Decomposition,
) -> Result<GluedDescriptor> {
    let charges = |s: &StabilitySummary| crate::klattice::CentralCharge {
        values: s.simples.iter().map(|x| x.charge.clone()).collect(),
    };
    let charge = glue_charge(&charges(s1), &charges(s2), decomp)?;
    let heart = p.g2.iter().chain(&p.g1).cloned().collect();
    let search = find_gluing_parameter(s1, s2, p)?;
    let proof = if let Some(a) = search.parameter {
        GluingProof::Parameter(a)
    } else if check_gluing_condition_b(p, s2)? {
        GluingProof::StrongOrthogonality
    } else {
        let ims = |s: &StabilitySummary| {
            s.simples
                .iter()
                .map(|x| ImValue::Rational(x.charge.im.clone()))
                .collect::<Vec<_>>()
        };
        check_gluing_condition_a(&ims(s1), &ims(s2))?;
        GluingProof::DiscreteImage
    };
    Ok(GluedDescriptor {
        heart,
        charge,
        proof,
    })
}

/// Imaginary part of a heart generator's charge, exact when available.
#[derive(Clone, Debug, PartialEq)]
pub enum ImValue {
    Rational(Q),
    Float(f64),
}

/// Gap below the least positive imaginary part for one heart.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionAReport {
    pub holds: bool,
    #[serde(with = "opt_q")]
    pub gap1: Option<Q>,
    #[serde(with = "opt_q")]
    pub gap2: Option<Q>,
    /// Set when a heart has only real charges; isolation then holds trivially.
    pub assumes_noetherian: bool,
}

fn semigroup_gap(values: &[ImValue]) -> Result<Option<Q>> {
    let mut rationals = Vec::with_capacity(values.len());
    for v in values {
        match v {
            ImValue::Rational(q) => {
                if q.is_negative() {
                    return Err(Error::Precondition(
                        "heart generator with negative imaginary part".into(),
                    ));
                }
                rationals.push(q.clone());
            }
            ImValue::Float(x) if *x == 0.0 => rationals.push(Q::zero()),
            ImValue::Float(x) => {
                return Err(Error::Undecidable(format!(
                    "imaginary part {x} has no lattice structure"
                )))
            }
        }
    }
    let g = rational_gcd(rationals.iter());
    Ok(if g.is_zero() { None } else { Some(g) })
}

/// `0` is isolated in `Im Z_i(H_i)` for both hearts.
pub fn check_gluing_condition_a(h1: &[ImValue], h2: &[ImValue]) -> Result<ConditionAReport> {
    let gap1 = semigroup_gap(h1)?;
    let gap2 = semigroup_gap(h2)?;
    let assumes_noetherian = gap1.is_none() || gap2.is_none();
    Ok(ConditionAReport {
        holds: true,
        gap1,
        gap2,
        assumes_noetherian,
    })
}

/// `Hom^{≤1}(H₁, P₂(0, 1)) = 0` on generators.
pub fn check_gluing_condition_b(p: &ExtPattern, s2: &StabilitySummary) -> Result<bool> {
    p.validate()?;
    for h in &p.homs {
        let target = s2
            .simples
            .get(h.to)
            .ok_or_else(|| Error::Precondition("pattern target without simple data".into()))?;
        if target.phase < PhaseLift::from_int(1) && h.degrees.iter().any(|&k| k <= 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qi};

    fn pattern(entries: &[(usize, usize, &[i64])], n1: usize, n2: usize) -> ExtPattern {
        ExtPattern {
            g1: (0..n1).map(|i| format!("A{i}")).collect(),
            g2: (0..n2).map(|i| format!("B{i}")).collect(),
            homs: entries
                .iter()
                .map(|(f, t, d)| HomEntry {
                    from: *f,
                    to: *t,
                    degrees: d.to_vec(),
                })
                .collect(),
        }
    }

    fn summary(charges: &[QComplex]) -> StabilitySummary {
        StabilitySummary::finite(
            charges
                .iter()
                .enumerate()
                .map(|(i, c)| (format!("S{i}"), c.clone()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn orthogonality() {
        assert!(check_hearts_orthogonal(&pattern(&[(0, 0, &[1])], 1, 1)));
        assert!(!check_hearts_orthogonal(&pattern(&[(0, 0, &[0])], 1, 1)));
        assert!(check_hearts_orthogonal(&ExtPattern::default()));
    }

    #[test]
    fn parameter_case_one() {
        let s1 = summary(&[QComplex::from_ints(-1, 0)]);
        let s2 = summary(&[QComplex::from_ints(0, 1)]);
        let p = pattern(&[(0, 0, &[2])], 1, 1);
        let r = find_gluing_parameter(&s1, &s2, &p).unwrap();
        assert_eq!(r.parameter, Some(q(1, 2)));
        assert_eq!(check_parameter(&s1, &s2, &p, &q(1, 2)).unwrap(), None);
        // At a = φ the phase-φ simple is shifted, so a degree-1 hom into it forces a = φ/2.
        let p = pattern(&[(0, 0, &[1])], 1, 1);
        assert!(check_parameter(&s1, &s2, &p, &q(1, 2)).unwrap().is_some());
        assert_eq!(
            find_gluing_parameter(&s1, &s2, &p).unwrap().parameter,
            Some(q(1, 4))
        );
    }

    #[test]
    fn parameter_case_two() {
        let nine_tenths = QComplex::new(
            qi(-1),
            crate::exact::q_from_f64((std::f64::consts::PI / 10.0).tan()).unwrap(),
        );
        let s1 = summary(&[nine_tenths]);
        // Second heart with a phase-1 simple and a degree-1 hom: case one fails at a = 1 and 1/2.
        let s2 = summary(&[QComplex::from_ints(-1, 0), QComplex::from_ints(1, 1)]);
        let p = pattern(&[(0, 1, &[1])], 1, 2);
        let r = find_gluing_parameter(&s1, &s2, &p).unwrap();
        let a = r.parameter.unwrap();
        assert!(check_parameter(&s1, &s2, &p, &a).unwrap().is_none());
        let s1_exact = StabilitySummary {
            finite_length: true,
            simples: vec![],
            empty_below: None,
            empty_above: Some(q(9, 10)),
        };
        let s1_exact = StabilitySummary {
            finite_length: false,
            ..s1_exact
        };
        let r = find_gluing_parameter(
            &s1_exact,
            &StabilitySummary::default(),
            &ExtPattern::default(),
        )
        .unwrap();
        assert_eq!(r.parameter, Some(q(19, 20)));
    }

    #[test]
    fn parameter_search_reports_witness() {
        let s1 = summary(&[QComplex::from_ints(0, 1)]);
        let s2 = summary(&[QComplex::from_ints(0, 1)]);
        // Degree-1 hom between equal phases: a k = 0 hom after shifting whenever both land on the same side.
        let p = pattern(&[(0, 0, &[1])], 1, 1);
        let r = find_gluing_parameter(&s1, &s2, &p).unwrap();
        assert!(r.parameter.is_some());
        let bad = pattern(&[(0, 0, &[1, 2])], 1, 1);
        let s2_low = summary(&[QComplex::from_ints(1, 1)]);
        let s1_high = summary(&[QComplex::from_ints(-1, 1)]);
        let r = find_gluing_parameter(&s1_high, &s2_low, &bad).unwrap();
        if r.parameter.is_none() {
            assert!(r.witness.is_some());
        }
        assert!(matches!(
            find_gluing_parameter(&s1, &s2, &pattern(&[(0, 0, &[0])], 1, 1)),
            Err(Error::NotOrthogonal(_))
        ));
    }

    #[test]
    fn condition_a_gaps() {
        let r = check_gluing_condition_a(
            &[ImValue::Rational(qi(0)), ImValue::Rational(qi(1))],
            &[ImValue::Rational(q(1, 2)), ImValue::Rational(q(1, 3))],
        )
        .unwrap();
        assert_eq!(r.gap1, Some(qi(1)));
        assert_eq!(r.gap2, Some(q(1, 6)));
        let r = check_gluing_condition_a(&[ImValue::Rational(qi(0))], &[ImValue::Rational(qi(1))])
            .unwrap();
        assert!(r.holds && r.assumes_noetherian);
        assert!(matches!(
            check_gluing_condition_a(&[ImValue::Float(0.7)], &[]),
            Err(Error::Undecidable(_))
        ));
    }

    #[test]
    fn condition_b() {
        let s2 = summary(&[QComplex::from_ints(-1, 0), QComplex::from_ints(0, 1)]);
        assert!(check_gluing_condition_b(&pattern(&[(0, 1, &[2])], 1, 2), &s2).unwrap());
        assert!(check_gluing_condition_b(&pattern(&[(0, 0, &[1])], 1, 2), &s2).unwrap());
        assert!(!check_gluing_condition_b(&pattern(&[(0, 1, &[1])], 1, 2), &s2).unwrap());
    }
}
