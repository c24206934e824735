use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{cmp_lift_q, glue_charge, Decomposition, ExcCollection, HomEntry};
use crate::doublecover::{
    build_stability, classify_in_u, GlobalObject, GlobalStability, GlobalSummand, GlobalTerm,
    PointClass,
};
use crate::error::{Error, Result};
use crate::exact::{det2, PhaseLift, Q};
use crate::klattice::{CentralCharge, KClass, RotatedCharge};
use crate::local_stab::Status;

/// Phase range of one collection member in the unrotated stability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemberWindow {
    pub label: String,
    pub lower: f64,
    pub lower_open: bool,
    pub upper: f64,
    pub upper_open: bool,
    pub inside: bool,
}

/// Outcome of checking that a small rotation is glued from the exceptional collection
/// `(π*O(N)[1], π*O(N+1), O_p1[−1], …, O_pn[−1])`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcP1Report {
    #[serde(with = "crate::exact::q_string")]
    pub turn: Q,
    /// `Im Z_a(O_p) < 0` at every point; false flags a rotation that is too large.
    pub points_below: bool,
    /// `N` with `Im Z_a(π*O(N)) < 0 < Im Z_a(π*O(N+1))`.
    pub index: Option<i64>,
    pub collection: ExcCollection,
    /// Member classes in the caller's lattice frame.
    pub classes: Vec<KClass>,
    /// Whether each rotated member charge lies in the upper half-plane or on `R<0`.
    pub rotated_in_heart: Vec<bool>,
    /// The charge glued from the member values equals the rotated charge.
    pub charge_matches: bool,
    /// Member phase ranges against `(−1 + a, 2 + a]`.
    pub windows: Vec<MemberWindow>,
    pub holds: bool,
}

fn pullback_class(n: usize, m: i64) -> KClass {
    KClass::pullback(n, 1, m)
}

fn find_index(rot: &RotatedCharge, n: usize) -> Result<Option<i64>> {
    let (_, ox_i) = rot.value_f64(&KClass::structure_sheaf(n))?;
    let (_, v_i) = rot.value_f64(&KClass::fiber(n))?;
    if v_i <= 0.0 {
        return Ok(None);
    }
    let mut m = (-ox_i / v_i).floor() as i64;
    for _ in 0..64 {
        let here = rot.im_sign(&pullback_class(n, m))?;
        let next = rot.im_sign(&pullback_class(n, m + 1))?;
        match (here, next) {
            (Ordering::Less, Ordering::Greater) => return Ok(Some(m)),
            (Ordering::Less, Ordering::Less) => m += 1,
            (Ordering::Greater, _) => m -= 1,
            _ => return Ok(None),
        }
    }
    Ok(None)
}

fn window(
    label: String,
    lower: &PhaseLift,
    lower_open: bool,
    upper: &PhaseLift,
    upper_open: bool,
    a: &Q,
) -> Result<MemberWindow> {
    let lo = a - Q::one();
    let hi = a + Q::from_integer(2.into());
    let above = match cmp_lift_q(lower, &lo)? {
        Ordering::Greater => true,
        Ordering::Equal => lower_open,
        Ordering::Less => false,
    };
    let below = cmp_lift_q(upper, &hi)? != Ordering::Greater;
    Ok(MemberWindow {
        label,
        lower: lower.to_f64(),
        lower_open,
        upper: upper.to_f64(),
        upper_open,
        inside: above && below,
    })
}

/// Checks the exceptional-collection description of `R_{−a}σ` for genus-0 base curves.
pub fn exc_p1_check(sigma: &GlobalStability, a: &Q) -> Result<ExcP1Report> {
    if sigma.geometry.genus_y != 0 {
        return Err(Error::Precondition(
            "the exceptional collection needs a rational base curve".into(),
        ));
    }
    if !a.is_positive() || *a >= Q::one() {
        return Err(Error::Precondition(
            "rotation must satisfy 0 < a < 1".into(),
        ));
    }
    let geom = sigma.geometry;
    let n = geom.n;
    for i in 0..n {
        if det2(sigma.charge.point(i), sigma.charge.fiber()).is_zero() {
            return Err(Error::Precondition(format!(
                "Z(O_p{0}) and Z(O_2p{0}) are linearly dependent",
                i + 1
            )));
        }
    }
    let classified = classify_in_u(&sigma.charge, &geom)?;
    if classified
        .partition
        .points
        .iter()
        .any(|p| *p != PointClass::Plus(1))
    {
        return Err(Error::Precondition(
            "normalized stability is not of the form I⁺ = all, n_i = 1".into(),
        ));
    }
    let zn = classified.normalized.clone();
    let base = build_stability(&zn, &classified.partition, &geom)?;
    let rot = RotatedCharge::new(&zn, a);

    let mut points_below = true;
    for i in 0..n {
        if rot.im_sign(&KClass::point(n, i))? != Ordering::Less {
            points_below = false;
        }
    }
    let index = find_index(&rot, n)?;
    let big_n = index.unwrap_or(0);

    let mut labels = vec![format!("π*O({big_n})[1]"), format!("π*O({})", big_n + 1)];
    let mut members = vec![-&pullback_class(n, big_n), pullback_class(n, big_n + 1)];
    let mut homs = Vec::new();
    for i in 0..n {
        labels.push(format!("O_p{}[-1]", i + 1));
        members.push(-&KClass::point(n, i));
        homs.push(HomEntry {
            from: 0,
            to: 2 + i,
            degrees: vec![2],
        });
        homs.push(HomEntry {
            from: 1,
            to: 2 + i,
            degrees: vec![1],
        });
    }
    homs.insert(
        0,
        HomEntry {
            from: 0,
            to: 1,
            degrees: vec![1],
        },
    );
    let collection = ExcCollection::new(labels.clone(), homs);
    collection.validate()?;

    let rotated_in_heart = members
        .iter()
        .map(|c| rot.in_h_prime(c))
        .collect::<Result<Vec<_>>>()?;

    let decomp = Decomposition::from_bases(members[..2].to_vec(), members[2..].to_vec())?;
    let z1 = CentralCharge {
        values: members[..2]
            .iter()
            .map(|c| zn.eval(c))
            .collect::<Result<_>>()?,
    };
    let z2 = CentralCharge {
        values: members[2..]
            .iter()
            .map(|c| zn.eval(c))
            .collect::<Result<_>>()?,
    };
    let charge_matches = glue_charge(&z1, &z2, &decomp)? == zn;

    let mut windows = Vec::with_capacity(members.len());
    for (k, deg) in [big_n, big_n + 1].into_iter().enumerate() {
        let obj = GlobalObject {
            terms: vec![GlobalTerm {
                mult: 1,
                summand: GlobalSummand::LineBundle {
                    deg,
                    points: vec![],
                },
                shift: 1 - k as i64,
            }],
        };
        let cert = base.reduce_line_bundle(&obj)?;
        let b = &cert.bounds;
        windows.push(window(
            labels[k].clone(),
            &b.lower,
            b.lower_open,
            &b.upper,
            b.upper_open,
            a,
        )?);
    }
    for i in 0..n {
        let report = base.local_normalized(i)?.chamber()?;
        let point = report.point();
        let label = labels[2 + i].clone();
        match (&point.phase, point.status) {
            (Some(p), Status::Stable) => {
                let p = p.add_int(-1);
                windows.push(window(label, &p, false, &p, false, a)?);
            }
            _ => windows.push(MemberWindow {
                label,
                lower: f64::NAN,
                lower_open: false,
                upper: f64::NAN,
                upper_open: false,
                inside: false,
            }),
        }
    }

    let classes = members
        .iter()
        .map(|c| classified.frame.map_class(c))
        .collect::<Result<Vec<_>>>()?;
    let holds = points_below
        && index.is_some()
        && rotated_in_heart.iter().all(|&b| b)
        && charge_matches
        && windows.iter().all(|w| w.inside);
    Ok(ExcP1Report {
        turn: a.clone(),
        points_below,
        index,
        collection,
        classes,
        rotated_in_heart,
        charge_matches,
        windows,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, QComplex};
    use crate::klattice::Geometry;

    fn c(re: i64, im: i64) -> QComplex {
        QComplex::from_ints(re, im)
    }

    fn sigma() -> GlobalStability {
        let g = Geometry::new(2, 0).unwrap();
        let z = CentralCharge::new(
            c(0, 1),
            c(-1, 0),
            vec![c(-1, -1), QComplex::new(q(-1, 2), q(-1, 3))],
        )
        .unwrap();
        classify_in_u(&z, &g).unwrap()
    }

    #[test]
    fn small_rotation_is_glued() {
        let r = exc_p1_check(&sigma(), &q(1, 100)).unwrap();
        assert!(r.points_below);
        assert_eq!(r.index, Some(-32));
        assert!(r.charge_matches);
        assert!(r.rotated_in_heart.iter().all(|&b| b));
        assert!(r.holds, "{r:?}");
    }

    #[test]
    fn index_moves_with_the_charge() {
        let g = Geometry::new(1, 0).unwrap();
        let z = CentralCharge::new(QComplex::new(q(7, 2), q(1, 10)), c(-1, 0), vec![c(-1, -1)])
            .unwrap();
        let s = classify_in_u(&z, &g).unwrap();
        let r = exc_p1_check(&s, &q(1, 10)).unwrap();
        let rot = RotatedCharge::new(&s.normalized, &q(1, 10));
        let m = r.index.unwrap();
        assert_eq!(rot.im_sign(&pullback_class(1, m)).unwrap(), Ordering::Less);
        assert_eq!(
            rot.im_sign(&pullback_class(1, m + 1)).unwrap(),
            Ordering::Greater
        );
        assert!(r.holds);
    }

    #[test]
    fn preconditions() {
        let s = sigma();
        assert!(matches!(
            exc_p1_check(&s, &Q::zero()),
            Err(Error::Precondition(_))
        ));
        let g = Geometry::new(1, 0).unwrap();
        let flat = CentralCharge::new(c(0, 1), c(-1, 0), vec![QComplex::new(q(-1, 2), Q::zero())])
            .unwrap();
        let s = classify_in_u(&flat, &g).unwrap();
        assert!(matches!(
            exc_p1_check(&s, &q(1, 100)),
            Err(Error::Precondition(_))
        ));
        let g1 = Geometry::new(2, 1).unwrap();
        let z = sigma().charge;
        assert!(matches!(
            exc_p1_check(&classify_in_u(&z, &g1).unwrap(), &q(1, 100)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn large_rotation_is_flagged() {
        let r = exc_p1_check(&sigma(), &q(3, 4)).unwrap();
        assert!(!r.points_below);
        assert!(!r.holds);
    }
}
