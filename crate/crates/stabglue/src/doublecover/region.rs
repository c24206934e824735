use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{GlobalStability, PartitionData, PointClass};
use crate::error::{Error, Result};
use crate::exact::{det2, dot, format_q, LogValue, QComplex};
use crate::klattice::{coset_classes, CentralCharge, FrameAction, Geometry, TwistGen};

/// The two defining conditions of `Ū`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UBarCondition {
    /// `det2(Z(L), v_Z) > 0` for every line-bundle coset.
    LineBundles,
    /// `Z(O_p)` and `Z(ζ⊗O_p)` avoid the ray `R≤0·v_Z`.
    PointRays,
}

impl UBarCondition {
    pub fn index(self) -> usize {
        match self {
            Self::LineBundles => 1,
            Self::PointRays => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UBarWitness {
    pub condition: UBarCondition,
    /// Offending object, e.g. `O(p1+p2)` or `ζO_p1`.
    pub object: String,
    /// `det2(Z(object), v_Z)` as an exact rational string.
    pub det: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UBarReport {
    pub passes: bool,
    pub witness: Option<UBarWitness>,
}

/// `z ∈ R≤0·v`.
fn on_negative_ray(z: &QComplex, v: &QComplex) -> bool {
    det2(z, v).is_zero() && !dot(z, v).is_positive()
}

/// Exact membership test for `Ū`, reporting the first failing object.
pub fn check_u_bar(z: &CentralCharge, geom: &Geometry) -> Result<UBarReport> {
    if z.n() != geom.n {
        return Err(Error::DimensionMismatch {
            expected: geom.n,
            found: z.n(),
        });
    }
    let v = z.fiber();
    if v.is_zero() {
        return Err(Error::InvalidCharge("v_Z = 0".into()));
    }
    for coset in coset_classes(geom) {
        let d = coset.det_against_fiber(z)?;
        if !d.is_positive() {
            let witness = UBarWitness {
                condition: UBarCondition::LineBundles,
                object: coset.label(),
                det: format_q(&d),
            };
            return Ok(UBarReport {
                passes: false,
                witness: Some(witness),
            });
        }
    }
    for i in 0..geom.n {
        for (name, value) in [
            (format!("O_p{}", i + 1), z.point(i).clone()),
            (format!("ζO_p{}", i + 1), z.zeta_point(i)),
        ] {
            if on_negative_ray(&value, v) {
                let witness = UBarWitness {
                    condition: UBarCondition::PointRays,
                    object: name,
                    det: format_q(&det2(&value, v)),
                };
                return Ok(UBarReport {
                    passes: false,
                    witness: Some(witness),
                });
            }
        }
    }
    Ok(UBarReport {
        passes: true,
        witness: None,
    })
}

/// Normal form of a charge in `Ū`.
///
/// Rescales by `−1/v_Z`, then twists by `O(Σ p_i)` over the points with `Im Z(O_{p_i}) > 0`.
/// The result has `I⁻ = ∅`, all shifts 1, `I⁺ = {Im Z(O_{p_i}) < 0}` and `I⁰` the rest.
pub fn classify_in_u(z: &CentralCharge, geom: &Geometry) -> Result<GlobalStability> {
    let report = check_u_bar(z, geom)?;
    if let Some(w) = report.witness {
        return Err(Error::NotInRegion(format!(
            "condition ({}) fails for {}: det = {}",
            w.condition.index(),
            w.object,
            w.det
        )));
    }
    let scale = (-z.fiber()).inv()?;
    let scalar = LogValue::new(scale.clone(), 0)?;
    let scaled = z.scale(&scale);
    let twists: Vec<TwistGen> = (0..geom.n)
        .filter(|&i| scaled.point(i).im.is_positive())
        .map(|index| TwistGen::Point {
            index,
            inverse: false,
        })
        .collect();
    let frame = FrameAction { scalar, twists };
    let normalized = frame.apply(z)?;
    let points = (0..geom.n)
        .map(|i| {
            if normalized.point(i).im.is_negative() {
                PointClass::Plus(1)
            } else {
                PointClass::Zero
            }
        })
        .collect();
    GlobalStability::new(*geom, z.clone(), PartitionData::new(points)?, frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn c(re: i64, im: i64) -> QComplex {
        QComplex::from_ints(re, im)
    }

    fn standard(n: usize) -> CentralCharge {
        CentralCharge::uniform(n, c(0, 1), c(-1, 0), QComplex::new(q(-1, 2), q(0, 1)))
    }

    #[test]
    fn u_bar_examples() {
        let g = Geometry::new(2, 1).unwrap();
        assert!(check_u_bar(&standard(2), &g).unwrap().passes);
        let mut z = standard(2);
        z.values[2] = QComplex::new(q(1, 2), q(0, 1));
        let r = check_u_bar(&z, &g).unwrap();
        assert_eq!(r.witness.unwrap().condition, UBarCondition::PointRays);
        let mut z = standard(2);
        z.values[0] = c(0, -1);
        let r = check_u_bar(&z, &g).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(
            (w.condition, w.object.as_str(), w.det.as_str()),
            (UBarCondition::LineBundles, "O_X", "-1")
        );
        let mut z = standard(2);
        z.values[1] = c(0, 0);
        assert!(matches!(check_u_bar(&z, &g), Err(Error::InvalidCharge(_))));
    }

    #[test]
    fn classify_examples() {
        let g = Geometry::new(1, 1).unwrap();
        let s = classify_in_u(&standard(1), &g).unwrap();
        assert_eq!(s.partition.points, vec![PointClass::Zero]);
        assert!(s.frame.is_identity());
        let z = CentralCharge::new(c(0, 1), c(-1, 0), vec![c(-1, -1)]).unwrap();
        let s = classify_in_u(&z, &g).unwrap();
        assert_eq!(s.partition.points, vec![PointClass::Plus(1)]);
        assert!(s.frame.is_identity());
    }

    #[test]
    fn classify_normalizes_and_is_idempotent() {
        let g = Geometry::new(2, 1).unwrap();
        let z = CentralCharge::new(c(3, 2), c(0, 2), vec![c(1, 1), c(-1, 3)]).unwrap();
        let s = classify_in_u(&z, &g).unwrap();
        assert_eq!(s.normalized.fiber(), &c(-1, 0));
        assert!(s.normalized.ox().im.is_positive());
        assert!(s.normalized.values[2..].iter().all(|p| !p.im.is_positive()));
        let again = classify_in_u(&s.normalized, &g).unwrap();
        assert!(again.frame.is_identity());
        assert_eq!(again.partition, s.partition);
        assert_eq!(again.normalized, s.normalized);
    }

    #[test]
    fn classify_rejects_outside() {
        let g = Geometry::new(1, 1).unwrap();
        let z = CentralCharge::new(c(0, -1), c(-1, 0), vec![c(-1, -1)]).unwrap();
        assert!(matches!(classify_in_u(&z, &g), Err(Error::NotInRegion(_))));
    }
}
