//! Finite-sample diagnostics: support-property moduli, sector bounds, norms and closeness.

use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{format_q, q_to_f64, PhaseLift, Q};
use crate::klattice::{CentralCharge, Geometry, KClass};

fn cmp_phase_q(p: &PhaseLift, x: &Q) -> std::cmp::Ordering {
    match p.exact_value() {
        Some(v) => v.cmp(x),
        None => p
            .to_f64()
            .partial_cmp(&q_to_f64(x))
            .unwrap_or(std::cmp::Ordering::Equal),
    }
}

/// Minimum of `|Z(E)|` over a supplied family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModulusReport {
    #[serde(serialize_with = "ser_q")]
    pub min_norm_sqr: Q,
    pub min_modulus: f64,
    pub witness: usize,
    /// The charge image lies in the lattice `(1/D)·Z[i]`.
    pub discrete_image: bool,
    /// `1/D`: every nonzero charge value has at least this modulus.
    #[serde(serialize_with = "ser_q")]
    pub lattice_bound: Q,
}

fn ser_q<S: serde::Serializer>(v: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_q(v))
}

pub fn min_charge_modulus(
    family: &[(KClass, PhaseLift)],
    z: &CentralCharge,
) -> Result<ModulusReport> {
    if family.is_empty() {
        return Err(Error::Precondition("empty family".into()));
    }
    let mut best: Option<(usize, Q)> = None;
    for (k, (c, _)) in family.iter().enumerate() {
        let v = z.eval(c)?;
        if v.is_zero() {
            return Err(Error::InvalidCharge(format!(
                "family member {c} has zero charge"
            )));
        }
        let ns = v.norm_sqr();
        if best.as_ref().is_none_or(|(_, b)| ns < *b) {
            best = Some((k, ns));
        }
    }
    let (witness, min_norm_sqr) = best.expect("nonempty");
    let denom = z.values.iter().fold(num_bigint::BigInt::one(), |acc, v| {
        num_integer::Integer::lcm(&acc, &v.denominator_lcm())
    });
    Ok(ModulusReport {
        min_modulus: q_to_f64(&min_norm_sqr).sqrt(),
        min_norm_sqr,
        witness,
        discrete_image: true,
        lattice_bound: Q::new(1.into(), denom),
    })
}

/// Both sides of `|Z(E)| ≥ cos(πη/2)·c` for objects of phases in `(t, t+η)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectorReport {
    pub lower_bound: f64,
    pub min_object_modulus: Option<f64>,
    pub holds: bool,
}

/// Each family member is given by its HN factors; `c` is the least factor modulus.
pub fn sector_bound_check(
    family: &[Vec<(KClass, PhaseLift)>],
    z: &CentralCharge,
    t: &Q,
    eta: &Q,
) -> Result<SectorReport> {
    if !eta.is_positive() || *eta >= Q::one() {
        return Err(Error::Precondition(
            "sector width must lie in (0, 1)".into(),
        ));
    }
    let hi = t + eta;
    let mut c = f64::INFINITY;
    let mut min_obj = None::<f64>;
    for factors in family {
        let mut total = None::<KClass>;
        for (cls, ph) in factors {
            if cmp_phase_q(ph, t).is_le() || cmp_phase_q(ph, &hi).is_ge() {
                return Err(Error::Precondition(format!(
                    "phase {ph} outside the sector ({}, {})",
                    format_q(t),
                    format_q(&hi)
                )));
            }
            c = c.min(z.eval(cls)?.modulus_f64());
            total = Some(match total {
                None => cls.clone(),
                Some(acc) => &acc + cls,
            });
        }
        if let Some(total) = total {
            let m = z.eval(&total)?.modulus_f64();
            min_obj = Some(min_obj.map_or(m, |x| x.min(m)));
        }
    }
    if min_obj.is_none() {
        return Ok(SectorReport {
            lower_bound: 0.0,
            min_object_modulus: None,
            holds: true,
        });
    }
    let lower_bound = (std::f64::consts::PI * q_to_f64(eta) / 2.0).cos() * c;
    let m = min_obj.expect("nonempty");
    Ok(SectorReport {
        lower_bound,
        min_object_modulus: min_obj,
        holds: m >= lower_bound * (1.0 - 1e-12),
    })
}

/// `‖Z‖ = max(|Z(O_X)|, |Z(v)|, |Z(O_{p_i})|, |Z(ζ⊗O_{p_i})|)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormReport {
    #[serde(serialize_with = "ser_q")]
    pub norm_sqr: Q,
    pub norm: f64,
}

pub fn charge_norm(z: &CentralCharge, geom: &Geometry) -> Result<NormReport> {
    if z.n() != geom.n {
        return Err(Error::DimensionMismatch {
            expected: geom.n,
            found: z.n(),
        });
    }
    let mut best = z.ox().norm_sqr().max(z.fiber().norm_sqr());
    for i in 0..geom.n {
        best = best
            .max(z.point(i).norm_sqr())
            .max(z.zeta_point(i).norm_sqr());
    }
    Ok(NormReport {
        norm: q_to_f64(&best).sqrt(),
        norm_sqr: best,
    })
}

/// Constants of the comparison `|Z'(E)| ≤ r·‖Z'‖·|Z(E)|` and its sampled verification.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumLemReport {
    pub r1: f64,
    pub r2: f64,
    pub r: f64,
    pub max_ratio: f64,
    pub violations: Vec<Vec<i64>>,
}

impl NumLemReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn num_lem_hypotheses(z: &CentralCharge) -> Result<()> {
    if !z.ox().im.is_positive() {
        return Err(Error::Hypothesis {
            condition: 1,
            detail: "Im Z(O_X) must be positive".into(),
        });
    }
    if !z.fiber().is_negative_real() {
        return Err(Error::Hypothesis {
            condition: 2,
            detail: "Z(v) must be a negative real".into(),
        });
    }
    for i in 0..z.n() {
        if z.point(i).is_zero() || z.zeta_point(i).is_zero() {
            return Err(Error::Hypothesis {
                condition: 3,
                detail: format!("Z(O_p{}) and Z(ζO_p{}) must be nonzero", i + 1, i + 1),
            });
        }
        if z.point(i).im.is_positive() {
            return Err(Error::Hypothesis {
                condition: 3,
                detail: format!("Im Z(O_p{}) must be nonpositive", i + 1),
            });
        }
    }
    Ok(())
}

/// `r₁ = max 1/|Z(E)|` over endosimple torsion classes and
/// `r₂ = (n+1)/Im Z(O_X) + |Z(v)|⁻¹·(1 + (n+1)‖Z‖/Im Z(O_X))`.
pub fn num_lem_bound(
    z: &CentralCharge,
    zp: &CentralCharge,
    geom: &Geometry,
    samples: &[KClass],
) -> Result<NumLemReport> {
    num_lem_hypotheses(z)?;
    let norm = charge_norm(z, geom)?.norm;
    let norm_p = charge_norm(zp, geom)?.norm;
    let mut min_torsion = z.fiber().modulus_f64();
    for i in 0..geom.n {
        min_torsion = min_torsion
            .min(z.point(i).modulus_f64())
            .min(z.zeta_point(i).modulus_f64());
    }
    let r1 = 1.0 / min_torsion;
    let im_ox = q_to_f64(&z.ox().im);
    let n1 = (geom.n + 1) as f64;
    let r2 = n1 / im_ox + (1.0 / z.fiber().modulus_f64()) * (1.0 + n1 * norm / im_ox);
    let r = r1.max(r2);
    let mut max_ratio = 0.0f64;
    let mut violations = Vec::new();
    let approx = |zc: &CentralCharge| -> Vec<num_complex::Complex64> {
        zc.values
            .iter()
            .map(|v| {
                let (re, im) = v.to_f64();
                num_complex::Complex64::new(re, im)
            })
            .collect()
    };
    let (zf, zpf) = (approx(z), approx(zp));
    for c in samples {
        if c.coords.len() != zf.len() || c.coords.len() != zpf.len() {
            return Err(Error::DimensionMismatch {
                expected: zf.len(),
                found: c.coords.len(),
            });
        }
        let eval = |vals: &[num_complex::Complex64]| -> f64 {
            c.coords
                .iter()
                .zip(vals)
                .map(|(&k, v)| v * k as f64)
                .sum::<num_complex::Complex64>()
                .norm()
        };
        let lhs = eval(&zpf);
        let base = eval(&zf);
        if lhs == 0.0 {
            continue;
        }
        let ratio = if base == 0.0 {
            f64::INFINITY
        } else {
            lhs / (norm_p * base)
        };
        max_ratio = max_ratio.max(ratio);
        if ratio > r * (1.0 + 1e-12) {
            violations.push(c.coords.clone());
        }
    }
    Ok(NumLemReport {
        r1,
        r2,
        r,
        max_ratio,
        violations,
    })
}

/// Finite-sample proxy for closeness of two stability conditions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosenessReport {
    pub charge_ok: bool,
    pub window_ok: bool,
    pub max_ratio: f64,
    /// Largest displacement of a sampled window outside `(0, 1]`.
    pub slicing_distance_sample: f64,
}

impl ClosenessReport {
    pub fn holds(&self) -> bool {
        self.charge_ok && self.window_ok
    }
}

/// `semistable` lists σ₁-semistable classes; `windows` lists σ₁-phase ranges of heart-2 generators.
pub fn closeness_check(
    z1: &CentralCharge,
    z2: &CentralCharge,
    eps: &Q,
    semistable: &[KClass],
    windows: &[(PhaseLift, PhaseLift)],
) -> Result<ClosenessReport> {
    if !eps.is_positive() || *eps >= Q::new(1.into(), 4.into()) {
        return Err(Error::Precondition("ε must lie in (0, 1/4)".into()));
    }
    let bound = (std::f64::consts::PI * q_to_f64(eps)).sin();
    let mut max_ratio = 0.0f64;
    for c in semistable {
        let base = z1.eval(c)?;
        if base.is_zero() {
            return Err(Error::InvalidCharge(format!(
                "semistable class {c} has zero charge"
            )));
        }
        let diff = &z2.eval(c)? - &base;
        max_ratio = max_ratio.max(diff.modulus_f64() / base.modulus_f64());
    }
    let lo_bound = eps - Q::one();
    let hi_bound = Q::from_integer(2.into()) - eps;
    let mut window_ok = true;
    let mut dist = 0.0f64;
    for (lo, hi) in windows {
        if cmp_phase_q(lo, &lo_bound).is_le() || cmp_phase_q(hi, &hi_bound).is_gt() {
            window_ok = false;
        }
        dist = dist.max(-lo.to_f64()).max(hi.to_f64() - 1.0);
    }
    Ok(ClosenessReport {
        charge_ok: max_ratio < bound,
        window_ok,
        max_ratio,
        slicing_distance_sample: dist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qi, QComplex};

    fn c(re: i64, im: i64) -> QComplex {
        QComplex::from_ints(re, im)
    }

    fn worked() -> CentralCharge {
        CentralCharge::uniform(1, c(0, 1), c(-1, 0), QComplex::real(q(-1, 2)))
    }

    #[test]
    fn min_modulus_examples() {
        let z = CentralCharge::local(&c(0, 1), &c(-1, 0));
        let fam = vec![(KClass::fiber(1), PhaseLift::zero())];
        let zf = CentralCharge::uniform(1, c(0, 1), c(-1, 0), c(-1, 0));
        assert_eq!(min_charge_modulus(&fam, &zf).unwrap().min_norm_sqr, qi(1));
        let fam2 = vec![
            (KClass::point(1, 0), PhaseLift::zero()),
            (KClass::zeta_point(1, 0), PhaseLift::zero()),
        ];
        let rep = min_charge_modulus(&fam2, &z).unwrap();
        assert_eq!(rep.min_modulus, 1.0);
        assert!(rep.discrete_image);
        assert_eq!(rep.lattice_bound, qi(1));
        let zero = vec![(KClass::zero(1), PhaseLift::zero())];
        assert!(matches!(
            min_charge_modulus(&zero, &z),
            Err(Error::InvalidCharge(_))
        ));
    }

    #[test]
    fn sector_bound_examples() {
        let z = CentralCharge::local(&c(0, 1), &c(-1, 0));
        let rep = sector_bound_check(&[], &z, &qi(0), &q(1, 2)).unwrap();
        assert!(rep.holds);
        let fam = vec![vec![(KClass::point(1, 0), PhaseLift::quarter(2))]];
        let rep = sector_bound_check(&fam, &z, &q(1, 4), &q(1, 2)).unwrap();
        assert!((rep.lower_bound - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(rep.holds);
        let tiny = sector_bound_check(&fam, &z, &q(499, 1000), &q(1, 500)).unwrap();
        assert!((tiny.lower_bound - 1.0).abs() < 1e-4);
        assert!(sector_bound_check(&fam, &z, &qi(0), &q(1, 4)).is_err());
    }

    #[test]
    fn norm_examples() {
        let rep = charge_norm(&worked(), &Geometry::new(1, 1).unwrap()).unwrap();
        assert_eq!(rep.norm_sqr, qi(1));
        let z = CentralCharge::uniform(1, c(3, 0), c(0, 0), c(0, 0));
        assert_eq!(
            charge_norm(&z, &Geometry::new(1, 1).unwrap()).unwrap().norm,
            3.0
        );
        let scaled = worked().scale(&c(3, 0));
        assert_eq!(
            charge_norm(&scaled, &Geometry::new(1, 1).unwrap())
                .unwrap()
                .norm,
            3.0
        );
    }

    #[test]
    fn num_lem_constants_for_the_worked_charge() {
        let geom = Geometry::new(1, 1).unwrap();
        let samples = vec![
            KClass::point(1, 0),
            KClass::zeta_point(1, 0),
            KClass::fiber(1),
        ];
        let rep = num_lem_bound(&worked(), &worked(), &geom, &samples).unwrap();
        assert_eq!(rep.r1, 2.0);
        assert_eq!(rep.r2, 5.0);
        assert_eq!(rep.r, 5.0);
        assert!(rep.holds());
        let doubled = num_lem_bound(&worked(), &worked().scale(&c(2, 0)), &geom, &samples).unwrap();
        assert!((doubled.max_ratio - rep.max_ratio).abs() < 1e-15);
        let bad = CentralCharge::uniform(1, c(0, -1), c(-1, 0), c(-1, 0));
        assert!(matches!(
            num_lem_bound(&bad, &bad, &geom, &samples),
            Err(Error::Hypothesis { condition: 1, .. })
        ));
    }

    #[test]
    fn closeness_examples() {
        let z = worked();
        let eps = q(1, 10);
        let ss = vec![
            KClass::point(1, 0),
            KClass::fiber(1),
            KClass::structure_sheaf(1),
        ];
        let win = vec![(PhaseLift::quarter(1), PhaseLift::quarter(4))];
        assert!(closeness_check(&z, &z, &eps, &ss, &win).unwrap().holds());
        assert!(!closeness_check(&z, &z.scale(&c(-1, 0)), &eps, &ss, &win)
            .unwrap()
            .holds());
        let s = (std::f64::consts::PI / 10.0).sin();
        let factor = crate::exact::q_from_f64(1.0 + s / 2.0).unwrap();
        let rep = closeness_check(&z, &z.scale(&QComplex::real(factor)), &eps, &ss, &win).unwrap();
        assert!(rep.charge_ok);
        assert!((rep.max_ratio - s / 2.0).abs() < 1e-12);
    }
}
