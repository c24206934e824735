use num_traits::Signed;

use super::{GlobalStability, PartitionData, PointClass};
use crate::error::{Error, Result};
use crate::exact::{det2, LogValue, PhaseLift, QComplex, Q};
use crate::klattice::{CentralCharge, FrameAction, Geometry, TwistGen};
use crate::local_stab::{Chart, LocalStability};

/// Local stabilities at every ramification point sharing one `f`, plus the charge of `O_X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaPoint {
    pub locals: Vec<LocalStability>,
    pub z: QComplex,
}

impl ThetaPoint {
    /// The common `f` of the local stabilities.
    pub fn f(&self) -> Result<LogValue> {
        let first = self
            .locals
            .first()
            .ok_or_else(|| Error::InvalidStability("no local stabilities".into()))?;
        if self.locals.iter().any(|s| s.f != first.f) {
            return Err(Error::InvalidStability(
                "local stabilities disagree on f".into(),
            ));
        }
        Ok(first.f.clone())
    }

    /// `det2(z, exp(πf)) + Σ δ_i`; the point lies in the image exactly when this is positive.
    pub fn lhs(&self) -> Result<Q> {
        let f = self.f()?;
        let mut total = det2(&self.z, f.exp());
        for s in &self.locals {
            total += s.delta()?;
        }
        Ok(total)
    }

    pub fn canonical(&self) -> Result<Self> {
        Ok(Self {
            locals: self
                .locals
                .iter()
                .map(LocalStability::canonical)
                .collect::<Result<_>>()?,
            z: self.z.clone(),
        })
    }
}

/// Image of a glued stability: its local restrictions and `Z(O_X)`.
pub fn theta_map(sigma: &GlobalStability) -> Result<ThetaPoint> {
    if sigma.geometry.genus_y == 0 {
        return Err(Error::PreconditionGenus);
    }
    let locals = (0..sigma.n())
        .map(|i| sigma.local(i)?.canonical())
        .collect::<Result<Vec<_>>>()?;
    let point = ThetaPoint {
        locals,
        z: sigma.charge.ox().clone(),
    };
    if !point.lhs()?.is_positive() {
        return Err(Error::InvalidStability(
            "image violates the positivity inequality".into(),
        ));
    }
    Ok(point)
}

fn partition_entry(s: &LocalStability) -> PointClass {
    let t = s.coord.im();
    let zero = PhaseLift::zero();
    match s.chart {
        Chart::Wall => PointClass::Zero,
        _ if t == zero => PointClass::Zero,
        Chart::Plus if t > zero => PointClass::Plus(t.ceil() as u32),
        Chart::Minus if t <= PhaseLift::from_int(-1) => PointClass::Minus((-t.ceil()) as u32),
        _ => PointClass::Plus(1),
    }
}

/// Inverse of [`theta_map`]: glues a stability from local data and `Z(O_X)`.
pub fn build_from_theta(t: &ThetaPoint, geom: &Geometry) -> Result<GlobalStability> {
    if geom.genus_y == 0 {
        return Err(Error::PreconditionGenus);
    }
    if t.locals.len() != geom.n {
        return Err(Error::DimensionMismatch {
            expected: geom.n,
            found: t.locals.len(),
        });
    }
    let lhs = t.lhs()?;
    if !lhs.is_positive() {
        return Err(Error::NotInRegion(format!(
            "det2(z, exp(πf)) + Σδ = {lhs} is not positive"
        )));
    }
    let f = t.f()?;
    let c = &LogValue::i_times(1) - &f;
    let mut z = &t.z * c.exp();
    let mut twists = Vec::new();
    let mut points = Vec::with_capacity(geom.n);
    for (i, s) in t.locals.iter().enumerate() {
        let mut s = s.act_c(&c);
        let rep = s.chamber()?;
        if rep.in_w_minus() && !rep.in_w_plus() {
            twists.push(TwistGen::Point {
                index: i,
                inverse: false,
            });
            z = &z + &s.charges().1;
            s = s.swap_roles()?;
        }
        points.push(partition_entry(&s));
    }
    let caller = CentralCharge::new(
        t.z.clone(),
        f.exp().clone(),
        t.locals.iter().map(|s| s.charges().0).collect(),
    )?;
    let frame = FrameAction { scalar: c, twists };
    let sigma = GlobalStability::new(*geom, caller, PartitionData::new(points)?, frame)?;
    if sigma.normalized.ox() != &z {
        return Err(Error::InvalidStability(
            "normalized charge of O_X is inconsistent".into(),
        ));
    }
    Ok(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doublecover::{build_stability, classify_in_u};
    use crate::exact::q;

    fn c(re: i64, im: i64) -> QComplex {
        QComplex::from_ints(re, im)
    }

    #[test]
    fn standard_round_trip() {
        let g = Geometry::new(2, 1).unwrap();
        let z = CentralCharge::uniform(2, c(0, 1), c(-1, 0), QComplex::real(q(-1, 2)));
        let s = build_stability(&z, &PartitionData::all_zero(2), &g).unwrap();
        let t = theta_map(&s).unwrap();
        assert_eq!(t.lhs().unwrap(), q(1, 1));
        let back = build_from_theta(&t, &g).unwrap();
        assert_eq!(
            theta_map(&back).unwrap().canonical().unwrap(),
            t.canonical().unwrap()
        );
    }

    #[test]
    fn twisted_round_trip() {
        let g = Geometry::new(2, 1).unwrap();
        let z = CentralCharge::new(c(3, 2), c(0, 2), vec![c(1, 1), c(-1, 3)]).unwrap();
        let s = classify_in_u(&z, &g).unwrap();
        let t = theta_map(&s).unwrap();
        let back = build_from_theta(&t, &g).unwrap();
        assert_eq!(back.charge, z);
        assert_eq!(theta_map(&back).unwrap(), t);
    }

    #[test]
    fn genus_zero_and_negative_lhs() {
        let g0 = Geometry::new(1, 0).unwrap();
        let z = CentralCharge::uniform(1, c(0, 1), c(-1, 0), QComplex::real(q(-1, 2)));
        let s = build_stability(&z, &PartitionData::all_zero(1), &g0).unwrap();
        assert!(matches!(theta_map(&s), Err(Error::PreconditionGenus)));
        let g = Geometry::new(1, 1).unwrap();
        let s = build_stability(&z, &PartitionData::all_zero(1), &g).unwrap();
        let mut t = theta_map(&s).unwrap();
        t.z = c(0, -1);
        assert!(matches!(
            build_from_theta(&t, &g),
            Err(Error::NotInRegion(_))
        ));
    }
}
