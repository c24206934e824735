//! Stability conditions on the local category at one ramification point.
//!
//! A point is stored as `f` (with `exp(πf) = Z(O_{2p})`), a chart and a coordinate on the slice
//! `Σ = {f = 0}`. On `Σ`, `u = Z(O_p)` and `w = Z(ζ⊗O_p)` satisfy `u + w = 1`. The PLUS chart
//! records `u` together with the phase lift of `O_p`; MINUS records `w` with the lift of
//! `ζ⊗O_p`; WALL records a real `u ∈ (0, 1)`.

mod json;
mod uniformize;

pub use json::{LocalStabilityExact, LocalStabilityJson};
pub use uniformize::{uniformize, uniformize_derivative, uniformize_inverse, Cplx};

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{det2, LogValue, PhaseLift, QComplex, Q};
use crate::klattice::{twist_class, CentralCharge, KClass, TwistGen};
use crate::slicing::{
    chain_status, hn_direct_sum, hn_polygon_window, ChainObject, FactorLabel, HnFactor, HnResult,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Chart {
    Plus,
    Minus,
    Wall,
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chart::Plus => "PLUS",
            Chart::Minus => "MINUS",
            Chart::Wall => "WALL",
        })
    }
}

/// Point of the local stability space in chamber-plus-chart form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalStability {
    pub f: LogValue,
    pub chart: Chart,
    pub coord: LogValue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl Status {
    pub fn code(self) -> char {
        match self {
            Status::Stable => 'S',
            Status::StrictlySemistable => 's',
            Status::Unstable => 'U',
        }
    }

    pub fn is_semistable(self) -> bool {
        self != Status::Unstable
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectStatus {
    pub status: Status,
    pub phase: Option<PhaseLift>,
}

impl ObjectStatus {
    fn stable(phase: PhaseLift) -> Self {
        Self {
            status: Status::Stable,
            phase: Some(phase),
        }
    }

    fn strict(phase: PhaseLift) -> Self {
        Self {
            status: Status::StrictlySemistable,
            phase: Some(phase),
        }
    }

    fn unstable() -> Self {
        Self {
            status: Status::Unstable,
            phase: None,
        }
    }

    fn shifted(&self, by: &PhaseLift) -> Self {
        Self {
            status: self.status,
            phase: self.phase.as_ref().map(|p| p + by),
        }
    }
}

/// Statuses of `O_p`, `ζ⊗O_p`, `O_{2p}` and `ζ⊗O_{2p}`, in that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberReport {
    pub objects: [ObjectStatus; 4],
}

impl ChamberReport {
    pub const NAMES: [&'static str; 4] = ["O_p", "ζO_p", "O_2p", "ζO_2p"];

    pub fn point(&self) -> &ObjectStatus {
        &self.objects[0]
    }

    pub fn zeta_point(&self) -> &ObjectStatus {
        &self.objects[1]
    }

    pub fn double(&self) -> &ObjectStatus {
        &self.objects[2]
    }

    pub fn zeta_double(&self) -> &ObjectStatus {
        &self.objects[3]
    }

    /// `U⁺`: `O_p` is stable.
    pub fn in_u_plus(&self) -> bool {
        self.objects[0].status == Status::Stable
    }

    /// `U⁻`: `ζ⊗O_p` is stable.
    pub fn in_u_minus(&self) -> bool {
        self.objects[1].status == Status::Stable
    }

    /// `W⁺`: `O_{2p}` is semistable.
    pub fn in_w_plus(&self) -> bool {
        self.objects[2].status.is_semistable()
    }

    /// `W⁻`: `ζ⊗O_{2p}` is semistable.
    pub fn in_w_minus(&self) -> bool {
        self.objects[3].status.is_semistable()
    }

    /// Four status characters in the fixed object order.
    pub fn code(&self) -> String {
        self.objects.iter().map(|o| o.status.code()).collect()
    }

    fn shifted(&self, by: &PhaseLift) -> Self {
        Self {
            objects: self.objects.clone().map(|o| o.shifted(by)),
        }
    }

    /// Exchanges the roles of `O_p` and `ζ⊗O_p`.
    fn mirrored(self) -> Self {
        let [a, b, c, d] = self.objects;
        Self {
            objects: [b, a, d, c],
        }
    }
}

fn one() -> QComplex {
    QComplex::one()
}

impl LocalStability {
    pub fn new(f: LogValue, chart: Chart, coord: LogValue) -> Result<Self> {
        let s = Self { f, chart, coord };
        s.validate()?;
        Ok(s)
    }

    /// PLUS chart point with `Z(O_p) = exp(πf)·exp(π·coord)`.
    pub fn plus(f: LogValue, coord: LogValue) -> Result<Self> {
        Self::new(f, Chart::Plus, coord)
    }

    pub fn minus(f: LogValue, coord: LogValue) -> Result<Self> {
        Self::new(f, Chart::Minus, coord)
    }

    /// Wall point with `Z(O_p) = exp(πf)·u` for real `u ∈ (0, 1)`.
    pub fn wall(f: LogValue, u: Q) -> Result<Self> {
        Self::new(f, Chart::Wall, LogValue::new(QComplex::real(u), 0)?)
    }

    fn validate(&self) -> Result<()> {
        match self.chart {
            Chart::Wall => {
                let e = self.coord.exp();
                if !e.im.is_zero()
                    || !e.re.is_positive()
                    || e.re >= Q::one()
                    || self.coord.wind() != 0
                {
                    return Err(Error::InvalidStability(
                        "wall coordinate must be a real number in (0, 1)".into(),
                    ));
                }
            }
            _ => {
                if self.coord.im() == PhaseLift::zero() && self.coord.exp().re >= Q::one() {
                    return Err(Error::BranchCut);
                }
            }
        }
        Ok(())
    }

    /// Stability with the standard torsion heart and charges `u = Z(O_p)`, `w = Z(ζ⊗O_p)`.
    pub fn from_charges(u: &QComplex, w: &QComplex) -> Result<Self> {
        for z in [u, w] {
            if z.is_zero() || !z.in_h_prime() {
                return Err(Error::InvalidStabilityFunction(format!(
                    "{z} is not in the upper half-plane or R<0"
                )));
            }
        }
        let total = u + w;
        let f = LogValue::new(total.clone(), 0)?;
        let ratio = u.div(&total)?;
        if det2(u, w).is_zero() {
            return Self::wall(f, ratio.re);
        }
        let lift = &PhaseLift::in_heart(u)? - &PhaseLift::in_heart(&total)?;
        Self::plus(f, LogValue::from_exp_and_im(ratio, &lift)?)
    }

    /// `Σ`-slice charges `(u, w)` with `u + w = 1`.
    pub fn slice_charges(&self) -> (QComplex, QComplex) {
        let e = self.coord.exp().clone();
        match self.chart {
            Chart::Plus | Chart::Wall => {
                let w = &one() - &e;
                (e, w)
            }
            Chart::Minus => (&one() - &e, e),
        }
    }

    /// `(Z(O_p), Z(ζ⊗O_p))`.
    pub fn charges(&self) -> (QComplex, QComplex) {
        let (u, w) = self.slice_charges();
        (&u * self.f.exp(), &w * self.f.exp())
    }

    /// The local charge on the one-point lattice.
    pub fn local_charge(&self) -> CentralCharge {
        let (u, w) = self.charges();
        CentralCharge::local(&u, &w)
    }

    pub fn f_of(&self) -> Result<LogValue> {
        let (u, w) = self.charges();
        if &(&u + &w) != self.f.exp() {
            return Err(Error::InvalidStability(
                "exp(πf) differs from Z(O_2p)".into(),
            ));
        }
        Ok(self.f.clone())
    }

    /// `c·σ`: `f ↦ f + c`, charges multiplied by `exp(πc)`, phases shifted by `Im c`.
    pub fn act_c(&self, c: &LogValue) -> Self {
        Self {
            f: &self.f + c,
            chart: self.chart,
            coord: self.coord.clone(),
        }
    }

    /// Same point with `O_p` and `ζ⊗O_p` exchanged: the image under `⊗O(p)`.
    pub fn swap_roles(&self) -> Result<Self> {
        match self.chart {
            Chart::Plus => Ok(Self {
                chart: Chart::Minus,
                ..self.clone()
            }),
            Chart::Minus => Ok(Self {
                chart: Chart::Plus,
                ..self.clone()
            }),
            Chart::Wall => Self::wall(self.f.clone(), &Q::one() - &self.coord.exp().re),
        }
    }

    /// Chart with `O_p` in the role of the recorded object, when possible.
    pub fn canonical(&self) -> Result<Self> {
        let rep = self.chamber()?;
        if self.chart == Chart::Wall {
            return Ok(self.clone());
        }
        if rep.in_w_plus() && rep.in_w_minus() {
            let (u, _) = self.slice_charges();
            return Self::wall(self.f.clone(), u.re);
        }
        if self.chart == Chart::Minus && rep.in_u_plus() {
            return self.chart_transition();
        }
        Ok(self.clone())
    }

    /// Re-expresses a point of `U⁺∩U⁻` in the other chart.
    pub fn chart_transition(&self) -> Result<Self> {
        if self.chart == Chart::Wall {
            return Ok(self.clone());
        }
        let t = self.coord.im();
        if t >= PhaseLift::from_int(1) || t <= PhaseLift::from_int(-1) {
            return Err(Error::NotInRegion("chart coordinate has |Im| >= 1".into()));
        }
        let other = &one() - self.coord.exp();
        let zero = PhaseLift::zero();
        let lift = if t > zero {
            PhaseLift::lift_into_open(&other, &t.add_int(-1), &zero)?
        } else {
            PhaseLift::lift_into_open(&other, &zero, &t.add_int(1))?
        }
        .ok_or_else(|| Error::InvalidStability("no lift for the other chart".into()))?;
        let coord = LogValue::from_exp_and_im(other, &lift)?;
        let chart = if self.chart == Chart::Plus {
            Chart::Minus
        } else {
            Chart::Plus
        };
        Ok(Self {
            f: self.f.clone(),
            chart,
            coord,
        })
    }

    /// Statuses and phases of the four small objects.
    pub fn chamber(&self) -> Result<ChamberReport> {
        self.validate()?;
        let on_slice = match self.chart {
            Chart::Wall => wall_report(),
            Chart::Plus => plus_report(&self.coord)?,
            Chart::Minus => plus_report(&self.coord)?.mirrored(),
        };
        Ok(on_slice.shifted(&self.f.im()))
    }

    /// `det2(Z(ζ⊗O_p), Z(O_{2p}))` when `ζ⊗O_{2p}` is semistable, else 0.
    pub fn delta(&self) -> Result<Q> {
        let rep = self.chamber()?;
        if !rep.in_w_minus() {
            return Ok(Q::zero());
        }
        let (u, w) = self.charges();
        Ok(det2(&w, &(&u + &w)))
    }

    /// HN factors of a local object; phases are in this stability's frame.
    pub fn hn_local(&self, obj: &LocalObject) -> Result<HnResult> {
        let mut parts = Vec::new();
        for s in &obj.summands {
            let one = self.hn_indecomposable(s.m, s.twist)?.shift(s.shift);
            for _ in 0..s.mult {
                parts.push(one.clone());
            }
        }
        Ok(hn_direct_sum(&parts))
    }

    fn hn_indecomposable(&self, m: u32, twist: bool) -> Result<HnResult> {
        if m == 0 {
            return Err(Error::Precondition(
                "torsion length must be positive".into(),
            ));
        }
        let rep = self.chamber()?;
        if rep.in_u_plus() && rep.in_u_minus() {
            let p = rep.point().phase.clone().expect("stable");
            let q = rep.zeta_point().phase.clone().expect("stable");
            let theta = std::cmp::max(p, q).add_int(-1);
            let obj = ChainObject::torsion(1, 0, m, twist)?;
            return hn_polygon_window(&obj, &self.local_charge(), &theta);
        }
        if m > 2 {
            return Err(Error::UnsupportedHeart(
                "objects of length > 2 need both O_p and ζO_p stable".into(),
            ));
        }
        match self.chart {
            Chart::Minus => {
                let mirrored = Self {
                    chart: Chart::Plus,
                    ..self.clone()
                };
                Ok(mirror_hn(&mirrored.hn_indecomposable(m, !twist)?))
            }
            Chart::Plus => self.hn_plus_outside_overlap(&rep, m, twist),
            Chart::Wall => unreachable!("wall points lie in the overlap"),
        }
    }

    /// HN data on the PLUS chart when `|t| ≥ 1`, read off from the defining triangles.
    fn hn_plus_outside_overlap(
        &self,
        rep: &ChamberReport,
        m: u32,
        twist: bool,
    ) -> Result<HnResult> {
        let idx = match (m, twist) {
            (1, false) => 0,
            (1, true) => 1,
            (2, false) => 2,
            _ => 3,
        };
        let obj = &rep.objects[idx];
        let tors = |mm: u32, tw: bool| FactorLabel::torsion(0, mm, tw);
        let cls = |mm: u32, tw: bool| KClass::torsion(1, 0, mm, tw);
        if let Some(ph) = &obj.phase {
            return Ok(HnResult::single(tors(m, twist), cls(m, twist), ph.clone()));
        }
        let fi = self.f.im();
        let t = &self.coord.im() + &fi;
        let zero = fi.clone();
        let point = HnFactor {
            label: tors(1, false),
            class: cls(1, false),
            phase: t.clone(),
        };
        let point_down = HnFactor {
            label: tors(1, false).shifted(-1),
            class: cls(1, false).scale(-1),
            phase: t.add_int(-1),
        };
        let point_up = HnFactor {
            label: tors(1, false).shifted(1),
            class: cls(1, false).scale(-1),
            phase: t.add_int(1),
        };
        let double = HnFactor {
            label: tors(2, false),
            class: cls(2, false),
            phase: zero.clone(),
        };
        let zeta_double = HnFactor {
            label: tors(2, true),
            class: cls(2, true),
            phase: zero.clone(),
        };
        let zeta_point = rep.zeta_point().phase.clone().map(|p| HnFactor {
            label: tors(1, true),
            class: cls(1, true),
            phase: p,
        });
        let above = t > zero;
        let factors = match (m, twist, above) {
            (1, true, true) => vec![point_down, double],
            (1, true, false) => vec![zeta_double, point_up],
            (2, true, true) => match zeta_point {
                Some(zp) => vec![point, zp],
                None => vec![point, point_down, double],
            },
            (2, false, false) => match zeta_point {
                Some(zp) => vec![zp, point],
                None => vec![zeta_double, point_up, point],
            },
            _ => return Err(Error::InvalidStability("unexpected unstable object".into())),
        };
        Ok(HnResult { factors })
    }
}

fn mirror_hn(r: &HnResult) -> HnResult {
    let swap = TwistGen::Point {
        index: 0,
        inverse: false,
    };
    HnResult {
        factors: r
            .factors
            .iter()
            .map(|f| HnFactor {
                label: f
                    .label
                    .map_torsion(&|p, m, t| FactorLabel::torsion(p, m, !t)),
                class: twist_class(swap, &f.class).expect("one-point lattice"),
                phase: f.phase.clone(),
            })
            .collect(),
    }
}

fn wall_report() -> ChamberReport {
    let z = PhaseLift::zero();
    ChamberReport {
        objects: [
            ObjectStatus::stable(z.clone()),
            ObjectStatus::stable(z.clone()),
            ObjectStatus::strict(z.clone()),
            ObjectStatus::strict(z),
        ],
    }
}

/// Case analysis on the PLUS chart over `Σ`, with `t` the phase lift of `O_p`.
fn plus_report(coord: &LogValue) -> Result<ChamberReport> {
    let t = coord.im();
    let zero = PhaseLift::zero();
    if t == zero {
        return Ok(wall_report());
    }
    let w = &one() - coord.exp();
    let one_l = PhaseLift::from_int(1);
    let minus_one = PhaseLift::from_int(-1);
    let op = ObjectStatus::stable(t.clone());
    let no_lift = || Error::InvalidStability("ζO_p has no lift in the expected window".into());
    if t > zero {
        let zop = if t < one_l {
            ObjectStatus::stable(
                PhaseLift::lift_into_open(&w, &t.add_int(-1), &zero)?.ok_or_else(no_lift)?,
            )
        } else if t == one_l {
            ObjectStatus::strict(zero.clone())
        } else {
            ObjectStatus::unstable()
        };
        Ok(ChamberReport {
            objects: [
                op,
                zop,
                ObjectStatus::stable(zero),
                ObjectStatus::unstable(),
            ],
        })
    } else {
        let zop = if t > minus_one {
            ObjectStatus::stable(
                PhaseLift::lift_into_open(&w, &zero, &t.add_int(1))?.ok_or_else(no_lift)?,
            )
        } else if t == minus_one {
            ObjectStatus::strict(zero.clone())
        } else {
            ObjectStatus::unstable()
        };
        Ok(ChamberReport {
            objects: [
                op,
                zop,
                ObjectStatus::unstable(),
                ObjectStatus::stable(zero),
            ],
        })
    }
}

/// Brute-force chamber data for the standard heart, from HN polygons of the four chains.
pub fn oracle_chamber(u: &QComplex, w: &QComplex) -> Result<ChamberReport> {
    for z in [u, w] {
        if z.is_zero() || !z.in_h_prime() {
            return Err(Error::InvalidStabilityFunction(format!(
                "{z} is not in the upper half-plane or R<0"
            )));
        }
    }
    let z = CentralCharge::local(u, w);
    let theta = PhaseLift::zero();
    let mut objects = Vec::with_capacity(4);
    for (m, twist) in [(1, false), (1, true), (2, false), (2, true)] {
        let obj = ChainObject::torsion(1, 0, m, twist)?;
        let (ss, strict) = chain_status(&obj, &z, &theta)?;
        objects.push(if !ss {
            ObjectStatus::unstable()
        } else {
            let ph = PhaseLift::in_heart(&z.eval(obj.class())?)?;
            if strict {
                ObjectStatus::strict(ph)
            } else {
                ObjectStatus::stable(ph)
            }
        });
    }
    Ok(ChamberReport {
        objects: objects.try_into().expect("four objects"),
    })
}

/// One summand `mult · ζ^twist ⊗ O_{mp}[shift]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalSummand {
    pub mult: u32,
    pub m: u32,
    pub twist: bool,
    pub shift: i64,
}

/// Finite direct sum of shifted indecomposable torsion objects.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LocalObject {
    pub summands: Vec<LocalSummand>,
}

impl LocalObject {
    pub fn single(m: u32, twist: bool, shift: i64) -> Self {
        Self {
            summands: vec![LocalSummand {
                mult: 1,
                m,
                twist,
                shift,
            }],
        }
    }

    pub fn class(&self) -> KClass {
        self.summands.iter().fold(KClass::zero(1), |acc, s| {
            let sign = if s.shift.rem_euclid(2) == 0 { 1 } else { -1 };
            &acc + &KClass::torsion(1, 0, s.m, s.twist).scale(sign * s.mult as i64)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qi};

    fn c(re: i64, im: i64) -> QComplex {
        QComplex::from_ints(re, im)
    }

    fn exact(o: &ObjectStatus) -> Option<Q> {
        o.phase.as_ref().and_then(|p| p.exact_value())
    }

    #[test]
    fn plus_chart_small_lift() {
        // u = (1 + i)/4 has phase lift 1/4 on Σ.
        let coord = LogValue::new(QComplex::new(q(1, 4), q(1, 4)), 0).unwrap();
        let s = LocalStability::plus(LogValue::zero(), coord).unwrap();
        let rep = s.chamber().unwrap();
        assert_eq!(rep.code(), "SSSU");
        assert_eq!(exact(rep.point()), Some(q(1, 4)));
        assert_eq!(exact(rep.double()), Some(qi(0)));
        let zp = rep.zeta_point().phase.as_ref().unwrap().to_f64();
        assert!(zp < 0.0 && zp > -0.75);
    }

    #[test]
    fn plus_chart_large_lift() {
        // phase 3/2: u = −i.
        let coord = LogValue::new(c(0, -1), 1).unwrap();
        let rep = LocalStability::plus(LogValue::zero(), coord)
            .unwrap()
            .chamber()
            .unwrap();
        assert_eq!(rep.code(), "SUSU");
        assert_eq!(exact(rep.point()), Some(q(3, 2)));
    }

    #[test]
    fn wall_point() {
        let rep = LocalStability::wall(LogValue::zero(), q(1, 3))
            .unwrap()
            .chamber()
            .unwrap();
        assert_eq!(rep.code(), "SSss");
        assert!(rep.objects.iter().all(|o| exact(o) == Some(qi(0))));
    }

    #[test]
    fn branch_cut_rejected() {
        let coord = LogValue::new(c(2, 0), 0).unwrap();
        assert_eq!(
            LocalStability::plus(LogValue::zero(), coord),
            Err(Error::BranchCut)
        );
    }

    #[test]
    fn boundary_lift_is_strictly_semistable() {
        let coord = LogValue::new(c(-1, 0), 0).unwrap();
        let rep = LocalStability::plus(LogValue::zero(), coord)
            .unwrap()
            .chamber()
            .unwrap();
        assert_eq!(rep.code(), "SsSU");
    }

    #[test]
    fn oracle_examples() {
        let rep = oracle_chamber(&c(-1, 0), &c(-1, 0)).unwrap();
        assert_eq!(rep.code(), "SSss");
        // O_2p contains ζO_p and ζO_2p contains O_p.
        let rep = oracle_chamber(&c(-1, 0), &c(0, 1)).unwrap();
        assert_eq!(rep.code(), "SSSU");
        assert_eq!(exact(rep.double()), Some(q(3, 4)));
        let rep = oracle_chamber(&c(0, 1), &c(-1, 0)).unwrap();
        assert_eq!(rep.code(), "SSUS");
        assert_eq!(exact(rep.zeta_double()), Some(q(3, 4)));
    }

    #[test]
    fn classification_matches_oracle_on_examples() {
        for (u, w) in [
            (c(-1, 0), c(0, 1)),
            (c(0, 1), c(-1, 0)),
            (c(-1, 0), c(-1, 0)),
            (c(2, 1), c(-3, 1)),
            (c(-1, 2), c(-2, 4)),
        ] {
            let s = LocalStability::from_charges(&u, &w).unwrap();
            assert_eq!(
                s.chamber().unwrap(),
                oracle_chamber(&u, &w).unwrap(),
                "u = {u}, w = {w}"
            );
        }
    }

    #[test]
    fn c_action_examples() {
        let s = LocalStability::from_charges(&c(1, 1), &c(-1, 1)).unwrap();
        let back = s.act_c(&LogValue::i_times(1)).act_c(&LogValue::i_times(-1));
        assert_eq!(back, s);
        let sigma = LocalStability::wall(LogValue::zero(), q(1, 2)).unwrap();
        assert!(sigma.f_of().unwrap().is_zero());
        let turned = sigma.act_c(&LogValue::i_times(1));
        let (u, w) = turned.charges();
        assert_eq!(&u + &w, c(-1, 0));
        assert_eq!(
            turned
                .chamber()
                .unwrap()
                .double()
                .phase
                .as_ref()
                .unwrap()
                .exact_value(),
            Some(qi(1))
        );
        let scaled = sigma.act_c(&LogValue::new(c(2, 0), 0).unwrap());
        let (u, w) = scaled.charges();
        assert_eq!(&u + &w, c(2, 0));
    }

    #[test]
    fn chart_transition_round_trips() {
        let s = LocalStability::from_charges(&c(1, 2), &c(-2, 1)).unwrap();
        let t = s.chart_transition().unwrap();
        assert_eq!(t.chart, Chart::Minus);
        assert_eq!(t.charges(), s.charges());
        assert_eq!(t.chamber().unwrap(), s.chamber().unwrap());
        assert_eq!(t.chart_transition().unwrap(), s);
        let far =
            LocalStability::plus(LogValue::zero(), LogValue::new(c(0, -1), 1).unwrap()).unwrap();
        assert!(matches!(far.chart_transition(), Err(Error::NotInRegion(_))));
    }

    #[test]
    fn delta_vanishes_on_w_plus() {
        let s = LocalStability::from_charges(&c(-1, 1), &c(1, 1)).unwrap();
        assert!(s.chamber().unwrap().in_w_plus());
        assert_eq!(s.delta().unwrap(), qi(0));
        let t = LocalStability::from_charges(&c(1, 1), &c(-1, 1)).unwrap();
        assert!(t.chamber().unwrap().in_w_minus());
        assert_eq!(t.delta().unwrap(), det2(&c(-1, 1), &c(0, 2)));
    }

    #[test]
    fn local_hn_examples() {
        let s = LocalStability::from_charges(&c(0, 1), &c(-1, 0)).unwrap();
        let hn = s.hn_local(&LocalObject::single(3, false, 0)).unwrap();
        let ph: Vec<_> = hn
            .factors
            .iter()
            .map(|f| f.phase.exact_value().unwrap())
            .collect();
        assert_eq!(ph, vec![q(3, 4), q(1, 2)]);
        let base = s.hn_local(&LocalObject::single(2, true, 0)).unwrap();
        let shifted = s.hn_local(&LocalObject::single(2, true, 5)).unwrap();
        for (a, b) in base.factors.iter().zip(&shifted.factors) {
            assert_eq!(b.phase, a.phase.add_int(5));
        }
        let far =
            LocalStability::plus(LogValue::zero(), LogValue::new(c(0, -1), 1).unwrap()).unwrap();
        assert!(far
            .hn_local(&LocalObject::single(1, false, 0))
            .unwrap()
            .is_semistable());
        let split = far.hn_local(&LocalObject::single(1, true, 0)).unwrap();
        assert_eq!(split.factors.len(), 2);
        assert_eq!(split.class_sum(1), KClass::zeta_point(1, 0));
        assert!(far.hn_local(&LocalObject::single(3, false, 0)).is_err());
    }
}
