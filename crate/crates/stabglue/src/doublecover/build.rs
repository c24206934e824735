use num_traits::{Signed, Zero};

use super::{GlobalObject, GlobalStability, GlobalSummand, PartitionData, PointClass};
use crate::error::{Error, Result};
use crate::exact::{LogValue, PhaseLift, QComplex};
use crate::klattice::{twist_class, CentralCharge, FrameAction, Geometry, KClass, TwistGen};
use crate::local_stab::{LocalObject, LocalStability, Status};
use crate::slicing::{hn_direct_sum, FactorLabel, HnFactor, HnResult};

/// Status of a small object in the caller's frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableObject {
    pub label: FactorLabel,
    pub class: KClass,
    pub status: Status,
    pub phase: Option<PhaseLift>,
}

/// Interval of phases, each end open or closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseBounds {
    pub lower: PhaseLift,
    pub lower_open: bool,
    pub upper: PhaseLift,
    pub upper_open: bool,
}

impl PhaseBounds {
    fn open(lower: PhaseLift, upper: PhaseLift) -> Self {
        Self {
            lower,
            lower_open: true,
            upper,
            upper_open: true,
        }
    }

    fn include(&mut self, p: &PhaseLift) {
        if *p < self.lower || (*p == self.lower && self.lower_open) {
            self.lower = p.clone();
            self.lower_open = false;
        }
        if *p > self.upper || (*p == self.upper && self.upper_open) {
            self.upper = p.clone();
            self.upper_open = false;
        }
    }

    fn shifted(&self, by: &PhaseLift) -> Self {
        Self {
            lower: &self.lower - by,
            lower_open: self.lower_open,
            upper: &self.upper - by,
            upper_open: self.upper_open,
        }
    }

    fn shift_int(&self, k: i64) -> Self {
        Self {
            lower: self.lower.add_int(k),
            lower_open: self.lower_open,
            upper: self.upper.add_int(k),
            upper_open: self.upper_open,
        }
    }

    pub fn contains(&self, p: &PhaseLift) -> bool {
        let above = if self.lower_open {
            *p > self.lower
        } else {
            *p >= self.lower
        };
        let below = if self.upper_open {
            *p < self.upper
        } else {
            *p <= self.upper
        };
        above && below
    }
}

/// One torsion quotient `ζ^twist ⊗ O_{p_point}` of a line-bundle certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionPiece {
    pub point: usize,
    pub twist: bool,
    pub phase: PhaseLift,
}

/// A line bundle exhibited as an extension of torsion pieces by a pullback-type subbundle, in
/// the caller's frame, with the resulting phase bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineBundleCertificate {
    pub object: GlobalSummand,
    /// Subobject: a pullback bundle twisted by the frame's line bundle.
    pub sub: GlobalSummand,
    pub quotients: Vec<TorsionPiece>,
    pub bounds: PhaseBounds,
    /// Phase of the charge of the whole object.
    pub charge_phase: PhaseLift,
}

/// Line bundle `ζ^zeta ⊗ O(Σ_{i∈points} p_i) ⊗ π*M_deg` under tensoring.
#[derive(Clone, Debug, PartialEq, Eq)]
struct BundleWord {
    zeta: bool,
    points: Vec<bool>,
    deg: i64,
}

impl BundleWord {
    fn apply(&mut self, g: TwistGen) {
        match g {
            TwistGen::Point { index, inverse } => {
                let had = self.points[index];
                self.points[index] = !had;
                // O(2p) is the pullback of a degree-one bundle.
                match (had, inverse) {
                    (true, false) => self.deg += 1,
                    (false, true) => self.deg -= 1,
                    _ => {}
                }
            }
            TwistGen::Zeta => self.zeta = !self.zeta,
            TwistGen::Pullback { deg } => self.deg += deg,
        }
    }

    fn summand(&self) -> GlobalSummand {
        GlobalSummand::LineBundle {
            deg: self.deg,
            points: (0..self.points.len()).filter(|&i| self.points[i]).collect(),
        }
    }
}

const SMALL: [(u32, bool); 4] = [(1, false), (1, true), (2, false), (2, true)];

fn in_h_prime_nonzero(z: &QComplex) -> bool {
    !z.is_zero() && z.in_h_prime()
}

fn negative_real(z: &QComplex) -> bool {
    z.im.is_zero() && z.re.is_negative()
}

fn check_hypotheses(z: &CentralCharge, partition: &PartitionData) -> Result<()> {
    let fail = |condition: usize, detail: String| Err(Error::Hypothesis { condition, detail });
    if !z.ox().im.is_positive() {
        return fail(1, format!("Im Z(O_X) = {} is not positive", z.ox().im));
    }
    if !negative_real(z.fiber()) {
        return fail(1, format!("Z(v) = {} is not a negative real", z.fiber()));
    }
    for (i, p) in partition.points.iter().enumerate() {
        let sign = |k: u32| if k.is_multiple_of(2) { 1 } else { -1 };
        match *p {
            PointClass::Plus(k) => {
                if !in_h_prime_nonzero(&z.point(i).scale_int(sign(k))) {
                    return fail(
                        2,
                        format!("Z(O_p{}[-{k}]) is outside the upper half-plane", i + 1),
                    );
                }
            }
            PointClass::Minus(k) => {
                if !in_h_prime_nonzero(&z.zeta_point(i).scale_int(sign(k))) {
                    return fail(
                        2,
                        format!("Z(ζO_p{}[{k}]) is outside the upper half-plane", i + 1),
                    );
                }
            }
            PointClass::Zero => {
                if !negative_real(z.point(i)) || !negative_real(&z.zeta_point(i)) {
                    return fail(
                        3,
                        format!("Z(O_p{0}) or Z(ζO_p{0}) is not a negative real", i + 1),
                    );
                }
            }
        }
    }
    Ok(())
}

/// Stability glued from the partition, with `Z` already in normalized position.
pub fn build_stability(
    z: &CentralCharge,
    partition: &PartitionData,
    geom: &Geometry,
) -> Result<GlobalStability> {
    GlobalStability::new(*geom, z.clone(), partition.clone(), FrameAction::identity())
}

impl GlobalStability {
    /// Checks that `frame` carries `charge` to a charge satisfying the gluing hypotheses.
    pub fn new(
        geometry: Geometry,
        charge: CentralCharge,
        partition: PartitionData,
        frame: FrameAction,
    ) -> Result<Self> {
        for found in [charge.n(), partition.n()] {
            if found != geometry.n {
                return Err(Error::DimensionMismatch {
                    expected: geometry.n,
                    found,
                });
            }
        }
        let normalized = frame.apply(&charge)?;
        check_hypotheses(&normalized, &partition)?;
        Ok(Self {
            geometry,
            charge,
            partition,
            frame,
            normalized,
        })
    }

    pub fn n(&self) -> usize {
        self.geometry.n
    }

    /// Amount by which normalized phases exceed caller phases.
    pub fn phase_offset(&self) -> PhaseLift {
        self.frame.scalar.im()
    }

    /// `f` of the normalized local stabilities: `exp(πf) = Z(v)` with `Im f = 1`.
    fn normalized_f(&self) -> Result<LogValue> {
        LogValue::new(self.normalized.fiber().clone(), 0)
    }

    /// Restriction to the local category at point `i`, in the normalized frame.
    pub fn local_normalized(&self, i: usize) -> Result<LocalStability> {
        self.geometry.check_point(i)?;
        let f = self.normalized_f()?;
        let v = self.normalized.fiber();
        let sign = |k: u32| if k.is_multiple_of(2) { 1 } else { -1 };
        match self.partition.points[i] {
            PointClass::Zero => LocalStability::wall(f, self.normalized.point(i).div(v)?.re),
            PointClass::Plus(k) => {
                let p = self.normalized.point(i);
                let t = PhaseLift::in_heart(&p.scale_int(sign(k)))?.add_int(k as i64 - 1);
                LocalStability::plus(f, LogValue::from_exp_and_im(p.div(v)?, &t)?)
            }
            PointClass::Minus(k) => {
                let w = self.normalized.zeta_point(i);
                let t = PhaseLift::in_heart(&w.scale_int(sign(k)))?.add_int(-(k as i64) - 1);
                LocalStability::minus(f, LogValue::from_exp_and_im(w.div(v)?, &t)?)
            }
        }
    }

    /// Restriction to the local category at point `i`, in the caller's frame.
    pub fn local(&self, i: usize) -> Result<LocalStability> {
        let mut s = self.local_normalized(i)?;
        if self.frame.toggles_point(i) {
            s = s.swap_roles()?;
        }
        Ok(s.act_c(&-&self.frame.scalar))
    }

    /// Statuses of the generic fibre and of `O_p`, `ζ⊗O_p`, `O_{2p}`, `ζ⊗O_{2p}` at every point.
    pub fn stable_objects(&self) -> Result<Vec<StableObject>> {
        let n = self.n();
        let offset = self.phase_offset();
        let mut out = vec![StableObject {
            label: FactorLabel::Fiber,
            class: KClass::fiber(n),
            status: Status::Stable,
            phase: Some(&PhaseLift::from_int(1) - &offset),
        }];
        for i in 0..n {
            let report = self.local_normalized(i)?.chamber()?;
            let toggle = self.frame.toggles_point(i);
            for (obj, &(m, twist)) in report.objects.iter().zip(&SMALL) {
                let twist = twist ^ toggle;
                out.push(StableObject {
                    label: FactorLabel::torsion(i, m, twist),
                    class: KClass::torsion(n, i, m, twist),
                    status: obj.status,
                    phase: obj.phase.as_ref().map(|p| p - &offset),
                });
            }
        }
        Ok(out)
    }

    /// Heart generators in the normalized frame, torsion part first.
    pub fn heart_descriptor(&self) -> Vec<String> {
        let mut out = Vec::new();
        for i in self.partition.i_minus() {
            out.push(format!(
                "ζO_p{}[{}]",
                i + 1,
                self.partition.points[i].shift().unwrap_or(1)
            ));
        }
        let zero: Vec<String> = self
            .partition
            .i_zero()
            .iter()
            .map(|i| format!("p{}", i + 1))
            .collect();
        out.push(format!("Coh({{{}}})", zero.join(",")));
        for i in self.partition.i_plus() {
            out.push(format!(
                "O_p{}[-{}]",
                i + 1,
                self.partition.points[i].shift().unwrap_or(1)
            ));
        }
        out
    }

    fn to_caller(&self, f: HnFactor, point: usize, toggle: bool) -> Result<HnFactor> {
        let n = self.n();
        let class = f.class.embed_point(n, 0, point);
        let class = if toggle {
            twist_class(
                TwistGen::Point {
                    index: point,
                    inverse: false,
                },
                &class,
            )?
        } else {
            class
        };
        Ok(HnFactor {
            label: f
                .label
                .map_torsion(&|_, m, t| FactorLabel::torsion(point, m, t ^ toggle)),
            class,
            phase: &f.phase - &self.phase_offset(),
        })
    }

    /// HN filtration of a torsion object; line bundles go through [`Self::reduce_line_bundle`].
    pub fn hn_global(&self, obj: &GlobalObject) -> Result<HnResult> {
        obj.validate(self.n())?;
        let mut parts = Vec::new();
        for term in &obj.terms {
            let one =
                match &term.summand {
                    GlobalSummand::Fiber => HnResult::single(
                        FactorLabel::Fiber,
                        KClass::fiber(self.n()),
                        &PhaseLift::from_int(1) - &self.phase_offset(),
                    ),
                    GlobalSummand::Torsion { point, m, twist } => {
                        let toggle = self.frame.toggles_point(*point);
                        let local = self
                            .local_normalized(*point)?
                            .hn_local(&LocalObject::single(*m, twist ^ toggle, 0))?;
                        let factors = local
                            .factors
                            .into_iter()
                            .map(|f| self.to_caller(f, *point, toggle))
                            .collect::<Result<_>>()?;
                        HnResult { factors }
                    }
                    GlobalSummand::LineBundle { .. } => return Err(Error::UnsupportedObject(
                        "line bundles have no algorithmic HN filtration; use reduce_line_bundle"
                            .into(),
                    )),
                }
                .shift(term.shift);
            parts.extend(std::iter::repeat_n(one, term.mult as usize));
        }
        Ok(hn_direct_sum(&parts))
    }

    /// Certificate placing a line bundle in the glued heart, with phase bounds.
    pub fn reduce_line_bundle(&self, obj: &GlobalObject) -> Result<LineBundleCertificate> {
        obj.validate(self.n())?;
        let (deg, points, shift) = match obj.terms.as_slice() {
            [t] if t.mult == 1 => match &t.summand {
                GlobalSummand::LineBundle { deg, points } => (*deg, points.clone(), t.shift),
                _ => return Err(Error::UnsupportedObject("expected a line bundle".into())),
            },
            _ => {
                return Err(Error::UnsupportedObject(
                    "expected a single line bundle".into(),
                ))
            }
        };
        if !self.partition.unit_shifts() || !self.partition.i_minus().is_empty() {
            return Err(Error::Precondition(
                "line-bundle certificates need I⁻ = ∅ and all shifts equal to 1".into(),
            ));
        }
        let n = self.n();
        let mut word = BundleWord {
            zeta: false,
            points: (0..n).map(|i| points.contains(&i)).collect(),
            deg,
        };
        let object = word.summand();
        for g in self.frame.inverse().twists {
            word.apply(g);
        }
        if word.zeta {
            return Err(Error::UnsupportedObject(
                "ζ-twisted line bundles are not covered".into(),
            ));
        }
        let offset = self.phase_offset();
        let mut sub = BundleWord {
            zeta: false,
            points: vec![false; n],
            deg: word.deg,
        };
        let mut bounds = PhaseBounds::open(PhaseLift::zero(), PhaseLift::from_int(1));
        let mut quotients = Vec::new();
        for i in (0..n).filter(|&i| word.points[i]) {
            let report = self.local_normalized(i)?.chamber()?;
            let phase = report
                .zeta_point()
                .phase
                .clone()
                .ok_or_else(|| Error::InvalidStability(format!("ζO_p{} is unstable", i + 1)))?;
            bounds.include(&phase);
            quotients.push(TorsionPiece {
                point: i,
                twist: !self.frame.toggles_point(i),
                phase: &phase - &offset,
            });
        }
        for &g in &self.frame.twists {
            sub.apply(g);
        }
        let class = KClass::line_bundle(
            n,
            word.deg,
            &(0..n).filter(|&i| word.points[i]).collect::<Vec<_>>(),
        );
        let charge_phase = PhaseLift::in_heart(&self.normalized.eval(&class)?)?;
        Ok(LineBundleCertificate {
            object,
            sub: sub.summand(),
            quotients: quotients
                .into_iter()
                .map(|q| TorsionPiece {
                    phase: q.phase.add_int(shift),
                    ..q
                })
                .collect(),
            bounds: bounds.shifted(&offset).shift_int(shift),
            charge_phase: (&charge_phase - &offset).add_int(shift),
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

    fn standard(n: usize) -> CentralCharge {
        CentralCharge::uniform(n, c(0, 1), c(-1, 0), QComplex::new(q(-1, 2), q(0, 1)))
    }

    fn exact(p: &Option<PhaseLift>) -> Option<crate::exact::Q> {
        p.as_ref().and_then(|p| p.exact_value())
    }

    #[test]
    fn standard_stability() {
        let g = Geometry::new(2, 1).unwrap();
        let s = build_stability(&standard(2), &PartitionData::all_zero(2), &g).unwrap();
        let objs = s.stable_objects().unwrap();
        assert_eq!(objs.len(), 9);
        for o in &objs {
            assert_eq!(exact(&o.phase), Some(qi(1)));
        }
        let double = objs
            .iter()
            .find(|o| o.label == FactorLabel::torsion(0, 2, false))
            .unwrap();
        assert_eq!(double.status, Status::StrictlySemistable);
        assert_eq!(s.heart_descriptor(), vec!["Coh({p1,p2})".to_string()]);
    }

    #[test]
    fn plus_point() {
        let g = Geometry::new(1, 1).unwrap();
        let z = CentralCharge::new(c(0, 1), c(-1, 0), vec![c(-1, -1)]).unwrap();
        let s = build_stability(
            &z,
            &PartitionData::new(vec![PointClass::Plus(1)]).unwrap(),
            &g,
        )
        .unwrap();
        let objs = s.stable_objects().unwrap();
        assert_eq!(
            (objs[1].status, exact(&objs[1].phase)),
            (Status::Stable, Some(q(5, 4)))
        );
        assert_eq!(
            (objs[2].status, exact(&objs[2].phase)),
            (Status::Stable, Some(q(1, 2)))
        );
        assert_eq!(
            (objs[3].status, exact(&objs[3].phase)),
            (Status::Stable, Some(qi(1)))
        );
        assert_eq!(objs[4].status, Status::Unstable);
        let hn = s.hn_global(&GlobalObject::torsion(0, 2, true)).unwrap();
        let labels: Vec<FactorLabel> = hn.factors.iter().map(|f| f.label.clone()).collect();
        assert_eq!(
            labels,
            vec![
                FactorLabel::torsion(0, 1, false),
                FactorLabel::torsion(0, 1, true)
            ]
        );
        assert_eq!(
            hn.phases()
                .iter()
                .map(|p| p.exact_value().unwrap())
                .collect::<Vec<_>>(),
            vec![q(5, 4), q(1, 2)]
        );
        assert_eq!(hn.class_sum(1), KClass::torsion(1, 0, 2, true));
    }

    #[test]
    fn hypotheses_are_indexed() {
        let g = Geometry::new(1, 1).unwrap();
        let p0 = PartitionData::all_zero(1);
        let bad1 =
            CentralCharge::new(c(0, -1), c(-1, 0), vec![QComplex::new(q(-1, 2), q(0, 1))]).unwrap();
        assert!(matches!(
            build_stability(&bad1, &p0, &g),
            Err(Error::Hypothesis { condition: 1, .. })
        ));
        let bad3 = CentralCharge::new(c(0, 1), c(-1, 0), vec![c(-1, -1)]).unwrap();
        assert!(matches!(
            build_stability(&bad3, &p0, &g),
            Err(Error::Hypothesis { condition: 3, .. })
        ));
        let bad2 = CentralCharge::new(c(0, 1), c(-1, 0), vec![c(-1, 1)]).unwrap();
        let plus = PartitionData::new(vec![PointClass::Plus(1)]).unwrap();
        assert!(matches!(
            build_stability(&bad2, &plus, &g),
            Err(Error::Hypothesis { condition: 2, .. })
        ));
        let two = PartitionData::new(vec![PointClass::Plus(2)]).unwrap();
        let s = build_stability(&bad2, &two, &g).unwrap();
        let objs = s.stable_objects().unwrap();
        assert_eq!(objs[1].status, Status::Stable);
        assert_ne!(objs[2].status, Status::Stable);
    }

    #[test]
    fn line_bundle_certificates() {
        let g = Geometry::new(1, 1).unwrap();
        let s = build_stability(&standard(1), &PartitionData::all_zero(1), &g).unwrap();
        let cert = s
            .reduce_line_bundle(&"LineBundle(0,[])".parse().unwrap())
            .unwrap();
        assert!(cert.quotients.is_empty());
        assert_eq!(
            cert.bounds,
            PhaseBounds::open(PhaseLift::zero(), PhaseLift::from_int(1))
        );
        let cert = s
            .reduce_line_bundle(&"LineBundle(2,[1])".parse().unwrap())
            .unwrap();
        assert_eq!(
            cert.sub,
            GlobalSummand::LineBundle {
                deg: 2,
                points: vec![]
            }
        );
        assert_eq!(cert.quotients.len(), 1);
        assert!(cert.quotients[0].twist);
        assert!(cert.bounds.contains(&cert.charge_phase));
    }
}
