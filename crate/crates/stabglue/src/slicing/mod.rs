//! Phases, chain-structured objects and Harder–Narasimhan filtrations computed as upper convex
//! hulls of the charge path along the chain.

mod diagnostics;

pub use diagnostics::{
    charge_norm, closeness_check, min_charge_modulus, num_lem_bound, sector_bound_check,
    ClosenessReport, ModulusReport, NormReport, NumLemReport, SectorReport,
};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_q, PhaseLift, QComplex};
use crate::klattice::{CentralCharge, KClass};

/// Principal phase: in `(0, 1]` on the upper half-plane and negative reals, otherwise in `(−1, 0]`.
pub fn phase(z: &QComplex) -> Result<PhaseLift> {
    PhaseLift::principal(z)
}

/// Name of an HN factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FactorLabel {
    /// `ζ^twist ⊗ O_{m p_point}`.
    Torsion {
        point: usize,
        m: u32,
        twist: bool,
    },
    /// A generic fibre.
    Fiber,
    Named(String),
    /// `inner[by]`.
    Shift {
        inner: Box<FactorLabel>,
        by: i64,
    },
    /// Direct sum of factors sharing a phase.
    Sum(Vec<FactorLabel>),
}

impl FactorLabel {
    pub fn torsion(point: usize, m: u32, twist: bool) -> Self {
        Self::Torsion { point, m, twist }
    }

    /// Applies `f` to every torsion summand.
    pub fn map_torsion(&self, f: &impl Fn(usize, u32, bool) -> FactorLabel) -> Self {
        match self {
            Self::Torsion { point, m, twist } => f(*point, *m, *twist),
            Self::Sum(parts) => Self::Sum(parts.iter().map(|p| p.map_torsion(f)).collect()),
            Self::Shift { inner, by } => Self::Shift {
                inner: Box::new(inner.map_torsion(f)),
                by: *by,
            },
            other => other.clone(),
        }
    }

    pub fn shifted(self, by: i64) -> Self {
        match self {
            _ if by == 0 => self,
            Self::Shift { inner, by: k } if k + by == 0 => *inner,
            Self::Shift { inner, by: k } => Self::Shift { inner, by: k + by },
            other => Self::Shift {
                inner: Box::new(other),
                by,
            },
        }
    }

    fn merged(self, other: FactorLabel) -> Self {
        let mut parts = match self {
            Self::Sum(p) => p,
            l => vec![l],
        };
        match other {
            Self::Sum(p) => parts.extend(p),
            l => parts.push(l),
        }
        parts.sort();
        Self::Sum(parts)
    }
}

impl fmt::Display for FactorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Torsion { point, m, twist } => {
                let z = if *twist { "ζ" } else { "" };
                let mult = if *m == 1 {
                    String::new()
                } else {
                    m.to_string()
                };
                write!(f, "{z}O_{mult}p{}", point + 1)
            }
            Self::Fiber => write!(f, "O_fiber"),
            Self::Named(s) => write!(f, "{s}"),
            Self::Shift { inner, by } => write!(f, "{inner}[{by}]"),
            Self::Sum(parts) => {
                let text: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", text.join(" ⊕ "))
            }
        }
    }
}

/// An object whose subobjects form a single chain `0 = M_0 ⊂ M_1 ⊂ … ⊂ M_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainObject {
    classes: Vec<KClass>,
    labels: Vec<Vec<FactorLabel>>,
}

impl ChainObject {
    /// `classes[k]` is the class of `M_{k+1}`; `labels[a][b − a − 1]` names `M_b / M_a`.
    pub fn new(classes: Vec<KClass>, labels: Vec<Vec<FactorLabel>>) -> Result<Self> {
        let m = classes.len();
        if m == 0 {
            return Err(Error::Precondition("empty chain".into()));
        }
        if labels.len() != m || labels.iter().enumerate().any(|(a, row)| row.len() != m - a) {
            return Err(Error::Precondition(
                "label table does not match the chain length".into(),
            ));
        }
        Ok(Self { classes, labels })
    }

    /// Chain of `ζ^twist ⊗ O_{m p_i}`: `M_l = ζ^{twist+m−l} ⊗ O_{l p_i}` and
    /// `M_b / M_a ≅ ζ^{twist+m−b} ⊗ O_{(b−a) p_i}`.
    pub fn torsion(n: usize, point: usize, m: u32, twist: bool) -> Result<Self> {
        if m == 0 {
            return Err(Error::Precondition(
                "torsion length must be positive".into(),
            ));
        }
        let parity = |k: u32| (twist as u32 + m - k) % 2 == 1;
        let classes = (1..=m)
            .map(|l| KClass::torsion(n, point, l, parity(l)))
            .collect();
        let labels = (0..m)
            .map(|a| {
                (a + 1..=m)
                    .map(|b| FactorLabel::torsion(point, b - a, parity(b)))
                    .collect()
            })
            .collect();
        Self::new(classes, labels)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class(&self) -> &KClass {
        self.classes.last().expect("nonempty chain")
    }

    /// Class of `M_k`, with `M_0 = 0`.
    pub fn member(&self, k: usize) -> KClass {
        if k == 0 {
            KClass::zeros(self.classes[0].coords.len())
        } else {
            self.classes[k - 1].clone()
        }
    }

    pub fn classes(&self) -> &[KClass] {
        &self.classes
    }

    pub fn quotient_label(&self, a: usize, b: usize) -> &FactorLabel {
        &self.labels[a][b - a - 1]
    }

    /// The subquotient `M_b / M_a` as a chain object of its own.
    pub fn subquotient(&self, a: usize, b: usize) -> Self {
        let base = self.member(a);
        let classes = (a + 1..=b).map(|k| &self.member(k) - &base).collect();
        let labels = (a..b)
            .map(|s| {
                (s + 1..=b)
                    .map(|t| self.quotient_label(s, t).clone())
                    .collect()
            })
            .collect();
        Self { classes, labels }
    }
}

/// One semistable factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnFactor {
    pub label: FactorLabel,
    pub class: KClass,
    pub phase: PhaseLift,
}

/// Semistable factors with strictly decreasing phases.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HnResult {
    pub factors: Vec<HnFactor>,
}

impl HnResult {
    pub fn single(label: FactorLabel, class: KClass, phase: PhaseLift) -> Self {
        Self {
            factors: vec![HnFactor {
                label,
                class,
                phase,
            }],
        }
    }

    pub fn is_semistable(&self) -> bool {
        self.factors.len() <= 1
    }

    /// Sum of factor classes for the double-cover lattice with `n` points.
    pub fn class_sum(&self, n: usize) -> KClass {
        self.class_total(n + 2)
    }

    /// Sum of factor classes in a lattice of rank `len`.
    pub fn class_total(&self, len: usize) -> KClass {
        self.factors
            .iter()
            .fold(KClass::zeros(len), |acc, f| &acc + &f.class)
    }

    pub fn phases(&self) -> Vec<PhaseLift> {
        self.factors.iter().map(|f| f.phase.clone()).collect()
    }

    pub fn max_phase(&self) -> Option<&PhaseLift> {
        self.factors.first().map(|f| &f.phase)
    }

    pub fn min_phase(&self) -> Option<&PhaseLift> {
        self.factors.last().map(|f| &f.phase)
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.factors.windows(2).all(|w| w[0].phase > w[1].phase)
    }

    /// HN data of `E[k]`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            factors: self
                .factors
                .iter()
                .map(|f| HnFactor {
                    label: f.label.clone().shifted(k),
                    class: f.class.scale(if k % 2 == 0 { 1 } else { -1 }),
                    phase: f.phase.add_int(k),
                })
                .collect(),
        }
    }
}

/// HN filtration in the standard heart window `(0, 1]`.
pub fn hn_polygon(obj: &ChainObject, z: &CentralCharge) -> Result<HnResult> {
    hn_polygon_window(obj, z, &PhaseLift::zero())
}

/// HN filtration in the heart of phases `(θ, θ+1]`.
///
/// Walks the chain greedily: from the current member, the next member is the one whose
/// quotient has the largest phase, preferring the longest quotient on ties.
pub fn hn_polygon_window(
    obj: &ChainObject,
    z: &CentralCharge,
    theta: &PhaseLift,
) -> Result<HnResult> {
    let top = theta.add_int(1);
    let m = obj.len();
    let values: Vec<QComplex> = (0..=m)
        .map(|k| z.eval(&obj.member(k)))
        .collect::<Result<_>>()?;
    let lift = |d: &QComplex| -> Result<PhaseLift> {
        if d.is_zero() {
            return Err(Error::InvalidStabilityFunction(
                "a subquotient has zero charge".into(),
            ));
        }
        PhaseLift::lift_into_half_open(d, theta, &top)?.ok_or_else(|| {
            Error::InvalidStabilityFunction(format!("charge {d} lies outside the heart window"))
        })
    };
    for k in 0..m {
        lift(&(&values[k + 1] - &values[k]))?;
    }
    let mut factors = Vec::new();
    let mut a = 0;
    while a < m {
        let mut best: Option<(usize, PhaseLift)> = None;
        for b in a + 1..=m {
            let ph = lift(&(&values[b] - &values[a]))?;
            if best.as_ref().is_none_or(|(_, p)| ph >= *p) {
                best = Some((b, ph));
            }
        }
        let (b, ph) = best.expect("nonempty range");
        factors.push(HnFactor {
            label: obj.quotient_label(a, b).clone(),
            class: &obj.member(b) - &obj.member(a),
            phase: ph,
        });
        a = b;
    }
    Ok(HnResult { factors })
}

/// Whether the whole chain object is semistable in the window, and whether strictly so.
pub fn chain_status(
    obj: &ChainObject,
    z: &CentralCharge,
    theta: &PhaseLift,
) -> Result<(bool, bool)> {
    let hn = hn_polygon_window(obj, z, theta)?;
    if !hn.is_semistable() {
        return Ok((false, false));
    }
    let whole = &hn.factors[0].phase;
    let top = theta.add_int(1);
    let mut strict = false;
    for k in 1..obj.len() {
        let sub = z.eval(&obj.member(k))?;
        if let Some(p) = PhaseLift::lift_into_half_open(&sub, theta, &top)? {
            if p == *whole {
                strict = true;
            }
        }
    }
    Ok((true, strict))
}

/// HN data of a direct sum: factors sorted by phase, equal phases merged.
pub fn hn_direct_sum(results: &[HnResult]) -> HnResult {
    let mut all: Vec<HnFactor> = results
        .iter()
        .flat_map(|r| r.factors.iter().cloned())
        .collect();
    all.sort_by(|a, b| b.phase.cmp(&a.phase).then_with(|| a.label.cmp(&b.label)));
    let mut out: Vec<HnFactor> = Vec::new();
    for f in all {
        match out.last_mut() {
            Some(last) if last.phase == f.phase => {
                last.class = &last.class + &f.class;
                last.label = std::mem::replace(&mut last.label, FactorLabel::Fiber).merged(f.label);
            }
            _ => out.push(f),
        }
    }
    HnResult { factors: out }
}

/// Serialized phase: exact rational string when available, float otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PhaseDisplay {
    Exact(String),
    Approx(f64),
}

impl From<&PhaseLift> for PhaseDisplay {
    fn from(p: &PhaseLift) -> Self {
        match p.exact_value() {
            Some(v) => Self::Exact(format_q(&v)),
            None => Self::Approx(p.to_f64()),
        }
    }
}

/// Exact phase data: the lift equals `φ₀(ray) + 2·wind`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseLiftJson {
    pub ray: QComplex,
    pub wind: i64,
}

impl From<&PhaseLift> for PhaseLiftJson {
    fn from(p: &PhaseLift) -> Self {
        Self {
            ray: p.ray().clone(),
            wind: p.wind(),
        }
    }
}

impl TryFrom<&PhaseLiftJson> for PhaseLift {
    type Error = Error;
    fn try_from(p: &PhaseLiftJson) -> Result<Self> {
        PhaseLift::new(&p.ray, p.wind)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HnFactorJson {
    pub label: String,
    pub class: Vec<i64>,
    pub phase: PhaseDisplay,
    pub exact: PhaseLiftJson,
}

/// `{"factors": [{"label", "class", "phase", "exact"}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HnResultJson {
    pub factors: Vec<HnFactorJson>,
}

impl From<&HnResult> for HnResultJson {
    fn from(r: &HnResult) -> Self {
        Self {
            factors: r
                .factors
                .iter()
                .map(|f| HnFactorJson {
                    label: f.label.to_string(),
                    class: f.class.coords.clone(),
                    phase: (&f.phase).into(),
                    exact: (&f.phase).into(),
                })
                .collect(),
        }
    }
}
