use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{GlobalStability, PartitionData, PointClass, ThetaPoint};
use crate::error::{Error, Result};
use crate::exact::QComplex;
use crate::klattice::{CentralCharge, FrameActionJson, Geometry};
use crate::local_stab::{LocalStability, LocalStabilityJson};
use crate::slicing::{PhaseDisplay, PhaseLiftJson};

/// `{"I0": [..], "I+": [..], "I-": [..], "n": [..]}` with 1-based members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionJson {
    #[serde(rename = "I0")]
    pub zero: Vec<usize>,
    #[serde(rename = "I+")]
    pub plus: Vec<usize>,
    #[serde(rename = "I-")]
    pub minus: Vec<usize>,
    /// Shift per point, `null` on `I0`.
    pub n: Vec<Option<u32>>,
}

impl From<&PartitionData> for PartitionJson {
    fn from(p: &PartitionData) -> Self {
        let one_based = |v: Vec<usize>| v.into_iter().map(|i| i + 1).collect();
        Self {
            zero: one_based(p.i_zero()),
            plus: one_based(p.i_plus()),
            minus: one_based(p.i_minus()),
            n: p.points.iter().map(|c| c.shift()).collect(),
        }
    }
}

impl TryFrom<&PartitionJson> for PartitionData {
    type Error = Error;
    fn try_from(j: &PartitionJson) -> Result<Self> {
        let n = j.n.len();
        let mut points = vec![None; n];
        let mut seen = BTreeSet::new();
        for (members, key) in [(&j.zero, '0'), (&j.plus, '+'), (&j.minus, '-')] {
            for &m in members {
                if m == 0 || m > n || !seen.insert(m) {
                    return Err(Error::Parse(format!(
                        "partition member {m} is out of range or repeated"
                    )));
                }
                let shift = j.n[m - 1];
                points[m - 1] = Some(match (key, shift) {
                    ('0', None) => PointClass::Zero,
                    ('+', Some(k)) => PointClass::Plus(k),
                    ('-', Some(k)) => PointClass::Minus(k),
                    _ => {
                        return Err(Error::Parse(format!(
                            "shift of point {m} does not match its block"
                        )))
                    }
                });
            }
        }
        let points = points
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Parse("partition does not cover every point".into()))?;
        PartitionData::new(points)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StableObjectJson {
    pub label: String,
    pub class: Vec<i64>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub phase: Option<PhaseDisplay>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<PhaseLiftJson>,
}

/// Serialized glued stability; `normalized` and `stable` are derived and re-checked on load.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalStabilityJson {
    pub geometry: Geometry,
    pub charge: CentralCharge,
    pub partition: PartitionJson,
    pub frame: FrameActionJson,
    pub normalized: CentralCharge,
    pub heart: Vec<String>,
    #[serde(default)]
    pub stable: Vec<StableObjectJson>,
}

fn status_name(s: crate::local_stab::Status) -> &'static str {
    match s {
        crate::local_stab::Status::Stable => "stable",
        crate::local_stab::Status::StrictlySemistable => "semistable",
        crate::local_stab::Status::Unstable => "unstable",
    }
}

impl TryFrom<&GlobalStability> for GlobalStabilityJson {
    type Error = Error;
    fn try_from(s: &GlobalStability) -> Result<Self> {
        let stable = s
            .stable_objects()?
            .iter()
            .map(|o| StableObjectJson {
                label: o.label.to_string(),
                class: o.class.coords.clone(),
                status: status_name(o.status).into(),
                phase: o.phase.as_ref().map(Into::into),
                exact: o.phase.as_ref().map(Into::into),
            })
            .collect();
        Ok(Self {
            geometry: s.geometry,
            charge: s.charge.clone(),
            partition: (&s.partition).into(),
            frame: (&s.frame).into(),
            normalized: s.normalized.clone(),
            heart: s.heart_descriptor(),
            stable,
        })
    }
}

impl TryFrom<&GlobalStabilityJson> for GlobalStability {
    type Error = Error;
    fn try_from(j: &GlobalStabilityJson) -> Result<Self> {
        let s = GlobalStability::new(
            j.geometry,
            j.charge.clone(),
            (&j.partition).try_into()?,
            j.frame.clone().try_into()?,
        )?;
        if s.normalized != j.normalized {
            return Err(Error::InvalidStability(
                "stored normalized charge does not match the frame".into(),
            ));
        }
        Ok(s)
    }
}

/// `{"locals": [..], "z": [re, im]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaPointJson {
    pub locals: Vec<LocalStabilityJson>,
    pub z: QComplex,
}

impl From<&ThetaPoint> for ThetaPointJson {
    fn from(t: &ThetaPoint) -> Self {
        Self {
            locals: t.locals.iter().map(Into::into).collect(),
            z: t.z.clone(),
        }
    }
}

impl TryFrom<&ThetaPointJson> for ThetaPoint {
    type Error = Error;
    fn try_from(j: &ThetaPointJson) -> Result<Self> {
        Ok(Self {
            locals: j
                .locals
                .iter()
                .map(LocalStability::try_from)
                .collect::<Result<_>>()?,
            z: j.z.clone(),
        })
    }
}
