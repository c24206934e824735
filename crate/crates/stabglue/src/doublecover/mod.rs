//! Stability conditions on the equivariant derived category of a ramified double cover of curves.
//!
//! Every constructed stability is stored as a charge in the caller's frame together with a
//! [`FrameAction`] carrying it to a normalized charge with `Z(v) ∈ R<0`, where the heart is
//! glued from the torsion at the ramification points and the pullbacks from the base.

mod build;
mod json;
mod object;
mod region;
mod theta;

pub use build::{build_stability, LineBundleCertificate, PhaseBounds, StableObject, TorsionPiece};
pub use json::{GlobalStabilityJson, PartitionJson, StableObjectJson, ThetaPointJson};
pub use object::{GlobalObject, GlobalSummand, GlobalTerm};
pub use region::{check_u_bar, classify_in_u, UBarCondition, UBarReport, UBarWitness};
pub use theta::{build_from_theta, theta_map, ThetaPoint};

use std::fmt;

use crate::error::{Error, Result};
use crate::klattice::{CentralCharge, FrameAction, Geometry};

/// Role of one ramification point in the glued heart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointClass {
    /// Both `O_p` and `ζ⊗O_p` sit in the heart with real negative charge.
    Zero,
    /// `O_p[−n]` is a heart generator.
    Plus(u32),
    /// `ζ⊗O_p[n]` is a heart generator.
    Minus(u32),
}

impl PointClass {
    pub fn shift(self) -> Option<u32> {
        match self {
            Self::Zero => None,
            Self::Plus(k) | Self::Minus(k) => Some(k),
        }
    }
}

/// Partition `I⁰ ⊔ I⁺ ⊔ I⁻` of the ramification points with shifts on `I^±`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionData {
    pub points: Vec<PointClass>,
}

impl PartitionData {
    pub fn new(points: Vec<PointClass>) -> Result<Self> {
        if points.iter().any(|p| p.shift() == Some(0)) {
            return Err(Error::Precondition("shifts n_i must be positive".into()));
        }
        Ok(Self { points })
    }

    pub fn all_zero(n: usize) -> Self {
        Self {
            points: vec![PointClass::Zero; n],
        }
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    fn members(&self, pred: impl Fn(&PointClass) -> bool) -> Vec<usize> {
        (0..self.n()).filter(|&i| pred(&self.points[i])).collect()
    }

    pub fn i_zero(&self) -> Vec<usize> {
        self.members(|p| matches!(p, PointClass::Zero))
    }

    pub fn i_plus(&self) -> Vec<usize> {
        self.members(|p| matches!(p, PointClass::Plus(_)))
    }

    pub fn i_minus(&self) -> Vec<usize> {
        self.members(|p| matches!(p, PointClass::Minus(_)))
    }

    /// All shifts equal 1 outside `I⁰`.
    pub fn unit_shifts(&self) -> bool {
        self.points.iter().all(|p| p.shift().is_none_or(|k| k == 1))
    }

    /// Parses `'0:I0,+:1 2,-:3^2'`: 1-based members, `I0`, `rest` or `*` for the complement,
    /// and `i^k` for a shift `n_i = k`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut points: Vec<Option<PointClass>> = vec![None; n];
        let mut complement: Option<char> = None;
        for entry in text.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (key, members) = entry
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("partition entry '{entry}' lacks ':'")))?;
            let key = match key.trim() {
                "0" | "I0" => '0',
                "+" | "I+" => '+',
                "-" | "I-" => '-',
                other => return Err(Error::Parse(format!("unknown partition key '{other}'"))),
            };
            let members = members.trim();
            if matches!(members, "I0" | "rest" | "*") {
                if complement.replace(key).is_some() {
                    return Err(Error::Parse("only one complement entry is allowed".into()));
                }
                continue;
            }
            for tok in members.split_whitespace() {
                let (idx, shift) = match tok.split_once('^') {
                    Some((a, b)) => (
                        a,
                        b.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad shift in '{tok}'")))?,
                    ),
                    None => (tok, 1),
                };
                let i: usize = idx
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad point index '{idx}'")))?;
                if i == 0 || i > n {
                    return Err(Error::Parse(format!(
                        "point index {i} out of range 1..={n}"
                    )));
                }
                let class = match key {
                    '0' => PointClass::Zero,
                    '+' => PointClass::Plus(shift),
                    _ => PointClass::Minus(shift),
                };
                if points[i - 1].replace(class).is_some() {
                    return Err(Error::Parse(format!("point {i} listed twice")));
                }
            }
        }
        let fill = match complement {
            Some('+') => Some(PointClass::Plus(1)),
            Some('-') => Some(PointClass::Minus(1)),
            Some(_) => Some(PointClass::Zero),
            None => None,
        };
        let points = points
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                p.or(fill)
                    .ok_or_else(|| Error::Parse(format!("point {} is not assigned", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }
}

impl fmt::Display for PartitionData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: Vec<usize>, with_shift: bool| -> String {
            v.iter()
                .map(|&i| match self.points[i].shift() {
                    Some(k) if with_shift && k != 1 => format!("{}^{k}", i + 1),
                    _ => (i + 1).to_string(),
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(
            f,
            "0:{},+:{},-:{}",
            list(self.i_zero(), false),
            list(self.i_plus(), true),
            list(self.i_minus(), true)
        )
    }
}

/// A stability condition from the glued family, with its normalizing frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalStability {
    pub geometry: Geometry,
    /// Charge in the caller's frame.
    pub charge: CentralCharge,
    pub partition: PartitionData,
    /// Carries the caller's frame to the normalized one.
    pub frame: FrameAction,
    /// `frame` applied to `charge`; satisfies the gluing hypotheses for `partition`.
    pub normalized: CentralCharge,
}
