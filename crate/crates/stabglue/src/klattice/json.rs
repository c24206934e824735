use serde::{Deserialize, Serialize};

use super::{CentralCharge, Geometry};
use crate::error::{Error, Result};
use crate::exact::QComplex;

fn default_genus() -> u32 {
    1
}

/// Basis values of a charge as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeValues {
    #[serde(rename = "OX")]
    pub ox: QComplex,
    pub fiber: QComplex,
    #[serde(rename = "Op")]
    pub points: Vec<QComplex>,
}

/// `{"n": .., "genusY": .., "Z": {"OX": [re, im], "fiber": [re, im], "Op": [[re, im], ..]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeFile {
    pub n: usize,
    #[serde(rename = "genusY", default = "default_genus")]
    pub genus_y: u32,
    #[serde(rename = "Z")]
    pub z: ChargeValues,
}

impl ChargeFile {
    pub fn from_charge(geom: &Geometry, z: &CentralCharge) -> Self {
        Self {
            n: geom.n,
            genus_y: geom.genus_y,
            z: ChargeValues {
                ox: z.ox().clone(),
                fiber: z.fiber().clone(),
                points: z.values[2..].to_vec(),
            },
        }
    }

    pub fn into_parts(self) -> Result<(Geometry, CentralCharge)> {
        let geom = Geometry::new(self.n, self.genus_y)?;
        if self.z.points.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: self.z.points.len(),
            });
        }
        let charge = CentralCharge::new(self.z.ox, self.z.fiber, self.z.points)?;
        Ok((geom, charge))
    }
}

impl Serialize for CentralCharge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ChargeValues {
            ox: self.ox().clone(),
            fiber: self.fiber().clone(),
            points: self.values[2..].to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CentralCharge {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = ChargeValues::deserialize(d)?;
        CentralCharge::new(v.ox, v.fiber, v.points).map_err(serde::de::Error::custom)
    }
}
