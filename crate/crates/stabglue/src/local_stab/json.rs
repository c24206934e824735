use serde::{Deserialize, Serialize};

use super::{Chart, LocalStability};
use crate::error::{Error, Result};
use crate::exact::LogValueJson;

/// Exact form of a local stability.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalStabilityExact {
    pub f: LogValueJson,
    pub coord: LogValueJson,
}

/// `{"f": [re, im], "chart": "PLUS|MINUS|WALL", "coord": [re, im]}` with display floats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalStabilityJson {
    pub f: [f64; 2],
    pub chart: Chart,
    pub coord: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<LocalStabilityExact>,
}

impl From<&LocalStability> for LocalStabilityJson {
    fn from(s: &LocalStability) -> Self {
        let (fr, fi) = s.f.to_f64();
        let (cr, ci) = s.coord.to_f64();
        Self {
            f: [fr, fi],
            chart: s.chart,
            coord: [cr, ci],
            exact: Some(LocalStabilityExact {
                f: (&s.f).into(),
                coord: (&s.coord).into(),
            }),
        }
    }
}

impl TryFrom<&LocalStabilityJson> for LocalStability {
    type Error = Error;
    fn try_from(j: &LocalStabilityJson) -> Result<Self> {
        match &j.exact {
            Some(e) => LocalStability::new(
                e.f.clone().try_into()?,
                j.chart,
                e.coord.clone().try_into()?,
            ),
            None => {
                let f = crate::exact::LogValue::from_f64(j.f[0], j.f[1])?;
                let coord = crate::exact::LogValue::from_f64(j.coord[0], j.coord[1])?;
                LocalStability::new(f, j.chart, coord)
            }
        }
    }
}
