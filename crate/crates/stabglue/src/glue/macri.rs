use serde::{Deserialize, Serialize};

use super::{GluedDescriptor, GluingProof, HomEntry, SimpleObject, StabilitySummary};
use crate::error::{Error, Result};
use crate::exact::{PhaseLift, QComplex};
use crate::klattice::{CentralCharge, KClass};
use crate::slicing::{hn_polygon_window, ChainObject, FactorLabel, HnResult};

/// An ordered collection `(E_1, …, E_n)` with the degrees of `Hom^k(E_i, E_j)` for `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcCollection {
    pub labels: Vec<String>,
    #[serde(default)]
    pub homs: Vec<HomEntry>,
}

impl ExcCollection {
    pub fn new(labels: Vec<String>, homs: Vec<HomEntry>) -> Self {
        Self { labels, homs }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Ext-exceptionality: homs only go forward and only in positive degrees.
    pub fn validate(&self) -> Result<()> {
        for h in &self.homs {
            if h.from >= self.len() || h.to >= self.len() {
                return Err(Error::Precondition(format!(
                    "hom entry {} -> {} references a missing member",
                    h.from, h.to
                )));
            }
            if h.from >= h.to {
                return Err(Error::NotOrthogonal(format!(
                    "hom from member {} to earlier member {}",
                    h.from + 1,
                    h.to + 1
                )));
            }
            if let Some(k) = h.degrees.iter().find(|&&k| k <= 0) {
                return Err(Error::NotOrthogonal(format!(
                    "Hom^{k}(E{}, E{}) is nonzero",
                    h.from + 1,
                    h.to + 1
                )));
            }
        }
        Ok(())
    }
}

/// Stability glued from an Ext-exceptional collection: heart `[E_1, …, E_n]` with `Z(E_i) = z_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacriGlued {
    pub collection: ExcCollection,
    pub descriptor: GluedDescriptor,
    pub summary: StabilitySummary,
}

/// Builds the finite-length glued heart; every `z_i` must lie in the upper half-plane or on `R<0`.
pub fn macri_glued(collection: ExcCollection, charges: Vec<QComplex>) -> Result<MacriGlued> {
    collection.validate()?;
    if charges.len() != collection.len() {
        return Err(Error::DimensionMismatch {
            expected: collection.len(),
            found: charges.len(),
        });
    }
    if collection.is_empty() {
        return Err(Error::Precondition("empty collection".into()));
    }
    let simples = collection
        .labels
        .iter()
        .zip(&charges)
        .map(|(label, z)| {
            if z.is_zero() {
                return Err(Error::InvalidCharge(format!("charge of {label} is zero")));
            }
            Ok(SimpleObject {
                label: label.clone(),
                charge: z.clone(),
                phase: PhaseLift::in_heart(z)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let descriptor = GluedDescriptor {
        heart: collection.labels.clone(),
        charge: CentralCharge { values: charges },
        proof: GluingProof::FiniteLength,
    };
    let summary = StabilitySummary {
        finite_length: true,
        simples,
        empty_below: None,
        empty_above: None,
    };
    Ok(MacriGlued {
        collection,
        descriptor,
        summary,
    })
}

impl MacriGlued {
    pub fn charge(&self) -> &CentralCharge {
        &self.descriptor.charge
    }

    pub fn phase(&self, i: usize) -> &PhaseLift {
        &self.summary.simples[i].phase
    }

    /// HN factors of an object given by its composition series, bottom first.
    ///
    /// Adjacent constituents whose extension necessarily splits are reordered by phase; what
    /// remains is treated as a chain of subobjects and cut along its convex hull, so the
    /// result is relative to the supplied certificate.
    pub fn hn_certificate(&self, series: &[usize]) -> Result<HnResult> {
        let n = self.collection.len();
        if series.is_empty() {
            return Ok(HnResult::default());
        }
        if let Some(&bad) = series.iter().find(|&&i| i >= n) {
            return Err(Error::Precondition(format!(
                "composition factor {bad} is not a member of the collection"
            )));
        }
        let mut order = series.to_vec();
        loop {
            let mut changed = false;
            for k in 0..order.len() - 1 {
                let (sub, quot) = (order[k], order[k + 1]);
                // Ext¹(E_j, E_i) vanishes for j > i, so such an extension splits.
                if quot > sub && self.phase(sub) < self.phase(quot) {
                    order.swap(k, k + 1);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let label = |a: usize, b: usize| -> FactorLabel {
            let parts: Vec<&str> = order[a..b]
                .iter()
                .map(|&i| self.collection.labels[i].as_str())
                .collect();
            if parts.len() == 1 {
                FactorLabel::Named(parts[0].to_string())
            } else {
                FactorLabel::Named(format!("[{}]", parts.join(", ")))
            }
        };
        let mut classes = Vec::with_capacity(order.len());
        let mut acc = KClass::zeros(n);
        for &i in &order {
            acc = &acc + &KClass::basis(n, i);
            classes.push(acc.clone());
        }
        let m = order.len();
        let labels = (0..m)
            .map(|a| (a + 1..=m).map(|b| label(a, b)).collect())
            .collect();
        let chain = ChainObject::new(classes, labels)?;
        hn_polygon_window(&chain, self.charge(), &PhaseLift::zero())
    }

    /// HN data of `E_i[shift]`.
    pub fn hn_simple(&self, i: usize, shift: i64) -> Result<HnResult> {
        Ok(self.hn_certificate(&[i])?.shift(shift))
    }
}
