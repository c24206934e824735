use serde::{Deserialize, Serialize};

use super::{CentralCharge, Geometry, KClass};
use crate::error::Result;
use crate::exact::{det2, Q};

/// Class of a coset representative `ζ^ε ⊗ O(Σ_{i∈S} p_i)` modulo pullbacks from the base.
///
/// For `ε = 1` the fibre coefficient depends on the undetermined degree of `[ζ⊗O_X] − [O_X]`;
/// `fixed` then omits that term and `symbolic_fiber` is set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CosetClass {
    pub subset: Vec<usize>,
    pub zeta: bool,
    pub fixed: KClass,
    pub symbolic_fiber: bool,
}

impl CosetClass {
    pub fn new(n: usize, subset: Vec<usize>, zeta: bool) -> Self {
        let fixed = if zeta {
            let mut c = KClass::structure_sheaf(n);
            for i in (0..n).filter(|i| !subset.contains(i)) {
                c = &c - &KClass::point(n, i);
            }
            c
        } else {
            KClass::line_bundle(n, 0, &subset)
        };
        Self {
            subset,
            zeta,
            fixed,
            symbolic_fiber: zeta,
        }
    }

    /// `det2(Z(L), v_Z)`; the symbolic fibre term contributes `det2(v_Z, v_Z) = 0`.
    pub fn det_against_fiber(&self, z: &CentralCharge) -> Result<Q> {
        Ok(det2(&z.eval(&self.fixed)?, z.fiber()))
    }

    pub fn label(&self) -> String {
        let pts: Vec<String> = self.subset.iter().map(|i| format!("p{}", i + 1)).collect();
        let base = if pts.is_empty() {
            "O_X".to_string()
        } else {
            format!("O({})", pts.join("+"))
        };
        if self.zeta {
            format!("ζ⊗{base}")
        } else {
            base
        }
    }
}

/// All `2^{n+1}` coset representatives, ordered by `(ε, S)` with `S` as a bitmask.
pub fn coset_classes(geom: &Geometry) -> Vec<CosetClass> {
    let n = geom.n;
    let mut out = Vec::with_capacity(1 << (n + 1));
    for zeta in [false, true] {
        for mask in 0u64..(1u64 << n) {
            let subset = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            out.push(CosetClass::new(n, subset, zeta));
        }
    }
    out
}
