//! Data-parallel sweeps over charges and chart grids.
//!
//! With the `parallel` feature the work is spread over a Rayon pool; without it every entry
//! point runs sequentially with identical results.

use crate::doublecover::{classify_in_u, GlobalStability};
use crate::error::Result;
use crate::exact::{LogValue, QComplex};
use crate::klattice::{CentralCharge, Geometry};
use crate::local_stab::{oracle_chamber, ChamberReport, LocalStability};

/// Execution strategy for batch operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Rayon pool when the `parallel` feature is enabled, sequential otherwise.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Self::Parallel
        } else {
            Self::Sequential
        }
    }
}

/// Order-preserving map over a slice.
pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Order-preserving map over `0..len`.
pub fn map_range<R, F>(exec: Exec, len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..len).into_par_iter().map(f).collect()
        }
        _ => (0..len).map(f).collect(),
    }
}

/// Classifies each charge into the glued family.
pub fn classify_batch(
    exec: Exec,
    charges: &[CentralCharge],
    geom: &Geometry,
) -> Vec<Result<GlobalStability>> {
    map(exec, charges, |z| classify_in_u(z, geom))
}

/// Chart-based and oracle chamber reports for each standard-heart pair `(Z(O_p), Z(ζ⊗O_p))`.
pub fn chamber_pairs(
    exec: Exec,
    pairs: &[(QComplex, QComplex)],
) -> Vec<Result<(ChamberReport, ChamberReport)>> {
    map(exec, pairs, |(u, w)| {
        let chart = LocalStability::from_charges(u, w)?.chamber()?;
        Ok((chart, oracle_chamber(u, w)?))
    })
}

/// One cell of a chamber diagram on the `Σ`-slice PLUS chart.
#[derive(Clone, Debug, PartialEq)]
pub struct ChamberCell {
    pub row: usize,
    pub col: usize,
    pub re: f64,
    pub im: f64,
    /// Status codes of `O_p, ζ⊗O_p, O_2p, ζ⊗O_2p`; `None` on the branch cut.
    pub code: Option<String>,
}

/// Chart window covered by [`chamber_grid`]: `Re ∈ [−2, 1]`, `Im ∈ [−2, 2]`.
pub const GRID_RE: (f64, f64) = (-2.0, 1.0);
pub const GRID_IM: (f64, f64) = (-2.0, 2.0);

/// Chamber codes at the centres of a `grid × grid` partition of the chart window, row-major
/// from the top.
pub fn chamber_grid(exec: Exec, grid: usize) -> Vec<ChamberCell> {
    map_range(exec, grid * grid, |k| {
        let (row, col) = (k / grid, k % grid);
        let re = GRID_RE.0 + (GRID_RE.1 - GRID_RE.0) * (col as f64 + 0.5) / grid as f64;
        let im = GRID_IM.1 - (GRID_IM.1 - GRID_IM.0) * (row as f64 + 0.5) / grid as f64;
        let code = LogValue::from_f64(re, im)
            .and_then(|coord| LocalStability::plus(LogValue::zero(), coord))
            .and_then(|s| s.chamber())
            .map(|r| r.code())
            .ok();
        ChamberCell {
            row,
            col,
            re,
            im,
            code,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let a = chamber_grid(Exec::Sequential, 7);
        let b = chamber_grid(Exec::Parallel, 7);
        assert_eq!(a, b);
        assert_eq!(a.len(), 49);
        assert!(a.iter().any(|c| c.code.is_none()));
    }

    #[test]
    fn map_preserves_order() {
        let v: Vec<u64> = (0..1000).collect();
        assert_eq!(
            map(Exec::Parallel, &v, |x| x * 2),
            map(Exec::Sequential, &v, |x| x * 2)
        );
    }
}
