use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Q;
use crate::klattice::{CentralCharge, KClass};

/// Splitting of a class into its two projections `[E] = [λ₁E] + [ρ₂E]`.
///
/// `embed1[j]` and `embed2[j]` are the images of the factor basis classes; `parts[k]` holds the
/// factor coordinates of the `k`-th basis class of the whole lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub embed1: Vec<KClass>,
    pub embed2: Vec<KClass>,
    pub parts: Vec<(KClass, KClass)>,
}

impl Decomposition {
    /// Checks that every supplied pair sums back to its basis class.
    pub fn new(
        embed1: Vec<KClass>,
        embed2: Vec<KClass>,
        parts: Vec<(KClass, KClass)>,
    ) -> Result<Self> {
        let d = Self {
            embed1,
            embed2,
            parts,
        };
        let len = d.len();
        for e in d.embed1.iter().chain(&d.embed2) {
            if e.coords.len() != len {
                return Err(Error::InvalidDecomposition(format!(
                    "embedded class {:?} has the wrong length",
                    e.coords
                )));
            }
        }
        for (k, (l, r)) in d.parts.iter().enumerate() {
            if l.coords.len() != d.embed1.len() || r.coords.len() != d.embed2.len() {
                return Err(Error::InvalidDecomposition(format!(
                    "factor classes of basis element {k} have the wrong length"
                )));
            }
            if d.assemble(l, r) != KClass::basis(len, k) {
                return Err(Error::InvalidDecomposition(format!(
                    "factor classes of basis element {k} do not sum to it"
                )));
            }
        }
        Ok(d)
    }

    /// Solves for the projections when the two embedded bases together form a basis.
    pub fn from_bases(embed1: Vec<KClass>, embed2: Vec<KClass>) -> Result<Self> {
        let cols: Vec<&KClass> = embed1.iter().chain(&embed2).collect();
        let len = cols.len();
        if cols.iter().any(|c| c.coords.len() != len) {
            return Err(Error::InvalidDecomposition(
                "embedded classes do not form a square system".into(),
            ));
        }
        let inverse = invert(&cols)?;
        let split = embed1.len();
        let parts = (0..len)
            .map(|k| {
                let x: Vec<i64> = inverse
                    .iter()
                    .map(|row| integral(&row[k]))
                    .collect::<Result<_>>()?;
                Ok((
                    KClass {
                        coords: x[..split].to_vec(),
                    },
                    KClass {
                        coords: x[split..].to_vec(),
                    },
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(embed1, embed2, parts)
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `embed1(l) + embed2(r)`.
    pub fn assemble(&self, l: &KClass, r: &KClass) -> KClass {
        let mut out = KClass::zeros(self.len());
        for (k, e) in l
            .coords
            .iter()
            .zip(&self.embed1)
            .chain(r.coords.iter().zip(&self.embed2))
        {
            out = &out + &e.scale(*k);
        }
        out
    }

    /// `([λ₁E], [ρ₂E])` for an arbitrary class.
    pub fn split(&self, c: &KClass) -> Result<(KClass, KClass)> {
        if c.coords.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: c.coords.len(),
            });
        }
        let mut l = KClass::zeros(self.embed1.len());
        let mut r = KClass::zeros(self.embed2.len());
        for (k, (pl, pr)) in c.coords.iter().zip(&self.parts) {
            l = &l + &pl.scale(*k);
            r = &r + &pr.scale(*k);
        }
        Ok((l, r))
    }

    /// Restrictions `(Z|_{D₁}, Z|_{D₂})` of a charge on the whole lattice.
    pub fn restrict(&self, z: &CentralCharge) -> Result<(CentralCharge, CentralCharge)> {
        Ok((z.compose(&self.embed1)?, z.compose(&self.embed2)?))
    }
}

fn integral(x: &Q) -> Result<i64> {
    if !x.is_integer() {
        return Err(Error::InvalidDecomposition(format!(
            "projection coefficient {x} is not integral"
        )));
    }
    i64::try_from(x.to_integer())
        .map_err(|_| Error::InvalidDecomposition("projection coefficient overflows".into()))
}

/// Inverse of the matrix whose columns are `cols`, by Gauss–Jordan elimination.
fn invert(cols: &[&KClass]) -> Result<Vec<Vec<Q>>> {
    let n = cols.len();
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|r| {
            let mut row: Vec<Q> = cols
                .iter()
                .map(|c| Q::from_integer(c.coords[r].into()))
                .collect();
            row.extend((0..n).map(|k| if k == r { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or_else(|| {
            Error::InvalidDecomposition("embedded classes are linearly dependent".into())
        })?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// `Z(E) = Z₁([λ₁E]) + Z₂([ρ₂E])` on every basis class.
pub fn glue_charge(
    z1: &CentralCharge,
    z2: &CentralCharge,
    decomp: &Decomposition,
) -> Result<CentralCharge> {
    if z1.values.len() != decomp.embed1.len() {
        return Err(Error::DimensionMismatch {
            expected: decomp.embed1.len(),
            found: z1.values.len(),
        });
    }
    if z2.values.len() != decomp.embed2.len() {
        return Err(Error::DimensionMismatch {
            expected: decomp.embed2.len(),
            found: z2.values.len(),
        });
    }
    let values = decomp
        .parts
        .iter()
        .map(|(l, r)| Ok(&z1.eval(l)? + &z2.eval(r)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(CentralCharge { values })
}

/// The two decompositions of the equivariant category of a double cover with `n` ramification points.
///
/// Factor lattices use the bases `([O_Y], [O_y])` for the base curve and `([O_{p_i}])` or
/// `([ζ⊗O_{p_i}])` for the ramification points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DoubleCoverSod {
    /// `⟨π*D(Y), i_*D(R)⟩`.
    PullbackFirst,
    /// `⟨ζ⊗i_*D(R), π*D(Y)⟩`.
    ZetaTorsionFirst,
}

impl DoubleCoverSod {
    pub fn decomposition(self, n: usize) -> Result<Decomposition> {
        let pullback = vec![KClass::structure_sheaf(n), KClass::fiber(n)];
        match self {
            Self::PullbackFirst => {
                Decomposition::from_bases(pullback, (0..n).map(|i| KClass::point(n, i)).collect())
            }
            Self::ZetaTorsionFirst => Decomposition::from_bases(
                (0..n).map(|i| KClass::zeta_point(n, i)).collect(),
                pullback,
            ),
        }
    }
}
