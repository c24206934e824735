use serde::{Deserialize, Serialize};

use super::{CentralCharge, KClass};
use crate::error::{Error, Result};
use crate::exact::{LogValue, LogValueJson};

/// Generators of the tensoring action on the lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TwistGen {
    /// `⊗O(p_i)`, or `⊗O(−p_i)` when `inverse` is set.
    Point { index: usize, inverse: bool },
    /// `⊗ζ`.
    Zeta,
    /// `⊗π*M` for a line bundle `M` on the base of degree `deg`.
    Pullback { deg: i64 },
}

impl TwistGen {
    pub fn inverse(self) -> Self {
        match self {
            Self::Point { index, inverse } => Self::Point {
                index,
                inverse: !inverse,
            },
            Self::Zeta => Self::Zeta,
            Self::Pullback { deg } => Self::Pullback { deg: -deg },
        }
    }

    /// Whether tensoring swaps `ζ^e⊗O_{mp_i}` with `ζ^{1−e}⊗O_{mp_i}`.
    pub fn toggles_point(self, i: usize) -> bool {
        match self {
            Self::Point { index, .. } => index == i,
            Self::Zeta => true,
            Self::Pullback { .. } => false,
        }
    }

    fn basis_images(self, n: usize) -> Result<Vec<KClass>> {
        let mut images: Vec<KClass> = (0..n + 2)
            .map(|k| {
                let mut c = KClass::zero(n);
                c.coords[k] = 1;
                c
            })
            .collect();
        match self {
            Self::Point { index, inverse } => {
                if index >= n {
                    return Err(Error::Precondition(format!(
                        "unknown twist generator O(p{})",
                        index + 1
                    )));
                }
                let p = KClass::point(n, index);
                images[KClass::OX] = if inverse {
                    &images[KClass::OX] - &p
                } else {
                    &images[KClass::OX] + &KClass::zeta_point(n, index)
                };
                images[2 + index] = KClass::zeta_point(n, index);
            }
            Self::Zeta => {
                if n % 2 == 1 {
                    return Err(Error::UnresolvedSymbol(format!(
                        "fibre coefficient of [ζ⊗O_X] − [O_X] is undetermined for n = {n}"
                    )));
                }
                let mut delta = KClass::fiber(n).scale((n / 2) as i64);
                for i in 0..n {
                    delta = &delta - &KClass::point(n, i);
                    images[2 + i] = KClass::zeta_point(n, i);
                }
                images[KClass::OX] = &images[KClass::OX] + &delta;
            }
            Self::Pullback { deg } => {
                images[KClass::OX] = &images[KClass::OX] + &KClass::fiber(n).scale(deg);
            }
        }
        Ok(images)
    }
}

/// Class of `E ⊗ g` given the class of `E`.
pub fn twist_class(g: TwistGen, c: &KClass) -> Result<KClass> {
    let images = g.basis_images(c.n())?;
    let mut out = KClass::zero(c.n());
    for (k, img) in c.coords.iter().zip(&images) {
        if *k != 0 {
            out = &out + &img.scale(*k);
        }
    }
    Ok(out)
}

/// `Z'(E) = Z(E ⊗ g)`.
pub fn twist_charge(z: &CentralCharge, g: TwistGen) -> Result<CentralCharge> {
    z.compose(&g.basis_images(z.n())?)
}

/// Tensoring by a line bundle followed by the `C`-action `Z ↦ exp(π·scalar)·Z`.
///
/// Acting on a stability condition, an object `E` is semistable of phase `φ` for the result
/// exactly when `E ⊗ L` is semistable of phase `φ − Im scalar` for the original, where `L` is
/// the product of the twist generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FrameAction {
    pub scalar: LogValue,
    pub twists: Vec<TwistGen>,
}

impl Default for FrameAction {
    fn default() -> Self {
        Self::identity()
    }
}

impl FrameAction {
    pub fn identity() -> Self {
        Self {
            scalar: LogValue::zero(),
            twists: Vec::new(),
        }
    }

    pub fn scalar(scalar: LogValue) -> Self {
        Self {
            scalar,
            twists: Vec::new(),
        }
    }

    pub fn twist(twists: Vec<TwistGen>) -> Self {
        Self {
            scalar: LogValue::zero(),
            twists,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.scalar.is_zero() && self.twists.is_empty()
    }

    /// Action on charges.
    pub fn apply(&self, z: &CentralCharge) -> Result<CentralCharge> {
        let mut out = z.clone();
        for &g in &self.twists {
            out = twist_charge(&out, g)?;
        }
        Ok(out.scale(self.scalar.exp()))
    }

    /// Class of `E ⊗ L`.
    pub fn map_class(&self, c: &KClass) -> Result<KClass> {
        let mut out = c.clone();
        for &g in &self.twists {
            out = twist_class(g, &out)?;
        }
        Ok(out)
    }

    /// Parity of the twists acting nontrivially on torsion at point `i`.
    pub fn toggles_point(&self, i: usize) -> bool {
        self.twists.iter().filter(|g| g.toggles_point(i)).count() % 2 == 1
    }

    /// Net multiplicity of `O(p_i)` in the twist word.
    pub fn point_multiplicity(&self, i: usize) -> i64 {
        self.twists
            .iter()
            .map(|g| match g {
                TwistGen::Point { index, inverse } if *index == i => {
                    if *inverse {
                        -1
                    } else {
                        1
                    }
                }
                _ => 0,
            })
            .sum()
    }

    pub fn zeta_parity(&self) -> bool {
        self.twists
            .iter()
            .filter(|g| matches!(g, TwistGen::Zeta))
            .count()
            % 2
            == 1
    }

    pub fn pullback_degree(&self) -> i64 {
        self.twists
            .iter()
            .map(|g| {
                if let TwistGen::Pullback { deg } = g {
                    *deg
                } else {
                    0
                }
            })
            .sum()
    }

    pub fn inverse(&self) -> Self {
        Self {
            scalar: -&self.scalar,
            twists: self.twists.iter().rev().map(|g| g.inverse()).collect(),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &FrameAction) -> Self {
        let mut twists = self.twists.clone();
        twists.extend(next.twists.iter().copied());
        Self {
            scalar: &self.scalar + &next.scalar,
            twists,
        }
    }
}

/// Serialized frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameActionJson {
    pub scalar: LogValueJson,
    pub twists: Vec<TwistGen>,
}

impl From<&FrameAction> for FrameActionJson {
    fn from(f: &FrameAction) -> Self {
        Self {
            scalar: (&f.scalar).into(),
            twists: f.twists.clone(),
        }
    }
}

impl TryFrom<FrameActionJson> for FrameAction {
    type Error = Error;
    fn try_from(f: FrameActionJson) -> Result<Self> {
        Ok(Self {
            scalar: f.scalar.try_into()?,
            twists: f.twists,
        })
    }
}

impl Serialize for FrameAction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FrameActionJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FrameAction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        FrameActionJson::deserialize(d)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, QComplex};

    fn c(re: i64, im: i64) -> QComplex {
        QComplex::from_ints(re, im)
    }

    fn sample() -> CentralCharge {
        CentralCharge::new(
            c(2, 3),
            c(-1, 0),
            vec![c(-1, -1), QComplex::new(q(-1, 2), q(1, 3))],
        )
        .unwrap()
    }

    #[test]
    fn point_twist_replaces_point_charge() {
        let z = twist_charge(
            &sample(),
            TwistGen::Point {
                index: 0,
                inverse: false,
            },
        )
        .unwrap();
        assert_eq!(z.point(0), &c(0, 1));
        assert_eq!(z.ox(), &(sample().ox() + &sample().zeta_point(0)));
        assert_eq!(z.point(1), sample().point(1));
    }

    #[test]
    fn double_point_twist_adds_the_fibre() {
        let g = TwistGen::Point {
            index: 0,
            inverse: false,
        };
        let z = twist_charge(&twist_charge(&sample(), g).unwrap(), g).unwrap();
        assert_eq!(z.point(0), sample().point(0));
        assert_eq!(z.ox(), &(sample().ox() + sample().fiber()));
        let pulled = twist_charge(&sample(), TwistGen::Pullback { deg: 1 }).unwrap();
        assert_eq!(pulled, z);
    }

    #[test]
    fn generators_are_invertible() {
        let gens = [
            TwistGen::Point {
                index: 1,
                inverse: false,
            },
            TwistGen::Point {
                index: 0,
                inverse: true,
            },
            TwistGen::Zeta,
            TwistGen::Pullback { deg: 3 },
        ];
        for g in gens {
            let there = twist_charge(&sample(), g).unwrap();
            assert_eq!(
                twist_charge(&there, g.inverse()).unwrap(),
                sample(),
                "{g:?}"
            );
        }
    }

    #[test]
    fn zeta_swaps_points_and_is_an_involution() {
        let z = twist_charge(&sample(), TwistGen::Zeta).unwrap();
        assert_eq!(z.point(0), &sample().zeta_point(0));
        assert_eq!(z.zeta_point(1), sample().point(1).clone());
        assert_eq!(twist_charge(&z, TwistGen::Zeta).unwrap(), sample());
        let odd = CentralCharge::uniform(1, c(0, 1), c(-1, 0), c(-1, 0));
        assert!(matches!(
            twist_charge(&odd, TwistGen::Zeta),
            Err(Error::UnresolvedSymbol(_))
        ));
    }

    #[test]
    fn identity_word_is_identity() {
        assert_eq!(FrameAction::identity().apply(&sample()).unwrap(), sample());
    }

    #[test]
    fn frame_inverse_round_trips() {
        let f = FrameAction {
            scalar: LogValue::new(c(3, -4), 1).unwrap(),
            twists: vec![
                TwistGen::Point {
                    index: 1,
                    inverse: false,
                },
                TwistGen::Zeta,
            ],
        };
        let back = f.inverse().apply(&f.apply(&sample()).unwrap()).unwrap();
        assert_eq!(back, sample());
        assert!(f.then(&f.inverse()).scalar.is_zero());
        assert!(f.toggles_point(0));
        assert!(!f.toggles_point(1));
    }

    #[test]
    fn class_map_matches_charge_twist() {
        let g = TwistGen::Point {
            index: 1,
            inverse: true,
        };
        let cls = KClass::from_coords(vec![2, -1, 3, 5]).unwrap();
        let lhs = twist_charge(&sample(), g).unwrap().eval(&cls).unwrap();
        let rhs = sample().eval(&twist_class(g, &cls).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
