//! Numerical Grothendieck lattice of the equivariant double cover and central charges on it.
//!
//! Classes are integer vectors in the ordered basis `([O_X], v, [O_p1], ..., [O_pn])`, where `v`
//! is the class of a generic fibre. Point indices are zero-based in code.

mod coset;
mod json;
mod rotate;
mod twist;

pub use coset::{coset_classes, CosetClass};
pub use json::{ChargeFile, ChargeValues};
pub use rotate::{rotate_charge, RotatedCharge, ROTATION_SIGN_GUARD};
pub use twist::{twist_charge, twist_class, FrameAction, FrameActionJson, TwistGen};

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{det2, QComplex, Q};

/// Branch data of the cover: ramification-point count and genus of the base curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Geometry {
    pub n: usize,
    #[serde(rename = "genusY")]
    pub genus_y: u32,
}

impl Geometry {
    pub fn new(n: usize, genus_y: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition(
                "at least one ramification point is required".into(),
            ));
        }
        Ok(Self { n, genus_y })
    }

    pub fn rank(&self) -> usize {
        self.n + 2
    }

    pub fn point_label(&self, i: usize) -> String {
        format!("p{}", i + 1)
    }

    pub fn check_point(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::Precondition(format!(
                "point index {} out of range 1..={}",
                i + 1,
                self.n
            )));
        }
        Ok(())
    }
}

/// Integer class in the basis `([O_X], v, [O_p1], ..., [O_pn])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KClass {
    pub coords: Vec<i64>,
}

impl KClass {
    pub const OX: usize = 0;
    pub const FIBER: usize = 1;

    pub fn zero(n: usize) -> Self {
        Self::zeros(n + 2)
    }

    /// Zero vector of arbitrary length, for lattices other than the double-cover one.
    pub fn zeros(len: usize) -> Self {
        Self {
            coords: vec![0; len],
        }
    }

    /// Unit vector of arbitrary length.
    pub fn basis(len: usize, k: usize) -> Self {
        let mut c = Self::zeros(len);
        c.coords[k] = 1;
        c
    }

    pub fn from_coords(coords: Vec<i64>) -> Result<Self> {
        if coords.len() < 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: coords.len(),
            });
        }
        Ok(Self { coords })
    }

    fn unit(n: usize, index: usize) -> Self {
        let mut c = Self::zero(n);
        c.coords[index] = 1;
        c
    }

    pub fn structure_sheaf(n: usize) -> Self {
        Self::unit(n, Self::OX)
    }

    /// Class `v` of a generic fibre; also the class of `O_{2p_i}` and `ζ⊗O_{2p_i}`.
    pub fn fiber(n: usize) -> Self {
        Self::unit(n, Self::FIBER)
    }

    pub fn point(n: usize, i: usize) -> Self {
        Self::unit(n, 2 + i)
    }

    /// `[ζ⊗O_p] = v − [O_p]`.
    pub fn zeta_point(n: usize, i: usize) -> Self {
        &Self::fiber(n) - &Self::point(n, i)
    }

    /// Class of `ζ^twist ⊗ O_{m p_i}`.
    pub fn torsion(n: usize, i: usize, m: u32, twist: bool) -> Self {
        let mut c = Self::fiber(n).scale((m / 2) as i64);
        if m % 2 == 1 {
            let simple = if twist {
                Self::zeta_point(n, i)
            } else {
                Self::point(n, i)
            };
            c = &c + &simple;
        }
        c
    }

    /// Class of a rank-`rank` pullback bundle of degree `deg` on the base.
    pub fn pullback(n: usize, rank: i64, deg: i64) -> Self {
        &Self::structure_sheaf(n).scale(rank) + &Self::fiber(n).scale(deg)
    }

    /// `[ζ^0 ⊗ O(Σ_{i∈S} p_i) ⊗ π*M]` with `deg M = deg`.
    pub fn line_bundle(n: usize, deg: i64, points: &[usize]) -> Self {
        let mut c = Self::pullback(n, 1, deg);
        for &i in points {
            c = &c + &Self::zeta_point(n, i);
        }
        c
    }

    pub fn n(&self) -> usize {
        self.coords.len() - 2
    }

    pub fn rank(&self) -> i64 {
        self.coords[Self::OX]
    }

    pub fn fiber_coeff(&self) -> i64 {
        self.coords[Self::FIBER]
    }

    pub fn point_coeff(&self, i: usize) -> i64 {
        self.coords[2 + i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    /// Re-embeds a class into a geometry with more points, sending point `from` to point `to`.
    pub fn embed_point(&self, n: usize, from: usize, to: usize) -> Self {
        let mut c = Self::zero(n);
        c.coords[Self::OX] = self.rank();
        c.coords[Self::FIBER] = self.fiber_coeff();
        c.coords[2 + to] = self.point_coeff(from);
        c
    }
}

impl Add for &KClass {
    type Output = KClass;
    fn add(self, rhs: &KClass) -> KClass {
        assert_eq!(
            self.coords.len(),
            rhs.coords.len(),
            "class dimensions differ"
        );
        KClass {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &KClass {
    type Output = KClass;
    fn sub(self, rhs: &KClass) -> KClass {
        self + &(-rhs)
    }
}

impl Neg for &KClass {
    type Output = KClass;
    fn neg(self) -> KClass {
        self.scale(-1)
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

/// Additive map from classes to Gaussian rationals, stored by its basis values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CentralCharge {
    pub values: Vec<QComplex>,
}

impl CentralCharge {
    pub fn new(ox: QComplex, fiber: QComplex, points: Vec<QComplex>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Precondition(
                "at least one ramification point is required".into(),
            ));
        }
        let mut values = vec![ox, fiber];
        values.extend(points);
        Ok(Self { values })
    }

    /// Charge with the same value at every point.
    pub fn uniform(n: usize, ox: QComplex, fiber: QComplex, point: QComplex) -> Self {
        Self::new(ox, fiber, vec![point; n]).expect("n >= 1")
    }

    /// Local charge on one ramification point: `Z(O_p) = u`, `Z(ζ⊗O_p) = w`.
    pub fn local(u: &QComplex, w: &QComplex) -> Self {
        Self::new(QComplex::i(), u + w, vec![u.clone()]).expect("one point")
    }

    pub fn n(&self) -> usize {
        self.values.len() - 2
    }

    pub fn ox(&self) -> &QComplex {
        &self.values[KClass::OX]
    }

    /// `v_Z`, the charge of a generic fibre.
    pub fn fiber(&self) -> &QComplex {
        &self.values[KClass::FIBER]
    }

    pub fn point(&self, i: usize) -> &QComplex {
        &self.values[2 + i]
    }

    pub fn zeta_point(&self, i: usize) -> QComplex {
        self.fiber() - self.point(i)
    }

    pub fn eval(&self, c: &KClass) -> Result<QComplex> {
        if c.coords.len() != self.values.len() {
            return Err(Error::DimensionMismatch {
                expected: self.values.len(),
                found: c.coords.len(),
            });
        }
        let mut re = Q::from_integer(0.into());
        let mut im = Q::from_integer(0.into());
        for (k, z) in c.coords.iter().zip(&self.values) {
            if *k != 0 {
                let k = Q::from_integer((*k).into());
                re += &k * &z.re;
                im += &k * &z.im;
            }
        }
        Ok(QComplex::new(re, im))
    }

    /// Multiplies every value by `s`.
    pub fn scale(&self, s: &QComplex) -> Self {
        Self {
            values: self.values.iter().map(|z| z * s).collect(),
        }
    }

    /// Composition with a linear map given on basis classes.
    pub fn compose(&self, images: &[KClass]) -> Result<Self> {
        let values = images
            .iter()
            .map(|c| self.eval(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { values })
    }

    /// Charge values of the local category at point `i`: `(Z(O_p), Z(ζ⊗O_p))`.
    pub fn local_pair(&self, i: usize) -> (QComplex, QComplex) {
        (self.point(i).clone(), self.zeta_point(i))
    }
}

/// Sign-exact `det2(Z(c), v_Z)`.
pub fn det_against_fiber(z: &CentralCharge, c: &KClass) -> Result<Q> {
    Ok(det2(&z.eval(c)?, z.fiber()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qi};

    fn c(re: i64, im: i64) -> QComplex {
        QComplex::from_ints(re, im)
    }

    #[test]
    fn fat_point_classes_reduce_to_fibre() {
        assert_eq!(KClass::torsion(2, 1, 2, false), KClass::fiber(2));
        assert_eq!(KClass::torsion(2, 1, 2, true), KClass::fiber(2));
        assert_eq!(
            KClass::torsion(1, 0, 3, false),
            &KClass::fiber(1) + &KClass::point(1, 0)
        );
        assert_eq!(KClass::torsion(1, 0, 1, true), KClass::zeta_point(1, 0));
    }

    #[test]
    fn evaluation_examples() {
        let z = CentralCharge::uniform(1, c(0, 1), c(-1, 0), QComplex::real(q(-1, 2)));
        assert_eq!(z.eval(&KClass::torsion(1, 0, 2, false)).unwrap(), c(-1, 0));
        assert_eq!(z.eval(&KClass::pullback(1, 1, 2)).unwrap(), c(-2, 1));
        assert_eq!(z.eval(&KClass::zero(1)).unwrap(), QComplex::zero());
        assert!(z.eval(&KClass::zero(2)).is_err());
    }

    #[test]
    fn evaluation_is_linear() {
        let z = CentralCharge::new(
            c(1, 2),
            c(-3, 1),
            vec![c(2, -1), QComplex::new(q(1, 3), qi(5))],
        )
        .unwrap();
        let a = KClass::from_coords(vec![1, -2, 3, 0]).unwrap();
        let b = KClass::from_coords(vec![0, 4, -1, 7]).unwrap();
        let lhs = z.eval(&(&a.scale(3) + &b.scale(-2))).unwrap();
        let rhs = z.eval(&a).unwrap().scale_int(3) + z.eval(&b).unwrap().scale_int(-2);
        assert_eq!(lhs, rhs);
    }
}
