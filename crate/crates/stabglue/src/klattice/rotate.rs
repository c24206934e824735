use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::{CentralCharge, KClass};
use crate::error::{Error, Result};
use crate::exact::{det2, q, q_to_f64, QComplex, Q};

/// Relative width of the band around zero in which a rotated sign test refuses to answer.
pub const ROTATION_SIGN_GUARD: f64 = 1e-12;

/// A charge composed with the rotation `z ↦ exp(−iπa)·z`.
///
/// Quarter turns are applied exactly to the stored base; the residual angle `turn ∈ [0, 1/2)`
/// stays symbolic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RotatedCharge {
    base: CentralCharge,
    turn: Q,
}

impl RotatedCharge {
    pub fn new(base: &CentralCharge, a: &Q) -> Self {
        let twice = a * Q::from_integer(2.into());
        let k = twice.floor();
        let residual = a - &k / Q::from_integer(2.into());
        let k = k.to_integer();
        let quarter: num_bigint::BigInt = ((&k % 4) + 4) % 4;
        let quarter: i64 = quarter.try_into().expect("small remainder");
        let values = base.values.iter().map(|z| z.mul_i_pow(-quarter)).collect();
        Self {
            base: CentralCharge { values },
            turn: residual,
        }
    }

    pub fn base(&self) -> &CentralCharge {
        &self.base
    }

    pub fn turn(&self) -> &Q {
        &self.turn
    }

    /// Composes with a further rotation by `a`.
    pub fn rotate(&self, a: &Q) -> Self {
        Self::new(&self.base, &(&self.turn + a))
    }

    /// The rotated charge when the residual angle vanishes.
    pub fn exact(&self) -> Option<CentralCharge> {
        self.turn.is_zero().then(|| self.base.clone())
    }

    pub fn value_f64(&self, c: &KClass) -> Result<(f64, f64)> {
        let z = self.base.eval(c)?;
        let (x, y) = z.to_f64();
        let t = std::f64::consts::PI * q_to_f64(&self.turn);
        let (s, co) = t.sin_cos();
        Ok((x * co + y * s, y * co - x * s))
    }

    /// Phase in `(−1, 1]` of the rotated value, for display and window estimates.
    pub fn phase_f64(&self, c: &KClass) -> Result<f64> {
        let (x, y) = self.value_f64(c)?;
        if x == 0.0 && y == 0.0 {
            return Err(Error::DegeneratePhase);
        }
        if y == 0.0 && x < 0.0 {
            return Ok(1.0);
        }
        Ok(y.atan2(x) / std::f64::consts::PI)
    }

    /// Sign of the imaginary part of the rotated value of `c`.
    pub fn im_sign(&self, c: &KClass) -> Result<Ordering> {
        let z = self.base.eval(c)?;
        Self::im_sign_of(&z, &self.turn)
    }

    /// Sign of `Im(exp(−iπ·turn)·z)` for `turn ∈ [0, 1/2)`.
    pub fn im_sign_of(z: &QComplex, turn: &Q) -> Result<Ordering> {
        let sign = |x: &Q| x.cmp(&Q::zero());
        if turn.is_zero() || z.re.is_zero() {
            return Ok(sign(&z.im));
        }
        if z.im.is_zero() {
            return Ok(sign(&-z.re.clone()));
        }
        if *turn == q(1, 4) {
            return Ok(sign(&(&z.im - &z.re)));
        }
        let (x, y) = z.to_f64();
        let t = std::f64::consts::PI * q_to_f64(turn);
        let (s, co) = t.sin_cos();
        let value = y * co - x * s;
        let guard = ROTATION_SIGN_GUARD * (x.abs() + y.abs());
        if value.abs() <= guard {
            return Err(Error::StraddlesWall(format!(
                "rotated imaginary part of {z} is within {guard:e} of zero"
            )));
        }
        Ok(if value > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        })
    }

    /// Whether the rotated value of `c` lies in the upper half-plane or on the negative real axis.
    pub fn in_h_prime(&self, c: &KClass) -> Result<bool> {
        match self.im_sign(c)? {
            Ordering::Greater => Ok(true),
            Ordering::Less => Ok(false),
            Ordering::Equal => {
                let z = self.base.eval(c)?;
                // Im vanishes exactly only when turn is 0 or tan(π·turn) = Im z / Re z.
                let rotated_re = if self.turn.is_zero() {
                    z.re.clone()
                } else {
                    &z.re + &z.im
                };
                Ok(rotated_re.is_negative())
            }
        }
    }

    /// Rotation-invariant determinant, exact on the stored base.
    pub fn det2(&self, a: &KClass, b: &KClass) -> Result<Q> {
        Ok(det2(&self.base.eval(a)?, &self.base.eval(b)?))
    }
}

/// `rotate_charge(Z, a)`: every value multiplied by `exp(−iπa)`.
pub fn rotate_charge(z: &CentralCharge, a: &Q) -> RotatedCharge {
    RotatedCharge::new(z, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qi;

    fn c(re: i64, im: i64) -> QComplex {
        QComplex::from_ints(re, im)
    }

    #[test]
    fn quarter_and_half_turns_are_exact() {
        let z = CentralCharge::uniform(1, c(0, 1), c(-1, 0), c(2, 3));
        let half = rotate_charge(&z, &qi(1)).exact().unwrap();
        assert_eq!(half.fiber(), &c(1, 0));
        let quarter = rotate_charge(&z, &q(1, 2)).exact().unwrap();
        assert_eq!(quarter.ox(), &c(1, 0));
        assert_eq!(rotate_charge(&z, &qi(0)).exact().unwrap(), z);
        assert_eq!(rotate_charge(&z, &qi(-3)).exact().unwrap(), half);
    }

    #[test]
    fn rotations_compose_symbolically() {
        let z = CentralCharge::uniform(2, c(1, 2), c(-3, 1), c(2, -5));
        for (a1, a2) in [(q(1, 3), q(1, 5)), (q(-7, 6), q(2, 9)), (q(5, 4), q(-1, 4))] {
            let lhs = rotate_charge(&z, &a1).rotate(&a2);
            let rhs = rotate_charge(&z, &(&a1 + &a2));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn sign_tests_agree_with_floats_away_from_walls() {
        let z = CentralCharge::new(c(1, 2), c(-3, 1), vec![c(2, -5), c(1, 0)]).unwrap();
        for a in [q(1, 7), q(1, 4), q(2, 5), q(-3, 10), q(13, 8)] {
            let r = rotate_charge(&z, &a);
            for k in 0..4 {
                let mut cls = KClass::zero(2);
                cls.coords[k] = 1;
                let (_, y) = r.value_f64(&cls).unwrap();
                let s = r.im_sign(&cls).unwrap();
                if y.abs() > 1e-9 {
                    assert_eq!(s, y.partial_cmp(&0.0).unwrap(), "a = {a}, k = {k}");
                }
            }
        }
    }

    #[test]
    fn diagonal_under_eighth_turn_is_exactly_real() {
        let z = CentralCharge::uniform(1, c(1, 1), c(-1, 0), c(-1, 0));
        let r = rotate_charge(&z, &q(1, 4));
        assert_eq!(
            r.im_sign(&KClass::structure_sheaf(1)).unwrap(),
            Ordering::Equal
        );
    }

    #[test]
    fn near_walls_refuse_to_answer() {
        let slope = crate::exact::q_from_f64((std::f64::consts::PI / 10.0).tan()).unwrap();
        let z = QComplex::new(qi(1), slope);
        let r = RotatedCharge::im_sign_of(&z, &q(1, 10));
        assert!(matches!(r, Err(Error::StraddlesWall(_))));
    }

    #[test]
    fn det2_is_rotation_invariant() {
        let z = CentralCharge::uniform(1, c(1, 2), c(-3, 1), c(2, -5));
        let a = KClass::structure_sheaf(1);
        let b = KClass::fiber(1);
        let base = det2(z.ox(), z.fiber());
        for t in [q(1, 3), q(3, 2), q(-5, 7)] {
            assert_eq!(rotate_charge(&z, &t).det2(&a, &b).unwrap(), base);
        }
    }
}
