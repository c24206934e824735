//! Exact Gaussian-rational arithmetic, phase lifts and logarithms of nonzero complex numbers.
//!
//! A phase lift is stored as a direction plus a winding number, so every comparison between
//! lifts reduces to integer comparisons and sign tests of 2x2 determinants.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Q = BigRational;

/// Builds `num / den`.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integer rational.
pub fn qi(num: i64) -> Q {
    Q::from_integer(BigInt::from(num))
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-0.125"` into an exact rational.
pub fn parse_q(text: &str) -> Result<Q> {
    let t = text.trim();
    if let Some((a, b)) = t.split_once('/') {
        let num: BigInt = a
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {t:?}")))?;
        let den: BigInt = b
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {t:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {t:?}")));
        }
        return Ok(Q::new(num, den));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        let whole: BigInt = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            int_digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad decimal {t:?}")))?
        };
        if !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal {t:?}")));
        }
        let frac: BigInt = if frac_part.is_empty() {
            BigInt::zero()
        } else {
            frac_part.parse().unwrap()
        };
        let scale = num_traits::pow(BigInt::from(10), frac_part.len());
        let magnitude = Q::new(whole * &scale + frac, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let num: BigInt = t
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {t:?}")))?;
    Ok(Q::from_integer(num))
}

/// Formats as `"p"` or `"p/q"`.
pub fn format_q(value: &Q) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Exact conversion of a finite float.
pub fn q_from_f64(x: f64) -> Result<Q> {
    Q::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite float {x}")))
}

pub fn q_to_f64(value: &Q) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter writing a rational as a `"p/q"` string.
pub mod q_string {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let text = String::deserialize(d)?;
        parse_q(&text).map_err(serde::de::Error::custom)
    }
}

/// Complex number with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QComplex {
    pub re: Q,
    pub im: Q,
}

impl QComplex {
    pub fn new(re: Q, im: Q) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(qi(re), qi(im))
    }

    pub fn real(re: Q) -> Self {
        Self::new(re, Q::zero())
    }

    pub fn zero() -> Self {
        Self::new(Q::zero(), Q::zero())
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::new(&self.re * k, &self.im * k)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&qi(k))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidCharge("inverse of zero".into()));
        }
        let n = self.norm_sqr();
        Ok(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Multiplication by `i^k`.
    pub fn mul_i_pow(&self, k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => self.clone(),
            1 => Self::new(-self.im.clone(), self.re.clone()),
            2 => -self,
            _ => Self::new(self.im.clone(), -self.re.clone()),
        }
    }

    /// True for the open upper half-plane together with the negative real axis.
    pub fn in_h_prime(&self) -> bool {
        self.im.is_positive() || (self.im.is_zero() && self.re.is_negative())
    }

    pub fn is_negative_real(&self) -> bool {
        self.im.is_zero() && self.re.is_negative()
    }

    /// Multiplies by a positive rational so that the larger absolute coordinate becomes 1.
    pub fn direction(&self) -> Self {
        let a = self.re.abs();
        let b = self.im.abs();
        let m = if a > b { a } else { b };
        if m.is_zero() {
            return self.clone();
        }
        Self::new(&self.re / &m, &self.im / &m)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (q_to_f64(&self.re), q_to_f64(&self.im))
    }

    pub fn modulus_f64(&self) -> f64 {
        q_to_f64(&self.norm_sqr()).sqrt()
    }

    pub fn from_f64(re: f64, im: f64) -> Result<Self> {
        Ok(Self::new(q_from_f64(re)?, q_from_f64(im)?))
    }

    /// Least common multiple of the denominators of both parts.
    pub fn denominator_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }
}

impl fmt::Display for QComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_q(&self.re), format_q(&self.im))
    }
}

impl Serialize for QComplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [format_q(&self.re), format_q(&self.im)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for QComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [re, im] = <[String; 2]>::deserialize(d)?;
        let re = parse_q(&re).map_err(serde::de::Error::custom)?;
        let im = parse_q(&im).map_err(serde::de::Error::custom)?;
        Ok(Self::new(re, im))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a QComplex> for &'a QComplex {
            type Output = QComplex;
            fn $method(self, rhs: &'a QComplex) -> QComplex {
                let f: fn(&QComplex, &QComplex) -> QComplex = $body;
                f(self, rhs)
            }
        }
        impl $trait<QComplex> for QComplex {
            type Output = QComplex;
            fn $method(self, rhs: QComplex) -> QComplex {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a QComplex> for QComplex {
            type Output = QComplex;
            fn $method(self, rhs: &'a QComplex) -> QComplex {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| QComplex::new(&a.re + &b.re, &a.im + &b.im));
forward_binop!(Sub, sub, |a, b| QComplex::new(&a.re - &b.re, &a.im - &b.im));
forward_binop!(Mul, mul, |a, b| QComplex::new(
    &a.re * &b.re - &a.im * &b.im,
    &a.re * &b.im + &a.im * &b.re
));

impl Neg for &QComplex {
    type Output = QComplex;
    fn neg(self) -> QComplex {
        QComplex::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for QComplex {
    type Output = QComplex;
    fn neg(self) -> QComplex {
        -&self
    }
}

/// `Re a · Im b − Im a · Re b`.
pub fn det2(a: &QComplex, b: &QComplex) -> Q {
    &a.re * &b.im - &a.im * &b.re
}

/// Euclidean inner product of the underlying real vectors.
pub fn dot(a: &QComplex, b: &QComplex) -> Q {
    &a.re * &b.re + &a.im * &b.im
}

/// Principal phase of a nonzero vector lies in `(0, 1]` exactly for upper-class vectors.
fn upper_class(z: &QComplex) -> bool {
    z.in_h_prime()
}

/// Winding carry for multiplying two nonzero vectors: `φ₀(a) + φ₀(b) = φ₀(ab) + 2·carry`.
fn product_carry(a: &QComplex, b: &QComplex, ab: &QComplex) -> i64 {
    match (upper_class(a), upper_class(b)) {
        (true, true) if !upper_class(ab) => 1,
        (false, false) if upper_class(ab) => -1,
        _ => 0,
    }
}

/// Real phase of a nonzero complex direction: `φ₀(ray) + 2·wind`, with `φ₀ = arg/π ∈ (−1, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhaseLift {
    ray: QComplex,
    wind: i64,
}

impl PhaseLift {
    /// Lift with principal part `φ₀(z)` shifted by `2·wind`.
    pub fn new(z: &QComplex, wind: i64) -> Result<Self> {
        if z.is_zero() {
            return Err(Error::DegeneratePhase);
        }
        Ok(Self {
            ray: z.direction(),
            wind,
        })
    }

    /// Principal phase in `(−1, 1]`.
    pub fn principal(z: &QComplex) -> Result<Self> {
        Self::new(z, 0)
    }

    /// Phase in `(0, 1]` of a vector in the upper half-plane or on the negative real axis.
    pub fn in_heart(z: &QComplex) -> Result<Self> {
        if z.is_zero() {
            return Err(Error::DegeneratePhase);
        }
        if !z.in_h_prime() {
            return Err(Error::InvalidStabilityFunction(format!(
                "{z} is outside the upper half-plane"
            )));
        }
        Self::new(z, 0)
    }

    pub fn from_int(m: i64) -> Self {
        if m.rem_euclid(2) == 0 {
            Self {
                ray: QComplex::one(),
                wind: m / 2,
            }
        } else {
            Self {
                ray: QComplex::from_ints(-1, 0),
                wind: (m - 1).div_euclid(2),
            }
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    /// Phase `k/4` lifted exactly.
    pub fn quarter(k: i64) -> Self {
        let base = match k.rem_euclid(8) {
            0 => (1, 0),
            1 => (1, 1),
            2 => (0, 1),
            3 => (-1, 1),
            4 => (-1, 0),
            5 => (-1, -1),
            6 => (0, -1),
            _ => (1, -1),
        };
        let ray = QComplex::from_ints(base.0, base.1);
        // principal part of `base` is in (−1, 1]; find the winding matching k/4.
        let principal_quarters = match k.rem_euclid(8) {
            r @ 0..=4 => r,
            r => r - 8,
        };
        Self {
            ray,
            wind: (k - principal_quarters) / 8,
        }
    }

    pub fn ray(&self) -> &QComplex {
        &self.ray
    }

    pub fn wind(&self) -> i64 {
        self.wind
    }

    pub fn principal_f64(&self) -> f64 {
        let (x, y) = self.ray.to_f64();
        if y == 0.0 && x < 0.0 {
            return 1.0;
        }
        y.atan2(x) / std::f64::consts::PI
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(v) = self.exact_value() {
            return q_to_f64(&v);
        }
        self.principal_f64() + 2.0 * self.wind as f64
    }

    /// Exact value when the direction is an axis or a diagonal.
    pub fn exact_value(&self) -> Option<Q> {
        let QComplex { re, im } = &self.ray;
        let quarters: i64 = if im.is_zero() {
            if re.is_positive() {
                0
            } else {
                4
            }
        } else if re.is_zero() {
            if im.is_positive() {
                2
            } else {
                -2
            }
        } else if re.abs() == im.abs() {
            match (re.is_positive(), im.is_positive()) {
                (true, true) => 1,
                (false, true) => 3,
                (false, false) => -3,
                (true, false) => -1,
            }
        } else {
            return None;
        };
        Some(q(quarters, 4) + qi(2 * self.wind))
    }

    pub fn is_exact(&self) -> bool {
        self.exact_value().is_some()
    }

    fn upper(&self) -> bool {
        upper_class(&self.ray)
    }

    /// Compares the principal parts.
    fn cmp_principal(a: &QComplex, b: &QComplex) -> Ordering {
        match (upper_class(a), upper_class(b)) {
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            _ => {
                let d = det2(a, b);
                if d.is_positive() {
                    Ordering::Less
                } else if d.is_negative() {
                    Ordering::Greater
                } else {
                    Ordering::Equal
                }
            }
        }
    }

    pub fn add_int(&self, m: i64) -> Self {
        if m.rem_euclid(2) == 0 {
            return Self {
                ray: self.ray.clone(),
                wind: self.wind + m / 2,
            };
        }
        let wind = if self.upper() {
            self.wind + (m + 1) / 2
        } else {
            self.wind + (m - 1) / 2
        };
        Self {
            ray: -&self.ray,
            wind,
        }
    }

    /// Least integer not below the lift.
    pub fn ceil(&self) -> i64 {
        let re = &self.ray.re;
        let im = &self.ray.im;
        if im.is_zero() && re.is_positive() {
            2 * self.wind
        } else if self.upper() {
            2 * self.wind + 1
        } else {
            2 * self.wind
        }
    }

    /// Greatest integer not above the lift.
    pub fn floor(&self) -> i64 {
        let re = &self.ray.re;
        let im = &self.ray.im;
        if im.is_zero() {
            if re.is_positive() {
                2 * self.wind
            } else {
                2 * self.wind + 1
            }
        } else if im.is_positive() {
            2 * self.wind
        } else {
            2 * self.wind - 1
        }
    }

    pub fn is_integer(&self) -> bool {
        self.ray.im.is_zero()
    }

    /// The unique lift of `z` lying in the open interval `(lo, hi)`, if any.
    ///
    /// Intervals are expected to be shorter than 2, which makes the answer unique.
    pub fn lift_into_open(z: &QComplex, lo: &PhaseLift, hi: &PhaseLift) -> Result<Option<Self>> {
        Self::lift_into(z, lo, hi, false)
    }

    /// The unique lift of `z` lying in the half-open interval `(lo, hi]`, if any.
    pub fn lift_into_half_open(
        z: &QComplex,
        lo: &PhaseLift,
        hi: &PhaseLift,
    ) -> Result<Option<Self>> {
        Self::lift_into(z, lo, hi, true)
    }

    fn lift_into(
        z: &QComplex,
        lo: &PhaseLift,
        hi: &PhaseLift,
        close_hi: bool,
    ) -> Result<Option<Self>> {
        let base = Self::principal(z)?;
        let guess = ((lo.to_f64() - base.principal_f64()) / 2.0).ceil() as i64;
        for wind in (guess - 2)..=(guess + 2) {
            let cand = Self {
                ray: base.ray.clone(),
                wind,
            };
            let above = cand > *lo;
            let below = if close_hi { cand <= *hi } else { cand < *hi };
            if above && below {
                return Ok(Some(cand));
            }
        }
        Ok(None)
    }
}

impl Ord for PhaseLift {
    fn cmp(&self, other: &Self) -> Ordering {
        self.wind
            .cmp(&other.wind)
            .then_with(|| Self::cmp_principal(&self.ray, &other.ray))
    }
}

impl PartialOrd for PhaseLift {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &PhaseLift {
    type Output = PhaseLift;
    fn add(self, rhs: &PhaseLift) -> PhaseLift {
        let prod = &self.ray * &rhs.ray;
        let carry = product_carry(&self.ray, &rhs.ray, &prod);
        PhaseLift {
            ray: prod.direction(),
            wind: self.wind + rhs.wind + carry,
        }
    }
}

impl Neg for &PhaseLift {
    type Output = PhaseLift;
    fn neg(self) -> PhaseLift {
        let on_negative_axis = self.ray.is_negative_real();
        let wind = if on_negative_axis {
            -self.wind - 1
        } else {
            -self.wind
        };
        PhaseLift {
            ray: self.ray.conj(),
            wind,
        }
    }
}

impl Sub for &PhaseLift {
    type Output = PhaseLift;
    fn sub(self, rhs: &PhaseLift) -> PhaseLift {
        self + &(-rhs)
    }
}

impl fmt::Display for PhaseLift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact_value() {
            Some(v) => write!(f, "{}", format_q(&v)),
            None => write!(f, "{}", self.to_f64()),
        }
    }
}

/// Exact logarithm data `c` with `exp(πc) = exp` and `Im c = φ₀(exp) + 2·wind`.
///
/// These are the elements of the additive group `C` acting on stability conditions by rotation
/// and rescaling.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LogValue {
    exp: QComplex,
    wind: i64,
}

impl LogValue {
    pub fn new(exp: QComplex, wind: i64) -> Result<Self> {
        if exp.is_zero() {
            return Err(Error::InvalidCharge("logarithm of zero".into()));
        }
        Ok(Self { exp, wind })
    }

    pub fn zero() -> Self {
        Self {
            exp: QComplex::one(),
            wind: 0,
        }
    }

    /// `c = i·m` for an integer `m`.
    pub fn i_times(m: i64) -> Self {
        let lift = PhaseLift::from_int(m);
        Self {
            exp: lift.ray.clone(),
            wind: lift.wind,
        }
    }

    /// `c` with the given exponential and imaginary part.
    pub fn from_exp_and_im(exp: QComplex, im: &PhaseLift) -> Result<Self> {
        let p = PhaseLift::principal(&exp)?;
        if p.ray != im.ray {
            return Err(Error::InvalidStability(
                "imaginary part does not match the direction of exp".into(),
            ));
        }
        Ok(Self { exp, wind: im.wind })
    }

    pub fn exp(&self) -> &QComplex {
        &self.exp
    }

    pub fn wind(&self) -> i64 {
        self.wind
    }

    pub fn im(&self) -> PhaseLift {
        PhaseLift {
            ray: self.exp.direction(),
            wind: self.wind,
        }
    }

    pub fn re_f64(&self) -> f64 {
        q_to_f64(&self.exp.norm_sqr()).ln() / (2.0 * std::f64::consts::PI)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re_f64(), self.im().to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.exp == QComplex::one() && self.wind == 0
    }

    /// Builds an exact value from float coordinates; quarter-multiple imaginary parts use exact directions.
    pub fn from_f64(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::Parse("non-finite coordinate".into()));
        }
        let modulus = (std::f64::consts::PI * re).exp();
        let quarters = im * 4.0;
        if quarters == quarters.round() {
            let k = quarters as i64;
            let lift = PhaseLift::quarter(k);
            let scale =
                q_from_f64(modulus)? / Q::from_float(lift.ray.modulus_f64()).unwrap_or_else(Q::one);
            let exp = if lift.ray.re.is_zero() || lift.ray.im.is_zero() {
                lift.ray.scale(&q_from_f64(modulus)?)
            } else {
                lift.ray.scale(&scale)
            };
            return Ok(Self {
                exp,
                wind: lift.wind,
            });
        }
        let angle = std::f64::consts::PI * im;
        let exp = QComplex::from_f64(modulus * angle.cos(), modulus * angle.sin())?;
        if exp.is_zero() {
            return Err(Error::InvalidCharge("coordinate underflows".into()));
        }
        let principal = PhaseLift::principal(&exp)?.principal_f64();
        let wind = ((im - principal) / 2.0).round() as i64;
        Ok(Self { exp, wind })
    }
}

impl Add for &LogValue {
    type Output = LogValue;
    fn add(self, rhs: &LogValue) -> LogValue {
        let prod = &self.exp * &rhs.exp;
        let carry = product_carry(&self.exp, &rhs.exp, &prod);
        LogValue {
            exp: prod,
            wind: self.wind + rhs.wind + carry,
        }
    }
}

impl Neg for &LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        let on_negative_axis = self.exp.is_negative_real();
        let wind = if on_negative_axis {
            -self.wind - 1
        } else {
            -self.wind
        };
        LogValue {
            exp: self.exp.inv().expect("nonzero by construction"),
            wind,
        }
    }
}

impl Sub for &LogValue {
    type Output = LogValue;
    fn sub(self, rhs: &LogValue) -> LogValue {
        self + &(-rhs)
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, _) = self.to_f64();
        write!(f, "{re} + {}i", self.im())
    }
}

/// Serialized exact form of a [`LogValue`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogValueJson {
    pub exp: QComplex,
    pub wind: i64,
}

impl From<&LogValue> for LogValueJson {
    fn from(v: &LogValue) -> Self {
        Self {
            exp: v.exp.clone(),
            wind: v.wind,
        }
    }
}

impl TryFrom<LogValueJson> for LogValue {
    type Error = Error;
    fn try_from(v: LogValueJson) -> Result<Self> {
        LogValue::new(v.exp, v.wind)
    }
}

/// Greatest common divisor of nonnegative rationals; zero entries are ignored.
pub fn rational_gcd<'a>(values: impl IntoIterator<Item = &'a Q>) -> Q {
    let mut acc = Q::zero();
    for v in values {
        if v.is_zero() {
            continue;
        }
        let v = v.abs();
        acc = if acc.is_zero() {
            v
        } else {
            let num = (acc.numer() * v.denom()).gcd(&(v.numer() * acc.denom()));
            Q::new(num, acc.denom() * v.denom())
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: i64, im: i64) -> QComplex {
        QComplex::from_ints(re, im)
    }

    #[test]
    fn parse_and_format_round_trip() {
        for text in ["0", "-3", "7/2", "-5/12"] {
            assert_eq!(format_q(&parse_q(text).unwrap()), text);
        }
        assert_eq!(parse_q("-0.125").unwrap(), q(-1, 8));
        assert_eq!(parse_q("2.5").unwrap(), q(5, 2));
        assert!(parse_q("1/0").is_err());
    }

    #[test]
    fn det2_conventions() {
        assert_eq!(det2(&c(0, 1), &c(-1, 0)), qi(1));
        assert_eq!(det2(&c(1, 0), &c(0, 1)), qi(1));
        assert_eq!(det2(&c(3, 4), &c(3, 4)), qi(0));
    }

    #[test]
    fn principal_phases() {
        assert_eq!(
            PhaseLift::principal(&c(-1, 0)).unwrap().exact_value(),
            Some(qi(1))
        );
        assert_eq!(
            PhaseLift::principal(&c(0, 1)).unwrap().exact_value(),
            Some(q(1, 2))
        );
        assert_eq!(
            PhaseLift::principal(&c(1, 1)).unwrap().exact_value(),
            Some(q(1, 4))
        );
        assert_eq!(
            PhaseLift::principal(&c(0, -1)).unwrap().exact_value(),
            Some(q(-1, 2))
        );
        assert!(PhaseLift::principal(&QComplex::zero()).is_err());
    }

    #[test]
    fn quarter_lifts_match_values() {
        for k in -20..20 {
            assert_eq!(
                PhaseLift::quarter(k).exact_value(),
                Some(q(k, 4)),
                "k = {k}"
            );
        }
    }

    #[test]
    fn integer_shifts() {
        for m in -7..7 {
            assert_eq!(PhaseLift::from_int(m).exact_value(), Some(qi(m)));
            for k in -9..9 {
                let p = PhaseLift::quarter(k);
                assert_eq!(
                    p.add_int(m).exact_value(),
                    Some(q(k, 4) + qi(m)),
                    "k = {k}, m = {m}"
                );
            }
        }
    }

    #[test]
    fn addition_and_negation_of_quarters() {
        for a in -9..9 {
            for b in -9..9 {
                let s = &PhaseLift::quarter(a) + &PhaseLift::quarter(b);
                assert_eq!(s.exact_value(), Some(q(a + b, 4)), "a = {a}, b = {b}");
                let d = &PhaseLift::quarter(a) - &PhaseLift::quarter(b);
                assert_eq!(d.exact_value(), Some(q(a - b, 4)));
            }
        }
    }

    #[test]
    fn ordering_matches_floats() {
        let dirs = [
            c(1, 0),
            c(3, 1),
            c(1, 2),
            c(-1, 5),
            c(-1, 0),
            c(-2, -1),
            c(1, -3),
        ];
        let mut lifts = Vec::new();
        for d in &dirs {
            for w in -2..3 {
                lifts.push(PhaseLift::new(d, w).unwrap());
            }
        }
        for a in &lifts {
            for b in &lifts {
                let exact = a.cmp(b);
                let float = a.to_f64().partial_cmp(&b.to_f64()).unwrap();
                assert_eq!(exact, float, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn floor_and_ceil() {
        for k in -12..12 {
            let p = PhaseLift::quarter(k);
            let v = k as f64 / 4.0;
            assert_eq!(p.floor(), v.floor() as i64, "k = {k}");
            assert_eq!(p.ceil(), v.ceil() as i64, "k = {k}");
        }
    }

    #[test]
    fn lift_into_intervals() {
        let lo = PhaseLift::quarter(3);
        let hi = PhaseLift::quarter(7);
        let l = PhaseLift::lift_into_open(&c(0, -1), &lo, &hi)
            .unwrap()
            .unwrap();
        assert_eq!(l.exact_value(), Some(q(3, 2)));
        let l = PhaseLift::lift_into_half_open(
            &c(-1, 1),
            &PhaseLift::quarter(-1),
            &PhaseLift::quarter(3),
        )
        .unwrap();
        assert_eq!(l.unwrap().exact_value(), Some(q(3, 4)));
        assert!(PhaseLift::lift_into_open(
            &c(1, 0),
            &PhaseLift::quarter(1),
            &PhaseLift::quarter(3)
        )
        .unwrap()
        .is_none());
    }

    #[test]
    fn log_values_form_a_group() {
        let a = LogValue::new(c(3, 4), 1).unwrap();
        let b = LogValue::new(c(-2, -1), -1).unwrap();
        let sum = &a + &b;
        assert_eq!(&(&sum - &b), &a);
        assert!((&a - &a).is_zero());
        let (are, aim) = a.to_f64();
        let (bre, bim) = b.to_f64();
        let (sre, sim) = sum.to_f64();
        assert!((sre - are - bre).abs() < 1e-12);
        assert!((sim - aim - bim).abs() < 1e-12);
    }

    #[test]
    fn log_from_float_uses_exact_quarters() {
        let v = LogValue::from_f64(0.0, 1.0).unwrap();
        assert_eq!(v.exp(), &c(-1, 0));
        assert_eq!(v.im().exact_value(), Some(qi(1)));
        let v = LogValue::from_f64(0.3, -2.75).unwrap();
        assert_eq!(v.im().exact_value(), Some(q(-11, 4)));
        let v = LogValue::from_f64(-0.2, 0.3).unwrap();
        assert!((v.im().to_f64() - 0.3).abs() < 1e-15);
        assert!((v.re_f64() + 0.2).abs() < 1e-15);
    }

    #[test]
    fn rational_gcd_of_generators() {
        assert_eq!(rational_gcd([q(1, 2), q(1, 3)].iter()), q(1, 6));
        assert_eq!(rational_gcd([qi(0), qi(1)].iter()), qi(1));
        assert_eq!(rational_gcd([qi(0)].iter()), qi(0));
    }
}
