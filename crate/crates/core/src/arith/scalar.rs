//! Exact field elements over the rationals or a prime field.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest modulus accepted for prime fields. Products are formed in `u128`.
pub const MAX_PRIME: u64 = 1 << 32;

/// Ground field of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    /// Field of the given characteristic: 0 is the rationals, otherwise a prime.
    pub fn of_characteristic(c: u64) -> Result<Field> {
        match c {
            0 => Ok(Field::Rationals),
            p if p > MAX_PRIME => Err(Error::MalformedInput(format!(
                "characteristic {p} exceeds the supported bound {MAX_PRIME}"
            ))),
            p if is_prime(p) => Ok(Field::Prime(p)),
            p => Err(Error::MalformedInput(format!(
                "characteristic {p} is neither 0 nor prime"
            ))),
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Modular {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(self, n: &BigInt) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = ((n % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
                Scalar::Modular {
                    value: r.to_u64().expect("residue fits"),
                    modulus: p,
                }
            }
        }
    }

    /// `num / den` as a field element; fails when `den` vanishes in the field.
    pub fn from_ratio(self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        let d = self.from_bigint(den);
        if d.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.from_bigint(num) * d.invert()?)
    }

    /// Parses `"n"` or `"n/d"` (optional leading sign) into this field.
    pub fn parse(self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = |m: &str| Error::Parse {
            location: format!("scalar {s:?}"),
            message: m.to_string(),
        };
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad("invalid numerator"))?;
        let den: BigInt = den.parse().map_err(|_| bad("invalid denominator"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        self.from_ratio(&num, &den)
            .map_err(|_| bad("denominator is not invertible in the field"))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact scalar. Rationals are kept reduced with a positive denominator
/// (guaranteed by `BigRational`); modular values are canonical in `[0, p)`.
///
/// Arithmetic between scalars of different fields is a logic error and panics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Modular { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Modular { value, .. } => *value == 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }

    pub fn invert(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn pow(&self, e: u64) -> Scalar {
        match self {
            Scalar::Rational(q) => {
                let e = i32::try_from(e).expect("exponent fits in i32");
                Scalar::Rational(num::pow::Pow::pow(q, e))
            }
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: pow_mod(*value, e, *modulus),
                modulus: *modulus,
            },
        }
    }

    /// Absolute value for rationals; identity for modular values.
    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.abs()),
            other => other.clone(),
        }
    }

    /// Sign and magnitude for display. Modular values above `p / 2` are shown
    /// as negatives of their symmetric residue.
    pub fn signed_magnitude(&self) -> (bool, Scalar) {
        match self {
            Scalar::Rational(q) => (q.is_negative(), Scalar::Rational(q.abs())),
            Scalar::Modular { value, modulus } if *value > modulus / 2 => (
                true,
                Scalar::Modular {
                    value: modulus - value,
                    modulus: *modulus,
                },
            ),
            other => (false, other.clone()),
        }
    }

    /// `(numerator, denominator)` of a rational; `None` for modular values.
    pub fn as_ratio(&self) -> Option<(&BigInt, &BigInt)> {
        match self {
            Scalar::Rational(q) => Some((q.numer(), q.denom())),
            Scalar::Modular { .. } => None,
        }
    }

    fn same_field(&self, other: &Scalar) -> u64 {
        match (self, other) {
            (Scalar::Rational(_), Scalar::Rational(_)) => 0,
            (Scalar::Modular { modulus: a, .. }, Scalar::Modular { modulus: b, .. }) if a == b => {
                *a
            }
            _ => panic!(
                "scalar field mismatch: {} vs {}",
                self.field(),
                other.field()
            ),
        }
    }
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let p = self.same_field(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Modular { value: a, .. }, Scalar::Modular { value: b, .. }) => {
                Scalar::Modular {
                    value: ((*a as u128 + *b as u128) % p as u128) as u64,
                    modulus: p,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let p = self.same_field(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Modular { value: a, .. }, Scalar::Modular { value: b, .. }) => {
                Scalar::Modular {
                    value: mul_mod(*a, *b, p),
                    modulus: p,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero; use [`Scalar::invert`] to handle it.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.invert().expect("division by zero")
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}
