//! Exact scalars: rationals by default, residues modulo a prime on request.
//!
//! A [`Scalar`] is either an arbitrary-precision rational number or a residue
//! modulo a prime. Rationals coerce into a prime field on contact, so the
//! integer structure constants of an algebra defined over ℚ can be mixed with
//! cocycle coefficients that only exist in `F_p` (cube roots of unity in `F_7`,
//! say). Mixing residues of two different primes is a programming error and
//! panics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("denominator of {value} is not invertible modulo {modulus}")]
    NotInvertibleMod { value: String, modulus: u64 },
}

/// The coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Field {
    #[default]
    Rational,
    Prime(u64),
}

impl Field {
    /// `F_p`, after checking that `p` is prime.
    pub fn prime(p: u64) -> Result<Self, ScalarError> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(ScalarError::NotPrime(p))
        }
    }

    pub fn from_int(self, n: i64) -> Scalar {
        self.coerce(Scalar::from(n))
    }

    pub fn zero(self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(self) -> Scalar {
        self.from_int(1)
    }

    /// Moves a scalar into this field. Residues are left untouched.
    pub fn coerce(self, s: Scalar) -> Scalar {
        match (self, s) {
            (Field::Prime(p), Scalar::Rational(r)) => Scalar::Modular(Fp::from_rational(&r, p)),
            (_, s) => s,
        }
    }

    /// Parses `"p/q"` (or `"p"`) and coerces into this field.
    pub fn parse(self, text: &str) -> Result<Scalar, ScalarError> {
        let s: Scalar = text.parse()?;
        match (self, &s) {
            (Field::Prime(p), Scalar::Rational(r)) => {
                let den = r.denom().mod_floor(&BigInt::from(p));
                if den.is_zero() {
                    return Err(ScalarError::NotInvertibleMod {
                        value: text.to_string(),
                        modulus: p,
                    });
                }
                Ok(self.coerce(s))
            }
            _ => Ok(s),
        }
    }

    /// All elements `z` of the field with `z^n = 1`.
    pub fn roots_of_unity(self, n: u64) -> Vec<Scalar> {
        match self {
            Field::Rational => {
                if n % 2 == 0 {
                    vec![Scalar::one(), -Scalar::one()]
                } else {
                    vec![Scalar::one()]
                }
            }
            Field::Prime(p) => (1..p)
                .filter(|&z| pow_mod(z, n, p) == 1)
                .map(|z| Scalar::Modular(Fp { value: z, modulus: p }))
                .collect(),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "q" || s == "Q" {
            return Ok(Field::Rational);
        }
        match s.strip_prefix("fp:") {
            Some(p) => {
                let p: u64 = p.parse().map_err(|_| ScalarError::Parse(s.to_string()))?;
                Field::prime(p)
            }
            None => Err(ScalarError::Parse(s.to_string())),
        }
    }
}

/// A residue modulo a prime, stored in `0..modulus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: i64, modulus: u64) -> Self {
        let m = modulus as i128;
        let v = (value as i128).rem_euclid(m) as u64;
        Fp { value: v, modulus }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    fn from_rational(r: &BigRational, p: u64) -> Self {
        let pb = BigInt::from(p);
        let num = r.numer().mod_floor(&pb).to_u64().unwrap();
        let den = r.denom().mod_floor(&pb).to_u64().unwrap();
        assert!(den != 0, "denominator of {r} is not invertible modulo {p}");
        Fp {
            value: mul_mod(num, inv_mod(den, p), p),
            modulus: p,
        }
    }

    fn check(self, other: Fp) -> u64 {
        assert_eq!(
            self.modulus, other.modulus,
            "mixing residues modulo {} and {}",
            self.modulus, other.modulus
        );
        self.modulus
    }

    fn add(self, o: Fp) -> Fp {
        let p = self.check(o);
        Fp { value: ((self.value as u128 + o.value as u128) % p as u128) as u64, modulus: p }
    }

    fn neg(self) -> Fp {
        Fp { value: (self.modulus - self.value) % self.modulus, modulus: self.modulus }
    }

    fn mul(self, o: Fp) -> Fp {
        let p = self.check(o);
        Fp { value: mul_mod(self.value, o.value, p), modulus: p }
    }

    fn inv(self) -> Option<Fp> {
        (self.value != 0).then(|| Fp { value: inv_mod(self.value, self.modulus), modulus: self.modulus })
    }
}

/// An exact field element.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Modular(Fp),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn modular(value: i64, modulus: u64) -> Self {
        Scalar::Modular(Fp::new(value, modulus))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Modular(f) => f.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Modular(f) => f.value == 1,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Modular(f) => Field::Prime(f.modulus),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) if r.is_zero() => None,
            Scalar::Rational(r) => Some(Scalar::Rational(r.recip())),
            Scalar::Modular(f) => f.inv().map(Scalar::Modular),
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn zip<R>(
        a: &Scalar,
        b: &Scalar,
        rat: impl FnOnce(&BigRational, &BigRational) -> R,
        modp: impl FnOnce(Fp, Fp) -> R,
    ) -> R {
        match (a, b) {
            (Scalar::Rational(x), Scalar::Rational(y)) => rat(x, y),
            (Scalar::Modular(x), Scalar::Modular(y)) => modp(*x, *y),
            (Scalar::Rational(x), Scalar::Modular(y)) => modp(Fp::from_rational(x, y.modulus), *y),
            (Scalar::Modular(x), Scalar::Rational(y)) => modp(*x, Fp::from_rational(y, x.modulus)),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(n.into()))
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Rational(r)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        Scalar::zip(self, other, |x, y| x == y, |x, y| x.check(y) == x.modulus && x.value == y.value)
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order used only for canonical sorting: rationals by value, residues
/// by representative.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        Scalar::zip(self, other, |x, y| x.cmp(y), |x, y| x.value.cmp(&y.value))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Modular(x) => write!(f, "{}", x.value),
        }
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ScalarError::Parse(s.to_string());
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| err())?;
        let den: BigInt = den.parse().map_err(|_| err())?;
        if den.is_zero() || (t.contains('/') && den.is_negative()) {
            return Err(err());
        }
        Ok(Scalar::Rational(BigRational::new(num, den)))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        Scalar::zip(self, rhs, |x, y| Scalar::Rational(x + y), |x, y| Scalar::Modular(x.add(y)))
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        Scalar::zip(self, rhs, |x, y| Scalar::Rational(x - y), |x, y| Scalar::Modular(x.add(y.neg())))
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        Scalar::zip(self, rhs, |x, y| Scalar::Rational(x * y), |x, y| Scalar::Modular(x.mul(y)))
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Modular(x) => Scalar::Modular(x.neg()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
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
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
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
        // fast path avoids a clone of the accumulator for the common rational case
        if let (Scalar::Rational(x), Scalar::Rational(y)) = (&mut *self, rhs) {
            *x += y;
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if let (Scalar::Rational(x), Scalar::Rational(y)) = (&mut *self, rhs) {
            *x -= y;
        } else {
            *self = &*self - rhs;
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        if let (Scalar::Rational(x), Scalar::Rational(y)) = (&mut *self, rhs) {
            *x *= y;
        } else {
            *self = &*self * rhs;
        }
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
