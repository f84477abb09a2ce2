//! Coefficient fields: exact rationals, prime fields and complex doubles.
//!
//! Every coefficient is a [`FieldElement`] tagged with the field it lives in.
//! Operator impls (`&a + &b`, ...) panic when the operands come from different
//! fields; polynomial rings guarantee homogeneity so the hot paths use them.
//! The `try_*` methods are the checked public surface.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest admissible prime modulus (exclusive).
pub const MAX_PRIME: u64 = 1 << 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldDescriptor, FieldDescriptor),
    #[error("rational {0} has a denominator divisible by {1}")]
    BadReduction(String, u64),
    #[error("cannot map {0} into {1}")]
    Unmappable(String, FieldDescriptor),
    #[error("{0} is not a prime below 2^63")]
    NotPrime(u64),
    #[error("invalid field descriptor `{0}` (expected q, fp:<prime> or c64)")]
    BadDescriptor(String),
    #[error("invalid coefficient literal `{0}`")]
    BadLiteral(String),
}

/// Which field a coefficient belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Rational,
    Prime(u64),
    Complex,
}

impl FieldDescriptor {
    /// Prime field with a primality check by trial division.
    pub fn prime(p: u64) -> Result<Self, CoeffError> {
        if p >= MAX_PRIME || !is_prime(p) {
            return Err(CoeffError::NotPrime(p));
        }
        Ok(FieldDescriptor::Prime(p))
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, FieldDescriptor::Complex)
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        match *self {
            FieldDescriptor::Rational => FieldElement::Rational(BigRational::from_integer(n.into())),
            FieldDescriptor::Prime(p) => {
                FieldElement::Residue { value: (n as i128).rem_euclid(p as i128) as u64, modulus: p }
            }
            FieldDescriptor::Complex => FieldElement::Complex(Complex64::new(n as f64, 0.0)),
        }
    }

    /// Image of a rational number in this field.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement, CoeffError> {
        convert(&FieldElement::Rational(q.clone()), *self)
    }

    /// Parse a serialized coefficient (`num/den`, decimal residue, or `re,im`).
    pub fn parse_element(&self, text: &str) -> Result<FieldElement, CoeffError> {
        let bad = || CoeffError::BadLiteral(text.to_string());
        match *self {
            FieldDescriptor::Rational => {
                let q = parse_rational(text).ok_or_else(bad)?;
                Ok(FieldElement::Rational(q))
            }
            FieldDescriptor::Prime(p) => {
                let v: u64 = text.trim().parse().map_err(|_| bad())?;
                if v >= p {
                    return Err(bad());
                }
                Ok(FieldElement::Residue { value: v, modulus: p })
            }
            FieldDescriptor::Complex => {
                let (re, im) = text.split_once(',').ok_or_else(bad)?;
                let re: f64 = re.trim().parse().map_err(|_| bad())?;
                let im: f64 = im.trim().parse().map_err(|_| bad())?;
                Ok(FieldElement::Complex(Complex64::new(re, im)))
            }
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rational => write!(f, "q"),
            FieldDescriptor::Prime(p) => write!(f, "fp:{p}"),
            FieldDescriptor::Complex => write!(f, "c64"),
        }
    }
}

impl FromStr for FieldDescriptor {
    type Err = CoeffError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "q" => Ok(FieldDescriptor::Rational),
            "c64" => Ok(FieldDescriptor::Complex),
            other => {
                let p = other
                    .strip_prefix("fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| CoeffError::BadDescriptor(other.to_string()))?;
                FieldDescriptor::prime(p)
            }
        }
    }
}

/// Trial division; fine for the word-sized moduli used here.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(text.parse().ok()?)),
    }
}

/// A coefficient from one of the supported fields.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldElement {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
    Complex(Complex64),
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

/// Modular inverse by the extended Euclidean algorithm.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        return None;
    }
    let (mut old_r, mut r) = (a as i128 % p as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    Some(old_s.rem_euclid(p as i128) as u64)
}

impl FieldElement {
    pub fn field(&self) -> FieldDescriptor {
        match self {
            FieldElement::Rational(_) => FieldDescriptor::Rational,
            FieldElement::Residue { modulus, .. } => FieldDescriptor::Prime(*modulus),
            FieldElement::Complex(_) => FieldDescriptor::Complex,
        }
    }

    pub fn rational(n: i64, d: i64) -> Self {
        FieldElement::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Residue { value, .. } => *value == 0,
            FieldElement::Complex(c) => c.re == 0.0 && c.im == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_one(),
            FieldElement::Residue { value, .. } => *value == 1,
            FieldElement::Complex(c) => c.re == 1.0 && c.im == 0.0,
        }
    }

    pub fn zero_like(&self) -> Self {
        self.field().zero()
    }

    pub fn one_like(&self) -> Self {
        self.field().one()
    }

    /// Magnitude used for pivot selection; exact elements report 0 or 1.
    pub fn magnitude(&self) -> f64 {
        match self {
            FieldElement::Complex(c) => c.norm(),
            other => {
                if other.is_zero() {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    /// Whether a printed form needs parentheses inside a product.
    pub fn is_negative(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_negative(),
            _ => false,
        }
    }

    fn same_field(&self, other: &Self) -> Result<(), CoeffError> {
        let (a, b) = (self.field(), other.field());
        if a != b {
            return Err(CoeffError::FieldMismatch(a, b));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CoeffError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            (FieldElement::Residue { value: a, modulus }, FieldElement::Residue { value: b, .. }) => {
                FieldElement::Residue { value: add_mod(*a, *b, *modulus), modulus: *modulus }
            }
            (FieldElement::Complex(a), FieldElement::Complex(b)) => FieldElement::Complex(a + b),
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, CoeffError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CoeffError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            (FieldElement::Residue { value: a, modulus }, FieldElement::Residue { value: b, .. }) => {
                FieldElement::Residue { value: mul_mod(*a, *b, *modulus), modulus: *modulus }
            }
            (FieldElement::Complex(a), FieldElement::Complex(b)) => FieldElement::Complex(a * b),
            _ => unreachable!(),
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, CoeffError> {
        self.same_field(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Self, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(match self {
            FieldElement::Rational(q) => FieldElement::Rational(q.recip()),
            FieldElement::Residue { value, modulus } => FieldElement::Residue {
                value: inv_mod(*value, *modulus).expect("nonzero residue"),
                modulus: *modulus,
            },
            FieldElement::Complex(c) => FieldElement::Complex(c.inv()),
        })
    }

    fn neg_ref(&self) -> Self {
        match self {
            FieldElement::Rational(q) => FieldElement::Rational(-q),
            FieldElement::Residue { value, modulus } => FieldElement::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
            FieldElement::Complex(c) => FieldElement::Complex(-c),
        }
    }

    pub fn try_eq(&self, other: &Self) -> Result<bool, CoeffError> {
        self.same_field(other)?;
        Ok(self == other)
    }

    /// Complex image (rationals rounded, residues by symmetric lift).
    pub fn to_complex(&self) -> Complex64 {
        match self {
            FieldElement::Complex(c) => *c,
            FieldElement::Rational(q) => Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0),
            FieldElement::Residue { value, modulus } => Complex64::new(symmetric_lift(*value, *modulus) as f64, 0.0),
        }
    }

    /// Canonical string used in template files.
    pub fn to_literal(&self) -> String {
        match self {
            FieldElement::Rational(q) => {
                if q.is_integer() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            FieldElement::Residue { value, .. } => value.to_string(),
            FieldElement::Complex(c) => format!("{:e},{:e}", c.re, c.im),
        }
    }
}

fn symmetric_lift(value: u64, modulus: u64) -> i128 {
    if value > modulus / 2 {
        value as i128 - modulus as i128
    } else {
        value as i128
    }
}

fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

/// Ring-homomorphic image of `x` in `target`.
///
/// Rationals map to residues as `num * den^-1 mod p`; residues lift to the
/// symmetric integer representative when leaving their prime field.
pub fn convert(x: &FieldElement, target: FieldDescriptor) -> Result<FieldElement, CoeffError> {
    if x.field() == target {
        return Ok(x.clone());
    }
    match (x, target) {
        (FieldElement::Rational(q), FieldDescriptor::Prime(p)) => {
            let den = bigint_mod(q.denom(), p);
            if den == 0 {
                return Err(CoeffError::BadReduction(x.to_literal(), p));
            }
            let num = bigint_mod(q.numer(), p);
            let inv = inv_mod(den, p).expect("nonzero");
            Ok(FieldElement::Residue { value: mul_mod(num, inv, p), modulus: p })
        }
        (FieldElement::Rational(_), FieldDescriptor::Complex) => Ok(FieldElement::Complex(x.to_complex())),
        (FieldElement::Residue { value, modulus }, _) => {
            let lifted = symmetric_lift(*value, *modulus);
            let as_int = FieldElement::Rational(BigRational::from_integer(BigInt::from(lifted)));
            convert(&as_int, target)
        }
        (FieldElement::Complex(c), FieldDescriptor::Rational | FieldDescriptor::Prime(_)) => {
            // only exactly integral real values survive the trip back to an exact field
            if c.im == 0.0 && c.re.fract() == 0.0 && c.re.abs() < 9.0e15 {
                let as_int = FieldElement::Rational(BigRational::from_integer(BigInt::from(c.re as i64)));
                convert(&as_int, target)
            } else {
                Err(CoeffError::Unmappable(format!("{c}"), target))
            }
        }
        _ => unreachable!(),
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Complex(c) => write!(f, "({}{:+}i)", c.re, c.im),
            other => write!(f, "{}", other.to_literal()),
        }
    }
}
