//! Exact coefficient fields.
//!
//! Every algebraic object in the crate is generic over a [`Field`], a small
//! context value that owns the arithmetic.  Two fields are provided: the
//! prime fields `F_p` ([`PrimeField`], the default being `p = 32003`) and the
//! rationals ([`Rationals`], characteristic 0, backed by arbitrary-precision
//! fractions).  Because the context is a value rather than a type parameter
//! of the elements, the prime can be chosen at runtime.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::Value;

use crate::error::{Error, Result};

/// Default prime used when no characteristic is requested.
pub const DEFAULT_PRIME: u64 = 32003;

/// Runtime description of a coefficient field: `0` for the rationals or a
/// prime `p` for `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    characteristic: u64,
}

impl FieldSpec {
    /// Validates a characteristic (0 or a prime below 2^31).
    pub fn new(characteristic: u64) -> Result<Self> {
        if characteristic == 0 {
            return Ok(Self { characteristic });
        }
        if characteristic >= (1 << 31) || !is_prime(characteristic) {
            return Err(Error::InvalidField(format!(
                "characteristic {characteristic} is neither 0 nor a prime below 2^31"
            )));
        }
        Ok(Self { characteristic })
    }

    /// The characteristic (0 means rationals).
    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }
}

impl Default for FieldSpec {
    fn default() -> Self {
        Self { characteristic: DEFAULT_PRIME }
    }
}

/// Deterministic primality test by trial division (characteristics are small).
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Arithmetic context of an exact field.
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    /// Element representation.
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync + 'static;

    /// The runtime description of this field.
    fn spec(&self) -> FieldSpec;
    /// Additive identity.
    fn zero(&self) -> Self::Elem;
    /// Multiplicative identity.
    fn one(&self) -> Self::Elem;
    /// Image of an integer.
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// Sum.
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Difference.
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Product.
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Additive inverse.
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Zero test.
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// A random element (uniform for prime fields, small fractions for
    /// the rationals).
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    /// A random nonzero element.
    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }
    /// JSON encoding of an entry: an integer for `F_p`, an integer or an
    /// `"a/b"` string for the rationals.
    fn to_json(&self, a: &Self::Elem) -> Value;
    /// Parses a JSON entry (integers, or strings `"a"` / `"a/b"`).
    fn from_json(&self, v: &Value) -> Result<Self::Elem>;
}

/// The prime field `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Builds `F_p`; `p` must be a prime below 2^31.
    pub fn new(p: u64) -> Result<Self> {
        let spec = FieldSpec::new(p)?;
        if spec.characteristic() == 0 {
            return Err(Error::InvalidField("F_p needs a prime p".into()));
        }
        Ok(Self { p })
    }

    /// The default field `F_32003`.
    pub fn default_prime() -> Self {
        Self { p: DEFAULT_PRIME }
    }

    /// The prime.
    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_i128(&self, v: i128) -> u64 {
        let p = self.p as i128;
        (((v % p) + p) % p) as u64
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        Self::default_prime()
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec { characteristic: self.p }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i128(v as i128)
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2).
        let mut base = *a;
        let mut exp = self.p - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        Some(acc)
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn to_json(&self, a: &u64) -> Value {
        Value::from(*a)
    }
    fn from_json(&self, v: &Value) -> Result<u64> {
        match v {
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(self.from_i64(i))
                } else if let Some(u) = n.as_u64() {
                    Ok(u % self.p)
                } else {
                    Err(Error::Schema(format!("matrix entry {n} is not an integer")))
                }
            }
            Value::String(s) => {
                let q = parse_rational(s)?;
                let num = self.reduce_i128(bigint_mod(q.numer(), self.p) as i128);
                let den = self.reduce_i128(bigint_mod(q.denom(), self.p) as i128);
                let inv = self.inv(&den).ok_or_else(|| {
                    Error::Schema(format!("entry \"{s}\" has a denominator divisible by {}", self.p))
                })?;
                Ok(self.mul(&num, &inv))
            }
            other => Err(Error::Schema(format!("matrix entry {other} is neither a number nor a string"))),
        }
    }
}

fn bigint_mod(v: &BigInt, p: u64) -> i64 {
    let r = v % BigInt::from(p);
    let r: i64 = r.try_into().unwrap_or(0);
    r
}

/// Parses `"a"` or `"a/b"` into an exact fraction.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Schema(format!("entry \"{s}\" is not an integer or fraction")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Schema(format!("entry \"{s}\" is not an integer or fraction")))?;
    if den.is_zero() {
        return Err(Error::Schema(format!("entry \"{s}\" has zero denominator")));
    }
    Ok(BigRational::new(num, den))
}

/// The rationals `Q` with exact big-integer fractions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec { characteristic: 0 }
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        let num: i64 = rng.gen_range(-4..=4);
        let den: i64 = rng.gen_range(1..=3);
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn to_json(&self, a: &BigRational) -> Value {
        if a.is_integer() {
            if let Ok(i) = i64::try_from(a.numer().clone()) {
                return Value::from(i);
            }
            return Value::String(a.numer().to_string());
        }
        let sign = if a.is_negative() { "-" } else { "" };
        Value::String(format!("{sign}{}/{}", a.numer().abs(), a.denom()))
    }
    fn from_json(&self, v: &Value) -> Result<BigRational> {
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(|i| self.from_i64(i))
                .ok_or_else(|| Error::Schema(format!("matrix entry {n} is not an integer"))),
            Value::String(s) => parse_rational(s),
            other => Err(Error::Schema(format!("matrix entry {other} is neither a number nor a string"))),
        }
    }
}
