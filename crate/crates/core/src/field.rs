//! Exact coefficient fields: the rationals and prime fields with a runtime modulus.
//!
//! The modulus of a prime field is chosen at runtime (it comes from a CLI flag
//! or a JSON header), so field elements do not carry nullary constructors.
//! Instead every container stores a small [`Field`] handle and all arithmetic
//! goes through it.  For `Rationals` the handle is a unit struct; for
//! `PrimeField` it is the modulus, and elements are canonical residues in a
//! plain `u64`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Runtime description of a coefficient field, as it appears in JSON headers
/// and CLI flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "field")]
pub enum FieldSpec {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "Fp")]
    Prime { p: u64 },
}

impl FieldSpec {
    /// Parse the CLI spelling: `Q` or `F<p>`, e.g. `F101`.
    pub fn from_flag(s: &str) -> Result<FieldSpec> {
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(rest) = s.strip_prefix('F') {
            let p: u64 = rest.parse().map_err(|_| Error::BadInput(format!(
                "field must be Q or F<p>, got {s:?}"
            )))?;
            PrimeField::new(p)?;
            return Ok(FieldSpec::Prime { p });
        }
        Err(Error::BadInput(format!("field must be Q or F<p>, got {s:?}")))
    }

    pub fn flag(&self) -> String {
        match self {
            FieldSpec::Rationals => "Q".to_string(),
            FieldSpec::Prime { p } => format!("F{p}"),
        }
    }

    /// Validate the description (primality of the modulus).
    pub fn validate(&self) -> Result<()> {
        if let FieldSpec::Prime { p } = self {
            PrimeField::new(*p)?;
        }
        Ok(())
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.flag())
    }
}

/// An exact field.  Handles are tiny and `Copy`; every algebraic container
/// stores one and routes its scalar arithmetic through it.
// `from_i64` takes the handle because a prime field needs its modulus to
// build an element; the conversion naming is kept for readability.
#[allow(clippy::wrong_self_convention)]
pub trait Field: Copy + Clone + Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Debug + Send + Sync + 'static;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Add `a * b` into `acc` (the inner-product workhorse).
    fn mul_add(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        *acc = self.add(acc, &self.mul(a, b));
    }

    /// Parse an exact decimal integer, or `a/b` over the rationals.
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;
    fn format_elem(&self, a: &Self::Elem) -> String;

    /// Uniform over a prime field; integer of absolute value at most
    /// `height` over the rationals.
    fn random_elem(&self, rng: &mut dyn RngCore, height: u32) -> Self::Elem;
}

/// The field of rational numbers with arbitrary-precision arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
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
    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(a.recip())
    }

    fn parse_elem(&self, s: &str) -> Result<BigRational> {
        let bad = |reason: &str| Error::ParseScalar {
            text: s.to_string(),
            reason: reason.to_string(),
        };
        let parse_int = |t: &str| -> Result<BigInt> {
            t.parse::<BigInt>().map_err(|_| bad("not a decimal integer"))
        };
        match s.split_once('/') {
            None => Ok(BigRational::from_integer(parse_int(s)?)),
            Some((num, den)) => {
                let d = parse_int(den)?;
                if d.is_zero() {
                    return Err(bad("zero denominator"));
                }
                Ok(BigRational::new(parse_int(num)?, d))
            }
        }
    }

    fn format_elem(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn random_elem(&self, rng: &mut dyn RngCore, height: u32) -> BigRational {
        let span = 2 * height as u64 + 1;
        let v = (rng.next_u64() % span) as i64 - height as i64;
        self.from_i64(v)
    }
}

/// A prime field `F_p` with `p < 2^31` checked prime at construction.
/// Elements are canonical residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<PrimeField> {
        if p > 1 << 31 {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

/// Deterministic trial division; the modulus is capped at 2^31 so this is
/// at most ~46341 divisions.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime { p: self.p }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        // p < 2^31 keeps the product below 2^62.
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(*a, self.p - 2))
    }

    fn parse_elem(&self, s: &str) -> Result<u64> {
        let bad = |reason: &str| Error::ParseScalar {
            text: s.to_string(),
            reason: reason.to_string(),
        };
        if let Some((num, den)) = s.split_once('/') {
            let n = num
                .parse::<i64>()
                .map_err(|_| bad("not a decimal integer"))?;
            let d = den
                .parse::<i64>()
                .map_err(|_| bad("not a decimal integer"))?;
            if self.from_i64(d) == 0 {
                return Err(bad("denominator is zero in this field"));
            }
            return self.div(&self.from_i64(n), &self.from_i64(d)).map_err(|_| bad("bad fraction"));
        }
        let n = s
            .parse::<i64>()
            .map_err(|_| bad("not a decimal integer"))?;
        Ok(self.from_i64(n))
    }

    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }

    fn random_elem(&self, rng: &mut dyn RngCore, _height: u32) -> u64 {
        // Rejection sampling for a uniform residue.
        let zone = u64::MAX - u64::MAX % self.p;
        loop {
            let v = rng.next_u64();
            if v < zone {
                return v % self.p;
            }
        }
    }
}
