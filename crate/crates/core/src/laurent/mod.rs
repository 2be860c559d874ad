//! Exact arithmetic in the Laurent ring `Q[x, x^-1]` and in the cyclotomic
//! integers `Z[x] / (phi_m)`.
//!
//! Everything here is exact; equality of residues is the only test used by
//! the verifiers built on top.

mod cyclo;
mod poly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::ser::{Error as _, SerializeSeq};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use cyclo::{cyclotomic, divisors, euler_phi, CycloElement, CycloRing};
pub use poly::{LaurentPoly, Reducer};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("modulus must have at least two terms with distinct exponents")]
    DegenerateModulus,
    #[error("divisor is the zero polynomial")]
    ZeroDivisor,
    #[error("cyclotomic order must be at least 1")]
    ZeroOrder,
    #[error("cyclotomic orders differ ({0} vs {1})")]
    OrderMismatch(u64, u64),
    #[error("negative power evaluated at zero")]
    PoleAtZero,
}

// JSON form: [[exponent, numerator, denominator], ...], exponents strictly increasing.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(None)?;
        for (e, c) in self.terms() {
            let num = c
                .numer()
                .to_i64()
                .ok_or_else(|| S::Error::custom("coefficient numerator exceeds i64"))?;
            let den = c
                .denom()
                .to_i64()
                .ok_or_else(|| S::Error::custom("coefficient denominator exceeds i64"))?;
            seq.serialize_element(&[e, num, den])?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let triples = Vec::<[i64; 3]>::deserialize(deserializer)?;
        let mut prev: Option<i64> = None;
        let mut terms = Vec::with_capacity(triples.len());
        for [e, num, den] in triples {
            if prev.is_some_and(|p| p >= e) {
                return Err(D::Error::custom("exponents must be strictly increasing"));
            }
            if den == 0 {
                return Err(D::Error::custom("zero denominator"));
            }
            prev = Some(e);
            terms.push((e, ratio(num, den)));
        }
        Ok(LaurentPoly::from_terms(terms))
    }
}

#[derive(Serialize)]
struct CycloJson {
    order: u64,
    coeffs: Vec<String>,
}

impl Serialize for CycloElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CycloJson {
            order: self.order(),
            coeffs: self.coeffs().iter().map(|c| c.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

/// Serde adapter writing a rational as a JSON integer when it is integral and
/// as the string `"n/d"` otherwise.
pub mod rational_json {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        if r.is_integer() {
            if let Some(v) = r.numer().to_i64() {
                return s.serialize_i64(v);
            }
        }
        s.serialize_str(&to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(rat(v)),
            Raw::Text(t) => parse(&t).map_err(D::Error::custom),
        }
    }

    pub fn to_string(r: &Rational) -> String {
        if r.is_integer() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }

    /// Parses `"n"` or `"n/d"`.
    pub fn parse(text: &str) -> Result<Rational, String> {
        let bad = || format!("not a rational number: {text:?}");
        let (n, d) = match text.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::new(n, d))
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            #[derive(Serialize)]
            struct W<'a>(#[serde(with = "super")] &'a Rational);
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&W(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            #[derive(Deserialize)]
            struct W(#[serde(with = "super")] Rational);
            Ok(Vec::<W>::deserialize(d)?.into_iter().map(|w| w.0).collect())
        }
    }
}

/// True iff `r != 0` and `n / r` is an integer.
pub fn rational_divides(r: &Rational, n: &BigInt) -> bool {
    if r.is_zero() {
        return false;
    }
    let q = Rational::from_integer(n.clone()) / r;
    q.is_integer()
}
