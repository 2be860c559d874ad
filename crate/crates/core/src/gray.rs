//! Gray maps from `Z_{p^k}` to `Z_p^{p^(k-1)}` and the weights they induce.
//!
//! `g1` is the truth table of the affine form `u_k + sum_{i<k} u_i y_i` over
//! `y in Z_p^(k-1)`, with `y_1` varying fastest. `g2` (odd `p` only) writes
//! `u = q p^(k-1) + r` with `1 <= r <= p^(k-1)` and adds the constant `q` to a
//! prefix of `r` ones.

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{rat, rational_json, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrayError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponent k must be at least {min}, got {k}")]
    BadExponent { k: u32, min: u32 },
    #[error("the second Gray map needs an odd prime, got {0}")]
    EvenPrime(u64),
    #[error("{u} is outside Z_{m}")]
    OutOfRange { u: u64, m: u64 },
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("weight table needs {m} values with w(0) = 0 and no negatives")]
    BadTable { m: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
}

pub fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// `(p, k)` with `m = p^k`, `k >= 1`, if `m` is a prime power.
pub fn prime_power(m: u64) -> Option<(u64, u32)> {
    if m < 2 {
        return None;
    }
    let p = (2..=m).find(|d| m.is_multiple_of(*d))?;
    let mut rest = m;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GrayImage {
    pub p: u64,
    pub k: u32,
    pub digits: Vec<u64>,
}

impl GrayImage {
    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.digits.iter().filter(|&&d| d != 0).count()
    }

    pub fn zero_count(&self) -> usize {
        self.digits.len() - self.weight()
    }

    pub fn distance(&self, other: &GrayImage) -> usize {
        self.digits
            .iter()
            .zip(&other.digits)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Digits concatenated, e.g. `1100`.
    pub fn to_digit_string(&self) -> String {
        let sep = if self.p > 10 { "," } else { "" };
        self.digits
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(sep)
    }
}

fn check_args(u: u64, p: u64, k: u32, min_k: u32) -> Result<u64, GrayError> {
    if !is_prime(p) {
        return Err(GrayError::NotPrime(p));
    }
    if k < min_k {
        return Err(GrayError::BadExponent { k, min: min_k });
    }
    let m = p.pow(k);
    if u >= m {
        return Err(GrayError::OutOfRange { u, m });
    }
    Ok(m)
}

pub fn g1(u: u64, p: u64, k: u32) -> Result<GrayImage, GrayError> {
    check_args(u, p, k, 2)?;
    let mut ui = Vec::with_capacity(k as usize);
    let mut rest = u;
    for _ in 0..k {
        ui.push(rest % p);
        rest /= p;
    }
    let len = p.pow(k - 1);
    let digits = (0..len)
        .map(|idx| {
            let mut y = idx;
            let mut acc = ui[k as usize - 1];
            for &c in &ui[..k as usize - 1] {
                acc += c * (y % p);
                y /= p;
            }
            acc % p
        })
        .collect();
    Ok(GrayImage { p, k, digits })
}

/// Hamming weight of `g1(u)` in closed form.
pub fn w1(u: u64, p: u64, k: u32) -> Result<u64, GrayError> {
    check_args(u, p, k, 2)?;
    let top = p.pow(k - 1);
    Ok(if u == 0 {
        0
    } else if u.is_multiple_of(top) {
        top
    } else {
        top - p.pow(k - 2)
    })
}

pub fn g2(u: u64, p: u64, k: u32) -> Result<GrayImage, GrayError> {
    if p == 2 {
        return Err(GrayError::EvenPrime(p));
    }
    check_args(u, p, k, 1)?;
    let len = p.pow(k - 1);
    let (q, r) = if u <= len {
        (0, u)
    } else {
        let q = (u - 1) / len;
        (q, u - q * len)
    };
    let digits = (0..len).map(|i| (q + u64::from(i < r)) % p).collect();
    Ok(GrayImage { p, k, digits })
}

/// Hamming weight of `g2(u)` in closed form.
pub fn w2(u: u64, p: u64, k: u32) -> Result<u64, GrayError> {
    if p == 2 {
        return Err(GrayError::EvenPrime(p));
    }
    let m = check_args(u, p, k, 1)?;
    let top = p.pow(k - 1);
    Ok(if u <= top {
        u
    } else if u <= m - top {
        top
    } else {
        m - u
    })
}

/// A weight function `w: Z_m -> Q_{>= 0}` as its value list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TableJson", into = "TableJson")]
pub struct WeightTable {
    m: u64,
    values: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    m: u64,
    #[serde(with = "rational_json::vec")]
    values: Vec<Rational>,
}

impl TryFrom<TableJson> for WeightTable {
    type Error = GrayError;
    fn try_from(t: TableJson) -> Result<Self, GrayError> {
        WeightTable::new(t.m, t.values)
    }
}

impl From<WeightTable> for TableJson {
    fn from(w: WeightTable) -> Self {
        TableJson {
            m: w.m,
            values: w.values,
        }
    }
}

impl WeightTable {
    pub fn new(m: u64, values: Vec<Rational>) -> Result<Self, GrayError> {
        if m < 2 {
            return Err(GrayError::BadModulus(m));
        }
        if values.len() as u64 != m
            || !values[0].is_zero()
            || values.iter().any(|v| *v < Rational::zero())
        {
            return Err(GrayError::BadTable { m });
        }
        Ok(WeightTable { m, values })
    }

    pub fn from_ints(m: u64, values: &[i64]) -> Result<Self, GrayError> {
        WeightTable::new(m, values.iter().map(|&v| rat(v)).collect())
    }

    fn from_fn(m: u64, f: impl Fn(u64) -> u64) -> Self {
        WeightTable {
            m,
            values: (0..m).map(|u| rat(f(u) as i64)).collect(),
        }
    }

    pub fn w1(p: u64, k: u32) -> Result<Self, GrayError> {
        check_args(0, p, k, 2)?;
        Ok(Self::from_fn(p.pow(k), |u| w1(u, p, k).expect("in range")))
    }

    pub fn w2(p: u64, k: u32) -> Result<Self, GrayError> {
        w2(0, p, k)?;
        Ok(Self::from_fn(p.pow(k), |u| w2(u, p, k).expect("in range")))
    }

    /// Lee weight `min(u, m - u)`.
    pub fn lee(m: u64) -> Result<Self, GrayError> {
        if m < 2 {
            return Err(GrayError::BadModulus(m));
        }
        Ok(Self::from_fn(m, |u| u.min(m - u)))
    }

    pub fn hamming(m: u64) -> Result<Self, GrayError> {
        if m < 2 {
            return Err(GrayError::BadModulus(m));
        }
        Ok(Self::from_fn(m, |u| u64::from(u != 0)))
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `w(u mod m)`.
    pub fn weight(&self, u: i64) -> &Rational {
        &self.values[u.rem_euclid(self.m as i64) as usize]
    }
}

/// The principal ideal `x Z_m`, sorted.
pub fn principal_ideal(x: u64, m: u64) -> Vec<u64> {
    let g = x.gcd(&m);
    (0..m).step_by(g as usize).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneousReport {
    pub is_homogeneous: bool,
    #[serde(with = "opt_rational")]
    pub gamma: Option<Rational>,
    /// First pair `(x, y)`, `x < y`, generating the same ideal with different weights.
    pub witness_pair: Option<(u64, u64)>,
    /// First nonzero `x` whose ideal average differs from that of `1`.
    pub witness_element: Option<u64>,
    /// Every pair `(x, y)`, `x < y`, violating the equal-ideal condition.
    pub ideal_violations: Vec<(u64, u64)>,
}

mod opt_rational {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => rational_json::serialize(r, s),
            None => s.serialize_none(),
        }
    }
}

/// Tests the two conditions for a homogeneous weight: elements generating the
/// same ideal have the same weight, and every nonzero ideal `I` has
/// `sum_{y in I} w(y) = gamma |I|` for one common `gamma`.
pub fn homogeneous_check(w: &WeightTable) -> HomogeneousReport {
    let m = w.m;
    let gen: Vec<u64> = (0..m).map(|x| x.gcd(&m)).collect();
    let mut ideal_violations = Vec::new();
    for x in 0..m {
        for y in x + 1..m {
            if gen[x as usize] == gen[y as usize] && w.values[x as usize] != w.values[y as usize] {
                ideal_violations.push((x, y));
            }
        }
    }
    let avg = |x: u64| {
        let ideal = principal_ideal(x, m);
        let total: Rational = ideal.iter().map(|&y| w.values[y as usize].clone()).sum();
        total / rat(ideal.len() as i64)
    };
    let gamma = avg(1);
    let witness_element = (1..m).find(|&x| avg(x) != gamma);
    let is_homogeneous = ideal_violations.is_empty() && witness_element.is_none();
    HomogeneousReport {
        is_homogeneous,
        gamma: is_homogeneous.then_some(gamma),
        witness_pair: ideal_violations.first().copied(),
        witness_element,
        ideal_violations,
    }
}

/// Mean of `w` over all of `Z_m`.
pub fn gamma_average(w: &WeightTable) -> Rational {
    let total: Rational = w.values.iter().cloned().sum();
    total / rat(w.m as i64)
}
