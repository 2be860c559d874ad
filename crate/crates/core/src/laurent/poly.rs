use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{LaurentError, Rational};

/// A Laurent polynomial with exact rational coefficients.
///
/// `coeffs[i]` is the coefficient of `x^(offset + i)`. The representation is
/// canonical: the zero polynomial has no coefficients and offset 0, and for
/// every other value the first and last coefficients are nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    offset: i64,
    coeffs: Vec<Rational>,
}

impl LaurentPoly {
    fn canonical(mut offset: i64, mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return Self::zero();
        }
        if lead > 0 {
            coeffs.drain(..lead);
            offset += lead as i64;
        }
        LaurentPoly { offset, coeffs }
    }

    pub fn zero() -> Self {
        LaurentPoly {
            offset: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * x^exp`.
    pub fn monomial(c: Rational, exp: i64) -> Self {
        Self::canonical(exp, vec![c])
    }

    /// `x^exp` with unit coefficient.
    pub fn x_pow(exp: i64) -> Self {
        Self::monomial(Rational::one(), exp)
    }

    /// Builds `sum c_i x^(offset + i)`; leading and trailing zeros are stripped.
    pub fn from_coeffs(offset: i64, coeffs: Vec<Rational>) -> Self {
        Self::canonical(offset, coeffs)
    }

    /// Integer-coefficient convenience constructor, ascending from `offset`.
    pub fn from_ints(offset: i64, coeffs: &[i64]) -> Self {
        Self::canonical(
            offset,
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    /// Sums arbitrary `(exponent, coefficient)` terms; repeated exponents accumulate.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let terms: Vec<(i64, Rational)> = terms.into_iter().collect();
        let (Some(lo), Some(hi)) = (
            terms.iter().map(|t| t.0).min(),
            terms.iter().map(|t| t.0).max(),
        ) else {
            return Self::zero();
        };
        let mut coeffs = vec![Rational::zero(); (hi - lo) as usize + 1];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::canonical(lo, coeffs)
    }

    /// Sum of unit monomials `x^e` over the given exponents (with multiplicity).
    pub fn sum_of_monomials<I: IntoIterator<Item = i64>>(exps: I) -> Self {
        Self::from_terms(exps.into_iter().map(|e| (e, Rational::one())))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.offset)
    }

    pub fn max_exponent(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.offset + self.coeffs.len() as i64 - 1)
    }

    /// Difference between the largest and smallest exponent; `None` for zero.
    pub fn span(&self) -> Option<u64> {
        (!self.is_zero()).then(|| self.coeffs.len() as u64 - 1)
    }

    /// True for `c * x^e` with `c != 0`, i.e. the units of the Laurent ring.
    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        let idx = exp - self.offset;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Rational::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.offset + i as i64, c))
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// `f*(x) = f(x^-1)`.
    pub fn conjugate(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        LaurentPoly {
            offset: -self.max_exponent().unwrap(),
            coeffs,
        }
    }

    /// `f(x^k)`: every exponent is multiplied by `k`.
    ///
    /// # Panics
    ///
    /// Panics if `k == 0`.
    pub fn substitute_power(&self, k: u64) -> Self {
        assert!(k >= 1, "substitution power must be positive");
        let k = k as i64;
        Self::from_terms(self.terms().map(|(e, c)| (e * k, c.clone())))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::canonical(self.offset, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Exact evaluation at a rational point. Negative exponents require `at != 0`.
    pub fn eval(&self, at: &Rational) -> Result<Rational, LaurentError> {
        if at.is_zero() && self.offset < 0 && !self.is_zero() {
            return Err(LaurentError::PoleAtZero);
        }
        let mut acc = Rational::zero();
        for (e, c) in self.terms() {
            let p = if e >= 0 {
                num_traits::pow(at.clone(), e as usize)
            } else {
                num_traits::pow(at.recip(), (-e) as usize)
            };
            acc += c * p;
        }
        Ok(acc)
    }

    /// Canonical representative of `self` in `Q[x, x^-1] / (modulus)`.
    pub fn reduce(&self, modulus: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        Ok(Reducer::new(modulus)?.reduce(self))
    }

    /// True iff `self` divides `g` in the Laurent ring.
    pub fn divides(&self, g: &LaurentPoly) -> Result<bool, LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::ZeroDivisor);
        }
        if self.is_monomial() {
            return Ok(true);
        }
        Ok(g.reduce(self)?.is_zero())
    }
}

/// Reduction modulo a fixed Laurent polynomial.
///
/// The modulus is multiplied by the unit `x^-offset` and made monic, giving an
/// ordinary polynomial `g` with `g(0) != 0`. Residues are expressed in the basis
/// `1, x, ..., x^(deg g - 1)`. Negative powers of `x` are removed by repeatedly
/// dividing by `x` modulo `g`, which is possible because `x` is invertible there.
#[derive(Clone, Debug)]
pub struct Reducer {
    // monic, g[0] != 0
    g: Vec<Rational>,
}

impl Reducer {
    pub fn new(modulus: &LaurentPoly) -> Result<Self, LaurentError> {
        if modulus.is_zero() || modulus.is_monomial() {
            return Err(LaurentError::DegenerateModulus);
        }
        let lead = modulus.coeffs.last().unwrap().clone();
        let g = modulus.coeffs.iter().map(|c| c / &lead).collect();
        Ok(Reducer { g })
    }

    pub fn degree(&self) -> usize {
        self.g.len() - 1
    }

    /// The normalized modulus as a Laurent polynomial starting at `x^0`.
    pub fn modulus(&self) -> LaurentPoly {
        LaurentPoly::from_coeffs(0, self.g.clone())
    }

    pub fn reduce(&self, f: &LaurentPoly) -> LaurentPoly {
        if f.is_zero() {
            return LaurentPoly::zero();
        }
        let d = self.degree();
        let shift_up = f.offset.max(0) as usize;
        let mut r = vec![Rational::zero(); shift_up];
        r.extend(f.coeffs.iter().cloned());
        self.rem_in_place(&mut r);
        r.resize(d, Rational::zero());
        for _ in 0..f.offset.min(0).unsigned_abs() {
            self.divide_by_x(&mut r);
        }
        LaurentPoly::from_coeffs(0, r)
    }

    pub fn is_zero_mod(&self, f: &LaurentPoly) -> bool {
        self.reduce(f).is_zero()
    }

    fn rem_in_place(&self, r: &mut Vec<Rational>) {
        let d = self.degree();
        while r.len() > d {
            let top = r.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let base = r.len() - d;
            for (i, gi) in self.g[..d].iter().enumerate() {
                if !gi.is_zero() {
                    r[base + i] -= &top * gi;
                }
            }
        }
    }

    // r <- r * x^-1 mod g, for r of length deg g
    fn divide_by_x(&self, r: &mut [Rational]) {
        let d = self.degree();
        let c = &r[0] / &self.g[0];
        let mut next = vec![Rational::zero(); d];
        for i in 1..d {
            next[i - 1] = &r[i] - &c * &self.g[i];
        }
        next[d - 1] = -c; // g monic: r_d - c * 1 with r_d = 0
        r.clone_from_slice(&next);
    }
}

fn add_dense(a: &LaurentPoly, b: &LaurentPoly, negate_b: bool) -> LaurentPoly {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if negate_b { -b } else { b.clone() };
    }
    let lo = a.offset.min(b.offset);
    let hi = a.max_exponent().unwrap().max(b.max_exponent().unwrap());
    let mut coeffs = vec![Rational::zero(); (hi - lo) as usize + 1];
    for (i, c) in a.coeffs.iter().enumerate() {
        coeffs[(a.offset - lo) as usize + i] += c;
    }
    for (i, c) in b.coeffs.iter().enumerate() {
        let slot = &mut coeffs[(b.offset - lo) as usize + i];
        if negate_b {
            *slot -= c;
        } else {
            *slot += c;
        }
    }
    LaurentPoly::canonical(lo, coeffs)
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        add_dense(self, rhs, false)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        add_dense(self, rhs, true)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        LaurentPoly::canonical(self.offset + rhs.offset, coeffs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        LaurentPoly::constant(Rational::from_integer(BigInt::from(c)))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match (e, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{e}")?,
                (_, false) => write!(f, "{mag}*x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}
