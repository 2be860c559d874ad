use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{LaurentError, LaurentPoly, Rational};

/// Positive divisors of `k` in increasing order.
pub fn divisors(k: u64) -> Vec<u64> {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    let mut d = 1;
    while d * d <= k {
        if k.is_multiple_of(d) {
            lo.push(d);
            if d * d != k {
                hi.push(k / d);
            }
        }
        d += 1;
    }
    lo.extend(hi.into_iter().rev());
    lo
}

pub fn euler_phi(k: u64) -> u64 {
    let mut n = k;
    let mut out = k;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

fn cache() -> &'static Mutex<HashMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

// Exact quotient of `num` by a monic `den`; panics if the division is not exact.
fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut r = num.to_vec();
    let mut q = vec![BigInt::zero(); num.len() - dd];
    for i in (0..q.len()).rev() {
        let t = r[i + dd].clone();
        if t.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            r[i + j] -= &t * dj;
        }
        q[i] = t;
    }
    debug_assert!(r.iter().all(Zero::is_zero), "inexact cyclotomic division");
    q
}

/// Integer coefficients (ascending) of the `k`-th cyclotomic polynomial.
///
/// Built from the quotient identity `phi_k = (x^k - 1) / prod_{d | k, d < k} phi_d`,
/// processing the divisors of `k` bottom-up.
pub(crate) fn cyclotomic_coeffs(k: u64) -> Result<Arc<Vec<BigInt>>, LaurentError> {
    if k == 0 {
        return Err(LaurentError::ZeroOrder);
    }
    if let Some(hit) = cache().lock().unwrap().get(&k) {
        return Ok(hit.clone());
    }
    let divs = divisors(k);
    let mut local: HashMap<u64, Arc<Vec<BigInt>>> = HashMap::new();
    for &d in &divs {
        if let Some(hit) = cache().lock().unwrap().get(&d) {
            local.insert(d, hit.clone());
            continue;
        }
        let mut num = vec![BigInt::zero(); d as usize + 1];
        num[0] = BigInt::from(-1);
        num[d as usize] = BigInt::one();
        for e in divs.iter().copied().filter(|&e| e < d && d % e == 0) {
            num = exact_div_monic(&num, &local[&e]);
        }
        let phi = Arc::new(num);
        cache().lock().unwrap().insert(d, phi.clone());
        local.insert(d, phi);
    }
    Ok(local.remove(&k).unwrap())
}

/// The `k`-th cyclotomic polynomial as a Laurent polynomial.
pub fn cyclotomic(k: u64) -> Result<LaurentPoly, LaurentError> {
    let c = cyclotomic_coeffs(k)?;
    Ok(LaurentPoly::from_coeffs(
        0,
        c.iter().cloned().map(Rational::from_integer).collect(),
    ))
}

/// The ring `Z[x] / (phi_m)`, with `x` standing for a primitive `m`-th root of unity.
///
/// Residues use the basis `1, x, ..., x^(phi(m) - 1)`. The canonical forms of
/// all powers `zeta^e`, `0 <= e < m`, are precomputed.
pub struct CycloRing {
    order: u64,
    phi: Arc<Vec<BigInt>>,
    powers: Vec<Vec<BigInt>>,
}

impl CycloRing {
    pub fn new(order: u64) -> Result<Arc<Self>, LaurentError> {
        let phi = cyclotomic_coeffs(order)?;
        let deg = phi.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![BigInt::zero(); deg];
        cur[0] = BigInt::one();
        for _ in 0..order {
            powers.push(cur.clone());
            // cur <- x * cur mod phi
            let top = cur.pop().unwrap();
            cur.insert(0, BigInt::zero());
            if !top.is_zero() {
                for (c, p) in cur.iter_mut().zip(phi.iter()) {
                    *c -= &top * p;
                }
            }
        }
        Ok(Arc::new(CycloRing { order, phi, powers }))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Rank of the ring over `Z`, i.e. `euler_phi(order)`.
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn zero(self: &Arc<Self>) -> CycloElement {
        CycloElement {
            ring: self.clone(),
            coeffs: vec![BigInt::zero(); self.degree()],
        }
    }

    pub fn integer(self: &Arc<Self>, n: impl Into<BigInt>) -> CycloElement {
        let mut z = self.zero();
        z.coeffs[0] = n.into();
        z
    }

    pub fn one(self: &Arc<Self>) -> CycloElement {
        self.integer(1)
    }

    /// Canonical representative of `zeta^(e mod m)`.
    pub fn zeta_pow(self: &Arc<Self>, e: i64) -> CycloElement {
        let idx = e.rem_euclid(self.order as i64) as usize;
        CycloElement {
            ring: self.clone(),
            coeffs: self.powers[idx].clone(),
        }
    }

    /// `sum_e counts[e] * zeta^e` for a histogram indexed by exponent mod `m`.
    pub fn from_power_counts(self: &Arc<Self>, counts: &[i64]) -> CycloElement {
        debug_assert_eq!(counts.len(), self.order as usize);
        let mut coeffs = vec![BigInt::zero(); self.degree()];
        for (e, &n) in counts.iter().enumerate() {
            if n == 0 {
                continue;
            }
            for (c, p) in coeffs.iter_mut().zip(&self.powers[e]) {
                if !p.is_zero() {
                    *c += p * n;
                }
            }
        }
        CycloElement {
            ring: self.clone(),
            coeffs,
        }
    }

    /// Sum of `zeta^e` over the given exponents, with multiplicity.
    pub fn sum_of_powers<I: IntoIterator<Item = i64>>(self: &Arc<Self>, exps: I) -> CycloElement {
        let m = self.order as i64;
        let mut counts = vec![0i64; self.order as usize];
        for e in exps {
            counts[e.rem_euclid(m) as usize] += 1;
        }
        self.from_power_counts(&counts)
    }

    /// Reduces an arbitrary integer polynomial (ascending coefficients).
    pub fn reduce(self: &Arc<Self>, poly: &[BigInt]) -> CycloElement {
        let deg = self.degree();
        let mut r = poly.to_vec();
        while r.len() > deg {
            let top = r.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let base = r.len() - deg;
            for (i, p) in self.phi[..deg].iter().enumerate() {
                r[base + i] -= &top * p;
            }
        }
        r.resize(deg, BigInt::zero());
        CycloElement {
            ring: self.clone(),
            coeffs: r,
        }
    }
}

impl fmt::Debug for CycloRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloRing(Z[x]/phi_{})", self.order)
    }
}

/// An element of `Z[x] / (phi_m)`.
#[derive(Clone)]
pub struct CycloElement {
    ring: Arc<CycloRing>,
    coeffs: Vec<BigInt>,
}

impl CycloElement {
    /// `zeta_m^e` in a freshly built ring of order `m`.
    pub fn zeta_pow(m: u64, e: i64) -> Result<Self, LaurentError> {
        Ok(CycloRing::new(m)?.zeta_pow(e))
    }

    pub fn order(&self) -> u64 {
        self.ring.order
    }

    pub fn ring(&self) -> &Arc<CycloRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn check(&self, other: &Self) -> Result<(), LaurentError> {
        if self.order() != other.order() {
            return Err(LaurentError::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check(other)?;
        Ok(CycloElement {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LaurentError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check(other)?;
        let deg = self.ring.degree();
        let mut prod = vec![BigInt::zero(); (2 * deg).saturating_sub(1).max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        Ok(self.ring.reduce(&prod))
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        CycloElement {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c * &k).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base).unwrap();
            }
            base = base.try_mul(&base).unwrap();
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The integer this element equals, if it lies in `Z`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    pub fn is_integer(&self, n: impl Into<BigInt>) -> bool {
        self.as_integer().is_some_and(|v| *v == n.into())
    }

    /// The exponent `e < m` with `self == zeta^e`, if any.
    pub fn root_exponent(&self) -> Option<u64> {
        (0..self.ring.order).find(|&e| self.ring.powers[e as usize] == self.coeffs)
    }

    /// Smallest `t >= 1` with `self^t == 1`, searched up to `bound`.
    pub fn multiplicative_order(&self, bound: u64) -> Option<u64> {
        let one = self.ring.one();
        let mut acc = self.clone();
        for t in 1..=bound {
            if acc == one {
                return Some(t);
            }
            acc = acc.try_mul(self).unwrap();
        }
        None
    }

    /// The element as an ordinary integer polynomial in `x`.
    pub fn to_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_coeffs(
            0,
            self.coeffs
                .iter()
                .cloned()
                .map(Rational::from_integer)
                .collect(),
        )
    }

    /// Exact halving test helper: `self == k * other`.
    pub fn is_multiple_of(&self, other: &Self, k: &BigInt) -> bool {
        self.order() == other.order()
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| *a == b * k)
    }
}

impl PartialEq for CycloElement {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order() && self.coeffs == other.coeffs
    }
}

impl Eq for CycloElement {}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloElement[m={}]({})", self.order(), self.to_laurent())
    }
}
