//! Power-Hadamard matrices.
//!
//! A [`PhMatrix`] stores the exponent matrix `[a_ij]` of `H = [x^a_ij]`.
//! Exponents are kept exactly as given (no reduction); every check reduces
//! the Gram matrix `H H*` modulo an explicit [`Modulus`] at verification time.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bh::BhMatrix;
use crate::laurent::{
    cyclotomic, rational_divides, rational_json, LaurentError, LaurentPoly, Rational, Reducer,
};
use crate::VerificationReport;

pub type PhReport = VerificationReport<LaurentPoly>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PhError {
    #[error("exponent matrix must be square and nonempty")]
    NotSquare,
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("cyclotomic product must list at least one order, all >= 1")]
    BadCyclotomicProduct,
    #[error("x^{old} and x^{new} are not congruent at ({i}, {j}); residue {residue}")]
    CongruenceViolated {
        i: usize,
        j: usize,
        old: i64,
        new: i64,
        residue: LaurentPoly,
    },
    #[error("shifting requires a modulus given as a product of cyclotomic polynomials")]
    ShiftNeedsCyclotomicProduct,
    #[error("expected a {expected}x{expected} argument, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("matrix orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("index ({i}, {j}) out of range for order {n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("gcd {gcd} does not divide a - b = {diff} at ({i}, {j})")]
    CrtIncompatible {
        i: usize,
        j: usize,
        gcd: i64,
        diff: i64,
    },
}

/// The Laurent polynomial a power-Hadamard matrix is taken relative to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modulus {
    Explicit(LaurentPoly),
    /// `prod_j phi_{i_j}(x)`.
    CyclotomicProduct(Vec<u64>),
}

impl Modulus {
    pub fn cyclotomic(k: u64) -> Self {
        Modulus::CyclotomicProduct(vec![k])
    }

    pub fn validate(&self) -> Result<(), PhError> {
        match self {
            Modulus::Explicit(f) => {
                if f.span().unwrap_or(0) == 0 {
                    return Err(LaurentError::DegenerateModulus.into());
                }
            }
            Modulus::CyclotomicProduct(orders) => {
                if orders.is_empty() || orders.contains(&0) {
                    return Err(PhError::BadCyclotomicProduct);
                }
            }
        }
        Ok(())
    }

    pub fn polynomial(&self) -> Result<LaurentPoly, PhError> {
        self.validate()?;
        match self {
            Modulus::Explicit(f) => Ok(f.clone()),
            Modulus::CyclotomicProduct(orders) => {
                let mut acc = LaurentPoly::one();
                for &k in orders {
                    acc = acc * cyclotomic(k)?;
                }
                Ok(acc)
            }
        }
    }

    pub fn reducer(&self) -> Result<Reducer, PhError> {
        Ok(Reducer::new(&self.polynomial()?)?)
    }

    /// `N = lcm(i_1, ..., i_l)` for a cyclotomic product, `None` for explicit moduli.
    pub fn shifting_number(&self) -> Option<u64> {
        match self {
            Modulus::CyclotomicProduct(orders) if !orders.is_empty() => {
                Some(orders.iter().fold(1u64, |acc, &k| acc.lcm(&k)))
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct PhMatrix {
    exponents: Vec<Vec<i64>>,
}

impl TryFrom<Vec<Vec<i64>>> for PhMatrix {
    type Error = PhError;
    fn try_from(v: Vec<Vec<i64>>) -> Result<Self, PhError> {
        PhMatrix::new(v)
    }
}

impl From<PhMatrix> for Vec<Vec<i64>> {
    fn from(m: PhMatrix) -> Self {
        m.exponents
    }
}

impl PhMatrix {
    pub fn new(exponents: Vec<Vec<i64>>) -> Result<Self, PhError> {
        let n = exponents.len();
        if n == 0 || exponents.iter().any(|r| r.len() != n) {
            return Err(PhError::NotSquare);
        }
        Ok(PhMatrix { exponents })
    }

    /// The exponent matrix of a Butson-Hadamard matrix, read as `[x^a_ij]`.
    pub fn from_bh(m: &BhMatrix) -> Self {
        PhMatrix {
            exponents: m
                .exponents()
                .iter()
                .map(|r| r.iter().map(|&e| e as i64).collect())
                .collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[Vec<i64>] {
        &self.exponents
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.exponents[i][j]
    }

    /// Entry `(i, j)` of `H H*`, i.e. `sum_l x^(a_il - a_jl)`.
    pub fn gram_entry(&self, i: usize, j: usize) -> LaurentPoly {
        let (ri, rj) = (&self.exponents[i], &self.exponents[j]);
        LaurentPoly::sum_of_monomials(ri.iter().zip(rj).map(|(a, b)| a - b))
    }

    pub fn to_laurent_matrix(&self) -> Vec<Vec<LaurentPoly>> {
        self.exponents
            .iter()
            .map(|r| r.iter().map(|&e| LaurentPoly::x_pow(e)).collect())
            .collect()
    }

    fn check_index(&self, i: usize, j: usize) -> Result<(), PhError> {
        let n = self.order();
        if i >= n || j >= n {
            return Err(PhError::IndexOutOfRange { i, j, n });
        }
        Ok(())
    }

    fn check_square_arg<T>(&self, arg: &[Vec<T>]) -> Result<(), PhError> {
        let n = self.order();
        if arg.len() != n || arg.iter().any(|r| r.len() != n) {
            return Err(PhError::ShapeMismatch {
                expected: n,
                found: arg.len(),
            });
        }
        Ok(())
    }

    /// Checks `H H* = n I` modulo `f`.
    pub fn verify(&self, f: &Modulus) -> Result<PhReport, PhError> {
        let reducer = f.reducer()?;
        Ok(self.verify_with(&reducer))
    }

    pub fn verify_with(&self, reducer: &Reducer) -> PhReport {
        let n = self.order();
        let failure = (0..n * n).into_par_iter().find_map_first(|idx| {
            let (i, j) = (idx / n, idx % n);
            let expected = if i == j { n as i64 } else { 0 };
            let r = reducer.reduce(&(self.gram_entry(i, j) - LaurentPoly::from(expected)));
            (!r.is_zero()).then_some((i, j, r))
        });
        VerificationReport::from_first_failure(failure)
    }

    /// Replaces `a_ij` by `a_new`, provided `x^a_ij = x^a_new` modulo `f`.
    pub fn exponent_replace(
        &self,
        f: &Modulus,
        i: usize,
        j: usize,
        a_new: i64,
    ) -> Result<PhMatrix, PhError> {
        self.check_index(i, j)?;
        let old = self.exponents[i][j];
        let diff = LaurentPoly::x_pow(old) - LaurentPoly::x_pow(a_new);
        let residue = f.reducer()?.reduce(&diff);
        if !residue.is_zero() {
            return Err(PhError::CongruenceViolated {
                i,
                j,
                old,
                new: a_new,
                residue,
            });
        }
        let mut out = self.clone();
        out.exponents[i][j] = a_new;
        Ok(out)
    }

    /// `[a_ij + t_ij * N]` with `N` the shifting number of the cyclotomic product `f`.
    pub fn shift(&self, f: &Modulus, t: &[Vec<i64>]) -> Result<PhMatrix, PhError> {
        f.validate()?;
        let big_n = f
            .shifting_number()
            .ok_or(PhError::ShiftNeedsCyclotomicProduct)? as i64;
        self.check_square_arg(t)?;
        Ok(PhMatrix {
            exponents: self
                .exponents
                .iter()
                .zip(t)
                .map(|(r, tr)| r.iter().zip(tr).map(|(a, s)| a + s * big_n).collect())
                .collect(),
        })
    }

    /// `H(x^k)`: every exponent multiplied by `k`.
    pub fn substitute(&self, k: u64) -> Result<PhMatrix, PhError> {
        if k == 0 {
            return Err(PhError::InvalidParameter(
                "substitution power must be >= 1".into(),
            ));
        }
        Ok(self.map(|e| e * k as i64))
    }

    /// `H(zeta_k)` as a Butson-Hadamard exponent matrix over `Z_k`.
    pub fn evaluate(&self, k: u64) -> Result<BhMatrix, PhError> {
        if k < 2 {
            return Err(PhError::InvalidParameter("root order must be >= 2".into()));
        }
        let m = k as i64;
        let exps = self
            .exponents
            .iter()
            .map(|r| r.iter().map(|e| e.rem_euclid(m) as u64).collect())
            .collect();
        Ok(BhMatrix::new(k, exps).expect("reduced exponents are in range"))
    }

    /// Row/column permutation followed by diagonal monomial scaling:
    /// `out[i][j] = a[row_perm[i]][col_perm[j]] + row_shifts[i] + col_shifts[j]`.
    pub fn equiv_transform(
        &self,
        row_perm: &[usize],
        col_perm: &[usize],
        row_shifts: &[i64],
        col_shifts: &[i64],
    ) -> Result<PhMatrix, PhError> {
        let n = self.order();
        check_permutation(row_perm, n)?;
        check_permutation(col_perm, n)?;
        if row_shifts.len() != n || col_shifts.len() != n {
            return Err(PhError::ShapeMismatch {
                expected: n,
                found: row_shifts.len().min(col_shifts.len()),
            });
        }
        let exponents = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        self.exponents[row_perm[i]][col_perm[j]] + row_shifts[i] + col_shifts[j]
                    })
                    .collect()
            })
            .collect();
        Ok(PhMatrix { exponents })
    }

    /// Equivalent matrix with zero first row and column:
    /// `b_ij = a_ij - a_1j - a_i1 + a_11`.
    pub fn normalize(&self) -> PhMatrix {
        let a = &self.exponents;
        let n = self.order();
        PhMatrix {
            exponents: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| a[i][j] - a[0][j] - a[i][0] + a[0][0])
                        .collect()
                })
                .collect(),
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.exponents[0].iter().all(|&e| e == 0) && self.exponents.iter().all(|r| r[0] == 0)
    }

    /// Kronecker product; exponents add because `x^a * x^b = x^(a + b)`.
    pub fn kronecker(&self, other: &PhMatrix) -> PhMatrix {
        let (n1, n2) = (self.order(), other.order());
        let mut exponents = vec![vec![0i64; n1 * n2]; n1 * n2];
        for (i, ri) in self.exponents.iter().enumerate() {
            for (j, a) in ri.iter().enumerate() {
                for (k, rk) in other.exponents.iter().enumerate() {
                    for (l, b) in rk.iter().enumerate() {
                        exponents[i * n2 + k][j * n2 + l] = a + b;
                    }
                }
            }
        }
        PhMatrix { exponents }
    }

    fn map(&self, f: impl Fn(i64) -> i64) -> PhMatrix {
        PhMatrix {
            exponents: self
                .exponents
                .iter()
                .map(|r| r.iter().map(|&e| f(e)).collect())
                .collect(),
        }
    }

    /// Indices of rows whose exponents all share one parity.
    pub fn uniform_parity_rows(&self) -> Vec<usize> {
        (0..self.order())
            .filter(|&i| same_parity(self.exponents[i].iter().copied()))
            .collect()
    }

    /// Indices of columns whose exponents all share one parity.
    pub fn uniform_parity_cols(&self) -> Vec<usize> {
        (0..self.order())
            .filter(|&j| same_parity(self.exponents.iter().map(|r| r[j])))
            .collect()
    }
}

fn same_parity(mut it: impl Iterator<Item = i64>) -> bool {
    match it.next() {
        None => true,
        Some(first) => it.all(|e| (e - first).rem_euclid(2) == 0),
    }
}

fn check_permutation(p: &[usize], n: usize) -> Result<(), PhError> {
    if p.len() != n {
        return Err(PhError::InvalidPermutation(format!(
            "length {} for order {n}",
            p.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in p {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(PhError::InvalidPermutation(format!(
                "{p:?} is not a bijection on 0..{n}"
            )));
        }
    }
    Ok(())
}

/// Multiplies `L`-matrices exactly.
pub fn laurent_matmul(a: &[Vec<LaurentPoly>], b: &[Vec<LaurentPoly>]) -> Vec<Vec<LaurentPoly>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(LaurentPoly::zero(), |acc, l| acc + &row[l] * &b[l][j]))
                .collect()
        })
        .collect()
}

/// Conjugate transpose `M* = [m_ji(x^-1)]`.
pub fn laurent_adjoint(a: &[Vec<LaurentPoly>]) -> Vec<Vec<LaurentPoly>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| (0..rows).map(|i| a[i][j].conjugate()).collect())
        .collect()
}

/// Checks the unscaled product law: for `G = H_1 ... H_k`, `G G* = n^k I` modulo `f`.
///
/// This is the radical-free form of saying that `G / sqrt(n^(k-1))` is again
/// power-Hadamard.
pub fn product_verify(ms: &[PhMatrix], f: &Modulus) -> Result<PhReport, PhError> {
    let first = ms
        .first()
        .ok_or_else(|| PhError::InvalidParameter("empty product".into()))?;
    let n = first.order();
    if let Some(bad) = ms.iter().find(|m| m.order() != n) {
        return Err(PhError::OrderMismatch(n, bad.order()));
    }
    let reducer = f.reducer()?;
    let mut g = first.to_laurent_matrix();
    for m in &ms[1..] {
        g = laurent_matmul(&g, &m.to_laurent_matrix());
    }
    let gram = laurent_matmul(&g, &laurent_adjoint(&g));
    let scale = LaurentPoly::constant(Rational::from_integer(num_traits::pow(
        BigInt::from(n),
        ms.len(),
    )));
    let failure = (0..n * n).into_par_iter().find_map_first(|idx| {
        let (i, j) = (idx / n, idx % n);
        let entry = if i == j {
            &gram[i][j] - &scale
        } else {
            gram[i][j].clone()
        };
        let r = reducer.reduce(&entry);
        (!r.is_zero()).then_some((i, j, r))
    });
    Ok(VerificationReport::from_first_failure(failure))
}

/// Solves `c = a (mod h)`, `c = b (mod k)` with `c` in `[0, lcm(h, k))`.
/// Returns `None` when `gcd(h, k)` does not divide `a - b`.
pub fn crt_pair(a: i64, h: i64, b: i64, k: i64) -> Option<i64> {
    let eg = h.extended_gcd(&k);
    let d = eg.gcd;
    if (b - a) % d != 0 {
        return None;
    }
    let l = (h / d) as i128 * k as i128;
    // h * x = d (mod k); t = x * (b - a) / d  (mod k / d)
    let kd = (k / d) as i128;
    let t = ((eg.x as i128 % kd) * (((b - a) / d) as i128 % kd)).rem_euclid(kd.max(1));
    let c = (a as i128 + h as i128 * t).rem_euclid(l);
    Some(c as i64)
}

/// Merges a matrix over `phi_h` and one over `phi_k` into one over `phi_h * phi_k`
/// by solving the entrywise congruences; entries land in `[0, lcm(h, k))`.
pub fn crt_merge(a: &PhMatrix, b: &PhMatrix, h: u64, k: u64) -> Result<PhMatrix, PhError> {
    if h == 0 || k == 0 {
        return Err(PhError::InvalidParameter(
            "cyclotomic orders must be >= 1".into(),
        ));
    }
    if a.order() != b.order() {
        return Err(PhError::OrderMismatch(a.order(), b.order()));
    }
    let (h, k) = (h as i64, k as i64);
    let d = h.gcd(&k);
    let n = a.order();
    let mut exponents = vec![vec![0i64; n]; n];
    for (i, row) in exponents.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let (x, y) = (a.get(i, j), b.get(i, j));
            *cell = crt_pair(x, h, y, k).ok_or(PhError::CrtIncompatible {
                i,
                j,
                gcd: d,
                diff: x - y,
            })?;
        }
    }
    Ok(PhMatrix { exponents })
}

/// Divisibility screens for the existence of a `PH(n, f)`.
///
/// `f(1) | n` is necessary for every such matrix when `f(1) != 0`. `f(-1) | n`
/// is necessary when, in addition, some row or some column of the matrix has
/// exponents of a single parity and `f(-1) != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonexistenceReport {
    pub n: usize,
    #[serde(with = "rational_json")]
    pub f_at_1: Rational,
    #[serde(with = "rational_json")]
    pub f_at_minus_1: Rational,
    pub f1_applies: bool,
    pub f1_divides: bool,
    pub fm1_applies: bool,
    pub fm1_divides: bool,
    pub parity_rows: Vec<usize>,
    pub parity_cols: Vec<usize>,
}

impl NonexistenceReport {
    /// True when an applicable divisibility condition fails, so no such matrix exists.
    pub fn rules_out(&self) -> bool {
        (self.f1_applies && !self.f1_divides) || (self.fm1_applies && !self.fm1_divides)
    }
}

/// Evaluates the screens for order `n`; pass the matrix to enable the parity-based one.
pub fn nonexistence_check(
    n: usize,
    f: &Modulus,
    m: Option<&PhMatrix>,
) -> Result<NonexistenceReport, PhError> {
    let poly = f.polynomial()?;
    let f_at_1 = poly.eval(&Rational::one())?;
    let f_at_minus_1 = poly.eval(&-Rational::one())?;
    let nn = BigInt::from(n);
    let (parity_rows, parity_cols) = match m {
        Some(m) => {
            if m.order() != n {
                return Err(PhError::OrderMismatch(n, m.order()));
            }
            (m.uniform_parity_rows(), m.uniform_parity_cols())
        }
        None => (Vec::new(), Vec::new()),
    };
    let parity = !parity_rows.is_empty() || !parity_cols.is_empty();
    Ok(NonexistenceReport {
        n,
        f1_applies: !f_at_1.is_zero(),
        f1_divides: rational_divides(&f_at_1, &nn),
        fm1_applies: parity && !f_at_minus_1.is_zero(),
        fm1_divides: rational_divides(&f_at_minus_1, &nn),
        f_at_1,
        f_at_minus_1,
        parity_rows,
        parity_cols,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::rat;

    fn ph(rows: &[&[i64]]) -> PhMatrix {
        PhMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn f43() -> Modulus {
        Modulus::CyclotomicProduct(vec![4, 3])
    }

    fn h6() -> PhMatrix {
        ph(&[
            &[0, 0, 0, 0, 0, 0],
            &[0, 6, 1, 11, 11, 1],
            &[0, 1, 6, 1, 11, 11],
            &[0, 11, 1, 6, 1, 11],
            &[0, 11, 11, 1, 6, 1],
            &[0, 1, 11, 11, 1, 6],
        ])
    }

    fn phi3_x2() -> Modulus {
        Modulus::Explicit(LaurentPoly::from_ints(0, &[1, 0, 1, 0, 1]))
    }

    fn p3_sq() -> PhMatrix {
        ph(&[&[0, 2, 2], &[2, 0, 2], &[2, 2, 0]])
    }

    #[test]
    fn rejects_non_square() {
        assert_eq!(PhMatrix::new(vec![vec![0, 1]]), Err(PhError::NotSquare));
        assert_eq!(PhMatrix::new(vec![]), Err(PhError::NotSquare));
    }

    #[test]
    fn verify_shift_example() {
        assert!(h6().verify(&f43()).unwrap().ok);
        let mut t = vec![vec![0; 6]; 6];
        t[1][5] = 1;
        let shifted = h6().shift(&f43(), &t).unwrap();
        assert_eq!(shifted.get(1, 5), 13);
        assert!(shifted.verify(&f43()).unwrap().ok);
    }

    #[test]
    fn all_ones_order_three_fails_mod_x_plus_one() {
        let m = ph(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]);
        let rep = m.verify(&Modulus::cyclotomic(2)).unwrap();
        assert!(!rep.ok);
        let fail = rep.first_failure.unwrap();
        assert_eq!((fail.i, fail.j), (0, 1));
        // 3 mod (x + 1) = 3
        assert_eq!(fail.residue, LaurentPoly::from(3));
    }

    #[test]
    fn shift_zero_and_single_cyclotomic() {
        let z = vec![vec![0; 6]; 6];
        assert_eq!(h6().shift(&f43(), &z).unwrap(), h6());
        assert_eq!(Modulus::cyclotomic(7).shifting_number(), Some(7));
        assert_eq!(f43().shifting_number(), Some(12));
        assert_eq!(
            h6().shift(&phi3_x2(), &z),
            Err(PhError::ShiftNeedsCyclotomicProduct)
        );
    }

    #[test]
    fn exponent_replace_examples() {
        let m = p3_sq();
        let r = m.exponent_replace(&phi3_x2(), 0, 1, 8).unwrap();
        assert_eq!(r.get(0, 1), 8);
        assert!(r.verify(&phi3_x2()).unwrap().ok);
        assert_eq!(m.exponent_replace(&phi3_x2(), 0, 1, 2).unwrap(), m);
        match m.exponent_replace(&phi3_x2(), 0, 1, 3) {
            Err(PhError::CongruenceViolated { residue, .. }) => assert!(!residue.is_zero()),
            other => panic!("expected rejection, got {other:?}"),
        }
        assert!(matches!(
            m.exponent_replace(&phi3_x2(), 3, 0, 0),
            Err(PhError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn substitute_examples() {
        let base = ph(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        let sq = base.substitute(2).unwrap();
        assert_eq!(sq, p3_sq());
        assert!(sq.verify(&phi3_x2()).unwrap().ok);
        assert_eq!(base.substitute(1).unwrap(), base);
        assert_eq!(base.substitute(3).unwrap().get(0, 1), 3);
        assert!(base.substitute(0).is_err());
    }

    #[test]
    fn evaluate_reduces_exponents() {
        let bh = p3_sq().evaluate(3).unwrap();
        assert_eq!(bh.m(), 3);
        assert_eq!(
            bh.exponents(),
            &[vec![0, 2, 2], vec![2, 0, 2], vec![2, 2, 0]]
        );
        let neg = ph(&[&[-1]]).evaluate(5).unwrap();
        assert_eq!(neg.exponents(), &[vec![4]]);
        assert!(ph(&[&[0]]).evaluate(1).is_err());
    }

    #[test]
    fn equiv_transform_examples() {
        let id: Vec<usize> = (0..6).collect();
        let zero = vec![0i64; 6];
        assert_eq!(h6().equiv_transform(&id, &id, &zero, &zero).unwrap(), h6());
        let mut swap = id.clone();
        swap.swap(0, 1);
        let t = h6().equiv_transform(&swap, &id, &zero, &zero).unwrap();
        assert!(t.verify(&f43()).unwrap().ok);
        let mut cs = zero.clone();
        cs[1] = 3;
        let t = h6().equiv_transform(&id, &id, &zero, &cs).unwrap();
        assert_eq!(t.get(2, 1), 4);
        assert!(t.verify(&f43()).unwrap().ok);
        assert!(matches!(
            h6().equiv_transform(&[0, 0, 1, 2, 3, 4], &id, &zero, &zero),
            Err(PhError::InvalidPermutation(_))
        ));
        assert!(h6().equiv_transform(&[0, 1], &id, &zero, &zero).is_err());
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(h6().normalize(), h6());
        let c = ph(&[&[5, 5], &[1, 2]]);
        assert_eq!(c.normalize().exponents()[0], vec![0, 0]);
        // [[x, x^2], [1, 1]] is a PH(2, x + 1)
        let m = ph(&[&[1, 2], &[0, 0]]);
        let phi2 = Modulus::cyclotomic(2);
        assert!(m.verify(&phi2).unwrap().ok);
        let n = m.normalize();
        assert_eq!(n, ph(&[&[0, 0], &[0, -1]]));
        assert!(n.is_normalized());
        assert!(n.verify(&phi2).unwrap().ok);
    }

    #[test]
    fn kronecker_examples() {
        let one = ph(&[&[0]]);
        assert_eq!(one.kronecker(&h6()), h6());
        let p3 = ph(&[&[0, 0, 0], &[0, 1, 2], &[0, 2, 1]]);
        let k = p3.kronecker(&p3);
        assert_eq!(k.order(), 9);
        assert!(k.verify(&Modulus::cyclotomic(3)).unwrap().ok);
        let two = ph(&[&[0, 0], &[0, 1]]);
        assert_eq!(two.kronecker(&p3).order(), 6);
    }

    #[test]
    fn product_law_example() {
        let h1 = ph(&[&[2, 4], &[0, 1]]);
        let h2 = ph(&[&[1, 5], &[0, 1]]);
        let h3 = ph(&[&[3, 1], &[1, 0]]);
        let f = Modulus::Explicit(LaurentPoly::from_ints(0, &[1, 1]));
        assert!(product_verify(&[h1.clone(), h2, h3], &f).unwrap().ok);
        assert_eq!(
            product_verify(std::slice::from_ref(&h1), &f).unwrap(),
            h1.verify(&f).unwrap()
        );
        let p3 = ph(&[&[0, 0, 0], &[0, 1, 2], &[0, 2, 1]]);
        assert!(matches!(
            product_verify(&[h1, p3], &f),
            Err(PhError::OrderMismatch(2, 3))
        ));
    }

    #[test]
    fn crt_pair_solutions() {
        assert_eq!(crt_pair(1, 3, -2, 6), Some(4));
        assert_eq!(crt_pair(2, 3, 3, 5), Some(8));
        assert_eq!(crt_pair(1, 4, 0, 6), None);
        assert_eq!(crt_pair(5, 7, 5, 7), Some(5));
    }

    #[test]
    fn crt_merge_example() {
        let a = ph(&[&[1, -2, 0], &[0, -2, -2], &[0, -1, 0]]);
        let b = ph(&[&[-2, 1, 0], &[0, 1, -2], &[0, -1, 0]]);
        let c = crt_merge(&a, &b, 3, 6).unwrap();
        assert_eq!(c.get(0, 0), 4);
        assert_eq!(c, ph(&[&[4, 1, 0], &[0, 1, 4], &[0, 5, 0]]));
        assert!(
            c.verify(&Modulus::CyclotomicProduct(vec![3, 6]))
                .unwrap()
                .ok
        );
        assert_eq!(crt_merge(&a, &a, 3, 3).unwrap(), a.map(|e| e.rem_euclid(3)));
        let bad = ph(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 1]]);
        assert!(matches!(
            crt_merge(&a, &bad, 3, 6),
            Err(PhError::CrtIncompatible { .. })
        ));
    }

    #[test]
    fn nonexistence_examples() {
        let h3 = ph(&[
            &[0, 0, 0, 0, 0, 0],
            &[0, 1, 2, 3, 4, 5],
            &[0, 2, 4, 0, 2, 4],
            &[0, 3, 0, 3, 0, 3],
            &[0, 4, 2, 0, 4, 2],
            &[0, 5, 4, 3, 2, 1],
        ]);
        let f = Modulus::Explicit(LaurentPoly::from_ints(0, &[1, -1, 1]));
        let rep = nonexistence_check(6, &f, Some(&h3)).unwrap();
        assert!(rep.parity_rows.contains(&4));
        assert_eq!(rep.f_at_minus_1, rat(3));
        assert!(rep.fm1_applies && rep.fm1_divides);
        assert!(rep.f1_applies && rep.f1_divides);
        assert!(!rep.rules_out());

        let rep = nonexistence_check(3, &Modulus::cyclotomic(2), None).unwrap();
        assert_eq!(rep.f_at_1, rat(2));
        assert!(rep.f1_applies && !rep.f1_divides);
        assert!(rep.rules_out());

        let rep = nonexistence_check(3, &Modulus::cyclotomic(1), None).unwrap();
        assert!(!rep.f1_applies);
    }
}
