//! Butson-Hadamard matrices `H = [zeta_m^a_ij]` with `H H* = n I`.
//!
//! Orthogonality is decided in `Z[x] / (phi_m)`, where a sum of `m`-th roots
//! of unity vanishes exactly when its reduced representative is zero.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{divisors, CycloElement, CycloRing};
use crate::ph::PhMatrix;
use crate::VerificationReport;

pub type BhReport = VerificationReport<CycloElement>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BhError {
    #[error("root order must be at least 2, got {0}")]
    BadRootOrder(u64),
    #[error("exponent matrix must be square and nonempty")]
    NotSquare,
    #[error("exponent {value} at ({i}, {j}) is outside [0, {m})")]
    ExponentOutOfRange {
        i: usize,
        j: usize,
        value: u64,
        m: u64,
    },
    #[error("matrix orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error(
        "search size n={n}, m={m} exceeds the guard (n <= 8, m <= 6); pass the override to run it"
    )]
    SearchGuard { n: usize, m: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BhJson", into = "BhJson")]
pub struct BhMatrix {
    m: u64,
    exponents: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct BhJson {
    n: usize,
    m: u64,
    exponents: Vec<Vec<u64>>,
}

impl TryFrom<BhJson> for BhMatrix {
    type Error = BhError;
    fn try_from(j: BhJson) -> Result<Self, BhError> {
        if j.exponents.len() != j.n {
            return Err(BhError::NotSquare);
        }
        BhMatrix::new(j.m, j.exponents)
    }
}

impl From<BhMatrix> for BhJson {
    fn from(b: BhMatrix) -> Self {
        BhJson {
            n: b.order(),
            m: b.m,
            exponents: b.exponents,
        }
    }
}

impl BhMatrix {
    pub fn new(m: u64, exponents: Vec<Vec<u64>>) -> Result<Self, BhError> {
        if m < 2 {
            return Err(BhError::BadRootOrder(m));
        }
        let n = exponents.len();
        if n == 0 || exponents.iter().any(|r| r.len() != n) {
            return Err(BhError::NotSquare);
        }
        for (i, r) in exponents.iter().enumerate() {
            if let Some((j, &value)) = r.iter().enumerate().find(|(_, &e)| e >= m) {
                return Err(BhError::ExponentOutOfRange { i, j, value, m });
            }
        }
        Ok(BhMatrix { m, exponents })
    }

    /// Builds from arbitrary integer exponents, reducing each mod `m`.
    pub fn from_exponents_mod(m: u64, exponents: &[Vec<i64>]) -> Result<Self, BhError> {
        if m < 2 {
            return Err(BhError::BadRootOrder(m));
        }
        let mi = m as i64;
        BhMatrix::new(
            m,
            exponents
                .iter()
                .map(|r| r.iter().map(|e| e.rem_euclid(mi) as u64).collect())
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.exponents.len()
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn exponents(&self) -> &[Vec<u64>] {
        &self.exponents
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.exponents[i][j]
    }

    /// Checks `H H* = n I` exactly over the cyclotomic integers.
    pub fn verify(&self) -> BhReport {
        let ring = CycloRing::new(self.m).expect("m >= 2");
        let n = self.order();
        let m = self.m as usize;
        let failure = (0..n * n).into_par_iter().find_map_first(|idx| {
            let (i, j) = (idx / n, idx % n);
            let mut counts = vec![0i64; m];
            for (a, b) in self.exponents[i].iter().zip(&self.exponents[j]) {
                counts[((a + self.m - b) % self.m) as usize] += 1;
            }
            let mut s = ring.from_power_counts(&counts);
            if i == j {
                s = s.try_sub(&ring.integer(n as i64)).expect("same ring");
            }
            (!s.is_zero()).then_some((i, j, s))
        });
        VerificationReport::from_first_failure(failure)
    }

    pub fn is_bh(&self) -> bool {
        self.verify().ok
    }

    /// Equivalent matrix with zero first row and column.
    pub fn normalize(&self) -> BhMatrix {
        let (m, a) = (self.m, &self.exponents);
        let n = self.order();
        let exponents = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (a[i][j] + 2 * m - a[0][j] - a[i][0] + a[0][0]) % m)
                    .collect()
            })
            .collect();
        BhMatrix { m, exponents }
    }

    pub fn is_normalized(&self) -> bool {
        self.exponents[0].iter().all(|&e| e == 0) && self.exponents.iter().all(|r| r[0] == 0)
    }

    /// Kronecker product of two matrices over the same root order.
    pub fn kronecker(&self, other: &BhMatrix) -> Result<BhMatrix, BhError> {
        if self.m != other.m {
            return Err(BhError::InvalidParameter(format!(
                "root orders differ ({} vs {})",
                self.m, other.m
            )));
        }
        let k = PhMatrix::from_bh(self).kronecker(&PhMatrix::from_bh(other));
        BhMatrix::from_exponents_mod(self.m, k.exponents())
    }
}

/// The character table of `Z_n`: `a_ij = i j mod n`.
pub fn fourier(n: usize) -> Result<BhMatrix, BhError> {
    if n < 2 {
        return Err(BhError::InvalidParameter(format!(
            "fourier order must be >= 2, got {n}"
        )));
    }
    let exponents = (0..n)
        .map(|i| (0..n).map(|j| ((i * j) % n) as u64).collect())
        .collect();
    Ok(BhMatrix {
        m: n as u64,
        exponents,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhReport {
    pub is_gh: bool,
    pub failing_divisor: Option<u64>,
}

/// Checks that `[zeta_d^a_ij]` is Butson-Hadamard for every divisor `d > 1` of `k`,
/// which is the condition for `[c^a_ij]` to be a generalized Hadamard matrix over
/// the cyclic group `C_k = <c>`.
pub fn gh_check(exponents: &[Vec<i64>], k: u64) -> Result<GhReport, BhError> {
    if k < 2 {
        return Err(BhError::BadRootOrder(k));
    }
    for d in divisors(k).into_iter().filter(|&d| d > 1) {
        if !BhMatrix::from_exponents_mod(d, exponents)?.is_bh() {
            return Ok(GhReport {
                is_gh: false,
                failing_divisor: Some(d),
            });
        }
    }
    Ok(GhReport {
        is_gh: true,
        failing_divisor: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlendReport {
    pub product_is_bh: bool,
    pub sum_is_bh: bool,
    pub product: Option<BhMatrix>,
    pub sum: Option<BhMatrix>,
}

/// Forms `(H1 H2(zeta_h)) / 2` and `(H1 + H2(zeta_h)) / 2` exactly and reports
/// whether each is a matrix of `h`-th roots of unity satisfying `H H* = n I`.
pub fn blend_check(h1: &BhMatrix, h2: &PhMatrix, h: u64) -> Result<BlendReport, BhError> {
    if h1.m != h {
        return Err(BhError::InvalidParameter(format!(
            "first matrix has root order {}, expected {h}",
            h1.m
        )));
    }
    let n = h1.order();
    if h2.order() != n {
        return Err(BhError::OrderMismatch(n, h2.order()));
    }
    let ring = CycloRing::new(h).expect("h >= 2");
    let b: Vec<Vec<i64>> = h2.exponents().to_vec();
    let a = &h1.exponents;

    let product: Vec<Vec<CycloElement>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| ring.sum_of_powers((0..n).map(|l| a[i][l] as i64 + b[l][j])))
                .collect()
        })
        .collect();
    let sum: Vec<Vec<CycloElement>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| ring.sum_of_powers([a[i][j] as i64, b[i][j]]))
                .collect()
        })
        .collect();

    let product = halve_to_roots(&ring, &product).filter(BhMatrix::is_bh);
    let sum = halve_to_roots(&ring, &sum).filter(BhMatrix::is_bh);
    Ok(BlendReport {
        product_is_bh: product.is_some(),
        sum_is_bh: sum.is_some(),
        product,
        sum,
    })
}

/// Reads `[s_ij / 2]` as an exponent matrix if every `s_ij` equals `2 zeta^e`.
fn halve_to_roots(ring: &Arc<CycloRing>, m: &[Vec<CycloElement>]) -> Option<BhMatrix> {
    let two = BigInt::from(2);
    let exps = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| {
                    (0..ring.order()).find(|&e| s.is_multiple_of(&ring.zeta_pow(e as i64), &two))
                })
                .collect::<Option<Vec<u64>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    BhMatrix::new(ring.order(), exps).ok()
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub limit: usize,
    pub allow_large: bool,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            limit: usize::MAX,
            allow_large: false,
            parallel: true,
        }
    }
}

/// Enumerates normalized `BH(n, m)` matrices whose rows after the first are
/// strictly increasing lexicographically, in lexicographic order of the
/// row-major exponent list, stopping after `limit` results.
pub fn bh_search(n: usize, m: u64, opts: SearchOptions) -> Result<Vec<BhMatrix>, BhError> {
    if m < 2 {
        return Err(BhError::BadRootOrder(m));
    }
    if n == 0 {
        return Err(BhError::InvalidParameter("order must be >= 1".into()));
    }
    if !opts.allow_large && (n > 8 || m > 6) {
        return Err(BhError::SearchGuard { n, m });
    }
    if opts.limit == 0 {
        return Ok(Vec::new());
    }
    let ctx = SearchCtx::new(n, m);
    if n == 1 {
        return Ok(vec![BhMatrix::new(m, vec![vec![0]])?]);
    }
    let mut grid = vec![vec![0u64; n]; n];
    let found = if opts.parallel {
        let branches: Vec<Vec<Vec<Vec<u64>>>> = (0..m)
            .into_par_iter()
            .map(|first| {
                let mut g = grid.clone();
                g[1][1] = first;
                let mut out = Vec::new();
                if ctx.feasible(&g, 1, 1) {
                    ctx.dfs(&mut g, 1, 2, opts.limit, &mut out);
                }
                out
            })
            .collect();
        branches.into_iter().flatten().take(opts.limit).collect()
    } else {
        let mut out = Vec::new();
        ctx.dfs(&mut grid, 1, 1, opts.limit, &mut out);
        out
    };
    Ok(found
        .into_iter()
        .map(|e| BhMatrix::new(m, e).expect("search emits valid exponents"))
        .collect())
}

struct SearchCtx {
    n: usize,
    m: u64,
    /// `zeta^e` in the power basis, as machine integers.
    powers: Vec<Vec<i64>>,
    /// `reachable[r]` holds every sum of exactly `r` roots of unity.
    reachable: Vec<HashSet<Vec<i64>>>,
}

impl SearchCtx {
    fn new(n: usize, m: u64) -> Self {
        let ring = CycloRing::new(m).expect("m >= 2");
        let powers: Vec<Vec<i64>> = (0..m)
            .map(|e| {
                ring.zeta_pow(e as i64)
                    .coeffs()
                    .iter()
                    .map(|c| c.to_i64().expect("small coefficients"))
                    .collect()
            })
            .collect();
        let deg = ring.degree();
        let mut reachable = vec![HashSet::from([vec![0i64; deg]])];
        for r in 1..=n {
            let next: HashSet<Vec<i64>> = reachable[r - 1]
                .iter()
                .flat_map(|s| powers.iter().map(move |p| add(s, p)))
                .collect();
            reachable.push(next);
        }
        SearchCtx {
            n,
            m,
            powers,
            reachable,
        }
    }

    /// Whether row `r`, filled through column `c`, can still be orthogonal to every earlier row
    /// and can still exceed row `r - 1` lexicographically.
    fn feasible(&self, g: &[Vec<u64>], r: usize, c: usize) -> bool {
        if r >= 2 && g[r][..=c] < g[r - 1][..=c] {
            return false;
        }
        let remaining = self.n - c - 1;
        (0..r).all(|s| {
            let mut sum = vec![0i64; self.powers[0].len()];
            for (&x, &y) in g[r][..=c].iter().zip(&g[s][..=c]) {
                let d = (x + self.m - y) % self.m;
                add_assign(&mut sum, &self.powers[d as usize]);
            }
            let neg: Vec<i64> = sum.iter().map(|v| -v).collect();
            self.reachable[remaining].contains(&neg)
        })
    }

    fn dfs(
        &self,
        g: &mut Vec<Vec<u64>>,
        r: usize,
        c: usize,
        limit: usize,
        out: &mut Vec<Vec<Vec<u64>>>,
    ) {
        if out.len() >= limit {
            return;
        }
        if c == self.n {
            if r >= 2 && g[r] == g[r - 1] {
                return;
            }
            if r + 1 == self.n {
                out.push(g.clone());
            } else {
                self.dfs(g, r + 1, 1, limit, out);
            }
            return;
        }
        for v in 0..self.m {
            g[r][c] = v;
            if self.feasible(g, r, c) {
                self.dfs(g, r, c + 1, limit, out);
                if out.len() >= limit {
                    break;
                }
            }
        }
        g[r][c] = 0;
    }
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn add_assign(a: &mut [i64], b: &[i64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ph::Modulus;

    fn bh(m: u64, rows: &[&[u64]]) -> BhMatrix {
        BhMatrix::new(m, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn constructor_validates() {
        assert_eq!(
            BhMatrix::new(1, vec![vec![0]]),
            Err(BhError::BadRootOrder(1))
        );
        assert_eq!(BhMatrix::new(3, vec![vec![0, 1]]), Err(BhError::NotSquare));
        assert!(matches!(
            BhMatrix::new(3, vec![vec![0, 3], vec![0, 0]]),
            Err(BhError::ExponentOutOfRange { i: 0, j: 1, .. })
        ));
    }

    #[test]
    fn fourier_shapes() {
        assert_eq!(fourier(2).unwrap(), bh(2, &[&[0, 0], &[0, 1]]));
        assert_eq!(fourier(9).unwrap().get(4, 5), 2);
        assert!(fourier(1).is_err());
        for n in 2..=12 {
            assert!(fourier(n).unwrap().is_bh(), "fourier({n})");
        }
    }

    #[test]
    fn fourier_three_row_sums() {
        let ring = CycloRing::new(3).unwrap();
        let f = fourier(3).unwrap();
        for (i, row) in f.exponents().iter().enumerate() {
            let s = ring.sum_of_powers(row.iter().map(|&e| e as i64));
            assert!(s.is_integer(if i == 0 { 3 } else { 0 }));
        }
    }

    #[test]
    fn tampered_fourier_fails() {
        let mut e = fourier(9).unwrap().exponents().to_vec();
        e[3][4] = (e[3][4] + 1) % 9;
        let rep = BhMatrix::new(9, e).unwrap().verify();
        assert!(!rep.ok);
        let f = rep.first_failure.unwrap();
        assert_eq!((f.i, f.j), (0, 3));
    }

    #[test]
    fn normalize_removes_row_shift() {
        let mut e = fourier(3).unwrap().exponents().to_vec();
        for v in e[2].iter_mut() {
            *v = (*v + 1) % 3;
        }
        let shifted = BhMatrix::new(3, e).unwrap();
        assert!(shifted.is_bh());
        let n = shifted.normalize();
        assert_eq!(n, fourier(3).unwrap());
        assert_eq!(n.normalize(), n);
    }

    #[test]
    fn kronecker_of_fouriers() {
        let k = fourier(3).unwrap().kronecker(&fourier(3).unwrap()).unwrap();
        assert_eq!(k.order(), 9);
        assert!(k.is_bh());
        assert!(fourier(2).unwrap().kronecker(&fourier(3).unwrap()).is_err());
    }

    #[test]
    fn gh_examples() {
        let c5: Vec<Vec<i64>> = vec![
            vec![0, 1, 4, 4, 1],
            vec![1, 0, 1, 4, 4],
            vec![4, 1, 0, 1, 4],
            vec![4, 4, 1, 0, 1],
            vec![1, 4, 4, 1, 0],
        ];
        assert_eq!(
            gh_check(&c5, 5).unwrap(),
            GhReport {
                is_gh: true,
                failing_divisor: None
            }
        );
        // fourier(6) reduced mod 2 has repeated rows, so d = 2 fails first.
        let f6: Vec<Vec<i64>> = PhMatrix::from_bh(&fourier(6).unwrap()).exponents().to_vec();
        let rep = gh_check(&f6, 6).unwrap();
        assert_eq!(rep.failing_divisor, Some(2));
        for d in [2u64, 3, 6] {
            let ok = BhMatrix::from_exponents_mod(d, &f6).unwrap().is_bh();
            assert_eq!(ok, d == 6);
        }
        let f7: Vec<Vec<i64>> = PhMatrix::from_bh(&fourier(7).unwrap()).exponents().to_vec();
        assert!(gh_check(&f7, 7).unwrap().is_gh);
    }

    #[test]
    fn blend_with_itself_is_identity_on_sum() {
        let h1 = fourier(3).unwrap();
        let lifted = PhMatrix::from_bh(&h1);
        let rep = blend_check(&h1, &lifted, 3).unwrap();
        assert!(rep.sum_is_bh);
        assert_eq!(rep.sum.as_ref(), Some(&h1));
        let shifted = lifted
            .shift(&Modulus::cyclotomic(3), &vec![vec![1; 3]; 3])
            .unwrap();
        let rep2 = blend_check(&h1, &shifted, 3).unwrap();
        assert_eq!(rep2.sum, rep.sum);
        assert!(blend_check(&h1, &PhMatrix::new(vec![vec![0]]).unwrap(), 3).is_err());
    }

    #[test]
    fn blend_regression_order_two() {
        // [[x, x^2], [1, 1]] is PH(2, x + 1); at zeta_2 it is [[-1, 1], [1, 1]].
        let h2 = PhMatrix::new(vec![vec![1, 2], vec![0, 0]]).unwrap();
        assert!(h2.verify(&Modulus::cyclotomic(2)).unwrap().ok);
        let rep = blend_check(&fourier(2).unwrap(), &h2, 2).unwrap();
        // product [[0, 2], [-2, 0]] / 2 and sum [[0, 2], [2, 0]] / 2 both contain zeros.
        assert!(!rep.product_is_bh);
        assert!(!rep.sum_is_bh);
    }

    fn brute_force(n: usize, m: u64) -> Vec<BhMatrix> {
        let free = (n - 1) * (n - 1);
        let total = (m as usize).pow(free as u32);
        let mut out = Vec::new();
        for code in 0..total {
            let mut c = code;
            let mut digits = vec![0u64; free];
            for d in digits.iter_mut().rev() {
                *d = (c % m as usize) as u64;
                c /= m as usize;
            }
            let mut e = vec![vec![0u64; n]; n];
            for i in 1..n {
                for j in 1..n {
                    e[i][j] = digits[(i - 1) * (n - 1) + (j - 1)];
                }
            }
            if (2..n).any(|i| e[i] <= e[i - 1]) {
                continue;
            }
            let b = BhMatrix::new(m, e).unwrap();
            if b.is_bh() {
                out.push(b);
            }
        }
        out
    }

    #[test]
    fn search_examples() {
        let two = bh_search(2, 2, SearchOptions::default()).unwrap();
        assert_eq!(two, vec![fourier(2).unwrap()]);
        assert!(bh_search(3, 2, SearchOptions::default())
            .unwrap()
            .is_empty());
        let three = bh_search(3, 3, SearchOptions::default()).unwrap();
        assert!(three.contains(&fourier(3).unwrap()));
        assert!(three.iter().all(BhMatrix::is_bh));
    }

    #[test]
    fn search_matches_brute_force() {
        for n in 1..=3 {
            for m in 2..=3 {
                let got = bh_search(n, m, SearchOptions::default()).unwrap();
                let seq = bh_search(
                    n,
                    m,
                    SearchOptions {
                        parallel: false,
                        ..Default::default()
                    },
                )
                .unwrap();
                assert_eq!(got, seq);
                if n >= 2 {
                    assert_eq!(got, brute_force(n, m), "n={n} m={m}");
                }
            }
        }
        let four = bh_search(4, 2, SearchOptions::default()).unwrap();
        assert_eq!(four, brute_force(4, 2));
        assert_eq!(
            bh_search(4, 4, SearchOptions::default()).unwrap(),
            brute_force(4, 4)
        );
    }

    #[test]
    fn search_limit_and_guard() {
        let all = bh_search(4, 4, SearchOptions::default()).unwrap();
        let one = bh_search(
            4,
            4,
            SearchOptions {
                limit: 1,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(one, all[..1]);
        assert_eq!(
            bh_search(9, 2, SearchOptions::default()),
            Err(BhError::SearchGuard { n: 9, m: 2 })
        );
        assert_eq!(
            bh_search(2, 7, SearchOptions::default()),
            Err(BhError::SearchGuard { n: 2, m: 7 })
        );
    }

    #[test]
    fn json_shape() {
        let j = serde_json::to_string(&fourier(2).unwrap()).unwrap();
        assert_eq!(j, r#"{"n":2,"m":2,"exponents":[[0,0],[0,1]]}"#);
        assert!(
            serde_json::from_str::<BhMatrix>(r#"{"n":3,"m":2,"exponents":[[0,0],[0,1]]}"#).is_err()
        );
    }
}
