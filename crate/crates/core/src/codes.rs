//! Codes read off the rows of Butson- and power-Hadamard matrices.
//!
//! Distances are exact. Pairwise scans run in parallel; the reported witness
//! is always the lexicographically smallest pair attaining the minimum.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bh::BhMatrix;
use crate::gray::{g1, g2, gamma_average, prime_power, GrayError, WeightTable};
use crate::laurent::{rat, rational_json, Rational};
use crate::ph::PhMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("need at least 2 codewords, got {0}")]
    TooFewCodewords(usize),
    #[error("codeword {index} has length {found}, expected {expected}")]
    LengthMismatch {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("codewords {0} and {1} are equal")]
    DuplicateCodeword(usize, usize),
    #[error("entry {value} of codeword {index} is outside Z_{m}")]
    EntryOutOfRange { index: usize, value: u64, m: u64 },
    #[error("alphabet modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("first column must be zero to delete it")]
    NotNormalized,
    #[error("weight table is over Z_{table}, code is over Z_{code}")]
    ModulusMismatch { table: u64, code: u64 },
    #[error("root order {0} is not a prime power")]
    NotPrimePower(u64),
    #[error(transparent)]
    Gray(#[from] GrayError),
    #[error("root order must exceed 2, got {0}")]
    RootOrderTooSmall(u64),
    #[error("merged matrix disagrees with its inputs at ({i}, {j})")]
    NotMerged { i: usize, j: usize },
    #[error("matrix orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("cyclotomic orders must be >= 1")]
    BadOrder,
}

/// A set of distinct words of one length over `Z_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Code {
    m: u64,
    length: usize,
    codewords: Vec<Vec<u64>>,
}

impl Code {
    pub fn new(m: u64, length: usize, codewords: Vec<Vec<u64>>) -> Result<Self, CodeError> {
        if m < 2 {
            return Err(CodeError::BadModulus(m));
        }
        for (index, w) in codewords.iter().enumerate() {
            if w.len() != length {
                return Err(CodeError::LengthMismatch {
                    index,
                    found: w.len(),
                    expected: length,
                });
            }
            if let Some(&value) = w.iter().find(|&&v| v >= m) {
                return Err(CodeError::EntryOutOfRange { index, value, m });
            }
        }
        let mut order: Vec<usize> = (0..codewords.len()).collect();
        order.sort_by(|&a, &b| codewords[a].cmp(&codewords[b]).then(a.cmp(&b)));
        if let Some(w) = order
            .windows(2)
            .find(|w| codewords[w[0]] == codewords[w[1]])
        {
            return Err(CodeError::DuplicateCodeword(w[0].min(w[1]), w[0].max(w[1])));
        }
        Ok(Code {
            m,
            length,
            codewords,
        })
    }

    /// Rows as codewords, optionally without the first coordinate.
    pub fn from_rows(m: u64, rows: &[Vec<u64>], drop_first: bool) -> Result<Self, CodeError> {
        let n = rows.first().map_or(0, Vec::len);
        if drop_first {
            if rows.iter().any(|r| r.first().is_some_and(|&v| v != 0)) {
                return Err(CodeError::NotNormalized);
            }
            let words = rows.iter().map(|r| r[1.min(r.len())..].to_vec()).collect();
            Code::new(m, n.saturating_sub(1), words)
        } else {
            Code::new(m, n, rows.to_vec())
        }
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn size(&self) -> usize {
        self.codewords.len()
    }

    pub fn codewords(&self) -> &[Vec<u64>] {
        &self.codewords
    }
}

pub fn code_from_matrix(m: &BhMatrix, drop_first: bool) -> Result<Code, CodeError> {
    Code::from_rows(m.m(), m.exponents(), drop_first)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceReport {
    #[serde(with = "rational_json")]
    pub min_distance: Rational,
    pub argmin_pair: (usize, usize),
    pub equidistant: bool,
    /// Distance (as text) to the number of unordered pairs at that distance.
    pub distance_counts: BTreeMap<String, usize>,
}

fn scan<F>(count: usize, dist: F) -> Result<DistanceReport, CodeError>
where
    F: Fn(usize, usize) -> Rational + Sync,
{
    if count < 2 {
        return Err(CodeError::TooFewCodewords(count));
    }
    let pairs: Vec<(usize, usize)> = (0..count)
        .flat_map(|i| (i + 1..count).map(move |j| (i, j)))
        .collect();
    let dists: Vec<Rational> = pairs.par_iter().map(|&(i, j)| dist(i, j)).collect();
    let mut best = 0;
    let mut tally: BTreeMap<Rational, usize> = BTreeMap::new();
    for (idx, d) in dists.iter().enumerate() {
        if *d < dists[best] {
            best = idx;
        }
        *tally.entry(d.clone()).or_default() += 1;
    }
    Ok(DistanceReport {
        min_distance: dists[best].clone(),
        argmin_pair: pairs[best],
        equidistant: tally.len() == 1,
        distance_counts: tally
            .into_iter()
            .map(|(d, c)| (rational_json::to_string(&d), c))
            .collect(),
    })
}

pub fn hamming_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

pub fn min_distance_hamming<T: PartialEq + Sync>(
    rows: &[Vec<T>],
) -> Result<DistanceReport, CodeError> {
    scan(rows.len(), |i, j| {
        rat(hamming_distance(&rows[i], &rows[j]) as i64)
    })
}

fn check_table(code: &Code, w: &WeightTable) -> Result<(), CodeError> {
    if w.m() != code.m {
        return Err(CodeError::ModulusMismatch {
            table: w.m(),
            code: code.m,
        });
    }
    Ok(())
}

/// `d_w(u, v) = sum_i w((u_i - v_i) mod m)`.
pub fn weighted_distance(w: &WeightTable, u: &[u64], v: &[u64]) -> Rational {
    u.iter()
        .zip(v)
        .map(|(&a, &b)| w.weight(a as i64 - b as i64).clone())
        .sum()
}

pub fn codeword_weight(w: &WeightTable, u: &[u64]) -> Rational {
    u.iter().map(|&a| w.weight(a as i64).clone()).sum()
}

pub fn min_distance_weighted(code: &Code, w: &WeightTable) -> Result<DistanceReport, CodeError> {
    check_table(code, w)?;
    let c = &code.codewords;
    scan(c.len(), |i, j| weighted_distance(w, &c[i], &c[j]))
}

/// Equal pairwise distances and equal weights for all nonzero codewords.
pub fn equidistant_check(code: &Code, w: &WeightTable) -> Result<bool, CodeError> {
    let report = min_distance_weighted(code, w)?;
    let mut weights = code
        .codewords
        .iter()
        .filter(|c| c.iter().any(|&v| v != 0))
        .map(|c| codeword_weight(w, c));
    let constant_weight = match weights.next() {
        None => true,
        Some(first) => weights.all(|x| x == first),
    };
    Ok(report.equidistant && constant_weight)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrayMap {
    G1,
    G2,
}

impl std::str::FromStr for GrayMap {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "g1" => Ok(GrayMap::G1),
            "g2" => Ok(GrayMap::G2),
            _ => Err(format!("unknown Gray map {s:?}; expected g1 or g2")),
        }
    }
}

/// Replaces each exponent by its Gray image: an `n x n p^(k-1)` matrix over `Z_p`.
pub fn gray_expand(m: &BhMatrix, map: GrayMap) -> Result<Vec<Vec<u64>>, CodeError> {
    let (p, k) = prime_power(m.m()).ok_or(CodeError::NotPrimePower(m.m()))?;
    let image = |u: u64| match map {
        GrayMap::G1 => g1(u, p, k),
        GrayMap::G2 => g2(u, p, k),
    };
    let table = (0..m.m())
        .map(|u| image(u).map(|g| g.digits))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(m.exponents()
        .iter()
        .map(|row| {
            row.iter()
                .flat_map(|&e| table[e as usize].iter().copied())
                .collect()
        })
        .collect())
}

/// The Plotkin bound `M <= d / (d - gamma n)` for a code of length `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum PlotkinReport {
    /// `d <= gamma n`: the bound says nothing.
    Vacuous,
    Bounded {
        #[serde(with = "rational_json")]
        bound: Rational,
        meets: bool,
        optimal: bool,
    },
}

pub fn plotkin_check(size: u64, d: &Rational, gamma: &Rational, length: u64) -> PlotkinReport {
    let slack = d - gamma * rat(length as i64);
    if slack <= Rational::zero() {
        return PlotkinReport::Vacuous;
    }
    let bound = d / slack;
    let m = rat(size as i64);
    PlotkinReport::Bounded {
        meets: m == bound.floor() && m <= bound,
        optimal: m > &bound - Rational::one(),
        bound,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowDistanceBound {
    pub l: u64,
    #[serde(with = "rational_json")]
    pub bound: Rational,
    pub d: u64,
    pub argmin_pair: (usize, usize),
    pub satisfied: bool,
}

/// `d >= n - n / l` for the full exponent rows, `l` the least prime factor of `m`.
pub fn bh_row_distance_bound(m: &BhMatrix) -> Result<RowDistanceBound, CodeError> {
    if m.m() <= 2 {
        return Err(CodeError::RootOrderTooSmall(m.m()));
    }
    let l = (2..=m.m())
        .find(|d| m.m().is_multiple_of(*d))
        .expect("m >= 2");
    let n = m.order() as i64;
    let bound = rat(n) - Rational::new(n.into(), (l as i64).into());
    let rep = min_distance_hamming(m.exponents())?;
    let d = rep
        .min_distance
        .to_integer()
        .try_into()
        .expect("small distance");
    Ok(RowDistanceBound {
        l,
        satisfied: rep.min_distance >= bound,
        bound,
        d,
        argmin_pair: rep.argmin_pair,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MergedDistance {
    pub d1: u64,
    pub d2: u64,
    pub d: u64,
    pub satisfied: bool,
}

fn reduced_tail(m: &PhMatrix, modulus: u64) -> Vec<Vec<u64>> {
    m.exponents()
        .iter()
        .map(|r| {
            r[1..]
                .iter()
                .map(|e| e.rem_euclid(modulus as i64) as u64)
                .collect()
        })
        .collect()
}

fn min_hamming_u64(rows: &[Vec<u64>]) -> Result<u64, CodeError> {
    let rep = min_distance_hamming(rows)?;
    Ok(rep
        .min_distance
        .to_integer()
        .try_into()
        .expect("small distance"))
}

/// Compares the row distance of a merged matrix over `phi_h phi_k` with those of
/// its inputs over `phi_h` and `phi_k`. Exponents are read in `Z_h`, `Z_k` and
/// `Z_lcm(h,k)`; all three matrices must be normalized and the zero first
/// column is deleted.
pub fn merged_distance_check(
    a: &PhMatrix,
    b: &PhMatrix,
    c: &PhMatrix,
    h: u64,
    k: u64,
) -> Result<MergedDistance, CodeError> {
    if h == 0 || k == 0 {
        return Err(CodeError::BadOrder);
    }
    let n = a.order();
    for other in [b, c] {
        if other.order() != n {
            return Err(CodeError::OrderMismatch(n, other.order()));
        }
    }
    if ![a, b, c].iter().all(|x| x.is_normalized()) {
        return Err(CodeError::NotNormalized);
    }
    let (hi, ki) = (h as i64, k as i64);
    for i in 0..n {
        for j in 0..n {
            let cij = c.get(i, j);
            if (cij - a.get(i, j)).rem_euclid(hi) != 0 || (cij - b.get(i, j)).rem_euclid(ki) != 0 {
                return Err(CodeError::NotMerged { i, j });
            }
        }
    }
    let d1 = min_hamming_u64(&reduced_tail(a, h))?;
    let d2 = min_hamming_u64(&reduced_tail(b, k))?;
    let d = min_hamming_u64(&reduced_tail(c, h.lcm(&k)))?;
    Ok(MergedDistance {
        d1,
        d2,
        d,
        satisfied: d >= d1.max(d2),
    })
}

/// Which views [`analyze`] adds to the raw row distance.
#[derive(Clone, Debug, Default)]
pub struct AnalyzeOptions {
    pub gray: Option<GrayMap>,
    /// Weight for the code view; defaults to the Gray map's weight, else Hamming.
    pub weight: Option<WeightTable>,
    pub plotkin: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrayAnalysis {
    pub map: GrayMap,
    pub distance: DistanceReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeAnalysis {
    pub length: usize,
    pub size: usize,
    pub distance: DistanceReport,
    pub equidistant: bool,
    #[serde(with = "rational_json")]
    pub gamma: Rational,
    pub plotkin: Option<PlotkinReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub n: usize,
    pub m: u64,
    /// Minimum Hamming distance of the full exponent rows.
    pub d: u64,
    pub row_bound: Option<RowDistanceBound>,
    pub gray: Option<GrayAnalysis>,
    pub code: Option<CodeAnalysis>,
}

/// Row distance, the least-prime-factor bound when `m > 2`, and on request the
/// Gray image and the code of the normalized matrix with its first column deleted.
pub fn analyze(m: &BhMatrix, opts: &AnalyzeOptions) -> Result<Analysis, CodeError> {
    let d = min_hamming_u64(m.exponents())?;
    let row_bound = if m.m() > 2 {
        Some(bh_row_distance_bound(m)?)
    } else {
        None
    };
    let norm = m.normalize();
    let gray = match opts.gray {
        Some(map) => Some(GrayAnalysis {
            map,
            distance: min_distance_hamming(&gray_expand(&norm, map)?)?,
        }),
        None => None,
    };
    let code = if opts.weight.is_some() || opts.plotkin {
        let w = match (&opts.weight, opts.gray) {
            (Some(w), _) => w.clone(),
            (None, Some(map)) => {
                let (p, k) = prime_power(m.m()).ok_or(CodeError::NotPrimePower(m.m()))?;
                match map {
                    GrayMap::G1 => WeightTable::w1(p, k)?,
                    GrayMap::G2 => WeightTable::w2(p, k)?,
                }
            }
            (None, None) => WeightTable::hamming(m.m())?,
        };
        let code = code_from_matrix(&norm, true)?;
        let distance = min_distance_weighted(&code, &w)?;
        let gamma = gamma_average(&w);
        let plotkin = opts.plotkin.then(|| {
            plotkin_check(
                code.size() as u64,
                &distance.min_distance,
                &gamma,
                code.length() as u64,
            )
        });
        Some(CodeAnalysis {
            length: code.length(),
            size: code.size(),
            equidistant: equidistant_check(&code, &w)?,
            distance,
            gamma,
            plotkin,
        })
    } else {
        None
    };
    Ok(Analysis {
        n: m.order(),
        m: m.m(),
        d,
        row_bound,
        gray,
        code,
    })
}
