//! The bundled matrix corpus and the JSON document format shared with the CLI.
//!
//! A matrix document is tagged by `kind`:
//!
//! ```json
//! {"kind":"ph","n":3,"modulus":{"cyclotomic_product":[3]},"exponents":[[0,2,2],[2,0,2],[2,2,0]]}
//! {"kind":"bh","n":2,"m":2,"exponents":[[0,0],[0,1]]}
//! {"kind":"gh","n":5,"k":5,"exponents":[[0,1,4,4,1],...]}
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bh::{gh_check, BhError, BhMatrix, BhReport, GhReport};
use crate::ph::{Modulus, PhError, PhMatrix, PhReport};

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("unknown fixture {0:?}")]
    Unknown(String),
    #[error("fixture {id} is malformed: {source}")]
    Malformed {
        id: String,
        source: serde_json::Error,
    },
    #[error("fixture {0} does not pass its verifier")]
    Unverified(String),
    #[error(transparent)]
    Ph(#[from] PhError),
    #[error(transparent)]
    Bh(#[from] BhError),
    #[error("index ({i}, {j}) out of range for order {n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PhDocJson", into = "PhDocJson")]
pub struct PhDoc {
    pub modulus: Modulus,
    pub matrix: PhMatrix,
}

#[derive(Serialize, Deserialize)]
struct PhDocJson {
    n: usize,
    modulus: Modulus,
    exponents: PhMatrix,
}

impl TryFrom<PhDocJson> for PhDoc {
    type Error = String;
    fn try_from(j: PhDocJson) -> Result<Self, String> {
        if j.exponents.order() != j.n {
            return Err(format!(
                "n = {} but the matrix has order {}",
                j.n,
                j.exponents.order()
            ));
        }
        j.modulus.validate().map_err(|e| e.to_string())?;
        Ok(PhDoc {
            modulus: j.modulus,
            matrix: j.exponents,
        })
    }
}

impl From<PhDoc> for PhDocJson {
    fn from(d: PhDoc) -> Self {
        PhDocJson {
            n: d.matrix.order(),
            modulus: d.modulus,
            exponents: d.matrix,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GhDocJson", into = "GhDocJson")]
pub struct GhDoc {
    pub k: u64,
    pub exponents: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct GhDocJson {
    n: usize,
    k: u64,
    exponents: Vec<Vec<i64>>,
}

impl TryFrom<GhDocJson> for GhDoc {
    type Error = String;
    fn try_from(j: GhDocJson) -> Result<Self, String> {
        if j.k < 2 {
            return Err(format!("group order must be >= 2, got {}", j.k));
        }
        if j.exponents.len() != j.n || j.exponents.iter().any(|r| r.len() != j.n) {
            return Err("exponent matrix must be n x n".into());
        }
        Ok(GhDoc {
            k: j.k,
            exponents: j.exponents,
        })
    }
}

impl From<GhDoc> for GhDocJson {
    fn from(d: GhDoc) -> Self {
        GhDocJson {
            n: d.exponents.len(),
            k: d.k,
            exponents: d.exponents,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MatrixDoc {
    Ph(PhDoc),
    Bh(BhMatrix),
    Gh(GhDoc),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Verification {
    Ph(PhReport),
    Bh(BhReport),
    Gh(GhReport),
}

impl Verification {
    pub fn ok(&self) -> bool {
        match self {
            Verification::Ph(r) => r.ok,
            Verification::Bh(r) => r.ok,
            Verification::Gh(r) => r.is_gh,
        }
    }
}

impl MatrixDoc {
    pub fn kind(&self) -> &'static str {
        match self {
            MatrixDoc::Ph(_) => "ph",
            MatrixDoc::Bh(_) => "bh",
            MatrixDoc::Gh(_) => "gh",
        }
    }

    pub fn order(&self) -> usize {
        match self {
            MatrixDoc::Ph(d) => d.matrix.order(),
            MatrixDoc::Bh(m) => m.order(),
            MatrixDoc::Gh(d) => d.exponents.len(),
        }
    }

    pub fn verify(&self) -> Result<Verification, FixtureError> {
        Ok(match self {
            MatrixDoc::Ph(d) => Verification::Ph(d.matrix.verify(&d.modulus)?),
            MatrixDoc::Bh(m) => Verification::Bh(m.verify()),
            MatrixDoc::Gh(d) => Verification::Gh(gh_check(&d.exponents, d.k)?),
        })
    }

    /// Adds `delta` to exponent `(i, j)`, reducing mod the root or group order where one applies.
    pub fn tamper(&self, i: usize, j: usize, delta: i64) -> Result<MatrixDoc, FixtureError> {
        let n = self.order();
        if i >= n || j >= n {
            return Err(FixtureError::IndexOutOfRange { i, j, n });
        }
        Ok(match self {
            MatrixDoc::Ph(d) => {
                let mut e = d.matrix.exponents().to_vec();
                e[i][j] += delta;
                MatrixDoc::Ph(PhDoc {
                    modulus: d.modulus.clone(),
                    matrix: PhMatrix::new(e)?,
                })
            }
            MatrixDoc::Bh(m) => {
                let mut e: Vec<Vec<i64>> = PhMatrix::from_bh(m).exponents().to_vec();
                e[i][j] += delta;
                MatrixDoc::Bh(BhMatrix::from_exponents_mod(m.m(), &e)?)
            }
            MatrixDoc::Gh(d) => {
                let mut e = d.exponents.clone();
                e[i][j] = (e[i][j] + delta).rem_euclid(d.k as i64);
                MatrixDoc::Gh(GhDoc {
                    k: d.k,
                    exponents: e,
                })
            }
        })
    }

    pub fn as_ph(&self) -> Option<&PhDoc> {
        match self {
            MatrixDoc::Ph(d) => Some(d),
            _ => None,
        }
    }

    pub fn as_bh(&self) -> Option<&BhMatrix> {
        match self {
            MatrixDoc::Bh(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureEntry {
    pub id: String,
    pub kind: String,
    pub provenance: String,
    pub payload: MatrixDoc,
}

#[derive(Deserialize)]
struct FixtureFile {
    id: String,
    provenance: String,
    payload: MatrixDoc,
}

macro_rules! bundled {
    ($($id:literal),* $(,)?) => {
        &[$(($id, include_str!(concat!("../fixtures/", $id, ".json")))),*]
    };
}

const BUNDLED: &[(&str, &str)] = bundled!(
    "bh_12_36",
    "bh_8_4",
    "bh_9_10",
    "bh_9_9",
    "gh_5_c5",
    "ph_2_product_1",
    "ph_2_product_2",
    "ph_2_product_3",
    "ph_3_merge_a",
    "ph_3_merge_b",
    "ph_3_merge_c",
    "ph_3_phi3",
    "ph_3_phi3_x2",
    "ph_6_f43",
    "ph_6_f43_shifted",
    "ph_6_x2_x_1",
);

pub fn ids() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(id, _)| *id)
}

fn parse(id: &str, text: &str) -> Result<FixtureEntry, FixtureError> {
    let f: FixtureFile = serde_json::from_str(text).map_err(|source| FixtureError::Malformed {
        id: id.to_string(),
        source,
    })?;
    debug_assert_eq!(f.id, id);
    Ok(FixtureEntry {
        kind: f.payload.kind().to_string(),
        id: f.id,
        provenance: f.provenance,
        payload: f.payload,
    })
}

/// Loads one fixture without verifying it.
pub fn get(id: &str) -> Result<FixtureEntry, FixtureError> {
    let (_, text) = BUNDLED
        .iter()
        .find(|(k, _)| *k == id)
        .ok_or_else(|| FixtureError::Unknown(id.to_string()))?;
    parse(id, text)
}

/// Loads every fixture, sorted by id, rejecting any that fails its verifier.
pub fn load_all() -> Result<Vec<FixtureEntry>, FixtureError> {
    BUNDLED
        .iter()
        .map(|(id, text)| {
            let e = parse(id, text)?;
            if !e.payload.verify()?.ok() {
                return Err(FixtureError::Unverified(e.id));
            }
            Ok(e)
        })
        .collect()
}

pub fn ph(id: &str) -> Result<PhDoc, FixtureError> {
    match get(id)?.payload {
        MatrixDoc::Ph(d) => Ok(d),
        _ => Err(FixtureError::Unknown(format!("{id} (not a ph fixture)"))),
    }
}

pub fn bh(id: &str) -> Result<BhMatrix, FixtureError> {
    match get(id)?.payload {
        MatrixDoc::Bh(m) => Ok(m),
        _ => Err(FixtureError::Unknown(format!("{id} (not a bh fixture)"))),
    }
}
