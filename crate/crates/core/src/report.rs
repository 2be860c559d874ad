use serde::Serialize;

/// Outcome of an orthogonality check. A failed check is data, not an error.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport<R> {
    pub ok: bool,
    pub first_failure: Option<Failure<R>>,
}

/// The first Gram entry (in row-major order) that did not reduce to its
/// expected value, together with `entry - expected` after reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure<R> {
    pub i: usize,
    pub j: usize,
    pub residue: R,
}

impl<R> VerificationReport<R> {
    pub fn pass() -> Self {
        VerificationReport {
            ok: true,
            first_failure: None,
        }
    }

    pub fn fail(i: usize, j: usize, residue: R) -> Self {
        VerificationReport {
            ok: false,
            first_failure: Some(Failure { i, j, residue }),
        }
    }

    pub(crate) fn from_first_failure(f: Option<(usize, usize, R)>) -> Self {
        match f {
            None => Self::pass(),
            Some((i, j, r)) => Self::fail(i, j, r),
        }
    }
}
