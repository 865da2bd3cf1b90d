//! `{"rows": n, "cols": m, "data": [[re, im], ...]}`, row-major.
//!
//! Reals are written as shortest round-trip decimals, so serializing the
//! same matrix always produces the same bytes. Negative zero is written as
//! `0.0`.

use serde::{Deserialize, Serialize};

use super::dense::{ComplexMatrix, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixFile {
    fn from(m: &ComplexMatrix) -> Self {
        MatrixFile {
            rows: m.rows(),
            cols: m.cols(),
            // adding +0.0 maps -0.0 to 0.0 and leaves every other value alone
            data: m.data().iter().map(|z| [z.re + 0.0, z.im + 0.0]).collect(),
        }
    }
}

impl TryFrom<MatrixFile> for ComplexMatrix {
    type Error = Error;

    fn try_from(file: MatrixFile) -> Result<Self> {
        let data = file.data.into_iter().map(|[re, im]| C64::new(re, im)).collect();
        ComplexMatrix::new(file.rows, file.cols, data)
    }
}

pub fn from_json(text: &str) -> Result<ComplexMatrix> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("matrix file: {e}")))?;
    file.try_into()
}

pub fn to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixFile::from(m)).expect("matrix file serializes")
}
