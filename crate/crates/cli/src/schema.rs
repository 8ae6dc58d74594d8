//! Matrix JSON: `{"shape": [m, n], "data": [[[re, im], ...], ...]}`, row-major.

use jblab::{Complex64, MatrixElement};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub shape: [usize; 2],
    pub data: Vec<Vec<[f64; 2]>>,
}

impl MatrixJson {
    pub fn from_element(a: &MatrixElement) -> Self {
        let m = a.entries();
        let (rows, cols) = m.shape();
        MatrixJson {
            shape: [rows, cols],
            data: (0..rows)
                .map(|i| (0..cols).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        }
    }

    pub fn to_element(&self) -> Result<MatrixElement, String> {
        let [rows, cols] = self.shape;
        if self.data.len() != rows {
            return Err(format!("shape says {rows} rows, data has {}", self.data.len()));
        }
        if let Some((i, row)) = self.data.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(format!("row {i} has {} entries, shape says {cols}", row.len()));
        }
        let values: Vec<Complex64> = self
            .data
            .iter()
            .flatten()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        MatrixElement::from_row_major(rows, cols, &values).map_err(|e| e.to_string())
    }
}

