//! Shared JSON forms and the fixed-precision writer.
//!
//! Complex numbers are `[re, im]`; constant matrices are
//! `{"rows","cols","data"}` with `data` row-major; polynomial matrices add
//! `basis` and `grade` and carry one row-major list per coefficient.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::dense::{CMatrix, C64};
use crate::polymat::{Basis, PolyMatrix};
use crate::{Error, Result};

pub type Complex = [f64; 2];

pub fn complex(z: C64) -> Complex {
    [z.re, z.im]
}

pub fn from_complex(z: Complex) -> C64 {
    C64::new(z[0], z[1])
}

fn row_major(m: &CMatrix) -> Vec<Complex> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(complex(m[(i, j)]));
        }
    }
    out
}

fn from_row_major(rows: usize, cols: usize, data: &[Complex]) -> Result<CMatrix> {
    if data.len() != rows * cols {
        return Err(Error::Malformed(format!(
            "expected {} entries for a {rows}x{cols} matrix, found {}",
            rows * cols,
            data.len()
        )));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| from_complex(data[i * cols + j])))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenseJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex>,
}

impl From<&CMatrix> for DenseJson {
    fn from(m: &CMatrix) -> Self {
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            data: row_major(m),
        }
    }
}

impl TryFrom<&DenseJson> for CMatrix {
    type Error = Error;
    fn try_from(j: &DenseJson) -> Result<Self> {
        from_row_major(j.rows, j.cols, &j.data)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyMatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub basis: Basis,
    pub grade: usize,
    pub coeffs: Vec<Vec<Complex>>,
}

impl From<PolyMatrix> for PolyMatrixJson {
    fn from(p: PolyMatrix) -> Self {
        Self {
            rows: p.rows(),
            cols: p.cols(),
            basis: p.basis(),
            grade: p.grade(),
            coeffs: p.coeffs().iter().map(row_major).collect(),
        }
    }
}

impl TryFrom<PolyMatrixJson> for PolyMatrix {
    type Error = Error;
    fn try_from(j: PolyMatrixJson) -> Result<Self> {
        if j.coeffs.len() != j.grade + 1 {
            return Err(Error::Malformed(format!(
                "grade {} needs {} coefficients, found {}",
                j.grade,
                j.grade + 1,
                j.coeffs.len()
            )));
        }
        let coeffs = j
            .coeffs
            .iter()
            .map(|c| from_row_major(j.rows, j.cols, c))
            .collect::<Result<Vec<_>>>()?;
        PolyMatrix::new(j.basis, coeffs)
    }
}

/// Writes every float with 17 significant digits.
#[derive(Clone, Copy, Debug, Default)]
pub struct SigFormatter;

impl Formatter for SigFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        if v.is_finite() {
            write!(w, "{v:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(v))
    }
}

/// Serializes with [`SigFormatter`]; otherwise compact.
pub fn to_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFormatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// Serde adapter for optional complex vectors as lists of `[re, im]`.
pub mod opt_vector {
    use nalgebra::DVector;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{complex, from_complex, Complex};
    use crate::dense::C64;

    pub fn serialize<S: Serializer>(v: &Option<DVector<C64>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref()
            .map(|v| v.iter().map(|&z| complex(z)).collect::<Vec<_>>())
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<DVector<C64>>, D::Error> {
        let v: Option<Vec<Complex>> = Option::deserialize(d)?;
        Ok(v.map(|v| DVector::from_iterator(v.len(), v.into_iter().map(from_complex))))
    }
}
