//! JSON wire conventions for complex data.
//!
//! Complex numbers serialize as two-element arrays `[re, im]`, vectors as
//! arrays of those, and matrices as arrays of row arrays. The `serde(with)`
//! submodules below apply the convention to struct fields; the free functions
//! parse the same shapes out of `serde_json::Value` for CLI inputs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serializer};
use serde_json::Value;

use crate::error::{KnError, Result};

pub fn complex_to_value(z: Complex64) -> Value {
    Value::Array(vec![z.re.into(), z.im.into()])
}

pub fn vector_to_value(v: &DVector<Complex64>) -> Value {
    Value::Array(v.iter().map(|z| complex_to_value(*z)).collect())
}

pub fn matrix_to_value(m: &DMatrix<Complex64>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex_to_value(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn complex_from_value(v: &Value) -> Result<Complex64> {
    match v {
        Value::Array(parts) if parts.len() == 2 => {
            let re = parts[0]
                .as_f64()
                .ok_or_else(|| KnError::InvalidInput("complex entry must be [re, im] with numeric parts".into()))?;
            let im = parts[1]
                .as_f64()
                .ok_or_else(|| KnError::InvalidInput("complex entry must be [re, im] with numeric parts".into()))?;
            Ok(Complex64::new(re, im))
        }
        Value::Number(n) => Ok(Complex64::new(
            n.as_f64().ok_or_else(|| KnError::InvalidInput("non-finite number".into()))?,
            0.0,
        )),
        _ => Err(KnError::InvalidInput("complex entry must be [re, im] or a real number".into())),
    }
}

pub fn vector_from_value(v: &Value) -> Result<DVector<Complex64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| KnError::InvalidInput("expected a JSON array of complex entries".into()))?;
    let entries = arr.iter().map(complex_from_value).collect::<Result<Vec<_>>>()?;
    Ok(DVector::from_vec(entries))
}

pub fn matrix_from_value(v: &Value) -> Result<DMatrix<Complex64>> {
    let rows = v
        .as_array()
        .ok_or_else(|| KnError::InvalidInput("expected a JSON array of row arrays".into()))?;
    if rows.is_empty() {
        return Err(KnError::InvalidInput("matrix must have at least one row".into()));
    }
    let parsed: Vec<DVector<Complex64>> = rows.iter().map(vector_from_value).collect::<Result<_>>()?;
    let ncols = parsed[0].len();
    if parsed.iter().any(|r| r.len() != ncols) {
        return Err(KnError::InvalidInput("matrix rows have unequal lengths".into()));
    }
    Ok(DMatrix::from_fn(parsed.len(), ncols, |i, j| parsed[i][j]))
}

/// Accepts either a flat vector or a square matrix (flattened row-major).
pub fn vector_or_flattened_matrix(v: &Value) -> Result<DVector<Complex64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| KnError::InvalidInput("expected a JSON array".into()))?;
    let nested = arr
        .first()
        .and_then(|x| x.as_array())
        .map(|inner| inner.first().map(|e| e.is_array()).unwrap_or(false))
        .unwrap_or(false);
    if nested {
        let m = matrix_from_value(v)?;
        let (r, c) = (m.nrows(), m.ncols());
        Ok(DVector::from_fn(r * c, |k, _| m[(k / c, k % c)]))
    } else {
        vector_from_value(v)
    }
}

/// `#[serde(with = "cjson::cpx")]` for a single complex field.
pub mod cpx {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq([z.re, z.im])
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Complex64, D::Error> {
        let raw = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(raw[0], raw[1]))
    }
}

/// `#[serde(with = "cjson::cvec")]` for `Vec<Complex64>` fields.
pub mod cvec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|z| [z.re, z.im]))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Complex64>, D::Error> {
        let raw = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(raw.into_iter().map(|p| Complex64::new(p[0], p[1])).collect())
    }
}

/// `#[serde(with = "cjson::cvec_list")]` for `Vec<Vec<Complex64>>` fields.
pub mod cvec_list {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<Complex64>], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<Complex64>>, D::Error> {
        let raw = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|row| row.into_iter().map(|p| Complex64::new(p[0], p[1])).collect())
            .collect())
    }
}

/// `#[serde(with = "cjson::copt_vec")]` for `Option<Vec<Complex64>>` fields.
pub mod copt_vec {
    use super::*;

    pub fn serialize<S: Serializer>(
        v: &Option<Vec<Complex64>>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(inner) => s.collect_seq(inner.iter().map(|z| [z.re, z.im])),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Vec<Complex64>>, D::Error> {
        let raw = Option::<Vec<[f64; 2]>>::deserialize(d)?;
        Ok(raw.map(|v| v.into_iter().map(|p| Complex64::new(p[0], p[1])).collect()))
    }
}

/// `#[serde(with = "cjson::cmat")]` for `DMatrix<Complex64>` fields.
pub mod cmat {
    use super::*;

    pub fn serialize<S: Serializer>(
        m: &DMatrix<Complex64>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(
            (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect::<Vec<_>>()),
        )
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<DMatrix<Complex64>, D::Error> {
        let raw = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        if raw.is_empty() {
            return Err(D::Error::custom("matrix must have at least one row"));
        }
        let ncols = raw[0].len();
        if raw.iter().any(|r| r.len() != ncols) {
            return Err(D::Error::custom("matrix rows have unequal lengths"));
        }
        Ok(DMatrix::from_fn(raw.len(), ncols, |i, j| {
            Complex64::new(raw[i][j][0], raw[i][j][1])
        }))
    }
}
