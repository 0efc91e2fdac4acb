//! JSON encodings for the file formats the CLI reads and writes.
//!
//! Rationals travel as `"p/q"` strings, floats as numbers; each document
//! carries a `scalar_mode` tag. Parsing goes through [`Scalar::from_json`],
//! which accepts integers in rational mode and `"p/q"` strings in float
//! mode, so documents written in one mode can be loaded in the other when
//! the values allow it.

use serde_json::{json, Map, Value};

use crate::ds::MatrixSequence;
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::op::LaurentOperator;
use crate::polygon::TwistedPolygon;
use crate::scalar::Scalar;
use crate::seq::PeriodicSequence;
use crate::w2::CrossRatioChart;

fn as_object<'v>(v: &'v Value, what: &str) -> Result<&'v Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Parse(format!("{what}: expected a JSON object")))
}

fn get<'v>(obj: &'v Map<String, Value>, key: &str) -> Result<&'v Value> {
    obj.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::Parse(format!("{what}: expected a nonnegative integer")))
}

fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| Error::Parse(format!("{what}: expected an integer")))
}

fn scalar_row<S: Scalar>(v: &Value, len: usize, what: &str) -> Result<Vec<S>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{what}: expected an array")))?;
    if arr.len() != len {
        return Err(Error::Parse(format!(
            "{what}: expected {len} entries, got {}",
            arr.len()
        )));
    }
    arr.iter().map(S::from_json).collect()
}

pub fn operator_to_json<S: Scalar>(d: &LaurentOperator<S>) -> Value {
    let coeffs: Vec<Value> = (d.lo()..=d.hi())
        .map(|i| {
            Value::Array(
                d.coeff(i)
                    .values()
                    .iter()
                    .map(|v| v.to_json())
                    .collect(),
            )
        })
        .collect();
    json!({
        "N": d.period(),
        "lo": d.lo(),
        "hi": d.hi(),
        "coeffs": coeffs,
        "scalar_mode": S::mode_name(),
    })
}

pub fn operator_from_json<S: Scalar>(v: &Value) -> Result<LaurentOperator<S>> {
    let obj = as_object(v, "operator")?;
    let n = as_usize(get(obj, "N")?, "N")?;
    if n == 0 {
        return Err(Error::Parse("N must be positive".into()));
    }
    let lo = as_i64(get(obj, "lo")?, "lo")?;
    let hi = as_i64(get(obj, "hi")?, "hi")?;
    if lo > hi {
        return Err(Error::Parse("lo must not exceed hi".into()));
    }
    let rows = get(obj, "coeffs")?
        .as_array()
        .ok_or_else(|| Error::Parse("coeffs: expected an array".into()))?;
    if rows.len() != (hi - lo + 1) as usize {
        return Err(Error::Parse(format!(
            "coeffs: expected {} rows for powers {lo}..{hi}, got {}",
            hi - lo + 1,
            rows.len()
        )));
    }
    let coeffs = rows
        .iter()
        .map(|row| Ok(PeriodicSequence::new(scalar_row::<S>(row, n, "coeffs")?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(LaurentOperator::from_window(n, lo, coeffs))
}

pub fn polygon_to_json<S: Scalar>(p: &TwistedPolygon<S>) -> Value {
    let lifts: Vec<Value> = p
        .stored_lifts()
        .iter()
        .map(|v| Value::Array(v.iter().map(|x| x.to_json()).collect()))
        .collect();
    let monodromy: Vec<Value> = (0..p.dim())
        .map(|i| {
            Value::Array(
                (0..p.dim())
                    .map(|j| p.monodromy().get(i, j).to_json())
                    .collect(),
            )
        })
        .collect();
    json!({
        "m": p.dim(),
        "N": p.period(),
        "lifts": lifts,
        "monodromy": monodromy,
        "scalar_mode": S::mode_name(),
    })
}

pub fn polygon_from_json<S: Scalar>(v: &Value) -> Result<TwistedPolygon<S>> {
    let obj = as_object(v, "polygon")?;
    let m = as_usize(get(obj, "m")?, "m")?;
    let n = as_usize(get(obj, "N")?, "N")?;
    if m == 0 || n == 0 {
        return Err(Error::Parse("m and N must be positive".into()));
    }
    let lifts_val = get(obj, "lifts")?
        .as_array()
        .ok_or_else(|| Error::Parse("lifts: expected an array".into()))?;
    if lifts_val.len() != n {
        return Err(Error::Parse(format!(
            "lifts: expected {n} entries, got {}",
            lifts_val.len()
        )));
    }
    let lifts = lifts_val
        .iter()
        .map(|row| scalar_row::<S>(row, m, "lifts"))
        .collect::<Result<Vec<_>>>()?;
    let monodromy = square_matrix_from_json::<S>(get(obj, "monodromy")?, m)?;
    TwistedPolygon::new(lifts, monodromy)
}

fn square_matrix_to_json<S: Scalar>(m: &SquareMatrix<S>) -> Value {
    Value::Array(
        (0..m.dim())
            .map(|i| Value::Array((0..m.dim()).map(|j| m.get(i, j).to_json()).collect()))
            .collect(),
    )
}

fn square_matrix_from_json<S: Scalar>(v: &Value, dim: usize) -> Result<SquareMatrix<S>> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix: expected an array of rows".into()))?;
    if rows.len() != dim {
        return Err(Error::Parse(format!(
            "matrix: expected {dim} rows, got {}",
            rows.len()
        )));
    }
    let rows = rows
        .iter()
        .map(|row| scalar_row::<S>(row, dim, "matrix row"))
        .collect::<Result<Vec<_>>>()?;
    Ok(SquareMatrix::from_rows(rows))
}

pub fn matrix_sequence_to_json<S: Scalar>(a: &MatrixSequence<S>) -> Value {
    json!({
        "m": a.dim(),
        "N": a.period(),
        "mats": a.mats().iter().map(square_matrix_to_json).collect::<Vec<_>>(),
        "scalar_mode": S::mode_name(),
    })
}

pub fn matrix_sequence_from_json<S: Scalar>(v: &Value) -> Result<MatrixSequence<S>> {
    let obj = as_object(v, "matrix sequence")?;
    let m = as_usize(get(obj, "m")?, "m")?;
    let n = as_usize(get(obj, "N")?, "N")?;
    let mats_val = get(obj, "mats")?
        .as_array()
        .ok_or_else(|| Error::Parse("mats: expected an array".into()))?;
    if mats_val.len() != n {
        return Err(Error::Parse(format!(
            "mats: expected {n} matrices, got {}",
            mats_val.len()
        )));
    }
    let mats = mats_val
        .iter()
        .map(|v| square_matrix_from_json::<S>(v, m))
        .collect::<Result<Vec<_>>>()?;
    MatrixSequence::new(mats)
}

pub fn chart_to_json<S: Scalar>(x: &CrossRatioChart<S>) -> Value {
    json!({
        "N": x.period(),
        "x": x.values().iter().map(|v| v.to_json()).collect::<Vec<_>>(),
        "scalar_mode": S::mode_name(),
    })
}

pub fn chart_from_json<S: Scalar>(v: &Value) -> Result<CrossRatioChart<S>> {
    let obj = as_object(v, "chart")?;
    let n = as_usize(get(obj, "N")?, "N")?;
    let values = scalar_row::<S>(get(obj, "x")?, n, "x")?;
    CrossRatioChart::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use crate::scalar::Rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn operator_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let d = sample::operator::<Rat>(&mut rng, 4, -2, 3);
        let v = operator_to_json(&d);
        assert_eq!(operator_from_json::<Rat>(&v).unwrap(), d);
        // the float reader accepts rational strings
        assert!(operator_from_json::<f64>(&v).is_ok());
    }

    #[test]
    fn polygon_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        let p = sample::twisted_polygon::<Rat>(&mut rng, 3, 5);
        let v = polygon_to_json(&p);
        assert_eq!(polygon_from_json::<Rat>(&v).unwrap(), p);
    }

    #[test]
    fn matrix_sequence_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let a = MatrixSequence::new(
            (0..4).map(|_| sample::gl_matrix::<Rat>(&mut rng, 2)).collect(),
        )
        .unwrap();
        let v = matrix_sequence_to_json(&a);
        assert_eq!(matrix_sequence_from_json::<Rat>(&v).unwrap(), a);
    }

    #[test]
    fn malformed_documents_are_rejected() {
        let bad = serde_json::json!({"N": 3, "lo": 1, "hi": 0, "coeffs": []});
        assert!(operator_from_json::<Rat>(&bad).is_err());
        let bad = serde_json::json!({"N": 2, "lo": 0, "hi": 0, "coeffs": [["1/0", "2"]]});
        assert!(operator_from_json::<Rat>(&bad).is_err());
        let bad = serde_json::json!([1, 2, 3]);
        assert!(operator_from_json::<Rat>(&bad).is_err());
    }
}
