//! JSON form of quantizations and elements. Complex numbers are `[re, im]`
//! (a bare number is real); matrices are row-major nested arrays. Schema
//! errors carry the JSON pointer of the offending value.

use nalgebra::{DMatrix, DVector};
use serde_json::{json, Map, Value};

use super::base::{BaseNorm, Exponent, Field};
use super::Quantization;
use crate::element::AmplifiedElement;
use crate::error::{Error, Result};
use crate::hilbert::C64;

pub(crate) fn ptr(base: &str, key: impl std::fmt::Display) -> String {
    format!("{base}/{key}")
}

pub(crate) fn object<'a>(v: &'a Value, at: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::schema(at, "expected an object"))
}

pub(crate) fn field<'a>(obj: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::schema(ptr(at, key), "missing required field"))
}

pub(crate) fn as_usize(v: &Value, at: &str) -> Result<usize> {
    v.as_u64()
        .filter(|n| *n > 0)
        .map(|n| n as usize)
        .ok_or_else(|| Error::schema(at, "expected a positive integer"))
}

pub(crate) fn as_f64(v: &Value, at: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::schema(at, "expected a number"))
}

pub(crate) fn as_str<'a>(v: &'a Value, at: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::schema(at, "expected a string"))
}

pub(crate) fn as_array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::schema(at, "expected an array"))
}

pub fn parse_complex(v: &Value, at: &str) -> Result<C64> {
    if let Some(x) = v.as_f64() {
        return Ok(C64::new(x, 0.0));
    }
    match v.as_array().map(|a| a.as_slice()) {
        Some([re, im]) => Ok(C64::new(as_f64(re, &ptr(at, 0))?, as_f64(im, &ptr(at, 1))?)),
        _ => Err(Error::schema(at, "expected a number or a [re, im] pair")),
    }
}

pub fn parse_vector(v: &Value, at: &str) -> Result<Vec<C64>> {
    as_array(v, at)?
        .iter()
        .enumerate()
        .map(|(i, c)| parse_complex(c, &ptr(at, i)))
        .collect()
}

/// Row-major nested arrays; all rows must have the same positive length.
pub fn parse_matrix(v: &Value, at: &str) -> Result<DMatrix<C64>> {
    let rows = as_array(v, at)?;
    if rows.is_empty() {
        return Err(Error::schema(at, "matrix needs at least one row"));
    }
    let parsed: Vec<Vec<C64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| parse_vector(r, &ptr(at, i)))
        .collect::<Result<_>>()?;
    let cols = parsed[0].len();
    if cols == 0 {
        return Err(Error::schema(ptr(at, 0), "matrix rows must be nonempty"));
    }
    if let Some(i) = parsed.iter().position(|r| r.len() != cols) {
        return Err(Error::schema(
            ptr(at, i),
            format!("row has {} entries, expected {cols}", parsed[i].len()),
        ));
    }
    Ok(DMatrix::from_fn(parsed.len(), cols, |r, c| parsed[r][c]))
}

pub fn parse_element(v: &Value, at: &str) -> Result<AmplifiedElement> {
    AmplifiedElement::new(parse_matrix(v, at)?)
}

fn parse_exponent(v: &Value, at: &str) -> Result<Exponent> {
    let p = match v {
        Value::String(s) if s == "inf" || s == "infinity" => f64::INFINITY,
        _ => as_f64(v, at)?,
    };
    Exponent::new(p).map_err(|e| Error::schema(at, e.to_string()))
}

fn parse_weights(obj: &Map<String, Value>, at: &str, dim: Option<usize>) -> Result<Vec<f64>> {
    match obj.get("weights") {
        Some(w) => {
            let at = ptr(at, "weights");
            let ws: Vec<f64> = as_array(w, &at)?
                .iter()
                .enumerate()
                .map(|(i, x)| as_f64(x, &ptr(&at, i)))
                .collect::<Result<_>>()?;
            if let Some(i) = ws.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
                return Err(Error::schema(
                    ptr(&at, i),
                    "weights must be positive and finite",
                ));
            }
            Ok(ws)
        }
        None => match dim {
            Some(d) => Ok(vec![1.0; d]),
            None => Err(Error::schema(
                ptr(at, "weights"),
                "weights required when no dimension is given",
            )),
        },
    }
}

pub fn parse_base(v: &Value, at: &str, dim: Option<usize>) -> Result<BaseNorm> {
    let obj = object(v, at)?;
    let kind_at = ptr(at, "kind");
    let kind = as_str(field(obj, "kind", at)?, &kind_at)?;
    let dim = match obj.get("dim") {
        Some(d) => Some(as_usize(d, &ptr(at, "dim"))?),
        None => dim,
    };
    let fld = match obj.get("field") {
        None => Field::Complex,
        Some(f) => match as_str(f, &ptr(at, "field"))? {
            "complex" => Field::Complex,
            "real" => Field::Real,
            other => {
                return Err(Error::schema(
                    ptr(at, "field"),
                    format!("unknown field {other:?}"),
                ))
            }
        },
    };
    let base = match kind {
        "lp" => {
            let p = parse_exponent(field(obj, "p", at)?, &ptr(at, "p"))?;
            let w = parse_weights(obj, at, dim)?;
            BaseNorm::lp(p.as_f64(), w).map_err(|e| Error::schema(at, e.to_string()))?
        }
        "euclidean" => BaseNorm::euclidean(
            dim.ok_or_else(|| Error::schema(ptr(at, "dim"), "euclidean base needs a dimension"))?,
        ),
        "polytope" => {
            let vat = ptr(at, "vertices");
            let vs = as_array(field(obj, "vertices", at)?, &vat)?;
            let verts: Vec<DVector<C64>> = vs
                .iter()
                .enumerate()
                .map(|(i, x)| parse_vector(x, &ptr(&vat, i)).map(DVector::from_vec))
                .collect::<Result<_>>()?;
            BaseNorm::polytope(verts).map_err(|e| match e {
                Error::NonSymmetricPolytope(i) => Error::schema(
                    ptr(&vat, i),
                    "vertex has no negative; dual ball must be symmetric",
                ),
                other => Error::schema(&vat, other.to_string()),
            })?
        }
        other => {
            return Err(Error::schema(
                kind_at,
                format!("unknown base kind {other:?}"),
            ))
        }
    };
    if let Some(d) = dim {
        if d != base.dim() {
            return Err(Error::schema(
                ptr(at, "dim"),
                format!("dimension {d} does not match base dimension {}", base.dim()),
            ));
        }
    }
    Ok(base.with_field(fld))
}

/// Parses a quantization; `at` is the pointer of `v` in the enclosing document.
pub fn parse_quantization(v: &Value, at: &str) -> Result<Quantization> {
    let obj = object(v, at)?;
    let kind_at = ptr(at, "kind");
    let kind = as_str(field(obj, "kind", at)?, &kind_at)?;
    let dim = obj
        .get("dim")
        .map(|d| as_usize(d, &ptr(at, "dim")))
        .transpose()?;
    let params_at = ptr(at, "params");
    let empty = Map::new();
    let params = match obj.get("params") {
        Some(p) => object(p, &params_at)?,
        None => &empty,
    };
    let inner_at = ptr(at, "inner");
    let q = match kind {
        "hilbert" => Quantization::Hilbert {
            dim: dim.ok_or_else(|| Error::schema(ptr(at, "dim"), "hilbert needs a dimension"))?,
        },
        "min" | "max" => {
            let base = parse_base(
                field(params, "base", &params_at)?,
                &ptr(&params_at, "base"),
                dim,
            )?;
            if kind == "min" {
                Quantization::Min { base }
            } else {
                Quantization::Max { base }
            }
        }
        "tensor_p" => {
            let inner = parse_quantization(field(obj, "inner", at)?, &inner_at)?;
            let base_dim = dim.map(|d| d / inner.dim());
            let base = parse_base(
                field(params, "base", &params_at)?,
                &ptr(&params_at, "base"),
                base_dim,
            )?;
            Quantization::TensorP {
                base,
                inner: Box::new(inner),
            }
        }
        "lp" => {
            let p = parse_exponent(field(params, "p", &params_at)?, &ptr(&params_at, "p"))?;
            let inner = match obj.get("inner") {
                Some(i) => parse_quantization(i, &inner_at)?,
                None => Quantization::scalar(),
            };
            let points = dim.map(|d| d / inner.dim());
            let weights = parse_weights(params, &params_at, points)?;
            Quantization::Lp {
                p,
                weights,
                inner: Box::new(inner),
            }
        }
        "concrete" => {
            let k_dim = as_usize(
                field(params, "k_dim", &params_at)?,
                &ptr(&params_at, "k_dim"),
            )?;
            let l_dim = as_usize(
                field(params, "l_dim", &params_at)?,
                &ptr(&params_at, "l_dim"),
            )?;
            let gat = ptr(&params_at, "generators");
            let gens: Vec<DMatrix<C64>> = as_array(field(params, "generators", &params_at)?, &gat)?
                .iter()
                .enumerate()
                .map(|(i, g)| parse_matrix(g, &ptr(&gat, i)))
                .collect::<Result<_>>()?;
            Quantization::Concrete {
                k_dim,
                l_dim,
                generators: gens,
            }
        }
        other => {
            return Err(Error::schema(
                kind_at,
                format!("unknown quantization kind {other:?}"),
            ))
        }
    };
    q.validate().map_err(|e| Error::schema(at, e.to_string()))?;
    if let Some(d) = dim {
        if d != q.dim() {
            return Err(Error::schema(
                ptr(at, "dim"),
                format!("dimension {d} does not match the structure ({})", q.dim()),
            ));
        }
    }
    Ok(q)
}

/// Parses a quantization from JSON text.
pub fn parse_quantization_str(text: &str) -> Result<Quantization> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::schema("", format!("invalid JSON: {e}")))?;
    parse_quantization(&v, "")
}

pub fn complex_to_json(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn matrix_to_json(m: &DMatrix<C64>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| Value::Array((0..m.ncols()).map(|c| complex_to_json(m[(r, c)])).collect()))
            .collect(),
    )
}

fn exponent_to_json(p: Exponent) -> Value {
    match p {
        Exponent::Infinity => json!("inf"),
        Exponent::Finite(p) => json!(p),
    }
}

pub fn base_to_json(b: &BaseNorm) -> Value {
    let mut obj = match b {
        BaseNorm::Lp { p, weights, .. } => {
            json!({"kind": "lp", "p": exponent_to_json(*p), "weights": weights})
        }
        BaseNorm::Euclidean { dim, .. } => json!({"kind": "euclidean", "dim": dim}),
        BaseNorm::Polytope { vertices, .. } => json!({
            "kind": "polytope",
            "vertices": vertices
                .iter()
                .map(|v| Value::Array(v.iter().map(|z| complex_to_json(*z)).collect()))
                .collect::<Vec<_>>(),
        }),
    };
    obj["field"] = json!(b.field().name());
    obj
}

pub fn quantization_to_json(q: &Quantization) -> Value {
    let mut obj = json!({"kind": q.kind_name(), "dim": q.dim()});
    match q {
        Quantization::Hilbert { .. } => {}
        Quantization::Min { base } | Quantization::Max { base } => {
            obj["params"] = json!({"base": base_to_json(base)});
        }
        Quantization::TensorP { base, inner } => {
            obj["params"] = json!({"base": base_to_json(base)});
            obj["inner"] = quantization_to_json(inner);
        }
        Quantization::Lp { p, weights, inner } => {
            obj["params"] = json!({"p": exponent_to_json(*p), "weights": weights});
            obj["inner"] = quantization_to_json(inner);
        }
        Quantization::Concrete {
            k_dim,
            l_dim,
            generators,
        } => {
            obj["params"] = json!({
                "k_dim": k_dim,
                "l_dim": l_dim,
                "generators": generators.iter().map(matrix_to_json).collect::<Vec<_>>(),
            });
        }
    }
    obj
}
