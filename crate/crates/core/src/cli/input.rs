//! Input documents. Either a single case object or
//! `{"schema_version": "1", "cases": [case, ...]}` where a case is
//!
//! ```json
//! {"id": "c1", "quantization": {...}, "element": [[...]], "expected": 1.0}
//! {"id": "c2", "e": {...}, "f": {...}, "element": [[...]], "pairing": "row-major",
//!  "expected": {"pl": 2.0, "l": 1.414}}
//! ```
//!
//! `quantization` is used by `norm`, the factor pair `e`, `f` by the tensor
//! commands. The element is the row-major `d × m` coefficient matrix.

use serde_json::Value;

use super::{Command, SCHEMA_VERSION};
use crate::element::AmplifiedElement;
use crate::error::{Error, Result};
use crate::hilbert::PairingMap;
use crate::quant::json::{
    as_array, as_f64, as_str, field, object, parse_element, parse_quantization, ptr,
};
use crate::quant::Quantization;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Expected {
    /// Expected value of the quantity the command computes.
    pub value: Option<f64>,
    pub pl: Option<f64>,
    pub l: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct CaseInput {
    pub id: String,
    pub quantization: Option<Quantization>,
    pub factors: Option<(Quantization, Quantization)>,
    pub element: AmplifiedElement,
    pub pairing: PairingMap,
    pub expected: Expected,
    /// The case as written, for the inputs digest.
    pub raw: Value,
}

fn parse_expected(v: Option<&Value>, at: &str) -> Result<Expected> {
    let Some(v) = v else {
        return Ok(Expected::default());
    };
    if v.is_number() {
        return Ok(Expected {
            value: Some(as_f64(v, at)?),
            ..Default::default()
        });
    }
    let obj = object(v, at)?;
    let get = |k: &str| obj.get(k).map(|x| as_f64(x, &ptr(at, k))).transpose();
    for k in obj.keys() {
        if !matches!(k.as_str(), "value" | "pl" | "l") {
            return Err(Error::schema(
                ptr(at, k),
                "unknown expectation (use value, pl or l)",
            ));
        }
    }
    Ok(Expected {
        value: get("value")?,
        pl: get("pl")?,
        l: get("l")?,
    })
}

fn parse_case(v: &Value, at: &str, index: usize, command: Command) -> Result<CaseInput> {
    let obj = object(v, at)?;
    let id = match obj.get("id") {
        Some(x) => as_str(x, &ptr(at, "id"))?.to_string(),
        None => format!("case-{index}"),
    };
    let element = parse_element(field(obj, "element", at)?, &ptr(at, "element"))?;
    let pairing = match obj.get("pairing") {
        Some(p) => {
            let pat = ptr(at, "pairing");
            PairingMap::parse(as_str(p, &pat)?)
                .ok_or_else(|| Error::schema(pat, "pairing must be row-major or column-major"))?
        }
        None => PairingMap::RowMajor,
    };
    let expected = parse_expected(obj.get("expected"), &ptr(at, "expected"))?;
    let (quantization, factors) = if command == Command::Norm {
        let q = parse_quantization(field(obj, "quantization", at)?, &ptr(at, "quantization"))?;
        if q.dim() != element.m() {
            return Err(Error::schema(
                ptr(at, "element"),
                format!(
                    "element has {} columns, quantization dimension is {}",
                    element.m(),
                    q.dim()
                ),
            ));
        }
        (Some(q), None)
    } else {
        let e = parse_quantization(field(obj, "e", at)?, &ptr(at, "e"))?;
        let f = parse_quantization(field(obj, "f", at)?, &ptr(at, "f"))?;
        if e.dim() * f.dim() != element.m() {
            return Err(Error::schema(
                ptr(at, "element"),
                format!(
                    "element has {} columns, expected {}",
                    element.m(),
                    e.dim() * f.dim()
                ),
            ));
        }
        (None, Some((e, f)))
    };
    Ok(CaseInput {
        id,
        quantization,
        factors,
        element,
        pairing,
        expected,
        raw: v.clone(),
    })
}

/// Parses and validates an input document for `command`.
pub fn parse_document(doc: &Value, command: Command) -> Result<Vec<CaseInput>> {
    let obj = object(doc, "")?;
    if let Some(v) = obj.get("schema_version") {
        let s = as_str(v, "/schema_version")?;
        if s != SCHEMA_VERSION {
            return Err(Error::schema(
                "/schema_version",
                format!("unsupported schema version {s:?} (expected {SCHEMA_VERSION:?})"),
            ));
        }
    }
    let cases = match obj.get("cases") {
        Some(cs) => as_array(cs, "/cases")?
            .iter()
            .enumerate()
            .map(|(i, c)| parse_case(c, &ptr("/cases", i), i, command))
            .collect::<Result<Vec<_>>>()?,
        None => vec![parse_case(doc, "", 0, command)?],
    };
    let mut ids: Vec<&str> = cases.iter().map(|c| c.id.as_str()).collect();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::schema(
            "/cases",
            format!("duplicate case id {:?}", w[0]),
        ));
    }
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn single_case_document() {
        let doc = json!({"quantization": {"kind": "hilbert", "dim": 2}, "element": [[1, 0], [0, 1]], "expected": 1.5});
        let cases = parse_document(&doc, Command::Norm).unwrap();
        assert_eq!(cases.len(), 1);
        assert_eq!(cases[0].id, "case-0");
        assert_eq!(cases[0].expected.value, Some(1.5));
    }

    #[test]
    fn schema_errors_carry_pointers() {
        let doc = json!({"schema_version": "1", "cases": [
            {"e": {"kind": "hilbert", "dim": 2}, "f": {"kind": "hilbert", "dim": 2}, "element": [[1, 0, 0]]}
        ]});
        match parse_document(&doc, Command::Pl) {
            Err(Error::Schema { pointer, .. }) => assert_eq!(pointer, "/cases/0/element"),
            other => panic!("unexpected {other:?}"),
        }
        let doc = json!({"schema_version": "2", "element": [[1]]});
        match parse_document(&doc, Command::Norm) {
            Err(Error::Schema { pointer, .. }) => assert_eq!(pointer, "/schema_version"),
            other => panic!("unexpected {other:?}"),
        }
        let doc = json!({"quantization": {"kind": "bogus"}, "element": [[1]]});
        match parse_document(&doc, Command::Norm) {
            Err(Error::Schema { pointer, .. }) => assert_eq!(pointer, "/quantization/kind"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
