//! JSON files for operators, structure constants, reconstructions and reports.
//!
//! Output is deterministic: object keys are sorted, entries are sorted by
//! index, scalars are printed in canonical form.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::bialgebra::{StructureConstants, Tensor2, Tensor3};
use crate::error::{Error, Result};
use crate::reconstruction::ReconstructionResult;
use crate::report::VerificationReport;
use crate::scalar::{Field, FieldTag, Rational, RationalFunction};
use crate::tensor::{flatten, unflatten, Operator};

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(path, format!("missing key \"{key}\"")))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn as_index(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema(path, "expected a nonnegative integer"))
}

fn as_indices(v: &Value, path: &str) -> Result<Vec<usize>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_index(x, &format!("{path}[{i}]")))
        .collect()
}

fn as_scalar<F: Field>(v: &Value, path: &str) -> Result<F> {
    let text = v.as_str().ok_or_else(|| schema(path, "expected a scalar string"))?;
    F::parse(text).map_err(|e| schema(path, e.to_string()))
}

fn read_tag(obj: &Map<String, Value>) -> Result<FieldTag> {
    let v = field(obj, "$", "field")?;
    let s = v.as_str().ok_or_else(|| schema("$.field", "expected \"Q\" or \"Qq\""))?;
    s.parse().map_err(|e: crate::error::ParseError| schema("$.field", e.to_string()))
}

/// Checks that the file's field can be read as `F` (ℚ files may be read as ℚ(q)).
fn check_tag<F: Field>(tag: FieldTag) -> Result<()> {
    match (tag, F::TAG) {
        (a, b) if a == b => Ok(()),
        (FieldTag::Q, FieldTag::Qq) => Ok(()),
        (a, b) => Err(Error::FieldMismatch { left: a, right: b }),
    }
}

pub fn operator_to_json<F: Field>(op: &Operator<F>) -> Value {
    let entries: Vec<Value> = op
        .iter()
        .map(|(r, c, v)| {
            json!({
                "row": unflatten(r, op.row_dims()),
                "col": unflatten(c, op.col_dims()),
                "value": v.to_string(),
            })
        })
        .collect();
    json!({
        "field": F::TAG.to_string(),
        "row_dims": op.row_dims(),
        "col_dims": op.col_dims(),
        "entries": entries,
    })
}

fn operator_from_object<F: Field>(obj: &Map<String, Value>, path: &str) -> Result<Operator<F>> {
    let row_dims = as_indices(field(obj, path, "row_dims")?, &format!("{path}.row_dims"))?;
    let col_dims = as_indices(field(obj, path, "col_dims")?, &format!("{path}.col_dims"))?;
    if row_dims.contains(&0) || col_dims.contains(&0) {
        return Err(schema(path, "leg dimensions must be positive"));
    }
    let mut op = Operator::zero(row_dims.clone(), col_dims.clone());
    let entries = as_array(field(obj, path, "entries")?, &format!("{path}.entries"))?;
    let mut seen = std::collections::BTreeSet::new();
    for (k, e) in entries.iter().enumerate() {
        let p = format!("{path}.entries[{k}]");
        let eo = as_object(e, &p)?;
        let row = as_indices(field(eo, &p, "row")?, &format!("{p}.row"))?;
        let col = as_indices(field(eo, &p, "col")?, &format!("{p}.col"))?;
        for (idx, dims, name) in [(&row, &row_dims, "row"), (&col, &col_dims, "col")] {
            if idx.len() != dims.len() || idx.iter().zip(dims.iter()).any(|(i, d)| i >= d) {
                return Err(schema(format!("{p}.{name}"), format!("index {idx:?} out of range for {dims:?}")));
            }
        }
        let value: F = as_scalar(field(eo, &p, "value")?, &format!("{p}.value"))?;
        let key = (flatten(&row, &row_dims), flatten(&col, &col_dims));
        if !seen.insert(key) {
            return Err(schema(&p, "duplicate entry"));
        }
        op.insert(key.0, key.1, value);
    }
    Ok(op)
}

pub fn operator_from_json<F: Field>(v: &Value) -> Result<Operator<F>> {
    let obj = as_object(v, "$")?;
    check_tag::<F>(read_tag(obj)?)?;
    operator_from_object(obj, "$")
}

/// An operator file over whichever field it declares.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyOperator {
    Q(Operator<Rational>),
    Qq(Operator<RationalFunction>),
}

impl AnyOperator {
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = as_object(v, "$")?;
        Ok(match read_tag(obj)? {
            FieldTag::Q => AnyOperator::Q(operator_from_object(obj, "$")?),
            FieldTag::Qq => AnyOperator::Qq(operator_from_object(obj, "$")?),
        })
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyOperator::Q(op) => operator_to_json(op),
            AnyOperator::Qq(op) => operator_to_json(op),
        }
    }
}

fn t3_to_json<F: Field>(t: &Tensor3<F>) -> Value {
    Value::Array(t.iter().map(|(&(a, b, c), v)| json!([a, b, c, v.to_string()])).collect())
}

fn t2_to_json<F: Field>(t: &Tensor2<F>) -> Value {
    Value::Array(t.iter().map(|(&(a, b), v)| json!([a, b, v.to_string()])).collect())
}

fn vec_to_json<F: Field>(v: &[F]) -> Value {
    Value::Array(v.iter().map(|x| json!(x.to_string())).collect())
}

pub fn constants_to_json<F: Field>(sc: &StructureConstants<F>) -> Value {
    let mut obj = Map::new();
    obj.insert("field".into(), json!(F::TAG.to_string()));
    obj.insert("dim".into(), json!(sc.dim));
    obj.insert("m".into(), t3_to_json(&sc.m));
    obj.insert("mu".into(), t3_to_json(&sc.mu));
    if let Some(u) = &sc.unit {
        obj.insert("unit".into(), vec_to_json(u));
    }
    if let Some(c) = &sc.counit {
        obj.insert("counit".into(), vec_to_json(c));
    }
    if let Some(a) = &sc.antipode {
        obj.insert("antipode".into(), t2_to_json(a));
    }
    if let Some(a) = &sc.antipode_inv {
        obj.insert("antipode_inv".into(), t2_to_json(a));
    }
    Value::Object(obj)
}

fn index_tuple<F: Field, const N: usize>(v: &Value, path: &str, dim: usize) -> Result<([usize; N], F)> {
    let arr = as_array(v, path)?;
    if arr.len() != N + 1 {
        return Err(schema(path, format!("expected {N} indices and a value")));
    }
    let mut idx = [0; N];
    for (k, slot) in idx.iter_mut().enumerate() {
        let p = format!("{path}[{k}]");
        *slot = as_index(&arr[k], &p)?;
        if *slot >= dim {
            return Err(schema(p, format!("index {} out of range for dim {dim}", *slot)));
        }
    }
    Ok((idx, as_scalar(&arr[N], &format!("{path}[{N}]"))?))
}

fn read_t3<F: Field>(obj: &Map<String, Value>, key: &str, dim: usize) -> Result<Tensor3<F>> {
    let p = format!("$.{key}");
    let mut out = Tensor3::new();
    for (k, e) in as_array(field(obj, "$", key)?, &p)?.iter().enumerate() {
        let ep = format!("{p}[{k}]");
        let ([a, b, c], v) = index_tuple::<F, 3>(e, &ep, dim)?;
        if out.insert((a, b, c), v).is_some() {
            return Err(schema(ep, "duplicate entry"));
        }
    }
    Ok(out)
}

fn read_t2<F: Field>(obj: &Map<String, Value>, key: &str, dim: usize) -> Result<Option<Tensor2<F>>> {
    let Some(v) = obj.get(key) else { return Ok(None) };
    let p = format!("$.{key}");
    let mut out = Tensor2::new();
    for (k, e) in as_array(v, &p)?.iter().enumerate() {
        let ep = format!("{p}[{k}]");
        let ([a, b], v) = index_tuple::<F, 2>(e, &ep, dim)?;
        if out.insert((a, b), v).is_some() {
            return Err(schema(ep, "duplicate entry"));
        }
    }
    Ok(Some(out))
}

fn read_vec<F: Field>(obj: &Map<String, Value>, key: &str, dim: usize) -> Result<Option<Vec<F>>> {
    let Some(v) = obj.get(key) else { return Ok(None) };
    let p = format!("$.{key}");
    let arr = as_array(v, &p)?;
    if arr.len() != dim {
        return Err(schema(&p, format!("expected {dim} values")));
    }
    arr.iter()
        .enumerate()
        .map(|(k, x)| as_scalar(x, &format!("{p}[{k}]")))
        .collect::<Result<Vec<F>>>()
        .map(Some)
}

pub fn constants_from_json<F: Field>(v: &Value) -> Result<StructureConstants<F>> {
    let obj = as_object(v, "$")?;
    check_tag::<F>(read_tag(obj)?)?;
    let dim = as_index(field(obj, "$", "dim")?, "$.dim")?;
    let m = read_t3(obj, "m", dim)?;
    let mu = read_t3(obj, "mu", dim)?;
    let mut sc = StructureConstants::new(dim, m, mu)?;
    sc.unit = read_vec(obj, "unit", dim)?;
    sc.counit = read_vec(obj, "counit", dim)?;
    sc.antipode = read_t2(obj, "antipode", dim)?;
    sc.antipode_inv = read_t2(obj, "antipode_inv", dim)?;
    sc.validate()?;
    Ok(sc)
}

/// Structure constants plus the factor matrices and their trace duals.
pub fn reconstruction_to_json<F: Field>(res: &ReconstructionResult<F>) -> Value {
    let mut v = constants_to_json(&res.constants);
    let list = |ops: &[Operator<F>]| Value::Array(ops.iter().map(operator_to_json).collect());
    let obj = v.as_object_mut().expect("object");
    obj.insert("G".into(), list(&res.g));
    obj.insert("F".into(), list(&res.f));
    obj.insert("G_dual".into(), list(&res.g_dual));
    obj.insert("F_dual".into(), list(&res.f_dual));
    if let Some(u) = &res.unit {
        obj.insert("unit".into(), vec_to_json(u));
    }
    v
}

pub fn reports_to_json(reports: &[VerificationReport]) -> Value {
    Value::Array(reports.iter().map(VerificationReport::to_json).collect())
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| schema("$", format!("malformed JSON: {e}")))
}

pub fn read_json(path: &Path) -> Result<Value> {
    parse_json(&std::fs::read_to_string(path)?)
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    std::fs::write(path, to_pretty(v))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialgebra::{adjoint_rep, canonical_element, group_algebra, FiniteGroup};
    use crate::reconstruction::reconstruct;

    fn z2_s() -> Operator<Rational> {
        canonical_element(&adjoint_rep(&group_algebra(&FiniteGroup::cyclic(2))))
    }

    #[test]
    fn operator_round_trip_is_byte_identical() {
        let text = to_pretty(&operator_to_json(&z2_s()));
        let back: Operator<Rational> = operator_from_json(&parse_json(&text).unwrap()).unwrap();
        assert_eq!(back, z2_s());
        assert_eq!(to_pretty(&operator_to_json(&back)), text);
    }

    #[test]
    fn operator_layout() {
        let mut op = Operator::<Rational>::zero(vec![2], vec![2]);
        op.insert(1, 0, Rational::new(1.into(), 2.into()));
        op.insert(0, 1, Rational::from_integer((-3).into()));
        let v = operator_to_json(&op);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"col_dims":[2],"entries":[{"col":[1],"row":[0],"value":"-3"},{"col":[0],"row":[1],"value":"1/2"}],"field":"Q","row_dims":[2]}"#
        );
    }

    #[test]
    fn qq_round_trip_canonicalizes() {
        let text = r#"{"field":"Qq","row_dims":[1],"col_dims":[1],
            "entries":[{"row":[0],"col":[0],"value":"(2-2*q)/(4-4*q^2)"}]}"#;
        let op = AnyOperator::from_json(&parse_json(text).unwrap()).unwrap();
        let canon = to_pretty(&op.to_json());
        assert!(canon.contains("\"1/(2+2*q)\""), "{canon}");
        let again = AnyOperator::from_json(&parse_json(&canon).unwrap()).unwrap();
        assert_eq!(to_pretty(&again.to_json()), canon);
    }

    #[test]
    fn zero_denominator_names_the_entry() {
        let text = r#"{"field":"Q","row_dims":[2],"col_dims":[2],
            "entries":[{"row":[0],"col":[0],"value":"1"},{"row":[1],"col":[1],"value":"1/0"}]}"#;
        let err = operator_from_json::<Rational>(&parse_json(text).unwrap()).unwrap_err();
        match err {
            Error::Schema { path, .. } => assert_eq!(path, "$.entries[1].value"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn schema_errors() {
        let cases = [
            (r#"{"row_dims":[2],"col_dims":[2],"entries":[]}"#, "$"),
            (r#"{"field":"R","row_dims":[2],"col_dims":[2],"entries":[]}"#, "$.field"),
            (r#"{"field":"Q","row_dims":[2],"col_dims":[2],"entries":[{"row":[2],"col":[0],"value":"1"}]}"#, "$.entries[0].row"),
            (r#"{"field":"Q","row_dims":[2],"col_dims":[2],"entries":[{"row":[0],"col":[0],"value":"q"}]}"#, "$.entries[0].value"),
            (r#"{"field":"Q","row_dims":["a"],"col_dims":[2],"entries":[]}"#, "$.row_dims[0]"),
        ];
        for (text, want) in cases {
            match operator_from_json::<Rational>(&parse_json(text).unwrap()) {
                Err(Error::Schema { path, .. }) => assert_eq!(path, want, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(matches!(parse_json("{"), Err(Error::Schema { .. })));
    }

    #[test]
    fn field_mismatch() {
        let text = r#"{"field":"Qq","row_dims":[1],"col_dims":[1],"entries":[]}"#;
        assert!(matches!(
            operator_from_json::<Rational>(&parse_json(text).unwrap()),
            Err(Error::FieldMismatch { .. })
        ));
        let q_text = r#"{"field":"Q","row_dims":[1],"col_dims":[1],"entries":[{"row":[0],"col":[0],"value":"2"}]}"#;
        let promoted: Operator<RationalFunction> = operator_from_json(&parse_json(q_text).unwrap()).unwrap();
        assert_eq!(promoted.get(0, 0), RationalFunction::from_integer(2.into()));
    }

    #[test]
    fn constants_round_trip() {
        for g in [FiniteGroup::cyclic(3), FiniteGroup::symmetric3()] {
            let sc = group_algebra::<Rational>(&g);
            let text = to_pretty(&constants_to_json(&sc));
            let back: StructureConstants<Rational> = constants_from_json(&parse_json(&text).unwrap()).unwrap();
            assert_eq!(back, sc);
            assert_eq!(to_pretty(&constants_to_json(&back)), text);
        }
    }

    #[test]
    fn constants_errors() {
        let text = r#"{"field":"Q","dim":2,"m":[[0,0,2,"1"]],"mu":[]}"#;
        match constants_from_json::<Rational>(&parse_json(text).unwrap()) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "$.m[0][2]"),
            other => panic!("{other:?}"),
        }
        let text = r#"{"field":"Q","dim":2,"m":[],"mu":[],"unit":["1"]}"#;
        assert!(constants_from_json::<Rational>(&parse_json(text).unwrap()).is_err());
    }

    #[test]
    fn reconstruction_output() {
        let res = reconstruct(&z2_s()).unwrap();
        let v = reconstruction_to_json(&res);
        assert_eq!(v["dim"], json!(2));
        assert_eq!(v["G"].as_array().unwrap().len(), 2);
        let sc: StructureConstants<Rational> = constants_from_json(&v).unwrap();
        assert_eq!(sc.m, res.constants.m);
    }

    #[test]
    fn report_json_shape() {
        let rep = crate::relations::check_pentagon(&Operator::<Rational>::scalar(
            vec![2, 2],
            Rational::from_integer(2.into()),
        ))
        .unwrap();
        let v = rep.to_json();
        assert_eq!(v["relation"], json!("pentagon"));
        assert_eq!(v["holds"], json!(false));
        assert_eq!(v["witness"]["basis"], json!([0, 0, 0]));
        assert_eq!(v["witness"]["lhs"], json!([["0,0,0", "8"]]));
        assert!(v["elapsed_ms"].is_number());
    }
}
