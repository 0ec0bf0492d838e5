//! JSON forms of elements, points and cover files.
//!
//! Cover file: `{"char", "ext_modulus"?, "num", "den", "type"}` with ascending
//! coefficients. Over Q the pair is scaled to coprime integers, over F_p the
//! entries are residues, over extensions they are strings such as `"4*t+1"`.

use std::path::Path;

use num::{BigInt, ToPrimitive};
use serde_json::{json, Value};

use crate::field::{FieldCtx, FieldElem};
use crate::poly::{primitive_integer_coeffs, Poly, ProjPoint, RatFunc};
use crate::{Error, Result};

fn bigint_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

pub fn elem_json(x: &FieldElem) -> Value {
    if let Some(r) = x.as_prime_residue() {
        return json!(r);
    }
    match x.as_rational() {
        Some(q) if q.is_integer() => bigint_json(q.numer()),
        _ => json!(x.to_string()),
    }
}

/// Points as strings, `"inf"` for infinity.
pub fn point_json(x: &ProjPoint) -> Value {
    json!(x.to_string())
}

pub fn points_json(xs: &[ProjPoint]) -> Value {
    Value::Array(xs.iter().map(point_json).collect())
}

fn coeffs_json(f: &Poly) -> Vec<Value> {
    f.coeffs().iter().map(elem_json).collect()
}

/// `{"num", "den"}` only.
pub fn ratfunc_json(f: &RatFunc) -> Value {
    let (num, den) = if f.ctx().is_finite() {
        (coeffs_json(f.num()), coeffs_json(f.den()))
    } else {
        let n = f.num().coeffs().len();
        let joined: Vec<FieldElem> = f
            .num()
            .coeffs()
            .iter()
            .chain(f.den().coeffs())
            .cloned()
            .collect();
        let ints = primitive_integer_coeffs(&Poly::new(f.ctx(), joined).expect("same field"));
        (
            ints[..n].iter().map(bigint_json).collect(),
            ints[n..].iter().map(bigint_json).collect(),
        )
    };
    json!({ "num": num, "den": den })
}

pub fn cover_json(f: &RatFunc, ram_type: &[usize]) -> Value {
    let ctx = f.ctx();
    let mut doc = ratfunc_json(f);
    let obj = doc.as_object_mut().expect("object");
    obj.insert("char".into(), json!(ctx.characteristic()));
    if ctx.degree() > 1 {
        obj.insert("ext_modulus".into(), json!(ctx.modulus().expect("extension")));
    }
    obj.insert("type".into(), json!(ram_type));
    doc
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn parse_entry(ctx: &FieldCtx, v: &Value) -> Result<FieldElem> {
    match v {
        Value::Number(n) => {
            let n: BigInt = n
                .to_string()
                .parse()
                .map_err(|_| bad(format!("coefficient {n} is not an integer")))?;
            Ok(ctx.from_bigint(&n))
        }
        Value::String(s) => Ok(ctx.parse(s)?),
        other => Err(bad(format!("coefficient {other} is neither a number nor a string"))),
    }
}

fn parse_coeffs(ctx: &FieldCtx, doc: &Value, key: &str) -> Result<Poly> {
    let arr = doc
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| bad(format!("cover file lacks a \"{key}\" array")))?;
    let coeffs = arr
        .iter()
        .map(|v| parse_entry(ctx, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(ctx, coeffs)?)
}

pub fn field_of(doc: &Value) -> Result<FieldCtx> {
    let p = doc
        .get("char")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("cover file lacks \"char\""))?;
    if p == 0 {
        return Ok(FieldCtx::rationals());
    }
    match doc.get("ext_modulus") {
        None | Some(Value::Null) => Ok(FieldCtx::prime(p)?),
        Some(m) => {
            let modulus: Vec<u64> = serde_json::from_value(m.clone())
                .map_err(|e| bad(format!("ext_modulus: {e}")))?;
            Ok(FieldCtx::with_modulus(p, modulus)?)
        }
    }
}

pub fn cover_from_json(doc: &Value) -> Result<RatFunc> {
    let ctx = field_of(doc)?;
    let num = parse_coeffs(&ctx, doc, "num")?;
    let den = parse_coeffs(&ctx, doc, "den")?;
    Ok(RatFunc::new(num, den)?)
}

pub fn read_cover(path: &Path) -> Result<RatFunc> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
    let doc: Value = serde_json::from_str(&text)
        .map_err(|e| bad(format!("{} is not JSON: {e}", path.display())))?;
    cover_from_json(&doc)
}

pub fn render(doc: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(doc).expect("serializable")
    } else {
        serde_json::to_string(doc).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_cover_scaled_jointly() {
        let q = FieldCtx::rationals();
        let f = RatFunc::new(
            Poly::from_i64s(&q, &[0, 0, 0, 1]),
            Poly::from_i64s(&q, &[-2, 3]),
        )
        .unwrap();
        let doc = cover_json(&f, &[3, 3, 2, 2]);
        assert_eq!(doc["num"], json!([0, 0, 0, 1]));
        assert_eq!(doc["den"], json!([-2, 3]));
        assert_eq!(doc["char"], json!(0));
        assert_eq!(cover_from_json(&doc).unwrap(), f);
    }

    #[test]
    fn extension_cover_round_trip() {
        let f25 = FieldCtx::extension(5, 2).unwrap();
        let t = f25.generator().unwrap();
        let f = RatFunc::new(
            Poly::new(&f25, vec![t.clone(), f25.zero(), f25.one()]).unwrap(),
            Poly::new(&f25, vec![f25.from_i64(3), t]).unwrap(),
        )
        .unwrap();
        let doc = cover_json(&f, &[]);
        assert!(doc.get("ext_modulus").is_some());
        assert_eq!(cover_from_json(&doc).unwrap(), f);
    }
}
