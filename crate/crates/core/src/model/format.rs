//! JSON model documents.
//!
//! ```json
//! {"n": 2, "unary": [[0, 0.1], [0, 0.1]],
//!  "edges": [{"i": 0, "j": 1, "theta": [[0, 10], [10, 0]]}],
//!  "hop": {"type": "cardinality", "f": ["inf", 0, 0], "flip_mask": [0, 0]}}
//! ```
//!
//! Infinity is written as the string `"inf"`.

use serde_json::{json, Map, Value};

use super::{Edge, EnergyModel, Hop, TABLE_MAX_N};
use crate::error::{Error, Result};
use crate::ext::{self, INF};

pub fn read_model(text: &str) -> Result<EnergyModel> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| Error::parse("<document>", format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::parse("<document>", "$", "expected a JSON object"))?;

    let n = field(obj, "n", "$")?
        .as_u64()
        .ok_or_else(|| Error::parse("n", "$.n", "expected a non-negative integer"))? as usize;

    let unary_v = array(field(obj, "unary", "$")?, "unary", "$.unary")?;
    if unary_v.len() != n {
        return Err(Error::parse(
            "unary",
            "$.unary",
            format!("expected {n} tables, found {}", unary_v.len()),
        ));
    }
    let unary = unary_v
        .iter()
        .enumerate()
        .map(|(i, t)| pair(t, "unary", &format!("$.unary[{i}]")))
        .collect::<Result<Vec<_>>>()?;

    let edges_v = array(field(obj, "edges", "$")?, "edges", "$.edges")?;
    let mut edges = Vec::with_capacity(edges_v.len());
    for (k, e) in edges_v.iter().enumerate() {
        let loc = format!("$.edges[{k}]");
        let eo = e
            .as_object()
            .ok_or_else(|| Error::parse("edges", &loc, "expected an object"))?;
        let idx = |name: &str| -> Result<usize> {
            let v = field(eo, name, &loc)?
                .as_u64()
                .ok_or_else(|| Error::parse(name, format!("{loc}.{name}"), "expected a non-negative integer"))?
                as usize;
            if v >= n {
                return Err(Error::parse(
                    name,
                    format!("{loc}.{name}"),
                    format!("vertex index {v} out of range for n = {n}"),
                ));
            }
            Ok(v)
        };
        let (i, j) = (idx("i")?, idx("j")?);
        let tloc = format!("{loc}.theta");
        let rows = array(field(eo, "theta", &loc)?, "theta", &tloc)?;
        if rows.len() != 2 {
            return Err(Error::parse("theta", &tloc, "expected a 2x2 table"));
        }
        let theta = [
            pair(&rows[0], "theta", &format!("{tloc}[0]"))?,
            pair(&rows[1], "theta", &format!("{tloc}[1]"))?,
        ];
        edges.push(Edge::new(i, j, theta));
    }

    let hop = read_hop(field(obj, "hop", "$")?, n)?;
    EnergyModel::new(n, unary, edges, hop).map_err(|e| match e {
        Error::Input(msg) => Error::parse("<model>", "$", msg),
        other => other,
    })
}

fn read_hop(v: &Value, n: usize) -> Result<Hop> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::parse("hop", "$.hop", "expected an object"))?;
    if v.as_object().is_some_and(|o| o.contains_key("hops")) {
        return Err(Error::parse("hop", "$.hop", "exactly one HOP per model is supported"));
    }
    let kind = field(obj, "type", "$.hop")?
        .as_str()
        .ok_or_else(|| Error::parse("type", "$.hop.type", "expected a string"))?;
    match kind {
        "cardinality" => {
            let f = numbers(field(obj, "f", "$.hop")?, "f", "$.hop.f")?;
            if f.len() != n + 1 {
                return Err(Error::parse(
                    "f",
                    "$.hop.f",
                    format!("expected n+1 = {} entries, found {}", n + 1, f.len()),
                ));
            }
            let flip_mask = match obj.get("flip_mask") {
                None | Some(Value::Null) => vec![false; n],
                Some(m) => {
                    let bits = array(m, "flip_mask", "$.hop.flip_mask")?;
                    if bits.len() != n {
                        return Err(Error::parse(
                            "flip_mask",
                            "$.hop.flip_mask",
                            format!("expected {n} bits, found {}", bits.len()),
                        ));
                    }
                    bits.iter()
                        .enumerate()
                        .map(|(i, b)| match b.as_u64() {
                            Some(0) => Ok(false),
                            Some(1) => Ok(true),
                            _ => match b.as_bool() {
                                Some(v) => Ok(v),
                                None => Err(Error::parse(
                                    "flip_mask",
                                    format!("$.hop.flip_mask[{i}]"),
                                    "expected 0 or 1",
                                )),
                            },
                        })
                        .collect::<Result<Vec<_>>>()?
                }
            };
            Ok(Hop::Cardinality { f, flip_mask })
        }
        "pattern" => {
            let rows = array(field(obj, "patterns", "$.hop")?, "patterns", "$.hop.patterns")?;
            let patterns = rows
                .iter()
                .enumerate()
                .map(|(k, r)| {
                    let loc = format!("$.hop.patterns[{k}]");
                    let w = numbers(r, "patterns", &loc)?;
                    if w.len() != n {
                        return Err(Error::parse(
                            "patterns",
                            loc,
                            format!("expected {n} weights, found {}", w.len()),
                        ));
                    }
                    Ok(w)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Hop::Pattern { patterns })
        }
        "table" => {
            if n > TABLE_MAX_N {
                return Err(Error::parse(
                    "values",
                    "$.hop.values",
                    format!("table HOPs are limited to n <= {TABLE_MAX_N}"),
                ));
            }
            let values = numbers(field(obj, "values", "$.hop")?, "values", "$.hop.values")?;
            if values.len() != 1 << n {
                return Err(Error::parse(
                    "values",
                    "$.hop.values",
                    format!("expected 2^{n} entries, found {}", values.len()),
                ));
            }
            Ok(Hop::Table { values })
        }
        other => Err(Error::parse(
            "type",
            "$.hop.type",
            format!("unknown HOP type `{other}`"),
        )),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str, loc: &str) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| Error::parse(name, loc, format!("missing field `{name}`")))
}

fn array<'a>(v: &'a Value, name: &str, loc: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::parse(name, loc, "expected an array"))
}

fn number(v: &Value, name: &str, loc: &str) -> Result<f64> {
    match v {
        Value::Number(x) => x
            .as_f64()
            .ok_or_else(|| Error::parse(name, loc, "number out of range")),
        Value::String(s) if s == "inf" => Ok(INF),
        _ => Err(Error::parse(name, loc, "expected a number or \"inf\"")),
    }
}

fn numbers(v: &Value, name: &str, loc: &str) -> Result<Vec<f64>> {
    array(v, name, loc)?
        .iter()
        .enumerate()
        .map(|(k, x)| number(x, name, &format!("{loc}[{k}]")))
        .collect()
}

fn pair(v: &Value, name: &str, loc: &str) -> Result<[f64; 2]> {
    let xs = numbers(v, name, loc)?;
    xs.try_into()
        .map_err(|xs: Vec<f64>| Error::parse(name, loc, format!("expected 2 entries, found {}", xs.len())))
}

fn encode(v: f64) -> Value {
    if ext::is_forbidden(v) {
        Value::String("inf".into())
    } else {
        json!(v)
    }
}

fn encode_all(vs: &[f64]) -> Value {
    Value::Array(vs.iter().map(|&v| encode(v)).collect())
}

pub fn write_model(model: &EnergyModel) -> String {
    let hop = match model.hop() {
        Hop::Cardinality { f, flip_mask } => json!({
            "type": "cardinality",
            "f": encode_all(f),
            "flip_mask": flip_mask.iter().map(|&b| b as u8).collect::<Vec<_>>(),
        }),
        Hop::Pattern { patterns } => json!({
            "type": "pattern",
            "patterns": patterns.iter().map(|w| encode_all(w)).collect::<Vec<_>>(),
        }),
        Hop::Table { values } => json!({"type": "table", "values": encode_all(values)}),
    };
    let doc = json!({
        "n": model.n(),
        "unary": model.unary().iter().map(|u| encode_all(u)).collect::<Vec<_>>(),
        "edges": model.edges().iter().map(|e| json!({
            "i": e.i,
            "j": e.j,
            "theta": [encode_all(&e.theta[0]), encode_all(&e.theta[1])],
        })).collect::<Vec<_>>(),
        "hop": hop,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("model documents always serialize");
    s.push('\n');
    s
}
