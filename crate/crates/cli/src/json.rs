//! Canonical JSON helpers: objects are `BTreeMap`-backed so keys come out
//! sorted, and rationals are written as normalized `"p/q"` strings.

use std::collections::BTreeMap;

use adams_bar_core::bar::{BasisRef, PairTensor};
use adams_bar_core::cdga::{Cdga, Element, Witness};
use adams_bar_core::linalg::{Scalar, SparseVector};
use serde_json::{json, Map, Value};

pub fn rational(q: &Scalar) -> Value {
    Value::String(q.to_string())
}

pub fn vector(v: &SparseVector) -> Value {
    Value::Object(v.iter().map(|(i, q)| (i.to_string(), rational(q))).collect())
}

pub fn basis_ref(r: &BasisRef) -> String {
    format!("{}.{}", r.0, r.1)
}

pub fn pair_tensor(t: &PairTensor) -> Value {
    Value::Object(t.iter().map(|((a, b), q)| (format!("{}|{}", basis_ref(a), basis_ref(b)), rational(q))).collect())
}

pub fn element(a: &Cdga, e: &Element) -> Value {
    Value::String(a.fmt_element(e))
}

pub fn witnesses(ws: &[Witness]) -> Value {
    Value::Array(ws.iter().map(|w| json!({"check": w.check, "detail": w.detail})).collect())
}

/// `{"n,r": dim}` for the nonzero entries of a bidegree table.
pub fn table(t: &BTreeMap<(i64, i64), usize>) -> Value {
    Value::Object(t.iter().filter(|(_, &d)| d > 0).map(|((n, r), d)| (format!("{n},{r}"), json!(d))).collect())
}

pub fn generators(a: &Cdga) -> Value {
    let gens = a
        .generators()
        .iter()
        .enumerate()
        .map(|(g, s)| {
            json!({
                "name": s.name,
                "deg": s.bidegree.coh,
                "wt": s.bidegree.adams,
                "d": a.fmt_element(a.differential_of(g)),
            })
        })
        .collect();
    Value::Array(gens)
}

/// Weights `1..=w_max` of a per-weight list indexed from zero.
pub fn positive(dims: &[usize]) -> Vec<usize> {
    dims.iter().skip(1).copied().collect()
}

pub fn object(entries: Vec<(&str, Value)>) -> Map<String, Value> {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Pretty-printed serialization; key order is already canonical.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}
