//! Canonical JSON: sorted keys, rationals as `"p/q"`, complex numbers as `[re, im]`.

use std::path::Path;

use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use seesaw_core::contraction::{ContractionResult, QExpansionForm};
use seesaw_core::linalg::format_rat;
use seesaw_core::repvec::RepVector;
use seesaw_core::{Lattice, ThetaValue};

use crate::CliError;

pub fn rat(r: &BigRational) -> Value {
    Value::String(format_rat(r))
}

pub fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// The name when there is one, otherwise the Gram matrix.
pub fn lattice(l: &Lattice) -> Value {
    match l.name() {
        Some(n) => Value::String(n.to_string()),
        None => Value::Array(
            l.gram()
                .to_rows()
                .iter()
                .map(|r| Value::Array(r.iter().map(|x| json!(i64::try_from(x).expect("small entries"))).collect()))
                .collect(),
        ),
    }
}

pub fn form(f: &QExpansionForm) -> Value {
    let d = f.lattice().disc();
    let terms: Vec<Value> = f
        .terms()
        .iter()
        .map(|((g, e), c)| json!({"coset": d.element(*g).coords, "exp": rat(e), "coef": complex(*c)}))
        .collect();
    json!({"lattice": lattice(f.lattice()), "weight": rat(f.weight()), "terms": terms})
}

pub fn contraction(r: &ContractionResult) -> Value {
    json!({"form": form(&r.form), "weight": rat(&r.weight), "complete_below": rat(&r.complete_below)})
}

/// Components as `{"index": [coset, …], "value": [re, im]}`, cosets by coordinates.
pub fn rep_vector(v: &RepVector) -> Value {
    let space = v.space();
    let comps: Vec<Value> = v
        .data()
        .iter()
        .enumerate()
        .map(|(lin, z)| {
            let idx: Vec<Value> = space
                .multi(lin)
                .iter()
                .zip(space.factors())
                .map(|(i, d)| json!(d.element(*i).coords))
                .collect();
            json!({"index": idx, "value": complex(*z)})
        })
        .collect();
    Value::Array(comps)
}

pub fn theta(t: &ThetaValue) -> Value {
    json!({"tau": complex(t.tau), "bound": t.bound, "tail": t.tail, "value": rep_vector(&t.value)})
}

/// serde_json maps are ordered by key, so this is byte-stable.
pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

pub fn write(v: &Value, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, canonical(v))?;
    Ok(())
}

pub fn object(pairs: impl IntoIterator<Item = (String, Value)>) -> Value {
    Value::Object(pairs.into_iter().collect::<Map<_, _>>())
}
