//! Parsing of lattice, sublattice, point, polynomial, pair and form specs.

use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::Value;

use seesaw_core::contraction::QExpansionForm;
use seesaw_core::disc::DiscElement;
use seesaw_core::linalg::{parse_rat, QMatrix};
use seesaw_core::{GrassmannPoint, HomogeneousPolynomial, Lattice, Polynomial, Sublattice, VectorPair};

use crate::CliError;

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

fn base_gram(name: &str) -> Option<Vec<Vec<i64>>> {
    let g = match name {
        "A1" => vec![vec![2]],
        "A2" => vec![vec![2, -1], vec![-1, 2]],
        "A3" => vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
        "D4" => vec![vec![2, -1, 0, 0], vec![-1, 2, -1, -1], vec![0, -1, 2, 0], vec![0, -1, 0, 2]],
        "E8" => vec![
            vec![2, -1, 0, 0, 0, 0, 0, 0],
            vec![-1, 2, -1, 0, 0, 0, 0, 0],
            vec![0, -1, 2, -1, 0, 0, 0, -1],
            vec![0, 0, -1, 2, -1, 0, 0, 0],
            vec![0, 0, 0, -1, 2, -1, 0, 0],
            vec![0, 0, 0, 0, -1, 2, -1, 0],
            vec![0, 0, 0, 0, 0, -1, 2, 0],
            vec![0, 0, -1, 0, 0, 0, 0, 2],
        ],
        "II11" | "U" => vec![vec![0, 1], vec![1, 0]],
        _ => {
            // <n>: the rank one lattice with Gram (n)
            let n: i64 = name.strip_prefix('<')?.strip_suffix('>')?.trim().parse().ok()?;
            vec![vec![n]]
        }
    };
    Some(g)
}

/// Names such as `A1`, `II11`, `E8`, `<4>`, `A1(-1)` joined by `+`.
pub fn lattice_by_name(name: &str) -> Result<Lattice, CliError> {
    let mut out: Option<Lattice> = None;
    for part in name.split('+') {
        let part = part.trim();
        let (base, neg) = match part.strip_suffix("(-1)") {
            Some(b) => (b.trim(), true),
            None => (part, false),
        };
        let gram = base_gram(base).ok_or_else(|| parse_err(format!("unknown lattice `{base}`")))?;
        let mut l = Lattice::from_rows(&gram)?.with_name(base);
        if neg {
            l = l.rescale(-1)?;
        }
        out = Some(match out {
            None => l,
            Some(acc) => acc.direct_sum(&l),
        });
    }
    out.ok_or_else(|| parse_err("empty lattice name"))
}

pub fn int_matrix(v: &Value) -> Result<Vec<Vec<i64>>, CliError> {
    let rows = v.as_array().ok_or_else(|| parse_err("expected an array of integer arrays"))?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| parse_err("expected an integer array"))?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| parse_err(format!("expected an integer, got {x}"))))
                .collect()
        })
        .collect()
}

/// A name, a Gram matrix, or `{"gram": …}` / `{"name": …}`.
pub fn parse_lattice(v: &Value) -> Result<Lattice, CliError> {
    match v {
        Value::String(s) => lattice_by_name(s),
        Value::Array(_) => Ok(Lattice::from_rows(&int_matrix(v)?)?),
        Value::Object(o) => {
            if let Some(g) = o.get("gram") {
                let l = Lattice::from_rows(&int_matrix(g)?)?;
                Ok(match o.get("name").and_then(Value::as_str) {
                    Some(n) => l.with_name(n),
                    None => l,
                })
            } else if let Some(n) = o.get("name").and_then(Value::as_str) {
                lattice_by_name(n)
            } else {
                Err(parse_err("lattice object needs `gram` or `name`"))
            }
        }
        _ => Err(parse_err(format!("cannot read a lattice from {v}"))),
    }
}

pub fn parse_rational(v: &Value) -> Result<BigRational, CliError> {
    match v {
        Value::String(s) => parse_rat(s).ok_or_else(|| parse_err(format!("bad rational `{s}`"))),
        Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(n.as_i64().unwrap().into())),
        _ => Err(parse_err(format!("expected a rational string, got {v}"))),
    }
}

pub fn parse_rational_vec(v: &Value) -> Result<Vec<BigRational>, CliError> {
    v.as_array().ok_or_else(|| parse_err("expected an array of rationals"))?.iter().map(parse_rational).collect()
}

/// `[re, im]` or a real number.
pub fn parse_complex(v: &Value) -> Result<Complex64, CliError> {
    if let Some(x) = v.as_f64() {
        return Ok(Complex64::new(x, 0.0));
    }
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
            _ => Err(parse_err(format!("bad complex {v}"))),
        },
        _ => Err(parse_err(format!("expected [re, im], got {v}"))),
    }
}

/// `"re,im"` as given on the command line.
pub fn parse_tau(s: &str) -> Result<Complex64, CliError> {
    let (re, im) = s.split_once(',').ok_or_else(|| parse_err(format!("expected `re,im`, got `{s}`")))?;
    let re: f64 = re.trim().parse().map_err(|_| parse_err(format!("bad real part `{re}`")))?;
    let im: f64 = im.trim().parse().map_err(|_| parse_err(format!("bad imaginary part `{im}`")))?;
    Ok(Complex64::new(re, im))
}

/// Columns of a primitive basis: `[[…], …]` or `{"basis": …}`.
pub fn parse_sublattice(l: &Lattice, v: &Value) -> Result<Sublattice, CliError> {
    let cols = match v {
        Value::Object(o) => o.get("basis").ok_or_else(|| parse_err("sublattice object needs `basis`"))?,
        _ => v,
    };
    Ok(Sublattice::from_cols(l, &int_matrix(cols)?)?)
}

/// `null` or `"definite"` for a definite lattice, otherwise
/// `{"span_plus": [[rational, …], …]}` with columns spanning `v₊`.
pub fn parse_point(l: &Lattice, v: Option<&Value>) -> Result<GrassmannPoint, CliError> {
    match v {
        None | Some(Value::Null) => Ok(GrassmannPoint::definite(l)?),
        Some(Value::String(s)) if s == "definite" => Ok(GrassmannPoint::definite(l)?),
        Some(Value::Object(o)) => {
            let span = o.get("span_plus").ok_or_else(|| parse_err("point object needs `span_plus`"))?;
            let cols: Vec<Vec<BigRational>> = span
                .as_array()
                .ok_or_else(|| parse_err("`span_plus` must be an array of columns"))?
                .iter()
                .map(parse_rational_vec)
                .collect::<Result<_, _>>()?;
            let m = QMatrix::from_cols(l.rank(), &cols).ok_or_else(|| parse_err("`span_plus` columns have the wrong length"))?;
            Ok(GrassmannPoint::new(l, &m)?)
        }
        Some(other) => Err(parse_err(format!("cannot read a Grassmannian point from {other}"))),
    }
}

/// `null` for `p = 1`, otherwise `{"terms": [{"exps": […], "coef": [re, im]}], "degrees": [d₊, d₋]}`
/// with variables ordered `(x₊, x₋)` in the adapted basis.
pub fn parse_poly(v: Option<&Value>, b_plus: usize, b_minus: usize) -> Result<HomogeneousPolynomial, CliError> {
    let n = b_plus + b_minus;
    let o = match v {
        None | Some(Value::Null) => return Ok(HomogeneousPolynomial::one(b_plus, b_minus)),
        Some(Value::Object(o)) => o,
        Some(other) => return Err(parse_err(format!("cannot read a polynomial from {other}"))),
    };
    let terms = o.get("terms").and_then(Value::as_array).ok_or_else(|| parse_err("polynomial needs `terms`"))?;
    let mut list = Vec::new();
    for t in terms {
        let exps: Vec<u32> = t
            .get("exps")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err("term needs `exps`"))?
            .iter()
            .map(|x| x.as_u64().map(|e| e as u32).ok_or_else(|| parse_err("exponents must be non-negative integers")))
            .collect::<Result<_, _>>()?;
        let coef = parse_complex(t.get("coef").ok_or_else(|| parse_err("term needs `coef`"))?)?;
        list.push((exps, coef));
    }
    let p = Polynomial::from_terms(n, list)?;
    match o.get("degrees") {
        Some(d) => {
            let d = d.as_array().ok_or_else(|| parse_err("`degrees` must be [d+, d-]"))?;
            let get = |i: usize| d.get(i).and_then(Value::as_u64).map(|x| x as u32);
            match (get(0), get(1)) {
                (Some(a), Some(b)) => Ok(HomogeneousPolynomial::new(p, b_plus, (a, b))?),
                _ => Err(parse_err("`degrees` must be [d+, d-]")),
            }
        }
        None => Ok(HomogeneousPolynomial::infer(p, b_plus)?),
    }
}

/// `null` for `(0, 0)`, otherwise `{"alpha": […], "beta": […]}`.
pub fn parse_pair(v: Option<&Value>, n: usize) -> Result<VectorPair, CliError> {
    match v {
        None | Some(Value::Null) => Ok(VectorPair::zero(n)),
        Some(Value::Object(o)) => {
            let get = |k: &str| match o.get(k) {
                Some(x) => parse_rational_vec(x),
                None => Ok(vec![BigRational::from_integer(0.into()); n]),
            };
            let (a, b) = (get("alpha")?, get("beta")?);
            if a.len() != n || b.len() != n {
                return Err(parse_err(format!("pair vectors must have length {n}")));
            }
            Ok(VectorPair::new(a, b)?)
        }
        Some(other) => Err(parse_err(format!("cannot read a vector pair from {other}"))),
    }
}

/// `{"lattice": …, "weight": "p/q", "terms": [{"coset": […], "exp": "p/q", "coef": [re, im]}]}`.
pub fn parse_form(v: &Value) -> Result<QExpansionForm, CliError> {
    let o = v.as_object().ok_or_else(|| parse_err("form must be an object"))?;
    let l = parse_lattice(o.get("lattice").ok_or_else(|| parse_err("form needs `lattice`"))?)?;
    let weight = parse_rational(o.get("weight").ok_or_else(|| parse_err("form needs `weight`"))?)?;
    let d = l.disc();
    let mut terms = Vec::new();
    for t in o.get("terms").and_then(Value::as_array).ok_or_else(|| parse_err("form needs `terms`"))? {
        let coset: Vec<u64> = t
            .get("coset")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err("term needs `coset`"))?
            .iter()
            .map(|x| x.as_u64().ok_or_else(|| parse_err("coset coordinates must be non-negative integers")))
            .collect::<Result<_, _>>()?;
        if coset.len() != d.divisors().len() || coset.iter().zip(d.divisors()).any(|(x, m)| x >= m) {
            return Err(parse_err(format!("coset {coset:?} is not in a group with divisors {:?}", d.divisors())));
        }
        let idx = d.index_of(&DiscElement::new(coset));
        let ex = parse_rational(t.get("exp").ok_or_else(|| parse_err("term needs `exp`"))?)?;
        let coef = parse_complex(t.get("coef").ok_or_else(|| parse_err("term needs `coef`"))?)?;
        terms.push((idx, ex, coef));
    }
    Ok(QExpansionForm::new(&l, weight, terms)?)
}

/// Inline JSON, `@path` for a file, or a bare word taken as a string.
pub fn json_arg(s: &str) -> Result<Value, CliError> {
    if let Some(path) = s.strip_prefix('@') {
        let text = std::fs::read_to_string(path)?;
        return serde_json::from_str(&text).map_err(|e| parse_err(format!("{path}: {e}")));
    }
    Ok(serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn names() {
        let l = lattice_by_name("A1+A1(-1)").unwrap();
        assert_eq!(l.signature(), (1, 1));
        assert_eq!(lattice_by_name("<4>").unwrap().disc().len(), 4);
        assert!(lattice_by_name("E8").unwrap().is_unimodular());
        assert!(matches!(lattice_by_name("B7"), Err(CliError::Parse(_))));
    }

    #[test]
    fn form_round_values() {
        let f = parse_form(&json!({
            "lattice": "A1",
            "weight": "-1/2",
            "terms": [{"coset": [1], "exp": "-1/4", "coef": [1.0, 0.0]}, {"coset": [0], "exp": "0", "coef": 2.0}]
        }))
        .unwrap();
        assert_eq!(f.terms().len(), 2);
        let bad = parse_form(&json!({"lattice": "A1", "weight": "0", "terms": [{"coset": [1], "exp": "1/4", "coef": 1.0}]}));
        assert!(matches!(bad, Err(CliError::Core(seesaw_core::Error::ExponentConvention { .. }))));
    }

    #[test]
    fn points_and_polys() {
        let l = lattice_by_name("II11").unwrap();
        let v = parse_point(&l, Some(&json!({"span_plus": [["1", "2"]]}))).unwrap();
        assert_eq!((v.b_plus(), v.b_minus()), (1, 1));
        let p = parse_poly(Some(&json!({"terms": [{"exps": [1, 0], "coef": [1.0, 0.0]}]})), 1, 1).unwrap();
        assert_eq!(p.degrees(), (1, 0));
        assert_eq!(parse_tau("0.1, 1.5").unwrap(), Complex64::new(0.1, 1.5));
        assert!(parse_pair(Some(&json!({"alpha": ["1/2"]})), 2).is_err());
    }
}
