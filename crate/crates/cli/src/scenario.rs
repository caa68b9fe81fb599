//! Scenario files: a lattice configuration plus a list of named checks.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use seesaw_core::contraction::{
    contract_form_pointwise, contract_pointwise, contract_symbolic, naive_lift_with, naive_truncated_lift,
    restriction_identity_check, weight_bookkeeping, QExpansionForm,
};
use seesaw_core::disc::e;
use seesaw_core::metaplectic::{Generator, MetaplecticElement};
use seesaw_core::repvec::{IndexSpace, RepVector};
use seesaw_core::seesaw::{exact_coordinate_identity, exppair_residuals, pair_theta_residual, sep_theta_residual, SplitSetup};
use seesaw_core::theta::{modularity_defect, siegel_theta, theta_lm_composed, theta_lm_direct, VectorPair};
use seesaw_core::weil::{down_arrow, down_up_composition, max_abs_diff, rho_apply, rho_generator, up_arrow, CMatrix};
use seesaw_core::{HomogeneousPolynomial, Lattice, OverlatticeEmbedding, Sublattice};

use crate::spec::{parse_complex, parse_form, parse_lattice, parse_pair, parse_point, parse_poly, parse_sublattice};
use crate::CliError;

pub const CHECKS: &[&str] = &[
    "arrows",
    "contraction",
    "exact_coordinates",
    "exppair",
    "milgram",
    "naive_lift",
    "pair_theta",
    "restriction",
    "sep_theta",
    "theta_lm_cross",
    "theta_lm_modularity",
    "theta_modularity",
    "weights",
    "weil_relations",
];

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub lattice: Lattice,
    pub setup: SplitSetup,
    pub form: Option<QExpansionForm>,
    pub pair: VectorPair,
    pub bound: f64,
    pub tolerance: f64,
    pub taus: Vec<Complex64>,
    pub checks: Vec<String>,
    pub lift_y_max: f64,
    pub lift_grid: usize,
}

/// `n` points with `|x| ≤ 1/2`, `0.8 ≤ y ≤ 1.6` from a fixed seed.
pub fn sample_taus(n: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a5);
    (0..n).map(|_| Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(0.8..1.6))).collect()
}

fn field<'a>(o: &'a serde_json::Map<String, Value>, k: &str) -> Result<&'a Value, CliError> {
    o.get(k).ok_or_else(|| CliError::Parse(format!("scenario needs `{k}`")))
}

fn number(o: &serde_json::Map<String, Value>, k: &str, default: f64) -> Result<f64, CliError> {
    match o.get(k) {
        None => Ok(default),
        Some(v) => v.as_f64().ok_or_else(|| CliError::Parse(format!("`{k}` must be a number"))),
    }
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        let v: Value =
            serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self, CliError> {
        let o = v.as_object().ok_or_else(|| CliError::Parse("scenario must be an object".into()))?;
        let name = o.get("name").and_then(Value::as_str).unwrap_or("scenario").to_string();
        let lattice = parse_lattice(field(o, "lattice")?)?;
        let m = parse_sublattice(&lattice, field(o, "sublattice")?)?;
        let mp = m.orthogonal_complement()?;
        let u = parse_point(m.lattice(), o.get("u"))?;
        let u_perp = parse_point(mp.lattice(), o.get("u_perp"))?;
        let p_u = parse_poly(o.get("p_u"), u.b_plus(), u.b_minus())?;
        let p_perp = parse_poly(o.get("p_perp"), u_perp.b_plus(), u_perp.b_minus())?;
        let setup = SplitSetup::new(&m, &u, &u_perp, &p_u, &p_perp)?;
        let form = o.get("form").map(parse_form).transpose()?;
        let pair = parse_pair(o.get("pair"), lattice.rank())?;
        let taus = match o.get("tau_samples") {
            None => sample_taus(5),
            Some(Value::Number(n)) => sample_taus(n.as_u64().ok_or_else(|| CliError::Parse("bad `tau_samples`".into()))? as usize),
            Some(Value::Array(a)) => a.iter().map(parse_complex).collect::<Result<_, _>>()?,
            Some(other) => return Err(CliError::Parse(format!("bad `tau_samples` {other}"))),
        };
        let checks: Vec<String> = match o.get("checks") {
            Some(Value::Array(a)) => a
                .iter()
                .map(|c| c.as_str().map(str::to_string).ok_or_else(|| CliError::Parse("check names must be strings".into())))
                .collect::<Result<_, _>>()?,
            _ => return Err(CliError::Parse("scenario needs a `checks` array".into())),
        };
        for c in &checks {
            if !CHECKS.contains(&c.as_str()) {
                return Err(CliError::UnknownCheck(c.clone()));
            }
        }
        Ok(Scenario {
            name,
            lattice,
            setup,
            form,
            pair,
            bound: number(o, "bound", 16.0)?,
            tolerance: number(o, "tolerance", 1e-8)?,
            taus,
            checks,
            lift_y_max: number(o, "lift_y_max", 3.0)?,
            lift_grid: number(o, "lift_grid", 32.0)? as usize,
        })
    }

    fn form(&self) -> Result<&QExpansionForm, CliError> {
        self.form.as_ref().ok_or_else(|| CliError::Parse("this check needs a `form`".into()))
    }

    fn m(&self) -> &Sublattice {
        &self.setup.m
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckReport {
    pub residual: f64,
    /// Truncation bound; counted against the tolerance too.
    pub tail: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckReport {
    fn new(residual: f64, tail: f64, tolerance: f64) -> Self {
        CheckReport { residual, tail, tolerance, pass: residual < tolerance && tail < tolerance }
    }

    pub fn to_json(&self) -> Value {
        json!({"residual": self.residual, "tail": self.tail, "tolerance": self.tolerance, "pass": self.pass})
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub name: String,
    pub checks: BTreeMap<String, CheckReport>,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        let checks: serde_json::Map<String, Value> = self.checks.iter().map(|(k, v)| (k.clone(), v.to_json())).collect();
        json!({"scenario": self.name, "checks": checks, "pass": self.pass()})
    }
}

/// Residual and tail, both maximised over the samples.
#[derive(Default)]
struct Acc {
    residual: f64,
    tail: f64,
}

impl Acc {
    fn add(&mut self, residual: f64, tail: f64) {
        self.residual = self.residual.max(residual);
        self.tail = self.tail.max(tail);
    }
}

fn weil_relations(l: &Lattice) -> Result<f64, CliError> {
    let d = l.disc();
    let s = rho_generator(d, Generator::S)?;
    let t = rho_generator(d, Generator::T)?;
    let z = rho_generator(d, Generator::Z)?;
    let id = CMatrix::identity(d.len(), d.len());
    let st = &s * &t;
    Ok([
        max_abs_diff(&(&s * &s), &z),
        max_abs_diff(&(&st * &st * &st), &z),
        max_abs_diff(&(&z * &z * &z * &z), &id),
        max_abs_diff(&(s.adjoint() * &s), &id),
        max_abs_diff(&(t.adjoint() * &t), &id),
    ]
    .into_iter()
    .fold(0.0, f64::max))
}

fn milgram(l: &Lattice) -> Result<f64, CliError> {
    let d = l.disc();
    let expected = (d.order() as f64).sqrt() * e((l.sig_plus() as f64 - l.sig_minus() as f64) / 8.0);
    Ok((d.gauss_sum()? - expected).norm())
}

fn arrows(emb: &OverlatticeEmbedding) -> Result<f64, CliError> {
    let mut worst: f64 = 0.0;
    let (big, small) = (emb.big().disc().clone(), emb.small().disc().clone());
    for g in [MetaplecticElement::t(), MetaplecticElement::s()] {
        for i in 0..big.len() {
            let v = RepVector::basis(IndexSpace::single(&big), &[i]);
            let a = rho_apply(&g, &up_arrow(emb, &v, 0)?)?;
            let b = up_arrow(emb, &rho_apply(&g, &v)?, 0)?;
            worst = worst.max(a.max_diff(&b)?);
        }
        for i in 0..small.len() {
            let w = RepVector::basis(IndexSpace::single(&small), &[i]);
            let a = down_arrow(emb, &rho_apply(&g, &w)?, 0)?;
            let b = rho_apply(&g, &down_arrow(emb, &w, 0)?)?;
            worst = worst.max(a.max_diff(&b)?);
        }
    }
    let comp = down_up_composition(emb);
    for (i, row) in comp.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let want = if i == j { emb.index() as i64 } else { 0 };
            worst = worst.max((x - want).abs() as f64);
        }
    }
    Ok(worst)
}

fn weight_exponent(sig: (usize, usize), deg: (u32, u32)) -> i64 {
    sig.0 as i64 - sig.1 as i64 + 2 * (deg.0 as i64 - deg.1 as i64)
}

fn random_dual_vector(l: &Lattice) -> RepVector {
    let mut rng = ChaCha8Rng::seed_from_u64(0x11);
    let space = IndexSpace::single(&std::sync::Arc::new(l.disc().negated()));
    let data = (0..space.len()).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    RepVector::from_data(space, data).expect("sized to the space")
}

fn definite_perp(s: &Scenario) -> Result<HomogeneousPolynomial, CliError> {
    if s.setup.u_perp.b_minus() != 0 {
        return Err(seesaw_core::Error::ComplementNotDefinite.into());
    }
    Ok(s.setup.p_perp.clone())
}

/// The pairing of `⟨Θ_L, F⟩` against `⟨Θ_M, Θ_{(L,M)}(F)⟩` over `F_Y`.
pub fn lift_pair(s: &Scenario) -> Result<(Complex64, Complex64, f64), CliError> {
    let f = s.form()?;
    let st = &s.setup;
    let fv = |t: Complex64| Ok(f.evaluate(t));
    let lhs = naive_truncated_lift(fv, &s.lattice, &st.v, &st.p_v, s.lift_y_max, s.lift_grid, s.bound)?;
    let rhs = naive_lift_with(
        |tau| {
            let c = contract_pointwise(&f.evaluate(tau), &st.m, &st.u_perp, &st.p_perp, tau, s.bound)?;
            let tm = siegel_theta(st.m.lattice(), tau, &st.u, &st.p_u, &VectorPair::zero(st.m.rank()), s.bound)?;
            tm.value.pair(&c.value)?.scalar().ok_or_else(|| seesaw_core::Error::IndexMismatch("non-scalar pairing".into()))
        },
        s.lift_y_max,
        s.lift_grid,
    )?;
    Ok((lhs.value, rhs.value, lhs.error.max(rhs.error)))
}

pub fn run_check(s: &Scenario, name: &str) -> Result<CheckReport, CliError> {
    let st = &s.setup;
    let mut acc = Acc::default();
    match name {
        "weil_relations" => {
            for l in [&s.lattice, st.m.lattice(), st.m_perp.lattice()] {
                acc.add(weil_relations(l)?, 0.0);
            }
        }
        "milgram" => {
            for l in [&s.lattice, st.m.lattice(), st.m_perp.lattice()] {
                acc.add(milgram(l)?, 0.0);
            }
        }
        "arrows" => acc.add(arrows(&st.emb)?, 0.0),
        "theta_modularity" => {
            let k = weight_exponent(s.lattice.signature(), st.p_v.degrees());
            let theta = |t: Complex64, q: &VectorPair| siegel_theta(&s.lattice, t, &st.v, &st.p_v, q, s.bound);
            for &tau in &s.taus {
                for g in [MetaplecticElement::t(), MetaplecticElement::s()] {
                    let d = modularity_defect(theta, &g, tau, &s.pair, k)?;
                    acc.add(d.defect, d.tail);
                }
            }
        }
        "theta_lm_cross" | "theta_lm_modularity" => {
            let perp_pair = st.pair_perp_ambient(&s.pair);
            let k = weight_exponent(st.m_perp.lattice().signature(), st.p_perp.degrees());
            let theta = |t: Complex64, q: &VectorPair| theta_lm_direct(s.m(), t, &st.u_perp, &st.p_perp, q, s.bound);
            for &tau in &s.taus {
                if name == "theta_lm_cross" {
                    let a = theta(tau, &perp_pair)?;
                    let b = theta_lm_composed(s.m(), tau, &st.u_perp, &st.p_perp, &perp_pair, s.bound)?;
                    acc.add(a.value.max_diff(&b.value)?, a.tail + b.tail);
                } else {
                    for g in [MetaplecticElement::t(), MetaplecticElement::s()] {
                        let d = modularity_defect(theta, &g, tau, &perp_pair, k)?;
                        acc.add(d.defect, d.tail);
                    }
                }
            }
        }
        "sep_theta" | "pair_theta" | "exppair" => {
            st.verify()?;
            for &tau in &s.taus {
                match name {
                    "sep_theta" => {
                        let r = sep_theta_residual(st, tau, &s.pair, s.bound)?;
                        acc.add(r.residual, r.tail);
                    }
                    "pair_theta" => {
                        let r = pair_theta_residual(st, tau, &s.pair, s.bound)?;
                        acc.add(r.residual, r.tail);
                    }
                    _ => {
                        let u = random_dual_vector(&s.lattice);
                        let (a, b) = exppair_residuals(st, tau, &s.pair, &u, s.bound)?;
                        acc.add(a.residual.max(b.residual), a.tail.max(b.tail));
                    }
                }
            }
        }
        "exact_coordinates" => {
            let (ok, _) = exact_coordinate_identity(st, s.bound)?;
            acc.add(if ok { 0.0 } else { 1.0 }, 0.0);
        }
        "contraction" => {
            let f = s.form()?;
            let p = definite_perp(s)?;
            let sym = contract_symbolic(f, s.m(), &p, s.bound)?;
            for &tau in &s.taus {
                let pt = contract_form_pointwise(f, s.m(), &st.u_perp, &p, tau, s.bound)?;
                acc.add(sym.form.evaluate(tau).max_diff(&pt.value)?, pt.tail);
            }
        }
        "restriction" => {
            let f = s.form()?;
            let r = restriction_identity_check(|t| Ok(f.evaluate(t)), st, &s.pair, &s.taus, s.bound)?;
            acc.add(r.residual, r.tail);
        }
        "naive_lift" => {
            // Only the excess over the quadrature error counts.
            let (a, b, err) = lift_pair(s)?;
            acc.add(((a - b).norm() - err).max(0.0), 0.0);
        }
        "weights" => {
            let l = &s.lattice;
            let fw = s.form.as_ref().map(|f| f.weight().clone());
            let ok = weight_bookkeeping(fw.as_ref(), l.signature(), st.m.lattice().signature(), st.p_v.degrees(), st.p_u.degrees())
                .map(|w| &w.f_expected + &w.theta_lm == w.contraction)
                .unwrap_or(false);
            acc.add(if ok { 0.0 } else { 1.0 }, 0.0);
        }
        other => return Err(CliError::UnknownCheck(other.to_string())),
    }
    Ok(CheckReport::new(acc.residual, acc.tail, s.tolerance))
}

/// Runs `names` (or every listed check) in name order.
pub fn run(s: &Scenario, names: Option<&[&str]>) -> Result<Report, CliError> {
    let mut checks = BTreeMap::new();
    let list: Vec<String> = match names {
        Some(n) => n.iter().map(|x| x.to_string()).collect(),
        None => s.checks.clone(),
    };
    for name in list {
        let r = run_check(s, &name)?;
        checks.insert(name, r);
    }
    Ok(Report { name: s.name.clone(), checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ii11() -> Value {
        json!({
            "name": "t",
            "lattice": "II11",
            "sublattice": [[1, -1]],
            "form": {"lattice": "II11", "weight": "0", "terms": [{"coset": [], "exp": "0", "coef": [1.0, 0.0]}]},
            "bound": 16,
            "tolerance": 1e-8,
            "tau_samples": 3,
            "checks": ["sep_theta", "pair_theta", "restriction", "weights", "contraction"]
        })
    }

    #[test]
    fn all_pass() {
        let s = Scenario::from_json(&ii11()).unwrap();
        let r = run(&s, None).unwrap();
        assert!(r.pass(), "{:?}", r.to_json());
    }

    #[test]
    fn unknown_check() {
        let mut v = ii11();
        v["checks"] = json!(["sep_theta", "frobnicate"]);
        assert!(matches!(Scenario::from_json(&v), Err(CliError::UnknownCheck(c)) if c == "frobnicate"));
    }

    #[test]
    fn zero_tolerance_fails() {
        let mut v = ii11();
        v["tolerance"] = json!(0.0);
        let r = run(&Scenario::from_json(&v).unwrap(), None).unwrap();
        assert!(!r.pass());
    }
}
