//! Theta contraction `Θ_{(L,M)}(F) = ⟨Θ_{L,M}, F⟩_L`, its explicit q-series form,
//! the restriction identity at integrand level and a naive lift diagnostic.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::disc::{DiscElement, DiscriminantGroup};
use crate::error::{Error, Result};
use crate::grassmann::GrassmannPoint;
use crate::lattice::{Lattice, OverlatticeEmbedding, Sublattice};
use crate::linalg::{format_rat, rat, rat_to_f64};
use crate::poly::HomogeneousPolynomial;
use crate::repvec::{IndexSpace, RepVector};
use crate::seesaw::{Residual, SplitSetup};
use crate::theta::{check_tau, theta_lm_direct, ThetaSeries, ThetaValue, VectorPair};

/// Finite q-expansion `Σ c(γ, e) qᵉ e*_γ` of a `ρ_L*`-valued form.
///
/// Exponents obey `e ≡ -q(γ) mod 1`; this is checked on construction.
#[derive(Clone, Debug)]
pub struct QExpansionForm {
    lattice: Lattice,
    dual: Arc<DiscriminantGroup>,
    weight: BigRational,
    terms: BTreeMap<(usize, BigRational), Complex64>,
}

impl QExpansionForm {
    pub fn new(
        lattice: &Lattice,
        weight: BigRational,
        terms: impl IntoIterator<Item = (usize, BigRational, Complex64)>,
    ) -> Result<Self> {
        let dual = Arc::new(lattice.disc().negated());
        Self::with_dual(lattice, dual, weight, terms)
    }

    /// As [`QExpansionForm::new`], reusing an existing `D_{L(-1)}`.
    pub fn with_dual(
        lattice: &Lattice,
        dual: Arc<DiscriminantGroup>,
        weight: BigRational,
        terms: impl IntoIterator<Item = (usize, BigRational, Complex64)>,
    ) -> Result<Self> {
        let d = lattice.disc();
        if !dual.is_dual_of(d) {
            return Err(Error::IndexMismatch("form space is not D_{L(-1)}".into()));
        }
        let mut map: BTreeMap<(usize, BigRational), Complex64> = BTreeMap::new();
        for (g, ex, c) in terms {
            if g >= d.len() {
                return Err(Error::IndexMismatch(format!("coset index {g} out of range {}", d.len())));
            }
            let x = d.element(g);
            if !(&ex + d.q(&x)).is_integer() {
                return Err(Error::ExponentConvention { coset: x.coords, exp: format_rat(&ex) });
            }
            *map.entry((g, ex)).or_default() += c;
        }
        Ok(QExpansionForm { lattice: lattice.clone(), dual, weight, terms: map })
    }

    /// The constant scalar form `c` on a unimodular lattice.
    pub fn constant(lattice: &Lattice, weight: BigRational, c: Complex64) -> Result<Self> {
        Self::new(lattice, weight, [(0, BigRational::zero(), c)])
    }

    pub fn zero(lattice: &Lattice, weight: BigRational) -> Self {
        Self::new(lattice, weight, []).expect("empty form")
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn dual(&self) -> &Arc<DiscriminantGroup> {
        &self.dual
    }

    pub fn weight(&self) -> &BigRational {
        &self.weight
    }

    pub fn terms(&self) -> &BTreeMap<(usize, BigRational), Complex64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.norm() == 0.0)
    }

    /// Least common denominator of the exponents.
    pub fn exponent_denominator(&self) -> BigInt {
        self.terms.keys().fold(BigInt::one(), |acc, (_, e)| acc.lcm(e.denom()))
    }

    pub fn min_exponent(&self) -> Option<BigRational> {
        self.terms.keys().map(|(_, e)| e.clone()).min()
    }

    pub fn space(&self) -> IndexSpace {
        IndexSpace::single(&self.dual)
    }

    pub fn evaluate(&self, tau: Complex64) -> RepVector {
        let mut v = RepVector::zeros(self.space());
        let two_pi_i_tau = Complex64::new(0.0, 2.0 * std::f64::consts::PI) * tau;
        for ((g, ex), c) in &self.terms {
            v.add_at(&[*g], c * (two_pi_i_tau * rat_to_f64(ex)).exp());
        }
        v
    }

    /// Largest coefficient difference, or `None` when the supports differ.
    pub fn max_coeff_diff(&self, other: &QExpansionForm) -> Option<f64> {
        let keys_a: Vec<_> = self.terms.iter().filter(|(_, c)| c.norm() > 0.0).map(|(k, _)| k).collect();
        let keys_b: Vec<_> = other.terms.iter().filter(|(_, c)| c.norm() > 0.0).map(|(k, _)| k).collect();
        if keys_a != keys_b {
            return None;
        }
        Some(keys_a.iter().map(|k| (self.terms[*k] - other.terms[*k]).norm()).fold(0.0, f64::max))
    }

    /// Drops terms with exponent above `cutoff`.
    pub fn truncate(&self, cutoff: &BigRational) -> QExpansionForm {
        let mut out = self.clone();
        out.terms.retain(|(_, e), _| e <= cutoff);
        out
    }
}

impl PartialEq for QExpansionForm {
    fn eq(&self, other: &Self) -> bool {
        self.lattice.gram() == other.lattice.gram()
            && self.weight == other.weight
            && self.terms == other.terms
            && self.dual.same_form(&other.dual)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContractionResult {
    /// Valued in `C[D_{M(-1)}]`.
    pub form: QExpansionForm,
    pub weight: BigRational,
    /// Coefficients with exponent at most this are complete.
    pub complete_below: BigRational,
}

/// `⟨Θ_{L,M}(τ; (α, β); u⊥, p), F(τ)⟩_L`, over `D_{M(-1)}`.
pub fn contract_pointwise_shifted(
    f: &RepVector,
    m: &Sublattice,
    u_perp: &GrassmannPoint,
    p: &HomogeneousPolynomial,
    pair: &VectorPair,
    tau: Complex64,
    bound: f64,
) -> Result<ThetaValue> {
    let tlm = theta_lm_direct(m, tau, u_perp, p, pair, bound)?;
    let value = tlm.value.pair_axes(0, f, 0)?;
    let n = m.ambient().disc().len() as f64;
    Ok(ThetaValue { value, tau, bound, tail: n * f.norm_inf() * tlm.tail })
}

pub fn contract_pointwise(
    f: &RepVector,
    m: &Sublattice,
    u_perp: &GrassmannPoint,
    p: &HomogeneousPolynomial,
    tau: Complex64,
    bound: f64,
) -> Result<ThetaValue> {
    contract_pointwise_shifted(f, m, u_perp, p, &VectorPair::zero(m.ambient().rank()), tau, bound)
}

fn check_form_lattice(f: &QExpansionForm, l: &Lattice) -> Result<()> {
    if f.lattice().gram() != l.gram() {
        return Err(Error::IndexMismatch("form is not over the ambient lattice".into()));
    }
    Ok(())
}

pub fn contract_form_pointwise(
    f: &QExpansionForm,
    m: &Sublattice,
    u_perp: &GrassmannPoint,
    p: &HomogeneousPolynomial,
    tau: Complex64,
    bound: f64,
) -> Result<ThetaValue> {
    check_form_lattice(f, m.ambient())?;
    check_tau(tau)?;
    contract_pointwise(&f.evaluate(tau), m, u_perp, p, tau, bound)
}

/// Weight of a Siegel theta function for signature `sig` and degree `deg`.
fn theta_weight(sig: (usize, usize), deg: (u32, u32)) -> BigRational {
    rat(sig.0 as i64 - sig.1 as i64, 2) + rat(deg.0 as i64 - deg.1 as i64, 1)
}

/// Split of an index of `D_M ⊕ D_{M⊥}` into its two parts.
fn split_index(i: usize, n_perp: usize) -> (usize, usize) {
    (i / n_perp, i % n_perp)
}

/// Holomorphic q-series of `θ_{M⊥}` per coset, truncated at exponent `bound`.
fn perp_q_series(
    mp: &Sublattice,
    p: &HomogeneousPolynomial,
    bound: f64,
) -> Result<Vec<BTreeMap<BigRational, Complex64>>> {
    let point = GrassmannPoint::definite(mp.lattice())?;
    let series = ThetaSeries::siegel(mp.lattice(), &point, p, &VectorPair::zero(mp.rank()), bound)?;
    let terms = series.q_series().ok_or(Error::PolynomialNotHarmonic)?;
    let mut out = vec![BTreeMap::new(); mp.lattice().disc().len()];
    for (idx, a, c) in terms {
        *out[idx[0]].entry(a).or_default() += c;
    }
    Ok(out)
}

/// Exact q-series of `Θ_{(L,M)}(F)` for definite `M⊥` and harmonic `p`:
///
/// `Σ_{α ∈ H_M⊥} Σ_{β ∈ H_{M⊥}⊥} Σ_{γ ∈ H} f_{L+α+β} θ_{M⊥+β+γ_{M⊥}} e*_{α+γ_M}`,
///
/// using `H⊥ = H_M⊥ ⊕ H_{M⊥}⊥ ⊕ H`, which needs `H_M`, `H_{M⊥}` non-degenerate.
pub fn contract_symbolic(
    f: &QExpansionForm,
    m: &Sublattice,
    p: &HomogeneousPolynomial,
    bound: f64,
) -> Result<ContractionResult> {
    check_form_lattice(f, m.ambient())?;
    let mp = m.orthogonal_complement()?;
    if !mp.lattice().is_positive_definite() {
        return Err(Error::ComplementNotDefinite);
    }
    if p.b_plus() != mp.rank() || p.b_minus() != 0 {
        return Err(Error::IndexMismatch("polynomial variables do not match M⊥".into()));
    }
    if !p.poly().is_harmonic() {
        return Err(Error::PolynomialNotHarmonic);
    }
    let emb = OverlatticeEmbedding::for_orthogonal_sum(m, &mp)?;
    let (dm, dp) = (m.lattice().disc(), mp.lattice().disc());
    let np = dp.len();
    let h: Vec<(usize, usize)> = emb
        .subgroup()
        .elements()
        .iter()
        .map(|x| split_index(emb.small().disc().index_of(x), np))
        .collect();
    let dedup = |v: Vec<usize>, d: &DiscriminantGroup| -> Vec<DiscElement> {
        let mut v = v;
        v.sort();
        v.dedup();
        v.into_iter().map(|i| d.element(i)).collect()
    };
    let h_m = dedup(h.iter().map(|x| x.0).collect(), dm);
    let h_p = dedup(h.iter().map(|x| x.1).collect(), dp);
    if !dm.is_nondegenerate_on(&h_m) || !dp.is_nondegenerate_on(&h_p) {
        return Err(Error::GlueDegenerate);
    }
    let alphas = dm.orthogonal_of(&h_m)?;
    let betas = dp.orthogonal_of(&h_p)?;
    if alphas.len() * betas.len() * h.len() != emb.subgroup().h_perp()?.len() {
        return Err(Error::GlueDegenerate);
    }

    let theta = perp_q_series(&mp, p, bound)?;
    let mut f_by_coset: BTreeMap<usize, Vec<(&BigRational, &Complex64)>> = BTreeMap::new();
    for ((g, ex), c) in f.terms() {
        f_by_coset.entry(*g).or_default().push((ex, c));
    }
    let mut out: BTreeMap<(usize, BigRational), Complex64> = BTreeMap::new();
    for alpha in &alphas {
        let ia = dm.index_of(alpha);
        for beta in &betas {
            let ib = dp.index_of(beta);
            let gamma_l = emb.coset_map()[ia * np + ib].expect("α + β lies in H⊥");
            let Some(fs) = f_by_coset.get(&gamma_l) else { continue };
            for &(hm, hp) in &h {
                let delta = dm.index_of(&dm.add(alpha, &dm.element(hm)));
                let nu = dp.index_of(&dp.add(beta, &dp.element(hp)));
                for (e1, c1) in fs {
                    for (e2, c2) in &theta[nu] {
                        *out.entry((delta, *e1 + e2)).or_default() += *c1 * c2;
                    }
                }
            }
        }
    }
    let weight = f.weight() + theta_weight(mp.lattice().signature(), p.degrees());
    let dual = Arc::new(dm.negated());
    let form = QExpansionForm::with_dual(m.lattice(), dual, weight.clone(), out.into_iter().map(|((g, e), c)| (g, e, c)))?;
    let b = BigRational::from_float(bound).expect("finite bound");
    let complete_below = f.min_exponent().map_or(b.clone(), |e| e + &b);
    Ok(ContractionResult { form, weight, complete_below })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairValue {
    pub value: Complex64,
    pub tail: f64,
}

/// `⟨Θ_L(τ; (α, β); v, p_v), F(τ)⟩_L`.
pub fn integrand_pair(
    f: &RepVector,
    l: &Lattice,
    v: &GrassmannPoint,
    p: &HomogeneousPolynomial,
    pair: &VectorPair,
    tau: Complex64,
    bound: f64,
) -> Result<PairValue> {
    let t = crate::theta::siegel_theta(l, tau, v, p, pair, bound)?;
    pair_with(&t, f)
}

fn pair_with(t: &ThetaValue, f: &RepVector) -> Result<PairValue> {
    let value = t.value.pair(f)?.scalar().ok_or_else(|| Error::IndexMismatch("pairing is not scalar".into()))?;
    Ok(PairValue { value, tail: t.value.data().len() as f64 * f.norm_inf() * t.tail })
}

/// Largest `|⟨Θ_L, F⟩_L - ⟨Θ_M, Θ_{(L,M)}(F)⟩_M|` over the samples.
pub fn restriction_identity_check<F>(
    f: F,
    s: &SplitSetup,
    pair: &VectorPair,
    taus: &[Complex64],
    bound: f64,
) -> Result<Residual>
where
    F: Fn(Complex64) -> Result<RepVector>,
{
    s.verify()?;
    let mut worst = Residual { residual: 0.0, tail: 0.0 };
    for &tau in taus {
        let fv = f(tau)?;
        let lhs = pair_with(&s.theta_l(tau, pair, bound)?, &fv)?;
        let c = contract_pointwise_shifted(&fv, &s.m, &s.u_perp, &s.p_perp, &s.pair_perp_ambient(pair), tau, bound)?;
        let tm = s.theta_m(tau, pair, bound)?;
        let rhs = pair_with(&tm, &c.value)?;
        let n = tm.value.data().len() as f64;
        let tail = lhs.tail + rhs.tail + n * tm.value.norm_inf() * c.tail;
        worst.residual = worst.residual.max((lhs.value - rhs.value).norm());
        worst.tail = worst.tail.max(tail);
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LiftEstimate {
    pub value: Complex64,
    /// `|I(n) - I(n/2)|`.
    pub error: f64,
}

/// Midpoint rule for `∫_{F_Y} g(τ) dx dy / y²` on `n × n` cells, with
/// `F_Y = {|x| ≤ 1/2, |τ| ≥ 1, y ≤ Y}`.
pub fn naive_lift_with<G>(g: G, y_max: f64, grid_n: usize) -> Result<LiftEstimate>
where
    G: Fn(Complex64) -> Result<Complex64>,
{
    if grid_n < 2 || y_max <= 1.0 {
        return Err(Error::IndexMismatch(format!("need grid_n ≥ 2 and Y > 1, got {grid_n}, {y_max}")));
    }
    let rule = |n: usize| -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        let hx = 1.0 / n as f64;
        for i in 0..n {
            let x = -0.5 + (i as f64 + 0.5) * hx;
            let y0 = (1.0 - x * x).sqrt();
            let hy = (y_max - y0) / n as f64;
            for j in 0..n {
                let y = y0 + (j as f64 + 0.5) * hy;
                total += g(Complex64::new(x, y))? * (hx * hy / (y * y));
            }
        }
        Ok(total)
    };
    let fine = rule(grid_n)?;
    let coarse = rule(grid_n / 2)?;
    Ok(LiftEstimate { value: fine, error: (fine - coarse).norm() })
}

/// Diagnostic truncated lift of `F` at `v`; no regularization in `s`.
pub fn naive_truncated_lift<F>(
    f: F,
    l: &Lattice,
    v: &GrassmannPoint,
    p: &HomogeneousPolynomial,
    y_max: f64,
    grid_n: usize,
    bound: f64,
) -> Result<LiftEstimate>
where
    F: Fn(Complex64) -> Result<RepVector>,
{
    let series = ThetaSeries::siegel(l, v, p, &VectorPair::zero(l.rank()), bound)?;
    naive_lift_with(|tau| Ok(pair_with(&series.evaluate(tau)?, &f(tau)?)?.value), y_max, grid_n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weights {
    /// Weight of `Θ_{L,M}`.
    pub theta_lm: BigRational,
    /// Weight of `Θ_{(L,M)}(F)`.
    pub contraction: BigRational,
    /// Weight `F` must have.
    pub f_expected: BigRational,
}

/// Weights for `L` of signature `b`, `M` of signature `c`, `p_v` of degree `m`
/// and `p_u` of degree `n`.
pub fn weight_bookkeeping(
    f_weight: Option<&BigRational>,
    b: (usize, usize),
    c: (usize, usize),
    m: (u32, u32),
    n: (u32, u32),
) -> Result<Weights> {
    if c.0 > b.0 || c.1 > b.1 {
        return Err(Error::InconsistentDegrees(format!("signature {c:?} does not fit in {b:?}")));
    }
    if n.0 > m.0 || n.1 > m.1 {
        return Err(Error::InconsistentDegrees(format!("degree {n:?} exceeds {m:?}")));
    }
    let theta_lm = theta_weight((b.0 - c.0, b.1 - c.1), (m.0 - n.0, m.1 - n.1));
    let contraction = -theta_weight(c, n);
    let f_expected = -theta_weight(b, m);
    if let Some(w) = f_weight {
        if *w != f_expected {
            return Err(Error::InconsistentDegrees(format!(
                "F has weight {}, expected {}",
                format_rat(w),
                format_rat(&f_expected)
            )));
        }
    }
    debug_assert_eq!(&f_expected + &theta_lm, contraction);
    Ok(Weights { theta_lm, contraction, f_expected })
}
