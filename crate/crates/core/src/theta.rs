//! Truncated Siegel theta functions `Θ_L(τ; (α, β); v, p)` and the mixed
//! functions `Θ_{L,M}(τ; (ξ, η); u⊥, p)`.
//!
//! Both are sums over an affine family `z = A y + z₀` (`y ∈ Zᵏ`) inside the
//! real span of some lattice `W` carrying a Grassmannian point `w`:
//! `W = L` with `A = I` for `Θ_L`, and `W = M⊥` with `z` the projection of
//! `L*/M` for `Θ_{L,M}`. A term is kept when `majorant(z + η) ≤ 2B`; the
//! polynomial factor is stored as its Laplacian series so one enumeration
//! serves every `τ`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};

use crate::disc::{e, e_rat, DiscElement, DiscriminantGroup};
use crate::enumerate::{fincke_pohst, max_vectors, ShellBound};
use crate::error::{Error, Result};
use crate::grassmann::GrassmannPoint;
use crate::lattice::{Lattice, OverlatticeEmbedding, Sublattice};
use crate::linalg::{qmat_to_f64, qvec_to_f64, rat, zmat_to_q, QMatrix};
use crate::metaplectic::MetaplecticElement;
use crate::poly::{HomogeneousPolynomial, Polynomial};
use crate::repvec::{identity_vector, IndexSpace, RepVector};
use crate::weil::{down_arrow, rho_apply};

/// The pair `(α; β) ∈ L_R²`, with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorPair {
    pub alpha: Vec<BigRational>,
    pub beta: Vec<BigRational>,
}

impl VectorPair {
    pub fn zero(n: usize) -> Self {
        VectorPair { alpha: vec![BigRational::zero(); n], beta: vec![BigRational::zero(); n] }
    }

    pub fn new(alpha: Vec<BigRational>, beta: Vec<BigRational>) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(Error::WrongDimension { expected: alpha.len(), got: beta.len() });
        }
        Ok(VectorPair { alpha, beta })
    }

    pub fn from_i64(alpha: &[(i64, i64)], beta: &[(i64, i64)]) -> Result<Self> {
        Self::new(alpha.iter().map(|&(n, d)| rat(n, d)).collect(), beta.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.iter().chain(&self.beta).all(Zero::is_zero)
    }

    /// `A(α; β) = (aα + bβ; cα + dβ)`.
    pub fn act(&self, g: &MetaplecticElement) -> Self {
        let lin = |s: i64, t: i64| -> Vec<BigRational> {
            let (s, t) = (BigRational::from_integer(s.into()), BigRational::from_integer(t.into()));
            self.alpha.iter().zip(&self.beta).map(|(a, b)| &s * a + &t * b).collect()
        };
        VectorPair { alpha: lin(g.a, g.b), beta: lin(g.c, g.d) }
    }

    /// Coordinates of the projections onto `M_R`, in the basis of `M`.
    pub fn project_onto(&self, m: &Sublattice) -> Self {
        VectorPair { alpha: m.coordinates(&self.alpha), beta: m.coordinates(&self.beta) }
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::WrongDimension { expected: n, got: self.dim() });
        }
        Ok(())
    }
}

pub fn check_tau(tau: Complex64) -> Result<()> {
    if tau.im > 0.0 && tau.re.is_finite() && tau.im.is_finite() {
        Ok(())
    } else {
        Err(Error::TauNotInUpperHalfPlane)
    }
}

/// One summand, with everything that does not depend on `τ` precomputed.
#[derive(Clone, Debug, PartialEq)]
pub struct TermRecord {
    /// Multi-index into the value space.
    pub index: Vec<usize>,
    /// Which affine family (a coset of `L*/L`) the term belongs to.
    pub group: usize,
    pub y: Vec<i64>,
    /// `(z + η)²_{w₊}/2` and `(z + η)²_{w₋}/2`.
    pub a: f64,
    pub b: f64,
    /// `-(z + η/2, α)`.
    pub phase: f64,
    /// `Δʲp/j!` at `z + η`, for `j = 0, 1, …`.
    pub poly_values: Vec<Complex64>,
}

impl TermRecord {
    pub fn majorant(&self) -> f64 {
        2.0 * (self.a - self.b)
    }

    /// `e^{-Δ/8πy}(p)(z + η) · e(τa + τ̄b - (z + η/2, α))`.
    pub fn evaluate(&self, tau: Complex64) -> Complex64 {
        let c = -1.0 / (8.0 * PI * tau.im);
        let mut f = Complex64::new(0.0, 0.0);
        let mut cj = 1.0;
        for v in &self.poly_values {
            f += v * cj;
            cj *= c;
        }
        f * e(tau.re * (self.a + self.b) + self.phase) * (-2.0 * PI * tau.im * (self.a - self.b)).exp()
    }
}

/// Exact data of a term, available when the Grassmannian point is rational.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactTerm {
    pub index: Vec<usize>,
    pub a: BigRational,
    pub b: BigRational,
    pub phase: BigRational,
}

#[derive(Clone, Debug)]
pub struct ThetaValue {
    pub value: RepVector,
    pub tau: Complex64,
    pub bound: f64,
    /// Certified bound on the sup-norm of the omitted part.
    pub tail: f64,
}

impl ThetaValue {
    pub fn space(&self) -> &IndexSpace {
        self.value.space()
    }
}

#[derive(Clone, Debug)]
struct Group {
    z0: Vec<BigRational>,
    index: Vec<usize>,
    /// `δ(y) = δ₀ + Σ yᵢ δᵢ` on one axis.
    varying: Option<Varying>,
}

#[derive(Clone, Debug)]
struct Varying {
    axis: usize,
    group: Arc<DiscriminantGroup>,
    base: DiscElement,
    steps: Vec<DiscElement>,
}

impl Varying {
    fn at(&self, y: &[i64]) -> usize {
        let mut x = self.base.clone();
        for (s, &k) in self.steps.iter().zip(y) {
            if k != 0 {
                x = self.group.add(&x, &self.group.mul(k, s));
            }
        }
        self.group.index_of(&x)
    }
}

/// A truncated theta series: its term set and the data needed for tails.
#[derive(Clone, Debug)]
pub struct ThetaSeries {
    space: IndexSpace,
    point: GrassmannPoint,
    a_map: QMatrix,
    groups: Vec<Group>,
    eta: Vec<BigRational>,
    alpha: Vec<BigRational>,
    /// `w₋/2 + deg₋ p`.
    y_exponent: BigRational,
    weight_exponent: i64,
    poly_norms: Vec<(f64, f64)>,
    shell: ShellBound,
    bound: f64,
    terms: Vec<TermRecord>,
}

fn check_poly(p: &HomogeneousPolynomial, w: &GrassmannPoint) -> Result<()> {
    if p.poly().nvars() != w.rank() {
        return Err(Error::WrongDimension { expected: w.rank(), got: p.poly().nvars() });
    }
    if p.b_plus() != w.b_plus() {
        return Err(Error::NonHomogeneousPolynomial);
    }
    if !p.poly().is_zero() && p.poly().bidegree(p.b_plus()) != Some(p.degrees()) {
        return Err(Error::NonHomogeneousPolynomial);
    }
    Ok(())
}

fn same_lattice(a: &Lattice, b: &Lattice) -> Result<()> {
    if a.gram() != b.gram() {
        return Err(Error::IncompatibleSublattices("Grassmannian point belongs to another lattice".into()));
    }
    Ok(())
}

fn qadd(x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

impl ThetaSeries {
    #[allow(clippy::too_many_arguments)]
    fn build(
        space: IndexSpace,
        point: &GrassmannPoint,
        a_map: QMatrix,
        groups: Vec<Group>,
        eta: Vec<BigRational>,
        alpha: Vec<BigRational>,
        p: &HomogeneousPolynomial,
        bound: f64,
    ) -> Result<Self> {
        check_poly(p, point)?;
        if !bound.is_finite() || bound <= 0.0 {
            return Err(Error::InvalidBound(bound));
        }
        let (dp, dm) = p.degrees();
        let y_exponent = rat(point.b_minus() as i64 + 2 * dm as i64, 2);
        let weight_exponent = point.b_plus() as i64 - point.b_minus() as i64 + 2 * dp as i64 - 2 * dm as i64;
        let series: Vec<Polynomial> = p.poly().laplacian_series();
        let poly_norms: Vec<(f64, f64)> =
            series.iter().map(|q| (q.l1_norm(), q.degree().unwrap_or(0) as f64 / 2.0)).collect();

        let af = qmat_to_f64(&a_map);
        let maj = point.majorant_gram_f64();
        let qy = af.transpose() * &maj * &af;
        let shell = ShellBound::new(&qy)?;
        let qy_inv = if qy.nrows() == 0 { qy.clone() } else { qy.clone().cholesky().ok_or(Error::Degenerate)?.inverse() };
        let gw = point.lattice().gram_f64();
        let etaf = DVector::from_vec(qvec_to_f64(&eta));
        let alphaf = DVector::from_vec(qvec_to_f64(&alpha));
        let r = 2.0 * bound;
        let r_exact = BigRational::from_f64(r).expect("finite bound");
        let cap = max_vectors();

        let mut terms = Vec::new();
        for (gi, g) in groups.iter().enumerate() {
            let z0 = DVector::from_vec(qvec_to_f64(&g.z0));
            let shift = &z0 + &etaf;
            let center = if qy.nrows() == 0 { DVector::zeros(0) } else { -(&qy_inv * af.transpose() * &maj * &shift) };
            let ys = fincke_pohst(&qy, center.as_slice(), r, cap.saturating_sub(terms.len()))?;
            for y in ys {
                let yf = DVector::from_iterator(y.len(), y.iter().map(|&t| t as f64));
                let z = &af * &yf + &z0;
                let mu = &z + &etaf;
                let x = point.adapted_coords(mu.as_slice());
                let majv: f64 = x.iter().map(|t| t * t).sum();
                let keep = if (majv - r).abs() <= 1e-7 * (1.0 + r) && point.is_rational() {
                    let mu_q = self_mu(&a_map, &y, &g.z0, &eta);
                    let (a, b) = point.a_b_exact(&mu_q).expect("rational point");
                    (a - b) * rat(2, 1) <= r_exact
                } else {
                    majv <= r
                };
                if !keep {
                    continue;
                }
                let a: f64 = x[..point.b_plus()].iter().map(|t| t * t).sum::<f64>() / 2.0;
                let b: f64 = -x[point.b_plus()..].iter().map(|t| t * t).sum::<f64>() / 2.0;
                let half = &z + &etaf * 0.5;
                let phase = -(half.transpose() * &gw * &alphaf)[(0, 0)];
                let poly_values = series.iter().map(|q| q.eval(&x)).collect();
                let mut index = g.index.clone();
                if let Some(v) = &g.varying {
                    index[v.axis] = v.at(&y);
                }
                terms.push(TermRecord { index, group: gi, y, a, b, phase, poly_values });
            }
        }
        terms.sort_by(|s, t| (&s.index, s.group, &s.y).cmp(&(&t.index, t.group, &t.y)));
        Ok(ThetaSeries {
            space,
            point: point.clone(),
            a_map,
            groups,
            eta,
            alpha,
            y_exponent,
            weight_exponent,
            poly_norms,
            shell,
            bound,
            terms,
        })
    }

    /// `Θ_L(τ; (α, β); v, p_v)` over `D_L`.
    pub fn siegel(l: &Lattice, v: &GrassmannPoint, p: &HomogeneousPolynomial, pair: &VectorPair, bound: f64) -> Result<Self> {
        same_lattice(l, v.lattice())?;
        pair.check_dim(l.rank())?;
        let d = l.disc();
        let groups = d
            .elements()?
            .iter()
            .map(|g| Group { z0: d.lift(g), index: vec![d.index_of(g)], varying: None })
            .collect();
        let n = l.rank();
        Self::build(IndexSpace::single(d), v, QMatrix::identity(n), groups, pair.beta.clone(), pair.alpha.clone(), p, bound)
    }

    /// `Θ_{L,M}(τ; (ξ, η); u⊥, p)` over `D_L ⊗ D_{M(-1)}`, summing over `L*/M` directly.
    ///
    /// `u_perp` is a point of `M⊥` (in the basis of `m.orthogonal_complement()`)
    /// and `ξ, η ∈ M⊥_R` are given in `L`-coordinates.
    pub fn mixed(m: &Sublattice, u_perp: &GrassmannPoint, p: &HomogeneousPolynomial, pair: &VectorPair, bound: f64) -> Result<Self> {
        let l = m.ambient();
        let mp = m.orthogonal_complement()?;
        same_lattice(mp.lattice(), u_perp.lattice())?;
        pair.check_dim(l.rank())?;
        if !m.is_orthogonal(&pair.alpha) || !m.is_orthogonal(&pair.beta) {
            return Err(Error::VectorNotInComplement);
        }
        let xi = mp.coordinates(&pair.alpha);
        let eta = mp.coordinates(&pair.beta);

        let c = zmat_to_q(&m.complement_basis());
        let a_map = mp.coord_map().mul(&c);
        let dl = l.disc();
        let dm = m.lattice().disc();
        let dm_dual = Arc::new(dm.negated());
        let steps: Vec<DiscElement> = (0..c.cols()).map(|j| m.pi_m(&c.col(j))).collect::<Result<_>>()?;
        let mut groups = Vec::new();
        for g in dl.elements()? {
            let rep = dl.lift(&g);
            let base = m.pi_m(&rep)?;
            groups.push(Group {
                z0: mp.coordinates(&rep),
                index: vec![dl.index_of(&g), 0],
                varying: Some(Varying { axis: 1, group: dm.clone(), base, steps: steps.clone() }),
            });
        }
        let space = IndexSpace::new(vec![dl.clone(), dm_dual]);
        Self::build(space, u_perp, a_map, groups, eta, xi, p, bound)
    }

    pub fn space(&self) -> &IndexSpace {
        &self.space
    }

    pub fn terms(&self) -> &[TermRecord] {
        &self.terms
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn point(&self) -> &GrassmannPoint {
        &self.point
    }

    pub fn y_exponent(&self) -> &BigRational {
        &self.y_exponent
    }

    /// `k` in `φ(τ)ᵏ`: `w₊ - w₋ + 2 deg₊ - 2 deg₋`.
    pub fn weight_exponent(&self) -> i64 {
        self.weight_exponent
    }

    /// Bound on the omitted part of any single component at `Im τ = y`.
    pub fn tail(&self, y: f64) -> f64 {
        let c = 1.0 / (8.0 * PI * y);
        let weights: Vec<(f64, f64)> =
            self.poly_norms.iter().enumerate().map(|(j, (w, d))| (w * c.powi(j as i32), *d)).collect();
        let pre = y.powf(crate::linalg::rat_to_f64(&self.y_exponent));
        pre * self.shell.tail(2.0 * self.bound, PI * y, &weights)
    }

    pub fn evaluate(&self, tau: Complex64) -> Result<ThetaValue> {
        check_tau(tau)?;
        let mut value = RepVector::zeros(self.space.clone());
        // terms are sorted by index, so each component is summed in a fixed order
        for t in &self.terms {
            value.add_at(&t.index, t.evaluate(tau));
        }
        let pre = tau.im.powf(crate::linalg::rat_to_f64(&self.y_exponent));
        Ok(ThetaValue { value: value.scale(Complex64::new(pre, 0.0)), tau, bound: self.bound, tail: self.tail(tau.im) })
    }

    /// Exact exponents and phases, when the point is rational.
    pub fn exact_terms(&self) -> Option<Vec<ExactTerm>> {
        if !self.point.is_rational() {
            return None;
        }
        let mut out = self.exact_terms_unsorted()?;
        out.sort();
        Some(out)
    }

    fn exact_terms_unsorted(&self) -> Option<Vec<ExactTerm>> {
        if !self.point.is_rational() {
            return None;
        }
        let g = self.point.lattice().gram_q();
        let half = rat(1, 2);
        let out: Vec<ExactTerm> = self
            .terms
            .iter()
            .map(|t| {
                let grp = &self.groups[t.group];
                let mu = self_mu(&self.a_map, &t.y, &grp.z0, &self.eta);
                let (a, b) = self.point.a_b_exact(&mu).expect("rational point");
                let z: Vec<BigRational> = mu.iter().zip(&self.eta).map(|(m, e)| m - e * &half).collect();
                let phase = -g.bilinear(&z, &self.alpha);
                ExactTerm { index: t.index.clone(), a, b, phase }
            })
            .collect();
        Some(out)
    }
}

impl ThetaSeries {
    /// `(index, exponent, coefficient)` of a holomorphic series: rational
    /// definite point and harmonic polynomial, so each term is `c qᵃ`.
    pub fn q_series(&self) -> Option<Vec<(Vec<usize>, BigRational, Complex64)>> {
        if self.point.b_minus() != 0 || self.terms.iter().any(|t| t.poly_values.len() > 1) {
            return None;
        }
        let exact = self.exact_terms_unsorted()?;
        Some(
            self.terms
                .iter()
                .zip(exact)
                .map(|(t, x)| {
                    let c = t.poly_values.first().copied().unwrap_or_default() * e_rat(&x.phase);
                    (x.index, x.a, c)
                })
                .collect(),
        )
    }
}

/// `A y + z₀ + η`.
fn self_mu(a: &QMatrix, y: &[i64], z0: &[BigRational], eta: &[BigRational]) -> Vec<BigRational> {
    let yq: Vec<BigRational> = y.iter().map(|&t| rat(t, 1)).collect();
    qadd(&qadd(&a.mul_vec(&yq), z0), eta)
}

/// `Θ_L(τ; (α, β); v, p_v)`.
pub fn siegel_theta(
    l: &Lattice,
    tau: Complex64,
    v: &GrassmannPoint,
    p: &HomogeneousPolynomial,
    pair: &VectorPair,
    bound: f64,
) -> Result<ThetaValue> {
    check_tau(tau)?;
    ThetaSeries::siegel(l, v, p, pair, bound)?.evaluate(tau)
}

pub fn theta_lm_direct(
    m: &Sublattice,
    tau: Complex64,
    u_perp: &GrassmannPoint,
    p: &HomogeneousPolynomial,
    pair: &VectorPair,
    bound: f64,
) -> Result<ThetaValue> {
    check_tau(tau)?;
    ThetaSeries::mixed(m, u_perp, p, pair, bound)?.evaluate(tau)
}

/// `Θ_{L,M}` as `↓^{L ⊕ M(-1)}_{Λ ⊕ M(-1)} [Θ_{M⊥} ⊗ Σ_δ e_δ ⊗ e*_δ]` with `Λ = M ⊕ M⊥`.
pub fn theta_lm_composed(
    m: &Sublattice,
    tau: Complex64,
    u_perp: &GrassmannPoint,
    p: &HomogeneousPolynomial,
    pair: &VectorPair,
    bound: f64,
) -> Result<ThetaValue> {
    check_tau(tau)?;
    let mp = m.orthogonal_complement()?;
    pair.check_dim(m.ambient().rank())?;
    if !m.is_orthogonal(&pair.alpha) || !m.is_orthogonal(&pair.beta) {
        return Err(Error::VectorNotInComplement);
    }
    let perp_pair = pair.project_onto(&mp);
    let perp = siegel_theta(mp.lattice(), tau, u_perp, p, &perp_pair, bound)?;
    let emb = OverlatticeEmbedding::for_orthogonal_sum(m, &mp)?;
    let lambda_mixed = perp.value.tensor(&identity_vector(m.lattice().disc())).permute_axes(&[1, 0, 2])?;
    let merged = lambda_mixed.merge_axes(0, emb.small().disc())?;
    let value = down_arrow(&emb, &merged, 0)?;
    Ok(ThetaValue { value, tau, bound, tail: perp.tail * emb.index() as f64 })
}

/// `‖Θ_{L(-1)}(τ; v⁻, p⁻) - y^{(b₊-b₋)/2+m₊-m₋} conj Θ_L(τ; v, conj p)‖_∞`.
pub fn neg_theta_check(
    l: &Lattice,
    tau: Complex64,
    v: &GrassmannPoint,
    p: &HomogeneousPolynomial,
    pair: &VectorPair,
    bound: f64,
) -> Result<f64> {
    let ln = l.rescale(-1)?;
    let vn = v.negated()?;
    let lhs = siegel_theta(&ln, tau, &vn, &p.swap_blocks(), pair, bound)?;
    let rhs = siegel_theta(l, tau, v, &p.conj(), pair, bound)?;
    let (mp, mm) = p.degrees();
    let e = (l.sig_plus() as f64 - l.sig_minus() as f64) / 2.0 + mp as f64 - mm as f64;
    let rhs = rhs.value.conj().scale(Complex64::new(tau.im.powf(e), 0.0));
    let diffs = lhs.value.data().iter().zip(rhs.data()).map(|(a, b)| (a - b).norm());
    Ok(diffs.fold(0.0, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Defect {
    pub defect: f64,
    /// Combined truncation bound of both sides.
    pub tail: f64,
}

impl Defect {
    pub fn certify(&self, tolerance: f64) -> Result<()> {
        if self.tail > tolerance {
            return Err(Error::TailTooLarge { tail: self.tail, tolerance });
        }
        Ok(())
    }
}

/// `‖Θ(gτ; g(α, β)) - φ(τ)ᵏ ρ(g) Θ(τ; (α, β))‖_∞` for any vector-valued construction
/// `theta(τ, pair)`; `ρ` acts on every tensor factor by its own signature.
pub fn modularity_defect<F>(theta: F, g: &MetaplecticElement, tau: Complex64, pair: &VectorPair, k: i64) -> Result<Defect>
where
    F: Fn(Complex64, &VectorPair) -> Result<ThetaValue>,
{
    check_tau(tau)?;
    let lhs = theta(g.act(tau), &pair.act(g))?;
    let base = theta(tau, pair)?;
    let phi = g.phi(tau).powi(k as i32);
    let rhs = rho_apply(g, &base.value)?.scale(phi);
    let defect = lhs.value.max_diff(&rhs)?;
    let n = base.value.data().len() as f64;
    let tail = lhs.tail + phi.norm() * n.sqrt() * base.tail;
    Ok(Defect { defect, tail })
}

/// First `B = B₀·1.5ⁱ` whose certified tail at `y_min` is below `target`.
pub fn choose_bound<F>(tail_at: F, start: f64, target: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let mut b = start;
    for _ in 0..40 {
        if tail_at(b) < target {
            return b;
        }
        b *= 1.5;
    }
    b
}

/// Tail of `Θ_L` at `Im τ = y` for bound `B`, without enumerating.
pub fn siegel_tail(v: &GrassmannPoint, p: &HomogeneousPolynomial, bound: f64, y: f64) -> Result<f64> {
    check_poly(p, v)?;
    let shell = ShellBound::new(&v.majorant_gram_f64())?;
    let c = 1.0 / (8.0 * PI * y);
    let weights: Vec<(f64, f64)> = p
        .poly()
        .laplacian_series()
        .iter()
        .enumerate()
        .map(|(j, q)| (q.l1_norm() * c.powi(j as i32), q.degree().unwrap_or(0) as f64 / 2.0))
        .collect();
    let (_, dm) = p.degrees();
    let pre = y.powf(v.b_minus() as f64 / 2.0 + dm as f64);
    Ok(pre * shell.tail(2.0 * bound, PI * y, &weights))
}
