//! Seesaw identities relating `Θ_L` to theta functions of a primitive
//! sublattice `M` and its orthogonal complement, for `v = u ⊕ u⊥` and
//! `p_v = p_u · p_{u⊥}`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grassmann::{split_product_check, GrassmannPoint};
use crate::lattice::{Lattice, OverlatticeEmbedding, Sublattice};
use crate::linalg::rat;
use crate::poly::HomogeneousPolynomial;
use crate::repvec::RepVector;
use crate::theta::{siegel_theta, theta_lm_direct, ThetaSeries, ThetaValue, VectorPair};
use crate::weil::{down_arrow, up_arrow};

/// `L ⊇ M ⊕ M⊥` with compatible Grassmannian points and polynomials.
#[derive(Clone, Debug)]
pub struct SplitSetup {
    pub m: Sublattice,
    pub m_perp: Sublattice,
    pub u: GrassmannPoint,
    pub u_perp: GrassmannPoint,
    pub v: GrassmannPoint,
    pub p_u: HomogeneousPolynomial,
    pub p_perp: HomogeneousPolynomial,
    pub p_v: HomogeneousPolynomial,
    pub emb: OverlatticeEmbedding,
}

impl SplitSetup {
    /// Builds `v = ι_{u⊥}(u)` and `p_v = p_u p_{u⊥}`.
    pub fn new(
        m: &Sublattice,
        u: &GrassmannPoint,
        u_perp: &GrassmannPoint,
        p_u: &HomogeneousPolynomial,
        p_perp: &HomogeneousPolynomial,
    ) -> Result<Self> {
        let m_perp = m.orthogonal_complement()?;
        let v = GrassmannPoint::iota_embed(m, &m_perp, u, u_perp)?;
        let p_v = HomogeneousPolynomial::split_product(p_u, p_perp);
        let emb = OverlatticeEmbedding::for_orthogonal_sum(m, &m_perp)?;
        Ok(SplitSetup {
            m: m.clone(),
            m_perp,
            u: u.clone(),
            u_perp: u_perp.clone(),
            v,
            p_u: p_u.clone(),
            p_perp: p_perp.clone(),
            p_v,
            emb,
        })
    }

    /// Both factors definite: the points are forced.
    pub fn definite(m: &Sublattice, p_u: &HomogeneousPolynomial, p_perp: &HomogeneousPolynomial) -> Result<Self> {
        let m_perp = m.orthogonal_complement()?;
        let u = GrassmannPoint::definite(m.lattice())?;
        let up = GrassmannPoint::definite(m_perp.lattice())?;
        Self::new(m, &u, &up, p_u, p_perp)
    }

    pub fn lattice(&self) -> &Lattice {
        self.m.ambient()
    }

    /// `v = u ⊕ u⊥` and `p_v = p_u p_{u⊥}`, re-checked numerically.
    pub fn verify(&self) -> Result<()> {
        if !self.v.splits_as(&self.m, &self.m_perp, &self.u, &self.u_perp, 1e-9) {
            return Err(Error::SplitCheckFailed("v is not u ⊕ u⊥".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eea);
        let r = split_product_check(
            &self.p_v,
            &self.p_u,
            &self.p_perp,
            &self.v,
            &self.u,
            &self.u_perp,
            &self.m,
            &self.m_perp,
            &mut rng,
        );
        if !r.passed {
            return Err(Error::SplitCheckFailed(format!("p_v is not p_u p_u⊥ (witness {:?})", r.witness)));
        }
        Ok(())
    }

    /// `(α_M, β_M)` in `M`-coordinates.
    pub fn pair_m(&self, pair: &VectorPair) -> VectorPair {
        pair.project_onto(&self.m)
    }

    /// `(α_{M⊥}, β_{M⊥})` in `M⊥`-coordinates.
    pub fn pair_perp(&self, pair: &VectorPair) -> VectorPair {
        pair.project_onto(&self.m_perp)
    }

    /// `(α_{M⊥}, β_{M⊥})` in `L`-coordinates, as `Θ_{L,M}` expects.
    pub fn pair_perp_ambient(&self, pair: &VectorPair) -> VectorPair {
        VectorPair { alpha: self.m_perp.projection(&pair.alpha), beta: self.m_perp.projection(&pair.beta) }
    }

    pub fn theta_l(&self, tau: Complex64, pair: &VectorPair, bound: f64) -> Result<ThetaValue> {
        siegel_theta(self.lattice(), tau, &self.v, &self.p_v, pair, bound)
    }

    pub fn theta_m(&self, tau: Complex64, pair: &VectorPair, bound: f64) -> Result<ThetaValue> {
        siegel_theta(self.m.lattice(), tau, &self.u, &self.p_u, &self.pair_m(pair), bound)
    }

    pub fn theta_perp(&self, tau: Complex64, pair: &VectorPair, bound: f64) -> Result<ThetaValue> {
        siegel_theta(self.m_perp.lattice(), tau, &self.u_perp, &self.p_perp, &self.pair_perp(pair), bound)
    }

    pub fn theta_lm(&self, tau: Complex64, pair: &VectorPair, bound: f64) -> Result<ThetaValue> {
        theta_lm_direct(&self.m, tau, &self.u_perp, &self.p_perp, &self.pair_perp_ambient(pair), bound)
    }

    /// `Θ_M ⊗ Θ_{M⊥}` over `D_{M ⊕ M⊥}`.
    pub fn product_theta(&self, tm: &ThetaValue, tp: &ThetaValue) -> Result<RepVector> {
        tm.value.tensor(&tp.value).merge_axes(0, self.emb.small().disc())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    pub residual: f64,
    pub tail: f64,
}

impl Residual {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.residual <= tolerance + self.tail
    }
}

fn product_tail(n: f64, a: &ThetaValue, b: &ThetaValue) -> f64 {
    let (na, nb) = (a.value.norm_inf(), b.value.norm_inf());
    n * (a.tail * nb + na * b.tail + a.tail * b.tail)
}

/// `Θ_L = ↓[Θ_M ⊗ Θ_{M⊥}]`.
pub fn sep_theta_residual(s: &SplitSetup, tau: Complex64, pair: &VectorPair, bound: f64) -> Result<Residual> {
    let tl = s.theta_l(tau, pair, bound)?;
    let tm = s.theta_m(tau, pair, bound)?;
    let tp = s.theta_perp(tau, pair, bound)?;
    let rhs = down_arrow(&s.emb, &s.product_theta(&tm, &tp)?, 0)?;
    Ok(Residual { residual: tl.value.max_diff(&rhs)?, tail: tl.tail + product_tail(s.emb.index() as f64, &tm, &tp) })
}

/// `Θ_L = ⟨Θ_M, Θ_{L,M}⟩_M`.
pub fn pair_theta_residual(s: &SplitSetup, tau: Complex64, pair: &VectorPair, bound: f64) -> Result<Residual> {
    let tl = s.theta_l(tau, pair, bound)?;
    let tm = s.theta_m(tau, pair, bound)?;
    let tlm = s.theta_lm(tau, pair, bound)?;
    let rhs = tm.value.pair_axes(0, &tlm.value, 1)?;
    let n = s.m.lattice().disc().len() as f64;
    Ok(Residual { residual: tl.value.max_diff(&rhs)?, tail: tl.tail + product_tail(n, &tm, &tlm) })
}

/// `⟨Θ_L, U⟩_L` against both rearrangements: `⟨Θ_M ⊗ Θ_{M⊥}, ↑U⟩` over `M ⊕ M⊥`
/// and `⟨Θ_M, ⟨Θ_{L,M}, U⟩_L⟩_M`.
pub fn exppair_residuals(
    s: &SplitSetup,
    tau: Complex64,
    pair: &VectorPair,
    u: &RepVector,
    bound: f64,
) -> Result<(Residual, Residual)> {
    let tl = s.theta_l(tau, pair, bound)?;
    let lhs = tl.value.pair(u)?.scalar().expect("scalar pairing");
    let tm = s.theta_m(tau, pair, bound)?;
    let tp = s.theta_perp(tau, pair, bound)?;
    let emb_neg = s.emb.negated()?;
    let up = up_arrow(&emb_neg, u, 0)?;
    let first = s.product_theta(&tm, &tp)?.pair(&up)?.scalar().expect("scalar pairing");
    let tlm = s.theta_lm(tau, pair, bound)?;
    let inner = tlm.value.pair_axes(0, u, 0)?;
    let second = tm.value.pair(&inner)?.scalar().expect("scalar pairing");
    let un = u.norm_inf();
    let nl = s.lattice().disc().len() as f64;
    let ns = s.emb.small().disc().len() as f64;
    let nm = s.m.lattice().disc().len() as f64;
    let lt = nl * un * tl.tail;
    Ok((
        Residual { residual: (lhs - first).norm(), tail: lt + un * product_tail(ns, &tm, &tp) },
        Residual { residual: (lhs - second).norm(), tail: lt + un * nl * product_tail(nm, &tm, &tlm) },
    ))
}

/// Coordinate form of the separation: for rational points, the exact
/// `(coset, a, b)` multiset of `Θ_L` equals the one obtained by pairing the
/// terms of `Θ_M` and `Θ_{M⊥}` over the cosets of `H⊥` (sum over `γ ∈ H`).
///
/// Only the majorant truncation `2(a - b) ≤ 2B` is applied on both sides, so
/// the comparison is exact. Returns the number of terms compared.
pub fn exact_coordinate_identity(s: &SplitSetup, bound: f64) -> Result<(bool, usize)> {
    let zero = |n: usize| VectorPair::zero(n);
    let one = |p: &GrassmannPoint| HomogeneousPolynomial::one(p.b_plus(), p.b_minus());
    let l = s.lattice();
    let sl = ThetaSeries::siegel(l, &s.v, &one(&s.v), &zero(l.rank()), bound)?;
    let sm = ThetaSeries::siegel(s.m.lattice(), &s.u, &one(&s.u), &zero(s.m.rank()), bound)?;
    let sp = ThetaSeries::siegel(s.m_perp.lattice(), &s.u_perp, &one(&s.u_perp), &zero(s.m_perp.rank()), bound)?;
    let exact = |t: &ThetaSeries| t.exact_terms().ok_or_else(|| Error::SplitCheckFailed("point is not rational".into()));
    let (tl, tm, tp) = (exact(&sl)?, exact(&sm)?, exact(&sp)?);

    let limit = rat(2, 1) * BigRational::from_float(bound).expect("finite");
    type Key = (usize, BigRational, BigRational);
    let mut lhs: BTreeMap<Key, usize> = BTreeMap::new();
    for t in &tl {
        *lhs.entry((t.index[0], t.a.clone(), t.b.clone())).or_default() += 1;
    }
    let np = s.m_perp.lattice().disc().len();
    let mut rhs: BTreeMap<Key, usize> = BTreeMap::new();
    for x in &tm {
        for y in &tp {
            let idx = x.index[0] * np + y.index[0];
            let Some(gamma) = s.emb.coset_map()[idx] else { continue };
            let (a, b) = (&x.a + &y.a, &x.b + &y.b);
            if (&a - &b) * rat(2, 1) > limit {
                continue;
            }
            *rhs.entry((gamma, a, b)).or_default() += 1;
        }
    }
    let count = lhs.values().sum();
    Ok((lhs == rhs, count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::QMatrix;
    use crate::poly::Polynomial;
    use crate::repvec::IndexSpace;
    use std::sync::Arc;

    fn ii11_setup() -> SplitSetup {
        let l = Lattice::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        let m = Sublattice::from_cols(&l, &[vec![1, -1]]).unwrap();
        SplitSetup::definite(&m, &HomogeneousPolynomial::one(0, 1), &HomogeneousPolynomial::one(1, 0)).unwrap()
    }

    fn a1a1_setup(p_u: HomogeneousPolynomial) -> SplitSetup {
        let l = Lattice::from_rows(&[vec![2, 0], vec![0, 2]]).unwrap();
        let m = Sublattice::from_cols(&l, &[vec![1, 0]]).unwrap();
        SplitSetup::definite(&m, &p_u, &HomogeneousPolynomial::one(1, 0)).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ii11_identities() {
        let s = ii11_setup();
        s.verify().unwrap();
        let tau = c(0.21, 0.93);
        let pair = VectorPair::zero(2);
        assert!(sep_theta_residual(&s, tau, &pair, 14.0).unwrap().passes(1e-9));
        assert!(pair_theta_residual(&s, tau, &pair, 14.0).unwrap().passes(1e-9));
        let (ok, n) = exact_coordinate_identity(&s, 10.0).unwrap();
        assert!(ok && n > 20);
    }

    #[test]
    fn shifted_identities_with_degree_one() {
        // p_u of degree (0,1) on the negative definite M of II_{1,1}
        let l = Lattice::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        let m = Sublattice::from_cols(&l, &[vec![1, -1]]).unwrap();
        let pu = HomogeneousPolynomial::new(Polynomial::var(1, 0), 0, (0, 1)).unwrap();
        let s = SplitSetup::definite(&m, &pu, &HomogeneousPolynomial::one(1, 0)).unwrap();
        s.verify().unwrap();
        let pair = VectorPair::from_i64(&[(1, 3), (-1, 4)], &[(1, 2), (1, 5)]).unwrap();
        let tau = c(-0.3, 1.05);
        assert!(sep_theta_residual(&s, tau, &pair, 14.0).unwrap().passes(1e-9));
        assert!(pair_theta_residual(&s, tau, &pair, 14.0).unwrap().passes(1e-9));
        let space = IndexSpace::single(&Arc::new(s.lattice().disc().negated()));
        let u = RepVector::from_data(space, vec![c(0.7, -0.2)]).unwrap();
        let (r1, r2) = exppair_residuals(&s, tau, &pair, &u, 14.0).unwrap();
        assert!(r1.passes(1e-9) && r2.passes(1e-9), "{r1:?} {r2:?}");
    }

    #[test]
    fn a1a1_identities() {
        let s = a1a1_setup(HomogeneousPolynomial::new(Polynomial::var(1, 0), 1, (1, 0)).unwrap());
        let pair = VectorPair::from_i64(&[(1, 5), (1, 3)], &[(-1, 4), (2, 3)]).unwrap();
        let tau = c(0.12, 0.8);
        assert!(sep_theta_residual(&s, tau, &pair, 16.0).unwrap().passes(1e-9));
        assert!(pair_theta_residual(&s, tau, &pair, 16.0).unwrap().passes(1e-9));
        let space = IndexSpace::single(&Arc::new(s.lattice().disc().negated()));
        let u = RepVector::from_data(space, vec![c(0.3, 0.1), c(-1.0, 0.5), c(0.25, 0.0), c(0.0, 2.0)]).unwrap();
        let (r1, r2) = exppair_residuals(&s, tau, &pair, &u, 16.0).unwrap();
        assert!(r1.passes(1e-9) && r2.passes(1e-9));
    }

    #[test]
    fn indefinite_split() {
        // II_{1,1} ⊕ A1 with M = span{(1,-1,0),(0,0,1)} of signature (1,1)
        let l = Lattice::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 2]]).unwrap();
        let m = Sublattice::from_cols(&l, &[vec![1, -1, 0], vec![0, 0, 1]]).unwrap();
        let mp = m.orthogonal_complement().unwrap();
        let u = GrassmannPoint::new(m.lattice(), &QMatrix::from_cols(2, &[vec![rat(1, 3), rat(1, 1)]]).unwrap()).unwrap();
        let up = GrassmannPoint::definite(mp.lattice()).unwrap();
        let pu = HomogeneousPolynomial::new(Polynomial::var(2, 1), 1, (0, 1)).unwrap();
        let s = SplitSetup::new(&m, &u, &up, &pu, &HomogeneousPolynomial::one(1, 0)).unwrap();
        s.verify().unwrap();
        let pair = VectorPair::from_i64(&[(0, 1), (1, 2), (1, 3)], &[(1, 4), (0, 1), (-1, 2)]).unwrap();
        let tau = c(0.4, 1.2);
        assert!(sep_theta_residual(&s, tau, &pair, 12.0).unwrap().passes(1e-9));
        assert!(pair_theta_residual(&s, tau, &pair, 12.0).unwrap().passes(1e-9));
        let (ok, _) = exact_coordinate_identity(&s, 8.0).unwrap();
        assert!(ok);
    }
    #[test]
    fn controls_fail() {
        let s = ii11_setup();
        let tau = c(0.21, 0.93);
        let pair = VectorPair::from_i64(&[(1, 3), (1, 7)], &[(1, 2), (0, 1)]).unwrap();
        let tl = s.theta_l(tau, &pair, 14.0).unwrap();
        // Θ_M taken at the wrong shift
        let wrong = VectorPair::from_i64(&[(1, 3), (1, 7)], &[(1, 2), (1, 1)]).unwrap();
        let tm = s.theta_m(tau, &wrong, 14.0).unwrap();
        let tp = s.theta_perp(tau, &pair, 14.0).unwrap();
        let rhs = down_arrow(&s.emb, &s.product_theta(&tm, &tp).unwrap(), 0).unwrap();
        assert!(tl.value.max_diff(&rhs).unwrap() > 1e-3);
        // p_v replaced by something that is not the product
        let mut bad = s.clone();
        bad.p_v = HomogeneousPolynomial::new(Polynomial::var(2, 1), 1, (0, 1)).unwrap();
        assert!(matches!(bad.verify(), Err(Error::SplitCheckFailed(_))));
    }
}
