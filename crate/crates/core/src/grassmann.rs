//! Points `v = v₊ ⊕ v₋` of the Grassmannian of `L_R`.
//!
//! A point stores an adapted basis `F` (columns `0..b₊` span `v₊` with norm
//! `+1`, the rest span `v₋` with norm `-1`) and the projector onto `v₊`.
//! The projector is exact whenever `v₊` was given by a rational spanning set,
//! which makes the exponents `a = (λ_{v₊})²/2`, `b = (λ_{v₋})²/2` exact.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{Lattice, Sublattice};
use crate::linalg::{qmat_to_f64, zmat_to_f64, QMatrix};
use crate::poly::HomogeneousPolynomial;

#[derive(Clone, Debug)]
pub struct GrassmannPoint {
    lattice: Lattice,
    basis: DMatrix<f64>,
    b_plus: usize,
    proj_plus: Option<QMatrix>,
    proj_plus_f64: DMatrix<f64>,
    /// `J Fᵀ G`: lattice coordinates to adapted coordinates.
    to_adapted: DMatrix<f64>,
}

/// Gram–Schmidt under `sign · G`, picking the candidate of largest remaining norm each step.
fn orthonormalize(gram: &DMatrix<f64>, cands: &[DVector<f64>], sign: f64, k: usize) -> Option<Vec<DVector<f64>>> {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(k);
    let mut pool: Vec<DVector<f64>> = cands.to_vec();
    for _ in 0..k {
        for w in pool.iter_mut() {
            for _ in 0..2 {
                for f in &out {
                    let c = sign * (f.transpose() * gram * &*w)[(0, 0)];
                    *w -= f * c;
                }
            }
        }
        let (best, norm) = pool
            .iter()
            .enumerate()
            .map(|(i, w)| (i, sign * (w.transpose() * gram * w)[(0, 0)]))
            .max_by(|a, b| a.1.total_cmp(&b.1))?;
        let scale = pool[best].amax().max(1.0);
        if norm <= 1e-10 * scale * scale {
            return None;
        }
        out.push(pool.swap_remove(best) / norm.sqrt());
    }
    Some(out)
}

impl GrassmannPoint {
    /// `v₊` spanned by the columns of `span_plus` (lattice coordinates).
    pub fn new(lattice: &Lattice, span_plus: &QMatrix) -> Result<Self> {
        let n = lattice.rank();
        let bp = lattice.sig_plus();
        if span_plus.rows() != n {
            return Err(Error::WrongDimension { expected: n, got: span_plus.rows() });
        }
        if span_plus.cols() != bp {
            return Err(Error::WrongDimension { expected: bp, got: span_plus.cols() });
        }
        let proj = if bp == 0 {
            QMatrix::zeros(n, n)
        } else {
            let stg = span_plus.transpose().mul(lattice.gram_q());
            let small = stg.mul(span_plus);
            if small.inertia() != (bp, 0, 0) {
                return Err(Error::NotPositiveDefiniteSpan);
            }
            span_plus.mul(&small.inverse().expect("definite")).mul(&stg)
        };
        let mut p = Self::from_projector_f64(lattice, qmat_to_f64(&proj), qmat_to_f64(span_plus))?;
        p.proj_plus = Some(proj);
        Ok(p)
    }

    pub fn new_f64(lattice: &Lattice, span_plus: &DMatrix<f64>) -> Result<Self> {
        let n = lattice.rank();
        let bp = lattice.sig_plus();
        if span_plus.nrows() != n {
            return Err(Error::WrongDimension { expected: n, got: span_plus.nrows() });
        }
        if span_plus.ncols() != bp {
            return Err(Error::WrongDimension { expected: bp, got: span_plus.ncols() });
        }
        let g = lattice.gram_f64();
        let proj = if bp == 0 {
            DMatrix::zeros(n, n)
        } else {
            let stg = span_plus.transpose() * &g;
            let small = &stg * span_plus;
            let chol = small.clone().cholesky().ok_or(Error::NotPositiveDefiniteSpan)?;
            span_plus * chol.inverse() * stg
        };
        Self::from_projector_f64(lattice, proj, span_plus.clone())
    }

    fn from_projector_f64(lattice: &Lattice, proj: DMatrix<f64>, span_plus: DMatrix<f64>) -> Result<Self> {
        let n = lattice.rank();
        let (bp, bm) = lattice.signature();
        let g = lattice.gram_f64();
        let plus: Vec<DVector<f64>> = span_plus.column_iter().map(|c| c.into_owned()).collect();
        let fp = orthonormalize(&g, &plus, 1.0, bp).ok_or(Error::NotPositiveDefiniteSpan)?;
        let comp = DMatrix::identity(n, n) - &proj;
        let minus: Vec<DVector<f64>> = comp.column_iter().map(|c| c.into_owned()).collect();
        let fm = orthonormalize(&g, &minus, -1.0, bm).ok_or(Error::NotPositiveDefiniteSpan)?;
        let cols: Vec<DVector<f64>> = fp.into_iter().chain(fm).collect();
        let basis = DMatrix::from_columns(&cols);
        Ok(Self::assemble(lattice.clone(), basis, bp, None, proj))
    }

    fn assemble(lattice: Lattice, basis: DMatrix<f64>, b_plus: usize, proj: Option<QMatrix>, pf: DMatrix<f64>) -> Self {
        let n = lattice.rank();
        let g = lattice.gram_f64();
        let mut to_adapted = basis.transpose() * &g;
        for i in b_plus..n {
            to_adapted.row_mut(i).neg_mut();
        }
        GrassmannPoint { lattice, basis, b_plus, proj_plus: proj, proj_plus_f64: pf, to_adapted }
    }

    /// The unique point of a definite lattice.
    pub fn definite(lattice: &Lattice) -> Result<Self> {
        let n = lattice.rank();
        if lattice.is_positive_definite() {
            Self::new(lattice, &QMatrix::identity(n))
        } else if lattice.is_negative_definite() {
            Self::new(lattice, &QMatrix::zeros(n, 0))
        } else {
            Err(Error::WrongDimension { expected: n, got: lattice.sig_plus() })
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn b_plus(&self) -> usize {
        self.b_plus
    }

    pub fn b_minus(&self) -> usize {
        self.rank() - self.b_plus
    }

    pub fn adapted_basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn is_rational(&self) -> bool {
        self.proj_plus.is_some()
    }

    pub fn projector_exact(&self) -> Option<&QMatrix> {
        self.proj_plus.as_ref()
    }

    pub fn projector_f64(&self) -> &DMatrix<f64> {
        &self.proj_plus_f64
    }

    pub fn project(&self, lambda: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let l = DVector::from_column_slice(lambda);
        let p = &self.proj_plus_f64 * &l;
        let m = &l - &p;
        (p.as_slice().to_vec(), m.as_slice().to_vec())
    }

    pub fn project_exact(&self, lambda: &[BigRational]) -> Option<(Vec<BigRational>, Vec<BigRational>)> {
        let p = self.proj_plus.as_ref()?.mul_vec(lambda);
        let m = lambda.iter().zip(&p).map(|(x, y)| x - y).collect();
        Some((p, m))
    }

    /// `xᵢ = εᵢ (Fᵢ, λ)`, so `λ = Σ xᵢ Fᵢ`.
    pub fn adapted_coords(&self, lambda: &[f64]) -> Vec<f64> {
        (&self.to_adapted * DVector::from_column_slice(lambda)).as_slice().to_vec()
    }

    pub fn adapted_coords_q(&self, lambda: &[BigRational]) -> Vec<f64> {
        self.adapted_coords(&crate::linalg::qvec_to_f64(lambda))
    }

    /// `(a, b) = ((μ_{v₊})²/2, (μ_{v₋})²/2)`.
    pub fn a_b_exact(&self, mu: &[BigRational]) -> Option<(BigRational, BigRational)> {
        let proj = self.proj_plus.as_ref()?;
        let g = self.lattice.gram_q();
        let two = BigRational::from_integer(2.into());
        let a = g.bilinear(mu, &proj.mul_vec(mu)) / &two;
        let b = g.bilinear(mu, mu) / &two - &a;
        Some((a, b))
    }

    pub fn a_b_f64(&self, mu: &[f64]) -> (f64, f64) {
        let x = self.adapted_coords(mu);
        let a: f64 = x[..self.b_plus].iter().map(|t| t * t).sum::<f64>() / 2.0;
        let b: f64 = -x[self.b_plus..].iter().map(|t| t * t).sum::<f64>() / 2.0;
        (a, b)
    }

    /// `λ_{v₊}² - λ_{v₋}²`.
    pub fn majorant(&self, lambda: &[f64]) -> f64 {
        self.adapted_coords(lambda).iter().map(|t| t * t).sum()
    }

    /// Gram matrix of the majorant, `G F Fᵀ G`.
    pub fn majorant_gram_f64(&self) -> DMatrix<f64> {
        self.to_adapted.transpose() * &self.to_adapted
    }

    /// `G (2Π₊ - I)`.
    pub fn majorant_gram_exact(&self) -> Option<QMatrix> {
        let proj = self.proj_plus.as_ref()?;
        let n = self.rank();
        let two = BigRational::from_integer(2.into());
        let m = QMatrix::from_fn(n, n, |i, j| {
            let d = if i == j { BigRational::one() } else { BigRational::zero() };
            &two * &proj[(i, j)] - d
        });
        Some(self.lattice.gram_q().mul(&m))
    }

    /// The same splitting viewed on `L(-1)`, where `v₊` and `v₋` trade places.
    pub fn negated(&self) -> Result<Self> {
        let neg = self.lattice.rescale(-1)?;
        let n = self.rank();
        let idx: Vec<usize> = (self.b_plus..n).chain(0..self.b_plus).collect();
        let basis = self.basis.select_columns(&idx);
        let id = DMatrix::<f64>::identity(n, n);
        let proj = self.proj_plus.as_ref().map(|p| {
            QMatrix::from_fn(n, n, |i, j| {
                let d = if i == j { BigRational::one() } else { BigRational::zero() };
                d - &p[(i, j)]
            })
        });
        Ok(Self::assemble(neg, basis, n - self.b_plus, proj, id - &self.proj_plus_f64))
    }

    /// Max deviation of `Fᵀ G F` from `diag(±1)`.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.lattice.gram_f64();
        let m = self.basis.transpose() * g * &self.basis;
        let n = self.rank();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = if i != j {
                    0.0
                } else if i < self.b_plus {
                    1.0
                } else {
                    -1.0
                };
                worst = worst.max((m[(i, j)] - target).abs());
            }
        }
        worst
    }

    /// `v = u ⊕ u⊥` for points `u` of `M` and `u⊥` of `M⊥`.
    ///
    /// Adapted variables of the result are ordered `(u₊, u⊥₊, u₋, u⊥₋)`.
    pub fn iota_embed(m: &Sublattice, m_perp: &Sublattice, u: &Self, u_perp: &Self) -> Result<Self> {
        check_split_pair(m, m_perp)?;
        if u.lattice.gram() != m.lattice().gram() || u_perp.lattice.gram() != m_perp.lattice().gram() {
            return Err(Error::IncompatibleSublattices("Grassmannian points live on other lattices".into()));
        }
        let l = m.ambient();
        let bm = zmat_to_f64(m.basis());
        let bp = zmat_to_f64(m_perp.basis());
        let (cp, dp) = (u.b_plus, u_perp.b_plus);
        let mut cols = Vec::new();
        let lift = |b: &DMatrix<f64>, p: &Self, r: std::ops::Range<usize>| -> Vec<DVector<f64>> {
            r.map(|i| b * p.basis.column(i)).collect()
        };
        cols.extend(lift(&bm, u, 0..cp));
        cols.extend(lift(&bp, u_perp, 0..dp));
        cols.extend(lift(&bm, u, cp..u.rank()));
        cols.extend(lift(&bp, u_perp, dp..u_perp.rank()));
        let basis = DMatrix::from_columns(&cols);
        let cm = qmat_to_f64(m.coord_map());
        let cpm = qmat_to_f64(m_perp.coord_map());
        let pf = &bm * &u.proj_plus_f64 * &cm + &bp * &u_perp.proj_plus_f64 * &cpm;
        let proj = match (&u.proj_plus, &u_perp.proj_plus) {
            (Some(pu), Some(pp)) => {
                let a = m.basis_q().mul(pu).mul(m.coord_map());
                let b = m_perp.basis_q().mul(pp).mul(m_perp.coord_map());
                let n = l.rank();
                Some(QMatrix::from_fn(n, n, |i, j| &a[(i, j)] + &b[(i, j)]))
            }
            _ => None,
        };
        Ok(Self::assemble(l.clone(), basis, cp + dp, proj, pf))
    }

    /// Whether `v₊ ⊇ u₊ ⊕ u⊥₊` and `v₋ ⊇ u₋ ⊕ u⊥₋` (so `v = u ⊕ u⊥`), up to `tol`.
    pub fn splits_as(&self, m: &Sublattice, m_perp: &Sublattice, u: &Self, u_perp: &Self, tol: f64) -> bool {
        if u.b_plus + u_perp.b_plus != self.b_plus || u.rank() + u_perp.rank() != self.rank() {
            return false;
        }
        let check = |b: &DMatrix<f64>, p: &Self| {
            (0..p.rank()).all(|i| {
                let w = b * p.basis.column(i);
                let (wp, wm) = self.project(w.as_slice());
                let off = if i < p.b_plus { wm } else { wp };
                off.iter().all(|t| t.abs() <= tol * (1.0 + w.amax()))
            })
        };
        check(&zmat_to_f64(m.basis()), u) && check(&zmat_to_f64(m_perp.basis()), u_perp)
    }
}

pub(crate) fn check_split_pair(m: &Sublattice, m_perp: &Sublattice) -> Result<()> {
    if m.ambient().gram() != m_perp.ambient().gram() {
        return Err(Error::IncompatibleSublattices("different ambient lattices".into()));
    }
    if m.rank() + m_perp.rank() != m.ambient().rank() {
        return Err(Error::IncompatibleSublattices("ranks do not add up".into()));
    }
    let cross = m.basis().transpose().mul(m.ambient().gram()).mul(m_perp.basis());
    if !cross.is_zero_matrix() {
        return Err(Error::IncompatibleSublattices("sublattices are not orthogonal".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitCheck {
    pub passed: bool,
    pub witness: Option<Vec<f64>>,
}

/// Tests `p_v(λ) = p_u(λ_M) · p_{u⊥}(λ_{M⊥})` on 20 random vectors, together with degree additivity.
#[allow(clippy::too_many_arguments)]
pub fn split_product_check<R: Rng>(
    p_v: &HomogeneousPolynomial,
    p_u: &HomogeneousPolynomial,
    p_perp: &HomogeneousPolynomial,
    v: &GrassmannPoint,
    u: &GrassmannPoint,
    u_perp: &GrassmannPoint,
    m: &Sublattice,
    m_perp: &Sublattice,
    rng: &mut R,
) -> SplitCheck {
    let (du, dp, dv) = (p_u.degrees(), p_perp.degrees(), p_v.degrees());
    if (du.0 + dp.0, du.1 + dp.1) != dv {
        return SplitCheck { passed: false, witness: None };
    }
    let cm = qmat_to_f64(m.coord_map());
    let cp = qmat_to_f64(m_perp.coord_map());
    for _ in 0..20 {
        let lambda: Vec<f64> = (0..v.rank()).map(|_| rng.random_range(-2.0..2.0)).collect();
        let l = DVector::from_column_slice(&lambda);
        let lhs = p_v.poly().eval(&v.adapted_coords(&lambda));
        let xm = &cm * &l;
        let xp = &cp * &l;
        let rhs: Complex64 = p_u.poly().eval(&u.adapted_coords(xm.as_slice()))
            * p_perp.poly().eval(&u_perp.adapted_coords(xp.as_slice()));
        if (lhs - rhs).norm() > 1e-9 * (1.0 + rhs.norm()) {
            return SplitCheck { passed: false, witness: Some(lambda) };
        }
    }
    SplitCheck { passed: true, witness: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qvec_to_f64, rat};
    use crate::poly::Polynomial;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const ORTHO_TOL: f64 = 1e-12;

    fn ii11() -> Lattice {
        Lattice::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn ii11_point() -> GrassmannPoint {
        let span = QMatrix::from_cols(2, &[vec![rat(1, 1), rat(1, 1)]]).unwrap();
        GrassmannPoint::new(&ii11(), &span).unwrap()
    }

    #[test]
    fn ii11_adapted_basis() {
        let v = ii11_point();
        let f = v.adapted_basis();
        let s = 1.0 / 2f64.sqrt();
        assert!((f[(0, 0)] - s).abs() < 1e-12 && (f[(1, 0)] - s).abs() < 1e-12);
        // second column is ±(1,-1)/√2
        assert!((f[(0, 1)].abs() - s).abs() < 1e-12 && (f[(0, 1)] + f[(1, 1)]).abs() < 1e-12);
        assert!(v.orthonormality_defect() < ORTHO_TOL);
        assert!(v.is_rational());
    }

    #[test]
    fn ii11_projection_and_majorant() {
        let v = ii11_point();
        let (p, m) = v.project_exact(&[rat(1, 1), rat(0, 1)]).unwrap();
        assert_eq!(p, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(m, vec![rat(1, 2), rat(-1, 2)]);
        let (a, b) = v.a_b_exact(&[rat(1, 1), rat(0, 1)]).unwrap();
        assert_eq!((a, b), (rat(1, 4), rat(-1, 4)));
        for mm in -3i64..=3 {
            for nn in -3i64..=3 {
                let maj = v.majorant(&[mm as f64, nn as f64]);
                assert!((maj - (mm * mm + nn * nn) as f64).abs() < 1e-12);
            }
        }
        let want = QMatrix::from_rows(&[vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]]).unwrap();
        assert_eq!(v.majorant_gram_exact().unwrap(), want);
    }

    #[test]
    fn rejects_negative_span() {
        let span = QMatrix::from_cols(2, &[vec![rat(1, 1), rat(-1, 1)]]).unwrap();
        assert_eq!(GrassmannPoint::new(&ii11(), &span).unwrap_err(), Error::NotPositiveDefiniteSpan);
        let two = QMatrix::identity(2);
        assert!(matches!(GrassmannPoint::new(&ii11(), &two), Err(Error::WrongDimension { .. })));
    }

    #[test]
    fn definite_point_is_everything() {
        let a2 = Lattice::from_rows(&[vec![2, -1], vec![-1, 2]]).unwrap();
        let v = GrassmannPoint::definite(&a2).unwrap();
        assert_eq!((v.b_plus(), v.b_minus()), (2, 0));
        let (p, m) = v.project(&[0.3, -1.2]);
        assert!((p[0] - 0.3).abs() < 1e-14 && (p[1] + 1.2).abs() < 1e-14);
        assert!(m.iter().all(|t| t.abs() < 1e-14));
        let neg = GrassmannPoint::definite(&a2.rescale(-1).unwrap()).unwrap();
        assert_eq!((neg.b_plus(), neg.b_minus()), (0, 2));
        assert!(neg.orthonormality_defect() < ORTHO_TOL);
    }

    #[test]
    fn negation_swaps_blocks() {
        let v = ii11_point();
        let w = v.negated().unwrap();
        let mu = [rat(2, 1), rat(-1, 3)];
        let (a, b) = v.a_b_exact(&mu).unwrap();
        let (a2, b2) = w.a_b_exact(&mu).unwrap();
        assert_eq!((a2, b2), (-b, -a));
        assert!(w.orthonormality_defect() < ORTHO_TOL);
    }

    fn ii11_split() -> (Sublattice, Sublattice) {
        let l = ii11();
        let m = Sublattice::from_cols(&l, &[vec![1, -1]]).unwrap();
        let mp = m.orthogonal_complement().unwrap();
        (m, mp)
    }

    #[test]
    fn iota_reproduces_ii11_point() {
        let (m, mp) = ii11_split();
        let u = GrassmannPoint::definite(m.lattice()).unwrap();
        let up = GrassmannPoint::definite(mp.lattice()).unwrap();
        let v = GrassmannPoint::iota_embed(&m, &mp, &u, &up).unwrap();
        assert_eq!(v.b_plus(), u.b_plus() + up.b_plus());
        assert_eq!(v.projector_exact(), ii11_point().projector_exact());
        assert!(v.orthonormality_defect() < ORTHO_TOL);
        assert!(v.splits_as(&m, &mp, &u, &up, 1e-12));
        let other = GrassmannPoint::new(&ii11(), &QMatrix::from_cols(2, &[vec![rat(2, 1), rat(1, 1)]]).unwrap()).unwrap();
        assert!(!other.splits_as(&m, &mp, &u, &up, 1e-9));
    }

    #[test]
    fn iota_rejects_mismatched_pieces() {
        let (m, mp) = ii11_split();
        let u = GrassmannPoint::definite(m.lattice()).unwrap();
        let up = GrassmannPoint::definite(mp.lattice()).unwrap();
        assert!(matches!(GrassmannPoint::iota_embed(&m, &m, &u, &u), Err(Error::IncompatibleSublattices(_))));
        assert!(matches!(GrassmannPoint::iota_embed(&m, &mp, &up, &u), Err(Error::IncompatibleSublattices(_))));
    }

    #[test]
    fn split_products() {
        // L = II_{1,1} ⊕ A1 with M = span{(1,-1,0), (0,0,1)} of signature (1,1)
        let l = Lattice::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 2]]).unwrap();
        let m = Sublattice::from_cols(&l, &[vec![1, -1, 0], vec![0, 0, 1]]).unwrap();
        let mp = m.orthogonal_complement().unwrap();
        let u = GrassmannPoint::new(m.lattice(), &QMatrix::from_cols(2, &[vec![rat(0, 1), rat(1, 1)]]).unwrap()).unwrap();
        let up = GrassmannPoint::definite(mp.lattice()).unwrap();
        let v = GrassmannPoint::iota_embed(&m, &mp, &u, &up).unwrap();
        assert_eq!((v.b_plus(), v.b_minus()), (2, 1));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let one = |bp, bm| HomogeneousPolynomial::one(bp, bm);
        assert!(split_product_check(&one(2, 1), &one(1, 1), &one(1, 0), &v, &u, &up, &m, &mp, &mut rng).passed);
        // p_u = x (degree (1,0)), lifted to v
        let pu = HomogeneousPolynomial::new(Polynomial::var(2, 0), 1, (1, 0)).unwrap();
        let pv = HomogeneousPolynomial::split_product(&pu, &one(1, 0));
        assert!(split_product_check(&pv, &pu, &one(1, 0), &v, &u, &up, &m, &mp, &mut rng).passed);
        // p_u = y from u₋, p_{u⊥} = x from u⊥₊
        let pu = HomogeneousPolynomial::new(Polynomial::var(2, 1), 1, (0, 1)).unwrap();
        let pp = HomogeneousPolynomial::new(Polynomial::var(1, 0), 1, (1, 0)).unwrap();
        let pv = HomogeneousPolynomial::split_product(&pu, &pp);
        assert!(split_product_check(&pv, &pu, &pp, &v, &u, &up, &m, &mp, &mut rng).passed);
        let wrong = HomogeneousPolynomial::new(Polynomial::var(3, 0).mul(&Polynomial::var(3, 2)), 2, (1, 1)).unwrap();
        let r = split_product_check(&wrong, &pu, &pp, &v, &u, &up, &m, &mp, &mut rng);
        assert!(!r.passed && r.witness.is_some());
    }

    #[test]
    fn float_constructor_matches_exact() {
        let l = ii11();
        let v = GrassmannPoint::new_f64(&l, &DMatrix::from_column_slice(2, 1, &[1.0, 1.0])).unwrap();
        assert!(!v.is_rational());
        assert!((v.majorant(&[1.0, 2.0]) - 5.0).abs() < 1e-12);
        assert!(GrassmannPoint::new_f64(&l, &DMatrix::from_column_slice(2, 1, &[1.0, -1.0])).is_err());
    }

    proptest! {
        #[test]
        fn projection_properties(t in 0.2f64..5.0, lam in proptest::collection::vec(-5i64..5, 3)) {
            // II_{1,1} ⊕ A1(-1) with v₊ spanned by (t, 1, 0)
            let l = Lattice::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -2]]).unwrap();
            let v = GrassmannPoint::new_f64(&l, &DMatrix::from_column_slice(3, 1, &[t, 1.0, 0.0])).unwrap();
            prop_assert!(v.orthonormality_defect() < 1e-10);
            let x: Vec<f64> = lam.iter().map(|&c| c as f64).collect();
            let (p, m) = v.project(&x);
            let (pp, _) = v.project(&p);
            for i in 0..3 {
                prop_assert!((pp[i] - p[i]).abs() < 1e-10);
                prop_assert!((p[i] + m[i] - x[i]).abs() < 1e-10);
            }
            let g = l.gram_f64();
            let pv = DVector::from_column_slice(&p);
            let mv = DVector::from_column_slice(&m);
            prop_assert!((pv.transpose() * &g * &mv)[(0, 0)].abs() < 1e-9);
            if lam.iter().any(|&c| c != 0) {
                prop_assert!(v.majorant(&x) > 0.0);
            }
        }

        #[test]
        fn exact_and_float_exponents_agree(num in 1i64..6, den in 1i64..6, lam in proptest::collection::vec(-4i64..4, 2)) {
            let span = QMatrix::from_cols(2, &[vec![rat(num, den), rat(1, 1)]]).unwrap();
            let v = GrassmannPoint::new(&ii11(), &span).unwrap();
            let mu = vec![rat(lam[0], 1), rat(lam[1], 3)];
            let (a, b) = v.a_b_exact(&mu).unwrap();
            let (af, bf) = v.a_b_f64(&qvec_to_f64(&mu));
            prop_assert!((crate::linalg::rat_to_f64(&a) - af).abs() < 1e-10);
            prop_assert!((crate::linalg::rat_to_f64(&b) - bf).abs() < 1e-10);
        }
    }
}
