//! Even lattices given by a Gram matrix, primitive sublattices and overlattices.
//!
//! Vectors are columns of coordinates with respect to the lattice basis; a
//! sublattice is given by the matrix whose columns are its basis vectors in
//! ambient coordinates.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::disc::{DiscElement, DiscriminantGroup, IsotropicSubgroup};
use crate::error::{Error, Result};
use crate::linalg::{int_rat, module_basis, qmat_to_z, smith_normal_form, zmat_to_q, Mat, QMatrix, ZMatrix};

#[derive(Clone, Debug)]
pub struct Lattice {
    gram: ZMatrix,
    gram_q: QMatrix,
    signature: (usize, usize),
    disc: Arc<DiscriminantGroup>,
    name: Option<String>,
}

impl Lattice {
    pub fn new(gram: ZMatrix) -> Result<Self> {
        if !gram.is_square() || gram.rows() == 0 {
            return Err(Error::NotSquare);
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let two = BigInt::from(2);
        if let Some(index) = (0..gram.rows()).find(|&i| !(&gram[(i, i)] % &two).is_zero()) {
            return Err(Error::NotEven { index });
        }
        let gram_q = zmat_to_q(&gram);
        let (pos, neg, zero) = gram_q.inertia();
        if zero > 0 {
            return Err(Error::Degenerate);
        }
        let disc = Arc::new(DiscriminantGroup::from_gram(&gram, (pos, neg)));
        Ok(Lattice { gram, gram_q, signature: (pos, neg), disc, name: None })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(ZMatrix::from_i64_rows(rows).ok_or(Error::NotSquare)?)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn gram(&self) -> &ZMatrix {
        &self.gram
    }

    pub fn gram_q(&self) -> &QMatrix {
        &self.gram_q
    }

    pub fn gram_f64(&self) -> nalgebra::DMatrix<f64> {
        crate::linalg::zmat_to_f64(&self.gram)
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn sig_plus(&self) -> usize {
        self.signature.0
    }

    pub fn sig_minus(&self) -> usize {
        self.signature.1
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature.1 == 0
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature.0 == 0
    }

    pub fn disc(&self) -> &Arc<DiscriminantGroup> {
        &self.disc
    }

    pub fn is_unimodular(&self) -> bool {
        self.disc.is_trivial()
    }

    /// `(G⁻¹, |det G|)`.
    pub fn dual_data(&self) -> (QMatrix, BigInt) {
        let inv = self.gram_q.inverse().expect("non-degenerate");
        (inv, self.gram.det().abs())
    }

    /// `(x, y)` for rational coordinate vectors.
    pub fn pair(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        self.gram_q.bilinear(x, y)
    }

    pub fn norm(&self, x: &[BigRational]) -> BigRational {
        self.pair(x, x)
    }

    /// Whether `x` (in lattice coordinates) lies in `L*`.
    pub fn in_dual(&self, x: &[BigRational]) -> bool {
        self.gram_q.mul_vec(x).iter().all(|v| v.is_integer())
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let gram = self.gram.block_diag(&other.gram);
        let gram_q = zmat_to_q(&gram);
        let signature = (self.signature.0 + other.signature.0, self.signature.1 + other.signature.1);
        let disc = Arc::new(DiscriminantGroup::direct_sum(&self.disc, &other.disc));
        let name = match (&self.name, &other.name) {
            (Some(a), Some(b)) => Some(format!("{a}+{b}")),
            _ => None,
        };
        Lattice { gram, gram_q, signature, disc, name }
    }

    /// `L(s)`. For `s = -1` the discriminant group keeps its coordinates, so
    /// `e_γ` and `e*_γ` stay aligned.
    pub fn rescale(&self, s: i64) -> Result<Lattice> {
        match s {
            0 => Err(Error::Degenerate),
            1 => Ok(self.clone()),
            -1 => Ok(Lattice {
                gram: self.gram.map(|x| -x),
                gram_q: self.gram_q.map(|x| -x),
                signature: (self.signature.1, self.signature.0),
                disc: Arc::new(self.disc.negated()),
                name: self.name.as_ref().map(|n| format!("{n}(-1)")),
            }),
            _ => Lattice::new(self.gram.scale(&BigInt::from(s))),
        }
    }
}

/// A primitive non-degenerate sublattice `M ⊆ L`.
#[derive(Clone, Debug)]
pub struct Sublattice {
    ambient: Lattice,
    basis: ZMatrix,
    lattice: Lattice,
    /// `G_M⁻¹ Bᵀ G`: ambient coordinates to coordinates of the projection onto `M_R`.
    coord_map: QMatrix,
}

impl Sublattice {
    /// Requires a primitive basis.
    pub fn new(ambient: &Lattice, basis: ZMatrix) -> Result<Self> {
        let (sub, primitive) = Self::saturated(ambient, basis.clone())?;
        if !primitive {
            let snf = smith_normal_form(&basis);
            return Err(Error::NotPrimitive { divisors: snf.diag.iter().map(|d| d.to_string()).collect() });
        }
        Ok(sub)
    }

    pub fn from_cols(ambient: &Lattice, cols: &[Vec<i64>]) -> Result<Self> {
        let basis = ZMatrix::from_i64_cols(ambient.rank(), cols).ok_or(Error::WrongDimension {
            expected: ambient.rank(),
            got: cols.first().map_or(0, Vec::len),
        })?;
        Self::new(ambient, basis)
    }

    /// Saturates the span first; the flag says whether the input was primitive.
    pub fn saturated(ambient: &Lattice, basis: ZMatrix) -> Result<(Self, bool)> {
        if basis.rows() != ambient.rank() {
            return Err(Error::WrongDimension { expected: ambient.rank(), got: basis.rows() });
        }
        if basis.cols() == 0 || zmat_to_q(&basis).rank() < basis.cols() {
            return Err(Error::RankDeficient);
        }
        let (sat, primitive) = basis.saturate_columns();
        let basis = if primitive { basis } else { sat };
        let induced = basis.transpose().mul(ambient.gram()).mul(&basis);
        let lattice = match Lattice::new(induced) {
            Ok(l) => l,
            Err(Error::Degenerate) => return Err(Error::DegenerateSublattice),
            Err(e) => return Err(e),
        };
        let bq = zmat_to_q(&basis);
        let ginv = lattice.gram_q().inverse().expect("non-degenerate");
        let coord_map = ginv.mul(&bq.transpose()).mul(ambient.gram_q());
        Ok((Sublattice { ambient: ambient.clone(), basis, lattice, coord_map }, primitive))
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn basis(&self) -> &ZMatrix {
        &self.basis
    }

    pub fn basis_q(&self) -> QMatrix {
        zmat_to_q(&self.basis)
    }

    pub fn induced_gram(&self) -> &ZMatrix {
        self.lattice.gram()
    }

    /// `M` as a lattice in its own right.
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// `G_M⁻¹ Bᵀ G`.
    pub fn coord_map(&self) -> &QMatrix {
        &self.coord_map
    }

    /// `M⊥ ∩ L`, with a saturated basis.
    pub fn orthogonal_complement(&self) -> Result<Sublattice> {
        let constraints = self.basis.transpose().mul(self.ambient.gram());
        let kernel = constraints.integer_kernel();
        if kernel.cols() == 0 {
            return Err(Error::RankDeficient);
        }
        Sublattice::new(&self.ambient, kernel)
    }

    /// Coordinates (in the basis of `M`) of the orthogonal projection of `λ` onto `M_R`.
    pub fn coordinates(&self, lambda: &[BigRational]) -> Vec<BigRational> {
        self.coord_map.mul_vec(lambda)
    }

    /// Orthogonal projection onto `M_R`, in ambient coordinates.
    pub fn projection(&self, lambda: &[BigRational]) -> Vec<BigRational> {
        self.basis_q().mul_vec(&self.coordinates(lambda))
    }

    /// Ambient coordinates of a vector given in the basis of `M`.
    pub fn embed(&self, coords: &[BigRational]) -> Vec<BigRational> {
        self.basis_q().mul_vec(coords)
    }

    /// Whether `λ` is orthogonal to every basis vector of `M`.
    pub fn is_orthogonal(&self, lambda: &[BigRational]) -> bool {
        let bg = zmat_to_q(&self.basis.transpose().mul(self.ambient.gram()));
        bg.mul_vec(lambda).iter().all(Zero::is_zero)
    }

    /// `π_M(λ) ∈ D_M` for `λ ∈ L*`.
    pub fn pi_m(&self, lambda: &[BigRational]) -> Result<DiscElement> {
        if lambda.len() != self.ambient.rank() {
            return Err(Error::WrongDimension { expected: self.ambient.rank(), got: lambda.len() });
        }
        let y = self.ambient.gram_q().mul_vec(lambda);
        if !y.iter().all(|v| v.is_integer()) {
            return Err(Error::NotInDual);
        }
        let y: Vec<BigInt> = y.iter().map(|v| v.to_integer()).collect();
        let pairing: Vec<BigInt> = (0..self.rank())
            .map(|j| (0..self.ambient.rank()).map(|i| &self.basis[(i, j)] * &y[i]).sum())
            .collect();
        Ok(self.lattice.disc().from_pairing_vector(&pairing))
    }

    /// Columns `C` with `[B | C]` a unimodular basis of `L`.
    pub fn complement_basis(&self) -> ZMatrix {
        let snf = smith_normal_form(&self.basis);
        let uinv = snf.u_inverse();
        let n = self.ambient.rank();
        uinv.select_cols(&(self.rank()..n).collect::<Vec<_>>())
    }
}

/// An embedding `Λ ⊆ L` of even lattices of equal rank.
#[derive(Clone, Debug)]
pub struct OverlatticeEmbedding {
    small: Lattice,
    big: Lattice,
    /// Λ-coordinates to L-coordinates.
    to_big: QMatrix,
    /// Basis of `L` in Λ-coordinates (`to_big⁻¹`).
    glue: QMatrix,
    index: u64,
    subgroup: IsotropicSubgroup,
    /// For each `δ ∈ D_Λ` (by index): the class `δ + H ∈ D_L` when `δ ∈ H⊥`.
    coset_map: Vec<Option<usize>>,
}

impl OverlatticeEmbedding {
    /// The overlattice generated by `Λ` and lifts of `H`.
    pub fn from_isotropic(small: &Lattice, h: &IsotropicSubgroup) -> Result<Self> {
        if !(Arc::ptr_eq(h.parent(), small.disc()) || h.parent().same_form(small.disc())) {
            return Err(Error::NotSubgroup);
        }
        let n = small.rank();
        let mut gens = (0..n)
            .map(|j| (0..n).map(|i| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
            .collect::<Vec<Vec<BigRational>>>();
        for x in h.elements() {
            gens.push(small.disc().lift(x));
        }
        let glue = module_basis(&Mat::from_cols(n, &gens).expect("consistent lengths"));
        let big_gram = glue.transpose().mul(small.gram_q()).mul(&glue);
        let big_gram = qmat_to_z(&big_gram).ok_or_else(|| Error::NotIsotropic {
            witness: Vec::new(),
            q: "non-integral pairing".into(),
        })?;
        let big = Lattice::new(big_gram)?;
        let to_big = glue.inverse().expect("full rank");
        Self::from_parts(small, &big, to_big)
    }

    /// `Λ = M ⊕ M⊥ ⊆ L`, with `Λ`-coordinates ordered as `(M, M⊥)`.
    pub fn for_orthogonal_sum(m: &Sublattice, m_perp: &Sublattice) -> Result<Self> {
        if m.ambient().gram() != m_perp.ambient().gram() {
            return Err(Error::IncompatibleSublattices("different ambient lattices".into()));
        }
        let cross = m.basis().transpose().mul(m.ambient().gram()).mul(m_perp.basis());
        if !cross.is_zero_matrix() || m.rank() + m_perp.rank() != m.ambient().rank() {
            return Err(Error::IncompatibleSublattices("not an orthogonal decomposition".into()));
        }
        let small = m.lattice().direct_sum(m_perp.lattice());
        let to_big = zmat_to_q(&m.basis().hcat(m_perp.basis()));
        Self::from_parts(&small, m.ambient(), to_big)
    }

    /// General constructor from the coordinate change `Λ → L`.
    pub fn from_parts(small: &Lattice, big: &Lattice, to_big: QMatrix) -> Result<Self> {
        let n = small.rank();
        if big.rank() != n || to_big.rows() != n || to_big.cols() != n {
            return Err(Error::WrongDimension { expected: n, got: big.rank() });
        }
        if qmat_to_z(&to_big).is_none() {
            return Err(Error::IncompatibleSublattices("small lattice is not contained in the big one".into()));
        }
        if to_big.transpose().mul(big.gram_q()).mul(&to_big) != *small.gram_q() {
            return Err(Error::IncompatibleSublattices("Gram matrices do not match".into()));
        }
        let glue = to_big.inverse().ok_or(Error::Degenerate)?;
        let index = glue.det().abs().recip();
        let index = index.to_integer().to_u64().expect("index fits in u64");

        let dl = small.disc();
        let mut h_gens = Vec::new();
        for j in 0..n {
            h_gens.push(dl.from_dual_vector(&glue.col(j))?);
        }
        let subgroup = dl.check_isotropic(&h_gens)?;

        let d_big = big.disc();
        let mut coset_map = Vec::with_capacity(dl.len());
        for idx in 0..dl.len() {
            let y = to_big.mul_vec(&dl.lift(&dl.element(idx)));
            let gy = big.gram_q().mul_vec(&y);
            if gy.iter().all(|v| v.is_integer()) {
                let gy: Vec<BigInt> = gy.iter().map(|v| v.to_integer()).collect();
                coset_map.push(Some(d_big.index_of(&d_big.from_pairing_vector(&gy))));
            } else {
                coset_map.push(None);
            }
        }
        Ok(OverlatticeEmbedding { small: small.clone(), big: big.clone(), to_big, glue, index, subgroup, coset_map })
    }

    /// `Λ(-1) ⊆ L(-1)` with the same coordinates.
    pub fn negated(&self) -> Result<Self> {
        Self::from_parts(&self.small.rescale(-1)?, &self.big.rescale(-1)?, self.to_big.clone())
    }

    pub fn small(&self) -> &Lattice {
        &self.small
    }

    pub fn big(&self) -> &Lattice {
        &self.big
    }

    pub fn glue(&self) -> &QMatrix {
        &self.glue
    }

    pub fn to_big(&self) -> &QMatrix {
        &self.to_big
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// `H = L/Λ ⊆ D_Λ`.
    pub fn subgroup(&self) -> &IsotropicSubgroup {
        &self.subgroup
    }

    pub fn coset_map(&self) -> &[Option<usize>] {
        &self.coset_map
    }
}

/// `|det glue| = 1/index` and integrality checks, for tests and diagnostics.
pub fn glue_determinant(emb: &OverlatticeEmbedding) -> BigRational {
    emb.glue().det().abs()
}

/// BigInt to rational, re-exported for callers composing coordinates by hand.
pub fn to_rat_vec(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(int_rat).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use proptest::prelude::*;

    fn lat(rows: &[Vec<i64>]) -> Lattice {
        Lattice::from_rows(rows).unwrap()
    }

    fn ii11() -> Lattice {
        lat(&[vec![0, 1], vec![1, 0]])
    }

    #[test]
    fn construction_and_signature() {
        assert_eq!(lat(&[vec![2]]).signature(), (1, 0));
        assert_eq!(ii11().signature(), (1, 1));
        assert_eq!(lat(&[vec![2, 1], vec![1, 2]]).signature(), (2, 0));
        assert_eq!(Lattice::from_rows(&[vec![1]]).unwrap_err(), Error::NotEven { index: 0 });
        assert_eq!(Lattice::from_rows(&[vec![2, 1], vec![0, 2]]).unwrap_err(), Error::NotSymmetric);
        assert_eq!(Lattice::from_rows(&[vec![2, 2], vec![2, 2]]).unwrap_err(), Error::Degenerate);
    }

    #[test]
    fn dual_data_examples() {
        let (inv, d) = lat(&[vec![2]]).dual_data();
        assert_eq!(inv[(0, 0)], rat(1, 2));
        assert_eq!(d, BigInt::from(2));
        let (inv, d) = ii11().dual_data();
        assert_eq!(inv, zmat_to_q(ii11().gram()));
        assert_eq!(d, BigInt::one());
        let a2 = lat(&[vec![2, 1], vec![1, 2]]);
        let (inv, d) = a2.dual_data();
        assert_eq!(inv.mul(a2.gram_q()), QMatrix::identity(2));
        assert_eq!(inv[(0, 1)], rat(-1, 3));
        assert_eq!(d, BigInt::from(3));
    }

    #[test]
    fn sums_and_rescaling() {
        let s = lat(&[vec![2]]).direct_sum(&lat(&[vec![-2]]));
        assert_eq!(s.signature(), (1, 1));
        assert_eq!(s.gram(), &ZMatrix::from_i64_rows(&[vec![2, 0], vec![0, -2]]).unwrap());
        assert_eq!(ii11().direct_sum(&lat(&[vec![2]])).signature(), (2, 1));
        let a1 = lat(&[vec![2]]);
        let m = a1.rescale(-1).unwrap();
        assert_eq!(m.signature(), (0, 1));
        assert_eq!(m.rescale(-1).unwrap().gram(), a1.gram());
        assert_eq!(ii11().rescale(-1).unwrap().signature(), (1, 1));
        assert!(a1.disc().is_dual_of(m.disc()));
        assert_eq!(a1.rescale(0).unwrap_err(), Error::Degenerate);
        assert_eq!(a1.rescale(3).unwrap().disc().order(), 6);
    }

    #[test]
    fn complements_in_ii11() {
        let l = ii11();
        let m = Sublattice::from_cols(&l, &[vec![1, 1]]).unwrap();
        let c = m.orthogonal_complement().unwrap();
        let col = c.basis().col(0);
        assert!(col == vec![BigInt::from(1), BigInt::from(-1)] || col == vec![BigInt::from(-1), BigInt::from(1)]);
        assert_eq!(c.induced_gram()[(0, 0)], BigInt::from(-2));

        let m2 = Sublattice::from_cols(&l, &[vec![1, -1]]).unwrap();
        let c2 = m2.orthogonal_complement().unwrap();
        assert_eq!(c2.induced_gram()[(0, 0)], BigInt::from(2));

        let b = lat(&[vec![2, 0], vec![0, -2]]);
        let c3 = Sublattice::from_cols(&b, &[vec![1, 0]]).unwrap().orthogonal_complement().unwrap();
        assert_eq!(c3.basis().col(0).iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![BigInt::zero(), BigInt::one()]);
    }

    #[test]
    fn sublattice_errors() {
        let l = ii11();
        assert!(matches!(Sublattice::from_cols(&l, &[vec![2, 2]]), Err(Error::NotPrimitive { .. })));
        assert_eq!(Sublattice::from_cols(&l, &[vec![1, 0]]).unwrap_err(), Error::DegenerateSublattice);
        assert_eq!(Sublattice::from_cols(&l, &[vec![1, 1], vec![2, 2]]).unwrap_err(), Error::RankDeficient);
        let (s, prim) = Sublattice::saturated(&l, ZMatrix::from_i64_cols(2, &[vec![2, 2]]).unwrap()).unwrap();
        assert!(!prim);
        assert_eq!(s.induced_gram()[(0, 0)], BigInt::from(2));
    }

    #[test]
    fn pi_m_examples() {
        let l = ii11();
        let m = Sublattice::from_cols(&l, &[vec![1, 1]]).unwrap();
        let g = m.pi_m(&[rat(1, 1), rat(0, 1)]).unwrap();
        assert_eq!(g.coords, vec![1]);
        assert_eq!(m.projection(&[rat(1, 1), rat(0, 1)]), vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(m.pi_m(&[rat(1, 1), rat(-1, 1)]).unwrap().coords, vec![0]);
        assert_eq!(m.pi_m(&[rat(1, 1), rat(1, 1)]).unwrap().coords, vec![0]);
        let a1 = lat(&[vec![2]]).direct_sum(&lat(&[vec![2]]));
        let m1 = Sublattice::from_cols(&a1, &[vec![1, 0]]).unwrap();
        assert_eq!(m1.pi_m(&[rat(1, 3), rat(0, 1)]).unwrap_err(), Error::NotInDual);
    }

    #[test]
    fn overlattice_of_a1_plus_a1_neg() {
        let small = lat(&[vec![2, 0], vec![0, -2]]);
        let d = small.disc().clone();
        let h = d.check_isotropic(&[DiscElement::new(vec![1, 1])]).unwrap();
        let emb = OverlatticeEmbedding::from_isotropic(&small, &h).unwrap();
        assert_eq!(emb.index(), 2);
        assert_eq!(emb.big().signature(), (1, 1));
        assert!(emb.big().is_unimodular());
        assert_eq!(emb.big().gram().det().abs(), BigInt::one());
        assert_eq!(glue_determinant(&emb), rat(1, 2));
        let mapped = emb.coset_map().iter().filter(|x| x.is_some()).count();
        assert_eq!(mapped, 2);

        let triv = OverlatticeEmbedding::from_isotropic(&small, &IsotropicSubgroup::trivial(&d)).unwrap();
        assert_eq!(triv.index(), 1);
        assert_eq!(triv.big().gram(), small.gram());

        assert!(matches!(d.check_isotropic(&[DiscElement::new(vec![1, 0])]), Err(Error::NotIsotropic { .. })));
    }

    #[test]
    fn orthogonal_sum_embedding() {
        let l = ii11().direct_sum(&lat(&[vec![2]]));
        let m = Sublattice::from_cols(&l, &[vec![1, -1, 0], vec![0, 0, 1]]).unwrap();
        let mp = m.orthogonal_complement().unwrap();
        let emb = OverlatticeEmbedding::for_orthogonal_sum(&m, &mp).unwrap();
        let dl = emb.small().disc().order();
        assert_eq!(emb.index() * emb.index() * l.disc().order(), dl);
        // every fibre of the coset map has |H| elements
        let mut counts = vec![0usize; l.disc().len()];
        for x in emb.coset_map().iter().flatten() {
            counts[*x] += 1;
        }
        assert!(counts.iter().all(|&c| c == emb.subgroup().order()));
    }

    #[test]
    fn complement_basis_is_unimodular() {
        let l = ii11().direct_sum(&lat(&[vec![2]]));
        let m = Sublattice::from_cols(&l, &[vec![1, -1, 0]]).unwrap();
        let full = m.basis().hcat(&m.complement_basis());
        assert_eq!(full.det().abs(), BigInt::one());
    }

    fn small_even_lattice() -> impl Strategy<Value = Lattice> {
        (proptest::collection::vec(-3i64..4, 6), proptest::collection::vec(-2i64..3, 3)).prop_filter_map(
            "degenerate",
            |(off, diag)| {
                let g = vec![
                    vec![2 * diag[0], off[0], off[1]],
                    vec![off[0], 2 * diag[1], off[2]],
                    vec![off[1], off[2], 2 * diag[2]],
                ];
                Lattice::from_rows(&g).ok()
            },
        )
    }

    proptest! {
        #[test]
        fn complement_ranks_add_up(l in small_even_lattice(), v in proptest::collection::vec(-2i64..3, 3)) {
            if let Ok(m) = Sublattice::from_cols(&l, &[v]) {
                if let Ok(c) = m.orthogonal_complement() {
                    prop_assert_eq!(m.rank() + c.rank(), l.rank());
                    let (_, prim) = c.basis().saturate_columns();
                    prop_assert!(prim);
                    let (p, n) = l.signature();
                    let (mp, mn) = m.lattice().signature();
                    prop_assert_eq!(c.lattice().signature(), (p - mp, n - mn));
                }
            }
        }

        #[test]
        fn disc_order_matches_det(l in small_even_lattice(), l2 in small_even_lattice()) {
            prop_assert_eq!(BigInt::from(l.disc().order()), l.gram().det().abs());
            let s = l.direct_sum(&l2);
            prop_assert_eq!(s.disc().order(), l.disc().order() * l2.disc().order());
            let r = l.rescale(-1).unwrap();
            prop_assert_eq!(r.signature(), (l.sig_minus(), l.sig_plus()));
            let rr = r.rescale(-1).unwrap();
            prop_assert_eq!(rr.gram(), l.gram());
        }
    }
}
