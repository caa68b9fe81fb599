//! Discriminant groups `D_L = L*/L` with their `Q/Z`-valued forms.
//!
//! Elements are stored in coordinates with respect to a cyclic decomposition
//! coming from the Smith normal form of the Gram matrix. Generators are kept as
//! explicit dual vectors (in lattice coordinates), so converting between a
//! dual vector and its class is exact in both directions.

use std::f64::consts::PI;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{frac, int_rat, rat_to_f64, smith_normal_form, zmat_to_q, QMatrix, ZMatrix};

/// Default cap on `|D|` for full enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000;

/// `e(x) = exp(2πix)` for a real `x`.
pub fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

/// `e(r)` for an exact rational; the argument is reduced mod 1 first.
pub fn e_rat(r: &BigRational) -> Complex64 {
    e(rat_to_f64(&frac(r)))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiscElement {
    pub coords: Vec<u64>,
}

impl DiscElement {
    pub fn new(coords: Vec<u64>) -> Self {
        DiscElement { coords }
    }
}

#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    divisors: Vec<u64>,
    generators: Vec<Vec<BigRational>>,
    gram: ZMatrix,
    /// `coords_i = reduce_i · (G x) mod d_i` for a dual vector `x`.
    reduce: Vec<Vec<BigInt>>,
    q_gens: Vec<BigRational>,
    b_gens: Vec<Vec<BigRational>>,
    signature: (usize, usize),
    order: u64,
    components: Vec<Arc<DiscriminantGroup>>,
}

impl DiscriminantGroup {
    /// Builds `D_L` from a non-degenerate even Gram matrix.
    pub fn from_gram(gram: &ZMatrix, signature: (usize, usize)) -> Self {
        let snf = smith_normal_form(gram);
        let mut divisors = Vec::new();
        let mut generators = Vec::new();
        let mut reduce = Vec::new();
        for (i, d) in snf.diag.iter().enumerate() {
            assert!(!d.is_zero(), "degenerate Gram matrix");
            if d.is_one() {
                continue;
            }
            let dq = int_rat(d);
            generators.push(snf.v.col(i).iter().map(|x| int_rat(x) / &dq).collect());
            reduce.push(snf.u.row(i));
            divisors.push(d.to_u64().expect("elementary divisor fits in u64"));
        }
        Self::assemble(gram.clone(), divisors, generators, reduce, signature, Vec::new())
    }

    fn assemble(
        gram: ZMatrix,
        divisors: Vec<u64>,
        generators: Vec<Vec<BigRational>>,
        reduce: Vec<Vec<BigInt>>,
        signature: (usize, usize),
        components: Vec<Arc<DiscriminantGroup>>,
    ) -> Self {
        let gq = zmat_to_q(&gram);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let q_gens = generators.iter().map(|g| frac(&(gq.bilinear(g, g) * &half))).collect();
        let b_gens = generators
            .iter()
            .map(|g| generators.iter().map(|h| frac(&gq.bilinear(g, h))).collect())
            .collect();
        let order = divisors.iter().product();
        DiscriminantGroup { divisors, generators, gram, reduce, q_gens, b_gens, signature, order, components }
    }

    /// `D_{L₁ ⊕ L₂}` with coordinates concatenated, so the element index is the
    /// row-major pair index `i₁·|D₂| + i₂`.
    pub fn direct_sum(a: &Arc<DiscriminantGroup>, b: &Arc<DiscriminantGroup>) -> Self {
        let (n1, n2) = (a.gram.rows(), b.gram.rows());
        let gram = a.gram.block_diag(&b.gram);
        let mut generators = Vec::new();
        for g in &a.generators {
            let mut v = g.clone();
            v.extend(std::iter::repeat_n(BigRational::zero(), n2));
            generators.push(v);
        }
        for g in &b.generators {
            let mut v = vec![BigRational::zero(); n1];
            v.extend(g.iter().cloned());
            generators.push(v);
        }
        let mut reduce = Vec::new();
        for r in &a.reduce {
            let mut v = r.clone();
            v.extend(std::iter::repeat_n(BigInt::zero(), n2));
            reduce.push(v);
        }
        for r in &b.reduce {
            let mut v = vec![BigInt::zero(); n1];
            v.extend(r.iter().cloned());
            reduce.push(v);
        }
        let divisors = a.divisors.iter().chain(&b.divisors).copied().collect();
        let signature = (a.signature.0 + b.signature.0, a.signature.1 + b.signature.1);
        let flat = |g: &Arc<DiscriminantGroup>| -> Vec<Arc<DiscriminantGroup>> {
            if g.components.is_empty() {
                vec![g.clone()]
            } else {
                g.components.clone()
            }
        };
        let mut components = flat(a);
        components.extend(flat(b));
        Self::assemble(gram, divisors, generators, reduce, signature, components)
    }

    /// `D_{L(-1)}`: the same group and coordinates with negated forms.
    pub fn negated(&self) -> Self {
        let gram = self.gram.map(|x| -x);
        let reduce = self.reduce.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        let components = self.components.iter().map(|c| Arc::new(c.negated())).collect();
        Self::assemble(
            gram,
            self.divisors.clone(),
            self.generators.clone(),
            reduce,
            (self.signature.1, self.signature.0),
            components,
        )
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.order as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    /// Rank of the lattice whose coordinates the generators use.
    pub fn ambient_rank(&self) -> usize {
        self.gram.rows()
    }

    /// Generators as dual vectors in lattice coordinates.
    pub fn generators(&self) -> &[Vec<BigRational>] {
        &self.generators
    }

    /// Direct summands, when this group was built with [`DiscriminantGroup::direct_sum`].
    pub fn components(&self) -> &[Arc<DiscriminantGroup>] {
        &self.components
    }

    /// Structural equality of the finite quadratic modules in these coordinates.
    pub fn same_form(&self, other: &DiscriminantGroup) -> bool {
        self.divisors == other.divisors && self.q_gens == other.q_gens && self.b_gens == other.b_gens
    }

    /// Whether `other` is `self(-1)` in the same coordinates.
    pub fn is_dual_of(&self, other: &DiscriminantGroup) -> bool {
        let neg = |r: &BigRational| frac(&-r.clone());
        self.divisors == other.divisors
            && self.q_gens.iter().zip(&other.q_gens).all(|(a, b)| neg(a) == *b)
            && self
                .b_gens
                .iter()
                .zip(&other.b_gens)
                .all(|(ra, rb)| ra.iter().zip(rb).all(|(a, b)| neg(a) == *b))
    }

    // --- indexing ---------------------------------------------------------

    pub fn index_of(&self, x: &DiscElement) -> usize {
        debug_assert_eq!(x.coords.len(), self.divisors.len());
        x.coords.iter().zip(&self.divisors).fold(0usize, |acc, (&c, &d)| acc * d as usize + c as usize)
    }

    pub fn element(&self, mut idx: usize) -> DiscElement {
        let mut coords = vec![0u64; self.divisors.len()];
        for (c, &d) in coords.iter_mut().zip(&self.divisors).rev() {
            *c = (idx % d as usize) as u64;
            idx /= d as usize;
        }
        DiscElement { coords }
    }

    pub fn zero(&self) -> DiscElement {
        DiscElement { coords: vec![0; self.divisors.len()] }
    }

    pub fn elements(&self) -> Result<Vec<DiscElement>> {
        self.elements_with_cap(DEFAULT_ENUMERATION_CAP)
    }

    pub fn elements_with_cap(&self, cap: u64) -> Result<Vec<DiscElement>> {
        if self.order > cap {
            return Err(Error::GroupTooLarge { order: self.order, cap });
        }
        Ok((0..self.len()).map(|i| self.element(i)).collect())
    }

    pub fn add(&self, x: &DiscElement, y: &DiscElement) -> DiscElement {
        let coords = x.coords.iter().zip(&y.coords).zip(&self.divisors).map(|((a, b), d)| (a + b) % d).collect();
        DiscElement { coords }
    }

    pub fn neg(&self, x: &DiscElement) -> DiscElement {
        let coords = x.coords.iter().zip(&self.divisors).map(|(a, d)| (d - a) % d).collect();
        DiscElement { coords }
    }

    pub fn mul(&self, k: i64, x: &DiscElement) -> DiscElement {
        let coords = x
            .coords
            .iter()
            .zip(&self.divisors)
            .map(|(&a, &d)| ((a as i128 * k as i128).rem_euclid(d as i128)) as u64)
            .collect();
        DiscElement { coords }
    }

    // --- forms ------------------------------------------------------------

    /// `q(x) = x²/2 mod 1` in `[0, 1)`.
    pub fn q(&self, x: &DiscElement) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, &ci) in x.coords.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            let ci = BigInt::from(ci);
            acc += &self.q_gens[i] * int_rat(&(&ci * &ci));
            for (j, &cj) in x.coords.iter().enumerate().skip(i + 1) {
                if cj != 0 {
                    acc += &self.b_gens[i][j] * int_rat(&(&ci * BigInt::from(cj)));
                }
            }
        }
        frac(&acc)
    }

    /// `b(x, y) = (x, y) mod 1` in `[0, 1)`.
    pub fn b(&self, x: &DiscElement, y: &DiscElement) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, &ci) in x.coords.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            for (j, &cj) in y.coords.iter().enumerate() {
                if cj != 0 {
                    acc += &self.b_gens[i][j] * int_rat(&BigInt::from(ci * cj));
                }
            }
        }
        frac(&acc)
    }

    /// `(q(x), b(x, y))`.
    pub fn eval(&self, x: &DiscElement, y: &DiscElement) -> (BigRational, BigRational) {
        (self.q(x), self.b(x, y))
    }

    /// `q` for every element, in index order.
    pub fn q_values(&self) -> Result<Vec<BigRational>> {
        Ok(self.elements()?.iter().map(|x| self.q(x)).collect())
    }

    // --- conversions ------------------------------------------------------

    /// Class of a dual vector given in lattice coordinates.
    pub fn from_dual_vector(&self, x: &[BigRational]) -> Result<DiscElement> {
        let gq = zmat_to_q(&self.gram);
        let y = gq.mul_vec(x);
        if !y.iter().all(|v| v.is_integer()) {
            return Err(Error::NotInDual);
        }
        let y: Vec<BigInt> = y.iter().map(|v| v.to_integer()).collect();
        Ok(self.from_pairing_vector(&y))
    }

    /// Class of the dual vector whose pairings with the basis are `y = G x`.
    pub fn from_pairing_vector(&self, y: &[BigInt]) -> DiscElement {
        let coords = self
            .reduce
            .iter()
            .zip(&self.divisors)
            .map(|(row, &d)| {
                let s: BigInt = row.iter().zip(y).map(|(a, b)| a * b).sum();
                s.mod_floor(&BigInt::from(d)).to_u64().unwrap()
            })
            .collect();
        DiscElement { coords }
    }

    /// The representative `Σ cᵢ gᵢ` of a class, in lattice coordinates.
    pub fn lift(&self, x: &DiscElement) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.gram.rows()];
        for (g, &c) in self.generators.iter().zip(&x.coords) {
            if c == 0 {
                continue;
            }
            let c = BigRational::from_integer(BigInt::from(c));
            for (vi, gi) in v.iter_mut().zip(g) {
                *vi += gi * &c;
            }
        }
        v
    }

    // --- diagnostics ------------------------------------------------------

    pub fn gauss_sum(&self) -> Result<Complex64> {
        Ok(self.elements()?.iter().map(|x| e_rat(&self.q(x))).sum())
    }

    /// Milgram: `Σ e(q(γ)) = √|D| · e((b₊ − b₋)/8)`.
    pub fn gauss_sum_check(&self, sig_plus: usize, sig_minus: usize) -> Result<bool> {
        let sum = self.gauss_sum()?;
        let expected = (self.order as f64).sqrt() * e((sig_plus as f64 - sig_minus as f64) / 8.0);
        if (sum - expected).norm() > 1e-10 {
            return Err(Error::MismatchedSignature { sum: format!("{sum}"), expected: format!("{expected}") });
        }
        Ok(true)
    }

    /// Closure of `gens` under addition; fails with a witness if any element has `q ≠ 0`.
    pub fn check_isotropic(self: &Arc<Self>, gens: &[DiscElement]) -> Result<IsotropicSubgroup> {
        if gens.iter().any(|g| g.coords.len() != self.divisors.len() || g.coords.iter().zip(&self.divisors).any(|(c, d)| c >= d)) {
            return Err(Error::NotSubgroup);
        }
        let mut seen = vec![false; self.len()];
        let zero = self.zero();
        seen[self.index_of(&zero)] = true;
        let mut elements = vec![zero];
        let mut k = 0;
        while k < elements.len() {
            let x = elements[k].clone();
            for g in gens {
                let y = self.add(&x, g);
                let idx = self.index_of(&y);
                if !seen[idx] {
                    seen[idx] = true;
                    elements.push(y);
                }
            }
            k += 1;
        }
        elements.sort();
        if let Some(w) = elements.iter().find(|x| !self.q(x).is_zero()) {
            return Err(Error::NotIsotropic { witness: w.coords.clone(), q: self.q(w).to_string() });
        }
        Ok(IsotropicSubgroup { parent: self.clone(), generators: gens.to_vec(), elements })
    }

    /// `{x : b(x, S) = 0}` for an arbitrary subset `S`.
    pub fn orthogonal_of(&self, set: &[DiscElement]) -> Result<Vec<DiscElement>> {
        Ok(self.elements()?.into_iter().filter(|x| set.iter().all(|h| self.b(x, h).is_zero())).collect())
    }

    /// Whether the forms restricted to the subgroup are non-degenerate.
    pub fn is_nondegenerate_on(&self, subgroup: &[DiscElement]) -> bool {
        subgroup
            .iter()
            .filter(|x| x.coords.iter().any(|&c| c != 0))
            .all(|x| subgroup.iter().any(|y| !self.b(x, y).is_zero()))
    }

    /// All subgroups generated by a single isotropic element, deduplicated.
    pub fn cyclic_isotropic_subgroups(self: &Arc<Self>) -> Result<Vec<IsotropicSubgroup>> {
        let mut out: Vec<IsotropicSubgroup> = Vec::new();
        for x in self.elements()? {
            if x.coords.iter().all(|&c| c == 0) || !self.q(&x).is_zero() {
                continue;
            }
            let h = self.check_isotropic(std::slice::from_ref(&x))?;
            if !out.iter().any(|o| o.elements == h.elements) {
                out.push(h);
            }
        }
        Ok(out)
    }
}

/// An isotropic subgroup `H ⊆ D`, with all of its elements enumerated.
#[derive(Clone, Debug)]
pub struct IsotropicSubgroup {
    parent: Arc<DiscriminantGroup>,
    generators: Vec<DiscElement>,
    elements: Vec<DiscElement>,
}

impl IsotropicSubgroup {
    pub fn trivial(parent: &Arc<DiscriminantGroup>) -> Self {
        IsotropicSubgroup { parent: parent.clone(), generators: Vec::new(), elements: vec![parent.zero()] }
    }

    pub fn parent(&self) -> &Arc<DiscriminantGroup> {
        &self.parent
    }

    pub fn generators(&self) -> &[DiscElement] {
        &self.generators
    }

    pub fn elements(&self) -> &[DiscElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `H⊥ = {x ∈ D : b(x, h) = 0 for all h ∈ H}`.
    pub fn h_perp(&self) -> Result<Vec<DiscElement>> {
        let gens = if self.generators.is_empty() { &self.elements } else { &self.generators };
        self.parent.orthogonal_of(gens)
    }
}

/// Rational matrix whose columns are the generators of `D` (diagnostics).
pub fn generator_matrix(d: &DiscriminantGroup) -> QMatrix {
    QMatrix::from_cols(d.ambient_rank(), d.generators()).unwrap_or_else(|| QMatrix::zeros(d.ambient_rank(), 0))
}

/// `|x|` for a rational; helper for tests printing Q/Z values.
pub fn abs_rat(r: &BigRational) -> BigRational {
    r.abs()
}
