//! Dense vectors in tensor products `C[D₁] ⊗ … ⊗ C[D_k]`.
//!
//! Coefficients are stored row-major over the factors, each factor indexed by
//! the linear element index of its discriminant group.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::disc::{DiscElement, DiscriminantGroup};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct IndexSpace {
    factors: Vec<Arc<DiscriminantGroup>>,
}

impl fmt::Debug for IndexSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.factors.iter().map(|d| format!("{:?}", d.divisors())).collect();
        write!(f, "IndexSpace[{}]", dims.join(" x "))
    }
}

impl IndexSpace {
    pub fn new(factors: Vec<Arc<DiscriminantGroup>>) -> Self {
        IndexSpace { factors }
    }

    pub fn single(d: &Arc<DiscriminantGroup>) -> Self {
        IndexSpace { factors: vec![d.clone()] }
    }

    pub fn factors(&self) -> &[Arc<DiscriminantGroup>] {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|d| d.len()).collect()
    }

    pub fn len(&self) -> usize {
        self.factors.iter().map(|d| d.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Same factor groups with identical forms, position by position.
    pub fn compatible(&self, other: &IndexSpace) -> bool {
        self.factors.len() == other.factors.len()
            && self.factors.iter().zip(&other.factors).all(|(a, b)| Arc::ptr_eq(a, b) || a.same_form(b))
    }

    pub fn linear(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.factors.len());
        idx.iter().zip(&self.factors).fold(0, |acc, (&i, d)| acc * d.len() + i)
    }

    pub fn multi(&self, mut lin: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (o, d) in out.iter_mut().zip(&self.factors).rev() {
            *o = lin % d.len();
            lin /= d.len();
        }
        out
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.factors.len()];
        for i in (0..self.factors.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.factors[i + 1].len();
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct RepVector {
    space: IndexSpace,
    data: Vec<Complex64>,
}

impl RepVector {
    pub fn zeros(space: IndexSpace) -> Self {
        let n = space.len();
        RepVector { space, data: vec![Complex64::new(0.0, 0.0); n] }
    }

    pub fn from_data(space: IndexSpace, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != space.len() {
            return Err(Error::IndexMismatch(format!("{} coefficients for a space of size {}", data.len(), space.len())));
        }
        Ok(RepVector { space, data })
    }

    /// `e_{γ₁} ⊗ … ⊗ e_{γ_k}`.
    pub fn basis(space: IndexSpace, idx: &[usize]) -> Self {
        let mut v = Self::zeros(space);
        let l = v.space.linear(idx);
        v.data[l] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn basis_element(d: &Arc<DiscriminantGroup>, x: &DiscElement) -> Self {
        Self::basis(IndexSpace::single(d), &[d.index_of(x)])
    }

    pub fn space(&self) -> &IndexSpace {
        &self.space
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn get(&self, idx: &[usize]) -> Complex64 {
        self.data[self.space.linear(idx)]
    }

    pub fn set(&mut self, idx: &[usize], z: Complex64) {
        let l = self.space.linear(idx);
        self.data[l] = z;
    }

    pub fn add_at(&mut self, idx: &[usize], z: Complex64) {
        let l = self.space.linear(idx);
        self.data[l] += z;
    }

    fn check_same(&self, other: &RepVector) -> Result<()> {
        if !self.space.compatible(&other.space) {
            return Err(Error::IndexMismatch(format!("{:?} vs {:?}", self.space, other.space)));
        }
        Ok(())
    }

    pub fn add(&self, other: &RepVector) -> Result<RepVector> {
        self.check_same(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(RepVector { space: self.space.clone(), data })
    }

    pub fn sub(&self, other: &RepVector) -> Result<RepVector> {
        self.check_same(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(RepVector { space: self.space.clone(), data })
    }

    pub fn scale(&self, s: Complex64) -> RepVector {
        RepVector { space: self.space.clone(), data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn conj(&self) -> RepVector {
        RepVector { space: self.space.clone(), data: self.data.iter().map(|a| a.conj()).collect() }
    }

    pub fn norm_inf(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_diff(&self, other: &RepVector) -> Result<f64> {
        Ok(self.sub(other)?.norm_inf())
    }

    /// Scalar value of a vector over the empty tensor product or trivial groups.
    pub fn scalar(&self) -> Option<Complex64> {
        (self.data.len() == 1).then(|| self.data[0])
    }

    pub fn tensor(&self, other: &RepVector) -> RepVector {
        let mut factors = self.space.factors.clone();
        factors.extend(other.space.factors.iter().cloned());
        let mut data = Vec::with_capacity(self.data.len() * other.data.len());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        RepVector { space: IndexSpace::new(factors), data }
    }

    /// Reorders the axes: axis `i` of the result is axis `perm[i]` of `self`.
    pub fn permute_axes(&self, perm: &[usize]) -> Result<RepVector> {
        let k = self.space.arity();
        let mut seen = vec![false; k];
        if perm.len() != k || perm.iter().any(|&p| p >= k || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::IndexMismatch(format!("bad permutation {perm:?}")));
        }
        let factors: Vec<_> = perm.iter().map(|&p| self.space.factors[p].clone()).collect();
        let space = IndexSpace::new(factors);
        let mut out = RepVector::zeros(space);
        for (lin, z) in self.data.iter().enumerate() {
            let old = self.space.multi(lin);
            let new: Vec<usize> = perm.iter().map(|&p| old[p]).collect();
            let l = out.space.linear(&new);
            out.data[l] = *z;
        }
        Ok(out)
    }

    /// Merges axes `i` and `i + 1` into one factor `merged`, which must be
    /// their direct sum in the same coordinate order.
    pub fn merge_axes(&self, i: usize, merged: &Arc<DiscriminantGroup>) -> Result<RepVector> {
        let f = &self.space.factors;
        if i + 1 >= f.len() {
            return Err(Error::IndexMismatch("merge past the last axis".into()));
        }
        let expected: Vec<u64> = f[i].divisors().iter().chain(f[i + 1].divisors()).copied().collect();
        if merged.divisors() != expected.as_slice() {
            return Err(Error::IndexMismatch("merged factor is not the direct sum".into()));
        }
        let mut factors = f[..i].to_vec();
        factors.push(merged.clone());
        factors.extend(f[i + 2..].iter().cloned());
        Ok(RepVector { space: IndexSpace::new(factors), data: self.data.clone() })
    }

    /// Splits axis `i` (a direct sum) into its two summands `a ⊕ b`.
    pub fn split_axis(&self, i: usize, a: &Arc<DiscriminantGroup>, b: &Arc<DiscriminantGroup>) -> Result<RepVector> {
        let f = &self.space.factors;
        let expected: Vec<u64> = a.divisors().iter().chain(b.divisors()).copied().collect();
        if i >= f.len() || f[i].divisors() != expected.as_slice() {
            return Err(Error::IndexMismatch("axis is not the requested direct sum".into()));
        }
        let mut factors = f[..i].to_vec();
        factors.push(a.clone());
        factors.push(b.clone());
        factors.extend(f[i + 1..].iter().cloned());
        Ok(RepVector { space: IndexSpace::new(factors), data: self.data.clone() })
    }

    /// Contracts axis `ax` of `self` with axis `bx` of `other` by the bilinear
    /// pairing `⟨e_γ, e*_δ⟩ = [γ = δ]`. The factors must be mutually dual.
    /// The result carries the remaining axes of `self`, then those of `other`.
    pub fn pair_axes(&self, ax: usize, other: &RepVector, bx: usize) -> Result<RepVector> {
        let (fa, fb) = (&self.space.factors, &other.space.factors);
        if ax >= fa.len() || bx >= fb.len() {
            return Err(Error::IndexMismatch("pairing axis out of range".into()));
        }
        if !fa[ax].is_dual_of(&fb[bx]) {
            return Err(Error::IndexMismatch(format!(
                "pairing C[D] against a non-dual factor ({:?} vs {:?})",
                fa[ax].divisors(),
                fb[bx].divisors()
            )));
        }
        let n = fa[ax].len();
        let mut factors: Vec<_> = fa.iter().enumerate().filter(|(i, _)| *i != ax).map(|(_, f)| f.clone()).collect();
        factors.extend(fb.iter().enumerate().filter(|(i, _)| *i != bx).map(|(_, f)| f.clone()));
        let space = IndexSpace::new(factors);
        let mut out = RepVector::zeros(space);

        let (sa, sb) = (self.space.strides(), other.space.strides());
        let rest_a: Vec<usize> = (0..fa.len()).filter(|&i| i != ax).collect();
        let rest_b: Vec<usize> = (0..fb.len()).filter(|&i| i != bx).collect();
        for (lin, slot) in out.data.iter_mut().enumerate() {
            let idx = out.space.multi(lin);
            let base_a: usize = rest_a.iter().zip(&idx).map(|(&ax_, &i)| sa[ax_] * i).sum();
            let base_b: usize = rest_b.iter().zip(&idx[rest_a.len()..]).map(|(&bx_, &i)| sb[bx_] * i).sum();
            let mut acc = Complex64::new(0.0, 0.0);
            for g in 0..n {
                acc += self.data[base_a + g * sa[ax]] * other.data[base_b + g * sb[bx]];
            }
            *slot = acc;
        }
        Ok(out)
    }

    /// `⟨U, V⟩`: contracts every axis of `self` with the leading axes of `other`.
    pub fn pair(&self, other: &RepVector) -> Result<RepVector> {
        let k = self.space.arity();
        let (fa, fb) = (&self.space.factors, &other.space.factors);
        if fb.len() < k || !fa.iter().zip(fb).all(|(a, b)| a.is_dual_of(b)) {
            return Err(Error::IndexMismatch(format!("cannot pair {:?} with {:?}", self.space, other.space)));
        }
        let space = IndexSpace::new(fb[k..].to_vec());
        let rest = space.len();
        let mut out = RepVector::zeros(space);
        for (i, u) in self.data.iter().enumerate() {
            if *u == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (r, slot) in out.data.iter_mut().enumerate() {
                *slot += u * other.data[i * rest + r];
            }
        }
        Ok(out)
    }
}

/// `Σ_δ e_δ ⊗ e*_δ` in `C[D] ⊗ C[D(-1)]`.
pub fn identity_vector(d: &Arc<DiscriminantGroup>) -> RepVector {
    let dual = Arc::new(d.negated());
    let space = IndexSpace::new(vec![d.clone(), dual]);
    let mut v = RepVector::zeros(space);
    for i in 0..d.len() {
        v.set(&[i, i], Complex64::new(1.0, 0.0));
    }
    v
}
