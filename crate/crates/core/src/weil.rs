//! The Weil representation on `C[D]`, arrow operators between an overlattice
//! and a sublattice of finite index, and their action on tensor factors.
//!
//! Each factor of an [`IndexSpace`] carries its own signature, so applying
//! `ρ(g)` to a tensor-product vector uses the product representation. The dual
//! representation is the one attached to the negated form `D(-1)`.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::disc::{e, e_rat, DiscriminantGroup};
use crate::error::{Error, Result};
use crate::lattice::OverlatticeEmbedding;
use crate::metaplectic::{Generator, MetaplecticElement, Token};
use crate::repvec::{IndexSpace, RepVector};

pub type CMatrix = DMatrix<Complex64>;

fn sig_diff(d: &DiscriminantGroup) -> f64 {
    let (p, n) = d.signature();
    n as f64 - p as f64
}

/// `ρ(g)` for a generator, as a matrix acting on coefficient columns.
pub fn rho_generator(d: &DiscriminantGroup, g: Generator) -> Result<CMatrix> {
    let els = d.elements()?;
    let n = els.len();
    Ok(match g {
        Generator::T => CMatrix::from_fn(n, n, |i, j| if i == j { e_rat(&d.q(&els[i])) } else { Complex64::new(0.0, 0.0) }),
        Generator::S => {
            let c = e(sig_diff(d) / 8.0) / (n as f64).sqrt();
            CMatrix::from_fn(n, n, |i, j| c * e_rat(&-d.b(&els[j], &els[i])))
        }
        Generator::Z => {
            let c = e(sig_diff(d) / 4.0);
            let mut m = CMatrix::zeros(n, n);
            for (j, x) in els.iter().enumerate() {
                m[(d.index_of(&d.neg(x)), j)] = c;
            }
            m
        }
    })
}

fn rho_t_pow(d: &DiscriminantGroup, k: i64) -> Result<CMatrix> {
    let els = d.elements()?;
    let n = els.len();
    let kq = BigRational::from_integer(k.into());
    Ok(CMatrix::from_fn(n, n, |i, j| if i == j { e_rat(&(d.q(&els[i]) * &kq)) } else { Complex64::new(0.0, 0.0) }))
}

/// `ρ(g)` by evaluating a generator word for `g`.
pub fn rho_matrix(d: &DiscriminantGroup, g: &MetaplecticElement) -> Result<CMatrix> {
    let n = d.len();
    let mut m = CMatrix::identity(n, n);
    let mut s_cache: Option<CMatrix> = None;
    for t in g.word() {
        let f = match t {
            Token::T(k) => rho_t_pow(d, k)?,
            Token::S => s_cache.get_or_insert(rho_generator(d, Generator::S)?).clone(),
            Token::Z(k) => {
                let z = rho_generator(d, Generator::Z)?;
                (0..k).fold(CMatrix::identity(n, n), |acc, _| acc * &z)
            }
        };
        m *= f;
    }
    Ok(m)
}

/// Applies `mat` along one axis of a tensor-product vector.
pub fn apply_axis(v: &RepVector, axis: usize, mat: &CMatrix) -> Result<RepVector> {
    let dims = v.space().dims();
    if axis >= dims.len() || mat.ncols() != dims[axis] || mat.nrows() != dims[axis] {
        return Err(Error::IndexMismatch(format!("matrix of size {} on axis {axis} of {:?}", mat.nrows(), v.space())));
    }
    let n = dims[axis];
    let inner: usize = dims[axis + 1..].iter().product();
    let outer: usize = dims[..axis].iter().product();
    let src = v.data();
    let mut out = RepVector::zeros(v.space().clone());
    let dst = out.data_mut();
    for o in 0..outer {
        for i in 0..inner {
            for r in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for c in 0..n {
                    let m = mat[(r, c)];
                    if m != Complex64::new(0.0, 0.0) {
                        acc += m * src[(o * n + c) * inner + i];
                    }
                }
                dst[(o * n + r) * inner + i] = acc;
            }
        }
    }
    Ok(out)
}

/// `(⊗ᵢ ρ_{Dᵢ})(g) v`.
pub fn rho_apply(g: &MetaplecticElement, v: &RepVector) -> Result<RepVector> {
    let mut out = v.clone();
    for (axis, d) in v.space().factors().iter().enumerate() {
        if d.len() == 1 && g.word().iter().all(|t| matches!(t, Token::T(_))) {
            continue;
        }
        let m = rho_matrix(d, g)?;
        out = apply_axis(&out, axis, &m)?;
    }
    Ok(out)
}

fn replace_factor(space: &IndexSpace, axis: usize, f: &Arc<DiscriminantGroup>) -> IndexSpace {
    let mut factors = space.factors().to_vec();
    factors[axis] = f.clone();
    IndexSpace::new(factors)
}

fn check_factor(space: &IndexSpace, axis: usize, want: &DiscriminantGroup) -> Result<()> {
    match space.factors().get(axis) {
        Some(f) if f.same_form(want) => Ok(()),
        _ => Err(Error::IndexMismatch(format!("axis {axis} of {space:?} does not carry the expected group"))),
    }
}

/// `↑`: `C[D_L] → C[D_Λ]` along `axis`.
pub fn up_arrow(emb: &OverlatticeEmbedding, v: &RepVector, axis: usize) -> Result<RepVector> {
    check_factor(v.space(), axis, emb.big().disc())?;
    let small = emb.small().disc();
    let space = replace_factor(v.space(), axis, small);
    let mut out = RepVector::zeros(space);
    let map = emb.coset_map();
    for lin in 0..out.space().len() {
        let mut idx = out.space().multi(lin);
        if let Some(g) = map[idx[axis]] {
            idx[axis] = g;
            out.data_mut()[lin] = v.get(&idx);
        }
    }
    Ok(out)
}

/// `↓`: `C[D_Λ] → C[D_L]` along `axis`.
pub fn down_arrow(emb: &OverlatticeEmbedding, w: &RepVector, axis: usize) -> Result<RepVector> {
    check_factor(w.space(), axis, emb.small().disc())?;
    let big = emb.big().disc();
    let space = replace_factor(w.space(), axis, big);
    let mut out = RepVector::zeros(space);
    let map = emb.coset_map();
    for (lin, z) in w.data().iter().enumerate() {
        let mut idx = w.space().multi(lin);
        if let Some(g) = map[idx[axis]] {
            idx[axis] = g;
            out.add_at(&idx, *z);
        }
    }
    Ok(out)
}

/// 0/1 matrices of `↑` (`|D_Λ| × |D_L|`) and `↓` (`|D_L| × |D_Λ|`).
pub fn arrow_index_matrices(emb: &OverlatticeEmbedding) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let (ns, nb) = (emb.small().disc().len(), emb.big().disc().len());
    let mut up = vec![vec![0i64; nb]; ns];
    let mut down = vec![vec![0i64; ns]; nb];
    for (delta, g) in emb.coset_map().iter().enumerate() {
        if let Some(g) = *g {
            up[delta][g] = 1;
            down[g][delta] = 1;
        }
    }
    (up, down)
}

/// `↓ ∘ ↑` as an exact integer matrix on `C[D_L]`.
pub fn down_up_composition(emb: &OverlatticeEmbedding) -> Vec<Vec<i64>> {
    let (up, down) = arrow_index_matrices(emb);
    let nb = down.len();
    let ns = up.len();
    (0..nb).map(|i| (0..nb).map(|j| (0..ns).map(|k| down[i][k] * up[k][j]).sum()).collect()).collect()
}

/// Maximum entrywise deviation of a matrix from another.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
