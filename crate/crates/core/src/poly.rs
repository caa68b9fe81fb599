//! Polynomials in the adapted coordinates of a Grassmannian point.
//!
//! Variables `0..b₊` belong to `v₊` and `b₊..b₊+b₋` to `v₋`. The Laplacian is
//! the flat `Σ ∂²/∂xᵢ²` in these coordinates.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponents, Complex64>,
}

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Complex64::new(1.0, 0.0))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(exps: Exponents, c: Complex64) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, Complex64)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::WrongDimension { expected: nvars, got: e.len() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: Complex64) {
        if c == czero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(czero);
        *slot += c;
        if *slot == czero() {
            // exact cancellation
            self.terms.retain(|_, v| *v != czero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, Complex64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), *c);
        }
        p
    }

    pub fn scale(&self, s: Complex64) -> Polynomial {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c * s);
        }
        p
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut p = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn conj(&self) -> Polynomial {
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.conj())).collect() }
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        debug_assert_eq!(x.len(), self.nvars);
        let mut acc = czero();
        for (e, c) in &self.terms {
            let mut m = 1.0;
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    m *= xi.powi(k as i32);
                }
            }
            acc += c * m;
        }
        acc
    }

    /// `Σᵢ ∂²p/∂xᵢ²`.
    pub fn laplacian(&self) -> Polynomial {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            for i in 0..self.nvars {
                if e[i] >= 2 {
                    let mut f = e.clone();
                    f[i] -= 2;
                    p.add_term(f, c * (e[i] * (e[i] - 1)) as f64);
                }
            }
        }
        p
    }

    pub fn is_harmonic(&self) -> bool {
        self.laplacian().terms.values().all(|c| c.norm() < 1e-12)
    }

    /// `[Δ⁰p/0!, Δ¹p/1!, …]`, ending before the first zero term.
    pub fn laplacian_series(&self) -> Vec<Polynomial> {
        let mut out = Vec::new();
        let mut cur = self.clone();
        let mut j = 0u32;
        while !cur.is_zero() {
            out.push(cur.clone());
            j += 1;
            cur = cur.laplacian().scale(Complex64::new(1.0 / j as f64, 0.0));
        }
        out
    }

    /// `e^{cΔ} p = Σⱼ cʲ/j! Δʲp`; the series stops at `j = ⌊deg/2⌋`.
    pub fn exp_laplacian(&self, c: f64) -> Polynomial {
        let mut acc = Self::zero(self.nvars);
        for (j, pj) in self.laplacian_series().iter().enumerate() {
            acc = acc.add(&pj.scale(Complex64::new(c.powi(j as i32), 0.0)));
        }
        acc
    }

    /// Substitutes variable `i` of `self` by variable `map[i]` of a ring in `nvars` variables.
    pub fn embed(&self, map: &[usize], nvars: usize) -> Polynomial {
        assert_eq!(map.len(), self.nvars);
        let mut p = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                f[map[i]] += k;
            }
            p.add_term(f, *c);
        }
        p
    }

    /// Moves the first `b_plus` variables after the remaining ones.
    pub fn swap_blocks(&self, b_plus: usize) -> Polynomial {
        let n = self.nvars;
        let b_minus = n - b_plus;
        let map: Vec<usize> = (0..n).map(|i| if i < b_plus { b_minus + i } else { i - b_plus }).collect();
        self.embed(&map, n)
    }

    /// `(m₊, m₋)` when every monomial has that bidegree.
    pub fn bidegree(&self, b_plus: usize) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(|e| (e[..b_plus].iter().sum::<u32>(), e[b_plus..].iter().sum::<u32>()));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn max_coeff_diff(&self, other: &Polynomial) -> f64 {
        self.add(&other.scale(Complex64::new(-1.0, 0.0))).terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `Σ |c|` over the monomials; bounds `|p(x)|` for `max|xᵢ| ≤ 1`.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }
}

/// A polynomial homogeneous of bidegree `(m₊, m₋)` for a fixed split `b₊ + b₋`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousPolynomial {
    poly: Polynomial,
    b_plus: usize,
    degrees: (u32, u32),
}

impl HomogeneousPolynomial {
    pub fn new(poly: Polynomial, b_plus: usize, degrees: (u32, u32)) -> Result<Self> {
        if b_plus > poly.nvars() {
            return Err(Error::WrongDimension { expected: poly.nvars(), got: b_plus });
        }
        if !poly.is_zero() && poly.bidegree(b_plus) != Some(degrees) {
            return Err(Error::NonHomogeneousPolynomial);
        }
        Ok(HomogeneousPolynomial { poly, b_plus, degrees })
    }

    /// Infers the bidegree; the zero polynomial is given degree `(0, 0)`.
    pub fn infer(poly: Polynomial, b_plus: usize) -> Result<Self> {
        let degrees = if poly.is_zero() { (0, 0) } else { poly.bidegree(b_plus).ok_or(Error::NonHomogeneousPolynomial)? };
        Self::new(poly, b_plus, degrees)
    }

    pub fn one(b_plus: usize, b_minus: usize) -> Self {
        HomogeneousPolynomial { poly: Polynomial::one(b_plus + b_minus), b_plus, degrees: (0, 0) }
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn b_plus(&self) -> usize {
        self.b_plus
    }

    pub fn b_minus(&self) -> usize {
        self.poly.nvars() - self.b_plus
    }

    pub fn degrees(&self) -> (u32, u32) {
        self.degrees
    }

    pub fn conj(&self) -> Self {
        HomogeneousPolynomial { poly: self.poly.conj(), b_plus: self.b_plus, degrees: self.degrees }
    }

    /// The same polynomial viewed on `L(-1)`, where `v₊` and `v₋` trade places.
    pub fn swap_blocks(&self) -> Self {
        HomogeneousPolynomial {
            poly: self.poly.swap_blocks(self.b_plus),
            b_plus: self.b_minus(),
            degrees: (self.degrees.1, self.degrees.0),
        }
    }

    /// `p_u · p_{u⊥}` in the variables of `v = u ⊕ u⊥`.
    ///
    /// Variable order on `v` is `(u₊, u⊥₊, u₋, u⊥₋)`.
    pub fn split_product(p_u: &Self, p_perp: &Self) -> Self {
        let (cp, cm) = (p_u.b_plus, p_u.b_minus());
        let (dp, dm) = (p_perp.b_plus, p_perp.b_minus());
        let n = cp + cm + dp + dm;
        let bp = cp + dp;
        let map_u: Vec<usize> = (0..cp).chain(bp..bp + cm).collect();
        let map_p: Vec<usize> = (cp..bp).chain(bp + cm..n).collect();
        let poly = p_u.poly.embed(&map_u, n).mul(&p_perp.poly.embed(&map_p, n));
        let degrees = (p_u.degrees.0 + p_perp.degrees.0, p_u.degrees.1 + p_perp.degrees.1);
        HomogeneousPolynomial { poly, b_plus: bp, degrees }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn exp_laplacian_examples() {
        let one = Polynomial::one(2);
        assert_eq!(one.exp_laplacian(0.7), one);
        let x2 = Polynomial::monomial(vec![2], c(1.0));
        let r = x2.exp_laplacian(0.3);
        assert!((r.eval(&[0.0]) - c(0.6)).norm() < 1e-15);
        assert!((r.eval(&[2.0]) - c(4.6)).norm() < 1e-15);
        let h = Polynomial::monomial(vec![2, 0], c(1.0)).add(&Polynomial::monomial(vec![0, 2], c(-1.0)));
        assert!(h.is_harmonic());
        assert_eq!(h.exp_laplacian(5.0), h);
    }

    #[test]
    fn homogeneity_validation() {
        let p = Polynomial::var(3, 0).mul(&Polynomial::var(3, 2));
        let h = HomogeneousPolynomial::new(p.clone(), 2, (1, 1)).unwrap();
        assert_eq!(h.swap_blocks().degrees(), (1, 1));
        assert_eq!(HomogeneousPolynomial::new(p.clone(), 2, (2, 0)).unwrap_err(), Error::NonHomogeneousPolynomial);
        let q = p.add(&Polynomial::one(3));
        assert_eq!(HomogeneousPolynomial::infer(q, 2).unwrap_err(), Error::NonHomogeneousPolynomial);
    }

    #[test]
    fn split_product_variable_layout() {
        // u of signature (1,1), u⊥ of signature (1,0)
        let pu = HomogeneousPolynomial::new(Polynomial::var(2, 1), 1, (0, 1)).unwrap();
        let pp = HomogeneousPolynomial::new(Polynomial::var(1, 0), 1, (1, 0)).unwrap();
        let pv = HomogeneousPolynomial::split_product(&pu, &pp);
        assert_eq!(pv.b_plus(), 2);
        assert_eq!(pv.degrees(), (1, 1));
        // v variables: (u₊, u⊥₊, u₋) = (x0, x1, x2); p_v = x2 * x1
        assert!((pv.poly().eval(&[5.0, 2.0, 3.0]) - c(6.0)).norm() < 1e-15);
    }

    fn arb_poly(nvars: usize) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec((proptest::collection::vec(0u32..3, nvars), -3.0f64..3.0), 0..6).prop_map(move |ts| {
            let ts: Vec<_> =
                ts.into_iter().filter(|(e, _)| e.iter().sum::<u32>() <= 4).map(|(e, x)| (e, c(x))).collect();
            Polynomial::from_terms(nvars, ts).unwrap()
        })
    }

    proptest! {
        #[test]
        fn exp_laplacian_is_additive(p in arb_poly(3), c1 in -1.0f64..1.0, c2 in -1.0f64..1.0) {
            let lhs = p.exp_laplacian(c2).exp_laplacian(c1);
            let rhs = p.exp_laplacian(c1 + c2);
            prop_assert!(lhs.max_coeff_diff(&rhs) < 1e-10);
        }

        #[test]
        fn homogeneity_scaling(
            a in 0u32..3, b in 0u32..3, x in proptest::collection::vec(-2.0f64..2.0, 3),
            cp in -2.0f64..2.0, cm in -2.0f64..2.0, coef in 0.5f64..2.0
        ) {
            // bidegree (a, b) for b₊ = 2, b₋ = 1
            let p = Polynomial::monomial(vec![a, 0, b], c(coef))
                .add(&Polynomial::monomial(vec![0, a, b], c(-coef / 2.0)));
            let h = HomogeneousPolynomial::infer(p.clone(), 2).unwrap();
            prop_assert_eq!(h.degrees(), (a, b));
            let scaled = [cp * x[0], cp * x[1], cm * x[2]];
            let lhs = p.eval(&scaled);
            let rhs = p.eval(&x) * cp.powi(a as i32) * cm.powi(b as i32);
            prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
        }
    }
}
