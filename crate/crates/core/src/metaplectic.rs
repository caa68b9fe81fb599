//! The metaplectic group `Mp₂(Z)` as pairs `(A, φ)` with `φ² = cτ + d`.
//!
//! `φ` is always `±` the principal square root of `cτ + d`; the sign is kept
//! as an explicit branch bit. Products are resolved by evaluating the cocycle
//! numerically at `τ = i`.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

const BRANCH_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MetaplecticElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    /// `true` for `φ = +√(cτ+d)`, principal branch.
    pub positive: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    T,
    S,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Token {
    T(i64),
    S,
    Z(u8),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::T(n) => write!(f, "T^{n}"),
            Token::S => write!(f, "S"),
            Token::Z(k) => write!(f, "Z^{k}"),
        }
    }
}

fn principal_sqrt(z: Complex64) -> Complex64 {
    // keep -1 on the branch cut mapped to +i
    if z.im == 0.0 && z.re < 0.0 {
        return Complex64::new(0.0, (-z.re).sqrt());
    }
    z.sqrt()
}

impl MetaplecticElement {
    pub fn new(a: i64, b: i64, c: i64, d: i64, positive: bool) -> Result<Self> {
        if a as i128 * d as i128 - b as i128 * c as i128 != 1 {
            return Err(Error::NotUnimodular);
        }
        Ok(MetaplecticElement { a, b, c, d, positive })
    }

    pub fn identity() -> Self {
        MetaplecticElement { a: 1, b: 0, c: 0, d: 1, positive: true }
    }

    pub fn t() -> Self {
        MetaplecticElement { a: 1, b: 1, c: 0, d: 1, positive: true }
    }

    pub fn t_pow(n: i64) -> Self {
        MetaplecticElement { a: 1, b: n, c: 0, d: 1, positive: true }
    }

    pub fn s() -> Self {
        MetaplecticElement { a: 0, b: -1, c: 1, d: 0, positive: true }
    }

    /// `Z = (-I, i)`.
    pub fn z() -> Self {
        MetaplecticElement { a: -1, b: 0, c: 0, d: -1, positive: true }
    }

    pub fn z_pow(k: u8) -> Self {
        (0..k % 4).fold(Self::identity(), |acc, _| acc.mul(&Self::z()))
    }

    pub fn generator(g: Generator) -> Self {
        match g {
            Generator::T => Self::t(),
            Generator::S => Self::s(),
            Generator::Z => Self::z(),
        }
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn j(&self, tau: Complex64) -> Complex64 {
        self.c as f64 * tau + self.d as f64
    }

    pub fn phi(&self, tau: Complex64) -> Complex64 {
        let r = principal_sqrt(self.j(tau));
        if self.positive {
            r
        } else {
            -r
        }
    }

    /// `Aτ = (aτ + b)/(cτ + d)`.
    pub fn act(&self, tau: Complex64) -> Complex64 {
        (self.a as f64 * tau + self.b as f64) / self.j(tau)
    }

    fn with_phi_value(a: i64, b: i64, c: i64, d: i64, tau0: Complex64, value: Complex64) -> Self {
        let r = principal_sqrt(c as f64 * tau0 + d as f64);
        let (dp, dm) = ((value - r).norm(), (value + r).norm());
        debug_assert!(dp.min(dm) < BRANCH_TOL * (1.0 + r.norm()), "cocycle off both branches: {dp} {dm}");
        MetaplecticElement { a, b, c, d, positive: dp <= dm }
    }

    /// `(A, φ)·(B, ψ) = (AB, (φ∘B)·ψ)`.
    pub fn mul(&self, other: &Self) -> Self {
        let a = self.a * other.a + self.b * other.c;
        let b = self.a * other.b + self.b * other.d;
        let c = self.c * other.a + self.d * other.c;
        let d = self.c * other.b + self.d * other.d;
        let tau0 = Complex64::new(0.0, 1.0);
        let value = self.phi(other.act(tau0)) * other.phi(tau0);
        Self::with_phi_value(a, b, c, d, tau0, value)
    }

    pub fn inverse(&self) -> Self {
        let (a, b, c, d) = (self.d, -self.b, -self.c, self.a);
        // (A⁻¹, ψ) with φ(A⁻¹τ)ψ(τ) = 1
        let tau0 = Complex64::new(0.0, 1.0);
        let inv = MetaplecticElement { a, b, c, d, positive: true };
        let value = 1.0 / self.phi(inv.act(tau0));
        Self::with_phi_value(a, b, c, d, tau0, value)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| acc.mul(self))
    }

    /// Word in `T^n`, `S`, `Z^k` evaluating to `self`, by Euclidean reduction
    /// of the bottom row.
    pub fn word(&self) -> Vec<Token> {
        let mut word = Vec::new();
        let mut g = *self;
        let s_inv = Self::s().inverse();
        while g.c != 0 {
            // choose n with |a - n c| < |c|
            let n = g.a.div_euclid(g.c);
            if n != 0 {
                word.push(Token::T(n));
                g = Self::t_pow(-n).mul(&g);
            }
            word.push(Token::S);
            g = s_inv.mul(&g);
        }
        // g = ±[[1, b], [0, 1]] with constant φ ∈ {1, i, -1, -i}
        let k = match (g.d, g.positive) {
            (1, true) => 0,
            (-1, true) => 1,
            (1, false) => 2,
            _ => 3,
        };
        if k != 0 {
            word.push(Token::Z(k));
        }
        let b = if g.d == 1 { g.b } else { -g.b };
        if b != 0 {
            word.push(Token::T(b));
        }
        word
    }

    pub fn random<R: Rng>(rng: &mut R, length: usize) -> Self {
        let mut g = Self::identity();
        for _ in 0..length {
            let n = rng.random_range(-3i64..=3);
            g = g.mul(&Self::t_pow(n)).mul(&Self::s());
        }
        if rng.random_bool(0.5) {
            g = g.mul(&Self::z());
        }
        g
    }
}

impl fmt::Display for MetaplecticElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{},{})", self.a, self.b, self.c, self.d, if self.positive { "+" } else { "-" })
    }
}

pub fn token_element(t: &Token) -> MetaplecticElement {
    match *t {
        Token::T(n) => MetaplecticElement::t_pow(n),
        Token::S => MetaplecticElement::s(),
        Token::Z(k) => MetaplecticElement::z_pow(k),
    }
}

pub fn eval_word(word: &[Token]) -> MetaplecticElement {
    word.iter().fold(MetaplecticElement::identity(), |acc, t| acc.mul(&token_element(t)))
}
