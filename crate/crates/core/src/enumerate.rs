//! Fincke–Pohst enumeration of lattice points in an ellipsoid, and the shell
//! bound used to certify truncated theta sums.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_VECTORS: usize = 2_000_000;

/// Vector cap from `THETA_MAX_VECTORS`, or the default.
pub fn max_vectors() -> usize {
    std::env::var("THETA_MAX_VECTORS").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_MAX_VECTORS)
}

/// All `y ∈ Zᵏ` with `(y - c)ᵀ Q (y - c) ≤ r`, for positive definite `Q`.
///
/// Rounding slack is on the inclusive side; callers filter the boundary.
pub fn fincke_pohst(q: &DMatrix<f64>, center: &[f64], r: f64, cap: usize) -> Result<Vec<Vec<i64>>> {
    let k = q.nrows();
    if k == 0 {
        return Ok(vec![Vec::new()]);
    }
    if r < 0.0 {
        return Ok(Vec::new());
    }
    // Q = Σᵢ qᵢᵢ (yᵢ - cᵢ + Σ_{j>i} qᵢⱼ (yⱼ - cⱼ))²
    let mut a = q.clone();
    for i in 0..k {
        for j in i + 1..k {
            a[(j, i)] = a[(i, j)];
            a[(i, j)] /= a[(i, i)];
        }
        for l in i + 1..k {
            for j in l..k {
                a[(l, j)] -= a[(l, i)] * a[(i, j)];
            }
        }
    }
    for i in 0..k {
        if a[(i, i)].is_nan() || a[(i, i)] <= 0.0 {
            return Err(Error::Degenerate);
        }
    }
    let slack = r * 1e-9 + 1e-9;
    let mut out = Vec::new();
    let mut y = vec![0i64; k];
    let mut st = Search { a: &a, center, y: &mut y, out: &mut out, cap };
    st.recurse(k - 1, r + slack)?;
    Ok(out)
}

struct Search<'a> {
    a: &'a DMatrix<f64>,
    center: &'a [f64],
    y: &'a mut Vec<i64>,
    out: &'a mut Vec<Vec<i64>>,
    cap: usize,
}

impl Search<'_> {
    fn recurse(&mut self, i: usize, budget: f64) -> Result<()> {
        let k = self.center.len();
        let mut shift = 0.0;
        for j in i + 1..k {
            shift += self.a[(i, j)] * (self.y[j] as f64 - self.center[j]);
        }
        let c = self.center[i] - shift;
        let qii = self.a[(i, i)];
        let half = (budget.max(0.0) / qii).sqrt();
        let lo = (c - half).ceil() as i64;
        let hi = (c + half).floor() as i64;
        for t in lo..=hi {
            let d = t as f64 - c;
            let rest = budget - qii * d * d;
            if rest < 0.0 {
                continue;
            }
            self.y[i] = t;
            if i == 0 {
                if self.out.len() >= self.cap {
                    return Err(Error::BoundTooLarge { cap: self.cap });
                }
                self.out.push(self.y.clone());
            } else {
                self.recurse(i - 1, rest)?;
            }
        }
        Ok(())
    }
}

/// `N(r) ≤ Πᵢ (2√(r (Q⁻¹)ᵢᵢ) + 1)`: the box containing the ellipsoid.
#[derive(Clone, Debug)]
pub struct ShellBound {
    inv_diag: Vec<f64>,
}

impl ShellBound {
    pub fn new(q: &DMatrix<f64>) -> Result<Self> {
        let k = q.nrows();
        if k == 0 {
            return Ok(ShellBound { inv_diag: Vec::new() });
        }
        let inv = q.clone().cholesky().ok_or(Error::Degenerate)?.inverse();
        Ok(ShellBound { inv_diag: (0..k).map(|i| inv[(i, i)]).collect() })
    }

    pub fn count(&self, r: f64) -> f64 {
        self.inv_diag.iter().map(|d| 2.0 * (r.max(0.0) * d).sqrt() + 1.0).product()
    }

    /// Bound on `Σ_{x : norm(x) > r0} g(norm(x))` where `g(r) ≤ Σₖ wₖ r^{eₖ} e^{-κr}`.
    ///
    /// Shells of width `1/κ`; each contributes at most `N(r_{k+1}) · g⁺(r_{k+1}) e^{-κ r_k}`.
    pub fn tail(&self, r0: f64, kappa: f64, weights: &[(f64, f64)]) -> f64 {
        if self.inv_diag.is_empty() {
            // only the zero vector, already included
            return 0.0;
        }
        let h = 1.0 / kappa;
        let mut total = 0.0;
        let mut prev = f64::INFINITY;
        for k in 0..1_000_000 {
            let lo = r0 + k as f64 * h;
            let hi = lo + h;
            let poly: f64 = weights.iter().map(|(w, e)| w * hi.powf(*e)).sum();
            let shell = self.count(hi) * poly * (-kappa * lo).exp();
            total += shell;
            if shell < prev && shell <= 1e-18 * total.max(1e-300) {
                break;
            }
            prev = shell;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(q: &DMatrix<f64>, c: &[f64], r: f64, box_: i64) -> Vec<Vec<i64>> {
        let k = q.nrows();
        let mut out = Vec::new();
        let side = (2 * box_ + 1) as usize;
        for lin in 0..side.pow(k as u32) {
            let mut y = Vec::new();
            let mut t = lin;
            for _ in 0..k {
                y.push((t % side) as i64 - box_);
                t /= side;
            }
            let d: Vec<f64> = y.iter().zip(c).map(|(a, b)| *a as f64 - b).collect();
            let mut v = 0.0;
            for i in 0..k {
                for j in 0..k {
                    v += d[i] * q[(i, j)] * d[j];
                }
            }
            if v <= r + 1e-9 {
                out.push(y);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn a1_examples() {
        let q = DMatrix::from_row_slice(1, 1, &[2.0]);
        let mut v = fincke_pohst(&q, &[0.0], 3.0, 100).unwrap();
        v.sort();
        assert_eq!(v, vec![vec![-1], vec![0], vec![1]]);
        assert!(fincke_pohst(&q, &[0.5], 0.2, 100).unwrap().is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let q = DMatrix::<f64>::identity(3, 3);
        assert_eq!(fincke_pohst(&q, &[0.0; 3], 100.0, 10).unwrap_err(), Error::BoundTooLarge { cap: 10 });
    }

    #[test]
    fn shell_count_bounds_truth() {
        let q = DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 2.0]);
        let sb = ShellBound::new(&q).unwrap();
        for r in [0.5, 2.0, 7.0, 20.0] {
            let n = fincke_pohst(&q, &[0.0, 0.0], r, 100_000).unwrap().len() as f64;
            assert!(n <= sb.count(r));
        }
    }

    #[test]
    fn tail_bounds_gaussian_sum() {
        // Σ_{|n| > 3} e^{-π n²}
        let q = DMatrix::from_row_slice(1, 1, &[1.0]);
        let sb = ShellBound::new(&q).unwrap();
        let kappa = std::f64::consts::PI;
        let truth: f64 = (4..60).map(|n| 2.0 * (-kappa * (n * n) as f64).exp()).sum();
        let bound = sb.tail(9.0, kappa, &[(1.0, 0.0)]);
        assert!(truth <= bound && bound < 1e-10, "{bound}");
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            a in 0.5f64..3.0, b in -0.4f64..0.4, d in 0.5f64..3.0,
            c0 in -1.0f64..1.0, c1 in -1.0f64..1.0, r in 0.0f64..6.0
        ) {
            let q = DMatrix::from_row_slice(2, 2, &[a, b, b, d]);
            let mut got = fincke_pohst(&q, &[c0, c1], r, 100_000).unwrap();
            got.sort();
            prop_assert_eq!(got, brute(&q, &[c0, c1], r, 8));
        }
    }
}
