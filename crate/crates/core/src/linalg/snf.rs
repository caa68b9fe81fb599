use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{qmat_to_z, zmat_to_q, ZMatrix};

/// Smith normal form `u · a · v = diag(d₁, …, d_r, 0, …)` with `d_i | d_{i+1}`,
/// `d_i > 0` and `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: ZMatrix,
    pub v: ZMatrix,
    /// Diagonal entries, `min(rows, cols)` of them; trailing zeros for rank deficit.
    pub diag: Vec<BigInt>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diag.iter().take_while(|d| !d.is_zero()).count()
    }

    pub fn u_inverse(&self) -> ZMatrix {
        invert_unimodular(&self.u)
    }

    pub fn v_inverse(&self) -> ZMatrix {
        invert_unimodular(&self.v)
    }
}

fn invert_unimodular(m: &ZMatrix) -> ZMatrix {
    let inv = zmat_to_q(m).inverse().expect("unimodular matrix is invertible");
    qmat_to_z(&inv).expect("inverse of a unimodular matrix is integral")
}

fn row_axpy(m: &mut ZMatrix, dst: usize, src: usize, f: &BigInt) {
    for j in 0..m.cols() {
        let t = f * &m[(src, j)];
        m[(dst, j)] -= t;
    }
}

fn col_axpy(m: &mut ZMatrix, dst: usize, src: usize, f: &BigInt) {
    for i in 0..m.rows() {
        let t = f * &m[(i, src)];
        m[(i, dst)] -= t;
    }
}

pub fn smith_normal_form(a: &ZMatrix) -> Snf {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = ZMatrix::identity(m);
    let mut v = ZMatrix::identity(n);

    'outer: for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if s[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'outer;
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = &s[(i, t)] / &s[(t, t)];
                row_axpy(&mut s, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = &s[(t, j)] / &s[(t, t)];
                col_axpy(&mut s, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row and retry
            let p = s[(t, t)].clone();
            let offending = (t + 1..m).find(|&i| (t + 1..n).any(|j| !s[(i, j)].is_multiple_of(&p)));
            if let Some(i) = offending {
                let minus_one = -BigInt::one();
                row_axpy(&mut s, t, i, &minus_one);
                row_axpy(&mut u, t, i, &minus_one);
                continue;
            }
            break;
        }
        if s[(t, t)].is_negative() {
            for j in 0..n {
                s[(t, j)] = -s[(t, j)].clone();
            }
            for j in 0..m {
                u[(t, j)] = -u[(t, j)].clone();
            }
        }
    }

    let diag = (0..m.min(n)).map(|i| s[(i, i)].clone()).collect();
    Snf { u, v, diag }
}
