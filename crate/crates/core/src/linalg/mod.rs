//! Dense matrices over exact rings, plus the handful of exact algorithms the
//! lattice code needs (inverse, determinant, kernels, inertia, Smith form).
//!
//! Vectors are columns throughout. A matrix whose columns are lattice vectors
//! expressed in some basis is the standard way of passing a set of vectors.

mod snf;

pub use snf::{smith_normal_form, Snf};

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type ZMatrix = Mat<BigInt>;
pub type QMatrix = Mat<BigRational>;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Display> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Clone> Mat<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Builds from a list of rows. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<T>]) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return None;
        }
        Some(Mat { rows: r, cols: c, data: rows.iter().flatten().cloned().collect() })
    }

    /// Builds from a list of columns, each of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<T>]) -> Option<Self> {
        if cols.iter().any(|c| c.len() != rows) {
            return None;
        }
        Some(Mat::from_fn(rows, cols.len(), |i, j| cols[j][i].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn to_cols(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Keeps the listed columns, in order.
    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Mat::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hcat row mismatch");
        Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

impl<T: Clone + Zero + One> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        Mat::from_fn(r, c, |i, j| {
            if i < self.rows && j < self.cols {
                self[(i, j)].clone()
            } else if i >= self.rows && j >= self.cols {
                other[(i - self.rows, j - self.cols)].clone()
            } else {
                T::zero()
            }
        })
    }
}

impl<T> Mat<T>
where
    T: Clone + Zero + One + PartialEq,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T> + std::ops::Add<&'a T, Output = T>,
{
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = a * &rhs[(k, j)];
                    out[(i, j)] = &out[(i, j)] + &t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (k, x) in v.iter().enumerate() {
                    let a = &self[(i, k)];
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x * s)
    }

    /// `xᵀ · self · y`.
    pub fn bilinear(&self, x: &[T], y: &[T]) -> T {
        let my = self.mul_vec(y);
        dot(x, &my)
    }
}

pub fn dot<T>(x: &[T], y: &[T]) -> T
where
    T: Zero + Clone,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T> + std::ops::Add<&'a T, Output = T>,
{
    assert_eq!(x.len(), y.len());
    x.iter().zip(y).fold(T::zero(), |acc, (a, b)| &acc + &(a * b))
}

// --- rational helpers --------------------------------------------------------

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Representative of `r mod 1` in `[0, 1)`.
pub fn frac(r: &BigRational) -> BigRational {
    r - r.floor()
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn is_integral(v: &[BigRational]) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// Parses `"p/q"`, `"p"`, or a plain decimal such as `"-0.25"`.
pub fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(BigRational::from_integer(n));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (ip, fp) = body.split_once('.')?;
    if !fp.chars().all(|c| c.is_ascii_digit()) || !ip.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{ip}{fp}").parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), fp.len());
    let r = BigRational::new(digits, den);
    Some(if neg { -r } else { r })
}

pub fn format_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn zmat_to_q(m: &ZMatrix) -> QMatrix {
    m.map(int_rat)
}

/// Converts a rational matrix with integral entries back to an integer matrix.
pub fn qmat_to_z(m: &QMatrix) -> Option<ZMatrix> {
    if m.data.iter().all(|x| x.is_integer()) {
        Some(m.map(|x| x.to_integer()))
    } else {
        None
    }
}

pub fn qmat_to_f64(m: &QMatrix) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_fn(m.rows(), m.cols(), |i, j| rat_to_f64(&m[(i, j)]))
}

pub fn zmat_to_f64(m: &ZMatrix) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].to_f64().unwrap_or(f64::NAN))
}

pub fn qvec_to_f64(v: &[BigRational]) -> Vec<f64> {
    v.iter().map(rat_to_f64).collect()
}

// --- exact elimination over Q ------------------------------------------------

impl QMatrix {
    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = a[(r, c)].recip();
            for j in 0..a.cols {
                a[(r, j)] = &a[(r, j)] * &inv;
            }
            for i in 0..a.rows {
                if i != r && !a[(i, c)].is_zero() {
                    let f = a[(i, c)].clone();
                    for j in 0..a.cols {
                        let t = &f * &a[(r, j)];
                        a[(i, j)] = &a[(i, j)] - &t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : A x = 0}`, as columns.
    pub fn kernel(&self) -> QMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = QMatrix::zeros(self.cols, free.len());
        for (kc, &f) in free.iter().enumerate() {
            k[(f, kc)] = BigRational::one();
            for (pr, &pc) in pivots.iter().enumerate() {
                k[(pc, kc)] = -r[(pr, f)].clone();
            }
        }
        k
    }

    pub fn det(&self) -> BigRational {
        assert!(self.is_square());
        let mut a = self.clone();
        let n = a.rows;
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
                return BigRational::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv = a[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let f = &a[(i, c)] / &piv;
                for j in c..n {
                    let t = &f * &a[(c, j)];
                    a[(i, j)] = &a[(i, j)] - &t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hcat(&QMatrix::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    /// Sign counts `(positive, negative, zero)` of the symmetric form, by exact
    /// congruence diagonalisation (Sylvester's law of inertia).
    pub fn inertia(&self) -> (usize, usize, usize) {
        assert!(self.is_symmetric(), "inertia of a non-symmetric matrix");
        let mut a = self.clone();
        let n = a.rows;
        let (mut pos, mut neg, mut zero) = (0, 0, 0);
        for k in 0..n {
            if a[(k, k)].is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                    a.swap_rows(k, j);
                    a.swap_cols(k, j);
                } else if let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) {
                    // e_k += e_j makes the diagonal entry 2 a_kj != 0
                    for c in 0..n {
                        let t = a[(j, c)].clone();
                        a[(k, c)] = &a[(k, c)] + &t;
                    }
                    for r in 0..n {
                        let t = a[(r, j)].clone();
                        a[(r, k)] = &a[(r, k)] + &t;
                    }
                } else {
                    zero += 1;
                    continue;
                }
            }
            let p = a[(k, k)].clone();
            if p.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = &a[(i, k)] / &p;
                for c in 0..n {
                    let t = &f * &a[(k, c)];
                    a[(i, c)] = &a[(i, c)] - &t;
                }
                for r in 0..n {
                    let t = &f * &a[(r, k)];
                    a[(r, i)] = &a[(r, i)] - &t;
                }
            }
        }
        (pos, neg, zero)
    }
}

impl ZMatrix {
    pub fn det(&self) -> BigInt {
        zmat_to_q(self).det().to_integer()
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Option<ZMatrix> {
        let rows: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Mat::from_rows(&rows)
    }

    pub fn from_i64_cols(n: usize, cols: &[Vec<i64>]) -> Option<ZMatrix> {
        let cols: Vec<Vec<BigInt>> =
            cols.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Mat::from_cols(n, &cols)
    }

    /// Saturation of the column span inside `Zⁿ`: a basis of `span_Q(cols) ∩ Zⁿ`.
    /// The second component says whether the input was already saturated.
    pub fn saturate_columns(&self) -> (ZMatrix, bool) {
        let snf = smith_normal_form(self);
        let rank = snf.rank();
        let uinv = snf.u_inverse();
        let basis = uinv.select_cols(&(0..rank).collect::<Vec<_>>());
        let primitive = rank == self.cols && snf.diag.iter().take(rank).all(|d| d.is_one());
        (basis, primitive)
    }

    /// Basis of the integral right kernel; always saturated.
    pub fn integer_kernel(&self) -> ZMatrix {
        let snf = smith_normal_form(self);
        let rank = snf.rank();
        snf.v.select_cols(&(rank..self.cols).collect::<Vec<_>>())
    }
}

/// Greatest common divisor of a list (zero for an empty list).
pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Least common multiple of the denominators.
pub fn common_denominator(xs: &[BigRational]) -> BigInt {
    xs.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

/// Basis of the `Z`-module generated by the (rational) columns, as columns.
/// The columns must span a full-rank module.
pub fn module_basis(generators: &QMatrix) -> QMatrix {
    let all: Vec<BigRational> = generators.data.clone();
    let d = common_denominator(&all);
    let dq = int_rat(&d);
    let scaled = qmat_to_z(&generators.scale(&dq)).expect("integral after scaling");
    let snf = smith_normal_form(&scaled);
    let rank = snf.rank();
    let uinv = snf.u_inverse();
    let basis = Mat::from_fn(scaled.rows(), rank, |i, j| uinv[(i, j)].clone() * &snf.diag[j]);
    zmat_to_q(&basis).scale(&dq.recip())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[Vec<i64>]) -> QMatrix {
        zmat_to_q(&ZMatrix::from_i64_rows(rows).unwrap())
    }

    #[test]
    fn inverse_of_a2() {
        let inv = q(&[vec![2, 1], vec![1, 2]]).inverse().unwrap();
        assert_eq!(inv[(0, 0)], rat(2, 3));
        assert_eq!(inv[(0, 1)], rat(-1, 3));
        assert_eq!(inv[(1, 1)], rat(2, 3));
    }

    #[test]
    fn inertia_handles_zero_diagonal() {
        assert_eq!(q(&[vec![0, 1], vec![1, 0]]).inertia(), (1, 1, 0));
        assert_eq!(q(&[vec![0, 0, 1], vec![0, 2, 0], vec![1, 0, 0]]).inertia(), (2, 1, 0));
        assert_eq!(q(&[vec![2, 2], vec![2, 2]]).inertia(), (1, 0, 1));
    }

    #[test]
    fn kernel_and_rank() {
        let a = q(&[vec![1, 1, 0], vec![0, 0, 1]]);
        let k = a.kernel();
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).map(|x| x.is_zero()).to_rows().iter().flatten().all(|&b| b));
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn saturation_detects_non_primitive() {
        let b = ZMatrix::from_i64_cols(2, &[vec![2, 2]]).unwrap();
        let (sat, prim) = b.saturate_columns();
        assert!(!prim);
        let c = sat.col(0);
        assert!(c == vec![BigInt::from(1), BigInt::from(1)] || c == vec![BigInt::from(-1), BigInt::from(-1)]);
    }

    #[test]
    fn parse_and_format_rationals() {
        assert_eq!(parse_rat("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_rat("-7"), Some(rat(-7, 1)));
        assert_eq!(parse_rat("-0.25"), Some(rat(-1, 4)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(format_rat(&rat(-2, 4)), "-1/2");
        assert_eq!(format_rat(&rat(4, 2)), "2");
    }

    #[test]
    fn module_basis_of_glue() {
        let gens = QMatrix::identity(2)
            .hcat(&Mat::from_cols(2, &[vec![rat(1, 2), rat(1, 2)]]).unwrap());
        let b = module_basis(&gens);
        assert_eq!(b.cols(), 2);
        assert_eq!(b.det().abs(), rat(1, 2));
    }
}
