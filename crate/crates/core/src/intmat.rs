//! Integer matrices with arbitrary-precision entries, determinants, and
//! Smith normal form with recorded unimodular transforms.
//!
//! Matrices here are small relation matrices (at most a few dozen rows),
//! so the Smith reduction uses naive minimum-pivot elimination; exactness
//! matters, performance does not.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// A dense rows x cols matrix over Z (row-major storage).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    /// The zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    /// The n x n identity.
    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Build from rows of machine integers (rows must be equal length).
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<IntMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::OutOfRange("ragged matrix rows".into()));
        }
        let mut m = IntMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        Ok(m)
    }

    /// Build from rows of big integers.
    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>) -> Result<IntMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::OutOfRange("ragged matrix rows".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::OutOfRange(format!(
                "matrix product shape mismatch: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Determinant of a square matrix, by fraction-free (Bareiss)
    /// elimination — exact over Z.
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::OutOfRange("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev; // exact by Bareiss' identity
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(sign * a[n - 1][n - 1].clone())
    }
}

/// Result of a Smith reduction: U * M * V = diag(factors), with U, V
/// unimodular and factors[0] | factors[1] | ... (all nonnegative; the
/// list has length min(rows, cols), including any 1s and trailing 0s).
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub factors: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

/// Compute the Smith normal form of an integer matrix.
pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let k = rows.min(cols);

    // Row/column elementary operations, mirrored into U (left) and V
    // (right) so that u * m * v stays equal to a at every step.
    fn row_addmul(a: &mut IntMatrix, u: &mut IntMatrix, dst: usize, src: usize, c: &BigInt) {
        for j in 0..a.cols() {
            let val = a.get(dst, j) + c * a.get(src, j);
            a.set(dst, j, val);
        }
        for j in 0..u.cols() {
            let val = u.get(dst, j) + c * u.get(src, j);
            u.set(dst, j, val);
        }
    }
    fn col_addmul(a: &mut IntMatrix, v: &mut IntMatrix, dst: usize, src: usize, c: &BigInt) {
        for i in 0..a.rows() {
            let val = a.get(i, dst) + c * a.get(i, src);
            a.set(i, dst, val);
        }
        for i in 0..v.rows() {
            let val = v.get(i, dst) + c * v.get(i, src);
            v.set(i, dst, val);
        }
    }
    fn row_swap(a: &mut IntMatrix, u: &mut IntMatrix, x: usize, y: usize) {
        if x == y {
            return;
        }
        for j in 0..a.cols() {
            let t = a.get(x, j).clone();
            a.set(x, j, a.get(y, j).clone());
            a.set(y, j, t);
        }
        for j in 0..u.cols() {
            let t = u.get(x, j).clone();
            u.set(x, j, u.get(y, j).clone());
            u.set(y, j, t);
        }
    }
    fn col_swap(a: &mut IntMatrix, v: &mut IntMatrix, x: usize, y: usize) {
        if x == y {
            return;
        }
        for i in 0..a.rows() {
            let t = a.get(i, x).clone();
            a.set(i, x, a.get(i, y).clone());
            a.set(i, y, t);
        }
        for i in 0..v.rows() {
            let t = v.get(i, x).clone();
            v.set(i, x, v.get(i, y).clone());
            v.set(i, y, t);
        }
    }
    fn row_negate(a: &mut IntMatrix, u: &mut IntMatrix, x: usize) {
        for j in 0..a.cols() {
            let t = -a.get(x, j).clone();
            a.set(x, j, t);
        }
        for j in 0..u.cols() {
            let t = -u.get(x, j).clone();
            u.set(x, j, t);
        }
    }

    'outer: loop {
        for t in 0..k {
            loop {
                // Minimal nonzero entry of the trailing submatrix -> (t,t).
                let mut pivot: Option<(usize, usize)> = None;
                for i in t..rows {
                    for j in t..cols {
                        if !a.get(i, j).is_zero()
                            && pivot
                                .map(|(pi, pj)| a.get(i, j).abs() < a.get(pi, pj).abs())
                                .unwrap_or(true)
                        {
                            pivot = Some((i, j));
                        }
                    }
                }
                let (pi, pj) = match pivot {
                    Some(p) => p,
                    None => break, // submatrix is zero; this and later d's are 0
                };
                row_swap(&mut a, &mut u, t, pi);
                col_swap(&mut a, &mut v, t, pj);

                let mut clean = true;
                for i in t + 1..rows {
                    if !a.get(i, t).is_zero() {
                        let q = a.get(i, t) / a.get(t, t);
                        row_addmul(&mut a, &mut u, i, t, &(-q));
                        if !a.get(i, t).is_zero() {
                            clean = false;
                        }
                    }
                }
                for j in t + 1..cols {
                    if !a.get(t, j).is_zero() {
                        let q = a.get(t, j) / a.get(t, t);
                        col_addmul(&mut a, &mut v, j, t, &(-q));
                        if !a.get(t, j).is_zero() {
                            clean = false;
                        }
                    }
                }
                if clean {
                    break;
                }
            }
        }
        // Normalize signs.
        for t in 0..k {
            if a.get(t, t).is_negative() {
                row_negate(&mut a, &mut u, t);
            }
        }
        // Divisibility chain fix-up: if d_t does not divide d_{t+1}, fold
        // column t+1 into column t and re-run the elimination.
        for t in 0..k.saturating_sub(1) {
            let dt = a.get(t, t).clone();
            let dn = a.get(t + 1, t + 1).clone();
            if !dt.is_zero() && !(&dn % &dt).is_zero() {
                col_addmul(&mut a, &mut v, t, t + 1, &BigInt::one());
                continue 'outer;
            }
        }
        break;
    }

    let factors: Vec<BigInt> = (0..k).map(|t| a.get(t, t).clone()).collect();
    SmithNormalForm { factors, u, v }
}
