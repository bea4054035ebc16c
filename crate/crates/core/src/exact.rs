//! Exact integer matrices and rank computations.
//!
//! Two independent rank routines live here: [`Matrix::rank`] runs
//! fraction-free (Bareiss) elimination on a full matrix, while [`SpanBasis`]
//! grows an echelon basis one vector at a time. The switched analysis uses
//! the incremental one; tests cross-check the two.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix over the integers.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned().map(Into::into));
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds an `rows × columns.len()` matrix from column vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<BigInt>> + '_ {
        (0..self.cols).map(|j| self.column(j))
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.row(i).iter().all(Zero::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            let col = self.mul_vec(&rhs.column(j));
            for (i, x) in col.into_iter().enumerate() {
                out.set(i, j, x);
            }
        }
        out
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows);
        let mut out = Matrix::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Rank over the rationals by Bareiss elimination. Every intermediate
    /// division is exact, so entries stay integral.
    pub fn rank(&self) -> usize {
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let at = |i: usize, j: usize| i * cols + j;

        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| !m[at(r, col)].is_zero()) else {
                continue;
            };
            if p != rank {
                for j in 0..cols {
                    m.swap(at(p, j), at(rank, j));
                }
            }
            let pivot = m[at(rank, col)].clone();
            for r in rank + 1..rows {
                let factor = m[at(r, col)].clone();
                for j in col + 1..cols {
                    let v = (&pivot * &m[at(r, j)] - &factor * &m[at(rank, j)]) / &prev;
                    m[at(r, j)] = v;
                }
                m[at(r, col)] = BigInt::zero();
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Incrementally maintained echelon basis of a subspace of `Q^dim`.
///
/// Each stored vector has a pivot where it is the first nonzero entry, and
/// every stored vector is zero at the pivots of all earlier vectors. Vectors
/// are kept primitive (content 1) to bound coefficient growth.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    dim: usize,
    vectors: Vec<(usize, Vec<BigInt>)>,
}

impl SpanBasis {
    pub fn new(dim: usize) -> Self {
        SpanBasis {
            dim,
            vectors: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_full(&self) -> bool {
        self.vectors.len() == self.dim
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[BigInt]> {
        self.vectors.iter().map(|(_, v)| v.as_slice())
    }

    /// Reduces `v` against the basis. The result is zero iff `v` lies in
    /// the span.
    pub fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        assert_eq!(v.len(), self.dim);
        for (p, b) in &self.vectors {
            if v[*p].is_zero() {
                continue;
            }
            let g = b[*p].gcd(&v[*p]);
            let sb = &b[*p] / &g;
            let sv = &v[*p] / &g;
            for (x, y) in v.iter_mut().zip(b) {
                *x = &sb * &*x - &sv * y;
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    /// Adds `v` to the span. Returns the new basis vector when the rank grew.
    pub fn insert(&mut self, v: Vec<BigInt>) -> Option<&[BigInt]> {
        let mut v = self.reduce(v);
        let pivot = v.iter().position(|x| !x.is_zero())?;
        let content = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let content = if v[pivot].is_negative() { -content } else { content };
        if !content.is_one() {
            for x in v.iter_mut() {
                *x = &*x / &content;
            }
        }
        self.vectors.push((pivot, v));
        self.vectors.last().map(|(_, v)| v.as_slice())
    }
}
