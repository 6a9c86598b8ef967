//! Dense max-plus matrices.
//!
//! Indices are 0-based throughout the library. Node 0 plays the role of the
//! distinguished node carrying the weight-0 loop; user-facing formats shift
//! to 1-based numbering at the I/O boundary.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};
use crate::scalar::{Epsilon, Finite, TropicalScalar, Weight};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropicalMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<TropicalScalar<T>>,
}

impl<T: Weight> TropicalMatrix<T> {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<TropicalScalar<T>>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::BadShape {
                rows,
                cols,
                got: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from a list of rows, which must all have the same length.
    pub fn from_rows(rows: Vec<Vec<TropicalScalar<T>>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            if row.len() != n_cols {
                return Err(Error::BadShape {
                    rows: n_rows,
                    cols: n_cols,
                    got: row.len(),
                });
            }
            entries.extend(row);
        }
        Self::new(n_rows, n_cols, entries)
    }

    pub fn filled(rows: usize, cols: usize, value: TropicalScalar<T>) -> Self {
        Self {
            rows,
            cols,
            entries: vec![value; rows * cols],
        }
    }

    /// All-ε matrix.
    pub fn epsilon(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, Epsilon)
    }

    /// Tropical identity: 0 on the diagonal, ε elsewhere.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::epsilon(n, n);
        for i in 0..n {
            m.set(i, i, TropicalScalar::unit());
        }
        m
    }

    pub fn column_vector(values: Vec<TropicalScalar<T>>) -> Self {
        let rows = values.len();
        Self {
            rows,
            cols: 1,
            entries: values,
        }
    }

    pub fn row_vector(values: Vec<TropicalScalar<T>>) -> Self {
        let cols = values.len();
        Self {
            rows: 1,
            cols,
            entries: values,
        }
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

    /// Side length of a square matrix.
    pub fn dim(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &TropicalScalar<T> {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: TropicalScalar<T>) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        self.entries[i * self.cols + j] = value;
    }

    /// Copy of `self` with one entry replaced.
    pub fn with_entry(&self, i: usize, j: usize, value: TropicalScalar<T>) -> Self {
        let mut m = self.clone();
        m.set(i, j, value);
        m
    }

    pub fn entries(&self) -> &[TropicalScalar<T>] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[TropicalScalar<T>] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<TropicalScalar<T>> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[TropicalScalar<T>]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::epsilon(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Tropical product: `(A ⊗ B)_ij = max_k a_ik + b_kj`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let mut out = Self::epsilon(self.rows, rhs.cols);
        for i in 0..self.rows {
            for (k, a) in self.row(i).iter().enumerate() {
                let Finite(a) = a else { continue };
                for j in 0..rhs.cols {
                    if let Finite(b) = rhs.get(k, j) {
                        out.entries[i * rhs.cols + j].oplus_assign(Finite(a.clone() + b.clone()));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Entrywise max, `A ⊕ B`.
    pub fn oplus(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.oplus(b))
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// k-fold tropical power; `k = 0` gives the identity.
    pub fn power(&self, k: usize) -> Result<Self> {
        let n = self.dim()?;
        let mut result = Self::identity(n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Entrywise `self <= rhs` in the tropical order.
    pub fn le(&self, rhs: &Self) -> bool {
        self.rows == rhs.rows
            && self.cols == rhs.cols
            && self.entries.iter().zip(&rhs.entries).all(|(a, b)| a <= b)
    }

    /// Square submatrix with row and column `idx` removed.
    pub fn without_index(&self, idx: usize) -> Result<Self> {
        let n = self.dim()?;
        assert!(idx < n, "index {idx} out of bounds");
        let keep: Vec<usize> = (0..n).filter(|&i| i != idx).collect();
        let mut entries = Vec::with_capacity(keep.len() * keep.len());
        for &i in &keep {
            for &j in &keep {
                entries.push(self.get(i, j).clone());
            }
        }
        Self::new(keep.len(), keep.len(), entries)
    }

    /// Max-plus outer product `x ⊗ yᵀ` of two column vectors.
    pub fn outer_product(x: &Self, y: &Self) -> Result<Self> {
        if x.cols != 1 || y.cols != 1 || x.rows != y.rows {
            return Err(Error::DimensionMismatch {
                left_rows: x.rows,
                left_cols: x.cols,
                right_rows: y.rows,
                right_cols: y.cols,
            });
        }
        x.mul(&y.transpose())
    }

    /// Tests whether `self` is the outer product pinned at entry (0,0).
    ///
    /// Returns `(x, y)` with `x` the first column and `y` the first row
    /// shifted by `-m_00`, provided `m_ij = m_i0 + m_0j - m_00` for every
    /// entry (ε on one side iff ε on the other).
    pub fn rank_one_factor(&self) -> Result<Option<(Self, Self)>> {
        let n = self.dim()?;
        if n == 0 {
            return Ok(Some((Self::epsilon(0, 1), Self::epsilon(0, 1))));
        }
        let Finite(pivot) = self.get(0, 0) else {
            return Err(Error::EpsilonPivot);
        };
        let x = Self::column_vector(self.column(0));
        let y = Self::column_vector(
            self.row(0)
                .iter()
                .map(|v| match v {
                    Finite(v) => Finite(v.clone() - pivot.clone()),
                    Epsilon => Epsilon,
                })
                .collect(),
        );
        for i in 0..n {
            for j in 0..n {
                let expected = x.entries[i].otimes(&y.entries[j]);
                if *self.get(i, j) != expected {
                    return Ok(None);
                }
            }
        }
        Ok(Some((x, y)))
    }

    /// True iff [`rank_one_factor`](Self::rank_one_factor) succeeds.
    pub fn is_rank_one(&self) -> bool {
        matches!(self.rank_one_factor(), Ok(Some(_)))
    }

    /// Applies `f` to every finite entry, keeping ε in place.
    pub fn map_finite<U: Weight>(&self, f: impl Fn(&T) -> U) -> TropicalMatrix<U> {
        TropicalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|e| match e {
                    Finite(v) => Finite(f(v)),
                    Epsilon => Epsilon,
                })
                .collect(),
        }
    }

    fn same_shape(&self, rhs: &Self) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        Ok(())
    }
}

impl<T> Index<(usize, usize)> for TropicalMatrix<T> {
    type Output = TropicalScalar<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Self::Output {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for TropicalMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row = &self.entries[i * self.cols..(i + 1) * self.cols];
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Free-function form of [`TropicalMatrix::mul`].
pub fn mat_mul<T: Weight>(a: &TropicalMatrix<T>, b: &TropicalMatrix<T>) -> Result<TropicalMatrix<T>> {
    a.mul(b)
}

/// Free-function form of [`TropicalMatrix::power`].
pub fn mat_power<T: Weight>(a: &TropicalMatrix<T>, k: usize) -> Result<TropicalMatrix<T>> {
    a.power(k)
}

/// Free-function form of [`TropicalMatrix::outer_product`].
pub fn outer_product<T: Weight>(
    x: &TropicalMatrix<T>,
    y: &TropicalMatrix<T>,
) -> Result<TropicalMatrix<T>> {
    TropicalMatrix::outer_product(x, y)
}
