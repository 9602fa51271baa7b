//! Dense matrices over Z/n.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::RingSpec;

/// A dense row-major matrix with entries reduced into `[0, n)`.
///
/// Zero-row and zero-column matrices are valid values; they show up for the
/// zero comodule and for empty generator lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RMatrix {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl RMatrix {
    pub fn zeros(ring: RingSpec, rows: usize, cols: usize) -> Self {
        RMatrix {
            ring,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(ring: RingSpec, size: usize) -> Self {
        let mut m = Self::zeros(ring, size, size);
        for i in 0..size {
            m.data[i * size + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major data, reducing every entry.
    pub fn from_vec(ring: RingSpec, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        let data = data.into_iter().map(|x| ring.reduce(x)).collect();
        Ok(RMatrix { ring, rows, cols, data })
    }

    /// Builds a matrix from a list of equally long rows; `cols` fixes the width
    /// when the list is empty.
    pub fn from_rows(ring: RingSpec, cols: usize, rows: &[Vec<u64>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r.iter().map(|&x| ring.reduce(x)));
        }
        RMatrix {
            ring,
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_fn(ring: RingSpec, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(ring.reduce(f(i, j)));
            }
        }
        RMatrix { ring, rows, cols, data }
    }

    /// A single column vector.
    pub fn column(ring: RingSpec, v: &[u64]) -> Self {
        Self::from_fn(ring, v.len(), 1, |i, _| v[i])
    }

    #[inline]
    pub fn ring(&self) -> RingSpec {
        self.ring
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    #[inline]
    pub fn data(&self) -> &[u64] {
        &self.data
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = self.ring.reduce(v);
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col_vec(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ring, self.cols, self.rows, |i, j| self.get(j, i))
    }

    fn same_ring(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.ring != other.ring {
            Err(Error::RingMismatch(op))
        } else {
            Ok(())
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other, "mul")?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let n = self.ring.modulus() as u128;
        let mut out = Self::zeros(self.ring, self.rows, other.cols);
        let mut acc = vec![0u128; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(i, k) as u128;
                if a == 0 {
                    continue;
                }
                for (j, slot) in acc.iter_mut().enumerate() {
                    *slot = (*slot + a * other.get(k, j) as u128) % n;
                }
            }
            for (j, &v) in acc.iter().enumerate() {
                out.data[i * other.cols + j] = v as u64;
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, op: &'static str, f: impl Fn(u64, u64) -> u64) -> Result<Self> {
        self.same_ring(other, op)?;
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(RMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let r = self.ring;
        self.zip_with(other, "add", |a, b| r.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let r = self.ring;
        self.zip_with(other, "sub", |a, b| r.sub(a, b))
    }

    pub fn neg(&self) -> Self {
        let r = self.ring;
        RMatrix {
            data: self.data.iter().map(|&a| r.neg(a)).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: u64) -> Self {
        let r = self.ring;
        RMatrix {
            data: self.data.iter().map(|&a| r.mul(a, c)).collect(),
            ..self.clone()
        }
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "apply: vector length");
        let n = self.ring.modulus() as u128;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u128;
                for (j, &x) in v.iter().enumerate() {
                    acc = (acc + self.get(i, j) as u128 * x as u128) % n;
                }
                acc as u64
            })
            .collect()
    }

    /// `v * self` for a row vector `v`.
    pub fn row_apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.rows, "row_apply: vector length");
        let n = self.ring.modulus() as u128;
        let mut acc = vec![0u128; self.cols];
        for (i, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, slot) in acc.iter_mut().enumerate() {
                *slot = (*slot + x as u128 * self.get(i, j) as u128) % n;
            }
        }
        acc.into_iter().map(|a| a as u64).collect()
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        self.same_ring(other, "vstack")?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op: "vstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(RMatrix {
            ring: self.ring,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        self.same_ring(other, "hstack")?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                op: "hstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self::from_fn(self.ring, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        }))
    }

    /// Kronecker product `self ⊗ other`, first factor major.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        self.same_ring(other, "kron")?;
        let r = self.ring;
        Ok(Self::from_fn(
            r,
            self.rows * other.rows,
            self.cols * other.cols,
            |i, j| {
                r.mul(
                    self.get(i / other.rows, j / other.cols),
                    other.get(i % other.rows, j % other.cols),
                )
            },
        ))
    }

    /// Rows `range` as a new matrix.
    pub fn select_rows(&self, idx: impl IntoIterator<Item = usize>) -> Self {
        let rows: Vec<Vec<u64>> = idx.into_iter().map(|i| self.row(i).to_vec()).collect();
        Self::from_rows(self.ring, self.cols, &rows)
    }

    /// Columns `lo..hi` as a new matrix.
    pub fn column_block(&self, lo: usize, hi: usize) -> Self {
        Self::from_fn(self.ring, self.rows, hi - lo, |i, j| self.get(i, lo + j))
    }
}

impl fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RMatrix[Z/{}; {}x{}]{:?}",
            self.ring.modulus(),
            self.rows,
            self.cols,
            self.row_vecs()
        )
    }
}

impl fmt::Display for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl serde::Serialize for RMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.row_vecs().serialize(s)
    }
}

/// Sum over residues with `u128` accumulation.
pub fn dot(ring: RingSpec, a: &[u64], b: &[u64]) -> u64 {
    let n = ring.modulus() as u128;
    let mut acc = 0u128;
    for (&x, &y) in a.iter().zip(b) {
        acc = (acc + x as u128 * y as u128) % n;
    }
    acc as u64
}

pub fn vec_add(ring: RingSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(&x, &y)| ring.add(x, y)).collect()
}

pub fn vec_sub(ring: RingSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(&x, &y)| ring.sub(x, y)).collect()
}

pub fn vec_scale(ring: RingSpec, a: &[u64], c: u64) -> Vec<u64> {
    a.iter().map(|&x| ring.mul(x, c)).collect()
}
