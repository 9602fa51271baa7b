//! Howell normal form and the linear algebra built on it.
//!
//! Over Z/n with zero divisors an echelon form is not unique; the Howell form
//! adds the annihilator rows that make it so. Every row span then has exactly
//! one Howell representative, which is what lets submodules be compared by
//! matrix equality.

use crate::error::{Error, Result};
use crate::matrix::RMatrix;
use crate::ring::{ext_gcd, gcd, RingSpec};

/// A matrix in Howell normal form together with the row operations that
/// produced it from its source.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HowellForm {
    matrix: RMatrix,
    transform: RMatrix,
    /// `(column, pivot value)` for each row; pivot values divide the modulus.
    pivots: Vec<(usize, u64)>,
}

impl HowellForm {
    pub fn matrix(&self) -> &RMatrix {
        &self.matrix
    }

    /// `transform * source == matrix`.
    pub fn transform(&self) -> &RMatrix {
        &self.transform
    }

    pub fn pivots(&self) -> &[(usize, u64)] {
        &self.pivots
    }

    pub fn ring(&self) -> RingSpec {
        self.matrix.ring()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.rows() == 0
    }

    /// Number of elements of the row span: the product of `n / pivot`.
    pub fn span_size(&self) -> u128 {
        let n = self.ring().modulus() as u128;
        self.pivots
            .iter()
            .fold(1u128, |acc, &(_, p)| acc.saturating_mul(n / p as u128))
    }

    /// Reduces `v` against the form. Returns the canonical remainder and the
    /// coefficients `c` (one per Howell row) with `v = c * H + remainder`.
    pub fn reduce_with_coeffs(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let ring = self.ring();
        let mut v = v.to_vec();
        let mut coeffs = vec![0u64; self.pivots.len()];
        for (i, &(c, p)) in self.pivots.iter().enumerate() {
            let q = v[c] / p;
            if q != 0 {
                coeffs[i] = q;
                let row = self.matrix.row(i);
                for (x, &h) in v.iter_mut().zip(row) {
                    *x = ring.sub(*x, ring.mul(q, h));
                }
            }
        }
        (v, coeffs)
    }

    /// The canonical representative of `v` modulo the row span.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        self.reduce_with_coeffs(v).0
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coefficients `c` with `c * H = v`, if `v` lies in the span.
    pub fn express(&self, v: &[u64]) -> Option<Vec<u64>> {
        let (rem, coeffs) = self.reduce_with_coeffs(v);
        rem.iter().all(|&x| x == 0).then_some(coeffs)
    }

    /// Whether the span of `self` contains the span of `other`.
    pub fn contains_span(&self, other: &HowellForm) -> bool {
        (0..other.matrix.rows()).all(|i| self.contains(other.matrix.row(i)))
    }

    /// Canonical coset representatives of `R^cols / span`: for every column
    /// the admissible range of values of a reduced vector.
    pub fn residue_ranges(&self) -> Vec<u64> {
        let n = self.ring().modulus();
        let mut ranges = vec![n; self.matrix.cols()];
        for &(c, p) in &self.pivots {
            ranges[c] = p;
        }
        ranges
    }

    /// All elements of the span, each exactly once.
    pub fn span_elements(&self) -> Vec<Vec<u64>> {
        let ring = self.ring();
        let n = ring.modulus();
        let bounds: Vec<u64> = self.pivots.iter().map(|&(_, p)| n / p).collect();
        let mut out = Vec::new();
        for_each_tuple(&bounds, |coeffs| {
            out.push(self.matrix.row_apply(coeffs));
        });
        out
    }
}

/// Calls `f` on every tuple `t` with `0 <= t[i] < bounds[i]` in lexicographic
/// order (last position fastest).
pub fn for_each_tuple(bounds: &[u64], mut f: impl FnMut(&[u64])) {
    if bounds.contains(&0) {
        return;
    }
    let mut t = vec![0u64; bounds.len()];
    loop {
        f(&t);
        let mut i = bounds.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < bounds[i] {
                break;
            }
            t[i] = 0;
        }
    }
}

struct Work {
    ring: RingSpec,
    rows: Vec<Vec<u64>>,
    trans: Vec<Vec<u64>>,
}

impl Work {
    fn combine(&mut self, r: usize, i: usize, c: usize) {
        let ring = self.ring;
        let a = self.rows[r][c];
        let b = self.rows[i][c];
        let (g, s, t) = ext_gcd(a as i128, b as i128);
        let s = ring.reduce_signed(s);
        let t = ring.reduce_signed(t);
        let ag = ring.reduce((a as i128 / g) as u64);
        let bg = ring.reduce((b as i128 / g) as u64);
        // [s t; -b/g a/g] has determinant one.
        for mat in [&mut self.rows, &mut self.trans] {
            let (lo, hi) = mat.split_at_mut(i);
            let (row_r, row_i) = (&mut lo[r], &mut hi[0]);
            for (x, y) in row_r.iter_mut().zip(row_i.iter_mut()) {
                let nr = ring.add(ring.mul(s, *x), ring.mul(t, *y));
                let ni = ring.sub(ring.mul(ag, *y), ring.mul(bg, *x));
                *x = nr;
                *y = ni;
            }
        }
    }

    fn scale(&mut self, r: usize, u: u64) {
        let ring = self.ring;
        for x in self.rows[r].iter_mut().chain(self.trans[r].iter_mut()) {
            *x = ring.mul(*x, u);
        }
    }

    fn sub_multiple(&mut self, target: usize, src: usize, q: u64) {
        let ring = self.ring;
        for mat in [&mut self.rows, &mut self.trans] {
            let src_row = mat[src].clone();
            for (x, &y) in mat[target].iter_mut().zip(&src_row) {
                *x = ring.sub(*x, ring.mul(q, y));
            }
        }
    }
}

/// Computes the Howell normal form of the row span of `m`.
pub fn howell(m: &RMatrix) -> HowellForm {
    let ring = m.ring();
    let n = ring.modulus();
    let cols = m.cols();
    let mut w = Work {
        ring,
        rows: m.row_vecs(),
        trans: RMatrix::identity(ring, m.rows()).row_vecs(),
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let mut i = r + 1;
        while i < w.rows.len() {
            if w.rows[i][c] != 0 {
                if r >= w.rows.len() || w.rows[r][c] == 0 {
                    w.rows.swap(r, i);
                    w.trans.swap(r, i);
                } else {
                    w.combine(r, i, c);
                }
            }
            i += 1;
        }
        if r >= w.rows.len() || w.rows[r][c] == 0 {
            continue;
        }
        let u = ring.normalizing_unit(w.rows[r][c]);
        w.scale(r, u);
        let p = w.rows[r][c];
        debug_assert_eq!(p, gcd(p, n));
        // Annihilator row: (n/p) * row has a zero in column c and must be
        // absorbed by the rows below.
        let ann = n / p;
        let ann_row: Vec<u64> = w.rows[r].iter().map(|&x| ring.mul(x, ann)).collect();
        if ann_row.iter().any(|&x| x != 0) {
            let ann_trans: Vec<u64> = w.trans[r].iter().map(|&x| ring.mul(x, ann)).collect();
            w.rows.push(ann_row);
            w.trans.push(ann_trans);
        }
        pivots.push((c, p));
        r += 1;
    }
    // Reduce the entries above each pivot into [0, pivot).
    for (i, &(c, p)) in pivots.iter().enumerate() {
        for j in 0..i {
            let q = w.rows[j][c] / p;
            if q != 0 {
                w.sub_multiple(j, i, q);
            }
        }
    }
    w.rows.truncate(r);
    w.trans.truncate(r);
    let matrix = RMatrix::from_rows(ring, cols, &w.rows);
    let transform = RMatrix::from_rows(ring, m.rows(), &w.trans);
    HowellForm {
        matrix,
        transform,
        pivots,
    }
}

/// Howell form of the span of the rows of `a` and `b` together.
pub fn sum_rowspans(a: &RMatrix, b: &RMatrix) -> Result<HowellForm> {
    Ok(howell(&a.vstack(b)?))
}

/// Some `x` with `a * x = b`, or `None` when the system is inconsistent.
pub fn solve(a: &RMatrix, b: &RMatrix) -> Result<Option<RMatrix>> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch("solve"));
    }
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            op: "solve",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let ring = a.ring();
    // a x_j = b_j  <=>  x_j^T a^T = b_j^T: a row-membership problem in a^T.
    let at = a.transpose();
    let h = howell(&at);
    let mut x = RMatrix::zeros(ring, a.cols(), b.cols());
    for j in 0..b.cols() {
        let bj = b.col_vec(j);
        let Some(coeffs) = h.express(&bj) else {
            return Ok(None);
        };
        let xj = h.transform().row_apply(&coeffs);
        for (i, v) in xj.into_iter().enumerate() {
            x.set(i, j, v);
        }
    }
    debug_assert_eq!(&a.mul(&x)?, b);
    if &a.mul(&x)? != b {
        return Ok(None);
    }
    Ok(Some(x))
}

/// Generators (in Howell form) of the left kernel `{x : x * a = 0}`.
pub fn kernel(a: &RMatrix) -> HowellForm {
    let ring = a.ring();
    let aug = a.hstack(&RMatrix::identity(ring, a.rows())).expect("same row count");
    let h = howell(&aug);
    let k = a.cols();
    let rows: Vec<Vec<u64>> = (0..h.rank())
        .filter(|&i| h.pivots()[i].0 >= k)
        .map(|i| h.matrix().row(i)[k..].to_vec())
        .collect();
    howell(&RMatrix::from_rows(ring, a.rows(), &rows))
}

/// Howell generators of `rowspan(a) ∩ rowspan(b)`.
pub fn intersect_rowspans(a: &RMatrix, b: &RMatrix) -> Result<HowellForm> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch("intersect_rowspans"));
    }
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            op: "intersect_rowspans",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let ring = a.ring();
    let k = a.cols();
    // Rows (a | a) and (b | 0): combinations with a zero left half carry
    // x*a = -y*b in the right half.
    let top = a.hstack(a)?;
    let bottom = b.hstack(&RMatrix::zeros(ring, b.rows(), k))?;
    let h = howell(&top.vstack(&bottom)?);
    let rows: Vec<Vec<u64>> = (0..h.rank())
        .filter(|&i| h.pivots()[i].0 >= k)
        .map(|i| h.matrix().row(i)[k..].to_vec())
        .collect();
    Ok(howell(&RMatrix::from_rows(ring, k, &rows)))
}

/// Determinant via unimodular row elimination.
pub fn determinant(a: &RMatrix) -> Result<u64> {
    if !a.is_square() {
        return Err(Error::NotSquare("determinant"));
    }
    let ring = a.ring();
    let size = a.rows();
    let mut rows = a.row_vecs();
    let mut negate = false;
    for c in 0..size {
        for i in (c + 1)..size {
            if rows[i][c] == 0 {
                continue;
            }
            if rows[c][c] == 0 {
                rows.swap(c, i);
                negate = !negate;
                continue;
            }
            let x = rows[c][c];
            let y = rows[i][c];
            let (g, s, t) = ext_gcd(x as i128, y as i128);
            let s = ring.reduce_signed(s);
            let t = ring.reduce_signed(t);
            let xg = ring.reduce((x as i128 / g) as u64);
            let yg = ring.reduce((y as i128 / g) as u64);
            let (lo, hi) = rows.split_at_mut(i);
            for (p, q) in lo[c].iter_mut().zip(hi[0].iter_mut()) {
                let np = ring.add(ring.mul(s, *p), ring.mul(t, *q));
                let nq = ring.sub(ring.mul(xg, *q), ring.mul(yg, *p));
                *p = np;
                *q = nq;
            }
        }
    }
    let mut det = 1u64;
    for (i, row) in rows.iter().enumerate() {
        det = ring.mul(det, row[i]);
    }
    Ok(if negate { ring.neg(det) } else { det })
}

/// Result of [`is_unit_matrix`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitTest {
    pub determinant: u64,
    pub inverse: Option<RMatrix>,
}

impl UnitTest {
    pub fn is_unit(&self) -> bool {
        self.inverse.is_some()
    }
}

/// Decides invertibility by `gcd(det, n) == 1` and, when invertible, builds
/// the inverse and checks it on both sides.
pub fn is_unit_matrix(a: &RMatrix) -> Result<UnitTest> {
    let det = determinant(a)?;
    let ring = a.ring();
    let by_det = ring.is_unit(det);
    let id = RMatrix::identity(ring, a.rows());
    let inverse = solve(a, &id)?;
    if let Some(inv) = &inverse {
        assert_eq!(inv.mul(a)?, id, "right inverse of a square matrix is two-sided");
    }
    assert_eq!(by_det, inverse.is_some(), "determinant test disagrees with inversion");
    Ok(UnitTest {
        determinant: det,
        inverse,
    })
}
