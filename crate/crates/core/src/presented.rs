//! Finitely presented Z/n-modules `R^dim / Rel`.

use crate::error::{Caps, Result};
use crate::howell::{for_each_tuple, howell, kernel, HowellForm};
use crate::matrix::RMatrix;
use crate::ring::RingSpec;

/// The module `R^dim` modulo the row span of a relation matrix.
///
/// Elements are handled as coordinate vectors in `R^dim`; two vectors are the
/// same element when their difference lies in the relation span. The free
/// module is the case of an empty relation span.
#[derive(Clone, Debug)]
pub struct PresentedModule {
    ring: RingSpec,
    dim: usize,
    relations: HowellForm,
    /// Rows `φ` with `φ · r = 0` for every relation `r`; over Z/n the double
    /// annihilator gives `v ∈ Rel ⇔ perp · v = 0`.
    perp: RMatrix,
}

impl PartialEq for PresentedModule {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.relations.matrix() == other.relations.matrix()
    }
}

impl Eq for PresentedModule {}

impl PresentedModule {
    pub fn free(ring: RingSpec, dim: usize) -> Self {
        Self::new(&RMatrix::zeros(ring, 0, dim))
    }

    /// `R^cols / rowspan(relations)`.
    pub fn new(relations: &RMatrix) -> Self {
        let ring = relations.ring();
        let dim = relations.cols();
        let relations = howell(relations);
        let perp = kernel(&relations.matrix().transpose()).matrix().clone();
        PresentedModule {
            ring,
            dim,
            relations,
            perp,
        }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn relations(&self) -> &HowellForm {
        &self.relations
    }

    pub fn perp(&self) -> &RMatrix {
        &self.perp
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_zero()
    }

    /// Canonical representative of the class of `v`.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        self.relations.reduce(v)
    }

    pub fn is_zero(&self, v: &[u64]) -> bool {
        self.relations.contains(v)
    }

    pub fn equal(&self, a: &[u64], b: &[u64]) -> bool {
        let d: Vec<u64> = a.iter().zip(b).map(|(&x, &y)| self.ring.sub(x, y)).collect();
        self.is_zero(&d)
    }

    /// Number of elements.
    pub fn order(&self) -> u128 {
        self.relations
            .residue_ranges()
            .iter()
            .fold(1u128, |acc, &b| acc.saturating_mul(b as u128))
    }

    /// Every element once, as canonical representatives in lexicographic order.
    pub fn elements(&self, caps: &Caps) -> Result<Vec<Vec<u64>>> {
        caps.check("module elements", self.order())?;
        let mut out = Vec::with_capacity(self.order() as usize);
        for_each_tuple(&self.relations.residue_ranges(), |t| out.push(t.to_vec()));
        Ok(out)
    }

    /// The quotient by additional relations.
    pub fn quotient(&self, extra: &RMatrix) -> Result<Self> {
        Ok(Self::new(&self.relations.matrix().vstack(extra)?))
    }

    /// Reduces every column of `m` (a matrix whose columns are elements).
    pub fn reduce_columns(&self, m: &RMatrix) -> RMatrix {
        let cols: Vec<Vec<u64>> = (0..m.cols()).map(|j| self.reduce(&m.col_vec(j))).collect();
        RMatrix::from_fn(self.ring, m.rows(), m.cols(), |i, j| cols[j][i])
    }
}
