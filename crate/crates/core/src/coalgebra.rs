//! Free coalgebras of finite rank given by structure constants, and their
//! dual convolution algebras.
//!
//! Tensor convention, used everywhere in the crate: the basis element
//! `b_i ⊗ c_k` of a tensor product whose second factor has rank `r` sits at
//! flat index `i * r + k` (0-based, first factor major).

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Caps, Error, Result};
use crate::howell::for_each_tuple;
use crate::matrix::RMatrix;
use crate::ring::RingSpec;

#[inline]
pub fn tensor_index(i: usize, k: usize, r: usize) -> usize {
    i * r + k
}

/// Raw structure constants of a coalgebra, not yet checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalgebraData {
    pub ring: RingSpec,
    pub rank: usize,
    /// `rank² × rank`; column `j` holds the coordinates of `Δ(c_j)`.
    pub delta: RMatrix,
    pub counit: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Coassociativity,
    CounitLeft,
    CounitRight,
    CoactionCounit,
    CoactionCoassociativity,
    RelationsClosed,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Coassociativity => "coassociativity",
            Axiom::CounitLeft => "counit (ε⊗I)Δ = id",
            Axiom::CounitRight => "counit (I⊗ε)Δ = id",
            Axiom::CoactionCounit => "coaction counit (I⊗ε)ϱ = id",
            Axiom::CoactionCoassociativity => "coaction coassociativity (ϱ⊗I)ϱ = (I⊗Δ)ϱ",
            Axiom::RelationsClosed => "relations closed under the coaction",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub holds: bool,
    /// First violating basis index, 1-based.
    pub basis: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failure(&self, axiom: Axiom) -> Option<usize> {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom && !c.holds)
            .and_then(|c| c.basis)
    }

    pub(crate) fn push(&mut self, axiom: Axiom, violation: Option<usize>) {
        self.checks.push(AxiomCheck {
            axiom,
            holds: violation.is_none(),
            basis: violation.map(|j| j + 1),
        });
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in self.checks.iter().filter(|c| !c.holds) {
            if !first {
                f.write_str("; ")?;
            }
            first = false;
            match c.basis {
                Some(j) => write!(f, "{} violated at basis index {j}", c.axiom)?,
                None => write!(f, "{} violated", c.axiom)?,
            }
        }
        if first {
            f.write_str("all axioms hold")?;
        }
        Ok(())
    }
}

fn check_shape(data: &CoalgebraData) -> Result<()> {
    let r = data.rank;
    if r == 0 {
        return Err(Error::Shape("coalgebra rank must be at least 1".into()));
    }
    if data.delta.shape() != (r * r, r) {
        return Err(Error::Shape(format!(
            "Δ must be {}x{r}, got {:?}",
            r * r,
            data.delta.shape()
        )));
    }
    if data.delta.ring() != data.ring {
        return Err(Error::RingMismatch("coalgebra"));
    }
    if data.counit.len() != r {
        return Err(Error::Shape(format!(
            "counit must have {r} entries, got {}",
            data.counit.len()
        )));
    }
    Ok(())
}

/// Checks coassociativity and both counit laws, reporting the first
/// violating basis element per axiom.
pub fn validate_coalgebra(data: &CoalgebraData) -> Result<AxiomReport> {
    check_shape(data)?;
    let ring = data.ring;
    let r = data.rank;
    let d = &data.delta;
    let eps: Vec<u64> = data.counit.iter().map(|&e| ring.reduce(e)).collect();
    let mut report = AxiomReport { checks: vec![] };

    let mut coassoc = None;
    'outer: for j in 0..r {
        // (Δ⊗I)Δ(c_j) and (I⊗Δ)Δ(c_j) in the basis c_a⊗c_b⊗c_c.
        let mut left = vec![0u64; r * r * r];
        let mut right = vec![0u64; r * r * r];
        for i in 0..r {
            for k in 0..r {
                let coef = d.get(tensor_index(i, k, r), j);
                if coef == 0 {
                    continue;
                }
                for a in 0..r {
                    for b in 0..r {
                        let li = (a * r + b) * r + k;
                        left[li] = ring.add(left[li], ring.mul(coef, d.get(tensor_index(a, b, r), i)));
                        let ri = (i * r + a) * r + b;
                        right[ri] = ring.add(right[ri], ring.mul(coef, d.get(tensor_index(a, b, r), k)));
                    }
                }
            }
        }
        if left != right {
            coassoc = Some(j);
            break 'outer;
        }
    }
    report.push(Axiom::Coassociativity, coassoc);

    let mut left_unit = None;
    let mut right_unit = None;
    for j in 0..r {
        let mut via_left = vec![0u64; r];
        let mut via_right = vec![0u64; r];
        for i in 0..r {
            for k in 0..r {
                let coef = d.get(tensor_index(i, k, r), j);
                via_left[k] = ring.add(via_left[k], ring.mul(coef, eps[i]));
                via_right[i] = ring.add(via_right[i], ring.mul(coef, eps[k]));
            }
        }
        let unit: Vec<u64> = (0..r).map(|i| u64::from(i == j)).collect();
        if left_unit.is_none() && via_left != unit {
            left_unit = Some(j);
        }
        if right_unit.is_none() && via_right != unit {
            right_unit = Some(j);
        }
    }
    report.push(Axiom::CounitLeft, left_unit);
    report.push(Axiom::CounitRight, right_unit);
    Ok(report)
}

/// A validated coalgebra. Cheap to clone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coalgebra(Arc<CoalgebraData>);

impl Coalgebra {
    pub fn new(data: CoalgebraData) -> Result<Self> {
        let report = validate_coalgebra(&data)?;
        if !report.passed() {
            return Err(Error::Axioms(report));
        }
        let mut data = data;
        data.counit.iter_mut().for_each(|e| *e = data.ring.reduce(*e));
        Ok(Coalgebra(Arc::new(data)))
    }

    pub fn data(&self) -> &CoalgebraData {
        &self.0
    }
    pub fn ring(&self) -> RingSpec {
        self.0.ring
    }
    pub fn rank(&self) -> usize {
        self.0.rank
    }
    pub fn delta(&self) -> &RMatrix {
        &self.0.delta
    }
    pub fn counit(&self) -> &[u64] {
        &self.0.counit
    }

    /// The one-dimensional coalgebra `Δ(c) = c⊗c`, `ε(c) = 1`.
    pub fn trivial(ring: RingSpec) -> Self {
        Self::grouplike(ring, 1)
    }

    /// `g` grouplike elements: `Δ(g_i) = g_i⊗g_i`, `ε(g_i) = 1`.
    pub fn grouplike(ring: RingSpec, g: usize) -> Self {
        assert!(g >= 1);
        let mut delta = RMatrix::zeros(ring, g * g, g);
        for i in 0..g {
            delta.set(tensor_index(i, i, g), i, 1);
        }
        Self::new(CoalgebraData {
            ring,
            rank: g,
            delta,
            counit: vec![1; g],
        })
        .expect("grouplike coalgebra is valid")
    }

    /// The matrix coalgebra on `e_ij` (basis index `i*k + j`):
    /// `Δ(e_ij) = Σ_l e_il⊗e_lj`, `ε(e_ij) = δ_ij`.
    pub fn matrix(ring: RingSpec, k: usize) -> Self {
        assert!(k >= 1);
        let r = k * k;
        let mut delta = RMatrix::zeros(ring, r * r, r);
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    delta.set(tensor_index(i * k + l, l * k + j, r), i * k + j, 1);
                }
            }
        }
        let counit = (0..r).map(|idx| u64::from(idx / k == idx % k)).collect();
        Self::new(CoalgebraData {
            ring,
            rank: r,
            delta,
            counit,
        })
        .expect("matrix coalgebra is valid")
    }

    /// Divided powers `x_0..x_{d-1}`: `Δ(x_m) = Σ_{i+j=m} x_i⊗x_j`,
    /// `ε(x_m) = δ_m0`. Its dual is the truncated polynomial ring `R[t]/t^d`.
    pub fn divided_power(ring: RingSpec, d: usize) -> Self {
        assert!(d >= 1);
        let mut delta = RMatrix::zeros(ring, d * d, d);
        for m in 0..d {
            for i in 0..=m {
                delta.set(tensor_index(i, m - i, d), m, 1);
            }
        }
        let counit = (0..d).map(|m| u64::from(m == 0)).collect();
        Self::new(CoalgebraData {
            ring,
            rank: d,
            delta,
            counit,
        })
        .expect("divided power coalgebra is valid")
    }

    /// Incidence coalgebra of the chain `1 < 2 < … < len`: basis the intervals
    /// `[i, j]` with `i <= j`, `Δ[i,j] = Σ_{i<=m<=j} [i,m]⊗[m,j]`,
    /// `ε[i,j] = δ_ij`. Its dual is the upper triangular matrix ring.
    pub fn chain_incidence(ring: RingSpec, len: usize) -> Self {
        assert!(len >= 1);
        let intervals: Vec<(usize, usize)> = (0..len).flat_map(|i| (i..len).map(move |j| (i, j))).collect();
        let r = intervals.len();
        let index = |a: usize, b: usize| intervals.iter().position(|&p| p == (a, b)).unwrap();
        let mut delta = RMatrix::zeros(ring, r * r, r);
        for (col, &(i, j)) in intervals.iter().enumerate() {
            for m in i..=j {
                delta.set(tensor_index(index(i, m), index(m, j), r), col, 1);
            }
        }
        let counit = intervals.iter().map(|&(i, j)| u64::from(i == j)).collect();
        Self::new(CoalgebraData {
            ring,
            rank: r,
            delta,
            counit,
        })
        .expect("incidence coalgebra is valid")
    }

    /// `C1 ⊕ C2` with the basis of `C1` first.
    pub fn direct_sum(c1: &Coalgebra, c2: &Coalgebra) -> Result<Self> {
        if c1.ring() != c2.ring() {
            return Err(Error::RingMismatch("direct_sum"));
        }
        let ring = c1.ring();
        let (r1, r2) = (c1.rank(), c2.rank());
        let r = r1 + r2;
        let mut delta = RMatrix::zeros(ring, r * r, r);
        for (c, off) in [(c1, 0), (c2, r1)] {
            let rc = c.rank();
            for j in 0..rc {
                for i in 0..rc {
                    for k in 0..rc {
                        let v = c.delta().get(tensor_index(i, k, rc), j);
                        if v != 0 {
                            delta.set(tensor_index(i + off, k + off, r), j + off, v);
                        }
                    }
                }
            }
        }
        let counit = c1.counit().iter().chain(c2.counit()).copied().collect();
        Self::new(CoalgebraData {
            ring,
            rank: r,
            delta,
            counit,
        })
    }

    /// Dual basis evaluation `f_l(c_k)`; the identity matrix for the dual basis.
    pub fn dual_pairing(&self) -> RMatrix {
        RMatrix::identity(self.ring(), self.rank())
    }
}

/// The convolution algebra `C* = Hom(C, R)` in the dual basis `f_1..f_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualAlgebra {
    coalgebra: Coalgebra,
    /// `r × r²`; column `(i, j)` holds the coordinates of `f_i ∗ f_j`.
    mult: RMatrix,
}

/// Outcome of the exhaustive associativity and unit checks on basis elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualAlgebraReport {
    pub associative: bool,
    pub unital: bool,
    /// First failing basis triple (1-based) for associativity.
    pub associativity_violation: Option<(usize, usize, usize)>,
    pub unit_violation: Option<usize>,
    pub order: u128,
}

impl DualAlgebraReport {
    pub fn passed(&self) -> bool {
        self.associative && self.unital
    }
}

/// Builds `C*`: `(f_i ∗ f_j)(c_l) = (f_i⊗f_j)Δ(c_l)`, the coefficient of
/// `c_i⊗c_j` in `Δ(c_l)`.
pub fn dual_algebra(c: &Coalgebra) -> DualAlgebra {
    let r = c.rank();
    let mult = RMatrix::from_fn(c.ring(), r, r * r, |l, ij| c.delta().get(ij, l));
    DualAlgebra {
        coalgebra: c.clone(),
        mult,
    }
}

impl DualAlgebra {
    pub fn coalgebra(&self) -> &Coalgebra {
        &self.coalgebra
    }

    pub fn mult(&self) -> &RMatrix {
        &self.mult
    }

    pub fn rank(&self) -> usize {
        self.coalgebra.rank()
    }

    pub fn ring(&self) -> RingSpec {
        self.coalgebra.ring()
    }

    /// Coordinates of the unit `ε`.
    pub fn unit(&self) -> &[u64] {
        self.coalgebra.counit()
    }

    /// Coordinates of the dual basis element `f_i`.
    pub fn basis(&self, i: usize) -> Vec<u64> {
        (0..self.rank()).map(|l| u64::from(l == i)).collect()
    }

    /// Convolution of two elements given in dual-basis coordinates.
    pub fn product(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let ring = self.ring();
        let r = self.rank();
        let mut out = vec![0u64; r];
        for (i, &ai) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (j, &bj) in b.iter().enumerate().filter(|(_, &x)| x != 0) {
                let ab = ring.mul(ai, bj);
                for (l, slot) in out.iter_mut().enumerate() {
                    let m = self.mult.get(l, tensor_index(i, j, r));
                    if m != 0 {
                        *slot = ring.add(*slot, ring.mul(ab, m));
                    }
                }
            }
        }
        out
    }

    /// Number of elements, `n^r`.
    pub fn order(&self) -> u128 {
        (self.ring().modulus() as u128).saturating_pow(self.rank() as u32)
    }

    pub fn elements(&self, caps: &Caps) -> Result<Vec<Vec<u64>>> {
        caps.check("dual algebra elements", self.order())?;
        let n = self.ring().modulus();
        let mut out = Vec::new();
        for_each_tuple(&vec![n; self.rank()], |t| out.push(t.to_vec()));
        Ok(out)
    }

    /// Exhaustive associativity on all basis triples and unit laws on all
    /// basis elements.
    pub fn verify(&self) -> DualAlgebraReport {
        let r = self.rank();
        let mut associativity_violation = None;
        'outer: for i in 0..r {
            for j in 0..r {
                let fij = self.product(&self.basis(i), &self.basis(j));
                for k in 0..r {
                    let fjk = self.product(&self.basis(j), &self.basis(k));
                    if self.product(&fij, &self.basis(k)) != self.product(&self.basis(i), &fjk) {
                        associativity_violation = Some((i + 1, j + 1, k + 1));
                        break 'outer;
                    }
                }
            }
        }
        let unit = self.unit().to_vec();
        let unit_violation = (0..r)
            .find(|&i| {
                let b = self.basis(i);
                self.product(&unit, &b) != b || self.product(&b, &unit) != b
            })
            .map(|i| i + 1);
        DualAlgebraReport {
            associative: associativity_violation.is_none(),
            unital: unit_violation.is_none(),
            associativity_violation,
            unit_violation,
            order: self.order(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> RingSpec {
        RingSpec::new(n).unwrap()
    }

    #[test]
    fn catalog_validates() {
        for n in [2, 3, 4, 6] {
            let ring = z(n);
            for c in [
                Coalgebra::trivial(ring),
                Coalgebra::grouplike(ring, 3),
                Coalgebra::matrix(ring, 2),
                Coalgebra::matrix(ring, 3),
                Coalgebra::divided_power(ring, 4),
                Coalgebra::chain_incidence(ring, 3),
            ] {
                assert!(validate_coalgebra(c.data()).unwrap().passed());
            }
        }
    }

    #[test]
    fn tampered_grouplike_fails_counit_at_second_basis() {
        let mut data = Coalgebra::grouplike(z(2), 2).data().clone();
        data.counit[1] = 0;
        let report = validate_coalgebra(&data).unwrap();
        assert!(!report.passed());
        assert_eq!(report.failure(Axiom::CounitRight), Some(2));
        assert_eq!(report.failure(Axiom::Coassociativity), None);
        assert!(matches!(Coalgebra::new(data), Err(Error::Axioms(_))));
    }

    #[test]
    fn non_coassociative_constants_are_caught() {
        // Δ(c_1) = c_1⊗c_1 + c_1⊗c_2 is not coassociative.
        let ring = z(3);
        let mut data = Coalgebra::grouplike(ring, 2).data().clone();
        data.delta.set(tensor_index(0, 1, 2), 0, 1);
        let report = validate_coalgebra(&data).unwrap();
        assert_eq!(report.failure(Axiom::Coassociativity), Some(1));
    }

    #[test]
    fn shape_errors() {
        let ring = z(2);
        let mut data = Coalgebra::grouplike(ring, 2).data().clone();
        data.counit.pop();
        assert!(matches!(validate_coalgebra(&data), Err(Error::Shape(_))));
    }

    #[test]
    fn direct_sum_of_trivials_is_grouplike() {
        let ring = z(2);
        let t = Coalgebra::trivial(ring);
        let s = Coalgebra::direct_sum(&t, &t).unwrap();
        assert_eq!(s.data(), Coalgebra::grouplike(ring, 2).data());
    }

    #[test]
    fn trivial_dual_is_the_ring() {
        let c = Coalgebra::trivial(z(4));
        let d = dual_algebra(&c);
        assert_eq!(d.product(&[1], &[1]), vec![1]);
        assert_eq!(d.product(&[2], &[3]), vec![2]);
        assert!(d.verify().passed());
        assert_eq!(d.order(), 4);
    }
}
