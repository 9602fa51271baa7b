//! Right comodules over a free coalgebra, the induced left `C*`-action,
//! morphism spaces and endomorphism rings.
//!
//! A comodule is a finitely presented module `M = R^m / Rel` with a coaction
//! `ϱ: M → M⊗C` given by an `(m·r) × m` matrix. Slicing the coaction by the
//! coalgebra coordinate gives action matrices `A_k` with
//! `ϱ(x) = Σ_k A_k x ⊗ c_k`; every linear condition on the coaction is a
//! condition on the `A_k` modulo `Rel`.

use std::collections::{BTreeSet, HashMap};

use crate::coalgebra::{tensor_index, Axiom, AxiomReport, Coalgebra};
use crate::error::{Caps, Error, Result};
use crate::howell::{howell, kernel, solve, HowellForm};
use crate::matrix::{vec_add, vec_scale, RMatrix};
use crate::presented::PresentedModule;
use crate::ring::RingSpec;

/// Raw coaction data of a comodule, not yet checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComoduleData {
    pub rank: usize,
    /// `(rank·r) × rank`; column `j` holds `ϱ(b_j)` in the basis `b_i⊗c_k`.
    pub rho: RMatrix,
    /// Rows generate the relation submodule; empty for a free module.
    pub relations: RMatrix,
}

impl ComoduleData {
    pub fn free(rank: usize, rho: RMatrix) -> Self {
        let ring = rho.ring();
        ComoduleData {
            rank,
            rho,
            relations: RMatrix::zeros(ring, 0, rank),
        }
    }
}

fn check_shape(c: &Coalgebra, data: &ComoduleData) -> Result<()> {
    let (m, r) = (data.rank, c.rank());
    if data.rho.shape() != (m * r, m) {
        return Err(Error::Shape(format!(
            "ϱ must be {}x{m}, got {:?}",
            m * r,
            data.rho.shape()
        )));
    }
    if data.relations.cols() != m {
        return Err(Error::Shape(format!(
            "relations must have {m} columns, got {}",
            data.relations.cols()
        )));
    }
    if data.rho.ring() != c.ring() || data.relations.ring() != c.ring() {
        return Err(Error::RingMismatch("comodule"));
    }
    Ok(())
}

/// Action matrices `A_k[i][j] = ϱ[(i,k), j]`.
fn action_matrices(rho: &RMatrix, m: usize, r: usize) -> Vec<RMatrix> {
    (0..r)
        .map(|k| RMatrix::from_fn(rho.ring(), m, m, |i, j| rho.get(tensor_index(i, k, r), j)))
        .collect()
}

/// Checks the counit and coassociativity laws modulo the relations, and that
/// the relations are closed under the coaction.
pub fn validate_comodule(c: &Coalgebra, data: &ComoduleData) -> Result<AxiomReport> {
    check_shape(c, data)?;
    let ring = c.ring();
    let (m, r) = (data.rank, c.rank());
    let module = PresentedModule::new(&data.relations);
    let rho = &data.rho;
    let delta = c.delta();
    let eps = c.counit();
    let mut report = AxiomReport { checks: vec![] };

    let counit = (0..m).find(|&j| {
        let mut v = vec![0u64; m];
        for (i, slot) in v.iter_mut().enumerate() {
            for (k, &e) in eps.iter().enumerate() {
                *slot = ring.add(*slot, ring.mul(rho.get(tensor_index(i, k, r), j), e));
            }
        }
        v[j] = ring.sub(v[j], 1);
        !module.is_zero(&v)
    });
    report.push(Axiom::CoactionCounit, counit);

    let coassoc = (0..m).find(|&j| {
        // Both sides in the basis b_p⊗c_a⊗c_b at flat index (p*r + a)*r + b.
        let mut left = vec![0u64; m * r * r];
        let mut right = vec![0u64; m * r * r];
        for i in 0..m {
            for k in 0..r {
                let coef = rho.get(tensor_index(i, k, r), j);
                if coef == 0 {
                    continue;
                }
                for p in 0..m {
                    for a in 0..r {
                        let x = rho.get(tensor_index(p, a, r), i);
                        if x != 0 {
                            let idx = (p * r + a) * r + k;
                            left[idx] = ring.add(left[idx], ring.mul(coef, x));
                        }
                    }
                }
                for a in 0..r {
                    for b in 0..r {
                        let d = delta.get(tensor_index(a, b, r), k);
                        if d != 0 {
                            let idx = (i * r + a) * r + b;
                            right[idx] = ring.add(right[idx], ring.mul(coef, d));
                        }
                    }
                }
            }
        }
        (0..r * r).any(|ab| {
            let diff: Vec<u64> = (0..m)
                .map(|p| ring.sub(left[p * r * r + ab], right[p * r * r + ab]))
                .collect();
            !module.is_zero(&diff)
        })
    });
    report.push(Axiom::CoactionCoassociativity, coassoc);

    let actions = action_matrices(rho, m, r);
    let rel = module.relations().matrix();
    let closed = (0..rel.rows()).find(|&h| actions.iter().any(|a| !module.is_zero(&a.apply(rel.row(h)))));
    report.push(Axiom::RelationsClosed, closed);
    Ok(report)
}

/// A validated right comodule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comodule {
    coalgebra: Coalgebra,
    module: PresentedModule,
    /// Columns reduced slot by slot modulo the relations.
    rho: RMatrix,
    actions: Vec<RMatrix>,
}

impl Comodule {
    pub fn new(coalgebra: &Coalgebra, data: ComoduleData) -> Result<Self> {
        let report = validate_comodule(coalgebra, &data)?;
        if !report.passed() {
            return Err(Error::Axioms(report));
        }
        Ok(Self::assemble(coalgebra, data))
    }

    /// Builds without re-validating; callers guarantee the axioms.
    pub(crate) fn assemble(coalgebra: &Coalgebra, data: ComoduleData) -> Self {
        let (m, r) = (data.rank, coalgebra.rank());
        let module = PresentedModule::new(&data.relations);
        let mut rho = data.rho;
        for j in 0..m {
            for k in 0..r {
                let slot: Vec<u64> = (0..m).map(|i| rho.get(tensor_index(i, k, r), j)).collect();
                for (i, v) in module.reduce(&slot).into_iter().enumerate() {
                    rho.set(tensor_index(i, k, r), j, v);
                }
            }
        }
        let actions = action_matrices(&rho, m, r);
        Comodule {
            coalgebra: coalgebra.clone(),
            module,
            rho,
            actions,
        }
    }

    /// `C^k`: `k` copies of `C` coacting by `Δ`.
    pub fn free(c: &Coalgebra, k: usize) -> Self {
        let r = c.rank();
        let m = k * r;
        let mut rho = RMatrix::zeros(c.ring(), m * r, m);
        for copy in 0..k {
            for j in 0..r {
                for i in 0..r {
                    for l in 0..r {
                        let v = c.delta().get(tensor_index(i, l, r), j);
                        if v != 0 {
                            rho.set(tensor_index(copy * r + i, l, r), copy * r + j, v);
                        }
                    }
                }
            }
        }
        Self::new(c, ComoduleData::free(m, rho)).expect("free comodule satisfies the axioms")
    }

    /// The zero comodule of rank 0.
    pub fn zero(c: &Coalgebra) -> Self {
        Self::free(c, 0)
    }

    pub fn coalgebra(&self) -> &Coalgebra {
        &self.coalgebra
    }
    pub fn ring(&self) -> RingSpec {
        self.coalgebra.ring()
    }
    /// Number of generators `m` of the underlying module.
    pub fn rank(&self) -> usize {
        self.module.dim()
    }
    pub fn module(&self) -> &PresentedModule {
        &self.module
    }
    pub fn rho(&self) -> &RMatrix {
        &self.rho
    }
    pub fn actions(&self) -> &[RMatrix] {
        &self.actions
    }
    pub fn order(&self) -> u128 {
        self.module.order()
    }
    pub fn is_zero_module(&self) -> bool {
        self.order() == 1
    }

    pub fn data(&self) -> ComoduleData {
        ComoduleData {
            rank: self.rank(),
            rho: self.rho.clone(),
            relations: self.module.relations().matrix().clone(),
        }
    }

    pub fn elements(&self, caps: &Caps) -> Result<Vec<Vec<u64>>> {
        self.module.elements(caps)
    }

    pub fn reduce(&self, x: &[u64]) -> Vec<u64> {
        self.module.reduce(x)
    }

    /// `ϱ(x)` in the basis `b_i⊗c_k`.
    pub fn coaction(&self, x: &[u64]) -> Vec<u64> {
        self.rho.apply(x)
    }

    /// `g⇀x = (I⊗g)ϱ(x)` for `g` in dual-basis coordinates, reduced.
    pub fn cstar_action(&self, g: &[u64], x: &[u64]) -> Result<Vec<u64>> {
        let (m, r) = (self.rank(), self.coalgebra.rank());
        if g.len() != r || x.len() != m {
            return Err(Error::DimensionMismatch {
                op: "cstar_action",
                left: (r, m),
                right: (g.len(), x.len()),
            });
        }
        let ring = self.ring();
        let coact = self.coaction(x);
        let mut out = vec![0u64; m];
        for (i, slot) in out.iter_mut().enumerate() {
            for (k, &gk) in g.iter().enumerate() {
                *slot = ring.add(*slot, ring.mul(coact[tensor_index(i, k, r)], gk));
            }
        }
        Ok(self.reduce(&out))
    }

    /// Matrix of `x ↦ g⇀x`, assembled column by column from the action.
    pub fn cstar_matrix(&self, g: &[u64]) -> RMatrix {
        let m = self.rank();
        let cols: Vec<Vec<u64>> = (0..m)
            .map(|j| {
                let e: Vec<u64> = (0..m).map(|i| u64::from(i == j)).collect();
                self.cstar_action(g, &e).expect("dimensions agree")
            })
            .collect();
        RMatrix::from_fn(self.ring(), m, m, |i, j| cols[j][i])
    }

    /// Reduces every column modulo the relations.
    pub fn canonical(&self, x: &RMatrix) -> RMatrix {
        self.module.reduce_columns(x)
    }

    /// Canonical form of `(x⊗I)·v` for `v ∈ R^{m_s}⊗C`, given as `m_t·r` coordinates.
    fn tensor_reduce(&self, v: &[u64]) -> Vec<u64> {
        let (m, r) = (self.rank(), self.coalgebra.rank());
        let mut out = v.to_vec();
        for k in 0..r {
            let slot: Vec<u64> = (0..m).map(|i| v[tensor_index(i, k, r)]).collect();
            for (i, x) in self.reduce(&slot).into_iter().enumerate() {
                out[tensor_index(i, k, r)] = x;
            }
        }
        out
    }

    /// Whether `x: source → self` is a well-defined comodule morphism.
    pub fn is_morphism_from(&self, source: &Comodule, x: &RMatrix) -> bool {
        if x.shape() != (self.rank(), source.rank()) {
            return false;
        }
        let rel = source.module.relations().matrix();
        if (0..rel.rows()).any(|h| !self.module.is_zero(&x.apply(rel.row(h)))) {
            return false;
        }
        let r = self.coalgebra.rank();
        let lifted = x.kron(&RMatrix::identity(self.ring(), r)).expect("kron");
        let left = lifted.mul(&source.rho).expect("shapes");
        let right = self.rho.mul(x).expect("shapes");
        (0..source.rank()).all(|j| self.tensor_reduce(&left.col_vec(j)) == self.tensor_reduce(&right.col_vec(j)))
    }

    /// Some `y: self → source` with `x·y = I` on `self`, when `x: source → self`
    /// is surjective.
    pub fn right_inverse(&self, source: &Comodule, x: &RMatrix) -> Option<RMatrix> {
        let (mt, ms) = (self.rank(), source.rank());
        let rel_t = self.module.relations().matrix().transpose();
        let a = x.hstack(&rel_t).expect("row counts agree");
        let sol = solve(&a, &RMatrix::identity(self.ring(), mt)).expect("shapes")?;
        let y = RMatrix::from_fn(self.ring(), ms, mt, |i, j| sol.get(i, j));
        Some(source.canonical(&y))
    }
}

/// Solutions `X` (`rows × cols`) of a homogeneous linear system, given the
/// constraint map evaluated on matrices. Returns the Howell form of the
/// solution module in row-major flattening.
fn linear_solutions(
    ring: RingSpec,
    rows: usize,
    cols: usize,
    constraints: impl Fn(&RMatrix) -> Vec<u64>,
) -> HowellForm {
    let unknowns = rows * cols;
    let mut table: Vec<Vec<u64>> = Vec::with_capacity(unknowns);
    for i in 0..rows {
        for j in 0..cols {
            let mut e = RMatrix::zeros(ring, rows, cols);
            e.set(i, j, 1);
            table.push(constraints(&e));
        }
    }
    let width = table.first().map_or(0, Vec::len);
    kernel(&RMatrix::from_rows(ring, width, &table))
}

fn unflatten(ring: RingSpec, rows: usize, cols: usize, v: &[u64]) -> RMatrix {
    RMatrix::from_vec(ring, rows, cols, v.to_vec()).expect("length matches")
}

/// `Hom^C(source, target)` as the solution module of the intertwining law,
/// modulo maps that vanish on the target.
#[derive(Clone, Debug)]
pub struct MorphismSpace {
    source: Comodule,
    target: Comodule,
    solutions: HowellForm,
    basis: Vec<RMatrix>,
}

fn hom_constraints<'a>(source: &'a Comodule, target: &'a Comodule) -> impl Fn(&RMatrix) -> Vec<u64> + 'a {
    let ring = target.ring();
    let r = target.coalgebra.rank();
    let perp = target.module.perp();
    let perp_tensor = perp.kron(&RMatrix::identity(ring, r)).expect("kron");
    let rel_s = source.module.relations().matrix();
    let id_r = RMatrix::identity(ring, r);
    move |x: &RMatrix| {
        let mut out = Vec::new();
        // Well defined: relations of the source land in those of the target.
        for h in 0..rel_s.rows() {
            out.extend(perp.apply(&x.apply(rel_s.row(h))));
        }
        // (X⊗I)ϱ_s − ϱ_t X vanishes in target⊗C.
        let lifted = x.kron(&id_r).expect("kron");
        let diff = lifted
            .mul(&source.rho)
            .expect("shapes")
            .sub(&target.rho.mul(x).expect("shapes"))
            .expect("shapes");
        out.extend(perp_tensor.mul(&diff).expect("shapes").data().iter().copied());
        out
    }
}

/// Solves the intertwining law `(X⊗I_C)∘ϱ_source = ϱ_target∘X` as one linear
/// system.
pub fn hom_space(source: &Comodule, target: &Comodule) -> Result<MorphismSpace> {
    if source.coalgebra != target.coalgebra {
        return Err(Error::CoalgebraMismatch("hom_space"));
    }
    let solutions = linear_solutions(
        target.ring(),
        target.rank(),
        source.rank(),
        hom_constraints(source, target),
    );
    Ok(MorphismSpace::from_solutions(source, target, solutions))
}

/// `End_{C*}(M)`: matrices commuting with every `g⇀·` for `g` in the dual
/// basis, built from the `C*`-action rather than the coaction.
pub fn cstar_end(m: &Comodule) -> MorphismSpace {
    let ring = m.ring();
    let r = m.coalgebra.rank();
    let acts: Vec<RMatrix> = (0..r)
        .map(|k| {
            let g: Vec<u64> = (0..r).map(|l| u64::from(l == k)).collect();
            m.cstar_matrix(&g)
        })
        .collect();
    let perp = m.module.perp();
    let rel = m.module.relations().matrix();
    let solutions = linear_solutions(ring, m.rank(), m.rank(), |x| {
        let mut out = Vec::new();
        for h in 0..rel.rows() {
            out.extend(perp.apply(&x.apply(rel.row(h))));
        }
        for a in &acts {
            let d = x
                .mul(a)
                .expect("square")
                .sub(&a.mul(x).expect("square"))
                .expect("square");
            out.extend(perp.mul(&d).expect("shapes").data().iter().copied());
        }
        out
    });
    MorphismSpace::from_solutions(m, m, solutions)
}

impl MorphismSpace {
    fn from_solutions(source: &Comodule, target: &Comodule, solutions: HowellForm) -> Self {
        let ring = target.ring();
        let mut seen = BTreeSet::new();
        let basis: Vec<RMatrix> = solutions
            .matrix()
            .row_vecs()
            .into_iter()
            .map(|v| target.canonical(&unflatten(ring, target.rank(), source.rank(), &v)))
            .filter(|x| !x.is_zero() && seen.insert(x.data().to_vec()))
            .collect();
        MorphismSpace {
            source: source.clone(),
            target: target.clone(),
            solutions,
            basis,
        }
    }

    pub fn source(&self) -> &Comodule {
        &self.source
    }
    pub fn target(&self) -> &Comodule {
        &self.target
    }

    /// Canonical generators of the morphism module.
    pub fn basis(&self) -> &[RMatrix] {
        &self.basis
    }

    pub fn solutions(&self) -> &HowellForm {
        &self.solutions
    }

    /// Number of distinct morphisms: solutions modulo maps into the relations.
    pub fn order(&self) -> u128 {
        let rel = self.target.module.relations().span_size();
        let vanishing = rel.saturating_pow(self.source.rank() as u32);
        self.solutions.span_size() / vanishing
    }

    pub fn contains(&self, x: &RMatrix) -> bool {
        x.shape() == (self.target.rank(), self.source.rank()) && self.solutions.contains(x.data())
    }

    pub fn canonical(&self, x: &RMatrix) -> RMatrix {
        self.target.canonical(x)
    }

    /// Every morphism once, canonical, sorted by entries.
    pub fn elements(&self, caps: &Caps) -> Result<Vec<RMatrix>> {
        caps.check("morphism space", self.order())?;
        let ring = self.target.ring();
        let zero = RMatrix::zeros(ring, self.target.rank(), self.source.rank());
        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
        seen.insert(zero.data().to_vec());
        let mut frontier = vec![zero];
        while let Some(x) = frontier.pop() {
            for b in &self.basis {
                let y = self.canonical(&x.add(b).expect("shapes"));
                if seen.insert(y.data().to_vec()) {
                    caps.check("morphism space", seen.len() as u128)?;
                    frontier.push(y);
                }
            }
        }
        debug_assert_eq!(seen.len() as u128, self.order());
        let (rows, cols) = (self.target.rank(), self.source.rank());
        Ok(seen.into_iter().map(|v| unflatten(ring, rows, cols, &v)).collect())
    }
}

/// `End^C(M)` with every element listed.
#[derive(Clone, Debug)]
pub struct EndRing {
    space: MorphismSpace,
    elements: Vec<RMatrix>,
    index: HashMap<Vec<u64>, usize>,
    identity: usize,
}

pub fn end_ring(m: &Comodule, caps: &Caps) -> Result<EndRing> {
    let space = hom_space(m, m)?;
    EndRing::from_space(space, caps)
}

impl EndRing {
    pub fn from_space(space: MorphismSpace, caps: &Caps) -> Result<Self> {
        let elements = space.elements(caps)?;
        let index: HashMap<Vec<u64>, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, x)| (x.data().to_vec(), i))
            .collect();
        let m = space.source();
        let id = m.canonical(&RMatrix::identity(m.ring(), m.rank()));
        let identity = *index.get(id.data()).expect("identity is a comodule morphism");
        Ok(EndRing {
            space,
            elements,
            index,
            identity,
        })
    }

    pub fn comodule(&self) -> &Comodule {
        self.space.source()
    }
    pub fn space(&self) -> &MorphismSpace {
        &self.space
    }
    pub fn elements(&self) -> &[RMatrix] {
        &self.elements
    }
    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
    pub fn identity_index(&self) -> usize {
        self.identity
    }
    pub fn identity(&self) -> &RMatrix {
        &self.elements[self.identity]
    }
    pub fn zero(&self) -> RMatrix {
        let m = self.comodule().rank();
        RMatrix::zeros(self.comodule().ring(), m, m)
    }

    pub fn index_of(&self, x: &RMatrix) -> Option<usize> {
        self.index.get(self.canonical(x).data()).copied()
    }

    pub fn contains(&self, x: &RMatrix) -> bool {
        self.index_of(x).is_some()
    }

    pub fn canonical(&self, x: &RMatrix) -> RMatrix {
        self.comodule().canonical(x)
    }

    pub fn compose(&self, a: &RMatrix, b: &RMatrix) -> RMatrix {
        self.canonical(&a.mul(b).expect("square"))
    }
    pub fn add(&self, a: &RMatrix, b: &RMatrix) -> RMatrix {
        self.canonical(&a.add(b).expect("square"))
    }
    pub fn sub(&self, a: &RMatrix, b: &RMatrix) -> RMatrix {
        self.canonical(&a.sub(b).expect("square"))
    }

    /// The two-sided inverse in the ring, when `x` is a unit. The inverse is
    /// checked to be a comodule morphism.
    pub fn inverse(&self, x: &RMatrix) -> Option<RMatrix> {
        let m = self.comodule();
        let y = m.right_inverse(m, x)?;
        let id = self.identity();
        assert!(
            self.space.contains(&y) && m.is_morphism_from(m, &y),
            "inverse of a comodule automorphism is a comodule morphism"
        );
        assert_eq!(
            &self.compose(&y, x),
            id,
            "one-sided inverse of a finite endomorphism is two-sided"
        );
        Some(y)
    }

    pub fn is_idempotent(&self, x: &RMatrix) -> bool {
        self.compose(x, x) == self.canonical(x)
    }
}

/// `Σ_k g_k A_k x`, unreduced; used where the action is applied many times.
pub fn act_raw(m: &Comodule, g: &[u64], x: &[u64]) -> Vec<u64> {
    let ring = m.ring();
    let mut out = vec![0u64; m.rank()];
    for (k, &gk) in g.iter().enumerate() {
        if gk != 0 {
            out = vec_add(ring, &out, &vec_scale(ring, &m.actions[k].apply(x), gk));
        }
    }
    out
}

/// Howell form of `span{A_k x} + Rel`, the `C*`-submodule generated by `x`.
pub(crate) fn cyclic_span(m: &Comodule, x: &[u64]) -> HowellForm {
    let mut rows: Vec<Vec<u64>> = m.actions.iter().map(|a| a.apply(x)).collect();
    rows.extend(m.module.relations().matrix().row_vecs());
    howell(&RMatrix::from_rows(m.ring(), m.rank(), &rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::dual_algebra;

    fn z(n: u64) -> RingSpec {
        RingSpec::new(n).unwrap()
    }

    fn graded() -> Comodule {
        Comodule::free(&Coalgebra::grouplike(z(2), 2), 1)
    }

    #[test]
    fn catalog_comodules_validate() {
        let ring = z(2);
        for c in [
            Coalgebra::trivial(ring),
            Coalgebra::grouplike(ring, 2),
            Coalgebra::matrix(ring, 2),
        ] {
            for k in 0..3 {
                let m = Comodule::free(&c, k);
                assert!(validate_comodule(&c, &m.data()).unwrap().passed());
            }
        }
    }

    #[test]
    fn trivial_coaction_on_r2() {
        let c = Coalgebra::trivial(z(5));
        let data = ComoduleData::free(2, RMatrix::identity(z(5), 2));
        assert!(validate_comodule(&c, &data).unwrap().passed());
    }

    #[test]
    fn tampered_graded_fails_counit_at_first_basis() {
        let c = Coalgebra::grouplike(z(2), 2);
        let mut data = graded().data();
        // ϱ(b_1) = b_2⊗g_1
        data.rho.set(tensor_index(0, 0, 2), 0, 0);
        data.rho.set(tensor_index(1, 0, 2), 0, 1);
        let report = validate_comodule(&c, &data).unwrap();
        assert_eq!(report.failure(Axiom::CoactionCounit), Some(1));
    }

    #[test]
    fn projection_onto_grade_one() {
        let m = graded();
        assert_eq!(m.cstar_action(&[1, 0], &[1, 1]).unwrap(), vec![1, 0]);
        assert_eq!(m.cstar_action(&[1, 1], &[1, 1]).unwrap(), vec![1, 1]);
    }

    #[test]
    fn action_is_a_module_action() {
        let ring = z(3);
        for c in [Coalgebra::matrix(ring, 2), Coalgebra::divided_power(ring, 3)] {
            let m = Comodule::free(&c, 1);
            let d = dual_algebra(&c);
            let caps = Caps::default();
            let elems = m.elements(&caps).unwrap();
            for i in 0..c.rank() {
                for j in 0..c.rank() {
                    let (g, h) = (d.basis(i), d.basis(j));
                    let gh = d.product(&g, &h);
                    for x in elems.iter().step_by(7) {
                        let inner = m.cstar_action(&h, x).unwrap();
                        assert_eq!(m.cstar_action(&gh, x).unwrap(), m.cstar_action(&g, &inner).unwrap());
                    }
                }
            }
            for x in &elems {
                assert_eq!(&m.cstar_action(d.unit(), x).unwrap(), x);
            }
        }
    }

    #[test]
    fn graded_end_is_diagonal() {
        let e = end_ring(&graded(), &Caps::default()).unwrap();
        assert_eq!(e.len(), 4);
        for x in e.elements() {
            assert_eq!(x.get(0, 1), 0);
            assert_eq!(x.get(1, 0), 0);
        }
    }

    #[test]
    fn trivial_end_is_full_matrix_ring() {
        let c = Coalgebra::trivial(z(2));
        let e = end_ring(&Comodule::free(&c, 2), &Caps::default()).unwrap();
        assert_eq!(e.len(), 16);
    }

    #[test]
    fn zero_comodule_has_one_endomorphism() {
        let c = Coalgebra::grouplike(z(3), 2);
        let e = end_ring(&Comodule::zero(&c), &Caps::default()).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.identity_index(), 0);
    }

    #[test]
    fn presented_quotient_end() {
        // Z/4 / 2Z/4 over the trivial coalgebra is Z/2: End has 2 elements.
        let ring = z(4);
        let c = Coalgebra::trivial(ring);
        let data = ComoduleData {
            rank: 1,
            rho: RMatrix::identity(ring, 1),
            relations: RMatrix::from_rows(ring, 1, &[vec![2]]),
        };
        let m = Comodule::new(&c, data).unwrap();
        assert_eq!(m.order(), 2);
        let e = end_ring(&m, &Caps::default()).unwrap();
        assert_eq!(e.len(), 2);
        assert!(e.inverse(&RMatrix::from_rows(ring, 1, &[vec![3]])).is_some());
        assert!(e.inverse(&RMatrix::from_rows(ring, 1, &[vec![2]])).is_none());
    }

    #[test]
    fn relations_must_be_closed() {
        let ring = z(2);
        let c = Coalgebra::grouplike(ring, 2);
        let mut data = graded().data();
        data.relations = RMatrix::from_rows(ring, 2, &[vec![1, 1]]);
        let report = validate_comodule(&c, &data).unwrap();
        assert_eq!(report.failure(Axiom::RelationsClosed), Some(1));
    }

    #[test]
    fn end_agrees_with_cstar_end() {
        let ring = z(4);
        for c in [Coalgebra::grouplike(ring, 2), Coalgebra::divided_power(ring, 2)] {
            let m = Comodule::free(&c, 1);
            let a = hom_space(&m, &m).unwrap();
            let b = cstar_end(&m);
            assert_eq!(a.solutions().matrix(), b.solutions().matrix());
        }
    }
}
