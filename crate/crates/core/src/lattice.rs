//! Subcomodules and the subcomodule lattice.
//!
//! A subcomodule of `M = R^m / Rel` is stored as its preimage `P ⊆ R^m`,
//! a submodule containing `Rel` and stable under every action matrix. The
//! Howell form of `P` is canonical, so equal subcomodules have equal forms.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use crate::coalgebra::tensor_index;
use crate::comodule::{cyclic_span, hom_space, Comodule, ComoduleData};
use crate::error::{Caps, Error, Result};
use crate::howell::{howell, intersect_rowspans, kernel, sum_rowspans, HowellForm};
use crate::matrix::RMatrix;

#[derive(Clone, Debug)]
pub struct Subcomodule {
    span: HowellForm,
    order: u128,
}

// Identity is the canonical matrix; the recorded row operations are not.
impl PartialEq for Subcomodule {
    fn eq(&self, other: &Self) -> bool {
        self.span.matrix() == other.span.matrix()
    }
}

impl Eq for Subcomodule {}

impl std::hash::Hash for Subcomodule {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.span.matrix().hash(state);
    }
}

impl PartialOrd for Subcomodule {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subcomodule {
    /// By size, then by canonical entries.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.order, self.span.matrix().rows(), self.span.matrix().data()).cmp(&(
            other.order,
            other.span.matrix().rows(),
            other.span.matrix().data(),
        ))
    }
}

impl Subcomodule {
    fn from_span(m: &Comodule, span: HowellForm) -> Self {
        let order = span.span_size() / m.module().relations().span_size();
        Subcomodule { span, order }
    }

    /// The submodule generated by `rows` together with the relations; not
    /// checked for coaction closure.
    pub(crate) fn from_rows_unchecked(m: &Comodule, rows: &[Vec<u64>]) -> Self {
        let mut all = rows.to_vec();
        all.extend(m.module().relations().matrix().row_vecs());
        Self::from_span(m, howell(&RMatrix::from_rows(m.ring(), m.rank(), &all)))
    }

    /// The submodule generated by `rows`, if it is closed under the coaction.
    pub fn from_rows(m: &Comodule, rows: &[Vec<u64>]) -> Option<Self> {
        let s = Self::from_rows_unchecked(m, rows);
        s.is_coaction_closed(m).then_some(s)
    }

    pub fn zero(m: &Comodule) -> Self {
        Self::from_span(m, m.module().relations().clone())
    }

    pub fn whole(m: &Comodule) -> Self {
        Self::from_span(m, howell(&RMatrix::identity(m.ring(), m.rank())))
    }

    /// Preimage in `R^m`, in Howell form.
    pub fn span(&self) -> &HowellForm {
        &self.span
    }

    /// Number of elements.
    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.order == 1
    }

    /// Canonical generators: the Howell rows of the preimage.
    pub fn generators(&self) -> Vec<Vec<u64>> {
        self.span.matrix().row_vecs()
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.span.contains(x)
    }

    pub fn contains_sub(&self, other: &Subcomodule) -> bool {
        self.span.contains_span(&other.span)
    }

    /// Whether `ϱ(x) ∈ N⊗C` for every generator, tested slot by slot.
    pub fn is_coaction_closed(&self, m: &Comodule) -> bool {
        let r = m.coalgebra().rank();
        self.generators().iter().all(|g| {
            let coact = m.coaction(g);
            (0..r).all(|k| {
                let slot: Vec<u64> = (0..m.rank()).map(|i| coact[tensor_index(i, k, r)]).collect();
                self.span.contains(&slot)
            })
        })
    }

    pub fn sum(&self, m: &Comodule, other: &Subcomodule) -> Subcomodule {
        Self::from_span(
            m,
            sum_rowspans(self.span.matrix(), other.span.matrix()).expect("same width"),
        )
    }

    pub fn intersect(&self, m: &Comodule, other: &Subcomodule) -> Subcomodule {
        Self::from_span(
            m,
            intersect_rowspans(self.span.matrix(), other.span.matrix()).expect("same width"),
        )
    }

    /// Rows `φ` with `φ·v = 0` exactly for `v` in the preimage.
    pub fn perp(&self) -> RMatrix {
        kernel(&self.span.matrix().transpose()).matrix().clone()
    }

    /// `x(N)` for a morphism `x: M → target`.
    pub fn image(&self, target: &Comodule, x: &RMatrix) -> Subcomodule {
        let rows: Vec<Vec<u64>> = self.generators().iter().map(|g| x.apply(g)).collect();
        Self::from_rows_unchecked(target, &rows)
    }

    /// `{v ∈ source : x(v) ∈ self}` for a morphism `x: source → M`.
    pub fn preimage(&self, source: &Comodule, x: &RMatrix) -> Subcomodule {
        let constraint = self.perp().mul(x).expect("shapes").transpose();
        Self::from_span(source, kernel(&constraint))
    }

    /// The subcomodule as a comodule in its own right, generated by its
    /// Howell rows `g_i`, together with the inclusion matrix (columns `g_i`).
    pub fn to_comodule(&self, m: &Comodule) -> (Comodule, RMatrix) {
        let ring = m.ring();
        let r = m.coalgebra().rank();
        let gens = self.span.matrix();
        let s = gens.rows();
        // c ∈ Rel' iff Σ c_i g_i ∈ Rel.
        let relations = kernel(&gens.mul(&m.module().perp().transpose()).expect("shapes"))
            .matrix()
            .clone();
        let mut rho = RMatrix::zeros(ring, s * r, s);
        for i in 0..s {
            for (k, a) in m.actions().iter().enumerate() {
                let coeffs = self
                    .span
                    .express(&a.apply(gens.row(i)))
                    .expect("subcomodule is stable under the action");
                for (j, c) in coeffs.into_iter().enumerate() {
                    rho.set(tensor_index(j, k, r), i, c);
                }
            }
        }
        let data = ComoduleData {
            rank: s,
            rho,
            relations,
        };
        debug_assert!(crate::comodule::validate_comodule(m.coalgebra(), &data)
            .unwrap()
            .passed());
        (Comodule::assemble(m.coalgebra(), data), gens.transpose())
    }

    /// `x|_N` in the coordinates of [`Subcomodule::to_comodule`], when
    /// `x(N) ⊆ N`.
    pub fn restrict(&self, x: &RMatrix) -> Option<RMatrix> {
        let gens = self.span.matrix();
        let s = gens.rows();
        let mut cols = Vec::with_capacity(s);
        for i in 0..s {
            cols.push(self.span.express(&x.apply(gens.row(i)))?);
        }
        Some(RMatrix::from_fn(x.ring(), s, s, |i, j| cols[j][i]))
    }
}

/// `span{g⇀x : g ∈ C*}`; asserted to be a subcomodule since `C` is free.
pub fn generated_subcomodule(m: &Comodule, x: &[u64]) -> Subcomodule {
    let s = Subcomodule::from_span(m, cyclic_span(m, x));
    assert!(s.is_coaction_closed(m), "C*⇀x is a subcomodule for free C");
    assert!(s.contains(x), "ε⇀x = x");
    s
}

/// `M/S` with the induced coaction: same generators, relations `S`.
pub fn quotient(m: &Comodule, s: &Subcomodule) -> Comodule {
    let mut data = m.data();
    data.relations = s.span().matrix().clone();
    Comodule::assemble(m.coalgebra(), data)
}

/// An isomorphism `A → B` between subcomodules (in the coordinates of their
/// own presentations), with its inverse.
#[derive(Clone, Debug)]
pub struct Isomorphism {
    pub forward: RMatrix,
    pub inverse: RMatrix,
}

/// Searches `Hom^C(A, B)` for a bijection.
pub fn comodule_iso(m: &Comodule, a: &Subcomodule, b: &Subcomodule, caps: &Caps) -> Result<Option<Isomorphism>> {
    if a.order() != b.order() {
        return Ok(None);
    }
    let (ca, _) = a.to_comodule(m);
    let (cb, _) = b.to_comodule(m);
    comodule_iso_between(&ca, &cb, caps)
}

pub fn comodule_iso_between(a: &Comodule, b: &Comodule, caps: &Caps) -> Result<Option<Isomorphism>> {
    if a.order() != b.order() {
        return Ok(None);
    }
    let space = hom_space(a, b)?;
    for x in space.elements(caps)? {
        if let Some(y) = b.right_inverse(a, &x) {
            assert!(
                a.is_morphism_from(b, &y),
                "inverse of a comodule isomorphism is a morphism"
            );
            return Ok(Some(Isomorphism { forward: x, inverse: y }));
        }
    }
    Ok(None)
}

/// Every submodule of `M` as a sum of cyclic submodules `Rx`, regardless of
/// the coaction. Exponential; intended as a test oracle.
pub fn all_submodules(m: &Comodule, caps: &Caps) -> Result<Vec<Subcomodule>> {
    let cyclics: BTreeSet<Subcomodule> = m
        .elements(caps)?
        .iter()
        .map(|x| Subcomodule::from_rows_unchecked(m, std::slice::from_ref(x)))
        .collect();
    close_under_sums(m, cyclics.into_iter().collect(), caps)
}

fn close_under_sums(m: &Comodule, cyclics: Vec<Subcomodule>, caps: &Caps) -> Result<Vec<Subcomodule>> {
    let mut seen: BTreeSet<Subcomodule> = BTreeSet::new();
    let zero = Subcomodule::zero(m);
    seen.insert(zero.clone());
    let mut frontier = vec![zero];
    while let Some(node) = frontier.pop() {
        for c in &cyclics {
            if node.contains_sub(c) {
                continue;
            }
            let s = node.sum(m, c);
            if !seen.contains(&s) {
                seen.insert(s.clone());
                caps.check("lattice nodes", seen.len() as u128)?;
                frontier.push(s);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// The finite lattice of subcomodules with inclusion and atom data.
#[derive(Clone, Debug)]
pub struct Lattice {
    comodule: Comodule,
    nodes: Vec<Subcomodule>,
    index: HashMap<Subcomodule, usize>,
    /// `below[j]` holds every `i` with `node_i ⊆ node_j`.
    below: Vec<FixedBitSet>,
    /// Atoms (minimal nonzero nodes) under each node.
    atoms_below: Vec<FixedBitSet>,
    atoms: Vec<usize>,
}

/// Every subcomodule, as sums of the cyclic subcomodules `C*⇀x`.
pub fn subcomodule_lattice(m: &Comodule, caps: &Caps) -> Result<Lattice> {
    let cyclics: BTreeSet<Subcomodule> = m.elements(caps)?.iter().map(|x| generated_subcomodule(m, x)).collect();
    let nodes = close_under_sums(m, cyclics.into_iter().collect(), caps)?;
    Ok(Lattice::from_nodes(m, nodes))
}

impl Lattice {
    fn from_nodes(m: &Comodule, nodes: Vec<Subcomodule>) -> Self {
        let n = nodes.len();
        let index: HashMap<Subcomodule, usize> = nodes.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for j in 0..n {
            for i in 0..=j {
                // Sorted by size, so a subset never comes later.
                if nodes[i].order() <= nodes[j].order() && nodes[j].contains_sub(&nodes[i]) {
                    below[j].insert(i);
                }
            }
        }
        let atoms: Vec<usize> = (1..n)
            .filter(|&i| below[i].ones().all(|k| k == i || nodes[k].is_zero()))
            .collect();
        let atoms_below = (0..n)
            .map(|j| {
                let mut set = FixedBitSet::with_capacity(n);
                for &a in &atoms {
                    if below[j].contains(a) {
                        set.insert(a);
                    }
                }
                set
            })
            .collect();
        Lattice {
            comodule: m.clone(),
            nodes,
            index,
            below,
            atoms_below,
            atoms,
        }
    }

    pub fn comodule(&self) -> &Comodule {
        &self.comodule
    }
    pub fn nodes(&self) -> &[Subcomodule] {
        &self.nodes
    }
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
    pub fn node(&self, i: usize) -> &Subcomodule {
        &self.nodes[i]
    }
    pub fn bottom(&self) -> usize {
        0
    }
    pub fn top(&self) -> usize {
        self.nodes.len() - 1
    }
    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn index_of(&self, s: &Subcomodule) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// `node_i ⊆ node_j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.below[j].contains(i)
    }

    pub fn below(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.below[j].ones()
    }

    pub fn atoms_below(&self, j: usize) -> &FixedBitSet {
        &self.atoms_below[j]
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        let s = self.nodes[i].intersect(&self.comodule, &self.nodes[j]);
        self.index_of(&s)
            .expect("intersection of subcomodules is a subcomodule")
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        let s = self.nodes[i].sum(&self.comodule, &self.nodes[j]);
        self.index_of(&s).expect("sum of subcomodules is a subcomodule")
    }

    /// `node_i ∩ node_j = 0`.
    pub fn disjoint(&self, i: usize, j: usize) -> bool {
        self.atoms_below[i].is_disjoint(&self.atoms_below[j])
    }

    /// `node_i ⊕ node_j = M`.
    pub fn complementary(&self, i: usize, j: usize) -> bool {
        self.disjoint(i, j) && self.nodes[i].order().saturating_mul(self.nodes[j].order()) == self.comodule.order()
    }

    pub fn complements(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.complementary(i, j)).collect()
    }

    pub fn is_summand(&self, i: usize) -> bool {
        (0..self.len()).any(|j| self.complementary(i, j))
    }

    /// Node index of `x(node_i)` for an endomorphism `x`.
    pub fn image_of(&self, i: usize, x: &RMatrix) -> usize {
        let s = self.nodes[i].image(&self.comodule, x);
        self.index_of(&s).expect("image of a subcomodule is a subcomodule")
    }

    pub fn preimage_of(&self, i: usize, x: &RMatrix) -> usize {
        let s = self.nodes[i].preimage(&self.comodule, x);
        self.index_of(&s).expect("preimage of a subcomodule is a subcomodule")
    }

    /// Distinct node counts grouped by size, for summaries.
    pub fn size_profile(&self) -> BTreeMap<u128, usize> {
        let mut out = BTreeMap::new();
        for n in &self.nodes {
            *out.entry(n.order()).or_insert(0) += 1;
        }
        out
    }
}

/// Errors when `x` does not act on `M`.
pub fn check_endomorphism(m: &Comodule, x: &RMatrix) -> Result<()> {
    if x.shape() != (m.rank(), m.rank()) || !m.is_morphism_from(m, x) {
        return Err(Error::Precondition("not a comodule endomorphism".into()));
    }
    Ok(())
}

impl serde::Serialize for Subcomodule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Subcomodule", 2)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("generators", &self.span.matrix().row_vecs())?;
        st.end()
    }
}
