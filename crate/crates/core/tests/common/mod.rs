//! Test corpus and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use comod_core::coalgebra::tensor_index;
use comod_core::fuzz::{generate, CoalgebraKind, FuzzConfig, Strategy};
use comod_core::{Caps, Coalgebra, Comodule, RingSpec, Subcomodule};

pub fn z(n: u64) -> RingSpec {
    RingSpec::new(n).unwrap()
}

pub struct Case {
    pub name: String,
    pub m: Comodule,
}

impl Case {
    fn new(name: impl Into<String>, m: Comodule) -> Self {
        Case { name: name.into(), m }
    }
}

pub fn coalgebras(n: u64) -> Vec<(String, Coalgebra)> {
    let ring = z(n);
    vec![
        (format!("trivial/Z{n}"), Coalgebra::trivial(ring)),
        (format!("grouplike2/Z{n}"), Coalgebra::grouplike(ring, 2)),
        (format!("grouplike3/Z{n}"), Coalgebra::grouplike(ring, 3)),
        (format!("matrix2/Z{n}"), Coalgebra::matrix(ring, 2)),
        (format!("divided2/Z{n}"), Coalgebra::divided_power(ring, 2)),
        (format!("divided3/Z{n}"), Coalgebra::divided_power(ring, 3)),
        (format!("chain2/Z{n}"), Coalgebra::chain_incidence(ring, 2)),
    ]
}

/// Free comodules `C^k` of rank at most 4 over Z/2, Z/3 and Z/4.
pub fn free_catalog() -> Vec<Case> {
    let mut out = Vec::new();
    for n in [2, 3, 4] {
        for (name, c) in coalgebras(n) {
            for k in 1..=3 {
                if k * c.rank() <= 4 {
                    out.push(Case::new(format!("{name}^{k}"), Comodule::free(&c, k)));
                }
            }
        }
    }
    out
}

/// Seeded subcomodules and quotients of small free comodules.
pub fn fuzz_corpus(count: usize, seed: u64) -> Vec<Case> {
    let kinds = [
        (2, CoalgebraKind::Grouplike(2), Strategy::Subcomodule(2)),
        (2, CoalgebraKind::Grouplike(3), Strategy::Quotient(1)),
        (2, CoalgebraKind::Matrix(2), Strategy::Subcomodule(1)),
        (3, CoalgebraKind::Trivial, Strategy::Quotient(2)),
        (3, CoalgebraKind::DividedPower(2), Strategy::Quotient(1)),
        (4, CoalgebraKind::Trivial, Strategy::Quotient(2)),
        (4, CoalgebraKind::Grouplike(2), Strategy::Quotient(1)),
        (2, CoalgebraKind::ChainIncidence(2), Strategy::Quotient(1)),
    ];
    let mut out = Vec::new();
    for (j, &(modulus, kind, strategy)) in kinds.iter().enumerate() {
        let config = FuzzConfig {
            modulus,
            kind,
            strategy,
            count,
            seed: seed + j as u64,
        };
        for i in 0..count {
            let g = generate(&config, i).unwrap();
            out.push(Case::new(format!("{kind:?}/{strategy:?}/Z{modulus}#{i}"), g.comodule));
        }
    }
    out
}

/// Slot `k` of `ϱ(v)`, computed from the raw coaction matrix.
pub fn coaction_slot(m: &Comodule, v: &[u64], k: usize) -> Vec<u64> {
    let ring = m.ring();
    let (rank, r) = (m.rank(), m.coalgebra().rank());
    (0..rank)
        .map(|i| {
            (0..rank).fold(0, |acc, j| {
                ring.add(acc, ring.mul(m.rho().get(tensor_index(i, k, r), j), v[j]))
            })
        })
        .collect()
}

fn combine(m: &Comodule, coeffs: &[u64], columns: &[Vec<u64>]) -> Vec<u64> {
    let ring = m.ring();
    let mut out = vec![0; m.rank()];
    for (c, col) in coeffs.iter().zip(columns) {
        for (o, x) in out.iter_mut().zip(col) {
            *o = ring.add(*o, ring.mul(*c, *x));
        }
    }
    out
}

/// A generator and the slots of its coaction.
type Law = (usize, Vec<Vec<u64>>);

/// Every endomorphism of `M`, found by assigning each generator every
/// element of `M` and keeping the assignments that respect the relations and
/// the intertwining law. A constraint is tested as soon as every generator
/// it mentions has an image. Entries are column-major images of the
/// generators. `None` when the search visits more than `budget` partial
/// assignments.
pub fn brute_end(m: &Comodule, budget: u64) -> Option<BTreeSet<Vec<Vec<u64>>>> {
    let elements = m.elements(&Caps::new(1 << 16)).ok()?;
    let rank = m.rank();
    let r = m.coalgebra().rank();
    let relations = m.module().relations().matrix().row_vecs();
    let basis: Vec<Vec<u64>> = (0..rank)
        .map(|j| (0..rank).map(|i| u64::from(i == j)).collect())
        .collect();
    // Each constraint is checkable once the generators up to its last
    // mentioned index are assigned.
    let last = |support: &mut dyn Iterator<Item = usize>| support.max().unwrap_or(0);
    let mut relation_at = vec![Vec::new(); rank.max(1)];
    for h in &relations {
        relation_at[last(&mut (0..rank).filter(|&i| h[i] != 0))].push(h.clone());
    }
    let mut law_at = vec![Vec::new(); rank.max(1)];
    for (j, b) in basis.iter().enumerate() {
        let slots: Vec<Vec<u64>> = (0..r).map(|k| coaction_slot(m, b, k)).collect();
        let mut support = (0..rank).filter(|&i| slots.iter().any(|s| s[i] != 0)).chain([j]);
        law_at[last(&mut support)].push((j, slots));
    }
    struct Search<'a> {
        m: &'a Comodule,
        elements: &'a [Vec<u64>],
        relation_at: &'a [Vec<Vec<u64>>],
        law_at: &'a [Vec<Law>],
        cols: Vec<Vec<u64>>,
        out: BTreeSet<Vec<Vec<u64>>>,
        budget: u64,
    }
    impl Search<'_> {
        fn ok_at(&self, d: usize) -> bool {
            let m = self.m;
            self.relation_at[d]
                .iter()
                .all(|h| m.module().is_zero(&combine(m, h, &self.cols)))
                && self.law_at[d].iter().all(|(j, slots)| {
                    // (X⊗I)ϱ(b_j) against ϱ(X b_j), slot by slot.
                    slots.iter().enumerate().all(|(k, s)| {
                        m.module()
                            .equal(&combine(m, s, &self.cols), &coaction_slot(m, &self.cols[*j], k))
                    })
                })
        }
        fn run(&mut self, d: usize) -> bool {
            if d == self.cols.len() {
                self.out.insert(self.cols.clone());
                return true;
            }
            for e in self.elements {
                if self.budget == 0 {
                    return false;
                }
                self.budget -= 1;
                self.cols[d] = e.clone();
                if self.ok_at(d) && !self.run(d + 1) {
                    return false;
                }
            }
            true
        }
    }
    let mut s = Search {
        m,
        elements: &elements,
        relation_at: &relation_at,
        law_at: &law_at,
        cols: vec![vec![0; rank]; rank],
        out: BTreeSet::new(),
        budget,
    };
    if rank == 0 {
        s.out.insert(Vec::new());
        return Some(s.out);
    }
    s.run(0).then_some(s.out)
}

/// Whether a submodule is closed under every slot of the coaction, checked
/// on each of its elements.
pub fn closed_by_elements(m: &Comodule, s: &Subcomodule) -> bool {
    let r = m.coalgebra().rank();
    s.span()
        .span_elements()
        .iter()
        .all(|x| (0..r).all(|k| s.contains(&coaction_slot(m, x, k))))
}
