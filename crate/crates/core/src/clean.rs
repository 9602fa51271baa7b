//! Clean elements of `End^C(M)`: unit plus idempotent decompositions, their
//! subcomodule witnesses, and the equivalent description by pairs of direct
//! sum decompositions `M = A⊕B = X⊕Y`.

use rayon::prelude::*;
use serde::Serialize;

use crate::comodule::EndRing;
use crate::howell::howell;
use crate::lattice::{Lattice, Subcomodule};
use crate::matrix::RMatrix;

pub fn idempotents(end: &EndRing) -> Vec<RMatrix> {
    end.elements()
        .par_iter()
        .filter(|x| end.is_idempotent(x))
        .cloned()
        .collect()
}

/// Units with their inverses.
pub fn units(end: &EndRing) -> Vec<(RMatrix, RMatrix)> {
    end.elements()
        .par_iter()
        .filter_map(|x| end.inverse(x).map(|y| (x.clone(), y)))
        .collect()
}

fn kernel_of(end: &EndRing, x: &RMatrix) -> Subcomodule {
    let m = end.comodule();
    Subcomodule::zero(m).preimage(m, x)
}

fn image_of(end: &EndRing, x: &RMatrix, n: &Subcomodule) -> Subcomodule {
    n.image(end.comodule(), x)
}

fn is_direct_sum(end: &EndRing, a: &Subcomodule, b: &Subcomodule) -> bool {
    let m = end.comodule();
    a.intersect(m, b).is_zero() && a.order().saturating_mul(b.order()) == m.order()
}

/// The data attached to a clean decomposition `f = u + e`.
#[derive(Clone, Debug, Serialize)]
pub struct CleanWitness {
    pub f: RMatrix,
    pub u: RMatrix,
    pub e: RMatrix,
    pub u_inverse: RMatrix,
    /// `Ker e`
    pub a: Subcomodule,
    /// `Im e`
    pub b: Subcomodule,
    /// `u(A)`
    pub x: Subcomodule,
    /// `u(B)`
    pub y: Subcomodule,
}

impl CleanWitness {
    fn build(end: &EndRing, f: &RMatrix, e: &RMatrix, u: RMatrix, u_inverse: RMatrix) -> Self {
        let m = end.comodule();
        let a = kernel_of(end, e);
        let b = image_of(end, e, &Subcomodule::whole(m));
        let x = image_of(end, &u, &a);
        let y = image_of(end, &u, &b);
        CleanWitness {
            f: end.canonical(f),
            u,
            e: end.canonical(e),
            u_inverse,
            a,
            b,
            x,
            y,
        }
    }

    /// Re-checks every invariant from scratch.
    pub fn verify(&self, end: &EndRing) -> Result<(), String> {
        let m = end.comodule();
        let whole = Subcomodule::whole(m);
        let id = end.identity().clone();
        let check = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_string()) };
        check(
            end.contains(&self.f) && end.contains(&self.u) && end.contains(&self.e),
            "maps lie in End^C(M)",
        )?;
        check(end.add(&self.u, &self.e) == end.canonical(&self.f), "f = u + e")?;
        check(end.is_idempotent(&self.e), "e² = e")?;
        check(
            end.compose(&self.u, &self.u_inverse) == id && end.compose(&self.u_inverse, &self.u) == id,
            "u·u⁻¹ = u⁻¹·u = I",
        )?;
        check(end.contains(&self.u_inverse), "u⁻¹ is a comodule morphism")?;
        check(self.a == kernel_of(end, &self.e), "A = Ker e")?;
        check(self.b == image_of(end, &self.e, &whole), "B = Im e")?;
        check(self.x == image_of(end, &self.u, &self.a), "X = u(A)")?;
        check(self.y == image_of(end, &self.u, &self.b), "Y = u(B)")?;
        for s in [&self.a, &self.b, &self.x, &self.y] {
            check(s.is_coaction_closed(m), "A, B, X, Y are subcomodules")?;
        }
        check(is_direct_sum(end, &self.a, &self.b), "M = A⊕B")?;
        check(is_direct_sum(end, &self.x, &self.y), "M = X⊕Y")?;
        let one_minus_f = end.sub(&id, &self.f);
        let fa = image_of(end, &self.f, &self.a);
        let gb = image_of(end, &one_minus_f, &self.b);
        check(self.x.contains_sub(&fa), "f(A) ⊆ X")?;
        check(self.y.contains_sub(&gb), "(1−f)(B) ⊆ Y")?;
        check(fa == self.x && fa.order() == self.a.order(), "f: A → X is bijective")?;
        check(
            gb == self.y && gb.order() == self.b.order(),
            "(1−f): B → Y is bijective",
        )?;
        Ok(())
    }
}

/// Outcome of a search over idempotents for one element.
#[derive(Clone, Debug)]
pub struct CleanSearch {
    pub witness: Option<CleanWitness>,
    /// Idempotents examined before stopping.
    pub tried: usize,
}

/// Tries every idempotent `e` in canonical order until `f − e` is a unit.
pub fn clean_element(end: &EndRing, idempotents: &[RMatrix], f: &RMatrix) -> CleanSearch {
    for (tried, e) in idempotents.iter().enumerate() {
        let u = end.sub(f, e);
        if let Some(inv) = end.inverse(&u) {
            return CleanSearch {
                witness: Some(CleanWitness::build(end, f, e, u, inv)),
                tried: tried + 1,
            };
        }
    }
    CleanSearch {
        witness: None,
        tried: idempotents.len(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CleanEntry {
    pub f: RMatrix,
    pub witness: Option<CleanWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CleanReport {
    pub order: usize,
    pub idempotents: usize,
    pub units: usize,
    pub clean: bool,
    pub entries: Vec<CleanEntry>,
    /// Elements whose witness failed re-verification, with the reason.
    pub invalid_witnesses: Vec<(RMatrix, String)>,
}

impl CleanReport {
    pub fn non_clean(&self) -> impl Iterator<Item = &RMatrix> {
        self.entries.iter().filter(|e| e.witness.is_none()).map(|e| &e.f)
    }
}

/// Searches a witness for every element and re-verifies each one.
pub fn clean_ring(end: &EndRing) -> CleanReport {
    let idems = idempotents(end);
    let units = units(end).len();
    let entries: Vec<CleanEntry> = end
        .elements()
        .par_iter()
        .map(|f| CleanEntry {
            f: f.clone(),
            witness: clean_element(end, &idems, f).witness,
        })
        .collect();
    let invalid_witnesses: Vec<(RMatrix, String)> = entries
        .par_iter()
        .filter_map(|e| {
            let w = e.witness.as_ref()?;
            w.verify(end).err().map(|why| (e.f.clone(), why))
        })
        .collect();
    CleanReport {
        order: end.len(),
        idempotents: idems.len(),
        units,
        clean: entries.iter().all(|e| e.witness.is_some()) && invalid_witnesses.is_empty(),
        entries,
        invalid_witnesses,
    }
}

/// `e = ι_B∘π_B` for `M = A⊕B`: each basis vector split along the sum.
pub fn projection_onto(end: &EndRing, a: &Subcomodule, b: &Subcomodule) -> RMatrix {
    let m = end.comodule();
    let ring = m.ring();
    let ga = a.span().matrix();
    let gb = b.span().matrix();
    let h = howell(&ga.vstack(gb).expect("same width"));
    let cols: Vec<Vec<u64>> = (0..m.rank())
        .map(|j| {
            let unit: Vec<u64> = (0..m.rank()).map(|i| u64::from(i == j)).collect();
            let coeffs = h.express(&unit).expect("A + B = M");
            let orig = h.transform().row_apply(&coeffs);
            gb.row_apply(&orig[ga.rows()..])
        })
        .collect();
    end.canonical(&RMatrix::from_fn(ring, m.rank(), m.rank(), |i, j| cols[j][i]))
}

/// A pair of decompositions `M = A⊕B = X⊕Y` adapted to `f`, and the
/// projection built from it.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub a: Subcomodule,
    pub b: Subcomodule,
    pub x: Subcomodule,
    pub y: Subcomodule,
    /// Projection onto `B` along `A`.
    pub e: RMatrix,
    pub u: RMatrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub f: RMatrix,
    pub by_decomposition: Option<Decomposition>,
    pub by_idempotent: Option<CleanWitness>,
    /// Complementary pairs `(A, B)` examined.
    pub pairs_tried: usize,
    /// Both searches agree and every produced object re-validates.
    pub consistent: bool,
    pub problem: Option<String>,
}

/// Searches all complementary pairs `M = A⊕B` of the lattice for one with
/// `f(A)⊕(1−f)(B) = M`, `f` injective on `A` and `1−f` injective on `B`
/// (bijectivity forces `X = f(A)`, `Y = (1−f)(B)`), independently of the
/// idempotent search, and compares the two verdicts.
pub fn decomposition_equivalence(
    end: &EndRing,
    lattice: &Lattice,
    idempotents: &[RMatrix],
    f: &RMatrix,
) -> EquivalenceReport {
    let m = end.comodule();
    let one_minus_f = end.sub(end.identity(), f);
    let mut pairs_tried = 0;
    let mut found = None;
    'search: for i in 0..lattice.len() {
        for j in 0..lattice.len() {
            if !lattice.complementary(i, j) {
                continue;
            }
            pairs_tried += 1;
            let (a, b) = (lattice.node(i), lattice.node(j));
            let x = a.image(m, f);
            let y = b.image(m, &one_minus_f);
            if x.order() == a.order() && y.order() == b.order() && is_direct_sum(end, &x, &y) {
                let e = projection_onto(end, a, b);
                let u = end.sub(f, &e);
                found = Some(Decomposition {
                    a: a.clone(),
                    b: b.clone(),
                    x,
                    y,
                    e,
                    u,
                });
                break 'search;
            }
        }
    }
    let by_idempotent = clean_element(end, idempotents, f).witness;
    let mut problem = None;
    if found.is_some() != by_idempotent.is_some() {
        problem = Some("decomposition search and idempotent search disagree".to_string());
    }
    if let Some(w) = &by_idempotent {
        if let Err(why) = w.verify(end) {
            problem = Some(format!("clean witness fails: {why}"));
        }
    }
    if let Some(d) = &found {
        let e = &d.e;
        if !end.contains(e) {
            problem = Some("projection is not a comodule morphism".into());
        } else if !end.is_idempotent(e) {
            problem = Some("projection is not idempotent".into());
        } else if end.inverse(&d.u).is_none() {
            problem = Some("f − projection is not a unit".into());
        } else if kernel_of(end, e) != d.a || image_of(end, e, &Subcomodule::whole(m)) != d.b {
            problem = Some("projection has the wrong kernel or image".into());
        }
    }
    EquivalenceReport {
        f: end.canonical(f),
        consistent: problem.is_none(),
        by_decomposition: found,
        by_idempotent,
        pairs_tried,
        problem,
    }
}

/// `Ker e = Im(1−e)`, `Im e = Ker(1−e)` and `1−e ∈ End^C(M)`.
pub fn complement_identities_hold(end: &EndRing, e: &RMatrix) -> bool {
    let m = end.comodule();
    let whole = Subcomodule::whole(m);
    let f = end.sub(end.identity(), e);
    end.contains(&f) && kernel_of(end, e) == image_of(end, &f, &whole) && image_of(end, e, &whole) == kernel_of(end, &f)
}
