//! Injectivity of `α: Q⊗C → Hom(C*, Q)`, `q⊗c ↦ (g ↦ g(c)q)`, for the
//! quotients `Q = M/(C*⇀x)`.
//!
//! With `C` free of rank `r`, both sides are `Q^r`: the domain in the basis
//! `q⊗c_k`, the codomain by values on the dual basis `f_l`. The map is then
//! `kron(I, E)` with `E[l][k] = f_l(c_k)`.

use serde::Serialize;

use crate::comodule::Comodule;
use crate::error::{Caps, Result};
use crate::howell::{for_each_tuple, howell, kernel};
use crate::lattice::{generated_subcomodule, quotient};
use crate::matrix::RMatrix;

#[derive(Clone, Debug, Serialize)]
pub struct AlphaReport {
    pub x: Vec<u64>,
    pub quotient_order: u128,
    /// Kernel of α computed by linear algebra.
    pub kernel_order: u128,
    pub injective: bool,
    /// Result of checking every element of `Q⊗C`, when small enough.
    pub exhaustive: Option<bool>,
}

pub fn alpha_star_check(m: &Comodule, x: &[u64], caps: &Caps) -> Result<AlphaReport> {
    let ring = m.ring();
    let r = m.coalgebra().rank();
    let q = quotient(m, &generated_subcomodule(m, x));
    let dim = q.rank();
    let alpha = RMatrix::identity(ring, dim)
        .kron(&m.coalgebra().dual_pairing())
        .expect("kron");
    let rel_tensor = howell(
        &q.module()
            .relations()
            .matrix()
            .kron(&RMatrix::identity(ring, r))
            .expect("kron"),
    );
    let perp_tensor = q.module().perp().kron(&RMatrix::identity(ring, r)).expect("kron");
    // v ∈ Ker α  ⇔  α v ∈ Rel⊗C  ⇔  perp⊗I · α v = 0.
    let constraint = perp_tensor.mul(&alpha).expect("shapes").transpose();
    let preimage = kernel(&constraint);
    let kernel_order = preimage.span_size() / rel_tensor.span_size();
    let domain_order = q.order().saturating_pow(r as u32);
    let exhaustive = if domain_order <= caps.max_elements as u128 {
        let mut ok = true;
        for_each_tuple(&rel_tensor.residue_ranges(), |v| {
            if ok && v.iter().any(|&c| c != 0) {
                ok = !rel_tensor.contains(&alpha.apply(v));
            }
        });
        Some(ok)
    } else {
        None
    };
    Ok(AlphaReport {
        x: x.to_vec(),
        quotient_order: q.order(),
        kernel_order,
        injective: kernel_order == 1,
        exhaustive,
    })
}
