//! Annihilators `Ann(x) = {g ∈ C* : g⇀x = 0}` as left ideals of `C*`.
//!
//! The "no nonzero element is annihilated by a left ideal" hypothesis is
//! read two ways and both are reported: the literal reading asks that every
//! nonzero `x` has `Ann(x) = 0`; the essential reading asks that no nonzero
//! `x` has an essential annihilator (one meeting every nonzero left ideal).

use std::collections::BTreeSet;

use serde::Serialize;

use crate::coalgebra::{dual_algebra, DualAlgebra};
use crate::comodule::Comodule;
use crate::error::{Caps, Result};
use crate::howell::{howell, kernel, HowellForm};
use crate::matrix::RMatrix;

/// `Ann(x)` in dual-basis coordinates, in Howell form.
pub fn annihilator(m: &Comodule, x: &[u64]) -> HowellForm {
    let perp = m.module().perp();
    let rows: Vec<Vec<u64>> = m.actions().iter().map(|a| perp.apply(&a.apply(x))).collect();
    kernel(&RMatrix::from_rows(m.ring(), perp.rows(), &rows))
}

/// `C*∗g`, the left ideal generated by `g`.
pub fn cyclic_left_ideal(d: &DualAlgebra, g: &[u64]) -> HowellForm {
    let rows: Vec<Vec<u64>> = (0..d.rank()).map(|i| d.product(&d.basis(i), g)).collect();
    howell(&RMatrix::from_rows(d.ring(), d.rank(), &rows))
}

/// The minimal nonzero left ideals of `C*`. Every nonzero left ideal contains
/// one, and each is generated by any of its nonzero elements.
pub fn minimal_left_ideals(d: &DualAlgebra, caps: &Caps) -> Result<Vec<HowellForm>> {
    let mut cyclic: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut ideals = Vec::new();
    for g in d.elements(caps)? {
        if g.iter().all(|&v| v == 0) {
            continue;
        }
        let i = cyclic_left_ideal(d, &g);
        if cyclic.insert(i.matrix().data().to_vec()) {
            ideals.push(i);
        }
    }
    let minimal = ideals
        .iter()
        .filter(|i| {
            !ideals
                .iter()
                .any(|j| j.span_size() < i.span_size() && i.contains_span(j))
        })
        .cloned()
        .collect();
    Ok(minimal)
}

/// Essential among left ideals: contains every minimal left ideal.
pub fn is_essential_ideal(ideal: &HowellForm, minimal: &[HowellForm]) -> bool {
    minimal.iter().all(|l| ideal.contains_span(l))
}

#[derive(Clone, Debug, Serialize)]
pub struct AnnihilatorReport {
    pub elements_checked: usize,
    pub minimal_left_ideals: usize,
    /// No nonzero `x` has a nonzero annihilator.
    pub literal_holds: bool,
    pub literal_counterexample: Option<Vec<u64>>,
    /// No nonzero `x` has an essential annihilator.
    pub essential_holds: bool,
    pub essential_counterexample: Option<Vec<u64>>,
    /// `|Ann(x)|` of the counterexample to the literal reading, if any.
    pub literal_counterexample_ann_order: Option<u128>,
}

pub fn annihilator_condition(m: &Comodule, caps: &Caps) -> Result<AnnihilatorReport> {
    let d = dual_algebra(m.coalgebra());
    let minimal = minimal_left_ideals(&d, caps)?;
    let elements = m.elements(caps)?;
    let mut report = AnnihilatorReport {
        elements_checked: 0,
        minimal_left_ideals: minimal.len(),
        literal_holds: true,
        literal_counterexample: None,
        essential_holds: true,
        essential_counterexample: None,
        literal_counterexample_ann_order: None,
    };
    for x in elements.iter().filter(|x| !m.module().is_zero(x)) {
        report.elements_checked += 1;
        let ann = annihilator(m, x);
        if !ann.is_zero() && report.literal_holds {
            report.literal_holds = false;
            report.literal_counterexample = Some(x.clone());
            report.literal_counterexample_ann_order = Some(ann.span_size());
        }
        if report.essential_holds && is_essential_ideal(&ann, &minimal) {
            report.essential_holds = false;
            report.essential_counterexample = Some(x.clone());
        }
    }
    Ok(report)
}
