//! Essential and closed subcomodules, closures and closed complements, and
//! the extending conditions CM1, CM2, CM3.
//!
//! Every routine works on node indices of a [`Lattice`]. Essentiality is
//! decided with atoms: `N ⊆^e L` iff every atom below `L` lies below `N`.

use serde::Serialize;

use crate::error::{Caps, Error, Result};
use crate::lattice::{comodule_iso_between, Lattice};

/// `n ⊆^e within`, assuming `n ⊆ within`.
pub fn is_essential(l: &Lattice, n: usize, within: usize) -> bool {
    l.atoms_below(within).is_subset(l.atoms_below(n))
}

/// `n ⊆^e within` straight from the definition: every nonzero node below
/// `within` meets `n`. Quadratic; kept as an oracle for [`is_essential`].
pub fn is_essential_by_definition(l: &Lattice, n: usize, within: usize) -> bool {
    l.below(within)
        .filter(|&k| !l.node(k).is_zero())
        .all(|k| !l.node(l.meet(k, n)).is_zero())
}

/// No strictly larger node contains `k` essentially.
pub fn is_closed(l: &Lattice, k: usize) -> bool {
    (0..l.len()).all(|j| j == k || !l.leq(k, j) || !is_essential(l, k, j))
}

/// Every closed `K` with `n ⊆^e K`.
pub fn closures(l: &Lattice, n: usize) -> Vec<usize> {
    (0..l.len())
        .filter(|&k| l.leq(n, k) && is_essential(l, n, k) && is_closed(l, k))
        .collect()
}

/// A maximal `H ⊇ n` with `H ∩ g = 0`, with the properties it must have.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ClosedComplement {
    pub h: usize,
    pub closed: bool,
    /// `g ⊕ H ⊆^e M`
    pub sum_essential: bool,
}

impl ClosedComplement {
    pub fn holds(&self) -> bool {
        self.closed && self.sum_essential
    }
}

/// The largest (then first in node order) `H ⊇ n` missing `g`. Largest
/// implies maximal, so `H` is a complement of `g`.
pub fn closed_complement(l: &Lattice, g: usize, n: usize) -> Result<ClosedComplement> {
    if !l.disjoint(g, n) {
        return Err(Error::Precondition("closed complement needs g ∩ n = 0".into()));
    }
    let h = (0..l.len())
        .filter(|&h| l.leq(n, h) && l.disjoint(h, g))
        .max_by_key(|&h| (l.node(h).order(), std::cmp::Reverse(h)))
        .expect("n itself qualifies");
    Ok(ClosedComplement {
        h,
        closed: is_closed(l, h),
        sum_essential: is_essential(l, l.join(g, h), l.top()),
    })
}

/// `M₁ ⊇ n1`, `M₂ ⊇ n2` with `n1 ⊆^e M₁`, `M₂` closed, `M₁ ∩ M₂ = 0` and
/// `M₁ ⊕ M₂ ⊆^e M`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ClosedPair {
    pub m1: usize,
    pub m2: usize,
    pub n1_essential: bool,
    pub m2_closed: bool,
    pub disjoint: bool,
    pub sum_essential: bool,
}

impl ClosedPair {
    pub fn holds(&self) -> bool {
        self.n1_essential && self.m2_closed && self.disjoint && self.sum_essential
    }
}

/// `M₂` is a closed complement of `n1` containing `n2`, and `M₁` a closed
/// complement of `M₂` containing `n1`.
pub fn closed_pair(l: &Lattice, n1: usize, n2: usize) -> Result<ClosedPair> {
    let m2 = closed_complement(l, n1, n2)?.h;
    let m1 = closed_complement(l, m2, n1)?.h;
    Ok(ClosedPair {
        m1,
        m2,
        n1_essential: is_essential(l, n1, m1),
        m2_closed: is_closed(l, m2),
        disjoint: l.disjoint(m1, m2),
        sum_essential: is_essential(l, l.join(m1, m2), l.top()),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeAnnotation {
    pub node: usize,
    pub essential: bool,
    pub closed: bool,
    pub summand: bool,
    pub closures: Vec<usize>,
    pub complements: Vec<usize>,
}

pub fn annotate(l: &Lattice) -> Vec<LatticeAnnotation> {
    (0..l.len())
        .map(|i| {
            let complements = l.complements(i);
            LatticeAnnotation {
                node: i,
                essential: is_essential(l, i, l.top()),
                closed: is_closed(l, i),
                summand: !complements.is_empty(),
                closures: closures(l, i),
                complements,
            }
        })
        .collect()
}

/// Chains `K ⊆ N ⊆ L` checked for `K ⊆^e L ⇔ K ⊆^e N ∧ N ⊆^e L`.
#[derive(Clone, Debug, Serialize)]
pub struct TransitivityReport {
    pub chains: u64,
    /// All chains were checked, not only those ending at `M`.
    pub exhaustive: bool,
    pub violation: Option<[usize; 3]>,
}

/// Lattices above this size are checked only on chains ending at `M`.
pub const TRANSITIVITY_FULL_LIMIT: usize = 300;

pub fn essential_transitivity(l: &Lattice) -> TransitivityReport {
    let exhaustive = l.len() <= TRANSITIVITY_FULL_LIMIT;
    let tops: Vec<usize> = if exhaustive {
        (0..l.len()).collect()
    } else {
        vec![l.top()]
    };
    let mut chains = 0;
    for &top in &tops {
        for n in l.below(top) {
            for k in l.below(n) {
                chains += 1;
                let direct = is_essential(l, k, top);
                let stepwise = is_essential(l, k, n) && is_essential(l, n, top);
                if direct != stepwise {
                    return TransitivityReport {
                        chains,
                        exhaustive,
                        violation: Some([k, n, top]),
                    };
                }
            }
        }
    }
    TransitivityReport {
        chains,
        exhaustive,
        violation: None,
    }
}

/// A verdict with the nodes that refute it.
#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Condition {
    pub holds: bool,
    pub counterexample: Option<Vec<usize>>,
}

impl Condition {
    fn from_counterexample(c: Option<Vec<usize>>) -> Self {
        Condition {
            holds: c.is_none(),
            counterexample: c,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuityReport {
    pub cm1: Condition,
    pub cm2: Condition,
    pub cm3: Condition,
    pub semisimple: Condition,
    pub cs: bool,
    pub continuous: bool,
    pub quasi_continuous: bool,
}

pub fn continuity_classify(l: &Lattice, caps: &Caps) -> Result<ContinuityReport> {
    let n = l.len();
    let summand: Vec<bool> = (0..n).map(|i| l.is_summand(i)).collect();

    let cm1 = (0..n).find(|&a| !(0..n).any(|k| summand[k] && l.leq(a, k) && is_essential(l, a, k)));

    let m = l.comodule();
    let mut presented: Vec<Option<crate::comodule::Comodule>> = vec![None; n];
    let mut present = |i: usize| -> crate::comodule::Comodule {
        presented[i].get_or_insert_with(|| l.node(i).to_comodule(m).0).clone()
    };
    let mut cm2 = None;
    'cm2: for a in (0..n).filter(|&a| !summand[a]) {
        for s in (0..n).filter(|&s| summand[s] && l.node(s).order() == l.node(a).order()) {
            if comodule_iso_between(&present(a), &present(s), caps)?.is_some() {
                cm2 = Some(vec![a, s]);
                break 'cm2;
            }
        }
    }

    let mut cm3 = None;
    'cm3: for i in (0..n).filter(|&i| summand[i]) {
        for j in (i..n).filter(|&j| summand[j]) {
            if l.disjoint(i, j) && !summand[l.join(i, j)] {
                cm3 = Some(vec![i, j]);
                break 'cm3;
            }
        }
    }

    let semisimple = (0..n).find(|&i| !summand[i]).map(|i| vec![i]);
    let cm1 = Condition::from_counterexample(cm1.map(|a| vec![a]));
    let cm2 = Condition::from_counterexample(cm2);
    let cm3 = Condition::from_counterexample(cm3);
    let semisimple = Condition::from_counterexample(semisimple);
    debug_assert!(!semisimple.holds || (cm1.holds && cm2.holds && cm3.holds));
    Ok(ContinuityReport {
        cs: cm1.holds,
        continuous: cm1.holds && cm2.holds,
        quasi_continuous: cm1.holds && cm3.holds,
        cm1,
        cm2,
        cm3,
        semisimple,
    })
}
