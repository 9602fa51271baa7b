//! The comodule `L = ⊕_{n≥0} M_n` of finitely supported sequences over a
//! component comodule `M`, the forward shift, its idempotent part and its
//! unit part.
//!
//! The operators only move and recombine indices, so the same functions act
//! on `L` and on `L⊗C = ⊕ (M⊗C)_n`; this is what makes them commute with the
//! componentwise coaction.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::comodule::Comodule;
use crate::matrix::{vec_add, vec_scale, RMatrix};
use crate::presented::PresentedModule;

/// A finitely supported sequence; no zero component is stored.
#[derive(Clone, Debug, Serialize)]
pub struct FinSupp {
    #[serde(skip)]
    module: Arc<PresentedModule>,
    terms: BTreeMap<usize, Vec<u64>>,
}

impl PartialEq for FinSupp {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}
impl Eq for FinSupp {}

impl FinSupp {
    pub fn zero(module: &Arc<PresentedModule>) -> Self {
        FinSupp {
            module: module.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// Sums the given `(index, component)` pairs; repeated indices add.
    pub fn from_terms(module: &Arc<PresentedModule>, terms: impl IntoIterator<Item = (usize, Vec<u64>)>) -> Self {
        let mut x = Self::zero(module);
        for (n, v) in terms {
            x.add_at(n, &v, 1);
        }
        x
    }

    pub fn single(module: &Arc<PresentedModule>, n: usize, m: &[u64]) -> Self {
        Self::from_terms(module, [(n, m.to_vec())])
    }

    pub fn module(&self) -> &Arc<PresentedModule> {
        &self.module
    }

    pub fn terms(&self) -> &BTreeMap<usize, Vec<u64>> {
        &self.terms
    }

    pub fn get(&self, n: usize) -> Option<&[u64]> {
        self.terms.get(&n).map(Vec::as_slice)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `self[n] += c·v`, keeping components reduced and dropping zeros.
    fn add_at(&mut self, n: usize, v: &[u64], c: u64) {
        let ring = self.module.ring();
        let current = self.terms.remove(&n).unwrap_or_else(|| vec![0; v.len()]);
        let next = self.module.reduce(&vec_add(ring, &current, &vec_scale(ring, v, c)));
        if !self.module.is_zero(&next) {
            self.terms.insert(n, next);
        }
    }

    pub fn add(&self, other: &FinSupp) -> FinSupp {
        let mut out = self.clone();
        for (&n, v) in &other.terms {
            out.add_at(n, v, 1);
        }
        out
    }

    pub fn neg(&self) -> FinSupp {
        let minus_one = self.module.ring().neg(1);
        let mut out = Self::zero(&self.module);
        for (&n, v) in &self.terms {
            out.add_at(n, v, minus_one);
        }
        out
    }

    pub fn sub(&self, other: &FinSupp) -> FinSupp {
        self.add(&other.neg())
    }

    /// Applies an index rule: each component at `n` contributes
    /// `c·component` at every `(n′, c)` the rule returns.
    fn linear(&self, rule: impl Fn(usize) -> Vec<(usize, u64)>) -> FinSupp {
        let mut out = Self::zero(&self.module);
        for (&n, v) in &self.terms {
            for (target, c) in rule(n) {
                out.add_at(target, v, c);
            }
        }
        out
    }

    /// Applies a map to every component, landing in `target`.
    pub fn map_components(&self, target: &Arc<PresentedModule>, f: impl Fn(&[u64]) -> Vec<u64>) -> FinSupp {
        FinSupp::from_terms(target, self.terms.iter().map(|(&n, v)| (n, f(v))))
    }
}

/// `m_n ↦ m_{n+1}`.
pub fn shift(x: &FinSupp) -> FinSupp {
    x.linear(|n| vec![(n + 1, 1)])
}

/// `m_{2n} ↦ m_{2n}` and `m_{2n+1} ↦ m_{2n+2} − m_{2n}`.
pub fn parity_idempotent(x: &FinSupp) -> FinSupp {
    let minus_one = x.module().ring().neg(1);
    x.linear(|n| {
        if n % 2 == 0 {
            vec![(n, 1)]
        } else {
            vec![(n + 1, 1), (n - 1, minus_one)]
        }
    })
}

/// `shift − parity_idempotent`: `m_{2n} ↦ m_{2n+1} − m_{2n}` and
/// `m_{2n+1} ↦ m_{2n}`. Satisfies `u(u + 1) = 1`.
pub fn shift_unit(x: &FinSupp) -> FinSupp {
    let minus_one = x.module().ring().neg(1);
    x.linear(|n| {
        if n % 2 == 0 {
            vec![(n + 1, 1), (n, minus_one)]
        } else {
            vec![(n - 1, 1)]
        }
    })
}

/// `L` over a component comodule, together with `L⊗C`.
#[derive(Clone, Debug)]
pub struct ShiftSpace {
    component: Comodule,
    module: Arc<PresentedModule>,
    tensor: Arc<PresentedModule>,
}

impl ShiftSpace {
    pub fn new(component: &Comodule) -> Self {
        let ring = component.ring();
        let r = component.coalgebra().rank();
        let rel = component.module().relations().matrix();
        let tensor = if rel.rows() == 0 {
            PresentedModule::free(ring, component.rank() * r)
        } else {
            PresentedModule::new(&rel.kron(&RMatrix::identity(ring, r)).expect("kron"))
        };
        ShiftSpace {
            component: component.clone(),
            module: Arc::new(component.module().clone()),
            tensor: Arc::new(tensor),
        }
    }

    pub fn component(&self) -> &Comodule {
        &self.component
    }

    pub fn module(&self) -> &Arc<PresentedModule> {
        &self.module
    }

    pub fn sequence(&self, terms: impl IntoIterator<Item = (usize, Vec<u64>)>) -> FinSupp {
        FinSupp::from_terms(&self.module, terms)
    }

    /// Componentwise `ϱ^M`, in `⊕ (M⊗C)_n`.
    pub fn coaction(&self, x: &FinSupp) -> FinSupp {
        x.map_components(&self.tensor, |v| self.component.coaction(v))
    }

    /// Up to `max_terms` random components at indices below `max_index`.
    pub fn random(&self, rng: &mut impl Rng, max_terms: usize, max_index: usize) -> FinSupp {
        let n = self.module.ring().modulus();
        let count = rng.random_range(0..=max_terms);
        let terms: Vec<(usize, Vec<u64>)> = (0..count)
            .map(|_| {
                let v = (0..self.module.dim()).map(|_| rng.random_range(0..n)).collect();
                (rng.random_range(0..max_index), v)
            })
            .collect();
        self.sequence(terms)
    }
}

/// Checks every identity on one input; the error names the first failure.
pub fn shift_identities(space: &ShiftSpace, x: &FinSupp) -> Result<(), &'static str> {
    let f = shift(x);
    let e = parity_idempotent(x);
    let u = shift_unit(x);
    let check = |ok: bool, what| if ok { Ok(()) } else { Err(what) };
    check(parity_idempotent(&e) == e, "e∘e = e")?;
    check(f == e.add(&u), "f = e + u")?;
    let u_plus_id = u.add(x);
    check(shift_unit(&u_plus_id) == *x, "u∘(u + 1) = 1")?;
    check(shift_unit(&u).add(&u) == *x, "(u + 1)∘u = 1")?;
    check(f.get(0).is_none(), "shift misses index 0")?;
    check(f.is_zero() == x.is_zero(), "shift is injective")?;
    let rho = space.coaction(x);
    for (op, name) in [
        (shift as fn(&FinSupp) -> FinSupp, "shift commutes with the coaction"),
        (parity_idempotent, "e commutes with the coaction"),
        (shift_unit, "u commutes with the coaction"),
    ] {
        check(space.coaction(&op(x)) == op(&rho), name)?;
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftReport {
    pub trials: usize,
    pub seed: u64,
    pub failures: usize,
    pub first_failure: Option<(FinSupp, String)>,
}

/// Runs [`shift_identities`] on `trials` seeded random sequences.
pub fn shift_check(space: &ShiftSpace, trials: usize, seed: u64) -> ShiftReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut first_failure = None;
    for _ in 0..trials {
        let x = space.random(&mut rng, 8, 24);
        if let Err(why) = shift_identities(space, &x) {
            failures += 1;
            first_failure.get_or_insert((x, why.to_string()));
        }
    }
    ShiftReport {
        trials,
        seed,
        failures,
        first_failure,
    }
}
