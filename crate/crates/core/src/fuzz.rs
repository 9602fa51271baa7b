//! Seeded random instances: subcomodules and quotients of free comodules
//! `C^k`, each run through the theorem bundle.
//!
//! Every comodule is built from a free one, so it satisfies the axioms by
//! construction; this is asserted, never rejection-sampled.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::check::{CheckResult, Verdict};
use crate::clean::clean_ring;
use crate::coalgebra::Coalgebra;
use crate::comodule::{validate_comodule, Comodule};
use crate::error::{Caps, Error, Result};
use crate::instance::{instance_of, serialize};
use crate::lattice::{generated_subcomodule, quotient, Subcomodule};
use crate::ring::RingSpec;
use crate::theorems::{theorem_bundle, Analysis};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoalgebraKind {
    Trivial,
    Grouplike(usize),
    Matrix(usize),
    DividedPower(usize),
    ChainIncidence(usize),
}

impl CoalgebraKind {
    pub fn build(self, ring: RingSpec) -> Coalgebra {
        match self {
            CoalgebraKind::Trivial => Coalgebra::trivial(ring),
            CoalgebraKind::Grouplike(g) => Coalgebra::grouplike(ring, g),
            CoalgebraKind::Matrix(k) => Coalgebra::matrix(ring, k),
            CoalgebraKind::DividedPower(d) => Coalgebra::divided_power(ring, d),
            CoalgebraKind::ChainIncidence(n) => Coalgebra::chain_incidence(ring, n),
        }
    }
}

/// `trivial`, `grouplike:<g>`, `matrix:<k>`, `divided-power:<d>` or
/// `chain:<len>`.
impl FromStr for CoalgebraKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (name, arg) = s.split_once(':').unwrap_or((s, ""));
        let size = || -> std::result::Result<usize, String> {
            match arg.parse::<usize>() {
                Ok(v) if (1..=8).contains(&v) => Ok(v),
                _ => Err(format!("`{s}` needs a size in 1..=8, as in `{name}:2`")),
            }
        };
        match name {
            "trivial" if arg.is_empty() => Ok(CoalgebraKind::Trivial),
            "grouplike" => Ok(CoalgebraKind::Grouplike(size()?)),
            "matrix" => Ok(CoalgebraKind::Matrix(size()?)),
            "divided-power" => Ok(CoalgebraKind::DividedPower(size()?)),
            "chain" => Ok(CoalgebraKind::ChainIncidence(size()?)),
            _ => Err(format!("unknown coalgebra kind `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// A random subcomodule of `C^k`.
    Subcomodule(usize),
    /// `C^k` modulo a random subcomodule.
    Quotient(usize),
}

/// `sub:<k>` or `quot:<k>`.
impl FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (name, arg) = s.split_once(':').unwrap_or((s, "1"));
        let k = match arg.parse::<usize>() {
            Ok(k) if (1..=4).contains(&k) => k,
            _ => return Err(format!("`{s}` needs a power in 1..=4")),
        };
        match name {
            "sub" => Ok(Strategy::Subcomodule(k)),
            "quot" => Ok(Strategy::Quotient(k)),
            _ => Err(format!("unknown strategy `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FuzzConfig {
    pub modulus: u64,
    pub kind: CoalgebraKind,
    pub strategy: Strategy,
    pub count: usize,
    pub seed: u64,
}

/// A generated comodule and the elements of `C^k` that determine it.
#[derive(Clone, Debug)]
pub struct Generated {
    pub free: Comodule,
    pub generators: Vec<Vec<u64>>,
    pub comodule: Comodule,
}

fn build(free: &Comodule, strategy: Strategy, generators: &[Vec<u64>]) -> Comodule {
    let mut s = Subcomodule::zero(free);
    for g in generators {
        s = s.sum(free, &generated_subcomodule(free, g));
    }
    let m = match strategy {
        Strategy::Subcomodule(_) => s.to_comodule(free).0,
        Strategy::Quotient(_) => quotient(free, &s),
    };
    let report = validate_comodule(free.coalgebra(), &m.data()).expect("shapes agree");
    assert!(report.passed(), "generated comodules satisfy the axioms: {report}");
    m
}

/// Instance `index` of the run; independent of every other index.
pub fn generate(config: &FuzzConfig, index: usize) -> Result<Generated> {
    let ring = RingSpec::new(config.modulus)?;
    let c = config.kind.build(ring);
    let k = match config.strategy {
        Strategy::Subcomodule(k) | Strategy::Quotient(k) => k,
    };
    let free = Comodule::free(&c, k);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let count = rng.random_range(1..=2);
    let generators: Vec<Vec<u64>> = (0..count)
        .map(|_| (0..free.rank()).map(|_| rng.random_range(0..config.modulus)).collect())
        .collect();
    let comodule = build(&free, config.strategy, &generators);
    Ok(Generated {
        free,
        generators,
        comodule,
    })
}

/// The theorem bundle plus the ungated cleanness check.
pub fn bundle(m: &Comodule, caps: &Caps) -> Result<(Vec<CheckResult>, bool)> {
    let a = Analysis::new(m, caps)?;
    let mut checks = theorem_bundle(&a);
    let r = clean_ring(&a.end);
    let summary = serde_json::json!({ "order": r.order, "clean": r.clean });
    let clean = r.clean && r.invalid_witnesses.is_empty();
    checks.push(if clean {
        CheckResult::pass("clean", summary)
    } else {
        CheckResult::fail("clean", summary, serde_json::json!("End^C(M) is not clean"))
    });
    Ok((checks, a.clean_hypotheses()))
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzCase {
    pub index: usize,
    pub order: u128,
    pub rank: usize,
    pub hypotheses: bool,
    pub verdicts: Vec<(String, Verdict)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<String>,
    /// Minimized failing instance, in instance-file syntax.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl FuzzCase {
    pub fn failed(&self) -> bool {
        self.verdicts.iter().any(|(_, v)| *v == Verdict::Fail)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub config: FuzzConfig,
    pub caps: Caps,
    pub passed: usize,
    pub failed: usize,
    pub cap_exceeded: usize,
    pub hypotheses_met: usize,
    pub cases: Vec<FuzzCase>,
}

impl FuzzReport {
    pub fn exit_code(&self) -> i32 {
        if self.failed > 0 {
            1
        } else if self.cap_exceeded > 0 {
            3
        } else {
            0
        }
    }
}

fn fails(m: &Comodule, caps: &Caps) -> bool {
    bundle(m, caps).is_ok_and(|(checks, _)| checks.iter().any(|c| c.verdict == Verdict::Fail))
}

/// Drops generators one at a time while the bundle still fails.
fn minimize(g: &Generated, strategy: Strategy, caps: &Caps) -> Comodule {
    let mut gens = g.generators.clone();
    let mut i = 0;
    while i < gens.len() {
        let mut fewer = gens.clone();
        fewer.remove(i);
        if fails(&build(&g.free, strategy, &fewer), caps) {
            gens = fewer;
        } else {
            i += 1;
        }
    }
    build(&g.free, strategy, &gens)
}

fn run_case(config: &FuzzConfig, caps: &Caps, index: usize) -> Result<FuzzCase> {
    let g = generate(config, index)?;
    let m = &g.comodule;
    let mut case = FuzzCase {
        index,
        order: m.order(),
        rank: m.rank(),
        hypotheses: false,
        verdicts: Vec::new(),
        cap: None,
        counterexample: None,
    };
    match bundle(m, caps) {
        Ok((checks, hypotheses)) => {
            case.hypotheses = hypotheses;
            case.verdicts = checks.into_iter().map(|c| (c.name, c.verdict)).collect();
        }
        Err(e @ Error::CapExceeded { .. }) => case.cap = Some(e.to_string()),
        Err(e) => return Err(e),
    }
    if case.failed() {
        let small = minimize(&g, config.strategy, caps);
        case.counterexample = Some(serialize(&instance_of(small.coalgebra(), &[("M", &small)])));
    }
    Ok(case)
}

/// Cases run in parallel and are merged in index order.
pub fn fuzz(config: &FuzzConfig, caps: &Caps) -> Result<FuzzReport> {
    let cases = (0..config.count)
        .into_par_iter()
        .map(|i| run_case(config, caps, i))
        .collect::<Result<Vec<_>>>()?;
    let failed = cases.iter().filter(|c| c.failed()).count();
    let cap_exceeded = cases.iter().filter(|c| c.cap.is_some()).count();
    Ok(FuzzReport {
        config: *config,
        caps: *caps,
        passed: cases.len() - failed - cap_exceeded,
        failed,
        cap_exceeded,
        hypotheses_met: cases.iter().filter(|c| c.hypotheses).count(),
        cases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_kinds_and_strategies() {
        assert_eq!("grouplike:2".parse(), Ok(CoalgebraKind::Grouplike(2)));
        assert_eq!("trivial".parse(), Ok(CoalgebraKind::Trivial));
        assert!("grouplike".parse::<CoalgebraKind>().is_err());
        assert_eq!("sub:2".parse(), Ok(Strategy::Subcomodule(2)));
        assert_eq!("quot".parse(), Ok(Strategy::Quotient(1)));
        assert!("other:1".parse::<Strategy>().is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let config = FuzzConfig {
            modulus: 3,
            kind: CoalgebraKind::Matrix(2),
            strategy: Strategy::Quotient(1),
            count: 4,
            seed: 11,
        };
        for i in 0..4 {
            let a = generate(&config, i).unwrap();
            let b = generate(&config, i).unwrap();
            assert_eq!(a.generators, b.generators);
            assert_eq!(a.comodule.data(), b.comodule.data());
        }
    }

    #[test]
    fn empty_run() {
        let config = FuzzConfig {
            modulus: 2,
            kind: CoalgebraKind::Trivial,
            strategy: Strategy::Subcomodule(1),
            count: 0,
            seed: 1,
        };
        let r = fuzz(&config, &Caps::default()).unwrap();
        assert!(r.cases.is_empty());
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn small_runs_pass() {
        for (modulus, kind, strategy, seed) in [
            (2, CoalgebraKind::Grouplike(2), Strategy::Subcomodule(2), 1),
            (4, CoalgebraKind::Trivial, Strategy::Quotient(1), 7),
        ] {
            let config = FuzzConfig {
                modulus,
                kind,
                strategy,
                count: 10,
                seed,
            };
            let r = fuzz(&config, &Caps::default()).unwrap();
            assert_eq!(r.failed, 0, "{:?}", r.cases.iter().find(|c| c.failed()));
            assert_eq!(r.cap_exceeded, 0);
        }
    }
}
