//! Runs a selection of checks on a parsed instance and assembles the report.

use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::alpha::alpha_star_check;
use crate::annihilator::annihilator_condition;
use crate::check::{CheckResult, Verdict};
use crate::clean::clean_ring;
use crate::coalgebra::{dual_algebra, validate_coalgebra, Coalgebra};
use crate::comodule::{cstar_end, end_ring, validate_comodule, Comodule, EndRing};
use crate::continuity::annotate;
use crate::error::{Caps, Error, Result};
use crate::instance::Instance;
use crate::lattice::{all_submodules, subcomodule_lattice, Lattice};
use crate::theorems::{theorem_bundle, Analysis};

pub const TOOL: &str = "comod";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Validate,
    Dual,
    Endo,
    Clean,
    Lattice,
    Continuity,
    Theorems,
    Alpha,
    Annihilator,
}

impl CheckKind {
    pub const ALL: [CheckKind; 9] = [
        CheckKind::Validate,
        CheckKind::Dual,
        CheckKind::Endo,
        CheckKind::Clean,
        CheckKind::Lattice,
        CheckKind::Continuity,
        CheckKind::Theorems,
        CheckKind::Alpha,
        CheckKind::Annihilator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Validate => "validate",
            CheckKind::Dual => "dual",
            CheckKind::Endo => "endo",
            CheckKind::Clean => "clean",
            CheckKind::Lattice => "lattice",
            CheckKind::Continuity => "continuity",
            CheckKind::Theorems => "theorems",
            CheckKind::Alpha => "alpha",
            CheckKind::Annihilator => "annihilator",
        }
    }
}

impl FromStr for CheckKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown check `{s}`"))
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub caps: Caps,
    pub witnesses: bool,
    pub timing: bool,
    /// Restrict per-comodule checks to this comodule.
    pub comodule: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComoduleInfo {
    pub name: String,
    pub rank: usize,
    pub relations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceInfo {
    pub digest: String,
    pub modulus: u64,
    pub coalgebra_rank: usize,
    pub comodules: Vec<ComoduleInfo>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub instance: InstanceInfo,
    pub caps: Caps,
    pub checks: Vec<CheckResult>,
}

impl Report {
    /// 1 when any check failed, else 3 when any hit a cap, else 0.
    pub fn exit_code(&self) -> i32 {
        exit_code(&self.checks)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {} instance {} over Z/{} (coalgebra rank {})\n",
            self.tool,
            self.version,
            &self.instance.digest[..16],
            self.instance.modulus,
            self.instance.coalgebra_rank
        );
        for c in &self.checks {
            out.push_str(&check_line(c));
        }
        out
    }
}

pub fn exit_code(checks: &[CheckResult]) -> i32 {
    if checks.iter().any(|c| c.verdict == Verdict::Fail) {
        1
    } else if checks.iter().any(|c| c.verdict == Verdict::CapExceeded) {
        3
    } else {
        0
    }
}

/// One line per check: verdict, name, comodule, reason, summary.
pub fn check_line(c: &CheckResult) -> String {
    let mut line = format!("{:<12} {}", c.verdict.to_string(), c.name);
    if let Some(m) = &c.comodule {
        line.push_str(&format!(" [{m}]"));
    }
    if let Some(r) = &c.reason {
        line.push_str(&format!(": {r}"));
    }
    if !c.summary.is_null() {
        line.push_str(&format!(" {}", c.summary));
    }
    if let Some(ce) = &c.counterexample {
        line.push_str(&format!("\n    counterexample: {ce}"));
    }
    if let Some(w) = &c.witnesses {
        line.push_str(&format!("\n    witnesses: {w}"));
    }
    line.push('\n');
    line
}

fn timed(opts: &Options, f: impl FnOnce() -> CheckResult) -> CheckResult {
    let start = Instant::now();
    let mut c = f();
    if opts.timing {
        c.millis = Some(start.elapsed().as_millis() as u64);
    }
    if !opts.witnesses {
        c.witnesses = None;
    }
    c
}

fn or_error(name: &str, r: Result<CheckResult>) -> CheckResult {
    r.unwrap_or_else(|e| CheckResult::from_error(name, &e))
}

/// The coalgebra and named comodules of an instance that passed validation.
type Validated = (Coalgebra, Vec<(String, Comodule)>);

fn validate_check(inst: &Instance, opts: &Options) -> (Vec<CheckResult>, Option<Validated>) {
    let mut out = Vec::new();
    let coalgebra = timed(opts, || match validate_coalgebra(&inst.coalgebra) {
        Ok(r) if r.passed() => CheckResult::pass("validate", json!({ "coalgebra": r })),
        Ok(r) => CheckResult::fail("validate", json!({ "coalgebra": r }), json!(r.to_string())),
        Err(e) => CheckResult::from_error("validate", &e),
    });
    let ok = coalgebra.verdict == Verdict::Pass;
    out.push(coalgebra);
    if !ok {
        return (out, None);
    }
    let c = inst.coalgebra().expect("validated");
    let mut comodules = Vec::new();
    let mut all_ok = true;
    for nm in selected(inst, opts) {
        let mut check = timed(opts, || match validate_comodule(&c, &nm.data) {
            Ok(r) if r.passed() => CheckResult::pass("validate", json!({ "comodule": r })),
            Ok(r) => CheckResult::fail("validate", json!({ "comodule": r }), json!(r.to_string())),
            Err(e) => CheckResult::from_error("validate", &e),
        });
        check.comodule = Some(nm.name.clone());
        if check.verdict == Verdict::Pass {
            comodules.push((nm.name.clone(), Comodule::new(&c, nm.data.clone()).expect("validated")));
        } else {
            all_ok = false;
        }
        out.push(check);
    }
    (out, all_ok.then_some((c, comodules)))
}

fn selected<'a>(inst: &'a Instance, opts: &'a Options) -> impl Iterator<Item = &'a crate::instance::NamedComodule> {
    inst.comodules
        .iter()
        .filter(move |m| opts.comodule.as_ref().is_none_or(|n| n == &m.name))
}

fn dual_check(c: &Coalgebra) -> CheckResult {
    let d = dual_algebra(c);
    let r = d.verify();
    let summary = json!({ "rank": c.rank(), "report": r });
    let result = if r.passed() {
        CheckResult::pass("dual", summary)
    } else {
        CheckResult::fail("dual", summary, json!(r))
    };
    result.with_witnesses(json!({ "mult": d.mult(), "unit": d.unit() }))
}

fn endo_check(m: &Comodule, caps: &Caps) -> Result<(CheckResult, EndRing)> {
    let end = end_ring(m, caps)?;
    let space = end.space();
    let other = cstar_end(m);
    let mut problem = None;
    if space.solutions().matrix() != other.solutions().matrix() {
        problem = Some("coaction solver and C*-action solver disagree");
    }
    let n = end.len();
    let closure_checked = n <= 64;
    if closure_checked {
        'outer: for a in end.elements() {
            for b in end.elements() {
                if !end.contains(&end.compose(a, b)) || !end.contains(&end.add(a, b)) {
                    problem = Some("End^C(M) is not closed under composition and addition");
                    break 'outer;
                }
            }
        }
    }
    let summary = json!({
        "order": n,
        "basis": space.basis().len(),
        "matches_cstar_end": problem.is_none(),
        "closure_checked": closure_checked,
    });
    let check = CheckResult::decide("endo", summary, problem.map(|p| json!(p)))
        .with_witnesses(json!({ "basis": space.basis() }));
    Ok((check, end))
}

fn clean_check(end: &EndRing) -> CheckResult {
    let r = clean_ring(end);
    let summary = json!({ "order": r.order, "idempotents": r.idempotents, "units": r.units, "clean": r.clean });
    let counterexample = if let Some((f, why)) = r.invalid_witnesses.first() {
        Some(json!({ "f": f, "invalid_witness": why }))
    } else {
        r.non_clean().next().map(|f| json!({ "f": f }))
    };
    let witnesses: Vec<&crate::clean::CleanWitness> = r.entries.iter().filter_map(|e| e.witness.as_ref()).collect();
    CheckResult::decide("clean", summary, counterexample).with_witnesses(json!(witnesses))
}

fn lattice_check(m: &Comodule, l: &Lattice, caps: &Caps) -> CheckResult {
    let mut problem = None;
    for i in 0..l.len() {
        for j in 0..l.len() {
            // meet/join panic if the lattice is not closed; compare explicitly.
            let s = l.node(i).sum(m, l.node(j));
            let t = l.node(i).intersect(m, l.node(j));
            if l.index_of(&s).is_none() || l.index_of(&t).is_none() {
                problem = Some(json!({ "not_closed": [l.node(i), l.node(j)] }));
            }
        }
    }
    if !l.node(l.bottom()).is_zero() || l.node(l.top()).order() != m.order() {
        problem = Some(json!("lattice lacks 0 or M"));
    }
    let oracle = match all_submodules(m, caps) {
        Ok(all) => {
            let filtered: Vec<_> = all.into_iter().filter(|s| s.is_coaction_closed(m)).collect();
            let agrees = filtered.len() == l.len() && filtered.iter().all(|s| l.index_of(s).is_some());
            if !agrees {
                problem = Some(json!("lattice differs from the filtered submodule lattice"));
            }
            json!(agrees)
        }
        Err(_) => json!("skipped (cap)"),
    };
    let sizes: Vec<[u128; 2]> = l.size_profile().into_iter().map(|(k, v)| [k, v as u128]).collect();
    let summary = json!({
        "nodes": l.len(),
        "atoms": l.atoms().len(),
        "sizes": sizes,
        "matches_submodule_filter": oracle,
    });
    let nodes: Vec<Value> = annotate(l)
        .into_iter()
        .map(|a| json!({ "node": l.node(a.node), "annotation": a }))
        .collect();
    CheckResult::decide("lattice", summary, problem).with_witnesses(Value::Array(nodes))
}

fn continuity_check(a: &Analysis) -> CheckResult {
    let c = &a.continuity;
    let nodes = |v: &Option<Vec<usize>>| {
        v.as_ref()
            .map(|v| v.iter().map(|&i| a.node_json(i)).collect::<Vec<_>>())
    };
    let summary = json!({
        "cm1": c.cm1.holds,
        "cm2": c.cm2.holds,
        "cm3": c.cm3.holds,
        "cs": c.cs,
        "continuous": c.continuous,
        "quasi_continuous": c.quasi_continuous,
        "semisimple": c.semisimple.holds,
    });
    let counterexamples = json!({
        "cm1": nodes(&c.cm1.counterexample),
        "cm2": nodes(&c.cm2.counterexample),
        "cm3": nodes(&c.cm3.counterexample),
        "semisimple": nodes(&c.semisimple.counterexample),
    });
    let consistent = !c.semisimple.holds || (c.cm1.holds && c.cm2.holds && c.cm3.holds);
    let r = CheckResult::decide(
        "continuity",
        summary,
        (!consistent).then(|| json!("semisimple without CM1, CM2 and CM3")),
    );
    r.with_witnesses(counterexamples)
}

fn alpha_check(m: &Comodule, caps: &Caps) -> Result<CheckResult> {
    let mut exhaustive = 0;
    let elements = m.elements(caps)?;
    for x in &elements {
        let r = alpha_star_check(m, x, caps)?;
        if r.exhaustive.is_some() {
            exhaustive += 1;
        }
        if !r.injective || r.exhaustive == Some(false) {
            return Ok(CheckResult::fail(
                "alpha",
                json!({ "elements": elements.len() }),
                serde_json::to_value(&r).expect("serializable"),
            ));
        }
    }
    Ok(CheckResult::pass(
        "alpha",
        json!({ "elements": elements.len(), "exhaustively_confirmed": exhaustive, "injective": true }),
    ))
}

fn annihilator_check(m: &Comodule, caps: &Caps) -> Result<CheckResult> {
    let r = annihilator_condition(m, caps)?;
    Ok(CheckResult::pass(
        "annihilator",
        serde_json::to_value(&r).expect("serializable"),
    ))
}

/// Validates first; stops there when validation fails or is the only
/// selection. A cap overrun in one check does not stop the others.
pub fn run_checks(inst: &Instance, selection: &[CheckKind], opts: &Options) -> Report {
    let mut checks = Vec::new();
    let (validation, objects) = validate_check(inst, opts);
    checks.extend(validation);
    let want = |k: CheckKind| selection.contains(&k);
    if let Some((c, comodules)) = objects {
        if want(CheckKind::Dual) {
            checks.push(timed(opts, || dual_check(&c)));
        }
        for (name, m) in &comodules {
            let mut local = Vec::new();
            run_comodule(m, selection, opts, &mut local);
            for mut check in local {
                check.comodule = Some(name.clone());
                checks.push(check);
            }
        }
    }
    let info = InstanceInfo {
        digest: inst.digest(),
        modulus: inst.ring.modulus(),
        coalgebra_rank: inst.coalgebra.rank,
        comodules: inst
            .comodules
            .iter()
            .map(|m| ComoduleInfo {
                name: m.name.clone(),
                rank: m.data.rank,
                relations: m.data.relations.rows(),
            })
            .collect(),
    };
    Report {
        tool: TOOL,
        version: VERSION,
        instance: info,
        caps: opts.caps,
        checks,
    }
}

fn run_comodule(m: &Comodule, selection: &[CheckKind], opts: &Options, out: &mut Vec<CheckResult>) {
    let caps = &opts.caps;
    let want = |k: CheckKind| selection.contains(&k);
    let mut end = None;
    if want(CheckKind::Endo) || want(CheckKind::Clean) {
        let mut endo = Err(Error::Precondition(String::new()));
        let check = timed(opts, || match endo_check(m, caps) {
            Ok((c, e)) => {
                endo = Ok(e);
                c
            }
            Err(e) => {
                let c = CheckResult::from_error("endo", &e);
                endo = Err(e);
                c
            }
        });
        if want(CheckKind::Endo) {
            out.push(check);
        }
        end = endo.ok();
    }
    if want(CheckKind::Clean) {
        out.push(timed(opts, || match &end {
            Some(e) => clean_check(e),
            None => or_error("clean", end_ring(m, caps).map(|e| clean_check(&e))),
        }));
    }
    if want(CheckKind::Lattice) {
        out.push(timed(opts, || {
            or_error(
                "lattice",
                subcomodule_lattice(m, caps).map(|l| lattice_check(m, &l, caps)),
            )
        }));
    }
    if want(CheckKind::Continuity) || want(CheckKind::Theorems) {
        let start = Instant::now();
        match Analysis::new(m, caps) {
            Ok(a) => {
                if want(CheckKind::Continuity) {
                    out.push(timed(opts, || continuity_check(&a)));
                }
                if want(CheckKind::Theorems) {
                    for c in theorem_bundle(&a) {
                        out.push(timed(opts, || c));
                    }
                }
            }
            Err(e) => {
                let names: Vec<&str> = [CheckKind::Continuity, CheckKind::Theorems]
                    .into_iter()
                    .filter(|&k| want(k))
                    .map(CheckKind::name)
                    .collect();
                for name in names {
                    let mut c = CheckResult::from_error(name, &e);
                    if opts.timing {
                        c.millis = Some(start.elapsed().as_millis() as u64);
                    }
                    out.push(c);
                }
            }
        }
    }
    if want(CheckKind::Alpha) {
        out.push(timed(opts, || or_error("alpha", alpha_check(m, caps))));
    }
    if want(CheckKind::Annihilator) {
        out.push(timed(opts, || or_error("annihilator", annihilator_check(m, caps))));
    }
}
