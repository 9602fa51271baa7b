//! Acceptance suite: one PASS/FAIL line per criterion, each with a pinned
//! time limit. Exits nonzero when any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use common::{brute_end, coalgebras, free_catalog, fuzz_corpus, z, Case};
use comod_core::alpha::alpha_star_check;
use comod_core::check::Verdict;
use comod_core::clean::{clean_ring, decomposition_equivalence, idempotents};
use comod_core::continuity::{closed_complement, closed_pair, closures, essential_transitivity};
use comod_core::fuzz::{generate, CoalgebraKind, FuzzConfig, Strategy};
use comod_core::instance::{parse_instance, serialize};
use comod_core::shift::{shift_check, ShiftSpace};
use comod_core::theorems::{idempotent_extension_check, xi_checks, Analysis};
use comod_core::{dual_algebra, end_ring, subcomodule_lattice, Caps, Coalgebra, Comodule};

type Outcome = Result<String, String>;

/// Name, time limit in seconds, and the check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn instances_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../instances")
}

fn shipped_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(instances_dir())
        .expect("instances directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "comod"))
        .collect();
    files.sort();
    files
}

/// Every comodule of every shipped file that satisfies the axioms.
fn shipped_cases() -> Vec<Case> {
    let mut out = Vec::new();
    for path in shipped_files() {
        let inst = parse_instance(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let Ok(c) = inst.coalgebra() else { continue };
        for (i, nm) in inst.comodules.iter().enumerate() {
            if let Ok(m) = inst.comodule(&c, i) {
                let file = path.file_name().unwrap().to_string_lossy();
                out.push(Case {
                    name: format!("{file}:{}", nm.name),
                    m,
                });
            }
        }
    }
    out
}

fn corpus() -> Vec<Case> {
    let mut out = free_catalog();
    out.extend(shipped_cases());
    out.extend(fuzz_corpus(8, 1000));
    out
}

/// Fuzz instances across coalgebra kinds, strategies and moduli.
fn fuzz_stream(seed: u64) -> impl Iterator<Item = Case> {
    let configs = [
        (2, CoalgebraKind::Grouplike(2), Strategy::Subcomodule(2)),
        (2, CoalgebraKind::Matrix(2), Strategy::Subcomodule(1)),
        (2, CoalgebraKind::Grouplike(3), Strategy::Quotient(2)),
        (3, CoalgebraKind::Matrix(2), Strategy::Quotient(1)),
        (3, CoalgebraKind::DividedPower(2), Strategy::Quotient(2)),
        (4, CoalgebraKind::Trivial, Strategy::Quotient(3)),
        (2, CoalgebraKind::ChainIncidence(2), Strategy::Quotient(2)),
        (3, CoalgebraKind::Grouplike(2), Strategy::Subcomodule(2)),
        (4, CoalgebraKind::Grouplike(2), Strategy::Quotient(1)),
        (2, CoalgebraKind::DividedPower(3), Strategy::Subcomodule(1)),
    ];
    (0..).flat_map(move |i| {
        configs
            .into_iter()
            .enumerate()
            .map(move |(j, (modulus, kind, strategy))| {
                let config = FuzzConfig {
                    modulus,
                    kind,
                    strategy,
                    count: 0,
                    seed: seed + j as u64,
                };
                Case {
                    name: format!("{kind:?}/{strategy:?}/Z{modulus}#{i}"),
                    m: generate(&config, i).unwrap().comodule,
                }
            })
    })
}

fn dual_algebra_tables() -> Outcome {
    let mut algebras = 0;
    for n in [2, 3] {
        let ring = z(n);
        let mut list = vec![Coalgebra::trivial(ring), Coalgebra::matrix(ring, 2)];
        list.extend((1..=3).map(|g| Coalgebra::grouplike(ring, g)));
        for c in &list {
            let d = dual_algebra(c);
            let report = d.verify();
            ensure(report.passed(), || format!("Z/{n} rank {}: {report:?}", c.rank()))?;
            // Associativity and unit on all elements, not only basis triples.
            let elements = d.elements(&Caps::new(1 << 10)).unwrap();
            for a in &elements {
                ensure(d.product(d.unit(), a) == *a && d.product(a, d.unit()) == *a, || {
                    format!("unit on {a:?}")
                })?;
                for b in &elements {
                    let ab = d.product(a, b);
                    for c3 in &elements {
                        ensure(d.product(&ab, c3) == d.product(a, &d.product(b, c3)), || {
                            format!("({a:?}{b:?}){c3:?}")
                        })?;
                    }
                }
            }
            algebras += 1;
        }
        for g in 1..=3 {
            let d = dual_algebra(&Coalgebra::grouplike(ring, g));
            for i in 0..g {
                for j in 0..g {
                    let want = if i == j { d.basis(i) } else { vec![0; g] };
                    ensure(d.product(&d.basis(i), &d.basis(j)) == want, || {
                        format!("grouplike {g}: f{i}*f{j}")
                    })?;
                }
            }
        }
        let d = dual_algebra(&Coalgebra::matrix(ring, 2));
        let unit = |i: usize, j: usize| d.basis(i * 2 + j);
        for t in 0..16 {
            let (i, j, k, l) = (t / 8, (t / 4) % 2, (t / 2) % 2, t % 2);
            let want = if j == k { unit(i, l) } else { vec![0; 4] };
            ensure(d.product(&unit(i, j), &unit(k, l)) == want, || {
                format!("e*{i}{j} * e*{k}{l}")
            })?;
        }
    }
    Ok(format!("{algebras} algebras, all elements"))
}

fn endomorphisms_match_oracle() -> Outcome {
    let caps = Caps::new(1 << 20);
    let (mut compared, mut slowest) = (0, Duration::ZERO);
    for case in corpus() {
        if case.m.order() > 256 {
            continue;
        }
        let start = Instant::now();
        let oracle = brute_end(&case.m, 1 << 26).ok_or_else(|| format!("{}: oracle budget", case.name))?;
        let end = end_ring(&case.m, &caps).map_err(|e| format!("{}: {e}", case.name))?;
        let solved: std::collections::BTreeSet<Vec<Vec<u64>>> = end
            .elements()
            .iter()
            .map(|x| (0..x.cols()).map(|j| x.col_vec(j)).collect())
            .collect();
        ensure(solved == oracle, || {
            format!("{}: solver {} maps, oracle {}", case.name, solved.len(), oracle.len())
        })?;
        let took = start.elapsed();
        ensure(took < Duration::from_secs(10), || format!("{}: {took:?}", case.name))?;
        slowest = slowest.max(took);
        compared += 1;
    }
    Ok(format!(
        "{compared} instances with |M| <= 256, slowest {:.2}s",
        slowest.as_secs_f64()
    ))
}

fn clean_decomposition_equivalence() -> Outcome {
    let caps = Caps::default();
    let (mut instances, mut elements, mut moduli) = (0, 0, std::collections::BTreeSet::new());
    for case in free_catalog().into_iter().chain(fuzz_corpus(6, 2000)) {
        if case.m.rank() > 3 {
            continue;
        }
        let Ok(end) = end_ring(&case.m, &caps) else { continue };
        let lattice = subcomodule_lattice(&case.m, &caps).map_err(|e| format!("{}: {e}", case.name))?;
        let ids = idempotents(&end);
        for f in end.elements() {
            let r = decomposition_equivalence(&end, &lattice, &ids, f);
            ensure(r.consistent, || format!("{}: f = {f:?}: {:?}", case.name, r.problem))?;
            if let Some(w) = &r.by_idempotent {
                w.verify(&end).map_err(|why| format!("{}: {why}", case.name))?;
            }
            elements += 1;
        }
        moduli.insert(case.m.ring().modulus());
        instances += 1;
    }
    ensure(instances >= 20, || format!("only {instances} instances"))?;
    ensure(moduli.len() == 3, || format!("moduli {moduli:?}"))?;
    Ok(format!(
        "{instances} instances, {elements} elements, zero discrepancies"
    ))
}

fn finite_ring_cleanness() -> Outcome {
    let caps = Caps::default();
    let (mut done, mut witnesses) = (0, 0);
    for case in fuzz_stream(4000) {
        if done == 100 {
            break;
        }
        let Ok(end) = end_ring(&case.m, &caps) else { continue };
        let report = clean_ring(&end);
        ensure(report.clean, || format!("{}: not clean", case.name))?;
        ensure(report.invalid_witnesses.is_empty(), || {
            format!("{}: {:?}", case.name, report.invalid_witnesses)
        })?;
        for entry in &report.entries {
            let w = entry
                .witness
                .as_ref()
                .ok_or_else(|| format!("{}: missing witness", case.name))?;
            w.verify(&end).map_err(|why| format!("{}: {why}", case.name))?;
            witnesses += 1;
        }
        done += 1;
    }
    Ok(format!("{done} instances clean, {witnesses} witnesses verified"))
}

fn lattice_properties() -> Outcome {
    let caps = Caps::default();
    let (mut lattices, mut chains, mut complements) = (0, 0u64, 0);
    for case in corpus() {
        let Ok(l) = subcomodule_lattice(&case.m, &caps) else {
            continue;
        };
        let t = essential_transitivity(&l);
        ensure(t.violation.is_none(), || {
            format!("{}: transitivity fails at {:?}", case.name, t.violation)
        })?;
        chains += t.chains;
        for n in 0..l.len() {
            ensure(!closures(&l, n).is_empty(), || {
                format!("{}: node {n} has no closure", case.name)
            })?;
        }
        // Every pair for small lattices, every g against 0 otherwise.
        let ns: Vec<usize> = if l.len() <= 64 {
            (0..l.len()).collect()
        } else {
            vec![l.bottom()]
        };
        for g in 0..l.len() {
            for &n in &ns {
                if !l.disjoint(g, n) {
                    continue;
                }
                let c = closed_complement(&l, g, n).map_err(|e| e.to_string())?;
                ensure(c.holds(), || {
                    format!("{}: closed complement of {g} over {n}: {c:?}", case.name)
                })?;
                let p = closed_pair(&l, g, n).map_err(|e| e.to_string())?;
                ensure(p.holds(), || format!("{}: closed pair {g}, {n}: {p:?}", case.name))?;
                complements += 1;
            }
        }
        lattices += 1;
    }
    Ok(format!(
        "{lattices} lattices, {chains} chains, {complements} complements"
    ))
}

fn continuous_implies_clean() -> Outcome {
    let caps = Caps::default();
    let (mut seen, mut hypotheses, mut xi) = (0, 0, 0);
    let cases = corpus().into_iter().chain(fuzz_stream(6000).take(300));
    for case in cases {
        let Ok(a) = Analysis::new(&case.m, &caps) else { continue };
        seen += 1;
        if !a.clean_hypotheses() {
            continue;
        }
        hypotheses += 1;
        let report = clean_ring(&a.end);
        ensure(report.clean && report.invalid_witnesses.is_empty(), || {
            format!("{}: not clean", case.name)
        })?;
        if a.end.len() <= 256 {
            let (maximal, _, _) = xi_checks(&a);
            ensure(maximal.verdict == Verdict::Pass, || {
                format!(
                    "{}: xi maximality {}: {:?}",
                    case.name, maximal.verdict, maximal.counterexample
                )
            })?;
            xi += 1;
        }
    }
    ensure(hypotheses >= 20, || {
        format!("only {hypotheses} instances meet the hypotheses")
    })?;
    Ok(format!(
        "{hypotheses} of {seen} instances meet the hypotheses, {xi} xi posets checked"
    ))
}

fn idempotents_extend() -> Outcome {
    let caps = Caps::default();
    let (mut quasi, mut seen) = (0, 0);
    for case in corpus().into_iter().chain(fuzz_stream(7000).take(150)) {
        let Ok(a) = Analysis::new(&case.m, &caps) else { continue };
        seen += 1;
        if !a.continuity.quasi_continuous {
            continue;
        }
        let r = idempotent_extension_check(&a).map_err(|e| format!("{}: {e}", case.name))?;
        ensure(r.verdict == Verdict::Pass, || {
            format!("{}: {}: {:?}", case.name, r.verdict, r.counterexample)
        })?;
        quasi += 1;
    }
    ensure(quasi >= 10, || format!("only {quasi} quasi-continuous instances"))?;
    Ok(format!(
        "{quasi} of {seen} instances quasi-continuous, all idempotents extend"
    ))
}

fn shift_identities_hold() -> Outcome {
    let mut components: Vec<Case> = Vec::new();
    for n in [2, 3] {
        for (name, c) in coalgebras(n) {
            components.push(Case {
                name,
                m: Comodule::free(&c, 1),
            });
        }
    }
    components.extend(shipped_cases());
    for (seed, case) in components.iter().enumerate() {
        let r = shift_check(&ShiftSpace::new(&case.m), 1000, seed as u64);
        ensure(r.failures == 0, || format!("{}: {:?}", case.name, r.first_failure))?;
    }
    Ok(format!("{} components x 1000 sequences", components.len()))
}

fn evaluation_injective() -> Outcome {
    let caps = Caps::default();
    let (mut instances, mut elements) = (0, 0);
    for case in free_catalog() {
        let Ok(xs) = case.m.elements(&caps) else { continue };
        for x in xs {
            let r = alpha_star_check(&case.m, &x, &caps).map_err(|e| format!("{}: {e}", case.name))?;
            ensure(r.injective && r.exhaustive != Some(false), || {
                format!("{}: x = {x:?}: {r:?}", case.name)
            })?;
            elements += 1;
        }
        instances += 1;
    }
    Ok(format!("{instances} free instances, {elements} elements"))
}

fn comod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_comod"))
        .args(args)
        .output()
        .expect("run comod")
}

fn cli_contract() -> Outcome {
    let mut files = 0;
    for path in shipped_files() {
        let p = path.to_str().unwrap();
        let original = parse_instance(&std::fs::read_to_string(&path).unwrap()).map_err(|e| format!("{p}: {e}"))?;
        let out = comod(&["fmt", p]);
        ensure(out.status.code() == Some(0), || format!("fmt {p}: {:?}", out.status))?;
        let text = String::from_utf8(out.stdout).unwrap();
        let reparsed = parse_instance(&text).map_err(|e| format!("{p} after fmt: {e}"))?;
        ensure(reparsed == original, || format!("{p}: parse(serialize(x)) != x"))?;
        ensure(serialize(&reparsed) == text, || format!("{p}: serialize is not stable"))?;
        files += 1;
    }
    let dir = instances_dir();
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let path = |d: &Path, f: &str| d.join(f).to_str().unwrap().to_string();
    let graded = path(&dir, "graded_z2.comod");
    let codes: [(Vec<String>, i32); 5] = [
        (vec!["check".into(), graded.clone()], 0),
        (vec!["validate".into(), path(&dir, "counit_broken.comod")], 1),
        (vec!["check".into(), path(&data, "truncated.comod")], 2),
        (vec!["check".into(), path(&dir, "no_such_file.comod")], 2),
        (
            vec!["endo".into(), graded.clone(), "--max-elements".into(), "2".into()],
            3,
        ),
    ];
    for (args, want) in &codes {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let got = comod(&args).status.code();
        ensure(got == Some(*want), || format!("{args:?}: exit {got:?}, want {want}"))?;
    }
    let runs: [&[&str]; 3] = [
        &[
            "check",
            &graded,
            "--format",
            "json",
            "--no-timing",
            "--witnesses",
            "--seed",
            "7",
        ],
        &[
            "shift",
            &graded,
            "--format",
            "json",
            "--no-timing",
            "--seed",
            "7",
            "--trials",
            "200",
        ],
        &[
            "fuzz",
            "--modulus",
            "2",
            "--kind",
            "grouplike:2",
            "--count",
            "6",
            "--seed",
            "7",
            "--format",
            "json",
        ],
    ];
    for args in runs {
        let (a, b) = (comod(args), comod(args));
        ensure(a.status.code() == Some(0), || format!("{args:?}: {:?}", a.status))?;
        ensure(a.stdout == b.stdout, || {
            format!("{args:?}: reports differ between runs")
        })?;
    }
    Ok(format!(
        "{files} files round-trip, exit codes 0/1/2/3, reports byte-identical"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("dual algebra tables", 1, dual_algebra_tables),
        ("End^C(M) against brute force", 120, endomorphisms_match_oracle),
        (
            "clean element iff adapted decomposition",
            60,
            clean_decomposition_equivalence,
        ),
        ("finite endomorphism rings are clean", 300, finite_ring_cleanness),
        (
            "essential transitivity, closures, closed complements",
            60,
            lattice_properties,
        ),
        (
            "continuous comodules are clean; xi maximality",
            300,
            continuous_implies_clean,
        ),
        ("quasi-continuous idempotent extension", 60, idempotents_extend),
        ("shift space identities", 10, shift_identities_hold),
        ("evaluation map injective on free comodules", 30, evaluation_injective),
        ("CLI round-trip, exit codes, determinism", 5, cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let result = result.and_then(|detail| {
            if secs <= limit as f64 {
                Ok(detail)
            } else {
                Err(format!("{detail}; over the {limit}s limit"))
            }
        });
        let (verdict, detail) = match result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{verdict} {:>2} {name}: {detail} [{secs:.2}s / {limit}s]", i + 1);
    }
    if failed > 0 {
        println!("{failed} of 10 criteria failed");
        std::process::exit(1);
    }
}
