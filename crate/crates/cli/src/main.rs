//! `comod`: run exact checks on finite coalgebras and comodules over Z/n.
//!
//! Exit codes: 0 all selected checks pass, 1 a check failed, 2 the input
//! could not be read or parsed, 3 a size cap was exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use comod_core::check::{CheckResult, Verdict};
use comod_core::error::Caps;
use comod_core::fuzz::{fuzz, CoalgebraKind, FuzzConfig, FuzzReport, Strategy};
use comod_core::instance::{parse_instance, serialize, Instance};
use comod_core::report::{check_line, run_checks, CheckKind, Options, Report};
use comod_core::shift::{shift_check, ShiftSpace};
use serde_json::json;

#[derive(Parser)]
#[command(name = "comod", version, about = "Exact checks for finite comodules over Z/n")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Largest module, ring or lattice enumerated element by element.
    #[arg(long, default_value_t = comod_core::error::DEFAULT_MAX_ELEMENTS, global = true)]
    max_elements: usize,
    /// Seed for `fuzz` and `shift`.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Include witnesses (decompositions, bases, annotations) in the report.
    #[arg(long, global = true)]
    witnesses: bool,
    /// Omit per-check timings, making reports byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Only run per-comodule checks on this comodule.
    #[arg(long, global = true)]
    comodule: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the coalgebra and comodule axioms.
    Validate { file: PathBuf },
    /// Verify the dual convolution algebra.
    Dual { file: PathBuf },
    /// Compute End^C(M) and cross-check both solvers.
    Endo { file: PathBuf },
    /// Decide cleanness of End^C(M) with witnesses.
    Clean { file: PathBuf },
    /// Enumerate the subcomodule lattice.
    Lattice { file: PathBuf },
    /// Classify CM1, CM2, CM3, continuity and semisimplicity.
    Continuity { file: PathBuf },
    /// Run the theorem bundle.
    Theorems { file: PathBuf },
    /// Check injectivity of the evaluation map on every quotient by a cyclic subcomodule.
    Alpha { file: PathBuf },
    /// Report annihilators of elements as left ideals of the dual algebra.
    Annihilator { file: PathBuf },
    /// Run several checks at once (default: all).
    Check {
        file: PathBuf,
        /// Comma-separated check names.
        #[arg(long, value_delimiter = ',')]
        select: Vec<String>,
    },
    /// Print the canonical form of an instance file.
    Fmt { file: PathBuf },
    /// Check the shift-space identities on random finitely supported sequences.
    Shift {
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Generate random comodules and run the theorem bundle on each.
    Fuzz {
        #[arg(long, default_value_t = 2)]
        modulus: u64,
        /// trivial, grouplike:<g>, matrix:<k>, divided-power:<d> or chain:<len>.
        #[arg(long, default_value = "grouplike:2")]
        kind: String,
        /// sub:<k> (subcomodule of C^k) or quot:<k> (quotient of C^k).
        #[arg(long, default_value = "sub:1")]
        strategy: String,
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Write minimized counterexamples into this directory.
        #[arg(long)]
        dump_dir: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<Instance, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(2)
    })?;
    parse_instance(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(2)
    })
}

fn emit(global: &Global, report: &Report) -> ExitCode {
    match global.format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    ExitCode::from(report.exit_code() as u8)
}

fn options(global: &Global) -> Options {
    Options {
        caps: Caps::new(global.max_elements),
        witnesses: global.witnesses,
        timing: !global.no_timing,
        comodule: global.comodule.clone(),
    }
}

fn run_selection(global: &Global, file: &Path, selection: &[CheckKind]) -> ExitCode {
    let inst = match load(file) {
        Ok(i) => i,
        Err(code) => return code,
    };
    if let Some(name) = &global.comodule {
        if inst.comodule_index(name).is_none() {
            eprintln!("error: {}: no comodule named `{name}`", file.display());
            return ExitCode::from(2);
        }
    }
    let mut all = vec![CheckKind::Validate];
    all.extend(selection.iter().copied().filter(|&k| k != CheckKind::Validate));
    emit(global, &run_checks(&inst, &all, &options(global)))
}

fn run_shift(global: &Global, file: &Path, trials: usize) -> ExitCode {
    let inst = match load(file) {
        Ok(i) => i,
        Err(code) => return code,
    };
    let opts = options(global);
    let mut report = run_checks(&inst, &[CheckKind::Validate], &opts);
    if report.exit_code() == 0 {
        let c = inst.coalgebra().expect("validated");
        for (i, nm) in inst.comodules.iter().enumerate() {
            if opts.comodule.as_ref().is_some_and(|n| n != &nm.name) {
                continue;
            }
            let m = inst.comodule(&c, i).expect("validated");
            let start = std::time::Instant::now();
            let r = shift_check(&ShiftSpace::new(&m), trials, global.seed);
            let summary = json!({ "trials": r.trials, "seed": r.seed, "failures": r.failures });
            let mut check = match &r.first_failure {
                None => CheckResult::pass("shift", summary),
                Some((x, why)) => CheckResult::fail("shift", summary, json!({ "sequence": x, "identity": why })),
            };
            check.comodule = Some(nm.name.clone());
            if opts.timing {
                check.millis = Some(start.elapsed().as_millis() as u64);
            }
            report.checks.push(check);
        }
    }
    emit(global, &report)
}

fn print_fuzz(global: &Global, r: &FuzzReport) {
    if global.format == Format::Json {
        println!("{}", serde_json::to_string_pretty(r).expect("serializable"));
        return;
    }
    for case in &r.cases {
        let verdict = if case.failed() {
            Verdict::Fail
        } else if case.cap.is_some() {
            Verdict::CapExceeded
        } else {
            Verdict::Pass
        };
        let failing: Vec<&str> = case
            .verdicts
            .iter()
            .filter(|(_, v)| *v == Verdict::Fail)
            .map(|(n, _)| n.as_str())
            .collect();
        print!(
            "{}",
            check_line(&CheckResult {
                name: format!("case {}", case.index),
                comodule: None,
                verdict,
                reason: case.cap.clone(),
                summary: json!({ "order": case.order, "rank": case.rank, "hypotheses": case.hypotheses, "failing": failing }),
                counterexample: case.counterexample.clone().map(serde_json::Value::String),
                witnesses: None,
                millis: None,
            })
        );
    }
    println!(
        "{} cases: {} passed, {} failed, {} over the cap, {} meet the clean hypotheses",
        r.cases.len(),
        r.passed,
        r.failed,
        r.cap_exceeded,
        r.hypotheses_met
    );
}

fn run_fuzz(global: &Global, modulus: u64, kind: &str, strategy: &str, count: usize, dump: Option<&Path>) -> ExitCode {
    let parsed = kind
        .parse::<CoalgebraKind>()
        .and_then(|k| strategy.parse::<Strategy>().map(|s| (k, s)));
    let (kind, strategy) = match parsed {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let config = FuzzConfig {
        modulus,
        kind,
        strategy,
        count,
        seed: global.seed,
    };
    let report = match fuzz(&config, &Caps::new(global.max_elements)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if e.is_cap_exceeded() { 3 } else { 2 });
        }
    };
    if let Some(dir) = dump {
        for case in &report.cases {
            if let Some(text) = &case.counterexample {
                let path = dir.join(format!("counterexample-{}.comod", case.index));
                if let Err(e) = std::fs::create_dir_all(dir).and_then(|_| std::fs::write(&path, text)) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                }
            }
        }
    }
    print_fuzz(global, &report);
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let single = |file: &PathBuf, k: CheckKind| run_selection(g, file, &[k]);
    match &cli.command {
        Command::Validate { file } => single(file, CheckKind::Validate),
        Command::Dual { file } => single(file, CheckKind::Dual),
        Command::Endo { file } => single(file, CheckKind::Endo),
        Command::Clean { file } => single(file, CheckKind::Clean),
        Command::Lattice { file } => single(file, CheckKind::Lattice),
        Command::Continuity { file } => single(file, CheckKind::Continuity),
        Command::Theorems { file } => single(file, CheckKind::Theorems),
        Command::Alpha { file } => single(file, CheckKind::Alpha),
        Command::Annihilator { file } => single(file, CheckKind::Annihilator),
        Command::Check { file, select } => {
            let selection: Result<Vec<CheckKind>, String> = select.iter().map(|s| s.parse()).collect();
            match selection {
                Ok(s) if s.is_empty() => run_selection(g, file, &CheckKind::ALL),
                Ok(s) => run_selection(g, file, &s),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Command::Fmt { file } => match load(file) {
            Ok(inst) => {
                print!("{}", serialize(&inst));
                ExitCode::SUCCESS
            }
            Err(code) => code,
        },
        Command::Shift { file, trials } => run_shift(g, file, *trials),
        Command::Fuzz {
            modulus,
            kind,
            strategy,
            count,
            dump_dir,
        } => run_fuzz(g, *modulus, kind, strategy, *count, dump_dir.as_deref()),
    }
}
