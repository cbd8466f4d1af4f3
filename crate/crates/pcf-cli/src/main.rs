//! `pcf`: command-line front end for the pcf-core model.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 divergence or budget
//! exhaustion, 3 check failure. With `--report json-lines` every check
//! emits one JSON record on stdout; reports are byte-identical for
//! identical argv and seed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pcf_core::arena::Arena;
use pcf_core::axioms::{check_axiom, Axiom};
use pcf_core::decompose::{decompose, recompose, Decomposition};
use pcf_core::denote::{adequacy_check, Denoter};
use pcf_core::error::Error;
use pcf_core::eval::{evaluate, Outcome};
use pcf_core::evaltree::{approximant, extract_term, tree_of_strategy};
use pcf_core::fullabs::coherence_check;
use pcf_core::parse::{parse_term, parse_type};
use pcf_core::serialize::{read_strategy, write_strategy};
use pcf_core::stlc::check_full_completeness;
use pcf_core::strategy::Strategy;
use pcf_core::syntax::{typecheck, Ctx, Term};

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_BOUNDS: i32 = 2;
const EXIT_CHECK: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportMode {
    Text,
    JsonLines,
}

#[derive(Parser)]
#[command(name = "pcf", version, about = "Sequential-strategy model of PCF")]
struct Cli {
    /// Output format: human text or one JSON record per check
    #[arg(long, global = true, value_enum, default_value_t = ReportMode::Text)]
    report: ReportMode,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ModelFlags {
    /// Size of the base-type window (values 0..window)
    #[arg(long, default_value_t = 4)]
    window: u32,
    /// Fixpoint unrolling depth for denotation
    #[arg(long, default_value_t = 16)]
    unroll: u32,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a closed program of type nat
    Run {
        file: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        fuel: u64,
    },
    /// Print the denotation of a term as a strategy file
    Denote {
        file: PathBuf,
        #[command(flatten)]
        model: ModelFlags,
    },
    /// Print the evaluation tree of a term or strategy
    Tree {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[command(flatten)]
        model: ModelFlags,
    },
    /// Print the k-th approximant of a term or strategy
    Approx {
        file: PathBuf,
        #[arg(short, long, default_value_t = 4)]
        k: u32,
        #[command(flatten)]
        model: ModelFlags,
    },
    /// Extract a defining term from a strategy (or a term's denotation)
    Extract {
        file: PathBuf,
        #[command(flatten)]
        model: ModelFlags,
    },
    /// Show the head decomposition of a strategy and verify recomposition
    Decompose {
        file: PathBuf,
        #[command(flatten)]
        model: ModelFlags,
    },
    /// Compare two closed terms along the intrinsic and operational routes
    Compare {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long, default_value_t = 5)]
        norm_bound: usize,
        #[arg(long, default_value_t = 100_000)]
        fuel: u64,
        #[command(flatten)]
        model: ModelFlags,
    },
    /// Run the structural axiom suites
    Axioms {
        /// A1..A5, or "all"
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        /// Random seed (PCF_SEED overrides)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        window: u32,
    },
    /// Pure simply-typed fragment checks
    Stlc {
        #[command(subcommand)]
        cmd: StlcCmd,
    },
    /// Run the adequacy corpus against its manifest
    Corpus {
        #[arg(default_value = "corpus/adequacy")]
        dir: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        fuel: u64,
        #[arg(long, default_value_t = 4)]
        window: u32,
        #[arg(long, default_value_t = 32)]
        k_max: u32,
    },
}

#[derive(Subcommand)]
enum StlcCmd {
    /// Check the bounded normal-form/strategy bijection at a pure type
    Check {
        #[arg(long = "type")]
        ty: String,
        /// Normal-form size bound (AST nodes)
        #[arg(long, default_value_t = 9)]
        size: usize,
        /// Strategy norm bound (view-function entries)
        #[arg(long, default_value_t = 5)]
        norm: usize,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version on stdout with success; usage errors
            // go to stderr with exit 1
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            exit_for(&e)
        }
    };
    std::process::exit(code);
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::InteractionBudget(_) | Error::StrategyBudget(_) => EXIT_BOUNDS,
        _ => EXIT_USAGE,
    }
}

type R = pcf_core::error::Result<i32>;

fn dispatch(cli: &Cli) -> R {
    match &cli.cmd {
        Cmd::Run { file, fuel } => run_cmd(cli.report, file, *fuel),
        Cmd::Denote { file, model } => denote_cmd(cli.report, file, model),
        Cmd::Tree { file, depth, model } => tree_cmd(cli.report, file, *depth, model),
        Cmd::Approx { file, k, model } => approx_cmd(cli.report, file, *k, model),
        Cmd::Extract { file, model } => extract_cmd(cli.report, file, model),
        Cmd::Decompose { file, model } => decompose_cmd(cli.report, file, model),
        Cmd::Compare { file1, file2, norm_bound, fuel, model } => {
            compare_cmd(cli.report, file1, file2, *norm_bound, *fuel, model)
        }
        Cmd::Axioms { suite, cases, seed, window } => {
            axioms_cmd(cli.report, suite, *cases, *seed, *window)
        }
        Cmd::Stlc { cmd: StlcCmd::Check { ty, size, norm } } => {
            stlc_cmd(cli.report, ty, *size, *norm)
        }
        Cmd::Corpus { dir, fuel, window, k_max } => {
            corpus_cmd(cli.report, dir, *fuel, *window, *k_max)
        }
    }
}

fn read_file(path: &Path) -> pcf_core::error::Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Other(format!("cannot read {}: {}", path.display(), e)))
}

/// An input file holds either a strategy (recognized by its header) or a
/// term.
enum Input {
    Term(Term),
    Strategy(Strategy),
}

fn load_input(path: &Path) -> pcf_core::error::Result<Input> {
    let text = read_file(path)?;
    if text.trim_start().starts_with("pcf-strategy") {
        Ok(Input::Strategy(read_strategy(&text)?))
    } else {
        Ok(Input::Term(parse_term(&text)?))
    }
}

/// Re-splits a closed point `1 -> [[T]]` to canonical shape.
fn canonical(point: &Strategy) -> pcf_core::error::Result<Strategy> {
    let root = &point.cod().roots[0];
    let dom = Arena::product(
        root.children.iter().map(|c| Arena { roots: vec![c.clone()] }),
    );
    point.resplit(dom, Arena::flat(root.answers))
}

fn load_canonical(path: &Path, model: &ModelFlags) -> pcf_core::error::Result<Strategy> {
    match load_input(path)? {
        Input::Strategy(s) => Ok(s),
        Input::Term(m) => {
            typecheck(&Ctx::empty(), &m)?;
            let d = Denoter::new(model.window, model.unroll).denote_closed(&m)?;
            canonical(&d)
        }
    }
}

fn seed_from_env(flag: u64) -> u64 {
    match std::env::var("PCF_SEED") {
        Ok(s) => s.parse().unwrap_or(flag),
        Err(_) => flag,
    }
}

fn emit<T: Serialize>(mode: ReportMode, record: &T, text: &str) {
    match mode {
        ReportMode::Text => println!("{}", text),
        ReportMode::JsonLines => {
            println!("{}", serde_json::to_string(record).expect("serializable record"))
        }
    }
}

// ---------------------------------------------------------------------

#[derive(Serialize)]
struct RunRecord<'a> {
    command: &'a str,
    file: String,
    fuel: u64,
    outcome: &'a str,
    value: Option<u32>,
}

fn run_cmd(mode: ReportMode, file: &Path, fuel: u64) -> R {
    let m = parse_term(&read_file(file)?)?;
    let outcome = evaluate(&m, fuel)?;
    let (name, value, code) = match outcome {
        Outcome::Converges(v) => ("converges", Some(v), EXIT_OK),
        Outcome::FuelExhausted => ("fuel-exhausted", None, EXIT_BOUNDS),
    };
    let text = match outcome {
        Outcome::Converges(v) => format!("{}", v),
        Outcome::FuelExhausted => format!("diverges (fuel {} exhausted)", fuel),
    };
    emit(
        mode,
        &RunRecord {
            command: "run",
            file: file.display().to_string(),
            fuel,
            outcome: name,
            value,
        },
        &text,
    );
    Ok(code)
}

#[derive(Serialize)]
struct StrategyRecord<'a> {
    command: &'a str,
    file: String,
    norm: usize,
    strategy: String,
}

fn denote_cmd(mode: ReportMode, file: &Path, model: &ModelFlags) -> R {
    let s = load_canonical(file, model)?;
    let text = write_strategy(&s)?;
    emit(
        mode,
        &StrategyRecord {
            command: "denote",
            file: file.display().to_string(),
            norm: s.norm(),
            strategy: text.clone(),
        },
        text.trim_end(),
    );
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct TreeRecord<'a> {
    command: &'a str,
    file: String,
    depth: usize,
    complete: bool,
    tree: String,
}

fn tree_cmd(mode: ReportMode, file: &Path, depth: usize, model: &ModelFlags) -> R {
    let s = load_canonical(file, model)?;
    let t = tree_of_strategy(&s, depth)?;
    emit(
        mode,
        &TreeRecord {
            command: "tree",
            file: file.display().to_string(),
            depth,
            complete: t.is_complete(),
            tree: t.to_string(),
        },
        &t.to_string(),
    );
    Ok(EXIT_OK)
}

fn approx_cmd(mode: ReportMode, file: &Path, k: u32, model: &ModelFlags) -> R {
    let s = load_canonical(file, model)?;
    let pk = approximant(&s, k)?;
    let text = write_strategy(&pk)?;
    emit(
        mode,
        &StrategyRecord {
            command: "approx",
            file: file.display().to_string(),
            norm: pk.norm(),
            strategy: text.clone(),
        },
        text.trim_end(),
    );
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ExtractRecord<'a> {
    command: &'a str,
    file: String,
    term: String,
}

fn extract_cmd(mode: ReportMode, file: &Path, model: &ModelFlags) -> R {
    let s = load_canonical(file, model)?;
    let m = extract_term(&s)?;
    emit(
        mode,
        &ExtractRecord {
            command: "extract",
            file: file.display().to_string(),
            term: m.to_string(),
        },
        &m.to_string(),
    );
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct DecomposeRecord<'a> {
    command: &'a str,
    file: String,
    class: String,
    head: Option<usize>,
    args: usize,
    branches: Vec<u32>,
    recomposition_ok: bool,
}

fn decompose_cmd(mode: ReportMode, file: &Path, model: &ModelFlags) -> R {
    let s = load_canonical(file, model)?;
    let d = decompose(&s)?;
    let window = s.cod().roots[0].answers;
    let back = recompose(&d, s.dom(), window)?;
    let ok = back == s;
    let (class, head, args, branches) = match &d {
        Decomposition::Bot => ("bottom".to_string(), None, 0, Vec::new()),
        Decomposition::Const(x) => (format!("constant {}", x), None, 0, Vec::new()),
        Decomposition::Total { head, args, branches } => (
            "head".to_string(),
            Some(*head),
            args.len(),
            branches.keys().copied().collect(),
        ),
    };
    let mut text = format!("class: {}", class);
    if let Some(h) = head {
        let _ = write!(
            text,
            "\nhead: x{}\nargs: {}\nbranches: {:?}",
            h + 1,
            args,
            branches
        );
    }
    let _ = write!(text, "\nrecomposition: {}", if ok { "ok" } else { "MISMATCH" });
    emit(
        mode,
        &DecomposeRecord {
            command: "decompose",
            file: file.display().to_string(),
            class,
            head,
            args,
            branches,
            recomposition_ok: ok,
        },
        &text,
    );
    Ok(if ok { EXIT_OK } else { EXIT_CHECK })
}

#[derive(Serialize)]
struct CompareRecord<'a> {
    command: &'a str,
    left: String,
    right: String,
    norm_bound: usize,
    window: u32,
    intrinsic: Option<u32>,
    observational: Option<u32>,
    coherent: bool,
}

fn compare_cmd(
    mode: ReportMode,
    file1: &Path,
    file2: &Path,
    norm_bound: usize,
    fuel: u64,
    model: &ModelFlags,
) -> R {
    let m = parse_term(&read_file(file1)?)?;
    let n = parse_term(&read_file(file2)?)?;
    let rep = coherence_check(&m, &n, norm_bound, fuel, model.window, model.unroll)?;
    let describe = |v: Option<u32>| match v {
        None => "related-up-to-bounds".to_string(),
        Some(x) => format!("separated (value {})", x),
    };
    let text = format!(
        "intrinsic:     {}\nobservational: {}\ncoherent:      {}",
        describe(rep.intrinsic),
        describe(rep.observational),
        rep.coherent
    );
    emit(
        mode,
        &CompareRecord {
            command: "compare",
            left: file1.display().to_string(),
            right: file2.display().to_string(),
            norm_bound,
            window: model.window,
            intrinsic: rep.intrinsic,
            observational: rep.observational,
            coherent: rep.coherent,
        },
        &text,
    );
    Ok(if rep.coherent { EXIT_OK } else { EXIT_CHECK })
}

fn axioms_cmd(mode: ReportMode, suite: &str, cases: usize, seed: u64, window: u32) -> R {
    let seed = seed_from_env(seed);
    let suites: Vec<Axiom> = if suite.eq_ignore_ascii_case("all") {
        Axiom::all().to_vec()
    } else {
        vec![suite.parse()?]
    };
    let mut all_ok = true;
    for which in suites {
        let rep = check_axiom(which, cases, seed, window);
        all_ok &= rep.ok();
        emit(mode, &rep, rep.to_string().trim_end());
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_CHECK })
}

fn stlc_cmd(mode: ReportMode, ty: &str, size: usize, norm: usize) -> R {
    let t = parse_type(ty)?;
    let rep = check_full_completeness(&t, size, norm)?;
    let mut text = format!(
        "type {}: {} normal forms (size <= {}), {} total strategies (norm <= {})",
        rep.ty, rep.nf_count, size, rep.total_strategy_count, norm
    );
    let _ = write!(
        text,
        "\ninjective: {}\nextract . denote = id: {}\ndenote . extract = id: {}",
        rep.injective, rep.extract_after_denote_ok, rep.denote_after_extract_ok
    );
    for b in &rep.boundary {
        let _ = write!(text, "\nboundary (exceeds size bound): {}", b);
    }
    let _ = write!(text, "\nresult: {}", if rep.ok { "ok" } else { "FAIL" });
    emit(mode, &rep, &text);
    Ok(if rep.ok { EXIT_OK } else { EXIT_CHECK })
}

#[derive(Serialize)]
struct CorpusRecord<'a> {
    command: &'a str,
    file: String,
    expected: Option<u32>,
    operational: Option<u32>,
    denotational: Option<u32>,
    k_converged: Option<u32>,
    ok: bool,
}

#[derive(serde::Deserialize)]
struct ManifestEntry {
    file: String,
    /// expected value, or null for divergence
    expected: Option<u32>,
}

fn corpus_cmd(mode: ReportMode, dir: &Path, fuel: u64, window: u32, k_max: u32) -> R {
    let manifest_path = dir.join("manifest.json");
    let manifest: Vec<ManifestEntry> = serde_json::from_str(&read_file(&manifest_path)?)
        .map_err(|e| Error::Other(format!("bad manifest: {}", e)))?;
    let mut all_ok = true;
    for entry in &manifest {
        let path = dir.join(&entry.file);
        let m = parse_term(&read_file(&path)?)?;
        let rep = adequacy_check(&m, fuel, window, k_max)?;
        let operational = match rep.operational {
            Outcome::Converges(v) => Some(v),
            Outcome::FuelExhausted => None,
        };
        let ok = rep.agree && operational == entry.expected;
        all_ok &= ok;
        let text = format!(
            "{} {}: expected {}, evaluated {}, denoted {}{}",
            if ok { "ok  " } else { "FAIL" },
            entry.file,
            show(entry.expected),
            show(operational),
            show(rep.denotational),
            match rep.k_converged {
                Some(k) => format!(" (k = {})", k),
                None => String::new(),
            }
        );
        emit(
            mode,
            &CorpusRecord {
                command: "corpus",
                file: entry.file.clone(),
                expected: entry.expected,
                operational,
                denotational: rep.denotational,
                k_converged: rep.k_converged,
                ok,
            },
            &text,
        );
    }
    if mode == ReportMode::Text {
        println!(
            "{} programs, {}",
            manifest.len(),
            if all_ok { "all ok" } else { "FAILURES" }
        );
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_CHECK })
}

fn show(v: Option<u32>) -> String {
    match v {
        Some(x) => x.to_string(),
        None => "diverges".to_string(),
    }
}
