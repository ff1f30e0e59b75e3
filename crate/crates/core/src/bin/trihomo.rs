//! `trihomo`: command-line front end.
//!
//! JSON goes to stdout, human-readable text (with `--verbose`) to stderr.
//! Exit status: 0 success, 1 negative result, 2 usage or input error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use trihomo::certificate::{replay, Certificate, ReplayOptions};
use trihomo::corpus::{build_from, parse_counts, CorpusId, DataStore, THEOREM2_CERT};
use trihomo::diagram::{validate, Family, TrisectionMatrix};
use trihomo::exactalg::smith_normal_form;
use trihomo::format::{parse_matrix, write_matrix};
use trihomo::search::{find_certificate, SearchBudget, TwistVocabulary};
use trihomo::standardness::{is_standard_position_with, standardness_defect, Reading};

#[derive(Parser)]
#[command(name = "trihomo", version, about = "Homological trisection diagrams: moves, certificates, standardness")]
struct Cli {
    /// Human-readable report on stderr
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a corpus matrix
    Gen(GenArgs),
    /// Cut-system and pair-homology checks
    Validate {
        file: String,
        /// Evaluation points, e.g. `1,2,5` or `1..20`
        #[arg(long, value_name = "LIST")]
        n: Option<String>,
    },
    /// Replay a certificate against a matrix
    Replay {
        file: String,
        /// Certificate file, or `builtin:theorem2`
        #[arg(long)]
        cert: String,
        /// Stop at the first failed assertion
        #[arg(long)]
        strict: bool,
        /// Evaluate everything at this n first
        #[arg(long)]
        n: Option<i64>,
    },
    /// Look for a standardness witness
    Standard {
        file: String,
        /// Quantify the `j ≠ i` clauses over the same class only
        #[arg(long)]
        same_class: bool,
    },
    /// Bounded search for a standardization certificate
    Search(SearchArgs),
    /// Smith normal form of a stacked family pair
    Snf {
        file: String,
        #[arg(long, default_value = "alpha,beta")]
        pair: String,
        #[arg(long)]
        n: Option<i64>,
    },
}

#[derive(Args)]
struct GenArgs {
    /// gluck-T, theorem2-step, theorem2-final or standard-sphere
    id: String,
    #[arg(long, conflicts_with = "symbolic")]
    n: Option<i64>,
    #[arg(long)]
    symbolic: bool,
    /// Step for theorem2-step
    #[arg(long)]
    step: Option<u8>,
    /// Genus for standard-sphere
    #[arg(long)]
    g: Option<usize>,
    /// Class counts for standard-sphere, e.g. `1,0,2`
    #[arg(long)]
    counts: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    file: String,
    #[arg(long, default_value_t = 6)]
    max_depth: usize,
    #[arg(long, default_value_t = 200_000)]
    max_states: usize,
    #[arg(long)]
    beam_width: Option<usize>,
    #[arg(long, default_value_t = 2)]
    bound: i64,
    /// basis, rows or diffs
    #[arg(long, default_value = "basis")]
    vocab: TwistVocabulary,
    /// Evaluate a symbolic input at n first
    #[arg(long)]
    n: Option<i64>,
    /// Write the certificate here
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Error carrying its exit status.
struct Fail(u8, String);

impl Fail {
    fn usage(msg: impl Into<String>) -> Fail {
        Fail(2, msg.into())
    }
}

type Outcome = Result<(Value, bool), Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let store = DataStore::from_env();
    let mut human = String::new();
    let res = match &cli.cmd {
        Command::Gen(a) => cmd_gen(&store, a, &mut human),
        Command::Validate { file, n } => cmd_validate(&store, file, n.as_deref(), &mut human),
        Command::Replay { file, cert, strict, n } => cmd_replay(&store, file, cert, *strict, *n, &mut human),
        Command::Standard { file, same_class } => cmd_standard(&store, file, *same_class, &mut human),
        Command::Search(a) => cmd_search(&store, a, &mut human),
        Command::Snf { file, pair, n } => cmd_snf(&store, file, pair, *n, &mut human),
    };
    match res {
        Ok((value, ok)) => {
            if !value.is_null() {
                emit(&format!("{}\n", serde_json::to_string_pretty(&value).expect("serializable")));
            }
            if cli.verbose && !human.is_empty() {
                eprint!("{human}");
            }
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(Fail(code, msg)) => {
            eprintln!("trihomo: {msg}");
            ExitCode::from(code)
        }
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let mut out = io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("trihomo: {e}");
        }
    }
}

/// A matrix file path, or `builtin:<corpus id>`.
fn load_matrix(store: &DataStore, arg: &str) -> Result<TrisectionMatrix, Fail> {
    if let Some(id) = arg.strip_prefix("builtin:") {
        let id: CorpusId = id.parse().map_err(|e| Fail::usage(format!("{e}")))?;
        return build_from(store, &id).map_err(|e| Fail::usage(e.to_string()));
    }
    let text = fs::read_to_string(arg).map_err(|e| Fail::usage(format!("{arg}: {e}")))?;
    parse_matrix(&text).map_err(|e| Fail::usage(format!("{arg}: {e}")))
}

fn cmd_gen(store: &DataStore, a: &GenArgs, human: &mut String) -> Outcome {
    let id = match a.id.as_str() {
        "theorem2-step" | "theorem2_intermediate" => {
            CorpusId::Theorem2Intermediate(a.step.ok_or_else(|| Fail::usage("theorem2-step needs --step"))?)
        }
        "standard-sphere" | "standard_sphere" => {
            let genus = a.g.ok_or_else(|| Fail::usage("standard-sphere needs --g"))?;
            let counts = a.counts.as_deref().ok_or_else(|| Fail::usage("standard-sphere needs --counts"))?;
            let counts = parse_counts(counts).ok_or_else(|| Fail::usage(format!("bad --counts {counts:?}")))?;
            CorpusId::StandardSphere { genus, counts }
        }
        other => other.parse().map_err(|e: trihomo::corpus::CorpusError| Fail::usage(e.to_string()))?,
    };
    let mut d = build_from(store, &id).map_err(|e| Fail::usage(e.to_string()))?;
    if let Some(n0) = a.n {
        if let Some(w) = trihomo::exactalg::domain_warning(n0) {
            human.push_str(&format!("warning: {w}\n"));
        }
        d = d.evaluate(n0);
    }
    let text = write_matrix(&d);
    human.push_str(&format!("{id}: genus {}\n", d.genus()));
    match &a.out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?;
            Ok((Value::Null, true))
        }
        None => {
            emit(&text);
            Ok((Value::Null, true))
        }
    }
}

/// `1,2,5` or `1..20` (inclusive), or a mix.
fn parse_points(s: &str) -> Result<Vec<i64>, Fail> {
    let bad = || Fail::usage(format!("bad --n list {s:?}"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

fn cmd_validate(store: &DataStore, file: &str, n: Option<&str>, human: &mut String) -> Outcome {
    let d = load_matrix(store, file)?;
    let points = n.map(parse_points).transpose()?.unwrap_or_default();
    let report = validate(&d, &points);
    human.push_str(&format!(
        "cut systems: {}\npairs torsion-free: {}\n",
        if report.cut_systems_ok() { "ok" } else { "FAILED" },
        report.pairs_torsion_free()
    ));
    for at in &report.pair_homology {
        let ks: Vec<String> = at.pairs.iter().map(|p| p.free_rank.to_string()).collect();
        let at_n = at.n.map_or(String::new(), |n| format!("n = {n}: "));
        human.push_str(&format!("{at_n}k = ({}), sum {}\n", ks.join(", "), at.free_rank_sum));
    }
    for note in &report.notes {
        human.push_str(&format!("note: {note}\n"));
    }
    let ok = report.is_ok();
    let mut v = serde_json::to_value(&report).expect("serializable");
    v["ok"] = json!(ok);
    Ok((v, ok))
}

fn cmd_replay(
    store: &DataStore,
    file: &str,
    cert_spec: &str,
    strict: bool,
    n: Option<i64>,
    human: &mut String,
) -> Outcome {
    let d = load_matrix(store, file)?;
    let (cert, base) = if cert_spec == "builtin:theorem2" {
        let text = store.read(THEOREM2_CERT).map_err(|e| Fail::usage(e.to_string()))?;
        (Certificate::parse(&text).map_err(|e| Fail::usage(format!("{THEOREM2_CERT}: {e}")))?, None)
    } else {
        let text = fs::read_to_string(cert_spec).map_err(|e| Fail::usage(format!("{cert_spec}: {e}")))?;
        let cert = Certificate::parse(&text).map_err(|e| Fail::usage(format!("{cert_spec}: {e}")))?;
        (cert, Path::new(cert_spec).parent().map(Path::to_path_buf))
    };
    // `expect file=` names resolve next to the certificate first, then in the data store.
    let resolve = |name: &str| -> Result<TrisectionMatrix, String> {
        if let Some(dir) = &base {
            let p = dir.join(name);
            if p.is_file() {
                let text = fs::read_to_string(&p).map_err(|e| e.to_string())?;
                return parse_matrix(&text).map_err(|e| e.to_string());
            }
        }
        store.matrix(name).map_err(|e| e.to_string())
    };
    let r = replay(&d, &cert, ReplayOptions { strict, n }, &resolve).map_err(|e| Fail::usage(e.to_string()))?;
    for s in &r.steps {
        let mark = match s.passed {
            Some(true) => "ok",
            Some(false) => "MISMATCH",
            None => "",
        };
        human.push_str(&format!("step {:>3}  {}  {mark}\n", s.step, s.mv));
        for m in &s.mismatches {
            human.push_str(&format!("    {}_{}: found {} expected {}\n", m.family, m.index, m.found, m.expected));
        }
    }
    for w in &r.warnings {
        human.push_str(&format!("warning: {w}\n"));
    }
    human.push_str(&format!(
        "{} of {} assertions checked; final matrix {}\n",
        r.assertion_count(),
        cert.steps.iter().filter(|s| s.expect.is_some()).count(),
        if r.standard.is_some() { "is standard" } else { "has no standardness witness" }
    ));
    let ok = r.assertions_passed();
    let mut v = serde_json::to_value(&r).expect("serializable");
    v["assertions_passed"] = json!(ok);
    v["final"] = matrix_value(&r.final_matrix);
    Ok((v, ok))
}

fn matrix_value(d: &TrisectionMatrix) -> Value {
    serde_json::from_str(&write_matrix(d)).expect("matrix files are JSON")
}

fn cmd_standard(store: &DataStore, file: &str, same_class: bool, human: &mut String) -> Outcome {
    let d = load_matrix(store, file)?;
    let reading = if same_class { Reading::SameClass } else { Reading::AllIndices };
    match is_standard_position_with(&d, reading) {
        Some(w) => {
            human.push_str("standard position; after reordering:\n");
            for (i, c) in w.class_of.iter().enumerate() {
                human.push_str(&format!(
                    "  index {}: class {c}  (alpha_{}, beta_{}, gamma_{})\n",
                    i + 1,
                    w.perms[0][i],
                    w.perms[1][i],
                    w.perms[2][i]
                ));
            }
            let moves: Vec<String> = w.to_moves().iter().map(ToString::to_string).collect();
            Ok((json!({ "standard": true, "witness": w, "moves": moves }), true))
        }
        None => {
            let defect = standardness_defect(&d);
            human.push_str(&format!("no witness (defect {defect})\n"));
            Ok((json!({ "standard": false, "defect": defect }), false))
        }
    }
}

fn cmd_search(store: &DataStore, a: &SearchArgs, human: &mut String) -> Outcome {
    let mut d = load_matrix(store, &a.file)?;
    if let Some(n0) = a.n {
        d = d.evaluate(n0);
    }
    let budget = SearchBudget {
        max_depth: a.max_depth,
        max_states: a.max_states,
        beam_width: a.beam_width,
        coefficient_bound: a.bound,
        twist_vocabulary: a.vocab,
    };
    let out = find_certificate(&d, &budget).map_err(|e| Fail::usage(e.to_string()))?;
    human.push_str(&format!(
        "expanded {} states, generated {}, depth {}\n",
        out.stats.states_expanded, out.stats.states_generated, out.stats.depth_reached
    ));
    let Some(cert) = out.certificate else {
        human.push_str("not found within budget\n");
        return Ok((json!({ "found": false, "budget": budget, "stats": out.stats }), false));
    };
    let text = cert.serialize();
    human.push_str(&text);
    if let Some(path) = &a.out {
        fs::write(path, &text).map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?;
    }
    let moves: Vec<String> = cert.moves().map(ToString::to_string).collect();
    Ok((json!({ "found": true, "budget": budget, "stats": out.stats, "moves": moves }), true))
}

fn cmd_snf(store: &DataStore, file: &str, pair: &str, n: Option<i64>, human: &mut String) -> Outcome {
    let mut d = load_matrix(store, file)?;
    let (x, y) = pair
        .split_once(',')
        .and_then(|(x, y)| Some((x.trim().parse::<Family>().ok()?, y.trim().parse::<Family>().ok()?)))
        .ok_or_else(|| Fail::usage(format!("bad --pair {pair:?}; expected e.g. alpha,beta")))?;
    if let Some(n0) = n {
        d = d.evaluate(n0);
    }
    let snf = smith_normal_form(&d.stacked(x, y)).map_err(|e| Fail::usage(format!("{e} (pass --n)")))?;
    let diag: Vec<String> = snf.diagonal().iter().map(ToString::to_string).collect();
    let torsion: Vec<String> = snf.torsion().iter().map(ToString::to_string).collect();
    human.push_str(&format!(
        "({x}, {y}): invariant factors [{}], cokernel Z^{}{}\n",
        diag.join(", "),
        snf.cokernel_free_rank(),
        torsion.iter().map(|t| format!(" + Z/{t}")).collect::<String>()
    ));
    let value = json!({
        "pair": [x, y],
        "n": n,
        "rows": snf.s.nrows(),
        "cols": snf.s.ncols(),
        "invariant_factors": ints(&snf.diagonal()),
        "rank": snf.rank(),
        "free_rank": snf.cokernel_free_rank(),
        "torsion": ints(&snf.torsion()),
    });
    Ok((value, true))
}

fn ints(v: &[num_bigint::BigInt]) -> Value {
    serde_json::to_value(trihomo::format::IntList(v)).expect("serializable")
}
