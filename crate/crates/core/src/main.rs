use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ringcolor::graph::{to_dot, Coloring, DotStyle, Graph, GraphError, Oracle};
use ringcolor::harness::{
    gen_holed, random_code, recheck_report, rng_for, run_campaign, AuditRegistry, AuditReport, BaseKind,
    CampaignConfig, GenParams, HarnessError,
};
use ringcolor::holes::{color3_holes, decide3_holes, HoleVerdict, HoledTriangulation, HolesError};
use ringcolor::parity::{MembershipRegistry, ParityError, ParitySeq};
use ringcolor::ring::{color3, RingCode, RingError};

/// Exit codes.
const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const INVALID: u8 = 2;
const INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "ringcolor", version, about = "3-colorability of triangulated rings and holed triangulations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parity sequence of a ring code, or facts about a parity word.
    Cps {
        /// Ring code like `2,1,2,3` or parity word like `eoeo`.
        seq: String,
        /// Membership decider.
        #[arg(long, default_value = "exhaustive")]
        decider: String,
    },
    /// e-collapse of a parity word, or fan collapse of a ring code, at position j.
    Collapse { seq: String, j: usize },
    /// Decide 3-colorability (exit 1 when not 3-colorable).
    Decide {
        /// Ring code, or path to a ring/holed-instance JSON file.
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Print a proper 3-coloring as JSON (exit 1 when none exists).
    Color {
        input: String,
        #[arg(long = "emit-dot")]
        emit_dot: Option<PathBuf>,
    },
    /// Random ring code with exactly N triangles.
    GenRing {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        triangles: usize,
    },
    /// Random holed triangulation as JSON.
    GenHoles {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        holes: usize,
        /// Vertex budget.
        #[arg(long)]
        vertices: usize,
        /// lattice, random or mixed.
        #[arg(long, default_value = "mixed")]
        base: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a validation campaign and write its report (exit 3 on a hard failure).
    Validate {
        #[arg(long)]
        claim: String,
        /// Main budget: triangles for ring claims, word length for confluence,
        /// instance count for theorem3.
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// CSV summary path; defaults to the report path with a .csv extension.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        max_vertices: Option<usize>,
        #[arg(long)]
        max_holes: Option<usize>,
        #[arg(long)]
        max_records: Option<usize>,
    },
    /// Graphviz DOT for a ring code or holed instance.
    ExportDot {
        input: String,
        /// Fill vertices with a 3-coloring when one exists.
        #[arg(long)]
        color: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify every counterexample of a saved report (exit 3 on mismatch).
    Recheck { report: PathBuf },
    /// List the available audit claims.
    Claims,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure { code: INVALID, message: message.into() }
    }
}

macro_rules! failure_from {
    ($t:ty, $internal:expr) => {
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                let internal: fn(&$t) -> bool = $internal;
                Failure { code: if internal(&e) { INTERNAL } else { INVALID }, message: e.to_string() }
            }
        }
    };
}

failure_from!(ParityError, |_| false);
failure_from!(GraphError, |_| false);
failure_from!(RingError, |e| matches!(e, RingError::InternalInconsistency(_)));
failure_from!(HolesError, |e| matches!(e, HolesError::Ring(RingError::InternalInconsistency(_))));
failure_from!(HarnessError, |e| e.is_internal());
failure_from!(std::io::Error, |_| false);
failure_from!(serde_json::Error, |_| false);

type CmdResult = Result<u8, Failure>;

enum Input {
    Ring(RingCode),
    Holed(HoledTriangulation),
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

/// A ring code literal, or a JSON file holding either `{"runs": [...]}` or a
/// holed instance.
fn load_input(arg: &str) -> Result<Input, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = read(path)?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        if value.get("runs").is_some() {
            return Ok(Input::Ring(serde_json::from_value(value)?));
        }
        return Ok(Input::Holed(serde_json::from_value(value)?));
    }
    if arg.ends_with(".json") {
        return Err(Failure::invalid(format!("{arg}: no such file")));
    }
    Ok(Input::Ring(arg.parse()?))
}

fn looks_like_word(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| matches!(c, 'e' | 'o' | 'E' | 'O'))
}

fn cmd_cps(seq: &str, decider: &str) -> CmdResult {
    let registry = MembershipRegistry::standard();
    let member = registry.get(decider).ok_or_else(|| {
        Failure::invalid(format!("unknown decider {decider:?} (have: {})", registry.names().join(", ")))
    })?;
    let word: ParitySeq = if looks_like_word(seq) { seq.to_lowercase().parse()? } else { seq.parse::<RingCode>()?.cps() };
    println!("cps: {word}");
    println!("canonical: {}", word.canonicalize());
    println!("symmetric: {}", word.is_symmetric());
    println!("in_T ({}): {}", member.name(), member.contains(&word));
    Ok(OK)
}

fn cmd_collapse(seq: &str, j: usize) -> CmdResult {
    if looks_like_word(seq) {
        let word: ParitySeq = seq.to_lowercase().parse()?;
        println!("{}", word.e_collapse(j)?);
    } else {
        let code: RingCode = seq.parse()?;
        let fc = code.fan_collapse(j)?;
        println!("{}", fc.ring.runs.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
        println!("first fan: {:?}", fc.ring.first);
        println!("cps: {}", ParitySeq::from_runs(&fc.ring.runs)?);
    }
    Ok(OK)
}

fn cmd_decide(input: &str, json: bool) -> CmdResult {
    match load_input(input)? {
        Input::Ring(code) => {
            let yes = code.decide3();
            if json {
                let out = serde_json::json!({ "code": code.to_string(), "cps": code.cps().to_string(), "colorable": yes });
                println!("{out}");
            } else {
                println!("{}", if yes { "3-colorable" } else { "not 3-colorable" });
            }
            Ok(if yes { OK } else { NEGATIVE })
        }
        Input::Holed(ht) => {
            let verdict = decide3_holes(&ht)?;
            if json {
                println!("{}", serde_json::to_string(&verdict)?);
            } else {
                match &verdict {
                    HoleVerdict::No { hole, cps } => println!("no: ring of hole {hole} has cps {cps}, not in T"),
                    HoleVerdict::Yes { .. } => println!("yes: 3-colorable (witness verified)"),
                    HoleVerdict::CriterionYesUnconfirmed => {
                        println!("criterion-yes-unconfirmed: every ring passes, but no 3-coloring of the whole graph exists")
                    }
                }
            }
            Ok(if matches!(verdict, HoleVerdict::Yes { .. }) { OK } else { NEGATIVE })
        }
    }
}

fn graph_and_coloring(input: Input) -> Result<(Graph, Option<Coloring>, Option<HoledTriangulation>), Failure> {
    Ok(match input {
        Input::Ring(code) => {
            let c = color3(&code)?;
            (code.realize(), c, None)
        }
        Input::Holed(ht) => {
            let c = color3_holes(&ht)?;
            (ht.graph().clone(), c, Some(ht))
        }
    })
}

fn dot_for(g: &Graph, coloring: Option<&Coloring>, ht: Option<&HoledTriangulation>) -> String {
    match ht {
        Some(ht) => ht.to_dot(coloring),
        None => to_dot(g, &DotStyle { name: "ring", coloring }),
    }
}

fn cmd_color(input: &str, emit_dot: Option<&Path>) -> CmdResult {
    let (g, coloring, ht) = graph_and_coloring(load_input(input)?)?;
    if let Some(path) = emit_dot {
        write(path, &dot_for(&g, coloring.as_ref(), ht.as_ref()))?;
    }
    match coloring {
        Some(c) => {
            println!("{}", serde_json::to_string(&c)?);
            Ok(OK)
        }
        None => {
            eprintln!("no proper 3-coloring exists");
            Ok(NEGATIVE)
        }
    }
}

fn cmd_export_dot(input: &str, color: bool, out: Option<&Path>) -> CmdResult {
    let input = load_input(input)?;
    let (g, coloring, ht) = if color {
        graph_and_coloring(input)?
    } else {
        match input {
            Input::Ring(code) => (code.realize(), None, None),
            Input::Holed(ht) => (ht.graph().clone(), None, Some(ht)),
        }
    };
    let dot = dot_for(&g, coloring.as_ref(), ht.as_ref());
    match out {
        Some(p) => write(p, &dot)?,
        None => print!("{dot}"),
    }
    Ok(OK)
}

fn cmd_gen_holes(seed: u64, holes: usize, vertices: usize, base: &str, out: Option<&Path>) -> CmdResult {
    let params = GenParams { base: base.parse::<BaseKind>()?, ..GenParams::new(holes, vertices) };
    let ht = gen_holed(seed, &params)?;
    let json = serde_json::to_string_pretty(&ht)? + "\n";
    match out {
        Some(p) => write(p, &json)?,
        None => print!("{json}"),
    }
    Ok(OK)
}

fn cmd_validate(cfg: CampaignConfig, out: &Path, csv: Option<&Path>) -> CmdResult {
    let report = run_campaign(&cfg)?;
    write(out, &report.to_json())?;
    let csv_path = csv.map(Path::to_path_buf).unwrap_or_else(|| out.with_extension("csv"));
    write(&csv_path, &report.summary_csv()?)?;
    println!(
        "{}: {} instances, {} agreements, {} counterexamples ({} hard)",
        report.claim,
        report.instances,
        report.agreements,
        report.counterexamples.len(),
        report.hard_failures()
    );
    Ok(if report.hard_failures() > 0 { INTERNAL } else { OK })
}

fn cmd_recheck(path: &Path) -> CmdResult {
    let report = AuditReport::from_json(&read(path)?)?;
    let failures = recheck_report(&report, &Oracle::default());
    for f in &failures {
        eprintln!("counterexample {}: {}", f.index, f.reason);
    }
    println!("{}: {} of {} counterexamples re-verified", report.claim, report.counterexamples.len() - failures.len(), report.counterexamples.len());
    Ok(if failures.is_empty() { OK } else { INTERNAL })
}

fn run(cli: Cli) -> CmdResult {
    match cli.cmd {
        Cmd::Cps { seq, decider } => cmd_cps(&seq, &decider),
        Cmd::Collapse { seq, j } => cmd_collapse(&seq, j),
        Cmd::Decide { input, json } => cmd_decide(&input, json),
        Cmd::Color { input, emit_dot } => cmd_color(&input, emit_dot.as_deref()),
        Cmd::GenRing { seed, triangles } => {
            let code = random_code(&mut rng_for(seed), triangles)?;
            println!("{code}");
            Ok(OK)
        }
        Cmd::GenHoles { seed, holes, vertices, base, out } => cmd_gen_holes(seed, holes, vertices, &base, out.as_deref()),
        Cmd::Validate { claim, budget, seed, out, csv, max_vertices, max_holes, max_records } => {
            let mut cfg = CampaignConfig::for_claim(&claim, budget, seed)?;
            if let Some(v) = max_vertices {
                cfg.max_vertices = v;
            }
            if let Some(h) = max_holes {
                cfg.max_holes = h;
            }
            if let Some(r) = max_records {
                cfg.max_records = r;
            }
            cmd_validate(cfg, &out, csv.as_deref())
        }
        Cmd::ExportDot { input, color, out } => cmd_export_dot(&input, color, out.as_deref()),
        Cmd::Recheck { report } => cmd_recheck(&report),
        Cmd::Claims => {
            let reg = AuditRegistry::standard();
            for name in reg.names() {
                let sev = reg.get(name).map(|a| a.severity()).expect("registered");
                println!("{name}\t{}", format!("{sev:?}").to_lowercase());
            }
            Ok(OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INVALID } else { OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
