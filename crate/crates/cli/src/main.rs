use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use jsjtree::classify::{ClassifyError, CompareOptions, Verdict, Workspace};
use jsjtree::complex::RefinementComplex;
use jsjtree::oracle::{ball_isomorphic, expand_ball};
use jsjtree::refine::{neighbor_refine_fix, partition};
use jsjtree::{report, stretch, CylinderGraph, Exec, Mode, OrnamentUniverse};

const EXIT_USAGE: u8 = 64;
const EXIT_INPUT: u8 = 65;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(name = "jsjtree", version, about = "Invariants of JSJ trees of cylinders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    file: PathBuf,
    /// type | qi | rel-qi | boundary | qi+stretch
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(long)]
    json: bool,
    /// Run the refinement on a single thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Refine to stability and report rounds and class counts.
    Refine(Common),
    /// Structure invariant of the stable decoration.
    Invariant {
        #[command(flatten)]
        common: Common,
        /// Print the vertex block matrix, also alongside --json.
        #[arg(long)]
        table: bool,
    },
    /// Stable classes with members and neighbor counts.
    Orbits(Common),
    /// Orientation imbalance of every cylinder class.
    Imbalance(Common),
    /// Normalized relative stretch of every edge at a rigid vertex.
    Stretch {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decide equivalence of two inputs. Exit 0 equivalent, 1 distinct, 2 inconclusive.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value = "type")]
        mode: Mode,
        /// Print the verdict with its witness as JSON.
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = 20)]
        max_xi: usize,
        #[arg(long)]
        sequential: bool,
    },
    /// Check stable classes against brute-force ball isomorphism.
    OracleCheck {
        file: PathBuf,
        /// Ball radius; defaults to the number of cells plus one.
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Graphviz digraph of the subdivided graph colored by stable class.
    ExportDot {
        file: PathBuf,
        #[arg(long)]
        mode: Option<Mode>,
    },
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::NoFixpoint(_) | ClassifyError::Refine(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn load(path: &PathBuf) -> Result<CylinderGraph, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    jsjtree::parse_input(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn exec(sequential: bool) -> Exec {
    if sequential {
        Exec::Sequential
    } else {
        Exec::default()
    }
}

fn refined(c: &Common, default: Mode) -> Result<Workspace, Failure> {
    let g = load(&c.file)?;
    let mut ws = Workspace::solo(&g, c.mode.unwrap_or(default), exec(c.sequential))?;
    ws.full_refine()?;
    warn(&ws);
    Ok(ws)
}

fn warn(ws: &Workspace) {
    for w in &ws.warnings {
        eprintln!("warning: {w}");
    }
    if ws.unknown {
        eprintln!("warning: a local symmetry oracle could not decide a query");
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Refine(c) => {
            let g = load(&c.file)?;
            let mut ws = Workspace::solo(&g, c.mode.unwrap_or(Mode::Type), exec(c.sequential))?;
            let r = ws.full_refine()?;
            warn(&ws);
            let vertex_classes = jsjtree::refine::class_count(&ws.d[..ws.nv()]);
            if c.json {
                println!("{}", pretty(&json!({"mode": ws.mode.name(), "report": r, "vertex_classes": vertex_classes})));
            } else {
                println!("mode {}", ws.mode.name());
                println!("rounds {}", r.rounds);
                println!("neighbor steps {}", r.neighbor_steps);
                println!("classes {} ({} vertex)", r.classes, vertex_classes);
            }
        }
        Command::Invariant { common, table } => {
            let ws = refined(&common, Mode::Type)?;
            if common.json {
                println!("{}", pretty(&report::invariant_json(&ws, 0)?));
            }
            if table || !common.json {
                print!("{}", report::render_table(&report::vertex_table(&ws, 0)));
            }
        }
        Command::Orbits(c) => {
            let ws = refined(&c, Mode::Type)?;
            if c.json {
                println!("{}", pretty(&report::orbits_json(&ws)));
            } else {
                print!("{}", report::render_orbits(&ws));
            }
        }
        Command::Imbalance(c) => {
            let ws = refined(&c, Mode::Boundary)?;
            if c.json {
                println!("{}", pretty(&report::imbalances_json(&ws)));
            } else {
                print!("{}", report::render_imbalances(&ws));
            }
        }
        Command::Stretch { file, json } => {
            let g = load(&file)?;
            let t = stretch::stretch_table(&g).map_err(|e| Failure::Input(e.to_string()))?;
            if json {
                println!("{}", pretty(&serde_json::to_value(&t).expect("table serializes")));
            } else {
                print!("{}", report::render_stretch(&t));
            }
        }
        Command::Compare { a, b, mode, witness, max_xi, sequential } => {
            let (ga, gb) = (load(&a)?, load(&b)?);
            for g in [&ga, &gb] {
                if g.is_trivial_jsj() {
                    eprintln!("warning: {}: trivial JSJ decomposition, comparing by vertex ornament alone", g.name);
                }
            }
            // quasi-isometry needs the stretch data as well
            let mode = if mode == Mode::Qi { Mode::QiStretch } else { mode };
            let opts = CompareOptions { max_xi, exec: exec(sequential), ..CompareOptions::default() };
            let v = jsjtree::compare(&ga, &gb, mode, opts)?;
            if witness {
                println!("{}", pretty(&serde_json::to_value(&v).expect("verdict serializes")));
            } else {
                match &v {
                    Verdict::Equivalent(_) => println!("equivalent"),
                    Verdict::Distinct { condition, reason } => println!("distinct ({condition:?}): {reason}"),
                    Verdict::Inconclusive { reason } => println!("inconclusive: {reason}"),
                }
            }
            return Ok(v.exit_code() as u8);
        }
        Command::OracleCheck { file, radius } => return oracle_check(&load(&file)?, radius),
        Command::ExportDot { file, mode } => {
            let g = load(&file)?;
            let mut ws = Workspace::solo(&g, mode.unwrap_or(Mode::Type), Exec::default())?;
            ws.full_refine()?;
            warn(&ws);
            print!("{}", report::export_dot(&ws));
        }
    }
    Ok(0)
}

/// Same stable class (trivial decoration) must agree with ball isomorphism.
fn oracle_check(g: &CylinderGraph, radius: Option<usize>) -> Result<u8, Failure> {
    let cx = RefinementComplex::subdivide(g);
    let mut u = OrnamentUniverse::new();
    let init = jsjtree::initial_decoration(g, Mode::Type, &mut u).map_err(|e| Failure::Input(e.to_string()))?;
    let (stable, steps) = neighbor_refine_fix(&cx, &init, &mut u, Exec::default());
    let class = partition(&stable);
    let r = radius.unwrap_or(cx.len() + 1);
    // a sweep moves information at most two cells
    let decisive = r >= 2 * (steps + 1);
    let balls = (0..cx.len())
        .map(|t| expand_ball(&cx, t, r))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Input(e.to_string()))?;
    let mut bad = 0;
    for s in 0..cx.len() {
        for t in s + 1..cx.len() {
            let same = class[s] == class[t];
            let iso = ball_isomorphic(&balls[s], &balls[t], &init);
            if (same && !iso) || (!same && iso && decisive) {
                bad += 1;
                println!("discrepancy: cells {s} and {t}: same class {same}, isomorphic balls {iso}");
            }
        }
    }
    println!("{} cells, {} classes, radius {r}, {bad} discrepancies", cx.len(), jsjtree::refine::class_count(&stable));
    if !decisive {
        println!("radius below 2 * (steps + 1) = {}; separated classes not checked", 2 * (steps + 1));
    }
    Ok(u8::from(bad > 0))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(Failure::Input(m))) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_INPUT)
        }
        Ok(Err(Failure::Internal(m))) => {
            eprintln!("internal error: {m}");
            ExitCode::from(EXIT_INTERNAL)
        }
        Err(_) => ExitCode::from(EXIT_INTERNAL),
    }
}
