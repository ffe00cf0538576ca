use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use olymp_core::gcd_sets::{self, is_prime, GcdSet};
use olymp_core::park_walk::{
    all_starts, extremal_witness, max_visits, search_extremal, simulate, trail_traversal_counts, ParkLayout,
    Turn, Witness,
};
use olymp_core::tromino::{self, tally_and_certify, Board, Move, SearchMode, SearchOutcome};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use thiserror::Error;

use crate::report::{Claim, RunReport, Verdict};
use crate::suite::{self, SuiteConfig, WalkStats, GEOMETRY_TOL};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "olymp", version, about = "Simulators, searches and certificate checkers for six olympiad problems")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "OLYMP_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Accepted for compatibility; JSON is the only output format.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Alternating left/right walks on cubic park layouts.
    #[command(subcommand)]
    Park(ParkCmd),
    /// The tromino clearing game.
    #[command(subcommand)]
    Tromino(TrominoCmd),
    /// Sets with the gcd-divisor bijection property.
    #[command(subcommand)]
    Gcdset(GcdCmd),
    /// The cyclic 2n-equation system.
    #[command(subcommand)]
    Cyclic(CyclicCmd),
    /// Monte-Carlo checks of the two geometry theorems.
    #[command(subcommand)]
    Geom(GeomCmd),
    /// Every acceptance check.
    RunAll(RunAllArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TurnArg {
    #[value(name = "L", alias = "left")]
    Left,
    #[value(name = "R", alias = "right")]
    Right,
}

impl From<TurnArg> for Turn {
    fn from(t: TurnArg) -> Turn {
        match t {
            TurnArg::Left => Turn::Left,
            TurnArg::Right => Turn::Right,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum ParkCmd {
    /// Walk from one starting configuration.
    Simulate {
        /// Layout or witness JSON; defaults to the bundled three-visit witness.
        #[arg(long)]
        layout: Option<PathBuf>,
        #[arg(long)]
        start: Option<usize>,
        #[arg(long)]
        first_trail: Option<usize>,
        #[arg(long, value_enum)]
        first_turn: Option<TurnArg>,
    },
    /// Random search for the layout and start with the most visits.
    Search {
        #[arg(long, default_value_t = 10)]
        max_junctions: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        /// Write the best witness here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the visit and traversal bounds on a layout and on random layouts.
    Verify {
        #[arg(long)]
        layout: Option<PathBuf>,
        /// Number of random layouts to add.
        #[arg(long, default_value_t = 0)]
        fuzz: usize,
        #[arg(long, default_value_t = 14)]
        max_junctions: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum TrominoCmd {
    /// The cage-by-cage clearing sequence for n divisible by 3.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Breadth-first search for a nonempty sequence returning to the empty board.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        limit: usize,
        #[arg(long)]
        parallel: bool,
    },
    /// Replay a move file and check its polynomial certificate.
    Certify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        moves: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum GcdCmd {
    /// Check a set file for the bijection property.
    Verify {
        #[arg(long)]
        set: PathBuf,
    },
    /// Build the 2^k-element set from k pairs of primes.
    Construct {
        #[arg(long)]
        k: usize,
        /// 2k distinct primes p_1..p_k q_1..q_k, separated by spaces or commas;
        /// defaults to the first 2k primes.
        #[arg(long)]
        primes: Option<String>,
    },
    /// Exhaustive search for achievable set sizes.
    Search {
        #[arg(long)]
        max_element: u64,
        #[arg(long)]
        max_size: usize,
        /// Consider every element, not only those with the right divisor count.
        #[arg(long)]
        unpruned: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum CyclicCmd {
    /// Damped Newton from random starting points.
    Solve {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        starts: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum GeomCmd {
    /// Rectangles erected on an acute triangle.
    P1 {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Scale the third height by 1 + EPS, breaking the angle condition.
        #[arg(long)]
        perturb: Option<f64>,
        #[arg(long, default_value_t = GEOMETRY_TOL)]
        tol: f64,
    },
    /// Hexagons with parallel opposite sides and equal opposite-side products.
    P6 {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = GEOMETRY_TOL)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
pub struct RunAllArgs {
    /// Override the geometry tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

/// Bad arguments or input: exit code 2.
#[derive(Debug, Error)]
pub enum UsageError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

fn invalid(e: impl std::fmt::Display) -> UsageError {
    UsageError::Invalid(e.to_string())
}

fn read(path: &Path) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|source| UsageError::Io { path: path.display().to_string(), source })
}

fn parse_json<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, UsageError> {
    serde_json::from_str(text).map_err(|e| UsageError::Parse { path: path.display().to_string(), message: e.to_string() })
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<String, UsageError> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    fs::write(path, text + "\n").map_err(|source| UsageError::Io { path: path.display().to_string(), source })?;
    Ok(path.display().to_string())
}

enum LayoutFile {
    Layout(ParkLayout),
    Witness(Witness),
}

/// A bare layout, or a witness (layout plus starting configuration).
fn load_layout(path: Option<&Path>) -> Result<LayoutFile, UsageError> {
    let Some(path) = path else {
        return Ok(LayoutFile::Witness(extremal_witness()));
    };
    let text = read(path)?;
    let value: Value = parse_json(path, &text)?;
    if value.get("layout").is_some() {
        Ok(LayoutFile::Witness(parse_json(path, &text)?))
    } else {
        Ok(LayoutFile::Layout(parse_json(path, &text)?))
    }
}

/// Parse and run; returns the exit code. Reports go to standard output as
/// JSON and a short summary to standard error.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let command: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match dispatch(&cli, command) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            eprintln!("{}", report.summary());
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

pub fn dispatch(cli: &Cli, command: Vec<String>) -> Result<RunReport, UsageError> {
    let t = Instant::now();
    let seed = cli.seed;
    let mut files = Vec::new();
    let (claims, data) = match &cli.command {
        Command::Park(cmd) => park(cmd, seed, &mut files)?,
        Command::Tromino(cmd) => tromino(cmd, &mut files)?,
        Command::Gcdset(cmd) => gcdset(cmd)?,
        Command::Cyclic(CyclicCmd::Solve { n, starts, tol }) => {
            if *n < 4 {
                return Err(invalid(format!("n must be at least 4, got {n}")));
            }
            let b = suite::cyclic_batch(seed, *n, *starts, *tol);
            let claims = vec![
                Claim::new(
                    "every converged run lands on (1, 2, 1, 2, ...)",
                    b.elsewhere == 0,
                    json!({ "converged": b.converged, "starts": b.starts, "elsewhere": b.elsewhere }),
                ),
                Claim::new(
                    "summed identities hold at every converged run",
                    b.identities_hold,
                    json!({ "max_identity_gap": b.max_identity_gap }),
                ),
            ];
            (claims, json!(b))
        }
        Command::Geom(cmd) => geom(cmd, seed)?,
        Command::RunAll(args) => {
            let cfg = SuiteConfig { seed, geometry_tol: args.tol.unwrap_or(GEOMETRY_TOL) };
            return Ok(suite::run_all(command, &cfg));
        }
    };
    let mut report = RunReport::new(command, seed, claims, data);
    report.witness_files = files;
    report.runtime_ms = t.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

type Outcome = (Vec<Claim>, Value);

fn bound_claims(stats: &WalkStats) -> Vec<Claim> {
    vec![
        Claim::new("no junction entered more than 3 times", stats.max_visits <= 3, json!(stats.max_visits)),
        Claim::new("no trail walked more than twice", stats.max_traversals <= 2, json!(stats.max_traversals)),
    ]
}

fn park(cmd: &ParkCmd, seed: u64, files: &mut Vec<String>) -> Result<Outcome, UsageError> {
    match cmd {
        ParkCmd::Simulate { layout, start, first_trail, first_turn } => {
            let (layout, default) = match load_layout(layout.as_deref())? {
                LayoutFile::Witness(w) => {
                    let d = (w.start, w.first_trail, w.first_turn);
                    (w.layout, Some(d))
                }
                LayoutFile::Layout(l) => (l, None),
            };
            let start = start.or(default.map(|d| d.0)).ok_or_else(|| invalid("--start is required"))?;
            let trail = first_trail.or(default.map(|d| d.1)).ok_or_else(|| invalid("--first-trail is required"))?;
            let turn = first_turn.map(Turn::from).or(default.map(|d| d.2)).unwrap_or(Turn::Left);
            let walk = simulate(&layout, start, trail, turn).map_err(invalid)?;
            let (junction, count) = max_visits(&walk);
            let traversals = trail_traversal_counts(&walk);
            let mut stats = WalkStats { layouts: 1, walks: 1, ..Default::default() };
            stats.max_visits = count;
            stats.max_traversals = traversals.values().copied().max().unwrap_or(0);
            stats.longest_walk = walk.steps.len();
            let data = json!({
                "walk": walk,
                "path": walk.path(),
                "max_visits": { "junction": junction, "count": count },
                "trail_traversals": traversals,
                "euler_genus": layout.euler_genus(),
            });
            Ok((bound_claims(&stats), data))
        }
        ParkCmd::Search { max_junctions, samples, out } => {
            let best = search_extremal(*max_junctions, *samples, seed).map_err(invalid)?;
            if let Some(path) = out {
                files.push(write_json(path, &best.witness)?);
            }
            let stats = WalkStats {
                layouts: best.layouts_checked,
                max_visits: best.max_visits.1,
                max_traversals: trail_traversal_counts(&best.walk).into_values().max().unwrap_or(0),
                ..Default::default()
            };
            let data = json!({
                "max_junctions": max_junctions,
                "samples": samples,
                "best": best,
                "path": best.walk.path(),
            });
            Ok((bound_claims(&stats), data))
        }
        ParkCmd::Verify { layout, fuzz, max_junctions } => {
            let layout = match load_layout(layout.as_deref())? {
                LayoutFile::Witness(w) => w.layout,
                LayoutFile::Layout(l) => l,
            };
            let mut stats = WalkStats::default();
            stats.add_layout(&layout).map_err(invalid)?;
            let single = stats.clone();
            if *fuzz > 0 {
                if *max_junctions < 4 {
                    return Err(invalid("--max-junctions must be at least 4"));
                }
                let extra = suite::park_fuzz(seed, *fuzz, *max_junctions).map_err(invalid)?;
                stats.layouts += extra.layouts;
                stats.walks += extra.walks;
                stats.max_visits = stats.max_visits.max(extra.max_visits);
                stats.max_traversals = stats.max_traversals.max(extra.max_traversals);
                stats.longest_walk = stats.longest_walk.max(extra.longest_walk);
            }
            let mut claims = bound_claims(&stats);
            claims.push(Claim::new(
                "every walk returns within 4·|trails| + 2 steps",
                true,
                json!({ "starts_checked": all_starts(&layout).count() }),
            ));
            let data = json!({
                "junctions": layout.junction_count(),
                "trails": layout.trail_count(),
                "euler_genus": layout.euler_genus(),
                "layout_stats": single,
                "all_stats": stats,
            });
            Ok((claims, data))
        }
    }
}

fn search_label(out: &SearchOutcome) -> &'static str {
    match out {
        SearchOutcome::Found { .. } => "empty-to-empty sequence found",
        SearchOutcome::ProvenAbsent { .. } => "no empty-to-empty sequence (proven)",
        SearchOutcome::Inconclusive { .. } => "inconclusive: node limit reached",
    }
}

fn tromino(cmd: &TrominoCmd, files: &mut Vec<String>) -> Result<Outcome, UsageError> {
    match cmd {
        TrominoCmd::Construct { n, out } => {
            let moves = tromino::constructive_clear(*n).map_err(invalid)?;
            let end = Board::empty(*n).and_then(|b| b.replay(&moves));
            let expected = 3 * (n / 3) * (n / 3) + n;
            let claims = vec![
                Claim::new(
                    "sequence is legal and clears the board",
                    end.as_ref().is_ok_and(Board::is_empty),
                    json!(end.err().map(|e| e.to_string())),
                ),
                Claim::new("move count is 3(n/3)² + n", moves.len() == expected, json!({ "expected": expected })),
            ];
            if let Some(path) = out {
                files.push(write_json(path, &moves)?);
            }
            Ok((claims, json!({ "n": n, "move_count": moves.len(), "moves": moves })))
        }
        TrominoCmd::Search { n, limit, parallel } => {
            let mode = if *parallel { SearchMode::Parallel } else { SearchMode::Serial };
            let out = tromino::exhaustive_search_with(*n, *limit, mode).map_err(invalid)?;
            let expected_found = n % 3 == 0;
            let verdict = match &out {
                SearchOutcome::Inconclusive { .. } => Verdict::Inconclusive,
                SearchOutcome::Found { .. } => Verdict::from_bool(expected_found),
                SearchOutcome::ProvenAbsent { .. } => Verdict::from_bool(!expected_found),
            };
            let claim = Claim {
                name: "clearable exactly when 3 divides n".into(),
                verdict,
                detail: json!(search_label(&out)),
                runtime_ms: None,
            };
            Ok((vec![claim], json!({ "n": n, "limit": limit, "verdict": search_label(&out), "outcome": out })))
        }
        TrominoCmd::Certify { n, moves } => {
            let seq: Vec<Move> = parse_json(moves, &read(moves)?)?;
            let rep = tally_and_certify(&seq, *n).map_err(invalid)?;
            let mut claims = vec![Claim::new("move identity holds exactly", rep.identity_holds, Value::Null)];
            if let Some(nr) = &rep.nonroot {
                // 1 + a1 + a2 = 0 forces both to be primitive cube roots, so 3 | n
                let consistent = !nr.sum_vanishes || (nr.cube_roots && n % 3 == 0);
                claims.push(Claim::new(
                    "nonroot satisfies 1 + a1 + a2 = 0 only when 3 divides n",
                    consistent,
                    json!({ "sum_vanishes": nr.sum_vanishes, "exact": nr.sum_exact }),
                ));
            }
            Ok((claims, json!(rep)))
        }
    }
}

fn gcd_claims(set: &GcdSet) -> Outcome {
    let verdict = gcd_sets::verify_property(set);
    let mut claims = vec![Claim::new(
        "every divisor of every element is a gcd with exactly one element",
        verdict.holds,
        json!({ "violations": verdict.violations.len() }),
    )];
    let mut data = json!({ "set": set.elements(), "size": set.len(), "verdict": verdict });
    if verdict.holds && !set.is_empty() {
        let st = gcd_sets::structural_checks(set);
        claims.push(Claim::new("squarefree, |S| divisors each, |S| = 2^k", st.passed, json!(st)));
        data["structure"] = json!(st);
    }
    (claims, data)
}

fn parse_primes(text: &str) -> Result<Vec<u64>, UsageError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|e| invalid(format!("bad prime {s:?}: {e}"))))
        .collect()
}

fn gcdset(cmd: &GcdCmd) -> Result<Outcome, UsageError> {
    match cmd {
        GcdCmd::Verify { set } => {
            let s: GcdSet = parse_json(set, &read(set)?)?;
            Ok(gcd_claims(&s))
        }
        GcdCmd::Construct { k, primes } => {
            let primes = match primes {
                Some(text) => parse_primes(text)?,
                None => (2..).filter(|&p| is_prime(p)).take(2 * k).collect(),
            };
            if primes.len() != 2 * k {
                return Err(invalid(format!("need {} primes for k = {k}, got {}", 2 * k, primes.len())));
            }
            let set = gcd_sets::construct(&primes[..*k], &primes[*k..]).map_err(invalid)?;
            Ok(gcd_claims(&set))
        }
        GcdCmd::Search { max_element, max_size, unpruned } => {
            let mode = if *unpruned { gcd_sets::SearchMode::Unpruned } else { gcd_sets::SearchMode::Pruned };
            let res = gcd_sets::search_sizes(*max_element, *max_size, mode);
            let sizes = res.achievable();
            let claims = vec![Claim::new(
                "every achievable size is a power of two",
                sizes.iter().all(|s| s.is_power_of_two()),
                json!(sizes),
            )];
            Ok((claims, json!(res)))
        }
    }
}

fn geom(cmd: &GeomCmd, seed: u64) -> Result<Outcome, UsageError> {
    match cmd {
        GeomCmd::P1 { trials, perturb, tol } => {
            let b = suite::p1_batch(seed, *trials, *tol, *perturb).map_err(invalid)?;
            let claims = vec![
                Claim::new("three lines concurrent", b.concurrent, json!(b.max_concurrency_spread)),
                Claim::new("foot of the altitude lies on all three circles", b.on_circles, json!(b.max_circle_deviation)),
                Claim::new("foot of the altitude is the common point", b.foot_matches, json!(b.max_foot_offset)),
            ];
            Ok((claims, json!(b)))
        }
        GeomCmd::P6 { trials, tol } => {
            let b = suite::p6_batch(seed, *trials, *tol).map_err(invalid)?;
            let claims = vec![
                Claim::new("orthocenter is the midpoint of the circumcenters", b.midpoint_holds, json!(b.max_midpoint_deviation)),
                Claim::new("circumcenters and orthocenter collinear", b.collinear, json!(b.max_collinearity_area)),
                Claim::new("parallelogram triangles are translates", b.translate_holds, json!(b.max_translation_deviation)),
                Claim::new("power-of-a-point products", b.power_holds, json!(b.max_power_deviation)),
            ];
            Ok((claims, json!(b)))
        }
    }
}
