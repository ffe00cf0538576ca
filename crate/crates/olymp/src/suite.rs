//! Batch runners shared by the subcommands, and the full acceptance run.

use std::time::Instant;

use olymp_core::cyclic_system::{check_identities, residual, solve, sup_norm, Assignment, SolverConfig};
use olymp_core::gcd_sets::{construct, is_prime, search_sizes, structural_checks, verify_property, SearchMode};
use olymp_core::geometry::{random_hexagon, random_rect_config, verify_p1, verify_p6, GeometryError, RectConfig};
use olymp_core::park_walk::{
    all_starts, extremal_witness, max_visits, random_layout, simulate, trail_traversal_counts, ParkLayout, WalkError,
};
use olymp_core::seed;
use olymp_core::tromino::{
    constructive_clear, eisenstein_invariant, exhaustive_search, random_play, tally_and_certify, Board, Move,
    SearchOutcome, TrominoError,
};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::{Claim, RunReport};

pub const GEOMETRY_TOL: f64 = 1e-7;
/// Smallest concurrency spread the perturbed configurations must show.
pub const CONTROL_MARGIN: f64 = 1e-3;
pub const CONTROL_PERTURBATION: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub geometry_tol: f64,
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        Self { seed, geometry_tol: GEOMETRY_TOL }
    }
}

/// Worst walk statistics over every start of every layout.
#[derive(Clone, Debug, Default, Serialize)]
pub struct WalkStats {
    pub layouts: usize,
    pub walks: usize,
    pub max_visits: usize,
    pub max_traversals: usize,
    pub longest_walk: usize,
}

impl WalkStats {
    pub fn add_layout(&mut self, layout: &ParkLayout) -> Result<(), WalkError> {
        self.layouts += 1;
        for (start, trail, turn) in all_starts(layout) {
            let walk = simulate(layout, start, trail, turn)?;
            self.walks += 1;
            self.max_visits = self.max_visits.max(max_visits(&walk).1);
            let trav = trail_traversal_counts(&walk).into_values().max().unwrap_or(0);
            self.max_traversals = self.max_traversals.max(trav);
            self.longest_walk = self.longest_walk.max(walk.steps.len());
        }
        Ok(())
    }

    pub fn within_bounds(&self) -> bool {
        self.max_visits <= 3 && self.max_traversals <= 2
    }
}

/// Random layouts with 4, 6, …, `max_junctions` junctions, cycling sizes.
pub fn park_fuzz(seed: u64, layouts: usize, max_junctions: usize) -> Result<WalkStats, WalkError> {
    let sizes: Vec<usize> = (4..=max_junctions.max(4)).step_by(2).collect();
    let mut stats = WalkStats::default();
    for k in 0..layouts {
        let mut rng = seed::rng(seed, "park-fuzz", k as u64);
        stats.add_layout(&random_layout(sizes[k % sizes.len()], &mut rng))?;
    }
    Ok(stats)
}

#[derive(Clone, Debug, Serialize)]
pub struct P1Batch {
    pub trials: usize,
    pub tol: f64,
    pub perturbation: Option<f64>,
    pub max_concurrency_spread: f64,
    pub min_concurrency_spread: f64,
    pub max_circle_deviation: f64,
    pub max_foot_offset: f64,
    pub concurrent: bool,
    pub on_circles: bool,
    pub foot_matches: bool,
}

/// `trials` random configurations; with `perturbation`, the third height is
/// scaled by `1 + perturbation`, breaking the angle condition.
pub fn p1_batch(seed: u64, trials: usize, tol: f64, perturbation: Option<f64>) -> Result<P1Batch, GeometryError> {
    let mut b = P1Batch {
        trials,
        tol,
        perturbation,
        max_concurrency_spread: 0.0,
        min_concurrency_spread: f64::INFINITY,
        max_circle_deviation: 0.0,
        max_foot_offset: 0.0,
        concurrent: true,
        on_circles: true,
        foot_matches: true,
    };
    for k in 0..trials {
        let mut rng = seed::rng(seed, "p1", k as u64);
        let mut cfg = random_rect_config(&mut rng)?;
        if let Some(eps) = perturbation {
            let [ha, hb, hc] = cfg.heights;
            cfg = RectConfig::unconstrained(cfg.tri, [ha, hb, hc * (1.0 + eps)])?;
        }
        let r = verify_p1(&cfg, tol)?;
        b.max_concurrency_spread = b.max_concurrency_spread.max(r.concurrency_spread);
        b.min_concurrency_spread = b.min_concurrency_spread.min(r.concurrency_spread);
        b.max_circle_deviation = r.circle_deviation.iter().fold(b.max_circle_deviation, |m, &d| m.max(d));
        b.max_foot_offset = b.max_foot_offset.max(r.foot_offset);
        b.concurrent &= r.concurrent;
        b.on_circles &= r.on_circles;
        b.foot_matches &= r.foot_matches;
    }
    Ok(b)
}

#[derive(Clone, Debug, Serialize)]
pub struct P6Batch {
    pub trials: usize,
    pub tol: f64,
    pub max_midpoint_deviation: f64,
    pub max_collinearity_area: f64,
    pub max_translation_deviation: f64,
    pub max_power_deviation: f64,
    pub max_circumcenter_shift: f64,
    pub max_medial_deviation: f64,
    pub midpoint_holds: bool,
    pub collinear: bool,
    pub translate_holds: bool,
    pub power_holds: bool,
}

pub fn p6_batch(seed: u64, trials: usize, tol: f64) -> Result<P6Batch, GeometryError> {
    let mut b = P6Batch {
        trials,
        tol,
        max_midpoint_deviation: 0.0,
        max_collinearity_area: 0.0,
        max_translation_deviation: 0.0,
        max_power_deviation: 0.0,
        max_circumcenter_shift: 0.0,
        max_medial_deviation: 0.0,
        midpoint_holds: true,
        collinear: true,
        translate_holds: true,
        power_holds: true,
    };
    let fmax = |acc: f64, xs: &[f64]| xs.iter().fold(acc, |m, &x| m.max(x));
    for k in 0..trials {
        let mut rng = seed::rng(seed, "p6", k as u64);
        let r = verify_p6(&random_hexagon(&mut rng)?, tol)?;
        b.max_midpoint_deviation = b.max_midpoint_deviation.max(r.midpoint_deviation);
        b.max_collinearity_area = b.max_collinearity_area.max(r.collinearity_area);
        b.max_translation_deviation = b.max_translation_deviation.max(r.translation_deviation);
        b.max_power_deviation = fmax(b.max_power_deviation, &r.power_deviation);
        b.max_circumcenter_shift = fmax(b.max_circumcenter_shift, &r.circumcenter_shift);
        b.max_medial_deviation = fmax(b.max_medial_deviation, &r.medial_deviation);
        b.midpoint_holds &= r.midpoint_holds;
        b.collinear &= r.collinear;
        b.translate_holds &= r.translate_holds;
        b.power_holds &= r.power_holds;
    }
    Ok(b)
}

#[derive(Clone, Debug, Serialize)]
pub struct CyclicRun {
    pub start: usize,
    pub converged: bool,
    pub iterations: Option<usize>,
    pub residual: Option<f64>,
    /// Largest distance from `(1, 2, 1, 2, …)`, for converged runs.
    pub distance_to_canonical: Option<f64>,
    pub sum_identity_gap: Option<f64>,
    pub square_identity_gap: Option<f64>,
    pub identities_hold: Option<bool>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CyclicBatch {
    pub n: usize,
    pub starts: usize,
    pub converged: usize,
    /// Converged runs farther than `1e−6` from the canonical solution.
    pub elsewhere: usize,
    pub max_identity_gap: f64,
    pub identities_hold: bool,
    pub runs: Vec<CyclicRun>,
}

/// Residual below which a run counts as converged.
pub const ACCEPT_RESIDUAL: f64 = 1e-9;

/// Newton from `starts` initial points drawn uniformly from `[0.5, 3]^{2n}`.
pub fn cyclic_batch(seed: u64, n: usize, starts: usize, tol: f64) -> CyclicBatch {
    let cfg = SolverConfig { tol, ..SolverConfig::default() };
    let mut runs = Vec::with_capacity(starts);
    for k in 0..starts {
        let mut rng = seed::rng(seed, "cyclic", (n * 100_000 + k) as u64);
        let values: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(0.5..3.0)).collect();
        let mut run = CyclicRun {
            start: k,
            converged: false,
            iterations: None,
            residual: None,
            distance_to_canonical: None,
            sum_identity_gap: None,
            square_identity_gap: None,
            identities_hold: None,
            error: None,
        };
        match Assignment::new(values).and_then(|x| solve(&x, cfg)) {
            Ok(sol) if sol.residual < ACCEPT_RESIDUAL => {
                run.converged = true;
                run.iterations = Some(sol.iterations);
                run.residual = Some(sol.residual);
                let dist = sol
                    .assignment
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v - if i % 2 == 0 { 1.0 } else { 2.0 }).abs())
                    .fold(0.0, f64::max);
                run.distance_to_canonical = Some(dist);
                match check_identities(&sol.assignment, ACCEPT_RESIDUAL) {
                    Ok(rep) => {
                        run.sum_identity_gap = Some(rep.sum_identity_gap);
                        run.square_identity_gap = Some(rep.square_identity_gap);
                        let gaps_small = rep.sum_identity_gap < 1e-8 && rep.square_identity_gap < 1e-8;
                        run.identities_hold = Some(rep.passed() && gaps_small);
                    }
                    Err(e) => run.error = Some(e.to_string()),
                }
            }
            Ok(sol) => run.error = Some(format!("residual {:e} above acceptance", sol.residual)),
            Err(e) => run.error = Some(e.to_string()),
        }
        runs.push(run);
    }
    let converged = runs.iter().filter(|r| r.converged).count();
    let elsewhere = runs.iter().filter(|r| r.distance_to_canonical.is_some_and(|d| d >= 1e-6)).count();
    let max_identity_gap = runs
        .iter()
        .flat_map(|r| [r.sum_identity_gap, r.square_identity_gap])
        .flatten()
        .fold(0.0, f64::max);
    let identities_hold = runs.iter().filter(|r| r.converged).all(|r| r.identities_hold == Some(true));
    CyclicBatch { n, starts, converged, elsewhere, max_identity_gap, identities_hold, runs }
}

fn error_claim(name: &str, e: impl std::fmt::Display) -> Claim {
    Claim::new(name, false, json!({ "error": e.to_string() }))
}

pub const CRITERIA: [&str; 8] = [
    "1 park: three visits reached, never exceeded",
    "2 tromino: constructive clearing",
    "3 tromino: exhaustive impossibility for n = 2, 4",
    "4 tromino: certificates and invariant",
    "5 gcd sets: construction and achievable sizes",
    "6 cyclic system: canonical solution is the only landing point",
    "7 geometry: rectangle lines concurrent",
    "8 geometry: hexagon midpoint and collinearity",
];

pub fn criterion_park(cfg: &SuiteConfig) -> Claim {
    let name = CRITERIA[0];
    let witness = extremal_witness();
    let walk = match witness.simulate() {
        Ok(w) => w,
        Err(e) => return error_claim(name, e),
    };
    let bundled = max_visits(&walk);
    let stats = match park_fuzz(cfg.seed, 1000, 14) {
        Ok(s) => s,
        Err(e) => return error_claim(name, e),
    };
    let ok = bundled.1 == 3 && stats.within_bounds() && stats.layouts >= 1000;
    Claim::new(
        name,
        ok,
        json!({
            "bundled_path": walk.path(),
            "bundled_trails": walk.steps.len(),
            "bundled_max_visits": { "junction": bundled.0, "count": bundled.1 },
            "fuzz": stats,
        }),
    )
}

pub fn criterion_construct(_: &SuiteConfig) -> Claim {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in [3, 6, 9, 12] {
        let result = constructive_clear(n).and_then(|moves| {
            let end = Board::empty(n)?.replay(&moves)?;
            Ok((moves.len(), end.is_empty()))
        });
        match result {
            Ok((len, empty)) => {
                let expected = 3 * (n / 3) * (n / 3) + n;
                ok &= empty && len == expected;
                rows.push(json!({ "n": n, "moves": len, "expected": expected, "ends_empty": empty }));
            }
            Err(e) => return error_claim(CRITERIA[1], e),
        }
    }
    Claim::new(CRITERIA[1], ok, Value::Array(rows))
}

fn search_row(n: usize) -> Result<(SearchOutcome, Value), TrominoError> {
    let out = exhaustive_search(n, usize::MAX)?;
    let row = json!({
        "n": n,
        "outcome": match &out {
            SearchOutcome::Found { .. } => "found",
            SearchOutcome::ProvenAbsent { .. } => "proven_absent",
            SearchOutcome::Inconclusive { .. } => "inconclusive",
        },
        "states_explored": out.states_explored(),
        "witness_length": out.witness().map(<[Move]>::len),
    });
    Ok((out, row))
}

pub fn criterion_search(_: &SuiteConfig) -> Claim {
    let name = CRITERIA[2];
    let mut rows = Vec::new();
    let mut ok = true;
    for (n, bound) in [(2, 16), (3, usize::MAX), (4, 65_536)] {
        let (out, row) = match search_row(n) {
            Ok(r) => r,
            Err(e) => return error_claim(name, e),
        };
        ok &= match out {
            SearchOutcome::ProvenAbsent { states_explored } => n != 3 && states_explored <= bound,
            SearchOutcome::Found { ref moves, .. } => n == 3 && !moves.is_empty() && moves.len() <= 6,
            SearchOutcome::Inconclusive { .. } => false,
        };
        rows.push(row);
    }
    Claim::new(name, ok, Value::Array(rows))
}

pub fn criterion_certificate(cfg: &SuiteConfig) -> Claim {
    let name = CRITERIA[3];
    let run = || -> Result<(bool, Value), TrominoError> {
        let mut ok = true;
        let mut rows = Vec::new();
        let bfs = exhaustive_search(3, usize::MAX)?.witness().map(<[Move]>::to_vec).unwrap_or_default();
        ok &= !bfs.is_empty();
        let mut sequences = vec![("bfs", 3, bfs)];
        for n in [3, 6, 9, 12] {
            sequences.push(("constructive", n, constructive_clear(n)?));
        }
        for (source, n, moves) in &sequences {
            let rep = tally_and_certify(moves, *n)?;
            let nr = rep.nonroot.as_ref();
            let cube = nr.is_some_and(|r| r.sum_vanishes && r.sum_exact && r.cube_roots);
            ok &= rep.identity_holds && nr.is_some() && (*n != 3 || cube);
            rows.push(json!({
                "source": source,
                "n": n,
                "moves": moves.len(),
                "identity_holds": rep.identity_holds,
                "nonroot": nr.map(|r| json!({
                    "a1": r.a1, "a2": r.a2,
                    "p_value": r.p_value_exact.clone().unwrap_or_else(|| format!("{:?}", r.p_value)),
                    "sum_vanishes_exactly": r.sum_vanishes && r.sum_exact,
                })),
            }));
        }
        // the invariant on every prefix: the sequences above plus seeded random games
        let mut prefixes = 0usize;
        let mut invariant_ok = true;
        let mut games: Vec<(usize, Vec<Move>)> = sequences.into_iter().map(|(_, n, m)| (n, m)).collect();
        for k in 0..60 {
            let n = [3, 6, 9][k % 3];
            let mut rng = seed::rng(cfg.seed, "tromino-games", k as u64);
            games.push((n, random_play(n, 150, &mut rng)?));
        }
        for (n, moves) in &games {
            let mut board = Board::empty(*n)?;
            invariant_ok &= eisenstein_invariant(&board).is_zero();
            for &m in moves {
                board.apply_mut(m).map_err(|e| TrominoError::InvalidMove { index: prefixes, mv: m, source: e })?;
                prefixes += 1;
                invariant_ok &= eisenstein_invariant(&board).is_zero();
            }
        }
        ok &= invariant_ok;
        Ok((ok, json!({ "certificates": rows, "invariant_prefixes_checked": prefixes, "invariant_zero": invariant_ok })))
    };
    match run() {
        Ok((ok, detail)) => Claim::new(name, ok, detail),
        Err(e) => error_claim(name, e),
    }
}

pub fn criterion_gcd(_: &SuiteConfig) -> Claim {
    let name = CRITERIA[4];
    let primes: Vec<u64> = (2..100).filter(|&p| is_prime(p)).collect();
    let mut ok = true;
    let mut constructions = Vec::new();
    for k in 1..=4 {
        let set = match construct(&primes[..k], &primes[k..2 * k]) {
            Ok(s) => s,
            Err(e) => return error_claim(name, e),
        };
        let holds = verify_property(&set).holds && structural_checks(&set).passed;
        ok &= holds && set.len() == 1 << k;
        constructions.push(json!({ "k": k, "set": set.elements(), "verified": holds }));
    }
    let search = search_sizes(200, 4, SearchMode::Pruned);
    let achievable: Vec<usize> = search.achievable().into_iter().collect();
    ok &= achievable == [1, 2, 4];
    let prime_squares = primes.iter().filter(|&&p| p * p <= 200).count();
    let size3 = &search.per_size[2];
    let c3 = prime_squares * (prime_squares - 1) * (prime_squares - 2) / 6;
    let refuted = size3.witness.is_none() && size3.candidates == prime_squares && size3.subsets_checked == c3 as u64;
    ok &= refuted;
    Claim::new(
        name,
        ok,
        json!({
            "constructions": constructions,
            "achievable_sizes": achievable,
            "empty_set_valid": search.empty_set_valid,
            "per_size": search.per_size,
            "size_three_candidates_are_prime_squares": size3.candidates == prime_squares,
            "size_three_refuted": refuted,
        }),
    )
}

pub fn criterion_cyclic(cfg: &SuiteConfig) -> Claim {
    let worst_canonical =
        (4..=64).map(|n| sup_norm(&residual(&Assignment::canonical(n).expect("n ≥ 4")))).fold(0.0, f64::max);
    let mut ok = worst_canonical < 1e-14;
    let mut rows = Vec::new();
    for n in 4..=10 {
        let b = cyclic_batch(cfg.seed, n, 100, SolverConfig::default().tol);
        ok &= b.elsewhere == 0 && b.identities_hold;
        rows.push(json!({
            "n": n,
            "starts": b.starts,
            "converged": b.converged,
            "elsewhere": b.elsewhere,
            "max_identity_gap": b.max_identity_gap,
        }));
    }
    Claim::new(CRITERIA[5], ok, json!({ "canonical_max_residual": worst_canonical, "newton": rows }))
}

pub fn criterion_p1(cfg: &SuiteConfig) -> Claim {
    let name = CRITERIA[6];
    let valid = match p1_batch(cfg.seed, 1000, cfg.geometry_tol, None) {
        Ok(b) => b,
        Err(e) => return error_claim(name, e),
    };
    let control = match p1_batch(cfg.seed, 1000, cfg.geometry_tol, Some(CONTROL_PERTURBATION)) {
        Ok(b) => b,
        Err(e) => return error_claim(name, e),
    };
    let control_fails = control.min_concurrency_spread >= CONTROL_MARGIN;
    let ok = valid.concurrent && valid.on_circles && control_fails;
    Claim::new(name, ok, json!({ "valid": valid, "negative_control": control, "control_fails": control_fails }))
}

pub fn criterion_p6(cfg: &SuiteConfig) -> Claim {
    match p6_batch(cfg.seed, 1000, cfg.geometry_tol) {
        Ok(b) => {
            let ok = b.midpoint_holds && b.collinear && b.translate_holds && b.power_holds;
            Claim::new(CRITERIA[7], ok, json!(b))
        }
        Err(e) => error_claim(CRITERIA[7], e),
    }
}

pub type Criterion = fn(&SuiteConfig) -> Claim;

pub const CRITERION_FNS: [Criterion; 8] = [
    criterion_park,
    criterion_construct,
    criterion_search,
    criterion_certificate,
    criterion_gcd,
    criterion_cyclic,
    criterion_p1,
    criterion_p6,
];

/// Run one criterion and record its wall time on the claim.
pub fn timed(f: Criterion, cfg: &SuiteConfig) -> Claim {
    let t = Instant::now();
    let mut claim = f(cfg);
    claim.runtime_ms = Some(t.elapsed().as_secs_f64() * 1e3);
    claim
}

pub fn run_all(command: Vec<String>, cfg: &SuiteConfig) -> RunReport {
    let t = Instant::now();
    let claims: Vec<Claim> = CRITERION_FNS.iter().map(|&f| timed(f, cfg)).collect();
    let mut report = RunReport::new(command, cfg.seed, claims, json!({ "geometry_tol": cfg.geometry_tol }));
    report.runtime_ms = t.elapsed().as_secs_f64() * 1e3;
    report
}
