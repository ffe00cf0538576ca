//! End-to-end acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use olymp::report::strip_timing;
use olymp::suite::{SuiteConfig, CRITERIA, CRITERION_FNS};
use serde_json::Value;

const SEED: u64 = 42;
/// Wall-clock budgets for criteria 1–8.
const BUDGETS: [Duration; 8] = [
    Duration::from_secs(30),
    Duration::from_secs(1),
    Duration::from_secs(60),
    Duration::from_secs(5),
    Duration::from_secs(60),
    Duration::from_secs(60),
    Duration::from_secs(10),
    Duration::from_secs(10),
];

fn run_all_report() -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_olymp"))
        .args(["run-all", "--seed", &SEED.to_string()])
        .env_remove("OLYMP_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.code() != Some(0) {
        return Err(format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    let mut v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    strip_timing(&mut v);
    Ok(v)
}

fn main() {
    let cfg = SuiteConfig::new(SEED);
    let mut failures = 0;
    for (k, (&f, budget)) in CRITERION_FNS.iter().zip(BUDGETS).enumerate() {
        let t = Instant::now();
        let claim = f(&cfg);
        let elapsed = t.elapsed();
        let ok = claim.passed() && elapsed < budget;
        failures += usize::from(!ok);
        println!(
            "criterion {}: {} ({:.3} s, budget {} s) {}",
            k + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            CRITERIA[k]
        );
        if !ok {
            println!("  detail: {}", claim.detail);
        }
    }

    let det = run_all_report().and_then(|a| run_all_report().map(|b| (a, b)));
    let ok = match &det {
        Ok((a, b)) => a == b,
        Err(_) => false,
    };
    failures += usize::from(!ok);
    println!("criterion 9: {} determinism: run-all --seed {SEED} twice, timing fields removed", if ok { "PASS" } else { "FAIL" });
    if let Err(e) = det {
        println!("  detail: {e}");
    }

    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
