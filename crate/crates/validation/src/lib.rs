//! Reporting harness for the acceptance suite in `tests/acceptance.rs`.
//!
//! Each criterion prints one line,
//! `PASS|FAIL <id> <name>: <detail> [<elapsed> s of <budget> s]`.
//! A criterion that finishes over its time budget fails.

use std::time::{Duration, Instant};

pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

pub fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Runs one criterion, prints its line and returns whether it passed.
pub fn run(id: u32, name: &str, budget: Duration, check: impl FnOnce() -> Result<Outcome, String>) -> bool {
    let t = Instant::now();
    let res = check();
    let elapsed = t.elapsed();
    let line = report_line(id, name, budget, elapsed, res);
    println!("{}", line.0);
    line.1
}

fn report_line(id: u32, name: &str, budget: Duration, elapsed: Duration, res: Result<Outcome, String>) -> (String, bool) {
    let in_time = elapsed <= budget;
    let (pass, detail) = match res {
        Ok(o) => (o.pass && in_time, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    let line = format!(
        "{} {id} {name}: {detail} [{:.1} s of {} s{}]",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs(),
        if in_time { "" } else { ", over budget" },
    );
    (line, pass)
}
