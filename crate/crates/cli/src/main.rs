//! `engine` — scenario-driven front end for the oriented-line geometry
//! engine.
//!
//! ```text
//! engine run <config.json>      run a scenario: checks, CSV reports, summary
//! engine catalog                list built-in surfaces and fields
//! engine export <config.json>   write only the OBJ meshes of a scenario
//! ```
//!
//! Exit status: `0` all requested checks pass (or match their expected
//! verdicts), `1` a check failed, `2` the config did not parse or
//! validate, `3` a geometry error surfaced while running a check (the
//! diagnostic names the grid location).
//!
//! `ENGINE_THREADS` caps check-level parallelism (default: hardware
//! count). Reports are assembled in configuration order regardless of
//! scheduling, and identical configs produce byte-identical files.

mod checks;
mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use rayon::prelude::*;

use checks::{run_check, CheckOutcome};
use config::Scenario;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    match args.get(1).map(String::as_str) {
        Some("run") => match args.get(2) {
            Some(path) => run_scenario(Path::new(path), true),
            None => usage(),
        },
        Some("export") => match args.get(2) {
            Some(path) => run_scenario(Path::new(path), false),
            None => usage(),
        },
        Some("catalog") => {
            print!("{}", congruence_core::catalog::listing());
            ExitCode::SUCCESS
        }
        _ => usage(),
    }
}

fn usage() -> ExitCode {
    eprintln!(
        "usage:\n  engine run <config.json>\n  engine catalog\n  engine export <config.json>"
    );
    ExitCode::from(2)
}

fn init_thread_pool() {
    let threads = std::env::var("ENGINE_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|n| *n >= 1);
    if let Some(n) = threads {
        // Ignore the error if a pool already exists (tests call this twice).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn run_scenario(path: &Path, with_checks: bool) -> ExitCode {
    init_thread_pool();
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("config parse error: cannot read {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    let parsed = match config::parse(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let scenario = match config::instantiate(parsed) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    // Geometry invariants on the actual grid: the chart must stay immersed
    // and the field must be unit and of its declared kind everywhere.
    if let Err(e) = scenario.chart.validate_immersion(&scenario.grid) {
        eprintln!("geometry error: {e}");
        return ExitCode::from(3);
    }
    if let Err(e) = scenario.field.validate_on(&scenario.grid) {
        eprintln!("geometry error: {e}");
        return ExitCode::from(3);
    }

    let out_dir = PathBuf::from(&scenario.config.output_dir);
    if let Err(e) = std::fs::create_dir_all(&out_dir) {
        eprintln!("cannot create output dir {}: {e}", out_dir.display());
        return ExitCode::from(2);
    }

    if with_checks {
        match execute_checks(&scenario, &out_dir) {
            Ok(all_passed) => {
                if let Err(code) = write_exports(&scenario, &out_dir) {
                    return code;
                }
                if all_passed {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(code) => code,
        }
    } else {
        match write_exports(&scenario, &out_dir) {
            Ok(()) => ExitCode::SUCCESS,
            Err(code) => code,
        }
    }
}

fn execute_checks(scenario: &Scenario, out_dir: &Path) -> Result<bool, ExitCode> {
    let results: Vec<Result<CheckOutcome, checks::CheckError>> = scenario
        .config
        .checks
        .par_iter()
        .map(|spec| run_check(scenario, spec))
        .collect();

    let mut outcomes = Vec::with_capacity(results.len());
    for result in results {
        match result {
            Ok(outcome) => outcomes.push(outcome),
            Err(e) => {
                eprintln!("{e}");
                return Err(ExitCode::from(3));
            }
        }
    }

    let mut summary = String::new();
    summary.push_str(&format!("scenario: {}\n", scenario.config.name));
    summary.push_str(&format!(
        "grid: {}\n",
        scenario
            .grid
            .axes()
            .iter()
            .map(|a| format!(
                "[{}, {}] x{}",
                output::fmt(a.min),
                output::fmt(a.max),
                a.count
            ))
            .collect::<Vec<_>>()
            .join(" ; ")
    ));
    let mut all_passed = true;
    for (idx, outcome) in outcomes.iter().enumerate() {
        all_passed &= outcome.passed;
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        summary.push_str(&format!("[{status}] {}\n", outcome.summary));
        if let Some(table) = &outcome.table {
            let file = out_dir.join(format!("{:02}_{}.csv", idx, outcome.name));
            if let Err(e) = table.write_to(&file) {
                eprintln!("cannot write {}: {e}", file.display());
                return Err(ExitCode::from(3));
            }
        }
    }
    summary.push_str(&format!(
        "result: {}\n",
        if all_passed { "PASS" } else { "FAIL" }
    ));
    print!("{summary}");
    if let Err(e) = std::fs::write(out_dir.join("summary.txt"), &summary) {
        eprintln!("cannot write summary: {e}");
        return Err(ExitCode::from(3));
    }
    Ok(all_passed)
}

fn write_exports(scenario: &Scenario, out_dir: &Path) -> Result<(), ExitCode> {
    for spec in &scenario.config.export {
        let path = out_dir.join(&spec.path);
        let result = match spec.what.as_str() {
            "surface" => {
                let chart = scenario.chart.clone();
                output::write_obj(&path, &scenario.config.name, &scenario.grid, |u| {
                    chart.value(u).expect("surface point inside grid")
                })
            }
            "sheet" => {
                let Some(nu) = scenario.normal.as_ref() else {
                    eprintln!("sheet export needs a hypersurface scenario");
                    return Err(ExitCode::from(2));
                };
                let index = spec.index.unwrap_or(0);
                match congruence_core::focal::FocalSheet::build(
                    &scenario.chart,
                    nu,
                    index,
                    &scenario.grid,
                ) {
                    Ok(sheet) => {
                        output::write_obj(&path, &scenario.config.name, &scenario.grid, |u| {
                            sheet.value(u).expect("sheet point inside grid")
                        })
                    }
                    Err(e) => {
                        eprintln!("sheet export failed: {e}");
                        return Err(ExitCode::from(3));
                    }
                }
            }
            other => {
                eprintln!("unknown export target {other:?} (surface | sheet)");
                return Err(ExitCode::from(2));
            }
        };
        if let Err(e) = result {
            eprintln!("export to {} failed: {e}", path.display());
            return Err(ExitCode::from(3));
        }
    }
    Ok(())
}
