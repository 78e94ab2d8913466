//! The `sweep` subcommand: acceptance-ratio experiments over a
//! utilization grid.
//!
//! At every grid point the same generated sets are fed to every requested
//! test, so cross-test comparisons in one row group are paired, not
//! sampled. Each (base seed, point, set) triple derives its own generator
//! seed, making the whole CSV a pure function of the arguments.

use std::io::Write;
use std::process::ExitCode;

use k2u::generator::generate_taskset;
use k2u::model::TaskSet;
use k2u::Verdict;

use crate::analyze::{per_task_verdict, whole_set_verdict};
use crate::{SweepArgs, TestId};

const CSV_HEADER: &str = "test,n,m,util,sets,accepted,ratio,seed";

/// One row of an acceptance-ratio experiment.
struct SweepRecord {
    test_name: &'static str,
    n: usize,
    processors: u32,
    target_util: f64,
    sets_evaluated: usize,
    accepted: usize,
    seed: u64,
}

impl SweepRecord {
    fn acceptance_ratio(&self) -> f64 {
        self.accepted as f64 / self.sets_evaluated as f64
    }

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.test_name,
            self.n,
            self.processors,
            self.target_util,
            self.sets_evaluated,
            self.accepted,
            self.acceptance_ratio(),
            self.seed
        )
    }
}

fn split_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn derive_seed(base: u64, point: u64, set: u64) -> u64 {
    split_mix(
        base ^ point.wrapping_mul(0x9E37_79B9_7F4A_7C15)
            ^ set.wrapping_mul(0xD1B5_4A32_D192_ED03),
    )
}

fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return Err(format!("--util must be LO:HI:STEP, got {:?}", text));
    };
    let lo: f64 = lo.parse().map_err(|_| format!("bad grid bound {:?}", lo))?;
    let hi: f64 = hi.parse().map_err(|_| format!("bad grid bound {:?}", hi))?;
    let step: f64 = step
        .parse()
        .map_err(|_| format!("bad grid step {:?}", step))?;
    if !(step > 0.0 && lo <= hi) {
        return Err(format!("need LO <= HI and STEP > 0, got {:?}", text));
    }
    let mut grid = Vec::new();
    let mut i = 0u32;
    loop {
        let point = lo + step * i as f64;
        if point > hi + 1e-9 {
            break;
        }
        // Snap accumulated float noise so printed grid values stay clean.
        grid.push((point * 1e9).round() / 1e9);
        i += 1;
    }
    Ok(grid)
}

fn parse_period_range(text: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi] = parts.as_slice() else {
        return Err(format!("--period-range must be LO:HI, got {:?}", text));
    };
    let lo: f64 = lo.parse().map_err(|_| format!("bad period bound {:?}", lo))?;
    let hi: f64 = hi.parse().map_err(|_| format!("bad period bound {:?}", hi))?;
    Ok((lo, hi))
}

fn set_accepted(set: &TaskSet, test: TestId, tolerance: Option<f64>) -> Result<bool, String> {
    let judge = |v: &Verdict| match tolerance {
        Some(tol) => v.accepted_with(tol),
        None => v.accepted,
    };
    if test.is_whole_set() {
        let v = whole_set_verdict(set, test).map_err(|e| e.to_string())?;
        return Ok(judge(&v));
    }
    for k in 0..set.len() {
        let v = per_task_verdict(set, k, test, 1).map_err(|e| e.to_string())?;
        if !judge(&v) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn run(args: &SweepArgs, tolerance: Option<f64>) -> ExitCode {
    match run_inner(args, tolerance) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run_inner(args: &SweepArgs, tolerance: Option<f64>) -> Result<(), String> {
    if args.tests.is_empty() {
        return Err("--tests needs at least one test".to_string());
    }
    if args.tests.contains(&TestId::RmUs) {
        return Err("rm-us is a classification, not an accept/reject test; \
                    it cannot be swept"
            .to_string());
    }
    if let Some(t) = args
        .tests
        .iter()
        .find(|t| t.is_experimental() && !args.experimental_rt_bounds)
    {
        return Err(format!(
            "test '{}' requires --experimental-rt-bounds",
            t.name()
        ));
    }
    if args.sets < 1 {
        return Err("--sets must be at least 1".to_string());
    }
    let grid = parse_grid(&args.util)?;
    let period_range = parse_period_range(&args.period_range)?;

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for (point_index, &util) in grid.iter().enumerate() {
        let sets: Vec<TaskSet> = (0..args.sets)
            .map(|s| {
                let seed = derive_seed(args.seed, point_index as u64, s as u64);
                generate_taskset(
                    args.n,
                    util,
                    period_range,
                    args.deadline_class.into(),
                    seed,
                )
                .and_then(|set| set.with_processors(args.processors))
                .map_err(|e| e.to_string())
            })
            .collect::<Result<_, _>>()?;

        for &test in &args.tests {
            let mut accepted = 0usize;
            for set in &sets {
                if set_accepted(set, test, tolerance)? {
                    accepted += 1;
                }
            }
            let record = SweepRecord {
                test_name: test.name(),
                n: args.n,
                processors: args.processors,
                target_util: util,
                sets_evaluated: args.sets,
                accepted,
                seed: args.seed,
            };
            csv.push_str(&record.csv_row());
            csv.push('\n');
        }
    }

    let mut file = std::fs::File::create(&args.out)
        .map_err(|e| format!("cannot create {}: {}", args.out.display(), e))?;
    file.write_all(csv.as_bytes())
        .map_err(|e| format!("cannot write {}: {}", args.out.display(), e))?;
    Ok(())
}
