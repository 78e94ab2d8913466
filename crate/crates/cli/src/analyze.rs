//! The `analyze` subcommand: run one test over a task-set file and print
//! a JSON report.

use std::process::ExitCode;

use serde::Serialize;

use k2u::model::{parse_taskset, TaskSet};
use k2u::multiproc::{self, TaskModel};
use k2u::rt_bounds::{rt_bound_hyperbolic, rt_bound_linear, RtBoundResult};
use k2u::uniproc;
use k2u::{Error, Verdict};

use crate::{AnalyzeArgs, TestId};

#[derive(Serialize)]
struct Report {
    input: String,
    test: &'static str,
    verdicts: Vec<VerdictRow>,
    all_accepted: bool,
}

#[derive(Serialize)]
struct VerdictRow {
    /// 1-based task index; absent for whole-set verdicts.
    #[serde(skip_serializing_if = "Option::is_none")]
    task: Option<usize>,
    accepted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Serialize)]
struct PartitionReport {
    input: String,
    test: &'static str,
    /// 1-based indices of top-priority-band tasks.
    top: Vec<usize>,
    /// 1-based indices of the remaining tasks, rate-monotonic order.
    rm: Vec<usize>,
}

fn finite(x: f64) -> Option<f64> {
    (!x.is_nan()).then_some(x)
}

fn row(task: Option<usize>, verdict: &Verdict, tolerance: Option<f64>) -> VerdictRow {
    let accepted = match tolerance {
        Some(tol) => verdict.accepted_with(tol),
        None => verdict.accepted,
    };
    VerdictRow {
        task,
        accepted,
        value: finite(verdict.value),
        bound: finite(verdict.bound),
        note: verdict.note.clone(),
    }
}

/// Runs `test` for task `k` (0-based), mapping not-applicable errors to
/// not-applicable verdicts. Hard errors (bad fields, divergence) bubble up.
pub(crate) fn per_task_verdict(
    set: &TaskSet,
    k: usize,
    test: TestId,
    f: u32,
) -> Result<Verdict, Error> {
    let arbitrary = set.tasks()[k].deadline() > set.tasks()[k].period();
    let outcome = match test {
        TestId::Tda => uniproc::tda_exact(set, k),
        TestId::FpHyperbolic => uniproc::fp_hyperbolic_test(set, k, f, arbitrary),
        TestId::FpSum => uniproc::fp_sum_test(set, k, f, arbitrary),
        TestId::BusyWindow => uniproc::busy_window_sufficient(set, k),
        TestId::GrmNaive => multiproc::grm_naive_test(set, k),
        TestId::Grm => multiproc::grm_closed_form_test(set, k, TaskModel::Sporadic),
        TestId::GrmDag => multiproc::grm_closed_form_test(set, k, TaskModel::Dag),
        TestId::GrmSuspend => multiproc::grm_closed_form_test(set, k, TaskModel::Suspending),
        TestId::GrmTight => multiproc::grm_tight_test(set, k),
        TestId::Bertogna => multiproc::bertogna_test(set, k),
        TestId::RtLinear => rt_bound_linear(set, k).map(|r| rt_verdict("rt-linear", set, k, r)),
        TestId::RtHyperbolic => {
            rt_bound_hyperbolic(set, k).map(|r| rt_verdict("rt-hyperbolic", set, k, r))
        }
        TestId::EdfDbf | TestId::GrmFast | TestId::RmUs => unreachable!("whole-set test"),
    };
    match outcome {
        Err(Error::NotApplicable { test, reason }) => Ok(Verdict::not_applicable(test, reason)),
        other => other,
    }
}

/// A response-time bound becomes a schedulability verdict by comparing it
/// against the task's deadline.
fn rt_verdict(name: &'static str, set: &TaskSet, k: usize, r: RtBoundResult) -> Verdict {
    match r.bound {
        Some(bound) => Verdict::decide(name, bound, set.tasks()[k].deadline()),
        None => Verdict::not_applicable(
            name,
            r.note.unwrap_or_else(|| "precondition failed".to_string()),
        ),
    }
}

pub(crate) fn whole_set_verdict(set: &TaskSet, test: TestId) -> Result<Verdict, Error> {
    let outcome = match test {
        TestId::EdfDbf => uniproc::edf_dbf_feasible(set, None),
        TestId::GrmFast => multiproc::fast_monotonic_test(set),
        _ => unreachable!("per-task test"),
    };
    match outcome {
        Err(Error::NotApplicable { test, reason }) => Ok(Verdict::not_applicable(test, reason)),
        other => other,
    }
}

pub(crate) fn run(args: &AnalyzeArgs, tolerance: Option<f64>) -> ExitCode {
    match run_inner(args, tolerance) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run_inner(args: &AnalyzeArgs, tolerance: Option<f64>) -> Result<ExitCode, String> {
    if args.test.is_experimental() && !args.experimental_rt_bounds {
        return Err(format!(
            "test '{}' requires --experimental-rt-bounds",
            args.test.name()
        ));
    }

    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| format!("cannot read {}: {}", args.input.display(), e))?;
    let mut set = parse_taskset(&text).map_err(|e| e.to_string())?;
    if let Some(m) = args.processors {
        set = set.with_processors(m).map_err(|e| e.to_string())?;
    }

    let input = args.input.display().to_string();

    if args.test == TestId::RmUs {
        let p = multiproc::rm_us_classify(&set, multiproc::RM_US_THRESHOLD);
        let report = PartitionReport {
            input,
            test: "rm-us",
            top: p.top.iter().map(|i| i + 1).collect(),
            rm: p.rm.iter().map(|i| i + 1).collect(),
        };
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
        return Ok(ExitCode::SUCCESS);
    }

    let tasks: Vec<usize> = if args.task == "all" {
        (0..set.len()).collect()
    } else {
        let index: usize = args
            .task
            .parse()
            .map_err(|_| format!("--task must be a 1-based index or \"all\", got {:?}", args.task))?;
        if index == 0 || index > set.len() {
            return Err(format!(
                "task index {} out of range 1..={}",
                index,
                set.len()
            ));
        }
        vec![index - 1]
    };

    let mut rows = Vec::new();
    if args.test.is_whole_set() {
        let verdict = whole_set_verdict(&set, args.test).map_err(|e| e.to_string())?;
        rows.push(row(None, &verdict, tolerance));
    } else {
        for &k in &tasks {
            let verdict =
                per_task_verdict(&set, k, args.test, args.f).map_err(|e| e.to_string())?;
            rows.push(row(Some(k + 1), &verdict, tolerance));
        }
    }

    let all_accepted = rows.iter().all(|r| r.accepted);
    let report = Report {
        input,
        test: args.test.name(),
        verdicts: rows,
        all_accepted,
    };
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(if all_accepted {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
