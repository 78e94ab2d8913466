//! Global rate-monotonic schedulability tests on identical multiprocessors.
//!
//! All tests here require implicit deadlines and RM priority order (no
//! higher-priority task with a longer period than the analyzed task);
//! anything else yields a not-applicable verdict.
//!
//! Interference is over-approximated per higher-priority task by the
//! workload function [`workload_w`], which inflates the carry-in job to a
//! full extra execution. Restricting the resulting demand test to the last
//! release of each task before `T_k` gives a k-point test with
//! coefficients bounded by `alpha <= 2/M` and `beta <= 1/M`; the closed
//! forms below are its hyperbolic and total-utilization instantiations for
//! sporadic ([`grm_closed_form_test`]), DAG, and self-suspending tasks,
//! with [`fast_monotonic_test`] as a linear-time whole-set variant and
//! [`grm_tight_test`] as a sharper test based on the maximum per-task
//! utilization. [`bertogna_test`] is the classical baseline it is compared
//! against, and [`rm_us_classify`] implements the hybrid priority
//! assignment built on the same threshold.

use crate::error::Error;
use crate::model::{DeadlineClass, Task, TaskSet};
use crate::numeric::{ceil_ratio, floor_ratio, positive};
use crate::verdict::{accepts, Verdict};
use crate::Result;

/// Utilization threshold of the hybrid priority assignment: tasks above it
/// are pinned to the top priority band. Reciprocal of the 2.668
/// capacity-augmentation factor.
pub const RM_US_THRESHOLD: f64 = 0.374813;

/// Behavioral model of the analyzed task for the closed-form tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskModel {
    Sporadic,
    Dag,
    Suspending,
}

/// Per-task workload upper bound on an interval of length `t`, carry-in
/// job fully counted: `W(t) = (ceil(t/T) - 1) C + 2C`.
pub fn workload_w(task: &Task, t: f64) -> Result<f64> {
    if !positive(t) {
        return Err(Error::InvalidParameter {
            name: "t",
            message: format!("interval length must be > 0, got {}", t),
        });
    }
    Ok((ceil_ratio(t, task.period()) - 1.0) * task.wcet() + 2.0 * task.wcet())
}

fn applicability(set: &TaskSet, k: usize, test: &'static str) -> Result<Option<Verdict>> {
    if k >= set.len() {
        return Err(Error::InvalidParameter {
            name: "k",
            message: format!("task index {} out of range (set has {})", k, set.len()),
        });
    }
    if set.deadline_class() != DeadlineClass::Implicit {
        return Ok(Some(Verdict::not_applicable(
            test,
            "requires implicit deadlines",
        )));
    }
    if !set.rm_prefix(k) {
        return Ok(Some(Verdict::not_applicable(
            test,
            "requires rate-monotonic priority order",
        )));
    }
    Ok(None)
}

/// The k-point restriction of the workload demand test for one task: the
/// analyzed task's own demand under its model, and the candidate instants
/// at which the demand is checked.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalSetup {
    pub processors: u32,
    pub model: TaskModel,
    /// Demand the analyzed task itself contributes: plain execution for
    /// sporadic tasks, critical path plus parallelizable remainder for DAG
    /// tasks, execution plus suspension for self-suspending tasks.
    pub effective_demand: f64,
    /// Last release of each higher-priority task before `T_k`, ascending,
    /// then `T_k` itself.
    pub points: Vec<f64>,
}

/// Builds the k-point restriction for task `k` under the given model.
pub fn build_global_setup(set: &TaskSet, k: usize, model: TaskModel) -> Result<GlobalSetup> {
    let task = &set.tasks()[k];
    let m = set.processors() as f64;
    let effective_demand = match model {
        TaskModel::Sporadic => task.wcet(),
        TaskModel::Dag => {
            let psi = task.critical_path().ok_or(Error::InvalidTask {
                index: k,
                field: "cp",
                message: "DAG analysis needs a critical-path length".to_string(),
            })?;
            psi + (task.wcet() - psi) / m
        }
        TaskModel::Suspending => task.wcet() + task.suspension(),
    };

    let t_k = task.period();
    let mut points: Vec<f64> = set.tasks()[..k]
        .iter()
        .map(|t| floor_ratio(t_k, t.period()) * t.period())
        .collect();
    points.push(t_k);
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.dedup();

    Ok(GlobalSetup {
        processors: set.processors(),
        model,
        effective_demand,
        points,
    })
}

/// Demand test at the k candidate points: accepts iff some point `t`
/// satisfies `C_k + sum_i W_i(t) / M <= t`.
pub fn grm_naive_test(set: &TaskSet, k: usize) -> Result<Verdict> {
    if let Some(v) = applicability(set, k, "grm-naive")? {
        return Ok(v);
    }
    let setup = build_global_setup(set, k, TaskModel::Sporadic)?;
    let m = setup.processors as f64;
    let mut best_value = f64::INFINITY;
    let mut best_bound = set.tasks()[k].period();
    for &t in &setup.points {
        let interference: f64 = set.tasks()[..k]
            .iter()
            .map(|hp| workload_w(hp, t).expect("points are positive"))
            .sum();
        let demand = setup.effective_demand + interference / m;
        if accepts(demand, t) {
            return Ok(Verdict::decide("grm-naive", demand, t));
        }
        if demand - t < best_value - best_bound {
            best_value = demand;
            best_bound = t;
        }
    }
    Ok(Verdict::decide("grm-naive", best_value, best_bound))
}

/// Closed-form global-RM test for task `k`. Accepts when the model's
/// product form holds, or (for sporadic and DAG models) when the
/// total-utilization form holds; the note records which disjunct fired.
///
/// Product forms, with `x` the model's demand ratio:
/// sporadic `x = C_k/T_k`, product over the k-1 higher-priority tasks;
/// DAG `x = Psi_k/T_k`, product additionally includes task `k` itself;
/// suspending `x = (C_k + S_k)/T_k`, product over the higher-priority
/// tasks, no utilization disjunct.
pub fn grm_closed_form_test(set: &TaskSet, k: usize, model: TaskModel) -> Result<Verdict> {
    let name = match model {
        TaskModel::Sporadic => "grm",
        TaskModel::Dag => "grm-dag",
        TaskModel::Suspending => "grm-suspend",
    };
    if let Some(v) = applicability(set, k, name)? {
        return Ok(v);
    }
    let m = set.processors() as f64;
    let task = &set.tasks()[k];

    let ratio = match model {
        TaskModel::Sporadic => task.wcet() / task.period(),
        TaskModel::Dag => {
            let psi = task.critical_path().ok_or(Error::InvalidTask {
                index: k,
                field: "cp",
                message: "DAG analysis needs a critical-path length".to_string(),
            })?;
            psi / task.period()
        }
        TaskModel::Suspending => (task.wcet() + task.suspension()) / task.period(),
    };

    let include_self = model == TaskModel::Dag;
    let product: f64 = set.tasks()[..k]
        .iter()
        .map(|t| t.utilization() / m + 1.0)
        .product::<f64>()
        * if include_self {
            task.utilization() / m + 1.0
        } else {
            1.0
        };
    let product_value = (ratio + 2.0) * product;
    if accepts(product_value, 3.0) {
        return Ok(Verdict::decide(name, product_value, 3.0).with_note("product form"));
    }

    if model != TaskModel::Suspending {
        let sum: f64 = set.tasks()[..k]
            .iter()
            .map(|t| t.utilization() / m)
            .sum::<f64>()
            + if include_self {
                task.utilization() / m
            } else {
                0.0
            };
        let bound = (3.0 / (ratio + 2.0)).ln();
        if accepts(sum, bound) {
            return Ok(Verdict::decide(name, sum, bound).with_note("utilization form"));
        }
    }
    Ok(Verdict::decide(name, product_value, 3.0).with_note("all forms failed"))
}

/// Linear-time whole-set test for implicit-deadline DAG systems:
/// accepts iff `(Delta_max + 2) prod_i (U_i/M + 1) <= 3` with `Delta_max`
/// the largest critical-path density. Monotonic under task removal or
/// utilization decrease, which makes it usable for admission control.
pub fn fast_monotonic_test(set: &TaskSet) -> Result<Verdict> {
    if set.deadline_class() != DeadlineClass::Implicit {
        return Ok(Verdict::not_applicable(
            "grm-fast",
            "requires implicit deadlines",
        ));
    }
    let m = set.processors() as f64;
    let mut delta_max: f64 = 0.0;
    for (i, task) in set.tasks().iter().enumerate() {
        let psi = task.critical_path().ok_or(Error::InvalidTask {
            index: i,
            field: "cp",
            message: "DAG analysis needs a critical-path length".to_string(),
        })?;
        delta_max = delta_max.max(psi / task.period());
    }
    let product: f64 = set
        .tasks()
        .iter()
        .map(|t| t.utilization() / m + 1.0)
        .product();
    let value = (delta_max + 2.0) * product;
    Ok(Verdict::decide("grm-fast", value, 3.0))
}

/// Largest utilization among task `k` and its higher-priority tasks.
fn u_max(set: &TaskSet, k: usize) -> f64 {
    set.tasks()[..=k]
        .iter()
        .map(Task::utilization)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// The two disjunct values of the tightened test, exposed for direct
/// evaluation: `(u_max + 1) prod(u_j/m + 1)` against 2, and
/// `sum(u_j)/m` against `ln(2 / (u_max + 1))`.
pub fn tight_forms(u_max: f64, hp_utils: &[f64], m: f64) -> (f64, f64, f64) {
    let product_value =
        (u_max + 1.0) * hp_utils.iter().map(|u| u / m + 1.0).product::<f64>();
    let sum_value = hp_utils.iter().sum::<f64>() / m;
    let sum_bound = (2.0 / (u_max + 1.0)).ln();
    (product_value, sum_value, sum_bound)
}

/// Tightened global-RM test for sporadic implicit-deadline task `k`,
/// keyed on the maximum utilization `U_k_max = max_{j <= k} U_j`:
/// accepts iff `(U_k_max + 1) prod_{j<k}(U_j/M + 1) <= 2` or
/// `sum_{j<k} U_j / M <= ln(2 / (U_k_max + 1))`.
pub fn grm_tight_test(set: &TaskSet, k: usize) -> Result<Verdict> {
    if let Some(v) = applicability(set, k, "grm-tight")? {
        return Ok(v);
    }
    let m = set.processors() as f64;
    let hp_utils: Vec<f64> = set.tasks()[..k].iter().map(Task::utilization).collect();
    let (product_value, sum_value, sum_bound) = tight_forms(u_max(set, k), &hp_utils, m);
    if accepts(product_value, 2.0) {
        return Ok(Verdict::decide("grm-tight", product_value, 2.0).with_note("product form"));
    }
    if accepts(sum_value, sum_bound) {
        return Ok(Verdict::decide("grm-tight", sum_value, sum_bound)
            .with_note("utilization form"));
    }
    Ok(Verdict::decide("grm-tight", product_value, 2.0).with_note("both forms failed"))
}

/// Baseline utilization test for global RM:
/// accepts iff `sum_{j<=k} U_j <= (M/2)(1 - U_k_max) + U_k_max`.
pub fn bertogna_test(set: &TaskSet, k: usize) -> Result<Verdict> {
    if let Some(v) = applicability(set, k, "bertogna")? {
        return Ok(v);
    }
    let m = set.processors() as f64;
    let u_k_max = u_max(set, k);
    let total: f64 = set.tasks()[..=k].iter().map(Task::utilization).sum();
    let bound = m / 2.0 * (1.0 - u_k_max) + u_k_max;
    Ok(Verdict::decide("bertogna", total, bound))
}

/// Result of the hybrid priority assignment: indices of tasks pinned to
/// the top priority band (utilization above the threshold) and the
/// remaining indices in rate-monotonic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RmUsPartition {
    pub top: Vec<usize>,
    pub rm: Vec<usize>,
}

/// Splits the set for RM-US scheduling: tasks with utilization strictly
/// above `threshold` get top priority, the rest are ordered by period
/// (ties stable in input order).
pub fn rm_us_classify(set: &TaskSet, threshold: f64) -> RmUsPartition {
    let mut top = Vec::new();
    let mut rm: Vec<usize> = Vec::new();
    for (i, task) in set.tasks().iter().enumerate() {
        if task.utilization() > threshold {
            top.push(i);
        } else {
            rm.push(i);
        }
    }
    rm.sort_by(|&a, &b| {
        set.tasks()[a]
            .period()
            .partial_cmp(&set.tasks()[b].period())
            .unwrap()
    });
    RmUsPartition { top, rm }
}
