//! Uniprocessor fixed-priority analyses.
//!
//! Exact references first: [`tda_exact`] (time-demand analysis over all
//! release points) and [`rta_fixed_point`] (response-time iteration), plus
//! [`edf_dbf_feasible`] for EDF feasibility via demand-bound functions.
//!
//! On top of those sit the polynomial-time sufficient tests:
//! [`fp_hyperbolic_test`] and [`fp_sum_test`] evaluate the product-form and
//! total-utilization forms obtained by restricting the exact test to the
//! last release of each higher-priority task before the deadline
//! ([`build_kpoint_constrained`] exposes that construction),
//! [`busy_window_sufficient`] covers arbitrary deadlines through a single
//! busy window, and [`speedup_witness`] certifies how much processor speed
//! would rescue a task the hyperbolic test rejects.

use crate::error::Error;
use crate::kpoint::{KPointEntry, KPointInstance};
use crate::model::{Task, TaskSet};
use crate::numeric::{ceil_ratio, floor_ratio};
use crate::verdict::{accepts, Verdict};
use crate::Result;

fn require_uniprocessor(set: &TaskSet, test: &'static str) -> Result<()> {
    if set.processors() != 1 {
        return Err(Error::not_applicable(
            test,
            format!("uniprocessor test, set has {} processors", set.processors()),
        ));
    }
    Ok(())
}

fn check_index(set: &TaskSet, k: usize) -> Result<()> {
    if k >= set.len() {
        return Err(Error::InvalidParameter {
            name: "k",
            message: format!("task index {} out of range (set has {})", k, set.len()),
        });
    }
    Ok(())
}

/// Release instants of the higher-priority tasks up to `limit`, plus
/// `limit` itself: the only points where the demand step function can
/// first dip below the supply line.
fn demand_candidates(set: &TaskSet, k: usize, limit: f64) -> Vec<f64> {
    let mut points = vec![limit];
    for task in &set.tasks()[..k] {
        let mut m = 1.0;
        loop {
            let release = m * task.period();
            if release > limit {
                break;
            }
            points.push(release);
            m += 1.0;
        }
    }
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.dedup();
    points
}

fn interference(set: &TaskSet, k: usize, t: f64) -> f64 {
    set.tasks()[..k]
        .iter()
        .map(|task| ceil_ratio(t, task.period()) * task.wcet())
        .sum()
}

/// Exact time-demand analysis for task `k` in a constrained-deadline set:
/// accepts iff some `t` in `(0, D_k]` satisfies
/// `C_k + sum_i ceil(t / T_i) C_i <= t`.
pub fn tda_exact(set: &TaskSet, k: usize) -> Result<Verdict> {
    require_uniprocessor(set, "tda")?;
    check_index(set, k)?;
    let task = &set.tasks()[k];
    if task.deadline() > task.period() {
        return Err(Error::not_applicable(
            "tda",
            "deadline exceeds period; use the busy-window test",
        ));
    }
    let mut best_value = f64::INFINITY;
    let mut best_bound = task.deadline();
    for t in demand_candidates(set, k, task.deadline()) {
        let demand = task.wcet() + interference(set, k, t);
        if accepts(demand, t) {
            return Ok(Verdict::decide("tda", demand, t));
        }
        // Track the least-violated point for reporting.
        if demand - t < best_value - best_bound {
            best_value = demand;
            best_bound = t;
        }
    }
    Ok(Verdict::decide("tda", best_value, best_bound))
}

/// Least fixed point of `R = C_k + sum_i ceil(R / T_i) C_i`, iterated from
/// `R = C_k`. `horizon` defaults to `1000 * T_k`; iteration past it
/// reports divergence.
pub fn rta_fixed_point(set: &TaskSet, k: usize, horizon: Option<f64>) -> Result<f64> {
    require_uniprocessor(set, "rta")?;
    check_index(set, k)?;
    let task = &set.tasks()[k];
    let horizon = horizon.unwrap_or(1e3 * task.period());
    let mut response = task.wcet();
    loop {
        let next = task.wcet() + interference(set, k, response);
        if next > horizon {
            return Err(Error::Divergence { horizon });
        }
        if next <= response {
            return Ok(response);
        }
        response = next;
    }
}

/// Demand-bound function of one task: the execution the jobs with both
/// release and deadline inside an interval of length `t` can demand.
pub fn dbf(task: &Task, t: f64) -> f64 {
    let jobs = floor_ratio(t - task.deadline(), task.period()) + 1.0;
    jobs.max(0.0) * task.wcet()
}

/// EDF feasibility by checking `sum_i dbf_i(t) <= t` at every absolute
/// deadline up to `horizon`.
///
/// Without an explicit horizon: the hyperperiod when all periods are
/// integral, otherwise `max D_i + 2 * sum C_i / (1 - sum U_i)` (which
/// needs total utilization below one). Horizons spanning more than about
/// 5e6 deadline points are refused rather than ground through.
pub fn edf_dbf_feasible(set: &TaskSet, horizon: Option<f64>) -> Result<Verdict> {
    require_uniprocessor(set, "edf-dbf")?;
    let horizon = match horizon {
        Some(h) if h > 0.0 => h,
        Some(h) => {
            return Err(Error::InvalidParameter {
                name: "horizon",
                message: format!("must be > 0, got {}", h),
            })
        }
        None => default_edf_horizon(set)?,
    };
    let point_estimate: f64 = set.tasks().iter().map(|t| horizon / t.period() + 1.0).sum();
    if point_estimate > 5e6 {
        return Err(Error::InvalidParameter {
            name: "horizon",
            message: format!(
                "{} deadline points to check up to horizon {}; pass a smaller horizon",
                point_estimate as u64, horizon
            ),
        });
    }

    let mut worst: Option<(f64, f64)> = None;
    for task in set.tasks() {
        let mut deadline = task.deadline();
        while deadline <= horizon {
            let total: f64 = set.tasks().iter().map(|t| dbf(t, deadline)).sum();
            if !accepts(total, deadline) {
                return Ok(Verdict::decide("edf-dbf", total, deadline)
                    .with_note(format!("demand overflow at t = {}", deadline)));
            }
            match worst {
                Some((value, bound)) if total - deadline <= value - bound => {}
                _ => worst = Some((total, deadline)),
            }
            deadline += task.period();
        }
    }
    let (value, bound) = worst.unwrap_or((0.0, horizon));
    Ok(Verdict::decide("edf-dbf", value, bound))
}

fn default_edf_horizon(set: &TaskSet) -> Result<f64> {
    let integral = set
        .tasks()
        .iter()
        .all(|t| t.period().fract() == 0.0 && t.period() <= 2f64.powi(40));
    if integral {
        let mut lcm: u64 = 1;
        let mut overflow = false;
        for task in set.tasks() {
            let p = task.period() as u64;
            match (lcm / gcd(lcm, p)).checked_mul(p) {
                Some(next) => lcm = next,
                None => {
                    overflow = true;
                    break;
                }
            }
        }
        if !overflow {
            let max_d = set
                .tasks()
                .iter()
                .map(Task::deadline)
                .fold(0.0f64, f64::max);
            return Ok((lcm as f64).max(max_d));
        }
    }
    let total_u: f64 = set.tasks().iter().map(Task::utilization).sum();
    if total_u >= 1.0 {
        return Err(Error::InvalidParameter {
            name: "horizon",
            message: "total utilization >= 1 with non-integral periods; pass a horizon"
                .to_string(),
        });
    }
    let max_d = set
        .tasks()
        .iter()
        .map(Task::deadline)
        .fold(0.0f64, f64::max);
    let total_c: f64 = set.tasks().iter().map(Task::wcet).sum();
    Ok(max_d + 2.0 * total_c / (1.0 - total_u))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// The k-point construction for task `k`: higher-priority tasks with
/// `T_i < D_k` (hp1) are tested at the last release before `D_k`, the rest
/// (hp2) are folded into the virtual execution time.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedKPointSetup {
    pub instance: KPointInstance,
    /// `C_k'`: the analyzed task's demand plus the hp2 contribution (and
    /// the busy-window inflation in arbitrary-deadline mode).
    pub virtual_wcet: f64,
    /// Indices (into the set) of the hp1 tasks, in nondecreasing order of
    /// their test points.
    pub hp1_indices: Vec<usize>,
    /// Indices of the hp2 tasks.
    pub hp2_indices: Vec<usize>,
    /// The hp1 test points `floor(D_k / T_i) * T_i`, ascending, then `D_k`.
    pub points: Vec<f64>,
}

/// Builds the k-point instance for task `k`. With `arbitrary` set, the
/// virtual execution time is inflated to `ceil(D_k / T_k) * C_k` to cover
/// the whole busy window; otherwise the task must have `D_k <= T_k`.
pub fn build_kpoint_constrained(
    set: &TaskSet,
    k: usize,
    arbitrary: bool,
) -> Result<ConstrainedKPointSetup> {
    require_uniprocessor(set, "kpoint")?;
    check_index(set, k)?;
    let task = &set.tasks()[k];
    let d_k = task.deadline();
    if !arbitrary && d_k > task.period() {
        return Err(Error::not_applicable(
            "kpoint",
            "deadline exceeds period; pass arbitrary = true",
        ));
    }

    let mut hp1: Vec<(usize, f64)> = Vec::new();
    let mut hp2_indices = Vec::new();
    let mut hp2_wcet = 0.0;
    for (i, t) in set.tasks()[..k].iter().enumerate() {
        if t.period() < d_k {
            let point = floor_ratio(d_k, t.period()) * t.period();
            hp1.push((i, point));
        } else {
            hp2_indices.push(i);
            hp2_wcet += t.wcet();
        }
    }
    hp1.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());

    let base = if arbitrary {
        ceil_ratio(d_k, task.period()) * task.wcet()
    } else {
        task.wcet()
    };
    let virtual_wcet = base + hp2_wcet;

    let entries: Vec<KPointEntry> = hp1
        .iter()
        .map(|&(i, point)| {
            let t = &set.tasks()[i];
            KPointEntry {
                u: t.utilization(),
                alpha: 1.0,
                beta: t.period() / point,
            }
        })
        .collect();
    let instance = KPointInstance::new(entries, virtual_wcet / d_k)?;

    let mut points: Vec<f64> = hp1.iter().map(|&(_, p)| p).collect();
    points.push(d_k);

    Ok(ConstrainedKPointSetup {
        instance,
        virtual_wcet,
        hp1_indices: hp1.into_iter().map(|(i, _)| i).collect(),
        hp2_indices,
        points,
    })
}

fn validate_ratio_precondition(
    set: &TaskSet,
    k: usize,
    setup: &ConstrainedKPointSetup,
    f: u32,
    arbitrary: bool,
) -> Option<String> {
    if f < 2 {
        return None;
    }
    let d_k = set.tasks()[k].deadline();
    let ff = f as f64;
    if arbitrary {
        // The rate-monotonic variant needs the ratio on every task,
        // including the analyzed one, and RM priority order.
        if !set.rm_prefix(k) {
            return Some("f >= 2 with arbitrary deadlines requires RM order".to_string());
        }
        for (i, t) in set.tasks()[..=k].iter().enumerate() {
            if ff * t.period() > d_k {
                return Some(format!(
                    "f * T_{} = {} exceeds D_k = {}",
                    i,
                    ff * t.period(),
                    d_k
                ));
            }
        }
    } else {
        for &i in &setup.hp1_indices {
            let t = &set.tasks()[i];
            if ff * t.period() > d_k {
                return Some(format!(
                    "f * T_{} = {} exceeds D_k = {}",
                    i,
                    ff * t.period(),
                    d_k
                ));
            }
        }
    }
    None
}

/// Threshold of the sum-form test: `f * k * ((1 + 1/f)^(1/k) - 1)`.
fn sum_threshold(k: usize, f: u32) -> f64 {
    let ff = f as f64;
    // Same expression as the general utilization bound at alpha = 1,
    // beta = 1/f; kept in the printed form.
    ff * k as f64 * (((ff + 1.0) / ff).powf(1.0 / k as f64) - 1.0)
}

struct FpForms {
    product_value: f64,
    product_bound: f64,
    sum_value: f64,
    sum_bound: f64,
}

fn fp_forms(set: &TaskSet, k: usize, f: u32, arbitrary: bool) -> Result<FpForms> {
    let setup = build_kpoint_constrained(set, k, arbitrary)?;
    if let Some(reason) = validate_ratio_precondition(set, k, &setup, f, arbitrary) {
        return Err(Error::not_applicable("fp", reason));
    }
    let ff = f as f64;
    let task = &set.tasks()[k];

    let hp_product: f64 = setup
        .hp1_indices
        .iter()
        .map(|&i| set.tasks()[i].utilization() / ff + 1.0)
        .product();
    let hp_sum: f64 = setup
        .hp1_indices
        .iter()
        .map(|&i| set.tasks()[i].utilization())
        .sum();

    let forms = if arbitrary && f >= 2 {
        // Rate-monotonic variant: the demand ratio is replaced by the safe
        // substitute U_k / f and the sum runs over all k utilizations.
        let u_k = task.utilization();
        FpForms {
            product_value: (u_k / ff + 1.0) * hp_product,
            product_bound: (ff + 1.0) / ff,
            sum_value: u_k + hp_sum,
            sum_bound: sum_threshold(k + 1, f),
        }
    } else {
        let c_over_t = setup.instance.c_over_t();
        FpForms {
            product_value: (c_over_t / ff + 1.0) * hp_product,
            product_bound: (ff + 1.0) / ff,
            sum_value: c_over_t + hp_sum,
            sum_bound: sum_threshold(k + 1, f),
        }
    };
    Ok(forms)
}

fn fp_applicability(test: &'static str, result: Result<FpForms>) -> Result<FpForms> {
    result.map_err(|e| match e {
        Error::NotApplicable { reason, .. } => Error::NotApplicable { test, reason },
        other => other,
    })
}

/// The hyperbolic schedulability test for task `k`: accepts when either
/// the product form `(C_k'/(f D_k) + 1) prod(U_j/f + 1) <= (f+1)/f` or the
/// sum form `C_k'/D_k + sum U_j <= f (k+1) ((1+1/f)^(1/(k+1)) - 1)` holds
/// (`k` counted 0-based here). The note records which disjunct fired.
///
/// `f >= 2` needs the period-ratio precondition `f * T_i <= D_k` on the
/// hp1 tasks (with `arbitrary`, on every task including `k`, under RM
/// order); a violated precondition is a not-applicable error.
pub fn fp_hyperbolic_test(set: &TaskSet, k: usize, f: u32, arbitrary: bool) -> Result<Verdict> {
    if f < 1 {
        return Err(Error::InvalidParameter {
            name: "f",
            message: "f must be a positive integer".to_string(),
        });
    }
    let forms = fp_applicability("fp-hyperbolic", fp_forms(set, k, f, arbitrary))?;
    if accepts(forms.product_value, forms.product_bound) {
        return Ok(
            Verdict::decide("fp-hyperbolic", forms.product_value, forms.product_bound)
                .with_note("product form"),
        );
    }
    if accepts(forms.sum_value, forms.sum_bound) {
        return Ok(
            Verdict::decide("fp-hyperbolic", forms.sum_value, forms.sum_bound)
                .with_note("sum form"),
        );
    }
    Ok(
        Verdict::decide("fp-hyperbolic", forms.product_value, forms.product_bound)
            .with_note("both forms failed"),
    )
}

/// The sum-form half of [`fp_hyperbolic_test`] on its own.
pub fn fp_sum_test(set: &TaskSet, k: usize, f: u32, arbitrary: bool) -> Result<Verdict> {
    if f < 1 {
        return Err(Error::InvalidParameter {
            name: "f",
            message: "f must be a positive integer".to_string(),
        });
    }
    let forms = fp_applicability("fp-sum", fp_forms(set, k, f, arbitrary))?;
    Ok(Verdict::decide("fp-sum", forms.sum_value, forms.sum_bound))
}

/// Sufficient test for `D_k > T_k`: the busy window stays within `D_k` if
/// some `t` in `(0, D_k]` satisfies
/// `ceil(D_k/T_k) C_k + sum_i ceil(t/T_i) C_i <= t`.
pub fn busy_window_sufficient(set: &TaskSet, k: usize) -> Result<Verdict> {
    require_uniprocessor(set, "busy-window")?;
    check_index(set, k)?;
    let task = &set.tasks()[k];
    if task.deadline() <= task.period() {
        return Err(Error::not_applicable(
            "busy-window",
            "deadline within period; use tda",
        ));
    }
    let inflated = ceil_ratio(task.deadline(), task.period()) * task.wcet();
    let mut best_value = f64::INFINITY;
    let mut best_bound = task.deadline();
    for t in demand_candidates(set, k, task.deadline()) {
        let demand = inflated + interference(set, k, t);
        if accepts(demand, t) {
            return Ok(Verdict::decide("busy-window", demand, t));
        }
        if demand - t < best_value - best_bound {
            best_value = demand;
            best_bound = t;
        }
    }
    Ok(Verdict::decide("busy-window", best_value, best_bound))
}

/// Witness load for a task the hyperbolic test rejects: the larger of the
/// processed demand `(C_k' + sum_{hp1} dbf_i(D_k)) / D_k` and the total
/// higher-priority utilization. On a rejection under deadline-monotonic
/// order this exceeds 1/1.76322, which is what makes 1.76322 the speed-up
/// factor of the test.
pub fn speedup_witness(set: &TaskSet, k: usize) -> Result<f64> {
    let setup = build_kpoint_constrained(set, k, false)?;
    let d_k = set.tasks()[k].deadline();
    // hp2 execution already sits inside the virtual wcet; adding those
    // tasks' demand-bound values again would double-count them.
    let hp1_demand: f64 = setup
        .hp1_indices
        .iter()
        .map(|&i| dbf(&set.tasks()[i], d_k))
        .sum();
    let load = (setup.virtual_wcet + hp1_demand) / d_k;
    let hp_utilization: f64 = set.tasks()[..k].iter().map(Task::utilization).sum();
    Ok(load.max(hp_utilization))
}
