//! Deterministic random task-set generation for acceptance-ratio
//! experiments.
//!
//! Utilizations come from an unbiased uniform split of the target total
//! (UUniFast), rejecting draws with a per-task utilization outside (0, 1].
//! Periods are log-uniform over the requested range, and priorities are
//! assigned by sorting: rate-monotonic for implicit deadlines,
//! deadline-monotonic otherwise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::model::{DeadlineClass, Task, TaskSet};
use crate::numeric::positive;
use crate::Result;

/// Draws after which the utilization split falls back to an equal split.
/// Rejection only bites when the target total sits very close to `n`,
/// where the acceptance region collapses.
const MAX_SPLIT_ATTEMPTS: usize = 1000;

fn uunifast(rng: &mut impl Rng, n: usize, total: f64) -> Vec<f64> {
    let mut utils = Vec::with_capacity(n);
    let mut remaining = total;
    for i in (1..n).rev() {
        let next = remaining * rng.gen::<f64>().powf(1.0 / i as f64);
        utils.push(remaining - next);
        remaining = next;
    }
    utils.push(remaining);
    utils
}

fn split_utilizations(rng: &mut impl Rng, n: usize, total: f64) -> Vec<f64> {
    for _ in 0..MAX_SPLIT_ATTEMPTS {
        let utils = uunifast(rng, n, total);
        if utils.iter().all(|&u| u > 0.0 && u <= 1.0) {
            return utils;
        }
    }
    vec![total / n as f64; n]
}

/// Generates a priority-ordered task set with `n` tasks summing to
/// `total_util`, periods log-uniform in `period_range`, and deadlines drawn
/// according to `deadline_class`. Identical inputs produce identical sets.
///
/// The returned set is on one processor; use
/// [`TaskSet::with_processors`](crate::model::TaskSet::with_processors) for
/// multiprocessor experiments.
pub fn generate_taskset(
    n: usize,
    total_util: f64,
    period_range: (f64, f64),
    deadline_class: DeadlineClass,
    seed: u64,
) -> Result<TaskSet> {
    if n < 1 {
        return Err(Error::InvalidParameter {
            name: "n",
            message: "need at least one task".to_string(),
        });
    }
    if !positive(total_util) || total_util > n as f64 {
        return Err(Error::InvalidParameter {
            name: "total_util",
            message: format!("must lie in (0, {}], got {}", n, total_util),
        });
    }
    let (lo, hi) = period_range;
    if !(0.0 < lo && lo < hi) {
        return Err(Error::InvalidParameter {
            name: "period_range",
            message: format!("need 0 < lo < hi, got ({}, {})", lo, hi),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let utils = split_utilizations(&mut rng, n, total_util);

    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    let tasks: Vec<Task> = utils
        .iter()
        .map(|&u| {
            let period = (ln_lo + rng.gen::<f64>() * (ln_hi - ln_lo)).exp();
            let wcet = u * period;
            let deadline = match deadline_class {
                DeadlineClass::Implicit => period,
                DeadlineClass::Constrained => wcet + rng.gen::<f64>() * (period - wcet),
                DeadlineClass::Arbitrary => wcet + rng.gen::<f64>() * (4.0 * period - wcet),
            };
            Task::with_deadline(wcet, period, deadline)
        })
        .collect();

    match deadline_class {
        DeadlineClass::Implicit => TaskSet::rate_monotonic(tasks, 1),
        _ => TaskSet::deadline_monotonic(tasks, 1),
    }
}
