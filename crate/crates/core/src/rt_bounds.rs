//! Closed-form worst-case response-time upper bounds for uniprocessor
//! fixed-priority scheduling.
//!
//! Both bounds are experimental: they come with oracle-dominance tests
//! against the exact response-time iteration rather than a full analytic
//! argument, and the CLI keeps them behind an opt-in flag.

use crate::error::Error;
use crate::model::{Task, TaskSet};
use crate::Result;

/// Outcome of a response-time bound computation.
#[derive(Debug, Clone, PartialEq)]
pub struct RtBoundResult {
    /// The bound, or `None` when the precondition failed.
    pub bound: Option<f64>,
    /// Permutation of the higher-priority task indices actually used.
    pub ordering_used: Vec<usize>,
    pub precondition_ok: bool,
    pub note: Option<String>,
}

impl RtBoundResult {
    fn not_applicable(ordering_used: Vec<usize>, note: String) -> Self {
        RtBoundResult {
            bound: None,
            ordering_used,
            precondition_ok: false,
            note: Some(note),
        }
    }
}

fn check_uniproc_index(set: &TaskSet, n: usize) -> Result<()> {
    if set.processors() != 1 {
        return Err(Error::not_applicable(
            "rt-bounds",
            format!("uniprocessor analysis, set has {} processors", set.processors()),
        ));
    }
    if n >= set.len() {
        return Err(Error::InvalidParameter {
            name: "n",
            message: format!("task index {} out of range (set has {})", n, set.len()),
        });
    }
    Ok(())
}

/// Linear response-time bound for task `n`:
/// `(C_n + sum C_i - sum_i U_i * sum_{j>=i} C_j) / (1 - sum U_i)`,
/// with the higher-priority tasks reindexed by decreasing `C_i / U_i`
/// (that ratio is the period, so periods descend). Requires total
/// utilization through task `n` below one.
pub fn rt_bound_linear(set: &TaskSet, n: usize) -> Result<RtBoundResult> {
    check_uniproc_index(set, n)?;
    let task = &set.tasks()[n];

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        set.tasks()[b]
            .period()
            .partial_cmp(&set.tasks()[a].period())
            .unwrap()
    });
    let tied = order
        .windows(2)
        .any(|w| set.tasks()[w[0]].period() == set.tasks()[w[1]].period());

    let total_u: f64 =
        set.tasks()[..=n].iter().map(Task::utilization).sum();
    if total_u >= 1.0 {
        return Ok(RtBoundResult::not_applicable(
            order,
            format!("total utilization {} is not below 1", total_u),
        ));
    }

    let hp: Vec<&Task> = order.iter().map(|&i| &set.tasks()[i]).collect();
    let hp_u: f64 = hp.iter().map(|t| t.utilization()).sum();
    let hp_c: f64 = hp.iter().map(|t| t.wcet()).sum();
    // sum_i U_i * (C_i + C_{i+1} + ... + C_{n-1}) in the reindexed order.
    let mut suffix_c = 0.0;
    let mut weighted = 0.0;
    for t in hp.iter().rev() {
        suffix_c += t.wcet();
        weighted += t.utilization() * suffix_c;
    }
    let bound = (task.wcet() + hp_c - weighted) / (1.0 - hp_u);

    Ok(RtBoundResult {
        bound: Some(bound),
        ordering_used: order,
        precondition_ok: true,
        note: tied.then(|| "period ties broken in input order".to_string()),
    })
}

/// Hyperbolic response-time bound for task `n`:
/// `C_n / (2 / prod_{i<n}(U_i + 1) - 1)`, valid while
/// `prod_{i<=n}(U_i + 1) <= 2`.
pub fn rt_bound_hyperbolic(set: &TaskSet, n: usize) -> Result<RtBoundResult> {
    check_uniproc_index(set, n)?;
    let order: Vec<usize> = (0..n).collect();
    let hp_product: f64 = set.tasks()[..n]
        .iter()
        .map(|t| t.utilization() + 1.0)
        .product();
    let full_product = hp_product * (set.tasks()[n].utilization() + 1.0);
    if full_product > 2.0 {
        return Ok(RtBoundResult::not_applicable(
            order,
            format!("utilization product {} exceeds 2", full_product),
        ));
    }
    let bound = set.tasks()[n].wcet() / (2.0 / hp_product - 1.0);
    Ok(RtBoundResult {
        bound: Some(bound),
        ordering_used: order,
        precondition_ok: true,
        note: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TaskSet;
    use crate::uniproc::rta_fixed_point;

    fn uni(tasks: Vec<Task>) -> TaskSet {
        TaskSet::new(tasks, 1).unwrap()
    }

    #[test]
    fn linear_single_hp_task() {
        let set = uni(vec![Task::new(1.0, 2.0), Task::new(0.5, 100.0)]);
        let r = rt_bound_linear(&set, 1).unwrap();
        assert_eq!(r.bound, Some(2.0));
        let exact = rta_fixed_point(&set, 1, None).unwrap();
        assert!(exact <= 2.0);
        assert_eq!(exact, 1.5);
    }

    #[test]
    fn linear_no_hp_is_wcet() {
        let set = uni(vec![Task::new(3.0, 10.0)]);
        let r = rt_bound_linear(&set, 0).unwrap();
        assert_eq!(r.bound, Some(3.0));
    }

    #[test]
    fn linear_reindexes_by_descending_period() {
        let set = uni(vec![
            Task::new(1.0, 2.0),
            Task::new(1.0, 4.0),
            Task::new(0.5, 100.0),
        ]);
        let r = rt_bound_linear(&set, 2).unwrap();
        assert_eq!(r.ordering_used, vec![1, 0]);
        // (0.5 + 2 - (0.25*2 + 0.5*1)) / (1 - 0.75) = 6.0
        assert!((r.bound.unwrap() - 6.0).abs() < 1e-12);
        // Exact iteration: 0.5 -> 2.5 -> 3.5 -> 3.5.
        let exact = rta_fixed_point(&set, 2, None).unwrap();
        assert_eq!(exact, 3.5);
        assert!(exact <= r.bound.unwrap());
    }

    #[test]
    fn linear_order_insensitive_to_input_permutation() {
        let a = uni(vec![
            Task::new(1.0, 2.0),
            Task::new(1.0, 4.0),
            Task::new(0.5, 100.0),
        ]);
        let b = uni(vec![
            Task::new(1.0, 4.0),
            Task::new(1.0, 2.0),
            Task::new(0.5, 100.0),
        ]);
        let ra = rt_bound_linear(&a, 2).unwrap();
        let rb = rt_bound_linear(&b, 2).unwrap();
        assert!((ra.bound.unwrap() - rb.bound.unwrap()).abs() < 1e-12);
    }

    #[test]
    fn linear_requires_utilization_below_one() {
        let set = uni(vec![Task::new(1.0, 2.0), Task::new(1.0, 2.0)]);
        let r = rt_bound_linear(&set, 1).unwrap();
        assert!(!r.precondition_ok);
        assert!(r.bound.is_none());
    }

    #[test]
    fn hyperbolic_tight_case() {
        let set = uni(vec![Task::new(1.0, 2.0), Task::new(0.5, 100.0)]);
        let r = rt_bound_hyperbolic(&set, 1).unwrap();
        assert!((r.bound.unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(rta_fixed_point(&set, 1, None).unwrap(), 1.5);
    }

    #[test]
    fn hyperbolic_no_hp_is_wcet() {
        let set = uni(vec![Task::new(0.7, 2.0)]);
        let r = rt_bound_hyperbolic(&set, 0).unwrap();
        assert!((r.bound.unwrap() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_precondition_failure() {
        let set = uni(vec![
            Task::new(0.6 * 2.0, 2.0),
            Task::new(0.3 * 4.0, 4.0),
            Task::new(0.01, 100.0),
        ]);
        let r = rt_bound_hyperbolic(&set, 2).unwrap();
        assert!(!r.precondition_ok);
        assert!(r.note.as_deref().unwrap().contains("exceeds 2"));
    }
}
