//! The closed-form response-time bounds against the exact iteration.
//!
//! The linear bound is validated as a true upper bound over random sets.
//! The hyperbolic bound is utilization-only and provably cannot dominate
//! an absolute-time quantity in general (scale one WCET and period
//! together: the exact response time grows, the formula does not); the
//! counterexample test below pins that behavior so any change to it is
//! loud.

use k2u::generator::generate_taskset;
use k2u::model::{DeadlineClass, Task, TaskSet};
use k2u::rt_bounds::{rt_bound_hyperbolic, rt_bound_linear};
use k2u::uniproc::rta_fixed_point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_low_util(seed: u64, rng: &mut impl Rng) -> TaskSet {
    let n = rng.gen_range(2..=8);
    let util = rng.gen_range(0.1..0.95);
    generate_taskset(n, util, (1.0, 100.0), DeadlineClass::Implicit, seed).unwrap()
}

#[test]
fn linear_bound_dominates_exact_response_time() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb0bbed01);
    let mut checked = 0;
    for seed in 0..3_000u64 {
        let set = random_low_util(seed, &mut rng);
        for n in 0..set.len() {
            let r = rt_bound_linear(&set, n).unwrap();
            if !r.precondition_ok {
                continue;
            }
            let exact = rta_fixed_point(&set, n, None).unwrap();
            checked += 1;
            assert!(
                r.bound.unwrap() >= exact - 1e-9,
                "linear bound {} undercuts exact {} on task {} of seed {}",
                r.bound.unwrap(),
                exact,
                n,
                seed
            );
        }
    }
    assert!(checked > 5_000, "only {}", checked);
}

#[test]
fn linear_bound_ignores_input_permutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb0bbed02);
    for seed in 0..500u64 {
        let set = random_low_util(seed, &mut rng);
        let n = set.len() - 1;
        let reference = rt_bound_linear(&set, n).unwrap();

        let mut shuffled: Vec<Task> = set.tasks()[..n].to_vec();
        shuffled.reverse();
        shuffled.push(set.tasks()[n].clone());
        let permuted = TaskSet::new(shuffled, 1).unwrap();
        let other = rt_bound_linear(&permuted, n).unwrap();
        assert_eq!(reference.precondition_ok, other.precondition_ok);
        if let (Some(a), Some(b)) = (reference.bound, other.bound) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}

#[test]
fn bounds_shrink_when_a_wcet_shrinks() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb0bbed03);
    for seed in 0..1_000u64 {
        let set = random_low_util(seed, &mut rng);
        let n = set.len() - 1;
        let linear_before = rt_bound_linear(&set, n).unwrap();
        let hyper_before = rt_bound_hyperbolic(&set, n).unwrap();

        let shrink_at = rng.gen_range(0..set.len());
        let factor = rng.gen_range(0.1..0.95);
        let tasks: Vec<Task> = set
            .tasks()
            .iter()
            .enumerate()
            .map(|(i, t)| {
                if i == shrink_at {
                    Task::new(t.wcet() * factor, t.period())
                } else {
                    t.clone()
                }
            })
            .collect();
        let reduced = TaskSet::new(tasks, 1).unwrap();
        let linear_after = rt_bound_linear(&reduced, n).unwrap();
        let hyper_after = rt_bound_hyperbolic(&reduced, n).unwrap();

        if let (Some(before), Some(after)) = (linear_before.bound, linear_after.bound) {
            assert!(after <= before + 1e-9);
        }
        if let (Some(before), Some(after)) = (hyper_before.bound, hyper_after.bound) {
            assert!(after <= before + 1e-9);
        }
    }
}

#[test]
fn hyperbolic_bound_is_tight_on_the_balanced_case() {
    let set = TaskSet::new(vec![Task::new(1.0, 2.0), Task::new(0.5, 1000.0)], 1).unwrap();
    let r = rt_bound_hyperbolic(&set, 1).unwrap();
    assert!((r.bound.unwrap() - 1.5).abs() < 1e-12);
    assert_eq!(rta_fixed_point(&set, 1, None).unwrap(), 1.5);
}

#[test]
fn hyperbolic_bound_undershoots_exact_time_for_scaled_wcets() {
    // Same utilizations as the tight case, but the interfering task's
    // absolute size is scaled up tenfold. The exact response time scales
    // with it; the utilization-only formula stays at 1.5.
    let set = TaskSet::new(vec![Task::new(10.0, 20.0), Task::new(0.5, 1000.0)], 1).unwrap();
    let r = rt_bound_hyperbolic(&set, 1).unwrap();
    assert!(r.precondition_ok);
    let bound = r.bound.unwrap();
    let exact = rta_fixed_point(&set, 1, None).unwrap();
    assert!((bound - 1.5).abs() < 1e-12);
    assert_eq!(exact, 10.5);
    assert!(
        bound < exact,
        "if this starts holding, the formula changed; revisit the acceptance gate"
    );
}
