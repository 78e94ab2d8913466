//! The abstract k-point effective schedulability framework.
//!
//! A k-point effective test checks demand at only k candidate instants,
//! with per-task coefficients `(alpha_i, beta_i)` chosen by the concrete
//! task model. Once the coefficients are fixed, everything here depends
//! only on the higher-priority utilizations and the ratio `C_k / t_k`;
//! the candidate instants themselves drop out.
//!
//! Four evaluations are provided:
//!
//! * [`hyperbolic_bound`]: the product-form bound under uniform coefficient
//!   upper bounds `alpha` and `beta`.
//! * [`utilization_bound_constrained`]: the matching total-utilization
//!   threshold on `C_k/t_k + sum(U_i)`.
//! * [`utilization_bound_exclusive`]: a total-utilization threshold on
//!   the higher-priority utilizations alone.
//! * [`extreme_points_bound`]: the per-task-coefficient bound, the
//!   strongest of the family for a concrete instance.

use crate::error::Error;
use crate::numeric::positive;
use crate::verdict::Verdict;
use crate::Result;

/// One higher-priority task as seen by the framework: its utilization and
/// its test coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KPointEntry {
    pub u: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Input to the framework: the k-1 higher-priority entries (in the index
/// order used to derive them) plus the ratio `C_k / t_k` of the analyzed
/// task's demand to the analysis endpoint.
///
/// An empty entry list models k = 1; every bound then reduces to
/// `C_k / t_k <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct KPointInstance {
    entries: Vec<KPointEntry>,
    c_over_t: f64,
}

impl KPointInstance {
    pub fn new(entries: Vec<KPointEntry>, c_over_t: f64) -> Result<Self> {
        if !positive(c_over_t) {
            return Err(Error::InvalidParameter {
                name: "c_over_t",
                message: format!("must be > 0, got {}", c_over_t),
            });
        }
        for (i, e) in entries.iter().enumerate() {
            // A hair above 1 is tolerated: utilizations recomputed as C/T
            // can overshoot by an ulp.
            if !(e.u > 0.0 && e.u <= 1.0 + 1e-12) {
                return Err(Error::InvalidParameter {
                    name: "u",
                    message: format!("entry {}: utilization must be in (0, 1], got {}", i, e.u),
                });
            }
            if !positive(e.alpha) || !positive(e.beta) {
                return Err(Error::InvalidParameter {
                    name: "alpha/beta",
                    message: format!(
                        "entry {}: coefficients must be > 0, got ({}, {})",
                        i, e.alpha, e.beta
                    ),
                });
            }
        }
        Ok(KPointInstance { entries, c_over_t })
    }

    /// Entries with uniform coefficients, a common construction.
    pub fn uniform(utils: &[f64], alpha: f64, beta: f64, c_over_t: f64) -> Result<Self> {
        let entries = utils
            .iter()
            .map(|&u| KPointEntry { u, alpha, beta })
            .collect();
        KPointInstance::new(entries, c_over_t)
    }

    pub fn entries(&self) -> &[KPointEntry] {
        &self.entries
    }

    pub fn c_over_t(&self) -> f64 {
        self.c_over_t
    }

    /// Number of tested points, k (entries plus the analyzed task).
    pub fn k(&self) -> usize {
        self.entries.len() + 1
    }
}

fn check_coefficients(alpha: f64, beta: f64) -> Result<()> {
    if !positive(alpha) || !positive(beta) {
        return Err(Error::InvalidParameter {
            name: "alpha/beta",
            message: format!("uniform coefficients must be > 0, got ({}, {})", alpha, beta),
        });
    }
    Ok(())
}

/// Product-form (hyperbolic) bound under uniform coefficient upper bounds.
///
/// Accepts iff `c_over_t <= (alpha/beta + 1) / prod(beta*u_j + 1) -
/// alpha/beta`. The caller guarantees `alpha >= alpha_i` and
/// `beta >= beta_i` for every entry.
pub fn hyperbolic_bound(inst: &KPointInstance, alpha: f64, beta: f64) -> Result<Verdict> {
    check_coefficients(alpha, beta)?;
    let ratio = alpha / beta;
    let product: f64 = inst.entries.iter().map(|e| beta * e.u + 1.0).product();
    let bound = (ratio + 1.0) / product - ratio;
    Ok(Verdict::decide("hyperbolic", inst.c_over_t, bound))
}

/// Threshold of the total-utilization test on `c_over_t + sum(U_i)` for a
/// k-point test with uniform coefficient bounds.
///
/// The three branches are evaluated in order. For k = 1 the middle branch
/// would need a (k-1)-th root; it falls through to the last branch, which
/// degenerates to the correct threshold 1.
pub fn utilization_bound_constrained(k: usize, alpha: f64, beta: f64) -> Result<f64> {
    check_coefficients(alpha, beta)?;
    if k < 1 {
        return Err(Error::InvalidParameter {
            name: "k",
            message: "k must be >= 1".to_string(),
        });
    }
    let kf = k as f64;
    let root = (alpha + beta).powf(1.0 / kf);
    if root < 1.0 {
        Ok(1.0)
    } else if root < alpha && k >= 2 {
        Ok((kf - 1.0) * ((1.0 + beta / alpha).powf(1.0 / (kf - 1.0)) - 1.0) / beta)
    } else {
        Ok(((kf - 1.0) * (root - 1.0) + (root - alpha)) / beta)
    }
}

/// Total-utilization test on the higher-priority utilizations alone:
/// accepts iff `beta * sum(u_j) <= ln((alpha/beta + 1) / (c_over_t +
/// alpha/beta))`. A nonpositive bound can only accept an empty entry list.
pub fn utilization_bound_exclusive(
    inst: &KPointInstance,
    alpha: f64,
    beta: f64,
) -> Result<Verdict> {
    check_coefficients(alpha, beta)?;
    let ratio = alpha / beta;
    let bound = ((ratio + 1.0) / (inst.c_over_t + ratio)).ln();
    let value = beta * inst.entries.iter().map(|e| e.u).sum::<f64>();
    let mut verdict = Verdict::decide("utilization-exclusive", value, bound);
    if bound <= 0.0 && !verdict.accepted {
        verdict = verdict.with_note("bound nonpositive");
    }
    Ok(verdict)
}

/// Per-entry-coefficient bound, using the entries in their derivation
/// order: accepts iff `0 < c_over_t <= 1 - sum_i u_i (alpha_i + beta_i) /
/// prod_{j>=i} (beta_j u_j + 1)`.
pub fn extreme_points_bound(inst: &KPointInstance) -> Verdict {
    let n = inst.entries.len();
    // Suffix products of (beta_j u_j + 1) over j = i..n-1.
    let mut suffix = vec![1.0; n + 1];
    for i in (0..n).rev() {
        let e = inst.entries[i];
        suffix[i] = suffix[i + 1] * (e.beta * e.u + 1.0);
    }
    let debit: f64 = inst
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| e.u * (e.alpha + e.beta) / suffix[i])
        .sum();
    let bound = 1.0 - debit;
    let mut verdict = Verdict::decide("extreme-points", inst.c_over_t, bound);
    if bound <= 0.0 {
        verdict.accepted = false;
        verdict = verdict.with_note("bound nonpositive");
    }
    verdict
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(utils: &[f64], c_over_t: f64) -> KPointInstance {
        KPointInstance::uniform(utils, 1.0, 1.0, c_over_t).unwrap()
    }

    #[test]
    fn hyperbolic_single_entry() {
        let v = hyperbolic_bound(&inst(&[0.5], 0.30), 1.0, 1.0).unwrap();
        assert!((v.bound - (2.0 / 1.5 - 1.0)).abs() < 1e-12);
        assert!(v.accepted);
    }

    #[test]
    fn hyperbolic_empty_entries_boundary() {
        let v = hyperbolic_bound(&inst(&[], 1.0), 1.0, 1.0).unwrap();
        assert_eq!(v.bound, 1.0);
        assert!(v.accepted);
    }

    #[test]
    fn hyperbolic_matches_product_form() {
        // With alpha = beta = 1 the accept region is
        // (c_over_t + 1) * prod(u_j + 1) <= 2.
        let i = inst(&[0.4, 0.3], 0.05);
        let v = hyperbolic_bound(&i, 1.0, 1.0).unwrap();
        assert!((v.bound - 0.098901098901).abs() < 1e-9);
        let product_form = (i.c_over_t() + 1.0) * 1.4 * 1.3;
        assert_eq!(v.accepted, product_form <= 2.0 + 1e-12);
        // Both algebraic routes give the same boundary.
        let boundary_from_product = 2.0 / (1.4 * 1.3) - 1.0;
        assert!((v.bound - boundary_from_product).abs() < 1e-12);
    }

    #[test]
    fn constrained_threshold_recovers_classic_bound() {
        let t = utilization_bound_constrained(3, 1.0, 1.0).unwrap();
        assert!((t - 3.0 * (2f64.powf(1.0 / 3.0) - 1.0)).abs() < 1e-12);
        assert!((t - 0.779763).abs() < 1e-6);
    }

    #[test]
    fn constrained_threshold_middle_branch() {
        // alpha = 2, beta = 1, k = 2: sqrt(3) < 2 selects the middle branch.
        let t = utilization_bound_constrained(2, 2.0, 1.0).unwrap();
        assert!((t - 0.5).abs() < 1e-12);
    }

    #[test]
    fn constrained_threshold_limit_is_ln2() {
        let t = utilization_bound_constrained(1_000_000, 1.0, 1.0).unwrap();
        assert!((t - std::f64::consts::LN_2).abs() < 1e-5);
    }

    #[test]
    fn constrained_threshold_k1_falls_through() {
        // (alpha + beta)^(1/1) < alpha would pick the undefined middle
        // branch; k = 1 skips it and the last branch yields (beta)/beta = 1.
        let t = utilization_bound_constrained(1, 5.0, 1.0).unwrap();
        assert!((t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exclusive_threshold_example() {
        let v = utilization_bound_exclusive(&inst(&[], 0.2), 1.0, 1.0).unwrap();
        assert!((v.bound - (2.0f64 / 1.2).ln()).abs() < 1e-12);
        assert!((v.bound - 0.510826).abs() < 1e-6);
    }

    #[test]
    fn exclusive_zero_bound_accepts_only_empty() {
        let empty = KPointInstance::uniform(&[], 2.0, 1.0, 1.0).unwrap();
        let v = utilization_bound_exclusive(&empty, 2.0, 1.0).unwrap();
        assert!((v.bound - 0.0).abs() < 1e-12);
        assert!(v.accepted);

        let nonempty = KPointInstance::uniform(&[0.1], 2.0, 1.0, 1.0).unwrap();
        let v = utilization_bound_exclusive(&nonempty, 2.0, 1.0).unwrap();
        assert!(!v.accepted);
    }

    #[test]
    fn exclusive_accept_implies_hyperbolic_accept_example() {
        let i = inst(&[0.25, 0.2], 0.2);
        let ex = utilization_bound_exclusive(&i, 1.0, 1.0).unwrap();
        assert!(ex.accepted);
        assert!((ex.value - 0.45).abs() < 1e-12);
        let hy = hyperbolic_bound(&i, 1.0, 1.0).unwrap();
        assert!(hy.accepted);
    }

    #[test]
    fn extreme_points_uniform_matches_hyperbolic() {
        let i = inst(&[0.5], 0.3);
        let ep = extreme_points_bound(&i);
        let hy = hyperbolic_bound(&i, 1.0, 1.0).unwrap();
        assert!((ep.bound - hy.bound).abs() < 1e-12);
        assert!((ep.bound - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn extreme_points_empty() {
        let v = extreme_points_bound(&inst(&[], 0.7));
        assert_eq!(v.bound, 1.0);
        assert!(v.accepted);
    }

    #[test]
    fn extreme_points_nonpositive_bound_rejects() {
        let i = KPointInstance::new(
            vec![
                KPointEntry {
                    u: 0.5,
                    alpha: 1.0,
                    beta: 1.0,
                },
                KPointEntry {
                    u: 0.25,
                    alpha: 2.0,
                    beta: 0.5,
                },
            ],
            0.1,
        )
        .unwrap();
        let v = extreme_points_bound(&i);
        assert!((v.bound - (-0.148148148)).abs() < 1e-8);
        assert!(!v.accepted);
        assert_eq!(v.note.as_deref(), Some("bound nonpositive"));
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(KPointInstance::uniform(&[0.5], 1.0, 1.0, 0.0).is_err());
        assert!(KPointInstance::uniform(&[1.5], 1.0, 1.0, 0.5).is_err());
        assert!(KPointInstance::uniform(&[0.0], 1.0, 1.0, 0.5).is_err());
        let i = inst(&[0.5], 0.5);
        assert!(hyperbolic_bound(&i, 0.0, 1.0).is_err());
        assert!(utilization_bound_exclusive(&i, 1.0, -1.0).is_err());
    }
}
