//! Numerical solvers for the named constants of the analysis family:
//! the 1.76322 speed-up factor of the uniprocessor hyperbolic test and the
//! capacity-augmentation factors 3.62143 (global RM, DAG tasks) and 2.668
//! (global RM, sporadic tasks).
//!
//! Each constant is the reciprocal of the root of a small fixed-point
//! equation. The roots are found by bracketed bisection, which converges
//! unconditionally once a sign change is established.

use crate::error::Error;
use crate::Result;

/// Convergence width on the root.
const ROOT_TOL: f64 = 1e-14;
const MAX_ITERATIONS: usize = 200;

/// A solved constant: `factor` is the reported value, `root` the
/// fixed-point variable it is the reciprocal of, and `residual` the
/// defect of the defining equation at the solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorResult {
    pub factor: f64,
    pub root: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Bracketed bisection on `f` over `[lo, hi]`, requiring a sign change.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<(f64, usize)> {
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok((lo, 0));
    }
    if fhi == 0.0 {
        return Ok((hi, 0));
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::InvalidParameter {
            name: "bracket",
            message: format!("no sign change on [{}, {}]", lo, hi),
        });
    }
    let negative_low = flo < 0.0;
    for iteration in 1..=MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid == 0.0 || hi - lo < ROOT_TOL {
            return Ok((mid, iteration));
        }
        if (fmid < 0.0) == negative_low {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi), MAX_ITERATIONS))
}

/// Solves `y = ln(a / (b0 + y))` on `(0, a - b0)` and reports the factor
/// `1 / y`.
///
/// The two instances used by the global-RM corollaries are `(a, b0) =
/// (3, 2)` giving 3.62143 and `(a, b0) = (2, 1)` giving 2.668.
pub fn solve_capacity_factor(a: f64, b0: f64) -> Result<FactorResult> {
    if !(a > b0 && b0 >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "a/b0",
            message: format!("need a > b0 >= 0, got ({}, {})", a, b0),
        });
    }
    let f = |y: f64| y - (a / (b0 + y)).ln();
    let (root, iterations) = bisect(f, 1e-12, a - b0)?;
    Ok(FactorResult {
        factor: 1.0 / root,
        root,
        residual: f(root).abs(),
        iterations,
    })
}

/// Solves for the intersection of `(1 + x) / 2` and `ln(2 / (1 + x))` on
/// `x` in (0, 1). The intersection value `y = (1 + x) / 2` is the root and
/// the reported speed-up factor is `1 / y = 2 / (1 + x)`, approximately
/// 1.76322.
pub fn solve_speedup_factor() -> FactorResult {
    let g = |x: f64| (1.0 + x) / 2.0 - (2.0 / (1.0 + x)).ln();
    // g(0) = 0.5 - ln 2 < 0 and g(1) = 1 > 0, so the bracket always holds.
    let (x, iterations) = bisect(g, 0.0, 1.0).expect("fixed bracket has a sign change");
    let root = (1.0 + x) / 2.0;
    FactorResult {
        factor: 2.0 / (1.0 + x),
        root,
        residual: g(x).abs(),
        iterations,
    }
}
