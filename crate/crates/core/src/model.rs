//! Task and task-set data model, validation, JSON ingestion, and derived
//! quantities.
//!
//! All types are immutable after construction and every operation is pure.
//! Priority is the list order of a [`TaskSet`]: index 0 is the highest
//! priority. Time values are plain `f64` durations in arbitrary units.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::numeric::positive;
use crate::Result;

/// One sporadic real-time task.
///
/// Mandatory parameters are the worst-case execution time, the period
/// (minimum inter-arrival time), and the relative deadline. The optional
/// parameters extend the model: `suspension` for self-suspending tasks,
/// `critical_path` for parallel (DAG) tasks reduced to total work plus
/// critical-path length, and `frames` for multi-frame tasks whose job
/// execution times cycle through a fixed list.
#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    wcet: f64,
    period: f64,
    deadline: f64,
    suspension: f64,
    critical_path: Option<f64>,
    frames: Option<Vec<f64>>,
}

impl Task {
    /// Implicit-deadline task (deadline = period).
    pub fn new(wcet: f64, period: f64) -> Self {
        Task {
            wcet,
            period,
            deadline: period,
            suspension: 0.0,
            critical_path: None,
            frames: None,
        }
    }

    /// Task with an explicit relative deadline.
    pub fn with_deadline(wcet: f64, period: f64, deadline: f64) -> Self {
        Task {
            deadline,
            ..Task::new(wcet, period)
        }
    }

    /// Returns the task with a self-suspension budget.
    pub fn suspending(self, suspension: f64) -> Self {
        Task { suspension, ..self }
    }

    /// Returns the task with a critical-path length (DAG model).
    pub fn with_critical_path(self, critical_path: f64) -> Self {
        Task {
            critical_path: Some(critical_path),
            ..self
        }
    }

    /// Returns the task with multi-frame execution times.
    pub fn with_frames(self, frames: Vec<f64>) -> Self {
        Task {
            frames: Some(frames),
            ..self
        }
    }

    /// Validates all task invariants, reporting the offending field.
    /// `index` is only used for error reporting.
    pub fn validate(&self, index: usize) -> Result<()> {
        let fail = |field, message: String| -> Result<()> {
            Err(Error::InvalidTask {
                index,
                field,
                message,
            })
        };
        if !positive(self.wcet) {
            return fail("c", format!("wcet must be > 0, got {}", self.wcet));
        }
        if !positive(self.period) {
            return fail("t", format!("period must be > 0, got {}", self.period));
        }
        if !positive(self.deadline) {
            return fail("d", format!("deadline must be > 0, got {}", self.deadline));
        }
        if self.suspension < 0.0 || !self.suspension.is_finite() {
            return fail("s", format!("suspension must be >= 0, got {}", self.suspension));
        }
        if self.suspension > 0.0 && self.wcet + self.suspension > self.period {
            return fail(
                "s",
                format!(
                    "self-suspending task requires c + s <= t, got {} + {} > {}",
                    self.wcet, self.suspension, self.period
                ),
            );
        }
        if let Some(cp) = self.critical_path {
            if cp < 0.0 || !cp.is_finite() {
                return fail("cp", format!("critical path must be >= 0, got {}", cp));
            }
            if cp > self.wcet {
                return fail(
                    "cp",
                    format!("critical path {} exceeds total work {}", cp, self.wcet),
                );
            }
        }
        if let Some(frames) = &self.frames {
            if frames.is_empty() {
                return fail("frames", "frame list must be nonempty".to_string());
            }
            if let Some(&bad) = frames.iter().find(|f| !positive(**f)) {
                return fail("frames", format!("frames must be > 0, got {}", bad));
            }
            let max = frames.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if max != self.wcet {
                return fail(
                    "c",
                    format!("wcet {} must equal the maximum frame {}", self.wcet, max),
                );
            }
        }
        Ok(())
    }

    pub fn wcet(&self) -> f64 {
        self.wcet
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn deadline(&self) -> f64 {
        self.deadline
    }

    pub fn suspension(&self) -> f64 {
        self.suspension
    }

    pub fn critical_path(&self) -> Option<f64> {
        self.critical_path
    }

    pub fn frames(&self) -> Option<&[f64]> {
        self.frames.as_deref()
    }

    /// Utilization `wcet / period`.
    pub fn utilization(&self) -> f64 {
        self.wcet / self.period
    }

    /// Largest total execution time of any `ell` consecutive frames of a
    /// multi-frame task, windows taken cyclically.
    ///
    /// Errors when the task has no frames or `ell` is not in
    /// `1..=frame_count`.
    pub fn phi(&self, ell: usize) -> Result<f64> {
        let frames = self.frames.as_ref().ok_or(Error::InvalidParameter {
            name: "frames",
            message: "task has no multi-frame execution times".to_string(),
        })?;
        let m = frames.len();
        if ell == 0 || ell > m {
            return Err(Error::InvalidParameter {
                name: "ell",
                message: format!("window length {} outside 1..={}", ell, m),
            });
        }
        let mut best = f64::NEG_INFINITY;
        for start in 0..m {
            let sum: f64 = (0..ell).map(|j| frames[(start + j) % m]).sum();
            best = best.max(sum);
        }
        Ok(best)
    }

    /// The coefficient upper bound `(phi(2) - phi(1)) / phi(1)` used when
    /// plugging a multi-frame task into the k-point framework. Requires at
    /// least two frames.
    pub fn multiframe_beta_bound(&self) -> Result<f64> {
        let phi1 = self.phi(1)?;
        let phi2 = self.phi(2)?;
        Ok((phi2 - phi1) / phi1)
    }
}

/// Deadline class of a task set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeadlineClass {
    /// All deadlines equal the periods.
    Implicit,
    /// All deadlines are at most the periods.
    Constrained,
    /// At least one deadline exceeds its period.
    Arbitrary,
}

/// A priority-ordered task set on `processors` identical processors.
///
/// Index order is the fixed-priority order: `tasks()[0]` has the highest
/// priority.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskSet {
    tasks: Vec<Task>,
    processors: u32,
}

impl TaskSet {
    /// Builds a task set keeping the given priority order.
    pub fn new(tasks: Vec<Task>, processors: u32) -> Result<Self> {
        if tasks.is_empty() {
            return Err(Error::InvalidTaskSet("task list is empty".to_string()));
        }
        if processors < 1 {
            return Err(Error::InvalidTaskSet(format!(
                "processors must be >= 1, got {}",
                processors
            )));
        }
        for (i, task) in tasks.iter().enumerate() {
            task.validate(i)?;
        }
        Ok(TaskSet { tasks, processors })
    }

    /// Builds a rate-monotonic set: tasks sorted by nondecreasing period,
    /// ties kept in input order.
    pub fn rate_monotonic(mut tasks: Vec<Task>, processors: u32) -> Result<Self> {
        tasks.sort_by(|a, b| a.period.partial_cmp(&b.period).unwrap());
        TaskSet::new(tasks, processors)
    }

    /// Builds a deadline-monotonic set: tasks sorted by nondecreasing
    /// relative deadline, ties kept in input order.
    pub fn deadline_monotonic(mut tasks: Vec<Task>, processors: u32) -> Result<Self> {
        tasks.sort_by(|a, b| a.deadline.partial_cmp(&b.deadline).unwrap());
        TaskSet::new(tasks, processors)
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    pub fn processors(&self) -> u32 {
        self.processors
    }

    /// Same tasks on a different processor count.
    pub fn with_processors(&self, processors: u32) -> Result<Self> {
        TaskSet::new(self.tasks.clone(), processors)
    }

    pub fn deadline_class(&self) -> DeadlineClass {
        if self.tasks.iter().all(|t| t.deadline == t.period) {
            DeadlineClass::Implicit
        } else if self.tasks.iter().all(|t| t.deadline <= t.period) {
            DeadlineClass::Constrained
        } else {
            DeadlineClass::Arbitrary
        }
    }

    /// True when the first `k + 1` tasks are in rate-monotonic order
    /// relative to task `k`, i.e. no higher-priority task has a longer
    /// period than task `k`.
    pub(crate) fn rm_prefix(&self, k: usize) -> bool {
        self.tasks[..k].iter().all(|t| t.period <= self.tasks[k].period)
    }
}

/// Total, maximum, and per-task utilization of a set.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilizationSummary {
    pub total: f64,
    pub max: f64,
    pub per_task: Vec<f64>,
}

/// Computes per-task utilizations together with their sum and maximum.
pub fn utilization_summary(set: &TaskSet) -> UtilizationSummary {
    let per_task: Vec<f64> = set.tasks().iter().map(Task::utilization).collect();
    let total = per_task.iter().sum();
    let max = per_task.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    UtilizationSummary {
        total,
        max,
        per_task,
    }
}

// -- JSON schema ------------------------------------------------------------
//
// { "processors": int >= 1,
//   "tasks": [ { "c": number, "t": number,
//                "d": number (optional, default = t),
//                "s": number (optional, default 0),
//                "cp": number (optional),
//                "frames": [number, ...] (optional) } ] }
//
// Unknown fields are rejected.

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawTaskSet {
    processors: u32,
    tasks: Vec<RawTask>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawTask {
    c: f64,
    t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    frames: Option<Vec<f64>>,
}

/// Parses a task-set document, validating every invariant.
pub fn parse_taskset(text: &str) -> Result<TaskSet> {
    let raw: RawTaskSet = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let tasks: Vec<Task> = raw
        .tasks
        .into_iter()
        .map(|r| Task {
            wcet: r.c,
            period: r.t,
            deadline: r.d.unwrap_or(r.t),
            suspension: r.s.unwrap_or(0.0),
            critical_path: r.cp,
            frames: r.frames,
        })
        .collect();
    TaskSet::new(tasks, raw.processors)
}

/// Serializes a task set back to the document schema. Optional fields are
/// omitted at their defaults, so parse followed by serialize is the
/// identity up to field presence and ordering.
pub fn serialize_taskset(set: &TaskSet) -> String {
    let raw = RawTaskSet {
        processors: set.processors,
        tasks: set
            .tasks
            .iter()
            .map(|task| RawTask {
                c: task.wcet,
                t: task.period,
                d: (task.deadline != task.period).then_some(task.deadline),
                s: (task.suspension != 0.0).then_some(task.suspension),
                cp: task.critical_path,
                frames: task.frames.clone(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("task-set serialization cannot fail")
}
