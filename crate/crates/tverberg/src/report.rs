//! Run reports, as key/value text or JSON.

use std::fmt::{self, Write as _};
use std::time::Instant;

use serde::Serialize;
use tverberg_core::{
    brute_force_solve, verify_partition, BruteForceBudget, BruteForceOutcome, Coloring, IndexedSequence, Oracle,
    Partition, SolveError, Solver, SolverOptions,
};

use crate::format::{InstanceFile, Mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Partition,
    NoPartition,
    PreconditionViolated,
    Error,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Partition => 0,
            Outcome::Error => 1,
            Outcome::PreconditionViolated => 2,
            Outcome::NoPartition => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Outcome::Partition => "partition",
            Outcome::NoPartition => "no-partition",
            Outcome::PreconditionViolated => "precondition-violated",
            Outcome::Error => "error",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Certificate {
    /// Per part, indices of an independent subset spanning it.
    pub spanning: Vec<Vec<usize>>,
    /// A non-loop in the first part.
    pub witness: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub outcome: Outcome,
    pub detail: Option<String>,
    pub parts: Vec<Vec<usize>>,
    pub certificate: Option<Certificate>,
    pub oracle_calls: u64,
    pub cycle_iterations: usize,
    pub restarts: usize,
    pub recursion_depth: usize,
    pub wall_ms: f64,
}

impl RunReport {
    fn new(outcome: Outcome) -> Self {
        Self {
            outcome,
            detail: None,
            parts: Vec::new(),
            certificate: None,
            oracle_calls: 0,
            cycle_iterations: 0,
            restarts: 0,
            recursion_depth: 0,
            wall_ms: 0.0,
        }
    }

    pub fn error(detail: impl Into<String>) -> Self {
        Self {
            detail: Some(detail.into()),
            ..Self::new(Outcome::Error)
        }
    }

    fn with_partition(mut self, p: &Partition) -> Self {
        self.parts = p.part_indices();
        self.certificate = Some(Certificate {
            spanning: p.certificate().spanning.clone(),
            witness: p.certificate().witness,
        });
        self
    }

    pub fn exit_code(&self) -> u8 {
        self.outcome.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn line(out: &mut String, key: &str, items: &[usize]) {
    let _ = write!(out, "{key}");
    for i in items {
        let _ = write!(out, " {i}");
    }
    out.push('\n');
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let _ = writeln!(out, "outcome {}", self.outcome.name());
        if let Some(d) = &self.detail {
            let _ = writeln!(out, "detail {d}");
        }
        for p in &self.parts {
            line(&mut out, "part", p);
        }
        if let Some(c) = &self.certificate {
            for s in &c.spanning {
                line(&mut out, "spanning", s);
            }
            if let Some(w) = c.witness {
                let _ = writeln!(out, "witness {w}");
            }
        }
        let _ = writeln!(out, "oracle_calls {}", self.oracle_calls);
        let _ = writeln!(out, "cycle_iterations {}", self.cycle_iterations);
        let _ = writeln!(out, "restarts {}", self.restarts);
        let _ = writeln!(out, "recursion_depth {}", self.recursion_depth);
        let _ = writeln!(out, "wall_ms {:.3}", self.wall_ms);
        f.write_str(&out)
    }
}

/// Everything needed to run an instance.
pub struct Loaded {
    pub oracle: Oracle,
    pub seq: IndexedSequence,
    pub coloring: Option<Coloring>,
    pub r: usize,
    pub mode: Mode,
}

impl Loaded {
    pub fn new(inst: &InstanceFile) -> Result<Self, tverberg_core::MatroidError> {
        let oracle = inst.matroid.build()?;
        oracle.set_counting(crate::counting_enabled());
        Ok(Self {
            oracle,
            seq: IndexedSequence::new(inst.sequence.iter().copied()),
            coloring: inst.colors.clone().map(Coloring::new),
            r: inst.r,
            mode: inst.mode,
        })
    }

    /// The coloring the partition must be rainbow for, if any.
    fn rainbow_for(&self) -> Option<&Coloring> {
        match self.mode {
            Mode::Noncolor => None,
            _ => self.coloring.as_ref(),
        }
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Runs the solver matching the instance's mode and re-verifies the result.
pub fn solve(inst: &InstanceFile, options: SolverOptions) -> RunReport {
    let start = Instant::now();
    let loaded = match Loaded::new(inst) {
        Ok(l) => l,
        Err(e) => return RunReport::error(e.to_string()),
    };
    let solver = Solver::with_options(&loaded.oracle, options);
    let result = match (loaded.mode, &loaded.coloring) {
        (Mode::Noncolor, _) => solver.solve_noncolor(&loaded.seq, loaded.r),
        (Mode::General, Some(c)) => solver.solve_general(&loaded.seq, c, loaded.r),
        (Mode::Special, Some(c)) => solver.solve_special(&loaded.seq, c, loaded.r),
        (mode, None) => return RunReport::error(format!("mode {mode} needs colors")),
    };
    let mut report = match result {
        Ok(sol) => {
            match verify_partition(&loaded.oracle, &loaded.seq, loaded.rainbow_for(), loaded.r, sol.partition.parts()) {
                Ok(v) if v.passed() => {}
                Ok(v) => return RunReport::error(format!("solver output failed verification: {}", v.failure.unwrap())),
                Err(e) => return RunReport::error(e.to_string()),
            }
            let mut report = RunReport::new(Outcome::Partition).with_partition(&sol.partition);
            report.oracle_calls = sol.stats.oracle_calls;
            report.cycle_iterations = sol.stats.cycle_iterations;
            report.restarts = sol.stats.restarts;
            report.recursion_depth = sol.stats.recursion_depth;
            report
        }
        Err(SolveError::PreconditionViolated(v)) => RunReport {
            detail: Some(v.to_string()),
            ..RunReport::new(Outcome::PreconditionViolated)
        },
        Err(SolveError::LoopInInput { index }) => RunReport {
            detail: Some(format!("entry {index} is a loop")),
            ..RunReport::new(Outcome::PreconditionViolated)
        },
        Err(e) => RunReport::error(e.to_string()),
    };
    report.wall_ms = elapsed_ms(start);
    report
}

/// Verifies `parts` against the instance.
pub fn verify(inst: &InstanceFile, parts: &[Vec<usize>]) -> RunReport {
    let start = Instant::now();
    let loaded = match Loaded::new(inst) {
        Ok(l) => l,
        Err(e) => return RunReport::error(e.to_string()),
    };
    let mut seqs = Vec::with_capacity(parts.len());
    for p in parts {
        match loaded.seq.select(p.iter().copied()) {
            Ok(s) => seqs.push(s),
            Err(e) => return RunReport::error(e.to_string()),
        }
    }
    let mut report = match verify_partition(&loaded.oracle, &loaded.seq, loaded.rainbow_for(), loaded.r, &seqs) {
        Ok(v) => match v.failure {
            None => match Partition::certify(&loaded.oracle, seqs) {
                Ok(p) => RunReport::new(Outcome::Partition).with_partition(&p),
                Err(e) => RunReport::error(e.to_string()),
            },
            Some(f) => RunReport {
                detail: Some(f.to_string()),
                parts: parts.to_vec(),
                ..RunReport::new(Outcome::NoPartition)
            },
        },
        Err(e) => RunReport::error(e.to_string()),
    };
    report.oracle_calls = loaded.oracle.oracle_calls();
    report.wall_ms = elapsed_ms(start);
    report
}

/// Exhaustive search on the instance.
pub fn brute(inst: &InstanceFile, budget: &BruteForceBudget) -> RunReport {
    let start = Instant::now();
    let loaded = match Loaded::new(inst) {
        Ok(l) => l,
        Err(e) => return RunReport::error(e.to_string()),
    };
    let mut report = match brute_force_solve(&loaded.oracle, &loaded.seq, loaded.rainbow_for(), loaded.r, budget) {
        Ok(BruteForceOutcome::Found(p)) => RunReport::new(Outcome::Partition).with_partition(&p),
        Ok(BruteForceOutcome::NoPartition) => RunReport::new(Outcome::NoPartition),
        Err(e) => RunReport::error(e.to_string()),
    };
    report.oracle_calls = loaded.oracle.oracle_calls();
    report.wall_ms = elapsed_ms(start);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{emit_partition, parse_instance, parse_partition};

    const INST: &str = "\
matroid uniform 2 4
end
sequence 0 1 2 3
colors 0 1 2 0
r 2
mode general
";

    #[test]
    fn solve_report_reverifies() {
        let inst = parse_instance(INST).unwrap();
        let report = solve(&inst, SolverOptions::default());
        assert_eq!(report.outcome, Outcome::Partition);
        let text = report.to_string();
        let parts = parse_partition(&text).unwrap();
        assert_eq!(parts, report.parts);
        assert_eq!(verify(&inst, &parts).outcome, Outcome::Partition);
        assert!(report.to_json().contains("\"outcome\": \"partition\""));
    }

    #[test]
    fn bad_partition_reports_failure() {
        let inst = parse_instance(INST).unwrap();
        let report = verify(&inst, &parse_partition(&emit_partition(&[vec![0, 3], vec![1]])).unwrap());
        assert_eq!(report.outcome, Outcome::NoPartition);
        assert!(report.detail.unwrap().contains("rainbow"));
        assert_eq!(verify(&inst, &[vec![9]]).outcome, Outcome::Error);
    }

    #[test]
    fn tight_instance_is_a_precondition_violation() {
        let inst = parse_instance(&INST.replace("sequence 0 1 2 3", "sequence 0 1").replace("colors 0 1 2 0", "colors 0 1")).unwrap();
        assert_eq!(solve(&inst, SolverOptions::default()).exit_code(), 2);
        assert_eq!(brute(&inst, &BruteForceBudget::default()).exit_code(), 3);
    }
}
