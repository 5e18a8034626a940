//! Oracle-call and wall-time sweeps.

use std::io;
use std::sync::Mutex;
use std::time::Instant;

use serde::Serialize;
use tverberg_core::{Coloring, IndexedSequence, Solver, SolverOptions};

use crate::format::InstanceFile;
use crate::generate::{gen_random_instance, gen_round_robin, Family, GenerateError, Profile};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub family: String,
    pub m: usize,
    pub r: usize,
    pub len: usize,
    pub oracle_calls: u64,
    pub iterations: usize,
    pub restarts: usize,
    pub wall_ms: f64,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub families: Vec<Family>,
    pub ranks: Vec<usize>,
    pub rs: Vec<usize>,
    /// Entries beyond `m(r-1)+1`; one row per value.
    pub extra_lengths: Vec<usize>,
    pub seed: u64,
    pub workers: usize,
    /// Use [`gen_round_robin`] instead of random instances (uniform only).
    pub round_robin: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error("{family} m={m} r={r}: {message}")]
    Solve {
        family: Family,
        m: usize,
        r: usize,
        message: String,
    },
}

/// Solves one random general-profile instance without invariant checks.
pub fn bench_one(family: Family, m: usize, r: usize, len: usize, seed: u64) -> Result<BenchRow, BenchError> {
    let inst = gen_random_instance(family, m, r, len, seed, Profile::General)?;
    bench_instance(family, &inst)
}

/// Solves a general-mode instance without invariant checks.
pub fn bench_instance(family: Family, inst: &InstanceFile) -> Result<BenchRow, BenchError> {
    let r = inst.r;
    let oracle = inst.matroid.build().map_err(|e| BenchError::Solve {
        family,
        m: 0,
        r,
        message: e.to_string(),
    })?;
    let m = oracle.rank_bound();
    let fail = |message: String| BenchError::Solve { family, m, r, message };
    oracle.set_counting(crate::counting_enabled());
    let seq = IndexedSequence::new(inst.sequence.iter().copied());
    let coloring = Coloring::new(inst.colors.clone().unwrap_or_default());
    let options = SolverOptions {
        check_invariants: false,
        record_trace: false,
    };
    let start = Instant::now();
    let sol = Solver::with_options(&oracle, options)
        .solve_general(&seq, &coloring, r)
        .map_err(|e| fail(e.to_string()))?;
    Ok(BenchRow {
        family: family.name().to_string(),
        m,
        r,
        len: seq.len(),
        oracle_calls: sol.stats.oracle_calls,
        iterations: sol.stats.cycle_iterations,
        restarts: sol.stats.restarts,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Runs every (family, m, r, extra length) combination, spread over
/// `workers` threads. Rows come back in sweep order.
pub fn sweep(config: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    let mut jobs = Vec::new();
    for &family in &config.families {
        for &m in &config.ranks {
            for &r in &config.rs {
                for &extra in &config.extra_lengths {
                    let len = m * r.saturating_sub(1) + 1 + extra;
                    let seed = config.seed ^ ((jobs.len() as u64) << 20);
                    jobs.push((family, m, r, len, seed));
                }
            }
        }
    }
    let results: Vec<Mutex<Option<Result<BenchRow, BenchError>>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = Mutex::new(0usize);
    std::thread::scope(|s| {
        for _ in 0..config.workers.max(1) {
            s.spawn(|| loop {
                let i = {
                    let mut n = next.lock().unwrap();
                    let i = *n;
                    *n += 1;
                    i
                };
                let Some(&(family, m, r, len, seed)) = jobs.get(i) else {
                    break;
                };
                let row = if config.round_robin {
                    gen_round_robin(m, r)
                        .map_err(BenchError::from)
                        .and_then(|inst| bench_instance(Family::Uniform, &inst))
                } else {
                    bench_one(family, m, r, len, seed)
                };
                *results[i].lock().unwrap() = Some(row);
            });
        }
    });
    results
        .into_iter()
        .map(|slot| slot.into_inner().unwrap().expect("every job ran"))
        .collect()
}

pub fn write_csv<W: io::Write>(rows: &[BenchRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record(["family", "m", "r", "len", "oracle_calls", "iterations", "restarts", "wall_ms"])?;
    }
    w.flush()?;
    Ok(())
}
