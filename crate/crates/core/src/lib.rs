//! Colorful matroidal Tverberg partitions.
//!
//! Given a colored sequence of non-loops in a finite matroid, find `r`
//! pairwise disjoint rainbow subsequences `S_1..S_r` with
//! `cl∅ ⊊ cl S_1 ⊆ cl S_2 ⊆ … ⊆ cl S_r`. Matroids are only ever queried
//! through closure membership, and all arithmetic is exact.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod linalg;
pub mod matroid;
pub mod partition;
pub mod seq;
pub mod solver;
pub mod verify;

pub use matroid::{Coordinates, ElementId, Matroid, MatroidError, MatroidSpec, Oracle};
pub use partition::{verify_partition, ChainCertificate, Partition, VerificationFailure, VerificationReport};
pub use seq::{
    check_general_profile, check_special_profile, color_class, is_rainbow, ColorCountProfile, ColorId,
    ColorThresholds, Coloring, IndexedSequence, ProfileViolation, SeqError,
};
pub use solver::{
    max_rainbow_independent, solve_general, solve_noncolor, solve_special, Solution, SolveError, SolveStats,
    Solver, SolverOptions, TraceEvent,
};
pub use verify::{
    brute_force_solve, check_intersection_lemma, check_tightness, closure_intersection_agrees, rota_check,
    tight_instance, BruteForceBudget, BruteForceOutcome, TightnessReport, VerifyError,
};
