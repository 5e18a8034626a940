//! Finite matroids seen only through closure membership.
//!
//! A [`Matroid`] answers one question: is `x` in the closure of `Y`? Every
//! other primitive (rank, independence, loops, coloops, restriction,
//! free extensions) is derived from that answer by [`Oracle`], which also
//! counts how many membership queries were made.

mod families;
mod spec;

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicBool, AtomicU64, Ordering};

pub use families::{DirectSum, Graphic, Restriction, Uniform, VectorMatroid};
pub use spec::{Coordinates, MatroidSpec};

/// Identifier of a ground element, unique within one matroid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub usize);

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatroidError {
    #[error("element {0} is not in the ground set")]
    UnknownElement(ElementId),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("element {element} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        element: usize,
        expected: usize,
        found: usize,
    },
    #[error("coordinate {value} of element {element} is not a residue mod {p}")]
    ResidueOutOfRange { element: usize, value: u64, p: u64 },
    #[error("edge {edge} references vertex {vertex}, but there are only {vertices} vertices")]
    InvalidEdge {
        edge: usize,
        vertex: usize,
        vertices: usize,
    },
    #[error("uniform matroid rank {rank} exceeds ground size {size}")]
    UniformRankTooLarge { rank: usize, size: usize },
}

/// The raw closure procedure of a finite matroid on ground `0..ground_size()`.
///
/// Implementations may assume every id passed in is in range; [`Oracle`]
/// validates before delegating. `ys` may contain repeats.
pub trait Matroid: Send + Sync {
    fn ground_size(&self) -> usize;

    fn closure_contains(&self, x: ElementId, ys: &[ElementId]) -> bool;

    /// Membership of every ground element in `cl(ys)`. Override when the
    /// whole closure is cheaper than one query per element.
    fn closure_members(&self, ys: &[ElementId]) -> Vec<bool> {
        (0..self.ground_size())
            .map(|x| self.closure_contains(ElementId(x), ys))
            .collect()
    }
}

/// Shared query counter. Views derived from an oracle share its counter.
#[derive(Debug)]
pub struct CallCounter {
    calls: AtomicU64,
    enabled: AtomicBool,
}

impl CallCounter {
    fn new() -> Self {
        Self {
            calls: AtomicU64::new(0),
            enabled: AtomicBool::new(true),
        }
    }

    fn tick(&self) {
        if self.enabled.load(Ordering::Relaxed) {
            self.calls.fetch_add(1, Ordering::Relaxed);
        }
    }
}

/// A matroid together with its rank and a query counter.
///
/// Cloning is cheap and the clone shares the counter.
#[derive(Clone)]
pub struct Oracle {
    matroid: Arc<dyn Matroid>,
    rank: usize,
    counter: Arc<CallCounter>,
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Oracle")
            .field("ground_size", &self.ground_size())
            .field("rank", &self.rank)
            .field("calls", &self.oracle_calls())
            .finish()
    }
}

impl Oracle {
    pub fn new<M: Matroid + 'static>(matroid: M) -> Self {
        Self::from_arc(Arc::new(matroid), Arc::new(CallCounter::new()))
    }

    fn from_arc(matroid: Arc<dyn Matroid>, counter: Arc<CallCounter>) -> Self {
        let mut basis = Vec::new();
        for x in (0..matroid.ground_size()).map(ElementId) {
            if !matroid.closure_contains(x, &basis) {
                basis.push(x);
            }
        }
        Self {
            rank: basis.len(),
            matroid,
            counter,
        }
    }

    pub fn ground_size(&self) -> usize {
        self.matroid.ground_size()
    }

    pub fn ground(&self) -> impl Iterator<Item = ElementId> {
        (0..self.ground_size()).map(ElementId)
    }

    /// The rank of the whole ground set.
    pub fn rank_bound(&self) -> usize {
        self.rank
    }

    pub fn oracle_calls(&self) -> u64 {
        self.counter.calls.load(Ordering::Relaxed)
    }

    pub fn reset_calls(&self) {
        self.counter.calls.store(0, Ordering::Relaxed);
    }

    pub fn set_counting(&self, enabled: bool) {
        self.counter.enabled.store(enabled, Ordering::Relaxed);
    }

    pub fn check_element(&self, x: ElementId) -> Result<(), MatroidError> {
        if x.0 < self.ground_size() {
            Ok(())
        } else {
            Err(MatroidError::UnknownElement(x))
        }
    }

    fn check_all(&self, ys: &[ElementId]) -> Result<(), MatroidError> {
        ys.iter().try_for_each(|&y| self.check_element(y))
    }

    /// `x ∈ cl(ys)`. This is the unit-cost query that gets counted.
    pub fn in_closure(&self, x: ElementId, ys: &[ElementId]) -> Result<bool, MatroidError> {
        self.check_element(x)?;
        self.check_all(ys)?;
        self.counter.tick();
        Ok(self.matroid.closure_contains(x, ys))
    }

    /// Whether every element of `xs` lies in `cl(ys)`.
    pub fn spans(&self, ys: &[ElementId], xs: &[ElementId]) -> Result<bool, MatroidError> {
        for &x in xs {
            if !self.in_closure(x, ys)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_closure(&self, a: &[ElementId], b: &[ElementId]) -> Result<bool, MatroidError> {
        Ok(self.spans(b, a)? && self.spans(a, b)?)
    }

    /// Greedy maximal independent subset of `ys`, scanned in the given order.
    pub fn basis_of(&self, ys: &[ElementId]) -> Result<Vec<ElementId>, MatroidError> {
        self.check_all(ys)?;
        let mut basis = Vec::new();
        for &y in ys {
            if !self.in_closure(y, &basis)? {
                basis.push(y);
            }
        }
        Ok(basis)
    }

    pub fn rank(&self, ys: &[ElementId]) -> Result<usize, MatroidError> {
        Ok(self.basis_of(ys)?.len())
    }

    /// Independent as a set: repeated ids make a list dependent.
    pub fn is_independent(&self, ys: &[ElementId]) -> Result<bool, MatroidError> {
        for (i, &y) in ys.iter().enumerate() {
            if self.in_closure(y, &ys[..i])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_basis(&self, ys: &[ElementId]) -> Result<bool, MatroidError> {
        Ok(ys.len() == self.rank && self.is_independent(ys)?)
    }

    pub fn is_loop(&self, x: ElementId) -> Result<bool, MatroidError> {
        self.in_closure(x, &[])
    }

    pub fn is_coloop(&self, x: ElementId) -> Result<bool, MatroidError> {
        self.check_element(x)?;
        let rest: Vec<ElementId> = self.ground().filter(|&y| y != x).collect();
        Ok(!self.in_closure(x, &rest)?)
    }

    /// All ground elements in `cl(ys)`. Counts as one query per ground
    /// element.
    pub fn closure(&self, ys: &[ElementId]) -> Result<Vec<ElementId>, MatroidError> {
        self.check_all(ys)?;
        for _ in 0..self.ground_size() {
            self.counter.tick();
        }
        Ok(self
            .matroid
            .closure_members(ys)
            .into_iter()
            .enumerate()
            .filter(|&(_, inside)| inside)
            .map(|(x, _)| ElementId(x))
            .collect())
    }

    /// Direct sum with the free matroid on `count` fresh elements, which get
    /// ids `ground_size()..ground_size() + count`. Shares the counter.
    pub fn add_coloops(&self, count: usize) -> Oracle {
        if count == 0 {
            return self.clone();
        }
        let sum = DirectSum::new(self.matroid.clone(), Arc::new(Uniform::free(count)));
        Oracle {
            rank: self.rank + count,
            matroid: Arc::new(sum),
            counter: self.counter.clone(),
        }
    }

    /// The restriction to `members` (renumbered `0..members.len()` in the
    /// given order) and its rank. Shares the counter.
    pub fn restrict(&self, members: &[ElementId]) -> Result<(Oracle, usize), MatroidError> {
        self.check_all(members)?;
        let view = Restriction::new(self.matroid.clone(), members.to_vec());
        let oracle = Oracle::from_arc(Arc::new(view), self.counter.clone());
        let rank = oracle.rank;
        Ok((oracle, rank))
    }

    /// Direct sum of two oracles; the right summand's ids are shifted by the
    /// left ground size. The result gets a fresh counter.
    pub fn direct_sum(left: &Oracle, right: &Oracle) -> Oracle {
        let sum = DirectSum::new(left.matroid.clone(), right.matroid.clone());
        Oracle {
            rank: left.rank + right.rank,
            matroid: Arc::new(sum),
            counter: Arc::new(CallCounter::new()),
        }
    }
}
