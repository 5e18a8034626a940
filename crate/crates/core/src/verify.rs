//! Independent ground truth for small instances: exhaustive partition
//! search, the tight sequences of length `m(r-1)`, the closure-intersection
//! identity over a basis, and a brute-force Rota basis checker.
//!
//! None of this shares code with the solver beyond the oracle and
//! [`verify_partition`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::matroid::{ElementId, MatroidError, Oracle};
use crate::partition::{verify_partition, Partition};
use crate::seq::{ColorId, Coloring, IndexedSequence, SeqError};

/// Limits for exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteForceBudget {
    pub max_entries: usize,
    pub max_r: usize,
    /// Cap on complete labelings evaluated.
    pub max_assignments: u64,
}

impl Default for BruteForceBudget {
    fn default() -> Self {
        Self {
            max_entries: 12,
            max_r: 4,
            max_assignments: 20_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(&'static str),
    #[error("the given elements are not a basis")]
    NotABasis,
    #[error("element {0} is not in the basis")]
    NotInBasis(ElementId),
    #[error("expected {expected} bases, got {found}")]
    WrongBasisCount { expected: usize, found: usize },
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Sequence(#[from] SeqError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteForceOutcome {
    Found(Partition),
    NoPartition,
}

impl BruteForceOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, BruteForceOutcome::Found(_))
    }

    pub fn partition(&self) -> Option<&Partition> {
        match self {
            BruteForceOutcome::Found(p) => Some(p),
            BruteForceOutcome::NoPartition => None,
        }
    }
}

/// Bit positions for the distinct elements and colors of a short sequence.
struct Bits {
    element_bit: Vec<u32>,
    color_bit: Vec<u32>,
}

impl Bits {
    fn new(seq: &IndexedSequence, coloring: Option<&Coloring>) -> Self {
        let distinct = seq.set_image();
        let element_bit = seq
            .entries()
            .iter()
            .map(|e| distinct.binary_search(&e.element).unwrap() as u32)
            .collect();
        let color_bit = match coloring {
            Some(c) => {
                let palette: Vec<ColorId> = c.image(seq).into_iter().collect();
                seq.indices()
                    .map(|i| palette.binary_search(&c.color(i).unwrap()).unwrap() as u32)
                    .collect()
            }
            None => vec![0; seq.len()],
        };
        Self {
            element_bit,
            color_bit,
        }
    }
}

/// Exhaustive search over labelings of each entry with "unused" or a part
/// `1..=r`, in lexicographic order (unused first). Returns the first
/// labeling whose parts pass [`verify_partition`].
///
/// Subtrees are skipped only when no completion can pass: a part repeating
/// a color, more empty parts than entries left, or a state (position, each
/// part's element set and color set) already seen to fail. Leaves are first
/// screened by a memoized chain check on the parts' element sets.
pub fn brute_force_solve(
    oracle: &Oracle,
    seq: &IndexedSequence,
    coloring: Option<&Coloring>,
    r: usize,
    budget: &BruteForceBudget,
) -> Result<BruteForceOutcome, VerifyError> {
    if seq.len() > budget.max_entries || seq.len() > 64 {
        return Err(VerifyError::BudgetExceeded("too many entries"));
    }
    if r > budget.max_r {
        return Err(VerifyError::BudgetExceeded("too many parts"));
    }
    if let Some(c) = coloring {
        if !c.covers(seq) {
            return Err(VerifyError::Sequence(SeqError::UnknownIndex(
                seq.indices().find(|&i| c.color(i).is_none()).unwrap(),
            )));
        }
    }
    let mut search = LabelSearch {
        oracle,
        seq,
        coloring,
        r,
        bits: Bits::new(seq, coloring),
        labels: vec![0; seq.len()],
        parts: vec![(0, 0); r],
        failed: BTreeSet::new(),
        distinct: seq.set_image(),
        spans: BTreeMap::new(),
        evaluated: 0,
        limit: budget.max_assignments,
    };
    match search.descend(0)? {
        Some(parts) => Ok(BruteForceOutcome::Found(Partition::certify(oracle, parts)?)),
        None => Ok(BruteForceOutcome::NoPartition),
    }
}

const NONLOOP: u64 = u64::MAX;

struct LabelSearch<'a> {
    oracle: &'a Oracle,
    seq: &'a IndexedSequence,
    coloring: Option<&'a Coloring>,
    r: usize,
    bits: Bits,
    labels: Vec<usize>,
    parts: Vec<(u64, u64)>,
    failed: BTreeSet<(usize, Vec<(u64, u64)>)>,
    distinct: Vec<ElementId>,
    /// `cl(a) ⊆ cl(b)` for element masks; key `(NONLOOP, b)` caches whether `b` has a non-loop.
    spans: BTreeMap<(u64, u64), bool>,
    evaluated: u64,
    limit: u64,
}

impl LabelSearch<'_> {
    fn elements(&self, mask: u64) -> Vec<ElementId> {
        self.distinct
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect()
    }

    fn spanned(&mut self, a: u64, b: u64) -> Result<bool, MatroidError> {
        if let Some(&v) = self.spans.get(&(a, b)) {
            return Ok(v);
        }
        let v = if a == NONLOOP {
            let mut nonloop = false;
            for x in self.elements(b) {
                if !self.oracle.is_loop(x)? {
                    nonloop = true;
                    break;
                }
            }
            nonloop
        } else {
            a & !b == 0 || self.oracle.spans(&self.elements(b), &self.elements(a))?
        };
        self.spans.insert((a, b), v);
        Ok(v)
    }

    /// The chain and strictness conditions on the parts' element sets alone.
    fn chain_holds(&mut self) -> Result<bool, MatroidError> {
        if !self.spanned(NONLOOP, self.parts[0].0)? {
            return Ok(false);
        }
        for i in 1..self.r {
            if !self.spanned(self.parts[i - 1].0, self.parts[i].0)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn descend(&mut self, pos: usize) -> Result<Option<Vec<IndexedSequence>>, VerifyError> {
        let n = self.seq.len();
        let empty = self.parts.iter().filter(|p| p.0 == 0).count();
        if empty > n - pos {
            return Ok(None);
        }
        let key = (pos, self.parts.clone());
        if self.failed.contains(&key) {
            return Ok(None);
        }
        if pos == n {
            return self.evaluate(key);
        }
        let elem = 1u64 << self.bits.element_bit[pos];
        let color = 1u64 << self.bits.color_bit[pos];
        for label in 0..=self.r {
            let saved = if label > 0 {
                let part = self.parts[label - 1];
                if self.coloring.is_some() && part.1 & color != 0 {
                    continue;
                }
                self.parts[label - 1] = (part.0 | elem, part.1 | color);
                Some(part)
            } else {
                None
            };
            self.labels[pos] = label;
            let found = self.descend(pos + 1)?;
            if let Some(part) = saved {
                self.parts[label - 1] = part;
            }
            if found.is_some() {
                return Ok(found);
            }
        }
        self.failed.insert(key);
        Ok(None)
    }

    fn evaluate(&mut self, key: (usize, Vec<(u64, u64)>)) -> Result<Option<Vec<IndexedSequence>>, VerifyError> {
        self.evaluated += 1;
        if self.evaluated > self.limit {
            return Err(VerifyError::BudgetExceeded("too many labelings"));
        }
        if !self.chain_holds()? {
            self.failed.insert(key);
            return Ok(None);
        }
        let parts = (1..=self.r)
            .map(|label| {
                self.seq.select(
                    self.seq
                        .indices()
                        .zip(&self.labels)
                        .filter(|&(_, &l)| l == label)
                        .map(|(i, _)| i),
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        if verify_partition(self.oracle, self.seq, self.coloring, self.r, &parts)?.passed() {
            Ok(Some(parts))
        } else {
            self.failed.insert(key);
            Ok(None)
        }
    }
}

/// `r - 1` consecutive copies of each basis element, in basis order.
pub fn tight_instance(oracle: &Oracle, basis: &[ElementId], r: usize) -> Result<IndexedSequence, VerifyError> {
    if !oracle.is_basis(basis)? {
        return Err(VerifyError::NotABasis);
    }
    let copies = r.saturating_sub(1);
    Ok(IndexedSequence::new(
        basis.iter().flat_map(|&e| core::iter::repeat_n(e, copies)),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightnessReport {
    /// Every division had `⋂ cl S_i = cl∅`.
    pub holds: bool,
    /// Distinct divisions (by the parts' element sets) evaluated.
    pub divisions: u64,
    /// `⋂ cl S_i` agreed with `cl(⋂ S_i^set)` on every evaluated division.
    pub intersection_identity_agreed: bool,
}

/// Enumerates the divisions of [`tight_instance`] into `r` parts and checks
/// that the closures of the parts meet only in `cl∅`.
///
/// Only divisions using every entry are enumerated: dropping entries can
/// only shrink each closure, so it cannot enlarge the intersection. Divisions
/// with the same element set per part are evaluated once.
pub fn check_tightness(
    oracle: &Oracle,
    basis: &[ElementId],
    r: usize,
    budget: &BruteForceBudget,
) -> Result<TightnessReport, VerifyError> {
    let seq = tight_instance(oracle, basis, r)?;
    if seq.len() > budget.max_entries || seq.len() > 64 {
        return Err(VerifyError::BudgetExceeded("tight instance too long"));
    }
    let mut search = TightSearch {
        oracle,
        elements: seq.elements(),
        distinct: seq.set_image(),
        r,
        parts: vec![0; r],
        seen: BTreeSet::new(),
        closures: BTreeMap::new(),
        report: TightnessReport {
            holds: true,
            divisions: 0,
            intersection_identity_agreed: true,
        },
        limit: budget.max_assignments,
    };
    search.descend(0)?;
    Ok(search.report)
}

struct TightSearch<'a> {
    oracle: &'a Oracle,
    elements: Vec<ElementId>,
    distinct: Vec<ElementId>,
    r: usize,
    parts: Vec<u64>,
    seen: BTreeSet<(usize, Vec<u64>)>,
    closures: BTreeMap<u64, Vec<u64>>,
    report: TightnessReport,
    limit: u64,
}

impl TightSearch<'_> {
    fn set(&self, mask: u64) -> Vec<ElementId> {
        self.distinct
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect()
    }

    fn descend(&mut self, pos: usize) -> Result<(), VerifyError> {
        if !self.report.holds || !self.seen.insert((pos, self.parts.clone())) {
            return Ok(());
        }
        if pos == self.elements.len() {
            return self.evaluate();
        }
        let bit = 1u64 << self.distinct.binary_search(&self.elements[pos]).unwrap();
        for part in 0..self.r {
            let saved = self.parts[part];
            self.parts[part] |= bit;
            self.descend(pos + 1)?;
            self.parts[part] = saved;
        }
        Ok(())
    }

    /// `cl(mask)` as a bitset over the ground set, computed once per mask.
    fn closure(&mut self, mask: u64) -> Result<Vec<u64>, VerifyError> {
        if let Some(c) = self.closures.get(&mask) {
            return Ok(c.clone());
        }
        let mut bits = vec![0u64; self.oracle.ground_size().div_ceil(64)];
        for x in self.oracle.closure(&self.set(mask))? {
            bits[x.0 / 64] |= 1 << (x.0 % 64);
        }
        self.closures.insert(mask, bits.clone());
        Ok(bits)
    }

    fn evaluate(&mut self) -> Result<(), VerifyError> {
        self.report.divisions += 1;
        if self.report.divisions > self.limit {
            return Err(VerifyError::BudgetExceeded("too many divisions"));
        }
        let mut meet = self.closure(self.parts[0])?;
        for i in 1..self.r {
            let c = self.closure(self.parts[i])?;
            meet.iter_mut().zip(&c).for_each(|(a, b)| *a &= b);
        }
        if meet != self.closure(0)? {
            self.report.holds = false;
        }
        let common = self.parts.iter().fold(u64::MAX, |acc, &m| acc & m);
        if meet != self.closure(common)? {
            self.report.intersection_identity_agreed = false;
        }
        Ok(())
    }
}

/// `cl(U) ∩ cl(V) = cl(U ∩ V)`, checked on every ground element.
/// Holds whenever `U ∪ V` lies in a basis; may fail otherwise.
pub fn closure_intersection_agrees(oracle: &Oracle, u: &[ElementId], v: &[ElementId]) -> Result<bool, MatroidError> {
    let common: Vec<ElementId> = u.iter().copied().filter(|x| v.contains(x)).collect();
    for x in oracle.ground() {
        let both = oracle.in_closure(x, u)? && oracle.in_closure(x, v)?;
        if both != oracle.in_closure(x, &common)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// [`closure_intersection_agrees`] for subsets `U, V` of the basis `B`.
pub fn check_intersection_lemma(
    oracle: &Oracle,
    basis: &[ElementId],
    u: &[ElementId],
    v: &[ElementId],
) -> Result<bool, VerifyError> {
    if !oracle.is_basis(basis)? {
        return Err(VerifyError::NotABasis);
    }
    if let Some(&x) = u.iter().chain(v).find(|x| !basis.contains(x)) {
        return Err(VerifyError::NotInBasis(x));
    }
    Ok(closure_intersection_agrees(oracle, u, v)?)
}

/// Searches for `m` disjoint rainbow bases when the entries of color `i`
/// are `bases[i]`, for a matroid of rank `m`.
pub fn rota_check(
    oracle: &Oracle,
    bases: &[Vec<ElementId>],
    budget: &BruteForceBudget,
) -> Result<BruteForceOutcome, VerifyError> {
    let m = oracle.rank_bound();
    if bases.len() != m {
        return Err(VerifyError::WrongBasisCount {
            expected: m,
            found: bases.len(),
        });
    }
    for b in bases {
        if !oracle.is_basis(b)? {
            return Err(VerifyError::NotABasis);
        }
    }
    if m * m > budget.max_entries || m * m > 64 {
        return Err(VerifyError::BudgetExceeded("rank too large"));
    }
    let seq = IndexedSequence::new(bases.iter().flatten().copied());
    let colors: Vec<usize> = (0..m).flat_map(|c| core::iter::repeat_n(c, m)).collect();
    let mut search = RotaSearch {
        oracle,
        elements: seq.elements(),
        colors,
        parts: vec![Vec::new(); m],
        evaluated: 0,
        limit: budget.max_assignments,
    };
    if !search.descend(0)? {
        return Ok(BruteForceOutcome::NoPartition);
    }
    // entries were assigned in sequence order, so recover indices by position
    let mut labels = vec![0; seq.len()];
    for (part, members) in search.parts.iter().enumerate() {
        for &(pos, _) in members {
            labels[pos] = part;
        }
    }
    let parts = (0..m)
        .map(|p| seq.select((0..seq.len()).filter(|&i| labels[i] == p)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BruteForceOutcome::Found(Partition::certify(oracle, parts)?))
}

struct RotaSearch<'a> {
    oracle: &'a Oracle,
    elements: Vec<ElementId>,
    colors: Vec<usize>,
    /// (position, color) of each member
    parts: Vec<Vec<(usize, usize)>>,
    evaluated: u64,
    limit: u64,
}

impl RotaSearch<'_> {
    fn part_elements(&self, part: usize) -> Vec<ElementId> {
        self.parts[part].iter().map(|&(pos, _)| self.elements[pos]).collect()
    }

    fn descend(&mut self, pos: usize) -> Result<bool, VerifyError> {
        if pos == self.elements.len() {
            self.evaluated += 1;
            if self.evaluated > self.limit {
                return Err(VerifyError::BudgetExceeded("too many labelings"));
            }
            let m = self.parts.len();
            for part in 0..m {
                if self.oracle.rank(&self.part_elements(part))? != m {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        let color = self.colors[pos];
        for part in 0..self.parts.len() {
            if self.parts[part].iter().any(|&(_, c)| c == color) {
                continue;
            }
            // a part that must end up a basis stays independent
            if self.oracle.in_closure(self.elements[pos], &self.part_elements(part))? {
                continue;
            }
            self.parts[part].push((pos, color));
            if self.descend(pos + 1)? {
                return Ok(true);
            }
            self.parts[part].pop();
        }
        Ok(false)
    }
}
