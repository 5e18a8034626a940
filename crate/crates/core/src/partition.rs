//! Tverberg partitions and their verification.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::matroid::{ElementId, MatroidError, Oracle};
use crate::seq::{is_rainbow, Coloring, Entry, IndexedSequence};

/// Parts `S_1..S_r` with `cl∅ ⊊ cl S_1 ⊆ … ⊆ cl S_r`, plus a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<IndexedSequence>,
    certificate: ChainCertificate,
}

/// Evidence for the chain: for each part, the indices of an independent
/// subset spanning it, and the index of a non-loop in the first part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCertificate {
    pub spanning: Vec<Vec<usize>>,
    pub witness: Option<usize>,
}

impl Partition {
    /// Wraps `parts`, computing the certificate through `oracle`. Does not
    /// check anything; use [`verify_partition`] for that.
    pub fn certify(oracle: &Oracle, parts: Vec<IndexedSequence>) -> Result<Self, MatroidError> {
        let mut spanning = Vec::with_capacity(parts.len());
        for part in &parts {
            spanning.push(greedy_basis(oracle, part.entries())?.into_iter().map(|e| e.index).collect());
        }
        let mut witness = None;
        if let Some(first) = parts.first() {
            for e in first.entries() {
                if !oracle.is_loop(e.element)? {
                    witness = Some(e.index);
                    break;
                }
            }
        }
        Ok(Self {
            parts,
            certificate: ChainCertificate { spanning, witness },
        })
    }

    pub fn parts(&self) -> &[IndexedSequence] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<IndexedSequence> {
        self.parts
    }

    pub fn certificate(&self) -> &ChainCertificate {
        &self.certificate
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part `i` as a list of sequence indices.
    pub fn part_indices(&self) -> Vec<Vec<usize>> {
        self.parts.iter().map(|p| p.indices().collect()).collect()
    }
}

impl ChainCertificate {
    /// Re-checks the certificate's own claims against `parts`.
    pub fn check(&self, oracle: &Oracle, parts: &[IndexedSequence]) -> Result<bool, MatroidError> {
        if self.spanning.len() != parts.len() {
            return Ok(false);
        }
        let mut chosen = Vec::with_capacity(parts.len());
        for (part, indices) in parts.iter().zip(&self.spanning) {
            let Some(elems) = indices.iter().map(|&i| part.get(i)).collect::<Option<Vec<_>>>() else {
                return Ok(false);
            };
            if !oracle.is_independent(&elems)? || !oracle.spans(&elems, &part.elements())? {
                return Ok(false);
            }
            chosen.push(elems);
        }
        for (i, elems) in chosen.iter().enumerate().skip(1) {
            if !oracle.spans(elems, &chosen[i - 1])? {
                return Ok(false);
            }
        }
        match (self.witness, parts.first()) {
            (Some(w), Some(first)) => match first.get(w) {
                Some(x) => Ok(!oracle.is_loop(x)?),
                None => Ok(false),
            },
            (None, None) => Ok(true),
            _ => Ok(false),
        }
    }
}

fn greedy_basis(oracle: &Oracle, entries: &[Entry]) -> Result<Vec<Entry>, MatroidError> {
    let mut basis: Vec<Entry> = Vec::new();
    let mut elems: Vec<ElementId> = Vec::new();
    for e in entries {
        if !oracle.in_closure(e.element, &elems)? {
            basis.push(*e);
            elems.push(e.element);
        }
    }
    Ok(basis)
}

/// The first violated predicate, in the order they are checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerificationFailure {
    PartCount { expected: usize, found: usize },
    NotSubsequence { part: usize },
    Disjointness { index: usize },
    Rainbow { part: usize },
    /// Entry `index` of part `part` is outside the closure of the next part.
    Chain { part: usize, index: usize },
    /// The first part spans only `cl∅`.
    Strictness,
}

impl fmt::Display for VerificationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PartCount { expected, found } => {
                write!(f, "part count: expected {expected}, found {found}")
            }
            Self::NotSubsequence { part } => write!(f, "part {} is not a subsequence", part + 1),
            Self::Disjointness { index } => write!(f, "disjointness: index {index} used twice"),
            Self::Rainbow { part } => write!(f, "rainbow: part {} repeats a color", part + 1),
            Self::Chain { part, index } => write!(
                f,
                "chain: index {index} of part {} is outside cl(S_{})",
                part + 1,
                part + 2
            ),
            Self::Strictness => write!(f, "strictness: cl S_1 = cl∅"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub failure: Option<VerificationFailure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    fn fail(failure: VerificationFailure) -> Self {
        Self {
            failure: Some(failure),
        }
    }
}

/// Checks `parts` against `seq` without trusting how they were produced:
/// part count, being subsequences, pairwise disjointness, rainbowness (when a
/// coloring is given), the closure chain and strictness at the bottom.
pub fn verify_partition(
    oracle: &Oracle,
    seq: &IndexedSequence,
    coloring: Option<&Coloring>,
    r: usize,
    parts: &[IndexedSequence],
) -> Result<VerificationReport, MatroidError> {
    if parts.len() != r {
        return Ok(VerificationReport::fail(VerificationFailure::PartCount {
            expected: r,
            found: parts.len(),
        }));
    }
    for (i, part) in parts.iter().enumerate() {
        if !part.is_subsequence_of(seq) {
            return Ok(VerificationReport::fail(VerificationFailure::NotSubsequence { part: i }));
        }
    }
    let mut used = BTreeSet::new();
    for part in parts {
        for index in part.indices() {
            if !used.insert(index) {
                return Ok(VerificationReport::fail(VerificationFailure::Disjointness { index }));
            }
        }
    }
    if let Some(coloring) = coloring {
        if let Some(part) = parts.iter().position(|p| !is_rainbow(p, coloring)) {
            return Ok(VerificationReport::fail(VerificationFailure::Rainbow { part }));
        }
    }
    for i in 0..parts.len().saturating_sub(1) {
        let next = parts[i + 1].set_image();
        for e in greedy_basis(oracle, parts[i].entries())? {
            if !oracle.in_closure(e.element, &next)? {
                return Ok(VerificationReport::fail(VerificationFailure::Chain {
                    part: i,
                    index: e.index,
                }));
            }
        }
    }
    let mut strict = false;
    if let Some(first) = parts.first() {
        for e in first.entries() {
            if !oracle.is_loop(e.element)? {
                strict = true;
                break;
            }
        }
    }
    if !strict {
        return Ok(VerificationReport::fail(VerificationFailure::Strictness));
    }
    Ok(VerificationReport { failure: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{ElementId, Uniform};
    use crate::seq::ColorId;
    use alloc::vec;

    fn setup() -> (Oracle, IndexedSequence, Coloring) {
        let m = Oracle::new(Uniform::new(2, 4).unwrap());
        let s = IndexedSequence::new([0, 1, 2, 3].map(ElementId));
        let c = Coloring::new(vec![ColorId(0), ColorId(1), ColorId(0), ColorId(1)]);
        (m, s, c)
    }

    #[test]
    fn valid_partition_passes() {
        let (m, s, c) = setup();
        let parts = vec![s.select([0]).unwrap(), s.select([2, 3]).unwrap()];
        let report = verify_partition(&m, &s, Some(&c), 2, &parts).unwrap();
        assert!(report.passed(), "{:?}", report);
        let p = Partition::certify(&m, parts.clone()).unwrap();
        assert!(p.certificate().check(&m, &parts).unwrap());
        assert_eq!(p.part_indices(), vec![vec![0], vec![2, 3]]);
    }

    #[test]
    fn shared_index_fails_disjointness() {
        let (m, s, c) = setup();
        let parts = vec![s.select([0]).unwrap(), s.select([0, 1]).unwrap()];
        let report = verify_partition(&m, &s, Some(&c), 2, &parts).unwrap();
        assert_eq!(report.failure, Some(VerificationFailure::Disjointness { index: 0 }));
    }

    #[test]
    fn empty_first_part_fails_strictness() {
        let (m, s, c) = setup();
        let parts = vec![s.empty_like(), s.select([0, 1]).unwrap()];
        let report = verify_partition(&m, &s, Some(&c), 2, &parts).unwrap();
        assert_eq!(report.failure, Some(VerificationFailure::Strictness));
    }

    #[test]
    fn other_failures() {
        let (m, s, c) = setup();
        let parts = vec![s.select([0, 2]).unwrap(), s.select([1, 3]).unwrap()];
        let report = verify_partition(&m, &s, Some(&c), 2, &parts).unwrap();
        assert_eq!(report.failure, Some(VerificationFailure::Rainbow { part: 0 }));
        // colorless: same parts are fine
        assert!(verify_partition(&m, &s, None, 2, &parts).unwrap().passed());

        let parts = vec![s.select([0, 1]).unwrap(), s.select([2]).unwrap()];
        let report = verify_partition(&m, &s, Some(&c), 2, &parts).unwrap();
        assert!(matches!(report.failure, Some(VerificationFailure::Chain { part: 0, .. })));

        let report = verify_partition(&m, &s, Some(&c), 3, &parts).unwrap();
        assert!(matches!(report.failure, Some(VerificationFailure::PartCount { .. })));

        let foreign = IndexedSequence::new([ElementId(0)]);
        let report = verify_partition(&m, &s, None, 1, &[foreign]).unwrap();
        assert_eq!(report.failure, Some(VerificationFailure::NotSubsequence { part: 0 }));
    }
}
