//! Sequences of ground elements as sets of `(index, element)` pairs, and
//! total colorings of them.
//!
//! A root sequence is created with [`IndexedSequence::new`] and numbers its
//! entries `0..len`. Every subsequence keeps the root's indices and remembers
//! which root it came from, so set operations between unrelated sequences
//! are refused instead of silently mixing indices.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::matroid::ElementId;

static NEXT_ORIGIN: AtomicU64 = AtomicU64::new(0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColorId(pub u32);

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Entry {
    pub index: usize,
    pub element: ElementId,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeqError {
    #[error("sequences come from different parents")]
    MixedParents,
    #[error("color {0} is not in the palette")]
    UnknownColor(ColorId),
    #[error("index {0} is not in the sequence")]
    UnknownIndex(usize),
}

/// Entries sorted by strictly increasing index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedSequence {
    origin: u64,
    entries: Vec<Entry>,
}

impl IndexedSequence {
    /// A fresh root sequence with indices `0..n`.
    pub fn new(elements: impl IntoIterator<Item = ElementId>) -> Self {
        let entries = elements
            .into_iter()
            .enumerate()
            .map(|(index, element)| Entry { index, element })
            .collect();
        Self {
            origin: NEXT_ORIGIN.fetch_add(1, Ordering::Relaxed),
            entries,
        }
    }

    fn derived(&self, entries: Vec<Entry>) -> Self {
        Self {
            origin: self.origin,
            entries,
        }
    }

    /// The empty subsequence of the same parent.
    pub fn empty_like(&self) -> Self {
        self.derived(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.index)
    }

    /// Elements in sequence order, repeats kept.
    pub fn elements(&self) -> Vec<ElementId> {
        self.entries.iter().map(|e| e.element).collect()
    }

    /// `S^set`: the distinct elements, sorted.
    pub fn set_image(&self) -> Vec<ElementId> {
        let set: BTreeSet<ElementId> = self.entries.iter().map(|e| e.element).collect();
        set.into_iter().collect()
    }

    pub fn get(&self, index: usize) -> Option<ElementId> {
        self.entries
            .binary_search_by_key(&index, |e| e.index)
            .ok()
            .map(|pos| self.entries[pos].element)
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.get(index).is_some()
    }

    pub fn same_parent(&self, other: &Self) -> bool {
        self.origin == other.origin
    }

    /// The subsequence with the given indices (any order, repeats ignored).
    pub fn select(&self, indices: impl IntoIterator<Item = usize>) -> Result<Self, SeqError> {
        let wanted: BTreeSet<usize> = indices.into_iter().collect();
        let mut entries = Vec::with_capacity(wanted.len());
        for index in wanted {
            let element = self.get(index).ok_or(SeqError::UnknownIndex(index))?;
            entries.push(Entry { index, element });
        }
        Ok(self.derived(entries))
    }

    pub fn filter(&self, mut keep: impl FnMut(&Entry) -> bool) -> Self {
        self.derived(self.entries.iter().copied().filter(|e| keep(e)).collect())
    }

    pub fn is_subsequence_of(&self, other: &Self) -> bool {
        self.same_parent(other) && self.entries.iter().all(|e| other.get(e.index) == Some(e.element))
    }

    fn check_parent(&self, other: &Self) -> Result<(), SeqError> {
        if self.same_parent(other) {
            Ok(())
        } else {
            Err(SeqError::MixedParents)
        }
    }

    pub fn difference(&self, other: &Self) -> Result<Self, SeqError> {
        self.check_parent(other)?;
        Ok(self.filter(|e| !other.contains_index(e.index)))
    }

    pub fn intersection(&self, other: &Self) -> Result<Self, SeqError> {
        self.check_parent(other)?;
        Ok(self.filter(|e| other.contains_index(e.index)))
    }

    pub fn union(&self, other: &Self) -> Result<Self, SeqError> {
        self.check_parent(other)?;
        let merged: BTreeMap<usize, ElementId> = self
            .entries
            .iter()
            .chain(&other.entries)
            .map(|e| (e.index, e.element))
            .collect();
        Ok(self.derived(
            merged
                .into_iter()
                .map(|(index, element)| Entry { index, element })
                .collect(),
        ))
    }
}

/// A total map from root indices to colors, plus the palette in use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<ColorId>,
    palette: BTreeSet<ColorId>,
}

impl Coloring {
    /// `colors[i]` is the color of root index `i`; the palette is the image.
    pub fn new(colors: Vec<ColorId>) -> Self {
        let palette = colors.iter().copied().collect();
        Self { colors, palette }
    }

    /// Like [`Coloring::new`] but also declares colors with no entries.
    pub fn with_palette(colors: Vec<ColorId>, extra: impl IntoIterator<Item = ColorId>) -> Self {
        let mut coloring = Self::new(colors);
        coloring.palette.extend(extra);
        coloring
    }

    /// Every index gets its own color.
    pub fn distinct(len: usize) -> Self {
        Self::new((0..len as u32).map(ColorId).collect())
    }

    pub fn color(&self, index: usize) -> Option<ColorId> {
        self.colors.get(index).copied()
    }

    pub fn colors(&self) -> &[ColorId] {
        &self.colors
    }

    pub fn palette(&self) -> &BTreeSet<ColorId> {
        &self.palette
    }

    pub fn covers(&self, seq: &IndexedSequence) -> bool {
        seq.indices().all(|i| i < self.colors.len())
    }

    /// `c(T)`.
    pub fn image(&self, seq: &IndexedSequence) -> BTreeSet<ColorId> {
        seq.indices().filter_map(|i| self.color(i)).collect()
    }
}

/// No two entries share a color. Uncolored entries make a sequence non-rainbow.
pub fn is_rainbow(seq: &IndexedSequence, coloring: &Coloring) -> bool {
    let mut seen = BTreeSet::new();
    seq.indices()
        .all(|i| coloring.color(i).is_some_and(|c| seen.insert(c)))
}

/// `C_U`: the entries of `seq` whose color lies in `colors`.
pub fn color_class(
    seq: &IndexedSequence,
    coloring: &Coloring,
    colors: &BTreeSet<ColorId>,
) -> Result<IndexedSequence, SeqError> {
    if let Some(&unknown) = colors.iter().find(|c| !coloring.palette.contains(c)) {
        return Err(SeqError::UnknownColor(unknown));
    }
    Ok(seq.filter(|e| coloring.color(e.index).is_some_and(|c| colors.contains(&c))))
}

/// Per-color entry counts, ordered by count descending then color ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorCountProfile {
    counts: BTreeMap<ColorId, usize>,
    ordering: Vec<ColorId>,
}

impl ColorCountProfile {
    /// Counts every palette color, including ones absent from `seq`.
    pub fn new(seq: &IndexedSequence, coloring: &Coloring) -> Self {
        let mut counts: BTreeMap<ColorId, usize> =
            coloring.palette.iter().map(|&c| (c, 0)).collect();
        for i in seq.indices() {
            if let Some(c) = coloring.color(i) {
                *counts.entry(c).or_default() += 1;
            }
        }
        Self::from_counts(counts)
    }

    pub fn from_counts(counts: BTreeMap<ColorId, usize>) -> Self {
        let mut ordering: Vec<ColorId> = counts.keys().copied().collect();
        ordering.sort_by_key(|c| (core::cmp::Reverse(counts[c]), *c));
        Self { counts, ordering }
    }

    pub fn count(&self, color: ColorId) -> usize {
        self.counts.get(&color).copied().unwrap_or(0)
    }

    pub fn ordering(&self) -> &[ColorId] {
        &self.ordering
    }

    pub fn first(&self) -> Option<ColorId> {
        self.ordering.first().copied()
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Which color-count limits the general profile enforces.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ColorThresholds {
    /// First color at most `r` times, every other at most `r - 1` times.
    #[default]
    PartCount,
    /// First color at most `m` times, every other at most `m - 1` times.
    Rank,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProfileViolation {
    #[error("r must be at least 1")]
    ZeroParts,
    #[error("entry {index} has no color")]
    Uncolored { index: usize },
    #[error("sequence has {len} entries, needs at least {required}")]
    TooShort { len: usize, required: usize },
    #[error("first color {color} appears {count} times, limit {limit}")]
    FirstColorTooFrequent { color: ColorId, count: usize, limit: usize },
    #[error("color {color} appears {count} times, limit {limit}")]
    ColorTooFrequent { color: ColorId, count: usize, limit: usize },
    #[error("palette has {found} colors, expected {expected}")]
    PaletteSize { found: usize, expected: usize },
    #[error("first color {color} appears {count} times, needs {needed}")]
    FirstColorTooRare { color: ColorId, count: usize, needed: usize },
    #[error("color {color} appears {count} times, needs {needed}")]
    ColorTooRare { color: ColorId, count: usize, needed: usize },
}

fn check_colored(seq: &IndexedSequence, coloring: &Coloring) -> Result<(), ProfileViolation> {
    match seq.indices().find(|&i| coloring.color(i).is_none()) {
        Some(index) => Err(ProfileViolation::Uncolored { index }),
        None => Ok(()),
    }
}

/// `|S| > m(r-1)` plus the color-count limits selected by `thresholds`.
pub fn check_general_profile(
    seq: &IndexedSequence,
    coloring: &Coloring,
    r: usize,
    m: usize,
    thresholds: ColorThresholds,
) -> Result<(), ProfileViolation> {
    if r == 0 {
        return Err(ProfileViolation::ZeroParts);
    }
    check_colored(seq, coloring)?;
    let required = m * (r - 1) + 1;
    if seq.len() < required {
        return Err(ProfileViolation::TooShort {
            len: seq.len(),
            required,
        });
    }
    let (first_limit, other_limit) = match thresholds {
        ColorThresholds::PartCount => (r, r - 1),
        ColorThresholds::Rank => (m, m.saturating_sub(1)),
    };
    let profile = ColorCountProfile::new(seq, coloring);
    for (pos, &color) in profile.ordering().iter().enumerate() {
        let count = profile.count(color);
        if pos == 0 && count > first_limit {
            return Err(ProfileViolation::FirstColorTooFrequent {
                color,
                count,
                limit: first_limit,
            });
        }
        if pos > 0 && count > other_limit {
            return Err(ProfileViolation::ColorTooFrequent {
                color,
                count,
                limit: other_limit,
            });
        }
    }
    Ok(())
}

/// Exactly `m` palette colors, the first at least `r` times and each other
/// at least `r - 1` times.
pub fn check_special_profile(
    seq: &IndexedSequence,
    coloring: &Coloring,
    r: usize,
    m: usize,
) -> Result<(), ProfileViolation> {
    if r == 0 {
        return Err(ProfileViolation::ZeroParts);
    }
    check_colored(seq, coloring)?;
    let profile = ColorCountProfile::new(seq, coloring);
    special_counts(&profile, r, m)
}

pub(crate) fn special_counts(
    profile: &ColorCountProfile,
    r: usize,
    m: usize,
) -> Result<(), ProfileViolation> {
    if profile.len() != m {
        return Err(ProfileViolation::PaletteSize {
            found: profile.len(),
            expected: m,
        });
    }
    for (pos, &color) in profile.ordering().iter().enumerate() {
        let count = profile.count(color);
        let needed = if pos == 0 { r } else { r - 1 };
        if count < needed {
            return Err(if pos == 0 {
                ProfileViolation::FirstColorTooRare {
                    color,
                    count,
                    needed,
                }
            } else {
                ProfileViolation::ColorTooRare {
                    color,
                    count,
                    needed,
                }
            });
        }
    }
    Ok(())
}
