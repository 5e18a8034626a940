//! Constructive colorful matroidal Tverberg partitions.
//!
//! [`Solver::solve_special`] handles sequences colored by exactly as many
//! colors as the rank, the first color at least `r` times and every other at
//! least `r - 1` times. It repeatedly takes an inclusion-maximal rainbow
//! independent subsequence `RI`; when `RI` spans, it becomes the last part
//! and the rest is solved with `r - 1`. Otherwise a cycle of replacement
//! rules either enlarges `RI`, or finds a flat of smaller rank in which the
//! problem can be solved after merging two colors.
//!
//! [`Solver::solve_general`] reduces the "at most `r`, at most `r - 1`"
//! coloring to the special form by padding with coloops, and
//! [`Solver::solve_noncolor`] gives every entry its own color.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::matroid::{ElementId, MatroidError, Oracle};
use crate::partition::{verify_partition, Partition};
use crate::seq::{
    check_general_profile, is_rainbow, special_counts, ColorCountProfile, ColorId,
    ColorThresholds, Coloring, IndexedSequence, ProfileViolation, SeqError,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(ProfileViolation),
    #[error("entry {index} is a loop")]
    LoopInInput { index: usize },
    #[error("internal invariant broken: {0}")]
    InternalInvariantBroken(InvariantViolation),
    #[error("seed is not a rainbow independent subsequence of the sequence")]
    SeedInvalid,
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Sequence(#[from] SeqError),
}

/// A runtime check that failed. Seeing one means a bug in the solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantViolation {
    pub check: &'static str,
    pub depth: usize,
    pub step: usize,
}

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (depth {}, step {})", self.check, self.depth, self.step)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    /// Check the replacement-rule conditions after every cycle step, the
    /// case (b) postconditions and the final partition.
    pub check_invariants: bool,
    pub record_trace: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            check_invariants: cfg!(debug_assertions),
            record_trace: false,
        }
    }
}

/// Counters for one call of the special solver (one recursion level).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LevelStats {
    pub depth: usize,
    pub r: usize,
    pub m: usize,
    pub restarts: usize,
    pub max_cycle_iterations: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub oracle_calls: u64,
    pub cycle_iterations: usize,
    pub restarts: usize,
    pub recursion_depth: usize,
    pub invariant_checks: usize,
    pub levels: Vec<LevelStats>,
}

impl SolveStats {
    /// Every level ran each cycle in at most `m` steps and restarted at most
    /// `m` times.
    pub fn within_level_bounds(&self) -> bool {
        self.levels
            .iter()
            .all(|l| l.max_cycle_iterations <= l.m && l.restarts <= l.m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    Restricted { depth: usize, rank: usize, kept: usize },
    BaseCase { depth: usize, r: usize, m: usize },
    Peeled { depth: usize, r: usize, m: usize },
    /// Recursed into a flat of rank `sub_rank`.
    Lower { depth: usize, step: usize, sub_rank: usize },
    /// Enlarged the rainbow independent set to `len` entries.
    Grow { depth: usize, step: usize, len: usize },
    /// Advanced the replacement rules; `rank` is the new `rk I_k`.
    Advance { depth: usize, step: usize, rank: usize },
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub partition: Partition,
    pub stats: SolveStats,
    pub trace: Vec<TraceEvent>,
}

/// Runs the solvers against one oracle.
#[derive(Clone, Copy, Debug)]
pub struct Solver<'a> {
    oracle: &'a Oracle,
    options: SolverOptions,
}

impl<'a> Solver<'a> {
    pub fn new(oracle: &'a Oracle) -> Self {
        Self {
            oracle,
            options: SolverOptions::default(),
        }
    }

    pub fn with_options(oracle: &'a Oracle, options: SolverOptions) -> Self {
        Self { oracle, options }
    }

    /// Solves the special form. After restricting to `m' = rk S` and keeping
    /// the entries of the first `m'` colors (most frequent first), there must
    /// be exactly `m'` colors, the first at least `r` times and each other
    /// at least `r - 1` times.
    pub fn solve_special(
        &self,
        seq: &IndexedSequence,
        coloring: &Coloring,
        r: usize,
    ) -> Result<Solution, SolveError> {
        let calls = self.oracle.oracle_calls();
        validate(self.oracle, seq, Some(coloring))?;
        if r == 0 {
            return Err(SolveError::PreconditionViolated(ProfileViolation::ZeroParts));
        }
        require_nonempty(seq)?;

        let rank = self.oracle.rank(&seq.set_image())?;
        let profile = ColorCountProfile::new(seq, coloring);
        if profile.len() < rank {
            return Err(SolveError::PreconditionViolated(ProfileViolation::PaletteSize {
                found: profile.len(),
                expected: rank,
            }));
        }
        let kept: BTreeSet<ColorId> = profile.ordering()[..rank].iter().copied().collect();
        let kept_counts = kept.iter().map(|&c| (c, profile.count(c))).collect();
        special_counts(&ColorCountProfile::from_counts(kept_counts), r, rank)
            .map_err(SolveError::PreconditionViolated)?;

        let items: Vec<Item> = seq
            .entries()
            .iter()
            .filter_map(|e| {
                let color = coloring.color(e.index)?;
                kept.contains(&color).then_some(Item {
                    index: e.index,
                    element: e.element,
                    color: color.0 as u64,
                })
            })
            .collect();

        let mut run = Run::new(self.oracle, self.options);
        let parts = run.special(items, r, 0)?;
        self.finish(run, seq, Some(coloring), r, parts, calls)
    }

    /// Solves the general form: `|S| > m(r-1)`, the most frequent color at
    /// most `r` times and every other at most `r - 1` times.
    pub fn solve_general(
        &self,
        seq: &IndexedSequence,
        coloring: &Coloring,
        r: usize,
    ) -> Result<Solution, SolveError> {
        let calls = self.oracle.oracle_calls();
        validate(self.oracle, seq, Some(coloring))?;
        let m = self.oracle.rank_bound();
        check_general_profile(seq, coloring, r, m, ColorThresholds::PartCount)
            .map_err(SolveError::PreconditionViolated)?;
        let mut run = Run::new(self.oracle, self.options);
        if r == 1 {
            let first = seq.entries()[0];
            let parts = vec![vec![Item::new(first.index, first.element, 0)]];
            return self.finish(run, seq, Some(coloring), r, parts, calls);
        }

        // drop the highest indices beyond m(r-1)+1 entries
        let trimmed = &seq.entries()[..m * (r - 1) + 1];
        let mut counts: BTreeMap<ColorId, usize> = BTreeMap::new();
        for e in trimmed {
            *counts.entry(coloring.color(e.index).expect("validated")).or_default() += 1;
        }
        let profile = ColorCountProfile::from_counts(counts);
        let colors = profile.len();
        if colors < m {
            return Err(run.violation("fewer colors than rank after trimming", 0, 0));
        }

        let padded = self.oracle.add_coloops(colors - m);
        let base = self.oracle.ground_size();
        let first_padding_index = seq.entries().last().map_or(0, |e| e.index + 1);
        let mut items: Vec<Item> = trimmed
            .iter()
            .map(|e| Item::new(e.index, e.element, coloring.color(e.index).unwrap().0 as u64))
            .collect();

        let mut deficits = profile.ordering().iter().enumerate().flat_map(|(pos, &c)| {
            let target = if pos == 0 { r } else { r - 1 };
            core::iter::repeat_n(c, target - profile.count(c))
        });
        let mut next_index = first_padding_index;
        for coloop in 0..colors - m {
            for _ in 0..r - 1 {
                let Some(color) = deficits.next() else {
                    return Err(run.violation("padding colors exhausted", 0, 0));
                };
                items.push(Item::new(next_index, ElementId(base + coloop), color.0 as u64));
                next_index += 1;
            }
        }
        if deficits.next().is_some() {
            return Err(run.violation("padding colors left over", 0, 0));
        }

        run.oracle = &padded;
        let parts = run.special(items, r, 0)?;
        let parts = parts
            .into_iter()
            .map(|part| part.into_iter().filter(|it| it.index < first_padding_index).collect())
            .collect();
        run.oracle = self.oracle;
        self.finish(run, seq, Some(coloring), r, parts, calls)
    }

    /// Colorless form: `|S| > m(r-1)`.
    pub fn solve_noncolor(&self, seq: &IndexedSequence, r: usize) -> Result<Solution, SolveError> {
        let calls = self.oracle.oracle_calls();
        validate(self.oracle, seq, None)?;
        if r == 0 {
            return Err(SolveError::PreconditionViolated(ProfileViolation::ZeroParts));
        }
        let m = self.oracle.rank_bound();
        let required = m * (r - 1) + 1;
        if seq.len() < required {
            return Err(SolveError::PreconditionViolated(ProfileViolation::TooShort {
                len: seq.len(),
                required,
            }));
        }
        if r == 1 {
            let first = seq.entries()[0];
            let run = Run::new(self.oracle, self.options);
            let parts = vec![vec![Item::new(first.index, first.element, 0)]];
            return self.finish(run, seq, None, r, parts, calls);
        }
        let width = seq.entries().last().map_or(0, |e| e.index + 1);
        let coloring = Coloring::distinct(width);
        let mut solution = self.solve_general(seq, &coloring, r)?;
        solution.stats.oracle_calls = self.oracle.oracle_calls() - calls;
        Ok(solution)
    }

    fn finish(
        &self,
        run: Run<'_>,
        seq: &IndexedSequence,
        coloring: Option<&Coloring>,
        r: usize,
        parts: Vec<Vec<Item>>,
        calls_before: u64,
    ) -> Result<Solution, SolveError> {
        let parts = parts
            .into_iter()
            .map(|part| seq.select(part.into_iter().map(|it| it.index)))
            .collect::<Result<Vec<_>, _>>()?;
        let Run {
            mut stats, trace, ..
        } = run;
        if self.options.check_invariants {
            let report = verify_partition(self.oracle, seq, coloring, r, &parts)?;
            stats.invariant_checks += 1;
            if !report.passed() {
                return Err(SolveError::InternalInvariantBroken(InvariantViolation {
                    check: "output partition fails verification",
                    depth: 0,
                    step: 0,
                }));
            }
        }
        let partition = Partition::certify(self.oracle, parts)?;
        stats.oracle_calls = self.oracle.oracle_calls() - calls_before;
        Ok(Solution {
            partition,
            stats,
            trace,
        })
    }
}

/// Special form with default options.
pub fn solve_special(
    oracle: &Oracle,
    seq: &IndexedSequence,
    coloring: &Coloring,
    r: usize,
) -> Result<Partition, SolveError> {
    Ok(Solver::new(oracle).solve_special(seq, coloring, r)?.partition)
}

/// General form with default options.
pub fn solve_general(
    oracle: &Oracle,
    seq: &IndexedSequence,
    coloring: &Coloring,
    r: usize,
) -> Result<Partition, SolveError> {
    Ok(Solver::new(oracle).solve_general(seq, coloring, r)?.partition)
}

/// Colorless form with default options.
pub fn solve_noncolor(oracle: &Oracle, seq: &IndexedSequence, r: usize) -> Result<Partition, SolveError> {
    Ok(Solver::new(oracle).solve_noncolor(seq, r)?.partition)
}

/// Extends `seed` to an inclusion-maximal rainbow independent subsequence of
/// `seq`, scanning by ascending index.
pub fn max_rainbow_independent(
    oracle: &Oracle,
    seq: &IndexedSequence,
    coloring: &Coloring,
    seed: &IndexedSequence,
) -> Result<IndexedSequence, SolveError> {
    if !seed.is_subsequence_of(seq)
        || !coloring.covers(seq)
        || !is_rainbow(seed, coloring)
        || !oracle.is_independent(&seed.elements())?
    {
        return Err(SolveError::SeedInvalid);
    }
    let mut chosen: BTreeSet<usize> = seed.indices().collect();
    let mut used: BTreeSet<ColorId> = coloring.image(seed);
    let mut elems = seed.elements();
    for e in seq.entries() {
        if chosen.contains(&e.index) {
            continue;
        }
        let color = coloring.color(e.index).expect("covered");
        if used.contains(&color) || oracle.in_closure(e.element, &elems)? {
            continue;
        }
        chosen.insert(e.index);
        used.insert(color);
        elems.push(e.element);
    }
    Ok(seq.select(chosen)?)
}

fn validate(oracle: &Oracle, seq: &IndexedSequence, coloring: Option<&Coloring>) -> Result<(), SolveError> {
    for e in seq.entries() {
        oracle.check_element(e.element)?;
    }
    if let Some(coloring) = coloring {
        if let Some(index) = seq.indices().find(|&i| coloring.color(i).is_none()) {
            return Err(SolveError::PreconditionViolated(ProfileViolation::Uncolored { index }));
        }
    }
    for e in seq.entries() {
        if oracle.is_loop(e.element)? {
            return Err(SolveError::LoopInInput { index: e.index });
        }
    }
    Ok(())
}

fn require_nonempty(seq: &IndexedSequence) -> Result<(), SolveError> {
    if seq.is_empty() {
        Err(SolveError::PreconditionViolated(ProfileViolation::TooShort {
            len: 0,
            required: 1,
        }))
    } else {
        Ok(())
    }
}

/// Internal colors are `u64` so merged colors never collide with user ones.
type Color = u64;
const FIRST_FRESH_COLOR: Color = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Item {
    index: usize,
    element: ElementId,
    color: Color,
}

impl Item {
    fn new(index: usize, element: ElementId, color: Color) -> Self {
        Self {
            index,
            element,
            color,
        }
    }
}

// Item lists are kept sorted by index.

fn elements(items: &[Item]) -> Vec<ElementId> {
    items.iter().map(|it| it.element).collect()
}

fn colors_of(items: &[Item]) -> BTreeSet<Color> {
    items.iter().map(|it| it.color).collect()
}

fn minus(a: &[Item], b: &[Item]) -> Vec<Item> {
    a.iter()
        .copied()
        .filter(|x| !b.iter().any(|y| y.index == x.index))
        .collect()
}

fn merge(a: &[Item], b: &[Item]) -> Vec<Item> {
    let mut out: Vec<Item> = a.iter().chain(b).copied().collect();
    out.sort_by_key(|it| it.index);
    out.dedup_by_key(|it| it.index);
    out
}

fn same_indices(a: &[Item], b: &[Item]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.index == y.index)
}

fn with_color(items: &[Item], colors: &BTreeSet<Color>) -> Vec<Item> {
    items.iter().copied().filter(|it| colors.contains(&it.color)).collect()
}

/// Color counts ordered by count descending, then color ascending.
fn profile(items: &[Item]) -> Vec<(Color, usize)> {
    let mut counts: BTreeMap<Color, usize> = BTreeMap::new();
    for it in items {
        *counts.entry(it.color).or_default() += 1;
    }
    let mut ordered: Vec<(Color, usize)> = counts.into_iter().collect();
    ordered.sort_by_key(|&(c, n)| (core::cmp::Reverse(n), c));
    ordered
}

/// `I_k^p` together with its new color `c_k^p`.
#[derive(Clone, Debug)]
struct Rule {
    seq: Vec<Item>,
    color: Color,
}

enum CycleOutcome {
    Solved(Vec<Vec<Item>>),
    Grew(Vec<Item>),
}

struct Run<'o> {
    oracle: &'o Oracle,
    options: SolverOptions,
    stats: SolveStats,
    trace: Vec<TraceEvent>,
    next_color: Color,
}

impl<'o> Run<'o> {
    fn new(oracle: &'o Oracle, options: SolverOptions) -> Self {
        Self {
            oracle,
            options,
            stats: SolveStats::default(),
            trace: Vec::new(),
            next_color: FIRST_FRESH_COLOR,
        }
    }

    fn violation(&self, check: &'static str, depth: usize, step: usize) -> SolveError {
        SolveError::InternalInvariantBroken(InvariantViolation { check, depth, step })
    }

    fn record(&mut self, event: TraceEvent) {
        if self.options.record_trace {
            self.trace.push(event);
        }
    }

    fn in_closure(&self, x: ElementId, ys: &[ElementId]) -> Result<bool, SolveError> {
        Ok(self.oracle.in_closure(x, ys)?)
    }

    fn spans(&self, ys: &[Item], xs: &[Item]) -> Result<bool, SolveError> {
        Ok(self.oracle.spans(&elements(ys), &elements(xs))?)
    }

    fn special(&mut self, mut items: Vec<Item>, r: usize, depth: usize) -> Result<Vec<Vec<Item>>, SolveError> {
        self.stats.recursion_depth = self.stats.recursion_depth.max(depth);
        if items.is_empty() {
            return Err(self.violation("empty sequence in recursion", depth, 0));
        }
        if r == 1 {
            self.record(TraceEvent::BaseCase { depth, r, m: 0 });
            return Ok(vec![vec![items[0]]]);
        }

        // restrict to cl(S): keep the first rk S colors until the color count matches the rank
        let m = loop {
            let rank = self.oracle.rank(&elements(&items))?;
            let prof = profile(&items);
            if prof.len() < rank {
                return Err(self.violation("fewer colors than rank", depth, 0));
            }
            if prof.len() == rank {
                if self.options.check_invariants {
                    let ok = prof
                        .iter()
                        .enumerate()
                        .all(|(pos, &(_, n))| n >= if pos == 0 { r } else { r - 1 });
                    if !ok {
                        return Err(self.violation("color profile lost in recursion", depth, 0));
                    }
                }
                break rank;
            }
            let kept: BTreeSet<Color> = prof[..rank].iter().map(|&(c, _)| c).collect();
            items.retain(|it| kept.contains(&it.color));
            self.record(TraceEvent::Restricted {
                depth,
                rank,
                kept: items.len(),
            });
        };

        if m == 1 {
            if items.len() < r {
                return Err(self.violation("rank one with fewer than r entries", depth, 0));
            }
            self.record(TraceEvent::BaseCase { depth, r, m });
            return Ok(items[..r].iter().map(|&it| vec![it]).collect());
        }

        let level = self.stats.levels.len();
        self.stats.levels.push(LevelStats {
            depth,
            r,
            m,
            ..LevelStats::default()
        });
        let mut ri = self.extend_rainbow_independent(&items, Vec::new())?;
        loop {
            if ri.len() == m {
                self.record(TraceEvent::Peeled { depth, r, m });
                let rest = minus(&items, &ri);
                let mut parts = self.special(rest, r - 1, depth + 1)?;
                parts.push(ri);
                return Ok(parts);
            }
            match self.cycle(&items, &ri, r, m, depth, level)? {
                CycleOutcome::Solved(parts) => return Ok(parts),
                CycleOutcome::Grew(next) => {
                    self.stats.restarts += 1;
                    self.stats.levels[level].restarts += 1;
                    if self.stats.levels[level].restarts > m {
                        return Err(self.violation("more than m restarts", depth, 0));
                    }
                    ri = next;
                }
            }
        }
    }

    fn extend_rainbow_independent(&self, items: &[Item], seed: Vec<Item>) -> Result<Vec<Item>, SolveError> {
        let mut chosen = seed;
        let mut used = colors_of(&chosen);
        let mut elems = elements(&chosen);
        for it in items {
            if used.contains(&it.color) || chosen.iter().any(|c| c.index == it.index) {
                continue;
            }
            if !self.in_closure(it.element, &elems)? {
                used.insert(it.color);
                elems.push(it.element);
                chosen.push(*it);
            }
        }
        chosen.sort_by_key(|it| it.index);
        Ok(chosen)
    }

    /// One run of the replacement-rule cycle, starting from `I_0 = ∅`.
    fn cycle(
        &mut self,
        items: &[Item],
        ri: &[Item],
        r: usize,
        m: usize,
        depth: usize,
        level: usize,
    ) -> Result<CycleOutcome, SolveError> {
        let ri_colors = colors_of(ri);
        let ri_elems = elements(ri);
        let mut allowed: BTreeSet<Color> = colors_of(items).difference(&ri_colors).copied().collect();
        let mut current: Vec<Item> = Vec::new();
        let mut rules: BTreeMap<usize, Rule> = with_color(items, &allowed)
            .into_iter()
            .map(|p| {
                (
                    p.index,
                    Rule {
                        seq: vec![p],
                        color: p.color,
                    },
                )
            })
            .collect();
        if self.options.check_invariants {
            self.check_rules(items, ri, &allowed, &current, &rules, depth, 0)?;
        }

        let mut step = 0;
        loop {
            step += 1;
            self.stats.cycle_iterations += 1;
            let lvl = &mut self.stats.levels[level];
            lvl.max_cycle_iterations = lvl.max_cycle_iterations.max(step);
            if step > m {
                return Err(self.violation("cycle ran more than m steps", depth, step));
            }

            let candidates = with_color(items, &allowed);

            // (a) everything usable lies in cl(I_k): solve inside that flat
            if self.spans(&current, &candidates)? {
                let parts = self.lower(items, &candidates, &current, r, depth, step)?;
                return Ok(CycleOutcome::Solved(parts));
            }

            // (b) some usable point escapes cl(RI): swap I_k for I_k^p
            let mut escaping = None;
            for p in &candidates {
                if !self.in_closure(p.element, &ri_elems)? {
                    escaping = Some(*p);
                    break;
                }
            }
            if let Some(p) = escaping {
                let Some(rule) = rules.get(&p.index) else {
                    return Err(self.violation("no replacement rule for escaping point", depth, step));
                };
                let grown = merge(&minus(ri, &current), &rule.seq);
                if self.options.check_invariants {
                    self.check_growth(ri, &grown, p, depth, step)?;
                }
                self.record(TraceEvent::Grow {
                    depth,
                    step,
                    len: grown.len(),
                });
                return Ok(CycleOutcome::Grew(self.extend_rainbow_independent(items, grown)?));
            }

            // (c) advance the rules
            let next = self.minimal_spanning(ri, &candidates)?;
            if self.options.check_invariants {
                self.stats.invariant_checks += 1;
                let nested = current.iter().all(|c| next.iter().any(|n| n.index == c.index));
                if !nested || next.len() <= current.len() {
                    return Err(self.violation("I_k does not grow strictly", depth, step));
                }
            }
            let mut next_allowed = allowed.clone();
            next_allowed.extend(colors_of(&next));
            let next_elems = elements(&next);
            let mut next_rules = BTreeMap::new();
            for p in with_color(items, &next_allowed) {
                if self.in_closure(p.element, &next_elems)? {
                    continue;
                }
                let Some(&pivot) = next.iter().find(|it| it.color == p.color) else {
                    return Err(self.violation("no element of I_k+1 shares the point's color", depth, step));
                };
                let without_pivot = elements(&minus(&next, &[pivot]));
                let mut partner = None;
                for q in &candidates {
                    if !self.in_closure(q.element, &without_pivot)? {
                        partner = Some(*q);
                        break;
                    }
                }
                let Some(q) = partner else {
                    return Err(self.violation("no exchange partner q", depth, step));
                };
                let Some(q_rule) = rules.get(&q.index) else {
                    return Err(self.violation("no replacement rule for q", depth, step));
                };
                let mut removed = current.clone();
                removed.push(pivot);
                let seq = merge(&merge(&minus(&next, &removed), &q_rule.seq), &[p]);
                next_rules.insert(
                    p.index,
                    Rule {
                        seq,
                        color: q_rule.color,
                    },
                );
            }
            current = next;
            allowed = next_allowed;
            rules = next_rules;
            self.record(TraceEvent::Advance {
                depth,
                step,
                rank: current.len(),
            });
            if self.options.check_invariants {
                self.check_rules(items, ri, &allowed, &current, &rules, depth, step)?;
            }
        }
    }

    /// Case (a): merge the point's color with the most frequent color of
    /// `c(I_k)` and recurse on `C_{c(I_k)} ∪ {p}` inside `cl(I_k)`.
    fn lower(
        &mut self,
        items: &[Item],
        candidates: &[Item],
        current: &[Item],
        r: usize,
        depth: usize,
        step: usize,
    ) -> Result<Vec<Vec<Item>>, SolveError> {
        let flat_colors = colors_of(current);
        let Some(&p) = candidates.iter().find(|it| !flat_colors.contains(&it.color)) else {
            return Err(self.violation("no point outside C_c(I_k)", depth, step));
        };
        let inside = with_color(items, &flat_colors);
        let merged_color = profile(&inside)[0].0;
        let fresh = self.next_color;
        self.next_color += 1;
        let mut sub = merge(&inside, &[p]);
        for it in sub.iter_mut() {
            if it.index == p.index || it.color == merged_color {
                it.color = fresh;
            }
        }
        self.record(TraceEvent::Lower {
            depth,
            step,
            sub_rank: current.len(),
        });
        self.special(sub, r, depth + 1)
    }

    /// The inclusion-minimal subsequence of the independent `ri` whose
    /// closure contains `targets`; one deletion pass in index order.
    fn minimal_spanning(&self, ri: &[Item], targets: &[Item]) -> Result<Vec<Item>, SolveError> {
        let mut kept = ri.to_vec();
        for it in ri {
            let without: Vec<Item> = kept.iter().copied().filter(|k| k.index != it.index).collect();
            if self.spans(&without, targets)? {
                kept = without;
            }
        }
        Ok(kept)
    }

    fn check_growth(&mut self, ri: &[Item], grown: &[Item], p: Item, depth: usize, step: usize) -> Result<(), SolveError> {
        self.stats.invariant_checks += 1;
        if grown.len() != ri.len() + 1 {
            return Err(self.violation("grown set has wrong size", depth, step));
        }
        if colors_of(grown).len() != grown.len() {
            return Err(self.violation("grown set is not rainbow", depth, step));
        }
        if !self.oracle.is_independent(&elements(grown))? {
            return Err(self.violation("grown set is dependent", depth, step));
        }
        let target = merge(ri, &[p]);
        if !self.oracle.same_closure(&elements(grown), &elements(&target))? {
            return Err(self.violation("cl(RI') differs from cl(RI ∪ {p})", depth, step));
        }
        Ok(())
    }

    /// Conditions (i)-(v) on the replacement rules.
    #[allow(clippy::too_many_arguments)]
    fn check_rules(
        &mut self,
        items: &[Item],
        ri: &[Item],
        allowed: &BTreeSet<Color>,
        current: &[Item],
        rules: &BTreeMap<usize, Rule>,
        depth: usize,
        step: usize,
    ) -> Result<(), SolveError> {
        self.stats.invariant_checks += 1;
        let current_colors = colors_of(current);
        let ri_colors = colors_of(ri);

        // (i)
        if !current_colors.is_subset(allowed) || current_colors.len() == allowed.len() {
            return Err(self.violation("(i) c(I_k) is not a proper subset of K_k", depth, step));
        }
        // (v)
        if !same_indices(&with_color(ri, allowed), current) || allowed.is_subset(&ri_colors) {
            return Err(self.violation("(v) RI ∩ C_K differs from I_k or K_k ⊆ c(RI)", depth, step));
        }

        let current_elems = elements(current);
        for p in with_color(items, allowed) {
            let eligible = !self.in_closure(p.element, &current_elems)?;
            if eligible != rules.contains_key(&p.index) {
                return Err(self.violation("replacement rules do not match eligible points", depth, step));
            }
        }
        for (&index, rule) in rules {
            // (ii)
            let mut expected = current_colors.clone();
            expected.insert(rule.color);
            if colors_of(&rule.seq) != expected
                || !allowed.contains(&rule.color)
                || ri_colors.contains(&rule.color)
            {
                return Err(self.violation("(ii) c(I_k^p) is not c(I_k) ∪ {c^p}", depth, step));
            }
            // (iii)
            if rule.seq.len() != current.len() + 1 {
                return Err(self.violation("(iii) |I_k^p| is not |I_k| + 1", depth, step));
            }
            // (iv)
            let Some(p) = rule.seq.iter().find(|it| it.index == index) else {
                return Err(self.violation("(iv) p is not in I_k^p", depth, step));
            };
            let rest = minus(&rule.seq, &[*p]);
            if !self.oracle.same_closure(&elements(&rest), &current_elems)? {
                return Err(self.violation("(iv) cl(I_k^p ∖ p) differs from cl(I_k)", depth, step));
            }
        }
        Ok(())
    }
}
