//! Seeded instance generators.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tverberg_core::{ColorId, Coordinates, ElementId, MatroidSpec};

use crate::format::{InstanceFile, Mode};

/// Largest sequence the generators will produce.
pub const MAX_LENGTH: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Family {
    Gf2,
    Gf3,
    Rational,
    Affine,
    Uniform,
    Graphic,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Gf2,
        Family::Gf3,
        Family::Rational,
        Family::Affine,
        Family::Uniform,
        Family::Graphic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Gf2 => "gf2",
            Family::Gf3 => "gf3",
            Family::Rational => "rational",
            Family::Affine => "affine",
            Family::Uniform => "uniform",
            Family::Graphic => "graphic",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Profile {
    General,
    Special,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenerateError {
    #[error("infeasible request: {0}")]
    InfeasibleRequest(String),
}

fn infeasible<T>(msg: impl Into<String>) -> Result<T, GenerateError> {
    Err(GenerateError::InfeasibleRequest(msg.into()))
}

fn unit(dim: usize, i: usize) -> Vec<u64> {
    (0..dim).map(|j| u64::from(i == j)).collect()
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn rational_rows(rows: Vec<Vec<u64>>) -> Vec<Vec<BigRational>> {
    rows.into_iter()
        .map(|row| row.into_iter().map(|v| int(v as i64)).collect())
        .collect()
}

/// A rank-`m` matroid of `family` whose first `m` ground elements form a
/// basis, followed by `extra` further non-loops (random when `rng` is given,
/// a fixed spanning circuit element otherwise).
fn matroid(family: Family, m: usize, extra: usize, mut rng: Option<&mut ChaCha8Rng>) -> MatroidSpec {
    match family {
        Family::Gf2 | Family::Gf3 => {
            let p = if family == Family::Gf2 { 2 } else { 3 };
            let mut rows: Vec<Vec<u64>> = (0..m).map(|i| unit(m, i)).collect();
            for _ in 0..extra {
                let row = match rng.as_deref_mut() {
                    Some(rng) => loop {
                        let row: Vec<u64> = (0..m).map(|_| rng.random_range(0..p)).collect();
                        if row.iter().any(|&v| v != 0) {
                            break row;
                        }
                    },
                    None => vec![1; m],
                };
                rows.push(row);
            }
            MatroidSpec::Vector {
                dim: m,
                coords: Coordinates::Prime { p, rows },
            }
        }
        Family::Rational => {
            let mut rows = rational_rows((0..m).map(|i| unit(m, i)).collect());
            for _ in 0..extra {
                let row = match rng.as_deref_mut() {
                    Some(rng) => loop {
                        let row: Vec<BigRational> = (0..m)
                            .map(|_| {
                                BigRational::new(
                                    BigInt::from(rng.random_range(-2i64..=2)),
                                    BigInt::from(rng.random_range(1i64..=3)),
                                )
                            })
                            .collect();
                        if row.iter().any(|v| *v != int(0)) {
                            break row;
                        }
                    },
                    None => vec![int(1); m],
                };
                rows.push(row);
            }
            MatroidSpec::Vector {
                dim: m,
                coords: Coordinates::Rational(rows),
            }
        }
        Family::Affine => {
            // origin, then the unit points: m affinely independent points
            let dim = m - 1;
            let mut rows = vec![vec![0; dim]];
            rows.extend((0..dim).map(|i| unit(dim, i)));
            let mut rows = rational_rows(rows);
            for _ in 0..extra {
                let row = match rng.as_deref_mut() {
                    Some(rng) => (0..dim)
                        .map(|_| {
                            BigRational::new(
                                BigInt::from(rng.random_range(-3i64..=3)),
                                BigInt::from(rng.random_range(1i64..=2)),
                            )
                        })
                        .collect(),
                    None => vec![int(1); dim],
                };
                rows.push(row);
            }
            MatroidSpec::Affine {
                dim,
                coords: Coordinates::Rational(rows),
            }
        }
        Family::Uniform => MatroidSpec::Uniform {
            rank: m,
            size: m + extra,
        },
        Family::Graphic => {
            // spanning path on m + 1 vertices
            let mut edges: Vec<(usize, usize)> = (0..m).map(|i| (i, i + 1)).collect();
            for _ in 0..extra {
                let edge = match rng.as_deref_mut() {
                    Some(rng) => {
                        let u = rng.random_range(0..=m);
                        let v = (u + rng.random_range(1..=m)) % (m + 1);
                        (u.min(v), u.max(v))
                    }
                    None => (0, m),
                };
                edges.push(edge);
            }
            MatroidSpec::Graphic { vertices: m + 1, edges }
        }
    }
}

/// The matroid used by [`gen_tight`]: ground elements `0..m` are a basis.
pub fn canonical_matroid(family: Family, m: usize) -> MatroidSpec {
    matroid(family, m, 1, None)
}

/// A random instance of rank `m` meeting the preconditions of `profile`.
///
/// The general profile gets `max(target_length, m(r-1)+1)` entries (exactly
/// one when `r = 1`), the first color at most `r` times and the others at
/// most `r - 1` times. The special profile gets exactly `m` colors, the first
/// at least `r` times and the others at least `r - 1` times (and at least
/// once), padded to `target_length` when that is longer. Same arguments,
/// same instance.
pub fn gen_random_instance(
    family: Family,
    m: usize,
    r: usize,
    target_length: usize,
    seed: u64,
    profile: Profile,
) -> Result<InstanceFile, GenerateError> {
    if m == 0 {
        return infeasible("rank must be at least 1");
    }
    if r == 0 {
        return infeasible("r must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts = match profile {
        Profile::General => {
            let len = if r == 1 { 1 } else { target_length.max(m * (r - 1) + 1) };
            if len > MAX_LENGTH {
                return infeasible(format!("length {len} exceeds {MAX_LENGTH}"));
            }
            general_counts(&mut rng, len, r)
        }
        Profile::Special => {
            let minimum = (r + (m - 1) * (r - 1)).max(m);
            let len = target_length.max(minimum);
            if len > MAX_LENGTH {
                return infeasible(format!("length {len} exceeds {MAX_LENGTH}"));
            }
            let mut counts: Vec<usize> = (0..m).map(|i| if i == 0 { r } else { (r - 1).max(1) }).collect();
            for _ in minimum..len {
                let i = rng.random_range(0..m);
                counts[i] += 1;
            }
            counts
        }
    };

    let len: usize = counts.iter().sum();
    let spec = matroid(family, m, m + 2, Some(&mut rng));
    let ground = spec.ground_size();

    let mut ids: Vec<u32> = (0..counts.len() as u32).collect();
    ids.shuffle(&mut rng);
    let mut colors: Vec<ColorId> = counts
        .iter()
        .zip(&ids)
        .flat_map(|(&n, &id)| std::iter::repeat_n(ColorId(id), n))
        .collect();
    colors.shuffle(&mut rng);
    let sequence = (0..len).map(|_| ElementId(rng.random_range(0..ground))).collect();

    Ok(InstanceFile {
        matroid: spec,
        sequence,
        colors: Some(colors),
        r,
        mode: match profile {
            Profile::General => Mode::General,
            Profile::Special => Mode::Special,
        },
    })
}

/// Color counts for `len` entries: the first color at most `r`, the others
/// at most `r - 1`, using between the fewest possible and two more colors.
fn general_counts(rng: &mut ChaCha8Rng, len: usize, r: usize) -> Vec<usize> {
    if r == 1 {
        return vec![len];
    }
    let fewest = 1 + (len.saturating_sub(r)).div_ceil(r - 1);
    let colors = fewest + rng.random_range(0..=2);
    let caps: Vec<usize> = (0..colors).map(|i| if i == 0 { r } else { r - 1 }).collect();
    let mut counts = vec![0; colors];
    for _ in 0..len {
        let open: Vec<usize> = (0..colors).filter(|&i| counts[i] < caps[i]).collect();
        counts[open[rng.random_range(0..open.len())]] += 1;
    }
    counts.retain(|&n| n > 0);
    counts
}

/// `r - 1` copies of each element of the canonical basis, mode `noncolor`.
/// Exactly one entry short of the length that guarantees a partition.
pub fn gen_tight(family: Family, m: usize, r: usize) -> Result<InstanceFile, GenerateError> {
    if m == 0 {
        return infeasible("rank must be at least 1");
    }
    if r == 0 {
        return infeasible("r must be at least 1");
    }
    if m * (r - 1) > MAX_LENGTH {
        return infeasible(format!("length exceeds {MAX_LENGTH}"));
    }
    Ok(InstanceFile {
        matroid: canonical_matroid(family, m),
        sequence: (0..m).flat_map(|e| std::iter::repeat_n(ElementId(e), r - 1)).collect(),
        colors: None,
        r,
        mode: Mode::Noncolor,
    })
}

/// `U_m^{m+1}` with `r - 1` copies of each of `0..m` followed by `m`, and
/// colors assigned round robin over `m + 1` colors by position. Meets the
/// general profile at the minimum length `m(r-1)+1`, with no randomness.
pub fn gen_round_robin(m: usize, r: usize) -> Result<InstanceFile, GenerateError> {
    if m == 0 || r < 2 {
        return infeasible("needs rank at least 1 and r at least 2");
    }
    let len = m * (r - 1) + 1;
    if len > MAX_LENGTH {
        return infeasible(format!("length {len} exceeds {MAX_LENGTH}"));
    }
    let sequence = (0..m)
        .flat_map(|e| std::iter::repeat_n(ElementId(e), r - 1))
        .chain([ElementId(m)])
        .collect();
    Ok(InstanceFile {
        matroid: MatroidSpec::Uniform { rank: m, size: m + 1 },
        sequence,
        colors: Some((0..len).map(|i| ColorId((i % (m + 1)) as u32)).collect()),
        r,
        mode: Mode::General,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use tverberg_core::{check_general_profile, check_special_profile, ColorThresholds, Coloring, IndexedSequence};

    fn parts(inst: &InstanceFile) -> (tverberg_core::Oracle, IndexedSequence, Coloring) {
        let oracle = inst.matroid.build().unwrap();
        let seq = IndexedSequence::new(inst.sequence.iter().copied());
        (oracle, seq, Coloring::new(inst.colors.clone().unwrap()))
    }

    #[test]
    fn deterministic() {
        for family in Family::ALL {
            let a = gen_random_instance(family, 3, 3, 8, 42, Profile::General).unwrap();
            let b = gen_random_instance(family, 3, 3, 8, 42, Profile::General).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn profiles_hold_by_construction() {
        for family in Family::ALL {
            for m in 1..=4 {
                for r in 1..=4 {
                    for seed in 0..5 {
                        let inst = gen_random_instance(family, m, r, 12, seed, Profile::General).unwrap();
                        let (oracle, seq, c) = parts(&inst);
                        assert_eq!(oracle.rank_bound(), m, "{family}");
                        assert!(seq.elements().iter().all(|&e| !oracle.is_loop(e).unwrap()));
                        check_general_profile(&seq, &c, r, m, ColorThresholds::PartCount).unwrap();

                        let inst = gen_random_instance(family, m, r, 0, seed, Profile::Special).unwrap();
                        let (_, seq, c) = parts(&inst);
                        check_special_profile(&seq, &c, r, m).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn round_robin_meets_general_profile() {
        for m in 1..=6 {
            for r in 2..=20 {
                let inst = gen_round_robin(m, r).unwrap();
                let (_, seq, c) = parts(&inst);
                assert_eq!(seq.len(), m * (r - 1) + 1);
                check_general_profile(&seq, &c, r, m, ColorThresholds::PartCount).unwrap();
            }
        }
        assert!(gen_round_robin(3, 1).is_err());
    }

    #[test]
    fn infeasible_requests() {
        assert!(gen_random_instance(Family::Gf2, 0, 2, 3, 0, Profile::Special).is_err());
        assert!(gen_random_instance(Family::Gf2, 2, 0, 3, 0, Profile::General).is_err());
        assert!(gen_random_instance(Family::Gf2, 2, 2, MAX_LENGTH + 1, 0, Profile::General).is_err());
        assert!(gen_tight(Family::Uniform, 0, 2).is_err());
    }

    #[test]
    fn tight_basis_is_first() {
        for family in Family::ALL {
            for m in 1..=4 {
                let oracle = canonical_matroid(family, m).build().unwrap();
                let basis: Vec<ElementId> = (0..m).map(ElementId).collect();
                assert!(oracle.is_basis(&basis).unwrap(), "{family} {m}");
                assert_eq!(gen_tight(family, m, 3).unwrap().sequence.len(), 2 * m);
            }
        }
    }
}
