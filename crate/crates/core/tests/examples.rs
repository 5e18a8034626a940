use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use tverberg_core::verify::BruteForceOutcome;
use tverberg_core::*;

fn e(i: usize) -> ElementId {
    ElementId(i)
}

fn gf(p: u64, dim: usize, rows: &[&[u64]]) -> Oracle {
    MatroidSpec::Vector {
        dim,
        coords: Coordinates::Prime {
            p,
            rows: rows.iter().map(|r| r.to_vec()).collect(),
        },
    }
    .build()
    .unwrap()
}

fn uniform(rank: usize, size: usize) -> Oracle {
    MatroidSpec::Uniform { rank, size }.build().unwrap()
}

fn colors(ids: &[u32]) -> Coloring {
    Coloring::new(ids.iter().map(|&c| ColorId(c)).collect())
}

fn seq(ids: &[usize]) -> IndexedSequence {
    IndexedSequence::new(ids.iter().map(|&i| ElementId(i)))
}

fn line_points(n: i64) -> Oracle {
    MatroidSpec::Affine {
        dim: 1,
        coords: Coordinates::Rational((1..=n).map(|x| vec![BigRational::from_integer(BigInt::from(x))]).collect()),
    }
    .build()
    .unwrap()
}

#[test]
fn closure_membership() {
    let m = gf(2, 2, &[&[1, 0], &[0, 1], &[1, 1]]);
    assert!(m.in_closure(e(2), &[e(0), e(1)]).unwrap());

    let m = uniform(2, 4);
    assert!(m.in_closure(e(2), &[e(0), e(1)]).unwrap());

    // triangle on 1, 2, 3 as vertices 0, 1, 2
    let m = MatroidSpec::Graphic {
        vertices: 3,
        edges: vec![(0, 2), (0, 1), (1, 2)],
    }
    .build()
    .unwrap();
    assert!(m.in_closure(e(0), &[e(1), e(2)]).unwrap());
}

#[test]
fn ranks() {
    let m = gf(2, 2, &[&[1, 0], &[0, 1], &[1, 1]]);
    assert_eq!(m.rank(&[e(0), e(1), e(2)]).unwrap(), 2);
    assert_eq!(uniform(2, 4).rank(&[e(0), e(1), e(3)]).unwrap(), 2);
    assert_eq!(m.rank(&[]).unwrap(), 0);
    assert_eq!(uniform(3, 5).rank(&[]).unwrap(), 0);
}

#[test]
fn loops_and_coloops() {
    let m = gf(3, 2, &[&[0, 0], &[1, 2]]);
    assert!(m.is_loop(e(0)).unwrap());
    assert!(!m.is_loop(e(1)).unwrap());

    let sum = Oracle::direct_sum(&uniform(1, 2), &uniform(1, 1));
    assert!(sum.is_coloop(e(2)).unwrap());
    assert!(!sum.is_coloop(e(0)).unwrap());

    let g = MatroidSpec::Graphic {
        vertices: 2,
        edges: vec![(0, 1), (1, 1)],
    }
    .build()
    .unwrap();
    assert!(g.is_loop(e(1)).unwrap());
}

#[test]
fn adding_coloops() {
    let m = uniform(2, 3);
    let same = m.add_coloops(0);
    assert_eq!(same.ground_size(), 3);
    for a in 0..3 {
        for b in 0..3 {
            for x in 0..3 {
                assert_eq!(
                    same.in_closure(e(x), &[e(a), e(b)]).unwrap(),
                    m.in_closure(e(x), &[e(a), e(b)]).unwrap()
                );
            }
        }
    }

    let m = uniform(1, 2).add_coloops(1);
    assert_eq!(m.rank_bound(), 2);
    assert!(!m.in_closure(e(2), &[e(0), e(1)]).unwrap());

    let m = gf(2, 1, &[&[1]]).add_coloops(2);
    assert_eq!(m.rank_bound(), 3);
    assert_eq!(m.rank(&m.ground().collect::<Vec<_>>()).unwrap(), 3);
}

#[test]
fn restriction_rank() {
    let m = gf(3, 2, &[&[1, 0], &[0, 1], &[2, 0], &[1, 1]]);
    assert_eq!(m.restrict(&[e(0), e(1), e(3)]).unwrap().1, 2);
    assert_eq!(m.restrict(&[]).unwrap().1, 0);
    // (1,0) and (2,0) lie on one line through the origin
    assert_eq!(m.restrict(&[e(0), e(2)]).unwrap().1, 1);
}

#[test]
fn rainbow_and_color_classes() {
    let c = colors(&[0, 1, 0]);
    let s = seq(&[0, 1, 2]);
    assert!(is_rainbow(&s.empty_like(), &c));
    assert!(is_rainbow(&s.select([0, 1]).unwrap(), &c));
    assert!(!is_rainbow(&s.select([0, 2]).unwrap(), &c));

    assert!(color_class(&s, &c, &BTreeSet::new()).unwrap().is_empty());
    assert_eq!(color_class(&s, &c, c.palette()).unwrap(), s);
    let red = color_class(&s, &c, &BTreeSet::from([ColorId(0)])).unwrap();
    assert_eq!(red.indices().collect::<Vec<_>>(), vec![0, 2]);
    assert!(color_class(&s, &c, &BTreeSet::from([ColorId(7)])).is_err());
}

#[test]
fn sequence_operations() {
    let s = seq(&[4, 4, 1]);
    assert!(s.difference(&s).unwrap().is_empty());
    assert_eq!(s.intersection(&s).unwrap(), s);
    assert_eq!(s.select([0, 1]).unwrap().set_image(), vec![e(4)]);
    assert_eq!(s.difference(&seq(&[4])), Err(SeqError::MixedParents));
}

#[test]
fn profiles() {
    let m = uniform(2, 2);
    let tight = tight_instance(&m, &[e(0), e(1)], 3).unwrap();
    let c = Coloring::distinct(tight.len());
    assert!(matches!(
        check_general_profile(&tight, &c, 3, 2, ColorThresholds::PartCount),
        Err(ProfileViolation::TooShort { .. })
    ));

    let s = seq(&[0, 1, 0]);
    assert!(check_general_profile(&seq(&[1]), &colors(&[5]), 1, 2, ColorThresholds::PartCount).is_ok());
    assert!(check_general_profile(&s, &colors(&[5, 5, 5]), 1, 2, ColorThresholds::PartCount).is_err());
    assert!(check_special_profile(&s, &colors(&[0, 0, 1]), 2, 2).is_ok());
    assert!(check_special_profile(&s, &colors(&[0, 1, 2]), 2, 2).is_err());
}

#[test]
fn rank_one_singletons() {
    let m = gf(2, 1, &[&[1], &[1], &[1]]);
    let s = seq(&[0, 1, 2]);
    let c = colors(&[0, 0, 0]);
    let p = solve_special(&m, &s, &c, 3).unwrap();
    assert_eq!(p.len(), 3);
    assert!(p.parts().iter().all(|part| part.len() == 1));
    assert!(verify_partition(&m, &s, Some(&c), 3, p.parts()).unwrap().passed());
}

#[test]
fn gf3_special_example() {
    let m = gf(3, 2, &[&[1, 0], &[2, 0], &[0, 1]]);
    let s = seq(&[0, 1, 2]);
    let c = colors(&[1, 1, 2]);
    let p = solve_special(&m, &s, &c, 2).unwrap();
    assert!(verify_partition(&m, &s, Some(&c), 2, p.parts()).unwrap().passed());

    let listed = [s.select([1]).unwrap(), s.select([0, 2]).unwrap()];
    assert!(verify_partition(&m, &s, Some(&c), 2, &listed).unwrap().passed());
    assert!(brute_force_solve(&m, &s, Some(&c), 2, &BruteForceBudget::default())
        .unwrap()
        .is_found());
}

#[test]
fn special_precondition() {
    let m = gf(3, 2, &[&[1, 0], &[2, 0], &[0, 1]]);
    let s = seq(&[0, 1, 2]);
    // three colors for rank two, each once
    assert!(matches!(
        solve_special(&m, &s, &colors(&[0, 1, 2]), 2),
        Err(SolveError::PreconditionViolated(_))
    ));
}

#[test]
fn general_reduction_without_padding() {
    // d = m = 2: only trimming happens
    let m = uniform(2, 4);
    let s = seq(&[0, 1, 2, 3]);
    let c = colors(&[0, 1, 0, 1]);
    let p = solve_general(&m, &s, &c, 2);
    // color 1 appears twice > r - 1
    assert!(matches!(p, Err(SolveError::PreconditionViolated(_))));

    let c = colors(&[0, 0, 1, 2]);
    let p = solve_general(&m, &s, &c, 2).unwrap();
    assert!(verify_partition(&m, &s, Some(&c), 2, p.parts()).unwrap().passed());
}

#[test]
fn tight_instances_are_rejected() {
    let m = uniform(2, 3);
    let s = tight_instance(&m, &[e(0), e(1)], 3).unwrap();
    let c = Coloring::distinct(s.len());
    assert!(matches!(
        solve_general(&m, &s, &c, 3),
        Err(SolveError::PreconditionViolated(ProfileViolation::TooShort { .. }))
    ));
    assert!(matches!(
        solve_noncolor(&m, &s, 3),
        Err(SolveError::PreconditionViolated(ProfileViolation::TooShort { .. }))
    ));
}

#[test]
fn line_instance() {
    // points 1..5, the first four red, r = 3
    let m = line_points(5);
    let s = seq(&[0, 1, 2, 3, 4]);
    let c = colors(&[0, 0, 0, 0, 1]);
    assert!(matches!(
        solve_general(&m, &s, &c, 3),
        Err(SolveError::PreconditionViolated(ProfileViolation::FirstColorTooFrequent { .. }))
    ));
    assert_eq!(
        brute_force_solve(&m, &s, Some(&c), 3, &BruteForceBudget::default()).unwrap(),
        BruteForceOutcome::NoPartition
    );
}

#[test]
fn longer_line_instances() {
    for n in 4..=7 {
        let m = line_points(n as i64 + 1);
        let s = IndexedSequence::new((0..=n).map(ElementId));
        let c = Coloring::new((0..=n).map(|i| ColorId(u32::from(i == n))).collect());
        assert!(matches!(solve_general(&m, &s, &c, 3), Err(SolveError::PreconditionViolated(_))));
        assert!(!brute_force_solve(&m, &s, Some(&c), 3, &BruteForceBudget::default())
            .unwrap()
            .is_found());
    }
}

#[test]
fn noncolor_examples() {
    let m = uniform(3, 7);
    let s = seq(&[0, 1, 2, 3, 4, 5, 6]);
    let p = solve_noncolor(&m, &s, 3).unwrap();
    assert!(verify_partition(&m, &s, None, 3, p.parts()).unwrap().passed());

    let p = solve_noncolor(&m, &s, 1).unwrap();
    assert_eq!(p.len(), 1);
    assert_eq!(p.parts()[0].len(), 1);
}

#[test]
fn verification_failures() {
    let m = uniform(2, 4);
    let s = seq(&[0, 1, 2, 3]);
    let shared = [s.select([0]).unwrap(), s.select([0, 1]).unwrap()];
    assert_eq!(
        verify_partition(&m, &s, None, 2, &shared).unwrap().failure,
        Some(VerificationFailure::Disjointness { index: 0 })
    );
    let empty_first = [s.empty_like(), s.select([0, 1]).unwrap()];
    assert_eq!(
        verify_partition(&m, &s, None, 2, &empty_first).unwrap().failure,
        Some(VerificationFailure::Strictness)
    );
}

#[test]
fn maximal_rainbow_independent() {
    let m = gf(2, 2, &[&[1, 0], &[1, 0], &[0, 1]]);

    let parallel = seq(&[0, 1]);
    let c = colors(&[0, 1]);
    let out = max_rainbow_independent(&m, &parallel, &c, &parallel.empty_like()).unwrap();
    assert_eq!(out.indices().collect::<Vec<_>>(), vec![0]);

    let basis = seq(&[0, 2]);
    let out = max_rainbow_independent(&m, &basis, &c, &basis.empty_like()).unwrap();
    assert_eq!(out, basis);
    let again = max_rainbow_independent(&m, &basis, &c, &out).unwrap();
    assert_eq!(again, out);
}

#[test]
fn brute_force_examples() {
    let m = uniform(2, 2);
    let s = seq(&[0, 1]);
    assert_eq!(
        brute_force_solve(&m, &s, None, 2, &BruteForceBudget::default()).unwrap(),
        BruteForceOutcome::NoPartition
    );

    // the affine line over GF(2): S = (0 red, 0 red, 0 red, 1 blue), r = 2
    let line = MatroidSpec::Affine {
        dim: 1,
        coords: Coordinates::Prime {
            p: 2,
            rows: vec![vec![0], vec![1]],
        },
    }
    .build()
    .unwrap();
    let s = seq(&[0, 0, 0, 1]);
    let c = colors(&[0, 0, 0, 1]);
    assert!(check_general_profile(&s, &c, 2, 2, ColorThresholds::PartCount).is_err());
    let out = brute_force_solve(&line, &s, Some(&c), 2, &BruteForceBudget::default()).unwrap();
    let p = out.partition().unwrap();
    assert!(verify_partition(&line, &s, Some(&c), 2, p.parts()).unwrap().passed());
}

#[test]
fn tight_instance_shapes() {
    let m = uniform(2, 2);
    assert!(tight_instance(&m, &[e(0), e(1)], 1).unwrap().is_empty());
    assert_eq!(tight_instance(&m, &[e(0), e(1)], 3).unwrap().elements(), vec![e(0), e(0), e(1), e(1)]);
    let g = gf(2, 2, &[&[1, 0], &[0, 1]]);
    assert_eq!(tight_instance(&g, &[e(0), e(1)], 2).unwrap().elements(), vec![e(0), e(1)]);
    assert!(matches!(tight_instance(&m, &[e(0)], 2), Err(VerifyError::NotABasis)));
}

#[test]
fn tightness_examples() {
    let budget = BruteForceBudget::default();
    let report = check_tightness(&uniform(2, 2), &[e(0), e(1)], 2, &budget).unwrap();
    assert!(report.holds && report.intersection_identity_agreed);
    let g = gf(3, 2, &[&[1, 0], &[0, 1], &[1, 1], &[1, 2]]);
    assert!(check_tightness(&g, &[e(0), e(1)], 2, &budget).unwrap().holds);
    assert!(check_tightness(&g, &[e(2), e(3)], 3, &budget).unwrap().holds);
    let report = check_tightness(&g, &[e(0), e(1)], 1, &budget).unwrap();
    assert!(report.holds);
}

#[test]
fn intersection_examples() {
    let m = gf(2, 3, &[
        &[1, 0, 0],
        &[0, 1, 0],
        &[0, 0, 1],
        &[1, 1, 0],
        &[0, 1, 1],
        &[1, 0, 1],
        &[1, 1, 1],
        &[0, 0, 0],
    ]);
    let b = [e(0), e(1), e(2)];
    assert!(check_intersection_lemma(&m, &b, &[e(0), e(1)], &[e(0), e(1)]).unwrap());
    assert!(check_intersection_lemma(&m, &b, &[e(0)], &[e(1), e(2)]).unwrap());
    let (u, v) = ([e(0), e(1)], [e(1), e(2)]);
    assert!(check_intersection_lemma(&m, &b, &u, &v).unwrap());
    let both: Vec<ElementId> = m
        .ground()
        .filter(|&x| m.in_closure(x, &u).unwrap() && m.in_closure(x, &v).unwrap())
        .collect();
    // span{e2} and the zero vector
    assert_eq!(both, vec![e(1), e(7)]);
}

#[test]
fn rota_examples() {
    let budget = BruteForceBudget::default();
    let one = gf(2, 1, &[&[1]]);
    let out = rota_check(&one, &[vec![e(0)]], &budget).unwrap();
    assert_eq!(out.partition().unwrap().len(), 1);

    // color 1: (1,0), (0,1); color 2: (1,1), (1,0)
    let m = gf(2, 2, &[&[1, 0], &[0, 1], &[1, 1], &[1, 0]]);
    assert!(rota_check(&m, &[vec![e(0), e(1)], vec![e(2), e(3)]], &budget).unwrap().is_found());
    assert!(matches!(
        rota_check(&m, &[vec![e(0), e(3)], vec![e(2), e(1)]], &budget),
        Err(VerifyError::NotABasis)
    ));
}
