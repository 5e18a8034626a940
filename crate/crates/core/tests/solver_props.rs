use proptest::prelude::*;
use tverberg_core::*;

/// A random GF(2) matroid of rank `m` whose first `m` vectors are the unit basis.
fn gf2(m: usize, extra: &[u64]) -> Oracle {
    let mut rows: Vec<Vec<u64>> = (0..m).map(|i| (0..m).map(|j| u64::from(i == j)).collect()).collect();
    for &bits in extra {
        let bits = if bits % (1 << m) == 0 { 1 } else { bits };
        rows.push((0..m).map(|j| bits >> j & 1).collect());
    }
    MatroidSpec::Vector {
        dim: m,
        coords: Coordinates::Prime { p: 2, rows },
    }
    .build()
    .unwrap()
}

fn general_case() -> impl Strategy<Value = (usize, usize, Vec<u64>, Vec<usize>, Vec<u32>)> {
    (1usize..=3, 2usize..=3).prop_flat_map(|(m, r)| {
        let len = m * (r - 1) + 1;
        let n = m + 3;
        (
            Just(m),
            Just(r),
            prop::collection::vec(any::<u64>(), 3),
            prop::collection::vec(0..n, len..=len + 1),
            prop::collection::vec(0u32..6, len + 1),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn general_solver_agrees_with_brute_force((m, r, extra, elements, colors) in general_case()) {
        let oracle = gf2(m, &extra);
        let seq = IndexedSequence::new(elements.iter().map(|&e| ElementId(e)));
        let coloring = Coloring::new(colors[..elements.len()].iter().map(|&c| ColorId(c)).collect());
        let profile_ok = check_general_profile(&seq, &coloring, r, m, ColorThresholds::PartCount).is_ok();
        match solve_general(&oracle, &seq, &coloring, r) {
            Ok(p) => {
                prop_assert!(profile_ok);
                prop_assert_eq!(p.len(), r);
                prop_assert!(verify_partition(&oracle, &seq, Some(&coloring), r, p.parts()).unwrap().passed());
            }
            Err(SolveError::PreconditionViolated(_)) => prop_assert!(!profile_ok),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
        if profile_ok {
            let brute = brute_force_solve(&oracle, &seq, Some(&coloring), r, &BruteForceBudget::default()).unwrap();
            prop_assert!(brute.is_found());
        }
    }

    #[test]
    fn noncolor_solver_verifies(m in 1usize..=3, r in 1usize..=4, extra in prop::collection::vec(any::<u64>(), 3), pad in 0usize..3, seed in any::<u64>()) {
        let oracle = gf2(m, &extra);
        let len = m * (r - 1) + 1 + pad;
        let seq = IndexedSequence::new((0..len).map(|i| ElementId(((seed >> (i % 32)) as usize + i) % (m + 3))));
        let p = solve_noncolor(&oracle, &seq, r).unwrap();
        prop_assert_eq!(p.len(), r);
        prop_assert!(verify_partition(&oracle, &seq, None, r, p.parts()).unwrap().passed());
    }

    #[test]
    fn solver_is_deterministic((m, r, extra, elements, colors) in general_case()) {
        let oracle = gf2(m, &extra);
        let seq = IndexedSequence::new(elements.iter().map(|&e| ElementId(e)));
        let coloring = Coloring::new(colors[..elements.len()].iter().map(|&c| ColorId(c)).collect());
        let a = solve_general(&oracle, &seq, &coloring, r).map(|p| p.part_indices());
        let b = solve_general(&oracle, &seq, &coloring, r).map(|p| p.part_indices());
        prop_assert_eq!(a.is_ok(), b.is_ok());
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert_eq!(a, b);
        }
    }
}
