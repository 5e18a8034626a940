use proptest::prelude::*;
use tverberg::format::{parse_partition, Mode};
use tverberg::generate::{gen_random_instance, Family, Profile};
use tverberg::report::{solve, verify, Outcome};
use tverberg_core::SolverOptions;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn solve_reports_reverify_and_repeat(
        family in prop::sample::select(Family::ALL.to_vec()),
        m in 1..5usize,
        r in 1..5usize,
        extra in 0..4usize,
        seed in any::<u64>(),
        special in any::<bool>(),
        noncolor in any::<bool>(),
    ) {
        let profile = if special { Profile::Special } else { Profile::General };
        let mut inst = gen_random_instance(family, m, r, m * (r - 1) + 1 + extra, seed, profile).unwrap();
        if noncolor {
            inst.mode = Mode::Noncolor;
        }
        let first = solve(&inst, SolverOptions::default());
        prop_assert_eq!(first.outcome, Outcome::Partition, "{}", first);
        let second = solve(&inst, SolverOptions::default());
        prop_assert_eq!(&first.parts, &second.parts);
        prop_assert_eq!(first.oracle_calls, second.oracle_calls);
        prop_assert_eq!(first.cycle_iterations, second.cycle_iterations);

        let parts = parse_partition(&first.to_string()).unwrap();
        let check = verify(&inst, &parts);
        prop_assert_eq!(check.outcome, Outcome::Partition, "{}", check);
    }
}
