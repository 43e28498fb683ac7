use amalgam_core::certificate::element_expr;
use amalgam_core::expr::parse_word;
use amalgam_core::instances::{DenseInstance, HeisenbergInstance};
use amalgam_core::padic::Prime;
use amalgam_core::suites::{random_element, random_word};
use amalgam_core::{Amalgam, FactorSystem, Syllable, Word};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dense(p: u64) -> Amalgam<DenseInstance> {
    Amalgam::new(DenseInstance::new(Prime::new(p).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn group_axioms(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let am = dense(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [a, b, c] = [(); 3].map(|_| random_element(&am, &mut rng, 5));
        prop_assert_eq!(am.mul(&am.mul(&a, &b), &c), am.mul(&a, &am.mul(&b, &c)));
        prop_assert_eq!(am.mul(&a, &am.identity()), a.clone());
        prop_assert!(am.is_identity(&am.mul(&am.inv(&a), &a)));
        prop_assert_eq!(am.inv(&am.inv(&a)), a);
    }

    #[test]
    fn filtration_is_monotone(seed in any::<u64>(), n in 0usize..6) {
        let am = dense(5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(am.system(), &mut rng, 12, n);
        let g = am.reduce(&w).unwrap();
        prop_assert!(g.level() <= w.max_level());
        let h = random_element(&am, &mut rng, 6);
        let gh = am.mul(&g, &h);
        prop_assert!(gh.level() <= g.level().max(h.level()));
        prop_assert_eq!(am.inv(&g).level(), g.level());
    }

    #[test]
    fn base_is_identified_across_levels(seed in any::<u64>(), n in 0usize..6) {
        let am = Amalgam::new(HeisenbergInstance::new(Prime::new(3).unwrap()));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = am.system().sample_base(n, &mut rng);
        let lo = am.syllable(n, &b).unwrap();
        let hi = am.syllable(n + 1, &b).unwrap();
        prop_assert_eq!(&lo, &hi);
        prop_assert_eq!(lo.level(), 0);
    }

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let am = dense(3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_element(&am, &mut rng, 6);
        let back = am.reduce(&parse_word(&element_expr(&am, &g), am.system()).unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn heisenberg_round_trip(seed in any::<u64>()) {
        let am = Amalgam::new(HeisenbergInstance::new(Prime::new(3).unwrap()));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_element(&am, &mut rng, 4);
        let back = am.reduce(&parse_word(&element_expr(&am, &g), am.system()).unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }
}

#[test]
fn single_top_letter_has_its_level() {
    let am = dense(5);
    for n in 1..8 {
        let g = am
            .reduce(&Word::new(vec![Syllable::new(n, am.system().value(1, 1))]))
            .unwrap();
        assert_eq!(g.level(), n);
    }
}
