use amalgam_core::instances::{CyclicInstance, DenseInstance, HeisenbergInstance};
use amalgam_core::padic::Prime;
use amalgam_core::suites::{cyclic_alphabet, exhaustive_suite, oracle_suite};
use amalgam_core::Amalgam;

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

#[test]
fn reduce_matches_oracle_dense() {
    for p in [2, 3, 5] {
        let r = oracle_suite(&Amalgam::new(DenseInstance::new(prime(p))), 300, 11);
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn reduce_matches_oracle_heisenberg() {
    let r = oracle_suite(&Amalgam::new(HeisenbergInstance::new(prime(3))), 300, 11);
    assert!(r.passed(), "{r:?}");
}

#[test]
fn reduce_matches_oracle_cyclic() {
    for (p, l) in [(2, 3), (3, 2), (2, 5)] {
        let r = oracle_suite(
            &Amalgam::new(CyclicInstance::new(prime(p), l).unwrap()),
            300,
            11,
        );
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn exhaustive_short_words_in_cyclic() {
    let sys = CyclicInstance::new(prime(2), 3).unwrap();
    let alphabet = cyclic_alphabet(&sys);
    let r = exhaustive_suite(&Amalgam::new(sys), &alphabet, 3);
    assert_eq!(r.samples, 1 + 6 + 36 + 216);
    assert!(r.passed(), "{r:?}");
}
