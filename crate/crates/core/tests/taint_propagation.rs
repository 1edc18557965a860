mod support;

use support::{criteria, gen, proofs};
use taint_hol::kernel::{normalize_lifts, replay};
use taint_hol::theory::TheoryEnv;

#[test]
fn root_label_is_the_fold_of_leaf_labels() {
    criteria::taint_propagation(1_000).unwrap();
}

#[test]
fn derivations_reach_every_label() {
    let env = TheoryEnv::default();
    let mut rng = gen::rng(3);
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..300 {
        seen.insert(proofs::random_thm(&env, &mut rng, 25).label().to_string());
    }
    assert_eq!(seen.len(), env.lattice().members().len(), "{seen:?}");
}

#[test]
fn normalising_twice_is_stable() {
    let env = TheoryEnv::default();
    let mut rng = gen::rng(4);
    for _ in 0..100 {
        let th = proofs::random_thm(&env, &mut rng, 25);
        let once = normalize_lifts(&env, &th).unwrap();
        let twice = normalize_lifts(&env, &once).unwrap();
        assert!(twice.same_judgement(&th));
        assert!(replay(&env, twice.proof()).unwrap().same_judgement(&th));
    }
}

#[test]
fn unwinding() {
    criteria::unwinding().unwrap();
}
