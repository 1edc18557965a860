mod support;

use support::criteria;

#[test]
fn every_corpus_judgement_is_well_formed_and_replays() {
    criteria::thm_well_formed().unwrap();
}

#[test]
fn peirce_at_c_and_not_at_i() {
    criteria::peirce().unwrap();
}

#[test]
fn standard_library_labels() {
    criteria::stdlib().unwrap();
}

#[test]
fn typedef_laws_follow_the_witness() {
    criteria::typedef_labels().unwrap();
}

#[test]
fn corpus_is_not_empty() {
    let c = criteria::corpus().unwrap();
    for name in ["peirce", "union_comm", "inv_unique", "delta_trivial"] {
        assert!(c.iter().any(|(n, _, _)| n == name), "{name}");
    }
}
