mod support;

use support::labels::{check_against_closure, check_laws, read_facts, Closure};
use taint_hol::lattice::{load_lattice, LatticeError, TaintLattice, FOUR_CHAIN};

const DIAMOND: &str = "\
labels: I A B T
bottom: I
join: A B = T
join: T * = T
";

#[test]
fn four_chain_agrees_with_the_saturated_theory() {
    assert_eq!(check_against_closure(&TaintLattice::four_chain(), FOUR_CHAIN), Ok(16));
}

#[test]
fn four_chain_satisfies_the_laws_on_every_triple() {
    assert_eq!(check_laws(&TaintLattice::four_chain()), Ok(64));
}

#[test]
fn four_chain_order_is_total() {
    let facts = read_facts(FOUR_CHAIN);
    let mut cl = Closure::saturate(&facts);
    for a in 0..4 {
        for b in 0..4 {
            assert_eq!(cl.leq(a, b), a <= b, "{a} {b}");
        }
    }
}

#[test]
fn diamond_is_a_lattice() {
    let lat = load_lattice(DIAMOND).unwrap();
    assert_eq!(check_laws(&lat), Ok(64));
    assert_eq!(check_against_closure(&lat, DIAMOND), Ok(16));
    assert_eq!(lat.hasse_edges().len(), 4);
}

#[test]
fn diamond_without_its_top_join_is_rejected() {
    let text = DIAMOND.replace("join: A B = T\n", "");
    assert!(matches!(load_lattice(&text), Err(LatticeError::NotALattice { .. })));
}

#[test]
fn trivial_lattice() {
    let lat = TaintLattice::trivial();
    assert_eq!(check_laws(&lat), Ok(lat.members().len().pow(3)));
}

#[test]
fn closure_detects_a_wrong_table() {
    // The closure sees `A join B = A` and `A join B = T` as identifying A and T.
    let text = format!("{DIAMOND}join: A B = A\n");
    let facts = read_facts(&text);
    let mut cl = Closure::saturate(&facts);
    assert!(cl.equiv(1, 3));
}
