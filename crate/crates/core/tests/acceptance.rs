//! Runs every acceptance criterion and prints one PASS/FAIL line for each.

mod support;

use support::criteria::{self, Outcome};

type Criterion = (&'static str, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = vec![
        ("Peirce demonstration", criteria::peirce),
        ("Lattice ordering", criteria::lattice_ordering),
        ("Metatheory property suite", || criteria::metatheory(10_000)),
        ("Thm well-formedness", criteria::thm_well_formed),
        ("Taint propagation", || criteria::taint_propagation(1_000)),
        ("Standard library", criteria::stdlib),
        ("Typedef labels", criteria::typedef_labels),
        ("Unwinding", criteria::unwinding),
        ("Frontend", || criteria::frontend(100_000, 10_000)),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(e) => {
                println!("FAIL {name}: {e}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
