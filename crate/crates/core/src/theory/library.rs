//! The shipped theory files.

use crate::frontend::script::{run_script, ScriptError};

use super::TheoryEnv;

/// Every shipped theory file, by file name.
pub const THEORY_FILES: &[(&str, &str)] = &[
    ("stdlib.thy", include_str!("../../theories/stdlib.thy")),
    ("isinv.thy", include_str!("../../theories/isinv.thy")),
    ("finite.thy", include_str!("../../theories/finite.thy")),
    ("sia.thy", include_str!("../../theories/sia.thy")),
    ("peirce.thy", include_str!("../../theories/peirce.thy")),
];

pub fn theory_source(file: &str) -> Option<&'static str> {
    THEORY_FILES.iter().find(|(n, _)| *n == file).map(|(_, s)| *s)
}

fn load(env: &TheoryEnv, file: &str) -> Result<TheoryEnv, ScriptError> {
    let src = theory_source(file).expect("shipped theory file");
    Ok(run_script(env, src, file)?.0)
}

/// Sets, composition, `Bool`, `lift` and the library theorems.
pub fn stdlib_load(env: &TheoryEnv) -> Result<TheoryEnv, ScriptError> {
    if env.has_imported("stdlib.thy") {
        return Ok(env.clone());
    }
    load(env, "stdlib.thy")
}

/// The example theories: `isinv`, finite sets with the `Fset` carve-out, and
/// the SIA demonstration. Loads the standard library first if needed.
pub fn example_theories(env: &TheoryEnv) -> Result<TheoryEnv, ScriptError> {
    let mut env = stdlib_load(env)?;
    for f in ["isinv.thy", "finite.thy", "sia.thy"] {
        env = load(&env, f)?;
    }
    Ok(env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::script::ScriptFailure;
    use crate::kernel::{KernelError, RuleId};
    use crate::engine::EngineError;

    fn labels(env: &TheoryEnv, expected: &[(&str, &str)]) {
        for (n, l) in expected {
            let th = env.theorem(n).unwrap_or_else(|| panic!("{n} missing"));
            assert_eq!(th.label().as_str(), *l, "{n}");
        }
    }

    #[test]
    fn example_theories_check() {
        let env = example_theories(&TheoryEnv::default()).unwrap_or_else(|e| panic!("{e}"));
        labels(
            &env,
            &[
                ("isinv_left", "I"),
                ("inv_unique", "I"),
                ("finite_empty", "I"),
                ("finite_insert", "I"),
                ("fset_witness", "I"),
                ("fset_witness_c", "C"),
                ("zero_in_delta", "I"),
                ("delta_trivial", "C"),
            ],
        );
        let law = |n: &str, k| env.axiom_thm(&RuleId::TypedefLaw(n.into(), k)).unwrap().label().to_string();
        assert_eq!([law("Fset", 1), law("Fset", 2)], ["I", "I"]);
        assert_eq!([law("Fset_c", 1), law("Fset_c", 2)], ["C", "C"]);
    }

    #[test]
    fn stdlib_asserts_only_the_bool_datatype() {
        let env = stdlib_load(&TheoryEnv::default()).unwrap();
        let log = env.axiom_log();
        assert!(!log.is_empty());
        for (r, l) in log {
            assert!(matches!(&r, RuleId::Axiom(n) if n.starts_with("Bool_") || n.starts_with("ite_")), "{r:?}");
            assert_eq!(l.as_str(), "I");
        }
    }

    #[test]
    fn loading_twice_is_a_no_op() {
        let env = stdlib_load(&TheoryEnv::default()).unwrap();
        let again = stdlib_load(&env).unwrap();
        assert_eq!(env.extensions().len(), again.extensions().len());
    }

    #[test]
    fn rebuilt_environment_rechecks() {
        let env = example_theories(&TheoryEnv::default()).unwrap();
        let rebuilt = TheoryEnv::rebuild(env.lattice().clone(), env.extensions()).unwrap();
        for (n, th) in env.theorems() {
            assert!(rebuilt.theorem(n).unwrap().same_judgement(th), "{n}");
        }
    }

    #[test]
    fn peirce_at_c_and_not_at_i() {
        let src = theory_source("peirce.thy").unwrap();
        let (env, report) = run_script(&TheoryEnv::default(), src, "peirce.thy").unwrap();
        assert_eq!(report.to_string(), "theorem peirce : C\n");
        assert!(env.theorem("peirce").unwrap().context().is_empty());

        let at_i = src.replace("theorem peirce : C", "theorem peirce : I");
        let e = run_script(&TheoryEnv::default(), &at_i, "peirce.thy").unwrap_err();
        let ScriptFailure::Tactic { tactic, error, .. } = &*e.failure else {
            panic!("{e}");
        };
        assert_eq!(tactic, "raa");
        assert!(matches!(error, EngineError::Kernel(KernelError::NotAbove { .. })), "{e}");
    }
}
