//! One function per acceptance criterion. Each returns a one-line summary
//! on success.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use taint_hol::engine::EngineError;
use taint_hol::frontend::{parse_term, print_term_in, run_script, ScriptFailure};
use taint_hol::kernel::{replay, unwind_classical, KernelError, RuleId, Thm};
use taint_hol::kernel::normalize_lifts;
use taint_hol::lattice::{TaintLattice, FOUR_CHAIN};
use taint_hol::syntax::{logic, type_of, Term};
use taint_hol::theory::{example_theories, theory_source, TheoryEnv, THEORY_FILES};

use super::{debruijn, gen, labels, lemmas, proofs};

pub type Outcome = Result<String, String>;

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    if took > limit {
        return Err(format!("took {took:?}, limit {limit:?}"));
    }
    Ok(took)
}

fn source(file: &str) -> Result<&'static str, String> {
    theory_source(file).ok_or_else(|| format!("{file} is not shipped"))
}

fn four_chain() -> TheoryEnv {
    TheoryEnv::new(TaintLattice::four_chain())
}

/// Checks `text` expecting a tactic failure whose kernel cause is a label
/// refusal, and returns the failing tactic.
fn fails_on_label(env: &TheoryEnv, text: &str, file: &str) -> Result<String, String> {
    match run_script(env, text, file) {
        Ok(_) => Err(format!("{file} checked but should fail")),
        Err(e) => match &*e.failure {
            ScriptFailure::Tactic {
                tactic,
                error: EngineError::Kernel(KernelError::NotAbove { .. } | KernelError::LabelOutOfRange(_)),
                ..
            } => Ok(format!("{tactic} at {}:{}", e.span.line, e.span.col)),
            _ => Err(format!("wrong failure: {e}")),
        },
    }
}

/// Rewrites the declared label of one theorem.
fn relabel(src: &str, theorem: &str, from: &str, to: &str) -> Result<String, String> {
    let header = format!("theorem {theorem} : {from}");
    if !src.contains(&header) {
        return Err(format!("no `{header}` line"));
    }
    Ok(src.replace(&header, &format!("theorem {theorem} : {to}")))
}

fn label_of(env: &TheoryEnv, thm: &str) -> Result<String, String> {
    env.theorem(thm)
        .map(|t| t.label().to_string())
        .ok_or_else(|| format!("no theorem {thm}"))
}

pub fn peirce() -> Outcome {
    let start = Instant::now();
    let src = source("peirce.thy")?;
    if !src.lines().any(|l| l.trim() == "raa") {
        return Err("peirce.thy does not use raa".into());
    }
    let (env, _) = run_script(&four_chain(), src, "peirce.thy").map_err(|e| e.to_string())?;
    let th = env.theorem("peirce").ok_or("no theorem peirce")?;
    let p = Term::var("p", taint_hol::syntax::Type::prop());
    let q = Term::var("q", taint_hol::syntax::Type::prop());
    let want = logic::mk_imp(logic::mk_imp(logic::mk_imp(p.clone(), q), p.clone()), p);
    if !th.context().is_empty() || !debruijn::alpha_eq(th.concl(), &want) || th.label().as_str() != "C" {
        return Err(format!("unexpected theorem {th}"));
    }
    let at_i = relabel(src, "peirce", "C", "I")?;
    let failed = fails_on_label(&four_chain(), &at_i, "peirce.thy")?;
    if !failed.starts_with("raa") {
        return Err(format!("failed at {failed}, not at raa"));
    }
    let took = within(Duration::from_secs(1), start)?;
    Ok(format!("{th}; at I fails on {failed}; {took:?}"))
}

pub fn lattice_ordering() -> Outcome {
    let start = Instant::now();
    let lat = TaintLattice::four_chain();
    let pairs = labels::check_against_closure(&lat, FOUR_CHAIN)?;
    let triples = labels::check_laws(&lat)?;
    if (pairs, triples) != (16, 64) {
        return Err(format!("checked {pairs} pairs and {triples} triples"));
    }
    let took = within(Duration::from_secs(1), start)?;
    Ok(format!("{pairs} pairs agree with the closure, laws hold on {triples} triples; {took:?}"))
}

pub fn metatheory(n: usize) -> Outcome {
    let start = Instant::now();
    let env = gen::env();
    for (seed, (name, check)) in lemmas::SUBSTITUTION.iter().chain(lemmas::OTHERS.iter()).enumerate() {
        lemmas::run(&env, seed as u64, n, *check).map_err(|e| format!("{name}: {e}"))?;
    }
    let took = within(Duration::from_secs(60), start)?;
    let total = lemmas::SUBSTITUTION.len() + lemmas::OTHERS.len();
    Ok(format!("{total} properties x {n} instances; {took:?}"))
}

/// Every theorem, axiom and definition the shipped corpus produces.
pub fn corpus() -> Result<Vec<(String, TheoryEnv, Thm)>, String> {
    let env = example_theories(&four_chain()).map_err(|e| e.to_string())?;
    let (env, _) = run_script(&env, source("peirce.thy")?, "peirce.thy").map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for (n, t) in env.theorems() {
        out.push((n.to_string(), env.clone(), t.clone()));
    }
    for (r, t) in env.axioms() {
        out.push((r.to_string(), env.clone(), t.clone()));
    }
    Ok(out)
}

pub fn well_formed(env: &TheoryEnv, th: &Thm) -> Result<(), String> {
    let sig = env.signature();
    for t in th.context().iter().chain(std::iter::once(th.concl())) {
        let ty = type_of(sig, t).map_err(|e| format!("{t}: {e}"))?;
        if !ty.is_prop() {
            return Err(format!("{t} has type {ty}"));
        }
    }
    if !env.lattice().contains(th.label()) {
        return Err(format!("label {} is not a member", th.label()));
    }
    let again = replay(env, th.proof()).map_err(|e| e.to_string())?;
    if !again.same_judgement(th) {
        return Err(format!("replay gave {again}, expected {th}"));
    }
    Ok(())
}

pub fn thm_well_formed() -> Outcome {
    let corpus = corpus()?;
    for (n, env, th) in &corpus {
        well_formed(env, th).map_err(|e| format!("{n}: {e}"))?;
    }
    let env = four_chain();
    let mut rng = gen::rng(7);
    for i in 0..200 {
        let th = proofs::random_thm(&env, &mut rng, 20);
        well_formed(&env, &th).map_err(|e| format!("random derivation {i}: {e}"))?;
    }
    Ok(format!("{} corpus judgements and 200 random derivations", corpus.len()))
}

pub fn taint_propagation(n: usize) -> Outcome {
    let env = four_chain();
    let mut rng = gen::rng(11);
    let mut lifted = 0;
    for i in 0..n {
        let th = proofs::random_thm(&env, &mut rng, 25);
        let folded = proofs::fold_label(&env, th.proof());
        if folded != *th.label() {
            return Err(format!("derivation {i}: root {} but fold gives {folded}", th.label()));
        }
        let norm = normalize_lifts(&env, &th).map_err(|e| format!("derivation {i}: {e}"))?;
        let again = replay(&env, norm.proof()).map_err(|e| format!("derivation {i}: {e}"))?;
        if !again.same_judgement(&th) || !norm.same_judgement(&th) {
            return Err(format!("derivation {i}: normalisation changed {th}"));
        }
        if proofs::interior_lifts(norm.proof()) != 0 {
            return Err(format!("derivation {i}: lifts remain inside the normalised proof"));
        }
        if th.proof().size() > 1 && th.label() != &env.lattice().bottom() {
            lifted += 1;
        }
    }
    Ok(format!("{n} derivations ({lifted} above the bottom label)"))
}

pub fn stdlib() -> Outcome {
    let src = source("stdlib.thy")?;
    let (env, _) = run_script(&four_chain(), src, "stdlib.thy").map_err(|e| e.to_string())?;
    let want = [
        ("union_comm", "I"),
        ("cmpl_empty", "I"),
        ("cmpl_cmpl", "C"),
        ("lift_true", "I"),
        ("lift_false", "I"),
        ("drop_exists", "Ch"),
    ];
    for (thm, l) in want {
        let got = label_of(&env, thm)?;
        if got != l {
            return Err(format!("{thm} at {got}, expected {l}"));
        }
    }
    let cmpl = fails_on_label(&four_chain(), &relabel(src, "cmpl_cmpl", "C", "I")?, "stdlib.thy")?;
    let drop = fails_on_label(&four_chain(), &relabel(src, "drop_exists", "Ch", "C")?, "stdlib.thy")?;
    Ok(format!("labels match; cmpl_cmpl at I fails on {cmpl}; drop_exists at C fails on {drop}"))
}

pub fn typedef_labels() -> Outcome {
    let env = example_theories(&four_chain()).map_err(|e| e.to_string())?;
    let law = |n: &str, k| -> Result<String, String> {
        env.axiom_thm(&RuleId::TypedefLaw(n.into(), k))
            .map(|t| t.label().to_string())
            .ok_or_else(|| format!("no law {k} for {n}"))
    };
    let got = [law("Fset", 1)?, law("Fset", 2)?, law("Fset_c", 1)?, law("Fset_c", 2)?];
    if got != ["I", "I", "C", "C"] {
        return Err(format!("laws at {got:?}"));
    }
    if label_of(&env, "fset_witness")? != "I" || label_of(&env, "fset_witness_c")? != "C" {
        return Err("witness labels changed".into());
    }
    Ok("Fset laws at I, Fset_c laws at C".into())
}

pub fn unwinding() -> Outcome {
    let env = example_theories(&four_chain()).map_err(|e| e.to_string())?;
    let (env, _) = run_script(&env, source("peirce.thy")?, "peirce.thy").map_err(|e| e.to_string())?;
    let peirce = env.theorem("peirce").ok_or("no theorem peirce")?;
    let un = unwind_classical(&env, peirce).map_err(|e| e.to_string())?;
    let want = logic::mk_imp(taint_hol::kernel::unwind::excluded_middle(), peirce.concl().clone());
    if !debruijn::alpha_eq(un.concl(), &want) || un.label().as_str() != "I" || !un.context().is_empty() {
        return Err(format!("unwound to {un}"));
    }
    well_formed(&env, &un)?;
    let drop = env.theorem("drop_exists").ok_or("no theorem drop_exists")?;
    match unwind_classical(&env, drop) {
        Err(KernelError::PolymorphicAxiomInProof(_)) => {}
        other => return Err(format!("unwinding drop_exists gave {other:?}")),
    }
    Ok(format!("{un}; choice refused"))
}

const VOCAB: &[&str] = &[
    "\\", "x", "y", ":", "Prop", "->", "'a", ".", "(", ")", "/\\", "\\/", "-->", "<->", "~", "=", "forall", "exists",
    "True", "False", "{", "}", "|", "nat", "list", "zero", "nil", ",", "\"", " ", "0", "λ", "∀",
];

fn fuzz_input(rng: &mut gen::Rng8) -> String {
    match rng.gen_range(0..3) {
        0 => {
            let n = rng.gen_range(0..24);
            let bytes: Vec<u8> = (0..n).map(|_| rng.gen()).collect();
            String::from_utf8_lossy(&bytes).into_owned()
        }
        1 => {
            let n = rng.gen_range(0..20);
            (0..n).map(|_| *VOCAB.choose(rng).expect("nonempty")).collect::<Vec<_>>().join(" ")
        }
        _ => {
            let (t, _) = gen::term(rng, 3);
            let mut s: Vec<char> = print_term_in(gen::env().signature(), &t).chars().collect();
            for _ in 0..rng.gen_range(1..4) {
                if s.is_empty() {
                    break;
                }
                let i = rng.gen_range(0..s.len());
                match rng.gen_range(0..3) {
                    0 => {
                        s.remove(i);
                    }
                    1 => s.insert(i, *['(', ')', ':', '\\', '.', ' ', 'x'].choose(rng).expect("nonempty")),
                    _ => s.truncate(i),
                }
            }
            s.into_iter().collect()
        }
    }
}

pub fn parser_fuzz(n: usize) -> Result<usize, String> {
    let env = gen::env();
    let mut rng = gen::rng(23);
    let mut accepted = 0;
    for _ in 0..n {
        let input = fuzz_input(&mut rng);
        let r = catch_unwind(AssertUnwindSafe(|| parse_term(env.signature(), &input)))
            .map_err(|_| format!("parser panicked on {input:?}"))?;
        accepted += r.is_ok() as usize;
    }
    Ok(accepted)
}

pub fn round_trip(n: usize) -> Result<(), String> {
    let env = gen::env();
    let mut rng = gen::rng(31);
    for _ in 0..n {
        let (t, _) = gen::term(&mut rng, 4);
        let s = print_term_in(env.signature(), &t);
        let back = parse_term(env.signature(), &s).map_err(|e| format!("{s}: {e}"))?;
        if !debruijn::alpha_eq(&back, &t) {
            return Err(format!("{s} reads back as {back}"));
        }
    }
    Ok(())
}

/// Checks every shipped theory file twice from scratch and compares.
pub fn corpus_checks() -> Result<usize, String> {
    let run = || -> Result<Vec<String>, String> {
        let mut out = Vec::new();
        for (f, src) in THEORY_FILES {
            let (_, report) = run_script(&four_chain(), src, f).map_err(|e| e.to_string())?;
            out.push(report.to_string());
        }
        Ok(out)
    };
    let (a, b) = (run()?, run()?);
    if a != b {
        return Err("two runs disagree".into());
    }
    Ok(a.len())
}

pub fn frontend(fuzz: usize, trips: usize) -> Outcome {
    let accepted = parser_fuzz(fuzz)?;
    round_trip(trips)?;
    let files = corpus_checks()?;
    Ok(format!("{fuzz} fuzz inputs ({accepted} parsed), {trips} round trips, {files} files check twice identically"))
}
