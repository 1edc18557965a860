//! Random derivations built by applying kernel rules to a growing pool of
//! theorems, and the label fold over recorded proofs.

use rand::seq::SliceRandom;
use rand::Rng;

use taint_hol::kernel::derived;
use taint_hol::kernel::rules as r;
use taint_hol::kernel::{Context, Param, ProofNode, RuleId, Thm};
use taint_hol::lattice::{Label, Scheme};
use taint_hol::syntax::{logic, name, Term, Type};
use taint_hol::theory::TheoryEnv;

use super::gen::Rng8;

fn atom(rng: &mut Rng8) -> Term {
    Term::var(*["p", "q", "r"].choose(rng).expect("nonempty"), Type::prop())
}

fn small_prop(rng: &mut Rng8) -> Term {
    match rng.gen_range(0..4) {
        0 => logic::mk_conj(atom(rng), atom(rng)),
        1 => logic::mk_neg(atom(rng)),
        _ => atom(rng),
    }
}

fn leaf(env: &TheoryEnv, rng: &mut Rng8) -> Option<Thm> {
    let empty = Context::empty();
    match rng.gen_range(0..7) {
        0 => r::hyp(env, &small_prop(rng)).ok(),
        1 => r::true_intro(env, &empty).ok(),
        2 => r::refl(env, &empty, &atom(rng)).ok(),
        3 => r::scheme(env, Scheme::Lem, &empty, &small_prop(rng)).ok(),
        4 => r::scheme(env, Scheme::Wem, &empty, &small_prop(rng)).ok(),
        5 => {
            let rel = Term::var("R", Type::funs([Type::prop(), Type::prop()], Type::prop()));
            r::scheme(env, Scheme::Choice, &empty, &rel).ok()
        }
        _ => r::hyp(env, &atom(rng)).ok(),
    }
}

fn step(env: &TheoryEnv, rng: &mut Rng8, pool: &[Thm]) -> Option<Thm> {
    let a = pool.choose(rng)?;
    let b = pool.choose(rng)?;
    let labels = env.lattice().members();
    match rng.gen_range(0..12) {
        0 => r::lift(env, a, labels.choose(rng)?).ok(),
        1 => {
            let phi = a.context().iter().next().cloned().unwrap_or_else(|| atom(rng));
            r::imp_intro(env, a, &phi).ok()
        }
        2 => r::disj_intro1(env, a, &small_prop(rng)).ok(),
        3 => r::disj_intro2(env, a, &small_prop(rng)).ok(),
        4 => r::weaken(env, a, &small_prop(rng)).ok(),
        5 => r::conj_intro(env, a, b).ok(),
        6 => derived::join_conj(env, a, b).ok(),
        7 => derived::cut(env, a, b).ok(),
        8 => r::imp_elim(env, a, b).ok(),
        9 => r::conj_elim1(env, a).ok(),
        10 => r::all_intro(env, a, &(name("p"), Type::prop())).ok(),
        _ => leaf(env, rng),
    }
}

/// A random derivation of roughly `steps` rule applications. Returns the
/// largest theorem in the pool.
pub fn random_thm(env: &TheoryEnv, rng: &mut Rng8, steps: usize) -> Thm {
    let mut pool: Vec<Thm> = Vec::new();
    while pool.len() < 3 {
        pool.extend(leaf(env, rng));
    }
    for _ in 0..steps {
        if let Some(t) = step(env, rng, &pool) {
            pool.push(t);
        }
    }
    pool.into_iter().max_by_key(|t| t.proof().size()).expect("nonempty pool")
}

/// The label a leaf contributes, read off the rule alone.
pub fn leaf_label(env: &TheoryEnv, n: &ProofNode) -> Label {
    let lat = env.lattice();
    match &n.rule {
        RuleId::Scheme(s) => lat.scheme_label(*s).expect("scheme bound in lattice"),
        r if r.is_bottom_axiom() => lat.bottom(),
        other => panic!("no fixed label for leaf {other}"),
    }
}

/// Join of every leaf label and every lift target in the proof.
pub fn fold_label(env: &TheoryEnv, root: &ProofNode) -> Label {
    let lat = env.lattice();
    let mut acc = lat.bottom();
    root.for_each(&mut |n| {
        let l = if n.premises.is_empty() {
            Some(leaf_label(env, n))
        } else if n.rule == RuleId::Nlift {
            n.params.iter().find_map(|p| match p {
                Param::Label(l) => Some(l.clone()),
                _ => None,
            })
        } else {
            None
        };
        if let Some(l) = l {
            acc = lat.join(&acc, &l).expect("members");
        }
    });
    acc
}

/// Counts the lift nodes that are neither the root nor directly above a
/// leaf.
pub fn interior_lifts(root: &ProofNode) -> usize {
    let mut count = 0;
    for p in &root.premises {
        p.for_each(&mut |n| {
            if n.rule == RuleId::Nlift && n.premises.iter().any(|q| !q.premises.is_empty()) {
                count += 1;
            }
        });
    }
    count
}
