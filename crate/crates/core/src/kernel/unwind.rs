//! Proof transformations over recorded derivations.

use std::collections::HashMap;
use std::sync::Arc;

use crate::lattice::{Label, Scheme};
use crate::syntax::{logic, name, Term, Type};
use crate::theory::TheoryEnv;

use super::rules::{self, apply_rule};
use super::thm::{Param, ProofNode, RuleId, Thm};
use super::{KernelError, Result};

/// `forall p:Prop. p \/ ~p`.
pub fn excluded_middle() -> Term {
    let p = (name("p"), Type::prop());
    let pt = Term::from_var(&p);
    logic::mk_forall(&p, logic::mk_disj(pt.clone(), logic::mk_neg(pt)))
}

fn uses_choice(node: &ProofNode) -> bool {
    let mut found = false;
    node.for_each(&mut |n| found |= n.rule == RuleId::Scheme(Scheme::Choice));
    found
}

/// Turns `Γ |- ψ : ℓ`, with `ℓ` at most the label of excluded middle, into
/// `Γ |- (forall p. p \/ ~p) --> ψ` at the bottom label.
///
/// Every use of excluded middle becomes an instance of the new hypothesis
/// and every lift disappears; the result is rebuilt through the kernel.
pub fn unwind_classical(env: &TheoryEnv, th: &Thm) -> Result<Thm> {
    let lat = env.lattice();
    if uses_choice(th.proof()) {
        return Err(KernelError::PolymorphicAxiomInProof(
            "the choice scheme quantifies over types and has no single propositional instance"
                .into(),
        ));
    }
    let lem = lat
        .scheme_label(Scheme::Lem)
        .ok_or(KernelError::UnboundScheme(Scheme::Lem))?;
    if !lat.leq(th.label(), &lem)? {
        return Err(KernelError::LabelOutOfRange(format!(
            "{} is not below the excluded-middle label {lem}",
            th.label()
        )));
    }
    let h = excluded_middle();
    let mut memo = HashMap::new();
    let body = unwind_node(env, th.proof(), &h, &mut memo)?;
    let imp = rules::imp_intro(env, &body, &h)?;
    if th.context().contains(&h) {
        return rules::weaken(env, &imp, &h);
    }
    Ok(imp)
}

fn unwind_node(
    env: &TheoryEnv,
    node: &Arc<ProofNode>,
    h: &Term,
    memo: &mut HashMap<*const ProofNode, Thm>,
) -> Result<Thm> {
    let key = Arc::as_ptr(node);
    if let Some(t) = memo.get(&key) {
        return Ok(t.clone());
    }
    let bottom = env.lattice().bottom();
    let out = match &node.rule {
        RuleId::Nlift => unwind_node(env, &node.premises[0], h, memo)?,
        RuleId::Scheme(Scheme::Lem) => {
            let (Some(Param::Ctx(c)), Some(Param::Term(phi))) = (node.params.first(), node.params.get(1))
            else {
                return Err(KernelError::BadParams {
                    rule: node.rule.clone(),
                    reason: "expected a context and a formula".into(),
                });
            };
            let hyp = rules::assume(env, &c.insert(h.clone()), h)?;
            rules::all_elim(env, &hyp, phi)?
        }
        RuleId::Scheme(s) => {
            return Err(KernelError::LabelOutOfRange(format!(
                "the proof uses {s}, which excluded middle does not replace"
            )))
        }
        RuleId::Axiom(_) | RuleId::Def(_) | RuleId::TypedefLaw(..) => {
            let ax = rules::axiom(env, &node.rule)?;
            if *ax.label() != bottom {
                return Err(KernelError::LabelOutOfRange(format!(
                    "{} holds only at {}",
                    node.rule,
                    ax.label()
                )));
            }
            rules::weaken(env, &ax, h)?
        }
        rule => {
            let mut prems = Vec::with_capacity(node.premises.len());
            for p in &node.premises {
                prems.push(unwind_node(env, p, h, memo)?);
            }
            let params: Vec<Param> = node
                .params
                .iter()
                .map(|p| match p {
                    Param::Ctx(c) => Param::Ctx(c.insert(h.clone())),
                    other => other.clone(),
                })
                .collect();
            let t = apply_rule(env, rule, &prems, &params)?;
            rules::weaken(env, &t, h)?
        }
    };
    memo.insert(key, out.clone());
    Ok(out)
}

/// Rebuilds a derivation with every lift moved out of the interior: leaves
/// are lifted to the join of all leaf labels and a single lift at the root
/// restores the original label.
///
/// The result proves the same judgement.
pub fn normalize_lifts(env: &TheoryEnv, th: &Thm) -> Result<Thm> {
    let lat = env.lattice();
    let mut leaf_labels: Vec<Label> = Vec::new();
    let mut leaf_memo = HashMap::new();
    collect_leaf_labels(env, th.proof(), &mut leaf_labels, &mut leaf_memo)?;
    let join = lat.join_all(leaf_labels.iter())?;
    let mut memo = HashMap::new();
    let body = relabel(env, th.proof(), &join, &mut memo)?;
    rules::lift(env, &body, th.label())
}

fn collect_leaf_labels(
    env: &TheoryEnv,
    node: &Arc<ProofNode>,
    out: &mut Vec<Label>,
    seen: &mut HashMap<*const ProofNode, ()>,
) -> Result<()> {
    if seen.insert(Arc::as_ptr(node), ()).is_some() {
        return Ok(());
    }
    if node.rule.is_leaf() {
        out.push(apply_rule(env, &node.rule, &[], &node.params)?.label().clone());
    }
    for p in &node.premises {
        collect_leaf_labels(env, p, out, seen)?;
    }
    Ok(())
}

fn relabel(
    env: &TheoryEnv,
    node: &Arc<ProofNode>,
    label: &Label,
    memo: &mut HashMap<*const ProofNode, Thm>,
) -> Result<Thm> {
    let key = Arc::as_ptr(node);
    if let Some(t) = memo.get(&key) {
        return Ok(t.clone());
    }
    let out = if node.rule == RuleId::Nlift {
        relabel(env, &node.premises[0], label, memo)?
    } else if node.rule.is_leaf() {
        let t = apply_rule(env, &node.rule, &[], &node.params)?;
        rules::lift(env, &t, label)?
    } else {
        let mut prems = Vec::with_capacity(node.premises.len());
        for p in &node.premises {
            prems.push(relabel(env, p, label, memo)?);
        }
        apply_rule(env, &node.rule, &prems, &node.params)?
    };
    memo.insert(key, out.clone());
    Ok(out)
}
