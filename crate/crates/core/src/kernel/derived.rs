//! Derived rules, built only from [`super::rules`].
//!
//! Most helpers here align their premises first: every premise is lifted to
//! the join of the premise labels and weakened to the union of the premise
//! contexts.

use crate::lattice::{Label, Scheme};
use crate::syntax::{logic, Term, Var};
use crate::theory::TheoryEnv;

use super::rules;
use super::thm::{Context, Thm};
use super::{KernelError, Result};

fn join_labels<'a>(env: &TheoryEnv, labels: impl IntoIterator<Item = &'a Label>) -> Result<Label> {
    Ok(env.lattice().join_all(labels)?)
}

fn lem_label(env: &TheoryEnv) -> Result<Label> {
    env.lattice()
        .scheme_label(Scheme::Lem)
        .ok_or(KernelError::UnboundScheme(Scheme::Lem))
}

/// Lifts every theorem to the join of their labels and weakens each to the
/// union of their contexts.
pub fn align(env: &TheoryEnv, ths: &[&Thm]) -> Result<Vec<Thm>> {
    let label = join_labels(env, ths.iter().map(|t| t.label()))?;
    let ctx = ths
        .iter()
        .fold(Context::empty(), |c, t| c.union(t.context()));
    ths.iter()
        .map(|t| {
            let t = rules::lift(env, t, &label)?;
            rules::weaken_to(env, &t, &ctx)
        })
        .collect()
}

/// Lifts each theorem to `label`, which must be above all of them.
fn lift_each(env: &TheoryEnv, ths: &[&Thm], label: &Label) -> Result<Vec<Thm>> {
    ths.iter().map(|t| rules::lift(env, t, label)).collect()
}

/// Proof by contradiction: from `Γ, ~φ |- False : ℓ` conclude `Γ |- φ : ℓ ⊔ C`,
/// where `C` is the label of excluded middle.
pub fn raa(env: &TheoryEnv, th: &Thm, phi: &Term) -> Result<Thm> {
    let neg = logic::mk_neg(phi.clone());
    let th = rules::weaken(env, th, &neg)?;
    let gamma = th.context().remove(&logic::normalize_iff(&neg));
    let label = join_labels(env, [th.label(), &lem_label(env)?])?;
    let lem = rules::scheme(env, Scheme::Lem, &gamma, phi)?;
    let yes = rules::assume(env, &gamma.insert(phi.clone()), phi)?;
    let no = rules::false_elim(env, &th, phi)?;
    let v = lift_each(env, &[&lem, &yes, &no], &label)?;
    rules::disj_elim(env, &v[0], &v[1], &v[2])
}

/// Case analysis on `φ` using excluded middle.
pub fn case_split(env: &TheoryEnv, phi: &Term, pos: &Thm, neg: &Thm) -> Result<Thm> {
    let nphi = logic::normalize_iff(&logic::mk_neg(phi.clone()));
    let phi = logic::normalize_iff(phi);
    let gamma = pos.context().remove(&phi).union(&neg.context().remove(&nphi));
    let label = join_labels(env, [pos.label(), neg.label(), &lem_label(env)?])?;
    let pos = rules::weaken_to(env, pos, &gamma.insert(phi.clone()))?;
    let neg = rules::weaken_to(env, neg, &gamma.insert(nphi))?;
    let lem = rules::scheme(env, Scheme::Lem, &gamma, &phi)?;
    let v = lift_each(env, &[&lem, &pos, &neg], &label)?;
    rules::disj_elim(env, &v[0], &v[1], &v[2])
}

/// From `Γ |- φ` and `Γ, φ |- ψ` conclude `Γ |- ψ`, at the join of the labels.
pub fn cut(env: &TheoryEnv, lemma: &Thm, main: &Thm) -> Result<Thm> {
    let phi = lemma.concl().clone();
    let main = rules::weaken(env, main, &phi)?;
    let imp = rules::imp_intro(env, &main, &phi)?;
    let v = align(env, &[&imp, lemma])?;
    rules::imp_elim(env, &v[0], &v[1])
}

/// Conjunction introduction at the join of the labels.
pub fn join_conj(env: &TheoryEnv, a: &Thm, b: &Thm) -> Result<Thm> {
    let v = align(env, &[a, b])?;
    rules::conj_intro(env, &v[0], &v[1])
}

/// Disjunction elimination with premises at different labels, concluding at
/// their join.
pub fn join_disj_elim(env: &TheoryEnv, d: &Thm, l: &Thm, r: &Thm) -> Result<Thm> {
    let (phi, psi) = logic::dest_disj(d.concl())
        .ok_or_else(|| KernelError::SideConditionViolated {
            rule: super::RuleId::NdisjE,
            reason: "first premise must be a disjunction".into(),
        })?;
    let gamma = d
        .context()
        .union(&l.context().remove(phi))
        .union(&r.context().remove(psi));
    let label = join_labels(env, [d.label(), l.label(), r.label()])?;
    let d2 = rules::weaken_to(env, d, &gamma)?;
    let l2 = rules::weaken_to(env, l, &gamma.insert(phi.clone()))?;
    let r2 = rules::weaken_to(env, r, &gamma.insert(psi.clone()))?;
    let v = lift_each(env, &[&d2, &l2, &r2], &label)?;
    rules::disj_elim(env, &v[0], &v[1], &v[2])
}

/// Modus ponens with alignment.
pub fn mp(env: &TheoryEnv, imp: &Thm, th: &Thm) -> Result<Thm> {
    let v = align(env, &[imp, th])?;
    rules::imp_elim(env, &v[0], &v[1])
}

/// From `Γ |- φ <-> ψ` and `Δ |- φ` conclude `ψ`.
pub fn eq_mp(env: &TheoryEnv, iff: &Thm, th: &Thm) -> Result<Thm> {
    let v = align(env, &[iff, th])?;
    rules::iff_elim1(env, &v[0], &v[1])
}

/// Transitivity with alignment.
pub fn trans(env: &TheoryEnv, a: &Thm, b: &Thm) -> Result<Thm> {
    let v = align(env, &[a, b])?;
    rules::trans(env, &v[0], &v[1])
}

/// Congruence with alignment.
pub fn cong(env: &TheoryEnv, fg: &Thm, rs: &Thm) -> Result<Thm> {
    let v = align(env, &[fg, rs])?;
    rules::cong(env, &v[0], &v[1])
}

/// `Γ |- r = s` gives `Γ |- f r = f s`.
pub fn ap_term(env: &TheoryEnv, f: &Term, th: &Thm) -> Result<Thm> {
    let rf = rules::refl(env, th.context(), f)?;
    cong(env, &rf, th)
}

/// `Γ |- f = g` gives `Γ |- f x = g x`.
pub fn ap_thm(env: &TheoryEnv, th: &Thm, x: &Term) -> Result<Thm> {
    let rx = rules::refl(env, th.context(), x)?;
    cong(env, th, &rx)
}

/// `refl` at the bottom label in the given context, lifted to `label`.
pub fn refl_at(env: &TheoryEnv, ctx: &Context, t: &Term, label: &Label) -> Result<Thm> {
    let r = rules::refl(env, ctx, t)?;
    rules::lift(env, &r, label)
}

/// Extensionality: from `Γ |- f x = g x` with `x` not free in `Γ`, `f`, `g`,
/// conclude `Γ |- f = g`.
pub fn ext(env: &TheoryEnv, th: &Thm, x: &Var) -> Result<Thm> {
    let bad = |reason: &str| KernelError::SideConditionViolated {
        rule: super::RuleId::Nlcong,
        reason: reason.into(),
    };
    let (lhs, rhs) = logic::dest_eq(th.concl()).ok_or_else(|| bad("not an equation"))?;
    let applied = |t: &Term| {
        matches!(t, Term::App(_, a) if matches!(&**a, Term::Var(n, ty) if *n == x.0 && *ty == x.1))
    };
    if !applied(lhs) || !applied(rhs) {
        return Err(bad("both sides must be applications to the variable"));
    }
    let abs = rules::abs(env, th, x)?;
    let ctx = th.context();
    let eta_f = rules::lift(env, &rules::eta(env, ctx, &Term::abs(x, lhs.clone()))?, th.label())?;
    let eta_g = rules::lift(env, &rules::eta(env, ctx, &Term::abs(x, rhs.clone()))?, th.label())?;
    let left = rules::trans(env, &rules::sym(env, &eta_f)?, &abs)?;
    rules::trans(env, &left, &eta_g)
}

/// `Γ |- φ <-> ψ` from `Γ, φ |- ψ` and `Γ, ψ |- φ`, aligning labels and contexts.
pub fn iff_intro(env: &TheoryEnv, to: &Thm, from: &Thm) -> Result<Thm> {
    let (psi, phi) = (to.concl().clone(), from.concl().clone());
    let gamma = to
        .context()
        .remove(&phi)
        .union(&from.context().remove(&psi));
    let label = join_labels(env, [to.label(), from.label()])?;
    let a = rules::weaken_to(env, to, &gamma.insert(phi.clone()))?;
    let b = rules::weaken_to(env, from, &gamma.insert(psi.clone()))?;
    let v = lift_each(env, &[&b, &a], &label)?;
    rules::iff_intro(env, &gamma, &v[0], &v[1])
}
