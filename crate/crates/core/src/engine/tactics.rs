//! Basic tactics: each reads one goal backwards through a kernel rule or a
//! derived rule and returns the subgoals with a justification.
//!
//! Side conditions are checked here, when the tactic is applied, so that a
//! tactic either fails immediately or yields subgoals whose theorems are
//! guaranteed to assemble.

use std::collections::BTreeSet;

use crate::frontend::TermParser;
use crate::kernel::{conv, derived, rules, KernelError, Thm};
use crate::lattice::{Label, Scheme};
use crate::syntax::logic::*;
use crate::syntax::term::variant;
use crate::syntax::{infer_type, Name, Term, Type, Var};
use crate::theory::TheoryEnv;

use super::goal::{Goal, Step};
use super::tactic::{Fact, Tactic};
use super::{fails, EngineError, Result};

fn parse_many(env: &TheoryEnv, goal: &Goal, texts: &[(&str, Option<&Type>)]) -> Result<Vec<Term>> {
    let mut vars: BTreeSet<Var> = goal.ctx.fv();
    vars.extend(goal.concl.fv());
    let mut p = TermParser::new(env.signature()).with_free(vars);
    let mut out = Vec::new();
    for (text, ty) in texts {
        out.push(p.parse_text(text, *ty)?);
    }
    Ok(p.finish(out)?)
}

fn parse_in(env: &TheoryEnv, goal: &Goal, text: &str, ty: Option<&Type>) -> Result<Term> {
    Ok(parse_many(env, goal, &[(text, ty)])?.remove(0))
}

fn parse_prop(env: &TheoryEnv, goal: &Goal, text: &str) -> Result<Term> {
    parse_in(env, goal, text, Some(&Type::prop()))
}

/// Names free anywhere in the goal.
fn used_names(goal: &Goal) -> BTreeSet<Name> {
    goal.ctx
        .fv()
        .into_iter()
        .chain(goal.concl.fv())
        .map(|(n, _)| n)
        .collect()
}

fn fresh_var(goal: &Goal, base: &str, ty: &Type, extra: &[&Term]) -> Var {
    let mut avoid = used_names(goal);
    for t in extra {
        avoid.extend(t.fv().into_iter().map(|(n, _)| n));
    }
    (variant(base, &avoid), ty.clone())
}

/// Fails unless a scheme is available at or below the goal's label.
pub(crate) fn scheme_below(env: &TheoryEnv, s: Scheme, label: &Label) -> Result<Label> {
    let l = env
        .lattice()
        .scheme_label(s)
        .ok_or(KernelError::UnboundScheme(s))?;
    if !env.lattice().leq(&l, label)? {
        return Err(KernelError::NotAbove {
            from: l,
            to: label.clone(),
        }
        .into());
    }
    Ok(l)
}

fn below(env: &TheoryEnv, th: &Thm, label: &Label) -> Result<()> {
    if !env.lattice().leq(th.label(), label)? {
        return Err(KernelError::NotAbove {
            from: th.label().clone(),
            to: label.clone(),
        }
        .into());
    }
    Ok(())
}

fn eq_sides(t: &Term) -> Result<(Term, Term)> {
    dest_eq(t)
        .map(|(a, b)| (a.clone(), b.clone()))
        .ok_or_else(|| fails(format!("{t} is not an equation")))
}

/// Replaces the goal by the right side of `eq : Γ |- concl <-> concl'`.
fn convert(env: &TheoryEnv, goal: &Goal, eq: Thm) -> Result<Step> {
    below(env, &eq, &goal.label)?;
    let (_, rhs) = eq_sides(eq.concl())?;
    if rhs == goal.concl {
        return Err(fails("no progress"));
    }
    Ok(Step::new(vec![goal.with(rhs)], move |env, ths| {
        let v = derived::align(env, &[&eq, &ths[0]])?;
        rules::iff_elim2(env, &v[0], &v[1])
    }))
}

fn fact_thm(env: &TheoryEnv, goal: &Goal, fact: &Fact) -> Result<Thm> {
    match fact {
        Fact::Named(n) => env
            .lookup_fact(n)
            .cloned()
            .ok_or_else(|| fails(format!("no theorem or axiom named {n}"))),
        Fact::Hyp(text) => {
            let phi = parse_prop(env, goal, text)?;
            if !goal.ctx.contains_normalized(&phi) {
                return Err(fails(format!("{phi} is not a hypothesis")));
            }
            Ok(rules::assume(env, &goal.ctx, &phi)?)
        }
    }
}

/// Instantiates `∀xs. body` so that `concl(body)` matches `target`, where
/// `concl` strips `skip` implications. Returns the instantiated theorem.
fn instantiate_to(env: &TheoryEnv, th: &Thm, skip: usize, target: &Term) -> Result<Option<Thm>> {
    let (vars, body) = conv::strip_forall(th.concl());
    let mut c = &body;
    for _ in 0..skip {
        match dest_imp(c) {
            Some((_, r)) => c = r,
            None => return Ok(None),
        }
    }
    let pvars: BTreeSet<Var> = vars.iter().cloned().collect();
    let (mut ts, mut tys) = (Vec::new(), Vec::new());
    if !conv::match_term(c, target, &pvars, &mut ts, &mut tys) {
        return Ok(None);
    }
    let mut inst = conv::inst_types(env, th, &tys)?;
    for v in &vars {
        let w = (v.0.clone(), v.1.subst_many(&tys));
        let r = match ts.iter().find(|(pv, _)| pv == v) {
            Some((_, r)) => r.clone(),
            None if !body.has_free(&v.0, &v.1) => Term::from_var(&w),
            None => {
                return Err(fails(format!("cannot infer an instance for {}", v.0)));
            }
        };
        inst = rules::all_elim(env, &inst, &r)?;
    }
    Ok(Some(inst))
}

fn count_imps(t: &Term) -> usize {
    let (_, body) = conv::strip_forall(t);
    let mut n = 0;
    let mut c = &body;
    while let Some((_, r)) = dest_imp(c) {
        n += 1;
        c = r;
    }
    n
}

/// Replaces occurrences of `r` in `t` by `x`, except where a binder captures
/// a free variable of `r`.
fn abstract_term(t: &Term, r: &Term, x: &Var) -> Term {
    if t == r {
        return Term::from_var(x);
    }
    match t {
        Term::App(f, a) => Term::app(abstract_term(f, r, x), abstract_term(a, r, x)),
        Term::Lam(y, ty, b) if !r.has_free(y, ty) && !(y == &x.0 && ty == &x.1) => {
            Term::lam(&**y, ty.clone(), abstract_term(b, r, x))
        }
        _ => t.clone(),
    }
}

fn dest_choice(t: &Term) -> Option<Term> {
    let (lhs, _) = dest_imp(t)?;
    let (x, inner) = dest_forall(lhs)?;
    let (y, app) = dest_exists(inner)?;
    let Term::App(px, ya) = app else { return None };
    let Term::App(p, xa) = &**px else { return None };
    let is = |t: &Term, v: &Var| matches!(t, Term::Var(n, ty) if *n == v.0 && *ty == v.1);
    if !is(xa, &x) || !is(ya, &y) || p.has_free(&x.0, &x.1) || p.has_free(&y.0, &y.1) {
        return None;
    }
    Some((**p).clone())
}

fn scheme_step(env: &TheoryEnv, goal: &Goal, s: Scheme, t: &Term) -> Result<Step> {
    scheme_below(env, s, &goal.label)?;
    let th = rules::scheme(env, s, &goal.ctx, t)?;
    if *th.concl() != goal.concl {
        return Err(fails(format!("goal is not an instance of {s}")));
    }
    Ok(Step::done(th))
}

pub(crate) fn basic(env: &TheoryEnv, goal: &Goal, tac: &Tactic) -> Result<Step> {
    let g = goal.clone();
    let concl = goal.concl.clone();
    match tac {
        Tactic::Assumption => {
            if !goal.ctx.contains(&concl) {
                return Err(fails("goal is not a hypothesis"));
            }
            Ok(Step::done(rules::assume(env, &goal.ctx, &concl)?))
        }
        Tactic::Intro(name) => {
            if let Some((phi, psi)) = dest_imp(&concl) {
                let phi = phi.clone();
                return Ok(Step::new(vec![g.assuming(phi.clone(), psi.clone())], move |env, ths| {
                    rules::imp_intro(env, &rules::weaken(env, &ths[0], &phi)?, &phi)
                }));
            }
            if let Some(phi) = dest_neg(&concl) {
                let phi = phi.clone();
                return Ok(Step::new(vec![g.assuming(phi.clone(), falsity())], move |env, ths| {
                    rules::neg_intro(env, &rules::weaken(env, &ths[0], &phi)?, &phi)
                }));
            }
            if let Some((x, body)) = dest_forall(&concl) {
                let base = name.as_deref().unwrap_or(&x.0);
                let y: Var = if name.is_none() && !goal.ctx.has_free(&x.0, &x.1) {
                    x.clone()
                } else {
                    let mut all = used_names(goal);
                    all.extend(body.fv().into_iter().filter(|v| *v != x).map(|(n, _)| n));
                    (variant(base, &all), x.1.clone())
                };
                let sub = body.subst(&x, &Term::from_var(&y));
                return Ok(Step::new(vec![g.with(sub)], move |env, ths| {
                    rules::all_intro(env, &ths[0], &y)
                }));
            }
            Err(fails("nothing to introduce"))
        }
        Tactic::Conj => {
            let (a, b) = dest_conj(&concl).ok_or_else(|| fails("goal is not a conjunction"))?;
            Ok(Step::new(vec![g.with(a.clone()), g.with(b.clone())], |env, ths| {
                rules::conj_intro(env, &ths[0], &ths[1])
            }))
        }
        Tactic::Iff => {
            let (a, b) = dest_iff(&concl).ok_or_else(|| fails("goal is not an equivalence"))?;
            let ctx = goal.ctx.clone();
            Ok(Step::new(
                vec![g.assuming(a.clone(), b.clone()), g.assuming(b.clone(), a.clone())],
                move |env, ths| rules::iff_intro(env, &ctx, &ths[1], &ths[0]),
            ))
        }
        Tactic::Left | Tactic::Right => {
            let (a, b) = dest_disj(&concl).ok_or_else(|| fails("goal is not a disjunction"))?;
            let (a, b) = (a.clone(), b.clone());
            if *tac == Tactic::Left {
                Ok(Step::new(vec![g.with(a)], move |env, ths| {
                    rules::disj_intro1(env, &ths[0], &b)
                }))
            } else {
                Ok(Step::new(vec![g.with(b)], move |env, ths| {
                    rules::disj_intro2(env, &ths[0], &a)
                }))
            }
        }
        Tactic::Exists(text) => {
            let (x, body) = dest_exists(&concl).ok_or_else(|| fails("goal is not existential"))?;
            let r = parse_in(env, goal, text, Some(&x.1))?;
            let sub = body.subst(&x, &r);
            Ok(Step::new(vec![g.with(sub)], move |env, ths| {
                rules::ex_intro(env, &ths[0], &concl, &r)
            }))
        }
        Tactic::Trivial => {
            if concl != truth() {
                return Err(fails("goal is not True"));
            }
            Ok(Step::done(rules::true_intro(env, &goal.ctx)?))
        }
        Tactic::FalseElim => Ok(Step::new(vec![g.with(falsity())], move |env, ths| {
            rules::false_elim(env, &ths[0], &concl)
        })),
        Tactic::Mp(text) => {
            let phi = parse_prop(env, goal, text)?;
            let imp = mk_imp(phi.clone(), concl);
            Ok(Step::new(vec![g.with(imp), g.with(phi)], |env, ths| {
                rules::imp_elim(env, &ths[0], &ths[1])
            }))
        }
        Tactic::NegElim(text) => {
            if concl != falsity() {
                return Err(fails("goal is not False"));
            }
            let phi = parse_prop(env, goal, text)?;
            let neg = mk_neg(phi.clone());
            Ok(Step::new(vec![g.with(phi), g.with(neg)], |env, ths| {
                rules::neg_elim(env, &ths[0], &ths[1])
            }))
        }
        Tactic::Cases(text) => {
            let d = parse_prop(env, goal, text)?;
            let (a, b) = dest_disj(&d).ok_or_else(|| fails(format!("{d} is not a disjunction")))?;
            let goals = vec![
                g.with(d.clone()),
                g.assuming(a.clone(), concl.clone()),
                g.assuming(b.clone(), concl),
            ];
            Ok(Step::new(goals, |env, ths| {
                rules::disj_elim(env, &ths[0], &ths[1], &ths[2])
            }))
        }
        Tactic::ConjElim1(text) => {
            let psi = parse_prop(env, goal, text)?;
            Ok(Step::new(vec![g.with(mk_conj(concl, psi))], |env, ths| {
                rules::conj_elim1(env, &ths[0])
            }))
        }
        Tactic::ConjElim2(text) => {
            let phi = parse_prop(env, goal, text)?;
            Ok(Step::new(vec![g.with(mk_conj(phi, concl))], |env, ths| {
                rules::conj_elim2(env, &ths[0])
            }))
        }
        Tactic::Spec(all, r) => {
            let a = parse_prop(env, goal, all)?;
            let (x, _) = dest_forall(&a).ok_or_else(|| fails(format!("{a} is not universal")))?;
            let ts = parse_many(env, goal, &[(all, Some(&Type::prop())), (r, Some(&x.1))])?;
            let (a, r) = (ts[0].clone(), ts[1].clone());
            let (x, body) = dest_forall(&a).expect("parsed as universal");
            if normalize_iff(&body.subst(&x, &r)) != concl {
                return Err(fails(format!("instantiating {a} with {r} does not give the goal")));
            }
            Ok(Step::new(vec![g.with(a)], move |env, ths| {
                rules::all_elim(env, &ths[0], &r)
            }))
        }
        Tactic::Choose(ex, y) => {
            let e = parse_prop(env, goal, ex)?;
            let (x, body) = dest_exists(&e).ok_or_else(|| fails(format!("{e} is not existential")))?;
            let yv: Var = (crate::syntax::name(y), x.1.clone());
            if goal.ctx.has_free(&yv.0, &yv.1) || concl.has_free(&yv.0, &yv.1) || e.has_free(&yv.0, &yv.1) {
                return Err(fails(format!("{y} is not fresh")));
            }
            let inst = body.subst(&x, &Term::from_var(&yv));
            Ok(Step::new(vec![g.with(e), g.assuming(inst, concl)], move |env, ths| {
                rules::ex_elim(env, &ths[0], &ths[1], &yv)
            }))
        }
        Tactic::EqMp(text) => {
            let phi = parse_prop(env, goal, text)?;
            let iff = mk_iff(phi.clone(), concl);
            Ok(Step::new(vec![g.with(iff), g.with(phi)], |env, ths| {
                rules::iff_elim1(env, &ths[0], &ths[1])
            }))
        }
        Tactic::Refl => {
            let (a, b) = eq_sides(&concl)?;
            if a != b {
                return Err(fails("sides differ"));
            }
            Ok(Step::done(rules::refl(env, &goal.ctx, &a)?))
        }
        Tactic::Sym => {
            let (a, b) = eq_sides(&concl)?;
            Ok(Step::new(vec![g.with(mk_eq(b, a))], |env, ths| rules::sym(env, &ths[0])))
        }
        Tactic::Trans(text) => {
            let (a, b) = eq_sides(&concl)?;
            let ty = infer_type(&a).expect("well-typed goal");
            let m = parse_in(env, goal, text, Some(&ty))?;
            Ok(Step::new(vec![g.with(mk_eq(a, m.clone())), g.with(mk_eq(m, b))], |env, ths| {
                rules::trans(env, &ths[0], &ths[1])
            }))
        }
        Tactic::Ap => {
            let (l, r) = eq_sides(&concl)?;
            let (Term::App(f, a), Term::App(h, b)) = (&l, &r) else {
                return Err(fails("both sides must be applications"));
            };
            if infer_type(a) != infer_type(b) {
                return Err(fails("arguments have different types"));
            }
            let goals = vec![
                g.with(mk_eq((**f).clone(), (**h).clone())),
                g.with(mk_eq((**a).clone(), (**b).clone())),
            ];
            Ok(Step::new(goals, |env, ths| rules::cong(env, &ths[0], &ths[1])))
        }
        Tactic::Abs => {
            let (l, r) = eq_sides(&concl)?;
            let (Term::Lam(x, xt, s), Term::Lam(y, yt, t)) = (&l, &r) else {
                return Err(fails("both sides must be abstractions"));
            };
            if xt != yt {
                return Err(fails("binders have different types"));
            }
            let z = if x == y && !goal.ctx.has_free(x, xt) {
                (x.clone(), xt.clone())
            } else {
                fresh_var(goal, x, xt, &[s, t])
            };
            let zt = Term::from_var(&z);
            let s2 = s.subst(&(x.clone(), xt.clone()), &zt);
            let t2 = t.subst(&(y.clone(), yt.clone()), &zt);
            Ok(Step::new(vec![g.with(mk_eq(s2, t2))], move |env, ths| {
                rules::abs(env, &ths[0], &z)
            }))
        }
        Tactic::Ext(name) => {
            let (f, h) = eq_sides(&concl)?;
            let ty = infer_type(&f).expect("well-typed goal");
            let (dom, _) = ty
                .dest_fun()
                .ok_or_else(|| fails("sides are not functions"))?;
            let x = fresh_var(goal, name.as_deref().unwrap_or("x"), dom, &[]);
            let xt = Term::from_var(&x);
            let sub = mk_eq(Term::app(f, xt.clone()), Term::app(h, xt));
            Ok(Step::new(vec![g.with(sub)], move |env, ths| derived::ext(env, &ths[0], &x)))
        }
        Tactic::Beta => match conv::beta_norm(env, &goal.ctx, &concl)? {
            Some(eq) => convert(env, goal, eq),
            None => Err(fails("no beta-redex")),
        },
        Tactic::Unfold(cs) => {
            let names: Vec<Name> = cs.iter().map(crate::syntax::name).collect();
            for c in &names {
                if env.definition(c).is_none() {
                    return Err(fails(format!("{c} is not a defined constant")));
                }
            }
            match conv::unfold(env, &goal.ctx, &concl, &names)? {
                Some(eq) => convert(env, goal, eq),
                None => Err(fails("nothing to unfold")),
            }
        }
        Tactic::Change(text) => {
            let phi = parse_prop(env, goal, text)?;
            if phi == concl {
                return Err(fails("no progress"));
            }
            match conv::convertible(env, &goal.ctx, &concl, &phi)? {
                Some(eq) => convert(env, goal, eq),
                None => Err(fails(format!("{phi} is not convertible with the goal"))),
            }
        }
        Tactic::Rewrite(fact, rev) => {
            let th = fact_thm(env, goal, fact)?;
            below(env, &th, &goal.label)?;
            match conv::rewrite_with(env, &goal.ctx, &th, &concl, *rev)? {
                Some(eq) => convert(env, goal, eq),
                None => Err(fails(format!("{fact} does not match the goal"))),
            }
        }
        Tactic::Exact(fact) => {
            let th = fact_thm(env, goal, fact)?;
            below(env, &th, &goal.label)?;
            if !th.context().is_subset(&goal.ctx) {
                return Err(fails("fact has hypotheses outside the goal"));
            }
            let inst = match instantiate_to(env, &th, 0, &concl)? {
                Some(t) if *t.concl() == concl => t,
                _ => return Err(fails(format!("{fact} does not match the goal"))),
            };
            Ok(Step::done(rules::weaken_to(env, &inst, &goal.ctx)?))
        }
        Tactic::Apply(fact) => {
            let th = fact_thm(env, goal, fact)?;
            below(env, &th, &goal.label)?;
            if !th.context().is_subset(&goal.ctx) {
                return Err(fails("fact has hypotheses outside the goal"));
            }
            for k in (0..=count_imps(th.concl())).rev() {
                let Some(inst) = instantiate_to(env, &th, k, &concl)? else {
                    continue;
                };
                let mut hyps = Vec::new();
                let mut c = inst.concl().clone();
                for _ in 0..k {
                    let (h, r) = dest_imp(&c).expect("counted implications");
                    hyps.push(h.clone());
                    c = r.clone();
                }
                if c != concl {
                    continue;
                }
                let inst = rules::weaken_to(env, &inst, &goal.ctx)?;
                let goals = hyps.into_iter().map(|h| g.with(h)).collect();
                return Ok(Step::new(goals, move |env, ths| {
                    ths.iter().try_fold(inst.clone(), |acc, t| derived::mp(env, &acc, t))
                }));
            }
            Err(fails(format!("{fact} does not match the goal")))
        }
        Tactic::Generalize(text, x) => {
            let r = parse_in(env, goal, text, None)?;
            let ty = infer_type(&r).expect("parsed terms are typed");
            let xv: Var = (crate::syntax::name(x), ty);
            if goal.ctx.has_free(&xv.0, &xv.1) || concl.has_free(&xv.0, &xv.1) {
                return Err(fails(format!("{x} is not fresh")));
            }
            let phi = abstract_term(&concl, &r, &xv);
            if phi == concl || normalize_iff(&phi.subst(&xv, &r)) != concl {
                return Err(fails(format!("cannot generalize {r}")));
            }
            Ok(Step::new(vec![g.with(phi)], move |env, ths| {
                rules::subst(env, &ths[0], &xv, &r)
            }))
        }
        Tactic::Clear(text) => {
            let h = parse_prop(env, goal, text)?;
            if !goal.ctx.contains(&h) {
                return Err(fails(format!("{h} is not a hypothesis")));
            }
            let smaller = Goal::new(goal.ctx.remove(&h), concl, goal.label.clone());
            Ok(Step::new(vec![smaller], |_, ths| Ok(ths[0].clone())))
        }
        Tactic::Lem => {
            let (a, b) = dest_disj(&concl).ok_or_else(|| fails("goal is not p \\/ ~p"))?;
            if dest_neg(b) != Some(a) {
                return Err(fails("goal is not p \\/ ~p"));
            }
            scheme_step(env, goal, Scheme::Lem, a)
        }
        Tactic::Wem => {
            let (a, _) = dest_disj(&concl).ok_or_else(|| fails("goal is not ~p \\/ ~~p"))?;
            let p = dest_neg(a).ok_or_else(|| fails("goal is not ~p \\/ ~~p"))?;
            scheme_step(env, goal, Scheme::Wem, p)
        }
        Tactic::Choice => {
            let p = dest_choice(&concl).ok_or_else(|| fails("goal is not an instance of choice"))?;
            scheme_step(env, goal, Scheme::Choice, &p)
        }
    }
}

pub(crate) fn lift_to(env: &TheoryEnv, goal: &Goal, target: &str) -> Result<Step> {
    let to = env.lattice().label(target)?;
    if !env.lattice().leq(&to, &goal.label)? {
        return Err(EngineError::NotBelow {
            from: goal.label.clone(),
            to,
        });
    }
    let lower = Goal::new(goal.ctx.clone(), goal.concl.clone(), to);
    Ok(Step::new(vec![lower], |_, ths| Ok(ths[0].clone())))
}

pub(crate) fn raa(env: &TheoryEnv, goal: &Goal) -> Result<Step> {
    scheme_below(env, Scheme::Lem, &goal.label)?;
    let phi = goal.concl.clone();
    let sub = goal.assuming(mk_neg(phi.clone()), falsity());
    Ok(Step::new(vec![sub], move |env, ths| derived::raa(env, &ths[0], &phi)))
}

pub(crate) fn case_split(env: &TheoryEnv, goal: &Goal, text: &str) -> Result<Step> {
    scheme_below(env, Scheme::Lem, &goal.label)?;
    let phi = parse_prop(env, goal, text)?;
    let goals = vec![
        goal.assuming(phi.clone(), goal.concl.clone()),
        goal.assuming(mk_neg(phi.clone()), goal.concl.clone()),
    ];
    Ok(Step::new(goals, move |env, ths| {
        derived::case_split(env, &phi, &ths[0], &ths[1])
    }))
}

pub(crate) fn cut(env: &TheoryEnv, goal: &Goal, text: &str) -> Result<Step> {
    let phi = parse_prop(env, goal, text)?;
    let goals = vec![goal.with(phi.clone()), goal.assuming(phi, goal.concl.clone())];
    Ok(Step::new(goals, |env, ths| derived::cut(env, &ths[0], &ths[1])))
}
