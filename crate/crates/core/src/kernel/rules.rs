//! The inference rules.
//!
//! [`apply_rule`] is the single entry point that checks a rule instance and
//! produces a [`Thm`]. The named functions below are thin wrappers that
//! assemble parameters for it.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::lattice::{Label, Scheme};
use crate::syntax::logic::{self, normalize_iff};
use crate::syntax::term::variant;
use crate::syntax::{kind_of, name, type_of, Kind, Name, Term, Type, Var};
use crate::theory::TheoryEnv;

use super::thm::{Context, Param, ProofNode, RuleId, Thm};
use super::{KernelError, Result};

fn side(rule: &RuleId, reason: impl Into<String>) -> KernelError {
    KernelError::SideConditionViolated {
        rule: rule.clone(),
        reason: reason.into(),
    }
}

fn bad(rule: &RuleId, reason: impl Into<String>) -> KernelError {
    KernelError::BadParams {
        rule: rule.clone(),
        reason: reason.into(),
    }
}

struct Check<'a> {
    env: &'a TheoryEnv,
    rule: &'a RuleId,
    params: &'a [Param],
}

impl Check<'_> {
    fn typ(&self, t: &Term) -> Result<Type> {
        type_of(self.env.signature(), t).map_err(|source| KernelError::TypeError {
            rule: self.rule.clone(),
            source,
        })
    }

    fn prop(&self, t: &Term) -> Result<()> {
        let ty = self.typ(t)?;
        if !ty.is_prop() {
            return Err(side(self.rule, format!("{t} has type {ty}, not Prop")));
        }
        Ok(())
    }

    fn star(&self, ty: &Type) -> Result<()> {
        match kind_of(self.env.signature(), ty) {
            Ok(Kind::STAR) => Ok(()),
            Ok(k) => Err(side(self.rule, format!("{ty} has kind {k}, expected *"))),
            Err(source) => Err(KernelError::TypeError {
                rule: self.rule.clone(),
                source,
            }),
        }
    }

    fn ctx_ok(&self, c: &Context) -> Result<()> {
        c.iter().try_for_each(|t| self.prop(t))
    }

    fn param(&self, i: usize) -> Result<&Param> {
        self.params
            .get(i)
            .ok_or_else(|| bad(self.rule, format!("missing parameter {i}")))
    }

    fn ctx(&self, i: usize) -> Result<Context> {
        match self.param(i)? {
            Param::Ctx(c) => {
                self.ctx_ok(c)?;
                Ok(c.clone())
            }
            _ => Err(bad(self.rule, format!("parameter {i} must be a context"))),
        }
    }

    fn term(&self, i: usize) -> Result<Term> {
        match self.param(i)? {
            Param::Term(t) => Ok(t.clone()),
            _ => Err(bad(self.rule, format!("parameter {i} must be a term"))),
        }
    }

    fn var(&self, i: usize) -> Result<Var> {
        match self.param(i)? {
            Param::Var(v) => {
                self.star(&v.1)?;
                Ok(v.clone())
            }
            _ => Err(bad(self.rule, format!("parameter {i} must be a variable"))),
        }
    }

    fn ty(&self, i: usize) -> Result<Type> {
        match self.param(i)? {
            Param::Type(t) => Ok(t.clone()),
            _ => Err(bad(self.rule, format!("parameter {i} must be a type"))),
        }
    }

    fn tyvar(&self, i: usize) -> Result<Name> {
        match self.param(i)? {
            Param::TyVar(v) => Ok(v.clone()),
            _ => Err(bad(self.rule, format!("parameter {i} must be a type variable"))),
        }
    }

    fn label(&self, i: usize) -> Result<Label> {
        match self.param(i)? {
            Param::Label(l) => Ok(l.clone()),
            _ => Err(bad(self.rule, format!("parameter {i} must be a label"))),
        }
    }

    fn same_label(&self, a: &Thm, b: &Thm) -> Result<Label> {
        if a.label != b.label {
            return Err(KernelError::LabelMismatch {
                rule: self.rule.clone(),
                left: a.label.clone(),
                right: b.label.clone(),
            });
        }
        Ok(a.label.clone())
    }

    fn same_ctx(&self, a: &Thm, b: &Thm) -> Result<()> {
        if a.ctx != b.ctx {
            return Err(side(self.rule, "premises have different contexts"));
        }
        Ok(())
    }
}

fn expected_premises(rule: &RuleId) -> usize {
    use RuleId::*;
    match rule {
        Ninit | NtrueI | Nrefl | Nbeta | Neta | Scheme(_) | Axiom(_) | Def(_)
        | TypedefLaw(..) => 0,
        NfalseE | Nlift | Nsym | Nlcong | Nsubst | Ninst | NnegI | Nwk | NconjE1 | NconjE2
        | NdisjI1 | NdisjI2 | NimpI | NallE | NallI | NexI => 1,
        Ntrans | Nacong | NnegE | NiffE1 | NiffE2 | NiffI | NconjI | NimpE | NexE => 2,
        NdisjE => 3,
    }
}

fn dest_eq_ok<'t>(rule: &RuleId, t: &'t Term) -> Result<(&'t Term, &'t Term)> {
    logic::dest_eq(t).ok_or_else(|| side(rule, format!("{t} is not an equation")))
}

/// The choice formula `(forall x. exists y. P x y) --> exists f. forall x. P x (f x)`
/// for a relation `P : a -> b -> Prop`.
pub fn choice_formula(p: &Term, a: &Type, b: &Type) -> Term {
    let avoid: BTreeSet<Name> = p.fv().into_iter().map(|(n, _)| n).collect();
    let x: Var = (variant("x", &avoid), a.clone());
    let y: Var = (variant("y", &avoid), b.clone());
    let f: Var = (variant("f", &avoid), Type::fun(a.clone(), b.clone()));
    let (xt, yt, ft) = (Term::from_var(&x), Term::from_var(&y), Term::from_var(&f));
    let lhs = logic::mk_forall(
        &x,
        logic::mk_exists(&y, Term::apps(p.clone(), [xt.clone(), yt])),
    );
    let rhs = logic::mk_exists(
        &f,
        logic::mk_forall(&x, Term::apps(p.clone(), [xt.clone(), Term::app(ft, xt)])),
    );
    logic::mk_imp(lhs, rhs)
}

/// The instance of a scheme at a given parameter.
pub fn scheme_formula(s: Scheme, t: &Term) -> Option<Term> {
    match s {
        Scheme::Lem => Some(logic::mk_disj(t.clone(), logic::mk_neg(t.clone()))),
        Scheme::Wem => Some(logic::mk_disj(
            logic::mk_neg(t.clone()),
            logic::mk_neg(logic::mk_neg(t.clone())),
        )),
        Scheme::Choice => {
            let ty = crate::syntax::infer_type(t)?;
            let (a, rest) = ty.dest_fun()?;
            let (b, r) = rest.dest_fun()?;
            r.is_prop().then(|| choice_formula(t, a, b))
        }
    }
}

/// Checks one rule instance and returns its conclusion.
///
/// Term parameters are normalised so that `=` at `Prop` reads as `<->`.
pub fn apply_rule(env: &TheoryEnv, rule: &RuleId, prems: &[Thm], params: &[Param]) -> Result<Thm> {
    let expected = expected_premises(rule);
    if prems.len() != expected {
        return Err(KernelError::ArityError {
            rule: rule.clone(),
            expected,
            found: prems.len(),
        });
    }
    if let RuleId::Axiom(_) | RuleId::Def(_) | RuleId::TypedefLaw(..) = rule {
        return env
            .axiom_thm(rule)
            .cloned()
            .ok_or_else(|| KernelError::UnknownAxiom(rule.to_string()));
    }
    let params: Vec<Param> = params
        .iter()
        .map(|p| match p {
            Param::Term(t) => Param::Term(normalize_iff(t)),
            other => other.clone(),
        })
        .collect();
    let ck = Check {
        env,
        rule,
        params: &params,
    };
    let lat = env.lattice();
    let bot = lat.bottom();
    use RuleId::*;
    let (ctx, concl, label) = match rule {
        Ninit => {
            let c = ck.ctx(0)?;
            let phi = ck.term(1)?;
            if !c.contains(&phi) {
                return Err(side(rule, format!("{phi} is not a hypothesis")));
            }
            (c, phi, bot)
        }
        NtrueI => (ck.ctx(0)?, logic::truth(), bot),
        NfalseE => {
            let p = &prems[0];
            if p.concl != logic::falsity() {
                return Err(side(rule, "premise must conclude False"));
            }
            let phi = ck.term(0)?;
            ck.prop(&phi)?;
            (p.ctx.clone(), phi, p.label.clone())
        }
        Nlift => {
            let p = &prems[0];
            let to = ck.label(0)?;
            if !lat.contains(&to) {
                return Err(crate::lattice::LatticeError::UnknownLabel(to.to_string()).into());
            }
            if !lat.leq(&p.label, &to)? {
                return Err(KernelError::NotAbove {
                    from: p.label.clone(),
                    to,
                });
            }
            (p.ctx.clone(), p.concl.clone(), to)
        }
        Nrefl => {
            let c = ck.ctx(0)?;
            let r = ck.term(1)?;
            ck.typ(&r)?;
            (c, logic::mk_eq(r.clone(), r), bot)
        }
        Nsym => {
            let p = &prems[0];
            let (l, r) = dest_eq_ok(rule, &p.concl)?;
            (p.ctx.clone(), logic::mk_eq(r.clone(), l.clone()), p.label.clone())
        }
        Ntrans => {
            let (a, b) = (&prems[0], &prems[1]);
            ck.same_ctx(a, b)?;
            let label = ck.same_label(a, b)?;
            let (r, s) = dest_eq_ok(rule, &a.concl)?;
            let (s2, t) = dest_eq_ok(rule, &b.concl)?;
            if s != s2 {
                return Err(side(rule, format!("middle terms differ: {s} and {s2}")));
            }
            (a.ctx.clone(), logic::mk_eq(r.clone(), t.clone()), label)
        }
        Nlcong => {
            let p = &prems[0];
            let x = ck.var(0)?;
            if p.ctx.has_free(&x.0, &x.1) {
                return Err(side(rule, format!("{} is free in the context", x.0)));
            }
            let (r, s) = dest_eq_ok(rule, &p.concl)?;
            let eq = logic::mk_eq(Term::abs(&x, r.clone()), Term::abs(&x, s.clone()));
            (p.ctx.clone(), eq, p.label.clone())
        }
        Nacong => {
            let (a, b) = (&prems[0], &prems[1]);
            ck.same_ctx(a, b)?;
            let label = ck.same_label(a, b)?;
            let (f, g) = dest_eq_ok(rule, &a.concl)?;
            let (r, s) = dest_eq_ok(rule, &b.concl)?;
            let lhs = Term::app(f.clone(), r.clone());
            ck.typ(&lhs)?;
            let eq = logic::mk_eq(lhs, Term::app(g.clone(), s.clone()));
            (a.ctx.clone(), eq, label)
        }
        Nsubst => {
            let p = &prems[0];
            let x = ck.var(0)?;
            let r = ck.term(1)?;
            let ty = ck.typ(&r)?;
            if ty != x.1 {
                return Err(KernelError::TypeError {
                    rule: rule.clone(),
                    source: crate::syntax::TypingError::TypeMismatch {
                        expected: x.1.clone(),
                        found: ty,
                    },
                });
            }
            let f = |t: &Term| normalize_iff(&t.subst(&x, &r));
            (p.ctx.map(f), f(&p.concl), p.label.clone())
        }
        Nbeta => {
            let c = ck.ctx(0)?;
            let t = ck.term(1)?;
            ck.typ(&t)?;
            let reduct = match &t {
                Term::App(f, s) => match &**f {
                    Term::Lam(x, ty, body) => body.subst(&(x.clone(), ty.clone()), s),
                    _ => return Err(side(rule, format!("{t} is not a beta-redex"))),
                },
                _ => return Err(side(rule, format!("{t} is not a beta-redex"))),
            };
            (c, logic::mk_eq(t, reduct), bot)
        }
        Ninst => {
            let p = &prems[0];
            let a = ck.tyvar(0)?;
            let ty = ck.ty(1)?;
            ck.star(&ty)?;
            let f = |t: &Term| normalize_iff(&t.inst(&a, &ty));
            (p.ctx.map(f), f(&p.concl), p.label.clone())
        }
        Neta => {
            let c = ck.ctx(0)?;
            let t = ck.term(1)?;
            ck.typ(&t)?;
            let f = match &t {
                Term::Lam(x, ty, body) => match &**body {
                    Term::App(f, arg)
                        if matches!(&**arg, Term::Var(y, yt) if y == x && yt == ty)
                            && !f.has_free(x, ty) =>
                    {
                        (**f).clone()
                    }
                    _ => return Err(side(rule, format!("{t} is not an eta-redex"))),
                },
                _ => return Err(side(rule, format!("{t} is not an eta-redex"))),
            };
            (c, logic::mk_eq(t, f), bot)
        }
        NnegI | NimpI => {
            let p = &prems[0];
            let phi = ck.term(0)?;
            if !p.ctx.contains(&phi) {
                return Err(side(rule, format!("{phi} is not a hypothesis of the premise")));
            }
            let concl = if *rule == NnegI {
                if p.concl != logic::falsity() {
                    return Err(side(rule, "premise must conclude False"));
                }
                logic::mk_neg(phi.clone())
            } else {
                logic::mk_imp(phi.clone(), p.concl.clone())
            };
            (p.ctx.remove(&phi), concl, p.label.clone())
        }
        NnegE => {
            let (a, b) = (&prems[0], &prems[1]);
            ck.same_ctx(a, b)?;
            let label = ck.same_label(a, b)?;
            match logic::dest_neg(&b.concl) {
                Some(n) if *n == a.concl => {}
                _ => return Err(side(rule, "second premise must be the negation of the first")),
            }
            (a.ctx.clone(), logic::falsity(), label)
        }
        NiffE1 | NiffE2 => {
            let (a, b) = (&prems[0], &prems[1]);
            ck.same_ctx(a, b)?;
            let label = ck.same_label(a, b)?;
            let (l, r) = logic::dest_iff(&a.concl)
                .ok_or_else(|| side(rule, "first premise must be a bi-implication"))?;
            let (from, to) = if *rule == NiffE1 { (l, r) } else { (r, l) };
            if *from != b.concl {
                return Err(side(rule, format!("second premise must be {from}")));
            }
            (a.ctx.clone(), to.clone(), label)
        }
        NiffI => {
            let c = ck.ctx(0)?;
            let (a, b) = (&prems[0], &prems[1]);
            let label = ck.same_label(a, b)?;
            let (phi, psi) = (&a.concl, &b.concl);
            if a.ctx != c.insert(psi.clone()) || b.ctx != c.insert(phi.clone()) {
                return Err(side(rule, "premise contexts must be Γ,ψ and Γ,φ"));
            }
            (c, logic::mk_iff(phi.clone(), psi.clone()), label)
        }
        Nwk => {
            let p = &prems[0];
            let psi = ck.term(0)?;
            ck.prop(&psi)?;
            (p.ctx.insert(psi), p.concl.clone(), p.label.clone())
        }
        NconjI => {
            let (a, b) = (&prems[0], &prems[1]);
            ck.same_ctx(a, b)?;
            let label = ck.same_label(a, b)?;
            (a.ctx.clone(), logic::mk_conj(a.concl.clone(), b.concl.clone()), label)
        }
        NconjE1 | NconjE2 => {
            let p = &prems[0];
            let (l, r) = logic::dest_conj(&p.concl)
                .ok_or_else(|| side(rule, "premise must be a conjunction"))?;
            let c = if *rule == NconjE1 { l } else { r };
            (p.ctx.clone(), c.clone(), p.label.clone())
        }
        NdisjI1 | NdisjI2 => {
            let p = &prems[0];
            let other = ck.term(0)?;
            ck.prop(&other)?;
            let d = if *rule == NdisjI1 {
                logic::mk_disj(p.concl.clone(), other)
            } else {
                logic::mk_disj(other, p.concl.clone())
            };
            (p.ctx.clone(), d, p.label.clone())
        }
        NdisjE => {
            let (d, l, r) = (&prems[0], &prems[1], &prems[2]);
            let label = ck.same_label(d, l)?;
            ck.same_label(d, r)?;
            let (phi, psi) = logic::dest_disj(&d.concl)
                .ok_or_else(|| side(rule, "first premise must be a disjunction"))?;
            if l.ctx != d.ctx.insert(phi.clone()) || r.ctx != d.ctx.insert(psi.clone()) {
                return Err(side(rule, "case premises must extend the context by each disjunct"));
            }
            if l.concl != r.concl {
                return Err(side(rule, "both cases must reach the same conclusion"));
            }
            (d.ctx.clone(), l.concl.clone(), label)
        }
        NimpE => {
            let (a, b) = (&prems[0], &prems[1]);
            ck.same_ctx(a, b)?;
            let label = ck.same_label(a, b)?;
            let (phi, psi) = logic::dest_imp(&a.concl)
                .ok_or_else(|| side(rule, "first premise must be an implication"))?;
            if *phi != b.concl {
                return Err(side(rule, format!("second premise must be {phi}")));
            }
            (a.ctx.clone(), psi.clone(), label)
        }
        NallE => {
            let p = &prems[0];
            let (x, body) = logic::dest_forall(&p.concl)
                .ok_or_else(|| side(rule, "premise must be a universal"))?;
            let r = ck.term(0)?;
            let ty = ck.typ(&r)?;
            if ty != x.1 {
                return Err(side(rule, format!("witness has type {ty}, expected {}", x.1)));
            }
            (p.ctx.clone(), normalize_iff(&body.subst(&x, &r)), p.label.clone())
        }
        NallI => {
            let p = &prems[0];
            let x = ck.var(0)?;
            if p.ctx.has_free(&x.0, &x.1) {
                return Err(side(rule, format!("{} is free in the context", x.0)));
            }
            (p.ctx.clone(), logic::mk_forall(&x, p.concl.clone()), p.label.clone())
        }
        NexI => {
            let p = &prems[0];
            let target = ck.term(0)?;
            ck.prop(&target)?;
            let r = ck.term(1)?;
            let (x, body) = logic::dest_exists(&target)
                .ok_or_else(|| side(rule, "target must be an existential"))?;
            if ck.typ(&r)? != x.1 {
                return Err(side(rule, "witness type does not match the bound variable"));
            }
            if normalize_iff(&body.subst(&x, &r)) != p.concl {
                return Err(side(rule, "premise is not the instance at the witness"));
            }
            (p.ctx.clone(), target.clone(), p.label.clone())
        }
        NexE => {
            let (e, b) = (&prems[0], &prems[1]);
            let label = ck.same_label(e, b)?;
            let y = ck.var(0)?;
            let (x, body) = logic::dest_exists(&e.concl)
                .ok_or_else(|| side(rule, "first premise must be an existential"))?;
            if y.1 != x.1 {
                return Err(side(rule, "eigenvariable type does not match"));
            }
            let fresh_in = |t: &Term| !t.has_free(&y.0, &y.1);
            if e.ctx.has_free(&y.0, &y.1) || !fresh_in(&e.concl) || !fresh_in(&b.concl) {
                return Err(side(rule, format!("eigenvariable {} is not fresh", y.0)));
            }
            let inst = body.subst(&x, &Term::from_var(&y));
            if b.ctx != e.ctx.insert(inst) {
                return Err(side(rule, "second premise must extend the context by the instance"));
            }
            (e.ctx.clone(), b.concl.clone(), label)
        }
        Scheme(s) => {
            let label = lat.scheme_label(*s).ok_or(KernelError::UnboundScheme(*s))?;
            let c = ck.ctx(0)?;
            let t = ck.term(1)?;
            let ty = ck.typ(&t)?;
            let formula = match s {
                crate::lattice::Scheme::Lem | crate::lattice::Scheme::Wem => {
                    if !ty.is_prop() {
                        return Err(side(rule, format!("{t} is not a proposition")));
                    }
                    scheme_formula(*s, &t)
                }
                crate::lattice::Scheme::Choice => scheme_formula(*s, &t),
            }
            .ok_or_else(|| side(rule, format!("{t} does not fit the scheme")))?;
            (c, formula, label)
        }
        Axiom(_) | Def(_) | TypedefLaw(..) => unreachable!("handled above"),
    };
    Ok(Thm {
        ctx,
        concl: normalize_iff(&concl),
        label,
        proof: Arc::new(ProofNode {
            rule: rule.clone(),
            premises: prems.iter().map(|p| p.proof.clone()).collect(),
            params,
        }),
    })
}

/// Rebuilds a theorem from a recorded derivation, rechecking every step.
///
/// Shared sub-derivations are checked once.
pub fn replay(env: &TheoryEnv, node: &Arc<ProofNode>) -> Result<Thm> {
    fn go(
        env: &TheoryEnv,
        node: &Arc<ProofNode>,
        path: &mut Vec<usize>,
        memo: &mut HashMap<*const ProofNode, Thm>,
    ) -> Result<Thm> {
        let key = Arc::as_ptr(node);
        if let Some(t) = memo.get(&key) {
            return Ok(t.clone());
        }
        let mut prems = Vec::with_capacity(node.premises.len());
        for (i, p) in node.premises.iter().enumerate() {
            path.push(i);
            prems.push(go(env, p, path, memo)?);
            path.pop();
        }
        let t = apply_rule(env, &node.rule, &prems, &node.params).map_err(|e| match e {
            e @ KernelError::Replay { .. } => e,
            e => KernelError::Replay {
                path: path.clone(),
                source: Box::new(e),
            },
        })?;
        memo.insert(key, t.clone());
        Ok(t)
    }
    go(env, node, &mut Vec::new(), &mut HashMap::new())
}

// Wrappers, one per rule.

fn term(t: &Term) -> Param {
    Param::Term(t.clone())
}

pub fn assume(env: &TheoryEnv, ctx: &Context, phi: &Term) -> Result<Thm> {
    apply_rule(env, &RuleId::Ninit, &[], &[Param::Ctx(ctx.clone()), term(phi)])
}

/// `phi |- phi`.
pub fn hyp(env: &TheoryEnv, phi: &Term) -> Result<Thm> {
    assume(env, &Context::empty().insert(phi.clone()), phi)
}

pub fn true_intro(env: &TheoryEnv, ctx: &Context) -> Result<Thm> {
    apply_rule(env, &RuleId::NtrueI, &[], &[Param::Ctx(ctx.clone())])
}

pub fn false_elim(env: &TheoryEnv, th: &Thm, phi: &Term) -> Result<Thm> {
    apply_rule(env, &RuleId::NfalseE, std::slice::from_ref(th), &[term(phi)])
}

/// Moves a theorem up the lattice. Lifting to the current label is the
/// identity and records nothing.
pub fn lift(env: &TheoryEnv, th: &Thm, to: &Label) -> Result<Thm> {
    if th.label == *to {
        return Ok(th.clone());
    }
    apply_rule(env, &RuleId::Nlift, std::slice::from_ref(th), &[Param::Label(to.clone())])
}

pub fn refl(env: &TheoryEnv, ctx: &Context, r: &Term) -> Result<Thm> {
    apply_rule(env, &RuleId::Nrefl, &[], &[Param::Ctx(ctx.clone()), term(r)])
}

pub fn sym(env: &TheoryEnv, th: &Thm) -> Result<Thm> {
    apply_rule(env, &RuleId::Nsym, std::slice::from_ref(th), &[])
}

pub fn trans(env: &TheoryEnv, a: &Thm, b: &Thm) -> Result<Thm> {
    apply_rule(env, &RuleId::Ntrans, &[a.clone(), b.clone()], &[])
}

pub fn abs(env: &TheoryEnv, th: &Thm, x: &Var) -> Result<Thm> {
    apply_rule(env, &RuleId::Nlcong, std::slice::from_ref(th), &[Param::Var(x.clone())])
}

pub fn cong(env: &TheoryEnv, fg: &Thm, rs: &Thm) -> Result<Thm> {
    apply_rule(env, &RuleId::Nacong, &[fg.clone(), rs.clone()], &[])
}

pub fn subst(env: &TheoryEnv, th: &Thm, x: &Var, r: &Term) -> Result<Thm> {
    apply_rule(env, &RuleId::Nsubst, std::slice::from_ref(th), &[Param::Var(x.clone()), term(r)])
}

pub fn beta(env: &TheoryEnv, ctx: &Context, redex: &Term) -> Result<Thm> {
    apply_rule(env, &RuleId::Nbeta, &[], &[Param::Ctx(ctx.clone()), term(redex)])
}

pub fn inst_type(env: &TheoryEnv, th: &Thm, a: &str, ty: &Type) -> Result<Thm> {
    apply_rule(
        env,
        &RuleId::Ninst,
        std::slice::from_ref(th),
        &[Param::TyVar(name(a)), Param::Type(ty.clone())],
    )
}

pub fn eta(env: &TheoryEnv, ctx: &Context, t: &Term) -> Result<Thm> {
    apply_rule(env, &RuleId::Neta, &[], &[Param::Ctx(ctx.clone()), term(t)])
}

pub fn neg_intro(env: &TheoryEnv, th: &Thm, phi: &Term) -> Result<Thm> {
    apply_rule(env, &RuleId::NnegI, std::slice::from_ref(th), &[term(phi)])
}

pub fn neg_elim(env: &TheoryEnv, th: &Thm, neg: &Thm) -> Result<Thm> {
    apply_rule(env, &RuleId::NnegE, &[th.clone(), neg.clone()], &[])
}

pub fn iff_elim1(env: &TheoryEnv, iff: &Thm, th: &Thm) -> Result<Thm> {
    apply_rule(env, &RuleId::NiffE1, &[iff.clone(), th.clone()], &[])
}

pub fn iff_elim2(env: &TheoryEnv, iff: &Thm, th: &Thm) -> Result<Thm> {
    apply_rule(env, &RuleId::NiffE2, &[iff.clone(), th.clone()], &[])
}

pub fn iff_intro(env: &TheoryEnv, ctx: &Context, a: &Thm, b: &Thm) -> Result<Thm> {
    apply_rule(env, &RuleId::NiffI, &[a.clone(), b.clone()], &[Param::Ctx(ctx.clone())])
}

/// Adds a hypothesis. A hypothesis already present (up to alpha) is a no-op.
pub fn weaken(env: &TheoryEnv, th: &Thm, psi: &Term) -> Result<Thm> {
    if th.ctx.contains_normalized(psi) {
        return Ok(th.clone());
    }
    apply_rule(env, &RuleId::Nwk, std::slice::from_ref(th), &[term(psi)])
}

/// Weakens with every hypothesis of `ctx` missing from the theorem.
pub fn weaken_to(env: &TheoryEnv, th: &Thm, ctx: &Context) -> Result<Thm> {
    ctx.iter().try_fold(th.clone(), |t, h| weaken(env, &t, h))
}

pub fn conj_intro(env: &TheoryEnv, a: &Thm, b: &Thm) -> Result<Thm> {
    apply_rule(env, &RuleId::NconjI, &[a.clone(), b.clone()], &[])
}

pub fn conj_elim1(env: &TheoryEnv, th: &Thm) -> Result<Thm> {
    apply_rule(env, &RuleId::NconjE1, std::slice::from_ref(th), &[])
}

pub fn conj_elim2(env: &TheoryEnv, th: &Thm) -> Result<Thm> {
    apply_rule(env, &RuleId::NconjE2, std::slice::from_ref(th), &[])
}

pub fn disj_intro1(env: &TheoryEnv, th: &Thm, psi: &Term) -> Result<Thm> {
    apply_rule(env, &RuleId::NdisjI1, std::slice::from_ref(th), &[term(psi)])
}

pub fn disj_intro2(env: &TheoryEnv, th: &Thm, phi: &Term) -> Result<Thm> {
    apply_rule(env, &RuleId::NdisjI2, std::slice::from_ref(th), &[term(phi)])
}

pub fn disj_elim(env: &TheoryEnv, d: &Thm, l: &Thm, r: &Thm) -> Result<Thm> {
    apply_rule(env, &RuleId::NdisjE, &[d.clone(), l.clone(), r.clone()], &[])
}

pub fn imp_intro(env: &TheoryEnv, th: &Thm, phi: &Term) -> Result<Thm> {
    apply_rule(env, &RuleId::NimpI, std::slice::from_ref(th), &[term(phi)])
}

pub fn imp_elim(env: &TheoryEnv, imp: &Thm, th: &Thm) -> Result<Thm> {
    apply_rule(env, &RuleId::NimpE, &[imp.clone(), th.clone()], &[])
}

pub fn all_elim(env: &TheoryEnv, th: &Thm, r: &Term) -> Result<Thm> {
    apply_rule(env, &RuleId::NallE, std::slice::from_ref(th), &[term(r)])
}

pub fn all_intro(env: &TheoryEnv, th: &Thm, x: &Var) -> Result<Thm> {
    apply_rule(env, &RuleId::NallI, std::slice::from_ref(th), &[Param::Var(x.clone())])
}

pub fn ex_intro(env: &TheoryEnv, th: &Thm, target: &Term, r: &Term) -> Result<Thm> {
    apply_rule(env, &RuleId::NexI, std::slice::from_ref(th), &[term(target), term(r)])
}

pub fn ex_elim(env: &TheoryEnv, ex: &Thm, body: &Thm, y: &Var) -> Result<Thm> {
    apply_rule(env, &RuleId::NexE, &[ex.clone(), body.clone()], &[Param::Var(y.clone())])
}

pub fn scheme(env: &TheoryEnv, s: Scheme, ctx: &Context, t: &Term) -> Result<Thm> {
    apply_rule(env, &RuleId::Scheme(s), &[], &[Param::Ctx(ctx.clone()), term(t)])
}

/// A stored theory axiom, definition or subset-type law.
pub fn axiom(env: &TheoryEnv, rule: &RuleId) -> Result<Thm> {
    apply_rule(env, rule, &[], &[])
}
