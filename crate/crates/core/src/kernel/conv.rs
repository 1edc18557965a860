//! Conversions: procedures that prove `Γ |- t = t'` for a chosen `t'`.
//!
//! A conversion returns `None` when it leaves the term unchanged, so callers
//! never have to splice reflexivity steps into recorded proofs.

use std::collections::BTreeSet;

use crate::syntax::term::fresh_name;
use crate::syntax::types::match_type;
use crate::syntax::{logic, Name, Term, Type, Var};
use crate::theory::TheoryEnv;

use super::derived;
use super::rules;
use super::thm::{Context, RuleId, Thm};
use super::{KernelError, Result};

pub type Conv<'a> = dyn FnMut(&Context, &Term) -> Result<Option<Thm>> + 'a;

fn chain(env: &TheoryEnv, a: Option<Thm>, b: Option<Thm>) -> Result<Option<Thm>> {
    match (a, b) {
        (Some(a), Some(b)) => Ok(Some(derived::trans(env, &a, &b)?)),
        (a, None) => Ok(a),
        (None, b) => Ok(b),
    }
}

fn rhs(th: &Thm) -> Term {
    logic::dest_eq(th.concl())
        .map(|(_, r)| r.clone())
        .expect("conversion result is an equation")
}

fn app_cong(env: &TheoryEnv, ctx: &Context, t: &Term, f: Option<Thm>, a: Option<Thm>) -> Result<Option<Thm>> {
    let Term::App(tf, ta) = t else { unreachable!() };
    if f.is_none() && a.is_none() {
        return Ok(None);
    }
    let f = match f {
        Some(f) => f,
        None => rules::refl(env, ctx, tf)?,
    };
    let a = match a {
        Some(a) => a,
        None => rules::refl(env, ctx, ta)?,
    };
    Ok(Some(derived::cong(env, &f, &a)?))
}

/// Renames the binder of `t` away from the free variables of `ctx` when it
/// clashes, so that `Nlcong` applies. The result is alpha-equal to `t`.
fn freshen_binder(ctx: &Context, t: &Term) -> Term {
    match t {
        Term::Lam(x, ty, _) if ctx.has_free(x, ty) => {
            let mut avoid: BTreeSet<Name> = ctx.fv().into_iter().map(|(n, _)| n).collect();
            avoid.extend(t.fv().into_iter().map(|(n, _)| n));
            t.rename_binder(&avoid)
        }
        _ => t.clone(),
    }
}

fn lam_cong(env: &TheoryEnv, x: &Var, body: Option<Thm>) -> Result<Option<Thm>> {
    body.map(|b| rules::abs(env, &b, x)).transpose()
}

/// Applies `at` to the outermost subterms where it fires, left to right.
pub fn top_sweep(env: &TheoryEnv, ctx: &Context, t: &Term, at: &mut Conv<'_>) -> Result<Option<Thm>> {
    if let Some(th) = at(ctx, t)? {
        return Ok(Some(th));
    }
    match t {
        Term::Var(..) | Term::Const(..) => Ok(None),
        Term::App(f, a) => {
            let fth = top_sweep(env, ctx, f, at)?;
            let ath = top_sweep(env, ctx, a, at)?;
            app_cong(env, ctx, t, fth, ath)
        }
        Term::Lam(..) => {
            let t = freshen_binder(ctx, t);
            let Term::Lam(x, ty, b) = &t else { unreachable!() };
            let bth = top_sweep(env, ctx, b, at)?;
            lam_cong(env, &(x.clone(), ty.clone()), bth)
        }
    }
}

/// Beta-reduces the outermost redex, if `t` is one.
pub fn beta_conv(env: &TheoryEnv, ctx: &Context, t: &Term) -> Result<Option<Thm>> {
    match t {
        Term::App(f, _) if matches!(&**f, Term::Lam(..)) => Ok(Some(rules::beta(env, ctx, t)?)),
        _ => Ok(None),
    }
}

/// Proves `Γ |- t = t'` with `t'` the beta-normal form of `t`.
pub fn beta_norm(env: &TheoryEnv, ctx: &Context, t: &Term) -> Result<Option<Thm>> {
    match t {
        Term::Var(..) | Term::Const(..) => Ok(None),
        Term::Lam(..) => {
            let t = freshen_binder(ctx, t);
            let Term::Lam(x, ty, b) = &t else { unreachable!() };
            let bth = beta_norm(env, ctx, b)?;
            lam_cong(env, &(x.clone(), ty.clone()), bth)
        }
        Term::App(f, a) => {
            let fth = beta_norm(env, ctx, f)?;
            let ath = beta_norm(env, ctx, a)?;
            let head = app_cong(env, ctx, t, fth, ath)?;
            let t1 = head.as_ref().map(rhs).unwrap_or_else(|| t.clone());
            match beta_conv(env, ctx, &t1)? {
                None => Ok(head),
                Some(step) => {
                    let rest = beta_norm(env, ctx, &rhs(&step))?;
                    let tail = chain(env, Some(step), rest)?;
                    chain(env, head, tail)
                }
            }
        }
    }
}

/// Instantiates the type variables of a theorem simultaneously.
///
/// Each variable is first renamed to a fresh one so that sequential `Ninst`
/// steps cannot interfere with each other.
pub fn inst_types(env: &TheoryEnv, th: &Thm, sigma: &[(Name, Type)]) -> Result<Thm> {
    let sigma: Vec<_> = sigma
        .iter()
        .filter(|(a, ty)| !matches!(ty, Type::Var(b) if b == a))
        .cloned()
        .collect();
    if sigma.is_empty() {
        return Ok(th.clone());
    }
    let mut avoid: BTreeSet<Name> = th.concl().ftv();
    for h in th.context() {
        avoid.extend(h.ftv());
    }
    for (a, ty) in &sigma {
        avoid.insert(a.clone());
        avoid.extend(ty.ftv());
    }
    let mut th = th.clone();
    let mut renamed = Vec::new();
    for (a, ty) in &sigma {
        let fresh = fresh_name(a, &avoid);
        avoid.insert(fresh.clone());
        th = rules::inst_type(env, &th, a, &Type::Var(fresh.clone()))?;
        renamed.push((fresh, ty.clone()));
    }
    for (fresh, ty) in &renamed {
        th = rules::inst_type(env, &th, fresh, ty)?;
    }
    Ok(th)
}

/// The defining equation of `c`, instantiated at the type of the occurrence
/// and weakened into `ctx`.
pub fn def_at(env: &TheoryEnv, ctx: &Context, c: &str, ty: &Type) -> Result<Option<Thm>> {
    let rule = RuleId::Def(c.into());
    let Some(def) = env.axiom_thm(&rule) else {
        return Ok(None);
    };
    let (lhs, _) = logic::dest_eq(def.concl()).expect("definitions are equations");
    let mut sigma = Vec::new();
    let generic = match lhs {
        Term::Const(_, g) => g.clone(),
        _ => unreachable!("definitions have a constant on the left"),
    };
    if !match_type(&generic, ty, &mut sigma) {
        return Ok(None);
    }
    let th = inst_types(env, &rules::axiom(env, &rule)?, &sigma)?;
    Ok(Some(rules::weaken_to(env, &th, ctx)?))
}

/// Unfolds the named constants (every defined constant when `names` is empty),
/// repeatedly, then beta-normalises.
pub fn unfold(env: &TheoryEnv, ctx: &Context, t: &Term, names: &[Name]) -> Result<Option<Thm>> {
    let wanted = |c: &str| {
        env.axiom_thm(&RuleId::Def(c.into())).is_some()
            && (names.is_empty() || names.iter().any(|n| &**n == c))
    };
    let mut acc: Option<Thm> = None;
    let mut cur = t.clone();
    loop {
        let mut at = |ctx: &Context, s: &Term| match s {
            Term::Const(c, ty) if wanted(c) => def_at(env, ctx, c, ty),
            _ => Ok(None),
        };
        let Some(step) = top_sweep(env, ctx, &cur, &mut at)? else {
            break;
        };
        cur = rhs(&step);
        acc = chain(env, acc, Some(step))?;
    }
    let b = beta_norm(env, ctx, &cur)?;
    chain(env, acc, b)
}

/// Rewrites every occurrence of the left side of `eq` (up to alpha) by its
/// right side.
pub fn rewrite_exact(env: &TheoryEnv, ctx: &Context, eq: &Thm, t: &Term) -> Result<Option<Thm>> {
    let (l, _) = logic::dest_eq(eq.concl()).ok_or_else(|| KernelError::SideConditionViolated {
        rule: RuleId::Ntrans,
        reason: format!("{} is not an equation", eq.concl()),
    })?;
    let l = l.clone();
    let eq = rules::weaken_to(env, eq, ctx)?;
    let mut at = |_: &Context, s: &Term| Ok((*s == l).then(|| eq.clone()));
    top_sweep(env, ctx, t, &mut at)
}

/// First-order matching of `pat` against `target`. Variables in `pvars` are
/// pattern variables; type variables of the pattern may be instantiated.
pub fn match_term(
    pat: &Term,
    target: &Term,
    pvars: &BTreeSet<Var>,
    tsub: &mut Vec<(Var, Term)>,
    tysub: &mut Vec<(Name, Type)>,
) -> bool {
    fn go(
        pat: &Term,
        target: &Term,
        pvars: &BTreeSet<Var>,
        bound: &mut Vec<(Var, Var)>,
        tsub: &mut Vec<(Var, Term)>,
        tysub: &mut Vec<(Name, Type)>,
    ) -> bool {
        match (pat, target) {
            (Term::Var(n, ty), _) => {
                let v = (n.clone(), ty.clone());
                if let Some((_, tv)) = bound.iter().rev().find(|(p, _)| p.0 == *n && p.1 == *ty) {
                    return matches!(target, Term::Var(m, mty) if *m == tv.0 && *mty == tv.1);
                }
                if pvars.contains(&v) {
                    let Some(tty) = crate::syntax::infer_type(target) else {
                        return false;
                    };
                    if !match_type(ty, &tty, tysub) {
                        return false;
                    }
                    if bound.iter().any(|(_, tv)| target.has_free(&tv.0, &tv.1)) {
                        return false;
                    }
                    if let Some((_, prev)) = tsub.iter().find(|(pv, _)| *pv == v) {
                        return prev == target;
                    }
                    tsub.push((v, target.clone()));
                    return true;
                }
                matches!(target, Term::Var(m, mty) if m == n && mty == ty)
            }
            (Term::Const(c, ty), Term::Const(d, tty)) => {
                // `=` at a type variable also matches `<->`, its form at Prop.
                let eq_iff = &**c == logic::EQ && &**d == logic::IFF;
                (c == d || eq_iff) && match_type(ty, tty, tysub)
            }
            (Term::App(f, a), Term::App(g, b)) => {
                go(f, g, pvars, bound, tsub, tysub) && go(a, b, pvars, bound, tsub, tysub)
            }
            (Term::Lam(x, xt, b), Term::Lam(y, yt, c)) => {
                if !match_type(xt, yt, tysub) {
                    return false;
                }
                bound.push(((x.clone(), xt.clone()), (y.clone(), yt.clone())));
                let ok = go(b, c, pvars, bound, tsub, tysub);
                bound.pop();
                ok
            }
            _ => false,
        }
    }
    go(pat, target, pvars, &mut Vec::new(), tsub, tysub)
}

/// Strips leading universal quantifiers, returning the bound variables and
/// the body.
pub fn strip_forall(t: &Term) -> (Vec<Var>, Term) {
    let mut vars = Vec::new();
    let mut cur = t.clone();
    while let Some((v, b)) = logic::dest_forall(&cur) {
        let b = b.clone();
        vars.push(v);
        cur = b;
    }
    (vars, cur)
}

/// Term and type instantiations found by matching.
type Instantiation = (Vec<(Var, Term)>, Vec<(Name, Type)>);

/// Instantiates a (possibly universally quantified, possibly polymorphic)
/// equation so that its left side matches the first suitable subterm of
/// `target`, then rewrites every occurrence of that instance.
///
/// With `reverse` the equation is used right to left.
pub fn rewrite_with(
    env: &TheoryEnv,
    ctx: &Context,
    th: &Thm,
    target: &Term,
    reverse: bool,
) -> Result<Option<Thm>> {
    let (vars, body) = strip_forall(th.concl());
    let Some((l, r)) = logic::dest_eq(&body) else {
        return Err(KernelError::SideConditionViolated {
            rule: RuleId::Ntrans,
            reason: format!("{} is not an equation", th.concl()),
        });
    };
    let l = if reverse { r.clone() } else { l.clone() };
    let pvars: BTreeSet<Var> = vars.iter().cloned().collect();
    let mut found: Option<Instantiation> = None;
    let mut search = |s: &Term| {
        if found.is_some() {
            return;
        }
        let (mut ts, mut tys) = (Vec::new(), Vec::new());
        if match_term(&l, s, &pvars, &mut ts, &mut tys) {
            found = Some((ts, tys));
        }
    };
    visit_subterms(target, &mut search);
    let Some((ts, tys)) = found else {
        return Ok(None);
    };
    let mut inst = inst_types(env, th, &tys)?;
    for v in &vars {
        let w = (v.0.clone(), v.1.subst_many(&tys));
        let witness = ts
            .iter()
            .find(|(pv, _)| *pv == *v)
            .map(|(_, t)| t.clone())
            .unwrap_or_else(|| Term::from_var(&w));
        inst = rules::all_elim(env, &inst, &witness)?;
    }
    if reverse {
        inst = rules::sym(env, &inst)?;
    }
    rewrite_exact(env, ctx, &inst, target)
}

fn visit_subterms(t: &Term, f: &mut impl FnMut(&Term)) {
    f(t);
    match t {
        Term::App(a, b) => {
            visit_subterms(a, f);
            visit_subterms(b, f);
        }
        Term::Lam(_, _, b) => visit_subterms(b, f),
        _ => {}
    }
}

/// Proves `Γ |- a <-> b` when `a` and `b` have the same normal form after
/// unfolding every definition and beta-normalising.
pub fn convertible(env: &TheoryEnv, ctx: &Context, a: &Term, b: &Term) -> Result<Option<Thm>> {
    let na = unfold(env, ctx, a, &[])?;
    let nb = unfold(env, ctx, b, &[])?;
    let fa = na.as_ref().map(rhs).unwrap_or_else(|| a.clone());
    let fb = nb.as_ref().map(rhs).unwrap_or_else(|| b.clone());
    if fa != fb {
        return Ok(None);
    }
    let back = nb.map(|t| rules::sym(env, &t)).transpose()?;
    match chain(env, na, back)? {
        Some(t) => Ok(Some(t)),
        None => Ok(Some(rules::refl(env, ctx, a)?)),
    }
}
