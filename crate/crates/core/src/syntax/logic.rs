//! The logical constants and smart constructors/destructors for formulas.

use super::signature::infer_type;
use super::term::{Term, Var};
use super::types::{name, Type};

pub const TRUE: &str = "True";
pub const FALSE: &str = "False";
pub const AND: &str = "/\\";
pub const OR: &str = "\\/";
pub const IMP: &str = "-->";
pub const IFF: &str = "<->";
pub const NOT: &str = "~";
pub const EQ: &str = "=";
pub const FORALL: &str = "forall";
pub const EXISTS: &str = "exists";

fn prop() -> Type {
    Type::prop()
}

fn binop_ty() -> Type {
    Type::funs([prop(), prop()], prop())
}

fn quant_ty(a: Type) -> Type {
    Type::fun(Type::fun(a, prop()), prop())
}

/// Generic types of the built-in constants.
pub fn core_constants() -> Vec<(&'static str, Type)> {
    let a = Type::var("a");
    vec![
        (TRUE, prop()),
        (FALSE, prop()),
        (AND, binop_ty()),
        (OR, binop_ty()),
        (IMP, binop_ty()),
        (IFF, binop_ty()),
        (NOT, Type::fun(prop(), prop())),
        (EQ, Type::funs([a.clone(), a.clone()], prop())),
        (FORALL, quant_ty(a.clone())),
        (EXISTS, quant_ty(a)),
    ]
}

pub fn truth() -> Term {
    Term::cnst(TRUE, prop())
}

pub fn falsity() -> Term {
    Term::cnst(FALSE, prop())
}

fn binop(c: &str, l: Term, r: Term) -> Term {
    Term::apps(Term::cnst(c, binop_ty()), [l, r])
}

pub fn mk_conj(l: Term, r: Term) -> Term {
    binop(AND, l, r)
}

pub fn mk_disj(l: Term, r: Term) -> Term {
    binop(OR, l, r)
}

pub fn mk_imp(l: Term, r: Term) -> Term {
    binop(IMP, l, r)
}

pub fn mk_iff(l: Term, r: Term) -> Term {
    binop(IFF, l, r)
}

pub fn mk_neg(p: Term) -> Term {
    Term::app(Term::cnst(NOT, Type::fun(prop(), prop())), p)
}

/// `l = r`, or `l <-> r` when the operands are propositions.
///
/// Panics if `l` is ill-typed; callers pass kernel-checked terms.
pub fn mk_eq(l: Term, r: Term) -> Term {
    let ty = infer_type(&l).expect("mk_eq on ill-typed term");
    if ty.is_prop() {
        return mk_iff(l, r);
    }
    Term::apps(Term::cnst(EQ, Type::funs([ty.clone(), ty], prop())), [l, r])
}

pub fn mk_forall(v: &Var, body: Term) -> Term {
    Term::app(Term::cnst(FORALL, quant_ty(v.1.clone())), Term::abs(v, body))
}

pub fn mk_exists(v: &Var, body: Term) -> Term {
    Term::app(Term::cnst(EXISTS, quant_ty(v.1.clone())), Term::abs(v, body))
}

fn dest_binop<'a>(c: &str, t: &'a Term) -> Option<(&'a Term, &'a Term)> {
    if let Term::App(f, r) = t {
        if let Term::App(op, l) = &**f {
            if op.is_const(c) {
                return Some((l, r));
            }
        }
    }
    None
}

pub fn dest_conj(t: &Term) -> Option<(&Term, &Term)> {
    dest_binop(AND, t)
}

pub fn dest_disj(t: &Term) -> Option<(&Term, &Term)> {
    dest_binop(OR, t)
}

pub fn dest_imp(t: &Term) -> Option<(&Term, &Term)> {
    dest_binop(IMP, t)
}

/// Bi-implication, accepting `=` at `Prop` as well.
pub fn dest_iff(t: &Term) -> Option<(&Term, &Term)> {
    dest_binop(IFF, t).or_else(|| {
        let (l, r) = dest_binop(EQ, t)?;
        infer_type(l)?.is_prop().then_some((l, r))
    })
}

/// Equality at any type, with `<->` counting as equality at `Prop`.
pub fn dest_eq(t: &Term) -> Option<(&Term, &Term)> {
    dest_binop(EQ, t).or_else(|| dest_binop(IFF, t))
}

pub fn dest_neg(t: &Term) -> Option<&Term> {
    match t {
        Term::App(f, a) if f.is_const(NOT) => Some(a),
        _ => None,
    }
}

fn dest_binder<'a>(c: &str, t: &'a Term) -> Option<(Var, &'a Term)> {
    match t {
        Term::App(q, body) if q.is_const(c) => match &**body {
            Term::Lam(x, ty, b) => Some(((x.clone(), ty.clone()), b)),
            _ => None,
        },
        _ => None,
    }
}

pub fn dest_forall(t: &Term) -> Option<(Var, &Term)> {
    dest_binder(FORALL, t)
}

pub fn dest_exists(t: &Term) -> Option<(Var, &Term)> {
    dest_binder(EXISTS, t)
}

/// Replaces every `=` at type `Prop -> Prop -> Prop` by `<->`.
///
/// Equality at `Prop` and bi-implication are identified; stored formulas
/// always use the latter.
pub fn normalize_iff(t: &Term) -> Term {
    fn go(t: &Term) -> Option<Term> {
        match t {
            Term::Const(c, ty) if &**c == EQ && *ty == binop_ty() => {
                Some(Term::cnst(IFF, binop_ty()))
            }
            Term::Var(..) | Term::Const(..) => None,
            Term::App(f, a) => {
                let (f2, a2) = (go(f), go(a));
                if f2.is_none() && a2.is_none() {
                    return None;
                }
                Some(Term::app(
                    f2.unwrap_or_else(|| (**f).clone()),
                    a2.unwrap_or_else(|| (**a).clone()),
                ))
            }
            Term::Lam(x, ty, b) => go(b).map(|b2| Term::lam(x, ty.clone(), b2)),
        }
    }
    go(t).unwrap_or_else(|| t.clone())
}

/// `p:Prop`.
pub fn prop_var(n: &str) -> Term {
    Term::Var(name(n), prop())
}
