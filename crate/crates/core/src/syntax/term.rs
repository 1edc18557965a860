//! Explicitly typed lambda terms, identified up to alpha-equivalence.
//!
//! Binders are named. `PartialEq`, `Ord` and `Hash` on [`Term`] all work on
//! alpha-classes: a variable occurrence is compared by the position of its
//! binder (counted from the innermost one) when bound, and by its
//! `(name, type)` pair when free.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::types::{name, Name, Type};

#[derive(Clone, Debug)]
pub enum Term {
    Var(Name, Type),
    Const(Name, Type),
    App(Arc<Term>, Arc<Term>),
    Lam(Name, Type, Arc<Term>),
}

/// A term variable: name and type together are its identity.
pub type Var = (Name, Type);

impl Term {
    pub fn var(n: impl AsRef<str>, ty: Type) -> Term {
        Term::Var(name(n), ty)
    }

    pub fn cnst(n: impl AsRef<str>, ty: Type) -> Term {
        Term::Const(name(n), ty)
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn lam(x: impl AsRef<str>, ty: Type, body: Term) -> Term {
        Term::Lam(name(x), ty, Arc::new(body))
    }

    pub fn from_var(v: &Var) -> Term {
        Term::Var(v.0.clone(), v.1.clone())
    }

    /// Abstracts over an existing variable.
    pub fn abs(v: &Var, body: Term) -> Term {
        Term::Lam(v.0.clone(), v.1.clone(), Arc::new(body))
    }

    /// `f a1 .. an` as `(f, [a1, .., an])`.
    pub fn strip_app(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(&**a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    pub fn is_const(&self, n: &str) -> bool {
        matches!(self, Term::Const(c, _) if &**c == n)
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(..) | Term::Const(..) => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Lam(_, _, b) => 1 + b.size(),
        }
    }

    /// Free term variables.
    pub fn fv(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_fv(&mut bound, &mut out);
        out
    }

    fn collect_fv<'a>(&'a self, bound: &mut Vec<(&'a Name, &'a Type)>, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(n, t) => {
                if !bound.iter().any(|(bn, bt)| *bn == n && *bt == t) {
                    out.insert((n.clone(), t.clone()));
                }
            }
            Term::Const(..) => {}
            Term::App(f, a) => {
                f.collect_fv(bound, out);
                a.collect_fv(bound, out);
            }
            Term::Lam(x, t, b) => {
                bound.push((x, t));
                b.collect_fv(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, x: &str, ty: &Type) -> bool {
        match self {
            Term::Var(n, t) => &**n == x && t == ty,
            Term::Const(..) => false,
            Term::App(f, a) => f.has_free(x, ty) || a.has_free(x, ty),
            Term::Lam(y, t, b) => !(&**y == x && t == ty) && b.has_free(x, ty),
        }
    }

    /// Type variables occurring anywhere in the term, including binder and
    /// constant annotations.
    pub fn ftv(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_ftv(&mut out);
        out
    }

    fn collect_ftv(&self, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(_, t) | Term::Const(_, t) => t.collect_ftv(out),
            Term::App(f, a) => {
                f.collect_ftv(out);
                a.collect_ftv(out);
            }
            Term::Lam(_, t, b) => {
                t.collect_ftv(out);
                b.collect_ftv(out);
            }
        }
    }

    fn has_tyvar(&self, v: &str) -> bool {
        match self {
            Term::Var(_, t) | Term::Const(_, t) => t.has_tyvar(v),
            Term::App(f, a) => f.has_tyvar(v) || a.has_tyvar(v),
            Term::Lam(_, t, b) => t.has_tyvar(v) || b.has_tyvar(v),
        }
    }

    /// Type substitution action `self[var := ty]`.
    ///
    /// Distinct variables can become identical after instantiation (`x:a`
    /// and `x:Prop` under `a := Prop`); binders are renamed when that would
    /// capture a free occurrence.
    pub fn inst(&self, var: &str, ty: &Type) -> Term {
        if !self.has_tyvar(var) {
            return self.clone();
        }
        self.inst_many(&[(name(var), ty.clone())])
    }

    /// Simultaneous type substitution.
    pub fn inst_many(&self, sigma: &[(Name, Type)]) -> Term {
        if sigma.is_empty() {
            return self.clone();
        }
        match self {
            Term::Var(n, t) => Term::Var(n.clone(), t.subst_many(sigma)),
            Term::Const(n, t) => Term::Const(n.clone(), t.subst_many(sigma)),
            Term::App(f, a) => Term::app(f.inst_many(sigma), a.inst_many(sigma)),
            Term::Lam(x, t, b) => {
                let t2 = t.subst_many(sigma);
                let fvs = b.fv();
                let clash = fvs
                    .iter()
                    .any(|(y, r)| y == x && r != t && r.subst_many(sigma) == t2);
                if clash {
                    let avoid: BTreeSet<Name> = fvs.iter().map(|(n, _)| n.clone()).collect();
                    let x2 = fresh_name(x, &avoid);
                    let renamed = b.subst(&(x.clone(), t.clone()), &Term::Var(x2.clone(), t.clone()));
                    Term::Lam(x2, t2, Arc::new(renamed.inst_many(sigma)))
                } else {
                    Term::Lam(x.clone(), t2, Arc::new(b.inst_many(sigma)))
                }
            }
        }
    }

    /// Capture-avoiding substitution `self[v := s]`. The caller guarantees
    /// `s` has the variable's type; the checked entry point is
    /// [`super::signature::term_subst`].
    pub fn subst(&self, v: &Var, s: &Term) -> Term {
        match self {
            Term::Var(n, t) => {
                if *n == v.0 && *t == v.1 {
                    s.clone()
                } else {
                    self.clone()
                }
            }
            Term::Const(..) => self.clone(),
            Term::App(f, a) => {
                if !self.has_free(&v.0, &v.1) {
                    return self.clone();
                }
                Term::app(f.subst(v, s), a.subst(v, s))
            }
            Term::Lam(y, r, b) => {
                if (*y == v.0 && *r == v.1) || !b.has_free(&v.0, &v.1) {
                    return self.clone();
                }
                if s.has_free(y, r) {
                    let mut avoid: BTreeSet<Name> = b.fv().into_iter().map(|(n, _)| n).collect();
                    avoid.extend(s.fv().into_iter().map(|(n, _)| n));
                    avoid.insert(v.0.clone());
                    let y2 = fresh_name(y, &avoid);
                    let b2 = b.subst(&(y.clone(), r.clone()), &Term::Var(y2.clone(), r.clone()));
                    Term::Lam(y2, r.clone(), Arc::new(b2.subst(v, s)))
                } else {
                    Term::Lam(y.clone(), r.clone(), Arc::new(b.subst(v, s)))
                }
            }
        }
    }

    /// Renames the bound variable of a lambda so that it avoids `avoid`.
    /// The result is alpha-equal to `self`.
    pub fn rename_binder(&self, avoid: &BTreeSet<Name>) -> Term {
        match self {
            Term::Lam(x, t, b) if avoid.contains(x) => {
                let mut all = avoid.clone();
                all.extend(b.fv().into_iter().map(|(n, _)| n));
                let x2 = fresh_name(x, &all);
                let b2 = b.subst(&(x.clone(), t.clone()), &Term::Var(x2.clone(), t.clone()));
                Term::Lam(x2, t.clone(), Arc::new(b2))
            }
            _ => self.clone(),
        }
    }
}

/// `base` with the smallest numeric suffix (starting at 1) that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { base } else { stem };
    (1u64..)
        .map(|i| name(format!("{stem}{i}")))
        .find(|n| !avoid.contains(n))
        .expect("unbounded suffix search")
}

/// `base` itself when it is not in `avoid`, otherwise [`fresh_name`].
pub fn variant(base: &str, avoid: &BTreeSet<Name>) -> Name {
    if avoid.contains(base) {
        fresh_name(base, avoid)
    } else {
        name(base)
    }
}

/// Free variables of a term (`fv_term`).
pub fn fv_term(t: &Term) -> BTreeSet<Var> {
    t.fv()
}

/// Type variables of a term (`ftv_term`).
pub fn ftv_term(t: &Term) -> BTreeSet<Name> {
    t.ftv()
}

/// Type substitution action on terms (`term_type_subst`).
pub fn term_type_subst(t: &Term, var: &str, ty: &Type) -> Term {
    t.inst(var, ty)
}

/// Alpha-equivalence.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    alpha_cmp(a, b) == Ordering::Equal
}

type Binders<'a> = Vec<(&'a Name, &'a Type)>;

fn lookup(stack: &Binders<'_>, n: &Name, t: &Type) -> Option<usize> {
    stack
        .iter()
        .rev()
        .position(|(bn, bt)| *bn == n && *bt == t)
}

/// Total order on alpha-classes.
pub fn alpha_cmp(a: &Term, b: &Term) -> Ordering {
    fn go<'a>(a: &'a Term, b: &'a Term, sa: &mut Binders<'a>, sb: &mut Binders<'a>) -> Ordering {
        fn rank(t: &Term) -> u8 {
            match t {
                Term::Var(..) => 0,
                Term::Const(..) => 1,
                Term::App(..) => 2,
                Term::Lam(..) => 3,
            }
        }
        match (a, b) {
            (Term::Var(n1, t1), Term::Var(n2, t2)) => {
                match (lookup(sa, n1, t1), lookup(sb, n2, t2)) {
                    (Some(i), Some(j)) => i.cmp(&j),
                    (Some(_), None) => Ordering::Less,
                    (None, Some(_)) => Ordering::Greater,
                    (None, None) => (n1, t1).cmp(&(n2, t2)),
                }
            }
            (Term::Const(n1, t1), Term::Const(n2, t2)) => (n1, t1).cmp(&(n2, t2)),
            (Term::App(f1, a1), Term::App(f2, a2)) => {
                go(f1, f2, sa, sb).then_with(|| go(a1, a2, sa, sb))
            }
            (Term::Lam(x1, t1, b1), Term::Lam(x2, t2, b2)) => t1.cmp(t2).then_with(|| {
                sa.push((x1, t1));
                sb.push((x2, t2));
                let r = go(b1, b2, sa, sb);
                sa.pop();
                sb.pop();
                r
            }),
            _ => rank(a).cmp(&rank(b)),
        }
    }
    if std::ptr::eq(a, b) {
        return Ordering::Equal;
    }
    go(a, b, &mut Vec::new(), &mut Vec::new())
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        alpha_eq(self, other)
    }
}

impl Eq for Term {}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        alpha_cmp(self, other)
    }
}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        fn go<'a, H: Hasher>(t: &'a Term, stack: &mut Binders<'a>, state: &mut H) {
            match t {
                Term::Var(n, ty) => match lookup(stack, n, ty) {
                    Some(i) => (0u8, i).hash(state),
                    None => (1u8, n, ty).hash(state),
                },
                Term::Const(n, ty) => (2u8, n, ty).hash(state),
                Term::App(f, a) => {
                    3u8.hash(state);
                    go(f, stack, state);
                    go(a, stack, state);
                }
                Term::Lam(x, ty, b) => {
                    (4u8, ty).hash(state);
                    stack.push((x, ty));
                    go(b, stack, state);
                    stack.pop();
                }
            }
        }
        go(self, &mut Vec::new(), state)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::frontend::printer::print_term(self))
    }
}
