//! Nameless terms: an independent model of alpha-equivalence and
//! capture-avoiding substitution.

use std::collections::BTreeSet;

use taint_hol::syntax::{name, Name, Term, Type};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Db {
    Free(Name, Type),
    Bound(usize),
    Const(Name, Type),
    App(Box<Db>, Box<Db>),
    Lam(Type, Box<Db>),
}

pub fn to_db(t: &Term) -> Db {
    fn go(t: &Term, stack: &mut Vec<(Name, Type)>) -> Db {
        match t {
            Term::Var(x, ty) => match stack.iter().rev().position(|(y, u)| y == x && u == ty) {
                Some(i) => Db::Bound(i),
                None => Db::Free(x.clone(), ty.clone()),
            },
            Term::Const(c, ty) => Db::Const(c.clone(), ty.clone()),
            Term::App(f, a) => Db::App(Box::new(go(f, stack)), Box::new(go(a, stack))),
            Term::Lam(x, ty, b) => {
                stack.push((x.clone(), ty.clone()));
                let body = go(b, stack);
                stack.pop();
                Db::Lam(ty.clone(), Box::new(body))
            }
        }
    }
    go(t, &mut Vec::new())
}

fn free_names(d: &Db, out: &mut BTreeSet<Name>) {
    match d {
        Db::Free(x, _) => {
            out.insert(x.clone());
        }
        Db::App(f, a) => {
            free_names(f, out);
            free_names(a, out);
        }
        Db::Lam(_, b) => free_names(b, out),
        _ => {}
    }
}

/// Back to named form, naming binders `v0`, `v1`, ... by depth, skipping
/// names that are free anywhere in the term.
pub fn from_db(d: &Db) -> Term {
    let mut avoid = BTreeSet::new();
    free_names(d, &mut avoid);
    let mut names = Vec::new();
    let mut k = 0;
    fn go(d: &Db, stack: &mut Vec<(Name, Type)>, names: &mut Vec<Name>, k: &mut usize, avoid: &BTreeSet<Name>) -> Term {
        match d {
            Db::Free(x, ty) => Term::Var(x.clone(), ty.clone()),
            Db::Bound(i) => {
                let (x, ty) = &stack[stack.len() - 1 - i];
                Term::Var(x.clone(), ty.clone())
            }
            Db::Const(c, ty) => Term::Const(c.clone(), ty.clone()),
            Db::App(f, a) => Term::app(go(f, stack, names, k, avoid), go(a, stack, names, k, avoid)),
            Db::Lam(ty, b) => {
                let x = loop {
                    let x = name(format!("v{k}"));
                    *k += 1;
                    if !avoid.contains(&x) {
                        break x;
                    }
                };
                names.push(x.clone());
                stack.push((x.clone(), ty.clone()));
                let body = go(b, stack, names, k, avoid);
                stack.pop();
                Term::lam(&*x, ty.clone(), body)
            }
        }
    }
    go(d, &mut Vec::new(), &mut names, &mut k, &avoid)
}

/// Replaces the free variable `x:ty` by `s`, which has no loose indices.
pub fn subst(d: &Db, x: &str, ty: &Type, s: &Db) -> Db {
    match d {
        Db::Free(y, u) if &**y == x && u == ty => s.clone(),
        Db::App(f, a) => Db::App(Box::new(subst(f, x, ty, s)), Box::new(subst(a, x, ty, s))),
        Db::Lam(u, b) => Db::Lam(u.clone(), Box::new(subst(b, x, ty, s))),
        other => other.clone(),
    }
}

/// Replaces a type variable in every annotation. Variables whose types
/// become equal are not merged here: binding was fixed before the
/// substitution, which is exactly what the named implementation must
/// reproduce by renaming.
pub fn type_subst(d: &Db, a: &str, by: &Type) -> Db {
    match d {
        Db::Free(x, u) => Db::Free(x.clone(), u.subst(a, by)),
        Db::Const(c, u) => Db::Const(c.clone(), u.subst(a, by)),
        Db::Bound(i) => Db::Bound(*i),
        Db::App(f, g) => Db::App(Box::new(type_subst(f, a, by)), Box::new(type_subst(g, a, by))),
        Db::Lam(u, b) => Db::Lam(u.subst(a, by), Box::new(type_subst(b, a, by))),
    }
}

pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    to_db(a) == to_db(b)
}
