//! First-order unification over types with metavariables.
//!
//! Metavariables are type variables whose name starts with `?`, which the
//! surface syntax cannot produce.

use std::collections::{BTreeSet, HashMap};

use crate::syntax::{name, Name, Type};

#[derive(Clone, Debug, Default)]
pub(crate) struct Unifier {
    next: u32,
    sub: HashMap<Name, Type>,
}

pub(crate) fn is_meta(n: &str) -> bool {
    n.starts_with('?')
}

pub(crate) fn has_meta(ty: &Type) -> bool {
    ty.ftv().iter().any(|v| is_meta(v))
}

impl Unifier {
    pub fn fresh(&mut self) -> Type {
        self.next += 1;
        Type::Var(name(format!("?{}", self.next)))
    }

    /// Replaces every type variable of a generic type by a fresh metavariable.
    pub fn instantiate(&mut self, generic: &Type) -> Type {
        let sigma: Vec<(Name, Type)> = generic
            .ftv()
            .into_iter()
            .map(|v| (v, self.fresh()))
            .collect();
        generic.subst_many(&sigma)
    }

    pub fn resolve(&self, ty: &Type) -> Type {
        match ty {
            Type::Var(v) if is_meta(v) => match self.sub.get(v) {
                Some(t) => self.resolve(t),
                None => ty.clone(),
            },
            Type::Var(_) | Type::Former(_) => ty.clone(),
            Type::App(h, a) => Type::app(self.resolve(h), self.resolve(a)),
        }
    }

    fn occurs(&self, v: &str, ty: &Type) -> bool {
        self.resolve(ty).ftv().contains(v)
    }

    pub fn unify(&mut self, a: &Type, b: &Type) -> bool {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (&a, &b) {
            _ if a == b => true,
            (Type::Var(v), _) if is_meta(v) => {
                if self.occurs(v, &b) {
                    return false;
                }
                self.sub.insert(v.clone(), b.clone());
                true
            }
            (_, Type::Var(v)) if is_meta(v) => self.unify(&b, &a),
            (Type::App(h1, a1), Type::App(h2, a2)) => self.unify(h1, h2) && self.unify(a1, a2),
            _ => false,
        }
    }

    /// Unifies, leaving the substitution untouched on failure.
    pub fn try_unify(&mut self, a: &Type, b: &Type) -> bool {
        let saved = self.sub.clone();
        if self.unify(a, b) {
            return true;
        }
        self.sub = saved;
        false
    }

    /// Binds every unresolved metavariable in `tys` to a fresh ordinary type
    /// variable `a`, `b`, ... avoiding `used`.
    pub fn default_metas<'a>(&mut self, tys: impl IntoIterator<Item = &'a Type>, used: &mut BTreeSet<Name>) {
        let mut metas = Vec::new();
        for t in tys {
            for v in self.resolve(t).ftv() {
                if is_meta(&v) && !metas.contains(&v) {
                    metas.push(v);
                }
            }
        }
        let mut candidates = (0..).map(|i: u32| {
            let letter = (b'a' + (i % 26) as u8) as char;
            if i < 26 {
                letter.to_string()
            } else {
                format!("{letter}{}", i / 26)
            }
        });
        for m in metas {
            let n = candidates
                .by_ref()
                .find(|c| !used.contains(c.as_str()))
                .expect("unbounded names");
            used.insert(name(&n));
            self.sub.insert(m, Type::Var(name(n)));
        }
    }
}
