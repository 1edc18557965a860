//! Kinds, type-formers and types.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Identifier shared by variables, constants and type-formers.
pub type Name = Arc<str>;

/// Builds a [`Name`] from anything string-like.
pub fn name(s: impl AsRef<str>) -> Name {
    Arc::from(s.as_ref())
}

/// A kind `* => ... => *` with `arity` arrows. Kinds are isomorphic to the naturals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Kind(pub u32);

impl Kind {
    /// The kind of types, `*`.
    pub const STAR: Kind = Kind(0);

    pub fn arity(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.0 {
            f.write_str("* => ")?;
        }
        f.write_str("*")
    }
}

/// A type-former `F:k`. The pair (name, kind) is its identity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeFormer {
    pub name: Name,
    pub kind: Kind,
}

impl TypeFormer {
    pub fn new(name: impl AsRef<str>, arity: u32) -> Self {
        TypeFormer {
            name: self::name(name),
            kind: Kind(arity),
        }
    }
}

pub const PROP: &str = "Prop";
pub const FUN: &str = "->";

/// Pre-types: type variables, formers, and applications.
///
/// Values built through the parser or the kernel are always well-kinded; the
/// raw constructors are public so that tests can build ill-kinded pre-types
/// and watch `kind_of` reject them.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Var(Name),
    Former(TypeFormer),
    App(Arc<Type>, Arc<Type>),
}

impl Type {
    pub fn var(n: impl AsRef<str>) -> Type {
        Type::Var(name(n))
    }

    pub fn former(n: impl AsRef<str>, arity: u32) -> Type {
        Type::Former(TypeFormer::new(n, arity))
    }

    pub fn app(head: Type, arg: Type) -> Type {
        Type::App(Arc::new(head), Arc::new(arg))
    }

    pub fn prop() -> Type {
        Type::former(PROP, 0)
    }

    /// `dom -> cod`.
    pub fn fun(dom: Type, cod: Type) -> Type {
        Type::app(Type::app(Type::former(FUN, 2), dom), cod)
    }

    /// `a1 -> a2 -> ... -> res`.
    pub fn funs(args: impl IntoIterator<Item = Type>, res: Type) -> Type {
        let args: Vec<Type> = args.into_iter().collect();
        args.into_iter().rev().fold(res, |acc, a| Type::fun(a, acc))
    }

    pub fn is_prop(&self) -> bool {
        matches!(self, Type::Former(f) if &*f.name == PROP && f.kind == Kind::STAR)
    }

    /// Splits a function type into domain and codomain.
    pub fn dest_fun(&self) -> Option<(&Type, &Type)> {
        if let Type::App(h, cod) = self {
            if let Type::App(arrow, dom) = &**h {
                if let Type::Former(f) = &**arrow {
                    if &*f.name == FUN && f.kind == Kind(2) {
                        return Some((dom, cod));
                    }
                }
            }
        }
        None
    }

    /// Splits an applied former `F t1 .. tn` into its head and arguments.
    pub fn strip_app(&self) -> (&Type, Vec<&Type>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Type::App(h, a) = cur {
            args.push(&**a);
            cur = h;
        }
        args.reverse();
        (cur, args)
    }

    /// Free type-variables.
    pub fn ftv(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_ftv(&mut out);
        out
    }

    pub(crate) fn collect_ftv(&self, out: &mut BTreeSet<Name>) {
        match self {
            Type::Var(n) => {
                out.insert(n.clone());
            }
            Type::Former(_) => {}
            Type::App(h, a) => {
                h.collect_ftv(out);
                a.collect_ftv(out);
            }
        }
    }

    pub fn has_tyvar(&self, v: &str) -> bool {
        match self {
            Type::Var(n) => &**n == v,
            Type::Former(_) => false,
            Type::App(h, a) => h.has_tyvar(v) || a.has_tyvar(v),
        }
    }

    /// `self[var := replacement]`. Types have no binders, so this is plain
    /// structural replacement.
    pub fn subst(&self, var: &str, replacement: &Type) -> Type {
        match self {
            Type::Var(n) if &**n == var => replacement.clone(),
            Type::Var(_) | Type::Former(_) => self.clone(),
            Type::App(h, a) => {
                if !self.has_tyvar(var) {
                    return self.clone();
                }
                Type::app(h.subst(var, replacement), a.subst(var, replacement))
            }
        }
    }

    /// Simultaneous substitution of several type variables.
    pub fn subst_many(&self, sigma: &[(Name, Type)]) -> Type {
        match self {
            Type::Var(n) => sigma
                .iter()
                .find(|(v, _)| v == n)
                .map(|(_, t)| t.clone())
                .unwrap_or_else(|| self.clone()),
            Type::Former(_) => self.clone(),
            Type::App(h, a) => Type::app(h.subst_many(sigma), a.subst_many(sigma)),
        }
    }

    /// Does `self` mention the former `name` anywhere?
    pub fn mentions_former(&self, former: &str) -> bool {
        match self {
            Type::Var(_) => false,
            Type::Former(f) => &*f.name == former,
            Type::App(h, a) => h.mentions_former(former) || a.mentions_former(former),
        }
    }
}

/// `type_subst` under its public name.
pub fn type_subst(ty: &Type, var: &str, replacement: &Type) -> Type {
    ty.subst(var, replacement)
}

/// `ftv_type` under its public name.
pub fn ftv_type(ty: &Type) -> BTreeSet<Name> {
    ty.ftv()
}

/// One-sided matching: finds `sigma` with `pattern.subst_many(sigma) == target`,
/// extending the bindings already in `sigma`.
pub fn match_type(pattern: &Type, target: &Type, sigma: &mut Vec<(Name, Type)>) -> bool {
    match (pattern, target) {
        (Type::Var(v), _) => {
            if let Some((_, bound)) = sigma.iter().find(|(n, _)| n == v) {
                bound == target
            } else {
                sigma.push((v.clone(), target.clone()));
                true
            }
        }
        (Type::Former(f), Type::Former(g)) => f == g,
        (Type::App(h1, a1), Type::App(h2, a2)) => {
            match_type(h1, h2, sigma) && match_type(a1, a2, sigma)
        }
        _ => false,
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::frontend::printer::write_type(f, self, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fun_type_round_trips_through_dest() {
        let t = Type::fun(Type::var("a"), Type::prop());
        let (d, c) = t.dest_fun().unwrap();
        assert_eq!(d, &Type::var("a"));
        assert!(c.is_prop());
    }

    #[test]
    fn substitution_replaces_one_occurrence() {
        let t = Type::fun(Type::var("a"), Type::var("b"));
        let r = t.subst("b", &Type::prop());
        assert_eq!(r, Type::fun(Type::var("a"), Type::prop()));
    }

    #[test]
    fn prop_has_no_free_type_variables() {
        assert!(Type::prop().ftv().is_empty());
    }

    #[test]
    fn matching_binds_consistently() {
        let pat = Type::fun(Type::var("a"), Type::var("a"));
        let mut s = Vec::new();
        assert!(match_type(&pat, &Type::fun(Type::prop(), Type::prop()), &mut s));
        let mut s = Vec::new();
        let bool_ty = Type::former("Bool", 0);
        assert!(!match_type(&pat, &Type::fun(Type::prop(), bool_ty), &mut s));
    }
}
