//! Registered type-formers and constants, with the kinding and typing
//! relations checked against them.

use std::collections::BTreeMap;

use thiserror::Error;

use super::logic;
use super::term::{Term, Var};
use super::types::{match_type, name, Kind, Name, Type, TypeFormer, FUN, PROP};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypingError {
    #[error("unregistered type-former {0}")]
    UnregisteredFormer(Name),
    #[error("ill-kinded type: {0}")]
    IllKinded(String),
    #[error("unregistered constant {0}")]
    UnregisteredConstant(Name),
    #[error("constant {name} at type {instance} is not an instance of {generic}")]
    NotAnInstance {
        name: Name,
        generic: Type,
        instance: Type,
    },
    #[error("ill-typed term: {0}")]
    IllTyped(String),
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: Type, found: Type },
    #[error("name {0} is already registered")]
    DuplicateName(Name),
}

pub type Result<T, E = TypingError> = std::result::Result<T, E>;

/// A type synonym `name params = body`, expanded by the parser.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Synonym {
    pub params: Vec<Name>,
    pub body: Type,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    formers: BTreeMap<Name, Kind>,
    constants: BTreeMap<Name, Type>,
    synonyms: BTreeMap<Name, Synonym>,
}

impl Default for Signature {
    fn default() -> Self {
        Self::core()
    }
}

impl Signature {
    /// `Prop`, the function arrow, and the logical constants.
    pub fn core() -> Signature {
        let mut sig = Signature {
            formers: BTreeMap::new(),
            constants: BTreeMap::new(),
            synonyms: BTreeMap::new(),
        };
        sig.formers.insert(name(PROP), Kind(0));
        sig.formers.insert(name(FUN), Kind(2));
        for (c, ty) in logic::core_constants() {
            sig.constants.insert(name(c), ty);
        }
        sig
    }

    pub fn former_kind(&self, n: &str) -> Option<Kind> {
        self.formers.get(n).copied()
    }

    pub fn constant_type(&self, n: &str) -> Option<&Type> {
        self.constants.get(n)
    }

    pub fn synonym(&self, n: &str) -> Option<&Synonym> {
        self.synonyms.get(n)
    }

    pub fn formers(&self) -> impl Iterator<Item = (&Name, &Kind)> {
        self.formers.iter()
    }

    pub fn constants(&self) -> impl Iterator<Item = (&Name, &Type)> {
        self.constants.iter()
    }

    fn name_taken(&self, n: &str) -> bool {
        self.formers.contains_key(n) || self.synonyms.contains_key(n)
    }

    pub fn add_former(&mut self, n: &str, kind: Kind) -> Result<TypeFormer> {
        if self.name_taken(n) {
            return Err(TypingError::DuplicateName(name(n)));
        }
        self.formers.insert(name(n), kind);
        Ok(TypeFormer {
            name: name(n),
            kind,
        })
    }

    pub fn add_constant(&mut self, n: &str, generic: Type) -> Result<()> {
        if self.constants.contains_key(n) {
            return Err(TypingError::DuplicateName(name(n)));
        }
        if kind_of(self, &generic)? != Kind::STAR {
            return Err(TypingError::IllKinded(format!(
                "constant {n} must have a type of kind *"
            )));
        }
        self.constants.insert(name(n), generic);
        Ok(())
    }

    pub fn add_synonym(&mut self, n: &str, params: Vec<Name>, body: Type) -> Result<()> {
        if self.name_taken(n) {
            return Err(TypingError::DuplicateName(name(n)));
        }
        self.synonyms.insert(name(n), Synonym { params, body });
        Ok(())
    }
}

/// The kinding relation: the unique `k` with `|- ty : k`.
pub fn kind_of(sig: &Signature, ty: &Type) -> Result<Kind> {
    match ty {
        Type::Var(_) => Ok(Kind::STAR),
        Type::Former(f) => match sig.formers.get(&f.name) {
            Some(k) if *k == f.kind => Ok(f.kind),
            _ => Err(TypingError::UnregisteredFormer(f.name.clone())),
        },
        Type::App(h, a) => {
            let kh = kind_of(sig, h)?;
            let ka = kind_of(sig, a)?;
            if kh.arity() == 0 {
                return Err(TypingError::IllKinded(format!("{h} takes no arguments")));
            }
            if ka.arity() != 0 {
                return Err(TypingError::IllKinded(format!(
                    "argument {a} has kind {ka}, expected *"
                )));
            }
            Ok(Kind(kh.arity() - 1))
        }
    }
}

fn check_star(sig: &Signature, ty: &Type) -> Result<()> {
    let k = kind_of(sig, ty)?;
    if k != Kind::STAR {
        return Err(TypingError::IllKinded(format!("{ty} has kind {k}, expected *")));
    }
    Ok(())
}

/// The typing relation: the unique `ty` with `|- t : ty`.
pub fn type_of(sig: &Signature, t: &Term) -> Result<Type> {
    match t {
        Term::Var(_, ty) => {
            check_star(sig, ty)?;
            Ok(ty.clone())
        }
        Term::Const(c, ty) => {
            let generic = sig
                .constants
                .get(c)
                .ok_or_else(|| TypingError::UnregisteredConstant(c.clone()))?;
            if !match_type(generic, ty, &mut Vec::new()) {
                return Err(TypingError::NotAnInstance {
                    name: c.clone(),
                    generic: generic.clone(),
                    instance: ty.clone(),
                });
            }
            check_star(sig, ty)?;
            Ok(ty.clone())
        }
        Term::App(f, a) => {
            let tf = type_of(sig, f)?;
            let ta = type_of(sig, a)?;
            match tf.dest_fun() {
                Some((dom, cod)) if *dom == ta => Ok(cod.clone()),
                Some((dom, _)) => Err(TypingError::IllTyped(format!(
                    "argument has type {ta}, function expects {dom}"
                ))),
                None => Err(TypingError::IllTyped(format!(
                    "applying a term of non-function type {tf}"
                ))),
            }
        }
        Term::Lam(_, ty, b) => {
            check_star(sig, ty)?;
            Ok(Type::fun(ty.clone(), type_of(sig, b)?))
        }
    }
}

/// Structural type synthesis without consulting a signature. Returns `None`
/// on a malformed application.
pub fn infer_type(t: &Term) -> Option<Type> {
    match t {
        Term::Var(_, ty) | Term::Const(_, ty) => Some(ty.clone()),
        Term::App(f, a) => {
            let tf = infer_type(f)?;
            let (dom, cod) = tf.dest_fun()?;
            (infer_type(a)? == *dom).then(|| cod.clone())
        }
        Term::Lam(_, ty, b) => Some(Type::fun(ty.clone(), infer_type(b)?)),
    }
}

/// Checked capture-avoiding substitution `t[var := replacement]`.
pub fn term_subst(t: &Term, var: &Var, replacement: &Term) -> Result<Term> {
    let found = infer_type(replacement)
        .ok_or_else(|| TypingError::IllTyped("replacement is ill-typed".into()))?;
    if found != var.1 {
        return Err(TypingError::TypeMismatch {
            expected: var.1.clone(),
            found,
        });
    }
    Ok(t.subst(var, replacement))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prop_has_kind_star() {
        let sig = Signature::core();
        assert_eq!(kind_of(&sig, &Type::prop()).unwrap(), Kind(0));
        assert_eq!(kind_of(&sig, &Type::var("a")).unwrap(), Kind(0));
    }

    #[test]
    fn partially_applied_arrow() {
        let sig = Signature::core();
        let t = Type::app(Type::former(FUN, 2), Type::prop());
        assert_eq!(kind_of(&sig, &t).unwrap(), Kind(1));
        let bad = Type::app(Type::prop(), Type::prop());
        assert!(matches!(kind_of(&sig, &bad), Err(TypingError::IllKinded(_))));
    }

    #[test]
    fn unregistered_former() {
        let sig = Signature::core();
        let t = Type::former("Nat", 0);
        assert!(matches!(kind_of(&sig, &t), Err(TypingError::UnregisteredFormer(_))));
        // same name, different kind: unrelated former
        let t = Type::former("Prop", 1);
        assert!(matches!(kind_of(&sig, &t), Err(TypingError::UnregisteredFormer(_))));
    }

    #[test]
    fn conjunction_type() {
        let sig = Signature::core();
        let p = Type::prop();
        let c = Term::cnst(logic::AND, Type::funs([p.clone(), p.clone()], p.clone()));
        assert_eq!(type_of(&sig, &c).unwrap(), Type::funs([p.clone(), p.clone()], p));
    }

    #[test]
    fn identity_function_type() {
        let sig = Signature::core();
        let a = Type::var("a");
        let id = Term::lam("x", a.clone(), Term::var("x", a.clone()));
        assert_eq!(type_of(&sig, &id).unwrap(), Type::fun(a.clone(), a));
    }

    #[test]
    fn prop_is_not_a_function() {
        let sig = Signature::core();
        let t = Term::app(Term::var("x", Type::prop()), Term::var("y", Type::prop()));
        assert!(matches!(type_of(&sig, &t), Err(TypingError::IllTyped(_))));
    }

    #[test]
    fn constant_must_be_an_instance() {
        let sig = Signature::core();
        let bad = Term::cnst(logic::AND, Type::prop());
        assert!(matches!(type_of(&sig, &bad), Err(TypingError::NotAnInstance { .. })));
        let unk = Term::cnst("frob", Type::prop());
        assert!(matches!(type_of(&sig, &unk), Err(TypingError::UnregisteredConstant(_))));
    }

    #[test]
    fn subst_checks_types() {
        let t = Term::var("x", Type::prop());
        let err = term_subst(&t, &(name("x"), Type::prop()), &Term::var("y", Type::var("a")));
        assert!(matches!(err, Err(TypingError::TypeMismatch { .. })));
    }
}
