//! Pretty-printing of types and terms in the surface syntax.
//!
//! Output parses back to an alpha-equal term. To get there the printer
//! annotates the first occurrence of each free variable, renames binders that
//! would capture a free variable or a constant, and ascribes a type to any
//! constant whose instance the parser could not infer from its arguments.

use std::collections::{BTreeSet, HashSet};
use std::fmt::{self, Write};

use crate::syntax::term::variant;
use crate::syntax::{logic, name, Name, Signature, Term, Type, Var};

use super::unify::{has_meta, Unifier};

/// Words the lexer treats as keywords or infix operators.
pub const RESERVED: &[&str] = &["forall", "exists", "in", "Un", "o"];

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum TyLevel {
    Top,
    NoArrow,
    Arg,
}

fn write_ty<W: Write + ?Sized>(f: &mut W, ty: &Type, level: TyLevel) -> fmt::Result {
    if let Some((a, b)) = ty.dest_fun() {
        if level > TyLevel::Top {
            f.write_char('(')?;
        }
        write_ty(f, a, TyLevel::NoArrow)?;
        f.write_str(" -> ")?;
        write_ty(f, b, TyLevel::Top)?;
        if level > TyLevel::Top {
            f.write_char(')')?;
        }
        return Ok(());
    }
    match ty {
        Type::Var(v) => write!(f, "'{v}"),
        Type::Former(tf) if &*tf.name == crate::syntax::types::FUN => f.write_str("(->)"),
        Type::Former(tf) => f.write_str(&tf.name),
        Type::App(..) => {
            let (head, args) = ty.strip_app();
            if level == TyLevel::Arg {
                f.write_char('(')?;
            }
            write_ty(f, head, TyLevel::Arg)?;
            for a in args {
                f.write_char(' ')?;
                write_ty(f, a, TyLevel::Arg)?;
            }
            if level == TyLevel::Arg {
                f.write_char(')')?;
            }
            Ok(())
        }
    }
}

/// Writes a type; `atomic` asks for parentheses around anything compound.
pub fn write_type<W: Write + ?Sized>(f: &mut W, ty: &Type, atomic: bool) -> fmt::Result {
    write_ty(f, ty, if atomic { TyLevel::Arg } else { TyLevel::Top })
}

pub fn print_type(ty: &Type) -> String {
    let mut s = String::new();
    write_type(&mut s, ty, false).expect("writing to a string");
    s
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Assoc {
    Left,
    Right,
    Non,
}

/// Infix operators: constant name, surface symbol, precedence, associativity.
pub(crate) const INFIX: &[(&str, &str, u8, Assoc)] = &[
    (logic::IFF, "<->", 1, Assoc::Right),
    (logic::IMP, "-->", 2, Assoc::Right),
    (logic::OR, "\\/", 3, Assoc::Right),
    (logic::AND, "/\\", 4, Assoc::Right),
    (logic::EQ, "=", 6, Assoc::Non),
    ("in", "in", 6, Assoc::Non),
    ("Un", "Un", 7, Assoc::Left),
    ("o", "o", 8, Assoc::Left),
];

const NEG_PREC: u8 = 5;
const APP_PREC: u8 = 10;
const ATOM_PREC: u8 = 11;

fn infix(c: &str) -> Option<(&'static str, u8, Assoc)> {
    INFIX
        .iter()
        .find(|(n, ..)| *n == c)
        .map(|(_, s, p, a)| (*s, *p, *a))
}

/// Constants written with symbols or reserved words, which need parentheses
/// when they stand alone.
fn is_operator(c: &str) -> bool {
    infix(c).is_some() || c == logic::NOT || c == logic::FORALL || c == logic::EXISTS
}

struct Printer {
    ascribe: HashSet<*const Term>,
    free_names: BTreeSet<Name>,
    ambiguous_free: BTreeSet<Name>,
    avoid: BTreeSet<Name>,
    seen_free: HashSet<Var>,
    /// (original variable, printed name), innermost last.
    scope: Vec<(Var, Name)>,
}

fn generic_type(sig: Option<&Signature>, c: &str) -> Option<Type> {
    match sig {
        Some(s) => s.constant_type(c).cloned(),
        None => logic::core_constants()
            .into_iter()
            .find(|(n, _)| *n == c)
            .map(|(_, t)| t),
    }
}

fn analyse(
    t: &Term,
    sig: Option<&Signature>,
    u: &mut Unifier,
    occ: &mut Vec<(*const Term, Type)>,
) -> Type {
    match t {
        Term::Var(_, ty) => ty.clone(),
        Term::Const(c, ty) => match generic_type(sig, c) {
            Some(g) => {
                let m = u.instantiate(&g);
                occ.push((t as *const Term, m.clone()));
                m
            }
            None => ty.clone(),
        },
        Term::App(f, a) => {
            let tf = analyse(f, sig, u, occ);
            let ta = analyse(a, sig, u, occ);
            let r = u.fresh();
            u.unify(&tf, &Type::fun(ta, r.clone()));
            r
        }
        Term::Lam(_, ty, b) => Type::fun(ty.clone(), analyse(b, sig, u, occ)),
    }
}

fn collect_consts(t: &Term, out: &mut BTreeSet<Name>) {
    match t {
        Term::Const(c, _) => {
            out.insert(c.clone());
        }
        Term::App(f, a) => {
            collect_consts(f, out);
            collect_consts(a, out);
        }
        Term::Lam(_, _, b) => collect_consts(b, out),
        Term::Var(..) => {}
    }
}

impl Printer {
    fn new(sig: Option<&Signature>, t: &Term) -> Printer {
        let mut u = Unifier::default();
        let mut occ = Vec::new();
        analyse(t, sig, &mut u, &mut occ);
        let ascribe = occ
            .into_iter()
            .filter(|(_, m)| has_meta(&u.resolve(m)))
            .map(|(p, _)| p)
            .collect();
        let fv = t.fv();
        let mut free_names = BTreeSet::new();
        let mut ambiguous_free = BTreeSet::new();
        for (n, _) in &fv {
            if !free_names.insert(n.clone()) {
                ambiguous_free.insert(n.clone());
            }
        }
        let mut avoid = free_names.clone();
        collect_consts(t, &mut avoid);
        avoid.extend(RESERVED.iter().map(name));
        Printer {
            ascribe,
            free_names,
            ambiguous_free,
            avoid,
            seen_free: HashSet::new(),
            scope: Vec::new(),
        }
    }

    fn push_binder(&mut self, x: &Name, ty: &Type, body: &Term) -> Name {
        let shown = if self.avoid.contains(x) {
            let mut all = self.avoid.clone();
            all.extend(self.scope.iter().map(|(_, n)| n.clone()));
            all.extend(body.fv().into_iter().map(|(n, _)| n));
            all.extend(bound_names(body));
            variant(x, &all)
        } else {
            x.clone()
        };
        self.scope.push(((x.clone(), ty.clone()), shown.clone()));
        shown
    }

    fn var(&mut self, out: &mut String, n: &Name, ty: &Type) {
        let key = (n.clone(), ty.clone());
        if let Some(i) = self.scope.iter().rposition(|(v, _)| *v == key) {
            let shown = self.scope[i].1.clone();
            let shadowed = self.scope[i + 1..].iter().any(|(_, s)| *s == shown);
            if shadowed {
                self.annotated(out, &shown, ty);
            } else {
                out.push_str(&shown);
            }
            return;
        }
        let first = self.seen_free.insert(key);
        if first || self.ambiguous_free.contains(n) {
            self.annotated(out, n, ty);
        } else {
            out.push_str(n);
        }
    }

    fn annotated(&self, out: &mut String, n: &str, ty: &Type) {
        out.push('(');
        out.push_str(n);
        out.push(':');
        write_ty(out, ty, TyLevel::Top).expect("string write");
        out.push(')');
    }

    fn constant(&self, out: &mut String, t: &Term) {
        let Term::Const(c, ty) = t else { unreachable!() };
        let ascribe = self.ascribe.contains(&(t as *const Term)) || self.free_names.contains(c);
        let sym = infix(c).map(|(s, ..)| s).unwrap_or(c);
        if ascribe {
            write!(out, "({sym} :: ").expect("string write");
            write_ty(out, ty, TyLevel::Top).expect("string write");
            out.push(')');
        } else if is_operator(c) {
            write!(out, "({sym})").expect("string write");
        } else {
            out.push_str(c);
        }
    }

    fn needs_ascription(&self, t: &Term) -> bool {
        match t {
            Term::Const(c, _) => {
                self.ascribe.contains(&(t as *const Term)) || self.free_names.contains(c)
            }
            _ => false,
        }
    }

    fn term(&mut self, out: &mut String, t: &Term, prec: u8) {
        match t {
            Term::Var(n, ty) => self.var(out, n, ty),
            Term::Const(..) => self.constant(out, t),
            Term::Lam(..) => self.binder(out, t, prec),
            Term::App(..) => {
                let (head, args) = t.strip_app();
                if let Term::Const(c, _) = head {
                    if !self.needs_ascription(head) {
                        if args.len() == 2 {
                            if let Some((sym, p, assoc)) = infix(c) {
                                let (lp, rp) = match assoc {
                                    Assoc::Left => (p, p + 1),
                                    Assoc::Right => (p + 1, p),
                                    Assoc::Non => (p + 1, p + 1),
                                };
                                self.paren(out, prec > p, |s, out| {
                                    s.term(out, args[0], lp);
                                    write!(out, " {sym} ").expect("string write");
                                    s.term(out, args[1], rp);
                                });
                                return;
                            }
                        }
                        if args.len() == 1 && &**c == logic::NOT {
                            self.paren(out, prec > NEG_PREC, |s, out| {
                                out.push('~');
                                s.term(out, args[0], NEG_PREC);
                            });
                            return;
                        }
                        if args.len() == 1
                            && (&**c == logic::FORALL || &**c == logic::EXISTS)
                            && matches!(args[0], Term::Lam(..))
                        {
                            self.binder(out, t, prec);
                            return;
                        }
                    }
                }
                self.paren(out, prec > APP_PREC, |s, out| {
                    s.term(out, head, APP_PREC);
                    for a in &args {
                        out.push(' ');
                        s.term(out, a, ATOM_PREC);
                    }
                });
            }
        }
    }

    fn paren(&mut self, out: &mut String, wrap: bool, body: impl FnOnce(&mut Self, &mut String)) {
        if wrap {
            out.push('(');
        }
        body(self, out);
        if wrap {
            out.push(')');
        }
    }

    /// Which binder, if any, `t` is: `Some("\\")` for a lambda, or the
    /// quantifier name, together with its lambda.
    fn binder_parts<'t>(&self, t: &'t Term) -> Option<(&'static str, &'t Term)> {
        match t {
            Term::Lam(..) => Some(("\\", t)),
            Term::App(q, l) if matches!(&**l, Term::Lam(..)) && !self.needs_ascription(q) => {
                if q.is_const(logic::FORALL) {
                    Some(("forall", l))
                } else if q.is_const(logic::EXISTS) {
                    Some(("exists", l))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn binder(&mut self, out: &mut String, t: &Term, prec: u8) {
        let depth = self.scope.len();
        let wrap = prec > 0;
        if wrap {
            out.push('(');
        }
        let (kw, _) = self.binder_parts(t).expect("binder");
        out.push_str(kw);
        if kw != "\\" {
            out.push(' ');
        }
        let mut cur = t;
        let mut first = true;
        while let Some((k, lam)) = self.binder_parts(cur) {
            if k != kw {
                break;
            }
            let Term::Lam(x, ty, b) = lam else { unreachable!() };
            if !first {
                out.push(' ');
            }
            first = false;
            let shown = self.push_binder(x, ty, b);
            out.push_str(&shown);
            out.push(':');
            write_ty(out, ty, TyLevel::NoArrow).expect("string write");
            cur = b;
        }
        out.push_str(". ");
        self.term(out, cur, 0);
        self.scope.truncate(depth);
        if wrap {
            out.push(')');
        }
    }
}

fn bound_names(t: &Term) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    fn go(t: &Term, out: &mut BTreeSet<Name>) {
        match t {
            Term::Lam(x, _, b) => {
                out.insert(x.clone());
                go(b, out);
            }
            Term::App(f, a) => {
                go(f, out);
                go(a, out);
            }
            _ => {}
        }
    }
    go(t, &mut out);
    out
}

/// Prints a term knowing only the built-in constants.
pub fn print_term(t: &Term) -> String {
    print_with(None, t)
}

/// Prints a term so that it parses back in an environment with signature `sig`.
pub fn print_term_in(sig: &Signature, t: &Term) -> String {
    print_with(Some(sig), t)
}

fn print_with(sig: Option<&Signature>, t: &Term) -> String {
    let mut p = Printer::new(sig, t);
    let mut out = String::new();
    p.term(&mut out, t, 0);
    out
}

/// Several terms printed as one text scope: free variables are annotated only
/// at their first occurrence across all of them.
pub fn print_terms_in(sig: &Signature, ts: &[&Term]) -> Vec<String> {
    let mut bundle = ts.iter().fold(None::<Term>, |acc, t| {
        Some(match acc {
            None => (*t).clone(),
            Some(a) => Term::app(a, (*t).clone()),
        })
    });
    let Some(all) = bundle.take() else {
        return Vec::new();
    };
    // The printer's analysis runs on each term separately; free-variable
    // bookkeeping is shared.
    let mut shared = Printer::new(Some(sig), &all);
    ts.iter()
        .map(|t| {
            let fresh = Printer::new(Some(sig), t);
            shared.ascribe = fresh.ascribe;
            let mut out = String::new();
            shared.term(&mut out, t, 0);
            out
        })
        .collect()
}
