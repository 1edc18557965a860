//! Parsing types and terms, with type inference by unification.
//!
//! Name resolution for an unannotated identifier: the nearest enclosing
//! binder of that name, then a free variable already met in the same text,
//! then a constant, and otherwise a new free variable. `(x:ty)` always
//! denotes a variable; `(c :: ty)` always denotes a constant instance.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::syntax::{logic, name, type_of, Name, Signature, Term, Type, Var};

use super::lexer::{lex, Span, SyntaxError, Tok, Token};
use super::printer::{print_type, INFIX, RESERVED};
use super::unify::{is_meta, Unifier};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("SyntaxError at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("TypeError at {span}: expected {expected}, found {found}")]
    Type {
        span: Span,
        expected: String,
        found: String,
    },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Syntax(e) => e.span,
            ParseError::Type { span, .. } => *span,
        }
    }
}

type Result<T> = std::result::Result<T, ParseError>;

fn syntax(span: Span, message: impl Into<String>) -> ParseError {
    ParseError::Syntax(SyntaxError {
        span,
        message: message.into(),
    })
}

const NEG_PREC: u8 = 5;

/// Parser state shared by the texts of one scope, e.g. the hypotheses and
/// goal of a judgement.
pub struct TermParser<'s> {
    sig: &'s Signature,
    u: Unifier,
    free: Vec<Var>,
    scope: Vec<Var>,
    toks: Vec<Token>,
    pos: usize,
}

impl<'s> TermParser<'s> {
    pub fn new(sig: &'s Signature) -> Self {
        TermParser {
            sig,
            u: Unifier::default(),
            free: Vec::new(),
            scope: Vec::new(),
            toks: Vec::new(),
            pos: 0,
        }
    }

    /// Makes existing free variables (say, of a goal) visible by name.
    pub fn with_free(mut self, vars: impl IntoIterator<Item = Var>) -> Self {
        for v in vars {
            if !self.free.contains(&v) {
                self.free.push(v);
            }
        }
        self
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(x) if *x == s) {
            self.bump();
            return true;
        }
        false
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            return Ok(());
        }
        Err(syntax(self.span(), format!("expected `{s}`, found {}", self.peek())))
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn load(&mut self, text: &str) -> Result<()> {
        self.toks = lex(text)?;
        self.pos = 0;
        self.scope.clear();
        Ok(())
    }

    fn finish_text(&self) -> Result<()> {
        if *self.peek() != Tok::Eof {
            return Err(syntax(self.span(), format!("unexpected {}", self.peek())));
        }
        Ok(())
    }

    // Types.

    pub fn parse_type_text(&mut self, text: &str) -> Result<Type> {
        self.load(text)?;
        let t = self.ty()?;
        self.finish_text()?;
        Ok(t)
    }

    fn ty(&mut self) -> Result<Type> {
        let lhs = self.app_ty()?;
        if self.eat("->") {
            let rhs = self.ty()?;
            return Ok(Type::fun(lhs, rhs));
        }
        Ok(lhs)
    }

    /// A type without a top-level arrow.
    fn app_ty(&mut self) -> Result<Type> {
        if let Tok::Ident(n) = self.peek().clone() {
            let arity = self.former_arity(&n);
            if arity > 0 {
                self.bump();
                let mut args = Vec::new();
                for _ in 0..arity {
                    args.push(self.atomic_ty()?);
                }
                return self.apply_former(&n, args);
            }
        }
        self.atomic_ty()
    }

    fn former_arity(&self, n: &str) -> usize {
        if let Some(s) = self.sig.synonym(n) {
            return s.params.len();
        }
        self.sig.former_kind(n).map(|k| k.arity() as usize).unwrap_or(0)
    }

    fn apply_former(&self, n: &str, args: Vec<Type>) -> Result<Type> {
        if let Some(s) = self.sig.synonym(n) {
            let sigma: Vec<(Name, Type)> = s.params.iter().cloned().zip(args).collect();
            return Ok(s.body.subst_many(&sigma));
        }
        let k = self.sig.former_kind(n).map(|k| k.arity()).unwrap_or(0);
        Ok(args
            .into_iter()
            .fold(Type::former(n, k), Type::app))
    }

    fn atomic_ty(&mut self) -> Result<Type> {
        let sp = self.span();
        match self.peek().clone() {
            Tok::TyVar(v) => {
                self.bump();
                Ok(Type::var(v))
            }
            Tok::Ident(n) => {
                self.bump();
                if self.former_arity(&n) > 0 {
                    return Err(syntax(sp, format!("{n} needs {} type arguments", self.former_arity(&n))));
                }
                if self.sig.synonym(&n).is_some() || self.sig.former_kind(&n).is_some() {
                    return self.apply_former(&n, Vec::new());
                }
                Ok(Type::var(n))
            }
            Tok::Sym("(") => {
                self.bump();
                if self.eat("->") {
                    self.expect(")")?;
                    return Ok(Type::former(crate::syntax::types::FUN, 2));
                }
                let t = self.ty()?;
                self.expect(")")?;
                Ok(t)
            }
            other => Err(syntax(sp, format!("expected a type, found {other}"))),
        }
    }

    // Terms.

    /// Parses one text in the shared scope. Types may still contain
    /// metavariables until [`TermParser::finish`].
    pub fn parse_text(&mut self, text: &str, expected: Option<&Type>) -> Result<Term> {
        self.load(text)?;
        let sp = self.span();
        let (t, ty) = self.term(0)?;
        self.finish_text()?;
        if let Some(e) = expected {
            self.unify_at(sp, e, &ty)?;
        }
        Ok(t)
    }

    fn unify_at(&mut self, span: Span, expected: &Type, found: &Type) -> Result<()> {
        if self.u.unify(expected, found) {
            return Ok(());
        }
        Err(ParseError::Type {
            span,
            expected: print_type(&self.u.resolve(expected)),
            found: print_type(&self.u.resolve(found)),
        })
    }

    fn infix_at(&self) -> Option<(&'static str, u8, bool)> {
        let key = match self.peek() {
            Tok::Sym(s) => *s,
            Tok::Ident(s) if s == "in" || s == "Un" || s == "o" => {
                INFIX.iter().find(|(n, ..)| *n == s.as_str())?.0
            }
            _ => return None,
        };
        INFIX
            .iter()
            .find(|(_, sym, ..)| *sym == key)
            .map(|(c, _, p, a)| (*c, *p, matches!(a, super::printer::Assoc::Right)))
    }

    fn term(&mut self, min: u8) -> Result<(Term, Type)> {
        let start = self.span();
        let (mut lhs, mut lty) = self.prefix()?;
        while let Some((c, p, right)) = self.infix_at() {
            if p < min {
                break;
            }
            let op_span = self.span();
            self.bump();
            let (rhs, rty) = self.term(if right { p } else { p + 1 })?;
            let cty = self.const_instance(c, op_span)?;
            let res = self.u.fresh();
            let want = Type::funs([lty.clone(), rty.clone()], res.clone());
            self.unify_at(start.to(self.span()), &cty, &want)?;
            lhs = Term::apps(Term::Const(name(c), cty), [lhs, rhs]);
            lty = res;
        }
        Ok((lhs, lty))
    }

    fn const_instance(&mut self, c: &str, span: Span) -> Result<Type> {
        match self.sig.constant_type(c) {
            Some(g) => {
                let g = g.clone();
                Ok(self.u.instantiate(&g))
            }
            None => Err(syntax(span, format!("unknown constant {c}"))),
        }
    }

    fn prefix(&mut self) -> Result<(Term, Type)> {
        let sp = self.span();
        if self.eat("~") {
            let (t, ty) = self.term(NEG_PREC)?;
            self.unify_at(sp, &Type::prop(), &ty)?;
            return Ok((logic::mk_neg(t), Type::prop()));
        }
        if self.is_ident("forall") || self.is_ident("exists") || matches!(self.peek(), Tok::Sym("\\")) {
            return self.binder();
        }
        self.app()
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !RESERVED.contains(&s.as_str()),
            Tok::Sym("(") | Tok::Sym("{") => true,
            _ => false,
        }
    }

    fn app(&mut self) -> Result<(Term, Type)> {
        let start = self.span();
        let (mut f, mut fty) = self.atom()?;
        while self.starts_atom() {
            let asp = self.span();
            let (a, aty) = self.atom()?;
            let res = self.u.fresh();
            let want = Type::fun(aty.clone(), res.clone());
            if !self.u.unify(&fty, &want) {
                let rf = self.u.resolve(&fty);
                let expected = match rf.dest_fun() {
                    Some((dom, _)) => print_type(dom),
                    None => "a function type".to_string(),
                };
                let found = match rf.dest_fun() {
                    Some(_) => print_type(&self.u.resolve(&aty)),
                    None => print_type(&rf),
                };
                return Err(ParseError::Type {
                    span: if rf.dest_fun().is_some() { asp } else { start },
                    expected,
                    found,
                });
            }
            f = Term::app(f, a);
            fty = res;
        }
        Ok((f, fty))
    }

    fn resolve_ident(&mut self, n: &str, sp: Span) -> Result<(Term, Type)> {
        if let Some(v) = self.scope.iter().rev().find(|v| &*v.0 == n) {
            return Ok((Term::from_var(v), v.1.clone()));
        }
        if let Some(v) = self.free.iter().find(|v| &*v.0 == n) {
            return Ok((Term::from_var(v), v.1.clone()));
        }
        if self.sig.constant_type(n).is_some() {
            let ty = self.const_instance(n, sp)?;
            return Ok((Term::cnst(n, ty.clone()), ty));
        }
        let v = (name(n), self.u.fresh());
        self.free.push(v.clone());
        Ok((Term::from_var(&v), v.1))
    }

    fn annotated_var(&mut self, n: &str, ty: Type) -> (Term, Type) {
        for i in (0..self.scope.len()).rev() {
            if &*self.scope[i].0 == n {
                let bty = self.scope[i].1.clone();
                if self.u.try_unify(&bty, &ty) {
                    return (Term::from_var(&self.scope[i]), bty);
                }
            }
        }
        for i in 0..self.free.len() {
            if &*self.free[i].0 == n {
                let fty = self.free[i].1.clone();
                if self.u.try_unify(&fty, &ty) {
                    return (Term::from_var(&self.free[i]), fty);
                }
            }
        }
        let v = (name(n), ty);
        self.free.push(v.clone());
        (Term::from_var(&v), v.1)
    }

    /// An operator or reserved word standing for a constant inside parentheses.
    fn operator_const(&self, k: usize) -> Option<&'static str> {
        match self.peek_at(k) {
            Tok::Sym("~") => Some(logic::NOT),
            Tok::Ident(s) if s == "forall" => Some(logic::FORALL),
            Tok::Ident(s) if s == "exists" => Some(logic::EXISTS),
            Tok::Sym(s) => INFIX.iter().find(|(_, sym, ..)| sym == s).map(|(c, ..)| *c),
            Tok::Ident(s) => INFIX.iter().find(|(_, sym, ..)| *sym == s.as_str()).map(|(c, ..)| *c),
            _ => None,
        }
    }

    fn atom(&mut self) -> Result<(Term, Type)> {
        let sp = self.span();
        match self.peek().clone() {
            Tok::Ident(n) if !RESERVED.contains(&n.as_str()) => {
                self.bump();
                self.resolve_ident(&n, sp)
            }
            Tok::Sym("(") => {
                // (op) and (op :: ty)
                if let Some(c) = self.operator_const(1) {
                    if matches!(self.peek_at(2), Tok::Sym(")") | Tok::Sym("::")) {
                        self.bump();
                        self.bump();
                        let ty = self.const_instance(c, sp)?;
                        if self.eat("::") {
                            let want = self.ty()?;
                            self.unify_at(sp, &want, &ty)?;
                        }
                        self.expect(")")?;
                        return Ok((Term::cnst(c, ty.clone()), ty));
                    }
                }
                if let Tok::Ident(n) = self.peek_at(1).clone() {
                    match self.peek_at(2) {
                        Tok::Sym(":") => {
                            self.bump();
                            self.bump();
                            self.bump();
                            let ty = self.ty()?;
                            self.expect(")")?;
                            return Ok(self.annotated_var(&n, ty));
                        }
                        Tok::Sym("::") => {
                            self.bump();
                            self.bump();
                            self.bump();
                            let want = self.ty()?;
                            self.expect(")")?;
                            let ty = self.const_instance(&n, sp)?;
                            self.unify_at(sp, &want, &ty)?;
                            return Ok((Term::cnst(&n, ty.clone()), ty));
                        }
                        _ => {}
                    }
                }
                self.bump();
                let r = self.term(0)?;
                self.expect(")")?;
                Ok(r)
            }
            Tok::Sym("{") => {
                self.bump();
                let (x, ty) = self.binding()?;
                self.expect("|")?;
                self.scope.push((x.clone(), ty.clone()));
                let body_sp = self.span();
                let (b, bty) = self.term(0)?;
                self.scope.pop();
                self.unify_at(body_sp, &Type::prop(), &bty)?;
                self.expect("}")?;
                let lam = Term::lam(&*x, ty.clone(), b);
                Ok((lam, Type::fun(ty, Type::prop())))
            }
            other => Err(syntax(sp, format!("expected a term, found {other}"))),
        }
    }

    fn binding(&mut self) -> Result<(Name, Type)> {
        let sp = self.span();
        let x = match self.peek().clone() {
            Tok::Ident(n) if !RESERVED.contains(&n.as_str()) => {
                self.bump();
                n
            }
            other => return Err(syntax(sp, format!("expected a variable name, found {other}"))),
        };
        let ty = if self.eat(":") {
            self.app_ty()?
        } else {
            self.u.fresh()
        };
        Ok((name(x), ty))
    }

    fn binder(&mut self) -> Result<(Term, Type)> {
        let sp = self.span();
        let kw = match self.bump().tok {
            Tok::Ident(s) if s == "forall" => Some(logic::FORALL),
            Tok::Ident(s) if s == "exists" => Some(logic::EXISTS),
            _ => None,
        };
        let mut vars = vec![self.binding()?];
        while !matches!(self.peek(), Tok::Sym(".")) {
            vars.push(self.binding()?);
        }
        self.expect(".")?;
        let depth = self.scope.len();
        self.scope.extend(vars.iter().cloned());
        let body_sp = self.span();
        let (mut body, mut bty) = self.term(0)?;
        self.scope.truncate(depth);
        if kw.is_some() {
            self.unify_at(body_sp, &Type::prop(), &bty)?;
        }
        for v in vars.iter().rev() {
            match kw {
                Some(q) => {
                    let qty = Type::fun(Type::fun(v.1.clone(), Type::prop()), Type::prop());
                    body = Term::app(Term::cnst(q, qty), Term::abs(v, body));
                    bty = Type::prop();
                }
                None => {
                    body = Term::abs(v, body);
                    bty = Type::fun(v.1.clone(), bty);
                }
            }
        }
        let _ = sp;
        Ok((body, bty))
    }

    /// Resolves every metavariable, defaulting leftovers to fresh type
    /// variables, and type-checks the results against the signature.
    pub fn finish(&mut self, terms: Vec<Term>) -> Result<Vec<Term>> {
        let mut used: BTreeSet<Name> = BTreeSet::new();
        let mut metas = Vec::new();
        for t in &terms {
            collect_types(t, &mut metas);
        }
        for ty in &metas {
            for v in self.u.resolve(ty).ftv() {
                if !is_meta(&v) {
                    used.insert(v);
                }
            }
        }
        self.u.default_metas(metas.iter(), &mut used);
        let mut out = Vec::new();
        for t in terms {
            let z = zonk(&self.u, &t);
            if let Err(e) = type_of(self.sig, &z) {
                return Err(ParseError::Type {
                    span: self.toks.last().map(|t| t.span).unwrap_or_default(),
                    expected: "a well-typed term".into(),
                    found: e.to_string(),
                });
            }
            out.push(logic::normalize_iff(&z));
        }
        for v in &mut self.free {
            v.1 = self.u.resolve(&v.1);
        }
        Ok(out)
    }
}

fn collect_types(t: &Term, out: &mut Vec<Type>) {
    match t {
        Term::Var(_, ty) | Term::Const(_, ty) => out.push(ty.clone()),
        Term::App(f, a) => {
            collect_types(f, out);
            collect_types(a, out);
        }
        Term::Lam(_, ty, b) => {
            out.push(ty.clone());
            collect_types(b, out);
        }
    }
}

fn zonk(u: &Unifier, t: &Term) -> Term {
    match t {
        Term::Var(n, ty) => Term::Var(n.clone(), u.resolve(ty)),
        Term::Const(n, ty) => Term::Const(n.clone(), u.resolve(ty)),
        Term::App(f, a) => Term::app(zonk(u, f), zonk(u, a)),
        Term::Lam(x, ty, b) => Term::lam(&**x, u.resolve(ty), zonk(u, b)),
    }
}

pub fn parse_type(sig: &Signature, text: &str) -> Result<Type> {
    TermParser::new(sig).parse_type_text(text)
}

/// Parses a term with no expected type.
pub fn parse_term(sig: &Signature, text: &str) -> Result<Term> {
    let mut p = TermParser::new(sig);
    let t = p.parse_text(text, None)?;
    Ok(p.finish(vec![t])?.remove(0))
}

/// Parses a formula.
pub fn parse_prop(sig: &Signature, text: &str) -> Result<Term> {
    let mut p = TermParser::new(sig);
    let t = p.parse_text(text, Some(&Type::prop()))?;
    Ok(p.finish(vec![t])?.remove(0))
}

/// Parses `h1, ..., hn |- goal` (or just `goal`) in one scope.
pub fn parse_judgement(sig: &Signature, text: &str) -> Result<(Vec<Term>, Term)> {
    let (hyps, goal) = split_turnstile(text);
    let mut p = TermParser::new(sig);
    let mut ts = Vec::new();
    for h in hyps {
        ts.push(p.parse_text(h, Some(&Type::prop()))?);
    }
    ts.push(p.parse_text(goal, Some(&Type::prop()))?);
    let mut out = p.finish(ts)?;
    let goal = out.pop().expect("goal parsed");
    Ok((out, goal))
}

/// Splits `h1, h2 |- goal` at the turnstile and at top-level commas.
pub fn split_turnstile(text: &str) -> (Vec<&str>, &str) {
    let Some(i) = text.find("|-").or_else(|| text.find('⊢')) else {
        return (Vec::new(), text);
    };
    let width = if text[i..].starts_with("|-") { 2 } else { '⊢'.len_utf8() };
    let (hyps, goal) = (&text[..i], &text[i + width..]);
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (j, c) in hyps.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&hyps[start..j]);
                start = j + 1;
            }
            _ => {}
        }
    }
    parts.push(&hyps[start..]);
    let parts = parts.into_iter().filter(|s| !s.trim().is_empty()).collect();
    (parts, goal)
}
