//! Tactic expressions and their concrete syntax.
//!
//! ```text
//! expr  ::= alt (";" alt)*
//! alt   ::= unary ("|" unary)*
//! unary ::= ("repeat" | "try" | "all") unary | "(" expr ")" | basic
//! ```
//!
//! Term arguments are written as quoted strings in the surface syntax.

use std::fmt;

use crate::frontend::lexer::{lex, Span, SyntaxError, Tok, Token};

/// A fact used by `rw`, `exact` and `apply`: a named theorem or axiom, or a
/// hypothesis of the goal written as a formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fact {
    Named(String),
    Hyp(String),
}

/// Basic tactics acting on the first goal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tactic {
    Assumption,
    Intro(Option<String>),
    Conj,
    Iff,
    Left,
    Right,
    Exists(String),
    Trivial,
    FalseElim,
    Mp(String),
    NegElim(String),
    Cases(String),
    ConjElim1(String),
    ConjElim2(String),
    Spec(String, String),
    Choose(String, String),
    EqMp(String),
    Refl,
    Sym,
    Trans(String),
    Ap,
    Abs,
    Ext(Option<String>),
    Beta,
    Unfold(Vec<String>),
    Change(String),
    Rewrite(Fact, bool),
    Exact(Fact),
    Apply(Fact),
    Generalize(String, String),
    Clear(String),
    Lem,
    Wem,
    Choice,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TacticExpr {
    Rule(Tactic),
    /// Drops the first goal to a lower label.
    LiftTo(String),
    Raa,
    CaseSplit(String),
    Cut(String),
    /// Runs the second tactic on the goals produced by the first.
    Then(Box<TacticExpr>, Box<TacticExpr>),
    OrElse(Box<TacticExpr>, Box<TacticExpr>),
    Repeat(Box<TacticExpr>),
    Try(Box<TacticExpr>),
    /// Runs the tactic on every goal in focus.
    All(Box<TacticExpr>),
    Id,
    Fail,
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::Named(n) => f.write_str(n),
            Fact::Hyp(t) => f.write_str(&quote(t)),
        }
    }
}

impl fmt::Display for Tactic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Tactic::*;
        match self {
            Assumption => f.write_str("assumption"),
            Intro(None) => f.write_str("intro"),
            Intro(Some(x)) => write!(f, "intro {x}"),
            Conj => f.write_str("conj"),
            Iff => f.write_str("iff"),
            Left => f.write_str("left"),
            Right => f.write_str("right"),
            Exists(t) => write!(f, "exists {}", quote(t)),
            Trivial => f.write_str("trivial"),
            FalseElim => f.write_str("false_elim"),
            Mp(t) => write!(f, "mp {}", quote(t)),
            NegElim(t) => write!(f, "neg_elim {}", quote(t)),
            Cases(t) => write!(f, "cases {}", quote(t)),
            ConjElim1(t) => write!(f, "conj_elim1 {}", quote(t)),
            ConjElim2(t) => write!(f, "conj_elim2 {}", quote(t)),
            Spec(a, b) => write!(f, "spec {} {}", quote(a), quote(b)),
            Choose(a, y) => write!(f, "choose {} {y}", quote(a)),
            EqMp(t) => write!(f, "eq_mp {}", quote(t)),
            Refl => f.write_str("refl"),
            Sym => f.write_str("sym"),
            Trans(t) => write!(f, "trans {}", quote(t)),
            Ap => f.write_str("ap"),
            Abs => f.write_str("abs"),
            Ext(None) => f.write_str("ext"),
            Ext(Some(x)) => write!(f, "ext {x}"),
            Beta => f.write_str("beta"),
            Unfold(cs) => {
                f.write_str("unfold")?;
                for c in cs {
                    if is_keyword(c) {
                        write!(f, " {}", quote(c))?;
                    } else {
                        write!(f, " {c}")?;
                    }
                }
                Ok(())
            }
            Change(t) => write!(f, "change {}", quote(t)),
            Rewrite(fact, false) => write!(f, "rw {fact}"),
            Rewrite(fact, true) => write!(f, "rw <- {fact}"),
            Exact(fact) => write!(f, "exact {fact}"),
            Apply(fact) => write!(f, "apply {fact}"),
            Generalize(t, x) => write!(f, "generalize {} {x}", quote(t)),
            Clear(t) => write!(f, "clear {}", quote(t)),
            Lem => f.write_str("lem"),
            Wem => f.write_str("wem"),
            Choice => f.write_str("choice"),
        }
    }
}

impl TacticExpr {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        let (own, wrap) = match self {
            TacticExpr::Then(..) => (0, prec > 0),
            TacticExpr::OrElse(..) => (1, prec > 1),
            TacticExpr::Repeat(_) | TacticExpr::Try(_) | TacticExpr::All(_) => (2, prec > 2),
            _ => (3, false),
        };
        if wrap {
            f.write_str("(")?;
        }
        match self {
            TacticExpr::Rule(t) => write!(f, "{t}")?,
            TacticExpr::LiftTo(l) => write!(f, "lift_to {l}")?,
            TacticExpr::Raa => f.write_str("raa")?,
            TacticExpr::CaseSplit(t) => write!(f, "case_split {}", quote(t))?,
            TacticExpr::Cut(t) => write!(f, "cut {}", quote(t))?,
            TacticExpr::Then(a, b) => {
                a.fmt_prec(f, own)?;
                f.write_str("; ")?;
                b.fmt_prec(f, own + 1)?;
            }
            TacticExpr::OrElse(a, b) => {
                a.fmt_prec(f, own)?;
                f.write_str(" | ")?;
                b.fmt_prec(f, own + 1)?;
            }
            TacticExpr::Repeat(t) => {
                f.write_str("repeat ")?;
                t.fmt_prec(f, own)?;
            }
            TacticExpr::Try(t) => {
                f.write_str("try ")?;
                t.fmt_prec(f, own)?;
            }
            TacticExpr::All(t) => {
                f.write_str("all ")?;
                t.fmt_prec(f, own)?;
            }
            TacticExpr::Id => f.write_str("id")?,
            TacticExpr::Fail => f.write_str("fail")?,
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for TacticExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

struct P {
    toks: Vec<Token>,
    pos: usize,
}

fn err(span: Span, message: impl Into<String>) -> SyntaxError {
    SyntaxError {
        span,
        message: message.into(),
    }
}

impl P {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
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

    fn expr(&mut self) -> Result<TacticExpr, SyntaxError> {
        let mut t = self.alt()?;
        while self.eat(";") {
            let r = self.alt()?;
            t = TacticExpr::Then(Box::new(t), Box::new(r));
        }
        Ok(t)
    }

    fn alt(&mut self) -> Result<TacticExpr, SyntaxError> {
        let mut t = self.unary()?;
        while self.eat("|") {
            let r = self.unary()?;
            t = TacticExpr::OrElse(Box::new(t), Box::new(r));
        }
        Ok(t)
    }

    fn string(&mut self, what: &str) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(err(self.span(), format!("expected a quoted {what}, found {other}"))),
        }
    }

    fn word(&mut self, what: &str) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(err(self.span(), format!("expected {what}, found {other}"))),
        }
    }

    fn opt_word(&mut self) -> Option<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Some(s)
            }
            _ => None,
        }
    }

    fn fact(&mut self) -> Result<Fact, SyntaxError> {
        match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(Fact::Hyp(s))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Fact::Named(s))
            }
            other => Err(err(self.span(), format!("expected a fact, found {other}"))),
        }
    }

    fn unary(&mut self) -> Result<TacticExpr, SyntaxError> {
        let sp = self.span();
        if self.eat("(") {
            let t = self.expr()?;
            if !self.eat(")") {
                return Err(err(self.span(), "expected `)`"));
            }
            return Ok(t);
        }
        let w = self.word("a tactic")?;
        use Tactic::*;
        let rule = |t| Ok(TacticExpr::Rule(t));
        match w.as_str() {
            "repeat" => Ok(TacticExpr::Repeat(Box::new(self.unary()?))),
            "try" => Ok(TacticExpr::Try(Box::new(self.unary()?))),
            "all" => Ok(TacticExpr::All(Box::new(self.unary()?))),
            "id" => Ok(TacticExpr::Id),
            "fail" => Ok(TacticExpr::Fail),
            "raa" => Ok(TacticExpr::Raa),
            "lift_to" => Ok(TacticExpr::LiftTo(self.word("a label")?)),
            "case_split" => Ok(TacticExpr::CaseSplit(self.string("formula")?)),
            "cut" => Ok(TacticExpr::Cut(self.string("formula")?)),
            "assumption" => rule(Assumption),
            "intro" => rule(Intro(self.opt_word())),
            "conj" => rule(Conj),
            "iff" => rule(Iff),
            "left" => rule(Left),
            "right" => rule(Right),
            "exists" => rule(Exists(self.string("witness")?)),
            "trivial" => rule(Trivial),
            "false_elim" => rule(FalseElim),
            "mp" => rule(Mp(self.string("formula")?)),
            "neg_elim" => rule(NegElim(self.string("formula")?)),
            "cases" => rule(Cases(self.string("disjunction")?)),
            "conj_elim1" => rule(ConjElim1(self.string("formula")?)),
            "conj_elim2" => rule(ConjElim2(self.string("formula")?)),
            "spec" => {
                let a = self.string("universal formula")?;
                rule(Spec(a, self.string("term")?))
            }
            "choose" => {
                let a = self.string("existential formula")?;
                rule(Choose(a, self.word("a variable name")?))
            }
            "eq_mp" => rule(EqMp(self.string("formula")?)),
            "refl" => rule(Refl),
            "sym" => rule(Sym),
            "trans" => rule(Trans(self.string("term")?)),
            "ap" => rule(Ap),
            "abs" => rule(Abs),
            "ext" => rule(Ext(self.opt_word())),
            "beta" => rule(Beta),
            "unfold" => {
                let mut cs = Vec::new();
                loop {
                    if let Some(c) = self.opt_word() {
                        cs.push(c);
                    } else if let Tok::Str(c) = self.peek().clone() {
                        self.bump();
                        cs.push(c);
                    } else {
                        break;
                    }
                }
                rule(Unfold(cs))
            }
            "change" => rule(Change(self.string("formula")?)),
            "rw" => {
                let rev = self.eat("<-");
                rule(Rewrite(self.fact()?, rev))
            }
            "exact" => rule(Exact(self.fact()?)),
            "apply" => rule(Apply(self.fact()?)),
            "generalize" => {
                let t = self.string("term")?;
                rule(Generalize(t, self.word("a variable name")?))
            }
            "clear" => rule(Clear(self.string("hypothesis")?)),
            "lem" => rule(Lem),
            "wem" => rule(Wem),
            "choice" => rule(Choice),
            other => Err(err(sp, format!("unknown tactic `{other}`"))),
        }
    }
}

/// Words that start a tactic, so an optional argument never swallows one.
const TACTIC_WORDS: &[&str] = &[
    "repeat", "try", "all", "id", "fail", "raa", "lift_to", "case_split", "cut", "assumption",
    "intro", "conj", "iff", "left", "right", "exists", "trivial", "false_elim", "mp", "neg_elim",
    "cases", "conj_elim1", "conj_elim2", "spec", "choose", "eq_mp", "refl", "sym", "trans", "ap",
    "abs", "ext", "beta", "unfold", "change", "rw", "exact", "apply", "generalize", "clear", "lem",
    "wem", "choice",
];

fn is_keyword(w: &str) -> bool {
    TACTIC_WORDS.contains(&w)
}

pub fn parse_tactic(text: &str) -> Result<TacticExpr, SyntaxError> {
    let toks = lex(text)?;
    let mut p = P { toks, pos: 0 };
    let t = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(err(p.span(), format!("unexpected {}", p.peek())));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tacticals_bind_as_documented() {
        let t = parse_tactic("intro; repeat conj | left; all assumption").unwrap();
        assert_eq!(t.to_string(), "intro; repeat conj | left; all assumption");
        let TacticExpr::Then(l, r) = &t else { panic!("{t:?}") };
        assert!(matches!(&**r, TacticExpr::All(_)));
        let TacticExpr::Then(_, m) = &**l else { panic!() };
        assert!(matches!(&**m, TacticExpr::OrElse(..)));
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "rw <- union_comm",
            "exact \"p /\\\\ q\"",
            "spec \"forall x:'a. P x\" \"y\"",
            "repeat (intro; conj)",
            "(a_tac | b_tac); c_tac",
            "unfold cmpl o \"id\"",
            "lift_to I",
            "choose \"exists x:'a. P x\" y",
        ] {
            let Ok(t) = parse_tactic(s) else {
                assert!(s.contains("_tac"));
                continue;
            };
            assert_eq!(parse_tactic(&t.to_string()).unwrap(), t, "{s}");
        }
    }

    #[test]
    fn optional_arguments_stop_at_tactics() {
        let t = parse_tactic("intro; intro x; unfold; beta").unwrap();
        assert_eq!(t.to_string(), "intro; intro x; unfold; beta");
        assert!(parse_tactic("intro conj").is_err());
    }

    #[test]
    fn unknown_tactic_is_a_syntax_error() {
        let e = parse_tactic("frobnicate").unwrap_err();
        assert_eq!(e.span.col, 1);
        assert!(parse_tactic("exists x").is_err());
        assert!(parse_tactic("intro;").is_err());
    }
}
