//! Theory scripts.
//!
//! A script is a sequence of commands. A command starts on a line with no
//! leading whitespace and continues over the indented lines below it. A
//! `theorem` continues through its closing `qed`. `--` starts a comment
//! (`-->` does not).
//!
//! ```text
//! lattice four_chain                 -- or "file.lat", or an indented block
//! type R                             -- opaque former, optional arity
//! synonym Set 'a = 'a -> Prop
//! const zero : R
//! define id := \x:'a. x              -- optionally `define c : ty := t`
//! axiom zero_ne : ~(zero = one)
//! datatype Bool = true | false with Bool_rec
//! typedef Fset = \S:Set 'a. finite S by fset_witness inj abs_fset proj rep_fset
//! import stdlib.thy
//! theorem peirce : C
//!   ((p --> q) --> p) --> p          -- optionally `h1, h2 |- φ`
//! proof
//!   intro
//!   raa
//!   ...
//! qed
//! ```
//!
//! Each line of a proof block is one tactic expression, applied to all open
//! goals. A theorem must be closed at exactly its declared label.

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::engine::{parse_tactic, EngineError, Goal, GoalState};
use crate::kernel::Context;
use crate::lattice::{load_lattice, Label, LatticeError, TaintLattice};
use crate::syntax::{name, Type};
use crate::theory::{
    declare_datatype, define_constant, theory_source, typedef, Constructor, DatatypeSpec,
    TheoryEnv, TheoryError,
};

use super::lexer::{Span, SyntaxError};
use super::parser::{ParseError, TermParser};

#[derive(Debug, Error)]
pub enum ScriptFailure {
    #[error("SyntaxError: {0}")]
    Syntax(String),
    #[error("TypeError: expected {expected}, found {found}")]
    Type { expected: String, found: String },
    #[error("{0}")]
    Theory(#[from] TheoryError),
    #[error("{0}")]
    Engine(#[from] EngineError),
    #[error("`{tactic}` failed: {error}\n{goal}")]
    Tactic {
        tactic: String,
        error: EngineError,
        goal: String,
    },
    #[error("{0}")]
    Lattice(#[from] LatticeError),
    #[error("{0}")]
    Io(String),
}

impl From<ParseError> for ScriptFailure {
    fn from(e: ParseError) -> Self {
        match e {
            ParseError::Syntax(e) => ScriptFailure::Syntax(e.message),
            ParseError::Type {
                expected, found, ..
            } => ScriptFailure::Type { expected, found },
        }
    }
}

/// A failed script: the file, the position in it, and what went wrong.
#[derive(Debug, Error)]
#[error("{file}:{}:{}: {failure}", span.line, span.col)]
pub struct ScriptError {
    pub file: String,
    pub span: Span,
    pub failure: Box<ScriptFailure>,
}

/// A piece of script text and where it starts. Lines after the first are
/// kept whole, so positions inside them need no column shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Text {
    pub text: String,
    pub line: usize,
    pub col: usize,
}

impl Text {
    fn sub(&self, from: usize, to: usize) -> Text {
        let before = &self.text[..from];
        let (line, col) = match before.rfind('\n') {
            Some(nl) => (
                self.line + before.matches('\n').count(),
                before[nl + 1..].chars().count() + 1,
            ),
            None => (self.line, self.col + before.chars().count()),
        };
        Text {
            text: self.text[from..to].to_string(),
            line,
            col,
        }
    }

    fn trim(&self) -> Text {
        let start = self.text.len() - self.text.trim_start().len();
        let end = self.text.trim_end().len().max(start);
        self.sub(start, end)
    }

    /// Splits at the first occurrence of `sep`.
    fn split_once(&self, sep: &str) -> Option<(Text, Text)> {
        let i = self.text.find(sep)?;
        Some((self.sub(0, i).trim(), self.sub(i + sep.len(), self.text.len()).trim()))
    }

    /// Splits at the last occurrence of the whole word `word`.
    fn split_word_last(&self, word: &str) -> Option<(Text, Text)> {
        let mut best = None;
        for (i, _) in self.text.match_indices(word) {
            let pre = self.text[..i].chars().next_back();
            let post = self.text[i + word.len()..].chars().next();
            if pre.is_some_and(char::is_whitespace) && post.is_some_and(char::is_whitespace) {
                best = Some(i);
            }
        }
        let i = best?;
        Some((self.sub(0, i).trim(), self.sub(i + word.len(), self.text.len()).trim()))
    }

    /// Splits on `sep` outside parentheses and braces.
    fn split_top(&self, sep: char) -> Vec<Text> {
        let mut out = Vec::new();
        let (mut depth, mut start) = (0i32, 0);
        for (i, c) in self.text.char_indices() {
            match c {
                '(' | '{' => depth += 1,
                ')' | '}' => depth -= 1,
                c if c == sep && depth == 0 => {
                    out.push(self.sub(start, i).trim());
                    start = i + c.len_utf8();
                }
                _ => {}
            }
        }
        out.push(self.sub(start, self.text.len()).trim());
        out
    }

    /// Splits on whitespace outside parentheses.
    fn words_top(&self) -> Vec<Text> {
        let mut out = Vec::new();
        let (mut depth, mut start) = (0i32, None);
        for (i, c) in self.text.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            if c.is_whitespace() && depth == 0 {
                if let Some(s) = start.take() {
                    out.push(self.sub(s, i));
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            out.push(self.sub(s, self.text.len()));
        }
        out
    }

    fn span(&self) -> Span {
        let lines = self.text.matches('\n').count();
        let end_col = match self.text.rfind('\n') {
            Some(nl) => self.text[nl + 1..].chars().count() + 1,
            None => self.col + self.text.chars().count(),
        };
        Span {
            line: self.line,
            col: self.col,
            end_line: self.line + lines,
            end_col,
        }
    }

    /// Maps a span relative to this text to a span in the file.
    fn place(&self, s: Span) -> Span {
        let shift = |l: usize, c: usize| {
            let col = if l <= 1 { self.col + c.saturating_sub(1) } else { c };
            (self.line + l.saturating_sub(1), col)
        };
        let (line, col) = shift(s.line, s.col);
        let (end_line, end_col) = shift(s.end_line, s.end_col);
        Span {
            line,
            col,
            end_line,
            end_col,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeSource {
    /// `four_chain` or `trivial`.
    Builtin(String),
    File(String),
    Inline(Text),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Lattice(LatticeSource),
    Type { name: String, arity: u32 },
    Synonym { name: String, params: Vec<String>, body: Text },
    Const { name: String, ty: Text },
    Define { name: String, ty: Option<Text>, body: Text },
    Axiom { name: String, formula: Text },
    Datatype {
        name: String,
        params: Vec<String>,
        constructors: Vec<(String, Vec<Text>)>,
        recursor: String,
    },
    Typedef {
        name: String,
        predicate: Text,
        witness: String,
        inj: String,
        proj: String,
    },
    Theorem {
        name: String,
        label: String,
        judgement: Text,
        tactics: Vec<Text>,
    },
    Import(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Command {
    pub span: Span,
    pub kind: CommandKind,
}

/// Theorems checked by a script, in order, with their labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub theorems: Vec<(String, Label)>,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, l) in &self.theorems {
            writeln!(f, "theorem {n} : {l}")?;
        }
        Ok(())
    }
}

fn strip_comment(line: &str) -> &str {
    let mut from = 0;
    while let Some(i) = line[from..].find("--") {
        let at = from + i;
        if line[at + 2..].starts_with('>') {
            from = at + 3;
            continue;
        }
        return &line[..at];
    }
    line
}

fn syntax(t: &Text, msg: impl Into<String>) -> SyntaxError {
    SyntaxError {
        span: t.span(),
        message: msg.into(),
    }
}

fn ident(t: &Text, what: &str) -> Result<String, SyntaxError> {
    let ok = !t.text.is_empty()
        && t.text.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
        && !t.text.starts_with('\'');
    if ok {
        Ok(t.text.clone())
    } else {
        Err(syntax(t, format!("expected {what}, found `{}`", t.text)))
    }
}

fn tyvar(t: &Text) -> Result<String, SyntaxError> {
    match t.text.strip_prefix('\'') {
        Some(v) if !v.is_empty() && v.chars().all(|c| c.is_alphanumeric() || c == '_') => {
            Ok(v.to_string())
        }
        _ => Err(syntax(t, format!("expected a type variable, found `{}`", t.text))),
    }
}

/// Joins lines `from..to` into one text starting at line `from`.
fn block(lines: &[&str], from: usize, to: usize) -> Text {
    Text {
        text: lines[from..to].join("\n"),
        line: from + 1,
        col: 1,
    }
}

fn is_blank(line: &str) -> bool {
    line.trim().is_empty()
}

/// Splits a script into commands.
pub fn parse_script(src: &str) -> Result<Vec<Command>, SyntaxError> {
    let lines: Vec<&str> = src.lines().map(strip_comment).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        if is_blank(lines[i]) {
            i += 1;
            continue;
        }
        if lines[i].starts_with(char::is_whitespace) {
            let t = block(&lines, i, i + 1).trim();
            return Err(syntax(&t, "indented line outside a command"));
        }
        let start = i;
        let keyword = lines[i].split_whitespace().next().unwrap_or_default();
        if keyword == "theorem" {
            let (cmd, next) = theorem(&lines, i)?;
            out.push(cmd);
            i = next;
            continue;
        }
        i += 1;
        while i < lines.len() && (is_blank(lines[i]) || lines[i].starts_with(char::is_whitespace)) {
            i += 1;
        }
        let text = block(&lines, start, i).trim();
        out.push(command(&text)?);
    }
    Ok(out)
}

fn theorem(lines: &[&str], start: usize) -> Result<(Command, usize), SyntaxError> {
    let header = block(lines, start, start + 1).trim();
    let rest = header.sub("theorem".len(), header.text.len()).trim();
    let (n, label) = rest
        .split_once(":")
        .ok_or_else(|| syntax(&header, "expected `theorem <name> : <label>`"))?;
    let name = ident(&n, "a theorem name")?;
    let label = ident(&label, "a label")?;
    let find = |from: usize, word: &str| (from..lines.len()).find(|&j| lines[j].trim() == word);
    let proof = find(start + 1, "proof")
        .ok_or_else(|| syntax(&header, format!("theorem {name} has no `proof`")))?;
    let qed = find(proof + 1, "qed")
        .ok_or_else(|| syntax(&header, format!("theorem {name} has no `qed`")))?;
    let judgement = block(lines, start + 1, proof).trim();
    if judgement.text.is_empty() {
        return Err(syntax(&header, format!("theorem {name} states nothing")));
    }
    let tactics = (proof + 1..qed)
        .filter(|&j| !is_blank(lines[j]))
        .map(|j| block(lines, j, j + 1).trim())
        .collect();
    let end = block(lines, qed, qed + 1).trim();
    let cmd = Command {
        span: header.span().to(end.span()),
        kind: CommandKind::Theorem {
            name,
            label,
            judgement,
            tactics,
        },
    };
    Ok((cmd, qed + 1))
}

fn command(text: &Text) -> Result<Command, SyntaxError> {
    let kw_len = text.text.find(char::is_whitespace).unwrap_or(text.text.len());
    let keyword = &text.text[..kw_len];
    let rest = text.sub(kw_len, text.text.len()).trim();
    let expect = |form: &str| syntax(text, format!("expected `{form}`"));
    let kind = match keyword {
        "lattice" => {
            let src = if rest.text.is_empty() {
                return Err(expect("lattice <name | \"file\">"));
            } else if rest.text.contains('\n') || rest.text.contains(':') {
                LatticeSource::Inline(rest)
            } else if let Some(f) = rest.text.strip_prefix('"').and_then(|s| s.strip_suffix('"')) {
                LatticeSource::File(f.to_string())
            } else {
                LatticeSource::Builtin(ident(&rest, "a lattice name")?)
            };
            CommandKind::Lattice(src)
        }
        "type" => {
            let ws = rest.words_top();
            let arity = match ws.as_slice() {
                [_] => 0,
                [_, a] => a
                    .text
                    .parse()
                    .map_err(|_| syntax(a, format!("expected an arity, found `{}`", a.text)))?,
                _ => return Err(expect("type <name> [arity]")),
            };
            CommandKind::Type {
                name: ident(&ws[0], "a type name")?,
                arity,
            }
        }
        "synonym" => {
            let (lhs, body) = rest.split_once("=").ok_or_else(|| expect("synonym <name> 'a.. = <type>"))?;
            let ws = lhs.words_top();
            let name = ident(ws.first().ok_or_else(|| expect("synonym <name> 'a.. = <type>"))?, "a name")?;
            let params = ws[1..].iter().map(tyvar).collect::<Result<_, _>>()?;
            CommandKind::Synonym { name, params, body }
        }
        "const" => {
            let (n, ty) = rest.split_once(":").ok_or_else(|| expect("const <name> : <type>"))?;
            CommandKind::Const {
                name: ident(&n, "a constant name")?,
                ty,
            }
        }
        "define" => {
            let (lhs, body) = rest.split_once(":=").ok_or_else(|| expect("define <name> := <term>"))?;
            let (n, ty) = match lhs.split_once(":") {
                Some((n, ty)) => (n, Some(ty)),
                None => (lhs, None),
            };
            CommandKind::Define {
                name: ident(&n, "a constant name")?,
                ty,
                body,
            }
        }
        "axiom" => {
            let (n, formula) = rest.split_once(":").ok_or_else(|| expect("axiom <name> : <formula>"))?;
            CommandKind::Axiom {
                name: ident(&n, "an axiom name")?,
                formula,
            }
        }
        "datatype" => datatype(&rest).ok_or_else(|| expect("datatype <name> 'a.. = <C args> | .. [with <recursor>]"))??,
        "typedef" => {
            let form = "typedef <name> = <predicate> by <theorem> inj <name> proj <name>";
            let (lhs, rhs) = rest.split_once("=").ok_or_else(|| expect(form))?;
            let (predicate, tail) = rhs.split_word_last("by").ok_or_else(|| expect(form))?;
            let ws = tail.words_top();
            let [w, inj_kw, inj, proj_kw, proj] = ws.as_slice() else {
                return Err(expect(form));
            };
            if inj_kw.text != "inj" || proj_kw.text != "proj" {
                return Err(expect(form));
            }
            CommandKind::Typedef {
                name: ident(&lhs, "a type name")?,
                predicate,
                witness: ident(w, "a theorem name")?,
                inj: ident(inj, "a constant name")?,
                proj: ident(proj, "a constant name")?,
            }
        }
        "import" => {
            let f = rest.text.trim_matches('"');
            if f.is_empty() {
                return Err(expect("import <file>"));
            }
            CommandKind::Import(f.to_string())
        }
        other => {
            let t = text.sub(0, kw_len);
            return Err(syntax(&t, format!("unknown command `{other}`")));
        }
    };
    Ok(Command {
        span: text.span(),
        kind,
    })
}

fn datatype(rest: &Text) -> Option<Result<CommandKind, SyntaxError>> {
    let (lhs, rhs) = rest.split_once("=")?;
    let (rhs, recursor) = match rhs.split_word_last("with") {
        Some((r, rec)) => (r, Some(rec)),
        None => (rhs, None),
    };
    Some((|| {
        let ws = lhs.words_top();
        let name = ident(ws.first().ok_or_else(|| syntax(&lhs, "expected a datatype name"))?, "a type name")?;
        let params = ws[1..].iter().map(tyvar).collect::<Result<_, _>>()?;
        let mut constructors = Vec::new();
        for alt in rhs.split_top('|') {
            let ws = alt.words_top();
            let c = ident(ws.first().ok_or_else(|| syntax(&alt, "expected a constructor"))?, "a constructor name")?;
            constructors.push((c, ws[1..].to_vec()));
        }
        let recursor = match recursor {
            Some(r) => ident(&r, "a recursor name")?,
            None => format!("{name}_rec"),
        };
        Ok(CommandKind::Datatype {
            name,
            params,
            constructors,
            recursor,
        })
    })())
}

struct Runner<'a> {
    file: &'a str,
    dir: Option<PathBuf>,
    stack: &'a mut Vec<String>,
    report: Report,
}

impl Runner<'_> {
    fn fail(&self, span: Span, failure: impl Into<ScriptFailure>) -> ScriptError {
        ScriptError {
            file: self.file.to_string(),
            span,
            failure: Box::new(failure.into()),
        }
    }

    fn parse_err(&self, t: &Text, e: ParseError) -> ScriptError {
        let span = t.place(e.span());
        self.fail(span, e)
    }

    fn ty(&self, env: &TheoryEnv, t: &Text) -> Result<Type, ScriptError> {
        let mut p = TermParser::new(env.signature());
        p.parse_type_text(&t.text).map_err(|e| self.parse_err(t, e))
    }

    fn term(&self, env: &TheoryEnv, t: &Text, expected: Option<&Type>) -> Result<crate::syntax::Term, ScriptError> {
        let mut p = TermParser::new(env.signature());
        let raw = p.parse_text(&t.text, expected).map_err(|e| self.parse_err(t, e))?;
        let mut out = p.finish(vec![raw]).map_err(|e| self.parse_err(t, e))?;
        Ok(out.remove(0))
    }

    fn judgement(&self, env: &TheoryEnv, t: &Text) -> Result<(Vec<crate::syntax::Term>, crate::syntax::Term), ScriptError> {
        let (hyps, goal) = match t.split_once("|-") {
            Some((h, g)) if h.text.is_empty() => (Vec::new(), g),
            Some((h, g)) => (h.split_top(','), g),
            None => (Vec::new(), t.clone()),
        };
        let prop = Type::prop();
        let mut p = TermParser::new(env.signature());
        let mut raw = Vec::new();
        for piece in hyps.iter().chain([&goal]) {
            raw.push(p.parse_text(&piece.text, Some(&prop)).map_err(|e| self.parse_err(piece, e))?);
        }
        let mut terms = p.finish(raw).map_err(|e| self.parse_err(t, e))?;
        let concl = terms.pop().expect("goal formula");
        Ok((terms, concl))
    }

    fn lattice(&self, src: &LatticeSource, span: Span) -> Result<TaintLattice, ScriptError> {
        match src {
            LatticeSource::Builtin(n) => match n.as_str() {
                "four_chain" => Ok(TaintLattice::four_chain()),
                "trivial" => Ok(TaintLattice::trivial()),
                _ => Err(self.fail(span, ScriptFailure::Syntax(format!("unknown lattice `{n}`")))),
            },
            LatticeSource::File(f) => {
                let path = self.resolve(f);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| self.fail(span, ScriptFailure::Io(format!("{}: {e}", path.display()))))?;
                load_lattice(&text).map_err(|e| self.fail(span, e))
            }
            LatticeSource::Inline(t) => load_lattice(&t.text).map_err(|e| self.fail(t.span(), e)),
        }
    }

    fn resolve(&self, f: &str) -> PathBuf {
        match &self.dir {
            Some(d) => d.join(f),
            None => PathBuf::from(f),
        }
    }

    fn import(&mut self, env: &TheoryEnv, f: &str, span: Span) -> Result<TheoryEnv, ScriptError> {
        let key = Path::new(f)
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| f.to_string());
        if env.has_imported(&key) {
            return Ok(env.clone());
        }
        if self.stack.contains(&key) {
            return Err(self.fail(span, ScriptFailure::Io(format!("import cycle through {key}"))));
        }
        let path = self.resolve(f);
        let (src, shown) = match std::fs::read_to_string(&path) {
            Ok(s) => (s, path.display().to_string()),
            Err(e) => match theory_source(&key) {
                Some(s) => (s.to_string(), key.clone()),
                None => {
                    return Err(self.fail(span, ScriptFailure::Io(format!("{}: {e}", path.display()))))
                }
            },
        };
        let cmds = parse_script(&src).map_err(|e| ScriptError {
            file: shown.clone(),
            span: e.span,
            failure: Box::new(ScriptFailure::Syntax(e.message)),
        })?;
        self.stack.push(key.clone());
        let mut inner = Runner {
            file: &shown,
            dir: path.parent().map(Path::to_path_buf),
            stack: &mut *self.stack,
            report: Report::default(),
        };
        let out = inner.run(env, &cmds);
        let sub = std::mem::take(&mut inner.report);
        self.stack.pop();
        let mut env = out?;
        self.report.theorems.extend(sub.theorems);
        env.mark_imported(&key);
        Ok(env)
    }

    fn run(&mut self, env: &TheoryEnv, cmds: &[Command]) -> Result<TheoryEnv, ScriptError> {
        let mut env = env.clone();
        for c in cmds {
            env = self.step(&env, c)?;
        }
        Ok(env)
    }

    fn step(&mut self, env: &TheoryEnv, c: &Command) -> Result<TheoryEnv, ScriptError> {
        let at = c.span;
        let theory = |r: Result<TheoryEnv, TheoryError>| r.map_err(|e| self.fail(at, e));
        match &c.kind {
            CommandKind::Lattice(src) => {
                let lat = self.lattice(src, at)?;
                theory(env.with_lattice(lat))
            }
            CommandKind::Type { name, arity } => theory(env.declare_type(name, *arity)),
            CommandKind::Synonym { name: n, params, body } => {
                let ty = self.ty(env, body)?;
                theory(env.declare_synonym(n, params.iter().map(name).collect(), ty))
            }
            CommandKind::Const { name, ty } => {
                let ty = self.ty(env, ty)?;
                theory(env.declare_constant(name, &ty))
            }
            CommandKind::Define { name, ty, body } => {
                let ty = ty.as_ref().map(|t| self.ty(env, t)).transpose()?;
                let t = self.term(env, body, ty.as_ref())?;
                theory(define_constant(env, name, &t).map(|(e, _)| e))
            }
            CommandKind::Axiom { name, formula } => {
                let t = self.term(env, formula, Some(&Type::prop()))?;
                theory(env.assert_axiom(name, &t).map(|(e, _)| e))
            }
            CommandKind::Datatype {
                name: n,
                params,
                constructors,
                recursor,
            } => {
                let scratch = theory(env.declare_type(n, params.len() as u32))?;
                let mut ctors = Vec::new();
                for (c, args) in constructors {
                    let args = args.iter().map(|a| self.ty(&scratch, a)).collect::<Result<_, _>>()?;
                    ctors.push(Constructor { name: name(c), args });
                }
                let spec = DatatypeSpec {
                    name: name(n),
                    params: params.iter().map(name).collect(),
                    constructors: ctors,
                    recursor: name(recursor),
                };
                theory(declare_datatype(env, &spec).map(|(e, _)| e))
            }
            CommandKind::Typedef {
                name,
                predicate,
                witness,
                inj,
                proj,
            } => {
                let pred = self.term(env, predicate, None)?;
                let w = env
                    .lookup_fact(witness)
                    .ok_or_else(|| self.fail(at, TheoryError::Missing(witness.clone())))?
                    .clone();
                theory(typedef(env, name, &pred, &w, inj, proj).map(|(e, _)| e))
            }
            CommandKind::Theorem {
                name,
                label,
                judgement,
                tactics,
            } => self.theorem(env, at, name, label, judgement, tactics),
            CommandKind::Import(f) => self.import(env, f, at),
        }
    }

    fn theorem(
        &mut self,
        env: &TheoryEnv,
        at: Span,
        name: &str,
        label: &str,
        judgement: &Text,
        tactics: &[Text],
    ) -> Result<TheoryEnv, ScriptError> {
        let label = env.label(label).map_err(|e| self.fail(at, TheoryError::Kernel(e)))?;
        let (hyps, concl) = self.judgement(env, judgement)?;
        let goal = Goal::new(hyps.into_iter().collect::<Context>(), concl, label.clone());
        let mut state = GoalState::new(env, goal).map_err(|e| self.fail(judgement.span(), e))?;
        for t in tactics {
            let tac = parse_tactic(&t.text).map_err(|e| {
                self.fail(t.place(e.span), ScriptFailure::Syntax(e.message))
            })?;
            state.apply(env, &tac).map_err(|error| {
                let goal = state.render(env).first().map(|g| g.to_string()).unwrap_or_default();
                self.fail(
                    t.span(),
                    ScriptFailure::Tactic {
                        tactic: t.text.clone(),
                        error,
                        goal,
                    },
                )
            })?;
        }
        let th = state.qed(env).map_err(|e| self.fail(at, e))?;
        let env = env.add_theorem(name, th).map_err(|e| self.fail(at, e))?;
        self.report.theorems.push((name.to_string(), label));
        Ok(env)
    }
}

/// Runs parsed commands. `file` names the script in diagnostics; imports
/// are resolved next to it, then among the shipped theories.
pub fn run_commands(env: &TheoryEnv, cmds: &[Command], file: &str) -> Result<(TheoryEnv, Report), ScriptError> {
    let mut stack = vec![file_key(file)];
    let mut r = Runner {
        file,
        dir: Path::new(file).parent().map(Path::to_path_buf),
        stack: &mut stack,
        report: Report::default(),
    };
    let env = r.run(env, cmds)?;
    Ok((env, r.report))
}

fn file_key(file: &str) -> String {
    Path::new(file)
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| file.to_string())
}

/// Parses and runs a script. The first failing command aborts the run.
pub fn run_script(env: &TheoryEnv, src: &str, file: &str) -> Result<(TheoryEnv, Report), ScriptError> {
    let cmds = parse_script(src).map_err(|e| ScriptError {
        file: file.to_string(),
        span: e.span,
        failure: Box::new(ScriptFailure::Syntax(e.message)),
    })?;
    let (mut env, report) = run_commands(env, &cmds, file)?;
    env.mark_imported(&file_key(file));
    Ok((env, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::stdlib_load;

    fn run(env: &TheoryEnv, src: &str) -> Result<(TheoryEnv, Report), ScriptError> {
        run_script(env, src, "test.thy")
    }

    #[test]
    fn empty_script_changes_nothing() {
        let env = TheoryEnv::default();
        let (out, report) = run(&env, "-- nothing here\n\n").unwrap();
        assert!(report.theorems.is_empty());
        assert_eq!(out.extensions().len(), env.extensions().len());
    }

    #[test]
    fn stdlib_checks() {
        let env = stdlib_load(&TheoryEnv::default()).unwrap_or_else(|e| panic!("{e}"));
        for (n, l) in [
            ("union_comm", "I"),
            ("cmpl_empty", "I"),
            ("cmpl_cmpl", "C"),
            ("lift_true", "I"),
            ("lift_false", "I"),
            ("drop_exists", "Ch"),
        ] {
            let th = env.theorem(n).unwrap_or_else(|| panic!("{n} missing"));
            assert_eq!(th.label().as_str(), l, "{n}");
            assert!(th.context().is_empty(), "{n}");
        }
    }

    #[test]
    fn theorem_report_and_spans() {
        let src = "const c : Prop\naxiom c_holds : c\n\ntheorem again : I\n  c /\\ c\nproof\n  conj\n  exact c_holds\n  exact c_holds\nqed\n";
        let (env, report) = run(&TheoryEnv::default(), src).unwrap();
        assert_eq!(report.to_string(), "theorem again : I\n");
        assert!(env.theorem("again").is_some());

        let bad = src.replace("  exact c_holds\n  exact", "  exact c_holds\n  exakt");
        let e = run(&TheoryEnv::default(), &bad).unwrap_err();
        assert_eq!((e.span.line, e.span.col), (9, 3));
        assert!(e.to_string().starts_with("test.thy:9:3: "), "{e}");
    }

    #[test]
    fn type_errors_point_into_the_formula() {
        let e = run(&TheoryEnv::default(), "axiom bad :\n  (p:Prop) (q:Prop)\n").unwrap_err();
        assert!(matches!(*e.failure, ScriptFailure::Type { .. }), "{e}");
        assert_eq!(e.span.line, 2);
    }

    #[test]
    fn unfinished_proof_is_reported() {
        let src = "theorem t : I\n  p --> p\nproof\n  intro\nqed\n";
        let e = run(&TheoryEnv::default(), src).unwrap_err();
        assert!(matches!(*e.failure, ScriptFailure::Engine(EngineError::GoalsRemain(1))), "{e}");
        assert_eq!(e.span.line, 1);
    }

    #[test]
    fn commands_parse() {
        let src = "lattice four_chain\ntype R\ntype pair 2\nsynonym Rel 'a = 'a -> 'a -> Prop\n\
                   datatype list 'a = nil | cons 'a (list 'a)\n";
        let cmds = parse_script(src).unwrap();
        assert_eq!(cmds.len(), 5);
        let CommandKind::Datatype { constructors, recursor, .. } = &cmds[4].kind else {
            panic!("{:?}", cmds[4]);
        };
        assert_eq!(recursor, "list_rec");
        assert_eq!(constructors[1].1.len(), 2);
        assert_eq!(constructors[1].1[1].text, "(list 'a)");
        let (env, _) = run(&TheoryEnv::default(), src).unwrap();
        assert!(env.signature().constant_type("cons").is_some());
    }

    #[test]
    fn unknown_command_is_a_syntax_error() {
        let e = run(&TheoryEnv::default(), "\nlemma x : I\n").unwrap_err();
        assert_eq!((e.span.line, e.span.col), (2, 1));
        assert!(matches!(*e.failure, ScriptFailure::Syntax(_)));
    }

    #[test]
    fn runs_are_deterministic() {
        let env = TheoryEnv::default();
        let src = crate::theory::theory_source("stdlib.thy").unwrap();
        let a = run(&env, src).unwrap().1.to_string();
        let b = run(&env, src).unwrap().1.to_string();
        assert_eq!(a, b);
    }
}
