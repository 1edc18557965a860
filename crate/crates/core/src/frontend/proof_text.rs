//! A line-oriented text form for recorded derivations.
//!
//! One node per line, premises before the nodes that use them, the root
//! last:
//!
//! ```text
//! <id> <rule> <premise-ids...> | <params...>
//! ```
//!
//! Parameters are `term "<t>"`, `type "<ty>"`, `var <x> "<ty>"`,
//! `tyvar <a>`, `label <l>` or `ctx <n> "<t1>" ... "<tn>"`, with terms and
//! types in surface syntax. Shared subproofs are written once.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::kernel::{Context, Param, ProofNode, RuleId};
use crate::syntax::{name, Signature};

use super::parser::{parse_term, parse_type, ParseError};
use super::printer::{print_term_in, print_type};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ProofTextError {
    pub line: usize,
    pub message: String,
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        if matches!(c, '"' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn write_param(sig: &Signature, p: &Param, out: &mut String) {
    match p {
        Param::Term(t) => out.push_str(&format!("term {}", quote(&print_term_in(sig, t)))),
        Param::Type(ty) => out.push_str(&format!("type {}", quote(&print_type(ty)))),
        Param::Var((x, ty)) => out.push_str(&format!("var {x} {}", quote(&print_type(ty)))),
        Param::TyVar(a) => out.push_str(&format!("tyvar {a}")),
        Param::Label(l) => out.push_str(&format!("label {l}")),
        Param::Ctx(c) => {
            out.push_str(&format!("ctx {}", c.len()));
            for t in c.iter() {
                out.push(' ');
                out.push_str(&quote(&print_term_in(sig, t)));
            }
        }
    }
}

/// Writes a derivation in text form.
pub fn export_proof(sig: &Signature, root: &Arc<ProofNode>) -> String {
    fn go(
        sig: &Signature,
        n: &Arc<ProofNode>,
        ids: &mut HashMap<*const ProofNode, usize>,
        out: &mut String,
    ) -> usize {
        if let Some(&id) = ids.get(&Arc::as_ptr(n)) {
            return id;
        }
        let prem: Vec<usize> = n.premises.iter().map(|p| go(sig, p, ids, out)).collect();
        let id = ids.len();
        ids.insert(Arc::as_ptr(n), id);
        out.push_str(&format!("{id} {}", n.rule));
        for p in prem {
            out.push_str(&format!(" {p}"));
        }
        out.push_str(" |");
        for p in &n.params {
            out.push(' ');
            write_param(sig, p, out);
        }
        out.push('\n');
        id
    }
    let mut out = String::new();
    go(sig, root, &mut HashMap::new(), &mut out);
    out
}

/// Splits a parameter list into bare words and quoted strings.
fn words(s: &str) -> Result<Vec<(bool, String)>, String> {
    let mut out = Vec::new();
    let mut it = s.chars().peekable();
    while let Some(&c) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c == '"' {
            it.next();
            let mut w = String::new();
            loop {
                match it.next() {
                    None => return Err("unterminated string".into()),
                    Some('"') => break,
                    Some('\\') => w.push(it.next().ok_or("unterminated string")?),
                    Some(ch) => w.push(ch),
                }
            }
            out.push((true, w));
        } else {
            let mut w = String::new();
            while let Some(&ch) = it.peek() {
                if ch.is_whitespace() || ch == '"' {
                    break;
                }
                w.push(ch);
                it.next();
            }
            out.push((false, w));
        }
    }
    Ok(out)
}

fn read_params(sig: &Signature, s: &str) -> Result<Vec<Param>, String> {
    let ws = words(s)?;
    let mut i = 0;
    let mut next = |quoted: bool, what: &str| -> Result<String, String> {
        let (q, w) = ws.get(i).cloned().ok_or_else(|| format!("missing {what}"))?;
        if q != quoted {
            return Err(format!("expected {what}, found `{w}`"));
        }
        i += 1;
        Ok(w)
    };
    let pe = |e: ParseError| e.to_string();
    let mut out = Vec::new();
    while let Ok(tag) = next(false, "a parameter") {
        let p = match tag.as_str() {
            "term" => Param::Term(parse_term(sig, &next(true, "a term")?).map_err(pe)?),
            "type" => Param::Type(parse_type(sig, &next(true, "a type")?).map_err(pe)?),
            "var" => {
                let x = next(false, "a variable name")?;
                Param::Var((name(x), parse_type(sig, &next(true, "a type")?).map_err(pe)?))
            }
            "tyvar" => Param::TyVar(name(next(false, "a type variable")?)),
            "label" => Param::Label(crate::lattice::Label::new(&next(false, "a label")?)),
            "ctx" => {
                let n: usize = next(false, "a count")?.parse().map_err(|_| "bad count".to_string())?;
                let mut ts = Vec::new();
                for _ in 0..n {
                    ts.push(parse_term(sig, &next(true, "a term")?).map_err(pe)?);
                }
                Param::Ctx(ts.into_iter().collect::<Context>())
            }
            other => return Err(format!("unknown parameter kind `{other}`")),
        };
        out.push(p);
    }
    if i < ws.len() {
        return Err(format!("unexpected `{}`", ws[i].1));
    }
    Ok(out)
}

/// Reads a derivation written by [`export_proof`]. The result is unchecked;
/// pass it to [`crate::kernel::replay`].
pub fn import_proof(sig: &Signature, text: &str) -> Result<Arc<ProofNode>, ProofTextError> {
    let mut nodes: Vec<Arc<ProofNode>> = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let err = |message: String| ProofTextError { line: k + 1, message };
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (head, params) = line.split_once('|').ok_or_else(|| err("missing `|`".into()))?;
        let mut hw = head.split_whitespace();
        let id: usize = hw
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err("missing node id".into()))?;
        if id != nodes.len() {
            return Err(err(format!("expected node {}, found {id}", nodes.len())));
        }
        let rule: RuleId = hw.next().ok_or_else(|| err("missing rule".into()))?.parse().map_err(err)?;
        let premises = hw
            .map(|s| {
                s.parse::<usize>()
                    .ok()
                    .and_then(|p| nodes.get(p).cloned())
                    .ok_or_else(|| err(format!("bad premise `{s}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let params = read_params(sig, params).map_err(err)?;
        nodes.push(Arc::new(ProofNode {
            rule,
            premises,
            params,
        }));
    }
    nodes.pop().ok_or(ProofTextError {
        line: 0,
        message: "empty proof".into(),
    })
}
