//! Tokens of the surface syntax, with ASCII spellings and Unicode aliases.

use std::fmt;

use thiserror::Error;

/// A region of source text; lines and columns start at 1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Span {
    pub line: usize,
    pub col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

impl Span {
    pub fn to(self, other: Span) -> Span {
        Span {
            line: self.line,
            col: self.col,
            end_line: other.end_line,
            end_col: other.end_col,
        }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct SyntaxError {
    pub span: Span,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// `'a`
    TyVar(String),
    Str(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::TyVar(s) => write!(f, "`'{s}`"),
            Tok::Str(s) => write!(f, "{s:?}"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

/// ASCII symbols, longest first.
const SYMBOLS: &[&str] = &[
    "<->", "-->", "->", "<-", "/\\", "\\/", "|-", "::", ":", ".", "(", ")", "{", "}", "|", ",",
    ";", "~", "=", "\\", "@", "[", "]", "*",
];

fn unicode_alias(c: char) -> Option<Tok> {
    Some(match c {
        '∀' => Tok::Ident("forall".into()),
        '∃' => Tok::Ident("exists".into()),
        '∈' => Tok::Ident("in".into()),
        '∪' => Tok::Ident("Un".into()),
        '∘' => Tok::Ident("o".into()),
        '⊤' => Tok::Ident("True".into()),
        '⊥' => Tok::Ident("False".into()),
        '∧' => Tok::Sym("/\\"),
        '∨' => Tok::Sym("\\/"),
        '¬' => Tok::Sym("~"),
        '⟶' => Tok::Sym("-->"),
        '⟷' | '↔' => Tok::Sym("<->"),
        '→' => Tok::Sym("->"),
        'λ' => Tok::Sym("\\"),
        '⊢' => Tok::Sym("|-"),
        _ => return None,
    })
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let at = |i: usize| chars.get(i).copied();
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let span_to = |l: usize, c2: usize| Span {
            line: start.0,
            col: start.1,
            end_line: l,
            end_col: c2,
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && at(i + 1) == Some('-') && at(i + 2) != Some('>') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            i += 1;
            col += 1;
            loop {
                match at(i) {
                    None | Some('\n') => {
                        return Err(SyntaxError {
                            span: span_to(line, col),
                            message: "unterminated string".into(),
                        })
                    }
                    Some('"') => {
                        i += 1;
                        col += 1;
                        break;
                    }
                    Some('\\') if matches!(at(i + 1), Some('"') | Some('\\')) => {
                        s.push(chars[i + 1]);
                        i += 2;
                        col += 2;
                    }
                    Some(ch) => {
                        s.push(ch);
                        i += 1;
                        col += 1;
                    }
                }
            }
            out.push(Token {
                tok: Tok::Str(s),
                span: span_to(line, col),
            });
            continue;
        }
        if c == '\'' {
            let mut j = i + 1;
            while j < chars.len() && ident_char(chars[j]) && chars[j] != '\'' {
                j += 1;
            }
            if j == i + 1 {
                return Err(SyntaxError {
                    span: span_to(line, col + 1),
                    message: "expected a type variable name after '".into(),
                });
            }
            let s: String = chars[i + 1..j].iter().collect();
            col += j - i;
            i = j;
            out.push(Token {
                tok: Tok::TyVar(s),
                span: span_to(line, col),
            });
            continue;
        }
        if ident_char(c) {
            let mut j = i;
            while j < chars.len() && ident_char(chars[j]) {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            col += j - i;
            i = j;
            out.push(Token {
                tok: Tok::Ident(s),
                span: span_to(line, col),
            });
            continue;
        }
        if let Some(tok) = unicode_alias(c) {
            i += 1;
            col += 1;
            out.push(Token {
                tok,
                span: span_to(line, col),
            });
            continue;
        }
        let rest = &chars[i..];
        let sym = SYMBOLS.iter().find(|s| {
            let n = s.chars().count();
            rest.len() >= n && s.chars().zip(rest).all(|(a, b)| a == *b)
        });
        match sym {
            Some(s) => {
                let n = s.chars().count();
                i += n;
                col += n;
                out.push(Token {
                    tok: Tok::Sym(s),
                    span: span_to(line, col),
                });
            }
            None => {
                return Err(SyntaxError {
                    span: span_to(line, col + 1),
                    message: format!("unexpected character {c:?}"),
                })
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span {
            line,
            col,
            end_line: line,
            end_col: col,
        },
    });
    Ok(out)
}
