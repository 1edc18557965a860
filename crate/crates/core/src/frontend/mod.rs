//! Surface syntax: lexing, parsing, printing, theory scripts and proof export.

pub mod lexer;
pub mod parser;
pub mod printer;
pub mod proof_text;
pub mod script;
pub(crate) mod unify;

pub use lexer::{Span, SyntaxError};
pub use parser::{parse_judgement, parse_prop, parse_term, parse_type, ParseError, TermParser};
pub use printer::{print_term, print_term_in, print_terms_in, print_type};
pub use proof_text::{export_proof, import_proof, ProofTextError};
pub use script::{parse_script, run_commands, run_script, Report, ScriptError, ScriptFailure};
