//! The session protocol: one JSON object per line in each direction.
//!
//! A request names a session and an operation:
//!
//! ```text
//! {"protocol_version":1,"session":"s1","op":"start_goal","payload":{"goal":"p --> p","label":"I"}}
//! ```
//!
//! and gets exactly one response line:
//!
//! ```text
//! {"protocol_version":1,"session":"s1","op":"start_goal","ok":true,"result":{...}}
//! {"protocol_version":1,"session":"s1","op":"apply","ok":false,"error":{"kind":"NotAbove",...}}
//! ```
//!
//! Operations: `start_goal` (`goal`, `label`), `apply` (`tactic`), `undo`,
//! `qed`, `state`, `lattice`, `parse` (`term`) and `close`. Errors are
//! reported in the response and leave the session unchanged. Sessions are
//! kept by id across connections; each session is strictly sequential.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::frontend::{parse_judgement, parse_term, print_term_in, print_type, ParseError, Span};
use crate::kernel::{Context, KernelError};
use crate::syntax::infer_type;
use crate::theory::TheoryEnv;

use super::{parse_tactic, EngineError, Goal, GoalState, RenderedGoal};

pub const PROTOCOL_VERSION: u64 = 1;

#[derive(Debug, Deserialize)]
struct Request {
    protocol_version: u64,
    #[serde(default)]
    session: String,
    op: String,
    #[serde(default)]
    payload: Value,
}

#[derive(Debug, Serialize)]
struct Response {
    protocol_version: u64,
    session: String,
    op: String,
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorBody>,
}

/// A structured error: a stable kind, a message, and a position in the
/// request text when there is one.
#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span: Option<SpanBody>,
}

#[derive(Debug, Serialize)]
pub struct SpanBody {
    pub line: usize,
    pub col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

impl From<Span> for SpanBody {
    fn from(s: Span) -> Self {
        SpanBody {
            line: s.line,
            col: s.col,
            end_line: s.end_line,
            end_col: s.end_col,
        }
    }
}

fn err(kind: &str, message: impl Into<String>) -> ErrorBody {
    ErrorBody {
        kind: kind.to_string(),
        message: message.into(),
        span: None,
    }
}

/// The variant name of an error, from its `Debug` form.
fn variant_name(d: &impl std::fmt::Debug) -> String {
    let s = format!("{d:?}");
    s.split(|c: char| !c.is_alphanumeric() && c != '_').next().unwrap_or_default().to_string()
}

fn parse_error(e: &ParseError) -> ErrorBody {
    let kind = match e {
        ParseError::Syntax(_) => "SyntaxError",
        ParseError::Type { .. } => "TypeError",
    };
    let message = match e {
        ParseError::Syntax(s) => s.message.clone(),
        ParseError::Type { expected, found, .. } => format!("expected {expected}, found {found}"),
    };
    ErrorBody {
        kind: kind.to_string(),
        message,
        span: Some(e.span().into()),
    }
}

fn engine_error(e: &EngineError) -> ErrorBody {
    match e {
        EngineError::Parse(p) => parse_error(p),
        EngineError::Kernel(k) => err(&variant_name(k), e.to_string()),
        EngineError::Lattice(l) => err(&variant_name(l), e.to_string()),
        _ => err(&variant_name(e), e.to_string()),
    }
}

fn kernel_error(e: &KernelError) -> ErrorBody {
    err(&variant_name(e), e.to_string())
}

struct Session {
    state: GoalState,
}

/// Serves any number of sessions over one shared, read-only environment.
pub struct Server {
    env: Arc<TheoryEnv>,
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
}

impl Server {
    pub fn new(env: TheoryEnv) -> Server {
        Server {
            env: Arc::new(env),
            sessions: Mutex::new(HashMap::new()),
        }
    }

    pub fn env(&self) -> &TheoryEnv {
        &self.env
    }

    fn session(&self, id: &str) -> Option<Arc<Mutex<Session>>> {
        self.sessions.lock().expect("session table").get(id).cloned()
    }

    /// Handles one request line and returns one response line (without the
    /// trailing newline). Never panics on bad input.
    pub fn handle_line(&self, line: &str) -> String {
        let resp = match serde_json::from_str::<Request>(line) {
            Ok(req) => self.handle(req),
            Err(e) => {
                let v: Value = serde_json::from_str(line).unwrap_or(Value::Null);
                Response {
                    protocol_version: PROTOCOL_VERSION,
                    session: v["session"].as_str().unwrap_or_default().to_string(),
                    op: v["op"].as_str().unwrap_or_default().to_string(),
                    ok: false,
                    result: None,
                    error: Some(err("BadRequest", e.to_string())),
                }
            }
        };
        serde_json::to_string(&resp).expect("responses serialise")
    }

    fn handle(&self, req: Request) -> Response {
        let out = if req.protocol_version != PROTOCOL_VERSION {
            Err(err(
                "VersionMismatch",
                format!("server speaks version {PROTOCOL_VERSION}, request has {}", req.protocol_version),
            ))
        } else {
            self.dispatch(&req)
        };
        let (ok, result, error) = match out {
            Ok(v) => (true, Some(v), None),
            Err(e) => (false, None, Some(e)),
        };
        Response {
            protocol_version: PROTOCOL_VERSION,
            session: req.session,
            op: req.op,
            ok,
            result,
            error,
        }
    }

    fn text<'a>(payload: &'a Value, field: &str) -> Result<&'a str, ErrorBody> {
        payload[field]
            .as_str()
            .ok_or_else(|| err("BadRequest", format!("payload.{field} must be a string")))
    }

    fn dispatch(&self, req: &Request) -> Result<Value, ErrorBody> {
        let env = &*self.env;
        match req.op.as_str() {
            "lattice" => Ok(lattice_json(env)),
            "parse" => {
                let text = Self::text(&req.payload, "term")?;
                let t = parse_term(env.signature(), text).map_err(|e| parse_error(&e))?;
                let ty = infer_type(&t).map(|ty| print_type(&ty)).unwrap_or_default();
                Ok(json!({"term": print_term_in(env.signature(), &t), "type": ty}))
            }
            "start_goal" => {
                let text = Self::text(&req.payload, "goal")?;
                let label = Self::text(&req.payload, "label")?;
                let label = env.label(label).map_err(|e| kernel_error(&e))?;
                let (hyps, concl) = parse_judgement(env.signature(), text).map_err(|e| parse_error(&e))?;
                let goal = Goal::new(hyps.into_iter().collect::<Context>(), concl, label);
                let state = GoalState::new(env, goal).map_err(|e| engine_error(&e))?;
                let body = state_json(env, &state);
                let s = Arc::new(Mutex::new(Session { state }));
                self.sessions
                    .lock()
                    .expect("session table")
                    .insert(req.session.clone(), s);
                Ok(body)
            }
            "close" => {
                let gone = self.sessions.lock().expect("session table").remove(&req.session);
                match gone {
                    Some(_) => Ok(json!({})),
                    None => Err(no_session(&req.session)),
                }
            }
            "apply" | "undo" | "qed" | "state" => {
                let s = self.session(&req.session).ok_or_else(|| no_session(&req.session))?;
                let mut s = s.lock().expect("session");
                match req.op.as_str() {
                    "apply" => {
                        let text = Self::text(&req.payload, "tactic")?;
                        let t = parse_tactic(text).map_err(|e| parse_error(&ParseError::Syntax(e)))?;
                        s.state.apply(env, &t).map_err(|e| engine_error(&e))?;
                    }
                    "undo" => s.state.undo().map_err(|e| engine_error(&e))?,
                    "qed" => {
                        let th = s.state.qed(env).map_err(|e| engine_error(&e))?;
                        let mut ctx: Vec<_> = th.context().iter().collect();
                        ctx.push(th.concl());
                        let mut printed = crate::frontend::print_terms_in(env.signature(), &ctx);
                        let formula = printed.pop().expect("formula");
                        return Ok(json!({
                            "theorem": {"context": printed, "formula": formula, "label": th.label().to_string()},
                        }));
                    }
                    _ => {}
                }
                Ok(state_json(env, &s.state))
            }
            other => Err(err("UnknownOp", format!("unknown op `{other}`"))),
        }
    }
}

fn no_session(id: &str) -> ErrorBody {
    err("NoSession", format!("no session `{id}`; send start_goal first"))
}

fn state_json(env: &TheoryEnv, s: &GoalState) -> Value {
    let goals: Vec<RenderedGoal> = s.render(env);
    let below: Vec<String> = match s.goals().first() {
        Some(g) => env
            .lattice()
            .members()
            .iter()
            .filter(|m| env.lattice().leq(m, &g.label).unwrap_or(false))
            .map(|m| m.to_string())
            .collect(),
        None => Vec::new(),
    };
    json!({
        "goals": goals,
        "solved": s.is_solved(),
        "history": s.history(),
        "lift_targets": below,
    })
}

fn lattice_json(env: &TheoryEnv) -> Value {
    let lat = env.lattice();
    let members: Vec<String> = lat.members().iter().map(|m| m.to_string()).collect();
    let order: Vec<(String, String)> = lat
        .order_pairs()
        .into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    // Covering pairs: a < b with nothing strictly between.
    let strict: Vec<&(String, String)> = order.iter().filter(|(a, b)| a != b).collect();
    let hasse: Vec<&(String, String)> = strict
        .iter()
        .copied()
        .filter(|(a, b)| {
            !strict
                .iter()
                .any(|(x, y)| x == a && y != b && strict.iter().any(|(u, v)| u == y && v == b))
        })
        .collect();
    let schemes: serde_json::Map<String, Value> = lat
        .schemes()
        .map(|(s, l)| (s.as_str().to_string(), Value::String(l.to_string())))
        .collect();
    json!({
        "members": members,
        "bottom": lat.bottom().to_string(),
        "order": order,
        "hasse": hasse,
        "schemes": schemes,
    })
}

/// Serves requests line by line until the input ends.
pub fn serve_lines(server: &Server, input: impl BufRead, mut output: impl Write) -> io::Result<()> {
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        writeln!(output, "{}", server.handle_line(&line))?;
        output.flush()?;
    }
    Ok(())
}

/// Accepts connections forever, one thread per connection.
pub fn serve_tcp(server: Arc<Server>, listener: TcpListener) -> io::Result<()> {
    for conn in listener.incoming() {
        let conn = conn?;
        let server = Arc::clone(&server);
        std::thread::spawn(move || {
            let Ok(read) = conn.try_clone() else { return };
            let _ = serve_lines(&server, io::BufReader::new(read), conn);
        });
    }
    Ok(())
}

/// A transcript line that did not get the recorded response.
#[derive(Debug, PartialEq, Eq, thiserror::Error)]
#[error("transcript line {line}: expected {expected}, got {actual}")]
pub struct TranscriptMismatch {
    pub line: usize,
    pub expected: String,
    pub actual: String,
}

/// Replays a transcript of `> request` and `< response` lines against a
/// fresh server, checking every response. Other lines are ignored.
pub fn check_transcript(server: &Server, transcript: &str) -> Result<usize, TranscriptMismatch> {
    let mut pending: Option<String> = None;
    let mut checked = 0;
    for (i, line) in transcript.lines().enumerate() {
        if let Some(req) = line.strip_prefix("> ") {
            pending = Some(server.handle_line(req));
        } else if let Some(expected) = line.strip_prefix("< ") {
            let actual = pending.take().unwrap_or_default();
            if actual != expected {
                return Err(TranscriptMismatch {
                    line: i + 1,
                    expected: expected.to_string(),
                    actual,
                });
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Runs requests and records the transcript that [`check_transcript`] reads.
pub fn record_transcript<'a>(server: &Server, requests: impl IntoIterator<Item = &'a str>) -> String {
    let mut out = String::new();
    for r in requests {
        out.push_str("> ");
        out.push_str(r);
        out.push('\n');
        out.push_str("< ");
        out.push_str(&server.handle_line(r));
        out.push('\n');
    }
    out
}
