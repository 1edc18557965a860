//! Taint-labels and statically configured taint lattices.
//!
//! A lattice is read from a small line-oriented document:
//!
//! ```text
//! labels: I W C Ch
//! bottom: I
//! join: W I = W
//! join: C W = C
//! join: Ch * = Ch
//! axiom: Nlem @ C
//! ```
//!
//! Omitted symmetric entries are mirrored, `a ⊔ a = a` and `bottom ⊔ a = a`
//! are filled in, and `*` stands for every label. Labels configured to be
//! below each other in both directions are collapsed onto the one declared
//! first. Every lattice law is then checked over all pairs and triples.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

/// A taint-label. Labels handed out by a [`TaintLattice`] are canonical:
/// two labels are equivalent exactly when they are equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(s: &str) -> Label {
        Label(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Foundational axiom schemes that can be bound to a label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    /// Excluded middle, `p \/ ~p`.
    Lem,
    /// Weak excluded middle, `~p \/ ~~p`.
    Wem,
    /// Choice, `(forall x. exists y. P x y) --> exists f. forall x. P x (f x)`.
    Choice,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Lem, Scheme::Wem, Scheme::Choice];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Lem => "Nlem",
            Scheme::Wem => "WEM",
            Scheme::Choice => "Choice",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = LatticeError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.as_str() == s)
            .ok_or_else(|| LatticeError::UnknownScheme(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("not a lattice: {law} fails at ({})", .counterexample.join(", "))]
    NotALattice {
        law: &'static str,
        counterexample: Vec<String>,
    },
    #[error("no bottom label: {0}")]
    NoBottom(String),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("unknown axiom scheme {0}")]
    UnknownScheme(String),
    #[error("axiom scheme {0} bound more than once")]
    DuplicateAxiom(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

type Result<T> = std::result::Result<T, LatticeError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaintLattice {
    members: Vec<Label>,
    /// Every declared name, including collapsed ones, to its canonical index.
    index: BTreeMap<String, usize>,
    table: Vec<Vec<usize>>,
    bottom: usize,
    axioms: BTreeMap<Scheme, usize>,
}

/// The shipped lattice `I <= W <= C <= Ch`.
pub const FOUR_CHAIN: &str = "\
labels: I W C Ch
bottom: I
join: W I = W
join: C I = C
join: C W = C
join: Ch * = Ch
axiom: WEM @ W
axiom: Nlem @ C
axiom: Choice @ Ch
";

struct RawSpec {
    labels: Vec<String>,
    bottom: Option<String>,
    joins: Vec<(String, String, String, usize)>,
    axioms: Vec<(String, String, usize)>,
}

fn parse_spec(text: &str) -> Result<RawSpec> {
    let mut spec = RawSpec {
        labels: Vec::new(),
        bottom: None,
        joins: Vec::new(),
        axioms: Vec::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line.starts_with("--") {
            continue;
        }
        let err = |message: &str| LatticeError::Parse {
            line: line_no,
            message: message.to_string(),
        };
        let (key, rest) = line.split_once(':').ok_or_else(|| err("expected `key: value`"))?;
        let rest = rest.trim();
        match key.trim() {
            "labels" => {
                for l in rest.split_whitespace() {
                    if l == "*" || spec.labels.iter().any(|x| x == l) {
                        return Err(err(&format!("bad or duplicate label {l}")));
                    }
                    spec.labels.push(l.to_string());
                }
            }
            "bottom" => spec.bottom = Some(rest.to_string()),
            "join" => {
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| err("expected `a b = c`"))?;
                let ops: Vec<&str> = lhs.split_whitespace().collect();
                let res = rhs.trim();
                if ops.len() != 2 || res.is_empty() || res.contains(char::is_whitespace) {
                    return Err(err("expected `a b = c`"));
                }
                spec.joins
                    .push((ops[0].to_string(), ops[1].to_string(), res.to_string(), line_no));
            }
            "axiom" => {
                let (sc, l) = rest.split_once('@').ok_or_else(|| err("expected `Scheme @ label`"))?;
                spec.axioms
                    .push((sc.trim().to_string(), l.trim().to_string(), line_no));
            }
            other => return Err(err(&format!("unknown key {other}"))),
        }
    }
    Ok(spec)
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Parses and validates a lattice document.
#[allow(clippy::needless_range_loop)]
pub fn load_lattice(text: &str) -> Result<TaintLattice> {
    let spec = parse_spec(text)?;
    let n = spec.labels.len();
    let pos = |l: &str| {
        spec.labels
            .iter()
            .position(|x| x == l)
            .ok_or_else(|| LatticeError::UnknownLabel(l.to_string()))
    };
    let bottom_name = spec
        .bottom
        .clone()
        .ok_or_else(|| LatticeError::NoBottom("no `bottom:` line".into()))?;
    let bottom_raw = pos(&bottom_name)
        .map_err(|_| LatticeError::NoBottom(format!("{bottom_name} is not a declared label")))?;

    // expand wildcards
    let mut entries = Vec::new();
    for (a, b, c, line) in &spec.joins {
        let expand = |x: &str| -> Result<Vec<usize>> {
            if x == "*" {
                Ok((0..n).collect())
            } else {
                Ok(vec![pos(x)?])
            }
        };
        let c = pos(c).map_err(|_| LatticeError::Parse {
            line: *line,
            message: format!("unknown label {c}"),
        })?;
        for ia in expand(a)? {
            for ib in expand(b)? {
                entries.push((ia, ib, c));
            }
        }
    }

    // collapse labels that are configured below each other both ways
    let mut below = vec![vec![false; n]; n];
    for &(a, b, c) in &entries {
        if c == b {
            below[a][b] = true;
        }
        if c == a {
            below[b][a] = true;
        }
    }
    let mut parent: Vec<usize> = (0..n).collect();
    for a in 0..n {
        for b in 0..n {
            if a != b && below[a][b] && below[b][a] {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                let (lo, hi) = (ra.min(rb), ra.max(rb));
                parent[hi] = lo;
            }
        }
    }
    let roots: Vec<usize> = (0..n).filter(|&i| find(&mut parent, i) == i).collect();
    let canon_of: Vec<usize> = (0..n)
        .map(|i| {
            let r = find(&mut parent, i);
            roots.iter().position(|&x| x == r).expect("root present")
        })
        .collect();
    let m = roots.len();
    let members: Vec<Label> = roots.iter().map(|&r| Label::new(&spec.labels[r])).collect();
    let names = |idx: &[usize]| idx.iter().map(|&i| members[i].to_string()).collect();

    let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; m]; m];
    for &(a, b, c) in &entries {
        let (a, b, c) = (canon_of[a], canon_of[b], canon_of[c]);
        for (x, y) in [(a, b), (b, a)] {
            match table[x][y] {
                Some(prev) if prev != c => {
                    return Err(LatticeError::NotALattice {
                        law: "commutativity",
                        counterexample: names(&[x, y]),
                    })
                }
                _ => table[x][y] = Some(c),
            }
        }
    }
    let bottom = canon_of[bottom_raw];
    for a in 0..m {
        table[a][a].get_or_insert(a);
        table[bottom][a].get_or_insert(a);
        table[a][bottom].get_or_insert(a);
    }
    let mut full = vec![vec![0; m]; m];
    for a in 0..m {
        for b in 0..m {
            full[a][b] = table[a][b].ok_or_else(|| LatticeError::NotALattice {
                law: "closure (missing join entry)",
                counterexample: names(&[a, b]),
            })?;
        }
    }

    let mut index = BTreeMap::new();
    for (i, l) in spec.labels.iter().enumerate() {
        index.insert(l.clone(), canon_of[i]);
    }
    let mut axioms = BTreeMap::new();
    for (sc, l, line) in &spec.axioms {
        let scheme: Scheme = sc.parse()?;
        let li = *index.get(l).ok_or_else(|| LatticeError::Parse {
            line: *line,
            message: format!("unknown label {l}"),
        })?;
        if axioms.insert(scheme, li).is_some() {
            return Err(LatticeError::DuplicateAxiom(sc.clone()));
        }
    }

    let lattice = TaintLattice {
        members,
        index,
        table: full,
        bottom,
        axioms,
    };
    lattice.check_laws()?;
    Ok(lattice)
}

impl TaintLattice {
    /// The shipped four-point chain `I <= W <= C <= Ch`.
    pub fn four_chain() -> TaintLattice {
        load_lattice(FOUR_CHAIN).expect("shipped lattice is valid")
    }

    /// The one-point lattice `{I}` with no axiom schemes.
    pub fn trivial() -> TaintLattice {
        load_lattice("labels: I\nbottom: I\n").expect("one-point lattice is valid")
    }

    fn check_laws(&self) -> Result<()> {
        let m = self.members.len();
        let j = |a: usize, b: usize| self.table[a][b];
        let le = |a: usize, b: usize| j(a, b) == b;
        let fail = |law, idx: &[usize]| LatticeError::NotALattice {
            law,
            counterexample: idx.iter().map(|&i| self.members[i].to_string()).collect(),
        };
        for a in 0..m {
            if j(a, a) != a {
                return Err(fail("idempotence", &[a]));
            }
            if j(self.bottom, a) != a {
                return Err(fail("bottom law", &[self.bottom, a]));
            }
            for b in 0..m {
                if j(a, b) != j(b, a) {
                    return Err(fail("commutativity", &[a, b]));
                }
                if a != b && le(a, b) && le(b, a) {
                    return Err(fail("antisymmetry", &[a, b]));
                }
                for c in 0..m {
                    if j(a, j(b, c)) != j(j(a, b), c) {
                        return Err(fail("associativity", &[a, b, c]));
                    }
                    if le(a, b) && le(b, c) && !le(a, c) {
                        return Err(fail("transitivity", &[a, b, c]));
                    }
                    if le(a, c) && le(b, c) && !le(j(a, b), c) {
                        return Err(fail("least upper bound", &[a, b, c]));
                    }
                }
            }
        }
        Ok(())
    }

    fn idx(&self, l: &Label) -> Result<usize> {
        self.index
            .get(l.as_str())
            .copied()
            .ok_or_else(|| LatticeError::UnknownLabel(l.to_string()))
    }

    /// Resolves a declared name to its canonical label.
    pub fn label(&self, name: &str) -> Result<Label> {
        self.index
            .get(name)
            .map(|&i| self.members[i].clone())
            .ok_or_else(|| LatticeError::UnknownLabel(name.to_string()))
    }

    pub fn bottom(&self) -> Label {
        self.members[self.bottom].clone()
    }

    /// Canonical members in declaration order.
    pub fn members(&self) -> &[Label] {
        &self.members
    }

    /// Is `l` a canonical member of this lattice?
    pub fn contains(&self, l: &Label) -> bool {
        self.members.contains(l)
    }

    pub fn join(&self, a: &Label, b: &Label) -> Result<Label> {
        let (i, k) = (self.idx(a)?, self.idx(b)?);
        Ok(self.members[self.table[i][k]].clone())
    }

    /// The derived order: `a <= b` iff `a ⊔ b = b`.
    pub fn leq(&self, a: &Label, b: &Label) -> Result<bool> {
        let (i, k) = (self.idx(a)?, self.idx(b)?);
        Ok(self.table[i][k] == k)
    }

    pub fn equiv(&self, a: &Label, b: &Label) -> Result<bool> {
        Ok(self.leq(a, b)? && self.leq(b, a)?)
    }

    /// Join of a non-empty collection, or the bottom for an empty one.
    pub fn join_all<'a>(&self, labels: impl IntoIterator<Item = &'a Label>) -> Result<Label> {
        labels
            .into_iter()
            .try_fold(self.bottom(), |acc, l| self.join(&acc, l))
    }

    /// The label an axiom scheme is bound to, if any.
    pub fn scheme_label(&self, s: Scheme) -> Option<Label> {
        self.axioms.get(&s).map(|&i| self.members[i].clone())
    }

    pub fn schemes(&self) -> impl Iterator<Item = (Scheme, Label)> + '_ {
        self.axioms
            .iter()
            .map(|(s, &i)| (*s, self.members[i].clone()))
    }

    /// All pairs `(a, b)` with `a <= b`, `a != b`.
    pub fn order_pairs(&self) -> Vec<(Label, Label)> {
        let m = self.members.len();
        let mut out = Vec::new();
        for a in 0..m {
            for b in 0..m {
                if a != b && self.table[a][b] == b {
                    out.push((self.members[a].clone(), self.members[b].clone()));
                }
            }
        }
        out
    }

    /// Covering pairs of the order (edges of the Hasse diagram).
    pub fn hasse_edges(&self) -> Vec<(Label, Label)> {
        let m = self.members.len();
        let lt = |a: usize, b: usize| a != b && self.table[a][b] == b;
        let mut out = Vec::new();
        for a in 0..m {
            for b in 0..m {
                if lt(a, b) && !(0..m).any(|c| lt(a, c) && lt(c, b)) {
                    out.push((self.members[a].clone(), self.members[b].clone()));
                }
            }
        }
        out
    }

    /// Renders the lattice back into the document format.
    pub fn to_spec(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self.members.iter().map(|l| l.as_str()).collect();
        out.push_str(&format!("labels: {}\n", names.join(" ")));
        out.push_str(&format!("bottom: {}\n", self.bottom()));
        let m = self.members.len();
        for a in 0..m {
            for b in a + 1..m {
                out.push_str(&format!(
                    "join: {} {} = {}\n",
                    names[a], names[b], names[self.table[a][b]]
                ));
            }
        }
        for (s, l) in self.schemes() {
            out.push_str(&format!("axiom: {s} @ {l}\n"));
        }
        out
    }
}

impl Default for TaintLattice {
    fn default() -> Self {
        Self::four_chain()
    }
}
