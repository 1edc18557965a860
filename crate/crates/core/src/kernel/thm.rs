//! The abstract theorem type and recorded derivations.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::lattice::{Label, Scheme};
use crate::syntax::{logic, Name, Term, Type, Var};

/// A finite set of hypotheses, kept sorted and deduplicated up to alpha.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context(Vec<Term>);

impl Context {
    pub fn empty() -> Context {
        Context(Vec::new())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Term> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.0.binary_search(t).is_ok()
    }

    pub fn insert(&self, t: Term) -> Context {
        let t = logic::normalize_iff(&t);
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&t) {
            v.insert(pos, t);
        }
        Context(v)
    }

    pub fn remove(&self, t: &Term) -> Context {
        Context(self.0.iter().filter(|x| *x != t).cloned().collect())
    }

    pub fn union(&self, other: &Context) -> Context {
        other.iter().cloned().fold(self.clone(), |c, t| c.insert(t))
    }

    pub fn is_subset(&self, other: &Context) -> bool {
        self.iter().all(|t| other.contains(t))
    }

    pub fn fv(&self) -> BTreeSet<Var> {
        self.0.iter().flat_map(|t| t.fv()).collect()
    }

    pub fn has_free(&self, x: &str, ty: &Type) -> bool {
        self.0.iter().any(|t| t.has_free(x, ty))
    }

    pub fn contains_normalized(&self, t: &Term) -> bool {
        self.contains(&logic::normalize_iff(t))
    }

    pub fn map(&self, f: impl Fn(&Term) -> Term) -> Context {
        self.0.iter().map(f).collect()
    }
}

impl FromIterator<Term> for Context {
    fn from_iter<I: IntoIterator<Item = Term>>(iter: I) -> Self {
        let mut v: Vec<Term> = iter.into_iter().map(|t| logic::normalize_iff(&t)).collect();
        v.sort();
        v.dedup();
        Context(v)
    }
}

impl<'a> IntoIterator for &'a Context {
    type Item = &'a Term;
    type IntoIter = std::slice::Iter<'a, Term>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Rule identifiers: the natural deduction rules, the configurable axiom
/// schemes, and axioms introduced by theory extensions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    Ninit,
    NtrueI,
    NfalseE,
    Nlift,
    Nrefl,
    Nsym,
    Ntrans,
    Nlcong,
    Nacong,
    Nsubst,
    Nbeta,
    Ninst,
    Neta,
    NnegI,
    NnegE,
    NiffE1,
    NiffE2,
    NiffI,
    Nwk,
    NconjI,
    NconjE1,
    NconjE2,
    NdisjI1,
    NdisjI2,
    NdisjE,
    NimpI,
    NimpE,
    NallE,
    NallI,
    NexI,
    NexE,
    Scheme(Scheme),
    /// An axiom asserted by a theory extension (datatypes, axiomatised constants).
    Axiom(Name),
    /// The defining equation of a constant.
    Def(Name),
    /// Law `1` or `2` of a subset type.
    TypedefLaw(Name, u8),
}

const CORE_RULES: [(&str, RuleId); 31] = [
    ("Ninit", RuleId::Ninit),
    ("NtrueI", RuleId::NtrueI),
    ("NfalseE", RuleId::NfalseE),
    ("Nlift", RuleId::Nlift),
    ("Nrefl", RuleId::Nrefl),
    ("Nsym", RuleId::Nsym),
    ("Ntrans", RuleId::Ntrans),
    ("Nlcong", RuleId::Nlcong),
    ("Nacong", RuleId::Nacong),
    ("Nsubst", RuleId::Nsubst),
    ("Nbeta", RuleId::Nbeta),
    ("Ninst", RuleId::Ninst),
    ("Neta", RuleId::Neta),
    ("NnegI", RuleId::NnegI),
    ("NnegE", RuleId::NnegE),
    ("NiffE1", RuleId::NiffE1),
    ("NiffE2", RuleId::NiffE2),
    ("NiffI", RuleId::NiffI),
    ("Nwk", RuleId::Nwk),
    ("NconjI", RuleId::NconjI),
    ("NconjE1", RuleId::NconjE1),
    ("NconjE2", RuleId::NconjE2),
    ("NdisjI1", RuleId::NdisjI1),
    ("NdisjI2", RuleId::NdisjI2),
    ("NdisjE", RuleId::NdisjE),
    ("NimpI", RuleId::NimpI),
    ("NimpE", RuleId::NimpE),
    ("NallE", RuleId::NallE),
    ("NallI", RuleId::NallI),
    ("NexI", RuleId::NexI),
    ("NexE", RuleId::NexE),
];

impl RuleId {
    /// Every core natural deduction rule.
    pub fn core_rules() -> impl Iterator<Item = RuleId> {
        CORE_RULES.iter().map(|(_, r)| r.clone())
    }

    /// Rules whose conclusion is fixed at the bottom label.
    pub fn is_bottom_axiom(&self) -> bool {
        matches!(
            self,
            RuleId::Ninit
                | RuleId::NtrueI
                | RuleId::Nrefl
                | RuleId::Nbeta
                | RuleId::Neta
                | RuleId::Axiom(_)
                | RuleId::Def(_)
        )
    }

    /// Rules with no premises.
    pub fn is_leaf(&self) -> bool {
        self.is_bottom_axiom() || matches!(self, RuleId::Scheme(_) | RuleId::TypedefLaw(..))
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleId::Scheme(s) => write!(f, "{s}"),
            RuleId::Axiom(n) => write!(f, "Axiom:{n}"),
            RuleId::Def(n) => write!(f, "Def:{n}"),
            RuleId::TypedefLaw(n, i) => write!(f, "Typedef:{n}:{i}"),
            core => {
                let (n, _) = CORE_RULES
                    .iter()
                    .find(|(_, r)| r == core)
                    .expect("core rule has a name");
                f.write_str(n)
            }
        }
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some((_, r)) = CORE_RULES.iter().find(|(n, _)| *n == s) {
            return Ok(r.clone());
        }
        if let Ok(sc) = s.parse::<Scheme>() {
            return Ok(RuleId::Scheme(sc));
        }
        if let Some(n) = s.strip_prefix("Axiom:") {
            return Ok(RuleId::Axiom(n.into()));
        }
        if let Some(n) = s.strip_prefix("Def:") {
            return Ok(RuleId::Def(n.into()));
        }
        if let Some(rest) = s.strip_prefix("Typedef:") {
            if let Some((n, i)) = rest.rsplit_once(':') {
                if let Ok(i) = i.parse() {
                    return Ok(RuleId::TypedefLaw(n.into(), i));
                }
            }
        }
        Err(format!("unknown rule {s}"))
    }
}

/// A rule parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Param {
    Ctx(Context),
    Term(Term),
    Type(Type),
    Var(Var),
    TyVar(Name),
    Label(Label),
}

/// One node of a recorded derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofNode {
    pub rule: RuleId,
    pub premises: Vec<Arc<ProofNode>>,
    pub params: Vec<Param>,
}

impl ProofNode {
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(|p| p.size()).sum::<usize>()
    }

    /// Visits every node, premises first.
    pub fn for_each(&self, f: &mut impl FnMut(&ProofNode)) {
        for p in &self.premises {
            p.for_each(f);
        }
        f(self);
    }
}

/// A theorem `Γ ⊢ φ : ℓ`. Only the kernel can build one.
#[derive(Clone, Debug)]
pub struct Thm {
    pub(crate) ctx: Context,
    pub(crate) concl: Term,
    pub(crate) label: Label,
    pub(crate) proof: Arc<ProofNode>,
}

impl Thm {
    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn concl(&self) -> &Term {
        &self.concl
    }

    pub fn label(&self) -> &Label {
        &self.label
    }

    pub fn proof(&self) -> &Arc<ProofNode> {
        &self.proof
    }

    /// Same judgement, ignoring how it was derived.
    pub fn same_judgement(&self, other: &Thm) -> bool {
        self.ctx == other.ctx && self.concl == other.concl && self.label == other.label
    }
}

impl fmt::Display for Thm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hyps: Vec<String> = self.ctx.iter().map(|t| t.to_string()).collect();
        if hyps.is_empty() {
            write!(f, "|- {} : {}", self.concl, self.label)
        } else {
            write!(f, "{} |- {} : {}", hyps.join(", "), self.concl, self.label)
        }
    }
}

pub fn context_of(t: &Thm) -> &Context {
    t.context()
}

pub fn formula_of(t: &Thm) -> &Term {
    t.concl()
}

pub fn label_of(t: &Thm) -> &Label {
    t.label()
}

pub fn proof_of(t: &Thm) -> &Arc<ProofNode> {
    t.proof()
}
