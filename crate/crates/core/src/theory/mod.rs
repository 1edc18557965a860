//! Theory environments and the definitional extension mechanisms.
//!
//! A [`TheoryEnv`] is a persistent value: every extension returns a new
//! environment and leaves the old one usable.

mod datatype;
mod library;
mod typedef;

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::kernel::{self, KernelError, ProofNode, RuleId, Thm};
use crate::lattice::{Label, TaintLattice};
use crate::syntax::{logic, name, type_of, Kind, Name, Signature, Term, Type, TypingError};

pub use datatype::{declare_datatype, is_strictly_positive, Constructor, DatatypeBundle, DatatypeSpec};
pub use library::{example_theories, stdlib_load, theory_source, THEORY_FILES};
pub use typedef::{typedef, TypedefBundle};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("FreeVariableInDefiniens: {0} is free in the definiens")]
    FreeVariableInDefiniens(String),
    #[error("TypeVariableEscape: type variable {0} of the definiens does not occur in its type")]
    TypeVariableEscape(String),
    #[error("DuplicateName: {0} is already defined")]
    DuplicateName(String),
    #[error("NotStrictlyPositive: {0}")]
    NotStrictlyPositive(String),
    #[error("WitnessShapeError: {0}")]
    WitnessShapeError(String),
    #[error("NonEmptyWitnessContext: the witness theorem has hypotheses")]
    NonEmptyWitnessContext,
    #[error("{0} must be defined first")]
    Missing(String),
    #[error(transparent)]
    Typing(#[from] TypingError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

pub type Result<T, E = TheoryError> = std::result::Result<T, E>;

/// One entry of the extension log. Replaying the log from an empty
/// environment with the same lattice rebuilds the environment.
#[derive(Clone, Debug)]
pub enum Extension {
    TypeDecl { name: Name, arity: u32 },
    Synonym { name: Name, params: Vec<Name>, body: Type },
    ConstDecl { name: Name, ty: Type },
    Define { name: Name, definiens: Term },
    Axiom { name: Name, formula: Term },
    Datatype(DatatypeSpec),
    Typedef {
        name: Name,
        predicate: Term,
        witness: Arc<ProofNode>,
        inj: Name,
        proj: Name,
    },
    Theorem { name: Name, proof: Arc<ProofNode> },
}

#[derive(Clone, Debug)]
pub struct TheoryEnv {
    sig: Signature,
    lattice: Arc<TaintLattice>,
    axioms: BTreeMap<RuleId, Thm>,
    theorems: BTreeMap<Name, Thm>,
    datatypes: Vec<DatatypeBundle>,
    typedefs: Vec<TypedefBundle>,
    log: Vec<Extension>,
    imports: Vec<String>,
}

impl Default for TheoryEnv {
    fn default() -> Self {
        TheoryEnv::new(TaintLattice::four_chain())
    }
}

impl TheoryEnv {
    /// The core signature over the given lattice, with nothing else.
    pub fn new(lattice: TaintLattice) -> TheoryEnv {
        TheoryEnv {
            sig: Signature::core(),
            lattice: Arc::new(lattice),
            axioms: BTreeMap::new(),
            theorems: BTreeMap::new(),
            datatypes: Vec::new(),
            typedefs: Vec::new(),
            log: Vec::new(),
            imports: Vec::new(),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn lattice(&self) -> &TaintLattice {
        &self.lattice
    }

    /// Label `name` resolved in the active lattice.
    pub fn label(&self, name: &str) -> Result<Label, KernelError> {
        Ok(self.lattice.label(name)?)
    }

    /// The stored theorem behind an `Axiom`, `Def` or `Typedef` rule.
    pub fn axiom_thm(&self, rule: &RuleId) -> Option<&Thm> {
        self.axioms.get(rule)
    }

    /// Definitions, axioms and subset-type laws.
    pub fn axioms(&self) -> impl Iterator<Item = (&RuleId, &Thm)> {
        self.axioms.iter()
    }

    pub fn definition(&self, c: &str) -> Option<&Thm> {
        self.axioms.get(&RuleId::Def(c.into()))
    }

    pub fn theorem(&self, n: &str) -> Option<&Thm> {
        self.theorems.get(n)
    }

    pub fn theorems(&self) -> impl Iterator<Item = (&Name, &Thm)> {
        self.theorems.iter()
    }

    /// A named theorem, or failing that a named axiom or definition.
    pub fn lookup_fact(&self, n: &str) -> Option<&Thm> {
        self.theorems
            .get(n)
            .or_else(|| self.axioms.get(&RuleId::Axiom(n.into())))
            .or_else(|| self.axioms.get(&RuleId::Def(n.into())))
            .or_else(|| {
                let (ty, i) = n.rsplit_once('_')?;
                let i = i.strip_prefix("law")?.parse().ok()?;
                self.axioms.get(&RuleId::TypedefLaw(ty.into(), i))
            })
    }

    pub fn datatypes(&self) -> &[DatatypeBundle] {
        &self.datatypes
    }

    pub fn typedefs(&self) -> &[TypedefBundle] {
        &self.typedefs
    }

    pub fn extensions(&self) -> &[Extension] {
        &self.log
    }

    /// Every axiom introduced so far, in order, with its label. Definitions
    /// are conservative and are not listed.
    pub fn axiom_log(&self) -> Vec<(RuleId, Label)> {
        let mut out = Vec::new();
        for e in &self.log {
            let rules: Vec<RuleId> = match e {
                Extension::Axiom { name, .. } => vec![RuleId::Axiom(name.clone())],
                Extension::Datatype(spec) => {
                    let b = self.datatypes.iter().find(|b| b.name == spec.name);
                    b.map(|b| b.axioms.iter().map(|(n, _)| RuleId::Axiom(n.clone())).collect())
                        .unwrap_or_default()
                }
                Extension::Typedef { name, .. } => {
                    vec![RuleId::TypedefLaw(name.clone(), 1), RuleId::TypedefLaw(name.clone(), 2)]
                }
                _ => Vec::new(),
            };
            for r in rules {
                if let Some(t) = self.axioms.get(&r) {
                    out.push((r, t.label().clone()));
                }
            }
        }
        out
    }

    fn check_fresh_constant(&self, n: &str) -> Result<()> {
        if self.sig.constant_type(n).is_some() {
            return Err(TheoryError::DuplicateName(n.to_string()));
        }
        Ok(())
    }

    pub(crate) fn insert_axiom(&mut self, rule: RuleId, concl: Term, label: Label) -> Thm {
        let concl = logic::normalize_iff(&concl);
        let th = Thm {
            ctx: kernel::Context::empty(),
            concl,
            label,
            proof: Arc::new(ProofNode {
                rule: rule.clone(),
                premises: Vec::new(),
                params: Vec::new(),
            }),
        };
        self.axioms.insert(rule, th.clone());
        th
    }

    /// Whether a theory file of this name has been loaded.
    pub fn has_imported(&self, file: &str) -> bool {
        self.imports.iter().any(|f| f == file)
    }

    pub(crate) fn mark_imported(&mut self, file: &str) {
        if !self.has_imported(file) {
            self.imports.push(file.to_string());
        }
    }

    pub(crate) fn sig_mut(&mut self) -> &mut Signature {
        &mut self.sig
    }

    pub(crate) fn push_log(&mut self, e: Extension) {
        self.log.push(e);
    }

    pub(crate) fn push_datatype(&mut self, b: DatatypeBundle) {
        self.datatypes.push(b);
    }

    pub(crate) fn push_typedef(&mut self, b: TypedefBundle) {
        self.typedefs.push(b);
    }

    /// Registers an opaque type-former.
    pub fn declare_type(&self, n: &str, arity: u32) -> Result<TheoryEnv> {
        let mut env = self.clone();
        env.sig.add_former(n, Kind(arity))?;
        env.log.push(Extension::TypeDecl { name: name(n), arity });
        Ok(env)
    }

    pub fn declare_synonym(&self, n: &str, params: Vec<Name>, body: Type) -> Result<TheoryEnv> {
        let mut env = self.clone();
        env.sig.add_synonym(n, params.clone(), body.clone())?;
        env.log.push(Extension::Synonym {
            name: name(n),
            params,
            body,
        });
        Ok(env)
    }

    /// Registers a constant with no defining equation.
    pub fn declare_constant(&self, n: &str, ty: &Type) -> Result<TheoryEnv> {
        self.check_fresh_constant(n)?;
        let mut env = self.clone();
        env.sig.add_constant(n, ty.clone())?;
        env.log.push(Extension::ConstDecl {
            name: name(n),
            ty: ty.clone(),
        });
        Ok(env)
    }

    /// Asserts a closed formula as an axiom at the bottom label.
    pub fn assert_axiom(&self, n: &str, formula: &Term) -> Result<(TheoryEnv, Thm)> {
        let rule = RuleId::Axiom(name(n));
        if self.axioms.contains_key(&rule) || self.theorems.contains_key(n) {
            return Err(TheoryError::DuplicateName(n.to_string()));
        }
        let ty = type_of(&self.sig, formula)?;
        if !ty.is_prop() {
            return Err(TypingError::TypeMismatch {
                expected: Type::prop(),
                found: ty,
            }
            .into());
        }
        if let Some((v, _)) = formula.fv().into_iter().next() {
            return Err(TheoryError::FreeVariableInDefiniens(v.to_string()));
        }
        let mut env = self.clone();
        let bottom = env.lattice.bottom();
        let th = env.insert_axiom(rule, formula.clone(), bottom);
        env.log.push(Extension::Axiom {
            name: name(n),
            formula: formula.clone(),
        });
        Ok((env, th))
    }

    /// Stores a proved theorem under a name.
    pub fn add_theorem(&self, n: &str, th: Thm) -> Result<TheoryEnv> {
        if self.theorems.contains_key(n) || self.axioms.contains_key(&RuleId::Axiom(n.into())) {
            return Err(TheoryError::DuplicateName(n.to_string()));
        }
        let mut env = self.clone();
        env.log.push(Extension::Theorem {
            name: name(n),
            proof: th.proof().clone(),
        });
        env.theorems.insert(name(n), th);
        Ok(env)
    }

    /// The same extensions over a different lattice, rechecked.
    pub fn with_lattice(&self, lattice: TaintLattice) -> Result<TheoryEnv> {
        let mut env = TheoryEnv::rebuild(lattice, &self.log)?;
        env.imports = self.imports.clone();
        Ok(env)
    }

    /// Rebuilds an environment from an extension log, rechecking every
    /// stored theorem through the kernel.
    pub fn rebuild(lattice: TaintLattice, log: &[Extension]) -> Result<TheoryEnv> {
        let mut env = TheoryEnv::new(lattice);
        for e in log {
            env = match e {
                Extension::TypeDecl { name, arity } => env.declare_type(name, *arity)?,
                Extension::Synonym { name, params, body } => {
                    env.declare_synonym(name, params.clone(), body.clone())?
                }
                Extension::ConstDecl { name, ty } => env.declare_constant(name, ty)?,
                Extension::Define { name, definiens } => define_constant(&env, name, definiens)?.0,
                Extension::Axiom { name, formula } => env.assert_axiom(name, formula)?.0,
                Extension::Datatype(spec) => declare_datatype(&env, spec)?.0,
                Extension::Typedef {
                    name,
                    predicate,
                    witness,
                    inj,
                    proj,
                } => {
                    let w = kernel::replay(&env, witness)?;
                    typedef(&env, name, predicate, &w, inj, proj)?.0
                }
                Extension::Theorem { name, proof } => {
                    let th = kernel::replay(&env, proof)?;
                    env.add_theorem(name, th)?
                }
            };
        }
        Ok(env)
    }
}

/// Introduces `c := t` with `t` closed. The constant's generic type is the
/// type of `t`.
pub fn define_constant(env: &TheoryEnv, c: &str, definiens: &Term) -> Result<(TheoryEnv, Thm)> {
    env.check_fresh_constant(c)?;
    let definiens = logic::normalize_iff(definiens);
    let ty = type_of(&env.sig, &definiens)?;
    if let Some((v, _)) = definiens.fv().into_iter().next() {
        return Err(TheoryError::FreeVariableInDefiniens(v.to_string()));
    }
    let tvs = ty.ftv();
    if let Some(a) = definiens.ftv().into_iter().find(|a| !tvs.contains(a)) {
        return Err(TheoryError::TypeVariableEscape(a.to_string()));
    }
    let mut env = env.clone();
    env.sig.add_constant(c, ty.clone())?;
    let eq = logic::mk_eq(Term::cnst(c, ty), definiens.clone());
    let bottom = env.lattice.bottom();
    let th = env.insert_axiom(RuleId::Def(name(c)), eq, bottom);
    env.log.push(Extension::Define {
        name: name(c),
        definiens,
    });
    Ok((env, th))
}
