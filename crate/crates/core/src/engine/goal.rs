//! Goals, goal states and their justifications.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::frontend::print_terms_in;
use crate::kernel::{self, rules, Context, Thm};
use crate::lattice::Label;
use crate::syntax::{type_of, Term, Type};
use crate::theory::TheoryEnv;

use super::{EngineError, Result, TacticExpr};

/// A goal `Γ ⊢ φ : ℓ` still to be proved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Goal {
    pub ctx: Context,
    pub concl: Term,
    pub label: Label,
}

impl Goal {
    pub fn new(ctx: Context, concl: Term, label: Label) -> Goal {
        Goal {
            ctx,
            concl: crate::syntax::logic::normalize_iff(&concl),
            label,
        }
    }

    /// The same goal with a different formula.
    pub fn with(&self, concl: Term) -> Goal {
        Goal::new(self.ctx.clone(), concl, self.label.clone())
    }

    /// The same goal with an extra hypothesis and a different formula.
    pub fn assuming(&self, hyp: Term, concl: Term) -> Goal {
        Goal::new(self.ctx.insert(hyp), concl, self.label.clone())
    }

    pub fn render(&self, env: &TheoryEnv) -> RenderedGoal {
        let mut terms: Vec<&Term> = self.ctx.iter().collect();
        terms.push(&self.concl);
        let mut lines = print_terms_in(env.signature(), &terms);
        let formula = lines.pop().expect("goal formula");
        RenderedGoal {
            context: lines,
            formula,
            label: self.label.to_string(),
        }
    }

    fn check(&self, env: &TheoryEnv) -> Result<()> {
        for t in self.ctx.iter().chain([&self.concl]) {
            let ty = type_of(env.signature(), t).map_err(|e| super::fails(e.to_string()))?;
            if ty != Type::prop() {
                return Err(super::fails(format!("{t} is not a formula")));
            }
        }
        if !env.lattice().contains(&self.label) {
            return Err(super::fails(format!("{} is not a label", self.label)));
        }
        Ok(())
    }
}

/// A goal as shown to users: printed hypotheses, formula and label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RenderedGoal {
    pub context: Vec<String>,
    pub formula: String,
    pub label: String,
}

impl fmt::Display for RenderedGoal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for h in &self.context {
            writeln!(f, "  {h}")?;
        }
        write!(f, "  |- {} : {}", self.formula, self.label)
    }
}

/// Builds the theorem for a goal from theorems for its subgoals, in order.
pub type Justify = Arc<dyn Fn(&TheoryEnv, &[Thm]) -> kernel::Result<Thm> + Send + Sync>;

/// The result of a tactic on one goal.
pub struct Step {
    pub goals: Vec<Goal>,
    pub justify: Justify,
}

impl Step {
    pub fn new(
        goals: Vec<Goal>,
        f: impl Fn(&TheoryEnv, &[Thm]) -> kernel::Result<Thm> + Send + Sync + 'static,
    ) -> Step {
        Step {
            goals,
            justify: Arc::new(f),
        }
    }

    /// A step that closes the goal.
    pub fn done(th: Thm) -> Step {
        Step::new(Vec::new(), move |_, _| Ok(th.clone()))
    }
}

#[derive(Clone)]
struct Node {
    goal: Goal,
    refined: Option<(Vec<usize>, Justify)>,
}

/// The open goals and the partial proof behind them.
#[derive(Clone)]
pub(crate) struct Proof {
    nodes: Vec<Node>,
    open: Vec<usize>,
}

impl Proof {
    fn new(goal: Goal) -> Proof {
        Proof {
            nodes: vec![Node {
                goal,
                refined: None,
            }],
            open: vec![0],
        }
    }

    pub(crate) fn goals(&self) -> impl Iterator<Item = &Goal> {
        self.open.iter().map(|&i| &self.nodes[i].goal)
    }

    pub(crate) fn len(&self) -> usize {
        self.open.len()
    }

    pub(crate) fn goal(&self, i: usize) -> Option<&Goal> {
        self.open.get(i).map(|&n| &self.nodes[n].goal)
    }

    /// Replaces open goal `i` by the subgoals of `step`, in place.
    pub(crate) fn refine(&mut self, i: usize, step: Step) {
        let id = self.open[i];
        let first = self.nodes.len();
        let count = step.goals.len();
        for g in step.goals {
            self.nodes.push(Node {
                goal: g,
                refined: None,
            });
        }
        let children: Vec<usize> = (first..first + count).collect();
        self.nodes[id].refined = Some((children.clone(), step.justify));
        self.open.splice(i..i + 1, children);
    }

    fn build(&self, env: &TheoryEnv, id: usize) -> Result<Thm> {
        let node = &self.nodes[id];
        let (children, justify) = node
            .refined
            .as_ref()
            .ok_or(EngineError::GoalsRemain(self.open.len()))?;
        let subs = children
            .iter()
            .map(|&c| self.build(env, c))
            .collect::<Result<Vec<_>>>()?;
        let th = justify(env, &subs)?;
        fit(env, th, &node.goal)
    }
}

/// Brings a theorem for `goal` to exactly the goal's judgement, lifting and
/// weakening as needed.
fn fit(env: &TheoryEnv, th: Thm, goal: &Goal) -> Result<Thm> {
    let mismatch = |what: &str| {
        EngineError::JustificationMismatch(format!(
            "{what}: proved {th}, wanted {}",
            goal.concl
        ))
    };
    if *th.concl() != goal.concl {
        return Err(mismatch("formula differs"));
    }
    if !th.context().is_subset(&goal.ctx) {
        return Err(mismatch("extra hypotheses"));
    }
    if !env.lattice().leq(th.label(), &goal.label)? {
        return Err(mismatch("label too high"));
    }
    let th = rules::lift(env, &th, &goal.label)?;
    Ok(rules::weaken_to(env, &th, &goal.ctx)?)
}

/// A proof in progress, with its undo history.
#[derive(Clone)]
pub struct GoalState {
    root: Goal,
    current: Proof,
    history: Vec<(Proof, String)>,
}

impl GoalState {
    pub fn new(env: &TheoryEnv, goal: Goal) -> Result<GoalState> {
        goal.check(env)?;
        Ok(GoalState {
            current: Proof::new(goal.clone()),
            root: goal,
            history: Vec::new(),
        })
    }

    pub fn root(&self) -> &Goal {
        &self.root
    }

    pub fn goals(&self) -> Vec<&Goal> {
        self.current.goals().collect()
    }

    pub fn is_solved(&self) -> bool {
        self.current.len() == 0
    }

    /// The tactics applied so far, oldest first.
    pub fn history(&self) -> Vec<&str> {
        self.history.iter().map(|(_, t)| t.as_str()).collect()
    }

    /// Runs a tactic. On failure the state is left unchanged.
    pub fn apply(&mut self, env: &TheoryEnv, t: &TacticExpr) -> Result<()> {
        let next = super::run::apply_in(env, &self.current, t)?;
        let prev = std::mem::replace(&mut self.current, next);
        self.history.push((prev, t.to_string()));
        Ok(())
    }

    pub fn undo(&mut self) -> Result<()> {
        let (prev, _) = self.history.pop().ok_or(EngineError::NothingToUndo)?;
        self.current = prev;
        Ok(())
    }

    /// Assembles the theorem once every goal is closed.
    pub fn qed(&self, env: &TheoryEnv) -> Result<Thm> {
        if !self.is_solved() {
            return Err(EngineError::GoalsRemain(self.current.len()));
        }
        let th = self.current.build(env, 0)?;
        if *th.concl() != self.root.concl
            || *th.context() != self.root.ctx
            || *th.label() != self.root.label
        {
            return Err(EngineError::JustificationMismatch(format!(
                "proved {th}, wanted {}",
                self.root.concl
            )));
        }
        Ok(th)
    }

    pub fn render(&self, env: &TheoryEnv) -> Vec<RenderedGoal> {
        self.current.goals().map(|g| g.render(env)).collect()
    }
}

impl fmt::Debug for GoalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GoalState")
            .field("root", &self.root)
            .field("goals", &self.goals())
            .finish()
    }
}
