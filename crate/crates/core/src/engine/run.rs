//! Tacticals.
//!
//! A tactic runs on a focus, a contiguous range of open goals, and returns
//! the range of goals it produced. Basic tactics act on the first goal of the
//! focus; `t1; t2` runs `t2` on what `t1` produced; `all t` runs `t` on every
//! goal of the focus; `repeat t` applies `t` to the first goal and then,
//! recursively, to every subgoal, stopping on failure or when a step leaves
//! its goal unchanged.

use std::ops::Range;

use crate::kernel::Thm;
use crate::theory::TheoryEnv;

use super::goal::{Goal, GoalState, Proof};
use super::tactic::TacticExpr;
use super::{fails, tactics, EngineError, Result};

/// Upper bound on basic tactic applications inside one `repeat`.
const REPEAT_LIMIT: usize = 10_000;

struct Runner<'e> {
    env: &'e TheoryEnv,
    budget: usize,
}

impl Runner<'_> {
    fn basic(&mut self, p: &mut Proof, t: &TacticExpr, focus: Range<usize>) -> Result<Range<usize>> {
        if focus.is_empty() {
            return Err(EngineError::NoGoals);
        }
        let i = focus.start;
        let goal = p.goal(i).ok_or(EngineError::NoGoals)?.clone();
        let step = match t {
            TacticExpr::Rule(r) => tactics::basic(self.env, &goal, r)?,
            TacticExpr::LiftTo(l) => tactics::lift_to(self.env, &goal, l)?,
            TacticExpr::Raa => tactics::raa(self.env, &goal)?,
            TacticExpr::CaseSplit(phi) => tactics::case_split(self.env, &goal, phi)?,
            TacticExpr::Cut(phi) => tactics::cut(self.env, &goal, phi)?,
            _ => unreachable!("not a basic tactic"),
        };
        if !matches!(t, TacticExpr::LiftTo(_)) && step.goals.iter().any(|g| g.label != goal.label) {
            return Err(EngineError::JustificationMismatch(format!(
                "{t} changed a subgoal label"
            )));
        }
        let m = step.goals.len();
        p.refine(i, step);
        Ok(i..i + m)
    }

    fn run(&mut self, p: &mut Proof, t: &TacticExpr, focus: Range<usize>) -> Result<Range<usize>> {
        match t {
            TacticExpr::Id => Ok(focus),
            TacticExpr::Fail => Err(fails("fail")),
            TacticExpr::Then(a, b) => {
                let out = self.run(p, a, focus)?;
                if out.is_empty() {
                    return Ok(out);
                }
                self.run(p, b, out)
            }
            TacticExpr::OrElse(a, b) => {
                let saved = p.clone();
                match self.run(p, a, focus.clone()) {
                    Ok(out) => Ok(out),
                    Err(_) => {
                        *p = saved;
                        self.run(p, b, focus)
                    }
                }
            }
            TacticExpr::Try(a) => {
                let saved = p.clone();
                match self.run(p, a, focus.clone()) {
                    Ok(out) => Ok(out),
                    Err(_) => {
                        *p = saved;
                        Ok(focus)
                    }
                }
            }
            TacticExpr::All(a) => {
                let mut total = 0;
                for j in focus.clone().rev() {
                    total += self.run(p, a, j..j + 1)?.len();
                }
                Ok(focus.start..focus.start + total)
            }
            TacticExpr::Repeat(a) => {
                if focus.is_empty() {
                    return Ok(focus);
                }
                let n = self.repeat(p, a, focus.start)?;
                Ok(focus.start..focus.start + n)
            }
            _ => self.basic(p, t, focus),
        }
    }

    /// Repeats on goal `j`; returns how many goals it left in its place.
    fn repeat(&mut self, p: &mut Proof, t: &TacticExpr, j: usize) -> Result<usize> {
        if self.budget == 0 {
            return Err(fails("repeat did not terminate"));
        }
        self.budget -= 1;
        let before: Goal = p.goal(j).expect("goal in focus").clone();
        let saved = p.clone();
        let out = match self.run(p, t, j..j + 1) {
            Ok(out) => out,
            Err(EngineError::TacticFails(_) | EngineError::Kernel(_) | EngineError::NoGoals) => {
                *p = saved;
                return Ok(1);
            }
            Err(e) => return Err(e),
        };
        let len_change = p.len() as isize - saved.len() as isize;
        if len_change == 0 && out.len() == 1 && p.goal(j) == Some(&before) {
            *p = saved;
            return Ok(1);
        }
        let mut total = 0;
        for k in out.rev() {
            total += self.repeat(p, t, k)?;
        }
        Ok(total)
    }
}

/// Runs a tactic on a proof, focused on all open goals. The input is not
/// modified.
pub(crate) fn apply_in(env: &TheoryEnv, proof: &Proof, t: &TacticExpr) -> Result<Proof> {
    let mut p = proof.clone();
    let n = p.len();
    let mut r = Runner {
        env,
        budget: REPEAT_LIMIT,
    };
    r.run(&mut p, t, 0..n)?;
    Ok(p)
}

/// Applies a tactic to a goal state, returning the new state; the undo
/// history grows by one entry.
pub fn apply_tactic(env: &TheoryEnv, state: &GoalState, t: &TacticExpr) -> Result<GoalState> {
    let mut s = state.clone();
    s.apply(env, t)?;
    Ok(s)
}

/// Proves a goal with a tactic and assembles the theorem.
pub fn run_tactics(env: &TheoryEnv, goal: Goal, t: &TacticExpr) -> Result<Thm> {
    let mut s = GoalState::new(env, goal)?;
    s.apply(env, t)?;
    s.qed(env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::parse_tactic;
    use crate::frontend::parse_prop;
    use crate::kernel::{replay, Context, KernelError};

    fn env() -> TheoryEnv {
        TheoryEnv::default()
    }

    fn goal(env: &TheoryEnv, text: &str, label: &str) -> Goal {
        let t = parse_prop(env.signature(), text).unwrap();
        Goal::new(Context::empty(), t, env.label(label).unwrap())
    }

    fn tac(s: &str) -> TacticExpr {
        parse_tactic(s).unwrap()
    }

    const PEIRCE: &[&str] = &[
        "intro",
        "raa",
        "neg_elim \"p\"",
        "mp \"p --> q\"",
        "assumption",
        "intro",
        "lift_to I",
        "false_elim",
        "neg_elim \"p\"",
        "assumption",
        "assumption",
        "assumption",
    ];

    #[test]
    fn peirce_at_c() {
        let env = env();
        let g = goal(&env, "((p --> q) --> p) --> p", "C");
        let mut s = GoalState::new(&env, g).unwrap();
        for t in PEIRCE {
            s.apply(&env, &tac(t)).unwrap_or_else(|e| panic!("{t}: {e}\n{s:?}"));
        }
        let th = s.qed(&env).unwrap();
        assert_eq!(th.label().as_str(), "C");
        assert!(th.context().is_empty());
        assert!(replay(&env, th.proof()).unwrap().same_judgement(&th));
    }

    #[test]
    fn peirce_at_i_fails_at_raa() {
        let env = env();
        let mut s = GoalState::new(&env, goal(&env, "((p --> q) --> p) --> p", "I")).unwrap();
        s.apply(&env, &tac("intro")).unwrap();
        let e = s.apply(&env, &tac("raa")).unwrap_err();
        assert!(matches!(e, EngineError::Kernel(KernelError::NotAbove { .. })), "{e}");
        assert_eq!(s.goals().len(), 1);
    }

    #[test]
    fn repeat_conj_splits_every_conjunction() {
        let env = env();
        let mut s = GoalState::new(&env, goal(&env, "(a /\\ b) /\\ (c /\\ d)", "I")).unwrap();
        s.apply(&env, &tac("repeat conj")).unwrap();
        let shown: Vec<String> = s.goals().iter().map(|g| g.concl.to_string()).collect();
        assert_eq!(shown, ["(a:Prop)", "(b:Prop)", "(c:Prop)", "(d:Prop)"]);
    }

    #[test]
    fn truth_at_bottom() {
        let env = env();
        let th = run_tactics(&env, goal(&env, "True", "I"), &tac("trivial")).unwrap();
        assert_eq!(th.to_string(), "|- True : I");
    }

    #[test]
    fn qed_with_open_goals_is_an_error() {
        let env = env();
        let s = GoalState::new(&env, goal(&env, "p --> p", "I")).unwrap();
        assert!(matches!(s.qed(&env), Err(EngineError::GoalsRemain(1))));
    }

    #[test]
    fn lift_to_rules() {
        let env = env();
        let mut s = GoalState::new(&env, goal(&env, "p --> p", "I")).unwrap();
        assert!(matches!(
            s.apply(&env, &tac("lift_to C")),
            Err(EngineError::NotBelow { .. })
        ));
        s.apply(&env, &tac("lift_to I")).unwrap();
        assert_eq!(s.goals()[0].label.as_str(), "I");
    }

    #[test]
    fn undo_restores_goals() {
        let env = env();
        let mut s = GoalState::new(&env, goal(&env, "p /\\ q --> q /\\ p", "I")).unwrap();
        let before = s.render(&env);
        s.apply(&env, &tac("intro; conj")).unwrap();
        assert_ne!(s.render(&env), before);
        s.undo().unwrap();
        assert_eq!(s.render(&env), before);
        assert!(matches!(s.undo(), Err(EngineError::NothingToUndo)));
    }

    #[test]
    fn or_else_id_never_fails() {
        let env = env();
        let mut s = GoalState::new(&env, goal(&env, "p", "I")).unwrap();
        s.apply(&env, &tac("fail | id")).unwrap();
        s.apply(&env, &tac("try conj")).unwrap();
        assert_eq!(s.goals().len(), 1);
    }

    #[test]
    fn quantifier_round_trip() {
        let env = env();
        let g = goal(&env, "(forall x:'a. P x) --> (exists y:'a. P y)", "I");
        let t = tac("intro; exists \"z\"; spec \"forall x:'a. P x\" \"z\"; assumption");
        let th = run_tactics(&env, g, &t).unwrap();
        assert_eq!(th.label().as_str(), "I");
    }

    #[test]
    fn conjunction_commutes() {
        let env = env();
        let g = goal(&env, "p /\\ q --> q /\\ p", "I");
        let t = tac("intro; conj; (conj_elim2 \"p\" | id); assumption");
        let mut s = GoalState::new(&env, g).unwrap();
        s.apply(&env, &t).unwrap();
        s.apply(&env, &tac("conj_elim1 \"q\"; assumption")).unwrap();
        assert!(s.qed(&env).is_ok());
    }
}
