//! Asserted strictly-positive datatypes.

use std::collections::BTreeSet;

use crate::kernel::{RuleId, Thm};
use crate::syntax::term::variant;
use crate::syntax::{kind_of, logic, name, Kind, Name, Term, Type, TypeFormer, Var};

use super::{Extension, Result, TheoryEnv, TheoryError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constructor {
    pub name: Name,
    pub args: Vec<Type>,
}

/// A datatype declaration: `name params = c1 args | ... ` with a recursor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatatypeSpec {
    pub name: Name,
    pub params: Vec<Name>,
    pub constructors: Vec<Constructor>,
    pub recursor: Name,
}

#[derive(Clone, Debug)]
pub struct DatatypeBundle {
    pub name: Name,
    pub former: TypeFormer,
    /// The former applied to its parameters.
    pub ty: Type,
    pub constructors: Vec<(Name, Type)>,
    pub recursor: (Name, Type),
    /// Named axioms: distinctness, injectivity, recursor equations, induction.
    pub axioms: Vec<(Name, Thm)>,
}

/// How a constructor argument refers to the type being declared.
#[derive(Clone, Debug)]
enum Arg {
    Plain,
    /// `σ1 -> ... -> σn -> T` with `T` the new type (`n` may be 0).
    Rec(Vec<Type>),
}

fn classify(spec: &DatatypeSpec, self_ty: &Type, ctor: &str, ty: &Type) -> Result<Arg> {
    if !ty.mentions_former(&spec.name) {
        return Ok(Arg::Plain);
    }
    if ty == self_ty {
        return Ok(Arg::Rec(Vec::new()));
    }
    if let Some((dom, cod)) = ty.dest_fun() {
        if !dom.mentions_former(&spec.name) {
            if let Arg::Rec(mut ds) = classify(spec, self_ty, ctor, cod)? {
                ds.insert(0, dom.clone());
                return Ok(Arg::Rec(ds));
            }
        }
    }
    Err(TheoryError::NotStrictlyPositive(format!(
        "argument type {ty} of constructor {ctor} has {} in a non-positive position",
        spec.name
    )))
}

/// Classifies every constructor argument without touching an environment.
/// Exposed for the positivity tests.
pub fn is_strictly_positive(spec: &DatatypeSpec, ty: &Type) -> bool {
    let self_ty = self_type(spec);
    classify(spec, &self_ty, "_", ty).is_ok()
}

fn self_type(spec: &DatatypeSpec) -> Type {
    spec.params.iter().fold(
        Type::former(&*spec.name, spec.params.len() as u32),
        |t, p| Type::app(t, Type::Var(p.clone())),
    )
}

fn forall_all(vars: &[Var], body: Term) -> Term {
    vars.iter().rev().fold(body, |b, v| logic::mk_forall(v, b))
}

fn conj_all(ts: Vec<Term>) -> Term {
    let mut it = ts.into_iter().rev();
    match it.next() {
        None => logic::truth(),
        Some(last) => it.fold(last, |acc, t| logic::mk_conj(t, acc)),
    }
}

/// Asserts a datatype together with its freeness, recursion and induction
/// axioms, all at the bottom label.
pub fn declare_datatype(env: &TheoryEnv, spec: &DatatypeSpec) -> Result<(TheoryEnv, DatatypeBundle)> {
    let mut out = env.clone();
    let arity = spec.params.len() as u32;
    let former = out.sig_mut().add_former(&spec.name, Kind(arity))?;
    let self_ty = self_type(spec);
    let params: BTreeSet<Name> = spec.params.iter().cloned().collect();

    let mut shapes = Vec::new();
    for c in &spec.constructors {
        let mut kinds = Vec::new();
        for a in &c.args {
            if kind_of(out.signature(), a)? != Kind::STAR {
                return Err(TheoryError::Typing(crate::syntax::TypingError::IllKinded(format!(
                    "argument {a} of {} must have kind *",
                    c.name
                ))));
            }
            if let Some(v) = a.ftv().into_iter().find(|v| !params.contains(v)) {
                return Err(TheoryError::TypeVariableEscape(v.to_string()));
            }
            kinds.push(classify(spec, &self_ty, &c.name, a)?);
        }
        shapes.push(kinds);
    }

    let res = Type::Var(variant("a", &params));
    let mut ctors = Vec::new();
    for c in &spec.constructors {
        let ty = Type::funs(c.args.iter().cloned(), self_ty.clone());
        out.sig_mut().add_constant(&c.name, ty.clone())?;
        ctors.push((c.name.clone(), ty));
    }
    // Case function for a constructor: its arguments, then one result per
    // recursive argument.
    let case_ty = |c: &Constructor, kinds: &[Arg]| {
        let mut dom: Vec<Type> = c.args.clone();
        for k in kinds {
            if let Arg::Rec(ds) = k {
                dom.push(Type::funs(ds.iter().cloned(), res.clone()));
            }
        }
        Type::funs(dom, res.clone())
    };
    let case_tys: Vec<Type> = spec
        .constructors
        .iter()
        .zip(&shapes)
        .map(|(c, k)| case_ty(c, k))
        .collect();
    let rec_ty = Type::funs(
        std::iter::once(self_ty.clone()).chain(case_tys.iter().cloned()),
        res.clone(),
    );
    out.sig_mut().add_constant(&spec.recursor, rec_ty.clone())?;

    let cnst = |n: &Name, ty: &Type| Term::Const(n.clone(), ty.clone());
    let args_named = |prefix: &str, c: &Constructor| -> Vec<Var> {
        (1..=c.args.len())
            .zip(&c.args)
            .map(|(i, t)| (name(format!("{prefix}{i}")), t.clone()))
            .collect()
    };
    let apply = |c: &(Name, Type), vs: &[Var]| {
        Term::apps(cnst(&c.0, &c.1), vs.iter().map(Term::from_var))
    };

    let mut axioms: Vec<(Name, Term)> = Vec::new();
    let n = spec.constructors.len();
    for i in 0..n {
        for j in i + 1..n {
            let (ci, cj) = (&spec.constructors[i], &spec.constructors[j]);
            let xs = args_named("x", ci);
            let ys = args_named("y", cj);
            let eq = logic::mk_eq(apply(&ctors[i], &xs), apply(&ctors[j], &ys));
            let all: Vec<Var> = xs.iter().chain(&ys).cloned().collect();
            axioms.push((
                name(format!("{}_distinct_{}_{}", spec.name, ci.name, cj.name)),
                forall_all(&all, logic::mk_neg(eq)),
            ));
        }
    }
    for (i, c) in spec.constructors.iter().enumerate() {
        if c.args.is_empty() {
            continue;
        }
        let xs = args_named("x", c);
        let ys = args_named("y", c);
        let eq = logic::mk_eq(apply(&ctors[i], &xs), apply(&ctors[i], &ys));
        let parts = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| logic::mk_eq(Term::from_var(x), Term::from_var(y)))
            .collect();
        let all: Vec<Var> = xs.iter().chain(&ys).cloned().collect();
        axioms.push((
            name(format!("{}_inj_{}", spec.name, c.name)),
            forall_all(&all, logic::mk_imp(eq, conj_all(parts))),
        ));
    }
    let fs: Vec<Var> = case_tys
        .iter()
        .enumerate()
        .map(|(i, t)| (name(format!("f{}", i + 1)), t.clone()))
        .collect();
    let rec = |t: Term| {
        Term::apps(
            Term::app(cnst(&spec.recursor, &rec_ty), t),
            fs.iter().map(Term::from_var),
        )
    };
    for (i, c) in spec.constructors.iter().enumerate() {
        let xs = args_named("x", c);
        let mut rhs = Term::apps(Term::from_var(&fs[i]), xs.iter().map(Term::from_var));
        for (x, k) in xs.iter().zip(&shapes[i]) {
            if let Arg::Rec(ds) = k {
                let zs: Vec<Var> = ds
                    .iter()
                    .enumerate()
                    .map(|(j, d)| (name(format!("z{}", j + 1)), d.clone()))
                    .collect();
                let inner = rec(Term::apps(Term::from_var(x), zs.iter().map(Term::from_var)));
                let arg = zs.iter().rev().fold(inner, |b, z| Term::abs(z, b));
                rhs = Term::app(rhs, arg);
            }
        }
        let eq = logic::mk_eq(rec(apply(&ctors[i], &xs)), rhs);
        let all: Vec<Var> = xs.iter().chain(&fs).cloned().collect();
        axioms.push((name(format!("{}_{}", spec.recursor, c.name)), forall_all(&all, eq)));
    }
    let p: Var = (name("P"), Type::fun(self_ty.clone(), Type::prop()));
    let pt = Term::from_var(&p);
    let mut goal = {
        let x: Var = (name("x"), self_ty.clone());
        logic::mk_forall(&x, Term::app(pt.clone(), Term::from_var(&x)))
    };
    for (i, c) in spec.constructors.iter().enumerate().rev() {
        let xs = args_named("x", c);
        let mut step = Term::app(pt.clone(), apply(&ctors[i], &xs));
        for (x, k) in xs.iter().zip(&shapes[i]).rev() {
            if let Arg::Rec(ds) = k {
                let zs: Vec<Var> = ds
                    .iter()
                    .enumerate()
                    .map(|(j, d)| (name(format!("z{}", j + 1)), d.clone()))
                    .collect();
                let ih = Term::app(
                    pt.clone(),
                    Term::apps(Term::from_var(x), zs.iter().map(Term::from_var)),
                );
                step = logic::mk_imp(forall_all(&zs, ih), step);
            }
        }
        goal = logic::mk_imp(forall_all(&xs, step), goal);
    }
    axioms.push((
        name(format!("{}_induct", spec.name)),
        logic::mk_forall(&p, goal),
    ));

    let bottom = out.lattice().bottom();
    let mut named = Vec::new();
    for (n, t) in axioms {
        let rule = RuleId::Axiom(n.clone());
        if out.axiom_thm(&rule).is_some() {
            return Err(TheoryError::DuplicateName(n.to_string()));
        }
        crate::syntax::type_of(out.signature(), &t)?;
        named.push((n, out.insert_axiom(rule, t, bottom.clone())));
    }
    let bundle = DatatypeBundle {
        name: spec.name.clone(),
        former,
        ty: self_ty,
        constructors: ctors,
        recursor: (spec.recursor.clone(), rec_ty),
        axioms: named,
    };
    out.push_datatype(bundle.clone());
    out.push_log(Extension::Datatype(spec.clone()));
    Ok((out, bundle))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bool_spec() -> DatatypeSpec {
        DatatypeSpec {
            name: name("Bool"),
            params: vec![],
            constructors: vec![
                Constructor { name: name("true"), args: vec![] },
                Constructor { name: name("false"), args: vec![] },
            ],
            recursor: name("ite"),
        }
    }

    #[test]
    fn bool_bundle() {
        let (env, b) = declare_datatype(&TheoryEnv::default(), &bool_spec()).unwrap();
        let names: Vec<&str> = b.axioms.iter().map(|(n, _)| &**n).collect();
        assert_eq!(
            names,
            ["Bool_distinct_true_false", "ite_true", "ite_false", "Bool_induct"]
        );
        let bool_ty = Type::former("Bool", 0);
        let a = Type::var("a");
        assert_eq!(b.recursor.1, Type::funs([bool_ty, a.clone(), a.clone()], a));
        assert!(b.axioms.iter().all(|(_, t)| t.label().as_str() == "I"));
        assert_eq!(
            env.lookup_fact("ite_true").unwrap().concl().to_string(),
            "forall f1:'a f2:'a. ite true f1 f2 = f1"
        );
    }

    #[test]
    fn unit_induction_has_one_case() {
        let spec = DatatypeSpec {
            name: name("Unit"),
            params: vec![],
            constructors: vec![Constructor { name: name("tt"), args: vec![] }],
            recursor: name("unit_rec"),
        };
        let (_, b) = declare_datatype(&TheoryEnv::default(), &spec).unwrap();
        let ind = &b.axioms.last().unwrap().1;
        let (_, body) = logic::dest_forall(ind.concl()).unwrap();
        let (_, rest) = logic::dest_imp(body).unwrap();
        assert!(logic::dest_imp(rest).is_none());
    }

    #[test]
    fn negative_occurrence_rejected() {
        let t = Type::former("T", 0);
        let spec = DatatypeSpec {
            name: name("T"),
            params: vec![],
            constructors: vec![Constructor {
                name: name("mk"),
                args: vec![Type::fun(t, Type::prop())],
            }],
            recursor: name("t_rec"),
        };
        assert!(matches!(
            declare_datatype(&TheoryEnv::default(), &spec),
            Err(TheoryError::NotStrictlyPositive(_))
        ));
    }

    #[test]
    fn lists_with_parameter() {
        let a = Type::var("a");
        let list = Type::app(Type::former("List", 1), a.clone());
        let spec = DatatypeSpec {
            name: name("List"),
            params: vec![name("a")],
            constructors: vec![
                Constructor { name: name("nil"), args: vec![] },
                Constructor { name: name("cons"), args: vec![a, list] },
            ],
            recursor: name("list_rec"),
        };
        let (env, b) = declare_datatype(&TheoryEnv::default(), &spec).unwrap();
        // result variable avoids the parameter name
        assert!(b.recursor.1.ftv().contains("a1"));
        assert!(env.lookup_fact("List_inj_cons").is_some());
    }
}
