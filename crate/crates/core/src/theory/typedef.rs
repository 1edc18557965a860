//! Carving subset types out of a host type.

use std::sync::Arc;

use crate::kernel::{RuleId, Thm};
use crate::syntax::{logic, name, type_of, Kind, Name, Term, Type, TypeFormer};

use super::{Extension, Result, TheoryEnv, TheoryError};

#[derive(Clone, Debug)]
pub struct TypedefBundle {
    pub new_former: TypeFormer,
    /// The new former applied to the type variables of the predicate.
    pub new_ty: Type,
    pub host: Type,
    pub predicate: Term,
    /// `inj : host -> new`.
    pub inj: (Name, Type),
    /// `proj : new -> host`.
    pub proj: (Name, Type),
    /// `proj o inj = id` and `forall S. pred S --> proj (inj S) = S`, at the
    /// witness label. Composition is diagrammatic: `(f o g) x = g (f x)`.
    pub laws: [Thm; 2],
}

/// `pred t`, beta-reduced when `pred` is an abstraction.
fn holds(pred: &Term, t: &Term) -> Term {
    match pred {
        Term::Lam(x, ty, b) => b.subst(&(x.clone(), ty.clone()), t),
        _ => Term::app(pred.clone(), t.clone()),
    }
}

/// Introduces a new type in bijection with the elements of `host`
/// satisfying `predicate`, given a closed witness `|- exists x. predicate x : ℓ`.
/// The two laws are asserted at `ℓ`.
pub fn typedef(
    env: &TheoryEnv,
    ty_name: &str,
    predicate: &Term,
    witness: &Thm,
    inj: &str,
    proj: &str,
) -> Result<(TheoryEnv, TypedefBundle)> {
    if !witness.context().is_empty() {
        return Err(TheoryError::NonEmptyWitnessContext);
    }
    if let Some((v, _)) = predicate.fv().into_iter().next() {
        return Err(TheoryError::FreeVariableInDefiniens(v.to_string()));
    }
    let pty = type_of(env.signature(), predicate)?;
    let host = match pty.dest_fun() {
        Some((h, r)) if r.is_prop() => h.clone(),
        _ => {
            return Err(TheoryError::WitnessShapeError(format!(
                "predicate has type {pty}, expected a predicate"
            )))
        }
    };
    let shape_ok = match logic::dest_exists(witness.concl()) {
        Some((x, body)) if x.1 == host => {
            let xt = Term::from_var(&x);
            let direct = logic::normalize_iff(&Term::app(predicate.clone(), xt.clone()));
            let reduced = logic::normalize_iff(&holds(predicate, &xt));
            *body == direct || *body == reduced
        }
        _ => false,
    };
    if !shape_ok {
        return Err(TheoryError::WitnessShapeError(format!(
            "witness proves {}, expected exists x. {} x",
            witness.concl(),
            predicate
        )));
    }
    let (comp, id) = match (env.signature().constant_type("o"), env.signature().constant_type("id")) {
        (Some(_), Some(_)) => ("o", "id"),
        _ => return Err(TheoryError::Missing("composition `o` and `id`".into())),
    };

    let params: Vec<Name> = predicate.ftv().into_iter().collect();
    let mut out = env.clone();
    let new_former = out.sig_mut().add_former(ty_name, Kind(params.len() as u32))?;
    let new_ty = params
        .iter()
        .fold(Type::Former(new_former.clone()), |t, p| Type::app(t, Type::Var(p.clone())));
    let inj_ty = Type::fun(host.clone(), new_ty.clone());
    let proj_ty = Type::fun(new_ty.clone(), host.clone());
    for (n, t) in [(inj, &inj_ty), (proj, &proj_ty)] {
        if out.signature().constant_type(n).is_some() {
            return Err(TheoryError::DuplicateName(n.to_string()));
        }
        out.sig_mut().add_constant(n, t.clone())?;
    }
    let inj_c = Term::cnst(inj, inj_ty.clone());
    let proj_c = Term::cnst(proj, proj_ty.clone());
    let endo = Type::fun(new_ty.clone(), new_ty.clone());
    let comp_c = Term::cnst(
        comp,
        Type::funs([proj_ty.clone(), inj_ty.clone()], endo.clone()),
    );
    let law1 = logic::mk_eq(
        Term::apps(comp_c, [proj_c.clone(), inj_c.clone()]),
        Term::cnst(id, endo),
    );
    let s = (name("S"), host.clone());
    let st = Term::from_var(&s);
    let law2 = logic::mk_forall(
        &s,
        logic::mk_imp(
            holds(predicate, &st),
            logic::mk_eq(Term::app(proj_c, Term::app(inj_c, st.clone())), st),
        ),
    );
    type_of(out.signature(), &law1)?;
    type_of(out.signature(), &law2)?;
    let label = witness.label().clone();
    let t1 = out.insert_axiom(RuleId::TypedefLaw(name(ty_name), 1), law1, label.clone());
    let t2 = out.insert_axiom(RuleId::TypedefLaw(name(ty_name), 2), law2, label);
    let bundle = TypedefBundle {
        new_former,
        new_ty,
        host,
        predicate: predicate.clone(),
        inj: (name(inj), inj_ty),
        proj: (name(proj), proj_ty),
        laws: [t1, t2],
    };
    out.push_typedef(bundle.clone());
    out.push_log(Extension::Typedef {
        name: name(ty_name),
        predicate: predicate.clone(),
        witness: Arc::clone(witness.proof()),
        inj: name(inj),
        proj: name(proj),
    });
    Ok((out, bundle))
}
