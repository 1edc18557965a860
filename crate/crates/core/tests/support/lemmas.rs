//! The substitution lemmas, unicity and preservation, each checked on
//! random instances. Equalities between terms are decided by the nameless
//! oracle, not by the library's own alpha-equivalence.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use taint_hol::syntax::{
    ftv_term, ftv_type, fv_term, kind_of, term_subst, term_type_subst, type_of, type_subst, Kind, Name, Term, Type, Var,
};
use taint_hol::theory::TheoryEnv;

use super::debruijn::{self, to_db};
use super::gen::{self, Rng8, TYVARS, VARS};

pub type Check = fn(&TheoryEnv, &mut Rng8) -> Result<(), String>;

fn same(a: &Term, b: &Term) -> bool {
    to_db(a) == to_db(b)
}

fn fail<T: std::fmt::Debug>(what: &str, data: T) -> Result<(), String> {
    Err(format!("{what}: {data:?}"))
}

/// A type variable not free in any of `tys`.
fn tyvar_not_in(rng: &mut Rng8, tys: &[&BTreeSet<Name>]) -> Name {
    let free: Vec<&str> = TYVARS.iter().copied().filter(|v| tys.iter().all(|s| !s.contains(*v))).collect();
    taint_hol::syntax::name(free.choose(rng).copied().unwrap_or("e"))
}

fn random_var(rng: &mut Rng8) -> Var {
    (taint_hol::syntax::name(*VARS.choose(rng).expect("nonempty")), gen::small_ty(rng))
}

/// A variable, and a term of its type.
fn var_and_term(rng: &mut Rng8) -> (Var, Term) {
    let v = random_var(rng);
    let s = gen::term_of(rng, &v.1, 2);
    (v, s)
}

// type in type

fn ty_identity(_: &TheoryEnv, rng: &mut Rng8) -> Result<(), String> {
    let t = gen::ty(rng, 4);
    let a = *TYVARS.choose(rng).expect("nonempty");
    if type_subst(&t, a, &Type::var(a)) != t {
        return fail("t[a := a] != t", t);
    }
    Ok(())
}

fn ty_garbage(_: &TheoryEnv, rng: &mut Rng8) -> Result<(), String> {
    let t = gen::ty(rng, 4);
    let b = tyvar_not_in(rng, &[&ftv_type(&t)]);
    let by = gen::ty(rng, 3);
    if type_subst(&t, &b, &by) != t {
        return fail("b not free in t but t[b := u] != t", (t, b, by));
    }
    Ok(())
}

fn ty_commute(_: &TheoryEnv, rng: &mut Rng8) -> Result<(), String> {
    let t = gen::ty_in(rng, 4, 4);
    let (t1, t2) = (gen::ty_in(rng, 2, 4), gen::ty_in(rng, 2, 4));
    let b = tyvar_not_in(rng, &[&ftv_type(&t2)]);
    let others: Vec<&str> = TYVARS.iter().copied().filter(|g| **g != *b).collect();
    let g = *others.choose(rng).expect("nonempty");
    let l = type_subst(&type_subst(&t, &b, &t1), g, &t2);
    let r = type_subst(&type_subst(&t, g, &t2), &b, &type_subst(&t1, g, &t2));
    if l != r {
        return fail("type substitutions do not commute", (t, b, t1, g, t2));
    }
    Ok(())
}

fn ty_ftv(_: &TheoryEnv, rng: &mut Rng8) -> Result<(), String> {
    let t = gen::ty_in(rng, 4, 4);
    let by = gen::ty_in(rng, 3, 4);
    let b = *TYVARS.choose(rng).expect("nonempty");
    let mut bound = ftv_type(&t);
    bound.remove(b);
    bound.extend(ftv_type(&by));
    if !ftv_type(&type_subst(&t, b, &by)).is_subset(&bound) {
        return fail("ftv grew under type substitution", (t, b, by));
    }
    Ok(())
}

// type in term

fn tm_ty_identity(_: &TheoryEnv, rng: &mut Rng8) -> Result<(), String> {
    let (r, _) = gen::term(rng, 4);
    let a = *TYVARS.choose(rng).expect("nonempty");
    if !same(&term_type_subst(&r, a, &Type::var(a)), &r) {
        return fail("r[a := a] != r", r);
    }
    Ok(())
}

fn tm_ty_garbage(_: &TheoryEnv, rng: &mut Rng8) -> Result<(), String> {
    let (r, _) = gen::term(rng, 4);
    let b = tyvar_not_in(rng, &[&ftv_term(&r)]);
    let by = gen::ty(rng, 2);
    if !same(&term_type_subst(&r, &b, &by), &r) {
        return fail("b not free in r but r[b := u] != r", (r, b, by));
    }
    Ok(())
}

fn tm_ty_commute(_: &TheoryEnv, rng: &mut Rng8) -> Result<(), String> {
    let (r, _) = gen::term(rng, 4);
    let (t1, t2) = (gen::ty(rng, 2), gen::ty(rng, 2));
    let b = tyvar_not_in(rng, &[&ftv_type(&t2)]);
    let others: Vec<&str> = TYVARS.iter().copied().filter(|g| **g != *b).collect();
    let g = *others.choose(rng).expect("nonempty");
    let l = term_type_subst(&term_type_subst(&r, &b, &t1), g, &t2);
    let rr = term_type_subst(&term_type_subst(&r, g, &t2), &b, &type_subst(&t1, g, &t2));
    if !same(&l, &rr) {
        return fail("type substitutions on terms do not commute", (r, b, t1, g, t2));
    }
    Ok(())
}

fn tm_ty_ftv(_: &TheoryEnv, rng: &mut Rng8) -> Result<(), String> {
    let (r, _) = gen::term(rng, 4);
    let by = gen::ty(rng, 2);
    let b = *TYVARS.choose(rng).expect("nonempty");
    let mut bound = ftv_term(&r);
    bound.remove(b);
    bound.extend(ftv_type(&by));
    if !ftv_term(&term_type_subst(&r, b, &by)).is_subset(&bound) {
        return fail("ftv grew under type substitution on a term", (r, b, by));
    }
    Ok(())
}

// term in term

fn subst(r: &Term, v: &Var, s: &Term) -> Result<Term, String> {
    term_subst(r, v, s).map_err(|e| e.to_string())
}

fn tm_identity(_: &TheoryEnv, rng: &mut Rng8) -> Result<(), String> {
    let (r, _) = gen::term(rng, 4);
    let v = random_var(rng);
    if !same(&subst(&r, &v, &Term::from_var(&v))?, &r) {
        return fail("r[x := x] != r", (r, v));
    }
    Ok(())
}

fn tm_garbage(_: &TheoryEnv, rng: &mut Rng8) -> Result<(), String> {
    let (r, _) = gen::term(rng, 4);
    let fv = fv_term(&r);
    let (v, s) = var_and_term(rng);
    let v = if fv.contains(&v) { (taint_hol::syntax::name("u"), v.1) } else { v };
    if !same(&subst(&r, &v, &s)?, &r) {
        return fail("x not free in r but r[x := s] != r", (r, v, s));
    }
    Ok(())
}

fn tm_commute(_: &TheoryEnv, rng: &mut Rng8) -> Result<(), String> {
    let (r, _) = gen::term(rng, 4);
    let (x, s) = var_and_term(rng);
    let (y, u) = var_and_term(rng);
    if x == y || fv_term(&u).contains(&x) {
        // premise fails; reuse the instance with a fresh variable for x
        let x2 = (taint_hol::syntax::name("u"), x.1.clone());
        if fv_term(&u).contains(&x2) || x2 == y {
            return Ok(());
        }
        return commute_instance(&r, &x2, &s, &y, &u);
    }
    commute_instance(&r, &x, &s, &y, &u)
}

fn commute_instance(r: &Term, x: &Var, s: &Term, y: &Var, u: &Term) -> Result<(), String> {
    let l = subst(&subst(r, x, s)?, y, u)?;
    let rr = subst(&subst(r, y, u)?, x, &subst(s, y, u)?)?;
    if !same(&l, &rr) {
        return fail("term substitutions do not commute", (r, x, s, y, u));
    }
    Ok(())
}

fn tm_fv(_: &TheoryEnv, rng: &mut Rng8) -> Result<(), String> {
    let (r, _) = gen::term(rng, 4);
    let (v, s) = var_and_term(rng);
    let mut bound = fv_term(&r);
    bound.remove(&v);
    bound.extend(fv_term(&s));
    if !fv_term(&subst(&r, &v, &s)?).is_subset(&bound) {
        return fail("fv grew under substitution", (r, v, s));
    }
    Ok(())
}

// capture avoidance against the nameless model

fn tm_subst_oracle(_: &TheoryEnv, rng: &mut Rng8) -> Result<(), String> {
    let (r, _) = gen::term(rng, 4);
    let (v, s) = var_and_term(rng);
    let got = to_db(&subst(&r, &v, &s)?);
    let want = debruijn::subst(&to_db(&r), &v.0, &v.1, &to_db(&s));
    if got != want {
        return fail("substitution disagrees with the nameless model", (r, v, s));
    }
    Ok(())
}

fn tm_ty_subst_oracle(_: &TheoryEnv, rng: &mut Rng8) -> Result<(), String> {
    let (r, _) = gen::term(rng, 4);
    let b = *TYVARS.choose(rng).expect("nonempty");
    let by = gen::ty(rng, 2);
    let got = to_db(&term_type_subst(&r, b, &by));
    let want = debruijn::type_subst(&to_db(&r), b, &by);
    if got != want {
        return fail("type substitution disagrees with the nameless model", (r, b, by));
    }
    Ok(())
}

fn alpha_oracle(_: &TheoryEnv, rng: &mut Rng8) -> Result<(), String> {
    let (a, ty) = gen::term(rng, 4);
    let b = if rng.gen_bool(0.5) {
        debruijn::from_db(&to_db(&a))
    } else {
        gen::term_of(rng, &ty, 4)
    };
    if taint_hol::syntax::alpha_eq(&a, &b) != debruijn::alpha_eq(&a, &b) {
        return fail("alpha_eq disagrees with the nameless model", (a, b));
    }
    Ok(())
}

// unicity and preservation

fn kind_unicity(env: &TheoryEnv, rng: &mut Rng8) -> Result<(), String> {
    let t = gen::ty(rng, 4);
    let ks = super::kinding::kinds(env.signature(), &t);
    match kind_of(env.signature(), &t) {
        Ok(k) if ks == [k] && k == Kind::STAR => Ok(()),
        other => fail("well-formed type without a unique kind", (t, other.map_err(|e| e.to_string()), ks)),
    }
}

fn type_unicity(env: &TheoryEnv, rng: &mut Rng8) -> Result<(), String> {
    let (r, ty) = gen::term(rng, 4);
    let sig = env.signature();
    let t1 = type_of(sig, &r).map_err(|e| format!("{r}: {e}"))?;
    let t2 = type_of(sig, &debruijn::from_db(&to_db(&r))).map_err(|e| e.to_string())?;
    if t1 != ty || t2 != ty {
        return fail("type_of is not the generated type", (r, ty, t1, t2));
    }
    if kind_of(sig, &t1).map_err(|e| e.to_string())? != Kind::STAR {
        return fail("type of a term is not of kind *", t1);
    }
    Ok(())
}

fn subst_preserves_typing(env: &TheoryEnv, rng: &mut Rng8) -> Result<(), String> {
    let (r, ty) = gen::term(rng, 4);
    let (v, s) = var_and_term(rng);
    let got = type_of(env.signature(), &subst(&r, &v, &s)?).map_err(|e| e.to_string())?;
    if got != ty {
        return fail("substitution changed the type", (r, v, s));
    }
    Ok(())
}

fn type_subst_preserves_typing(env: &TheoryEnv, rng: &mut Rng8) -> Result<(), String> {
    let (r, ty) = gen::term(rng, 4);
    let b = *TYVARS.choose(rng).expect("nonempty");
    let by = gen::ty(rng, 2);
    let got = type_of(env.signature(), &term_type_subst(&r, b, &by)).map_err(|e| e.to_string())?;
    if got != type_subst(&ty, b, &by) {
        return fail("type substitution does not commute with typing", (r, b, by));
    }
    Ok(())
}

/// The twelve substitution lemmas: identity, garbage collection,
/// commutation and free-variable reduction, for types in types, types in
/// terms, and terms in terms.
pub const SUBSTITUTION: [(&str, Check); 12] = [
    ("type/type identity", ty_identity),
    ("type/type garbage", ty_garbage),
    ("type/type commutation", ty_commute),
    ("type/type ftv", ty_ftv),
    ("type/term identity", tm_ty_identity),
    ("type/term garbage", tm_ty_garbage),
    ("type/term commutation", tm_ty_commute),
    ("type/term ftv", tm_ty_ftv),
    ("term/term identity", tm_identity),
    ("term/term garbage", tm_garbage),
    ("term/term commutation", tm_commute),
    ("term/term fv", tm_fv),
];

pub const OTHERS: [(&str, Check); 7] = [
    ("kinding unicity", kind_unicity),
    ("typing unicity", type_unicity),
    ("substitution preserves typing", subst_preserves_typing),
    ("type substitution preserves typing", type_subst_preserves_typing),
    ("capture avoidance (nameless model)", tm_subst_oracle),
    ("type substitution (nameless model)", tm_ty_subst_oracle),
    ("alpha-equivalence (nameless model)", alpha_oracle),
];

/// Runs `check` on `n` instances from a fixed seed.
pub fn run(env: &TheoryEnv, seed: u64, n: usize, check: Check) -> Result<(), String> {
    let mut rng = gen::rng(seed);
    for i in 0..n {
        check(env, &mut rng).map_err(|e| format!("instance {i}: {e}"))?;
    }
    Ok(())
}
