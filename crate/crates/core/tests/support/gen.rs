//! Seeded generators for well-kinded types and well-typed terms over a
//! small signature with `nat : *` and `list : * => *`.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use taint_hol::lattice::TaintLattice;
use taint_hol::syntax::logic;
use taint_hol::syntax::{Term, Type};
use taint_hol::theory::TheoryEnv;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const TYVARS: [&str; 4] = ["a", "b", "c", "d"];
pub const VARS: [&str; 4] = ["x", "y", "z", "w"];

pub fn nat() -> Type {
    Type::former("nat", 0)
}

pub fn list(t: Type) -> Type {
    Type::app(Type::former("list", 1), t)
}

/// The four-chain environment extended with the generator's signature.
pub fn env() -> TheoryEnv {
    TheoryEnv::new(TaintLattice::four_chain())
        .declare_type("nat", 0)
        .and_then(|e| e.declare_type("list", 1))
        .and_then(|e| e.declare_constant("zero", &nat()))
        .and_then(|e| e.declare_constant("nil", &list(Type::var("a"))))
        .expect("generator signature")
}

/// A type over the first `nvars` type variables.
pub fn ty_in(rng: &mut Rng8, depth: u32, nvars: usize) -> Type {
    let leaf = depth == 0 || rng.gen_bool(0.4);
    if leaf {
        match rng.gen_range(0..4) {
            0 | 1 if nvars > 0 => Type::var(TYVARS[rng.gen_range(0..nvars)]),
            2 => nat(),
            _ => Type::prop(),
        }
    } else if rng.gen_bool(0.7) {
        Type::fun(ty_in(rng, depth - 1, nvars), ty_in(rng, depth - 1, nvars))
    } else {
        list(ty_in(rng, depth - 1, nvars))
    }
}

pub fn ty(rng: &mut Rng8, depth: u32) -> Type {
    ty_in(rng, depth, 3)
}

/// Small types, used for variables so that name clashes at equal types are
/// frequent.
pub fn small_ty(rng: &mut Rng8) -> Type {
    ty(rng, 1)
}

pub fn var_of(rng: &mut Rng8, t: &Type) -> Term {
    Term::var(*VARS.choose(rng).expect("nonempty"), t.clone())
}

/// A term of type `t`, well-typed by construction.
pub fn term_of(rng: &mut Rng8, t: &Type, depth: u32) -> Term {
    if depth == 0 {
        return leaf_of(rng, t);
    }
    let d = depth - 1;
    match rng.gen_range(0..10) {
        0 | 1 => leaf_of(rng, t),
        2 | 3 => match t.dest_fun() {
            Some((a, b)) => {
                let x = *VARS.choose(rng).expect("nonempty");
                Term::lam(x, a.clone(), term_of(rng, b, d))
            }
            None => app_of(rng, t, d),
        },
        4..=6 if t.is_prop() => prop_of(rng, d),
        _ => app_of(rng, t, d),
    }
}

fn leaf_of(rng: &mut Rng8, t: &Type) -> Term {
    if t.is_prop() && rng.gen_bool(0.2) {
        return if rng.gen_bool(0.5) { logic::truth() } else { logic::falsity() };
    }
    if *t == nat() && rng.gen_bool(0.2) {
        return Term::cnst("zero", nat());
    }
    var_of(rng, t)
}

fn app_of(rng: &mut Rng8, t: &Type, d: u32) -> Term {
    let a = small_ty(rng);
    let f = term_of(rng, &Type::fun(a.clone(), t.clone()), d);
    Term::app(f, term_of(rng, &a, d))
}

fn prop_of(rng: &mut Rng8, d: u32) -> Term {
    let p = Type::prop();
    match rng.gen_range(0..6) {
        0 => logic::mk_conj(term_of(rng, &p, d), term_of(rng, &p, d)),
        1 => logic::mk_disj(term_of(rng, &p, d), term_of(rng, &p, d)),
        2 => logic::mk_imp(term_of(rng, &p, d), term_of(rng, &p, d)),
        3 => logic::mk_neg(term_of(rng, &p, d)),
        4 => {
            let a = small_ty(rng);
            logic::mk_eq(term_of(rng, &a, d), term_of(rng, &a, d))
        }
        _ => {
            let a = small_ty(rng);
            let x = (taint_hol::syntax::name(*VARS.choose(rng).expect("nonempty")), a);
            let body = term_of(rng, &p, d);
            if rng.gen_bool(0.5) {
                logic::mk_forall(&x, body)
            } else {
                logic::mk_exists(&x, body)
            }
        }
    }
}

/// A random well-typed term together with its type.
pub fn term(rng: &mut Rng8, depth: u32) -> (Term, Type) {
    let t = if rng.gen_bool(0.5) { Type::prop() } else { ty(rng, 2) };
    (term_of(rng, &t, depth), t)
}
