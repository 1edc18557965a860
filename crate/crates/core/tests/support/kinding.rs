//! Exhaustive derivation search over the three kinding rules.

use taint_hol::syntax::{Kind, Signature, Type, TypeFormer};

const MAX_ARITY: u32 = 4;

/// Is `ty : k` derivable? Variables are at `*`; a registered former is at
/// its registered kind; `t u : k` needs `t : k + 1` and `u : *`.
pub fn derivable(sig: &Signature, ty: &Type, k: u32) -> bool {
    match ty {
        Type::Var(_) => k == 0,
        Type::Former(TypeFormer { name, kind }) => sig.former_kind(name) == Some(*kind) && kind.0 == k,
        Type::App(f, a) => k < MAX_ARITY && derivable(sig, f, k + 1) && derivable(sig, a, 0),
    }
}

/// All kinds derivable for `ty`.
pub fn kinds(sig: &Signature, ty: &Type) -> Vec<Kind> {
    (0..=MAX_ARITY).filter(|&k| derivable(sig, ty, k)).map(Kind).collect()
}

/// Every pre-type of application depth at most `depth` over a variable,
/// `Prop`, the arrow, and `list`.
pub fn all_pretypes(depth: u32) -> Vec<Type> {
    let leaves = vec![
        Type::var("a"),
        Type::prop(),
        Type::former("->", 2),
        Type::former("list", 1),
    ];
    let mut level = leaves.clone();
    for _ in 0..depth {
        let mut next = leaves.clone();
        for f in &level {
            for a in &level {
                next.push(Type::app(f.clone(), a.clone()));
            }
        }
        level = next;
    }
    level
}
