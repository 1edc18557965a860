mod support;

use support::kinding::{all_pretypes, kinds};
use taint_hol::syntax::{kind_of, Kind, Signature, Type};
use taint_hol::theory::TheoryEnv;

fn sig() -> Signature {
    TheoryEnv::default().declare_type("list", 1).unwrap().signature().clone()
}

#[test]
fn kind_of_agrees_with_derivation_search_to_depth_three() {
    let sig = sig();
    let all = all_pretypes(3);
    assert!(all.len() > 100_000);
    let mut kinded = 0;
    for ty in &all {
        let derivable = kinds(&sig, ty);
        assert!(derivable.len() <= 1, "{ty:?} has kinds {derivable:?}");
        match kind_of(&sig, ty) {
            Ok(k) => {
                assert_eq!(derivable, [k], "{ty:?}");
                kinded += 1;
            }
            Err(_) => assert!(derivable.is_empty(), "{ty:?} is derivable at {derivable:?}"),
        }
    }
    assert_eq!(kinded, 88);
}

#[test]
fn examples() {
    let sig = sig();
    let arrow = Type::former("->", 2);
    assert_eq!(kind_of(&sig, &Type::prop()), Ok(Kind(0)));
    assert_eq!(kind_of(&sig, &Type::var("a")), Ok(Kind(0)));
    assert_eq!(kind_of(&sig, &Type::app(arrow, Type::prop())), Ok(Kind(1)));
    assert!(kind_of(&sig, &Type::app(Type::prop(), Type::prop())).is_err());
    assert!(kind_of(&sig, &Type::former("tree", 1)).is_err());
}
