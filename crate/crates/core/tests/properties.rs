mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{oracle_unify, random_term, unify_round_trip};
use shakebake_core::syntax::{parse_category_in, VarScope};
use shakebake_core::*;

const VARS: u32 = 4;

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0..VARS).prop_map(|v| Term::Var(VarId(v))),
        prop_oneof![Just("a"), Just("b"), Just("sg")].prop_map(Term::sym),
        (0u64..3).prop_map(Term::int),
        Just(Term::Nil),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::compound("f", vec![a, b])),
            inner.clone().prop_map(|a| Term::compound("g", vec![a])),
            (inner.clone(), inner).prop_map(|(h, t)| Term::cons(h, t)),
        ]
    })
}

fn category() -> impl Strategy<Value = Category> {
    let basic = (
        prop_oneof![Just("np"), Just("n"), Just("s")],
        prop::collection::vec(term(), 0..3),
    )
        .prop_map(|(name, feats)| Category::basic(name, feats));
    basic.prop_recursive(3, 8, 2, |inner| {
        (inner.clone(), inner, any::<bool>()).prop_map(|(r, a, right)| {
            Category::functor(r, a, if right { Dir::Right } else { Dir::Left })
        })
    })
}

/// Variables renamed `V0, V1, ...` in order of first appearance.
fn canonical(text: &str) -> String {
    let mut names: Vec<String> = Vec::new();
    let mut out = String::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '_' {
            let mut name = String::from('_');
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric()) {
                name.push(d);
                chars.next();
            }
            let i = names.iter().position(|n| *n == name).unwrap_or_else(|| {
                names.push(name);
                names.len() - 1
            });
            out.push_str(&format!("V{i}"));
        } else {
            out.push(c);
        }
    }
    out
}

proptest! {
    #[test]
    fn unify_agrees_with_oracle_and_undoes(a in term(), b in term()) {
        prop_assert_eq!(unify_round_trip(&a, &b, VARS), Ok(()));
    }

    #[test]
    fn unify_is_symmetric(a in term(), b in term()) {
        let mut s1 = BindStore::new();
        s1.reserve_vars(VARS);
        let mut s2 = s1.clone();
        prop_assert_eq!(s1.unify(&a, &b), s2.unify(&b, &a));
    }

    #[test]
    fn category_printing_reparses(c in category()) {
        let printed = c.to_string();
        let mut store = BindStore::new();
        let again = parse_category_in(&printed, &mut store, &mut VarScope::new()).unwrap();
        prop_assert_eq!(canonical(&again.to_string()), canonical(&printed));
        prop_assert_eq!(again.decompose().len(), c.decompose().len());
    }

    #[test]
    fn decomposition_has_one_root(c in category()) {
        let occ = c.decompose();
        prop_assert_eq!(occ.iter().filter(|o| o.level == 0).count(), 1);
        prop_assert_eq!(occ.len(), c.arguments().iter().map(|(a, _)| a.decompose().len()).sum::<usize>() + 1);
    }
}

#[test]
fn occurs_check_rejects_cycles() {
    let mut s = BindStore::new();
    let x = s.fresh_var();
    assert!(!s.unify(&x, &Term::compound("f", vec![x.clone()])));
    assert_eq!(s.trail_len(), 0);
    assert!(oracle_unify(&x, &Term::compound("f", vec![x.clone()])).is_none());
}

#[test]
fn nested_marks_undo_in_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut s = BindStore::new();
    s.reserve_vars(VARS);
    let mut marks = Vec::new();
    for _ in 0..50 {
        marks.push((s.mark(), s.trail_len()));
        let a = random_term(&mut rng, 2, VARS);
        let b = random_term(&mut rng, 2, VARS);
        s.unify(&a, &b);
    }
    while let Some((m, len)) = marks.pop() {
        s.undo_to(m);
        assert_eq!(s.trail_len(), len);
    }
    assert!((0..VARS).all(|v| !s.is_bound(VarId(v))));
}
