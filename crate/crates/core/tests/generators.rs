mod common;

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::time::Duration;

use common::*;
use shakebake_core::tdm::{encode, random_instance, solve_brute};
use shakebake_core::*;

fn set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn transitive_sentence_has_four_orderings() {
    let g = figures();
    let (bag, t) = bag_of(&g, &["fox", "a", "likes", "cat", "the"], "s");
    let want = set(&[
        "a cat likes the fox",
        "a fox likes the cat",
        "the cat likes a fox",
        "the fox likes a cat",
    ]);
    for algo in Algorithm::ALL {
        assert_eq!(yields(algo, &bag, &t, &[]), want, "{algo}");
    }
}

#[test]
fn adjectives_come_out_in_grade_order() {
    let g = figures();
    let (bag, t) = bag_of(&g, &["brown", "cat", "little", "the", "fierce"], "np");
    for algo in Algorithm::ALL {
        assert_eq!(
            yields(algo, &bag, &t, &[]),
            set(&["the fierce little brown cat"]),
            "{algo}"
        );
    }
}

#[test]
fn cp_deletes_links_and_counts_calls() {
    let g = figures();
    let (bag, t) = bag_of(
        &g,
        &[
            "fox", "yellow", "a", "likes", "cat", "brown", "little", "the",
        ],
        "s",
    );
    let mut stats = None;
    run(
        Algorithm::Cp,
        &bag,
        &t,
        &[],
        &SearchOptions::default(),
        &mut |s| {
            stats = Some(s.stats.clone());
            ControlFlow::Break(())
        },
    )
    .unwrap();
    let stats = stats.unwrap();
    assert!(stats.links_deleted > 0);
    assert!(stats.propagation_calls >= stats.reductions);
    assert!(!stats.fallback);
}

#[test]
fn ambiguous_words_fall_back_with_same_yield() {
    let g = Grammar::parse(
        "word the : np/n(_).\nword saw : n(_).\nword saw : (s\\np)/np.\nword dog : n(_).\n",
    )
    .unwrap();
    let (bag, t) = bag_of(&g, &["saw", "the", "dog", "the", "saw"], "s");
    let n = yields(Algorithm::Naive, &bag, &t, &[]);
    assert_eq!(n, set(&["the dog saw the saw", "the saw saw the dog"]));
    assert_eq!(yields(Algorithm::Whitelock, &bag, &t, &[]), n);
    let mut fallback = false;
    run(
        Algorithm::Cp,
        &bag,
        &t,
        &[],
        &SearchOptions::default(),
        &mut |s| {
            fallback = s.stats.fallback;
            ControlFlow::Break(())
        },
    )
    .unwrap();
    assert!(fallback);
    assert_eq!(yields(Algorithm::Cp, &bag, &t, &[]), n);
}

#[test]
fn higher_order_categories_fall_back() {
    let g = Grammar::parse("word john : np.\nword runs : s\\np.\nword very : (s\\np)\\(s\\np).\n")
        .unwrap();
    let (bag, t) = bag_of(&g, &["very", "runs", "john"], "s");
    let want = set(&["john runs very"]);
    for algo in Algorithm::ALL {
        assert_eq!(yields(algo, &bag, &t, &[]), want, "{algo}");
    }
}

#[test]
fn rule_grammars_agree_with_naive() {
    for seed in 0..20 {
        let inst = random_instance(2, 2 + seed as usize % 5, seed).unwrap();
        let e = encode(&inst);
        let (bag, t) = e.bag().unwrap();
        let n = yields(Algorithm::Naive, &bag, &t, &e.grammar.rules);
        assert_eq!(!n.is_empty(), solve_brute(&inst).unwrap(), "seed {seed}");
        assert_eq!(
            yields(Algorithm::Whitelock, &bag, &t, &e.grammar.rules),
            n,
            "seed {seed}"
        );
        assert_eq!(
            yields(Algorithm::Cp, &bag, &t, &e.grammar.rules),
            n,
            "seed {seed}"
        );
    }
}

#[test]
fn bag_file_with_word_lines() {
    let g = figures();
    let (bag, t) = load_bag("word fox.\nword a.\ntarget np.\n", &g.lexicon).unwrap();
    assert_eq!(
        yields(Algorithm::Cp, &bag, &t.unwrap(), &[]),
        set(&["a fox"])
    );
    let err = load_bag("word a.\nword wolf.\n", &g.lexicon).unwrap_err();
    assert!(err.to_string().contains("line 2"), "{err}");
}

#[test]
fn timeout_is_reported() {
    let inst = random_instance(4, 6, 11).unwrap();
    let e = encode(&inst);
    let (bag, t) = e.bag().unwrap();
    let opts = SearchOptions {
        timeout: Some(Duration::ZERO),
        ..Default::default()
    };
    let summary = run(
        Algorithm::Whitelock,
        &bag,
        &t,
        &e.grammar.rules,
        &opts,
        &mut |_| ControlFlow::Continue(()),
    )
    .unwrap();
    assert_eq!(summary.outcome, Outcome::TimedOut);
}

#[test]
fn invariant_checks_hold_on_suite_sentence() {
    let g = figures();
    let (bag, t) = bag_of(
        &g,
        &["fox", "tame", "a", "likes", "cat", "fierce", "the"],
        "s",
    );
    let opts = SearchOptions {
        check_invariants: true,
        ..Default::default()
    };
    let mut n = 0;
    for algo in [Algorithm::Whitelock, Algorithm::Cp] {
        run(algo, &bag, &t, &[], &opts, &mut |_| {
            n += 1;
            ControlFlow::Continue(())
        })
        .unwrap();
    }
    assert!(n >= 2);
}

#[test]
fn naive_rejects_large_bags() {
    let g = figures();
    let words = [
        "the", "fierce", "little", "brown", "cat", "likes", "a", "tame", "fox",
    ];
    let (bag, t) = bag_of(&g, &words, "s");
    let err = run(
        Algorithm::Naive,
        &bag,
        &t,
        &[],
        &SearchOptions::default(),
        &mut |_| ControlFlow::Continue(()),
    )
    .unwrap_err();
    assert!(matches!(err, Error::BagTooLarge { size: 9, cap: 8 }));
}
