//! Inputs shared by the benchmarks.

use std::ops::ControlFlow;

use shakebake_core::suite::{parse_suite, SuiteRow};
use shakebake_core::tdm::{encode, random_instance, Encoded};
use shakebake_core::{fixtures, run, Algorithm, Bag, Category, Grammar, SearchOptions};

pub fn figures() -> Grammar {
    Grammar::parse(fixtures::FIGURES_LEX).expect("bundled lexicon parses")
}

pub fn suite_rows() -> Vec<SuiteRow> {
    parse_suite(fixtures::FIG8_SUITE).expect("bundled suite parses")
}

pub fn row_bag(g: &Grammar, row: &SuiteRow) -> (Bag, Category) {
    let mut bag = Bag::from_words(&row.words, &g.lexicon).expect("suite words are in the lexicon");
    let target = bag
        .parse_category(&row.target)
        .expect("suite target parses");
    (bag, target)
}

/// Encoded random 3DM instances of size `n`.
pub fn tdm_instances(n: u32, count: u64) -> Vec<Encoded> {
    (0..count)
        .map(|seed| {
            let m = n as usize + seed as usize % (2 * n as usize + 1);
            encode(&random_instance(n, m, seed).expect("m is in range"))
        })
        .collect()
}

/// Runs `algorithm` to its first solution; returns whether there was one.
pub fn first_solution(algorithm: Algorithm, g: &Grammar, bag: &Bag, target: &Category) -> bool {
    let mut found = false;
    run(
        algorithm,
        bag,
        target,
        &g.rules,
        &SearchOptions::default(),
        &mut |_| {
            found = true;
            ControlFlow::Break(())
        },
    )
    .expect("bag within limits");
    found
}
