//! Bag generation for categorial grammars.
//!
//! Given a multiset of words and a target category, find the orderings of
//! the words that a grammar derives as the target. Three generators are
//! provided:
//!
//! - [`naive`]: every permutation through a chart parser;
//! - [`whitelock`]: shift-reduce search over the bag;
//! - [`sbgen`]: the same search pruned by constraint propagation over a
//!   [`congraph::ConGraph`] of functor/argument links.
//!
//! [`tdm`] reduces three-dimensional matching to bag generation.

pub mod bag;
pub mod category;
pub mod congraph;
pub mod fixtures;
pub mod lexicon;
pub mod naive;
pub mod sbgen;
pub mod sign;
pub mod suite;
pub mod syntax;
pub mod tdm;
pub mod term;
pub mod whitelock;

use std::fmt;
use std::ops::ControlFlow;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

pub use bag::{load_bag, Bag, BagFile, BagItem, BasicSignNode, NodeId, Reading};
pub use category::{BasicCat, Category, Dir};
pub use congraph::ConGraph;
pub use lexicon::{load_lexicon, Grammar, Lexicon, Rule, RuleSet};
pub use sign::{Link, Sign};
pub use term::{Atom, BindStore, Mark, Term, VarId};
pub use whitelock::{Outcome, RunSummary, SearchOptions, SearchStats, Solution};

/// A parse error with a 1-based position.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("line {line}: unknown word `{word}`")]
    UnknownWordAt { word: String, line: usize },
    #[error("bag of {size} items exceeds the generate-and-test cap of {cap}")]
    BagTooLarge { size: usize, cap: usize },
    #[error("3DM: {0}")]
    Tdm(String),
    #[error("suite: {0}")]
    Suite(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("no target category given")]
    MissingTarget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Naive,
    Whitelock,
    Cp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Naive, Algorithm::Whitelock, Algorithm::Cp];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Naive => "naive",
            Algorithm::Whitelock => "whitelock",
            Algorithm::Cp => "cp",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}` (naive, whitelock, cp)"))
    }
}

/// Runs `algorithm` and reports each solution to `visit`.
///
/// Generate-and-test reports each distinct ordering once and keeps no
/// reduction counts; it ignores the timeout. The other two may report an
/// ordering once per derivation.
pub fn run(
    algorithm: Algorithm,
    bag: &Bag,
    target: &Category,
    rules: &[Rule],
    options: &SearchOptions,
    visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>,
) -> Result<RunSummary, Error> {
    match algorithm {
        Algorithm::Whitelock => Ok(whitelock::generate(bag, target, rules, options, visit)),
        Algorithm::Cp => Ok(sbgen::generate_cp(bag, target, rules, options, visit)),
        Algorithm::Naive => {
            let start = Instant::now();
            let mut stats = SearchStats::default();
            let outcome =
                naive::generate_naive(bag, target, rules, naive::DEFAULT_CAP, &mut |p| {
                    stats.wall_millis = start.elapsed().as_millis() as u64;
                    visit(&Solution {
                        phrase: p.to_vec(),
                        category: target.clone(),
                        stats: stats.clone(),
                    })
                })?;
            stats.wall_millis = start.elapsed().as_millis() as u64;
            Ok(RunSummary {
                outcome,
                stats,
                built: Vec::new(),
            })
        }
    }
}
