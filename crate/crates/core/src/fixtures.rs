//! Fixture files bundled with the crate.

/// The demonstration lexicon: determiners, graded adjectives, nouns and a
/// transitive verb.
pub const FIGURES_LEX: &str = include_str!("../fixtures/figures.lex");

/// The reduction-count suite over [`FIGURES_LEX`].
pub const FIG8_SUITE: &str = include_str!("../fixtures/fig8.suite");

/// `mary likes frances` with index variables shared between items.
pub const MARY_BAG: &str = include_str!("../fixtures/mary_likes_frances.bag");
