//! Shift-reduce generation with constraint propagation.
//!
//! The search is the one in [`crate::whitelock`]; before each application
//! the functor/argument node pair is committed in a [`ConGraph`] and
//! propagated. A contradiction skips the reduction without attempting it.
//! Graph and bindings are marked at every choice point and undone on
//! backtracking.

use std::ops::ControlFlow;

use crate::bag::{Bag, NodeId};
use crate::category::Category;
use crate::congraph::{BuildError, ConGraph, GraphMark};
use crate::lexicon::Rule;
use crate::sign::Link;
use crate::term::BindStore;
use crate::whitelock::Outcome;
use crate::whitelock::{
    ReduceFilter, RunSummary, Search, SearchOptions, SearchStats, Solution, Unfiltered,
};

/// [`ConGraph`] driven from the reduce step.
pub struct Propagator {
    graph: ConGraph,
    calls: u64,
}

impl Propagator {
    pub fn new(graph: ConGraph) -> Self {
        Propagator { graph, calls: 0 }
    }

    pub fn graph(&self) -> &ConGraph {
        &self.graph
    }
}

impl ReduceFilter for Propagator {
    type Mark = GraphMark;

    fn mark(&self, store: &BindStore) -> GraphMark {
        self.graph.mark(store)
    }

    fn undo(&mut self, mark: GraphMark, store: &mut BindStore) {
        self.graph.undo(mark, store)
    }

    fn admit(&mut self, link: Link, store: &mut BindStore) -> bool {
        self.calls += 1;
        self.graph.commit_link(link.root, link.slot, store).is_ok()
    }

    fn admit_final(&mut self, root: Option<NodeId>, store: &mut BindStore) -> bool {
        match root {
            Some(r) => self.graph.commit_link(r, NodeId::DUMMY, store).is_ok(),
            None => true,
        }
    }

    fn record(&self, stats: &mut SearchStats) {
        stats.links_deleted = self.graph.deletions();
    }

    fn is_active(&self) -> bool {
        true
    }
}

/// Generates with constraint propagation. Bags the graph cannot represent
/// (grammar rules, ambiguity, higher-order categories, non-basic target) are
/// handed to the plain search and the stats carry `fallback = true`.
pub fn generate_cp(
    bag: &Bag,
    target: &Category,
    rules: &[Rule],
    options: &SearchOptions,
    visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>,
) -> RunSummary {
    let mut store = bag.store.clone();
    let mut graph = match ConGraph::build(bag, target, rules, &mut store) {
        Ok(g) => g,
        Err(BuildError::Unsupported(_)) => {
            let mut search = Search::new(bag, target, rules, store, Unfiltered, options);
            search.stats_mut().fallback = true;
            return search.run(visit);
        }
        Err(BuildError::CountMismatch { .. }) => return empty_run(),
    };
    if graph.propagate(&mut store).is_err() {
        return RunSummary {
            stats: SearchStats {
                links_deleted: graph.deletions(),
                propagation_calls: 1,
                ..Default::default()
            },
            ..empty_run()
        };
    }
    let mut search = Search::new(bag, target, rules, store, Propagator::new(graph), options);
    search.stats_mut().propagation_calls = 1;
    search.run(visit)
}

fn empty_run() -> RunSummary {
    RunSummary {
        outcome: Outcome::Exhausted,
        stats: SearchStats::default(),
        built: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lexicon::Grammar;
    use crate::whitelock::generate;

    fn first(words: &[&str], target: &str, cp: bool) -> Option<Solution> {
        let g = Grammar::parse(fixtures::FIGURES_LEX).unwrap();
        let mut bag = Bag::from_words(words, &g.lexicon).unwrap();
        let t = bag.parse_category(target).unwrap();
        let mut found = None;
        let mut visit = |s: &Solution| {
            found = Some(s.clone());
            ControlFlow::Break(())
        };
        if cp {
            generate_cp(&bag, &t, &[], &SearchOptions::default(), &mut visit);
        } else {
            generate(&bag, &t, &[], &SearchOptions::default(), &mut visit);
        }
        found
    }

    #[test]
    fn a_fox_matches_plain_search() {
        let s = first(&["a", "fox"], "np", true).unwrap();
        assert_eq!(s.text(), "a fox");
        assert_eq!(s.stats.reductions, 1);
    }

    #[test]
    fn adjective_phrase_needs_no_dead_ends() {
        let s = first(&["brown", "little", "fierce", "the", "cat"], "np", true).unwrap();
        assert_eq!(s.text(), "the fierce little brown cat");
        assert_eq!(s.stats.reductions, 4);
        assert!(!s.stats.fallback);
    }

    #[test]
    fn unbalanced_bag_yields_nothing() {
        assert!(first(&["cat", "cat"], "np", true).is_none());
    }

    #[test]
    fn rules_force_fallback() {
        let g = Grammar::parse("word b : b.\nword c : c.\nrule p -> b c.\n").unwrap();
        let mut bag = Bag::from_words(&["c", "b"], &g.lexicon).unwrap();
        let t = bag.parse_category("p").unwrap();
        let mut found = None;
        generate_cp(&bag, &t, &g.rules, &SearchOptions::default(), &mut |s| {
            found = Some(s.clone());
            ControlFlow::Break(())
        });
        let s = found.unwrap();
        assert_eq!(s.text(), "c b");
        assert!(s.stats.fallback);
    }
}
