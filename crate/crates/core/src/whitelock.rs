//! Shift-reduce generation from a bag.
//!
//! A depth-first search over parser states. A state holds a stack of signs
//! and the suffix of the bag not yet shifted. From every state the search
//! tries, in order:
//!
//! 1. termination, when the bag is used up and one sign remains;
//! 2. shifting the next bag item (one branch per lexical reading);
//! 3. reducing the stack top with any deeper element, nearest first. For each
//!    pair it tries the deeper sign as functor, then the top as functor, then
//!    every rule with the phrase `deeper top` and then `top deeper`. Rules are
//!    unordered, so each phrase order matches the children both ways round.
//!
//! Because the second element of a reduction may come from anywhere in the
//! stack, the bag order does not restrict which orderings are found.
//!
//! [`ReduceFilter`] lets a caller veto reductions before they are attempted;
//! the plain algorithm uses [`Unfiltered`].

use std::ops::ControlFlow;
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::bag::{Bag, NodeId};
use crate::category::{unify_category, Category};
use crate::lexicon::Rule;
use crate::sign::{application_link, apply, apply_rule, join, Link, Sign};
use crate::term::BindStore;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Successful reduce steps executed, dead ends included.
    pub reductions: u64,
    pub shifts: u64,
    /// Unifications attempted by reduce steps.
    pub reduce_attempts: u64,
    pub links_deleted: u64,
    pub propagation_calls: u64,
    pub wall_millis: u64,
    /// Set when constraint propagation was requested but not applicable, so
    /// the plain search ran instead.
    pub fallback: bool,
}

impl SearchStats {
    pub fn summary_line(&self) -> String {
        format!(
            "reductions={} shifts={} links_deleted={} millis={}",
            self.reductions, self.shifts, self.links_deleted, self.wall_millis
        )
    }
}

/// A generated ordering together with the counters at the moment it was
/// found.
#[derive(Clone, Debug)]
pub struct Solution {
    pub phrase: Vec<Arc<str>>,
    pub category: Category,
    pub stats: SearchStats,
}

impl Solution {
    pub fn text(&self) -> String {
        join(&self.phrase)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// The whole search space was explored.
    Exhausted,
    /// The visitor asked to stop.
    Stopped,
    TimedOut,
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub outcome: Outcome,
    pub stats: SearchStats,
    /// Phrases built by reductions, in order (only with
    /// [`SearchOptions::record_reductions`]).
    pub built: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    pub timeout: Option<Duration>,
    /// Verify word-multiset conservation at every state (slow; for tests).
    pub check_invariants: bool,
    /// Keep the phrase of every constituent built by a reduction.
    pub record_reductions: bool,
}

/// Hooks into the reduce step.
pub trait ReduceFilter {
    type Mark: Copy;

    fn mark(&self, store: &BindStore) -> Self::Mark;
    fn undo(&mut self, mark: Self::Mark, store: &mut BindStore);
    /// Consulted before the functor/argument pair `link` is unified. May
    /// bind variables; the caller undoes to a mark taken beforehand.
    fn admit(&mut self, link: Link, store: &mut BindStore) -> bool;
    /// Consulted before the final sign is checked against the target.
    fn admit_final(&mut self, root: Option<NodeId>, store: &mut BindStore) -> bool;
    fn record(&self, _stats: &mut SearchStats) {}
    /// Whether `admit` was actually consulted (counts propagation calls).
    fn is_active(&self) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Unfiltered;

impl ReduceFilter for Unfiltered {
    type Mark = crate::term::Mark;

    fn mark(&self, store: &BindStore) -> Self::Mark {
        store.mark()
    }
    fn undo(&mut self, mark: Self::Mark, store: &mut BindStore) {
        store.undo_to(mark)
    }
    fn admit(&mut self, _link: Link, _store: &mut BindStore) -> bool {
        true
    }
    fn admit_final(&mut self, _root: Option<NodeId>, _store: &mut BindStore) -> bool {
        true
    }
}

/// The stack and the unshifted suffix of the bag.
#[derive(Clone, Debug)]
pub struct ParserState {
    pub stack: Vec<Sign>,
    /// Index of the next bag item to shift.
    pub next: usize,
}

enum Halt {
    Stopped,
    TimedOut,
}

pub struct Search<'a, F: ReduceFilter> {
    bag: &'a Bag,
    target: &'a Category,
    rules: &'a [Rule],
    store: BindStore,
    filter: F,
    state: ParserState,
    stats: SearchStats,
    start: Instant,
    deadline: Option<Instant>,
    check_invariants: bool,
    built: Option<Vec<String>>,
    ticks: u32,
    bag_words: Vec<Arc<str>>,
}

impl<'a, F: ReduceFilter> Search<'a, F> {
    /// `store` must contain the variables of `bag` and `target`.
    pub fn new(
        bag: &'a Bag,
        target: &'a Category,
        rules: &'a [Rule],
        store: BindStore,
        filter: F,
        options: &SearchOptions,
    ) -> Self {
        let start = Instant::now();
        let mut bag_words: Vec<Arc<str>> = bag.items.iter().map(|i| i.word.clone()).collect();
        bag_words.sort();
        Search {
            bag,
            target,
            rules,
            store,
            filter,
            state: ParserState {
                stack: Vec::new(),
                next: 0,
            },
            stats: SearchStats::default(),
            start,
            deadline: options.timeout.map(|t| start + t),
            check_invariants: options.check_invariants,
            built: options.record_reductions.then(Vec::new),
            ticks: 0,
            bag_words,
        }
    }

    pub fn stats_mut(&mut self) -> &mut SearchStats {
        &mut self.stats
    }

    pub fn run(mut self, visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>) -> RunSummary {
        let outcome = if self.bag.is_empty() {
            Outcome::Exhausted
        } else {
            match self.explore(visit) {
                ControlFlow::Continue(()) => Outcome::Exhausted,
                ControlFlow::Break(Halt::Stopped) => Outcome::Stopped,
                ControlFlow::Break(Halt::TimedOut) => Outcome::TimedOut,
            }
        };
        RunSummary {
            outcome,
            stats: self.snapshot(),
            built: self.built.take().unwrap_or_default(),
        }
    }

    fn snapshot(&self) -> SearchStats {
        let mut s = self.stats.clone();
        self.filter.record(&mut s);
        s.wall_millis = self.start.elapsed().as_millis() as u64;
        s
    }

    fn tick(&mut self) -> ControlFlow<Halt> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks % 1024 == 1 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    return ControlFlow::Break(Halt::TimedOut);
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn assert_conservation(&self) {
        let mut words: Vec<Arc<str>> = self
            .state
            .stack
            .iter()
            .flat_map(|s| s.phrase.iter().cloned())
            .chain(
                self.bag.items[self.state.next..]
                    .iter()
                    .map(|i| i.word.clone()),
            )
            .collect();
        words.sort();
        assert_eq!(words, self.bag_words, "word multiset not conserved");
    }

    fn explore(
        &mut self,
        visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>,
    ) -> ControlFlow<Halt> {
        self.tick()?;
        if self.check_invariants {
            self.assert_conservation();
        }
        let exhausted = self.state.next == self.bag.len();

        if exhausted && self.state.stack.len() == 1 {
            let m = self.filter.mark(&self.store);
            let sign = &self.state.stack[0];
            if self.filter.admit_final(sign.root, &mut self.store)
                && unify_category(&mut self.store, &sign.category, self.target)
            {
                let solution = Solution {
                    phrase: sign.phrase.clone(),
                    category: sign.category.resolve(&self.store),
                    stats: self.snapshot(),
                };
                if visit(&solution).is_break() {
                    return ControlFlow::Break(Halt::Stopped);
                }
            }
            self.filter.undo(m, &mut self.store);
            return ControlFlow::Continue(());
        }

        if !exhausted {
            let item = &self.bag.items[self.state.next];
            for reading in &item.readings {
                self.state.stack.push(Sign::lexical(item, reading));
                self.state.next += 1;
                self.stats.shifts += 1;
                let r = self.explore(visit);
                self.state.next -= 1;
                self.state.stack.pop();
                r?;
            }
        }

        if self.state.stack.len() >= 2 {
            let top = self.state.stack.pop().unwrap();
            let mut result = ControlFlow::Continue(());
            for j in (0..self.state.stack.len()).rev() {
                let deeper = self.state.stack.remove(j);
                result = self.reduce_pair(&deeper, &top, visit);
                self.state.stack.insert(j, deeper);
                if result.is_break() {
                    break;
                }
            }
            self.state.stack.push(top);
            result?;
        }
        ControlFlow::Continue(())
    }

    fn reduce_pair(
        &mut self,
        deeper: &Sign,
        top: &Sign,
        visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>,
    ) -> ControlFlow<Halt> {
        self.try_apply(deeper, top, visit)?;
        self.try_apply(top, deeper, visit)?;
        for rule in self.rules {
            self.try_rule(rule, deeper, top, visit)?;
            self.try_rule(rule, top, deeper, visit)?;
        }
        ControlFlow::Continue(())
    }

    fn try_apply(
        &mut self,
        functor: &Sign,
        arg: &Sign,
        visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>,
    ) -> ControlFlow<Halt> {
        if functor.category.is_basic() {
            return ControlFlow::Continue(());
        }
        let m = self.filter.mark(&self.store);
        if self.filter.is_active() {
            if let Some(link) = application_link(functor, arg) {
                self.stats.propagation_calls += 1;
                if !self.filter.admit(link, &mut self.store) {
                    self.filter.undo(m, &mut self.store);
                    return ControlFlow::Continue(());
                }
            }
        }
        self.stats.reduce_attempts += 1;
        let result = match apply(functor, arg, &mut self.store) {
            Some(mom) => self.descend(mom, visit),
            None => ControlFlow::Continue(()),
        };
        self.filter.undo(m, &mut self.store);
        result
    }

    fn try_rule(
        &mut self,
        rule: &Rule,
        first: &Sign,
        second: &Sign,
        visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>,
    ) -> ControlFlow<Halt> {
        let (Some(a), Some(b)) = (first.category.as_basic(), second.category.as_basic()) else {
            return ControlFlow::Continue(());
        };
        if !rule.may_join(a, b) {
            return ControlFlow::Continue(());
        }
        for swapped in [false, true] {
            if swapped && rule.is_symmetric() {
                break;
            }
            let m = self.filter.mark(&self.store);
            self.stats.reduce_attempts += 1;
            let result = match apply_rule(rule, first, second, swapped, &mut self.store) {
                Some(mom) => self.descend(mom, visit),
                None => ControlFlow::Continue(()),
            };
            self.filter.undo(m, &mut self.store);
            result?;
        }
        ControlFlow::Continue(())
    }

    fn descend(
        &mut self,
        mom: Sign,
        visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>,
    ) -> ControlFlow<Halt> {
        self.stats.reductions += 1;
        if let Some(built) = &mut self.built {
            built.push(mom.phrase_text());
        }
        self.state.stack.push(mom);
        let r = self.explore(visit);
        self.state.stack.pop();
        r
    }
}

/// Runs the plain shift-reduce search, calling `visit` for every solution
/// (the same ordering may be reported more than once, via different
/// derivations).
pub fn generate(
    bag: &Bag,
    target: &Category,
    rules: &[Rule],
    options: &SearchOptions,
    visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>,
) -> RunSummary {
    Search::new(bag, target, rules, bag.store.clone(), Unfiltered, options).run(visit)
}
