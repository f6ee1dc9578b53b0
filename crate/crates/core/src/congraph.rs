//! Constraint graph over basic signs.
//!
//! Every basic-category occurrence of the bag is a node: the result of each
//! lexical category is a *root* (level 0), each argument head a *slot*
//! (level 1). A dummy slot, node 0, stands for the target: the final result
//! is consumed by it like any other argument. A candidate link joins a root
//! to a slot when their levels differ by one, they come from different items
//! and their categories unify.
//!
//! In a complete derivation every node takes part in exactly one link, so
//! the graph can be filtered:
//!
//! * a node with no candidate link left is a contradiction;
//! * a node with exactly one candidate link forces it; committing a link
//!   unifies its two categories and removes every other link at either end;
//! * after new bindings, links whose categories no longer unify are removed.
//!
//! Forced links are collected per round and committed together, so the links
//! a commitment precludes are measured against the graph as it stood at the
//! start of that round. All changes go on a trail and can be undone.
//!
//! Only first-order lexicons are handled (every argument is basic, no grammar
//! rules, no lexical ambiguity); [`ConGraph::build`] reports anything else as
//! unsupported.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::bag::{Bag, NodeId};
use crate::category::{unify_basic, BasicCat, Category, Polarity};
use crate::lexicon::Rule;
use crate::sign::Link;
use crate::term::{self, BindStore};

#[derive(Clone, Debug, PartialEq)]
pub struct GraphNode {
    pub id: NodeId,
    pub basic: BasicCat,
    /// Owning bag item; `None` for the dummy.
    pub item: Option<usize>,
    pub level: u32,
    pub polarity: Polarity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkState {
    Open,
    Committed,
    Deleted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    /// `link` was committed; `precluded` are the other links that were
    /// incident to its endpoints when the commitment was decided.
    Commit { link: Link, precluded: Vec<Link> },
    /// `link` lost unifiability after new bindings.
    Unfit { link: Link },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Contradiction;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("constraint graph unsupported: {0}")]
    Unsupported(&'static str),
    /// Roots and slots cannot be paired off, so no derivation exists.
    #[error("{roots} roots cannot pair with {slots} slots")]
    CountMismatch { roots: usize, slots: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphMark {
    trail: usize,
    events: usize,
    store: term::Mark,
}

#[derive(Clone, Debug)]
pub struct ConGraph {
    nodes: Vec<GraphNode>,
    links: Vec<Link>,
    states: Vec<LinkState>,
    index: HashMap<Link, usize>,
    incident: Vec<Vec<usize>>,
    /// Non-deleted links per node.
    live: Vec<u32>,
    trail: Vec<(usize, LinkState)>,
    events: Vec<Event>,
    deletions: u64,
}

impl ConGraph {
    /// Builds the graph for `bag` and `target`. Unifiability is probed on
    /// `store` and leaves no bindings.
    pub fn build(
        bag: &Bag,
        target: &Category,
        rules: &[Rule],
        store: &mut BindStore,
    ) -> Result<ConGraph, BuildError> {
        if !rules.is_empty() {
            return Err(BuildError::Unsupported("grammar rules present"));
        }
        let Some(target) = target.as_basic() else {
            return Err(BuildError::Unsupported("target is not a basic category"));
        };
        if bag.items.iter().any(|i| i.is_ambiguous()) {
            return Err(BuildError::Unsupported("lexically ambiguous item"));
        }
        if bag
            .items
            .iter()
            .any(|i| !i.readings[0].category.is_first_order())
        {
            return Err(BuildError::Unsupported("higher-order category"));
        }

        let mut nodes = vec![GraphNode {
            id: NodeId::DUMMY,
            basic: target.clone(),
            item: None,
            level: 1,
            polarity: Polarity::Slot,
        }];
        nodes.extend(bag.nodes.iter().map(|n| GraphNode {
            id: n.id,
            basic: n.basic.clone(),
            item: Some(n.item),
            level: n.level,
            polarity: n.polarity,
        }));

        let (roots, slots): (Vec<&GraphNode>, Vec<&GraphNode>) =
            nodes.iter().partition(|n| n.polarity == Polarity::Root);
        if roots.len() != slots.len() {
            return Err(BuildError::CountMismatch {
                roots: roots.len(),
                slots: slots.len(),
            });
        }

        let mut links = Vec::new();
        for r in &roots {
            for s in &slots {
                if r.level.abs_diff(s.level) == 1
                    && r.item != s.item
                    && probe(store, &r.basic, &s.basic)
                {
                    links.push(Link {
                        root: r.id,
                        slot: s.id,
                    });
                }
            }
        }

        let mut incident = vec![Vec::new(); nodes.len()];
        for (i, l) in links.iter().enumerate() {
            incident[l.root.0 as usize].push(i);
            incident[l.slot.0 as usize].push(i);
        }
        let live = incident.iter().map(|v| v.len() as u32).collect();
        let index = links.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        let states = vec![LinkState::Open; links.len()];
        Ok(ConGraph {
            nodes,
            links,
            states,
            index,
            incident,
            live,
            trail: Vec::new(),
            events: Vec::new(),
            deletions: 0,
        })
    }

    pub fn nodes(&self) -> &[GraphNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &GraphNode {
        &self.nodes[id.0 as usize]
    }

    pub fn state(&self, link: Link) -> Option<LinkState> {
        self.index.get(&link).map(|&i| self.states[i])
    }

    fn with_state(&self, state: LinkState) -> Vec<Link> {
        let mut v: Vec<Link> = self
            .links
            .iter()
            .zip(&self.states)
            .filter(|(_, s)| **s == state)
            .map(|(l, _)| *l)
            .collect();
        v.sort();
        v
    }

    /// Links never built plus those deleted are absent; this is every link
    /// still open or committed.
    pub fn surviving(&self) -> Vec<Link> {
        let mut v: Vec<Link> = self
            .links
            .iter()
            .zip(&self.states)
            .filter(|(_, s)| **s != LinkState::Deleted)
            .map(|(l, _)| *l)
            .collect();
        v.sort();
        v
    }

    pub fn open(&self) -> Vec<Link> {
        self.with_state(LinkState::Open)
    }

    pub fn committed(&self) -> Vec<Link> {
        self.with_state(LinkState::Committed)
    }

    pub fn deleted(&self) -> Vec<Link> {
        self.with_state(LinkState::Deleted)
    }

    /// Candidate slots of a root, or candidate roots of a slot.
    pub fn candidates(&self, node: NodeId) -> Vec<NodeId> {
        let mut v: Vec<NodeId> = self.incident[node.0 as usize]
            .iter()
            .filter(|&&i| self.states[i] != LinkState::Deleted)
            .map(|&i| {
                let l = self.links[i];
                if l.root == node {
                    l.slot
                } else {
                    l.root
                }
            })
            .collect();
        v.sort();
        v
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Total deletions performed, including ones later undone.
    pub fn deletions(&self) -> u64 {
        self.deletions
    }

    pub fn mark(&self, store: &BindStore) -> GraphMark {
        GraphMark {
            trail: self.trail.len(),
            events: self.events.len(),
            store: store.mark(),
        }
    }

    /// Restores links, commitments and bindings to `m`. Panics on a stale
    /// mark.
    pub fn undo(&mut self, m: GraphMark, store: &mut BindStore) {
        assert!(
            m.trail <= self.trail.len() && m.events <= self.events.len(),
            "stale graph mark"
        );
        while self.trail.len() > m.trail {
            let (i, prev) = self.trail.pop().unwrap();
            if self.states[i] == LinkState::Deleted {
                let l = self.links[i];
                self.live[l.root.0 as usize] += 1;
                self.live[l.slot.0 as usize] += 1;
            }
            self.states[i] = prev;
        }
        self.events.truncate(m.events);
        store.undo_to(m.store);
    }

    fn set(&mut self, i: usize, state: LinkState) {
        let prev = self.states[i];
        if prev == state {
            return;
        }
        if state == LinkState::Deleted {
            let l = self.links[i];
            self.live[l.root.0 as usize] -= 1;
            self.live[l.slot.0 as usize] -= 1;
            self.deletions += 1;
        }
        self.trail.push((i, prev));
        self.states[i] = state;
    }

    fn other_open_at(&self, i: usize) -> Vec<usize> {
        let l = self.links[i];
        let mut v: Vec<usize> = self.incident[l.root.0 as usize]
            .iter()
            .chain(&self.incident[l.slot.0 as usize])
            .copied()
            .filter(|&j| j != i && self.states[j] == LinkState::Open)
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Commits link `i`; returns whether new bindings were made.
    fn commit_index(
        &mut self,
        i: usize,
        precluded: Vec<Link>,
        store: &mut BindStore,
    ) -> Result<bool, Contradiction> {
        let l = self.links[i];
        let before = store.trail_len();
        let (r, s) = (l.root.0 as usize, l.slot.0 as usize);
        if !unify_basic(store, &self.nodes[r].basic, &self.nodes[s].basic) {
            return Err(Contradiction);
        }
        self.set(i, LinkState::Committed);
        for j in self.other_open_at(i) {
            self.set(j, LinkState::Deleted);
        }
        self.events.push(Event::Commit { link: l, precluded });
        Ok(store.trail_len() > before)
    }

    /// Drops open links whose categories no longer unify.
    fn reprobe(&mut self, store: &mut BindStore) {
        for i in 0..self.links.len() {
            if self.states[i] != LinkState::Open {
                continue;
            }
            let l = self.links[i];
            let (r, s) = (l.root.0 as usize, l.slot.0 as usize);
            if !probe(store, &self.nodes[r].basic, &self.nodes[s].basic) {
                self.set(i, LinkState::Deleted);
                self.events.push(Event::Unfit { link: l });
            }
        }
    }

    /// Runs the filtering rules to a fixpoint.
    pub fn propagate(&mut self, store: &mut BindStore) -> Result<(), Contradiction> {
        loop {
            if self.live.contains(&0) {
                return Err(Contradiction);
            }
            let mut forced: Vec<usize> = Vec::new();
            for node in 0..self.nodes.len() {
                if self.live[node] != 1 {
                    continue;
                }
                let i = self.incident[node]
                    .iter()
                    .copied()
                    .find(|&i| self.states[i] != LinkState::Deleted)
                    .unwrap();
                if self.states[i] == LinkState::Open && !forced.contains(&i) {
                    forced.push(i);
                }
            }
            if forced.is_empty() {
                return Ok(());
            }
            let precluded: Vec<Vec<Link>> = forced
                .iter()
                .map(|&i| {
                    let mut v: Vec<Link> = self
                        .other_open_at(i)
                        .into_iter()
                        .map(|j| self.links[j])
                        .collect();
                    v.sort();
                    v
                })
                .collect();
            let mut bound = false;
            for (i, p) in forced.into_iter().zip(precluded) {
                match self.states[i] {
                    // Two forced links competing for one endpoint.
                    LinkState::Deleted => return Err(Contradiction),
                    LinkState::Committed => {}
                    LinkState::Open => bound |= self.commit_index(i, p, store)?,
                }
            }
            if bound {
                self.reprobe(store);
            }
        }
    }

    /// Commits the link `root -> slot` and propagates. Committing a link
    /// that is already committed is a no-op.
    pub fn commit_link(
        &mut self,
        root: NodeId,
        slot: NodeId,
        store: &mut BindStore,
    ) -> Result<(), Contradiction> {
        let Some(&i) = self.index.get(&Link { root, slot }) else {
            return Err(Contradiction);
        };
        match self.states[i] {
            LinkState::Deleted => Err(Contradiction),
            LinkState::Committed => Ok(()),
            LinkState::Open => {
                let precluded = self
                    .other_open_at(i)
                    .into_iter()
                    .map(|j| self.links[j])
                    .collect();
                if self.commit_index(i, precluded, store)? {
                    self.reprobe(store);
                }
                self.propagate(store)
            }
        }
    }

    /// Tab-separated dump: one `node` line per node (id, category, item
    /// word, level) and one `link` line per surviving link.
    pub fn dump(&self, bag: &Bag, store: &BindStore) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            let basic = Category::Basic(n.basic.clone()).resolve(store);
            let word = match n.item {
                Some(i) => bag.items[i].word.as_ref(),
                None => "<dummy>",
            };
            let _ = writeln!(out, "node\t{}\t{}\t{}\t{}", n.id, basic, word, n.level);
        }
        for l in self.surviving() {
            let state = match self.state(l) {
                Some(LinkState::Committed) => "committed",
                _ => "open",
            };
            let _ = writeln!(out, "link\t{}\t{}\t{}", l.root, l.slot, state);
        }
        out
    }
}

fn probe(store: &mut BindStore, a: &BasicCat, b: &BasicCat) -> bool {
    let m = store.mark();
    let ok = unify_basic(store, a, b);
    store.undo_to(m);
    ok
}
