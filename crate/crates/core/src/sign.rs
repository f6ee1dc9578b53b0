//! Signs and the binary combination step.

use std::sync::Arc;

use crate::bag::{BagItem, NodeId, Reading};
use crate::category::{unify_basic, unify_category, Category, Dir};
use crate::lexicon::Rule;
use crate::term::BindStore;

/// A category with the words it spans.
#[derive(Clone, Debug)]
pub struct Sign {
    pub category: Category,
    pub phrase: Vec<Arc<str>>,
    /// Root node of the lexical item heading this sign; `None` for signs
    /// built by a grammar rule.
    pub root: Option<NodeId>,
    /// Slot nodes still to be consumed, in consumption order.
    pub open_slots: Vec<NodeId>,
}

impl Sign {
    pub fn lexical(item: &BagItem, reading: &Reading) -> Sign {
        Sign {
            category: reading.category.clone(),
            phrase: vec![item.word.clone()],
            root: Some(reading.root),
            open_slots: reading.slots.clone(),
        }
    }

    pub fn phrase_text(&self) -> String {
        join(&self.phrase)
    }
}

pub fn join(words: &[Arc<str>]) -> String {
    words
        .iter()
        .map(|w| w.as_ref())
        .collect::<Vec<_>>()
        .join(" ")
}

/// A functor/argument pairing of basic-sign nodes: the argument's root is
/// consumed by the functor's slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Link {
    pub root: NodeId,
    pub slot: NodeId,
}

impl Link {
    pub fn new(root: u32, slot: u32) -> Link {
        Link {
            root: NodeId(root),
            slot: NodeId(slot),
        }
    }
}

impl std::fmt::Display for Link {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}->{}", self.root, self.slot)
    }
}

/// The node pair that applying `functor` to `arg` would join.
pub fn application_link(functor: &Sign, arg: &Sign) -> Option<Link> {
    match (&functor.category, arg.root, functor.open_slots.first()) {
        (Category::Functor { .. }, Some(root), Some(&slot)) => Some(Link { root, slot }),
        _ => None,
    }
}

/// Forward or backward application, depending on the functor's slash.
/// On failure the store is unchanged.
pub fn apply(functor: &Sign, arg: &Sign, store: &mut BindStore) -> Option<Sign> {
    let Category::Functor {
        result,
        arg: wanted,
        dir,
    } = &functor.category
    else {
        return None;
    };
    if !unify_category(store, wanted, &arg.category) {
        return None;
    }
    let phrase = match dir {
        Dir::Right => concat(&functor.phrase, &arg.phrase),
        Dir::Left => concat(&arg.phrase, &functor.phrase),
    };
    Some(Sign {
        category: (**result).clone(),
        phrase,
        root: functor.root,
        open_slots: functor.open_slots.iter().skip(1).copied().collect(),
    })
}

/// `rule.parent <- left right`, with the phrase in that order. Rules are
/// unordered: with `swapped` the first child matches `right` and the second
/// `left`.
pub fn apply_rule(
    rule: &Rule,
    left: &Sign,
    right: &Sign,
    swapped: bool,
    store: &mut BindStore,
) -> Option<Sign> {
    let (Some(a), Some(b)) = (left.category.as_basic(), right.category.as_basic()) else {
        return None;
    };
    let (a, b) = if swapped { (b, a) } else { (a, b) };
    let m = store.mark();
    let rule = rule.instantiate(store);
    if unify_basic(store, &rule.children[0], a) && unify_basic(store, &rule.children[1], b) {
        Some(Sign {
            category: Category::Basic(rule.parent),
            phrase: concat(&left.phrase, &right.phrase),
            root: None,
            open_slots: Vec::new(),
        })
    } else {
        store.undo_to(m);
        None
    }
}

/// First successful combination of `f` with `a`: `f` applied to `a`, then
/// each rule with the phrase `f a`, then with `a f`.
pub fn combine(f: &Sign, a: &Sign, rules: &[Rule], store: &mut BindStore) -> Option<Sign> {
    apply(f, a, store).or_else(|| {
        rules.iter().find_map(|r| {
            [(f, a, false), (f, a, true), (a, f, false), (a, f, true)]
                .into_iter()
                .find_map(|(l, x, swapped)| apply_rule(r, l, x, swapped, store))
        })
    })
}

fn concat(x: &[Arc<str>], y: &[Arc<str>]) -> Vec<Arc<str>> {
    let mut v = Vec::with_capacity(x.len() + y.len());
    v.extend_from_slice(x);
    v.extend_from_slice(y);
    v
}
