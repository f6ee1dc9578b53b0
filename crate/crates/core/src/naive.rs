//! Generate-and-test: try every ordering of the bag with an ordinary chart
//! parser. Exponential in the bag size, and the reference the other
//! generators are checked against.

use std::collections::HashSet;
use std::ops::ControlFlow;
use std::sync::Arc;

use itertools::Itertools;

use crate::bag::Bag;
use crate::category::{unify_basic, unify_category, Category, Dir};
use crate::lexicon::Rule;
use crate::sign::{Link, Sign};
use crate::term::{BindStore, Mark, Term};
use crate::whitelock::Outcome;
use crate::Error;

pub const DEFAULT_CAP: usize = 8;

/// One full-span analysis: its category and the functor/argument node
/// pairs it used.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub category: Category,
    pub links: Vec<Link>,
}

/// A chart entry. Each carries its own copy of the bindings, so entries in
/// the same cell never see each other's unifications.
#[derive(Clone, Debug)]
struct Item {
    category: Category,
    store: BindStore,
    root: Option<crate::bag::NodeId>,
    open_slots: Vec<crate::bag::NodeId>,
    links: Vec<Link>,
}

struct Chart<'a> {
    rules: &'a [Rule],
    base: Mark,
    /// Next unused variable id across all item stores.
    next_var: u32,
}

impl Chart<'_> {
    /// A copy of `left`'s store with `right`'s bindings replayed on it.
    fn merge(&self, left: &Item, right: &Item) -> Option<BindStore> {
        let mut store = left.store.clone();
        store.reserve_vars(right.store.var_count() as u32);
        for (v, t) in right.store.bindings_since(self.base) {
            if !store.unify(&Term::Var(v), t) {
                return None;
            }
        }
        Some(store)
    }

    fn combine(&mut self, left: &Item, right: &Item, out: &mut Vec<Item>) {
        let Some(merged) = self.merge(left, right) else {
            return;
        };
        // Forward: left/right. Backward: left right\left.
        for (functor, arg, dir) in [(left, right, Dir::Right), (right, left, Dir::Left)] {
            let Category::Functor {
                result,
                arg: wanted,
                dir: d,
            } = &functor.category
            else {
                continue;
            };
            if *d != dir {
                continue;
            }
            let mut store = merged.clone();
            if unify_category(&mut store, wanted, &arg.category) {
                let mut links = left.links.clone();
                links.extend_from_slice(&right.links);
                if let (Some(root), Some(&slot)) = (arg.root, functor.open_slots.first()) {
                    links.push(Link { root, slot });
                }
                out.push(Item {
                    category: (**result).clone(),
                    store,
                    root: functor.root,
                    open_slots: functor.open_slots[1..].to_vec(),
                    links,
                });
            }
        }
        let (Some(a), Some(b)) = (left.category.as_basic(), right.category.as_basic()) else {
            return;
        };
        for rule in self.rules {
            if !rule.may_join(a, b) {
                continue;
            }
            for (c1, c2) in [(0, 1), (1, 0)] {
                if c1 == 1 && rule.is_symmetric() {
                    break;
                }
                let mut store = merged.clone();
                store.reserve_vars(self.next_var);
                let r = rule.instantiate(&mut store);
                self.next_var = self.next_var.max(store.var_count() as u32);
                if unify_basic(&mut store, &r.children[c1], a)
                    && unify_basic(&mut store, &r.children[c2], b)
                {
                    let mut links = left.links.clone();
                    links.extend_from_slice(&right.links);
                    out.push(Item {
                        category: Category::Basic(r.parent),
                        store,
                        root: None,
                        open_slots: Vec::new(),
                        links,
                    });
                }
            }
        }
    }
}

/// CKY over `columns` (the readings available at each position). Returns
/// every full-span analysis that unifies with `target`, up to `limit`.
pub fn ordered_derivations(
    columns: &[Vec<Sign>],
    target: &Category,
    rules: &[Rule],
    store: &BindStore,
    limit: usize,
) -> Vec<Derivation> {
    let n = columns.len();
    if n == 0 {
        return Vec::new();
    }
    let mut chart = Chart {
        rules,
        base: store.mark(),
        next_var: store.var_count() as u32,
    };
    // cells[i][len-1] spans i..i+len.
    let mut cells: Vec<Vec<Vec<Item>>> = vec![vec![Vec::new(); n]; n];
    for (i, col) in columns.iter().enumerate() {
        cells[i][0] = col
            .iter()
            .map(|s| Item {
                category: s.category.clone(),
                store: store.clone(),
                root: s.root,
                open_slots: s.open_slots.clone(),
                links: Vec::new(),
            })
            .collect();
    }
    for len in 2..=n {
        for i in 0..=n - len {
            let mut out = Vec::new();
            for k in 1..len {
                for l in &cells[i][k - 1] {
                    for r in &cells[i + k][len - k - 1] {
                        chart.combine(l, r, &mut out);
                    }
                }
            }
            cells[i][len - 1] = out;
        }
    }
    let mut found = Vec::new();
    for item in &cells[0][n - 1] {
        let mut s = item.store.clone();
        if unify_category(&mut s, &item.category, target) {
            found.push(Derivation {
                category: item.category.resolve(&s),
                links: item.links.clone(),
            });
            if found.len() >= limit {
                break;
            }
        }
    }
    found
}

/// Whether the signs, in this order, parse to `target`.
pub fn ordered_parse(signs: &[Sign], target: &Category, rules: &[Rule], store: &BindStore) -> bool {
    let columns: Vec<Vec<Sign>> = signs.iter().map(|s| vec![s.clone()]).collect();
    !ordered_derivations(&columns, target, rules, store, 1).is_empty()
}

/// Lexical signs of the items in `order`, one column per position.
pub fn columns(bag: &Bag, order: &[usize]) -> Vec<Vec<Sign>> {
    order
        .iter()
        .map(|&i| {
            let item = &bag.items[i];
            item.readings
                .iter()
                .map(|r| Sign::lexical(item, r))
                .collect()
        })
        .collect()
}

/// Calls `visit` once per distinct accepted word ordering, in
/// lexicographic order of item permutations.
pub fn generate_naive(
    bag: &Bag,
    target: &Category,
    rules: &[Rule],
    cap: usize,
    visit: &mut dyn FnMut(&[Arc<str>]) -> ControlFlow<()>,
) -> Result<Outcome, Error> {
    if bag.len() > cap {
        return Err(Error::BagTooLarge {
            size: bag.len(),
            cap,
        });
    }
    if bag.is_empty() {
        return Ok(Outcome::Exhausted);
    }
    let mut seen: HashSet<Vec<Arc<str>>> = HashSet::new();
    for order in (0..bag.len()).permutations(bag.len()) {
        let phrase: Vec<Arc<str>> = order.iter().map(|&i| bag.items[i].word.clone()).collect();
        if seen.contains(&phrase) {
            continue;
        }
        let cols = columns(bag, &order);
        if !ordered_derivations(&cols, target, rules, &bag.store, 1).is_empty() {
            if visit(&phrase).is_break() {
                return Ok(Outcome::Stopped);
            }
            seen.insert(phrase);
        }
    }
    Ok(Outcome::Exhausted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lexicon::Grammar;
    use crate::sign::join;

    fn parses(words: &[&str], target: &str) -> bool {
        let g = Grammar::parse(fixtures::FIGURES_LEX).unwrap();
        let mut bag = Bag::from_words(words, &g.lexicon).unwrap();
        let t = bag.parse_category(target).unwrap();
        let signs: Vec<Sign> = bag
            .items
            .iter()
            .map(|i| Sign::lexical(i, &i.readings[0]))
            .collect();
        ordered_parse(&signs, &t, &[], &bag.store)
    }

    fn all(words: &[&str], target: &str) -> Vec<String> {
        let g = Grammar::parse(fixtures::FIGURES_LEX).unwrap();
        let mut bag = Bag::from_words(words, &g.lexicon).unwrap();
        let t = bag.parse_category(target).unwrap();
        let mut out = Vec::new();
        generate_naive(&bag, &t, &[], DEFAULT_CAP, &mut |p| {
            out.push(join(p));
            ControlFlow::Continue(())
        })
        .unwrap();
        out
    }

    #[test]
    fn ordered_examples() {
        assert!(parses(&["the", "fierce", "cat"], "np"));
        assert!(!parses(&["the", "brown", "fierce", "cat"], "np"));
        assert!(parses(&["cat"], "n(_)"));
        assert!(parses(&["the", "cat", "likes", "a", "fox"], "s"));
        assert!(!parses(&["the", "cat", "a", "fox", "likes"], "s"));
    }

    #[test]
    fn generate_and_test_examples() {
        assert_eq!(all(&["a", "fox"], "np"), vec!["a fox"]);
        assert_eq!(
            all(&["the", "fierce", "little", "brown", "cat"], "np"),
            vec!["the fierce little brown cat"]
        );
    }

    #[test]
    fn cap_is_enforced() {
        let g = Grammar::parse(fixtures::FIGURES_LEX).unwrap();
        let words = ["cat"; 9];
        let mut bag = Bag::from_words(&words, &g.lexicon).unwrap();
        let t = bag.parse_category("np").unwrap();
        let err = generate_naive(&bag, &t, &[], DEFAULT_CAP, &mut |_| {
            ControlFlow::Continue(())
        })
        .unwrap_err();
        assert!(err.to_string().contains('8'));
    }

    #[test]
    fn derivations_report_links() {
        let g = Grammar::parse(fixtures::FIGURES_LEX).unwrap();
        let mut bag = Bag::from_words(&["the", "fierce", "cat"], &g.lexicon).unwrap();
        let t = bag.parse_category("np").unwrap();
        let d = ordered_derivations(&columns(&bag, &[0, 1, 2]), &t, &[], &bag.store, usize::MAX);
        assert_eq!(d.len(), 1);
        let mut links = d[0].links.clone();
        links.sort();
        assert_eq!(links, vec![Link::new(3, 2), Link::new(5, 4)]);
    }

    #[test]
    fn rules_apply_in_both_child_orders() {
        let g = Grammar::parse("word b : b.\nword c : c.\nrule p -> b c.\n").unwrap();
        let mut bag = Bag::from_words(&["b", "c"], &g.lexicon).unwrap();
        let t = bag.parse_category("p").unwrap();
        let mut out = Vec::new();
        generate_naive(&bag, &t, &g.rules, DEFAULT_CAP, &mut |p| {
            out.push(join(p));
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(out, vec!["b c", "c b"]);
    }
}
