//! Helpers and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use rand::Rng;
use shakebake_core::category::unify_basic;
use shakebake_core::congraph::ConGraph;
use shakebake_core::naive::{columns, ordered_derivations};
use shakebake_core::*;

pub const WORDS: [&str; 11] = [
    "the", "a", "fierce", "big", "little", "tame", "brown", "yellow", "cat", "fox", "likes",
];

pub fn figures() -> Grammar {
    Grammar::parse(fixtures::FIGURES_LEX).unwrap()
}

pub fn bag_of(g: &Grammar, words: &[&str], target: &str) -> (Bag, Category) {
    let mut bag = Bag::from_words(words, &g.lexicon).unwrap();
    let t = bag.parse_category(target).unwrap();
    (bag, t)
}

/// Every distinct ordering `algorithm` generates.
pub fn yields(
    algorithm: Algorithm,
    bag: &Bag,
    target: &Category,
    rules: &[Rule],
) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let summary = run(
        algorithm,
        bag,
        target,
        rules,
        &SearchOptions::default(),
        &mut |s| {
            out.insert(s.text());
            ControlFlow::Continue(())
        },
    )
    .unwrap();
    assert_eq!(summary.outcome, Outcome::Exhausted);
    out
}

/// Links used by some derivation of some accepted ordering, each closed by
/// the final `root -> 0` link. Found by parsing every permutation.
pub fn derivation_links(bag: &Bag, target: &Category) -> Vec<BTreeSet<Link>> {
    let n = bag.len();
    let mut out = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    permute(&mut order, 0, &mut |order| {
        for d in ordered_derivations(&columns(bag, order), target, &[], &bag.store, usize::MAX) {
            let mut links: BTreeSet<Link> = d.links.iter().copied().collect();
            // The root nobody consumed is the one the dummy takes.
            let consumed: BTreeSet<NodeId> = links.iter().map(|l| l.root).collect();
            let top = bag
                .items
                .iter()
                .map(|i| i.readings[0].root)
                .find(|r| !consumed.contains(r))
                .unwrap();
            links.insert(Link {
                root: top,
                slot: NodeId::DUMMY,
            });
            out.push(links);
        }
    });
    out
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Propagation done the slow way: commit forced links one at a time, in an
/// order picked by `rng`, re-checking unifiability of everything after each
/// commitment. Returns the committed set, or `None` on contradiction.
pub fn reference_propagation(
    graph: &ConGraph,
    store: &BindStore,
    rng: &mut impl Rng,
) -> Option<BTreeSet<Link>> {
    let mut store = store.clone();
    let mut live: BTreeSet<Link> = graph.open().into_iter().collect();
    let mut committed = BTreeSet::new();
    let basic = |id: NodeId| graph.node(id).basic.clone();
    loop {
        let mut degree: BTreeMap<NodeId, Vec<Link>> =
            graph.nodes().iter().map(|n| (n.id, Vec::new())).collect();
        for l in live.iter().chain(committed.iter()) {
            degree.get_mut(&l.root).unwrap().push(*l);
            degree.get_mut(&l.slot).unwrap().push(*l);
        }
        if degree.values().any(|v| v.is_empty()) {
            return None;
        }
        let forced: Vec<Link> = degree
            .values()
            .filter(|v| v.len() == 1 && !committed.contains(&v[0]))
            .map(|v| v[0])
            .collect();
        if forced.is_empty() {
            return Some(committed);
        }
        let l = forced[rng.random_range(0..forced.len())];
        if !unify_basic(&mut store, &basic(l.root), &basic(l.slot)) {
            return None;
        }
        live.remove(&l);
        live.retain(|o| o.root != l.root && o.slot != l.slot);
        committed.insert(l);
        live.retain(|o| {
            let m = store.mark();
            let ok = unify_basic(&mut store, &basic(o.root), &basic(o.slot));
            store.undo_to(m);
            ok
        });
    }
}

// ---- terms ----

/// Substitution-based unifier kept apart from `BindStore`: returns an
/// idempotent most general unifier as a map.
pub fn oracle_unify(a: &Term, b: &Term) -> Option<BTreeMap<u32, Term>> {
    let mut sub: BTreeMap<u32, Term> = BTreeMap::new();
    let mut stack = vec![(a.clone(), b.clone())];
    while let Some((x, y)) = stack.pop() {
        let x = apply(&sub, &x);
        let y = apply(&sub, &y);
        match (&x, &y) {
            _ if x == y => {}
            (Term::Var(v), t) | (t, Term::Var(v)) => {
                if t.vars().contains(v) {
                    return None;
                }
                let single: BTreeMap<u32, Term> = [(v.0, t.clone())].into();
                for val in sub.values_mut() {
                    *val = apply(&single, val);
                }
                sub.insert(v.0, t.clone());
            }
            (Term::Compound(f, xs), Term::Compound(g, ys)) if f == g && xs.len() == ys.len() => {
                stack.extend(xs.iter().cloned().zip(ys.iter().cloned()));
            }
            (Term::Cons(h1, t1), Term::Cons(h2, t2)) => {
                stack.push(((**h1).clone(), (**h2).clone()));
                stack.push(((**t1).clone(), (**t2).clone()));
            }
            _ => return None,
        }
    }
    Some(sub)
}

pub fn apply(sub: &BTreeMap<u32, Term>, t: &Term) -> Term {
    t.substitute(&|v| sub.get(&v.0).cloned())
}

/// A random term of depth at most `depth` over variables `0..vars`.
pub fn random_term(rng: &mut impl Rng, depth: u32, vars: u32) -> Term {
    let leaf = depth == 0 || rng.random_bool(0.35);
    if leaf {
        return match rng.random_range(0..5) {
            0 | 1 => Term::Var(VarId(rng.random_range(0..vars))),
            2 => Term::sym(["a", "b"][rng.random_range(0..2)]),
            3 => Term::int(rng.random_range(0..2)),
            _ => Term::Nil,
        };
    }
    match rng.random_range(0..3) {
        0 => Term::compound(
            "f",
            vec![
                random_term(rng, depth - 1, vars),
                random_term(rng, depth - 1, vars),
            ],
        ),
        1 => Term::compound("g", vec![random_term(rng, depth - 1, vars)]),
        _ => Term::cons(
            random_term(rng, depth - 1, vars),
            random_term(rng, depth - 1, vars),
        ),
    }
}

/// Unifies on a fresh store, checks the answer against the oracle, undoes,
/// and checks the store is clean. Returns a description of any mismatch.
pub fn unify_round_trip(a: &Term, b: &Term, vars: u32) -> Result<(), String> {
    let mut store = BindStore::new();
    store.reserve_vars(vars);
    let m = store.mark();
    let got = store.unify(a, b);
    let want = oracle_unify(a, b);
    if got != want.is_some() {
        return Err(format!(
            "unify({a}, {b}) = {got}, oracle says {}",
            want.is_some()
        ));
    }
    if got {
        let (ra, rb) = (store.resolve(a), store.resolve(b));
        if ra != rb {
            return Err(format!("unify({a}, {b}) left {ra} != {rb}"));
        }
        // Same generality as the oracle's unifier: each is an instance of the other.
        let w = apply(&want.unwrap(), a);
        if !is_variant(&ra, &w, &mut BTreeMap::new(), &mut BTreeMap::new()) {
            return Err(format!("unify({a}, {b}) gave {ra}, oracle {w}"));
        }
    } else if store.trail_len() != 0 {
        return Err(format!("failed unify({a}, {b}) left bindings"));
    }
    store.undo_to(m);
    if (0..vars).any(|v| store.is_bound(VarId(v))) || store.trail_len() != 0 {
        return Err(format!("undo after unify({a}, {b}) left bindings"));
    }
    Ok(())
}

/// Equal up to a one-to-one renaming of variables.
fn is_variant(
    a: &Term,
    b: &Term,
    fwd: &mut BTreeMap<u32, u32>,
    back: &mut BTreeMap<u32, u32>,
) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            *fwd.entry(x.0).or_insert(y.0) == y.0 && *back.entry(y.0).or_insert(x.0) == x.0
        }
        (Term::Compound(f, xs), Term::Compound(g, ys)) => {
            f == g
                && xs.len() == ys.len()
                && xs
                    .iter()
                    .zip(ys.iter())
                    .all(|(x, y)| is_variant(x, y, fwd, back))
        }
        (Term::Cons(h1, t1), Term::Cons(h2, t2)) => {
            is_variant(h1, h2, fwd, back) && is_variant(t1, t2, fwd, back)
        }
        _ => a == b,
    }
}
