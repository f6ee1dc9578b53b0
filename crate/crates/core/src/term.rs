//! First-order terms, a trailed binding store and unification.
//!
//! Terms are immutable and cheap to clone; all variable state lives in a
//! [`BindStore`]. Bindings are recorded on a trail so that a search can take
//! a [`Mark`] before a choice and roll back to it afterwards.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Sym(Arc<str>),
    Int(u64),
    /// A rigid index constant. Bag files turn a variable named in more than
    /// one item into one of these so that distinct indices never unify.
    Index(Arc<str>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(VarId),
    Atom(Atom),
    Compound(Arc<str>, Arc<[Term]>),
    Nil,
    Cons(Arc<Term>, Arc<Term>),
}

impl Term {
    pub fn sym(name: &str) -> Term {
        Term::Atom(Atom::Sym(name.into()))
    }

    pub fn int(n: u64) -> Term {
        Term::Atom(Atom::Int(n))
    }

    pub fn compound(functor: &str, args: Vec<Term>) -> Term {
        Term::Compound(functor.into(), args.into())
    }

    pub fn cons(head: Term, tail: Term) -> Term {
        Term::Cons(Arc::new(head), Arc::new(tail))
    }

    /// Builds `[items...|tail]`.
    pub fn list_with_tail(items: impl IntoIterator<Item = Term>, tail: Term) -> Term {
        let items: Vec<Term> = items.into_iter().collect();
        items
            .into_iter()
            .rev()
            .fold(tail, |acc, item| Term::cons(item, acc))
    }

    pub fn list(items: impl IntoIterator<Item = Term>) -> Term {
        Term::list_with_tail(items, Term::Nil)
    }

    /// Calls `f` on every variable occurrence, left to right.
    pub fn for_each_var(&self, f: &mut impl FnMut(VarId)) {
        match self {
            Term::Var(v) => f(*v),
            Term::Atom(_) | Term::Nil => {}
            Term::Compound(_, args) => args.iter().for_each(|a| a.for_each_var(f)),
            Term::Cons(h, t) => {
                h.for_each_var(f);
                t.for_each_var(f);
            }
        }
    }

    pub fn vars(&self) -> Vec<VarId> {
        let mut out = Vec::new();
        self.for_each_var(&mut |v| {
            if !out.contains(&v) {
                out.push(v)
            }
        });
        out
    }

    pub fn is_ground(&self) -> bool {
        let mut ground = true;
        self.for_each_var(&mut |_| ground = false);
        ground
    }

    /// Rewrites variables through `map`; variables without an entry are kept.
    pub fn substitute(&self, map: &impl Fn(VarId) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => map(*v).unwrap_or_else(|| self.clone()),
            Term::Atom(_) | Term::Nil => self.clone(),
            Term::Compound(f, args) => {
                Term::Compound(f.clone(), args.iter().map(|a| a.substitute(map)).collect())
            }
            Term::Cons(h, t) => Term::cons(h.substitute(map), t.substitute(map)),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Sym(s) => f.write_str(s),
            Atom::Int(n) => write!(f, "{n}"),
            Atom::Index(s) => write!(f, "#{s}"),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "_G{}", v.0),
            Term::Atom(a) => write!(f, "{a}"),
            Term::Compound(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Term::Nil => f.write_str("[]"),
            Term::Cons(head, tail) => {
                write!(f, "[{head}")?;
                let mut rest: &Term = tail;
                loop {
                    match rest {
                        Term::Nil => break,
                        Term::Cons(h, t) => {
                            write!(f, ",{h}")?;
                            rest = t;
                        }
                        other => {
                            write!(f, "|{other}")?;
                            break;
                        }
                    }
                }
                f.write_str("]")
            }
        }
    }
}

/// A position in a store's trail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mark {
    trail_len: usize,
}

/// Variable bindings with an undo trail.
#[derive(Clone, Debug)]
pub struct BindStore {
    bindings: Vec<Option<Term>>,
    trail: Vec<VarId>,
    occurs_check: bool,
}

impl Default for BindStore {
    fn default() -> Self {
        Self::new()
    }
}

impl BindStore {
    pub fn new() -> Self {
        BindStore {
            bindings: Vec::new(),
            trail: Vec::new(),
            occurs_check: true,
        }
    }

    pub fn with_occurs_check(mut self, on: bool) -> Self {
        self.occurs_check = on;
        self
    }

    pub fn occurs_check(&self) -> bool {
        self.occurs_check
    }

    pub fn fresh_var(&mut self) -> Term {
        let id = VarId(self.bindings.len() as u32);
        self.bindings.push(None);
        Term::Var(id)
    }

    /// Makes sure ids below `count` exist, for terms built outside the store.
    pub fn reserve_vars(&mut self, count: u32) {
        if self.bindings.len() < count as usize {
            self.bindings.resize(count as usize, None);
        }
    }

    pub fn var_count(&self) -> usize {
        self.bindings.len()
    }

    pub fn trail_len(&self) -> usize {
        self.trail.len()
    }

    pub fn binding(&self, v: VarId) -> Option<&Term> {
        self.bindings.get(v.0 as usize).and_then(Option::as_ref)
    }

    pub fn is_bound(&self, v: VarId) -> bool {
        self.binding(v).is_some()
    }

    /// Bindings made since `m`, oldest first.
    pub fn bindings_since(&self, m: Mark) -> impl Iterator<Item = (VarId, &Term)> + '_ {
        self.trail[m.trail_len..]
            .iter()
            .map(|&v| (v, self.binding(v).expect("trailed variable must be bound")))
    }

    pub fn mark(&self) -> Mark {
        Mark {
            trail_len: self.trail.len(),
        }
    }

    /// Unbinds everything bound after `m`.
    ///
    /// Panics if `m` lies beyond the current trail, which means the mark has
    /// already been undone past.
    pub fn undo_to(&mut self, m: Mark) {
        assert!(
            m.trail_len <= self.trail.len(),
            "stale mark: trail position {} but trail has {} entries",
            m.trail_len,
            self.trail.len()
        );
        while self.trail.len() > m.trail_len {
            let v = self.trail.pop().unwrap();
            self.bindings[v.0 as usize] = None;
        }
    }

    fn bind(&mut self, v: VarId, t: Term) {
        let slot = &mut self.bindings[v.0 as usize];
        debug_assert!(slot.is_none());
        *slot = Some(t);
        self.trail.push(v);
    }

    /// Follows variable bindings until reaching an unbound variable or a
    /// non-variable term.
    pub fn deref(&self, t: &Term) -> Term {
        let mut cur = t;
        while let Term::Var(v) = cur {
            match self.binding(*v) {
                Some(next) => cur = next,
                None => break,
            }
        }
        cur.clone()
    }

    /// Fully substitutes bound variables.
    pub fn resolve(&self, t: &Term) -> Term {
        match self.deref(t) {
            Term::Compound(f, args) => {
                Term::Compound(f, args.iter().map(|a| self.resolve(a)).collect())
            }
            Term::Cons(h, tl) => Term::cons(self.resolve(&h), self.resolve(&tl)),
            other => other,
        }
    }

    fn occurs(&self, v: VarId, t: &Term) -> bool {
        match self.deref(t) {
            Term::Var(w) => v == w,
            Term::Atom(_) | Term::Nil => false,
            Term::Compound(_, args) => args.iter().any(|a| self.occurs(v, a)),
            Term::Cons(h, tl) => self.occurs(v, &h) || self.occurs(v, &tl),
        }
    }

    /// Unifies two terms. On failure the store is left exactly as it was.
    pub fn unify(&mut self, a: &Term, b: &Term) -> bool {
        let entry = self.mark();
        if self.unify_inner(a, b) {
            true
        } else {
            self.undo_to(entry);
            false
        }
    }

    /// Unifies the two sequences pairwise; all-or-nothing.
    pub fn unify_all(&mut self, xs: &[Term], ys: &[Term]) -> bool {
        if xs.len() != ys.len() {
            return false;
        }
        let entry = self.mark();
        for (x, y) in xs.iter().zip(ys) {
            if !self.unify_inner(x, y) {
                self.undo_to(entry);
                return false;
            }
        }
        true
    }

    /// Tests unifiability without leaving bindings behind.
    pub fn unifiable(&mut self, a: &Term, b: &Term) -> bool {
        let m = self.mark();
        let ok = self.unify_inner(a, b);
        self.undo_to(m);
        ok
    }

    fn unify_inner(&mut self, a: &Term, b: &Term) -> bool {
        let mut work: Vec<(Term, Term)> = vec![(a.clone(), b.clone())];
        while let Some((x, y)) = work.pop() {
            let x = self.deref(&x);
            let y = self.deref(&y);
            match (&x, &y) {
                (Term::Var(v), Term::Var(w)) if v == w => {}
                (Term::Var(v), _) => {
                    if self.occurs_check && !matches!(y, Term::Var(_)) && self.occurs(*v, &y) {
                        return false;
                    }
                    self.bind(*v, y);
                }
                (_, Term::Var(w)) => {
                    if self.occurs_check && self.occurs(*w, &x) {
                        return false;
                    }
                    self.bind(*w, x);
                }
                (Term::Atom(p), Term::Atom(q)) => {
                    if p != q {
                        return false;
                    }
                }
                (Term::Nil, Term::Nil) => {}
                (Term::Compound(f, xs), Term::Compound(g, ys)) => {
                    if f != g || xs.len() != ys.len() {
                        return false;
                    }
                    work.extend(xs.iter().cloned().zip(ys.iter().cloned()));
                }
                (Term::Cons(h1, t1), Term::Cons(h2, t2)) => {
                    work.push(((**t1).clone(), (**t2).clone()));
                    work.push(((**h1).clone(), (**h2).clone()));
                }
                _ => return false,
            }
        }
        true
    }

    /// Copies `t` with every variable replaced by a fresh one, consistently.
    pub fn rename_apart(&mut self, t: &Term) -> Term {
        let mut renaming = Renaming::default();
        renaming.apply(self, t)
    }
}

/// A consistent renaming of variables to fresh store variables, shared across
/// several terms (e.g. all the features of one category).
#[derive(Default, Debug)]
pub struct Renaming {
    map: HashMap<VarId, Term>,
}

impl Renaming {
    /// Pins `v` to `t` instead of a fresh variable.
    pub fn fix(&mut self, v: VarId, t: Term) {
        self.map.insert(v, t);
    }

    pub fn apply(&mut self, store: &mut BindStore, t: &Term) -> Term {
        match t {
            Term::Var(v) => self
                .map
                .entry(*v)
                .or_insert_with(|| store.fresh_var())
                .clone(),
            Term::Atom(_) | Term::Nil => t.clone(),
            Term::Compound(f, args) => Term::Compound(
                f.clone(),
                args.iter().map(|a| self.apply(store, a)).collect(),
            ),
            Term::Cons(h, tl) => {
                let h = self.apply(store, h);
                let tl = self.apply(store, tl);
                Term::cons(h, tl)
            }
        }
    }
}
