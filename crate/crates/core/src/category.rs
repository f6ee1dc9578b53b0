//! Directional categorial types.
//!
//! `X/Y` looks for a `Y` to its right, `X\Y` for a `Y` to its left. Both
//! slashes are left-associative, so `(s\np)/np` consumes the object first.

use std::fmt;
use std::sync::Arc;

use crate::term::{BindStore, Renaming, Term, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    /// `/`: the argument is realized to the right.
    Right,
    /// `\`: the argument is realized to the left.
    Left,
}

impl Dir {
    pub fn symbol(self) -> char {
        match self {
            Dir::Right => '/',
            Dir::Left => '\\',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasicCat {
    pub name: Arc<str>,
    pub features: Arc<[Term]>,
}

impl BasicCat {
    pub fn new(name: &str, features: Vec<Term>) -> Self {
        BasicCat {
            name: name.into(),
            features: features.into(),
        }
    }

    pub fn atom(name: &str) -> Self {
        BasicCat::new(name, Vec::new())
    }

    fn map_features(&self, mut f: impl FnMut(&Term) -> Term) -> BasicCat {
        BasicCat {
            name: self.name.clone(),
            features: self.features.iter().map(&mut f).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Category {
    Basic(BasicCat),
    Functor {
        result: Arc<Category>,
        arg: Arc<Category>,
        dir: Dir,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Root,
    Slot,
}

/// One basic-category occurrence inside a category, with its nesting level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicOccurrence {
    pub basic: BasicCat,
    pub level: u32,
    pub polarity: Polarity,
}

impl Category {
    pub fn basic(name: &str, features: Vec<Term>) -> Category {
        Category::Basic(BasicCat::new(name, features))
    }

    pub fn functor(result: Category, arg: Category, dir: Dir) -> Category {
        Category::Functor {
            result: Arc::new(result),
            arg: Arc::new(arg),
            dir,
        }
    }

    pub fn as_basic(&self) -> Option<&BasicCat> {
        match self {
            Category::Basic(b) => Some(b),
            Category::Functor { .. } => None,
        }
    }

    pub fn is_basic(&self) -> bool {
        matches!(self, Category::Basic(_))
    }

    /// The final result of the functor spine (`s` for `(s\np)/np`).
    pub fn spine_result(&self) -> &BasicCat {
        match self {
            Category::Basic(b) => b,
            Category::Functor { result, .. } => result.spine_result(),
        }
    }

    /// Arguments in consumption order (outermost first).
    pub fn arguments(&self) -> Vec<(&Category, Dir)> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Category::Functor { result, arg, dir } = cur {
            out.push((&**arg, *dir));
            cur = result;
        }
        out
    }

    /// True when every argument is a basic category.
    pub fn is_first_order(&self) -> bool {
        self.arguments().iter().all(|(a, _)| a.is_basic())
    }

    /// Splits the category into its basic occurrences with nesting levels.
    ///
    /// The spine result comes first at level 0; each argument follows in
    /// consumption order, expanded recursively one level deeper.
    pub fn decompose(&self) -> Vec<BasicOccurrence> {
        let mut out = Vec::new();
        self.decompose_into(0, Polarity::Root, &mut out);
        out
    }

    fn decompose_into(&self, level: u32, polarity: Polarity, out: &mut Vec<BasicOccurrence>) {
        out.push(BasicOccurrence {
            basic: self.spine_result().clone(),
            level,
            polarity,
        });
        for (arg, _) in self.arguments() {
            arg.decompose_into(level + 1, Polarity::Slot, out);
        }
    }

    pub fn for_each_var(&self, f: &mut impl FnMut(VarId)) {
        match self {
            Category::Basic(b) => b.features.iter().for_each(|t| t.for_each_var(f)),
            Category::Functor { result, arg, .. } => {
                result.for_each_var(f);
                arg.for_each_var(f);
            }
        }
    }

    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Category {
        match self {
            Category::Basic(b) => Category::Basic(b.map_features(&mut *f)),
            Category::Functor { result, arg, dir } => Category::Functor {
                result: Arc::new(result.map_terms(f)),
                arg: Arc::new(arg.map_terms(f)),
                dir: *dir,
            },
        }
    }

    pub fn resolve(&self, store: &BindStore) -> Category {
        self.map_terms(&mut |t| store.resolve(t))
    }

    pub fn rename(&self, store: &mut BindStore, renaming: &mut Renaming) -> Category {
        self.map_terms(&mut |t| renaming.apply(store, t))
    }

    pub fn rename_apart(&self, store: &mut BindStore) -> Category {
        self.rename(store, &mut Renaming::default())
    }
}

/// Same name, same arity, pairwise feature unification. All-or-nothing.
pub fn unify_basic(store: &mut BindStore, a: &BasicCat, b: &BasicCat) -> bool {
    a.name == b.name && store.unify_all(&a.features, &b.features)
}

/// Structural category unification. All-or-nothing.
pub fn unify_category(store: &mut BindStore, a: &Category, b: &Category) -> bool {
    let m = store.mark();
    if unify_category_inner(store, a, b) {
        true
    } else {
        store.undo_to(m);
        false
    }
}

fn unify_category_inner(store: &mut BindStore, a: &Category, b: &Category) -> bool {
    match (a, b) {
        (Category::Basic(x), Category::Basic(y)) => unify_basic(store, x, y),
        (
            Category::Functor {
                result: r1,
                arg: a1,
                dir: d1,
            },
            Category::Functor {
                result: r2,
                arg: a2,
                dir: d2,
            },
        ) => d1 == d2 && unify_category_inner(store, a1, a2) && unify_category_inner(store, r1, r2),
        _ => false,
    }
}

impl fmt::Display for BasicCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.features.is_empty() {
            f.write_str("(")?;
            for (i, t) in self.features.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Category::Basic(b) => write!(f, "{b}"),
            Category::Functor { result, arg, dir } => {
                write!(f, "{result}{}", dir.symbol())?;
                if arg.is_basic() {
                    write!(f, "{arg}")
                } else {
                    write!(f, "({arg})")
                }
            }
        }
    }
}
