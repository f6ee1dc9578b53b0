//! Grammar files: lexical entries and unordered binary productions.
//!
//! ```text
//! % comment
//! word the : np/n(_).
//! rule x -> x x.
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::category::{BasicCat, Category};
use crate::syntax::{Parser, VarScope};
use crate::term::{BindStore, Renaming};
use crate::SyntaxError;

/// `parent <- left, right`, matched against two constituents in either order.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub parent: BasicCat,
    pub children: [BasicCat; 2],
    has_vars: bool,
}

impl Rule {
    pub fn new(parent: BasicCat, left: BasicCat, right: BasicCat) -> Self {
        let mut has_vars = false;
        for b in [&parent, &left, &right] {
            for t in b.features.iter() {
                t.for_each_var(&mut |_| has_vars = true);
            }
        }
        Rule {
            parent,
            children: [left, right],
            has_vars,
        }
    }

    /// Whether the children's names are `a` and `b` in some order; a cheap
    /// test that must pass before unification can.
    pub fn may_join(&self, a: &BasicCat, b: &BasicCat) -> bool {
        let [x, y] = &self.children;
        (x.name == a.name && y.name == b.name) || (x.name == b.name && y.name == a.name)
    }

    /// Both children are the same ground category, so matching them the
    /// other way round gives nothing new.
    pub fn is_symmetric(&self) -> bool {
        !self.has_vars && self.children[0] == self.children[1]
    }

    /// A copy whose variables are fresh in `store`. Ground rules are
    /// returned unchanged.
    pub fn instantiate(&self, store: &mut BindStore) -> Rule {
        if !self.has_vars {
            return self.clone();
        }
        let mut r = Renaming::default();
        let mut rename = |b: &BasicCat| {
            Category::Basic(b.clone())
                .rename(store, &mut r)
                .as_basic()
                .cloned()
                .unwrap()
        };
        let parent = rename(&self.parent);
        let left = rename(&self.children[0]);
        let right = rename(&self.children[1]);
        Rule {
            parent,
            children: [left, right],
            has_vars: true,
        }
    }
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "rule {} -> {} {}.",
            self.parent, self.children[0], self.children[1]
        )
    }
}

pub type RuleSet = Vec<Rule>;

/// Word to category templates. Template variables live in the lexicon's own
/// store and are renamed apart whenever an entry is pulled into a bag.
#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    entries: BTreeMap<Arc<str>, Vec<Category>>,
    order: Vec<Arc<str>>,
    templates: BindStore,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn readings(&self, word: &str) -> Option<&[Category]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    /// Words in first-definition order.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.order.iter().map(|w| w.as_ref())
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn templates_mut(&mut self) -> &mut BindStore {
        &mut self.templates
    }

    /// Adds a reading built against [`Lexicon::templates_mut`].
    pub fn add(&mut self, word: &str, category: Category) {
        match self.entries.get_mut(word) {
            Some(v) => v.push(category),
            None => {
                let w: Arc<str> = word.into();
                self.order.push(w.clone());
                self.entries.insert(w, vec![category]);
            }
        }
    }

    /// Adds every entry of `other`, after this lexicon's own.
    pub fn extend(&mut self, other: &Lexicon) {
        for word in &other.order {
            for c in &other.entries[word] {
                let renamed = c.rename_apart(&mut self.templates);
                self.add(word, renamed);
            }
        }
    }

    /// Fresh copies of every reading of `word`.
    pub fn instantiate(&self, word: &str, store: &mut BindStore) -> Option<Vec<Category>> {
        self.readings(word)
            .map(|cs| cs.iter().map(|c| c.rename_apart(store)).collect())
    }
}

#[derive(Clone, Debug, Default)]
pub struct Grammar {
    pub lexicon: Lexicon,
    pub rules: RuleSet,
}

impl Grammar {
    pub fn parse(text: &str) -> Result<Grammar, SyntaxError> {
        check_terminators(text)?;
        let mut g = Grammar::default();
        for (line_no, line) in statements(text) {
            let (body, col) = line;
            let mut p = Parser::at(body, line_no, col);
            let keyword = p.word()?;
            match keyword {
                "word" => {
                    let word = p.word()?.to_string();
                    expect_token(&mut p, ":")?;
                    let mut scope = VarScope::new();
                    let cat = p.category(g.lexicon.templates_mut(), &mut scope)?;
                    p.expect_end()?;
                    g.lexicon.add(&word, cat);
                }
                "rule" => {
                    let mut scope = VarScope::new();
                    let parent = p.basic(g.lexicon.templates_mut(), &mut scope)?;
                    expect_token(&mut p, "->")?;
                    let left = p.basic(g.lexicon.templates_mut(), &mut scope)?;
                    let right = p.basic(g.lexicon.templates_mut(), &mut scope)?;
                    p.expect_end()?;
                    g.rules.push(Rule::new(parent, left, right));
                }
                other => return Err(p.error(format!("unknown statement `{other}`"))),
            }
        }
        Ok(g)
    }

    pub fn extend(&mut self, other: &Grammar) {
        self.lexicon.extend(&other.lexicon);
        for r in &other.rules {
            if !self.rules.contains(r) {
                self.rules.push(r.clone());
            }
        }
    }

    /// Renders the grammar back in file syntax.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        for w in self.lexicon.words() {
            for c in self.lexicon.readings(w).unwrap() {
                out.push_str(&format!("word {w} : {c}.\n"));
            }
        }
        for r in &self.rules {
            out.push_str(&format!("{r}\n"));
        }
        out
    }
}

pub fn load_lexicon(text: &str) -> Result<(Lexicon, RuleSet), SyntaxError> {
    let g = Grammar::parse(text)?;
    Ok((g.lexicon, g.rules))
}

/// Consumes a literal token (after whitespace) or reports an error.
pub(crate) fn expect_token(p: &mut Parser<'_>, tok: &str) -> Result<(), SyntaxError> {
    if p.eat_str(tok) {
        Ok(())
    } else {
        Err(p.error(format!("expected `{tok}`")))
    }
}

/// Splits a file into `(line number, (statement body, column offset))`,
/// dropping `%` comments, blank lines and the terminating `.`.
pub(crate) fn statements(text: &str) -> Vec<(usize, (&str, usize))> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = match raw.find('%') {
                Some(at) => &raw[..at],
                None => raw,
            };
            let trimmed_start = line.len() - line.trim_start().len();
            let body = line.trim();
            if body.is_empty() {
                return None;
            }
            let body = body.strip_suffix('.').unwrap_or(body);
            Some((i + 1, (body, trimmed_start)))
        })
        .collect()
}

/// Statements must end in `.`; reports the first that does not.
pub(crate) fn check_terminators(text: &str) -> Result<(), SyntaxError> {
    for (i, raw) in text.lines().enumerate() {
        let line = match raw.find('%') {
            Some(at) => &raw[..at],
            None => raw,
        };
        let body = line.trim_end();
        if !body.trim().is_empty() && !body.ends_with('.') {
            return Err(SyntaxError {
                line: i + 1,
                column: body.len() + 1,
                message: "statement must end with `.`".into(),
            });
        }
    }
    Ok(())
}
