//! Bags of lexical signs and their basic-sign node table.
//!
//! Bag file syntax:
//!
//! ```text
//! use figures.lex.
//! item mary : np(I).
//! item likes : (s\np(I))/np(J).
//! item frances : np(J).
//! word the.
//! target s.
//! ```
//!
//! A variable named in more than one item is an index: it becomes a rigid
//! constant so that two different indices can never be unified.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::category::{BasicCat, Category, Polarity};
use crate::lexicon::{check_terminators, expect_token, statements, Lexicon};
use crate::syntax::{Parser, VarScope};
use crate::term::{Atom, BindStore, Renaming, Term, VarId};
use crate::{Error, SyntaxError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    /// The target's inverse, consumed by the final result.
    pub const DUMMY: NodeId = NodeId(0);
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasicSignNode {
    pub id: NodeId,
    pub basic: BasicCat,
    /// Index of the bag item this node belongs to.
    pub item: usize,
    pub level: u32,
    pub polarity: Polarity,
}

/// One lexical reading of a bag item, with the node ids of its root and of
/// the heads of its direct arguments (consumption order).
#[derive(Clone, Debug)]
pub struct Reading {
    pub category: Category,
    pub root: NodeId,
    pub slots: Vec<NodeId>,
}

#[derive(Clone, Debug)]
pub struct BagItem {
    pub word: Arc<str>,
    pub readings: Vec<Reading>,
}

impl BagItem {
    pub fn is_ambiguous(&self) -> bool {
        self.readings.len() > 1
    }
}

/// An unordered multiset of lexical signs sharing one binding store.
#[derive(Clone, Debug, Default)]
pub struct Bag {
    pub items: Vec<BagItem>,
    /// Basic-sign nodes, numbered from 1 in item order.
    pub nodes: Vec<BasicSignNode>,
    pub store: BindStore,
}

impl Bag {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn words(&self) -> Vec<&str> {
        self.items.iter().map(|i| i.word.as_ref()).collect()
    }

    pub fn node(&self, id: NodeId) -> &BasicSignNode {
        &self.nodes[id.0 as usize - 1]
    }

    /// Adds an item whose readings are already instantiated in `self.store`.
    pub fn push_item(&mut self, word: &str, readings: Vec<Category>) {
        let item = self.items.len();
        let mut next = self.nodes.len() as u32 + 1;
        let mut out = Vec::with_capacity(readings.len());
        for category in readings {
            let occurrences = category.decompose();
            let root = NodeId(next);
            // The head of each direct argument is a level-1 occurrence.
            let slots = occurrences
                .iter()
                .enumerate()
                .filter(|(_, o)| o.level == 1)
                .map(|(i, _)| NodeId(next + i as u32))
                .collect();
            for o in occurrences {
                self.nodes.push(BasicSignNode {
                    id: NodeId(next),
                    basic: o.basic,
                    item,
                    level: o.level,
                    polarity: o.polarity,
                });
                next += 1;
            }
            out.push(Reading {
                category,
                root,
                slots,
            });
        }
        self.items.push(BagItem {
            word: word.into(),
            readings: out,
        });
    }

    /// Pulls each word's readings from the lexicon with fresh variables.
    pub fn from_words<S: AsRef<str>>(words: &[S], lexicon: &Lexicon) -> Result<Bag, Error> {
        let mut bag = Bag::new();
        for w in words {
            let w = w.as_ref();
            let readings = lexicon
                .instantiate(w, &mut bag.store)
                .ok_or_else(|| Error::UnknownWord(w.to_string()))?;
            bag.push_item(w, readings);
        }
        Ok(bag)
    }

    /// Parses a category into this bag's store (for targets given on the
    /// command line).
    pub fn parse_category(&mut self, text: &str) -> Result<Category, SyntaxError> {
        crate::syntax::parse_category_in(text, &mut self.store, &mut VarScope::new())
    }

    /// Number of root nodes and of slot nodes (without the dummy).
    pub fn polarity_counts(&self) -> (usize, usize) {
        let roots = self
            .nodes
            .iter()
            .filter(|n| n.polarity == Polarity::Root)
            .count();
        (roots, self.nodes.len() - roots)
    }
}

#[derive(Clone, Debug)]
enum Entry {
    Item { word: String, category: Category },
    Word { word: String, line: usize },
}

/// A parsed bag file, before lexicon lookup.
#[derive(Clone, Debug)]
pub struct BagFile {
    pub uses: Vec<String>,
    entries: Vec<Entry>,
    target: Option<Category>,
    templates: BindStore,
    scope: VarScope,
}

impl BagFile {
    pub fn parse(text: &str) -> Result<BagFile, SyntaxError> {
        check_terminators(text)?;
        let mut file = BagFile {
            uses: Vec::new(),
            entries: Vec::new(),
            target: None,
            templates: BindStore::new(),
            scope: VarScope::new(),
        };
        for (line_no, (body, col)) in statements(text) {
            let mut p = Parser::at(body, line_no, col);
            match p.word()? {
                "use" => {
                    let path = body.trim_start()["use".len()..].trim();
                    let path = path.trim_matches('"');
                    if path.is_empty() {
                        return Err(p.error("expected a path after `use`"));
                    }
                    file.uses.push(path.to_string());
                }
                "item" => {
                    let word = p.word()?.to_string();
                    expect_token(&mut p, ":")?;
                    let category = p.category(&mut file.templates, &mut file.scope)?;
                    p.expect_end()?;
                    file.entries.push(Entry::Item { word, category });
                }
                "word" => {
                    let word = p.word()?.to_string();
                    p.expect_end()?;
                    file.entries.push(Entry::Word {
                        word,
                        line: line_no,
                    });
                }
                "target" => {
                    let category = p.category(&mut file.templates, &mut file.scope)?;
                    p.expect_end()?;
                    file.target = Some(category);
                }
                other => return Err(p.error(format!("unknown statement `{other}`"))),
            }
        }
        Ok(file)
    }

    /// Builds the bag. Returns the file's target, if it names one.
    pub fn instantiate(&self, lexicon: &Lexicon) -> Result<(Bag, Option<Category>), Error> {
        // Count, per named variable, how many items mention it.
        let mut owners: HashMap<VarId, Vec<usize>> = HashMap::new();
        for (i, e) in self.entries.iter().enumerate() {
            if let Entry::Item { category, .. } = e {
                category.for_each_var(&mut |v| {
                    let o = owners.entry(v).or_default();
                    if o.last() != Some(&i) {
                        o.push(i);
                    }
                });
            }
        }
        let mut renaming = Renaming::default();
        for (name, v) in self.scope.iter() {
            if owners.get(&v).is_some_and(|o| o.len() > 1) {
                renaming.fix(v, Term::Atom(Atom::Index(name.into())));
            }
        }

        let mut bag = Bag::new();
        for e in &self.entries {
            match e {
                Entry::Item { word, category } => {
                    let c = category.rename(&mut bag.store, &mut renaming);
                    bag.push_item(word, vec![c]);
                }
                Entry::Word { word, line } => {
                    let readings = lexicon.instantiate(word, &mut bag.store).ok_or_else(|| {
                        Error::UnknownWordAt {
                            word: word.clone(),
                            line: *line,
                        }
                    })?;
                    bag.push_item(word, readings);
                }
            }
        }
        let target = self
            .target
            .as_ref()
            .map(|t| t.rename(&mut bag.store, &mut renaming));
        Ok((bag, target))
    }
}

/// Parses a bag file against `lexicon` (any `use` lines must already have
/// been merged into it by the caller).
pub fn load_bag(text: &str, lexicon: &Lexicon) -> Result<(Bag, Option<Category>), Error> {
    BagFile::parse(text)?.instantiate(lexicon)
}
