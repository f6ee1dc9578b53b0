//! Concrete syntax for terms and categories.
//!
//! ```text
//! category := primary (('/' | '\') primary)*       left-associative
//! primary  := '(' category ')' | name | name '(' term, ... ')'
//! term     := Var | _ | integer | name | name '(' term, ... ')' | list
//! list     := '[' ']' | '[' term, ... ('|' term)? ']'
//! ```

use std::collections::HashMap;

use crate::category::{BasicCat, Category, Dir};
use crate::term::{BindStore, Term, VarId};
use crate::SyntaxError;

/// Named variables seen while parsing one clause (or one bag file).
#[derive(Debug, Default, Clone)]
pub struct VarScope {
    names: HashMap<String, VarId>,
}

impl VarScope {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<VarId> {
        self.names.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, VarId)> {
        self.names.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

pub struct Parser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col_base: usize,
}

impl<'a> Parser<'a> {
    pub fn new(src: &'a str) -> Self {
        Parser {
            src,
            pos: 0,
            line: 1,
            col_base: 0,
        }
    }

    /// Reports errors as if `src` started at `line`, column `col_base + 1`.
    pub fn at(src: &'a str, line: usize, col_base: usize) -> Self {
        Parser {
            src,
            pos: 0,
            line,
            col_base,
        }
    }

    pub fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError {
            line: self.line,
            column: self.col_base + self.pos + 1,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    pub fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    pub fn expect_end(&mut self) -> Result<(), SyntaxError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(format!(
                "unexpected trailing input `{}`",
                &self.src[self.pos..]
            )))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn eat_str(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .char_indices()
            .find(|&(_, c)| !(c.is_alphanumeric() || c == '_'))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        if len == 0 {
            return None;
        }
        self.pos += len;
        Some(&rest[..len])
    }

    /// A bare word token (lexical item name): letters, digits, `_`, `'`, `-`.
    pub fn word(&mut self) -> Result<&'a str, SyntaxError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .char_indices()
            .find(|&(_, c)| !(c.is_alphanumeric() || c == '_' || c == '\'' || c == '-'))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error("expected a word"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    pub fn term(
        &mut self,
        store: &mut BindStore,
        scope: &mut VarScope,
    ) -> Result<Term, SyntaxError> {
        self.skip_ws();
        match self.peek() {
            Some('[') => self.list(store, scope),
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let tok = self.ident().unwrap();
                tok.parse::<u64>().map(Term::int).map_err(|_| SyntaxError {
                    line: self.line,
                    column: self.col_base + start + 1,
                    message: format!("bad integer `{tok}`"),
                })
            }
            Some(c) if c == '_' || c.is_uppercase() => {
                let name = self.ident().unwrap();
                if name == "_" {
                    return Ok(store.fresh_var());
                }
                let id = match scope.names.get(name) {
                    Some(&id) => id,
                    None => {
                        let Term::Var(id) = store.fresh_var() else {
                            unreachable!()
                        };
                        scope.names.insert(name.to_string(), id);
                        id
                    }
                };
                Ok(Term::Var(id))
            }
            Some(c) if c.is_lowercase() => {
                let name = self.ident().unwrap();
                if self.peek() == Some('(') {
                    let args = self.args(store, scope)?;
                    Ok(Term::compound(name, args))
                } else {
                    Ok(Term::sym(name))
                }
            }
            _ => Err(self.error("expected a term")),
        }
    }

    fn args(
        &mut self,
        store: &mut BindStore,
        scope: &mut VarScope,
    ) -> Result<Vec<Term>, SyntaxError> {
        self.expect('(')?;
        let mut args = vec![self.term(store, scope)?];
        while self.eat(',') {
            args.push(self.term(store, scope)?);
        }
        self.expect(')')?;
        Ok(args)
    }

    fn list(&mut self, store: &mut BindStore, scope: &mut VarScope) -> Result<Term, SyntaxError> {
        self.expect('[')?;
        if self.eat(']') {
            return Ok(Term::Nil);
        }
        let mut items = vec![self.term(store, scope)?];
        while self.eat(',') {
            items.push(self.term(store, scope)?);
        }
        let tail = if self.eat('|') {
            self.term(store, scope)?
        } else {
            Term::Nil
        };
        self.expect(']')?;
        Ok(Term::list_with_tail(items, tail))
    }

    pub fn basic(
        &mut self,
        store: &mut BindStore,
        scope: &mut VarScope,
    ) -> Result<BasicCat, SyntaxError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_lowercase() => {}
            _ => return Err(self.error("expected a basic category name")),
        }
        let name = self.ident().unwrap();
        // No whitespace between name and `(`: otherwise it is a grouping paren.
        let features = if self.peek() == Some('(') {
            self.args(store, scope)?
        } else {
            Vec::new()
        };
        Ok(BasicCat::new(name, features))
    }

    fn primary(
        &mut self,
        store: &mut BindStore,
        scope: &mut VarScope,
    ) -> Result<Category, SyntaxError> {
        if self.eat('(') {
            let c = self.category(store, scope)?;
            self.expect(')')?;
            Ok(c)
        } else {
            Ok(Category::Basic(self.basic(store, scope)?))
        }
    }

    pub fn category(
        &mut self,
        store: &mut BindStore,
        scope: &mut VarScope,
    ) -> Result<Category, SyntaxError> {
        let mut acc = self.primary(store, scope)?;
        loop {
            let dir = if self.eat('/') {
                Dir::Right
            } else if self.eat('\\') {
                Dir::Left
            } else {
                break;
            };
            let arg = self.primary(store, scope)?;
            acc = Category::functor(acc, arg, dir);
        }
        Ok(acc)
    }
}

/// Parses a complete category; variables are allocated in `store`.
pub fn parse_category_in(
    text: &str,
    store: &mut BindStore,
    scope: &mut VarScope,
) -> Result<Category, SyntaxError> {
    let mut p = Parser::new(text);
    let c = p.category(store, scope)?;
    p.expect_end()?;
    Ok(c)
}

pub fn parse_term_in(
    text: &str,
    store: &mut BindStore,
    scope: &mut VarScope,
) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(text);
    let t = p.term(store, scope)?;
    p.expect_end()?;
    Ok(t)
}
