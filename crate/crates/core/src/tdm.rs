//! Three-dimensional matching as bag generation.
//!
//! An instance has three disjoint sets `a1..an`, `b1..bn`, `c1..cn` and a
//! list of admissible triples. It is solvable when some of the triples cover
//! every element exactly once. [`encode`] turns an instance into a grammar
//! and a bag such that the bag can be generated as an `x` exactly when the
//! instance is solvable:
//!
//! ```text
//! word a1 : a1.  ...               one atomic word per element
//! rule x -> a_i p_t.               per triple t = (i, j, k)
//! rule p_t -> b_j c_k.
//! rule x -> x x.
//! ```
//!
//! Each ternary production `x -> a_i b_j c_k` is split in two through the
//! fresh symbol `p_t`; since constituent order is free, nothing is lost.

use std::fmt;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bag::Bag;
use crate::category::{BasicCat, Category};
use crate::lexicon::{Grammar, Rule};
use crate::Error;

/// Largest `n` the brute-force solver accepts.
pub const BRUTE_CAP: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TdmInstance {
    pub n: u32,
    /// 1-based `(a, b, c)` indices.
    pub triples: Vec<(u32, u32, u32)>,
}

impl TdmInstance {
    pub fn new(n: u32, triples: Vec<(u32, u32, u32)>) -> Result<Self, Error> {
        for (idx, &(i, j, k)) in triples.iter().enumerate() {
            if [i, j, k].iter().any(|&x| x == 0 || x > n) {
                return Err(Error::Tdm(format!(
                    "triple {} ({i} {j} {k}) out of range 1..={n}",
                    idx + 1
                )));
            }
            if triples[..idx].contains(&(i, j, k)) {
                return Err(Error::Tdm(format!("duplicate triple ({i} {j} {k})")));
            }
        }
        Ok(TdmInstance { n, triples })
    }

    /// Instance file: `n` on the first line, then one `i j k` per line.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, first) = lines
            .next()
            .ok_or_else(|| Error::Tdm("empty instance file".into()))?;
        let n: u32 = first
            .parse()
            .map_err(|_| Error::Tdm(format!("line 1: bad size `{first}`")))?;
        let mut triples = Vec::new();
        for (no, line) in lines {
            let nums: Result<Vec<u32>, _> = line.split_whitespace().map(str::parse).collect();
            match nums.as_deref() {
                Ok([i, j, k]) => triples.push((*i, *j, *k)),
                _ => return Err(Error::Tdm(format!("line {no}: expected `i j k`"))),
            }
        }
        TdmInstance::new(n, triples)
    }
}

impl fmt::Display for TdmInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for (i, j, k) in &self.triples {
            writeln!(f, "{i} {j} {k}")?;
        }
        Ok(())
    }
}

/// `m` distinct triples drawn uniformly, reproducible for a given seed.
pub fn random_instance(n: u32, m: usize, seed: u64) -> Result<TdmInstance, Error> {
    let total = (n as usize).pow(3);
    if n == 0 || m > total {
        return Err(Error::Tdm(format!(
            "cannot draw {m} distinct triples with n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks = sample(&mut rng, total, m).into_vec();
    picks.sort_unstable();
    let n = n as usize;
    let triples = picks
        .into_iter()
        .map(|p| {
            (
                (p / (n * n) + 1) as u32,
                ((p / n) % n + 1) as u32,
                (p % n + 1) as u32,
            )
        })
        .collect();
    TdmInstance::new(n as u32, triples)
}

/// An encoded instance, ready for the generators.
#[derive(Clone, Debug)]
pub struct Encoded {
    pub grammar: Grammar,
    pub words: Vec<String>,
    pub target: BasicCat,
}

impl Encoded {
    pub fn bag(&self) -> Result<(Bag, Category), Error> {
        let bag = Bag::from_words(&self.words, &self.grammar.lexicon)?;
        Ok((bag, Category::Basic(self.target.clone())))
    }

    /// A bag file that imports the grammar from `lexicon_path`.
    pub fn bag_source(&self, lexicon_path: &str) -> String {
        let mut s = format!("use {lexicon_path}.\n");
        for w in &self.words {
            s.push_str(&format!("word {w}.\n"));
        }
        s.push_str(&format!("target {}.\n", self.target));
        s
    }
}

pub fn encode(inst: &TdmInstance) -> Encoded {
    let mut grammar = Grammar::default();
    let mut words = Vec::new();
    for set in ["a", "b", "c"] {
        for i in 1..=inst.n {
            let w = format!("{set}{i}");
            grammar.lexicon.add(&w, Category::Basic(BasicCat::atom(&w)));
            words.push(w);
        }
    }
    let x = BasicCat::atom("x");
    for (t, &(i, j, k)) in inst.triples.iter().enumerate() {
        let p = BasicCat::atom(&format!("p{}", t + 1));
        grammar.rules.push(Rule::new(
            x.clone(),
            BasicCat::atom(&format!("a{i}")),
            p.clone(),
        ));
        grammar.rules.push(Rule::new(
            p,
            BasicCat::atom(&format!("b{j}")),
            BasicCat::atom(&format!("c{k}")),
        ));
    }
    grammar
        .rules
        .push(Rule::new(x.clone(), x.clone(), x.clone()));
    Encoded {
        grammar,
        words,
        target: x,
    }
}

/// Exact answer by depth-first choice of disjoint triples.
pub fn solve_brute(inst: &TdmInstance) -> Result<bool, Error> {
    if inst.n > BRUTE_CAP {
        return Err(Error::Tdm(format!(
            "brute-force solver is limited to n <= {BRUTE_CAP}"
        )));
    }
    let n = inst.n as usize;
    let mut used = [vec![false; n + 1], vec![false; n + 1], vec![false; n + 1]];
    Ok(cover(inst, 1, &mut used))
}

/// Covers `a_i..a_n`, picking the triple for the lowest uncovered `a` first.
fn cover(inst: &TdmInstance, i: u32, used: &mut [Vec<bool>; 3]) -> bool {
    if i > inst.n {
        return true;
    }
    for &(a, b, c) in &inst.triples {
        if a != i || used[1][b as usize] || used[2][c as usize] {
            continue;
        }
        used[1][b as usize] = true;
        used[2][c as usize] = true;
        let ok = cover(inst, i + 1, used);
        used[1][b as usize] = false;
        used[2][c as usize] = false;
        if ok {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_triple_covers_n1() {
        let inst = TdmInstance::new(1, vec![(1, 1, 1)]).unwrap();
        assert!(solve_brute(&inst).unwrap());
    }

    #[test]
    fn uncovered_element_is_unsolvable() {
        let inst = TdmInstance::new(2, vec![(1, 1, 1), (1, 2, 2)]).unwrap();
        assert!(!solve_brute(&inst).unwrap());
    }

    #[test]
    fn encoding_shape() {
        let inst = TdmInstance::new(2, vec![(1, 1, 1), (2, 2, 2)]).unwrap();
        let e = encode(&inst);
        assert_eq!(e.words, vec!["a1", "a2", "b1", "b2", "c1", "c2"]);
        assert_eq!(e.grammar.rules.len(), 2 * 2 + 1);
        assert_eq!(e.grammar.rules[0].to_string(), "rule x -> a1 p1.");
        assert_eq!(e.grammar.rules[1].to_string(), "rule p1 -> b1 c1.");
        assert_eq!(e.grammar.rules[4].to_string(), "rule x -> x x.");
        // Round-trips through grammar syntax.
        let again = Grammar::parse(&e.grammar.to_source()).unwrap();
        assert_eq!(again.rules, e.grammar.rules);
    }

    #[test]
    fn encoding_is_linear_in_input() {
        for m in [1, 5, 20] {
            let inst = random_instance(3, m, 7).unwrap();
            let e = encode(&inst);
            assert_eq!(e.grammar.rules.len(), 2 * m + 1);
            assert_eq!(e.grammar.lexicon.len(), 9);
        }
    }

    #[test]
    fn random_instances_are_reproducible() {
        let a = random_instance(3, 5, 1).unwrap();
        let b = random_instance(3, 5, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.triples.len(), 5);
        assert_eq!(random_instance(1, 1, 99).unwrap().triples, vec![(1, 1, 1)]);
        for seed in 0..5 {
            let full = random_instance(2, 8, seed).unwrap();
            assert_eq!(full.triples.len(), 8);
            assert!(solve_brute(&full).unwrap());
        }
        assert!(random_instance(2, 9, 0).is_err());
    }

    #[test]
    fn file_round_trip_and_validation() {
        let inst = random_instance(3, 4, 3).unwrap();
        assert_eq!(TdmInstance::parse(&inst.to_string()).unwrap(), inst);
        assert!(TdmInstance::parse("2\n1 1 3\n").is_err());
        assert!(TdmInstance::parse("2\n1 1 1\n1 1 1\n").is_err());
        assert!(TdmInstance::parse("2\n1 1\n").is_err());
        assert!(solve_brute(&TdmInstance::new(9, vec![]).unwrap()).is_err());
    }
}
