//! Reduction-count benchmark over a suite of bags.
//!
//! Suite file: one row per line, `id <TAB> target <TAB> w1 w2 ...`; blank
//! lines and lines starting with `#` are skipped. The words are shifted in
//! the order given.

use std::fmt::Write as _;
use std::ops::ControlFlow;
use std::time::Duration;

use crate::bag::Bag;
use crate::lexicon::Grammar;
use crate::whitelock::{Outcome, SearchOptions, SearchStats};
use crate::{run, Algorithm, Error};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

pub const TSV_HEADER: &str =
    "id\tlength\talgo\treductions\tshifts\tlinks_deleted\tmillis\tfirst_solution";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteRow {
    pub id: String,
    pub target: String,
    pub words: Vec<String>,
}

pub fn parse_suite(text: &str) -> Result<Vec<SuiteRow>, Error> {
    let mut rows = Vec::new();
    for (no, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [id, target, words] = fields.as_slice() else {
            return Err(Error::Suite(format!(
                "line {}: expected `id<TAB>target<TAB>words`",
                no + 1
            )));
        };
        rows.push(SuiteRow {
            id: id.trim().to_string(),
            target: target.trim().to_string(),
            words: words.split_whitespace().map(str::to_string).collect(),
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug)]
pub struct BenchResult {
    pub id: String,
    pub length: usize,
    pub algorithm: Algorithm,
    pub stats: SearchStats,
    pub outcome: Outcome,
    /// Counters at the first solution, if one was found.
    pub first: Option<(String, SearchStats)>,
}

impl BenchResult {
    /// Reductions up to the first solution, or the total if none was found.
    pub fn reductions(&self) -> u64 {
        self.first
            .as_ref()
            .map_or(self.stats.reductions, |(_, s)| s.reductions)
    }

    pub fn timed_out(&self) -> bool {
        self.first.is_none() && self.outcome == Outcome::TimedOut
    }
}

/// Runs one algorithm on one row until its first solution.
pub fn run_row(
    grammar: &Grammar,
    row: &SuiteRow,
    algorithm: Algorithm,
    timeout: Option<Duration>,
) -> Result<BenchResult, Error> {
    let mut bag = Bag::from_words(&row.words, &grammar.lexicon)?;
    let target = bag.parse_category(&row.target)?;
    let options = SearchOptions {
        timeout,
        ..Default::default()
    };
    let mut first = None;
    let summary = run(
        algorithm,
        &bag,
        &target,
        &grammar.rules,
        &options,
        &mut |s| {
            first = Some((s.text(), s.stats.clone()));
            ControlFlow::Break(())
        },
    )?;
    Ok(BenchResult {
        id: row.id.clone(),
        length: row.words.len(),
        algorithm,
        stats: summary.stats,
        outcome: summary.outcome,
        first,
    })
}

/// Whitelock and constraint-propagation results for every row, in order.
pub fn run_suite(
    grammar: &Grammar,
    rows: &[SuiteRow],
    timeout: Option<Duration>,
) -> Result<Vec<(BenchResult, BenchResult)>, Error> {
    rows.iter()
        .map(|row| {
            Ok((
                run_row(grammar, row, Algorithm::Whitelock, timeout)?,
                run_row(grammar, row, Algorithm::Cp, timeout)?,
            ))
        })
        .collect()
}

fn tsv_line(out: &mut String, r: &BenchResult) {
    let (stats, first) = match &r.first {
        Some((text, s)) => (s, text.as_str()),
        None if r.timed_out() => (&r.stats, "timeout"),
        None => (&r.stats, "-"),
    };
    let _ = writeln!(
        out,
        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
        r.id,
        r.length,
        r.algorithm.name(),
        stats.reductions,
        stats.shifts,
        stats.links_deleted,
        r.stats.wall_millis,
        first
    );
}

/// TSV table: a `whitelock` line, a `cp` line and a `ratio` line
/// (whitelock reductions over cp reductions) per row.
pub fn format_tsv(results: &[(BenchResult, BenchResult)]) -> String {
    let mut out = String::new();
    out.push_str(TSV_HEADER);
    out.push('\n');
    for (w, c) in results {
        tsv_line(&mut out, w);
        tsv_line(&mut out, c);
        let ratio = if w.first.is_some() && c.first.is_some() && c.reductions() > 0 {
            format!("{:.3}", w.reductions() as f64 / c.reductions() as f64)
        } else {
            "-".to_string()
        };
        let _ = writeln!(out, "{}\t{}\tratio\t{}\t-\t-\t-\t-", w.id, w.length, ratio);
    }
    out
}
