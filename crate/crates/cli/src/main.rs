use std::collections::HashSet;
use std::fs;
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use shakebake_core::congraph::ConGraph;
use shakebake_core::suite::{format_tsv, parse_suite, run_suite, DEFAULT_TIMEOUT};
use shakebake_core::tdm::{encode, random_instance, solve_brute, TdmInstance};
use shakebake_core::{
    fixtures, run, Algorithm, Bag, BagFile, Category, Error, Grammar, Outcome, SearchOptions,
};

/// Bag generation for categorial grammars.
#[derive(Parser)]
#[command(name = "shakebake", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find orderings of a bag of words.
    Gen(GenArgs),
    /// Reduction counts of whitelock and cp over a suite file, as TSV.
    Bench(BenchArgs),
    /// Three-dimensional matching instances.
    #[command(subcommand)]
    Tdm(TdmCommand),
}

#[derive(Args)]
struct GenArgs {
    /// Grammar file (default: the bundled demonstration lexicon).
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Space-separated words.
    #[arg(long, conflicts_with = "bag", required_unless_present = "bag")]
    words: Option<String>,
    /// Bag file.
    #[arg(long)]
    bag: Option<PathBuf>,
    /// Target category (overrides the bag file's).
    #[arg(long)]
    target: Option<String>,
    #[arg(long, default_value = "cp")]
    algo: Algorithm,
    /// Print every distinct ordering, not just the first.
    #[arg(long)]
    all: bool,
    /// Print counters to stderr.
    #[arg(long)]
    stats: bool,
    /// Print the propagated constraint graph to stderr.
    #[arg(long)]
    dump_graph: bool,
    /// Give up after this many seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Per-row, per-algorithm limit in seconds.
    #[arg(long, default_value_t = DEFAULT_TIMEOUT.as_secs_f64())]
    timeout: f64,
    suite: PathBuf,
}

#[derive(Subcommand)]
enum TdmCommand {
    /// Print a random instance.
    Gen {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write the grammar and bag for an instance to `<prefix>.lex` and
    /// `<prefix>.bag`.
    Encode {
        instance: PathBuf,
        /// Defaults to the instance path without its extension.
        #[arg(long)]
        prefix: Option<PathBuf>,
    },
    /// Solve an instance by brute force and by generation and compare.
    Check {
        instance: PathBuf,
        #[arg(long, default_value = "whitelock")]
        algo: Algorithm,
        #[arg(long)]
        timeout: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => gen(args),
        Command::Bench(args) => bench(args),
        Command::Tdm(cmd) => tdm(cmd),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn grammar(path: Option<&Path>) -> Result<Grammar, Error> {
    match path {
        Some(p) => Ok(Grammar::parse(&read(p)?)?),
        None => Ok(Grammar::parse(fixtures::FIGURES_LEX)?),
    }
}

fn seconds(s: Option<f64>) -> Option<Duration> {
    s.map(Duration::from_secs_f64)
}

fn gen(args: GenArgs) -> Result<ExitCode, Error> {
    let (mut g, bag_file) = match &args.bag {
        Some(path) => {
            let file = BagFile::parse(&read(path)?)?;
            // `use` paths are relative to the bag file; an explicit
            // --lexicon replaces the bundled default.
            let mut g = match &args.lexicon {
                Some(_) => grammar(args.lexicon.as_deref())?,
                None if file.uses.is_empty() => grammar(None)?,
                None => Grammar::default(),
            };
            let dir = path.parent().unwrap_or(Path::new("."));
            for u in &file.uses {
                g.extend(&Grammar::parse(&read(&dir.join(u))?)?);
            }
            (g, Some(file))
        }
        None => (grammar(args.lexicon.as_deref())?, None),
    };
    let (mut bag, file_target) = match &bag_file {
        Some(f) => f.instantiate(&g.lexicon)?,
        None => {
            let words: Vec<&str> = args
                .words
                .as_deref()
                .unwrap_or("")
                .split_whitespace()
                .collect();
            (Bag::from_words(&words, &g.lexicon)?, None)
        }
    };
    let target = match (&args.target, file_target) {
        (Some(t), _) => bag.parse_category(t)?,
        (None, Some(t)) => t,
        (None, None) => return Err(Error::MissingTarget),
    };
    let rules = std::mem::take(&mut g.rules);

    if args.dump_graph {
        dump_graph(&bag, &target, &rules);
    }

    let options = SearchOptions {
        timeout: seconds(args.timeout),
        ..Default::default()
    };
    let mut seen = HashSet::new();
    let summary = run(args.algo, &bag, &target, &rules, &options, &mut |s| {
        let text = s.text();
        if seen.insert(text.clone()) {
            println!("{text}");
        }
        if args.all {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(())
        }
    })?;
    if summary.outcome == Outcome::TimedOut {
        eprintln!("timed out");
    }
    if args.stats {
        if summary.stats.fallback {
            eprintln!("note: constraint graph not applicable, ran plain search");
        }
        eprintln!("{}", summary.stats.summary_line());
    }
    Ok(if seen.is_empty() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn dump_graph(bag: &Bag, target: &Category, rules: &[shakebake_core::Rule]) {
    let mut store = bag.store.clone();
    match ConGraph::build(bag, target, rules, &mut store) {
        Ok(mut graph) => {
            if graph.propagate(&mut store).is_err() {
                eprintln!("% propagation found a contradiction");
            }
            eprint!("{}", graph.dump(bag, &store));
        }
        Err(e) => eprintln!("% {e}"),
    }
}

fn bench(args: BenchArgs) -> Result<ExitCode, Error> {
    let g = grammar(args.lexicon.as_deref())?;
    let rows = parse_suite(&read(&args.suite)?)?;
    let results = run_suite(&g, &rows, Some(Duration::from_secs_f64(args.timeout)))?;
    print!("{}", format_tsv(&results));
    Ok(ExitCode::SUCCESS)
}

fn tdm(cmd: TdmCommand) -> Result<ExitCode, Error> {
    match cmd {
        TdmCommand::Gen { n, m, seed } => {
            print!("{}", random_instance(n, m, seed)?);
            Ok(ExitCode::SUCCESS)
        }
        TdmCommand::Encode { instance, prefix } => {
            let inst = TdmInstance::parse(&read(&instance)?)?;
            let prefix = prefix.unwrap_or_else(|| instance.with_extension(""));
            let lex = prefix.with_extension("lex");
            let bag = prefix.with_extension("bag");
            let enc = encode(&inst);
            write(&lex, &enc.grammar.to_source())?;
            let lex_name = lex.file_name().unwrap().to_string_lossy();
            write(&bag, &enc.bag_source(&lex_name))?;
            println!("{}\n{}", lex.display(), bag.display());
            Ok(ExitCode::SUCCESS)
        }
        TdmCommand::Check {
            instance,
            algo,
            timeout,
        } => {
            let inst = TdmInstance::parse(&read(&instance)?)?;
            let brute = solve_brute(&inst)?;
            let enc = encode(&inst);
            let (bag, target) = enc.bag()?;
            let options = SearchOptions {
                timeout: seconds(timeout),
                ..Default::default()
            };
            let mut found = false;
            let summary = run(
                algo,
                &bag,
                &target,
                &enc.grammar.rules,
                &options,
                &mut |_| {
                    found = true;
                    ControlFlow::Break(())
                },
            )?;
            if summary.outcome == Outcome::TimedOut {
                eprintln!("timed out");
                return Ok(ExitCode::from(2));
            }
            let yes = |b: bool| if b { "solvable" } else { "unsolvable" };
            println!("brute-force: {}", yes(brute));
            println!("{algo}: {}", yes(found));
            if brute == found {
                println!("agree");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("DISAGREE");
                Ok(ExitCode::from(1))
            }
        }
    }
}
