//! `phonodist` command-line tool.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or parse error, 3 automaton
//! state budget exceeded.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Serialize;

use phonodist::alignment::{knn, normalized, word_distance, Alignment};
use phonodist::autoseg::{compatible_with_budget, AutosegWord, DEFAULT_STATE_BUDGET};
use phonodist::features::{template_distance, WeightProfile};
use phonodist::harness::{compare_schemes, render_reports, reports_to_json, HarnessConfig};
use phonodist::lexicon::{
    parse_gold_pairs, parse_lexicon, toy_lexicon, LexiconEntry, WITNESS_GOLD_PAIRS, WITNESS_NAMES,
};
use phonodist::phoneme::{Inventory, PhonemeSequence};
use phonodist::soundex::{self, collisions, collisions_to_jsonl, parse_name_list};

#[derive(Parser)]
#[command(
    name = "phonodist",
    version,
    about = "Phonetic codes and phonological distances"
)]
struct Cli {
    /// Phoneme inventory TSV (default: built-in English ARPAbet set)
    #[arg(long, global = true, value_name = "FILE")]
    inventory: Option<PathBuf>,
    /// Weight profile, `key=value` per line
    #[arg(long, global = true, value_name = "FILE")]
    weights: Option<PathBuf>,
    /// Override the insertion/deletion cost
    #[arg(long, global = true, value_name = "COST")]
    indel_cost: Option<f64>,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every random choice
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// SOUNDEX codes for names
    Soundex {
        names: Vec<String>,
        /// Read names from a file, one per line
        #[arg(long, value_name = "FILE")]
        file: Option<PathBuf>,
    },
    /// Distance between two pronunciations, e.g. "B EH T" "B EH T S"
    Dist {
        first: String,
        second: String,
        /// Position-by-position comparison; lengths must match
        #[arg(long)]
        template: bool,
        /// Divide by the longer length
        #[arg(long)]
        normalize: bool,
    },
    /// Nearest lexicon entries to a pronunciation
    Knn {
        query: String,
        /// Lexicon TSV (default: built-in toy lexicon)
        #[arg(long, value_name = "FILE")]
        lexicon: Option<PathBuf>,
        #[arg(short, default_value_t = 5)]
        k: usize,
    },
    /// Whether two autosegmental words can describe the same string
    Autoseg {
        first: PathBuf,
        second: PathBuf,
        /// Maximum product states before giving up
        #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
        budget: usize,
    },
    /// Score the three schemes against the desiderata
    Eval {
        /// Lexicon TSV (default: built-in toy lexicon)
        #[arg(long, value_name = "FILE")]
        lexicon: Option<PathBuf>,
        /// Names for the SOUNDEX checks, one per line
        #[arg(long, value_name = "FILE")]
        names: Option<PathBuf>,
        /// Gold pairs: name1<TAB>name2<TAB>same|different
        #[arg(long, value_name = "FILE")]
        gold: Option<PathBuf>,
        /// Random triples for the triangle check
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        /// Maximum product states per automaton intersection
        #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
        budget: usize,
        /// Record wall-clock times (output is no longer reproducible)
        #[arg(long)]
        timings: bool,
    },
    /// SOUNDEX collision classes, largest first
    Collisions {
        names: Vec<String>,
        /// Read names from a file, one per line
        #[arg(long, value_name = "FILE")]
        file: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Data(String),
    Budget(String),
}

impl From<phonodist::Error> for Failure {
    fn from(e: phonodist::Error) -> Self {
        match e {
            phonodist::Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Data(other.to_string()),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Budget(m) => f.write_str(m),
        }
    }
}

type Outcome = Result<String, Failure>;

#[derive(Debug, Serialize)]
struct CodeRow {
    name: String,
    code: String,
}

#[derive(Debug, Serialize)]
struct DistOutput {
    distance: f64,
    normalized: bool,
    alignment: Option<Alignment>,
}

#[derive(Debug, Serialize)]
struct NeighborRow {
    rank: usize,
    word: String,
    pronunciation: String,
    distance: f64,
}

#[derive(Debug, Serialize)]
struct AutosegOutput {
    compatible: bool,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: phonodist::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match Failure::from(e) {
        Failure::Data(m) => Failure::Data(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

struct Context {
    inventory: Arc<Inventory>,
    weights: WeightProfile,
    json: bool,
    seed: u64,
}

impl Context {
    fn load(cli: &Cli) -> Result<Self, Failure> {
        let inventory = match &cli.inventory {
            Some(p) => Arc::new(in_file(p, Inventory::parse(&read(p)?))?),
            None => Inventory::english(),
        };
        let mut weights = match &cli.weights {
            Some(p) => in_file(p, WeightProfile::parse(&read(p)?))?,
            None => WeightProfile::default(),
        };
        if let Some(c) = cli.indel_cost {
            weights.indel_cost = c;
            weights
                .validate()
                .map_err(|e| Failure::Usage(format!("--indel-cost: {e}")))?;
        }
        Ok(Context {
            inventory,
            weights,
            json: cli.json,
            seed: cli.seed,
        })
    }

    fn sequence(&self, text: &str) -> Result<PhonemeSequence, Failure> {
        PhonemeSequence::parse(text, &self.inventory)
            .map_err(|e| Failure::Data(format!("{text:?}: {e}")))
    }

    fn lexicon(&self, path: Option<&Path>) -> Result<Vec<LexiconEntry>, Failure> {
        match path {
            Some(p) => in_file(p, parse_lexicon(&read(p)?, &self.inventory)),
            None if self.inventory == Inventory::english() => Ok(toy_lexicon()),
            None => Err(Failure::Usage("a custom inventory needs --lexicon".into())),
        }
    }
}

fn names_from(names: &[String], file: Option<&Path>) -> Result<Vec<String>, Failure> {
    let mut all = names.to_vec();
    if let Some(p) = file {
        all.extend(parse_name_list(&read(p)?));
    }
    if all.is_empty() {
        return Err(Failure::Usage("no names given".into()));
    }
    if all.iter().any(|n| n.trim().is_empty()) {
        return Err(Failure::Usage("empty name".into()));
    }
    Ok(all)
}

fn cmd_soundex(ctx: &Context, names: &[String], file: Option<&Path>) -> Outcome {
    let names = names_from(names, file)?;
    let rows = names
        .iter()
        .map(|n| {
            Ok(CodeRow {
                name: n.clone(),
                code: soundex::encode(n)?.to_string(),
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(if ctx.json {
        json(&rows)
    } else {
        rows.iter()
            .map(|r| format!("{} {}\n", r.name, r.code))
            .collect()
    })
}

fn cmd_dist(ctx: &Context, first: &str, second: &str, template: bool, normalize: bool) -> Outcome {
    let (a, b) = (ctx.sequence(first)?, ctx.sequence(second)?);
    let (mut d, alignment) = if template {
        (template_distance(&a, &b, &ctx.weights)?, None)
    } else {
        let (d, aln) = word_distance(&a, &b, &ctx.weights)?;
        (d, Some(aln))
    };
    if normalize {
        d = normalized(d, a.len(), b.len());
    }
    Ok(if ctx.json {
        json(&DistOutput {
            distance: d,
            normalized: normalize,
            alignment,
        })
    } else {
        let mut out = format!("{d}\n");
        if let Some(aln) = alignment {
            out.push_str(&aln.render(&a, &b));
        }
        out
    })
}

fn cmd_knn(ctx: &Context, query: &str, lexicon: Option<&Path>, k: usize) -> Outcome {
    if k == 0 {
        return Err(Failure::Usage("-k must be at least 1".into()));
    }
    let q = ctx.sequence(query)?;
    let entries = ctx.lexicon(lexicon)?;
    let rows: Vec<NeighborRow> = knn(&q, &entries, k, &ctx.weights)?
        .into_iter()
        .enumerate()
        .map(|(i, n)| NeighborRow {
            rank: i + 1,
            word: n.entry.word.clone(),
            pronunciation: n.entry.pronunciation.to_string(),
            distance: n.distance,
        })
        .collect();
    Ok(if ctx.json {
        json(&rows)
    } else {
        rows.iter()
            .map(|r| {
                format!(
                    "{}\t{}\t{}\t{}\n",
                    r.rank, r.word, r.pronunciation, r.distance
                )
            })
            .collect()
    })
}

fn cmd_autoseg(ctx: &Context, first: &Path, second: &Path, budget: usize) -> Outcome {
    let a = in_file(first, AutosegWord::parse(&read(first)?))?;
    let b = in_file(second, AutosegWord::parse(&read(second)?))?;
    let compatible = compatible_with_budget(&a, &b, &[], budget)?;
    Ok(if ctx.json {
        json(&AutosegOutput { compatible })
    } else if compatible {
        "compatible\n".into()
    } else {
        "incompatible\n".into()
    })
}

struct EvalArgs<'a> {
    lexicon: Option<&'a Path>,
    names: Option<&'a Path>,
    gold: Option<&'a Path>,
    trials: usize,
    budget: usize,
    timings: bool,
}

fn cmd_eval(ctx: &Context, args: EvalArgs) -> Outcome {
    let lexicon = ctx.lexicon(args.lexicon)?;
    let names = match args.names {
        Some(p) => parse_name_list(&read(p)?),
        None => parse_name_list(WITNESS_NAMES),
    };
    let gold_pairs = match args.gold {
        Some(p) => in_file(p, parse_gold_pairs(&read(p)?))?,
        None => parse_gold_pairs(WITNESS_GOLD_PAIRS)?,
    };
    let config = HarnessConfig {
        weights: ctx.weights,
        seed: ctx.seed,
        trials: args.trials,
        names,
        gold_pairs,
        budget: args.budget,
        timings: args.timings,
        ..HarnessConfig::default()
    };
    let reports = compare_schemes(&lexicon, &config)?;
    let out = if ctx.json {
        reports_to_json(&reports) + "\n"
    } else {
        render_reports(&reports)
    };
    if reports.iter().any(|r| r.budget_exceeded) {
        // The report is still useful; print it before failing.
        print!("{out}");
        return Err(Failure::Budget("automaton state budget exceeded".into()));
    }
    Ok(out)
}

fn cmd_collisions(ctx: &Context, names: &[String], file: Option<&Path>) -> Outcome {
    let names = names_from(names, file)?;
    let classes = collisions(&names)?;
    Ok(if ctx.json {
        collisions_to_jsonl(&classes)
    } else {
        classes
            .iter()
            .map(|c| format!("{}\t{}\t{}\n", c.code, c.size, c.members.join(" ")))
            .collect()
    })
}

fn run(cli: &Cli) -> Outcome {
    let ctx = Context::load(cli)?;
    match &cli.command {
        Command::Soundex { names, file } => cmd_soundex(&ctx, names, file.as_deref()),
        Command::Dist {
            first,
            second,
            template,
            normalize,
        } => cmd_dist(&ctx, first, second, *template, *normalize),
        Command::Knn { query, lexicon, k } => cmd_knn(&ctx, query, lexicon.as_deref(), *k),
        Command::Autoseg {
            first,
            second,
            budget,
        } => cmd_autoseg(&ctx, first, second, *budget),
        Command::Eval {
            lexicon,
            names,
            gold,
            trials,
            budget,
            timings,
        } => cmd_eval(
            &ctx,
            EvalArgs {
                lexicon: lexicon.as_deref(),
                names: names.as_deref(),
                gold: gold.as_deref(),
                trials: *trials,
                budget: *budget,
                timings: *timings,
            },
        ),
        Command::Collisions { names, file } => cmd_collisions(&ctx, names, file.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(out) => {
            let _ = io::stdout().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("phonodist: {f}");
            ExitCode::from(match f {
                Failure::Usage(_) => 1,
                Failure::Data(_) => 2,
                Failure::Budget(_) => 3,
            })
        }
    }
}
