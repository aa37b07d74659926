//! `tvt`: words in twisted virtual twin groups and doodle Gauss data.
//!
//! Exit status is 0 for a definite answer, 2 for an unknown verdict and 1
//! for usage or parse errors.

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tvt_core::doodle::{
    bar_parity, braid_gauss, closure_gauss, equivalent_bounded, gauss_components, DoodleBudget,
    DoodleVerdict, GaussData,
};
use tvt_core::markov::{markov_equivalent_bounded, MarkovBudget, MarkovVerdict};
use tvt_core::normalform::{flip, nabla, normal_form, words_equal};
use tvt_core::oracle::{decide_equal, Budget, Verdict};
use tvt_core::schreier::{eval_pure, rewrite_pure, PureWord};
use tvt_core::Word;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "tvt",
    version,
    about = "Twisted virtual twin groups and doodles"
)]
struct Cli {
    /// Strand count for word arguments.
    #[arg(short = 'n', global = true)]
    strands: Option<usize>,
    /// Node budget for bounded searches.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Largest strand count visited by the Markov search.
    #[arg(long, global = true)]
    max_strands: Option<usize>,
    /// Print the certificate after the verdict.
    #[arg(long, global = true)]
    witness: bool,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Free reduction.
    Reduce { word: String },
    /// Permutation image in one-line notation.
    Perm { word: String },
    /// Parities of the `s`, `r` and `g` letter counts.
    Abelian { word: String },
    /// Rewrite a pure word in the pure generators.
    Pure { word: String },
    /// Spell a pure-generator word in the group generators.
    EvalPure { word: String },
    /// Normal form.
    Nf { word: String },
    /// Equality through normal forms.
    Eq { first: String, second: String },
    /// Equality through relation rewriting and finite quotients.
    OracleEq { first: String, second: String },
    /// Gauss data of the closure, as JSON.
    Closure { word: String },
    /// Number of components of a Gauss data file (`-` reads standard input).
    GaussComponents { file: String },
    /// Parity of the number of bars of a Gauss data file.
    BarParity { file: String },
    /// A word whose closure has the given Gauss data.
    Braid { file: String },
    /// Bounded search for a move sequence between two Gauss data files.
    GaussEq { first: String, second: String },
    /// Bounded search for a Markov sequence between two words.
    MarkovEq {
        first: String,
        second: String,
        /// Strand count of the second word, if it differs from `-n`.
        #[arg(long)]
        n2: Option<usize>,
    },
    /// Mirror image through the middle of the strip.
    Flip { word: String },
    /// The element conjugating every word to its mirror image.
    Nabla,
}

struct Output {
    lines: Vec<String>,
    definite: bool,
}

impl Output {
    fn definite(line: impl ToString) -> Self {
        Output {
            lines: vec![line.to_string()],
            definite: true,
        }
    }
}

type Failure = String;

fn strands(cli: &Cli) -> Result<usize, Failure> {
    cli.strands
        .ok_or_else(|| "missing strand count `-n`".to_string())
}

fn word(cli: &Cli, text: &str) -> Result<Word, Failure> {
    Word::parse(text, strands(cli)?).map_err(|e| e.to_string())
}

fn gauss(path: &str) -> Result<GaussData, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| e.to_string())?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?
    };
    GaussData::from_json(&text).map_err(|e| format!("{path}: {e}"))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let err = |e: tvt_core::Error| e.to_string();
    Ok(match &cli.command {
        Command::Reduce { word: w } => Output::definite(word(cli, w)?.free_reduce()),
        Command::Perm { word: w } => Output::definite(word(cli, w)?.perm_image()),
        Command::Abelian { word: w } => Output::definite(word(cli, w)?.abelianize()),
        Command::Pure { word: w } => Output::definite(rewrite_pure(&word(cli, w)?).map_err(err)?),
        Command::EvalPure { word: w } => {
            Output::definite(eval_pure(&PureWord::parse(w, strands(cli)?).map_err(err)?))
        }
        Command::Nf { word: w } => Output::definite(normal_form(&word(cli, w)?)),
        Command::Eq { first, second } => {
            let equal = words_equal(&word(cli, first)?, &word(cli, second)?).map_err(err)?;
            Output::definite(if equal { "equal" } else { "distinct" })
        }
        Command::OracleEq { first, second } => {
            let budget = cli.budget.map_or_else(Budget::default, Budget::with_nodes);
            let verdict =
                decide_equal(&word(cli, first)?, &word(cli, second)?, &budget).map_err(err)?;
            let mut lines = vec![verdict.label().to_string()];
            if cli.witness {
                match &verdict {
                    Verdict::Equal(path) => {
                        lines.extend(path.steps.iter().map(ToString::to_string))
                    }
                    Verdict::Distinct(hom) => lines.push(hom.to_string()),
                    Verdict::Unknown => {}
                }
            }
            Output {
                lines,
                definite: !matches!(verdict, Verdict::Unknown),
            }
        }
        Command::Closure { word: w } => Output::definite(closure_gauss(&word(cli, w)?).to_json()),
        Command::GaussComponents { file } => Output::definite(gauss_components(&gauss(file)?)),
        Command::BarParity { file } => Output::definite(bar_parity(&gauss(file)?)),
        Command::Braid { file } => {
            let b = braid_gauss(&gauss(file)?).map_err(err)?;
            Output {
                lines: vec![b.strands().to_string(), b.to_string()],
                definite: true,
            }
        }
        Command::GaussEq { first, second } => {
            let mut budget = DoodleBudget::default();
            if let Some(nodes) = cli.budget {
                budget.nodes = nodes;
            }
            let verdict = equivalent_bounded(&gauss(first)?, &gauss(second)?, &budget);
            let (label, moves) = match &verdict {
                DoodleVerdict::Equivalent(path) => {
                    ("equivalent", path.iter().map(ToString::to_string).collect())
                }
                DoodleVerdict::Distinct(_) => ("distinct", Vec::new()),
                DoodleVerdict::Unknown => ("unknown", Vec::new()),
            };
            let mut lines = vec![label.to_string()];
            if cli.witness {
                lines.extend(moves);
            }
            Output {
                lines,
                definite: !matches!(verdict, DoodleVerdict::Unknown),
            }
        }
        Command::MarkovEq { first, second, n2 } => {
            let n = strands(cli)?;
            let w1 = Word::parse(first, n).map_err(err)?;
            let w2 = Word::parse(second, n2.unwrap_or(n)).map_err(err)?;
            let mut budget = MarkovBudget {
                max_strands: cli.max_strands,
                ..MarkovBudget::default()
            };
            if let Some(nodes) = cli.budget {
                budget.nodes = nodes;
            }
            let verdict = markov_equivalent_bounded(&w1, &w2, &budget);
            let (label, moves) = match &verdict {
                MarkovVerdict::Equivalent(path) => {
                    ("equivalent", path.iter().map(ToString::to_string).collect())
                }
                MarkovVerdict::Distinct(_) => ("distinct", Vec::new()),
                MarkovVerdict::Unknown => ("unknown", Vec::new()),
            };
            let mut lines = vec![label.to_string()];
            if cli.witness {
                lines.extend(moves);
            }
            Output {
                lines,
                definite: !matches!(verdict, MarkovVerdict::Unknown),
            }
        }
        Command::Flip { word: w } => Output::definite(flip(&word(cli, w)?)),
        Command::Nabla => Output::definite(nabla(strands(cli)?).map_err(err)?),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let Format::Text = cli.format;
    match run(&cli) {
        Ok(out) => {
            for line in &out.lines {
                println!("{line}");
            }
            if out.definite {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
