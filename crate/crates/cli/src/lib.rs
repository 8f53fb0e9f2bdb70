//! The `aut` command line: automaton files in, weights, languages,
//! theories and law reports out.
//!
//! Exit codes: 0 on success, 1 when a law suite finds a failure, 2 on usage,
//! parse or evaluation errors.
//!
//! Query syntax:
//!
//! ```text
//! word  := symbol ( ' ' symbol )* | character+ | "" | ε
//! term  := x<digit+> | ( <sym> <term> <term> )
//! regex := see kleisli_automata::regex, e.g. (a{2}|b)*.a
//! ```
//!
//! The file format is described in [`format`].

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod error;
pub mod format;
pub mod laws;

pub use error::CliError;
pub use format::{parse_automaton, AutomatonFile, Kind, SemiringName};

#[derive(Debug, Parser)]
#[command(
    name = "aut",
    version,
    about = "Weighted word and tree automata over semirings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Exactly one of `--word` and `--term`.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Query {
    /// A word: space-separated symbols, or one symbol per character.
    #[arg(long, allow_hyphen_values = true)]
    pub word: Option<String>,
    /// A tree term such as `(a (b x0 x0) x0)`.
    #[arg(long)]
    pub term: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Duality,
    Em,
    Saturation,
    Recognition,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weight of a word or tree at a state, one column per exit.
    Weight {
        file: PathBuf,
        /// State label, entry name, or index.
        #[arg(long)]
        state: String,
        #[command(flatten)]
        query: Query,
    },
    /// Nonzero words (or trees) up to a length (or height).
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long, conflicts_with = "max_height")]
        max_len: Option<usize>,
        #[arg(long)]
        max_height: Option<usize>,
        /// List saturation rows (per-state values) instead of weights.
        #[arg(long)]
        saturation: bool,
    },
    /// The finite theory of a boolean automaton as a table.
    Theory {
        file: PathBuf,
        /// Print only the table.
        #[arg(long)]
        emit_table: bool,
        #[arg(long, default_value_t = kleisli_automata::theory::DEFAULT_THEORY_CAP)]
        cap: usize,
    },
    /// Decide membership through the theory and name the recognizing element.
    Recognize {
        file: PathBuf,
        #[arg(long)]
        state: String,
        #[command(flatten)]
        query: Query,
    },
    /// Run law suites on an automaton and seeded random samples.
    Laws {
        file: PathBuf,
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Compile a regular expression into a word automaton file.
    Compile {
        regex: String,
        /// Symbols, comma or space separated.
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        alphabet: Vec<String>,
        #[arg(long, default_value = "boolean")]
        semiring: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compose two word automata: exits of the first feed the entries of
    /// the second.
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// What a command printed and how it exited.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(e: &CliError) -> Self {
        Self {
            code: 2,
            stdout: String::new(),
            stderr: format!("aut: error: {e}\n"),
        }
    }
}

pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match commands::run(&cli.command) {
        Ok(out) => out,
        Err(e) => Outcome::error(&e),
    }
}
