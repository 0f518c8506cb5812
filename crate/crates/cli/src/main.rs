//! `morsetree`: discrete Morse functions on trees from the command line.
//!
//! Exit status is 0 on success (or "equivalent"), 1 for a negative answer
//! (invalid function, not equivalent, a failed property) and 2 for unusable
//! input.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use morsetree::oracle::{check_invariants, count_merge_classes, DEFAULT_BUDGET};
use morsetree::{
    forman_equivalent, homological_sequence, homologically_equivalent, induce_merge_tree,
    lr_sequence, persistence_diagram, persistence_equivalent, realize_on_star, DocumentError,
    InputDocument, LrSequence, MorseFunction,
};

#[derive(Parser)]
#[command(
    name = "morsetree",
    version,
    about = "Discrete Morse functions on trees and their merge trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a document is a tree with a discrete Morse function.
    Validate { path: PathBuf },
    /// Print the induced merge tree.
    MergeTree {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print impasses, matching number, homology and persistence.
    Invariants { path: PathBuf },
    /// Decide whether two functions are equivalent.
    Compare {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum)]
        relation: Relation,
    },
    /// Run over every critical function on a small tree.
    #[command(group(ArgGroup::new("mode").required(true).args(["count_classes", "check"])))]
    Enumerate {
        /// Document giving the tree; values are ignored.
        path: PathBuf,
        /// Number of distinct merge trees.
        #[arg(long)]
        count_classes: bool,
        /// Check the merge tree properties on every function.
        #[arg(long)]
        check: bool,
        /// Largest number of simplices to enumerate over.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long)]
        json: bool,
    },
    /// Emit a star document realizing an LR sequence such as "LRRL".
    StarRealize {
        #[arg(allow_hyphen_values = true)]
        sequence: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Shape,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Relation {
    Merge,
    Forman,
    Homological,
    Persistence,
}

enum Failure {
    Negative(String),
    Input(String),
}

impl Failure {
    fn input(err: impl std::fmt::Display) -> Self {
        Failure::Input(err.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<InputDocument, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("IoError: {}: {e}", path.display())))?;
    InputDocument::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<MorseFunction, Failure> {
    read(path)?
        .morse_function()
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn validate(path: &Path) -> Outcome {
    match read(path)?.morse_function() {
        Ok(f) => Ok(format!(
            "valid: {} vertices, {} edges, {} critical simplices\n",
            f.tree().vertex_count(),
            f.tree().edge_count(),
            f.critical_values().len()
        )),
        Err(e @ DocumentError::Parse(_)) => Err(Failure::input(e)),
        Err(e) => Err(Failure::Negative(format!("invalid: {e}"))),
    }
}

fn merge_tree(path: &Path, format: Format) -> Outcome {
    let m = induce_merge_tree(&load(path)?);
    Ok(match format {
        Format::Dot => m.to_dot(),
        Format::Shape => format!("{}\n", m.shape_code()),
        Format::Text => m.to_text(),
    })
}

fn invariants(path: &Path) -> Outcome {
    let f = load(path)?;
    let m = induce_merge_tree(&f);
    let mut out = String::new();
    writeln!(out, "impasses: {}", m.impasse_count()).unwrap();
    writeln!(out, "matching number: {}", f.tree().matching_number()).unwrap();
    writeln!(out, "thin: {}", m.is_thin()).unwrap();
    writeln!(out, "homological sequence: {}", homological_sequence(&f)).unwrap();
    writeln!(out, "persistence diagram: {}", persistence_diagram(&f)).unwrap();
    if let Ok(seq) = lr_sequence(&m) {
        writeln!(out, "lr sequence: {}", seq.compact()).unwrap();
    }
    Ok(out)
}

fn compare(first: &Path, second: &Path, relation: Relation) -> Outcome {
    let (f, g) = (load(first)?, load(second)?);
    let equivalent = match relation {
        Relation::Merge => morsetree::equivalence::merge_equivalent(&f, &g),
        Relation::Forman => forman_equivalent(&f, &g).map_err(Failure::input)?,
        Relation::Homological => homologically_equivalent(&f, &g),
        Relation::Persistence => persistence_equivalent(&f, &g),
    };
    if equivalent {
        Ok("equivalent\n".into())
    } else {
        Err(Failure::Negative("not equivalent".into()))
    }
}

fn enumerate(path: &Path, count_classes: bool, budget: usize, json: bool) -> Outcome {
    let tree = read(path)?
        .tree()
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let tree = Arc::new(tree);
    if count_classes {
        let classes = count_merge_classes(&tree, budget).map_err(Failure::input)?;
        return Ok(if json {
            format!("{}\n", serde_json::json!({ "classes": classes }))
        } else {
            format!("{classes}\n")
        });
    }
    let report = check_invariants(&tree, budget).map_err(Failure::input)?;
    let text = if json {
        let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
        s.push('\n');
        s
    } else {
        report.to_text()
    };
    if report.all_passed() {
        Ok(text)
    } else {
        Err(Failure::Negative(text))
    }
}

fn star_realize(sequence: &str) -> Outcome {
    let seq: LrSequence = sequence.parse().map_err(Failure::input)?;
    let m = morsetree::thin_from_lr(&seq);
    let (_, f) = realize_on_star(&m).map_err(Failure::input)?;
    Ok(InputDocument::from_function(&f).to_json())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate { path } => validate(path),
        Command::MergeTree { path, format } => merge_tree(path, *format),
        Command::Invariants { path } => invariants(path),
        Command::Compare {
            first,
            second,
            relation,
        } => compare(first, second, *relation),
        Command::Enumerate {
            path,
            count_classes,
            check: _,
            budget,
            json,
        } => enumerate(path, *count_classes, *budget, *json),
        Command::StarRealize { sequence } => star_realize(sequence),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Negative(msg)) => {
            println!("{}", msg.trim_end());
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn enumerate_needs_a_mode() {
        assert!(Cli::try_parse_from(["morsetree", "enumerate", "t.json"]).is_err());
        assert!(Cli::try_parse_from(["morsetree", "enumerate", "t.json", "--check"]).is_ok());
        assert!(Cli::try_parse_from([
            "morsetree",
            "enumerate",
            "t.json",
            "--check",
            "--count-classes"
        ])
        .is_err());
    }
}
