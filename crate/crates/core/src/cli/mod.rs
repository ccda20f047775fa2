//! The `dvlab` command line: one subcommand per pipeline stage, all sharing
//! one flat configuration schema.
//!
//! Every schema key is accepted as `--kebab-case` flag by every subcommand.
//! Precedence is built-in defaults, then `--config FILE`, then flags. Errors
//! end the process with a single machine-readable stderr line
//! `error: kind=<kind> code=<code> message="<text>"`.

mod artifacts;
mod commands;
pub mod config;

use clap::{parser::ValueSource, Arg, ArgAction, Command};

use crate::Error;
use config::{kebab, RunConfig, SCHEMA};

pub const SUBCOMMANDS: &[(&str, &str)] = &[
    ("ingest", "Read raw text and metadata into the corpus artifact"),
    ("vocab", "Count n-grams and write the vocabulary"),
    ("train-dv", "Train document and n-gram vectors"),
    ("nb-weights", "Fit NB log-ratio weights on labeled training documents"),
    ("bon", "Write NB-weighted bag-of-n-grams vectors"),
    ("train-clf", "Fit and score a logistic regression on one representation"),
    ("ensemble-eval", "Evaluate the concatenated ensemble under a shuffling scheme"),
    ("learning-curve", "Accuracy over training-set sizes"),
    ("progress-study", "Accuracy during training, with and without NB sub-sampling"),
    ("logit-analysis", "Split ensemble logits into dense and sparse parts"),
    ("plot", "Render an experiment CSV as SVG"),
    ("align", "Compare two document orders and classify the misalignment"),
    ("synth", "Write a small synthetic review corpus"),
];

pub fn command() -> Command {
    let mut root = Command::new("dvlab")
        .about("Document embeddings, NB-weighted n-grams and ensemble leakage audits")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true);
    for &(name, about) in SUBCOMMANDS {
        let mut sub = Command::new(name).about(about).arg(
            Arg::new("config")
                .long("config")
                .value_name("PATH")
                .help("Flat `key = value` configuration file"),
        );
        for k in SCHEMA {
            let help = if k.default.is_empty() {
                k.help.to_string()
            } else {
                format!("{} [default: {}]", k.help, k.default)
            };
            let mut arg = Arg::new(k.name)
                .long(kebab(k.name))
                .value_name("VALUE")
                .help(help)
                .action(ArgAction::Set);
            if k.boolean {
                arg = arg
                    .value_name("BOOL")
                    .num_args(0..=1)
                    .default_missing_value("true");
            }
            sub = sub.arg(arg);
        }
        root = root.subcommand(sub);
    }
    root
}

/// Process exit code of an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::UnknownTag { .. } => 2,
        Error::MissingDependency(_) => 3,
        Error::NonFinite(_) | Error::DegenerateInput(_) => 4,
        _ => 1,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Config(_) | Error::UnknownTag { .. } => "config",
        Error::MissingDependency(_) => "missing_dependency",
        Error::NonFinite(_) | Error::DegenerateInput(_) => "numeric",
        Error::Io { .. } => "io",
        Error::Parse { .. } => "parse",
        _ => "invalid_input",
    }
}

fn report(kind: &str, code: i32, message: &str) {
    let message = message.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', " ");
    eprintln!("error: kind={kind} code={code} message=\"{message}\"");
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                let _ = e.print();
                return 0;
            }
            if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                let _ = e.print();
                return 2;
            }
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            report("config", 2, first.trim_start_matches("error: "));
            return 2;
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let result = (|| {
        let mut cfg = RunConfig::default();
        if let Some(path) = sub.get_one::<String>("config") {
            cfg.apply_file(std::path::Path::new(path))
                .map_err(|e| match e {
                    Error::Io { .. } => Error::Config(e.to_string()),
                    other => other,
                })?;
        }
        for k in SCHEMA {
            if sub.value_source(k.name) == Some(ValueSource::CommandLine) {
                if let Some(v) = sub.get_one::<String>(k.name) {
                    cfg.set(k.name, v)?;
                }
            }
        }
        commands::dispatch(name, &cfg)
    })();
    match result {
        Ok(()) => 0,
        Err(e) => {
            let code = exit_code(&e);
            report(error_kind(&e), code, &e.to_string());
            code
        }
    }
}

/// Entry point of the binary.
pub fn main() -> i32 {
    run(std::env::args_os())
}
