//! `wcausal`: check, solve and analyse causal theories.

mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wcausal::analysis::{causes, explain_observation, AnalysisConfig};
use wcausal::ground::Bounds;
use wcausal::model::{name, CausalTheory, ExtendedAtom, Name};
use wcausal::parser::{parse_change_pattern, parse_observation, parse_theory, ParseError};
use wcausal::solver::{is_deterministic, solve_all, SolveError, SolverConfig};
use wcausal::Error;

use report::{Format, Out};

#[derive(Parser)]
#[command(name = "wcausal", version, about = "Causal theories: checking, answer sets and actual causes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate theory files.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Print the answer sets under each interpretation.
    Models {
        file: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Check that every interpretation has exactly one answer set.
    Deterministic {
        file: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Causes of the changes matching a pattern such as `broken` or
    /// `arrived(dest)`.
    Causes {
        file: PathBuf,
        pattern: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// Explain an unexpected observation. An observation given here
    /// replaces those of the scenario; otherwise the scenario's last
    /// observation is explained.
    Explain {
        file: PathBuf,
        obs: Option<String>,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Args, Clone)]
struct Opts {
    /// Additional scenario file, appended to the theory.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    horizon: u32,
    #[arg(long, default_value_t = 4)]
    duration_cap: u32,
    /// Fixed values of abstract constants: `t1=0,d1=2`.
    #[arg(long, value_delimiter = ',')]
    gamma: Vec<String>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Print the ground program of each interpretation.
    #[arg(long)]
    dump_ground: bool,
    /// Print the answer sets of each interpretation.
    #[arg(long)]
    dump_models: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

enum Failure {
    Validation(String),
    Io(String),
    Semantic(String),
    Resource(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Io(_) => 2,
            Failure::Semantic(_) => 3,
            Failure::Resource(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Io(m) | Failure::Semantic(m) | Failure::Resource(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Solve(SolveError::ResourceLimit { .. }) | Error::ProofLimit(_) => Failure::Resource(e.to_string()),
            Error::NoInterpretation(_) => Failure::Semantic(format!("no answer sets: {e}")),
            e => Failure::Semantic(e.to_string()),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn parse_errors(path: &std::path::Path, errs: &[ParseError]) -> Failure {
    let lines: Vec<String> = errs.iter().map(|e| format!("{}:{e}", path.display())).collect();
    Failure::Validation(lines.join("\n"))
}

fn load(file: &PathBuf, opts: &Opts) -> Result<CausalTheory, Failure> {
    let mut text = read(file)?;
    if let Some(s) = &opts.scenario {
        text.push('\n');
        text.push_str(&read(s)?);
    }
    parse_theory(&text).map_err(|e| parse_errors(file, &e))
}

fn config(theory: &CausalTheory, opts: &Opts) -> Result<AnalysisConfig, Failure> {
    let sig = theory.full_signature();
    let declared = theory.scenario.abstract_constants(&sig);
    let mut pinned: BTreeMap<Name, u32> = BTreeMap::new();
    for kv in opts.gamma.iter().filter(|s| !s.trim().is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Failure::Validation(format!("--gamma: expected `name=value`, got `{kv}`")))?;
        let k = k.trim().trim_start_matches('#');
        let v: u32 =
            v.trim().parse().map_err(|_| Failure::Validation(format!("--gamma: `{v}` is not a natural number")))?;
        if !declared.iter().any(|(c, _)| &**c == k) {
            return Err(Failure::Validation(format!("--gamma: `{k}` is not an abstract constant of the scenario")));
        }
        pinned.insert(name(k), v);
    }
    Ok(AnalysisConfig {
        bounds: Bounds { horizon: opts.horizon, duration_cap: opts.duration_cap },
        pinned,
        solver: SolverConfig::from_env(),
        ..AnalysisConfig::default()
    })
}

fn out(opts: &Opts, command: &str, file: &std::path::Path) -> Out {
    let format = match opts.format {
        FormatArg::Text => Format::Text,
        FormatArg::Structured => Format::Structured,
    };
    Out::new(format, command, &file.display().to_string())
}

fn dumps(o: &mut Out, theory: &CausalTheory, cfg: &AnalysisConfig, opts: &Opts) -> Result<(), Failure> {
    if opts.dump_ground || opts.dump_models {
        let all = solve_all(theory, cfg.bounds, &cfg.pinned, &cfg.solver)?;
        o.dumps(&all, opts.dump_ground, opts.dump_models);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Check { files } => {
            let mut o = Out::new(Format::Text, "check", "");
            for f in &files {
                let text = read(f)?;
                parse_theory(&text).map_err(|e| parse_errors(f, &e))?;
                o.line(&format!("{}: ok", f.display()));
            }
            Ok(o.finish())
        }
        Command::Models { file, opts } => {
            let theory = load(&file, &opts)?;
            let cfg = config(&theory, &opts)?;
            let all = solve_all(&theory, cfg.bounds, &cfg.pinned, &cfg.solver)?;
            let mut o = out(&opts, "models", &file);
            o.models(&theory, &cfg, &all, opts.dump_ground);
            Ok(o.finish())
        }
        Command::Deterministic { file, opts } => {
            let theory = load(&file, &opts)?;
            let cfg = config(&theory, &opts)?;
            let verdict = is_deterministic(&theory, cfg.bounds, &cfg.pinned, &cfg.solver)?;
            let mut o = out(&opts, "deterministic", &file);
            o.determinism(&cfg, &verdict);
            let text = o.finish();
            match verdict {
                wcausal::solver::Determinism::Deterministic { .. } => Ok(text),
                wcausal::solver::Determinism::NotDeterministic { .. } => {
                    print!("{text}");
                    Err(Failure::Semantic("theory is not deterministic".into()))
                }
            }
        }
        Command::Causes { file, pattern, opts } => {
            let theory = load(&file, &opts)?;
            let cfg = config(&theory, &opts)?;
            let pat = parse_change_pattern(&pattern, &theory.full_signature())
                .map_err(|e| Failure::Validation(format!("pattern: {e}")))?;
            let report = causes(&theory, &pat, &cfg)?;
            let mut o = out(&opts, "causes", &file);
            o.causes(&cfg, &report);
            dumps(&mut o, &theory, &cfg, &opts)?;
            Ok(o.finish())
        }
        Command::Explain { file, obs, opts } => {
            let mut theory = load(&file, &opts)?;
            let cfg = config(&theory, &opts)?;
            if let Some(text) = obs {
                let atom = parse_observation(&text, &theory.full_signature())
                    .map_err(|e| parse_errors(std::path::Path::new("observation"), &e))?;
                theory.scenario.events.retain(|e| !matches!(e, ExtendedAtom::Obs { .. }));
                theory.scenario.events.push(atom);
            }
            let mut o = out(&opts, "explain", &file);
            match explain_observation(&theory, &cfg) {
                Ok(reports) => o.explanations(&cfg, &reports),
                Err(Error::NotUnexpected(why)) => o.not_unexpected(&why),
                Err(e) => return Err(e.into()),
            }
            dumps(&mut o, &theory, &cfg, &opts)?;
            Ok(o.finish())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
