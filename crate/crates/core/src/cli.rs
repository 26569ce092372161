//! Command-line front end. [`dispatch`] parses arguments, runs one command
//! and returns a [`Report`] plus the process exit code:
//!
//! | code | meaning                                   |
//! |------|-------------------------------------------|
//! | 0    | the check holds, or the command succeeded |
//! | 1    | the check fails                           |
//! | 2    | usage or input error                      |
//! | 3    | a resource bound was exceeded             |

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::awareness::{find_pure_generalized_nash, is_generalized_nash_with, validate};
use crate::error::Error;
use crate::format::{
    parse, CompGameBody, FormatError, GameDocument, GeneralizedProfileBody, MachineProfileBody,
    ProtocolName, FORMAT_VERSION,
};
use crate::game::{is_bayes_nash, is_nash, Limits};
use crate::machine::{
    exhaustive_machine_equilibria, frpd_equilibrium_threshold, is_machine_nash, run_automata,
    trajectory, ComputationalGame,
};
use crate::rational::Rational;
use crate::robust::{check_robust, enumerate_pure_robust, RobustnessQuery, Semantics};
use crate::sim::{
    check_ba, empirical_immunity, indicator_utility, run, sweep, Adversary, EchoFirst,
    MediatorRelay, Protocol, SilentRelay,
};
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Fails,
    Ok,
    UsageError,
    BoundExceeded,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Holds | Status::Ok => 0,
            Status::Fails => 1,
            Status::UsageError => 2,
            Status::BoundExceeded => 3,
        }
    }
}

/// What a command produced. The JSON form is the machine-readable report;
/// the text form is rendered from it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub format: u32,
    pub command: Vec<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Help or version text, printed verbatim instead of the report.
    #[serde(skip)]
    pub usage: Option<String>,
    #[serde(skip)]
    pub output: OutputFormat,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn render(&self) -> String {
        if let Some(u) = &self.usage {
            return u.clone();
        }
        match self.output {
            OutputFormat::Json => {
                let v = serde_json::to_value(self).expect("reports serialize");
                let mut s = String::new();
                crate::format::write_canonical(&v, 0, &mut s);
                s.push('\n');
                s
            }
            OutputFormat::Text => {
                let mut out = String::new();
                let v = serde_json::to_value(self).expect("reports serialize");
                render_text(&v, 0, &mut out);
                out
            }
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => Some(
            a.iter()
                .map(|x| scalar(x).unwrap_or_default())
                .collect::<Vec<_>>()
                .join(", "),
        ),
        Value::Array(_) | Value::Object(_) => None,
        other => Some(other.to_string()),
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text(x, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "eqcheck",
    version,
    about = "Exact checkers for robust, computational and awareness-based equilibria"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json, alias = "report")]
    format: OutputFormat,

    /// Maximum number of elementary evaluations a query may perform.
    #[arg(long, global = true, value_name = "N")]
    work_bound: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a profile of a normal-form or Bayesian game.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Enumerate pure profiles with a property.
    #[command(subcommand)]
    Enumerate(EnumerateCmd),
    /// Computational games whose strategies are machines.
    #[command(subcommand)]
    Compgame(CompgameCmd),
    /// Finitely repeated games played by automata.
    #[command(subcommand)]
    Repeated(RepeatedCmd),
    /// Games with awareness.
    #[command(subcommand)]
    Aware(AwareCmd),
    /// Byzantine agreement simulation.
    #[command(subcommand)]
    Simulate(SimulateCmd),
}

fn rational(s: &str) -> Result<Rational, String> {
    s.parse()
        .map_err(|e: crate::rational::ParseRationalError| e.to_string())
}

#[derive(Debug, Args)]
struct NashArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    profile: PathBuf,
    #[arg(long, value_parser = rational, default_value = "0")]
    epsilon: Rational,
}

#[derive(Debug, Args)]
struct RobustArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    profile: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    t: usize,
    #[arg(long, default_value = "strong")]
    semantics: Semantics,
    #[arg(long, value_parser = rational, default_value = "0")]
    epsilon: Rational,
}

#[derive(Debug, Subcommand)]
enum CheckCmd {
    /// Nash equilibrium of a normal-form game.
    Nash(NashArgs),
    /// (k,t)-robustness of a normal-form game profile.
    Robust(RobustArgs),
    /// Bayesian Nash equilibrium.
    BayesNash(NashArgs),
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    t: usize,
    #[arg(long, default_value = "strong")]
    semantics: Semantics,
    #[arg(long, value_parser = rational, default_value = "0")]
    epsilon: Rational,
}

#[derive(Debug, Subcommand)]
enum EnumerateCmd {
    /// Every (k,t)-robust pure profile.
    PureRobust(EnumerateArgs),
}

#[derive(Debug, Subcommand)]
enum CompgameCmd {
    /// Is a machine profile a machine equilibrium?
    Check(NashArgs),
    /// Every pure machine equilibrium.
    Enumerate {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, value_parser = rational, default_value = "0")]
        epsilon: Rational,
    },
}

#[derive(Debug, Subcommand)]
enum RepeatedCmd {
    /// Play two automata from the repeated-game file's space against each other.
    Run {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        m1: String,
        #[arg(long)]
        m2: String,
    },
    /// Smallest horizon at which (TfT, TfT) is a machine equilibrium.
    Threshold {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        nmax: u32,
    },
}

#[derive(Debug, Subcommand)]
enum AwareCmd {
    /// Check the consistency conditions of a game with awareness.
    Validate {
        #[arg(long)]
        game: PathBuf,
    },
    /// Is a generalized profile a generalized Nash equilibrium?
    Check(NashArgs),
    /// Every pure generalized Nash equilibrium.
    Find {
        #[arg(long)]
        game: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum SimulateCmd {
    /// Sweep every fault assignment and check agreement and immunity.
    Ba {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        /// Comma-separated adversaries (crash, crash(R), flip, equivocate,
        /// silent); defaults to crash, flip, equivocate, silent.
        #[arg(long)]
        adversaries: Option<String>,
        #[arg(long, default_value = "mediator")]
        protocol: ProtocolName,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run one scenario file.
    Run {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Usage(String),
    Bound(String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        if e.is_resource_bound() {
            Failure::Bound(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        FormatError::from(e).into()
    }
}

type Outcome = Result<(Status, Value), Failure>;

fn load(path: &Path) -> Result<GameDocument, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn verdict(v: Verdict) -> (Status, Value) {
    let status = if v.holds {
        Status::Holds
    } else {
        Status::Fails
    };
    (status, to_value(&v))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

/// Runs one command line. `argv[0]` is the program name.
pub fn dispatch<I, T>(argv: I) -> (Report, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let command: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let mut report = Report {
        format: FORMAT_VERSION,
        command,
        status: Status::Ok,
        result: Value::Null,
        error: None,
        usage: None,
        output: OutputFormat::Json,
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let help = matches!(
                e.kind(),
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            );
            report.status = if shown {
                Status::Ok
            } else {
                Status::UsageError
            };
            report.usage = Some(e.render().to_string());
            if !shown && !help {
                report.error = Some(e.kind().to_string());
            }
            let code = report.exit_code();
            return (report, code);
        }
    };
    report.output = cli.format;
    let mut limits = Limits::default();
    if let Some(w) = cli.work_bound {
        limits.max_work = w;
    }
    match execute(cli.command, &limits) {
        Ok((status, result)) => {
            report.status = status;
            report.result = result;
        }
        Err(Failure::Usage(m)) => {
            report.status = Status::UsageError;
            report.error = Some(m);
        }
        Err(Failure::Bound(m)) => {
            report.status = Status::BoundExceeded;
            report.error = Some(m);
        }
    }
    let code = report.exit_code();
    (report, code)
}

fn execute(command: Command, limits: &Limits) -> Outcome {
    match command {
        Command::Check(c) => check(c, limits),
        Command::Enumerate(EnumerateCmd::PureRobust(a)) => {
            let game = load(&a.game)?.into_normal_form()?.to_game(limits)?;
            let query = RobustnessQuery::new(a.k, a.t)
                .with_semantics(a.semantics)
                .with_epsilon(a.epsilon)
                .with_limits(*limits);
            let profiles: Vec<Vec<String>> = enumerate_pure_robust(&game, &query)?
                .iter()
                .map(|p| game.action_names(p))
                .collect();
            Ok((
                Status::Ok,
                json!({ "k": a.k, "t": a.t, "count": profiles.len(), "profiles": profiles }),
            ))
        }
        Command::Compgame(c) => compgame(c, limits),
        Command::Repeated(c) => repeated(c, limits),
        Command::Aware(c) => aware(c, limits),
        Command::Simulate(c) => simulate(c, limits),
    }
}

fn check(c: CheckCmd, limits: &Limits) -> Outcome {
    match c {
        CheckCmd::Nash(a) => {
            let game = load(&a.game)?.into_normal_form()?.to_game(limits)?;
            let profile = load(&a.profile)?.into_profile()?.to_mixed(&game)?;
            Ok(verdict(is_nash(&game, &profile, &a.epsilon)?))
        }
        CheckCmd::Robust(a) => {
            let game = load(&a.game)?.into_normal_form()?.to_game(limits)?;
            let profile = load(&a.profile)?.into_profile()?.to_mixed(&game)?;
            let query = RobustnessQuery::new(a.k, a.t)
                .with_semantics(a.semantics)
                .with_epsilon(a.epsilon)
                .with_limits(*limits);
            Ok(verdict(check_robust(&game, &profile, &query)?))
        }
        CheckCmd::BayesNash(a) => {
            let game = load(&a.game)?.into_bayesian()?.to_game(limits)?;
            let profile = load(&a.profile)?
                .into_bayesian_profile()?
                .to_profile(&game)?;
            Ok(verdict(is_bayes_nash(&game, &profile, &a.epsilon)?))
        }
    }
}

/// A computational game from either a `compgame` or a `repeated-spec`
/// document (the latter with both players charged).
fn load_compgame(path: &Path, limits: &Limits) -> Result<ComputationalGame, Failure> {
    let body = match load(path)? {
        GameDocument::RepeatedSpec(spec) => CompGameBody::Repeated {
            spec,
            charged: [true, true],
        },
        other => other.into_compgame()?,
    };
    Ok(body.to_game(limits)?)
}

fn compgame(c: CompgameCmd, limits: &Limits) -> Outcome {
    match c {
        CompgameCmd::Check(a) => {
            let game = load_compgame(&a.game, limits)?;
            let profile = load(&a.profile)?
                .into_machine_profile()?
                .to_profile(&game)?;
            Ok(verdict(is_machine_nash(&game, &profile, &a.epsilon)?))
        }
        CompgameCmd::Enumerate { game, epsilon } => {
            let game = load_compgame(&game, limits)?;
            let found: Vec<Value> = exhaustive_machine_equilibria(&game, &epsilon, limits)?
                .iter()
                .map(|p| to_value(&MachineProfileBody::from_profile(&game, p).machines))
                .collect();
            Ok((
                Status::Ok,
                json!({ "count": found.len(), "equilibria": found }),
            ))
        }
    }
}

fn repeated(c: RepeatedCmd, limits: &Limits) -> Outcome {
    match c {
        RepeatedCmd::Run { spec, m1, m2 } => {
            let body = load(&spec)?.into_repeated_spec()?;
            let spec = body.to_spec(limits)?;
            let pick = |player: usize, id: &str| -> Result<_, Failure> {
                let space = body.automata(&spec, player)?;
                space.into_iter().find(|m| m.id() == id).ok_or_else(|| {
                    Failure::Usage(
                        Error::MachineNotInSpace {
                            player: spec.stage().player_name(player).to_string(),
                            machine: id.to_string(),
                        }
                        .to_string(),
                    )
                })
            };
            let (a, b) = (pick(0, &m1)?, pick(1, &m2)?);
            let stage = spec.stage();
            let rounds: Vec<[&str; 2]> = trajectory(&spec, &a, &b)?
                .into_iter()
                .map(|(x, y)| [stage.actions(0)[x].as_str(), stage.actions(1)[y].as_str()])
                .collect();
            let (u1, u2) = run_automata(&spec, &a, &b)?;
            let charges = [
                spec.memory_charge(a.num_states()),
                spec.memory_charge(b.num_states()),
            ];
            let net = [&u1 - &charges[0], &u2 - &charges[1]];
            Ok((
                Status::Ok,
                json!({
                    "m1": m1,
                    "m2": m2,
                    "rounds": rounds,
                    "discounted": [u1, u2],
                    "memory_charge": charges,
                    "utilities": net,
                }),
            ))
        }
        RepeatedCmd::Threshold { spec, nmax } => {
            let body = load(&spec)?.into_repeated_spec()?;
            let space = body.standard_space()?;
            let spec = body.to_spec(limits)?;
            let r = frpd_equilibrium_threshold(&spec, &space, nmax)?;
            let show = |n: Option<u32>| n.map_or("none".to_string(), |n| n.to_string());
            Ok((
                Status::Ok,
                json!({
                    "nmax": nmax,
                    "threshold": show(r.symmetric),
                    "asymmetric_threshold": show(r.asymmetric),
                    "scan": r.scan,
                }),
            ))
        }
    }
}

fn aware(c: AwareCmd, limits: &Limits) -> Outcome {
    match c {
        AwareCmd::Validate { game } => {
            let g = load(&game)?.into_awareness()?.to_gwa(limits)?;
            Ok(verdict(validate(&g)))
        }
        AwareCmd::Check(a) => {
            let g = load(&a.game)?.into_awareness()?.to_gwa(limits)?;
            let profile = load(&a.profile)?.into_generalized_profile()?.to_profile()?;
            Ok(verdict(is_generalized_nash_with(
                &g, &profile, &a.epsilon, limits,
            )?))
        }
        AwareCmd::Find { game } => {
            let g = load(&game)?.into_awareness()?.to_gwa(limits)?;
            let found: Vec<Value> = find_pure_generalized_nash(&g, limits)?
                .iter()
                .map(|p| to_value(&GeneralizedProfileBody::from_profile(p).strategies))
                .collect();
            Ok((
                Status::Ok,
                json!({ "count": found.len(), "equilibria": found }),
            ))
        }
    }
}

fn parse_library(list: Option<&str>) -> Result<Vec<Adversary>, Failure> {
    match list {
        None => Ok(Adversary::library()),
        Some(s) => {
            let mut out = Vec::new();
            // Split on commas outside parentheses.
            let mut depth = 0;
            let mut start = 0;
            for (i, ch) in s.char_indices() {
                match ch {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    ',' if depth == 0 => {
                        out.push(s[start..i].parse()?);
                        start = i + 1;
                    }
                    _ => {}
                }
            }
            out.push(s[start..].parse()?);
            Ok(out)
        }
    }
}

fn ba_sweep<P: Protocol>(
    n: usize,
    t: usize,
    protocol: &P,
    library: &[Adversary],
    seed: u64,
    limits: &Limits,
) -> Outcome {
    let report = sweep(n, t, protocol, library, limits)?;
    let immunity = empirical_immunity(n, t, protocol, library, &indicator_utility, limits)?;
    let holds = report.all_hold() && immunity.holds;
    Ok((
        if holds { Status::Holds } else { Status::Fails },
        json!({
            "seed": seed,
            "adversaries": library.iter().map(Adversary::to_string).collect::<Vec<_>>(),
            "sweep": report,
            "immunity": immunity,
        }),
    ))
}

fn ba_run<P: Protocol>(scenario: &crate::sim::Scenario, protocol: &P, seed: u64) -> Outcome {
    let transcript = run(scenario, protocol)?;
    let v = check_ba(&transcript, scenario);
    let status = if v.holds {
        Status::Holds
    } else {
        Status::Fails
    };
    Ok((
        status,
        json!({
            "seed": seed,
            "scenario": scenario.label(),
            "transcript": transcript,
            "trace": transcript.trace(),
            "verdict": v,
        }),
    ))
}

fn simulate(c: SimulateCmd, limits: &Limits) -> Outcome {
    match c {
        SimulateCmd::Ba {
            n,
            t,
            adversaries,
            protocol,
            seed,
        } => {
            let library = parse_library(adversaries.as_deref())?;
            match protocol {
                ProtocolName::Mediator => ba_sweep(n, t, &MediatorRelay, &library, seed, limits),
                ProtocolName::EchoFirst => ba_sweep(n, t, &EchoFirst, &library, seed, limits),
                ProtocolName::SilentMediator => {
                    ba_sweep(n, t, &SilentRelay, &library, seed, limits)
                }
            }
        }
        SimulateCmd::Run { game, seed } => {
            let body = load(&game)?.into_scenario()?;
            body.validate()?;
            match body.protocol {
                ProtocolName::Mediator => ba_run(&body.scenario, &MediatorRelay, seed),
                ProtocolName::EchoFirst => ba_run(&body.scenario, &EchoFirst, seed),
                ProtocolName::SilentMediator => ba_run(&body.scenario, &SilentRelay, seed),
            }
        }
    }
}
