//! A synchronous round-based simulator for Byzantine agreement, with and
//! without a trusted mediator, and an empirical immunity check against a
//! finite library of faulty behaviors.

mod protocol;
mod run;
mod sweep;

pub use protocol::{
    Adversary, BaState, Context, EchoFirst, Inbox, MediatorRelay, NodeId, Outbox, Protocol,
    SilentRelay, Step,
};
pub use run::{
    check_ba, indicator_utility, run, run_with, Decision, Fault, Message, RoundLog, RunStatus,
    Scenario, Transcript, UtilityFn,
};
pub use sweep::{
    ba_bayesian_game, empirical_immunity, induced_game, scenarios, sweep, ScenarioOutcome,
    SweepReport, FOLLOW,
};
