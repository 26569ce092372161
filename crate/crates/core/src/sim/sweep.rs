use serde::Serialize;

use super::protocol::{Adversary, NodeId, Protocol};
use super::run::{check_ba, indicator_utility, run_with, RunStatus, Scenario, UtilityFn};
use crate::error::Result;
use crate::game::{subsets_up_to, BayesianGame, Limits, NormalFormGame, Odometer};
use crate::rational::Rational;
use crate::verdict::{Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioOutcome {
    pub scenario: String,
    pub holds: bool,
    pub timed_out: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub protocol: String,
    pub n: usize,
    pub t: usize,
    pub total: usize,
    pub passed: usize,
    pub timeouts: usize,
    pub outcomes: Vec<ScenarioOutcome>,
}

impl SweepReport {
    pub fn all_hold(&self) -> bool {
        self.passed == self.total
    }
}

/// Every scenario with at most `t` faulty players, each assigned an
/// adversary from `library`, for both general preferences. Ordered by
/// preference, then fault-set size and members, then adversary assignment.
pub fn scenarios(
    n: usize,
    t: usize,
    mediator: bool,
    library: &[Adversary],
    limits: &Limits,
) -> Result<Vec<Scenario>> {
    let sets: Vec<Vec<NodeId>> = std::iter::once(Vec::new())
        .chain(subsets_up_to(n, t))
        .collect();
    let count: u128 = sets
        .iter()
        .map(|s| (library.len() as u128).saturating_pow(s.len() as u32))
        .fold(0u128, u128::saturating_add)
        .saturating_mul(2);
    let rounds = 2 * n as u128;
    limits.check_work(
        "simulation sweep",
        count
            .saturating_mul(rounds)
            .saturating_mul((n as u128 + 1).pow(2)),
    )?;
    let mut out = Vec::new();
    for preference in 0..=1 {
        for set in &sets {
            for pick in Odometer::new(&vec![library.len(); set.len()]) {
                out.push(
                    Scenario::fault_free(n, t, mediator, preference)
                        .with_faults(set.iter().zip(&pick).map(|(&p, &a)| (p, library[a]))),
                );
            }
        }
    }
    Ok(out)
}

/// Runs every scenario and checks agreement and validity in each.
pub fn sweep<P: Protocol>(
    n: usize,
    t: usize,
    protocol: &P,
    library: &[Adversary],
    limits: &Limits,
) -> Result<SweepReport> {
    let mut outcomes = Vec::new();
    for s in scenarios(n, t, protocol.uses_mediator(), library, limits)? {
        let transcript = run_with(&s, protocol, &indicator_utility)?;
        let v = check_ba(&transcript, &s);
        outcomes.push(ScenarioOutcome {
            scenario: s.label(),
            holds: v.holds,
            timed_out: matches!(transcript.status, RunStatus::TimedOut { .. }),
            witness: v.witness,
        });
    }
    Ok(SweepReport {
        protocol: protocol.name().to_string(),
        n,
        t,
        total: outcomes.len(),
        passed: outcomes.iter().filter(|o| o.holds).count(),
        timeouts: outcomes.iter().filter(|o| o.timed_out).count(),
        outcomes,
    })
}

/// Holds iff, in every swept scenario, every nonfaulty player's utility is
/// at least what it gets in the fault-free run with the same preference.
/// The witness is the first harmed player, with the run's trace.
pub fn empirical_immunity<P: Protocol>(
    n: usize,
    t: usize,
    protocol: &P,
    library: &[Adversary],
    utility: &UtilityFn,
    limits: &Limits,
) -> Result<Verdict> {
    let mediator = protocol.uses_mediator();
    let baseline: Vec<Vec<Rational>> = (0..=1)
        .map(|pref| {
            run_with(
                &Scenario::fault_free(n, t, mediator, pref),
                protocol,
                utility,
            )
            .map(|tr| tr.utilities)
        })
        .collect::<Result<_>>()?;
    for s in scenarios(n, t, mediator, library, limits)? {
        if s.faults.is_empty() {
            continue;
        }
        let transcript = run_with(&s, protocol, utility)?;
        let base = &baseline[s.preference as usize];
        for p in (0..n).filter(|&p| !s.is_faulty(p)) {
            if transcript.utilities[p] < base[p] {
                return Ok(Verdict::fail(Witness::HarmedPlayer {
                    scenario: s.label(),
                    player: p.to_string(),
                    baseline: base[p].clone(),
                    actual: transcript.utilities[p].clone(),
                    trace: transcript.trace(),
                }));
            }
        }
    }
    Ok(Verdict::pass())
}

pub const FOLLOW: &str = "follow";

fn action_labels(library: &[Adversary]) -> Vec<String> {
    std::iter::once(FOLLOW.to_string())
        .chain(library.iter().map(Adversary::to_string))
        .collect()
}

fn run_profile<P: Protocol>(
    n: usize,
    protocol: &P,
    library: &[Adversary],
    preference: u8,
    actions: &[usize],
    utility: &UtilityFn,
) -> Result<Vec<Rational>> {
    let faults = actions
        .iter()
        .enumerate()
        .filter(|(_, &a)| a > 0)
        .map(|(p, &a)| (p, library[a - 1]));
    let s = Scenario::fault_free(n, n, protocol.uses_mediator(), preference).with_faults(faults);
    Ok(run_with(&s, protocol, utility)?.utilities)
}

/// The normal-form game in which each player either follows the protocol
/// (action `follow`, index 0) or behaves as one of the adversaries.
pub fn induced_game<P: Protocol>(
    n: usize,
    protocol: &P,
    library: &[Adversary],
    preference: u8,
    utility: &UtilityFn,
) -> Result<NormalFormGame> {
    let players: Vec<String> = (0..n).map(|p| p.to_string()).collect();
    let actions = vec![action_labels(library); n];
    let sizes = vec![library.len() + 1; n];
    let mut table = Vec::new();
    for p in Odometer::new(&sizes) {
        table.push(run_profile(n, protocol, library, preference, &p, utility)?);
    }
    NormalFormGame::new(players, actions, table)
}

/// The Bayesian game whose only private information is the general's
/// preference (types `"0"` and `"1"`, equally likely); soldiers have the
/// single type `"-"`. Actions are as in [`induced_game`].
pub fn ba_bayesian_game<P: Protocol>(
    n: usize,
    protocol: &P,
    library: &[Adversary],
    utility: &UtilityFn,
) -> Result<BayesianGame> {
    let players: Vec<String> = (0..n).map(|p| p.to_string()).collect();
    let types: Vec<Vec<String>> = (0..n)
        .map(|p| {
            if p == 0 {
                vec!["0".into(), "1".into()]
            } else {
                vec!["-".into()]
            }
        })
        .collect();
    let mut err = None;
    let game = BayesianGame::from_fn(
        players,
        types,
        vec![action_labels(library); n],
        |t| {
            if t[0] < 2 {
                Rational::new(1, 2)
            } else {
                Rational::zero()
            }
        },
        |t, a| match run_profile(n, protocol, library, t[0] as u8, a, utility) {
            Ok(u) => u,
            Err(e) => {
                err.get_or_insert(e);
                vec![Rational::zero(); n]
            }
        },
    );
    match err {
        Some(e) => Err(e),
        None => game,
    }
}
