use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::protocol::{Adversary, Context, Inbox, NodeId, Protocol};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::verdict::{Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fault {
    pub player: NodeId,
    pub adversary: Adversary,
}

/// One run of Byzantine agreement: who is faulty, how, and what the general
/// prefers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub n: usize,
    pub t: usize,
    #[serde(default)]
    pub general: NodeId,
    pub mediator: bool,
    #[serde(default)]
    pub faults: Vec<Fault>,
    pub preference: u8,
    /// Defaults to `2n` rounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub round_cap: Option<u32>,
}

impl Scenario {
    pub fn fault_free(n: usize, t: usize, mediator: bool, preference: u8) -> Self {
        Scenario {
            n,
            t,
            general: 0,
            mediator,
            faults: Vec::new(),
            preference,
            round_cap: None,
        }
    }

    pub fn with_faults(mut self, faults: impl IntoIterator<Item = (NodeId, Adversary)>) -> Self {
        self.faults = faults
            .into_iter()
            .map(|(player, adversary)| Fault { player, adversary })
            .collect();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::OutOfRange {
                name: "n",
                value: "0".into(),
                expected: "at least 1".into(),
            });
        }
        if self.general >= self.n {
            return Err(Error::UnknownPlayer(self.general.to_string()));
        }
        if self.preference > 1 {
            return Err(Error::OutOfRange {
                name: "preference",
                value: self.preference.to_string(),
                expected: "0 or 1".into(),
            });
        }
        if self.faults.len() > self.t {
            return Err(Error::InvalidGame(format!(
                "{} faulty players exceed t = {}",
                self.faults.len(),
                self.t
            )));
        }
        for (i, f) in self.faults.iter().enumerate() {
            if f.player >= self.n {
                return Err(Error::UnknownPlayer(f.player.to_string()));
            }
            if self.faults[..i].iter().any(|g| g.player == f.player) {
                return Err(Error::InvalidGame(format!(
                    "player {} is listed as faulty twice",
                    f.player
                )));
            }
        }
        if self.round_cap == Some(0) {
            return Err(Error::OutOfRange {
                name: "round_cap",
                value: "0".into(),
                expected: "at least 1".into(),
            });
        }
        Ok(())
    }

    pub fn adversary(&self, player: NodeId) -> Option<Adversary> {
        self.faults
            .iter()
            .find(|f| f.player == player)
            .map(|f| f.adversary)
    }

    pub fn is_faulty(&self, player: NodeId) -> bool {
        self.adversary(player).is_some()
    }

    pub fn round_cap(&self) -> u32 {
        self.round_cap.unwrap_or(2 * self.n as u32)
    }

    /// Short human-readable description, e.g. `pref=1 faults=[0:flip]`.
    pub fn label(&self) -> String {
        let faults: Vec<String> = self
            .faults
            .iter()
            .map(|f| format!("{}:{}", f.player, f.adversary))
            .collect();
        format!("pref={} faults=[{}]", self.preference, faults.join(","))
    }

    fn context(&self) -> Context {
        Context {
            n: self.n,
            general: self.general,
            mediator: self.mediator.then_some(self.n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub from: String,
    pub to: String,
    pub value: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundLog {
    pub round: u32,
    pub messages: Vec<Message>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub value: u8,
    pub round: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RunStatus {
    Completed,
    TimedOut { cap: u32 },
}

/// Everything that happened in one run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub protocol: String,
    pub status: RunStatus,
    pub rounds: Vec<RoundLog>,
    pub decisions: Vec<Option<Decision>>,
    pub utilities: Vec<Rational>,
}

impl Transcript {
    /// Rounds in which at least one message was sent.
    pub fn communication_rounds(&self) -> usize {
        self.rounds
            .iter()
            .filter(|r| !r.messages.is_empty())
            .count()
    }

    pub fn decision(&self, player: NodeId) -> Option<u8> {
        self.decisions[player].map(|d| d.value)
    }

    /// One line per message and decision, for witnesses and text reports.
    pub fn trace(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.rounds {
            for m in &r.messages {
                out.push(format!(
                    "round {}: {} -> {}: {}",
                    r.round, m.from, m.to, m.value
                ));
            }
            for (p, d) in self.decisions.iter().enumerate() {
                if let Some(d) = d.filter(|d| d.round == r.round) {
                    out.push(format!("round {}: player {p} decides {}", r.round, d.value));
                }
            }
        }
        if let RunStatus::TimedOut { cap } = self.status {
            out.push(format!("timed out after {cap} rounds"));
        }
        out
    }
}

/// Maps a finished run to per-player utilities.
pub type UtilityFn = dyn Fn(&Scenario, &Transcript) -> Vec<Rational>;

/// Every player gets 1 if the run satisfies agreement and validity, and 0
/// otherwise.
pub fn indicator_utility(scenario: &Scenario, transcript: &Transcript) -> Vec<Rational> {
    let v = if check_ba(transcript, scenario).holds {
        Rational::one()
    } else {
        Rational::zero()
    };
    vec![v; scenario.n]
}

fn node_name(ctx: &Context, id: NodeId) -> String {
    if Some(id) == ctx.mediator {
        "mediator".into()
    } else {
        id.to_string()
    }
}

/// Runs with the indicator utility.
pub fn run<P: Protocol>(scenario: &Scenario, protocol: &P) -> Result<Transcript> {
    run_with(scenario, protocol, &indicator_utility)
}

/// Runs synchronous rounds until every nonfaulty player has decided or the
/// round cap is reached (recorded as a timeout in the transcript).
pub fn run_with<P: Protocol>(
    scenario: &Scenario,
    protocol: &P,
    utility: &UtilityFn,
) -> Result<Transcript> {
    scenario.validate()?;
    if protocol.uses_mediator() && !scenario.mediator {
        return Err(Error::InvalidGame(format!(
            "protocol {:?} needs a mediator",
            protocol.name()
        )));
    }
    let ctx = scenario.context();
    let nodes = ctx.n + usize::from(ctx.mediator.is_some());
    let mut states: Vec<P::State> = (0..nodes)
        .map(|id| {
            let pref = (id == ctx.general).then_some(scenario.preference);
            protocol.init(&ctx, id, pref)
        })
        .collect();
    let adversaries: Vec<Option<Adversary>> = (0..nodes)
        .map(|id| {
            if id < ctx.n {
                scenario.adversary(id)
            } else {
                None
            }
        })
        .collect();
    let mut inboxes: Vec<Inbox> = vec![Inbox::new(); nodes];
    let mut decisions: Vec<Option<Decision>> = vec![None; ctx.n];
    let mut rounds = Vec::new();
    let cap = scenario.round_cap();
    let all_decided =
        |d: &[Option<Decision>]| (0..ctx.n).all(|p| d[p].is_some() || scenario.is_faulty(p));
    let mut status = RunStatus::TimedOut { cap };
    for round in 1..=cap {
        let mut next: Vec<Inbox> = vec![Inbox::new(); nodes];
        let mut log = Vec::new();
        for id in 0..nodes {
            let step = protocol.step(&ctx, round, id, &states[id], &inboxes[id]);
            states[id] = step.state;
            if id < ctx.n && decisions[id].is_none() {
                if let Some(v) = step.decision {
                    decisions[id] = Some(Decision { value: v, round });
                }
            }
            let outbox = match adversaries[id] {
                Some(a) => a.rewrite(&ctx, id, round, step.outbox),
                None => step.outbox,
            };
            for (to, v) in outbox {
                if to >= nodes || to == id {
                    continue;
                }
                next[to].insert(id, v);
                log.push(Message {
                    from: node_name(&ctx, id),
                    to: node_name(&ctx, to),
                    value: v,
                });
            }
        }
        rounds.push(RoundLog {
            round,
            messages: log,
        });
        inboxes = next;
        if all_decided(&decisions) {
            status = RunStatus::Completed;
            break;
        }
    }
    let mut transcript = Transcript {
        protocol: protocol.name().to_string(),
        status,
        rounds,
        decisions,
        utilities: Vec::new(),
    };
    transcript.utilities = utility(scenario, &transcript);
    if transcript.utilities.len() != scenario.n {
        return Err(Error::Dimension(format!(
            "utility rule returned {} values for {} players",
            transcript.utilities.len(),
            scenario.n
        )));
    }
    Ok(transcript)
}

/// Agreement among nonfaulty players and, when the general is nonfaulty,
/// validity. Undecided nonfaulty players give an `incomplete` witness.
pub fn check_ba(transcript: &Transcript, scenario: &Scenario) -> Verdict {
    let honest: Vec<NodeId> = (0..scenario.n)
        .filter(|&p| !scenario.is_faulty(p))
        .collect();
    let undecided: Vec<String> = honest
        .iter()
        .filter(|&&p| transcript.decisions.get(p).copied().flatten().is_none())
        .map(|p| p.to_string())
        .collect();
    if !undecided.is_empty() {
        return Verdict::fail(Witness::Incomplete { undecided });
    }
    let decided: BTreeMap<NodeId, u8> = honest
        .iter()
        .map(|&p| (p, transcript.decision(p).expect("checked above")))
        .collect();
    let mut it = decided.iter();
    if let Some((&first, &v)) = it.next() {
        if let Some((&other, &w)) = it.find(|(_, &w)| w != v) {
            return Verdict::fail(Witness::Disagreement {
                first: first.to_string(),
                first_decision: v,
                second: other.to_string(),
                second_decision: w,
            });
        }
    }
    if !scenario.is_faulty(scenario.general) {
        if let Some((&p, &v)) = decided.iter().find(|(_, &v)| v != scenario.preference) {
            return Verdict::fail(Witness::Validity {
                general_preference: scenario.preference,
                player: p.to_string(),
                decided: v,
            });
        }
    }
    Verdict::pass()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::protocol::{EchoFirst, MediatorRelay, SilentRelay};

    #[test]
    fn fault_free_mediator_run() {
        let s = Scenario::fault_free(4, 1, true, 1);
        let t = run(&s, &MediatorRelay).unwrap();
        assert_eq!(t.status, RunStatus::Completed);
        assert!(t.decisions.iter().all(|d| d.unwrap().value == 1));
        assert_eq!(t.communication_rounds(), 2);
        assert!(check_ba(&t, &s).holds);
        assert!(t.utilities.iter().all(Rational::is_one));
        let s0 = Scenario::fault_free(4, 1, true, 0);
        let t0 = run(&s0, &MediatorRelay).unwrap();
        assert!(check_ba(&t0, &s0).holds);
        assert_eq!(t0.decision(3), Some(0));
    }

    #[test]
    fn equivocating_general_still_yields_agreement() {
        let s = Scenario::fault_free(4, 1, true, 1).with_faults([(0, Adversary::Equivocate)]);
        let t = run(&s, &MediatorRelay).unwrap();
        let d: Vec<_> = (1..4).map(|p| t.decision(p)).collect();
        assert!(d.iter().all(|x| *x == d[0] && x.is_some()));
        assert!(check_ba(&t, &s).holds);
    }

    #[test]
    fn single_player_decides_own_preference() {
        let s = Scenario::fault_free(1, 0, true, 1);
        let t = run(&s, &MediatorRelay).unwrap();
        assert_eq!(t.decision(0), Some(1));
        assert_eq!(t.rounds.len(), 1);
    }

    #[test]
    fn runs_are_replayable() {
        let s = Scenario::fault_free(4, 1, false, 1).with_faults([(2, Adversary::Flip)]);
        assert_eq!(run(&s, &EchoFirst).unwrap(), run(&s, &EchoFirst).unwrap());
    }

    #[test]
    fn messages_arrive_next_round() {
        let s = Scenario::fault_free(3, 0, true, 1);
        let t = run(&s, &MediatorRelay).unwrap();
        assert_eq!(t.rounds[0].messages.len(), 1);
        assert_eq!(t.rounds[0].messages[0].to, "mediator");
        // Soldiers decide only after the relay from round 2 arrives.
        assert_eq!(t.decisions[1].unwrap().round, 3);
    }

    #[test]
    fn silent_relay_times_out() {
        let s = Scenario::fault_free(4, 1, true, 1);
        let t = run(&s, &SilentRelay).unwrap();
        assert_eq!(t.status, RunStatus::TimedOut { cap: 8 });
        let v = check_ba(&t, &s);
        assert!(matches!(v.witness, Some(Witness::Incomplete { .. })));
    }

    #[test]
    fn doctored_split_decisions_fail() {
        let s = Scenario::fault_free(4, 1, true, 0);
        let mut t = run(&s, &MediatorRelay).unwrap();
        t.decisions[2] = Some(Decision { value: 1, round: 3 });
        match check_ba(&t, &s).witness {
            Some(Witness::Disagreement { first, second, .. }) => {
                assert_eq!((first.as_str(), second.as_str()), ("0", "2"))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn faulty_general_makes_validity_vacuous() {
        let s = Scenario::fault_free(4, 1, true, 0).with_faults([(0, Adversary::Flip)]);
        let t = run(&s, &MediatorRelay).unwrap();
        assert!((1..4).all(|p| t.decision(p) == Some(1)));
        assert!(check_ba(&t, &s).holds);
    }

    #[test]
    fn scenario_validation() {
        let s = Scenario::fault_free(4, 0, true, 0).with_faults([(1, Adversary::Silent)]);
        assert!(s.validate().is_err());
        assert!(Scenario::fault_free(4, 1, true, 2).validate().is_err());
        assert!(run(&Scenario::fault_free(4, 1, false, 0), &MediatorRelay).is_err());
    }
}
