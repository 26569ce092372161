//! Pass/fail results with concrete counterexamples.
//!
//! Every checker in the crate returns a [`Verdict`]. A failing verdict always
//! carries a [`Witness`] whose payoffs can be recomputed from the game it was
//! produced on, so a verdict can be audited without trusting the checker.

use serde::Serialize;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sub_verdicts: Vec<SubVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubVerdict {
    pub name: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberPayoff {
    pub player: String,
    pub before: Rational,
    pub after: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// One player switches to a pure action and strictly gains.
    UnilateralDeviation {
        player: String,
        action: String,
        before: Rational,
        after: Rational,
    },
    /// Some types of one player switch to pure actions (`switches` lists
    /// `(type, action)` pairs; other types keep their strategy) and the
    /// player's ex-ante utility strictly rises.
    TypeDeviation {
        player: String,
        switches: Vec<(String, String)>,
        before: Rational,
        after: Rational,
    },
    /// A coalition plays a joint pure action; `payoffs` lists every member.
    CoalitionDeviation {
        coalition: Vec<String>,
        actions: Vec<String>,
        payoffs: Vec<MemberPayoff>,
    },
    /// Deviators play a joint pure action and a non-deviator loses.
    Harm {
        deviators: Vec<String>,
        actions: Vec<String>,
        victim: String,
        before: Rational,
        after: Rational,
    },
    MachineDeviation {
        player: String,
        from: String,
        to: String,
        before: Rational,
        after: Rational,
    },
    /// A player's subjective strategy in one augmented game is replaced by a
    /// pure alternative (`strategy` lists `(information set, move)` pairs).
    StrategyDeviation {
        player: String,
        game: String,
        strategy: Vec<(String, String)>,
        before: Rational,
        after: Rational,
    },
    Inconsistency {
        condition: String,
        game: String,
        node: String,
        detail: String,
    },
    Disagreement {
        first: String,
        first_decision: u8,
        second: String,
        second_decision: u8,
    },
    Validity {
        general_preference: u8,
        player: String,
        decided: u8,
    },
    Incomplete {
        undecided: Vec<String>,
    },
    /// A simulated scenario in which a nonfaulty player ends below its
    /// fault-free baseline.
    HarmedPlayer {
        scenario: String,
        player: String,
        baseline: Rational,
        actual: Rational,
        trace: Vec<String>,
    },
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict {
            holds: true,
            witness: None,
            sub_verdicts: Vec::new(),
        }
    }

    pub fn fail(witness: Witness) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness),
            sub_verdicts: Vec::new(),
        }
    }

    /// Conjunction of named sub-verdicts; the witness is the first failing
    /// sub-verdict's witness.
    pub fn all(parts: Vec<(String, Verdict)>) -> Self {
        let holds = parts.iter().all(|(_, v)| v.holds);
        let witness = parts
            .iter()
            .find(|(_, v)| !v.holds)
            .and_then(|(_, v)| v.witness.clone());
        Verdict {
            holds,
            witness,
            sub_verdicts: parts
                .into_iter()
                .map(|(name, verdict)| SubVerdict { name, verdict })
                .collect(),
        }
    }

    pub fn sub(&self, name: &str) -> Option<&Verdict> {
        self.sub_verdicts
            .iter()
            .find(|s| s.name == name)
            .map(|s| &s.verdict)
    }
}
