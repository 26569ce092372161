use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Players are `0..n`; the mediator, when present, is node `n`.
pub type NodeId = usize;
/// Messages delivered to a node at the start of a round, by sender.
pub type Inbox = BTreeMap<NodeId, u8>;
/// Messages a node sends in a round, by recipient.
pub type Outbox = BTreeMap<NodeId, u8>;

/// What every node knows about the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Context {
    pub n: usize,
    pub general: NodeId,
    pub mediator: Option<NodeId>,
}

impl Context {
    pub fn players(&self) -> impl Iterator<Item = NodeId> {
        0..self.n
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step<S> {
    pub outbox: Outbox,
    pub state: S,
    pub decision: Option<u8>,
}

/// A deterministic synchronous protocol. Round numbers start at 1; a
/// message sent in round `r` is in the recipient's inbox in round `r + 1`.
pub trait Protocol {
    type State: Clone + fmt::Debug;

    fn name(&self) -> &str;

    /// Whether the protocol relies on the mediator node.
    fn uses_mediator(&self) -> bool {
        false
    }

    /// `preference` is the general's input; other nodes get `None`.
    fn init(&self, ctx: &Context, me: NodeId, preference: Option<u8>) -> Self::State;

    fn step(
        &self,
        ctx: &Context,
        round: u32,
        me: NodeId,
        state: &Self::State,
        inbox: &Inbox,
    ) -> Step<Self::State>;
}

/// Local state shared by the built-in protocols.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BaState {
    pub preference: Option<u8>,
    pub heard: Option<u8>,
}

fn quiet(state: &BaState) -> Step<BaState> {
    Step {
        outbox: Outbox::new(),
        state: state.clone(),
        decision: None,
    }
}

/// The general sends their preference to the mediator and decides it; in
/// round 2 the mediator relays what it received (0 if nothing arrived) to
/// every soldier, and each soldier decides the relayed value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MediatorRelay;

impl Protocol for MediatorRelay {
    type State = BaState;

    fn name(&self) -> &str {
        "mediator"
    }

    fn uses_mediator(&self) -> bool {
        true
    }

    fn init(&self, _: &Context, _: NodeId, preference: Option<u8>) -> BaState {
        BaState {
            preference,
            heard: None,
        }
    }

    fn step(
        &self,
        ctx: &Context,
        round: u32,
        me: NodeId,
        state: &BaState,
        inbox: &Inbox,
    ) -> Step<BaState> {
        let mediator = ctx.mediator.expect("relay protocol runs with a mediator");
        if me == ctx.general {
            if round != 1 {
                return quiet(state);
            }
            let v = state.preference.unwrap_or(0);
            return Step {
                outbox: Outbox::from([(mediator, v)]),
                state: state.clone(),
                decision: Some(v),
            };
        }
        if me == mediator {
            if round != 2 {
                return quiet(state);
            }
            let v = inbox.get(&ctx.general).copied().unwrap_or(0);
            return Step {
                outbox: ctx
                    .players()
                    .filter(|&p| p != ctx.general)
                    .map(|p| (p, v))
                    .collect(),
                state: state.clone(),
                decision: None,
            };
        }
        match (state.heard, inbox.get(&mediator)) {
            (None, Some(&v)) => Step {
                outbox: Outbox::new(),
                state: BaState {
                    heard: Some(v),
                    ..state.clone()
                },
                decision: Some(v),
            },
            _ => quiet(state),
        }
    }
}

/// Like [`MediatorRelay`] except that the mediator never relays, so soldiers
/// never decide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SilentRelay;

impl Protocol for SilentRelay {
    type State = BaState;

    fn name(&self) -> &str {
        "silent-mediator"
    }

    fn uses_mediator(&self) -> bool {
        true
    }

    fn init(&self, ctx: &Context, me: NodeId, preference: Option<u8>) -> BaState {
        MediatorRelay.init(ctx, me, preference)
    }

    fn step(
        &self,
        ctx: &Context,
        round: u32,
        me: NodeId,
        state: &BaState,
        inbox: &Inbox,
    ) -> Step<BaState> {
        if Some(me) == ctx.mediator {
            return quiet(state);
        }
        MediatorRelay.step(ctx, round, me, state, inbox)
    }
}

/// No mediator: the general broadcasts their preference and decides it;
/// every soldier decides the first value it hears (lowest sender id on a
/// tie) and echoes it to all other players.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EchoFirst;

impl Protocol for EchoFirst {
    type State = BaState;

    fn name(&self) -> &str {
        "echo-first"
    }

    fn init(&self, _: &Context, _: NodeId, preference: Option<u8>) -> BaState {
        BaState {
            preference,
            heard: None,
        }
    }

    fn step(
        &self,
        ctx: &Context,
        round: u32,
        me: NodeId,
        state: &BaState,
        inbox: &Inbox,
    ) -> Step<BaState> {
        let others = |v: u8| ctx.players().filter(|&p| p != me).map(|p| (p, v)).collect();
        if me == ctx.general {
            if round != 1 {
                return quiet(state);
            }
            let v = state.preference.unwrap_or(0);
            return Step {
                outbox: others(v),
                state: state.clone(),
                decision: Some(v),
            };
        }
        match (state.heard, inbox.values().next()) {
            (None, Some(&v)) => Step {
                outbox: others(v),
                state: BaState {
                    heard: Some(v),
                    ..state.clone()
                },
                decision: Some(v),
            },
            _ => quiet(state),
        }
    }
}

/// A faulty player's behavior. Faulty players still run the protocol
/// internally; the adversary rewrites what they send.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Adversary {
    /// Honest before round `r`, sends nothing from round `r` on.
    Crash(u32),
    /// Sends the negation of every honest message.
    Flip,
    /// Whenever the protocol would send anything, sends `recipient mod 2` to
    /// every other node instead.
    Equivocate,
    /// Never sends.
    Silent,
}

impl Adversary {
    /// The standard library: crash at round 2, flip, equivocate, silent.
    pub fn library() -> Vec<Adversary> {
        vec![
            Adversary::Crash(2),
            Adversary::Flip,
            Adversary::Equivocate,
            Adversary::Silent,
        ]
    }

    pub(crate) fn rewrite(&self, ctx: &Context, me: NodeId, round: u32, honest: Outbox) -> Outbox {
        match *self {
            Adversary::Crash(r) if round >= r => Outbox::new(),
            Adversary::Crash(_) => honest,
            Adversary::Flip => honest
                .into_iter()
                .map(|(to, v)| (to, 1 - v.min(1)))
                .collect(),
            Adversary::Equivocate if honest.is_empty() => honest,
            Adversary::Equivocate => {
                let nodes = ctx.n + usize::from(ctx.mediator.is_some());
                (0..nodes)
                    .filter(|&to| to != me)
                    .map(|to| (to, (to % 2) as u8))
                    .collect()
            }
            Adversary::Silent => Outbox::new(),
        }
    }
}

impl fmt::Display for Adversary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Adversary::Crash(r) => write!(f, "crash({r})"),
            Adversary::Flip => f.write_str("flip"),
            Adversary::Equivocate => f.write_str("equivocate"),
            Adversary::Silent => f.write_str("silent"),
        }
    }
}

impl FromStr for Adversary {
    type Err = Error;

    /// Accepts `flip`, `equivocate`, `silent`, `crash` (round 2) and
    /// `crash(R)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "flip" => return Ok(Adversary::Flip),
            "equivocate" => return Ok(Adversary::Equivocate),
            "silent" => return Ok(Adversary::Silent),
            "crash" => return Ok(Adversary::Crash(2)),
            _ => {}
        }
        s.strip_prefix("crash(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|r| r.parse().ok())
            .filter(|&r| r >= 1)
            .map(Adversary::Crash)
            .ok_or_else(|| Error::OutOfRange {
                name: "adversary",
                value: s.to_string(),
                expected: "crash, crash(R), flip, equivocate or silent".into(),
            })
    }
}

impl Serialize for Adversary {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Adversary {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
