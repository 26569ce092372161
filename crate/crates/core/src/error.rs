use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unknown player {0:?}")]
    UnknownPlayer(String),

    #[error("unknown action {action:?} for player {player:?}")]
    UnknownAction { player: String, action: String },

    #[error("unknown type {ty:?} for player {player:?}")]
    UnknownType { player: String, ty: String },

    #[error("invalid distribution at {at}: {reason}")]
    Distribution { at: String, reason: String },

    #[error("epsilon must be nonnegative, got {0}")]
    NegativeEpsilon(Rational),

    #[error("{name} = {value} out of range: {expected}")]
    OutOfRange {
        name: &'static str,
        value: String,
        expected: String,
    },

    #[error("{what} needs {needed} units of work, bound is {bound}")]
    BoundExceeded {
        what: String,
        needed: u128,
        bound: u64,
    },

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("machine {machine:?} is not in the space of player {player:?}")]
    MachineNotInSpace { player: String, machine: String },

    #[error("input {input:?} outside the domain of machine {machine:?}")]
    InputOutsideDomain { machine: String, input: String },

    #[error("missing strategy for player {player:?} in game {game:?}{}", info_set.as_ref().map(|i| format!(" at {i:?}")).unwrap_or_default())]
    MissingStrategy {
        player: String,
        game: String,
        info_set: Option<String>,
    },

    #[error("game with awareness is inconsistent: {0}")]
    Inconsistent(String),
}

impl Error {
    pub fn is_resource_bound(&self) -> bool {
        matches!(self, Error::BoundExceeded { .. })
    }
}
