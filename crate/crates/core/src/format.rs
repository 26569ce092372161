//! JSON interchange formats for games, machine spaces, games with awareness,
//! simulator scenarios and strategy profiles.
//!
//! Every document has the same envelope:
//!
//! ```json
//! { "format": 1, "kind": "normal-form", "body": { ... } }
//! ```
//!
//! Rationals are always strings (`"3"`, `"-5"`, `"1/3"`). Unknown fields
//! are rejected. Payoff tables are nested arrays indexed by each player's
//! action in turn, with a vector of per-player payoffs at the leaves.
//! [`GameDocument::to_json`] is canonical: serializing a parsed document and
//! parsing it again gives back the same document and the same bytes.

use std::collections::BTreeMap;

use serde::de::{DeserializeOwned, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::awareness::{
    AugmentedGame, BeliefEntry, ExtensiveGame, GameWithAwareness, GeneralizedProfile,
    MoveDistribution, Tree,
};
use crate::error::Error;
use crate::game::{
    check_distribution, product_size, BayesianGame, BayesianStrategyProfile, Limits, MixedProfile,
    NormalFormGame,
};
use crate::machine::{
    build_primality_game_with, ComputationalGame, MachineKind, OneShotGame, OneShotMachine,
    RepeatedGameAutomaton, RepeatedGameSpec, RepeatedMachineGame, StandardAutomaton, UtilityRule,
    FRPD_FREE_STATES,
};
use crate::rational::Rational;
use crate::sim::{EchoFirst, MediatorRelay, Protocol, Scenario, SilentRelay};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported format version {0} (expected 1)")]
    Version(String),

    #[error("unknown document kind {0:?}")]
    UnknownKind(String),

    #[error("expected a {expected} document, found {found}")]
    WrongKind { expected: String, found: String },

    #[error("invalid field {path} at line {line}, column {column}: {message}")]
    Field {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("malformed rational at {at}: {message}")]
    MalformedRational { at: String, message: String },

    #[error("missing entry at {at}")]
    MissingEntry { at: String },

    #[error("wrong shape at {at}: {message}")]
    Shape { at: String, message: String },

    #[error(transparent)]
    Game(#[from] Error),
}

impl FormatError {
    pub fn is_resource_bound(&self) -> bool {
        matches!(self, FormatError::Game(e) if e.is_resource_bound())
    }
}

pub type FormatResult<T> = std::result::Result<T, FormatError>;

/// A parsed document of any kind.
#[derive(Debug, Clone, PartialEq)]
pub enum GameDocument {
    NormalForm(NormalFormBody),
    Bayesian(BayesianBody),
    CompGame(CompGameBody),
    RepeatedSpec(RepeatedSpecBody),
    Awareness(AwarenessBody),
    Scenario(ScenarioBody),
    Profile(ProfileBody),
    BayesianProfile(BayesianProfileBody),
    MachineProfile(MachineProfileBody),
    GeneralizedProfile(GeneralizedProfileBody),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope<B> {
    format: u32,
    kind: String,
    body: B,
}

#[derive(Deserialize)]
struct Header {
    format: Option<Value>,
    kind: Option<Value>,
}

impl GameDocument {
    pub fn kind(&self) -> &'static str {
        match self {
            GameDocument::NormalForm(_) => "normal-form",
            GameDocument::Bayesian(_) => "bayesian",
            GameDocument::CompGame(_) => "compgame",
            GameDocument::RepeatedSpec(_) => "repeated-spec",
            GameDocument::Awareness(_) => "awareness",
            GameDocument::Scenario(_) => "scenario",
            GameDocument::Profile(_) => "profile",
            GameDocument::BayesianProfile(_) => "bayesian-profile",
            GameDocument::MachineProfile(_) => "machine-profile",
            GameDocument::GeneralizedProfile(_) => "generalized-profile",
        }
    }

    /// Canonical JSON text with a trailing newline.
    pub fn to_json(&self) -> String {
        fn go<B: Serialize>(kind: &str, body: &B) -> String {
            let env = Envelope {
                format: FORMAT_VERSION,
                kind: kind.to_string(),
                body,
            };
            let v = serde_json::to_value(&env).expect("documents serialize");
            let mut s = String::new();
            write_canonical(&v, 0, &mut s);
            s.push('\n');
            s
        }
        let k = self.kind();
        match self {
            GameDocument::NormalForm(b) => go(k, b),
            GameDocument::Bayesian(b) => go(k, b),
            GameDocument::CompGame(b) => go(k, b),
            GameDocument::RepeatedSpec(b) => go(k, b),
            GameDocument::Awareness(b) => go(k, b),
            GameDocument::Scenario(b) => go(k, b),
            GameDocument::Profile(b) => go(k, b),
            GameDocument::BayesianProfile(b) => go(k, b),
            GameDocument::MachineProfile(b) => go(k, b),
            GameDocument::GeneralizedProfile(b) => go(k, b),
        }
    }

    fn wrong(&self, expected: &str) -> FormatError {
        FormatError::WrongKind {
            expected: expected.into(),
            found: self.kind().into(),
        }
    }

    pub fn into_normal_form(self) -> FormatResult<NormalFormBody> {
        match self {
            GameDocument::NormalForm(b) => Ok(b),
            other => Err(other.wrong("normal-form")),
        }
    }

    pub fn into_bayesian(self) -> FormatResult<BayesianBody> {
        match self {
            GameDocument::Bayesian(b) => Ok(b),
            other => Err(other.wrong("bayesian")),
        }
    }

    pub fn into_compgame(self) -> FormatResult<CompGameBody> {
        match self {
            GameDocument::CompGame(b) => Ok(b),
            other => Err(other.wrong("compgame")),
        }
    }

    pub fn into_repeated_spec(self) -> FormatResult<RepeatedSpecBody> {
        match self {
            GameDocument::RepeatedSpec(b) => Ok(b),
            other => Err(other.wrong("repeated-spec")),
        }
    }

    pub fn into_awareness(self) -> FormatResult<AwarenessBody> {
        match self {
            GameDocument::Awareness(b) => Ok(b),
            other => Err(other.wrong("awareness")),
        }
    }

    pub fn into_scenario(self) -> FormatResult<ScenarioBody> {
        match self {
            GameDocument::Scenario(b) => Ok(b),
            other => Err(other.wrong("scenario")),
        }
    }

    pub fn into_profile(self) -> FormatResult<ProfileBody> {
        match self {
            GameDocument::Profile(b) => Ok(b),
            other => Err(other.wrong("profile")),
        }
    }

    pub fn into_bayesian_profile(self) -> FormatResult<BayesianProfileBody> {
        match self {
            GameDocument::BayesianProfile(b) => Ok(b),
            other => Err(other.wrong("bayesian-profile")),
        }
    }

    pub fn into_machine_profile(self) -> FormatResult<MachineProfileBody> {
        match self {
            GameDocument::MachineProfile(b) => Ok(b),
            other => Err(other.wrong("machine-profile")),
        }
    }

    pub fn into_generalized_profile(self) -> FormatResult<GeneralizedProfileBody> {
        match self {
            GameDocument::GeneralizedProfile(b) => Ok(b),
            other => Err(other.wrong("generalized-profile")),
        }
    }
}

/// Two-space indentation, with arrays of scalars kept on one line.
pub(crate) fn write_canonical(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(a) if a.is_empty() => out.push_str("[]"),
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&x.to_string());
            }
            out.push(']');
        }
        Value::Array(a) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_canonical(x, indent + 1, out);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_canonical(x, indent + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

fn syntax(e: serde_json::Error) -> FormatError {
    FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e),
    }
}

fn strip_position(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(i) => s[..i].to_string(),
        None => s,
    }
}

fn typed<B: DeserializeOwned>(text: &str) -> FormatResult<B> {
    let mut de = serde_json::Deserializer::from_str(text);
    let env: Envelope<B> = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let message = strip_position(&inner);
        if inner.is_syntax() || inner.is_eof() {
            return syntax(inner);
        }
        if message.starts_with("malformed rational") {
            FormatError::MalformedRational {
                at: format!("{path} (line {}, column {})", inner.line(), inner.column()),
                message,
            }
        } else {
            FormatError::Field {
                path,
                line: inner.line(),
                column: inner.column(),
                message,
            }
        }
    })?;
    Ok(env.body)
}

/// Parses and structurally validates a document. Semantic checks that need
/// the game (distribution sums, label lookups) happen when a body is
/// converted, e.g. in [`NormalFormBody::to_game`].
pub fn parse(text: &str) -> FormatResult<GameDocument> {
    let header: Header = serde_json::from_str(text).map_err(syntax)?;
    match &header.format {
        Some(Value::Number(n)) if n.as_u64() == Some(FORMAT_VERSION as u64) => {}
        Some(v) => return Err(FormatError::Version(v.to_string())),
        None => return Err(FormatError::Version("missing".into())),
    }
    let kind = match header.kind {
        Some(Value::String(s)) => s,
        Some(v) => return Err(FormatError::UnknownKind(v.to_string())),
        None => return Err(FormatError::UnknownKind("missing".into())),
    };
    Ok(match kind.as_str() {
        "normal-form" => GameDocument::NormalForm(typed(text)?),
        "bayesian" => GameDocument::Bayesian(typed(text)?),
        "compgame" => GameDocument::CompGame(typed(text)?),
        "repeated-spec" => GameDocument::RepeatedSpec(typed(text)?),
        "awareness" => GameDocument::Awareness(typed(text)?),
        "scenario" => GameDocument::Scenario(typed(text)?),
        "profile" => GameDocument::Profile(typed(text)?),
        "bayesian-profile" => GameDocument::BayesianProfile(typed(text)?),
        "machine-profile" => GameDocument::MachineProfile(typed(text)?),
        "generalized-profile" => GameDocument::GeneralizedProfile(typed(text)?),
        _ => return Err(FormatError::UnknownKind(kind)),
    })
}

// ---- nested tables ----

fn rational_at(v: &Value, at: &str) -> FormatResult<Rational> {
    match v {
        Value::String(s) => s.parse().map_err(|e: crate::rational::ParseRationalError| {
            FormatError::MalformedRational {
                at: at.to_string(),
                message: e.to_string(),
            }
        }),
        other => Err(FormatError::MalformedRational {
            at: at.to_string(),
            message: format!("expected a string, found {other}"),
        }),
    }
}

fn payoff_vector(v: &Value, at: &str, n: usize) -> FormatResult<Vec<Rational>> {
    let arr = v.as_array().ok_or_else(|| FormatError::Shape {
        at: at.to_string(),
        message: format!("expected an array of {n} payoffs"),
    })?;
    if arr.len() < n {
        return Err(FormatError::MissingEntry {
            at: format!("{at}[{}]", arr.len()),
        });
    }
    if arr.len() > n {
        return Err(FormatError::Shape {
            at: at.to_string(),
            message: format!("{} payoffs for {n} players", arr.len()),
        });
    }
    arr.iter()
        .enumerate()
        .map(|(i, x)| rational_at(x, &format!("{at}[{i}]")))
        .collect()
}

fn walk<T>(
    v: &Value,
    dims: &[usize],
    at: String,
    leaf: &dyn Fn(&Value, &str) -> FormatResult<T>,
    out: &mut Vec<T>,
) -> FormatResult<()> {
    let Some((&d, rest)) = dims.split_first() else {
        out.push(leaf(v, &at)?);
        return Ok(());
    };
    let arr = v.as_array().ok_or_else(|| FormatError::Shape {
        at: at.clone(),
        message: format!("expected an array of {d} entries"),
    })?;
    if arr.len() < d {
        return Err(FormatError::MissingEntry {
            at: format!("{at}[{}]", arr.len()),
        });
    }
    if arr.len() > d {
        return Err(FormatError::Shape {
            at,
            message: format!("{} entries, expected {d}", arr.len()),
        });
    }
    for (i, x) in arr.iter().enumerate() {
        walk(x, rest, format!("{at}[{i}]"), leaf, out)?;
    }
    Ok(())
}

/// Flattens a nested table in lexicographic order (first index most
/// significant).
fn flatten_table<T>(
    v: &Value,
    dims: &[usize],
    at: &str,
    limits: &Limits,
    leaf: &dyn Fn(&Value, &str) -> FormatResult<T>,
) -> FormatResult<Vec<T>> {
    limits.check_entries(format!("{at} table"), product_size(dims))?;
    let mut out = Vec::new();
    walk(v, dims, at.to_string(), leaf, &mut out)?;
    Ok(out)
}

fn nest(mut leaves: Vec<Value>, dims: &[usize]) -> Value {
    let Some((_, rest)) = dims.split_first() else {
        return leaves.pop().unwrap_or(Value::Null);
    };
    let chunk = product_size(rest) as usize;
    let mut rows = Vec::new();
    while !leaves.is_empty() {
        let tail = leaves.split_off(chunk.min(leaves.len()));
        rows.push(nest(std::mem::replace(&mut leaves, tail), rest));
    }
    Value::Array(rows)
}

fn rational_value(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn vector_value(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_value).collect())
}

// ---- games ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalFormBody {
    pub players: Vec<String>,
    pub actions: Vec<Vec<String>>,
    pub payoffs: Value,
}

impl NormalFormBody {
    pub fn from_game(game: &NormalFormGame) -> Self {
        let leaves = game
            .payoff_table()
            .iter()
            .map(|p| vector_value(p))
            .collect();
        NormalFormBody {
            players: game.players().to_vec(),
            actions: game.all_actions().to_vec(),
            payoffs: nest(leaves, &game.action_counts()),
        }
    }

    pub fn to_game(&self, limits: &Limits) -> FormatResult<NormalFormGame> {
        let n = self.players.len();
        let dims: Vec<usize> = self.actions.iter().map(Vec::len).collect();
        if dims.len() != n {
            return Err(
                Error::Dimension(format!("{n} players but {} action lists", dims.len())).into(),
            );
        }
        let table = flatten_table(&self.payoffs, &dims, "payoffs", limits, &|v, at| {
            payoff_vector(v, at, n)
        })?;
        Ok(NormalFormGame::with_limits(
            self.players.clone(),
            self.actions.clone(),
            table,
            limits,
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BayesianBody {
    pub players: Vec<String>,
    pub types: Vec<Vec<String>>,
    pub actions: Vec<Vec<String>>,
    /// Nested by each player's type.
    pub prior: Value,
    /// Nested by each player's type, then each player's action.
    pub utilities: Value,
}

impl BayesianBody {
    pub fn from_game(game: &BayesianGame) -> Self {
        let tdims = game.type_counts();
        let dims: Vec<usize> = tdims.iter().chain(&game.action_counts()).copied().collect();
        BayesianBody {
            players: game.players().to_vec(),
            types: game.all_types().to_vec(),
            actions: game.all_actions().to_vec(),
            prior: nest(
                game.prior_table().iter().map(rational_value).collect(),
                &tdims,
            ),
            utilities: nest(
                game.utility_table()
                    .iter()
                    .map(|u| vector_value(u))
                    .collect(),
                &dims,
            ),
        }
    }

    pub fn to_game(&self, limits: &Limits) -> FormatResult<BayesianGame> {
        let n = self.players.len();
        if self.types.len() != n || self.actions.len() != n {
            return Err(Error::Dimension(format!(
                "{n} players but {} type lists and {} action lists",
                self.types.len(),
                self.actions.len()
            ))
            .into());
        }
        let tdims: Vec<usize> = self.types.iter().map(Vec::len).collect();
        let dims: Vec<usize> = tdims
            .iter()
            .chain(self.actions.iter().map(Vec::len).collect::<Vec<_>>().iter())
            .copied()
            .collect();
        let prior = flatten_table(&self.prior, &tdims, "prior", limits, &rational_at)?;
        let utilities = flatten_table(&self.utilities, &dims, "utilities", limits, &|v, at| {
            payoff_vector(v, at, n)
        })?;
        Ok(BayesianGame::new(
            self.players.clone(),
            self.types.clone(),
            self.actions.clone(),
            prior,
            utilities,
        )?)
    }
}

/// A pure choice (an action label) or a distribution over labels; labels
/// left out of a distribution get probability zero.
#[derive(Debug, Clone, PartialEq)]
pub enum Play {
    Pure(String),
    Mixed(BTreeMap<String, Rational>),
}

impl Serialize for Play {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Play::Pure(a) => s.serialize_str(a),
            Play::Mixed(m) => m.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Play {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match Value::deserialize(d)? {
            Value::String(a) => Ok(Play::Pure(a)),
            Value::Object(m) => m
                .into_iter()
                .map(|(k, v)| {
                    rational_at(&v, &k)
                        .map(|r| (k, r))
                        .map_err(|e| D::Error::custom(strip_at(&e)))
                })
                .collect::<std::result::Result<_, _>>()
                .map(Play::Mixed),
            other => Err(D::Error::custom(format!(
                "expected an action label or a map from labels to probabilities, found {other}"
            ))),
        }
    }
}

fn strip_at(e: &FormatError) -> String {
    match e {
        FormatError::MalformedRational { message, .. } => message.clone(),
        other => other.to_string(),
    }
}

impl Play {
    fn from_distribution(labels: &[String], dist: &[Rational]) -> Self {
        if let Some(i) = dist.iter().position(Rational::is_one) {
            return Play::Pure(labels[i].clone());
        }
        Play::Mixed(
            labels
                .iter()
                .zip(dist)
                .filter(|(_, p)| !p.is_zero())
                .map(|(l, p)| (l.clone(), p.clone()))
                .collect(),
        )
    }

    /// Distribution over `labels`, which belong to `owner`.
    pub fn distribution(
        &self,
        owner: &str,
        labels: &[String],
        at: &str,
    ) -> FormatResult<Vec<Rational>> {
        let index = |a: &str| {
            labels
                .iter()
                .position(|l| l == a)
                .ok_or_else(|| Error::UnknownAction {
                    player: owner.to_string(),
                    action: a.to_string(),
                })
        };
        let mut dist = vec![Rational::zero(); labels.len()];
        match self {
            Play::Pure(a) => dist[index(a)?] = Rational::one(),
            Play::Mixed(m) => {
                for (a, p) in m {
                    dist[index(a)?] = p.clone();
                }
            }
        }
        check_distribution(&dist, || at.to_string())?;
        Ok(dist)
    }

    fn moves(&self) -> MoveDistribution {
        match self {
            Play::Pure(a) => MoveDistribution::from([(a.clone(), Rational::one())]),
            Play::Mixed(m) => m.clone(),
        }
    }
}

// ---- computational games ----

/// Declared complexity: one value for every input, or one per input label.
#[derive(Debug, Clone, PartialEq)]
pub enum Complexity {
    Uniform(Rational),
    PerInput(BTreeMap<String, Rational>),
}

impl Serialize for Complexity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Complexity::Uniform(c) => c.serialize(s),
            Complexity::PerInput(m) => m.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Complexity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let err = |e: FormatError| D::Error::custom(strip_at(&e));
        match Value::deserialize(d)? {
            Value::Object(m) => m
                .into_iter()
                .map(|(k, v)| rational_at(&v, &k).map(|r| (k, r)).map_err(err))
                .collect::<std::result::Result<_, _>>()
                .map(Complexity::PerInput),
            v => rational_at(&v, "complexity")
                .map(Complexity::Uniform)
                .map_err(err),
        }
    }
}

/// A one-shot machine: for every input (a type label of its owner) the
/// action it plays and the complexity it declares.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineDesc {
    pub id: String,
    pub kind: MachineKind,
    pub table: BTreeMap<String, Play>,
    pub complexity: Complexity,
}

impl MachineDesc {
    pub fn from_machine(game: &BayesianGame, player: usize, m: &OneShotMachine) -> Self {
        let types = game.types(player);
        let actions = game.actions(player);
        let complexity = if m.complexities().iter().all(|c| *c == m.complexities()[0]) {
            Complexity::Uniform(m.complexities()[0].clone())
        } else {
            Complexity::PerInput(
                types
                    .iter()
                    .cloned()
                    .zip(m.complexities().iter().cloned())
                    .collect(),
            )
        };
        MachineDesc {
            id: m.id().to_string(),
            kind: m.kind(),
            table: types
                .iter()
                .zip(m.table())
                .map(|(t, d)| (t.clone(), Play::from_distribution(actions, d)))
                .collect(),
            complexity,
        }
    }

    pub fn to_machine(
        &self,
        game: &BayesianGame,
        player: usize,
        at: &str,
    ) -> FormatResult<OneShotMachine> {
        let owner = &game.players()[player];
        let types = game.types(player);
        if let Some(t) = self.table.keys().find(|t| !types.contains(t)) {
            return Err(Error::UnknownType {
                player: owner.clone(),
                ty: t.clone(),
            }
            .into());
        }
        let mut act = Vec::new();
        let mut complexity = Vec::new();
        for t in types {
            let entry = format!("{at}.table.{t}");
            let play = self
                .table
                .get(t)
                .ok_or_else(|| FormatError::MissingEntry { at: entry.clone() })?;
            act.push(play.distribution(owner, game.actions(player), &entry)?);
            complexity.push(match &self.complexity {
                Complexity::Uniform(c) => c.clone(),
                Complexity::PerInput(m) => {
                    m.get(t).cloned().ok_or_else(|| FormatError::MissingEntry {
                        at: format!("{at}.complexity.{t}"),
                    })?
                }
            });
        }
        Ok(OneShotMachine::new(
            self.id.clone(),
            self.kind,
            act,
            complexity,
        )?)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UtilityDesc {
    #[default]
    MinusOwnComplexity,
    Linear(Vec<Vec<Rational>>),
}

/// A finite automaton over a two-player stage game: either a built-in
/// (`"AllC"`, `"AllD"`, `"TfT"`, `"Grim"`, `"DefectLast"`) or explicit.
#[derive(Debug, Clone, PartialEq)]
pub enum AutomatonDesc {
    Builtin(StandardAutomaton),
    Explicit(ExplicitAutomaton),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitAutomaton {
    pub id: String,
    pub states: Vec<String>,
    pub initial: String,
    /// Own stage action emitted in each state.
    pub output: BTreeMap<String, String>,
    /// Next state, by current state and then the opponent's stage action.
    pub transition: BTreeMap<String, BTreeMap<String, String>>,
}

impl Serialize for AutomatonDesc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AutomatonDesc::Builtin(a) => s.serialize_str(a.id()),
            AutomatonDesc::Explicit(e) => e.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for AutomatonDesc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match Value::deserialize(d)? {
            Value::String(id) => StandardAutomaton::from_id(&id)
                .map(AutomatonDesc::Builtin)
                .ok_or_else(|| {
                    D::Error::custom(format!(
                        "unknown built-in automaton {id:?} (expected AllC, AllD, TfT, Grim or DefectLast)"
                    ))
                }),
            v => serde_json::from_value(v)
                .map(AutomatonDesc::Explicit)
                .map_err(D::Error::custom),
        }
    }
}

impl AutomatonDesc {
    pub fn id(&self) -> &str {
        match self {
            AutomatonDesc::Builtin(a) => a.id(),
            AutomatonDesc::Explicit(e) => &e.id,
        }
    }

    /// The automaton as played by `player` (0 or 1) of `stage`.
    pub fn build(
        &self,
        stage: &NormalFormGame,
        player: usize,
        rounds: u32,
    ) -> FormatResult<RepeatedGameAutomaton> {
        let e = match self {
            AutomatonDesc::Builtin(a) => return Ok(a.build(rounds)),
            AutomatonDesc::Explicit(e) => e,
        };
        let state = |s: &str| {
            e.states.iter().position(|x| x == s).ok_or_else(|| {
                Error::InvalidGame(format!("automaton {:?}: unknown state {s:?}", e.id))
            })
        };
        let me = stage.player_name(player).to_string();
        let opp = 1 - player;
        let mut output = Vec::new();
        let mut transition = Vec::new();
        for s in &e.states {
            let a = e.output.get(s).ok_or_else(|| FormatError::MissingEntry {
                at: format!("{}.output.{s}", e.id),
            })?;
            output.push(
                stage
                    .action_index(player, a)
                    .map_err(|_| Error::UnknownAction {
                        player: me.clone(),
                        action: a.clone(),
                    })?,
            );
            let row = e
                .transition
                .get(s)
                .ok_or_else(|| FormatError::MissingEntry {
                    at: format!("{}.transition.{s}", e.id),
                })?;
            let mut next = Vec::new();
            for b in stage.actions(opp) {
                let to = row.get(b).ok_or_else(|| FormatError::MissingEntry {
                    at: format!("{}.transition.{s}.{b}", e.id),
                })?;
                next.push(state(to)?);
            }
            transition.push(next);
        }
        Ok(RepeatedGameAutomaton::new(
            e.id.clone(),
            e.states.clone(),
            state(&e.initial)?,
            output,
            transition,
        )?)
    }
}

fn default_free_states() -> usize {
    FRPD_FREE_STATES
}

/// A finitely repeated two-player game with memory costs, plus the
/// automata both players choose from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepeatedSpecBody {
    pub stage: NormalFormBody,
    pub rounds: u32,
    pub discount: Rational,
    pub memory_cost: Rational,
    /// States each automaton gets before memory is charged; defaults to 2.
    #[serde(default = "default_free_states")]
    pub free_states: usize,
    pub space: Vec<AutomatonDesc>,
}

impl RepeatedSpecBody {
    pub fn standard(spec: &RepeatedGameSpec, space: &[StandardAutomaton]) -> Self {
        RepeatedSpecBody {
            stage: NormalFormBody::from_game(spec.stage()),
            rounds: spec.rounds(),
            discount: spec.discount().clone(),
            memory_cost: spec.memory_cost().clone(),
            free_states: spec.free_states(),
            space: space.iter().map(|&a| AutomatonDesc::Builtin(a)).collect(),
        }
    }

    pub fn to_spec(&self, limits: &Limits) -> FormatResult<RepeatedGameSpec> {
        Ok(RepeatedGameSpec::new(
            self.stage.to_game(limits)?,
            self.rounds,
            self.discount.clone(),
            self.memory_cost.clone(),
            self.free_states,
        )?)
    }

    /// The automaton space of `player` under `spec`.
    pub fn automata(
        &self,
        spec: &RepeatedGameSpec,
        player: usize,
    ) -> FormatResult<Vec<RepeatedGameAutomaton>> {
        self.space
            .iter()
            .map(|a| a.build(spec.stage(), player, spec.rounds()))
            .collect()
    }

    /// The space as built-in automata, if it has only built-ins.
    pub fn standard_space(&self) -> FormatResult<Vec<StandardAutomaton>> {
        self.space
            .iter()
            .map(|a| match a {
                AutomatonDesc::Builtin(s) => Ok(*s),
                AutomatonDesc::Explicit(e) => Err(FormatError::Shape {
                    at: format!("space.{}", e.id),
                    message: "threshold scans need built-in automata".into(),
                }),
            })
            .collect()
    }

    pub fn to_game(
        &self,
        charged: [bool; 2],
        limits: &Limits,
    ) -> FormatResult<RepeatedMachineGame> {
        let spec = self.to_spec(limits)?;
        let machines = vec![self.automata(&spec, 0)?, self.automata(&spec, 1)?];
        Ok(RepeatedMachineGame::new(spec, machines, charged)?)
    }
}

fn both() -> [bool; 2] {
    [true, true]
}

fn is_both(c: &[bool; 2]) -> bool {
    *c == both()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CompGameBody {
    /// A Bayesian game whose players choose one-shot machines.
    OneShot {
        underlying: BayesianBody,
        machines: Vec<Vec<MachineDesc>>,
        #[serde(default)]
        utility: UtilityDesc,
    },
    /// A repeated game whose players choose automata.
    Repeated {
        spec: RepeatedSpecBody,
        /// Which players pay for memory; defaults to both.
        #[serde(default = "both", skip_serializing_if = "is_both")]
        charged: [bool; 2],
    },
    /// The primality-guessing game, generated from its parameters.
    Primality {
        bit_length: u32,
        cost_per_bit: Rational,
    },
}

impl CompGameBody {
    pub fn one_shot(game: &OneShotGame) -> Self {
        let u = game.underlying();
        CompGameBody::OneShot {
            underlying: BayesianBody::from_game(u),
            machines: (0..u.num_players())
                .map(|i| {
                    game.machines(i)
                        .iter()
                        .map(|m| MachineDesc::from_machine(u, i, m))
                        .collect()
                })
                .collect(),
            utility: match game.rule() {
                UtilityRule::MinusOwnComplexity => UtilityDesc::MinusOwnComplexity,
                UtilityRule::Linear(w) => UtilityDesc::Linear(w.clone()),
            },
        }
    }

    pub fn to_game(&self, limits: &Limits) -> FormatResult<ComputationalGame> {
        match self {
            CompGameBody::OneShot {
                underlying,
                machines,
                utility,
            } => {
                let u = underlying.to_game(limits)?;
                if machines.len() != u.num_players() {
                    return Err(Error::Dimension(format!(
                        "{} machine spaces for {} players",
                        machines.len(),
                        u.num_players()
                    ))
                    .into());
                }
                let spaces = machines
                    .iter()
                    .enumerate()
                    .map(|(i, space)| {
                        space
                            .iter()
                            .enumerate()
                            .map(|(j, m)| m.to_machine(&u, i, &format!("machines[{i}][{j}]")))
                            .collect::<FormatResult<Vec<_>>>()
                    })
                    .collect::<FormatResult<Vec<_>>>()?;
                let rule = match utility {
                    UtilityDesc::MinusOwnComplexity => UtilityRule::MinusOwnComplexity,
                    UtilityDesc::Linear(w) => UtilityRule::Linear(w.clone()),
                };
                Ok(OneShotGame::new(u, spaces, rule)?.into())
            }
            CompGameBody::Repeated { spec, charged } => Ok(spec.to_game(*charged, limits)?.into()),
            CompGameBody::Primality {
                bit_length,
                cost_per_bit,
            } => Ok(build_primality_game_with(*bit_length, cost_per_bit, limits)?.into()),
        }
    }
}

// ---- games with awareness ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedTree {
    pub name: String,
    pub tree: Tree,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AwarenessBody {
    pub players: Vec<String>,
    pub underlying: Tree,
    pub games: Vec<NamedTree>,
    pub modeler: String,
    /// At a decision node of one game, the game the mover believes is being
    /// played and their information set there.
    #[serde(rename = "F")]
    pub beliefs: Vec<BeliefEntry>,
}

impl AwarenessBody {
    pub fn from_gwa(gwa: &GameWithAwareness) -> Self {
        AwarenessBody {
            players: gwa.players().to_vec(),
            underlying: gwa.underlying().tree().clone(),
            games: gwa
                .games()
                .iter()
                .map(|g| NamedTree {
                    name: g.name.clone(),
                    tree: g.game.tree().clone(),
                })
                .collect(),
            modeler: gwa.games()[gwa.modeler()].name.clone(),
            beliefs: gwa.belief_entries(),
        }
    }

    /// Builds the game; consistency of `F` is checked separately by
    /// [`crate::awareness::validate`].
    pub fn to_gwa(&self, limits: &Limits) -> FormatResult<GameWithAwareness> {
        let underlying =
            ExtensiveGame::with_limits(self.players.clone(), self.underlying.clone(), limits)?;
        let games = self
            .games
            .iter()
            .map(|g| {
                Ok(AugmentedGame {
                    name: g.name.clone(),
                    game: ExtensiveGame::with_limits(self.players.clone(), g.tree.clone(), limits)?,
                })
            })
            .collect::<FormatResult<Vec<_>>>()?;
        Ok(GameWithAwareness::new(
            underlying,
            games,
            &self.modeler,
            &self.beliefs,
        )?)
    }
}

// ---- simulator ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolName {
    Mediator,
    EchoFirst,
    SilentMediator,
}

impl ProtocolName {
    pub fn uses_mediator(self) -> bool {
        match self {
            ProtocolName::Mediator => MediatorRelay.uses_mediator(),
            ProtocolName::EchoFirst => EchoFirst.uses_mediator(),
            ProtocolName::SilentMediator => SilentRelay.uses_mediator(),
        }
    }
}

impl std::str::FromStr for ProtocolName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "mediator" => Ok(ProtocolName::Mediator),
            "echo-first" => Ok(ProtocolName::EchoFirst),
            "silent-mediator" => Ok(ProtocolName::SilentMediator),
            other => Err(Error::OutOfRange {
                name: "protocol",
                value: other.into(),
                expected: "mediator, echo-first or silent-mediator".into(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioBody {
    pub protocol: ProtocolName,
    pub scenario: Scenario,
}

impl ScenarioBody {
    pub fn validate(&self) -> FormatResult<()> {
        self.scenario.validate()?;
        if self.scenario.mediator != self.protocol.uses_mediator() {
            return Err(FormatError::Shape {
                at: "scenario.mediator".into(),
                message: format!(
                    "protocol {:?} {} a mediator",
                    self.protocol,
                    if self.protocol.uses_mediator() {
                        "needs"
                    } else {
                        "does not use"
                    }
                ),
            });
        }
        Ok(())
    }
}

// ---- profiles ----

/// A mixed profile of a normal-form game, by player name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileBody {
    pub strategies: BTreeMap<String, Play>,
}

fn check_players<'a>(
    known: &[String],
    given: impl Iterator<Item = &'a String>,
) -> FormatResult<()> {
    for p in given {
        if !known.contains(p) {
            return Err(Error::UnknownPlayer(p.clone()).into());
        }
    }
    Ok(())
}

impl ProfileBody {
    pub fn from_mixed(game: &NormalFormGame, profile: &MixedProfile) -> Self {
        ProfileBody {
            strategies: (0..game.num_players())
                .map(|i| {
                    (
                        game.player_name(i).to_string(),
                        Play::from_distribution(game.actions(i), profile.strategy(i)),
                    )
                })
                .collect(),
        }
    }

    pub fn to_mixed(&self, game: &NormalFormGame) -> FormatResult<MixedProfile> {
        check_players(game.players(), self.strategies.keys())?;
        let dists = game
            .players()
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let at = format!("strategies.{p}");
                self.strategies
                    .get(p)
                    .ok_or_else(|| FormatError::MissingEntry { at: at.clone() })?
                    .distribution(p, game.actions(i), &at)
            })
            .collect::<FormatResult<Vec<_>>>()?;
        Ok(MixedProfile::new(dists)?)
    }
}

/// A behavioral profile of a Bayesian game: player, then type, then play.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BayesianProfileBody {
    pub strategies: BTreeMap<String, BTreeMap<String, Play>>,
}

impl BayesianProfileBody {
    pub fn from_profile(game: &BayesianGame, profile: &BayesianStrategyProfile) -> Self {
        BayesianProfileBody {
            strategies: (0..game.num_players())
                .map(|i| {
                    let per_type = game
                        .types(i)
                        .iter()
                        .enumerate()
                        .map(|(t, label)| {
                            (
                                label.clone(),
                                Play::from_distribution(game.actions(i), profile.strategy(i, t)),
                            )
                        })
                        .collect();
                    (game.players()[i].clone(), per_type)
                })
                .collect(),
        }
    }

    pub fn to_profile(&self, game: &BayesianGame) -> FormatResult<BayesianStrategyProfile> {
        check_players(game.players(), self.strategies.keys())?;
        let mut out = Vec::new();
        for (i, p) in game.players().iter().enumerate() {
            let at = format!("strategies.{p}");
            let per_type = self
                .strategies
                .get(p)
                .ok_or_else(|| FormatError::MissingEntry { at: at.clone() })?;
            if let Some(t) = per_type.keys().find(|t| !game.types(i).contains(t)) {
                return Err(Error::UnknownType {
                    player: p.clone(),
                    ty: t.clone(),
                }
                .into());
            }
            let mut row = Vec::new();
            for t in game.types(i) {
                let at = format!("{at}.{t}");
                let play = per_type
                    .get(t)
                    .ok_or_else(|| FormatError::MissingEntry { at: at.clone() })?;
                row.push(play.distribution(p, game.actions(i), &at)?);
            }
            out.push(row);
        }
        let profile = BayesianStrategyProfile::new(out)?;
        profile.check_against(game)?;
        Ok(profile)
    }
}

/// One machine per player, by machine id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineProfileBody {
    pub machines: BTreeMap<String, String>,
}

impl MachineProfileBody {
    pub fn from_profile(game: &ComputationalGame, profile: &[usize]) -> Self {
        MachineProfileBody {
            machines: game
                .players()
                .iter()
                .cloned()
                .zip(game.profile_ids(profile))
                .collect(),
        }
    }

    pub fn to_profile(&self, game: &ComputationalGame) -> FormatResult<Vec<usize>> {
        check_players(game.players(), self.machines.keys())?;
        let ids = game
            .players()
            .iter()
            .map(|p| {
                self.machines
                    .get(p)
                    .ok_or_else(|| FormatError::MissingEntry {
                        at: format!("machines.{p}"),
                    })
            })
            .collect::<FormatResult<Vec<_>>>()?;
        Ok(game.profile_from_ids(&ids)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralizedEntry {
    pub player: String,
    pub game: String,
    pub info_set: String,
    pub play: Play,
}

/// A generalized profile as a list of (player, game, information set,
/// play) entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralizedProfileBody {
    pub strategies: Vec<GeneralizedEntry>,
}

impl GeneralizedProfileBody {
    pub fn from_profile(profile: &GeneralizedProfile) -> Self {
        GeneralizedProfileBody {
            strategies: profile
                .entries()
                .map(|(player, game, info_set, d)| {
                    let labels: Vec<String> = d.keys().cloned().collect();
                    let weights: Vec<Rational> = d.values().cloned().collect();
                    GeneralizedEntry {
                        player: player.into(),
                        game: game.into(),
                        info_set: info_set.into(),
                        play: Play::from_distribution(&labels, &weights),
                    }
                })
                .collect(),
        }
    }

    pub fn to_profile(&self) -> FormatResult<GeneralizedProfile> {
        let mut out = GeneralizedProfile::new();
        for (i, e) in self.strategies.iter().enumerate() {
            let d = e.play.moves();
            let w: Vec<Rational> = d.values().cloned().collect();
            check_distribution(&w, || format!("strategies[{i}]"))?;
            out.set(&e.player, &e.game, &e.info_set, d);
        }
        Ok(out)
    }
}

/// Convenience: every pure profile of a game as a `profile` document body.
pub fn pure_profile(game: &NormalFormGame, profile: &[usize]) -> ProfileBody {
    ProfileBody {
        strategies: game
            .players()
            .iter()
            .cloned()
            .zip(game.action_names(profile).into_iter().map(Play::Pure))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::awareness::{build_figure1, Figure1Payoffs};
    use crate::library::{prisoners_dilemma, zero_one_game};
    use crate::machine::{build_roshambo, frpd_spec};
    use crate::rational::q;

    fn round_trip(doc: &GameDocument) {
        let text = doc.to_json();
        let back = parse(&text).unwrap();
        assert_eq!(&back, doc);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn normal_form_round_trip() {
        let g = zero_one_game(3);
        let body = NormalFormBody::from_game(&g);
        assert_eq!(body.payoffs[1][0][1], serde_json::json!(["2", "0", "2"]));
        assert_eq!(body.payoffs[1][1][1], serde_json::json!(["0", "0", "0"]));
        let doc = GameDocument::NormalForm(body.clone());
        round_trip(&doc);
        assert_eq!(body.to_game(&Limits::default()).unwrap(), g);
    }

    #[test]
    fn bayesian_and_compgame_round_trip() {
        let game = build_roshambo(&q("1"), &q("2")).unwrap();
        let body = CompGameBody::one_shot(&game);
        round_trip(&GameDocument::CompGame(body.clone()));
        assert_eq!(body.to_game(&Limits::default()).unwrap(), game.into());
        let spec = frpd_spec(10, q("9/10"), q("1/10")).unwrap();
        let rep = RepeatedSpecBody::standard(&spec, &StandardAutomaton::ALL);
        round_trip(&GameDocument::RepeatedSpec(rep.clone()));
        assert_eq!(rep.to_spec(&Limits::default()).unwrap(), spec);
        round_trip(&GameDocument::CompGame(CompGameBody::Repeated {
            spec: rep,
            charged: [true, false],
        }));
    }

    #[test]
    fn awareness_round_trip() {
        let g = build_figure1(&q("3/10"), &Figure1Payoffs::default()).unwrap();
        let body = AwarenessBody::from_gwa(&g);
        round_trip(&GameDocument::Awareness(body.clone()));
        assert_eq!(body.to_gwa(&Limits::default()).unwrap(), g);
    }

    #[test]
    fn explicit_automaton_matches_builtin() {
        let text = r#"{"format": 1, "kind": "repeated-spec", "body": {
            "stage": {"players": ["1", "2"], "actions": [["C", "D"], ["C", "D"]],
                      "payoffs": [[["3", "3"], ["-5", "5"]], [["5", "-5"], ["-3", "-3"]]]},
            "rounds": 5, "discount": "9/10", "memory_cost": "0",
            "space": [{"id": "TfT", "states": ["c", "d"], "initial": "c",
                       "output": {"c": "C", "d": "D"},
                       "transition": {"c": {"C": "c", "D": "d"}, "d": {"C": "c", "D": "d"}}}]}}"#;
        let body = parse(text).unwrap().into_repeated_spec().unwrap();
        let spec = body.to_spec(&Limits::default()).unwrap();
        let explicit = &body.automata(&spec, 0).unwrap()[0];
        let builtin = StandardAutomaton::TitForTat.build(5);
        assert_eq!(explicit.output(), builtin.output());
        assert_eq!(explicit.transition(), builtin.transition());
        assert!(body.standard_space().is_err());
    }

    #[test]
    fn profiles_round_trip() {
        let g = prisoners_dilemma();
        let mixed =
            MixedProfile::new(vec![vec![q("1/3"), q("2/3")], vec![q("0"), q("1")]]).unwrap();
        let body = ProfileBody::from_mixed(&g, &mixed);
        round_trip(&GameDocument::Profile(body.clone()));
        assert_eq!(body.to_mixed(&g).unwrap(), mixed);
        assert_eq!(body.strategies["2"], Play::Pure("D".into()));

        let mut gp = GeneralizedProfile::new();
        gp.set_pure("A", "m", "A", "down").set(
            "B",
            "m",
            "B",
            [("l".to_string(), q("1/2")), ("r".to_string(), q("1/2"))],
        );
        let body = GeneralizedProfileBody::from_profile(&gp);
        round_trip(&GameDocument::GeneralizedProfile(body.clone()));
        assert_eq!(body.to_profile().unwrap(), gp);
    }

    fn err(text: &str) -> FormatError {
        parse(text)
            .and_then(|d| {
                d.into_normal_form()?
                    .to_game(&Limits::default())
                    .map(|_| ())
            })
            .map(|_| {
                GameDocument::Profile(ProfileBody {
                    strategies: BTreeMap::new(),
                })
            })
            .unwrap_err()
    }

    const PD_HEAD: &str = r#"{"format": 1, "kind": "normal-form", "body": {"players": ["1", "2"], "actions": [["C", "D"], ["C", "D"]], "#;

    #[test]
    fn distinct_errors() {
        assert!(matches!(err(""), FormatError::Syntax { .. }));
        assert!(matches!(
            err("{\"format\": 2, \"kind\": \"normal-form\"}"),
            FormatError::Version(_)
        ));
        assert!(matches!(
            err("{\"format\": 1, \"kind\": \"chess\"}"),
            FormatError::UnknownKind(_)
        ));
        let bad_rational = format!(
            r#"{PD_HEAD}"payoffs": [[["3", "3"], ["-5", "5"]], [["5", "x/0"], ["-3", "-3"]]]}}}}"#
        );
        match err(&bad_rational) {
            FormatError::MalformedRational { at, .. } => assert_eq!(at, "payoffs[1][0][1]"),
            other => panic!("{other:?}"),
        }
        let missing =
            format!(r#"{PD_HEAD}"payoffs": [[["3", "3"], ["-5", "5"]], [["5", "-5"]]]}}}}"#);
        match err(&missing) {
            FormatError::MissingEntry { at } => assert_eq!(at, "payoffs[1][1]"),
            other => panic!("{other:?}"),
        }
        let unknown = format!("{PD_HEAD}\"payoffs\": [], \"colour\": 1}}}}");
        match err(&unknown) {
            FormatError::Field {
                path,
                line,
                column,
                message,
            } => {
                assert_eq!(path, "body.colour");
                assert_eq!(line, 1);
                assert!(column > 0);
                assert!(message.contains("unknown field"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn prior_that_does_not_sum_to_one_is_named() {
        let text = r#"{"format": 1, "kind": "bayesian", "body": {
            "players": ["1"], "types": [["a", "b"]], "actions": [["x"]],
            "prior": ["1/2", "2/5"], "utilities": [[["1"]], [["0"]]]}}"#;
        let e = parse(text)
            .unwrap()
            .into_bayesian()
            .unwrap()
            .to_game(&Limits::default())
            .unwrap_err();
        match e {
            FormatError::Game(Error::Distribution { at, reason }) => {
                assert_eq!(at, "prior");
                assert!(reason.contains("9/10"), "{reason}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_rational_in_typed_field() {
        let text = r#"{"format": 1, "kind": "compgame", "body": {"variant": "primality", "bit_length": 8, "cost_per_bit": "1/0"}}"#;
        assert!(matches!(
            parse(text),
            Err(FormatError::MalformedRational { .. })
        ));
    }
}
