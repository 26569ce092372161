use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::tree::{DisplayHistory, ExtensiveGame, History, NodeKind};
use crate::error::{Error, Result};
use crate::verdict::{Verdict, Witness};

/// An extensive game annotated with awareness levels and virtual moves,
/// identified by name inside a game with awareness.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedGame {
    pub name: String,
    pub game: ExtensiveGame,
}

/// One entry of the belief map: at `history` of game `game`, the mover
/// believes the true game is `target_game` and is at `info_set` there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeliefEntry {
    pub game: String,
    pub history: History,
    pub target_game: String,
    pub info_set: String,
}

/// Index of a node inside one of the augmented games.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeRef {
    pub game: usize,
    pub node: usize,
}

/// Index of an information set inside one of the augmented games.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InfoRef {
    pub game: usize,
    pub info_set: usize,
}

/// A game with awareness: augmented games over one underlying game, the
/// modeler's game among them, and the map `F` giving, at every decision
/// node, the game the mover believes is being played and their
/// information set in it.
#[derive(Debug, Clone, PartialEq)]
pub struct GameWithAwareness {
    underlying: ExtensiveGame,
    games: Vec<AugmentedGame>,
    modeler: usize,
    beliefs: BTreeMap<NodeRef, InfoRef>,
}

/// A (player, game) pair that needs a strategy, with the information sets
/// the strategy must cover and the subset the player can revise when that
/// game is the true one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategySlot {
    pub player: usize,
    pub game: usize,
    pub domain: Vec<usize>,
    pub local: Vec<usize>,
}

impl GameWithAwareness {
    pub fn new(
        underlying: ExtensiveGame,
        games: Vec<AugmentedGame>,
        modeler: &str,
        beliefs: &[BeliefEntry],
    ) -> Result<Self> {
        let names: Vec<String> = games.iter().map(|g| g.name.clone()).collect();
        crate::game::check_labels("augmented games", &names)?;
        for g in &games {
            if g.game.players() != underlying.players() {
                return Err(Error::InvalidGame(format!(
                    "augmented game {:?} has different players from the underlying game",
                    g.name
                )));
            }
        }
        let find = |name: &str| {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::InvalidGame(format!("unknown augmented game {name:?}")))
        };
        let modeler = find(modeler)?;
        let mut map = BTreeMap::new();
        for e in beliefs {
            let g = find(&e.game)?;
            let node = games[g].game.node_at(&e.history).ok_or_else(|| {
                Error::InvalidGame(format!(
                    "no node {} in {:?}",
                    DisplayHistory(&e.history),
                    e.game
                ))
            })?;
            if games[g].game.node(node).player().is_none() {
                return Err(Error::InvalidGame(format!(
                    "{} in {:?} is not a player's decision node",
                    DisplayHistory(&e.history),
                    e.game
                )));
            }
            let tg = find(&e.target_game)?;
            let info_set = games[tg].game.info_set_index(&e.info_set).ok_or_else(|| {
                Error::InvalidGame(format!(
                    "no information set {:?} in {:?}",
                    e.info_set, e.target_game
                ))
            })?;
            let from = NodeRef { game: g, node };
            if map.insert(from, InfoRef { game: tg, info_set }).is_some() {
                return Err(Error::InvalidGame(format!(
                    "two belief entries for {} in {:?}",
                    DisplayHistory(&e.history),
                    e.game
                )));
            }
        }
        Ok(GameWithAwareness {
            underlying,
            games,
            modeler,
            beliefs: map,
        })
    }

    pub fn underlying(&self) -> &ExtensiveGame {
        &self.underlying
    }

    pub fn games(&self) -> &[AugmentedGame] {
        &self.games
    }

    pub fn game(&self, g: usize) -> &ExtensiveGame {
        &self.games[g].game
    }

    pub fn modeler(&self) -> usize {
        self.modeler
    }

    pub fn players(&self) -> &[String] {
        self.underlying.players()
    }

    pub fn game_index(&self, name: &str) -> Result<usize> {
        self.games
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::InvalidGame(format!("unknown augmented game {name:?}")))
    }

    pub fn belief(&self, at: NodeRef) -> Option<InfoRef> {
        self.beliefs.get(&at).copied()
    }

    pub fn beliefs(&self) -> impl Iterator<Item = (NodeRef, InfoRef)> + '_ {
        self.beliefs.iter().map(|(a, b)| (*a, *b))
    }

    /// Belief entries with names resolved, in node order.
    pub fn belief_entries(&self) -> Vec<BeliefEntry> {
        self.beliefs()
            .map(|(from, to)| BeliefEntry {
                game: self.games[from.game].name.clone(),
                history: self.game(from.game).node(from.node).history.clone(),
                target_game: self.games[to.game].name.clone(),
                info_set: self.game(to.game).info_sets()[to.info_set].id.clone(),
            })
            .collect()
    }

    /// The histories of the underlying game the mover at `at` is aware of.
    pub fn awareness_level(&self, at: NodeRef) -> Vec<History> {
        match &self.game(at.game).node(at.node).kind {
            NodeKind::Decision {
                awareness: Some(a), ..
            } => a.iter().cloned().collect(),
            _ => self.underlying.histories().cloned().collect(),
        }
    }

    /// The (player, game) pairs that need strategies, ordered by player and
    /// then game. `domain` holds the information sets that `F` points at;
    /// `local` those pointed at from inside the same game.
    pub fn strategy_slots(&self) -> Vec<StrategySlot> {
        let mut domain: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
        let mut local: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
        for (from, to) in self.beliefs() {
            let player = self.game(to.game).info_sets()[to.info_set].player;
            domain
                .entry((player, to.game))
                .or_default()
                .insert(to.info_set);
            if from.game == to.game {
                local
                    .entry((player, to.game))
                    .or_default()
                    .insert(to.info_set);
            }
        }
        domain
            .into_iter()
            .map(|((player, game), d)| StrategySlot {
                player,
                game,
                domain: d.into_iter().collect(),
                local: local
                    .remove(&(player, game))
                    .map(|s| s.into_iter().collect())
                    .unwrap_or_default(),
            })
            .collect()
    }
}

/// Checks the consistency conditions on `F` and on awareness levels:
///
/// - `F` is defined at every decision node of every augmented game;
/// - the information set `F` returns belongs to the player moving at the node;
/// - every move available at that information set is available at the node;
/// - at every node of that information set, `F` returns the same game and set;
/// - awareness levels only mention histories of the underlying game.
///
/// Each condition gets a sub-verdict whose witness is its first violation.
pub fn validate(gwa: &GameWithAwareness) -> Verdict {
    let mut total = None;
    let mut owner = None;
    let mut moves = None;
    let mut introspection = None;
    let mut awareness = None;
    let underlying: BTreeSet<&History> = gwa.underlying.histories().collect();
    let witness =
        |condition: &str, game: usize, node: usize, detail: String| Witness::Inconsistency {
            condition: condition.to_string(),
            game: gwa.games[game].name.clone(),
            node: DisplayHistory(&gwa.game(game).node(node).history).to_string(),
            detail,
        };
    for (g, aug) in gwa.games.iter().enumerate() {
        for n in aug.game.decision_nodes() {
            let node = aug.game.node(n);
            let mover = node.player().expect("decision node");
            if let NodeKind::Decision {
                awareness: Some(a), ..
            } = &node.kind
            {
                if let Some(h) = a.iter().find(|h| !underlying.contains(h)) {
                    awareness.get_or_insert_with(|| {
                        witness(
                            "awareness",
                            g,
                            n,
                            format!(
                                "{} is not a history of the underlying game",
                                DisplayHistory(h)
                            ),
                        )
                    });
                }
            }
            let Some(to) = gwa.belief(NodeRef { game: g, node: n }) else {
                total.get_or_insert_with(|| witness("total", g, n, "no belief entry".into()));
                continue;
            };
            let target = gwa.game(to.game);
            let set = &target.info_sets()[to.info_set];
            if set.player != mover {
                owner.get_or_insert_with(|| {
                    witness(
                        "owner",
                        g,
                        n,
                        format!(
                            "mover is {:?} but information set {:?} of {:?} belongs to {:?}",
                            gwa.players()[mover],
                            set.id,
                            gwa.games[to.game].name,
                            gwa.players()[set.player]
                        ),
                    )
                });
            }
            if let Some(m) = set.moves.iter().find(|m| !node.moves().contains(m)) {
                moves.get_or_insert_with(|| {
                    witness(
                        "moves",
                        g,
                        n,
                        format!(
                            "move {m:?} of information set {:?} in {:?} is not available here",
                            set.id, gwa.games[to.game].name
                        ),
                    )
                });
            }
            for &other in &set.nodes {
                let back = gwa.belief(NodeRef {
                    game: to.game,
                    node: other,
                });
                if back != Some(to) {
                    introspection.get_or_insert_with(|| {
                        witness(
                            "introspection",
                            to.game,
                            other,
                            format!(
                                "member of {:?} whose belief is not ({:?}, {:?})",
                                set.id, gwa.games[to.game].name, set.id
                            ),
                        )
                    });
                }
            }
        }
    }
    let v = |w: Option<Witness>| w.map_or_else(Verdict::pass, Verdict::fail);
    Verdict::all(vec![
        ("total".into(), v(total)),
        ("owner".into(), v(owner)),
        ("moves".into(), v(moves)),
        ("introspection".into(), v(introspection)),
        ("awareness".into(), v(awareness)),
    ])
}

/// The game with awareness in which it is common knowledge that `game` is
/// being played: a single augmented game that maps every node to its own
/// information set.
pub fn canonical_representation(game: &ExtensiveGame) -> GameWithAwareness {
    const NAME: &str = "canonical";
    let beliefs: Vec<BeliefEntry> = game
        .decision_nodes()
        .map(|n| {
            let node = game.node(n);
            BeliefEntry {
                game: NAME.into(),
                history: node.history.clone(),
                target_game: NAME.into(),
                info_set: game.info_sets()[node.info_set().expect("decision node")]
                    .id
                    .clone(),
            }
        })
        .collect();
    GameWithAwareness::new(
        game.clone(),
        vec![AugmentedGame {
            name: NAME.into(),
            game: game.clone(),
        }],
        NAME,
        &beliefs,
    )
    .expect("canonical representation is well formed")
}
