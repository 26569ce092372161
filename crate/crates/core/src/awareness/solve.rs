use std::collections::BTreeMap;

use super::gwa::{validate, GameWithAwareness, NodeRef, StrategySlot};
use super::tree::{ExtensiveGame, History, NodeKind};
use crate::error::{Error, Result};
use crate::game::{check_distribution, check_epsilon, product_size, Limits, Odometer};
use crate::rational::Rational;
use crate::verdict::{Verdict, Witness};

/// Move distribution at one information set, keyed by move label. Moves
/// that are not listed get probability zero.
pub type MoveDistribution = BTreeMap<String, Rational>;

/// One behavioral strategy per (player, augmented game) pair.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GeneralizedProfile {
    entries: BTreeMap<(String, String), BTreeMap<String, MoveDistribution>>,
}

impl GeneralizedProfile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(
        &mut self,
        player: &str,
        game: &str,
        info_set: &str,
        dist: impl IntoIterator<Item = (String, Rational)>,
    ) -> &mut Self {
        self.entries
            .entry((player.to_string(), game.to_string()))
            .or_default()
            .insert(info_set.to_string(), dist.into_iter().collect());
        self
    }

    /// Plays `action` with certainty at `info_set`.
    pub fn set_pure(
        &mut self,
        player: &str,
        game: &str,
        info_set: &str,
        action: &str,
    ) -> &mut Self {
        self.set(
            player,
            game,
            info_set,
            [(action.to_string(), Rational::one())],
        )
    }

    pub fn strategy(
        &self,
        player: &str,
        game: &str,
    ) -> Option<&BTreeMap<String, MoveDistribution>> {
        self.entries.get(&(player.to_string(), game.to_string()))
    }

    /// `(player, game, info set, distribution)` in sorted order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, &str, &MoveDistribution)> {
        self.entries.iter().flat_map(|((p, g), sets)| {
            sets.iter()
                .map(move |(i, d)| (p.as_str(), g.as_str(), i.as_str(), d))
        })
    }

    /// Checks labels, distributions, and that every required information set
    /// has a strategy.
    pub fn check_against(&self, gwa: &GameWithAwareness) -> Result<()> {
        for ((player, game), sets) in &self.entries {
            let p = gwa.underlying().player_index(player)?;
            let g = gwa.game_index(game)?;
            let eg = gwa.game(g);
            for (id, dist) in sets {
                let s = eg.info_set_index(id).ok_or_else(|| {
                    Error::InvalidGame(format!("no information set {id:?} in {game:?}"))
                })?;
                let set = &eg.info_sets()[s];
                if set.player != p {
                    return Err(Error::InvalidGame(format!(
                        "information set {id:?} in {game:?} does not belong to {player:?}"
                    )));
                }
                if let Some(m) = dist.keys().find(|m| !set.moves.contains(m)) {
                    return Err(Error::UnknownAction {
                        player: player.clone(),
                        action: m.clone(),
                    });
                }
                let weights: Vec<Rational> = dist.values().cloned().collect();
                check_distribution(&weights, || {
                    format!("strategy of {player:?} in {game:?} at {id:?}")
                })?;
            }
        }
        for slot in gwa.strategy_slots() {
            for &s in &slot.domain {
                self.lookup(gwa, slot.player, slot.game, s)?;
            }
        }
        Ok(())
    }

    fn lookup(
        &self,
        gwa: &GameWithAwareness,
        player: usize,
        game: usize,
        info_set: usize,
    ) -> Result<&MoveDistribution> {
        let pname = &gwa.players()[player];
        let gname = &gwa.games()[game].name;
        let id = &gwa.game(game).info_sets()[info_set].id;
        let missing = || Error::MissingStrategy {
            player: pname.clone(),
            game: gname.clone(),
            info_set: Some(id.clone()),
        };
        self.entries
            .get(&(pname.clone(), gname.clone()))
            .ok_or_else(missing)?
            .get(id)
            .ok_or_else(missing)
    }
}

/// Move probabilities at every node of one game, aligned with the node's
/// move list. Terminal nodes get an empty vector.
type NodeDists = Vec<Vec<Rational>>;

fn node_dists(
    gwa: &GameWithAwareness,
    game: usize,
    profile: &GeneralizedProfile,
) -> Result<NodeDists> {
    let eg = gwa.game(game);
    let mut out = Vec::with_capacity(eg.nodes().len());
    for (n, node) in eg.nodes().iter().enumerate() {
        out.push(match &node.kind {
            NodeKind::Chance { probs, .. } => probs.clone(),
            NodeKind::Terminal { .. } => Vec::new(),
            NodeKind::Decision { player, moves, .. } => {
                let to = gwa
                    .belief(NodeRef { game, node: n })
                    .ok_or_else(|| Error::Inconsistent("belief map is not total".into()))?;
                let dist = profile.lookup(gwa, *player, to.game, to.info_set)?;
                moves
                    .iter()
                    .map(|m| dist.get(m).cloned().unwrap_or_else(Rational::zero))
                    .collect()
            }
        });
    }
    Ok(out)
}

fn walk(
    eg: &ExtensiveGame,
    dists: &NodeDists,
    n: usize,
    prob: &Rational,
    visit: &mut impl FnMut(usize, &Rational),
) {
    let node = eg.node(n);
    if let NodeKind::Terminal { .. } = node.kind {
        visit(n, prob);
        return;
    }
    for (c, w) in node.children().iter().zip(&dists[n]) {
        if !w.is_zero() {
            walk(eg, dists, *c, &(prob * w), visit);
        }
    }
}

fn expected_payoffs(eg: &ExtensiveGame, dists: &NodeDists) -> Vec<Rational> {
    let mut acc = vec![Rational::zero(); eg.num_players()];
    walk(eg, dists, 0, &Rational::one(), &mut |n, p| {
        if let NodeKind::Terminal { payoffs } = &eg.node(n).kind {
            for (a, u) in acc.iter_mut().zip(payoffs) {
                *a += p * u;
            }
        }
    });
    acc
}

fn require_valid(gwa: &GameWithAwareness) -> Result<()> {
    let v = validate(gwa);
    if !v.holds {
        return Err(Error::Inconsistent(format!(
            "game with awareness fails validation: {:?}",
            v.witness
        )));
    }
    Ok(())
}

/// Probability of each terminal history of `game` with positive mass when
/// play at every node follows the strategy of the game its mover believes in.
pub fn outcome_distribution(
    gwa: &GameWithAwareness,
    game: usize,
    profile: &GeneralizedProfile,
) -> Result<Vec<(History, Rational)>> {
    require_valid(gwa)?;
    profile.check_against(gwa)?;
    let eg = gwa.game(game);
    let dists = node_dists(gwa, game, profile)?;
    let mut out = Vec::new();
    walk(eg, &dists, 0, &Rational::one(), &mut |n, p| {
        out.push((eg.node(n).history.clone(), p.clone()))
    });
    Ok(out)
}

/// Expected payoffs in `game` under the profile.
pub fn generalized_expected_utility(
    gwa: &GameWithAwareness,
    game: usize,
    profile: &GeneralizedProfile,
) -> Result<Vec<Rational>> {
    require_valid(gwa)?;
    profile.check_against(gwa)?;
    Ok(expected_payoffs(
        gwa.game(game),
        &node_dists(gwa, game, profile)?,
    ))
}

fn local_nodes(gwa: &GameWithAwareness, slot: &StrategySlot) -> Vec<(usize, Vec<usize>)> {
    slot.local
        .iter()
        .map(|&s| {
            let nodes = gwa
                .beliefs()
                .filter(|(from, to)| {
                    from.game == slot.game && to.game == slot.game && to.info_set == s
                })
                .map(|(from, _)| from.node)
                .collect();
            (s, nodes)
        })
        .collect()
}

/// Best pure deviation of one slot: `(gain, choice per local set, after)`.
fn best_deviation(
    gwa: &GameWithAwareness,
    slot: &StrategySlot,
    base_dists: &NodeDists,
    base: &Rational,
) -> Option<(Vec<usize>, Rational)> {
    let eg = gwa.game(slot.game);
    let sets = local_nodes(gwa, slot);
    let sizes: Vec<usize> = sets
        .iter()
        .map(|(s, _)| eg.info_sets()[*s].moves.len())
        .collect();
    let mut best: Option<(Vec<usize>, Rational)> = None;
    let mut dists = base_dists.clone();
    for choice in Odometer::new(&sizes) {
        for ((s, nodes), &c) in sets.iter().zip(&choice) {
            let label = &eg.info_sets()[*s].moves[c];
            for &n in nodes {
                let moves = eg.node(n).moves();
                dists[n] = moves
                    .iter()
                    .map(|m| {
                        if m == label {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect();
            }
        }
        let after = expected_payoffs(eg, &dists).swap_remove(slot.player);
        if &after > base && best.as_ref().is_none_or(|(_, b)| &after > b) {
            best = Some((choice, after));
        }
    }
    best
}

fn deviation_work(gwa: &GameWithAwareness, slots: &[StrategySlot]) -> u128 {
    slots
        .iter()
        .map(|slot| {
            let eg = gwa.game(slot.game);
            let sizes: Vec<usize> = slot
                .local
                .iter()
                .map(|&s| eg.info_sets()[s].moves.len())
                .collect();
            product_size(&sizes).saturating_mul(eg.nodes().len() as u128)
        })
        .fold(0u128, u128::saturating_add)
}

/// Checks every (player, game) pair: switching that pair's strategy at the
/// information sets the game's own nodes believe in must not raise the
/// player's expected payoff in that game by more than `epsilon`. The witness
/// is the best pure deviation of the first failing pair.
pub fn is_generalized_nash(
    gwa: &GameWithAwareness,
    profile: &GeneralizedProfile,
    epsilon: &Rational,
) -> Result<Verdict> {
    is_generalized_nash_with(gwa, profile, epsilon, &Limits::default())
}

pub fn is_generalized_nash_with(
    gwa: &GameWithAwareness,
    profile: &GeneralizedProfile,
    epsilon: &Rational,
    limits: &Limits,
) -> Result<Verdict> {
    check_epsilon(epsilon)?;
    require_valid(gwa)?;
    profile.check_against(gwa)?;
    let slots = gwa.strategy_slots();
    limits.check_work("generalized deviations", deviation_work(gwa, &slots))?;
    check_slots(gwa, &slots, profile, epsilon)
}

fn check_slots(
    gwa: &GameWithAwareness,
    slots: &[StrategySlot],
    profile: &GeneralizedProfile,
    epsilon: &Rational,
) -> Result<Verdict> {
    let mut cache: BTreeMap<usize, (NodeDists, Vec<Rational>)> = BTreeMap::new();
    for slot in slots {
        if slot.local.is_empty() {
            continue;
        }
        if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(slot.game) {
            let d = node_dists(gwa, slot.game, profile)?;
            let u = expected_payoffs(gwa.game(slot.game), &d);
            e.insert((d, u));
        }
        let (dists, payoffs) = &cache[&slot.game];
        let base = &payoffs[slot.player];
        if let Some((choice, after)) = best_deviation(gwa, slot, dists, base) {
            if &after - base > *epsilon {
                let eg = gwa.game(slot.game);
                let strategy = slot
                    .local
                    .iter()
                    .zip(&choice)
                    .map(|(&s, &c)| {
                        let set = &eg.info_sets()[s];
                        (set.id.clone(), set.moves[c].clone())
                    })
                    .collect();
                return Ok(Verdict::fail(Witness::StrategyDeviation {
                    player: gwa.players()[slot.player].clone(),
                    game: gwa.games()[slot.game].name.clone(),
                    strategy,
                    before: base.clone(),
                    after,
                }));
            }
        }
    }
    Ok(Verdict::pass())
}

/// Every pure generalized profile that passes [`is_generalized_nash`] with
/// `epsilon = 0`. Profiles are enumerated slot by slot (player, then game),
/// information sets in tree order, moves in declared order.
pub fn find_pure_generalized_nash(
    gwa: &GameWithAwareness,
    limits: &Limits,
) -> Result<Vec<GeneralizedProfile>> {
    require_valid(gwa)?;
    let slots = gwa.strategy_slots();
    let cells: Vec<(usize, usize, usize)> = slots
        .iter()
        .flat_map(|s| s.domain.iter().map(move |&i| (s.player, s.game, i)))
        .collect();
    let sizes: Vec<usize> = cells
        .iter()
        .map(|&(_, g, i)| gwa.game(g).info_sets()[i].moves.len())
        .collect();
    let profiles = product_size(&sizes);
    limits.check_entries("pure generalized profiles", profiles)?;
    limits.check_work(
        "pure generalized search",
        profiles.saturating_mul(deviation_work(gwa, &slots).max(1)),
    )?;
    let zero = Rational::zero();
    let mut out = Vec::new();
    for choice in Odometer::new(&sizes) {
        let mut profile = GeneralizedProfile::new();
        for (&(p, g, i), &c) in cells.iter().zip(&choice) {
            let set = &gwa.game(g).info_sets()[i];
            profile.set_pure(
                &gwa.players()[p],
                &gwa.games()[g].name,
                &set.id,
                &set.moves[c],
            );
        }
        if check_slots(gwa, &slots, &profile, &zero)?.holds {
            out.push(profile);
        }
    }
    Ok(out)
}
