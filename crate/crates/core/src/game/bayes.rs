use crate::error::{Error, Result};
use crate::game::normal::point_mass;
use crate::game::{
    check_distribution, check_epsilon, check_labels, product_size, Limits, Odometer,
};
use crate::rational::Rational;
use crate::verdict::{Verdict, Witness};

/// A finite Bayesian game: private types drawn from a common prior, and
/// utilities depending on the type profile and the action profile.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesianGame {
    players: Vec<String>,
    types: Vec<Vec<String>>,
    actions: Vec<Vec<String>>,
    prior: Vec<Rational>,
    utilities: Vec<Vec<Rational>>,
    type_strides: Vec<usize>,
    action_strides: Vec<usize>,
    action_profiles: usize,
}

fn strides(sizes: &[usize]) -> Vec<usize> {
    let mut s = vec![1; sizes.len()];
    for i in (0..sizes.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * sizes[i + 1];
    }
    s
}

impl BayesianGame {
    /// `prior` is indexed by type profile and `utilities` by
    /// `(type profile, action profile)`, both in lexicographic order with the
    /// type profile as the major index.
    pub fn new(
        players: Vec<String>,
        types: Vec<Vec<String>>,
        actions: Vec<Vec<String>>,
        prior: Vec<Rational>,
        utilities: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        check_labels("players", &players)?;
        let n = players.len();
        if types.len() != n || actions.len() != n {
            return Err(Error::Dimension(format!(
                "{n} players but {} type lists and {} action lists",
                types.len(),
                actions.len()
            )));
        }
        for i in 0..n {
            check_labels(&format!("types of {:?}", players[i]), &types[i])?;
            check_labels(&format!("actions of {:?}", players[i]), &actions[i])?;
        }
        let tsizes: Vec<usize> = types.iter().map(Vec::len).collect();
        let asizes: Vec<usize> = actions.iter().map(Vec::len).collect();
        let tcount = product_size(&tsizes);
        let acount = product_size(&asizes);
        Limits::default().check_entries("bayesian utility table", tcount.saturating_mul(acount))?;
        if prior.len() as u128 != tcount {
            return Err(Error::Dimension(format!(
                "prior has {} entries, expected {tcount}",
                prior.len()
            )));
        }
        check_distribution(&prior, || "prior".to_string())?;
        if utilities.len() as u128 != tcount * acount {
            return Err(Error::Dimension(format!(
                "utility table has {} entries, expected {}",
                utilities.len(),
                tcount * acount
            )));
        }
        if utilities.iter().any(|u| u.len() != n) {
            return Err(Error::Dimension(format!(
                "every utility entry needs {n} values"
            )));
        }
        Ok(BayesianGame {
            type_strides: strides(&tsizes),
            action_strides: strides(&asizes),
            action_profiles: acount as usize,
            players,
            types,
            actions,
            prior,
            utilities,
        })
    }

    /// Builds the tables by evaluating closures on every type/action profile.
    pub fn from_fn(
        players: Vec<String>,
        types: Vec<Vec<String>>,
        actions: Vec<Vec<String>>,
        mut prior: impl FnMut(&[usize]) -> Rational,
        mut utility: impl FnMut(&[usize], &[usize]) -> Vec<Rational>,
    ) -> Result<Self> {
        let tsizes: Vec<usize> = types.iter().map(Vec::len).collect();
        let asizes: Vec<usize> = actions.iter().map(Vec::len).collect();
        Limits::default().check_entries(
            "bayesian utility table",
            product_size(&tsizes).saturating_mul(product_size(&asizes)),
        )?;
        let prior_table = Odometer::new(&tsizes).map(|t| prior(&t)).collect();
        let mut utilities = Vec::new();
        for t in Odometer::new(&tsizes) {
            for a in Odometer::new(&asizes) {
                utilities.push(utility(&t, &a));
            }
        }
        Self::new(players, types, actions, prior_table, utilities)
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn types(&self, player: usize) -> &[String] {
        &self.types[player]
    }

    pub fn all_types(&self) -> &[Vec<String>] {
        &self.types
    }

    pub fn actions(&self, player: usize) -> &[String] {
        &self.actions[player]
    }

    pub fn all_actions(&self) -> &[Vec<String>] {
        &self.actions
    }

    pub fn type_counts(&self) -> Vec<usize> {
        self.types.iter().map(Vec::len).collect()
    }

    pub fn action_counts(&self) -> Vec<usize> {
        self.actions.iter().map(Vec::len).collect()
    }

    pub fn prior_table(&self) -> &[Rational] {
        &self.prior
    }

    pub fn utility_table(&self) -> &[Vec<Rational>] {
        &self.utilities
    }

    pub fn prior(&self, types: &[usize]) -> &Rational {
        &self.prior[index(types, &self.type_strides)]
    }

    pub fn utility(&self, types: &[usize], actions: &[usize]) -> &[Rational] {
        let t = index(types, &self.type_strides);
        let a = index(actions, &self.action_strides);
        &self.utilities[t * self.action_profiles + a]
    }

    pub fn player_index(&self, name: &str) -> Result<usize> {
        self.players
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::UnknownPlayer(name.to_string()))
    }

    /// Type profiles with positive prior probability, with that probability.
    pub fn type_profiles(&self) -> impl Iterator<Item = (Vec<usize>, &Rational)> + '_ {
        Odometer::new(&self.type_counts()).filter_map(move |t| {
            let p = self.prior(&t);
            (!p.is_zero()).then_some((t, p))
        })
    }
}

fn index(profile: &[usize], strides: &[usize]) -> usize {
    profile.iter().zip(strides).map(|(a, s)| a * s).sum()
}

/// For every player and every one of that player's types, a distribution
/// over the player's actions.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesianStrategyProfile {
    strategies: Vec<Vec<Vec<Rational>>>,
}

impl BayesianStrategyProfile {
    pub fn new(strategies: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        for (i, per_type) in strategies.iter().enumerate() {
            for (t, d) in per_type.iter().enumerate() {
                check_distribution(d, || format!("strategy of player #{i}, type #{t}"))?;
            }
        }
        Ok(BayesianStrategyProfile { strategies })
    }

    /// Deterministic profile: `choice[i][t]` is the action of type `t`.
    pub fn pure(game: &BayesianGame, choice: &[Vec<usize>]) -> Result<Self> {
        let strategies = choice
            .iter()
            .enumerate()
            .map(|(i, per_type)| {
                per_type
                    .iter()
                    .map(|&a| point_mass(game.actions(i).len(), a))
                    .collect()
            })
            .collect();
        let prof = BayesianStrategyProfile { strategies };
        prof.check_against(game)?;
        Ok(prof)
    }

    pub fn strategy(&self, player: usize, ty: usize) -> &[Rational] {
        &self.strategies[player][ty]
    }

    pub fn strategies(&self) -> &[Vec<Vec<Rational>>] {
        &self.strategies
    }

    pub fn check_against(&self, game: &BayesianGame) -> Result<()> {
        if self.strategies.len() != game.num_players() {
            return Err(Error::Dimension(format!(
                "profile covers {} players, game has {}",
                self.strategies.len(),
                game.num_players()
            )));
        }
        for (i, per_type) in self.strategies.iter().enumerate() {
            let types = game.types(i);
            if per_type.len() < types.len() {
                return Err(Error::UnknownType {
                    player: game.players()[i].clone(),
                    ty: types[per_type.len()].clone(),
                });
            }
            if per_type.len() > types.len() {
                return Err(Error::Dimension(format!(
                    "player {:?}: {} type entries for {} types",
                    game.players()[i],
                    per_type.len(),
                    types.len()
                )));
            }
            for d in per_type {
                if d.len() != game.actions(i).len() {
                    return Err(Error::Dimension(format!(
                        "player {:?}: strategy has {} weights for {} actions",
                        game.players()[i],
                        d.len(),
                        game.actions(i).len()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `(player, type, action)` overrides applied on top of a profile.
type Overrides<'a> = &'a [(usize, usize, usize)];

fn expected_with(
    game: &BayesianGame,
    profile: &BayesianStrategyProfile,
    overrides: Overrides<'_>,
) -> Vec<Rational> {
    let n = game.num_players();
    let one = Rational::one();
    let mut total = vec![Rational::zero(); n];
    let mut actions = vec![0; n];
    for (types, p) in game.type_profiles() {
        let supports: Vec<Vec<(usize, &Rational)>> = (0..n)
            .map(|i| {
                match overrides
                    .iter()
                    .find(|(pl, ty, _)| *pl == i && *ty == types[i])
                {
                    Some(&(_, _, a)) => vec![(a, &one)],
                    None => profile.strategies[i][types[i]]
                        .iter()
                        .enumerate()
                        .filter(|(_, w)| !w.is_zero())
                        .collect(),
                }
            })
            .collect();
        let sizes: Vec<usize> = supports.iter().map(Vec::len).collect();
        for pick in Odometer::new(&sizes) {
            let mut weight = p.clone();
            for (i, &k) in pick.iter().enumerate() {
                let (a, w) = supports[i][k];
                actions[i] = a;
                weight *= w;
            }
            for (acc, u) in total.iter_mut().zip(game.utility(&types, &actions)) {
                *acc += &weight * u;
            }
        }
    }
    total
}

/// Ex-ante expected utility of every player.
pub fn bayes_expected_utility(
    game: &BayesianGame,
    profile: &BayesianStrategyProfile,
) -> Result<Vec<Rational>> {
    profile.check_against(game)?;
    Ok(expected_with(game, profile, &[]))
}

/// Whether no player can raise ex-ante utility by more than `epsilon` with
/// any alternative type-to-action map.
///
/// Ex-ante utility is additive across a player's own types, so the best
/// whole-map deviation combines the best pure action of each type. The
/// witness lists exactly those types whose switch strictly helps; types not
/// listed keep their strategy.
pub fn is_bayes_nash(
    game: &BayesianGame,
    profile: &BayesianStrategyProfile,
    epsilon: &Rational,
) -> Result<Verdict> {
    check_epsilon(epsilon)?;
    profile.check_against(game)?;
    let current = expected_with(game, profile, &[]);
    for (player, now) in current.iter().enumerate() {
        let mut improvements = Vec::new();
        for ty in 0..game.types(player).len() {
            let mut best: Option<(Rational, usize)> = None;
            for a in 0..game.actions(player).len() {
                let v = expected_with(game, profile, &[(player, ty, a)])[player].clone();
                if v > *now && best.as_ref().is_none_or(|(b, _)| v > *b) {
                    best = Some((v, a));
                }
            }
            if let Some((_, a)) = best {
                improvements.push((player, ty, a));
            }
        }
        if improvements.is_empty() {
            continue;
        }
        let after = expected_with(game, profile, &improvements)[player].clone();
        if after > now + epsilon {
            let witness = Witness::TypeDeviation {
                player: game.players()[player].clone(),
                switches: improvements
                    .iter()
                    .map(|&(_, t, a)| {
                        (
                            game.types(player)[t].clone(),
                            game.actions(player)[a].clone(),
                        )
                    })
                    .collect(),
                before: now.clone(),
                after,
            };
            return Ok(Verdict::fail(witness));
        }
    }
    Ok(Verdict::pass())
}

/// Ex-ante utility with selected `(player, type)` pairs forced to a pure
/// action; used to audit [`Witness::TypeDeviation`] witnesses.
pub fn bayes_expected_utility_with(
    game: &BayesianGame,
    profile: &BayesianStrategyProfile,
    overrides: &[(usize, usize, usize)],
) -> Result<Vec<Rational>> {
    profile.check_against(game)?;
    Ok(expected_with(game, profile, overrides))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn s(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|x| x.to_string()).collect()
    }

    /// General with preference type 0/1 (prob 1/2 each) and a follower
    /// with a single type; both pick an action 0/1 and earn 1 for matching
    /// the general's type.
    fn two_type_game() -> BayesianGame {
        BayesianGame::from_fn(
            s(&["general", "follower"]),
            vec![s(&["0", "1"]), s(&["-"])],
            vec![s(&["0", "1"]), s(&["0", "1"])],
            |_| q("1/2"),
            |t, a| {
                a.iter()
                    .map(|&x| if x == t[0] { q("1") } else { q("0") })
                    .collect()
            },
        )
        .unwrap()
    }

    #[test]
    fn single_type_reduces_to_normal_form() {
        let g = BayesianGame::from_fn(
            s(&["a", "b"]),
            vec![s(&["t"]), s(&["t"])],
            vec![s(&["x", "y"]), s(&["x", "y"])],
            |_| q("1"),
            |_, a| vec![Rational::integer(a[0] as i64 * 2 + a[1] as i64), q("0")],
        )
        .unwrap();
        let prof = BayesianStrategyProfile::new(vec![
            vec![vec![q("1/4"), q("3/4")]],
            vec![vec![q("1/2"), q("1/2")]],
        ])
        .unwrap();
        let nf =
            crate::game::NormalFormGame::from_fn(s(&["a", "b"]), vec![s(&["x", "y"]); 2], |a| {
                vec![Rational::integer(a[0] as i64 * 2 + a[1] as i64), q("0")]
            })
            .unwrap();
        let mp = crate::game::MixedProfile::new(vec![
            vec![q("1/4"), q("3/4")],
            vec![q("1/2"), q("1/2")],
        ])
        .unwrap();
        assert_eq!(
            bayes_expected_utility(&g, &prof).unwrap(),
            crate::game::expected_utility(&nf, &mp).unwrap()
        );
    }

    #[test]
    fn constant_strategies_average_the_two_types() {
        let g = two_type_game();
        // Both always play 1: correct only when the general's type is 1.
        let prof = BayesianStrategyProfile::pure(&g, &[vec![1, 1], vec![1]]).unwrap();
        let u = bayes_expected_utility(&g, &prof).unwrap();
        // (1/2)*0 + (1/2)*1 for each player.
        assert_eq!(u, vec![q("1/2"), q("1/2")]);
    }

    #[test]
    fn zero_prior_type_is_irrelevant() {
        let g = BayesianGame::from_fn(
            s(&["p"]),
            vec![s(&["likely", "never"])],
            vec![s(&["a", "b"])],
            |t| if t[0] == 0 { q("1") } else { q("0") },
            |t, a| vec![Rational::integer((t[0] * 10 + a[0]) as i64)],
        )
        .unwrap();
        let p1 = BayesianStrategyProfile::pure(&g, &[vec![1, 0]]).unwrap();
        let p2 = BayesianStrategyProfile::pure(&g, &[vec![1, 1]]).unwrap();
        assert_eq!(
            bayes_expected_utility(&g, &p1).unwrap(),
            bayes_expected_utility(&g, &p2).unwrap()
        );
    }

    #[test]
    fn pointwise_optimal_strategies_are_equilibrium() {
        let g = two_type_game();
        let prof = BayesianStrategyProfile::pure(&g, &[vec![0, 1], vec![0]]).unwrap();
        // Follower's single type cannot do better than 1/2.
        assert!(is_bayes_nash(&g, &prof, &Rational::zero()).unwrap().holds);
    }

    #[test]
    fn dominated_type_action_is_the_witness() {
        let g = two_type_game();
        // General of type 1 plays the strictly dominated action 0.
        let prof = BayesianStrategyProfile::pure(&g, &[vec![0, 0], vec![0]]).unwrap();
        let v = is_bayes_nash(&g, &prof, &Rational::zero()).unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.witness,
            Some(Witness::TypeDeviation {
                player: "general".into(),
                switches: vec![("1".into(), "1".into())],
                before: q("1/2"),
                after: q("1"),
            })
        );
        let audited = bayes_expected_utility_with(&g, &prof, &[(0, 1, 1)]).unwrap();
        assert_eq!(audited[0], q("1"));
    }

    #[test]
    fn missing_type_entry_is_reported() {
        let g = two_type_game();
        let prof = BayesianStrategyProfile::new(vec![
            vec![vec![q("1"), q("0")]],
            vec![vec![q("1"), q("0")]],
        ])
        .unwrap();
        assert!(matches!(
            bayes_expected_utility(&g, &prof),
            Err(Error::UnknownType { .. })
        ));
    }

    #[test]
    fn prior_must_sum_to_one() {
        let err = BayesianGame::new(
            s(&["p"]),
            vec![s(&["a", "b"])],
            vec![s(&["x"])],
            vec![q("1/2"), q("2/5")],
            vec![vec![q("0")], vec![q("0")]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Distribution { ref at, .. } if at == "prior"));
    }
}
