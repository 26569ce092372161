use crate::error::{Error, Result};
use crate::game::{
    check_distribution, check_epsilon, check_labels, product_size, Limits, Odometer,
};
use crate::rational::Rational;
use crate::verdict::{Verdict, Witness};

/// A finite game in normal form with a dense payoff table.
///
/// Pure profiles are indexed in mixed radix with the first player most
/// significant, so table order is lexicographic in declared action order.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormGame {
    players: Vec<String>,
    actions: Vec<Vec<String>>,
    payoffs: Vec<Vec<Rational>>,
    strides: Vec<usize>,
}

impl NormalFormGame {
    pub fn new(
        players: Vec<String>,
        actions: Vec<Vec<String>>,
        payoffs: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        Self::with_limits(players, actions, payoffs, &Limits::default())
    }

    pub fn with_limits(
        players: Vec<String>,
        actions: Vec<Vec<String>>,
        payoffs: Vec<Vec<Rational>>,
        limits: &Limits,
    ) -> Result<Self> {
        check_labels("players", &players)?;
        if actions.len() != players.len() {
            return Err(Error::Dimension(format!(
                "{} players but {} action lists",
                players.len(),
                actions.len()
            )));
        }
        for (p, acts) in players.iter().zip(&actions) {
            check_labels(&format!("actions of {p:?}"), acts)?;
        }
        let sizes: Vec<usize> = actions.iter().map(Vec::len).collect();
        let total = product_size(&sizes);
        limits.check_entries("payoff table", total)?;
        if payoffs.len() as u128 != total {
            return Err(Error::Dimension(format!(
                "payoff table has {} entries, expected {total}",
                payoffs.len()
            )));
        }
        if let Some((i, row)) = payoffs
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != players.len())
        {
            return Err(Error::Dimension(format!(
                "payoff entry {i} has {} values for {} players",
                row.len(),
                players.len()
            )));
        }
        let mut strides = vec![1; sizes.len()];
        for i in (0..sizes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * sizes[i + 1];
        }
        Ok(NormalFormGame {
            players,
            actions,
            payoffs,
            strides,
        })
    }

    /// Builds the table by evaluating `payoff` on every pure profile.
    pub fn from_fn(
        players: Vec<String>,
        actions: Vec<Vec<String>>,
        mut payoff: impl FnMut(&[usize]) -> Vec<Rational>,
    ) -> Result<Self> {
        let sizes: Vec<usize> = actions.iter().map(Vec::len).collect();
        Limits::default().check_entries("payoff table", product_size(&sizes))?;
        let payoffs = Odometer::new(&sizes).map(|p| payoff(&p)).collect();
        Self::new(players, actions, payoffs)
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn player_name(&self, player: usize) -> &str {
        &self.players[player]
    }

    pub fn actions(&self, player: usize) -> &[String] {
        &self.actions[player]
    }

    pub fn all_actions(&self) -> &[Vec<String>] {
        &self.actions
    }

    pub fn action_counts(&self) -> Vec<usize> {
        self.actions.iter().map(Vec::len).collect()
    }

    pub fn num_profiles(&self) -> usize {
        self.payoffs.len()
    }

    pub fn player_index(&self, name: &str) -> Result<usize> {
        self.players
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::UnknownPlayer(name.to_string()))
    }

    pub fn action_index(&self, player: usize, name: &str) -> Result<usize> {
        self.check_player(player)?;
        self.actions[player]
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::UnknownAction {
                player: self.players[player].clone(),
                action: name.to_string(),
            })
    }

    pub fn check_player(&self, player: usize) -> Result<()> {
        if player >= self.players.len() {
            return Err(Error::UnknownPlayer(format!("#{player}")));
        }
        Ok(())
    }

    pub fn profile_index(&self, profile: &[usize]) -> usize {
        profile.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    /// Payoff vector of a pure profile.
    pub fn payoff(&self, profile: &[usize]) -> &[Rational] {
        &self.payoffs[self.profile_index(profile)]
    }

    pub fn payoff_table(&self) -> &[Vec<Rational>] {
        &self.payoffs
    }

    /// Every pure profile in lexicographic order.
    pub fn pure_profiles(&self) -> Odometer {
        Odometer::new(&self.action_counts())
    }

    pub fn action_names(&self, profile: &[usize]) -> Vec<String> {
        profile
            .iter()
            .enumerate()
            .map(|(i, &a)| self.actions[i][a].clone())
            .collect()
    }
}

/// One probability distribution over actions per player.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedProfile {
    dists: Vec<Vec<Rational>>,
}

impl MixedProfile {
    pub fn new(dists: Vec<Vec<Rational>>) -> Result<Self> {
        for (i, d) in dists.iter().enumerate() {
            check_distribution(d, || format!("strategy of player #{i}"))?;
        }
        Ok(MixedProfile { dists })
    }

    /// Degenerate profile putting all weight on `profile`.
    pub fn pure(game: &NormalFormGame, profile: &[usize]) -> Result<Self> {
        if profile.len() != game.num_players() {
            return Err(Error::Dimension(format!(
                "pure profile has {} entries for {} players",
                profile.len(),
                game.num_players()
            )));
        }
        let dists = profile
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let n = game.actions(i).len();
                if a >= n {
                    return Err(Error::UnknownAction {
                        player: game.player_name(i).to_string(),
                        action: format!("#{a}"),
                    });
                }
                Ok(point_mass(n, a))
            })
            .collect::<Result<_>>()?;
        Ok(MixedProfile { dists })
    }

    pub fn uniform(game: &NormalFormGame) -> Self {
        let dists = game
            .action_counts()
            .into_iter()
            .map(|n| vec![Rational::new(1, n as i64); n])
            .collect();
        MixedProfile { dists }
    }

    pub fn strategy(&self, player: usize) -> &[Rational] {
        &self.dists[player]
    }

    pub fn strategies(&self) -> &[Vec<Rational>] {
        &self.dists
    }

    /// Returns the pure profile if every strategy is degenerate.
    pub fn as_pure(&self) -> Option<Vec<usize>> {
        self.dists
            .iter()
            .map(|d| d.iter().position(Rational::is_one))
            .collect()
    }

    pub fn check_against(&self, game: &NormalFormGame) -> Result<()> {
        if self.dists.len() != game.num_players() {
            return Err(Error::Dimension(format!(
                "profile covers {} players, game has {}",
                self.dists.len(),
                game.num_players()
            )));
        }
        for (i, d) in self.dists.iter().enumerate() {
            if d.len() != game.actions(i).len() {
                return Err(Error::Dimension(format!(
                    "player {:?}: strategy has {} weights for {} actions",
                    game.player_name(i),
                    d.len(),
                    game.actions(i).len()
                )));
            }
        }
        Ok(())
    }

    fn support(&self, player: usize) -> Vec<(usize, &Rational)> {
        self.dists[player]
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .collect()
    }
}

pub(crate) fn point_mass(n: usize, at: usize) -> Vec<Rational> {
    (0..n)
        .map(|j| {
            if j == at {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// Expected payoff vector under `profile`.
pub fn expected_utility(game: &NormalFormGame, profile: &MixedProfile) -> Result<Vec<Rational>> {
    expected_utility_fixing(game, profile, &vec![None; game.num_players()])
}

/// Expected payoff vector when each player `i` with `fixed[i] = Some(a)`
/// plays `a` for sure and everyone else follows `profile`.
pub fn expected_utility_fixing(
    game: &NormalFormGame,
    profile: &MixedProfile,
    fixed: &[Option<usize>],
) -> Result<Vec<Rational>> {
    profile.check_against(game)?;
    let n = game.num_players();
    if fixed.len() != n {
        return Err(Error::Dimension(format!(
            "override vector has {} entries for {n} players",
            fixed.len()
        )));
    }
    let one = Rational::one();
    let supports: Vec<Vec<(usize, &Rational)>> = (0..n)
        .map(|i| match fixed[i] {
            Some(a) => vec![(a, &one)],
            None => profile.support(i),
        })
        .collect();
    let sizes: Vec<usize> = supports.iter().map(Vec::len).collect();
    let mut total = vec![Rational::zero(); n];
    let mut pure = vec![0; n];
    for pick in Odometer::new(&sizes) {
        let mut weight = Rational::one();
        for (i, &k) in pick.iter().enumerate() {
            let (a, p) = supports[i][k];
            pure[i] = a;
            weight *= p;
        }
        for (t, u) in total.iter_mut().zip(game.payoff(&pure)) {
            *t += &weight * u;
        }
    }
    Ok(total)
}

/// Best pure unilateral deviation value for `player` and the first action
/// attaining it.
pub fn best_response(
    game: &NormalFormGame,
    player: usize,
    profile: &MixedProfile,
) -> Result<(Rational, usize)> {
    game.check_player(player)?;
    let mut fixed = vec![None; game.num_players()];
    let mut best: Option<(Rational, usize)> = None;
    for a in 0..game.actions(player).len() {
        fixed[player] = Some(a);
        let v = expected_utility_fixing(game, profile, &fixed)?[player].clone();
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, a));
        }
    }
    Ok(best.expect("every player has at least one action"))
}

pub fn best_response_value(
    game: &NormalFormGame,
    player: usize,
    profile: &MixedProfile,
) -> Result<Rational> {
    best_response(game, player, profile).map(|(v, _)| v)
}

/// Whether no player gains more than `epsilon` by a unilateral deviation.
///
/// The witness is the first player (declared order) with an improving
/// action, and that player's first improving action.
pub fn is_nash(
    game: &NormalFormGame,
    profile: &MixedProfile,
    epsilon: &Rational,
) -> Result<Verdict> {
    check_epsilon(epsilon)?;
    let current = expected_utility(game, profile)?;
    let mut fixed = vec![None; game.num_players()];
    for player in 0..game.num_players() {
        for a in 0..game.actions(player).len() {
            fixed[player] = Some(a);
            let v = expected_utility_fixing(game, profile, &fixed)?[player].clone();
            if v > &current[player] + epsilon {
                return Ok(Verdict::fail(Witness::UnilateralDeviation {
                    player: game.player_name(player).to_string(),
                    action: game.actions(player)[a].clone(),
                    before: current[player].clone(),
                    after: v,
                }));
            }
        }
        fixed[player] = None;
    }
    Ok(Verdict::pass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;
    use crate::rational::q;
    use proptest::prelude::*;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn one_player_uniform_mix_averages_payoffs() {
        let g = NormalFormGame::new(
            names(&["p"]),
            vec![names(&["a", "b"])],
            vec![vec![q("3")], vec![q("7")]],
        )
        .unwrap();
        let prof = MixedProfile::new(vec![vec![q("1/2"), q("1/2")]]).unwrap();
        assert_eq!(expected_utility(&g, &prof).unwrap(), vec![q("5")]);
    }

    #[test]
    fn zero_one_all_zero_pays_one_each() {
        let g = library::zero_one_game(3);
        let prof = MixedProfile::pure(&g, &[0, 0, 0]).unwrap();
        assert_eq!(expected_utility(&g, &prof).unwrap(), vec![q("1"); 3]);
        assert_eq!(best_response_value(&g, 0, &prof).unwrap(), q("1"));
        assert!(is_nash(&g, &prof, &Rational::zero()).unwrap().holds);
    }

    #[test]
    fn single_action_player_best_response_is_its_value() {
        let g =
            NormalFormGame::new(names(&["p"]), vec![names(&["only"])], vec![vec![q("4")]]).unwrap();
        let prof = MixedProfile::pure(&g, &[0]).unwrap();
        assert_eq!(best_response_value(&g, 0, &prof).unwrap(), q("4"));
    }

    #[test]
    fn matching_pennies_uniform_best_response_zero() {
        let g = library::matching_pennies();
        let prof = MixedProfile::uniform(&g);
        assert_eq!(best_response_value(&g, 0, &prof).unwrap(), Rational::zero());
        assert_eq!(best_response_value(&g, 1, &prof).unwrap(), Rational::zero());
        assert!(is_nash(&g, &prof, &Rational::zero()).unwrap().holds);
    }

    #[test]
    fn prisoners_dilemma_verdicts() {
        let g = library::prisoners_dilemma();
        let dd = MixedProfile::pure(&g, &[1, 1]).unwrap();
        assert!(is_nash(&g, &dd, &Rational::zero()).unwrap().holds);
        let cc = MixedProfile::pure(&g, &[0, 0]).unwrap();
        let v = is_nash(&g, &cc, &Rational::zero()).unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.witness,
            Some(Witness::UnilateralDeviation {
                player: "1".into(),
                action: "D".into(),
                before: q("3"),
                after: q("5"),
            })
        );
        // (C,C) is an epsilon-equilibrium once epsilon covers the gain of 2.
        assert!(is_nash(&g, &cc, &q("2")).unwrap().holds);
    }

    #[test]
    fn errors_are_structured() {
        let g = library::prisoners_dilemma();
        let bad = MixedProfile::new(vec![vec![q("1")], vec![q("1"), q("0")]]).unwrap();
        assert!(matches!(
            expected_utility(&g, &bad),
            Err(Error::Dimension(_))
        ));
        let ok = MixedProfile::uniform(&g);
        assert!(matches!(
            best_response_value(&g, 5, &ok),
            Err(Error::UnknownPlayer(_))
        ));
        assert!(matches!(
            is_nash(&g, &ok, &q("-1")),
            Err(Error::NegativeEpsilon(_))
        ));
        assert!(MixedProfile::new(vec![vec![q("1/2"), q("1/3")]]).is_err());
        assert!(MixedProfile::new(vec![vec![q("3/2"), q("-1/2")]]).is_err());
    }

    #[test]
    fn table_size_guard() {
        let limits = Limits {
            max_entries: 8,
            ..Limits::default()
        };
        let err = NormalFormGame::with_limits(
            names(&["a", "b"]),
            vec![names(&["0", "1", "2"]), names(&["0", "1", "2"])],
            vec![vec![q("0"), q("0")]; 9],
            &limits,
        )
        .unwrap_err();
        assert!(err.is_resource_bound());
    }

    fn small_game() -> impl Strategy<Value = NormalFormGame> {
        prop::collection::vec(1usize..4, 1..4).prop_flat_map(|sizes| {
            let n = sizes.len();
            let total: usize = sizes.iter().product();
            prop::collection::vec(prop::collection::vec(-9i64..10, n), total).prop_map(
                move |table| {
                    let players = (0..n).map(|i| format!("p{i}")).collect();
                    let actions = sizes
                        .iter()
                        .map(|&s| (0..s).map(|a| format!("a{a}")).collect())
                        .collect();
                    let payoffs = table
                        .into_iter()
                        .map(|row| row.into_iter().map(Rational::integer).collect())
                        .collect();
                    NormalFormGame::new(players, actions, payoffs).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn degenerate_profiles_read_the_table(g in small_game()) {
            for p in g.pure_profiles() {
                let prof = MixedProfile::pure(&g, &p).unwrap();
                prop_assert_eq!(expected_utility(&g, &prof).unwrap(), g.payoff(&p).to_vec());
            }
        }

        #[test]
        fn epsilon_monotone(g in small_game(), e1 in 0i64..5, extra in 0i64..5) {
            let prof = MixedProfile::uniform(&g);
            let lo = Rational::integer(e1);
            let hi = Rational::integer(e1 + extra);
            if is_nash(&g, &prof, &lo).unwrap().holds {
                prop_assert!(is_nash(&g, &prof, &hi).unwrap().holds);
            }
        }
    }
}
