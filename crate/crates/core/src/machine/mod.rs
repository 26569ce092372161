//! Computational games: players pick machines, and utilities may depend on
//! the complexity of the machines chosen.

mod automaton;
mod builders;
mod oneshot;
mod primes;

pub use automaton::{
    defect_last, run_automata, trajectory, RepeatedGameAutomaton, RepeatedGameSpec,
    StandardAutomaton,
};
pub use builders::{
    build_primality_game, build_primality_game_with, build_roshambo, frpd_equilibrium_threshold,
    frpd_game, frpd_spec, ThresholdReport, ThresholdRow, ALWAYS_SAFE, FRPD_FREE_STATES,
    TEST_AND_GUESS,
};
pub use oneshot::{machine_action, MachineKind, OneShotGame, OneShotMachine, UtilityRule};
pub use primes::is_prime;

use crate::error::{Error, Result};
use crate::game::{
    check_epsilon, is_nash, product_size, Limits, MixedProfile, NormalFormGame, Odometer,
};
use crate::rational::Rational;
use crate::verdict::{Verdict, Witness};

/// A repeated two-player game in which each player picks an automaton and
/// (optionally) pays for its size.
#[derive(Debug, Clone, PartialEq)]
pub struct RepeatedMachineGame {
    spec: RepeatedGameSpec,
    machines: Vec<Vec<RepeatedGameAutomaton>>,
    charged: [bool; 2],
}

impl RepeatedMachineGame {
    pub fn new(
        spec: RepeatedGameSpec,
        machines: Vec<Vec<RepeatedGameAutomaton>>,
        charged: [bool; 2],
    ) -> Result<Self> {
        if machines.len() != 2 {
            return Err(Error::Dimension(format!(
                "{} automaton spaces for 2 players",
                machines.len()
            )));
        }
        let stage = spec.stage();
        for (i, space) in machines.iter().enumerate() {
            if space.is_empty() {
                return Err(Error::InvalidGame(format!(
                    "automaton space of {:?} is empty",
                    stage.player_name(i)
                )));
            }
            for (j, m) in space.iter().enumerate() {
                if space[..j].iter().any(|o| o.id() == m.id()) {
                    return Err(Error::InvalidGame(format!(
                        "duplicate automaton id {:?} for {:?}",
                        m.id(),
                        stage.player_name(i)
                    )));
                }
            }
        }
        // Surface action mismatches now rather than on the first run.
        for a in &machines[0] {
            for b in &machines[1] {
                trajectory(&spec.with_rounds(1)?, a, b)?;
            }
        }
        Ok(RepeatedMachineGame {
            spec,
            machines,
            charged,
        })
    }

    pub fn spec(&self) -> &RepeatedGameSpec {
        &self.spec
    }

    pub fn machines(&self, player: usize) -> &[RepeatedGameAutomaton] {
        &self.machines[player]
    }

    pub fn charged(&self) -> [bool; 2] {
        self.charged
    }

    fn utility(&self, profile: &[usize]) -> Result<Vec<Rational>> {
        let (m1, m2) = (&self.machines[0][profile[0]], &self.machines[1][profile[1]]);
        let (u1, u2) = run_automata(&self.spec, m1, m2)?;
        let mut out = vec![u1, u2];
        for (i, m) in [m1, m2].into_iter().enumerate() {
            if self.charged[i] {
                out[i] -= &self.spec.memory_charge(m.num_states());
            }
        }
        Ok(out)
    }
}

/// A game whose strategies are machines: either one-shot machines over a
/// Bayesian game or automata over a repeated game.
#[derive(Debug, Clone, PartialEq)]
pub enum ComputationalGame {
    OneShot(OneShotGame),
    Repeated(RepeatedMachineGame),
}

impl From<OneShotGame> for ComputationalGame {
    fn from(g: OneShotGame) -> Self {
        ComputationalGame::OneShot(g)
    }
}

impl From<RepeatedMachineGame> for ComputationalGame {
    fn from(g: RepeatedMachineGame) -> Self {
        ComputationalGame::Repeated(g)
    }
}

impl ComputationalGame {
    pub fn players(&self) -> &[String] {
        match self {
            ComputationalGame::OneShot(g) => g.underlying().players(),
            ComputationalGame::Repeated(g) => g.spec().stage().players(),
        }
    }

    pub fn num_players(&self) -> usize {
        self.players().len()
    }

    pub fn machine_ids(&self, player: usize) -> Vec<&str> {
        match self {
            ComputationalGame::OneShot(g) => g.machines(player).iter().map(|m| m.id()).collect(),
            ComputationalGame::Repeated(g) => g.machines(player).iter().map(|m| m.id()).collect(),
        }
    }

    pub fn space_sizes(&self) -> Vec<usize> {
        (0..self.num_players())
            .map(|i| self.machine_ids(i).len())
            .collect()
    }

    pub fn player_index(&self, name: &str) -> Result<usize> {
        self.players()
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::UnknownPlayer(name.to_string()))
    }

    pub fn machine_index(&self, player: usize, id: &str) -> Result<usize> {
        self.machine_ids(player)
            .iter()
            .position(|m| *m == id)
            .ok_or_else(|| Error::MachineNotInSpace {
                player: self.players()[player].clone(),
                machine: id.to_string(),
            })
    }

    /// Resolves one machine id per player into a profile of indices.
    pub fn profile_from_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<usize>> {
        if ids.len() != self.num_players() {
            return Err(Error::Dimension(format!(
                "machine profile has {} entries for {} players",
                ids.len(),
                self.num_players()
            )));
        }
        ids.iter()
            .enumerate()
            .map(|(i, id)| self.machine_index(i, id.as_ref()))
            .collect()
    }

    pub fn profile_ids(&self, profile: &[usize]) -> Vec<String> {
        profile
            .iter()
            .enumerate()
            .map(|(i, &m)| self.machine_ids(i)[m].to_string())
            .collect()
    }

    /// The same game with every complexity (or memory charge) set to zero.
    pub fn without_costs(&self) -> Self {
        match self {
            ComputationalGame::OneShot(g) => ComputationalGame::OneShot(g.without_costs()),
            ComputationalGame::Repeated(g) => {
                let mut g = g.clone();
                g.charged = [false, false];
                ComputationalGame::Repeated(g)
            }
        }
    }

    fn check_profile(&self, profile: &[usize]) -> Result<()> {
        let sizes = self.space_sizes();
        if profile.len() != sizes.len() {
            return Err(Error::Dimension(format!(
                "machine profile has {} entries for {} players",
                profile.len(),
                sizes.len()
            )));
        }
        for (i, (&m, &s)) in profile.iter().zip(&sizes).enumerate() {
            if m >= s {
                return Err(Error::MachineNotInSpace {
                    player: self.players()[i].clone(),
                    machine: format!("#{m}"),
                });
            }
        }
        Ok(())
    }

    fn utility_unchecked(&self, profile: &[usize]) -> Result<Vec<Rational>> {
        match self {
            ComputationalGame::OneShot(g) => Ok(g.utility(profile)),
            ComputationalGame::Repeated(g) => g.utility(profile),
        }
    }
}

/// Expected utility of every player under a pure machine profile.
pub fn comp_expected_utility(game: &ComputationalGame, profile: &[usize]) -> Result<Vec<Rational>> {
    game.check_profile(profile)?;
    game.utility_unchecked(profile)
}

/// Checks that no player gains more than `epsilon` by switching to another
/// machine in their space. The witness is the first player (in order) with
/// such a deviation and the first such machine.
pub fn is_machine_nash(
    game: &ComputationalGame,
    profile: &[usize],
    epsilon: &Rational,
) -> Result<Verdict> {
    check_epsilon(epsilon)?;
    game.check_profile(profile)?;
    let base = game.utility_unchecked(profile)?;
    let mut alt = profile.to_vec();
    for (i, size) in game.space_sizes().into_iter().enumerate() {
        for m in 0..size {
            if m == profile[i] {
                continue;
            }
            alt[i] = m;
            let after = game.utility_unchecked(&alt)?.swap_remove(i);
            if &after - &base[i] > *epsilon {
                let ids = game.machine_ids(i);
                return Ok(Verdict::fail(Witness::MachineDeviation {
                    player: game.players()[i].clone(),
                    from: ids[profile[i]].to_string(),
                    to: ids[m].to_string(),
                    before: base[i].clone(),
                    after,
                }));
            }
        }
        alt[i] = profile[i];
    }
    Ok(Verdict::pass())
}

/// Utilities of every machine profile, as a normal-form game whose actions
/// are the machine ids.
pub fn induced_normal_form(game: &ComputationalGame, limits: &Limits) -> Result<NormalFormGame> {
    let sizes = game.space_sizes();
    limits.check_entries("machine profiles", product_size(&sizes))?;
    let actions: Vec<Vec<String>> = (0..game.num_players())
        .map(|i| game.machine_ids(i).into_iter().map(String::from).collect())
        .collect();
    let mut table = Vec::new();
    for p in Odometer::new(&sizes) {
        table.push(game.utility_unchecked(&p)?);
    }
    NormalFormGame::with_limits(game.players().to_vec(), actions, table, limits)
}

/// Every pure machine profile that is an `epsilon`-machine equilibrium, in
/// lexicographic order.
pub fn exhaustive_machine_equilibria(
    game: &ComputationalGame,
    epsilon: &Rational,
    limits: &Limits,
) -> Result<Vec<Vec<usize>>> {
    check_epsilon(epsilon)?;
    let induced = induced_normal_form(game, limits)?;
    let sizes = induced.action_counts();
    let work = product_size(&sizes).saturating_mul(sizes.iter().sum::<usize>() as u128);
    limits.check_work("machine equilibrium scan", work)?;
    let mut out = Vec::new();
    for p in induced.pure_profiles() {
        if is_nash(&induced, &MixedProfile::pure(&induced, &p)?, epsilon)?.holds {
            out.push(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{bayes_expected_utility, BayesianStrategyProfile};
    use crate::library::prisoners_dilemma;
    use crate::rational::q;
    use StandardAutomaton::*;

    fn roshambo_game() -> ComputationalGame {
        build_roshambo(&q("1"), &q("2")).unwrap().into()
    }

    #[test]
    fn roshambo_utilities() {
        let g = roshambo_game();
        let p = g.profile_from_ids(&["const0", "const1"]).unwrap();
        assert_eq!(
            comp_expected_utility(&g, &p).unwrap(),
            vec![q("-2"), q("0")]
        );
        let p = g.profile_from_ids(&["uniform", "uniform"]).unwrap();
        assert_eq!(
            comp_expected_utility(&g, &p).unwrap(),
            vec![q("-2"), q("-2")]
        );
    }

    #[test]
    fn uniform_machine_output() {
        let ComputationalGame::OneShot(g) = roshambo_game() else {
            unreachable!()
        };
        let u = g.machines(0).iter().find(|m| m.id() == "uniform").unwrap();
        assert_eq!(
            machine_action(u, 0).unwrap(),
            &[q("1/3"), q("1/3"), q("1/3")]
        );
        assert_eq!(u.kind(), MachineKind::Randomized);
    }

    #[test]
    fn roshambo_has_no_machine_equilibrium() {
        let g = roshambo_game();
        for p in Odometer::new(&g.space_sizes()) {
            let v = is_machine_nash(&g, &p, &Rational::zero()).unwrap();
            assert!(!v.holds, "{:?}", g.profile_ids(&p));
            // A randomizing player always has a deterministic reply worth at least 1 more.
            for i in 0..2 {
                if g.machine_ids(i)[p[i]] != "uniform" {
                    continue;
                }
                let base = comp_expected_utility(&g, &p).unwrap()[i].clone();
                let best = (0..3)
                    .map(|m| {
                        let mut alt = p.clone();
                        alt[i] = m;
                        comp_expected_utility(&g, &alt).unwrap()[i].clone()
                    })
                    .max()
                    .unwrap();
                assert!(best - base >= Rational::one());
            }
        }
        assert!(
            exhaustive_machine_equilibria(&g, &Rational::zero(), &Limits::default())
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn free_roshambo_has_only_uniform_pair() {
        let g = roshambo_game().without_costs();
        let eq = exhaustive_machine_equilibria(&g, &Rational::zero(), &Limits::default()).unwrap();
        assert_eq!(eq, vec![vec![3, 3]]);
    }

    #[test]
    fn zero_cost_reduction_matches_induced_bayesian_strategies() {
        // Oracle: payoff table built from bayes_expected_utility on the
        // strategies the machines induce, checked with the plain Nash checker.
        let ComputationalGame::OneShot(g) = roshambo_game().without_costs() else {
            unreachable!()
        };
        let bayes = g.underlying().clone();
        let induced = |m: &OneShotMachine| m.table().to_vec();
        let actions: Vec<Vec<String>> = (0..2)
            .map(|i| g.machines(i).iter().map(|m| m.id().to_string()).collect())
            .collect();
        let table = NormalFormGame::from_fn(bayes.players().to_vec(), actions, |p| {
            let prof = BayesianStrategyProfile::new(vec![
                induced(&g.machines(0)[p[0]]),
                induced(&g.machines(1)[p[1]]),
            ])
            .unwrap();
            bayes_expected_utility(&bayes, &prof).unwrap()
        })
        .unwrap();
        let cg = ComputationalGame::OneShot(g);
        for p in Odometer::new(&cg.space_sizes()) {
            let a = is_machine_nash(&cg, &p, &Rational::zero()).unwrap().holds;
            let b = is_nash(
                &table,
                &MixedProfile::pure(&table, &p).unwrap(),
                &Rational::zero(),
            )
            .unwrap()
            .holds;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn machine_not_in_space() {
        let g = roshambo_game();
        assert!(matches!(
            g.profile_from_ids(&["const0", "rock"]),
            Err(Error::MachineNotInSpace { .. })
        ));
        assert!(matches!(
            comp_expected_utility(&g, &[0, 9]),
            Err(Error::MachineNotInSpace { .. })
        ));
    }

    #[test]
    fn single_machine_spaces_hold_vacuously() {
        let spec = frpd_spec(5, q("9/10"), q("1/10")).unwrap();
        let g: ComputationalGame = frpd_game(&spec, &[AlwaysDefect], [true, true])
            .unwrap()
            .into();
        assert!(
            is_machine_nash(&g, &[0, 0], &Rational::zero())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn frpd_tft_pair_at_sixty_rounds() {
        let spec = frpd_spec(60, q("9/10"), q("1/10")).unwrap();
        let g: ComputationalGame = frpd_game(&spec, &StandardAutomaton::ALL, [true, true])
            .unwrap()
            .into();
        let tft = g.profile_from_ids(&["TfT", "TfT"]).unwrap();
        assert!(is_machine_nash(&g, &tft, &Rational::zero()).unwrap().holds);
        let eq = exhaustive_machine_equilibria(&g, &Rational::zero(), &Limits::default()).unwrap();
        assert!(eq.contains(&tft));
    }

    #[test]
    fn frpd_tft_utility_under_literal_per_state_charge() {
        let c = q("1/10");
        let delta = q("9/10");
        let spec =
            RepeatedGameSpec::new(prisoners_dilemma(), 6, delta.clone(), c.clone(), 0).unwrap();
        let g: ComputationalGame = frpd_game(&spec, &StandardAutomaton::ALL, [true, true])
            .unwrap()
            .into();
        let tft = g.profile_from_ids(&["TfT", "TfT"]).unwrap();
        let sum: Rational = (1..=6).map(|m| delta.pow(m)).sum();
        let expect = Rational::integer(3) * sum - Rational::integer(2) * &c;
        assert_eq!(
            comp_expected_utility(&g, &tft).unwrap(),
            vec![expect.clone(), expect]
        );
        // Charging every state lets the one-state AllC undercut TfT.
        let v = is_machine_nash(&g, &tft, &Rational::zero()).unwrap();
        match v.witness {
            Some(Witness::MachineDeviation { to, .. }) => assert_eq!(to, "AllC"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn machine_nash_epsilon_monotone() {
        let g = roshambo_game();
        let p = g.profile_from_ids(&["const0", "const0"]).unwrap();
        assert!(!is_machine_nash(&g, &p, &q("0")).unwrap().holds);
        // const1 against const0 gains exactly 1.
        assert!(is_machine_nash(&g, &p, &q("1")).unwrap().holds);
        assert!(is_machine_nash(&g, &p, &q("-1")).is_err());
    }
}
