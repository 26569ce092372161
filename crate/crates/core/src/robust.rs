//! Coalition-resilient, fault-immune, and robust equilibria.
//!
//! A profile is *k-resilient* when no coalition of at most `k` players has a
//! joint deviation that pays off for it, *t-immune* when no player outside a
//! set of at most `t` arbitrary deviators is made worse off, and
//! *(k,t)-robust* when both hold. Nash equilibrium is the (1,0) case.
//!
//! Deviations are enumerated as joint pure action tuples. Coalitions may
//! therefore correlate, and deviators in the immunity check are unrestricted.
//! Restricting to pure tuples loses nothing: a member's utility under a
//! correlated mixed deviation is a convex combination of pure-tuple
//! utilities, so the best gain and the worst harm are attained at pure
//! tuples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{
    check_epsilon, expected_utility, expected_utility_fixing, product_size, subsets_up_to, Limits,
    MixedProfile, NormalFormGame, Odometer,
};
use crate::rational::Rational;
use crate::verdict::{MemberPayoff, Verdict, Witness};

/// Which coalition members must gain for a deviation to break resilience.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    /// Fails if some member strictly gains.
    #[default]
    Strong,
    /// Fails only if every member strictly gains.
    Weak,
}

impl std::str::FromStr for Semantics {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "strong" => Ok(Semantics::Strong),
            "weak" => Ok(Semantics::Weak),
            other => Err(format!(
                "unknown semantics {other:?} (expected strong|weak)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessQuery {
    pub k: usize,
    pub t: usize,
    pub epsilon: Rational,
    pub semantics: Semantics,
    pub limits: Limits,
}

impl RobustnessQuery {
    pub fn new(k: usize, t: usize) -> Self {
        RobustnessQuery {
            k,
            t,
            epsilon: Rational::zero(),
            semantics: Semantics::Strong,
            limits: Limits::default(),
        }
    }

    pub fn with_semantics(mut self, semantics: Semantics) -> Self {
        self.semantics = semantics;
        self
    }

    pub fn with_epsilon(mut self, epsilon: Rational) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    fn validate(&self, game: &NormalFormGame) -> Result<()> {
        let n = game.num_players();
        if self.k > n {
            return Err(out_of_range("k", self.k, format!("0..={n}")));
        }
        if self.t > n {
            return Err(out_of_range("t", self.t, format!("0..={n}")));
        }
        check_epsilon(&self.epsilon)
    }
}

fn out_of_range(name: &'static str, value: usize, expected: String) -> Error {
    Error::OutOfRange {
        name,
        value: value.to_string(),
        expected,
    }
}

/// Work needed to try every joint pure deviation of every group of size at
/// most `max`: per group, joint tuples times the opponents' support size.
fn deviation_work(game: &NormalFormGame, profile: &MixedProfile, max: usize) -> u128 {
    let n = game.num_players();
    let sizes = game.action_counts();
    let supports: Vec<usize> = (0..n)
        .map(|i| profile.strategy(i).iter().filter(|p| !p.is_zero()).count())
        .collect();
    // Cheap upper bound first so huge player counts fail fast.
    let groups: u128 = (1..=max.min(n)).map(|s| binomial(n, s)).sum();
    let per_group = product_size(&sizes).max(1);
    if groups.saturating_mul(per_group) < u64::MAX as u128 / 4 && groups < 1_000_000 {
        subsets_up_to(n, max)
            .iter()
            .map(|c| {
                let dev: Vec<usize> = c.iter().map(|&i| sizes[i]).collect();
                let rest: Vec<usize> = (0..n)
                    .filter(|i| !c.contains(i))
                    .map(|i| supports[i])
                    .collect();
                product_size(&dev).saturating_mul(product_size(&rest))
            })
            .fold(0u128, |a, b| a.saturating_add(b))
    } else {
        groups.saturating_mul(per_group)
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    r
}

/// Utility vector when the players in `group` play `joint` and everyone
/// else follows `profile`.
pub fn deviation_payoffs(
    game: &NormalFormGame,
    profile: &MixedProfile,
    group: &[usize],
    joint: &[usize],
) -> Result<Vec<Rational>> {
    if group.len() != joint.len() {
        return Err(Error::Dimension(format!(
            "{} deviators but {} actions",
            group.len(),
            joint.len()
        )));
    }
    let mut fixed = vec![None; game.num_players()];
    for (&i, &a) in group.iter().zip(joint) {
        game.check_player(i)?;
        if a >= game.actions(i).len() {
            return Err(Error::UnknownAction {
                player: game.player_name(i).to_string(),
                action: format!("#{a}"),
            });
        }
        fixed[i] = Some(a);
    }
    expected_utility_fixing(game, profile, &fixed)
}

fn names_of(game: &NormalFormGame, group: &[usize], joint: &[usize]) -> (Vec<String>, Vec<String>) {
    (
        group
            .iter()
            .map(|&i| game.player_name(i).to_string())
            .collect(),
        group
            .iter()
            .zip(joint)
            .map(|(&i, &a)| game.actions(i)[a].clone())
            .collect(),
    )
}

/// Whether no coalition of size `1..=k` has a profitable joint pure
/// deviation under `semantics`.
///
/// Coalitions are tried by size, then lexicographically; joint actions
/// lexicographically. The first failing `(coalition, joint action)` is the
/// witness.
pub fn check_resilience(
    game: &NormalFormGame,
    profile: &MixedProfile,
    k: usize,
    semantics: Semantics,
    epsilon: &Rational,
    limits: &Limits,
) -> Result<Verdict> {
    let n = game.num_players();
    if k < 1 || k > n {
        return Err(out_of_range("k", k, format!("1..={n}")));
    }
    check_epsilon(epsilon)?;
    let before = expected_utility(game, profile)?;
    limits.check_work("resilience check", deviation_work(game, profile, k))?;
    let sizes = game.action_counts();
    for coalition in subsets_up_to(n, k) {
        let dev_sizes: Vec<usize> = coalition.iter().map(|&i| sizes[i]).collect();
        for joint in Odometer::new(&dev_sizes) {
            let after = deviation_payoffs(game, profile, &coalition, &joint)?;
            let gains: Vec<bool> = coalition
                .iter()
                .map(|&i| after[i] > &before[i] + epsilon)
                .collect();
            let broken = match semantics {
                Semantics::Strong => gains.iter().any(|&g| g),
                Semantics::Weak => gains.iter().all(|&g| g),
            };
            if broken {
                let (coalition_names, actions) = names_of(game, &coalition, &joint);
                let payoffs = coalition
                    .iter()
                    .map(|&i| MemberPayoff {
                        player: game.player_name(i).to_string(),
                        before: before[i].clone(),
                        after: after[i].clone(),
                    })
                    .collect();
                return Ok(Verdict::fail(Witness::CoalitionDeviation {
                    coalition: coalition_names,
                    actions,
                    payoffs,
                }));
            }
        }
    }
    Ok(Verdict::pass())
}

/// Whether no player outside a deviator set of size `1..=t` loses more than
/// `epsilon` under any joint pure action of the deviators.
pub fn check_immunity(
    game: &NormalFormGame,
    profile: &MixedProfile,
    t: usize,
    epsilon: &Rational,
    limits: &Limits,
) -> Result<Verdict> {
    let n = game.num_players();
    if t >= n {
        return Err(out_of_range("t", t, format!("0..{n}")));
    }
    check_epsilon(epsilon)?;
    let before = expected_utility(game, profile)?;
    if t == 0 {
        return Ok(Verdict::pass());
    }
    limits.check_work("immunity check", deviation_work(game, profile, t))?;
    let sizes = game.action_counts();
    for deviators in subsets_up_to(n, t) {
        let dev_sizes: Vec<usize> = deviators.iter().map(|&i| sizes[i]).collect();
        for joint in Odometer::new(&dev_sizes) {
            let after = deviation_payoffs(game, profile, &deviators, &joint)?;
            if let Some(victim) =
                (0..n).find(|i| !deviators.contains(i) && after[*i] < &before[*i] - epsilon)
            {
                let (deviator_names, actions) = names_of(game, &deviators, &joint);
                return Ok(Verdict::fail(Witness::Harm {
                    deviators: deviator_names,
                    actions,
                    victim: game.player_name(victim).to_string(),
                    before: before[victim].clone(),
                    after: after[victim].clone(),
                }));
            }
        }
    }
    Ok(Verdict::pass())
}

/// Conjunction of k-resilience and t-immunity with both sub-verdicts
/// attached (`"resilience"` and `"immunity"`). `k = 0` and `t = 0` are
/// vacuous.
pub fn check_robust(
    game: &NormalFormGame,
    profile: &MixedProfile,
    query: &RobustnessQuery,
) -> Result<Verdict> {
    query.validate(game)?;
    let resilience = if query.k == 0 {
        Verdict::pass()
    } else {
        check_resilience(
            game,
            profile,
            query.k,
            query.semantics,
            &query.epsilon,
            &query.limits,
        )?
    };
    let immunity = check_immunity(game, profile, query.t, &query.epsilon, &query.limits)?;
    Ok(Verdict::all(vec![
        ("resilience".into(), resilience),
        ("immunity".into(), immunity),
    ]))
}

/// Every pure profile that is (k,t)-robust, in lexicographic order.
pub fn enumerate_pure_robust(
    game: &NormalFormGame,
    query: &RobustnessQuery,
) -> Result<Vec<Vec<usize>>> {
    query.validate(game)?;
    let first = MixedProfile::pure(game, &vec![0; game.num_players()])?;
    let per_profile = deviation_work(game, &first, query.k.max(query.t));
    query.limits.check_work(
        "pure robust enumeration",
        per_profile.saturating_mul(game.num_profiles() as u128),
    )?;
    let mut out = Vec::new();
    for p in game.pure_profiles() {
        let prof = MixedProfile::pure(game, &p)?;
        if check_robust(game, &prof, query)?.holds {
            out.push(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::is_nash;
    use crate::library::{bargaining_game, prisoners_dilemma, zero_one_game};
    use crate::rational::q;
    use proptest::prelude::*;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn zero_one_pair_breaks_two_resilience() {
        let g = zero_one_game(3);
        let all0 = MixedProfile::pure(&g, &[0, 0, 0]).unwrap();
        let zero = Rational::zero();
        assert!(
            check_resilience(&g, &all0, 1, Semantics::Strong, &zero, &lim())
                .unwrap()
                .holds
        );
        let v = check_resilience(&g, &all0, 2, Semantics::Strong, &zero, &lim()).unwrap();
        assert!(!v.holds);
        match v.witness.unwrap() {
            Witness::CoalitionDeviation {
                coalition,
                actions,
                payoffs,
            } => {
                assert_eq!(coalition, vec!["1", "2"]);
                assert_eq!(actions, vec!["1", "1"]);
                for m in payoffs {
                    assert_eq!((m.before, m.after), (q("1"), q("2")));
                }
            }
            other => panic!("unexpected witness {other:?}"),
        }
        // Both members gain, so the weak reading fails too.
        assert!(
            !check_resilience(&g, &all0, 2, Semantics::Weak, &zero, &lim())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn zero_one_single_deviator_hurts_the_rest() {
        let g = zero_one_game(3);
        let all0 = MixedProfile::pure(&g, &[0, 0, 0]).unwrap();
        let v = check_immunity(&g, &all0, 1, &Rational::zero(), &lim()).unwrap();
        assert_eq!(
            v.witness,
            Some(Witness::Harm {
                deviators: vec!["1".into()],
                actions: vec!["1".into()],
                victim: "2".into(),
                before: q("1"),
                after: q("0"),
            })
        );
    }

    #[test]
    fn bargaining_resilient_for_every_k_but_not_immune() {
        let g = bargaining_game(5);
        let stay = MixedProfile::pure(&g, &[0; 5]).unwrap();
        for k in 1..=5 {
            assert!(
                check_resilience(&g, &stay, k, Semantics::Strong, &Rational::zero(), &lim())
                    .unwrap()
                    .holds,
                "k = {k}"
            );
        }
        let v = check_immunity(&g, &stay, 1, &Rational::zero(), &lim()).unwrap();
        match v.witness.unwrap() {
            Witness::Harm { before, after, .. } => assert_eq!((before, after), (q("2"), q("0"))),
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn robust_carries_both_sub_verdicts() {
        let g = bargaining_game(5);
        let stay = MixedProfile::pure(&g, &[0; 5]).unwrap();
        let v = check_robust(&g, &stay, &RobustnessQuery::new(2, 1)).unwrap();
        assert!(!v.holds);
        assert!(v.sub("resilience").unwrap().holds);
        assert!(!v.sub("immunity").unwrap().holds);

        let g = zero_one_game(3);
        let all0 = MixedProfile::pure(&g, &[0, 0, 0]).unwrap();
        let v = check_robust(&g, &all0, &RobustnessQuery::new(2, 0)).unwrap();
        assert!(!v.sub("resilience").unwrap().holds);
        assert!(v.sub("immunity").unwrap().holds);
    }

    #[test]
    fn t_zero_is_vacuous_and_ranges_are_checked() {
        let g = prisoners_dilemma();
        let cc = MixedProfile::pure(&g, &[0, 0]).unwrap();
        assert!(
            check_immunity(&g, &cc, 0, &Rational::zero(), &lim())
                .unwrap()
                .holds
        );
        assert!(check_immunity(&g, &cc, 2, &Rational::zero(), &lim()).is_err());
        assert!(
            check_resilience(&g, &cc, 0, Semantics::Strong, &Rational::zero(), &lim()).is_err()
        );
        assert!(
            check_resilience(&g, &cc, 3, Semantics::Strong, &Rational::zero(), &lim()).is_err()
        );
        assert!(check_robust(&g, &cc, &RobustnessQuery::new(3, 0)).is_err());
    }

    #[test]
    fn pd_unique_pure_nash() {
        let g = prisoners_dilemma();
        assert_eq!(
            enumerate_pure_robust(&g, &RobustnessQuery::new(1, 0)).unwrap(),
            vec![vec![1, 1]]
        );
    }

    #[test]
    fn zero_one_two_zero_excludes_all_zero() {
        let g = zero_one_game(3);
        let found = enumerate_pure_robust(&g, &RobustnessQuery::new(2, 0)).unwrap();
        assert!(!found.contains(&vec![0, 0, 0]));
        // Independent brute force over all 8 profiles and all pairs/singles.
        let mut expected = Vec::new();
        for p in g.pure_profiles() {
            let base = g.payoff(&p).to_vec();
            let mut ok = true;
            for c in subsets_up_to(3, 2) {
                for joint in Odometer::new(&vec![2; c.len()]) {
                    let mut q = p.clone();
                    for (&i, &a) in c.iter().zip(&joint) {
                        q[i] = a;
                    }
                    let u = g.payoff(&q);
                    if c.iter().any(|&i| u[i] > base[i]) {
                        ok = false;
                    }
                }
            }
            if ok {
                expected.push(p);
            }
        }
        assert_eq!(found, expected);
    }

    #[test]
    fn one_player_argmax() {
        let g = NormalFormGame::new(
            vec!["p".into()],
            vec![vec!["a".into(), "b".into(), "c".into()]],
            vec![vec![q("2")], vec![q("1")], vec![q("2")]],
        )
        .unwrap();
        assert_eq!(
            enumerate_pure_robust(&g, &RobustnessQuery::new(1, 0)).unwrap(),
            vec![vec![0], vec![2]]
        );
    }

    #[test]
    fn work_bound_refuses_large_queries() {
        let g = bargaining_game(5);
        let stay = MixedProfile::pure(&g, &[0; 5]).unwrap();
        let tiny = Limits {
            max_work: 10,
            ..Limits::default()
        };
        let err = check_resilience(&g, &stay, 5, Semantics::Strong, &Rational::zero(), &tiny)
            .unwrap_err();
        assert!(err.is_resource_bound());
    }

    fn game_and_profile() -> impl Strategy<Value = (NormalFormGame, MixedProfile)> {
        prop::collection::vec(1usize..4, 2..4).prop_flat_map(|sizes| {
            let n = sizes.len();
            let total: usize = sizes.iter().product();
            let table = prop::collection::vec(prop::collection::vec(-4i64..5, n), total);
            let weights = sizes
                .iter()
                .map(|&s| prop::collection::vec(0u32..4, s))
                .collect::<Vec<_>>();
            (Just(sizes), table, weights).prop_map(|(sizes, table, weights)| {
                let n = sizes.len();
                let g = NormalFormGame::new(
                    (0..n).map(|i| format!("p{i}")).collect(),
                    sizes
                        .iter()
                        .map(|&s| (0..s).map(|a| a.to_string()).collect())
                        .collect(),
                    table
                        .into_iter()
                        .map(|r| r.into_iter().map(Rational::integer).collect())
                        .collect(),
                )
                .unwrap();
                let dists = weights
                    .into_iter()
                    .map(|w| {
                        let w: Vec<u32> = if w.iter().all(|&x| x == 0) {
                            let mut w = w;
                            w[0] = 1;
                            w
                        } else {
                            w
                        };
                        let total: u32 = w.iter().sum();
                        w.iter()
                            .map(|&x| Rational::new(x as i64, total as i64))
                            .collect()
                    })
                    .collect();
                (g, MixedProfile::new(dists).unwrap())
            })
        })
    }

    proptest! {
        #[test]
        fn one_zero_robust_is_nash((g, prof) in game_and_profile()) {
            let robust = check_robust(&g, &prof, &RobustnessQuery::new(1, 0)).unwrap();
            let nash = is_nash(&g, &prof, &Rational::zero()).unwrap();
            prop_assert_eq!(robust.holds, nash.holds);
        }

        #[test]
        fn monotone_in_k_and_t((g, prof) in game_and_profile()) {
            let n = g.num_players();
            let zero = Rational::zero();
            for k in 2..=n {
                let hi = check_resilience(&g, &prof, k, Semantics::Strong, &zero, &lim()).unwrap();
                let lo = check_resilience(&g, &prof, k - 1, Semantics::Strong, &zero, &lim()).unwrap();
                if hi.holds { prop_assert!(lo.holds); }
            }
            for t in 1..n {
                let hi = check_immunity(&g, &prof, t, &zero, &lim()).unwrap();
                let lo = check_immunity(&g, &prof, t - 1, &zero, &lim()).unwrap();
                if hi.holds { prop_assert!(lo.holds); }
            }
        }

        #[test]
        fn weak_failure_implies_strong_failure((g, prof) in game_and_profile()) {
            let zero = Rational::zero();
            for k in 1..=g.num_players() {
                let weak = check_resilience(&g, &prof, k, Semantics::Weak, &zero, &lim()).unwrap();
                let strong = check_resilience(&g, &prof, k, Semantics::Strong, &zero, &lim()).unwrap();
                if !weak.holds { prop_assert!(!strong.holds); }
            }
        }

        #[test]
        fn witnesses_recompute((g, prof) in game_and_profile()) {
            let zero = Rational::zero();
            let v = check_resilience(&g, &prof, g.num_players(), Semantics::Strong, &zero, &lim()).unwrap();
            if let Some(Witness::CoalitionDeviation { coalition, actions, payoffs }) = v.witness {
                let group: Vec<usize> = coalition.iter().map(|c| g.player_index(c).unwrap()).collect();
                let joint: Vec<usize> = group.iter().zip(&actions).map(|(&i, a)| g.action_index(i, a).unwrap()).collect();
                let after = deviation_payoffs(&g, &prof, &group, &joint).unwrap();
                let before = expected_utility(&g, &prof).unwrap();
                for (m, &i) in payoffs.iter().zip(&group) {
                    prop_assert_eq!(&m.after, &after[i]);
                    prop_assert_eq!(&m.before, &before[i]);
                }
            }
            let v = check_immunity(&g, &prof, g.num_players() - 1, &zero, &lim()).unwrap();
            if let Some(Witness::Harm { deviators, actions, victim, before, after }) = v.witness {
                let group: Vec<usize> = deviators.iter().map(|c| g.player_index(c).unwrap()).collect();
                let joint: Vec<usize> = group.iter().zip(&actions).map(|(&i, a)| g.action_index(i, a).unwrap()).collect();
                let v_idx = g.player_index(&victim).unwrap();
                prop_assert_eq!(&deviation_payoffs(&g, &prof, &group, &joint).unwrap()[v_idx], &after);
                prop_assert_eq!(&expected_utility(&g, &prof).unwrap()[v_idx], &before);
                prop_assert!(after < before);
            }
        }
    }
}
