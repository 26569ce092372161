//! Small normal-form games used throughout the examples and tests.
//!
//! Players are named `"1"`, `"2"`, ... in declaration order.

use crate::awareness::{
    build_figure1, Figure1Payoffs, GeneralizedProfile, A_VIEW, B_UNAWARE, MODELER,
};
use crate::error::Result;
use crate::format::{
    pure_profile, AwarenessBody, BayesianBody, BayesianProfileBody, CompGameBody, GameDocument,
    GeneralizedProfileBody, MachineProfileBody, NormalFormBody, ProtocolName, RepeatedSpecBody,
    ScenarioBody,
};
use crate::game::{BayesianStrategyProfile, NormalFormGame};
use crate::machine::{build_roshambo, frpd_spec, ComputationalGame, StandardAutomaton};
use crate::rational::Rational;
use crate::sim::{ba_bayesian_game, indicator_utility, Adversary, MediatorRelay, Scenario};

fn player_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// The `n`-player 0/1 coordination game. All zeros pays everyone 1; if
/// exactly two players choose 1 they get 2 and the rest 0; anything else
/// pays 0.
pub fn zero_one_game(n: usize) -> NormalFormGame {
    assert!(n >= 2, "the 0/1 game needs at least two players");
    NormalFormGame::from_fn(player_names(n), vec![labels(&["0", "1"]); n], |p| {
        let ones = p.iter().filter(|&&a| a == 1).count();
        p.iter()
            .map(|&a| match (ones, a) {
                (0, _) => Rational::integer(1),
                (2, 1) => Rational::integer(2),
                _ => Rational::zero(),
            })
            .collect()
    })
    .expect("0/1 game is well formed")
}

/// `n` bargaining agents choosing `stay` or `leave`. If everyone stays all
/// get 2; otherwise leavers get 1 and stayers 0.
pub fn bargaining_game(n: usize) -> NormalFormGame {
    assert!(n >= 1);
    NormalFormGame::from_fn(player_names(n), vec![labels(&["stay", "leave"]); n], |p| {
        let anyone_left = p.contains(&1);
        p.iter()
            .map(|&a| match (anyone_left, a) {
                (false, _) => Rational::integer(2),
                (true, 1) => Rational::integer(1),
                (true, _) => Rational::zero(),
            })
            .collect()
    })
    .expect("bargaining game is well formed")
}

/// Stage payoffs of the prisoner's dilemma: (C,C) = (3,3), (C,D) = (-5,5),
/// (D,C) = (5,-5), (D,D) = (-3,-3). Action 0 is `C`, action 1 is `D`.
pub fn prisoners_dilemma() -> NormalFormGame {
    let table = [[(3, 3), (-5, 5)], [(5, -5), (-3, -3)]];
    NormalFormGame::from_fn(player_names(2), vec![labels(&["C", "D"]); 2], |p| {
        let (a, b) = table[p[0]][p[1]];
        vec![Rational::integer(a), Rational::integer(b)]
    })
    .expect("prisoner's dilemma is well formed")
}

pub fn matching_pennies() -> NormalFormGame {
    NormalFormGame::from_fn(player_names(2), vec![labels(&["H", "T"]); 2], |p| {
        let v = if p[0] == p[1] { 1 } else { -1 };
        vec![Rational::integer(v), Rational::integer(-v)]
    })
    .expect("matching pennies is well formed")
}

/// Rock-paper-scissors as actions 0, 1, 2: player 1 earns 1 when
/// `i = j + 1 (mod 3)`, -1 when `j = i + 1 (mod 3)`, 0 on a tie; zero-sum.
pub fn roshambo() -> NormalFormGame {
    NormalFormGame::from_fn(player_names(2), vec![labels(&["0", "1", "2"]); 2], |p| {
        let v = roshambo_payoff(p[0], p[1]);
        vec![Rational::integer(v), Rational::integer(-v)]
    })
    .expect("roshambo is well formed")
}

pub(crate) fn roshambo_payoff(i: usize, j: usize) -> i64 {
    if i == (j + 1) % 3 {
        1
    } else if j == (i + 1) % 3 {
        -1
    } else {
        0
    }
}

/// The generalized profile of the two-player awareness example in which A
/// plays `a_view` when they believe B may be aware.
pub fn figure1_profile(a_view: &str) -> GeneralizedProfile {
    let mut s = GeneralizedProfile::new();
    s.set_pure("A", A_VIEW, "A.1", a_view)
        .set_pure("A", B_UNAWARE, "A.3", "down_A")
        .set_pure("B", MODELER, "B", "down_B")
        .set_pure("B", B_UNAWARE, "B.3", "across_B");
    s
}

/// Every document shipped in the crate's `games/` directory, by file name.
pub fn example_documents() -> Result<Vec<(&'static str, GameDocument)>> {
    let nf = |g: &NormalFormGame| GameDocument::NormalForm(NormalFormBody::from_game(g));
    let pure = |g: &NormalFormGame, p: &[usize]| GameDocument::Profile(pure_profile(g, p));
    let zero_one = zero_one_game(3);
    let bargaining = bargaining_game(5);
    let pd = prisoners_dilemma();

    let roshambo = build_roshambo(&Rational::integer(1), &Rational::integer(2))?;
    let roshambo_cg: ComputationalGame = roshambo.clone().into();
    let uniform = roshambo_cg.profile_from_ids(&["uniform", "uniform"])?;

    let frpd = |c: Rational| -> Result<GameDocument> {
        let spec = frpd_spec(10, Rational::new(9, 10), c)?;
        Ok(GameDocument::RepeatedSpec(RepeatedSpecBody::standard(
            &spec,
            &StandardAutomaton::ALL,
        )))
    };
    let primality = |bits: u32, cost: Rational| {
        GameDocument::CompGame(CompGameBody::Primality {
            bit_length: bits,
            cost_per_bit: cost,
        })
    };
    let figure = |p: Rational| -> Result<GameDocument> {
        Ok(GameDocument::Awareness(AwarenessBody::from_gwa(
            &build_figure1(&p, &Figure1Payoffs::default())?,
        )))
    };
    let ba = ba_bayesian_game(3, &MediatorRelay, &Adversary::library(), &indicator_utility)?;
    let follow = BayesianStrategyProfile::pure(&ba, &[vec![0, 0], vec![0], vec![0]])?;

    Ok(vec![
        ("zeroone.json", nf(&zero_one)),
        ("all0.json", pure(&zero_one, &[0, 0, 0])),
        ("bargaining.json", nf(&bargaining)),
        ("all-stay.json", pure(&bargaining, &[0; 5])),
        ("pd.json", nf(&pd)),
        ("pd-dd.json", pure(&pd, &[1, 1])),
        ("pd-cc.json", pure(&pd, &[0, 0])),
        ("frpd.json", frpd(Rational::new(1, 10))?),
        ("frpd-free-memory.json", frpd(Rational::zero())?),
        (
            "roshambo.json",
            GameDocument::CompGame(CompGameBody::one_shot(&roshambo)),
        ),
        (
            "roshambo-free.json",
            GameDocument::CompGame(CompGameBody::one_shot(&roshambo.without_costs())),
        ),
        (
            "roshambo-uniform.json",
            GameDocument::MachineProfile(MachineProfileBody::from_profile(&roshambo_cg, &uniform)),
        ),
        ("primality8.json", primality(8, Rational::one())),
        ("primality16-cheap.json", primality(16, Rational::new(1, 2))),
        (
            "primality16-costly.json",
            primality(16, Rational::new(5, 8)),
        ),
        ("figure1.json", figure(Rational::new(3, 10))?),
        ("figure1-p07.json", figure(Rational::new(7, 10))?),
        (
            "figure1-profile.json",
            GameDocument::GeneralizedProfile(GeneralizedProfileBody::from_profile(
                &figure1_profile("across_A"),
            )),
        ),
        (
            "ba-scenario.json",
            GameDocument::Scenario(ScenarioBody {
                protocol: ProtocolName::Mediator,
                scenario: Scenario::fault_free(4, 1, true, 1).with_faults([(2, Adversary::Flip)]),
            }),
        ),
        (
            "ba-bayesian.json",
            GameDocument::Bayesian(BayesianBody::from_game(&ba)),
        ),
        (
            "ba-follow.json",
            GameDocument::BayesianProfile(BayesianProfileBody::from_profile(&ba, &follow)),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_one_table_spot_checks() {
        let g = zero_one_game(3);
        let v = |xs: [i64; 3]| xs.map(Rational::integer).to_vec();
        assert_eq!(g.payoff(&[0, 0, 0]), v([1, 1, 1]));
        assert_eq!(g.payoff(&[1, 1, 0]), v([2, 2, 0]));
        assert_eq!(g.payoff(&[1, 0, 0]), v([0, 0, 0]));
        assert_eq!(g.payoff(&[1, 1, 1]), v([0, 0, 0]));
    }

    #[test]
    fn bargaining_table_spot_checks() {
        let g = bargaining_game(5);
        assert!(g.payoff(&[0; 5]).iter().all(|u| *u == 2));
        let one_leaves = g.payoff(&[1, 0, 0, 0, 0]);
        assert_eq!(one_leaves[0], 1);
        assert!(one_leaves[1..].iter().all(|u| u.is_zero()));
    }

    #[test]
    fn roshambo_is_zero_sum_and_cyclic() {
        let g = roshambo();
        for p in g.pure_profiles() {
            let u = g.payoff(&p);
            assert!((&u[0] + &u[1]).is_zero());
        }
        // paper (1) beats rock (0)
        assert_eq!(g.payoff(&[1, 0])[0], 1);
        assert_eq!(g.payoff(&[0, 1])[0], -1);
    }
}
