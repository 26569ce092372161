use serde::Serialize;

use super::automaton::{RepeatedGameSpec, StandardAutomaton};
use super::oneshot::{MachineKind, OneShotGame, OneShotMachine, UtilityRule};
use super::primes::is_prime;
use super::{is_machine_nash, ComputationalGame, RepeatedMachineGame};
use crate::error::{Error, Result};
use crate::game::{BayesianGame, Limits};
use crate::library::{prisoners_dilemma, roshambo_payoff};
use crate::rational::Rational;

/// States an automaton may use before memory is charged in the prisoner's
/// dilemma helpers: enough for tit-for-tat to remember the last move.
pub const FRPD_FREE_STATES: usize = 2;

pub const TEST_AND_GUESS: &str = "TestAndGuess";
pub const ALWAYS_SAFE: &str = "AlwaysSafe";

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Two-player rock-paper-scissors over machines: three constant machines
/// costing `deterministic_cost` and a uniform randomizer costing
/// `randomized_cost`. Utility is payoff minus own complexity.
pub fn build_roshambo(
    deterministic_cost: &Rational,
    randomized_cost: &Rational,
) -> Result<OneShotGame> {
    let players = labels(&["1", "2"]);
    let actions = vec![labels(&["0", "1", "2"]); 2];
    let underlying = BayesianGame::from_fn(
        players,
        vec![labels(&["⊥"]); 2],
        actions,
        |_| Rational::one(),
        |_, a| {
            let v = roshambo_payoff(a[0], a[1]);
            vec![Rational::integer(v), Rational::integer(-v)]
        },
    )?;
    let third = Rational::new(1, 3);
    let mut space = Vec::new();
    for a in 0..3 {
        space.push(OneShotMachine::constant(
            format!("const{a}"),
            1,
            3,
            a,
            deterministic_cost.clone(),
        )?);
    }
    space.push(OneShotMachine::new(
        "uniform",
        MachineKind::Randomized,
        vec![vec![third; 3]],
        vec![randomized_cost.clone()],
    )?);
    OneShotGame::new(
        underlying,
        vec![space.clone(), space],
        UtilityRule::MinusOwnComplexity,
    )
}

/// One player guesses whether a uniformly drawn `bit_length`-bit integer is
/// prime: a right guess pays 10, a wrong one -10, and playing safe pays 1.
/// `TestAndGuess` always answers correctly at complexity
/// `cost_per_bit * bit_length`; `AlwaysSafe` is free.
pub fn build_primality_game(bit_length: u32, cost_per_bit: &Rational) -> Result<OneShotGame> {
    build_primality_game_with(bit_length, cost_per_bit, &Limits::default())
}

pub fn build_primality_game_with(
    bit_length: u32,
    cost_per_bit: &Rational,
    limits: &Limits,
) -> Result<OneShotGame> {
    if !(2..=64).contains(&bit_length) {
        return Err(Error::OutOfRange {
            name: "bit_length",
            value: bit_length.to_string(),
            expected: "2..=64".into(),
        });
    }
    if cost_per_bit.is_negative() {
        return Err(Error::OutOfRange {
            name: "cost_per_bit",
            value: cost_per_bit.to_string(),
            expected: "nonnegative".into(),
        });
    }
    let count = 1u128 << (bit_length - 1);
    limits.check_entries("primality types x actions", count * 3)?;
    let low = 1u64 << (bit_length - 1);
    let inputs: Vec<u64> = (0..count as u64).map(|k| low + k).collect();
    let types: Vec<String> = inputs.iter().map(u64::to_string).collect();
    let prime: Vec<bool> = inputs.iter().map(|&x| is_prime(x)).collect();
    let weight = Rational::new(1, count as i64);
    let underlying = BayesianGame::from_fn(
        labels(&["1"]),
        vec![types],
        vec![labels(&["guess-prime", "guess-composite", "safe"])],
        |_| weight.clone(),
        |t, a| {
            let right = match a[0] {
                0 => prime[t[0]],
                1 => !prime[t[0]],
                _ => return vec![Rational::one()],
            };
            vec![Rational::integer(if right { 10 } else { -10 })]
        },
    )?;
    let n = inputs.len();
    let answers: Vec<usize> = prime.iter().map(|&p| if p { 0 } else { 1 }).collect();
    let cost = cost_per_bit * Rational::integer(bit_length as i64);
    let test = OneShotMachine::deterministic(TEST_AND_GUESS, 3, &answers, vec![cost; n])?;
    let safe = OneShotMachine::constant(ALWAYS_SAFE, n, 3, 2, Rational::zero())?;
    OneShotGame::new(
        underlying,
        vec![vec![test, safe]],
        UtilityRule::MinusOwnComplexity,
    )
}

/// Finitely repeated prisoner's dilemma with the standard memory allowance.
pub fn frpd_spec(
    rounds: u32,
    discount: Rational,
    memory_cost: Rational,
) -> Result<RepeatedGameSpec> {
    RepeatedGameSpec::new(
        prisoners_dilemma(),
        rounds,
        discount,
        memory_cost,
        FRPD_FREE_STATES,
    )
}

/// Both players choose from the same standard automata, built for
/// `spec.rounds()`. `charged[i]` says whether player `i` pays for memory.
pub fn frpd_game(
    spec: &RepeatedGameSpec,
    space: &[StandardAutomaton],
    charged: [bool; 2],
) -> Result<RepeatedMachineGame> {
    let machines: Vec<_> = space.iter().map(|a| a.build(spec.rounds())).collect();
    RepeatedMachineGame::new(spec.clone(), vec![machines.clone(), machines], charged)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdRow {
    pub rounds: u32,
    pub symmetric: bool,
    /// `None` when the space has no defect-last automaton.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asymmetric: Option<bool>,
}

/// Where tit-for-tat starts being a machine equilibrium as the horizon grows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    /// Smallest horizon at which (TfT, TfT) is an equilibrium with both
    /// players charged for memory.
    pub symmetric: Option<u32>,
    /// Smallest horizon at which (TfT, DefectLast) is an equilibrium when
    /// only player 1 pays for memory.
    pub asymmetric: Option<u32>,
    pub scan: Vec<ThresholdRow>,
}

/// Scans horizons `1..=n_max`. The rounds stored in `spec` are ignored.
pub fn frpd_equilibrium_threshold(
    spec: &RepeatedGameSpec,
    space: &[StandardAutomaton],
    n_max: u32,
) -> Result<ThresholdReport> {
    if !space.contains(&StandardAutomaton::TitForTat) {
        return Err(Error::InvalidGame(
            "TfT is not in the automaton space".into(),
        ));
    }
    let half = Rational::new(1, 2);
    if *spec.discount() <= half {
        return Err(Error::OutOfRange {
            name: "discount",
            value: spec.discount().to_string(),
            expected: "strictly between 1/2 and 1".into(),
        });
    }
    let tft = StandardAutomaton::TitForTat.id();
    let has_defect_last = space.contains(&StandardAutomaton::DefectLast);
    let mut report = ThresholdReport {
        symmetric: None,
        asymmetric: None,
        scan: Vec::new(),
    };
    for rounds in 1..=n_max {
        let at = spec.with_rounds(rounds)?;
        let both: ComputationalGame = frpd_game(&at, space, [true, true])?.into();
        let profile = both.profile_from_ids(&[tft, tft])?;
        let symmetric = is_machine_nash(&both, &profile, &Rational::zero())?.holds;
        let asymmetric = if has_defect_last {
            let one: ComputationalGame = frpd_game(&at, space, [true, false])?.into();
            let profile = one.profile_from_ids(&[tft, StandardAutomaton::DefectLast.id()])?;
            Some(is_machine_nash(&one, &profile, &Rational::zero())?.holds)
        } else {
            None
        };
        if symmetric && report.symmetric.is_none() {
            report.symmetric = Some(rounds);
        }
        if asymmetric == Some(true) && report.asymmetric.is_none() {
            report.asymmetric = Some(rounds);
        }
        report.scan.push(ThresholdRow {
            rounds,
            symmetric,
            asymmetric,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{comp_expected_utility, exhaustive_machine_equilibria, machine_action};
    use crate::rational::q;

    fn equilibria(g: OneShotGame) -> Vec<String> {
        let g = ComputationalGame::OneShot(g);
        exhaustive_machine_equilibria(&g, &Rational::zero(), &Limits::default())
            .unwrap()
            .into_iter()
            .map(|p| g.profile_ids(&p).join(","))
            .collect()
    }

    #[test]
    fn primality_cost_switches_equilibrium() {
        // 8 bits: cost 8 * 1 = 8 < 9, 8 * 5/4 = 10 > 9.
        assert_eq!(
            equilibria(build_primality_game(8, &q("1")).unwrap()),
            [TEST_AND_GUESS]
        );
        assert_eq!(
            equilibria(build_primality_game(8, &q("5/4")).unwrap()),
            [ALWAYS_SAFE]
        );
        assert_eq!(
            equilibria(build_primality_game(8, &q("0")).unwrap()),
            [TEST_AND_GUESS]
        );
        // Exactly 9: indifferent, both pass.
        assert_eq!(
            equilibria(build_primality_game(8, &q("9/8")).unwrap()).len(),
            2
        );
    }

    #[test]
    fn primality_utilities() {
        let g = build_primality_game(6, &q("1/2")).unwrap();
        let safe = &g.machines(0)[1];
        for x in 0..safe.inputs() {
            assert_eq!(machine_action(safe, x).unwrap(), &[q("0"), q("0"), q("1")]);
        }
        let cg = ComputationalGame::OneShot(g);
        assert_eq!(comp_expected_utility(&cg, &[0]).unwrap(), vec![q("7")]);
        assert_eq!(comp_expected_utility(&cg, &[1]).unwrap(), vec![q("1")]);
    }

    #[test]
    fn primality_bounds() {
        assert!(matches!(
            build_primality_game(65, &q("1")),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            build_primality_game(1, &q("1")),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            build_primality_game(64, &q("1")),
            Err(Error::BoundExceeded { .. })
        ));
    }

    /// Closed form: TfT against TfT only loses to DefectLast, which gains
    /// `2 d^N` and pays for `N - 1` extra states.
    fn oracle_holds(delta: &Rational, c: &Rational, n: u32) -> bool {
        Rational::integer(2) * delta.pow(n) <= c * Rational::integer(n as i64 - 1)
    }

    #[test]
    fn threshold_matches_closed_form() {
        let (delta, c) = (q("9/10"), q("1/10"));
        let spec = frpd_spec(1, delta.clone(), c.clone()).unwrap();
        let r = frpd_equilibrium_threshold(&spec, &StandardAutomaton::ALL, 100).unwrap();
        for row in &r.scan {
            assert_eq!(
                row.symmetric,
                oracle_holds(&delta, &c, row.rounds),
                "{}",
                row.rounds
            );
            assert_eq!(row.asymmetric, Some(row.symmetric));
        }
        assert_eq!(r.symmetric, Some(9));
        assert_eq!(r.asymmetric, Some(9));
    }

    #[test]
    fn zero_memory_cost_has_no_threshold() {
        let spec = frpd_spec(1, q("9/10"), q("0")).unwrap();
        let r = frpd_equilibrium_threshold(&spec, &StandardAutomaton::ALL, 100).unwrap();
        assert_eq!(r.symmetric, None);
        assert!(r.scan.iter().all(|row| !row.symmetric));
    }

    #[test]
    fn expensive_memory_gives_small_threshold() {
        let spec = frpd_spec(1, q("99/100"), q("10")).unwrap();
        let r = frpd_equilibrium_threshold(&spec, &StandardAutomaton::ALL, 10).unwrap();
        assert_eq!(r.symmetric, Some(2));
    }

    #[test]
    fn threshold_preconditions() {
        let spec = frpd_spec(1, q("9/10"), q("1/10")).unwrap();
        assert!(frpd_equilibrium_threshold(
            &spec,
            &[
                StandardAutomaton::AlwaysCooperate,
                StandardAutomaton::AlwaysDefect
            ],
            10
        )
        .is_err());
        let low = frpd_spec(1, q("1/2"), q("1/10")).unwrap();
        assert!(frpd_equilibrium_threshold(&low, &StandardAutomaton::ALL, 10).is_err());
    }
}
