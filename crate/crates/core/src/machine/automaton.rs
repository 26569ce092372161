use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::NormalFormGame;
use crate::rational::Rational;

/// A Moore machine for a two-player repeated game: each state emits a stage
/// action and moves on according to the opponent's stage action.
#[derive(Debug, Clone, PartialEq)]
pub struct RepeatedGameAutomaton {
    id: String,
    states: Vec<String>,
    initial: usize,
    output: Vec<usize>,
    transition: Vec<Vec<usize>>,
}

impl RepeatedGameAutomaton {
    pub fn new(
        id: impl Into<String>,
        states: Vec<String>,
        initial: usize,
        output: Vec<usize>,
        transition: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let id = id.into();
        let n = states.len();
        if n == 0 {
            return Err(Error::InvalidGame(format!(
                "automaton {id:?} has no states"
            )));
        }
        if initial >= n {
            return Err(Error::InvalidGame(format!(
                "automaton {id:?}: initial state #{initial} out of range"
            )));
        }
        if output.len() != n || transition.len() != n {
            return Err(Error::Dimension(format!(
                "automaton {id:?}: output/transition must cover all {n} states"
            )));
        }
        let width = transition[0].len();
        if width == 0 || transition.iter().any(|row| row.len() != width) {
            return Err(Error::Dimension(format!(
                "automaton {id:?}: transition rows must all cover the opponent's actions"
            )));
        }
        if transition.iter().flatten().any(|&s| s >= n) {
            return Err(Error::InvalidGame(format!(
                "automaton {id:?}: transition to an unknown state"
            )));
        }
        Ok(RepeatedGameAutomaton {
            id,
            states,
            initial,
            output,
            transition,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn output(&self) -> &[usize] {
        &self.output
    }

    pub fn transition(&self) -> &[Vec<usize>] {
        &self.transition
    }

    fn check_fits(&self, own_actions: usize, opponent_actions: usize) -> Result<()> {
        if self.output.iter().any(|&a| a >= own_actions)
            || self.transition[0].len() != opponent_actions
        {
            return Err(Error::Dimension(format!(
                "automaton {:?} does not act over the stage game's actions",
                self.id
            )));
        }
        Ok(())
    }
}

const C: usize = 0;
const D: usize = 1;

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Standard prisoner's dilemma automata. All of them assume stage action 0
/// is cooperate and action 1 is defect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StandardAutomaton {
    #[serde(rename = "AllC")]
    AlwaysCooperate,
    #[serde(rename = "AllD")]
    AlwaysDefect,
    #[serde(rename = "TfT")]
    TitForTat,
    #[serde(rename = "Grim")]
    Grim,
    /// Tit-for-tat-like cooperation that defects in the final round; needs a
    /// round counter, so its size grows with the horizon.
    #[serde(rename = "DefectLast")]
    DefectLast,
}

impl StandardAutomaton {
    pub const ALL: [StandardAutomaton; 5] = [
        StandardAutomaton::AlwaysCooperate,
        StandardAutomaton::AlwaysDefect,
        StandardAutomaton::TitForTat,
        StandardAutomaton::Grim,
        StandardAutomaton::DefectLast,
    ];

    pub fn id(self) -> &'static str {
        match self {
            StandardAutomaton::AlwaysCooperate => "AllC",
            StandardAutomaton::AlwaysDefect => "AllD",
            StandardAutomaton::TitForTat => "TfT",
            StandardAutomaton::Grim => "Grim",
            StandardAutomaton::DefectLast => "DefectLast",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.id() == id)
    }

    /// The automaton for an `rounds`-round game.
    pub fn build(self, rounds: u32) -> RepeatedGameAutomaton {
        let id = self.id();
        let built = match self {
            StandardAutomaton::AlwaysCooperate => {
                RepeatedGameAutomaton::new(id, labels(&["c"]), 0, vec![C], vec![vec![0, 0]])
            }
            StandardAutomaton::AlwaysDefect => {
                RepeatedGameAutomaton::new(id, labels(&["d"]), 0, vec![D], vec![vec![0, 0]])
            }
            StandardAutomaton::TitForTat => RepeatedGameAutomaton::new(
                id,
                labels(&["c", "d"]),
                0,
                vec![C, D],
                vec![vec![0, 1], vec![0, 1]],
            ),
            StandardAutomaton::Grim => RepeatedGameAutomaton::new(
                id,
                labels(&["c", "punish"]),
                0,
                vec![C, D],
                vec![vec![0, 1], vec![1, 1]],
            ),
            StandardAutomaton::DefectLast => return defect_last(rounds),
        };
        built.expect("standard automata are well formed")
    }
}

/// Cooperates while counting rounds, defects in round `rounds`, and switches
/// to permanent defection if the opponent ever defects first. States are
/// `r1..r{N-1}` (cooperate), `last` (defect) and `punish`: `N + 1` in all.
pub fn defect_last(rounds: u32) -> RepeatedGameAutomaton {
    let n = rounds.max(1) as usize;
    let last = n - 1;
    let punish = n;
    let mut states: Vec<String> = (1..n).map(|r| format!("r{r}")).collect();
    states.push("last".into());
    states.push("punish".into());
    let mut output = vec![C; n - 1];
    output.push(D);
    output.push(D);
    let mut transition: Vec<Vec<usize>> = (0..n - 1).map(|s| vec![s + 1, punish]).collect();
    transition.push(vec![last, last]);
    transition.push(vec![punish, punish]);
    RepeatedGameAutomaton::new("DefectLast", states, 0, output, transition)
        .expect("defect-last automaton is well formed")
}

/// A finitely repeated two-player game with discounting and a charge for
/// automaton size.
#[derive(Debug, Clone, PartialEq)]
pub struct RepeatedGameSpec {
    stage: NormalFormGame,
    rounds: u32,
    discount: Rational,
    memory_cost: Rational,
    free_states: usize,
}

impl RepeatedGameSpec {
    /// `memory_cost` is charged for every state beyond `free_states`.
    pub fn new(
        stage: NormalFormGame,
        rounds: u32,
        discount: Rational,
        memory_cost: Rational,
        free_states: usize,
    ) -> Result<Self> {
        if stage.num_players() != 2 {
            return Err(Error::InvalidGame(format!(
                "stage game must have 2 players, has {}",
                stage.num_players()
            )));
        }
        if rounds == 0 {
            return Err(Error::OutOfRange {
                name: "rounds",
                value: "0".into(),
                expected: "at least 1".into(),
            });
        }
        if !(discount.is_positive() && discount < Rational::one()) {
            return Err(Error::OutOfRange {
                name: "discount",
                value: discount.to_string(),
                expected: "strictly between 0 and 1".into(),
            });
        }
        if memory_cost.is_negative() {
            return Err(Error::OutOfRange {
                name: "memory_cost",
                value: memory_cost.to_string(),
                expected: "nonnegative".into(),
            });
        }
        Ok(RepeatedGameSpec {
            stage,
            rounds,
            discount,
            memory_cost,
            free_states,
        })
    }

    pub fn stage(&self) -> &NormalFormGame {
        &self.stage
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    pub fn discount(&self) -> &Rational {
        &self.discount
    }

    pub fn memory_cost(&self) -> &Rational {
        &self.memory_cost
    }

    pub fn free_states(&self) -> usize {
        self.free_states
    }

    pub fn with_rounds(&self, rounds: u32) -> Result<Self> {
        Self::new(
            self.stage.clone(),
            rounds,
            self.discount.clone(),
            self.memory_cost.clone(),
            self.free_states,
        )
    }

    pub fn with_memory_cost(&self, memory_cost: Rational) -> Result<Self> {
        Self::new(
            self.stage.clone(),
            self.rounds,
            self.discount.clone(),
            memory_cost,
            self.free_states,
        )
    }

    /// Memory charge for an automaton with `states` states.
    pub fn memory_charge(&self, states: usize) -> Rational {
        let billed = states.saturating_sub(self.free_states) as i64;
        &self.memory_cost * Rational::integer(billed)
    }
}

/// Stage-action pairs played in each round.
pub fn trajectory(
    spec: &RepeatedGameSpec,
    m1: &RepeatedGameAutomaton,
    m2: &RepeatedGameAutomaton,
) -> Result<Vec<(usize, usize)>> {
    let stage = spec.stage();
    let (a1, a2) = (stage.actions(0).len(), stage.actions(1).len());
    m1.check_fits(a1, a2)?;
    m2.check_fits(a2, a1)?;
    let (mut s1, mut s2) = (m1.initial, m2.initial);
    let mut out = Vec::with_capacity(spec.rounds as usize);
    for _ in 0..spec.rounds {
        let (x, y) = (m1.output[s1], m2.output[s2]);
        out.push((x, y));
        s1 = m1.transition[s1][y];
        s2 = m2.transition[s2][x];
    }
    Ok(out)
}

/// Discounted payoffs `sum_{m=1..N} discount^m * r_m` of the two automata,
/// before any memory charge.
pub fn run_automata(
    spec: &RepeatedGameSpec,
    m1: &RepeatedGameAutomaton,
    m2: &RepeatedGameAutomaton,
) -> Result<(Rational, Rational)> {
    // With discount p/q and payoffs scaled to integers by L, the sum is
    // T_N / (q^N L) where T_k = q T_{k-1} + L r_k p^k; integer steps avoid a
    // gcd per round.
    let scale = spec
        .stage
        .payoff_table()
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let (p, q) = (spec.discount.numer(), spec.discount.denom());
    let mut p_pow = BigInt::one();
    let mut totals = [BigInt::zero(), BigInt::zero()];
    for (x, y) in trajectory(spec, m1, m2)? {
        p_pow *= p;
        let r = spec.stage.payoff(&[x, y]);
        for (t, r) in totals.iter_mut().zip(r) {
            let scaled = r.numer() * (&scale / r.denom());
            *t = &*t * q + scaled * &p_pow;
        }
    }
    let denom = num_traits::pow(q.clone(), spec.rounds as usize) * scale;
    let [t1, t2] = totals;
    Ok((
        BigRational::new(t1, denom.clone()).into(),
        BigRational::new(t2, denom).into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::prisoners_dilemma;
    use crate::rational::q;
    use StandardAutomaton::*;

    fn spec(n: u32, delta: &str) -> RepeatedGameSpec {
        RepeatedGameSpec::new(prisoners_dilemma(), n, q(delta), q("0"), 0).unwrap()
    }

    fn discount_sum(delta: &Rational, n: u32) -> Rational {
        (1..=n).map(|m| delta.pow(m)).sum()
    }

    #[test]
    fn tft_pair_cooperates_throughout() {
        for n in [1, 2, 7, 30] {
            let s = spec(n, "9/10");
            let (u1, u2) = run_automata(&s, &TitForTat.build(n), &TitForTat.build(n)).unwrap();
            let expect = Rational::integer(3) * discount_sum(&q("9/10"), n);
            assert_eq!(u1, expect);
            assert_eq!(u2, expect);
        }
    }

    #[test]
    fn all_d_against_all_c() {
        let s = spec(5, "3/4");
        let (u1, u2) = run_automata(&s, &AlwaysDefect.build(5), &AlwaysCooperate.build(5)).unwrap();
        let sum = discount_sum(&q("3/4"), 5);
        assert_eq!(u1, Rational::integer(5) * &sum);
        assert_eq!(u2, Rational::integer(-5) * &sum);
    }

    #[test]
    fn all_d_against_tft_three_rounds() {
        // D/C, D/D, D/D: 5d - 3d^2 - 3d^3 and -5d - 3d^2 - 3d^3 at d = 9/10.
        let s = spec(3, "9/10");
        let (u1, u2) = run_automata(&s, &AlwaysDefect.build(3), &TitForTat.build(3)).unwrap();
        assert_eq!(u1, q("-117/1000"));
        assert_eq!(u2, q("-9117/1000"));
    }

    #[test]
    fn defect_last_shape_and_play() {
        for n in 1..8 {
            assert_eq!(defect_last(n).num_states() as u32, n + 1);
        }
        let s = spec(4, "1/2");
        let t = trajectory(&s, &DefectLast.build(4), &TitForTat.build(4)).unwrap();
        assert_eq!(t, vec![(C, C), (C, C), (C, C), (D, C)]);
        // Punishes an opponent who defects first.
        let t = trajectory(&s, &DefectLast.build(4), &AlwaysDefect.build(4)).unwrap();
        assert_eq!(t, vec![(C, D), (D, D), (D, D), (D, D)]);
    }

    #[test]
    fn runs_are_deterministic() {
        let s = spec(25, "9/10");
        let a = run_automata(&s, &Grim.build(25), &DefectLast.build(25)).unwrap();
        let b = run_automata(&s, &Grim.build(25), &DefectLast.build(25)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn action_mismatch_is_an_error() {
        let s = spec(2, "1/2");
        let three =
            RepeatedGameAutomaton::new("bad", vec!["x".into()], 0, vec![2], vec![vec![0, 0]])
                .unwrap();
        assert!(run_automata(&s, &three, &TitForTat.build(2)).is_err());
    }

    #[test]
    fn spec_validation() {
        let pd = prisoners_dilemma();
        assert!(RepeatedGameSpec::new(pd.clone(), 0, q("1/2"), q("0"), 0).is_err());
        assert!(RepeatedGameSpec::new(pd.clone(), 3, q("1"), q("0"), 0).is_err());
        assert!(RepeatedGameSpec::new(pd.clone(), 3, q("0"), q("0"), 0).is_err());
        assert!(RepeatedGameSpec::new(pd, 3, q("1/2"), q("-1"), 0).is_err());
    }
}
