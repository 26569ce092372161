use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{check_distribution, BayesianGame, Odometer};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MachineKind {
    Deterministic,
    Randomized,
}

/// A machine that maps its owner's type to a distribution over actions and
/// declares a complexity for every input.
#[derive(Debug, Clone, PartialEq)]
pub struct OneShotMachine {
    id: String,
    kind: MachineKind,
    act: Vec<Vec<Rational>>,
    complexity: Vec<Rational>,
}

impl OneShotMachine {
    pub fn new(
        id: impl Into<String>,
        kind: MachineKind,
        act: Vec<Vec<Rational>>,
        complexity: Vec<Rational>,
    ) -> Result<Self> {
        let id = id.into();
        if act.is_empty() {
            return Err(Error::InvalidGame(format!(
                "machine {id:?} has an empty domain"
            )));
        }
        if complexity.len() != act.len() {
            return Err(Error::Dimension(format!(
                "machine {id:?}: {} complexities for {} inputs",
                complexity.len(),
                act.len()
            )));
        }
        for (input, d) in act.iter().enumerate() {
            check_distribution(d, || format!("machine {id:?}, input #{input}"))?;
            if kind == MachineKind::Deterministic && !d.iter().any(Rational::is_one) {
                return Err(Error::Distribution {
                    at: format!("machine {id:?}, input #{input}"),
                    reason: "deterministic machine must put all weight on one action".into(),
                });
            }
        }
        if let Some(c) = complexity.iter().find(|c| c.is_negative()) {
            return Err(Error::InvalidGame(format!(
                "machine {id:?}: negative complexity {c}"
            )));
        }
        Ok(OneShotMachine {
            id,
            kind,
            act,
            complexity,
        })
    }

    /// Deterministic machine playing `choice[input]` out of `actions`.
    pub fn deterministic(
        id: impl Into<String>,
        actions: usize,
        choice: &[usize],
        complexity: Vec<Rational>,
    ) -> Result<Self> {
        let act = choice
            .iter()
            .map(|&a| {
                (0..actions)
                    .map(|j| {
                        if j == a {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(id, MachineKind::Deterministic, act, complexity)
    }

    /// Ignores its input and always plays `action`.
    pub fn constant(
        id: impl Into<String>,
        inputs: usize,
        actions: usize,
        action: usize,
        complexity: Rational,
    ) -> Result<Self> {
        Self::deterministic(id, actions, &vec![action; inputs], vec![complexity; inputs])
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn kind(&self) -> MachineKind {
        self.kind
    }

    pub fn inputs(&self) -> usize {
        self.act.len()
    }

    pub fn table(&self) -> &[Vec<Rational>] {
        &self.act
    }

    pub fn complexities(&self) -> &[Rational] {
        &self.complexity
    }

    pub fn complexity(&self, input: usize) -> Result<&Rational> {
        self.complexity
            .get(input)
            .ok_or_else(|| self.outside(input))
    }

    /// Same machine with every complexity replaced by zero.
    pub fn free(&self) -> Self {
        OneShotMachine {
            complexity: vec![Rational::zero(); self.complexity.len()],
            ..self.clone()
        }
    }

    fn outside(&self, input: usize) -> Error {
        Error::InputOutsideDomain {
            machine: self.id.clone(),
            input: format!("#{input}"),
        }
    }
}

/// Output distribution of `machine` on `input`.
pub fn machine_action(machine: &OneShotMachine, input: usize) -> Result<&[Rational]> {
    machine
        .act
        .get(input)
        .map(Vec::as_slice)
        .ok_or_else(|| machine.outside(input))
}

/// How the complexity profile enters utilities.
#[derive(Debug, Clone, PartialEq)]
pub enum UtilityRule {
    /// `u_i = payoff_i - c_i`.
    MinusOwnComplexity,
    /// `u_i = payoff_i - sum_j weights[i][j] * c_j`.
    Linear(Vec<Vec<Rational>>),
}

impl UtilityRule {
    fn charge(&self, player: usize, complexities: &[Rational]) -> Rational {
        match self {
            UtilityRule::MinusOwnComplexity => complexities[player].clone(),
            UtilityRule::Linear(w) => w[player].iter().zip(complexities).map(|(a, b)| a * b).sum(),
        }
    }
}

/// A computational Bayesian game whose players choose one-shot machines.
#[derive(Debug, Clone, PartialEq)]
pub struct OneShotGame {
    underlying: BayesianGame,
    machines: Vec<Vec<OneShotMachine>>,
    rule: UtilityRule,
}

impl OneShotGame {
    pub fn new(
        underlying: BayesianGame,
        machines: Vec<Vec<OneShotMachine>>,
        rule: UtilityRule,
    ) -> Result<Self> {
        let n = underlying.num_players();
        if machines.len() != n {
            return Err(Error::Dimension(format!(
                "{} machine spaces for {n} players",
                machines.len()
            )));
        }
        for (i, space) in machines.iter().enumerate() {
            let player = &underlying.players()[i];
            if space.is_empty() {
                return Err(Error::InvalidGame(format!(
                    "machine space of {player:?} is empty"
                )));
            }
            for (j, m) in space.iter().enumerate() {
                if space[..j].iter().any(|o| o.id == m.id) {
                    return Err(Error::InvalidGame(format!(
                        "duplicate machine id {:?} for {player:?}",
                        m.id
                    )));
                }
                if m.inputs() != underlying.types(i).len() {
                    return Err(Error::Dimension(format!(
                        "machine {:?} takes {} inputs, {player:?} has {} types",
                        m.id,
                        m.inputs(),
                        underlying.types(i).len()
                    )));
                }
                if m.table()
                    .iter()
                    .any(|d| d.len() != underlying.actions(i).len())
                {
                    return Err(Error::Dimension(format!(
                        "machine {:?} outputs over the wrong action set for {player:?}",
                        m.id
                    )));
                }
            }
        }
        if let UtilityRule::Linear(w) = &rule {
            if w.len() != n || w.iter().any(|r| r.len() != n) {
                return Err(Error::Dimension("utility weights must be n x n".into()));
            }
        }
        Ok(OneShotGame {
            underlying,
            machines,
            rule,
        })
    }

    pub fn underlying(&self) -> &BayesianGame {
        &self.underlying
    }

    pub fn machines(&self, player: usize) -> &[OneShotMachine] {
        &self.machines[player]
    }

    pub fn rule(&self) -> &UtilityRule {
        &self.rule
    }

    /// Same game with all complexities zeroed.
    pub fn without_costs(&self) -> Self {
        OneShotGame {
            machines: self
                .machines
                .iter()
                .map(|s| s.iter().map(OneShotMachine::free).collect())
                .collect(),
            ..self.clone()
        }
    }

    pub(crate) fn utility(&self, profile: &[usize]) -> Vec<Rational> {
        let g = &self.underlying;
        let n = g.num_players();
        let machines: Vec<&OneShotMachine> =
            (0..n).map(|i| &self.machines[i][profile[i]]).collect();
        let mut total = vec![Rational::zero(); n];
        // Runs of equal prior weight are summed first and scaled once.
        let mut run: Option<(&Rational, Vec<Rational>)> = None;
        let mut actions = vec![0; n];
        for (types, p) in g.type_profiles() {
            let complexities: Vec<Rational> = (0..n)
                .map(|i| machines[i].complexity[types[i]].clone())
                .collect();
            let supports: Vec<Vec<(usize, &Rational)>> = (0..n)
                .map(|i| {
                    machines[i].act[types[i]]
                        .iter()
                        .enumerate()
                        .filter(|(_, w)| !w.is_zero())
                        .collect()
                })
                .collect();
            let sizes: Vec<usize> = supports.iter().map(Vec::len).collect();
            let mut payoff = vec![Rational::zero(); n];
            for pick in Odometer::new(&sizes) {
                let mut w = Rational::one();
                for (i, &k) in pick.iter().enumerate() {
                    actions[i] = supports[i][k].0;
                    w *= supports[i][k].1;
                }
                for (acc, u) in payoff.iter_mut().zip(g.utility(&types, &actions)) {
                    *acc += &w * u;
                }
            }
            if run.as_ref().is_some_and(|(w, _)| *w != p) {
                let (w, sums) = run.take().expect("checked above");
                for (t, s) in total.iter_mut().zip(sums) {
                    *t += w * &s;
                }
            }
            let (_, sums) = run.get_or_insert_with(|| (p, vec![Rational::zero(); n]));
            for i in 0..n {
                sums[i] += &payoff[i] - self.rule.charge(i, &complexities);
            }
        }
        if let Some((w, sums)) = run {
            for (t, s) in total.iter_mut().zip(sums) {
                *t += w * &s;
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn deterministic_machines_are_degenerate() {
        let m = OneShotMachine::deterministic("d", 3, &[2, 0], vec![q("1"), q("1")]).unwrap();
        assert_eq!(machine_action(&m, 0).unwrap(), &[q("0"), q("0"), q("1")]);
        assert_eq!(machine_action(&m, 1).unwrap(), &[q("1"), q("0"), q("0")]);
        let bad = OneShotMachine::new(
            "x",
            MachineKind::Deterministic,
            vec![vec![q("1/2"), q("1/2")]],
            vec![q("1")],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn input_outside_domain() {
        let m = OneShotMachine::constant("c", 1, 2, 0, q("1")).unwrap();
        assert!(matches!(
            machine_action(&m, 1),
            Err(Error::InputOutsideDomain { .. })
        ));
    }

    #[test]
    fn complexity_must_cover_domain_and_be_nonnegative() {
        assert!(OneShotMachine::new(
            "m",
            MachineKind::Randomized,
            vec![vec![q("1")], vec![q("1")]],
            vec![q("0")]
        )
        .is_err());
        assert!(OneShotMachine::new(
            "m",
            MachineKind::Randomized,
            vec![vec![q("1")]],
            vec![q("-1")]
        )
        .is_err());
    }
}
