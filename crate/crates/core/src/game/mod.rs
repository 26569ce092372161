//! Finite games with exact payoffs and the baseline Nash checkers.

mod bayes;
mod normal;

pub use bayes::{
    bayes_expected_utility, bayes_expected_utility_with, is_bayes_nash, BayesianGame,
    BayesianStrategyProfile,
};
pub use normal::{
    best_response, best_response_value, expected_utility, expected_utility_fixing, is_nash,
    MixedProfile, NormalFormGame,
};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Guardrails for exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest dense payoff table (number of pure profiles) accepted.
    pub max_entries: u64,
    /// Largest number of elementary evaluations a single query may perform.
    pub max_work: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_entries: 10_000_000,
            max_work: 100_000_000,
        }
    }
}

impl Limits {
    pub fn check_entries(&self, what: impl Into<String>, needed: u128) -> Result<()> {
        if needed > self.max_entries as u128 {
            return Err(Error::BoundExceeded {
                what: what.into(),
                needed,
                bound: self.max_entries,
            });
        }
        Ok(())
    }

    pub fn check_work(&self, what: impl Into<String>, needed: u128) -> Result<()> {
        if needed > self.max_work as u128 {
            return Err(Error::BoundExceeded {
                what: what.into(),
                needed,
                bound: self.max_work,
            });
        }
        Ok(())
    }
}

/// Product of sizes, saturating instead of overflowing.
pub fn product_size(sizes: &[usize]) -> u128 {
    sizes
        .iter()
        .fold(1u128, |acc, &s| acc.saturating_mul(s as u128))
}

/// Iterates every tuple in a mixed-radix product space in lexicographic
/// order (first coordinate most significant).
#[derive(Debug, Clone)]
pub struct Odometer {
    sizes: Vec<usize>,
    current: Option<Vec<usize>>,
}

impl Odometer {
    pub fn new(sizes: &[usize]) -> Self {
        let current = if sizes.contains(&0) {
            None
        } else {
            Some(vec![0; sizes.len()])
        };
        Odometer {
            sizes: sizes.to_vec(),
            current,
        }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        let mut pos = next.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            next[pos] += 1;
            if next[pos] < self.sizes[pos] {
                self.current = Some(next);
                break;
            }
            next[pos] = 0;
        }
        Some(out)
    }
}

/// All subsets of `0..n` with `1 <= size <= max`, ordered by size and then
/// lexicographically.
pub fn subsets_up_to(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=max.min(n) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            out.push(combo.clone());
            let mut i = size;
            let advanced = loop {
                if i == 0 {
                    break false;
                }
                i -= 1;
                if combo[i] < n - size + i {
                    combo[i] += 1;
                    for j in i + 1..size {
                        combo[j] = combo[j - 1] + 1;
                    }
                    break true;
                }
            };
            if !advanced {
                break;
            }
        }
    }
    out
}

/// Checks that `weights` is a probability vector.
pub fn check_distribution(weights: &[Rational], at: impl Fn() -> String) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::Distribution {
            at: at(),
            reason: "empty".into(),
        });
    }
    if let Some(w) = weights.iter().find(|w| w.is_negative()) {
        return Err(Error::Distribution {
            at: at(),
            reason: format!("negative weight {w}"),
        });
    }
    let total: Rational = weights.iter().sum();
    if !total.is_one() {
        return Err(Error::Distribution {
            at: at(),
            reason: format!("weights sum to {total}, not 1"),
        });
    }
    Ok(())
}

pub(crate) fn check_epsilon(epsilon: &Rational) -> Result<()> {
    if epsilon.is_negative() {
        return Err(Error::NegativeEpsilon(epsilon.clone()));
    }
    Ok(())
}

pub(crate) fn check_labels(what: &str, labels: &[String]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::InvalidGame(format!("{what}: list is empty")));
    }
    let mut seen = std::collections::HashSet::with_capacity(labels.len());
    match labels.iter().find(|l| !seen.insert(l.as_str())) {
        Some(l) => Err(Error::InvalidGame(format!("{what}: duplicate label {l:?}"))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odometer_is_lexicographic() {
        let all: Vec<_> = Odometer::new(&[2, 3]).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 1],
                vec![1, 2]
            ]
        );
        assert_eq!(
            Odometer::new(&[]).collect::<Vec<_>>(),
            vec![Vec::<usize>::new()]
        );
        assert_eq!(Odometer::new(&[2, 0]).count(), 0);
    }

    #[test]
    fn subsets_by_size_then_lex() {
        let s = subsets_up_to(3, 2);
        assert_eq!(
            s,
            vec![
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2]
            ]
        );
        assert_eq!(subsets_up_to(5, 5).len(), 31);
        assert!(subsets_up_to(4, 0).is_empty());
    }
}
