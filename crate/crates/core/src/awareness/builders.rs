use super::gwa::{AugmentedGame, BeliefEntry, GameWithAwareness};
use super::tree::{ExtensiveGame, History, Tree};
use crate::error::{Error, Result};
use crate::game::NormalFormGame;
use crate::rational::Rational;

pub const MODELER: &str = "Gamma_m";
pub const A_VIEW: &str = "Gamma_A";
pub const B_UNAWARE: &str = "Gamma_B";

/// Terminal payoffs `(A, B)` of the three-leaf game in which A chooses
/// `down_A` (ending the game) or `across_A`, after which B chooses `down_B`
/// or `across_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure1Payoffs {
    pub down_a: [Rational; 2],
    pub across_down: [Rational; 2],
    pub across_across: [Rational; 2],
}

impl Default for Figure1Payoffs {
    fn default() -> Self {
        let r = |a, b| [Rational::integer(a), Rational::integer(b)];
        Figure1Payoffs {
            down_a: r(1, 1),
            across_down: r(2, 3),
            across_across: r(0, 2),
        }
    }
}

impl Figure1Payoffs {
    /// A prefers `across_A` if B then plays `down_B`, prefers `down_A` if B
    /// plays `across_B`, and B prefers `down_B`.
    pub fn check(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::InvalidGame(format!("payoffs violate: {what}")));
        if self.across_down[0] <= self.down_a[0] {
            return fail("A must prefer across_A followed by down_B over down_A");
        }
        if self.down_a[0] <= self.across_across[0] {
            return fail("A must prefer down_A over across_A followed by across_B");
        }
        if self.across_down[1] <= self.across_across[1] {
            return fail("B must prefer down_B over across_B");
        }
        Ok(())
    }
}

fn h(xs: &[&str]) -> History {
    xs.iter().map(|s| s.to_string()).collect()
}

fn leaf(p: &[Rational; 2]) -> Tree {
    Tree::terminal(p.to_vec())
}

fn players() -> Vec<String> {
    vec!["A".into(), "B".into()]
}

/// The underlying two-move game with every player aware of everything.
pub fn figure1_underlying(payoffs: &Figure1Payoffs) -> Result<ExtensiveGame> {
    ExtensiveGame::new(players(), figure1_tree(payoffs, "A", "B", true))
}

fn figure1_tree(payoffs: &Figure1Payoffs, a_set: &str, b_set: &str, b_can_go_down: bool) -> Tree {
    let mut b_moves = Vec::new();
    if b_can_go_down {
        b_moves.push(("down_B", leaf(&payoffs.across_down)));
    }
    b_moves.push(("across_B", leaf(&payoffs.across_across)));
    Tree::decision(
        "A",
        Some(a_set),
        vec![
            ("down_A", leaf(&payoffs.down_a)),
            ("across_A", Tree::decision("B", Some(b_set), b_moves)),
        ],
    )
}

/// The three-game structure in which both players are fully aware, but A
/// thinks that with probability `p` B is unaware of `down_B`.
///
/// - `Gamma_m`: the modeler's game (information sets `A`, `B`).
/// - `Gamma_A`: A's view. Nature picks `unaware` (probability `p`) or
///   `aware`; A cannot tell which (information set `A.1`). B at `B.1` knows
///   everything; B at `B.2` is unaware of `down_B`.
/// - `Gamma_B`: the game an unaware B believes in, without `down_B`
///   (information sets `A.3`, `B.3`).
pub fn build_figure1(p: &Rational, payoffs: &Figure1Payoffs) -> Result<GameWithAwareness> {
    if p.is_negative() || *p > Rational::one() {
        return Err(Error::OutOfRange {
            name: "p",
            value: p.to_string(),
            expected: "0 <= p <= 1".into(),
        });
    }
    payoffs.check()?;
    let underlying = figure1_underlying(payoffs)?;
    let all: Vec<History> = underlying.histories().cloned().collect();
    let without_down_b: Vec<History> = all
        .iter()
        .filter(|x| **x != h(&["across_A", "down_B"]))
        .cloned()
        .collect();

    let modeler = ExtensiveGame::new(players(), figure1_tree(payoffs, "A", "B", true))?;

    let a_branch = |b_set: &str, b_aware: bool| {
        let b_awareness = if b_aware { &all } else { &without_down_b };
        Tree::decision(
            "A",
            Some("A.1"),
            vec![
                ("down_A", leaf(&payoffs.down_a)),
                (
                    "across_A",
                    Tree::decision(
                        "B",
                        Some(b_set),
                        vec![
                            ("down_B", leaf(&payoffs.across_down)),
                            ("across_B", leaf(&payoffs.across_across)),
                        ],
                    )
                    .aware_of(b_awareness.clone()),
                ),
            ],
        )
        .aware_of(all.clone())
    };
    let a_view = ExtensiveGame::new(
        players(),
        Tree::chance(vec![
            ("unaware", p.clone(), a_branch("B.2", false)),
            ("aware", Rational::one() - p, a_branch("B.1", true)),
        ]),
    )?;

    let unaware_tree = match figure1_tree(payoffs, "A.3", "B.3", false) {
        Tree::Decision {
            player,
            info_set,
            moves,
            ..
        } => Tree::Decision {
            player,
            info_set,
            aware_of: Some(without_down_b.clone()),
            moves: moves
                .into_iter()
                .map(|mut b| {
                    b.child = b.child.aware_of(without_down_b.clone());
                    b
                })
                .collect(),
        },
        _ => unreachable!("figure tree is rooted at a decision node"),
    };
    let b_unaware = ExtensiveGame::new(players(), unaware_tree)?;

    let entry = |game: &str, history: &[&str], target: &str, set: &str| BeliefEntry {
        game: game.into(),
        history: h(history),
        target_game: target.into(),
        info_set: set.into(),
    };
    let beliefs = vec![
        entry(MODELER, &[], A_VIEW, "A.1"),
        entry(MODELER, &["across_A"], MODELER, "B"),
        entry(A_VIEW, &["unaware"], A_VIEW, "A.1"),
        entry(A_VIEW, &["aware"], A_VIEW, "A.1"),
        entry(A_VIEW, &["unaware", "across_A"], B_UNAWARE, "B.3"),
        entry(A_VIEW, &["aware", "across_A"], MODELER, "B"),
        entry(B_UNAWARE, &[], B_UNAWARE, "A.3"),
        entry(B_UNAWARE, &["across_A"], B_UNAWARE, "B.3"),
    ];
    let aug = |name: &str, game| AugmentedGame {
        name: name.into(),
        game,
    };
    GameWithAwareness::new(
        underlying,
        vec![
            aug(MODELER, modeler),
            aug(A_VIEW, a_view),
            aug(B_UNAWARE, b_unaware),
        ],
        MODELER,
        &beliefs,
    )
}

/// A normal-form game written as a tree: players move in order, and each
/// player has one information set (named after the player) spanning all of
/// their nodes, so nobody observes earlier moves.
pub fn simultaneous_extensive(game: &NormalFormGame) -> Result<ExtensiveGame> {
    fn build(game: &NormalFormGame, prefix: &mut Vec<usize>) -> Tree {
        let i = prefix.len();
        if i == game.num_players() {
            return Tree::terminal(game.payoff(prefix).to_vec());
        }
        let name = game.player_name(i).to_string();
        let mut moves = Vec::new();
        for (a, label) in game.actions(i).iter().enumerate() {
            prefix.push(a);
            let child = build(game, prefix);
            prefix.pop();
            moves.push((label.as_str(), child));
        }
        Tree::decision(&name, Some(&name), moves)
    }
    ExtensiveGame::new(game.players().to_vec(), build(game, &mut Vec::new()))
}
