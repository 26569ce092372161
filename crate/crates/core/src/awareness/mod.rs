//! Games with awareness: extensive games in which players may be unaware of
//! some moves, and may believe a different game is being played at
//! different points of play.

mod builders;
mod gwa;
mod solve;
mod tree;

pub use builders::{
    build_figure1, figure1_underlying, simultaneous_extensive, Figure1Payoffs, A_VIEW, B_UNAWARE,
    MODELER,
};
pub use gwa::{
    canonical_representation, validate, AugmentedGame, BeliefEntry, GameWithAwareness, InfoRef,
    NodeRef, StrategySlot,
};
pub use solve::{
    find_pure_generalized_nash, generalized_expected_utility, is_generalized_nash,
    is_generalized_nash_with, outcome_distribution, GeneralizedProfile, MoveDistribution,
};
pub use tree::{
    Branch, ChanceBranch, DisplayHistory, ExtensiveGame, History, InfoSet, Node, NodeKind, Tree,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Limits;
    use crate::library::{matching_pennies, prisoners_dilemma};
    use crate::rational::{q, Rational};
    use crate::verdict::Witness;

    fn h(xs: &[&str]) -> History {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn figure(p: &str) -> GameWithAwareness {
        build_figure1(&q(p), &Figure1Payoffs::default()).unwrap()
    }

    fn stated_profile(a_view: &str) -> GeneralizedProfile {
        crate::library::figure1_profile(a_view)
    }

    #[test]
    fn figure1_is_consistent() {
        let g = figure("3/10");
        assert!(validate(&g).holds);
        let from = NodeRef {
            game: g.game_index(MODELER).unwrap(),
            node: 0,
        };
        let to = g.belief(from).unwrap();
        assert_eq!(g.games()[to.game].name, A_VIEW);
        assert_eq!(g.game(to.game).info_sets()[to.info_set].id, "A.1");
        let a = g.game_index(A_VIEW).unwrap();
        let node = g.game(a).node_at(&h(&["unaware", "across_A"])).unwrap();
        let to = g.belief(NodeRef { game: a, node }).unwrap();
        assert_eq!(g.games()[to.game].name, B_UNAWARE);
        let set = &g.game(to.game).info_sets()[to.info_set];
        assert_eq!(set.id, "B.3");
        assert_eq!(g.game(to.game).node(set.nodes[0]).history, h(&["across_A"]));
        // An unaware B does not see down_B.
        assert!(!g
            .awareness_level(NodeRef { game: a, node })
            .contains(&h(&["across_A", "down_B"])));
    }

    #[test]
    fn figure1_slots() {
        let g = figure("1/2");
        let slots: Vec<(String, String)> = g
            .strategy_slots()
            .iter()
            .map(|s| {
                (
                    g.players()[s.player].clone(),
                    g.games()[s.game].name.clone(),
                )
            })
            .collect();
        let pair = |p: &str, x: &str| (p.to_string(), x.to_string());
        assert_eq!(
            slots,
            [
                pair("A", A_VIEW),
                pair("A", B_UNAWARE),
                pair("B", MODELER),
                pair("B", B_UNAWARE)
            ]
        );
    }

    #[test]
    fn figure1_generalized_equilibrium_depends_on_p() {
        let low = figure("3/10");
        assert!(
            is_generalized_nash(&low, &stated_profile("across_A"), &Rational::zero())
                .unwrap()
                .holds
        );
        let found = find_pure_generalized_nash(&low, &Limits::default()).unwrap();
        assert!(found.contains(&stated_profile("across_A")));

        let high = figure("7/10");
        let v = is_generalized_nash(&high, &stated_profile("across_A"), &Rational::zero()).unwrap();
        match v.witness {
            Some(Witness::StrategyDeviation {
                player,
                game,
                strategy,
                before,
                after,
            }) => {
                assert_eq!(player, "A");
                assert_eq!(game, A_VIEW);
                assert_eq!(strategy, vec![("A.1".to_string(), "down_A".to_string())]);
                assert_eq!(before, q("3/5"));
                assert_eq!(after, q("1"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(
            is_generalized_nash(&high, &stated_profile("down_A"), &Rational::zero())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn unaware_branch_reaches_across_across() {
        let g = figure("3/10");
        let a = g.game_index(A_VIEW).unwrap();
        let out = outcome_distribution(&g, a, &stated_profile("across_A")).unwrap();
        assert_eq!(
            out,
            vec![
                (h(&["unaware", "across_A", "across_B"]), q("3/10")),
                (h(&["aware", "across_A", "down_B"]), q("7/10")),
            ]
        );
    }

    #[test]
    fn mutated_belief_map_is_caught() {
        let g = figure("1/2");
        let mut entries = g.belief_entries();
        let e = entries
            .iter_mut()
            .find(|e| e.game == MODELER && e.history == h(&["across_A"]))
            .unwrap();
        e.info_set = "A".into();
        let bad = GameWithAwareness::new(
            g.underlying().clone(),
            g.games().to_vec(),
            MODELER,
            &entries,
        )
        .unwrap();
        let v = validate(&bad);
        assert!(!v.holds);
        match v.witness {
            Some(Witness::Inconsistency {
                condition,
                game,
                node,
                ..
            }) => {
                assert_eq!(condition, "owner");
                assert_eq!(game, MODELER);
                assert_eq!(node, "<across_A>");
            }
            other => panic!("unexpected {other:?}"),
        }
        // Dropping an entry breaks totality.
        let partial: Vec<BeliefEntry> = g.belief_entries().into_iter().skip(1).collect();
        let bad = GameWithAwareness::new(
            g.underlying().clone(),
            g.games().to_vec(),
            MODELER,
            &partial,
        )
        .unwrap();
        assert!(!validate(&bad).holds);
        assert!(is_generalized_nash(&bad, &stated_profile("down_A"), &Rational::zero()).is_err());
    }

    #[test]
    fn missing_strategy_is_an_error() {
        let g = figure("1/2");
        let mut s = stated_profile("down_A");
        s = {
            let mut t = GeneralizedProfile::new();
            for (p, game, i, d) in s.entries() {
                if !(p == "B" && game == MODELER) {
                    t.set(p, game, i, d.clone());
                }
            }
            t
        };
        assert!(matches!(
            is_generalized_nash(&g, &s, &Rational::zero()),
            Err(crate::Error::MissingStrategy { .. })
        ));
    }

    #[test]
    fn canonical_prisoners_dilemma() {
        let eg = simultaneous_extensive(&prisoners_dilemma()).unwrap();
        let c = canonical_representation(&eg);
        assert_eq!(c.games().len(), 1);
        assert!(validate(&c).holds);
        for n in eg.decision_nodes() {
            let at = NodeRef { game: 0, node: n };
            assert_eq!(
                c.belief(at).unwrap().info_set,
                eg.node(n).info_set().unwrap()
            );
            assert_eq!(c.awareness_level(at).len(), eg.nodes().len());
        }
        let mut dd = GeneralizedProfile::new();
        dd.set_pure("1", "canonical", "1", "D")
            .set_pure("2", "canonical", "2", "D");
        assert!(
            is_generalized_nash(&c, &dd, &Rational::zero())
                .unwrap()
                .holds
        );
        let found = find_pure_generalized_nash(&c, &Limits::default()).unwrap();
        assert_eq!(found, vec![dd]);
    }

    #[test]
    fn canonical_matching_pennies_has_no_pure_equilibrium() {
        let c = canonical_representation(&simultaneous_extensive(&matching_pennies()).unwrap());
        assert!(find_pure_generalized_nash(&c, &Limits::default())
            .unwrap()
            .is_empty());
        // The uniform mix is verified when supplied.
        let half = || [("H".to_string(), q("1/2")), ("T".to_string(), q("1/2"))];
        let mut mix = GeneralizedProfile::new();
        mix.set("1", "canonical", "1", half())
            .set("2", "canonical", "2", half());
        assert!(
            is_generalized_nash(&c, &mix, &Rational::zero())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn virtual_move_with_zero_weight_is_neutral() {
        let t = Tree::decision(
            "A",
            None,
            vec![
                ("l", Tree::terminal(vec![q("1"), q("0")])),
                ("r", Tree::terminal(vec![q("0"), q("1")])),
                ("unknown", Tree::terminal(vec![q("5"), q("5")])),
            ],
        )
        .with_virtual("unknown");
        let eg = ExtensiveGame::new(vec!["A".into(), "B".into()], t).unwrap();
        let pruned = eg.prune_move(&[], "unknown").unwrap();
        let mut s = GeneralizedProfile::new();
        s.set(
            "A",
            "canonical",
            "<>",
            [("l".to_string(), q("1/3")), ("r".to_string(), q("2/3"))],
        );
        let u1 = generalized_expected_utility(&canonical_representation(&eg), 0, &s).unwrap();
        let u2 = generalized_expected_utility(&canonical_representation(&pruned), 0, &s).unwrap();
        assert_eq!(u1, u2);
        assert_eq!(u1, vec![q("1/3"), q("2/3")]);
    }

    #[test]
    fn figure1_rejects_bad_parameters() {
        assert!(build_figure1(&q("3/2"), &Figure1Payoffs::default()).is_err());
        let mut p = Figure1Payoffs::default();
        p.across_down[0] = q("1");
        assert!(build_figure1(&q("1/2"), &p).is_err());
    }
}
