//! Pure-profile enumeration on the prisoner's dilemma: only mutual
//! defection survives, whether we ask for Nash, resilience or immunity.
//!
//! ```sh
//! cargo run --example prisoners_dilemma
//! ```

use eqcheck::library::prisoners_dilemma;
use eqcheck::robust::{enumerate_pure_robust, RobustnessQuery, Semantics};

fn main() -> eqcheck::Result<()> {
    let game = prisoners_dilemma();
    for (k, t, semantics) in [
        (1, 0, Semantics::Strong),
        (2, 0, Semantics::Strong),
        (2, 0, Semantics::Weak),
        (1, 1, Semantics::Strong),
    ] {
        let query = RobustnessQuery::new(k, t).with_semantics(semantics);
        let found: Vec<Vec<String>> = enumerate_pure_robust(&game, &query)?
            .iter()
            .map(|p| game.action_names(p))
            .collect();
        println!("({k},{t})-robust, {semantics:?}: {found:?}");
    }
    Ok(())
}
