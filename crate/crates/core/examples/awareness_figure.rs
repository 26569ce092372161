//! A two-move game in which A is unsure whether B knows about B's own
//! `down_B` move. When A thinks B is probably unaware, A plays across; when
//! A thinks B is probably aware, A plays down.
//!
//! ```sh
//! cargo run --example awareness_figure
//! ```

use eqcheck::awareness::{
    build_figure1, find_pure_generalized_nash, is_generalized_nash, validate, Figure1Payoffs,
};
use eqcheck::game::Limits;
use eqcheck::library::figure1_profile;
use eqcheck::Rational;

fn main() -> eqcheck::Result<()> {
    for p in [Rational::new(3, 10), Rational::new(7, 10)] {
        let game = build_figure1(&p, &Figure1Payoffs::default())?;
        println!("p = {p}: consistent = {}", validate(&game).holds);
        let v = is_generalized_nash(&game, &figure1_profile("across_A"), &Rational::zero())?;
        println!("  A plays across_A: {}", serde_json::to_string(&v).unwrap());
        for eq in find_pure_generalized_nash(&game, &Limits::default())? {
            let entries: Vec<String> = eq
                .entries()
                .map(|(player, g, info, d)| {
                    let moves: Vec<&str> = d.keys().map(String::as_str).collect();
                    format!("{player}@{g}/{info}={}", moves.join("|"))
                })
                .collect();
            println!("  equilibrium: {}", entries.join(", "));
        }
    }
    Ok(())
}
