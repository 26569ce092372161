//! When everyone is aware of everything, a game with awareness collapses to
//! the ordinary game: generalized equilibria of the canonical
//! representation are exactly the Nash equilibria.
//!
//! ```sh
//! cargo run --example canonical_representation
//! ```

use eqcheck::awareness::{
    canonical_representation, find_pure_generalized_nash, simultaneous_extensive,
};
use eqcheck::game::{is_nash, Limits, MixedProfile};
use eqcheck::library::{matching_pennies, prisoners_dilemma, zero_one_game};
use eqcheck::Rational;

fn main() -> eqcheck::Result<()> {
    for (name, game) in [
        ("prisoner's dilemma", prisoners_dilemma()),
        ("matching pennies", matching_pennies()),
        ("0/1 game", zero_one_game(3)),
    ] {
        let mut nash = Vec::new();
        for p in game.pure_profiles() {
            if is_nash(&game, &MixedProfile::pure(&game, &p)?, &Rational::zero())?.holds {
                nash.push(game.action_names(&p));
            }
        }
        let canonical = canonical_representation(&simultaneous_extensive(&game)?);
        let generalized = find_pure_generalized_nash(&canonical, &Limits::default())?;
        println!(
            "{name}: pure Nash {nash:?}, generalized {}",
            generalized.len()
        );
    }
    Ok(())
}
