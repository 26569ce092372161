//! Guess whether a random n-bit number is prime. Testing always answers
//! correctly but costs in proportion to the bit length; playing safe pays a
//! sure 1. The equilibrium flips when the test costs more than 9.
//!
//! ```sh
//! cargo run --release --example primality
//! ```

use eqcheck::game::Limits;
use eqcheck::machine::{
    build_primality_game, comp_expected_utility, exhaustive_machine_equilibria, ComputationalGame,
};
use eqcheck::Rational;

fn main() -> eqcheck::Result<()> {
    for (bits, cost_per_bit) in [
        (8, Rational::one()),
        (16, Rational::new(1, 2)),
        (16, Rational::new(5, 8)),
    ] {
        let game: ComputationalGame = build_primality_game(bits, &cost_per_bit)?.into();
        let test = comp_expected_utility(&game, &[0])?;
        let found = exhaustive_machine_equilibria(&game, &Rational::zero(), &Limits::default())?;
        let ids: Vec<String> = found.iter().map(|p| game.profile_ids(p).join("")).collect();
        println!(
            "{bits} bits, test cost {}: testing earns {}, equilibria {ids:?}",
            &cost_per_bit * Rational::integer(bits as i64),
            test[0]
        );
    }
    Ok(())
}
