//! Three players each pick 0 or 1. Everyone choosing 0 is a Nash
//! equilibrium, but two players can jointly switch to 1 and both gain.
//!
//! ```sh
//! cargo run --example zero_one_coalition
//! ```

use eqcheck::game::{is_nash, MixedProfile};
use eqcheck::library::zero_one_game;
use eqcheck::robust::{check_robust, RobustnessQuery};
use eqcheck::{Rational, Witness};

fn main() -> eqcheck::Result<()> {
    let game = zero_one_game(3);
    let all0 = MixedProfile::pure(&game, &[0, 0, 0])?;

    let nash = is_nash(&game, &all0, &Rational::zero())?;
    println!("all-0 is a Nash equilibrium: {}", nash.holds);

    for k in 1..=2 {
        let v = check_robust(&game, &all0, &RobustnessQuery::new(k, 0))?;
        println!("all-0 is ({k},0)-robust: {}", v.holds);
        if let Some(Witness::CoalitionDeviation {
            coalition,
            actions,
            payoffs,
        }) = v.sub("resilience").and_then(|r| r.witness.clone())
        {
            println!("  coalition {coalition:?} plays {actions:?}");
            for m in payoffs {
                println!("  player {}: {} -> {}", m.player, m.before, m.after);
            }
        }
    }
    Ok(())
}
