//! Five bargaining agents: if everyone stays all get 2, otherwise leavers
//! get 1 and stayers 0. Staying is resilient to every coalition but one
//! player leaving hurts everyone else.
//!
//! ```sh
//! cargo run --example bargaining_immunity
//! ```

use eqcheck::game::{Limits, MixedProfile};
use eqcheck::library::bargaining_game;
use eqcheck::robust::{check_immunity, check_resilience, Semantics};
use eqcheck::{Rational, Witness};

fn main() -> eqcheck::Result<()> {
    let game = bargaining_game(5);
    let stay = MixedProfile::pure(&game, &[0; 5])?;
    let zero = Rational::zero();
    let limits = Limits::default();

    for k in 1..=5 {
        let v = check_resilience(&game, &stay, k, Semantics::Strong, &zero, &limits)?;
        println!("all-stay is {k}-resilient: {}", v.holds);
    }
    let v = check_immunity(&game, &stay, 1, &zero, &limits)?;
    println!("all-stay is 1-immune: {}", v.holds);
    if let Some(Witness::Harm {
        deviators,
        actions,
        victim,
        before,
        after,
    }) = v.witness
    {
        println!("  {deviators:?} play {actions:?}; player {victim} drops {before} -> {after}");
    }
    Ok(())
}
