//! Rock-paper-scissors where randomizing costs more than playing a fixed
//! action: no machine profile is an equilibrium. Make computation free and
//! uniform randomization is an equilibrium again.
//!
//! ```sh
//! cargo run --example roshambo_machines
//! ```

use eqcheck::game::Limits;
use eqcheck::machine::{
    build_roshambo, exhaustive_machine_equilibria, is_machine_nash, ComputationalGame,
};
use eqcheck::Rational;

fn main() -> eqcheck::Result<()> {
    let priced: ComputationalGame =
        build_roshambo(&Rational::integer(1), &Rational::integer(2))?.into();
    let free = priced.without_costs();
    let zero = Rational::zero();
    let limits = Limits::default();

    for (name, game) in [("costly", &priced), ("free", &free)] {
        let found = exhaustive_machine_equilibria(game, &zero, &limits)?;
        let ids: Vec<String> = found
            .iter()
            .map(|p| game.profile_ids(p).join(" vs "))
            .collect();
        println!("{name}: {} equilibria {ids:?}", found.len());
    }

    let uniform = priced.profile_from_ids(&["uniform", "uniform"])?;
    let v = is_machine_nash(&priced, &uniform, &zero)?;
    println!(
        "(uniform, uniform) with costs: {}",
        serde_json::to_string(&v).unwrap()
    );
    Ok(())
}
