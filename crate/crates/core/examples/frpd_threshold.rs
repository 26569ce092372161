//! Finitely repeated prisoner's dilemma played by automata that pay for
//! memory. Defecting in the last round needs extra states; once the horizon
//! is long enough, that memory costs more than the last-round gain and
//! tit-for-tat becomes an equilibrium.
//!
//! ```sh
//! cargo run --example frpd_threshold
//! ```

use eqcheck::machine::{frpd_equilibrium_threshold, frpd_spec, run_automata, StandardAutomaton};
use eqcheck::Rational;

fn main() -> eqcheck::Result<()> {
    let space = StandardAutomaton::ALL;
    let spec = frpd_spec(10, Rational::new(9, 10), Rational::new(1, 10))?;

    let tft = StandardAutomaton::TitForTat.build(10);
    for other in space {
        let m = other.build(10);
        let (u1, u2) = run_automata(&spec, &tft, &m)?;
        println!(
            "TfT vs {:<10} ({} states): {u1} / {u2}",
            other.id(),
            m.num_states()
        );
    }

    let report = frpd_equilibrium_threshold(&spec, &space, 100)?;
    println!(
        "(TfT, TfT) is an equilibrium from N = {:?}",
        report.symmetric
    );
    println!(
        "(TfT, DefectLast) with one player charged, from N = {:?}",
        report.asymmetric
    );

    let free = spec.with_memory_cost(Rational::zero())?;
    let report = frpd_equilibrium_threshold(&free, &space, 100)?;
    println!("with free memory: {:?}", report.symmetric);
    Ok(())
}
