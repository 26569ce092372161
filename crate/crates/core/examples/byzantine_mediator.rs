//! Byzantine agreement with four players and one fault. Relaying through a
//! trusted mediator survives every adversary in the library; having each
//! soldier echo the first value it hears does not.
//!
//! ```sh
//! cargo run --example byzantine_mediator
//! ```

use eqcheck::game::Limits;
use eqcheck::sim::{
    empirical_immunity, indicator_utility, run, sweep, Adversary, EchoFirst, MediatorRelay,
    Scenario,
};
use eqcheck::Witness;

fn main() -> eqcheck::Result<()> {
    let library = Adversary::library();
    let limits = Limits::default();

    let report = sweep(4, 1, &MediatorRelay, &library, &limits)?;
    println!(
        "mediator: {}/{} scenarios reach agreement",
        report.passed, report.total
    );
    let v = empirical_immunity(4, 1, &MediatorRelay, &library, &indicator_utility, &limits)?;
    println!("mediator immune to one fault: {}", v.holds);

    let report = sweep(4, 1, &EchoFirst, &library, &limits)?;
    println!(
        "echo-first: {}/{} scenarios reach agreement",
        report.passed, report.total
    );
    let v = empirical_immunity(4, 1, &EchoFirst, &library, &indicator_utility, &limits)?;
    if let Some(Witness::HarmedPlayer {
        scenario,
        player,
        trace,
        ..
    }) = v.witness
    {
        println!("echo-first harms player {player} in {scenario}:");
        for line in trace {
            println!("  {line}");
        }
    }

    let s = Scenario::fault_free(4, 1, true, 1).with_faults([(0, Adversary::Equivocate)]);
    let t = run(&s, &MediatorRelay)?;
    println!(
        "mediator with an equivocating general decides {:?}",
        t.decisions
    );
    Ok(())
}
