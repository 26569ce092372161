//! Exact checkers for equilibrium concepts that go beyond Nash equilibrium.
//!
//! The crate covers three families of solution concepts, all computed by
//! exhaustive enumeration over exact rationals:
//!
//! - [`robust`]: k-resilient, t-immune, and (k,t)-robust equilibria of
//!   normal-form games, with coalition and harm witnesses.
//! - [`machine`]: computational games in which players pick machines whose
//!   complexity enters the utility, including finitely repeated games played
//!   by automata.
//! - [`awareness`]: games with awareness, where each player's view of the
//!   game may differ from the modeler's, and generalized Nash equilibrium.
//!
//! [`sim`] runs a synchronous message-passing simulation of Byzantine
//! agreement with and without a trusted mediator, and [`format`] and [`cli`]
//! provide the JSON interchange formats and the command-line front end.
//!
//! Runnable walkthroughs of each capability live in `examples/`.

pub mod awareness;
pub mod cli;
pub mod error;
pub mod format;
pub mod game;
pub mod library;
pub mod machine;
pub mod rational;
pub mod robust;
pub mod sim;
pub mod verdict;

pub use error::{Error, Result};
pub use rational::Rational;
pub use verdict::{Verdict, Witness};
