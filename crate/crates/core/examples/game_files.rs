//! Loading games and profiles from JSON and checking them, as the command
//! line does.
//!
//! ```sh
//! cargo run --example game_files
//! ```

use std::path::Path;

use eqcheck::format::parse;
use eqcheck::game::Limits;
use eqcheck::robust::{check_robust, RobustnessQuery};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("games");
    let game = parse(&std::fs::read_to_string(dir.join("bargaining.json"))?)?
        .into_normal_form()?
        .to_game(&Limits::default())?;
    let profile = parse(&std::fs::read_to_string(dir.join("all-stay.json"))?)?
        .into_profile()?
        .to_mixed(&game)?;
    let v = check_robust(&game, &profile, &RobustnessQuery::new(5, 1))?;
    println!("{}", serde_json::to_string_pretty(&v)?);

    let bad = r#"{"format": 1, "kind": "normal-form", "body": {"players": ["1"], "actions": [["a"]], "payoffs": [["1/0"]]}}"#;
    let err = parse(bad)?
        .into_normal_form()?
        .to_game(&Limits::default())
        .unwrap_err();
    println!("rejected: {err}");
    Ok(())
}
