//! The shipped game files are exactly what the builders produce, and they
//! survive a parse/serialize round trip byte for byte.

use std::path::PathBuf;

use eqcheck::format::parse;
use eqcheck::game::Limits;
use eqcheck::library::example_documents;

fn games_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("games")
}

#[test]
fn shipped_files_match_builders() {
    for (name, doc) in example_documents().unwrap() {
        let text = std::fs::read_to_string(games_dir().join(name))
            .unwrap_or_else(|e| panic!("{name}: {e}; run `cargo run --example export_games`"));
        assert_eq!(text, doc.to_json(), "{name} is stale");
    }
}

#[test]
fn every_shipped_file_round_trips() {
    let mut seen = 0;
    for entry in std::fs::read_dir(games_dir()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let again = doc.to_json();
        assert_eq!(again, text, "{}", path.display());
        assert_eq!(parse(&again).unwrap(), doc);
        seen += 1;
    }
    assert_eq!(seen, example_documents().unwrap().len());
}

#[test]
fn zero_one_file_is_a_three_player_game() {
    let text = std::fs::read_to_string(games_dir().join("zeroone.json")).unwrap();
    let game = parse(&text)
        .unwrap()
        .into_normal_form()
        .unwrap()
        .to_game(&Limits::default())
        .unwrap();
    assert_eq!(game.num_players(), 3);
    assert_eq!(game, eqcheck::library::zero_one_game(3));
}
