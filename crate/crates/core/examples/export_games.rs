//! Writes every shipped example document to `games/` (or the directory
//! given as the first argument).
//!
//! ```sh
//! cargo run --example export_games
//! ```

use std::path::PathBuf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("games"));
    std::fs::create_dir_all(&dir)?;
    for (name, doc) in eqcheck::library::example_documents()? {
        let path = dir.join(name);
        std::fs::write(&path, doc.to_json())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
