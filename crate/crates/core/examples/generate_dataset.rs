//! Regenerates the bundled synthetic dataset.
//!
//! cargo run --example generate_dataset -- [out_dir]

use perscwi::dataset::bundled_dir;
use perscwi::synthetic::{generate, write_dataset, SyntheticConfig};

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).map(Into::into).unwrap_or_else(bundled_dir);
    let data = generate(&SyntheticConfig::default());
    write_dataset(&data, &dir)?;
    println!(
        "wrote {} pool words, {} graded words, {} seeds, {} test words to {}",
        data.records.len(),
        data.graded.len(),
        data.seeds.len(),
        data.test_words.len(),
        dir.display()
    );
    Ok(())
}
