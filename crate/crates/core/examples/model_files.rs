//! Generate models, write them as JSON and read them back.
//!
//! ```bash
//! cargo run --example model_files
//! ```

use hoplp::generate::{avgcut_grid, chain_exclusion, hamming_tree};
use hoplp::model::{read_model, write_model};

fn main() -> hoplp::Result<()> {
    let models = [
        ("chain-exclusion", chain_exclusion(4, 10.0, 0.1)?),
        ("hamming-tree", hamming_tree(6, 1.0, 1, 0)?),
        ("avgcut-grid", avgcut_grid(3, 3, 0, None)?),
    ];
    for (name, m) in &models {
        let text = write_model(m);
        let back = read_model(&text)?;
        assert_eq!(write_model(&back), text);
        println!("{name}: n={}, {} edges, {} HOP, {} bytes", m.n(), m.edges().len(), m.hop().kind(), text.len());
    }
    Ok(())
}
