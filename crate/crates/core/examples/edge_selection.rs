//! Compare edge-selection rules on one grid: bound after each single-edge
//! addition.
//!
//! ```bash
//! cargo run --release --example edge_selection
//! ```

use hoplp::edgesel::{selection_curve, Criterion};
use hoplp::generate::avgcut_grid;
use hoplp::{initial_tree, SolveConfig};

fn main() -> hoplp::Result<()> {
    let model = avgcut_grid(4, 4, 5, None)?;
    let start = initial_tree(&model);
    for criterion in [Criterion::Wca, Criterion::SpanningWeight, Criterion::Random(1)] {
        let curve = selection_curve(&model, &start, criterion, 8, 6, &SolveConfig::default())?;
        let bounds: Vec<String> = curve.bounds.iter().map(|b| format!("{b:.4}")).collect();
        let done = match curve.additions_to_certificate {
            Some(k) => format!("certified after {k}"),
            None => "not certified".to_string(),
        };
        println!("{:<16} {}  ({done})", criterion.to_string(), bounds.join(" "));
    }
    Ok(())
}
