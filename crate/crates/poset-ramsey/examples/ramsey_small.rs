//! Compute small poset Ramsey numbers R(A_t, Q_n) exactly by pruned
//! exhaustive search, printing the escaping witness one dimension below.
//!
//! ```bash
//! cargo run --release --example ramsey_small
//! ```

use poset_ramsey::lattice::Color;
use poset_ramsey::search::{ramsey_exact, SearchOptions};

fn main() {
    let opts = SearchOptions::default();
    for (t, n, nmax) in [(2u32, 1u8, 4u8), (3, 1, 5), (2, 2, 5), (3, 2, 5)] {
        let report = ramsey_exact(t, n, nmax, &opts).unwrap();
        match report.exact {
            Some(v) => println!("R(A_{t}, Q_{n}) = {v}"),
            None => println!("R(A_{t}, Q_{n}) ≥ {} (not settled below {nmax})", report.certified_lower),
        }
        println!(
            "  search visited {} nodes over {} root classes",
            report.total_nodes, report.total_classes
        );
        if let (Some(dim), Some(w)) = (report.witness_dim, &report.witness) {
            println!(
                "  escaping witness at N = {dim}: {} blue vertices, blue set {:?}",
                w.count_of(Color::Blue),
                w.vertices_of(Color::Blue)
            );
        }
        println!();
    }
}
