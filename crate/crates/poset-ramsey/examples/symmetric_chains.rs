//! Decompose a Boolean lattice into symmetric chains and pick out the
//! chains through a given layer.
//!
//! ```bash
//! cargo run --release --example symmetric_chains
//! ```

use poset_ramsey::chains::{chains_through_layer, symmetric_chain_decomposition};
use poset_ramsey::lattice::binomial;

fn main() {
    let n = 4;
    let d = symmetric_chain_decomposition(n).unwrap();
    println!(
        "Q_{n} decomposes into {} symmetric chains (C({n},{}) = {}):",
        d.len(),
        n / 2,
        binomial(n as u32, n as u32 / 2)
    );
    for chain in d.chains() {
        let row: Vec<String> = chain.vertices().iter().map(|v| v.to_string()).collect();
        println!("  sizes {}..{}:  {}", chain.min_size().unwrap(), chain.max_size().unwrap(), row.join(" ⊂ "));
    }

    for r in 0..=(n / 2) {
        let through = chains_through_layer(&d, r).unwrap();
        println!(
            "chains through layer {r}: {} = C({n},{r}); they cover all sizes ≤ {r} and ≥ {}",
            through.len(),
            n - r
        );
    }

    // Counts scale: the middle binomial for Q_16.
    let d16 = symmetric_chain_decomposition(16).unwrap();
    println!("Q_16 decomposes into {} symmetric chains", d16.len());
}
