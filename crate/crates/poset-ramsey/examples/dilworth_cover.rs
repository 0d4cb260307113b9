//! Minimum chain cover and maximum antichain of a vertex family: the two
//! sides of Dilworth duality, computed from one bipartite matching.
//!
//! ```bash
//! cargo run --release --example dilworth_cover
//! ```

use poset_ramsey::chains::{max_antichain, min_chain_cover};
use poset_ramsey::constructions::construct_a3_lower;
use poset_ramsey::lattice::{Color, VertexSet};

fn main() {
    // A small hand-picked family.
    let family: Vec<VertexSet> = [0b000, 0b001, 0b010, 0b011, 0b110, 0b111]
        .into_iter()
        .map(VertexSet::from_mask)
        .collect();
    let cover = min_chain_cover(&family).unwrap();
    let anti = max_antichain(&family).unwrap();
    println!("family: {family:?}");
    println!("minimum chain cover ({} chains):", cover.len());
    for chain in cover.chains() {
        println!("  {:?}", chain.vertices());
    }
    println!("maximum antichain ({}): {:?}", anti.len(), anti.vertices());
    assert_eq!(cover.len(), anti.len());

    // The blue set of the prefix/suffix coloring is exactly two chains.
    let blue = construct_a3_lower(3).unwrap().vertices_of(Color::Blue);
    let cover = min_chain_cover(&blue).unwrap();
    println!(
        "\nblue set of the prefix/suffix coloring on Q_5: {} vertices, cover by {} chains",
        blue.len(),
        cover.len()
    );
    for chain in cover.chains() {
        println!("  {:?}", chain.vertices());
    }
}
