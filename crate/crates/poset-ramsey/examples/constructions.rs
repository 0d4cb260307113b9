//! Build the three extremal lower-bound colorings and verify their claims
//! with certificates.
//!
//! ```bash
//! cargo run --release --example constructions
//! ```

use poset_ramsey::constructions::{
    construct_a2_lower, construct_a3_lower, construct_layered_lower, verify_no_blue_antichain,
    verify_no_red_cube, AntichainCheck, RedCubeCheck,
};
use poset_ramsey::lattice::{binomial, Color, LatticeColoring};

fn show(name: &str, c: &LatticeColoring, t: u32, n: u8) {
    println!(
        "{name}: Q_{} with {} blue / {} red vertices",
        c.dim(),
        c.count_of(Color::Blue),
        c.count_of(Color::Red)
    );
    match verify_no_blue_antichain(c, t).unwrap() {
        AntichainCheck::Certified { cover } => println!(
            "  no blue antichain of size {t}: certified, blue covered by {} chains",
            cover.len()
        ),
        AntichainCheck::Refuted { antichain } => {
            println!("  REFUTED: blue antichain {:?}", antichain.vertices())
        }
    }
    match verify_no_red_cube(c, n).unwrap() {
        RedCubeCheck::CertifiedByHeight { red_height } => println!(
            "  no red Q_{n}: certified by height (red height {red_height} < {})",
            n as u32 + 1
        ),
        RedCubeCheck::CertifiedExhaustive => {
            println!("  no red Q_{n}: certified by exhaustive canonical search")
        }
        RedCubeCheck::Refuted { embedding } => {
            println!("  REFUTED: red copy over ground {}", embedding.ground())
        }
    }
    println!();
}

fn main() {
    // Bottom and top blue: escapes (A_2, Q_n) one dimension below the
    // Ramsey number.
    let a2 = construct_a2_lower(3).unwrap();
    show("top-bottom construction (n=3)", &a2, 2, 3);

    // All prefixes and suffixes blue: escapes (A_3, Q_n).
    let a3 = construct_a3_lower(2).unwrap();
    show("prefix/suffix construction (n=2)", &a3, 3, 2);

    // Outermost layers blue: escapes (A_t, Q_n) for every t above the
    // number of symmetric chains through layer r.
    let (n, r) = (2, 1);
    let layered = construct_layered_lower(n, r).unwrap();
    let chains = binomial(n + 2 * r + 1, r) as u32;
    show(
        &format!("layered construction (n={n}, r={r})"),
        &layered,
        chains + 1,
        n as u8,
    );
    println!("the layered coloring fails one step tighter, at t = {chains}:");
    if let AntichainCheck::Refuted { antichain } = verify_no_blue_antichain(&layered, chains).unwrap()
    {
        println!("  refuting blue antichain: {:?}", antichain.vertices());
    }
}
