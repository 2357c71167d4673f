//! The pattern atlas: enumerating simple digraphs up to isomorphism and
//! decomposing them into low-width bag trees for fast counting.
//!
//! ```bash
//! cargo run --release -p ghm --example pattern_atlas
//! ```

use ghm::decomp::tree_decomposition;
use ghm::error::Caps;
use ghm::pattern::{enumerate_labeled_patterns, enumerate_patterns, Pattern};

fn main() {
    let caps = Caps::default();

    println!("isomorphism classes of simple digraphs:");
    let atlas = enumerate_patterns(4, false, &caps).unwrap();
    for m in 1..=4 {
        let count = atlas.iter().filter(|p| p.m() == m).count();
        println!("  m = {m}: {count}");
    }
    let connected = enumerate_patterns(4, true, &caps).unwrap();
    println!("  weakly connected only, m <= 4: {}", connected.len());

    println!("\nlabeled classes (label order matters):");
    for k in 0..=2 {
        let count = enumerate_labeled_patterns(3, k, &caps).unwrap().len();
        println!("  m <= 3, k = {k}: {count}");
    }

    println!("\ncanonical forms of the m = 2 classes:");
    for p in atlas.iter().filter(|p| p.m() == 2) {
        let cf = p.canonical_form(&caps).unwrap();
        println!("  edges {:?} -> {}", p.edges(), cf.to_hex());
    }

    println!("\ntree decompositions (width drives the counting exponent):");
    let samples = [
        ("directed path P5", Pattern::directed_path(5)),
        ("directed cycle C5", Pattern::directed_cycle(5)),
        (
            "complete digraph K4",
            Pattern::new(
                4,
                (0..4)
                    .flat_map(|i| (0..4).map(move |j| (i, j)))
                    .filter(|&(i, j)| i != j)
                    .collect(),
            )
            .unwrap(),
        ),
    ];
    for (name, p) in &samples {
        let td = tree_decomposition(p, &caps).unwrap();
        td.validate(p).unwrap();
        println!("  {name:<20} width {}  bags {:?}", td.width(), td.bags());
    }
}
