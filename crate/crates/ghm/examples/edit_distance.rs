//! The edit-distance oracle: exhaustive alignment of two weight matrices
//! over all vertex permutations, and its label-constrained variant.
//!
//! ```bash
//! cargo run --release -p ghm --example edit_distance
//! ```

use ghm::error::Caps;
use ghm::format::format_value;
use ghm::graph::{
    edit_distance, labeled_edit_distance, permute, LabeledGraph, Permutation, WeightedGraph,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let n = 5;
    let random = |rng: &mut ChaCha8Rng| {
        let w: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        WeightedGraph::from_rows(n, &w).unwrap()
    };

    let a = random(&mut rng);
    let b = random(&mut rng);
    let c = random(&mut rng);

    let sigma = Permutation::random(n, &mut rng);
    println!(
        "delta(A, A^sigma) = {}  (relabelings are distance 0)",
        format_value(edit_distance(&a, &permute(&a, &sigma).unwrap(), &caps).unwrap())
    );

    let dab = edit_distance(&a, &b, &caps).unwrap();
    let dbc = edit_distance(&b, &c, &caps).unwrap();
    let dac = edit_distance(&a, &c, &caps).unwrap();
    println!("delta(A, B) = {}", format_value(dab));
    println!("delta(B, C) = {}", format_value(dbc));
    println!(
        "delta(A, C) = {} <= {} (triangle inequality)",
        format_value(dac),
        format_value(dab + dbc)
    );

    // pinning labels restricts the admissible alignments
    let la = LabeledGraph::new(a.clone(), vec![0, 1]).unwrap();
    let lb = LabeledGraph::new(b.clone(), vec![2, 4]).unwrap();
    println!(
        "\nlabeled delta'((A, x), (B, y)) = {} >= unlabeled {}",
        format_value(labeled_edit_distance(&la, &lb, &caps).unwrap()),
        format_value(dab)
    );
}
