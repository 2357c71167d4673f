//! Step graphons: exact homomorphism densities, cut-norm, cut-distance,
//! and W-random sampling as a Monte Carlo cross-check.
//!
//! ```bash
//! cargo run --release -p ghm --example graphon_basics
//! ```

use ghm::error::Caps;
use ghm::format::format_value;
use ghm::graphon::{cut_distance, cut_norm, density, density_labeled, sample_graph, StepGraphon};
use ghm::pattern::{LabeledPattern, Pattern};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let caps = Caps::default();

    // two communities: dense inside, sparse across
    let w = StepGraphon::new(
        2,
        vec![0.8, 0.1, 0.1, 0.6],
        vec![0.5, 0.5],
    )
    .unwrap();

    let arc = Pattern::new(2, vec![(0, 1)]).unwrap();
    let triangle = Pattern::directed_cycle(3);
    println!("t(arc, W)      = {}", format_value(density(&arc, &w, &caps).unwrap()));
    println!("t(C3, W)       = {}", format_value(density(&triangle, &w, &caps).unwrap()));

    // a labeled density reads off block values directly
    let pinned = LabeledPattern::new(arc.clone(), 2).unwrap();
    println!(
        "t_x(arc, W) with ends pinned to blocks (1, 2) = {}",
        format_value(density_labeled(&pinned, &w, &[0, 1], &caps).unwrap())
    );

    // cut-norm of the signed difference from its own block relabeling
    let flipped = w.permute_blocks(&[1, 0]);
    let diff = w.difference(&flipped).unwrap();
    println!(
        "\ncut_norm(W - W-with-blocks-swapped) = {}",
        format_value(cut_norm(&diff, &caps).unwrap())
    );
    println!(
        "cut_distance(W, W-with-blocks-swapped) = {} (overlay finds the relabeling)",
        format_value(cut_distance(&w, &flipped, &caps).unwrap())
    );

    // Monte Carlo: sample points, average products over injective tuples
    let exact = density(&triangle, &w, &caps).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let points = 400;
    let sample = sample_graph(&w, points, 2024).unwrap();
    let tuples = 200_000;
    let mut sum = 0.0;
    for _ in 0..tuples {
        let (a, b, c) = loop {
            let a = rng.gen_range(0..points);
            let b = rng.gen_range(0..points);
            let c = rng.gen_range(0..points);
            if a != b && b != c && a != c {
                break (a, b, c);
            }
        };
        sum += sample.weight(a, b) * sample.weight(b, c) * sample.weight(c, a);
    }
    println!(
        "\nt(C3, W) exact = {} vs Monte Carlo over one {points}-point sample = {:.6}",
        format_value(exact),
        sum / tuples as f64
    );
}
