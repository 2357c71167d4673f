//! Telling graphs apart with homomorphism counts: search the atlas for the
//! smallest pattern whose shifted homomorphism numbers differ.
//!
//! ```bash
//! cargo run --release -p ghm --example separate_graphs
//! ```

use ghm::error::Caps;
use ghm::format::format_value;
use ghm::graph::{permute, Permutation, WeightedGraph};
use ghm::model::{separate, Separation};
use ghm::pattern::Pattern;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn adjacency(p: &Pattern, n: usize) -> WeightedGraph {
    let mut g = WeightedGraph::zeros(n);
    for &(i, j) in p.edges() {
        g.set_weight(i, j, 1.0);
    }
    g
}

fn report(name: &str, outcome: &Separation<Pattern>) {
    match outcome {
        Separation::Separated { witness, hom1, hom2 } => println!(
            "{name}: SEPARATED by m = {} pattern with edges {:?} (hom values {} vs {})",
            witness.m(),
            witness.edges(),
            format_value(*hom1),
            format_value(*hom2)
        ),
        Separation::NotSeparated { max_m } => {
            println!("{name}: NOT separated by any pattern with m <= {max_m}")
        }
    }
}

fn main() {
    let caps = Caps::default();

    // single arc vs directed 2-cycle: same degree sums, different structure
    let arc = adjacency(&Pattern::new(2, vec![(0, 1)]).unwrap(), 2);
    let cycle = adjacency(&Pattern::new(2, vec![(0, 1), (1, 0)]).unwrap(), 2);
    report("arc vs 2-cycle", &separate(&arc, &cycle, 2, &caps).unwrap());

    // a graph against a vertex relabeling of itself: indistinguishable
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p3 = adjacency(&Pattern::directed_path(3), 3);
    let sigma = Permutation::random(3, &mut rng);
    let relabeled = permute(&p3, &sigma).unwrap();
    report("P3 vs relabeled P3", &separate(&p3, &relabeled, 3, &caps).unwrap());

    // triangle orientations: the 3-cycle vs the "out-star plus arc" with
    // the same arc count
    let c3 = adjacency(&Pattern::directed_cycle(3), 3);
    let other = adjacency(&Pattern::new(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap(), 3);
    report("C3 vs transitive triangle", &separate(&c3, &other, 3, &caps).unwrap());

    // weighted graphs differing only in one diagonal entry
    let mut a = WeightedGraph::zeros(3);
    let mut b = WeightedGraph::zeros(3);
    a.set_weight(0, 0, 0.5);
    b.set_weight(0, 0, -0.5);
    report("diagonal +1/2 vs -1/2", &separate(&a, &b, 1, &caps).unwrap());
}
