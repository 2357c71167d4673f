//! Counting weighted homomorphisms: the brute-force oracle, the
//! tree-decomposition engine, shifted variants, and labeled (pinned)
//! variants.
//!
//! ```bash
//! cargo run --release -p ghm --example hom_numbers
//! ```

use ghm::error::Caps;
use ghm::format::format_value;
use ghm::graph::{LabeledGraph, WeightedGraph};
use ghm::hom::{hom, hom_brute, hom_labeled, hom_shifted};
use ghm::pattern::{LabeledPattern, Pattern};

fn main() {
    let caps = Caps::default();

    // a small weighted digraph on 4 vertices
    #[rustfmt::skip]
    let w = WeightedGraph::from_rows(4, &[
         0.2,  0.8, -0.3,  0.0,
         0.0, -0.5,  0.7,  0.1,
         0.4,  0.0,  0.6, -0.9,
        -0.2,  0.3,  0.0,  0.5,
    ])
    .unwrap();

    let patterns = [
        ("single vertex", Pattern::singleton()),
        ("single arc", Pattern::new(2, vec![(0, 1)]).unwrap()),
        ("directed 2-cycle", Pattern::new(2, vec![(0, 1), (1, 0)]).unwrap()),
        ("directed path P3", Pattern::directed_path(3)),
        ("directed triangle", Pattern::directed_cycle(3)),
    ];

    println!("pattern              dp engine            brute oracle");
    for (name, f) in &patterns {
        let fast = hom(f, &w, &caps).unwrap();
        let slow = hom_brute(f, &w, &caps).unwrap();
        println!("{name:<20} {:<20} {}", format_value(fast), format_value(slow));
    }

    // the diagonal shift that keeps features bounded away from zero
    let dot = Pattern::singleton();
    println!(
        "\nhom(dot, W + 2I) = {}  (trace plus 2n, always >= n on unit-bounded weights)",
        format_value(hom_shifted(&dot, &w, 2.0, &caps).unwrap())
    );

    // pinning: the first k pattern vertices map to a fixed vertex tuple
    let pinned_arc = LabeledPattern::new(Pattern::new(2, vec![(0, 1)]).unwrap(), 1).unwrap();
    for v in 0..w.n() {
        let lg = LabeledGraph::new(w.clone(), vec![v]).unwrap();
        let h = hom_labeled(&pinned_arc, &lg, &caps).unwrap();
        println!(
            "hom_x(arc with tail pinned, x = vertex {}): {}",
            v + 1,
            format_value(h)
        );
    }
}
