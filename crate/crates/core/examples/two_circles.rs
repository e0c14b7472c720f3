//! Two circles that merge. Counts front components on either side of the merge.

use frontmarch::march::{march, MarchConfig};
use frontmarch::metrics::reconstruct_front;
use frontmarch::speed::Example;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m: usize = std::env::args().nth(1).map_or(Ok(60), |s| s.parse())?;
    let ex = Example::TwoCircles;
    let front = ex.sample_initial_front(m)?;
    let graph = march(&front, &ex, MarchConfig::new(0.4))?;
    println!("m = {m}, N = {}", graph.len());
    for t in [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35] {
        let slice = reconstruct_front(&graph, t, 10)?;
        println!("t = {t:.2}: {} component(s), {} segments", slice.components(2.0 * graph.h), slice.segments.len());
    }
    Ok(())
}
