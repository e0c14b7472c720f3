//! The football: a circle that grows, stops and collapses. Prints the
//! child-parent spacing histogram and when the band runs out.

use frontmarch::metrics::Histogram;
use frontmarch::speed::{football_collapse_time, Example};
use frontmarch::studies::{simulate, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = RunConfig::new(Example::Football);
    let run = simulate(&cfg)?;
    let s = &run.summary;
    println!("m = {}, N = {}, last point at t = {:.4} (collapse at {:.4})", s.m, s.n_points, s.max_time, football_collapse_time());
    let e = &run.evenness;
    println!("spacing/h   parent_a  parent_b");
    for k in 0..e.parent_a.counts.len().max(e.parent_b.counts.len()) {
        let a = e.parent_a.counts.get(k).copied().unwrap_or(0);
        let b = e.parent_b.counts.get(k).copied().unwrap_or(0);
        println!("{:>8.1}  {a:>9}  {b:>8}", Histogram::bin_lower(k));
    }
    println!("children closer than h to a parent: {}", e.below_h);
    Ok(())
}
