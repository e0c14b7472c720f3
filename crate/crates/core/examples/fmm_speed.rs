//! Grid fast marching on the expanding circle next to the marcher.

use std::time::Instant;

use frontmarch::fmm::{fmm_solve, FmmSetup};
use frontmarch::speed::Example;
use frontmarch::studies::{simulate, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let exact = |x: f64, y: f64| x.hypot(y) - 0.25;
    for dx in [0.02, 0.01, 0.005] {
        let start = Instant::now();
        let grid = fmm_solve(&FmmSetup::new(dx), |_, _| 1.0, exact)?;
        let secs = start.elapsed().as_secs_f64();
        println!("fmm     dx = {dx:<6}  nodes {:>7}  L1 {:.3e}  {secs:.4}s", grid.order.len(), grid.l1_error(exact));
    }
    for m in [25, 50, 100] {
        let mut cfg = RunConfig::new(Example::Expanding);
        cfg.m = m;
        let run = simulate(&cfg)?;
        let l1 = run.summary.norms.map_or(f64::NAN, |n| n.l1);
        println!("marcher m = {m:<5}  points {:>6}  L1 {l1:.3e}  {:.4}s", run.summary.n_points, run.wall_time);
    }
    Ok(())
}
