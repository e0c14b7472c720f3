//! Global convergence over an m-sweep for one example.
//!
//! `cargo run --release --example convergence_sweep -- rose`

use frontmarch::speed::Example;
use frontmarch::studies::{cmd_converge, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "oscillating".to_string());
    let cfg = RunConfig::new(Example::from_name(&name)?);
    let report = cmd_converge(&cfg, &[25, 50, 100, 200])?;
    for r in &report.rows {
        println!("m = {:>3}  N = {:>6}  L1 {:.3e}  L2 {:.3e}  Linf {:.3e}  LH {:.3e}", r.m, r.n_points, r.l1, r.l2, r.linf, r.l_h);
    }
    for (norm, fit) in &report.fits {
        println!("{norm:>4} slope {:.2}", fit.slope);
    }
    Ok(())
}
