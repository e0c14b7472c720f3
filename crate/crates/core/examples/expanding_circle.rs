//! Marches the unit-speed expanding circle and prints its error norms.
//!
//! `cargo run --release --example expanding_circle -- [m] [out_dir]`

use std::path::PathBuf;

use frontmarch::speed::Example;
use frontmarch::studies::{cmd_run, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let mut cfg = RunConfig::new(Example::Expanding);
    if let Some(m) = args.next() {
        cfg.m = m.parse()?;
    }
    cfg.out = args.next().map(PathBuf::from);
    let run = cmd_run(&cfg)?;
    let s = &run.summary;
    println!("m = {}, h = {:.4e}, N = {}, max |NB| = {}", s.m, s.h, s.n_points, s.max_band);
    if let Some(n) = s.norms {
        println!("L1 {:.3e}  L2 {:.3e}  Linf {:.3e}", n.l1, n.l2, n.linf);
    }
    if let Some(lh) = s.l_h {
        println!("Hausdorff distance at t = {}: {lh:.3e}", s.t_h);
    }
    Ok(())
}
