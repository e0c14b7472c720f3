//! Local errors of the direct and iterative solvers with exact parents.

use frontmarch::studies::{cmd_local, LocalConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let report = cmd_local(&LocalConfig::default())?;
    for r in &report.rows {
        println!("{:<12} h = {:.0e}  direct {:.3e}  iterative {:.3e}  ({} iterations)", r.example, r.h, r.direct_error, r.iterative_error, r.iterations);
    }
    for f in &report.fits {
        println!("{:<12} order: direct {:.2}, iterative {:.2}", f.example, f.direct.slope, f.iterative.slope);
    }
    Ok(())
}
