//! One local update by hand: a frame from a normal, then the child's height
//! from the direct and the pseudo-time solver.

use frontmarch::fmm::cartesian_update;
use frontmarch::local_solver::{direct_solve, iterative_solve, IterativeConfig, LocalStencil};
use frontmarch::{Frame, Vec3};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let frame = Frame::from_normal(Vec3::new(1.0, 0.0, -1.0).normalized())?;
    println!("tilted frame rows: {:?}", frame.matrix());
    println!("det {:.3}, gram deviation {:.1e}", frame.determinant(), frame.gram_deviation());

    // Grid-aligned stencil: with R̂ = -t the height is minus the arrival time.
    let h = 0.01;
    let (ta, tb) = (0.3 * h, 0.5 * h);
    let st = LocalStencil::new(Vec3::new(-h, 0.0, -ta), Vec3::new(0.0, -h, -tb), [0.0, 0.0])?;
    let r_hat = Vec3::new(0.0, 0.0, -1.0);
    let direct = direct_solve(&st, 1.0, r_hat)?;
    println!("direct arrival {:.10e}, grid update {:.10e}", -direct.w, cartesian_update(ta, tb, h, 1.0));

    let speed = |w: f64| 1.0 - 5.0 * w;
    let iterated = iterative_solve(&st, r_hat, speed, direct.w, &IterativeConfig::for_spacing(h))?;
    println!("with F = 1 + 5t: arrival {:.10e} after {} iterations", -iterated.w, iterated.iterations);
    Ok(())
}
