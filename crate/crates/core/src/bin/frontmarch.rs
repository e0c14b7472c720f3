use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use frontmarch::speed::Example;
use frontmarch::studies::{cmd_converge, cmd_local, cmd_run, cmd_speedtest, LocalConfig, RunConfig, SpeedConfig};
use frontmarch::StudyError;

#[derive(Parser)]
#[command(version, about = "Front propagation by fast marching on the spacetime manifold")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// March one example and write points, segments and a summary.
    Run(Common),
    /// Run an m-sweep and fit convergence orders.
    Converge(Common),
    /// Local solver errors and iteration counts with exact parents.
    Local(Common),
    /// Time the marcher against grid fast marching.
    Speedtest(Common),
}

#[derive(Args)]
struct Common {
    /// Example name; defaults to `expanding` (all local examples for `local`).
    #[arg(long)]
    example: Option<String>,
    /// Samples per initial circle.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long = "final-time")]
    final_time: Option<f64>,
    /// Time of the Hausdorff comparison.
    #[arg(long = "t-h")]
    t_h: Option<f64>,
    /// Comma-separated values of m.
    #[arg(long, value_delimiter = ',')]
    sweep: Option<Vec<usize>>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Size of the local accepted subset.
    #[arg(long = "L", default_value_t = 10)]
    l: usize,
    /// Grid nodes per side in the placement search.
    #[arg(long = "grid-s", default_value_t = 10)]
    grid_s: usize,
}

impl Common {
    fn run_config(&self) -> Result<RunConfig, StudyError> {
        let ex = Example::from_name(self.example.as_deref().unwrap_or("expanding"))?;
        let mut c = RunConfig::new(ex);
        c.m = self.m.unwrap_or(c.m);
        c.final_time = self.final_time.unwrap_or(c.final_time);
        c.t_h = self.t_h.unwrap_or(c.t_h);
        c.neighbours = self.l;
        c.grid_size = self.grid_s;
        c.out = Some(self.out.clone());
        c.validate()?;
        Ok(c)
    }
}

fn execute(cli: Cli) -> Result<(), StudyError> {
    match cli.command {
        Command::Run(c) => {
            let run = cmd_run(&c.run_config()?)?;
            let s = &run.summary;
            println!("{}: N = {}, h = {:.4e}, max |NB| = {}, wall {:.3}s", s.example, s.n_points, s.h, s.max_band, run.wall_time);
            if let Some(n) = s.norms {
                println!("L1 = {:.4e}  L2 = {:.4e}  Linf = {:.4e}  LH = {:?}", n.l1, n.l2, n.linf, s.l_h);
            }
        }
        Command::Converge(c) => {
            let cfg = c.run_config()?;
            let sweep = c.sweep.clone().unwrap_or_else(|| vec![25, 50, 100, 200]);
            let report = cmd_converge(&cfg, &sweep)?;
            println!("{:>6} {:>12} {:>8} {:>12} {:>12} {:>12} {:>12}", "m", "h", "N", "L1", "L2", "Linf", "LH");
            for r in &report.rows {
                println!("{:>6} {:>12.4e} {:>8} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}", r.m, r.h, r.n_points, r.l1, r.l2, r.linf, r.l_h);
            }
            for (name, fit) in &report.fits {
                println!("slope {name}: {:.3}", fit.slope);
            }
        }
        Command::Local(c) => {
            let mut cfg = LocalConfig {
                out: Some(c.out.clone()),
                ..LocalConfig::default()
            };
            if let Some(name) = &c.example {
                cfg.examples = vec![Example::from_name(name)?];
            }
            let report = cmd_local(&cfg)?;
            for r in &report.rows {
                println!("{:<12} h = {:.0e}  direct {:.4e}  iterative {:.4e}  iterations {}", r.example, r.h, r.direct_error, r.iterative_error, r.iterations);
            }
            for f in &report.fits {
                println!("{:<12} slopes: direct {:.3}, iterative {:.3}", f.example, f.direct.slope, f.iterative.slope);
            }
        }
        Command::Speedtest(c) => {
            let mut cfg = SpeedConfig {
                neighbours: c.l,
                grid_size: c.grid_s,
                out: Some(c.out.clone()),
                ..SpeedConfig::default()
            };
            if let Some(s) = &c.sweep {
                cfg.sweep = s.clone();
            }
            let report = cmd_speedtest(&cfg)?;
            for r in &report.rows {
                println!("{:<8} {:<12} spacing {:.4e}  points {:>8}  {:.4}s  L1 {:.4e}", r.method, r.example, r.spacing, r.points, r.wall_time, r.l1);
            }
            for c in &report.comparison {
                println!("m = {:>4}: L1 {:.3e}  marcher {:.4}s  fmm at same L1 {:.4}s", c.m, c.l1, c.marcher_time, c.fmm_time);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
