//! Drivers behind the command-line tool: single runs, convergence sweeps,
//! local solver studies and the timing comparison with grid fast marching.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{MetricsError, StudyError};
use crate::fmm::{fmm_solve, FmmSetup};
use crate::frames::{Frame, Vec3};
use crate::io;
use crate::local_solver::{iterative_solve, scheme_hamiltonian, IterativeConfig, LocalStencil};
use crate::march::{march, FrontGraph, MarchConfig, MarchStats};
use crate::metrics::{error_report, evenness_histogram, fit_order, hausdorff, reconstruct_front, ErrorReport, Evenness, Fit, Norms};
use crate::sampler::{grid_search, Placement, PlacementProblem};
use crate::speed::{Example, SpeedField};

/// Exact contour samples per closed curve, per initial sample.
const CONTOUR_FACTOR: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub example: Example,
    /// Samples per initial circle.
    pub m: usize,
    pub final_time: f64,
    /// Time at which the reconstructed front is compared with the exact one.
    pub t_h: f64,
    pub neighbours: usize,
    pub grid_size: usize,
    pub out: Option<PathBuf>,
    pub verify_invariants: bool,
}

impl RunConfig {
    pub fn new(example: Example) -> Self {
        RunConfig {
            example,
            m: example.default_m(),
            final_time: example.default_final_time(),
            t_h: example.default_t_h(),
            neighbours: 10,
            grid_size: 10,
            out: None,
            verify_invariants: false,
        }
    }

    pub fn validate(&self) -> Result<(), StudyError> {
        if self.m < 3 {
            return Err(StudyError::Config(format!("m must be at least 3 (got {})", self.m)));
        }
        if !(self.final_time > 0.0) {
            return Err(StudyError::Config(format!("final time must be positive (got {})", self.final_time)));
        }
        if self.neighbours < 2 {
            return Err(StudyError::Config(format!("L must be at least 2 (got {})", self.neighbours)));
        }
        if self.grid_size == 0 {
            return Err(StudyError::Config("grid size must be positive".to_string()));
        }
        Ok(())
    }

    pub fn march_config(&self) -> MarchConfig {
        let mut cfg = MarchConfig::new(self.final_time);
        cfg.neighbours = self.neighbours;
        cfg.grid_size = self.grid_size;
        cfg.verify_invariants = self.verify_invariants;
        cfg
    }
}

/// Everything in a run's `summary.json`. Timings live in a separate file so
/// repeated runs produce identical summaries.
#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub example: String,
    pub m: usize,
    pub seeds: usize,
    pub h: f64,
    pub final_time: f64,
    pub t_h: f64,
    pub n_points: usize,
    /// Points outside the exact solution's validity window.
    pub excluded: usize,
    pub norms: Option<Norms>,
    pub l_h: Option<f64>,
    pub components_at_t_h: Option<usize>,
    pub max_band: usize,
    pub max_time: f64,
    pub below_h: usize,
    pub stats: MarchStats,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub graph: FrontGraph,
    pub errors: Option<ErrorReport>,
    pub evenness: Evenness,
    pub summary: RunSummary,
    /// Seconds spent marching, excluding output.
    pub wall_time: f64,
}

/// Marches one example and measures the result against the exact solution.
pub fn simulate(cfg: &RunConfig) -> Result<RunOutcome, StudyError> {
    cfg.validate()?;
    let ex = cfg.example;
    let front = ex.sample_initial_front(cfg.m)?;
    let start = Instant::now();
    let graph = march(&front, &ex, cfg.march_config())?;
    let wall_time = start.elapsed().as_secs_f64();

    let errors = match error_report(&graph, ex) {
        Ok(r) => Some(r),
        Err(MetricsError::Empty) => None,
        Err(e) => return Err(e.into()),
    };
    let l_h = hausdorff(&graph, ex, cfg.t_h, CONTOUR_FACTOR * cfg.m).ok();
    let components_at_t_h = reconstruct_front(&graph, cfg.t_h, cfg.neighbours).ok().map(|s| s.components(2.0 * graph.h));
    let evenness = evenness_histogram(&graph);
    let summary = RunSummary {
        example: ex.name().to_string(),
        m: cfg.m,
        seeds: front.points.len(),
        h: graph.h,
        final_time: cfg.final_time,
        t_h: cfg.t_h,
        n_points: graph.len(),
        excluded: errors.as_ref().map_or(0, |e| e.excluded),
        norms: errors.as_ref().map(|e| e.norms),
        l_h,
        components_at_t_h,
        max_band: graph.stats.max_band,
        max_time: graph.max_time(),
        below_h: evenness.below_h,
        stats: graph.stats.clone(),
    };
    Ok(RunOutcome {
        graph,
        errors,
        evenness,
        summary,
        wall_time,
    })
}

#[derive(Serialize)]
struct Timing {
    wall_time: f64,
}

/// Writes `points.csv`, `segments.csv`, `evenness.csv`, `summary.json` and
/// `timing.json` into `dir`.
pub fn write_run(dir: &Path, run: &RunOutcome) -> Result<(), StudyError> {
    io::ensure_dir(dir)?;
    io::write_points(&dir.join("points.csv"), &run.graph, run.errors.as_ref().map(|e| e.errors.as_slice()))?;
    io::write_segments(&dir.join("segments.csv"), &run.graph)?;
    io::write_evenness(&dir.join("evenness.csv"), &run.evenness)?;
    io::write_json(&dir.join("summary.json"), &run.summary)?;
    io::write_json(
        &dir.join("timing.json"),
        &Timing {
            wall_time: run.wall_time,
        },
    )
}

pub fn cmd_run(cfg: &RunConfig) -> Result<RunOutcome, StudyError> {
    let run = simulate(cfg)?;
    if let Some(dir) = &cfg.out {
        write_run(dir, &run)?;
    }
    Ok(run)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub m: usize,
    pub h: f64,
    pub n_points: usize,
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    pub l_h: f64,
    pub wall_time: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub example: String,
    pub t_h: f64,
    pub rows: Vec<ConvergenceRow>,
    /// `(norm, fit)` for `L1`, `L2`, `Linf` and `LH` against `h`.
    pub fits: Vec<(String, Fit)>,
}

impl ConvergenceReport {
    pub fn slope(&self, norm: &str) -> Option<f64> {
        self.fits.iter().find(|(n, _)| n == norm).map(|(_, f)| f.slope)
    }
}

/// Runs `sweep` concurrently and fits first-order slopes.
pub fn cmd_converge(cfg: &RunConfig, sweep: &[usize]) -> Result<ConvergenceReport, StudyError> {
    if sweep.len() < 3 {
        return Err(StudyError::Config(format!("a sweep needs at least 3 values of m (got {})", sweep.len())));
    }
    let runs: Vec<RunOutcome> = sweep
        .par_iter()
        .map(|&m| {
            let mut c = cfg.clone();
            c.m = m;
            c.out = cfg.out.as_ref().map(|d| d.join(format!("m{m}")));
            cmd_run(&c)
        })
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::new();
    for run in &runs {
        let norms = run.summary.norms.ok_or(MetricsError::Empty)?;
        rows.push(ConvergenceRow {
            m: run.summary.m,
            h: run.summary.h,
            n_points: run.summary.n_points,
            l1: norms.l1,
            l2: norms.l2,
            linf: norms.linf,
            l_h: run.summary.l_h.unwrap_or(f64::NAN),
            wall_time: run.wall_time,
        });
    }
    let mut fits = Vec::new();
    let columns: [(&str, fn(&ConvergenceRow) -> f64); 4] = [
        ("L1", |r| r.l1),
        ("L2", |r| r.l2),
        ("Linf", |r| r.linf),
        ("LH", |r| r.l_h),
    ];
    for (name, get) in columns {
        let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.h, get(r))).collect();
        fits.push((name.to_string(), fit_order(&pairs)?));
    }
    let report = ConvergenceReport {
        example: cfg.example.name().to_string(),
        t_h: cfg.t_h,
        rows,
        fits,
    };
    if let Some(dir) = &cfg.out {
        write_convergence(dir, &report)?;
    }
    Ok(report)
}

fn write_convergence(dir: &Path, report: &ConvergenceReport) -> Result<(), StudyError> {
    io::ensure_dir(dir)?;
    let f = io::fmt_f64;
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| vec![r.m.to_string(), f(r.h), r.n_points.to_string(), f(r.l1), f(r.l2), f(r.linf), f(r.l_h)])
        .collect();
    io::write_table(&dir.join("convergence.csv"), &["m", "h", "n_points", "l1", "l2", "linf", "l_h"], &rows)?;
    let fits: Vec<Vec<String>> = report.fits.iter().map(|(n, fit)| vec![n.clone(), f(fit.slope), f(fit.intercept)]).collect();
    io::write_table(&dir.join("convergence_fits.csv"), &["norm", "slope", "intercept"], &fits)
}

/// Placement problem with exact parents: `p_a` on the front at polar angle
/// `theta` and time `t_a`, `p_b` offset by `offset · h` in `xy` and lifted onto
/// `M`, frame from the exact normal at `p_a`.
#[derive(Clone, Debug)]
pub struct ExactLocalProblem {
    pub example: Example,
    pub problem: PlacementProblem,
}

impl ExactLocalProblem {
    pub fn new(example: Example, h: f64, t_a: f64, theta: f64, offset: [f64; 2]) -> Result<Self, StudyError> {
        let [xa, ya] = example.front_point(theta, t_a);
        let pa = Vec3::new(xa, ya, t_a);
        let (xb, yb) = (xa + offset[0] * h, ya + offset[1] * h);
        let tb = example
            .arrival_time(xb, yb, t_a)
            .ok_or_else(|| StudyError::Config(format!("cannot lift ({xb}, {yb}) onto the {} manifold", example.name())))?;
        let pb = Vec3::new(xb, yb, tb);
        let normal = example.exact_normal(pa)?;
        let frame = Frame::from_normal(normal).map_err(|e| StudyError::Config(e.to_string()))?;
        let g0 = example.evaluate(xa, ya, t_a)?;
        let problem = PlacementProblem::new(frame, pa, Vec3::new(0.0, 0.0, 0.0), frame.to_local(pb - pa), g0, h, vec![pa, pb]);
        Ok(ExactLocalProblem { example, problem })
    }

    /// `∂H̄/∂ψ_a` and `∂H̄/∂ψ_i` at the placed child, by central differences.
    pub fn scheme_slopes(&self, placement: &Placement) -> Option<(f64, f64)> {
        let prob = &self.problem;
        let st = LocalStencil::new(prob.parent_a, prob.parent_i, placement.uv).ok()?;
        let (pa, pi) = st.directional_derivatives(placement.w);
        let r = prob.frame.r_hat();
        let d = 1e-6 * (1.0 + pa.abs().max(pi.abs()));
        let h = |a: f64, i: f64| scheme_hamiltonian(&st, a, i, prob.g0, r);
        Some(((h(pa + d, pi) - h(pa - d, pi)) / (2.0 * d), (h(pa, pi + d) - h(pa, pi - d)) / (2.0 * d)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalRow {
    pub example: String,
    pub h: f64,
    pub direct_error: f64,
    pub iterative_error: f64,
    pub iterations: usize,
}

/// Places one child with exact parents and measures both solvers.
pub fn local_row(example: Example, h: f64, t_a: f64, theta: f64) -> Result<LocalRow, StudyError> {
    let local = ExactLocalProblem::new(example, h, t_a, theta, [-3.0 / 8.0, 4.0 / 8.0])?;
    let prob = &local.problem;
    let placement = grid_search(prob).map_err(|_| StudyError::Config(format!("no feasible child for {} at h = {h:e}", example.name())))?;
    let direct_error = example.exact_phi(placement.global.x, placement.global.y, placement.global.z)?.abs();

    let st = LocalStencil::new(prob.parent_a, prob.parent_i, placement.uv).map_err(|e| StudyError::Config(e.to_string()))?;
    let uv = placement.uv;
    let speed_at = |w: f64| example.speed(prob.to_global(Vec3::new(uv[0], uv[1], w)));
    let sol = iterative_solve(&st, prob.frame.r_hat(), speed_at, placement.w, &IterativeConfig::for_spacing(h))
        .map_err(|e| StudyError::Config(format!("{}: {e}", example.name())))?;
    let p = prob.to_global(Vec3::new(uv[0], uv[1], sol.w));
    Ok(LocalRow {
        example: example.name().to_string(),
        h,
        direct_error,
        iterative_error: example.exact_phi(p.x, p.y, p.z)?.abs(),
        iterations: sol.iterations,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalConfig {
    pub examples: Vec<Example>,
    pub hs: Vec<f64>,
    pub t_a: f64,
    pub theta: f64,
    /// Only rows with `h` at least this large enter the fits.
    pub fit_min_h: f64,
    pub out: Option<PathBuf>,
}

impl Default for LocalConfig {
    fn default() -> Self {
        LocalConfig {
            examples: vec![Example::Expanding, Example::Oscillating, Example::Rose],
            hs: (2..=7).map(|k| 10f64.powi(-k)).collect(),
            t_a: 0.1,
            theta: 0.3,
            fit_min_h: 1e-5,
            out: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalFit {
    pub example: String,
    pub direct: Fit,
    pub iterative: Fit,
    pub max_iterations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalReport {
    pub rows: Vec<LocalRow>,
    pub fits: Vec<LocalFit>,
}

pub fn cmd_local(cfg: &LocalConfig) -> Result<LocalReport, StudyError> {
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    for &ex in &cfg.examples {
        let ex_rows: Vec<LocalRow> = cfg.hs.iter().map(|&h| local_row(ex, h, cfg.t_a, cfg.theta)).collect::<Result<_, _>>()?;
        let fitted: Vec<&LocalRow> = ex_rows.iter().filter(|r| r.h >= cfg.fit_min_h).collect();
        fits.push(LocalFit {
            example: ex.name().to_string(),
            direct: fit_order(&fitted.iter().map(|r| (r.h, r.direct_error)).collect::<Vec<_>>())?,
            iterative: fit_order(&fitted.iter().map(|r| (r.h, r.iterative_error)).collect::<Vec<_>>())?,
            max_iterations: ex_rows.iter().map(|r| r.iterations).max().unwrap_or(0),
        });
        rows.extend(ex_rows);
    }
    let report = LocalReport { rows, fits };
    if let Some(dir) = &cfg.out {
        io::ensure_dir(dir)?;
        let f = io::fmt_f64;
        let rows: Vec<Vec<String>> = report
            .rows
            .iter()
            .map(|r| vec![r.example.clone(), f(r.h), f(r.direct_error), f(r.iterative_error), r.iterations.to_string()])
            .collect();
        io::write_table(&dir.join("local.csv"), &["example", "h", "direct_error", "iterative_error", "iterations"], &rows)?;
        let fits: Vec<Vec<String>> = report
            .fits
            .iter()
            .map(|x| vec![x.example.clone(), f(x.direct.slope), f(x.iterative.slope), x.max_iterations.to_string()])
            .collect();
        io::write_table(&dir.join("local_fits.csv"), &["example", "direct_slope", "iterative_slope", "max_iterations"], &fits)?;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpeedRow {
    pub method: String,
    pub example: String,
    /// `h` for the marcher, `dx` for the grid method.
    pub spacing: f64,
    pub points: usize,
    pub wall_time: f64,
    pub l1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpeedComparison {
    pub m: usize,
    pub l1: f64,
    pub marcher_time: f64,
    /// Grid fast marching time at the same `L1`, interpolated in log-log.
    pub fmm_time: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpeedReport {
    pub rows: Vec<SpeedRow>,
    /// `(method, example, fit of L1 against spacing)`.
    pub fits: Vec<(String, String, Fit)>,
    pub comparison: Vec<SpeedComparison>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpeedConfig {
    pub sweep: Vec<usize>,
    pub dx: Vec<f64>,
    /// Examples timed with the marcher only.
    pub marcher_only: Vec<Example>,
    pub neighbours: usize,
    pub grid_size: usize,
    pub out: Option<PathBuf>,
}

impl Default for SpeedConfig {
    fn default() -> Self {
        SpeedConfig {
            sweep: vec![25, 50, 100, 200],
            dx: vec![0.02, 0.01, 0.005, 0.0025],
            marcher_only: vec![Example::Oscillating, Example::Rose],
            neighbours: 10,
            grid_size: 10,
            out: None,
        }
    }
}

/// Times the marcher on the expanding circle against grid fast marching, and
/// the marcher alone on the non-monotone examples. Runs are sequential so the
/// timings do not compete.
pub fn cmd_speedtest(cfg: &SpeedConfig) -> Result<SpeedReport, StudyError> {
    let mut rows = Vec::new();
    let marcher_rows = |ex: Example, rows: &mut Vec<SpeedRow>| -> Result<(), StudyError> {
        for &m in &cfg.sweep {
            let mut rc = RunConfig::new(ex);
            rc.m = m;
            rc.neighbours = cfg.neighbours;
            rc.grid_size = cfg.grid_size;
            let run = simulate(&rc)?;
            rows.push(SpeedRow {
                method: "marcher".to_string(),
                example: ex.name().to_string(),
                spacing: run.summary.h,
                points: run.summary.n_points,
                wall_time: run.wall_time,
                l1: run.summary.norms.ok_or(MetricsError::Empty)?.l1,
            });
        }
        Ok(())
    };
    marcher_rows(Example::Expanding, &mut rows)?;
    let exact = |x: f64, y: f64| x.hypot(y) - 0.25;
    for &dx in &cfg.dx {
        let start = Instant::now();
        let grid = fmm_solve(&FmmSetup::new(dx), |_, _| 1.0, exact)?;
        let wall_time = start.elapsed().as_secs_f64();
        rows.push(SpeedRow {
            method: "fmm".to_string(),
            example: Example::Expanding.name().to_string(),
            spacing: dx,
            points: grid.order.len() + grid.initialized,
            wall_time,
            l1: grid.l1_error(exact),
        });
    }
    for &ex in &cfg.marcher_only {
        marcher_rows(ex, &mut rows)?;
    }

    let mut fits = Vec::new();
    let mut groups: Vec<(String, String)> = rows.iter().map(|r| (r.method.clone(), r.example.clone())).collect();
    groups.dedup();
    for (method, example) in groups {
        let pairs: Vec<(f64, f64)> = rows.iter().filter(|r| r.method == method && r.example == example).map(|r| (r.spacing, r.l1)).collect();
        fits.push((method, example, fit_order(&pairs)?));
    }

    let fmm: Vec<(f64, f64)> = rows.iter().filter(|r| r.method == "fmm").map(|r| (r.l1, r.wall_time.max(1e-9))).collect();
    let cost = fit_order(&fmm)?;
    let comparison = rows
        .iter()
        .filter(|r| r.method == "marcher" && r.example == Example::Expanding.name())
        .zip(&cfg.sweep)
        .map(|(r, &m)| SpeedComparison {
            m,
            l1: r.l1,
            marcher_time: r.wall_time,
            fmm_time: (cost.intercept + cost.slope * r.l1.ln()).exp(),
        })
        .collect();
    let report = SpeedReport { rows, fits, comparison };
    if let Some(dir) = &cfg.out {
        write_speedtest(dir, &report)?;
    }
    Ok(report)
}

fn write_speedtest(dir: &Path, report: &SpeedReport) -> Result<(), StudyError> {
    io::ensure_dir(dir)?;
    let f = io::fmt_f64;
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| vec![r.method.clone(), r.example.clone(), f(r.spacing), r.points.to_string(), f(r.wall_time), f(r.l1)])
        .collect();
    io::write_table(&dir.join("speedtest.csv"), &["method", "example", "spacing", "points", "wall_time", "l1"], &rows)?;
    let rows: Vec<Vec<String>> = report
        .comparison
        .iter()
        .map(|c| vec![c.m.to_string(), f(c.l1), f(c.marcher_time), f(c.fmm_time)])
        .collect();
    io::write_table(&dir.join("speedtest_comparison.csv"), &["m", "l1", "marcher_time", "fmm_time_at_l1"], &rows)?;
    let fits: Vec<Vec<String>> = report.fits.iter().map(|(m, e, fit)| vec![m.clone(), e.clone(), f(fit.slope)]).collect();
    io::write_table(&dir.join("speedtest_fits.csv"), &["method", "example", "slope"], &fits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let mut c = RunConfig::new(Example::Expanding);
        assert!(c.validate().is_ok());
        c.m = 2;
        assert!(matches!(c.validate(), Err(StudyError::Config(_))));
        let mut c = RunConfig::new(Example::Expanding);
        c.final_time = 0.0;
        assert!(matches!(c.validate(), Err(StudyError::Config(_))));
    }

    #[test]
    fn repeated_runs_write_identical_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = RunConfig::new(Example::Expanding);
        c.m = 25;
        for k in 0..2 {
            c.out = Some(dir.path().join(format!("r{k}")));
            cmd_run(&c).unwrap();
        }
        for name in ["points.csv", "segments.csv", "evenness.csv", "summary.json"] {
            let a = std::fs::read(dir.path().join("r0").join(name)).unwrap();
            let b = std::fs::read(dir.path().join("r1").join(name)).unwrap();
            assert_eq!(a, b, "{name}");
        }
        let summary: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("r0/summary.json")).unwrap()).unwrap();
        let rows = csv::Reader::from_path(dir.path().join("r0/points.csv")).unwrap().records().count();
        assert_eq!(summary["n_points"].as_u64().unwrap() as usize, rows);
        assert!(summary["max_band"].as_u64().unwrap() <= 25);
    }

    #[test]
    fn local_rows_are_second_order() {
        let rows: Vec<LocalRow> = [1e-2, 1e-3, 1e-4].iter().map(|&h| local_row(Example::Expanding, h, 0.1, 0.3).unwrap()).collect();
        let slope = fit_order(&rows.iter().map(|r| (r.h, r.direct_error)).collect::<Vec<_>>()).unwrap().slope;
        assert!((slope - 2.0).abs() < 0.3, "{rows:?}");
    }
}
