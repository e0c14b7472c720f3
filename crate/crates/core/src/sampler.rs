//! Child placement: minimize `|s_a|² + |s_i|²` over the `uv` plane subject to a
//! real height (V1), a causality gap in time (V2) and a minimum spacetime
//! separation from the local accepted set (E).

use crate::frames::{Frame, Vec3};
use crate::local_solver::{direct_solve, pde_residual, LocalStencil};

/// Absolute slack on the (V2) and (E) inequalities.
pub const CONSTRAINT_SLACK: f64 = 1e-14;
const DISCRIMINANT_SLACK: f64 = 1e-12;

/// `|u_d - u_a|² + |u_d - u_i|²`.
pub fn objective(ud: [f64; 2], ua: [f64; 2], ui: [f64; 2]) -> f64 {
    let da = [ud[0] - ua[0], ud[1] - ua[1]];
    let di = [ud[0] - ui[0], ud[1] - ui[1]];
    da[0] * da[0] + da[1] * da[1] + di[0] * di[0] + di[1] * di[1]
}

/// (V1): the discriminant is nonnegative up to `1e-12 · scale`.
pub fn check_v1(discriminant: f64, scale: f64) -> bool {
    discriminant >= -DISCRIMINANT_SLACK * scale.max(1.0)
}

/// (V2): `t_d - max(t_a, t_i) ≥ Δt`.
pub fn check_v2(t_d: f64, t_a: f64, t_i: f64, dt: f64) -> bool {
    t_d - t_a.max(t_i) >= dt - CONSTRAINT_SLACK
}

/// (E): spacetime distance from `p` to every member of `neighbours` is at least `h`.
pub fn check_e(p: Vec3, neighbours: &[Vec3], h: f64) -> bool {
    min_distance(p, neighbours) >= h - CONSTRAINT_SLACK
}

pub fn min_distance(p: Vec3, neighbours: &[Vec3]) -> f64 {
    neighbours.iter().map(|q| p.distance(*q)).fold(f64::INFINITY, f64::min)
}

/// The height solves `ν̃·R̂ + G √(ν̃·ν̃ - (ν̃·R̂)²) = 0` and not only its square,
/// whose second root describes a front moving with speed `-G`.
pub fn solves_unsquared(st: &LocalStencil, w: f64, g: f64, r_hat: Vec3) -> bool {
    let nu = st.normal_estimate(w);
    pde_residual(nu, g, r_hat).abs() <= 1e-8 * nu.norm() * (1.0 + g.abs())
}

/// Both directional differences enter `ψ_v` with a nonnegative weight, so the
/// scheme is nondecreasing in `ψ_a` and `ψ_i`. Fails when the child lies behind
/// the parents or outside the strip between them.
pub fn is_upwind(st: &LocalStencil) -> bool {
    let c1 = -st.b[1][0] / st.det_b;
    let c2 = st.b[0][0] / st.det_b;
    c1 >= 0.0 && c2 >= 0.0
}

/// Causality gap `Δt = h / √(G² + 1)`.
pub fn delta_t(h: f64, g: f64) -> f64 {
    h / (g * g + 1.0).sqrt()
}

/// Everything the grid method needs to place one child.
#[derive(Clone, Debug)]
pub struct PlacementProblem {
    pub frame: Frame,
    /// Global position of the frame origin.
    pub origin: Vec3,
    /// Parents in frame coordinates.
    pub parent_a: Vec3,
    pub parent_i: Vec3,
    /// Speed at `p_a`.
    pub g0: f64,
    pub h: f64,
    pub dt: f64,
    /// Local accepted subset in global coordinates.
    pub neighbours: Vec<Vec3>,
    pub grid_size: usize,
    pub max_rounds: usize,
    pub tolerance: f64,
}

impl PlacementProblem {
    pub fn new(frame: Frame, origin: Vec3, parent_a: Vec3, parent_i: Vec3, g0: f64, h: f64, neighbours: Vec<Vec3>) -> Self {
        PlacementProblem {
            frame,
            origin,
            parent_a,
            parent_i,
            g0,
            h,
            dt: delta_t(h, g0),
            neighbours,
            grid_size: 10,
            max_rounds: 5,
            tolerance: 1e-15,
        }
    }

    pub fn to_global(&self, local: Vec3) -> Vec3 {
        self.origin + self.frame.to_global(local)
    }

    pub fn parent_times(&self) -> (f64, f64) {
        (self.to_global(self.parent_a).z, self.to_global(self.parent_i).z)
    }

    /// Midpoint of the parents in the `uv` plane.
    pub fn u_min(&self) -> [f64; 2] {
        [
            0.5 * (self.parent_a.x + self.parent_i.x),
            0.5 * (self.parent_a.y + self.parent_i.y),
        ]
    }

    pub fn objective(&self, ud: [f64; 2]) -> f64 {
        objective(ud, [self.parent_a.x, self.parent_a.y], [self.parent_i.x, self.parent_i.y])
    }

    /// Direct height and global point at `ud`, with the constraint outcome.
    pub fn evaluate(&self, ud: [f64; 2]) -> NodeOutcome {
        let Ok(st) = LocalStencil::new(self.parent_a, self.parent_i, ud) else {
            return NodeOutcome::BadStencil;
        };
        if !is_upwind(&st) {
            return NodeOutcome::NotUpwind;
        }
        let r_hat = self.frame.r_hat();
        let Ok(sol) = direct_solve(&st, self.g0, r_hat) else {
            return NodeOutcome::FailsV1;
        };
        if !solves_unsquared(&st, sol.w, self.g0, r_hat) {
            return NodeOutcome::FailsV1;
        }
        let p = self.to_global(Vec3::new(ud[0], ud[1], sol.w));
        let (ta, ti) = self.parent_times();
        if !check_v2(p.z, ta, ti, self.dt) {
            return NodeOutcome::FailsV2;
        }
        if !check_e(p, &self.neighbours, self.h) {
            return NodeOutcome::FailsE;
        }
        NodeOutcome::Feasible { w: sol.w, global: p }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NodeOutcome {
    BadStencil,
    NotUpwind,
    FailsV1,
    FailsV2,
    /// (V1) and (V2) hold but (E) does not.
    FailsE,
    Feasible { w: f64, global: Vec3 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Placement {
    pub uv: [f64; 2],
    /// Direct-solver height at `uv`.
    pub w: f64,
    pub global: Vec3,
    pub f: f64,
    /// Best objective after each grid round.
    pub history: Vec<f64>,
    pub evaluations: usize,
    /// Nodes that passed (V1) and (V2) but failed (E).
    pub v2_without_e: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub evaluations: usize,
    pub v2_without_e: usize,
}

/// Grid method: `s × s` nodes around `(u_min, v_a + h)` with mesh `h/2`,
/// recentred on the best feasible node and halved each round.
pub fn grid_search(prob: &PlacementProblem) -> Result<Placement, SearchStats> {
    let s = prob.grid_size.max(1);
    let mut mesh = prob.h / 2.0;
    let mut centre = [prob.u_min()[0], prob.parent_a.y + prob.h];
    let mut best: Option<(f64, [f64; 2], f64, Vec3)> = None;
    let mut f_prev = 1e6;
    let mut history = Vec::with_capacity(prob.max_rounds);
    let mut stats = SearchStats::default();
    let half = (s as f64 - 1.0) / 2.0;

    for _ in 0..prob.max_rounds {
        for j in 0..s {
            for k in 0..s {
                let ud = [
                    centre[0] + (k as f64 - half) * mesh,
                    centre[1] + (j as f64 - half) * mesh,
                ];
                stats.evaluations += 1;
                match prob.evaluate(ud) {
                    NodeOutcome::Feasible { w, global } => {
                        let f = prob.objective(ud);
                        if best.is_none_or(|b| f < b.0) {
                            best = Some((f, ud, w, global));
                        }
                    }
                    NodeOutcome::FailsE => stats.v2_without_e += 1,
                    _ => {}
                }
            }
        }
        let Some((f, uv, _, _)) = best else {
            return Err(stats);
        };
        history.push(f);
        if (f - f_prev).abs() <= prob.tolerance {
            break;
        }
        f_prev = f;
        centre = uv;
        mesh /= 2.0;
    }
    let (f, uv, w, global) = best.expect("a feasible node was recorded");
    Ok(Placement {
        uv,
        w,
        global,
        f,
        history,
        evaluations: stats.evaluations,
        v2_without_e: stats.v2_without_e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::manifold_normal;

    #[test]
    fn objective_values() {
        assert_eq!(objective([0.3, 0.1], [0.3, 0.1], [0.3, 0.1]), 0.0);
        assert_eq!(objective([0.5, 0.0], [0.0, 0.0], [1.0, 0.0]), 0.5);
        // minimum at the midpoint: the gradient vanishes there
        let (ua, ui) = ([0.1, -0.4], [0.7, 0.2]);
        let mid = [0.4, -0.1];
        let f0 = objective(mid, ua, ui);
        for d in [[1e-3, 0.0], [0.0, 1e-3], [-1e-3, 0.0], [0.0, -1e-3]] {
            assert!(objective([mid[0] + d[0], mid[1] + d[1]], ua, ui) > f0);
        }
    }

    #[test]
    fn constraint_checks() {
        assert!(check_v1(100.0, 1.0));
        assert!(!check_v1(-1e-3, 1.0));
        assert!(check_v1(-5e-13, 1.0));
        assert_eq!(delta_t(0.1, 0.0), 0.1);
        assert!((delta_t(0.1, 3f64.sqrt()) - 0.05).abs() < 1e-15);
        assert!(check_v2(0.2, 0.0, 0.0, 0.1));
        assert!(!check_v2(0.05, 0.0, 0.0, 0.1));
        let h = 0.1;
        let nbrs = [Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0)];
        assert!(check_e(Vec3::new(0.0, 0.2, 0.0), &nbrs, h));
        assert!(!check_e(Vec3::new(1.0, 0.0, 0.0), &nbrs, h));
    }

    fn flat_problem(h: f64, g: f64) -> PlacementProblem {
        // plane front x = g t moving in +x, point p_a at the origin
        let nu = manifold_normal([1.0, 0.0], g);
        let frame = Frame::from_normal(nu).unwrap();
        let pb_global = Vec3::new(0.0, 0.8 * h, 0.0);
        let pa = Vec3::ZERO;
        let pb = frame.to_local(pb_global);
        let pb = Vec3::new(pb.x, pb.y, 0.0);
        // previously accepted row of the same plane, one causality gap earlier
        let dt = delta_t(h, g);
        let mut accepted = vec![Vec3::ZERO, pb_global];
        for k in -3..=3 {
            accepted.push(Vec3::new(-g * dt, k as f64 * 0.8 * h, -dt));
        }
        PlacementProblem::new(frame, Vec3::ZERO, pa, pb, g, h, accepted)
    }

    #[test]
    fn flat_manifold_solution_is_above_midpoint() {
        for g in [0.0, 0.5, 1.0, 2.0] {
            let h = 1e-2;
            let prob = flat_problem(h, g);
            let sol = grid_search(&prob).unwrap();
            let umin = prob.u_min();
            assert!((sol.uv[0] - umin[0]).abs() <= h / 2.0, "{g}: {:?}", sol.uv);
            assert!((sol.uv[1] - (umin[1] + prob.dt * (g * g + 1.0).sqrt())).abs() <= h / 16.0, "{g}: {:?}", sol.uv);
            assert!(sol.w.abs() < 1e-12);
            let (ta, ti) = prob.parent_times();
            assert!(check_v2(sol.global.z, ta, ti, prob.dt));
            assert!(check_e(sol.global, &prob.neighbours, h));
            assert!(sol.history.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn packed_neighbourhood_is_infeasible() {
        let h = 1e-2;
        let mut prob = flat_problem(h, 1.0);
        for i in -40..=40 {
            for j in -40..=40 {
                for k in 0..=30 {
                    let p = Vec3::new(i as f64 * 0.1 * h, j as f64 * 0.1 * h, k as f64 * 0.1 * h);
                    prob.neighbours.push(p);
                }
            }
        }
        assert!(grid_search(&prob).is_err());
    }
}
