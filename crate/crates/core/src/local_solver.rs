//! Finite-difference stencil in a `uvw` frame and the two height solvers.
//!
//! Given parents `p_a`, `p_i` (frame coordinates) and a child location
//! `(u_d, v_d)`, the directional differences `ψ_k = (w_d - w_k)/|s_k|` give
//! the approximate normal `ν̃(w_d) = -M⃗ w_d - N⃗`. The direct solver freezes the
//! speed at `p_a` and solves the resulting quadratic in closed form; the
//! iterative solver relaxes the full relation in pseudo-time with the speed
//! re-evaluated along the child's vertical ray.

use crate::error::{SolveError, StencilError};
use crate::frames::Vec3;

/// Minimum `|det B|` accepted for a stencil.
pub const MIN_STENCIL_DET: f64 = 1e-10;

const LINEAR_BRANCH_TOLERANCE: f64 = 1e-14;
const RADICAND_CLAMP: f64 = 1e-12;

/// Parents, child location and the derived vectors `M⃗`, `N⃗`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalStencil {
    pub parent_a: Vec3,
    pub parent_i: Vec3,
    pub child_uv: [f64; 2],
    pub s_a: [f64; 2],
    pub s_i: [f64; 2],
    pub len_a: f64,
    pub len_i: f64,
    /// Rows `ŝ_a`, `ŝ_i`.
    pub b: [[f64; 2]; 2],
    pub det_b: f64,
    pub m: Vec3,
    pub n: Vec3,
}

impl LocalStencil {
    pub fn new(parent_a: Vec3, parent_i: Vec3, child_uv: [f64; 2]) -> Result<Self, StencilError> {
        let s_a = [child_uv[0] - parent_a.x, child_uv[1] - parent_a.y];
        let s_i = [child_uv[0] - parent_i.x, child_uv[1] - parent_i.y];
        let len_a = s_a[0].hypot(s_a[1]);
        let len_i = s_i[0].hypot(s_i[1]);
        if len_a == 0.0 || len_i == 0.0 {
            return Err(StencilError::CoincidentParent);
        }
        let b = [[s_a[0] / len_a, s_a[1] / len_a], [s_i[0] / len_i, s_i[1] / len_i]];
        let det_b = b[0][0] * b[1][1] - b[0][1] * b[1][0];
        if det_b.abs() < MIN_STENCIL_DET {
            return Err(StencilError::Colinear(det_b.abs()));
        }
        let solve = |r0: f64, r1: f64| -> [f64; 2] {
            [
                (b[1][1] * r0 - b[0][1] * r1) / det_b,
                (-b[1][0] * r0 + b[0][0] * r1) / det_b,
            ]
        };
        let m = solve(1.0 / len_a, 1.0 / len_i);
        let n = solve(parent_a.z / len_a, parent_i.z / len_i);
        Ok(LocalStencil {
            parent_a,
            parent_i,
            child_uv,
            s_a,
            s_i,
            len_a,
            len_i,
            b,
            det_b,
            m: Vec3::new(m[0], m[1], 0.0),
            n: Vec3::new(-n[0], -n[1], -1.0),
        })
    }

    /// `ν̃(w) = -M⃗ w - N⃗`; its third component is always 1.
    #[inline]
    pub fn normal_estimate(&self, w: f64) -> Vec3 {
        -(self.m * w) - self.n
    }

    /// Unit normal `ν̃/|ν̃|` at height `w`, in frame coordinates.
    pub fn child_normal(&self, w: f64) -> Vec3 {
        self.normal_estimate(w).normalized()
    }

    /// Directional differences `(ψ_a, ψ_i)` at height `w`.
    pub fn directional_derivatives(&self, w: f64) -> (f64, f64) {
        ((w - self.parent_a.z) / self.len_a, (w - self.parent_i.z) / self.len_i)
    }

    /// `(ψ_u, ψ_v) = B⁻¹ (ψ_a, ψ_i)`.
    pub fn gradient(&self, psi_a: f64, psi_i: f64) -> (f64, f64) {
        let b = &self.b;
        (
            (b[1][1] * psi_a - b[0][1] * psi_i) / self.det_b,
            (-b[1][0] * psi_a + b[0][0] * psi_i) / self.det_b,
        )
    }
}

/// Left-hand side of `ν·R̂ + G √(ν·ν - (ν·R̂)²) = 0` for a given `ν`.
pub fn pde_residual(nu: Vec3, speed: f64, r_hat: Vec3) -> f64 {
    let d = nu.dot(r_hat);
    d + speed * (nu.norm_squared() - d * d).max(0.0).sqrt()
}

/// The scheme `H̄(ψ_a, ψ_i) = -(ν·R̂ + G₀ √(ν·ν - (ν·R̂)²))` with
/// `ν = (-ψ_u, -ψ_v, 1)` reconstructed from the two directional differences.
pub fn scheme_hamiltonian(st: &LocalStencil, psi_a: f64, psi_i: f64, g0: f64, r_hat: Vec3) -> f64 {
    let (pu, pv) = st.gradient(psi_a, psi_i);
    -pde_residual(Vec3::new(-pu, -pv, 1.0), g0, r_hat)
}

/// Coefficients of the quadratic for the direct solver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticCoefficients {
    pub k: [f64; 6],
    pub rho1: f64,
    pub rho2: f64,
    pub g0: f64,
    /// `k₁ + G₀²(k₁ - k₄)`.
    pub leading: f64,
    /// `k₂ + G₀²(k₂ - k₅)` (half the linear coefficient).
    pub half_linear: f64,
    /// `k₃ + G₀²(k₃ - k₆)`.
    pub constant: f64,
    /// `ρ₁ + ρ₂ G₀²`.
    pub radicand: f64,
    /// `G₀² (ρ₁ + ρ₂ G₀²)`.
    pub discriminant: f64,
}

impl QuadraticCoefficients {
    pub fn new(st: &LocalStencil, g0: f64, r_hat: Vec3) -> Self {
        let rm = r_hat.dot(st.m);
        let rn = r_hat.dot(st.n);
        let k = [
            rm * rm,
            rm * rn,
            rn * rn,
            st.m.dot(st.m),
            st.m.dot(st.n),
            st.n.dot(st.n),
        ];
        let g2 = g0 * g0;
        let rho1 = -2.0 * k[1] * k[4] + k[0] * k[5] + k[2] * k[3];
        let rho2 = rho1 + k[4] * k[4] - k[3] * k[5];
        let radicand = rho1 + rho2 * g2;
        QuadraticCoefficients {
            k,
            rho1,
            rho2,
            g0,
            leading: k[0] + g2 * (k[0] - k[3]),
            half_linear: k[1] + g2 * (k[1] - k[4]),
            constant: k[2] + g2 * (k[2] - k[5]),
            radicand,
            discriminant: g2 * radicand,
        }
    }

    /// Magnitude used to judge whether a negative discriminant is rounding noise.
    pub fn discriminant_scale(&self) -> f64 {
        let g2 = self.g0 * self.g0;
        (g2 * (self.rho1.abs() + self.rho2.abs() * g2)).max(1.0)
    }

    /// Real-height feasibility: the discriminant is nonnegative up to rounding.
    pub fn is_real(&self) -> bool {
        self.discriminant >= -RADICAND_CLAMP * self.discriminant_scale()
    }

    /// `(ν̃·R̂)²(1+G₀²) - G₀²(ν̃·ν̃)` evaluated through the `k` coefficients.
    pub fn squared_residual(&self, w: f64) -> f64 {
        let k = &self.k;
        let g2 = self.g0 * self.g0;
        let nr2 = k[0] * w * w + 2.0 * k[1] * w + k[2];
        let nn = k[3] * w * w + 2.0 * k[4] * w + k[5];
        nr2 * (1.0 + g2) - g2 * nn
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootBranch {
    Quadratic,
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectSolution {
    pub w: f64,
    pub coefficients: QuadraticCoefficients,
    pub branch: RootBranch,
    /// The radicand was slightly negative and clamped to zero.
    pub clamped: bool,
}

/// Closed-form height with the speed frozen at `g0`.
pub fn direct_solve(st: &LocalStencil, g0: f64, r_hat: Vec3) -> Result<DirectSolution, SolveError> {
    let c = QuadraticCoefficients::new(st, g0, r_hat);
    let g2 = g0 * g0;
    if c.leading.abs() <= LINEAR_BRANCH_TOLERANCE * (1.0 + g2) * c.k[3] {
        if c.half_linear == 0.0 {
            return Err(SolveError::Degenerate);
        }
        return Ok(DirectSolution {
            w: -c.constant / (2.0 * c.half_linear),
            coefficients: c,
            branch: RootBranch::Linear,
            clamped: false,
        });
    }
    let mut clamped = false;
    let root = if g0 == 0.0 {
        0.0
    } else if c.radicand >= 0.0 {
        g0 * c.radicand.sqrt()
    } else if c.is_real() {
        clamped = true;
        0.0
    } else {
        return Err(SolveError::NegativeDiscriminant(c.discriminant));
    };
    let w = (-c.half_linear + root) / c.leading;
    if !w.is_finite() {
        return Err(SolveError::NonFinite);
    }
    Ok(DirectSolution {
        w,
        coefficients: c,
        branch: RootBranch::Quadratic,
        clamped,
    })
}

/// Both roots of the direct-solver quadratic (ignoring the root choice).
pub fn quadratic_roots(c: &QuadraticCoefficients) -> Option<(f64, f64)> {
    if c.leading == 0.0 || !c.is_real() {
        return None;
    }
    let s = c.g0.abs() * c.radicand.max(0.0).sqrt();
    Some(((-c.half_linear - s) / c.leading, (-c.half_linear + s) / c.leading))
}

/// Settings for the pseudo-time iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterativeConfig {
    /// Half-width of the sampled height window used to size `Δτ`.
    pub epsilon: f64,
    /// Number of heights sampled in `[w⁰ - ε, w⁰ + ε]`.
    pub samples: usize,
    /// Stop once `|w^{n+1} - w^n| < tolerance · Δτ`.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Upper bound on `Δτ`.
    pub max_step: f64,
    /// Step used when the residual does not vary over the window.
    pub idle_step: f64,
}

impl IterativeConfig {
    pub fn for_spacing(h: f64) -> Self {
        IterativeConfig {
            epsilon: h / 10.0,
            samples: 10,
            tolerance: 1e-10,
            max_iterations: 100,
            max_step: f64::INFINITY,
            idle_step: h,
        }
    }
}

/// Pseudo-time step `Δτ = 0.9 · 2ε / Q`, where `Q` bounds
/// `|H̃(w₁) - H̃(w₂)|` over all sampled pairs in the window around `w0`.
pub fn pseudo_time_step<G>(st: &LocalStencil, r_hat: Vec3, speed_at: G, w0: f64, cfg: &IterativeConfig) -> f64
where
    G: Fn(f64) -> f64,
{
    let n = cfg.samples.max(2);
    let eps = cfg.epsilon;
    let samples: Vec<(f64, f64, f64)> = (0..n)
        .map(|k| {
            let w = w0 - eps + 2.0 * eps * k as f64 / (n - 1) as f64;
            let nu = st.normal_estimate(w);
            let d = nu.dot(r_hat);
            let rad = (nu.norm_squared() - d * d).max(0.0).sqrt();
            (d, rad, speed_at(w))
        })
        .collect();
    let mut q: f64 = 0.0;
    for (i, &(d1, r1, g1)) in samples.iter().enumerate() {
        for (j, &(d2, r2, g2)) in samples.iter().enumerate() {
            if i == j {
                continue;
            }
            let bound = (d2 - d1).abs() + g1.abs() * (r1 - r2).abs() + (g1 - g2).abs() * r2;
            q = q.max(bound);
        }
    }
    if q <= 1e-14 {
        cfg.idle_step.min(cfg.max_step)
    } else {
        (0.9 * 2.0 * eps / q).min(cfg.max_step)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterativeSolution {
    pub w: f64,
    pub iterations: usize,
    pub dtau: f64,
    /// Some iterate had a slightly negative radicand that was clamped.
    pub clamped: bool,
}

/// Pseudo-time relaxation `w ← w + Δτ (ν̃·R̂ + G(w) √(ν̃·ν̃ - (ν̃·R̂)²))`.
pub fn iterative_solve<G>(
    st: &LocalStencil,
    r_hat: Vec3,
    speed_at: G,
    w0: f64,
    cfg: &IterativeConfig,
) -> Result<IterativeSolution, SolveError>
where
    G: Fn(f64) -> f64,
{
    let dtau = pseudo_time_step(st, r_hat, &speed_at, w0, cfg);
    let mut w = w0;
    let mut clamped = false;
    let mut last_step = f64::INFINITY;
    for iteration in 1..=cfg.max_iterations {
        let nu = st.normal_estimate(w);
        let d = nu.dot(r_hat);
        let mut rad2 = nu.norm_squared() - d * d;
        if rad2 < 0.0 {
            clamped = true;
            rad2 = 0.0;
        }
        let next = w + dtau * (d + speed_at(w) * rad2.sqrt());
        if !next.is_finite() {
            return Err(SolveError::NonFinite);
        }
        last_step = (next - w).abs();
        w = next;
        if last_step < cfg.tolerance * dtau {
            return Ok(IterativeSolution {
                w,
                iterations: iteration,
                dtau,
                clamped,
            });
        }
    }
    Err(SolveError::NoConvergence {
        iterations: cfg.max_iterations,
        last_step,
    })
}
