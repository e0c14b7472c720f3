//! Speed fields and the six reference problems with known solutions.

use std::f64::consts::{FRAC_PI_2, TAU};

use crate::error::FieldError;
use crate::frames::{manifold_normal, Vec3};

/// Normal speed `F(x, y, t)`.
pub trait SpeedField: Sync {
    fn speed(&self, p: Vec3) -> f64;
}

impl<F> SpeedField for F
where
    F: Fn(Vec3) -> f64 + Sync,
{
    fn speed(&self, p: Vec3) -> f64 {
        self(p)
    }
}

/// Sampled closed front at `t = 0`: positions with normals to `M`, plus the
/// index cycles that close each component.
#[derive(Clone, Debug, PartialEq)]
pub struct FrontSample {
    pub points: Vec<(Vec3, Vec3)>,
    pub cycles: Vec<Vec<usize>>,
}

const R0: f64 = 0.25;
const OSC_A: f64 = 0.7;
const OSC_B: f64 = 10.0;
const OSC_C: f64 = 0.3;
const ESC_B: f64 = 10.0;
const ESC_C: f64 = 0.5;
const TWO_R0: f64 = 0.35;
const TWO_OFFSET: f64 = 0.5;
const TWO_LIMIT: f64 = 0.5;
const PETALS: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Example {
    /// `F ≡ 1`.
    Expanding,
    /// `F = 1 - e^{10t-1}`; the circle grows, stalls and collapses.
    Football,
    /// `F = 1 - 2t` on two circles that merge.
    TwoCircles,
    /// `F = 0.7 sin(10(t + 0.3))`.
    Oscillating,
    /// Circle drifting along `x` while growing.
    Escaping,
    /// Circle deforming into a three-leaved rose.
    Rose,
}

impl Example {
    pub const ALL: [Example; 6] = [
        Example::Expanding,
        Example::Football,
        Example::TwoCircles,
        Example::Oscillating,
        Example::Escaping,
        Example::Rose,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Example::Expanding => "expanding",
            Example::Football => "football",
            Example::TwoCircles => "two-circles",
            Example::Oscillating => "oscillating",
            Example::Escaping => "escaping",
            Example::Rose => "rose",
        }
    }

    pub fn from_name(name: &str) -> Result<Example, FieldError> {
        Example::ALL
            .into_iter()
            .find(|e| e.name() == name)
            .ok_or_else(|| FieldError::UnknownExample(name.to_string()))
    }

    pub fn default_final_time(self) -> f64 {
        match self {
            Example::Expanding => 0.5,
            Example::Football => 0.4,
            Example::TwoCircles => 0.5,
            Example::Oscillating => 1.5 * TAU / OSC_B,
            Example::Escaping => 0.4,
            Example::Rose => 0.19,
        }
    }

    /// Time at which reconstructed fronts are compared with the exact one.
    pub fn default_t_h(self) -> f64 {
        match self {
            Example::Expanding => 0.35,
            Example::Football => 0.1,
            Example::TwoCircles => 0.45,
            Example::Oscillating => 0.5,
            Example::Escaping => 0.35,
            Example::Rose => 0.15,
        }
    }

    /// Default number of samples per circle.
    pub fn default_m(self) -> usize {
        match self {
            Example::TwoCircles => 80,
            Example::Football => 60,
            _ => 50,
        }
    }

    /// Whether `exact_phi` is a signed distance in `xy`.
    pub fn is_signed_distance(self) -> bool {
        self != Example::Rose
    }

    /// Last time at which `exact_phi` solves the problem.
    pub fn validity_limit(self) -> Option<f64> {
        match self {
            Example::TwoCircles => Some(TWO_LIMIT),
            _ => None,
        }
    }

    pub fn evaluate(self, x: f64, y: f64, t: f64) -> Result<f64, FieldError> {
        Ok(match self {
            Example::Expanding => 1.0,
            Example::Football => 1.0 - (10.0 * t - 1.0).exp(),
            Example::TwoCircles => 1.0 - 2.0 * t,
            Example::Oscillating => OSC_A * (OSC_B * (t + OSC_C)).sin(),
            Example::Escaping => {
                let (g, dg) = escape_shift(t);
                let dx = x - g * t;
                let r = dx.hypot(y);
                if r == 0.0 {
                    ESC_C
                } else {
                    dx * (dg * t + g) / r + ESC_C
                }
            }
            Example::Rose => {
                let r = x.hypot(y);
                if r == 0.0 {
                    return Err(FieldError::UndefinedAtOrigin);
                }
                let theta = y.atan2(x);
                let s = (PETALS * theta).sin();
                let q = PETALS * t / r;
                (PETALS * theta).cos() / (1.0 + q * q * s * s).sqrt()
            }
        })
    }

    /// Exact level-set function; its zero set at time `t` is the front.
    pub fn exact_phi(self, x: f64, y: f64, t: f64) -> Result<f64, FieldError> {
        if let Some(limit) = self.validity_limit() {
            if t > limit {
                return Err(FieldError::OutsideValidity { t, limit });
            }
        }
        Ok(match self {
            Example::TwoCircles => {
                let cx = if x >= 0.0 { TWO_OFFSET } else { -TWO_OFFSET };
                (x - cx).hypot(y) - self.radius(t)
            }
            Example::Escaping => (x - escape_shift(t).0 * t).hypot(y) - self.radius(t),
            Example::Rose => {
                let theta = y.atan2(x);
                x.hypot(y) - (t * (PETALS * theta).cos() + R0)
            }
            _ => x.hypot(y) - self.radius(t),
        })
    }

    /// Radius of the exact circle(s); for the rose, the base radius.
    pub fn radius(self, t: f64) -> f64 {
        match self {
            Example::Expanding => R0 + t,
            Example::Football => R0 - ((10.0 * t).exp() - 1.0) / (10.0 * std::f64::consts::E) + t,
            Example::TwoCircles => TWO_R0 + t - t * t,
            Example::Oscillating => R0 + (OSC_A / OSC_B) * ((OSC_B * OSC_C).cos() - (OSC_B * (t + OSC_C)).cos()),
            Example::Escaping => R0 + ESC_C * t,
            Example::Rose => R0,
        }
    }

    fn centres(self, t: f64) -> Vec<[f64; 2]> {
        match self {
            Example::TwoCircles => vec![[-TWO_OFFSET, 0.0], [TWO_OFFSET, 0.0]],
            Example::Escaping => vec![[escape_shift(t).0 * t, 0.0]],
            _ => vec![[0.0, 0.0]],
        }
    }

    /// `m` equally spaced samples per initial circle, with normals
    /// `(n̂, -F)/√(1 + F²)`.
    pub fn sample_initial_front(self, m: usize) -> Result<FrontSample, FieldError> {
        if m < 3 {
            return Err(FieldError::TooFewSamples(m));
        }
        let radius = self.radius(0.0);
        let mut points = Vec::new();
        let mut cycles = Vec::new();
        for c in self.centres(0.0) {
            let mut cycle = Vec::with_capacity(m);
            for k in 0..m {
                let theta = TAU * k as f64 / m as f64;
                let n = [theta.cos(), theta.sin()];
                let x = c[0] + radius * n[0];
                let y = c[1] + radius * n[1];
                let f = self.evaluate(x, y, 0.0)?;
                cycle.push(points.len());
                points.push((Vec3::new(x, y, 0.0), manifold_normal(n, f)));
            }
            cycles.push(cycle);
        }
        Ok(FrontSample { points, cycles })
    }

    /// Dense sampling of the exact front at time `t`, `n` points per closed curve.
    pub fn exact_contour(self, t: f64, n: usize) -> Result<Vec<[f64; 2]>, FieldError> {
        if let Some(limit) = self.validity_limit() {
            if t > limit {
                return Err(FieldError::OutsideValidity { t, limit });
            }
        }
        let n = n.max(3);
        let angles = (0..n).map(move |k| TAU * k as f64 / n as f64);
        let mut out = Vec::with_capacity(2 * n);
        match self {
            Example::Rose => {
                for theta in angles {
                    let r = t * (PETALS * theta).cos() + R0;
                    out.push([r * theta.cos(), r * theta.sin()]);
                }
            }
            Example::TwoCircles => {
                let r = self.radius(t);
                for c in self.centres(t) {
                    for theta in angles.clone() {
                        let p = [c[0] + r * theta.cos(), c[1] + r * theta.sin()];
                        if p[0] * c[0] >= 0.0 {
                            out.push(p);
                        }
                    }
                }
            }
            _ => {
                let r = self.radius(t);
                if r > 0.0 {
                    let c = self.centres(t)[0];
                    for theta in angles {
                        out.push([c[0] + r * theta.cos(), c[1] + r * theta.sin()]);
                    }
                }
            }
        }
        Ok(out)
    }
}

impl Example {
    /// Point of the exact front at polar angle `theta` about the first centre.
    pub fn front_point(self, theta: f64, t: f64) -> [f64; 2] {
        let c = self.centres(t)[0];
        let r = match self {
            Example::Rose => t * (PETALS * theta).cos() + R0,
            _ => self.radius(t),
        };
        [c[0] + r * theta.cos(), c[1] + r * theta.sin()]
    }

    /// Time at which the exact front passes through `(x, y)`, by Newton's
    /// method from `t_guess`.
    pub fn arrival_time(self, x: f64, y: f64, t_guess: f64) -> Option<f64> {
        let mut t = t_guess;
        for _ in 0..60 {
            let phi = self.exact_phi(x, y, t).ok()?;
            let d = 1e-6;
            let slope = (self.exact_phi(x, y, t + d).ok()? - self.exact_phi(x, y, t - d).ok()?) / (2.0 * d);
            if slope == 0.0 || !slope.is_finite() {
                return None;
            }
            let step = phi / slope;
            t -= step;
            if step.abs() <= 1e-15 * (1.0 + t.abs()) {
                return Some(t);
            }
        }
        None
    }

    /// Unit normal to `M` at `p`, from central differences of `exact_phi`.
    pub fn exact_normal(self, p: Vec3) -> Result<Vec3, FieldError> {
        let d = 1e-6;
        let diff = |e: Vec3| -> Result<f64, FieldError> {
            let (a, b) = (p + e * d, p - e * d);
            Ok((self.exact_phi(a.x, a.y, a.z)? - self.exact_phi(b.x, b.y, b.z)?) / (2.0 * d))
        };
        let g = Vec3::new(diff(Vec3::new(1.0, 0.0, 0.0))?, diff(Vec3::new(0.0, 1.0, 0.0))?, diff(Vec3::new(0.0, 0.0, 1.0))?);
        Ok(g.normalized())
    }
}

impl SpeedField for Example {
    fn speed(&self, p: Vec3) -> f64 {
        self.evaluate(p.x, p.y, p.z).unwrap_or(f64::NAN)
    }
}

/// `g(t) = atan(10(t - 0.5)) + π/2` and its derivative.
fn escape_shift(t: f64) -> (f64, f64) {
    let z = ESC_B * (t - 0.5);
    (z.atan() + FRAC_PI_2, ESC_B / (1.0 + z * z))
}

/// Time at which the football front collapses to a point.
pub fn football_collapse_time() -> f64 {
    let mut lo = 0.1;
    let mut hi = 0.4;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if Example::Football.radius(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
