//! Orthonormal `uvw` frames attached to planes in `xyt`-space.
//!
//! A [`Frame`] stores the rows `u`, `v`, `w` of the change-of-coordinates
//! matrix `M`, so that `(u, v, w)ᵀ = M (x, y, t)ᵀ`. Frames produced by
//! [`Frame::from_normal`] have `w` equal to the plane normal, a vertical
//! `vw`-plane (`α₃ = 0`) and a `v` axis pointing forward in time (`β₃ > 0`).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use crate::error::FrameError;

/// Normals with `|n₃|` at or below this are treated as vertical planes.
pub const VERTICAL_THRESHOLD: f64 = 1e-14;

const UNIT_TOLERANCE: f64 = 1e-12;

/// A vector in `xyt`-space (or in frame coordinates `uvw`).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    #[inline]
    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Returns `self / |self|`; the zero vector is returned unchanged.
    pub fn normalized(self) -> Vec3 {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            self / n
        }
    }

    #[inline]
    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    /// Euclidean distance of the `xy` projections.
    #[inline]
    pub fn xy_distance(self, o: Vec3) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    #[inline]
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    #[inline]
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

/// Right-handed orthonormal coordinate system `uvw`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub u: Vec3,
    pub v: Vec3,
    pub w: Vec3,
}

impl Frame {
    /// Frame for a plane whose normal has a nonzero time component.
    ///
    /// Uses `a = -n₁/n₃`, `b = -n₂/n₃`, `μ = √(1+a²+b²)`; the sign of `u` is
    /// fixed by requiring `det M = +1`.
    pub fn tilted(n: Vec3) -> Result<Frame, FrameError> {
        check_unit(n)?;
        if n.z == 0.0 {
            return Err(FrameError::VerticalNormal);
        }
        let a = -n.x / n.z;
        let b = -n.y / n.z;
        let rho = a.hypot(b);
        if rho == 0.0 {
            return Err(FrameError::TimeAxisNormal);
        }
        let mu = (1.0 + a * a + b * b).sqrt();
        let mut w = Vec3::new(-a, -b, 1.0) / mu;
        if w.z.signum() != n.z.signum() {
            w = -w;
        }
        let v = Vec3::new(a, b, rho * rho) / (rho * mu);
        let mut u = Vec3::new(b, -a, 0.0) / rho;
        if u.dot(v.cross(w)) < 0.0 {
            u = -u;
        }
        Ok(Frame { u, v, w })
    }

    /// Frame for a vertical plane (`n₃ = 0`): `u = (-n₂, n₁, 0)`, `v = t̂`, `w = n`.
    pub fn vertical(n: Vec3) -> Result<Frame, FrameError> {
        check_unit(n)?;
        if n.z != 0.0 {
            return Err(FrameError::NotVertical(n.z));
        }
        Ok(Frame {
            u: Vec3::new(-n.y, n.x, 0.0),
            v: Vec3::new(0.0, 0.0, 1.0),
            w: Vec3::new(n.x, n.y, 0.0),
        })
    }

    /// Builds the frame whose `w` axis is the unit normal `n`.
    ///
    /// Normals with `|n₃| ≤ 1e-14` get the vertical-plane frame (with `n₃`
    /// snapped to zero). Normals parallel to the time axis are rejected.
    pub fn from_normal(n: Vec3) -> Result<Frame, FrameError> {
        check_unit(n)?;
        if n.z.abs() <= VERTICAL_THRESHOLD {
            let snapped = Vec3::new(n.x, n.y, 0.0);
            return Frame::vertical(snapped / snapped.norm());
        }
        if n.x == 0.0 && n.y == 0.0 {
            return Err(FrameError::TimeAxisNormal);
        }
        Frame::tilted(n)
    }

    /// Builds a frame from explicit rows after checking orthonormality and
    /// right-handedness. Used for axis-aligned fixtures such as `u=-x, v=y, w=-t`.
    pub fn from_rows(u: Vec3, v: Vec3, w: Vec3) -> Result<Frame, FrameError> {
        let f = Frame { u, v, w };
        let g = f.gram_deviation();
        if g > UNIT_TOLERANCE {
            return Err(FrameError::NotOrthonormal(g));
        }
        let d = f.determinant();
        if (d - 1.0).abs() > UNIT_TOLERANCE {
            return Err(FrameError::LeftHanded(d));
        }
        Ok(f)
    }

    /// `M · p`.
    #[inline]
    pub fn to_local(&self, p: Vec3) -> Vec3 {
        Vec3::new(self.u.dot(p), self.v.dot(p), self.w.dot(p))
    }

    /// `Mᵀ · q`.
    #[inline]
    pub fn to_global(&self, q: Vec3) -> Vec3 {
        self.u * q.x + self.v * q.y + self.w * q.z
    }

    /// `R̂ = (α₃, β₃, γ₃)`, the time components of the three axes.
    #[inline]
    pub fn r_hat(&self) -> Vec3 {
        Vec3::new(self.u.z, self.v.z, self.w.z)
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        [self.u.to_array(), self.v.to_array(), self.w.to_array()]
    }

    pub fn determinant(&self) -> f64 {
        self.u.dot(self.v.cross(self.w))
    }

    /// Largest entry of `|M Mᵀ - I|`.
    pub fn gram_deviation(&self) -> f64 {
        let rows = [self.u, self.v, self.w];
        let mut worst: f64 = 0.0;
        for (i, a) in rows.iter().enumerate() {
            for (j, b) in rows.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.dot(*b) - target).abs());
            }
        }
        worst
    }
}

fn check_unit(n: Vec3) -> Result<(), FrameError> {
    if !n.is_finite() {
        return Err(FrameError::NonFinite);
    }
    let len = n.norm();
    if (len - 1.0).abs() > UNIT_TOLERANCE {
        return Err(FrameError::NotUnit(len));
    }
    Ok(())
}

/// Outward normal to the spacetime manifold at a front point with spatial
/// unit normal `n` and speed `f`: `(n₁, n₂, -F)/√(1+F²)`.
pub fn manifold_normal(n: [f64; 2], f: f64) -> Vec3 {
    Vec3::new(n[0], n[1], -f) / (1.0 + f * f).sqrt()
}
