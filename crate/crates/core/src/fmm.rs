//! First-order fast marching for `|∇T| = 1/F` on a square grid.

use crate::band::NarrowBand;
use crate::error::FmmError;
use crate::PointId;

/// Standard two-sided upwind update, falling back to the one-sided value
/// when the two neighbours differ by at least `dx / f`. Pass
/// `f64::INFINITY` for a missing neighbour.
pub fn cartesian_update(ta: f64, tb: f64, dx: f64, f: f64) -> f64 {
    let step = dx / f;
    let lo = ta.min(tb);
    if !ta.is_finite() || !tb.is_finite() || (ta - tb).abs() >= step {
        return lo + step;
    }
    0.5 * (ta + tb + (2.0 * step * step - (ta - tb) * (ta - tb)).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeState {
    Far,
    Narrow,
    Accepted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FmmSetup {
    pub dx: f64,
    /// Nodes with `|x| < init_radius` start from the exact values.
    pub init_radius: f64,
    /// Accepted nodes beyond this radius do not feed the band.
    pub cap_radius: f64,
}

impl FmmSetup {
    /// Expanding-circle setup: exact start on `|x| < 0.25 + 2dx`, capped at `0.75`.
    pub fn new(dx: f64) -> Self {
        FmmSetup {
            dx,
            init_radius: 0.25 + 2.0 * dx,
            cap_radius: 0.75,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FmmGrid {
    /// Nodes per side; node `(i, j)` sits at `((i - half) dx, (j - half) dx)`.
    pub side: usize,
    pub half: usize,
    pub dx: f64,
    pub values: Vec<f64>,
    pub state: Vec<NodeState>,
    /// Node indices in acceptance order, starting with the marched ones.
    pub order: Vec<usize>,
    pub initialized: usize,
}

impl FmmGrid {
    pub fn position(&self, k: usize) -> (f64, f64) {
        let (i, j) = (k % self.side, k / self.side);
        ((i as f64 - self.half as f64) * self.dx, (j as f64 - self.half as f64) * self.dx)
    }

    /// `dx² Σ |T - exact|` over accepted nodes.
    pub fn l1_error<E: Fn(f64, f64) -> f64>(&self, exact: E) -> f64 {
        self.dx * self.dx * self.accepted_errors(exact).sum::<f64>()
    }

    pub fn max_error<E: Fn(f64, f64) -> f64>(&self, exact: E) -> f64 {
        self.accepted_errors(exact).fold(0.0, f64::max)
    }

    fn accepted_errors<'a, E: Fn(f64, f64) -> f64 + 'a>(&'a self, exact: E) -> impl Iterator<Item = f64> + 'a {
        (0..self.values.len()).filter(move |&k| self.state[k] == NodeState::Accepted).map(move |k| {
            let (x, y) = self.position(k);
            (self.values[k] - exact(x, y)).abs()
        })
    }
}

/// Marches arrival times outward from the exactly initialized disc.
pub fn fmm_solve<F, E>(setup: &FmmSetup, speed: F, exact: E) -> Result<FmmGrid, FmmError>
where
    F: Fn(f64, f64) -> f64,
    E: Fn(f64, f64) -> f64,
{
    let dx = setup.dx;
    if !(dx > 0.0 && dx.is_finite()) {
        return Err(FmmError::BadSpacing);
    }
    let half = ((setup.cap_radius + 2.0 * dx) / dx).ceil() as usize;
    let side = 2 * half + 1;
    let mut grid = FmmGrid {
        side,
        half,
        dx,
        values: vec![f64::INFINITY; side * side],
        state: vec![NodeState::Far; side * side],
        order: Vec::new(),
        initialized: 0,
    };
    let radius = |g: &FmmGrid, k: usize| {
        let (x, y) = g.position(k);
        x.hypot(y)
    };
    for k in 0..side * side {
        if radius(&grid, k) < setup.init_radius {
            let (x, y) = grid.position(k);
            grid.values[k] = exact(x, y);
            grid.state[k] = NodeState::Accepted;
            grid.initialized += 1;
        }
    }

    let mut band = NarrowBand::new();
    let neighbours = |k: usize| {
        let (i, j) = (k % side, k / side);
        let mut out = [None; 4];
        if i > 0 {
            out[0] = Some(k - 1);
        }
        if i + 1 < side {
            out[1] = Some(k + 1);
        }
        if j > 0 {
            out[2] = Some(k - side);
        }
        if j + 1 < side {
            out[3] = Some(k + side);
        }
        out
    };
    let update = |grid: &mut FmmGrid, band: &mut NarrowBand, k: usize| -> Result<(), FmmError> {
        let accepted = |n: Option<usize>| match n {
            Some(n) if grid.state[n] == NodeState::Accepted => grid.values[n],
            _ => f64::INFINITY,
        };
        let nb = neighbours(k);
        let tx = accepted(nb[0]).min(accepted(nb[1]));
        let ty = accepted(nb[2]).min(accepted(nb[3]));
        let (x, y) = grid.position(k);
        let f = speed(x, y);
        if !(f > 0.0) {
            return Err(FmmError::NonPositiveSpeed(f));
        }
        let t = cartesian_update(tx, ty, dx, f);
        if t < grid.values[k] {
            grid.values[k] = t;
            grid.state[k] = NodeState::Narrow;
            band.push(PointId(k), t);
        }
        Ok(())
    };

    let seeds: Vec<usize> = (0..side * side).filter(|&k| grid.state[k] == NodeState::Accepted).collect();
    for k in seeds {
        for n in neighbours(k).into_iter().flatten() {
            if grid.state[n] != NodeState::Accepted {
                update(&mut grid, &mut band, n)?;
            }
        }
    }
    while let Some((PointId(k), _)) = band.pop_min() {
        grid.state[k] = NodeState::Accepted;
        grid.order.push(k);
        if radius(&grid, k) > setup.cap_radius {
            continue;
        }
        for n in neighbours(k).into_iter().flatten() {
            if grid.state[n] != NodeState::Accepted {
                update(&mut grid, &mut band, n)?;
            }
        }
    }
    Ok(grid)
}
