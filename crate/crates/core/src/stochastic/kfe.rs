//! Finite-volume solver for the stationary forward equation with a reset source.
//!
//! Solves `0 = −μ p′ + ½Σ² p″ − β p + β δ(x − x₀)` with zero-flux ends.
//! The diffusion coefficient is `D = ½Σ²`; callers pass the volatility Σ.

use crate::error::{ensure, Error, Result};
use crate::stochastic::special::trapezoid;

/// Uniform grid on `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        ensure(n_points >= 3, "n_points", "must be at least 3")?;
        ensure(x_min.is_finite() && x_max.is_finite() && x_min < x_max, "x_min", "must be finite and below x_max")?;
        Ok(Grid1D { x_min, x_max, n_points })
    }

    /// A grid sized from the decay rates of the reset law so the density at
    /// both ends is below `1e-9` of its peak, with `reset_point` on a node.
    pub fn for_reset_law(drift: f64, volatility: f64, reset_rate: f64, reset_point: f64, n_points: usize) -> Result<Self> {
        let d = crate::density::PiecewiseExpDensity::from_drift_diffusion(drift, volatility, reset_rate)?;
        ensure(n_points >= 3, "n_points", "must be at least 3")?;
        let decades = 1e9f64.ln();
        let left = decades / d.rate_left();
        let right = decades / d.rate_right();
        let h = (left + right) / (n_points - 1) as f64;
        let i0 = (left / h).round();
        let x_min = reset_point - i0 * h;
        Ok(Grid1D { x_min, x_max: x_min + h * (n_points - 1) as f64, n_points })
    }

    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.h()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    /// Index of the node nearest to `x`, clamped to the grid.
    pub fn nearest(&self, x: f64) -> usize {
        let i = ((x - self.x_min) / self.h()).round();
        i.clamp(0.0, (self.n_points - 1) as f64) as usize
    }
}

/// How the face flux `μp − D p′` is discretized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FluxScheme {
    /// First-order donor cell for the drift, central for diffusion.
    Upwind,
    /// Exponentially fitted (Scharfetter–Gummel) flux; exact for a constant
    /// flux between nodes, second-order accurate and still monotone.
    #[default]
    ExponentialFitting,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KfeSolution {
    pub grid: Grid1D,
    pub x: Vec<f64>,
    pub density: Vec<f64>,
}

impl KfeSolution {
    pub fn integral(&self) -> f64 {
        trapezoid(&self.density, self.grid.h())
    }

    pub fn max_abs_error(&self, exact: impl Fn(f64) -> f64) -> f64 {
        self.x.iter().zip(&self.density).map(|(&x, &p)| (p - exact(x)).abs()).fold(0.0, f64::max)
    }

    pub fn argmax(&self) -> usize {
        self.density.iter().enumerate().fold((0, f64::MIN), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) }).0
    }
}

/// Bernoulli function z/(eᶻ − 1).
fn bernoulli(z: f64) -> f64 {
    if z.abs() < 1e-10 {
        1.0 - 0.5 * z
    } else {
        z / z.exp_m1()
    }
}

/// Stationary density of the reset process on `grid`, normalized by the
/// trapezoid rule. The Dirac source of mass β sits in the cell nearest to
/// `reset_point`.
pub fn solve_stationary_kfe_fd(
    drift: f64,
    volatility: f64,
    reset_rate: f64,
    reset_point: f64,
    grid: &Grid1D,
    scheme: FluxScheme,
) -> Result<KfeSolution> {
    ensure(drift.is_finite(), "drift", "must be finite")?;
    ensure(reset_rate > 0.0 && reset_rate.is_finite(), "reset_rate", "must be positive")?;
    ensure(grid.x_min < reset_point && reset_point < grid.x_max, "reset_point", "must lie inside the grid")?;
    if volatility == 0.0 || !volatility.is_finite() {
        return Err(Error::DegenerateDiffusion(format!("volatility {volatility}: the forward equation loses its second-order term")));
    }
    let n = grid.n_points;
    let h = grid.h();
    let diff = 0.5 * volatility * volatility;
    // face flux F = a·p_left − c·p_right
    let (a, c) = match scheme {
        FluxScheme::Upwind => (diff / h + drift.max(0.0), diff / h + (-drift).max(0.0)),
        FluxScheme::ExponentialFitting => {
            let pe = drift * h / diff;
            (diff / h * bernoulli(-pe), diff / h * bernoulli(pe))
        }
    };

    let mut lower = vec![-a / h; n];
    let mut diag = vec![(a + c) / h + reset_rate; n];
    let mut upper = vec![-c / h; n];
    lower[0] = 0.0;
    upper[n - 1] = 0.0;
    diag[0] = a / h + reset_rate;
    diag[n - 1] = c / h + reset_rate;
    let mut rhs = vec![0.0; n];
    rhs[grid.nearest(reset_point)] = reset_rate / h;

    let mut density = thomas(&lower, &diag, &upper, &rhs)?;
    let x = grid.points();
    let integral = trapezoid(&density, h);
    if !(integral > 0.0 && integral.is_finite()) {
        return Err(Error::NotNormalized { integral });
    }
    density.iter_mut().for_each(|p| *p /= integral);
    Ok(KfeSolution { grid: *grid, x, density })
}

/// Tridiagonal solve without pivoting.
fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = diag[0];
    for i in 0..n {
        if i > 0 {
            denom = diag[i] - lower[i] * c[i - 1];
        }
        if denom == 0.0 || !denom.is_finite() {
            return Err(Error::SingularSystem { row: i });
        }
        c[i] = upper[i] / denom;
        d[i] = (rhs[i] - if i > 0 { lower[i] * d[i - 1] } else { 0.0 }) / denom;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}
