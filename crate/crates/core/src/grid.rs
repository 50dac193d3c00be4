//! Sampled functions on a truncated half-line `[0, x_max]`.
//!
//! Every computation in the crate happens on a uniform [`Grid`] with an odd
//! number of points, so that consecutive interval pairs support composite
//! Simpson quadrature.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Number of grid points used when the caller does not ask for another value.
pub const DEFAULT_POINTS: usize = 2001;

/// Uniform grid `0 = x_0 < x_1 < ... < x_{n-1} = x_max` with `n` odd.
#[derive(Debug, Clone)]
pub struct Grid {
    points: Arc<[f64]>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.points, &other.points) || self.points == other.points
    }
}

impl Grid {
    pub fn uniform(x_max: f64, n: usize) -> Result<Self> {
        if !(x_max.is_finite() && x_max > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "x_max must be positive, got {x_max}"
            )));
        }
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "point count must be odd and >= 3, got {n}"
            )));
        }
        let last = n - 1;
        let points: Vec<f64> = (0..n)
            .map(|i| {
                if i == last {
                    x_max
                } else {
                    x_max * i as f64 / last as f64
                }
            })
            .collect();
        Ok(Self {
            points: points.into(),
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn x_max(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Nominal spacing `x_max / (n - 1)`.
    pub fn step(&self) -> f64 {
        self.x_max() / (self.len() - 1) as f64
    }

    /// Samples `f` at every grid point.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Result<GridFunction> {
        GridFunction::new(self.clone(), self.points.iter().map(|&x| f(x)).collect())
    }
}

/// Shorthand for [`Grid::uniform`].
pub fn make_uniform_grid(x_max: f64, n: usize) -> Result<Grid> {
    Grid::uniform(x_max, n)
}

/// A real function known through its samples on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "non-finite sample {} at index {i}",
                values[i]
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self {
            values: vec![0.0; grid.len()],
            grid: grid.clone(),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Checks the discrete membership conditions of the set K:
    /// `h(0) = 0` and `0 <= h <= 1` at every sample.
    pub fn check_in_k(&self) -> Result<()> {
        if self.values[0] != 0.0 {
            return Err(Error::NotInK(format!("h(0) = {} != 0", self.values[0])));
        }
        if let Some((i, v)) = self
            .values
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::NotInK(format!(
                "h({}) = {v} outside [0, 1]",
                self.grid.points()[i]
            )));
        }
        Ok(())
    }

    /// Monotone piecewise-cubic Hermite interpolation of the samples.
    ///
    /// Slopes are centered differences limited so that `|d_i| <= 3 min(|Δ_{i-1}|, |Δ_i|)`
    /// and set to zero at local extrema, which keeps every cubic piece monotone
    /// between its end samples.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let pts = self.grid.points();
        let x_max = self.grid.x_max();
        if !(0.0..=x_max).contains(&x) {
            return Err(Error::OutOfDomain { x, x_max });
        }
        // index of the last point <= x
        let i = pts.partition_point(|&p| p <= x) - 1;
        if pts[i] == x {
            return Ok(self.values[i]);
        }
        let width = pts[i + 1] - pts[i];
        let t = (x - pts[i]) / width;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let d0 = self.limited_slope(i) * width;
        let d1 = self.limited_slope(i + 1) * width;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        let v = h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1;
        // rounding can push the cubic a few ulps past its end samples
        let (lo, hi) = if y0 <= y1 { (y0, y1) } else { (y1, y0) };
        Ok(v.clamp(lo, hi))
    }

    fn secant(&self, k: usize) -> f64 {
        let pts = self.grid.points();
        (self.values[k + 1] - self.values[k]) / (pts[k + 1] - pts[k])
    }

    fn limited_slope(&self, i: usize) -> f64 {
        let n = self.values.len();
        if i == 0 || i == n - 1 {
            let (near, far) = if i == 0 {
                (self.secant(0), self.secant(1))
            } else {
                (self.secant(n - 2), self.secant(n - 3))
            };
            let d = 0.5 * (3.0 * near - far);
            if d * near <= 0.0 {
                return 0.0;
            }
            return d.signum() * d.abs().min(3.0 * near.abs());
        }
        let left = self.secant(i - 1);
        let right = self.secant(i);
        if left * right <= 0.0 {
            return 0.0;
        }
        let d = 0.5 * (left + right);
        d.signum() * d.abs().min(3.0 * left.abs().min(right.abs()))
    }

    /// Running integral `g(x_k) = ∫_0^{x_k} f` by composite Simpson over interval
    /// pairs; odd indices add a three-point rule for the trailing interval.
    pub fn cumulative_integral(&self) -> GridFunction {
        let f = &self.values;
        let h = self.grid.step();
        let n = f.len();
        let mut g = vec![0.0; n];
        g[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
        for k in 2..n {
            g[k] = if k % 2 == 0 {
                g[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k])
            } else {
                g[k - 1] + h / 12.0 * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k])
            };
        }
        GridFunction {
            grid: self.grid.clone(),
            values: g,
        }
    }

    /// `max_k |f(x_k) - g(x_k)|`.
    pub fn sup_norm_diff(&self, other: &GridFunction) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Pointwise map preserving the grid.
    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> Result<GridFunction> {
        let values = self
            .grid
            .points()
            .iter()
            .zip(&self.values)
            .map(|(&x, &v)| f(x, v))
            .collect();
        GridFunction::new(self.grid.clone(), values)
    }
}

pub fn eval(f: &GridFunction, x: f64) -> Result<f64> {
    f.eval(x)
}

pub fn sup_norm_diff(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    f.sup_norm_diff(g)
}

pub fn cumulative_integral(f: &GridFunction) -> GridFunction {
    f.cumulative_integral()
}
