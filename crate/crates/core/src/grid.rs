use crate::error::{Error, Result};

/// Samples of a function on `n` uniform nodes spanning `[x_min, x_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    x_min: f64,
    x_max: f64,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(x_min: f64, x_max: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::domain(format!(
                "grid needs at least 2 nodes, got {}",
                values.len()
            )));
        }
        if !(x_min < x_max) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::domain(format!(
                "grid needs x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!(
                "grid value {i} is not finite: {}",
                values[i]
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            values,
        })
    }

    pub fn sample<F: Fn(f64) -> f64>(x_min: f64, x_max: f64, n: usize, f: F) -> Result<Self> {
        if n < 2 || !(x_min < x_max) {
            return Err(Error::domain(format!(
                "invalid grid [{x_min}, {x_max}] with {n} nodes"
            )));
        }
        let h = (x_max - x_min) / (n - 1) as f64;
        let values = (0..n).map(|i| f(x_min + h * i as f64)).collect();
        Self::new(x_min, x_max, values)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n() - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n() {
            self.x_max
        } else {
            self.x_min + self.spacing() * i as f64
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n()).map(move |i| self.node(i))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Local cubic (four-point Lagrange) interpolation; stencils are
    /// shifted inward at the ends.
    pub fn interpolate(&self, x: f64) -> Result<f64> {
        if !(x >= self.x_min && x <= self.x_max) {
            return Err(Error::domain(format!(
                "x = {x} outside grid [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        let n = self.n();
        if n < 4 {
            // linear fallback
            let h = self.spacing();
            let i = (((x - self.x_min) / h) as usize).min(n - 2);
            let s = (x - self.node(i)) / h;
            return Ok(self.values[i] * (1.0 - s) + self.values[i + 1] * s);
        }
        let h = self.spacing();
        let pos = (x - self.x_min) / h;
        let i = (pos.floor() as isize).clamp(1, n as isize - 3) as usize;
        let s = pos - i as f64;
        let (p0, p1, p2, p3) = (
            self.values[i - 1],
            self.values[i],
            self.values[i + 1],
            self.values[i + 2],
        );
        // Lagrange basis on nodes -1, 0, 1, 2
        let l0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
        let l1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
        let l2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
        let l3 = (s + 1.0) * s * (s - 1.0) / 6.0;
        Ok(p0 * l0 + p1 * l1 + p2 * l2 + p3 * l3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(GridFunction::new(0.0, 1.0, vec![1.0]).is_err());
        assert!(GridFunction::new(1.0, 1.0, vec![1.0, 2.0]).is_err());
        assert!(GridFunction::new(0.0, 1.0, vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn cubic_interpolation_is_exact_on_cubics() {
        let f = |x: f64| 0.5 * x * x * x - x * x + 3.0;
        let g = GridFunction::sample(-2.0, 3.0, 11, f).unwrap();
        for x in [-2.0, -1.93, 0.0, 0.77, 2.99, 3.0] {
            assert!((g.interpolate(x).unwrap() - f(x)).abs() < 1e-12, "x={x}");
        }
        assert!(g.interpolate(3.1).is_err());
    }

    #[test]
    fn last_node_is_exact() {
        let g = GridFunction::sample(-0.3, 0.7, 7, |x| x).unwrap();
        assert_eq!(g.node(6), 0.7);
        assert_eq!(g.nodes().count(), 7);
    }
}
