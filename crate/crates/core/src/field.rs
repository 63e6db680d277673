//! Real-valued grid functions.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::DiskGrid;
use crate::io::fmt_f64;

/// A real function sampled at the interior nodes of a [`DiskGrid`], with an
/// optional trace on the boundary ring.  Fields with no finite boundary
/// limit (e.g. `log(2/(1-|z|^2))`) carry `boundary_trace = None`.
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub grid: Arc<DiskGrid>,
    /// Interior values, row-major over (radius, angle).
    pub values: Vec<f64>,
    /// Values on the boundary ring `r = 1`, per boundary angle.
    pub boundary_trace: Option<Vec<f64>>,
}

impl ScalarField {
    pub fn new(grid: Arc<DiskGrid>, values: Vec<f64>, boundary_trace: Option<Vec<f64>>) -> Result<Self> {
        if values.len() != grid.n_nodes() {
            return Err(Error::InvalidInput(format!(
                "field has {} values for a grid with {} nodes",
                values.len(),
                grid.n_nodes()
            )));
        }
        if let Some(b) = &boundary_trace {
            if b.len() != grid.n_theta {
                return Err(Error::InvalidInput(format!(
                    "boundary trace has {} samples, expected {}",
                    b.len(),
                    grid.n_theta
                )));
            }
        }
        let f = ScalarField { grid, values, boundary_trace };
        f.check_finite()?;
        Ok(f)
    }

    pub fn constant(grid: Arc<DiskGrid>, c: f64) -> Self {
        let n = grid.n_nodes();
        let nb = grid.n_theta;
        ScalarField {
            grid,
            values: vec![c; n],
            boundary_trace: Some(vec![c; nb]),
        }
    }

    /// Build from a pointwise function of the node position.
    pub fn from_fn(grid: Arc<DiskGrid>, mut f: impl FnMut(num_complex::Complex64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.n_nodes());
        for i in 0..grid.n_r {
            for j in 0..grid.n_theta {
                values.push(f(grid.z(i, j)));
            }
        }
        ScalarField { grid, values, boundary_trace: None }
    }

    pub fn check_finite(&self) -> Result<()> {
        if let Some(k) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("interior value at node {k}")));
        }
        if let Some(b) = &self.boundary_trace {
            if let Some(k) = b.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("boundary value at angle index {k}")));
            }
        }
        Ok(())
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    pub fn same_grid(&self, other: &ScalarField) -> Result<()> {
        if *self.grid != *other.grid {
            return Err(Error::GridMismatch(format!(
                "({}x{}, p={}) vs ({}x{}, p={})",
                self.grid.n_r, self.grid.n_theta, self.grid.refinement,
                other.grid.n_r, other.grid.n_theta, other.grid.refinement
            )));
        }
        Ok(())
    }

    /// Pointwise combination with another field on the same grid.
    pub fn zip_with(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Result<ScalarField> {
        self.same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        let boundary_trace = match (&self.boundary_trace, &other.boundary_trace) {
            (Some(a), Some(b)) => Some(a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()),
            _ => None,
        };
        Ok(ScalarField { grid: self.grid.clone(), values, boundary_trace })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        ScalarField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            boundary_trace: self.boundary_trace.as_ref().map(|b| b.iter().map(|&v| f(v)).collect()),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, &v| m.max(v.abs()))
    }

    /// Max of `self - other` over interior nodes.
    pub fn max_diff(&self, other: &ScalarField) -> Result<f64> {
        self.same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(f64::NEG_INFINITY, |m, (&a, &b)| m.max(a - b)))
    }

    /// Sup-norm of `self - other` restricted to nodes with `|z| <= rho`.
    pub fn max_abs_diff_on(&self, other: &ScalarField, rho: f64) -> Result<f64> {
        self.same_grid(other)?;
        let mut m: f64 = 0.0;
        for i in 0..self.grid.n_r {
            if self.grid.radii[i] > rho {
                break;
            }
            for j in 0..self.grid.n_theta {
                m = m.max((self.at(i, j) - other.at(i, j)).abs());
            }
        }
        Ok(m)
    }

    /// Interior nodes where `self > other + eps`, as `(i, j, excess)`.
    pub fn violations_above(&self, other: &ScalarField, eps: f64) -> Result<Vec<(usize, usize, f64)>> {
        self.same_grid(other)?;
        let mut out = Vec::new();
        for i in 0..self.grid.n_r {
            for j in 0..self.grid.n_theta {
                let d = self.at(i, j) - other.at(i, j);
                if d > eps {
                    out.push((i, j, d));
                }
            }
        }
        Ok(out)
    }

    /// CSV serialization: header `r,theta,x,y,value`, row-major over
    /// (radius, angle), 17 significant digits.  A boundary trace, when
    /// present, is appended as the final `r = 1` block.
    pub fn to_csv(&self) -> String {
        let g = &self.grid;
        let mut s = String::with_capacity(64 * (g.n_nodes() + g.n_theta + 1));
        s.push_str("r,theta,x,y,value\n");
        for i in 0..g.n_r {
            for j in 0..g.n_theta {
                let z = g.z(i, j);
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt_f64(g.radii[i]),
                    fmt_f64(g.angles[j]),
                    fmt_f64(z.re),
                    fmt_f64(z.im),
                    fmt_f64(self.at(i, j)),
                ));
            }
        }
        if let Some(b) = &self.boundary_trace {
            for (j, &v) in b.iter().enumerate() {
                let th = g.boundary_angles[j];
                s.push_str(&format!(
                    "1,{},{},{},{}\n",
                    fmt_f64(th),
                    fmt_f64(th.cos()),
                    fmt_f64(th.sin()),
                    fmt_f64(v),
                ));
            }
        }
        s
    }

    /// Parse the CSV produced by [`to_csv`] back onto the given grid.
    pub fn from_csv(grid: Arc<DiskGrid>, text: &str) -> Result<ScalarField> {
        let mut values = Vec::with_capacity(grid.n_nodes());
        let mut boundary = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            if ln == 0 {
                if line.trim() != "r,theta,x,y,value" {
                    return Err(Error::Parse(format!("unexpected CSV header: {line}")));
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 5 {
                return Err(Error::Parse(format!("line {}: expected 5 columns", ln + 1)));
            }
            let r: f64 = cols[0].parse().map_err(|_| Error::Parse(format!("line {}: bad r", ln + 1)))?;
            let v: f64 = cols[4].parse().map_err(|_| Error::Parse(format!("line {}: bad value", ln + 1)))?;
            if r < 1.0 {
                values.push(v);
            } else {
                boundary.push(v);
            }
        }
        let boundary_trace = if boundary.is_empty() { None } else { Some(boundary) };
        ScalarField::new(grid, values, boundary_trace)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn csv_round_trip() {
        let g = make_grid(8, 16, 1.5).unwrap();
        let f = ScalarField::from_fn(g.clone(), |z| (z.re * 3.0).sin() + z.im);
        let f = ScalarField {
            boundary_trace: Some(g.boundary_angles.iter().map(|t| t.cos()).collect()),
            ..f
        };
        let text = f.to_csv();
        let f2 = ScalarField::from_csv(g, &text).unwrap();
        assert_eq!(f.values, f2.values);
        assert_eq!(f.boundary_trace, f2.boundary_trace);
    }

    #[test]
    fn rejects_non_finite() {
        let g = make_grid(8, 16, 1.0).unwrap();
        let mut v = vec![0.0; g.n_nodes()];
        v[3] = f64::NAN;
        assert!(ScalarField::new(g, v, None).is_err());
    }

    #[test]
    fn comparability_requires_same_grid() {
        let g1 = make_grid(8, 16, 1.0).unwrap();
        let g2 = make_grid(8, 16, 2.0).unwrap();
        let a = ScalarField::constant(g1, 1.0);
        let b = ScalarField::constant(g2, 2.0);
        assert!(a.max_diff(&b).is_err());
    }
}
