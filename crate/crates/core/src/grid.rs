//! Polar discretization of the unit disk.
//!
//! Cells are annular sectors: radial cell edges come from the power-law map
//! `r(s) = 1 - (1-s)^refinement` of uniform `s`-edges, so spacing compresses
//! toward the rim.  Each ring carries one node at the radial centroid of its
//! cell (with respect to `r dr`), which makes the one-point cell quadrature
//! exact for integrands linear in `r`.  Angles are uniform with a half-cell
//! offset, so nodes never sit on the real axis or other common symmetry loci
//! (polynomial zeros placed on the axes never coincide with nodes).
//!
//! Node ordering is row-major over (radius, angle): `idx = i * n_theta + j`.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::green::GreenTable;
use num_complex::Complex64;

pub const TAU: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug)]
pub struct DiskGrid {
    pub n_r: usize,
    pub n_theta: usize,
    pub refinement: f64,
    /// Node radii, strictly increasing in (0,1).
    pub radii: Vec<f64>,
    /// Radial cell edges, length `n_r + 1`, from 0 to 1.
    pub r_edges: Vec<f64>,
    /// Node angles in (0, 2pi), uniform with half-cell offset.
    pub angles: Vec<f64>,
    /// Per-ring radial quadrature weight `(b^2 - a^2)/2`; the full node
    /// weight is `radial_weight[i] * dtheta`.
    pub radial_weight: Vec<f64>,
    /// Boundary sample angles (the same angles as the interior columns).
    pub boundary_angles: Vec<f64>,
    green: OnceLock<Arc<GreenTable>>,
}

impl PartialEq for DiskGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n_r == other.n_r
            && self.n_theta == other.n_theta
            && self.refinement == other.refinement
    }
}

/// Build a grid. `refinement >= 1` is the power-law exponent compressing
/// radial spacing toward `r = 1`.
pub fn make_grid(n_r: usize, n_theta: usize, refinement: f64) -> Result<Arc<DiskGrid>> {
    if n_r < 8 {
        return Err(Error::InvalidGrid(format!("n_r = {n_r} < 8")));
    }
    if n_theta < 16 {
        return Err(Error::InvalidGrid(format!("n_theta = {n_theta} < 16")));
    }
    if n_theta % 2 != 0 {
        return Err(Error::InvalidGrid(format!("n_theta = {n_theta} must be even")));
    }
    if !(refinement >= 1.0) || !refinement.is_finite() {
        return Err(Error::InvalidGrid(format!("refinement = {refinement} must be >= 1")));
    }
    let mut r_edges = Vec::with_capacity(n_r + 1);
    for k in 0..=n_r {
        let s = k as f64 / n_r as f64;
        r_edges.push(1.0 - (1.0 - s).powf(refinement));
    }
    r_edges[0] = 0.0;
    r_edges[n_r] = 1.0;
    let mut radii = Vec::with_capacity(n_r);
    let mut radial_weight = Vec::with_capacity(n_r);
    for i in 0..n_r {
        let (a, b) = (r_edges[i], r_edges[i + 1]);
        // centroid of the cell wrt r dr
        radii.push((2.0 / 3.0) * (b * b * b - a * a * a) / (b * b - a * a));
        radial_weight.push((b * b - a * a) / 2.0);
    }
    let dth = TAU / n_theta as f64;
    let angles: Vec<f64> = (0..n_theta).map(|j| (j as f64 + 0.5) * dth).collect();
    let grid = DiskGrid {
        n_r,
        n_theta,
        refinement,
        radii,
        r_edges,
        angles: angles.clone(),
        radial_weight,
        boundary_angles: angles,
        green: OnceLock::new(),
    };
    debug_assert!((grid.total_area() - std::f64::consts::PI).abs() < 1e-12);
    Ok(Arc::new(grid))
}

impl DiskGrid {
    pub fn n_nodes(&self) -> usize {
        self.n_r * self.n_theta
    }

    pub fn dtheta(&self) -> f64 {
        TAU / self.n_theta as f64
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n_theta + j
    }

    pub fn z(&self, i: usize, j: usize) -> Complex64 {
        Complex64::from_polar(self.radii[i], self.angles[j])
    }

    /// Area of the cell around node `(i, j)` (same for every `j`).
    pub fn cell_area(&self, i: usize) -> f64 {
        self.radial_weight[i] * self.dtheta()
    }

    pub fn total_area(&self) -> f64 {
        self.radial_weight.iter().sum::<f64>() * TAU
    }

    /// Quadrature of a nodal integrand over the disk. Deterministic
    /// summation order (ring-major).
    pub fn integrate(&self, mut f: impl FnMut(usize, usize, Complex64) -> f64) -> f64 {
        let dth = self.dtheta();
        let mut total = 0.0;
        for i in 0..self.n_r {
            let w = self.radial_weight[i] * dth;
            let mut ring = 0.0;
            for j in 0..self.n_theta {
                ring += f(i, j, self.z(i, j));
            }
            total += w * ring;
        }
        total
    }

    /// Largest radial spacing between consecutive nodes (including the gaps
    /// to 0 and to the rim).
    pub fn max_radial_spacing(&self) -> f64 {
        let mut h = self.radii[0].max(1.0 - self.radii[self.n_r - 1]);
        for i in 1..self.n_r {
            h = h.max(self.radii[i] - self.radii[i - 1]);
        }
        h
    }

    /// Grid-consistency scale `max(dr)^2 + dtheta^2`, the natural size of
    /// second-order discretization residue. Tolerances of the form
    /// `1e-6 + kappa * consistency_scale()` are used throughout.
    pub fn consistency_scale(&self) -> f64 {
        let h = self.max_radial_spacing();
        h * h + self.dtheta() * self.dtheta()
    }

    /// Ring index whose node radius is nearest to `r`.
    pub fn ring_nearest(&self, r: f64) -> usize {
        match self.radii.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) if i >= self.n_r => self.n_r - 1,
            Err(i) => {
                if r - self.radii[i - 1] <= self.radii[i] - r {
                    i - 1
                } else {
                    i
                }
            }
        }
    }

    /// Lazily built Green-kernel quadrature table for this grid.
    pub fn green_table(self: &Arc<Self>) -> Arc<GreenTable> {
        self.green
            .get_or_init(|| Arc::new(GreenTable::build(self)))
            .clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_disk_area() {
        // coarse grid: pi within 1e-2; refined grid: 1e-6 (both are in fact
        // exact up to rounding because cell areas are exact)
        let g = make_grid(8, 16, 1.0).unwrap();
        assert!((g.total_area() - std::f64::consts::PI).abs() < 1e-2);
        let g = make_grid(64, 128, 2.0).unwrap();
        assert!((g.total_area() - std::f64::consts::PI).abs() < 1e-6);
    }

    #[test]
    fn radii_increasing_in_open_interval() {
        let g = make_grid(32, 64, 2.5).unwrap();
        for i in 0..g.n_r {
            assert!(g.radii[i] > 0.0 && g.radii[i] < 1.0);
            if i > 0 {
                assert!(g.radii[i] > g.radii[i - 1]);
            }
        }
        assert!(g.angles.windows(2).all(|w| w[1] > w[0]));
        assert!(g.angles[g.n_theta - 1] - g.angles[0] < TAU);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(make_grid(4, 64, 1.0).is_err());
        assert!(make_grid(32, 15, 1.0).is_err());
        assert!(make_grid(32, 33, 1.0).is_err());
        assert!(make_grid(32, 8, 1.0).is_err());
        assert!(make_grid(32, 64, 0.5).is_err());
    }

    #[test]
    fn weight_integral_of_one_minus_r() {
        // 2pi * int_0^1 (1-r) r dr = pi/3, exact for the centroid rule
        let g = make_grid(64, 128, 2.0).unwrap();
        let q = g.integrate(|_, _, z| 1.0 - z.norm());
        assert!((q - std::f64::consts::PI / 3.0).abs() < 1e-4, "q = {q}");
    }

    #[test]
    fn monomial_quadrature_to_relative_1e4() {
        let g = make_grid(160, 64, 2.0).unwrap();
        for k in 0..=8 {
            let q = g.integrate(|_, _, z| z.norm().powi(k));
            let exact = TAU / (k as f64 + 2.0);
            assert!(
                ((q - exact) / exact).abs() < 1e-4,
                "k = {k}: {q} vs {exact}"
            );
        }
    }

    #[test]
    fn ring_nearest_picks_closest() {
        let g = make_grid(16, 16, 1.0).unwrap();
        for (i, &r) in g.radii.iter().enumerate() {
            assert_eq!(g.ring_nearest(r), i);
        }
        assert_eq!(g.ring_nearest(0.0), 0);
        assert_eq!(g.ring_nearest(1.0), g.n_r - 1);
    }
}
