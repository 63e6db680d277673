//! Green potentials of Blaschke measures on the disk.
//!
//! `G(z, zeta) = log |(1 - z conj(zeta)) / (z - zeta)|` and
//! `G_mu(z) = (1/2pi) int G(z, zeta) dmu(zeta)`.
//!
//! Density parts are integrated by the grid quadrature with the kernel
//! pre-tabulated per (target ring, source ring, angular offset) — the table
//! is rotation invariant, so one target angle suffices.  Entries near the
//! diagonal integrate the kernel over the source cell by local polar
//! subdivision (the logarithmic singularity gets an exact equal-area-disk
//! formula).  Point masses use the kernel formula directly.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::{DiskGrid, TAU};
use crate::holo::HoloFn;

pub fn green_kernel(z: Complex64, zeta: Complex64) -> f64 {
    ((1.0 - z * zeta.conj()).norm() / (z - zeta).norm()).ln()
}

/// Measure `mu` with a nonnegative density against area plus finitely many
/// point masses in the open disk.
#[derive(Debug, Clone)]
pub struct BlaschkeMeasureSpec {
    pub density: Density,
    pub point_masses: Vec<(Complex64, f64)>,
}

#[derive(Debug, Clone)]
pub enum Density {
    /// `|h|^2` times an optional nodal weight field.
    HoloModulusSq { h: HoloFn, weight: Option<ScalarField> },
    /// Explicit nodal density.
    Field(ScalarField),
    /// No density part (point masses only).
    None,
}

impl BlaschkeMeasureSpec {
    pub fn lebesgue(grid: Arc<DiskGrid>) -> BlaschkeMeasureSpec {
        BlaschkeMeasureSpec {
            density: Density::Field(ScalarField::constant(grid, 1.0)),
            point_masses: Vec::new(),
        }
    }

    pub fn point_mass(location: Complex64, mass: f64) -> BlaschkeMeasureSpec {
        BlaschkeMeasureSpec { density: Density::None, point_masses: vec![(location, mass)] }
    }

    pub fn from_field(density: ScalarField) -> BlaschkeMeasureSpec {
        BlaschkeMeasureSpec { density: Density::Field(density), point_masses: Vec::new() }
    }

    pub fn holo_sq(h: HoloFn) -> BlaschkeMeasureSpec {
        BlaschkeMeasureSpec {
            density: Density::HoloModulusSq { h, weight: None },
            point_masses: Vec::new(),
        }
    }

    pub fn holo_sq_weighted(h: HoloFn, weight: ScalarField) -> BlaschkeMeasureSpec {
        BlaschkeMeasureSpec {
            density: Density::HoloModulusSq { h, weight: Some(weight) },
            point_masses: Vec::new(),
        }
    }

    /// Nodal density values on `grid`, validated nonnegative and finite.
    pub fn density_values(&self, grid: &Arc<DiskGrid>) -> Result<Vec<f64>> {
        let vals = match &self.density {
            Density::None => vec![0.0; grid.n_nodes()],
            Density::Field(f) => {
                if *f.grid != **grid {
                    return Err(Error::GridMismatch("measure density grid".into()));
                }
                f.values.clone()
            }
            Density::HoloModulusSq { h, weight } => {
                if let Some(w) = weight {
                    if *w.grid != **grid {
                        return Err(Error::GridMismatch("measure weight grid".into()));
                    }
                }
                let mut out = Vec::with_capacity(grid.n_nodes());
                for i in 0..grid.n_r {
                    for j in 0..grid.n_theta {
                        let mut v = h.eval(grid.z(i, j)).norm_sqr();
                        if let Some(w) = weight {
                            v *= w.at(i, j);
                        }
                        out.push(v);
                    }
                }
                out
            }
        };
        for (k, &v) in vals.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::BadMeasure(format!("density not finite at node {k}")));
            }
            if v < 0.0 {
                return Err(Error::BadMeasure(format!("density negative at node {k}: {v}")));
            }
        }
        Ok(vals)
    }

    /// `int (1 - |z|^2) dmu`, the Blaschke-measure integrability check.
    pub fn blaschke_integral(&self, grid: &Arc<DiskGrid>) -> Result<f64> {
        let dens = self.density_values(grid)?;
        let mut total = 0.0;
        for i in 0..grid.n_r {
            let w = grid.cell_area(i);
            let moment = 1.0 - grid.radii[i] * grid.radii[i];
            for j in 0..grid.n_theta {
                total += w * moment * dens[grid.idx(i, j)];
            }
        }
        for &(loc, mass) in &self.point_masses {
            total += mass * (1.0 - loc.norm_sqr());
        }
        Ok(total)
    }

    fn validate(&self, grid: &Arc<DiskGrid>) -> Result<()> {
        for &(loc, mass) in &self.point_masses {
            if loc.norm() >= 1.0 {
                return Err(Error::BadMeasure(format!(
                    "point mass at {loc} lies outside the open disk"
                )));
            }
            if !(mass > 0.0) || !mass.is_finite() {
                return Err(Error::BadMeasure(format!("point mass must be positive, got {mass}")));
            }
        }
        let integral = self.blaschke_integral(grid)?;
        if !integral.is_finite() || integral > 1e14 {
            return Err(Error::BadMeasure(format!(
                "Blaschke integral diverges: {integral}"
            )));
        }
        Ok(())
    }
}

/// Precomputed kernel quadrature: `table[(i*n_r + k)*n_theta + d]` is the
/// potential at node `(i, j)` of a unit density on the cell `(k, j + d)`,
/// including the `1/(2pi)` factor and the cell area.
#[derive(Debug)]
pub struct GreenTable {
    n_r: usize,
    n_theta: usize,
    table: Vec<f64>,
}

const NEAR_RINGS: isize = 2;
const NEAR_ANGLES: isize = 2;
const SUBDIV: usize = 6;

impl GreenTable {
    pub fn build(grid: &Arc<DiskGrid>) -> GreenTable {
        let (n_r, n_t) = (grid.n_r, grid.n_theta);
        let dth = grid.dtheta();
        let mut table = vec![0.0; n_r * n_r * n_t];
        for i in 0..n_r {
            let z = Complex64::from_polar(grid.radii[i], grid.angles[0]);
            for k in 0..n_r {
                let area = grid.cell_area(k);
                let row = (i * n_r + k) * n_t;
                for d in 0..n_t {
                    let zeta = Complex64::from_polar(grid.radii[k], grid.angles[0] + d as f64 * dth);
                    table[row + d] = green_kernel(z, zeta) * area / TAU;
                }
                // refine near-diagonal entries
                if (i as isize - k as isize).abs() <= NEAR_RINGS {
                    for doff in -NEAR_ANGLES..=NEAR_ANGLES {
                        let d = doff.rem_euclid(n_t as isize) as usize;
                        let theta_c = grid.angles[0] + doff as f64 * dth;
                        table[row + d] = cell_integral(grid, z, k, theta_c) / TAU;
                    }
                }
            }
        }
        GreenTable { n_r, n_theta: n_t, table }
    }

    /// Potential of a nodal density (no point masses): deterministic
    /// ring-major accumulation.
    pub fn apply(&self, density: &[f64]) -> Vec<f64> {
        let (n_r, n_t) = (self.n_r, self.n_theta);
        let mut out = vec![0.0; n_r * n_t];
        for i in 0..n_r {
            for k in 0..n_r {
                let row = &self.table[(i * n_r + k) * n_t..(i * n_r + k + 1) * n_t];
                let ring = &density[k * n_t..(k + 1) * n_t];
                for j in 0..n_t {
                    let mut acc = 0.0;
                    // d-loop split so the source index never wraps mid-loop
                    let head = n_t - j;
                    for d in 0..head {
                        acc += row[d] * ring[j + d];
                    }
                    for d in head..n_t {
                        acc += row[d] * ring[j + d - n_t];
                    }
                    out[i * n_t + j] += acc;
                }
            }
        }
        out
    }
}

/// Integral of `G(z, .)` over the annular-sector cell at ring `k` centered
/// on angle `theta_c`, by `SUBDIV x SUBDIV` polar subdivision; the subcell
/// containing `z` uses the equal-area-disk formula for the log singularity.
fn cell_integral(grid: &DiskGrid, z: Complex64, k: usize, theta_c: f64) -> f64 {
    let (a, b) = (grid.r_edges[k], grid.r_edges[k + 1]);
    let dth = grid.dtheta();
    let m = SUBDIV;
    let mut total = 0.0;
    for p in 0..m {
        let ra = a + (b - a) * p as f64 / m as f64;
        let rb = a + (b - a) * (p + 1) as f64 / m as f64;
        let rc = if rb > ra {
            (2.0 / 3.0) * (rb * rb * rb - ra * ra * ra) / (rb * rb - ra * ra)
        } else {
            ra
        };
        let radial_mass = (rb * rb - ra * ra) / 2.0;
        for q in 0..m {
            let tc = theta_c + dth * ((q as f64 + 0.5) / m as f64 - 0.5);
            let zeta = Complex64::from_polar(rc, tc);
            let sub_area = radial_mass * dth / m as f64;
            let dist2 = (z - zeta).norm_sqr();
            if dist2 * std::f64::consts::PI < sub_area {
                // singular subcell: int_{|w|<rho} log(1/|w|) dA = pi rho^2 (log(1/rho) + 1/2)
                let rho = (sub_area / std::f64::consts::PI).sqrt();
                total += (1.0 - z * zeta.conj()).norm().ln() * sub_area
                    + sub_area * ((1.0 / rho).ln() + 0.5);
            } else {
                total += green_kernel(z, zeta) * sub_area;
            }
        }
    }
    total
}

/// `G_mu` on the grid. Boundary trace is identically zero.
pub fn green_potential(mu: &BlaschkeMeasureSpec, grid: &Arc<DiskGrid>) -> Result<ScalarField> {
    mu.validate(grid)?;
    let dens = mu.density_values(grid)?;
    let table = grid.green_table();
    let mut values = table.apply(&dens);
    for &(loc, mass) in &mu.point_masses {
        for i in 0..grid.n_r {
            for j in 0..grid.n_theta {
                values[grid.idx(i, j)] += mass / TAU * green_kernel(grid.z(i, j), loc);
            }
        }
    }
    ScalarField::new(grid.clone(), values, Some(vec![0.0; grid.n_theta]))
}

/// `G_mu(z)` at an arbitrary point of the open disk (direct quadrature with
/// on-the-fly near-cell refinement; used for off-node probes).
pub fn green_potential_at(mu: &BlaschkeMeasureSpec, grid: &Arc<DiskGrid>, z: Complex64) -> Result<f64> {
    if z.norm() >= 1.0 {
        return Err(Error::InvalidInput("potential probe must lie in the open disk".into()));
    }
    mu.validate(grid)?;
    let dens = mu.density_values(grid)?;
    let dth = grid.dtheta();
    let mut total = 0.0;
    for k in 0..grid.n_r {
        let area = grid.cell_area(k);
        let diam = (grid.r_edges[k + 1] - grid.r_edges[k]).hypot(grid.radii[k] * dth);
        for j in 0..grid.n_theta {
            let zeta = grid.z(k, j);
            let d = dens[grid.idx(k, j)];
            if d == 0.0 {
                continue;
            }
            if (z - zeta).norm() <= 2.5 * diam {
                total += d * cell_integral(grid, z, k, grid.angles[j]) / TAU;
            } else {
                total += d * green_kernel(z, zeta) * area / TAU;
            }
        }
    }
    for &(loc, mass) in &mu.point_masses {
        total += mass / TAU * green_kernel(z, loc);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn lebesgue_density_gives_quarter_paraboloid() {
        // Delta((1 - |z|^2)/4) = -1 with zero trace
        let g = make_grid(48, 96, 2.0).unwrap();
        let mu = BlaschkeMeasureSpec::lebesgue(g.clone());
        let pot = green_potential(&mu, &g).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..g.n_r {
            let exact = (1.0 - g.radii[i] * g.radii[i]) / 4.0;
            for j in 0..g.n_theta {
                worst = worst.max((pot.at(i, j) - exact).abs());
            }
        }
        assert!(worst < 1e-3, "worst = {worst}");
    }

    #[test]
    fn unit_point_mass_at_zero_is_exact() {
        let g = make_grid(24, 32, 1.5).unwrap();
        let mu = BlaschkeMeasureSpec::point_mass(Complex64::new(0.0, 0.0), 1.0);
        let pot = green_potential(&mu, &g).unwrap();
        for i in 0..g.n_r {
            let exact = (1.0 / g.radii[i]).ln() / TAU;
            for j in 0..g.n_theta {
                assert!((pot.at(i, j) - exact).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn moment_density_value_at_origin() {
        // mu = |zeta|^2 dA: G_mu(0) = int_0^1 r^3 log(1/r) dr = 1/16
        let g = make_grid(48, 96, 2.0).unwrap();
        let mu = BlaschkeMeasureSpec::holo_sq(HoloFn::poly_from_real(&[0.0, 1.0]));
        let v = green_potential_at(&mu, &g, Complex64::new(0.0, 0.0)).unwrap();
        assert!((v - 1.0 / 16.0).abs() < 1e-3, "v = {v}");
    }

    #[test]
    fn rejects_bad_measures() {
        let g = make_grid(16, 16, 1.0).unwrap();
        let mu = BlaschkeMeasureSpec::point_mass(Complex64::new(1.2, 0.0), 1.0);
        assert!(green_potential(&mu, &g).is_err());
        let mu = BlaschkeMeasureSpec::point_mass(Complex64::new(0.2, 0.0), -1.0);
        assert!(green_potential(&mu, &g).is_err());
        let mut f = ScalarField::constant(g.clone(), 1.0);
        f.values[3] = -2.0;
        let mu = BlaschkeMeasureSpec::from_field(f);
        assert!(green_potential(&mu, &g).is_err());
    }

    #[test]
    fn linearity_and_sign() {
        let g = make_grid(24, 32, 1.5).unwrap();
        let f1 = ScalarField::from_fn(g.clone(), |z| 1.0 + z.re);
        let f2 = ScalarField::from_fn(g.clone(), |z| z.norm_sqr());
        let (a, b) = (0.7, 1.3);
        let combo = f1.zip_with(&f2, |x, y| a * x + b * y).unwrap();
        let p1 = green_potential(&BlaschkeMeasureSpec::from_field(f1), &g).unwrap();
        let p2 = green_potential(&BlaschkeMeasureSpec::from_field(f2), &g).unwrap();
        let pc = green_potential(&BlaschkeMeasureSpec::from_field(combo), &g).unwrap();
        for k in 0..g.n_nodes() {
            let lin = a * p1.values[k] + b * p2.values[k];
            assert!((pc.values[k] - lin).abs() < 1e-12 * (1.0 + lin.abs()));
            assert!(p1.values[k] >= 0.0 && p2.values[k] >= 0.0);
        }
    }
}
