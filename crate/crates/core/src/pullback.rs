//! Pullback of the hyperbolic metric under a holomorphic self-map:
//! `lambda_F = 2|F'| / (1 - |F|^2)`, and the weighted field
//! `u = log lambda_F - log |H|`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::DiskGrid;
use crate::holo::HoloFn;
use crate::laplacian::PolarLaplacian;

#[derive(Debug, Clone)]
pub struct PullbackMetric {
    pub base: HoloFn,
    pub weight: Option<HoloFn>,
    /// `u = log(2|F'|/(1-|F|^2)) - log|H|` (H = 1 when absent). No boundary
    /// trace: the unweighted part diverges at the rim for inner maps.
    pub u_field: ScalarField,
}

/// Build the pullback field on the grid.  Fails if `F` is not a strict
/// self-map at some interior node.
pub fn pullback(base: &HoloFn, weight: Option<&HoloFn>, grid: &Arc<DiskGrid>) -> Result<PullbackMetric> {
    base.validate()?;
    if let Some(h) = weight {
        h.validate()?;
    }
    let mut values = Vec::with_capacity(grid.n_nodes());
    for i in 0..grid.n_r {
        for j in 0..grid.n_theta {
            let z = grid.z(i, j);
            let fz = base.eval(z);
            if fz.norm() >= 1.0 {
                return Err(Error::NotSelfMap(format!(
                    "|F({z})| = {} at an interior node",
                    fz.norm()
                )));
            }
            let df = base.derivative(z);
            let lam = 2.0 * df.norm() / (1.0 - fz.norm_sqr());
            let mut u = lam.ln();
            if let Some(h) = weight {
                u -= h.eval(z).norm().ln();
            }
            values.push(u);
        }
    }
    let u_field = ScalarField::new(grid.clone(), values, None)?;
    Ok(PullbackMetric {
        base: base.clone(),
        weight: weight.cloned(),
        u_field,
    })
}

impl PullbackMetric {
    /// `log lambda_F` (weight added back).
    pub fn log_lambda(&self) -> ScalarField {
        match &self.weight {
            None => self.u_field.clone(),
            Some(h) => {
                let g = &self.u_field.grid;
                let mut values = Vec::with_capacity(g.n_nodes());
                for i in 0..g.n_r {
                    for j in 0..g.n_theta {
                        values.push(self.u_field.at(i, j) + h.eval(g.z(i, j)).norm().ln());
                    }
                }
                ScalarField { grid: g.clone(), values, boundary_trace: None }
            }
        }
    }

    /// Worst deviation of the discrete curvature `-Lap(log lambda)/lambda^2`
    /// from -1, over nodes with `|z| <= r_max` at distance `>= excl_dist`
    /// from each point of `exclude` (critical points, where the curvature
    /// carries delta masses).
    pub fn curvature_defect(&self, exclude: &[Complex64], excl_dist: f64, r_max: f64) -> Result<f64> {
        let g = &self.u_field.grid;
        let w = self.log_lambda();
        let lap = PolarLaplacian::new(g.clone());
        let (vals, rings) = lap.laplacian(&w)?;
        let mut worst: f64 = 0.0;
        for i in 0..rings.saturating_sub(1) {
            if g.radii[i] > r_max {
                break;
            }
            for j in 0..g.n_theta {
                let z = g.z(i, j);
                if exclude.iter().any(|&c| (z - c).norm() < excl_dist) {
                    continue;
                }
                let lam2 = (2.0 * w.at(i, j)).exp();
                let k = -vals[g.idx(i, j)] / lam2;
                worst = worst.max((k + 1.0).abs());
            }
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::BlaschkeProduct;
    use crate::grid::make_grid;
    use crate::poly::ZERO;

    #[test]
    fn identity_pullback_is_poincare() {
        let g = make_grid(32, 64, 1.5).unwrap();
        let id = HoloFn::Blaschke(BlaschkeProduct::identity());
        let pb = pullback(&id, None, &g).unwrap();
        // u(0) ~ log 2 (no node exactly at 0; check the innermost ring)
        let r0 = g.radii[0];
        let want = (2.0 / (1.0 - r0 * r0)).ln();
        assert!((pb.u_field.at(0, 0) - want).abs() < 1e-12);
        for i in 0..g.n_r {
            for j in 0..g.n_theta {
                let r = g.radii[i];
                let want = (2.0 / (1.0 - r * r)).ln();
                assert!((pb.u_field.at(i, j) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn square_pullback_formulas() {
        let g = make_grid(32, 64, 1.5).unwrap();
        let sq = HoloFn::Blaschke(BlaschkeProduct::power(2));
        // unweighted: u = log(4|z|/(1-|z|^4))
        let pb = pullback(&sq, None, &g).unwrap();
        for i in [0usize, 10, 25] {
            let r = g.radii[i];
            let want = (4.0 * r / (1.0 - r.powi(4))).ln();
            assert!((pb.u_field.at(i, 3) - want).abs() < 1e-12);
        }
        // weighted by H = 2z: u = log(2/(1-|z|^4)), finite at 0
        let h = HoloFn::poly_from_real(&[0.0, 2.0]);
        let pbw = pullback(&sq, Some(&h), &g).unwrap();
        for i in [0usize, 10, 25] {
            let r = g.radii[i];
            let want = (2.0 / (1.0 - r.powi(4))).ln();
            assert!((pbw.u_field.at(i, 3) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_self_map() {
        let g = make_grid(16, 16, 1.0).unwrap();
        let f = HoloFn::poly_from_real(&[0.0, 2.0]); // |2z| >= 1 inside
        assert!(pullback(&f, None, &g).is_err());
    }

    #[test]
    fn curvature_is_minus_one_off_critical_points() {
        let g = make_grid(96, 192, 2.0).unwrap();
        let b = BlaschkeProduct::new(
            vec![ZERO, Complex64::new(0.4, 0.1), Complex64::new(-0.2, 0.3)],
            0.7,
        )
        .unwrap();
        let crit = b.critical_points().unwrap();
        let pb = pullback(&HoloFn::Blaschke(b), None, &g).unwrap();
        let defect = pb.curvature_defect(&crit, 0.1, 0.99).unwrap();
        assert!(defect <= 0.05, "curvature defect {defect}");
    }

    #[test]
    fn schwarz_pick_bound() {
        let g = make_grid(32, 64, 2.0).unwrap();
        let b = BlaschkeProduct::new(vec![Complex64::new(0.3, -0.2), ZERO], 1.1).unwrap();
        let pb = pullback(&HoloFn::Blaschke(b), None, &g).unwrap();
        for i in 0..g.n_r {
            let lam_d = (2.0 / (1.0 - g.radii[i] * g.radii[i])).ln();
            for j in 0..g.n_theta {
                assert!(pb.u_field.at(i, j) <= lam_d + 1e-12);
            }
        }
    }
}
