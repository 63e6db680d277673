//! Boundary-driven constructions: harmonic extension, outer functions,
//! Bergman norms, and the Littlewood-Paley identity.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::{DiskGrid, TAU};
use crate::holo::{HoloFn, OuterFn};

/// Boundary data sampled at the grid's boundary angles.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryData {
    Constant(f64),
    Samples(Vec<f64>),
}

impl BoundaryData {
    pub fn values(&self, grid: &DiskGrid) -> Result<Vec<f64>> {
        let vals = match self {
            BoundaryData::Constant(c) => vec![*c; grid.n_theta],
            BoundaryData::Samples(s) => {
                if s.len() != grid.n_theta {
                    return Err(Error::InvalidInput(format!(
                        "boundary data has {} samples, grid has {} boundary angles",
                        s.len(),
                        grid.n_theta
                    )));
                }
                s.clone()
            }
        };
        if let Some(k) = vals.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("boundary sample {k}")));
        }
        Ok(vals)
    }
}

/// Fourier coefficients of real samples at half-offset angles: `c_0` real,
/// `c_k` folded with factor 2 below Nyquist (shared by the harmonic
/// extension and the outer construction).
fn folded_coefficients(samples: &[f64]) -> Vec<Complex64> {
    let n = samples.len();
    let half = n / 2;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); half + 1];
    for (k, slot) in coeffs.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &s) in samples.iter().enumerate() {
            let t = (j as f64 + 0.5) * TAU / n as f64;
            acc += s * Complex64::from_polar(1.0, -(k as f64) * t);
        }
        acc /= n as f64;
        *slot = match k {
            0 => Complex64::new(acc.re, 0.0),
            k if k == half => acc,
            _ => acc * 2.0,
        };
    }
    coeffs
}

/// Harmonic extension of boundary data: the band-limited Poisson sum
/// `P_h(r e^{i th}) = sum_k Re(c_k r^k e^{i k th})` of the trigonometric
/// interpolant of the samples.
pub fn poisson_extend(h: &BoundaryData, grid: &Arc<DiskGrid>) -> Result<ScalarField> {
    let samples = h.values(grid)?;
    if let BoundaryData::Constant(c) = h {
        return Ok(ScalarField::constant(grid.clone(), *c));
    }
    let coeffs = folded_coefficients(&samples);
    let mut values = Vec::with_capacity(grid.n_nodes());
    for i in 0..grid.n_r {
        let r = grid.radii[i];
        // r^k by running product per ring
        for j in 0..grid.n_theta {
            let e = Complex64::from_polar(1.0, grid.angles[j]);
            let mut zk = Complex64::new(1.0, 0.0); // (r e^{i th})^k
            let mut v = coeffs[0].re;
            for &c in coeffs.iter().skip(1) {
                zk *= r * e;
                v += (c * zk).re;
            }
            values.push(v);
        }
    }
    ScalarField::new(grid.clone(), values, Some(samples))
}

/// The outer function with prescribed positive boundary modulus, sampled at
/// the grid's boundary angles.
pub fn outer_function(w: &[f64], grid: &Arc<DiskGrid>) -> Result<HoloFn> {
    if w.len() != grid.n_theta {
        return Err(Error::InvalidInput(format!(
            "outer modulus has {} samples, grid has {} boundary angles",
            w.len(),
            grid.n_theta
        )));
    }
    Ok(HoloFn::Outer(OuterFn::from_modulus(w)?))
}

/// Weighted Bergman norm `(int |f|^p (1-|z|)^alpha dA)^{1/p}` by grid
/// quadrature.
pub fn bergman_norm(f: &HoloFn, p: f64, alpha: f64, grid: &Arc<DiskGrid>) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::InvalidInput(format!("bergman_norm needs p > 0, got {p}")));
    }
    if !(alpha > -1.0) {
        return Err(Error::InvalidInput(format!("bergman_norm needs alpha > -1, got {alpha}")));
    }
    let integral = grid.integrate(|_, _, z| f.eval(z).norm().powf(p) * (1.0 - z.norm()).powf(alpha));
    Ok(integral.powf(1.0 / p))
}

/// Littlewood-Paley identity: returns `(lhs, rhs)` where
/// `lhs = ||f||_{H^2}^2` by boundary quadrature and
/// `rhs = |f(0)|^2 + (2/pi) int |f'|^2 log(1/|z|) dA`.
///
/// The constant `2/pi` is pinned by the monomial oracle under the
/// conventions used here: `H^2` norm against `dtheta/2pi` and Lebesgue area
/// measure (`int_0^1 r^{2n-1} log(1/r) dr = 1/(4 n^2)`, so `f = z^n` gives
/// `lhs = rhs = 1`).
pub fn littlewood_paley(f: &HoloFn, grid: &Arc<DiskGrid>) -> Result<(f64, f64)> {
    f.validate()?;
    if matches!(f, HoloFn::Outer(_)) {
        return Err(Error::InvalidInput(
            "littlewood_paley expects a polynomial or rational function".into(),
        ));
    }
    let n = grid.n_theta;
    let mut lhs = 0.0;
    for j in 0..n {
        let z = Complex64::from_polar(1.0, grid.boundary_angles[j]);
        lhs += f.eval(z).norm_sqr();
    }
    lhs /= n as f64;
    let integral = grid.integrate(|_, _, z| {
        f.derivative(z).norm_sqr() * (1.0 / z.norm()).ln()
    });
    let rhs = f.eval(Complex64::new(0.0, 0.0)).norm_sqr()
        + 2.0 / std::f64::consts::PI * integral;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn constants_are_harmonic() {
        let g = make_grid(16, 32, 2.0).unwrap();
        let p = poisson_extend(&BoundaryData::Constant(3.0), &g).unwrap();
        assert!(p.values.iter().all(|&v| (v - 3.0).abs() < 1e-14));
        assert_eq!(p.boundary_trace.as_ref().unwrap()[0], 3.0);
    }

    #[test]
    fn cos_theta_extends_to_re_z() {
        let g = make_grid(32, 64, 2.0).unwrap();
        let h = BoundaryData::Samples(g.boundary_angles.iter().map(|t| t.cos()).collect());
        let p = poisson_extend(&h, &g).unwrap();
        for i in 0..g.n_r {
            for j in 0..g.n_theta {
                let z = g.z(i, j);
                assert!((p.at(i, j) - z.re).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn cos_2theta_extends_to_re_z2() {
        let g = make_grid(64, 128, 2.0).unwrap();
        let h = BoundaryData::Samples(g.boundary_angles.iter().map(|t| (2.0 * t).cos()).collect());
        let p = poisson_extend(&h, &g).unwrap();
        for i in 0..g.n_r {
            for j in 0..g.n_theta {
                let z = g.z(i, j);
                let want = (z * z).re;
                assert!((p.at(i, j) - want).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn rejects_non_finite_boundary() {
        let g = make_grid(16, 32, 1.0).unwrap();
        let mut s = vec![0.0; 32];
        s[5] = f64::INFINITY;
        assert!(poisson_extend(&BoundaryData::Samples(s), &g).is_err());
    }

    #[test]
    fn bergman_norms_match_radial_integrals() {
        let g = make_grid(96, 32, 2.0).unwrap();
        // f = 1, p = 2, alpha = 1: sqrt(2pi int (1-r) r dr) = sqrt(pi/3)
        let n1 = bergman_norm(&HoloFn::constant(1.0), 2.0, 1.0, &g).unwrap();
        assert!((n1 - (std::f64::consts::PI / 3.0).sqrt()).abs() < 1e-4, "{n1}");
        // f = z: sqrt(2pi int r^3 (1-r) dr) = sqrt(pi/10)
        let n2 = bergman_norm(&HoloFn::poly_from_real(&[0.0, 1.0]), 2.0, 1.0, &g).unwrap();
        assert!((n2 - (std::f64::consts::PI / 10.0).sqrt()).abs() < 1e-4, "{n2}");
        // f = 0
        let n3 = bergman_norm(&HoloFn::Poly(crate::poly::Poly::from_real(&[0.0])), 2.0, 1.0, &g).unwrap();
        assert_eq!(n3, 0.0);
        assert!(bergman_norm(&HoloFn::constant(1.0), 0.0, 1.0, &g).is_err());
        assert!(bergman_norm(&HoloFn::constant(1.0), 2.0, -1.0, &g).is_err());
    }

    #[test]
    fn littlewood_paley_examples() {
        let g = make_grid(128, 64, 2.0).unwrap();
        // f = z: both sides 1
        let (l, r) = littlewood_paley(&HoloFn::poly_from_real(&[0.0, 1.0]), &g).unwrap();
        assert!((l - 1.0).abs() < 1e-12);
        assert!((r - 1.0).abs() < 1e-3, "rhs = {r}");
        // f = 5: derivative vanishes
        let (l, r) = littlewood_paley(&HoloFn::constant(5.0), &g).unwrap();
        assert!((l - 25.0).abs() < 1e-12 && (r - 25.0).abs() < 1e-12);
        // f = 3 + z^2: coefficient sum of squares = 10
        let (l, r) = littlewood_paley(&HoloFn::poly_from_real(&[3.0, 0.0, 1.0]), &g).unwrap();
        assert!((l - 10.0).abs() < 1e-10);
        assert!((r - 10.0).abs() < 1e-3, "rhs = {r}");
    }
}
