//! Discrete Laplacian on the polar grid and a banded Cholesky solver.
//!
//! The operator is the 5-point polar stencil `d_rr + r^{-1} d_r + r^{-2}
//! d_tt` with non-uniform 3-point radial differences.  At the innermost
//! ring the radial neighbor across the origin (same diameter, angle
//! `theta + pi`, signed radius `-r_0`) supplies the missing inner value, so
//! the stencil is exact for quadratics there and no special origin node is
//! needed.  Dirichlet data enters through the boundary ring at `r = 1`.
//!
//! The stencil matrix is not symmetric as written, but the radial chain has
//! positive coefficients, so a per-ring diagonal weight `omega` makes
//! `diag(omega) L` symmetric (the discrete form of `r dr` symmetrizing
//! `d_rr + r^{-1} d_r`).  The Newton systems solved here are therefore
//! symmetric positive definite band matrices.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::DiskGrid;

#[derive(Debug)]
pub struct PolarLaplacian {
    pub grid: Arc<DiskGrid>,
    /// Radial coefficient toward the inner neighbor, per ring.
    c_in: Vec<f64>,
    /// Radial coefficient toward the outer neighbor (the boundary ring for
    /// the last one), per ring.
    c_out: Vec<f64>,
    /// Angular coefficient `1 / (r dtheta)^2`, per ring.
    c_ang: Vec<f64>,
    /// Symmetrizing weights per ring: `omega[i] * c_out[i] =
    /// omega[i+1] * c_in[i+1]`.
    omega: Vec<f64>,
}

impl PolarLaplacian {
    pub fn new(grid: Arc<DiskGrid>) -> PolarLaplacian {
        let n_r = grid.n_r;
        let dth = grid.dtheta();
        let mut c_in = Vec::with_capacity(n_r);
        let mut c_out = Vec::with_capacity(n_r);
        let mut c_ang = Vec::with_capacity(n_r);
        for i in 0..n_r {
            let r = grid.radii[i];
            // inner spacing: across the origin for the first ring
            let h_m = if i == 0 { 2.0 * r } else { r - grid.radii[i - 1] };
            let h_p = if i + 1 < n_r { grid.radii[i + 1] - r } else { 1.0 - r };
            // d_rr: 2/(h_m (h_m + h_p)) inner, 2/(h_p (h_m + h_p)) outer
            // d_r : -h_p/(h_m (h_m+h_p)) inner, +h_m/(h_p (h_m+h_p)) outer
            let denom = h_m + h_p;
            c_in.push((2.0 - h_p / r) / (h_m * denom));
            c_out.push((2.0 + h_m / r) / (h_p * denom));
            c_ang.push(1.0 / (r * dth * r * dth));
        }
        debug_assert!(c_in.iter().all(|&c| c > 0.0), "radial stencil must be an M-matrix");
        let mut omega = vec![1.0; n_r];
        for i in 1..n_r {
            omega[i] = omega[i - 1] * c_out[i - 1] / c_in[i];
        }
        PolarLaplacian { grid, c_in, c_out, c_ang, omega }
    }

    /// Pointwise discrete Laplacian, difference form, for interior values
    /// `u` and boundary values `h`.
    pub fn apply(&self, u: &[f64], h: &[f64]) -> Vec<f64> {
        let g = &self.grid;
        let (n_r, n_t) = (g.n_r, g.n_theta);
        let half = n_t / 2;
        let mut out = vec![0.0; n_r * n_t];
        for i in 0..n_r {
            let row = i * n_t;
            let (ci, co, ca) = (self.c_in[i], self.c_out[i], self.c_ang[i]);
            for j in 0..n_t {
                let c = u[row + j];
                let inner = if i == 0 { u[(j + half) % n_t] } else { u[row - n_t + j] };
                let outer = if i + 1 < n_r { u[row + n_t + j] } else { h[j] };
                let jp = if j + 1 == n_t { 0 } else { j + 1 };
                let jm = if j == 0 { n_t - 1 } else { j - 1 };
                out[row + j] = ci * (inner - c)
                    + co * (outer - c)
                    + ca * ((u[row + jp] - c) + (u[row + jm] - c));
            }
        }
        out
    }

    /// Sum of the absolute stencil coefficients per ring: the scale of the
    /// rounding floor of `apply`.
    pub fn row_scale(&self, i: usize) -> f64 {
        self.c_in[i] + self.c_out[i] + 2.0 * self.c_ang[i]
    }

    /// Pointwise discrete Laplacian of a field.  Without a boundary trace
    /// only rings `0..n_r-1` are meaningful (the returned ring count says
    /// how many are valid).
    pub fn laplacian(&self, f: &ScalarField) -> Result<(Vec<f64>, usize)> {
        let g = &self.grid;
        if *f.grid != **g {
            return Err(Error::GridMismatch("laplacian field".into()));
        }
        let (rings, h) = match &f.boundary_trace {
            Some(tr) => (g.n_r, tr.clone()),
            None => (g.n_r - 1, vec![0.0; g.n_theta]),
        };
        let out = self.apply(&f.values, &h);
        Ok((out, rings))
    }

    /// Dirichlet contribution of boundary values to the stencil, as a
    /// right-hand-side vector (only the outermost ring is nonzero).
    pub fn boundary_term(&self, h: &[f64]) -> Vec<f64> {
        let g = &self.grid;
        let (n_r, n_t) = (g.n_r, g.n_theta);
        let mut out = vec![0.0; n_r * n_t];
        let co = self.c_out[n_r - 1];
        for j in 0..n_t {
            out[(n_r - 1) * n_t + j] = co * h[j];
        }
        out
    }

    /// Assemble the symmetrized SPD band matrix
    /// `diag(omega) (-L + diag(d))`, where `d >= 0` is a nodal diagonal
    /// shift (the Newton linearization uses `d = 2 |H|^2 e^{2u}`).
    /// Band layout: `band[off][col]` holds entry `(col + off, col)`.
    pub fn spd_band(&self, diag_add: &[f64]) -> Band {
        let g = &self.grid;
        let (n_r, n_t) = (g.n_r, g.n_theta);
        let n = n_r * n_t;
        let bw = n_t;
        let half = n_t / 2;
        let mut band = vec![0.0; (bw + 1) * n];
        for i in 0..n_r {
            let w = self.omega[i];
            let (ci, co, ca) = (self.c_in[i], self.c_out[i], self.c_ang[i]);
            let diag = w * (ci + co + 2.0 * ca);
            for j in 0..n_t {
                let col = i * n_t + j;
                band[col] = diag + w * diag_add[col];
                // angular neighbors: offset 1 within the ring, wrap pair at
                // offset n_t - 1 stored from column (i, 0)
                if j + 1 < n_t {
                    band[n + col] -= w * ca;
                }
                if j == 0 {
                    band[(n_t - 1) * n + col] -= w * ca;
                }
                // across-origin pair in ring 0: offset n_t/2 (each unordered
                // pair is one lower-triangle entry from the smaller column)
                if i == 0 && j < half {
                    band[half * n + col] -= w * ci;
                }
                // radial neighbor (i+1, j) at offset n_t; the symmetrizing
                // weights make omega_i c_out_i = omega_{i+1} c_in_{i+1}
                if i + 1 < n_r {
                    band[bw * n + col] -= w * co;
                }
            }
        }
        Band { n, bw, data: band }
    }

    /// Row weights of the symmetrized system.
    pub fn omega(&self) -> &[f64] {
        &self.omega
    }
}

/// Symmetric positive definite band matrix (lower storage) with an in-place
/// Cholesky factorization.
pub struct Band {
    pub n: usize,
    pub bw: usize,
    /// `data[off * n + col]` = entry `(col + off, col)`.
    data: Vec<f64>,
}

impl Band {
    /// In-place Cholesky `A = L L^T`. Fails only if the matrix is not
    /// positive definite.
    pub fn cholesky(&mut self) -> Result<()> {
        let (n, bw) = (self.n, self.bw);
        for j in 0..n {
            let lo = j.saturating_sub(bw);
            for k in lo..j {
                let ljk = self.data[(j - k) * n + k];
                if ljk == 0.0 {
                    continue;
                }
                let top = (k + bw).min(n - 1);
                for i in j..=top {
                    self.data[(i - j) * n + j] -= ljk * self.data[(i - k) * n + k];
                }
            }
            let d = self.data[j];
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::NoConvergence(format!(
                    "banded Cholesky: pivot {d} at column {j}"
                )));
            }
            let ds = d.sqrt();
            self.data[j] = ds;
            let top = (j + bw).min(n - 1);
            for i in j + 1..=top {
                self.data[(i - j) * n + j] /= ds;
            }
        }
        Ok(())
    }

    /// Solve `A x = b` after [`cholesky`].
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw) = (self.n, self.bw);
        let mut x = b.to_vec();
        // forward: L y = b
        for j in 0..n {
            x[j] /= self.data[j];
            let top = (j + bw).min(n - 1);
            let xj = x[j];
            for i in j + 1..=top {
                x[i] -= self.data[(i - j) * n + j] * xj;
            }
        }
        // backward: L^T x = y
        for j in (0..n).rev() {
            let top = (j + bw).min(n - 1);
            let mut acc = x[j];
            for i in j + 1..=top {
                acc -= self.data[(i - j) * n + j] * x[i];
            }
            x[j] = acc / self.data[j];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn paraboloid_has_laplacian_four() {
        let g = make_grid(32, 64, 1.5).unwrap();
        let lap = PolarLaplacian::new(g.clone());
        let f = ScalarField {
            grid: g.clone(),
            values: (0..g.n_nodes())
                .map(|k| {
                    let (i, j) = (k / g.n_theta, k % g.n_theta);
                    g.z(i, j).norm_sqr()
                })
                .collect(),
            boundary_trace: Some(vec![1.0; g.n_theta]),
        };
        let (vals, _) = lap.laplacian(&f).unwrap();
        for (k, v) in vals.iter().enumerate() {
            assert!((v - 4.0).abs() < 1e-8, "node {k}: {v}");
        }
    }

    #[test]
    fn harmonic_fields_have_small_laplacian() {
        // r^2 cos(2 th) and r cos(th) are harmonic
        let g = make_grid(48, 96, 2.0).unwrap();
        let lap = PolarLaplacian::new(g.clone());
        for (m, name) in [(1i32, "r cos"), (2, "r^2 cos 2")] {
            let f = ScalarField {
                grid: g.clone(),
                values: (0..g.n_nodes())
                    .map(|k| {
                        let (i, j) = (k / g.n_theta, k % g.n_theta);
                        g.radii[i].powi(m) * (m as f64 * g.angles[j]).cos()
                    })
                    .collect(),
                boundary_trace: Some(
                    g.boundary_angles.iter().map(|t| (m as f64 * t).cos()).collect(),
                ),
            };
            let (vals, _) = lap.laplacian(&f).unwrap();
            let worst = vals.iter().fold(0.0f64, |mx, &v| mx.max(v.abs()));
            // measured discretization constant, frozen with slack
            let bound = 40.0 * g.consistency_scale();
            assert!(worst <= bound, "{name}: worst {worst} vs bound {bound}");
        }
    }

    #[test]
    fn symmetrization_weights_are_moderate() {
        let g = make_grid(96, 64, 3.5).unwrap();
        let lap = PolarLaplacian::new(g.clone());
        for (i, &w) in lap.omega().iter().enumerate() {
            assert!(w.is_finite() && w > 0.0, "omega[{i}] = {w}");
        }
    }

    #[test]
    fn banded_cholesky_solves_shifted_system() {
        // A = omega (-L + I); check A x = b round-trips through the stencil
        let g = make_grid(8, 16, 1.0).unwrap();
        let lap = PolarLaplacian::new(g.clone());
        let n = g.n_nodes();
        let mut band = lap.spd_band(&vec![1.0; n]);
        band.cholesky().unwrap();
        let b: Vec<f64> = (0..n).map(|k| ((k * 37) % 11) as f64 - 5.0).collect();
        let x = band.solve(&b);
        let h = vec![0.0; g.n_theta];
        let lx = lap.apply(&x, &h);
        for i in 0..g.n_r {
            let w = lap.omega()[i];
            for j in 0..g.n_theta {
                let k = g.idx(i, j);
                let ax = w * (-lx[k] + x[k]);
                assert!((ax - b[k]).abs() < 1e-9 * (1.0 + b[k].abs()), "row {k}");
            }
        }
    }
}
