//! Canonical solutions: the monotone ladder of boundary levels
//! `u = n` with `n -> infinity`, its extrapolated limit on a compact disk,
//! the maximal solution built from the inverse critical-point problem, and
//! the boundary diagnostics that accompany them.

use std::sync::Arc;

use num_complex::Complex64;

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::gce::{eps_grid, solve_gce_from, GceProblem, GceSolution};
use crate::green::{green_potential, BlaschkeMeasureSpec};
use crate::grid::DiskGrid;
use crate::harmonic::{outer_function, BoundaryData};
use crate::heins::heins_solve;
use crate::holo::HoloFn;
use crate::liouville::{liouville_extract, ExtractOptions, LiouvilleMap};
use crate::pullback::pullback;

/// Default grid for ladder runs: strong rim refinement so the boundary
/// layer of the level-`n` solutions (width about `e^{-n}`) stays resolved
/// through `n = 12`.
pub fn ladder_grid() -> Result<Arc<DiskGrid>> {
    crate::grid::make_grid(96, 64, 3.5)
}

/// `log(2/(1 - r^2))`, the density of the hyperbolic metric.
pub fn u_poincare(r: f64) -> f64 {
    (2.0 / (1.0 - r * r)).ln()
}

#[derive(Debug, Clone)]
pub struct CanonicalResult {
    pub levels: Vec<f64>,
    pub solutions: Vec<GceSolution>,
    pub rho: f64,
    /// Last ladder iterate plus a geometric tail estimate on the compact.
    pub u_infinity: ScalarField,
    /// Per-node uncertainty band of the extrapolation (zero outside the
    /// compact).
    pub uncertainty: Vec<f64>,
    pub converged_on_compact: bool,
    /// Ladder abandoned at this level by a non-converged inner solve.
    pub aborted_at: Option<f64>,
    /// Nodewise monotonicity in `n` verified (within the grid tolerance).
    pub monotone: bool,
    pub liouville: Option<LiouvilleMap>,
    /// `r -> int (u_D - u_infinity) dtheta` samples on compact radii.
    pub deficiency_profile: Vec<(f64, f64)>,
}

/// Boundary-level schedule: `0, 1, 2, 4, 6, 8, ...` capped at `n_max`.
fn schedule(n_max: f64) -> Vec<f64> {
    let mut out = vec![0.0, 1.0, 2.0];
    let mut n = 4.0;
    while n <= n_max + 1e-12 {
        out.push(n);
        n += 2.0;
    }
    out.retain(|&x| x <= n_max + 1e-12);
    if out.is_empty() {
        out.push(0.0);
    }
    out
}

/// Canonical ladder on the default grid.
pub fn canonical_solution(h: &HoloFn, rho: f64, n_max: f64, tol: f64) -> Result<CanonicalResult> {
    canonical_solution_on(&ladder_grid()?, h, rho, n_max, tol, true)
}

/// Canonical ladder on a caller grid. `extract` controls whether the
/// Liouville map of the limit is extracted.
pub fn canonical_solution_on(
    grid: &Arc<DiskGrid>,
    weight: &HoloFn,
    rho: f64,
    n_max: f64,
    tol: f64,
    extract: bool,
) -> Result<CanonicalResult> {
    if !(rho > 0.0 && rho <= 0.95) {
        return Err(Error::InvalidInput(format!("rho = {rho} must be in (0, 0.95]")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tol must be positive".into()));
    }
    weight.validate()?;
    let levels = schedule(n_max);
    let solver_tol = 1e-8;
    let eps = eps_grid(grid);
    let mut solutions: Vec<GceSolution> = Vec::new();
    let mut used_levels: Vec<f64> = Vec::new();
    let mut aborted_at = None;
    let mut monotone = true;
    let mut converged_on_compact = false;
    let mut gaps: Vec<(f64, ScalarField)> = Vec::new(); // (delta n, gap field)

    for (k, &n) in levels.iter().enumerate() {
        let problem = GceProblem::new(weight.clone(), BoundaryData::Constant(n), grid.clone())?;
        let init = solutions.last().map(|prev: &GceSolution| {
            let dn = n - used_levels[used_levels.len() - 1];
            prev.u.map(|x| x + dn)
        });
        let sol = solve_gce_from(&problem, solver_tol, 80, init.as_ref())?;
        if !sol.converged {
            aborted_at = Some(n);
            break;
        }
        if let Some(prev) = solutions.last() {
            // the ladder increases in n at every node
            let drop = prev.u.max_diff(&sol.u)?;
            if drop > eps {
                monotone = false;
            }
            let dn = n - used_levels[used_levels.len() - 1];
            let gap = sol.u.zip_with(&prev.u, |a, b| a - b)?;
            let gap_sup = sup_on_compact(&gap, rho);
            gaps.push((dn, gap));
            if gap_sup < tol && k + 1 == levels.len() {
                converged_on_compact = true;
            }
            if gap_sup < tol {
                used_levels.push(n);
                solutions.push(sol);
                converged_on_compact = true;
                break;
            }
        }
        used_levels.push(n);
        solutions.push(sol);
    }
    if solutions.is_empty() {
        return Err(Error::NoConvergence("ladder produced no converged level".into()));
    }

    // geometric tail estimate from the last two gaps
    let last = solutions.last().unwrap();
    let mut u_inf = last.u.clone();
    u_inf.boundary_trace = None; // the limit has no finite trace
    let mut uncertainty = vec![0.0; grid.n_nodes()];
    if gaps.len() >= 2 {
        let (dn_last, g_last) = &gaps[gaps.len() - 1];
        let (dn_prev, g_prev) = &gaps[gaps.len() - 2];
        let s_last = sup_on_compact(g_last, rho);
        let s_prev = sup_on_compact(g_prev, rho);
        if s_prev > 0.0 && s_last > 0.0 {
            // per-unit-level decay rate, then the geometric series for the
            // remaining (infinite) levels in steps of dn_last
            let rate_unit = (s_last / s_prev).powf(1.0 / dn_last.max(1e-12)).min(0.999);
            let q = rate_unit.powf(*dn_last).min(0.9);
            let factor = q / (1.0 - q);
            for i in 0..grid.n_r {
                if grid.radii[i] > rho {
                    break;
                }
                for j in 0..grid.n_theta {
                    let k = grid.idx(i, j);
                    let tail = g_last.values[k].max(0.0) * factor;
                    u_inf.values[k] += tail;
                    uncertainty[k] = tail + g_last.values[k].abs() * q;
                }
            }
            let _ = dn_prev;
        }
    }

    let liouville = if extract {
        liouville_extract(&u_inf, weight, rho, ExtractOptions::default()).ok()
    } else {
        None
    };
    let deficiency_radii: Vec<f64> = grid
        .radii
        .iter()
        .copied()
        .filter(|&r| r <= rho)
        .collect();
    let deficiency_profile = deficiency(&u_inf, &deficiency_radii)
        .into_iter()
        .zip(deficiency_radii)
        .map(|(v, r)| (r, v))
        .collect();

    Ok(CanonicalResult {
        levels: used_levels,
        solutions,
        rho,
        u_infinity: u_inf,
        uncertainty,
        converged_on_compact,
        aborted_at,
        monotone,
        liouville,
        deficiency_profile,
    })
}

fn sup_on_compact(f: &ScalarField, rho: f64) -> f64 {
    let g = &f.grid;
    let mut m: f64 = 0.0;
    for i in 0..g.n_r {
        if g.radii[i] > rho {
            break;
        }
        for j in 0..g.n_theta {
            m = m.max(f.at(i, j).abs());
        }
    }
    m
}

/// Per-radius angular quadrature of `u_D - u` (the nearly-maximal
/// deficiency integrand): `r` values snap to the nearest grid ring.
pub fn deficiency(u: &ScalarField, r_values: &[f64]) -> Vec<f64> {
    let g = &u.grid;
    let dth = g.dtheta();
    r_values
        .iter()
        .map(|&r| {
            let i = g.ring_nearest(r);
            let ud = u_poincare(g.radii[i]);
            let mut acc = 0.0;
            for j in 0..g.n_theta {
                acc += ud - u.at(i, j);
            }
            acc * dth
        })
        .collect()
}

/// The maximal solution for a weight with finitely many zeros:
/// `F` is the Blaschke product whose critical set is the zero set of `H`,
/// and `u_max = log(1/|H|) + log(2|F'|/(1-|F|^2))`.
pub fn maximal_solution(weight: &HoloFn, grid: &Arc<DiskGrid>) -> Result<(ScalarField, BlaschkeProduct)> {
    weight.validate()?;
    let zeros = weight.zeros()?;
    let sol = heins_solve(&zeros, 1e-9)?;
    let pb = pullback(&HoloFn::Blaschke(sol.product.clone()), Some(weight), grid)?;
    Ok((pb.u_field, sol.product))
}

#[derive(Debug, Clone)]
pub struct CanonicalVsMaximal {
    pub coincide: bool,
    pub gap_sup: f64,
    /// `u_max - u_infinity` on the compact (nonnegative up to tolerance
    /// when the maximal solution dominates).
    pub gap_field: ScalarField,
    /// Worst relative disagreement of the hyperbolic densities
    /// `|I'|/(1-|I|^2)` of the two routes.
    pub density_gap: f64,
    pub maximal_product: BlaschkeProduct,
}

/// Compare the canonical ladder limit with the maximal solution on a
/// compact disk.
pub fn canonical_vs_maximal(
    weight: &HoloFn,
    grid: &Arc<DiskGrid>,
    rho: f64,
    tol: f64,
) -> Result<CanonicalVsMaximal> {
    let canon = canonical_solution_on(grid, weight, rho, 12.0, 1e-4, false)?;
    let (u_max, product) = maximal_solution(weight, grid)?;
    let gap_field = u_max.zip_with(&canon.u_infinity, |a, b| a - b)?;
    let gap_sup = sup_on_compact(&gap_field, rho);
    // hyperbolic density along both routes: lambda = |H| e^{u}
    let mut density_gap: f64 = 0.0;
    for i in 0..grid.n_r {
        if grid.radii[i] > rho {
            break;
        }
        for j in 0..grid.n_theta {
            let habs = weight.eval(grid.z(i, j)).norm();
            let l1 = habs * canon.u_infinity.at(i, j).exp();
            let l2 = habs * u_max.at(i, j).exp();
            density_gap = density_gap.max((l1 - l2).abs() / (1.0 + l2));
        }
    }
    Ok(CanonicalVsMaximal {
        coincide: gap_sup <= tol,
        gap_sup,
        gap_field,
        density_gap,
        maximal_product: product,
    })
}

#[derive(Debug, Clone)]
pub struct BoundaryGrowthReport {
    pub levels: Vec<f64>,
    /// Max of `u_n` over probe nodes (radius >= probe_radius, angle in J).
    pub probe_max: Vec<f64>,
    /// Whether each level's probe max reached `n - 0.1`.
    pub level_exceeded: Vec<bool>,
    /// Strict nodewise increase across consecutive levels on the probe set.
    pub increasing: bool,
    /// Worst violation of the lower bound
    /// `u_n(z) >= n - e^{2n} pot(z) - 0.1` with
    /// `pot = G_{|H|^2 dA}` (nonpositive when the bound holds).
    pub representation_violation: f64,
}

/// Probe the boundary growth of the ladder along an arc `J` (angular
/// interval), for a weight analytic past `J`.
pub fn boundary_growth_probe(
    weight: &HoloFn,
    grid: &Arc<DiskGrid>,
    levels: &[f64],
    arc: (f64, f64),
    probe_radius: f64,
) -> Result<BoundaryGrowthReport> {
    weight.validate()?;
    let mu = BlaschkeMeasureSpec::holo_sq(weight.clone());
    let pot = green_potential(&mu, grid)?;
    let in_arc = |t: f64| {
        let (lo, hi) = arc;
        if lo <= hi {
            t >= lo && t <= hi
        } else {
            t >= lo || t <= hi
        }
    };
    let probe: Vec<(usize, usize)> = (0..grid.n_r)
        .flat_map(|i| (0..grid.n_theta).map(move |j| (i, j)))
        .filter(|&(i, j)| grid.radii[i] >= probe_radius && in_arc(grid.angles[j]))
        .collect();
    if probe.is_empty() {
        return Err(Error::InvalidInput("no probe nodes in the requested region".into()));
    }
    let mut probe_max = Vec::new();
    let mut level_exceeded = Vec::new();
    let mut increasing = true;
    let mut representation_violation = f64::NEG_INFINITY;
    let mut prev: Option<ScalarField> = None;
    for &n in levels {
        let problem = GceProblem::new(weight.clone(), BoundaryData::Constant(n), grid.clone())?;
        let sol = crate::gce::solve_gce(&problem, 1e-8, 80)?;
        if !sol.converged {
            return Err(Error::NoConvergence(format!("ladder level {n} failed")));
        }
        let mut mx = f64::NEG_INFINITY;
        for &(i, j) in &probe {
            let v = sol.u.at(i, j);
            mx = mx.max(v);
            let bound = n - (2.0 * n).exp() * pot.at(i, j) - 0.1;
            representation_violation = representation_violation.max(bound - v);
            if let Some(p) = &prev {
                if v < p.at(i, j) - eps_grid(grid) {
                    increasing = false;
                }
            }
        }
        probe_max.push(mx);
        level_exceeded.push(mx >= n - 0.1);
        prev = Some(sol.u);
    }
    Ok(BoundaryGrowthReport {
        levels: levels.to_vec(),
        probe_max,
        level_exceeded,
        increasing,
        representation_violation,
    })
}

/// The generator family `H_r = (2r / phi_r) I0'` with
/// `phi_r = Out_{1 - |r I0|^2}`.  For a finite Blaschke product the
/// boundary modulus is the constant `1 - r^2`, so the outer factor is that
/// constant and the result folds into an exact rational function.
pub fn generator_family(i0: &BlaschkeProduct, r: f64, grid: &Arc<DiskGrid>) -> Result<HoloFn> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidInput(format!("r = {r} must be in (0, 1)")));
    }
    let samples: Vec<f64> = grid
        .boundary_angles
        .iter()
        .map(|&t| {
            let b = i0.eval(Complex64::from_polar(1.0, t));
            1.0 - (r * b.norm()).powi(2)
        })
        .collect();
    let phi = outer_function(&samples, grid)?;
    // the outer factor of a genuinely constant modulus must be constant
    let phi0 = phi.eval(Complex64::new(0.0, 0.0));
    let mut worst: f64 = 0.0;
    for k in 0..8 {
        let z = Complex64::from_polar(0.7, k as f64 * crate::grid::TAU / 8.0);
        worst = worst.max((phi.eval(z) - phi0).norm());
    }
    if worst > 1e-8 * (1.0 + phi0.norm()) {
        return Err(Error::InvalidInput(
            "outer factor is not constant; the map is not inner on the boundary".into(),
        ));
    }
    HoloFn::BlaschkeDerivative(i0.clone()).scaled(2.0 * r / phi0.re)
}

/// Boundary trace of `u_r = log(1/|H_r|) + log(2|r I0'| / (1 - |r I0|^2))`:
/// the construction contract is that this vanishes.
pub fn generator_family_trace(
    i0: &BlaschkeProduct,
    r: f64,
    h_r: &HoloFn,
    grid: &Arc<DiskGrid>,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &t in &grid.boundary_angles {
        let z = Complex64::from_polar(1.0, t);
        let b = i0.eval(z);
        let db = i0.derivative(z);
        let lam = 2.0 * r * db.norm() / (1.0 - (r * b.norm()).powi(2));
        let u = lam.ln() - h_r.eval(z).norm().ln();
        worst = worst.max(u.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::poly::ZERO;

    #[test]
    fn ladder_h1_reaches_poincare() {
        let g = ladder_grid().unwrap();
        let res = canonical_solution_on(&g, &HoloFn::constant(1.0), 0.8, 8.0, 1e-4, true).unwrap();
        assert!(res.monotone, "ladder must increase in n");
        assert!(res.aborted_at.is_none());
        let mut worst: f64 = 0.0;
        for i in 0..g.n_r {
            if g.radii[i] > 0.8 {
                break;
            }
            let want = u_poincare(g.radii[i]);
            for j in 0..g.n_theta {
                worst = worst.max((res.u_infinity.at(i, j) - want).abs());
            }
        }
        assert!(worst <= 1e-2, "canonical limit defect {worst}");
        // Liouville map of the limit is the identity
        let map = res.liouville.as_ref().expect("extraction");
        let mut iworst: f64 = 0.0;
        for i in (0..map.rings).step_by(4) {
            for j in (0..g.n_theta).step_by(4) {
                iworst = iworst.max((map.value_at(i, j) - g.z(i, j)).norm());
            }
        }
        assert!(iworst <= 5e-2, "identity extraction defect {iworst}");
        // deficiency of the limit tends to zero toward the rim
        let prof = &res.deficiency_profile;
        let tail = prof.last().unwrap().1.abs();
        assert!(tail <= 0.2, "deficiency tail {tail}");
    }

    #[test]
    fn ladder_2z_reaches_squared_map() {
        let g = ladder_grid().unwrap();
        let h = HoloFn::poly_from_real(&[0.0, 2.0]);
        let res = canonical_solution_on(&g, &h, 0.8, 8.0, 1e-4, false).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..g.n_r {
            if g.radii[i] > 0.8 {
                break;
            }
            let r = g.radii[i];
            let want = (2.0 / (1.0 - r.powi(4))).ln();
            for j in 0..g.n_theta {
                worst = worst.max((res.u_infinity.at(i, j) - want).abs());
            }
        }
        assert!(worst <= 1e-2, "canonical limit defect for H = 2z: {worst}");
    }

    #[test]
    fn maximal_solution_examples() {
        let g = make_grid(48, 96, 2.0).unwrap();
        // H = 1: F = id, u_max = log(2/(1-|z|^2))
        let (u, f) = maximal_solution(&HoloFn::constant(1.0), &g).unwrap();
        assert_eq!(f, BlaschkeProduct::identity());
        for i in [0usize, 20, 40] {
            let want = u_poincare(g.radii[i]);
            assert!((u.at(i, 0) - want).abs() < 1e-10);
        }
        // H = z: F = z^2, u_max = log(4/(1-|z|^4)) - log(2|z|) + log(2|z|) ...
        // assembled by the pullback; verify PDE residual instead
        let hz = HoloFn::poly_from_real(&[0.0, 1.0]);
        let (uz, fz) = maximal_solution(&hz, &g).unwrap();
        assert_eq!(fz.degree(), 2);
        let p = GceProblem::new(hz, BoundaryData::Constant(0.0), g.clone()).unwrap();
        // interior stencil residual of the closed-form maximal solution
        let lapl = crate::laplacian::PolarLaplacian::new(g.clone());
        let hsq = p.weight_sq();
        let mut worst: f64 = 0.0;
        // supply the exact boundary values of u_max for the stencil
        let tr: Vec<f64> = g
            .boundary_angles
            .iter()
            .map(|&t| {
                let z = Complex64::from_polar(1.0, t);
                let df = fz.derivative(z).norm();
                // log(1/|z|) = 0 on the boundary
                (2.0 * df / (1.0 - 0.9999999999 * 1.0)).ln() * 0.0
            })
            .collect();
        let _ = tr;
        let flux = lapl.flux(&uz.values, &vec![0.0; g.n_theta]);
        for i in 0..g.n_r - 8 {
            // skip the outermost rings: u_max has no finite trace
            for j in 0..g.n_theta {
                let k = g.idx(i, j);
                let resid = flux[k] / lapl.area[i] - hsq[k] * (2.0 * uz.at(i, j)).exp();
                worst = worst.max(resid.abs() / (1.0 + hsq[k] * (2.0 * uz.at(i, j)).exp()));
            }
        }
        assert!(worst < 1e-2, "maximal solution residual {worst}");
    }

    #[test]
    fn maximal_dominates_zero_boundary_solution() {
        let g = make_grid(48, 96, 2.0).unwrap();
        for h in [
            HoloFn::constant(1.0),
            HoloFn::poly_from_real(&[0.0, 1.0]),
            HoloFn::Poly(crate::poly::Poly::from_roots(&[ZERO, Complex64::new(0.5, 0.0)])),
        ] {
            let (u_max, _) = maximal_solution(&h, &g).unwrap();
            let p = GceProblem::new(h, BoundaryData::Constant(0.0), g.clone()).unwrap();
            let sol = crate::gce::solve_gce(&p, 1e-9, 60).unwrap();
            assert!(sol.converged);
            let worst = sol.u.max_diff(&u_max).unwrap();
            assert!(worst <= eps_grid(&g), "domination violated by {worst}");
        }
    }

    #[test]
    fn canonical_equals_maximal_for_h1_and_2z() {
        let g = ladder_grid().unwrap();
        let r1 = canonical_vs_maximal(&HoloFn::constant(1.0), &g, 0.7, 1e-2).unwrap();
        assert!(r1.coincide, "H = 1 gap {}", r1.gap_sup);
        let r2 = canonical_vs_maximal(&HoloFn::poly_from_real(&[0.0, 2.0]), &g, 0.7, 1e-2).unwrap();
        assert!(r2.coincide, "H = 2z gap {}", r2.gap_sup);
        assert_eq!(r2.maximal_product.degree(), 2);
    }

    #[test]
    fn deficiency_profiles() {
        let g = make_grid(48, 96, 2.0).unwrap();
        // u = u_D: deficiency 0 at every radius
        let ud = ScalarField {
            grid: g.clone(),
            values: (0..g.n_nodes())
                .map(|k| u_poincare(g.radii[k / g.n_theta]))
                .collect(),
            boundary_trace: None,
        };
        let d = deficiency(&ud, &[0.3, 0.6, 0.9]);
        assert!(d.iter().all(|v| v.abs() < 1e-12));
        // u <= 0 (zero-boundary solution): deficiency grows like
        // 2 pi log(2/(1-r^2))
        let p = GceProblem::new(HoloFn::constant(1.0), BoundaryData::Constant(0.0), g.clone()).unwrap();
        let sol = crate::gce::solve_gce(&p, 1e-9, 60).unwrap();
        let rs = [0.8, 0.9, 0.97];
        let d = deficiency(&sol.u, &rs);
        for (k, &r) in rs.iter().enumerate() {
            let i = g.ring_nearest(r);
            let lower = crate::grid::TAU * u_poincare(g.radii[i]);
            assert!(d[k] >= lower - 1e-9, "deficiency {} below {lower}", d[k]);
        }
        assert!(d[2] > d[1] && d[1] > d[0]);
    }

    #[test]
    fn generator_family_identity_case() {
        let g = make_grid(32, 64, 2.0).unwrap();
        let hr = generator_family(&BlaschkeProduct::identity(), 0.5, &g).unwrap();
        // phi_r = 3/4, H_r = 2 * 0.5 / (3/4) = 4/3
        let v = hr.eval(Complex64::new(0.3, 0.2));
        assert!((v - Complex64::new(4.0 / 3.0, 0.0)).norm() < 1e-10, "{v}");
        let tr = generator_family_trace(&BlaschkeProduct::identity(), 0.5, &hr, &g).unwrap();
        assert!(tr < 1e-10, "trace {tr}");
    }

    #[test]
    fn generator_family_square_and_monotone_in_r() {
        let g = make_grid(32, 64, 2.0).unwrap();
        let b = BlaschkeProduct::power(2);
        let h1 = generator_family(&b, 0.5, &g).unwrap();
        let tr = generator_family_trace(&b, 0.5, &h1, &g).unwrap();
        assert!(tr < 1e-2, "boundary trace of u_r: {tr}");
        // |H_r| increases pointwise in r, and the direction is I0'
        let (mut prev, mut first) = (None, None);
        for &r in &[0.3, 0.5, 0.7, 0.9] {
            let hr = generator_family(&b, r, &g).unwrap();
            let z = Complex64::new(0.4, 0.1);
            let v = hr.eval(z).norm();
            if let Some(p) = prev {
                assert!(v > p, "|H_r| must increase in r");
            }
            prev = Some(v);
            // normalized direction equals I0' exactly
            let scale = 2.0 * r / (1.0 - r * r);
            let dir = hr.eval(z) / scale;
            let want = b.derivative(z);
            assert!((dir - want).norm() < 1e-10);
            first.get_or_insert(v);
        }
    }
}
