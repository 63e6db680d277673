//! The inverse critical-point problem: given `d - 1` points of the open
//! disk, find the degree-`d` Blaschke product (normalized: one zero pinned
//! at the origin, rotation zero) whose critical set matches them.
//!
//! Continuation: the critical targets are moved along a straight line from
//! the all-zero configuration (solution `z^d`) to the requested set, with a
//! finite-difference Newton solve on the free zeros at each step and step
//! halving on failure (floor 1e-4).

use num_complex::Complex64;

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::poly::{sort_lex, ZERO};

#[derive(Debug, Clone)]
pub struct HeinsResult {
    pub product: BlaschkeProduct,
    /// Optimal-assignment distance between requested and recomputed
    /// critical multisets.
    pub assignment_residual: f64,
    /// `|F'(c_k)|` at each requested point.
    pub derivative_residuals: Vec<f64>,
}

/// Minimum-cost assignment (Hungarian algorithm, O(n^3)).  Returns the
/// column matched to each row.
pub fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    // potentials + shortest augmenting paths (1-indexed internals)
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1]; // p[j] = row assigned to column j
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut ans = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            ans[p[j] - 1] = j - 1;
        }
    }
    ans
}

/// Optimal-assignment distance between two equal-size point multisets:
/// the largest matched pairwise distance under the min-cost matching.
pub fn assignment_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    if a.is_empty() {
        return 0.0;
    }
    let cost: Vec<Vec<f64>> = a
        .iter()
        .map(|&x| b.iter().map(|&y| (x - y).norm()).collect())
        .collect();
    let m = hungarian(&cost);
    a.iter()
        .enumerate()
        .map(|(i, &x)| (x - b[m[i]]).norm())
        .fold(0.0, f64::max)
}

/// Permute `pts` so entry `k` is the one nearest `base[k]` (greedy, used to
/// track critical points across tiny finite-difference perturbations).
fn match_to(base: &[Complex64], pts: &[Complex64]) -> Vec<Complex64> {
    let mut remaining: Vec<Complex64> = pts.to_vec();
    let mut out = Vec::with_capacity(pts.len());
    for &b in base {
        let (k, _) = remaining
            .iter()
            .enumerate()
            .min_by(|(_, x), (_, y)| {
                (*x - b).norm().partial_cmp(&(*y - b).norm()).unwrap()
            })
            .unwrap();
        out.push(remaining.swap_remove(k));
    }
    out
}

fn product_from_free_zeros(free: &[Complex64]) -> Result<BlaschkeProduct> {
    let mut zeros = Vec::with_capacity(free.len() + 1);
    zeros.push(ZERO);
    zeros.extend_from_slice(free);
    BlaschkeProduct::new(zeros, 0.0)
}

/// Critical points ordered against a reference configuration.
fn crit_matched(free: &[Complex64], reference: &[Complex64]) -> Result<Vec<Complex64>> {
    let b = product_from_free_zeros(free)?;
    let crit = b.critical_points()?;
    Ok(match_to(reference, &crit))
}

/// Dense Gaussian elimination with partial pivoting (tiny systems).
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[piv][col].abs() < 1e-14 {
            return Err(Error::HomotopyFailure("singular Newton system".into()));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

/// Newton on the zeros-to-critical-points map toward `target` (ordered),
/// starting from `free`. Returns the refined free zeros.
fn newton_to_target(
    free: &[Complex64],
    target: &[Complex64],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<Complex64>> {
    let m = free.len();
    let dim = 2 * m;
    let mut x: Vec<Complex64> = free.to_vec();
    for _ in 0..max_iter {
        let crit = crit_matched(&x, target)?;
        let mut res = vec![0.0; dim];
        let mut worst: f64 = 0.0;
        for k in 0..m {
            let d = crit[k] - target[k];
            res[2 * k] = d.re;
            res[2 * k + 1] = d.im;
            worst = worst.max(d.norm());
        }
        if worst <= tol {
            return Ok(x);
        }
        // finite-difference Jacobian in the 2m real coordinates
        let eps = 1e-7;
        let mut jac = vec![vec![0.0; dim]; dim];
        for col in 0..dim {
            let mut xp = x.clone();
            let bump = if col % 2 == 0 {
                Complex64::new(eps, 0.0)
            } else {
                Complex64::new(0.0, eps)
            };
            xp[col / 2] += bump;
            if xp[col / 2].norm() >= 1.0 {
                xp[col / 2] -= bump * 2.0;
            }
            let sign = if (xp[col / 2] - x[col / 2] - bump).norm() < 1e-15 { 1.0 } else { -1.0 };
            let cp = crit_matched(&xp, &crit)?;
            for k in 0..m {
                let d = (cp[k] - crit[k]) / eps * sign;
                jac[2 * k][col] = d.re;
                jac[2 * k + 1][col] = d.im;
            }
        }
        let step = solve_dense(jac, res)?;
        // damped update keeping zeros inside the disk
        let mut t = 1.0;
        loop {
            let mut ok = true;
            let mut xn = x.clone();
            for k in 0..m {
                xn[k] -= Complex64::new(step[2 * k], step[2 * k + 1]) * t;
                if xn[k].norm() >= 0.999999 {
                    ok = false;
                    break;
                }
            }
            if ok {
                x = xn;
                break;
            }
            t *= 0.5;
            if t < 1e-6 {
                return Err(Error::HomotopyFailure("step pushes zeros to the boundary".into()));
            }
        }
    }
    let crit = crit_matched(&x, target)?;
    let worst = crit
        .iter()
        .zip(target)
        .map(|(c, t)| (c - t).norm())
        .fold(0.0, f64::max);
    if worst <= tol * 10.0 {
        Ok(x)
    } else {
        Err(Error::HomotopyFailure(format!("Newton stalled at residual {worst}")))
    }
}

/// Solve the inverse critical-point problem for up to `d - 1 = 7` points.
pub fn heins_solve(critical: &[Complex64], tol: f64) -> Result<HeinsResult> {
    for c in critical {
        if c.norm() >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "critical point {c} must lie in the open disk"
            )));
        }
    }
    let d = critical.len() + 1;
    if d > 8 {
        return Err(Error::InvalidInput(format!(
            "degree {d} exceeds the supported desk scale (d <= 8)"
        )));
    }
    let finalize = |b: BlaschkeProduct| -> Result<HeinsResult> {
        let recomputed = b.critical_points()?;
        let assignment_residual = assignment_distance(critical, &recomputed);
        let derivative_residuals = critical.iter().map(|&c| b.derivative(c).norm()).collect();
        Ok(HeinsResult { product: b, assignment_residual, derivative_residuals })
    };
    if critical.is_empty() {
        return finalize(BlaschkeProduct::identity());
    }
    if critical.iter().all(|c| c.norm() < 1e-13) {
        return finalize(BlaschkeProduct::power(d));
    }
    let mut target_order: Vec<Complex64> = critical.to_vec();
    sort_lex(&mut target_order);

    // straight-line homotopy from the all-zero critical configuration
    let mut t = 0.0f64;
    let mut dt = 0.25f64;
    let mut free: Vec<Complex64> = vec![ZERO; d - 1];
    while t < 1.0 {
        let tn = (t + dt).min(1.0);
        let stage: Vec<Complex64> = target_order.iter().map(|&c| c * tn).collect();
        let step_tol = if tn >= 1.0 { tol } else { (tol * 100.0).min(1e-7) };
        match newton_to_target(&free, &stage, step_tol, 40) {
            Ok(next) => {
                free = next;
                t = tn;
                dt = (dt * 1.7).min(0.25);
            }
            Err(e) => {
                dt *= 0.5;
                if dt < 1e-4 {
                    return Err(Error::HomotopyFailure(format!(
                        "floor reached at t = {t}: {e}"
                    )));
                }
            }
        }
    }
    finalize(product_from_free_zeros(&free)?)
}

/// Independent brute-force oracle for degree 2: for `F = z (z-a)/(1-conj(a) z)`
/// the interior critical point is `c = (1 - sqrt(1 - |a|^2))/conj(a)`, and
/// `a` is recovered from `|c|` by a dense 1-D search plus bisection.
pub fn heins_degree2_oracle(c: Complex64) -> Result<BlaschkeProduct> {
    if c.norm() >= 1.0 {
        return Err(Error::InvalidInput("critical point outside the disk".into()));
    }
    if c.norm() < 1e-14 {
        return Ok(BlaschkeProduct::power(2));
    }
    let gamma = |t: f64| (1.0 - (1.0 - t * t).sqrt()) / t;
    let want = c.norm();
    // dense scan for a bracket, then bisection
    let mut lo = 1e-12;
    let mut hi = 1.0 - 1e-12;
    let mut prev_t = lo;
    let mut prev_v = gamma(lo) - want;
    let n = 20000;
    for k in 1..=n {
        let t = k as f64 / (n as f64 + 1.0);
        let v = gamma(t) - want;
        if prev_v <= 0.0 && v >= 0.0 {
            lo = prev_t;
            hi = t;
            break;
        }
        prev_t = t;
        prev_v = v;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gamma(mid) - want <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let a = c / c.norm() * t;
    BlaschkeProduct::new(vec![ZERO, a], 0.0)
}
