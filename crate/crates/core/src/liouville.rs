//! Extraction of the holomorphic self-map behind a curvature solution.
//!
//! For a genuine solution `u` of `Lap u = |H|^2 e^{2u}`, the combination
//! `w = u + log|H| = log(2|I'|/(1-|I|^2))` determines `I` up to
//! post-composition: `Q = w_zz - (w_z)^2` equals half the Schwarzian of `I`
//! and is meromorphic (double poles exactly at the critical points of `I`).
//! Any ratio of two independent solutions of `y'' + Q y = 0` has Schwarzian
//! `2Q`; the particular Mobius image matching the 2-jet of the metric at a
//! base point recovers `I` itself.
//!
//! Numerics: Wirtinger derivatives by 5-point Fornberg stencils (radially
//! non-uniform), pole detection by the blowup of `|Q|`, and RK4 transport of
//! `(y, y')` along radial rays from the origin hub, with straight-line
//! detours around detected poles (the projective monodromy around a
//! Schwarzian double pole is trivial, so path choice does not matter).

use std::sync::Arc;

use num_complex::Complex64;

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::DiskGrid;
use crate::heins::heins_solve;
use crate::holo::HoloFn;

const POLE_Q_THRESHOLD: f64 = 200.0;
const POLE_CLUSTER_RADIUS: f64 = 0.08;
const POLE_CLEARANCE: f64 = 0.08;
const DETOUR_OFFSET: f64 = 0.12;
const RK_STEP: f64 = 0.006;

#[derive(Debug, Clone)]
pub struct LiouvilleMap {
    pub grid: Arc<DiskGrid>,
    pub rho: f64,
    /// Rings covered by the extraction (node radius <= rho).
    pub rings: usize,
    /// `I` at covered nodes, normalized: `I(0) = 0`, first jet positive.
    pub values: Vec<Complex64>,
    /// `I'` at covered nodes.
    pub derivs: Vec<Complex64>,
    /// `Q = w_zz - w_z^2` at covered nodes (half the Schwarzian).
    pub q_field: Vec<Complex64>,
    /// Holomorphy diagnostic: worst `|d/dzbar Q|` away from poles.
    pub cr_residual: f64,
    /// Worst relative defect of `e^w = 2|I'|/(1-|I|^2)` away from poles.
    pub metric_defect: f64,
    /// Path-independence estimate: worst disagreement between a direct ray
    /// and a neighbor-ray-plus-arc route to the same node.
    pub ray_consistency: f64,
    /// Per covered ring: `(r, min |I|, mean |I|)`.
    pub inner_profile: Vec<(f64, f64, f64)>,
    /// Detected singularities of `w` (critical points of `I`).
    pub poles: Vec<Complex64>,
    /// `(I'(0), I''(0))` after normalization.
    pub jet0: (Complex64, Complex64),
    /// Exact Blaschke product matching the extracted map, when one is found
    /// from the zeros of `H` via the inverse critical-point solver.
    pub recognized: Option<BlaschkeProduct>,
}

impl LiouvilleMap {
    pub fn value_at(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.grid.n_theta + j]
    }

    pub fn deriv_at(&self, i: usize, j: usize) -> Complex64 {
        self.derivs[i * self.grid.n_theta + j]
    }
}

/// Fornberg finite-difference weights: row `k` = weights of the k-th
/// derivative at `x0` on the nodes `xs`.
pub fn fd_weights(x0: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    let mut out = vec![vec![0.0; n]; m + 1];
    for (j, row) in c.iter().enumerate() {
        for k in 0..=m {
            out[k][j] = row[k];
        }
    }
    out
}

/// Complex nodal field on the first `rings` rings of a grid.
struct RingField {
    n_theta: usize,
    rings: usize,
    data: Vec<Complex64>,
}

impl RingField {
    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n_theta + j]
    }
}

/// Wirtinger `d/dz` of a ring field:
/// `f_z = (e^{-i th}/2) (f_r - i f_th / r)`.
fn dz_field(g: &DiskGrid, f: &RingField, conjugate: bool) -> RingField {
    let rings = f.rings;
    let n_t = g.n_theta;
    let dth = g.dtheta();
    // angular 5-point centered first derivative (uniform, periodic)
    let ac = [1.0, -8.0, 0.0, 8.0, -1.0];
    let mut out = vec![Complex64::new(0.0, 0.0); rings * n_t];
    // radial stencils per ring (5 nodes, window clamped)
    let win = 5usize.min(rings);
    for i in 0..rings {
        let lo = i.saturating_sub(2).min(rings - win);
        let w = fd_weights(g.radii[i], &g.radii[lo..lo + win], 1);
        for j in 0..n_t {
            let mut fr = Complex64::new(0.0, 0.0);
            for k in 0..win {
                fr += f.at(lo + k, j) * w[1][k];
            }
            let mut ft = Complex64::new(0.0, 0.0);
            for (k, &cfk) in ac.iter().enumerate() {
                let jj = (j + n_t + k - 2) % n_t;
                ft += f.at(i, jj) * cfk;
            }
            ft /= 12.0 * dth;
            let phase = Complex64::from_polar(0.5, if conjugate { g.angles[j] } else { -g.angles[j] });
            let ii = Complex64::new(0.0, 1.0);
            let radial_part = fr;
            let angular_part = ft / g.radii[i];
            out[i * n_t + j] = phase
                * (radial_part
                    + if conjugate { ii * angular_part } else { -ii * angular_part });
        }
    }
    RingField { n_theta: n_t, rings, data: out }
}

/// 4x4 Lagrange interpolation of a ring field at an interior point.
fn interp(g: &DiskGrid, f: &RingField, z: Complex64) -> Complex64 {
    let (rho, mut ang) = (z.norm(), z.arg());
    if ang < 0.0 {
        ang += crate::grid::TAU;
    }
    let n_t = g.n_theta;
    let dth = g.dtheta();
    // radial window
    let i = g.ring_nearest(rho);
    let i0 = i.saturating_sub(1).min(f.rings.saturating_sub(4));
    let xs = &g.radii[i0..i0 + 4];
    let mut wr = [0.0f64; 4];
    for k in 0..4 {
        let mut w = 1.0;
        for l in 0..4 {
            if l != k {
                w *= (rho - xs[l]) / (xs[k] - xs[l]);
            }
        }
        wr[k] = w;
    }
    // angular window in local coordinate xi = (ang - angles[0])/dth
    let x = (ang - g.angles[0]) / dth;
    let jf = x.floor();
    let xi = x - jf;
    let jbase = jf as isize;
    let mut wt = [0.0f64; 4];
    let nodes = [-1.0, 0.0, 1.0, 2.0];
    for k in 0..4 {
        let mut w = 1.0;
        for l in 0..4 {
            if l != k {
                w *= (xi - nodes[l]) / (nodes[k] - nodes[l]);
            }
        }
        wt[k] = w;
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..4 {
        let mut row = Complex64::new(0.0, 0.0);
        for l in 0..4 {
            let j = (jbase - 1 + l as isize).rem_euclid(n_t as isize) as usize;
            row += f.at(i0 + k, j) * wt[l];
        }
        acc += row * wr[k];
    }
    acc
}

/// ODE state `(y1, y1', y2, y2')`, derivatives with respect to `z`.
#[derive(Debug, Clone, Copy)]
struct OdeState {
    y1: Complex64,
    d1: Complex64,
    y2: Complex64,
    d2: Complex64,
}

impl OdeState {
    fn initial() -> OdeState {
        OdeState {
            y1: Complex64::new(0.0, 0.0),
            d1: Complex64::new(1.0, 0.0),
            y2: Complex64::new(1.0, 0.0),
            d2: Complex64::new(0.0, 0.0),
        }
    }
}

/// Transport the state along the straight segment `a -> b` through
/// `y'' = -Q y` (RK4 in the segment parameter).
fn integrate_segment(
    g: &DiskGrid,
    q: &RingField,
    state: OdeState,
    a: Complex64,
    b: Complex64,
    step: f64,
) -> OdeState {
    let dz = b - a;
    let len = dz.norm();
    if len < 1e-15 {
        return state;
    }
    let nst = ((len / step).ceil() as usize).max(2);
    let ht = 1.0 / nst as f64;
    // t-parameterized state: (y, y_t) with y_t = dz * y_z
    let mut s = [state.y1, state.d1 * dz, state.y2, state.d2 * dz];
    let dz2 = dz * dz;
    let rhs = |t: f64, s: &[Complex64; 4]| -> [Complex64; 4] {
        let z = a + dz * t;
        let qv = interp(g, q, z);
        [s[1], -dz2 * qv * s[0], s[3], -dz2 * qv * s[2]]
    };
    let mut t = 0.0;
    for _ in 0..nst {
        let k1 = rhs(t, &s);
        let s2 = add(&s, &k1, ht / 2.0);
        let k2 = rhs(t + ht / 2.0, &s2);
        let s3 = add(&s, &k2, ht / 2.0);
        let k3 = rhs(t + ht / 2.0, &s3);
        let s4 = add(&s, &k3, ht);
        let k4 = rhs(t + ht, &s4);
        for c in 0..4 {
            s[c] += (k1[c] + k2[c] * 2.0 + k3[c] * 2.0 + k4[c]) * (ht / 6.0);
        }
        t += ht;
    }
    OdeState { y1: s[0], d1: s[1] / dz, y2: s[2], d2: s[3] / dz }
}

fn add(s: &[Complex64; 4], k: &[Complex64; 4], h: f64) -> [Complex64; 4] {
    [s[0] + k[0] * h, s[1] + k[1] * h, s[2] + k[2] * h, s[3] + k[3] * h]
}

fn segment_pole_conflict(a: Complex64, b: Complex64, poles: &[Complex64]) -> Option<Complex64> {
    let seg = b - a;
    let len2 = seg.norm_sqr();
    for &c in poles {
        let t = if len2 < 1e-30 {
            0.0
        } else {
            ((seg.conj() * (c - a)).re / len2).clamp(0.0, 1.0)
        };
        let d = (a + seg * t - c).norm();
        if d < POLE_CLEARANCE {
            return Some(c);
        }
    }
    None
}

/// Waypoints from `a` to `b` that keep clear of the poles.
fn plan_path(a: Complex64, b: Complex64, poles: &[Complex64]) -> Result<Vec<Complex64>> {
    match segment_pole_conflict(a, b, poles) {
        None => Ok(vec![a, b]),
        Some(c) => {
            let seg = b - a;
            let len = seg.norm().max(1e-15);
            let t = ((seg.conj() * (c - a)).re / (len * len)).clamp(0.1, 0.9);
            let foot = a + seg * t;
            let normal = Complex64::new(0.0, 1.0) * seg / len;
            let side = if ((c - a) * normal.conj()).re >= 0.0 { 1.0 } else { -1.0 };
            for offset in [-side * DETOUR_OFFSET, side * DETOUR_OFFSET, -side * 2.0 * DETOUR_OFFSET] {
                let wp = foot + normal * offset;
                if wp.norm() < 0.985
                    && segment_pole_conflict(a, wp, poles).is_none()
                    && segment_pole_conflict(wp, b, poles).is_none()
                {
                    return Ok(vec![a, wp, b]);
                }
            }
            Err(Error::Extraction(format!(
                "no pole-free path from {a} to {b} (pole at {c})"
            )))
        }
    }
}

fn transport(
    g: &DiskGrid,
    q: &RingField,
    state: OdeState,
    path: &[Complex64],
    step: f64,
) -> OdeState {
    let mut s = state;
    for w in path.windows(2) {
        s = integrate_segment(g, q, s, w[0], w[1], step);
    }
    s
}

/// Mobius jet fit at the base point: `I = s R / (1 - c R)`.
struct JetFit {
    s: Complex64,
    c: Complex64,
}

impl JetFit {
    fn map(&self, st: &OdeState) -> (Complex64, Complex64) {
        let r = st.y1 / st.y2;
        let rp = 1.0 / (st.y2 * st.y2); // Wronskian of the pair is 1
        let den = 1.0 - self.c * r;
        (self.s * r / den, self.s * rp / (den * den))
    }

    fn second(&self, st: &OdeState) -> Complex64 {
        let r = st.y1 / st.y2;
        let rp = 1.0 / (st.y2 * st.y2);
        let rpp = -2.0 * st.d2 / (st.y2 * st.y2 * st.y2);
        let den = 1.0 - self.c * r;
        let mp = self.s / (den * den);
        let mpp = 2.0 * self.s * self.c / (den * den * den);
        mpp * rp * rp + mp * rpp
    }
}

/// Options for the extraction (defaults match the spec contracts).
#[derive(Debug, Clone, Copy)]
pub struct ExtractOptions {
    /// Reject fields whose Q-holomorphy residual exceeds this gate.
    pub cr_gate: f64,
    /// RK substep length.
    pub step: f64,
    /// Try to recognize an exact Blaschke product from the zeros of `H`.
    pub recognize: bool,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions { cr_gate: 5.0, step: RK_STEP, recognize: true }
    }
}

/// Q-holomorphy residual alone (no ODE): worst `|d/dzbar Q|` on the compact
/// away from detected poles. The negative-control diagnostic.
pub fn q_holomorphy_residual(u: &ScalarField, weight: &HoloFn, rho: f64) -> Result<f64> {
    let pre = prepare_q(u, weight, rho)?;
    Ok(pre.cr_residual)
}

struct Prepared {
    rings_q: usize,
    q: RingField,
    wz: RingField,
    w0: Vec<f64>,
    cr_residual: f64,
    poles: Vec<Complex64>,
}

fn prepare_q(u: &ScalarField, weight: &HoloFn, rho: f64) -> Result<Prepared> {
    if !(rho > 0.0 && rho <= 0.95) {
        return Err(Error::InvalidInput(format!("compact radius rho = {rho} must be in (0, 0.95]")));
    }
    weight.validate()?;
    let g = &u.grid;
    let reach = (rho + 0.16).min(0.985);
    let rings_q = g.radii.iter().take_while(|&&r| r <= reach).count().max(8);
    if rings_q < 8 || rings_q > g.n_r {
        return Err(Error::InvalidInput("grid too coarse for extraction".into()));
    }
    // w = u + log|H|
    let mut w = vec![Complex64::new(0.0, 0.0); rings_q * g.n_theta];
    let mut w0 = vec![0.0; rings_q * g.n_theta];
    for i in 0..rings_q {
        for j in 0..g.n_theta {
            let z = g.z(i, j);
            let val = u.at(i, j) + weight.eval(z).norm().ln();
            if !val.is_finite() {
                return Err(Error::NonFinite(format!("w at node ({i},{j})")));
            }
            w[i * g.n_theta + j] = Complex64::new(val, 0.0);
            w0[i * g.n_theta + j] = val;
        }
    }
    let wfield = RingField { n_theta: g.n_theta, rings: rings_q, data: w };
    let wz = dz_field(g, &wfield, false);
    let wzz = dz_field(g, &wz, false);
    let mut qdata = vec![Complex64::new(0.0, 0.0); rings_q * g.n_theta];
    for k in 0..qdata.len() {
        qdata[k] = wzz.data[k] - wz.data[k] * wz.data[k];
    }
    let q = RingField { n_theta: g.n_theta, rings: rings_q, data: qdata };
    // poles: clusters of large |Q| inside rho + clearance, seeded by the
    // zeros of H when available
    let mut poles: Vec<Complex64> = weight
        .zeros()
        .unwrap_or_default()
        .into_iter()
        .filter(|z| z.norm() <= rho + POLE_CLEARANCE)
        .collect();
    let mut flagged: Vec<(f64, Complex64)> = Vec::new();
    for i in 0..rings_q {
        if g.radii[i] > rho + POLE_CLEARANCE {
            break;
        }
        for j in 0..g.n_theta {
            let a = q.at(i, j).norm();
            if a > POLE_Q_THRESHOLD {
                flagged.push((a, g.z(i, j)));
            }
        }
    }
    flagged.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    for (_, z) in flagged {
        if !poles.iter().any(|&p| (p - z).norm() < POLE_CLUSTER_RADIUS) {
            poles.push(z);
        }
    }
    // holomorphy residual away from the poles
    let dq = dz_field(g, &q, true);
    let mut cr: f64 = 0.0;
    for i in 0..rings_q {
        if g.radii[i] > rho {
            break;
        }
        let local = if i + 1 < rings_q {
            g.radii[i + 1] - g.radii[i]
        } else {
            g.radii[i] - g.radii[i - 1]
        };
        let excl = (3.0 * local.max(g.radii[i] * g.dtheta())).max(0.06);
        for j in 0..g.n_theta {
            let z = g.z(i, j);
            if poles.iter().any(|&p| (z - p).norm() < excl) {
                continue;
            }
            cr = cr.max(dq.at(i, j).norm());
        }
    }
    Ok(Prepared { rings_q, q, wz, w0, cr_residual: cr, poles })
}

/// Extract the Liouville map of a solution field on `{|z| <= rho}`.
pub fn liouville_extract(
    u: &ScalarField,
    weight: &HoloFn,
    rho: f64,
    opts: ExtractOptions,
) -> Result<LiouvilleMap> {
    let g = u.grid.clone();
    let pre = prepare_q(u, weight, rho)?;
    if pre.cr_residual > opts.cr_gate {
        return Err(Error::Extraction(format!(
            "Q-holomorphy residual {} exceeds the gate {}; the field does not look like a solution",
            pre.cr_residual, opts.cr_gate
        )));
    }
    let n_t = g.n_theta;
    let rings = g.radii.iter().take_while(|&&r| r <= rho).count();
    if rings == 0 {
        return Err(Error::InvalidInput("compact radius below the first ring".into()));
    }

    // base point: generous clearance from poles, small radius preferred
    let mut best: Option<(f64, usize, usize)> = None;
    for i in 0..pre.rings_q {
        if g.radii[i] > 0.45 {
            break;
        }
        for j in 0..n_t {
            let z = g.z(i, j);
            let dmin = pre
                .poles
                .iter()
                .map(|&p| (z - p).norm())
                .fold(2.0f64, f64::min);
            let score = dmin - 0.3 * z.norm();
            if best.map(|(s, _, _)| score > s).unwrap_or(true) {
                best = Some((score, i, j));
            }
        }
    }
    let (_, bi, bj) = best.ok_or_else(|| Error::Extraction("no base point candidates".into()))?;
    let z0 = g.z(bi, bj);
    let s = (pre.w0[bi * n_t + bj]).exp() / 2.0;
    let fit = JetFit {
        s: Complex64::new(s, 0.0),
        c: pre.wz.at(bi, bj),
    };

    // hub at the origin unless a pole sits close to it
    let origin = Complex64::new(0.0, 0.0);
    let hub_ok = pre.poles.iter().all(|&p| p.norm() > POLE_CLEARANCE + 0.02);
    let state_at = |target: Complex64| -> Result<OdeState> {
        let path = plan_path(z0, target, &pre.poles)?;
        Ok(transport(&g, &pre.q, OdeState::initial(), &path, opts.step))
    };

    let mut values = vec![Complex64::new(0.0, 0.0); rings * n_t];
    let mut derivs = vec![Complex64::new(0.0, 0.0); rings * n_t];
    let mut hub_state = OdeState::initial();
    if hub_ok {
        hub_state = state_at(origin)?;
    }
    let mut ray_consistency: f64 = 0.0;
    let mut states_prev: Vec<OdeState> = Vec::new();
    for j in 0..n_t {
        let tip = Complex64::from_polar(g.radii[rings - 1], g.angles[j]);
        let spoke_clear = hub_ok && segment_pole_conflict(origin, tip, &pre.poles).is_none();
        let mut states_j: Vec<OdeState> = Vec::with_capacity(rings);
        if spoke_clear {
            let mut st = hub_state;
            let mut prev = origin;
            for i in 0..rings {
                let node = g.z(i, j);
                st = integrate_segment(&g, &pre.q, st, prev, node, opts.step);
                prev = node;
                states_j.push(st);
                let (v, d) = fit.map(&st);
                values[i * n_t + j] = v;
                derivs[i * n_t + j] = d;
            }
        } else {
            for i in 0..rings {
                let node = g.z(i, j);
                let st = state_at(node)?;
                states_j.push(st);
                let (v, d) = fit.map(&st);
                values[i * n_t + j] = v;
                derivs[i * n_t + j] = d;
            }
        }
        // ray-to-ray consistency: continue the previous spoke's state
        // through the connecting arc chord and compare
        if j > 0 && j % 8 == 0 {
            for &i in &[rings / 2, rings.saturating_sub(1)] {
                let from = g.z(i, j - 1);
                let to = g.z(i, j);
                if segment_pole_conflict(from, to, &pre.poles).is_none() {
                    let st = integrate_segment(&g, &pre.q, states_prev[i], from, to, opts.step);
                    let (v, _) = fit.map(&st);
                    ray_consistency = ray_consistency.max((v - values[i * n_t + j]).norm());
                }
            }
        }
        states_prev = states_j;
    }

    // 2-jet at the origin for the final normalization
    let st0 = if hub_ok { hub_state } else { state_at(origin)? };
    let (i_at0, ip_at0) = fit.map(&st0);
    let ipp_at0 = fit.second(&st0);
    if i_at0.norm() >= 1.0 {
        return Err(Error::Extraction(format!("|I(0)| = {} >= 1", i_at0.norm())));
    }
    let a = i_at0;
    let asq = 1.0 - a.norm_sqr();
    let gp0 = ip_at0 / asq;
    let gpp0 = 2.0 * a.conj() / (asq * asq) * ip_at0 * ip_at0 + ipp_at0 / asq;
    let lead = if gp0.norm() > 1e-9 { gp0 } else { gpp0 / 2.0 };
    if lead.norm() <= 1e-12 {
        return Err(Error::Extraction("degenerate 2-jet at the origin".into()));
    }
    let rot = Complex64::from_polar(1.0, -lead.arg());
    for k in 0..values.len() {
        let v = values[k];
        let den = 1.0 - a.conj() * v;
        let vp = derivs[k];
        values[k] = rot * (v - a) / den;
        derivs[k] = rot * asq / (den * den) * vp;
    }
    let jet0 = (rot * gp0, rot * gpp0);

    // validation: e^w = 2|I'|/(1-|I|^2) away from pole disks, |I| < 1
    let mut metric_defect: f64 = 0.0;
    for i in 0..rings {
        for j in 0..n_t {
            let z = g.z(i, j);
            let v = values[i * n_t + j];
            if v.norm() >= 1.0 {
                return Err(Error::Extraction(format!(
                    "|I| = {} >= 1 at node ({i},{j})",
                    v.norm()
                )));
            }
            if pre.poles.iter().any(|&p| (z - p).norm() < 0.06) {
                continue;
            }
            let lam = 2.0 * derivs[i * n_t + j].norm() / (1.0 - v.norm_sqr());
            let ew = pre.w0[i * n_t + j].exp();
            metric_defect = metric_defect.max((lam - ew).abs() / (1.0 + ew));
        }
    }

    let mut inner_profile = Vec::with_capacity(rings);
    for i in 0..rings {
        let mut mn = f64::INFINITY;
        let mut mean = 0.0;
        for j in 0..n_t {
            let m = values[i * n_t + j].norm();
            mn = mn.min(m);
            mean += m;
        }
        inner_profile.push((g.radii[i], mn, mean / n_t as f64));
    }

    let mut q_out = vec![Complex64::new(0.0, 0.0); rings * n_t];
    q_out.copy_from_slice(&pre.q.data[..rings * n_t]);

    let mut map = LiouvilleMap {
        grid: g.clone(),
        rho,
        rings,
        values,
        derivs,
        q_field: q_out,
        cr_residual: pre.cr_residual,
        metric_defect,
        ray_consistency,
        inner_profile,
        poles: pre.poles,
        jet0,
        recognized: None,
    };
    if opts.recognize {
        map.recognized = recognize_blaschke(&map, weight);
    }
    Ok(map)
}

/// Try to identify the extracted map as the Blaschke product whose critical
/// set is the zero set of `H` (the canonical/maximal coincidence situation).
fn recognize_blaschke(map: &LiouvilleMap, weight: &HoloFn) -> Option<BlaschkeProduct> {
    let zeros = weight.zeros().ok()?;
    if zeros.len() > 7 {
        return None;
    }
    let sol = heins_solve(&zeros, 1e-9).ok()?;
    let (candidate, _) = sol.product.normalize().ok()?;
    // compare on a sample of covered nodes
    let g = &map.grid;
    let mut worst: f64 = 0.0;
    let step_i = (map.rings / 6).max(1);
    for i in (0..map.rings).step_by(step_i) {
        for j in (0..g.n_theta).step_by((g.n_theta / 16).max(1)) {
            let z = g.z(i, j);
            worst = worst.max((candidate.eval(z) - map.value_at(i, j)).norm());
        }
    }
    if worst <= 5e-3 {
        Some(candidate)
    } else {
        None
    }
}
