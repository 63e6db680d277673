//! Complex polynomials and root finding.
//!
//! Roots come from the companion matrix: a complex Hessenberg QR iteration
//! with Wilkinson shifts, followed by one Newton polish step on the original
//! polynomial.  Multiple roots are reported by clustering at radius 1e-7.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Polynomial with ascending complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(coeffs: Vec<Complex64>) -> Poly {
        let mut p = Poly { coeffs };
        if p.coeffs.is_empty() {
            p.coeffs.push(ZERO);
        }
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Poly {
        Poly { coeffs: vec![c] }
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Poly {
        let mut p = Poly::constant(ONE);
        for &r in roots {
            p = p.mul(&Poly::new(vec![-r, ONE]));
        }
        p
    }

    /// Degree after ignoring trailing coefficients that are negligible
    /// relative to the largest one.
    pub fn degree(&self) -> usize {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0;
        }
        let tol = scale * 1e-14;
        self.coeffs
            .iter()
            .rposition(|c| c.norm() > tol)
            .unwrap_or(0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::constant(ZERO);
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, &c)| c * (k as f64 + 1.0))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![ZERO; n];
        for (k, slot) in out.iter_mut().enumerate() {
            if k < self.coeffs.len() {
                *slot += self.coeffs[k];
            }
            if k < other.coeffs.len() {
                *slot += other.coeffs[k];
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-ONE))
    }

    /// All complex roots (with multiplicity), unordered.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let deg = self.degree();
        if deg == 0 {
            return Ok(Vec::new());
        }
        let lead = self.coeffs[deg];
        if deg == 1 {
            return Ok(vec![-self.coeffs[0] / lead]);
        }
        // monic companion matrix, upper Hessenberg
        let n = deg;
        let mut h = vec![vec![ZERO; n]; n];
        for k in 0..n {
            h[k][n - 1] = -self.coeffs[k] / lead;
        }
        for k in 1..n {
            h[k][k - 1] = ONE;
        }
        let mut roots = hessenberg_eigenvalues(&mut h)?;
        // one Newton polish step on the original polynomial
        let dp = self.derivative();
        for r in roots.iter_mut() {
            let p = self.eval(*r);
            let d = dp.eval(*r);
            if d.norm() > 1e-300 {
                let cand = *r - p / d;
                if self.eval(cand).norm() <= p.norm() {
                    *r = cand;
                }
            }
        }
        Ok(roots)
    }
}

/// Eigenvalues of a complex upper Hessenberg matrix by shifted QR with
/// Givens rotations. Destroys `h`.
fn hessenberg_eigenvalues(h: &mut [Vec<Complex64>]) -> Result<Vec<Complex64>> {
    let n = h.len();
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n; // active block is rows/cols [0, hi)
    let mut iter_guard = 0usize;
    let max_total = 60 * n + 100;
    while hi > 0 {
        if hi == 1 {
            eigs.push(h[0][0]);
            hi = 0;
            continue;
        }
        // deflate where a subdiagonal is negligible
        let mut lo = hi - 1;
        while lo > 0 {
            let small = 1e-15 * (h[lo - 1][lo - 1].norm() + h[lo][lo].norm()).max(1e-300);
            if h[lo][lo - 1].norm() <= small {
                h[lo][lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eigs.push(h[hi - 1][hi - 1]);
            hi -= 1;
            continue;
        }
        iter_guard += 1;
        if iter_guard > max_total {
            return Err(Error::RootFinding(format!(
                "QR iteration did not deflate after {max_total} sweeps"
            )));
        }
        // Wilkinson shift from the trailing 2x2 of the active block
        let (a, b) = (h[hi - 2][hi - 2], h[hi - 2][hi - 1]);
        let (c, d) = (h[hi - 1][hi - 2], h[hi - 1][hi - 1]);
        let tr = a + d;
        let det = a * d - b * c;
        let disc = (tr * tr - det * 4.0).sqrt();
        let m1 = (tr + disc) * 0.5;
        let m2 = (tr - disc) * 0.5;
        let mut mu = if (m1 - d).norm() <= (m2 - d).norm() { m1 } else { m2 };
        if iter_guard % 17 == 0 {
            // exceptional shift to break rare cycles
            mu += Complex64::new(h[hi - 1][hi - 2].norm(), 0.0);
        }
        // explicit shifted QR on the block [lo, hi): H <- R Q + mu I
        let m = hi - lo;
        let mut rot: Vec<(Complex64, f64)> = Vec::with_capacity(m - 1);
        for k in lo..hi {
            h[k][k] -= mu;
        }
        for k in 0..m - 1 {
            let i = lo + k;
            let (x, y) = (h[i][i], h[i + 1][i]);
            let norm = (x.norm_sqr() + y.norm_sqr()).sqrt();
            if norm < 1e-300 {
                rot.push((ONE, 0.0));
                continue;
            }
            // unitary [cs, sn; -conj(sn), cs] with cs real
            let cs = x.norm() / norm;
            let phase = if x.norm() > 1e-300 { x / x.norm() } else { ONE };
            let sn = phase * y.conj() / norm;
            rot.push((sn, cs));
            for col in i..hi {
                let (u, v) = (h[i][col], h[i + 1][col]);
                h[i][col] = u * cs + v * sn;
                h[i + 1][col] = -u * sn.conj() + v * cs;
            }
        }
        for k in 0..m - 1 {
            let i = lo + k;
            let (sn, cs) = rot[k];
            // right-multiply columns i, i+1 by the adjoint rotation
            let top = (i + 2).min(hi);
            for row in lo..top {
                let (u, v) = (h[row][i], h[row][i + 1]);
                h[row][i] = u * cs + v * sn.conj();
                h[row][i + 1] = -u * sn + v * cs;
            }
        }
        for k in lo..hi {
            h[k][k] += mu;
        }
    }
    Ok(eigs)
}

/// Coefficients of the Taylor series of `p/q` at 0 up to `order`, requiring
/// `q(0) != 0`.
pub(crate) fn series_divide(p: &Poly, q: &Poly, order: usize) -> Vec<Complex64> {
    let q0 = q.coeffs[0];
    let mut out = vec![ZERO; order + 1];
    for k in 0..=order {
        let mut acc = if k < p.coeffs.len() { p.coeffs[k] } else { ZERO };
        for j in 1..=k {
            if j < q.coeffs.len() {
                acc -= q.coeffs[j] * out[k - j];
            }
        }
        out[k] = acc / q0;
    }
    out
}

/// Group a root list into clusters of radius `tol`, returning
/// `(representative, multiplicity)` with the representative the cluster mean.
pub fn cluster_roots(roots: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    let mut sorted: Vec<Complex64> = roots.to_vec();
    sorted.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    for &r in &sorted {
        if let Some((c, m)) = out.iter_mut().find(|(c, _)| (*c - r).norm() <= tol) {
            let k = *m as f64;
            *c = (*c * k + r) / (k + 1.0);
            *m += 1;
        } else {
            out.push((r, 1));
        }
    }
    out
}

/// Sort lexicographically by (re, im) for deterministic multiset reporting.
pub fn sort_lex(points: &mut [Complex64]) {
    points.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unordered_close(mut got: Vec<Complex64>, mut want: Vec<Complex64>, tol: f64) {
        sort_lex(&mut got);
        sort_lex(&mut want);
        assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn quadratic_roots() {
        // (z - 2)(z + 3i) = z^2 + (3i - 2) z - 6i
        let p = Poly::new(vec![
            Complex64::new(0.0, -6.0),
            Complex64::new(-2.0, 3.0),
            ONE,
        ]);
        unordered_close(
            p.roots().unwrap(),
            vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, -3.0)],
            1e-12,
        );
    }

    #[test]
    fn roots_of_unity() {
        // z^8 - 1
        let mut c = vec![ZERO; 9];
        c[0] = -ONE;
        c[8] = ONE;
        let want: Vec<Complex64> = (0..8)
            .map(|k| Complex64::from_polar(1.0, k as f64 * std::f64::consts::PI / 4.0))
            .collect();
        unordered_close(Poly::new(c).roots().unwrap(), want, 1e-10);
    }

    #[test]
    fn multiple_root_clustering() {
        // (z - 0.5)^3 (z + 0.25)
        let p = Poly::from_roots(&[
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.25, 0.0),
        ]);
        let roots = p.roots().unwrap();
        assert_eq!(roots.len(), 4);
        let clusters = cluster_roots(&roots, 1e-4);
        let triple = clusters.iter().find(|(_, m)| *m == 3).expect("triple root");
        assert!((triple.0 - Complex64::new(0.5, 0.0)).norm() < 1e-4);
    }

    #[test]
    fn degree_drop_with_tiny_leading_coeff() {
        let p = Poly::new(vec![ONE, ONE, Complex64::new(1e-18, 0.0)]);
        assert_eq!(p.degree(), 1);
        let r = p.roots().unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] + ONE).norm() < 1e-12);
    }

    #[test]
    fn random_polys_reconstruct() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..25 {
            let deg = rng.gen_range(2..=10);
            let roots: Vec<Complex64> = (0..deg)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let p = Poly::from_roots(&roots);
            let got = p.roots().unwrap();
            assert_eq!(got.len(), deg);
            // every reported root has a small residual relative to gradient scale
            for &r in &got {
                let res = p.eval(r).norm();
                assert!(res < 1e-8, "residual {res} at {r} for roots {roots:?}");
            }
        }
    }
}
