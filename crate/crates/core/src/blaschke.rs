//! Finite Blaschke products `F(z) = e^{i theta} prod (z - a_i)/(1 - conj(a_i) z)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::io::Json;
use crate::mobius::MobiusDisk;
use crate::poly::{cluster_roots, series_divide, sort_lex, Poly, ONE, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    pub zeros: Vec<Complex64>,
    pub rotation: f64,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex64>, rotation: f64) -> Result<BlaschkeProduct> {
        for a in &zeros {
            if a.norm() >= 1.0 {
                return Err(Error::InvalidInput(format!(
                    "Blaschke zero |a| = {} must be < 1",
                    a.norm()
                )));
            }
        }
        Ok(BlaschkeProduct { zeros, rotation: rotation.rem_euclid(crate::grid::TAU) })
    }

    /// The identity map `z`.
    pub fn identity() -> BlaschkeProduct {
        BlaschkeProduct { zeros: vec![ZERO], rotation: 0.0 }
    }

    /// `z^d`.
    pub fn power(d: usize) -> BlaschkeProduct {
        BlaschkeProduct { zeros: vec![ZERO; d], rotation: 0.0 }
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    fn rot(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.rotation)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut out = self.rot();
        for &a in &self.zeros {
            out *= (z - a) / (1.0 - a.conj() * z);
        }
        out
    }

    /// Exact derivative via the product rule (removable singularities at the
    /// zeros handled by never dividing by a factor).
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let d = self.degree();
        let factors: Vec<Complex64> = self
            .zeros
            .iter()
            .map(|&a| (z - a) / (1.0 - a.conj() * z))
            .collect();
        let dfactors: Vec<Complex64> = self
            .zeros
            .iter()
            .map(|&a| {
                let den = 1.0 - a.conj() * z;
                (1.0 - a.norm_sqr()) / (den * den)
            })
            .collect();
        let mut out = ZERO;
        for i in 0..d {
            let mut term = dfactors[i];
            for (j, &f) in factors.iter().enumerate() {
                if j != i {
                    term *= f;
                }
            }
            out += term;
        }
        self.rot() * out
    }

    /// Numerator `e^{i theta} P` and denominator `Q` as polynomials.
    pub fn as_rational(&self) -> (Poly, Poly) {
        let mut p = Poly::constant(self.rot());
        let mut q = Poly::constant(ONE);
        for &a in &self.zeros {
            p = p.mul(&Poly::new(vec![-a, ONE]));
            q = q.mul(&Poly::new(vec![ONE, -a.conj()]));
        }
        (p, q)
    }

    /// Numerator of `F'` (degree at most `2d - 2`): `P'Q - PQ'`.
    pub fn derivative_numerator(&self) -> Poly {
        let (p, q) = self.as_rational();
        p.derivative().mul(&q).sub(&p.mul(&q.derivative()))
    }

    /// Critical points inside the open disk, with multiplicity, sorted
    /// lexicographically by (re, im).  Exactly `degree - 1` of them.
    pub fn critical_points(&self) -> Result<Vec<Complex64>> {
        let d = self.degree();
        if d == 0 {
            return Err(Error::InvalidInput("constant product has no critical structure".into()));
        }
        let all = self.critical_points_full()?;
        let mut inside: Vec<Complex64> = all
            .iter()
            .copied()
            .filter(|c| c.norm() < 1.0 - 1e-10)
            .collect();
        if inside.len() != d - 1 {
            let residuals: Vec<f64> = all.iter().map(|&c| self.derivative(c).norm()).collect();
            return Err(Error::RootFinding(format!(
                "expected {} interior critical points, found {}; roots {:?} residuals {:?}",
                d - 1,
                inside.len(),
                all,
                residuals
            )));
        }
        sort_lex(&mut inside);
        Ok(inside)
    }

    /// All roots of the derivative numerator (the full `2d - 2` set is
    /// symmetric under `z -> 1/conj(z)`; used as a diagnostic).
    pub fn critical_points_full(&self) -> Result<Vec<Complex64>> {
        self.derivative_numerator().roots()
    }

    /// Sampled unimodularity defect `max | |F| - 1 |` over boundary points.
    pub fn boundary_defect(&self, samples: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..samples {
            let z = Complex64::from_polar(1.0, (k as f64 + 0.3) * crate::grid::TAU / samples as f64);
            worst = worst.max((self.eval(z).norm() - 1.0).abs());
        }
        worst
    }

    /// Post-composition `m . F`, recovered exactly as a Blaschke product:
    /// its zeros are the `d` solutions of `F(z) = a`.
    pub fn post_compose(&self, m: &MobiusDisk) -> Result<BlaschkeProduct> {
        let (p, q) = self.as_rational();
        // e^{i theta} P - a Q = 0
        let num = p.sub(&q.scale(m.a));
        let mut zeros = num.roots()?;
        if zeros.len() != self.degree() {
            return Err(Error::RootFinding(format!(
                "post-composition expected {} zeros, got {}",
                self.degree(),
                zeros.len()
            )));
        }
        for z in &zeros {
            if z.norm() >= 1.0 {
                return Err(Error::RootFinding(format!(
                    "post-composition produced zero outside the disk: {z}"
                )));
            }
        }
        sort_lex(&mut zeros);
        let bare = BlaschkeProduct { zeros, rotation: 0.0 };
        // recover the rotation at a boundary probe
        let probe = Complex64::new(1.0, 0.0);
        let eta = m.apply(self.eval(probe)) / bare.eval(probe);
        debug_assert!((eta.norm() - 1.0).abs() < 1e-8);
        BlaschkeProduct::new(bare.zeros, eta.arg())
    }

    /// Taylor coefficients of `F` at 0 up to `order` inclusive, computed by
    /// exact series division of the rational form.
    pub fn taylor_at_zero(&self, order: usize) -> Vec<Complex64> {
        let (p, q) = self.as_rational();
        series_divide(&p, &q, order)
    }

    /// Normal form under post-composition: `(F_norm, m)` with
    /// `F_norm = m . F`, `F_norm(0) = 0`, and the first nonvanishing Taylor
    /// coefficient of `F_norm` at 0 real and positive.
    pub fn normalize(&self) -> Result<(BlaschkeProduct, MobiusDisk)> {
        let a = self.eval(ZERO);
        let recenter = MobiusDisk::new(a, 0.0)?;
        let g = self.post_compose(&recenter)?;
        let coeffs = g.taylor_at_zero(self.degree());
        let lead = coeffs
            .iter()
            .skip(1)
            .find(|c| c.norm() > 1e-11)
            .ok_or_else(|| Error::InvalidInput("map is constant to working precision".into()))?;
        let phi = -lead.arg();
        let m = MobiusDisk::new(a, phi)?;
        if recenter.is_identity(1e-14) && phi.abs() < 1e-14 {
            return Ok((self.clone(), MobiusDisk::identity()));
        }
        let normalized = BlaschkeProduct::new(g.zeros, g.rotation + phi)?;
        Ok((normalized, m))
    }

    pub fn to_json(&self) -> Json {
        let mut o = Json::obj();
        o.push("kind", Json::Str("blaschke".into()));
        o.push(
            "zeros",
            Json::Array(self.zeros.iter().map(|&z| Json::complex(z)).collect()),
        );
        o.push("rotation", Json::Float(self.rotation));
        o
    }

    pub fn from_json(v: &serde_json::Value) -> Result<BlaschkeProduct> {
        let kind = v["kind"].as_str().unwrap_or_default();
        if kind != "blaschke" {
            return Err(Error::Parse(format!("expected kind \"blaschke\", got {kind:?}")));
        }
        let zeros = parse_complex_array(&v["zeros"])?;
        let rotation = v["rotation"].as_f64().unwrap_or(0.0);
        BlaschkeProduct::new(zeros, rotation)
    }
}

pub(crate) fn parse_complex_array(v: &serde_json::Value) -> Result<Vec<Complex64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("expected an array of [re, im] pairs".into()))?;
    arr.iter()
        .map(|pair| {
            let p = pair
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Parse("complex entries must be [re, im]".into()))?;
            Ok(Complex64::new(
                p[0].as_f64().ok_or_else(|| Error::Parse("bad re".into()))?,
                p[1].as_f64().ok_or_else(|| Error::Parse("bad im".into()))?,
            ))
        })
        .collect()
}

/// Multiplicity-aware critical set: clusters at radius 1e-7.
pub fn critical_multiset(b: &BlaschkeProduct) -> Result<Vec<(Complex64, usize)>> {
    Ok(cluster_roots(&b.critical_points()?, 1e-7))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_matches_spec_examples() {
        let sq = BlaschkeProduct::power(2);
        assert!((sq.eval(c(0.5, 0.0)) - c(0.25, 0.0)).norm() < 1e-15);
        let b = BlaschkeProduct::new(vec![c(0.5, 0.0)], 0.0).unwrap();
        assert!(b.eval(c(0.5, 0.0)).norm() < 1e-15);
        assert!((b.eval(c(1.0, 0.0)).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn derivative_examples() {
        let sq = BlaschkeProduct::power(2);
        assert!((sq.derivative(c(0.3, 0.0)) - c(0.6, 0.0)).norm() < 1e-15);
        // F = z (z - 0.5)/(1 - 0.5 z): F'(0) = -0.5
        let b = BlaschkeProduct::new(vec![ZERO, c(0.5, 0.0)], 0.0).unwrap();
        assert!((b.derivative(ZERO) - c(-0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let d = rng.gen_range(1..=5);
            let zeros: Vec<Complex64> = (0..d)
                .map(|_| Complex64::from_polar(rng.gen_range(0.0..0.8), rng.gen_range(0.0..6.28)))
                .collect();
            let b = BlaschkeProduct::new(zeros, rng.gen_range(0.0..6.28)).unwrap();
            let z = Complex64::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(0.0..6.28));
            let h = 1e-5;
            let fd = (b.eval(z + c(h, 0.0)) - b.eval(z - c(h, 0.0))) / (2.0 * h);
            assert!(
                (fd - b.derivative(z)).norm() < 1e-6,
                "fd oracle mismatch at {z}"
            );
        }
    }

    #[test]
    fn critical_points_of_powers() {
        assert_eq!(BlaschkeProduct::power(2).critical_points().unwrap(), vec![ZERO]);
        let c3 = BlaschkeProduct::power(3).critical_points().unwrap();
        assert_eq!(c3.len(), 2);
        assert!(c3.iter().all(|c| c.norm() < 1e-8));
    }

    #[test]
    fn critical_point_residual_and_symmetry() {
        let b = BlaschkeProduct::new(vec![ZERO, c(0.6, 0.0)], 0.0).unwrap();
        let cp = b.critical_points().unwrap();
        assert_eq!(cp.len(), 1);
        assert!(b.derivative(cp[0]).norm() <= 1e-10);
        // full root set symmetric under z -> 1/conj(z)
        let full = b.critical_points_full().unwrap();
        for &r in &full {
            if r.norm() > 1e-8 {
                let mirror = 1.0 / r.conj();
                assert!(
                    full.iter().any(|&s| (s - mirror).norm() < 1e-6 * (1.0 + mirror.norm())),
                    "no mirror for {r}"
                );
            }
        }
    }

    #[test]
    fn unimodularity_random_products() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let d = rng.gen_range(1..=6);
            let zeros: Vec<Complex64> = (0..d)
                .map(|_| Complex64::from_polar(rng.gen_range(0.0..0.95), rng.gen_range(0.0..6.28)))
                .collect();
            let b = BlaschkeProduct::new(zeros, rng.gen_range(0.0..6.28)).unwrap();
            assert!(b.boundary_defect(64) <= 1e-10);
            assert_eq!(b.critical_points().unwrap().len(), d - 1);
        }
    }

    #[test]
    fn post_compose_invariance_of_critical_points() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let zeros: Vec<Complex64> = (0..3)
                .map(|_| Complex64::from_polar(rng.gen_range(0.0..0.8), rng.gen_range(0.0..6.28)))
                .collect();
            let b = BlaschkeProduct::new(zeros, 0.3).unwrap();
            let m = MobiusDisk::new(
                Complex64::from_polar(rng.gen_range(0.0..0.7), rng.gen_range(0.0..6.28)),
                rng.gen_range(0.0..6.28),
            )
            .unwrap();
            let composed = b.post_compose(&m).unwrap();
            // pointwise agreement with m(F(z))
            for k in 0..8 {
                let z = Complex64::from_polar(0.77, k as f64 * 0.7853);
                assert!((composed.eval(z) - m.apply(b.eval(z))).norm() < 1e-9);
            }
            let c1 = b.critical_points().unwrap();
            let c2 = composed.critical_points().unwrap();
            for (x, y) in c1.iter().zip(&c2) {
                assert!((x - y).norm() < 1e-8, "{c1:?} vs {c2:?}");
            }
        }
    }

    #[test]
    fn normalize_square_is_unchanged() {
        let sq = BlaschkeProduct::power(2);
        let (norm, m) = sq.normalize().unwrap();
        assert!(m.is_identity(1e-12));
        assert_eq!(norm, sq);
    }

    #[test]
    fn normalize_rational_selfmap_example() {
        // F = (z^2 + 0.2)/(1 + 0.2 z^2) is the Blaschke product with zero
        // pair at +-i sqrt(0.2)
        let s = (0.2f64).sqrt();
        let b = BlaschkeProduct::new(vec![c(0.0, s), c(0.0, -s)], 0.0).unwrap();
        assert!((b.eval(c(1.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-12);
        let (norm, _m) = b.normalize().unwrap();
        assert!(norm.eval(ZERO).norm() < 1e-10);
        let jet = norm.taylor_at_zero(2);
        let lead = if jet[1].norm() > 1e-11 { jet[1] } else { jet[2] };
        assert!(lead.im.abs() < 1e-10 && lead.re > 0.0, "lead = {lead}");
    }

    #[test]
    fn blaschke_json_round_trip() {
        let b = BlaschkeProduct::new(vec![c(0.1, -0.2), c(0.0, 0.55)], 1.25).unwrap();
        let text = b.to_json().render();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let b2 = BlaschkeProduct::from_json(&v).unwrap();
        assert_eq!(b, b2);
    }
}
