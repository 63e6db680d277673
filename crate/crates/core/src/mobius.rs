//! The disk Mobius group `aut(D)`: maps `m(z) = e^{i phi} (z - a)/(1 - conj(a) z)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusDisk {
    pub a: Complex64,
    pub phi: f64,
}

impl MobiusDisk {
    pub fn new(a: Complex64, phi: f64) -> Result<MobiusDisk> {
        if a.norm() >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "Mobius parameter |a| = {} must be < 1",
                a.norm()
            )));
        }
        Ok(MobiusDisk { a, phi: phi.rem_euclid(crate::grid::TAU) })
    }

    pub fn identity() -> MobiusDisk {
        MobiusDisk { a: Complex64::new(0.0, 0.0), phi: 0.0 }
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.a.norm() < tol && (self.phi.min(crate::grid::TAU - self.phi)) < tol
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        Complex64::from_polar(1.0, self.phi) * (z - self.a) / (1.0 - self.a.conj() * z)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let den = 1.0 - self.a.conj() * z;
        Complex64::from_polar(1.0, self.phi) * (1.0 - self.a.norm_sqr()) / (den * den)
    }

    pub fn inverse(&self) -> MobiusDisk {
        let rot = Complex64::from_polar(1.0, self.phi);
        MobiusDisk {
            a: -rot * self.a,
            phi: (-self.phi).rem_euclid(crate::grid::TAU),
        }
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &MobiusDisk) -> MobiusDisk {
        // zero of the composition: other^{-1}(a_self)
        let a = other.inverse().apply(self.a);
        debug_assert!(a.norm() < 1.0);
        // evaluate at the probe farthest from the pole of the normal form
        let probe = [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.6, 0.0),
            Complex64::new(-0.6, 0.0),
            Complex64::new(0.0, 0.6),
        ]
        .into_iter()
        .max_by(|p, q| {
            (p - a).norm().partial_cmp(&(q - a).norm()).unwrap()
        })
        .unwrap();
        let value = self.apply(other.apply(probe));
        let base = (probe - a) / (1.0 - a.conj() * probe);
        let rot = value / base;
        MobiusDisk { a, phi: rot.arg().rem_euclid(crate::grid::TAU) }
    }

    /// The automorphism taking `w1` to `w2` built as `m_{w2}^{-1} . m_{w1}`.
    pub fn between(w1: Complex64, w2: Complex64) -> Result<MobiusDisk> {
        if w1.norm() >= 1.0 || w2.norm() >= 1.0 {
            return Err(Error::InvalidInput(
                "mobius_between arguments must lie in the open disk".into(),
            ));
        }
        let m1 = MobiusDisk { a: w1, phi: 0.0 };
        let m2 = MobiusDisk { a: w2, phi: 0.0 };
        Ok(m2.inverse().compose(&m1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples() -> Vec<Complex64> {
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5, 0.2),
            Complex64::new(-0.3, 0.7),
            Complex64::new(0.9, 0.0),
            Complex64::from_polar(1.0, 1.2),
        ]
    }

    #[test]
    fn identity_map() {
        let m = MobiusDisk::identity();
        for z in samples() {
            assert!((m.apply(z) - z).norm() < 1e-15);
        }
    }

    #[test]
    fn circle_maps_to_circle() {
        let m = MobiusDisk::new(Complex64::new(0.4, -0.3), 2.1).unwrap();
        for k in 0..32 {
            let z = Complex64::from_polar(1.0, k as f64 * 0.196);
            assert!((m.apply(z).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn inverse_composes_to_identity() {
        let m = MobiusDisk::new(Complex64::new(0.37, 0.11), 0.9).unwrap();
        let inv = m.inverse();
        for z in samples() {
            assert!((inv.apply(m.apply(z)) - z).norm() < 1e-12);
            assert!((m.apply(inv.apply(z)) - z).norm() < 1e-12);
        }
        let c = m.compose(&inv);
        assert!(c.is_identity(1e-12));
    }

    #[test]
    fn compose_matches_pointwise() {
        let m1 = MobiusDisk::new(Complex64::new(0.2, 0.5), 1.0).unwrap();
        let m2 = MobiusDisk::new(Complex64::new(-0.4, 0.1), 5.5).unwrap();
        let c = m1.compose(&m2);
        for z in samples() {
            assert!((c.apply(z) - m1.apply(m2.apply(z))).norm() < 1e-12);
        }
    }

    #[test]
    fn between_sends_w1_to_w2() {
        let w1 = Complex64::new(0.3, 0.0);
        let w2 = Complex64::new(-0.1, 0.6);
        let m = MobiusDisk::between(w1, w2).unwrap();
        assert!((m.apply(w1) - w2).norm() < 1e-13);
        // constant-0.3 map composed with between(0.3, 0) becomes constant 0
        let m0 = MobiusDisk::between(w1, Complex64::new(0.0, 0.0)).unwrap();
        assert!(m0.apply(w1).norm() < 1e-13);
        assert!(MobiusDisk::between(Complex64::new(1.0, 0.0), w2).is_err());
    }
}
