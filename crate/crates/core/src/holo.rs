//! Exactly-evaluable holomorphic functions on the closed disk.
//!
//! `HoloFn` is the weight `H` of the curvature equation and also serves as a
//! general evaluable map (polynomial self-maps, Blaschke products and their
//! derivatives, outer functions from sampled boundary modulus).

use num_complex::Complex64;

use crate::blaschke::{parse_complex_array, BlaschkeProduct};
use crate::error::{Error, Result};
use crate::io::Json;
use crate::mobius::MobiusDisk;
use crate::poly::{series_divide, sort_lex, Poly, ONE, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub enum HoloFn {
    Poly(Poly),
    /// Ratio of polynomials; the denominator must not vanish on the closed disk.
    Rational { num: Poly, den: Poly },
    Blaschke(BlaschkeProduct),
    /// The derivative `B'` of a finite Blaschke product.
    BlaschkeDerivative(BlaschkeProduct),
    Outer(OuterFn),
}

/// Zero-free function with prescribed boundary modulus, stored as the
/// exponential of a truncated Herglotz series: `exp(sum_k c_k z^k)`.
#[derive(Debug, Clone)]
pub struct OuterFn {
    /// The boundary modulus samples the function was built from (uniform
    /// angles with half-cell offset).
    pub modulus: Vec<f64>,
    /// Herglotz coefficients: `c_0` real, `c_k = 2 * fft_k(log w)` for
    /// `0 < k < n/2`, Nyquist term unhalved.
    pub herglotz: Vec<Complex64>,
    /// How many log-modulus samples were clamped at +-40.
    pub clamped: usize,
}

impl PartialEq for OuterFn {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
}

impl OuterFn {
    /// Build from positive boundary samples at uniform half-offset angles.
    pub fn from_modulus(samples: &[f64]) -> Result<OuterFn> {
        let n = samples.len();
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "outer spec needs an even number >= 4 of samples, got {n}"
            )));
        }
        let mut clamped = 0usize;
        let mut g = Vec::with_capacity(n);
        for &w in samples {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "outer modulus must be positive and finite, got {w}"
                )));
            }
            let mut lw = w.ln();
            if lw.abs() > 40.0 {
                lw = lw.clamp(-40.0, 40.0);
                clamped += 1;
            }
            g.push(lw);
        }
        // plain DFT at the half-offset sample angles t_j = (j + 1/2) 2pi/n
        let half = n / 2;
        let mut herglotz = vec![ZERO; half + 1];
        for (k, coeff) in herglotz.iter_mut().enumerate() {
            let mut acc = ZERO;
            for (j, &gj) in g.iter().enumerate() {
                let t = (j as f64 + 0.5) * crate::grid::TAU / n as f64;
                acc += gj * Complex64::from_polar(1.0, -(k as f64) * t);
            }
            acc /= n as f64;
            *coeff = match k {
                0 => Complex64::new(acc.re, 0.0),
                k if k == half => acc,
                _ => acc * 2.0,
            };
        }
        Ok(OuterFn { modulus: samples.to_vec(), herglotz, clamped })
    }

    fn herglotz_sum(&self, z: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for &c in self.herglotz.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.herglotz_sum(z).exp()
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let mut dacc = ZERO;
        for (k, &c) in self.herglotz.iter().enumerate().skip(1).rev() {
            dacc = dacc * z + c * k as f64;
        }
        // Horner above leaves a polynomial in z of degree len-2 evaluated
        // with coefficients c_k * k starting at k = 1
        self.eval(z) * dacc
    }
}

impl HoloFn {
    pub fn constant(c: f64) -> HoloFn {
        HoloFn::Poly(Poly::from_real(&[c]))
    }

    pub fn poly_from_real(coeffs: &[f64]) -> HoloFn {
        HoloFn::Poly(Poly::from_real(coeffs))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            HoloFn::Poly(p) => p.eval(z),
            HoloFn::Rational { num, den } => num.eval(z) / den.eval(z),
            HoloFn::Blaschke(b) => b.eval(z),
            HoloFn::BlaschkeDerivative(b) => b.derivative(z),
            HoloFn::Outer(o) => o.eval(z),
        }
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match self {
            HoloFn::Poly(p) => p.derivative().eval(z),
            HoloFn::Rational { num, den } => {
                let (n, d) = (num.eval(z), den.eval(z));
                let (np, dp) = (num.derivative().eval(z), den.derivative().eval(z));
                (np * d - n * dp) / (d * d)
            }
            HoloFn::Blaschke(b) => b.derivative(z),
            HoloFn::BlaschkeDerivative(b) => {
                // (N/Q^2)' = (N'Q - 2NQ') / Q^3 with N = P'Q - PQ'
                let n = b.derivative_numerator();
                let (_, q) = b.as_rational();
                let top = n.derivative().mul(&q).sub(&n.mul(&q.derivative()).scale(Complex64::new(2.0, 0.0)));
                let qz = q.eval(z);
                top.eval(z) / (qz * qz * qz)
            }
            HoloFn::Outer(o) => o.derivative(z),
        }
    }

    /// Zeros inside the open disk, with multiplicity, sorted by (re, im).
    pub fn zeros(&self) -> Result<Vec<Complex64>> {
        let mut zs = match self {
            HoloFn::Poly(p) => p.roots()?,
            HoloFn::Rational { num, .. } => num.roots()?,
            HoloFn::Blaschke(b) => b.zeros.clone(),
            HoloFn::BlaschkeDerivative(b) => b.critical_points()?,
            HoloFn::Outer(_) => Vec::new(),
        };
        zs.retain(|z| z.norm() < 1.0 - 1e-12);
        sort_lex(&mut zs);
        Ok(zs)
    }

    /// Structural validity: not identically zero, denominators zero-free on
    /// the closed disk, finite coefficients (these make the A^2_1 norm
    /// automatically finite for every representable function).
    pub fn validate(&self) -> Result<()> {
        match self {
            HoloFn::Poly(p) => {
                if p.coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                    return Err(Error::NonFinite("polynomial coefficient".into()));
                }
                if p.coeffs.iter().all(|c| c.norm() == 0.0) {
                    return Err(Error::InvalidInput("H must not be identically zero".into()));
                }
            }
            HoloFn::Rational { num, den } => {
                if num.coeffs.iter().all(|c| c.norm() == 0.0) {
                    return Err(Error::InvalidInput("H must not be identically zero".into()));
                }
                for r in den.roots()? {
                    if r.norm() <= 1.0 + 1e-9 {
                        return Err(Error::InvalidInput(format!(
                            "rational denominator has a root at {r} on the closed disk"
                        )));
                    }
                }
            }
            HoloFn::Blaschke(b) | HoloFn::BlaschkeDerivative(b) => {
                if b.degree() == 0 {
                    return Err(Error::InvalidInput("empty Blaschke product".into()));
                }
            }
            HoloFn::Outer(o) => {
                if o.herglotz.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                    return Err(Error::NonFinite("outer coefficient".into()));
                }
            }
        }
        Ok(())
    }

    /// Multiply by a positive constant (used by the scaling symmetry and the
    /// generator family). Not available for bare Blaschke kinds.
    pub fn scaled(&self, c: f64) -> Result<HoloFn> {
        let cc = Complex64::new(c, 0.0);
        Ok(match self {
            HoloFn::Poly(p) => HoloFn::Poly(p.scale(cc)),
            HoloFn::Rational { num, den } => HoloFn::Rational { num: num.scale(cc), den: den.clone() },
            HoloFn::BlaschkeDerivative(b) => {
                let n = b.derivative_numerator().scale(cc);
                let (_, q) = b.as_rational();
                HoloFn::Rational { num: n, den: q.mul(&q) }
            }
            _ => {
                return Err(Error::InvalidInput(
                    "scaling is supported for poly/rational/blaschke-derivative kinds".into(),
                ))
            }
        })
    }

    /// Rational form `(num, den)`; errors for outer kind.
    pub fn rational_parts(&self) -> Result<(Poly, Poly)> {
        Ok(match self {
            HoloFn::Poly(p) => (p.clone(), Poly::constant(ONE)),
            HoloFn::Rational { num, den } => (num.clone(), den.clone()),
            HoloFn::Blaschke(b) => b.as_rational(),
            HoloFn::BlaschkeDerivative(b) => {
                let (_, q) = b.as_rational();
                (b.derivative_numerator(), q.mul(&q))
            }
            HoloFn::Outer(_) => {
                return Err(Error::InvalidInput("outer functions have no rational form".into()))
            }
        })
    }

    pub fn to_json(&self) -> Json {
        let poly_json = |p: &Poly| Json::Array(p.coeffs.iter().map(|&c| Json::complex(c)).collect());
        let mut o = Json::obj();
        match self {
            HoloFn::Poly(p) => {
                o.push("kind", Json::Str("poly".into()));
                o.push("coeffs", poly_json(p));
            }
            HoloFn::Rational { num, den } => {
                o.push("kind", Json::Str("rational".into()));
                o.push("num", poly_json(num));
                o.push("den", poly_json(den));
            }
            HoloFn::Blaschke(b) => return b.to_json(),
            HoloFn::BlaschkeDerivative(b) => {
                o.push("kind", Json::Str("blaschke_derivative".into()));
                o.push(
                    "zeros",
                    Json::Array(b.zeros.iter().map(|&z| Json::complex(z)).collect()),
                );
                o.push("rotation", Json::Float(b.rotation));
            }
            HoloFn::Outer(of) => {
                o.push("kind", Json::Str("outer".into()));
                o.push("modulus", Json::floats(&of.modulus));
            }
        }
        o
    }

    pub fn from_json(v: &serde_json::Value) -> Result<HoloFn> {
        let kind = v["kind"]
            .as_str()
            .ok_or_else(|| Error::Parse("HoloFn JSON needs a \"kind\" field".into()))?;
        let f = match kind {
            "poly" => HoloFn::Poly(Poly::new(parse_complex_array(&v["coeffs"])?)),
            "rational" => HoloFn::Rational {
                num: Poly::new(parse_complex_array(&v["num"])?),
                den: Poly::new(parse_complex_array(&v["den"])?),
            },
            "blaschke" => HoloFn::Blaschke(BlaschkeProduct::from_json(v)?),
            "blaschke_derivative" => {
                let zeros = parse_complex_array(&v["zeros"])?;
                let rotation = v["rotation"].as_f64().unwrap_or(0.0);
                HoloFn::BlaschkeDerivative(BlaschkeProduct::new(zeros, rotation)?)
            }
            "outer" => {
                let arr = v["modulus"]
                    .as_array()
                    .ok_or_else(|| Error::Parse("outer kind needs \"modulus\"".into()))?;
                let samples: Option<Vec<f64>> = arr.iter().map(|x| x.as_f64()).collect();
                let samples = samples.ok_or_else(|| Error::Parse("bad modulus entry".into()))?;
                HoloFn::Outer(OuterFn::from_modulus(&samples)?)
            }
            other => return Err(Error::Parse(format!("unknown HoloFn kind {other:?}"))),
        };
        f.validate()?;
        Ok(f)
    }
}

/// Normal form of a holomorphic self-map under post-composition with
/// `aut(D)`: returns `(m . F, m)` with value 0 at the origin and first
/// nonvanishing Taylor coefficient real positive.
pub fn normalize_self_map(f: &HoloFn) -> Result<(HoloFn, MobiusDisk)> {
    if let HoloFn::Blaschke(b) = f {
        let (norm, m) = b.normalize()?;
        return Ok((HoloFn::Blaschke(norm), m));
    }
    let (p, q) = f.rational_parts()?;
    // sampled self-map check on the closed disk boundary
    for k in 0..64 {
        let z = Complex64::from_polar(1.0, (k as f64 + 0.21) * crate::grid::TAU / 64.0);
        if f.eval(z).norm() > 1.0 + 1e-9 {
            return Err(Error::NotSelfMap(format!("|F| = {} at {z}", f.eval(z).norm())));
        }
    }
    let a = f.eval(ZERO);
    // m_a . F = (P - aQ) / (Q - conj(a) P)
    let num = p.sub(&q.scale(a));
    let den = q.sub(&p.scale(a.conj()));
    let order = num.degree().max(den.degree()).max(2) + 1;
    let coeffs = series_divide(&num, &den, order);
    let lead = coeffs
        .iter()
        .skip(1)
        .find(|c| c.norm() > 1e-11)
        .ok_or_else(|| Error::InvalidInput("normalize: map is constant".into()))?;
    let phi = -lead.arg();
    let m = MobiusDisk::new(a, phi)?;
    let num = num.scale(Complex64::from_polar(1.0, phi));
    Ok((HoloFn::Rational { num, den }, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn outer_constant_modulus() {
        let o = OuterFn::from_modulus(&vec![0.75; 64]).unwrap();
        for z in [c(0.0, 0.0), c(0.5, 0.3), c(-0.9, 0.0)] {
            assert!((o.eval(z) - c(0.75, 0.0)).norm() < 1e-12);
        }
        assert_eq!(o.clamped, 0);
    }

    #[test]
    fn outer_reproduces_polynomial_modulus() {
        // w = |2 - e^{it}| is the boundary modulus of 2 - z, outer with
        // positive value at 0; the construction should reproduce it exactly
        let n = 128;
        let samples: Vec<f64> = (0..n)
            .map(|j| {
                let t = (j as f64 + 0.5) * crate::grid::TAU / n as f64;
                (Complex64::new(2.0, 0.0) - Complex64::from_polar(1.0, t)).norm()
            })
            .collect();
        let o = OuterFn::from_modulus(&samples).unwrap();
        for z in [c(0.0, 0.0), c(0.3, -0.5), c(0.8, 0.1), c(0.0, 0.95)] {
            let want = Complex64::new(2.0, 0.0) - z;
            assert!((o.eval(z) - want).norm() < 1e-4, "at {z}: {} vs {want}", o.eval(z));
            let dw = o.derivative(z);
            assert!((dw - c(-1.0, 0.0)).norm() < 1e-3, "derivative at {z}: {dw}");
        }
    }

    #[test]
    fn outer_rejects_nonpositive() {
        assert!(OuterFn::from_modulus(&[1.0, 2.0, 0.0, 1.0]).is_err());
        assert!(OuterFn::from_modulus(&[1.0, 2.0, -0.1, 1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn outer_clamps_extreme_logs() {
        let mut samples = vec![1.0; 32];
        samples[3] = 1e-30;
        let o = OuterFn::from_modulus(&samples).unwrap();
        assert_eq!(o.clamped, 1);
    }

    #[test]
    fn zeros_inside_disk_only() {
        // (z - 0.5)(z - 2): only 0.5 reported
        let p = Poly::from_roots(&[c(0.5, 0.0), c(2.0, 0.0)]);
        let h = HoloFn::Poly(p);
        let zs = h.zeros().unwrap();
        assert_eq!(zs.len(), 1);
        assert!((zs[0] - c(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rational_denominator_on_disk_rejected() {
        let h = HoloFn::Rational {
            num: Poly::from_real(&[1.0]),
            den: Poly::from_roots(&[c(0.5, 0.0)]),
        };
        assert!(h.validate().is_err());
    }

    #[test]
    fn blaschke_derivative_kind_evaluates() {
        let b = BlaschkeProduct::power(2);
        let h = HoloFn::BlaschkeDerivative(b);
        assert!((h.eval(c(0.3, 0.0)) - c(0.6, 0.0)).norm() < 1e-13);
        assert!((h.derivative(c(0.3, 0.0)) - c(2.0, 0.0)).norm() < 1e-12);
        let zs = h.zeros().unwrap();
        assert_eq!(zs, vec![ZERO]);
    }

    #[test]
    fn holo_json_round_trip() {
        let cases = vec![
            HoloFn::poly_from_real(&[1.0, 0.0, 0.5]),
            HoloFn::Rational {
                num: Poly::from_real(&[0.0, 2.0]),
                den: Poly::from_real(&[1.0, 0.0, 0.2]),
            },
            HoloFn::Blaschke(BlaschkeProduct::new(vec![c(0.1, 0.2)], 0.7).unwrap()),
            HoloFn::BlaschkeDerivative(BlaschkeProduct::power(3)),
            HoloFn::Outer(OuterFn::from_modulus(&vec![1.5; 16]).unwrap()),
        ];
        for h in cases {
            let text = h.to_json().render();
            let v: serde_json::Value = serde_json::from_str(&text).unwrap();
            let h2 = HoloFn::from_json(&v).unwrap();
            assert_eq!(h, h2, "{text}");
        }
    }

    #[test]
    fn normalize_constant_rejected() {
        let h = HoloFn::constant(0.3);
        assert!(normalize_self_map(&h).is_err());
    }

    #[test]
    fn normalize_rational_self_map() {
        // F = (z^2 + 0.2)/(1 + 0.2 z^2)
        let f = HoloFn::Rational {
            num: Poly::from_real(&[0.2, 0.0, 1.0]),
            den: Poly::from_real(&[1.0, 0.0, 0.2]),
        };
        let (fnorm, m) = normalize_self_map(&f).unwrap();
        assert!(fnorm.eval(ZERO).norm() < 1e-10);
        let d = fnorm.derivative(ZERO);
        // after recentering, F'(0) may vanish only when the original had a
        // critical point at m^{-1}(0); here it does not
        assert!(d.norm() > 1e-11);
        assert!(d.im.abs() < 1e-10 && d.re > 0.0, "{d}");
        // m . F agrees pointwise with the normalized form
        for k in 0..8 {
            let z = Complex64::from_polar(0.6, k as f64 * 0.7853);
            assert!((m.apply(f.eval(z)) - fnorm.eval(z)).norm() < 1e-11);
        }
    }
}
