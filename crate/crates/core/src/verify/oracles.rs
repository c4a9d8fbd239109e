//! Closed-form surfaces and frames.

use crate::algebra::{from_orthogonal_basis, UPPER};
use crate::loops::LaurentLoop;
use crate::rational::RationalFunction;
use crate::{CMat, Error, Result, C64};

/// Closed-form reference objects.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleId {
    /// Totally isotropic Willmore sphere in `S⁶`.
    S6Sphere,
    /// `ℝP²` family member in `S⁴`; `m = 1` (Veronese) and `m = 2` are available.
    Rp2Surface(i64),
    /// Minimal surface in `ℝ⁴` driven by `f₂`, `f₄`.
    MinimalR4 {
        f2: RationalFunction,
        f4: RationalFunction,
    },
    /// Extended frame of the compact dual, in the Minkowski basis.
    Frame91Compact {
        f2: RationalFunction,
        f4: RationalFunction,
    },
    /// Extended frame in `SO⁺(1,5)`.
    Frame91Noncompact {
        f2: RationalFunction,
        f4: RationalFunction,
    },
}

impl OracleId {
    /// The `f₂ = z²`, `f₄ = z` instance of a data-driven oracle.
    pub fn default_pair() -> (RationalFunction, RationalFunction) {
        (
            RationalFunction::monomial(C64::new(1.0, 0.0), 2),
            RationalFunction::monomial(C64::new(1.0, 0.0), 1),
        )
    }

    /// Parse `s6`, `rp2:M`, `minimal-r4`, `frame-compact`, `frame-noncompact`.
    pub fn parse(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let (f2, f4) = Self::default_pair();
        match name.trim().to_ascii_lowercase().as_str() {
            "s6" | "s6-sphere" => Ok(Self::S6Sphere),
            "rp2" | "rp2-surface" => {
                let m = arg
                    .unwrap_or("2")
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad oracle parameter in `{s}`")))?;
                Ok(Self::Rp2Surface(m))
            }
            "minimal-r4" => Ok(Self::MinimalR4 { f2, f4 }),
            "frame-compact" | "frame-9-1-compact" => Ok(Self::Frame91Compact { f2, f4 }),
            "frame-noncompact" | "frame-9-1-noncompact" => Ok(Self::Frame91Noncompact { f2, f4 }),
            other => Err(Error::Parse(format!("unknown oracle `{other}`"))),
        }
    }
}

/// Value of an oracle.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleValue {
    Point(Vec<f64>),
    Matrix(CMat),
}

pub fn oracle_eval(id: &OracleId, z: C64, lambda: C64) -> Result<OracleValue> {
    Ok(match id {
        OracleId::S6Sphere => OracleValue::Point(s6_sphere(z, lambda)),
        OracleId::Rp2Surface(m) => OracleValue::Point(rp2_surface(*m, z, lambda)?),
        OracleId::MinimalR4 { f2, f4 } => OracleValue::Point(minimal_r4(f2, f4, z, lambda)?.to_vec()),
        OracleId::Frame91Compact { f2, f4 } => OracleValue::Matrix(frame_compact(f2, f4, z, lambda)?),
        OracleId::Frame91Noncompact { f2, f4 } => OracleValue::Matrix(frame_noncompact(f2, f4, z, lambda)?),
    })
}

fn re(v: C64) -> f64 {
    v.re
}

/// The `S⁶` associated family.
pub fn s6_sphere(z: C64, lambda: C64) -> Vec<f64> {
    let r2 = z.norm_sqr();
    let (r4, r6, r8) = (r2 * r2, r2 * r2 * r2, r2 * r2 * r2 * r2);
    let zb = z.conj();
    let li = lambda.inv();
    let i = C64::new(0.0, 1.0);
    let den = 1.0 + r2 + 5.0 * r4 / 4.0 + 4.0 * r6 / 9.0 + r8 / 36.0;
    let a = 1.0 + r6 / 9.0;
    let b = 1.0 - r4 / 12.0;
    let c = r2 / 2.0 * (1.0 + 4.0 * r2 / 3.0);
    let z2 = z * z;
    let zb2 = zb * zb;
    let v = [
        C64::new(1.0 - r2 - 3.0 * r4 / 4.0 + 4.0 * r6 / 9.0 - r8 / 36.0, 0.0),
        -i * (z - zb) * a,
        (z + zb) * a,
        -i * (li * z2 - lambda * zb2) * b,
        (li * z2 + lambda * zb2) * b,
        -i * c * (li * z - lambda * zb),
        c * (li * z + lambda * zb),
    ];
    v.iter().map(|x| re(*x) / den).collect()
}

/// `ℝP²` surfaces in `S⁴`: the Veronese surface (`m = 1`) and the area-10π surface (`m = 2`).
pub fn rp2_surface(m: i64, z: C64, lambda: C64) -> Result<Vec<f64>> {
    let r2 = z.norm_sqr();
    let zb = z.conj();
    let li = lambda.inv();
    let i = C64::new(0.0, 1.0);
    let v: [C64; 5];
    let den: f64;
    match m {
        1 => {
            let s = 3f64.sqrt();
            den = (1.0 + r2) * (1.0 + r2);
            let z2 = z * z;
            let zb2 = zb * zb;
            v = [
                C64::new(-(1.0 - 4.0 * r2 + r2 * r2), 0.0),
                s * (z + zb) * (1.0 - r2),
                -i * s * (z - zb) * (1.0 - r2),
                s * (li * z2 + lambda * zb2),
                i * s * (li * z2 - lambda * zb2),
            ];
        }
        2 => {
            let s = 15f64.sqrt();
            let r4 = r2 * r2;
            den = (3.0 * r4 - 4.0 * r2 + 3.0) * (1.0 + r2) * (1.0 + r2);
            let z4 = z.powi(4);
            let zb4 = zb.powi(4);
            let w = (1.0 - r2) * (1.0 + r4);
            v = [
                C64::new(-(3.0 * r4 * r4 - 8.0 * r4 * r2 + 8.0 * r4 - 8.0 * r2 + 3.0), 0.0),
                s * (z + zb) * w,
                -i * s * (z - zb) * w,
                s * (li * z4 + lambda * zb4),
                i * s * (li * z4 - lambda * zb4),
            ];
        }
        other => {
            return Err(Error::Domain(format!(
                "closed form available for m = 1, 2 only, got {other}"
            )))
        }
    }
    Ok(v.iter().map(|x| re(*x) / den).collect())
}

/// Minimal surface in `ℝ⁴` whose conformal Gauss map has the duality-example potential.
pub fn minimal_r4(f2: &RationalFunction, f4: &RationalFunction, z: C64, lambda: C64) -> Result<[f64; 4]> {
    let i = C64::new(0.0, 1.0);
    let li = lambda.inv();
    let (a2, a4) = (f2.eval(z)?, f4.eval(z)?);
    let d4 = f4.derivative().eval(z)?;
    if d4.norm() == 0.0 {
        return Err(Error::Pole(format!("f4' vanishes at {z}")));
    }
    let q = f2.derivative().eval(z)? / d4;
    let qb = q.conj();
    let v = [
        -i * q + i * qb,
        -q - qb,
        -i * (li * a2 - lambda * a2.conj()) + i * li * q * a4 - i * lambda * qb * a4.conj(),
        (li * a2 + lambda * a2.conj()) - li * q * a4 - lambda * qb * a4.conj(),
    ];
    Ok(v.map(re))
}

/// Inverse stereographic projection `ℝᵏ → Sᵏ ⊂ ℝᵏ⁺¹`, `x ↦ (|x|² − 1, 2x)/(|x|² + 1)`.
pub fn inverse_stereographic(x: &[f64]) -> Vec<f64> {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let mut out = Vec::with_capacity(x.len() + 1);
    out.push((r2 - 1.0) / (r2 + 1.0));
    out.extend(x.iter().map(|v| 2.0 * v / (r2 + 1.0)));
    out
}

struct FrameData {
    a2: C64,
    b2: C64,
    a4: C64,
    b4: C64,
    c: C64,
    cc: C64,
    f2sq: f64,
    d1: f64,
    d2: f64,
    d3: f64,
}

fn frame_data(f2: &RationalFunction, f4: &RationalFunction, z: C64, lambda: C64) -> Result<FrameData> {
    let (v2, v4) = (f2.eval(z)?, f4.eval(z)?);
    let li = lambda.inv();
    Ok(FrameData {
        a2: li * v2,
        b2: lambda * v2.conj(),
        a4: li * v4,
        b4: lambda * v4.conj(),
        c: v2.conj() * v4,
        cc: v2 * v4.conj(),
        f2sq: v2.norm_sqr(),
        d1: 1.0 + v2.norm_sqr() + v4.norm_sqr(),
        d2: 1.0 + v2.norm_sqr(),
        d3: 1.0 + v4.norm_sqr(),
    })
}

/// Extended frame in `SO⁺(1,5)`.
pub fn frame_noncompact(f2: &RationalFunction, f4: &RationalFunction, z: C64, lambda: C64) -> Result<CMat> {
    let d = frame_data(f2, f4, z, lambda)?;
    let i = C64::new(0.0, 1.0);
    let s3 = d.d3.sqrt();
    let h = |x: C64| x / 2.0;
    let hs = |x: C64| x / (2.0 * s3);
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let f = d.f2sq / 2.0;
    let rows = [
        [one + f, C64::new(f, 0.0), hs(-i * (d.c - d.cc)), hs(d.c + d.cc), hs(-i * (d.a2 - d.b2)), hs(d.a2 + d.b2)],
        [C64::new(-f, 0.0), one - f, hs(i * (d.c - d.cc)), -hs(d.c + d.cc), hs(i * (d.a2 - d.b2)), -hs(d.a2 + d.b2)],
        [zero, zero, one / s3, zero, hs(d.a4 + d.b4), hs(i * (d.a4 - d.b4))],
        [zero, zero, zero, one / s3, hs(i * (d.a4 - d.b4)), -hs(d.a4 + d.b4)],
        [h(-i * (d.a2 - d.b2)), h(-i * (d.a2 - d.b2)), -hs(d.a4 + d.b4), hs(-i * (d.a4 - d.b4)), one / s3, zero],
        [h(d.a2 + d.b2), h(d.a2 + d.b2), hs(-i * (d.a4 - d.b4)), hs(d.a4 + d.b4), zero, one / s3],
    ];
    Ok(CMat::from_fn(6, 6, |r, c| rows[r][c]))
}

/// Extended frame of the compact dual in `SO(6)` (orthogonal basis).
pub fn frame_compact_orthogonal(f2: &RationalFunction, f4: &RationalFunction, z: C64, lambda: C64) -> Result<CMat> {
    let d = frame_data(f2, f4, z, lambda)?;
    let i = C64::new(0.0, 1.0);
    let (s1, s2) = (d.d1.sqrt(), d.d2.sqrt());
    let s12 = (d.d1 * d.d2).sqrt();
    let over = |x: C64, s: f64| x / (2.0 * s);
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let rows = [
        [one / s2, zero, over(d.c + d.cc, s12), over(i * (d.c - d.cc), s12), -over(d.a2 + d.b2, s1), -over(i * (d.a2 - d.b2), s1)],
        [zero, one / s2, over(i * (d.c - d.cc), s12), over(-d.c - d.cc, s12), over(i * (d.a2 - d.b2), s1), -over(d.a2 + d.b2, s1)],
        [zero, zero, C64::new(s2 / s1, 0.0), zero, over(d.a4 + d.b4, s1), over(i * (d.a4 - d.b4), s1)],
        [zero, zero, zero, C64::new(s2 / s1, 0.0), over(i * (d.a4 - d.b4), s1), -over(d.a4 + d.b4, s1)],
        [over(d.a2 + d.b2, s2), over(-i * (d.a2 - d.b2), s2), -over(d.a4 + d.b4, s12), over(-i * (d.a4 - d.b4), s12), one / s1, zero],
        [over(i * (d.a2 - d.b2), s2), over(d.a2 + d.b2, s2), over(-i * (d.a4 - d.b4), s12), over(d.a4 + d.b4, s12), zero, one / s1],
    ];
    Ok(CMat::from_fn(6, 6, |r, c| rows[r][c]))
}

/// Extended frame of the compact dual, conjugated into the Minkowski basis.
pub fn frame_compact(f2: &RationalFunction, f4: &RationalFunction, z: C64, lambda: C64) -> Result<CMat> {
    Ok(from_orthogonal_basis(&frame_compact_orthogonal(f2, f4, z, lambda)?))
}

/// The frame oracle at fixed `z` as a Laurent loop of degrees `−1..=1`.
pub fn frame_loop(id: &OracleId, z: C64) -> Result<LaurentLoop> {
    let eval = |lam: C64| -> Result<CMat> {
        match oracle_eval(id, z, lam)? {
            OracleValue::Matrix(m) => Ok(m),
            OracleValue::Point(_) => Err(Error::Precondition("oracle is not a frame".into())),
        }
    };
    let l = LaurentLoop::from_samples(UPPER + 2, -2, 2, 16, eval)?;
    // Sampling noise at |k| = 2 is cleared so the loop keeps its exact degree.
    Ok(l.map_coeffs(|c| c.map(|v| if v.norm() < 1e-15 { C64::new(0.0, 0.0) } else { v }))
        .trimmed(1e-14))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{group_defect, max_norm, orthogonal_defect, MinkowskiForm};
    use crate::RealForm;

    fn norm(v: &[f64]) -> f64 {
        v.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    #[test]
    fn s6_values() {
        let y = s6_sphere(C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        assert_eq!(y, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let y = s6_sphere(C64::new(1.0, 0.0), C64::new(1.0, 0.0));
        let want = [-6.0, 0.0, 40.0, 0.0, 33.0, 0.0, 42.0];
        for k in 0..7 {
            assert!((y[k] - want[k] / 67.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rp2_values() {
        let one = C64::new(1.0, 0.0);
        let y = rp2_surface(2, one, one).unwrap();
        let want = [0.25, 0.0, 0.0, 15f64.sqrt() / 4.0, 0.0];
        for k in 0..5 {
            assert!((y[k] - want[k]).abs() < 1e-15);
        }
        let y = rp2_surface(2, -one, one).unwrap();
        for k in 0..5 {
            assert!((y[k] - want[k]).abs() < 1e-15);
        }
        assert_eq!(rp2_surface(2, C64::new(0.0, 0.0), one).unwrap(), vec![-1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(rp2_surface(1, C64::new(0.0, 0.0), one).unwrap(), vec![-1.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(rp2_surface(3, one, one).is_err());
    }

    #[test]
    fn oracles_are_unit_vectors() {
        for k in 0..100 {
            let z = C64::from_polar(0.03 * k as f64, 2.1 * k as f64);
            let lam = C64::from_polar(1.0, 0.37 * k as f64);
            assert!((norm(&s6_sphere(z, lam)) - 1.0).abs() < 1e-12);
            for m in [1, 2] {
                assert!((norm(&rp2_surface(m, z, lam).unwrap()) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn duality_frames_lie_in_their_groups() {
        let (f2, f4) = OracleId::default_pair();
        let form = MinkowskiForm::new(6).unwrap();
        for z in [C64::new(1.0, 0.0), C64::new(0.3, -0.8)] {
            let lam = C64::from_polar(1.0, 0.4);
            let g = frame_noncompact(&f2, &f4, z, lam).unwrap();
            assert!(group_defect(&g, &form).unwrap() < 1e-13);
            assert!(crate::algebra::max_imag(&g) < 1e-14);
            let h = frame_compact_orthogonal(&f2, &f4, z, lam).unwrap();
            assert!(orthogonal_defect(&h) < 1e-13);
            assert!(crate::algebra::max_imag(&h) < 1e-14);
        }
        let id = OracleId::Frame91Noncompact { f2: f2.clone(), f4: f4.clone() };
        let l = frame_loop(&id, C64::new(1.0, 0.0)).unwrap();
        assert_eq!((l.d_min(), l.d_max()), (-1, 1));
        assert!(l.reality_defect(RealForm::Noncompact) < 1e-10);
        assert!(l.twist_defect() < 1e-10);
        let lc = frame_loop(&OracleId::Frame91Compact { f2, f4 }, C64::new(1.0, 0.0)).unwrap();
        assert!(lc.reality_defect(RealForm::Compact) < 1e-10);
        assert!(lc.twist_defect() < 1e-10);
        assert!(max_norm(&lc.coeff_or_zero(0)) > 0.1);
    }

    #[test]
    fn minimal_r4_to_sphere() {
        let (f2, f4) = OracleId::default_pair();
        let x = minimal_r4(&f2, &f4, C64::new(0.5, 0.2), C64::new(1.0, 0.0)).unwrap();
        let y = inverse_stereographic(&x);
        assert!((norm(&y) - 1.0).abs() < 1e-14);
    }
}
