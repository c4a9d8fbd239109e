//! Checks on frame families `F(z, λ)`.

use crate::algebra::{block_split, max_norm, signature};
use crate::loops::LaurentLoop;
use crate::{CMat, Result, C64};

/// Pointwise inverse `λ ↦ I F(λ)ᵗ I` of a loop in `SO(1,n+3)^ℂ`.
pub fn group_inverse(f: &LaurentLoop) -> LaurentLoop {
    let j = signature(f.dim());
    f.map_coeffs(|c| &j * c.transpose() * &j)
}

/// Largest block of `F⁻¹ dF` outside the grading: `k`-parts away from degree 0 and
/// `p`-parts away from degrees `±1`, for both real directions.
///
/// `frame(z)` returns the loop `λ ↦ F(z, λ)`; derivatives are central differences of step `h`.
pub fn maurer_cartan_grading_defect<F>(frame: F, z: C64, h: f64) -> Result<f64>
where
    F: Fn(C64) -> Result<LaurentLoop>,
{
    let inv = group_inverse(&frame(z)?);
    let scale = C64::new(0.5 / h, 0.0);
    let mut worst = 0.0f64;
    for dir in [C64::new(h, 0.0), C64::new(0.0, h)] {
        let d = frame(z + dir)?.sub(&frame(z - dir)?)?.map_coeffs(|c| c * scale);
        let alpha = inv.mul(&d)?;
        for (k, c) in alpha.terms() {
            let parts = block_split(c)?;
            if k != 0 {
                worst = worst.max(max_norm(&parts.k_part));
            }
            if k.abs() != 1 {
                worst = worst.max(max_norm(&parts.p_part));
            }
        }
    }
    Ok(worst)
}

/// `max |F⁻¹F − I|` with `F⁻¹ = I Fᵗ I`, sampled on the unit circle.
pub fn loop_group_defect(f: &LaurentLoop, samples: usize) -> Result<f64> {
    let j = signature(f.dim());
    let id = CMat::identity(f.dim(), f.dim());
    let mut worst = 0.0f64;
    for s in 0..samples.max(1) {
        let lam = C64::from_polar(1.0, std::f64::consts::TAU * (s as f64 + 0.5) / samples.max(1) as f64);
        let m = f.eval(lam)?;
        worst = worst.max(max_norm(&(&j * m.transpose() * &j * &m - &id)));
    }
    Ok(worst)
}
