use crate::algebra::UPPER;
use crate::dpw::birkhoff::birkhoff_split;
use crate::loops::LaurentLoop;
use crate::{CMat, Result, C64};

/// Sampled `η₋₁` at one point.
#[derive(Debug, Clone)]
pub struct RecoveredPotential {
    pub z: C64,
    /// `λ⁻¹` coefficient of `F₋⁻¹ ∂_z F₋`.
    pub eta_m1: CMat,
}

impl RecoveredPotential {
    /// Upper-right `4×n` block.
    pub fn b1(&self) -> CMat {
        let n = self.eta_m1.nrows() - UPPER;
        self.eta_m1.view((0, UPPER), (UPPER, n)).into_owned()
    }
}

/// Recover the normalized potential of a frame family by Birkhoff splitting and
/// central differences `∂_z ≈ ½(D_u − i D_v)` of step `h`.
///
/// `frame(z)` returns the loop `λ ↦ F(z, λ)` in the Minkowski basis.
pub fn recover_normalized_potential<F>(frame: F, z_samples: &[C64], h: f64, tol: f64) -> Result<Vec<RecoveredPotential>>
where
    F: Fn(C64) -> Result<LaurentLoop>,
{
    let minus = |z: C64| -> Result<LaurentLoop> { Ok(birkhoff_split(&frame(z)?, tol)?.minus) };
    z_samples
        .iter()
        .map(|&z| {
            let center = minus(z)?;
            let du = minus(z + h)?.sub(&minus(z - h)?)?;
            let dv = minus(z + C64::new(0.0, h))?.sub(&minus(z - C64::new(0.0, h))?)?;
            let dz = du
                .sub(&dv.map_coeffs(|c| c * C64::new(0.0, 1.0)))?
                .map_coeffs(|c| c / C64::new(4.0 * h, 0.0));
            let inv = center.inverse(center.truncation_order())?;
            let form = inv.mul(&dz)?;
            Ok(RecoveredPotential {
                z,
                eta_m1: form.coeff_or_zero(-1),
            })
        })
        .collect()
}
