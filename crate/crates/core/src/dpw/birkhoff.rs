use crate::algebra::max_norm;
use crate::loops::{LaurentLoop, WienerWeight};
use crate::{CMat, Error, Result};

/// Condition number beyond which the loop is treated as off the big cell.
const MAX_CONDITION: f64 = 1e12;

/// `M = minus · plus` with `minus = I + O(λ⁻¹)` and `plus` holomorphic at `λ = 0`.
#[derive(Debug, Clone)]
pub struct BirkhoffSplit {
    pub minus: LaurentLoop,
    pub plus: LaurentLoop,
    /// Relative Wiener-norm residual `‖M − minus·plus‖ / max(1, ‖M‖)`.
    pub residual: f64,
}

/// Birkhoff factorization of a Laurent polynomial loop.
///
/// Solves for `Y = minus⁻¹ = I + Σ_{j=1}^{a} Y_j λ^{−j}` from the block-Toeplitz system
/// "`Y·M` has no negative degrees", where `a` is the negative width of `M`.
pub fn birkhoff_split(m: &LaurentLoop, tol: f64) -> Result<BirkhoffSplit> {
    let dim = m.dim();
    let weight = WienerWeight::default();
    let scale = m.wiener_norm(&weight).max(1.0);
    let a = (-m.d_min()).max(0) as usize;
    let order = m.truncation_order().max(4 * (a as i32 + m.d_max().max(0)) + 4);

    let y = if a == 0 {
        LaurentLoop::identity(dim)
    } else {
        // Unknown Z = [Y_1 … Y_a] (dim × a·dim); equations for degrees k = −a … −1:
        // Σ_j Y_j M_{k+j} = −M_k, i.e. Z·T = R with T_{(j),(k)} = M_{k+j}.
        let n = a * dim;
        let mut t = CMat::zeros(n, n);
        let mut r = CMat::zeros(dim, n);
        for (eq, k) in (-(a as i32)..0).enumerate() {
            r.view_mut((0, eq * dim), (dim, dim))
                .copy_from(&(-m.coeff_or_zero(k)));
            for j in 1..=a {
                t.view_mut(((j - 1) * dim, eq * dim), (dim, dim))
                    .copy_from(&m.coeff_or_zero(k + j as i32));
            }
        }
        let sv = crate::algebra::singular_values(&t);
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(smin > 0.0) || smax / smin > MAX_CONDITION {
            return Err(Error::BirkhoffCell(format!(
                "Toeplitz system is singular or ill-conditioned (cond {:.3e})",
                smax / smin
            )));
        }
        let zt = t
            .transpose()
            .lu()
            .solve(&r.transpose())
            .ok_or_else(|| Error::BirkhoffCell("Toeplitz system is singular".into()))?;
        let z = zt.transpose();
        let mut coeffs: Vec<CMat> = (1..=a)
            .rev()
            .map(|j| z.view((0, (j - 1) * dim), (dim, dim)).into_owned())
            .collect();
        coeffs.push(CMat::identity(dim, dim));
        LaurentLoop::new(dim, -(a as i32), coeffs)?
    }
    .with_truncation(order);

    let product = y.mul(&m.clone().with_truncation(order))?;
    let neg = product.negative_part_norm();
    let plus_coeffs: Vec<CMat> = (0..=product.d_max().max(0))
        .map(|k| product.coeff_or_zero(k))
        .collect();
    let plus = LaurentLoop::new(dim, 0, plus_coeffs)?.trimmed(0.0);
    if neg > tol * scale {
        return Err(Error::BirkhoffCell(format!(
            "negative part of minus⁻¹·M did not vanish ({neg:.3e})"
        )));
    }
    let minus = y.inverse(order)?.trimmed(0.0);
    if minus.truncated() {
        return Err(Error::BirkhoffCell(
            "minus factor is not a Laurent polynomial within the truncation order".into(),
        ));
    }
    let recomposed = minus.mul(&plus)?;
    let residual = m.sub(&recomposed)?.wiener_norm(&weight) / scale;
    if !(residual <= tol) {
        return Err(Error::BirkhoffCell(format!(
            "recomposition residual {residual:.3e} exceeds tolerance {tol:.1e}"
        )));
    }
    debug_assert!(max_norm(&(minus.coeff_or_zero(0) - CMat::identity(dim, dim))) < 1e-12);
    Ok(BirkhoffSplit {
        minus,
        plus,
        residual,
    })
}
