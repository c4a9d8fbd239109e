//! Seeded random twisted loops with known factorizations.

use rand::Rng;

use crate::algebra::p_element;
use crate::loops::LaurentLoop;
use crate::rational::RationalFunction;
use crate::verify::oracles::{frame_loop, OracleId};
use crate::{CMat, Result, C64};

const DIM: usize = 6;

fn complex<R: Rng>(rng: &mut R, r: f64) -> C64 {
    C64::new(rng.random_range(-r..r), rng.random_range(-r..r))
}

/// Real element of `SO⁺(1,3)×SO(2)`.
pub fn random_real_k<R: Rng>(rng: &mut R) -> CMat {
    let mut a = CMat::zeros(DIM, DIM);
    for i in 0..4 {
        for j in (i + 1)..4 {
            let t = C64::new(rng.random_range(-0.6..0.6), 0.0);
            // so(1,3): boosts are symmetric in the 0 row, rotations antisymmetric
            a[(i, j)] = t;
            a[(j, i)] = if i == 0 { t } else { -t };
        }
    }
    let t = C64::new(rng.random_range(-3.0..3.0), 0.0);
    a[(4, 5)] = t;
    a[(5, 4)] = -t;
    a.exp()
}

/// Complex element of `K^ℂ = SO(1,3,ℂ)×SO(2,ℂ)`.
pub fn random_complex_k<R: Rng>(rng: &mut R) -> CMat {
    let mut a = CMat::zeros(DIM, DIM);
    for i in 0..4 {
        for j in (i + 1)..4 {
            let t = complex(rng, 0.4);
            a[(i, j)] = t;
            a[(j, i)] = if i == 0 { t } else { -t };
        }
    }
    let t = complex(rng, 0.4);
    a[(4, 5)] = t;
    a[(5, 4)] = -t;
    a.exp()
}

/// `X ∈ p^ℂ` with `X² = 0`: `B = v wᵗ` with `v` null in `ℂ^{1,3}` and `wᵗw = 0`.
pub fn random_square_zero_p<R: Rng>(rng: &mut R, scale: f64) -> CMat {
    let (b, c, d) = (complex(rng, scale), complex(rng, scale), complex(rng, scale));
    let a = (b * b + c * c + d * d).sqrt();
    let v = [a, b, c, d];
    let s = complex(rng, 1.0);
    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let w = [s, s * C64::new(0.0, sign)];
    let m = CMat::from_fn(4, 2, |i, j| v[i] * w[j]);
    p_element(&m)
}

/// Product of `factors` closed-form real frames at random `(f₂, f₄)` values, interleaved
/// with random constant rotations. Degrees `−factors..=factors`.
pub fn random_real_twisted_loop<R: Rng>(rng: &mut R, factors: usize) -> Result<LaurentLoop> {
    let mut acc = LaurentLoop::constant(random_real_k(rng));
    for _ in 0..factors {
        let id = OracleId::Frame91Noncompact {
            f2: RationalFunction::constant(complex(rng, 0.8)),
            f4: RationalFunction::constant(complex(rng, 0.8)),
        };
        let f = frame_loop(&id, C64::new(0.0, 0.0))?;
        acc = acc.mul(&f)?.right_mul_const(&random_real_k(rng));
    }
    Ok(acc)
}

/// `k·(I + λX)` with `k ∈ K^ℂ` and `X ∈ p^ℂ`, `X² = 0`.
pub fn random_positive_loop<R: Rng>(rng: &mut R) -> Result<LaurentLoop> {
    let k = random_complex_k(rng);
    let x = random_square_zero_p(rng, 0.6);
    let step = LaurentLoop::from_terms(DIM, [(0, CMat::identity(DIM, DIM)), (1, x)])?;
    Ok(step.left_mul_const(&k))
}

/// `(I + λ⁻¹X₁)(I + λ⁻¹X₂)` with square-zero `Xᵢ ∈ p^ℂ`.
pub fn random_negative_loop<R: Rng>(rng: &mut R) -> Result<LaurentLoop> {
    let mut acc = LaurentLoop::identity(DIM);
    for _ in 0..2 {
        let x = random_square_zero_p(rng, 0.6);
        acc = acc.mul(&LaurentLoop::from_terms(DIM, [(0, CMat::identity(DIM, DIM)), (-1, x)])?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{group_defect, max_norm, MinkowskiForm};
    use crate::RealForm;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_the_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let form = MinkowskiForm::new(DIM).unwrap();
        let k = random_real_k(&mut rng);
        assert!(group_defect(&k, &form).unwrap() < 1e-12);
        let kc = random_complex_k(&mut rng);
        assert!(group_defect(&kc, &form).unwrap() < 1e-12);
        let x = random_square_zero_p(&mut rng, 0.6);
        assert!(max_norm(&(&x * &x)) < 1e-13);
        let r = random_real_twisted_loop(&mut rng, 2).unwrap();
        assert!(r.d_min() >= -2 && r.d_max() <= 2);
        assert!(r.reality_defect(RealForm::Noncompact) < 1e-12);
        assert!(r.twist_defect() < 1e-12);
        let p = random_positive_loop(&mut rng).unwrap();
        assert!(p.twist_defect() < 1e-12);
        assert_eq!(p.d_min(), 0);
        let m = random_negative_loop(&mut rng).unwrap();
        assert!(m.twist_defect() < 1e-12);
    }
}
