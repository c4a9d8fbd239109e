use crate::algebra::{max_norm, p_element, UPPER};
use crate::loops::LaurentLoop;
use crate::potentials::PotentialSpec;
use crate::{CMat, Error, Result, C64};

/// Default recursion cap for [`integrate_potential`].
pub const DEFAULT_CAP: usize = 64;

/// Matrix polynomial `Σ_d z^d c_d` in ascending powers of `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix {
    coeffs: Vec<CMat>,
}

impl PolyMatrix {
    pub fn new(coeffs: Vec<CMat>) -> Self {
        assert!(!coeffs.is_empty(), "matrix polynomial needs a coefficient");
        Self { coeffs }
    }

    pub fn constant(m: CMat) -> Self {
        Self { coeffs: vec![m] }
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn shape(&self) -> (usize, usize) {
        self.coeffs[0].shape()
    }

    pub fn eval(&self, z: C64) -> CMat {
        let (r, c) = self.shape();
        self.coeffs
            .iter()
            .rev()
            .fold(CMat::zeros(r, c), |acc, m| acc * z + m)
    }

    /// Polynomial in entry `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> Vec<C64> {
        self.coeffs.iter().map(|m| m[(i, j)]).collect()
    }

    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().map(max_norm).fold(0.0, f64::max)
    }

    fn scale_sum(&self) -> f64 {
        self.coeffs.iter().map(max_norm).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (r, _) = self.shape();
        let (_, c) = other.shape();
        let mut out = vec![CMat::zeros(r, c); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    pub fn derivative(&self) -> Self {
        let (r, c) = self.shape();
        if self.coeffs.len() == 1 {
            return Self::constant(CMat::zeros(r, c));
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(d, m)| m * C64::new(d as f64, 0.0))
                .collect(),
        }
    }

    /// Antiderivative vanishing at `z0`.
    pub fn antiderivative(&self, z0: C64) -> Self {
        let (r, c) = self.shape();
        let mut coeffs = vec![CMat::zeros(r, c)];
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(d, m)| m / C64::new((d + 1) as f64, 0.0)),
        );
        let mut out = Self { coeffs };
        if z0 != C64::new(0.0, 0.0) {
            let at = out.eval(z0);
            out.coeffs[0] -= at;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (r, c) = self.shape();
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = CMat::zeros(r, c);
        Self {
            coeffs: (0..n)
                .map(|d| self.coeffs.get(d).unwrap_or(&zero) - other.coeffs.get(d).unwrap_or(&zero))
                .collect(),
        }
    }
}

/// `η₋₁(z)` of a polynomial potential as a matrix polynomial.
pub(crate) fn eta_polynomial(p: &PotentialSpec) -> Result<PolyMatrix> {
    let entries = p.polynomial_entries()?;
    let n = p.n();
    let deg = entries.iter().flatten().map(|e| e.len()).max().unwrap_or(1);
    let coeffs = (0..deg)
        .map(|d| {
            let b = CMat::from_fn(UPPER, n, |i, j| {
                entries[i][j].get(d).copied().unwrap_or(C64::new(0.0, 0.0))
            });
            p_element(&b)
        })
        .collect();
    Ok(PolyMatrix::new(coeffs))
}

/// `F₋(z, λ) = Σ_k λ^{−k} F_k(z)`, with polynomial `F_k` and `F₀ = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeromorphicFrame {
    dim: usize,
    coeffs: Vec<PolyMatrix>,
    base_point: C64,
    terminated: bool,
    cap: usize,
}

impl MeromorphicFrame {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base_point(&self) -> C64 {
        self.base_point
    }

    /// True if the recursion produced an identically zero coefficient before the cap.
    pub fn terminated(&self) -> bool {
        self.terminated
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Largest `k` with `F_k ≠ 0`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Index of the first vanishing coefficient, if the recursion terminated.
    pub fn terminated_at(&self) -> Option<usize> {
        self.terminated.then_some(self.coeffs.len())
    }

    /// Coefficient of `λ^{−k}`.
    pub fn coeff(&self, k: usize) -> Option<&PolyMatrix> {
        self.coeffs.get(k)
    }

    /// The loop `λ ↦ F₋(z, λ)`.
    pub fn eval(&self, z: C64) -> LaurentLoop {
        let k = self.order() as i32;
        let coeffs = self.coeffs.iter().rev().map(|c| c.eval(z)).collect();
        LaurentLoop::new(self.dim, -k, coeffs).expect("consistent frame dimensions")
    }

    /// `max_k max_d |(d/dz F_k − F_{k−1} η₋₁)_d|`.
    pub fn recursion_defect(&self, p: &PotentialSpec) -> Result<f64> {
        let eta = eta_polynomial(p)?;
        let mut worst: f64 = 0.0;
        for k in 1..self.coeffs.len() {
            let lhs = self.coeffs[k].derivative();
            let rhs = self.coeffs[k - 1].mul(&eta);
            worst = worst.max(lhs.sub(&rhs).max_norm());
        }
        Ok(worst)
    }
}

/// Exact coefficient recursion `F_k = ∫_{z₀}^{z} F_{k−1} η₋₁ dz`.
pub fn integrate_potential(p: &PotentialSpec, cap: usize) -> Result<MeromorphicFrame> {
    if cap < 1 {
        return Err(Error::Precondition("integration cap must be >= 1".into()));
    }
    let eta = eta_polynomial(p)?;
    let dim = p.dim();
    let z0 = p.base_point();
    let eta_scale = eta.scale_sum() * (1.0 + z0.norm());
    let mut coeffs = vec![PolyMatrix::constant(CMat::identity(dim, dim))];
    let mut terminated = false;
    for _ in 1..=cap {
        let prev = coeffs.last().unwrap();
        let next = prev.mul(&eta).antiderivative(z0);
        let scale = prev.scale_sum() * eta_scale;
        if next.max_norm() <= 1e-13 * scale {
            terminated = true;
            break;
        }
        coeffs.push(next);
    }
    Ok(MeromorphicFrame {
        dim,
        coeffs,
        base_point: z0,
        terminated,
        cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{builtin_potential, Builtin};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zero_potential_terminates_immediately() {
        let f = integrate_potential(&PotentialSpec::zero(2).unwrap(), 10).unwrap();
        assert!(f.terminated());
        assert_eq!(f.terminated_at(), Some(1));
        assert_eq!(f.order(), 0);
        let l = f.eval(c(0.3, 0.9));
        assert_eq!(l.coeffs(), &[CMat::identity(6, 6)]);
    }

    #[test]
    fn s6_first_coefficient_entry() {
        let p = builtin_potential(&Builtin::S6).unwrap();
        let f = integrate_potential(&p, DEFAULT_CAP).unwrap();
        let e = f.coeff(1).unwrap().entry(0, 4);
        assert_eq!(e[0], c(0.0, 0.0));
        assert_eq!(e[1], c(0.0, 0.0));
        assert_eq!(e[2], c(0.0, 0.5));
        assert!(f.terminated());
        assert_eq!(f.order(), 2);
        assert!(f.recursion_defect(&p).unwrap() < 1e-14);
    }

    #[test]
    fn duality_first_coefficient_block() {
        let p = builtin_potential(&Builtin::parse("duality").unwrap()).unwrap();
        let f = integrate_potential(&p, DEFAULT_CAP).unwrap();
        assert!(f.terminated());
        assert_eq!(f.order(), 1);
        let z = c(0.8, -0.3);
        let m = f.coeff(1).unwrap().eval(z);
        let z2 = z * z;
        let i = c(0.0, 1.0);
        let want = [
            [-i * z2, z2],
            [i * z2, -z2],
            [z, i * z],
            [i * z, -z],
        ];
        for r in 0..4 {
            for s in 0..2 {
                assert!((m[(r, 4 + s)] - want[r][s] * 0.5).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn normalization_at_base_point() {
        let b1 = builtin_potential(&Builtin::S6).unwrap().entries().to_vec();
        let p = PotentialSpec::new(4, b1, c(0.4, -0.2), "shifted").unwrap();
        let f = integrate_potential(&p, DEFAULT_CAP).unwrap();
        let l = f.eval(p.base_point());
        for (k, m) in l.terms() {
            let target = if k == 0 { CMat::identity(8, 8) } else { CMat::zeros(8, 8) };
            assert!(max_norm(&(m - target)) < 1e-14);
        }
    }

    #[test]
    fn rational_entries_are_unsupported() {
        let mut b1 = vec![vec![crate::rational::RationalFunction::zero(); 2]; 4];
        b1[0][0] = crate::rational::RationalFunction::new(vec![c(1.0, 0.0)], vec![c(2.0, 0.0), c(1.0, 0.0)]).unwrap();
        let p = PotentialSpec::new(2, b1, c(0.0, 0.0), "r").unwrap();
        assert!(matches!(integrate_potential(&p, 5), Err(Error::UnsupportedAntiderivative(_))));
    }
}
