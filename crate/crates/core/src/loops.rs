//! Finite Laurent series in the loop parameter with matrix coefficients.

use serde::{Deserialize, Serialize};

use crate::algebra::{
    from_orthogonal_basis, group_defect, max_norm, sigma_unchecked, to_orthogonal_basis,
    MinkowskiForm,
};
use crate::{CMat, Error, RealForm, Result, C64};

/// Default bound on `|k|` kept by loop arithmetic.
pub const DEFAULT_TRUNCATION: i32 = 24;

/// Number of unit-circle samples used by the group-membership part of [`LaurentLoop::reality_defect`].
const REALITY_SAMPLES: usize = 8;

/// Symmetric geometric weight `ω(k) = ρ^{|k|}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WienerWeight {
    rho: f64,
}

impl WienerWeight {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho >= 1.0) || !rho.is_finite() {
            return Err(Error::Domain(format!("weight base must be >= 1, got {rho}")));
        }
        Ok(Self { rho })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn weight(&self, k: i32) -> f64 {
        self.rho.powi(k.abs())
    }
}

impl Default for WienerWeight {
    fn default() -> Self {
        Self { rho: 1.2 }
    }
}

/// `Σ_{k=d_min}^{d_max} λᵏ a_k` with square complex coefficients of a common size.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentLoop {
    dim: usize,
    d_min: i32,
    coeffs: Vec<CMat>,
    truncation_order: i32,
    truncated: bool,
}

impl LaurentLoop {
    /// Loop with coefficients for degrees `d_min, d_min + 1, …`.
    pub fn new(dim: usize, d_min: i32, coeffs: Vec<CMat>) -> Result<Self> {
        for c in &coeffs {
            if c.nrows() != dim || c.ncols() != dim {
                return Err(Error::dim(
                    format!("{dim}x{dim}"),
                    format!("{}x{}", c.nrows(), c.ncols()),
                ));
            }
        }
        Ok(Self {
            dim,
            d_min,
            coeffs,
            truncation_order: DEFAULT_TRUNCATION,
            truncated: false,
        })
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(CMat::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self::constant(CMat::identity(dim, dim))
    }

    pub fn constant(m: CMat) -> Self {
        Self::monomial(0, m)
    }

    /// `λᵏ m`.
    pub fn monomial(k: i32, m: CMat) -> Self {
        let dim = m.nrows();
        Self {
            dim,
            d_min: k,
            coeffs: vec![m],
            truncation_order: DEFAULT_TRUNCATION,
            truncated: false,
        }
    }

    /// Loop from `(degree, coefficient)` pairs; repeated degrees are summed.
    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (i32, CMat)>) -> Result<Self> {
        let terms: Vec<_> = terms.into_iter().collect();
        if terms.is_empty() {
            return Ok(Self::zero(dim));
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![CMat::zeros(dim, dim); (hi - lo + 1) as usize];
        for (k, m) in terms {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::dim(
                    format!("{dim}x{dim}"),
                    format!("{}x{}", m.nrows(), m.ncols()),
                ));
            }
            coeffs[(k - lo) as usize] += m;
        }
        Self::new(dim, lo, coeffs)
    }

    /// Fourier coefficients `d_min..=d_max` of `f` from `samples` equispaced unit-circle values.
    pub fn from_samples<F>(dim: usize, d_min: i32, d_max: i32, samples: usize, f: F) -> Result<Self>
    where
        F: Fn(C64) -> Result<CMat>,
    {
        let width = (d_max - d_min + 1) as usize;
        if samples < width {
            return Err(Error::Precondition(format!(
                "{samples} samples cannot resolve {width} Fourier modes"
            )));
        }
        let mut coeffs = vec![CMat::zeros(dim, dim); width];
        for s in 0..samples {
            let theta = std::f64::consts::TAU * s as f64 / samples as f64;
            let lam = C64::from_polar(1.0, theta);
            let v = f(lam)?;
            if v.nrows() != dim || v.ncols() != dim {
                return Err(Error::dim(dim, v.nrows()));
            }
            for (idx, c) in coeffs.iter_mut().enumerate() {
                let k = d_min + idx as i32;
                *c += &v * C64::from_polar(1.0 / samples as f64, -theta * k as f64);
            }
        }
        Self::new(dim, d_min, coeffs)
    }

    pub fn with_truncation(mut self, order: i32) -> Self {
        self.truncation_order = order;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn d_min(&self) -> i32 {
        self.d_min
    }

    pub fn d_max(&self) -> i32 {
        self.d_min + self.coeffs.len() as i32 - 1
    }

    pub fn truncation_order(&self) -> i32 {
        self.truncation_order
    }

    /// True if arithmetic discarded nonzero coefficients producing this loop.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    /// Iterator over `(degree, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &CMat)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.d_min + i as i32, c))
    }

    /// Coefficient at degree `k`, if stored.
    pub fn coeff(&self, k: i32) -> Option<&CMat> {
        if k < self.d_min {
            return None;
        }
        self.coeffs.get((k - self.d_min) as usize)
    }

    /// Coefficient at degree `k`, zero outside the stored range.
    pub fn coeff_or_zero(&self, k: i32) -> CMat {
        self.coeff(k)
            .cloned()
            .unwrap_or_else(|| CMat::zeros(self.dim, self.dim))
    }

    /// Drop leading and trailing coefficients whose max-norm is at most `tol`.
    pub fn trimmed(mut self, tol: f64) -> Self {
        while self.coeffs.len() > 1 && max_norm(self.coeffs.last().unwrap()) <= tol {
            self.coeffs.pop();
        }
        while self.coeffs.len() > 1 && max_norm(&self.coeffs[0]) <= tol {
            self.coeffs.remove(0);
            self.d_min += 1;
        }
        self
    }

    /// Apply `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&CMat) -> CMat) -> Self {
        let coeffs: Vec<CMat> = self.coeffs.iter().map(f).collect();
        let dim = coeffs.first().map_or(self.dim, |c| c.nrows());
        Self {
            dim,
            coeffs,
            ..self.clone()
        }
    }

    /// Coefficients conjugated into the orthogonal basis (`P⁻¹ a_k P`).
    pub fn to_orthogonal_basis(&self) -> Self {
        self.map_coeffs(to_orthogonal_basis)
    }

    /// Coefficients conjugated back into the Minkowski basis (`P a_k P⁻¹`).
    pub fn from_orthogonal_basis(&self) -> Self {
        self.map_coeffs(from_orthogonal_basis)
    }

    /// Left multiplication of every coefficient by a constant matrix.
    pub fn left_mul_const(&self, m: &CMat) -> Self {
        self.map_coeffs(|c| m * c)
    }

    /// Right multiplication of every coefficient by a constant matrix.
    pub fn right_mul_const(&self, m: &CMat) -> Self {
        self.map_coeffs(|c| c * m)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::dim(self.dim, other.dim));
        }
        Ok(())
    }

    /// Cauchy product truncated to `|k| ≤ truncation_order`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let order = self.truncation_order.max(other.truncation_order);
        let lo = self.d_min + other.d_min;
        let hi = self.d_max() + other.d_max();
        let keep_lo = lo.max(-order);
        let keep_hi = hi.min(order);
        let mut truncated = self.truncated || other.truncated;
        if keep_lo > keep_hi {
            let any = self.coeffs.iter().any(|c| max_norm(c) > 0.0)
                && other.coeffs.iter().any(|c| max_norm(c) > 0.0);
            let mut z = Self::zero(self.dim).with_truncation(order);
            z.truncated = truncated || any;
            return Ok(z);
        }
        let mut coeffs = vec![CMat::zeros(self.dim, self.dim); (keep_hi - keep_lo + 1) as usize];
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                let k = i + j;
                if k < keep_lo || k > keep_hi {
                    if !truncated && max_norm(a) > 0.0 && max_norm(b) > 0.0 {
                        truncated = max_norm(&(a * b)) > 0.0;
                    }
                    continue;
                }
                coeffs[(k - keep_lo) as usize] += a * b;
            }
        }
        Ok(Self {
            dim: self.dim,
            d_min: keep_lo,
            coeffs,
            truncation_order: order,
            truncated,
        })
    }

    /// Coefficient-wise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a + b)
    }

    /// Coefficient-wise difference.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a - b)
    }

    fn combine(&self, other: &Self, op: impl Fn(&CMat, &CMat) -> CMat) -> Result<Self> {
        self.check_dim(other)?;
        let lo = self.d_min.min(other.d_min);
        let hi = self.d_max().max(other.d_max());
        let coeffs = (lo..=hi)
            .map(|k| op(&self.coeff_or_zero(k), &other.coeff_or_zero(k)))
            .collect();
        Ok(Self {
            dim: self.dim,
            d_min: lo,
            coeffs,
            truncation_order: self.truncation_order.max(other.truncation_order),
            truncated: self.truncated || other.truncated,
        })
    }

    /// Inverse loop, exact up to degrees `|k| ≤ order`.
    ///
    /// Loops with only non-negative (or only non-positive) degrees are inverted by the
    /// power-series recursion; general loops by the Neumann series in `N = I − a₀⁻¹a`.
    /// The result is flagged as truncated when the series did not terminate within `order`.
    pub fn inverse(&self, order: i32) -> Result<Self> {
        let a0 = self.coeff_or_zero(0);
        let lu = a0.clone().lu();
        let a0_inv = lu
            .try_inverse()
            .ok_or_else(|| Error::NotInvertible("degree-0 coefficient is singular".into()))?;
        let cond = max_norm(&a0) * max_norm(&a0_inv) * self.dim as f64;
        if !cond.is_finite() || cond > 1e12 {
            return Err(Error::NotInvertible(format!(
                "degree-0 coefficient has condition estimate {cond:.3e}"
            )));
        }
        let order = order.max(0);
        if self.d_min >= 0 || self.d_max() <= 0 {
            return Ok(self.series_inverse(&a0_inv, order));
        }
        self.neumann_inverse(&a0_inv, order)
    }

    fn series_inverse(&self, a0_inv: &CMat, order: i32) -> Self {
        let sign = if self.d_min >= 0 { 1 } else { -1 };
        let dim = self.dim;
        let tail_scale = self.coeffs.iter().map(max_norm).fold(0.0, f64::max).max(1.0);
        let mut out: Vec<CMat> = vec![a0_inv.clone()];
        let mut truncated = false;
        let max_deg = self.d_max().abs().max(self.d_min.abs());
        let mut zero_run = 0;
        for k in 1..=order {
            let mut s = CMat::zeros(dim, dim);
            for j in 1..=k {
                if let Some(aj) = self.coeff(sign * j) {
                    s += aj * &out[(k - j) as usize];
                }
            }
            let xk = -(a0_inv * s);
            let negligible = max_norm(&xk) <= 1e-15 * tail_scale;
            out.push(xk);
            // A run of max_deg consecutive zero coefficients means the recursion has terminated.
            if negligible {
                zero_run += 1;
                if zero_run >= max_deg.max(1) {
                    break;
                }
            } else {
                zero_run = 0;
                if k == order {
                    truncated = true;
                }
            }
        }
        let (d_min, coeffs) = if sign > 0 {
            (0, out)
        } else {
            let len = out.len() as i32;
            out.reverse();
            (-(len - 1), out)
        };
        Self {
            dim,
            d_min,
            coeffs,
            truncation_order: self.truncation_order.max(order),
            truncated: truncated || self.truncated,
        }
        .trimmed(0.0)
    }

    fn neumann_inverse(&self, a0_inv: &CMat, order: i32) -> Result<Self> {
        let dim = self.dim;
        let weight = WienerWeight::new(1.0)?;
        let id = Self::identity(dim).with_truncation(order);
        let n = id.sub(&self.left_mul_const(a0_inv).with_truncation(order))?;
        let mut term = id.clone();
        let mut sum = id;
        let mut converged = false;
        for _ in 0..(4 * order.max(1) + 64) {
            term = term.mul(&n)?.with_truncation(order);
            let size = term.wiener_norm(&weight);
            sum = sum.add(&term)?;
            if size <= 1e-17 {
                converged = true;
                break;
            }
            if !size.is_finite() {
                break;
            }
        }
        let mut out = sum.right_mul_const(a0_inv);
        out.truncation_order = self.truncation_order.max(order);
        let edge = max_norm(&out.coeff_or_zero(order)).max(max_norm(&out.coeff_or_zero(-order)));
        out.truncated = !converged || edge > 1e-13 || self.truncated;
        Ok(out)
    }

    /// `Σ λᵏ a_k`.
    pub fn eval(&self, lambda: C64) -> Result<CMat> {
        if lambda.norm() == 0.0 {
            if self.d_min < 0 {
                return Err(Error::Pole("evaluation at λ = 0 of a loop with negative degrees".into()));
            }
            return Ok(self.coeff_or_zero(0));
        }
        let mut out = CMat::zeros(self.dim, self.dim);
        for (k, c) in self.terms() {
            out += c * lambda.powi(k);
        }
        Ok(out)
    }

    /// `max_k ‖σ(a_k) − (−1)ᵏ a_k‖_max`.
    pub fn twist_defect(&self) -> f64 {
        self.terms()
            .map(|(k, c)| {
                let s = sigma_unchecked(c);
                let d = if k % 2 == 0 { s - c } else { s + c };
                max_norm(&d)
            })
            .fold(0.0, f64::max)
    }

    /// Coefficient reality defect `max_k ‖conj(a_k) − a_{−k}‖_max`.
    pub fn conjugation_defect(&self) -> f64 {
        let lo = self.d_min.min(-self.d_max());
        let hi = self.d_max().max(-self.d_min);
        (lo..=hi)
            .map(|k| max_norm(&(self.coeff_or_zero(k).conjugate() - self.coeff_or_zero(-k))))
            .fold(0.0, f64::max)
    }

    /// Distance from the real loop group of `realform`.
    ///
    /// The compact form is tested in the orthogonal basis, i.e. on `P⁻¹ a P`.
    pub fn reality_defect(&self, realform: RealForm) -> f64 {
        let probe = match realform {
            RealForm::Noncompact => self.clone(),
            RealForm::Compact => self.to_orthogonal_basis(),
        };
        let coeff_part = probe.conjugation_defect();
        let form = MinkowskiForm::new(self.dim).ok();
        let mut group_part: f64 = 0.0;
        for s in 0..REALITY_SAMPLES {
            let theta = std::f64::consts::TAU * (s as f64 + 0.25) / REALITY_SAMPLES as f64;
            let m = match probe.eval(C64::from_polar(1.0, theta)) {
                Ok(m) => m,
                Err(_) => return f64::INFINITY,
            };
            let d = match realform {
                RealForm::Noncompact => match &form {
                    Some(f) => group_defect(&m, f).unwrap_or(f64::INFINITY),
                    None => f64::INFINITY,
                },
                RealForm::Compact => {
                    max_norm(&(m.transpose() * &m - CMat::identity(self.dim, self.dim)))
                }
            };
            group_part = group_part.max(d);
        }
        coeff_part + group_part
    }

    /// `Σ_k ω(k) ‖a_k‖_max`.
    pub fn wiener_norm(&self, w: &WienerWeight) -> f64 {
        self.terms().map(|(k, c)| w.weight(k) * max_norm(c)).sum()
    }

    /// Max-norm of the coefficients of strictly negative degree.
    pub fn negative_part_norm(&self) -> f64 {
        self.terms()
            .filter(|(k, _)| *k < 0)
            .map(|(_, c)| max_norm(c))
            .fold(0.0, f64::max)
    }

    /// Max-norm of the coefficients of strictly positive degree.
    pub fn positive_part_norm(&self) -> f64 {
        self.terms()
            .filter(|(k, _)| *k > 0)
            .map(|(_, c)| max_norm(c))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_mat(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> CMat {
        CMat::from_fn(dim, dim, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale
        })
    }

    fn rand_loop(rng: &mut ChaCha8Rng, dim: usize, lo: i32, hi: i32) -> LaurentLoop {
        LaurentLoop::new(dim, lo, (lo..=hi).map(|_| rand_mat(rng, dim, 1.0)).collect()).unwrap()
    }

    #[test]
    fn mul_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = rand_loop(&mut rng, 5, -1, 2);
        let id = LaurentLoop::identity(5);
        let p = id.mul(&b).unwrap();
        assert_eq!(p.coeffs(), b.coeffs());
        assert_eq!(p.d_min(), b.d_min());

        let a = rand_mat(&mut rng, 5, 1.0);
        let bb = rand_mat(&mut rng, 5, 1.0);
        let prod = LaurentLoop::monomial(-1, a.clone())
            .mul(&LaurentLoop::monomial(1, bb.clone()))
            .unwrap();
        assert!(max_norm(&(prod.coeff_or_zero(0) - &a * &bb)) < 1e-15);

        let x = rand_loop(&mut rng, 6, -2, 2);
        let y = rand_loop(&mut rng, 6, -2, 2);
        let xy = x.mul(&y).unwrap();
        assert!(!xy.truncated());
        for s in 0..8 {
            let lam = C64::from_polar(1.0, 0.7 * s as f64 + 0.1);
            let lhs = xy.eval(lam).unwrap();
            let rhs = x.eval(lam).unwrap() * y.eval(lam).unwrap();
            assert!(max_norm(&(lhs - rhs)) < 1e-12);
        }
    }

    #[test]
    fn mul_sets_truncation_flag() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = rand_loop(&mut rng, 5, 0, 3).with_truncation(4);
        let y = rand_loop(&mut rng, 5, 0, 3).with_truncation(4);
        let p = x.mul(&y).unwrap();
        assert!(p.truncated());
        assert_eq!(p.d_max(), 4);
    }

    #[test]
    fn inverse_examples() {
        let id = LaurentLoop::identity(5);
        let inv = id.inverse(10).unwrap();
        assert_eq!(inv.coeffs(), id.coeffs());

        let mut n = CMat::zeros(5, 5);
        n[(0, 3)] = C64::new(2.0, 1.0);
        n[(1, 3)] = C64::new(-1.0, 0.0);
        let a = LaurentLoop::from_terms(5, [(0, CMat::identity(5, 5)), (1, n.clone())]).unwrap();
        let inv = a.inverse(10).unwrap();
        assert!(!inv.truncated());
        assert_eq!(inv.d_max(), 1);
        assert_eq!(inv.coeff_or_zero(1), -n.clone());

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pert = rand_mat(&mut rng, 6, 0.1);
        let a = LaurentLoop::from_terms(6, [(0, CMat::identity(6, 6)), (1, pert)]).unwrap();
        let inv = a.inverse(30).unwrap().with_truncation(30);
        let res = a.with_truncation(30).mul(&inv).unwrap();
        let err = res
            .terms()
            .filter(|(k, _)| k.abs() <= 30)
            .map(|(k, c)| {
                let target = if k == 0 { CMat::identity(6, 6) } else { CMat::zeros(6, 6) };
                max_norm(&(c - target))
            })
            .fold(0.0, f64::max);
        assert!(err <= 1e-10, "{err}");
    }

    #[test]
    fn two_sided_inverse_converges() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = LaurentLoop::from_terms(
            5,
            [
                (-1, rand_mat(&mut rng, 5, 0.05)),
                (0, CMat::identity(5, 5) + rand_mat(&mut rng, 5, 0.1)),
                (1, rand_mat(&mut rng, 5, 0.05)),
            ],
        )
        .unwrap();
        let inv = a.inverse(30).unwrap();
        assert!(!inv.truncated());
        let lam = C64::from_polar(1.0, 0.4);
        let prod = a.eval(lam).unwrap() * inv.eval(lam).unwrap();
        assert!(max_norm(&(prod - CMat::identity(5, 5))) < 1e-10);
    }

    #[test]
    fn singular_inverse_errors() {
        let a = LaurentLoop::zero(5);
        assert!(matches!(a.inverse(5), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn eval_examples() {
        let id = LaurentLoop::identity(5);
        assert_eq!(id.eval(C64::new(0.3, 2.0)).unwrap(), CMat::identity(5, 5));
        let a = CMat::from_fn(5, 5, |i, j| C64::new((i + 2 * j) as f64, 1.0));
        let l = LaurentLoop::monomial(-1, a.clone());
        let v = l.eval(C64::new(0.0, 1.0)).unwrap();
        assert!(max_norm(&(v - a * C64::new(0.0, -1.0))) < 1e-15);
        assert!(matches!(l.eval(C64::new(0.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn twist_examples() {
        assert_eq!(LaurentLoop::identity(6).twist_defect(), 0.0);
        let mut off = CMat::zeros(6, 6);
        off[(1, 4)] = C64::new(1.0, 2.0);
        off[(5, 0)] = C64::new(-3.0, 0.0);
        assert_eq!(LaurentLoop::monomial(1, off).twist_defect(), 0.0);
        let mut bd = CMat::zeros(6, 6);
        bd[(1, 2)] = C64::new(1.5, 0.0);
        bd[(4, 5)] = C64::new(0.5, 0.0);
        let l = LaurentLoop::monomial(1, bd.clone());
        assert!((l.twist_defect() - 2.0 * max_norm(&bd)).abs() < 1e-15);
    }

    #[test]
    fn reality_examples() {
        let id = LaurentLoop::identity(6);
        assert!(id.reality_defect(RealForm::Noncompact) < 1e-15);
        assert!(id.reality_defect(RealForm::Compact) < 1e-15);
        let boost = LaurentLoop::constant(crate::algebra::plane_rotation(6, 0, 2, 0.8));
        assert!(boost.reality_defect(RealForm::Noncompact) < 1e-14);
        assert!(boost.reality_defect(RealForm::Compact) > 0.1);
    }

    #[test]
    fn wiener_examples() {
        let w = WienerWeight::default();
        assert_eq!(LaurentLoop::identity(7).wiener_norm(&w), 1.0);
        let a = CMat::from_fn(5, 5, |i, j| C64::new(i as f64 - j as f64, 0.5));
        let l = LaurentLoop::from_terms(5, [(-1, a.clone()), (1, a.clone())]).unwrap();
        let w2 = WienerWeight::new(2.0).unwrap();
        assert!((l.wiener_norm(&w2) - 4.0 * max_norm(&a)).abs() < 1e-14);
        assert_eq!(LaurentLoop::zero(5).wiener_norm(&w), 0.0);
        assert!(WienerWeight::new(0.5).is_err());
    }

    #[test]
    fn from_samples_recovers_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let l = rand_loop(&mut rng, 5, -2, 3);
        let back = LaurentLoop::from_samples(5, -3, 4, 16, |lam| l.eval(lam)).unwrap();
        let diff = back.sub(&l).unwrap();
        assert!(diff.wiener_norm(&WienerWeight::default()) < 1e-13);
    }
}
