//! Minkowski linear algebra on `ℝ^{1,n+3}` and its complexification.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{CMat, Error, Result, C64};

/// Size of the upper (Lorentzian) block in the `(4, n)` block split.
pub const UPPER: usize = 4;

/// Max-norm `max |m_ij|` of a complex matrix.
pub fn max_norm(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, c| acc.max(c.norm()))
}

/// Max-norm of a real matrix.
pub fn max_norm_real(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, c| acc.max(c.abs()))
}

/// The indefinite form `I_{1,n+3} = diag(−1, 1, …, 1)` on `ℝ^{n+4}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinkowskiForm {
    dim: usize,
}

impl MinkowskiForm {
    /// Form of total dimension `dim = n + 4`; requires `dim ≥ 5`.
    pub fn new(dim: usize) -> Result<Self> {
        if dim < UPPER + 1 {
            return Err(Error::dim(">= 5", dim));
        }
        Ok(Self { dim })
    }

    /// Form for codimension `n`.
    pub fn for_codim(n: usize) -> Result<Self> {
        Self::new(n + UPPER)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn codim(&self) -> usize {
        self.dim - UPPER
    }

    /// Diagonal sign of coordinate `i`.
    #[inline]
    pub fn sign(&self, i: usize) -> f64 {
        if i == 0 {
            -1.0
        } else {
            1.0
        }
    }

    /// The signature matrix as a complex matrix.
    pub fn matrix(&self) -> CMat {
        signature(self.dim)
    }
}

/// `diag(−1, 1, …, 1)` of size `dim`.
pub fn signature(dim: usize) -> CMat {
    let mut m = CMat::identity(dim, dim);
    m[(0, 0)] = C64::new(-1.0, 0.0);
    m
}

/// Bilinear Minkowski product `−u₀v₀ + Σ_{j≥1} u_j v_j` (no conjugation).
pub fn mink_product(u: &[C64], v: &[C64]) -> Result<C64> {
    if u.len() != v.len() {
        return Err(Error::dim(u.len(), v.len()));
    }
    if u.len() < UPPER + 1 {
        return Err(Error::dim(">= 5", u.len()));
    }
    Ok(mink_unchecked(u, v))
}

#[inline]
pub(crate) fn mink_unchecked(u: &[C64], v: &[C64]) -> C64 {
    let mut s = -u[0] * v[0];
    for (a, b) in u[1..].iter().zip(&v[1..]) {
        s += a * b;
    }
    s
}

/// Real Minkowski product for real vectors of any length ≥ 1.
#[inline]
pub fn mink_real(u: &[f64], v: &[f64]) -> f64 {
    let mut s = -u[0] * v[0];
    for (a, b) in u[1..].iter().zip(&v[1..]) {
        s += a * b;
    }
    s
}

/// `‖MᵗIM − I‖_max + |det M − 1|`; zero iff `M ∈ SO(1,n+3)^ℂ`.
pub fn group_defect(m: &CMat, form: &MinkowskiForm) -> Result<f64> {
    if !m.is_square() || m.nrows() != form.dim() {
        return Err(Error::dim(
            format!("{0}x{0}", form.dim()),
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    let j = form.matrix();
    let g = m.transpose() * &j * m - &j;
    Ok(max_norm(&g) + (m.clone().determinant() - C64::new(1.0, 0.0)).norm())
}

/// `‖MᵗM − I‖_max + |det M − 1|`; zero iff `M ∈ SO(N, ℂ)`.
pub fn orthogonal_defect(m: &CMat) -> f64 {
    let n = m.nrows();
    let g = m.transpose() * m - CMat::identity(n, n);
    max_norm(&g) + (m.clone().determinant() - C64::new(1.0, 0.0)).norm()
}

fn check_square(m: &CMat) -> Result<()> {
    if !m.is_square() || m.nrows() < UPPER + 1 {
        return Err(Error::dim(
            "square, size >= 5",
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(())
}

/// Parity `+1` for the upper block coordinates and `−1` for the normal block.
#[inline]
pub fn block_parity(i: usize) -> f64 {
    if i < UPPER {
        1.0
    } else {
        -1.0
    }
}

/// The involution `σ(M) = D M D`, `D = diag(I₄, −Iₙ)`.
pub fn sigma(m: &CMat) -> Result<CMat> {
    check_square(m)?;
    Ok(sigma_unchecked(m))
}

pub(crate) fn sigma_unchecked(m: &CMat) -> CMat {
    let mut out = m.clone();
    for ((i, j), v) in out
        .iter_mut()
        .enumerate()
        .map(|(idx, v)| ((idx % m.nrows(), idx / m.nrows()), v))
    {
        if block_parity(i) != block_parity(j) {
            *v = -*v;
        }
    }
    out
}

/// `k ⊕ p` decomposition of a square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition {
    /// Block-diagonal part `(X + σX)/2`.
    pub k_part: CMat,
    /// Off-diagonal part `(X − σX)/2`.
    pub p_part: CMat,
}

impl BlockDecomposition {
    /// Upper-right `4×n` block of the `p` part.
    pub fn upper_right(&self) -> CMat {
        let n = self.p_part.nrows() - UPPER;
        self.p_part.view((0, UPPER), (UPPER, n)).into_owned()
    }

    /// `‖B₂ + B₁ᵗI_{1,3}‖_max`; zero for elements of `so(1,n+3)`.
    pub fn p_symmetry_defect(&self) -> f64 {
        let n = self.p_part.nrows() - UPPER;
        let b1 = self.upper_right();
        let b2 = self.p_part.view((UPPER, 0), (n, UPPER)).into_owned();
        max_norm(&(b2 + b1.transpose() * signature(UPPER)))
    }
}

/// Split `X` into its `σ`-even and `σ`-odd parts.
pub fn block_split(x: &CMat) -> Result<BlockDecomposition> {
    check_square(x)?;
    // Copy entries instead of averaging so that k + p reproduces x bit for bit.
    let dim = x.nrows();
    let mut k_part = CMat::zeros(dim, dim);
    let mut p_part = CMat::zeros(dim, dim);
    for j in 0..dim {
        for i in 0..dim {
            if block_parity(i) == block_parity(j) {
                k_part[(i, j)] = x[(i, j)];
            } else {
                p_part[(i, j)] = x[(i, j)];
            }
        }
    }
    Ok(BlockDecomposition { k_part, p_part })
}

/// Off-diagonal Lie algebra element `[[0, B], [−BᵗI_{1,3}, 0]]` built from a `4×n` block.
pub fn p_element(b: &CMat) -> CMat {
    let n = b.ncols();
    let dim = n + UPPER;
    let mut x = CMat::zeros(dim, dim);
    for i in 0..UPPER {
        let s = if i == 0 { -1.0 } else { 1.0 };
        for j in 0..n {
            x[(i, UPPER + j)] = b[(i, j)];
            x[(UPPER + j, i)] = -b[(i, j)] * s;
        }
    }
    x
}

/// Real `2r×2c` embedding `[[Re, −Im], [Im, Re]]`.
pub fn real_embedding(m: &CMat) -> DMatrix<f64> {
    let (r, c) = m.shape();
    DMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let v = m[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) | (false, false) => v.re,
            (true, false) => -v.im,
            (false, true) => v.im,
        }
    })
}

/// Singular values of a complex matrix, descending, computed from its real embedding.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    let mut sv: Vec<f64> = real_embedding(m).singular_values().iter().cloned().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv.into_iter().step_by(2).collect()
}

/// Convert a real matrix to complex.
pub fn complexify(m: &DMatrix<f64>) -> CMat {
    m.map(|v| C64::new(v, 0.0))
}

/// Real parts of a complex matrix.
pub fn real_part(m: &CMat) -> DMatrix<f64> {
    m.map(|v| v.re)
}

/// Largest imaginary part in absolute value.
pub fn max_imag(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, c| acc.max(c.im.abs()))
}

/// Column `j` of a complex matrix as a vector.
pub fn column(m: &CMat, j: usize) -> DVector<C64> {
    m.column(j).into_owned()
}

/// Conjugation `diag(i, 1, …, 1)` taking the orthogonal basis to the Minkowski basis:
/// `g = P h P⁻¹` sends `SO(n+4)` into `SO(1,n+3)^ℂ`.
pub fn compact_basis(dim: usize) -> CMat {
    let mut p = CMat::identity(dim, dim);
    p[(0, 0)] = C64::new(0.0, 1.0);
    p
}

/// `h = P⁻¹ g P`: Minkowski basis to orthogonal basis.
pub fn to_orthogonal_basis(g: &CMat) -> CMat {
    let mut h = g.clone();
    let i = C64::new(0.0, 1.0);
    for k in 1..g.nrows() {
        h[(0, k)] *= -i;
        h[(k, 0)] *= i;
    }
    h
}

/// `g = P h P⁻¹`: orthogonal basis to Minkowski basis.
pub fn from_orthogonal_basis(h: &CMat) -> CMat {
    let mut g = h.clone();
    let i = C64::new(0.0, 1.0);
    for k in 1..h.nrows() {
        g[(0, k)] *= i;
        g[(k, 0)] *= -i;
    }
    g
}

/// Block rotation in coordinates `(a, b)` by angle `t`; hyperbolic if one index is 0.
pub fn plane_rotation(dim: usize, a: usize, b: usize, t: f64) -> CMat {
    let mut m = CMat::identity(dim, dim);
    if a == 0 || b == 0 {
        let (c, s) = (t.cosh(), t.sinh());
        m[(a, a)] = c.into();
        m[(b, b)] = c.into();
        m[(a, b)] = s.into();
        m[(b, a)] = s.into();
    } else {
        let (c, s) = (t.cos(), t.sin());
        m[(a, a)] = c.into();
        m[(b, b)] = c.into();
        m[(a, b)] = (-s).into();
        m[(b, a)] = s.into();
    }
    m
}
