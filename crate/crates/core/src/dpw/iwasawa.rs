use nalgebra::DMatrix;

use crate::algebra::{
    block_parity, complexify, max_norm, max_norm_real, real_embedding, real_part, signature, UPPER,
};
use crate::loops::{LaurentLoop, WienerWeight};
use crate::{CMat, Error, RealForm, Result, C64};

const COLUMN_FLOOR: f64 = 1e-12;
const NORMALIZE_STEPS: usize = 8;

/// `M = frame · positive` with `frame` real on the unit circle and `positive` holomorphic at `λ = 0`.
#[derive(Debug, Clone)]
pub struct IwasawaSplit {
    /// Real twisted loop (in the Minkowski basis for both real forms).
    pub frame: LaurentLoop,
    /// Positive loop; its inverse is [`Self::positive_inverse`].
    pub positive: LaurentLoop,
    /// `positive⁻¹`, the right factor making `M · positive⁻¹` real.
    pub positive_inverse: LaurentLoop,
    /// Relative Wiener-norm residual `‖M − frame·positive‖ / max(1, ‖M‖)`.
    pub residual: f64,
    pub realform: RealForm,
}

impl IwasawaSplit {
    /// `positive⁻¹(0)`, the constant term of the gauge taking `M` to the real frame.
    pub fn gauge_at_zero(&self) -> CMat {
        self.positive_inverse.coeff_or_zero(0)
    }
}

/// Iwasawa factorization of a twisted Laurent polynomial loop.
///
/// The gauge `V = positive⁻¹` is found as the kernel of the real-linear system
/// "`M·V` has coefficients with `conj(X_k) = X_{−k}`", restricted to twisted `V` of
/// degree at most the width of `M`. The kernel is fixed up to a real constant, which is
/// pinned by normalizing `positive(0)`: Hermitian positive definite on definite blocks, and
/// of the form `(S, I)` in the spinor model of the Lorentz block.
pub fn iwasawa_split(m: &LaurentLoop, realform: RealForm, tol: f64) -> Result<IwasawaSplit> {
    let dim = m.dim();
    if dim < UPPER + 1 {
        return Err(Error::dim(">= 5", dim));
    }
    let weight = WienerWeight::default();
    let scale = m.wiener_norm(&weight).max(1.0);
    let twist = m.twist_defect();
    if twist > tol * scale {
        return Err(Error::Precondition(format!(
            "loop is not twisted (defect {twist:.3e})"
        )));
    }
    let work = match realform {
        RealForm::Noncompact => m.clone(),
        RealForm::Compact => m.to_orthogonal_basis(),
    };
    let form = match realform {
        RealForm::Noncompact => signature(dim),
        RealForm::Compact => CMat::identity(dim, dim),
    };
    let raw = kernel_gauge(&work, &form, realform)?;
    let v0 = raw.coeff_or_zero(0);
    let fix = complexify(&normalizer(&v0, &form, realform)?);
    let gauge = raw.map_coeffs(|v| v * &fix);

    let frame = work.mul(&gauge)?.trimmed(0.0);
    // Group-valued gauge: V(λ)⁻¹ = J V(λ)ᵗ J coefficientwise.
    let positive = gauge.map_coeffs(|v| &form * v.transpose() * &form);

    let (frame, positive, gauge) = match realform {
        RealForm::Noncompact => (frame, positive, gauge),
        RealForm::Compact => (
            frame.from_orthogonal_basis(),
            positive.from_orthogonal_basis(),
            gauge.from_orthogonal_basis(),
        ),
    };

    if realform == RealForm::Noncompact {
        let at_one = frame.eval(C64::new(1.0, 0.0))?;
        if at_one[(0, 0)].re <= 0.0 {
            return Err(Error::IwasawaCell(
                "frame reverses time orientation (second Iwasawa cell)".into(),
            ));
        }
    }

    let recomposed = frame.mul(&positive)?;
    let residual = m.sub(&recomposed)?.wiener_norm(&weight) / scale;
    if !(residual <= tol) {
        return Err(Error::IwasawaCell(format!(
            "recomposition residual {residual:.3e} exceeds tolerance {tol:.1e}"
        )));
    }
    Ok(IwasawaSplit {
        frame,
        positive,
        positive_inverse: gauge,
        residual,
        realform,
    })
}

/// Gauge `V` with `M·V` real, up to a real constant on the right, from the kernel of the reality system.
fn kernel_gauge(work: &LaurentLoop, form: &CMat, realform: RealForm) -> Result<LaurentLoop> {
    let dim = work.dim();
    let a = (-work.d_min()).max(0) as usize;
    let b = work.d_max().max(0) as usize;
    let degree = a + b;
    let mut v_raw = vec![CMat::zeros(dim, dim); degree + 1];
    for class in [1.0, -1.0] {
        let cols: Vec<usize> = (0..dim).filter(|&c| block_parity(c) == class).collect();
        let kernel = class_kernel(work, degree, class, cols.len())?;
        for (slot, &col) in cols.iter().enumerate() {
            for (j, vj) in v_raw.iter_mut().enumerate() {
                for r in 0..dim {
                    vj[(r, col)] = kernel[j][(r, slot)];
                }
            }
        }
    }
    check_cell(&v_raw[0], form, realform)?;
    Ok(LaurentLoop::new(dim, 0, v_raw)?
        .with_truncation(work.truncation_order().max(2 * degree as i32 + 2)))
}

/// Real kernel of the reality system for the columns of one parity class.
///
/// Returns `degree + 1` matrices of size `dim × kdim`.
fn class_kernel(m: &LaurentLoop, degree: usize, class: f64, kdim: usize) -> Result<Vec<CMat>> {
    let dim = m.dim();
    // Unknowns: (j, r) with block_parity(r) = (−1)^j · class; real and imaginary parts.
    let mut unknowns = Vec::new();
    for j in 0..=degree {
        let want = if j % 2 == 0 { class } else { -class };
        for r in 0..dim {
            if block_parity(r) == want {
                unknowns.push((j, r));
            }
        }
    }
    let nu = unknowns.len();
    let kmax = (m.d_max() + degree as i32).max(-m.d_min()).max(0);
    let rows_needed = 2 * dim * (kmax as usize + 1);
    let nrows = rows_needed.max(2 * nu);
    let mut sys = DMatrix::<f64>::zeros(nrows, 2 * nu);
    let i = C64::new(0.0, 1.0);
    for k in 0..=kmax {
        let base = 2 * dim * k as usize;
        for (col, &(j, r)) in unknowns.iter().enumerate() {
            // Coefficient of v_{j,r} in X_{-k} − conj(X_k), with X_k = Σ_j M_{k−j} v_j.
            let am = m.coeff(-k - j as i32);
            let ap = m.coeff(k - j as i32);
            for row in 0..dim {
                let mm = am.map_or(C64::new(0.0, 0.0), |a| a[(row, r)]);
                let pp = ap.map_or(C64::new(0.0, 0.0), |a| a[(row, r)]).conj();
                let re_coef = mm - pp;
                let im_coef = i * (mm + pp);
                sys[(base + row, col)] = re_coef.re;
                sys[(base + dim + row, col)] = re_coef.im;
                sys[(base + row, nu + col)] = im_coef.re;
                sys[(base + dim + row, nu + col)] = im_coef.im;
            }
        }
    }
    let ncols = 2 * nu;
    let norms: Vec<f64> = (0..ncols).map(|c| sys.column(c).norm()).collect();
    let widest = norms.iter().cloned().fold(f64::MIN_POSITIVE, f64::max);
    // Columns at roundoff level are free unknowns; keep them at the common scale.
    let col_scale: Vec<f64> = norms
        .iter()
        .map(|&s| if s < COLUMN_FLOOR * widest { widest } else { s })
        .collect();
    for (c, &s) in col_scale.iter().enumerate() {
        sys.column_mut(c).unscale_mut(s);
    }
    let svd = sys.svd(false, true);
    let vt = svd
        .v_t
        .ok_or_else(|| Error::IwasawaCell("SVD failed".into()))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let sv: Vec<f64> = order.iter().map(|&o| svd.singular_values[o]).collect();
    let top = sv[0].max(f64::MIN_POSITIVE);
    let last_kernel = sv[ncols - kdim];
    let first_range = if ncols > kdim { sv[ncols - kdim - 1] } else { top };
    if last_kernel > 1e-8 * top || first_range < 1e3 * last_kernel.max(1e-14 * top) {
        return Err(Error::IwasawaCell(format!(
            "reality system has no clean {kdim}-dimensional kernel (σ = {last_kernel:.3e}, gap to {first_range:.3e})"
        )));
    }
    let mut out = vec![CMat::zeros(dim, kdim); degree + 1];
    for slot in 0..kdim {
        let row = vt.row(order[ncols - kdim + slot]);
        for (col, &(j, r)) in unknowns.iter().enumerate() {
            let re = row[col] / col_scale[col];
            let im = row[nu + col] / col_scale[nu + col];
            out[j][(r, slot)] = C64::new(re, im);
        }
    }
    // Re-express the kernel in a basis orthonormal at λ = 0.
    let at_zero = real_embedding_columns(&out[0]);
    let r = at_zero.qr().r();
    let diag_max = r.diagonal().iter().fold(0.0f64, |a, d| a.max(d.abs()));
    let diag_min = r.diagonal().iter().fold(f64::INFINITY, |a, d| a.min(d.abs()));
    if !(diag_min > 1e-12 * diag_max) {
        return Err(Error::IwasawaCell("gauge is singular at λ = 0".into()));
    }
    let r_inv = complexify(
        &r.try_inverse()
            .ok_or_else(|| Error::IwasawaCell("gauge is singular at λ = 0".into()))?,
    );
    Ok(out.iter().map(|v| v * &r_inv).collect())
}

fn real_embedding_columns(v: &CMat) -> DMatrix<f64> {
    let (rows, cols) = v.shape();
    DMatrix::from_fn(2 * rows, cols, |r, c| {
        let z = v[(r % rows, c)];
        if r < rows {
            z.re
        } else {
            z.im
        }
    })
}

/// The kernel gauge at `λ = 0` must have the signature of the real group block by block.
fn check_cell(v0: &CMat, form: &CMat, realform: RealForm) -> Result<()> {
    let dim = v0.nrows();
    let q = v0.transpose() * form * v0;
    let qs = (&q + q.transpose()) * C64::new(0.5, 0.0);
    let qn = max_norm(&qs).max(f64::MIN_POSITIVE);
    let imag = qs.iter().fold(0.0f64, |acc, c| acc.max(c.im.abs()));
    if imag > 1e-6 * qn {
        return Err(Error::IwasawaCell(format!(
            "gauge metric is not real (relative imaginary part {:.3e})",
            imag / qn
        )));
    }
    let real = qs.map(|c| c.re);
    let n = dim - UPPER;
    let upper = real.view((0, 0), (UPPER, UPPER)).into_owned().symmetric_eigen();
    let lower = real.view((UPPER, UPPER), (n, n)).into_owned().symmetric_eigen();
    let floor = 1e-10 * qn;
    let neg_upper = upper.eigenvalues.iter().filter(|&&e| e < -floor).count();
    let pos_upper = upper.eigenvalues.iter().filter(|&&e| e > floor).count();
    let pos_lower = lower.eigenvalues.iter().filter(|&&e| e > floor).count();
    let (want_neg, want_pos) = match realform {
        RealForm::Noncompact => (1, UPPER - 1),
        RealForm::Compact => (0, UPPER),
    };
    if neg_upper != want_neg || pos_upper != want_pos || pos_lower != n {
        return Err(Error::IwasawaCell(format!(
            "gauge metric has signature ({neg_upper}, {pos_upper} | {pos_lower}) instead of ({want_neg}, {want_pos} | {n})"
        )));
    }
    Ok(())
}

/// Real gauge `T` such that `B₀ = (V₀·T)⁻¹` is the normalized constant term of the positive factor.
///
/// Definite blocks: `B₀` Hermitian positive definite. Lorentz block: `B₀` acts on the spinor
/// model `x ↦ P·x·Qᵗ` of `ℂ^{1,3}` as `(S, I)` with `Re tr S ≥ 0`. Starting from any real `T`
/// with `Tᵗ·Q·T = F`, the real factor of `B₀` is split off until it is the identity.
fn normalizer(v0: &CMat, form: &CMat, realform: RealForm) -> Result<DMatrix<f64>> {
    let q = metric(v0, form);
    let f = real_part(form);
    let mut t = polish(&metric_frame(v0, &q, realform)?, &q, &f);
    for _ in 0..NORMALIZE_STEPS {
        let b0 = (v0 * complexify(&t))
            .try_inverse()
            .ok_or_else(|| Error::IwasawaCell("gauge is singular at λ = 0".into()))?;
        let k = real_factor(&b0, realform)?;
        let step = max_norm_real(&(&k - DMatrix::<f64>::identity(k.nrows(), k.ncols())));
        t = polish(&(t * k), &q, &f);
        if step < 1e-14 {
            break;
        }
    }
    Ok(t)
}

fn lorentz_block(start: usize, realform: RealForm) -> bool {
    realform == RealForm::Noncompact && start == 0
}

/// `Re(V₀ᵗ·F·V₀)`, constant along the loop for a kernel gauge.
fn metric(v0: &CMat, form: &CMat) -> DMatrix<f64> {
    let q = real_part(&(v0.transpose() * form * v0));
    (&q + q.transpose()) * 0.5
}

/// Real `T` with `Tᵗ·Q·T ≈ F` from the eigenvectors of `Q`, orientation kept per block.
fn metric_frame(v0: &CMat, q: &DMatrix<f64>, realform: RealForm) -> Result<DMatrix<f64>> {
    let dim = q.nrows();
    let mut t = DMatrix::<f64>::zeros(dim, dim);
    for (start, len) in [(0, UPPER), (UPPER, dim - UPPER)] {
        let eig = q.view((start, start), (len, len)).into_owned().symmetric_eigen();
        let mut order: Vec<usize> = (0..len).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        if !lorentz_block(start, realform) {
            order.reverse();
        }
        let mut tb = DMatrix::<f64>::zeros(len, len);
        for (slot, &k) in order.iter().enumerate() {
            let e = eig.eigenvalues[k].abs();
            if e == 0.0 {
                return Err(Error::IwasawaCell("gauge metric is degenerate".into()));
            }
            tb.set_column(slot, &(eig.eigenvectors.column(k) / e.sqrt()));
        }
        let vb = v0.view((start, start), (len, len)).into_owned();
        if (vb * complexify(&tb)).determinant().re < 0.0 {
            tb.column_mut(len - 1).neg_mut();
        }
        t.view_mut((start, start), (len, len)).copy_from(&tb);
    }
    Ok(t)
}

/// Nearby `T'` with `T'ᵗ·Q·T' = F` to working precision.
fn polish(t: &DMatrix<f64>, q: &DMatrix<f64>, form: &DMatrix<f64>) -> DMatrix<f64> {
    let n = t.nrows();
    let x = form * t.transpose() * q * t - DMatrix::<f64>::identity(n, n);
    // (I + X)^{−1/2} by its binomial series.
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = term.clone();
    let mut coef = 1.0;
    for k in 1..8 {
        coef *= -(2.0 * k as f64 - 1.0) / (2.0 * k as f64);
        term = &term * &x;
        sum += &term * coef;
    }
    t * sum
}

/// The real `k` in `B₀ = k·B₀'` with `B₀'` normalized, block by block.
fn real_factor(b0: &CMat, realform: RealForm) -> Result<DMatrix<f64>> {
    let dim = b0.nrows();
    let mut k = DMatrix::<f64>::zeros(dim, dim);
    for (start, len) in [(0, UPPER), (UPPER, dim - UPPER)] {
        let bb = b0.view((start, start), (len, len)).into_owned();
        let kb = if lorentz_block(start, realform) {
            lorentz_real_factor(&bb)?
        } else {
            let p = hermitian_sqrt(&(bb.adjoint() * &bb));
            &bb * p
                .try_inverse()
                .ok_or_else(|| Error::IwasawaCell("gauge is singular at λ = 0".into()))?
        };
        k.view_mut((start, start), (len, len)).copy_from(&real_part(&kb));
    }
    Ok(k)
}

/// Principal square root of a Hermitian positive semidefinite matrix.
fn hermitian_sqrt(h: &CMat) -> CMat {
    let n = h.nrows();
    let embedded = real_embedding(h);
    let sym = (&embedded + embedded.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let roots = eig.eigenvalues.map(|e| e.max(0.0).sqrt());
    let root = &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.transpose();
    CMat::from_fn(n, n, |r, c| C64::new(root[(r, c)], root[(n + r, c)]))
}

/// Coordinates of `ℂ^{1,3}` in the row-major entries of the 2×2 matrix `x₀ + x·σ`.
fn spinor_basis() -> CMat {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    CMat::from_row_slice(4, 4, &[l, o, o, l, o, l, -i, o, o, l, i, o, l, o, o, -l])
}

fn kron2(p: &CMat, q: &CMat) -> CMat {
    CMat::from_fn(4, 4, |r, c| p[(r / 2, c / 2)] * q[(r % 2, c % 2)])
}

/// `(P, Q)` with `det P = 1` and `b` acting as `x ↦ P x Qᵗ`, up to a common sign.
fn spinor_pair(b: &CMat) -> Result<(CMat, CMat)> {
    let psi = spinor_basis();
    let psi_inv = psi
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::IwasawaCell("spinor basis is singular".into()))?;
    let k = &psi * b * &psi_inv;
    // Rearrange P ⊗ Q into the rank-one matrix vec(P)·vec(Q)ᵗ.
    let r = CMat::from_fn(4, 4, |row, col| {
        let (a, c) = (row / 2, row % 2);
        let (bb, d) = (col / 2, col % 2);
        k[(2 * a + bb, 2 * c + d)]
    });
    let (mut pi, mut pj) = (0, 0);
    for row in 0..4 {
        for col in 0..4 {
            if r[(row, col)].norm() > r[(pi, pj)].norm() {
                pi = row;
                pj = col;
            }
        }
    }
    let pivot = r[(pi, pj)];
    let mut p = CMat::from_fn(2, 2, |a, c| r[(2 * a + c, pj)]);
    let mut q = CMat::from_fn(2, 2, |bb, d| r[(pi, 2 * bb + d)] / pivot);
    let root = p.determinant().sqrt();
    if root.norm() == 0.0 {
        return Err(Error::IwasawaCell("Lorentz factor is singular".into()));
    }
    p /= root;
    q *= root;
    let defect = max_norm(&(kron2(&p, &q) - &k)) / max_norm(&k).max(1.0);
    if defect > 1e-8 {
        return Err(Error::IwasawaCell(format!(
            "Lorentz factor is not in SO(4, ℂ) (spinor defect {defect:.3e})"
        )));
    }
    Ok((p, q))
}

/// For `b = (P, Q) = (Q̄, Q)·(S, I)`: the real Lorentz transformation `±(Q̄, Q)`, signed so that
/// `Re tr S ≥ 0`.
fn lorentz_real_factor(b: &CMat) -> Result<CMat> {
    let (p, q) = spinor_pair(b)?;
    let q_bar = q.map(|c| c.conj());
    let spin = q_bar
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::IwasawaCell("Lorentz factor is singular".into()))?
        * p;
    let psi = spinor_basis();
    let psi_inv = psi
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::IwasawaCell("spinor basis is singular".into()))?;
    let k = psi_inv * kron2(&q_bar, &q) * psi;
    Ok(if spin.trace().re < 0.0 { -k } else { k })
}
