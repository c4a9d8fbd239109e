use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{group_defect, max_norm, mink_real, signature, to_orthogonal_basis, MinkowskiForm, UPPER};
use crate::dpw::integrate::{integrate_potential, DEFAULT_CAP};
use crate::dpw::iwasawa::{iwasawa_split, IwasawaSplit};
use crate::exec::Execution;
use crate::loops::LaurentLoop;
use crate::potentials::PotentialSpec;
use crate::{CMat, Error, RealForm, Result, C64};

/// Uniform `nu × nv` grid on the square of half-width `radius` around `center`.
///
/// Samples are ordered with `u` varying fastest: index `iv·nu + iu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZLattice {
    pub center: C64,
    pub radius: f64,
    pub nu: usize,
    pub nv: usize,
}

impl ZLattice {
    pub fn new(center: C64, radius: f64, nu: usize, nv: usize) -> Result<Self> {
        if nu < 3 || nv < 3 {
            return Err(Error::Domain(format!("lattice needs at least 3x3 points, got {nu}x{nv}")));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Domain(format!("lattice radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius, nu, nv })
    }

    pub fn hu(&self) -> f64 {
        2.0 * self.radius / (self.nu - 1) as f64
    }

    pub fn hv(&self) -> f64 {
        2.0 * self.radius / (self.nv - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, iu: usize, iv: usize) -> usize {
        iv * self.nu + iu
    }

    pub fn point(&self, iu: usize, iv: usize) -> C64 {
        self.center
            + C64::new(
                -self.radius + self.hu() * iu as f64,
                -self.radius + self.hv() * iv as f64,
            )
    }

    pub fn samples(&self) -> Vec<C64> {
        (0..self.nv)
            .flat_map(|iv| (0..self.nu).map(move |iu| (iu, iv)))
            .map(|(iu, iv)| self.point(iu, iv))
            .collect()
    }

    /// The lattice with doubled resolution on the same square.
    pub fn refined(&self) -> Self {
        Self {
            nu: 2 * self.nu - 1,
            nv: 2 * self.nv - 1,
            ..*self
        }
    }
}

/// Why a grid point has no value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "detail", rename_all = "kebab-case")]
pub enum PointFailure {
    IwasawaCell(String),
    Chart(String),
    Pole(String),
    Other(String),
}

impl PointFailure {
    fn from_error(e: &Error) -> Self {
        match e {
            Error::IwasawaCell(s) => PointFailure::IwasawaCell(s.clone()),
            Error::Chart(s) => PointFailure::Chart(s.clone()),
            Error::Pole(s) => PointFailure::Pole(s.clone()),
            other => PointFailure::Other(other.to_string()),
        }
    }
}

impl std::fmt::Display for PointFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PointFailure::IwasawaCell(s) => write!(f, "iwasawa-cell: {s}"),
            PointFailure::Chart(s) => write!(f, "chart: {s}"),
            PointFailure::Pole(s) => write!(f, "pole: {s}"),
            PointFailure::Other(s) => write!(f, "error: {s}"),
        }
    }
}

/// Real frames `F(z, λ)` on a `(z, λ)` grid, indexed `iz·nλ + iλ`.
#[derive(Debug, Clone)]
pub struct ExtendedFrameGrid {
    pub z_samples: Vec<C64>,
    pub lambda_samples: Vec<C64>,
    pub realform: RealForm,
    /// Minkowski basis for the non-compact form, orthogonal basis for the compact form.
    pub frames: Vec<Option<DMatrix<f64>>>,
    /// Per `z`: the positive Iwasawa factor, if retained.
    pub positive_factors: Vec<Option<LaurentLoop>>,
    pub failures: Vec<Option<PointFailure>>,
}

impl ExtendedFrameGrid {
    pub fn index(&self, iz: usize, il: usize) -> usize {
        iz * self.lambda_samples.len() + il
    }

    pub fn frame(&self, iz: usize, il: usize) -> Option<&DMatrix<f64>> {
        self.frames[self.index(iz, il)].as_ref()
    }

    pub fn failure_count(&self) -> usize {
        self.failures.iter().filter(|f| f.is_some()).count()
    }

    /// Largest membership defect over all stored frames.
    pub fn max_group_defect(&self) -> f64 {
        let dim = self.z_samples.first().and_then(|_| self.frames.iter().flatten().next()).map(|f| f.nrows());
        let Some(dim) = dim else { return 0.0 };
        let form = MinkowskiForm::new(dim).expect("frame dimension >= 5");
        self.frames
            .iter()
            .flatten()
            .map(|f| {
                let m = crate::algebra::complexify(f);
                match self.realform {
                    RealForm::Noncompact => group_defect(&m, &form).unwrap_or(f64::INFINITY),
                    RealForm::Compact => crate::algebra::orthogonal_defect(&m),
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Surface points `y(z, λ) ∈ Sⁿ⁺²` and light-cone lifts `(1, y)`, indexed like the frames.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurfaceGrid {
    pub z_samples: Vec<C64>,
    pub lambda_samples: Vec<C64>,
    pub lattice: Option<ZLattice>,
    pub points: Vec<Option<Vec<f64>>>,
    pub lifts: Vec<Option<Vec<f64>>>,
    pub failures: Vec<Option<PointFailure>>,
}

impl SurfaceGrid {
    /// Sample `f(z, λ)` (a point of the unit sphere) on the given samples.
    pub fn from_fn<F>(z_samples: Vec<C64>, lambda_samples: Vec<C64>, execution: Execution, f: F) -> Self
    where
        F: Fn(C64, C64) -> Result<Vec<f64>> + Sync + Send,
    {
        let nl = lambda_samples.len();
        let vals = execution.map(z_samples.len() * nl, |idx| {
            f(z_samples[idx / nl], lambda_samples[idx % nl])
        });
        let mut grid = Self {
            z_samples,
            lambda_samples,
            lattice: None,
            points: Vec::with_capacity(vals.len()),
            lifts: Vec::with_capacity(vals.len()),
            failures: Vec::with_capacity(vals.len()),
        };
        for v in vals {
            match v {
                Ok(y) => {
                    let mut lift = Vec::with_capacity(y.len() + 1);
                    lift.push(1.0);
                    lift.extend_from_slice(&y);
                    grid.points.push(Some(y));
                    grid.lifts.push(Some(lift));
                    grid.failures.push(None);
                }
                Err(e) => {
                    grid.points.push(None);
                    grid.lifts.push(None);
                    grid.failures.push(Some(PointFailure::from_error(&e)));
                }
            }
        }
        grid
    }

    /// Sample `f` on a lattice, recording the lattice for finite differences.
    pub fn on_lattice<F>(lattice: &ZLattice, lambda_samples: Vec<C64>, execution: Execution, f: F) -> Self
    where
        F: Fn(C64, C64) -> Result<Vec<f64>> + Sync + Send,
    {
        let mut g = Self::from_fn(lattice.samples(), lambda_samples, execution, f);
        g.lattice = Some(*lattice);
        g
    }

    /// Attach a lattice whose samples must coincide with `z_samples`.
    pub fn with_lattice(mut self, lattice: ZLattice) -> Result<Self> {
        let s = lattice.samples();
        if s.len() != self.z_samples.len()
            || s.iter().zip(&self.z_samples).any(|(a, b)| (a - b).norm() > 1e-12)
        {
            return Err(Error::Precondition("lattice does not match the z samples".into()));
        }
        self.lattice = Some(lattice);
        Ok(self)
    }

    pub fn index(&self, iz: usize, il: usize) -> usize {
        iz * self.lambda_samples.len() + il
    }

    pub fn point(&self, iz: usize, il: usize) -> Option<&[f64]> {
        self.points[self.index(iz, il)].as_deref()
    }

    pub fn failure_count(&self) -> usize {
        self.failures.iter().filter(|f| f.is_some()).count()
    }

    /// `max | |y|² − 1 |`.
    pub fn max_sphere_defect(&self) -> f64 {
        self.points
            .iter()
            .flatten()
            .map(|y| (y.iter().map(|v| v * v).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `max |⟨Y, Y⟩|` over the lifts.
    pub fn max_lift_defect(&self) -> f64 {
        self.lifts
            .iter()
            .flatten()
            .map(|l| mink_real(l, l).abs())
            .fold(0.0, f64::max)
    }
}

/// Settings for [`build_surface`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildOptions {
    pub realform: RealForm,
    /// Relative tolerance of the Iwasawa recomposition.
    pub tol: f64,
    pub cap: usize,
    pub execution: Execution,
    pub keep_positive: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            realform: RealForm::Noncompact,
            tol: 1e-10,
            cap: DEFAULT_CAP,
            execution: Execution::default(),
            keep_positive: false,
        }
    }
}

struct ZColumn {
    split: Option<LaurentLoop>,
    frames: Vec<Result<DMatrix<f64>>>,
    points: Vec<Result<Vec<f64>>>,
}

/// Integrate, split and project on every `(z, λ)`.
///
/// Per-point failures are recorded in the grids; only invalid input is an error. The
/// surface is produced for the non-compact form only.
pub fn build_surface(
    p: &PotentialSpec,
    z_samples: &[C64],
    lambda_samples: &[C64],
    opts: &BuildOptions,
) -> Result<(ExtendedFrameGrid, Option<SurfaceGrid>)> {
    for l in lambda_samples {
        if (l.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("λ = {l} is not on the unit circle")));
        }
    }
    let frame_fn = integrate_potential(p, opts.cap)?;
    let with_surface = opts.realform == RealForm::Noncompact;
    let columns: Vec<ZColumn> = opts.execution.map(z_samples.len(), |iz| {
        let z = z_samples[iz];
        let split = p
            .eval_b1(z)
            .and_then(|b| Ok((b, iwasawa_split(&frame_fn.eval(z), opts.realform, opts.tol)?)));
        match split {
            Err(e) => ZColumn {
                split: None,
                frames: lambda_samples.iter().map(|_| Err(clone_err(&e))).collect(),
                points: lambda_samples.iter().map(|_| Err(clone_err(&e))).collect(),
            },
            Ok((b1, s)) => column_values(&s, &b1, lambda_samples, opts, with_surface),
        }
    });

    let nl = lambda_samples.len();
    let total = z_samples.len() * nl;
    let mut frames = Vec::with_capacity(total);
    let mut frame_failures = Vec::with_capacity(total);
    let mut positive_factors = Vec::with_capacity(z_samples.len());
    let mut points = Vec::with_capacity(total);
    let mut lifts = Vec::with_capacity(total);
    let mut surface_failures = Vec::with_capacity(total);
    for col in columns {
        positive_factors.push(col.split);
        for f in col.frames {
            match f {
                Ok(m) => {
                    frames.push(Some(m));
                    frame_failures.push(None);
                }
                Err(e) => {
                    frames.push(None);
                    frame_failures.push(Some(PointFailure::from_error(&e)));
                }
            }
        }
        for y in col.points {
            match y {
                Ok(y) => {
                    let mut lift = vec![1.0];
                    lift.extend_from_slice(&y);
                    points.push(Some(y));
                    lifts.push(Some(lift));
                    surface_failures.push(None);
                }
                Err(e) => {
                    points.push(None);
                    lifts.push(None);
                    surface_failures.push(Some(PointFailure::from_error(&e)));
                }
            }
        }
    }
    let grid = ExtendedFrameGrid {
        z_samples: z_samples.to_vec(),
        lambda_samples: lambda_samples.to_vec(),
        realform: opts.realform,
        frames,
        positive_factors,
        failures: frame_failures,
    };
    let surface = with_surface.then(|| SurfaceGrid {
        z_samples: z_samples.to_vec(),
        lambda_samples: lambda_samples.to_vec(),
        lattice: None,
        points,
        lifts,
        failures: surface_failures,
    });
    Ok((grid, surface))
}

fn clone_err(e: &Error) -> Error {
    match e {
        Error::IwasawaCell(s) => Error::IwasawaCell(s.clone()),
        Error::Chart(s) => Error::Chart(s.clone()),
        Error::Pole(s) => Error::Pole(s.clone()),
        other => Error::Precondition(other.to_string()),
    }
}

fn column_values(
    s: &IwasawaSplit,
    b1: &CMat,
    lambdas: &[C64],
    opts: &BuildOptions,
    with_surface: bool,
) -> ZColumn {
    let gauge0 = s.gauge_at_zero();
    let mut frames = Vec::with_capacity(lambdas.len());
    let mut points = Vec::with_capacity(lambdas.len());
    for &lam in lambdas {
        let f = s.frame.eval(lam);
        let f = match f {
            Ok(m) => m,
            Err(e) => {
                points.push(Err(clone_err(&e)));
                frames.push(Err(e));
                continue;
            }
        };
        let stored = match opts.realform {
            RealForm::Noncompact => f.map(|c| c.re),
            RealForm::Compact => to_orthogonal_basis(&f).map(|c| c.re),
        };
        if with_surface {
            points.push(project_to_sphere(&stored, &gauge0, b1).map(|(y, _)| y));
        } else {
            points.push(Err(Error::Precondition("no surface for the compact form".into())));
        }
        frames.push(Ok(stored));
    }
    ZColumn {
        split: opts.keep_positive.then(|| s.positive.clone()),
        frames,
        points,
    }
}

/// Surface point of a real frame.
///
/// `gauge0` is the constant term of the gauge taking `F₋` to the frame and `b1` the
/// potential block `B̂₁(z)`. The lift is `F·(u, 0)` for the real future-pointing null
/// `u ∈ ℝ^{1,3}` orthogonal to the columns of `A₀⁻¹ B̂₁ C₀`. Returns `(y, Y/Y₀)`.
pub fn project_to_sphere(frame: &DMatrix<f64>, gauge0: &CMat, b1: &CMat) -> Result<(Vec<f64>, Vec<f64>)> {
    let dim = frame.nrows();
    let n = dim - UPPER;
    let a0 = gauge0.view((0, 0), (UPPER, UPPER)).into_owned();
    let c0 = gauge0.view((UPPER, UPPER), (n, n)).into_owned();
    let a0_inv = a0
        .try_inverse()
        .ok_or_else(|| Error::Chart("gauge block is singular".into()))?;
    let b = a0_inv * b1 * c0;
    let u = null_direction(&b)?;
    let mut lift = vec![0.0; dim];
    for (r, l) in lift.iter_mut().enumerate() {
        *l = (0..UPPER).map(|c| frame[(r, c)] * u[c]).sum();
    }
    let norm = lift.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(lift[0] > 1e-10 * norm.max(1.0)) {
        return Err(Error::Chart(format!("lift has 0-th coordinate {:.3e}", lift[0])));
    }
    let y0 = lift[0];
    let lift: Vec<f64> = lift.iter().map(|v| v / y0).collect();
    Ok((lift[1..].to_vec(), lift))
}

/// Real future-pointing null vector of `ℝ^{1,3}` orthogonal to the columns of `b`.
///
/// Real `u` with `bᵗ I_{1,3} u = 0` is the kernel of `[Re(bᵗI); Im(bᵗI)]`.
fn null_direction(b: &CMat) -> Result<[f64; 4]> {
    let top = max_norm(b);
    if top == 0.0 {
        return Ok([1.0, -1.0, 0.0, 0.0]);
    }
    let w = b.transpose() * signature(UPPER);
    let cols = w.nrows();
    let mut rows = DMatrix::<f64>::zeros(4.max(2 * cols), 4);
    for i in 0..cols {
        for k in 0..4 {
            rows[(2 * i, k)] = w[(i, k)].re / top;
            rows[(2 * i + 1, k)] = w[(i, k)].im / top;
        }
    }
    let rsvd = rows.svd(false, true);
    let vt = rsvd.v_t.ok_or_else(|| Error::Chart("SVD failed".into()))?;
    let rtop = rsvd.singular_values.iter().cloned().fold(0.0, f64::max);
    let null: Vec<[f64; 4]> = (0..rsvd.singular_values.len())
        .filter(|&i| rsvd.singular_values[i] <= 1e-9 * rtop)
        .map(|i| [vt[(i, 0)], vt[(i, 1)], vt[(i, 2)], vt[(i, 3)]])
        .collect();
    let future = |v: [f64; 4]| if v[0] < 0.0 { v.map(|x| -x) } else { v };
    match null.len() {
        1 => Ok(future(null[0])),
        2 => {
            let (e1, e2) = (null[0], null[1]);
            let g00 = mink_real(&e1, &e1);
            let g01 = mink_real(&e1, &e2);
            let g11 = mink_real(&e2, &e2);
            let comb = |t: f64| -> [f64; 4] { std::array::from_fn(|k| e1[k] + t * e2[k]) };
            let (p, q) = if g11.abs() < 1e-14 {
                (e2, comb(-g00 / (2.0 * g01)))
            } else {
                let disc = (g01 * g01 - g00 * g11).max(0.0).sqrt();
                (comb((-g01 + disc) / g11), comb((-g01 - disc) / g11))
            };
            let (p, q) = (future(p), future(q));
            // a column of b spanning its (rank-one) range
            let jmax = (0..b.ncols())
                .max_by(|&x, &y| b.column(x).norm().total_cmp(&b.column(y).norm()))
                .unwrap_or(0);
            let r = b.column(jmax);
            let m = nalgebra::Matrix4::from_columns(&[
                nalgebra::Vector4::from(p),
                nalgebra::Vector4::new(r[0].re, r[1].re, r[2].re, r[3].re),
                nalgebra::Vector4::new(r[0].im, r[1].im, r[2].im, r[3].im),
                nalgebra::Vector4::from(q),
            ]);
            Ok(if m.determinant() > 0.0 { p } else { q })
        }
        k => Err(Error::Chart(format!(
            "potential block has a {k}-dimensional real orthogonal complement"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::max_norm_real;
    use crate::potentials::{builtin_potential, Builtin};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn real_group_defect(f: &DMatrix<f64>) -> f64 {
        let dim = f.nrows();
        let mut j = DMatrix::<f64>::identity(dim, dim);
        j[(0, 0)] = -1.0;
        max_norm_real(&(f.transpose() * &j * f - j))
    }

    #[test]
    fn s6_spot_values() {
        let p = builtin_potential(&Builtin::S6).unwrap();
        let lams = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)];
        let (frames, surf) = build_surface(&p, &[c(0.0, 0.0), c(1.0, 0.0)], &lams, &BuildOptions::default()).unwrap();
        let surf = surf.unwrap();
        for il in 0..3 {
            let y0 = surf.point(0, il).unwrap();
            assert!((y0[0] - 1.0).abs() < 1e-14 && y0[1..].iter().all(|v| v.abs() < 1e-14));
        }
        let want = [-6.0, 0.0, 40.0, 0.0, 33.0, 0.0, 42.0].map(|v| v / 67.0);
        let y = surf.point(1, 0).unwrap();
        for k in 0..7 {
            assert!((y[k] - want[k]).abs() < 1e-12, "{k}: {} vs {}", y[k], want[k]);
        }
        assert!(frames.max_group_defect() < 1e-10);
        assert!(frames.frames.iter().flatten().all(|f| real_group_defect(f) < 1e-10));
    }

    #[test]
    fn zero_potential_is_constant() {
        let p = PotentialSpec::zero(2).unwrap();
        let zs = [c(0.0, 0.0), c(0.5, 0.5), c(-1.0, 2.0)];
        let (_, s) = build_surface(&p, &zs, &[c(1.0, 0.0)], &BuildOptions::default()).unwrap();
        let s = s.unwrap();
        let first = s.point(0, 0).unwrap().to_vec();
        for iz in 0..3 {
            assert_eq!(s.point(iz, 0).unwrap(), first.as_slice());
        }
    }

    #[test]
    fn compact_form_has_no_surface() {
        let p = builtin_potential(&Builtin::parse("duality").unwrap()).unwrap();
        let opts = BuildOptions { realform: RealForm::Compact, ..Default::default() };
        let (frames, surf) = build_surface(&p, &[c(1.0, 0.0)], &[c(1.0, 0.0)], &opts).unwrap();
        assert!(surf.is_none());
        assert!(frames.max_group_defect() < 1e-10);
    }

    #[test]
    fn off_circle_lambda_rejected() {
        let p = PotentialSpec::zero(2).unwrap();
        assert!(build_surface(&p, &[c(0.0, 0.0)], &[c(2.0, 0.0)], &BuildOptions::default()).is_err());
    }

    #[test]
    fn lattice_ordering() {
        let l = ZLattice::new(c(1.0, 1.0), 1.0, 3, 5).unwrap();
        let s = l.samples();
        assert_eq!(s.len(), 15);
        assert_eq!(s[0], c(0.0, 0.0));
        assert_eq!(s[1], c(1.0, 0.0));
        assert_eq!(s[3], c(0.0, 0.5));
        assert_eq!(l.refined().nu, 5);
        assert!(ZLattice::new(c(0.0, 0.0), 1.0, 2, 5).is_err());
    }
}
