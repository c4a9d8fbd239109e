//! Finite-difference geometry on sampled surfaces.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::algebra::mink_product;
use crate::dpw::{ExtendedFrameGrid, SurfaceGrid, ZLattice};
use crate::{Error, Result, C64};

const BRANCH: f64 = 1e-8;

/// Lattice offsets for central differences of step `h`.
#[derive(Debug, Clone, Copy)]
struct Stencil {
    lattice: ZLattice,
    su: usize,
    sv: usize,
    h: f64,
}

impl Stencil {
    fn new(s: &SurfaceGrid, h: f64, levels: usize) -> Result<Self> {
        let lattice = s
            .lattice
            .ok_or_else(|| Error::Stencil("surface grid carries no lattice".into()))?;
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Stencil(format!("step must be positive, got {h}")));
        }
        let steps = |spacing: f64| -> Result<usize> {
            let k = (h / spacing).round();
            if k < 1.0 || (k * spacing - h).abs() > 1e-9 * h {
                return Err(Error::Stencil(format!(
                    "step {h} is not a multiple of the lattice spacing {spacing}"
                )));
            }
            Ok(k as usize)
        };
        let (su, sv) = (steps(lattice.hu())?, steps(lattice.hv())?);
        if lattice.nu < 2 * levels * su + 1 || lattice.nv < 2 * levels * sv + 1 {
            return Err(Error::Stencil(format!(
                "{}x{} lattice too small for step {h}",
                lattice.nu, lattice.nv
            )));
        }
        Ok(Self { lattice, su, sv, h })
    }

    fn interior(&self, level: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (mu, mv) = (level * self.su, level * self.sv);
        (mv..self.lattice.nv - mv).flat_map(move |iv| (mu..self.lattice.nu - mu).map(move |iu| (iu, iv)))
    }

    fn at(&self, iu: usize, iv: usize, du: i64, dv: i64) -> usize {
        let u = (iu as i64 + du * self.su as i64) as usize;
        let v = (iv as i64 + dv * self.sv as i64) as usize;
        self.lattice.index(u, v)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn diff(a: &[f64], b: &[f64], scale: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| (x - y) * scale).collect()
}

/// Result of [`sphere_and_conformality_defect`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformalityDefect {
    /// `max | |y|² − 1 |` over all samples.
    pub sphere: f64,
    /// Max normalized conformality defect over interior points; `None` if every point is degenerate.
    pub conformal: Option<f64>,
    pub evaluated: usize,
    /// Interior points with `|y_u| < 1e-8`.
    pub degenerate: usize,
}

/// First derivatives `(y_u, y_v)` at a lattice point.
fn first_derivatives(s: &SurfaceGrid, st: &Stencil, il: usize, iu: usize, iv: usize) -> Option<(Vec<f64>, Vec<f64>)> {
    let get = |du, dv| s.point(st.at(iu, iv, du, dv), il);
    let inv = 0.5 / st.h;
    let yu = diff(get(1, 0)?, get(-1, 0)?, inv);
    let yv = diff(get(0, 1)?, get(0, -1)?, inv);
    Some((yu, yv))
}

pub fn sphere_and_conformality_defect(s: &SurfaceGrid, h: f64) -> Result<ConformalityDefect> {
    let st = Stencil::new(s, h, 1)?;
    let mut out = ConformalityDefect {
        sphere: s.max_sphere_defect(),
        conformal: None,
        evaluated: 0,
        degenerate: 0,
    };
    for il in 0..s.lambda_samples.len() {
        for (iu, iv) in st.interior(1) {
            let Some((yu, yv)) = first_derivatives(s, &st, il, iu, iv) else {
                continue;
            };
            let (uu, vv, uv) = (dot(&yu, &yu), dot(&yv, &yv), dot(&yu, &yv));
            if uu.sqrt() < BRANCH {
                out.degenerate += 1;
                continue;
            }
            let d = (uv.abs() + (uu - vv).abs()) / uu;
            out.evaluated += 1;
            out.conformal = Some(out.conformal.map_or(d, |c: f64| c.max(d)));
        }
    }
    Ok(out)
}

/// Canonical lift data at one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftPoint {
    /// `Y = e^{−ω}(1, y)` with `|dY|² = |dz|²`.
    pub y: Vec<f64>,
    pub y_z: Vec<C64>,
    pub y_zz: Vec<C64>,
    /// Dual lift with `⟨N, Y⟩ = −1`, `⟨N, N⟩ = 0`.
    pub n: Vec<f64>,
    /// `⟨κ, κ̄⟩`.
    pub kappa_sq: f64,
    pub schwarzian: C64,
    /// `e^{2ω} = |y_u|²`.
    pub conformal_factor: f64,
}

/// Canonical lift over a surface grid, indexed like the grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LiftData {
    pub h: f64,
    pub points: Vec<Option<LiftPoint>>,
    /// Grid indices flagged as branch points (`|y_u| < 1e-8`).
    pub branch_points: Vec<usize>,
}

impl LiftData {
    pub fn point(&self, idx: usize) -> Option<&LiftPoint> {
        self.points.get(idx).and_then(Option::as_ref)
    }

    pub fn len(&self) -> usize {
        self.points.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `max |⟨N,Y⟩ + 1|`, `max |⟨N,N⟩|`, `max |⟨Y,Y⟩|`.
    pub fn normalization_defects(&self) -> (f64, f64, f64) {
        let mut d = (0.0f64, 0.0f64, 0.0f64);
        for p in self.points.iter().flatten() {
            d.0 = d.0.max((real_mink(&p.n, &p.y) + 1.0).abs());
            d.1 = d.1.max(real_mink(&p.n, &p.n).abs());
            d.2 = d.2.max(real_mink(&p.y, &p.y).abs());
        }
        d
    }
}

fn real_mink(a: &[f64], b: &[f64]) -> f64 {
    crate::algebra::mink_real(a, b)
}

fn cvec(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

pub fn canonical_lift(s: &SurfaceGrid, h: f64) -> Result<LiftData> {
    let st = Stencil::new(s, h, 2)?;
    let conf = sphere_and_conformality_defect(s, h)?;
    if let Some(c) = conf.conformal {
        if c > 1e-2 {
            return Err(Error::Precondition(format!(
                "surface is not conformal enough for a lift (defect {c:.3e})"
            )));
        }
    }
    let nz = s.z_samples.len();
    let nl = s.lambda_samples.len();
    let mut branch = Vec::new();
    let mut lifts: Vec<Option<Vec<f64>>> = vec![None; nz * nl];
    for il in 0..nl {
        for (iu, iv) in st.interior(1) {
            let iz = st.lattice.index(iu, iv);
            let (Some(y), Some((yu, _))) = (s.point(iz, il), first_derivatives(s, &st, il, iu, iv)) else {
                continue;
            };
            let e2w = dot(&yu, &yu);
            if e2w.sqrt() < BRANCH {
                branch.push(s.index(iz, il));
                continue;
            }
            let scale = 1.0 / e2w.sqrt();
            let mut lift = Vec::with_capacity(y.len() + 1);
            lift.push(scale);
            lift.extend(y.iter().map(|v| v * scale));
            lifts[s.index(iz, il)] = Some(lift);
        }
    }
    let mut points = vec![None; nz * nl];
    let (h2, i) = (h * h, C64::new(0.0, 1.0));
    for il in 0..nl {
        for (iu, iv) in st.interior(2) {
            let iz = st.lattice.index(iu, iv);
            let get = |du, dv| lifts[s.index(st.at(iu, iv, du, dv), il)].as_deref();
            let (Some(c), Some(e), Some(w), Some(n), Some(so)) = (get(0, 0), get(1, 0), get(-1, 0), get(0, 1), get(0, -1))
            else {
                continue;
            };
            let (Some(ne), Some(nw), Some(se), Some(sw)) = (get(1, 1), get(-1, 1), get(1, -1), get(-1, -1)) else {
                continue;
            };
            let e2w = {
                let (yu, _) = first_derivatives(s, &st, il, iu, iv).expect("interior stencil");
                dot(&yu, &yu)
            };
            let dim = c.len();
            let mut y_z = Vec::with_capacity(dim);
            let mut y_zz = Vec::with_capacity(dim);
            let mut y_zzb = Vec::with_capacity(dim);
            for k in 0..dim {
                let yu = (e[k] - w[k]) / (2.0 * h);
                let yv = (n[k] - so[k]) / (2.0 * h);
                let yuu = (e[k] - 2.0 * c[k] + w[k]) / h2;
                let yvv = (n[k] - 2.0 * c[k] + so[k]) / h2;
                let yuv = (ne[k] - se[k] - nw[k] + sw[k]) / (4.0 * h2);
                y_z.push(0.5 * (yu - i * yv));
                y_zz.push(0.25 * (yuu - yvv - 2.0 * i * yuv));
                y_zzb.push(0.25 * (yuu + yvv));
            }
            let cc = 2.0 * real_mink(&y_zzb, &y_zzb);
            let nvec: Vec<f64> = (0..dim).map(|k| 2.0 * y_zzb[k] + cc * c[k]).collect();
            let sch = 2.0 * mink_product(&y_zz, &cvec(&nvec))?;
            let kappa: Vec<C64> = (0..dim).map(|k| y_zz[k] + 0.5 * sch * c[k]).collect();
            let kbar: Vec<C64> = kappa.iter().map(|v| v.conj()).collect();
            let kappa_sq = mink_product(&kappa, &kbar)?.re;
            points[s.index(iz, il)] = Some(LiftPoint {
                y: c.to_vec(),
                y_z,
                y_zz,
                n: nvec,
                kappa_sq,
                schwarzian: sch,
                conformal_factor: e2w,
            });
        }
    }
    Ok(LiftData { h, points, branch_points: branch })
}

/// Result of [`conformal_gauss_defect`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussDefect {
    /// Largest principal-angle sine; `None` if nothing was compared.
    pub max_sine: Option<f64>,
    pub compared: usize,
    /// Points skipped because a span is rank deficient.
    pub excluded: usize,
}

fn orthonormal_columns(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let svd = m.clone().svd(true, false);
    let (smax, smin) = svd
        .singular_values
        .iter()
        .fold((0.0f64, f64::INFINITY), |(a, b), &s| (a.max(s), b.min(s)));
    if !(smax > 0.0) || smin < 1e-8 * smax {
        return None;
    }
    Some(svd.u.expect("requested u"))
}

/// Largest principal-angle sine between two column spans in Euclidean `ℝᵈ`.
pub fn principal_angle_sine(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Option<f64> {
    let qa = orthonormal_columns(a)?;
    let qb = orthonormal_columns(b)?;
    let (small, big) = if qa.ncols() <= qb.ncols() { (qa, qb) } else { (qb, qa) };
    let residual = &small - &big * (big.transpose() * &small);
    Some(residual.singular_values().max().min(1.0))
}

/// Compare `span{Y, Re Y_z, Im Y_z, N}` with the first four frame columns at the same `(z, λ)`.
pub fn conformal_gauss_defect(s: &SurfaceGrid, l: &LiftData, e: &ExtendedFrameGrid) -> Result<GaussDefect> {
    if s.z_samples.len() != e.z_samples.len()
        || s.lambda_samples.len() != e.lambda_samples.len()
        || l.points.len() != s.points.len()
    {
        return Err(Error::Precondition("surface, lift and frame grids are not aligned".into()));
    }
    let mut out = GaussDefect {
        max_sine: None,
        compared: 0,
        excluded: 0,
    };
    let nl = s.lambda_samples.len();
    for iz in 0..s.z_samples.len() {
        for il in 0..nl {
            let (Some(p), Some(f)) = (l.point(s.index(iz, il)), e.frame(iz, il)) else {
                continue;
            };
            let dim = p.y.len();
            if f.nrows() != dim {
                return Err(Error::dim(f.nrows(), dim));
            }
            let cols = [
                DVector::from_column_slice(&p.y),
                DVector::from_iterator(dim, p.y_z.iter().map(|v| v.re)),
                DVector::from_iterator(dim, p.y_z.iter().map(|v| v.im)),
                DVector::from_column_slice(&p.n),
            ];
            let a = DMatrix::from_columns(&cols);
            let b = f.columns(0, 4).into_owned();
            match principal_angle_sine(&a, &b) {
                Some(d) => {
                    out.compared += 1;
                    out.max_sine = Some(out.max_sine.map_or(d, |m: f64| m.max(d)));
                }
                None => out.excluded += 1,
            }
        }
    }
    out.excluded += l.branch_points.len();
    Ok(out)
}

/// Pairs `z ↔ −1/z̄` on a symmetric sample set.
pub fn antipodal_pairs(z_samples: &[C64]) -> Result<Vec<usize>> {
    z_samples
        .iter()
        .map(|&z| {
            if z.norm() == 0.0 {
                return Err(Error::Pairing("z = 0 has no partner".into()));
            }
            let mu = -z.conj().inv();
            z_samples
                .iter()
                .position(|&w| (w - mu).norm() <= 1e-12 * (1.0 + mu.norm()))
                .ok_or_else(|| Error::Pairing(format!("no sample at -1/conj({z})")))
        })
        .collect()
}

/// Symmetric sample set `r e^{ikπ/6}`, `r ∈ {1/2, 4/5, 1, 5/4, 2}`.
pub fn symmetric_rp2_samples() -> Vec<C64> {
    let radii = [0.5, 0.8, 1.0, 1.25, 2.0];
    radii
        .iter()
        .flat_map(|&r| (0..12).map(move |k| C64::from_polar(r, std::f64::consts::PI * k as f64 / 6.0)))
        .collect()
}

/// `max |y(−1/z̄, λ) − y(z, λ)|` over paired samples.
pub fn rp2_pointwise_symmetry(s: &SurfaceGrid) -> Result<f64> {
    let pairs = antipodal_pairs(&s.z_samples)?;
    let mut worst = 0.0f64;
    for (iz, &jz) in pairs.iter().enumerate() {
        for il in 0..s.lambda_samples.len() {
            if let (Some(a), Some(b)) = (s.point(iz, il), s.point(jz, il)) {
                let d = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
                worst = worst.max(d);
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Execution;
    use crate::verify::oracles::{inverse_stereographic, minimal_r4, rp2_surface, s6_sphere, OracleId};

    fn lattice(c: C64, r: f64, n: usize) -> ZLattice {
        ZLattice::new(c, r, n, n).unwrap()
    }

    fn one() -> Vec<C64> {
        vec![C64::new(1.0, 0.0)]
    }

    #[test]
    fn oracle_conformality() {
        let lat = lattice(C64::new(0.0, 0.0), 0.5, 21);
        let s = SurfaceGrid::on_lattice(&lat, one(), Execution::Sequential, |z, l| Ok(s6_sphere(z, l)));
        let d = sphere_and_conformality_defect(&s, lat.hu()).unwrap();
        assert!(d.sphere <= 1e-12);
        assert!(d.conformal.unwrap() < 5e-3);
        let r = SurfaceGrid::on_lattice(&lat, one(), Execution::Sequential, |z, l| rp2_surface(2, z, l));
        let d2 = sphere_and_conformality_defect(&r, lat.hu()).unwrap();
        assert!(d2.sphere <= 1e-12);
        let fine = lat.refined();
        let rf = SurfaceGrid::on_lattice(&fine, one(), Execution::Sequential, |z, l| rp2_surface(2, z, l));
        let ratio = d2.conformal.unwrap() / sphere_and_conformality_defect(&rf, lat.hu()).unwrap().conformal.unwrap();
        // same h, so same defect at shared points
        assert!(ratio > 0.99);
    }

    #[test]
    fn constant_surface_is_degenerate() {
        let lat = lattice(C64::new(0.0, 0.0), 1.0, 5);
        let s = SurfaceGrid::on_lattice(&lat, one(), Execution::Sequential, |_, _| Ok(vec![1.0, 0.0, 0.0]));
        let d = sphere_and_conformality_defect(&s, lat.hu()).unwrap();
        assert_eq!(d.sphere, 0.0);
        assert_eq!(d.conformal, None);
        assert_eq!(d.degenerate, 9);
        let l = canonical_lift(&s, lat.hu()).unwrap();
        assert!(l.is_empty());
        assert_eq!(l.branch_points.len(), 9);
    }

    #[test]
    fn stencil_errors() {
        let lat = lattice(C64::new(0.0, 0.0), 1.0, 5);
        let s = SurfaceGrid::on_lattice(&lat, one(), Execution::Sequential, |z, l| Ok(s6_sphere(z, l)));
        assert!(matches!(sphere_and_conformality_defect(&s, 0.3), Err(Error::Stencil(_))));
        assert!(matches!(sphere_and_conformality_defect(&s, 1.5), Err(Error::Stencil(_))));
        assert!(matches!(canonical_lift(&s, 1.0), Err(Error::Stencil(_))));
        let bare = SurfaceGrid::from_fn(vec![C64::new(0.0, 0.0)], one(), Execution::Sequential, |z, l| Ok(s6_sphere(z, l)));
        assert!(matches!(sphere_and_conformality_defect(&bare, 0.1), Err(Error::Stencil(_))));
    }

    #[test]
    fn umbilic_sphere_has_no_hopf_differential() {
        let lat = lattice(C64::new(0.3, -0.2), 0.004, 5);
        let s = SurfaceGrid::on_lattice(&lat, one(), Execution::Sequential, |z, _| {
            let mut y = inverse_stereographic(&[z.re, z.im]);
            y.extend([0.0, 0.0]);
            Ok(y)
        });
        let l = canonical_lift(&s, lat.hu()).unwrap();
        let p = l.point(lat.index(2, 2)).unwrap();
        assert!(p.kappa_sq.abs() <= 1e-6, "{}", p.kappa_sq);
    }

    #[test]
    fn s6_lift_normalization() {
        let lat = lattice(C64::new(1.0, 0.0), 0.004, 5);
        let s = SurfaceGrid::on_lattice(&lat, one(), Execution::Sequential, |z, l| Ok(s6_sphere(z, l)));
        let l = canonical_lift(&s, lat.hu()).unwrap();
        let p = l.point(lat.index(2, 2)).unwrap();
        assert!(real_mink(&p.y, &p.y).abs() <= 1e-8);
        assert!((real_mink(&p.n, &p.y) + 1.0).abs() <= 1e-4);
        assert!(real_mink(&p.n, &p.n).abs() <= 1e-4);
        assert!(p.kappa_sq >= -1e-8);
    }

    #[test]
    fn minimal_surface_is_not_umbilic() {
        let (f2, f4) = OracleId::default_pair();
        let lat = lattice(C64::new(0.6, 0.3), 0.004, 5);
        let s = SurfaceGrid::on_lattice(&lat, one(), Execution::Sequential, |z, l| {
            Ok(inverse_stereographic(&minimal_r4(&f2, &f4, z, l)?))
        });
        let l = canonical_lift(&s, lat.hu()).unwrap();
        assert!(l.point(lat.index(2, 2)).unwrap().kappa_sq > 1e-4);
    }

    #[test]
    fn rp2_symmetry() {
        let z = symmetric_rp2_samples();
        let s = SurfaceGrid::from_fn(z.clone(), one(), Execution::Sequential, |z, l| rp2_surface(2, z, l));
        assert!(rp2_pointwise_symmetry(&s).unwrap() <= 1e-12);
        let t = SurfaceGrid::from_fn(z.clone(), one(), Execution::Sequential, |z, l| Ok(s6_sphere(z, l)));
        assert!(rp2_pointwise_symmetry(&t).unwrap() > 0.1);
        let c = SurfaceGrid::from_fn(z, one(), Execution::Sequential, |_, _| Ok(vec![0.0, 1.0]));
        assert_eq!(rp2_pointwise_symmetry(&c).unwrap(), 0.0);
        let bad = SurfaceGrid::from_fn(vec![C64::new(0.5, 0.0)], one(), Execution::Sequential, |z, l| rp2_surface(2, z, l));
        assert!(matches!(rp2_pointwise_symmetry(&bad), Err(Error::Pairing(_))));
    }

    #[test]
    fn principal_angles() {
        let a = DMatrix::from_column_slice(3, 1, &[1.0, 0.0, 0.0]);
        let b = DMatrix::from_column_slice(3, 1, &[1.0, 1.0, 0.0]);
        assert!((principal_angle_sine(&a, &b).unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
        assert!(principal_angle_sine(&a, &a).unwrap() < 1e-15);
        assert!(principal_angle_sine(&DMatrix::zeros(3, 1), &a).is_none());
    }
}
