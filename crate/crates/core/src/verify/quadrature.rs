//! Area and Willmore-energy quadrature.

use serde::{Deserialize, Serialize};

use crate::dpw::{SurfaceGrid, ZLattice};
use crate::exec::Execution;
use crate::verify::geometry::{canonical_lift, LiftData};
use crate::{Error, Result, C64};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Quadrature results with Richardson error estimates from halving.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Integrals {
    /// `4 ∫ ⟨κ, κ̄⟩ du dv`.
    pub energy: f64,
    /// `∫ e^{2ω} du dv`.
    pub area: f64,
    pub energy_error: Option<f64>,
    pub area_error: Option<f64>,
    /// Nodes skipped as branch points or failed samples.
    pub excluded: usize,
}

/// Weighted node of a product trapezoid rule; `coarse` is the weight in the halved rule.
struct Node {
    weight: f64,
    coarse: f64,
}

fn trapezoid(n: usize, j: usize) -> f64 {
    if j == 0 || j == n {
        0.5
    } else {
        1.0
    }
}

/// Composite trapezoid over the rectangle of lattice points carrying lift data at `λ` index `il`.
///
/// The error estimate uses the every-other-point subrule and is `None` when the
/// rectangle has an odd number of intervals.
pub fn willmore_energy_and_area(s: &SurfaceGrid, l: &LiftData, il: usize) -> Result<Integrals> {
    let lat = s
        .lattice
        .ok_or_else(|| Error::Stencil("surface grid carries no lattice".into()))?;
    if l.points.len() != s.points.len() || il >= s.lambda_samples.len() {
        return Err(Error::Precondition("lift data does not match the surface grid".into()));
    }
    let su = (l.h / lat.hu()).round() as usize;
    let sv = (l.h / lat.hv()).round() as usize;
    if lat.nu < 4 * su + 1 || lat.nv < 4 * sv + 1 {
        return Err(Error::Stencil("lattice too small for the lift stencil".into()));
    }
    let (u0, u1, v0, v1) = (2 * su, lat.nu - 1 - 2 * su, 2 * sv, lat.nv - 1 - 2 * sv);
    let (mu, mv) = (u1 - u0, v1 - v0);
    let halvable = mu % 2 == 0 && mv % 2 == 0 && mu > 0 && mv > 0;
    let mut nodes = Vec::new();
    for iv in v0..=v1 {
        for iu in u0..=u1 {
            let (ju, jv) = (iu - u0, iv - v0);
            let w = trapezoid(mu, ju) * trapezoid(mv, jv) * lat.hu() * lat.hv();
            let coarse = if halvable && ju % 2 == 0 && jv % 2 == 0 {
                trapezoid(mu / 2, ju / 2) * trapezoid(mv / 2, jv / 2) * 4.0 * lat.hu() * lat.hv()
            } else {
                0.0
            };
            nodes.push((s.index(lat.index(iu, iv), il), Node { weight: w, coarse }));
        }
    }
    let values: Vec<Option<(f64, f64)>> = nodes
        .iter()
        .map(|(idx, _)| l.point(*idx).map(|p| (4.0 * p.kappa_sq, p.conformal_factor)))
        .collect();
    Ok(accumulate(&nodes.into_iter().map(|(_, n)| n).collect::<Vec<_>>(), &values, halvable))
}

fn accumulate(nodes: &[Node], values: &[Option<(f64, f64)>], halvable: bool) -> Integrals {
    // energy, area, then their coarse-rule counterparts
    let mut sums = [CompensatedSum::default(); 4];
    let mut excluded = 0;
    for (node, v) in nodes.iter().zip(values) {
        let Some((energy, area)) = *v else {
            excluded += 1;
            continue;
        };
        sums[0].add(node.weight * energy);
        sums[1].add(node.weight * area);
        sums[2].add(node.coarse * energy);
        sums[3].add(node.coarse * area);
    }
    let est = |fine: usize| halvable.then(|| (sums[fine].value() - sums[fine + 2].value()).abs() / 3.0);
    Integrals {
        energy: sums[0].value(),
        area: sums[1].value(),
        energy_error: est(0),
        area_error: est(1),
        excluded,
    }
}

/// Polar trapezoid over the unit disk in each of the charts `z` and `1/z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereQuadrature {
    /// Radial intervals of the coarse rule on `[0, 1]`; the fine rule doubles it.
    pub radial: usize,
    /// Angular intervals of the coarse rule.
    pub angular: usize,
    /// Finite-difference step of the local lift.
    pub step: f64,
}

impl Default for SphereQuadrature {
    fn default() -> Self {
        Self {
            radial: 48,
            angular: 96,
            step: 1e-3,
        }
    }
}

fn local_integrand<F>(f: &F, zeta: C64, step: f64) -> Result<Option<(f64, f64)>>
where
    F: Fn(C64) -> Result<Vec<f64>> + Sync,
{
    let lat = ZLattice::new(zeta, 2.0 * step, 5, 5)?;
    let s = SurfaceGrid::on_lattice(&lat, vec![C64::new(1.0, 0.0)], Execution::Sequential, |z, _| f(z));
    if let Some(fail) = s.failures.iter().flatten().next() {
        return Err(Error::Precondition(format!("sampling failed near {zeta}: {fail}")));
    }
    let l = canonical_lift(&s, step)?;
    Ok(l.point(lat.index(2, 2)).map(|p| (4.0 * p.kappa_sq, p.conformal_factor)))
}

/// Sphere-wide area and energy of `z ↦ f(z)`, summing the charts `|z| ≤ 1` and `|1/z| ≤ 1`.
pub fn sphere_energy_and_area<F>(f: F, q: &SphereQuadrature, execution: Execution) -> Result<Integrals>
where
    F: Fn(C64) -> Result<Vec<f64>> + Sync + Send,
{
    if q.radial == 0 || q.angular == 0 || !(q.step > 0.0) {
        return Err(Error::Domain("quadrature needs positive node counts and step".into()));
    }
    let (nr, nt) = (2 * q.radial, 2 * q.angular);
    let (hr, ht) = (1.0 / nr as f64, std::f64::consts::TAU / nt as f64);
    let mut nodes = Vec::new();
    let mut points = Vec::new();
    for chart in 0..2 {
        for j in 1..=nr {
            let r = j as f64 * hr;
            for k in 0..nt {
                let w = trapezoid(nr, j) * r * hr * ht;
                let coarse = if j % 2 == 0 && k % 2 == 0 {
                    trapezoid(q.radial, j / 2) * r * 4.0 * hr * ht
                } else {
                    0.0
                };
                nodes.push(Node { weight: w, coarse });
                points.push((chart, C64::from_polar(r, k as f64 * ht)));
            }
        }
    }
    let flip = |w: C64| -> Result<Vec<f64>> { f(w.inv()) };
    let values = execution.map(points.len(), |i| {
        let (chart, zeta) = points[i];
        if chart == 0 {
            local_integrand(&f, zeta, q.step)
        } else {
            local_integrand(&flip, zeta, q.step)
        }
    });
    let values: Vec<Option<(f64, f64)>> = values.into_iter().collect::<Result<_>>()?;
    Ok(accumulate(&nodes, &values, true))
}
