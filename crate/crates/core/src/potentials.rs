//! Normalized potentials `η = λ⁻¹ η₋₁ dz` and the example families.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{p_element, UPPER};
use crate::io::complex;
use crate::rational::RationalFunction;
use crate::{CMat, Error, Result, C64};

/// Minimum number of sample points used by the sampled identity checks.
pub const MIN_SAMPLES: usize = 16;

/// Consecutive pole hits tolerated before giving up on a sample.
const MAX_POLE_RETRIES: usize = 16;

const SAMPLE_SEED: u64 = 0x57_11_6d_6f_72_65;

const I: C64 = C64::new(0.0, 1.0);

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A `4×n` matrix of rational functions together with a base point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPotential", into = "RawPotential")]
pub struct PotentialSpec {
    n: usize,
    b1: Vec<Vec<RationalFunction>>,
    base_point: C64,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct RawPotential {
    n: usize,
    #[serde(with = "complex")]
    base_point: C64,
    #[serde(default)]
    label: String,
    b1: Vec<Vec<RationalFunction>>,
}

impl TryFrom<RawPotential> for PotentialSpec {
    type Error = Error;
    fn try_from(r: RawPotential) -> Result<Self> {
        PotentialSpec::new(r.n, r.b1, r.base_point, r.label)
    }
}

impl From<PotentialSpec> for RawPotential {
    fn from(p: PotentialSpec) -> Self {
        RawPotential {
            n: p.n,
            base_point: p.base_point,
            label: p.label,
            b1: p.b1,
        }
    }
}

impl PotentialSpec {
    /// `b1` is given row-major: 4 rows of `n` entries.
    pub fn new(
        n: usize,
        b1: Vec<Vec<RationalFunction>>,
        base_point: C64,
        label: impl Into<String>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("codimension must be >= 2, got {n}")));
        }
        if b1.len() != UPPER || b1.iter().any(|r| r.len() != n) {
            return Err(Error::dim(
                format!("4x{n}"),
                format!("{}x{}", b1.len(), b1.first().map_or(0, |r| r.len())),
            ));
        }
        let spec = Self {
            n,
            b1,
            base_point,
            label: label.into(),
        };
        spec.eval_b1(base_point).map_err(|_| {
            Error::Pole(format!("base point {base_point} is a pole of the potential"))
        })?;
        Ok(spec)
    }

    /// The identically zero potential of codimension `n`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::new(
            n,
            vec![vec![RationalFunction::zero(); n]; UPPER],
            c(0.0, 0.0),
            format!("zero:{n}"),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + UPPER
    }

    pub fn base_point(&self) -> C64 {
        self.base_point
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn entry(&self, i: usize, j: usize) -> &RationalFunction {
        &self.b1[i][j]
    }

    pub fn entries(&self) -> &[Vec<RationalFunction>] {
        &self.b1
    }

    /// `B̂₁(z)`.
    pub fn eval_b1(&self, z: C64) -> Result<CMat> {
        let mut m = CMat::zeros(UPPER, self.n);
        for i in 0..UPPER {
            for j in 0..self.n {
                m[(i, j)] = self.b1[i][j].eval(z)?;
            }
        }
        Ok(m)
    }

    /// `η₋₁(z) = [[0, B̂₁], [−B̂₁ᵗI_{1,3}, 0]]`.
    pub fn eta(&self, z: C64) -> Result<CMat> {
        Ok(p_element(&self.eval_b1(z)?))
    }

    /// Polynomial coefficients of every entry, failing on a non-constant denominator.
    pub fn polynomial_entries(&self) -> Result<Vec<Vec<Vec<C64>>>> {
        self.b1
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, f)| {
                        f.as_polynomial().ok_or_else(|| {
                            Error::UnsupportedAntiderivative(format!(
                                "entry ({i},{j}) has a non-constant denominator"
                            ))
                        })
                    })
                    .collect()
            })
            .collect()
    }

    fn degree_bound(&self) -> usize {
        self.b1
            .iter()
            .flatten()
            .map(|f| f.degree_bound())
            .max()
            .unwrap_or(0)
    }

    fn total_denominator_degree(&self) -> usize {
        self.b1
            .iter()
            .flatten()
            .map(|f| f.denominator().len() - 1)
            .sum()
    }

    fn identity_samples(&self) -> usize {
        // Cleared of denominators, every entry of B̂₁ᵗI B̂₁ is a polynomial of degree at most d.
        let d = 2 * self.degree_bound() + 2 * self.total_denominator_degree();
        MIN_SAMPLES.max(2 * d + 1)
    }

    /// Sampled max-norm of `B̂₁ᵗ I_{1,3} B̂₁`.
    pub fn isotropy_defect(&self) -> Result<f64> {
        let vals = sample_disk(self.identity_samples(), SAMPLE_SEED, |z| {
            let b = self.eval_b1(z)?;
            Ok(isotropy_at(&b))
        })?;
        Ok(vals.into_iter().fold(0.0, f64::max))
    }

    /// Sampled deviation from `row₂ = −row₁`, `row₄ = i·row₃`.
    pub fn lightlike_pattern_defect(&self) -> Result<f64> {
        let vals = sample_disk(self.identity_samples(), SAMPLE_SEED ^ 1, |z| {
            let b = self.eval_b1(z)?;
            let mut d: f64 = 0.0;
            for j in 0..self.n {
                d = d.max((b[(1, j)] + b[(0, j)]).norm());
                d = d.max((b[(3, j)] - I * b[(2, j)]).norm());
            }
            Ok(d)
        })?;
        Ok(vals.into_iter().fold(0.0, f64::max))
    }

    /// Numerical rank of `B̂₁(z)` with relative threshold `tol`.
    pub fn b1_rank(&self, z: C64, tol: f64) -> Result<usize> {
        let b = self.eval_b1(z)?;
        let sv = crate::algebra::singular_values(&b);
        let top = sv.iter().cloned().fold(0.0, f64::max);
        if top == 0.0 {
            return Ok(0);
        }
        Ok(sv.iter().filter(|s| **s > tol * top).count())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

fn isotropy_at(b: &CMat) -> f64 {
    let g = b.transpose() * crate::algebra::signature(UPPER) * b;
    crate::algebra::max_norm(&g)
}

/// Evaluate `f` at `count` seeded points, resampling on pole errors.
pub(crate) fn sample_disk<T>(
    count: usize,
    seed: u64,
    mut f: impl FnMut(C64) -> Result<T>,
) -> Result<Vec<T>> {
    sample_region(count, seed, 0.0, 1.0, &mut f)
}

fn sample_region<T>(
    count: usize,
    seed: u64,
    r_min: f64,
    r_max: f64,
    f: &mut impl FnMut(C64) -> Result<T>,
) -> Result<Vec<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut attempts = 0;
        loop {
            let r = rng.random_range(r_min * r_min..r_max * r_max).sqrt();
            let z = C64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU));
            match f(z) {
                Ok(v) => {
                    out.push(v);
                    break;
                }
                Err(Error::Pole(_)) => {
                    attempts += 1;
                    if attempts >= MAX_POLE_RETRIES {
                        return Err(Error::PoleDense { attempts });
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

/// Input data for the three minimal-surface families.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceformData {
    /// Minimal in `ℝⁿ⁺²`: per column `(f_{j0}, f_{j1}, f_{j3})`.
    LightlikeR {
        f0: Vec<RationalFunction>,
        f1: Vec<RationalFunction>,
        f3: Vec<RationalFunction>,
    },
    /// Minimal in `Sⁿ⁺²`: shared `g₀` and per column `g_j`.
    TimelikeS {
        g0: RationalFunction,
        g: Vec<RationalFunction>,
    },
    /// Minimal in `ℍⁿ⁺²`: shared `h₀` and per column `h_j`.
    SpacelikeH {
        h0: RationalFunction,
        h: Vec<RationalFunction>,
    },
}

/// Canonical potential of a minimal surface in a space form.
pub fn make_spaceform_potential(data: &SpaceformData, base_point: C64) -> Result<PotentialSpec> {
    let one = RationalFunction::constant(c(1.0, 0.0));
    let (label, columns): (&str, Vec<[RationalFunction; 4]>) = match data {
        SpaceformData::LightlikeR { f0, f1, f3 } => {
            if f0.len() != f1.len() || f0.len() != f3.len() {
                return Err(Error::Arity(format!(
                    "lightlike family needs equal-length inputs, got {}, {}, {}",
                    f0.len(),
                    f1.len(),
                    f3.len()
                )));
            }
            let cols = (0..f0.len())
                .map(|j| {
                    let a = f0[j].mul(&f1[j]);
                    let b = f0[j].mul(&f3[j]);
                    [a.clone(), a.neg(), b.clone(), b.scale(I)]
                })
                .collect();
            ("spaceform:lightlike", cols)
        }
        SpaceformData::TimelikeS { g0, g } => {
            let sq = g0.mul(g0);
            let v = [
                RationalFunction::zero(),
                g0.scale(c(2.0, 0.0)),
                one.sub(&sq),
                one.add(&sq).scale(I),
            ];
            let cols = g.iter().map(|gj| v.clone().map(|e| gj.mul(&e))).collect();
            ("spaceform:timelike", cols)
        }
        SpaceformData::SpacelikeH { h0, h } => {
            let sq = h0.mul(h0);
            let v = [
                h0.scale(c(0.0, 2.0)),
                RationalFunction::zero(),
                one.sub(&sq),
                one.add(&sq).scale(I),
            ];
            let cols = h.iter().map(|hj| v.clone().map(|e| hj.mul(&e))).collect();
            ("spaceform:spacelike", cols)
        }
    };
    if columns.len() < 2 {
        return Err(Error::Arity(format!(
            "need at least 2 columns, got {}",
            columns.len()
        )));
    }
    let b1 = (0..UPPER)
        .map(|i| columns.iter().map(|col| col[i].clone()).collect())
        .collect();
    PotentialSpec::new(columns.len(), b1, base_point, label)
}

/// The built-in example potentials.
#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    /// Totally isotropic Willmore two-sphere in `S⁶`.
    S6,
    /// Isotropic `ℝP²` family with the polynomial data of index `m`.
    Rp2(i64),
    /// The `S⁴` duality example driven by `f₂`, `f₄`.
    Duality {
        f2: RationalFunction,
        f4: RationalFunction,
    },
    /// Zero potential of codimension `n`.
    Zero(usize),
}

impl Builtin {
    /// Parse `s6`, `rp2:M`, `duality` (with `f₂ = z²`, `f₄ = z`) or `zero:N`.
    pub fn parse(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let int_arg = |default: i64| -> Result<i64> {
            arg.map_or(Ok(default), |a| {
                a.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad builtin parameter `{a}`")))
            })
        };
        match name.trim().to_ascii_lowercase().as_str() {
            "s6" | "s6-isotropic-example" => Ok(Builtin::S6),
            "rp2" | "rp2-family" => Ok(Builtin::Rp2(int_arg(2)?)),
            "duality" | "duality-example" => Ok(Builtin::Duality {
                f2: RationalFunction::monomial(c(1.0, 0.0), 2),
                f4: RationalFunction::monomial(c(1.0, 0.0), 1),
            }),
            "zero" => {
                let n = int_arg(2)?;
                if n < 0 {
                    return Err(Error::Domain(format!("codimension {n}")));
                }
                Ok(Builtin::Zero(n as usize))
            }
            other => Err(Error::Parse(format!("unknown builtin potential `{other}`"))),
        }
    }
}

/// `(f₁, f₂, f₃, f₄)` of the `ℝP²` family: `−2m z^{2m+1}`, `i√(4m²−1) z^{2m}` (twice), `−2m z^{2m−1}`.
pub fn rp2_functions(m: i64) -> Result<[RationalFunction; 4]> {
    if m <= 0 {
        return Err(Error::Domain(format!("rp2 family needs m >= 1, got {m}")));
    }
    let mu = m as usize;
    let mf = m as f64;
    let mid = RationalFunction::monomial(c(0.0, (4.0 * mf * mf - 1.0).sqrt()), 2 * mu);
    Ok([
        RationalFunction::monomial(c(-2.0 * mf, 0.0), 2 * mu + 1),
        mid.clone(),
        mid,
        RationalFunction::monomial(c(-2.0 * mf, 0.0), 2 * mu - 1),
    ])
}

/// `B̂₁` of an isotropic surface in `S⁴` from the four functions `f_j`.
pub fn isotropic_s4_potential(f: &[RationalFunction; 4], base_point: C64, label: &str) -> Result<PotentialSpec> {
    let d: Vec<RationalFunction> = f.iter().map(|g| g.derivative()).collect();
    let half = c(0.5, 0.0);
    let a = d[2].sub(&d[1]);
    let b = d[2].add(&d[1]);
    let p = d[3].sub(&d[0]);
    let q = d[3].add(&d[0]);
    let b1 = vec![
        vec![a.scale(I * half), a.scale(-half)],
        vec![b.scale(I * half), b.scale(-half)],
        vec![p.scale(half), p.scale(I * half)],
        vec![q.scale(I * half), q.scale(-half)],
    ];
    PotentialSpec::new(2, b1, base_point, label)
}

fn poly(coeffs: &[(f64, f64)]) -> RationalFunction {
    RationalFunction::polynomial(coeffs.iter().map(|&(re, im)| c(re, im)).collect())
}

/// Built-in potential with base point 0.
pub fn builtin_potential(which: &Builtin) -> Result<PotentialSpec> {
    let z0 = c(0.0, 0.0);
    match which {
        Builtin::S6 => {
            let b1 = vec![
                vec![poly(&[(0.0, 0.0), (0.0, 1.0)]), poly(&[(0.0, 0.0), (-1.0, 0.0)]), poly(&[(0.0, -0.5)]), poly(&[(0.5, 0.0)])],
                vec![poly(&[(0.0, 0.0), (0.0, -1.0)]), poly(&[(0.0, 0.0), (1.0, 0.0)]), poly(&[(0.0, -0.5)]), poly(&[(0.5, 0.0)])],
                vec![poly(&[(-1.0, 0.0)]), poly(&[(0.0, -1.0)]), poly(&[(0.0, 0.0), (-0.5, 0.0)]), poly(&[(0.0, 0.0), (0.0, -0.5)])],
                vec![poly(&[(0.0, 1.0)]), poly(&[(-1.0, 0.0)]), poly(&[(0.0, 0.0), (0.0, -0.5)]), poly(&[(0.0, 0.0), (0.5, 0.0)])],
            ];
            PotentialSpec::new(4, b1, z0, "s6-isotropic-example")
        }
        Builtin::Rp2(m) => isotropic_s4_potential(&rp2_functions(*m)?, z0, &format!("rp2-family:{m}")),
        Builtin::Duality { f2, f4 } => duality_potential(f2, f4, z0),
        Builtin::Zero(n) => PotentialSpec::zero(*n),
    }
}

/// `B̂₁ = ½[[−if₂′, f₂′], [if₂′, −f₂′], [f₄′, if₄′], [if₄′, −f₄′]]`; requires `f₂(z₀) = f₄(z₀) = 0`.
pub fn duality_potential(f2: &RationalFunction, f4: &RationalFunction, base_point: C64) -> Result<PotentialSpec> {
    for (name, f) in [("f2", f2), ("f4", f4)] {
        let v = f.eval(base_point)?;
        if v.norm() > 1e-14 {
            return Err(Error::Precondition(format!(
                "{name} must vanish at the base point, got {v}"
            )));
        }
    }
    let half = c(0.5, 0.0);
    let d2 = f2.derivative();
    let d4 = f4.derivative();
    let b1 = vec![
        vec![d2.scale(-I * half), d2.scale(half)],
        vec![d2.scale(I * half), d2.scale(-half)],
        vec![d4.scale(half), d4.scale(I * half)],
        vec![d4.scale(I * half), d4.scale(-half)],
    ];
    PotentialSpec::new(2, b1, base_point, "duality-example")
}

/// Residuals of the `ℝP²` symmetry system with `μ(z) = −1/z̄`, maximized over seeded samples.
pub fn rp2_symmetry_defect(f: &[RationalFunction; 4], samples: usize) -> Result<f64> {
    let count = samples.max(1);
    let mut eval = |z: C64| -> Result<f64> {
        let mu = -1.0 / z.conj();
        let v: Vec<C64> = f.iter().map(|g| g.eval(z)).collect::<Result<_>>()?;
        let w: Vec<C64> = f.iter().map(|g| g.eval(mu).map(|x| x.conj())).collect::<Result<_>>()?;
        let s = v[0] * v[3] + v[1] * v[2];
        let r = [
            v[0] + s * w[3],
            v[1] + s * w[1],
            v[2] + s * w[2],
            v[3] + s * w[0],
        ];
        Ok(r.iter().map(|x| x.norm()).fold(0.0, f64::max))
    };
    let vals = sample_region(count, SAMPLE_SEED ^ 2, 0.5, 1.5, &mut eval)?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}
