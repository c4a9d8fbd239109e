//! Job configuration: command-line flags overlaid by an optional TOML file.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use willmore_dpw::dpw::ZLattice;
use willmore_dpw::exec::Execution;
use willmore_dpw::potentials::{builtin_potential, Builtin, PotentialSpec};
use willmore_dpw::{RealForm, C64};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read config `{path}`: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("config `{path}`: {source}")]
    Toml { path: PathBuf, source: toml::de::Error },
    #[error("potential: {0}")]
    Potential(#[from] willmore_dpw::Error),
}

/// Where the potential comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSource {
    Builtin(String),
    File(PathBuf),
}

/// Grid of `z` samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub center: C64,
    pub radius: f64,
    pub nu: usize,
    pub nv: usize,
}

impl GridSpec {
    pub fn lattice(&self) -> Result<ZLattice, ConfigError> {
        ZLattice::new(self.center, self.radius, self.nu, self.nv).map_err(|e| ConfigError::Invalid(e.to_string()))
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            center: C64::new(0.0, 0.0),
            radius: 1.0,
            nu: 11,
            nv: 11,
        }
    }
}

/// How mesh vertices are taken from points of `Sⁿ⁺²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeshAxes {
    /// Three ambient coordinates.
    Select([usize; 3]),
    /// Stereographic projection from `e_pole`, then three of the remaining coordinates.
    Stereographic { pole: usize, axes: [usize; 3] },
}

impl MeshAxes {
    /// `a,b,c`, `stereo:P` or `stereo:P:a,b,c`; in the stereographic form the axes index the
    /// coordinates left after removing the pole.
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        let bad = || ConfigError::Invalid(format!("bad mesh axes `{s}`"));
        let triple = |t: &str| -> Result<[usize; 3], ConfigError> {
            let v: Vec<usize> = t.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
            v.try_into().map_err(|_| bad())
        };
        match s.trim().strip_prefix("stereo:") {
            Some(rest) => {
                let (pole, axes) = match rest.split_once(':') {
                    Some((p, a)) => (p, triple(a)?),
                    None => (rest, [0, 1, 2]),
                };
                Ok(MeshAxes::Stereographic {
                    pole: pole.trim().parse().map_err(|_| bad())?,
                    axes,
                })
            }
            None => Ok(MeshAxes::Select(triple(s)?)),
        }
    }

    pub fn project(&self, y: &[f64]) -> Option<[f64; 3]> {
        match self {
            MeshAxes::Select(a) => Some([*y.get(a[0])?, *y.get(a[1])?, *y.get(a[2])?]),
            MeshAxes::Stereographic { pole, axes } => {
                let denom = 1.0 - y.get(*pole)?;
                if denom.abs() < 1e-12 {
                    return None;
                }
                let rest: Vec<f64> = y.iter().enumerate().filter(|(i, _)| i != pole).map(|(_, v)| v / denom).collect();
                Some([*rest.get(axes[0])?, *rest.get(axes[1])?, *rest.get(axes[2])?])
            }
        }
    }

    fn check_dimension(&self, len: usize) -> Result<(), ConfigError> {
        let ok = match self {
            MeshAxes::Select(a) => a.iter().all(|&i| i < len),
            MeshAxes::Stereographic { pole, axes } => *pole < len && axes.iter().all(|&i| i + 1 < len),
        };
        if ok {
            Ok(())
        } else {
            Err(ConfigError::Invalid(format!("mesh axes out of range for points of length {len}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub potential: Option<PotentialSource>,
    pub grid: GridSpec,
    /// Angles of `λ` in radians.
    pub lambdas: Vec<f64>,
    pub realform: RealForm,
    pub tol_iwasawa: f64,
    pub tol_check: f64,
    pub execution: Execution,
    pub csv: Option<PathBuf>,
    pub mesh: Option<PathBuf>,
    pub mesh_axes: Option<MeshAxes>,
    pub report: Option<PathBuf>,
}

impl Default for JobConfig {
    fn default() -> Self {
        Self {
            potential: None,
            grid: GridSpec::default(),
            lambdas: vec![0.0],
            realform: RealForm::Noncompact,
            tol_iwasawa: 1e-10,
            tol_check: 1e-6,
            execution: Execution::Parallel,
            csv: None,
            mesh: None,
            mesh_axes: None,
            report: None,
        }
    }
}

/// TOML layout; every field is optional and overrides the flag value when present.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    potential: Option<FilePotential>,
    grid: Option<FileGrid>,
    lambdas: Option<Vec<f64>>,
    realform: Option<String>,
    tolerances: Option<FileTolerances>,
    execution: Option<Execution>,
    outputs: Option<FileOutputs>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FilePotential {
    builtin: Option<String>,
    file: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileGrid {
    center: Option<[f64; 2]>,
    radius: Option<f64>,
    nu: Option<usize>,
    nv: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileTolerances {
    iwasawa: Option<f64>,
    check: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileOutputs {
    csv: Option<PathBuf>,
    mesh: Option<PathBuf>,
    mesh_axes: Option<String>,
    report: Option<PathBuf>,
}

/// `cx,cy,radius,nu,nv`.
pub fn parse_grid(s: &str) -> Result<GridSpec, ConfigError> {
    let bad = || ConfigError::Invalid(format!("bad grid `{s}`, expected cx,cy,radius,nu,nv"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(bad());
    }
    let real = |t: &str| t.parse::<f64>().map_err(|_| bad());
    let count = |t: &str| t.parse::<usize>().map_err(|_| bad());
    Ok(GridSpec {
        center: C64::new(real(parts[0])?, real(parts[1])?),
        radius: real(parts[2])?,
        nu: count(parts[3])?,
        nv: count(parts[4])?,
    })
}

pub fn parse_lambdas(s: &str) -> Result<Vec<f64>, ConfigError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| ConfigError::Invalid(format!("bad λ angle `{t}`")))
        })
        .collect()
}

pub fn parse_realform(s: &str) -> Result<RealForm, ConfigError> {
    s.parse().map_err(|e: willmore_dpw::Error| ConfigError::Invalid(e.to_string()))
}

impl JobConfig {
    /// Overlay the TOML file at `path`.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        self.apply_toml(&text).map_err(|e| match e {
            ConfigError::Toml { source, .. } => ConfigError::Toml {
                path: path.to_path_buf(),
                source,
            },
            other => other,
        })
    }

    pub fn apply_toml(&mut self, text: &str) -> Result<(), ConfigError> {
        let file: FileConfig = toml::from_str(text).map_err(|source| ConfigError::Toml {
            path: PathBuf::new(),
            source,
        })?;
        if let Some(p) = file.potential {
            match (p.builtin, p.file) {
                (Some(_), Some(_)) => {
                    return Err(ConfigError::Invalid("potential: give either builtin or file".into()))
                }
                (Some(b), None) => self.potential = Some(PotentialSource::Builtin(b)),
                (None, Some(f)) => self.potential = Some(PotentialSource::File(f)),
                (None, None) => {}
            }
        }
        if let Some(g) = file.grid {
            if let Some([x, y]) = g.center {
                self.grid.center = C64::new(x, y);
            }
            self.grid.radius = g.radius.unwrap_or(self.grid.radius);
            self.grid.nu = g.nu.unwrap_or(self.grid.nu);
            self.grid.nv = g.nv.unwrap_or(self.grid.nv);
        }
        if let Some(l) = file.lambdas {
            self.lambdas = l;
        }
        if let Some(r) = file.realform {
            self.realform = parse_realform(&r)?;
        }
        if let Some(t) = file.tolerances {
            self.tol_iwasawa = t.iwasawa.unwrap_or(self.tol_iwasawa);
            self.tol_check = t.check.unwrap_or(self.tol_check);
        }
        if let Some(e) = file.execution {
            self.execution = e;
        }
        if let Some(o) = file.outputs {
            self.csv = o.csv.or(self.csv.take());
            self.mesh = o.mesh.or(self.mesh.take());
            self.report = o.report.or(self.report.take());
            if let Some(a) = o.mesh_axes {
                self.mesh_axes = Some(MeshAxes::parse(&a)?);
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let g = &self.grid;
        if g.nu < 3 || g.nv < 3 {
            return Err(ConfigError::Invalid(format!("grid needs nu, nv >= 3, got {}x{}", g.nu, g.nv)));
        }
        if !(g.radius > 0.0) || !g.radius.is_finite() || !g.center.re.is_finite() || !g.center.im.is_finite() {
            return Err(ConfigError::Invalid("grid radius must be positive and finite".into()));
        }
        if self.lambdas.is_empty() || self.lambdas.iter().any(|a| !a.is_finite()) {
            return Err(ConfigError::Invalid("need at least one finite λ angle".into()));
        }
        for (name, t) in [("iwasawa", self.tol_iwasawa), ("check", self.tol_check)] {
            if !(t > 0.0) || !t.is_finite() {
                return Err(ConfigError::Invalid(format!("tolerance {name} must be positive, got {t}")));
            }
        }
        if self.mesh.is_some() && self.mesh_axes.is_none() {
            return Err(ConfigError::Invalid("a mesh output needs --mesh-axes".into()));
        }
        Ok(())
    }

    pub fn lambda_samples(&self) -> Vec<C64> {
        self.lambdas.iter().map(|&a| C64::from_polar(1.0, a)).collect()
    }

    pub fn builtin(&self) -> Option<Result<Builtin, ConfigError>> {
        match &self.potential {
            Some(PotentialSource::Builtin(name)) => Some(Builtin::parse(name).map_err(ConfigError::from)),
            _ => None,
        }
    }

    pub fn load_potential(&self) -> Result<PotentialSpec, ConfigError> {
        match &self.potential {
            None => Err(ConfigError::Invalid("no potential: pass --builtin or --potential".into())),
            Some(PotentialSource::Builtin(name)) => Ok(builtin_potential(&Builtin::parse(name)?)?),
            Some(PotentialSource::File(path)) => Ok(PotentialSpec::read(path)?),
        }
    }

    pub fn check_mesh_axes(&self, point_len: usize) -> Result<(), ConfigError> {
        match &self.mesh_axes {
            Some(a) if self.mesh.is_some() => a.check_dimension(point_len),
            _ => Ok(()),
        }
    }
}
