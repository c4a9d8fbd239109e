//! CSV, OBJ and sidecar-report writers.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use willmore_dpw::dpw::ZLattice;
use willmore_dpw::C64;

use crate::config::MeshAxes;

fn number(out: &mut String, v: f64) {
    let _ = write!(out, "{v:.16e}");
}

/// One CSV row: `re z, im z, angle λ, values…`.
pub fn csv_row(z: C64, angle: f64, values: &[f64]) -> String {
    let mut line = String::new();
    for (i, v) in [z.re, z.im, angle].iter().chain(values).enumerate() {
        if i > 0 {
            line.push(',');
        }
        number(&mut line, *v);
    }
    line.push('\n');
    line
}

/// Rows in `z`-major order; `value(iz, il)` is `None` for a failed sample, written as NaN.
pub fn csv_table<'a>(
    z_samples: &[C64],
    angles: &[f64],
    width: usize,
    header: &[String],
    value: impl Fn(usize, usize) -> Option<&'a [f64]>,
) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    let missing = vec![f64::NAN; width];
    for (iz, &z) in z_samples.iter().enumerate() {
        for (il, &a) in angles.iter().enumerate() {
            out.push_str(&csv_row(z, a, value(iz, il).unwrap_or(&missing)));
        }
    }
    out
}

pub fn header(prefix: &str, width: usize) -> Vec<String> {
    let mut h = vec!["re_z".to_string(), "im_z".to_string(), "lambda_angle".to_string()];
    h.extend((0..width).map(|i| format!("{prefix}{i}")));
    h
}

/// Triangulated lattice, one object per `λ`; triangles touching a missing vertex are dropped.
pub fn obj_mesh(
    lattice: &ZLattice,
    angles: &[f64],
    axes: &MeshAxes,
    point: impl Fn(usize, usize) -> Option<Vec<f64>>,
) -> String {
    let mut out = String::new();
    let mut base = 1usize;
    for (il, a) in angles.iter().enumerate() {
        let _ = writeln!(out, "o lambda_{il}");
        let _ = writeln!(out, "# lambda angle {a:.16e}");
        let mut present = vec![false; lattice.len()];
        for (iz, seen) in present.iter_mut().enumerate() {
            let projected = point(iz, il).and_then(|y| axes.project(&y));
            *seen = projected.is_some();
            let [x, y, z] = projected.unwrap_or([f64::NAN; 3]);
            let _ = writeln!(out, "v {x:.16e} {y:.16e} {z:.16e}");
        }
        for iv in 0..lattice.nv - 1 {
            for iu in 0..lattice.nu - 1 {
                let quad = [
                    lattice.index(iu, iv),
                    lattice.index(iu + 1, iv),
                    lattice.index(iu + 1, iv + 1),
                    lattice.index(iu, iv + 1),
                ];
                for tri in [[quad[0], quad[1], quad[2]], [quad[0], quad[2], quad[3]]] {
                    if tri.iter().all(|&i| present[i]) {
                        let _ = writeln!(out, "f {} {} {}", base + tri[0], base + tri[1], base + tri[2]);
                    }
                }
            }
        }
        base += lattice.len();
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct FailedSample {
    pub re_z: f64,
    pub im_z: f64,
    pub lambda_angle: f64,
    pub reason: String,
}

/// Sidecar written next to generated samples.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub potential: String,
    pub realform: String,
    pub samples: usize,
    pub failed: Vec<FailedSample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_group_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_sphere_defect: Option<f64>,
}

/// `out.csv` → `out.report.json`; no CSV → `report.json`.
pub fn sidecar_path(csv: Option<&Path>) -> PathBuf {
    match csv {
        Some(p) => p.with_extension("report.json"),
        None => PathBuf::from("report.json"),
    }
}

pub fn write_text(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)
}
