//! Subcommand implementations.

use std::path::Path;

use willmore_dpw::dpw::{
    birkhoff_split, build_surface, iwasawa_split, recover_normalized_potential, BuildOptions, ExtendedFrameGrid,
    SurfaceGrid,
};
use willmore_dpw::io::{read_loop, write_loop};
use willmore_dpw::potentials::{duality_potential, Builtin};
use willmore_dpw::verify::oracles::frame_loop;
use willmore_dpw::verify::{compare_with_alignment, oracle_eval, OracleId, OracleValue, VerifyReport};
use willmore_dpw::{algebra::max_norm, RealForm, C64};

use crate::config::{ConfigError, JobConfig};
use crate::output::{csv_table, header, obj_mesh, sidecar_path, write_text, FailedSample, RunReport};
use crate::Failure;

pub enum FactorKind {
    Iwasawa,
    Birkhoff,
}

fn fatal(e: impl std::fmt::Display) -> Failure {
    Failure::Fatal(e.to_string())
}

/// Write to `path`, or to stdout when there is none.
fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write_text(p, text).map_err(|e| fatal(format!("writing {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

struct Run {
    label: String,
    frames: ExtendedFrameGrid,
    surface: Option<SurfaceGrid>,
}

fn run_pipeline(cfg: &JobConfig) -> Result<Run, Failure> {
    cfg.validate()?;
    let p = cfg.load_potential()?;
    cfg.check_mesh_axes(p.dim() - 1)?;
    let lattice = cfg.grid.lattice()?;
    let opts = BuildOptions {
        realform: cfg.realform,
        tol: cfg.tol_iwasawa,
        execution: cfg.execution,
        ..BuildOptions::default()
    };
    let (frames, surface) = build_surface(&p, &lattice.samples(), &cfg.lambda_samples(), &opts).map_err(fatal)?;
    let surface = surface.map(|s| s.with_lattice(lattice)).transpose().map_err(fatal)?;
    Ok(Run {
        label: p.label().to_string(),
        frames,
        surface,
    })
}

fn run_report(cfg: &JobConfig, run: &Run) -> RunReport {
    let failures = match &run.surface {
        Some(s) => &s.failures,
        None => &run.frames.failures,
    };
    let nl = cfg.lambdas.len();
    let failed = failures
        .iter()
        .enumerate()
        .filter_map(|(i, f)| {
            let f = f.as_ref()?;
            let z = run.frames.z_samples[i / nl];
            Some(FailedSample {
                re_z: z.re,
                im_z: z.im,
                lambda_angle: cfg.lambdas[i % nl],
                reason: f.to_string(),
            })
        })
        .collect();
    RunReport {
        potential: run.label.clone(),
        realform: cfg.realform.to_string(),
        samples: failures.len(),
        failed,
        max_group_defect: Some(run.frames.max_group_defect()),
        max_sphere_defect: run.surface.as_ref().map(SurfaceGrid::max_sphere_defect),
    }
}

pub fn generate(cfg: &JobConfig) -> Result<(), Failure> {
    let run = run_pipeline(cfg)?;
    let zs = &run.frames.z_samples;
    let table = match &run.surface {
        Some(s) => {
            let width = s.points.iter().flatten().map(Vec::len).next().unwrap_or(0);
            csv_table(zs, &cfg.lambdas, width, &header("y", width), |iz, il| s.point(iz, il))
        }
        None => {
            let flat: Vec<Option<Vec<f64>>> = run
                .frames
                .frames
                .iter()
                .map(|f| f.as_ref().map(|m| m.transpose().iter().copied().collect()))
                .collect();
            let width = flat.iter().flatten().map(Vec::len).next().unwrap_or(0);
            let nl = cfg.lambdas.len();
            csv_table(zs, &cfg.lambdas, width, &header("f", width), |iz, il| flat[iz * nl + il].as_deref())
        }
    };
    emit(cfg.csv.as_deref(), &table)?;
    if let (Some(path), Some(axes)) = (&cfg.mesh, &cfg.mesh_axes) {
        let s = run
            .surface
            .as_ref()
            .ok_or_else(|| Failure::Config(ConfigError::Invalid("meshes need the noncompact real form".into())))?;
        let lattice = cfg.grid.lattice()?;
        let mesh = obj_mesh(&lattice, &cfg.lambdas, axes, |iz, il| s.point(iz, il).map(<[f64]>::to_vec));
        emit(Some(path), &mesh)?;
    }
    let report = run_report(cfg, &run);
    let json = serde_json::to_string_pretty(&report).map_err(fatal)?;
    match (&cfg.report, &cfg.csv) {
        (Some(p), _) => emit(Some(p), &json)?,
        (None, Some(csv)) => emit(Some(&sidecar_path(Some(csv))), &json)?,
        (None, None) => {}
    }
    if !report.failed.is_empty() {
        eprintln!("{} of {} samples failed; see the report", report.failed.len(), report.samples);
    }
    Ok(())
}

fn oracle_for(b: &Builtin) -> Option<OracleId> {
    match b {
        Builtin::S6 => Some(OracleId::S6Sphere),
        Builtin::Rp2(m) if (1..=2).contains(m) => Some(OracleId::Rp2Surface(*m)),
        _ => None,
    }
}

fn oracle_check(report: &mut VerifyReport, cfg: &JobConfig, s: &SurfaceGrid, id: &OracleId) -> Result<(), Failure> {
    let mut pts = Vec::new();
    let mut refs = Vec::new();
    for (iz, &z) in s.z_samples.iter().enumerate() {
        for (il, &l) in s.lambda_samples.iter().enumerate() {
            if let Some(y) = s.point(iz, il) {
                pts.push(y.to_vec());
                match oracle_eval(id, z, l).map_err(fatal)? {
                    OracleValue::Point(p) => refs.push(p),
                    OracleValue::Matrix(_) => return Err(fatal("oracle is not a surface")),
                }
            }
        }
    }
    if pts.is_empty() {
        report.check_with("oracle match", f64::NAN, cfg.tol_check, Some("no samples".into()));
        return Ok(());
    }
    let cmp = compare_with_alignment(&pts, &refs, cfg.tol_check).map_err(fatal)?;
    report.check_with(
        "oracle match",
        cmp.max_error,
        cfg.tol_check,
        Some(format!("{:?} path, direct error {:.3e}", cmp.path, cmp.direct_error)),
    );
    Ok(())
}

fn duality_check(report: &mut VerifyReport, cfg: &JobConfig) -> Result<(), Failure> {
    let (f2, f4) = OracleId::default_pair();
    let p = duality_potential(&f2, &f4, C64::new(0.0, 0.0)).map_err(fatal)?;
    let compact = OracleId::Frame91Compact { f2: f2.clone(), f4: f4.clone() };
    let noncompact = OracleId::Frame91Noncompact { f2, f4 };
    let zs: Vec<C64> = (0..10).map(|k| C64::from_polar(0.2 + 0.07 * k as f64, 0.9 * k as f64)).collect();
    let recover = |id: &OracleId| recover_normalized_potential(|z| frame_loop(id, z), &zs, 1e-4, cfg.tol_iwasawa);
    let rc = recover(&compact).map_err(fatal)?;
    let rn = recover(&noncompact).map_err(fatal)?;
    let (mut pair, mut pot) = (0.0f64, 0.0f64);
    for ((c, n), &z) in rc.iter().zip(&rn).zip(&zs) {
        let b = p.eval_b1(z).map_err(fatal)?;
        pair = pair.max(max_norm(&(c.b1() - n.b1())));
        pot = pot.max(max_norm(&(c.b1() - &b))).max(max_norm(&(n.b1() - &b)));
    }
    report.check("duality: compact vs noncompact potential", pair, cfg.tol_check);
    report.check("duality: recovered vs closed-form potential", pot, cfg.tol_check);
    Ok(())
}

pub fn verify(cfg: &JobConfig, oracle: bool, duality: bool) -> Result<bool, Failure> {
    let mut report = VerifyReport::new();
    if cfg.potential.is_some() || !duality {
        let run = run_pipeline(cfg)?;
        let failures = run.surface.as_ref().map_or(run.frames.failure_count(), SurfaceGrid::failure_count);
        report.check("failed samples", failures as f64, 0.0);
        report.check("max group defect", run.frames.max_group_defect(), cfg.tol_check);
        if let Some(s) = &run.surface {
            report.check("max sphere defect", s.max_sphere_defect(), cfg.tol_check);
            report.check("max lift defect", s.max_lift_defect(), cfg.tol_check);
            let id = cfg.builtin().transpose()?.as_ref().and_then(oracle_for);
            if let (true, Some(id)) = (oracle, id) {
                oracle_check(&mut report, cfg, s, &id)?;
            }
        }
    }
    if duality {
        duality_check(&mut report, cfg)?;
    }
    print!("{}", report.render_text());
    if let Some(p) = &cfg.report {
        emit(Some(p), &report.to_json().map_err(fatal)?)?;
    }
    Ok(report.all_passed())
}

fn cell_or_fatal(e: willmore_dpw::Error) -> Failure {
    match e {
        willmore_dpw::Error::IwasawaCell(_) | willmore_dpw::Error::BirkhoffCell(_) => Failure::Cell(e.to_string()),
        willmore_dpw::Error::Parse(_) | willmore_dpw::Error::Json(_) => {
            Failure::Config(ConfigError::Invalid(e.to_string()))
        }
        other => fatal(other),
    }
}

pub fn factorize(input: &Path, kind: FactorKind, realform: RealForm, tol: f64, out_dir: &Path) -> Result<(), Failure> {
    if !(tol > 0.0) {
        return Err(ConfigError::Invalid(format!("tolerance must be positive, got {tol}")).into());
    }
    let m = read_loop(input).map_err(cell_or_fatal)?;
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("loop");
    std::fs::create_dir_all(out_dir).map_err(fatal)?;
    let path = |suffix: &str| out_dir.join(format!("{stem}.{suffix}.json"));
    let (names, factors, residual) = match kind {
        FactorKind::Iwasawa => {
            let s = iwasawa_split(&m, realform, tol).map_err(cell_or_fatal)?;
            (["frame", "positive"], [s.frame, s.positive], s.residual)
        }
        FactorKind::Birkhoff => {
            let s = birkhoff_split(&m, tol).map_err(cell_or_fatal)?;
            (["minus", "plus"], [s.minus, s.plus], s.residual)
        }
    };
    for (name, f) in names.iter().zip(&factors) {
        write_loop(&path(name), f, Some(name)).map_err(fatal)?;
    }
    let summary = serde_json::json!({
        "input": input.display().to_string(),
        "factors": names.iter().map(|n| path(n).display().to_string()).collect::<Vec<_>>(),
        "realform": realform.to_string(),
        "residual": residual,
    });
    let text = serde_json::to_string_pretty(&summary).map_err(fatal)?;
    emit(Some(&path("residual")), &text)?;
    println!("residual {residual:.3e}");
    Ok(())
}

pub fn oracle(cfg: &JobConfig, name: &str) -> Result<(), Failure> {
    cfg.validate()?;
    let id = OracleId::parse(name).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let lattice = cfg.grid.lattice()?;
    let zs = lattice.samples();
    let ls = cfg.lambda_samples();
    let mut values = Vec::with_capacity(zs.len() * ls.len());
    for &z in &zs {
        for &l in &ls {
            values.push(match oracle_eval(&id, z, l) {
                Ok(OracleValue::Point(p)) => Some(p),
                Ok(OracleValue::Matrix(m)) => Some(m.transpose().iter().flat_map(|v| [v.re, v.im]).collect()),
                Err(_) => None,
            });
        }
    }
    let width = values.iter().flatten().map(Vec::len).next().unwrap_or(0);
    let nl = ls.len();
    let table = csv_table(&zs, &cfg.lambdas, width, &header("v", width), |iz, il| values[iz * nl + il].as_deref());
    emit(cfg.csv.as_deref(), &table)
}
