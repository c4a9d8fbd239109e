use std::f64::consts::FRAC_PI_4;

use nalgebra::DMatrix;
use willmore_dpw::algebra::{max_norm, mink_real, to_orthogonal_basis, UPPER};
use willmore_dpw::dpw::{
    birkhoff_split, build_surface, integrate_potential, iwasawa_split, BuildOptions, ZLattice, DEFAULT_CAP,
};
use willmore_dpw::exec::Execution;
use willmore_dpw::potentials::{builtin_potential, duality_potential, Builtin, PotentialSpec};
use willmore_dpw::verify::oracles::{frame_compact_orthogonal, frame_loop};
use willmore_dpw::verify::{principal_angle_sine, OracleId};
use willmore_dpw::verify::random::random_real_twisted_loop;
use willmore_dpw::{CMat, RealForm, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn family() -> Vec<C64> {
    vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), C64::from_polar(1.0, FRAC_PI_4)]
}

fn builtins() -> Vec<(String, PotentialSpec)> {
    ["s6", "rp2:1", "rp2:2", "rp2:3", "duality", "zero:2"]
        .iter()
        .map(|name| (name.to_string(), builtin_potential(&Builtin::parse(name).unwrap()).unwrap()))
        .collect()
}

fn sequential(tol: f64) -> BuildOptions {
    BuildOptions {
        tol,
        execution: Execution::Sequential,
        ..BuildOptions::default()
    }
}

#[test]
fn repeated_split_is_identical() {
    let p = builtin_potential(&Builtin::S6).unwrap();
    let f = integrate_potential(&p, DEFAULT_CAP).unwrap();
    let m = f.eval(c(0.7, 0.2));
    let a = iwasawa_split(&m, RealForm::Noncompact, 1e-10).unwrap();
    let b = iwasawa_split(&m, RealForm::Noncompact, 1e-10).unwrap();
    let d_frame = a.frame.sub(&b.frame).unwrap().coeffs().iter().map(max_norm).fold(0.0, f64::max);
    let d_pos = a.positive.sub(&b.positive).unwrap().coeffs().iter().map(max_norm).fold(0.0, f64::max);
    assert!(d_frame <= 1e-9 && d_pos <= 1e-9, "{d_frame:e} {d_pos:e}");
}

#[test]
fn split_of_recomposed_loop_returns_the_same_factors() {
    let p = builtin_potential(&Builtin::Rp2(2)).unwrap();
    let f = integrate_potential(&p, DEFAULT_CAP).unwrap();
    let m = f.eval(c(0.4, -0.3));
    let a = iwasawa_split(&m, RealForm::Noncompact, 1e-10).unwrap();
    let again = a.frame.mul(&a.positive).unwrap().trimmed(1e-15);
    let b = iwasawa_split(&again, RealForm::Noncompact, 1e-10).unwrap();
    for lam in family() {
        let d = max_norm(&(a.frame.eval(lam).unwrap() - b.frame.eval(lam).unwrap()));
        assert!(d <= 1e-9, "frame moved by {d:e}");
    }
}

#[test]
fn positive_factor_is_normalized_on_the_definite_block() {
    let p = builtin_potential(&Builtin::S6).unwrap();
    let f = integrate_potential(&p, DEFAULT_CAP).unwrap();
    for z in [c(0.3, 0.1), c(-1.1, 0.6)] {
        let s = iwasawa_split(&f.eval(z), RealForm::Noncompact, 1e-10).unwrap();
        let b0 = s.positive.coeff_or_zero(0);
        let n = b0.nrows() - UPPER;
        let lower = b0.view((UPPER, UPPER), (n, n)).into_owned();
        assert!(max_norm(&(&lower - lower.adjoint())) < 1e-10);
        let eig = willmore_dpw::algebra::real_embedding(&lower).symmetric_eigen();
        assert!(eig.eigenvalues.iter().all(|&e| e > 0.0));
    }
}

#[test]
fn exact_integration_of_builtins() {
    for (name, p) in builtins() {
        let f = integrate_potential(&p, DEFAULT_CAP).unwrap();
        let defect = f.recursion_defect(&p).unwrap();
        assert!(defect <= 1e-12, "{name}: recursion defect {defect:e}");
    }
}

#[test]
fn termination_within_degree_bound() {
    for (name, p) in builtins() {
        let degree = p
            .polynomial_entries()
            .unwrap()
            .iter()
            .flatten()
            .map(|coeffs| coeffs.iter().rposition(|a| a.norm() > 0.0).unwrap_or(0))
            .max()
            .unwrap_or(0);
        let f = integrate_potential(&p, DEFAULT_CAP).unwrap();
        let k = f.terminated_at().unwrap_or(usize::MAX);
        assert!(f.terminated() && k <= 2 * degree + 4, "{name}: k = {k}, degree {degree}");
    }
}

#[test]
fn surface_is_stable_under_tighter_tolerance() {
    for which in [Builtin::S6, Builtin::Rp2(2)] {
        let p = builtin_potential(&which).unwrap();
        let zs = ZLattice::new(c(0.1, -0.05), 0.8, 7, 7).unwrap().samples();
        let (_, loose) = build_surface(&p, &zs, &family(), &sequential(1e-10)).unwrap();
        let (_, tight) = build_surface(&p, &zs, &family(), &sequential(1e-12)).unwrap();
        let (loose, tight) = (loose.unwrap(), tight.unwrap());
        assert_eq!(loose.failure_count(), 0);
        assert_eq!(tight.failure_count(), 0);
        for (a, b) in loose.points.iter().zip(&tight.points) {
            let (a, b) = (a.as_ref().unwrap(), b.as_ref().unwrap());
            let d = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(d <= 1e-8, "{which:?}: {d:e}");
        }
    }
}

#[test]
fn associated_family_is_isometric() {
    let p = builtin_potential(&Builtin::S6).unwrap();
    let h = 1e-4;
    for z in [c(0.5, 0.2), c(-0.3, 0.9)] {
        let zs = [z - h, z + h, z - c(0.0, h), z + c(0.0, h)];
        let (_, s) = build_surface(&p, &zs, &family(), &sequential(1e-10)).unwrap();
        let s = s.unwrap();
        let factor = |il: usize| {
            let du: f64 = s.point(1, il).unwrap().iter().zip(s.point(0, il).unwrap()).map(|(a, b)| (a - b).powi(2)).sum();
            let dv: f64 = s.point(3, il).unwrap().iter().zip(s.point(2, il).unwrap()).map(|(a, b)| (a - b).powi(2)).sum();
            (du + dv) / (8.0 * h * h)
        };
        let base = factor(0);
        for il in 1..family().len() {
            let rel = (factor(il) - base).abs() / base;
            assert!(rel <= 1e-6, "z = {z}, λ index {il}: relative {rel:e}");
        }
    }
}

#[test]
fn frames_have_orthonormal_columns_and_null_lifts() {
    let p = builtin_potential(&Builtin::S6).unwrap();
    let zs = ZLattice::new(c(0.0, 0.0), 1.5, 6, 6).unwrap().samples();
    let (frames, s) = build_surface(&p, &zs, &family(), &BuildOptions::default()).unwrap();
    let s = s.unwrap();
    for f in frames.frames.iter().flatten() {
        let dim = f.nrows();
        for i in 0..dim {
            for j in 0..dim {
                let ci: Vec<f64> = f.column(i).iter().copied().collect();
                let cj: Vec<f64> = f.column(j).iter().copied().collect();
                let want = if i != j { 0.0 } else if i == 0 { -1.0 } else { 1.0 };
                assert!((mink_real(&ci, &cj) - want).abs() <= 1e-8);
            }
        }
    }
    assert!(s.max_lift_defect() <= 1e-8);
    assert!(s.max_sphere_defect() <= 1e-8);
}

#[test]
fn parallel_and_sequential_builds_agree() {
    let p = builtin_potential(&Builtin::Rp2(2)).unwrap();
    let zs = ZLattice::new(c(0.0, 0.0), 1.0, 5, 5).unwrap().samples();
    let (_, seq) = build_surface(&p, &zs, &family(), &sequential(1e-10)).unwrap();
    let par_opts = BuildOptions {
        execution: Execution::Parallel,
        ..BuildOptions::default()
    };
    let (_, par) = build_surface(&p, &zs, &family(), &par_opts).unwrap();
    assert_eq!(seq.unwrap().points, par.unwrap().points);
}

#[test]
fn s6_base_point_maps_to_the_pole() {
    let p = builtin_potential(&Builtin::S6).unwrap();
    let (_, s) = build_surface(&p, &[c(0.0, 0.0)], &family(), &sequential(1e-10)).unwrap();
    let s = s.unwrap();
    for il in 0..family().len() {
        let y = s.point(0, il).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-12);
        assert!(y[1..].iter().all(|v| v.abs() < 1e-12));
    }
}

#[test]
fn compact_split_matches_closed_form_frame_spans() {
    let (f2, f4) = OracleId::default_pair();
    let p = duality_potential(&f2, &f4, c(0.0, 0.0)).unwrap();
    let f = integrate_potential(&p, DEFAULT_CAP).unwrap();
    let z = c(1.0, 0.0);
    let s = iwasawa_split(&f.eval(z), RealForm::Compact, 1e-10).unwrap();
    for lam in family() {
        let ours = to_orthogonal_basis(&s.frame.eval(lam).unwrap()).map(|v| v.re);
        let theirs = frame_compact_orthogonal(&f2, &f4, z, lam).unwrap().map(|v| v.re);
        let n = ours.ncols() - UPPER;
        let upper = |m: &DMatrix<f64>| m.columns(0, UPPER).into_owned();
        let lower = |m: &DMatrix<f64>| m.columns(UPPER, n).into_owned();
        assert!(principal_angle_sine(&upper(&ours), &upper(&theirs)).unwrap() < 1e-8);
        assert!(principal_angle_sine(&lower(&ours), &lower(&theirs)).unwrap() < 1e-8);
    }
    let theirs = frame_compact_orthogonal(&f2, &f4, z, c(1.0, 0.0)).unwrap();
    assert!((theirs[(0, 0)].re - 0.5f64.sqrt()).abs() < 1e-12);
    assert!((theirs[(2, 2)].re - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
}

#[test]
fn birkhoff_of_closed_form_frame_recovers_the_meromorphic_frame() {
    let (f2, f4) = OracleId::default_pair();
    let p = duality_potential(&f2, &f4, c(0.0, 0.0)).unwrap();
    let f = integrate_potential(&p, DEFAULT_CAP).unwrap();
    let id = OracleId::Frame91Noncompact { f2, f4 };
    for z in [c(0.4, 0.3), c(-0.6, 0.5)] {
        let split = birkhoff_split(&frame_loop(&id, z).unwrap(), 1e-10).unwrap();
        let expected = f.eval(z);
        for lam in family() {
            let d = max_norm(&(split.minus.eval(lam).unwrap() - expected.eval(lam).unwrap()));
            assert!(d <= 1e-8, "z = {z}: {d:e}");
        }
    }
}

#[test]
fn real_twisted_loop_is_its_own_frame() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let k = random_real_twisted_loop(&mut rng, 2).unwrap();
        let s = iwasawa_split(&k, RealForm::Noncompact, 1e-10).unwrap();
        for lam in family() {
            let d = max_norm(&(s.frame.eval(lam).unwrap() - k.eval(lam).unwrap()));
            assert!(d < 1e-9, "{d:e}");
        }
        let b0: CMat = s.positive.coeff_or_zero(0);
        assert!(max_norm(&(b0 - CMat::identity(6, 6))) < 1e-9);
    }
}
