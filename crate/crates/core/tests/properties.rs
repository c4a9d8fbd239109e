//! Randomized invariants of the algebra, loop and potential layers.

use proptest::prelude::*;

use willmore_dpw::algebra::{block_split, group_defect, mink_product, plane_rotation, sigma, MinkowskiForm};
use willmore_dpw::loops::{LaurentLoop, WienerWeight};
use willmore_dpw::potentials::{make_spaceform_potential, SpaceformData};
use willmore_dpw::rational::RationalFunction;
use willmore_dpw::{CMat, C64};

fn complex() -> impl Strategy<Value = C64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| C64::new(a, b))
}

fn matrix(dim: usize) -> impl Strategy<Value = CMat> {
    prop::collection::vec(complex(), dim * dim).prop_map(move |v| CMat::from_vec(dim, dim, v))
}

fn dim() -> impl Strategy<Value = usize> {
    6usize..9
}

/// Twisted loop with coefficients in `d_min..=d_max`.
fn twisted_loop(dim: usize, d_min: i32, d_max: i32) -> impl Strategy<Value = LaurentLoop> {
    prop::collection::vec(matrix(dim), (d_max - d_min + 1) as usize).prop_map(move |cs| {
        let terms = cs.into_iter().enumerate().map(|(i, c)| {
            let k = d_min + i as i32;
            let parts = block_split(&c).unwrap();
            (k, if k % 2 == 0 { parts.k_part } else { parts.p_part })
        });
        LaurentLoop::from_terms(dim, terms).unwrap()
    })
}

fn rotation_word(dim: usize) -> impl Strategy<Value = CMat> {
    prop::collection::vec((0..dim, 0..dim, -1.0f64..1.0), 1..6).prop_map(move |word| {
        word.into_iter()
            .filter(|(a, b, _)| a != b)
            .fold(CMat::identity(dim, dim), |acc, (a, b, t)| acc * plane_rotation(dim, a, b, t))
    })
}

fn poly() -> impl Strategy<Value = RationalFunction> {
    prop::collection::vec(complex(), 1..4).prop_map(RationalFunction::polynomial)
}

proptest! {
    #[test]
    fn block_split_reconstructs_exactly((d, x) in dim().prop_flat_map(|d| (Just(d), matrix(d)))) {
        let _ = d;
        let parts = block_split(&x).unwrap();
        prop_assert_eq!(&parts.k_part + &parts.p_part, x);
    }

    #[test]
    fn sigma_is_an_involution(x in dim().prop_flat_map(matrix)) {
        prop_assert_eq!(sigma(&sigma(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn group_is_closed((d, a, b) in dim().prop_flat_map(|d| (Just(d), rotation_word(d), rotation_word(d)))) {
        let form = MinkowskiForm::new(d).unwrap();
        prop_assume!(group_defect(&a, &form).unwrap() <= 1e-12 && group_defect(&b, &form).unwrap() <= 1e-12);
        prop_assert!(group_defect(&(a * b), &form).unwrap() <= 1e-10);
    }

    #[test]
    fn mink_product_is_symmetric_bilinear(
        (u, v, w) in (prop::collection::vec(complex(), 7), prop::collection::vec(complex(), 7), prop::collection::vec(complex(), 7)),
        s in complex(),
    ) {
        let uv = mink_product(&u, &v).unwrap();
        prop_assert!((uv - mink_product(&v, &u).unwrap()).norm() <= 1e-14 * (1.0 + uv.norm()));
        let sum: Vec<C64> = u.iter().zip(&w).map(|(a, b)| s * a + b).collect();
        let lhs = mink_product(&sum, &v).unwrap();
        let rhs = s * uv + mink_product(&w, &v).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-13 * (1.0 + lhs.norm()));
    }

    #[test]
    fn loop_product_is_a_homomorphism(
        (a, b) in (twisted_loop(6, -2, 1), twisted_loop(6, -1, 2)),
        theta in 0.0f64..std::f64::consts::TAU,
    ) {
        let ab = a.mul(&b).unwrap();
        prop_assume!(!ab.truncated());
        let lam = C64::from_polar(1.0, theta);
        let lhs = ab.eval(lam).unwrap();
        let rhs = a.eval(lam).unwrap() * b.eval(lam).unwrap();
        let err = (lhs - &rhs).iter().map(|c| c.norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-11 * (1.0 + rhs.iter().map(|c| c.norm()).fold(0.0, f64::max)));
    }

    #[test]
    fn twisted_loops_form_a_group((a, b) in (twisted_loop(7, -2, 2), twisted_loop(7, -1, 3))) {
        prop_assume!(a.twist_defect() <= 1e-12 && b.twist_defect() <= 1e-12);
        let ab = a.mul(&b).unwrap();
        prop_assume!(!ab.truncated());
        prop_assert!(ab.twist_defect() <= 1e-10);
    }

    #[test]
    fn wiener_norm_is_submultiplicative((a, b) in (twisted_loop(6, -2, 2), twisted_loop(6, -2, 2))) {
        let w = WienerWeight::default();
        let ab = a.mul(&b).unwrap();
        prop_assume!(!ab.truncated());
        prop_assert!(ab.wiener_norm(&w) <= a.wiener_norm(&w) * b.wiener_norm(&w) + 1e-10);
    }

    #[test]
    fn rational_quotients_cancel(p in poly(), q in poly()) {
        prop_assume!(!p.is_zero() && !q.is_zero());
        let f = p.div(&q).unwrap().mul(&q.div(&p).unwrap());
        let mut checked = 0;
        for k in 0..20 {
            let z = C64::from_polar(0.3 + 0.1 * k as f64, 1.3 * k as f64);
            if let Ok(v) = f.eval(z) {
                prop_assert!((v - 1.0).norm() <= 1e-12 * 1e3, "{v}");
                checked += 1;
            }
        }
        prop_assert!(checked > 10);
    }

    #[test]
    fn spaceform_potential_is_linear(
        f0 in prop::collection::vec(poly(), 2),
        f1 in prop::collection::vec(poly(), 2),
        f3 in prop::collection::vec(poly(), 2),
    ) {
        let base = C64::new(0.1, 0.0);
        let one = make_spaceform_potential(&SpaceformData::LightlikeR { f0: f0.clone(), f1: f1.clone(), f3: f3.clone() }, base);
        let doubled: Vec<RationalFunction> = f0.iter().map(|f| f.scale(C64::new(2.0, 0.0))).collect();
        let two = make_spaceform_potential(&SpaceformData::LightlikeR { f0: doubled, f1, f3 }, base);
        let (one, two) = (one.unwrap(), two.unwrap());
        for i in 0..4 {
            for j in 0..2 {
                let a = one.entry(i, j).scale(C64::new(2.0, 0.0));
                let b = two.entry(i, j);
                prop_assert_eq!(a.numerator(), b.numerator());
                prop_assert_eq!(a.denominator(), b.denominator());
            }
        }
    }
}
