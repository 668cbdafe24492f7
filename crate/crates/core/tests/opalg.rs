mod common;

use hvnogo_core::opalg::{
    commutes, eig_hermitian, embed, joint_spectrum, jordan_decompose, max_abs,
    poly_vanishing_check, tensor_with_identity, DEFAULT_COMMUTE_TOL,
};
use hvnogo_core::random::{
    random_density, random_hermitian, random_rank1_projection, random_unitary,
};
use hvnogo_core::{Complex64, DMatrix, HermitianOperator};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spectral_reconstruction(seed in any::<u64>(), dim in 1usize..=8) {
        let a = random_hermitian(dim, &mut rng(seed));
        let spec = eig_hermitian(&a);
        prop_assert!(max_abs(&(spec.reconstruct() - a.matrix())) <= 1e-10 * (1.0 + a.norm_max()));
        prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let v = &spec.eigenvectors;
        prop_assert!(max_abs(&(v.adjoint() * v - DMatrix::identity(dim, dim))) <= 1e-10);
        let trace: f64 = spec.eigenvalues.iter().sum();
        prop_assert!((trace - a.trace()).abs() <= 1e-10 * (1.0 + a.norm_max()) * dim as f64);
    }

    #[test]
    fn known_spectrum_is_recovered(seed in any::<u64>(), dim in 1usize..=6) {
        let mut r = rng(seed);
        let u = random_unitary(dim, &mut r);
        let mut d: Vec<f64> = (0..dim).map(|_| r.random_range(-5.0..5.0)).collect();
        let a = HermitianOperator::conjugated_diagonal(&u, &d);
        d.sort_by(f64::total_cmp);
        let got = eig_hermitian(&a).eigenvalues;
        for (x, y) in got.iter().zip(&d) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
    }

    #[test]
    fn jordan_parts_are_orthogonal(seed in any::<u64>(), dim in 1usize..=6) {
        let a = random_hermitian(dim, &mut rng(seed));
        let j = jordan_decompose(&a);
        prop_assert!(j.positive.min_eigenvalue() >= -1e-10);
        prop_assert!(j.negative.min_eigenvalue() >= -1e-10);
        prop_assert!(max_abs(&(j.positive.sub(&j.negative).unwrap().matrix() - a.matrix())) <= 1e-10);
        prop_assert!(max_abs(&j.positive.product(&j.negative).unwrap()) <= 1e-10);
        let abs_sum: f64 = a.eig().eigenvalues.iter().map(|x| x.abs()).sum();
        prop_assert!((j.trace_norm() - abs_sum).abs() <= 1e-9);
    }

    #[test]
    fn embedding_preserves_trace_products(seed in any::<u64>(), dim in 1usize..=4, extra in 0usize..=4) {
        let mut r = rng(seed);
        let rho = random_density(dim, &mut r);
        let e = random_rank1_projection(dim, &mut r);
        let target = dim + extra;
        let big_rho = embed(&rho, target).unwrap();
        let big_e = embed(&e, target).unwrap();
        prop_assert!((big_rho.trace_product(&big_e).unwrap() - rho.trace_product(&e).unwrap()).abs() <= 1e-12);
        prop_assert!((big_rho.trace() - 1.0).abs() <= 1e-12);
        prop_assert!(big_e.is_projection(1e-12));
        for i in 0..target {
            for k in 0..target {
                if i >= dim || k >= dim {
                    prop_assert_eq!(big_rho.matrix()[(i, k)], Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn tensoring_preserves_commutation(seed in any::<u64>(), dim in 2usize..=4, env in 1usize..=3) {
        let mut r = rng(seed);
        let p = random_rank1_projection(dim, &mut r);
        let q = random_rank1_projection(dim, &mut r);
        let u = random_unitary(dim, &mut r);
        let mut d = vec![0.0; dim];
        d[0] = 1.0;
        let p0 = HermitianOperator::conjugated_diagonal(&u, &d);
        d[0] = 0.0;
        d[1] = 1.0;
        let p1 = HermitianOperator::conjugated_diagonal(&u, &d);
        for (x, y) in [(&p, &q), (&p0, &p1)] {
            let small = commutes(x, y, DEFAULT_COMMUTE_TOL).unwrap();
            let big = commutes(
                &tensor_with_identity(x, env).unwrap(),
                &tensor_with_identity(y, env).unwrap(),
                DEFAULT_COMMUTE_TOL,
            )
            .unwrap();
            prop_assert_eq!(small, big);
        }
        let lifted = tensor_with_identity(&p, env).unwrap();
        prop_assert!(lifted.is_projection(1e-12));
        prop_assert_eq!(lifted.rank(1e-10), env);
    }
}

#[test]
fn joint_spectrum_matches_diagonal_oracle() {
    let mut r = rng(11);
    for _ in 0..100 {
        let (ops, diags) = common::random_commuting_family(&mut r, 6);
        let dim = ops[0].dim();
        let js = joint_spectrum(&ops).unwrap();
        assert_eq!(js.multiplicities().iter().sum::<usize>(), dim);
        let mut expected: Vec<Vec<f64>> = (0..dim)
            .map(|k| diags.iter().map(|d| d[k]).collect())
            .collect();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        expected.dedup();
        assert_eq!(js.points.len(), expected.len());
        for t in &expected {
            assert!(js.contains(t, 1e-8), "missing {t:?}");
        }
        for p in &js.points {
            let count = (0..dim)
                .filter(|&k| {
                    diags
                        .iter()
                        .zip(&p.tuple)
                        .all(|(d, x)| (d[k] - x).abs() <= 1e-8)
                })
                .count();
            assert_eq!(p.multiplicity(), count);
        }
    }
}

#[test]
fn vanishing_agrees_with_diagonal_oracle() {
    let mut r = rng(12);
    let mut zero_cases = 0;
    for _ in 0..200 {
        let (ops, diags) = common::random_commuting_family(&mut r, 6);
        let f = common::random_polynomial(&mut r, ops.len());
        let check = poly_vanishing_check(&ops, &f).unwrap();
        assert!(check.agrees(), "{check:?}");
        let dim = ops[0].dim();
        let oracle = (0..dim).all(|k| {
            let point: Vec<f64> = diags.iter().map(|d| d[k]).collect();
            f.eval(&point).abs() <= 1e-8
        });
        assert_eq!(check.operator_zero, oracle);
        zero_cases += usize::from(oracle);
    }
    assert!(zero_cases > 0);
}

#[test]
fn operator_json_round_trip() {
    let a = random_hermitian(4, &mut rng(3));
    let text = serde_json::to_string(&a).unwrap();
    let back: HermitianOperator = serde_json::from_str(&text).unwrap();
    assert!(max_abs(&(back.matrix() - a.matrix())) <= 1e-15);
    let bad = r#"{"dim":2,"entries":[[[0,0],[1,0]],[[2,0],[0,0]]]}"#;
    assert!(serde_json::from_str::<HermitianOperator>(bad).is_err());
}
