//! Cross-module consistency: the formula pipeline, the generating-function
//! evaluation, and the DP oracle must tell the same story end to end.

use birkhoff::ehrhart::{count_lattice_points, ehrhart_polynomial, volume, GenericVector};
use birkhoff::exactmath::{rat, rat_int};
use birkhoff::integration::{integrate_power, LinearForm};
use birkhoff::mgf::{birkhoff_terms, evaluate_mgf, face_terms, FaceWeights, ZeroPattern};
use birkhoff::oracle;
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[test]
fn full_polytope_pipeline_agrees_with_oracle_n3() {
    let c = GenericVector::new(3);
    let result = ehrhart_polynomial(birkhoff_terms(3, 0).unwrap(), 4, &c, None).unwrap();
    let empty = ZeroPattern::empty();

    let interpolated = oracle::oracle_ehrhart(3, &empty, 4).unwrap();
    assert_eq!(result.polynomial, interpolated);

    for t in 0..=6u64 {
        let direct = count_lattice_points(birkhoff_terms(3, 0).unwrap(), t, &c, None).unwrap();
        assert_eq!(direct, BigInt::from(oracle::count_semimagic(3, t, &empty).unwrap()));
    }

    let vol = volume(birkhoff_terms(3, 0).unwrap(), 4, &c, None).unwrap();
    assert_eq!(vol, result.normalized_volume);
}

#[test]
fn cry_face_pipeline_agrees_with_oracle() {
    let pattern = ZeroPattern::cry(4);
    let weights = FaceWeights::default_for(&pattern);
    let c = GenericVector::new(4);
    let result =
        ehrhart_polynomial(face_terms(4, 0, &pattern, &weights).unwrap(), 6, &c, None).unwrap();
    assert_eq!(result.polynomial, oracle::oracle_ehrhart(4, &pattern, 6).unwrap());
    assert_eq!(result.normalized_volume, rat_int(2));
}

#[test]
fn face_mgf_evaluation_sums_face_points_only() {
    let pattern = ZeroPattern::new(3, [(0, 0)]).unwrap();
    let weights = FaceWeights::default_for(&pattern);
    let z: Vec<Vec<_>> = vec![
        vec![rat(2, 1), rat(3, 1), rat(5, 1)],
        vec![rat(7, 1), rat(2, 3), rat(3, 5)],
        vec![rat(5, 7), rat(7, 2), rat(11, 3)],
    ];
    for t in 1..=2u64 {
        let lhs = evaluate_mgf(
            face_terms(3, 0, &pattern, &weights).unwrap(),
            t as u32,
            &z,
        )
        .unwrap();
        let mut rhs = birkhoff::Rational::zero();
        for point in oracle::enumerate_points(3, t, &pattern).unwrap() {
            let mut monomial = birkhoff::Rational::one();
            for (cell, &e) in point.iter().enumerate() {
                for _ in 0..e {
                    monomial *= &z[cell / 3][cell % 3];
                }
            }
            rhs += monomial;
        }
        assert_eq!(lhs, rhs, "t={t}");
    }
}

#[test]
fn moments_interpolate_between_volume_checks() {
    // int <c,x>^1 over B_2 = c11*x + c12*(1-x) + ... integrated exactly
    let c = GenericVector::new(2);
    let y = LinearForm::from_generic(&c);
    // B_2 is the segment from the identity to the swap; <y,x> runs linearly
    // from <y, id> = 1 + 8 = 9 to <y, swap> = 2 + 4 = 6, so the normalized
    // integral of the p-th power is (9^{p+1} - 6^{p+1}) / (3 (p+1)).
    for p in 0..=4usize {
        let got = integrate_power(birkhoff_terms(2, 0).unwrap(), 1, &y, p, &c, false, None)
            .unwrap();
        let expected = rat(
            9i64.pow(p as u32 + 1) - 6i64.pow(p as u32 + 1),
            3 * (p as i64 + 1),
        );
        assert_eq!(got, expected, "p={p}");
    }
}
