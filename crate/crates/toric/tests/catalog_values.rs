//! Frozen intersection numbers and character values on the catalog fans.
//!
//! These are the hand-checkable anchors of the whole engine: top
//! self-intersections on the plane-bundle family, the mixed monomials on
//! the Picard-rank-2 bundles, and the distinguished-surface values on the
//! Picard-rank-3 family.

use num_bigint::BigInt;
use toric::catalog::{batyrev_picard3, example_41, kleinschmidt_bundle, BatyrevParams, BundleParams};
use toric::chern::{self, batyrev_s1_doubled, chern_value, classify, Positivity};
use toric::fan::{Cone, Fan, RayId};
use toric::intersect::IntersectionEngine;
use toric::linalg::Rational;

fn int(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// The P^1-bundle over P^{d-1} with twist a: rays x1..xd, y1, y2.
fn p1_bundle(d: usize, a: u32) -> Fan {
    kleinschmidt_bundle(&BundleParams::new(d, 2, vec![a]).unwrap()).unwrap()
}

#[test]
fn p1_bundle_character_monomials() {
    for d in 4..=6usize {
        for a in 1..=2u32 {
            let fan = p1_bundle(d, a);
            let eng = IntersectionEngine::new(&fan);
            let y1 = d as RayId;
            let y2 = d as RayId + 1;
            for k in 3..d {
                // Against V1 = V(x_1 .. x_{d-k}).
                let base: Vec<RayId> = (0..d - k).collect();
                let tau = Cone::from_ids(&base);
                let mono = |ray: RayId| {
                    eng.against_subvariety(&vec![ray; k], tau).unwrap()
                };
                let a_pow = |e: u32| BigInt::from(a).pow(e);
                for x in 0..d {
                    assert_eq!(mono(x), int(0), "D^k on V1, d={d} a={a} k={k}");
                }
                let neg_a = -BigInt::from(a);
                assert_eq!(
                    mono(y1),
                    Rational::from_integer(neg_a.pow((k - 1) as u32)),
                    "E1^k on V1"
                );
                assert_eq!(
                    mono(y2),
                    Rational::from_integer(a_pow((k - 1) as u32)),
                    "E2^k on V1"
                );

                // Against V2 = V(x_1 .. x_{d-k-1}, y_1).
                let mut base2: Vec<RayId> = (0..d - k - 1).collect();
                base2.push(y1);
                let tau2 = Cone::from_ids(&base2);
                let mono2 = |ray: RayId| {
                    eng.against_subvariety(&vec![ray; k], tau2).unwrap()
                };
                for x in 0..d {
                    assert_eq!(mono2(x), int(1), "D^k on V2");
                }
                assert_eq!(
                    mono2(y1),
                    Rational::from_integer(neg_a.pow(k as u32)),
                    "E1^k on V2"
                );
                assert_eq!(mono2(y2), int(0), "E2^k on V2");
            }
        }
    }
}

#[test]
fn p1_bundle_mixed_monomial_example() {
    // d = 5, a = 2, k = 3: E1^3 . D1 . D2 = (-2)^2 = 4.
    let fan = p1_bundle(5, 2);
    let eng = IntersectionEngine::new(&fan);
    let v = eng.intersection_number(&[5, 5, 5, 0, 1]).unwrap();
    assert_eq!(v, int(4));
}

#[test]
fn p1_bundle_even_k_values_and_classification() {
    // d = 5, a = 1, k = 4: character sum on V1 is 0, on V2 is d + a^4 = 6.
    let fan = p1_bundle(5, 1);
    let tau1 = Cone::from_ids(&[0]);
    assert_eq!(chern_value(&fan, 4, tau1).unwrap(), int(0));
    let tau2 = Cone::from_ids(&[5]);
    // (1/4!) (5 + 1) = 1/4.
    assert_eq!(
        chern_value(&fan, 4, tau2).unwrap(),
        Rational::new(BigInt::from(1), BigInt::from(4))
    );
    let report = classify(&fan, 4).unwrap();
    assert_eq!(report.classification, Positivity::NefNotPositive);

    // Odd k = 3 is positive; the V1 character sum is 2 a^{k-1} = 2.
    let eng = IntersectionEngine::new(&fan);
    let sum = chern::character_sum(&eng, 3, Cone::from_ids(&[0, 1])).unwrap();
    assert_eq!(sum, int(2));
    let report = classify(&fan, 3).unwrap();
    assert_eq!(report.classification, Positivity::Positive);
}

#[test]
fn plane_bundle_top_self_intersections() {
    for d in 3..=5usize {
        for a in 1..=3u32 {
            let fan = example_41(d, a).unwrap();
            let eng = IntersectionEngine::new(&fan);
            let a = i64::from(a);
            let dd = d as i64;
            for x in 0..3 {
                assert_eq!(
                    eng.intersection_number(&vec![x; d]).unwrap(),
                    int(0),
                    "D{x}^{d}"
                );
            }
            let e1_expected = a * a * (dd - 2) + a * a * (dd - 2) * (dd - 3) / 2;
            assert_eq!(
                eng.intersection_number(&vec![3; d]).unwrap(),
                int(e1_expected),
                "E1^{d} for d={d} a={a}"
            );
            for j in 4..3 + (d - 1) {
                assert_eq!(
                    eng.intersection_number(&vec![j; d]).unwrap(),
                    int(a * a),
                    "E_j^{d}"
                );
            }
            let report = classify(&fan, d).unwrap();
            assert_eq!(report.classification, Positivity::Positive);
        }
    }
}

#[test]
fn rank3_distinguished_surface_values() {
    // p = (1,1,2,1,1), b = (0), c = (0): rays v1, y1, z1, z2, t1, u1.
    let params = BatyrevParams::new([1, 1, 2, 1, 1], vec![0], vec![0]).unwrap();
    let fan = batyrev_picard3(&params).unwrap();
    let eng = IntersectionEngine::new(&fan);
    let s1 = Cone::from_ids(&[3]); // z2 is the only ray outside {v1,y1,z1,t1,u1}
    let sq = |ray: RayId| eng.against_subvariety(&[ray, ray], s1).unwrap();
    assert_eq!(sq(0), int(0), "V1^2 . S1");
    assert_eq!(sq(1), int(-1), "Y1^2 . S1");
    assert_eq!(sq(2), int(0), "Z1^2 . S1 = b1");
    assert_eq!(sq(3), int(0), "Z2^2 . S1 = b1 - 2 c2");
    assert_eq!(sq(4), int(-1), "T1^2 . S1 = -(b1+1)");
    assert_eq!(sq(5), int(-1), "U1^2 . S1");
    assert_eq!(
        chern_value(&fan, 2, s1).unwrap(),
        Rational::new(BigInt::from(-3), BigInt::from(2))
    );
    assert_eq!(batyrev_s1_doubled(&params), BigInt::from(-3));
}

#[test]
fn rank3_surface_values_with_nonzero_twists() {
    // b1 and the c_i push the squared values around exactly as the closed
    // form predicts; checked here with p = (1,1,2,1,1), b = (2), c = (1).
    let params = BatyrevParams::new([1, 1, 2, 1, 1], vec![2], vec![1]).unwrap();
    let fan = batyrev_picard3(&params).unwrap();
    let eng = IntersectionEngine::new(&fan);
    let s1 = Cone::from_ids(&[3]);
    let sq = |ray: RayId| eng.against_subvariety(&[ray, ray], s1).unwrap();
    assert_eq!(sq(2), int(2), "Z1^2 . S1 = b1");
    assert_eq!(sq(3), int(0), "Z2^2 . S1 = b1 - 2 c2");
    assert_eq!(sq(4), int(-3), "T1^2 . S1 = -(b1+1)");
    let doubled = batyrev_s1_doubled(&params);
    assert_eq!(doubled, BigInt::from(-1 - 1 + 2 * 2 - 2 - 3));
    let engine_doubled =
        chern::character_sum(&IntersectionEngine::new(&fan), 2, s1).unwrap();
    assert_eq!(Rational::from_integer(doubled), engine_doubled);
}

#[test]
fn stanley_reisner_products_vanish_on_rank3() {
    let params = BatyrevParams::new([1, 1, 2, 1, 1], vec![1], vec![2]).unwrap();
    let fan = batyrev_picard3(&params).unwrap();
    let eng = IntersectionEngine::new(&fan);
    for pr in fan.primitive_relations() {
        let rays = pr.collection.rays.ids();
        if rays.len() > fan.rank() {
            continue;
        }
        let codim = fan.rank() - rays.len();
        for tau in fan.cones_of_dim(codim) {
            assert_eq!(eng.against_subvariety(&rays, *tau).unwrap(), int(0));
        }
    }
}
