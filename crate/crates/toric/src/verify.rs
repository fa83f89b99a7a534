//! The full verification suite: every documented value and classification
//! the engine is expected to reproduce, run over fixed parameter grids.
//!
//! Each check returns a [`VerificationRecord`] with a stable id, a one-line
//! statement of the claim it verifies, a pass/fail status, and enough detail
//! to locate the first failure. All comparisons are exact. The rank-3 grid
//! is scanned once ([`scan_batyrev_grid`]) and shared by the checks that
//! quantify over it.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::catalog::{
    self, BatyrevParams, BundleParams, Family, FamilyParams, GridBounds,
};
use crate::chern::{self, classify, hirzebruch_wall_data, ChernError, Positivity};
use crate::fan::{build_fan, Cone, Fan, RayId};
use crate::intersect::IntersectionEngine;
use crate::linalg::{Covector, IntegerVector, Rational};

const SEED_BASE: u64 = 0x6368_6572_6e5f_7631;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
}

/// Outcome of one verification check.
#[derive(Clone, Debug)]
pub struct VerificationRecord {
    pub id: &'static str,
    /// One-line statement of the verified claim.
    pub anchor: &'static str,
    pub status: CheckStatus,
    pub details: String,
}

impl VerificationRecord {
    fn from_failures(
        id: &'static str,
        anchor: &'static str,
        checked: usize,
        failures: Vec<String>,
    ) -> Self {
        let status = if failures.is_empty() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        let details = if failures.is_empty() {
            format!("{checked} comparisons, all exact")
        } else {
            format!(
                "{} of {checked} comparisons failed; first: {}",
                failures.len(),
                failures[0]
            )
        };
        VerificationRecord {
            id,
            anchor,
            status,
            details,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Grid bounds for the rank-3 scan; the defaults are the documented ones.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub batyrev_p_max: u32,
    pub batyrev_p2_max: u32,
    pub batyrev_b_max: u32,
    pub batyrev_c_max: u32,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            batyrev_p_max: 2,
            batyrev_p2_max: 3,
            batyrev_b_max: 3,
            batyrev_c_max: 3,
        }
    }
}

impl VerifyConfig {
    fn batyrev_bounds(&self) -> GridBounds {
        GridBounds {
            p_max: self.batyrev_p_max,
            p2_max: self.batyrev_p2_max,
            b_max: self.batyrev_b_max,
            c_max: self.batyrev_c_max,
            ..GridBounds::default()
        }
    }
}

/// Everything the rank-3 checks need from one grid fan, extracted from a
/// single ch_2 classification pass.
#[derive(Clone, Debug)]
pub struct BatyrevScan {
    pub params: BatyrevParams,
    pub dim: usize,
    /// Closed-form doubled value on the distinguished surface, and the
    /// engine's doubled character sum there.
    pub s1_expected: BigInt,
    pub s1_actual: Rational,
    /// (expected, engine) doubled values on the product surface, when
    /// p2 >= 2 and p3 >= 2.
    pub case1: Option<(BigInt, Rational)>,
    /// (expected, engine) doubled values on the twisted surface, when
    /// p2 >= 2 and p3 = 1.
    pub case2: Option<(BigInt, Rational)>,
    pub ch2_classification: Positivity,
    pub ch2_min: Rational,
    pub hirzebruch_cones_checked: usize,
    pub hirzebruch_mismatch: Option<String>,
}

/// Ray-id offsets of the five groups for given parameters.
fn batyrev_offsets(p: &BatyrevParams) -> [usize; 5] {
    let [p0, p1, p2, p3, _] = p.p.map(|x| x as usize);
    [0, p0, p0 + p1, p0 + p1 + p2, p0 + p1 + p2 + p3]
}

fn complement_cone(n: usize, removed: &[RayId]) -> Cone {
    Cone::from_ids(
        &(0..n)
            .filter(|r| !removed.contains(r))
            .collect::<Vec<_>>(),
    )
}

/// Classify ch_2 on one rank-3 fan and read off every per-cone value the
/// suite needs.
fn scan_one_batyrev(params: &BatyrevParams) -> BatyrevScan {
    let fan = catalog::batyrev_picard3(params).expect("grid parameters construct");
    let n = params.ray_count();
    let [v0, y0, z0, t0, u0] = batyrev_offsets(params);
    let [_, p1, p2, p3, p4] = params.p.map(i64::from);

    let report = classify(&fan, 2).expect("ch_2 classification");
    let value_at = |cone: Cone| -> Rational {
        report
            .values
            .iter()
            .find(|cv| cv.cone == cone)
            .map(|cv| cv.value.clone() * Rational::from_integer(BigInt::from(2)))
            .expect("surface cone is part of the classification")
    };

    let s1 = complement_cone(n, &[v0, y0, z0, t0, u0]);
    let s1_actual = value_at(s1);
    let s1_expected = chern::batyrev_s1_doubled(params);

    let case1 = (p2 >= 2 && p3 >= 2).then(|| {
        let tau = complement_cone(n, &[v0, z0, z0 + 1, t0, t0 + 1]);
        (BigInt::from(-2 * (p1 + p4)), value_at(tau))
    });
    let case2 = (p2 >= 2 && p3 == 1).then(|| {
        let tau = complement_cone(n, &[v0, y0, z0, z0 + 1, u0]);
        let c2 = i64::from(params.c[0]);
        let csum: i64 = params.c.iter().map(|&c| i64::from(c)).sum();
        let b1 = i64::from(params.b[0]);
        (
            BigInt::from(c2 * (p2 + 1) - 2 * (csum + b1 + 1)),
            value_at(tau),
        )
    });

    let mut hirzebruch_cones_checked = 0;
    let mut hirzebruch_mismatch = None;
    for cv in &report.values {
        match hirzebruch_wall_data(&fan, cv.cone) {
            Ok(data) => {
                hirzebruch_cones_checked += 1;
                if data.ch2_value() != cv.value && hirzebruch_mismatch.is_none() {
                    hirzebruch_mismatch = Some(format!(
                        "cone {:?}: closed form {} vs engine {}",
                        cv.cone.ids(),
                        data.ch2_value(),
                        cv.value
                    ));
                }
            }
            Err(ChernError::NotHirzebruchType(_)) => {}
            Err(e) => {
                if hirzebruch_mismatch.is_none() {
                    hirzebruch_mismatch = Some(format!("cone {:?}: {e}", cv.cone.ids()));
                }
            }
        }
    }

    BatyrevScan {
        params: params.clone(),
        dim: fan.rank(),
        s1_expected,
        s1_actual,
        case1,
        case2,
        ch2_classification: report.classification,
        ch2_min: report.min_value,
        hirzebruch_cones_checked,
        hirzebruch_mismatch,
    }
}

/// Scan the whole rank-3 grid in parallel, in deterministic grid order.
pub fn scan_batyrev_grid(config: &VerifyConfig) -> Vec<BatyrevScan> {
    let grid = catalog::grid(Family::Batyrev3, &config.batyrev_bounds());
    grid.par_iter()
        .map(|fp| match fp {
            FamilyParams::Batyrev3(p) => scan_one_batyrev(p),
            _ => unreachable!("rank-3 grid only"),
        })
        .collect()
}

/// Projective spaces are ch_k-positive for every k up to the dimension.
pub fn check_projective_spaces() -> VerificationRecord {
    let mut checked = 0;
    let mut failures = Vec::new();
    for d in 2..=6 {
        let fan = catalog::projective_space(d).expect("projective space");
        for k in 1..=d {
            checked += 1;
            let report = classify(&fan, k).expect("classification");
            if report.classification != Positivity::Positive {
                failures.push(format!(
                    "P^{d}, k={k}: {} (min {})",
                    report.classification, report.min_value
                ));
            }
        }
    }
    VerificationRecord::from_failures(
        "pn.positive",
        "P^d is ch_k-positive for 1 <= k <= d (2 <= d <= 6)",
        checked,
        failures,
    )
}

/// The (d, k, a) grid of the line-bundle family: a >= 1 with a^k <= d - 1.
fn p1_bundle_grid() -> Vec<(usize, usize, u32)> {
    let mut out = Vec::new();
    for d in 4..=7usize {
        for k in 3..d {
            let mut a = 1u32;
            while (a as i64).pow(k as u32) < d as i64 {
                out.push((d, k, a));
                a += 1;
            }
        }
    }
    out
}

/// Character values on the P^1-bundle over P^{d-1} with twist a:
/// on V1 the k-fold sum is 2 a^{k-1} for odd k and 0 for even k; on V2 it is
/// d - a^k for odd k and d + a^k for even k; the classification is positive
/// for odd k and nef-not-positive for even k.
pub fn check_p1_bundle_values() -> VerificationRecord {
    let results: Vec<(usize, Vec<String>)> = p1_bundle_grid()
        .par_iter()
        .map(|&(d, k, a)| {
            let mut checked = 0;
            let mut failures = Vec::new();
            let fan = catalog::kleinschmidt_bundle(
                &BundleParams::new(d, 2, vec![a]).expect("valid bundle"),
            )
            .expect("bundle constructs");
            let engine = IntersectionEngine::new(&fan);
            let tag = format!("d={d} k={k} a={a}");
            let a_int = BigInt::from(a);

            let v1 = Cone::from_ids(&(0..d - k).collect::<Vec<_>>());
            let sum1 = chern::character_sum(&engine, k, v1).expect("V1 value");
            let expect1 = if k % 2 == 1 {
                BigInt::from(2) * a_int.pow(k as u32 - 1)
            } else {
                BigInt::zero()
            };
            checked += 1;
            if sum1 != Rational::from_integer(expect1.clone()) {
                failures.push(format!("{tag}: V1 sum {sum1}, expected {expect1}"));
            }

            let mut v2_ids: Vec<RayId> = (0..d - k - 1).collect();
            v2_ids.push(d);
            let v2 = Cone::from_ids(&v2_ids);
            let sum2 = chern::character_sum(&engine, k, v2).expect("V2 value");
            let expect2 = if k % 2 == 1 {
                BigInt::from(d as i64) - a_int.pow(k as u32)
            } else {
                BigInt::from(d as i64) + a_int.pow(k as u32)
            };
            checked += 1;
            if sum2 != Rational::from_integer(expect2.clone()) {
                failures.push(format!("{tag}: V2 sum {sum2}, expected {expect2}"));
            }

            let report = classify(&fan, k).expect("classification");
            let expected_class = if k % 2 == 1 {
                Positivity::Positive
            } else {
                Positivity::NefNotPositive
            };
            checked += 1;
            if report.classification != expected_class {
                failures.push(format!(
                    "{tag}: classified {}, expected {expected_class}",
                    report.classification
                ));
            }
            (checked, failures)
        })
        .collect();
    let checked = results.iter().map(|(c, _)| c).sum();
    let failures = results.into_iter().flat_map(|(_, f)| f).collect();
    VerificationRecord::from_failures(
        "p1-bundle.values",
        "P^1-bundle over P^{d-1}: ch_k values on V1/V2; odd k positive, even k nef not positive",
        checked,
        failures,
    )
}

/// Top self-intersections on the plane-bundle family: the base divisors
/// vanish, the twisted summand gives a^2 (d-2) + a^2 (d-2)(d-3)/2, every
/// other fiber divisor gives a^2, ch_d is positive, and the Fano property
/// holds exactly for a <= 2.
pub fn check_plane_bundle_top_powers() -> VerificationRecord {
    let mut grid = Vec::new();
    for d in 3..=6usize {
        for a in 1..=3u32 {
            grid.push((d, a));
        }
    }
    let results: Vec<(usize, Vec<String>)> = grid
        .par_iter()
        .map(|&(d, a)| {
            let mut checked = 0;
            let mut failures = Vec::new();
            let fan = catalog::example_41(d, a).expect("bundle constructs");
            let engine = IntersectionEngine::new(&fan);
            let tag = format!("d={d} a={a}");
            let ai = i64::from(a);
            let di = d as i64;
            let mut expect_power = |ray: RayId, expected: i64| {
                checked += 1;
                let got = engine
                    .intersection_number(&vec![ray; d])
                    .expect("top power");
                if got != Rational::from_integer(BigInt::from(expected)) {
                    failures.push(format!(
                        "{tag}: ray {ray} top power {got}, expected {expected}"
                    ));
                }
            };
            for x in 0..3 {
                expect_power(x, 0);
            }
            expect_power(3, ai * ai * (di - 2) + ai * ai * (di - 2) * (di - 3) / 2);
            for j in 4..d + 2 {
                expect_power(j, ai * ai);
            }
            let report = classify(&fan, d).expect("classification");
            checked += 1;
            if report.classification != Positivity::Positive {
                failures.push(format!("{tag}: ch_d classified {}", report.classification));
            }
            checked += 1;
            if fan.is_fano() != (a <= 2) {
                failures.push(format!("{tag}: Fano flip at the wrong twist"));
            }
            (checked, failures)
        })
        .collect();
    let checked = results.iter().map(|(c, _)| c).sum();
    let failures = results.into_iter().flat_map(|(_, f)| f).collect();
    VerificationRecord::from_failures(
        "p2-bundle-family.top-powers",
        "bundle over P^2: top self-intersection numbers, ch_d positive, Fano iff a <= 2",
        checked,
        failures,
    )
}

/// The engine's doubled value on the distinguished surface equals the
/// closed form.
pub fn check_batyrev_s1(scans: &[BatyrevScan]) -> VerificationRecord {
    let mut failures = Vec::new();
    for s in scans {
        if s.s1_actual != Rational::from_integer(s.s1_expected.clone()) {
            failures.push(format!(
                "{:?}: engine {} vs closed form {}",
                s.params, s.s1_actual, s.s1_expected
            ));
        }
    }
    VerificationRecord::from_failures(
        "rank3.s1-value",
        "rank-3 family: doubled ch_2 value on the distinguished surface matches the closed form",
        scans.len(),
        failures,
    )
}

/// Where both z and t blocks have two or more rays, the product surface
/// contributes exactly -2 (p1 + p4).
pub fn check_batyrev_case1(scans: &[BatyrevScan]) -> VerificationRecord {
    let mut checked = 0;
    let mut failures = Vec::new();
    for s in scans {
        if let Some((expected, actual)) = &s.case1 {
            checked += 1;
            if *actual != Rational::from_integer(expected.clone()) {
                failures.push(format!(
                    "{:?}: engine {actual} vs closed form {expected}",
                    s.params
                ));
            }
        }
    }
    VerificationRecord::from_failures(
        "rank3.product-surface",
        "rank-3 family: doubled ch_2 value on the product surface is -2(p1 + p4)",
        checked,
        failures,
    )
}

/// Where the z block has two or more rays and the t block exactly one, the
/// twisted surface contributes c2 (p2 + 1) - 2 (sum c + b1 + 1).
pub fn check_batyrev_case2(scans: &[BatyrevScan]) -> VerificationRecord {
    let mut checked = 0;
    let mut failures = Vec::new();
    for s in scans {
        if let Some((expected, actual)) = &s.case2 {
            checked += 1;
            if *actual != Rational::from_integer(expected.clone()) {
                failures.push(format!(
                    "{:?}: engine {actual} vs closed form {expected}",
                    s.params
                ));
            }
        }
    }
    VerificationRecord::from_failures(
        "rank3.hirzebruch-surface",
        "rank-3 family: doubled ch_2 value on the twisted surface matches its closed form",
        checked,
        failures,
    )
}

/// Every fan of the rank-3 grid classifies ch_2 as not nef, with a strictly
/// negative witness.
pub fn check_batyrev_not_nef(scans: &[BatyrevScan]) -> VerificationRecord {
    let mut failures = Vec::new();
    for s in scans {
        if s.ch2_classification != Positivity::NotNef || s.ch2_min >= Rational::zero() {
            failures.push(format!(
                "{:?}: classified {} with min {}",
                s.params, s.ch2_classification, s.ch2_min
            ));
        }
    }
    VerificationRecord::from_failures(
        "rank3.ch2-not-nef",
        "rank-3 family without fiber-type contraction: ch_2 is never nef",
        scans.len(),
        failures,
    )
}

/// Catalog fans (d <= 6) outside the rank-3 grid, for the surface oracle.
fn oracle_side_catalog() -> Vec<FamilyParams> {
    let mut out = Vec::new();
    out.extend(catalog::grid(
        Family::ProjectiveSpace,
        &GridBounds {
            d_min: 2,
            d_max: 6,
            ..GridBounds::default()
        },
    ));
    out.extend(catalog::grid(
        Family::Kleinschmidt,
        &GridBounds {
            d_min: 2,
            d_max: 6,
            s_max: 5,
            twist_max: 2,
            ..GridBounds::default()
        },
    ));
    out.extend(catalog::grid(
        Family::Example41,
        &GridBounds {
            d_min: 3,
            d_max: 6,
            a_max: 3,
            ..GridBounds::default()
        },
    ));
    out
}

/// On every catalog fan of dimension at most 6, the closed-form surface
/// value agrees with the engine on every codimension-2 cone whose star has
/// exactly four maximal cones.
pub fn check_hirzebruch_oracle(scans: &[BatyrevScan]) -> VerificationRecord {
    let side: Vec<(usize, Option<String>)> = oracle_side_catalog()
        .par_iter()
        .map(|fp| {
            let fan = fp.construct().expect("catalog fan constructs");
            let report = classify(&fan, 2).expect("ch_2 values");
            let mut checked = 0;
            let mut mismatch = None;
            for cv in &report.values {
                match hirzebruch_wall_data(&fan, cv.cone) {
                    Ok(data) => {
                        checked += 1;
                        if data.ch2_value() != cv.value && mismatch.is_none() {
                            mismatch = Some(format!(
                                "{}: cone {:?}: closed form {} vs engine {}",
                                fp.label(),
                                cv.cone.ids(),
                                data.ch2_value(),
                                cv.value
                            ));
                        }
                    }
                    Err(ChernError::NotHirzebruchType(_)) => {}
                    Err(e) => {
                        if mismatch.is_none() {
                            mismatch = Some(format!("{}: {e}", fp.label()));
                        }
                    }
                }
            }
            (checked, mismatch)
        })
        .collect();
    let mut checked: usize = side.iter().map(|(c, _)| c).sum();
    let mut failures: Vec<String> = side.into_iter().filter_map(|(_, m)| m).collect();
    for s in scans.iter().filter(|s| s.dim <= 6) {
        checked += s.hirzebruch_cones_checked;
        if let Some(m) = &s.hirzebruch_mismatch {
            failures.push(format!("{:?}: {m}", s.params));
        }
    }
    VerificationRecord::from_failures(
        "hirzebruch.oracle",
        "closed-form ch_2 of rank-2 invariant surfaces equals the engine on every 4-cone star",
        checked,
        failures,
    )
}

/// s = 3 bundles: the degree-4 identity
/// E1^4 . D_1 ... D_{d-5} . E1 = -(a1-a2)^3 + a1^2 (a2 - 2 a1) - a1 (a1-a2)^2
/// holds exactly, and ch_4 is non-positive on the test subvariety.
pub fn check_p2_bundle_quartic() -> VerificationRecord {
    let mut grid = Vec::new();
    for d in 5..=7usize {
        for a1 in 0..=3u32 {
            for a2 in 0..=a1 {
                grid.push((d, a1, a2));
            }
        }
    }
    let results: Vec<(usize, Vec<String>)> = grid
        .par_iter()
        .map(|&(d, a1, a2)| {
            let mut checked = 0;
            let mut failures = Vec::new();
            let fan = catalog::kleinschmidt_bundle(
                &BundleParams::new(d, 3, vec![a1, a2]).expect("valid bundle"),
            )
            .expect("bundle constructs");
            let engine = IntersectionEngine::new(&fan);
            let tag = format!("d={d} a=({a1},{a2})");
            // Rays: x1..x_{d-1} then y1, y2, y3.
            let y1 = d - 1;
            let mut tau_ids: Vec<RayId> = (0..d - 5).collect();
            tau_ids.push(y1);
            let tau = Cone::from_ids(&tau_ids);
            let quartic = engine
                .against_subvariety(&[y1, y1, y1, y1], tau)
                .expect("E1^4 value");
            let (a1i, a2i) = (i64::from(a1), i64::from(a2));
            let expected = -(a1i - a2i).pow(3) + a1i * a1i * (a2i - 2 * a1i)
                - a1i * (a1i - a2i).pow(2);
            checked += 1;
            if quartic != Rational::from_integer(BigInt::from(expected)) {
                failures.push(format!("{tag}: E1^4 value {quartic}, expected {expected}"));
            }
            let ch4 = chern::chern_value(&fan, 4, tau).expect("ch_4 value");
            checked += 1;
            if ch4 > Rational::zero() {
                failures.push(format!("{tag}: (ch_4 . V) = {ch4} > 0"));
            }
            (checked, failures)
        })
        .collect();
    let checked = results.iter().map(|(c, _)| c).sum();
    let failures = results.into_iter().flat_map(|(_, f)| f).collect();
    VerificationRecord::from_failures(
        "p2-bundle.quartic",
        "P^2-bundle over P^{d-2}: exact degree-4 identity and ch_4 <= 0 on the test subvariety",
        checked,
        failures,
    )
}

/// s in {4, 5}: the four-term quartic sum over the last fiber divisors
/// vanishes exactly, and ch_4 is non-positive on the test subvariety.
pub fn check_bundle_pentagon() -> VerificationRecord {
    let mut grid = Vec::new();
    for s in 4..=5usize {
        for d in 5..=7usize {
            if d < s {
                continue;
            }
            for twists in catalog::non_increasing_vectors(s - 1, 3) {
                grid.push((d, s, twists));
            }
        }
    }
    let results: Vec<(usize, Vec<String>)> = grid
        .par_iter()
        .map(|(d, s, twists)| {
            let (d, s) = (*d, *s);
            let mut checked = 0;
            let mut failures = Vec::new();
            let fan = catalog::kleinschmidt_bundle(
                &BundleParams::new(d, s, twists.clone()).expect("valid bundle"),
            )
            .expect("bundle constructs");
            let engine = IntersectionEngine::new(&fan);
            let tag = format!("d={d} s={s} a={twists:?}");
            let nx = d - s + 2;
            let mut tau_ids: Vec<RayId> = (0..d - s).collect();
            tau_ids.extend(nx..nx + (s - 4));
            let tau = Cone::from_ids(&tau_ids);
            let mut four_term = Rational::zero();
            for j in s - 4..s {
                let e = nx + j;
                four_term += engine
                    .against_subvariety(&[e, e, e, e], tau)
                    .expect("E^4 value");
            }
            checked += 1;
            if !four_term.is_zero() {
                failures.push(format!("{tag}: four-term sum {four_term}, expected 0"));
            }
            let ch4 = chern::chern_value(&fan, 4, tau).expect("ch_4 value");
            checked += 1;
            if ch4 > Rational::zero() {
                failures.push(format!("{tag}: (ch_4 . V) = {ch4} > 0"));
            }
            (checked, failures)
        })
        .collect();
    let checked = results.iter().map(|(c, _)| c).sum();
    let failures = results.into_iter().flat_map(|(_, f)| f).collect();
    VerificationRecord::from_failures(
        "bundle.pentagon",
        "fiber dimension >= 3: the four-term quartic sum vanishes and ch_4 <= 0",
        checked,
        failures,
    )
}

/// No bundle of the d >= 5 grids classifies ch_4 positive.
pub fn check_bundle_ch4_never_positive() -> VerificationRecord {
    let mut grid: Vec<BundleParams> = Vec::new();
    for d in 5..=7usize {
        for a in catalog::non_increasing_vectors(1, 3) {
            grid.push(BundleParams::new(d, 2, a).expect("valid"));
        }
        for s in 3..=5usize {
            if d < s {
                continue;
            }
            for a in catalog::non_increasing_vectors(s - 1, 3) {
                grid.push(BundleParams::new(d, s, a).expect("valid"));
            }
        }
    }
    let failures: Vec<String> = grid
        .par_iter()
        .filter_map(|params| {
            let fan = catalog::kleinschmidt_bundle(params).expect("bundle constructs");
            let report = classify(&fan, 4).expect("classification");
            (report.classification == Positivity::Positive).then(|| {
                format!(
                    "d={} s={} a={:?} classified positive",
                    params.d, params.s, params.twists
                )
            })
        })
        .collect();
    VerificationRecord::from_failures(
        "bundle.ch4-never-positive",
        "no rank-2 bundle with d >= 5 is ch_4-positive",
        grid.len(),
        failures,
    )
}

/// The fixed sample of catalog fans the property checks run over.
pub fn property_sample() -> Vec<FamilyParams> {
    let mut out: Vec<FamilyParams> = (2..=4)
        .map(|d| FamilyParams::ProjectiveSpace { d })
        .collect();
    for (d, s, twists) in [
        (3usize, 2usize, vec![0u32]),
        (3, 2, vec![2]),
        (4, 2, vec![1]),
        (4, 3, vec![1, 0]),
        (5, 3, vec![2, 1]),
        (5, 4, vec![1, 1, 0]),
    ] {
        out.push(FamilyParams::Kleinschmidt(
            BundleParams::new(d, s, twists).expect("valid"),
        ));
    }
    for (d, a) in [(3, 1), (4, 2), (5, 3)] {
        out.push(FamilyParams::Example41 { d, a });
    }
    for p in batyrev_property_sample() {
        out.push(FamilyParams::Batyrev3(p));
    }
    out
}

/// The rank-3 members of the property sample; also the transform sample.
pub fn batyrev_property_sample() -> Vec<BatyrevParams> {
    [
        ([1, 1, 1, 1, 1], vec![0], vec![]),
        ([1, 1, 2, 1, 1], vec![0], vec![0]),
        ([1, 1, 2, 1, 1], vec![2], vec![1]),
        ([1, 2, 2, 1, 1], vec![1], vec![0]),
        ([2, 1, 2, 2, 1], vec![0, 1], vec![3]),
        ([1, 1, 3, 1, 2], vec![0], vec![1, 2]),
    ]
    .into_iter()
    .map(|(p, b, c)| BatyrevParams::new(p, b, c).expect("valid sample"))
    .collect()
}

/// For every wall of every sampled fan, the engine pairing of each prime
/// divisor with the wall curve equals the wall relation coefficient, and the
/// total equals 2 plus the coefficient sum.
pub fn check_wall_consistency() -> VerificationRecord {
    let results: Vec<(usize, Vec<String>)> = property_sample()
        .par_iter()
        .map(|fp| {
            let fan = fp.construct().expect("catalog fan constructs");
            let engine = IntersectionEngine::new(&fan);
            let mut checked = 0;
            let mut failures = Vec::new();
            for wall in fan.walls() {
                let relation = fan.wall_relation(wall).expect("wall relation");
                let mut total = Rational::zero();
                for ray in 0..fan.rays().len() {
                    let pairing = engine
                        .against_subvariety(&[ray], *wall)
                        .expect("curve pairing");
                    checked += 1;
                    if pairing != Rational::from_integer(relation.vector[ray].clone()) {
                        failures.push(format!(
                            "{}: wall {:?}, ray {ray}: engine {pairing} vs relation {}",
                            fp.label(),
                            wall.ids(),
                            relation.vector[ray]
                        ));
                    }
                    total += pairing;
                }
                checked += 1;
                if total != Rational::from_integer(relation.anticanonical_degree()) {
                    failures.push(format!(
                        "{}: wall {:?}: anticanonical pairing {total} vs 2 + sum = {}",
                        fp.label(),
                        wall.ids(),
                        relation.anticanonical_degree()
                    ));
                }
            }
            (checked, failures)
        })
        .collect();
    let checked = results.iter().map(|(c, _)| c).sum();
    let failures = results.into_iter().flat_map(|(_, f)| f).collect();
    VerificationRecord::from_failures(
        "walls.anticanonical",
        "wall curve pairings equal the wall relation coefficients on every catalog wall",
        checked,
        failures,
    )
}

/// Principal divisors pair to zero: against every wall curve and against
/// 25 seeded covectors combined with seeded (d-1)-fold products.
pub fn check_principal_vanishing() -> VerificationRecord {
    let results: Vec<(usize, Vec<String>)> = property_sample()
        .par_iter()
        .enumerate()
        .map(|(fi, fp)| {
            let fan = fp.construct().expect("catalog fan constructs");
            let engine = IntersectionEngine::new(&fan);
            let d = fan.rank();
            let n = fan.rays().len();
            let mut rng = ChaCha8Rng::seed_from_u64(SEED_BASE ^ (fi as u64));
            let mut checked = 0;
            let mut failures = Vec::new();
            // Engine pairings of every ray with every wall, computed once.
            let wall_pairings: Vec<(Cone, Vec<Rational>)> = fan
                .walls()
                .map(|w| {
                    let values = (0..n)
                        .map(|ray| engine.against_subvariety(&[ray], *w).expect("pairing"))
                        .collect();
                    (*w, values)
                })
                .collect();
            for _ in 0..25 {
                let m = Covector::from_i64(
                    &(0..d).map(|_| rng.gen_range(-9i64..=9)).collect::<Vec<_>>(),
                );
                let weights: Vec<Rational> = fan
                    .rays()
                    .iter()
                    .map(|r| Rational::from_integer(m.pair(&r.vector)))
                    .collect();
                for (wall, values) in &wall_pairings {
                    let total: Rational =
                        weights.iter().zip(values).map(|(w, v)| w * v).sum();
                    checked += 1;
                    if !total.is_zero() {
                        failures.push(format!(
                            "{}: div(chi^m) . C_{:?} = {total}",
                            fp.label(),
                            wall.ids()
                        ));
                    }
                }
                // One seeded (d-1)-fold product per covector.
                let rest: Vec<RayId> =
                    (0..d - 1).map(|_| rng.gen_range(0..n)).collect();
                let mut total = Rational::zero();
                for (ray, w) in weights.iter().enumerate() {
                    if w.is_zero() {
                        continue;
                    }
                    let mut multiset = rest.clone();
                    multiset.push(ray);
                    total += w * engine.intersection_number(&multiset).expect("number");
                }
                checked += 1;
                if !total.is_zero() {
                    failures.push(format!(
                        "{}: div(chi^m) . D_{rest:?} = {total}",
                        fp.label()
                    ));
                }
            }
            (checked, failures)
        })
        .collect();
    let checked = results.iter().map(|(c, _)| c).sum();
    let failures = results.into_iter().flat_map(|(_, f)| f).collect();
    VerificationRecord::from_failures(
        "principal.vanishing",
        "principal divisors pair to zero against curves and seeded products",
        checked,
        failures,
    )
}

/// Intersection numbers do not depend on the order the divisors are
/// multiplied in: 50 seeded multisets per fan, two extra shuffles each,
/// evaluated on fresh engines so the memo cache cannot mask a difference.
pub fn check_permutation_invariance() -> VerificationRecord {
    let results: Vec<(usize, Vec<String>)> = property_sample()
        .par_iter()
        .enumerate()
        .map(|(fi, fp)| {
            let fan = fp.construct().expect("catalog fan constructs");
            let d = fan.rank();
            let n = fan.rays().len();
            let mut rng = ChaCha8Rng::seed_from_u64(SEED_BASE ^ 0x5045 ^ (fi as u64));
            let mut checked = 0;
            let mut failures = Vec::new();
            for _ in 0..50 {
                let multiset: Vec<RayId> = (0..d).map(|_| rng.gen_range(0..n)).collect();
                let reference = IntersectionEngine::new(&fan)
                    .intersection_number(&multiset)
                    .expect("number");
                for _ in 0..2 {
                    let mut shuffled = multiset.clone();
                    for i in (1..shuffled.len()).rev() {
                        shuffled.swap(i, rng.gen_range(0..=i));
                    }
                    let value = IntersectionEngine::new(&fan)
                        .intersection_number(&shuffled)
                        .expect("number");
                    checked += 1;
                    if value != reference {
                        failures.push(format!(
                            "{}: {multiset:?} gives {reference} but {shuffled:?} gives {value}",
                            fp.label()
                        ));
                    }
                }
            }
            (checked, failures)
        })
        .collect();
    let checked = results.iter().map(|(c, _)| c).sum();
    let failures = results.into_iter().flat_map(|(_, f)| f).collect();
    VerificationRecord::from_failures(
        "permutation.invariance",
        "intersection numbers are independent of multiplication order",
        checked,
        failures,
    )
}

/// ch_1 positivity coincides with the Fano property, ch_1 nef with weak
/// Fano, and the relation-based Fano test with strict wall positivity.
pub fn check_ch1_fano_equivalence() -> VerificationRecord {
    let results: Vec<(usize, Vec<String>)> = property_sample()
        .par_iter()
        .map(|fp| {
            let fan = fp.construct().expect("catalog fan constructs");
            let mut failures = Vec::new();
            let report = chern::ch1_report(&fan).expect("ch_1 report");
            let fano = fan.is_fano();
            let weak = fan.is_weak_fano();
            if (report.classification == Positivity::Positive) != fano {
                failures.push(format!(
                    "{}: ch_1 {} but is_fano = {fano}",
                    fp.label(),
                    report.classification
                ));
            }
            if (report.classification != Positivity::NotNef) != weak {
                failures.push(format!(
                    "{}: ch_1 {} but is_weak_fano = {weak}",
                    fp.label(),
                    report.classification
                ));
            }
            let all_walls_positive = fan.walls().all(|w| {
                fan.anticanonical_degree_of_wall(w).expect("wall degree") > BigInt::zero()
            });
            if all_walls_positive != fano {
                failures.push(format!(
                    "{}: wall test {all_walls_positive} but relation test {fano}",
                    fp.label()
                ));
            }
            (3, failures)
        })
        .collect();
    let checked = results.iter().map(|(c, _)| c).sum();
    let failures = results.into_iter().flat_map(|(_, f)| f).collect();
    VerificationRecord::from_failures(
        "ch1.fano",
        "ch_1 positivity is the Fano property; ch_1 nef is weak Fano; wall test agrees",
        checked,
        failures,
    )
}

/// A seeded unimodular matrix as a product of elementary operations.
fn random_unimodular(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..d)
        .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..3 * d {
        let i = rng.gen_range(0..d);
        let j = rng.gen_range(0..d);
        match rng.gen_range(0..3u8) {
            0 if i != j => {
                let c = rng.gen_range(-2i64..=2);
                for k in 0..d {
                    let v = m[j][k];
                    m[i][k] += c * v;
                }
            }
            1 if i != j => m.swap(i, j),
            2 => {
                for k in 0..d {
                    m[i][k] = -m[i][k];
                }
            }
            _ => {}
        }
    }
    m
}

fn apply_matrix(m: &[Vec<i64>], v: &IntegerVector) -> IntegerVector {
    IntegerVector::new(
        m.iter()
            .map(|row| {
                row.iter()
                    .zip(&v.entries)
                    .map(|(c, x)| BigInt::from(*c) * x)
                    .sum()
            })
            .collect(),
    )
}

/// All ch_k classifications are invariant under lattice automorphisms:
/// 5 seeded transforms per sampled rank-3 fan.
pub fn check_unimodular_invariance() -> VerificationRecord {
    let results: Vec<(usize, Vec<String>)> = batyrev_property_sample()
        .par_iter()
        .enumerate()
        .map(|(fi, params)| {
            let fan = catalog::batyrev_picard3(params).expect("sample constructs");
            let d = fan.rank();
            let baseline: Vec<Positivity> = (1..=d)
                .map(|k| classify(&fan, k).expect("classification").classification)
                .collect();
            let mut rng = ChaCha8Rng::seed_from_u64(SEED_BASE ^ 0x554d ^ (fi as u64));
            let mut checked = 0;
            let mut failures = Vec::new();
            for t in 0..5 {
                let u = random_unimodular(&mut rng, d);
                let rays = fan
                    .rays()
                    .iter()
                    .map(|r| (r.name.clone(), apply_matrix(&u, &r.vector)))
                    .collect();
                let cones = fan.maximal_cones().iter().map(|c| c.ids()).collect();
                let transformed = build_fan(d, rays, cones).expect("transform preserves validity");
                for (k, expected) in baseline.iter().enumerate() {
                    checked += 1;
                    let got = classify(&transformed, k + 1)
                        .expect("classification")
                        .classification;
                    if got != *expected {
                        failures.push(format!(
                            "{params:?}: transform {t}, k={}: {got} vs {expected}",
                            k + 1
                        ));
                    }
                }
            }
            (checked, failures)
        })
        .collect();
    let checked = results.iter().map(|(c, _)| c).sum();
    let failures = results.into_iter().flat_map(|(_, f)| f).collect();
    VerificationRecord::from_failures(
        "unimodular.invariance",
        "ch_k classifications are invariant under lattice automorphisms",
        checked,
        failures,
    )
}

/// Across the union of all verification grids plus P^d, the only fans
/// classified ch_2-positive are the projective spaces.
pub fn check_ch2_positive_only_pn(scans: &[BatyrevScan]) -> VerificationRecord {
    let mut checked = scans.len();
    let mut failures: Vec<String> = scans
        .iter()
        .filter(|s| s.ch2_classification == Positivity::Positive)
        .map(|s| format!("{:?} classified ch_2-positive", s.params))
        .collect();

    let mut others: Vec<(String, Fan, bool)> = Vec::new();
    for d in 2..=6usize {
        others.push((
            format!("pn(d={d})"),
            catalog::projective_space(d).expect("constructs"),
            true,
        ));
    }
    for (d, _, a) in p1_bundle_grid() {
        let label = format!("kleinschmidt(d={d},s=2,a=[{a}])");
        if others.iter().any(|(l, _, _)| *l == label) {
            continue;
        }
        let fan = catalog::kleinschmidt_bundle(&BundleParams::new(d, 2, vec![a]).expect("valid"))
            .expect("constructs");
        others.push((label, fan, false));
    }
    for d in 3..=6usize {
        for a in 1..=3u32 {
            others.push((
                format!("example41(d={d},a={a})"),
                catalog::example_41(d, a).expect("constructs"),
                false,
            ));
        }
    }
    let results: Vec<Option<String>> = others
        .par_iter()
        .map(|(label, fan, expect_positive)| {
            let report = classify(fan, 2).expect("classification");
            let positive = report.classification == Positivity::Positive;
            (positive != *expect_positive).then(|| {
                format!("{label}: classified {}", report.classification)
            })
        })
        .collect();
    checked += others.len();
    failures.extend(results.into_iter().flatten());
    VerificationRecord::from_failures(
        "ch2-positive.only-pn",
        "across all grids, only projective spaces are ch_2-positive",
        checked,
        failures,
    )
}

/// Run the whole suite in order; the rank-3 grid is scanned once.
pub fn run_all(config: &VerifyConfig) -> Vec<VerificationRecord> {
    let scans = scan_batyrev_grid(config);
    vec![
        check_projective_spaces(),
        check_p1_bundle_values(),
        check_plane_bundle_top_powers(),
        check_batyrev_s1(&scans),
        check_batyrev_case1(&scans),
        check_batyrev_case2(&scans),
        check_batyrev_not_nef(&scans),
        check_hirzebruch_oracle(&scans),
        check_p2_bundle_quartic(),
        check_bundle_pentagon(),
        check_bundle_ch4_never_positive(),
        check_wall_consistency(),
        check_principal_vanishing(),
        check_permutation_invariance(),
        check_ch1_fano_equivalence(),
        check_unimodular_invariance(),
        check_ch2_positive_only_pn(&scans),
    ]
}
