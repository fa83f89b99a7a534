//! Chern character values against invariant subvarieties, positivity
//! classification, and independent closed-form oracles for the surfaces of
//! Picard rank 2 and for the distinguished surface of the Picard-rank-3
//! family.
//!
//! `ch_k = (1/k!) (D_1^k + ... + D_n^k)`, so the value against `V(tau)` is
//! the character sum of `k`-fold self-intersections divided by `k!`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::catalog::BatyrevParams;
use crate::fan::{Cone, Fan, RayId};
use crate::intersect::{IntersectError, IntersectionEngine};
use crate::linalg::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChernError {
    #[error("k = {k} is out of range 1..={rank}")]
    KOutOfRange { k: usize, rank: usize },
    #[error("cone has dimension {dim}, expected {expected} for k = {k}")]
    WrongConeDimension { dim: usize, expected: usize, k: usize },
    #[error("not a cone of this fan: {0}")]
    NotACone(String),
    #[error("cone star is not of Picard-rank-2 type: {0}")]
    NotHirzebruchType(String),
    #[error(transparent)]
    Intersect(#[from] IntersectError),
}

/// Three-way positivity verdict for `ch_k` against all invariant cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Positivity {
    Positive,
    NefNotPositive,
    NotNef,
}

impl Positivity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Positivity::Positive => "positive",
            Positivity::NefNotPositive => "nef_not_positive",
            Positivity::NotNef => "not_nef",
        }
    }
}

impl std::fmt::Display for Positivity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `(ch_k . V(cone))` for one invariant subvariety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernValue {
    pub k: usize,
    pub cone: Cone,
    pub value: Rational,
}

/// All `ch_k` values of one fan, with the minimum, its witness cone, and the
/// sign classification.
#[derive(Clone, Debug)]
pub struct PositivityReport {
    pub k: usize,
    /// One value per (rank - k)-dimensional cone, in cone order.
    pub values: Vec<ChernValue>,
    pub min_value: Rational,
    /// Lexicographically first cone attaining the minimum.
    pub witness: Cone,
    pub classification: Positivity,
}

/// `(1/k!) sum_x (D_x^k . V(tau))`.
pub fn chern_value(fan: &Fan, k: usize, tau: Cone) -> Result<Rational, ChernError> {
    let engine = IntersectionEngine::new(fan);
    chern_value_with(&engine, k, tau)
}

/// Same as [`chern_value`] but reusing a caller-provided engine.
pub fn chern_value_with(
    engine: &IntersectionEngine<'_>,
    k: usize,
    tau: Cone,
) -> Result<Rational, ChernError> {
    let fan = engine.fan();
    check_k(fan, k)?;
    let expected = fan.rank() - k;
    if tau.dim() != expected {
        return Err(ChernError::WrongConeDimension {
            dim: tau.dim(),
            expected,
            k,
        });
    }
    if !fan.is_cone(&tau) {
        return Err(ChernError::NotACone(format!("{:?}", tau.ids())));
    }
    Ok(character_sum(engine, k, tau)? / Rational::from_integer(factorial(k)))
}

/// `sum_x (D_x^k . V(tau))`, the `k!`-scaled chern value; always an integer.
pub fn character_sum(
    engine: &IntersectionEngine<'_>,
    k: usize,
    tau: Cone,
) -> Result<Rational, ChernError> {
    let fan = engine.fan();
    let mut total = Rational::zero();
    let mut multiset = vec![0 as RayId; k];
    for ray in 0..fan.rays().len() {
        multiset.fill(ray);
        total += engine.against_subvariety(&multiset, tau)?;
    }
    Ok(total)
}

/// Evaluate `ch_k` against every invariant subvariety of dimension `k` and
/// classify the sign pattern.
pub fn classify(fan: &Fan, k: usize) -> Result<PositivityReport, ChernError> {
    check_k(fan, k)?;
    let engine = IntersectionEngine::new(fan);
    let dim = fan.rank() - k;
    let kfact = Rational::from_integer(factorial(k));
    let mut values = Vec::with_capacity(fan.cones_of_dim(dim).len());
    for &tau in fan.cones_of_dim(dim) {
        let value = character_sum(&engine, k, tau)? / &kfact;
        values.push(ChernValue { k, cone: tau, value });
    }
    let (witness, min_value) = values
        .iter()
        .map(|cv| (cv.cone, cv.value.clone()))
        .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
        .expect("complete fans have cones in every dimension");
    let classification = if min_value > Rational::zero() {
        Positivity::Positive
    } else if min_value.is_zero() {
        Positivity::NefNotPositive
    } else {
        Positivity::NotNef
    };
    Ok(PositivityReport {
        k,
        values,
        min_value,
        witness,
        classification,
    })
}

/// `k = 1` classification; agrees with the Fano / weak-Fano predicates.
pub fn ch1_report(fan: &Fan) -> Result<PositivityReport, ChernError> {
    classify(fan, 1)
}

/// The two integer relations around a codimension-2 cone whose star has
/// exactly four maximal cones: the invariant surface is a Hirzebruch surface
/// of degree `alpha`, with
/// `w1 + w3 + sum a_i x_i = 0` and `w2 + w4 - alpha w1 + sum e_i x_i = 0`.
#[derive(Clone, Debug)]
pub struct HirzebruchWallData {
    pub tau: Cone,
    /// The star rays in cyclic order `w1, w2, w3, w4`; `w1, w3` and
    /// `w2, w4` are the two opposite pairs, chosen so that `alpha >= 0`.
    pub cycle: [RayId; 4],
    pub alpha: BigInt,
    /// Coefficients `a_i` keyed by the rays of `tau`, in ray order.
    pub a: Vec<(RayId, BigInt)>,
    /// Coefficients `e_i` keyed by the rays of `tau`, in ray order.
    pub e: Vec<(RayId, BigInt)>,
}

impl HirzebruchWallData {
    /// `(ch_2 . S) = (alpha (2 + sum a_i^2) + 2 (-alpha + sum a_i e_i)) / 2`.
    pub fn ch2_value(&self) -> Rational {
        let sum_a2: BigInt = self.a.iter().map(|(_, a)| a * a).sum();
        let sum_ae: BigInt = self
            .a
            .iter()
            .zip(&self.e)
            .map(|((_, a), (_, e))| a * e)
            .sum();
        let doubled =
            &self.alpha * (BigInt::from(2) + sum_a2) + BigInt::from(2) * (-&self.alpha + sum_ae);
        Rational::new(doubled, BigInt::from(2))
    }
}

/// Extract the Hirzebruch data of a codimension-2 cone with exactly four
/// adjacent maximal cones. Errors when the star has any other shape (three
/// cones for a projective-plane star, six for the hexagonal rank-3 star).
pub fn hirzebruch_wall_data(fan: &Fan, tau: Cone) -> Result<HirzebruchWallData, ChernError> {
    if tau.dim() + 2 != fan.rank() || !fan.is_cone(&tau) {
        return Err(ChernError::NotHirzebruchType(format!(
            "expected a codimension-2 cone, got {:?}",
            tau.ids()
        )));
    }
    let star: Vec<RayId> = (0..fan.rays().len())
        .filter(|&r| !tau.contains(r) && fan.is_cone(&tau.with(r)))
        .collect();
    let adjacent = fan
        .maximal_cones()
        .iter()
        .filter(|c| tau.is_subset_of(c))
        .count();
    if star.len() != 4 || adjacent != 4 {
        return Err(ChernError::NotHirzebruchType(format!(
            "star of {:?} has {} rays and {} maximal cones",
            tau.ids(),
            star.len(),
            adjacent
        )));
    }
    // Opposite pairs are the diagonals: pairs that do not span a cone with tau.
    let pair_of = |i: usize, j: usize| fan.is_cone(&tau.with(star[i]).with(star[j]));
    let opposite: Vec<(usize, usize)> = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        .into_iter()
        .filter(|&(i, j)| !pair_of(i, j))
        .collect();
    if opposite.len() != 2 {
        return Err(ChernError::NotHirzebruchType(format!(
            "star of {:?} is not a 4-cycle",
            tau.ids()
        )));
    }

    // Try both pairings as the fiber pair (w1, w3): the right one has
    // w1 + w3 lying in the span of tau. When both qualify the surface is a
    // product and the results agree; that is asserted below.
    let mut candidates = Vec::new();
    for &(p, q) in &[(0usize, 1usize), (1, 0)] {
        let (w1, w3) = (star[opposite[p].0], star[opposite[p].1]);
        let (w2, w4) = (star[opposite[q].0], star[opposite[q].1]);
        if let Some(data) = try_orientation(fan, tau, w1, w2, w3, w4)? {
            candidates.push(data);
        }
    }
    match candidates.len() {
        0 => Err(ChernError::NotHirzebruchType(format!(
            "no fiber pair found in the star of {:?}",
            tau.ids()
        ))),
        1 => Ok(candidates.pop().expect("len checked")),
        _ => {
            debug_assert_eq!(candidates[0].ch2_value(), candidates[1].ch2_value());
            Ok(candidates.swap_remove(0))
        }
    }
}

/// Build the relation data for the labeling `(w1, w2, w3, w4)`, flipping
/// `w1 <-> w3` if needed to make `alpha` non-negative. Returns `None` when
/// `w1 + w3` does not lie in the span of `tau` (wrong pairing).
fn try_orientation(
    fan: &Fan,
    tau: Cone,
    w1: RayId,
    w2: RayId,
    w3: RayId,
    w4: RayId,
) -> Result<Option<HirzebruchWallData>, ChernError> {
    let max = tau.with(w1).with(w2);
    debug_assert!(fan.is_cone(&max));
    let ci = fan
        .maximal_cones()
        .iter()
        .position(|c| *c == max)
        .expect("adjacent maximal cone exists");
    let gens = fan.maximal_cones()[ci].ids();
    let coord = |pos: usize, ray: RayId| fan.dual_pairing(ci, pos, ray).clone();

    // w3 must expand as -w1 + (tau part): coefficient -1 on w1, 0 on w2.
    let w1_pos = gens.iter().position(|&g| g == w1).expect("w1 generates");
    let w2_pos = gens.iter().position(|&g| g == w2).expect("w2 generates");
    if coord(w1_pos, w3) != BigInt::from(-1) || !coord(w2_pos, w3).is_zero() {
        return Ok(None);
    }
    if coord(w2_pos, w4) != BigInt::from(-1) {
        return Err(ChernError::NotHirzebruchType(
            "second relation does not close the 4-cycle".into(),
        ));
    }
    let alpha = coord(w1_pos, w4);
    let mut a = Vec::new();
    let mut e = Vec::new();
    for (pos, &g) in gens.iter().enumerate() {
        if g == w1 || g == w2 {
            continue;
        }
        a.push((g, -coord(pos, w3)));
        e.push((g, -coord(pos, w4)));
    }
    if alpha.sign() == num_bigint::Sign::Minus {
        // Relabel w1 <-> w3; the first relation is symmetric in them and the
        // second picks up the opposite sign of alpha.
        let max2 = tau.with(w3).with(w2);
        let ci2 = fan
            .maximal_cones()
            .iter()
            .position(|c| *c == max2)
            .expect("opposite adjacent cone exists");
        let gens2 = fan.maximal_cones()[ci2].ids();
        let coord2 = |pos: usize, ray: RayId| fan.dual_pairing(ci2, pos, ray).clone();
        let w3_pos = gens2.iter().position(|&g| g == w3).expect("w3 generates");
        let alpha2 = coord2(w3_pos, w4);
        debug_assert_eq!(alpha2, -alpha.clone());
        let mut a2 = Vec::new();
        let mut e2 = Vec::new();
        for (pos, &g) in gens2.iter().enumerate() {
            if g == w3 || g == w2 {
                continue;
            }
            a2.push((g, -coord2(pos, w1)));
            e2.push((g, -coord2(pos, w4)));
        }
        return Ok(Some(HirzebruchWallData {
            tau,
            cycle: [w3, w2, w1, w4],
            alpha: alpha2,
            a: a2,
            e: e2,
        }));
    }
    Ok(Some(HirzebruchWallData {
        tau,
        cycle: [w1, w2, w3, w4],
        alpha,
        a,
        e,
    }))
}

/// Closed-form `(ch_2 . S)` for a codimension-2 cone of Hirzebruch type;
/// equals the engine value `chern_value(fan, 2, tau)` exactly.
pub fn hirzebruch_ch2_formula(fan: &Fan, tau: Cone) -> Result<Rational, ChernError> {
    Ok(hirzebruch_wall_data(fan, tau)?.ch2_value())
}

/// Closed form for `2 (ch_2 . S_1)` on the Picard-rank-3 family, where `S_1`
/// is the surface of the cone spanned by every ray except `v1, y1, z1, t1, u1`:
///
/// `-p1 - p4 + b1 p2 - 2 (c_2 + ... + c_{p2}) - (b1 + 1)
///  + sum_{i=2}^{p3} (b1 - 2 b_i - 1)`.
pub fn batyrev_s1_doubled(params: &BatyrevParams) -> BigInt {
    let b1 = BigInt::from(params.b[0]);
    let mut total = BigInt::zero();
    total -= BigInt::from(params.p[1]);
    total -= BigInt::from(params.p[4]);
    total += &b1 * BigInt::from(params.p[2]);
    for c in &params.c {
        total -= BigInt::from(2) * BigInt::from(*c);
    }
    total -= &b1 + BigInt::one();
    for bi in &params.b[1..] {
        total += &b1 - BigInt::from(2) * BigInt::from(*bi) - BigInt::one();
    }
    total
}

/// `(ch_2 . S_1)` itself, half the doubled closed form.
pub fn batyrev_s1_formula(params: &BatyrevParams) -> Rational {
    Rational::new(batyrev_s1_doubled(params), BigInt::from(2))
}

fn check_k(fan: &Fan, k: usize) -> Result<(), ChernError> {
    if k == 0 || k > fan.rank() {
        return Err(ChernError::KOutOfRange { k, rank: fan.rank() });
    }
    Ok(())
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::fan::tests::{hirzebruch, p1xp1, p2};

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn p3_ch2_is_two_on_every_curve() {
        let fan = catalog::projective_space(3).unwrap();
        for tau in fan.cones_of_dim(1) {
            assert_eq!(chern_value(&fan, 2, *tau).unwrap(), rat(2, 1));
        }
    }

    #[test]
    fn p2_classifications_are_positive() {
        let fan = p2();
        for k in 1..=2 {
            let report = classify(&fan, k).unwrap();
            assert_eq!(report.classification, Positivity::Positive);
        }
    }

    #[test]
    fn ch1_matches_fano_predicates() {
        for (fan, fano, weak) in [
            (p2(), true, true),
            (p1xp1(), true, true),
            (hirzebruch(1), true, true),
            (hirzebruch(2), false, true),
            (hirzebruch(3), false, false),
        ] {
            let report = ch1_report(&fan).unwrap();
            assert_eq!(fan.is_fano(), fano);
            assert_eq!(fan.is_weak_fano(), weak);
            assert_eq!(report.classification == Positivity::Positive, fano);
            assert_eq!(report.classification != Positivity::NotNef, weak);
        }
    }

    #[test]
    fn f2_ch1_is_nef_not_positive() {
        let report = ch1_report(&hirzebruch(2)).unwrap();
        assert_eq!(report.classification, Positivity::NefNotPositive);
        assert_eq!(report.min_value, rat(0, 1));
        // The witness is the wall of the degree-0 curve, ray y1 = index 1.
        assert_eq!(report.witness, Cone::from_ids(&[1]));
    }

    #[test]
    fn k_out_of_range_is_rejected() {
        let fan = p2();
        assert!(matches!(
            classify(&fan, 0),
            Err(ChernError::KOutOfRange { .. })
        ));
        assert!(matches!(
            classify(&fan, 3),
            Err(ChernError::KOutOfRange { .. })
        ));
        assert!(matches!(
            chern_value(&fan, 1, Cone::EMPTY),
            Err(ChernError::WrongConeDimension { .. })
        ));
    }

    #[test]
    fn surface_hirzebruch_data_on_product() {
        // For a surface, tau is the zero cone and S is the surface itself.
        let fan = p1xp1();
        let data = hirzebruch_wall_data(&fan, Cone::EMPTY).unwrap();
        assert_eq!(data.alpha, BigInt::zero());
        assert!(data.a.is_empty());
        let formula = hirzebruch_ch2_formula(&fan, Cone::EMPTY).unwrap();
        assert_eq!(formula, chern_value(&fan, 2, Cone::EMPTY).unwrap());
        assert_eq!(formula, rat(0, 1));
    }

    #[test]
    fn surface_hirzebruch_data_on_f_alpha() {
        for alpha in 0..=3i64 {
            let fan = hirzebruch(alpha);
            let data = hirzebruch_wall_data(&fan, Cone::EMPTY).unwrap();
            assert_eq!(data.alpha, BigInt::from(alpha));
            let formula = hirzebruch_ch2_formula(&fan, Cone::EMPTY).unwrap();
            assert_eq!(formula, chern_value(&fan, 2, Cone::EMPTY).unwrap());
            // (ch_2 . F_alpha) = (alpha(2+0) + 2(-alpha))/2 = 0.
            assert_eq!(formula, rat(0, 1));
        }
    }

    #[test]
    fn p2_star_is_not_hirzebruch_type() {
        let fan = p2();
        assert!(matches!(
            hirzebruch_wall_data(&fan, Cone::EMPTY),
            Err(ChernError::NotHirzebruchType(_))
        ));
    }

    #[test]
    fn batyrev_s1_closed_form_examples() {
        let params = BatyrevParams::new([1, 1, 2, 1, 1], vec![0], vec![0]).unwrap();
        assert_eq!(batyrev_s1_doubled(&params), BigInt::from(-3));
        assert_eq!(batyrev_s1_formula(&params), rat(-3, 2));

        let params = BatyrevParams::new([1, 1, 2, 1, 1], vec![5], vec![0]).unwrap();
        assert_eq!(batyrev_s1_doubled(&params), BigInt::from(2));
    }

    #[test]
    fn batyrev_s1_equal_p2_p3_bound_is_attained() {
        // With b = c = 0 and p2 = p3 the doubled value collapses to
        // -p1 - p3 - p4.
        for (p, expect) in [
            ([1, 1, 2, 2, 1], -4i64),
            ([2, 1, 1, 1, 2], -4),
            ([1, 2, 2, 2, 2], -6),
        ] {
            let params = BatyrevParams::new(
                p,
                vec![0; p[3] as usize],
                vec![0; (p[2] as usize).saturating_sub(1)],
            )
            .unwrap();
            assert_eq!(batyrev_s1_doubled(&params), BigInt::from(expect));
        }
    }
}
