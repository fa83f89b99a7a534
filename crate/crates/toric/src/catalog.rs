//! Constructors for the fan families the verification suite runs on:
//! projective spaces, projective-space bundles over projective spaces
//! (the general Picard-rank-2 case), the bundle family over the projective
//! plane with one twist, and the Picard-rank-3 family without a fiber-type
//! contraction, together with parameter-grid enumerators.
//!
//! Every constructor returns a fully validated [`Fan`] and asserts that the
//! recomputed primitive relations match the defining relations of the
//! family, coefficients included.

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::fan::{build_fan, Cone, Fan, FanError, RayId};
use crate::linalg::IntegerVector;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("fan validation failed: {0}")]
    Fan(#[from] FanError),
    #[error("constructed fan does not realize the family relations: {0}")]
    Construction(String),
}

/// Parameters of the Picard-rank-3 family: five positive block sizes
/// `p0..p4` with `sum - 3 = d`, twist vectors `b` (length `p3`) and `c`
/// (length `p2 - 1`, indexed from 2). Normalization moves a minimal entry
/// of `b` and of `c` to the front.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatyrevParams {
    pub p: [u32; 5],
    pub b: Vec<u32>,
    pub c: Vec<u32>,
}

impl BatyrevParams {
    pub fn new(p: [u32; 5], mut b: Vec<u32>, mut c: Vec<u32>) -> Result<Self, CatalogError> {
        if p.contains(&0) {
            return Err(CatalogError::InvalidParams(
                "all five block sizes must be positive".into(),
            ));
        }
        let d = p.iter().sum::<u32>() as i64 - 3;
        if d < 1 {
            return Err(CatalogError::InvalidParams(format!(
                "dimension {d} must be at least 1"
            )));
        }
        if b.len() != p[3] as usize {
            return Err(CatalogError::InvalidParams(format!(
                "b has length {}, expected p3 = {}",
                b.len(),
                p[3]
            )));
        }
        if c.len() + 1 != p[2] as usize {
            return Err(CatalogError::InvalidParams(format!(
                "c has length {}, expected p2 - 1 = {}",
                c.len(),
                p[2] - 1
            )));
        }
        if min_to_front(&mut b) | min_to_front(&mut c) {
            log::debug!("normalized twist parameters to b = {b:?}, c = {c:?}");
        }
        Ok(BatyrevParams { p, b, c })
    }

    pub fn dim(&self) -> usize {
        self.p.iter().sum::<u32>() as usize - 3
    }

    pub fn ray_count(&self) -> usize {
        self.dim() + 3
    }
}

/// Swap the first occurrence of the minimum to the front; true if changed.
fn min_to_front(v: &mut [u32]) -> bool {
    if let Some(pos) = v
        .iter()
        .enumerate()
        .min_by_key(|(i, x)| (**x, *i))
        .map(|(i, _)| i)
    {
        if pos != 0 {
            v.swap(0, pos);
            return true;
        }
    }
    false
}

/// Parameters of a projective-space bundle over a projective space:
/// total dimension `d`, fiber dimension `s - 1`, and `s - 1` non-negative
/// twists sorted non-increasingly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleParams {
    pub d: usize,
    pub s: usize,
    pub twists: Vec<u32>,
}

impl BundleParams {
    pub fn new(d: usize, s: usize, twists: Vec<u32>) -> Result<Self, CatalogError> {
        if s < 2 {
            return Err(CatalogError::InvalidParams(
                "fiber dimension s - 1 must be at least 1".into(),
            ));
        }
        if d < s {
            return Err(CatalogError::InvalidParams(format!(
                "total dimension {d} must exceed the fiber dimension {}",
                s - 1
            )));
        }
        if twists.len() != s - 1 {
            return Err(CatalogError::InvalidParams(format!(
                "expected {} twists, got {}",
                s - 1,
                twists.len()
            )));
        }
        if twists.windows(2).any(|w| w[0] < w[1]) {
            return Err(CatalogError::InvalidParams(
                "twists must be sorted non-increasingly".into(),
            ));
        }
        Ok(BundleParams { d, s, twists })
    }
}

/// The fan of `P^d`: the standard basis plus the negative of its sum, with
/// every `d`-subset spanning a maximal cone.
pub fn projective_space(d: usize) -> Result<Fan, CatalogError> {
    if d < 1 {
        return Err(CatalogError::InvalidParams(
            "projective space needs d >= 1".into(),
        ));
    }
    let mut rays: Vec<(String, IntegerVector)> = (0..d)
        .map(|i| (format!("x{}", i + 1), basis_vector(d, i)))
        .collect();
    rays.push((
        "x0".to_string(),
        IntegerVector::new(vec![BigInt::from(-1); d]),
    ));
    let cones: Vec<Vec<RayId>> = (0..=d)
        .map(|omit| (0..=d).filter(|&r| r != omit).collect())
        .collect();
    Ok(build_fan(d, rays, cones)?)
}

/// The fan of the bundle with relations
/// `x_1 + ... + x_{d-s+2} = a_1 y_1 + ... + a_{s-1} y_{s-1}` and
/// `y_1 + ... + y_s = 0`; maximal cones omit one `x` and one `y`.
pub fn kleinschmidt_bundle(params: &BundleParams) -> Result<Fan, CatalogError> {
    let d = params.d;
    let s = params.s;
    let nx = d - s + 2;
    // y_1..y_{s-1} and x_1..x_{d-s+1} form the standard basis.
    let mut rays: Vec<(String, IntegerVector)> = Vec::with_capacity(nx + s);
    for j in 0..nx - 1 {
        rays.push((format!("x{}", j + 1), basis_vector(d, s - 1 + j)));
    }
    let mut last_x = IntegerVector::zero(d);
    for (i, a) in params.twists.iter().enumerate() {
        last_x.entries[i] = BigInt::from(*a);
    }
    for j in 0..nx - 1 {
        last_x.entries[s - 1 + j] -= BigInt::one();
    }
    rays.push((format!("x{nx}"), last_x));
    for i in 0..s - 1 {
        rays.push((format!("y{}", i + 1), basis_vector(d, i)));
    }
    let mut last_y = IntegerVector::zero(d);
    for i in 0..s - 1 {
        last_y.entries[i] = BigInt::from(-1);
    }
    rays.push((format!("y{s}"), last_y));

    let mut cones = Vec::with_capacity(nx * s);
    for omit_x in 0..nx {
        for omit_y in 0..s {
            cones.push(
                (0..nx + s)
                    .filter(|&r| r != omit_x && r != nx + omit_y)
                    .collect(),
            );
        }
    }
    let fan = build_fan(d, rays, cones)?;

    let x_sum: Vec<(RayId, BigInt)> = params
        .twists
        .iter()
        .enumerate()
        .filter(|(_, a)| **a > 0)
        .map(|(i, a)| (nx + i, BigInt::from(*a)))
        .collect();
    let expected = vec![
        ((0..nx).collect::<Vec<_>>(), x_sum),
        ((nx..nx + s).collect::<Vec<_>>(), Vec::new()),
    ];
    check_relations(&fan, &expected)?;
    Ok(fan)
}

/// The bundle over the projective plane with defining relations
/// `x_1 + x_2 + x_3 = a y_1` and `y_1 + ... + y_{d-1} = 0`.
pub fn example_41(d: usize, a: u32) -> Result<Fan, CatalogError> {
    if d < 3 {
        return Err(CatalogError::InvalidParams(
            "the plane-bundle family needs d >= 3".into(),
        ));
    }
    if a < 1 {
        return Err(CatalogError::InvalidParams(
            "the twist a must be at least 1".into(),
        ));
    }
    let mut twists = vec![0u32; d - 2];
    twists[0] = a;
    kleinschmidt_bundle(&BundleParams::new(d, d - 1, twists)?)
}

/// The Picard-rank-3 family. Rays are grouped `v, y, z, t, u`; the rays
/// other than `v1, z1, u1` are assigned to the standard basis in group
/// order, and `z1`, `u1`, `v1` are solved from the defining relations.
/// Maximal cones are exactly the `d`-subsets containing none of the five
/// collections `V+Y`, `Y+Z`, `Z+T`, `T+U`, `U+V`.
pub fn batyrev_picard3(params: &BatyrevParams) -> Result<Fan, CatalogError> {
    let [p0, p1, p2, p3, p4] = params.p.map(|x| x as usize);
    let d = params.dim();
    let n = params.ray_count();

    // Ray ids in group order.
    let v0 = 0;
    let y0 = v0 + p0;
    let z0 = y0 + p1;
    let t0 = z0 + p2;
    let u0 = t0 + p3;
    debug_assert_eq!(u0 + p4, n);

    // Basis assignment for all rays except v1, z1, u1.
    let mut vectors: Vec<IntegerVector> = vec![IntegerVector::zero(d); n];
    {
        let mut next = 0usize;
        let mut assign = |id: usize, vectors: &mut Vec<IntegerVector>| {
            vectors[id] = basis_vector(d, next);
            next += 1;
        };
        for i in 1..p0 {
            assign(v0 + i, &mut vectors);
        }
        for i in 0..p1 {
            assign(y0 + i, &mut vectors);
        }
        for i in 1..p2 {
            assign(z0 + i, &mut vectors);
        }
        for i in 0..p3 {
            assign(t0 + i, &mut vectors);
        }
        for i in 1..p4 {
            assign(u0 + i, &mut vectors);
        }
        debug_assert_eq!(next, d);
    }
    // z1 from z_1 + ... + z_{p2} + t_1 + ... + t_{p3} = 0.
    let mut z1 = IntegerVector::zero(d);
    for i in 1..p2 {
        z1 = z1.sub(&vectors[z0 + i]);
    }
    for j in 0..p3 {
        z1 = z1.sub(&vectors[t0 + j]);
    }
    vectors[z0] = z1;
    // u1 from y-sum + z-sum = u-sum.
    let mut u1 = IntegerVector::zero(d);
    for i in 0..p1 {
        u1 = u1.add(&vectors[y0 + i]);
    }
    for i in 0..p2 {
        u1 = u1.add(&vectors[z0 + i]);
    }
    for i in 1..p4 {
        u1 = u1.sub(&vectors[u0 + i]);
    }
    vectors[u0] = u1;
    // v1 from v-sum + y-sum = sum c_i z_i + sum (b_j + 1) t_j.
    let mut v1 = IntegerVector::zero(d);
    for (i, c) in params.c.iter().enumerate() {
        v1 = v1.add(&vectors[z0 + 1 + i].scaled(&BigInt::from(*c)));
    }
    for (j, b) in params.b.iter().enumerate() {
        v1 = v1.add(&vectors[t0 + j].scaled(&BigInt::from(b + 1)));
    }
    for i in 1..p0 {
        v1 = v1.sub(&vectors[v0 + i]);
    }
    for i in 0..p1 {
        v1 = v1.sub(&vectors[y0 + i]);
    }
    vectors[v0] = v1;

    let group_names: [(&str, usize, usize); 5] = [
        ("v", v0, p0),
        ("y", y0, p1),
        ("z", z0, p2),
        ("t", t0, p3),
        ("u", u0, p4),
    ];
    let mut rays = vec![(String::new(), IntegerVector::zero(d)); n];
    for (prefix, start, count) in group_names {
        for i in 0..count {
            rays[start + i] = (format!("{prefix}{}", i + 1), vectors[start + i].clone());
        }
    }

    let collections: [Cone; 5] = [
        Cone::from_ids(&ids_range(v0, p0 + p1)),
        Cone::from_ids(&ids_range(y0, p1 + p2)),
        Cone::from_ids(&ids_range(z0, p2 + p3)),
        Cone::from_ids(&ids_range(t0, p3 + p4)),
        Cone::from_ids(&[ids_range(u0, p4), ids_range(v0, p0)].concat()),
    ];
    let mut cones = Vec::new();
    let mut subset: Vec<RayId> = Vec::new();
    enumerate_subsets(n, d, &mut subset, &mut |ids| {
        let cone = Cone::from_ids(ids);
        if collections.iter().all(|pc| !pc.is_subset_of(&cone)) {
            cones.push(ids.to_vec());
        }
    });
    let fan = build_fan(d, rays, cones)?;

    // The recomputed primitive relations must match the defining ones,
    // coefficients included (only strictly positive entries appear).
    let mut rel1 = Vec::new();
    let mut rel5 = Vec::new();
    for (i, c) in params.c.iter().enumerate() {
        if *c > 0 {
            rel1.push((z0 + 1 + i, BigInt::from(*c)));
            rel5.push((z0 + 1 + i, BigInt::from(*c)));
        }
    }
    for (j, b) in params.b.iter().enumerate() {
        rel1.push((t0 + j, BigInt::from(b + 1)));
        if *b > 0 {
            rel5.push((t0 + j, BigInt::from(*b)));
        }
    }
    let rel2 = ids_range(u0, p4)
        .into_iter()
        .map(|r| (r, BigInt::one()))
        .collect();
    let rel4 = ids_range(y0, p1)
        .into_iter()
        .map(|r| (r, BigInt::one()))
        .collect();
    let expected = vec![
        (collections[0].ids(), rel1),
        (collections[1].ids(), rel2),
        (collections[2].ids(), Vec::new()),
        (collections[3].ids(), rel4),
        (collections[4].ids(), rel5),
    ];
    check_relations(&fan, &expected)?;
    Ok(fan)
}

fn join(values: &[u32]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn ids_range(start: usize, len: usize) -> Vec<RayId> {
    (start..start + len).collect()
}

fn basis_vector(d: usize, i: usize) -> IntegerVector {
    let mut v = IntegerVector::zero(d);
    v.entries[i] = BigInt::one();
    v
}

fn enumerate_subsets(
    n: usize,
    size: usize,
    current: &mut Vec<RayId>,
    emit: &mut impl FnMut(&[RayId]),
) {
    if current.len() == size {
        emit(current);
        return;
    }
    let start = current.last().map_or(0, |&x| x + 1);
    let remaining = size - current.len();
    for r in start..=n.saturating_sub(remaining) {
        current.push(r);
        enumerate_subsets(n, size, current, emit);
        current.pop();
    }
}

/// Assert the fan's primitive relations are exactly the expected ones.
fn check_relations(
    fan: &Fan,
    expected: &[(Vec<RayId>, Vec<(RayId, BigInt)>)],
) -> Result<(), CatalogError> {
    let relations = fan.primitive_relations();
    if relations.len() != expected.len() {
        return Err(CatalogError::Construction(format!(
            "found {} primitive relations, expected {}",
            relations.len(),
            expected.len()
        )));
    }
    for (collection, coefficients) in expected {
        let cone = Cone::from_ids(collection);
        let found = relations
            .iter()
            .find(|r| r.collection.rays == cone)
            .ok_or_else(|| {
                CatalogError::Construction(format!(
                    "missing primitive collection {collection:?}"
                ))
            })?;
        if &found.coefficients != coefficients {
            return Err(CatalogError::Construction(format!(
                "relation of {collection:?} has coefficients {:?}, expected {coefficients:?}",
                found.coefficients
            )));
        }
    }
    Ok(())
}

/// The four families, with their command-line names.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    ProjectiveSpace,
    Kleinschmidt,
    Example41,
    Batyrev3,
}

impl Family {
    pub fn cli_name(&self) -> &'static str {
        match self {
            Family::ProjectiveSpace => "pn",
            Family::Kleinschmidt => "kleinschmidt",
            Family::Example41 => "example41",
            Family::Batyrev3 => "batyrev3",
        }
    }

    pub fn from_cli_name(name: &str) -> Option<Family> {
        match name {
            "pn" => Some(Family::ProjectiveSpace),
            "kleinschmidt" => Some(Family::Kleinschmidt),
            "example41" => Some(Family::Example41),
            "batyrev3" => Some(Family::Batyrev3),
            _ => None,
        }
    }
}

/// A concrete parameter point of one family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyParams {
    ProjectiveSpace { d: usize },
    Kleinschmidt(BundleParams),
    Example41 { d: usize, a: u32 },
    Batyrev3(BatyrevParams),
}

impl FamilyParams {
    pub fn family(&self) -> Family {
        match self {
            FamilyParams::ProjectiveSpace { .. } => Family::ProjectiveSpace,
            FamilyParams::Kleinschmidt(_) => Family::Kleinschmidt,
            FamilyParams::Example41 { .. } => Family::Example41,
            FamilyParams::Batyrev3(_) => Family::Batyrev3,
        }
    }

    pub fn construct(&self) -> Result<Fan, CatalogError> {
        match self {
            FamilyParams::ProjectiveSpace { d } => projective_space(*d),
            FamilyParams::Kleinschmidt(params) => kleinschmidt_bundle(params),
            FamilyParams::Example41 { d, a } => example_41(*d, *a),
            FamilyParams::Batyrev3(params) => batyrev_picard3(params),
        }
    }

    pub fn label(&self) -> String {
        match self {
            FamilyParams::ProjectiveSpace { d } => format!("pn(d={d})"),
            FamilyParams::Kleinschmidt(p) => {
                format!("kleinschmidt(d={},s={},a=[{}])", p.d, p.s, join(&p.twists))
            }
            FamilyParams::Example41 { d, a } => format!("example41(d={d},a={a})"),
            FamilyParams::Batyrev3(p) => {
                format!(
                    "batyrev3(p=[{}],b=[{}],c=[{}])",
                    join(&p.p),
                    join(&p.b),
                    join(&p.c)
                )
            }
        }
    }
}

/// Grid bounds for [`grid`]; unused fields are ignored by a family.
#[derive(Clone, Debug)]
pub struct GridBounds {
    pub d_min: usize,
    pub d_max: usize,
    pub s_max: usize,
    pub twist_max: u32,
    pub a_max: u32,
    pub p_max: u32,
    pub p2_max: u32,
    pub b_max: u32,
    pub c_max: u32,
}

impl Default for GridBounds {
    fn default() -> Self {
        GridBounds {
            d_min: 2,
            d_max: 6,
            s_max: 5,
            twist_max: 2,
            a_max: 3,
            p_max: 2,
            p2_max: 3,
            b_max: 3,
            c_max: 3,
        }
    }
}

/// Deterministic parameter enumeration for one family. Every member
/// constructs successfully; construction itself validates the fan.
pub fn grid(family: Family, bounds: &GridBounds) -> Vec<FamilyParams> {
    match family {
        Family::ProjectiveSpace => (bounds.d_min.max(1)..=bounds.d_max)
            .map(|d| FamilyParams::ProjectiveSpace { d })
            .collect(),
        Family::Kleinschmidt => {
            let mut out = Vec::new();
            for d in bounds.d_min.max(2)..=bounds.d_max {
                for s in 2..=bounds.s_max.min(d) {
                    for twists in non_increasing_vectors(s - 1, bounds.twist_max) {
                        out.push(FamilyParams::Kleinschmidt(
                            BundleParams::new(d, s, twists).expect("grid parameters are valid"),
                        ));
                    }
                }
            }
            out
        }
        Family::Example41 => {
            let mut out = Vec::new();
            for d in bounds.d_min.max(3)..=bounds.d_max {
                for a in 1..=bounds.a_max {
                    out.push(FamilyParams::Example41 { d, a });
                }
            }
            out
        }
        Family::Batyrev3 => {
            let mut out = Vec::new();
            for p0 in 1..=bounds.p_max {
                for p1 in 1..=bounds.p_max {
                    for p2 in 1..=bounds.p2_max {
                        for p3 in 1..=bounds.p_max {
                            for p4 in 1..=bounds.p_max {
                                for b in min_first_vectors(p3 as usize, bounds.b_max) {
                                    for c in min_first_vectors(p2 as usize - 1, bounds.c_max) {
                                        out.push(FamilyParams::Batyrev3(
                                            BatyrevParams::new([p0, p1, p2, p3, p4], b.clone(), c)
                                                .expect("grid parameters are valid"),
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
            out
        }
    }
}

/// All non-increasing vectors of the given length with entries `0..=max`.
pub fn non_increasing_vectors(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(len: usize, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in (0..=cap).rev() {
            cur.push(v);
            rec(len, v, cur, out);
            cur.pop();
        }
    }
    rec(len, max, &mut cur, &mut out);
    out
}

/// All vectors of the given length with entries `0..=max` whose first entry
/// is minimal (the normalized form of the rank-3 twist vectors).
pub fn min_first_vectors(len: usize, max: u32) -> Vec<Vec<u32>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    for first in 0..=max {
        cur.push(first);
        fn rec(len: usize, lo: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if cur.len() == len {
                out.push(cur.clone());
                return;
            }
            for v in lo..=max {
                cur.push(v);
                rec(len, lo, max, cur, out);
                cur.pop();
            }
        }
        rec(len, first, max, &mut cur, &mut out);
        cur.pop();
    }
    out
}
