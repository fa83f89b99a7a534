//! Smooth complete fans: validation, face and wall enumeration, primitive
//! collections and primitive relations.
//!
//! A [`Fan`] is immutable once built. [`build_fan`] validates everything up
//! front (primitivity of rays, smoothness of the maximal cones, completeness)
//! and eagerly computes the derived data every later query needs: all faces
//! by dimension, walls with their two adjacent maximal cones and their
//! integer relations, dual bases of the maximal cones, and the primitive
//! collections with their relations.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{
    determinant, dual_basis, lp_feasible_strict, Constraint, Covector, IntegerVector, Rational,
};

pub type RayId = usize;

/// Hard cap on the number of rays; cones are stored as 64-bit masks.
pub const MAX_RAYS: usize = 64;

/// Seed for the randomized completeness audit; fixed so validation is
/// deterministic.
const AUDIT_SEED: u64 = 0x544f_5249_435f_4641;
const AUDIT_POINTS: usize = 100;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FanError {
    #[error("fan rank must be at least 1")]
    RankZero,
    #[error("ray {index} has length {got}, expected rank {rank}")]
    RayWrongLength { index: usize, got: usize, rank: usize },
    #[error("ray {index} ({vector}) is not primitive")]
    RayNotPrimitive { index: usize, vector: String },
    #[error("rays {first} and {second} are equal")]
    DuplicateRay { first: usize, second: usize },
    #[error("ray names {first} and {second} collide")]
    DuplicateName { first: usize, second: usize },
    #[error("too many rays: {got} (limit {MAX_RAYS})")]
    TooManyRays { got: usize },
    #[error("maximal cone {index} has {got} rays, expected rank {rank}")]
    ConeWrongSize { index: usize, got: usize, rank: usize },
    #[error("maximal cone {index} references ray {ray} out of range")]
    RayIndexOutOfRange { index: usize, ray: usize },
    #[error("maximal cone {index} repeats a ray")]
    ConeRepeatsRay { index: usize },
    #[error("maximal cones {first} and {second} are equal")]
    DuplicateCone { first: usize, second: usize },
    #[error("no maximal cones given")]
    NoMaximalCones,
    #[error("ray {index} is not used by any maximal cone")]
    UnusedRay { index: usize },
    #[error("maximal cone {index} is not smooth (det = {det})")]
    NotSmooth { index: usize, det: String },
    #[error("fan is not complete: a codimension-1 face lies in {count} maximal cones")]
    NotComplete { count: usize },
    #[error("fan is not complete: dual graph of maximal cones is disconnected")]
    Disconnected,
    #[error("fan is not complete: audit point {point} lies in no maximal cone")]
    AuditPointUncovered { point: String },
    #[error("{0} is not a wall of this fan")]
    NotAWall(String),
    #[error("{0} is not a cone of this fan")]
    NotACone(String),
    #[error("corrupted fan invariant: {0}")]
    Corrupt(String),
}

/// A set of ray indices, packed into a 64-bit mask.
///
/// Ordering is lexicographic on the sorted list of ray ids (for equal-sized
/// sets this is the order used to pick deterministic witnesses); a set that
/// is a strict prefix of another compares smaller.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Cone(u64);

impl Cone {
    pub const EMPTY: Cone = Cone(0);

    pub fn from_ids(ids: &[RayId]) -> Cone {
        let mut mask = 0u64;
        for &i in ids {
            debug_assert!(i < MAX_RAYS);
            mask |= 1 << i;
        }
        Cone(mask)
    }

    pub fn ids(&self) -> Vec<RayId> {
        self.iter().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = RayId> {
        let mut mask = self.0;
        std::iter::from_fn(move || {
            if mask == 0 {
                None
            } else {
                let i = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                Some(i)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, ray: RayId) -> bool {
        self.0 >> ray & 1 == 1
    }

    pub fn with(&self, ray: RayId) -> Cone {
        Cone(self.0 | 1 << ray)
    }

    pub fn without(&self, ray: RayId) -> Cone {
        Cone(self.0 & !(1 << ray))
    }

    pub fn union(&self, other: Cone) -> Cone {
        Cone(self.0 | other.0)
    }

    pub fn is_subset_of(&self, other: &Cone) -> bool {
        self.0 & !other.0 == 0
    }
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let t = diff.trailing_zeros();
        if self.0 >> t & 1 == 1 {
            // self owns the smallest differing ray; it comes first unless
            // other is exhausted above t (then other is a strict prefix).
            if other.0 >> t == 0 {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        } else if self.0 >> t == 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// One ray of the fan: a primitive lattice vector with a short label.
#[derive(Clone, Debug)]
pub struct Ray {
    pub id: RayId,
    pub name: String,
    pub vector: IntegerVector,
}

/// The unique integer relation around a wall:
/// `y1 + y2 + a_1 x_1 + ... + a_{d-1} x_{d-1} = 0`
/// where the `x_i` span the wall and `y1`, `y2` are the opposite rays of the
/// two adjacent maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallRelation {
    pub wall: Cone,
    pub opposite: (RayId, RayId),
    /// Coefficients `a_i` keyed by the wall rays, in ray-id order.
    pub coefficients: Vec<(RayId, BigInt)>,
    /// The same relation as a vector over all rays of the fan: +1 on the
    /// opposite rays, `a_i` on the wall rays, 0 elsewhere. This is the
    /// numerical class of the wall curve in `A_1(X)`.
    pub vector: Vec<BigInt>,
}

impl WallRelation {
    /// `(-K_X . C_tau) = 2 + a_1 + ... + a_{d-1}`.
    pub fn anticanonical_degree(&self) -> BigInt {
        self.coefficients
            .iter()
            .fold(BigInt::from(2), |acc, (_, a)| acc + a)
    }
}

/// A minimal set of rays spanning no cone of the fan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrimitiveCollection {
    pub rays: Cone,
}

/// The expansion of the sum of a primitive collection in the generators of
/// the unique cone whose relative interior contains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveRelation {
    pub collection: PrimitiveCollection,
    /// `sigma(P)`; the empty cone when the collection sums to zero.
    pub cone: Cone,
    /// Strictly positive integer coefficients keyed by the rays of `cone`.
    pub coefficients: Vec<(RayId, BigInt)>,
    /// `|P| - sum of coefficients`; the anticanonical degree of the relation.
    pub degree: BigInt,
}

impl PrimitiveRelation {
    /// A relation with empty right-hand side (the collection sums to zero).
    pub fn is_fiber_type(&self) -> bool {
        self.cone.is_empty()
    }
}

#[derive(Debug)]
struct Wall {
    cone: Cone,
    /// Indices into `maximal_cones` of the two cones sharing this wall.
    adjacent: (usize, usize),
    relation: WallRelation,
}

/// A validated smooth complete fan with all derived data precomputed.
#[derive(Debug)]
pub struct Fan {
    rank: usize,
    rays: Vec<Ray>,
    maximal_cones: Vec<Cone>,
    /// All faces grouped by dimension (0..=rank), each list sorted.
    faces: Vec<Vec<Cone>>,
    face_sets: Vec<HashSet<Cone>>,
    walls: Vec<Wall>,
    wall_index: HashMap<Cone, usize>,
    /// For every face, the smallest index of a maximal cone containing it.
    enclosing_max: HashMap<Cone, usize>,
    /// Per maximal cone: dual functionals aligned with the sorted ray ids.
    dual_bases: Vec<Vec<Covector>>,
    /// `dual_pairings[c][pos][ray] = <m_pos, ray>` for maximal cone `c`.
    dual_pairings: Vec<Vec<Vec<BigInt>>>,
    collections: Vec<PrimitiveCollection>,
    relations: Vec<PrimitiveRelation>,
}

/// Validate raw ray and cone data and build the fan.
pub fn build_fan(
    rank: usize,
    rays: Vec<(String, IntegerVector)>,
    maximal_cones: Vec<Vec<RayId>>,
) -> Result<Fan, FanError> {
    if rank == 0 {
        return Err(FanError::RankZero);
    }
    if rays.len() > MAX_RAYS {
        return Err(FanError::TooManyRays { got: rays.len() });
    }
    for (i, (_, v)) in rays.iter().enumerate() {
        if v.len() != rank {
            return Err(FanError::RayWrongLength {
                index: i,
                got: v.len(),
                rank,
            });
        }
        if !v.is_primitive() {
            return Err(FanError::RayNotPrimitive {
                index: i,
                vector: v.to_string(),
            });
        }
    }
    for i in 0..rays.len() {
        for j in i + 1..rays.len() {
            if rays[i].1 == rays[j].1 {
                return Err(FanError::DuplicateRay { first: i, second: j });
            }
            if rays[i].0 == rays[j].0 {
                return Err(FanError::DuplicateName { first: i, second: j });
            }
        }
    }
    if maximal_cones.is_empty() {
        return Err(FanError::NoMaximalCones);
    }
    let mut cones: Vec<Cone> = Vec::with_capacity(maximal_cones.len());
    for (ci, ids) in maximal_cones.iter().enumerate() {
        for &r in ids {
            if r >= rays.len() {
                return Err(FanError::RayIndexOutOfRange { index: ci, ray: r });
            }
        }
        let cone = Cone::from_ids(ids);
        if cone.dim() != ids.len() {
            return Err(FanError::ConeRepeatsRay { index: ci });
        }
        if ids.len() != rank {
            return Err(FanError::ConeWrongSize {
                index: ci,
                got: ids.len(),
                rank,
            });
        }
        cones.push(cone);
    }
    for i in 0..cones.len() {
        for j in i + 1..cones.len() {
            if cones[i] == cones[j] {
                return Err(FanError::DuplicateCone { first: i, second: j });
            }
        }
    }
    let mut used = Cone::EMPTY;
    for c in &cones {
        used = used.union(*c);
    }
    for i in 0..rays.len() {
        if !used.contains(i) {
            return Err(FanError::UnusedRay { index: i });
        }
    }

    let rays: Vec<Ray> = rays
        .into_iter()
        .enumerate()
        .map(|(id, (name, vector))| Ray { id, name, vector })
        .collect();

    // Smoothness and dual bases: the generator matrix of every maximal cone
    // must be unimodular, and then its inverse transpose is integral.
    let mut dual_bases = Vec::with_capacity(cones.len());
    for (ci, cone) in cones.iter().enumerate() {
        let gens: Vec<IntegerVector> = cone.iter().map(|r| rays[r].vector.clone()).collect();
        let det = determinant(&gens).expect("generator matrix is square");
        if !det.abs().is_one() {
            return Err(FanError::NotSmooth {
                index: ci,
                det: det.to_string(),
            });
        }
        let duals = dual_basis(&gens).expect("unimodular basis inverts");
        dual_bases.push(duals);
    }
    let dual_pairings: Vec<Vec<Vec<BigInt>>> = dual_bases
        .iter()
        .map(|duals| {
            duals
                .iter()
                .map(|m| rays.iter().map(|r| m.pair(&r.vector)).collect())
                .collect()
        })
        .collect();

    // Faces by dimension, with the smallest enclosing maximal cone of each.
    let mut face_sets: Vec<HashSet<Cone>> = vec![HashSet::new(); rank + 1];
    let mut enclosing_max: HashMap<Cone, usize> = HashMap::new();
    for (ci, cone) in cones.iter().enumerate() {
        let ids = cone.ids();
        for sub in 0u64..(1 << rank) {
            let mut face = Cone::EMPTY;
            for (bit, &r) in ids.iter().enumerate() {
                if sub >> bit & 1 == 1 {
                    face = face.with(r);
                }
            }
            face_sets[face.dim()].insert(face);
            enclosing_max.entry(face).or_insert(ci);
        }
    }
    let mut faces: Vec<Vec<Cone>> = face_sets
        .iter()
        .map(|s| {
            let mut v: Vec<Cone> = s.iter().copied().collect();
            v.sort();
            v
        })
        .collect();
    // Deterministic maximal-cone order everywhere below: sort and remap.
    faces[rank].sort();

    // Walls: every codimension-1 face must lie in exactly two maximal cones.
    let mut walls = Vec::new();
    let mut wall_index = HashMap::new();
    for &wall_cone in &faces[rank - 1] {
        let adj: Vec<usize> = cones
            .iter()
            .enumerate()
            .filter(|(_, c)| wall_cone.is_subset_of(c))
            .map(|(i, _)| i)
            .collect();
        if adj.len() != 2 {
            return Err(FanError::NotComplete { count: adj.len() });
        }
        let relation = wall_relation_from(
            rank,
            &rays,
            &cones,
            &dual_pairings,
            wall_cone,
            (adj[0], adj[1]),
        )?;
        wall_index.insert(wall_cone, walls.len());
        walls.push(Wall {
            cone: wall_cone,
            adjacent: (adj[0], adj[1]),
            relation,
        });
    }

    // Dual graph connectivity.
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); cones.len()];
    for w in &walls {
        neighbors[w.adjacent.0].push(w.adjacent.1);
        neighbors[w.adjacent.1].push(w.adjacent.0);
    }
    let mut seen = vec![false; cones.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(c) = stack.pop() {
        for &n in &neighbors[c] {
            if !seen[n] {
                seen[n] = true;
                stack.push(n);
            }
        }
    }
    if !seen.iter().all(|&s| s) {
        return Err(FanError::Disconnected);
    }

    // Randomized audit: sampled lattice points must lie in some maximal cone.
    // Wall pairing plus connectivity is the deterministic criterion; the
    // audit guards against implementation bugs in the derived data.
    let mut rng = ChaCha8Rng::seed_from_u64(AUDIT_SEED);
    for _ in 0..AUDIT_POINTS {
        let point = IntegerVector::from_i64(
            &(0..rank).map(|_| rng.gen_range(-50i64..=50)).collect::<Vec<_>>(),
        );
        let covered = (0..cones.len()).any(|ci| {
            dual_bases[ci]
                .iter()
                .all(|m| m.pair(&point) >= BigInt::zero())
        });
        if !covered {
            return Err(FanError::AuditPointUncovered {
                point: point.to_string(),
            });
        }
    }

    let mut fan = Fan {
        rank,
        rays,
        maximal_cones: cones,
        faces,
        face_sets,
        walls,
        wall_index,
        enclosing_max,
        dual_bases,
        dual_pairings,
        collections: Vec::new(),
        relations: Vec::new(),
    };
    fan.collections = fan.find_primitive_collections();
    fan.relations = fan
        .collections
        .iter()
        .map(|p| fan.compute_primitive_relation(*p))
        .collect::<Result<_, _>>()?;
    Ok(fan)
}

/// Compute the wall relation from the dual basis of the first adjacent cone.
fn wall_relation_from(
    rank: usize,
    rays: &[Ray],
    cones: &[Cone],
    dual_pairings: &[Vec<Vec<BigInt>>],
    wall: Cone,
    adjacent: (usize, usize),
) -> Result<WallRelation, FanError> {
    let (c1, c2) = adjacent;
    let y1 = cones[c1]
        .iter()
        .find(|r| !wall.contains(*r))
        .expect("maximal cone strictly contains its wall");
    let y2 = cones[c2]
        .iter()
        .find(|r| !wall.contains(*r))
        .expect("maximal cone strictly contains its wall");
    let gen_ids = cones[c1].ids();
    let mut coefficients = Vec::with_capacity(rank - 1);
    for (pos, &g) in gen_ids.iter().enumerate() {
        let c = &dual_pairings[c1][pos][y2];
        if g == y1 {
            if *c != BigInt::from(-1) {
                return Err(FanError::Corrupt(format!(
                    "wall relation: coefficient of the opposite ray is {c}, expected -1"
                )));
            }
        } else {
            coefficients.push((g, -c));
        }
    }
    let mut vector = vec![BigInt::zero(); rays.len()];
    vector[y1] = BigInt::one();
    vector[y2] = BigInt::one();
    for (r, a) in &coefficients {
        vector[*r] = a.clone();
    }
    // The relation must vanish exactly.
    let mut acc = IntegerVector::zero(rank);
    for (r, coeff) in vector.iter().enumerate() {
        if !coeff.is_zero() {
            acc = acc.add(&rays[r].vector.scaled(coeff));
        }
    }
    if !acc.is_zero() {
        return Err(FanError::Corrupt(
            "wall relation does not sum to zero".into(),
        ));
    }
    Ok(WallRelation {
        wall,
        opposite: (y1, y2),
        coefficients,
        vector,
    })
}

impl Fan {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn ray(&self, id: RayId) -> &Ray {
        &self.rays[id]
    }

    /// Look a ray up by its label.
    pub fn ray_by_name(&self, name: &str) -> Option<&Ray> {
        self.rays.iter().find(|r| r.name == name)
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal_cones
    }

    /// All cones of the given dimension, sorted.
    pub fn cones_of_dim(&self, dim: usize) -> &[Cone] {
        &self.faces[dim]
    }

    pub fn is_cone(&self, cone: &Cone) -> bool {
        cone.dim() <= self.rank && self.face_sets[cone.dim()].contains(cone)
    }

    pub fn walls(&self) -> impl Iterator<Item = &Cone> {
        self.walls.iter().map(|w| &w.cone)
    }

    /// The smallest-index maximal cone containing the given face.
    pub fn enclosing_maximal_cone(&self, cone: &Cone) -> Option<usize> {
        self.enclosing_max.get(cone).copied()
    }

    /// Dual functionals of a maximal cone, aligned with its sorted ray ids.
    pub fn dual_basis_of(&self, max_cone_index: usize) -> &[Covector] {
        &self.dual_bases[max_cone_index]
    }

    /// `<m_pos, ray>` for the dual basis of a maximal cone.
    pub fn dual_pairing(&self, max_cone_index: usize, pos: usize, ray: RayId) -> &BigInt {
        &self.dual_pairings[max_cone_index][pos][ray]
    }

    /// Re-run the completeness criterion (wall pairing, connectivity, audit).
    /// Always true for a built fan; exposed so the criterion itself stays
    /// testable against the builder's error paths.
    pub fn is_complete(&self) -> bool {
        self.faces[self.rank - 1].iter().all(|w| {
            self.maximal_cones
                .iter()
                .filter(|c| w.is_subset_of(c))
                .count()
                == 2
        })
    }

    /// Toric Nakai-Moishezon: the fan is projective iff some rational divisor
    /// pairs strictly positively with every wall curve. Returns the ample
    /// divisor coefficients when feasible.
    pub fn projectivity_witness(&self) -> Option<Vec<Rational>> {
        let mut distinct: Vec<Vec<BigInt>> = Vec::new();
        let mut seen = HashSet::new();
        for w in &self.walls {
            if seen.insert(w.relation.vector.clone()) {
                distinct.push(w.relation.vector.clone());
            }
        }
        let constraints: Vec<Constraint> = distinct
            .into_iter()
            .map(|v| Constraint::strictly_positive(Covector::new(v)))
            .collect();
        lp_feasible_strict(self.rays.len(), &constraints)
    }

    pub fn is_projective(&self) -> bool {
        self.projectivity_witness().is_some()
    }

    /// The wall relation of a codimension-1 cone.
    pub fn wall_relation(&self, wall: &Cone) -> Result<&WallRelation, FanError> {
        let idx = self
            .wall_index
            .get(wall)
            .ok_or_else(|| FanError::NotAWall(format!("{:?}", wall.ids())))?;
        Ok(&self.walls[*idx].relation)
    }

    /// Indices of the two maximal cones adjacent to a wall.
    pub fn wall_adjacent_cones(&self, wall: &Cone) -> Result<(usize, usize), FanError> {
        let idx = self
            .wall_index
            .get(wall)
            .ok_or_else(|| FanError::NotAWall(format!("{:?}", wall.ids())))?;
        Ok(self.walls[*idx].adjacent)
    }

    /// `(-K_X . C_tau) = 2 + sum of wall coefficients`.
    pub fn anticanonical_degree_of_wall(&self, wall: &Cone) -> Result<BigInt, FanError> {
        Ok(self.wall_relation(wall)?.anticanonical_degree())
    }

    pub fn primitive_collections(&self) -> &[PrimitiveCollection] {
        &self.collections
    }

    pub fn primitive_relations(&self) -> &[PrimitiveRelation] {
        &self.relations
    }

    pub fn primitive_relation_of(&self, collection: &PrimitiveCollection) -> Option<&PrimitiveRelation> {
        self.relations
            .iter()
            .find(|r| r.collection == *collection)
    }

    /// Every primitive relation has strictly positive anticanonical degree.
    pub fn is_fano(&self) -> bool {
        self.relations.iter().all(|r| r.degree > BigInt::zero())
    }

    /// Every wall curve has non-negative anticanonical degree.
    pub fn is_weak_fano(&self) -> bool {
        self.walls
            .iter()
            .all(|w| w.relation.anticanonical_degree() >= BigInt::zero())
    }

    /// Some primitive relation has empty right-hand side.
    pub fn has_fiber_type_relation(&self) -> bool {
        self.relations.iter().any(|r| r.is_fiber_type())
    }

    /// Breadth-first search over subset size: a candidate of size s is a set
    /// all of whose (s-1)-subsets are faces; it is a primitive collection
    /// exactly when it is not itself a face.
    fn find_primitive_collections(&self) -> Vec<PrimitiveCollection> {
        let n = self.rays.len();
        let mut found = Vec::new();
        // Layers of sets whose proper subsets are all faces, by size.
        let mut layer: Vec<Cone> = self.faces[1].clone();
        for size in 2..=self.rank + 1 {
            let mut next = Vec::new();
            for &base in &layer {
                if !self.is_cone(&base) {
                    continue;
                }
                let max_id = base.ids().last().copied().unwrap_or(0);
                for r in max_id + 1..n {
                    let cand = base.with(r);
                    let all_subsets_are_faces = cand
                        .iter()
                        .all(|x| self.is_cone(&cand.without(x)));
                    if !all_subsets_are_faces {
                        continue;
                    }
                    if self.is_cone(&cand) {
                        next.push(cand);
                    } else {
                        found.push(PrimitiveCollection { rays: cand });
                    }
                }
            }
            let _ = size;
            layer = next;
            if layer.is_empty() {
                break;
            }
        }
        found.sort();
        found
    }

    /// Locate `sigma(P)` by scanning maximal cones for one whose coordinates
    /// of the collection sum are all non-negative; the strictly positive
    /// coordinates pick out the generators of `sigma(P)`.
    fn compute_primitive_relation(
        &self,
        collection: PrimitiveCollection,
    ) -> Result<PrimitiveRelation, FanError> {
        let sum = collection
            .rays
            .iter()
            .fold(IntegerVector::zero(self.rank), |acc, r| {
                acc.add(&self.rays[r].vector)
            });
        let size = BigInt::from(collection.rays.dim());
        if sum.is_zero() {
            return Ok(PrimitiveRelation {
                collection,
                cone: Cone::EMPTY,
                coefficients: Vec::new(),
                degree: size,
            });
        }
        for (ci, cone) in self.maximal_cones.iter().enumerate() {
            let coords: Vec<BigInt> = self.dual_bases[ci].iter().map(|m| m.pair(&sum)).collect();
            if coords.iter().any(|c| c.sign() == num_bigint::Sign::Minus) {
                continue;
            }
            let mut sigma = Cone::EMPTY;
            let mut coefficients = Vec::new();
            let mut total = BigInt::zero();
            for (g, c) in cone.iter().zip(coords) {
                if c.is_zero() {
                    continue;
                }
                if c < BigInt::one() {
                    return Err(FanError::Corrupt(
                        "primitive relation coefficient below 1".into(),
                    ));
                }
                sigma = sigma.with(g);
                total += &c;
                coefficients.push((g, c));
            }
            if collection.rays.iter().any(|r| sigma.contains(r)) {
                return Err(FanError::Corrupt(
                    "primitive collection meets its own relation cone".into(),
                ));
            }
            return Ok(PrimitiveRelation {
                collection,
                cone: sigma,
                coefficients,
                degree: size - total,
            });
        }
        Err(FanError::Corrupt(
            "collection sum lies in no maximal cone; fan is not complete".into(),
        ))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn iv(v: &[i64]) -> IntegerVector {
        IntegerVector::from_i64(v)
    }

    fn named(rays: &[(&str, Vec<i64>)]) -> Vec<(String, IntegerVector)> {
        rays.iter()
            .map(|(n, v)| (n.to_string(), iv(v)))
            .collect()
    }

    pub(crate) fn p2() -> Fan {
        build_fan(
            2,
            named(&[
                ("x1", vec![1, 0]),
                ("x2", vec![0, 1]),
                ("x0", vec![-1, -1]),
            ]),
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap()
    }

    pub(crate) fn p1xp1() -> Fan {
        build_fan(
            2,
            named(&[
                ("x1", vec![1, 0]),
                ("x2", vec![-1, 0]),
                ("y1", vec![0, 1]),
                ("y2", vec![0, -1]),
            ]),
            vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]],
        )
        .unwrap()
    }

    pub(crate) fn hirzebruch(a: i64) -> Fan {
        build_fan(
            2,
            named(&[
                ("x1", vec![1, 0]),
                ("y1", vec![0, 1]),
                ("x2", vec![-1, a]),
                ("y2", vec![0, -1]),
            ]),
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        )
        .unwrap()
    }

    /// The classical twisted subdivision of the projective-space fan: the
    /// three edges through the far vertex are subdivided and the adjacent
    /// cones split cyclically, so no strictly convex support function
    /// exists. Smooth and complete but not projective.
    pub(crate) fn twisted_blowup() -> Fan {
        build_fan(
            3,
            named(&[
                ("v1", vec![1, 0, 0]),
                ("v2", vec![0, 1, 0]),
                ("v3", vec![0, 0, 1]),
                ("v0", vec![-1, -1, -1]),
                ("m1", vec![0, -1, -1]),
                ("m2", vec![-1, 0, -1]),
                ("m3", vec![-1, -1, 0]),
            ]),
            vec![
                vec![0, 1, 2],
                vec![0, 1, 4],
                vec![0, 2, 6],
                vec![0, 4, 6],
                vec![1, 2, 5],
                vec![1, 4, 5],
                vec![2, 5, 6],
                vec![3, 4, 5],
                vec![3, 4, 6],
                vec![3, 5, 6],
            ],
        )
        .unwrap()
    }

    #[test]
    fn cone_ordering_is_lex_on_ids() {
        let a = Cone::from_ids(&[0, 3]);
        let b = Cone::from_ids(&[1, 2]);
        assert!(a < b);
        assert!(Cone::from_ids(&[0]) < Cone::from_ids(&[0, 1]));
        assert!(Cone::from_ids(&[1]) > Cone::from_ids(&[0, 5]));
    }

    #[test]
    fn p2_builds_and_has_expected_shape() {
        let fan = p2();
        assert_eq!(fan.rank(), 2);
        assert_eq!(fan.maximal_cones().len(), 3);
        assert_eq!(fan.cones_of_dim(1).len(), 3);
        assert_eq!(fan.cones_of_dim(0), &[Cone::EMPTY]);
        assert!(fan.is_complete());
    }

    #[test]
    fn missing_cone_is_incomplete() {
        let err = build_fan(
            2,
            named(&[
                ("x1", vec![1, 0]),
                ("x2", vec![0, 1]),
                ("x0", vec![-1, -1]),
            ]),
            vec![vec![0, 1], vec![1, 2]],
        )
        .unwrap_err();
        assert!(matches!(err, FanError::NotComplete { count: 1 }));
    }

    #[test]
    fn single_orthant_is_incomplete() {
        let err = build_fan(
            2,
            named(&[("x1", vec![1, 0]), ("x2", vec![0, 1])]),
            vec![vec![0, 1]],
        )
        .unwrap_err();
        assert!(matches!(err, FanError::NotComplete { count: 1 }));
    }

    #[test]
    fn non_primitive_ray_is_rejected() {
        let err = build_fan(
            2,
            named(&[("x1", vec![2, 0]), ("x2", vec![0, 1])]),
            vec![vec![0, 1]],
        )
        .unwrap_err();
        assert!(matches!(err, FanError::RayNotPrimitive { index: 0, .. }));
    }

    #[test]
    fn duplicate_ray_is_rejected() {
        let err = build_fan(
            2,
            named(&[("a", vec![1, 0]), ("b", vec![1, 0])]),
            vec![vec![0, 1]],
        )
        .unwrap_err();
        assert!(matches!(err, FanError::DuplicateRay { .. }));
    }

    #[test]
    fn non_smooth_cone_is_rejected() {
        // (1,0) and (1,2) span a cone of index 2.
        let err = build_fan(
            2,
            named(&[
                ("a", vec![1, 0]),
                ("b", vec![1, 2]),
                ("c", vec![-1, -1]),
            ]),
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap_err();
        assert!(matches!(err, FanError::NotSmooth { index: 0, .. }));
    }

    #[test]
    fn p2_wall_relation() {
        let fan = p2();
        let wall = Cone::from_ids(&[0]);
        let rel = fan.wall_relation(&wall).unwrap();
        assert_eq!(rel.opposite, (1, 2));
        assert_eq!(rel.coefficients, vec![(0, BigInt::from(1))]);
        assert_eq!(rel.anticanonical_degree(), BigInt::from(3));
    }

    #[test]
    fn p1xp1_wall_relation_is_zero() {
        let fan = p1xp1();
        let rel = fan.wall_relation(&Cone::from_ids(&[0])).unwrap();
        assert_eq!(rel.coefficients, vec![(0, BigInt::zero())]);
        assert_eq!(rel.anticanonical_degree(), BigInt::from(2));
    }

    #[test]
    fn hirzebruch_wall_relation_carries_minus_a() {
        for a in 1..=3i64 {
            let fan = hirzebruch(a);
            let rel = fan.wall_relation(&Cone::from_ids(&[1])).unwrap();
            assert_eq!(rel.coefficients, vec![(1, BigInt::from(-a))]);
            assert_eq!(rel.anticanonical_degree(), BigInt::from(2 - a));
        }
    }

    #[test]
    fn anticanonical_degrees() {
        assert_eq!(
            p2().anticanonical_degree_of_wall(&Cone::from_ids(&[1]))
                .unwrap(),
            BigInt::from(3)
        );
        assert_eq!(
            p1xp1()
                .anticanonical_degree_of_wall(&Cone::from_ids(&[2]))
                .unwrap(),
            BigInt::from(2)
        );
        assert_eq!(
            hirzebruch(2)
                .anticanonical_degree_of_wall(&Cone::from_ids(&[1]))
                .unwrap(),
            BigInt::zero()
        );
    }

    #[test]
    fn not_a_wall_is_reported() {
        let fan = p2();
        assert!(matches!(
            fan.wall_relation(&Cone::from_ids(&[0, 1])),
            Err(FanError::NotAWall(_))
        ));
    }

    #[test]
    fn p2_has_one_primitive_collection() {
        let fan = p2();
        let pcs = fan.primitive_collections();
        assert_eq!(pcs.len(), 1);
        assert_eq!(pcs[0].rays, Cone::from_ids(&[0, 1, 2]));
        let rel = &fan.primitive_relations()[0];
        assert!(rel.is_fiber_type());
        assert_eq!(rel.degree, BigInt::from(3));
    }

    #[test]
    fn p1xp1_has_two_primitive_collections() {
        let fan = p1xp1();
        let pcs = fan.primitive_collections();
        assert_eq!(pcs.len(), 2);
        assert_eq!(pcs[0].rays, Cone::from_ids(&[0, 1]));
        assert_eq!(pcs[1].rays, Cone::from_ids(&[2, 3]));
        assert!(fan.has_fiber_type_relation());
    }

    #[test]
    fn hirzebruch_relations() {
        let fan = hirzebruch(1);
        // {x1, x2} sums to (0,1) = y1; {y1, y2} sums to zero.
        let rels = fan.primitive_relations();
        assert_eq!(rels.len(), 2);
        let xrel = rels
            .iter()
            .find(|r| r.collection.rays == Cone::from_ids(&[0, 2]))
            .unwrap();
        assert_eq!(xrel.cone, Cone::from_ids(&[1]));
        assert_eq!(xrel.coefficients, vec![(1, BigInt::one())]);
        assert_eq!(xrel.degree, BigInt::one());
        assert!(!xrel.is_fiber_type());
        let yrel = rels
            .iter()
            .find(|r| r.collection.rays == Cone::from_ids(&[1, 3]))
            .unwrap();
        assert!(yrel.is_fiber_type());
        assert_eq!(yrel.degree, BigInt::from(2));
    }

    #[test]
    fn fano_and_weak_fano() {
        assert!(p2().is_fano());
        assert!(p1xp1().is_fano());
        assert!(hirzebruch(1).is_fano());
        let f2 = hirzebruch(2);
        assert!(!f2.is_fano());
        assert!(f2.is_weak_fano());
        let f3 = hirzebruch(3);
        assert!(!f3.is_fano());
        assert!(!f3.is_weak_fano());
    }

    #[test]
    fn twisted_blowup_is_complete_but_not_projective() {
        let fan = twisted_blowup();
        assert!(fan.is_complete());
        assert!(fan.projectivity_witness().is_none());
        assert!(!fan.is_projective());
        assert!(!fan.is_fano());
        assert!(fan.is_weak_fano());
    }

    #[test]
    fn twisted_blowup_has_no_fiber_type_relation() {
        // All seven primitive relations have a nonempty right-hand side.
        let fan = twisted_blowup();
        assert_eq!(fan.primitive_relations().len(), 7);
        assert!(fan
            .primitive_relations()
            .iter()
            .all(|r| !r.is_fiber_type()));
        assert!(!fan.has_fiber_type_relation());
    }

    #[test]
    fn wall_incidence_count_matches_rank_times_cones() {
        for fan in [p2(), p1xp1(), hirzebruch(2)] {
            let incidences: usize = fan
                .walls()
                .map(|w| {
                    fan.maximal_cones()
                        .iter()
                        .filter(|c| w.is_subset_of(c))
                        .count()
                })
                .sum();
            assert_eq!(incidences, fan.rank() * fan.maximal_cones().len());
            assert!(fan
                .walls()
                .all(|w| fan.maximal_cones().iter().filter(|c| w.is_subset_of(c)).count() == 2));
        }
    }

    #[test]
    fn surfaces_are_projective() {
        for fan in [p2(), p1xp1(), hirzebruch(3)] {
            let witness = fan.projectivity_witness().unwrap();
            assert_eq!(witness.len(), fan.rays().len());
        }
    }

    #[test]
    fn wall_relation_vectors_vanish() {
        for fan in [p2(), p1xp1(), hirzebruch(2)] {
            for wall in fan.walls() {
                let rel = fan.wall_relation(wall).unwrap();
                let mut acc = IntegerVector::zero(fan.rank());
                for (r, c) in rel.vector.iter().enumerate() {
                    acc = acc.add(&fan.ray(r).vector.scaled(c));
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn proper_subsets_of_collections_are_faces() {
        for fan in [p2(), p1xp1(), hirzebruch(2)] {
            for pc in fan.primitive_collections() {
                assert!(!fan.is_cone(&pc.rays));
                for r in pc.rays.iter() {
                    assert!(fan.is_cone(&pc.rays.without(r)));
                }
            }
        }
    }
}
