//! Exact intersection numbers of torus-invariant divisors against
//! torus-invariant cycles on a smooth complete fan.
//!
//! The product of a prime divisor `D_x` with an invariant cycle `V(sigma)`
//! follows the standard smooth-toric Chow ring rules:
//!
//! * `x` not in `sigma`, `sigma + x` a cone: contribute `V(sigma + x)`;
//! * `x` not in `sigma`, `sigma + x` not a cone: contribute nothing;
//! * `x` in `sigma`: rewrite `D_x` by the principal divisor of the dual
//!   functional of `x` on a maximal cone containing `sigma`, so that
//!   `D_x ~ -sum_{u outside that cone} <m, u> D_u`, and the remaining
//!   products all fall into the first two cases.
//!
//! The maximal cone used for the rewrite is always the one with the smallest
//! index; correctness does not depend on the choice, and a deterministic
//! choice keeps the memo cache effective.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::fan::{Cone, Fan, RayId};
use crate::linalg::{Covector, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntersectError {
    #[error("ray {0} is not a ray of this fan")]
    UnknownRay(RayId),
    #[error("cycle already has codimension {codim}; cannot multiply further in rank {rank}")]
    DimensionOverflow { codim: usize, rank: usize },
    #[error("expected a multiset of {expected} rays, got {got}")]
    WrongMultisetSize { expected: usize, got: usize },
    #[error("base cone has dimension {dim}, incompatible with {count} divisors in rank {rank}")]
    DimensionMismatch { dim: usize, count: usize, rank: usize },
    #[error("base is not a cone of this fan: {0}")]
    NotACone(String),
    #[error("intersection number {0} is not an integer; fan data is corrupt")]
    NonIntegral(String),
}

/// A formal rational combination of invariant cycles of one codimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusCycle {
    codim: usize,
    terms: BTreeMap<Cone, Rational>,
}

impl TorusCycle {
    /// The class of `V(tau)` with coefficient 1.
    pub fn subvariety(fan: &Fan, tau: Cone) -> Result<Self, IntersectError> {
        if !fan.is_cone(&tau) {
            return Err(IntersectError::NotACone(format!("{:?}", tau.ids())));
        }
        let mut terms = BTreeMap::new();
        terms.insert(tau, Rational::one());
        Ok(TorusCycle {
            codim: tau.dim(),
            terms,
        })
    }

    /// The fundamental class of the variety (the zero cone).
    pub fn fundamental(fan: &Fan) -> Self {
        TorusCycle::subvariety(fan, Cone::EMPTY).expect("zero cone is always a cone")
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in deterministic cone order; zero coefficients are pruned.
    pub fn terms(&self) -> impl Iterator<Item = (&Cone, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, cone: &Cone) -> Rational {
        self.terms.get(cone).cloned().unwrap_or_else(Rational::zero)
    }

    /// Sum of all coefficients; meaningful once the terms are point classes.
    pub fn total(&self) -> Rational {
        self.terms.values().sum()
    }

    fn add_term(&mut self, cone: Cone, value: Rational) {
        if value.is_zero() {
            return;
        }
        let entry = self.terms.entry(cone).or_insert_with(Rational::zero);
        *entry += value;
        if entry.is_zero() {
            self.terms.remove(&cone);
        }
    }

    pub fn scaled(&self, c: &Rational) -> TorusCycle {
        if c.is_zero() {
            return TorusCycle {
                codim: self.codim,
                terms: BTreeMap::new(),
            };
        }
        TorusCycle {
            codim: self.codim,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn plus(&self, other: &TorusCycle) -> TorusCycle {
        debug_assert_eq!(self.codim, other.codim);
        let mut out = self.clone();
        for (cone, v) in &other.terms {
            out.add_term(*cone, v.clone());
        }
        out
    }
}

/// Multiply the prime divisor of ray `x` into a cycle.
pub fn mul_prime_divisor(
    fan: &Fan,
    x: RayId,
    cycle: &TorusCycle,
) -> Result<TorusCycle, IntersectError> {
    if x >= fan.rays().len() {
        return Err(IntersectError::UnknownRay(x));
    }
    if cycle.codim >= fan.rank() {
        return Err(IntersectError::DimensionOverflow {
            codim: cycle.codim,
            rank: fan.rank(),
        });
    }
    let mut out = TorusCycle {
        codim: cycle.codim + 1,
        terms: BTreeMap::new(),
    };
    for (&sigma, coeff) in &cycle.terms {
        if !sigma.contains(x) {
            let bigger = sigma.with(x);
            if fan.is_cone(&bigger) {
                out.add_term(bigger, coeff.clone());
            }
        } else {
            // Rewrite D_x on the smallest maximal cone containing sigma.
            let ci = fan
                .enclosing_maximal_cone(&sigma)
                .expect("every face has an enclosing maximal cone");
            let enclosing = fan.maximal_cones()[ci];
            let pos = enclosing
                .iter()
                .position(|g| g == x)
                .expect("x is a generator of the enclosing cone");
            for u in 0..fan.rays().len() {
                if enclosing.contains(u) {
                    continue;
                }
                let w = fan.dual_pairing(ci, pos, u);
                if w.is_zero() {
                    continue;
                }
                let bigger = sigma.with(u);
                if fan.is_cone(&bigger) {
                    let contribution = coeff * Rational::from_integer(-w.clone());
                    out.add_term(bigger, contribution);
                }
            }
        }
    }
    Ok(out)
}

/// A torus-invariant divisor as a finitely supported coefficient vector.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor {
    pub coefficients: BTreeMap<RayId, Rational>,
}

impl Divisor {
    pub fn prime(ray: RayId) -> Self {
        let mut coefficients = BTreeMap::new();
        coefficients.insert(ray, Rational::one());
        Divisor { coefficients }
    }

    /// `div(chi^m) = sum_u <m, u> D_u`, linearly equivalent to zero.
    pub fn principal(fan: &Fan, m: &Covector) -> Self {
        let mut coefficients = BTreeMap::new();
        for ray in fan.rays() {
            let c = m.pair(&ray.vector);
            if !c.is_zero() {
                coefficients.insert(ray.id, Rational::from_integer(c));
            }
        }
        Divisor { coefficients }
    }

    /// Multiply this divisor into a cycle by linearity.
    pub fn mul_cycle(&self, fan: &Fan, cycle: &TorusCycle) -> Result<TorusCycle, IntersectError> {
        let mut out = TorusCycle {
            codim: cycle.codim + 1,
            terms: BTreeMap::new(),
        };
        for (&ray, c) in &self.coefficients {
            let part = mul_prime_divisor(fan, ray, cycle)?;
            out = out.plus(&part.scaled(c));
        }
        Ok(out)
    }
}

type MonomialKey = (Vec<RayId>, Cone);

/// Evaluator for intersection numbers on one fan, with a per-fan memo cache
/// keyed by (sorted ray multiset, base cone). The cache lives behind a
/// `RefCell`; instantiate one engine per worker for concurrent use.
pub struct IntersectionEngine<'a> {
    fan: &'a Fan,
    memo: RefCell<HashMap<MonomialKey, Rational>>,
}

impl<'a> IntersectionEngine<'a> {
    pub fn new(fan: &'a Fan) -> Self {
        IntersectionEngine {
            fan,
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn fan(&self) -> &'a Fan {
        self.fan
    }

    /// `(D_{x_1} ... D_{x_d})` against the fundamental class. The multiset
    /// must have exactly `rank` entries; the result is always an integer on
    /// a smooth fan, which is asserted.
    pub fn intersection_number(&self, rays: &[RayId]) -> Result<Rational, IntersectError> {
        if rays.len() != self.fan.rank() {
            return Err(IntersectError::WrongMultisetSize {
                expected: self.fan.rank(),
                got: rays.len(),
            });
        }
        self.against_subvariety(rays, Cone::EMPTY)
    }

    /// `(D_{x_1} ... D_{x_k} . V(tau))` with `k + dim(tau) = rank`.
    pub fn against_subvariety(
        &self,
        rays: &[RayId],
        tau: Cone,
    ) -> Result<Rational, IntersectError> {
        if rays.len() + tau.dim() != self.fan.rank() {
            return Err(IntersectError::DimensionMismatch {
                dim: tau.dim(),
                count: rays.len(),
                rank: self.fan.rank(),
            });
        }
        for &r in rays {
            if r >= self.fan.rays().len() {
                return Err(IntersectError::UnknownRay(r));
            }
        }
        let mut key_rays = rays.to_vec();
        key_rays.sort_unstable();
        let key = (key_rays, tau);
        if let Some(v) = self.memo.borrow().get(&key) {
            return Ok(v.clone());
        }

        // Stable partition: rays outside the base cone first, so they extend
        // cones directly; rays already in the base come last, minimizing
        // rewrites. The result is order-independent.
        let mut ordered: Vec<RayId> = rays.iter().copied().filter(|r| !tau.contains(*r)).collect();
        ordered.extend(rays.iter().copied().filter(|r| tau.contains(*r)));

        let mut cycle = TorusCycle::subvariety(self.fan, tau)?;
        for r in ordered {
            if cycle.is_zero() {
                break;
            }
            cycle = mul_prime_divisor(self.fan, r, &cycle)?;
        }
        let value = cycle.total();
        if !value.is_integer() {
            return Err(IntersectError::NonIntegral(value.to_string()));
        }
        self.memo.borrow_mut().insert(key, value.clone());
        Ok(value)
    }
}

/// The curve class of a wall: the cycle `V(tau)` together with its numerical
/// representation as an integer relation vector over all rays.
pub fn curve_class_of_wall(
    fan: &Fan,
    wall: &Cone,
) -> Result<(TorusCycle, Vec<BigInt>), IntersectError> {
    let relation = fan
        .wall_relation(wall)
        .map_err(|_| IntersectError::NotACone(format!("{:?}", wall.ids())))?;
    let cycle = TorusCycle::subvariety(fan, *wall)?;
    Ok((cycle, relation.vector.clone()))
}
