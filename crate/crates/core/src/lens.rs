//! Oriented lens spaces `L(p,q)` and their homeomorphism classification.
//!
//! `L(p,q)` is the result of `p/q`-surgery on the unknot, so reversing the
//! orientation sends `q` to `p - q`. Two lens spaces of the same order are
//! orientation-preservingly homeomorphic iff `q' = q^{+-1}`, and homeomorphic
//! at all iff `q' = +-q^{+-1}` (mod p).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{coprime, inverse, reduce};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LensError {
    #[error("lens space order must be at least 1, got {0}")]
    InvalidOrder(BigInt),
    #[error("L({p},{q}) is not a lens space: gcd(p,q) != 1")]
    NotCoprime { p: BigInt, q: BigInt },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LensSpace {
    p: BigInt,
    q: BigInt,
}

/// Minimal representative of an unoriented homeomorphism class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LensClass {
    pub p: BigInt,
    pub q_min: BigInt,
}

impl fmt::Display for LensClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q_min)
    }
}

pub fn make_lens(p: &BigInt, q: &BigInt) -> Result<LensSpace, LensError> {
    if !p.is_positive() {
        return Err(LensError::InvalidOrder(p.clone()));
    }
    let q = reduce(q, p);
    // gcd(1, 0) = 1, so the 3-sphere passes this check.
    if !coprime(p, &q) {
        return Err(LensError::NotCoprime { p: p.clone(), q });
    }
    Ok(LensSpace { p: p.clone(), q })
}

impl LensSpace {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, LensError> {
        make_lens(&p.into(), &q.into())
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn is_sphere(&self) -> bool {
        self.p.is_one()
    }

    pub fn reverse_orientation(&self) -> LensSpace {
        LensSpace {
            p: self.p.clone(),
            q: reduce(&-&self.q, &self.p),
        }
    }

    /// `q^{-1} mod p`, undefined only for the 3-sphere.
    fn q_inverse(&self) -> Option<BigInt> {
        if self.p <= BigInt::from(2) {
            return Some(self.q.clone());
        }
        inverse(&self.q, &self.p)
    }

    /// The orbit `{q, -q, q^-1, -q^-1}` of `q` under the unoriented moves.
    pub fn unoriented_orbit(&self) -> Vec<BigInt> {
        let mut orbit = vec![self.q.clone(), reduce(&-&self.q, &self.p)];
        if let Some(inv) = self.q_inverse() {
            orbit.push(reduce(&-&inv, &self.p));
            orbit.push(inv);
        }
        orbit.sort();
        orbit.dedup();
        orbit
    }

    pub fn canonical_form(&self) -> LensClass {
        let q_min = self
            .unoriented_orbit()
            .into_iter()
            .min()
            .unwrap_or_else(BigInt::zero);
        LensClass {
            p: self.p.clone(),
            q_min,
        }
    }
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{})", self.p, self.q)
    }
}

pub fn reverse_orientation(lens: &LensSpace) -> LensSpace {
    lens.reverse_orientation()
}

pub fn oriented_homeomorphic(a: &LensSpace, b: &LensSpace) -> bool {
    a.p == b.p && (a.q == b.q || reduce(&(&a.q * &b.q), &a.p).is_one())
}

pub fn homeomorphic(a: &LensSpace, b: &LensSpace) -> bool {
    a.p == b.p && a.unoriented_orbit().contains(&b.q)
}

pub fn canonical_form(lens: &LensSpace) -> LensClass {
    lens.canonical_form()
}
