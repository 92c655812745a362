//! Dual knots `K(L(p,q);k)` of lens space surgeries and the invariant `Phi`.
//!
//! The basic sequence of `(p,q)` is `phi_i = i*q mod p` for `i = 1..p-1`.
//! With `h` the position of `k` in it, the four counts split the remaining
//! terms by position (before/after `h`) and by value (below/above `k`).
//! A doubly primitive knot is hyperbolic exactly when all four are `>= 2`.

use std::sync::atomic::{AtomicBool, Ordering};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{coprime, inverse, reduce, sign_pow};
use crate::sequences::fib;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualError {
    #[error("invalid dual knot triple ({p},{q},{k}): {reason}")]
    InvalidTriple {
        p: BigInt,
        q: BigInt,
        k: BigInt,
        reason: &'static str,
    },
    #[error("k+({a},{b}) needs coprime positive parameters")]
    InvalidKplus { a: BigInt, b: BigInt },
    #[error("fibonacci family index must be at least 1, got {0}")]
    InvalidIndex(u64),
    #[error("basic sequence scan cancelled")]
    Cancelled,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualKnotTriple {
    p: BigInt,
    q: BigInt,
    k: BigInt,
}

impl DualKnotTriple {
    pub fn new(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        k: impl Into<BigInt>,
    ) -> Result<Self, DualError> {
        let (p, q, k) = (p.into(), q.into(), k.into());
        let fail = |reason| DualError::InvalidTriple {
            p: p.clone(),
            q: q.clone(),
            k: k.clone(),
            reason,
        };
        if p < BigInt::from(2) {
            return Err(fail("p must be at least 2"));
        }
        if !q.is_positive() || q >= p {
            return Err(fail("q must lie in [1, p)"));
        }
        if !coprime(&p, &q) {
            return Err(fail("gcd(p,q) must be 1"));
        }
        if !k.is_positive() || k >= p {
            return Err(fail("k must lie in [1, p)"));
        }
        Ok(DualKnotTriple { p, q, k })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn k(&self) -> &BigInt {
        &self.k
    }

    /// Position of `k` in the basic sequence: `h = k q^{-1} mod p`.
    pub fn position(&self) -> BigInt {
        let q_inv = inverse(&self.q, &self.p).expect("gcd(p,q) = 1 by construction");
        reduce(&(&self.k * q_inv), &self.p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasicSequenceStats {
    pub h: BigInt,
    pub s: BigInt,
    pub ell: BigInt,
    pub s_prime: BigInt,
    pub ell_prime: BigInt,
    pub phi: BigInt,
}

impl BasicSequenceStats {
    fn from_counts(h: BigInt, s: BigInt, ell: BigInt, s_prime: BigInt, ell_prime: BigInt) -> Self {
        let phi = [&s, &ell, &s_prime, &ell_prime]
            .into_iter()
            .min()
            .cloned()
            .unwrap_or_default();
        BasicSequenceStats {
            h,
            s,
            ell,
            s_prime,
            ell_prime,
            phi,
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.phi >= BigInt::from(2)
    }
}

/// The dual triple of `k+(a,b)`: `p = a^2+ab+b^2`, `q = (b/(a+b))^2`, `k = -b/(a+b)`.
pub fn kplus_dual(a: &BigInt, b: &BigInt) -> Result<DualKnotTriple, DualError> {
    if !a.is_positive() || !b.is_positive() || !coprime(a, b) {
        return Err(DualError::InvalidKplus {
            a: a.clone(),
            b: b.clone(),
        });
    }
    let p = a * a + a * b + b * b;
    let ratio = inverse(&(a + b), &p)
        .map(|inv| reduce(&(b * inv), &p))
        .expect("a+b is a unit modulo a^2+ab+b^2 when gcd(a,b)=1");
    let q = reduce(&(&ratio * &ratio), &p);
    let k = reduce(&-ratio, &p);
    DualKnotTriple::new(p, q, k)
}

/// The dual triple of `k+(F_{n+2}, F_n)` from its Fibonacci closed forms.
pub fn fibonacci_kplus_data(n: u64) -> Result<DualKnotTriple, DualError> {
    if n < 1 {
        return Err(DualError::InvalidIndex(n));
    }
    let (f_n, f_n2) = (fib(n), fib(n + 2));
    let sign = sign_pow(n);
    let p = 4 * &f_n * &f_n2 + &sign;
    let q = reduce(&(-&sign * 4 * &f_n * &f_n), &p);
    let k = reduce(&(&sign * 4 * &f_n * (&f_n + &f_n2)), &p);
    DualKnotTriple::new(p, q, k)
}

/// How often the scan polls the cancellation flag.
const CANCEL_POLL: u64 = 1 << 16;

/// Streams the basic sequence in `O(1)` memory.
pub fn basic_stats(triple: &DualKnotTriple) -> BasicSequenceStats {
    let never = AtomicBool::new(false);
    basic_stats_cancellable(triple, &never).expect("scan without cancellation")
}

/// [`basic_stats`] that stops early once `cancel` is set.
pub fn basic_stats_cancellable(
    triple: &DualKnotTriple,
    cancel: &AtomicBool,
) -> Result<BasicSequenceStats, DualError> {
    let h = triple.position();
    let fast = (
        triple.p.to_u64(),
        triple.q.to_u64(),
        triple.k.to_u64(),
        h.to_u64(),
    );
    match fast {
        (Some(p), Some(q), Some(k), Some(h)) if p < (1 << 63) => {
            let [s, ell, s_prime, ell_prime] = scan_u64(p, q, k, h, cancel)?;
            Ok(BasicSequenceStats::from_counts(
                h.into(),
                s.into(),
                ell.into(),
                s_prime.into(),
                ell_prime.into(),
            ))
        }
        _ => scan_big(triple, h, cancel),
    }
}

fn scan_u64(p: u64, q: u64, k: u64, h: u64, cancel: &AtomicBool) -> Result<[u64; 4], DualError> {
    // counts[before/after][below/above]
    let mut below_before = 0u64;
    let mut below_after = 0u64;
    let mut phi = 0u64;
    for i in 1..p {
        if i % CANCEL_POLL == 0 && cancel.load(Ordering::Relaxed) {
            return Err(DualError::Cancelled);
        }
        phi += q;
        if phi >= p {
            phi -= p;
        }
        if phi < k {
            if i < h {
                below_before += 1;
            } else {
                below_after += 1;
            }
        }
    }
    let before = h - 1;
    let after = p - 1 - h;
    Ok([
        below_before,
        before - below_before,
        below_after,
        after - below_after,
    ])
}

fn scan_big(
    triple: &DualKnotTriple,
    h: BigInt,
    cancel: &AtomicBool,
) -> Result<BasicSequenceStats, DualError> {
    let (p, q, k) = (&triple.p, &triple.q, &triple.k);
    let mut below_before = BigInt::zero();
    let mut below_after = BigInt::zero();
    let mut phi = BigInt::zero();
    let mut i = BigInt::one();
    let mut polls = 0u64;
    while &i < p {
        polls += 1;
        if polls % CANCEL_POLL == 0 && cancel.load(Ordering::Relaxed) {
            return Err(DualError::Cancelled);
        }
        phi += q;
        if &phi >= p {
            phi -= p;
        }
        if &phi < k {
            if i < h {
                below_before += 1;
            } else {
                below_after += 1;
            }
        }
        i += 1;
    }
    let before = &h - 1;
    let after = p - 1 - &h;
    let ell = &before - &below_before;
    let ell_prime = &after - &below_after;
    Ok(BasicSequenceStats::from_counts(
        h,
        below_before,
        ell,
        below_after,
        ell_prime,
    ))
}

pub fn kplus_phi(a: &BigInt, b: &BigInt) -> Result<BasicSequenceStats, DualError> {
    kplus_dual(a, b).map(|t| basic_stats(&t))
}

pub fn kplus_is_hyperbolic(a: &BigInt, b: &BigInt) -> Result<bool, DualError> {
    kplus_phi(a, b).map(|stats| stats.is_hyperbolic())
}

#[cfg(test)]
pub(crate) mod oracle {
    //! Materializes the whole basic sequence and counts by definition.

    pub fn basic_sequence(p: u64, q: u64) -> Vec<u64> {
        (1..p).map(|i| (i * q) % p).collect()
    }

    /// `(h, s, ell, s', ell')` straight from the definitions.
    pub fn counts(p: u64, q: u64, k: u64) -> (u64, u64, u64, u64, u64) {
        let seq = basic_sequence(p, q);
        let idx = seq.iter().position(|&v| v == k).expect("k occurs");
        let (before, after) = (&seq[..idx], &seq[idx + 1..]);
        let below = |xs: &[u64]| xs.iter().filter(|&&v| v < k).count() as u64;
        let above = |xs: &[u64]| xs.iter().filter(|&&v| v > k).count() as u64;
        (
            idx as u64 + 1,
            below(before),
            above(before),
            below(after),
            above(after),
        )
    }
}
