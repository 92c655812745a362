//! Fibonacci numbers, the two auxiliary pair sequences that parametrize the
//! torus-knot families, and exact checks of the closed-form identities they
//! satisfy.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::sign_pow;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("index {index} out of range for {what} (minimum {min})")]
    InvalidIndex {
        what: &'static str,
        index: u64,
        min: u64,
    },
    #[error("unknown identity tag {0:?}")]
    UnknownIdentity(String),
}

/// Iterates `F_0, F_1, F_2, ...`.
#[derive(Debug, Clone)]
pub struct Fibonacci {
    cur: BigInt,
    next: BigInt,
}

impl Default for Fibonacci {
    fn default() -> Self {
        Fibonacci {
            cur: BigInt::zero(),
            next: BigInt::one(),
        }
    }
}

impl Iterator for Fibonacci {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let following = &self.cur + &self.next;
        let out = std::mem::replace(&mut self.cur, std::mem::replace(&mut self.next, following));
        Some(out)
    }
}

pub fn fib(n: u64) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let c = &a + &b;
        a = std::mem::replace(&mut b, c);
    }
    a
}

/// Which pair sequence `(a_n, b_n)` is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairFamily {
    /// `a_n = F_{n+2}`, `b_n = F_{n+3} + F_{n+1}`.
    Fibonacci,
    /// `a_1 = 2`, `b_1 = 3`, `a_{n+1} = a_n + b_n`, `b_{n+1} = a_{n+1} + a_n`.
    Recurrence,
}

impl PairFamily {
    pub fn tag(self) -> &'static str {
        match self {
            PairFamily::Fibonacci => "sec2",
            PairFamily::Recurrence => "sec4",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequencePair {
    pub n: u64,
    pub a: BigInt,
    pub b: BigInt,
    pub family: PairFamily,
}

pub fn pair(family: PairFamily, n: u64) -> Result<SequencePair, SequenceError> {
    if n < 1 {
        return Err(SequenceError::InvalidIndex {
            what: "pair sequence",
            index: n,
            min: 1,
        });
    }
    let (a, b) = match family {
        PairFamily::Fibonacci => (fib(n + 2), fib(n + 3) + fib(n + 1)),
        PairFamily::Recurrence => {
            let (mut a, mut b) = (BigInt::from(2), BigInt::from(3));
            for _ in 1..n {
                let a_next = &a + &b;
                b = &a_next + &a;
                a = a_next;
            }
            (a, b)
        }
    };
    Ok(SequencePair { n, a, b, family })
}

/// The pair values `(a_n, b_n)` without the wrapper.
pub(crate) fn ab(family: PairFamily, n: u64) -> Result<(BigInt, BigInt), SequenceError> {
    pair(family, n).map(|p| (p.a, p.b))
}

/// Closed-form identities checked exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `F_{k-1} F_{k+1} - F_k^2 = (-1)^k`, `k > 0`.
    Cassini,
    /// Both Fibonacci-pair expressions for the shared integral slope agree.
    FibonacciSlope,
    /// Both recurrence-pair expressions for the shared half-integral slope agree.
    HalfIntegralSlope,
    /// `4 a_{n+1}^2 b_{n+1}^2 + 1` factors as the product of consecutive slopes.
    HalfIntegralFactorization,
    /// `4F_n^4 + (-1)^n F_{n+2}^2 = (4F_nF_{n+2} + (-1)^n)(F_{n+2}^2 - 4F_nF_{n+1})`.
    CableKplusFactorization,
}

impl Identity {
    pub const ALL: [Identity; 5] = [
        Identity::Cassini,
        Identity::FibonacciSlope,
        Identity::HalfIntegralSlope,
        Identity::HalfIntegralFactorization,
        Identity::CableKplusFactorization,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Identity::Cassini => "cassini",
            Identity::FibonacciSlope => "lemma2_1",
            Identity::HalfIntegralSlope => "lemma4_1a",
            Identity::HalfIntegralFactorization => "lemma4_1b",
            Identity::CableKplusFactorization => "lemma6_2",
        }
    }

    pub fn min_index(self) -> u64 {
        match self {
            Identity::CableKplusFactorization => 0,
            _ => 1,
        }
    }

    /// Both sides of the identity at index `n`.
    pub fn sides(self, n: u64) -> Result<(BigInt, BigInt), SequenceError> {
        if n < self.min_index() {
            return Err(SequenceError::InvalidIndex {
                what: self.tag(),
                index: n,
                min: self.min_index(),
            });
        }
        let sides = match self {
            Identity::Cassini => {
                let lhs = fib(n - 1) * fib(n + 1) - fib(n).pow(2);
                (lhs, sign_pow(n))
            }
            Identity::FibonacciSlope => {
                let (a_n, b_n) = ab(PairFamily::Fibonacci, n)?;
                let (a_n1, b_n1) = ab(PairFamily::Fibonacci, n + 1)?;
                (a_n1 * b_n + sign_pow(n + 1), a_n * b_n1 + sign_pow(n))
            }
            Identity::HalfIntegralSlope => {
                let (a_n, b_n) = ab(PairFamily::Recurrence, n)?;
                let (a_n1, b_n1) = ab(PairFamily::Recurrence, n + 1)?;
                (
                    2 * a_n * b_n1 + sign_pow(n + 1),
                    2 * a_n1 * b_n + sign_pow(n),
                )
            }
            Identity::HalfIntegralFactorization => {
                let (a_n, _) = ab(PairFamily::Recurrence, n)?;
                let (a_n1, b_n1) = ab(PairFamily::Recurrence, n + 1)?;
                let (_, b_n2) = ab(PairFamily::Recurrence, n + 2)?;
                let lhs = 4 * a_n1.pow(2) * b_n1.pow(2) + 1;
                let rhs =
                    (2 * &a_n1 * b_n2 + sign_pow(n + 2)) * (2 * a_n * &b_n1 + sign_pow(n + 1));
                (lhs, rhs)
            }
            Identity::CableKplusFactorization => {
                let (f0, f1, f2) = (fib(n), fib(n + 1), fib(n + 2));
                let lhs = 4 * f0.pow(4) + sign_pow(n) * f2.pow(2);
                let rhs = (4 * &f0 * &f2 + sign_pow(n)) * (f2.pow(2) - 4 * &f0 * &f1);
                (lhs, rhs)
            }
        };
        Ok(sides)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Identity {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Identity::ALL
            .into_iter()
            .find(|id| id.tag() == s)
            .ok_or_else(|| SequenceError::UnknownIdentity(s.to_owned()))
    }
}

pub fn check_identity(id: Identity, n: u64) -> Result<bool, SequenceError> {
    let (lhs, rhs) = id.sides(n)?;
    Ok(lhs == rhs)
}
