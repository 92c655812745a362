//! Exact integer and modular arithmetic shared by the rest of the crate.
//!
//! Everything is expressed over [`BigInt`]; the few hot loops that want
//! machine words (the basic-sequence scan, the Pell search) convert
//! explicitly and fall back to big integers when a value does not fit.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("invalid modulus {0}")]
    InvalidModulus(BigInt),
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: BigInt, modulus: BigInt },
}

/// A residue class representative in `[0, modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Residue {
    value: BigInt,
    modulus: BigInt,
}

impl Residue {
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn into_value(self) -> BigInt {
        self.value
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// Shorthand for `BigInt::from`.
pub fn int<T: Into<BigInt>>(x: T) -> BigInt {
    x.into()
}

/// `x mod p` normalized into `[0, p)`.
pub fn mod_norm(x: &BigInt, p: &BigInt) -> Result<Residue, ArithError> {
    if !p.is_positive() {
        return Err(ArithError::InvalidModulus(p.clone()));
    }
    Ok(Residue {
        value: x.mod_floor(p),
        modulus: p.clone(),
    })
}

/// Residue of `x` modulo a modulus the caller already knows is positive.
pub(crate) fn reduce(x: &BigInt, p: &BigInt) -> BigInt {
    debug_assert!(p.is_positive());
    x.mod_floor(p)
}

/// Inverse of `x` modulo `p` in `[1, p)`, by the extended Euclidean algorithm.
pub fn mod_inv(x: &BigInt, p: &BigInt) -> Result<Residue, ArithError> {
    if p < &BigInt::from(2) {
        return Err(ArithError::InvalidModulus(p.clone()));
    }
    let a = x.mod_floor(p);
    let (mut old_r, mut r) = (a, p.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
    }
    if !old_r.is_one() {
        return Err(ArithError::NotInvertible {
            value: x.clone(),
            modulus: p.clone(),
        });
    }
    Ok(Residue {
        value: old_s.mod_floor(p),
        modulus: p.clone(),
    })
}

/// Inverse modulo a modulus `p >= 2` when it exists.
pub(crate) fn inverse(x: &BigInt, p: &BigInt) -> Option<BigInt> {
    mod_inv(x, p).ok().map(Residue::into_value)
}

/// The exact square root of `n` if `n` is a perfect square.
pub fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Machine-word variant of [`is_perfect_square`].
pub(crate) fn square_root_u128(n: u128) -> Option<u128> {
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

pub(crate) fn coprime(a: &BigInt, b: &BigInt) -> bool {
    a.gcd(b).is_one()
}

/// `(-1)^n` as a big integer.
pub(crate) fn sign_pow(n: u64) -> BigInt {
    if n % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalizes_into_range() {
        assert_eq!(mod_norm(&int(-26), &int(93)).unwrap().value(), &int(67));
        assert_eq!(mod_norm(&int(9), &int(5)).unwrap().value(), &int(4));
        assert_eq!(mod_norm(&int(0), &int(1)).unwrap().value(), &int(0));
    }

    #[test]
    fn rejects_non_positive_modulus() {
        assert_eq!(
            mod_norm(&int(3), &int(0)),
            Err(ArithError::InvalidModulus(int(0)))
        );
        assert!(mod_norm(&int(3), &int(-7)).is_err());
    }

    #[test]
    fn inverse_examples() {
        // 7 * 40 = 280 = 3 * 93 + 1
        assert_eq!(mod_inv(&int(7), &int(93)).unwrap().value(), &int(40));
        assert_eq!(mod_inv(&int(3), &int(13)).unwrap().value(), &int(9));
        assert!(matches!(
            mod_inv(&int(6), &int(93)),
            Err(ArithError::NotInvertible { .. })
        ));
        assert_eq!(mod_inv(&int(-1), &int(5)).unwrap().value(), &int(4));
        assert!(matches!(
            mod_inv(&int(1), &int(1)),
            Err(ArithError::InvalidModulus(_))
        ));
    }

    #[test]
    fn perfect_squares() {
        assert_eq!(is_perfect_square(&int(169)), Some(int(13)));
        assert_eq!(is_perfect_square(&int(32)), None);
        assert_eq!(is_perfect_square(&int(0)), Some(int(0)));
        assert_eq!(is_perfect_square(&int(-4)), None);
        let big = int(10).pow(40) + 1;
        assert_eq!(is_perfect_square(&(&big * &big)), Some(big));
        assert_eq!(square_root_u128(1 << 100), Some(1 << 50));
        assert_eq!(square_root_u128((1 << 100) + 1), None);
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&int(27), &int(45)), int(9));
        assert_eq!(gcd(&int(3), &int(13)), int(1));
        assert_eq!(gcd(&int(0), &int(7)), int(7));
        assert_eq!(gcd(&int(0), &int(0)), int(0));
        assert_eq!(gcd(&int(-12), &int(18)), int(6));
    }

    // Brute-force inverse search, independent of the Euclidean route.
    fn inverse_by_search(x: i64, p: i64) -> Option<i64> {
        (1..p).find(|y| (x.rem_euclid(p) * y) % p == 1)
    }

    #[test]
    fn inverse_agrees_with_search() {
        for p in 2..60i64 {
            for x in -70..70i64 {
                let expected = inverse_by_search(x, p);
                let got = mod_inv(&int(x), &int(p))
                    .ok()
                    .map(|r| i64::try_from(r.into_value()).unwrap());
                assert_eq!(got, expected, "x={x} p={p}");
            }
        }
    }

    proptest! {
        #[test]
        fn inverse_round_trips(x in -1_000_000i64..1_000_000, p in 2i64..1_000_000) {
            let (x, p) = (int(x), int(p));
            prop_assume!(gcd(&x, &p).is_one());
            let y = mod_inv(&x, &p).unwrap();
            prop_assert!(y.value() >= &int(1) && y.value() < &p);
            prop_assert_eq!(mod_norm(&(&x * y.value()), &p).unwrap().into_value(), int(1));
        }

        #[test]
        fn squares_have_roots(r in 0u64..=1_000_000) {
            prop_assert_eq!(is_perfect_square(&int(r * r)), Some(int(r)));
            if r > 0 {
                prop_assert_eq!(is_perfect_square(&int(r * r + 1)), None);
            }
        }

        #[test]
        fn gcd_divides_and_commutes(a in -100_000i64..100_000, b in -100_000i64..100_000) {
            let (a, b) = (int(a), int(b));
            let g = gcd(&a, &b);
            prop_assert_eq!(&g, &gcd(&b, &a));
            if !g.is_zero() {
                prop_assert!((&a % &g).is_zero());
                prop_assert!((&b % &g).is_zero());
            }
        }
    }
}
