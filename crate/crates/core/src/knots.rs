//! The five knot families and their lens space surgeries.
//!
//! All knots are the right-handed (positive) representatives and all slopes
//! are positive. Surgery formulas:
//!
//! * `torus(p,q)`: `m/n` gives `L(m, n q^2)` when `|npq - m| = 1`, and a
//!   connected sum of two lens spaces at `pq/1`.
//! * `cable(a,b,e)`, the `(2, 2ab+e)`-cable of `torus(a,b)`: `L(4ab+e, 4b^2)`
//!   at `(4ab+e)/1`.
//! * `kplus(a,b)`: `L(a^2+ab+b^2, (a/b)^2)` at `(a^2+ab+b^2)/1`.
//! * `tangleHH(n)`: `L(m, -(9n^2+12n+5))` at `m = 27n^2+45n+21`.
//! * `tangleTH(n)`: `L(m, -(18n+19))` at `m = 18n^2+33n+15`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{coprime, inverse, reduce};
use crate::dual::kplus_phi;
use crate::lens::LensSpace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KnotError {
    #[error("invalid knot {0}: {1}")]
    InvalidKnot(String, &'static str),
    #[error("invalid slope: {0}")]
    InvalidSlope(String),
    #[error("cannot parse knot {0:?}")]
    Parse(String),
}

/// Sign of the cabling twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CableSign {
    Minus,
    Plus,
}

impl CableSign {
    pub fn value(self) -> i64 {
        match self {
            CableSign::Minus => -1,
            CableSign::Plus => 1,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            1 => Some(CableSign::Plus),
            -1 => Some(CableSign::Minus),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KnotFamily {
    Torus,
    Cable,
    Kplus,
    TangleHH,
    TangleTH,
}

impl KnotFamily {
    pub const ALL: [KnotFamily; 5] = [
        KnotFamily::Torus,
        KnotFamily::Cable,
        KnotFamily::Kplus,
        KnotFamily::TangleHH,
        KnotFamily::TangleTH,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            KnotFamily::Torus => "torus",
            KnotFamily::Cable => "cable",
            KnotFamily::Kplus => "kplus",
            KnotFamily::TangleHH => "tangleHH",
            KnotFamily::TangleTH => "tangleTH",
        }
    }

    fn arity(self) -> usize {
        match self {
            KnotFamily::Torus | KnotFamily::Kplus => 2,
            KnotFamily::Cable => 3,
            KnotFamily::TangleHH | KnotFamily::TangleTH => 1,
        }
    }
}

impl FromStr for KnotFamily {
    type Err = KnotError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        KnotFamily::ALL
            .into_iter()
            .find(|f| f.tag() == s)
            .ok_or_else(|| KnotError::Parse(s.to_owned()))
    }
}

impl fmt::Display for KnotFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Knot {
    Torus {
        p: BigInt,
        q: BigInt,
    },
    Cable {
        a: BigInt,
        b: BigInt,
        sign: CableSign,
    },
    Kplus {
        a: BigInt,
        b: BigInt,
    },
    TangleHH {
        n: BigInt,
    },
    TangleTH {
        n: BigInt,
    },
}

impl Knot {
    pub fn torus(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, KnotError> {
        Knot::Torus {
            p: p.into(),
            q: q.into(),
        }
        .validated()
    }

    pub fn cable(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        sign: CableSign,
    ) -> Result<Self, KnotError> {
        Knot::Cable {
            a: a.into(),
            b: b.into(),
            sign,
        }
        .validated()
    }

    pub fn kplus(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<Self, KnotError> {
        Knot::Kplus {
            a: a.into(),
            b: b.into(),
        }
        .validated()
    }

    pub fn tangle_hh(n: impl Into<BigInt>) -> Result<Self, KnotError> {
        Knot::TangleHH { n: n.into() }.validated()
    }

    pub fn tangle_th(n: impl Into<BigInt>) -> Result<Self, KnotError> {
        Knot::TangleTH { n: n.into() }.validated()
    }

    /// Builds a descriptor from a family tag and its integer parameters.
    /// The cable sign is passed as `+1`/`-1`.
    pub fn from_params(family: KnotFamily, params: &[BigInt]) -> Result<Self, KnotError> {
        if params.len() != family.arity() {
            return Err(KnotError::InvalidKnot(
                format!("{family}{params:?}"),
                "wrong number of parameters",
            ));
        }
        match family {
            KnotFamily::Torus => Knot::torus(params[0].clone(), params[1].clone()),
            KnotFamily::Kplus => Knot::kplus(params[0].clone(), params[1].clone()),
            KnotFamily::Cable => {
                let sign = params[2]
                    .to_i64()
                    .and_then(CableSign::from_value)
                    .ok_or_else(|| {
                        KnotError::InvalidKnot(
                            format!("cable sign {}", params[2]),
                            "sign must be +1 or -1",
                        )
                    })?;
                Knot::cable(params[0].clone(), params[1].clone(), sign)
            }
            KnotFamily::TangleHH => Knot::tangle_hh(params[0].clone()),
            KnotFamily::TangleTH => Knot::tangle_th(params[0].clone()),
        }
    }

    fn validated(self) -> Result<Self, KnotError> {
        let two = BigInt::from(2);
        let problem = match &self {
            Knot::Torus { p, q } => {
                if p < &two || q < &two {
                    Some("torus parameters must be at least 2")
                } else if !coprime(p, q) {
                    Some("torus parameters must be coprime")
                } else {
                    None
                }
            }
            Knot::Cable { a, b, .. } => {
                if a < &two || b < &two {
                    Some("cable companion parameters must be at least 2")
                } else if !coprime(a, b) {
                    Some("cable companion parameters must be coprime")
                } else {
                    None
                }
            }
            Knot::Kplus { a, b } => {
                if !a.is_positive() || !b.is_positive() {
                    Some("k+ parameters must be positive")
                } else if !coprime(a, b) {
                    Some("k+ parameters must be coprime")
                } else {
                    None
                }
            }
            Knot::TangleHH { n } | Knot::TangleTH { n } => {
                (!n.is_positive()).then_some("tangle index must be at least 1")
            }
        };
        match problem {
            Some(reason) => Err(KnotError::InvalidKnot(self.to_string(), reason)),
            None => Ok(self),
        }
    }

    pub fn family(&self) -> KnotFamily {
        match self {
            Knot::Torus { .. } => KnotFamily::Torus,
            Knot::Cable { .. } => KnotFamily::Cable,
            Knot::Kplus { .. } => KnotFamily::Kplus,
            Knot::TangleHH { .. } => KnotFamily::TangleHH,
            Knot::TangleTH { .. } => KnotFamily::TangleTH,
        }
    }

    /// Parameters in descriptor order; the cable sign appears as `+-1`.
    pub fn params(&self) -> Vec<BigInt> {
        match self {
            Knot::Torus { p, q } => vec![p.clone(), q.clone()],
            Knot::Cable { a, b, sign } => vec![a.clone(), b.clone(), BigInt::from(sign.value())],
            Knot::Kplus { a, b } => vec![a.clone(), b.clone()],
            Knot::TangleHH { n } | Knot::TangleTH { n } => vec![n.clone()],
        }
    }

    /// The same knot with its symmetric parameters sorted.
    pub fn normalized(&self) -> Knot {
        fn sorted(x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
            if x <= y {
                (x.clone(), y.clone())
            } else {
                (y.clone(), x.clone())
            }
        }
        match self {
            Knot::Torus { p, q } => {
                let (p, q) = sorted(p, q);
                Knot::Torus { p, q }
            }
            Knot::Cable { a, b, sign } => {
                let (a, b) = sorted(a, b);
                Knot::Cable { a, b, sign: *sign }
            }
            Knot::Kplus { a, b } => {
                let (a, b) = sorted(a, b);
                Knot::Kplus { a, b }
            }
            other => other.clone(),
        }
    }

    /// Canonical ordering key: family first, then parameters.
    pub fn sort_key(&self) -> (KnotFamily, Vec<BigInt>) {
        (self.family(), self.params())
    }
}

impl PartialOrd for Knot {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Knot {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for Knot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Knot::Torus { p, q } => write!(f, "torus({p},{q})"),
            Knot::Cable { a, b, sign } => {
                let s = if *sign == CableSign::Plus { "+1" } else { "-1" };
                write!(f, "cable({a},{b},{s})")
            }
            Knot::Kplus { a, b } => write!(f, "kplus({a},{b})"),
            Knot::TangleHH { n } => write!(f, "tangleHH({n})"),
            Knot::TangleTH { n } => write!(f, "tangleTH({n})"),
        }
    }
}

impl FromStr for Knot {
    type Err = KnotError;

    /// Parses the text form produced by `Display`, e.g. `cable(2,3,+1)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_err = || KnotError::Parse(s.to_owned());
        let s = s.trim();
        let open = s.find('(').ok_or_else(parse_err)?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(parse_err)?;
        let family: KnotFamily = s[..open].parse().map_err(|_| parse_err())?;
        let params = inner
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.strip_prefix('+').unwrap_or(t).parse::<BigInt>()
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| parse_err())?;
        Knot::from_params(family, &params)
    }
}

/// A reduced surgery slope `m/n` with `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Slope {
    m: BigInt,
    n: BigInt,
}

impl Slope {
    pub fn new(m: impl Into<BigInt>, n: impl Into<BigInt>) -> Result<Self, KnotError> {
        let (mut m, mut n): (BigInt, BigInt) = (m.into(), n.into());
        if n.is_zero() {
            return Err(KnotError::InvalidSlope(format!(
                "{m}/0: the meridian is not a surgery slope"
            )));
        }
        if n.is_negative() {
            m = -m;
            n = -n;
        }
        let g = m.gcd(&n);
        Ok(Slope {
            m: m / &g,
            n: n / g,
        })
    }

    pub fn integral(m: impl Into<BigInt>) -> Self {
        Slope {
            m: m.into(),
            n: BigInt::one(),
        }
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn is_integral(&self) -> bool {
        self.n.is_one()
    }

    fn is_integral_value(&self, m: &BigInt) -> bool {
        self.is_integral() && &self.m == m
    }

    /// Human form: `13` for integral slopes, `29/2` otherwise.
    pub fn short(&self) -> String {
        if self.is_integral() {
            self.m.to_string()
        } else {
            self.to_string()
        }
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Slope {
    /// By rational value.
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.m * &other.n).cmp(&(&other.m * &self.n))
    }
}

impl fmt::Display for Slope {
    /// Always `m/n`, even when integral.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.m, self.n)
    }
}

impl FromStr for Slope {
    type Err = KnotError;

    /// Accepts `m/n` or a bare integer `m`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || KnotError::InvalidSlope(s.to_owned());
        let (m, n) = match s.split_once('/') {
            Some((m, n)) => (m.trim(), n.trim()),
            None => (s.trim(), "1"),
        };
        let m: BigInt = m.parse().map_err(|_| bad())?;
        let n: BigInt = n.parse().map_err(|_| bad())?;
        Slope::new(m, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NotLensReason {
    SlopeConditionFails,
    UnknownForFamily,
}

impl NotLensReason {
    pub fn tag(self) -> &'static str {
        match self {
            NotLensReason::SlopeConditionFails => "slope-condition-fails",
            NotLensReason::UnknownForFamily => "unknown-for-family",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurgeryResult {
    Lens(LensSpace),
    /// `pq`-surgery on `torus(p,q)`: `L(p,q) # L(q,p)`.
    ReducibleTwoLens {
        p: BigInt,
        q: BigInt,
    },
    NotLens {
        reason: NotLensReason,
        note: Option<&'static str>,
    },
}

impl SurgeryResult {
    pub fn lens(&self) -> Option<&LensSpace> {
        match self {
            SurgeryResult::Lens(l) => Some(l),
            _ => None,
        }
    }

    fn not_lens(reason: NotLensReason) -> Self {
        SurgeryResult::NotLens { reason, note: None }
    }
}

impl fmt::Display for SurgeryResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurgeryResult::Lens(l) => write!(f, "{l}"),
            SurgeryResult::ReducibleTwoLens { p, q } => {
                write!(f, "reducible: L({p},{q}) # L({q},{p})")
            }
            SurgeryResult::NotLens { reason, note } => {
                write!(f, "not a lens space ({})", reason.tag())?;
                if let Some(note) = note {
                    write!(f, ": {note}")?;
                }
                Ok(())
            }
        }
    }
}

fn lens_of(p: BigInt, q: BigInt) -> SurgeryResult {
    SurgeryResult::Lens(LensSpace::new(p, q).expect("family formulas give coprime parameters"))
}

const CABLING_SLOPE_NOTE: &str = "cabling slope: the result has a lens space summand";

pub fn lens_surgery(knot: &Knot, slope: &Slope) -> SurgeryResult {
    let (m, n) = (slope.m(), slope.n());
    if !m.is_positive() {
        return SurgeryResult::not_lens(NotLensReason::UnknownForFamily);
    }
    match knot {
        Knot::Torus { p, q } => {
            let pq = p * q;
            if slope.is_integral_value(&pq) {
                return SurgeryResult::ReducibleTwoLens {
                    p: p.clone(),
                    q: q.clone(),
                };
            }
            if (n * &pq - m).abs().is_one() {
                lens_of(m.clone(), n * q * q)
            } else {
                SurgeryResult::not_lens(NotLensReason::SlopeConditionFails)
            }
        }
        Knot::Cable { a, b, sign } => {
            let ab4 = 4 * a * b;
            let lens_slope = &ab4 + sign.value();
            let cabling_slope = &ab4 + 2 * sign.value();
            if slope.is_integral_value(&lens_slope) {
                lens_of(lens_slope, 4 * b * b)
            } else if slope.is_integral_value(&cabling_slope) {
                SurgeryResult::NotLens {
                    reason: NotLensReason::UnknownForFamily,
                    note: Some(CABLING_SLOPE_NOTE),
                }
            } else {
                SurgeryResult::not_lens(NotLensReason::SlopeConditionFails)
            }
        }
        Knot::Kplus { a, b } => {
            let order = kplus_order(a, b);
            if !slope.is_integral_value(&order) {
                return SurgeryResult::not_lens(NotLensReason::UnknownForFamily);
            }
            let ratio = inverse(b, &order)
                .map(|inv| reduce(&(a * inv), &order))
                .expect("b is a unit modulo a^2+ab+b^2");
            lens_of(order, &ratio * &ratio)
        }
        Knot::TangleHH { n: k } => {
            let order = tangle_hh_order(k);
            if slope.is_integral_value(&order) {
                let q: BigInt = BigInt::from(-9) * k * k - 12 * k - 5;
                lens_of(order, q)
            } else {
                SurgeryResult::not_lens(NotLensReason::UnknownForFamily)
            }
        }
        Knot::TangleTH { n: k } => {
            let order = tangle_th_order(k);
            if slope.is_integral_value(&order) {
                let q: BigInt = BigInt::from(-18) * k - 19;
                lens_of(order, q)
            } else {
                SurgeryResult::not_lens(NotLensReason::UnknownForFamily)
            }
        }
    }
}

fn kplus_order(a: &BigInt, b: &BigInt) -> BigInt {
    a * a + a * b + b * b
}

fn tangle_hh_order(n: &BigInt) -> BigInt {
    27 * n * n + 45 * n + 21
}

fn tangle_th_order(n: &BigInt) -> BigInt {
    18 * n * n + 33 * n + 15
}

/// The designated lens space slope of each non-torus family.
pub fn natural_slope(knot: &Knot) -> Option<Slope> {
    let m = match knot {
        Knot::Torus { .. } => return None,
        Knot::Cable { a, b, sign } => 4 * a * b + sign.value(),
        Knot::Kplus { a, b } => kplus_order(a, b),
        Knot::TangleHH { n } => tangle_hh_order(n),
        Knot::TangleTH { n } => tangle_th_order(n),
    };
    Some(Slope::integral(m))
}

pub fn genus(knot: &Knot) -> Option<BigInt> {
    match knot {
        Knot::Torus { p, q } => Some((p - 1) * (q - 1) / 2),
        Knot::Kplus { a, b } => {
            let s = a + b - 1;
            Some((&s * &s - a * b) / 2)
        }
        Knot::TangleHH { n } => Some((27 * n * n + 33 * n + 10) / 2),
        Knot::Cable { .. } | Knot::TangleTH { .. } => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distinctness {
    Equal,
    Distinct,
    Unknown,
}

impl Distinctness {
    pub fn tag(self) -> &'static str {
        match self {
            Distinctness::Equal => "equal",
            Distinctness::Distinct => "distinct",
            Distinctness::Unknown => "unknown",
        }
    }
}

/// `kplus(1,b)` is the `(b, b+1)`-torus knot.
fn kplus_torus_alias(knot: &Knot) -> Option<Knot> {
    match knot {
        Knot::Kplus { a, b } => {
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            (a.is_one() && b >= &BigInt::from(2)).then(|| Knot::Torus {
                p: b.clone(),
                q: b + 1,
            })
        }
        _ => None,
    }
}

/// A `kplus` knot whose dual has `Phi >= 2` is hyperbolic.
fn certified_hyperbolic(knot: &Knot) -> bool {
    match knot {
        Knot::Kplus { a, b } => kplus_phi(a, b).map(|s| s.is_hyperbolic()).unwrap_or(false),
        _ => false,
    }
}

/// Decides equivalence where an implemented invariant settles it.
pub fn distinct(k1: &Knot, k2: &Knot) -> Distinctness {
    use KnotFamily::*;
    let (n1, n2) = (k1.normalized(), k2.normalized());
    if n1.family() == n2.family() {
        return if n1 == n2 {
            Distinctness::Equal
        } else {
            Distinctness::Distinct
        };
    }
    for (x, y) in [(&n1, &n2), (&n2, &n1)] {
        if kplus_torus_alias(x).as_ref() == Some(y) {
            return Distinctness::Equal;
        }
    }
    if let (Some(g1), Some(g2)) = (genus(&n1), genus(&n2)) {
        if g1 != g2 {
            return Distinctness::Distinct;
        }
    }
    let pair = (n1.family(), n2.family());
    let torus_vs_other = matches!(
        pair,
        (Torus, Cable | TangleHH | TangleTH) | (Cable | TangleHH | TangleTH, Torus)
    );
    if torus_vs_other {
        return Distinctness::Distinct;
    }
    for (x, y) in [(&n1, &n2), (&n2, &n1)] {
        if matches!(y.family(), Torus | Cable) && certified_hyperbolic(x) {
            return Distinctness::Distinct;
        }
    }
    Distinctness::Unknown
}
