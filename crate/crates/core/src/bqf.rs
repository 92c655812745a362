//! Integral binary quadratic forms `f(x,y) = Ax^2 + Bxy + Cy^2` of positive
//! nonsquare discriminant, solved by the unit-orbit method.
//!
//! The norm-one units of the order `O_D = Z[rho]` act on the solutions of
//! `f(x,y) = m`; every orbit has a representative with `0 <= y <= U`, where
//! `U` depends only on `A m`, `D` and the fundamental unit `tau`. Solving the
//! quadratic in `x` for each such `y` lists one solution per orbit, and
//! iterating `tau` from each representative walks its orbit.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{coprime, is_perfect_square, square_root_u128};

/// Default number of `v` values tried by [`fundamental_unit`].
pub const DEFAULT_UNIT_SEARCH_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BqfError {
    #[error("discriminant {0} is not a positive nonsquare")]
    NotApplicable(BigInt),
    #[error("{0} is not a discriminant (must be 0 or 1 mod 4)")]
    NotADiscriminant(BigInt),
    #[error("no norm-one unit with v <= {cap} for discriminant {delta}")]
    CapExceeded { delta: BigInt, cap: u64 },
    #[error("{0} does not have norm 1")]
    InvalidUnit(UnitElement),
    #[error("the right-hand side m must be nonzero")]
    ZeroTarget,
    #[error("generated {0} does not solve the equation")]
    SolutionCheckFailed(FormSolution),
    #[error("invalid range: {0}")]
    InvalidRange(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadForm {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    delta: BigInt,
}

impl QuadForm {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
    ) -> Result<Self, BqfError> {
        let (a, b, c) = (a.into(), b.into(), c.into());
        let delta: BigInt = &b * &b - 4 * &a * &c;
        if !delta.is_positive() || is_perfect_square(&delta).is_some() {
            return Err(BqfError::NotApplicable(delta));
        }
        Ok(QuadForm { a, b, c, delta })
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn delta(&self) -> &BigInt {
        &self.delta
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    pub fn is_solution(&self, sol: &FormSolution, m: &BigInt) -> bool {
        self.eval(&sol.x, &sol.y) == *m
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (coef, var) in [(&self.a, "x^2"), (&self.b, "xy"), (&self.c, "y^2")] {
            if coef.is_zero() {
                continue;
            }
            let sign = if coef.is_negative() { "-" } else { "+" };
            match (first, coef.is_negative()) {
                (true, false) => {}
                (true, true) => f.write_str("-")?,
                (false, _) => write!(f, " {sign} ")?,
            }
            let mag = coef.abs();
            if !mag.is_one() {
                write!(f, "{mag}")?;
            }
            f.write_str(var)?;
            first = false;
        }
        Ok(())
    }
}

/// `u + v*rho`, with `rho = sqrt(D)/2` or `(1 + sqrt(D))/2` by `D mod 4`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnitElement {
    pub u: BigInt,
    pub v: BigInt,
}

impl fmt::Display for UnitElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*rho", self.u, self.v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormSolution {
    pub x: BigInt,
    pub y: BigInt,
}

impl FormSolution {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        FormSolution {
            x: x.into(),
            y: y.into(),
        }
    }

    fn negated(&self) -> Self {
        FormSolution {
            x: -&self.x,
            y: -&self.y,
        }
    }

    fn size(&self) -> BigInt {
        self.x.abs().max(self.y.abs())
    }
}

impl fmt::Display for FormSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

fn is_zero_mod_4(delta: &BigInt) -> bool {
    delta.mod_floor(&BigInt::from(4)).is_zero()
}

/// `N(u + v rho)`.
pub fn norm(delta: &BigInt, unit: &UnitElement) -> BigInt {
    let (u, v) = (&unit.u, &unit.v);
    if is_zero_mod_4(delta) {
        u * u - (delta / 4) * v * v
    } else {
        u * u + u * v - ((delta - 1) / 4) * v * v
    }
}

/// `tau + conj(tau)`.
fn trace(delta: &BigInt, unit: &UnitElement) -> BigInt {
    if is_zero_mod_4(delta) {
        2 * &unit.u
    } else {
        2 * &unit.u + &unit.v
    }
}

fn conjugate(delta: &BigInt, unit: &UnitElement) -> UnitElement {
    if is_zero_mod_4(delta) {
        UnitElement {
            u: unit.u.clone(),
            v: -&unit.v,
        }
    } else {
        UnitElement {
            u: &unit.u + &unit.v,
            v: -&unit.v,
        }
    }
}

fn check_discriminant(delta: &BigInt) -> Result<(), BqfError> {
    if !delta.is_positive() || is_perfect_square(delta).is_some() {
        return Err(BqfError::NotApplicable(delta.clone()));
    }
    let r = delta.mod_floor(&BigInt::from(4));
    if r != BigInt::zero() && r != BigInt::one() {
        return Err(BqfError::NotADiscriminant(delta.clone()));
    }
    Ok(())
}

pub fn fundamental_unit(delta: &BigInt) -> Result<UnitElement, BqfError> {
    fundamental_unit_with_cap(delta, DEFAULT_UNIT_SEARCH_CAP)
}

/// The smallest norm-one unit `tau > 1`, found by trying `v = 1, 2, ...`.
///
/// A unit `u + v rho > 1` of norm one has real value `(r + v sqrt(D))/2` with
/// `r^2 = D v^2 + 4`, and grows with `v`, so the first `v` for which
/// `D v^2 + 4` is a square gives `tau`.
pub fn fundamental_unit_with_cap(delta: &BigInt, cap: u64) -> Result<UnitElement, BqfError> {
    check_discriminant(delta)?;
    let zero_mod_4 = is_zero_mod_4(delta);
    let unit_from = |r: BigInt, v: BigInt| {
        let u = if zero_mod_4 { r / 2 } else { (r - &v) / 2 };
        UnitElement { u, v }
    };
    let word_delta = delta.to_u64().filter(|_| cap < (1 << 31));
    match word_delta {
        Some(d) => {
            let d = d as u128;
            for v in 1..=cap as u128 {
                if let Some(r) = square_root_u128(d * v * v + 4) {
                    return Ok(unit_from(r.into(), v.into()));
                }
            }
        }
        None => {
            let mut v = BigInt::zero();
            for _ in 0..cap {
                v += 1;
                if let Some(r) = is_perfect_square(&(delta * &v * &v + 4)) {
                    return Ok(unit_from(r, v));
                }
            }
        }
    }
    Err(BqfError::CapExceeded {
        delta: delta.clone(),
        cap,
    })
}

/// The representative window `0 <= y <= U`, kept exact as `U^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundU {
    pub u_squared: BigRational,
    pub floor: BigInt,
}

impl BoundU {
    fn new(u_squared: BigRational) -> Self {
        let floor = u_squared.floor().to_integer().sqrt();
        BoundU { u_squared, floor }
    }

    /// Whether `U` itself is an integer.
    pub fn is_integral(&self) -> bool {
        self.u_squared.is_integer() && &self.floor * &self.floor == self.u_squared.to_integer()
    }
}

/// `U^2 = |A m (tau + conj(tau) - 2)/D|` when `Am > 0`, with `+2` when `Am < 0`.
pub fn bound_u(form: &QuadForm, m: &BigInt) -> Result<BoundU, BqfError> {
    let tau = fundamental_unit(&form.delta)?;
    bound_u_with_unit(form, m, &tau)
}

fn bound_u_with_unit(form: &QuadForm, m: &BigInt, tau: &UnitElement) -> Result<BoundU, BqfError> {
    if m.is_zero() {
        return Err(BqfError::ZeroTarget);
    }
    let am = &form.a * m;
    let shift = if am.is_positive() { -2 } else { 2 };
    let shifted: BigInt = trace(&form.delta, tau) + shift;
    let num = (&am * shifted).abs();
    Ok(BoundU::new(BigRational::new(num, form.delta.clone())))
}

/// All integer `x` with `f(x, y) = m`.
fn solve_for_x(form: &QuadForm, m: &BigInt, y: &BigInt) -> Vec<BigInt> {
    let disc = &form.delta * y * y + 4 * &form.a * m;
    let Some(r) = is_perfect_square(&disc) else {
        return Vec::new();
    };
    let two_a = 2 * &form.a;
    let by = &form.b * y;
    let mut xs: Vec<BigInt> = [-&by + &r, -&by - &r]
        .into_iter()
        .filter_map(|num| {
            let (q, rem) = num.div_rem(&two_a);
            rem.is_zero().then_some(q)
        })
        .collect();
    xs.sort();
    xs.dedup();
    xs
}

/// Among solutions known to share an orbit, the one with smallest `|x|`,
/// preferring positive `x`.
fn preferred(mut group: Vec<FormSolution>) -> Option<FormSolution> {
    group.sort_by(|s, t| (s.x.abs(), -&s.x).cmp(&(t.x.abs(), -&t.x)));
    group.into_iter().next()
}

/// One solution per unit orbit, sorted by `(y, x)`.
pub fn orbit_representatives(form: &QuadForm, m: &BigInt) -> Result<Vec<FormSolution>, BqfError> {
    let tau = fundamental_unit(&form.delta)?;
    orbit_representatives_with_unit(form, m, &tau)
}

fn orbit_representatives_with_unit(
    form: &QuadForm,
    m: &BigInt,
    tau: &UnitElement,
) -> Result<Vec<FormSolution>, BqfError> {
    let bound = bound_u_with_unit(form, m, tau)?;
    let mut reps = Vec::new();
    let mut y = BigInt::zero();
    while y <= bound.floor {
        let row: Vec<_> = solve_for_x(form, m, &y)
            .into_iter()
            .map(|x| FormSolution { x, y: y.clone() })
            .collect();
        // Solutions on the edges y = 0 and y = U lie in a single orbit.
        let edge = y.is_zero() || (bound.is_integral() && y == bound.floor);
        if edge {
            reps.extend(preferred(row));
        } else {
            reps.extend(row);
        }
        y += 1;
    }
    Ok(reps)
}

/// Right action matrix `[[m00, m01], [m10, m11]]` of `u + v rho` on row vectors.
fn action_matrix(form: &QuadForm, unit: &UnitElement) -> [[BigInt; 2]; 2] {
    let (u, v) = (&unit.u, &unit.v);
    let (a, b, c) = (&form.a, &form.b, &form.c);
    if is_zero_mod_4(&form.delta) {
        let half_b = b / 2;
        [[u - &half_b * v, a * v], [-(c * v), u + &half_b * v]]
    } else {
        let lo = (1 - b) / 2;
        let hi = (1 + b) / 2;
        [[u + lo * v, a * v], [-(c * v), u + hi * v]]
    }
}

/// The image of `sol` under `unit` (or its inverse).
pub fn apply_unit(
    form: &QuadForm,
    sol: &FormSolution,
    unit: &UnitElement,
    inverse: bool,
) -> Result<FormSolution, BqfError> {
    if !norm(&form.delta, unit).is_one() {
        return Err(BqfError::InvalidUnit(unit.clone()));
    }
    let unit = if inverse {
        conjugate(&form.delta, unit)
    } else {
        unit.clone()
    };
    Ok(act(form, sol, &unit))
}

fn act(form: &QuadForm, sol: &FormSolution, unit: &UnitElement) -> FormSolution {
    let [[m00, m01], [m10, m11]] = action_matrix(form, unit);
    FormSolution {
        x: &sol.x * m00 + &sol.y * m10,
        y: &sol.x * m01 + &sol.y * m11,
    }
}

/// The first `count` points `tau^j * rep` of every orbit, each checked
/// against the equation.
pub fn generate_solutions(
    form: &QuadForm,
    m: &BigInt,
    count: usize,
) -> Result<Vec<FormSolution>, BqfError> {
    let tau = fundamental_unit(&form.delta)?;
    let reps = orbit_representatives_with_unit(form, m, &tau)?;
    let mut out = Vec::with_capacity(reps.len() * count);
    for rep in reps {
        let mut cur = rep;
        for _ in 0..count {
            if !form.is_solution(&cur, m) {
                return Err(BqfError::SolutionCheckFailed(cur));
            }
            let next = act(form, &cur, &tau);
            out.push(std::mem::replace(&mut cur, next));
        }
    }
    Ok(out)
}

/// Every point `+-tau^j * rep` (all integers `j`) with `|x|, |y| <= bound`.
///
/// Along an orbit `max(|x|, |y|)` is quasi-convex in `j`, so a walk can stop
/// once it is outside the box and still growing.
pub fn orbit_points_in_box(
    form: &QuadForm,
    m: &BigInt,
    bound: &BigInt,
) -> Result<Vec<FormSolution>, BqfError> {
    let tau = fundamental_unit(&form.delta)?;
    let tau_inv = conjugate(&form.delta, &tau);
    let reps = orbit_representatives_with_unit(form, m, &tau)?;
    let mut found = BTreeSet::new();
    for rep in &reps {
        for start in [rep.clone(), rep.negated()] {
            for step in [&tau, &tau_inv] {
                let mut cur = start.clone();
                let mut prev_size: Option<BigInt> = None;
                loop {
                    let size = cur.size();
                    if size <= *bound {
                        found.insert(cur.clone());
                    } else if prev_size.as_ref().is_some_and(|p| size > *p) {
                        break;
                    }
                    let next = act(form, &cur, step);
                    prev_size = Some(size);
                    cur = next;
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// All solutions with `|x|, |y| <= bound`, by scanning every `y` in the box
/// and solving for `x` with an exact square root. Independent of the unit
/// machinery; used as ground truth.
pub fn solutions_in_box(form: &QuadForm, m: &BigInt, bound: &BigInt) -> Vec<FormSolution> {
    let mut found = BTreeSet::new();
    let mut y = -bound.clone();
    while &y <= bound {
        for x in solve_for_x(form, m, &y) {
            if x.abs() <= *bound && form.eval(&x, &y) == *m {
                found.insert(FormSolution { x, y: y.clone() });
            }
        }
        y += 1;
    }
    found.into_iter().collect()
}

/// A tuple where `nabc + e` divides `b^2 + s c^2`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DivisibilityHit {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub n: u64,
    /// `+1` for `b^2 + c^2`, `-1` for `b^2 - c^2`.
    pub square_sign: i8,
    /// `+1` for `nabc + 1`, `-1` for `nabc - 1`.
    pub divisor_sign: i8,
}

impl fmt::Display for DivisibilityHit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pm = |s: i8| if s > 0 { '+' } else { '-' };
        let (a, b, c, n) = (
            self.a as u128,
            self.b as u128,
            self.c as u128,
            self.n as u128,
        );
        let divisor = (n * a * b * c) as i128 + self.divisor_sign as i128;
        write!(
            f,
            "a={} b={} c={} n={}: {} | b^2{}c^2",
            self.a,
            self.b,
            self.c,
            self.n,
            divisor,
            pm(self.square_sign)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DivisibilityReport {
    pub tuples_checked: u64,
    pub counterexamples: Vec<DivisibilityHit>,
}

/// Scans `a, b, c, n` with `gcd(a,b) = gcd(a,c) = 1` for `nabc +- 1` dividing
/// `b^2 +- c^2`. With `a > 1` and `n >= 3` no hit is expected. `b = c` with
/// the difference is skipped since `0` is divisible by everything.
pub fn divisibility_scan(
    a_range: RangeInclusive<u64>,
    b_range: RangeInclusive<u64>,
    c_range: RangeInclusive<u64>,
    n_range: RangeInclusive<u64>,
) -> Result<DivisibilityReport, BqfError> {
    if *n_range.start() < 3 {
        return Err(BqfError::InvalidRange("n must be at least 3"));
    }
    if *a_range.start() < 1 || *b_range.start() < 1 || *c_range.start() < 1 {
        return Err(BqfError::InvalidRange("a, b, c must be positive"));
    }
    let per_a: Vec<DivisibilityReport> = a_range
        .clone()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|a| divisibility_for_a(a, &b_range, &c_range, &n_range))
        .collect();
    let mut report = DivisibilityReport::default();
    for part in per_a {
        report.tuples_checked += part.tuples_checked;
        report.counterexamples.extend(part.counterexamples);
    }
    Ok(report)
}

fn divisibility_for_a(
    a: u64,
    b_range: &RangeInclusive<u64>,
    c_range: &RangeInclusive<u64>,
    n_range: &RangeInclusive<u64>,
) -> DivisibilityReport {
    let mut report = DivisibilityReport::default();
    let big_a = BigInt::from(a);
    for b in b_range.clone() {
        let big_b = BigInt::from(b);
        if !coprime(&big_a, &big_b) {
            continue;
        }
        for c in c_range.clone() {
            let big_c = BigInt::from(c);
            if !coprime(&big_a, &big_c) {
                continue;
            }
            let abc = &big_a * &big_b * &big_c;
            for n in n_range.clone() {
                report.tuples_checked += 1;
                let nabc = &abc * n;
                for square_sign in [1i8, -1] {
                    let numerator = &big_b * &big_b + i64::from(square_sign) * &big_c * &big_c;
                    if numerator.is_zero() {
                        continue;
                    }
                    for divisor_sign in [1i8, -1] {
                        let divisor = &nabc + i64::from(divisor_sign);
                        if numerator.mod_floor(&divisor).is_zero() {
                            report.counterexamples.push(DivisibilityHit {
                                a,
                                b,
                                c,
                                n,
                                square_sign,
                                divisor_sign,
                            });
                        }
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use proptest::prelude::*;

    fn form(a: i64, b: i64, c: i64) -> QuadForm {
        QuadForm::new(a, b, c).unwrap()
    }

    fn sols(v: &[(i64, i64)]) -> Vec<FormSolution> {
        v.iter().map(|&(x, y)| FormSolution::new(x, y)).collect()
    }

    fn unit(u: i64, v: i64) -> UnitElement {
        UnitElement {
            u: int(u),
            v: int(v),
        }
    }

    /// Naive double loop over the box.
    fn box_scan(f: &QuadForm, m: i64, bound: i64) -> Vec<FormSolution> {
        let mut out = Vec::new();
        for x in -bound..=bound {
            for y in -bound..=bound {
                if f.eval(&int(x), &int(y)) == int(m) {
                    out.push(FormSolution::new(x, y));
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn display() {
        assert_eq!(form(1, -6, 1).to_string(), "x^2 - 6xy + y^2");
        assert_eq!(form(-2, 0, 3).to_string(), "-2x^2 + 3y^2");
    }

    #[test]
    fn rejects_degenerate_forms() {
        assert!(matches!(
            QuadForm::new(1, 0, -4),
            Err(BqfError::NotApplicable(_))
        ));
        assert!(matches!(
            QuadForm::new(1, 0, 1),
            Err(BqfError::NotApplicable(_))
        ));
        assert!(matches!(
            QuadForm::new(0, 3, 1),
            Err(BqfError::NotApplicable(_))
        ));
        assert_eq!(form(1, -6, 1).delta(), &int(32));
    }

    #[test]
    fn fundamental_unit_examples() {
        assert_eq!(fundamental_unit(&int(32)).unwrap(), unit(3, 1));
        assert_eq!(fundamental_unit(&int(5)).unwrap(), unit(1, 1));
        assert_eq!(
            fundamental_unit(&int(36)),
            Err(BqfError::NotApplicable(int(36)))
        );
        assert_eq!(
            fundamental_unit(&int(-8)),
            Err(BqfError::NotApplicable(int(-8)))
        );
        assert_eq!(
            fundamental_unit(&int(7)),
            Err(BqfError::NotADiscriminant(int(7)))
        );
        assert_eq!(fundamental_unit(&int(8)).unwrap(), unit(3, 2));
        // x^2 - 61 y^2 = 1 has y = 226153980.
        assert!(matches!(
            fundamental_unit_with_cap(&int(244), 10_000),
            Err(BqfError::CapExceeded { .. })
        ));
    }

    #[test]
    fn fundamental_unit_is_minimal() {
        for delta in 2..400i64 {
            let d = int(delta);
            let Ok(tau) = fundamental_unit_with_cap(&d, 100_000) else {
                continue;
            };
            assert!(norm(&d, &tau).is_one());
            let v = tau.v.to_i64().unwrap();
            for v2 in 1..v {
                // any norm-one u + v2 rho needs D v2^2 + 4 to be square
                assert!(
                    is_perfect_square(&(&d * v2 * v2 + 4)).is_none(),
                    "D={delta}"
                );
            }
        }
    }

    /// `(u + v rho)^2` in `O_D`.
    fn square(delta: &BigInt, e: &UnitElement) -> UnitElement {
        let (u, v) = (&e.u, &e.v);
        if is_zero_mod_4(delta) {
            UnitElement {
                u: u * u + (delta / 4) * v * v,
                v: 2 * u * v,
            }
        } else {
            // rho^2 = rho + (D-1)/4
            UnitElement {
                u: u * u + ((delta - 1) / 4) * v * v,
                v: 2 * u * v + v * v,
            }
        }
    }

    #[test]
    fn unit_closed_forms() {
        for t in 3i64..=12 {
            // D = t^2 - 4: tau = (t + sqrt(D))/2
            let d = int(t * t - 4);
            let expected = if t % 2 == 0 {
                unit(t / 2, 1)
            } else {
                unit((t - 1) / 2, 1)
            };
            assert_eq!(fundamental_unit(&d).unwrap(), expected, "t={t}");
            // D = t^2 + 4: tau is the square of the norm -1 unit (t + sqrt(D))/2
            let d = int(t * t + 4);
            let eps = if t % 2 == 0 {
                unit(t / 2, 1)
            } else {
                unit((t - 1) / 2, 1)
            };
            assert_eq!(norm(&d, &eps), int(-1));
            assert_eq!(fundamental_unit(&d).unwrap(), square(&d, &eps), "t={t}");
        }
        assert_eq!(fundamental_unit(&int(40)).unwrap(), unit(19, 6));
    }

    #[test]
    fn big_integer_search_path() {
        // D = t^2 - 4 has the unit with v = 1 and r = t.
        let t = (int(1) << 40) + 1;
        let delta = &t * &t - 4;
        let tau = fundamental_unit(&delta).unwrap();
        assert_eq!(
            tau,
            UnitElement {
                u: (&t - 1) / 2,
                v: int(1)
            }
        );
        assert!(norm(&delta, &tau).is_one());
        // a cap of 2^31 forces the arbitrary-precision loop
        assert_eq!(
            fundamental_unit_with_cap(&int(32), 1 << 31).unwrap(),
            unit(3, 1)
        );
        assert_eq!(
            fundamental_unit_with_cap(&int(13), 1 << 31).unwrap(),
            fundamental_unit(&int(13)).unwrap()
        );
    }

    #[test]
    fn bound_examples() {
        let f = form(1, -6, 1);
        let b = bound_u(&f, &int(1)).unwrap();
        assert_eq!(b.u_squared, BigRational::new(int(4), int(32)));
        assert_eq!(b.floor, int(0));
        let b = bound_u(&f, &int(-1)).unwrap();
        assert_eq!(b.u_squared, BigRational::new(int(8), int(32)));
        assert_eq!(b.floor, int(0));
        let g = form(1, -6, -1);
        let b = bound_u(&g, &int(1)).unwrap();
        assert!(b.u_squared < BigRational::one());
        let b = bound_u(&g, &int(-1)).unwrap();
        assert!(b.is_integral());
        assert_eq!(b.floor, int(1));
        assert_eq!(bound_u(&f, &int(0)), Err(BqfError::ZeroTarget));
    }

    #[test]
    fn representative_examples() {
        assert_eq!(
            orbit_representatives(&form(1, -6, 1), &int(1)).unwrap(),
            sols(&[(1, 0)])
        );
        assert_eq!(
            orbit_representatives(&form(1, -6, 1), &int(-1)).unwrap(),
            sols(&[])
        );
        assert_eq!(
            orbit_representatives(&form(1, -6, -1), &int(-1)).unwrap(),
            sols(&[(0, 1)])
        );
    }

    #[test]
    fn action_examples() {
        let f = form(1, -6, 1);
        let tau = unit(3, 1);
        assert_eq!(
            action_matrix(&f, &tau),
            [[int(6), int(1)], [int(-1), int(0)]]
        );
        let s = apply_unit(&f, &FormSolution::new(1, 0), &tau, false).unwrap();
        assert_eq!(s, FormSolution::new(6, 1));
        let s = apply_unit(&f, &s, &tau, false).unwrap();
        assert_eq!(s, FormSolution::new(35, 6));
        let back = apply_unit(&f, &s, &tau, true).unwrap();
        assert_eq!(back, FormSolution::new(6, 1));

        let g = form(1, -6, -1);
        let tau_g = fundamental_unit(g.delta()).unwrap();
        assert_eq!(tau_g, unit(19, 6));
        assert_eq!(
            action_matrix(&g, &tau_g),
            [[int(37), int(6)], [int(6), int(1)]]
        );
        let s = apply_unit(&g, &FormSolution::new(0, 1), &tau_g, false).unwrap();
        assert_eq!(s, FormSolution::new(6, 1));

        assert!(matches!(
            apply_unit(&f, &FormSolution::new(1, 0), &unit(2, 1), false),
            Err(BqfError::InvalidUnit(_))
        ));
    }

    #[test]
    fn generated_examples() {
        let f = form(1, -6, 1);
        assert_eq!(
            generate_solutions(&f, &int(1), 3).unwrap(),
            sols(&[(1, 0), (6, 1), (35, 6)])
        );
        assert!(generate_solutions(&f, &int(-1), 3).unwrap().is_empty());
        let g = form(1, -6, -1);
        assert_eq!(
            generate_solutions(&g, &int(-1), 2).unwrap(),
            sols(&[(0, 1), (6, 1)])
        );
    }

    #[test]
    fn box_examples() {
        let f = form(1, -6, 1);
        let expected = sols(&[
            (-35, -6),
            (-6, -35),
            (-6, -1),
            (-1, -6),
            (-1, 0),
            (0, -1),
            (0, 1),
            (1, 0),
            (1, 6),
            (6, 1),
            (6, 35),
            (35, 6),
        ]);
        assert_eq!(solutions_in_box(&f, &int(1), &int(40)), expected);
        assert_eq!(box_scan(&f, 1, 40), expected);
        assert!(solutions_in_box(&f, &int(2), &int(40)).is_empty());
        let h = form(1, -3, 1);
        assert_eq!(solutions_in_box(&h, &int(1), &int(10)), box_scan(&h, 1, 10));
        assert_eq!(
            orbit_points_in_box(&f, &int(1), &int(40)).unwrap(),
            expected
        );
    }

    #[test]
    fn divisible_coordinate_property() {
        for q in [1i64, 4] {
            for n in [3i64, 4] {
                for a in [2i64, 3, 5] {
                    let qna = q * n * a;
                    for (f, m) in [
                        (form(1, -qna, 1), q),
                        (form(1, -qna, -1), q),
                        (form(1, -qna, -1), -q),
                    ] {
                        for s in solutions_in_box(&f, &int(m), &int(10_000)) {
                            if s.x.is_positive() && s.y.is_positive() {
                                assert!(
                                    (&s.x % a).is_zero() || (&s.y % a).is_zero(),
                                    "{f} = {m}: {s}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn divisibility_hits() {
        let r = divisibility_scan(2..=8, 1..=30, 1..=30, 3..=5).unwrap();
        assert!(r.counterexamples.is_empty(), "{:?}", r.counterexamples);
        assert!(r.tuples_checked > 0);
        let r = divisibility_scan(2..=2, 1..=5, 1..=5, 3..=3).unwrap();
        assert!(r.counterexamples.is_empty());
        assert_eq!(r.tuples_checked, 9);
        let r = divisibility_scan(1..=1, 1..=10, 1..=10, 3..=3).unwrap();
        let unit_a_hit = DivisibilityHit {
            a: 1,
            b: 3,
            c: 8,
            n: 3,
            square_sign: 1,
            divisor_sign: 1,
        };
        assert!(r.counterexamples.contains(&unit_a_hit));
        assert_eq!(unit_a_hit.to_string(), "a=1 b=3 c=8 n=3: 73 | b^2+c^2");
        assert!(divisibility_scan(2..=3, 1..=3, 1..=3, 2..=3).is_err());
    }

    fn small_form() -> impl Strategy<Value = (QuadForm, i64)> {
        (-12i64..=12, -12i64..=12, -12i64..=12, -10i64..=10).prop_filter_map(
            "positive nonsquare discriminant",
            |(a, b, c, m)| {
                let f = QuadForm::new(a, b, c).ok()?;
                (m != 0 && fundamental_unit_with_cap(f.delta(), 20_000).is_ok()).then_some((f, m))
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn orbits_cover_the_box((f, m) in small_form()) {
            let m = int(m);
            let bound = int(10_000);
            for s in generate_solutions(&f, &m, 4).unwrap() {
                prop_assert!(f.is_solution(&s, &m));
            }
            prop_assert_eq!(orbit_points_in_box(&f, &m, &bound).unwrap(), solutions_in_box(&f, &m, &bound));
        }

        #[test]
        fn unit_action_round_trips((f, m) in small_form()) {
            let m = int(m);
            let tau = fundamental_unit(f.delta()).unwrap();
            for rep in orbit_representatives(&f, &m).unwrap() {
                prop_assert!(f.is_solution(&rep, &m));
                prop_assert!(rep.y >= BigInt::zero());
                let there = apply_unit(&f, &rep, &tau, true).unwrap();
                prop_assert!(f.is_solution(&there, &m));
                prop_assert_eq!(apply_unit(&f, &there, &tau, false).unwrap(), rep);
            }
        }
    }
}
