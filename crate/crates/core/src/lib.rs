//! Lens space surgeries on torus, cable, doubly primitive and tangle knots,
//! with exact arithmetic throughout.
//!
//! The crate computes the lens spaces produced by Dehn surgery on five knot
//! families, classifies lens spaces up to (oriented) homeomorphism, evaluates
//! the dual-knot invariant `Phi`, solves integral binary quadratic forms by
//! the unit-orbit method, and searches for distinct knots that produce
//! homeomorphic lens spaces by the same surgery.

pub mod arith;
pub mod bqf;
pub mod dual;
pub mod knots;
pub mod lens;
pub mod search;
pub mod sequences;

pub use arith::{gcd, is_perfect_square, mod_inv, mod_norm, ArithError, Residue};
pub use bqf::{
    apply_unit, bound_u, divisibility_scan, fundamental_unit, generate_solutions,
    orbit_points_in_box, orbit_representatives, solutions_in_box, BqfError, FormSolution, QuadForm,
    UnitElement,
};
pub use dual::{basic_stats, kplus_dual, kplus_is_hyperbolic, BasicSequenceStats, DualKnotTriple};
pub use knots::{
    distinct, genus, lens_surgery, natural_slope, Distinctness, Knot, Slope, SurgeryResult,
};
pub use lens::{homeomorphic, oriented_homeomorphic, LensClass, LensSpace};
pub use search::{
    enumerate_surgeries, find_coincidences, summarize, verify_family, verify_no_nonintegral_pairs,
    CoincidenceRecord, FamilyTag, SearchConfig, SearchError,
};
