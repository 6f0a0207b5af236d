//! Exact-arithmetic laboratory for divisor concentration and sums of
//! powers.
//!
//! The crate computes, with no approximation anywhere an integer is
//! promised:
//!
//! * the divisor-concentration function Δ(n) and its mean values S(x) and
//!   𝔖(x), over segmented smallest-prime-factor sieves ([`factor`],
//!   [`delta`], [`mean`]);
//! * root counts of polynomial congruences mod prime powers, their
//!   exact-divisibility refinements over kernel periods, and the
//!   inequality checkers built on them ([`poly`], [`system`],
//!   [`congruence`]);
//! * weighted congruence-density sums E_R(v), Euler products over primes,
//!   and empirical box-sum comparisons ([`meanvalue`]);
//! * representation counts for weighted sums of powers with the moment
//!   split V_2 = V_2^= + V_2^≠, admissibility of exponent tuples, and
//!   growth experiments ([`powersum`]).
//!
//! Every counting path is paired with an independent oracle; [`verify`]
//! packages the cross-checks as report panels.

pub mod budget;
pub mod congruence;
pub mod delta;
pub mod error;
pub mod factor;
pub mod mean;
pub mod meanvalue;
pub mod poly;
pub mod powersum;
pub mod report;
pub mod system;
pub mod verify;

pub use budget::Budget;
pub use congruence::{CongruenceCount, CountMethod, ModulusVector, RhoMethod};
pub use error::{Error, Result};
pub use factor::{DivisorList, FactorTable};
pub use mean::{DeltaAlgorithm, MeanSums};
pub use meanvalue::{LiftedFunction, MultiArithmeticFunction};
pub use poly::MultiPoly;
pub use powersum::{AdmissibilityReport, ExtendMode, PowerSystem, VRecord};
pub use report::CheckReport;
pub use system::FactoredSystem;
