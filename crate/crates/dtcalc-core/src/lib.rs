//! Exact computation of intrinsic Donaldson-Thomas invariants.
//!
//! Everything runs over arbitrary-precision rationals; there is no floating
//! point anywhere. The crate is organized bottom-up:
//!
//! * [`exactq`] — rational linear algebra, cones in the double description,
//!   hyperplane arrangements (chambers and flats);
//! * [`motives`] — rational functions in the Lefschetz class `L` serving as
//!   motive realizations, and strata-supported motive classes;
//! * [`stackmodel`] — linear torus quotient stacks and table-declared
//!   stacks: special faces, special cones, Hall composition and induction;
//! * [`measures`] — stability measures on special cones, their prestability
//!   form, convolution, and Mobius inversion;
//! * [`epsilon`] — the chain-sum operators `pi^(k)` and `epsilon^(k)`;
//! * [`dtinv`] — Theta-stratifications from a linear form and the numerical
//!   and motivic DT invariants.

pub mod dtinv;
pub mod epsilon;
pub mod exactq;
pub mod measures;
pub mod motives;
pub mod stackmodel;

pub use exactq::{Arrangement, Cone, Rat, Subspace};
pub use motives::{RationalFn, StrataMotive, StratumClass};
pub use stackmodel::{ConeInFace, LinearTorusStack, StackModel, TableStack};
