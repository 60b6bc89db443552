//! Exact engine for fundamental groups of stable Godeaux surface
//! configurations.
//!
//! The crate is organised bottom up:
//!
//! * [`intlin`] holds exact integer linear algebra (Smith and Hermite forms,
//!   lattice membership, saturation).
//! * [`fpgroup`] holds finitely presented groups, coset enumeration and
//!   Tietze simplification.
//! * [`torus`] models complex tori through their homology lattices.
//! * [`vankampen`] computes fundamental groups of glued 2-complexes.
//! * [`scenarios`] is the bundled catalogue of configurations and the runner
//!   that checks each one.

pub mod fpgroup;
pub mod intlin;
pub mod scenarios;
pub mod torus;
pub mod vankampen;

mod parallel;

pub use parallel::enabled as parallel_enabled;
