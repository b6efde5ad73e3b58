//! Saturating sets in projective planes and spaces.
//!
//! A point set `S` in a projective plane of order `q` is *saturating* if
//! every point outside `S` lies on a line meeting `S` in at least two
//! points. The `(1,μ)` generalization asks for at least `μ` such secants
//! through every external point, counted with multiplicity `C(r,2)` for an
//! `r`-secant. This crate provides:
//!
//! * exact arithmetic in `GF(q)` and construction of `PG(2,q)` / `PG(N,q)`
//!   ([`gf`], [`geometry`]),
//! * saturation verifiers with exact coverage multiplicities ([`saturation`]),
//! * seeded Las-Vegas constructors for random (multiple) saturating sets
//!   together with a Monte Carlo harness ([`randomized`]),
//! * closed-form and arbitrary-precision evaluation of every probability,
//!   count and size bound the constructions rely on ([`bounds`]),
//! * brute-force enumeration oracles that ground-truth the formulas
//!   ([`oracle`]),
//! * the parity-check / covering-code correspondence ([`codes`]).

pub mod bounds;
pub mod codes;
pub mod error;
pub mod geometry;
pub mod gf;
pub mod highprec;
pub mod oracle;
pub mod randomized;
pub mod saturation;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
