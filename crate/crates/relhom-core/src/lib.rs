//! Exact relative homological algebra over finite-dimensional algebras.
//!
//! The library makes a slice of torsion-theoretic homological algebra
//! executable at desk scale: finite-dimensional modules over a
//! finite-dimensional algebra over a prime field form a Grothendieck
//! category in which hereditary torsion theories, localizations, local
//! cohomology, relative injective resolutions and the model-approximation
//! axioms can all be computed and machine-checked with exact arithmetic.
//!
//! Layout mirrors the mathematical layers:
//! - [`fp`]: dense exact linear algebra over F_p;
//! - [`algmod`]: algebras, modules, morphisms, socles, envelopes;
//! - [`torsion`]: hereditary torsion theories, injective classes,
//!   localization, the spectrum;
//! - [`localcoh`]: minimal injective resolutions and local cohomology;
//! - [`chx`]: cochain complexes and the relative model structure on
//!   half-bounded complexes;
//! - [`towers`]: towers of half-bounded complexes and the
//!   model-approximation checker;
//! - [`report`] / [`suites`]: machine-readable verdicts and the named
//!   verification suites used by the CLI and the acceptance tests.

pub mod algmod;
pub mod chx;
pub mod fixtures;
pub mod fp;
pub mod localcoh;
pub mod report;
pub mod suites;
pub mod torsion;
pub mod towers;
