//! Exact computation of twisted conjugacy (Reidemeister) spectra for
//! endomorphisms of lattices with finite holonomy, reconstruction of the
//! associated zeta function as an exact rational function, and the
//! iteration-theoretic invariants that follow from it.
//!
//! The crate is organized as a stack:
//!
//! * [`exactla`] — exact integer/rational linear algebra and integer
//!   polynomial factorization,
//! * [`numth`] — Möbius layer, extended naturals, congruence checks,
//! * [`spectrum`] — the averaging formula over holonomy and derived counts,
//! * [`classes`] — brute-force twisted conjugacy class enumeration (oracle),
//! * [`zeta`] — minimal recurrences, spectral decomposition, zeta as a
//!   rational function, companion realizations, growth rate,
//! * [`asymptotics`] — trichotomy classification, mod-2 period, parity and
//!   density/orbit bounds,
//! * [`samples`] — ready-made example specs and seeded random generators.

pub mod asymptotics;
pub mod classes;
pub mod error;
pub mod exactla;
pub mod numth;
pub mod samples;
pub mod spectrum;
pub mod zeta;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
