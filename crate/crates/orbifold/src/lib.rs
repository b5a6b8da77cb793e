//! Exact combinatorial invariants of orbifolds.
//!
//! An orbifold is presented here as a *labeled complex*: a finite simplicial
//! complex carrying a finite isotropy group on each simplex and a
//! monomorphism from each simplex's group into the group of each of its
//! facets, together with an optional declared boundary subcomplex. From that
//! presentation the crate computes, in exact rational arithmetic:
//!
//! * singular strata and the twisted-sector decomposition,
//! * Satake's orbifold and inner orbifold Euler characteristics,
//! * Roan's stringy Euler number and the Dixon et al. global-quotient
//!   Euler number,
//! * degree-shifting numbers and orbifold cohomology dimension tables,
//! * chart-level vector-field indices via winding numbers,
//!
//! and verifies the Gauss-Bonnet / Poincare-Hopf counting identities that
//! tie these quantities together, as exact equalities.

pub mod charts;
pub mod complex;
pub mod field;
pub mod gallery;
pub mod group;
pub mod homology;
pub mod invariants;
pub mod io;
pub mod model;
pub mod random;
pub mod rational;
pub mod sectors;

pub use complex::{ComplexError, Simplex, SimplicialComplex};
pub use group::{ConjugacyClass, FiniteGroup, GroupError, Monomorphism};
pub use homology::{ChainComplex, IntMatrix};
pub use rational::{rat, rat_int, rat_string, Rational};
