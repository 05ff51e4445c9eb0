//! Certified lower bounds on the concurrence of mixed quantum states.
//!
//! The bounds generalise the Wootters construction: for a symmetric operator
//! `S` built from products of antisymmetric generators, the spectrum of
//! `sqrt(rho) S rho* S^dagger sqrt(rho)` yields a quantity `Delta` that vanishes
//! on separable states and aggregates into a lower bound on `C(rho)^2`.
//! Bipartite (`m x n`) and tripartite (`d x d x d`) systems are covered, the
//! latter through a joint operator that also detects states separable across
//! every bipartition.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, timing and the
//! command-line front end live in the `concbound-cli` crate.
//!
//! Module map:
//! - [`numerics`]: dense complex kernels (Hermitian eigen, PSD sqrt, Takagi).
//! - [`states`]: density matrices, pure states, named families, random states.
//! - [`generators`]: the symmetric operator families `J_t`.
//! - [`bipartite`]: pure concurrence, `Delta_k`, the aggregate bipartite bound.
//! - [`multipartite`]: tripartite concurrence and its two mixed-state bounds.
//! - [`optimizer`]: coefficient search and threshold bisection.

#![no_std]

extern crate alloc;

pub mod bipartite;
pub mod error;
pub mod generators;
pub mod multipartite;
pub mod numerics;
pub mod optimizer;
pub mod report;
pub mod states;

pub use error::{Error, Result};
pub use generators::{Bipartition, GeneratorSet, TripartiteSplit};
pub use numerics::{CMatrix, C64};
pub use report::BoundReport;
pub use states::{Decomposition, DensityMatrix, PureState};

/// Detection threshold applied to `C^2` bounds.
pub const TOL_DETECT: f64 = 1e-7;
