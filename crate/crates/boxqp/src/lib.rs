//! Toolkit for box-constrained quadratic programs whose relaxation behavior
//! is known by construction.
//!
//! The objects of study are instances of
//!
//! ```text
//!     minimize  q(x) = 1/2 x'Qx + c'x    subject to  x in [0,1]^n
//! ```
//!
//! and two tractable lower bounds on their optimal value: the linear
//! relaxation that replaces each product `x_i x_j` by a variable `X_ij`
//! fenced in by its McCormick envelopes, and the semidefinite strengthening
//! that additionally requires `X - xx'` to be positive semidefinite.
//!
//! The crate provides, in matching modules:
//!
//! * [`numlin`]: dense symmetric eigendecomposition, semidefiniteness
//!   tests, and minimum-norm solves;
//! * [`model`]: instance data, index partitions, lifted points,
//!   certificates, and generator settings;
//! * [`rlt`]: the linear relaxation's closed-form underestimator, an exact
//!   lattice solver for it, feasibility and certificate checks;
//! * [`sdprlt`]: feasibility, certificates, and value pinning for the
//!   semidefinite strengthening (no SDP solver involved);
//! * [`oracle`]: exact global minimization by face enumeration, plus a grid
//!   search and local optimality checks;
//! * [`forge`]: seeded generators producing instances whose relaxation
//!   tightness is certified at construction time;
//! * [`classify`]: labeling an instance by how tight its relaxations are;
//! * [`io`]: a versioned JSON file format for instances, certificates, and
//!   reports.
//!
//! Everything is deterministic: generators are seeded, solvers break ties
//! lexicographically, and parallel enumeration merges results in a fixed
//! order.

mod error;

pub mod classify;
pub mod forge;
pub mod io;
pub mod model;
pub mod numlin;
pub mod oracle;
pub mod rlt;
pub mod sdprlt;

pub use error::{Error, Result};
pub use forge::{ForgedInstance, ForgedKind};
pub use model::{
    Band, BoxQpInstance, ExactnessLabel, ExactnessReport, ForgeSpec, IndexPartition, LiftedPoint,
    RltCert, SdpRltCert,
};
pub use numlin::{Mat, SymMatrix};
