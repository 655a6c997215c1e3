//! Root systems, parabolic subgroups and invariant contact structures on
//! flag varieties of ADE type.
//!
//! * [`rootsys`], [`parabolic`]: exact root and weight combinatorics.
//! * [`classifier`]: which `b₂ = 1` flag varieties admit an invariant contact
//!   structure, and the weights of their contact line bundles.
//! * [`chevalley`]: Chevalley bases and an exact rank certificate for the
//!   contact form on the minimal nilpotent orbit's projectivization.
//! * [`isogr`]: floating-point model of the isotropic Grassmannian of 2-planes
//!   in `ℂ^{2n}` and its `SO_{2n}`-invariant contact distribution.
//! * [`cli`]: the `flagcontact` command-line front end.

pub mod chevalley;
pub mod classifier;
pub mod cli;
pub mod error;
pub mod exact;
pub mod isogr;
pub mod parabolic;
pub mod rootsys;

pub use error::{Error, Result};
