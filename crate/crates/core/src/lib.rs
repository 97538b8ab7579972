//! Hyperbolic spin Calogero models obtained by Hamiltonian reduction of the
//! geodesic motion on the negative-curvature symmetric spaces
//! `SU(m,n)/S(U(m) x U(n))` and `SL(k,C)/SU(k)`.
//!
//! The crate is organized bottom-up:
//!
//! * [`algebra`]: Cartan decomposition, restricted roots, root basis and the
//!   functional calculus of `ad_q`.
//! * [`orbits`]: coadjoint orbits of `G_+`, the momentum map, the gauge slice
//!   and the single-point reduced orbits that produce spinless models.
//! * [`dynamics`]: the reduced Hamiltonian, Lax matrices, equations of motion,
//!   a direct adaptive integrator and the projection-method exact flow,
//!   invariants and their Poisson brackets.
//! * [`models`]: closed-form spinless Hamiltonians (`BC_n`, `C_n`, `D_n`, and
//!   the `A_{k-1}` Sutherland model).

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod models;
pub mod orbits;

pub use error::{Error, Result};
