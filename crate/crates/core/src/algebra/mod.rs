//! Lie theory of the symmetric spaces `SU(m,n)/S(U(m) x U(n))` and `SL(k,C)/SU(k)`.

mod element;
pub mod functions;
mod space;
mod weyl;

pub use element::LieElement;
pub use functions::{AnalyticFn, Parity};
pub use space::{
    BasisCheck, CartanPoint, Decomposition, RestrictedRoot, RootKind, RootVector, SpaceSpec,
    Subspace, SymmetricSpace, EPS_MEMBERSHIP,
};
pub use weyl::{weyl_act, SignedPermutation};
