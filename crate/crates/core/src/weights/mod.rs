//! Root data, Weyl groups and the virtual-character ring of K and K̃.

mod character;
mod datum;
mod lattice;

pub use character::{
    decompose, dim, dual, expand, g_character, irr_character, is_w_k_invariant, tensor, trivial, weyl_character,
    weyl_dimension,
};
pub use datum::{Chamber, DatumConfig, Rho, RootDatum, WeylGroupElement, WeylKind, PRESETS};
pub use lattice::{pair, Cover, LaurentElement, VirtualCharacter, Weight};
