//! Spinor characters, Dirac indices and the Dirac and Euler-Poincaré pairings.

mod index;
mod provider;
mod spinor;

pub use index::{
    dirac_candidates, dirac_index_finite_dim, dirac_index_limits, dirac_pairing, ep_pairing_finite_dim, ep_terms,
    norm_matches, restrict_to_k, CandidateMode, DiracIndex, DiracPairing, HCParameter, PairingSummand, ParamKind,
};
pub use provider::{dirac_index_admissible, FiniteProvider, KTypeProvider, LadderProvider, SupportBound};
pub use spinor::{spinor_modules, wedge_p_alternating, wedge_p_degrees, SpinorPair};
