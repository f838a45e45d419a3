//! Explicit matrix models: Dirac operators on X ⊗ S, the space of K̃-maps
//! between them, and the relative Lie algebra complex computing Ext.

mod algebra;
mod dirac;
mod ext;
mod hom;
mod module;
mod spinor;
pub mod suite;

pub use algebra::{LabAlgebra, LAB_PRESETS};
pub use dirac::{
    alternate_p_basis, check_dirac_operator, diagonal_action, dirac_cohomology, dirac_matrix, dirac_matrix_in_basis,
    kernel_and_image, tensor_grading, tensor_odd, tensor_weights, verify_dsquared_scalar, verify_parthasarathy,
    CohomologyWeight, DiracCohomology, IsotypicScalar, ParthasarathyReport,
};
pub use ext::{
    conjecture_check, ext_complex, perturbation_export, split_operators, verify_split, ConjectureReport,
    SplitOperators, SplitReport, WedgeBasis,
};
pub use hom::{build_st, index_st, super_commutator, verify_st, STOperators, STReport, SuperHomSpace};
pub use module::MatrixHCModule;
pub use spinor::{build_spinor_matrices, SpinorMatrices};
pub use suite::{
    lab_conjecture, lab_conjecture_for, lab_identities, lab_identities_for, lab_modules, lab_perturbation_instances, ConjectureRow, ConjectureTable,
    IdentityReport, ModuleIdentityRow, PairIdentityRow,
};
