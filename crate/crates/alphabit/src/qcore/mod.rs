//! Dense complex linear algebra and quantum-state primitives for small
//! multipartite systems (total dimension up to a few thousand).

mod dims;
mod linalg;
mod random;
mod state;

pub use dims::DimsProfile;
pub use linalg::{
    basis_vec, c, dagger, exp_i_hermitian, hermitian_eigen, hermitian_eigenvalues,
    hermiticity_defect, identity, kron, max_abs, max_abs_diff, pinv_sqrt, polar_unitary, psd_sqrt,
    sign_hermitian, trace, trace_norm, CMatrix, CVector,
};
pub use random::{
    haar_isometry, haar_state, haar_unitary, random_clifford, random_density, rng_stream,
    standard_normal,
};
pub use state::{binary_entropy, fidelity, maximally_entangled, DensityOp, PureState};
