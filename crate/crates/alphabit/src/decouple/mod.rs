//! Finite-dimension verification engine: see-saw lower bounds on k-diamond
//! norms, random encodings, decoupling Monte Carlo against exact Haar
//! oracles, Petz decoders, and the decodability/forgetfulness duality.

mod code;
mod diamond;
mod duality;
mod mc;
mod petz;

pub use code::{random_code, CodeSpec, EncodedInstance, Ensemble};
pub use diamond::{
    forgetfulness, k_diamond_lower, k_diamond_lower_seeded, DEFAULT_SEESAW_RESTARTS,
};
pub use duality::{
    duality_check, random_campaign_instance, total_error_check, DualityReport, TotalErrorReport,
};
pub use mc::{
    decoupling_mc, ea_decoupling_mc, ea_two_norm_bound, exact_haar_average,
    exact_haar_average_ea, forgetfulness_bound, two_norm_bound, DecouplingDims,
    ForgetfulnessReport,
};
pub use petz::{entanglement_fidelity, petz_decoder, subspace_decode_error};
