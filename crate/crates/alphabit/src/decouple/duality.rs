//! Duality between subspace decodability and environment forgetfulness,
//! plus subadditivity of the total error across parallel transmissions.

use rand::Rng;

use super::code::EncodedInstance;
use super::diamond::{forgetfulness, k_diamond_lower};
use super::petz::{petz_decoder, subspace_decode_error};
use crate::channels::Channel;
use crate::qcore::{haar_isometry, trace_norm, PureState};
use crate::{Error, Result};

/// Outcome of one duality check on an encoded instance.
#[derive(Clone, Copy, Debug)]
pub struct DualityReport {
    /// Worst Petz decode error over the sampled subspaces.
    pub delta: f64,
    /// Forgetfulness lower bound of the complementary channel at level k.
    pub epsilon: f64,
    /// Converse bound 8·√δ (+ tolerance) that ε may not exceed.
    pub converse_rhs: f64,
    pub converse_ok: bool,
    /// Forward bound 2·√(2ε): a guarantee for the best decoder, recorded
    /// for the Petz decoder as a diagnostic only.
    pub forward_rhs: f64,
    pub forward_ok: bool,
    pub subspaces: usize,
}

/// Sample random subspaces of the code space, decode each with its Petz
/// decoder, and compare the worst decode error δ against the forgetfulness
/// ε of the complementary channel.
///
/// Any constructed decoder witnesses the converse direction, so
/// ε ≤ 8·√δ + 1e-6 is asserted in the report; the forward direction
/// δ ≤ 2·√(2ε) holds for the optimal decoder and may fail for Petz, so it
/// is only recorded.
pub fn duality_check<R: Rng + ?Sized>(
    inst: &EncodedInstance,
    k: usize,
    n_subspaces: usize,
    restarts: usize,
    rng: &mut R,
) -> Result<DualityReport> {
    let d_in = inst.d_in();
    if k == 0 || k > d_in {
        return Err(Error::OutOfRange {
            what: "subspace dimension",
            value: k as f64,
        });
    }
    let mut delta = 0.0f64;
    for _ in 0..n_subspaces {
        let w = haar_isometry(d_in, k, rng);
        let decoder = petz_decoder(&inst.effective, &w)?;
        let err = subspace_decode_error(&inst.effective, &w, &decoder, restarts, rng)?;
        delta = delta.max(err);
    }
    let epsilon = forgetfulness(&inst.complementary, k, restarts, rng)?;
    let converse_rhs = 8.0 * delta.sqrt() + 1e-6;
    let forward_rhs = 2.0 * (2.0 * epsilon).sqrt() + 1e-6;
    Ok(DualityReport {
        delta,
        epsilon,
        converse_rhs,
        converse_ok: epsilon <= converse_rhs,
        forward_rhs,
        forward_ok: delta <= forward_rhs,
        subspaces: n_subspaces,
    })
}

/// Joint-versus-individual error accounting for parallel decoded
/// transmissions.
#[derive(Clone, Debug)]
pub struct TotalErrorReport {
    pub joint_error: f64,
    pub individual: Vec<f64>,
    /// joint ≤ Σ individual + 1e-8.
    pub subadditive: bool,
}

/// Measure the joint error of several decoded transmissions applied in
/// parallel to a shared (possibly entangled) input and compare with the sum
/// of the individual full-diamond errors.
///
/// `legs` are the composed decoder ∘ channel ∘ encoder maps, each acting on
/// its own code space; `joint` is a pure state on those code spaces followed
/// by one reference subsystem, in the same order.
pub fn total_error_check<R: Rng + ?Sized>(
    legs: &[Channel],
    joint: &PureState,
    restarts: usize,
    rng: &mut R,
) -> Result<TotalErrorReport> {
    if legs.is_empty() || legs.len() > 3 {
        return Err(Error::OutOfRange {
            what: "number of parallel legs",
            value: legs.len() as f64,
        });
    }
    let mut individual = Vec::with_capacity(legs.len());
    for leg in legs {
        if leg.d_in() != leg.d_out() {
            return Err(Error::DimMismatch {
                left: leg.d_in(),
                right: leg.d_out(),
                context: "decoded leg must map its code space to itself",
            });
        }
        let (err, _) = k_diamond_lower(leg, &Channel::identity(leg.d_in()), leg.d_in(), restarts, rng)?;
        individual.push(err);
    }

    let mut combined = legs[0].clone();
    for leg in &legs[1..] {
        combined = combined.tensor(leg);
    }
    let labels: Vec<String> = joint.dims().labels().map(str::to_string).collect();
    let ref_label = labels.last().expect("joint state needs a reference label");
    let code_dim: usize = joint.dims().total() / joint.dims().dim_of(ref_label)?;
    if code_dim != combined.d_in() {
        return Err(Error::DimMismatch {
            left: code_dim,
            right: combined.d_in(),
            context: "joint input vs tensored legs",
        });
    }
    let ref_dim = joint.dims().dim_of(ref_label)?;
    let full = combined.tensor(&Channel::identity(ref_dim));
    let rho = joint.to_density();
    let out = full.apply_matrix(rho.matrix());
    let joint_error = trace_norm(&(out - rho.matrix()))?;
    let total: f64 = individual.iter().sum();
    Ok(TotalErrorReport {
        joint_error,
        individual,
        subadditive: joint_error <= total + 1e-8,
    })
}

/// Random small encoded instance for verification campaigns: a random
/// channel, a feasible random code spec, and a Haar encoder. Total dilated
/// dimension stays at or below `dim_cap`.
pub fn random_campaign_instance<R: Rng + ?Sized>(
    dim_cap: usize,
    rng: &mut R,
) -> Result<(EncodedInstance, usize)> {
    use super::code::{random_code, CodeSpec, Ensemble};
    let d_in = *pick(&[2, 3], rng);
    let d_out = *pick(&[2, 3], rng);
    let env = *pick(&[2, 3], rng);
    let d_f = *pick(&[1, 2], rng);
    let d_c = 1;
    let d_hat_a = d_c * d_in * d_f;
    let d_s = rng.gen_range(2..=d_hat_a);
    let alpha = rng.gen_range(0.0..=1.0);
    let spec = CodeSpec::unassisted(d_s, d_f, d_c, alpha);
    let k = spec.d_r().min(d_s);
    let ch = Channel::random(d_in, d_out, env, rng);
    let inst = random_code(&ch, 1, spec, Ensemble::Haar, rng)?;
    debug_assert!(inst.d_b_hat * inst.d_e_hat <= dim_cap);
    Ok((inst, k))
}

fn pick<'a, T, R: Rng + ?Sized>(options: &'a [T], rng: &mut R) -> &'a T {
    &options[rng.gen_range(0..options.len())]
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::code::{random_code, CodeSpec, Ensemble};
    use crate::qcore::{c, identity, maximally_entangled, rng_stream, DimsProfile};

    #[test]
    fn noiseless_instance_has_no_error_and_no_leak() {
        let spec = CodeSpec::unassisted(2, 1, 1, 0.5);
        let ch = Channel::identity(2);
        let mut rng = rng_stream(41, 0);
        let inst = random_code(&ch, 1, spec, Ensemble::Haar, &mut rng).unwrap();
        let report = duality_check(&inst, 2, 3, 4, &mut rng).unwrap();
        assert!(report.delta < 1e-6);
        assert!(report.epsilon < 1e-9);
        assert!(report.converse_ok);
        assert!(report.forward_ok);
    }

    #[test]
    fn forgetful_constant_transmission_satisfies_converse_with_slack() {
        // A channel that erases everything: δ is large, the right side is
        // at least 8, and ε vanishes.
        let omega = identity(2) * c(0.5, 0.0);
        let constant = Channel::constant(&omega, 2).unwrap();
        let mut rng = rng_stream(41, 1);
        let w = identity(2);
        let dec = petz_decoder(&constant, &w).unwrap();
        let delta = subspace_decode_error(&constant, &w, &dec, 6, &mut rng).unwrap();
        let eps = forgetfulness(&constant.complementary(), 2, 6, &mut rng).unwrap();
        assert!(delta >= 1.0);
        assert!(eps <= 8.0 * delta.sqrt() + 1e-6);
    }

    #[test]
    fn small_random_campaign_never_violates_the_converse() {
        let mut rng = rng_stream(41, 2);
        for _ in 0..10 {
            let (inst, k) = random_campaign_instance(64, &mut rng).unwrap();
            let report = duality_check(&inst, k, 4, 6, &mut rng).unwrap();
            assert!(
                report.converse_ok,
                "ε {} > 8√δ {}",
                report.epsilon, report.converse_rhs
            );
        }
    }

    #[test]
    fn total_error_of_noiseless_legs_vanishes() {
        let legs = vec![Channel::identity(2), Channel::identity(2)];
        let bell = maximally_entangled(2, "S1", "R").unwrap();
        let spectator = crate::qcore::PureState::basis(DimsProfile::single("S2", 2), 0);
        // Order: S1 ⊗ S2 ⊗ R.
        let joint = bell
            .tensor(&spectator)
            .unwrap()
            .permuted(&["S1", "S2", "R"])
            .unwrap();
        let mut rng = rng_stream(41, 3);
        let report = total_error_check(&legs, &joint, 4, &mut rng).unwrap();
        assert!(report.joint_error < 1e-9);
        assert!(report.subadditive);
    }

    #[test]
    fn constant_leg_dominates_the_joint_error() {
        let omega = identity(2) * c(0.5, 0.0);
        let legs = vec![Channel::identity(2), Channel::constant(&omega, 2).unwrap()];
        let bell1 = maximally_entangled(2, "S1", "R").unwrap();
        let s2 = crate::qcore::PureState::basis(DimsProfile::single("S2", 2), 0);
        let joint = bell1
            .tensor(&s2)
            .unwrap()
            .permuted(&["S1", "S2", "R"])
            .unwrap();
        let mut rng = rng_stream(41, 4);
        let report = total_error_check(&legs, &joint, 6, &mut rng).unwrap();
        // The identity leg contributes nothing; the joint error must match
        // the constant leg's error on its (unentangled) input, which is at
        // most its diamond error.
        let solo = trace_norm(
            &(legs[1].apply_matrix(&(crate::qcore::basis_vec(2, 0) * crate::qcore::basis_vec(2, 0).adjoint()))
                - crate::qcore::basis_vec(2, 0) * crate::qcore::basis_vec(2, 0).adjoint()),
        )
        .unwrap();
        assert!((report.joint_error - solo).abs() < 1e-8);
        assert!(report.subadditive);
    }

    #[test]
    fn damping_coded_legs_are_subadditive() {
        let mut rng = rng_stream(41, 5);
        let ch = Channel::amplitude_damping(0.85).unwrap();
        let spec = CodeSpec::unassisted(2, 1, 1, 1.0);
        let mut legs = Vec::new();
        for _ in 0..2 {
            let inst = random_code(&ch, 1, spec, Ensemble::Haar, &mut rng).unwrap();
            let w = identity(2);
            let dec = petz_decoder(&inst.effective, &w).unwrap();
            legs.push(dec.compose(&inst.effective).unwrap());
        }
        let b1 = maximally_entangled(2, "S1", "R1").unwrap();
        let b2 = maximally_entangled(2, "S2", "R2").unwrap();
        // Fold both references into a single trailing block.
        let joint4 = b1.tensor(&b2).unwrap().permuted(&["S1", "S2", "R1", "R2"]).unwrap();
        let amps = joint4.amplitudes().clone();
        let dims = DimsProfile::new([("S1", 2), ("S2", 2), ("R", 4)]).unwrap();
        let joint = PureState::new(amps, dims).unwrap();
        let report = total_error_check(&legs, &joint, 8, &mut rng).unwrap();
        assert!(report.subadditive, "{report:?}");
        assert!(report.joint_error > 1e-3);
    }
}
