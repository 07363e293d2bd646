//! Transpose-channel (Petz) decoders for subspaces and their decode error.

use rand::Rng;

use crate::channels::Channel;
use crate::qcore::{c, hermitian_eigen, pinv_sqrt, CMatrix, CVector};
use crate::{Error, Result};

const PINV_CUTOFF: f64 = 1e-10;

/// Transpose channel of `effective` restricted to the subspace spanned by
/// the isometry `subspace` (d_S × k), taken with respect to the maximally
/// mixed prior on the subspace.
///
/// Kraus operators are (1/√k)·W†K_i†·M^{-1/2} with M the channel image of
/// the prior; a completion branch absorbs the null space of M so the result
/// is trace preserving.
pub fn petz_decoder(effective: &Channel, subspace: &CMatrix) -> Result<Channel> {
    let d_s = effective.d_in();
    if subspace.nrows() != d_s {
        return Err(Error::DimMismatch {
            left: subspace.nrows(),
            right: d_s,
            context: "subspace isometry rows",
        });
    }
    let k = subspace.ncols();
    let d_b = effective.d_out();

    let restricted: Vec<CMatrix> = effective.kraus().iter().map(|m| m * subspace).collect();
    let mut prior_image = CMatrix::zeros(d_b, d_b);
    for l in &restricted {
        prior_image += l * l.adjoint() * c(1.0 / k as f64, 0.0);
    }
    let root_inv = pinv_sqrt(&prior_image, PINV_CUTOFF);

    let mut kraus: Vec<CMatrix> = restricted
        .iter()
        .map(|l| (l.adjoint() * &root_inv) * c(1.0 / (k as f64).sqrt(), 0.0))
        .collect();

    // Completion: route the null space of the prior image to |0⟩.
    let mut gram = CMatrix::zeros(d_b, d_b);
    for d in &kraus {
        gram += d.adjoint() * d;
    }
    let (vals, vecs) = hermitian_eigen(&(CMatrix::identity(d_b, d_b) - gram));
    for (i, &lam) in vals.iter().enumerate() {
        if lam > 1e-12 {
            let col: CVector = vecs.column(i).into_owned();
            let mut extra = CMatrix::zeros(k, d_b);
            for b in 0..d_b {
                extra[(0, b)] = c(lam.sqrt(), 0.0) * col[b].conj();
            }
            kraus.push(extra);
        }
    }
    Channel::from_kraus(kraus)
}

/// Decode error of a subspace through an encoded transmission: the
/// k-diamond distance (k = subspace dimension) between
/// decoder ∘ effective ∘ embed and the identity on the subspace.
pub fn subspace_decode_error<R: Rng + ?Sized>(
    effective: &Channel,
    subspace: &CMatrix,
    decoder: &Channel,
    restarts: usize,
    rng: &mut R,
) -> Result<f64> {
    let k = subspace.ncols();
    let embed = Channel::from_kraus(vec![subspace.clone()])?;
    let through = decoder.compose(&effective.compose(&embed)?)?;
    Ok(super::diamond::k_diamond_lower(&through, &Channel::identity(k), k, restarts, rng)?.0)
}

/// Entanglement fidelity of a channel with respect to the maximally mixed
/// input: Σ_i |Tr K_i|² / d².
pub fn entanglement_fidelity(ch: &Channel) -> f64 {
    let d = ch.d_in() as f64;
    ch.kraus()
        .iter()
        .map(|k| {
            let t: num_complex::Complex64 = k.diagonal().iter().sum();
            t.norm_sqr()
        })
        .sum::<f64>()
        / (d * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{haar_unitary, identity, rng_stream};

    #[test]
    fn petz_inverts_unitary_conjugation() {
        let mut rng = rng_stream(31, 0);
        let u = haar_unitary(3, &mut rng);
        let ch = Channel::from_kraus(vec![u]).unwrap();
        let w = identity(3);
        let dec = petz_decoder(&ch, &w).unwrap();
        let err = subspace_decode_error(&ch, &w, &dec, 4, &mut rng).unwrap();
        assert!(err < 1e-6, "decode error {err}");
    }

    #[test]
    fn petz_decoder_is_trace_preserving() {
        let mut rng = rng_stream(31, 1);
        let ch = Channel::random(3, 2, 2, &mut rng);
        let w = crate::qcore::haar_isometry(3, 2, &mut rng);
        let dec = petz_decoder(&ch, &w).unwrap();
        let mut gram = CMatrix::zeros(2, 2);
        for k in dec.kraus() {
            gram += k.adjoint() * k;
        }
        assert!(crate::qcore::max_abs_diff(&gram, &identity(2)) < 1e-8);
    }

    #[test]
    fn constant_channel_cannot_be_decoded() {
        let omega = identity(2) * c(0.5, 0.0);
        let ch = Channel::constant(&omega, 4).unwrap();
        let mut rng = rng_stream(31, 2);
        let w = crate::qcore::haar_isometry(4, 2, &mut rng);
        let dec = petz_decoder(&ch, &w).unwrap();
        let err = subspace_decode_error(&ch, &w, &dec, 6, &mut rng).unwrap();
        assert!(err >= 1.0, "decode error {err} should be at least 1");
    }

    #[test]
    fn erasure_decodes_with_retention_probability() {
        let ch = Channel::erasure(0.9).unwrap();
        let dec = petz_decoder(&ch, &identity(2)).unwrap();
        let through = dec.compose(&ch).unwrap();
        assert!(entanglement_fidelity(&through) >= 0.9);
    }
}
