//! Random encodings: a code space (optionally with entanglement-assistance
//! registers) embedded into the channel input by a random unitary.

use rand::Rng;

use crate::channels::Channel;
use crate::qcore::{haar_unitary, random_clifford, CMatrix};
use crate::{Error, Result};

/// Which unitary ensemble scrambles the embedded code space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ensemble {
    Haar,
    Clifford,
}

impl std::fmt::Display for Ensemble {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Ensemble::Haar => "haar",
            Ensemble::Clifford => "clifford",
        })
    }
}

/// Dimensions of one encoding run.
///
/// The scrambled space Â factors as side-channel C times n channel inputs
/// times a discarded ancilla F; the code space S (with assistance register K
/// of dimension `d_k`, matched by the receiver's `d_l`) must embed into Â.
/// The reference dimension for α-style decoding tests is ⌊d_s^α⌋ + 1.
#[derive(Clone, Copy, Debug)]
pub struct CodeSpec {
    pub d_s: usize,
    pub d_f: usize,
    pub d_c: usize,
    pub d_k: usize,
    pub d_l: usize,
    pub alpha: f64,
}

impl CodeSpec {
    pub fn unassisted(d_s: usize, d_f: usize, d_c: usize, alpha: f64) -> Self {
        Self {
            d_s,
            d_f,
            d_c,
            d_k: 1,
            d_l: 1,
            alpha,
        }
    }

    /// Reference dimension ⌊d_s^α⌋ + 1 (never below 2, so the α = 0 case
    /// still tests two-dimensional subspaces). A small guard absorbs
    /// floating error in the power for exact integer roots.
    pub fn d_r(&self) -> usize {
        ((self.d_s as f64).powf(self.alpha) + 1e-9).floor() as usize + 1
    }

    pub fn scrambled_dim(&self, d_channel_in: usize, n_uses: usize) -> usize {
        self.d_c * d_channel_in.pow(n_uses as u32) * self.d_f
    }
}

/// One concrete encoded transmission: encoder isometry, effective channel
/// from the code space to the receiver, and its complementary channel to
/// the environment.
#[derive(Clone, Debug)]
pub struct EncodedInstance {
    pub spec: CodeSpec,
    pub n_uses: usize,
    pub d_b_hat: usize,
    pub d_e_hat: usize,
    /// Isometry S⊗K → Â (the random unitary times the fixed embedding).
    pub encoder: CMatrix,
    /// Channel S⊗K → B̂ = C ⊗ B^n after the environment is traced out.
    pub effective: Channel,
    /// Channel S⊗K → Ê = E^n ⊗ F.
    pub complementary: Channel,
}

impl EncodedInstance {
    pub fn d_in(&self) -> usize {
        self.spec.d_s * self.spec.d_k
    }
}

/// Build a random encoded instance: embed S⊗K into Â = C ⊗ A^n ⊗ F by the
/// first basis vectors, scramble with a random unitary from the requested
/// ensemble, push through n uses of the channel (side channel C rides along
/// noiselessly) and discard F to the environment.
pub fn random_code<R: Rng + ?Sized>(
    ch: &Channel,
    n_uses: usize,
    spec: CodeSpec,
    ensemble: Ensemble,
    rng: &mut R,
) -> Result<EncodedInstance> {
    let d_a = ch.d_in();
    let d_hat_a = spec.scrambled_dim(d_a, n_uses);
    let d_sk = spec.d_s * spec.d_k;
    if d_sk > d_hat_a {
        return Err(Error::InfeasibleCode(format!(
            "code space {} exceeds scrambled space {}",
            d_sk, d_hat_a
        )));
    }
    let d_b_hat = spec.d_c * ch.d_out().pow(n_uses as u32);
    let d_e_hat = ch.env_dim().pow(n_uses as u32) * spec.d_f;
    if d_b_hat * d_e_hat > 4096 {
        return Err(Error::InfeasibleCode(format!(
            "total dilated dimension {} exceeds the design limit 4096",
            d_b_hat * d_e_hat
        )));
    }

    let unitary = match ensemble {
        Ensemble::Haar => haar_unitary(d_hat_a, rng),
        Ensemble::Clifford => {
            if !d_hat_a.is_power_of_two() {
                return Err(Error::InfeasibleCode(format!(
                    "clifford ensemble needs a power-of-two dimension, got {d_hat_a}"
                )));
            }
            random_clifford(d_hat_a.trailing_zeros() as usize, rng)
        }
    };

    // Encoder: scramble ∘ embed, where the embedding takes the first d_sk
    // basis vectors of Â.
    let mut encoder = CMatrix::zeros(d_hat_a, d_sk);
    for s in 0..d_sk {
        encoder.set_column(s, &unitary.column(s));
    }

    // Full dilation W: Â → B̂ ⊗ Ê with rows B̂-major. Â is ordered
    // [C, A_1..A_n, F]; the per-use dilations are interleaved as
    // [C, (B_1 E_1)..(B_n E_n), F] and get regrouped to
    // [(C B_1..B_n), (E_1..E_n F)].
    let v = ch.stinespring();
    let d_b = ch.d_out();
    let d_e = ch.env_dim();
    let mut w = CMatrix::zeros(d_b_hat * d_e_hat, d_hat_a);
    let d_a_n = d_a.pow(n_uses as u32);
    for c_idx in 0..spec.d_c {
        for f_idx in 0..spec.d_f {
            for a_multi in 0..d_a_n {
                let col = c_idx * d_a_n * spec.d_f + a_multi * spec.d_f + f_idx;
                // Expand column a_multi of V^⊗n into (b_multi, e_multi)
                // amplitudes.
                let digits = digits_of(a_multi, d_a, n_uses);
                let mut amps: Vec<(usize, usize, num_complex::Complex64)> =
                    vec![(0, 0, crate::qcore::c(1.0, 0.0))];
                for &a_digit in &digits {
                    let mut next = Vec::with_capacity(amps.len() * d_b * d_e);
                    for &(b_acc, e_acc, coeff) in &amps {
                        for b in 0..d_b {
                            for e in 0..d_e {
                                let amp = v.matrix[(b * d_e + e, a_digit)];
                                if amp.norm_sqr() > 0.0 {
                                    next.push((b_acc * d_b + b, e_acc * d_e + e, coeff * amp));
                                }
                            }
                        }
                    }
                    amps = next;
                }
                for &(b_multi, e_multi, coeff) in &amps {
                    let b_hat = c_idx * d_b.pow(n_uses as u32) + b_multi;
                    let e_hat = e_multi * spec.d_f + f_idx;
                    w[(b_hat * d_e_hat + e_hat, col)] += coeff;
                }
            }
        }
    }

    let total = &w * &encoder;
    let effective_kraus: Vec<CMatrix> = (0..d_e_hat)
        .map(|e| CMatrix::from_fn(d_b_hat, d_sk, |b, s| total[(b * d_e_hat + e, s)]))
        .collect();
    let complementary_kraus: Vec<CMatrix> = (0..d_b_hat)
        .map(|b| CMatrix::from_fn(d_e_hat, d_sk, |e, s| total[(b * d_e_hat + e, s)]))
        .collect();
    Ok(EncodedInstance {
        spec,
        n_uses,
        d_b_hat,
        d_e_hat,
        encoder,
        effective: Channel::from_kraus(effective_kraus)?,
        complementary: Channel::from_kraus(complementary_kraus)?,
    })
}

fn digits_of(mut value: usize, base: usize, len: usize) -> Vec<usize> {
    let mut digits = vec![0usize; len];
    for slot in digits.iter_mut().rev() {
        *slot = value % base;
        value /= base;
    }
    digits
}
