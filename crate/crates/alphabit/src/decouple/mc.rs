//! Decoupling Monte Carlo and its exact Haar-average oracles.
//!
//! The measured quantity is Tr(ρ^{ÊR} − ω_Ê ⊗ φ^R)² for a fixed input φ on
//! the code/reference split and a random unitary on the scrambled space
//! Â = B̂ ⊗ Ê. Degree-(2,2) moments of the unitary group have closed forms,
//! so the sample mean can be compared against an exact oracle; a 2-design
//! ensemble must reproduce the same oracle.

use rayon::prelude::*;
use serde::Serialize;

use super::code::Ensemble;
use crate::qcore::{
    c, haar_unitary, random_clifford, rng_stream, trace_norm, CMatrix,
};
use crate::{Error, Result};

/// Dimensions (Â, B̂, Ê, R) of one decoupling experiment, with Â = B̂·Ê.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DecouplingDims {
    pub d_hat_a: usize,
    pub d_b_hat: usize,
    pub d_e_hat: usize,
    pub d_r: usize,
}

impl DecouplingDims {
    pub fn new(d_hat_a: usize, d_b_hat: usize, d_e_hat: usize, d_r: usize) -> Result<Self> {
        if d_b_hat * d_e_hat != d_hat_a {
            return Err(Error::DimMismatch {
                left: d_b_hat * d_e_hat,
                right: d_hat_a,
                context: "decoupling dims (Â must equal B̂·Ê)",
            });
        }
        if d_r == 0 || d_r > d_hat_a {
            return Err(Error::OutOfRange {
                what: "reference dimension",
                value: d_r as f64,
            });
        }
        Ok(Self {
            d_hat_a,
            d_b_hat,
            d_e_hat,
            d_r,
        })
    }

    pub fn as_vec(&self) -> Vec<usize> {
        vec![self.d_hat_a, self.d_b_hat, self.d_e_hat, self.d_r]
    }
}

/// Monte-Carlo summary against the exact oracle and the analytic bounds.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ForgetfulnessReport {
    /// Sample mean of Tr(ρ^{ÊR} − ω_Ê ⊗ φ^R)².
    pub two_norm_mean: f64,
    /// Exact Haar average of the same quantity.
    pub oracle_mean: f64,
    /// Analytic upper bound on the Haar average.
    pub bound_value: f64,
    /// Sample mean of ‖ρ^{ÊR} − ω_Ê ⊗ φ^R‖₁: an achievable value for the
    /// shared-randomness-averaged channel, hence a lower bound on its
    /// d_R-diamond distance from the replacer.
    pub diamond_lower: f64,
    pub samples: usize,
    /// Standard error of `two_norm_mean`.
    pub sigma: f64,
}

/// Exact Haar average of Tr(ρ^{ÊR} − ω_Ê ⊗ φ^R)² for an input with Schmidt
/// coefficients `p` across the reference, assembled from the symmetric and
/// antisymmetric projector weights of the degree-(2,2) twirl.
pub fn exact_haar_average(p: &[f64], dims: DecouplingDims) -> Result<f64> {
    exact_haar_average_ea(p, dims, 1)
}

/// Exact Haar average in the entanglement-assisted variant: the input is
/// χ_KL ⊗ φ_SR with a maximally entangled register pair of dimension `d_l`
/// riding along; `d_l = 1` recovers the plain average.
pub fn exact_haar_average_ea(p: &[f64], dims: DecouplingDims, d_l: usize) -> Result<f64> {
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-9 || p.iter().any(|&x| x < -1e-12) {
        return Err(Error::NotNormalised((sum - 1.0).abs()));
    }
    if d_l == 0 {
        return Err(Error::OutOfRange {
            what: "assistance dimension",
            value: 0.0,
        });
    }
    let da = dims.d_hat_a as f64;
    let db = dims.d_b_hat as f64;
    let de = dims.d_e_hat as f64;
    let dl = d_l as f64;
    let purity: f64 = p.iter().map(|&x| x * x).sum();

    // Tr[Π_sym (F_Ê ⊗ I_B̂)] and Tr[Π_anti (F_Ê ⊗ I_B̂)] on the doubled space.
    let t_swap_e = de * db * db; // Tr[(F_Ê ⊗ I)] over Â ⊗ Â'
    let t_swap_a = de * de * db; // Tr[(F_Ê ⊗ I)(F_Ê ⊗ F_B̂)] = Tr[I_Ê F_B̂]
    let tr_sym = 0.5 * (t_swap_e + t_swap_a);
    let tr_anti = 0.5 * (t_swap_e - t_swap_a);

    let diag_term = (2.0 / (da * (da + 1.0))) * tr_sym;
    let cross_term = (1.0 / (da * (da + 1.0))) * tr_sym - (1.0 / (da * (da - 1.0))) * tr_anti;
    // Pairs with equal assistance index reproduce the unassisted twirl; the
    // unequal pairs contribute through (I - F/d)/(d²-1).
    let assist_term = (t_swap_e - t_swap_a / da) / (da * da - 1.0);

    let mean_square = (purity / dl) * diag_term
        + ((1.0 - purity) / dl) * cross_term
        + purity * ((dl - 1.0) / dl) * assist_term;
    Ok(mean_square - purity / de)
}

/// Upper bound on the exact Haar average: d_Â²/(d_Â²−1) · Tr(ω_B̂²).
pub fn two_norm_bound(dims: DecouplingDims) -> f64 {
    let da = dims.d_hat_a as f64;
    (da * da / (da * da - 1.0)) * (1.0 / dims.d_b_hat as f64)
}

/// Upper bound √(4·d_Ê·d_R / (3·d_B̂)) on the d_R-diamond distance between
/// the randomness-averaged channel and the replacer. At desk scale every
/// typicality projector is the identity, so no spillover term appears.
pub fn forgetfulness_bound(dims: DecouplingDims) -> f64 {
    (4.0 * dims.d_e_hat as f64 * dims.d_r as f64 / (3.0 * dims.d_b_hat as f64)).sqrt()
}

/// Upper bound on the entanglement-assisted mean square:
/// 4/(3 d_L) · Tr(ω_B̂²) + 2/d_Â² · Tr(ω_Ê²).
pub fn ea_two_norm_bound(dims: DecouplingDims, d_l: usize) -> f64 {
    let da = dims.d_hat_a as f64;
    4.0 / (3.0 * d_l as f64 * dims.d_b_hat as f64) + 2.0 / (da * da * dims.d_e_hat as f64)
}

fn sample_unitary(ensemble: Ensemble, d: usize, seed: u64, index: u64) -> Result<CMatrix> {
    let mut rng = rng_stream(seed, index);
    Ok(match ensemble {
        Ensemble::Haar => haar_unitary(d, &mut rng),
        Ensemble::Clifford => {
            if !d.is_power_of_two() {
                return Err(Error::InfeasibleCode(format!(
                    "clifford ensemble needs a power-of-two dimension, got {d}"
                )));
            }
            random_clifford(d.trailing_zeros() as usize, &mut rng)
        }
    })
}

/// Monte Carlo over the unitary ensemble with a maximally entangled input
/// between the reference and the first d_R basis vectors of Â. Sample i
/// draws from the independent stream (seed, i); the reduction is an ordered
/// fold, so results are independent of scheduling.
pub fn decoupling_mc(
    dims: DecouplingDims,
    ensemble: Ensemble,
    samples: usize,
    seed: u64,
) -> Result<ForgetfulnessReport> {
    let p = vec![1.0 / dims.d_r as f64; dims.d_r];
    let per_sample: Vec<(f64, f64)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| -> Result<(f64, f64)> {
            let u = sample_unitary(ensemble, dims.d_hat_a, seed, i)?;
            Ok(deviation_moments(&u, &p, dims, 1, dims.d_r))
        })
        .collect::<Result<_>>()?;
    Ok(summarise(&per_sample, exact_haar_average(&p, dims)?, two_norm_bound(dims), samples))
}

/// Entanglement-assisted Monte Carlo: the encoder input is χ_KL ⊗ φ_SR with
/// d_K = d_L = `d_l` and the code space `d_s`; the receiver's half L joins
/// B̂ before the reduction to Ê ⊗ R. Unitary samples depend only on
/// (seed, index), so runs with different `d_l` pair sample-by-sample.
pub fn ea_decoupling_mc(
    dims: DecouplingDims,
    d_s: usize,
    d_l: usize,
    samples: usize,
    seed: u64,
) -> Result<ForgetfulnessReport> {
    if d_s * d_l > dims.d_hat_a {
        return Err(Error::InfeasibleCode(format!(
            "code times assistance {} exceeds scrambled space {}",
            d_s * d_l,
            dims.d_hat_a
        )));
    }
    if dims.d_r > d_s {
        return Err(Error::OutOfRange {
            what: "reference dimension vs code space",
            value: dims.d_r as f64,
        });
    }
    let p = vec![1.0 / dims.d_r as f64; dims.d_r];
    let per_sample: Vec<(f64, f64)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| -> Result<(f64, f64)> {
            let u = sample_unitary(Ensemble::Haar, dims.d_hat_a, seed, i)?;
            Ok(deviation_moments(&u, &p, dims, d_l, d_s))
        })
        .collect::<Result<_>>()?;
    Ok(summarise(
        &per_sample,
        exact_haar_average_ea(&p, dims, d_l)?,
        ea_two_norm_bound(dims, d_l),
        samples,
    ))
}

/// (Tr Δ², ‖Δ‖₁) for Δ = ρ^{ÊR} − ω_Ê ⊗ φ^R after scrambling with `u`.
///
/// The input is Σ_r √p_r |r⟩_R |r⟩_S ⊗ (1/√d_l) Σ_a |a⟩_L |a⟩_K with S ⊗ K
/// embedded on the first d_s·d_l basis vectors of Â (index r·d_l + a).
fn deviation_moments(
    u: &CMatrix,
    p: &[f64],
    dims: DecouplingDims,
    d_l: usize,
    _d_s: usize,
) -> (f64, f64) {
    let d_r = p.len();
    let d_e = dims.d_e_hat;
    let d_b = dims.d_b_hat;
    let dim_er = d_e * d_r;
    let mut rho = CMatrix::zeros(dim_er, dim_er);
    // ρ^{ÊR}[(e,r),(e',r')] = Σ_{a,b} amp[(r,a),(b,e)] · conj(amp[(r',a),(b,e')])
    // with amp[(r,a),â] = √(p_r/d_l) · U[â, r·d_l + a].
    for r in 0..d_r {
        for r2 in 0..d_r {
            let w = (p[r] * p[r2]).sqrt() / d_l as f64;
            for e in 0..d_e {
                for e2 in 0..d_e {
                    let mut acc = c(0.0, 0.0);
                    for a in 0..d_l {
                        for b in 0..d_b {
                            acc += u[(b * d_e + e, r * d_l + a)]
                                * u[(b * d_e + e2, r2 * d_l + a)].conj();
                        }
                    }
                    rho[(e * d_r + r, e2 * d_r + r2)] += c(w, 0.0) * acc;
                }
            }
        }
    }
    for e in 0..d_e {
        for r in 0..d_r {
            rho[(e * d_r + r, e * d_r + r)] -= c(p[r] / d_e as f64, 0.0);
        }
    }
    let two: f64 = rho.iter().map(|z| z.norm_sqr()).sum();
    let one = trace_norm(&rho).expect("square deviation matrix");
    (two, one)
}

fn summarise(
    per_sample: &[(f64, f64)],
    oracle: f64,
    bound: f64,
    samples: usize,
) -> ForgetfulnessReport {
    let n = per_sample.len().max(1) as f64;
    let mean2: f64 = per_sample.iter().map(|s| s.0).sum::<f64>() / n;
    let mean1: f64 = per_sample.iter().map(|s| s.1).sum::<f64>() / n;
    let var: f64 = if per_sample.len() > 1 {
        per_sample
            .iter()
            .map(|s| (s.0 - mean2).powi(2))
            .sum::<f64>()
            / (n - 1.0)
    } else {
        0.0
    };
    ForgetfulnessReport {
        two_norm_mean: mean2,
        oracle_mean: oracle,
        bound_value: bound,
        diamond_lower: mean1,
        samples,
        sigma: (var / n).sqrt(),
    }
}
