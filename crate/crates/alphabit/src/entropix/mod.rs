//! Entropic quantities and capacity formulas over the α parameter.
//!
//! Capacities come in three flavours here: the generic optimiser
//! [`q1_alpha`] (spectral parameterisation, multi-start simplex descent),
//! the closed form for the erasure channel, and the one-dimensional scan
//! for the amplitude damping channel. Phases classify which of the two
//! competing rates binds at the optimum: mutual information over (1+α) or
//! coherent information over α.

mod optimize;

use rayon::prelude::*;
use serde::Serialize;

use crate::channels::Channel;
use crate::qcore::{
    binary_entropy, c, exp_i_hermitian, hermitian_eigen, CMatrix, CVector,
};
use crate::{Error, Result};
pub use optimize::{golden_max, nelder_mead};

/// All entropic quantities for one channel + input pair, in bits.
///
/// `coherent` is floored at zero; `coherent_signed` keeps the sign, and
/// `alpha_crit = coherent_signed / h_a` may therefore be negative. It never
/// exceeds 1.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EntropyReport {
    pub h_a: f64,
    pub h_b: f64,
    pub h_e: f64,
    pub mutual: f64,
    pub coherent: f64,
    pub coherent_signed: f64,
    pub alpha_crit: f64,
}

/// Which of the two rate constraints binds at a capacity optimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Phase {
    CorrelationConstrained,
    CoherenceConstrained,
    Critical,
}

impl Phase {
    pub fn tag(self) -> &'static str {
        match self {
            Phase::CorrelationConstrained => "corr",
            Phase::CoherenceConstrained => "coh",
            Phase::Critical => "crit",
        }
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// One point of a capacity curve: value in bits plus the optimising input
/// state (its second diagonal entry doubles as the scalar witness for
/// qubit inputs).
#[derive(Clone, Debug)]
pub struct CapacityPoint {
    pub alpha: f64,
    pub value: f64,
    pub phase: Phase,
    pub witness: CMatrix,
    pub converged: bool,
    /// Set when nothing certifies that the single-copy optimum is exact for
    /// this channel (non-degradable channels in the generic optimiser).
    pub lower_bound_only: bool,
}

impl CapacityPoint {
    /// Scalar witness: the excited-state weight ⟨1|ρ|1⟩ of the optimising
    /// input, which fully determines it for the diagonal qubit families.
    pub fn witness_p(&self) -> f64 {
        if self.witness.nrows() >= 2 {
            self.witness[(1, 1)].re
        } else {
            0.0
        }
    }
}

/// Knobs for the derivative-free capacity search.
#[derive(Clone, Debug)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Stop a descent once the best value improves by less than `stall_tol`
    /// over `stall_iters` iterations.
    pub stall_iters: usize,
    pub stall_tol: f64,
    pub max_iters: usize,
    pub seed: u64,
    /// Strictness tolerance for the α = 0 constraint I(A⟩B) > 0.
    pub tol_ci: f64,
    /// Marks the returned value as exact rather than a lower bound.
    pub assume_degradable: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            stall_iters: 200,
            stall_tol: 1e-9,
            max_iters: 4000,
            seed: 0,
            tol_ci: 1e-6,
            assume_degradable: false,
        }
    }
}

/// Purify the input, push it through the dilation and report every entropy
/// of the resulting tripartite pure state.
pub fn entropy_report(ch: &Channel, rho_in: &CMatrix) -> Result<EntropyReport> {
    let d = ch.d_in();
    if rho_in.nrows() != d || rho_in.ncols() != d {
        return Err(Error::DimMismatch {
            left: rho_in.nrows(),
            right: d,
            context: "entropy report input",
        });
    }
    let v = ch.stinespring();
    let d_b = ch.d_out();
    let d_e = ch.env_dim();

    // |ψ⟩ = Σ_k √λ_k |k⟩_A |v_k⟩_{A'} with the reference first; the channel
    // side then runs through V: A' → B ⊗ E.
    let (lams, vecs) = hermitian_eigen(rho_in);
    let mut h_a = 0.0;
    for &lam in &lams {
        if lam > 1e-12 {
            h_a -= lam * lam.log2();
        }
    }
    // Tripartite amplitudes indexed (a, b, e), built one reference branch at
    // a time: branch k contributes √λ_k · V|v_k⟩ at a = k.
    let mut rho_b = CMatrix::zeros(d_b, d_b);
    let mut rho_e = CMatrix::zeros(d_e, d_e);
    for (k, &lam) in lams.iter().enumerate() {
        if lam <= 1e-14 {
            continue;
        }
        let col: CVector = vecs.column(k).into_owned();
        let out = v.apply_vec(&col);
        // Reduced contributions: branches are orthogonal on the reference,
        // so ρ_B and ρ_E are sums over branches of the branch reductions.
        for b in 0..d_b {
            for b2 in 0..d_b {
                let mut acc = c(0.0, 0.0);
                for e in 0..d_e {
                    acc += out[b * d_e + e] * out[b2 * d_e + e].conj();
                }
                rho_b[(b, b2)] += c(lam, 0.0) * acc;
            }
        }
        for e in 0..d_e {
            for e2 in 0..d_e {
                let mut acc = c(0.0, 0.0);
                for b in 0..d_b {
                    acc += out[b * d_e + e] * out[b * d_e + e2].conj();
                }
                rho_e[(e, e2)] += c(lam, 0.0) * acc;
            }
        }
    }
    let h_b = entropy_of(&rho_b);
    let h_e = entropy_of(&rho_e);

    let mutual = h_a + h_b - h_e;
    let coherent_signed = h_b - h_e;
    let coherent = coherent_signed.max(0.0);
    let alpha_crit = if h_a > 1e-12 {
        coherent_signed / h_a
    } else {
        0.0
    };
    Ok(EntropyReport {
        h_a,
        h_b,
        h_e,
        mutual,
        coherent,
        coherent_signed,
        alpha_crit,
    })
}

fn entropy_of(m: &CMatrix) -> f64 {
    let mut h = 0.0;
    for lam in crate::qcore::hermitian_eigenvalues(m) {
        if lam > 1e-12 {
            h -= lam * lam.log2();
        }
    }
    h
}

// ---------------------------------------------------------------------------
// Generic single-copy capacity optimiser
// ---------------------------------------------------------------------------

/// Spectral parameterisation of a d×d density matrix with d²−1 real
/// parameters: a softmax simplex for the spectrum and a zero-diagonal
/// Hermitian generator for the eigenbasis.
fn density_from_params(d: usize, x: &[f64]) -> CMatrix {
    debug_assert_eq!(x.len(), d * d - 1);
    let logits = &x[..d - 1];
    let max_logit = logits.iter().fold(0.0f64, |m, &v| m.max(v));
    let mut weights = Vec::with_capacity(d);
    weights.push((-max_logit).exp());
    for &t in logits {
        weights.push((t - max_logit).exp());
    }
    let total: f64 = weights.iter().sum();

    let mut h = CMatrix::zeros(d, d);
    let mut idx = d - 1;
    for i in 0..d {
        for j in (i + 1)..d {
            h[(i, j)] = c(x[idx], x[idx + 1]);
            h[(j, i)] = c(x[idx], -x[idx + 1]);
            idx += 2;
        }
    }
    let u = exp_i_hermitian(&h);
    let mut rho = CMatrix::zeros(d, d);
    for (k, w) in weights.iter().enumerate() {
        let colk = u.column(k);
        for i in 0..d {
            for j in 0..d {
                rho[(i, j)] += c(w / total, 0.0) * colk[i] * colk[j].conj();
            }
        }
    }
    rho
}

/// Parameters that reproduce the diagonal state diag(1−p, p, 0, …).
fn diagonal_start(d: usize, p: f64) -> Vec<f64> {
    let mut x = vec![0.0; d * d - 1];
    let p = p.clamp(1e-6, 1.0 - 1e-6);
    x[0] = (p / (1.0 - p)).ln();
    for slot in x.iter_mut().take(d - 1).skip(1) {
        *slot = -30.0;
    }
    x
}

fn capacity_objective(report: &EntropyReport, alpha: f64, cfg: &OptimizerConfig) -> f64 {
    if alpha > 0.0 {
        (report.mutual / (1.0 + alpha)).min(report.coherent / alpha)
    } else {
        // α = 0: maximise mutual information subject to strictly positive
        // coherent information, realised by a steep penalty below tol_ci.
        let deficit = (cfg.tol_ci - report.coherent_signed).max(0.0);
        report.mutual - 1e3 * deficit
    }
}

/// Single-copy α-bit capacity by multi-start simplex ascent over input
/// density matrices. Returns the best value found with its optimising
/// input; for α = 0 the variant "mutual information subject to positive
/// coherent information" is used.
pub fn q1_alpha(ch: &Channel, alpha: f64, cfg: &OptimizerConfig) -> Result<CapacityPoint> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::OutOfRange {
            what: "alpha",
            value: alpha,
        });
    }
    let d = ch.d_in();
    if d > 4 {
        return Err(Error::OutOfRange {
            what: "generic optimiser input dimension (at most 4)",
            value: d as f64,
        });
    }
    let n = d * d - 1;
    let objective = |x: &[f64]| -> f64 {
        let rho = density_from_params(d, x);
        match entropy_report(ch, &rho) {
            Ok(report) => capacity_objective(&report, alpha, cfg),
            Err(_) => f64::NEG_INFINITY,
        }
    };

    let mut starts: Vec<Vec<f64>> = vec![vec![0.0; n]];
    for p in [0.1, 0.25, 0.4, 0.6] {
        starts.push(diagonal_start(d, p));
    }
    let mut rng = crate::qcore::rng_stream(cfg.seed, 0x7e57);
    while starts.len() < cfg.restarts.max(1) {
        use rand::Rng;
        starts.push((0..n).map(|_| rng.gen_range(-2.0..2.0)).collect());
    }
    starts.truncate(cfg.restarts.max(1));

    let mut best_val = f64::NEG_INFINITY;
    let mut best_x = vec![0.0; n];
    let mut any_converged = false;
    for start in &starts {
        let (x, val, converged) = nelder_mead(
            &objective,
            start,
            0.35,
            cfg.max_iters,
            cfg.stall_iters,
            cfg.stall_tol,
        );
        if val > best_val {
            best_val = val;
            best_x = x;
        }
        any_converged |= converged;
    }

    let witness = density_from_params(d, &best_x);
    let report = entropy_report(ch, &witness)?;
    let value = if alpha > 0.0 {
        best_val.max(0.0)
    } else if report.coherent_signed >= cfg.tol_ci {
        report.mutual
    } else {
        0.0
    };
    let phase = phase_classify(ch, alpha, &witness)?;
    Ok(CapacityPoint {
        alpha,
        value,
        phase,
        witness,
        converged: any_converged,
        lower_bound_only: !cfg.assume_degradable,
    })
}

/// Two-copy brute-force variant: optimise over inputs to ch ⊗ ch and halve.
/// Only sensible for qubit-input channels.
pub fn q1_alpha_two_copy(ch: &Channel, alpha: f64, cfg: &OptimizerConfig) -> Result<CapacityPoint> {
    if ch.d_in() != 2 {
        return Err(Error::DimMismatch {
            left: ch.d_in(),
            right: 2,
            context: "two-copy mode input dimension",
        });
    }
    let doubled = ch.tensor(ch);
    let mut point = q1_alpha(&doubled, alpha, cfg)?;
    point.value /= 2.0;
    Ok(point)
}

/// Entanglement-assisted (equivalently amortised, for α < 1) capacity:
/// sup of the mutual information over inputs, divided by 1+α.
///
/// The mutual information is concave in the input, so a light multi-start
/// suffices. At α = 1 the same expression is reported even though the
/// amortised reading breaks down there: the required side channel diverges,
/// so only the entanglement-assisted interpretation survives at that point.
pub fn ea_capacity(ch: &Channel, alpha: f64, cfg: &OptimizerConfig) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::OutOfRange {
            what: "alpha",
            value: alpha,
        });
    }
    let d = ch.d_in();
    let n = d * d - 1;
    let objective = |x: &[f64]| -> f64 {
        let rho = density_from_params(d, x);
        entropy_report(ch, &rho).map(|r| r.mutual).unwrap_or(f64::NEG_INFINITY)
    };
    let mut best = f64::NEG_INFINITY;
    let mut rng = crate::qcore::rng_stream(cfg.seed, 0xea);
    for restart in 0..4.max(cfg.restarts / 8) {
        use rand::Rng;
        let start: Vec<f64> = if restart == 0 {
            vec![0.0; n]
        } else {
            (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect()
        };
        let (_, val, _) = nelder_mead(
            &objective,
            &start,
            0.35,
            cfg.max_iters,
            cfg.stall_iters,
            cfg.stall_tol,
        );
        best = best.max(val);
    }
    Ok(best / (1.0 + alpha))
}

/// Exact erasure-channel capacity min(2η/(1+α), (2η−1)/α) in the degradable
/// regime, with its sharp phase split at α = 2η−1.
pub fn erasure_capacity_closed(eta: f64, alpha: f64) -> Result<CapacityPoint> {
    if !(0.5..=1.0).contains(&eta) {
        return Err(Error::OutOfRange {
            what: "erasure parameter (degradable regime)",
            value: eta,
        });
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::OutOfRange {
            what: "alpha",
            value: alpha,
        });
    }
    let corr = 2.0 * eta / (1.0 + alpha);
    let coh = (2.0 * eta - 1.0) / alpha;
    let alpha_crit = 2.0 * eta - 1.0;
    let phase = if (alpha - alpha_crit).abs() <= 1e-12 {
        Phase::Critical
    } else if alpha < alpha_crit {
        Phase::CorrelationConstrained
    } else {
        Phase::CoherenceConstrained
    };
    Ok(CapacityPoint {
        alpha,
        value: corr.min(coh).max(0.0),
        phase,
        witness: CMatrix::identity(2, 2) * c(0.5, 0.0),
        converged: true,
        lower_bound_only: false,
    })
}

fn damping_terms(eta: f64, p: f64) -> (f64, f64) {
    let h = |q: f64| binary_entropy(q).expect("argument in range");
    let coh = h(eta * p) - h((1.0 - eta) * p);
    let mutual = h(p) + coh;
    (mutual, coh)
}

/// Amplitude-damping α-bit capacity via a diagonal-input scan: a 2001-point
/// grid over the excited-state weight p followed by golden-section
/// refinement to |Δp| < 1e-9. Valid in the degradable regime η ≥ 1/2 where
/// diagonal inputs are optimal.
pub fn ad_capacity(eta: f64, alpha: f64) -> Result<CapacityPoint> {
    if !(0.5..=1.0).contains(&eta) {
        return Err(Error::OutOfRange {
            what: "damping parameter (degradable regime)",
            value: eta,
        });
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::OutOfRange {
            what: "alpha",
            value: alpha,
        });
    }
    let objective = |p: f64| {
        let (m, ci) = damping_terms(eta, p);
        (m / (1.0 + alpha)).min(ci.max(0.0) / alpha)
    };
    let (p_opt, value) = scan_and_refine(&objective, 2001, 1e-9);
    let (m, ci) = damping_terms(eta, p_opt);
    let corr_rate = m / (1.0 + alpha);
    let coh_rate = ci.max(0.0) / alpha;
    let phase = if (corr_rate - coh_rate).abs() <= 1e-6 {
        Phase::Critical
    } else if corr_rate < coh_rate {
        Phase::CorrelationConstrained
    } else {
        Phase::CoherenceConstrained
    };
    let mut witness = CMatrix::zeros(2, 2);
    witness[(0, 0)] = c(1.0 - p_opt, 0.0);
    witness[(1, 1)] = c(p_opt, 0.0);
    Ok(CapacityPoint {
        alpha,
        value,
        phase,
        witness,
        converged: true,
        lower_bound_only: false,
    })
}

/// Maximise a unimodal function on [0, 1]: coarse grid then golden-section
/// refinement of the bracketing interval.
fn scan_and_refine(f: &dyn Fn(f64) -> f64, grid: usize, tol: f64) -> (f64, f64) {
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..grid {
        let p = i as f64 / (grid - 1) as f64;
        let v = f(p);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let step = 1.0 / (grid - 1) as f64;
    let lo = (best_i as f64 * step - step).max(0.0);
    let hi = (best_i as f64 * step + step).min(1.0);
    golden_max(f, lo, hi, tol)
}

/// Compare the two candidate rates at a given witness input; ties within
/// 1e-6 bits are critical.
pub fn phase_classify(ch: &Channel, alpha: f64, witness: &CMatrix) -> Result<Phase> {
    let report = entropy_report(ch, witness)?;
    if alpha == 0.0 {
        return Ok(if report.coherent_signed.abs() <= 1e-6 {
            Phase::Critical
        } else {
            Phase::CorrelationConstrained
        });
    }
    let corr_rate = report.mutual / (1.0 + alpha);
    let coh_rate = report.coherent / alpha;
    Ok(if (corr_rate - coh_rate).abs() <= 1e-6 {
        Phase::Critical
    } else if corr_rate < coh_rate {
        Phase::CorrelationConstrained
    } else {
        Phase::CoherenceConstrained
    })
}

/// Critical region [α_lo, α_hi] of the amplitude damping channel: the
/// critical α of the mutual-information-optimal input and of the
/// coherent-information-optimal input. Both optima are refined to 1e-9.
pub fn critical_region(eta: f64) -> Result<(f64, f64)> {
    if !(0.5..=1.0).contains(&eta) {
        return Err(Error::OutOfRange {
            what: "damping parameter (degradable regime)",
            value: eta,
        });
    }
    let mutual = |p: f64| damping_terms(eta, p).0;
    let coherent = |p: f64| damping_terms(eta, p).1;
    let (p0, _) = scan_and_refine(&mutual, 2001, 1e-9);
    let (p1, _) = scan_and_refine(&coherent, 2001, 1e-9);
    let alpha_at = |p: f64| {
        let (m, ci) = damping_terms(eta, p);
        let h_a = m - ci;
        if h_a > 1e-12 {
            ci / h_a
        } else {
            0.0
        }
    };
    let lo = alpha_at(p0);
    let hi = alpha_at(p1);
    debug_assert!(lo <= hi + 1e-9);
    Ok((lo, hi))
}

/// Optimal diagonal inputs (p_mutual, p_coherent) underlying
/// [`critical_region`].
pub fn damping_optimal_inputs(eta: f64) -> Result<(f64, f64)> {
    if !(0.5..=1.0).contains(&eta) {
        return Err(Error::OutOfRange {
            what: "damping parameter (degradable regime)",
            value: eta,
        });
    }
    let mutual = |p: f64| damping_terms(eta, p).0;
    let coherent = |p: f64| damping_terms(eta, p).1;
    let (p0, _) = scan_and_refine(&mutual, 2001, 1e-9);
    let (p1, _) = scan_and_refine(&coherent, 2001, 1e-9);
    Ok((p0, p1))
}

/// Channel family selector for curve generation.
#[derive(Clone, Debug)]
pub enum ChannelKind {
    Erasure { eta: f64 },
    Damping { eta: f64 },
    Custom(Channel),
}

/// How capacity-curve points are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveMethod {
    /// Erasure closed form.
    Closed,
    /// Amplitude-damping diagonal scan.
    Scan,
    /// Generic multi-start optimiser.
    Generic,
}

/// Capacity values over an α grid, one point per α, computed in parallel
/// with per-point deterministic seeds.
pub fn capacity_curve(
    kind: &ChannelKind,
    alphas: &[f64],
    method: CurveMethod,
    cfg: &OptimizerConfig,
) -> Result<Vec<CapacityPoint>> {
    alphas
        .par_iter()
        .enumerate()
        .map(|(i, &alpha)| -> Result<CapacityPoint> {
            match (kind, method) {
                (ChannelKind::Erasure { eta }, CurveMethod::Closed) => {
                    erasure_capacity_closed(*eta, alpha)
                }
                (ChannelKind::Damping { eta }, CurveMethod::Scan) => ad_capacity(*eta, alpha),
                (kind, _) => {
                    let ch = match kind {
                        ChannelKind::Erasure { eta } => Channel::erasure(*eta)?,
                        ChannelKind::Damping { eta } => Channel::amplitude_damping(*eta)?,
                        ChannelKind::Custom(ch) => ch.clone(),
                    };
                    let mut point_cfg = cfg.clone();
                    point_cfg.seed = cfg.seed.wrapping_add(i as u64);
                    q1_alpha(&ch, alpha, &point_cfg)
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::identity;

    fn mixed_qubit() -> CMatrix {
        identity(2) * c(0.5, 0.0)
    }

    #[test]
    fn report_for_noiseless_qubit() {
        let ch = Channel::identity(2);
        let r = entropy_report(&ch, &mixed_qubit()).unwrap();
        assert!((r.h_a - 1.0).abs() < 1e-12);
        assert!((r.mutual - 2.0).abs() < 1e-12);
        assert!((r.coherent - 1.0).abs() < 1e-12);
        assert!((r.alpha_crit - 1.0).abs() < 1e-12);
    }

    #[test]
    fn report_for_erasure_three_quarters() {
        let ch = Channel::erasure(0.75).unwrap();
        let r = entropy_report(&ch, &mixed_qubit()).unwrap();
        assert!((r.mutual - 1.5).abs() < 1e-9);
        assert!((r.coherent - 0.5).abs() < 1e-9);
        assert!((r.alpha_crit - 0.5).abs() < 1e-9);
    }

    #[test]
    fn report_for_damping_diagonal_input() {
        let eta = 0.7;
        let p = 0.4;
        let ch = Channel::amplitude_damping(eta).unwrap();
        let mut rho = CMatrix::zeros(2, 2);
        rho[(0, 0)] = c(1.0 - p, 0.0);
        rho[(1, 1)] = c(p, 0.0);
        let r = entropy_report(&ch, &rho).unwrap();
        let expected =
            binary_entropy(eta * p).unwrap() - binary_entropy((1.0 - eta) * p).unwrap();
        assert!((r.coherent - expected).abs() < 1e-9);
        assert!((r.h_a - binary_entropy(p).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn erasure_closed_form_examples() {
        let crit = erasure_capacity_closed(0.75, 0.5).unwrap();
        assert!((crit.value - 1.0).abs() < 1e-12);
        assert_eq!(crit.phase, Phase::Critical);

        let noiseless = erasure_capacity_closed(1.0, 1.0).unwrap();
        assert!((noiseless.value - 1.0).abs() < 1e-12);

        let p = erasure_capacity_closed(0.9, 0.2).unwrap();
        assert!((p.value - 1.5).abs() < 1e-12);
        assert_eq!(p.phase, Phase::CorrelationConstrained);
    }

    #[test]
    fn generic_optimizer_matches_erasure_closed_form() {
        let cfg = OptimizerConfig {
            restarts: 8,
            seed: 3,
            assume_degradable: true,
            ..OptimizerConfig::default()
        };
        let ch = Channel::erasure(0.75).unwrap();
        let point = q1_alpha(&ch, 0.5, &cfg).unwrap();
        assert!((point.value - 1.0).abs() < 1e-3);
        assert!(!point.lower_bound_only);

        let dead = q1_alpha(&Channel::erasure(0.5).unwrap(), 0.5, &cfg).unwrap();
        assert!(dead.value.abs() < 1e-6);
    }

    #[test]
    fn generic_optimizer_matches_damping_scan() {
        let cfg = OptimizerConfig {
            restarts: 10,
            seed: 5,
            assume_degradable: true,
            ..OptimizerConfig::default()
        };
        let ch = Channel::amplitude_damping(0.7).unwrap();
        let generic = q1_alpha(&ch, 0.2, &cfg).unwrap();
        let oracle = ad_capacity(0.7, 0.2).unwrap();
        assert!(
            (generic.value - oracle.value).abs() < 1e-3,
            "generic {} vs oracle {}",
            generic.value,
            oracle.value
        );
    }

    #[test]
    fn zero_alpha_variant_enforces_positive_coherent_information() {
        let cfg = OptimizerConfig {
            restarts: 10,
            seed: 9,
            assume_degradable: true,
            ..OptimizerConfig::default()
        };
        // Identity qubit: mutual information 2 with strictly positive
        // coherent information at the maximally entangled input.
        let point = q1_alpha(&Channel::identity(2), 0.0, &cfg).unwrap();
        assert!((point.value - 2.0).abs() < 1e-3, "value {}", point.value);

        // Erasure at η = 1/2 has identically zero coherent information, so
        // the strict constraint is never satisfiable.
        let dead = q1_alpha(&Channel::erasure(0.5).unwrap(), 0.0, &cfg).unwrap();
        assert_eq!(dead.value, 0.0);
    }

    #[test]
    fn ea_capacity_examples() {
        let cfg = OptimizerConfig {
            restarts: 8,
            seed: 1,
            ..OptimizerConfig::default()
        };
        let idq = Channel::identity(2);
        assert!((ea_capacity(&idq, 0.0, &cfg).unwrap() - 2.0).abs() < 1e-4);
        assert!((ea_capacity(&idq, 1.0, &cfg).unwrap() - 1.0).abs() < 1e-4);
        for (eta, alpha) in [(0.75, 0.3), (0.6, 0.8)] {
            let ch = Channel::erasure(eta).unwrap();
            let expected = 2.0 * eta / (1.0 + alpha);
            assert!((ea_capacity(&ch, alpha, &cfg).unwrap() - expected).abs() < 1e-4);
        }
    }

    #[test]
    fn damping_scan_examples() {
        let p = ad_capacity(1.0, 1.0).unwrap();
        assert!((p.value - 1.0).abs() < 1e-9);
        assert!((p.witness_p() - 0.5).abs() < 1e-6);

        let dead = ad_capacity(0.5, 0.5).unwrap();
        assert!(dead.value.abs() < 1e-9);

        // Deep coherence-constrained phase equals the pure coherent-term
        // maximum over p, scaled by 1/α.
        let eta = 0.7;
        let alpha = 0.9;
        let point = ad_capacity(eta, alpha).unwrap();
        let coherent = |p: f64| damping_terms(eta, p).1;
        let (_, best_coh) = scan_and_refine(&coherent, 4001, 1e-10);
        assert!((point.value - best_coh / alpha).abs() < 1e-6);
        assert_eq!(point.phase, Phase::CoherenceConstrained);
    }

    #[test]
    fn phase_classification_of_erasure() {
        let ch = Channel::erasure(0.75).unwrap();
        let omega = mixed_qubit();
        assert_eq!(
            phase_classify(&ch, 0.3, &omega).unwrap(),
            Phase::CorrelationConstrained
        );
        assert_eq!(
            phase_classify(&ch, 0.7, &omega).unwrap(),
            Phase::CoherenceConstrained
        );
        assert_eq!(phase_classify(&ch, 0.5, &omega).unwrap(), Phase::Critical);
    }

    #[test]
    fn damping_phase_in_critical_window() {
        let eta = 0.7;
        let (lo, hi) = critical_region(eta).unwrap();
        assert!(lo < hi);
        let alpha = 0.5 * (lo + hi);
        let point = ad_capacity(eta, alpha).unwrap();
        assert_eq!(point.phase, Phase::Critical);

        // Strictly outside the window the matching single constraint binds.
        let below = ad_capacity(eta, lo - 0.02).unwrap();
        assert_eq!(below.phase, Phase::CorrelationConstrained);
        let above = ad_capacity(eta, hi + 0.02).unwrap();
        assert_eq!(above.phase, Phase::CoherenceConstrained);
    }

    #[test]
    fn critical_region_degenerates_for_identity() {
        let (lo, hi) = critical_region(1.0).unwrap();
        assert!((hi - lo).abs() < 1e-9);
        let (p0, p1) = damping_optimal_inputs(1.0).unwrap();
        assert!((p0 - 0.5).abs() < 1e-6);
        assert!((p1 - 0.5).abs() < 1e-6);
    }

    #[test]
    fn critical_region_width_is_small_but_positive() {
        let (lo, hi) = critical_region(0.7).unwrap();
        let width = hi - lo;
        assert!(width > 5e-4 && width < 1e-2, "width {width}");
    }

    #[test]
    fn erasure_curve_matches_closed_form_pointwise() {
        let alphas: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
        let curve = capacity_curve(
            &ChannelKind::Erasure { eta: 0.75 },
            &alphas,
            CurveMethod::Closed,
            &OptimizerConfig::default(),
        )
        .unwrap();
        for point in &curve {
            let reference = erasure_capacity_closed(0.75, point.alpha).unwrap();
            assert_eq!(point.value, reference.value);
        }
        for w in curve.windows(2) {
            assert!(w[1].value <= w[0].value + 1e-6);
        }
    }

    #[test]
    fn damping_curve_is_monotone_and_continuous() {
        let alphas: Vec<f64> = (5..=100).map(|i| i as f64 / 100.0).collect();
        let curve = capacity_curve(
            &ChannelKind::Damping { eta: 0.7 },
            &alphas,
            CurveMethod::Scan,
            &OptimizerConfig::default(),
        )
        .unwrap();
        for w in curve.windows(2) {
            assert!(w[1].value <= w[0].value + 1e-6);
            assert!((w[0].value - w[1].value) <= 5.0 * 0.01);
        }
    }
}
