//! Pure states and density operators on labelled multipartite spaces.

use num_complex::Complex64;

use super::dims::DimsProfile;
use super::linalg::{c, hermitian_eigen, hermiticity_defect, kron, CMatrix, CVector};
use crate::{Error, Result};

const NORM_TOL: f64 = 1e-10;
const HERM_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-9;
/// Eigenvalues below this are treated as exact zeros in entropies.
const EIG_CLAMP: f64 = 1e-12;

/// Normalised state vector on a labelled multipartite space.
#[derive(Clone, Debug)]
pub struct PureState {
    amps: CVector,
    dims: DimsProfile,
}

/// Hermitian, PSD, unit-trace operator on a labelled multipartite space.
///
/// Construction checks Hermiticity and trace; positivity is preserved by
/// every operation in this crate and can be audited with
/// [`DensityOp::min_eigenvalue`].
#[derive(Clone, Debug)]
pub struct DensityOp {
    mat: CMatrix,
    dims: DimsProfile,
}

impl PureState {
    pub fn new(amps: CVector, dims: DimsProfile) -> Result<Self> {
        if amps.len() != dims.total() {
            return Err(Error::DimMismatch {
                left: amps.len(),
                right: dims.total(),
                context: "pure state amplitudes vs dims profile",
            });
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalised((norm - 1.0).abs()));
        }
        Ok(Self { amps, dims })
    }

    /// Computational basis state |index⟩.
    pub fn basis(dims: DimsProfile, index: usize) -> Self {
        let mut amps = CVector::zeros(dims.total());
        amps[index] = c(1.0, 0.0);
        Self { amps, dims }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn dims(&self) -> &DimsProfile {
        &self.dims
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let dims = self.dims.concat(&other.dims)?;
        let amps = self.amps.kronecker(&other.amps);
        Ok(Self { amps, dims })
    }

    pub fn to_density(&self) -> DensityOp {
        DensityOp {
            mat: &self.amps * self.amps.adjoint(),
            dims: self.dims.clone(),
        }
    }

    /// Reduced density operator on the `keep` subsystems (original order),
    /// computed directly from the amplitudes.
    pub fn reduced(&self, keep: &[&str]) -> Result<DensityOp> {
        let keep_pos = self.dims.keep_positions(keep)?;
        let (bases, offs) = split_indices(&self.dims, &keep_pos);
        let dk = bases.len();
        let mut mat = CMatrix::zeros(dk, dk);
        for i in 0..dk {
            for j in i..dk {
                let mut acc = c(0.0, 0.0);
                for &t in &offs {
                    acc += self.amps[bases[i] + t] * self.amps[bases[j] + t].conj();
                }
                mat[(i, j)] = acc;
                if i != j {
                    mat[(j, i)] = acc.conj();
                }
            }
        }
        Ok(DensityOp {
            mat,
            dims: self.dims.select(&keep_pos),
        })
    }

    /// Reorder the subsystems to `order` (a permutation of the labels).
    pub fn permuted(&self, order: &[&str]) -> Result<Self> {
        let perm = permutation(&self.dims, order)?;
        let map = index_map(&self.dims, &perm);
        let mut amps = CVector::zeros(self.amps.len());
        for (new_idx, &old_idx) in map.iter().enumerate() {
            amps[new_idx] = self.amps[old_idx];
        }
        Ok(Self {
            amps,
            dims: self.dims.select(&perm),
        })
    }
}

impl DensityOp {
    pub fn new(mat: CMatrix, dims: DimsProfile) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        if mat.nrows() != dims.total() {
            return Err(Error::DimMismatch {
                left: mat.nrows(),
                right: dims.total(),
                context: "density operator vs dims profile",
            });
        }
        let defect = hermiticity_defect(&mat);
        if defect > HERM_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr: Complex64 = mat.diagonal().iter().sum();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::BadTrace(tr.re));
        }
        Ok(Self { mat, dims })
    }

    /// Construct without re-validating; for internal operations that preserve
    /// the invariants by construction.
    pub(crate) fn from_parts(mat: CMatrix, dims: DimsProfile) -> Self {
        debug_assert!(hermiticity_defect(&mat) <= 1e-8);
        Self { mat, dims }
    }

    pub fn maximally_mixed(dims: DimsProfile) -> Self {
        let d = dims.total();
        let mat = CMatrix::identity(d, d) * c(1.0 / d as f64, 0.0);
        Self { mat, dims }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dims(&self) -> &DimsProfile {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            mat: kron(&self.mat, &other.mat),
            dims: self.dims.concat(&other.dims)?,
        })
    }

    /// Partial trace keeping the `keep` subsystems, in original order. Trace
    /// is preserved; keeping every label returns the state unchanged.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<Self> {
        let keep_pos = self.dims.keep_positions(keep)?;
        let (bases, offs) = split_indices(&self.dims, &keep_pos);
        let dk = bases.len();
        let mut mat = CMatrix::zeros(dk, dk);
        for i in 0..dk {
            for j in i..dk {
                let mut acc = c(0.0, 0.0);
                for &t in &offs {
                    acc += self.mat[(bases[i] + t, bases[j] + t)];
                }
                mat[(i, j)] = acc;
                if i != j {
                    mat[(j, i)] = acc.conj();
                }
            }
        }
        Ok(Self {
            mat,
            dims: self.dims.select(&keep_pos),
        })
    }

    /// Reorder the subsystems to `order` (a permutation of the labels).
    pub fn permuted(&self, order: &[&str]) -> Result<Self> {
        let perm = permutation(&self.dims, order)?;
        let map = index_map(&self.dims, &perm);
        let d = self.mat.nrows();
        let mut mat = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                mat[(i, j)] = self.mat[(map[i], map[j])];
            }
        }
        Ok(Self {
            mat,
            dims: self.dims.select(&perm),
        })
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        super::linalg::hermitian_eigenvalues(&self.mat)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()
            .first()
            .copied()
            .unwrap_or(f64::INFINITY)
    }

    /// Von Neumann entropy in bits; eigenvalues below 1e-12 count as zero.
    pub fn vn_entropy(&self) -> f64 {
        entropy_bits(&self.eigenvalues())
    }

    /// Purify into a pure state on `(ref_label, original labels...)`, with a
    /// reference of the same total dimension.
    pub fn purify(&self, ref_label: &str) -> Result<PureState> {
        let d = self.dim();
        let (vals, vecs) = hermitian_eigen(&self.mat);
        let mut amps = CVector::zeros(d * d);
        for (k, &lam) in vals.iter().enumerate() {
            let w = lam.max(0.0).sqrt();
            if w == 0.0 {
                continue;
            }
            for a in 0..d {
                amps[k * d + a] += c(w, 0.0) * vecs[(a, k)];
            }
        }
        let norm = amps.norm();
        amps /= c(norm, 0.0);
        let dims = DimsProfile::single(ref_label, d).concat(&self.dims)?;
        PureState::new(amps, dims)
    }
}

/// Uhlmann fidelity (Tr √(√ρ σ √ρ))², in [0, 1].
pub fn fidelity(rho: &DensityOp, sigma: &DensityOp) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: sigma.dim(),
            context: "fidelity",
        });
    }
    let sr = super::linalg::psd_sqrt(rho.matrix());
    let inner = &sr * sigma.matrix() * &sr;
    let vals = super::linalg::hermitian_eigenvalues(&inner);
    let s: f64 = vals.iter().map(|&v| v.max(0.0).sqrt()).sum();
    Ok((s * s).clamp(0.0, 1.0))
}

/// Binary entropy in bits, with h(0) = h(1) = 0.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            what: "binary entropy argument",
            value: p,
        });
    }
    Ok(entropy_bits(&[p, 1.0 - p]))
}

pub(crate) fn entropy_bits(probs: &[f64]) -> f64 {
    let mut h = 0.0;
    for &p in probs {
        if p > EIG_CLAMP {
            h -= p * p.log2();
        }
    }
    h
}

/// Schmidt-uniform state (1/√d)·Σ|k⟩|k⟩ on two d-dimensional labels.
pub fn maximally_entangled(d: usize, label_a: &str, label_b: &str) -> Result<PureState> {
    let dims = DimsProfile::new([(label_a, d), (label_b, d)])?;
    let mut amps = CVector::zeros(d * d);
    let w = c(1.0 / (d as f64).sqrt(), 0.0);
    for k in 0..d {
        amps[k * d + k] = w;
    }
    PureState::new(amps, dims)
}

/// Flat-index bookkeeping for partial traces: `bases[i]` enumerates the kept
/// multi-indices (row-major over kept positions), `offs[t]` the traced ones.
/// A full index is always `base + off`.
fn split_indices(dims: &DimsProfile, keep_pos: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let all_dims = dims.dims();
    let strides = dims.strides();
    let traced_pos: Vec<usize> = (0..all_dims.len())
        .filter(|p| !keep_pos.contains(p))
        .collect();
    (
        enumerate_flat(&all_dims, &strides, keep_pos),
        enumerate_flat(&all_dims, &strides, &traced_pos),
    )
}

/// All Σ digit·stride combinations over the subsystems at `positions`,
/// iterated row-major (first listed position most significant).
fn enumerate_flat(all_dims: &[usize], strides: &[usize], positions: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &p in positions {
        let mut next = Vec::with_capacity(out.len() * all_dims[p]);
        for &prefix in &out {
            for digit in 0..all_dims[p] {
                next.push(prefix + digit * strides[p]);
            }
        }
        out = next;
    }
    out
}

fn permutation(dims: &DimsProfile, order: &[&str]) -> Result<Vec<usize>> {
    if order.len() != dims.len() {
        return Err(Error::DimMismatch {
            left: order.len(),
            right: dims.len(),
            context: "permutation order vs dims profile",
        });
    }
    let mut perm = Vec::with_capacity(order.len());
    for label in order {
        let p = dims.position(label)?;
        if perm.contains(&p) {
            return Err(Error::DuplicateLabel(label.to_string()));
        }
        perm.push(p);
    }
    Ok(perm)
}

/// For each flat index of the permuted profile, the corresponding flat index
/// in the original profile.
fn index_map(dims: &DimsProfile, perm: &[usize]) -> Vec<usize> {
    let all_dims = dims.dims();
    let old_strides = dims.strides();
    let total = dims.total();
    let mut map = vec![0usize; total];
    let new_dims: Vec<usize> = perm.iter().map(|&p| all_dims[p]).collect();
    for (new_idx, slot) in map.iter_mut().enumerate() {
        let mut rem = new_idx;
        let mut old_idx = 0;
        for (k, &p) in perm.iter().enumerate().rev() {
            let digit = rem % new_dims[k];
            rem /= new_dims[k];
            old_idx += digit * old_strides[p];
        }
        *slot = old_idx;
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::{identity, max_abs_diff};

    fn qubit_dims(label: &str) -> DimsProfile {
        DimsProfile::single(label, 2)
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let a = DensityOp::maximally_mixed(qubit_dims("A"));
        let b = DensityOp::maximally_mixed(qubit_dims("B"));
        let ab = a.tensor(&b).unwrap();
        assert!(max_abs_diff(ab.matrix(), &(identity(4) * c(0.25, 0.0))) < 1e-15);
        assert_eq!(ab.dims().labels().collect::<Vec<_>>(), vec!["A", "B"]);
    }

    #[test]
    fn tensor_of_basis_states() {
        let zero = PureState::basis(qubit_dims("A"), 0);
        let one = PureState::basis(qubit_dims("B"), 1);
        let prod = zero.tensor(&one).unwrap();
        assert!((prod.amplitudes()[1] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn bell_pair_traces_to_maximally_mixed() {
        let bell = maximally_entangled(2, "A", "B").unwrap();
        let rho_a = bell.to_density().partial_trace(&["A"]).unwrap();
        assert!(max_abs_diff(rho_a.matrix(), &(identity(2) * c(0.5, 0.0))) < 1e-12);
    }

    #[test]
    fn product_state_traces_to_its_factor() {
        let psi = PureState::new(
            CVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]),
            qubit_dims("A"),
        )
        .unwrap();
        let rho = psi.to_density();
        let omega = DensityOp::maximally_mixed(qubit_dims("B"));
        let joint = rho.tensor(&omega).unwrap();
        let back = joint.partial_trace(&["A"]).unwrap();
        assert!(max_abs_diff(back.matrix(), rho.matrix()) < 1e-12);
    }

    #[test]
    fn shifted_phase_bell_state_traces_to_maximally_mixed() {
        // (1/√2)·Σ_k e^{iπk}|k⟩|k+1 mod 2⟩ for d = 2, traced to the first qudit.
        let dims = DimsProfile::new([("A", 2), ("B", 2)]).unwrap();
        let w = 1.0 / 2.0f64.sqrt();
        let amps = CVector::from_vec(vec![c(0.0, 0.0), c(w, 0.0), c(-w, 0.0), c(0.0, 0.0)]);
        let psi = PureState::new(amps, dims).unwrap();
        let rho_a = psi.reduced(&["A"]).unwrap();
        assert!(max_abs_diff(rho_a.matrix(), &(identity(2) * c(0.5, 0.0))) < 1e-12);
    }

    #[test]
    fn tracing_everything_keeps_unit_trace() {
        let bell = maximally_entangled(3, "A", "B").unwrap().to_density();
        let scalar = bell.partial_trace(&[]).unwrap();
        assert_eq!(scalar.dim(), 1);
        assert!((scalar.matrix()[(0, 0)].re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn partial_trace_unknown_label_fails() {
        let bell = maximally_entangled(2, "A", "B").unwrap().to_density();
        assert!(matches!(
            bell.partial_trace(&["Q"]),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn trace_norm_of_pure_minus_mixed_qubit() {
        let psi = PureState::basis(qubit_dims("A"), 0).to_density();
        let omega = DensityOp::maximally_mixed(qubit_dims("A"));
        let diff = psi.matrix() - omega.matrix();
        assert!((super::super::linalg::trace_norm(&diff).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_norm_of_bell_minus_mixed() {
        let bell = maximally_entangled(2, "A", "B").unwrap().to_density();
        let omega = DensityOp::maximally_mixed(bell.dims().clone());
        let diff = bell.matrix() - omega.matrix();
        // Eigenvalues are {3/4, -1/4, -1/4, -1/4}.
        assert!((super::super::linalg::trace_norm(&diff).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn fidelity_examples() {
        let zero = PureState::basis(qubit_dims("A"), 0).to_density();
        let one = PureState::basis(qubit_dims("A"), 1).to_density();
        let omega = DensityOp::maximally_mixed(qubit_dims("A"));
        assert!((fidelity(&zero, &zero).unwrap() - 1.0).abs() < 1e-12);
        assert!(fidelity(&zero, &one).unwrap() < 1e-12);
        assert!((fidelity(&zero, &omega).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn entropy_examples() {
        let psi = PureState::basis(qubit_dims("A"), 0).to_density();
        assert!(psi.vn_entropy().abs() < 1e-12);
        let omega = DensityOp::maximally_mixed(DimsProfile::single("A", 8));
        assert!((omega.vn_entropy() - 3.0).abs() < 1e-12);
        let diag = DensityOp::new(
            CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.75, 0.0), c(0.25, 0.0)])),
            qubit_dims("A"),
        )
        .unwrap();
        assert!((diag.vn_entropy() - 0.8112781244591328).abs() < 1e-12);
    }

    #[test]
    fn binary_entropy_examples() {
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.2).unwrap() - 0.7219280948873623).abs() < 1e-12);
        assert!(binary_entropy(1.2).is_err());
    }

    #[test]
    fn maximally_entangled_examples() {
        let bell = maximally_entangled(2, "A", "B").unwrap();
        let w = 1.0 / 2.0f64.sqrt();
        assert!((bell.amplitudes()[0] - c(w, 0.0)).norm() < 1e-15);
        assert!((bell.amplitudes()[3] - c(w, 0.0)).norm() < 1e-15);
        assert!(bell.amplitudes()[1].norm() < 1e-15);

        let trivial = maximally_entangled(1, "A", "B").unwrap();
        assert_eq!(trivial.amplitudes().len(), 1);

        let rho_b = bell.reduced(&["B"]).unwrap();
        assert!(max_abs_diff(rho_b.matrix(), &(identity(2) * c(0.5, 0.0))) < 1e-12);
    }

    #[test]
    fn purification_reduces_back() {
        let diag = DensityOp::new(
            CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.3, 0.0), c(0.7, 0.0)])),
            qubit_dims("A"),
        )
        .unwrap();
        let psi = diag.purify("R").unwrap();
        let back = psi.reduced(&["A"]).unwrap();
        assert!(max_abs_diff(back.matrix(), diag.matrix()) < 1e-10);
        assert!((psi.reduced(&["R"]).unwrap().vn_entropy() - diag.vn_entropy()).abs() < 1e-10);
    }

    #[test]
    fn permutation_round_trips() {
        let dims = DimsProfile::new([("A", 2), ("B", 3), ("C", 2)]).unwrap();
        let mut amps = CVector::zeros(12);
        for i in 0..12 {
            amps[i] = c((i as f64 + 1.0) / 25.495097567963924, 0.0);
        }
        let norm = amps.norm();
        amps /= c(norm, 0.0);
        let psi = PureState::new(amps, dims).unwrap();
        let swapped = psi.permuted(&["C", "A", "B"]).unwrap();
        let back = swapped.permuted(&["A", "B", "C"]).unwrap();
        for i in 0..12 {
            assert!((psi.amplitudes()[i] - back.amplitudes()[i]).norm() < 1e-15);
        }
    }
}
