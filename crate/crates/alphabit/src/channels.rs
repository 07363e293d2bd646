//! Quantum channels as Kraus families, their Stinespring dilations and
//! complementary channels, plus the erasure and amplitude-damping families.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::qcore::{
    c, haar_isometry, hermitian_eigenvalues, kron, max_abs, CMatrix, DensityOp, DimsProfile,
    PureState,
};
use crate::{Error, Result};

const COMPLETENESS_TOL: f64 = 1e-6;

/// Completely positive trace-preserving map held as a Kraus family.
///
/// The environment dimension is exactly the Kraus count; no rank
/// minimisation is performed.
#[derive(Clone, Debug)]
pub struct Channel {
    kraus: Vec<CMatrix>,
    d_in: usize,
    d_out: usize,
}

/// Isometry V: A → B ⊗ E with V†V = I, output index ordered B-major
/// (row = b·env_dim + e).
#[derive(Clone, Debug)]
pub struct StinespringIsometry {
    pub matrix: CMatrix,
    pub d_in: usize,
    pub d_out: usize,
    pub env_dim: usize,
}

impl Channel {
    /// Validate a Kraus family: consistent shapes and Σ K†K = I within 1e-6.
    pub fn from_kraus(kraus: Vec<CMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::KrausCompleteness { residual: 1.0 });
        }
        let d_out = kraus[0].nrows();
        let d_in = kraus[0].ncols();
        for k in &kraus {
            if k.nrows() != d_out || k.ncols() != d_in {
                return Err(Error::DimMismatch {
                    left: k.nrows() * k.ncols(),
                    right: d_out * d_in,
                    context: "kraus operator shapes",
                });
            }
        }
        let mut acc = CMatrix::zeros(d_in, d_in);
        for k in &kraus {
            acc += k.adjoint() * k;
        }
        let residual = max_abs(&(acc - CMatrix::identity(d_in, d_in)));
        if residual > COMPLETENESS_TOL {
            return Err(Error::KrausCompleteness { residual });
        }
        Ok(Self { kraus, d_in, d_out })
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn env_dim(&self) -> usize {
        self.kraus.len()
    }

    pub fn identity(d: usize) -> Self {
        Self {
            kraus: vec![CMatrix::identity(d, d)],
            d_in: d,
            d_out: d,
        }
    }

    /// Channel taking every input to the fixed state `sigma`.
    pub fn constant(sigma: &CMatrix, d_in: usize) -> Result<Self> {
        if sigma.nrows() != sigma.ncols() {
            return Err(Error::NotSquare {
                rows: sigma.nrows(),
                cols: sigma.ncols(),
            });
        }
        let d_out = sigma.nrows();
        let (vals, vecs) = crate::qcore::hermitian_eigen(sigma);
        let mut kraus = Vec::new();
        for (k, &lam) in vals.iter().enumerate() {
            if lam < 1e-14 {
                continue;
            }
            let col = vecs.column(k).into_owned();
            for j in 0..d_in {
                let mut m = CMatrix::zeros(d_out, d_in);
                for b in 0..d_out {
                    m[(b, j)] = c(lam.sqrt(), 0.0) * col[b];
                }
                kraus.push(m);
            }
        }
        Self::from_kraus(kraus)
    }

    /// Qubit erasure channel: input dim 2, output levels {0, 1, E}. With
    /// probability η the qubit is transmitted perfectly, otherwise the
    /// erased symbol |E⟩ is produced.
    pub fn erasure(eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::OutOfRange {
                what: "erasure parameter",
                value: eta,
            });
        }
        let se = eta.sqrt();
        let sl = (1.0 - eta).sqrt();
        let mut keep = CMatrix::zeros(3, 2);
        keep[(0, 0)] = c(se, 0.0);
        keep[(1, 1)] = c(se, 0.0);
        let mut lose0 = CMatrix::zeros(3, 2);
        lose0[(2, 0)] = c(sl, 0.0);
        let mut lose1 = CMatrix::zeros(3, 2);
        lose1[(2, 1)] = c(sl, 0.0);
        Self::from_kraus(vec![keep, lose0, lose1])
    }

    /// Amplitude damping with retention η: Kraus |0⟩⟨0| + √η|1⟩⟨1| and
    /// √(1-η)|0⟩⟨1|.
    pub fn amplitude_damping(eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::OutOfRange {
                what: "damping parameter",
                value: eta,
            });
        }
        let mut a0 = CMatrix::zeros(2, 2);
        a0[(0, 0)] = c(1.0, 0.0);
        a0[(1, 1)] = c(eta.sqrt(), 0.0);
        let mut a1 = CMatrix::zeros(2, 2);
        a1[(0, 1)] = c((1.0 - eta).sqrt(), 0.0);
        Self::from_kraus(vec![a0, a1])
    }

    /// Random channel by Haar-isometry slicing: the Kraus operators are the
    /// environment slices of the first d_in columns of a Haar unitary on
    /// d_out·env_dim.
    pub fn random<R: Rng + ?Sized>(
        d_in: usize,
        d_out: usize,
        env_dim: usize,
        rng: &mut R,
    ) -> Self {
        assert!(d_out * env_dim >= d_in);
        let v = haar_isometry(d_out * env_dim, d_in, rng);
        let kraus = (0..env_dim)
            .map(|e| CMatrix::from_fn(d_out, d_in, |b, a| v[(b * env_dim + e, a)]))
            .collect();
        Self {
            kraus,
            d_in,
            d_out,
        }
    }

    /// Σ K·m·K† on a raw operator.
    pub fn apply_matrix(&self, m: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out += k * m * k.adjoint();
        }
        out
    }

    /// Σ K†·m·K, the adjoint (Heisenberg-picture) map.
    pub fn adjoint_apply(&self, m: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.d_in, self.d_in);
        for k in &self.kraus {
            out += k.adjoint() * m * k;
        }
        out
    }

    /// Apply to a single-subsystem state, reusing its label for the output.
    /// Multipartite states go through [`Channel::apply_on`] instead.
    pub fn apply(&self, rho: &DensityOp) -> Result<DensityOp> {
        if rho.dim() != self.d_in || rho.dims().len() != 1 {
            return Err(Error::DimMismatch {
                left: rho.dim(),
                right: self.d_in,
                context: "channel input (single labelled subsystem)",
            });
        }
        let label = rho.dims().labels().next().expect("one label").to_string();
        let dims = rho.dims().with_dim(&label, self.d_out)?;
        Ok(DensityOp::from_parts(self.apply_matrix(rho.matrix()), dims))
    }

    /// Apply on the labelled factor of a multipartite state, identity
    /// elsewhere; the factor's dimension becomes d_out.
    pub fn apply_on(&self, rho: &DensityOp, on: &str) -> Result<DensityOp> {
        let pos = rho.dims().position(on)?;
        let dims_list = rho.dims().dims();
        if dims_list[pos] != self.d_in {
            return Err(Error::DimMismatch {
                left: dims_list[pos],
                right: self.d_in,
                context: "channel input label",
            });
        }
        let before: usize = dims_list[..pos].iter().product();
        let after: usize = dims_list[pos + 1..].iter().product();
        let ib = CMatrix::identity(before, before);
        let ia = CMatrix::identity(after, after);
        let d_new = before * self.d_out * after;
        let mut out = CMatrix::zeros(d_new, d_new);
        for k in &self.kraus {
            let lifted = kron(&kron(&ib, k), &ia);
            out += &lifted * rho.matrix() * lifted.adjoint();
        }
        Ok(DensityOp::from_parts(
            out,
            rho.dims().with_dim(on, self.d_out)?,
        ))
    }

    /// Stinespring dilation V = Σ_e K_e ⊗ |e⟩_E.
    pub fn stinespring(&self) -> StinespringIsometry {
        let env = self.env_dim();
        let mut v = CMatrix::zeros(self.d_out * env, self.d_in);
        for (e, k) in self.kraus.iter().enumerate() {
            for b in 0..self.d_out {
                for a in 0..self.d_in {
                    v[(b * env + e, a)] = k[(b, a)];
                }
            }
        }
        StinespringIsometry {
            matrix: v,
            d_in: self.d_in,
            d_out: self.d_out,
            env_dim: env,
        }
    }

    /// Complementary channel: trace out B from the dilation. Its Kraus
    /// operators are the B-slices of V, so env and output dimensions swap
    /// roles.
    pub fn complementary(&self) -> Channel {
        let env = self.env_dim();
        let v = self.stinespring().matrix;
        let kraus: Vec<CMatrix> = (0..self.d_out)
            .map(|b| CMatrix::from_fn(env, self.d_in, |e, a| v[(b * env + e, a)]))
            .collect();
        Channel {
            kraus,
            d_in: self.d_in,
            d_out: env,
        }
    }

    /// Choi state (Id ⊗ N)(φ⁺) on labels ("A", d_in), ("B", d_out).
    pub fn choi(&self) -> DensityOp {
        let d = self.d_in;
        let dim = d * self.d_out;
        let mut mat = CMatrix::zeros(dim, dim);
        let w = 1.0 / (d as f64).sqrt();
        for k in &self.kraus {
            let mut vec = CMatrix::zeros(dim, 1);
            for a in 0..d {
                for b in 0..self.d_out {
                    vec[(a * self.d_out + b, 0)] = c(w, 0.0) * k[(b, a)];
                }
            }
            mat += &vec * vec.adjoint();
        }
        DensityOp::from_parts(
            mat,
            DimsProfile::new([("A", d), ("B", self.d_out)]).expect("distinct labels"),
        )
    }

    pub fn tensor(&self, other: &Channel) -> Channel {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(kron(a, b));
            }
        }
        Channel {
            kraus,
            d_in: self.d_in * other.d_in,
            d_out: self.d_out * other.d_out,
        }
    }

    /// self ∘ inner: apply `inner` first.
    pub fn compose(&self, inner: &Channel) -> Result<Channel> {
        if inner.d_out != self.d_in {
            return Err(Error::DimMismatch {
                left: inner.d_out,
                right: self.d_in,
                context: "channel composition",
            });
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * inner.kraus.len());
        for a in &self.kraus {
            for b in &inner.kraus {
                kraus.push(a * b);
            }
        }
        Ok(Channel {
            kraus,
            d_in: inner.d_in,
            d_out: self.d_out,
        })
    }

    /// Image of the maximally mixed input.
    pub fn mixed_output(&self) -> CMatrix {
        let omega = CMatrix::identity(self.d_in, self.d_in) * c(1.0 / self.d_in as f64, 0.0);
        self.apply_matrix(&omega)
    }

    pub fn to_json_string(&self) -> String {
        let wire = ChannelWire {
            d_in: self.d_in,
            d_out: self.d_out,
            kraus: self
                .kraus
                .iter()
                .map(|k| {
                    let mut rows = Vec::with_capacity(self.d_out * self.d_in);
                    for b in 0..self.d_out {
                        for a in 0..self.d_in {
                            rows.push([k[(b, a)].re, k[(b, a)].im]);
                        }
                    }
                    rows
                })
                .collect(),
        };
        serde_json::to_string(&wire).expect("channel serialisation")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let wire: ChannelWire = serde_json::from_str(s).map_err(|e| Error::Parse {
            pos: e.column(),
            msg: e.to_string(),
        })?;
        let mut kraus = Vec::with_capacity(wire.kraus.len());
        for flat in &wire.kraus {
            if flat.len() != wire.d_in * wire.d_out {
                return Err(Error::DimMismatch {
                    left: flat.len(),
                    right: wire.d_in * wire.d_out,
                    context: "kraus entries in wire format",
                });
            }
            let m = CMatrix::from_fn(wire.d_out, wire.d_in, |b, a| {
                let [re, im] = flat[b * wire.d_in + a];
                c(re, im)
            });
            kraus.push(m);
        }
        Self::from_kraus(kraus)
    }
}

/// Row-major wire format: each Kraus operator is a flat list of [re, im]
/// pairs, rows of length d_in, d_out rows.
#[derive(Serialize, Deserialize)]
struct ChannelWire {
    d_in: usize,
    d_out: usize,
    kraus: Vec<Vec<[f64; 2]>>,
}

impl StinespringIsometry {
    /// Apply to an input column vector, producing amplitudes on B ⊗ E
    /// (B-major).
    pub fn apply_vec(&self, v: &crate::qcore::CVector) -> crate::qcore::CVector {
        &self.matrix * v
    }

    pub fn isometry_defect(&self) -> f64 {
        let vtv = self.matrix.adjoint() * &self.matrix;
        max_abs(&(vtv - CMatrix::identity(self.d_in, self.d_in)))
    }
}

/// Channel equality up to an isometry on the output: sorted Choi spectra
/// agree and so do the spectra of the mixed-input images.
pub fn isometrically_equivalent(a: &Channel, b: &Channel, tol: f64) -> bool {
    if a.d_in != b.d_in {
        return false;
    }
    let sa = hermitian_eigenvalues(a.choi().matrix());
    let sb = hermitian_eigenvalues(b.choi().matrix());
    let spectra_match = pad_compare(&sa, &sb, tol);
    let ma = hermitian_eigenvalues(&a.mixed_output());
    let mb = hermitian_eigenvalues(&b.mixed_output());
    spectra_match && pad_compare(&ma, &mb, tol)
}

/// Compare ascending spectra after left-padding the shorter with zeros
/// (isometric embeddings only add zero eigenvalues).
fn pad_compare(a: &[f64], b: &[f64], tol: f64) -> bool {
    let n = a.len().max(b.len());
    let get = |s: &[f64], i: usize| -> f64 {
        let pad = n - s.len();
        if i < pad {
            0.0
        } else {
            s[i - pad]
        }
    };
    // Both ascending; padding zeros belong at the front only if all entries
    // are nonnegative, which holds for the PSD matrices compared here.
    (0..n).all(|i| (get(a, i) - get(b, i)).abs() <= tol)
}

/// Convenience: |E⟩⟨E|-style basis-state density on one label.
pub fn basis_density(d: usize, index: usize, label: &str) -> DensityOp {
    PureState::basis(DimsProfile::single(label, d), index).to_density()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{
        identity, max_abs_diff, maximally_entangled, rng_stream, trace_norm, CVector,
    };

    #[test]
    fn identity_channel_validates() {
        let ch = Channel::from_kraus(vec![identity(2)]).unwrap();
        assert_eq!(ch.env_dim(), 1);
        assert_eq!((ch.d_in(), ch.d_out()), (2, 2));
    }

    #[test]
    fn replacer_kraus_set_validates() {
        // {|0⟩⟨0|, |0⟩⟨1|} sends everything to |0⟩⟨0|.
        let mut k0 = CMatrix::zeros(2, 2);
        k0[(0, 0)] = c(1.0, 0.0);
        let mut k1 = CMatrix::zeros(2, 2);
        k1[(0, 1)] = c(1.0, 0.0);
        let ch = Channel::from_kraus(vec![k0, k1]).unwrap();
        let rho = crate::qcore::DensityOp::maximally_mixed(DimsProfile::single("A", 2));
        let out = ch.apply(&rho).unwrap();
        assert!((out.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn damping_kraus_family_validates() {
        let eta: f64 = 0.7;
        let mut a0 = CMatrix::zeros(2, 2);
        a0[(0, 0)] = c(1.0, 0.0);
        a0[(1, 1)] = c(eta.sqrt(), 0.0);
        let mut a1 = CMatrix::zeros(2, 2);
        a1[(0, 1)] = c((1.0 - eta).sqrt(), 0.0);
        assert!(Channel::from_kraus(vec![a0, a1]).is_ok());
    }

    #[test]
    fn completeness_violation_reports_residual() {
        let k = identity(2) * c(0.9, 0.0);
        match Channel::from_kraus(vec![k]) {
            Err(Error::KrausCompleteness { residual }) => assert!(residual > 0.1),
            other => panic!("expected completeness failure, got {other:?}"),
        }
    }

    #[test]
    fn stinespring_of_identity_has_trivial_env() {
        let v = Channel::identity(2).stinespring();
        assert_eq!(v.env_dim, 1);
        assert!(v.isometry_defect() < 1e-12);
        assert!(max_abs_diff(&v.matrix, &identity(2)) < 1e-15);
    }

    #[test]
    #[allow(clippy::identity_op, clippy::erasing_op)] // indices spell out (b, e)
    fn erasure_dilation_matches_displayed_isometry() {
        // √η(α|0⟩_B + β|1⟩_B)|E⟩_E + √(1-η)|E⟩_B(α|0⟩_E + β|1⟩_E), with the
        // erased symbol at level 2 on both sides. The constructor's env
        // ordering is [keep, lose0, lose1]; remap env levels (0,1,2) →
        // (2,0,1) to compare.
        let eta: f64 = 0.6;
        let v = Channel::erasure(eta).unwrap().stinespring();
        let mut expected = CMatrix::zeros(9, 2);
        let se = eta.sqrt();
        let sl = (1.0 - eta).sqrt();
        expected[(0 * 3 + 2, 0)] = c(se, 0.0); // |0⟩_B|E⟩_E
        expected[(1 * 3 + 2, 1)] = c(se, 0.0); // |1⟩_B|E⟩_E
        expected[(2 * 3 + 0, 0)] = c(sl, 0.0); // |E⟩_B|0⟩_E
        expected[(2 * 3 + 1, 1)] = c(sl, 0.0); // |E⟩_B|1⟩_E
        let env_perm = [2usize, 0, 1];
        let mut remapped = CMatrix::zeros(9, 2);
        for b in 0..3 {
            for e in 0..3 {
                for a in 0..2 {
                    remapped[(b * 3 + env_perm[e], a)] = v.matrix[(b * 3 + e, a)];
                }
            }
        }
        assert!(max_abs_diff(&remapped, &expected) < 1e-12);
    }

    #[test]
    fn damping_dilation_matches_displayed_isometry() {
        // α|0⟩_B|0⟩_E + β(√η|1⟩_B|0⟩_E + √(1-η)|0⟩_B|1⟩_E)
        let eta: f64 = 0.7;
        let v = Channel::amplitude_damping(eta).unwrap().stinespring();
        let mut expected = CMatrix::zeros(4, 2);
        expected[(0, 0)] = c(1.0, 0.0);
        expected[(2, 1)] = c(eta.sqrt(), 0.0);
        expected[(1, 1)] = c((1.0 - eta).sqrt(), 0.0);
        assert!(max_abs_diff(&v.matrix, &expected) < 1e-12);
    }

    #[test]
    fn complementary_of_identity_is_constant() {
        let comp = Channel::identity(3).complementary();
        assert_eq!(comp.d_out(), 1);
        let rho = crate::qcore::DensityOp::maximally_mixed(DimsProfile::single("A", 3));
        let out = comp.apply(&rho).unwrap();
        assert!((out.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complementary_erasure_is_flipped_erasure() {
        for eta in [0.25, 0.6, 0.75] {
            let comp = Channel::erasure(eta).unwrap().complementary();
            let flipped = Channel::erasure(1.0 - eta).unwrap();
            assert!(isometrically_equivalent(&comp, &flipped, 1e-8));
        }
    }

    #[test]
    fn complementary_damping_is_flipped_damping() {
        for eta in [0.3, 0.6, 0.85] {
            let comp = Channel::amplitude_damping(eta).unwrap().complementary();
            let flipped = Channel::amplitude_damping(1.0 - eta).unwrap();
            // The complement comes out with exactly the flipped Kraus family.
            assert!(max_abs_diff(comp.choi().matrix(), flipped.choi().matrix()) < 1e-12);
        }
    }

    #[test]
    fn double_complement_preserves_choi_spectrum() {
        let mut rng = rng_stream(21, 0);
        for _ in 0..10 {
            let ch = Channel::random(3, 2, 2, &mut rng);
            let cc = ch.complementary().complementary();
            let sa = hermitian_eigenvalues(ch.choi().matrix());
            let sb = hermitian_eigenvalues(cc.choi().matrix());
            assert!(super::pad_compare(&sa, &sb, 1e-8));
        }
    }

    #[test]
    fn apply_identity_and_erasure_limits() {
        let rho = crate::qcore::DensityOp::new(
            CMatrix::from_row_slice(
                2,
                2,
                &[c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)],
            ),
            DimsProfile::single("A", 2),
        )
        .unwrap();
        let id_out = Channel::identity(2).apply(&rho).unwrap();
        assert!(max_abs_diff(id_out.matrix(), rho.matrix()) < 1e-14);

        let erased = Channel::erasure(0.0).unwrap().apply(&rho).unwrap();
        assert!((erased.matrix()[(2, 2)].re - 1.0).abs() < 1e-12);

        let kept = Channel::erasure(1.0).unwrap().apply(&rho).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((kept.matrix()[(i, j)] - rho.matrix()[(i, j)]).norm() < 1e-12);
            }
        }
        assert!(kept.matrix()[(2, 2)].norm() < 1e-12);
    }

    #[test]
    fn apply_on_acts_locally() {
        let bell = maximally_entangled(2, "A", "B").unwrap().to_density();
        let out = Channel::erasure(0.75)
            .unwrap()
            .apply_on(&bell, "B")
            .unwrap();
        assert_eq!(out.dims().dim_of("B").unwrap(), 3);
        let tr: f64 = out.matrix().diagonal().iter().map(|z| z.re).sum();
        assert!((tr - 1.0).abs() < 1e-9);
        let rho_a = out.partial_trace(&["A"]).unwrap();
        assert!(max_abs_diff(rho_a.matrix(), &(identity(2) * c(0.5, 0.0))) < 1e-12);
    }

    #[test]
    fn choi_of_identity_is_bell_state() {
        let choi = Channel::identity(2).choi();
        let bell = maximally_entangled(2, "A", "B").unwrap().to_density();
        assert!(max_abs_diff(choi.matrix(), bell.matrix()) < 1e-14);
    }

    #[test]
    fn choi_of_constant_is_product() {
        let sigma = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.2, 0.0), c(0.8, 0.0)]));
        let ch = Channel::constant(&sigma, 3).unwrap();
        let choi = ch.choi();
        let omega = identity(3) * c(1.0 / 3.0, 0.0);
        let expected = kron(&omega, &sigma);
        assert!(max_abs_diff(choi.matrix(), &expected) < 1e-12);
    }

    #[test]
    fn choi_spectrum_of_erasure() {
        // Direct eigendecomposition: a weight-η Bell branch plus two erased
        // branches of weight (1-η)/2 each.
        let choi = Channel::erasure(0.75).unwrap().choi();
        let mut vals = hermitian_eigenvalues(choi.matrix());
        vals.reverse();
        let expected = [0.75, 0.125, 0.125, 0.0, 0.0, 0.0];
        for (v, e) in vals.iter().zip(expected.iter()) {
            assert!((v - e).abs() < 1e-12, "spectrum {vals:?}");
        }
        assert!(choi.min_eigenvalue() > -1e-9);
    }

    #[test]
    fn erasure_of_maximally_mixed() {
        let rho = crate::qcore::DensityOp::maximally_mixed(DimsProfile::single("A", 2));
        let out = Channel::erasure(0.75).unwrap().apply(&rho).unwrap();
        let diag: Vec<f64> = (0..3).map(|i| out.matrix()[(i, i)].re).collect();
        assert!((diag[0] - 0.375).abs() < 1e-12);
        assert!((diag[1] - 0.375).abs() < 1e-12);
        assert!((diag[2] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn damping_limits_and_excited_state() {
        let one = basis_density(2, 1, "A");
        let id_like = Channel::amplitude_damping(1.0).unwrap().apply(&one).unwrap();
        assert!((id_like.matrix()[(1, 1)].re - 1.0).abs() < 1e-12);

        let decayed = Channel::amplitude_damping(0.0).unwrap().apply(&one).unwrap();
        assert!((decayed.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);

        let partial = Channel::amplitude_damping(0.7).unwrap().apply(&one).unwrap();
        assert!((partial.matrix()[(0, 0)].re - 0.3).abs() < 1e-12);
        assert!((partial.matrix()[(1, 1)].re - 0.7).abs() < 1e-12);
    }

    #[test]
    fn damping_composition_multiplies_retention() {
        let a = Channel::amplitude_damping(0.8).unwrap();
        let b = Channel::amplitude_damping(0.9).unwrap();
        let composed = a.compose(&b).unwrap();
        let direct = Channel::amplitude_damping(0.8 * 0.9).unwrap();
        assert!(max_abs_diff(composed.choi().matrix(), direct.choi().matrix()) < 1e-12);
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let ch = Channel::identity(2).tensor(&Channel::identity(2));
        assert!(max_abs_diff(&ch.kraus()[0], &identity(4)) < 1e-15);
    }

    #[test]
    fn constant_channel_forgets_everything() {
        let omega = identity(2) * c(0.5, 0.0);
        let ch = Channel::constant(&omega, 2).unwrap();
        let psi = basis_density(2, 0, "A");
        let out = ch.apply(&psi).unwrap();
        assert!(max_abs_diff(out.matrix(), &omega) < 1e-12);
    }

    #[test]
    fn degradability_witness_for_erasure() {
        // Degrading map B → E in the complement's layout: the pass branch
        // relabels qubit levels into {1, 2}, failures and the erased input
        // land on level 0. Retention η' = (1-η)/η.
        for eta in [0.6, 0.75, 0.9] {
            let ch = Channel::erasure(eta).unwrap();
            let etap = (1.0 - eta) / eta;
            let sp = etap.sqrt();
            let sq = (1.0 - etap).sqrt();
            let mut pass = CMatrix::zeros(3, 3);
            pass[(1, 0)] = c(sp, 0.0);
            pass[(2, 1)] = c(sp, 0.0);
            let mut drop0 = CMatrix::zeros(3, 3);
            drop0[(0, 0)] = c(sq, 0.0);
            let mut drop1 = CMatrix::zeros(3, 3);
            drop1[(0, 1)] = c(sq, 0.0);
            let mut absorb = CMatrix::zeros(3, 3);
            absorb[(0, 2)] = c(1.0, 0.0);
            let degrade = Channel::from_kraus(vec![pass, drop0, drop1, absorb]).unwrap();
            let simulated = degrade.compose(&ch).unwrap();
            let diff = simulated.choi().matrix() - ch.complementary().choi().matrix();
            assert!(trace_norm(&diff).unwrap() < 1e-7);
        }
    }

    #[test]
    fn degradability_witness_for_damping() {
        for eta in [0.6, 0.75, 0.9] {
            let ch = Channel::amplitude_damping(eta).unwrap();
            let degrade = Channel::amplitude_damping((1.0 - eta) / eta).unwrap();
            let simulated = degrade.compose(&ch).unwrap();
            let diff = simulated.choi().matrix() - ch.complementary().choi().matrix();
            assert!(trace_norm(&diff).unwrap() < 1e-7);
        }
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let ch = Channel::amplitude_damping(0.7).unwrap();
        let s = ch.to_json_string();
        let back = Channel::from_json_str(&s).unwrap();
        assert_eq!(s, back.to_json_string());
        for (a, b) in ch.kraus().iter().zip(back.kraus().iter()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn malformed_wire_channels_are_rejected() {
        assert!(matches!(
            Channel::from_json_str("{not json"),
            Err(Error::Parse { .. })
        ));
        // Wrong entry count for the declared shape.
        let short = r#"{"d_in":2,"d_out":2,"kraus":[[[1.0,0.0]]]}"#;
        assert!(matches!(
            Channel::from_json_str(short),
            Err(Error::DimMismatch { .. })
        ));
        // Shape-consistent but not trace preserving.
        let lossy = r#"{"d_in":1,"d_out":1,"kraus":[[[0.5,0.0]]]}"#;
        assert!(matches!(
            Channel::from_json_str(lossy),
            Err(Error::KrausCompleteness { .. })
        ));
    }
}
