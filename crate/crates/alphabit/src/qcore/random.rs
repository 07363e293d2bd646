//! Seeded randomness: independent value-typed streams, Haar-distributed
//! unitaries, and uniform Clifford-group elements.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::{c, CMatrix, CVector};

/// Independent RNG stream `index` derived from a master seed. Streams never
/// alias each other, so parallel Monte-Carlo loops can draw stream `i` for
/// sample `i` and reduce in index order.
pub fn rng_stream(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Standard normal via Box–Muller.
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    c(standard_normal(rng), standard_normal(rng))
}

/// Haar-distributed unitary on dimension `d`: a Ginibre matrix is
/// QR-factorised and the Q columns are rephased by the diagonal of R, which
/// removes the sign/phase convention the plain QR would impose.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    haar_isometry(d, d, rng)
}

/// First `cols` columns of a Haar unitary on dimension `d`, as a d×cols
/// isometry.
pub fn haar_isometry<R: Rng + ?Sized>(d: usize, cols: usize, rng: &mut R) -> CMatrix {
    assert!(cols >= 1 && cols <= d);
    let g = CMatrix::from_fn(d, cols, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            c(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-random pure state vector of dimension `d`.
pub fn haar_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVector {
    let mut v = CVector::from_fn(d, |_, _| complex_gaussian(rng));
    let norm = v.norm();
    v /= c(norm, 0.0);
    v
}

/// Random full-rank density matrix G·G†/Tr(G·G†) from a Ginibre G.
pub fn random_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| complex_gaussian(rng));
    let m = &g * g.adjoint();
    let tr: f64 = m.diagonal().iter().map(|z| z.re).sum();
    m / c(tr, 0.0)
}

// ---------------------------------------------------------------------------
// Uniform Clifford sampling via random anticommuting Pauli pairs
// ---------------------------------------------------------------------------

/// Signed n-qubit Pauli string in the symplectic (x, z) representation, with
/// overall sign (-1)^neg and the (x=1, z=1) slot standing for Y.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Pauli {
    xs: Vec<bool>,
    zs: Vec<bool>,
    neg: bool,
}

impl Pauli {
    fn identity(n: usize) -> Self {
        Self {
            xs: vec![false; n],
            zs: vec![false; n],
            neg: false,
        }
    }

    /// Uniform signed Pauli supported on positions `[from, n)`.
    fn sample<R: Rng + ?Sized>(n: usize, from: usize, rng: &mut R) -> Self {
        let mut p = Self::identity(n);
        for k in from..n {
            p.xs[k] = rng.gen();
            p.zs[k] = rng.gen();
        }
        p.neg = rng.gen();
        p
    }

    fn is_identity_on(&self, from: usize) -> bool {
        (from..self.xs.len()).all(|k| !self.xs[k] && !self.zs[k])
    }

    fn anticommutes(&self, other: &Self) -> bool {
        let mut count = 0usize;
        for k in 0..self.xs.len() {
            let cross = (self.xs[k] && other.zs[k]) as usize + (self.zs[k] && other.xs[k]) as usize;
            count += cross;
        }
        count % 2 == 1
    }
}

#[derive(Clone, Copy, Debug)]
enum Gate {
    H(usize),
    S(usize),
    Cnot(usize, usize),
    Swap(usize, usize),
    X(usize),
    Y(usize),
    Z(usize),
}

impl Pauli {
    /// Conjugate the string by a gate: P ← G P G†. Sign updates follow the
    /// stabilizer-tableau rules.
    fn conjugate(&mut self, gate: Gate) {
        match gate {
            Gate::H(k) => {
                self.neg ^= self.xs[k] && self.zs[k];
                std::mem::swap(&mut self.xs[k], &mut self.zs[k]);
            }
            Gate::S(k) => {
                self.neg ^= self.xs[k] && self.zs[k];
                self.zs[k] ^= self.xs[k];
            }
            Gate::Cnot(ctl, tgt) => {
                self.neg ^= self.xs[ctl] && self.zs[tgt] && (self.xs[tgt] == self.zs[ctl]);
                self.xs[tgt] ^= self.xs[ctl];
                self.zs[ctl] ^= self.zs[tgt];
            }
            Gate::Swap(a, b) => {
                self.xs.swap(a, b);
                self.zs.swap(a, b);
            }
            Gate::X(k) => self.neg ^= self.zs[k],
            Gate::Y(k) => self.neg ^= self.xs[k] ^ self.zs[k],
            Gate::Z(k) => self.neg ^= self.xs[k],
        }
    }
}

/// Uniformly random element of the n-qubit Clifford group as a 2^n × 2^n
/// matrix (global phase fixed by the construction, which is irrelevant for
/// every moment this crate cares about).
///
/// For each qubit position a uniformly random anticommuting pair of signed
/// Pauli strings is drawn and swept to (X_k, Z_k) with H/S/CNOT/SWAP and
/// sign-fixing single-qubit gates; the sampled element is the adjoint of the
/// sweep circuit. Intended for n ≤ 6.
pub fn random_clifford<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> CMatrix {
    assert!(n_qubits >= 1, "need at least one qubit");
    let mut gates: Vec<Gate> = Vec::new();
    for llim in 0..n_qubits {
        let a = loop {
            let p = Pauli::sample(n_qubits, llim, rng);
            if !p.is_identity_on(llim) {
                break p;
            }
        };
        let b = loop {
            let q = Pauli::sample(n_qubits, llim, rng);
            if a.anticommutes(&q) {
                break q;
            }
        };
        sweep(llim, a, b, &mut gates);
    }
    let dim = 1usize << n_qubits;
    let mut circuit = CMatrix::identity(dim, dim);
    for &g in &gates {
        apply_gate_left(&mut circuit, g, n_qubits);
    }
    circuit.adjoint()
}

type GateSink<'a> = &'a mut dyn FnMut(Gate, &mut Pauli, &mut Pauli, &mut Vec<Gate>);

/// Reduce the anticommuting pair (a, b), supported on positions ≥ `llim`, to
/// exactly (+X_llim, +Z_llim), recording the gates applied.
fn sweep(llim: usize, mut a: Pauli, mut b: Pauli, gates: &mut Vec<Gate>) {
    let n = a.xs.len();
    let mut apply = |g: Gate, a: &mut Pauli, b: &mut Pauli, gates: &mut Vec<Gate>| {
        a.conjugate(g);
        b.conjugate(g);
        gates.push(g);
    };

    // Turn `a` into a pure-X string, collapse its support to one qubit with a
    // CNOT chain, and move it to `llim`.
    let reduce_to_x = |p_is_a: bool,
                       a: &mut Pauli,
                       b: &mut Pauli,
                       gates: &mut Vec<Gate>,
                       apply: GateSink| {
        for k in llim..n {
            let (z, x) = if p_is_a {
                (a.zs[k], a.xs[k])
            } else {
                (b.zs[k], b.xs[k])
            };
            if z {
                if x {
                    apply(Gate::S(k), a, b, gates);
                } else {
                    apply(Gate::H(k), a, b, gates);
                }
            }
        }
        let support: Vec<usize> = (llim..n)
            .filter(|&k| if p_is_a { a.xs[k] } else { b.xs[k] })
            .collect();
        let head = support[0];
        for &k in &support[1..] {
            apply(Gate::Cnot(head, k), a, b, gates);
        }
        head
    };

    let head = reduce_to_x(true, &mut a, &mut b, gates, &mut apply);
    if head != llim {
        apply(Gate::Swap(llim, head), &mut a, &mut b, gates);
    }

    // `b` anticommutes with X_llim, so it must become Z_llim. Conjugating by
    // H swaps the roles, letting the same X-reduction run on `b`; its support
    // head is guaranteed to be `llim`.
    let b_is_plain_z =
        b.zs[llim] && !b.xs[llim] && (llim + 1..n).all(|k| !b.xs[k] && !b.zs[k]);
    if !b_is_plain_z {
        apply(Gate::H(llim), &mut a, &mut b, gates);
        let head_b = reduce_to_x(false, &mut a, &mut b, gates, &mut apply);
        debug_assert_eq!(head_b, llim);
        apply(Gate::H(llim), &mut a, &mut b, gates);
    }

    match (a.neg, b.neg) {
        (false, false) => {}
        (false, true) => apply(Gate::X(llim), &mut a, &mut b, gates),
        (true, true) => apply(Gate::Y(llim), &mut a, &mut b, gates),
        (true, false) => apply(Gate::Z(llim), &mut a, &mut b, gates),
    }

    debug_assert!(a.xs[llim] && !a.zs[llim] && !a.neg && a.is_identity_on(llim + 1));
    debug_assert!(b.zs[llim] && !b.xs[llim] && !b.neg && b.is_identity_on(llim + 1));
}

/// In-place left multiplication m ← G·m where G is the gate acting on the
/// given qubit positions (qubit 0 is the most significant index bit).
fn apply_gate_left(m: &mut CMatrix, gate: Gate, n_qubits: usize) {
    let dim = m.nrows();
    let bit = |q: usize| 1usize << (n_qubits - 1 - q);
    match gate {
        Gate::H(k) => {
            let bk = bit(k);
            let w = 1.0 / 2.0f64.sqrt();
            for i in 0..dim {
                if i & bk != 0 {
                    continue;
                }
                let j = i | bk;
                for col in 0..dim {
                    let lo = m[(i, col)];
                    let hi = m[(j, col)];
                    m[(i, col)] = (lo + hi) * c(w, 0.0);
                    m[(j, col)] = (lo - hi) * c(w, 0.0);
                }
            }
        }
        Gate::S(k) => {
            let bk = bit(k);
            for i in 0..dim {
                if i & bk != 0 {
                    for col in 0..dim {
                        m[(i, col)] *= c(0.0, 1.0);
                    }
                }
            }
        }
        Gate::X(k) => {
            let bk = bit(k);
            for i in 0..dim {
                if i & bk == 0 {
                    let j = i | bk;
                    for col in 0..dim {
                        let t = m[(i, col)];
                        m[(i, col)] = m[(j, col)];
                        m[(j, col)] = t;
                    }
                }
            }
        }
        Gate::Y(k) => {
            let bk = bit(k);
            for i in 0..dim {
                if i & bk == 0 {
                    let j = i | bk;
                    for col in 0..dim {
                        let lo = m[(i, col)];
                        let hi = m[(j, col)];
                        m[(i, col)] = hi * c(0.0, -1.0);
                        m[(j, col)] = lo * c(0.0, 1.0);
                    }
                }
            }
        }
        Gate::Z(k) => {
            let bk = bit(k);
            for i in 0..dim {
                if i & bk != 0 {
                    for col in 0..dim {
                        m[(i, col)] = -m[(i, col)];
                    }
                }
            }
        }
        Gate::Cnot(ctl, tgt) => {
            let bc = bit(ctl);
            let bt = bit(tgt);
            for i in 0..dim {
                if i & bc != 0 && i & bt == 0 {
                    let j = i | bt;
                    for col in 0..dim {
                        let t = m[(i, col)];
                        m[(i, col)] = m[(j, col)];
                        m[(j, col)] = t;
                    }
                }
            }
        }
        Gate::Swap(a, b) => {
            let ba = bit(a);
            let bb = bit(b);
            for i in 0..dim {
                if i & ba != 0 && i & bb == 0 {
                    let j = (i & !ba) | bb;
                    for col in 0..dim {
                        let t = m[(i, col)];
                        m[(i, col)] = m[(j, col)];
                        m[(j, col)] = t;
                    }
                }
            }
        }
    }
}
