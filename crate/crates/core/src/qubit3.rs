//! Three qubits inside three fermions in six orbitals.
//!
//! `|abc⟩ ↦ e_{1+a} ∧ e_{3+b} ∧ e_{5+c}` (1-based orbitals), an isometry onto the
//! single-occupancy states of the pairing `(e1,e2)`, `(e3,e4)`, `(e5,e6)`. Local
//! unitaries act as block-diagonal elements of U(6).

use crate::canonical::PairedBasis;
use crate::error::{Error, Result};
use crate::exterior::{permutation_sign, Trivector, TRIPLES};
use crate::linalg::hermitian_eig;
use crate::max_overlap::{approximant, multistart_with, Certificate, FrameProblem};
use crate::random::{haar_u2, Rng};
use crate::spectral::one_rdm;
use crate::{CMat, Mat6, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const OFF_PATTERN_TOL: f64 = 1e-9;

/// Amplitudes of `|abc⟩` at index `4a + 2b + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeQubitState {
    pub amps: [C64; 8],
}

impl ThreeQubitState {
    pub fn new(amps: [C64; 8]) -> Self {
        ThreeQubitState { amps }
    }

    pub fn basis(bits: [u8; 3]) -> Self {
        let mut amps = [ZERO; 8];
        amps[index(bits)] = C64::new(1.0, 0.0);
        ThreeQubitState { amps }
    }

    pub fn get(&self, bits: [u8; 3]) -> C64 {
        self.amps[index(bits)]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            *self
        } else {
            ThreeQubitState { amps: self.amps.map(|a| a / n) }
        }
    }

    /// `⟨self, other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &ThreeQubitState) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn apply(&self, u: &LocalUnitary) -> ThreeQubitState {
        let mut out = [ZERO; 8];
        for (n, o) in out.iter_mut().enumerate() {
            let a = bits_of(n);
            for (m, &x) in self.amps.iter().enumerate() {
                let b = bits_of(m);
                let coeff = (0..3).fold(C64::new(1.0, 0.0), |acc, k| acc * u.factors[k][a[k] as usize][b[k] as usize]);
                *o += coeff * x;
            }
        }
        ThreeQubitState { amps: out }
    }
}

fn index(bits: [u8; 3]) -> usize {
    4 * bits[0] as usize + 2 * bits[1] as usize + bits[2] as usize
}

fn bits_of(n: usize) -> [u8; 3] {
    [(n >> 2 & 1) as u8, (n >> 1 & 1) as u8, (n & 1) as u8]
}

/// One 2×2 unitary per qubit, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalUnitary {
    pub factors: [[[C64; 2]; 2]; 3],
}

impl LocalUnitary {
    pub fn new(factors: [[[C64; 2]; 2]; 3]) -> Result<Self> {
        for f in &factors {
            let m = CMat::from_fn(2, 2, |i, j| f[i][j]);
            let defect = crate::linalg::unitarity_defect(&m);
            if defect > 1e-12 {
                return Err(Error::NotUnitary(defect));
            }
        }
        Ok(LocalUnitary { factors })
    }

    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        LocalUnitary { factors: [[[one, ZERO], [ZERO, one]]; 3] }
    }

    pub fn random(rng: &mut Rng) -> Self {
        LocalUnitary { factors: [haar_u2(rng), haar_u2(rng), haar_u2(rng)] }
    }

    /// The block-diagonal element of U(6) acting on the embedded states.
    pub fn to_mat6(&self) -> Mat6 {
        let mut m = Mat6::zeros();
        for (k, f) in self.factors.iter().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    m[(2 * k + i, 2 * k + j)] = f[i][j];
                }
            }
        }
        m
    }

    fn from_mat6(m: &Mat6) -> Self {
        let mut factors = [[[ZERO; 2]; 2]; 3];
        for (k, f) in factors.iter_mut().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    f[i][j] = m[(2 * k + i, 2 * k + j)];
                }
            }
        }
        LocalUnitary { factors }
    }
}

pub fn embed(q: &ThreeQubitState) -> Trivector {
    let mut t = Trivector::zero();
    for (n, a) in q.amps.iter().enumerate() {
        let b = bits_of(n);
        t = t + Trivector::basis(b[0] as usize, 2 + b[1] as usize, 4 + b[2] as usize) * *a;
    }
    t
}

/// Embedding into the 3-qubit subspace of `pb`: `|abc⟩` goes to the wedge of
/// the chosen orbital of each pair, in pair order.
pub fn embed_with(q: &ThreeQubitState, pb: &PairedBasis) -> Trivector {
    let o = pb.qubit_orbitals();
    embed(q).transform(&Mat6::from_fn(|i, j| o[j][i]))
}

/// Inverse of [`embed_with`]; fails when `t` has weight off the eight
/// single-occupancy configurations of `pb`.
pub fn unembed(t: &Trivector, pb: &PairedBasis) -> Result<ThreeQubitState> {
    let c = pb.basis.coefficients(t);
    let mut amps = [ZERO; 8];
    let mut on_pattern = Vec::with_capacity(8);
    for (n, amp) in amps.iter_mut().enumerate() {
        let b = bits_of(n);
        let mut picked: Vec<usize> = (0..3).map(|q| if b[q] == 0 { pb.pairing[q].0 } else { pb.pairing[q].1 }).collect();
        let sign = permutation_sign(&mut picked);
        *amp = c.get(picked[0], picked[1], picked[2]) * f64::from(sign);
        on_pattern.push([picked[0], picked[1], picked[2]]);
    }
    let off: f64 =
        TRIPLES.iter().zip(c.amps()).filter(|(tr, _)| !on_pattern.contains(tr)).map(|(_, a)| a.norm_sqr()).sum();
    if off.sqrt() > OFF_PATTERN_TOL {
        return Err(Error::Precondition { what: "state is not single-occupancy for this pairing", residual: off.sqrt() });
    }
    Ok(ThreeQubitState { amps })
}

/// Cayley's hyperdeterminant of the 2×2×2 array `a_{ijk}`:
///
/// ```text
///   a000²a111² + a001²a110² + a010²a101² + a100²a011²
/// − 2(a000a111a011a100 + a000a111a101a010 + a000a111a110a001
///   + a011a100a101a010 + a011a100a110a001 + a101a010a110a001)
/// + 4(a000a110a101a011 + a111a001a010a100)
/// ```
pub fn cayley_hyperdet(q: &ThreeQubitState) -> C64 {
    let a = |s: &str| {
        let b = s.as_bytes();
        q.get([b[0] - b'0', b[1] - b'0', b[2] - b'0'])
    };
    let (a000, a001, a010, a011) = (a("000"), a("001"), a("010"), a("011"));
    let (a100, a101, a110, a111) = (a("100"), a("101"), a("110"), a("111"));
    let sq = |x: C64| x * x;
    let squares = sq(a000 * a111) + sq(a001 * a110) + sq(a010 * a101) + sq(a100 * a011);
    let pairs = a000 * a111 * a011 * a100
        + a000 * a111 * a101 * a010
        + a000 * a111 * a110 * a001
        + a011 * a100 * a101 * a010
        + a011 * a100 * a110 * a001
        + a101 * a010 * a110 * a001;
    let quads = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100;
    squares - pairs * 2.0 + quads * 4.0
}

/// `|Det|²` of the single-occupancy expansion of `t`; a U(6) invariant.
pub fn hyperdet_mod2(t: &Trivector) -> f64 {
    let bd = crate::canonical::bd_expansion(t);
    match unembed(t, &bd.paired) {
        Ok(q) => cayley_hyperdet(&q).norm_sqr(),
        // bd_expansion always reconstructs; unreachable short of a bug.
        Err(_) => f64::NAN,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Type4aResult {
    /// Unit norm, phased so that `⟨approximant, q⟩ = overlap`.
    pub approximant: ThreeQubitState,
    pub overlap: f64,
    pub certificate: Certificate,
    /// Local frames of the optimum: column 0 of each factor is that qubit's
    /// `f`, column 1 its `g`.
    pub frames: LocalUnitary,
    pub restarts_used: usize,
}

/// Frame columns are `(f1, g1, f2, g2, f3, g3)`; Type-4a states are spanned by
/// `f1f2f3`, `g1f2f3`, `f1g2f3`, `f1f2g3`.
fn type4a_kept(cfg: &[usize; 3]) -> bool {
    cfg.iter().filter(|&&i| i % 2 == 1).count() <= 1
}

/// Per-qubit eigenbases of the one-qubit density matrices, most occupied first.
fn informed_frame(t: &Trivector) -> Mat6 {
    let g = one_rdm(t).matrix;
    let mut m = Mat6::zeros();
    for k in 0..3 {
        let block = CMat::from_fn(2, 2, |i, j| g[(2 * k + i, 2 * k + j)]);
        let eig = hermitian_eig(&block).expect("restriction of a Hermitian matrix");
        for i in 0..2 {
            for j in 0..2 {
                m[(2 * k + i, 2 * k + j)] = eig.vectors[(i, j)];
            }
        }
    }
    m
}

/// Best approximation by a Type-4a state: `A f1f2f3 + B1 g1f2f3 + B2 f1g2f3 +
/// B3 f1f2g3` over all local frames `(f_k, g_k)`.
pub fn max_overlap_type4a(q: &ThreeQubitState, restarts: usize, seed: u64) -> Type4aResult {
    let t = embed(q);
    let problem = FrameProblem::new(&t, type4a_kept, vec![(0, 1), (2, 3), (4, 5)]);
    let draw = |rng: &mut Rng| LocalUnitary::random(rng).to_mat6();
    let (w, _, used) =
        multistart_with(&t, &informed_frame(&t), restarts, seed, draw, |w0| problem.ascend(w0));
    let (chi, overlap) = approximant(&problem, &w);

    let c = t.coefficients_in(&w);
    let cc = c.get(1, 3, 5);
    let rest = t - chi * overlap - Trivector::basis(1, 3, 5).transform(&w) * cc;
    let mut certificate = Certificate::default();
    for (name, cfg) in [("D1", [0, 3, 5]), ("D2", [1, 2, 5]), ("D3", [1, 3, 4])] {
        certificate.push(name, c.get(cfg[0], cfg[1], cfg[2]).norm());
    }
    certificate.push("decomposition", rest.norm());
    certificate.push("c_weight", (cc.norm_sqr() - (t.norm_sqr() - overlap * overlap)).abs());
    let approximant = ThreeQubitState::new(std::array::from_fn(|n| {
        let b = bits_of(n);
        chi.get(b[0] as usize, 2 + b[1] as usize, 4 + b[2] as usize)
    }));
    certificate.push("approximant_hyperdet", cayley_hyperdet(&approximant).norm());
    Type4aResult { approximant, overlap, certificate, frames: LocalUnitary::from_mat6(&w), restarts_used: used }
}
