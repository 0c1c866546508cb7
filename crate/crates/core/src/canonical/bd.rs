use super::{geminal_canonical, reduce_kernel, rotate_frame, three_in_five, to_vec6};
use crate::exterior::{CIExpansion, OrbitalBasis, Shape, Trivector};
use crate::linalg::{complete_basis6, hermitian_eig, svd};
use crate::spectral::{natural_spectrum, one_rdm, BD_PAIRS};
use crate::{CMat, Mat6, Vec6, C64};

/// Relative size below which the second geminal coefficient counts as zero.
const GEMINAL_RANK_TOL: f64 = 1e-8;

const BD_LABELS: [&str; 6] = ["h1", "h2", "h3", "h4", "h5", "h6"];

/// An orthonormal basis `h1..h6` split into the pairs `(h1,h6)`, `(h2,h5)`,
/// `(h3,h4)`; the three pair spans are the one-qubit spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedBasis {
    pub basis: OrbitalBasis,
    pub pairing: [(usize, usize); 3],
}

impl PairedBasis {
    pub fn new(basis: OrbitalBasis) -> Self {
        PairedBasis { basis, pairing: BD_PAIRS }
    }

    /// The pairing used by the qubit embedding: `(e1,e2)`, `(e3,e4)`, `(e5,e6)`.
    pub fn standard_embedding() -> Self {
        let mut m = Mat6::zeros();
        for (col, row) in [0, 2, 4, 5, 3, 1].into_iter().enumerate() {
            m[(row, col)] = C64::new(1.0, 0.0);
        }
        PairedBasis::new(OrbitalBasis::with_labels(m, BD_LABELS).expect("permutation matrix"))
    }

    /// Orbitals in qubit order: `|0⟩, |1⟩` of qubit 1, then qubit 2, then qubit 3.
    pub fn qubit_orbitals(&self) -> [Vec6; 6] {
        let b = &self.basis;
        let p = self.pairing;
        [b.column(p[0].0), b.column(p[0].1), b.column(p[1].0), b.column(p[1].1), b.column(p[2].0), b.column(p[2].1)]
    }

    /// Configuration (sorted basis indices) of the qubit string `bits`.
    pub fn config(&self, bits: [u8; 3]) -> [usize; 3] {
        let mut c = [0; 3];
        for q in 0..3 {
            let (a, b) = self.pairing[q];
            c[q] = if bits[q] == 0 { a } else { b };
        }
        c.sort_unstable();
        c
    }

    /// Orthogonal projector onto the span of pair `k`.
    pub fn pair_projector(&self, k: usize) -> Mat6 {
        let (a, b) = self.pairing[k];
        let (x, y) = (self.basis.column(a), self.basis.column(b));
        x * x.adjoint() + y * y.adjoint()
    }
}

/// Single-occupancy (Borland–Dennis) expansion on natural orbitals.
#[derive(Debug, Clone, PartialEq)]
pub struct BDExpansion {
    /// Shape `BD8`; row labels are the qubit strings `000..111`.
    pub expansion: CIExpansion,
    pub paired: PairedBasis,
    /// Occupations of `h1..h6`.
    pub occupations: [f64; 6],
}

/// Eight-term natural expansion; see [`bd_expansion_from`].
pub fn bd_expansion(t: &Trivector) -> BDExpansion {
    bd_expansion_from(t, 0)
}

/// The pairing that [`bd_expansion`] finds.
pub fn qubit_subspace(t: &Trivector) -> PairedBasis {
    bd_expansion(t).paired
}

/// Builds a 3-qubit subspace containing `t` starting from natural orbital
/// `start` (0 = largest occupation), then diagonalizes the 1RDM inside each pair.
pub fn bd_expansion_from(t: &Trivector, start: usize) -> BDExpansion {
    let nat = natural_spectrum(t);
    let h = nat.orbitals.column(start.min(5));
    let gem = geminal_canonical(&t.interior(&h));
    let scale = t.norm().max(f64::MIN_POSITIVE);
    let a = |i: usize| gem.coeffs.get(i).copied().unwrap_or(0.0);
    let pv = |i: usize| (to_vec6(&gem.pairs[i].0), to_vec6(&gem.pairs[i].1));

    let (w, pairs) = if a(1) > GEMINAL_RANK_TOL * scale {
        // h∧γ with γ = A1 f'1∧f'2 + A2 g'1∧g'2; the rest is k ∧ (f'–g' block),
        // reduced by an SVD that keeps both f'1∧f'2 and g'1∧g'2 in place.
        let ((f1, f2), (g1, g2)) = (pv(0), pv(1));
        let k: Vec6 = complete_basis6(&[h, f1, f2, g1, g2]).column(5).into();
        let mut w = complete_basis6(&[h, k, f1, f2, g1, g2]);
        let c = t.coefficients_in(&w);
        let m = CMat::from_fn(2, 2, |i, j| c.get(1, 2 + i, 4 + j));
        let s = svd(&m);
        rotate_frame(&mut w, &[2, 3], &s.u);
        rotate_frame(&mut w, &[4, 5], &s.v.map(|z| z.conj()));
        (w, [(0, 1), (2, 5), (3, 4)])
    } else if a(0) > GEMINAL_RANK_TOL * scale {
        // h∧f'1∧f'2 plus a part with g'1g'2g'3 as reference: SVD its singles.
        let (f1, f2) = pv(0);
        let mut w = complete_basis6(&[h, f1, f2]);
        reduce_kernel(t, &mut w, [3, 4, 5], &[1, 2]);
        (w, [(0, 5), (1, 3), (2, 4)])
    } else {
        match three_in_five(t) {
            Ok(tf) => (*tf.basis.matrix(), [(0, 5), (1, 3), (2, 4)]),
            Err(_) => (*nat.orbitals.matrix(), BD_PAIRS),
        }
    };
    diagonalize_pairs(t, &w, pairs)
}

/// Inside a 3-qubit subspace the 1RDM is block diagonal, so rotating
/// within each pair keeps single occupancy and yields natural orbitals.
fn diagonalize_pairs(t: &Trivector, w: &Mat6, pairs: [(usize, usize); 3]) -> BDExpansion {
    let g = one_rdm(t).matrix;
    let mut blocks: Vec<(f64, f64, Vec6, Vec6)> = pairs
        .iter()
        .map(|&(a, b)| {
            let q = [Vec6::from(w.column(a)), Vec6::from(w.column(b))];
            let block = CMat::from_fn(2, 2, |i, j| (q[i].adjoint() * g * q[j])[(0, 0)]);
            let eig = hermitian_eig(&block).expect("restriction of a Hermitian matrix");
            let v = |k: usize| q[0] * eig.vectors[(0, k)] + q[1] * eig.vectors[(1, k)];
            (eig.values[0], eig.values[1], v(0), v(1))
        })
        .collect();
    blocks.sort_by(|x, y| y.0.total_cmp(&x.0));
    let cols = [blocks[0].2, blocks[1].2, blocks[2].2, blocks[2].3, blocks[1].3, blocks[0].3];
    let occupations = [blocks[0].0, blocks[1].0, blocks[2].0, blocks[2].1, blocks[1].1, blocks[0].1];
    let basis = OrbitalBasis::with_labels(complete_basis6(&cols), BD_LABELS).expect("orthonormal pairs");
    let paired = PairedBasis::new(basis.clone());
    let labels: Vec<String> = (0..8).map(|n| format!("{}{}{}", n >> 2 & 1, n >> 1 & 1, n & 1)).collect();
    let rows: Vec<(&str, [usize; 3])> = (0..8)
        .map(|n| (labels[n].as_str(), paired.config([(n >> 2 & 1) as u8, (n >> 1 & 1) as u8, (n & 1) as u8])))
        .collect();
    BDExpansion { expansion: CIExpansion::project(t, basis, &rows, Shape::BD8), paired, occupations }
}
