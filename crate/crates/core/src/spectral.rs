//! One-body reduced density matrix, natural orbitals and the Borland–Dennis
//! representability conditions.

use crate::exterior::{OrbitalBasis, Trivector};
use crate::linalg::{hermitian_eig, to_dmat, to_mat6};
use crate::{Mat6, C64};

/// The 1RDM `Γ[a][b] = Σ_{j<k} ψ(a,j,k)·conj(ψ(b,j,k))`; trace 3 for unit `ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneRDM {
    pub matrix: Mat6,
}

/// Natural occupation numbers (descending) with their natural orbitals.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalSpectrum {
    pub lambdas: [f64; 6],
    pub orbitals: OrbitalBasis,
}

pub fn one_rdm(t: &Trivector) -> OneRDM {
    let mut g = Mat6::zeros();
    for a in 0..6 {
        for b in a..6 {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..6 {
                for k in j + 1..6 {
                    if j == a || k == a || j == b || k == b {
                        continue;
                    }
                    acc += t.get(a, j, k) * t.get(b, j, k).conj();
                }
            }
            g[(a, b)] = acc;
            g[(b, a)] = acc.conj();
        }
    }
    OneRDM { matrix: g }
}

pub fn natural_spectrum(t: &Trivector) -> NaturalSpectrum {
    let rdm = one_rdm(t);
    let eig = hermitian_eig(&to_dmat(&rdm.matrix)).expect("the 1RDM is Hermitian by construction");
    let mut lambdas = [0.0; 6];
    lambdas.copy_from_slice(&eig.values);
    let orbitals = OrbitalBasis::with_labels(to_mat6(&eig.vectors), ["n1", "n2", "n3", "n4", "n5", "n6"])
        .expect("Jacobi eigenvectors are orthonormal");
    NaturalSpectrum { lambdas, orbitals }
}

/// Outcome of [`check_representability`].
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentabilityReport {
    /// The input, sorted descending.
    pub lambdas: [f64; 6],
    /// `λ1+λ6−1`, `λ2+λ5−1`, `λ3+λ4−1`.
    pub equality_margins: [f64; 3],
    /// `λ5+λ6−λ4`; nonnegative when the inequality holds.
    pub inequality_margin: f64,
    pub equalities_ok: bool,
    pub inequality_ok: bool,
    /// `λ4 = λ5+λ6` within tolerance.
    pub saturated: bool,
}

impl RepresentabilityReport {
    pub fn ok(&self) -> bool {
        self.equalities_ok && self.inequality_ok
    }
}

/// Checks `λ1+λ6 = λ2+λ5 = λ3+λ4 = 1` and `λ4 ≤ λ5+λ6`. Unsorted input is sorted
/// descending first.
pub fn check_representability(lambdas: &[f64; 6], tol: f64) -> RepresentabilityReport {
    let mut l = *lambdas;
    l.sort_by(|a, b| b.total_cmp(a));
    let equality_margins = [l[0] + l[5] - 1.0, l[1] + l[4] - 1.0, l[2] + l[3] - 1.0];
    let inequality_margin = l[4] + l[5] - l[3];
    RepresentabilityReport {
        lambdas: l,
        equality_margins,
        inequality_margin,
        equalities_ok: equality_margins.iter().all(|m| m.abs() <= tol),
        inequality_ok: inequality_margin >= -tol,
        saturated: inequality_margin.abs() <= tol,
    }
}

/// Helper for the strongly orthogonal orbital pairing `(1,6), (2,5), (3,4)`.
pub const BD_PAIRS: [(usize, usize); 3] = [(0, 5), (1, 4), (2, 3)];
