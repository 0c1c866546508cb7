use nalgebra::DVector;

use crate::exterior::{Bivector, OrbitalBasis, Trivector};
use crate::linalg::{complete_basis6, hermitian_eig};
use crate::spectral::natural_spectrum;
use crate::error::{Error, Result};
use crate::{Vec6, C64};

/// `b = Σ coeffs[i] · pairs[i].0 ∧ pairs[i].1` with jointly orthonormal vectors.
#[derive(Debug, Clone)]
pub struct GeminalForm {
    pub coeffs: Vec<f64>,
    pub pairs: Vec<(DVector<C64>, DVector<C64>)>,
}

impl GeminalForm {
    pub fn reconstruct(&self, dim: usize) -> Bivector {
        let mut b = Bivector::zero(dim);
        for (a, (u, v)) in self.coeffs.iter().zip(&self.pairs) {
            b = b.add(&Bivector::from_slices(u.as_slice(), v.as_slice()).scale(C64::new(*a, 0.0))).unwrap();
        }
        b
    }
}

/// Canonical form of a bivector of ℂᵈ: coefficients descending and positive.
///
/// Each step takes a top eigenvector `x` of `G·G†` (`G` the skew coefficient
/// matrix of what is left) and peels off `A x∧y` with `A y = interior(x, ·)`.
/// Eigenvectors of `G·G†` come in pairs spanning `{uᵢ, vᵢ}`, and any unit `x` in a
/// pair (or in a degenerate union of pairs) yields a valid `(uᵢ, vᵢ)`.
pub fn geminal_canonical(b: &Bivector) -> GeminalForm {
    let d = b.dim();
    let scale = b.norm();
    let mut rem = b.clone();
    let mut coeffs = Vec::new();
    let mut pairs = Vec::new();
    for _ in 0..d / 2 {
        let g = rem.skew_matrix();
        let h = &g * g.adjoint();
        let eig = hermitian_eig(&h).expect("G G† is Hermitian");
        if eig.values[0].max(0.0).sqrt() <= 1e-13 * scale || scale == 0.0 {
            break;
        }
        let x: DVector<C64> = eig.vectors.column(0).into_owned();
        let y = rem.interior(x.as_slice());
        let a = y.norm();
        let y = y / C64::new(a, 0.0);
        rem = rem.sub(&Bivector::from_slices(x.as_slice(), y.as_slice()).scale(C64::new(a, 0.0))).unwrap();
        coeffs.push(a);
        pairs.push((x, y));
    }
    GeminalForm { coeffs, pairs }
}

/// `t = A1 w∧u1∧v1 + A2 w∧u2∧v2` for a trivector of rank at most 5.
#[derive(Debug, Clone)]
pub struct ThreeInFive {
    /// Columns `w, u1, v1, u2, v2, x` where `x` spans the unused direction.
    pub basis: OrbitalBasis,
    pub coeffs: [f64; 2],
    pub residual: f64,
}

pub(crate) fn to_vec6(v: &DVector<C64>) -> Vec6 {
    Vec6::from_column_slice(v.as_slice())
}

pub fn three_in_five(t: &Trivector) -> Result<ThreeInFive> {
    let nat = natural_spectrum(t);
    let scale = t.norm_sqr();
    if nat.lambdas[5] > 1e-10 * scale.max(1e-300) {
        return Err(Error::FullRank);
    }
    let w = nat.orbitals.column(0);
    let gem = geminal_canonical(&t.interior(&w));
    let mut vectors = vec![w];
    let mut coeffs = [0.0; 2];
    for (k, (a, (u, v))) in gem.coeffs.iter().zip(&gem.pairs).take(2).enumerate() {
        coeffs[k] = *a;
        vectors.push(to_vec6(u));
        vectors.push(to_vec6(v));
    }
    let m = complete_basis6(&vectors);
    let basis = OrbitalBasis::with_labels(m, ["w", "u1", "v1", "u2", "v2", "x"]).expect("completed basis");
    let rebuilt = (Trivector::from_orbitals(&basis.column(0), &basis.column(1), &basis.column(2)) * coeffs[0])
        + (Trivector::from_orbitals(&basis.column(0), &basis.column(3), &basis.column(4)) * coeffs[1]);
    let residual = (*t - rebuilt).norm();
    Ok(ThreeInFive { basis, coeffs, residual })
}
