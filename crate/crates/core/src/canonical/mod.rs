//! Canonical CI expansions.
//!
//! Every routine here builds an orthonormal frame adapted to the state and then
//! reads the coefficients off by projection, so the returned expansion always
//! reconstructs whatever part of the state its diagram covers.

mod bd;
mod geminal;
mod lone;
mod singles;

use nalgebra::DVector;

pub use bd::{bd_expansion, bd_expansion_from, qubit_subspace, BDExpansion, PairedBasis};
pub use geminal::{geminal_canonical, three_in_five, GeminalForm, ThreeInFive};
pub use lone::lone_orbital;
pub use singles::{cid_canonical, cis_canonical, svd_reduce_singles, SinglesPhase};

pub(crate) use geminal::to_vec6;
pub(crate) use lone::split_at;
pub(crate) use singles::{reduce_kernel, slater5_rows, svd_reduce_singles_with};

use crate::error::{Error, Result};
use crate::exterior::{Bivector, Trivector};
use crate::linalg::complete_basis6;
use crate::{CMat, Mat6, Vec6, C64};

/// Multiplies column `j` of `w` by `e^{iθ_j}`. The coefficient of a
/// configuration `K` then picks up `e^{-iΣ_{j∈K} θ_j}`.
pub(crate) fn rephase(w: &Mat6, theta: [f64; 6]) -> Mat6 {
    let mut out = *w;
    for (j, th) in theta.iter().enumerate() {
        let c = out.column(j) * C64::from_polar(1.0, *th);
        out.set_column(j, &c);
    }
    out
}

/// Replaces the columns `cols` of `w` by `w[:, cols] · x`.
pub(crate) fn rotate_frame(w: &mut Mat6, cols: &[usize], x: &CMat) {
    let old: Vec<Vec6> = cols.iter().map(|&c| w.column(c).into()).collect();
    for (b, &dst) in cols.iter().enumerate() {
        let mut v = Vec6::zeros();
        for (a, o) in old.iter().enumerate() {
            v += o * x[(a, b)];
        }
        w.set_column(dst, &v);
    }
}

/// Orthonormal frame whose first `r.len()` columns span the given vectors.
pub(crate) fn frame_spanning(r: &[Vec6]) -> Result<Mat6> {
    let w = complete_basis6(r);
    for v in r {
        let n = v.norm();
        let mut p = Vec6::zeros();
        for j in 0..r.len() {
            let c: Vec6 = w.column(j).into();
            p += c * c.dotc(v);
        }
        if n == 0.0 || (v - p).norm() > 1e-9 * n {
            return Err(Error::LinearlyDependent);
        }
    }
    Ok(w)
}

/// Coordinates of a bivector of ℂ⁶ on the orthonormal vectors `frame`:
/// entry `(a, b)` is `⟨m_a ∧ m_b, b⟩`.
pub(crate) fn bivector_in_frame(b: &Bivector, frame: &[Vec6]) -> Bivector {
    let s = b.skew_matrix();
    let m = CMat::from_fn(6, frame.len(), |i, a| frame[a][i]);
    let g = m.adjoint() * s * m.map(|z| z.conj());
    Bivector::from_skew_matrix(&g)
}

/// Inverse of [`bivector_in_frame`].
#[cfg(test)]
pub(crate) fn bivector_from_frame(b: &Bivector, frame: &[Vec6]) -> Bivector {
    let m = CMat::from_fn(6, frame.len(), |i, a| frame[a][i]);
    let g = &m * b.skew_matrix() * m.transpose();
    Bivector::from_skew_matrix(&g)
}

pub(crate) fn embed_vector(v: &DVector<C64>, frame: &[Vec6]) -> Vec6 {
    let mut out = Vec6::zeros();
    for (a, f) in frame.iter().enumerate() {
        out += f * v[a];
    }
    out
}

/// Weight of `t` outside the listed configurations of basis `w`, relative to `‖t‖`.
pub(crate) fn outside_weight(t: &Trivector, w: &Mat6, keep: impl Fn(&[usize; 3]) -> bool) -> f64 {
    let c = t.coefficients_in(w);
    let out: f64 = crate::exterior::TRIPLES
        .iter()
        .zip(c.amps())
        .filter(|(tr, _)| !keep(tr))
        .map(|(_, a)| a.norm_sqr())
        .sum();
    let n = t.norm();
    if n == 0.0 {
        0.0
    } else {
        out.sqrt() / n
    }
}

/// Number of entries of `cfg` among the first three basis indices.
pub(crate) fn reference_count(cfg: &[usize; 3]) -> usize {
    cfg.iter().filter(|&&i| i < 3).count()
}
