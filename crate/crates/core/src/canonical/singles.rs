use std::f64::consts::PI;

use super::{frame_spanning, outside_weight, reference_count, rephase, rotate_frame, three_in_five};
use crate::error::{Error, Result};
use crate::exterior::{CIExpansion, OrbitalBasis, Shape, Trivector};
use crate::linalg::svd_det1;
use crate::spectral::natural_spectrum;
use crate::{CMat, Mat6, Vec6};

const PRECONDITION_TOL: f64 = 1e-9;
const RANK_TOL: f64 = 1e-10;
const FG_LABELS: [&str; 6] = ["f1", "f2", "f3", "g1", "g2", "g3"];

/// Rows of the 5-term diagram on `(f1, f2, f3, g1, g2, g3)`. The `B2` row holds
/// the coefficient of the sorted configuration, i.e. `-B2`.
pub(crate) fn slater5_rows() -> [(&'static str, [usize; 3]); 5] {
    [("A", [0, 1, 2]), ("B1", [1, 2, 3]), ("B2", [0, 2, 4]), ("B3", [0, 1, 5]), ("D", [3, 4, 5])]
}

const CID_ROWS: [(&str, [usize; 3]); 4] = [("A1", [0, 1, 2]), ("A2", [0, 4, 5]), ("A3", [1, 3, 5]), ("A4", [2, 3, 4])];

/// Rows of the CID diagram sharing each orbital.
const CID_ORBITAL_ROWS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (2, 3), (1, 3), (1, 2)];

/// Which coefficients the 5-term phase convention makes real and nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SinglesPhase {
    /// `A, B1, B2, B3 ≥ 0`; `D` carries the leftover phase.
    Reference,
    /// `B1, B2, B3, D ≥ 0`; `A` carries the leftover phase.
    Triple,
}

/// `C[i][k] = ⟨ref with slot i replaced by comp_k, t⟩` read from the
/// coefficient trivector `c`.
pub(crate) fn singles_kernel(c: &Trivector, refc: [usize; 3], comp: &[usize]) -> CMat {
    CMat::from_fn(3, comp.len(), |i, k| {
        let mut cfg = refc;
        cfg[i] = comp[k];
        c.get(cfg[0], cfg[1], cfg[2])
    })
}

/// Rotates the reference and complement columns of `w` so the singles kernel of
/// `t` becomes diagonal with descending nonnegative entries (up to one common
/// phase). Returns the singular values.
pub(crate) fn reduce_kernel(t: &Trivector, w: &mut Mat6, refc: [usize; 3], comp: &[usize]) -> Vec<f64> {
    let k = singles_kernel(&t.coefficients_in(w), refc, comp);
    let s = svd_det1(&k);
    rotate_frame(w, &refc, &s.u.map(|z| z.conj()));
    rotate_frame(w, comp, &s.v.map(|z| z.conj()));
    s.s
}

fn arg_at(c: &Trivector, cfg: [usize; 3]) -> f64 {
    c.get(cfg[0], cfg[1], cfg[2]).arg()
}

pub(crate) fn phase_slater5(t: &Trivector, w: &Mat6, phase: SinglesPhase) -> Mat6 {
    let c = t.coefficients_in(w);
    let a = arg_at(&c, [0, 1, 2]);
    let b1 = arg_at(&c, [1, 2, 3]);
    let b2 = arg_at(&c, [0, 2, 4]) - PI;
    let b3 = arg_at(&c, [0, 1, 5]);
    let theta = match phase {
        SinglesPhase::Reference => [a, 0.0, 0.0, b1, b2 - a, b3 - a],
        SinglesPhase::Triple => {
            let d = arg_at(&c, [3, 4, 5]);
            let th = (b1 + b2 + b3 - d) / 2.0;
            let s = th / 3.0;
            [s, s, s, b1 - 2.0 * s, b2 - 2.0 * s, b3 - 2.0 * s]
        }
    };
    rephase(w, theta)
}

pub(crate) fn svd_reduce_singles_with(t: &Trivector, r: &[Vec6; 3], phase: SinglesPhase) -> Result<CIExpansion> {
    let mut w = frame_spanning(r)?;
    let residual = outside_weight(t, &w, |cfg| reference_count(cfg) != 1);
    if residual > PRECONDITION_TOL {
        return Err(Error::Precondition { what: "state has double excitations relative to R", residual });
    }
    reduce_kernel(t, &mut w, [0, 1, 2], &[3, 4, 5]);
    let w = phase_slater5(t, &w, phase);
    let basis = OrbitalBasis::with_labels(w, FG_LABELS)?;
    Ok(CIExpansion::project(t, basis, &slater5_rows(), Shape::Slater5))
}

/// Five-term expansion `A, B1, −B2, B3, D` of a state in
/// `∧³R ⊕ (R∧R∧R⊥) ⊕ ∧³R⊥`, with `f` spanning `R` and `g` spanning `R⊥`.
pub fn svd_reduce_singles(t: &Trivector, r: &[Vec6; 3]) -> Result<CIExpansion> {
    svd_reduce_singles_with(t, r, SinglesPhase::Reference)
}

/// Canonical CIS form for reference space `R` (the span of `r`).
///
/// Rank-3 input uses its occupied space; rank-5 input uses `span{w, u1, u2}` from
/// [`three_in_five`], which gives the member of the one-parameter family with
/// `A = 0`.
pub fn cis_canonical(t: &Trivector, r: &[Vec6; 3]) -> Result<CIExpansion> {
    let w = frame_spanning(r)?;
    let out = outside_weight(t, &w, |cfg| reference_count(cfg) >= 2);
    if (1.0 - out * out).max(0.0).sqrt() < 1.0 - PRECONDITION_TOL {
        return Err(Error::Precondition { what: "state is not CIS for the given reference space", residual: out });
    }
    let nat = natural_spectrum(t);
    let scale = t.norm_sqr();
    let mut w = if nat.lambdas[3] <= RANK_TOL * scale {
        *nat.orbitals.matrix()
    } else if nat.lambdas[5] <= RANK_TOL * scale {
        let tf = three_in_five(t)?;
        frame_spanning(&[tf.basis.column(0), tf.basis.column(1), tf.basis.column(3)])?
    } else {
        w
    };
    reduce_kernel(t, &mut w, [0, 1, 2], &[3, 4, 5]);
    let w = phase_slater5(t, &w, SinglesPhase::Reference);
    let basis = OrbitalBasis::with_labels(w, FG_LABELS)?;
    Ok(CIExpansion::project(t, basis, &slater5_rows()[..4], Shape::CIS4))
}

/// Canonical CID form `A1 ≥ A2 ≥ A3 ≥ A4 ≥ 0` for reference space `R`.
///
/// Rows are `f1f2f3`, `f1g2g3`, `g1f2g3`, `g1g2f3`; the third is stored as the
/// sorted configuration `f2g1g3`, so its coefficient is `−A3`.
pub fn cid_canonical(t: &Trivector, r: &[Vec6; 3]) -> Result<CIExpansion> {
    let w = frame_spanning(r)?;
    let residual = outside_weight(t, &w, |cfg| matches!(reference_count(cfg), 1 | 3));
    if residual > PRECONDITION_TOL {
        return Err(Error::Precondition { what: "state is not CID for the given reference space", residual });
    }
    let nat = natural_spectrum(t);
    let mut w = if nat.lambdas[3] <= RANK_TOL * t.norm_sqr() { *nat.orbitals.matrix() } else { w };
    // Doubles of f1f2f3 are singles of g1g2g3 with an f substituted.
    reduce_kernel(t, &mut w, [3, 4, 5], &[0, 1, 2]);

    let c = t.coefficients_in(&w);
    let mags: Vec<f64> = CID_ROWS.iter().map(|(_, r)| c.get(r[0], r[1], r[2]).norm()).collect();
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| mags[b].total_cmp(&mags[a]).then(a.cmp(&b)));
    // Each orbital is determined by the two rows it appears in; permuting rows
    // permutes orbitals accordingly.
    let old = w;
    for (o, &(a, b)) in CID_ORBITAL_ROWS.iter().enumerate() {
        let (pa, pb) = (order[a].min(order[b]), order[a].max(order[b]));
        let src = CID_ORBITAL_ROWS.iter().position(|&p| p == (pa, pb)).expect("every row pair names an orbital");
        w.set_column(o, &old.column(src));
    }

    let c = t.coefficients_in(&w);
    let a: Vec<f64> = CID_ROWS.iter().map(|(_, r)| c.get(r[0], r[1], r[2]).arg()).collect();
    let a2 = a[2] - PI;
    let x = (a[1] + a2 + a[3] - a[0]) / 2.0;
    let w = rephase(&w, [a[1] - x, a2 - x, a[3], 0.0, 0.0, x]);
    let basis = OrbitalBasis::with_labels(w, FG_LABELS)?;
    Ok(CIExpansion::project(t, basis, &CID_ROWS, Shape::CID4))
}
