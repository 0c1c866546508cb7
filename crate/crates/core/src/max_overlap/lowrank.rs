use super::{Certificate, OverlapResult};
use crate::canonical::split_at;
use crate::exterior::{Bivector, OrbitalBasis, Trivector};
use crate::spectral::natural_spectrum;
use crate::{Vec6, C64};

/// Occupations closer than this count as degenerate.
const DEGENERATE_GAP: f64 = 1e-9;

/// `t = w∧γ + w′∧γ′` with `w′` orthogonal to `w` and to the orbitals of `γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowRankSplit {
    pub w: Vec6,
    pub gamma: Bivector,
    pub w_prime: Vec6,
    pub gamma_prime: Bivector,
}

impl LowRankSplit {
    pub fn residual(&self, t: &Trivector) -> f64 {
        let r = *t - Trivector::wedge_vector(&self.w, &self.gamma) - Trivector::wedge_vector(&self.w_prime, &self.gamma_prime);
        r.norm()
    }
}

/// Exact: the best state of rank ≤ 5 is `w∧interior(w, t)` normalized, with `w`
/// the most occupied natural orbital, and its squared overlap is `λ1`.
pub fn max_overlap_lowrank(t: &Trivector) -> OverlapResult {
    let nat = natural_spectrum(t);
    let w = nat.orbitals.column(0);
    let (gamma, w_prime, gamma_prime) = split_at(t, &w);
    let chi = Trivector::wedge_vector(&w, &gamma);
    let n = chi.norm();
    let (approximant, overlap) =
        if n == 0.0 { (Trivector::basis(0, 1, 2), 0.0) } else { (chi * (1.0 / n), chi.inner(t).re / n) };
    let split = LowRankSplit { w, gamma, w_prime, gamma_prime };

    let mut certificate = Certificate::default();
    certificate.push("split", split.residual(t));
    certificate.push("lambda1", (overlap * overlap - nat.lambdas[0]).abs());
    if nat.lambdas[0] - nat.lambdas[1] < DEGENERATE_GAP {
        certificate.flags.push("degenerate_lambda1".into());
    }
    let frame = OrbitalBasis::with_labels(*nat.orbitals.matrix(), ["n1", "n2", "n3", "n4", "n5", "n6"])
        .expect("natural orbitals are orthonormal");
    debug_assert!((approximant.inner(t) - C64::new(overlap, 0.0)).norm() < 1e-9);
    OverlapResult { approximant, overlap, certificate, restarts_used: 0, frame, split: Some(split) }
}
