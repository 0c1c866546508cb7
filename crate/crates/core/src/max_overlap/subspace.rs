use super::{approximant, frame_basis, multistart, Certificate, FrameProblem, OverlapResult};
use crate::canonical::{cid_canonical, cis_canonical, reference_count, slater5_rows};
use crate::error::{Error, Result};
use crate::exterior::{CIExpansion, Shape, Trivector, TRIPLES};
use crate::spectral::natural_spectrum;
use crate::{Mat6, Vec6};

const FIVE_TERM_TOL: f64 = 1e-8;
const RANK_TOL: f64 = 1e-10;

/// The nine doubles `f_i g_j g_k`: the three with `i ∉ {j, k}` are `C1..C3`,
/// the other six are the mixed doubles.
const C_ROWS: [[usize; 3]; 3] = [[0, 4, 5], [1, 3, 5], [2, 3, 4]];
const MIXED_DOUBLES: [[usize; 3]; 6] = [[0, 3, 4], [0, 3, 5], [1, 3, 4], [1, 4, 5], [2, 3, 5], [2, 4, 5]];

/// The four CID rows and their complements.
const CID_ALLOWED: [[usize; 3]; 8] =
    [[0, 1, 2], [0, 4, 5], [1, 3, 5], [2, 3, 4], [3, 4, 5], [1, 2, 3], [0, 2, 4], [0, 1, 5]];

fn reference_of(w: &Mat6) -> [Vec6; 3] {
    [w.column(0).into(), w.column(1).into(), w.column(2).into()]
}

fn subspace_optimum(
    t: &Trivector,
    keep: impl Fn(&[usize; 3]) -> bool,
    restarts: usize,
    seed: u64,
) -> (Mat6, Trivector, f64, usize) {
    let problem = FrameProblem::new(t, keep, FrameProblem::mixing_pairs());
    let informed = *natural_spectrum(t).orbitals.matrix();
    let (w, _, used) = multistart(t, &informed, restarts, seed, |w0| problem.ascend(w0));
    let (chi, overlap) = approximant(&problem, &w);
    (w, chi, overlap, used)
}

/// Best approximation by a state of `∧³R ⊕ (R∧R∧R⊥)` over 3-dimensional `R`.
///
/// The returned frame is the canonical CIS frame of the approximant, in which
/// the target should read `s·χ + D·g1∧g2∧g3`; the certificate records the
/// coefficients that must vanish for that.
pub fn max_overlap_cis(t: &Trivector, restarts: usize, seed: u64) -> OverlapResult {
    let (w, chi, overlap, used) = subspace_optimum(t, |cfg| reference_count(cfg) >= 2, restarts, seed);
    let mut certificate = Certificate::default();
    let frame = match cis_canonical(&chi, &reference_of(&w)) {
        Ok(e) => {
            let c = e.basis.coefficients(t);
            for (name, cfg) in ["C1", "C2", "C3"].iter().zip(C_ROWS) {
                certificate.push(name, c.get(cfg[0], cfg[1], cfg[2]).norm());
            }
            let mixed = MIXED_DOUBLES.iter().map(|k| c.get(k[0], k[1], k[2]).norm()).fold(0.0, f64::max);
            certificate.push("mixed_doubles", mixed);
            let five = CIExpansion::project(t, e.basis.clone(), &slater5_rows(), Shape::CIS5);
            certificate.push("five_term", five.residual(t));
            e.basis
        }
        Err(_) => {
            certificate.flags.push("no_canonical_frame".into());
            frame_basis(&w)
        }
    };
    OverlapResult { approximant: chi, overlap, certificate, restarts_used: used, frame, split: None }
}

/// Five-term expansion `sA, sB1, −sB2, sB3, D` on the canonical orbitals of a
/// max-overlap CIS approximant, where `s` is its overlap with `t`.
pub fn expansion_from_cis(t: &Trivector, chi: &OverlapResult) -> Result<CIExpansion> {
    let canon = cis_canonical(&chi.approximant, &chi.reference_space()).map_err(|e| match e {
        Error::Precondition { residual, .. } => Error::Certificate { what: "approximant is not CIS", residual },
        other => other,
    })?;
    let e = CIExpansion::project(t, canon.basis, &slater5_rows(), Shape::CIS5);
    let residual = e.residual(t);
    if residual > FIVE_TERM_TOL {
        return Err(Error::Certificate { what: "five-term expansion does not reconstruct the target", residual });
    }
    if t.rank(RANK_TOL * t.norm_sqr()) == 6 {
        let l = natural_spectrum(&chi.approximant).lambdas;
        if l[5] <= RANK_TOL {
            return Err(Error::Certificate { what: "full-rank target with a rank-deficient approximant", residual: l[5] });
        }
    }
    Ok(e)
}

/// Best approximation by a state of `∧³R ⊕ (R∧R⊥∧R⊥)` over 3-dimensional `R`.
///
/// The returned frame is the canonical CID frame of the approximant; in it the
/// target has weight only on the four CID rows and their complements.
pub fn max_overlap_cid(t: &Trivector, restarts: usize, seed: u64) -> OverlapResult {
    let (w, chi, overlap, used) = subspace_optimum(t, |cfg| matches!(reference_count(cfg), 1 | 3), restarts, seed);
    let mut certificate = Certificate::default();
    let frame = match cid_canonical(&chi, &reference_of(&w)) {
        Ok(e) => {
            let c = e.basis.coefficients(t);
            let excluded = TRIPLES
                .iter()
                .zip(c.amps())
                .filter(|(tr, _)| !CID_ALLOWED.contains(tr))
                .map(|(_, a)| a.norm())
                .fold(0.0, f64::max);
            certificate.push("excluded", excluded);
            e.basis
        }
        Err(_) => {
            certificate.flags.push("no_canonical_frame".into());
            frame_basis(&w)
        }
    };
    OverlapResult { approximant: chi, overlap, certificate, restarts_used: used, frame, split: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_unitary, random_trivector, rng_for};
    use crate::C64;

    fn projector(r: &[Vec6; 3]) -> Mat6 {
        r.iter().map(|v| v * v.adjoint()).sum()
    }

    #[test]
    fn cis_target_is_recovered() {
        let u = haar_unitary(&mut rng_for(20, 0));
        // Full rank, so the reference space is unique.
        let t = (Trivector::basis(0, 1, 2) * 0.6
            + Trivector::basis(1, 2, 3) * 0.48
            + Trivector::basis(0, 2, 4) * 0.48
            + Trivector::basis(0, 1, 5) * 0.4)
            .normalized()
            .change_basis(&u)
            .unwrap();
        let r = max_overlap_cis(&t, 8, 0);
        assert!((r.overlap - 1.0).abs() < 1e-12);
        let expected = projector(&[u.column(0).into(), u.column(1).into(), u.column(2).into()]);
        assert!((projector(&r.reference_space()) - expected).norm() < 1e-8);
        let e = expansion_from_cis(&t, &r).unwrap();
        assert!(e.coefficient("D").unwrap().norm() < 1e-9);
    }

    #[test]
    fn ghz_beats_the_naive_value() {
        let (s, tt) = (0.8, 0.6);
        let t = Trivector::basis(0, 1, 2) * s + Trivector::basis(3, 4, 5) * tt;
        let r = max_overlap_cis(&t, 16, 3);
        assert!((r.overlap * r.overlap - (1.0 - (s * tt) * (s * tt))).abs() < 1e-9);
    }

    #[test]
    fn random_targets_have_five_term_form() {
        let mut rng = rng_for(21, 0);
        for _ in 0..10 {
            let t = random_trivector(&mut rng);
            let r = max_overlap_cis(&t, 8, 1);
            for name in ["C1", "C2", "C3", "mixed_doubles"] {
                assert!(r.certificate.residual(name).unwrap() < 1e-7, "{name}");
            }
            let e = expansion_from_cis(&t, &r).unwrap();
            let d = e.coefficient("D").unwrap();
            assert!((r.overlap * r.overlap + d.norm_sqr() - 1.0).abs() < 1e-8);
            assert!((r.approximant.inner(&t) - C64::new(r.overlap, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn cid_certificate_on_random_targets() {
        let mut rng = rng_for(22, 0);
        for _ in 0..10 {
            let t = random_trivector(&mut rng);
            let r = max_overlap_cid(&t, 8, 2);
            assert!(r.certificate.residual("excluded").unwrap() < 1e-7);
        }
    }

    #[test]
    fn ortho_w_is_cid() {
        let b = 1.0 / 3f64.sqrt();
        let t = (Trivector::basis(1, 2, 3) + Trivector::basis(0, 2, 4) + Trivector::basis(0, 1, 5)) * b;
        let r = max_overlap_cid(&t, 8, 0);
        assert!((r.overlap - 1.0).abs() < 1e-12);
    }
}
