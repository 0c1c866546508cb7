use super::ascent::MONOTONE_TOL;
use super::{approximant, frame_basis, multistart, Certificate, FrameProblem, OverlapResult};
use crate::canonical::{reference_count, svd_reduce_singles_with, SinglesPhase};
use crate::error::{Error, Result};
use crate::exterior::{CIExpansion, Trivector, TRIPLES};
use crate::linalg::complete_basis6;
use crate::spectral::natural_spectrum;
use crate::{Mat6, Vec6};

const SWEEP_GAIN: f64 = 1e-12;
const MAX_SWEEPS: usize = 500;
/// Brueckner tolerance on the nine single-excitation coefficients.
const SINGLES_TOL: f64 = 1e-8;

/// `x_i = ⟨e_i ∧ a ∧ b, t⟩`. The best `f` for fixed `a, b` is `x/‖x‖`, with
/// overlap `‖x‖`; `x` is automatically orthogonal to `a` and `b`.
fn partial_contraction(t: &Trivector, a: &Vec6, b: &Vec6) -> Vec6 {
    // g(i, j) = ⟨e_i ∧ e_j ∧ b, t⟩
    let g = t.interior(b);
    Vec6::from_fn(|i, _| {
        let mut acc = crate::C64::new(0.0, 0.0);
        for j in 0..6 {
            if j != i {
                acc += a[j].conj() * g.get(j, i);
            }
        }
        -acc
    })
}

/// Alternating maximization over one orbital at a time.
fn coordinate_ascent(t: &Trivector, mut f: [Vec6; 3]) -> [Vec6; 3] {
    let mut prev = Trivector::from_orbitals(&f[0], &f[1], &f[2]).inner(t).norm();
    for _ in 0..MAX_SWEEPS {
        for k in 0..3 {
            let (a, b) = (f[(k + 1) % 3], f[(k + 2) % 3]);
            let x = partial_contraction(t, &a, &b);
            let n = x.norm();
            if n > 0.0 {
                f[k] = x / crate::C64::new(n, 0.0);
            }
        }
        let now = Trivector::from_orbitals(&f[0], &f[1], &f[2]).inner(t).norm();
        debug_assert!(now >= prev - MONOTONE_TOL);
        if now - prev < SWEEP_GAIN {
            break;
        }
        prev = now;
    }
    f
}

fn columns3(w: &Mat6) -> [Vec6; 3] {
    [w.column(0).into(), w.column(1).into(), w.column(2).into()]
}

/// Best Slater determinant: coordinate ascent from each start, then a Newton
/// polish on the Grassmannian.
pub fn max_overlap_slater(t: &Trivector, restarts: usize, seed: u64) -> OverlapResult {
    let problem = FrameProblem::new(t, |cfg| reference_count(cfg) == 3, FrameProblem::mixing_pairs());
    let informed = *natural_spectrum(t).orbitals.matrix();
    let (w, _, used) = multistart(t, &informed, restarts, seed, |w0| {
        let f = coordinate_ascent(t, columns3(w0));
        problem.ascend(&complete_basis6(&f))
    });
    let (chi, overlap) = approximant(&problem, &w);
    let mut certificate = Certificate::default();
    certificate.push("singles", max_singles(t, &w));
    OverlapResult { approximant: chi, overlap, certificate, restarts_used: used, frame: frame_basis(&w), split: None }
}

fn max_singles(t: &Trivector, w: &Mat6) -> f64 {
    let c = t.coefficients_in(w);
    TRIPLES.iter().zip(c.amps()).filter(|(tr, _)| reference_count(tr) == 2).map(|(_, a)| a.norm()).fold(0.0, f64::max)
}

/// Five-term expansion `A, B1, −B2, B3, D` whose `D` row is the Slater
/// approximant itself (`D = overlap`, real and nonnegative) and whose reference
/// space is its orthogonal complement.
pub fn expansion_from_slater(t: &Trivector, chi: &OverlapResult) -> Result<CIExpansion> {
    let w = chi.frame.matrix();
    let singles = max_singles(t, w);
    if singles > SINGLES_TOL {
        return Err(Error::Certificate { what: "single excitations of the Slater approximant", residual: singles });
    }
    let r = [w.column(3).into(), w.column(4).into(), w.column(5).into()];
    svd_reduce_singles_with(t, &r, SinglesPhase::Triple).map_err(|e| match e {
        Error::Precondition { residual, .. } => Error::Certificate { what: "doubles relative to the complement", residual },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_unitary, random_trivector, rng_for};
    use crate::C64;

    #[test]
    fn contraction_matches_brute_force() {
        let mut rng = rng_for(1, 0);
        let t = random_trivector(&mut rng);
        let u = haar_unitary(&mut rng);
        let (a, b): (Vec6, Vec6) = (u.column(1).into(), u.column(2).into());
        let x = partial_contraction(&t, &a, &b);
        for i in 0..6 {
            let e = Vec6::from_fn(|j, _| if j == i { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
            let direct = Trivector::from_orbitals(&e, &a, &b).inner(&t);
            assert!((direct - x[i]).norm() < 1e-13);
        }
    }

    #[test]
    fn slater_target_is_recovered() {
        let u = haar_unitary(&mut rng_for(2, 0));
        let t = Trivector::basis(0, 1, 2).change_basis(&u).unwrap();
        let r = max_overlap_slater(&t, 4, 0);
        assert!((r.overlap - 1.0).abs() < 1e-12);
        assert_eq!(r.restarts_used, 1);
    }

    #[test]
    fn ghz_overlap_is_one_half() {
        let s = 0.5f64.sqrt();
        let t = (Trivector::basis(0, 1, 2) + Trivector::basis(3, 4, 5)) * s;
        let r = max_overlap_slater(&t, 8, 1);
        assert!((r.overlap * r.overlap - 0.5).abs() < 1e-10);
        let e = expansion_from_slater(&t, &r).unwrap();
        assert_eq!(e.nonzero_terms(), 2);
        assert!((e.coefficient("D").unwrap() - C64::new(s, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn random_targets_satisfy_brueckner() {
        let mut rng = rng_for(3, 0);
        for _ in 0..10 {
            let t = random_trivector(&mut rng);
            let r = max_overlap_slater(&t, 8, 7);
            assert!(r.certificate.residual("singles").unwrap() < SINGLES_TOL);
            assert!((r.approximant.inner(&t) - C64::new(r.overlap, 0.0)).norm() < 1e-10);
            let e = expansion_from_slater(&t, &r).unwrap();
            assert!(e.residual(&t) < 1e-8);
            assert!((e.coefficient("D").unwrap() - C64::new(r.overlap, 0.0)).norm() < 1e-8);
        }
    }
}
