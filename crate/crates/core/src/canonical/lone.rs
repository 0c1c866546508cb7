use super::{bivector_in_frame, embed_vector, geminal_canonical, rephase, rotate_frame, three_in_five, to_vec6};
use crate::exterior::{decomposable_in_span, Bivector, CIExpansion, OrbitalBasis, Shape, Trivector};
use crate::linalg::{complete_basis6, hermitian_eig, svd};
use crate::spectral::{natural_spectrum, one_rdm};
use crate::{CMat, Mat6, Vec6, C64};

const LONE_ROWS: [(&str, [usize; 3]); 5] =
    [("A", [0, 2, 3]), ("B1", [1, 2, 3]), ("B2", [1, 4, 5]), ("C1", [1, 2, 4]), ("C2", [1, 3, 5])];
const LONE_LABELS: [&str; 6] = ["l1", "l2", "f1", "f2", "g1", "g2"];

/// Top eigenvector of `Γ_r` restricted to the span of `cols`.
fn top_in_span(r: &Trivector, cols: &[Vec6]) -> Vec6 {
    let g = one_rdm(r).matrix;
    let q = CMat::from_fn(6, cols.len(), |i, a| cols[a][i]);
    let gq = CMat::from_fn(6, 6, |i, j| g[(i, j)]);
    let eig = hermitian_eig(&(q.adjoint() * gq * &q)).expect("restriction of a Hermitian matrix");
    let y = eig.vectors.column(0).into_owned();
    embed_vector(&y, cols)
}

/// The lone-orbital expansion
///
/// ```text
///  l1 l2 f1 f2 g1 g2
///  X  O  X  X  O  O   A
///  O  X  X  X  O  O   B1
///  O  X  O  O  X  X   B2
///  O  X  X  O  X  O   C1
///  O  X  O  X  O  X   C2
/// ```
///
/// with `A, B1, B2, C1 ≥ 0` and `C2` complex.
pub fn lone_orbital(t: &Trivector) -> CIExpansion {
    let nat = natural_spectrum(t);
    let scale = t.norm_sqr();
    let w = if nat.lambdas[5] <= 1e-10 * scale || scale == 0.0 {
        lone_low_rank(t)
    } else {
        lone_full_rank(t, &nat.orbitals.column(0))
    };
    let c = t.coefficients_in(&w);
    let arg = |cfg: [usize; 3]| c.get(cfg[0], cfg[1], cfg[2]).arg();
    let (aa, ab1, ab2, ac1) = (arg([0, 2, 3]), arg([1, 2, 3]), arg([1, 4, 5]), arg([1, 2, 4]));
    let w = rephase(&w, [aa, ab1, 0.0, 0.0, ac1 - ab1, ab2 - ac1]);
    let basis = OrbitalBasis::with_labels(w, LONE_LABELS).expect("orthonormal by construction");
    CIExpansion::project(t, basis, &LONE_ROWS, Shape::Lone5)
}

fn lone_low_rank(t: &Trivector) -> Mat6 {
    let Ok(tf) = three_in_five(t) else {
        return Mat6::identity();
    };
    let b = |i: usize| tf.basis.column(i);
    let cols = if tf.coeffs[1] <= 1e-10 * tf.coeffs[0] {
        [b(0), b(5), b(1), b(2), b(3), b(4)]
    } else {
        [b(5), b(0), b(1), b(2), b(3), b(4)]
    };
    complete_basis6(&cols)
}

/// Splits `t = w∧γ + w′∧γ′` with `γ = interior(w, t)` and `w′` orthogonal to `w`
/// and to the orbitals of `γ`. For a natural orbital `w` such a `w′` exists (it
/// is the partner of `w` in a 3-qubit subspace).
pub(crate) fn split_at(t: &Trivector, w: &Vec6) -> (Bivector, Vec6, Bivector) {
    let gamma = t.interior(w);
    let r = *t - Trivector::wedge_vector(w, &gamma);
    let mut support = vec![*w];
    // γ lives in the 5-dim complement of w, so at most two pairs are genuine.
    let gem = geminal_canonical(&gamma);
    let top = gem.coeffs.first().copied().unwrap_or(0.0);
    for (a, (u, v)) in gem.coeffs.iter().zip(&gem.pairs).take(2) {
        if *a > 1e-10 * top {
            support.push(to_vec6(u));
            support.push(to_vec6(v));
        }
    }
    let completed = complete_basis6(&support);
    let rest: Vec<Vec6> = (support.len()..6).map(|i| completed.column(i).into()).collect();
    let w2 = top_in_span(&r, &rest);
    let gamma2 = r.interior(&w2);
    (gamma, w2, gamma2)
}

fn lone_full_rank(t: &Trivector, w1: &Vec6) -> Mat6 {
    let (gamma1, w2, gamma2) = split_at(t, w1);
    let m6 = complete_basis6(&[*w1, w2]);
    let frame: Vec<Vec6> = (2..6).map(|i| m6.column(i).into()).collect();
    let g1 = bivector_in_frame(&gamma1, &frame);
    let g2 = bivector_in_frame(&gamma2, &frame);
    let (a1, a2) = match decomposable_in_span(&g1, &g2) {
        Ok(beta) if beta == g1 => (C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
        Ok(beta) => {
            // beta = z g1 + g2; read z off the largest entry of g1.
            let k = (0..6).max_by(|&i, &j| g1.amps()[i].norm().total_cmp(&g1.amps()[j].norm())).unwrap();
            let z = (beta.amps()[k] - g2.amps()[k]) / g1.amps()[k];
            let n = (z.norm_sqr() + 1.0).sqrt();
            (z / n, C64::new(1.0 / n, 0.0))
        }
        Err(_) => (C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
    };
    let beta = g1.scale(a1).add(&g2.scale(a2)).expect("same dimension");
    let gem = geminal_canonical(&beta);
    let (f1, f2) = match gem.pairs.first() {
        Some((u, v)) => (embed_vector(u, &frame), embed_vector(v, &frame)),
        None => (frame[0], frame[1]),
    };
    let l1 = w1 * a1.conj() + w2 * a2.conj();
    let l2 = w1 * (-a2) + w2 * a1;
    let mut w = complete_basis6(&[l1, l2, f1, f2]);

    let c = t.coefficients_in(&w);
    let m = CMat::from_fn(2, 2, |i, j| c.get(1, 2 + i, 4 + j));
    let s = svd(&m);
    rotate_frame(&mut w, &[2, 3], &s.u);
    rotate_frame(&mut w, &[4, 5], &s.v.map(|z| z.conj()));
    w
}
