//! Small dense complex kernels: Jacobi eigensolver, one-sided Jacobi SVD,
//! Gram–Schmidt completion and the exponential of anti-Hermitian matrices.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::{CMat, Mat6, Vec6, C64};

const EIG_OFF_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Unitary; column `i` belongs to `values[i]`.
    pub vectors: CMat,
}

/// Rotation `G = [[c, s], [-s e^{-iφ}, c e^{-iφ}]]` that zeroes the off-diagonal
/// entry of the 2×2 Hermitian block `[[app, apq], [conj(apq), aqq]]` under `G† A G`.
fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> [[C64; 2]; 2] {
    let r = apq.norm();
    let phase = if r > 0.0 { (apq / r).conj() } else { C64::new(1.0, 0.0) };
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    [
        [C64::new(c, 0.0), C64::new(s, 0.0)],
        [-phase * s, phase * c],
    ]
}

fn rotate_columns(m: &mut CMat, p: usize, q: usize, g: &[[C64; 2]; 2]) {
    for k in 0..m.nrows() {
        let (a, b) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = a * g[0][0] + b * g[1][0];
        m[(k, q)] = a * g[0][1] + b * g[1][1];
    }
}

fn rotate_rows_adjoint(m: &mut CMat, p: usize, q: usize, g: &[[C64; 2]; 2]) {
    for k in 0..m.ncols() {
        let (a, b) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = g[0][0].conj() * a + g[1][0].conj() * b;
        m[(q, k)] = g[0][1].conj() * a + g[1][1].conj() * b;
    }
}

/// Largest entrywise deviation of `h` from its adjoint.
pub fn hermiticity_defect(h: &CMat) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..h.nrows() {
        for j in 0..h.ncols() {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Cyclic Jacobi eigensolver for a Hermitian matrix of any small size.
///
/// Eigenvalues come back in descending order. Eigenvectors of a degenerate
/// cluster are re-orthonormalized; each vector's phase is fixed so that its
/// largest component is real and positive.
pub fn hermitian_eig(h: &CMat) -> Result<HermitianEigen> {
    let n = h.nrows();
    if h.ncols() != n {
        return Err(Error::DimensionMismatch(n, h.ncols()));
    }
    let defect = hermiticity_defect(h);
    let scale = h.norm().max(1.0);
    if defect > 1e-10 * scale {
        return Err(Error::NotHermitian(defect));
    }
    let mut a = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let mut v = CMat::identity(n, n);
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= EIG_OFF_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[(p, q)].norm() <= 1e-300 {
                    continue;
                }
                let g = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, a[(p, q)]);
                rotate_columns(&mut a, p, q, &g);
                rotate_rows_adjoint(&mut a, p, q, &g);
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                rotate_columns(&mut v, p, q, &g);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re).then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &v.column(src));
    }
    // Re-orthonormalize degenerate clusters.
    let cluster_tol = 1e-9 * scale;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (values[end - 1] - values[end]).abs() <= cluster_tol {
            end += 1;
        }
        if end - start > 1 {
            for j in start..end {
                let mut col = vectors.column(j).into_owned();
                for k in start..j {
                    let prev = vectors.column(k).into_owned();
                    let proj = prev.dotc(&col);
                    col -= prev * proj;
                }
                let nrm = col.norm();
                vectors.set_column(j, &(col / C64::new(nrm, 0.0)));
            }
        }
        start = end;
    }
    for j in 0..n {
        fix_phase_column(&mut vectors, j);
    }
    Ok(HermitianEigen { values, vectors })
}

/// Multiplies column `j` by a phase so its largest-modulus entry (first one on ties)
/// is real and positive.
pub(crate) fn fix_phase_column(m: &mut CMat, j: usize) {
    let mut best = 0;
    let mut best_abs = -1.0;
    for i in 0..m.nrows() {
        let a = m[(i, j)].norm();
        if a > best_abs + 1e-12 {
            best = i;
            best_abs = a;
        }
    }
    if best_abs > 0.0 {
        let ph = (m[(best, j)] / best_abs).conj();
        for i in 0..m.nrows() {
            m[(i, j)] *= ph;
        }
    }
}

/// `A = U diag(s) V†` with `s` descending and nonnegative.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v: CMat,
}

/// One-sided Jacobi SVD of a small complex matrix.
pub fn svd(a: &CMat) -> Svd {
    let (m, n) = a.shape();
    if m < n {
        let t = svd(&a.adjoint());
        return Svd { u: t.v, s: t.s, v: t.u };
    }
    let mut w = a.clone();
    let mut v = CMat::identity(n, n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() || gamma.norm() < 1e-300 {
                    continue;
                }
                rotated = true;
                let g = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut w, p, q, &g);
                rotate_columns(&mut v, p, q, &g);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));
    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let smax = s.first().copied().unwrap_or(0.0);
    let mut cols: Vec<DVector<C64>> = Vec::with_capacity(m);
    let mut vs = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vs.set_column(dst, &v.column(src));
    }
    for (dst, &src) in order.iter().enumerate() {
        if s[dst] > 1e-14 * smax && s[dst] > 1e-300 {
            cols.push(w.column(src) / C64::new(s[dst], 0.0));
        } else {
            break;
        }
    }
    // Re-orthonormalize the left vectors (they are orthogonal only to working accuracy)
    // and complete them to a unitary matrix.
    let mut u = complete_orthonormal(&cols, m);
    // Columns past the numerical rank were filled in by the completion; keep the
    // pairing U[:,k] <-> V[:,k] for the rest.
    for k in 0..cols.len() {
        let ph = u.column(k).dotc(&cols[k]);
        if ph.norm() > 0.0 {
            let ph = ph / ph.norm();
            let col = u.column(k) * ph;
            u.set_column(k, &col);
        }
    }
    Svd { u, s, v: vs }
}

/// SVD with `det U = 1`, as needed when `U` acts on a frame whose top wedge must
/// stay fixed. The compensating phase is moved onto the first column of `V`.
pub fn svd_det1(a: &CMat) -> Svd {
    let mut r = svd(a);
    let det = r.u.determinant();
    let ph = det / det.norm();
    let c = r.u.column(0) * ph.conj();
    r.u.set_column(0, &c);
    let c = r.v.column(0) * ph.conj();
    r.v.set_column(0, &c);
    r
}

/// Orthonormalizes `vectors` (modified Gram–Schmidt) and completes them to a
/// unitary `dim × dim` matrix with standard basis vectors, always picking the
/// candidate with the largest remaining component.
pub fn complete_orthonormal(vectors: &[DVector<C64>], dim: usize) -> CMat {
    let mut basis: Vec<DVector<C64>> = Vec::with_capacity(dim);
    let push = |basis: &mut Vec<DVector<C64>>, mut x: DVector<C64>| -> bool {
        for _ in 0..2 {
            for b in basis.iter() {
                let p = b.dotc(&x);
                x -= b * p;
            }
        }
        let nrm = x.norm();
        if nrm > 1e-10 {
            basis.push(x / C64::new(nrm, 0.0));
            true
        } else {
            false
        }
    };
    for v in vectors {
        if basis.len() < dim {
            push(&mut basis, v.clone());
        }
    }
    while basis.len() < dim {
        let mut best = 0;
        let mut best_norm = -1.0;
        for i in 0..dim {
            let mut x = DVector::<C64>::zeros(dim);
            x[i] = C64::new(1.0, 0.0);
            for b in basis.iter() {
                let p = b.dotc(&x);
                x -= b * p;
            }
            let nrm = x.norm();
            if nrm > best_norm + 1e-12 {
                best = i;
                best_norm = nrm;
            }
        }
        let mut e = DVector::<C64>::zeros(dim);
        e[best] = C64::new(1.0, 0.0);
        push(&mut basis, e);
    }
    let mut out = CMat::zeros(dim, dim);
    for (j, b) in basis.iter().enumerate() {
        out.set_column(j, b);
    }
    out
}

/// Completes orthonormal orbitals to a unitary 6×6 matrix whose first columns are
/// the given ones (up to the Gram–Schmidt clean-up).
pub fn complete_basis6(vectors: &[Vec6]) -> Mat6 {
    let dv: Vec<DVector<C64>> = vectors.iter().map(|v| DVector::from_column_slice(v.as_slice())).collect();
    to_mat6(&complete_orthonormal(&dv, 6))
}

/// Largest entrywise deviation of `u† u` from the identity.
pub fn unitarity_defect(u: &CMat) -> f64 {
    let g = u.adjoint() * u;
    let mut worst: f64 = 0.0;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// `exp(K)` for anti-Hermitian `K`, through the eigen-decomposition of `-iK`.
pub fn expm_antihermitian(k: &CMat) -> CMat {
    let h = k * C64::new(0.0, -1.0);
    let eig = hermitian_eig(&h).expect("-iK is Hermitian by construction");
    let n = k.nrows();
    let mut d = CMat::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = C64::from_polar(1.0, eig.values[i]);
    }
    &eig.vectors * d * eig.vectors.adjoint()
}

pub fn to_mat6(m: &CMat) -> Mat6 {
    Mat6::from_fn(|i, j| m[(i, j)])
}

pub fn to_dmat(m: &Mat6) -> CMat {
    DMatrix::from_fn(6, 6, |i, j| m[(i, j)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_unitary, rng_for};
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> CMat {
        let mut rng = rng_for(seed, 0);
        DMatrix::from_fn(rows, cols, |_, _| {
            C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
        })
    }

    #[test]
    fn identity_and_diagonal() {
        let e = hermitian_eig(&CMat::identity(6, 6)).unwrap();
        assert!(e.values.iter().all(|&x| (x - 1.0).abs() < 1e-15));
        let d = CMat::from_diagonal(&DVector::from_vec(
            [3.0, 2.0, 1.0, 0.0, -1.0, -2.0].iter().map(|&x| C64::new(x, 0.0)).collect(),
        ));
        let e = hermitian_eig(&d).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0, 0.0, -1.0, -2.0]);
        assert!((e.vectors - CMat::identity(6, 6)).norm() < 1e-15);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        for seed in 0..50 {
            let g = gaussian_matrix(6, 6, seed);
            let h = &g + g.adjoint();
            let e = hermitian_eig(&h).unwrap();
            let d = CMat::from_diagonal(&DVector::from_iterator(6, e.values.iter().map(|&x| C64::new(x, 0.0))));
            let rec = &e.vectors * d * e.vectors.adjoint();
            assert!((rec - &h).norm() < 1e-10);
            assert!(unitarity_defect(&e.vectors) < 1e-12);
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let g = gaussian_matrix(6, 6, 3);
        assert!(matches!(hermitian_eig(&g), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn degenerate_cluster_spans_reference_projector() {
        let u = to_dmat(&haar_unitary(&mut rng_for(11, 0)));
        let d = CMat::from_diagonal(&DVector::from_vec(
            [0.7, 0.7, 0.7, 0.3, 0.3, 0.3].iter().map(|&x| C64::new(x, 0.0)).collect(),
        ));
        let h = &u * d * u.adjoint();
        let e = hermitian_eig(&h).unwrap();
        let p_ref = u.columns(0, 3) * u.columns(0, 3).adjoint();
        let p = e.vectors.columns(0, 3) * e.vectors.columns(0, 3).adjoint();
        assert!((p - p_ref).norm() < 1e-9);
        assert!(unitarity_defect(&e.vectors) < 1e-12);
    }

    #[test]
    fn svd_matches_nalgebra() {
        for (seed, (r, c)) in [(3, 3), (3, 2), (2, 3), (2, 2), (3, 4), (1, 3)].iter().enumerate() {
            let a = gaussian_matrix(*r, *c, 100 + seed as u64);
            let ours = svd(&a);
            let theirs = a.clone().svd(false, false).singular_values;
            let mut theirs: Vec<f64> = theirs.iter().copied().collect();
            theirs.sort_by(|x, y| y.total_cmp(x));
            for (x, y) in ours.s.iter().zip(&theirs) {
                assert!((x - y).abs() < 1e-12, "{x} vs {y}");
            }
            let mut sig = CMat::zeros(*r, *c);
            for k in 0..ours.s.len() {
                sig[(k, k)] = C64::new(ours.s[k], 0.0);
            }
            assert!((&ours.u * sig * ours.v.adjoint() - &a).norm() < 1e-12);
            assert!(unitarity_defect(&ours.u) < 1e-12);
            assert!(unitarity_defect(&ours.v) < 1e-12);
        }
    }

    #[test]
    fn svd_rank_deficient_and_det1() {
        let u = gaussian_matrix(3, 1, 7);
        let v = gaussian_matrix(1, 3, 8);
        let a = &u * &v;
        let r = svd_det1(&a);
        assert!(r.s[1] < 1e-14 && r.s[2] < 1e-14);
        assert!((r.u.determinant() - C64::new(1.0, 0.0)).norm() < 1e-12);
        let mut sig = CMat::zeros(3, 3);
        for k in 0..3 {
            sig[(k, k)] = C64::new(r.s[k], 0.0);
        }
        assert!((&r.u * sig * r.v.adjoint() - &a).norm() < 1e-12);
        let zero = svd(&CMat::zeros(3, 3));
        assert!(zero.s.iter().all(|&x| x == 0.0));
        assert!(unitarity_defect(&zero.u) < 1e-15);
    }

    #[test]
    fn exponential_is_unitary() {
        let g = gaussian_matrix(6, 6, 5);
        let k = &g - g.adjoint();
        let e = expm_antihermitian(&(k * C64::new(0.3, 0.0)));
        assert!(unitarity_defect(&e) < 1e-13);
        let small = gaussian_matrix(6, 6, 6);
        let k = (&small - small.adjoint()) * C64::new(1e-6, 0.0);
        let e = expm_antihermitian(&k);
        let second = &k * &k * C64::new(0.5, 0.0);
        assert!((e - CMat::identity(6, 6) - &k - second).norm() < 1e-13);
    }
}
