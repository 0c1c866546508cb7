use nalgebra::DVector;

use super::{blades, Multivector};
use crate::error::{Error, Result};
use crate::{CMat, Vec6, C64};

/// An element of ∧²ℂᵈ, amplitudes on sorted pairs `(i, j)`, `i < j < d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bivector {
    dim: usize,
    amps: Vec<C64>,
}

fn pair_slot(dim: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < dim);
    // Pairs (0,1),(0,2),...,(0,d-1),(1,2),...
    i * (2 * dim - i - 1) / 2 + (j - i - 1)
}

impl Bivector {
    pub fn zero(dim: usize) -> Self {
        assert!((2..=6).contains(&dim));
        Bivector { dim, amps: vec![C64::new(0.0, 0.0); dim * (dim - 1) / 2] }
    }

    pub fn from_amps(dim: usize, amps: Vec<C64>) -> Result<Self> {
        let n = dim * (dim - 1) / 2;
        if amps.len() != n {
            return Err(Error::DimensionMismatch(n, amps.len()));
        }
        Ok(Bivector { dim, amps })
    }

    /// `e_i ∧ e_j` (any order; the sign is applied).
    pub fn basis(dim: usize, i: usize, j: usize) -> Self {
        let mut b = Bivector::zero(dim);
        assert!(i != j);
        if i < j {
            b.set(i, j, C64::new(1.0, 0.0));
        } else {
            b.set(j, i, C64::new(-1.0, 0.0));
        }
        b
    }

    /// `u ∧ v` for vectors of the same length.
    pub fn from_slices(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len());
        let mut b = Bivector::zero(u.len());
        for i in 0..u.len() {
            for j in i + 1..u.len() {
                b.set(i, j, u[i] * v[j] - u[j] * v[i]);
            }
        }
        b
    }

    pub fn from_vectors(u: &Vec6, v: &Vec6) -> Self {
        Bivector::from_slices(u.as_slice(), v.as_slice())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    /// Amplitude on `e_i ∧ e_j`, antisymmetric in `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> C64 {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.amps[pair_slot(self.dim, i, j)],
            Greater => -self.amps[pair_slot(self.dim, j, i)],
            Equal => C64::new(0.0, 0.0),
        }
    }

    /// Sets the amplitude of the sorted pair `i < j`.
    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        let s = pair_slot(self.dim, i, j);
        self.amps[s] = value;
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &Bivector) -> Result<C64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn scale(&self, s: C64) -> Bivector {
        Bivector { dim: self.dim, amps: self.amps.iter().map(|a| a * s).collect() }
    }

    pub fn add(&self, other: &Bivector) -> Result<Bivector> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(Bivector { dim: self.dim, amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Bivector) -> Result<Bivector> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// The skew-symmetric `d × d` coefficient matrix `G` with `G[i][j] = b_ij`.
    pub fn skew_matrix(&self) -> CMat {
        CMat::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }

    pub fn from_skew_matrix(g: &CMat) -> Bivector {
        let mut b = Bivector::zero(g.nrows());
        for i in 0..g.nrows() {
            for j in i + 1..g.nrows() {
                b.set(i, j, g[(i, j)]);
            }
        }
        b
    }

    pub fn to_multivector(&self) -> Multivector {
        let order = blades(self.dim, 2);
        let coeffs = order
            .iter()
            .map(|&m| {
                let i = m.trailing_zeros() as usize;
                let j = 7 - (m.leading_zeros() as usize);
                self.get(i, j)
            })
            .collect();
        Multivector::from_coeffs(self.dim, 2, coeffs).expect("pair count")
    }

    /// `b ∧ b` in ∧⁴ℂᵈ.
    pub fn wedge_self(&self) -> Multivector {
        let m = self.to_multivector();
        m.wedge(&m).expect("4 <= d for d >= 4")
    }

    /// True iff `‖b∧b‖ ≤ tol·‖b‖²`; the zero bivector counts as decomposable.
    pub fn is_decomposable(&self, tol: f64) -> bool {
        if self.dim < 4 {
            return true;
        }
        let n2 = self.norm().powi(2);
        self.wedge_self().norm() <= tol * n2
    }

    /// Contraction by `v` (adjoint of `u ↦ v ∧ u`), a vector of ℂᵈ.
    pub fn interior(&self, v: &[C64]) -> DVector<C64> {
        DVector::from_fn(self.dim, |k, _| (0..self.dim).map(|j| v[j].conj() * self.get(j, k)).sum())
    }
}

/// The single ∧⁴ℂ⁴ coefficient of `a ∧ b`.
fn top_coefficient(a: &Bivector, b: &Bivector) -> C64 {
    let w = a.to_multivector().wedge(&b.to_multivector()).expect("dimension 4");
    w.coeffs()[0]
}

/// A nonzero decomposable element `z·g1 + g2` of the span of two bivectors of ℂ⁴
/// (or `g1` itself when it is already decomposable).
///
/// Writes `g1∧g1 = A`, `g1∧g2 = B`, `g2∧g2 = C` (coefficients of `e1∧e2∧e3∧e4`)
/// and solves `A z² + 2B z + C = 0`, taking the root of smaller modulus
/// (ties: the one with nonnegative real part).
pub fn decomposable_in_span(g1: &Bivector, g2: &Bivector) -> Result<Bivector> {
    if g1.dim() != 4 || g2.dim() != 4 {
        return Err(Error::DimensionMismatch(4, if g1.dim() != 4 { g1.dim() } else { g2.dim() }));
    }
    let (n1, n2) = (g1.norm(), g2.norm());
    let cross = g1.inner(g2)?.norm();
    let gram = n1 * n1 * n2 * n2 - cross * cross;
    if n1 == 0.0 || n2 == 0.0 || gram <= 1e-12 * n1 * n1 * n2 * n2 {
        return Err(Error::LinearlyDependent);
    }
    let a = top_coefficient(g1, g1);
    if a.norm() <= super::DEFAULT_TOL * n1 * n1 {
        return Ok(g1.clone());
    }
    let b = top_coefficient(g1, g2);
    let c = top_coefficient(g2, g2);
    let disc = (b * b - a * c).sqrt();
    // Stable pair of roots: q = -(B ± √disc) with the sign that avoids cancellation.
    let q = if (b + disc).norm() >= (b - disc).norm() { -(b + disc) } else { -(b - disc) };
    let z = if q.norm() == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        let z1 = q / a;
        let z2 = c / q;
        let (m1, m2) = (z1.norm(), z2.norm());
        if (m1 - m2).abs() <= 1e-12 * m1.max(m2) {
            if z1.re >= 0.0 {
                z1
            } else {
                z2
            }
        } else if m1 < m2 {
            z1
        } else {
            z2
        }
    };
    Ok(g1.scale(z).add(g2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng_for;
    use rand_distr::{Distribution, StandardNormal};

    fn gauss(rng: &mut impl rand::Rng, n: usize) -> Vec<C64> {
        (0..n).map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))).collect()
    }

    #[test]
    fn decomposability_examples() {
        assert!(Bivector::basis(6, 0, 1).is_decomposable(1e-10));
        let s = Bivector::basis(6, 0, 1).add(&Bivector::basis(6, 2, 3)).unwrap().scale(C64::new(0.5f64.sqrt(), 0.0));
        assert!(!s.is_decomposable(1e-10));
        assert!(Bivector::zero(6).is_decomposable(1e-10));
        let mut rng = rng_for(2, 0);
        for _ in 0..50 {
            let (u, v) = (gauss(&mut rng, 6), gauss(&mut rng, 6));
            assert!(Bivector::from_slices(&u, &v).is_decomposable(1e-10));
        }
    }

    #[test]
    fn two_term_schmidt_is_not_decomposable() {
        let mut rng = rng_for(3, 0);
        for _ in 0..50 {
            let u = crate::random::haar_unitary(&mut rng);
            let col = |i: usize| -> Vec6 { u.column(i).into() };
            let a1: f64 = 0.1 + 0.9 * rand::Rng::gen::<f64>(&mut rng);
            let a2: f64 = 0.1 + 0.9 * rand::Rng::gen::<f64>(&mut rng);
            let b = Bivector::from_vectors(&col(0), &col(1))
                .scale(C64::new(a1, 0.0))
                .add(&Bivector::from_vectors(&col(2), &col(3)).scale(C64::new(a2, 0.0)))
                .unwrap();
            assert!(!b.is_decomposable(1e-10));
        }
    }

    #[test]
    fn get_is_antisymmetric() {
        let b = Bivector::from_amps(5, (0..10).map(|k| C64::new(k as f64, 0.0)).collect()).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(b.get(i, j), -b.get(j, i));
            }
        }
        assert_eq!(b.get(3, 4), C64::new(9.0, 0.0));
        assert_eq!(Bivector::from_skew_matrix(&b.skew_matrix()), b);
    }

    #[test]
    fn span_early_exit() {
        let g1 = Bivector::basis(4, 0, 1);
        let g2 = Bivector::basis(4, 1, 2).add(&Bivector::basis(4, 0, 3)).unwrap();
        assert_eq!(decomposable_in_span(&g1, &g2).unwrap(), g1);
    }

    #[test]
    fn span_symmetric_cancellation() {
        let g1 = Bivector::basis(4, 0, 1).add(&Bivector::basis(4, 2, 3)).unwrap();
        let g2 = Bivector::basis(4, 0, 1).sub(&Bivector::basis(4, 2, 3)).unwrap();
        let r = decomposable_in_span(&g1, &g2).unwrap();
        assert!((r.get(0, 1) - C64::new(2.0, 0.0)).norm() < 1e-14);
        assert!(r.get(2, 3).norm() < 1e-14);
    }

    #[test]
    fn span_root_squares_to_zero() {
        let g1 = Bivector::basis(4, 0, 1).add(&Bivector::basis(4, 2, 3)).unwrap();
        let g2 = Bivector::basis(4, 0, 2);
        let r = decomposable_in_span(&g1, &g2).unwrap();
        assert!(r.wedge_self().norm() < 1e-12);
        assert!(r.norm() > 0.5);
        let mut rng = rng_for(4, 0);
        for _ in 0..50 {
            let g1 = Bivector::from_amps(4, gauss(&mut rng, 6)).unwrap();
            let g2 = Bivector::from_amps(4, gauss(&mut rng, 6)).unwrap();
            let r = decomposable_in_span(&g1, &g2).unwrap();
            assert!(r.is_decomposable(1e-10), "{}", r.wedge_self().norm());
        }
    }

    #[test]
    fn span_rejects_dependent_inputs() {
        let g1 = Bivector::basis(4, 0, 1).add(&Bivector::basis(4, 2, 3)).unwrap();
        let g2 = g1.scale(C64::new(0.0, 2.0));
        assert_eq!(decomposable_in_span(&g1, &g2), Err(Error::LinearlyDependent));
    }
}
