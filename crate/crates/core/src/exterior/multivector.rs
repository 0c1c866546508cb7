use super::{blades, merge_sign};
use crate::error::{Error, Result};
use crate::C64;

/// Homogeneous element of ∧ᵖℂᵈ, coefficients in the order of [`blades`].
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector {
    dim: usize,
    degree: usize,
    coeffs: Vec<C64>,
}

impl Multivector {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= 6 && degree <= dim, "unsupported space ∧^{degree} C^{dim}");
        let n = blades(dim, degree).len();
        Multivector { dim, degree, coeffs: vec![C64::new(0.0, 0.0); n] }
    }

    pub fn from_coeffs(dim: usize, degree: usize, coeffs: Vec<C64>) -> Result<Self> {
        let n = blades(dim, degree).len();
        if coeffs.len() != n {
            return Err(Error::DimensionMismatch(n, coeffs.len()));
        }
        Ok(Multivector { dim, degree, coeffs })
    }

    /// A vector of ℂᵈ as a degree-1 element.
    pub fn vector(v: &[C64]) -> Self {
        Multivector { dim: v.len(), degree: 1, coeffs: v.to_vec() }
    }

    /// The blade `e_{i1} ∧ … ∧ e_{ip}` (indices in any order; the sign is applied).
    pub fn blade(dim: usize, indices: &[usize]) -> Self {
        let mut m = Multivector::zero(dim, indices.len());
        let mut idx = indices.to_vec();
        let sign = super::permutation_sign(&mut idx);
        if sign != 0 {
            let mask = idx.iter().fold(0u8, |m, &i| m | (1 << i));
            let pos = m.position(mask).expect("indices within dimension");
            m.coeffs[pos] = C64::new(sign as f64, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    fn position(&self, mask: u8) -> Option<usize> {
        blades(self.dim, self.degree).iter().position(|&b| b == mask)
    }

    /// Coefficient on the blade with the given sorted indices.
    pub fn get(&self, indices: &[usize]) -> C64 {
        let mut idx = indices.to_vec();
        let sign = super::permutation_sign(&mut idx);
        if sign == 0 {
            return C64::new(0.0, 0.0);
        }
        let mask = idx.iter().fold(0u8, |m, &i| m | (1 << i));
        self.position(mask).map_or(C64::new(0.0, 0.0), |p| self.coeffs[p] * sign as f64)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn wedge(&self, other: &Multivector) -> Result<Multivector> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let (p, q) = (self.degree, other.degree);
        if p + q > self.dim {
            return Err(Error::DegreeOverflow { p, q, dim: self.dim });
        }
        let out_blades = blades(self.dim, p + q);
        let mut out = vec![C64::new(0.0, 0.0); out_blades.len()];
        let (ba, bb) = (blades(self.dim, p), blades(self.dim, q));
        for (ia, &ma) in ba.iter().enumerate() {
            if self.coeffs[ia] == C64::new(0.0, 0.0) {
                continue;
            }
            for (ib, &mb) in bb.iter().enumerate() {
                let s = merge_sign(ma, mb);
                if s == 0 {
                    continue;
                }
                let pos = out_blades.iter().position(|&m| m == ma | mb).unwrap();
                out[pos] += self.coeffs[ia] * other.coeffs[ib] * s as f64;
            }
        }
        Ok(Multivector { dim: self.dim, degree: p + q, coeffs: out })
    }

    /// `⟨self, other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Multivector) -> Result<C64> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn scale(&self, s: C64) -> Multivector {
        Multivector { dim: self.dim, degree: self.degree, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, other: &Multivector) -> Result<Multivector> {
        if self.degree != other.degree || self.dim != other.dim {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        Ok(Multivector {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> Multivector {
        Multivector::blade(6, &[i])
    }

    #[test]
    fn basic_products() {
        assert_eq!(e(0).wedge(&e(0)).unwrap().norm(), 0.0);
        let e23 = e(1).wedge(&e(2)).unwrap();
        let t = e(0).wedge(&e23).unwrap();
        assert_eq!(t.get(&[0, 1, 2]), C64::new(1.0, 0.0));
        let t = e(1).wedge(&e(0)).unwrap().wedge(&e(2)).unwrap();
        assert_eq!(t.get(&[0, 1, 2]), C64::new(-1.0, 0.0));
        assert_eq!(t.get(&[1, 0, 2]), C64::new(1.0, 0.0));
    }

    #[test]
    fn graded_commutativity() {
        let a = Multivector::from_coeffs(6, 2, (0..15).map(|k| C64::new(k as f64, 1.0 - k as f64)).collect()).unwrap();
        let b = Multivector::from_coeffs(6, 1, (0..6).map(|k| C64::new(0.5 * k as f64, 2.0)).collect()).unwrap();
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        assert!(ab.add(&ba.scale(C64::new(-1.0, 0.0))).unwrap().norm() < 1e-12);
        let c = Multivector::from_coeffs(6, 1, (0..6).map(|k| C64::new(1.0, k as f64)).collect()).unwrap();
        let bc = b.wedge(&c).unwrap();
        let cb = c.wedge(&b).unwrap();
        assert!(bc.add(&cb).unwrap().norm() < 1e-12);
    }

    #[test]
    fn errors() {
        let a = Multivector::blade(6, &[0, 1, 2, 3]);
        let b = Multivector::blade(6, &[4, 5, 0]);
        assert!(matches!(a.wedge(&b), Err(Error::DegreeOverflow { .. })));
        assert!(matches!(a.inner(&b), Err(Error::DegreeMismatch(4, 3))));
    }
}
