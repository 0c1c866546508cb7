use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use super::{permutation_sign, Bivector, Multivector};
use crate::error::{Error, Result};
use crate::{Mat6, Vec6, C64};

const fn build_triples() -> [[usize; 3]; 20] {
    let mut out = [[0usize; 3]; 20];
    let mut n = 0;
    let mut i = 0;
    while i < 6 {
        let mut j = i + 1;
        while j < 6 {
            let mut k = j + 1;
            while k < 6 {
                out[n] = [i, j, k];
                n += 1;
                k += 1;
            }
            j += 1;
        }
        i += 1;
    }
    out
}

/// The 20 sorted index triples, in the storage order of [`Trivector`].
pub const TRIPLES: [[usize; 3]; 20] = build_triples();

const fn build_lookup() -> [u8; 64] {
    let mut out = [u8::MAX; 64];
    let mut n = 0;
    while n < 20 {
        let t = TRIPLES[n];
        out[(1 << t[0]) | (1 << t[1]) | (1 << t[2])] = n as u8;
        n += 1;
    }
    out
}

const SLOT_OF_MASK: [u8; 64] = build_lookup();

/// Storage slot of the sorted triple with the given bit mask.
#[inline]
pub(crate) fn slot_of_mask(mask: u8) -> usize {
    SLOT_OF_MASK[mask as usize] as usize
}

/// Storage slot of a sorted triple.
#[inline]
pub fn slot(i: usize, j: usize, k: usize) -> usize {
    slot_of_mask((1u8 << i) | (1 << j) | (1 << k))
}

/// An element of ∧³ℂ⁶: 20 amplitudes on sorted triples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trivector {
    amps: [C64; 20],
}

impl Default for Trivector {
    fn default() -> Self {
        Trivector::zero()
    }
}

#[inline]
fn det3(m: &Mat6, r: [usize; 3], c: [usize; 3]) -> C64 {
    let a = |i: usize, j: usize| m[(r[i], c[j])];
    a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
        + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
}

impl Trivector {
    pub fn zero() -> Self {
        Trivector { amps: [C64::new(0.0, 0.0); 20] }
    }

    pub fn from_amps(amps: [C64; 20]) -> Self {
        Trivector { amps }
    }

    /// `e_i ∧ e_j ∧ e_k` for distinct indices in any order.
    pub fn basis(i: usize, j: usize, k: usize) -> Self {
        let mut t = Trivector::zero();
        let mut idx = [i, j, k];
        let s = permutation_sign(&mut idx);
        assert!(s != 0, "repeated orbital index");
        t.amps[slot(idx[0], idx[1], idx[2])] = C64::new(s as f64, 0.0);
        t
    }

    /// `u ∧ v ∧ w`.
    pub fn from_orbitals(u: &Vec6, v: &Vec6, w: &Vec6) -> Self {
        let mut m = Mat6::zeros();
        m.set_column(0, u);
        m.set_column(1, v);
        m.set_column(2, w);
        let mut t = Trivector::zero();
        for (n, tr) in TRIPLES.iter().enumerate() {
            t.amps[n] = det3(&m, *tr, [0, 1, 2]);
        }
        t
    }

    pub fn amps(&self) -> &[C64; 20] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [C64; 20] {
        &mut self.amps
    }

    /// Amplitude on `e_i ∧ e_j ∧ e_k`; unsorted indices pick up the permutation sign.
    pub fn get(&self, i: usize, j: usize, k: usize) -> C64 {
        let mut idx = [i, j, k];
        match permutation_sign(&mut idx) {
            0 => C64::new(0.0, 0.0),
            s => self.amps[slot(idx[0], idx[1], idx[2])] * s as f64,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            *self
        } else {
            *self * (1.0 / n)
        }
    }

    /// `⟨self, other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Trivector) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Image under the unitary `u`: `e_i ↦ column i of u`.
    pub fn change_basis(&self, u: &Mat6) -> Result<Trivector> {
        let defect = crate::linalg::unitarity_defect(&crate::linalg::to_dmat(u));
        if defect > 1e-12 {
            return Err(Error::NotUnitary(defect));
        }
        Ok(self.transform(u))
    }

    /// Same as [`Trivector::change_basis`] without the unitarity check; `u` may be
    /// any matrix (the map `x₁∧x₂∧x₃ ↦ ux₁∧ux₂∧ux₃`).
    pub fn transform(&self, u: &Mat6) -> Trivector {
        let mut out = Trivector::zero();
        for (j, tj) in TRIPLES.iter().enumerate() {
            let a = self.amps[j];
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            for (k, tk) in TRIPLES.iter().enumerate() {
                out.amps[k] += det3(u, *tk, *tj) * a;
            }
        }
        out
    }

    /// CI coefficients with respect to the orthonormal basis in the columns of `w`:
    /// entry `K` is `⟨w_K, self⟩`.
    pub fn coefficients_in(&self, w: &Mat6) -> Trivector {
        let mut out = Trivector::zero();
        for (k, tk) in TRIPLES.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (j, tj) in TRIPLES.iter().enumerate() {
                let a = self.amps[j];
                if a != C64::new(0.0, 0.0) {
                    acc += det3(w, *tj, *tk).conj() * a;
                }
            }
            out.amps[k] = acc;
        }
        out
    }

    /// Contraction by `v`, the adjoint of `β ↦ v ∧ β`.
    pub fn interior(&self, v: &Vec6) -> Bivector {
        let mut b = Bivector::zero(6);
        for j in 0..6 {
            for k in j + 1..6 {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..6 {
                    if i != j && i != k {
                        acc += v[i].conj() * self.get(i, j, k);
                    }
                }
                b.set(j, k, acc);
            }
        }
        b
    }

    /// `v ∧ β` for a vector and a bivector of ℂ⁶.
    pub fn wedge_vector(v: &Vec6, b: &Bivector) -> Trivector {
        assert_eq!(b.dim(), 6);
        let mut t = Trivector::zero();
        for (n, &[i, j, k]) in TRIPLES.iter().enumerate() {
            t.amps[n] = v[i] * b.get(j, k) - v[j] * b.get(i, k) + v[k] * b.get(i, j);
        }
        t
    }

    /// Action of the one-body operator `e_y ↦ e_x` (all other basis vectors to 0),
    /// extended as a derivation.
    pub(crate) fn excite(&self, x: usize, y: usize) -> Trivector {
        let mut out = Trivector::zero();
        let (bx, by) = (1u8 << x, 1u8 << y);
        for (n, t) in TRIPLES.iter().enumerate() {
            let a = self.amps[n];
            let mask = (1u8 << t[0]) | (1 << t[1]) | (1 << t[2]);
            if mask & by == 0 || a == C64::new(0.0, 0.0) {
                continue;
            }
            if x == y {
                out.amps[n] += a;
                continue;
            }
            if mask & bx != 0 {
                continue;
            }
            // Replace y by x in place, then count the transpositions needed to re-sort:
            // x moves past every remaining index strictly between x and y.
            let rest = mask & !by;
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            let between = (rest >> (lo + 1)) & ((1u8 << (hi - lo - 1)).wrapping_sub(1));
            let sign = if between.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            out.amps[slot_of_mask(rest | bx)] += a * sign;
        }
        out
    }

    pub fn to_multivector(&self) -> Multivector {
        Multivector::from_coeffs(6, 3, self.amps.to_vec()).expect("20 coefficients")
    }

    pub fn from_multivector(m: &Multivector) -> Result<Trivector> {
        if m.dim() != 6 || m.degree() != 3 {
            return Err(Error::DegreeMismatch(3, m.degree()));
        }
        let mut amps = [C64::new(0.0, 0.0); 20];
        amps.copy_from_slice(m.coeffs());
        Ok(Trivector { amps })
    }

    /// Number of 1RDM eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        let nat = crate::spectral::natural_spectrum(self);
        let r = nat.lambdas.iter().filter(|&&l| l > tol).count();
        debug_assert!(
            r != 4 || (self.norm_sqr() - 1.0).abs() > 1e-6,
            "a normalized trivector cannot have rank 4"
        );
        r
    }
}

impl Add for Trivector {
    type Output = Trivector;
    fn add(mut self, rhs: Trivector) -> Trivector {
        self += rhs;
        self
    }
}

impl AddAssign for Trivector {
    fn add_assign(&mut self, rhs: Trivector) {
        for (a, b) in self.amps.iter_mut().zip(rhs.amps.iter()) {
            *a += b;
        }
    }
}

impl Sub for Trivector {
    type Output = Trivector;
    fn sub(self, rhs: Trivector) -> Trivector {
        self + (-rhs)
    }
}

impl Neg for Trivector {
    type Output = Trivector;
    fn neg(self) -> Trivector {
        self * -1.0
    }
}

impl Mul<C64> for Trivector {
    type Output = Trivector;
    fn mul(mut self, s: C64) -> Trivector {
        for a in self.amps.iter_mut() {
            *a *= s;
        }
        self
    }
}

impl Mul<f64> for Trivector {
    type Output = Trivector;
    fn mul(self, s: f64) -> Trivector {
        self * C64::new(s, 0.0)
    }
}
