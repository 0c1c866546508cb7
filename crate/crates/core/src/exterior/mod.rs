//! Exterior algebra over ℂ⁶ (and ℂ⁴, ℂ⁵ for bivectors).
//!
//! Orbital indices are 0-based in the API. Blades are stored on strictly
//! increasing index tuples; every sign that comes from reordering indices goes
//! through [`merge_sign`] or [`permutation_sign`].

mod basis;
mod bivector;
mod multivector;
mod trivector;

pub use basis::{CIExpansion, OrbitalBasis, Shape};
pub use bivector::{decomposable_in_span, Bivector};
pub use multivector::Multivector;
pub use trivector::{slot, Trivector, TRIPLES};

/// Default tolerance for rank and decomposability predicates.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Sign of the permutation that sorts the concatenation of the disjoint sorted
/// index sets `a` then `b` (given as bit masks), or 0 when they overlap.
pub fn merge_sign(a: u8, b: u8) -> i8 {
    if a & b != 0 {
        return 0;
    }
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inversions += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sorts `idx` in place and returns the sign of the sorting permutation, or 0 when
/// an index repeats.
pub fn permutation_sign(idx: &mut [usize]) -> i8 {
    let mut sign = 1i8;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        sign
    }
}

/// Bit masks of the `degree`-subsets of `0..dim`, in lexicographic order of the
/// sorted index tuples.
pub fn blades(dim: usize, degree: usize) -> Vec<u8> {
    fn rec(start: usize, dim: usize, left: usize, mask: u8, out: &mut Vec<u8>) {
        if left == 0 {
            out.push(mask);
            return;
        }
        for i in start..dim {
            rec(i + 1, dim, left - 1, mask | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    if degree <= dim {
        rec(0, dim, degree, 0, &mut out);
    }
    out
}

/// Sorted indices of a mask.
pub fn mask_indices(mask: u8) -> Vec<usize> {
    (0..8).filter(|i| mask & (1 << i) != 0).collect()
}
