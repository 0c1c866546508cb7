//! U(6) invariants and class tags.
//!
//! Tags are class memberships and include degenerate forms where the class
//! definition allows them (a Slater determinant is also low-rank, CIS, CID and
//! ortho-W), except that ortho-GHZ and Type 3b require all of their diagram
//! coefficients to be nonzero, which is what separates those types from the
//! others. Thresholds: 1e-9 on squared moduli, 1e-8 on overlaps and on
//! occupation-number clustering.
//!
//! The invariants M3 and M7 have no formulas here and are not reported.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::canonical::bd_expansion;
use crate::error::Error;
use crate::exterior::{Trivector, TRIPLES};
use crate::max_overlap::{max_overlap_cid, DEFAULT_RESTARTS};
use crate::qubit3::hyperdet_mod2;
use crate::spectral::natural_spectrum;
use crate::Mat6;

const RANK_TOL: f64 = 1e-10;
const HYPERDET_TOL: f64 = 1e-9;
const OVERLAP_TOL: f64 = 1e-8;
const CLUSTER_TOL: f64 = 1e-8;
const STRUCTURE_TOL: f64 = 1e-9;
/// Occupation gaps above this make the natural orbitals well conditioned.
const WELL_SEPARATED: f64 = 1e-4;
/// Seed of the CID optimizer when the fast path does not decide.
const CID_SEED: u64 = 0;
const FIRST_STAGE: usize = 8;
const CLEAR_MISS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Gl6Class {
    Separable,
    Biseparable,
    W,
    GHZ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TypeTag {
    Type1,
    Type2a,
    Type2b,
    Type3a,
    Type3b,
    CIS,
    CID,
    OrthoW,
    OrthoGHZ,
    LowRank,
}

impl TypeTag {
    pub const ALL: [TypeTag; 10] = [
        TypeTag::Type1,
        TypeTag::Type2a,
        TypeTag::Type2b,
        TypeTag::Type3a,
        TypeTag::Type3b,
        TypeTag::CIS,
        TypeTag::CID,
        TypeTag::OrthoW,
        TypeTag::OrthoGHZ,
        TypeTag::LowRank,
    ];
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for TypeTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        TypeTag::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownTag(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantReport {
    /// `‖t‖²`.
    pub m1: f64,
    /// Elementary symmetric polynomials of `λ1λ6, λ2λ5, λ3λ4`.
    pub sym123: [f64; 3],
    pub hyperdet_mod2: f64,
    pub rank: usize,
    pub bd_class: Gl6Class,
    pub type_tags: BTreeSet<TypeTag>,
    /// Decisions taken close to a threshold.
    pub borderline: Vec<String>,
}

fn rank_of(lambdas: &[f64; 6], norm_sqr: f64) -> usize {
    lambdas.iter().filter(|&&l| l > RANK_TOL * norm_sqr.max(f64::MIN_POSITIVE)).count()
}

pub fn invariants(t: &Trivector) -> InvariantReport {
    let nat = natural_spectrum(t);
    let l = nat.lambdas;
    let p = [l[0] * l[5], l[1] * l[4], l[2] * l[3]];
    let sym123 = [p[0] + p[1] + p[2], p[0] * p[1] + p[0] * p[2] + p[1] * p[2], p[0] * p[1] * p[2]];
    let hd = hyperdet_mod2(t);
    let rank = rank_of(&l, t.norm_sqr());
    let mut borderline = Vec::new();
    if (hd - HYPERDET_TOL).abs() < 10.0 * HYPERDET_TOL && hd > 0.1 * HYPERDET_TOL {
        borderline.push(format!("hyperdet_mod2 {hd:.3e} is near the {HYPERDET_TOL:.0e} threshold"));
    }
    let type_tags = tags_with(t, &nat.lambdas, nat.orbitals.matrix(), rank, hd, &mut borderline);
    InvariantReport { m1: t.norm_sqr(), sym123, hyperdet_mod2: hd, rank, bd_class: class_of(rank, hd), type_tags, borderline }
}

fn class_of(rank: usize, hd: f64) -> Gl6Class {
    match rank {
        0..=3 => Gl6Class::Separable,
        4 | 5 => Gl6Class::Biseparable,
        _ if hd > HYPERDET_TOL => Gl6Class::GHZ,
        _ => Gl6Class::W,
    }
}

pub fn gl6_class(t: &Trivector) -> Gl6Class {
    let l = natural_spectrum(t).lambdas;
    class_of(rank_of(&l, t.norm_sqr()), hyperdet_mod2(t))
}

pub fn detect_types(t: &Trivector) -> BTreeSet<TypeTag> {
    invariants(t).type_tags
}

fn tags_with(
    t: &Trivector,
    lambdas: &[f64; 6],
    orbitals: &Mat6,
    rank: usize,
    hd: f64,
    borderline: &mut Vec<String>,
) -> BTreeSet<TypeTag> {
    use TypeTag::*;
    let mut tags = BTreeSet::new();
    if rank <= 3 {
        tags.insert(Type1);
    }
    if rank <= 5 {
        tags.extend([Type2a, LowRank]);
    }
    let cis = hd <= HYPERDET_TOL;
    if cis {
        tags.insert(CIS);
    }
    let ghz = rank == 6 && is_ortho_ghz(t, lambdas, orbitals);
    if ghz {
        tags.extend([Type2b, OrthoGHZ]);
    }
    // A CID state with the spectrum (a, a, a, c, c, c) of `A f1f2f3 + C g1g2g3`
    // has |Det|² = 2(a − c/2)c³ against a²c², so only a = c qualifies.
    let cid = if ghz {
        let n = t.norm_sqr();
        lambdas.iter().all(|l| (l - 0.5 * n).abs() <= CLUSTER_TOL * n)
    } else {
        is_cid(t, lambdas, borderline)
    };
    if cid {
        tags.insert(CID);
    }
    if cis && cid {
        tags.extend([Type3a, OrthoW]);
    }
    if rank == 6 && !cis && !ghz && is_type3b(t, lambdas, orbitals) {
        tags.insert(Type3b);
    }
    tags
}

/// Weight of `t` outside the listed configurations of frame `w`, relative.
fn outside(t: &Trivector, w: &Mat6, keep: &[[usize; 3]]) -> f64 {
    let c = t.coefficients_in(w);
    let out: f64 = TRIPLES.iter().zip(c.amps()).filter(|(tr, _)| !keep.contains(tr)).map(|(_, a)| a.norm_sqr()).sum();
    out / t.norm_sqr().max(f64::MIN_POSITIVE)
}

fn frame_of(orbitals: &Mat6, order: [usize; 6]) -> Mat6 {
    Mat6::from_fn(|i, j| orbitals[(i, order[j])])
}

/// `A·f1f2f3 + C·g1g2g3`. All occupations ½ forces this (three qubits with
/// maximally mixed one-qubit states are locally GHZ); otherwise the
/// occupations take two values `x, 1−x`, and `t` must lie in `∧³P ⊕ ∧³Q` for
/// the two eigenspaces.
fn is_ortho_ghz(t: &Trivector, l: &[f64; 6], orbitals: &Mat6) -> bool {
    let n = t.norm_sqr();
    if l.iter().all(|&x| (x - 0.5 * n).abs() < CLUSTER_TOL) {
        return true;
    }
    let upper_equal = (l[0] - l[2]).abs() < CLUSTER_TOL && (l[3] - l[5]).abs() < CLUSTER_TOL;
    upper_equal && outside(t, &frame_of(orbitals, [0, 1, 2, 3, 4, 5]), &[[0, 1, 2], [3, 4, 5]]) < STRUCTURE_TOL
}

/// `A·f1f2f3 + B·f3g1g2 + C·g1g2g3`: two of the three occupation pairs coincide
/// (`P = span{f1,f2}`, `Q = span{g1,g2}`), and with `S` the span of the
/// remaining pair, `t` lies in `∧²P∧S ⊕ ∧²Q∧S`.
fn is_type3b(t: &Trivector, l: &[f64; 6], orbitals: &Mat6) -> bool {
    for (j, k, i) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let same = (l[j] - l[k]).abs() < CLUSTER_TOL;
        let distinct = (l[i] - l[j]).abs() >= CLUSTER_TOL && (l[j] - l[5 - j]).abs() >= CLUSTER_TOL;
        if same && distinct {
            let w = frame_of(orbitals, [j, k, 5 - j, 5 - k, i, 5 - i]);
            return outside(t, &w, &[[0, 1, 4], [0, 1, 5], [2, 3, 4], [2, 3, 5]]) < STRUCTURE_TOL;
        }
    }
    false
}

/// With well-separated occupations the natural orbitals are unique up to
/// phases, so `t` is CID exactly when its single-occupancy expansion lives on
/// one parity class of qubit strings. Otherwise the optimizer decides.
fn is_cid(t: &Trivector, l: &[f64; 6], borderline: &mut Vec<String>) -> bool {
    let gap = (0..5).map(|i| l[i] - l[i + 1]).fold(f64::INFINITY, f64::min);
    let n = t.norm_sqr();
    if gap > WELL_SEPARATED * n {
        let bd = bd_expansion(t);
        let (mut even, mut odd) = (0.0, 0.0);
        for term in &bd.expansion.terms {
            let ones = term.label.bytes().filter(|&b| b == b'1').count();
            if ones % 2 == 0 {
                even += term.coeff.norm_sqr();
            } else {
                odd += term.coeff.norm_sqr();
            }
        }
        let minority = even.min(odd) / n;
        if minority < STRUCTURE_TOL {
            return true;
        }
        if minority > 1e3 * STRUCTURE_TOL {
            return false;
        }
    }
    // The first restarts of a run do not depend on its length, so a short run
    // that clearly misses settles the question.
    let short = max_overlap_cid(t, FIRST_STAGE, CID_SEED);
    if 1.0 - short.overlap * short.overlap / n > CLEAR_MISS {
        return false;
    }
    let r = max_overlap_cid(t, DEFAULT_RESTARTS, CID_SEED);
    let s2 = r.overlap * r.overlap / n;
    if (s2 - (1.0 - OVERLAP_TOL)).abs() < OVERLAP_TOL {
        borderline.push(format!("CID overlap² {s2:.12} is near the threshold"));
    }
    s2 > 1.0 - OVERLAP_TOL
}
