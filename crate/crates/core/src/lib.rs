//! Three fermions in six orbitals.
//!
//! The state space ∧³ℂ⁶ is small enough that every construction here is exact
//! linear algebra: natural orbitals, the single-occupancy (Borland–Dennis)
//! expansion, canonical CIS/CID/lone-orbital forms, max-overlap approximations
//! within the Slater, low-rank, CIS and CID classes, the 3-qubit correspondence
//! and an invariant-based classifier.

pub mod canonical;
pub mod classify;
pub mod error;
pub mod exterior;
pub mod io;
pub mod linalg;
pub mod max_overlap;
pub mod qubit3;
pub mod random;
pub mod spectral;

pub use num_complex::Complex64 as C64;

/// 6×6 complex matrix; orbital bases are stored column-wise.
pub type Mat6 = nalgebra::SMatrix<C64, 6, 6>;
/// Orbital (vector of ℂ⁶).
pub type Vec6 = nalgebra::SVector<C64, 6>;
/// Dynamically sized complex matrix for the small kernels.
pub type CMat = nalgebra::DMatrix<C64>;

pub use canonical::{
    bd_expansion, cid_canonical, cis_canonical, geminal_canonical, lone_orbital, qubit_subspace, svd_reduce_singles,
    three_in_five, BDExpansion, PairedBasis,
};
pub use classify::{detect_types, gl6_class, invariants, Gl6Class, InvariantReport, TypeTag};
pub use error::{Error, ErrorCategory, Result};
pub use exterior::{decomposable_in_span, Bivector, CIExpansion, Multivector, OrbitalBasis, Shape, Trivector};
pub use max_overlap::{
    expansion_from_cis, expansion_from_slater, max_overlap_cid, max_overlap_cis, max_overlap_lowrank,
    max_overlap_slater, Certificate, LowRankSplit, OverlapResult, DEFAULT_RESTARTS,
};
pub use qubit3::{
    cayley_hyperdet, embed, embed_with, hyperdet_mod2, max_overlap_type4a, unembed, LocalUnitary, ThreeQubitState,
    Type4aResult,
};
pub use spectral::{
    check_representability, natural_spectrum, one_rdm, NaturalSpectrum, OneRDM, RepresentabilityReport,
};
