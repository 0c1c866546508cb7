//! Max-overlap approximations within the Slater, low-rank, CIS and CID classes,
//! and the five-term expansions they induce.
//!
//! Each class is a union over frames `W` of a span of configurations, so the
//! best approximant in a fixed frame is the normalized projection and the
//! optimization runs over frames only (see [`ascent`]). Restart 0 starts from
//! the natural orbitals; restart `r > 0` from a Haar frame drawn from
//! `rng_for(seed, r)`. The best result wins, ties going to the lower index.

mod ascent;
mod lowrank;
mod slater;
mod subspace;

pub(crate) use ascent::FrameProblem;
pub use lowrank::{max_overlap_lowrank, LowRankSplit};
pub use slater::{expansion_from_slater, max_overlap_slater};
pub use subspace::{expansion_from_cis, max_overlap_cid, max_overlap_cis};

use crate::exterior::{OrbitalBasis, Trivector};
use crate::random::{haar_unitary, rng_for, Rng};
use crate::{Mat6, Vec6};

/// Restart count used when the caller has no preference.
pub const DEFAULT_RESTARTS: usize = 32;

/// Stop restarting once the squared overlap is this close to `‖t‖²`.
const EXACT_TOL: f64 = 1e-14;

/// Named residuals and flags attached to an optimum.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Certificate {
    pub residuals: Vec<(String, f64)>,
    pub flags: Vec<String>,
}

impl Certificate {
    pub(crate) fn push(&mut self, name: &str, value: f64) {
        self.residuals.push((name.to_string(), value));
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.residuals.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|(_, v)| *v).fold(0.0, f64::max)
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.iter().any(|f| f == flag)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapResult {
    /// Unit norm, phased so that `⟨approximant, t⟩ = overlap`.
    pub approximant: Trivector,
    pub overlap: f64,
    pub certificate: Certificate,
    pub restarts_used: usize,
    /// Frame of the optimum. For the Slater, CIS and CID classes the first
    /// three columns span the reference space.
    pub frame: OrbitalBasis,
    /// Only for the low-rank class.
    pub split: Option<LowRankSplit>,
}

impl OverlapResult {
    pub fn reference_space(&self) -> [Vec6; 3] {
        [self.frame.column(0), self.frame.column(1), self.frame.column(2)]
    }
}

/// Normalized projection of `t` onto the kept configurations of frame `w`.
pub(crate) fn approximant(problem: &FrameProblem, w: &Mat6) -> (Trivector, f64) {
    let p = problem.kept_coefficients(w).transform(w);
    let n = p.norm();
    if n == 0.0 {
        (Trivector::basis(0, 1, 2).transform(w), 0.0)
    } else {
        (p * (1.0 / n), n)
    }
}

/// Runs `run` from the informed start and then from seeded Haar frames.
/// Returns the best frame, its objective and the number of restarts run.
fn multistart(
    t: &Trivector,
    informed: &Mat6,
    restarts: usize,
    seed: u64,
    run: impl FnMut(&Mat6) -> (Mat6, f64),
) -> (Mat6, f64, usize) {
    multistart_with(t, informed, restarts, seed, haar_unitary, run)
}

/// [`multistart`] with a custom distribution of random starting frames.
pub(crate) fn multistart_with(
    t: &Trivector,
    informed: &Mat6,
    restarts: usize,
    seed: u64,
    draw: impl Fn(&mut Rng) -> Mat6,
    mut run: impl FnMut(&Mat6) -> (Mat6, f64),
) -> (Mat6, f64, usize) {
    let target = t.norm_sqr();
    let mut best: Option<(Mat6, f64)> = None;
    let mut used = 0;
    for r in 0..restarts.max(1) {
        let w0 = if r == 0 { *informed } else { draw(&mut rng_for(seed, r as u64)) };
        let (w, f) = run(&w0);
        used = r + 1;
        if best.as_ref().map_or(true, |b| f > b.1) {
            best = Some((w, f));
        }
        if best.as_ref().is_some_and(|b| b.1 >= target * (1.0 - EXACT_TOL)) {
            break;
        }
    }
    let (w, f) = best.expect("at least one restart");
    (w, f, used)
}

const FRAME_LABELS: [&str; 6] = ["f1", "f2", "f3", "g1", "g2", "g3"];

fn frame_basis(w: &Mat6) -> OrbitalBasis {
    OrbitalBasis::with_labels(*w, FRAME_LABELS).expect("optimizer frames stay unitary")
}
