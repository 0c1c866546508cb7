//! Ascent over orbital frames.
//!
//! The objective is `f(W) = Σ_{K kept} |⟨W e_K, t⟩|²` for a unitary frame `W`.
//! Moves are `W ← W·exp(K(d))` with `K(d)` anti-Hermitian and built from the
//! rotations that mix one column pair `(a, b)`: two real parameters per pair.
//! Pairs inside the kept structure's symmetry group are left out, so the
//! Hessian is nondegenerate at a generic optimum and a Newton step converges
//! quadratically. Far from an optimum, or where the Hessian is not negative
//! definite, a backtracking line search along the gradient takes over.

use nalgebra::{DMatrix, DVector};

use crate::exterior::{Trivector, TRIPLES};
use crate::linalg::{complete_basis6, expm_antihermitian, to_mat6};
use crate::{CMat, Mat6, Vec6, C64};

const MAX_ITERS: usize = 400;
const GRAD_TOL: f64 = 1e-12;
const INITIAL_STEP: f64 = 0.1;
const SHRINK: f64 = 0.5;
const MAX_EVALS: usize = 40;
const MAX_NEWTON_STEP: f64 = 0.5;
/// Tolerated decrease of `f` per step (rounding).
pub(crate) const MONOTONE_TOL: f64 = 1e-14;

pub(crate) struct FrameProblem {
    target: Trivector,
    kept: Vec<usize>,
    pairs: Vec<(usize, usize)>,
}

impl FrameProblem {
    pub fn new(target: &Trivector, kept: impl Fn(&[usize; 3]) -> bool, pairs: Vec<(usize, usize)>) -> Self {
        let kept = TRIPLES.iter().enumerate().filter(|(_, tr)| kept(tr)).map(|(n, _)| n).collect();
        FrameProblem { target: *target, kept, pairs }
    }

    /// Generators mixing the first three columns with the last three.
    pub fn mixing_pairs() -> Vec<(usize, usize)> {
        (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect()
    }

    fn dim(&self) -> usize {
        2 * self.pairs.len()
    }

    /// Derivation of generator `g` applied to `v`.
    fn apply(&self, g: usize, v: &Trivector) -> Trivector {
        let (a, b) = self.pairs[g / 2];
        if g % 2 == 0 {
            v.excite(b, a) - v.excite(a, b)
        } else {
            (v.excite(b, a) + v.excite(a, b)) * C64::new(0.0, 1.0)
        }
    }

    fn generator(&self, d: &DVector<f64>) -> CMat {
        let mut k = CMat::zeros(6, 6);
        for (p, &(a, b)) in self.pairs.iter().enumerate() {
            let (re, im) = (d[2 * p], d[2 * p + 1]);
            k[(b, a)] += C64::new(re, im);
            k[(a, b)] += C64::new(-re, im);
        }
        k
    }

    pub fn retract(&self, w: &Mat6, d: &DVector<f64>) -> Mat6 {
        w * to_mat6(&expm_antihermitian(&self.generator(d)))
    }

    /// The kept coefficients of the target in frame `w`, other slots zeroed.
    pub fn kept_coefficients(&self, w: &Mat6) -> Trivector {
        let c = self.target.coefficients_in(w);
        let mut out = Trivector::zero();
        for &n in &self.kept {
            out.amps_mut()[n] = c.amps()[n];
        }
        out
    }

    pub fn value(&self, w: &Mat6) -> f64 {
        self.kept_coefficients(w).norm_sqr()
    }

    fn kept_inner(&self, x: &Trivector, y: &Trivector) -> C64 {
        self.kept.iter().map(|&n| x.amps()[n].conj() * y.amps()[n]).sum()
    }

    fn gradient_from(&self, c: &Trivector) -> (Vec<Trivector>, DVector<f64>) {
        let dc: Vec<Trivector> = (0..self.dim()).map(|g| -self.apply(g, c)).collect();
        let grad = DVector::from_fn(self.dim(), |g, _| 2.0 * self.kept_inner(c, &dc[g]).re);
        (dc, grad)
    }

    pub fn gradient(&self, w: &Mat6) -> (f64, DVector<f64>) {
        let c = self.target.coefficients_in(w);
        let f = self.kept_inner(&c, &c).re;
        (f, self.gradient_from(&c).1)
    }

    /// Value, gradient and Hessian in the coordinates `d` of `W·exp(K(d))` at `d = 0`.
    pub fn derivatives(&self, w: &Mat6) -> (f64, DVector<f64>, DMatrix<f64>) {
        let c = self.target.coefficients_in(w);
        let f = self.kept_inner(&c, &c).re;
        let (dc, grad) = self.gradient_from(&c);
        let n = self.dim();
        let mut h = DMatrix::zeros(n, n);
        for g in 0..n {
            for k in g..n {
                // ∂g∂k c = ½(K̂g K̂k + K̂k K̂g) c, and K̂k c = −dc[k].
                let second = (self.apply(g, &dc[k]) + self.apply(k, &dc[g])) * -0.5;
                let v = 2.0 * (self.kept_inner(&dc[g], &dc[k]) + self.kept_inner(&c, &second)).re;
                h[(g, k)] = v;
                h[(k, g)] = v;
            }
        }
        (f, grad, h)
    }

    /// Ascends from `w0`; returns the final frame and objective.
    pub fn ascend(&self, w0: &Mat6) -> (Mat6, f64) {
        let mut w = *w0;
        let mut f = self.value(&w);
        for _ in 0..MAX_ITERS {
            let (_, grad, hess) = self.derivatives(&w);
            let gnorm = grad.norm();
            if gnorm <= GRAD_TOL {
                break;
            }
            if let Some((wn, fnew)) = self.newton_step(&w, f, &grad, gnorm, hess) {
                w = wn;
                f = fnew;
                continue;
            }
            match self.line_search(&w, f, &(&grad / gnorm)) {
                Some((wn, fnew)) => {
                    w = wn;
                    f = fnew;
                }
                None => break,
            }
        }
        // Undo the drift from repeated retractions.
        let cols: Vec<Vec6> = (0..6).map(|i| w.column(i).into()).collect();
        let w = complete_basis6(&cols);
        (w, self.value(&w))
    }

    fn newton_step(
        &self,
        w: &Mat6,
        f: f64,
        grad: &DVector<f64>,
        gnorm: f64,
        hess: DMatrix<f64>,
    ) -> Option<(Mat6, f64)> {
        let eig = hess.symmetric_eigen();
        let scale = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);
        let mut delta = DVector::zeros(grad.len());
        let mut used = 0;
        for (k, &mu) in eig.eigenvalues.iter().enumerate() {
            // Flat or convex directions are left to the line search.
            if mu >= -1e-8 * scale {
                continue;
            }
            used += 1;
            let v = eig.eigenvectors.column(k);
            delta -= v * (v.dot(grad) / mu);
        }
        if used == 0 || delta.norm() > MAX_NEWTON_STEP {
            return None;
        }
        let wn = self.retract(w, &delta);
        let (fnew, gnew) = self.gradient(&wn);
        (fnew > f || (fnew >= f - MONOTONE_TOL && gnew.norm() < gnorm)).then_some((wn, fnew))
    }

    /// Backtracking from `INITIAL_STEP`; once a step improves, keeps doubling
    /// while the improvement grows.
    fn line_search(&self, w: &Mat6, f: f64, dir: &DVector<f64>) -> Option<(Mat6, f64)> {
        let mut s = INITIAL_STEP;
        for _ in 0..MAX_EVALS {
            let wn = self.retract(w, &(dir * s));
            let fnew = self.value(&wn);
            if fnew > f {
                let mut best = (wn, fnew);
                let mut t = s;
                while t < 1.0 {
                    t *= 2.0;
                    let wt = self.retract(w, &(dir * t));
                    let ft = self.value(&wt);
                    if ft <= best.1 {
                        break;
                    }
                    best = (wt, ft);
                }
                return Some(best);
            }
            s *= SHRINK;
        }
        None
    }
}
