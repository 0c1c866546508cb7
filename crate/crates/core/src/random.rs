//! Seeded generators. Streams are ChaCha8 (`rand_chacha::ChaCha8Rng`), a
//! counter-based generator with a published specification: a stream is fully
//! determined by the 64-bit seed and the 64-bit stream number, so independent
//! restarts draw from `rng_for(seed, restart)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::exterior::Trivector;
use crate::linalg::complete_basis6;
use crate::{Mat6, Vec6, C64};

pub type Rng = ChaCha8Rng;

/// Generator for stream `stream` of seed `seed`.
pub fn rng_for(seed: u64, stream: u64) -> Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Standard complex Gaussian: real and imaginary parts i.i.d. N(0, 1).
pub fn complex_gaussian(rng: &mut Rng) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// 20 i.i.d. complex Gaussian amplitudes, normalized.
pub fn random_trivector(rng: &mut Rng) -> Trivector {
    let mut amps = [C64::new(0.0, 0.0); 20];
    for a in amps.iter_mut() {
        *a = complex_gaussian(rng);
    }
    Trivector::from_amps(amps).normalized()
}

/// Haar-distributed element of U(6): Gram–Schmidt (QR with positive diagonal R)
/// of a complex Gaussian matrix.
pub fn haar_unitary(rng: &mut Rng) -> Mat6 {
    let cols: Vec<Vec6> = (0..6).map(|_| Vec6::from_fn(|_, _| complex_gaussian(rng))).collect();
    complete_basis6(&cols)
}

/// Haar-distributed element of U(2) as `[[a, b], [c, d]]` (row-major).
pub fn haar_u2(rng: &mut Rng) -> [[C64; 2]; 2] {
    let x = [complex_gaussian(rng), complex_gaussian(rng)];
    let y = [complex_gaussian(rng), complex_gaussian(rng)];
    let nx = (x[0].norm_sqr() + x[1].norm_sqr()).sqrt();
    let u = [x[0] / nx, x[1] / nx];
    let p = u[0].conj() * y[0] + u[1].conj() * y[1];
    let w = [y[0] - u[0] * p, y[1] - u[1] * p];
    let nw = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
    let v = [w[0] / nw, w[1] / nw];
    [[u[0], v[0]], [u[1], v[1]]]
}
