//! Shared inputs for the kernel benchmarks.

use bdspace::io::random_state;
use bdspace::{TypeTag, Trivector};

/// Seeded generic states.
pub fn generic(n: usize) -> Vec<Trivector> {
    (0..n as u64).map(|s| random_state(s, None)).collect()
}

/// Seeded states built from a class diagram.
pub fn of_class(tag: TypeTag, n: usize) -> Vec<Trivector> {
    (0..n as u64).map(|s| random_state(s, Some(tag))).collect()
}
