//! Shared fixtures for the criterion benches.

use bch_core::{enumerate_words, Word};

/// Every `stride`-th word of length `order`, for per-coefficient timings.
pub fn sample_words(order: usize, stride: usize) -> Vec<Word> {
    enumerate_words(order)
        .expect("bench orders are small")
        .into_iter()
        .step_by(stride.max(1))
        .collect()
}
