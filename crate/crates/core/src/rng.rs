//! Deterministic randomness.
//!
//! Every random draw in the crate comes from a [`SplitMix64`] stream seeded
//! explicitly by the caller: the state advances by the constant
//! `0x9E3779B97F4A7C15` and each output is the state passed through the
//! SplitMix64 finalizer. Bounded draws use the multiply-high mapping
//! `(x · n) >> 64`, so results are identical on every platform and do not
//! depend on the sampling algorithms of any `rand` release.

use rand_core::{RngCore, SeedableRng};
pub use rand_xoshiro::SplitMix64;

pub fn seeded(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// Uniform index in `0..len` (`len > 0`).
pub fn uniform_index<R: RngCore + ?Sized>(rng: &mut R, len: usize) -> usize {
    debug_assert!(len > 0);
    ((u128::from(rng.next_u64()) * len as u128) >> 64) as usize
}

/// Uniform integer in `lo..=hi`.
pub fn uniform_inclusive<R: RngCore + ?Sized>(rng: &mut R, lo: u64, hi: u64) -> u64 {
    debug_assert!(lo <= hi);
    let span = u128::from(hi - lo) + 1;
    lo + ((u128::from(rng.next_u64()) * span) >> 64) as u64
}
