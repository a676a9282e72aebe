//! Counter-based random streams.
//!
//! Every Monte Carlo sample owns a dedicated ChaCha8 stream derived from
//! `(seed, sample index)`, so the draws a sample consumes are independent of
//! how samples are partitioned into chunks or scheduled across threads.
//! Auxiliary consumers (society generation in convergence sweeps, test
//! fixtures) use stream ids with the top bit set so they can never collide
//! with a sample index.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream ids at or above this value are reserved for auxiliary draws.
pub const AUX_STREAM_BASE: u64 = 1 << 63;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Expands a 64-bit seed into a 256-bit ChaCha key.
fn master_key(seed: u64) -> [u8; 32] {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    key
}

/// Returns the generator for one Monte Carlo sample.
///
/// `index` must be below [`AUX_STREAM_BASE`]; sample counts are bounded far
/// below that in practice.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    debug_assert!(index < AUX_STREAM_BASE);
    let mut rng = ChaCha8Rng::from_seed(master_key(seed));
    rng.set_stream(index);
    rng
}

/// Returns an auxiliary generator disjoint from every sample stream.
pub fn aux_rng(seed: u64, tag: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(master_key(seed));
    rng.set_stream(AUX_STREAM_BASE | tag);
    rng
}
