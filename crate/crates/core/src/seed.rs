//! Deterministic seed derivation.
//!
//! Every randomized routine takes an explicit 64-bit seed. Sub-seeds for
//! loops and independent streams are derived by hashing the parent seed with
//! a stream tag and an index, so results never depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream tags keep unrelated uses of one parent seed apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    AvoidDraw = 1,
    AvoidTau = 2,
    AmplifierAttempt = 3,
    AmplifierInner = 4,
    Trial = 5,
    Corpus = 6,
    Estimate = 7,
    Cell = 8,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed for `(parent, stream, index)`.
pub fn derive(parent: u64, stream: Stream, index: u64) -> u64 {
    let a = splitmix64(parent ^ 0x243f_6a88_85a3_08d3);
    let b = splitmix64(a ^ (stream as u64).wrapping_mul(0x1319_8a2e_0370_7344));
    splitmix64(b ^ splitmix64(index))
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
