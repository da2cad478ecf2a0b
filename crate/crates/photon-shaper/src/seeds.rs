//! Deterministic seed derivation.
//!
//! Every stochastic component draws from a ChaCha stream whose seed is a pure
//! function of a master seed and a derivation path. Serial and parallel
//! executions therefore consume identical random streams, and any sub-result
//! can be reproduced in isolation from `(master, path)` alone.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const PATH_SALT: u64 = 0xD1B5_4A32_D192_ED03;

/// SplitMix64 output function.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a substream seed from a master seed and a derivation path.
pub fn derive(master: u64, path: &[u64]) -> u64 {
    let mut s = splitmix64(master ^ GAMMA);
    for &p in path {
        s = splitmix64(s ^ splitmix64(p.wrapping_add(PATH_SALT)));
    }
    s
}
