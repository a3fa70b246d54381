//! Fixed 64-bit mixing hash used for fingerprint identifiers.
//!
//! `mix` is the SplitMix64 finalizer. A word sequence `w1..wn` hashes as
//!
//! ```text
//! h0 = mix(SEED ^ n)
//! hk = mix(rotl(h(k-1), 5) ^ mix(wk + SEED))
//! ```
//!
//! with wrapping arithmetic. The output depends only on the words, never on
//! platform or process, so identifiers are stable across runs and builds.

pub const SEED: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn hash_words(words: &[u64]) -> u64 {
    let mut h = mix(SEED ^ words.len() as u64);
    for &w in words {
        h = mix(h.rotate_left(5) ^ mix(w.wrapping_add(SEED)));
    }
    h
}
