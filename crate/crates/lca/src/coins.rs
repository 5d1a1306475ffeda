//! Deterministic, lazily evaluated randomness.
//!
//! The oracles in this crate must hand out mutually consistent answers no
//! matter how often or in which order entities are queried. Instead of
//! storing a tape of random bits per entity and round, every coin is a pure
//! function of the tuple `(seed, stream, entity, round, epoch)`. Re-deriving
//! a coin always reproduces the same bit, so consistency is automatic and no
//! per-entity state has to be kept for randomness at all.
//!
//! Streams keep the algorithms' coins disjoint: running the MIS oracle and
//! the cover oracle on the same graph with the same seed uses independent
//! randomness.
//!
//! ```
//! use lca::coins::{CoinSource, CoinTape, StreamTag};
//!
//! let tape = CoinTape::new(42);
//! let a = tape.word(StreamTag::Mis, 7, 3, 0);
//! assert_eq!(a, tape.word(StreamTag::Mis, 7, 3, 0)); // pure
//! assert_ne!(a, tape.word(StreamTag::Isc, 7, 3, 0)); // per-stream
//! ```

/// Separates the coin streams of the different oracles.
///
/// `MisExtra` carries the additional coins the picked-only reference process
/// flips for vertices that have already left the main MIS process; while a
/// vertex is still undecided both processes read the same `Mis` coins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum StreamTag {
    Mis = 1,
    MisExtra = 2,
    Isc = 3,
    Coloring = 4,
    Cnf = 5,
}

/// A source of per-`(stream, entity, round, epoch)` random words.
///
/// Implementations must be pure: the same key always yields the same word.
/// [`CoinTape`] is the production implementation; tests inject closures to
/// force specific coin outcomes.
pub trait CoinSource {
    /// The 64-bit word for one key tuple.
    fn word(&self, tag: StreamTag, entity: u64, round: u64, epoch: u64) -> u64;

    /// A biased coin: `true` with probability `numerator / denominator`,
    /// up to a rounding bias below 2⁻⁶⁰.
    ///
    /// The word is compared against `⌊2⁶⁴·numerator/denominator⌋`, so the
    /// outcome is deterministic per key and exact for `numerator ==
    /// denominator`.
    fn bernoulli(
        &self,
        tag: StreamTag,
        entity: u64,
        round: u64,
        epoch: u64,
        numerator: u64,
        denominator: u64,
    ) -> bool {
        debug_assert!(numerator > 0 && numerator <= denominator);
        let threshold = ((numerator as u128) << 64) / denominator as u128;
        (self.word(tag, entity, round, epoch) as u128) < threshold
    }

    /// A fair coin.
    fn flip(&self, tag: StreamTag, entity: u64, round: u64, epoch: u64) -> bool {
        self.word(tag, entity, round, epoch) & 1 == 1
    }
}

/// The production coin source: a fixed keyed mixing function.
///
/// Wrapping 64-bit arithmetic only, so outputs are bit-identical across
/// platforms. Not cryptographic, and not meant to be; the published test
/// vectors in `tests/data/coin_vectors.txt` pin the exact function.
#[derive(Debug, Clone, Copy)]
pub struct CoinTape {
    seed: u64,
}

impl CoinTape {
    pub fn new(seed: u64) -> Self {
        CoinTape { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

// splitmix64 finalizer; full avalanche on 64 bits.
#[inline]
pub(crate) fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl CoinSource for CoinTape {
    fn word(&self, tag: StreamTag, entity: u64, round: u64, epoch: u64) -> u64 {
        let mut h = mix(self.seed ^ (tag as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        h = mix(h ^ entity.wrapping_mul(0xC2B2_AE3D_27D4_EB4F));
        h = mix(h ^ round.wrapping_mul(0x1656_67B1_9E37_79F9));
        mix(h ^ epoch.wrapping_mul(0xD6E8_FEB8_6659_FD93))
    }
}

/// Any pure closure over the key tuple is a coin source. Handy for tests
/// that need to force specific coin outcomes.
impl<F> CoinSource for F
where
    F: Fn(StreamTag, u64, u64, u64) -> u64,
{
    fn word(&self, tag: StreamTag, entity: u64, round: u64, epoch: u64) -> u64 {
        self(tag, entity, round, epoch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn purity() {
        let tape = CoinTape::new(0xDEAD_BEEF);
        for entity in [0u64, 1, 77, u64::MAX] {
            for round in [0u64, 1, 500] {
                let w = tape.word(StreamTag::Coloring, entity, round, 3);
                assert_eq!(w, tape.word(StreamTag::Coloring, entity, round, 3));
            }
        }
    }

    #[test]
    fn certain_event_always_fires() {
        let tape = CoinTape::new(9);
        for entity in 0..1000 {
            assert!(tape.bernoulli(StreamTag::Mis, entity, 1, 0, 7, 7));
        }
    }

    #[test]
    fn streams_are_disjoint() {
        let tape = CoinTape::new(1234);
        let mut agree = 0u32;
        for entity in 0..4096u64 {
            let a = tape.word(StreamTag::Mis, entity, 1, 0);
            let b = tape.word(StreamTag::Isc, entity, 1, 0);
            if a == b {
                agree += 1;
            }
        }
        assert_eq!(agree, 0, "two streams collided on 64-bit words");
    }

    #[test]
    fn epochs_decorrelate() {
        let tape = CoinTape::new(5);
        // same vertex, different epochs: the bits must not be constant
        let bits: Vec<bool> = (0..64).map(|e| tape.flip(StreamTag::Coloring, 10, 0, e)).collect();
        assert!(bits.iter().any(|&b| b));
        assert!(bits.iter().any(|&b| !b));
    }

    // Monte Carlo estimate over 10^6 distinct keys; 0.002 is > 3 sigma for
    // p = 1/4 at this sample size (sigma = sqrt(p(1-p)/n) ~ 4.3e-4).
    #[test]
    fn quarter_bias_mean() {
        let tape = CoinTape::new(2024);
        let n = 1_000_000u64;
        let mut ones = 0u64;
        for entity in 0..n {
            if tape.bernoulli(StreamTag::Mis, entity, 1, 0, 1, 4) {
                ones += 1;
            }
        }
        let mean = ones as f64 / n as f64;
        assert!((mean - 0.25).abs() < 0.002, "empirical mean {mean}");
    }

    #[test]
    fn fair_flip_mean() {
        let tape = CoinTape::new(77);
        let n = 1_000_000u64;
        let mut ones = 0u64;
        for entity in 0..n {
            if tape.flip(StreamTag::Coloring, entity, 0, 0) {
                ones += 1;
            }
        }
        let mean = ones as f64 / n as f64;
        assert!((mean - 0.5).abs() < 0.002, "empirical mean {mean}");
    }

    #[test]
    fn seed_changes_stream() {
        let a = CoinTape::new(1);
        let b = CoinTape::new(2);
        let same = (0..1024u64)
            .filter(|&e| a.word(StreamTag::Cnf, e, 0, 0) == b.word(StreamTag::Cnf, e, 0, 0))
            .count();
        assert_eq!(same, 0);
    }
}
