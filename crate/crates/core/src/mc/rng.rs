use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed for one independent stream, mixed from the master seed and the
/// stream coordinates.
pub fn stream_seed(master: u64, replica: u64, point: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ replica) ^ point.rotate_left(32))
}

pub fn stream_rng(master: u64, replica: u64, point: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(master, replica, point))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn streams_are_distinct() {
        let seeds: HashSet<u64> = (0..8)
            .flat_map(|r| (0..64).map(move |p| stream_seed(7, r, p)))
            .collect();
        assert_eq!(seeds.len(), 8 * 64);
        assert_ne!(stream_seed(1, 0, 0), stream_seed(2, 0, 0));
    }
}
