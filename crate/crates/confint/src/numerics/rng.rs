//! Seeded, splittable random streams for reproducible simulations.
//!
//! Every Monte Carlo routine in the crate draws from an [`RngStream`]
//! identified by a `(seed, stream_id)` pair. The same pair always yields
//! the same sequence, and distinct stream ids give statistically
//! independent sequences, so simulations can hand one stream to each
//! replication and stay deterministic no matter how work is scheduled
//! across threads.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A deterministic random stream.
///
/// Backed by ChaCha8, seeded from `seed` with the cipher's stream
/// parameter set to `stream_id`. Cheap to construct, so creating one per
/// simulation replication is the intended pattern.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform draw from [0, 1) with 53 bits of precision.
    pub fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw from {0, 1, ..., n-1} without modulo bias, using
    /// Lemire's widening-multiply rejection scheme.
    pub fn choose(&mut self, n: usize) -> usize {
        assert!(n > 0, "choose requires n >= 1");
        let n = n as u64;
        let mut x = self.rng.next_u64();
        let mut m = (x as u128) * (n as u128);
        let mut low = m as u64;
        if low < n {
            let threshold = n.wrapping_neg() % n;
            while low < threshold {
                x = self.rng.next_u64();
                m = (x as u128) * (n as u128);
                low = m as u64;
            }
        }
        (m >> 64) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_pairs_give_identical_sequences() {
        let mut a = RngStream::new(42, 7);
        let mut b = RngStream::new(42, 7);
        for _ in 0..200 {
            assert_eq!(a.next_uniform().to_bits(), b.next_uniform().to_bits());
        }
    }

    #[test]
    fn different_stream_ids_diverge() {
        let mut a = RngStream::new(42, 0);
        let mut b = RngStream::new(42, 1);
        let same = (0..100).filter(|_| a.next_uniform() == b.next_uniform()).count();
        assert!(same < 3, "streams 0 and 1 coincided {same} times out of 100");
    }

    #[test]
    fn different_seeds_diverge() {
        let mut a = RngStream::new(1, 0);
        let mut b = RngStream::new(2, 0);
        let same = (0..100).filter(|_| a.next_uniform() == b.next_uniform()).count();
        assert!(same < 3);
    }

    #[test]
    fn uniform_stays_in_unit_interval() {
        let mut rng = RngStream::new(9, 0);
        for _ in 0..10_000 {
            let u = rng.next_uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn uniform_mean_is_near_half() {
        let n = 100_000;
        let mut rng = RngStream::new(3, 5);
        let sum: f64 = (0..n).map(|_| rng.next_uniform()).sum();
        let mean = sum / n as f64;
        // sd of the mean is 1/sqrt(12 n); allow four of those
        let tol = 4.0 / (12.0 * n as f64).sqrt();
        assert!((mean - 0.5).abs() < tol, "mean = {mean}");
    }

    #[test]
    fn choose_is_unbiased_across_four_buckets() {
        let n = 100_000usize;
        let mut rng = RngStream::new(11, 0);
        let mut counts = [0u64; 4];
        for _ in 0..n {
            counts[rng.choose(4)] += 1;
        }
        // binomial sd per bucket with p = 1/4
        let sd = (n as f64 * 0.25 * 0.75).sqrt();
        for (bucket, &c) in counts.iter().enumerate() {
            let dev = (c as f64 - n as f64 * 0.25).abs();
            assert!(dev < 4.0 * sd, "bucket {bucket}: count {c} deviates by {dev}");
        }
    }

    #[test]
    fn choose_single_option_is_always_zero() {
        let mut rng = RngStream::new(0, 0);
        for _ in 0..100 {
            assert_eq!(rng.choose(1), 0);
        }
    }

    #[test]
    fn choose_stays_in_range() {
        let mut rng = RngStream::new(5, 123);
        for n in [2usize, 3, 7, 1000] {
            for _ in 0..1000 {
                assert!(rng.choose(n) < n);
            }
        }
    }
}
