//! Deterministic, seedable randomness streams.
//!
//! Every stochastic draw site in the crate owns an [`RngStream`], a value pair
//! `(root_seed, stream_id)` mapped onto an independent counter-based generator
//! stream. Identical pairs reproduce identical draw sequences on every
//! platform and under any thread schedule; distinct stream ids are
//! statistically independent. Not cryptographic.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RngError {
    #[error("invalid range: lo ({lo}) must be strictly below hi ({hi})")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("invalid window: window {window} exceeds field length {n}")]
    InvalidWindow { window: usize, n: usize },
    #[error("empty pool: cannot sample indices from a pool of size 0")]
    EmptyPool,
    #[error("insufficient pool: requested {k} distinct indices from pool of {pool_size}")]
    InsufficientPool { k: usize, pool_size: usize },
}

/// A reproducible randomness stream: one per trajectory or algorithmic draw
/// site. Streams are cheap values; moving them between threads is safe, but a
/// single stream handle must be drawn from by one consumer at a time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct RngStream {
    pub root_seed: u64,
    pub stream_id: u64,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(GOLDEN);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(root_seed: u64) -> Self {
        Self { root_seed, stream_id: 0 }
    }

    pub fn with_id(root_seed: u64, stream_id: u64) -> Self {
        Self { root_seed, stream_id }
    }

    /// Derive a child stream for the given tag. Children of distinct tags (and
    /// of distinct parents) land on independent generator streams, so batch
    /// work can be assigned stable per-slot randomness up front, independent
    /// of scheduling.
    pub fn substream(&self, tag: u64) -> Self {
        Self {
            root_seed: self.root_seed,
            stream_id: splitmix64(self.stream_id ^ splitmix64(tag)),
        }
    }

    fn generator(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.root_seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Stateful draw handle for sequential sampling from this stream.
    pub fn draws(&self) -> Draws {
        Draws { rng: self.generator() }
    }
}

/// Sequential draw handle over one stream.
pub struct Draws {
    rng: ChaCha8Rng,
}

impl Draws {
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.unit() * (hi - lo)
    }

    /// Uniform index in 0..n via multiply-shift; bias is O(n / 2^64).
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Standard normal via Box-Muller (two uniforms per pair, one cached).
    pub fn standard_normal(&mut self) -> f64 {
        // open interval on the radius draw keeps ln() finite
        let u1 = 1.0 - self.unit();
        let u2 = self.unit();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

/// i.i.d. samples from U(lo, hi), reproducible per stream.
pub fn uniform_field(stream: RngStream, n: usize, lo: f64, hi: f64) -> Result<Vec<f64>, RngError> {
    if !(lo < hi) {
        return Err(RngError::InvalidRange { lo, hi });
    }
    let mut d = stream.draws();
    Ok((0..n).map(|_| d.uniform(lo, hi)).collect())
}

/// Uniform noise on [0,1] smoothed by repeated centered moving averages.
///
/// Boundary handling is symmetric reflection, which keeps every pass a convex
/// combination of the raw draws, so the output stays in [0,1].
pub fn smoothed_noise(
    stream: RngStream,
    n: usize,
    passes: usize,
    window: usize,
) -> Result<Vec<f64>, RngError> {
    if window > n || window == 0 {
        return Err(RngError::InvalidWindow { window, n });
    }
    let mut field = uniform_field(stream, n, 0.0, 1.0)?;
    if n == 0 {
        return Ok(field);
    }
    let lo_off = (window - 1) / 2;
    let hi_off = window / 2;
    let mut next = vec![0.0; n];
    for _ in 0..passes {
        for j in 0..n {
            let mut acc = 0.0;
            for off in -(lo_off as isize)..=(hi_off as isize) {
                let mut idx = j as isize + off;
                if idx < 0 {
                    idx = -idx - 1;
                }
                if idx >= n as isize {
                    idx = 2 * n as isize - 1 - idx;
                }
                acc += field[idx as usize];
            }
            next[j] = acc / window as f64;
        }
        std::mem::swap(&mut field, &mut next);
    }
    Ok(field)
}

/// k indices drawn uniformly (with replacement) from 0..pool_size.
pub fn resample_with_replacement(
    stream: RngStream,
    pool_size: usize,
    k: usize,
) -> Result<Vec<usize>, RngError> {
    if pool_size == 0 {
        return Err(RngError::EmptyPool);
    }
    let mut d = stream.draws();
    Ok((0..k).map(|_| d.index(pool_size)).collect())
}

/// k distinct indices, uniform over k-subsets of 0..pool_size (partial
/// Fisher-Yates, so the result is also a uniform ordered selection).
pub fn choose_subset(
    stream: RngStream,
    pool_size: usize,
    k: usize,
) -> Result<Vec<usize>, RngError> {
    if k > pool_size {
        return Err(RngError::InsufficientPool { k, pool_size });
    }
    let mut pool: Vec<usize> = (0..pool_size).collect();
    let mut d = stream.draws();
    for i in 0..k {
        let j = i + d.index(pool_size - i);
        pool.swap(i, j);
    }
    pool.truncate(k);
    Ok(pool)
}
