//! Fixed 64-bit pseudo-random generator so samples are reproducible
//! bit-exactly, including by reimplementations in other languages.
//!
//! The generator is splitmix64 (Steele, Lea & Flood's mixing constants):
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! output = z ^ (z >> 31)
//! ```
//!
//! Bounded draws use rejection below the largest multiple of the bound, so
//! they are exactly uniform. Subset sampling is a partial Fisher-Yates
//! shuffle: for i in 0..k, swap position i with position i + draw(n - i).

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in `0..bound` (rejection sampling, no modulo bias).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let zone = (u64::MAX / bound) * bound;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    /// `k` distinct indices drawn uniformly from `0..n`, in draw order.
    pub fn sample_indices(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n, "cannot sample {k} of {n}");
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below((n - i) as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}

/// Deterministic seed derivation for independent cells of an experiment:
/// feeds the base seed and every byte of the label through the splitmix
/// permutation.
pub fn derive_seed(base: u64, label: &str) -> u64 {
    let mut rng = SplitMix64::new(base);
    let mut acc = rng.next_u64();
    for &b in label.as_bytes() {
        let mut step = SplitMix64::new(acc ^ u64::from(b));
        acc = step.next_u64();
    }
    acc
}
