//! Seeded instance generators.
//!
//! Random posets are layered random orders: every pair `i < j` of the natural
//! order receives the relation `i ≺ j` independently with probability `p`, and
//! the result is transitively closed. ChaCha8 keeps the streams identical
//! across platforms, so a `(n, p, seed)` triple always names the same poset.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poset::{Permutation, Poset};

pub fn random_poset(n: usize, p: f64, seed: u64) -> Poset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = p.clamp(0.0, 1.0);
    let mut pairs = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if rng.random_bool(p) {
                pairs.push((i, j));
            }
        }
    }
    Poset::from_relations(n, &pairs).expect("forward edges cannot form a cycle")
}

pub fn random_permutation(n: usize, seed: u64) -> Permutation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut img: Vec<usize> = (1..=n).collect();
    img.shuffle(&mut rng);
    Permutation::new(img).expect("a shuffle of 1..=n")
}

/// A random series-parallel poset on `n` elements built from a random
/// binary composition tree.
pub fn random_series_parallel(n: usize, seed: u64) -> Poset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sp_rec(n, &mut rng)
}

fn sp_rec(n: usize, rng: &mut ChaCha8Rng) -> Poset {
    if n <= 1 {
        return Poset::chain(n);
    }
    let left = rng.random_range(1..n);
    let a = sp_rec(left, rng);
    let b = sp_rec(n - left, rng);
    if rng.random_bool(0.5) {
        Poset::ordinal_sum(&[a, b])
    } else {
        Poset::disjoint_union(&[a, b])
    }
}

/// A random poset of width at most `k`: `k` chains of near-equal length with
/// random cross relations between them.
pub fn random_bounded_width(n: usize, k: usize, p: f64, seed: u64) -> Poset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = k.max(1);
    // element e lives on chain e % k at height e / k
    let mut pairs = Vec::new();
    for a in 0..n {
        if a + k < n {
            pairs.push((a + 1, a + k + 1));
        }
        for b in a + 1..n {
            if b % k != a % k && b / k > a / k && rng.random_bool(p) {
                pairs.push((a + 1, b + 1));
            }
        }
    }
    Poset::from_relations(n, &pairs).expect("edges point to higher levels")
}
