//! Seeded uniform sampling without replacement.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The generator used by every randomized routine.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `k` distinct indices from `0..n` (partial Fisher-Yates), in draw order.
pub fn uniform_subset<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    let k = k.min(n);
    let (head, _) = all.partial_shuffle(rng, k);
    head.to_vec()
}

/// Draws `min(b, n - |excluded|)` new indices from `0..n` outside `excluded`.
///
/// The flag is `true` when `excluded` already covers `0..n`; the returned
/// set is then empty.
pub fn sample_new<R: Rng + ?Sized>(rng: &mut R, n: usize, excluded: &[usize], b: usize) -> (Vec<usize>, bool) {
    let mut taken = vec![false; n];
    for &i in excluded {
        if i < n {
            taken[i] = true;
        }
    }
    let mut allowed: Vec<usize> = (0..n).filter(|&i| !taken[i]).collect();
    if allowed.is_empty() {
        return (Vec::new(), true);
    }
    let k = b.min(allowed.len());
    let (head, _) = allowed.partial_shuffle(rng, k);
    (head.to_vec(), false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturated_universe() {
        let mut rng = seeded_rng(0);
        let all: Vec<usize> = (0..10).collect();
        assert_eq!(sample_new(&mut rng, 10, &all, 3), (vec![], true));
    }

    #[test]
    fn full_draw_is_a_permutation() {
        let mut rng = seeded_rng(1);
        let (mut s, sat) = sample_new(&mut rng, 5, &[], 5);
        assert!(!sat);
        s.sort();
        assert_eq!(s, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn shrinks_near_saturation_and_avoids_excluded() {
        let mut rng = seeded_rng(2);
        let (s, sat) = sample_new(&mut rng, 6, &[0, 2, 4, 5], 5);
        assert!(!sat);
        let mut s = s;
        s.sort();
        assert_eq!(s, vec![1, 3]);
    }

    #[test]
    fn seed_determinism() {
        let a = uniform_subset(&mut seeded_rng(9), 100, 10);
        let b = uniform_subset(&mut seeded_rng(9), 100, 10);
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 10);
    }
}
