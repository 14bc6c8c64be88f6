//! Permutations, Koszul signs and shuffles.
//!
//! A permutation `σ` acts on graded tuples by substitution:
//! `(x_1, …, x_n) ↦ (x_{σ(1)}, …, x_{σ(n)})`. Indices are zero-based
//! internally.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Invalid(format!("not a permutation: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// From one-based images, as written in the usual cycle-free notation.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::Invalid("one-based images cannot contain 0".into()));
        }
        Self::new(images.iter().map(|i| i - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other` as functions: `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// Applies the substitution to a tuple.
    pub fn apply<T: Clone>(&self, items: &[T]) -> Vec<T> {
        self.images.iter().map(|&i| items[i].clone()).collect()
    }

    /// Signature, `±1`.
    pub fn sgn(&self) -> i64 {
        let mut inversions = 0usize;
        for a in 0..self.images.len() {
            for b in a + 1..self.images.len() {
                if self.images[a] > self.images[b] {
                    inversions += 1;
                }
            }
        }
        if inversions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// Koszul sign `ε(σ; x)` of the substitution `x ↦ x_σ` for elements of the
/// given degrees. Every inverted pair contributes `(-1)^{pq}`.
pub fn koszul_sign(sigma: &Permutation, degrees: &[i64]) -> Result<i64> {
    if degrees.len() != sigma.len() {
        return Err(Error::LengthMismatch {
            expected: sigma.len(),
            got: degrees.len(),
        });
    }
    Ok(koszul_sign_unchecked(sigma.images(), degrees))
}

pub(crate) fn koszul_sign_unchecked(images: &[usize], degrees: &[i64]) -> i64 {
    let mut odd = 0i64;
    for a in 0..images.len() {
        if degrees[images[a]].rem_euclid(2) == 0 {
            continue;
        }
        for b in a + 1..images.len() {
            if images[a] > images[b] && degrees[images[b]].rem_euclid(2) == 1 {
                odd += 1;
            }
        }
    }
    if odd % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `χ(σ; x) = ε(σ; x) · sgn(σ)`.
pub fn chi(sigma: &Permutation, degrees: &[i64]) -> Result<i64> {
    Ok(koszul_sign(sigma, degrees)? * sigma.sgn())
}

/// All permutations of `n` letters in lexicographic order of images.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if cur.len() == n {
            out.push(Permutation { images: cur.clone() });
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

/// The `(i, j)` shuffles: `σ` increasing on `1..=i` and on `i+1..=i+j`.
pub fn shuffles(i: usize, j: usize) -> Vec<Permutation> {
    multi_shuffles(&[i, j])
}

/// Permutations increasing on each consecutive block of the given sizes,
/// in lexicographic order of images.
pub fn multi_shuffles(blocks: &[usize]) -> Vec<Permutation> {
    let n: usize = blocks.iter().sum();
    let mut out = Vec::new();
    let mut images = vec![0usize; n];
    let mut used = vec![false; n];
    let starts: Vec<usize> = blocks
        .iter()
        .scan(0, |acc, &b| {
            let s = *acc;
            *acc += b;
            Some(s)
        })
        .collect();
    let mut block_of = vec![0usize; n];
    for (bi, (&s, &len)) in starts.iter().zip(blocks).enumerate() {
        block_of[s..s + len].fill(bi);
    }
    fn rec(
        pos: usize,
        n: usize,
        starts: &[usize],
        block_of: &[usize],
        images: &mut [usize],
        used: &mut [bool],
        out: &mut Vec<Permutation>,
    ) {
        if pos == n {
            out.push(Permutation {
                images: images.to_vec(),
            });
            return;
        }
        let lower = if pos > starts[block_of[pos]] {
            images[pos - 1] + 1
        } else {
            0
        };
        for v in lower..n {
            if !used[v] {
                used[v] = true;
                images[pos] = v;
                rec(pos + 1, n, starts, block_of, images, used, out);
                used[v] = false;
            }
        }
    }
    rec(0, n, &starts, &block_of, &mut images, &mut used, &mut out);
    out
}

/// Block shuffles with `σ(1) = 1`: increasing on every block of sizes
/// `i_1 | … | i_k` and fixing the first letter.
pub fn block_shuffles(blocks: &[usize]) -> Result<Vec<Permutation>> {
    if blocks.contains(&0) {
        return Err(Error::Invalid("block sizes must be positive".into()));
    }
    Ok(multi_shuffles(blocks)
        .into_iter()
        .filter(|p| p.is_empty() || p.image(0) == 0)
        .collect())
}

/// Unshuffles whose block minima increase: every way of splitting
/// `0..n` into an ordered sequence of blocks of the given sizes with
/// blocks listed by their smallest element. Each unordered partition
/// appears exactly once.
pub fn ordered_minima_shuffles(blocks: &[usize]) -> Vec<Permutation> {
    let starts: Vec<usize> = blocks
        .iter()
        .scan(0, |acc, &b| {
            let s = *acc;
            *acc += b;
            Some(s)
        })
        .collect();
    multi_shuffles(blocks)
        .into_iter()
        .filter(|p| starts.windows(2).all(|w| p.image(w[0]) < p.image(w[1])))
        .collect()
}

/// All compositions of `n` into `k` positive parts, lexicographically.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(rem: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if rem < k {
            return;
        }
        for first in 1..=rem - (k - 1) {
            cur.push(first);
            rec(rem - first, k - 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap() -> Permutation {
        Permutation::from_one_based(&[2, 1]).unwrap()
    }

    #[test]
    fn identity_has_trivial_sign() {
        let id = Permutation::identity(4);
        assert_eq!(koszul_sign(&id, &[1, 3, 2, 5]).unwrap(), 1);
        assert_eq!(chi(&id, &[1, 1, 1, 1]).unwrap(), 1);
    }

    #[test]
    fn swap_of_two_odd_elements() {
        assert_eq!(koszul_sign(&swap(), &[1, 1]).unwrap(), -1);
        assert_eq!(chi(&swap(), &[1, 1]).unwrap(), 1);
    }

    #[test]
    fn swap_of_odd_and_even() {
        assert_eq!(koszul_sign(&swap(), &[1, 2]).unwrap(), 1);
        assert_eq!(chi(&swap(), &[1, 2]).unwrap(), -1);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(matches!(
            koszul_sign(&swap(), &[1]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn shuffle_counts_and_order() {
        let s11 = shuffles(1, 1);
        assert_eq!(s11, vec![Permutation::identity(2), swap()]);
        assert_eq!(shuffles(2, 2).len(), 6);
        // Brute force over S_3 filtered by the defining inequalities.
        let brute: Vec<Permutation> = all_permutations(3)
            .into_iter()
            .filter(|p| p.image(0) < p.image(1))
            .collect();
        assert_eq!(shuffles(2, 1), brute);
        assert_eq!(brute.len(), 3);
    }

    #[test]
    fn block_shuffle_examples() {
        assert_eq!(block_shuffles(&[1, 1]).unwrap(), vec![Permutation::identity(2)]);
        assert_eq!(block_shuffles(&[4]).unwrap(), vec![Permutation::identity(4)]);
        let brute: Vec<Permutation> = all_permutations(3)
            .into_iter()
            .filter(|p| p.image(0) == 0)
            .collect();
        assert_eq!(block_shuffles(&[1, 1, 1]).unwrap(), brute);
        assert_eq!(brute.len(), 2);
        assert!(block_shuffles(&[0, 2]).is_err());
    }

    #[test]
    fn ordered_minima_counts_set_partitions() {
        // {1,2,3} into blocks of sizes 1,1,1: exactly one unordered partition.
        assert_eq!(ordered_minima_shuffles(&[1, 1, 1]).len(), 1);
        // sizes (1,2) on 3 letters: block minima increasing.
        assert_eq!(ordered_minima_shuffles(&[1, 2]).len(), 1);
        assert_eq!(ordered_minima_shuffles(&[2, 1]).len(), 2);
    }

    #[test]
    fn compositions_enumerate() {
        assert_eq!(compositions(3, 2), vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(compositions(4, 4), vec![vec![1, 1, 1, 1]]);
        assert!(compositions(2, 3).is_empty());
    }
}
