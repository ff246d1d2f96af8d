//! Finite permutations of `{1, ..., n}` and the block permutations used by the
//! operad symmetry axioms.
//!
//! A [`Permutation`] is stored by its one-indexed image list: `images[i - 1]`
//! is `σ(i)`. Composition is right-to-left: `p.compose(&q)` maps `i` to
//! `p(q(i))`.
//!
//! The Σₙ-action on lists used throughout the crate is [`Permutation::apply_to_list`]:
//! the entry at position `i` moves to position `σ(i)`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("image list {0:?} is not a bijection of 1..n")]
    NotBijective(Vec<usize>),
    #[error("list of length {len} cannot be permuted by an element of degree {degree}")]
    LengthMismatch { degree: usize, len: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// Builds a permutation from one-indexed images, rejecting anything that
    /// is not a bijection of `1..=n`.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(PermError::NotBijective(images));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation { images })
    }

    /// The transposition exchanging `a` and `b` in `Σₙ`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a - 1, b - 1);
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `σ(i)` for one-indexed `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Permutation {
            images: other.images.iter().map(|&j| self.images[j - 1]).collect(),
        })
    }

    /// Moves the entry at position `i` to position `σ(i)`.
    pub fn apply_to_list<T: Clone>(&self, xs: &[T]) -> Result<Vec<T>, PermError> {
        if xs.len() != self.degree() {
            return Err(PermError::LengthMismatch {
                degree: self.degree(),
                len: xs.len(),
            });
        }
        let mut out: Vec<Option<T>> = vec![None; xs.len()];
        for (i, x) in xs.iter().enumerate() {
            out[self.images[i] - 1] = Some(x.clone());
        }
        Ok(out.into_iter().map(|x| x.expect("bijection")).collect())
    }

    /// Block sum `σ₁ ⊕ … ⊕ σₙ`, acting on consecutive runs.
    pub fn direct_sum(parts: &[Permutation]) -> Self {
        let mut images = Vec::new();
        let mut shift = 0;
        for p in parts {
            images.extend(p.images.iter().map(|&x| x + shift));
            shift += p.degree();
        }
        Permutation { images }
    }

    /// Every permutation of degree `n`, in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation {
                    images: cur.clone(),
                });
                return;
            }
            for x in 1..=n {
                if !used[x - 1] {
                    used[x - 1] = true;
                    cur.push(x);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[x - 1] = false;
                }
            }
        }
        rec(n, &mut current, &mut used, &mut out);
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "perm[")?;
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// A partition `(k₁, …, kₙ)` of `k₁ + … + kₙ` into consecutive blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockStructure {
    sizes: Vec<usize>,
}

impl BlockStructure {
    pub fn new(sizes: Vec<usize>) -> Self {
        BlockStructure { sizes }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// One-indexed start offset of each block (the position before its first element).
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.sizes
            .iter()
            .map(|&k| {
                let o = acc;
                acc += k;
                o
            })
            .collect()
    }

    /// The sizes rearranged by `σ`: the size of block `i` lands in slot `σ(i)`.
    pub fn permuted(&self, sigma: &Permutation) -> Result<BlockStructure, PermError> {
        Ok(BlockStructure {
            sizes: sigma.apply_to_list(&self.sizes)?,
        })
    }
}

/// The block permutation `σ_k̄ ∈ Σ_{Σkᵢ}`.
///
/// Under [`Permutation::apply_to_list`] it rearranges the concatenation
/// `B₁ … Bₙ` into `B_{σ⁻¹(1)} … B_{σ⁻¹(n)}`: block `i` moves, intact, to slot `σ(i)`.
pub fn block_permutation(
    sigma: &Permutation,
    blocks: &BlockStructure,
) -> Result<Permutation, PermError> {
    let n = sigma.degree();
    if blocks.sizes.len() != n {
        return Err(PermError::LengthMismatch {
            degree: n,
            len: blocks.sizes.len(),
        });
    }
    let target = blocks.permuted(sigma)?;
    let target_offsets = target.offsets();
    let mut images = Vec::with_capacity(blocks.total());
    for (i, &k) in blocks.sizes.iter().enumerate() {
        let slot = sigma.apply(i + 1) - 1;
        images.extend((1..=k).map(|o| target_offsets[slot] + o));
    }
    Ok(Permutation { images })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_images(v.to_vec()).unwrap()
    }

    #[test]
    fn compose_examples() {
        let id = Permutation::identity(3);
        assert_eq!(id.compose(&id).unwrap(), id);
        let a = p(&[2, 1, 3]);
        let b = p(&[1, 3, 2]);
        // 1 -> b 1 -> a 2; 2 -> 3 -> 3; 3 -> 2 -> 1
        assert_eq!(a.compose(&b).unwrap(), p(&[2, 3, 1]));
        let c = p(&[3, 1, 4, 2]);
        assert!(c.compose(&c.inverse()).unwrap().is_identity());
        assert_eq!(
            a.compose(&Permutation::identity(2)),
            Err(PermError::DegreeMismatch(3, 2))
        );
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![1, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 1]).is_err());
        assert!(Permutation::from_images(vec![3, 1]).is_err());
        assert!(Permutation::from_images(vec![]).is_ok());
    }

    #[test]
    fn apply_to_list_conventions() {
        let xs = ['a', 'b', 'c'];
        assert_eq!(Permutation::identity(3).apply_to_list(&xs).unwrap(), xs);
        let swap = Permutation::transposition(2, 1, 2);
        assert_eq!(swap.apply_to_list(&['a', 'b']).unwrap(), vec!['b', 'a']);
        let q = p(&[2, 3, 1]);
        let moved = q.apply_to_list(&xs).unwrap();
        assert_eq!(moved, vec!['c', 'a', 'b']);
        assert_eq!(q.inverse().apply_to_list(&moved).unwrap(), xs);
        assert!(q.apply_to_list(&['a']).is_err());
    }

    #[test]
    fn block_permutation_examples() {
        let b = BlockStructure::new(vec![2, 0, 3]);
        assert!(block_permutation(&Permutation::identity(3), &b)
            .unwrap()
            .is_identity());
        let sigma = p(&[3, 1, 2]);
        let unit = BlockStructure::new(vec![1, 1, 1]);
        assert_eq!(block_permutation(&sigma, &unit).unwrap(), sigma);

        // swap with blocks (2,1): [x1 x2 | y] becomes [y | x1 x2]
        let swap = Permutation::transposition(2, 1, 2);
        let bp = block_permutation(&swap, &BlockStructure::new(vec![2, 1])).unwrap();
        assert_eq!(bp, p(&[2, 3, 1]));
        assert_eq!(
            bp.apply_to_list(&["x1", "x2", "y"]).unwrap(),
            vec!["y", "x1", "x2"]
        );
        assert!(block_permutation(&swap, &unit).is_err());
    }

    #[test]
    fn direct_sum_and_enumeration() {
        let s = Permutation::direct_sum(&[p(&[2, 1]), Permutation::identity(0), p(&[1])]);
        assert_eq!(s, p(&[2, 1, 3]));
        assert_eq!(Permutation::all(3).len(), 6);
        assert_eq!(Permutation::all(0), vec![Permutation::identity(0)]);
        assert_eq!(p(&[2, 3, 1]).to_string(), "perm[2,3,1]");
    }
}
