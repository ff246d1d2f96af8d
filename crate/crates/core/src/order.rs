//! Order classes `[σ]`: two composition orders are equivalent when they agree
//! on every interacting pair. `σ` sends a composition position to the index
//! acting at that position, so `σ⁻¹(i)` is the position of item `i`.

use crate::perm::Permutation;

/// Greedy topological sort of the constraints `σ⁻¹(i) < σ⁻¹(k)` over
/// interacting pairs, always emitting the smallest available key.
///
/// `key` ranks candidates; ties go to the smaller index. With `key = index`
/// this is the lexicographically least permutation in the class of `sigma`.
pub fn linear_extension_by<K: Ord>(
    sigma: &Permutation,
    interacts: impl Fn(usize, usize) -> bool,
    key: impl Fn(usize) -> K,
) -> Permutation {
    let n = sigma.degree();
    let pos = sigma.inverse();
    // preds[k] = number of unplaced interacting items that must precede k
    let mut preds = vec![0usize; n];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 1..=n {
        for k in 1..=n {
            if i != k && pos.apply(i) < pos.apply(k) && interacts(i, k) {
                preds[k - 1] += 1;
                succ[i - 1].push(k);
            }
        }
    }
    let mut placed = vec![false; n];
    let mut images = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (1..=n)
            .filter(|&i| !placed[i - 1] && preds[i - 1] == 0)
            .min_by(|&a, &b| key(a).cmp(&key(b)).then(a.cmp(&b)))
            .expect("interaction constraints from a permutation are acyclic");
        placed[next - 1] = true;
        for &k in &succ[next - 1] {
            preds[k - 1] -= 1;
        }
        images.push(next);
    }
    Permutation::from_images(images).expect("every index is placed once")
}

/// Canonical representative of the order class of `sigma`.
pub fn canonical_order(sigma: &Permutation, interacts: impl Fn(usize, usize) -> bool) -> Permutation {
    linear_extension_by(sigma, interacts, |i| i)
}

/// Whether two orders agree on every interacting pair.
pub fn same_class(
    a: &Permutation,
    b: &Permutation,
    interacts: impl Fn(usize, usize) -> bool,
) -> bool {
    if a.degree() != b.degree() {
        return false;
    }
    let (pa, pb) = (a.inverse(), b.inverse());
    let n = a.degree();
    (1..=n).all(|i| {
        (i + 1..=n).all(|k| {
            !interacts(i, k) || (pa.apply(i) < pa.apply(k)) == (pb.apply(i) < pb.apply(k))
        })
    })
}
