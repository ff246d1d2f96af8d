//! The overlapping-intervals operad `C₁′`: intervals in `[0,1]` that may
//! overlap, together with an order deciding which of two intersecting
//! intervals acts first.

use std::fmt;

use thiserror::Error;

use crate::cubes::AffineMap1;
use crate::diagrams::compose_tau;
use crate::order;
use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OverlapError {
    #[error("order has degree {order} but there are {intervals} intervals")]
    OrderDegree { order: usize, intervals: usize },
    #[error("arity mismatch: outer has {outer} intervals but {inners} inner elements were given")]
    ArityMismatch { outer: usize, inners: usize },
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Closed images share a point; a shared endpoint counts.
pub fn intersects(a: &AffineMap1, b: &AffineMap1) -> bool {
    a.intersects(b)
}

/// An element of `C₁′(n)`, always stored with its canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OverlapElement {
    intervals: Vec<AffineMap1>,
    order: Permutation,
}

impl OverlapElement {
    pub fn new(intervals: Vec<AffineMap1>, order: Permutation) -> Result<Self, OverlapError> {
        if order.degree() != intervals.len() {
            return Err(OverlapError::OrderDegree {
                order: order.degree(),
                intervals: intervals.len(),
            });
        }
        Ok(canonicalize(&OverlapElement { intervals, order }))
    }

    pub fn identity() -> Self {
        OverlapElement {
            intervals: vec![AffineMap1::identity()],
            order: Permutation::identity(1),
        }
    }

    pub fn arity(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[AffineMap1] {
        &self.intervals
    }

    pub fn order(&self) -> &Permutation {
        &self.order
    }

    fn interacts(&self) -> impl Fn(usize, usize) -> bool + '_ {
        move |i, k| intersects(&self.intervals[i - 1], &self.intervals[k - 1])
    }

    /// The Σₙ-action: interval `i` moves to slot `p(i)`, the order follows.
    pub fn act(&self, p: &Permutation) -> Result<Self, OverlapError> {
        let intervals = p.apply_to_list(&self.intervals)?;
        let order = p.compose(&self.order)?;
        Ok(canonicalize(&OverlapElement { intervals, order }))
    }
}

impl fmt::Display for OverlapElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "overlap{{ intervals=[")?;
        for (i, a) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]; order={} }}", self.order)
    }
}

/// Replaces the order by the lexicographically least one inducing the same
/// relative order on every intersecting pair.
pub fn canonicalize(e: &OverlapElement) -> OverlapElement {
    let order = order::canonical_order(&e.order, e.interacts());
    OverlapElement {
        intervals: e.intervals.clone(),
        order,
    }
}

pub fn equivalent(a: &OverlapElement, b: &OverlapElement) -> bool {
    a.intervals == b.intervals && canonicalize(a).order == canonicalize(b).order
}

/// Operad composition: intervals compose affinely through the outer
/// intervals; the order is the block order `τ` built from the outer order and
/// the inner orders.
pub fn compose_overlap(
    outer: &OverlapElement,
    inners: &[OverlapElement],
) -> Result<OverlapElement, OverlapError> {
    if outer.arity() != inners.len() {
        return Err(OverlapError::ArityMismatch {
            outer: outer.arity(),
            inners: inners.len(),
        });
    }
    let intervals = outer
        .intervals
        .iter()
        .zip(inners)
        .flat_map(|(j, inner)| inner.intervals.iter().map(move |l| j.compose(l)))
        .collect();
    let sigmas: Vec<Permutation> = inners.iter().map(|e| e.order.clone()).collect();
    let order = compose_tau(&outer.order, &sigmas)?;
    Ok(canonicalize(&OverlapElement { intervals, order }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn iv(a: i128, b: i128, d: i128) -> AffineMap1 {
        AffineMap1::from_interval(rat(a, d), rat(b, d)).unwrap()
    }

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_images(v.to_vec()).unwrap()
    }

    #[test]
    fn intersects_examples() {
        assert!(intersects(&iv(0, 2, 4), &iv(2, 4, 4)));
        assert!(!intersects(&iv(0, 1, 4), &iv(2, 4, 4)));
        assert!(intersects(&iv(0, 3, 4), &iv(1, 4, 4)));
    }

    #[test]
    fn canonicalize_examples() {
        let disjoint = vec![iv(0, 1, 4), iv(2, 3, 4)];
        let e = OverlapElement::new(disjoint, perm(&[2, 1])).unwrap();
        assert!(e.order().is_identity());

        let e = OverlapElement::new(vec![iv(0, 3, 4), iv(1, 4, 4)], perm(&[2, 1])).unwrap();
        assert_eq!(e.order(), &perm(&[2, 1]));

        // 1 and 2 overlap, 3 is disjoint; σ = (3,1,2) keeps 1 before 2
        let ivs = vec![iv(0, 2, 8), iv(1, 3, 8), iv(6, 8, 8)];
        let e = OverlapElement::new(ivs.clone(), perm(&[3, 1, 2])).unwrap();
        assert_eq!(e.order(), &perm(&[1, 2, 3]));
        let e = OverlapElement::new(ivs, perm(&[3, 2, 1])).unwrap();
        assert_eq!(e.order(), &perm(&[2, 1, 3]));
    }

    #[test]
    fn equivalent_examples() {
        let ivs = vec![iv(0, 2, 8), iv(1, 3, 8), iv(6, 8, 8)];
        let a = OverlapElement {
            intervals: ivs.clone(),
            order: perm(&[3, 1, 2]),
        };
        let b = OverlapElement {
            intervals: ivs.clone(),
            order: perm(&[1, 3, 2]),
        };
        let c = OverlapElement {
            intervals: ivs,
            order: perm(&[2, 3, 1]),
        };
        assert!(equivalent(&a, &a));
        assert!(equivalent(&a, &b));
        assert!(!equivalent(&a, &c));
    }

    #[test]
    fn compose_identities() {
        let e = OverlapElement::new(vec![iv(0, 3, 4), iv(1, 4, 4)], perm(&[2, 1])).unwrap();
        let id = OverlapElement::identity();
        assert_eq!(compose_overlap(&id, &[e.clone()]).unwrap(), e);
        assert_eq!(compose_overlap(&e, &[id.clone(), id.clone()]).unwrap(), e);
        assert!(compose_overlap(&e, &[id]).is_err());
    }
}
