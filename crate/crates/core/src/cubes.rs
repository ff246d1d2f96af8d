//! The little `j`-cubes operad over the unit interval `[0, 1]`, with exact
//! rational coordinates.

use std::fmt;

use thiserror::Error;

use crate::diagrams::{DiagramError, InfectionDiagram};
use crate::rational::{one, zero, Rational, Show};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubesError {
    #[error("interval ({0}, {1}) is not an increasing subinterval of [0,1]")]
    BadInterval(String, String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("arity mismatch: outer has {outer} cubes but {inners} inner elements were given")]
    ArityMismatch { outer: usize, inners: usize },
    #[error("cubes {0} and {1} have overlapping interiors")]
    Overlap(usize, usize),
    #[error("stacking requires a one-dimensional element, found dimension {0}")]
    NotOneDimensional(usize),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// An increasing affine map `t ↦ scale·t + offset` of `[0,1]` into itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineMap1 {
    scale: Rational,
    offset: Rational,
}

impl AffineMap1 {
    pub fn identity() -> Self {
        AffineMap1 {
            scale: one(),
            offset: zero(),
        }
    }

    /// The unique increasing affine map with image `[lo, hi]`.
    pub fn from_interval(lo: Rational, hi: Rational) -> Result<Self, CubesError> {
        if !(lo >= zero() && hi <= one() && lo < hi) {
            return Err(CubesError::BadInterval(
                Show(&lo).to_string(),
                Show(&hi).to_string(),
            ));
        }
        Ok(AffineMap1 {
            scale: hi - lo,
            offset: lo,
        })
    }

    pub fn scale(&self) -> Rational {
        self.scale
    }

    pub fn offset(&self) -> Rational {
        self.offset
    }

    pub fn lo(&self) -> Rational {
        self.offset
    }

    pub fn hi(&self) -> Rational {
        self.offset + self.scale
    }

    pub fn eval(&self, t: Rational) -> Rational {
        self.scale * t + self.offset
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap1) -> AffineMap1 {
        AffineMap1 {
            scale: self.scale * inner.scale,
            offset: self.scale * inner.offset + self.offset,
        }
    }

    /// Closed images meet (touching endpoints count).
    pub fn intersects(&self, other: &AffineMap1) -> bool {
        self.lo() <= other.hi() && other.lo() <= self.hi()
    }

    /// Open images meet. For intervals of positive length this is the same
    /// as the closed image of one meeting the open image of the other.
    pub fn interiors_meet(&self, other: &AffineMap1) -> bool {
        self.lo() < other.hi() && other.lo() < self.hi()
    }
}

impl fmt::Display for AffineMap1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", Show(&self.lo()), Show(&self.hi()))
    }
}

/// One little cube: an increasing affine map per axis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LittleCube {
    pub axes: Vec<AffineMap1>,
}

impl LittleCube {
    pub fn new(axes: Vec<AffineMap1>) -> Self {
        LittleCube { axes }
    }

    pub fn identity(dim: usize) -> Self {
        LittleCube {
            axes: vec![AffineMap1::identity(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn compose(&self, inner: &LittleCube) -> LittleCube {
        LittleCube {
            axes: self
                .axes
                .iter()
                .zip(&inner.axes)
                .map(|(a, b)| a.compose(b))
                .collect(),
        }
    }

    pub fn interiors_meet(&self, other: &LittleCube) -> bool {
        self.axes
            .iter()
            .zip(&other.axes)
            .all(|(a, b)| a.interiors_meet(b))
    }
}

impl fmt::Display for LittleCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cube[")?;
        for (i, a) in self.axes.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// An element of `C_j(n)`: `n` cubes in `[0,1]^j` with disjoint interiors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubesElement {
    dim: usize,
    cubes: Vec<LittleCube>,
}

impl CubesElement {
    pub fn new(dim: usize, cubes: Vec<LittleCube>) -> Result<Self, CubesError> {
        for c in &cubes {
            if c.dim() != dim {
                return Err(CubesError::DimensionMismatch {
                    expected: dim,
                    found: c.dim(),
                });
            }
        }
        let e = CubesElement { dim, cubes };
        validate(&e)?;
        Ok(e)
    }

    pub fn identity(dim: usize) -> Self {
        CubesElement {
            dim,
            cubes: vec![LittleCube::identity(dim)],
        }
    }

    /// `C₁(n)` element from closed intervals.
    pub fn intervals(intervals: &[(Rational, Rational)]) -> Result<Self, CubesError> {
        let cubes = intervals
            .iter()
            .map(|&(lo, hi)| Ok(LittleCube::new(vec![AffineMap1::from_interval(lo, hi)?])))
            .collect::<Result<Vec<_>, CubesError>>()?;
        CubesElement::new(1, cubes)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.cubes.len()
    }

    pub fn cubes(&self) -> &[LittleCube] {
        &self.cubes
    }

    /// The Σₙ-action: cube `i` moves to slot `σ(i)`.
    pub fn act(&self, sigma: &crate::perm::Permutation) -> Result<Self, crate::perm::PermError> {
        Ok(CubesElement {
            dim: self.dim,
            cubes: sigma.apply_to_list(&self.cubes)?,
        })
    }
}

impl fmt::Display for CubesElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cubes{{ dim={}; cubes=[", self.dim)?;
        for (i, c) in self.cubes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "] }}")
    }
}

/// Reports the first pair of cubes whose open images overlap.
pub fn validate(e: &CubesElement) -> Result<(), CubesError> {
    for i in 0..e.cubes.len() {
        for k in i + 1..e.cubes.len() {
            if e.cubes[i].interiors_meet(&e.cubes[k]) {
                return Err(CubesError::Overlap(i + 1, k + 1));
            }
        }
    }
    Ok(())
}

/// Operad composition: cube `i` of `outer` is replaced by its composite with
/// every cube of `inners[i]`, blocks concatenated in index order.
pub fn cubes_compose(outer: &CubesElement, inners: &[CubesElement]) -> Result<CubesElement, CubesError> {
    if outer.arity() != inners.len() {
        return Err(CubesError::ArityMismatch {
            outer: outer.arity(),
            inners: inners.len(),
        });
    }
    let mut cubes = Vec::new();
    for (l, inner) in outer.cubes.iter().zip(inners) {
        if inner.dim != outer.dim {
            return Err(CubesError::DimensionMismatch {
                expected: outer.dim,
                found: inner.dim,
            });
        }
        cubes.extend(inner.cubes.iter().map(|m| l.compose(m)));
    }
    let e = CubesElement {
        dim: outer.dim,
        cubes,
    };
    validate(&e)?;
    Ok(e)
}

/// The map `C₁ → I_{{c}}`: each interval `a` becomes the muffler `a × id`
/// on the trivial fat `c`-string link, acting in time order.
pub fn c1_to_stacking(e: &CubesElement, color: usize) -> Result<InfectionDiagram, CubesError> {
    if e.dim != 1 {
        return Err(CubesError::NotOneDimensional(e.dim));
    }
    let times: Vec<AffineMap1> = e.cubes.iter().map(|c| c.axes[0].clone()).collect();
    Ok(InfectionDiagram::stacking(color, &times)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn iv(a: (i128, i128), b: (i128, i128)) -> AffineMap1 {
        AffineMap1::from_interval(rat(a.0, a.1), rat(b.0, b.1)).unwrap()
    }

    #[test]
    fn affine_compose_examples() {
        let b = iv((1, 3), (1, 2));
        assert_eq!(AffineMap1::identity().compose(&b), b);
        let half = iv((0, 1), (1, 2));
        assert_eq!(half.compose(&half), iv((0, 1), (1, 4)));
        // a(t) = t/2 + 1/2, b(t) = t/3: composite at 0 and 1 is 1/2 and 2/3
        let a = iv((1, 2), (1, 1));
        let b = iv((0, 1), (1, 3));
        let ab = a.compose(&b);
        assert_eq!(ab.eval(rat(0, 1)), rat(1, 2));
        assert_eq!(ab.eval(rat(1, 1)), rat(2, 3));
        assert_eq!(ab.scale(), rat(1, 6));
        assert_eq!(ab.offset(), rat(1, 2));
    }

    #[test]
    fn bad_intervals() {
        assert!(AffineMap1::from_interval(rat(1, 2), rat(1, 2)).is_err());
        assert!(AffineMap1::from_interval(rat(-1, 2), rat(1, 2)).is_err());
        assert!(AffineMap1::from_interval(rat(1, 2), rat(3, 2)).is_err());
    }

    #[test]
    fn validate_examples() {
        let q = |a: i128, b: i128| (rat(a, 4), rat(b, 4));
        assert!(CubesElement::intervals(&[q(0, 1), q(2, 3)]).is_ok());
        assert_eq!(
            CubesElement::intervals(&[q(0, 2), q(0, 2)]),
            Err(CubesError::Overlap(1, 2))
        );
        assert!(CubesElement::intervals(&[q(0, 2), q(2, 4)]).is_ok());
        // 2-cubes overlapping only in projection on one axis are fine
        let c1 = LittleCube::new(vec![iv((0, 1), (1, 2)), iv((0, 1), (1, 1))]);
        let c2 = LittleCube::new(vec![iv((1, 4), (1, 1)), iv((0, 1), (1, 1))]);
        assert!(CubesElement::new(2, vec![c1.clone(), c2]).is_err());
        let c3 = LittleCube::new(vec![iv((1, 4), (1, 1)), iv((0, 1), (1, 2))]);
        let c4 = LittleCube::new(vec![iv((1, 4), (1, 1)), iv((1, 2), (1, 1))]);
        assert!(CubesElement::new(2, vec![c3, c4]).is_ok());
    }

    #[test]
    fn compose_examples() {
        let halves = CubesElement::intervals(&[(rat(0, 1), rat(1, 2)), (rat(1, 2), rat(1, 1))]).unwrap();
        let id = CubesElement::identity(1);
        assert_eq!(cubes_compose(&id, &[halves.clone()]).unwrap(), halves);
        assert_eq!(
            cubes_compose(&halves, &[id.clone(), id.clone()]).unwrap(),
            halves
        );
        let quarters = cubes_compose(&halves, &[halves.clone(), halves.clone()]).unwrap();
        let endpoints: Vec<_> = quarters
            .cubes()
            .iter()
            .map(|c| (c.axes[0].lo(), c.axes[0].hi()))
            .collect();
        assert_eq!(
            endpoints,
            (0..4).map(|i| (rat(i, 4), rat(i + 1, 4))).collect::<Vec<_>>()
        );
        assert!(matches!(
            cubes_compose(&halves, &[id.clone()]),
            Err(CubesError::ArityMismatch { .. })
        ));
        assert!(matches!(
            cubes_compose(&halves, &[id.clone(), CubesElement::identity(2)]),
            Err(CubesError::DimensionMismatch { .. })
        ));
    }
}
