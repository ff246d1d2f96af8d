//! Infection diagrams acting on link words.
//!
//! Each muffler contributes a word determined by which strands its holes
//! enclose; the contributions are multiplied along a linear extension of the
//! order on interacting mufflers, with time order breaking ties. Overlapping
//! mufflers can only contribute central letters or a single nested insertion,
//! so the choice of linear extension does not change the normal form.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cubes::AffineMap1;
use crate::diagrams::{DiagramError, InfectionDiagram, Muffler};
use crate::linkmonoid::{self, CentralKind, LinkError, LinkWord};
use crate::order;
use crate::perm::Permutation;
use crate::rational::rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("only output colors 1 and 2 act on link words, found {0}")]
    UnsupportedColor(usize),
    #[error("diagram has {expected} inputs but {found} links were given")]
    ArityMismatch { expected: usize, found: usize },
    #[error("input {index} has color {expected} but the link has {found} strands")]
    ColorMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("muffler {muffler}: unrecognized hole semantics {holes:?}")]
    UnrecognizedHoles {
        muffler: usize,
        holes: Vec<BTreeSet<usize>>,
    },
    #[error("muffler index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("cannot reorder after the swap: {0}")]
    Swap(String),
    #[error("word is not in S2^0")]
    NotInS20,
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// What a muffler does to the strands of the starting link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MufflerKind {
    /// A full puck of a knot diagram: inserts a knot.
    Knot,
    /// A puck around both strands: inserts a cable.
    B,
    /// A puck around strand 1 only.
    A1,
    /// A puck around strand 2 only.
    A2,
    /// Holes around strands 1 and 2 respectively: inserts a 2-string link.
    TwoHoled,
    /// No strand passes through a hole.
    Idle,
}

/// The strand set of each hole of one muffler.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoleSemantics {
    pub holes: Vec<BTreeSet<usize>>,
}

impl HoleSemantics {
    /// Strand `j` passes through a hole iff the `j`-th marked disk lies inside
    /// or equals it.
    pub fn of(d: &InfectionDiagram, muffler: usize) -> Result<Self, ActionError> {
        let m = d
            .mufflers()
            .get(muffler.wrapping_sub(1))
            .ok_or(ActionError::IndexOutOfRange(muffler))?;
        let marked = d.marked();
        let holes = m
            .holes
            .iter()
            .map(|&h| {
                marked
                    .iter()
                    .enumerate()
                    .filter(|&(_, &s)| d.forest().inside_or_equal(s, h))
                    .map(|(j, _)| j + 1)
                    .collect()
            })
            .collect();
        Ok(HoleSemantics { holes })
    }

    pub fn kind(&self, output: usize, muffler: usize) -> Result<MufflerKind, ActionError> {
        let sets: Vec<Vec<usize>> = self.holes.iter().map(|s| s.iter().copied().collect()).collect();
        let sets: Vec<&[usize]> = sets.iter().map(|v| v.as_slice()).collect();
        let kind = match (output, sets.as_slice()) {
            (1, [[1]]) => Some(MufflerKind::Knot),
            (2, [[1, 2]]) => Some(MufflerKind::B),
            (2, [[1]]) => Some(MufflerKind::A1),
            (2, [[2]]) => Some(MufflerKind::A2),
            (2, [[1], [2]]) => Some(MufflerKind::TwoHoled),
            (_, s) if s.len() <= 2 && s.iter().all(|h| h.is_empty()) => Some(MufflerKind::Idle),
            _ => None,
        };
        kind.ok_or_else(|| ActionError::UnrecognizedHoles {
            muffler,
            holes: self.holes.clone(),
        })
    }
}

/// The kind of every muffler.
pub fn muffler_kinds(d: &InfectionDiagram) -> Result<Vec<MufflerKind>, ActionError> {
    if !(1..=2).contains(&d.output()) {
        return Err(ActionError::UnsupportedColor(d.output()));
    }
    (1..=d.arity())
        .map(|i| HoleSemantics::of(d, i)?.kind(d.output(), i))
        .collect()
}

fn contribution(kind: MufflerKind, link: &LinkWord, output: usize) -> Result<LinkWord, ActionError> {
    Ok(match kind {
        MufflerKind::Knot | MufflerKind::TwoHoled => link.clone(),
        MufflerKind::B => LinkWord::central_of(CentralKind::Cable, link)?,
        MufflerKind::A1 => LinkWord::central_of(CentralKind::SplitA, link)?,
        MufflerKind::A2 => LinkWord::central_of(CentralKind::SplitB, link)?,
        MufflerKind::Idle => LinkWord::trivial(output),
    })
}

/// The order in which contributions are multiplied: `σ` on pairs whose
/// images overlap in open time, start time otherwise. Mufflers that only
/// touch at an endpoint re-embed disjoint slabs, so either order gives the
/// same link.
pub fn evaluation_order(d: &InfectionDiagram) -> Permutation {
    evaluation_order_from(d, d.order())
}

fn evaluation_order_from(d: &InfectionDiagram, sigma: &Permutation) -> Permutation {
    let ms = d.mufflers();
    order::linear_extension_by(
        sigma,
        |i, k| d.interacts(i, k) && ms[i - 1].time.interiors_meet(&ms[k - 1].time),
        |i| ms[i - 1].time.lo(),
    )
}

/// The link produced by inserting `links[i]` into muffler `i`.
pub fn act(d: &InfectionDiagram, links: &[LinkWord]) -> Result<LinkWord, ActionError> {
    act_with_order(d, links, d.order())
}

/// As [`act`], reading the order from `sigma` instead of the stored
/// canonical representative. `sigma` should induce the same relative order
/// on interacting pairs.
pub fn act_with_order(d: &InfectionDiagram, links: &[LinkWord], sigma: &Permutation) -> Result<LinkWord, ActionError> {
    let kinds = muffler_kinds(d)?;
    if links.len() != d.arity() {
        return Err(ActionError::ArityMismatch {
            expected: d.arity(),
            found: links.len(),
        });
    }
    for (i, (m, w)) in d.mufflers().iter().zip(links).enumerate() {
        if m.color != w.color() {
            return Err(ActionError::ColorMismatch {
                index: i + 1,
                expected: m.color,
                found: w.color(),
            });
        }
    }
    let mut out = LinkWord::trivial(d.output());
    for &i in evaluation_order_from(d, sigma).images() {
        out = linkmonoid::mul(&out, &contribution(kinds[i - 1], &links[i - 1], d.output())?)?;
    }
    Ok(out)
}

/// The diagram with the time intervals of mufflers `i` and `k` exchanged.
///
/// For `(i, k)` the new order follows the new times when the constraint
/// allows it; every other interacting pair keeps its old relative order
/// when allowed. Pairs with only one allowed direction are forced.
pub fn swap_times(d: &InfectionDiagram, i: usize, k: usize) -> Result<InfectionDiagram, ActionError> {
    let n = d.arity();
    for x in [i, k] {
        if x == 0 || x > n {
            return Err(ActionError::IndexOutOfRange(x));
        }
    }
    let mut mufflers: Vec<Muffler> = d.mufflers().to_vec();
    let (ti, tk) = (mufflers[i - 1].time.clone(), mufflers[k - 1].time.clone());
    mufflers[i - 1].time = tk;
    mufflers[k - 1].time = ti;
    let probe = d.with_raw_parts(mufflers.clone(), Permutation::identity(n));
    let pos = d.order().inverse();

    let mut before: Vec<Vec<bool>> = vec![vec![false; n + 1]; n + 1];
    for a in 1..=n {
        for b in a + 1..=n {
            if !probe.interacts(a, b) {
                continue;
            }
            let preferred = if (a, b) == (i.min(k), i.max(k)) {
                let (ma, mb) = (&mufflers[a - 1], &mufflers[b - 1]);
                (ma.time.lo(), ma.time.hi()) <= (mb.time.lo(), mb.time.hi())
            } else {
                pos.apply(a) < pos.apply(b)
            };
            let (first, second) = if preferred { (a, b) } else { (b, a) };
            if probe.pair_allowed(first, second) {
                before[first][second] = true;
            } else if probe.pair_allowed(second, first) {
                before[second][first] = true;
            } else {
                return Err(ActionError::Swap(format!("mufflers {a} and {b} cannot be ordered")));
            }
        }
    }
    let mut placed = vec![false; n + 1];
    let mut images = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (1..=n)
            .filter(|&x| !placed[x] && (1..=n).all(|y| placed[y] || !before[y][x]))
            .min_by(|&x, &y| mufflers[x - 1].time.lo().cmp(&mufflers[y - 1].time.lo()).then(x.cmp(&y)))
            .ok_or_else(|| ActionError::Swap("forced orders form a cycle".into()))?;
        placed[next] = true;
        images.push(next);
    }
    let order = Permutation::from_images(images).expect("each muffler placed once");
    Ok(InfectionDiagram::new(d.output(), d.forest().clone(), mufflers, order)?)
}

/// Whether exchanging the times of mufflers `i` and `k` leaves the action
/// unchanged.
pub fn verify_comm_swap(
    d: &InfectionDiagram,
    i: usize,
    k: usize,
    links: &[LinkWord],
) -> Result<bool, ActionError> {
    let kinds = muffler_kinds(d)?;
    for x in [i, k] {
        match kinds.get(x.wrapping_sub(1)) {
            None => return Err(ActionError::IndexOutOfRange(x)),
            Some(MufflerKind::Knot | MufflerKind::Idle) => {
                return Err(ActionError::UnrecognizedHoles {
                    muffler: x,
                    holes: HoleSemantics::of(d, x)?.holes,
                })
            }
            Some(_) => {}
        }
    }
    let swapped = swap_times(d, i, k)?;
    Ok(act(d, links)? == act(&swapped, links)?)
}

/// The stacking element with `n` equal slots in index order.
pub fn canonical_stacking(n: usize) -> InfectionDiagram {
    let den = n.max(1) as i128;
    let times: Vec<AffineMap1> = (0..n as i128)
        .map(|i| AffineMap1::from_interval(rat(i, den), rat(i + 1, den)).expect("slot inside [0,1]"))
        .collect();
    InfectionDiagram::stacking(2, &times).expect("disjoint slots")
}

/// Splits a word of `S₂⁰` into the canonical stacking element and its prime
/// factors. Each factor carries `-ℓ` twists of its letter so that it has
/// linking number zero.
pub fn decompose_s2(w: &LinkWord) -> Result<(InfectionDiagram, Vec<LinkWord>), ActionError> {
    if !linkmonoid::in_s2_0(w)? {
        return Err(ActionError::NotInS20);
    }
    let body = linkmonoid::mod_center(w)?;
    let factors = body
        .into_iter()
        .map(|x| {
            let lk = x.linking;
            linkmonoid::add_twists(&LinkWord::letter(x), -lk).expect("color 2")
        })
        .collect::<Vec<_>>();
    Ok((canonical_stacking(factors.len()), factors))
}
