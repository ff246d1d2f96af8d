//! The cylinder model of the infection colored operad.
//!
//! A diagram has the trivial fat `c`-string link as its starting link and a
//! list of product-shaped mufflers: an affine time interval times a
//! cross-section (an outer disk with `cᵢ` holes drilled out) in a shared
//! [`DiskForest`]. The order `σ` sends a composition position to a muffler
//! index and is only meaningful on interacting pairs, so it is stored in
//! canonical form.
//!
//! # The continuity constraint for product mufflers
//!
//! For mufflers `i` earlier than `k`, the constraint asks that the closure of
//! `Lᵢ(I×D²) \ L_k(S)` avoid the forbidden region `L_k(I° × (D² \ S°))`.
//! With `Lᵢ = Tᵢ × Oᵢ` and `L_k(S) = T_k × ⋃ H_kj`, the forbidden region is
//! `T_k° × (O_k \ ⋃ H_kj°)`, and the constraint holds iff one of
//!
//! * (a) `Oᵢ` and `O_k` are disjoint,
//! * (b) `Oᵢ` lies inside (or equals) some hole `H_kj`,
//! * (c) `Tᵢ ∩ T_k° = ∅`,
//!
//! holds. Any other position of `Oᵢ` relative to `O_k` meets the solid part
//! of `O_k` (or its round boundary, when `c_k = 1`), and a positive-length
//! overlap of times lets that happen inside `T_k°`.
//!
//! The starting link counts as position `0` with image `I × S_c`; for it only
//! clauses (a) and (b) are available since its time span is all of `I`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::cubes::AffineMap1;
use crate::diskforest::{self, DiskForest, DiskRelation, ForestError, NodeId, ROOT};
use crate::order;
use crate::perm::{PermError, Permutation};
use crate::rational::Show;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("muffler {index}: {reason}")]
    BadMuffler { index: usize, reason: String },
    #[error("no marked disks for output color {0}")]
    MissingMarked(usize),
    #[error("order has degree {order} but there are {mufflers} mufflers")]
    OrderDegree { order: usize, mufflers: usize },
    #[error("continuity constraint fails for {0}")]
    Constraint(ConstraintViolation),
    #[error("arity mismatch: {outer} inputs but {inners} diagrams")]
    ArityMismatch { outer: usize, inners: usize },
    #[error("input {index} has color {expected} but the inserted diagram has output color {found}")]
    ColorMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("muffler index {0} out of range")]
    IndexOutOfRange(usize),
    #[error(transparent)]
    Forest(#[from] ForestError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A pair `(earlier, later)` of one-indexed mufflers violating the continuity
/// constraint; `earlier = 0` is the starting link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstraintViolation {
    pub earlier: usize,
    pub later: usize,
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.earlier == 0 {
            write!(f, "starting link vs muffler {}", self.later)
        } else {
            write!(f, "mufflers ({}, {})", self.earlier, self.later)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Muffler {
    pub color: usize,
    pub time: AffineMap1,
    pub outer: NodeId,
    pub holes: Vec<NodeId>,
}

impl Muffler {
    fn disks(&self) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::once(self.outer).chain(self.holes.iter().copied())
    }
}

#[derive(Debug, Clone)]
pub struct InfectionDiagram {
    output: usize,
    forest: DiskForest,
    mufflers: Vec<Muffler>,
    order: Permutation,
}

impl InfectionDiagram {
    /// Validates the mufflers and the continuity constraint, then stores the
    /// canonical representative.
    pub fn new(
        output: usize,
        forest: DiskForest,
        mufflers: Vec<Muffler>,
        order: Permutation,
    ) -> Result<Self, DiagramError> {
        diskforest::validate(&forest)?;
        if forest.marked(output).is_none() {
            return Err(DiagramError::MissingMarked(output));
        }
        if order.degree() != mufflers.len() {
            return Err(DiagramError::OrderDegree {
                order: order.degree(),
                mufflers: mufflers.len(),
            });
        }
        for (i, m) in mufflers.iter().enumerate() {
            validate_muffler(&forest, m).map_err(|reason| DiagramError::BadMuffler {
                index: i + 1,
                reason,
            })?;
        }
        let d = InfectionDiagram {
            output,
            forest,
            mufflers,
            order,
        };
        check_constraint(&d).map_err(DiagramError::Constraint)?;
        Ok(canonicalize(&d))
    }

    /// `1_c`: one muffler filling everything, with the standard holes.
    pub fn identity(color: usize) -> Self {
        identity_diagram(color)
    }

    /// Trivial core with mufflers `aᵢ × id` for the given time maps, acting
    /// bottom to top. Slots that touch at an endpoint still interact, so the
    /// order follows time rather than index; this keeps the map equivariant.
    pub fn stacking(color: usize, times: &[AffineMap1]) -> Result<Self, DiagramError> {
        let forest = DiskForest::standard(color);
        let holes = forest.marked(color).expect("standard forest").to_vec();
        let mufflers = times
            .iter()
            .map(|t| Muffler {
                color,
                time: t.clone(),
                outer: ROOT,
                holes: holes.clone(),
            })
            .collect();
        let mut by_time: Vec<usize> = (1..=times.len()).collect();
        by_time.sort_by_key(|&i| times[i - 1].lo());
        let order = Permutation::from_images(by_time).expect("sorted indices");
        InfectionDiagram::new(color, forest, mufflers, order)
    }

    /// Color-1 diagram of full pucks: the image of an overlapping-intervals
    /// element.
    pub fn from_overlap(e: &crate::overlap::OverlapElement) -> Result<Self, DiagramError> {
        let mufflers = e
            .intervals()
            .iter()
            .map(|t| Muffler {
                color: 1,
                time: t.clone(),
                outer: ROOT,
                holes: vec![ROOT],
            })
            .collect();
        InfectionDiagram::new(1, DiskForest::new(), mufflers, e.order().clone())
    }

    /// Inverse of the stacking map: the time intervals of an `I_#`-type
    /// diagram (every muffler is `a × id` of the output color).
    pub fn stacking_times(&self) -> Option<Vec<AffineMap1>> {
        let marked = self.marked();
        self.mufflers
            .iter()
            .map(|m| {
                (m.color == self.output && m.outer == ROOT && m.holes == marked)
                    .then(|| m.time.clone())
            })
            .collect()
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn inputs(&self) -> Vec<usize> {
        self.mufflers.iter().map(|m| m.color).collect()
    }

    pub fn arity(&self) -> usize {
        self.mufflers.len()
    }

    pub fn forest(&self) -> &DiskForest {
        &self.forest
    }

    pub fn mufflers(&self) -> &[Muffler] {
        &self.mufflers
    }

    pub fn order(&self) -> &Permutation {
        &self.order
    }

    /// Marked disks of the output color (the root when the color is 1).
    pub fn marked(&self) -> Vec<NodeId> {
        self.forest
            .marked(self.output)
            .expect("validated at construction")
            .to_vec()
    }

    /// Position of muffler `i` in the composition order.
    pub fn position(&self, i: usize) -> usize {
        self.order.inverse().apply(i)
    }

    fn muffler(&self, i: usize) -> Result<&Muffler, DiagramError> {
        if i == 0 || i > self.mufflers.len() {
            Err(DiagramError::IndexOutOfRange(i))
        } else {
            Ok(&self.mufflers[i - 1])
        }
    }

    pub(crate) fn interacts(&self, i: usize, k: usize) -> bool {
        let (a, b) = (&self.mufflers[i - 1], &self.mufflers[k - 1]);
        a.time.intersects(&b.time) && self.forest.rel(a.outer, b.outer) != DiskRelation::Disjoint
    }

    /// Same forest and output with new mufflers and order, unchecked.
    pub(crate) fn with_raw_parts(&self, mufflers: Vec<Muffler>, order: Permutation) -> Self {
        InfectionDiagram {
            output: self.output,
            forest: self.forest.clone(),
            mufflers,
            order,
        }
    }

    /// The continuity constraint for muffler `earlier` acting before `later`.
    pub fn pair_allowed(&self, earlier: usize, later: usize) -> bool {
        let (a, b) = (&self.mufflers[earlier - 1], &self.mufflers[later - 1]);
        pair_ok(&self.forest, a, b)
    }

    /// Every relation that is visible at some common time, plus the position
    /// of every muffler relative to the starting link. Two diagrams with equal
    /// keys are the same operation.
    fn key(&self) -> DiagramKey {
        let marked = self.marked();
        let rel_rows = |a: &Muffler, others: &[NodeId]| -> Vec<DiskRelation> {
            a.disks()
                .flat_map(|x| others.iter().map(move |&y| (x, y)))
                .map(|(x, y)| self.forest.rel(x, y))
                .collect()
        };
        let mut pairs = Vec::new();
        for i in 0..self.mufflers.len() {
            for k in i + 1..self.mufflers.len() {
                let (a, b) = (&self.mufflers[i], &self.mufflers[k]);
                if a.time.intersects(&b.time) {
                    let bd: Vec<NodeId> = b.disks().collect();
                    pairs.push((i, k, rel_rows(a, &bd)));
                }
            }
        }
        DiagramKey {
            output: self.output,
            mufflers: self
                .mufflers
                .iter()
                .map(|m| (m.color, m.time.clone(), rel_rows(m, &marked)))
                .collect(),
            order: self.order.clone(),
            pairs,
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
struct DiagramKey {
    output: usize,
    mufflers: Vec<(usize, AffineMap1, Vec<DiskRelation>)>,
    order: Permutation,
    pairs: Vec<(usize, usize, Vec<DiskRelation>)>,
}

impl PartialEq for InfectionDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for InfectionDiagram {}

fn validate_muffler(forest: &DiskForest, m: &Muffler) -> Result<(), String> {
    if m.outer >= forest.len() || m.holes.iter().any(|&h| h >= forest.len()) {
        return Err("unknown disk".into());
    }
    if m.color == 0 || m.holes.len() != m.color {
        return Err(format!("color {} needs {} holes, found {}", m.color, m.color, m.holes.len()));
    }
    if m.color == 1 {
        if m.holes[0] != m.outer {
            return Err("a one-holed muffler's hole is its whole outer disk".into());
        }
        return Ok(());
    }
    for (i, &a) in m.holes.iter().enumerate() {
        if !forest.is_strictly_inside(a, m.outer) {
            return Err(format!("hole {} is not strictly inside the outer disk", forest.name(a)));
        }
        for &b in &m.holes[i + 1..] {
            if forest.rel(a, b) != DiskRelation::Disjoint {
                return Err(format!(
                    "holes {} and {} are not disjoint",
                    forest.name(a),
                    forest.name(b)
                ));
            }
        }
    }
    Ok(())
}

/// The continuity constraint for product mufflers, `earlier` acting before
/// `later`: disjoint outer disks, the earlier outer disk inside a hole of the
/// later muffler, or no interior time overlap.
pub fn pair_ok(forest: &DiskForest, earlier: &Muffler, later: &Muffler) -> bool {
    forest.rel(earlier.outer, later.outer) == DiskRelation::Disjoint
        || later.holes.iter().any(|&h| forest.inside_or_equal(earlier.outer, h))
        || !earlier.time.interiors_meet(&later.time)
}

/// The constraint against the starting link: every strand disk is clear of
/// the muffler or inside one of its holes.
pub fn start_ok(forest: &DiskForest, marked: &[NodeId], later: &Muffler) -> bool {
    marked.iter().all(|&m| {
        forest.rel(m, later.outer) == DiskRelation::Disjoint
            || later.holes.iter().any(|&h| forest.inside_or_equal(m, h))
    })
}

/// Whether the closed images of mufflers `i` and `k` meet.
pub fn images_intersect(d: &InfectionDiagram, i: usize, k: usize) -> Result<bool, DiagramError> {
    d.muffler(i)?;
    d.muffler(k)?;
    Ok(d.interacts(i, k))
}

/// Checks the continuity constraint for every ordered pair, starting link
/// included, and reports the first failure.
pub fn check_constraint(d: &InfectionDiagram) -> Result<(), ConstraintViolation> {
    let marked = d.marked();
    let seq = d.order.images();
    for (p, &k) in seq.iter().enumerate() {
        let later = &d.mufflers[k - 1];
        if !start_ok(&d.forest, &marked, later) {
            return Err(ConstraintViolation { earlier: 0, later: k });
        }
        for &i in &seq[..p] {
            if !pair_ok(&d.forest, &d.mufflers[i - 1], later) {
                return Err(ConstraintViolation { earlier: i, later: k });
            }
        }
    }
    Ok(())
}

/// Canonical representative: least order in the class, unreferenced disks
/// pruned, disks renumbered depth-first and renamed `root`, `m1…`, `d1…`.
pub fn canonicalize(d: &InfectionDiagram) -> InfectionDiagram {
    let order = order::canonical_order(&d.order, |i, k| d.interacts(i, k));
    let marked = d.marked();

    let referenced: BTreeSet<NodeId> = d.mufflers.iter().flat_map(|m| m.disks()).collect();
    let mut forest = d.forest.clone();
    // keep only the output color's marked disks
    let others: Vec<usize> = forest
        .marked_colors()
        .map(|(c, _)| c)
        .filter(|&c| c != 1 && c != d.output)
        .collect();
    if !others.is_empty() {
        let mut f = DiskForest::from_parts(
            (0..forest.len()).map(|n| forest.parent(n)).collect(),
            (0..forest.len()).map(|n| forest.name(n).to_string()).collect(),
            Default::default(),
        );
        if d.output != 1 {
            f.set_marked(d.output, marked.clone());
        }
        forest = f;
    }
    let (pruned, pmap) = forest.prune(&referenced);
    let remap = |n: NodeId| pmap[n].expect("referenced disks are kept");
    let mufflers: Vec<Muffler> = d
        .mufflers
        .iter()
        .map(|m| Muffler {
            color: m.color,
            time: m.time.clone(),
            outer: remap(m.outer),
            holes: m.holes.iter().map(|&h| remap(h)).collect(),
        })
        .collect();
    let marked: Vec<NodeId> = marked.iter().map(|&m| remap(m)).collect();

    // Role of a disk: marked j < outer of muffler k < hole j of muffler k.
    let mut role: Vec<Option<(usize, usize, usize)>> = vec![None; pruned.len()];
    let mut give = |n: NodeId, r: (usize, usize, usize)| {
        if role[n].is_none_or(|old| r < old) {
            role[n] = Some(r);
        }
    };
    if d.output >= 2 {
        for (j, &m) in marked.iter().enumerate() {
            give(m, (0, j, 0));
        }
    }
    for (k, m) in mufflers.iter().enumerate() {
        give(m.outer, (1, k, 0));
        for (j, &h) in m.holes.iter().enumerate() {
            give(h, (1, k, j + 1));
        }
    }
    let mut subtree_min = role.clone();
    for n in pruned.top_down().into_iter().rev() {
        if let (Some(p), Some(r)) = (pruned.parent(n), subtree_min[n]) {
            if subtree_min[p].is_none_or(|old| r < old) {
                subtree_min[p] = Some(r);
            }
        }
    }
    let mut dfs = Vec::with_capacity(pruned.len());
    let mut stack = vec![ROOT];
    while let Some(n) = stack.pop() {
        dfs.push(n);
        let mut ch = pruned.children(n);
        ch.sort_by_key(|&c| std::cmp::Reverse(subtree_min[c]));
        stack.extend(ch);
    }
    let marked_new: Vec<usize> = marked.clone();
    let names: Vec<String> = {
        let mut counter = 0;
        dfs.iter()
            .map(|&old| {
                if old == ROOT {
                    "root".to_string()
                } else if let Some(j) = marked_new.iter().position(|&m| m == old).filter(|_| d.output >= 2) {
                    format!("m{}", j + 1)
                } else {
                    counter += 1;
                    format!("d{counter}")
                }
            })
            .collect()
    };
    let (forest, map) = pruned.reindexed(&dfs, |i| names[i].clone());
    let mufflers = mufflers
        .into_iter()
        .map(|m| Muffler {
            color: m.color,
            time: m.time,
            outer: map[m.outer],
            holes: m.holes.iter().map(|&h| map[h]).collect(),
        })
        .collect();
    InfectionDiagram {
        output: d.output,
        forest,
        mufflers,
        order,
    }
}

/// The permutation of a composite diagram.
///
/// Position `p` of `ρ` holds outer muffler `ρ(p)`, which expands into the
/// `k_{ρ(p)}` mufflers of its inner diagram in that diagram's order. So the
/// composite muffler `(a, b)`, flattened to `b + Σ_{i<a} kᵢ`, sits at
/// position `σ_a⁻¹(b) + Σ_{p<ρ⁻¹(a)} k_{ρ(p)}`.
pub fn compose_tau(rho: &Permutation, sigmas: &[Permutation]) -> Result<Permutation, PermError> {
    if rho.degree() != sigmas.len() {
        return Err(PermError::LengthMismatch {
            degree: rho.degree(),
            len: sigmas.len(),
        });
    }
    let sizes: Vec<usize> = sigmas.iter().map(|s| s.degree()).collect();
    let mut images = Vec::with_capacity(sizes.iter().sum());
    for p in 1..=rho.degree() {
        let a = rho.apply(p);
        let offset: usize = sizes[..a - 1].iter().sum();
        images.extend(sigmas[a - 1].images().iter().map(|&b| b + offset));
    }
    Permutation::from_images(images)
}

/// Colored-operad composition of trivial-core diagrams.
pub fn compose(outer: &InfectionDiagram, inners: &[InfectionDiagram]) -> Result<InfectionDiagram, DiagramError> {
    if outer.arity() != inners.len() {
        return Err(DiagramError::ArityMismatch {
            outer: outer.arity(),
            inners: inners.len(),
        });
    }
    let mut forest = outer.forest.clone();
    let mut mufflers = Vec::new();
    for (a, (j, inner)) in outer.mufflers.iter().zip(inners).enumerate() {
        if inner.output != j.color {
            return Err(DiagramError::ColorMismatch {
                index: a + 1,
                expected: j.color,
                found: inner.output,
            });
        }
        let (grafted, map) = forest.graft(j.outer, &j.holes, &inner.forest, j.color)?;
        forest = grafted;
        mufflers.extend(inner.mufflers.iter().map(|l| Muffler {
            color: l.color,
            time: j.time.compose(&l.time),
            outer: map[l.outer],
            holes: l.holes.iter().map(|&h| map[h]).collect(),
        }));
    }
    let sigmas: Vec<Permutation> = inners.iter().map(|d| d.order.clone()).collect();
    let order = compose_tau(&outer.order, &sigmas)?;
    let d = InfectionDiagram {
        output: outer.output,
        forest,
        mufflers,
        order,
    };
    check_constraint(&d).map_err(DiagramError::Constraint)?;
    Ok(canonicalize(&d))
}

/// The Σₙ-action: muffler `i` moves to slot `p(i)` and the order follows it.
pub fn act_symmetric(d: &InfectionDiagram, p: &Permutation) -> Result<InfectionDiagram, DiagramError> {
    let mufflers = p.apply_to_list(&d.mufflers)?;
    let order = p.compose(&d.order)?;
    Ok(canonicalize(&InfectionDiagram {
        output: d.output,
        forest: d.forest.clone(),
        mufflers,
        order,
    }))
}

pub fn identity_diagram(color: usize) -> InfectionDiagram {
    InfectionDiagram::stacking(color, &[AffineMap1::identity()]).expect("identity diagram is valid")
}

impl fmt::Display for InfectionDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "diagram{{ sig=(")?;
        for (i, m) in self.mufflers.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", m.color)?;
        }
        write!(f, ";{}); forest={};", self.output, self.forest)?;
        for m in &self.mufflers {
            write!(
                f,
                " muffler{{ time=({},{}); outer={}; holes=(",
                Show(&m.time.lo()),
                Show(&m.time.hi()),
                self.forest.name(m.outer)
            )?;
            for (j, &h) in m.holes.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.forest.name(h))?;
            }
            write!(f, ") }};")?;
        }
        write!(f, " order={} }}", self.order)
    }
}

impl fmt::Display for DiskForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn node(fo: &DiskForest, n: NodeId, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "{}", fo.name(n))?;
            let ch = fo.children(n);
            if !ch.is_empty() {
                write!(f, "[")?;
                for c in ch {
                    write!(f, " ")?;
                    node(fo, c, f)?;
                }
                write!(f, " ]")?;
            }
            Ok(())
        }
        write!(f, "forest{{ ")?;
        node(self, ROOT, f)?;
        for (c, disks) in self.marked_colors() {
            if c == 1 {
                continue;
            }
            write!(f, " marked{c}=(")?;
            for (j, &m) in disks.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.name(m))?;
            }
            write!(f, ")")?;
        }
        write!(f, " }}")
    }
}
