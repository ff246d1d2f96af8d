//! Random instances for the law checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cubes::{AffineMap1, CubesElement, LittleCube};
use crate::diagrams::{self, InfectionDiagram, Muffler};
use crate::diskforest::{DiskForest, DiskRelation, NodeId};
use crate::linkmonoid::{Alphabet, CentralKind, CentralLetter, LinkWord};
use crate::overlap::OverlapElement;
use crate::perm::Permutation;
use crate::rational::rat;

pub fn perm(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut v: Vec<usize> = (1..=n).collect();
    v.shuffle(rng);
    Permutation::from_images(v).expect("shuffled identity")
}

/// A non-degenerate interval with endpoints on the grid `i/grid`.
pub fn interval(rng: &mut impl Rng, grid: i128) -> AffineMap1 {
    let a = rng.gen_range(0..grid);
    let b = rng.gen_range(a + 1..=grid);
    AffineMap1::from_interval(rat(a, grid), rat(b, grid)).expect("grid interval")
}

fn sub_interval(rng: &mut impl Rng, lo: i128, hi: i128, grid: i128) -> AffineMap1 {
    let a = rng.gen_range(lo..hi);
    let b = rng.gen_range(a + 1..=hi);
    AffineMap1::from_interval(rat(a, grid), rat(b, grid)).expect("grid interval")
}

/// `n` interior-disjoint cubes: rejection sampling, falling back to one
/// random box per slab of the first axis.
pub fn cubes(rng: &mut impl Rng, dim: usize, n: usize) -> CubesElement {
    let random_cube = |rng: &mut _| LittleCube::new((0..dim).map(|_| interval(rng, 6)).collect());
    if rng.gen_bool(0.5) {
        'attempt: for _ in 0..20 {
            let mut cs: Vec<LittleCube> = Vec::new();
            while cs.len() < n {
                let mut placed = false;
                for _ in 0..20 {
                    let c = random_cube(rng);
                    if cs.iter().all(|o| !o.interiors_meet(&c)) {
                        cs.push(c);
                        placed = true;
                        break;
                    }
                }
                if !placed {
                    continue 'attempt;
                }
            }
            return CubesElement::new(dim, cs).expect("disjoint by construction");
        }
    }
    let grid = 4 * n.max(1) as i128;
    let mut cs: Vec<LittleCube> = (0..n as i128)
        .map(|i| {
            let mut axes = vec![sub_interval(rng, 4 * i, 4 * i + 4, grid)];
            axes.extend((1..dim).map(|_| interval(rng, 6)));
            LittleCube::new(axes)
        })
        .collect();
    cs.shuffle(rng);
    CubesElement::new(dim, cs).expect("slabs are disjoint")
}

pub fn overlap(rng: &mut impl Rng, n: usize) -> OverlapElement {
    let ivs = (0..n).map(|_| interval(rng, 8)).collect();
    OverlapElement::new(ivs, perm(rng, n)).expect("matching degree")
}

fn strict_descendants(f: &DiskForest, n: NodeId) -> Vec<NodeId> {
    f.nodes().filter(|&d| f.is_strictly_inside(d, n)).collect()
}

fn random_subset<T: Copy>(rng: &mut impl Rng, xs: &[T]) -> Vec<T> {
    loop {
        let s: Vec<T> = xs.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

/// An existing disk, a new leaf inside one, or a new disk around some of
/// one's children.
fn some_disk(rng: &mut impl Rng, f: &mut DiskForest, inside: Option<NodeId>, avoid: &[NodeId]) -> Option<NodeId> {
    let base = match inside {
        Some(o) => o,
        None => *f.nodes().collect::<Vec<_>>().choose(rng)?,
    };
    let clear = |f: &DiskForest, d: NodeId| avoid.iter().all(|&h| f.rel(d, h) == DiskRelation::Disjoint);
    if inside.is_some() && rng.gen_bool(0.5) {
        let existing: Vec<NodeId> = strict_descendants(f, base).into_iter().filter(|&d| clear(f, d)).collect();
        if let Some(&d) = existing.choose(rng) {
            return Some(d);
        }
    }
    if inside.is_none() && rng.gen_bool(0.5) {
        return Some(base);
    }
    let children: Vec<NodeId> = f.children(base).into_iter().filter(|&c| clear(f, c)).collect();
    if !children.is_empty() && rng.gen_bool(0.5) {
        let group = random_subset(rng, &children);
        f.insert_above(&group, "g").ok()
    } else {
        Some(f.add_child(base, "g"))
    }
}

fn random_muffler(rng: &mut impl Rng, f: &mut DiskForest, color: usize) -> Option<Muffler> {
    let time = interval(rng, 8);
    let outer = some_disk(rng, f, None, &[])?;
    let holes = if color == 1 {
        vec![outer]
    } else {
        let mut holes = Vec::new();
        for _ in 0..color {
            holes.push(some_disk(rng, f, Some(outer), &holes)?);
        }
        holes
    };
    Some(Muffler { color, time, outer, holes })
}

fn diagram_attempt(rng: &mut impl Rng, output: usize, inputs: &[usize]) -> Option<InfectionDiagram> {
    let n = inputs.len();
    let sigma = perm(rng, n);
    let mut forest = DiskForest::standard(output);
    let marked = forest.marked(output).expect("standard forest").to_vec();
    let mut slots: Vec<Option<Muffler>> = vec![None; n];
    let mut earlier: Vec<Muffler> = Vec::new();
    for p in 1..=n {
        let idx = sigma.apply(p);
        let mut found = None;
        for _ in 0..40 {
            let mut f = forest.clone();
            let Some(m) = random_muffler(rng, &mut f, inputs[idx - 1]) else {
                continue;
            };
            if diagrams::start_ok(&f, &marked, &m) && earlier.iter().all(|e| diagrams::pair_ok(&f, e, &m)) {
                found = Some((f, m));
                break;
            }
        }
        let (f, m) = found?;
        forest = f;
        earlier.push(m.clone());
        slots[idx - 1] = Some(m);
    }
    let mufflers = slots.into_iter().map(|m| m.expect("every slot filled")).collect();
    InfectionDiagram::new(output, forest, mufflers, sigma).ok()
}

/// A random trivial-core diagram with the given signature, built muffler by
/// muffler in composition order so every prefix satisfies the constraint.
pub fn diagram(rng: &mut impl Rng, output: usize, inputs: &[usize]) -> Option<InfectionDiagram> {
    (0..20).find_map(|_| diagram_attempt(rng, output, inputs))
}

/// Input colors for a diagram of the given output color. Knot diagrams only
/// admit full pucks, so their inputs are all 1.
pub fn signature(rng: &mut impl Rng, output: usize, n: usize, max_color: usize) -> Vec<usize> {
    (0..n)
        .map(|_| if output == 1 { 1 } else { rng.gen_range(1..=max_color) })
        .collect()
}

pub fn link(rng: &mut impl Rng, alphabet: &Alphabet, color: usize, max_len: usize) -> LinkWord {
    let knots = alphabet.knots();
    let pick_knots = |rng: &mut _, len: usize| -> Vec<String> {
        if knots.is_empty() {
            return Vec::new();
        }
        (0..len).map(|_| knots.choose(rng).expect("nonempty").clone()).collect()
    };
    if color == 1 {
        let len = rng.gen_range(0..=max_len);
        return LinkWord::knots(pick_knots(rng, len));
    }
    let letters = alphabet.noncentral_letters();
    let twist = rng.gen_range(-3..=3);
    let nc = rng.gen_range(0..=2);
    let central = pick_knots(rng, nc)
        .into_iter()
        .map(|knot| CentralLetter {
            kind: *[CentralKind::SplitA, CentralKind::SplitB, CentralKind::Cable]
                .choose(rng)
                .expect("nonempty"),
            knot,
        })
        .collect();
    let len = if letters.is_empty() { 0 } else { rng.gen_range(0..=max_len) };
    let body = (0..len).map(|_| letters.choose(rng).expect("nonempty").clone()).collect();
    LinkWord::two(twist, central, body)
}

/// The alphabet used when none is supplied.
pub fn default_alphabet() -> Alphabet {
    Alphabet::parse("knot trefoil; knot fig8; knot cinquefoil; noncentral X lk=0; noncentral Y lk=1; noncentral Z lk=-2")
        .expect("valid alphabet")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_objects_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let dim = rng.gen_range(1..=2);
            let n = rng.gen_range(0..=3);
            assert_eq!(cubes(&mut rng, dim, n).arity(), n);
            let out = rng.gen_range(1..=3);
            let sig = signature(&mut rng, out, n, 3);
            if let Some(d) = diagram(&mut rng, out, &sig) {
                assert_eq!(d.inputs(), sig);
                assert_eq!(diagrams::check_constraint(&d), Ok(()));
            }
        }
    }

    #[test]
    fn diagrams_are_usually_found() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut found = 0;
        for _ in 0..100 {
            let out = rng.gen_range(1..=3);
            let sig = signature(&mut rng, out, 3, 3);
            found += diagram(&mut rng, out, &sig).is_some() as usize;
        }
        assert!(found >= 90, "only {found} of 100");
    }
}
