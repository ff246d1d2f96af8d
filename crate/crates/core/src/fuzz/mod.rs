//! Seeded law checking. Instance `i` of law `l` draws from its own ChaCha8
//! stream, and instances run in parallel but are collected in order, so a
//! report depends only on the seed, the instance count and the law list.

pub mod gen;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::action;
use crate::cubes::{self, CubesElement};
use crate::diagrams::{self, DiagramError, InfectionDiagram};
use crate::diskforest::ForestError;
use crate::dsl;
use crate::linkmonoid::{Alphabet, LinkWord};
use crate::order;
use crate::overlap::{self, OverlapElement};
use crate::perm::{block_permutation, BlockStructure, Permutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Law {
    Assoc,
    Symm,
    Ident,
    Dagger,
    Action,
}

impl Law {
    pub const ALL: [Law; 5] = [Law::Assoc, Law::Symm, Law::Ident, Law::Dagger, Law::Action];

    pub fn name(self) -> &'static str {
        match self {
            Law::Assoc => "assoc",
            Law::Symm => "symm",
            Law::Ident => "ident",
            Law::Dagger => "dagger",
            Law::Action => "action",
        }
    }
}

impl FromStr for Law {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Law::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| format!("unknown law `{s}` (expected assoc, symm, ident, dagger or action)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Skip,
    Fail(String),
}

/// Early exit from a check: an instance that cannot be built, or an error
/// that counts as a failure.
pub enum Stop {
    Skip,
    Error(String),
}

type Check = Result<Option<String>, Stop>;

fn outcome(c: Check) -> Outcome {
    match c {
        Ok(None) => Outcome::Pass,
        Ok(Some(m)) | Err(Stop::Error(m)) => Outcome::Fail(m),
        Err(Stop::Skip) => Outcome::Skip,
    }
}

fn expect_eq<T: PartialEq + fmt::Display>(what: &str, left: &T, right: &T) -> Option<String> {
    (left != right).then(|| format!("{what}:\n  left  {left}\n  right {right}"))
}

/// The three operads under test, seen through one interface.
pub trait Subject: Clone + PartialEq + fmt::Display + Send + Sync + Sized {
    type Ty: Copy + Send;
    const NAME: &'static str;
    const MAX_ARITY: usize;
    fn random_ty(rng: &mut ChaCha8Rng) -> Self::Ty;
    fn random(rng: &mut ChaCha8Rng, ty: Self::Ty, arity: usize) -> Option<Self>;
    fn identity(ty: Self::Ty) -> Self;
    fn output_ty(&self) -> Self::Ty;
    fn input_ty(&self, i: usize) -> Self::Ty;
    fn arity(&self) -> usize;
    fn compose_with(&self, inners: &[Self]) -> Result<Self, Stop>;
    fn permute(&self, p: &Permutation) -> Result<Self, Stop>;
}

impl Subject for CubesElement {
    type Ty = usize;
    const NAME: &'static str = "cubes";
    const MAX_ARITY: usize = 3;

    fn random_ty(rng: &mut ChaCha8Rng) -> usize {
        rng.gen_range(1..=2)
    }
    fn random(rng: &mut ChaCha8Rng, dim: usize, arity: usize) -> Option<Self> {
        Some(gen::cubes(rng, dim, arity))
    }
    fn identity(dim: usize) -> Self {
        CubesElement::identity(dim)
    }
    fn output_ty(&self) -> usize {
        self.dim()
    }
    fn input_ty(&self, _: usize) -> usize {
        self.dim()
    }
    fn arity(&self) -> usize {
        CubesElement::arity(self)
    }
    fn compose_with(&self, inners: &[Self]) -> Result<Self, Stop> {
        cubes::cubes_compose(self, inners).map_err(|e| Stop::Error(e.to_string()))
    }
    fn permute(&self, p: &Permutation) -> Result<Self, Stop> {
        self.act(p).map_err(|e| Stop::Error(e.to_string()))
    }
}

impl Subject for OverlapElement {
    type Ty = ();
    const NAME: &'static str = "overlap";
    const MAX_ARITY: usize = 4;

    fn random_ty(_: &mut ChaCha8Rng) {}
    fn random(rng: &mut ChaCha8Rng, _: (), arity: usize) -> Option<Self> {
        Some(gen::overlap(rng, arity))
    }
    fn identity(_: ()) -> Self {
        OverlapElement::identity()
    }
    fn output_ty(&self) {}
    fn input_ty(&self, _: usize) {}
    fn arity(&self) -> usize {
        OverlapElement::arity(self)
    }
    fn compose_with(&self, inners: &[Self]) -> Result<Self, Stop> {
        overlap::compose_overlap(self, inners).map_err(|e| Stop::Error(e.to_string()))
    }
    fn permute(&self, p: &Permutation) -> Result<Self, Stop> {
        self.act(p).map_err(|e| Stop::Error(e.to_string()))
    }
}

fn diagram_stop(e: DiagramError) -> Stop {
    match e {
        DiagramError::Forest(ForestError::NotPlanar(_)) => Stop::Skip,
        e => Stop::Error(e.to_string()),
    }
}

impl Subject for InfectionDiagram {
    type Ty = usize;
    const NAME: &'static str = "infection";
    const MAX_ARITY: usize = 3;

    fn random_ty(rng: &mut ChaCha8Rng) -> usize {
        rng.gen_range(1..=3)
    }
    fn random(rng: &mut ChaCha8Rng, color: usize, arity: usize) -> Option<Self> {
        let sig = gen::signature(rng, color, arity, 3);
        gen::diagram(rng, color, &sig)
    }
    fn identity(color: usize) -> Self {
        diagrams::identity_diagram(color)
    }
    fn output_ty(&self) -> usize {
        self.output()
    }
    fn input_ty(&self, i: usize) -> usize {
        self.mufflers()[i].color
    }
    fn arity(&self) -> usize {
        InfectionDiagram::arity(self)
    }
    fn compose_with(&self, inners: &[Self]) -> Result<Self, Stop> {
        diagrams::compose(self, inners).map_err(diagram_stop)
    }
    fn permute(&self, p: &Permutation) -> Result<Self, Stop> {
        diagrams::act_symmetric(self, p).map_err(diagram_stop)
    }
}

fn random_inners<T: Subject>(rng: &mut ChaCha8Rng, outer: &T, max: usize) -> Result<Vec<T>, Stop> {
    (0..outer.arity())
        .map(|a| {
            let k = rng.gen_range(0..=max);
            T::random(rng, outer.input_ty(a), k).ok_or(Stop::Skip)
        })
        .collect()
}

fn random_outer<T: Subject>(rng: &mut ChaCha8Rng) -> Result<T, Stop> {
    let ty = T::random_ty(rng);
    let n = rng.gen_range(0..=T::MAX_ARITY);
    T::random(rng, ty, n).ok_or(Stop::Skip)
}

/// `(J ∘ L) ∘ M = J ∘ (L ∘ M)`.
pub fn check_assoc<T: Subject>(rng: &mut ChaCha8Rng) -> Outcome {
    let run = |rng: &mut ChaCha8Rng| -> Check {
        let j: T = random_outer(rng)?;
        let ls = random_inners(rng, &j, 3)?;
        let ms: Vec<Vec<T>> = ls
            .iter()
            .map(|l| random_inners(rng, l, 2))
            .collect::<Result<_, _>>()?;
        let left = j.compose_with(&ls)?.compose_with(&ms.concat())?;
        let inner: Vec<T> = ls
            .iter()
            .zip(&ms)
            .map(|(l, m)| l.compose_with(m))
            .collect::<Result<_, _>>()?;
        let right = j.compose_with(&inner)?;
        Ok(expect_eq("associativity", &left, &right))
    };
    outcome(run(rng))
}

/// Both equivariance diagrams: permuting the outer element together with
/// its inputs, and permuting inside each input.
pub fn check_symm<T: Subject>(rng: &mut ChaCha8Rng) -> Outcome {
    let run = |rng: &mut ChaCha8Rng| -> Check {
        let j: T = random_outer(rng)?;
        let ls = random_inners(rng, &j, 3)?;
        let base = j.compose_with(&ls)?;
        let sizes: Vec<usize> = ls.iter().map(|l| l.arity()).collect();

        let sigma = gen::perm(rng, j.arity());
        let moved = sigma.apply_to_list(&ls).map_err(|e| Stop::Error(e.to_string()))?;
        let left = j.permute(&sigma)?.compose_with(&moved)?;
        let block = block_permutation(&sigma, &BlockStructure::new(sizes.clone()))
            .map_err(|e| Stop::Error(e.to_string()))?;
        let right = base.permute(&block)?;
        if let Some(m) = expect_eq("outer symmetry", &left, &right) {
            return Ok(Some(m));
        }

        let taus: Vec<Permutation> = sizes.iter().map(|&k| gen::perm(rng, k)).collect();
        let twisted: Vec<T> = ls
            .iter()
            .zip(&taus)
            .map(|(l, t)| l.permute(t))
            .collect::<Result<_, _>>()?;
        let left = j.compose_with(&twisted)?;
        let right = base.permute(&Permutation::direct_sum(&taus))?;
        Ok(expect_eq("inner symmetry", &left, &right))
    };
    outcome(run(rng))
}

/// `1 ∘ x = x = x ∘ (1, …, 1)`.
pub fn check_ident<T: Subject>(rng: &mut ChaCha8Rng) -> Outcome {
    let run = |rng: &mut ChaCha8Rng| -> Check {
        let x: T = random_outer(rng)?;
        let left = T::identity(x.output_ty()).compose_with(std::slice::from_ref(&x))?;
        if let Some(m) = expect_eq("left identity", &left, &x) {
            return Ok(Some(m));
        }
        let ids: Vec<T> = (0..x.arity()).map(|i| T::identity(x.input_ty(i))).collect();
        Ok(expect_eq("right identity", &x.compose_with(&ids)?, &x))
    };
    outcome(run(rng))
}

/// Composites and permuted diagrams satisfy the continuity constraint, and
/// their printed forms parse back to the same diagram.
pub fn check_dagger(rng: &mut ChaCha8Rng) -> Outcome {
    let run = |rng: &mut ChaCha8Rng| -> Check {
        let j: InfectionDiagram = random_outer(rng)?;
        let ls = random_inners(rng, &j, 3)?;
        let composite = j.compose_with(&ls)?;
        let sigma = gen::perm(rng, composite.arity());
        let permuted = composite.permute(&sigma)?;
        for d in [&composite, &permuted] {
            if let Err(v) = diagrams::check_constraint(d) {
                return Ok(Some(format!("constraint fails for {v} in {d}")));
            }
            let src = format!("let d = {d};");
            let back = dsl::run_source(&src, None).map_err(|e| Stop::Error(format!("{e} in {d}")))?;
            let printed = back.get("d").map(|v| v.to_string()).unwrap_or_default();
            if printed != d.to_string() {
                return Ok(Some(format!("print/parse mismatch:\n  {d}\n  {printed}")));
            }
        }
        Ok(None)
    };
    outcome(run(rng))
}

/// A random diagram whose every muffler acts on link words.
pub fn acting_diagram(rng: &mut ChaCha8Rng, output: usize, arity: usize) -> Option<InfectionDiagram> {
    (0..10).find_map(|_| {
        let sig = gen::signature(rng, output, arity, 2);
        gen::diagram(rng, output, &sig).filter(|d| action::muffler_kinds(d).is_ok())
    })
}

fn random_links(rng: &mut ChaCha8Rng, alphabet: &Alphabet, d: &InfectionDiagram) -> Vec<LinkWord> {
    d.inputs().iter().map(|&c| gen::link(rng, alphabet, c, 3)).collect()
}

fn act(d: &InfectionDiagram, links: &[LinkWord]) -> Result<LinkWord, Stop> {
    action::act(d, links).map_err(|e| Stop::Error(format!("{e} in {d}")))
}

/// The algebra axioms of the action on link words, plus independence from
/// the representative of the order class.
pub fn check_action(rng: &mut ChaCha8Rng, alphabet: &Alphabet) -> Outcome {
    let run = |rng: &mut ChaCha8Rng| -> Check {
        let output = rng.gen_range(1..=2);
        let n = rng.gen_range(0..=3);
        let j = acting_diagram(rng, output, n).ok_or(Stop::Skip)?;
        let links = random_links(rng, alphabet, &j);
        match rng.gen_range(0..4) {
            0 => {
                let ls: Vec<InfectionDiagram> = (0..j.arity())
                    .map(|a| {
                        let k = rng.gen_range(0..=2);
                        acting_diagram(rng, j.mufflers()[a].color, k).ok_or(Stop::Skip)
                    })
                    .collect::<Result<_, _>>()?;
                let inner_links: Vec<Vec<LinkWord>> = ls.iter().map(|l| random_links(rng, alphabet, l)).collect();
                let composite = j.compose_with(&ls)?;
                let left = act(&composite, &inner_links.concat())?;
                let mid: Vec<LinkWord> = ls
                    .iter()
                    .zip(&inner_links)
                    .map(|(l, w)| act(l, w))
                    .collect::<Result<_, _>>()?;
                Ok(expect_eq("action associativity", &left, &act(&j, &mid)?))
            }
            1 => {
                let p = gen::perm(rng, j.arity());
                let moved = p.apply_to_list(&links).map_err(|e| Stop::Error(e.to_string()))?;
                let left = act(&j.permute(&p)?, &moved)?;
                Ok(expect_eq("action symmetry", &left, &act(&j, &links)?))
            }
            2 => {
                let w = gen::link(rng, alphabet, output, 4);
                let id = diagrams::identity_diagram(output);
                Ok(expect_eq("action identity", &act(&id, std::slice::from_ref(&w))?, &w))
            }
            _ => {
                // another representative of the order class, found by a random tie-break
                let keys: Vec<u32> = (0..j.arity()).map(|_| rng.gen()).collect();
                let interacts = |i, k| diagrams::images_intersect(&j, i, k).unwrap_or(false);
                let other = order::linear_extension_by(j.order(), interacts, |i| keys[i - 1]);
                let left = action::act_with_order(&j, &links, &other).map_err(|e| Stop::Error(e.to_string()))?;
                Ok(expect_eq("order-class independence", &left, &act(&j, &links)?))
            }
        }
    };
    outcome(run(rng))
}

/// A generator seeded by `(seed, stream, instance)`.
pub fn rng_for(seed: u64, stream: u64, instance: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((stream << 32) | instance);
    rng
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub law: Law,
    pub family: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub first_failure: Option<(usize, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzReport {
    pub seed: u64,
    pub ops: usize,
    pub rows: Vec<LawReport>,
}

impl FuzzReport {
    pub fn ok(&self) -> bool {
        self.rows.iter().all(|r| r.failed == 0)
    }
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fuzz seed={} ops={}", self.seed, self.ops)?;
        writeln!(f, "{:<8}{:<11}{:>7}{:>7}{:>7}", "law", "operad", "pass", "fail", "skip")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<8}{:<11}{:>7}{:>7}{:>7}",
                r.law.name(),
                r.family,
                r.passed,
                r.failed,
                r.skipped
            )?;
            if let Some((i, msg)) = &r.first_failure {
                writeln!(f, "  first failure at instance {i}: {msg}")?;
            }
        }
        writeln!(f, "status: {}", if self.ok() { "ok" } else { "FAILED" })
    }
}

fn tally(law: Law, family: &'static str, outcomes: Vec<Outcome>) -> LawReport {
    let mut r = LawReport {
        law,
        family,
        passed: 0,
        failed: 0,
        skipped: 0,
        first_failure: None,
    };
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Pass => r.passed += 1,
            Outcome::Skip => r.skipped += 1,
            Outcome::Fail(m) => {
                r.failed += 1;
                if r.first_failure.is_none() {
                    r.first_failure = Some((i, m));
                }
            }
        }
    }
    r
}

fn sweep(
    seed: u64,
    stream: u64,
    ops: usize,
    check: impl Fn(&mut ChaCha8Rng) -> Outcome + Sync,
) -> Vec<Outcome> {
    (0..ops as u64)
        .into_par_iter()
        .map(|i| check(&mut rng_for(seed, stream, i)))
        .collect()
}

/// Runs `ops` instances of each selected law on every operad it applies to.
pub fn run(seed: u64, ops: usize, laws: &[Law], alphabet: &Alphabet) -> FuzzReport {
    let mut rows = Vec::new();
    for &law in laws {
        let base = 8 * law as u64;
        match law {
            Law::Assoc | Law::Symm | Law::Ident => {
                let pick = |rng: &mut ChaCha8Rng, which: u8| match (law, which) {
                    (Law::Assoc, 0) => check_assoc::<CubesElement>(rng),
                    (Law::Assoc, 1) => check_assoc::<OverlapElement>(rng),
                    (Law::Assoc, _) => check_assoc::<InfectionDiagram>(rng),
                    (Law::Symm, 0) => check_symm::<CubesElement>(rng),
                    (Law::Symm, 1) => check_symm::<OverlapElement>(rng),
                    (Law::Symm, _) => check_symm::<InfectionDiagram>(rng),
                    (_, 0) => check_ident::<CubesElement>(rng),
                    (_, 1) => check_ident::<OverlapElement>(rng),
                    _ => check_ident::<InfectionDiagram>(rng),
                };
                for (which, name) in [CubesElement::NAME, OverlapElement::NAME, InfectionDiagram::NAME]
                    .into_iter()
                    .enumerate()
                {
                    let outcomes = sweep(seed, base + which as u64, ops, |rng| pick(rng, which as u8));
                    rows.push(tally(law, name, outcomes));
                }
            }
            Law::Dagger => rows.push(tally(law, InfectionDiagram::NAME, sweep(seed, base, ops, check_dagger))),
            Law::Action => rows.push(tally(
                law,
                InfectionDiagram::NAME,
                sweep(seed, base, ops, |rng| check_action(rng, alphabet)),
            )),
        }
    }
    FuzzReport {
        seed,
        ops,
        rows,
    }
}
