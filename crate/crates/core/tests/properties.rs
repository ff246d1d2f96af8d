use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use operad_forge::action;
use operad_forge::cubes;
use operad_forge::diagrams::{self, InfectionDiagram};
use operad_forge::dsl::{self, Value};
use operad_forge::fuzz::gen;
use operad_forge::linkmonoid::{self, LinkWord};
use operad_forge::overlap::{self, OverlapElement};
use operad_forge::perm::{block_permutation, BlockStructure, Permutation};

fn perm_of(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn perm_and_sizes(max: usize) -> impl Strategy<Value = (Permutation, Permutation, Vec<usize>)> {
    (0..=max).prop_flat_map(|n| (perm_of(n), perm_of(n), prop::collection::vec(0usize..4, n)))
}

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_diagram(rng: &mut ChaCha8Rng) -> Option<InfectionDiagram> {
    let out = rng.gen_range(1..=3);
    let n = rng.gen_range(0..=3);
    let sig = gen::signature(rng, out, n, 3);
    gen::diagram(rng, out, &sig)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn block_permutation_is_functorial((sigma, rho, k) in perm_and_sizes(6)) {
        let blocks = BlockStructure::new(k);
        let left = block_permutation(&sigma.compose(&rho).unwrap(), &blocks).unwrap();
        let moved = blocks.permuted(&rho).unwrap();
        let right = block_permutation(&sigma, &moved)
            .unwrap()
            .compose(&block_permutation(&rho, &blocks).unwrap())
            .unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn unit_blocks_change_nothing(sigma in (0usize..7).prop_flat_map(perm_of)) {
        let ones = BlockStructure::new(vec![1; sigma.degree()]);
        prop_assert_eq!(block_permutation(&sigma, &ones).unwrap(), sigma);
    }

    /// Every order inducing the same relative order on intersecting pairs
    /// canonicalizes to the same element, and canonicalizing twice is a no-op.
    #[test]
    fn overlap_canonical_form_is_a_class_invariant(seed in any::<u64>(), n in 0usize..=5) {
        let mut rng = seeded(seed);
        let e = gen::overlap(&mut rng, n);
        let c = overlap::canonicalize(&e);
        prop_assert_eq!(overlap::canonicalize(&c), c.clone());
        let iv = e.intervals();
        let pos = e.order().inverse();
        for other in Permutation::all(n) {
            let opos = other.inverse();
            let same_class = (1..=n).all(|i| (1..=n).all(|k| {
                !iv[i - 1].intersects(&iv[k - 1])
                    || (pos.apply(i) < pos.apply(k)) == (opos.apply(i) < opos.apply(k))
            }));
            let o = OverlapElement::new(iv.to_vec(), other).unwrap();
            prop_assert_eq!(overlap::canonicalize(&o) == c, same_class);
        }
    }

    /// Grafting keeps every relation among the guest disks.
    #[test]
    fn graft_preserves_relations(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let Some(host) = random_diagram(&mut rng) else { return Ok(()) };
        for m in host.mufflers() {
            let sig = gen::signature(&mut rng, m.color, 3, 3);
            let Some(guest) = gen::diagram(&mut rng, m.color, &sig) else { continue };
            let g = guest.forest();
            let Ok((f, img)) = host.forest().graft(m.outer, &m.holes, g, m.color) else { continue };
            for a in g.nodes() {
                for b in g.nodes() {
                    prop_assert_eq!(g.relation(a, b).unwrap(), f.relation(img[a], img[b]).unwrap());
                }
            }
        }
    }

    /// Composites of valid diagrams satisfy the continuity constraint.
    #[test]
    fn composites_satisfy_the_constraint(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let Some(j) = random_diagram(&mut rng) else { return Ok(()) };
        let mut inners = Vec::new();
        for m in j.mufflers() {
            let k = rng.gen_range(0..=2);
            let sig = gen::signature(&mut rng, m.color, k, 3);
            match gen::diagram(&mut rng, m.color, &sig) {
                Some(d) => inners.push(d),
                None => return Ok(()),
            }
        }
        if let Ok(c) = diagrams::compose(&j, &inners) {
            prop_assert_eq!(diagrams::check_constraint(&c), Ok(()));
        }
    }

    /// On color 1 the infection operad is the overlapping-intervals operad.
    #[test]
    fn color_one_is_overlapping_intervals(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let n = rng.gen_range(0..=3);
        let o = gen::overlap(&mut rng, n);
        let inners: Vec<OverlapElement> = (0..n).map(|_| {
            let k = rng.gen_range(0..=3);
            gen::overlap(&mut rng, k)
        }).collect();
        let pucks = |e: &OverlapElement| InfectionDiagram::from_overlap(e).unwrap();
        let left = diagrams::compose(&pucks(&o), &inners.iter().map(pucks).collect::<Vec<_>>()).unwrap();
        let right = pucks(&overlap::compose_overlap(&o, &inners).unwrap());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn link_monoid_laws(seed in any::<u64>()) {
        let a = gen::default_alphabet();
        let mut rng = seeded(seed);
        let color = rng.gen_range(1..=2);
        let [x, y, z] = [0; 3].map(|_| gen::link(&mut rng, &a, color, 4));
        let mul = |p: &LinkWord, q: &LinkWord| linkmonoid::mul(p, q).unwrap();
        prop_assert_eq!(mul(&mul(&x, &y), &z), mul(&x, &mul(&y, &z)));
        let one = LinkWord::trivial(color);
        prop_assert_eq!(mul(&one, &x), x.clone());
        prop_assert_eq!(mul(&x, &one), x.clone());
        let primes = linkmonoid::decompose_primes(&x);
        // A pure twist is a unit and comes back as a single non-prime factor.
        let unit = primes.len() == 1 && !linkmonoid::is_prime(&primes[0]);
        prop_assert!(unit || primes.iter().all(linkmonoid::is_prime));
        prop_assert_eq!(linkmonoid::product(&primes, color).unwrap(), x.clone());
        prop_assert_eq!(
            linkmonoid::linking_number(&mul(&x, &y)),
            linkmonoid::linking_number(&x) + linkmonoid::linking_number(&y)
        );
    }

    /// Knots form a commutative monoid: the pucks of a knot diagram can be
    /// shuffled in time without changing the result.
    #[test]
    fn knot_pucks_commute(seed in any::<u64>(), n in 0usize..=4) {
        let a = gen::default_alphabet();
        let mut rng = seeded(seed);
        let e = gen::cubes(&mut rng, 1, n);
        let d = cubes::c1_to_stacking(&e, 1).unwrap();
        let links: Vec<LinkWord> = (0..n).map(|_| gen::link(&mut rng, &a, 1, 3)).collect();
        let p = gen::perm(&mut rng, n);
        let shuffled = cubes::c1_to_stacking(&e.act(&p).unwrap(), 1).unwrap();
        prop_assert_eq!(
            action::act(&d, &links).unwrap(),
            action::act(&shuffled, &links).unwrap()
        );
    }

    /// Printing a value and reading it back gives the same value.
    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>()) {
        let a = gen::default_alphabet();
        let mut rng = seeded(seed);
        let n = rng.gen_range(0..=3);
        let dim = rng.gen_range(1..=3);
        let mut values = vec![
            Value::Cubes(gen::cubes(&mut rng, dim, n)),
            Value::Overlap(gen::overlap(&mut rng, n)),
            Value::Perm(gen::perm(&mut rng, n)),
            Value::Link(gen::link(&mut rng, &a, 1, 4)),
            Value::Link(gen::link(&mut rng, &a, 2, 4)),
        ];
        if let Some(d) = random_diagram(&mut rng) {
            values.push(Value::Forest(d.forest().clone()));
            values.push(Value::Diagram(d));
        }
        for v in values {
            let src = format!("let v = {v};");
            let env = dsl::run_source(&src, Some(a.clone())).map_err(|e| TestCaseError::fail(format!("{src}: {e}")))?;
            prop_assert_eq!(env.get("v"), Some(&v));
            prop_assert_eq!(env.print(), format!("{src}\n"));
        }
    }
}
