//! Property tests over random small permutation groups and the fixture battery.

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use blockfunctor::chartab::character_table;
use blockfunctor::ddelta::{
    classify_into_registry, enumerate_pair_orbits, faithful_quotient, image_in_out,
    n_image_in_out, Registry, Witness,
};
use blockfunctor::fixtures::BATTERY;
use blockfunctor::fusion::{admissible_isomorphisms, psi, triple_orbits, FusionTriple};
use blockfunctor::groupfile::{parse_group_file, GroupForm, GroupSpecFile};
use blockfunctor::iso::find_pair_isomorphism;
use blockfunctor::multiplicity::{l_multiplicativity_check, mult_table_pairs};
use blockfunctor::{cli::fusion_for, PermGroup, Permutation};

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn group(max_degree: usize) -> impl Strategy<Value = PermGroup> {
    (3..=max_degree).prop_flat_map(|n| {
        prop::collection::vec(perm(n), 1..=2).prop_map(move |g| PermGroup::new(n, g).unwrap())
    })
}

fn prime_factors(n: usize) -> Vec<u64> {
    [2u64, 3, 5, 7].into_iter().filter(|p| n as u64 % p == 0).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn permutation_algebra(n in 1usize..9, seed in any::<u64>()) {
        let mut rng = seed;
        let mut next = || { rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); rng };
        let mut rand_perm = || {
            let mut v: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() { v.swap(i, (next() >> 33) as usize % (i + 1)); }
            Permutation::from_images(v).unwrap()
        };
        let (a, b, c) = (rand_perm(), rand_perm(), rand_perm());
        prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
        prop_assert!(a.then(&a.inverse()).is_identity());
        prop_assert!(a.pow(a.order() as i64).is_identity());
        prop_assert_eq!(a.pow(-1), a.inverse());
        prop_assert_eq!(Permutation::parse(n, &a.to_string()).unwrap(), a.clone());
        for p in [2u64, 3, 5] {
            let (gp, gq) = a.p_part_decomposition(p).unwrap();
            prop_assert_eq!(gp.then(&gq), a.clone());
            prop_assert!(gp.commutes_with(&gq));
            prop_assert!(gp.is_p_element(p));
            prop_assert!(gq.is_p_regular(p));
        }
    }

    #[test]
    fn group_structure(g in group(6)) {
        let size: usize = g.orbit_lengths().iter().product();
        prop_assert_eq!(size.to_string(), g.order().to_string());
        for x in g.generators() { prop_assert!(g.contains(x)); }
        if let Ok(n) = g.size() {
            let classes = g.conjugacy_classes().unwrap();
            prop_assert_eq!(classes.iter().map(|c| c.size).sum::<usize>(), n);
            prop_assert!(classes.iter().all(|c| n % c.size == 0));
            prop_assert!(classes[0].representative.is_identity());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn character_tables(g in group(5), pick in any::<prop::sample::Index>()) {
        let n = g.size().unwrap();
        let ct = character_table(&g).unwrap();
        prop_assert_eq!(ct.degrees().iter().map(|d| d * d).sum::<u64>(), n as u64);
        for i in 0..ct.len() {
            for j in 0..ct.len() {
                prop_assert_eq!(ct.inner_product(i, j).unwrap(), u64::from(i == j));
            }
        }
        let x = pick.get(g.elements().unwrap()).clone();
        let h = g.subgroup(vec![x]).unwrap();
        let total: u64 = (0..ct.len())
            .map(|c| ct.degrees()[c] * ct.fixed_point_dim(c, &h).unwrap())
            .sum();
        prop_assert_eq!(total, (n / h.size().unwrap()) as u64);
    }

    #[test]
    fn trivial_row_is_l(g in group(5), which in any::<prop::sample::Index>()) {
        let n = g.size().unwrap();
        let primes = prime_factors(n);
        prop_assume!(!primes.is_empty());
        let p = *which.get(&primes);
        let g = Arc::new(g);
        let mut reg = Registry::new();
        let cl = classify_into_registry(enumerate_pair_orbits(&g, p).unwrap(), &mut reg).unwrap();
        let l = g.p_regular_class_count(p).unwrap();
        let trivial_members = cl.members.iter().filter(|m| reg.class(m.class_id).l_order() == 1).count();
        prop_assert_eq!(trivial_members, l);
        let t = mult_table_pairs("G", &g, p, &mut reg).unwrap();
        prop_assert_eq!(t.trivial_row(), l as u64);
        for m in &cl.members {
            prop_assert!(m.witness.intertwines(reg.class(m.class_id), &m.pair.s));
            let fq = faithful_quotient(&m.pair).unwrap();
            prop_assert_eq!(fq.pair.induced_order().unwrap(), fq.pair.s.order());
        }
    }

    #[test]
    fn relabeling_preserves_tables(g in group(5), sigma_seed in any::<prop::sample::Index>()) {
        let n = g.degree();
        let primes = prime_factors(g.size().unwrap());
        prop_assume!(!primes.is_empty());
        let p = primes[0];
        let all: Vec<Permutation> = PermGroup::new(n, vec![
            Permutation::parse(n, &format!("({})", (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(","))).unwrap(),
            Permutation::parse(n, "(1,2)").unwrap(),
        ]).unwrap().elements().unwrap().to_vec();
        let sigma = sigma_seed.get(&all);
        let h = PermGroup::new(n, g.generators().iter().map(|x| x.conjugated_by(sigma)).collect()).unwrap();
        let mut reg = Registry::new();
        let ta = mult_table_pairs("G", &Arc::new(g), p, &mut reg).unwrap();
        let tb = mult_table_pairs("H", &Arc::new(h), p, &mut reg).unwrap();
        prop_assert_eq!(ta.rows, tb.rows);
        prop_assert_eq!((ta.k, ta.l), (tb.k, tb.l));
    }

    #[test]
    fn l_is_multiplicative(g in group(4), h in group(4), p in prop::sample::select(vec![2u64, 3])) {
        prop_assert!(l_multiplicativity_check(&g, &h, p).unwrap());
    }
}

fn spec_file() -> impl Strategy<Value = GroupSpecFile> {
    let name = prop::option::of("[A-Za-z][A-Za-z0-9_:^]{0,8}");
    let generators = (1usize..9).prop_flat_map(|n| {
        prop::collection::vec(perm(n), 1..4).prop_map(move |gs| GroupForm::Generators {
            degree: n,
            generators: gs
                .iter()
                .map(|g| g.cycles().into_iter().map(|c| c.into_iter().map(|x| x + 1).collect()).collect())
                .collect(),
        })
    });
    let frob = (prop::sample::select(vec![2u64, 3, 5, 7]), 1usize..4).prop_flat_map(|(p, r)| {
        prop::collection::vec(-9i64..10, r * r).prop_map(move |m| GroupForm::Frobenius { p, rank: r, matrix: m })
    });
    (name, prop::option::of(prop::sample::select(vec![2u64, 3, 5])), prop_oneof![generators, frob]).prop_map(
        |(name, prime, form)| {
            let prime = match form {
                GroupForm::Generators { .. } => Some(prime.unwrap_or(2)),
                GroupForm::Frobenius { .. } => prime,
            };
            GroupSpecFile { name, prime, form }
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn parser_round_trip(spec in spec_file()) {
        let text = spec.to_text();
        prop_assert_eq!(parse_group_file(&text).unwrap(), spec.clone());
        prop_assert_eq!(parse_group_file(&text).unwrap().to_text(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Moving a triple by `N_G(P)` and `Aut(L,u)` keeps its image in the same pair orbit.
    #[test]
    fn psi_is_constant_on_orbits(fx in prop::sample::select(BATTERY[..7].to_vec()), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>(), c in any::<prop::sample::Index>()) {
        let g = fx.load().unwrap();
        let f = fusion_for(&g).unwrap();
        let mut reg = Registry::new();
        classify_into_registry(enumerate_pair_orbits(&g.group, g.prime).unwrap(), &mut reg).unwrap();
        let classes: Vec<usize> = (0..reg.len()).filter(|&i| reg.class(i).l_order() > 1).collect();
        let cls = reg.class(*a.get(&classes));
        let orbits = triple_orbits(&f, cls).unwrap();
        let t = &b.get(&orbits).representative;
        let obj = &f.objects[t.object];
        let r: Vec<_> = obj.aut_f().cloned().collect();
        let r = c.get(&r);
        let auts = cls.aut_elements();
        let psi_aut = b.get(auts);
        let l = &cls.realization.p_subgroup;
        let l_elems = l.elements().unwrap();
        let moved_pi: Vec<u32> = l_elems
            .iter()
            .map(|x| {
                let y = cls.apply_aut(psi_aut, x).unwrap();
                let j = l.element_index(&y).unwrap().unwrap();
                r[t.pi[j] as usize]
            })
            .collect();
        let moved = FusionTriple { object: t.object, pi: moved_pi, class_id: t.class_id };
        let s0 = psi(&f, cls, t).unwrap().s;
        let s1 = psi(&f, cls, &moved).unwrap().s;
        prop_assert!(obj.normalizer.elements().unwrap().iter().any(|n| s0.conjugated_by(n) == s1));
    }
}

#[test]
fn triple_counts_partition() {
    for fx in &BATTERY[..7] {
        let g = fx.load().unwrap();
        let f = fusion_for(&g).unwrap();
        let mut reg = Registry::new();
        classify_into_registry(enumerate_pair_orbits(&g.group, g.prime).unwrap(), &mut reg).unwrap();
        for cls in reg.classes().iter().filter(|c| c.l_order() > 1) {
            let orbits = triple_orbits(&f, cls).unwrap();
            for (oi, obj) in f.objects.iter().enumerate() {
                let total: usize = orbits.iter().filter(|o| o.representative.object == oi).map(|o| o.size).sum();
                let expected = if obj.subgroup.is_trivial() { 0 } else { admissible_isomorphisms(obj, cls).unwrap().len() };
                assert_eq!(total, expected, "{} class {} object {}", fx.file, cls.class_id, oi);
            }
        }
    }
}

#[test]
fn classification_is_an_equivalence() {
    for fx in &BATTERY {
        let g = fx.load().unwrap();
        let mut reg = Registry::new();
        let cl = classify_into_registry(enumerate_pair_orbits(&g.group, g.prime).unwrap(), &mut reg).unwrap();
        let fqs: Vec<_> = cl.members.iter().map(|m| faithful_quotient(&m.pair).unwrap()).collect();
        for (i, a) in fqs.iter().enumerate() {
            for (j, b) in fqs.iter().enumerate() {
                let iso = find_pair_isomorphism(&a.pair, &b.pair).unwrap().is_some();
                assert_eq!(iso, cl.members[i].class_id == cl.members[j].class_id, "{} members {} {}", fx.file, i, j);
            }
        }
    }
}

/// Recomputes N-images with a second witness `phi ∘ psi|_L` for every `psi ∈ Aut(L,u)`
/// fixing `u`, and compares fixed-point dimensions.
#[test]
fn fixed_dimensions_do_not_depend_on_the_witness() {
    let mut alternatives = 0;
    for fx in &BATTERY {
        let g = fx.load().unwrap();
        let mut reg = Registry::new();
        let cl = classify_into_registry(enumerate_pair_orbits(&g.group, g.prime).unwrap(), &mut reg).unwrap();
        for m in &cl.members {
            let cls = reg.class(m.class_id);
            let u = &cls.realization.s;
            let base = n_image_in_out(cls, m).unwrap();
            let dims = |h: &PermGroup| -> Vec<u64> {
                (0..cls.out_table.len()).map(|c| cls.out_table.fixed_point_dim(c, h).unwrap()).collect()
            };
            let expected = dims(&base);
            for a in cls.aut_elements() {
                if cls.apply_aut(a, u).unwrap() != *u {
                    continue;
                }
                let forward: BTreeMap<Permutation, Permutation> = cls
                    .realization
                    .p_subgroup
                    .elements()
                    .unwrap()
                    .iter()
                    .map(|l| (l.clone(), m.witness.apply(&cls.apply_aut(a, l).unwrap()).unwrap().clone()))
                    .collect();
                let w = Witness::new(forward.into_iter().collect()).unwrap();
                assert!(w.intertwines(cls, &m.pair.s));
                let img = image_in_out(cls, &m.pair, &w).unwrap();
                assert_eq!(dims(&img), expected, "{} class {}", fx.file, cls.class_id);
                alternatives += 1;
            }
        }
    }
    assert!(alternatives > 0);
}

#[test]
fn coprime_prime_gives_only_the_trivial_class() {
    for (deg, gens, p) in [(3, vec!["(1,2,3)", "(1,2)"], 5u64), (4, vec!["(1,2)(3,4)", "(1,2,3)"], 5), (5, vec!["(1,2,3,4,5)"], 2)] {
        let g = Arc::new(PermGroup::new(deg, common::perms(deg, &gens)).unwrap());
        let t = mult_table_pairs("G", &g, p, &mut Registry::new()).unwrap();
        assert_eq!(t.classes.len(), 1);
        assert_eq!(t.rows.values().copied().collect::<Vec<_>>(), vec![t.k as u64]);
        assert_eq!(t.k, t.l);
    }
}
