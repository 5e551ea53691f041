//! Shared helpers for integration tests, including a brute-force multiplicity oracle.
//!
//! The oracle uses only permutation arithmetic: closure by multiplication, explicit
//! conjugation orbits, bijection search for isomorphisms and explicit characters. It
//! covers inputs whose `p`-subgroups are abelian and 2-generated and whose `Out(L,u)` is
//! trivial, `C2` or `Aut(V4) ≅ S3`, which includes `S3`, `A4` and `C3`.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use blockfunctor::multiplicity::MultiplicityTable;
use blockfunctor::Permutation;

pub type Key = (usize, u64, &'static str);

pub fn perms(deg: usize, gens: &[&str]) -> Vec<Permutation> {
    gens.iter().map(|s| Permutation::parse(deg, s).unwrap()).collect()
}

pub fn closure(gens: &[Permutation], degree: usize) -> Vec<Permutation> {
    let mut set: BTreeSet<Permutation> = BTreeSet::new();
    let id = Permutation::identity(degree);
    set.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.then(g);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

fn is_power_of(mut n: usize, p: u64) -> bool {
    while n > 1 && n as u64 % p == 0 {
        n /= p as usize;
    }
    n == 1
}

fn conj_set(set: &[Permutation], g: &Permutation) -> Vec<Permutation> {
    let mut v: Vec<Permutation> = set.iter().map(|x| x.conjugated_by(g)).collect();
    v.sort();
    v
}

/// Index map of `x -> g x g^-1` on a sorted set it normalizes.
fn action(set: &[Permutation], g: &Permutation) -> Vec<usize> {
    set.iter()
        .map(|x| set.binary_search(&x.conjugated_by(g)).unwrap())
        .collect()
}

fn compose(first: &[usize], second: &[usize]) -> Vec<usize> {
    first.iter().map(|&i| second[i]).collect()
}

fn all_bijections(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Bijections `a -> b` (as index maps) that are homomorphisms.
fn isomorphisms(a: &[Permutation], b: &[Permutation]) -> Vec<Vec<usize>> {
    if a.len() != b.len() {
        return Vec::new();
    }
    all_bijections(a.len())
        .into_iter()
        .filter(|f| {
            (0..a.len()).all(|i| {
                (0..a.len()).all(|j| {
                    let k = a.binary_search(&a[i].then(&a[j])).unwrap();
                    b[f[k]] == b[f[i]].then(&b[f[j]])
                })
            })
        })
        .collect()
}

fn map_order(m: &[usize]) -> u64 {
    let id: Vec<usize> = (0..m.len()).collect();
    let mut cur = m.to_vec();
    let mut k = 1;
    while cur != id {
        cur = compose(&cur, m);
        k += 1;
    }
    k
}

/// Sign of a map on the non-identity elements of a set (identity is index 0).
fn parity_on_nonidentity(m: &[usize]) -> i64 {
    let n = m.len();
    let mut seen = vec![false; n];
    let mut sign = 1;
    for i in 1..n {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = m[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

struct OracleClass {
    p_set: Vec<Permutation>,
    u: Vec<usize>,
    /// `C_{Aut(P)}(u)`, which maps onto `Out(L,u)` with kernel `<u>` for abelian `L`.
    centralizer: Vec<Vec<usize>>,
    powers_of_u: BTreeSet<Vec<usize>>,
}

impl OracleClass {
    fn out_order(&self) -> usize {
        self.centralizer.len() / self.powers_of_u.len()
    }

    fn characters(&self) -> Vec<&'static str> {
        match self.out_order() {
            1 => vec!["triv"],
            2 => vec!["triv", "sgn"],
            6 if self.p_set.len() == 4 && self.powers_of_u.len() == 1 => vec!["triv", "sgn", "deg2"],
            n => panic!("oracle does not cover Out of order {}", n),
        }
    }

    fn chi(&self, name: &str, a: &[usize]) -> i64 {
        match name {
            "triv" => 1,
            "sgn" if self.out_order() == 2 => {
                if self.powers_of_u.contains(a) {
                    1
                } else {
                    -1
                }
            }
            "sgn" => parity_on_nonidentity(a),
            "deg2" => (1..a.len()).filter(|&i| a[i] == i).count() as i64 - 1,
            other => panic!("unknown character {}", other),
        }
    }
}

/// Brute-force multiplicities keyed by `(|L|, order of u, character name)`, and `l`.
pub fn oracle_table(gens: &[Permutation], degree: usize, p: u64) -> (BTreeMap<Key, u64>, usize) {
    let g = closure(gens, degree);
    let p_elems: Vec<&Permutation> = g.iter().filter(|x| is_power_of(x.order() as usize, p)).collect();
    let mut subgroups: BTreeSet<Vec<Permutation>> = BTreeSet::new();
    for a in &p_elems {
        for b in &p_elems {
            let h = closure(&[(*a).clone(), (*b).clone()], degree);
            if is_power_of(h.len(), p) {
                subgroups.insert(h);
            }
        }
    }
    // every pair (P, s)
    let mut pairs: Vec<(Vec<Permutation>, Permutation)> = Vec::new();
    for sub in &subgroups {
        for s in &g {
            if s.order() % p != 0 && conj_set(sub, s) == *sub {
                pairs.push((sub.clone(), s.clone()));
            }
        }
    }
    // G-orbits by explicit conjugation: keep the smallest conjugate as key
    let mut orbits: BTreeMap<(Vec<Permutation>, Permutation), ()> = BTreeMap::new();
    for (sub, s) in &pairs {
        let key = g
            .iter()
            .map(|x| (conj_set(sub, x), s.conjugated_by(x)))
            .min()
            .unwrap();
        orbits.insert(key, ());
    }
    let mut classes: Vec<OracleClass> = Vec::new();
    let mut table: BTreeMap<Key, u64> = BTreeMap::new();
    for (sub, s) in orbits.into_keys() {
        let u = action(&sub, &s);
        // class by explicit intertwining isomorphism
        let mut found = None;
        for (ci, c) in classes.iter().enumerate() {
            if let Some(pi) = isomorphisms(&c.p_set, &sub)
                .into_iter()
                .find(|pi| compose(&c.u, pi) == compose(pi, &u))
            {
                found = Some((ci, pi));
                break;
            }
        }
        let (ci, pi) = match found {
            Some(x) => x,
            None => {
                let auts = isomorphisms(&sub, &sub);
                let centralizer: Vec<Vec<usize>> = auts
                    .into_iter()
                    .filter(|a| compose(a, &u) == compose(&u, a))
                    .collect();
                let mut powers_of_u = BTreeSet::new();
                let mut cur: Vec<usize> = (0..sub.len()).collect();
                for _ in 0..map_order(&u) {
                    powers_of_u.insert(cur.clone());
                    cur = compose(&cur, &u);
                }
                classes.push(OracleClass {
                    p_set: sub.clone(),
                    u: u.clone(),
                    centralizer,
                    powers_of_u,
                });
                (classes.len() - 1, (0..sub.len()).collect())
            }
        };
        let c = &classes[ci];
        // image of N_G(P, s), pulled back along pi and extended by <u>
        let mut image: BTreeSet<Vec<usize>> = BTreeSet::new();
        for x in &g {
            if x.commutes_with(&s) && conj_set(&sub, x) == sub {
                let ix = action(&sub, x);
                let mut pinv = vec![0; pi.len()];
                for (i, &j) in pi.iter().enumerate() {
                    pinv[j] = i;
                }
                let pulled = compose(&compose(&pi, &ix), &pinv);
                for w in &c.powers_of_u {
                    image.insert(compose(&pulled, w));
                }
            }
        }
        for name in c.characters() {
            let total: i64 = image.iter().map(|a| c.chi(name, a)).sum();
            assert_eq!(total % image.len() as i64, 0, "fixed dimension is not an integer");
            let key = (c.p_set.len(), map_order(&c.u), name);
            *table.entry(key).or_insert(0) += (total / image.len() as i64) as u64;
        }
    }
    // shapes must be unique for keys to name classes
    let mut shapes = BTreeSet::new();
    for c in &classes {
        assert!(shapes.insert((c.p_set.len(), map_order(&c.u))), "oracle shapes collide");
    }
    let l = p_regular_class_count(&g, p);
    (table, l)
}

fn p_regular_class_count(g: &[Permutation], p: u64) -> usize {
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for x in g {
        if seen.contains(x) || x.order() % p == 0 {
            continue;
        }
        count += 1;
        for y in g {
            seen.insert(x.conjugated_by(y));
        }
    }
    count
}

/// Engine rows keyed like the oracle: characters of `Out(L,u)` are named by degree and
/// triviality.
pub fn engine_keys(t: &MultiplicityTable) -> BTreeMap<Key, u64> {
    let mut out = BTreeMap::new();
    for (&(c, i), &m) in &t.rows {
        let s = &t.classes[&c];
        let name = match (i, s.irr_degrees[i]) {
            (0, 1) => "triv",
            (_, 1) => "sgn",
            (_, 2) => "deg2",
            other => panic!("unnamed character {:?}", other),
        };
        assert!(out.insert((s.l_order, s.u_order, name), m).is_none(), "shape collision");
    }
    out
}

pub fn golden(entries: &[Key], values: &[u64]) -> BTreeMap<Key, u64> {
    entries.iter().copied().zip(values.iter().copied()).collect()
}
