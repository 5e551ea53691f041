//! Isomorphism and automorphism search by backtracking over generator images.
//!
//! Candidates for each generator image are filtered by element order (and,
//! for automorphisms, conjugacy class size). After every assignment the partial
//! map is extended along the Cayley graph of the generators chosen so far; an
//! inconsistency or a collision prunes the branch.

use std::collections::{HashMap, VecDeque};

use crate::arith::{gcd, p_split};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::hom::GroupHom;
use crate::perm::Permutation;

const UNSET: u32 = u32::MAX;

/// Multiplication table of a desk-scale group, indexed like [`PermGroup::elements`].
pub(crate) struct Cayley {
    pub elems: Vec<Permutation>,
    mul: Vec<u32>,
    pub order: Vec<u64>,
    pub class_size: Vec<usize>,
    pub class_of: Vec<usize>,
}

impl Cayley {
    pub fn new(g: &PermGroup) -> Result<Self> {
        let elems = g.elements()?.to_vec();
        let n = elems.len();
        let mut mul = vec![0u32; n * n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                let c = a.then(b);
                mul[i * n + j] = g.element_index(&c)?.expect("closed") as u32;
            }
        }
        let classes = g.conjugacy_classes()?;
        let mut class_of = vec![0; n];
        for (i, e) in elems.iter().enumerate() {
            class_of[i] = g.class_index_of(e)?.expect("member");
        }
        let class_size = class_of.iter().map(|&c| classes[c].size).collect();
        let order = elems.iter().map(Permutation::order).collect();
        Ok(Cayley {
            elems,
            mul,
            order,
            class_size,
            class_of,
        })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.len() + b] as usize
    }

    pub fn index_of(&self, g: &Permutation) -> usize {
        self.elems.binary_search(g).expect("element of the group")
    }

    /// Size of the subgroup generated by the given element indices.
    fn closure_size(&self, gens: &[usize]) -> usize {
        let mut seen = vec![false; self.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count
    }

    /// Greedy generating set of the subgroup with the given elements (or the whole group),
    /// by decreasing element order then index.
    pub fn greedy_generators(&self, within: Option<&[usize]>) -> Vec<usize> {
        let all: Vec<usize> = match within {
            Some(w) => w.to_vec(),
            None => (0..self.len()).collect(),
        };
        let target = all.len();
        let mut cands: Vec<usize> = all.into_iter().filter(|&i| i != 0).collect();
        cands.sort_by(|&a, &b| self.order[b].cmp(&self.order[a]).then(a.cmp(&b)));
        let mut gens = Vec::new();
        let mut size = 1;
        for c in cands {
            if size == target {
                break;
            }
            let mut trial = gens.clone();
            trial.push(c);
            let s = self.closure_size(&trial);
            if s > size {
                gens = trial;
                size = s;
            }
        }
        gens
    }
}

/// Extends generator images along the Cayley graph; fails on inconsistency or collision.
fn extend(
    src: &Cayley,
    tgt: &Cayley,
    gens: &[usize],
    images: &[usize],
    map: &mut [u32],
    used: &mut [bool],
) -> bool {
    map.iter_mut().for_each(|m| *m = UNSET);
    used.iter_mut().for_each(|u| *u = false);
    map[0] = 0;
    used[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let fx = map[x] as usize;
        for (&g, &h) in gens.iter().zip(images) {
            let y = src.mul(x, g);
            let fy = tgt.mul(fx, h);
            if map[y] == UNSET {
                if used[fy] {
                    return false;
                }
                map[y] = fy as u32;
                used[fy] = true;
                queue.push_back(y);
            } else if map[y] as usize != fy {
                return false;
            }
        }
    }
    true
}

/// Enumerates injective homomorphisms `<gens> -> tgt` with `gens[i]` sent into
/// `candidates[i]`, stopping after `limit` results.
fn search(
    src: &Cayley,
    tgt: &Cayley,
    gens: &[usize],
    candidates: &[Vec<usize>],
    limit: usize,
) -> Vec<Vec<u32>> {
    let mut results = Vec::new();
    let mut images = Vec::with_capacity(gens.len());
    let mut map = vec![UNSET; src.len()];
    let mut used = vec![false; tgt.len()];
    fn rec(
        depth: usize,
        src: &Cayley,
        tgt: &Cayley,
        gens: &[usize],
        candidates: &[Vec<usize>],
        limit: usize,
        images: &mut Vec<usize>,
        map: &mut Vec<u32>,
        used: &mut Vec<bool>,
        results: &mut Vec<Vec<u32>>,
    ) {
        if results.len() >= limit {
            return;
        }
        if depth == gens.len() {
            if extend(src, tgt, gens, images, map, used) && map.iter().all(|&m| m != UNSET) {
                results.push(map.clone());
            }
            return;
        }
        for &c in &candidates[depth] {
            images.push(c);
            if extend(src, tgt, &gens[..=depth], images, map, used) {
                rec(
                    depth + 1,
                    src,
                    tgt,
                    gens,
                    candidates,
                    limit,
                    images,
                    map,
                    used,
                    results,
                );
            }
            images.pop();
            if results.len() >= limit {
                return;
            }
        }
    }
    rec(
        0,
        src,
        tgt,
        gens,
        candidates,
        limit,
        &mut images,
        &mut map,
        &mut used,
        &mut results,
    );
    results
}

/// Turns an index map between element tables into a permutation of source labels
/// (for automorphisms) or into a [`GroupHom`].
fn as_hom(src_group: &PermGroup, tgt_group: &PermGroup, src: &Cayley, tgt: &Cayley, map: &[u32]) -> GroupHom {
    let full: HashMap<Permutation, Permutation> = src
        .elems
        .iter()
        .zip(map)
        .map(|(a, &b)| (a.clone(), tgt.elems[b as usize].clone()))
        .collect();
    let imgs = src_group
        .generators()
        .iter()
        .map(|g| full[g].clone())
        .collect();
    GroupHom::from_parts(src_group.clone(), tgt_group.clone(), imgs, full)
}

/// `Aut(G)` acting on the element labels `0..|G|` of `G` (labels follow [`PermGroup::elements`]).
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    pub group: PermGroup,
    base: PermGroup,
    automorphisms: Vec<Permutation>,
}

impl AutomorphismGroup {
    /// The group whose automorphisms these are.
    pub fn base_group(&self) -> &PermGroup {
        &self.base
    }

    /// Every automorphism, as label permutations, sorted.
    pub fn automorphisms(&self) -> &[Permutation] {
        &self.automorphisms
    }

    /// Images of the base group's generators under the automorphism `a`.
    pub fn generator_images(&self, a: &Permutation) -> Result<Vec<Permutation>> {
        let elems = self.base.elements()?;
        self.base
            .generators()
            .iter()
            .map(|g| {
                let i = self.base.element_index(g)?.expect("generator is an element");
                Ok(elems[a.image(i)].clone())
            })
            .collect()
    }

    /// The automorphism as a map on group elements.
    pub fn apply(&self, a: &Permutation, x: &Permutation) -> Result<Permutation> {
        let i = self
            .base
            .element_index(x)?
            .ok_or_else(|| Error::NotMember(x.to_string()))?;
        Ok(self.base.elements()?[a.image(i)].clone())
    }

    /// Inner automorphism `x -> g x g^-1` as a label permutation.
    pub fn inner(&self, g: &Permutation) -> Result<Permutation> {
        conjugation_action(&self.base, g)
    }

    /// `Inn(G)` as a subgroup of [`AutomorphismGroup::group`].
    pub fn inner_group(&self) -> Result<PermGroup> {
        let gens = self
            .base
            .generators()
            .iter()
            .map(|g| self.inner(g))
            .collect::<Result<Vec<_>>>()?;
        self.group.subgroup(gens)
    }
}

/// `x -> g x g^-1` on the element labels of `group`.
pub fn conjugation_action(group: &PermGroup, g: &Permutation) -> Result<Permutation> {
    let elems = group.elements()?;
    let gi = g.inverse();
    let imgs = elems
        .iter()
        .map(|x| {
            let y = g.then(x).then(&gi);
            group
                .element_index(&y)?
                .ok_or_else(|| Error::NotMember(g.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Permutation::from_images(imgs)
}

fn label_group(degree: usize, autos: &mut Vec<Permutation>) -> Result<PermGroup> {
    autos.sort();
    let full = PermGroup::trivial(degree)?;
    full.subgroup_from_elements(autos)
}

/// Full automorphism group of a desk-scale group.
pub fn automorphism_group(g: &PermGroup) -> Result<AutomorphismGroup> {
    g.size()?;
    let cay = Cayley::new(g)?;
    let gens = cay.greedy_generators(None);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| {
            (0..cay.len())
                .filter(|&y| cay.order[y] == cay.order[x] && cay.class_size[y] == cay.class_size[x])
                .collect()
        })
        .collect();
    let maps = search(&cay, &cay, &gens, &candidates, usize::MAX);
    let mut autos = maps
        .into_iter()
        .map(|m| Permutation::from_images(m.into_iter().map(|v| v as usize).collect()))
        .collect::<Result<Vec<_>>>()?;
    let group = label_group(cay.len(), &mut autos)?;
    Ok(AutomorphismGroup {
        group,
        base: g.clone(),
        automorphisms: autos,
    })
}

/// A group `P<s>` generated by a normal `p`-subgroup `P` and a `p'`-element `s`.
#[derive(Clone, Debug)]
pub struct MarkedPair {
    pub group: PermGroup,
    pub p_subgroup: PermGroup,
    pub s: Permutation,
}

impl MarkedPair {
    pub fn new(group: PermGroup, p_subgroup: PermGroup, s: Permutation) -> Result<Self> {
        let pair = MarkedPair {
            group,
            p_subgroup,
            s,
        };
        pair.validate()?;
        Ok(pair)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::MalformedPair(m.to_string()));
        if !self.p_subgroup.is_subgroup_of(&self.group) {
            return bad("P is not contained in the ambient group");
        }
        if !self.group.contains(&self.s) {
            return bad("s is not in the ambient group");
        }
        let pn = self.p_subgroup.size()? as u64;
        if pn > 1 {
            let (_, rest) = p_split(pn, smallest_prime_factor(pn));
            if rest != 1 {
                return bad("P is not a p-group");
            }
        }
        if gcd(self.s.order(), pn) != 1 {
            return bad("the order of s is not coprime to |P|");
        }
        if self
            .p_subgroup
            .generators()
            .iter()
            .any(|x| !self.p_subgroup.contains(&x.conjugated_by(&self.s)))
        {
            return bad("s does not normalize P");
        }
        if self.group.size()? as u64 != pn * self.s.order() {
            return bad("the ambient group is not P<s>");
        }
        Ok(())
    }

    /// Order of the automorphism of `P` induced by `s`.
    pub fn induced_order(&self) -> Result<u64> {
        let elems = self.p_subgroup.elements()?;
        let mut k = 1u64;
        let mut t = self.s.clone();
        while !elems.iter().all(|x| x.conjugated_by(&t) == *x) {
            t = t.then(&self.s);
            k += 1;
        }
        Ok(k)
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    (2..=n).find(|d| n % d == 0).unwrap_or(n)
}

/// An isomorphism `f: P<s> -> Q<t>` with `f(P) = Q` and `f(s) = t`, if one exists.
///
/// Any isomorphism sending `s` to a conjugate of `t` can be corrected by an inner
/// automorphism of the target to send `s` to `t` itself, so the search fixes `f(s) = t`.
pub fn find_pair_isomorphism(a: &MarkedPair, b: &MarkedPair) -> Result<Option<GroupHom>> {
    a.validate()?;
    b.validate()?;
    if a.group.order() != b.group.order()
        || a.p_subgroup.order() != b.p_subgroup.order()
        || a.s.order() != b.s.order()
    {
        return Ok(None);
    }
    let src = Cayley::new(&a.group)?;
    let tgt = Cayley::new(&b.group)?;
    let p_idx: Vec<usize> = a.p_subgroup.elements()?.iter().map(|x| src.index_of(x)).collect();
    let q_idx: Vec<usize> = b.p_subgroup.elements()?.iter().map(|x| tgt.index_of(x)).collect();
    let mut gens = vec![src.index_of(&a.s)];
    gens.extend(src.greedy_generators(Some(&p_idx)));
    let mut candidates = vec![vec![tgt.index_of(&b.s)]];
    for &g in &gens[1..] {
        candidates.push(
            q_idx
                .iter()
                .copied()
                .filter(|&y| tgt.order[y] == src.order[g])
                .collect(),
        );
    }
    let found = search(&src, &tgt, &gens, &candidates, 1);
    let Some(map) = found.into_iter().next() else {
        return Ok(None);
    };
    let hom = as_hom(&a.group, &b.group, &src, &tgt, &map);
    if a
        .p_subgroup
        .generators()
        .iter()
        .any(|x| !b.p_subgroup.contains(hom.apply(x).expect("total map")))
    {
        return Err(Error::Internal("pair isomorphism does not preserve P".into()));
    }
    Ok(Some(hom))
}

/// All automorphisms of `L<u>` sending `u` to a conjugate of `u`, as label
/// permutations of `pair.group`'s elements. Each is checked to preserve `L`.
pub fn pair_automorphisms(pair: &MarkedPair) -> Result<Vec<Permutation>> {
    pair.validate()?;
    let cay = Cayley::new(&pair.group)?;
    let u = cay.index_of(&pair.s);
    let l_idx: Vec<usize> = pair
        .p_subgroup
        .elements()?
        .iter()
        .map(|x| cay.index_of(x))
        .collect();
    let mut gens = vec![u];
    gens.extend(cay.greedy_generators(Some(&l_idx)));
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            (0..cay.len())
                .filter(|&y| {
                    if k == 0 {
                        cay.class_of[y] == cay.class_of[u]
                    } else {
                        cay.order[y] == cay.order[x] && cay.class_size[y] == cay.class_size[x]
                    }
                })
                .collect()
        })
        .collect();
    let maps = search(&cay, &cay, &gens, &candidates, usize::MAX);
    let mut l_mask = vec![false; cay.len()];
    for &i in &l_idx {
        l_mask[i] = true;
    }
    let mut out = Vec::with_capacity(maps.len());
    for m in maps {
        if l_idx.iter().any(|&i| !l_mask[m[i] as usize]) {
            return Err(Error::Internal(
                "pair automorphism does not preserve the normal p-subgroup".into(),
            ));
        }
        out.push(Permutation::from_images(
            m.into_iter().map(|v| v as usize).collect(),
        )?);
    }
    out.sort();
    Ok(out)
}

/// All isomorphisms `a -> b`, as index maps between the sorted element lists.
pub(crate) fn all_isomorphisms(a: &PermGroup, b: &PermGroup) -> Result<Vec<Vec<u32>>> {
    if a.order() != b.order() {
        return Ok(Vec::new());
    }
    let src = Cayley::new(a)?;
    let tgt = Cayley::new(b)?;
    let gens = src.greedy_generators(None);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| (0..tgt.len()).filter(|&y| tgt.order[y] == src.order[x]).collect())
        .collect();
    Ok(search(&src, &tgt, &gens, &candidates, usize::MAX))
}

/// Whether two groups are isomorphic.
pub fn are_isomorphic(a: &PermGroup, b: &PermGroup) -> Result<bool> {
    if a.order() != b.order() {
        return Ok(false);
    }
    let src = Cayley::new(a)?;
    let tgt = Cayley::new(b)?;
    let gens = src.greedy_generators(None);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| (0..tgt.len()).filter(|&y| tgt.order[y] == src.order[x]).collect())
        .collect();
    Ok(!search(&src, &tgt, &gens, &candidates, 1).is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(deg: usize, gens: &[&str]) -> PermGroup {
        PermGroup::new(
            deg,
            gens.iter().map(|s| Permutation::parse(deg, s).unwrap()).collect(),
        )
        .unwrap()
    }

    fn perm(deg: usize, s: &str) -> Permutation {
        Permutation::parse(deg, s).unwrap()
    }

    /// Brute force: every bijection of the element set that respects multiplication.
    fn brute_aut_count(g: &PermGroup) -> usize {
        let elems = g.elements().unwrap().to_vec();
        let n = elems.len();
        let idx = |x: &Permutation| elems.iter().position(|e| e == x).unwrap();
        let mut count = 0;
        let mut perm: Vec<usize> = (0..n).collect();
        fn heap(k: usize, a: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
            if k == 1 {
                f(a);
                return;
            }
            for i in 0..k {
                heap(k - 1, a, f);
                if k % 2 == 0 {
                    a.swap(i, k - 1);
                } else {
                    a.swap(0, k - 1);
                }
            }
        }
        heap(n, &mut perm, &mut |m: &[usize]| {
            let ok = (0..n).all(|i| {
                (0..n).all(|j| m[idx(&elems[i].then(&elems[j]))] == idx(&elems[m[i]].then(&elems[m[j]])))
            });
            if ok {
                count += 1;
            }
        });
        count
    }

    #[test]
    fn automorphism_orders() {
        let c3 = grp(3, &["(1,2,3)"]);
        assert_eq!(automorphism_group(&c3).unwrap().group.size().unwrap(), 2);
        let v4 = grp(4, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        let av4 = automorphism_group(&v4).unwrap();
        assert_eq!(av4.group.size().unwrap(), 6);
        assert!(!av4.group.is_abelian());
        let a4 = grp(4, &["(1,2)(3,4)", "(1,2,3)"]);
        let aa4 = automorphism_group(&a4).unwrap();
        assert_eq!(aa4.group.size().unwrap(), 24);
    }

    #[test]
    fn automorphism_count_matches_brute_force() {
        let s3 = grp(3, &["(1,2,3)", "(1,2)"]);
        assert_eq!(brute_aut_count(&s3), 6);
        assert_eq!(automorphism_group(&s3).unwrap().group.size().unwrap(), 6);
        let c4 = grp(4, &["(1,2,3,4)"]);
        assert_eq!(brute_aut_count(&c4), 2);
        assert_eq!(automorphism_group(&c4).unwrap().group.size().unwrap(), 2);
    }

    #[test]
    fn inner_automorphisms_are_members() {
        let a4 = grp(4, &["(1,2)(3,4)", "(1,2,3)"]);
        let aut = automorphism_group(&a4).unwrap();
        let inn = aut.inner_group().unwrap();
        assert_eq!(inn.size().unwrap(), 12);
        assert!(inn.is_subgroup_of(&aut.group));
        let a = &aut.automorphisms()[5];
        let imgs = aut.generator_images(a).unwrap();
        assert_eq!(imgs.len(), 2);
        assert_eq!(aut.apply(a, &a4.generators()[0]).unwrap(), imgs[0]);
    }

    #[test]
    fn pair_isomorphisms() {
        let s3 = grp(3, &["(1,2,3)", "(1,2)"]);
        let c3 = grp(3, &["(1,2,3)"]);
        let a = MarkedPair::new(s3.clone(), c3.clone(), perm(3, "(1,2)")).unwrap();
        let b = MarkedPair::new(s3.clone(), c3.clone(), perm(3, "(2,3)")).unwrap();
        let f = find_pair_isomorphism(&a, &b).unwrap().unwrap();
        assert_eq!(f.apply(&perm(3, "(1,2)")).unwrap(), &perm(3, "(2,3)"));

        let a4 = grp(4, &["(1,2)(3,4)", "(1,2,3)"]);
        let v4 = grp(4, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        let c = perm(4, "(1,2,3)");
        let x = MarkedPair::new(a4.clone(), v4.clone(), c.clone()).unwrap();
        let y = MarkedPair::new(a4.clone(), v4.clone(), c.pow(2)).unwrap();
        assert!(find_pair_isomorphism(&x, &y).unwrap().is_some());
        assert!(find_pair_isomorphism(&y, &x).unwrap().is_some());

        let z = MarkedPair::new(c3.clone(), c3.clone(), s3.identity()).unwrap();
        assert!(find_pair_isomorphism(&z, &a).unwrap().is_none());
    }

    #[test]
    fn malformed_pairs() {
        let s3 = grp(3, &["(1,2,3)", "(1,2)"]);
        let c3 = grp(3, &["(1,2,3)"]);
        // s not coprime to |P|
        assert!(MarkedPair::new(c3.clone(), c3.clone(), perm(3, "(1,2,3)")).is_err());
        // ambient bigger than P<s>
        assert!(MarkedPair::new(s3.clone(), c3.clone(), s3.identity()).is_err());
    }

    #[test]
    fn pair_automorphisms_of_a4_pair() {
        let a4 = grp(4, &["(1,2)(3,4)", "(1,2,3)"]);
        let v4 = grp(4, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        let pair = MarkedPair::new(a4, v4, perm(4, "(1,2,3)")).unwrap();
        assert_eq!(pair_automorphisms(&pair).unwrap().len(), 12);
    }

    #[test]
    fn isomorphism_test() {
        let c4 = grp(4, &["(1,2,3,4)"]);
        let v4 = grp(4, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        let c4b = grp(6, &["(1,3,5,6)"]);
        assert!(!are_isomorphic(&c4, &v4).unwrap());
        assert!(are_isomorphic(&c4, &c4b).unwrap());
        assert_eq!(all_isomorphisms(&c4, &c4b).unwrap().len(), 2);
    }
}
