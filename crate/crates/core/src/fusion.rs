//! The fusion system of `D ⋊ E` on `D` and the Brauer-triple side of the multiplicity formula.
//!
//! Brauer pairs are implicit: for `G = D ⋊ E` with `E` acting freely each `p`-subgroup
//! carries a unique relevant block of its centralizer, so objects are plain subgroups
//! `P ≤ D` up to `G`-conjugacy and `N_G(P, e_P) = N_G(P)`.
//!
//! Automorphisms of `P` and isomorphisms `L -> P` are stored as index maps on the
//! sorted element lists of the groups involved.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::arith::{gcd, is_prime};
use crate::ddelta::{image_in_out, Classification, DDeltaClass, PairPS, Witness};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::iso::all_isomorphisms;
use crate::perm::Permutation;
use crate::subgroups::p_subgroup_classes;

/// An index map on the sorted elements of a group.
pub type IndexMap = Vec<u32>;

fn compose(first: &[u32], second: &[u32]) -> IndexMap {
    first.iter().map(|&i| second[i as usize]).collect()
}

fn invert(map: &[u32]) -> IndexMap {
    let mut inv = vec![0u32; map.len()];
    for (i, &j) in map.iter().enumerate() {
        inv[j as usize] = i as u32;
    }
    inv
}

/// One object `P` of the fusion system with `Aut_F(P) = {i_g|_P : g ∈ N_G(P)}`.
#[derive(Clone, Debug)]
pub struct FusionObject {
    pub subgroup: PermGroup,
    pub normalizer: Arc<PermGroup>,
    aut_f: BTreeSet<IndexMap>,
}

impl FusionObject {
    fn new(g: &PermGroup, subgroup: PermGroup) -> Result<Self> {
        let normalizer = Arc::new(g.normalizer(&subgroup)?);
        let mut aut_f = BTreeSet::new();
        for n in normalizer.elements()? {
            aut_f.insert(restriction(&subgroup, n)?);
        }
        Ok(FusionObject {
            subgroup,
            normalizer,
            aut_f,
        })
    }

    /// `Aut_F(P)` as index maps on the elements of `P`, sorted.
    pub fn aut_f(&self) -> impl Iterator<Item = &IndexMap> {
        self.aut_f.iter()
    }

    pub fn aut_f_order(&self) -> usize {
        self.aut_f.len()
    }

    /// `Aut_F(P)` as a permutation group on the `|P|` element labels.
    pub fn aut_f_group(&self) -> Result<PermGroup> {
        let n = self.subgroup.size()?;
        let perms = self
            .aut_f
            .iter()
            .map(|m| Permutation::from_images(m.iter().map(|&x| x as usize).collect()))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::trivial(n)?.subgroup_from_elements(&perms)
    }
}

/// `i_g` restricted to a subgroup it normalizes, as an index map.
fn restriction(sub: &PermGroup, g: &Permutation) -> Result<IndexMap> {
    sub.elements()?
        .iter()
        .map(|x| {
            sub.element_index(&x.conjugated_by(g))?
                .map(|i| i as u32)
                .ok_or_else(|| Error::Internal(format!("{} does not normalize the subgroup", g)))
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct FusionData {
    pub group: Arc<PermGroup>,
    pub defect: PermGroup,
    pub complement: PermGroup,
    pub p: u64,
    /// Subgroups of `D` up to `G`-conjugacy, in the order of `p_subgroup_classes`.
    pub objects: Vec<FusionObject>,
}

fn is_power_of(n: usize, p: u64) -> bool {
    let mut n = n as u64;
    while n > 1 && n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Builds `F_{D⋊E}(D)`, checking that `D` is a normal abelian Sylow `p`-subgroup with
/// complement `E` acting freely on `D \ {1}`.
pub fn build_fusion(
    g: Arc<PermGroup>,
    d: PermGroup,
    e: PermGroup,
    p: u64,
) -> Result<FusionData> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !d.is_subgroup_of(&g) || !e.is_subgroup_of(&g) {
        return Err(Error::NotSubgroup("D and E must lie in G".into()));
    }
    let (gn, dn, en) = (g.size()?, d.size()?, e.size()?);
    if !is_power_of(dn, p) {
        return Err(Error::Hypothesis(format!("|D| = {} is not a power of {}", dn, p)));
    }
    if (gn / dn) as u64 % p == 0 {
        return Err(Error::Hypothesis(format!(
            "D of order {} is not a Sylow {}-subgroup of a group of order {}",
            dn, p, gn
        )));
    }
    if let Some(x) = g
        .generators()
        .iter()
        .find(|x| d.generators().iter().any(|y| !d.contains(&y.conjugated_by(x))))
    {
        return Err(Error::Hypothesis(format!("D is not normal: {} moves it", x)));
    }
    if !d.is_abelian() {
        return Err(Error::Hypothesis("D is not abelian".into()));
    }
    if dn * en != gn {
        return Err(Error::Hypothesis(format!(
            "|D| * |E| = {} * {} differs from |G| = {}",
            dn, en, gn
        )));
    }
    if let Some(x) = e.elements()?.iter().find(|x| !x.is_identity() && d.contains(x)) {
        return Err(Error::Hypothesis(format!("D ∩ E contains {}", x)));
    }
    let d_elems = d.elements()?;
    for x in e.elements()?.iter().skip(1) {
        if let Some(v) = d_elems.iter().skip(1).find(|v| v.conjugated_by(x) == **v) {
            return Err(Error::Hypothesis(format!(
                "E does not act freely on D: {} centralizes {}",
                x, v
            )));
        }
    }
    let objects = p_subgroup_classes(&g, p)?
        .into_iter()
        .map(|sub| FusionObject::new(&g, sub))
        .collect::<Result<Vec<_>>>()?;
    Ok(FusionData {
        group: g,
        defect: d,
        complement: e,
        p,
        objects,
    })
}

/// Finds `D` and a complement `E` in `g` and calls [`build_fusion`].
///
/// `D` is the Sylow `p`-subgroup, which must be normal. `E` is searched among
/// subgroups generated by one or two `p'`-elements.
pub fn fusion_from_group(g: Arc<PermGroup>, p: u64) -> Result<FusionData> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let sylow = p_subgroup_classes(&g, p)?
        .pop()
        .expect("trivial subgroup is always present");
    if !g.is_normal(&sylow)? {
        let witness = g
            .generators()
            .iter()
            .find(|x| sylow.generators().iter().any(|y| !sylow.contains(&y.conjugated_by(x))))
            .cloned()
            .unwrap_or_else(|| g.identity());
        return Err(Error::Hypothesis(format!(
            "Sylow {}-subgroup of order {} is not normal: conjugation by {} moves it",
            p,
            sylow.size()?,
            witness
        )));
    }
    let target = g.size()? / sylow.size()?;
    let regular: Vec<Permutation> = g
        .elements()?
        .iter()
        .filter(|x| x.is_p_regular(p) && target as u64 % x.order() == 0)
        .cloned()
        .collect();
    let mut complement = None;
    'search: for (i, x) in regular.iter().enumerate() {
        let h = g.subgroup(vec![x.clone()])?;
        if h.size()? == target {
            complement = Some(h);
            break;
        }
        for y in &regular[i + 1..] {
            if h.contains(y) {
                continue;
            }
            let h2 = g.subgroup(vec![x.clone(), y.clone()])?;
            if h2.size()? == target {
                complement = Some(h2);
                break 'search;
            }
        }
    }
    let e = complement.ok_or_else(|| {
        Error::Hypothesis(format!(
            "no complement of order {} generated by at most two elements",
            target
        ))
    })?;
    build_fusion(g, sylow, e, p)
}

/// A triple `(P, e_P, π)` with `e_P` implicit; `pi` maps `L`-indices to `P`-indices.
#[derive(Clone, Debug)]
pub struct FusionTriple {
    pub object: usize,
    pub pi: IndexMap,
    pub class_id: usize,
}

#[derive(Clone, Debug)]
pub struct TripleOrbit {
    pub representative: FusionTriple,
    pub size: usize,
    /// `Out(L,u)_{(P,e,π)}` inside the class's `Out(L,u)`.
    pub stabilizer: PermGroup,
}

/// `ψ|_L` for every element of `Aut(L,u)`, as index maps on `L`.
fn aut_restrictions(cls: &DDeltaClass) -> Result<Vec<(Permutation, IndexMap)>> {
    let l = &cls.realization.p_subgroup;
    let l_elems = l.elements()?;
    cls.aut_elements()
        .iter()
        .map(|a| {
            let m = l_elems
                .iter()
                .map(|x| {
                    let y = cls.apply_aut(a, x)?;
                    l.element_index(&y)?
                        .map(|i| i as u32)
                        .ok_or_else(|| Error::Internal("Aut(L,u) does not preserve L".into()))
                })
                .collect::<Result<IndexMap>>()?;
            Ok((a.clone(), m))
        })
        .collect()
}

/// All isomorphisms `π: L -> P` with `π i_u π^-1 ∈ Aut_F(P)`.
pub fn admissible_isomorphisms(
    obj: &FusionObject,
    cls: &DDeltaClass,
) -> Result<Vec<IndexMap>> {
    let l = &cls.realization.p_subgroup;
    if l.order() != obj.subgroup.order() {
        return Ok(Vec::new());
    }
    let c_u = restriction(l, &cls.realization.s)?;
    let mut out: Vec<IndexMap> = all_isomorphisms(l, &obj.subgroup)?
        .into_iter()
        .filter(|pi| obj.aut_f.contains(&compose(&compose(&invert(pi), &c_u), pi)))
        .collect();
    out.sort();
    Ok(out)
}

/// Orbits of `N_G(P) × Aut(L,u)` on admissible isomorphisms, with their stabilizers in
/// `Out(L,u)`. Objects are visited in order; empty when no object matches `|L|`.
pub fn triple_orbits(f: &FusionData, cls: &DDeltaClass) -> Result<Vec<TripleOrbit>> {
    let auts = aut_restrictions(cls)?;
    let mut out = Vec::new();
    for (oi, obj) in f.objects.iter().enumerate() {
        if obj.subgroup.is_trivial() {
            continue;
        }
        let triples = admissible_isomorphisms(obj, cls)?;
        let valid: HashSet<&IndexMap> = triples.iter().collect();
        let mut seen: HashSet<IndexMap> = HashSet::new();
        for start in &triples {
            if seen.contains(start) {
                continue;
            }
            let mut queue = VecDeque::from([start.clone()]);
            seen.insert(start.clone());
            let mut size = 0;
            while let Some(pi) = queue.pop_front() {
                size += 1;
                let left = obj.aut_f.iter().map(|r| compose(&pi, r));
                let right = auts.iter().map(|(_, psi)| compose(psi, &pi));
                for next in left.chain(right) {
                    if !valid.contains(&next) {
                        return Err(Error::TheoremViolation(format!(
                            "admissible isomorphisms at object {} are not closed under the actions",
                            oi
                        )));
                    }
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
            let pi_inv = invert(start);
            let mut stab = auts
                .iter()
                .filter(|(_, psi)| obj.aut_f.contains(&compose(&compose(&pi_inv, psi), start)))
                .map(|(a, _)| cls.project(a))
                .collect::<Result<Vec<_>>>()?;
            stab.sort();
            stab.dedup();
            out.push(TripleOrbit {
                representative: FusionTriple {
                    object: oi,
                    pi: start.clone(),
                    class_id: cls.class_id,
                },
                size,
                stabilizer: cls.out_pair.subgroup_from_elements(&stab)?,
            });
        }
        let total: usize = out.iter().filter(|o| o.representative.object == oi).map(|o| o.size).sum();
        if total != triples.len() {
            return Err(Error::Internal(format!(
                "orbit sizes at object {} sum to {}, expected {}",
                oi,
                total,
                triples.len()
            )));
        }
    }
    Ok(out)
}

/// `π` as a witness `L -> P` on elements.
pub fn triple_witness(f: &FusionData, cls: &DDeltaClass, t: &FusionTriple) -> Result<Witness> {
    let l_elems = cls.realization.p_subgroup.elements()?;
    let p_elems = f.objects[t.object].subgroup.elements()?;
    let forward: HashMap<Permutation, Permutation> = l_elems
        .iter()
        .zip(&t.pi)
        .map(|(l, &j)| (l.clone(), p_elems[j as usize].clone()))
        .collect();
    Witness::new(forward)
}

/// `Ψ(P, e, π) = (P, s)` with `s` the smallest `p'`-element of `N_G(P)` (by order, then
/// images) such that `i_s|_P = π i_u π^-1`.
pub fn psi(f: &FusionData, cls: &DDeltaClass, t: &FusionTriple) -> Result<PairPS> {
    let obj = &f.objects[t.object];
    let c_u = restriction(&cls.realization.p_subgroup, &cls.realization.s)?;
    let wanted = compose(&compose(&invert(&t.pi), &c_u), &t.pi);
    let mut found: Option<Permutation> = None;
    for n in obj.normalizer.elements()? {
        if !n.is_p_regular(f.p) || restriction(&obj.subgroup, n)? != wanted {
            continue;
        }
        let better = match &found {
            None => true,
            Some(cur) => (n.order(), n) < (cur.order(), cur),
        };
        if better {
            found = Some(n.clone());
        }
    }
    let s = found.ok_or_else(|| {
        Error::TheoremViolation(format!(
            "no p'-element of N_G(P) induces π i_u π^-1 at object {} for class {}",
            t.object, cls.class_id
        ))
    })?;
    Ok(PairPS {
        ambient: f.group.clone(),
        p: f.p,
        subgroup: obj.subgroup.clone(),
        subgroup_class: t.object,
        normalizer: obj.normalizer.clone(),
        s,
    })
}

/// Smallest `N_G(P)`-conjugate of `s`; equals the orbit representative chosen by
/// `enumerate_pair_orbits`.
fn pair_key(pair: &PairPS) -> Result<(usize, Permutation)> {
    let best = pair
        .normalizer
        .elements()?
        .iter()
        .map(|n| pair.s.conjugated_by(n))
        .min()
        .expect("normalizer is nonempty");
    Ok((pair.subgroup_class, best))
}

#[derive(Clone, Debug)]
pub struct MatchedOrbit {
    pub orbit: usize,
    pub member: usize,
    pub stabilizer_order: usize,
}

#[derive(Clone, Debug)]
pub struct BijectionReport {
    pub class_id: usize,
    pub triple_orbits: usize,
    pub pair_orbits: usize,
    pub matched: Vec<MatchedOrbit>,
}

/// Checks that `Ψ` induces a bijection from triple orbits onto the pair orbits in `cls`
/// and that stabilizers agree with the images of `N_G(P, s)`.
pub fn verify_bijection(
    f: &FusionData,
    cls: &DDeltaClass,
    classification: &Classification,
) -> Result<BijectionReport> {
    if cls.realization.p_subgroup.is_trivial() {
        return Err(Error::Hypothesis("class has L = 1".into()));
    }
    if classification.p != f.p || !Arc::ptr_eq(&classification.group, &f.group) {
        return Err(Error::Hypothesis(
            "classification and fusion data describe different inputs".into(),
        ));
    }
    let by_key: HashMap<(usize, Permutation), usize> = classification
        .members
        .iter()
        .enumerate()
        .map(|(i, m)| ((m.pair.subgroup_class, m.pair.s.clone()), i))
        .collect();
    let orbits = triple_orbits(f, cls)?;
    let auts = aut_restrictions(cls)?;
    let mut matched = Vec::with_capacity(orbits.len());
    let mut hit = vec![false; classification.members.len()];
    for (oi, orbit) in orbits.iter().enumerate() {
        let t = &orbit.representative;
        let image = psi(f, cls, t)?;
        let key = pair_key(&image)?;
        // every element of the orbit must land in the same pair orbit
        let obj = &f.objects[t.object];
        for r in obj.aut_f.iter() {
            for (_, a) in &auts {
                let moved = FusionTriple {
                    object: t.object,
                    pi: compose(&compose(a, &t.pi), r),
                    class_id: t.class_id,
                };
                if pair_key(&psi(f, cls, &moved)?)? != key {
                    return Err(Error::TheoremViolation(format!(
                        "Ψ is not constant on triple orbit {} of class {}",
                        oi, cls.class_id
                    )));
                }
            }
        }
        let &mi = by_key.get(&key).ok_or_else(|| {
            Error::TheoremViolation(format!(
                "Ψ(orbit {}) = (object {}, s = {}) is not an enumerated pair orbit",
                oi, key.0, key.1
            ))
        })?;
        let member = &classification.members[mi];
        if member.class_id != cls.class_id {
            return Err(Error::TheoremViolation(format!(
                "Ψ(orbit {}) lies in class {}, not {}",
                oi, member.class_id, cls.class_id
            )));
        }
        if std::mem::replace(&mut hit[mi], true) {
            return Err(Error::TheoremViolation(format!(
                "Ψ is not injective: orbit {} hits pair orbit {} twice",
                oi, mi
            )));
        }
        let witness = triple_witness(f, cls, t)?;
        let n_image = image_in_out(cls, &image, &witness)?;
        if n_image != orbit.stabilizer {
            return Err(Error::TheoremViolation(format!(
                "orbit {} of class {}: image of N_G(P,s) has order {}, stabilizer has order {}",
                oi,
                cls.class_id,
                n_image.size()?,
                orbit.stabilizer.size()?
            )));
        }
        matched.push(MatchedOrbit {
            orbit: oi,
            member: mi,
            stabilizer_order: orbit.stabilizer.size()?,
        });
    }
    let pair_orbits: Vec<usize> = classification.members_of(cls.class_id).map(|(i, _)| i).collect();
    if let Some(&missed) = pair_orbits.iter().find(|&&i| !hit[i]) {
        return Err(Error::TheoremViolation(format!(
            "Ψ is not surjective: pair orbit {} of class {} has no triple orbit",
            missed, cls.class_id
        )));
    }
    Ok(BijectionReport {
        class_id: cls.class_id,
        triple_orbits: orbits.len(),
        pair_orbits: pair_orbits.len(),
        matched,
    })
}

/// `p'`-elements of `Aut_F(P)` up to conjugacy in `Aut_F(P)`, as index maps.
pub fn p_regular_autf_classes(obj: &FusionObject, p: u64) -> Result<Vec<IndexMap>> {
    let a = obj.aut_f_group()?;
    Ok(a.conjugacy_classes()?
        .into_iter()
        .map(|c| c.representative)
        .filter(|x| gcd(x.order(), p) == 1)
        .map(|x| x.images().map(|i| i as u32).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ddelta::{classify_into_registry, enumerate_pair_orbits, Registry};

    fn grp(deg: usize, gens: &[&str]) -> Arc<PermGroup> {
        Arc::new(
            PermGroup::new(
                deg,
                gens.iter().map(|s| Permutation::parse(deg, s).unwrap()).collect(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn objects_and_aut_f() {
        let s3 = grp(3, &["(1,2,3)", "(1,2)"]);
        let f = fusion_from_group(s3, 3).unwrap();
        assert_eq!(f.objects.len(), 2);
        assert_eq!(f.objects[1].aut_f_order(), 2);
        let a4 = grp(4, &["(1,2)(3,4)", "(1,2,3)"]);
        let f = fusion_from_group(a4, 2).unwrap();
        let orders: Vec<usize> = f.objects.iter().map(|o| o.subgroup.size().unwrap()).collect();
        assert_eq!(orders, vec![1, 2, 4]);
        assert_eq!(f.objects[2].aut_f_order(), 3);
        let f20 = grp(5, &["(1,2,3,4,5)", "(2,3,5,4)"]);
        let f = fusion_from_group(f20, 5).unwrap();
        assert_eq!(f.objects[1].aut_f_order(), 4);
    }

    #[test]
    fn rejects_non_normal_sylow() {
        let s4 = grp(4, &["(1,2,3,4)", "(1,2)"]);
        let err = fusion_from_group(s4, 2).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn rejects_non_free_action() {
        // C3 x S3 acting on 6 points: D = C3 x C3 normal, E = <t> centralizes the first factor
        let g = grp(6, &["(1,2,3)", "(4,5,6)", "(5,6)"]);
        let d = g.subgroup(vec![Permutation::parse(6, "(1,2,3)").unwrap(), Permutation::parse(6, "(4,5,6)").unwrap()]).unwrap();
        let e = g.subgroup(vec![Permutation::parse(6, "(5,6)").unwrap()]).unwrap();
        let err = build_fusion(g, d, e, 3).unwrap_err();
        assert!(err.to_string().contains("freely"), "{}", err);
    }

    #[test]
    fn a4_orbits_and_bijection() {
        let a4 = grp(4, &["(1,2)(3,4)", "(1,2,3)"]);
        let f = fusion_from_group(a4.clone(), 2).unwrap();
        let mut reg = Registry::new();
        let cl = classify_into_registry(enumerate_pair_orbits(&a4, 2).unwrap(), &mut reg).unwrap();
        let v4_ord3 = reg
            .classes()
            .iter()
            .find(|c| c.l_order() == 4 && c.u_order() == 3)
            .unwrap();
        let orbits = triple_orbits(&f, v4_ord3).unwrap();
        assert_eq!(orbits.len(), 2);
        assert!(orbits.iter().all(|o| o.stabilizer.is_trivial()));
        assert_eq!(orbits.iter().map(|o| o.size).sum::<usize>(), 6);
        let v4_1 = reg
            .classes()
            .iter()
            .find(|c| c.l_order() == 4 && c.u_order() == 1)
            .unwrap();
        let orbits = triple_orbits(&f, v4_1).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].stabilizer.size().unwrap(), 3);
        for cls in reg.classes().iter().filter(|c| c.l_order() > 1) {
            let rep = verify_bijection(&f, cls, &cl).unwrap();
            assert_eq!(rep.triple_orbits, rep.pair_orbits);
        }
    }

    #[test]
    fn psi_on_s3() {
        let s3 = grp(3, &["(1,2,3)", "(1,2)"]);
        let f = fusion_from_group(s3.clone(), 3).unwrap();
        let mut reg = Registry::new();
        let cl = classify_into_registry(enumerate_pair_orbits(&s3, 3).unwrap(), &mut reg).unwrap();
        let inv = reg.classes().iter().find(|c| c.l_order() == 3 && c.u_order() == 2).unwrap();
        let orbits = triple_orbits(&f, inv).unwrap();
        assert_eq!(orbits.len(), 1);
        let pr = psi(&f, inv, &orbits[0].representative).unwrap();
        assert_eq!(pr.s.order(), 2);
        let triv = reg.classes().iter().find(|c| c.l_order() == 3 && c.u_order() == 1).unwrap();
        let orbits = triple_orbits(&f, triv).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].stabilizer.size().unwrap(), 2);
        assert!(psi(&f, triv, &orbits[0].representative).unwrap().s.is_identity());
        for cls in reg.classes().iter().filter(|c| c.l_order() > 1) {
            verify_bijection(&f, cls, &cl).unwrap();
        }
    }
}
