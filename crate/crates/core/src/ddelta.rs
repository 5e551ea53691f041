//! Pairs `(P, s)`, their faithful quotients and the registry of pair classes `(L, u)`.
//!
//! A pair `(P, s)` is a `p`-subgroup `P` of `G` with a `p'`-element `s` of `N_G(P)`.
//! Its faithful quotient is realized on the element set of `P`: `L` acts by right
//! translations and `u` by `y -> s^-1 y s`, which gives `P ⋊ <i_s>` acting faithfully.
//! Classes of faithful quotients up to pair isomorphism live in a [`Registry`]; the
//! registry can be shared between groups so that the same class id and character
//! index name the same simple functor on both sides of a comparison.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::arith::is_prime;
use crate::chartab::{character_table, CharacterTable};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::hom::{extend_to_hom, GroupHom};
use crate::iso::{conjugation_action, find_pair_isomorphism, pair_automorphisms, MarkedPair};
use crate::perm::Permutation;
use crate::subgroups::p_subgroup_classes;

/// A pair `(P, s)` of `Q_{G,p}`.
#[derive(Clone, Debug)]
pub struct PairPS {
    pub ambient: Arc<PermGroup>,
    pub p: u64,
    pub subgroup: PermGroup,
    /// Index of `P` in `p_subgroup_classes(G, p)`.
    pub subgroup_class: usize,
    pub normalizer: Arc<PermGroup>,
    pub s: Permutation,
}

impl PairPS {
    /// `N_G(P, s) = N_G(P) ∩ C_G(s)`.
    pub fn stabilizer(&self) -> Result<PermGroup> {
        let elems: Vec<Permutation> = self
            .normalizer
            .elements()?
            .iter()
            .filter(|g| g.commutes_with(&self.s))
            .cloned()
            .collect();
        self.ambient.subgroup_from_elements(&elems)
    }
}

/// One representative per `G`-orbit of `Q_{G,p}`.
///
/// Pairs with the same `P` are conjugate iff their `s` are `N_G(P)`-conjugate, so the
/// orbits are enumerated as (class of `P`, `N_G(P)`-class of `p'`-elements of `N_G(P)`).
/// Within one `P`, classes are ordered by element order and then by representative.
pub fn enumerate_pair_orbits(g: &Arc<PermGroup>, p: u64) -> Result<Vec<PairPS>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut out = Vec::new();
    for (ci, sub) in p_subgroup_classes(g, p)?.into_iter().enumerate() {
        let norm = Arc::new(g.normalizer(&sub)?);
        let mut reps: Vec<Permutation> = norm
            .conjugacy_classes()?
            .into_iter()
            .map(|c| c.representative)
            .filter(|x| x.is_p_regular(p))
            .collect();
        reps.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
        for s in reps {
            out.push(PairPS {
                ambient: g.clone(),
                p,
                subgroup: sub.clone(),
                subgroup_class: ci,
                normalizer: norm.clone(),
                s,
            });
        }
    }
    Ok(out)
}

/// A faithful pair realized on the elements of a `p`-group `P`, with the natural
/// isomorphism from `L` back onto `P`.
#[derive(Clone, Debug)]
pub struct Realization {
    pub pair: MarkedPair,
    /// `p_elements[label]` is the element of `P` carried by point `label`.
    p_elements: Vec<Permutation>,
}

impl Realization {
    /// Natural isomorphism `L -> P`: `l` is the right translation by `l(1)`.
    pub fn to_p(&self, l: &Permutation) -> Permutation {
        self.p_elements[l.image(0)].clone()
    }
}

/// Realizes `P ⋊ <alpha>` for an automorphism `alpha` of `P` given on elements.
pub fn realize_pair(
    p_subgroup: &PermGroup,
    alpha: impl Fn(&Permutation) -> Permutation,
) -> Result<Realization> {
    let p_elements = p_subgroup.elements()?.to_vec();
    let n = p_elements.len();
    let label = |x: &Permutation| -> Result<usize> {
        p_subgroup
            .element_index(x)?
            .ok_or_else(|| Error::Internal(format!("{} is not in P", x)))
    };
    let mut l_gens = Vec::new();
    for x in p_subgroup.generators() {
        let imgs = p_elements
            .iter()
            .map(|y| label(&y.then(x)))
            .collect::<Result<Vec<_>>>()?;
        l_gens.push(Permutation::from_images(imgs)?);
    }
    // u must send y to alpha^-1(y): find alpha^-1 by inverting alpha on the element list
    let mut inv = vec![usize::MAX; n];
    for (i, y) in p_elements.iter().enumerate() {
        let j = label(&alpha(y))?;
        if inv[j] != usize::MAX {
            return Err(Error::Internal("map on P is not bijective".into()));
        }
        inv[j] = i;
    }
    let u = Permutation::from_images(inv)?;
    let l = PermGroup::new(n, l_gens.clone())?;
    let mut gens = l_gens;
    if !u.is_identity() {
        gens.push(u.clone());
    }
    let group = PermGroup::new(n, gens)?;
    Ok(Realization {
        pair: MarkedPair::new(group, l, u)?,
        p_elements,
    })
}

/// The faithful quotient `(P, s~)` of a pair: `s~` is the image of `s` in `<s>/C_<s>(P)`.
pub fn faithful_quotient(pr: &PairPS) -> Result<Realization> {
    realize_pair(&pr.subgroup, |y| y.conjugated_by(&pr.s))
}

/// A class of `D^Δ`-pairs with its automorphism data.
#[derive(Clone, Debug)]
pub struct DDeltaClass {
    pub class_id: usize,
    pub realization: MarkedPair,
    /// `Aut(L, u)` acting on the element labels of `realization.group`.
    pub aut_pair: PermGroup,
    /// `Inn(L<u>)` inside `aut_pair`.
    pub inner: PermGroup,
    pub out_pair: PermGroup,
    /// Projection `Aut(L, u) -> Out(L, u)`.
    pub projection: GroupHom,
    pub out_table: CharacterTable,
    aut_elements: Vec<Permutation>,
}

impl DDeltaClass {
    pub fn l_order(&self) -> usize {
        self.realization.p_subgroup.size().expect("desk-scale realization")
    }

    pub fn u_order(&self) -> u64 {
        self.realization.s.order()
    }

    pub fn out_order(&self) -> usize {
        self.out_pair.size().expect("desk-scale Out")
    }

    /// Every element of `Aut(L, u)`, sorted.
    pub fn aut_elements(&self) -> &[Permutation] {
        &self.aut_elements
    }

    /// Image of an element of `Aut(L, u)` in `Out(L, u)`.
    pub fn project(&self, a: &Permutation) -> Result<Permutation> {
        self.projection
            .apply(a)
            .cloned()
            .ok_or_else(|| Error::Internal(format!("{} is not in Aut(L,u)", a)))
    }

    /// The automorphism `a` of `L<u>` as a map on elements.
    pub fn apply_aut(&self, a: &Permutation, x: &Permutation) -> Result<Permutation> {
        let g = &self.realization.group;
        let i = g
            .element_index(x)?
            .ok_or_else(|| Error::NotMember(x.to_string()))?;
        Ok(g.elements()?[a.image(i)].clone())
    }

    /// Turns an automorphism of `L<u>` given on elements into a label permutation,
    /// checking that it lies in `Aut(L, u)`.
    pub fn aut_from_map(&self, map: &HashMap<Permutation, Permutation>) -> Result<Permutation> {
        let g = &self.realization.group;
        let imgs = g
            .elements()?
            .iter()
            .map(|x| {
                let y = map
                    .get(x)
                    .ok_or_else(|| Error::Internal("automorphism map is partial".into()))?;
                g.element_index(y)?
                    .ok_or_else(|| Error::Internal("automorphism leaves L<u>".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let a = Permutation::from_images(imgs)
            .map_err(|_| Error::Internal("automorphism map is not bijective".into()))?;
        if !self.aut_pair.contains(&a) {
            return Err(Error::Internal(format!(
                "map is not in Aut(L,u) of class {}",
                self.class_id
            )));
        }
        Ok(a)
    }
}

/// `Aut(L, u)`, `Inn(L<u>)`, `Out(L, u)` with its projection and character table.
#[allow(clippy::type_complexity)]
pub fn aut_out_of_class(
    realization: &MarkedPair,
) -> Result<(PermGroup, PermGroup, PermGroup, GroupHom, CharacterTable, Vec<Permutation>)> {
    let r = &realization.group;
    let autos = pair_automorphisms(realization)?;
    let holder = PermGroup::trivial(r.size()?)?;
    let aut_pair = holder.subgroup_from_elements(&autos)?;
    let inner_gens = r
        .generators()
        .iter()
        .map(|g| conjugation_action(r, g))
        .collect::<Result<Vec<_>>>()?;
    let inner = aut_pair.subgroup(inner_gens)?;
    if !inner.is_subgroup_of(&aut_pair) {
        return Err(Error::Internal("Inn(L<u>) is not inside Aut(L,u)".into()));
    }
    let (out_pair, projection) = aut_pair.quotient_group(&inner)?;
    let out_table = character_table(&out_pair)?;
    Ok((aut_pair, inner, out_pair, projection, out_table, autos))
}

static NEXT_REGISTRY_ID: AtomicU64 = AtomicU64::new(1);

/// Classes of `D^Δ`-pairs seen so far, numbered in order of first sight.
#[derive(Debug)]
pub struct Registry {
    id: u64,
    classes: Vec<DDeltaClass>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::new()
    }
}

impl Registry {
    pub fn new() -> Self {
        Registry {
            id: NEXT_REGISTRY_ID.fetch_add(1, Ordering::Relaxed),
            classes: Vec::new(),
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn classes(&self) -> &[DDeltaClass] {
        &self.classes
    }

    pub fn class(&self, id: usize) -> &DDeltaClass {
        &self.classes[id]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class of a faithful pair, created on first sight, with an isomorphism from
    /// the class realization onto `pair` sending `u` to `pair.s`.
    pub fn find_or_insert(&mut self, pair: &MarkedPair) -> Result<(usize, GroupHom)> {
        if pair.induced_order()? != pair.s.order() {
            return Err(Error::Internal("pair is not faithful: C_<u>(L) != 1".into()));
        }
        for cls in &self.classes {
            if let Some(f) = find_pair_isomorphism(&cls.realization, pair)? {
                return Ok((cls.class_id, f));
            }
        }
        let (aut_pair, inner, out_pair, projection, out_table, aut_elements) =
            aut_out_of_class(pair)?;
        let class_id = self.classes.len();
        self.classes.push(DDeltaClass {
            class_id,
            realization: pair.clone(),
            aut_pair,
            inner,
            out_pair,
            projection,
            out_table,
            aut_elements,
        });
        let id = GroupHom::from_generator_images(
            pair.group.clone(),
            pair.group.clone(),
            pair.group.generators().to_vec(),
        )?;
        Ok((class_id, id))
    }
}

/// An isomorphism `phi: L -> P` with `phi(^u l) = ^s phi(l)`.
#[derive(Clone, Debug)]
pub struct Witness {
    forward: HashMap<Permutation, Permutation>,
    backward: HashMap<Permutation, Permutation>,
}

impl Witness {
    pub fn new(forward: HashMap<Permutation, Permutation>) -> Result<Self> {
        let backward: HashMap<Permutation, Permutation> = forward
            .iter()
            .map(|(a, b)| (b.clone(), a.clone()))
            .collect();
        if backward.len() != forward.len() {
            return Err(Error::Internal("witness is not injective".into()));
        }
        Ok(Witness { forward, backward })
    }

    pub fn apply(&self, l: &Permutation) -> Option<&Permutation> {
        self.forward.get(l)
    }

    pub fn apply_inverse(&self, x: &Permutation) -> Option<&Permutation> {
        self.backward.get(x)
    }

    /// Checks `phi(u l u^-1) = s phi(l) s^-1` on the generators of `L`.
    pub fn intertwines(&self, cls: &DDeltaClass, s: &Permutation) -> bool {
        let u = &cls.realization.s;
        cls.realization.p_subgroup.generators().iter().all(|l| {
            let lhs = self.apply(&l.conjugated_by(u));
            let rhs = self.apply(l).map(|x| x.conjugated_by(s));
            lhs.is_some() && lhs == rhs.as_ref()
        })
    }
}

#[derive(Clone, Debug)]
pub struct Member {
    pub pair: PairPS,
    pub class_id: usize,
    pub witness: Witness,
}

/// Assignment of the pair orbits of one group to registry classes.
#[derive(Clone, Debug)]
pub struct Classification {
    pub group: Arc<PermGroup>,
    pub p: u64,
    pub registry_id: u64,
    pub members: Vec<Member>,
}

impl Classification {
    pub fn members_of(&self, class_id: usize) -> impl Iterator<Item = (usize, &Member)> {
        self.members
            .iter()
            .enumerate()
            .filter(move |(_, m)| m.class_id == class_id)
    }

    /// Class ids that have at least one member, ascending.
    pub fn class_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.members.iter().map(|m| m.class_id).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

/// Assigns each pair to the class of its faithful quotient, creating classes as needed,
/// and stores a verified witness `phi_{P,s}` for every member.
pub fn classify_into_registry(reps: Vec<PairPS>, registry: &mut Registry) -> Result<Classification> {
    let Some(first) = reps.first() else {
        return Err(Error::Hypothesis("no pairs to classify".into()));
    };
    if reps.iter().any(|r| r.p != first.p || !Arc::ptr_eq(&r.ambient, &first.ambient)) {
        return Err(Error::Hypothesis("pairs come from different groups or primes".into()));
    }
    let group = first.ambient.clone();
    let p = first.p;
    let mut members = Vec::with_capacity(reps.len());
    for pr in reps {
        let fq = faithful_quotient(&pr)?;
        let (class_id, f) = registry.find_or_insert(&fq.pair)?;
        let cls = registry.class(class_id);
        let forward = cls
            .realization
            .p_subgroup
            .elements()?
            .iter()
            .map(|l| {
                let image = f
                    .apply(l)
                    .ok_or_else(|| Error::Internal("pair isomorphism is partial".into()))?;
                Ok((l.clone(), fq.to_p(image)))
            })
            .collect::<Result<HashMap<_, _>>>()?;
        let witness = Witness::new(forward)?;
        if !witness.intertwines(cls, &pr.s) {
            return Err(Error::Internal(format!(
                "witness for (P of order {}, s = {}) fails phi(^u l) = ^s phi(l)",
                pr.subgroup.size()?,
                pr.s
            )));
        }
        members.push(Member {
            pair: pr,
            class_id,
            witness,
        });
    }
    Ok(Classification {
        group,
        p,
        registry_id: registry.id(),
        members,
    })
}

/// The automorphism of `L<u>` acting as `phi^-1 ∘ i_g ∘ phi` on `L` and fixing `u`.
pub fn lift_to_aut(
    cls: &DDeltaClass,
    witness: &Witness,
    g: &Permutation,
) -> Result<Permutation> {
    let r = &cls.realization;
    let mut gens = vec![r.s.clone()];
    let mut imgs = vec![r.s.clone()];
    for l in r.p_subgroup.generators() {
        let x = witness
            .apply(l)
            .ok_or_else(|| Error::Internal("witness is partial".into()))?;
        let y = x.conjugated_by(g);
        let back = witness.apply_inverse(&y).ok_or_else(|| {
            Error::Internal(format!("{} does not normalize P", g))
        })?;
        gens.push(l.clone());
        imgs.push(back.clone());
    }
    let map = extend_to_hom(&gens, &imgs, r.group.identity(), r.group.identity()).ok_or_else(
        || {
            Error::Internal(format!(
                "intertwining violation: phi^-1 i_g phi with g = {} does not extend to L<u> fixing u",
                g
            ))
        },
    )?;
    cls.aut_from_map(&map)
}

/// Image of `N_G(P, s)` in `Out(L, u)` computed through the witness `phi`.
pub fn image_in_out(cls: &DDeltaClass, pair: &PairPS, witness: &Witness) -> Result<PermGroup> {
    let stab = pair.stabilizer()?;
    let imgs = stab
        .generators()
        .iter()
        .map(|g| cls.project(&lift_to_aut(cls, witness, g)?))
        .collect::<Result<Vec<_>>>()?;
    cls.out_pair.subgroup(imgs)
}

/// Image of `N_G(P, s)` in `Out(L, u)` for a classified member.
pub fn n_image_in_out(cls: &DDeltaClass, member: &Member) -> Result<PermGroup> {
    if member.class_id != cls.class_id {
        return Err(Error::Hypothesis(format!(
            "member belongs to class {}, not {}",
            member.class_id, cls.class_id
        )));
    }
    image_in_out(cls, &member.pair, &member.witness)
}
