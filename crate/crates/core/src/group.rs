//! Permutation groups backed by a base and strong generating set.
//!
//! Groups are immutable once built. Element lists and conjugacy classes are
//! computed on first use and cached; both require the group to be within the
//! desk-scale bound (see [`desk_scale_bound`]).

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::arith::{is_prime, lcm, p_split};
use crate::error::{Error, Result};
use crate::hom::GroupHom;
use crate::perm::Permutation;

/// Default largest group order that element-enumerating algorithms accept.
pub const DEFAULT_MAX_ORDER: usize = 512;

/// The desk-scale bound, `BLOCKFUNCTOR_MAX_ORDER` if set and valid, else [`DEFAULT_MAX_ORDER`].
pub fn desk_scale_bound() -> usize {
    std::env::var("BLOCKFUNCTOR_MAX_ORDER")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_MAX_ORDER)
}

/// Subgroups are ordinary groups on the same point set as their parent;
/// operations taking a parent and a subgroup check containment themselves.
pub type Subgroup = PermGroup;

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    gens: Vec<Permutation>,
    /// `transversal[b]` maps the level's base point to `b`.
    transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(point: usize, gens: Vec<Permutation>, degree: usize) -> Self {
        let mut lvl = Level {
            point,
            gens,
            transversal: Vec::new(),
        };
        lvl.rebuild(degree);
        lvl
    }

    fn rebuild(&mut self, degree: usize) {
        let mut t: Vec<Option<Permutation>> = vec![None; degree];
        t[self.point] = Some(Permutation::identity(degree));
        let mut queue = VecDeque::from([self.point]);
        while let Some(b) = queue.pop_front() {
            let ub = t[b].clone().expect("orbit point has a transversal");
            for s in &self.gens {
                let c = s.image(b);
                if t[c].is_none() {
                    t[c] = Some(ub.then(s));
                    queue.push_back(c);
                }
            }
        }
        self.transversal = t;
    }

    fn orbit(&self) -> impl Iterator<Item = usize> + '_ {
        self.transversal
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.as_ref().map(|_| i))
    }

    fn orbit_len(&self) -> usize {
        self.transversal.iter().filter(|t| t.is_some()).count()
    }
}

/// Sorted element list with a reverse index.
#[derive(Debug)]
pub struct ElementTable {
    elems: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
}

impl ElementTable {
    fn new(mut elems: Vec<Permutation>) -> Self {
        elems.sort();
        elems.dedup();
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        ElementTable { elems, index }
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elems
    }

    pub fn index_of(&self, g: &Permutation) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
}

#[derive(Debug)]
struct ClassData {
    /// element indices of each class, classes ordered by smallest element
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

/// A conjugacy class given by its smallest element and its size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: Permutation,
    pub size: usize,
}

#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
    order: BigUint,
    elements: OnceLock<Arc<ElementTable>>,
    classes: OnceLock<Arc<ClassData>>,
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.order == other.order
            && other.generators.iter().all(|g| self.contains(g))
    }
}

impl Eq for PermGroup {}

impl PermGroup {
    /// Builds the group generated by `gens` on `degree` points.
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::EmptyDegree);
        }
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                expected: degree,
                got: g.degree(),
            });
        }
        let levels = schreier_sims(degree, &gens);
        let order = levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit_len()));
        Ok(PermGroup {
            degree,
            generators: gens,
            levels,
            order,
            elements: OnceLock::new(),
            classes: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Result<Self> {
        Self::new(degree, Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    /// Strong generators, deduplicated, in the order they were found.
    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Lengths of the fundamental orbits along the base.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(Level::orbit_len).collect()
    }

    /// Exact group order.
    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// The order as a machine integer, failing above the desk-scale bound.
    pub fn size(&self) -> Result<usize> {
        let bound = desk_scale_bound();
        match self.order.to_usize() {
            Some(n) if n <= bound => Ok(n),
            _ => Err(Error::SizeBound {
                order: self.order.to_string(),
                bound,
            }),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order.is_one()
    }

    /// Membership test by sifting through the stabilizer chain.
    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, j) = strip(&self.levels, g, 0);
        j == self.levels.len() && h.is_identity()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    pub(crate) fn table(&self) -> Result<&Arc<ElementTable>> {
        if let Some(t) = self.elements.get() {
            return Ok(t);
        }
        self.size()?;
        Ok(self.elements.get_or_init(|| {
            let mut elems = vec![Permutation::identity(self.degree)];
            for lvl in self.levels.iter().rev() {
                let reps: Vec<&Permutation> = lvl.transversal.iter().flatten().collect();
                let mut next = Vec::with_capacity(elems.len() * reps.len());
                for e in &elems {
                    for u in &reps {
                        next.push(e.then(u));
                    }
                }
                elems = next;
            }
            Arc::new(ElementTable::new(elems))
        }))
    }

    /// All elements in lexicographic order of their image lists (identity first).
    pub fn elements(&self) -> Result<&[Permutation]> {
        Ok(self.table()?.elements())
    }

    /// Position of `g` in [`PermGroup::elements`].
    pub fn element_index(&self, g: &Permutation) -> Result<Option<usize>> {
        Ok(self.table()?.index_of(g))
    }

    fn class_data(&self) -> Result<&Arc<ClassData>> {
        if let Some(c) = self.classes.get() {
            return Ok(c);
        }
        let table = self.table()?.clone();
        Ok(self.classes.get_or_init(|| {
            let n = table.len();
            let gens: Vec<(Permutation, Permutation)> = self
                .generators
                .iter()
                .map(|g| (g.clone(), g.inverse()))
                .collect();
            let mut class_of = vec![usize::MAX; n];
            let mut classes = Vec::new();
            for start in 0..n {
                if class_of[start] != usize::MAX {
                    continue;
                }
                let cid = classes.len();
                let mut members = vec![start];
                class_of[start] = cid;
                let mut k = 0;
                while k < members.len() {
                    let x = &table.elems[members[k]];
                    for (g, gi) in &gens {
                        let y = g.then(x).then(gi);
                        let yi = table.index_of(&y).expect("closed under conjugation");
                        if class_of[yi] == usize::MAX {
                            class_of[yi] = cid;
                            members.push(yi);
                        }
                    }
                    k += 1;
                }
                members.sort_unstable();
                classes.push(members);
            }
            Arc::new(ClassData { classes, class_of })
        }))
    }

    /// Conjugacy classes ordered by their smallest element; the first is `{1}`.
    pub fn conjugacy_classes(&self) -> Result<Vec<ConjugacyClass>> {
        let data = self.class_data()?;
        let elems = self.elements()?;
        Ok(data
            .classes
            .iter()
            .map(|c| ConjugacyClass {
                representative: elems[c[0]].clone(),
                size: c.len(),
            })
            .collect())
    }

    /// Index into [`PermGroup::conjugacy_classes`] of the class containing `g`.
    pub fn class_index_of(&self, g: &Permutation) -> Result<Option<usize>> {
        let data = self.class_data()?;
        Ok(self.table()?.index_of(g).map(|i| data.class_of[i]))
    }

    /// Elements of the class with the given index.
    pub fn class_elements(&self, class: usize) -> Result<Vec<Permutation>> {
        let data = self.class_data()?;
        let elems = self.elements()?;
        Ok(data.classes[class].iter().map(|&i| elems[i].clone()).collect())
    }

    pub fn exponent(&self) -> Result<u64> {
        Ok(self
            .conjugacy_classes()?
            .iter()
            .fold(1, |acc, c| lcm(acc, c.representative.order())))
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, a)| self.generators[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// The subgroup generated by `gens` (elements of this group's point set).
    pub fn subgroup(&self, gens: Vec<Permutation>) -> Result<PermGroup> {
        PermGroup::new(self.degree, gens)
    }

    /// Builds a subgroup from a complete element list with a greedily small generating set:
    /// candidates are tried by decreasing element order, then lexicographically.
    pub fn subgroup_from_elements(&self, elems: &[Permutation]) -> Result<PermGroup> {
        let target = elems.len();
        let mut cands: Vec<&Permutation> = elems.iter().filter(|g| !g.is_identity()).collect();
        cands.sort_by(|a, b| b.order().cmp(&a.order()).then_with(|| a.cmp(b)));
        let mut gens = Vec::new();
        let mut current = PermGroup::trivial(self.degree)?;
        for c in cands {
            if current.order.to_usize() == Some(target) {
                break;
            }
            if !current.contains(c) {
                gens.push(c.clone());
                current = PermGroup::new(self.degree, gens.clone())?;
            }
        }
        if current.order.to_usize() != Some(target) {
            return Err(Error::Internal(format!(
                "element list of size {} is not a subgroup",
                target
            )));
        }
        Ok(current)
    }

    fn require_subgroup(&self, sub: &PermGroup) -> Result<()> {
        if sub.degree != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: sub.degree,
            });
        }
        if let Some(g) = sub.generators.iter().find(|g| !self.contains(g)) {
            return Err(Error::NotSubgroup(format!("generator {} is not in the group", g)));
        }
        Ok(())
    }

    fn require_member(&self, g: &Permutation) -> Result<()> {
        if !self.contains(g) {
            return Err(Error::NotMember(g.to_string()));
        }
        Ok(())
    }

    /// `N_G(P)`.
    pub fn normalizer(&self, sub: &PermGroup) -> Result<PermGroup> {
        self.require_subgroup(sub)?;
        let elems: Vec<Permutation> = self
            .elements()?
            .iter()
            .filter(|g| {
                sub.generators
                    .iter()
                    .all(|x| sub.contains(&x.conjugated_by(g)))
            })
            .cloned()
            .collect();
        self.subgroup_from_elements(&elems)
    }

    /// `C_G(s)`.
    pub fn centralizer_element(&self, s: &Permutation) -> Result<PermGroup> {
        self.require_member(s)?;
        let elems: Vec<Permutation> = self
            .elements()?
            .iter()
            .filter(|g| g.commutes_with(s))
            .cloned()
            .collect();
        self.subgroup_from_elements(&elems)
    }

    /// `C_G(H)`.
    pub fn centralizer(&self, sub: &PermGroup) -> Result<PermGroup> {
        self.require_subgroup(sub)?;
        let elems: Vec<Permutation> = self
            .elements()?
            .iter()
            .filter(|g| sub.generators.iter().all(|x| g.commutes_with(x)))
            .cloned()
            .collect();
        self.subgroup_from_elements(&elems)
    }

    /// Center `Z(G)`.
    pub fn center(&self) -> Result<PermGroup> {
        self.centralizer(self)
    }

    pub fn is_normal(&self, sub: &PermGroup) -> Result<bool> {
        self.require_subgroup(sub)?;
        Ok(self.normal_witness(sub).is_none())
    }

    fn normal_witness(&self, sub: &PermGroup) -> Option<Permutation> {
        self.generators
            .iter()
            .find(|g| {
                sub.generators
                    .iter()
                    .any(|x| !sub.contains(&x.conjugated_by(g)))
            })
            .cloned()
    }

    /// `G/N` realized on the right cosets of `N`, with the projection `G -> G/N`.
    pub fn quotient_group(&self, normal: &PermGroup) -> Result<(PermGroup, GroupHom)> {
        self.require_subgroup(normal)?;
        if let Some(g) = self.normal_witness(normal) {
            return Err(Error::NotNormal(g.to_string()));
        }
        let table = self.table()?.clone();
        let n_elems = normal.elements()?.to_vec();
        let mut coset_of = vec![usize::MAX; table.len()];
        let mut reps: Vec<usize> = Vec::new();
        for x in 0..table.len() {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for n in &n_elems {
                let y = n.then(&table.elems[x]);
                coset_of[table.index_of(&y).expect("closed")] = c;
            }
        }
        let index = reps.len();
        let act = |g: &Permutation| -> Permutation {
            let imgs = reps
                .iter()
                .map(|&r| {
                    let y = table.elems[r].then(g);
                    coset_of[table.index_of(&y).expect("closed")]
                })
                .collect();
            Permutation::from_images(imgs).expect("coset action is a permutation")
        };
        let qgens: Vec<Permutation> = self.generators.iter().map(&act).collect();
        let quotient = PermGroup::new(index, qgens.clone())?;
        let map: HashMap<Permutation, Permutation> =
            table.elems.iter().map(|g| (g.clone(), act(g))).collect();
        let proj = GroupHom::from_parts(self.clone(), quotient.clone(), qgens, map);
        Ok((quotient, proj))
    }

    /// External direct product acting on `degree(a) + degree(b)` points.
    pub fn direct_product(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
        let n = a.degree + b.degree;
        let mut gens = Vec::new();
        for g in &a.generators {
            let imgs: Vec<usize> = g.images().chain(a.degree..n).collect();
            gens.push(Permutation::from_images(imgs)?);
        }
        for g in &b.generators {
            let imgs: Vec<usize> = (0..a.degree).chain(g.images().map(|i| i + a.degree)).collect();
            gens.push(Permutation::from_images(imgs)?);
        }
        PermGroup::new(n, gens)
    }

    /// Order of a Sylow `p`-subgroup.
    pub fn sylow_order(&self, p: u64) -> Result<u64> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(p_split(self.size()? as u64, p).0)
    }

    /// Number of conjugacy classes of `p'`-elements.
    pub fn p_regular_class_count(&self, p: u64) -> Result<usize> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(self
            .conjugacy_classes()?
            .iter()
            .filter(|c| c.representative.is_p_regular(p))
            .count())
    }
}

fn strip(levels: &[Level], g: &Permutation, from: usize) -> (Permutation, usize) {
    let mut h = g.clone();
    for (j, lvl) in levels.iter().enumerate().skip(from) {
        let b = h.image(lvl.point);
        match &lvl.transversal[b] {
            None => return (h, j),
            Some(u) => h = h.then(&u.inverse()),
        }
    }
    (h, levels.len())
}

fn first_moved(g: &Permutation) -> usize {
    (0..g.degree())
        .find(|&i| g.image(i) != i)
        .expect("non-identity permutation moves a point")
}

/// Deterministic Schreier-Sims; new base points are the smallest moved point.
fn schreier_sims(degree: usize, gens: &[Permutation]) -> Vec<Level> {
    let strong: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
    let mut base: Vec<usize> = Vec::new();
    for s in &strong {
        if base.iter().all(|&b| s.image(b) == b) {
            base.push(first_moved(s));
        }
    }
    let mut levels: Vec<Level> = base
        .iter()
        .enumerate()
        .map(|(i, &pt)| {
            let lg = strong
                .iter()
                .filter(|s| base[..i].iter().all(|&b| s.image(b) == b))
                .cloned()
                .collect();
            Level::new(pt, lg, degree)
        })
        .collect();

    let mut i = levels.len() as isize - 1;
    'outer: while i >= 0 {
        let iu = i as usize;
        let orbit: Vec<usize> = levels[iu].orbit().collect();
        let level_gens = levels[iu].gens.clone();
        for &b in &orbit {
            let ub = levels[iu].transversal[b].clone().expect("orbit point");
            for s in &level_gens {
                let c = s.image(b);
                let uc = levels[iu].transversal[c].clone().expect("orbit point");
                let g = ub.then(s).then(&uc.inverse());
                if g.is_identity() {
                    continue;
                }
                let (h, j) = strip(&levels, &g, iu + 1);
                if j < levels.len() || !h.is_identity() {
                    if j == levels.len() {
                        levels.push(Level::new(first_moved(&h), Vec::new(), degree));
                    }
                    for lvl in levels.iter_mut().take(j + 1).skip(iu + 1) {
                        lvl.gens.push(h.clone());
                        lvl.rebuild(degree);
                    }
                    i = j as isize;
                    continue 'outer;
                }
            }
        }
        i -= 1;
    }
    levels
}
