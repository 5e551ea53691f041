//! Multiplicities of simple functors `S_{L,u,V}` by the pair formula and the triple
//! formula, the invariants `k` and `l`, and equivalence verdicts.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::ddelta::{
    classify_into_registry, enumerate_pair_orbits, n_image_in_out, realize_pair,
    Classification, Registry,
};
use crate::error::{Error, Result};
use crate::fusion::{p_regular_autf_classes, triple_orbits, FusionData};
use crate::group::PermGroup;
use crate::iso::are_isomorphic;
use crate::subgroups::{largest_normal_p_subgroup, p_subgroup_classes};

/// Shape of a registry class as it appears in a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSummary {
    pub l_order: usize,
    pub u_order: u64,
    pub out_order: usize,
    pub irr_degrees: Vec<u64>,
}

/// Multiplicities keyed by (registry class id, character index in `Out(L,u)`).
///
/// Every character of every listed class has a row; classes that do not occur are
/// absent and read as zero.
#[derive(Clone, Debug)]
pub struct MultiplicityTable {
    pub group_name: String,
    pub p: u64,
    pub k: usize,
    pub l: usize,
    pub defect_order: usize,
    pub registry_id: u64,
    pub classes: BTreeMap<usize, ClassSummary>,
    pub rows: BTreeMap<(usize, usize), u64>,
    /// `C_G(O_p(G)) ≤ O_p(G)`, which forces `kG` to be a single block.
    pub single_block: bool,
    sylow: PermGroup,
}

impl MultiplicityTable {
    pub fn get(&self, class_id: usize, irr: usize) -> u64 {
        self.rows.get(&(class_id, irr)).copied().unwrap_or(0)
    }

    pub fn sylow(&self) -> &PermGroup {
        &self.sylow
    }

    /// Rows with `L != 1`.
    pub fn nontrivial_rows(&self) -> BTreeMap<(usize, usize), u64> {
        self.rows
            .iter()
            .filter(|((c, _), _)| self.classes[c].l_order > 1)
            .map(|(&k, &v)| (k, v))
            .collect()
    }

    /// Multiplicity of `S_{1,1,F}`.
    pub fn trivial_row(&self) -> u64 {
        self.classes
            .iter()
            .find(|(_, c)| c.l_order == 1)
            .map_or(0, |(&id, _)| self.get(id, 0))
    }
}

/// `(k, l, k - l)`: conjugacy classes and `p`-regular classes of `g`.
pub fn invariants_kl(g: &PermGroup, p: u64) -> Result<(usize, usize, usize)> {
    let k = g.conjugacy_classes()?.len();
    let l = g.p_regular_class_count(p)?;
    Ok((k, l, k - l))
}

/// Whether `l(G × H) = l(G) l(H)`.
pub fn l_multiplicativity_check(g: &PermGroup, h: &PermGroup, p: u64) -> Result<bool> {
    let gh = PermGroup::direct_product(g, h)?;
    Ok(gh.p_regular_class_count(p)? == g.p_regular_class_count(p)? * h.p_regular_class_count(p)?)
}

/// Sufficient criterion for `kG` to be a single block: `C_G(O_p(G)) ≤ O_p(G)`.
pub fn is_single_block(g: &PermGroup, p: u64) -> Result<bool> {
    let o = largest_normal_p_subgroup(g, p)?;
    Ok(g.centralizer(&o)?.is_subgroup_of(&o))
}

fn empty_table(name: &str, g: &PermGroup, p: u64, registry: &Registry) -> Result<MultiplicityTable> {
    let (k, l, _) = invariants_kl(g, p)?;
    let sylow = p_subgroup_classes(g, p)?.pop().expect("trivial subgroup is present");
    Ok(MultiplicityTable {
        group_name: name.to_string(),
        p,
        k,
        l,
        defect_order: sylow.size()?,
        registry_id: registry.id(),
        classes: BTreeMap::new(),
        rows: BTreeMap::new(),
        single_block: is_single_block(g, p)?,
        sylow,
    })
}

fn summary(registry: &Registry, id: usize) -> ClassSummary {
    let c = registry.class(id);
    ClassSummary {
        l_order: c.l_order(),
        u_order: c.u_order(),
        out_order: c.out_order(),
        irr_degrees: c.out_table.degrees().to_vec(),
    }
}

/// Pair formula: `m(L,u,V) = Σ_{(P,s)} dim V^{N_G(P,s)}` over the pair orbits of the class.
pub fn mult_table_pairs(
    name: &str,
    g: &Arc<PermGroup>,
    p: u64,
    registry: &mut Registry,
) -> Result<MultiplicityTable> {
    let cl = classify_into_registry(enumerate_pair_orbits(g, p)?, registry)?;
    mult_table_from_classification(name, &cl, registry)
}

/// Pair formula over an existing classification.
pub fn mult_table_from_classification(
    name: &str,
    cl: &Classification,
    registry: &Registry,
) -> Result<MultiplicityTable> {
    if cl.registry_id != registry.id() {
        return Err(Error::RegistryMismatch);
    }
    let mut t = empty_table(name, &cl.group, cl.p, registry)?;
    for m in &cl.members {
        let cls = registry.class(m.class_id);
        let image = n_image_in_out(cls, m)?;
        t.classes.entry(m.class_id).or_insert_with(|| summary(registry, m.class_id));
        for chi in 0..cls.out_table.len() {
            *t.rows.entry((m.class_id, chi)).or_insert(0) +=
                cls.out_table.fixed_point_dim(chi, &image)?;
        }
    }
    Ok(t)
}

/// Triple formula: `m(L,u,V) = Σ dim V^{Out(L,u)_(P,e,π)}` over triple orbits, `L != 1`.
///
/// Candidate classes come from the fusion system alone: each `p'`-element `α` of
/// `Aut_F(P)` gives the pair `P ⋊ <α>`.
pub fn mult_table_fusion(
    name: &str,
    f: &FusionData,
    registry: &mut Registry,
) -> Result<MultiplicityTable> {
    let mut t = empty_table(name, &f.group, f.p, registry)?;
    let mut ids = BTreeSet::new();
    for obj in f.objects.iter().filter(|o| !o.subgroup.is_trivial()) {
        let elems = obj.subgroup.elements()?;
        for alpha in p_regular_autf_classes(obj, f.p)? {
            let realized = realize_pair(&obj.subgroup, |y| {
                let i = obj
                    .subgroup
                    .element_index(y)
                    .ok()
                    .flatten()
                    .expect("element of P");
                elems[alpha[i] as usize].clone()
            })?;
            ids.insert(registry.find_or_insert(&realized.pair)?.0);
        }
    }
    for id in ids {
        let cls = registry.class(id);
        let orbits = triple_orbits(f, cls)?;
        if orbits.is_empty() {
            continue;
        }
        t.classes.insert(id, summary(registry, id));
        for chi in 0..cls.out_table.len() {
            let mut total = 0;
            for o in &orbits {
                total += cls.out_table.fixed_point_dim(chi, &o.stabilizer)?;
            }
            t.rows.insert((id, chi), total);
        }
    }
    Ok(t)
}

/// A row on which two tables disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffRow {
    pub class_id: usize,
    pub irr: usize,
    pub left: u64,
    pub right: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceVerdict {
    pub stable: bool,
    pub functorial: bool,
    pub defect_isomorphic: bool,
    pub diff: Vec<DiffRow>,
}

/// Compares two tables built against the same registry.
///
/// Stable equivalence is equality on all rows with `L != 1`; functorial equivalence adds
/// `l` equality. A stable verdict with differing `k - l`, or with non-isomorphic Sylow
/// subgroups for single-block inputs, is reported as a theorem violation.
pub fn compare(a: &MultiplicityTable, b: &MultiplicityTable) -> Result<EquivalenceVerdict> {
    if a.registry_id != b.registry_id {
        return Err(Error::RegistryMismatch);
    }
    if a.p != b.p {
        return Err(Error::Hypothesis(format!(
            "tables are for different primes {} and {}",
            a.p, b.p
        )));
    }
    let (ra, rb) = (a.nontrivial_rows(), b.nontrivial_rows());
    let keys: BTreeSet<(usize, usize)> = ra.keys().chain(rb.keys()).copied().collect();
    let diff: Vec<DiffRow> = keys
        .into_iter()
        .filter_map(|(c, i)| {
            let (x, y) = (a.get(c, i), b.get(c, i));
            (x != y).then_some(DiffRow {
                class_id: c,
                irr: i,
                left: x,
                right: y,
            })
        })
        .collect();
    let stable = diff.is_empty();
    let defect_isomorphic = are_isomorphic(&a.sylow, &b.sylow)?;
    if stable {
        if a.k - a.l != b.k - b.l {
            return Err(Error::TheoremViolation(format!(
                "stable verdict with k - l = {} for {} but {} for {}",
                a.k - a.l,
                a.group_name,
                b.k - b.l,
                b.group_name
            )));
        }
        if a.single_block && b.single_block && !defect_isomorphic {
            return Err(Error::TheoremViolation(format!(
                "stable verdict between {} and {} with non-isomorphic defect groups",
                a.group_name, b.group_name
            )));
        }
    }
    Ok(EquivalenceVerdict {
        stable,
        functorial: stable && a.l == b.l,
        defect_isomorphic,
        diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::fusion_from_group;
    use crate::perm::Permutation;

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
    fn kl_values() {
        assert_eq!(invariants_kl(&grp(3, &["(1,2,3)", "(1,2)"]), 3).unwrap(), (3, 2, 1));
        assert_eq!(invariants_kl(&grp(4, &["(1,2)(3,4)", "(1,2,3)"]), 2).unwrap(), (4, 3, 1));
        assert_eq!(invariants_kl(&grp(3, &["(1,2,3)"]), 2).unwrap(), (3, 3, 0));
    }

    #[test]
    fn l_multiplicativity() {
        let s3 = grp(3, &["(1,2,3)", "(1,2)"]);
        let a4 = grp(4, &["(1,2)(3,4)", "(1,2,3)"]);
        let c3 = grp(3, &["(1,2,3)"]);
        assert!(l_multiplicativity_check(&s3, &s3, 3).unwrap());
        assert!(l_multiplicativity_check(&a4, &c3, 2).unwrap());
    }

    #[test]
    fn c3_table() {
        let mut reg = Registry::new();
        let t = mult_table_pairs("C3", &grp(3, &["(1,2,3)"]), 3, &mut reg).unwrap();
        assert_eq!(t.rows.values().copied().collect::<Vec<_>>(), vec![1, 1, 1]);
        assert_eq!(t.trivial_row(), t.l as u64);
        assert!(t.single_block);
    }

    #[test]
    fn fusion_matches_pairs_on_s3_and_a4() {
        for (g, p) in [
            (grp(3, &["(1,2,3)", "(1,2)"]), 3),
            (grp(4, &["(1,2)(3,4)", "(1,2,3)"]), 2),
        ] {
            let mut reg = Registry::new();
            let tp = mult_table_pairs("G", &g, p, &mut reg).unwrap();
            let f = fusion_from_group(g, p).unwrap();
            let tf = mult_table_fusion("G", &f, &mut reg).unwrap();
            assert_eq!(tp.nontrivial_rows(), tf.rows);
        }
    }

    #[test]
    fn compare_s3_c3() {
        let mut reg = Registry::new();
        let a = mult_table_pairs("S3", &grp(3, &["(1,2,3)", "(1,2)"]), 3, &mut reg).unwrap();
        let b = mult_table_pairs("C3", &grp(3, &["(1,2,3)"]), 3, &mut reg).unwrap();
        let v = compare(&a, &b).unwrap();
        assert!(!v.stable && !v.functorial && v.defect_isomorphic);
        assert!(!v.diff.is_empty());
        let v = compare(&a, &a).unwrap();
        assert!(v.stable && v.functorial);
        let other = Registry::new();
        let c = mult_table_from_classification(
            "S3",
            &classify_into_registry(enumerate_pair_orbits(&grp(3, &["(1,2,3)", "(1,2)"]), 3).unwrap(), &mut Registry::new()).unwrap(),
            &other,
        );
        assert_eq!(c.unwrap_err(), Error::RegistryMismatch);
    }
}
