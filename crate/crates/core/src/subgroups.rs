//! Conjugacy classes of `p`-subgroups by layered normalizer extension.

use std::collections::{BTreeMap, HashSet};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// Sorted element indices of a subgroup inside its parent's element table.
pub(crate) fn index_set(parent: &PermGroup, sub: &PermGroup) -> Result<Vec<usize>> {
    let mut idx = sub
        .elements()?
        .iter()
        .map(|x| {
            parent
                .element_index(x)?
                .ok_or_else(|| Error::NotSubgroup(format!("{} is not in the parent", x)))
        })
        .collect::<Result<Vec<_>>>()?;
    idx.sort_unstable();
    Ok(idx)
}

/// Smallest element-index list among the `G`-conjugates of a subgroup.
pub(crate) fn conjugacy_key(parent: &PermGroup, members: &[usize]) -> Result<Vec<usize>> {
    let elems = parent.elements()?;
    let mut best: Option<Vec<usize>> = None;
    for g in elems {
        let gi = g.inverse();
        let mut conj: Vec<usize> = members
            .iter()
            .map(|&m| {
                let y = g.then(&elems[m]).then(&gi);
                parent.element_index(&y).map(|o| o.expect("closed under conjugation"))
            })
            .collect::<Result<Vec<_>>>()?;
        conj.sort_unstable();
        if best.as_ref().map_or(true, |b| conj < *b) {
            best = Some(conj);
        }
    }
    Ok(best.expect("group is nonempty"))
}

/// One representative of each conjugacy class of `p`-subgroups of `g`, trivial subgroup
/// included. Classes are ordered by (order, smallest element list) and each
/// representative is the conjugate with the smallest element list.
pub fn p_subgroup_classes(g: &PermGroup, p: u64) -> Result<Vec<PermGroup>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let elems = g.elements()?.to_vec();
    let trivial = PermGroup::trivial(g.degree())?;
    let mut out = vec![trivial.clone()];
    let mut layer = vec![trivial];
    while !layer.is_empty() {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut next: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
        for sub in &layer {
            let norm = g.normalizer(sub)?;
            for x in norm.elements()? {
                if !x.is_p_element(p) || sub.contains(x) || !sub.contains(&x.pow(p as i64)) {
                    continue;
                }
                let mut gens = sub.generators().to_vec();
                gens.push(x.clone());
                let ext = g.subgroup(gens)?;
                let set = index_set(g, &ext)?;
                if !seen.insert(set.clone()) {
                    continue;
                }
                let key = conjugacy_key(g, &set)?;
                seen.insert(key.clone());
                next.entry(key).or_insert(());
            }
        }
        layer = next
            .into_keys()
            .map(|key| {
                let members: Vec<Permutation> = key.iter().map(|&i| elems[i].clone()).collect();
                g.subgroup_from_elements(&members)
            })
            .collect::<Result<Vec<_>>>()?;
        out.extend(layer.iter().cloned());
    }
    Ok(out)
}

/// The largest normal `p`-subgroup `O_p(G)`.
pub fn largest_normal_p_subgroup(g: &PermGroup, p: u64) -> Result<PermGroup> {
    let mut best = PermGroup::trivial(g.degree())?;
    for sub in p_subgroup_classes(g, p)? {
        if g.is_normal(&sub)? && sub.order() > best.order() {
            best = sub;
        }
    }
    Ok(best)
}
