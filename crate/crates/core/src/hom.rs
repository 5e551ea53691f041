//! Homomorphisms between permutation groups, stored as full element maps.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub struct GroupHom {
    source: PermGroup,
    target: PermGroup,
    generator_images: Vec<Permutation>,
    map: HashMap<Permutation, Permutation>,
}

/// Extends `gens[i] -> images[i]` along the Cayley graph of `<gens>`.
///
/// Returns `None` when two paths reach the same source element with different
/// images, i.e. when the assignment is not a homomorphism. The returned map covers
/// every element of `<gens>`.
pub fn extend_to_hom(
    gens: &[Permutation],
    images: &[Permutation],
    source_identity: Permutation,
    target_identity: Permutation,
) -> Option<HashMap<Permutation, Permutation>> {
    debug_assert_eq!(gens.len(), images.len());
    let mut map = HashMap::new();
    map.insert(source_identity.clone(), target_identity);
    let mut queue = VecDeque::from([source_identity]);
    while let Some(x) = queue.pop_front() {
        let fx = map[&x].clone();
        for (g, h) in gens.iter().zip(images) {
            let y = x.then(g);
            let fy = fx.then(h);
            match map.get(&y) {
                Some(prev) if *prev != fy => return None,
                Some(_) => {}
                None => {
                    map.insert(y.clone(), fy);
                    queue.push_back(y);
                }
            }
        }
    }
    Some(map)
}

impl GroupHom {
    /// The homomorphism sending `source.generators()[i]` to `images[i]`, verified
    /// on the whole source group.
    pub fn from_generator_images(
        source: PermGroup,
        target: PermGroup,
        images: Vec<Permutation>,
    ) -> Result<Self> {
        if images.len() != source.generators().len() {
            return Err(Error::Hypothesis(format!(
                "{} generator images for {} generators",
                images.len(),
                source.generators().len()
            )));
        }
        if let Some(h) = images.iter().find(|h| !target.contains(h)) {
            return Err(Error::NotMember(h.to_string()));
        }
        source.size()?;
        let map = extend_to_hom(
            source.generators(),
            &images,
            source.identity(),
            target.identity(),
        )
        .ok_or_else(|| {
            Error::Hypothesis("generator images do not define a homomorphism".into())
        })?;
        Ok(GroupHom {
            source,
            target,
            generator_images: images,
            map,
        })
    }

    pub(crate) fn from_parts(
        source: PermGroup,
        target: PermGroup,
        generator_images: Vec<Permutation>,
        map: HashMap<Permutation, Permutation>,
    ) -> Self {
        GroupHom {
            source,
            target,
            generator_images,
            map,
        }
    }

    pub fn source(&self) -> &PermGroup {
        &self.source
    }

    pub fn target(&self) -> &PermGroup {
        &self.target
    }

    /// Pairs `(generator, image)`.
    pub fn generator_images(&self) -> impl Iterator<Item = (&Permutation, &Permutation)> {
        self.source.generators().iter().zip(&self.generator_images)
    }

    pub fn apply(&self, x: &Permutation) -> Option<&Permutation> {
        self.map.get(x)
    }

    pub fn is_injective(&self) -> bool {
        let mut imgs: Vec<&Permutation> = self.map.values().collect();
        imgs.sort();
        imgs.dedup();
        imgs.len() == self.map.len()
    }

    /// Image of a subgroup of the source, as a subgroup of the target.
    pub fn image_of(&self, sub: &PermGroup) -> Result<PermGroup> {
        let gens = sub
            .generators()
            .iter()
            .map(|g| {
                self.apply(g)
                    .cloned()
                    .ok_or_else(|| Error::NotMember(g.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        self.target.subgroup(gens)
    }

    /// The inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Result<GroupHom> {
        if !self.is_injective() || self.map.len() != self.target.size()? {
            return Err(Error::Hypothesis("homomorphism is not bijective".into()));
        }
        let map: HashMap<Permutation, Permutation> = self
            .map
            .iter()
            .map(|(a, b)| (b.clone(), a.clone()))
            .collect();
        let imgs = self
            .target
            .generators()
            .iter()
            .map(|g| map[g].clone())
            .collect();
        Ok(GroupHom::from_parts(
            self.target.clone(),
            self.source.clone(),
            imgs,
            map,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_map_is_a_homomorphism() {
        let s3 = PermGroup::new(
            3,
            vec![
                Permutation::parse(3, "(1,2,3)").unwrap(),
                Permutation::parse(3, "(1,2)").unwrap(),
            ],
        )
        .unwrap();
        let c2 = PermGroup::new(2, vec![Permutation::parse(2, "(1,2)").unwrap()]).unwrap();
        let imgs = vec![
            Permutation::identity(2),
            Permutation::parse(2, "(1,2)").unwrap(),
        ];
        let sign = GroupHom::from_generator_images(s3.clone(), c2.clone(), imgs).unwrap();
        assert!(!sign.is_injective());
        assert_eq!(sign.image_of(&s3).unwrap(), c2);
        // (1,2,3) -> (1,2) is not a homomorphism
        let bad = vec![
            Permutation::parse(2, "(1,2)").unwrap(),
            Permutation::identity(2),
        ];
        assert!(GroupHom::from_generator_images(s3, c2, bad).is_err());
    }
}
