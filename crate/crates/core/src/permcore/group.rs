use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};

use super::{PermError, Permutation};

/// A finite permutation group with every element listed.
///
/// Elements are stored in breadth-first order from the identity, extending
/// by the generators in their given order; every "first element" choice in
/// this crate resolves against that order.
#[derive(Clone)]
pub struct EnumeratedGroup {
    elements: Vec<Permutation>,
    generators: Vec<Permutation>,
    index: FxHashMap<Permutation, u32>,
}

/// A subgroup given by generators together with its cached element set.
///
/// A handle produced by a capped closure that overflowed carries no
/// elements and stands for the whole ambient group.
#[derive(Clone, Debug)]
pub struct SubgroupHandle {
    generators: Vec<Permutation>,
    elements: Option<Vec<Permutation>>,
    members: FxHashSet<Permutation>,
    order: u64,
}

impl SubgroupHandle {
    fn enumerated(generators: Vec<Permutation>, elements: Vec<Permutation>) -> Self {
        let members = elements.iter().copied().collect();
        let order = elements.len() as u64;
        Self {
            generators,
            elements: Some(elements),
            members,
            order,
        }
    }

    fn whole_group(generators: Vec<Permutation>, order: u64) -> Self {
        Self {
            generators,
            elements: None,
            members: FxHashSet::default(),
            order,
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// `None` for the whole-group sentinel.
    pub fn elements(&self) -> Option<&[Permutation]> {
        self.elements.as_deref()
    }

    /// True when this handle is the overflow sentinel for the ambient group.
    pub fn is_whole_group_sentinel(&self) -> bool {
        self.elements.is_none()
    }

    /// Membership test. The sentinel contains every element of its ambient
    /// group, so callers must only ask about ambient elements.
    pub fn contains(&self, p: &Permutation) -> bool {
        match self.elements {
            Some(_) => self.members.contains(p),
            None => true,
        }
    }

    pub fn involutions(&self) -> Vec<Permutation> {
        self.elements()
            .unwrap_or(&[])
            .iter()
            .filter(|p| !p.is_identity() && p.then(p).is_identity())
            .copied()
            .collect()
    }
}

/// Breadth-first closure. Returns `Err(())` as soon as more than `cap`
/// elements have been found.
fn close(generators: &[Permutation], cap: Option<usize>) -> Result<Vec<Permutation>, ()> {
    let id = Permutation::identity();
    let mut seen: FxHashSet<Permutation> = FxHashSet::default();
    let mut elements = vec![id];
    seen.insert(id);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = x.then(g);
            if seen.insert(y) {
                if let Some(c) = cap {
                    if seen.len() > c {
                        return Err(());
                    }
                }
                elements.push(y);
                queue.push_back(y);
            }
        }
    }
    Ok(elements)
}

/// Picks a generating subset of `elements` greedily, in order.
fn generating_subset(elements: &[Permutation]) -> Vec<Permutation> {
    let mut gens = Vec::new();
    let mut span: FxHashSet<Permutation> = FxHashSet::default();
    span.insert(Permutation::identity());
    for e in elements {
        if span.contains(e) {
            continue;
        }
        gens.push(*e);
        span = close(&gens, None)
            .expect("uncapped closure")
            .into_iter()
            .collect();
        if span.len() == elements.len() {
            break;
        }
    }
    gens
}

/// Enumerates the group generated by `generators`, failing if it has more
/// than `cap` elements.
pub fn enumerate_group(
    generators: &[Permutation],
    cap: usize,
) -> Result<EnumeratedGroup, PermError> {
    let elements = close(generators, Some(cap)).map_err(|_| PermError::CapExceeded(cap))?;
    Ok(EnumeratedGroup::from_trusted(elements, generators.to_vec()))
}

impl EnumeratedGroup {
    fn from_trusted(elements: Vec<Permutation>, generators: Vec<Permutation>) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (*p, i as u32))
            .collect();
        Self {
            elements,
            generators,
            index,
        }
    }

    /// Rebuilds a group from a stored element list, checking that the list
    /// starts at the identity, has no repeats, contains the generators and is
    /// closed under right multiplication by them.
    pub fn from_parts(
        elements: Vec<Permutation>,
        generators: Vec<Permutation>,
    ) -> Result<Self, PermError> {
        if elements.first().is_none_or(|p| !p.is_identity()) {
            return Err(PermError::InconsistentElements(
                "element list must start with the identity".into(),
            ));
        }
        let group = Self::from_trusted(elements, generators);
        if group.index.len() != group.elements.len() {
            return Err(PermError::InconsistentElements("repeated element".into()));
        }
        for g in &group.generators {
            if !group.contains(g) {
                return Err(PermError::InconsistentElements(
                    "generator is not a listed element".into(),
                ));
            }
        }
        for x in &group.elements {
            for g in &group.generators {
                if !group.contains(&x.then(g)) {
                    return Err(PermError::InconsistentElements(
                        "element list is not closed".into(),
                    ));
                }
            }
        }
        Ok(group)
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn element(&self, position: usize) -> &Permutation {
        &self.elements[position]
    }

    pub fn position(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).map(|&i| i as usize)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    fn require(&self, p: &Permutation) -> Result<(), PermError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(PermError::NotMember)
        }
    }

    /// The group viewed as a subgroup of itself.
    pub fn as_handle(&self) -> SubgroupHandle {
        SubgroupHandle::enumerated(self.generators.clone(), self.elements.clone())
    }

    /// Elements of the given order, in enumeration order.
    pub fn elements_of_order(&self, order: u64) -> Vec<Permutation> {
        self.elements
            .iter()
            .filter(|p| p.order() == order)
            .copied()
            .collect()
    }

    /// `{g^h : h ∈ G}` listed in order of first appearance.
    pub fn conjugacy_class(&self, g: &Permutation) -> Result<Vec<Permutation>, PermError> {
        self.require(g)?;
        let mut seen = FxHashSet::default();
        let mut class = Vec::new();
        for h in &self.elements {
            let c = g.conjugate_by(h);
            if seen.insert(c) {
                class.push(c);
            }
        }
        Ok(class)
    }

    pub fn centralizer(&self, g: &Permutation) -> Result<SubgroupHandle, PermError> {
        self.require(g)?;
        if g.is_identity() {
            return Ok(self.as_handle());
        }
        let elements: Vec<Permutation> = self
            .elements
            .iter()
            .filter(|h| h.commutes_with(g))
            .copied()
            .collect();
        Ok(SubgroupHandle::enumerated(
            generating_subset(&elements),
            elements,
        ))
    }

    pub fn normalizer(&self, h: &SubgroupHandle) -> Result<SubgroupHandle, PermError> {
        for gen in h.generators() {
            self.require(gen)?;
        }
        if h.is_whole_group_sentinel() || h.order() == self.order() {
            return Ok(self.as_handle());
        }
        let elements: Vec<Permutation> = self
            .elements
            .iter()
            .filter(|g| h.generators().iter().all(|x| h.contains(&x.conjugate_by(g))))
            .copied()
            .collect();
        Ok(SubgroupHandle::enumerated(
            generating_subset(&elements),
            elements,
        ))
    }

    /// Closure of `generators` inside this group. If more than `cap` elements
    /// appear the whole-group sentinel is returned instead; for U3(5) with
    /// `cap = 2520` this is exact, since no proper subgroup is larger than A7.
    pub fn subgroup_closure(
        &self,
        generators: &[Permutation],
        cap: usize,
    ) -> Result<SubgroupHandle, PermError> {
        for g in generators {
            self.require(g)?;
        }
        match close(generators, Some(cap)) {
            Ok(elements) => Ok(SubgroupHandle::enumerated(generators.to_vec(), elements)),
            Err(()) => Ok(SubgroupHandle::whole_group(
                generators.to_vec(),
                self.order(),
            )),
        }
    }

    /// Closure without the overflow shortcut.
    pub fn subgroup_closure_exact(
        &self,
        generators: &[Permutation],
    ) -> Result<SubgroupHandle, PermError> {
        for g in generators {
            self.require(g)?;
        }
        let elements = close(generators, Some(self.elements.len())).map_err(|_| {
            PermError::InconsistentElements("closure larger than the ambient group".into())
        })?;
        Ok(SubgroupHandle::enumerated(generators.to_vec(), elements))
    }

    /// First `g` in enumeration order with `h^g = base`.
    pub fn canonical_conjugator(
        &self,
        h: &Permutation,
        base: &Permutation,
    ) -> Result<Permutation, PermError> {
        self.require(h)?;
        self.require(base)?;
        self.elements
            .iter()
            .find(|g| h.conjugate_by(g) == *base)
            .copied()
            .ok_or(PermError::NotConjugate)
    }

    /// First `g` in enumeration order with `H^g = base` as subgroups.
    pub fn canonical_subgroup_conjugator(
        &self,
        h: &SubgroupHandle,
        base: &SubgroupHandle,
    ) -> Result<Permutation, PermError> {
        for x in h.generators().iter().chain(base.generators()) {
            self.require(x)?;
        }
        if h.order() != base.order() {
            return Err(PermError::NotConjugate);
        }
        self.elements
            .iter()
            .find(|g| h.generators().iter().all(|x| base.contains(&x.conjugate_by(g))))
            .copied()
            .ok_or(PermError::NotConjugate)
    }

    /// For every conjugate `h` of `base`, the first `g` (by position) with
    /// `h^g = base`. One pass over the group answers all canonical conjugator
    /// queries against a fixed base.
    pub fn conjugators_to(&self, base: &Permutation) -> FxHashMap<Permutation, u32> {
        let mut table = FxHashMap::default();
        for (pos, g) in self.elements.iter().enumerate() {
            // h^g = base  <=>  h = base^(g⁻¹)
            let h = base.conjugate_by(&g.inverse());
            table.entry(h).or_insert(pos as u32);
        }
        table
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s4() -> EnumeratedGroup {
        let a = Permutation::from_cycles(&[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(&[&[0, 1, 2, 3]]).unwrap();
        enumerate_group(&[a, b], 100).unwrap()
    }

    #[test]
    fn trivial_group_from_no_generators() {
        let g = enumerate_group(&[], 1).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.element(0).is_identity());
    }

    #[test]
    fn cap_exceeded_is_reported() {
        let a = Permutation::from_cycles(&[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(&[&[0, 1, 2, 3]]).unwrap();
        assert_eq!(
            enumerate_group(&[a, b], 23).err(),
            Some(PermError::CapExceeded(23))
        );
    }

    #[test]
    fn s4_classes_and_centralizers() {
        let g = s4();
        assert_eq!(g.order(), 24);
        let t = Permutation::from_cycles(&[&[0, 1]]).unwrap();
        let class = g.conjugacy_class(&t).unwrap();
        assert_eq!(class.len(), 6);
        assert_eq!(g.centralizer(&t).unwrap().order(), 4);
        let id = Permutation::identity();
        assert_eq!(g.conjugacy_class(&id).unwrap().len(), 1);
        assert_eq!(g.centralizer(&id).unwrap().order(), 24);
        for x in g.elements() {
            let c = g.conjugacy_class(x).unwrap().len() as u64;
            assert_eq!(c * g.centralizer(x).unwrap().order(), g.order());
        }
    }

    #[test]
    fn s4_normalizer_of_three_cycle() {
        let g = s4();
        let r = Permutation::from_cycles(&[&[0, 1, 2]]).unwrap();
        let h = g.subgroup_closure(&[r], 24).unwrap();
        assert_eq!(h.order(), 3);
        assert_eq!(g.normalizer(&h).unwrap().order(), 6);
        assert_eq!(g.normalizer(&g.as_handle()).unwrap().order(), 24);
    }

    #[test]
    fn closure_sentinel_and_exact_agree_on_order() {
        let g = s4();
        let a = Permutation::from_cycles(&[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(&[&[0, 1, 2, 3]]).unwrap();
        let capped = g.subgroup_closure(&[a, b], 12).unwrap();
        assert!(capped.is_whole_group_sentinel());
        assert_eq!(capped.order(), 24);
        let exact = g.subgroup_closure_exact(&[a, b]).unwrap();
        assert!(!exact.is_whole_group_sentinel());
        assert_eq!(exact.order(), 24);
        let single = g.subgroup_closure(&[a], 12).unwrap();
        assert_eq!(single.order(), 2);
    }

    #[test]
    fn canonical_conjugators() {
        let g = s4();
        let t1 = Permutation::from_cycles(&[&[0, 1]]).unwrap();
        let t2 = Permutation::from_cycles(&[&[2, 3]]).unwrap();
        assert!(g.canonical_conjugator(&t1, &t1).unwrap().is_identity());
        let c = g.canonical_conjugator(&t1, &t2).unwrap();
        assert_eq!(t1.conjugate_by(&c), t2);
        let dbl = Permutation::from_cycles(&[&[0, 1], &[2, 3]]).unwrap();
        assert_eq!(
            g.canonical_conjugator(&t1, &dbl),
            Err(PermError::NotConjugate)
        );
        let table = g.conjugators_to(&t2);
        assert_eq!(table.len(), 6);
        let pos = table[&t1] as usize;
        assert_eq!(g.element(pos), &c);
    }

    #[test]
    fn subgroup_conjugator_maps_onto_base() {
        let g = s4();
        let r1 = g
            .subgroup_closure(&[Permutation::from_cycles(&[&[0, 1, 2]]).unwrap()], 24)
            .unwrap();
        let r2 = g
            .subgroup_closure(&[Permutation::from_cycles(&[&[1, 3, 2]]).unwrap()], 24)
            .unwrap();
        let c = g.canonical_subgroup_conjugator(&r1, &r2).unwrap();
        assert!(r2.contains(&r1.generators()[0].conjugate_by(&c)));
    }

    #[test]
    fn from_parts_rejects_unclosed_list() {
        let g = s4();
        let mut elements = g.elements().to_vec();
        elements.pop();
        assert!(EnumeratedGroup::from_parts(elements, g.generators().to_vec()).is_err());
        let rebuilt =
            EnumeratedGroup::from_parts(g.elements().to_vec(), g.generators().to_vec()).unwrap();
        assert_eq!(rebuilt.order(), 24);
    }

    #[test]
    fn enumeration_is_idempotent() {
        let g = s4();
        let again = enumerate_group(g.elements(), 100).unwrap();
        let a: FxHashSet<_> = g.elements().iter().collect();
        let b: FxHashSet<_> = again.elements().iter().collect();
        assert_eq!(a, b);
    }
}
