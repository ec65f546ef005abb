use std::cmp::Ordering;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

use super::{Elem, FiniteGroup};
use crate::error::{Error, Result};

/// Largest group whose full subgroup lattice we are willing to enumerate.
pub const DEFAULT_SUBGROUP_BOUND: usize = 64;

/// A subgroup, stored as the sorted element indices of its parent group.
///
/// The parent is not stored; operations take it explicitly. Equality, order
/// and hashing look only at the element list, so the `Ord` instance is the
/// lexicographic order on sorted element lists used for canonical forms.
#[derive(Clone, Debug)]
pub struct Subgroup {
    elements: Vec<Elem>,
    members: FixedBitSet,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elements.cmp(&other.elements)
    }
}

impl Subgroup {
    /// Wraps a set already known to be a subgroup of a group of order
    /// `parent_order`.
    pub fn from_members(members: FixedBitSet) -> Self {
        let elements = members.ones().collect();
        Self { elements, members }
    }

    pub(crate) fn from_sorted(mut elements: Vec<Elem>, parent_order: usize) -> Self {
        elements.sort_unstable();
        elements.dedup();
        let mut members = FixedBitSet::with_capacity(parent_order);
        for &e in &elements {
            members.insert(e);
        }
        Self { elements, members }
    }

    /// Validates that `elements` form a subgroup of `group`.
    pub fn from_elements(group: &FiniteGroup, elements: &[Elem]) -> Result<Self> {
        if elements.iter().any(|&e| e >= group.order()) {
            return Err(Error::NotSubgroup("element out of range".into()));
        }
        let sub = Self::from_sorted(elements.to_vec(), group.order());
        if !sub.contains(group.identity()) {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        for &a in &sub.elements {
            if !sub.contains(group.inv(a)) {
                return Err(Error::NotSubgroup("not closed under inverses".into()));
            }
            for &b in &sub.elements {
                if !sub.contains(group.mul(a, b)) {
                    return Err(Error::NotSubgroup("not closed under products".into()));
                }
            }
        }
        Ok(sub)
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        Self::from_sorted(vec![group.identity()], group.order())
    }

    pub fn whole(group: &FiniteGroup) -> Self {
        Self::from_sorted(group.elements().collect(), group.order())
    }

    /// The subgroup generated by `gens`.
    pub fn generated(group: &FiniteGroup, gens: &[Elem]) -> Self {
        Self::trivial(group).closure(group, gens)
    }

    /// `⟨self, extra⟩`.
    pub fn extended(&self, group: &FiniteGroup, extra: &[Elem]) -> Self {
        let mut gens = self.generators(group);
        gens.extend_from_slice(extra);
        self.closure(group, &gens)
    }

    /// Right-multiplication closure of `self` under `gens`. When `gens`
    /// contains a generating set of `self`, this is `⟨self, gens⟩`.
    pub(crate) fn closure(&self, group: &FiniteGroup, gens: &[Elem]) -> Self {
        let mut members = self.members.clone();
        let mut list = self.elements.clone();
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &s in gens {
                let y = group.mul(x, s);
                if !members.contains(y) {
                    members.insert(y);
                    list.push(y);
                }
            }
            i += 1;
        }
        Self::from_members(members)
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        self.members.contains(x)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self::from_members(&self.members & &other.members)
    }

    /// Index of `x` within the sorted element list.
    pub fn position(&self, x: Elem) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    /// Greedy generating set: scan elements in index order and keep each one
    /// not already in the span of those kept.
    pub fn generators(&self, group: &FiniteGroup) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut span = Self::trivial(group);
        for &e in &self.elements {
            if !span.contains(e) {
                gens.push(e);
                span = span.closure(group, &gens);
            }
        }
        gens
    }
}

impl FiniteGroup {
    /// `g H g⁻¹`.
    pub fn conjugate_subgroup(&self, g: Elem, h: &Subgroup) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(self.order());
        for &x in h.elements() {
            members.insert(self.conj(g, x));
        }
        Subgroup::from_members(members)
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.elements().all(|g| h.elements().iter().all(|&x| h.contains(self.conj(g, x))))
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let elems = self.elements().filter(|&g| h.elements().iter().all(|&x| h.contains(self.conj(g, x)))).collect();
        Subgroup::from_sorted(elems, self.order())
    }

    pub fn center(&self) -> Subgroup {
        let elems = self.elements().filter(|&z| self.elements().all(|g| self.mul(z, g) == self.mul(g, z))).collect();
        Subgroup::from_sorted(elems, self.order())
    }

    /// All subgroups, each once, sorted by order and then by element list.
    pub fn subgroups(&self) -> Result<Vec<Subgroup>> {
        self.subgroups_bounded(DEFAULT_SUBGROUP_BOUND)
    }

    pub fn subgroups_bounded(&self, bound: usize) -> Result<Vec<Subgroup>> {
        if self.order() > bound {
            return Err(Error::BoundExceeded { order: self.order(), bound });
        }
        let trivial = Subgroup::trivial(self);
        let mut seen: HashSet<Subgroup> = HashSet::new();
        seen.insert(trivial.clone());
        let mut frontier = vec![(trivial, Vec::new())];
        let mut all = Vec::new();
        while let Some((h, gens)) = frontier.pop() {
            // ⟨H, g⟩ only depends on the coset gH.
            let mut done = h.members().clone();
            let mut next_gens = gens.clone();
            next_gens.push(0);
            for g in self.elements() {
                if done.contains(g) {
                    continue;
                }
                for &x in h.elements() {
                    done.insert(self.mul(g, x));
                }
                *next_gens.last_mut().unwrap() = g;
                let k = h.closure(self, &next_gens);
                if !seen.contains(&k) {
                    seen.insert(k.clone());
                    frontier.push((k, next_gens.clone()));
                }
            }
            all.push(h);
        }
        all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
        Ok(all)
    }

    /// Maximal proper subgroups drawn from a full subgroup list.
    pub fn maximal_subgroups(&self, subgroups: &[Subgroup]) -> Vec<Subgroup> {
        let proper: Vec<&Subgroup> = subgroups.iter().filter(|s| s.order() < self.order()).collect();
        proper
            .iter()
            .filter(|m| !proper.iter().any(|n| n.order() > m.order() && m.is_subset(n)))
            .map(|m| (*m).clone())
            .collect()
    }

    /// Intersection of all maximal subgroups (the whole trivial group for `C1`).
    pub fn frattini(&self) -> Result<Subgroup> {
        let subgroups = self.subgroups()?;
        let maximal = self.maximal_subgroups(&subgroups);
        Ok(maximal.iter().fold(Subgroup::whole(self), |acc, m| acc.intersection(m)))
    }

    /// One representative per double coset `A g B`, the least index in each.
    pub fn double_coset_representatives(&self, a: &Subgroup, b: &Subgroup) -> Vec<Elem> {
        let mut covered = FixedBitSet::with_capacity(self.order());
        let mut reps = Vec::new();
        for g in self.elements() {
            if covered.contains(g) {
                continue;
            }
            reps.push(g);
            for &x in a.elements() {
                let xg = self.mul(x, g);
                for &y in b.elements() {
                    covered.insert(self.mul(xg, y));
                }
            }
        }
        reps
    }

    /// The subgroup `H` as a standalone group, with the embedding
    /// `embedding[i] = ` the parent index of the new element `i`.
    pub fn subgroup_as_group(&self, h: &Subgroup, name: impl Into<String>) -> (FiniteGroup, Vec<Elem>) {
        let embedding = h.elements().to_vec();
        let n = embedding.len();
        let mut table = Vec::with_capacity(n * n);
        for &x in &embedding {
            for &y in &embedding {
                table.push(h.position(self.mul(x, y)).expect("closed subgroup"));
            }
        }
        let labels = embedding.iter().map(|&e| self.label(e).to_string()).collect();
        (FiniteGroup::assemble(name.into(), n, table, labels), embedding)
    }

    /// `G / N` with cosets ordered by their least element, plus the projection
    /// `G → G/N` as a dense index map.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, Vec<Elem>)> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let mut projection = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for g in self.elements() {
            if projection[g] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(g);
            for &x in n.elements() {
                projection[self.mul(g, x)] = idx;
            }
        }
        let m = reps.len();
        let mut table = Vec::with_capacity(m * m);
        for &a in &reps {
            for &b in &reps {
                table.push(projection[self.mul(a, b)]);
            }
        }
        let labels = reps.iter().map(|&r| format!("[{}]", self.label(r))).collect();
        let name = format!("{}/{}", self.name(), n.order());
        Ok((FiniteGroup::assemble(name, m, table, labels), projection))
    }
}
