use fixedbitset::FixedBitSet;

use super::{Elem, FiniteGroup, Subgroup};
use crate::error::{Error, Result};

const UNMAPPED: Elem = usize::MAX;

/// A homomorphism defined on a subgroup of some source group.
///
/// The map is stored densely over the whole source group with unmapped
/// entries outside the domain, so evaluation is a single index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupHom {
    domain: Subgroup,
    map: Vec<Elem>,
}

impl GroupHom {
    /// Tabulates `f` on `domain`. No homomorphism check is performed.
    pub fn from_fn(domain: &Subgroup, source_order: usize, f: impl Fn(Elem) -> Elem) -> Self {
        let mut map = vec![UNMAPPED; source_order];
        for &x in domain.elements() {
            map[x] = f(x);
        }
        Self { domain: domain.clone(), map }
    }

    /// Builds the map from a dense table (`UNMAPPED` outside the domain).
    pub(crate) fn from_dense(domain: Subgroup, map: Vec<Elem>) -> Self {
        Self { domain, map }
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        Self::from_fn(&Subgroup::whole(group), group.order(), |x| x)
    }

    pub fn trivial(domain: &Subgroup, source_order: usize, target: &FiniteGroup) -> Self {
        Self::from_fn(domain, source_order, |_| target.identity())
    }

    /// The unique homomorphism sending `gens[i]` to `images[i]`, if any.
    pub fn from_generators(source: &FiniteGroup, gens: &[Elem], images: &[Elem], target: &FiniteGroup) -> Result<Self> {
        if gens.len() != images.len() {
            return Err(Error::NotHomomorphism("generator/image count mismatch".into()));
        }
        let mut map = vec![UNMAPPED; source.order()];
        map[source.identity()] = target.identity();
        let mut list = vec![source.identity()];
        if !extend_map(source, target, gens, images, &mut map, &mut list) {
            return Err(Error::NotHomomorphism("generator images violate a relation".into()));
        }
        let domain = Subgroup::from_sorted(list, source.order());
        Ok(Self { domain, map })
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        let y = self.map[x];
        debug_assert!(y != UNMAPPED, "element {x} outside the domain");
        y
    }

    pub fn get(&self, x: Elem) -> Option<Elem> {
        self.map.get(x).copied().filter(|&y| y != UNMAPPED)
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    /// Images of the domain elements, in domain order.
    pub fn images(&self) -> Vec<Elem> {
        self.domain.elements().iter().map(|&x| self.map[x]).collect()
    }

    pub fn dense(&self) -> &[Elem] {
        &self.map
    }

    pub fn is_homomorphism(&self, source: &FiniteGroup, target: &FiniteGroup) -> bool {
        let dom = self.domain.elements();
        dom.iter().all(|&x| dom.iter().all(|&y| self.map[source.mul(x, y)] == target.mul(self.map[x], self.map[y])))
    }

    pub fn is_injective(&self) -> bool {
        let mut images = self.images();
        images.sort_unstable();
        images.windows(2).all(|w| w[0] != w[1])
    }

    pub fn kernel(&self, source: &FiniteGroup, target: &FiniteGroup) -> Subgroup {
        let elems = self.domain.elements().iter().copied().filter(|&x| self.map[x] == target.identity()).collect();
        Subgroup::from_sorted(elems, source.order())
    }

    pub fn image(&self, target: &FiniteGroup) -> Subgroup {
        Subgroup::from_sorted(self.images(), target.order())
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &GroupHom) -> GroupHom {
        let domain = first.domain.clone();
        let mut map = vec![UNMAPPED; first.map.len()];
        for &x in domain.elements() {
            map[x] = self.apply(first.map[x]);
        }
        GroupHom { domain, map }
    }

    /// Inverse of a bijective endomorphism of a whole group.
    pub fn inverse(&self) -> GroupHom {
        let mut map = vec![UNMAPPED; self.map.len()];
        for &x in self.domain.elements() {
            map[self.map[x]] = x;
        }
        GroupHom { domain: self.domain.clone(), map }
    }
}

/// Extends a partial map by right-multiplication closure over `gens`.
/// `list` holds the mapped elements; returns false on an inconsistency.
fn extend_map(
    source: &FiniteGroup,
    target: &FiniteGroup,
    gens: &[Elem],
    images: &[Elem],
    map: &mut [Elem],
    list: &mut Vec<Elem>,
) -> bool {
    let mut i = 0;
    while i < list.len() {
        let x = list[i];
        let fx = map[x];
        for (&s, &fs) in gens.iter().zip(images) {
            let y = source.mul(x, s);
            let fy = target.mul(fx, fs);
            match map[y] {
                UNMAPPED => {
                    map[y] = fy;
                    list.push(y);
                }
                v if v != fy => return false,
                _ => {}
            }
        }
        i += 1;
    }
    true
}

/// Backtracking over generator images. `candidates[i]` lists the allowed
/// images of `gens[i]`; `visit` returns false to stop early.
fn search_homs(
    source: &FiniteGroup,
    domain: &Subgroup,
    target: &FiniteGroup,
    gens: &[Elem],
    candidates: &[Vec<Elem>],
    injective: bool,
    visit: &mut dyn FnMut(GroupHom) -> bool,
) {
    struct Frame<'a> {
        source: &'a FiniteGroup,
        target: &'a FiniteGroup,
        domain: &'a Subgroup,
        gens: &'a [Elem],
        candidates: &'a [Vec<Elem>],
        injective: bool,
    }

    fn rec(
        f: &Frame<'_>,
        depth: usize,
        images: &mut Vec<Elem>,
        map: &[Elem],
        list: &[Elem],
        visit: &mut dyn FnMut(GroupHom) -> bool,
    ) -> bool {
        if depth == f.gens.len() {
            if f.injective {
                let mut used = FixedBitSet::with_capacity(f.target.order());
                for &x in list {
                    if used.put(map[x]) {
                        return true;
                    }
                }
            }
            return visit(GroupHom::from_dense(f.domain.clone(), map.to_vec()));
        }
        for &c in &f.candidates[depth] {
            images.push(c);
            let mut map2 = map.to_vec();
            let mut list2 = list.to_vec();
            if extend_map(f.source, f.target, &f.gens[..=depth], images, &mut map2, &mut list2)
                && !rec(f, depth + 1, images, &map2, &list2, visit)
            {
                images.pop();
                return false;
            }
            images.pop();
        }
        true
    }

    let frame = Frame { source, target, domain, gens, candidates, injective };
    let mut map = vec![UNMAPPED; source.order()];
    map[source.identity()] = target.identity();
    rec(&frame, 0, &mut Vec::new(), &map, &[source.identity()], visit);
}

/// All homomorphisms from the subgroup `domain` of `source` into `target`,
/// in lexicographic order of the generator images.
pub fn homomorphisms(source: &FiniteGroup, domain: &Subgroup, target: &FiniteGroup) -> Vec<GroupHom> {
    let gens = domain.generators(source);
    let candidates: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&g| {
            let n = source.element_order(g);
            target.elements().filter(|&y| n.is_multiple_of(target.element_order(y))).collect()
        })
        .collect();
    let mut out = Vec::new();
    search_homs(source, domain, target, &gens, &candidates, false, &mut |h| {
        out.push(h);
        true
    });
    out
}

fn injective_candidates(source: &FiniteGroup, gens: &[Elem], target: &FiniteGroup) -> Vec<Vec<Elem>> {
    gens.iter()
        .map(|&g| {
            let n = source.element_order(g);
            target.elements().filter(|&y| target.element_order(y) == n).collect()
        })
        .collect()
}

/// Some isomorphism `G → H`, or `None`. Deterministic: the first one found
/// in generator-image order.
pub fn isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<GroupHom> {
    if g.order() != h.order() || g.order_census() != h.order_census() {
        return None;
    }
    let whole = Subgroup::whole(g);
    let gens = whole.generators(g);
    let candidates = injective_candidates(g, &gens, h);
    let mut found = None;
    search_homs(g, &whole, h, &gens, &candidates, true, &mut |f| {
        found = Some(f);
        false
    });
    found
}

/// The automorphism group with its inner part and a transversal of `Out(G)`.
#[derive(Clone, Debug)]
pub struct Automorphisms {
    /// All automorphisms, sorted by image tuple (the identity comes first).
    pub all: Vec<GroupHom>,
    /// Distinct conjugation maps `x ↦ g x g⁻¹`.
    pub inner: Vec<GroupHom>,
    /// The least automorphism (by image tuple) in each coset of `Inn(G)`.
    pub outer_reps: Vec<GroupHom>,
}

impl Automorphisms {
    /// The out-class representative of `sigma`.
    pub fn out_rep(&self, sigma: &GroupHom) -> &GroupHom {
        let key = self.inner.iter().map(|c| sigma.after(c).images()).min().expect("Inn(G) is never empty");
        self.outer_reps.iter().find(|r| r.images() == key).expect("outer transversal covers every coset")
    }

    pub fn out_index(&self, sigma: &GroupHom) -> usize {
        let rep = self.out_rep(sigma);
        self.outer_reps.iter().position(|r| r == rep).unwrap()
    }

    pub fn out_order(&self) -> usize {
        self.outer_reps.len()
    }
}

pub fn automorphisms(g: &FiniteGroup) -> Automorphisms {
    let whole = Subgroup::whole(g);
    let gens = whole.generators(g);
    let candidates = injective_candidates(g, &gens, g);
    let mut all = Vec::new();
    search_homs(g, &whole, g, &gens, &candidates, true, &mut |f| {
        all.push(f);
        true
    });
    all.sort_by_key(GroupHom::images);

    let mut inner: Vec<GroupHom> = Vec::new();
    for x in g.elements() {
        let c = GroupHom::from_fn(&whole, g.order(), |y| g.conj(x, y));
        if !inner.contains(&c) {
            inner.push(c);
        }
    }
    inner.sort_by_key(GroupHom::images);

    let mut outer_reps: Vec<GroupHom> = Vec::new();
    let mut covered = std::collections::HashSet::new();
    for sigma in &all {
        if covered.contains(&sigma.images()) {
            continue;
        }
        // Iterating in sorted order, the first member of each coset is its least.
        outer_reps.push(sigma.clone());
        for c in &inner {
            covered.insert(sigma.after(c).images());
        }
    }
    Automorphisms { all, inner, outer_reps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::group_from_spec;

    fn g(spec: &str) -> FiniteGroup {
        group_from_spec(spec).unwrap()
    }

    /// Independent count: every map on all elements checked for the
    /// homomorphism property (tiny groups only).
    fn brute_force_hom_count(source: &FiniteGroup, target: &FiniteGroup) -> usize {
        let (n, m) = (source.order(), target.order());
        let total = m.pow(n as u32);
        (0..total)
            .filter(|&code| {
                let f = |x: usize| (code / m.pow(x as u32)) % m;
                (0..n).all(|a| (0..n).all(|b| f(source.mul(a, b)) == target.mul(f(a), f(b))))
            })
            .count()
    }

    #[test]
    fn hom_counts() {
        let c2 = g("C2");
        let c3 = g("C3");
        let c4 = g("C4");
        let q8 = g("Q8");
        let s3 = g("S3");
        let c1 = g("C1");
        let count = |s: &FiniteGroup, t: &FiniteGroup| homomorphisms(s, &Subgroup::whole(s), t).len();
        assert_eq!(count(&c1, &c4), 1);
        assert_eq!(count(&q8, &c2), 4);
        assert_eq!(count(&s3, &c3), 1);
        for (s, t) in [(&s3, &c2), (&c4, &c2), (&c4, &c4), (&s3, &c3)] {
            assert_eq!(count(s, t), brute_force_hom_count(s, t));
        }
    }

    #[test]
    fn every_hom_q8_to_c2_kills_x_squared() {
        let q8 = g("Q8");
        let c2 = g("C2");
        let x = q8.element_by_label("x").unwrap();
        let x2 = q8.mul(x, x);
        for h in homomorphisms(&q8, &Subgroup::whole(&q8), &c2) {
            assert!(h.is_homomorphism(&q8, &c2));
            assert_eq!(h.apply(x2), c2.identity());
        }
    }

    #[test]
    fn homs_contain_trivial_and_are_closed_under_target_automorphisms() {
        let s = g("D8");
        let t = g("C2xC2");
        let homs = homomorphisms(&s, &Subgroup::whole(&s), &t);
        let triv = GroupHom::trivial(&Subgroup::whole(&s), s.order(), &t);
        assert!(homs.contains(&triv));
        for alpha in automorphisms(&t).all {
            for h in &homs {
                assert!(homs.contains(&alpha.after(h)));
            }
        }
    }

    #[test]
    fn homs_from_subgroup_domain() {
        let d8 = g("D8");
        let a = d8.element_by_label("a").unwrap();
        let rot = Subgroup::generated(&d8, &[a]);
        let c4 = g("C4");
        let homs = homomorphisms(&d8, &rot, &c4);
        assert_eq!(homs.len(), 4);
        assert!(homs.iter().all(|h| h.domain() == &rot));
        assert!(homs.iter().all(|h| h.get(d8.element_by_label("b").unwrap()).is_none()));
    }

    #[test]
    fn automorphism_counts() {
        let c2 = automorphisms(&g("C2"));
        assert_eq!(c2.out_order(), 1);
        let q8 = automorphisms(&g("Q8"));
        assert_eq!(q8.all.len(), 24);
        assert_eq!(q8.inner.len(), 4);
        assert_eq!(q8.out_order(), 6);
        assert_eq!(automorphisms(&g("C4")).out_order(), 2);
        assert_eq!(automorphisms(&g("D8")).out_order(), 2);
        assert_eq!(automorphisms(&g("S3")).out_order(), 1);
        assert_eq!(automorphisms(&g("C2xC2xC2")).all.len(), 168);
    }

    #[test]
    fn out_rep_is_constant_on_cosets() {
        let group = g("Q8");
        let aut = automorphisms(&group);
        for sigma in &aut.all {
            let rep = aut.out_rep(sigma);
            for c in &aut.inner {
                assert_eq!(aut.out_rep(&sigma.after(c)), rep);
                assert_eq!(aut.out_rep(&c.after(sigma)), rep);
            }
        }
        assert_eq!(aut.outer_reps[0], GroupHom::identity(&group));
    }

    #[test]
    fn isomorphisms() {
        let q8 = g("Q8");
        let d8 = g("D8");
        assert!(isomorphism(&q8, &d8).is_none());
        let id = isomorphism(&q8, &q8).unwrap();
        assert!(id.is_homomorphism(&q8, &q8) && id.is_injective());

        let b = d8.element_by_label("b").unwrap();
        let a = d8.element_by_label("a").unwrap();
        let klein = Subgroup::generated(&d8, &[b, d8.mul(a, a)]);
        let (k, _) = d8.subgroup_as_group(&klein, "V4");
        let c2c2 = g("C2xC2");
        let f = isomorphism(&c2c2, &k).unwrap();
        assert!(f.is_homomorphism(&c2c2, &k) && f.is_injective());
        assert!(isomorphism(&g("C4"), &k).is_none());
    }

    #[test]
    fn from_generators_rejects_relation_violations() {
        let c4 = g("C4");
        let c2 = g("C2");
        assert!(GroupHom::from_generators(&c4, &[1], &[1], &c2).is_ok());
        let c3 = g("C3");
        assert!(GroupHom::from_generators(&c4, &[1], &[1], &c3).is_err());
    }
}
