//! Explicit `(A×C)`-sets given by full action tables.
//!
//! This is the set-theoretic side: coset spaces, orbits, stabilisers,
//! C-free parts, the Dress tensor of sets and the composition of fibred
//! bisets as a quotient of `X×Y`. Everything here is deliberately naive and
//! serves as the oracle for the closed formulas.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::goursat::ProductGroup;
use crate::group::{Elem, FiniteGroup, Subgroup};

use super::Subcharacter;

pub(super) const UNSET: usize = usize::MAX;

/// A finite set with commuting left actions of a group `A` and a fibre `C`.
#[derive(Clone, Debug)]
pub struct MonomialSet {
    group: Arc<FiniteGroup>,
    fibre: Arc<FiniteGroup>,
    size: usize,
    /// `g_action[a * size + p] = a·p`
    g_action: Vec<usize>,
    /// `c_action[c * size + p] = c·p`
    c_action: Vec<usize>,
}

pub(super) fn generators(g: &FiniteGroup) -> Vec<Elem> {
    Subgroup::whole(g).generators(g)
}

/// Labels the orbits of `0..size` under the given generator maps.
/// Orbits are numbered by their least point; returns the labels and the
/// least point of each orbit.
pub(super) fn label_orbits(size: usize, steps: &[&dyn Fn(usize) -> usize]) -> (Vec<usize>, Vec<usize>) {
    let mut label = vec![UNSET; size];
    let mut bases = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..size {
        if label[start] != UNSET {
            continue;
        }
        let id = bases.len();
        bases.push(start);
        label[start] = id;
        queue.push_back(start);
        while let Some(p) = queue.pop_front() {
            for step in steps {
                let q = step(p);
                if label[q] == UNSET {
                    label[q] = id;
                    queue.push_back(q);
                }
            }
        }
    }
    (label, bases)
}

impl MonomialSet {
    /// Validates the tables: permutations, identities act trivially, both
    /// actions are actions and they commute.
    pub fn new(
        group: Arc<FiniteGroup>,
        fibre: Arc<FiniteGroup>,
        size: usize,
        g_action: Vec<usize>,
        c_action: Vec<usize>,
    ) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidAction(m.to_string()));
        if g_action.len() != group.order() * size || c_action.len() != fibre.order() * size {
            return bad("action table has the wrong length");
        }
        if g_action.iter().chain(&c_action).any(|&p| p >= size) {
            return bad("action table entry out of range");
        }
        let set = Self { group, fibre, size, g_action, c_action };
        for p in 0..size {
            if set.act(set.group.identity(), p) != p || set.act_fibre(set.fibre.identity(), p) != p {
                return bad("identity does not act trivially");
            }
        }
        for a in set.group.elements() {
            for b in set.group.elements() {
                let ab = set.group.mul(a, b);
                if (0..size).any(|p| set.act(a, set.act(b, p)) != set.act(ab, p)) {
                    return bad("group table is not an action");
                }
            }
        }
        for c in set.fibre.elements() {
            for d in set.fibre.elements() {
                let cd = set.fibre.mul(c, d);
                if (0..size).any(|p| set.act_fibre(c, set.act_fibre(d, p)) != set.act_fibre(cd, p)) {
                    return bad("fibre table is not an action");
                }
            }
            for a in set.group.elements() {
                if (0..size).any(|p| set.act(a, set.act_fibre(c, p)) != set.act_fibre(c, set.act(a, p))) {
                    return bad("group and fibre actions do not commute");
                }
            }
        }
        Ok(set)
    }

    /// `(A×C)/D_δ` with `D_δ = {(d, δ(d)⁻¹)}`.
    pub fn coset_space(group: Arc<FiniteGroup>, fibre: Arc<FiniteGroup>, s: &Subcharacter) -> Self {
        let nc = fibre.order();
        let stabilizer: Vec<usize> = s.pairs().map(|(d, v)| d * nc + fibre.inv(v)).collect();
        Self::transitive(group, fibre, &stabilizer)
    }

    /// `(A×C)/S` for any subgroup `S ≤ A×C`, given by elements packed as
    /// `a·|C| + c`. Need not be C-free.
    pub fn transitive(group: Arc<FiniteGroup>, fibre: Arc<FiniteGroup>, stabilizer: &[usize]) -> Self {
        let nc = fibre.order();
        let n = group.order() * nc;
        let mut label = vec![UNSET; n];
        let mut reps = Vec::new();
        for ac in 0..n {
            if label[ac] != UNSET {
                continue;
            }
            let (a, c) = (ac / nc, ac % nc);
            for &s in stabilizer {
                label[group.mul(a, s / nc) * nc + fibre.mul(c, s % nc)] = reps.len();
            }
            reps.push((a, c));
        }
        let size = reps.len();
        let mut g_action = vec![0; group.order() * size];
        for g in group.elements() {
            for (p, &(a, c)) in reps.iter().enumerate() {
                g_action[g * size + p] = label[group.mul(g, a) * nc + c];
            }
        }
        let mut c_action = vec![0; nc * size];
        for x in fibre.elements() {
            for (p, &(a, c)) in reps.iter().enumerate() {
                c_action[x * size + p] = label[a * nc + fibre.mul(x, c)];
            }
        }
        Self { group, fibre, size, g_action, c_action }
    }

    pub(super) fn from_raw(
        group: Arc<FiniteGroup>,
        fibre: Arc<FiniteGroup>,
        size: usize,
        g_action: Vec<usize>,
        c_action: Vec<usize>,
    ) -> Self {
        Self { group, fibre, size, g_action, c_action }
    }

    pub fn empty(group: Arc<FiniteGroup>, fibre: Arc<FiniteGroup>) -> Self {
        Self { group, fibre, size: 0, g_action: Vec::new(), c_action: Vec::new() }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn fibre(&self) -> &Arc<FiniteGroup> {
        &self.fibre
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn act(&self, a: Elem, p: usize) -> usize {
        self.g_action[a * self.size + p]
    }

    #[inline]
    pub fn act_fibre(&self, c: Elem, p: usize) -> usize {
        self.c_action[c * self.size + p]
    }

    fn is_free_at(&self, p: usize) -> bool {
        self.fibre.elements().all(|c| c == self.fibre.identity() || self.act_fibre(c, p) != p)
    }

    pub fn is_c_free(&self) -> bool {
        (0..self.size).all(|p| self.is_free_at(p))
    }

    /// Points on which `C` acts freely, renumbered in increasing order.
    /// This subset is `A`-stable because the actions commute.
    pub fn c_free_part(&self) -> Self {
        let keep: Vec<usize> = (0..self.size).filter(|&p| self.is_free_at(p)).collect();
        self.subset(&keep)
    }

    fn subset(&self, keep: &[usize]) -> Self {
        let mut index = vec![UNSET; self.size];
        for (i, &p) in keep.iter().enumerate() {
            index[p] = i;
        }
        let size = keep.len();
        let remap = |table: &[usize], n: usize| -> Vec<usize> {
            let mut out = Vec::with_capacity(n * size);
            for a in 0..n {
                out.extend(keep.iter().map(|&p| index[table[a * self.size + p]]));
            }
            out
        };
        Self {
            group: self.group.clone(),
            fibre: self.fibre.clone(),
            size,
            g_action: remap(&self.g_action, self.group.order()),
            c_action: remap(&self.c_action, self.fibre.order()),
        }
    }

    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        if *self.group != *other.group {
            return Err(Error::FactorMismatch("disjoint union over different groups".into()));
        }
        if *self.fibre != *other.fibre {
            return Err(Error::FibreMismatch);
        }
        let size = self.size + other.size;
        let join = |a: &[usize], b: &[usize], n: usize| -> Vec<usize> {
            let mut out = Vec::with_capacity(n * size);
            for x in 0..n {
                out.extend_from_slice(&a[x * self.size..(x + 1) * self.size]);
                out.extend(b[x * other.size..(x + 1) * other.size].iter().map(|&p| p + self.size));
            }
            out
        };
        Ok(Self {
            group: self.group.clone(),
            fibre: self.fibre.clone(),
            size,
            g_action: join(&self.g_action, &other.g_action, self.group.order()),
            c_action: join(&self.c_action, &other.c_action, self.fibre.order()),
        })
    }

    /// Orbit label per point and the least point of each `(A×C)`-orbit.
    pub fn orbits(&self) -> (Vec<usize>, Vec<usize>) {
        let ga = generators(&self.group);
        let gc = generators(&self.fibre);
        let steps: Vec<Box<dyn Fn(usize) -> usize + '_>> = ga
            .iter()
            .map(|&a| Box::new(move |p| self.act(a, p)) as Box<dyn Fn(usize) -> usize>)
            .chain(gc.iter().map(|&c| Box::new(move |p| self.act_fibre(c, p)) as Box<dyn Fn(usize) -> usize>))
            .collect();
        let refs: Vec<&dyn Fn(usize) -> usize> = steps.iter().map(|b| b.as_ref()).collect();
        label_orbits(self.size, &refs)
    }

    /// `(D, δ)` read off the stabiliser of `x`: `a ∈ D` iff `a·x = c·x` for
    /// some `c`, and then `δ(a) = c`.
    pub fn stabilizer_character(&self, x: usize) -> Result<Subcharacter> {
        if !self.is_free_at(x) {
            return Err(Error::NotFree);
        }
        let mut fibre_of = vec![UNSET; self.size];
        for c in self.fibre.elements() {
            fibre_of[self.act_fibre(c, x)] = c;
        }
        let pairs = self
            .group
            .elements()
            .filter_map(|a| {
                let c = fibre_of[self.act(a, x)];
                (c != UNSET).then_some((a, c))
            })
            .collect();
        Ok(Subcharacter::from_pairs(pairs))
    }

    /// One subcharacter per orbit, read at the orbit's least point.
    pub fn decompose(&self) -> Result<Vec<Subcharacter>> {
        if !self.is_c_free() {
            return Err(Error::NotFree);
        }
        let (_, bases) = self.orbits();
        bases.into_iter().map(|b| self.stabilizer_character(b)).collect()
    }

    /// Pulls the `A`-action back along `map: B → A`.
    pub fn restrict(&self, group: Arc<FiniteGroup>, map: impl Fn(Elem) -> Elem) -> Self {
        let mut g_action = Vec::with_capacity(group.order() * self.size);
        for b in group.elements() {
            let a = map(b);
            g_action.extend_from_slice(&self.g_action[a * self.size..(a + 1) * self.size]);
        }
        Self { group, fibre: self.fibre.clone(), size: self.size, g_action, c_action: self.c_action.clone() }
    }

    /// The Dress product: `C`-orbits of `T×Y` under `c(t, y) = (ct, c⁻¹y)`,
    /// as a set over `target = A×B` (packed `a·|B| + b`).
    pub fn tensor(&self, other: &Self, target: Arc<FiniteGroup>) -> Result<Self> {
        if *self.fibre != *other.fibre {
            return Err(Error::FibreMismatch);
        }
        let nb = other.group.order();
        if target.order() != self.group.order() * nb {
            return Err(Error::FactorMismatch("tensor target has the wrong order".into()));
        }
        let fibre = &self.fibre;
        let ny = other.size;
        let gc = generators(fibre);
        let steps: Vec<Box<dyn Fn(usize) -> usize + '_>> = gc
            .iter()
            .map(|&c| {
                let ci = fibre.inv(c);
                Box::new(move |p: usize| self.act_fibre(c, p / ny) * ny + other.act_fibre(ci, p % ny))
                    as Box<dyn Fn(usize) -> usize>
            })
            .collect();
        let refs: Vec<&dyn Fn(usize) -> usize> = steps.iter().map(|b| b.as_ref()).collect();
        let (label, bases) = label_orbits(self.size * ny, &refs);
        let size = bases.len();
        let mut g_action = vec![0; target.order() * size];
        for e in target.elements() {
            let (a, b) = (e / nb, e % nb);
            for (i, &p) in bases.iter().enumerate() {
                g_action[e * size + i] = label[self.act(a, p / ny) * ny + other.act(b, p % ny)];
            }
        }
        let mut c_action = vec![0; fibre.order() * size];
        for c in fibre.elements() {
            for (i, &p) in bases.iter().enumerate() {
                c_action[c * size + i] = label[self.act_fibre(c, p / ny) * ny + p % ny];
            }
        }
        Ok(Self { group: target, fibre: self.fibre.clone(), size, g_action, c_action })
    }

    /// Composition of fibred bisets at set level. `self` is a `(G×H)`-set
    /// split by `left`, `other` an `(H×K)`-set split by `right`; the result
    /// is the set of orbits of `X×Y` under
    /// `(h, c)(x, y) = ((1,h)c·x, (h,1)c⁻¹·y)`, acted on by `target = G×K`
    /// through `(g,k)[x, y] = [(g,1)x, (1,k)y]` and `c[x, y] = [cx, y]`.
    /// Non-free orbits are kept; callers take [`MonomialSet::c_free_part`].
    pub fn compose(
        &self,
        left: &ProductGroup,
        other: &Self,
        right: &ProductGroup,
        target: &ProductGroup,
    ) -> Result<Self> {
        if *self.fibre != *other.fibre {
            return Err(Error::FibreMismatch);
        }
        if left.factor(1) != right.factor(0) {
            return Err(Error::FactorMismatch("middle groups differ".into()));
        }
        let (g, h, k) = (left.factor(0), left.factor(1), right.factor(1));
        let fibre = &self.fibre;
        let ny = other.size;
        let mut steps: Vec<Box<dyn Fn(usize) -> usize + '_>> = Vec::new();
        for m in generators(h) {
            let on_x = left.pack(&[g.identity(), m]);
            let on_y = right.pack(&[m, k.identity()]);
            steps.push(Box::new(move |p: usize| self.act(on_x, p / ny) * ny + other.act(on_y, p % ny)));
        }
        for c in generators(fibre) {
            let ci = fibre.inv(c);
            steps.push(Box::new(move |p: usize| self.act_fibre(c, p / ny) * ny + other.act_fibre(ci, p % ny)));
        }
        let refs: Vec<&dyn Fn(usize) -> usize> = steps.iter().map(|b| b.as_ref()).collect();
        let (label, bases) = label_orbits(self.size * ny, &refs);
        let size = bases.len();
        let group = target.group_arc().clone();
        let mut g_action = vec![0; group.order() * size];
        for e in group.elements() {
            let on_x = left.pack(&[target.coord(e, 0), h.identity()]);
            let on_y = right.pack(&[h.identity(), target.coord(e, 1)]);
            for (i, &p) in bases.iter().enumerate() {
                g_action[e * size + i] = label[self.act(on_x, p / ny) * ny + other.act(on_y, p % ny)];
            }
        }
        let mut c_action = vec![0; fibre.order() * size];
        for c in fibre.elements() {
            for (i, &p) in bases.iter().enumerate() {
                c_action[c * size + i] = label[self.act_fibre(c, p / ny) * ny + p % ny];
            }
        }
        Ok(Self { group, fibre: self.fibre.clone(), size, g_action, c_action })
    }

    fn stabilizer(&self, p: usize) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.group.elements() {
            let ap = self.act(a, p);
            for c in self.fibre.elements() {
                if self.act_fibre(c, ap) == p {
                    out.push((a, c));
                }
            }
        }
        out
    }

    /// An `(A×C)`-equivariant bijection `self → other` as a point map, or
    /// `None`. Orbits are matched greedily by exact stabiliser equality: two
    /// transitive sets are isomorphic iff some points have equal stabilisers,
    /// and isomorphic orbits are interchangeable, so greedy matching is
    /// complete.
    pub fn find_isomorphism(&self, other: &Self) -> Option<Vec<usize>> {
        if self.size != other.size || *self.group != *other.group || *self.fibre != *other.fibre {
            return None;
        }
        let (_, bases) = self.orbits();
        let (other_label, other_bases) = other.orbits();
        let mut orbit_points: Vec<Vec<usize>> = vec![Vec::new(); other_bases.len()];
        for (p, &l) in other_label.iter().enumerate() {
            orbit_points[l].push(p);
        }
        let mut used = vec![false; other_bases.len()];
        let mut map = vec![UNSET; self.size];
        for &x in &bases {
            let stab = self.stabilizer(x);
            let target = (0..other_bases.len())
                .filter(|&o| !used[o])
                .find_map(|o| orbit_points[o].iter().copied().find(|&y| other.stabilizer(y) == stab).map(|y| (o, y)))?;
            used[target.0] = true;
            for a in self.group.elements() {
                for c in self.fibre.elements() {
                    let p = self.act_fibre(c, self.act(a, x));
                    map[p] = other.act_fibre(c, other.act(a, target.1));
                }
            }
        }
        let mut hit = vec![false; other.size];
        for &q in &map {
            if q == UNSET || std::mem::replace(&mut hit[q], true) {
                return None;
            }
        }
        let equivariant = (0..self.size).all(|p| {
            self.group.elements().all(|a| map[self.act(a, p)] == other.act(a, map[p]))
                && self.fibre.elements().all(|c| map[self.act_fibre(c, p)] == other.act_fibre(c, map[p]))
        });
        equivariant.then_some(map)
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.find_isomorphism(other).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibred::FibredSpace;
    use crate::group::group_from_spec;

    fn arc(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(group_from_spec(spec).unwrap())
    }

    #[test]
    fn coset_space_round_trip() {
        for (g, c) in [("C4", "C2"), ("S3", "C3"), ("D8", "C4"), ("Q8", "C2")] {
            let space = FibredSpace::single(arc(g), arc(c)).unwrap();
            for s in space.classes().unwrap() {
                let set = MonomialSet::coset_space(space.ambient_arc().clone(), space.fibre().clone(), s);
                assert_eq!(set.size(), space.ambient().order() * space.fibre().order() / s.order());
                assert!(set.is_c_free());
                let parts = set.decompose().unwrap();
                assert_eq!(parts.len(), 1);
                assert_eq!(space.canonicalize(&parts[0]), *s);
                // The table constructor accepts what coset_space builds.
                MonomialSet::new(
                    set.group.clone(),
                    set.fibre.clone(),
                    set.size,
                    set.g_action.clone(),
                    set.c_action.clone(),
                )
                .unwrap();
            }
        }
    }

    #[test]
    fn invalid_tables_are_rejected() {
        let c2 = arc("C2");
        // Non-commuting actions are impossible here, but a non-permutation is not.
        let err = MonomialSet::new(c2.clone(), c2.clone(), 2, vec![0, 1, 0, 0], vec![0, 1, 1, 0]);
        assert!(matches!(err, Err(Error::InvalidAction(_))));
        let err = MonomialSet::new(c2.clone(), c2, 2, vec![0, 1], vec![0, 1, 1, 0]);
        assert!(matches!(err, Err(Error::InvalidAction(_))));
    }

    #[test]
    fn free_part_and_union() {
        let g = arc("C2");
        let c = arc("C2");
        // A trivial point (C fixes it) plus a free orbit C.
        let fixed = MonomialSet::new(g.clone(), c.clone(), 1, vec![0, 0], vec![0, 0]).unwrap();
        assert!(!fixed.is_c_free());
        assert_eq!(fixed.decompose(), Err(Error::NotFree));
        let space = FibredSpace::single(g.clone(), c.clone()).unwrap();
        let whole = Subcharacter::trivial(&Subgroup::whole(&g), &c);
        let free = MonomialSet::coset_space(g, c, &whole);
        let both = fixed.disjoint_union(&free).unwrap();
        assert_eq!(both.size(), 3);
        let part = both.c_free_part();
        assert!(part.is_isomorphic(&free));
        assert!(!both.is_isomorphic(&free));
        assert_eq!(space.canonicalize(&part.decompose().unwrap()[0]), whole);
    }

    #[test]
    fn isomorphism_detects_different_characters() {
        let space = FibredSpace::single(arc("C4"), arc("C4")).unwrap();
        let classes = space.classes().unwrap();
        for a in classes {
            for b in classes {
                let x = MonomialSet::coset_space(space.ambient_arc().clone(), space.fibre().clone(), a);
                let y = MonomialSet::coset_space(space.ambient_arc().clone(), space.fibre().clone(), b);
                assert_eq!(x.is_isomorphic(&y), a == b);
            }
        }
    }
}
