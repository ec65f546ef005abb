//! Plain bisets acting on fibred sets, for the Green functor identities
//!
//! `(Z ×_G W_{C-f})_{C-f} = (Z ×_G W)_{C-f}` and
//! `(Z ×_G T)_{C-f} ⊗ (X ×_H Y)_{C-f} ≅ ((Z×X) ×_{G×H} (T⊗Y))_{C-f}`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{direct_product, FiniteGroup};

use super::monomial::{generators, label_orbits, UNSET};
use super::MonomialSet;

/// A finite `(L, R)`-biset, stored as a left `(L×R)`-set with
/// `l·z·r = (l, r⁻¹)z`. The product is packed `l·|R| + r`.
#[derive(Clone, Debug)]
pub struct BisetSet {
    left: Arc<FiniteGroup>,
    right: Arc<FiniteGroup>,
    group: Arc<FiniteGroup>,
    size: usize,
    table: Vec<usize>,
}

impl BisetSet {
    /// `(L×R)/S` for a subgroup `S` of `L×R` given by packed elements.
    pub fn transitive(left: Arc<FiniteGroup>, right: Arc<FiniteGroup>, stabilizer: &[usize]) -> Self {
        let group = Arc::new(direct_product(&left, &right).0);
        let mut label = vec![UNSET; group.order()];
        let mut reps = Vec::new();
        for a in group.elements() {
            if label[a] == UNSET {
                for &s in stabilizer {
                    label[group.mul(a, s)] = reps.len();
                }
                reps.push(a);
            }
        }
        let size = reps.len();
        let mut table = vec![0; group.order() * size];
        for g in group.elements() {
            for (p, &a) in reps.iter().enumerate() {
                table[g * size + p] = label[group.mul(g, a)];
            }
        }
        Self { left, right, group, size, table }
    }

    pub fn left(&self) -> &Arc<FiniteGroup> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FiniteGroup> {
        &self.right
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    fn act(&self, e: usize, p: usize) -> usize {
        self.table[e * self.size + p]
    }

    fn pack(&self, l: usize, r: usize) -> usize {
        l * self.right.order() + r
    }

    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        if self.left != other.left || self.right != other.right {
            return Err(Error::FactorMismatch("bisets over different groups".into()));
        }
        let size = self.size + other.size;
        let mut table = Vec::with_capacity(self.group.order() * size);
        for e in self.group.elements() {
            table.extend_from_slice(&self.table[e * self.size..(e + 1) * self.size]);
            table.extend(other.table[e * other.size..(e + 1) * other.size].iter().map(|&p| p + self.size));
        }
        Ok(Self { left: self.left.clone(), right: self.right.clone(), group: self.group.clone(), size, table })
    }

    /// `Z×X` as an `(L₁×L₂, R₁×R₂)`-biset.
    pub fn product(&self, other: &Self) -> Self {
        let left = Arc::new(direct_product(&self.left, &other.left).0);
        let right = Arc::new(direct_product(&self.right, &other.right).0);
        let group = Arc::new(direct_product(&left, &right).0);
        let size = self.size * other.size;
        let (nr, nl2, nr2) = (right.order(), other.left.order(), other.right.order());
        let mut table = Vec::with_capacity(group.order() * size);
        for e in group.elements() {
            let (l, r) = (e / nr, e % nr);
            let first = self.pack(l / nl2, r / nr2);
            let second = other.pack(l % nl2, r % nr2);
            for p in 0..self.size {
                for q in 0..other.size {
                    table.push(self.act(first, p) * other.size + other.act(second, q));
                }
            }
        }
        Self { left, right, group, size, table }
    }

    /// `Z ×_R W`: orbits of `Z×W` under `r(z, w) = (z·r⁻¹, rw)`, with
    /// `l[z, w] = [lz, w]` and `c[z, w] = [z, cw]`.
    pub fn apply(&self, w: &MonomialSet) -> Result<MonomialSet> {
        if **w.group() != *self.right {
            return Err(Error::FactorMismatch("biset does not act on this group".into()));
        }
        let nw = w.size();
        let l_one = self.left.identity();
        let r_one = self.right.identity();
        let steps: Vec<Box<dyn Fn(usize) -> usize + '_>> = generators(&self.right)
            .into_iter()
            .map(|r| {
                let on_z = self.pack(l_one, r);
                Box::new(move |p: usize| self.act(on_z, p / nw) * nw + w.act(r, p % nw)) as Box<dyn Fn(usize) -> usize>
            })
            .collect();
        let refs: Vec<&dyn Fn(usize) -> usize> = steps.iter().map(|b| b.as_ref()).collect();
        let (label, bases) = label_orbits(self.size * nw, &refs);
        let size = bases.len();
        let mut g_action = vec![0; self.left.order() * size];
        for l in self.left.elements() {
            let on_z = self.pack(l, r_one);
            for (i, &p) in bases.iter().enumerate() {
                g_action[l * size + i] = label[self.act(on_z, p / nw) * nw + p % nw];
            }
        }
        let fibre = w.fibre();
        let mut c_action = vec![0; fibre.order() * size];
        for c in fibre.elements() {
            for (i, &p) in bases.iter().enumerate() {
                c_action[c * size + i] = label[(p / nw) * nw + w.act_fibre(c, p % nw)];
            }
        }
        Ok(MonomialSet::from_raw(self.left.clone(), fibre.clone(), size, g_action, c_action))
    }
}

/// Outcome of both identities on one instance, with the set sizes compared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreenCheck {
    pub absorption: bool,
    pub functoriality: bool,
    pub absorption_size: usize,
    pub functoriality_size: usize,
}

impl GreenCheck {
    pub fn holds(&self) -> bool {
        self.absorption && self.functoriality
    }

    /// `z` is an `(L, G)`-biset, `t` a fibred `G`-set, `x` a `(K, H)`-biset,
    /// `y` a fibred `H`-set and `w` any `(G×C)`-set, free or not.
    pub fn run(z: &BisetSet, t: &MonomialSet, x: &BisetSet, y: &MonomialSet, w: &MonomialSet) -> Result<Self> {
        let lhs = z.apply(&w.c_free_part())?.c_free_part();
        let rhs = z.apply(w)?.c_free_part();
        let absorption = lhs.is_isomorphic(&rhs);
        let absorption_size = rhs.size();

        let zx = z.product(x);
        let left = z.apply(t)?.c_free_part().tensor(&x.apply(y)?.c_free_part(), zx.left.clone())?;
        let right = zx.apply(&t.tensor(y, zx.right.clone())?)?.c_free_part();
        let functoriality = left.is_isomorphic(&right);
        Ok(Self { absorption, functoriality, absorption_size, functoriality_size: right.size() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibred::{FibredSpace, Subcharacter};
    use crate::group::{group_from_spec, Subgroup};

    fn arc(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(group_from_spec(spec).unwrap())
    }

    #[test]
    fn identity_biset_acts_trivially() {
        let g = arc("S3");
        let c = arc("C2");
        let gg = Arc::new(direct_product(&g, &g).0);
        let diagonal: Vec<usize> = g.elements().map(|x| x * g.order() + x).collect();
        let id = BisetSet::transitive(g.clone(), g.clone(), &diagonal);
        assert_eq!(id.size(), 6);
        let space = FibredSpace::single(g.clone(), c.clone()).unwrap();
        for s in space.classes().unwrap() {
            let t = MonomialSet::coset_space(g.clone(), c.clone(), s);
            assert!(id.apply(&t).unwrap().is_isomorphic(&t));
        }
        let _ = gg;
    }

    #[test]
    fn both_identities_on_a_small_instance() {
        let g = arc("C2");
        let h = arc("C3");
        let l = arc("C2");
        let c = arc("C2");
        let whole_lg: Vec<usize> = (0..4).collect();
        let z = BisetSet::transitive(l.clone(), g.clone(), &[0])
            .disjoint_union(&BisetSet::transitive(l.clone(), g.clone(), &whole_lg))
            .unwrap();
        let x = BisetSet::transitive(h.clone(), h.clone(), &[0, 4, 8]);
        let t = MonomialSet::coset_space(g.clone(), c.clone(), &Subcharacter::from_pairs(vec![(0, 0), (1, 1)]));
        let y = MonomialSet::coset_space(h.clone(), c.clone(), &Subcharacter::trivial(&Subgroup::trivial(&h), &c));
        // W: (G×C)/(1×C), not C-free, together with a free orbit.
        let w = MonomialSet::transitive(g.clone(), c.clone(), &[0, 1]).disjoint_union(&t).unwrap();
        let check = GreenCheck::run(&z, &t, &x, &y, &w).unwrap();
        assert!(check.holds(), "{check:?}");
        assert!(check.absorption_size > 0);
    }
}
