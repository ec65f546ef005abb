//! The monomial Burnside ring `B¹_C` and the composition of fibred bisets.
//!
//! A [`FibredSpace`] fixes an ambient product group (one factor for
//! `B¹_C(G)`, two for `B¹_C(G×H)`) and an abelian fibre group `C`. Transitive
//! `C`-fibred sets over the ambient are indexed by [`Subcharacter`]s `(D, δ)`
//! and canonicalised to the least pair in their conjugacy orbit.

mod compose;
mod element;
mod elementary;
mod green;
mod monomial;

use std::cmp::Ordering;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::goursat::ProductGroup;
use crate::group::{homomorphisms, Elem, FiniteGroup, GroupHom, Subgroup};

pub use compose::{
    compose, compose_in, compose_oracle, compose_summands, composition_space, is_idempotent, ring_product,
    ring_product_oracle, tensor, tensor_oracle, Summand,
};
pub use element::{FibredElement, TransitiveFibredBiset};
pub use elementary::{bouc_factorize, BoucFactorization, Elementary};
pub use green::{BisetSet, GreenCheck};
pub use monomial::MonomialSet;

/// A pair `(D, δ)`: the sorted elements of `D` and `δ` evaluated on them.
///
/// The derived order compares the subgroup first and the values second,
/// which is the total order used to pick canonical orbit representatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subcharacter {
    elements: Vec<Elem>,
    values: Vec<Elem>,
}

impl Subcharacter {
    /// From `(element, value)` pairs in any order.
    pub fn from_pairs(mut pairs: Vec<(Elem, Elem)>) -> Self {
        pairs.sort_unstable();
        let (elements, values) = pairs.into_iter().unzip();
        Self { elements, values }
    }

    pub fn from_hom(delta: &GroupHom) -> Self {
        Self { elements: delta.domain().elements().to_vec(), values: delta.images() }
    }

    pub fn trivial(d: &Subgroup, fibre: &FiniteGroup) -> Self {
        Self { elements: d.elements().to_vec(), values: vec![fibre.identity(); d.order()] }
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Elem, Elem)> + '_ {
        self.elements.iter().copied().zip(self.values.iter().copied())
    }

    pub fn value(&self, x: Elem) -> Option<Elem> {
        self.elements.binary_search(&x).ok().map(|i| self.values[i])
    }

    pub fn subgroup(&self, ambient_order: usize) -> Subgroup {
        Subgroup::from_sorted(self.elements.clone(), ambient_order)
    }

    pub fn delta(&self, ambient_order: usize) -> GroupHom {
        let d = self.subgroup(ambient_order);
        GroupHom::from_fn(&d, ambient_order, |x| self.value(x).unwrap())
    }

    /// Elements of `D` on which `δ` is trivial, i.e. the kernel of `δ`.
    pub fn kernel(&self, fibre: &FiniteGroup) -> Vec<Elem> {
        self.pairs().filter(|&(_, v)| v == fibre.identity()).map(|(x, _)| x).collect()
    }
}

/// The ambient product group and fibre for a family of monomial sets.
pub struct FibredSpace {
    product: ProductGroup,
    fibre: Arc<FiniteGroup>,
    subgroups: OnceLock<Result<Vec<Subgroup>>>,
    classes: OnceLock<Result<Vec<Subcharacter>>>,
}

pub type Space = Arc<FibredSpace>;

impl std::fmt::Debug for FibredSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<&str> = self.product.factors().iter().map(|g| g.name()).collect();
        write!(f, "FibredSpace({} | {})", names.join("x"), self.fibre.name())
    }
}

impl FibredSpace {
    pub fn new(factors: Vec<Arc<FiniteGroup>>, fibre: Arc<FiniteGroup>) -> Result<Space> {
        if !fibre.is_abelian() {
            return Err(Error::NonAbelianFibre);
        }
        Ok(Arc::new(Self {
            product: ProductGroup::new(factors),
            fibre,
            subgroups: OnceLock::new(),
            classes: OnceLock::new(),
        }))
    }

    /// The space of `B¹_C(G)`.
    pub fn single(group: Arc<FiniteGroup>, fibre: Arc<FiniteGroup>) -> Result<Space> {
        Self::new(vec![group], fibre)
    }

    /// The space of `B¹_C(G×H)`, the fibred `(G, H)`-bisets.
    pub fn biset(left: Arc<FiniteGroup>, right: Arc<FiniteGroup>, fibre: Arc<FiniteGroup>) -> Result<Space> {
        Self::new(vec![left, right], fibre)
    }

    pub fn product(&self) -> &ProductGroup {
        &self.product
    }

    pub fn ambient(&self) -> &FiniteGroup {
        self.product.group()
    }

    pub fn ambient_arc(&self) -> &Arc<FiniteGroup> {
        self.product.group_arc()
    }

    pub fn fibre(&self) -> &Arc<FiniteGroup> {
        &self.fibre
    }

    pub fn factors(&self) -> &[Arc<FiniteGroup>] {
        self.product.factors()
    }

    pub fn left(&self) -> &Arc<FiniteGroup> {
        self.product.factor(0)
    }

    pub fn right(&self) -> &Arc<FiniteGroup> {
        self.product.factor(self.product.arity() - 1)
    }

    pub fn is_biset(&self) -> bool {
        self.product.arity() == 2
    }

    pub fn same_as(&self, other: &FibredSpace) -> bool {
        std::ptr::eq(self, other)
            || (self.product == other.product && (Arc::ptr_eq(&self.fibre, &other.fibre) || self.fibre == other.fibre))
    }

    /// Checks that `s` is a subgroup with a homomorphism into the fibre.
    pub fn validate(&self, s: &Subcharacter) -> Result<()> {
        let g = self.ambient();
        let d = Subgroup::from_elements(g, s.elements())?;
        if s.values.len() != d.order() || s.values.iter().any(|&v| v >= self.fibre.order()) {
            return Err(Error::NotHomomorphism("character values out of range".into()));
        }
        if !s.delta(g.order()).is_homomorphism(g, &self.fibre) {
            return Err(Error::NotHomomorphism("δ is not multiplicative".into()));
        }
        Ok(())
    }

    /// `^a(D, δ) = (aDa⁻¹, x ↦ δ(a⁻¹xa))`.
    pub fn conjugate(&self, a: Elem, s: &Subcharacter) -> Subcharacter {
        let g = self.ambient();
        Subcharacter::from_pairs(s.pairs().map(|(x, v)| (g.conj(a, x), v)).collect())
    }

    /// The least pair in the conjugacy orbit of `s`.
    pub fn canonicalize(&self, s: &Subcharacter) -> Subcharacter {
        let g = self.ambient();
        let n = g.order();
        let mut mask = FixedBitSet::with_capacity(n);
        let mut current: Vec<Elem> = Vec::with_capacity(s.order());
        let mut best: Vec<Elem> = Vec::new();
        let mut movers: Vec<Elem> = Vec::new();
        for a in g.elements() {
            mask.clear();
            for &x in &s.elements {
                mask.insert(g.conj(a, x));
            }
            current.clear();
            current.extend(mask.ones());
            match if best.is_empty() { Ordering::Less } else { current.cmp(&best) } {
                Ordering::Less => {
                    std::mem::swap(&mut best, &mut current);
                    movers.clear();
                    movers.push(a);
                }
                Ordering::Equal => movers.push(a),
                Ordering::Greater => {}
            }
        }
        let mut position = vec![usize::MAX; n];
        for (i, &x) in best.iter().enumerate() {
            position[x] = i;
        }
        let mut best_values: Option<Vec<Elem>> = None;
        let mut values = vec![0; best.len()];
        for &a in &movers {
            for (x, v) in s.pairs() {
                values[position[g.conj(a, x)]] = v;
            }
            if best_values.as_ref().is_none_or(|b| values < *b) {
                best_values = Some(values.clone());
            }
        }
        Subcharacter { elements: best, values: best_values.unwrap() }
    }

    pub fn is_canonical(&self, s: &Subcharacter) -> bool {
        self.canonicalize(s) == *s
    }

    /// All subgroups of the ambient group (cached).
    pub fn subgroups(&self) -> Result<&[Subgroup]> {
        self.subgroups.get_or_init(|| self.ambient().subgroups()).as_deref().map_err(Clone::clone)
    }

    /// Every homomorphism from the subgroup `d` into the fibre.
    pub fn characters(&self, d: &Subgroup) -> Vec<Subcharacter> {
        homomorphisms(self.ambient(), d, &self.fibre).iter().map(Subcharacter::from_hom).collect()
    }

    /// One canonical representative per conjugacy class of subcharacters,
    /// sorted. These index the ℤ-basis of the monomial Burnside ring.
    pub fn classes(&self) -> Result<&[Subcharacter]> {
        self.classes.get_or_init(|| self.compute_classes()).as_deref().map_err(Clone::clone)
    }

    fn compute_classes(&self) -> Result<Vec<Subcharacter>> {
        let g = self.ambient();
        let mut out = Vec::new();
        for d in self.subgroups()? {
            let least = g.elements().all(|a| g.conjugate_subgroup(a, d) >= *d);
            if !least {
                continue;
            }
            let normalizer = g.normalizer(d);
            let mut position = vec![usize::MAX; g.order()];
            for (i, &x) in d.elements().iter().enumerate() {
                position[x] = i;
            }
            let mut moved = vec![0; d.order()];
            for s in self.characters(d) {
                let minimal = normalizer.elements().iter().all(|&a| {
                    for (x, v) in s.pairs() {
                        moved[position[g.conj(a, x)]] = v;
                    }
                    moved >= s.values
                });
                if minimal {
                    out.push(s);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// The class of `C` over the ambient: trivial subgroup, trivial character.
    pub fn point_class(&self) -> Subcharacter {
        Subcharacter::trivial(&Subgroup::trivial(self.ambient()), &self.fibre)
    }

    /// `Δ(G) ≤ G×G` with the trivial character (the identity morphism).
    pub fn diagonal_class(&self) -> Result<Subcharacter> {
        if !self.is_biset() || self.left() != self.right() {
            return Err(Error::FactorMismatch("identity needs a G×G space".into()));
        }
        let elems: Vec<Elem> = self.left().elements().map(|x| self.product.pack(&[x, x])).collect();
        let d = Subgroup::from_sorted(elems, self.ambient().order());
        Ok(Subcharacter::trivial(&d, &self.fibre))
    }
}

/// The basis of `B¹_C(G)` (or of any space): one canonical subcharacter per
/// conjugacy class.
pub fn subcharacter_classes(space: &FibredSpace) -> Result<Vec<Subcharacter>> {
    space.classes().map(<[Subcharacter]>::to_vec)
}
