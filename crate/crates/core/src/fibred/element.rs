use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

use super::{FibredSpace, MonomialSet, Space, Subcharacter};

/// A transitive `C`-fibred set `C_δ(G×H)/D` (or over a single group).
#[derive(Clone)]
pub struct TransitiveFibredBiset {
    space: Space,
    class: Subcharacter,
    canonical: bool,
}

impl fmt::Debug for TransitiveFibredBiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?} {:?}]", self.space, self.class)
    }
}

impl PartialEq for TransitiveFibredBiset {
    fn eq(&self, other: &Self) -> bool {
        self.space.same_as(&other.space) && self.class == other.class
    }
}

impl Eq for TransitiveFibredBiset {}

impl TransitiveFibredBiset {
    /// Validates `(D, δ)` and stores it as given.
    pub fn new(space: Space, class: Subcharacter) -> Result<Self> {
        space.validate(&class)?;
        let canonical = space.is_canonical(&class);
        Ok(Self { space, class, canonical })
    }

    /// Stores `(D, δ)` after canonicalising; no validation.
    pub fn canonical_from(space: Space, class: &Subcharacter) -> Self {
        let class = space.canonicalize(class);
        Self { space, class, canonical: true }
    }

    pub(crate) fn trusted(space: Space, class: Subcharacter) -> Self {
        Self { space, class, canonical: false }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn subcharacter(&self) -> &Subcharacter {
        &self.class
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn canonicalize(&self) -> Self {
        if self.canonical {
            return self.clone();
        }
        Self::canonical_from(self.space.clone(), &self.class)
    }

    pub fn to_element(&self) -> FibredElement {
        FibredElement::basis(self.space.clone(), &self.class)
    }

    pub fn to_monomial_set(&self) -> MonomialSet {
        MonomialSet::coset_space(self.space.ambient_arc().clone(), self.space.fibre().clone(), &self.class)
    }

    /// `X°` over `H×G`: `D° = {(h,g)}`, `δ°(h,g) = δ(g,h)⁻¹`.
    pub fn opposite(&self) -> Result<Self> {
        let target = self.space.swapped()?;
        Ok(self.opposite_in(&target))
    }

    /// As [`Self::opposite`], into an existing `H×G` space.
    pub fn opposite_in(&self, target: &Space) -> Self {
        let product = self.space.product();
        let fibre = self.space.fibre();
        let pairs = self
            .class
            .pairs()
            .map(|(x, v)| {
                let (g, h) = (product.coord(x, 0), product.coord(x, 1));
                (target.product().pack(&[h, g]), fibre.inv(v))
            })
            .collect();
        let class = Subcharacter::from_pairs(pairs);
        let canonical = self.canonical && target.is_canonical(&class);
        Self { space: target.clone(), class, canonical }
    }
}

/// An integer combination of transitive classes, keyed by canonical form.
#[derive(Clone)]
pub struct FibredElement {
    space: Space,
    terms: BTreeMap<Subcharacter, i64>,
}

impl fmt::Debug for FibredElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} ", self.space)?;
        f.debug_map().entries(self.terms.iter().map(|(k, v)| (v, k))).finish()
    }
}

impl PartialEq for FibredElement {
    fn eq(&self, other: &Self) -> bool {
        self.space.same_as(&other.space) && self.terms == other.terms
    }
}

impl Eq for FibredElement {}

impl FibredElement {
    pub fn zero(space: Space) -> Self {
        Self { space, terms: BTreeMap::new() }
    }

    pub fn basis(space: Space, class: &Subcharacter) -> Self {
        let mut out = Self::zero(space);
        out.add_term(class, 1);
        out
    }

    /// `[C(G×G)/Δ(G)]`, the identity morphism of `G`.
    pub fn identity(space: Space) -> Result<Self> {
        let class = space.diagonal_class()?;
        Ok(Self::basis(space, &class))
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn terms(&self) -> &BTreeMap<Subcharacter, i64> {
        &self.terms
    }

    /// Number of distinct classes with nonzero coefficient.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, class: &Subcharacter) -> i64 {
        self.terms.get(&self.space.canonicalize(class)).copied().unwrap_or(0)
    }

    /// Adds `coeff · [class]`, canonicalising the class first.
    pub fn add_term(&mut self, class: &Subcharacter, coeff: i64) {
        let key = self.space.canonicalize(class);
        self.add_canonical(key, coeff);
    }

    pub(crate) fn add_canonical(&mut self, key: Subcharacter, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        let mut out = self.clone();
        for (k, &v) in &other.terms {
            out.add_canonical(k.clone(), v);
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero(self.space.clone());
        for (key, &v) in &self.terms {
            out.add_canonical(key.clone(), k * v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1))
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if self.space.same_as(&other.space) {
            Ok(())
        } else if self.space.product() != other.space.product() {
            Err(Error::FactorMismatch("elements live over different groups".into()))
        } else {
            Err(Error::FibreMismatch)
        }
    }

    /// The single class if this is `1·[X]`.
    pub fn as_transitive(&self) -> Option<TransitiveFibredBiset> {
        match self.terms.iter().next() {
            Some((k, 1)) if self.terms.len() == 1 => {
                Some(TransitiveFibredBiset { space: self.space.clone(), class: k.clone(), canonical: true })
            }
            _ => None,
        }
    }

    pub fn transitive_terms(&self) -> impl Iterator<Item = (TransitiveFibredBiset, i64)> + '_ {
        self.terms
            .iter()
            .map(|(k, &v)| (TransitiveFibredBiset { space: self.space.clone(), class: k.clone(), canonical: true }, v))
    }

    /// Decomposes a C-free set into canonical classes.
    pub fn from_monomial_set(space: Space, set: &MonomialSet) -> Result<Self> {
        if **set.group() != *space.ambient() {
            return Err(Error::FactorMismatch("set is over a different group".into()));
        }
        if **set.fibre() != **space.fibre() {
            return Err(Error::FibreMismatch);
        }
        let mut out = Self::zero(space);
        for s in set.decompose()? {
            out.add_term(&s, 1);
        }
        Ok(out)
    }

    /// The disjoint union of coset spaces; needs non-negative coefficients.
    pub fn to_monomial_set(&self) -> Result<MonomialSet> {
        let group = self.space.ambient_arc().clone();
        let fibre = self.space.fibre().clone();
        let mut out = MonomialSet::empty(group.clone(), fibre.clone());
        for (k, &v) in &self.terms {
            if v < 0 {
                return Err(Error::Malformed("negative coefficient has no set".into()));
            }
            let orbit = MonomialSet::coset_space(group.clone(), fibre.clone(), k);
            for _ in 0..v {
                out = out.disjoint_union(&orbit)?;
            }
        }
        Ok(out)
    }
}

impl FibredSpace {
    /// The same fibre over the swapped product `H×G`.
    pub fn swapped(&self) -> Result<Space> {
        if !self.is_biset() {
            return Err(Error::FactorMismatch("opposite needs a two-factor space".into()));
        }
        FibredSpace::biset(self.right().clone(), self.left().clone(), self.fibre().clone())
    }
}
