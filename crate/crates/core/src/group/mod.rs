//! Finite groups given by Cayley tables.
//!
//! Elements are the indices `0..order`. Every group built by this crate puts
//! the identity at index 0, but tables supplied from outside may put it
//! anywhere; code should ask [`FiniteGroup::identity`].

mod build;
mod catalog;
mod hom;
mod spec;
mod subgroup;

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use build::{alternating, cyclic, dicyclic, dihedral, direct_product, symmetric};
pub use catalog::{small_groups_catalog, CatalogEntry, CATALOG_MAX_ORDER};
pub use hom::{automorphisms, homomorphisms, isomorphism, Automorphisms, GroupHom};
pub use spec::group_from_spec;
pub use subgroup::{Subgroup, DEFAULT_SUBGROUP_BOUND};

pub type Elem = usize;

/// Orders up to this bound get a full associativity check on construction.
pub const ASSOCIATIVITY_CHECK_BOUND: usize = 64;

#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<Elem>,
    inverse: Vec<Elem>,
    identity: Elem,
    labels: Vec<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

/// Two groups are equal when their tables agree; names and labels are cosmetic.
impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Builds a group from a row-major multiplication table, validating the
    /// group axioms.
    pub fn from_table(
        name: impl Into<String>,
        order: usize,
        table: Vec<Elem>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidTable("order must be positive".into()));
        }
        if table.len() != order * order {
            return Err(Error::InvalidTable(format!("expected {} entries, found {}", order * order, table.len())));
        }
        if let Some(bad) = table.iter().find(|&&x| x >= order) {
            return Err(Error::InvalidTable(format!("entry {bad} out of range")));
        }
        let mut seen = FixedBitSet::with_capacity(order);
        for a in 0..order {
            seen.clear();
            for b in 0..order {
                seen.insert(table[a * order + b]);
            }
            if seen.count_ones(..) != order {
                return Err(Error::InvalidTable(format!("row {a} is not a permutation")));
            }
            seen.clear();
            for b in 0..order {
                seen.insert(table[b * order + a]);
            }
            if seen.count_ones(..) != order {
                return Err(Error::InvalidTable(format!("column {a} is not a permutation")));
            }
        }
        let has_identity =
            (0..order).any(|e| (0..order).all(|x| table[e * order + x] == x && table[x * order + e] == x));
        if !has_identity {
            return Err(Error::InvalidTable("no identity element".into()));
        }
        if order <= ASSOCIATIVITY_CHECK_BOUND {
            for a in 0..order {
                for b in 0..order {
                    let ab = table[a * order + b];
                    for c in 0..order {
                        let bc = table[b * order + c];
                        if table[ab * order + c] != table[a * order + bc] {
                            return Err(Error::InvalidTable(format!("associativity fails at ({a}, {b}, {c})")));
                        }
                    }
                }
            }
        }
        let labels = match labels {
            Some(l) if l.len() != order => {
                return Err(Error::InvalidTable(format!("expected {order} labels, found {}", l.len())))
            }
            Some(l) => l,
            None => (0..order).map(|i| i.to_string()).collect(),
        };
        Ok(Self::assemble(name.into(), order, table, labels))
    }

    /// Assembles a group whose table is known to satisfy the axioms
    /// (products, quotients and subgroups of validated groups).
    pub(crate) fn assemble(name: String, order: usize, table: Vec<Elem>, labels: Vec<String>) -> Self {
        let identity =
            (0..order).find(|&e| (0..order).all(|x| table[e * order + x] == x)).expect("group table without identity");
        let mut inverse = vec![0; order];
        for a in 0..order {
            inverse[a] = (0..order).find(|&b| table[a * order + b] == identity).expect("group table without inverses");
        }
        Self { name, order, table, inverse, identity, labels }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a]
    }

    /// `g x g⁻¹`, written `^g x`.
    #[inline]
    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inverse[g])
    }

    pub fn pow(&self, a: Elem, k: usize) -> Elem {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element_by_label(&self, label: &str) -> Option<Elem> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted multiset of element orders.
    pub fn order_census(&self) -> Vec<usize> {
        let mut census: Vec<usize> = self.elements().map(|a| self.element_order(a)).collect();
        census.sort_unstable();
        census
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            order: self.order,
            table: self.table.chunks(self.order).map(<[Elem]>::to_vec).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_json(name: impl Into<String>, json: &GroupJson) -> Result<Self> {
        if json.table.len() != json.order || json.table.iter().any(|r| r.len() != json.order) {
            return Err(Error::InvalidTable("table is not order × order".into()));
        }
        let table = json.table.iter().flatten().copied().collect();
        let labels = (!json.labels.is_empty()).then(|| json.labels.clone());
        Self::from_table(name, json.order, table, labels)
    }
}

/// Wire form of a group: `{order, table, labels}` with `table[a][b] = a·b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub order: usize,
    pub table: Vec<Vec<Elem>>,
    #[serde(default)]
    pub labels: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_latin_table() {
        let err = FiniteGroup::from_table("bad", 2, vec![0, 1, 0, 1], None).unwrap_err();
        assert!(matches!(err, Error::InvalidTable(_)));
    }

    #[test]
    fn rejects_non_associative_loop() {
        // A Latin square with identity 0 that is not associative (order-5 loop).
        #[rustfmt::skip]
        let table = vec![
            0, 1, 2, 3, 4,
            1, 0, 3, 4, 2,
            2, 4, 0, 1, 3,
            3, 2, 4, 0, 1,
            4, 3, 1, 2, 0,
        ];
        let err = FiniteGroup::from_table("loop", 5, table, None).unwrap_err();
        assert!(matches!(err, Error::InvalidTable(m) if m.contains("associativity")));
    }

    #[test]
    fn json_round_trip() {
        let g = group_from_spec("S3").unwrap();
        let back = FiniteGroup::from_json("S3", &g.to_json()).unwrap();
        assert_eq!(g, back);
        assert_eq!(g.labels(), back.labels());
    }

    #[test]
    fn identity_need_not_be_zero() {
        // C2 with the identity stored at index 1.
        let g = FiniteGroup::from_table("C2'", 2, vec![1, 0, 0, 1], None).unwrap();
        assert_eq!(g.identity(), 1);
        assert_eq!(g.inv(0), 0);
        assert_eq!(g.element_order(0), 2);
    }
}
