use std::sync::Arc;

use super::{group_from_spec, FiniteGroup};
use crate::error::{Error, Result};

pub const CATALOG_MAX_ORDER: usize = 15;

/// One isomorphism class per line, ordered by group order.
const CATALOG_SPECS: &[&str] = &[
    "C1", "C2", "C3", "C4", "C2xC2", "C5", "C6", "S3", "C7", "C8", "C4xC2", "C2xC2xC2", "D8", "Q8", "C9", "C3xC3",
    "C10", "D10", "C11", "C12", "C6xC2", "D12", "A4", "Dic12", "C13", "C14", "D14", "C15",
];

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub group: Arc<FiniteGroup>,
}

/// One group per isomorphism class of each order up to `max_order`.
pub fn small_groups_catalog(max_order: usize) -> Result<Vec<CatalogEntry>> {
    if max_order == 0 || max_order > CATALOG_MAX_ORDER {
        return Err(Error::CatalogRange(max_order));
    }
    CATALOG_SPECS
        .iter()
        .map(|spec| group_from_spec(spec).map(|g| (spec, g)))
        .filter(|r| r.as_ref().map_or(true, |(_, g)| g.order() <= max_order))
        .map(|r| r.map(|(spec, g)| CatalogEntry { name: spec.to_string(), group: Arc::new(g) }))
        .collect()
}
