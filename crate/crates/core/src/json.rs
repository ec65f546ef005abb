//! JSON wire formats for classes and elements.
//!
//! Elements of a product are arrays of coordinate labels, e.g. `["x", "a"]`
//! for `(x, a) ∈ Q8×D8`; fibre values are fibre labels.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fibred::{FibredElement, FibredSpace, Space, Subcharacter};
use crate::group::{group_from_spec, Elem, FiniteGroup};

/// A single class `(D, δ)` over the space named by `group_spec`: one group,
/// or two factors separated by `|` as in `Q8|D8`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubcharacterJson {
    pub group_spec: String,
    pub subgroup_elements: Vec<Vec<String>>,
    pub delta_images: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    #[serde(rename = "D")]
    pub d: Vec<Vec<String>>,
    pub delta: Vec<String>,
    pub coeff: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibredElementJson {
    pub left: String,
    pub right: String,
    pub fibre: String,
    pub terms: Vec<TermJson>,
}

fn encode(space: &FibredSpace, s: &Subcharacter) -> (Vec<Vec<String>>, Vec<String>) {
    let product = space.product();
    let d = s
        .elements()
        .iter()
        .map(|&e| product.coords(e).iter().enumerate().map(|(i, &c)| product.factor(i).label(c).to_string()).collect())
        .collect();
    let delta = s.values().iter().map(|&v| space.fibre().label(v).to_string()).collect();
    (d, delta)
}

fn lookup(group: &FiniteGroup, label: &str) -> Result<Elem> {
    group
        .element_by_label(label)
        .ok_or_else(|| Error::Malformed(format!("{label:?} is not an element of {}", group.name())))
}

fn decode(space: &FibredSpace, d: &[Vec<String>], delta: &[String]) -> Result<Subcharacter> {
    if d.len() != delta.len() {
        return Err(Error::Malformed(format!("{} elements but {} values", d.len(), delta.len())));
    }
    let product = space.product();
    let pairs = d
        .iter()
        .zip(delta)
        .map(|(coords, v)| {
            if coords.len() != product.arity() {
                return Err(Error::Malformed(format!(
                    "expected {} coordinates, got {}",
                    product.arity(),
                    coords.len()
                )));
            }
            let packed: Vec<Elem> =
                coords.iter().enumerate().map(|(i, l)| lookup(product.factor(i), l)).collect::<Result<_>>()?;
            Ok((product.pack(&packed), lookup(space.fibre(), v)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut seen: Vec<Elem> = pairs.iter().map(|p| p.0).collect();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != pairs.len() {
        return Err(Error::Malformed("repeated subgroup element".into()));
    }
    let s = Subcharacter::from_pairs(pairs);
    space.validate(&s)?;
    Ok(s)
}

/// A `G`-space for a plain spec, a `G×H`-space for `"G|H"`.
pub fn space_from_spec(group_spec: &str, fibre: Arc<FiniteGroup>) -> Result<Space> {
    let factors = group_spec.split('|').map(|f| group_from_spec(f.trim()).map(Arc::new)).collect::<Result<Vec<_>>>()?;
    if factors.len() > 2 {
        return Err(Error::Malformed(format!("{group_spec:?} has more than two factors")));
    }
    FibredSpace::new(factors, fibre)
}

pub fn subcharacter_to_json(space: &FibredSpace, s: &Subcharacter) -> SubcharacterJson {
    let (subgroup_elements, delta_images) = encode(space, s);
    let group_spec = space.factors().iter().map(|f| f.name()).collect::<Vec<_>>().join("|");
    SubcharacterJson { group_spec, subgroup_elements, delta_images }
}

pub fn subcharacter_from_json(space: &FibredSpace, json: &SubcharacterJson) -> Result<Subcharacter> {
    decode(space, &json.subgroup_elements, &json.delta_images)
}

pub fn element_to_json(x: &FibredElement) -> FibredElementJson {
    let space = x.space();
    let terms = x
        .terms()
        .iter()
        .map(|(s, &coeff)| {
            let (d, delta) = encode(space, s);
            TermJson { d, delta, coeff }
        })
        .collect();
    FibredElementJson {
        left: space.left().name().to_string(),
        right: space.right().name().to_string(),
        fibre: space.fibre().name().to_string(),
        terms,
    }
}

/// Parses the groups by spec and builds a fresh space.
pub fn element_from_json(json: &FibredElementJson) -> Result<FibredElement> {
    let left = Arc::new(group_from_spec(&json.left)?);
    let right = Arc::new(group_from_spec(&json.right)?);
    let fibre = Arc::new(group_from_spec(&json.fibre)?);
    element_from_json_in(&FibredSpace::biset(left, right, fibre)?, json)
}

/// Parses into an existing space (so that elements sharing groups compose).
pub fn element_from_json_in(space: &Space, json: &FibredElementJson) -> Result<FibredElement> {
    let mut out = FibredElement::zero(space.clone());
    for t in &json.terms {
        out.add_term(&decode(space, &t.d, &t.delta)?, t.coeff);
    }
    Ok(out)
}
