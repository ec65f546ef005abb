use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, GroupHom, Subgroup};

use super::{FibredSpace, Space, Subcharacter, TransitiveFibredBiset};

/// The five elementary bisets, each with its defining data. Quotients and
/// subgroups are passed as explicit groups with the connecting map so the
/// resulting space has the exact factors the caller composes with.
pub enum Elementary<'a> {
    /// `Ind^G_E` over `G×E`; `embedding[i]` is the element of `G` for `i ∈ E`.
    Ind { group: &'a Arc<FiniteGroup>, sub: &'a Arc<FiniteGroup>, embedding: &'a [Elem] },
    /// `Res^G_E` over `E×G`.
    Res { group: &'a Arc<FiniteGroup>, sub: &'a Arc<FiniteGroup>, embedding: &'a [Elem] },
    /// `Inf^G_{G/N}` over `G×(G/N)`; `projection[g]` is the coset of `g`.
    Inf { group: &'a Arc<FiniteGroup>, quotient: &'a Arc<FiniteGroup>, projection: &'a [Elem] },
    /// `Def^G_{G/N}` over `(G/N)×G`.
    Def { group: &'a Arc<FiniteGroup>, quotient: &'a Arc<FiniteGroup>, projection: &'a [Elem] },
    /// `Iso(f)` over `H×G` for an isomorphism `f: G → H`.
    Iso { source: &'a Arc<FiniteGroup>, target: &'a Arc<FiniteGroup>, map: &'a GroupHom },
}

fn check_embedding(group: &FiniteGroup, sub: &FiniteGroup, embedding: &[Elem]) -> Result<()> {
    let ok = embedding.len() == sub.order()
        && embedding.iter().all(|&g| g < group.order())
        && sub
            .elements()
            .all(|a| sub.elements().all(|b| embedding[sub.mul(a, b)] == group.mul(embedding[a], embedding[b])))
        && {
            let mut seen = embedding.to_vec();
            seen.sort_unstable();
            seen.dedup();
            seen.len() == embedding.len()
        };
    if ok {
        Ok(())
    } else {
        Err(Error::Inconsistent("embedding is not an injective homomorphism".into()))
    }
}

fn check_projection(group: &FiniteGroup, quotient: &FiniteGroup, projection: &[Elem]) -> Result<()> {
    let ok = projection.len() == group.order()
        && projection.iter().all(|&q| q < quotient.order())
        && group.elements().all(|a| {
            group.elements().all(|b| projection[group.mul(a, b)] == quotient.mul(projection[a], projection[b]))
        })
        && quotient.elements().all(|q| projection.contains(&q));
    if ok {
        Ok(())
    } else {
        Err(Error::Inconsistent("projection is not a surjective homomorphism".into()))
    }
}

impl Elementary<'_> {
    /// `e(X) = X×C`, the fibred biset with trivial character.
    pub fn fibred(&self, fibre: &Arc<FiniteGroup>) -> Result<TransitiveFibredBiset> {
        let (left, right, pairs): (&Arc<FiniteGroup>, &Arc<FiniteGroup>, Vec<(Elem, Elem)>) = match *self {
            Elementary::Ind { group, sub, embedding } => {
                check_embedding(group, sub, embedding)?;
                (group, sub, sub.elements().map(|e| (embedding[e], e)).collect())
            }
            Elementary::Res { group, sub, embedding } => {
                check_embedding(group, sub, embedding)?;
                (sub, group, sub.elements().map(|e| (e, embedding[e])).collect())
            }
            Elementary::Inf { group, quotient, projection } => {
                check_projection(group, quotient, projection)?;
                (group, quotient, group.elements().map(|g| (g, projection[g])).collect())
            }
            Elementary::Def { group, quotient, projection } => {
                check_projection(group, quotient, projection)?;
                (quotient, group, group.elements().map(|g| (projection[g], g)).collect())
            }
            Elementary::Iso { source, target, map } => {
                let iso = map.domain().order() == source.order()
                    && source.order() == target.order()
                    && map.is_homomorphism(source, target)
                    && map.is_injective();
                if !iso {
                    return Err(Error::Inconsistent("Iso needs an isomorphism".into()));
                }
                (target, source, source.elements().map(|g| (map.apply(g), g)).collect())
            }
        };
        let space = FibredSpace::biset(left.clone(), right.clone(), fibre.clone())?;
        Ok(graph_class(space, pairs))
    }
}

/// The class of `{(a, b)}` (given as coordinate pairs) with trivial character.
fn graph_class(space: Space, pairs: Vec<(Elem, Elem)>) -> TransitiveFibredBiset {
    let product = space.product();
    let mut elems: Vec<Elem> = pairs.iter().map(|&(a, b)| product.pack(&[a, b])).collect();
    elems.sort_unstable();
    elems.dedup();
    let d = Subgroup::from_sorted(elems, space.ambient().order());
    let class = Subcharacter::trivial(&d, space.fibre());
    TransitiveFibredBiset::canonical_from(space, &class)
}

/// The two factorisations of a transitive `X = [D, δ]` over `G×H`:
/// `X = e(Ind^G_E Inf^E_{E′}) ∘ β₁` with `E′ = E/k₁(D_δ)`, and
/// `X = β₂ ∘ e(Def^F_{F′} Res^H_F)` with `F′ = F/k₂(D_δ)`.
#[derive(Clone, Debug)]
pub struct BoucFactorization {
    pub e_prime: Arc<FiniteGroup>,
    /// Over `G×E′`: `{(g, π(g)) : g ∈ E}`.
    pub left_elementary: TransitiveFibredBiset,
    /// Over `E′×H`: `{(π(g), h) : (g,h) ∈ D}` with `ω(π(g), h) = δ(g, h)`.
    pub beta1: TransitiveFibredBiset,
    pub f_prime: Arc<FiniteGroup>,
    /// Over `G×F′`: `{(g, π₂(h)) : (g,h) ∈ D}` with the induced character.
    pub beta2: TransitiveFibredBiset,
    /// Over `F′×H`: `{(π₂(h), h) : h ∈ F}`.
    pub right_elementary: TransitiveFibredBiset,
}

/// `p_i(D)` as a standalone group together with `π: p_i(D) → p_i(D)/k_i(D_δ)`,
/// returned as a dense map over the factor group.
fn section(space: &FibredSpace, x: &Subcharacter, side: usize) -> Result<(Arc<FiniteGroup>, Vec<Elem>)> {
    let product = space.product();
    let factor = product.factor(side);
    let other = 1 - side;
    let identity_other = product.factor(other).identity();
    let fibre = space.fibre();
    let proj = Subgroup::from_sorted(x.elements().iter().map(|&d| product.coord(d, side)).collect(), factor.order());
    let kernel: Vec<Elem> = x
        .pairs()
        .filter(|&(d, v)| product.coord(d, other) == identity_other && v == fibre.identity())
        .map(|(d, _)| proj.position(product.coord(d, side)).unwrap())
        .collect();
    let (as_group, embedding) = factor.subgroup_as_group(&proj, "E");
    let kernel = Subgroup::from_elements(&as_group, &kernel)?;
    let (quotient, projection) = as_group.quotient(&kernel)?;
    let mut dense = vec![usize::MAX; factor.order()];
    for (i, &g) in embedding.iter().enumerate() {
        dense[g] = projection[i];
    }
    let name = format!("{}/k", factor.name());
    Ok((Arc::new(quotient.with_name(name)), dense))
}

fn induced_class(space: Space, pairs: impl Iterator<Item = (Elem, Elem, Elem)>) -> Result<TransitiveFibredBiset> {
    let product = space.product().clone();
    let mut values = vec![usize::MAX; space.ambient().order()];
    for (a, b, v) in pairs {
        let e = product.pack(&[a, b]);
        if values[e] != usize::MAX && values[e] != v {
            return Err(Error::Inconsistent("factor character is not well defined".into()));
        }
        values[e] = v;
    }
    let pairs = values.iter().enumerate().filter(|(_, &v)| v != usize::MAX).map(|(e, &v)| (e, v)).collect();
    Ok(TransitiveFibredBiset::trusted(space, Subcharacter::from_pairs(pairs)))
}

pub fn bouc_factorize(x: &TransitiveFibredBiset) -> Result<BoucFactorization> {
    let space = x.space();
    if !space.is_biset() {
        return Err(Error::FactorMismatch("factorisation needs a two-factor space".into()));
    }
    let (g, h) = (space.left().clone(), space.right().clone());
    let fibre = space.fibre().clone();
    let product = space.product();
    let class = x.subcharacter();

    let (e_prime, pi) = section(space, class, 0)?;
    let left_space = FibredSpace::biset(g.clone(), e_prime.clone(), fibre.clone())?;
    let left_pairs = g.elements().filter(|&a| pi[a] != usize::MAX).map(|a| (a, pi[a])).collect();
    let left_elementary = graph_class(left_space, left_pairs);
    let beta1 = induced_class(
        FibredSpace::biset(e_prime.clone(), h.clone(), fibre.clone())?,
        class.pairs().map(|(d, v)| (pi[product.coord(d, 0)], product.coord(d, 1), v)),
    )?;

    let (f_prime, pi2) = section(space, class, 1)?;
    let right_space = FibredSpace::biset(f_prime.clone(), h.clone(), fibre.clone())?;
    let right_pairs = h.elements().filter(|&b| pi2[b] != usize::MAX).map(|b| (pi2[b], b)).collect();
    let right_elementary = graph_class(right_space, right_pairs);
    let beta2 = induced_class(
        FibredSpace::biset(g, f_prime.clone(), fibre)?,
        class.pairs().map(|(d, v)| (product.coord(d, 0), pi2[product.coord(d, 1)], v)),
    )?;

    Ok(BoucFactorization { e_prime, left_elementary, beta1, f_prime, beta2, right_elementary })
}
