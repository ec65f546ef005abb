//! Membership of transitive classes in the ideal `I(G)` of morphisms
//! `G → G` that factor through a strictly smaller group.
//!
//! A class `X = [D, δ]` over `G×G` is in the ideal when it is a summand of
//! some `a ∘ b` with `a` over `G×K`, `b` over `K×G` and `|K| < |G|`.
//! Two routes decide this:
//!
//! * the factorisation shortcut: if `p₁(D) ≠ G`, `p₂(D) ≠ G`, `k₁(D_δ) ≠ 1`
//!   or `k₂(D_δ) ≠ 1`, then [`bouc_factorize`] already passes through a
//!   smaller group and is the witness;
//! * otherwise an exhaustive search. Conjugating `b` moves any summand to the
//!   identity double coset and conjugating `a`, `b` by `G`-elements moves it
//!   to `D` itself, so it suffices to find `U ≤ G×K`, `V ≤ K×G` with
//!   `U * V = D` exactly and characters `μ`, `ν` with `μ(g,k)ν(k,g') =
//!   δ(g,g')` on the fibre product.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fibred::{bouc_factorize, compose_summands, FibredSpace, Space, Subcharacter, TransitiveFibredBiset};
use crate::group::{
    homomorphisms, isomorphism, small_groups_catalog, CatalogEntry, Elem, FiniteGroup, Subgroup, CATALOG_MAX_ORDER,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessRoute {
    /// Through `E′ = p₁(D)/k₁(D_δ)`.
    LeftQuotient,
    /// Through `F′ = p₂(D)/k₂(D_δ)`.
    RightQuotient,
    /// Found by the exhaustive `(U, V)` search.
    Search,
}

/// `X` is summand number `which_summand` of `a ∘ b`, with `|K| < |G|`.
#[derive(Clone, Debug)]
pub struct FactorizationWitness {
    pub k_name: String,
    pub k: Arc<FiniteGroup>,
    pub a: TransitiveFibredBiset,
    pub b: TransitiveFibredBiset,
    pub which_summand: usize,
    pub route: WitnessRoute,
}

impl FactorizationWitness {
    /// Recomputes the composition and checks the indicated summand.
    pub fn verify(&self, square: &FibredSpace, x: &Subcharacter) -> bool {
        let summands = compose_summands(
            self.a.space().product(),
            self.a.subcharacter(),
            self.b.space().product(),
            self.b.subcharacter(),
            square.fibre(),
        );
        self.k.order() < square.left().order()
            && summands.get(self.which_summand).is_some_and(|s| square.canonicalize(&s.class) == square.canonicalize(x))
    }
}

struct SubgroupData {
    sub: Subgroup,
    /// `p₁` into `G`.
    proj: Subgroup,
    /// `k₁` in `G`.
    kernel: Subgroup,
    /// `rows[k]` = positions in `sub` of the elements `(g, k)`.
    rows: Vec<Vec<usize>>,
    characters: OnceLock<Vec<Vec<Elem>>>,
}

struct FactorData {
    entry: CatalogEntry,
    gk: Space,
    kg: Space,
    subgroups: OnceLock<Result<Vec<SubgroupData>>>,
}

/// Ideal membership for one `(G, C)`, with cached per-`K` subgroup data and
/// cached answers.
pub struct IdealSearch {
    group: Arc<FiniteGroup>,
    square: Space,
    factors: Vec<FactorData>,
    cache: Mutex<HashMap<Subcharacter, bool>>,
}

impl IdealSearch {
    /// Requires a catalog covering every order below `|G|`.
    pub fn new(group: Arc<FiniteGroup>, fibre: Arc<FiniteGroup>, catalog_max_order: usize) -> Result<Self> {
        if catalog_max_order == 0 || catalog_max_order > CATALOG_MAX_ORDER {
            return Err(Error::CatalogRange(catalog_max_order));
        }
        let need = group.order() - 1;
        if need > catalog_max_order {
            return Err(Error::CatalogInsufficient { have: catalog_max_order, need: group.order() });
        }
        let catalog = if need == 0 { Vec::new() } else { small_groups_catalog(need)? };
        let square = FibredSpace::biset(group.clone(), group.clone(), fibre.clone())?;
        let factors = catalog
            .into_iter()
            .map(|entry| {
                Ok(FactorData {
                    gk: FibredSpace::biset(group.clone(), entry.group.clone(), fibre.clone())?,
                    kg: FibredSpace::biset(entry.group.clone(), group.clone(), fibre.clone())?,
                    entry,
                    subgroups: OnceLock::new(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { group, square, factors, cache: Mutex::new(HashMap::new()) })
    }

    pub fn square(&self) -> &Space {
        &self.square
    }

    /// The catalog groups searched (all orders below `|G|`).
    pub fn searched_groups(&self) -> Vec<&str> {
        self.factors.iter().map(|f| f.entry.name.as_str()).collect()
    }

    /// Cached yes/no answer.
    pub fn contains(&self, x: &Subcharacter) -> Result<bool> {
        let key = self.square.canonicalize(x);
        if let Some(&hit) = self.cache.lock().unwrap().get(&key) {
            return Ok(hit);
        }
        let found = self.witness(&key)?.is_some();
        self.cache.lock().unwrap().insert(key, found);
        Ok(found)
    }

    /// A factorisation witness for `x`, or `None` when `x ∉ I(G)`.
    pub fn witness(&self, x: &Subcharacter) -> Result<Option<FactorizationWitness>> {
        let x = self.square.canonicalize(x);
        if let Some(w) = self.quotient_witness(&x)? {
            return Ok(Some(w));
        }
        self.search_witness(&x)
    }

    /// Only the exhaustive route, skipping the shortcut (for cross-checks).
    pub fn search_witness(&self, x: &Subcharacter) -> Result<Option<FactorizationWitness>> {
        let x = self.square.canonicalize(x);
        let found: Vec<Option<FactorizationWitness>> =
            self.factors.par_iter().map(|f| self.search_through(f, &x)).collect::<Result<_>>()?;
        Ok(found.into_iter().flatten().next())
    }

    fn quotient_witness(&self, x: &Subcharacter) -> Result<Option<FactorizationWitness>> {
        let n = self.group.order();
        let tfb = TransitiveFibredBiset::canonical_from(self.square.clone(), x);
        let f = bouc_factorize(&tfb)?;
        let (route, quotient) = if f.e_prime.order() < n {
            (WitnessRoute::LeftQuotient, &f.e_prime)
        } else if f.f_prime.order() < n {
            (WitnessRoute::RightQuotient, &f.f_prime)
        } else {
            return Ok(None);
        };
        let factor = self
            .factors
            .iter()
            .find_map(|fd| {
                (fd.entry.group.order() == quotient.order())
                    .then(|| isomorphism(quotient, &fd.entry.group).map(|phi| (fd, phi)))
                    .flatten()
            })
            .expect("catalog holds every group of order below |G|");
        let (fd, phi) = factor;
        let (a, b) = match route {
            WitnessRoute::LeftQuotient => (&f.left_elementary, &f.beta1),
            _ => (&f.beta2, &f.right_elementary),
        };
        let a = transport(a, &fd.gk, |g, e| (g, phi.apply(e)));
        let b = transport(b, &fd.kg, |e, h| (phi.apply(e), h));
        let which =
            compose_summands(fd.gk.product(), a.subcharacter(), fd.kg.product(), b.subcharacter(), self.square.fibre())
                .iter()
                .position(|s| self.square.canonicalize(&s.class) == *x)
                .expect("factorisation recomposes to the class");
        Ok(Some(FactorizationWitness {
            k_name: fd.entry.name.clone(),
            k: fd.entry.group.clone(),
            a,
            b,
            which_summand: which,
            route,
        }))
    }

    fn subgroup_data<'a>(&self, fd: &'a FactorData) -> Result<&'a [SubgroupData]> {
        fd.subgroups
            .get_or_init(|| {
                let product = fd.gk.product();
                let nk = fd.entry.group.order();
                let subs = fd.gk.subgroups()?;
                Ok(subs
                    .iter()
                    .map(|s| {
                        let mut rows = vec![Vec::new(); nk];
                        for (i, &e) in s.elements().iter().enumerate() {
                            rows[product.coord(e, 1)].push(i);
                        }
                        SubgroupData {
                            proj: product.projection(s, &[0]).expect("index 0"),
                            kernel: product.kernel_part(s, &[0]).expect("index 0"),
                            sub: s.clone(),
                            rows,
                            characters: OnceLock::new(),
                        }
                    })
                    .collect())
            })
            .as_deref()
            .map_err(Clone::clone)
    }

    fn characters<'a>(&self, fd: &FactorData, u: &'a SubgroupData) -> &'a [Vec<Elem>] {
        u.characters.get_or_init(|| {
            homomorphisms(fd.gk.ambient(), &u.sub, self.square.fibre()).iter().map(|h| h.images()).collect()
        })
    }

    fn search_through(&self, fd: &FactorData, x: &Subcharacter) -> Result<Option<FactorizationWitness>> {
        let square = self.square.product();
        let d = x.subgroup(self.square.ambient().order());
        let p1 = square.projection(&d, &[0])?;
        let k1 = square.kernel_part(&d, &[0])?;
        let p2 = square.projection(&d, &[1])?;
        let k2 = square.kernel_part(&d, &[1])?;
        let subs = self.subgroup_data(fd)?;
        let us: Vec<&SubgroupData> = subs.iter().filter(|u| p1.is_subset(&u.proj) && u.kernel.is_subset(&k1)).collect();
        let ws: Vec<&SubgroupData> = subs.iter().filter(|w| p2.is_subset(&w.proj) && w.kernel.is_subset(&k2)).collect();
        if us.is_empty() || ws.is_empty() {
            return Ok(None);
        }
        let gk = fd.gk.product();
        let n = self.group.order();
        let fibre = self.square.fibre();
        let mut hit = vec![false; square.group().order()];
        let mut triples: Vec<(usize, usize, Elem)> = Vec::new();
        for u in &us {
            'pair: for w in &ws {
                // U * W° = {(g, g') : (g,k) ∈ U, (g',k) ∈ W}.
                triples.clear();
                let mut distinct = 0;
                for (k, row_u) in u.rows.iter().enumerate() {
                    for &iu in row_u {
                        let g = gk.coord(u.sub.elements()[iu], 0);
                        for &iw in &w.rows[k] {
                            let g2 = gk.coord(w.sub.elements()[iw], 0);
                            let Some(v) = x.value(g * n + g2) else {
                                for flag in hit.iter_mut() {
                                    *flag = false;
                                }
                                continue 'pair;
                            };
                            if !std::mem::replace(&mut hit[g * n + g2], true) {
                                distinct += 1;
                            }
                            triples.push((iu, iw, v));
                        }
                    }
                }
                for flag in hit.iter_mut() {
                    *flag = false;
                }
                if distinct != x.order() {
                    continue;
                }
                let mus = self.characters(fd, u);
                let omegas = self.characters(fd, w);
                for mu in mus {
                    for om in omegas {
                        if triples.iter().all(|&(iu, iw, v)| fibre.mul(mu[iu], om[iw]) == v) {
                            return Ok(Some(self.search_result(fd, x, u, mu, w, om)));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    fn search_result(
        &self,
        fd: &FactorData,
        x: &Subcharacter,
        u: &SubgroupData,
        mu: &[Elem],
        w: &SubgroupData,
        om: &[Elem],
    ) -> FactorizationWitness {
        let gk = fd.gk.product();
        let a_pairs = u.sub.elements().iter().copied().zip(mu.iter().copied()).collect();
        let a = TransitiveFibredBiset::trusted(fd.gk.clone(), Subcharacter::from_pairs(a_pairs));
        let b_pairs = w
            .sub
            .elements()
            .iter()
            .zip(om)
            .map(|(&e, &v)| (fd.kg.product().pack(&[gk.coord(e, 1), gk.coord(e, 0)]), v))
            .collect();
        let b = TransitiveFibredBiset::trusted(fd.kg.clone(), Subcharacter::from_pairs(b_pairs));
        let which = compose_summands(gk, a.subcharacter(), fd.kg.product(), b.subcharacter(), self.square.fibre())
            .iter()
            .position(|s| self.square.canonicalize(&s.class) == *x)
            .expect("search result recomposes to the class");
        FactorizationWitness {
            k_name: fd.entry.name.clone(),
            k: fd.entry.group.clone(),
            a,
            b,
            which_summand: which,
            route: WitnessRoute::Search,
        }
    }

    /// The canonical classes over `G×G` outside the ideal, sorted.
    pub fn quotient_basis(&self) -> Result<Vec<Subcharacter>> {
        let classes = self.square.classes()?;
        let keep: Vec<bool> = classes.par_iter().map(|s| self.contains(s).map(|c| !c)).collect::<Result<_>>()?;
        Ok(classes.iter().zip(keep).filter(|(_, k)| *k).map(|(s, _)| s.clone()).collect())
    }
}

fn transport(
    x: &TransitiveFibredBiset,
    target: &Space,
    f: impl Fn(Elem, Elem) -> (Elem, Elem),
) -> TransitiveFibredBiset {
    let src = x.space().product();
    let pairs = x
        .subcharacter()
        .pairs()
        .map(|(e, v)| {
            let (l, r) = f(src.coord(e, 0), src.coord(e, 1));
            (target.product().pack(&[l, r]), v)
        })
        .collect();
    TransitiveFibredBiset::trusted(target.clone(), Subcharacter::from_pairs(pairs))
}

/// `I(G)` membership for a class over `G×G`.
pub fn is_in_ideal(x: &TransitiveFibredBiset, catalog_max_order: usize) -> Result<Option<FactorizationWitness>> {
    let space = x.space();
    if !space.is_biset() || space.left() != space.right() {
        return Err(Error::FactorMismatch("ideal membership needs a G×G class".into()));
    }
    IdealSearch::new(space.left().clone(), space.fibre().clone(), catalog_max_order)?.witness(x.subcharacter())
}

/// `dim Â(G)` and its working basis: classes over `G×G` outside `I(G)`.
#[derive(Clone, Debug, Serialize)]
pub struct HatDimension {
    pub dimension: usize,
    #[serde(skip)]
    pub basis: Vec<Subcharacter>,
}

pub fn hat_dimension(
    group: Arc<FiniteGroup>,
    fibre: Arc<FiniteGroup>,
    catalog_max_order: usize,
) -> Result<HatDimension> {
    let basis = IdealSearch::new(group, fibre, catalog_max_order)?.quotient_basis()?;
    Ok(HatDimension { dimension: basis.len(), basis })
}
