//! Seeded property suites shared by the CLI `verify` command and the
//! acceptance tests. Every check is exact; a failure records a readable
//! description of the offending instance.

use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fibred::{
    bouc_factorize, compose, compose_in, compose_oracle, is_idempotent, ring_product, ring_product_oracle, tensor,
    tensor_oracle, BisetSet, FibredElement, FibredSpace, GreenCheck, MonomialSet, Space, Subcharacter,
    TransitiveFibredBiset,
};
use crate::group::{direct_product, group_from_spec, homomorphisms, small_groups_catalog, FiniteGroup, Subgroup};
use crate::hat::{frattini_criterion, verify_hat_vs_quotient, y_vanishing, IdealSearch};

/// One property over a number of instances.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), cases: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.cases > 0
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn merge(mut self, outcomes: Vec<(bool, String)>) -> Self {
        for (ok, what) in outcomes {
            self.record(ok, || what);
        }
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Axioms,
    Oracle,
    Prime,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "axioms" => Ok(Suite::Axioms),
            "oracle" => Ok(Suite::Oracle),
            "prime" => Ok(Suite::Prime),
            "all" => Ok(Suite::All),
            _ => Err(Error::Malformed(format!("unknown suite {s:?} (axioms | oracle | prime | all)"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

fn arc(spec: &str) -> Result<Arc<FiniteGroup>> {
    group_from_spec(spec).map(Arc::new)
}

/// Catalog groups up to `max_order` plus a fibre list, for sampling.
pub struct Sampler {
    rng: ChaCha8Rng,
    groups: Vec<Arc<FiniteGroup>>,
}

impl Sampler {
    pub fn new(seed: u64, max_order: usize) -> Result<Self> {
        let groups = small_groups_catalog(max_order)?.into_iter().map(|e| e.group).collect();
        Ok(Self { rng: ChaCha8Rng::seed_from_u64(seed), groups })
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn group(&mut self) -> Arc<FiniteGroup> {
        self.groups.choose(&mut self.rng).expect("catalog is non-empty").clone()
    }

    pub fn pick<T: Clone>(&mut self, items: &[T]) -> T {
        items.choose(&mut self.rng).expect("non-empty choice").clone()
    }

    /// A random subgroup generated by one to three random elements.
    pub fn subgroup(&mut self, g: &FiniteGroup) -> Subgroup {
        let k = self.rng.gen_range(1..=3);
        let gens: Vec<usize> = (0..k).map(|_| self.rng.gen_range(0..g.order())).collect();
        Subgroup::generated(g, &gens)
    }

    /// A random canonical class: random subgroup, random character on it.
    pub fn class(&mut self, space: &FibredSpace) -> Subcharacter {
        let d = self.subgroup(space.ambient());
        self.character_on(space, &d)
    }

    fn character_on(&mut self, space: &FibredSpace, d: &Subgroup) -> Subcharacter {
        let homs = homomorphisms(space.ambient(), d, space.fibre());
        let h = homs.choose(&mut self.rng).expect("the trivial character exists");
        space.canonicalize(&Subcharacter::from_hom(h))
    }

    /// A random class with `p₁(D) = G` and `p₂(D) = H`.
    pub fn full_class(&mut self, space: &FibredSpace) -> Subcharacter {
        let product = space.product();
        let (ng, nh) = (space.left().order(), space.right().order());
        loop {
            let k = self.rng.gen_range(1..=4);
            let gens: Vec<usize> = (0..k).map(|_| self.rng.gen_range(0..product.group().order())).collect();
            let d = Subgroup::generated(product.group(), &gens);
            let full = product.projection(&d, &[0]).map(|p| p.order() == ng).unwrap_or(false)
                && product.projection(&d, &[1]).map(|p| p.order() == nh).unwrap_or(false);
            if full {
                return self.character_on(space, &d);
            }
        }
    }

    pub fn biset_space(&mut self, fibre: &Arc<FiniteGroup>) -> Result<Space> {
        let (g, h) = (self.group(), self.group());
        FibredSpace::biset(g, h, fibre.clone())
    }
}

fn describe(space: &FibredSpace, s: &Subcharacter) -> String {
    format!(
        "{}×{} over {}: |D| = {}, D = {:?}, δ = {:?}",
        space.left().name(),
        space.right().name(),
        space.fibre().name(),
        s.order(),
        s.elements(),
        s.values()
    )
}

/// `compose = compose_oracle` on `n` random pairs over groups of order at
/// most `max_order`, fibres drawn from `fibres`.
pub fn check_oracle_pairs(seed: u64, n: usize, max_order: usize, fibres: &[&str]) -> Result<Check> {
    let fibres: Vec<Arc<FiniteGroup>> = fibres.iter().map(|f| arc(f)).collect::<Result<_>>()?;
    let mut sampler = Sampler::new(seed, max_order)?;
    let mut instances = Vec::with_capacity(n);
    for _ in 0..n {
        let c = sampler.pick(&fibres);
        let (g, h, k) = (sampler.group(), sampler.group(), sampler.group());
        let gh = FibredSpace::biset(g, h.clone(), c.clone())?;
        let hk = FibredSpace::biset(h, k, c)?;
        let x = sampler.class(&gh);
        let y = sampler.class(&hk);
        instances.push((gh, x, hk, y));
    }
    let outcomes = instances
        .par_iter()
        .map(|(gh, x, hk, y)| {
            let (xe, ye) = (FibredElement::basis(gh.clone(), x), FibredElement::basis(hk.clone(), y));
            let ok = compose(&xe, &ye)?.terms() == compose_oracle(&xe, &ye)?.terms();
            Ok((ok, format!("{} ∘ {}", describe(gh, x), describe(hk, y))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Check::new("compose = compose_oracle").merge(outcomes))
}

/// `Δ(G) ∘ X = X = X ∘ Δ(G)` for every class `X` over `G×G`, for every
/// catalog group up to `max_order` and every listed fibre.
pub fn check_identity_laws(max_order: usize, fibres: &[&str]) -> Result<Check> {
    let mut check = Check::new("identity laws on every class over G×G");
    for entry in small_groups_catalog(max_order)? {
        for f in fibres {
            let g = entry.group.clone();
            let space = FibredSpace::biset(g.clone(), g, arc(f)?)?;
            let id = FibredElement::identity(space.clone())?;
            let outcomes = space
                .classes()?
                .par_iter()
                .map(|s| {
                    let x = FibredElement::basis(space.clone(), s);
                    let ok = compose_in(&space, &id, &x)? == x && compose_in(&space, &x, &id)? == x;
                    Ok((ok, describe(&space, s)))
                })
                .collect::<Result<Vec<_>>>()?;
            check = check.merge(outcomes);
        }
    }
    Ok(check)
}

/// `(X∘Y)∘Z = X∘(Y∘Z)` on `n` random composable triples.
pub fn check_associativity(seed: u64, n: usize, max_order: usize, fibres: &[&str]) -> Result<Check> {
    let fibres: Vec<Arc<FiniteGroup>> = fibres.iter().map(|f| arc(f)).collect::<Result<_>>()?;
    let mut sampler = Sampler::new(seed, max_order)?;
    let mut check = Check::new("associativity of ∘");
    for _ in 0..n {
        let c = sampler.pick(&fibres);
        let gs: Vec<Arc<FiniteGroup>> = (0..4).map(|_| sampler.group()).collect();
        let spaces: Vec<Space> =
            (0..3).map(|i| FibredSpace::biset(gs[i].clone(), gs[i + 1].clone(), c.clone())).collect::<Result<_>>()?;
        let xs: Vec<FibredElement> =
            spaces.iter().map(|s| FibredElement::basis(s.clone(), &sampler.class(s))).collect();
        let left = compose(&compose(&xs[0], &xs[1])?, &xs[2])?;
        let right = compose(&xs[0], &compose(&xs[1], &xs[2])?)?;
        check.record(left.terms() == right.terms(), || {
            format!("{}×{}×{}×{} over {}", gs[0].name(), gs[1].name(), gs[2].name(), gs[3].name(), c.name())
        });
    }
    Ok(check)
}

/// `(X∘Y)° = Y°∘X°` on `n` random pairs.
pub fn check_opposite(seed: u64, n: usize, max_order: usize, fibres: &[&str]) -> Result<Check> {
    let fibres: Vec<Arc<FiniteGroup>> = fibres.iter().map(|f| arc(f)).collect::<Result<_>>()?;
    let mut sampler = Sampler::new(seed, max_order)?;
    let mut check = Check::new("(X∘Y)° = Y°∘X°");
    for _ in 0..n {
        let c = sampler.pick(&fibres);
        let (g, h, k) = (sampler.group(), sampler.group(), sampler.group());
        let gh = FibredSpace::biset(g, h.clone(), c.clone())?;
        let hk = FibredSpace::biset(h, k, c)?;
        let x = TransitiveFibredBiset::canonical_from(gh.clone(), &sampler.class(&gh));
        let y = TransitiveFibredBiset::canonical_from(hk.clone(), &sampler.class(&hk));
        let xy = compose(&x.to_element(), &y.to_element())?;
        let kg = xy.space().swapped()?;
        let mut lhs = FibredElement::zero(kg.clone());
        for (t, coeff) in xy.transitive_terms() {
            lhs.add_term(t.opposite_in(&kg).subcharacter(), coeff);
        }
        let rhs = compose(&y.opposite()?.to_element(), &x.opposite()?.to_element())?;
        check.record(lhs.terms() == rhs.terms(), || {
            format!("{} with {}", describe(&gh, x.subcharacter()), describe(&hk, y.subcharacter()))
        });
    }
    Ok(check)
}

/// `X∘X°` is idempotent whenever both projections of `D` are full.
pub fn check_full_projection_idempotents(seed: u64, n: usize, max_order: usize, fibres: &[&str]) -> Result<Check> {
    let fibres: Vec<Arc<FiniteGroup>> = fibres.iter().map(|f| arc(f)).collect::<Result<_>>()?;
    let mut sampler = Sampler::new(seed, max_order)?;
    let mut check = Check::new("X∘X° idempotent for full projections");
    for _ in 0..n {
        let c = sampler.pick(&fibres);
        let space = sampler.biset_space(&c)?;
        let x = TransitiveFibredBiset::canonical_from(space.clone(), &sampler.full_class(&space));
        let w = compose(&x.to_element(), &x.opposite()?.to_element())?;
        check.record(is_idempotent(&w)?, || describe(&space, x.subcharacter()));
    }
    Ok(check)
}

fn bouc_recomposes(x: &TransitiveFibredBiset) -> Result<bool> {
    let f = bouc_factorize(x)?;
    let target = x.to_element();
    let left = compose(&f.left_elementary.to_element(), &f.beta1.to_element())?;
    let right = compose(&f.beta2.to_element(), &f.right_elementary.to_element())?;
    Ok(left.terms() == target.terms() && right.terms() == target.terms())
}

/// Both factorisations recompose on every class over `G×H` for all
/// catalog pairs up to `max_order`.
pub fn check_bouc_exhaustive(max_order: usize, fibre: &str) -> Result<Check> {
    let c = arc(fibre)?;
    let catalog = small_groups_catalog(max_order)?;
    let mut check = Check::new("both factorisations recompose on every class");
    for a in &catalog {
        for b in &catalog {
            let space = FibredSpace::biset(a.group.clone(), b.group.clone(), c.clone())?;
            let outcomes = space
                .classes()?
                .par_iter()
                .map(|s| {
                    let x = TransitiveFibredBiset::canonical_from(space.clone(), s);
                    Ok((bouc_recomposes(&x)?, describe(&space, s)))
                })
                .collect::<Result<Vec<_>>>()?;
            check = check.merge(outcomes);
        }
    }
    Ok(check)
}

/// The factorisations on `n` random classes.
pub fn check_bouc_random(seed: u64, n: usize, max_order: usize, fibres: &[&str]) -> Result<Check> {
    let fibres: Vec<Arc<FiniteGroup>> = fibres.iter().map(|f| arc(f)).collect::<Result<_>>()?;
    let mut sampler = Sampler::new(seed, max_order)?;
    let mut check = Check::new("factorisations recompose");
    for _ in 0..n {
        let c = sampler.pick(&fibres);
        let space = sampler.biset_space(&c)?;
        let s = sampler.class(&space);
        let x = TransitiveFibredBiset::canonical_from(space.clone(), &s);
        check.record(bouc_recomposes(&x)?, || describe(&space, &s));
    }
    Ok(check)
}

/// Tensor and ring product against their set-level oracles.
pub fn check_products(seed: u64, n: usize, max_order: usize, fibres: &[&str]) -> Result<Check> {
    let fibres: Vec<Arc<FiniteGroup>> = fibres.iter().map(|f| arc(f)).collect::<Result<_>>()?;
    let mut sampler = Sampler::new(seed, max_order)?;
    let mut check = Check::new("tensor and ring product = oracles");
    for _ in 0..n {
        let c = sampler.pick(&fibres);
        let (g, h) = (sampler.group(), sampler.group());
        let sg = FibredSpace::single(g.clone(), c.clone())?;
        let sh = FibredSpace::single(h, c)?;
        let x = FibredElement::basis(sg.clone(), &sampler.class(&sg));
        let y = FibredElement::basis(sh.clone(), &sampler.class(&sh));
        let z = FibredElement::basis(sg.clone(), &sampler.class(&sg));
        let ok = tensor(&x, &y)?.terms() == tensor_oracle(&x, &y)?.terms()
            && ring_product(&x, &z)? == ring_product_oracle(&x, &z)?;
        check.record(ok, || format!("{} and {}", g.name(), y.space().ambient().name()));
    }
    Ok(check)
}

fn random_biset(sampler: &mut Sampler, left: &Arc<FiniteGroup>, right: &Arc<FiniteGroup>) -> BisetSet {
    let (lr, _, _) = direct_product(left, right);
    let s = sampler.subgroup(&lr);
    let mut z = BisetSet::transitive(left.clone(), right.clone(), s.elements());
    if sampler.rng().gen_bool(0.5) {
        let t = sampler.subgroup(&lr);
        z = z.disjoint_union(&BisetSet::transitive(left.clone(), right.clone(), t.elements())).expect("same groups");
    }
    z
}

fn random_fibred_set(sampler: &mut Sampler, g: &Arc<FiniteGroup>, c: &Arc<FiniteGroup>) -> Result<MonomialSet> {
    let space = FibredSpace::single(g.clone(), c.clone())?;
    let s = sampler.class(&space);
    Ok(MonomialSet::coset_space(g.clone(), c.clone(), &s))
}

/// The absorption and functoriality identities on `n` random instances.
pub fn check_green(seed: u64, n: usize, max_order: usize, fibres: &[&str]) -> Result<Check> {
    let fibres: Vec<Arc<FiniteGroup>> = fibres.iter().map(|f| arc(f)).collect::<Result<_>>()?;
    let mut sampler = Sampler::new(seed, max_order)?;
    let mut check = Check::new("Green identities (absorption, functoriality)");
    for _ in 0..n {
        let c = sampler.pick(&fibres);
        let (l, g, k, h) = (sampler.group(), sampler.group(), sampler.group(), sampler.group());
        let z = random_biset(&mut sampler, &l, &g);
        let x = random_biset(&mut sampler, &k, &h);
        let t = random_fibred_set(&mut sampler, &g, &c)?;
        let y = random_fibred_set(&mut sampler, &h, &c)?;
        // W: a possibly non-free orbit (G×C)/S next to a free one.
        let (gc, _, _) = direct_product(&g, &c);
        let s = sampler.subgroup(&gc);
        let w = MonomialSet::transitive(g.clone(), c.clone(), s.elements()).disjoint_union(&t)?;
        let outcome = GreenCheck::run(&z, &t, &x, &y, &w)?;
        check.record(outcome.holds(), || {
            format!("L={} G={} K={} H={} C={}: {outcome:?}", l.name(), g.name(), k.name(), h.name(), c.name())
        });
    }
    Ok(check)
}

/// The quotient cross-check, Frattini criterion and Y-vanishing for each
/// `(G, C)` with `|C|` prime.
pub fn check_prime_structure(groups: &[&str], fibres: &[&str], catalog_max_order: usize) -> Result<Vec<Check>> {
    let mut hat = Check::new("Â(G): dimension formula and products = compose-then-reduce");
    let mut frattini = Check::new("Im ζ ⊆ Φ(G) iff every μ: G → C kills Im ζ");
    let mut vanish = Check::new("Y-classes vanish exactly off Φ(G)");
    for g in groups {
        for c in fibres {
            let (ga, ca) = (arc(g)?, arc(c)?);
            let r = verify_hat_vs_quotient(ga.clone(), ca.clone(), catalog_max_order)?;
            hat.record(r.passed(), || {
                format!(
                    "{g} over {c}: formula {} brute {} basis_agrees {} mismatches {}",
                    r.formula_dimension,
                    r.brute_dimension,
                    r.basis_agrees,
                    r.mismatches.len()
                )
            });
            for row in frattini_criterion(&ga, &ca)? {
                frattini.record(row.agrees(), || format!("{g} over {c}: {row:?}"));
            }
            for row in y_vanishing(ga.clone(), ca.clone(), catalog_max_order)? {
                vanish.record(row.agrees(), || format!("{g} over {c}: {row:?}"));
            }
        }
    }
    Ok(vec![hat, frattini, vanish])
}

/// For `|C|` prime and non-isomorphic `G`, `H` of equal order: every
/// summand of `X∘X°`, for every class `X` over `G×H`, lies in `I(G)`.
pub fn check_no_shared_minimal_group(g: &str, h: &str, fibre: &str, catalog_max_order: usize) -> Result<Check> {
    let (ga, ha, c) = (arc(g)?, arc(h)?, arc(fibre)?);
    let gh = FibredSpace::biset(ga.clone(), ha, c.clone())?;
    let hg = gh.swapped()?;
    let search = IdealSearch::new(ga, c, catalog_max_order)?;
    let gg = search.square().clone();
    let outcomes = gh
        .classes()?
        .par_iter()
        .map(|s| {
            let x = TransitiveFibredBiset::canonical_from(gh.clone(), s);
            let w = compose_in(&gg, &x.to_element(), &x.opposite_in(&hg).to_element())?;
            let mut ok = true;
            for class in w.terms().keys() {
                ok &= search.contains(class)?;
            }
            Ok((ok, describe(&gh, s)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Check::new(format!("X∘X° ∈ I({g}) for every X over {g}×{h}, C = {fibre}")).merge(outcomes))
}

/// Runs a suite at CLI scale. Deterministic in `seed`.
pub fn run_suite(suite: Suite, seed: u64, catalog_max_order: usize) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let bound = catalog_max_order.min(8);
    if matches!(suite, Suite::Axioms | Suite::All) {
        checks.push(check_identity_laws(bound, &["C2", "C4"])?);
        checks.push(check_associativity(seed, 100, bound.min(6), &["C2", "C3", "C4"])?);
        checks.push(check_opposite(seed, 100, bound, &["C2", "C3", "C4"])?);
        checks.push(check_full_projection_idempotents(seed, 100, bound, &["C2", "C3", "C4"])?);
        checks.push(check_bouc_random(seed, 200, bound, &["C2", "C3", "C4"])?);
    }
    if matches!(suite, Suite::Oracle | Suite::All) {
        checks.push(check_oracle_pairs(seed, 500, bound, &["C2", "C3", "C4"])?);
        checks.push(check_products(seed, 100, bound.min(4), &["C2", "C3", "C4"])?);
        checks.push(check_green(seed, 50, bound.min(4), &["C2", "C3"])?);
    }
    if matches!(suite, Suite::Prime | Suite::All) {
        checks.extend(check_prime_structure(&["C2", "C3", "C4", "C2xC2", "S3"], &["C2", "C3"], catalog_max_order)?);
        if catalog_max_order >= 7 {
            checks.push(check_no_shared_minimal_group("Q8", "D8", "C2", catalog_max_order)?);
        }
    }
    Ok(SuiteReport { suite, seed, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampler_is_deterministic() {
        let space = FibredSpace::biset(arc("D8").unwrap(), arc("Q8").unwrap(), arc("C4").unwrap()).unwrap();
        let draw = |seed| {
            let mut s = Sampler::new(seed, 8).unwrap();
            (0..5).map(|_| s.class(&space)).collect::<Vec<_>>()
        };
        assert_eq!(draw(3), draw(3));
        let mut s = Sampler::new(1, 8).unwrap();
        let full = s.full_class(&space);
        let d = full.subgroup(space.ambient().order());
        assert_eq!(space.product().projection(&d, &[0]).unwrap().order(), 8);
        assert_eq!(space.product().projection(&d, &[1]).unwrap().order(), 8);
    }

    #[test]
    fn small_checks_pass() {
        assert!(check_oracle_pairs(7, 20, 6, &["C2", "C3"]).unwrap().passed());
        assert!(check_associativity(7, 5, 4, &["C2"]).unwrap().passed());
        assert!(check_opposite(7, 10, 6, &["C4"]).unwrap().passed());
        assert!(check_full_projection_idempotents(7, 10, 6, &["C2", "C4"]).unwrap().passed());
        assert!(check_bouc_random(7, 10, 6, &["C3"]).unwrap().passed());
        assert!(check_products(7, 5, 4, &["C2"]).unwrap().passed());
        assert!(check_green(7, 5, 3, &["C2"]).unwrap().passed());
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("bogus".parse::<Suite>().is_err());
    }
}
