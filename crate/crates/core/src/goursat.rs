//! Subgroups of direct products.
//!
//! A [`ProductGroup`] remembers its factors, so coordinate projections
//! `p_I(D)` and kernels `k_I(D)` are unambiguous for two- and three-factor
//! ambients alike. Elements are packed lexicographically on coordinates,
//! which agrees with [`direct_product`](crate::group::direct_product) for two
//! factors.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, GroupHom, Subgroup};

#[derive(Clone, Debug)]
pub struct ProductGroup {
    group: Arc<FiniteGroup>,
    factors: Vec<Arc<FiniteGroup>>,
    strides: Vec<usize>,
}

impl PartialEq for ProductGroup {
    fn eq(&self, other: &Self) -> bool {
        self.factors.len() == other.factors.len()
            && self.factors.iter().zip(&other.factors).all(|(a, b)| Arc::ptr_eq(a, b) || a == b)
    }
}

impl Eq for ProductGroup {}

impl ProductGroup {
    pub fn new(factors: Vec<Arc<FiniteGroup>>) -> Self {
        assert!(!factors.is_empty(), "product of no factors");
        let mut strides = vec![1; factors.len()];
        for i in (0..factors.len() - 1).rev() {
            strides[i] = strides[i + 1] * factors[i + 1].order();
        }
        let group = if factors.len() == 1 {
            factors[0].clone()
        } else {
            let order = strides[0] * factors[0].order();
            let mut table = Vec::with_capacity(order * order);
            let unpack =
                |x: Elem| -> Vec<Elem> { factors.iter().zip(&strides).map(|(f, &s)| (x / s) % f.order()).collect() };
            let coords: Vec<Vec<Elem>> = (0..order).map(unpack).collect();
            for a in &coords {
                for b in &coords {
                    let packed = factors
                        .iter()
                        .zip(&strides)
                        .zip(a.iter().zip(b))
                        .map(|((f, &s), (&x, &y))| f.mul(x, y) * s)
                        .sum();
                    table.push(packed);
                }
            }
            let labels = coords
                .iter()
                .map(|c| {
                    let parts: Vec<&str> = c.iter().zip(&factors).map(|(&x, f)| f.label(x)).collect();
                    format!("({})", parts.join(","))
                })
                .collect();
            let name = factors.iter().map(|f| f.name()).collect::<Vec<_>>().join("x");
            Arc::new(FiniteGroup::assemble(name, order, table, labels))
        };
        Self { group, factors, strides }
    }

    pub fn pair(left: Arc<FiniteGroup>, right: Arc<FiniteGroup>) -> Self {
        Self::new(vec![left, right])
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn factors(&self) -> &[Arc<FiniteGroup>] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> &Arc<FiniteGroup> {
        &self.factors[i]
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    #[inline]
    pub fn coord(&self, x: Elem, i: usize) -> Elem {
        (x / self.strides[i]) % self.factors[i].order()
    }

    pub fn coords(&self, x: Elem) -> Vec<Elem> {
        (0..self.arity()).map(|i| self.coord(x, i)).collect()
    }

    pub fn pack(&self, coords: &[Elem]) -> Elem {
        coords.iter().zip(&self.strides).map(|(&c, &s)| c * s).sum()
    }

    /// The element with `x` in coordinate `i` and identities elsewhere.
    pub fn embed(&self, i: usize, x: Elem) -> Elem {
        let mut c: Vec<Elem> = self.factors.iter().map(|f| f.identity()).collect();
        c[i] = x;
        self.pack(&c)
    }

    fn check_indices(&self, indices: &[usize]) -> Result<()> {
        let sorted = indices.windows(2).all(|w| w[0] < w[1]);
        if indices.is_empty() || !sorted || indices.iter().any(|&i| i >= self.arity()) {
            return Err(Error::InvalidIndexSet(indices.to_vec()));
        }
        Ok(())
    }

    /// The product of the selected factors, in order.
    pub fn subproduct(&self, indices: &[usize]) -> Result<ProductGroup> {
        self.check_indices(indices)?;
        Ok(ProductGroup::new(indices.iter().map(|&i| self.factors[i].clone()).collect()))
    }

    fn pack_selected(&self, x: Elem, indices: &[usize]) -> Elem {
        indices.iter().fold(0, |acc, &i| acc * self.factors[i].order() + self.coord(x, i))
    }

    fn selected_order(&self, indices: &[usize]) -> usize {
        indices.iter().map(|&i| self.factors[i].order()).product()
    }

    /// `p_I(D)`, as a subgroup of the product of the factors in `indices`.
    pub fn projection(&self, d: &Subgroup, indices: &[usize]) -> Result<Subgroup> {
        self.check_indices(indices)?;
        let elems = d.elements().iter().map(|&x| self.pack_selected(x, indices)).collect();
        Ok(Subgroup::from_sorted(elems, self.selected_order(indices)))
    }

    /// `k_I(D)`: the elements of `p_I(D)` whose extension by identities in
    /// the other coordinates lies in `D`.
    pub fn kernel_part(&self, d: &Subgroup, indices: &[usize]) -> Result<Subgroup> {
        self.check_indices(indices)?;
        let elems = d
            .elements()
            .iter()
            .copied()
            .filter(|&x| {
                (0..self.arity())
                    .filter(|i| !indices.contains(i))
                    .all(|i| self.coord(x, i) == self.factors[i].identity())
            })
            .map(|x| self.pack_selected(x, indices))
            .collect();
        Ok(Subgroup::from_sorted(elems, self.selected_order(indices)))
    }

    /// `D° = {(h, g) : (g, h) ∈ D}` for a two-factor product.
    pub fn swap(&self, d: &Subgroup) -> Subgroup {
        assert_eq!(self.arity(), 2);
        let n0 = self.factors[0].order();
        let elems = d.elements().iter().map(|&x| self.coord(x, 1) * n0 + self.coord(x, 0)).collect();
        Subgroup::from_sorted(elems, self.group.order())
    }
}

/// `U * V = {(g, k) : ∃h, (g, h) ∈ U, (h, k) ∈ V}` for `U ≤ G×H`, `V ≤ H×K`.
/// The result is packed as an element of `G×K`.
pub fn star(left: &ProductGroup, u: &Subgroup, right: &ProductGroup, v: &Subgroup) -> Result<Subgroup> {
    if left.arity() != 2 || right.arity() != 2 {
        return Err(Error::FactorMismatch("star needs two-factor products".into()));
    }
    if left.factor(1) != right.factor(0) {
        return Err(Error::FactorMismatch(format!(
            "middle factors {} and {} differ",
            left.factor(1).name(),
            right.factor(0).name()
        )));
    }
    let n_mid = left.factor(1).order();
    let n_k = right.factor(1).order();
    let mut by_first: Vec<Vec<Elem>> = vec![Vec::new(); n_mid];
    for &y in v.elements() {
        by_first[right.coord(y, 0)].push(right.coord(y, 1));
    }
    let mut elems = Vec::new();
    for &x in u.elements() {
        let g = left.coord(x, 0);
        for &k in &by_first[left.coord(x, 1)] {
            elems.push(g * n_k + k);
        }
    }
    Ok(Subgroup::from_sorted(elems, left.factor(0).order() * n_k))
}

/// Goursat data of `D ≤ G×H`: `E = p₁(D)`, `k₁ = k₁(D)`, `F = p₂(D)`,
/// `k₂ = k₂(D)` and the isomorphism `F/k₂ → E/k₁`, recorded as pairs of
/// least coset representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoursatData {
    pub e: Subgroup,
    pub k1: Subgroup,
    pub f: Subgroup,
    pub k2: Subgroup,
    /// `(h, g)`: the coset `h·k₂` maps to `g·k₁`, both least representatives.
    pub iso: Vec<(Elem, Elem)>,
}

fn least_in_coset(group: &FiniteGroup, x: Elem, n: &Subgroup) -> Elem {
    n.elements().iter().map(|&k| group.mul(x, k)).min().unwrap()
}

pub fn goursat_decompose(product: &ProductGroup, d: &Subgroup) -> Result<GoursatData> {
    if product.arity() != 2 {
        return Err(Error::FactorMismatch("Goursat data needs a two-factor product".into()));
    }
    let (g, h) = (product.factor(0), product.factor(1));
    let e = product.projection(d, &[0])?;
    let f = product.projection(d, &[1])?;
    let k1 = product.kernel_part(d, &[0])?;
    let k2 = product.kernel_part(d, &[1])?;
    let mut iso: Vec<(Elem, Elem)> = d
        .elements()
        .iter()
        .map(|&x| (least_in_coset(h, product.coord(x, 1), &k2), least_in_coset(g, product.coord(x, 0), &k1)))
        .collect();
    iso.sort_unstable();
    iso.dedup();
    Ok(GoursatData { e, k1, f, k2, iso })
}

impl GoursatData {
    /// Rebuilds `D = {(g, h) : iso(h·k₂) = g·k₁}`.
    pub fn rebuild(&self, product: &ProductGroup) -> Subgroup {
        let (g, h) = (product.factor(0), product.factor(1));
        let mut elems = Vec::new();
        for &(hr, gr) in &self.iso {
            for &a in self.k1.elements() {
                for &b in self.k2.elements() {
                    elems.push(product.pack(&[g.mul(gr, a), h.mul(hr, b)]));
                }
            }
        }
        Subgroup::from_sorted(elems, product.group().order())
    }

    /// The two sections as standalone groups and the isomorphism
    /// `F/k₂ → E/k₁` between them.
    pub fn sections(&self, product: &ProductGroup) -> Result<(FiniteGroup, FiniteGroup, GroupHom)> {
        let (g, h) = (product.factor(0), product.factor(1));
        let (e_grp, e_emb) = g.subgroup_as_group(&self.e, "E");
        let (f_grp, f_emb) = h.subgroup_as_group(&self.f, "F");
        let pull = |emb: &[Elem], sub: &Subgroup| {
            sub.elements().iter().map(|x| emb.binary_search(x).unwrap()).collect::<Vec<_>>()
        };
        let k1_local = Subgroup::from_sorted(pull(&e_emb, &self.k1), e_grp.order());
        let k2_local = Subgroup::from_sorted(pull(&f_emb, &self.k2), f_grp.order());
        let (eq, e_proj) = e_grp.quotient(&k1_local)?;
        let (fq, f_proj) = f_grp.quotient(&k2_local)?;
        let local = |emb: &[Elem], x: Elem| emb.binary_search(&x).unwrap();
        let mut map = vec![usize::MAX; fq.order()];
        for &(hr, gr) in &self.iso {
            map[f_proj[local(&f_emb, hr)]] = e_proj[local(&e_emb, gr)];
        }
        let iso = GroupHom::from_fn(&Subgroup::whole(&fq), fq.order(), |x| map[x]);
        Ok((fq, eq, iso))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{group_from_spec, isomorphism};
    use proptest::prelude::*;

    fn arc(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(group_from_spec(spec).unwrap())
    }

    fn diagonal(p: &ProductGroup) -> Subgroup {
        let g = p.factor(0);
        Subgroup::from_sorted(g.elements().map(|x| p.pack(&[x, x])).collect(), p.group().order())
    }

    /// `D = ⟨(x, a), (y, b)⟩ ≤ Q8 × D8`.
    fn counterexample_subgroup() -> (ProductGroup, Subgroup) {
        let (q8, d8) = (arc("Q8"), arc("D8"));
        let p = ProductGroup::pair(q8.clone(), d8.clone());
        let xa = p.pack(&[q8.element_by_label("x").unwrap(), d8.element_by_label("a").unwrap()]);
        let yb = p.pack(&[q8.element_by_label("y").unwrap(), d8.element_by_label("b").unwrap()]);
        let d = Subgroup::generated(p.group(), &[xa, yb]);
        (p, d)
    }

    #[test]
    fn product_matches_direct_product() {
        let (g, h) = (arc("S3"), arc("C4"));
        let p = ProductGroup::pair(g.clone(), h.clone());
        let (dp, _, _) = crate::group::direct_product(&g, &h);
        assert_eq!(p.group(), &dp);
        let triple = ProductGroup::new(vec![arc("C2"), arc("S3"), arc("C3")]);
        assert_eq!(triple.group().order(), 36);
        let x = triple.pack(&[1, 4, 2]);
        assert_eq!(triple.coords(x), vec![1, 4, 2]);
        assert!(FiniteGroup::from_table("t", 36, triple.group().table().to_vec(), None).is_ok());
    }

    #[test]
    fn diagonal_projections() {
        let p = ProductGroup::pair(arc("S3"), arc("S3"));
        let d = diagonal(&p);
        assert_eq!(p.projection(&d, &[0]).unwrap().order(), 6);
        assert_eq!(p.projection(&d, &[1]).unwrap().order(), 6);
        assert!(p.kernel_part(&d, &[0]).unwrap().is_trivial());
        assert!(p.kernel_part(&d, &[1]).unwrap().is_trivial());
        assert_eq!(p.projection(&d, &[1, 0]), Err(Error::InvalidIndexSet(vec![1, 0])));
        assert_eq!(p.projection(&d, &[2]), Err(Error::InvalidIndexSet(vec![2])));
    }

    #[test]
    fn counterexample_projections_and_kernels() {
        let (p, d) = counterexample_subgroup();
        let (q8, d8) = (p.factor(0), p.factor(1));
        assert_eq!(d.order(), 16);
        assert_eq!(p.projection(&d, &[0]).unwrap(), Subgroup::whole(q8));
        assert_eq!(p.projection(&d, &[1]).unwrap(), Subgroup::whole(d8));
        let x = q8.element_by_label("x").unwrap();
        let a = d8.element_by_label("a").unwrap();
        assert_eq!(p.kernel_part(&d, &[0]).unwrap(), Subgroup::generated(q8, &[q8.mul(x, x)]));
        assert_eq!(p.kernel_part(&d, &[1]).unwrap(), Subgroup::generated(d8, &[d8.mul(a, a)]));
    }

    #[test]
    fn product_with_trivial_second_factor_part() {
        let p = ProductGroup::pair(arc("C3"), arc("C2"));
        let g_times_1 = Subgroup::from_sorted((0..3).map(|x| p.pack(&[x, 0])).collect(), 6);
        assert!(p.projection(&g_times_1, &[1]).unwrap().is_trivial());
    }

    #[test]
    fn three_factor_projections() {
        let p = ProductGroup::new(vec![arc("C2"), arc("C2"), arc("C3")]);
        let whole = Subgroup::whole(p.group());
        let p12 = p.projection(&whole, &[0, 1]).unwrap();
        assert_eq!(p12.order(), 4);
        let k3 = p.kernel_part(&whole, &[2]).unwrap();
        assert_eq!(k3.order(), 3);
        let d = Subgroup::generated(p.group(), &[p.pack(&[1, 1, 1])]);
        assert_eq!(d.order(), 6);
        assert_eq!(p.kernel_part(&d, &[0, 1]).unwrap().order(), 2);
        assert_eq!(p.kernel_part(&d, &[2]).unwrap().order(), 3);
        assert_eq!(p.subproduct(&[0, 2]).unwrap().group().order(), 6);
    }

    #[test]
    fn star_of_diagonals() {
        let g = arc("D8");
        let p = ProductGroup::pair(g.clone(), g.clone());
        let d = diagonal(&p);
        assert_eq!(star(&p, &d, &p, &d).unwrap(), d);
        let q = ProductGroup::pair(arc("C2"), arc("C3"));
        assert!(matches!(star(&p, &d, &q, &Subgroup::trivial(q.group())), Err(Error::FactorMismatch(_))));
    }

    #[test]
    fn idempotent_star_for_kernel_relation() {
        // D' = {(g1, g2) : g1 g2⁻¹ ∈ k₁(D)} satisfies D' * D' = D'.
        let (p, d) = counterexample_subgroup();
        let q8 = p.factor(0).clone();
        let k1 = p.kernel_part(&d, &[0]).unwrap();
        let pp = ProductGroup::pair(q8.clone(), q8.clone());
        let elems =
            pp.group().elements().filter(|&x| k1.contains(q8.mul(pp.coord(x, 0), q8.inv(pp.coord(x, 1))))).collect();
        let d_prime = Subgroup::from_sorted(elems, 64);
        assert_eq!(star(&pp, &d_prime, &pp, &d_prime).unwrap(), d_prime);
        // And D * D° is exactly that subgroup.
        let d_op = p.swap(&d);
        let op = ProductGroup::pair(p.factor(1).clone(), q8);
        assert_eq!(star(&p, &d, &op, &d_op).unwrap(), d_prime);
    }

    #[test]
    fn goursat_examples() {
        let g = arc("S3");
        let p = ProductGroup::pair(g.clone(), g.clone());
        let data = goursat_decompose(&p, &diagonal(&p)).unwrap();
        assert_eq!(data.e.order(), 6);
        assert!(data.k1.is_trivial() && data.k2.is_trivial());
        assert!(data.iso.iter().all(|&(h, g)| h == g));

        let (p, d) = counterexample_subgroup();
        let data = goursat_decompose(&p, &d).unwrap();
        let (fq, eq, iso) = data.sections(&p).unwrap();
        assert_eq!((fq.order(), eq.order()), (4, 4));
        assert!(iso.is_homomorphism(&fq, &eq) && iso.is_injective());
        assert_eq!(data.rebuild(&p), d);

        let whole = Subgroup::whole(p.group());
        let data = goursat_decompose(&p, &whole).unwrap();
        let (fq, eq, _) = data.sections(&p).unwrap();
        assert_eq!((fq.order(), eq.order()), (1, 1));
    }

    #[test]
    fn star_is_associative_on_small_products() {
        let groups = [arc("C2"), arc("C3"), arc("S3")];
        for a in &groups {
            for b in &groups {
                for c in &groups {
                    let d = &groups[0];
                    let ab = ProductGroup::pair(a.clone(), b.clone());
                    let bc = ProductGroup::pair(b.clone(), c.clone());
                    let cd = ProductGroup::pair(c.clone(), d.clone());
                    let ac = ProductGroup::pair(a.clone(), c.clone());
                    let bd = ProductGroup::pair(b.clone(), d.clone());
                    let (s_ab, s_bc, s_cd) = (
                        ab.group().subgroups().unwrap(),
                        bc.group().subgroups().unwrap(),
                        cd.group().subgroups().unwrap(),
                    );
                    for u in s_ab.iter().step_by(3) {
                        for v in s_bc.iter().step_by(2) {
                            let uv = star(&ab, u, &bc, v).unwrap();
                            for w in &s_cd {
                                let left = star(&ac, &uv, &cd, w).unwrap();
                                let vw = star(&bc, v, &cd, w).unwrap();
                                let right = star(&ab, u, &bd, &vw).unwrap();
                                assert_eq!(left, right);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn conjugating_by_identity_and_normal_subgroups() {
        let (p, d) = counterexample_subgroup();
        let g = p.group();
        assert_eq!(g.conjugate_subgroup(g.identity(), &d), d);
        for n in g.subgroups().unwrap().iter().filter(|n| g.is_normal(n)).take(20) {
            for x in g.elements().step_by(7) {
                assert_eq!(&g.conjugate_subgroup(x, n), n);
            }
        }
    }

    fn d8_squared() -> &'static (ProductGroup, Vec<Subgroup>) {
        static CELL: std::sync::OnceLock<(ProductGroup, Vec<Subgroup>)> = std::sync::OnceLock::new();
        CELL.get_or_init(|| {
            let p = ProductGroup::pair(arc("D8"), arc("D8"));
            let subs = p.group().subgroups().unwrap();
            (p, subs)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn goursat_round_trip_and_conjugation(i in 0usize..10_000, j in 0usize..10_000, x in 0usize..64, y in 0usize..64) {
            let (p, subs) = d8_squared();
            let (p, subs) = (p, subs.as_slice());
            let g = p.group();
            let d = &subs[i % subs.len()];
            let data = goursat_decompose(p, d).unwrap();
            prop_assert_eq!(&data.rebuild(p), d);
            let c = g.conjugate_subgroup(x, d);
            prop_assert_eq!(c.order(), d.order());
            // Conjugation is an action.
            prop_assert_eq!(
                g.conjugate_subgroup(g.mul(x, y), d),
                g.conjugate_subgroup(x, &g.conjugate_subgroup(y, d))
            );
            // Goursat data transports along conjugation.
            let moved = goursat_decompose(p, &c).unwrap();
            let (gx, hx) = (p.coord(x, 0), p.coord(x, 1));
            prop_assert_eq!(&moved.e, &p.factor(0).conjugate_subgroup(gx, &data.e));
            prop_assert_eq!(&moved.k2, &p.factor(1).conjugate_subgroup(hx, &data.k2));
            let (fq, eq, _) = data.sections(p).unwrap();
            let (fq2, eq2, _) = moved.sections(p).unwrap();
            prop_assert!(isomorphism(&fq, &fq2).is_some() && isomorphism(&eq, &eq2).is_some());
            // Star containments: p₁(U*V) ⊆ p₁(U), k₁(U) ⊆ k₁(U*V).
            let v = &subs[j % subs.len()];
            let uv = star(p, d, p, v).unwrap();
            prop_assert!(p.projection(&uv, &[0]).unwrap().is_subset(&data.e));
            prop_assert!(data.k1.is_subset(&p.kernel_part(&uv, &[0]).unwrap()));
        }
    }
}
