//! Composition, Dress tensor and internal ring product, each with a closed
//! formula and a set-level oracle.

use crate::error::{Error, Result};
use crate::goursat::ProductGroup;
use crate::group::{Elem, Subgroup};

use super::{FibredElement, FibredSpace, MonomialSet, Space, Subcharacter};

const UNSET: usize = usize::MAX;

/// One summand of the composition formula: the double-coset
/// representative `h` it came from and its (non-canonical) class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub rep: Elem,
    pub class: Subcharacter,
}

fn check_composable(x: &FibredSpace, y: &FibredSpace) -> Result<()> {
    if !x.is_biset() || !y.is_biset() {
        return Err(Error::FactorMismatch("composition needs two-factor spaces".into()));
    }
    if x.right() != y.left() {
        return Err(Error::FactorMismatch(format!(
            "middle groups {} and {} differ",
            x.right().name(),
            y.left().name()
        )));
    }
    if x.fibre() != y.fibre() {
        return Err(Error::FibreMismatch);
    }
    Ok(())
}

/// The space `G×K` receiving `B¹_C(G×H) ∘ B¹_C(H×K)`.
pub fn composition_space(x: &FibredSpace, y: &FibredSpace) -> Result<Space> {
    check_composable(x, y)?;
    FibredSpace::biset(x.left().clone(), y.right().clone(), x.fibre().clone())
}

/// The summands of `[V, ν] ∘ [U, μ]` for `V ≤ G×H`, `U ≤ H×K`:
/// one per double coset `p₂(V) h p₁(U)` passing the character condition
/// `ν(1,h′)·μ(h⁻¹h′h, 1) = 1` on `k₂(V) ∩ ^h k₁(U)`, with subgroup
/// `V * ^{(h,1)}U` and character `(g,k) ↦ ν(g,h₁)·μ(h⁻¹h₁h, k)`.
pub fn compose_summands(
    left: &ProductGroup,
    x: &Subcharacter,
    right: &ProductGroup,
    y: &Subcharacter,
    fibre: &crate::group::FiniteGroup,
) -> Vec<Summand> {
    let (g, h, k) = (left.factor(0), left.factor(1), right.factor(1));
    let one = fibre.identity();
    let nk = k.order();

    let mut by_first: Vec<Vec<(Elem, Elem)>> = vec![Vec::new(); h.order()];
    let mut k1u = vec![UNSET; h.order()];
    for (u, m) in y.pairs() {
        let (u1, kk) = (right.coord(u, 0), right.coord(u, 1));
        by_first[u1].push((kk, m));
        if kk == k.identity() {
            k1u[u1] = m;
        }
    }
    let p1u = Subgroup::from_sorted((0..h.order()).filter(|&u1| !by_first[u1].is_empty()).collect(), h.order());
    let p2v = Subgroup::from_sorted(x.elements().iter().map(|&v| left.coord(v, 1)).collect(), h.order());
    let k2v: Vec<(Elem, Elem)> =
        x.pairs().filter(|&(v, _)| left.coord(v, 0) == g.identity()).map(|(v, n)| (left.coord(v, 1), n)).collect();

    let mut out = Vec::new();
    let mut value = vec![UNSET; g.order() * nk];
    let mut touched = Vec::new();
    for rep in h.double_coset_representatives(&p2v, &p1u) {
        let inv = h.inv(rep);
        let passes = k2v.iter().all(|&(hp, n)| {
            let m = k1u[h.conj(inv, hp)];
            m == UNSET || fibre.mul(n, m) == one
        });
        if !passes {
            continue;
        }
        touched.clear();
        for (v, n) in x.pairs() {
            let (gg, h1) = (left.coord(v, 0), left.coord(v, 1));
            for &(kk, m) in &by_first[h.conj(inv, h1)] {
                let e = gg * nk + kk;
                let c = fibre.mul(n, m);
                if value[e] == UNSET {
                    value[e] = c;
                    touched.push(e);
                } else {
                    assert_eq!(value[e], c, "composite character is not well defined");
                }
            }
        }
        let pairs = touched.iter().map(|&e| (e, std::mem::replace(&mut value[e], UNSET))).collect();
        out.push(Summand { rep, class: Subcharacter::from_pairs(pairs) });
    }
    out
}

/// `X ∘ Y` by the closed formula, into an existing `G×K` space.
pub fn compose_in(target: &Space, x: &FibredElement, y: &FibredElement) -> Result<FibredElement> {
    check_composable(x.space(), y.space())?;
    if target.left() != x.space().left() || target.right() != y.space().right() {
        return Err(Error::FactorMismatch("target space does not match the composite".into()));
    }
    let mut out = FibredElement::zero(target.clone());
    for (a, ca) in x.terms() {
        for (b, cb) in y.terms() {
            for s in compose_summands(x.space().product(), a, y.space().product(), b, x.space().fibre()) {
                out.add_term(&s.class, ca * cb);
            }
        }
    }
    Ok(out)
}

pub fn compose(x: &FibredElement, y: &FibredElement) -> Result<FibredElement> {
    compose_in(&composition_space(x.space(), y.space())?, x, y)
}

/// `X ∘ Y` through explicit sets: orbits of `X×Y` under the middle group
/// and the anti-diagonal fibre, keeping the C-free orbits.
pub fn compose_oracle(x: &FibredElement, y: &FibredElement) -> Result<FibredElement> {
    let target = composition_space(x.space(), y.space())?;
    let mut out = FibredElement::zero(target.clone());
    for (a, ca) in x.terms() {
        let xs = MonomialSet::coset_space(x.space().ambient_arc().clone(), x.space().fibre().clone(), a);
        for (b, cb) in y.terms() {
            let ys = MonomialSet::coset_space(y.space().ambient_arc().clone(), y.space().fibre().clone(), b);
            let set = xs.compose(x.space().product(), &ys, y.space().product(), target.product())?;
            for s in set.c_free_part().decompose()? {
                out.add_term(&s, ca * cb);
            }
        }
    }
    Ok(out)
}

/// `W ∘ W = W`.
pub fn is_idempotent(w: &FibredElement) -> Result<bool> {
    Ok(compose_in(w.space(), w, w)? == *w)
}

fn tensor_space(x: &FibredSpace, y: &FibredSpace) -> Result<Space> {
    if x.fibre() != y.fibre() {
        return Err(Error::FibreMismatch);
    }
    let factors = x.factors().iter().chain(y.factors()).cloned().collect();
    FibredSpace::new(factors, x.fibre().clone())
}

/// The Dress product `[D,δ] ⊗ [E,ε] = [D×E, δ·ε]`, over the concatenated
/// product of the two ambients.
pub fn tensor(x: &FibredElement, y: &FibredElement) -> Result<FibredElement> {
    let target = tensor_space(x.space(), y.space())?;
    let nb = y.space().ambient().order();
    let fibre = x.space().fibre();
    let mut out = FibredElement::zero(target);
    for (a, ca) in x.terms() {
        for (b, cb) in y.terms() {
            let pairs =
                a.pairs().flat_map(|(d, u)| b.pairs().map(move |(e, v)| (d * nb + e, fibre.mul(u, v)))).collect();
            out.add_term(&Subcharacter::from_pairs(pairs), ca * cb);
        }
    }
    Ok(out)
}

/// The Dress product through `C`-orbits of `T×Y`.
pub fn tensor_oracle(x: &FibredElement, y: &FibredElement) -> Result<FibredElement> {
    let target = tensor_space(x.space(), y.space())?;
    let t = x.to_monomial_set()?;
    let u = y.to_monomial_set()?;
    let set = t.tensor(&u, target.ambient_arc().clone())?;
    FibredElement::from_monomial_set(target, &set)
}

fn check_same(x: &FibredElement, y: &FibredElement) -> Result<()> {
    if x.space().product() != y.space().product() {
        return Err(Error::FactorMismatch("ring product over different groups".into()));
    }
    if x.space().fibre() != y.space().fibre() {
        return Err(Error::FibreMismatch);
    }
    Ok(())
}

/// The internal product of `B¹_C(G)`, by the Mackey formula
/// `[D,δ]·[E,ε] = Σ_{g ∈ D\G/E} [D ∩ ^gE, δ·^gε]`.
pub fn ring_product(x: &FibredElement, y: &FibredElement) -> Result<FibredElement> {
    check_same(x, y)?;
    let space = x.space();
    let g = space.ambient();
    let fibre = space.fibre();
    let mut out = FibredElement::zero(space.clone());
    let mut eps = vec![UNSET; g.order()];
    for (a, ca) in x.terms() {
        let d = a.subgroup(g.order());
        for (b, cb) in y.terms() {
            let e = b.subgroup(g.order());
            for (el, v) in b.pairs() {
                eps[el] = v;
            }
            for rep in g.double_coset_representatives(&d, &e) {
                let inv = g.inv(rep);
                let pairs = a
                    .pairs()
                    .filter_map(|(el, u)| {
                        let v = eps[g.conj(inv, el)];
                        (v != UNSET).then(|| (el, fibre.mul(u, v)))
                    })
                    .collect();
                out.add_term(&Subcharacter::from_pairs(pairs), ca * cb);
            }
            for &el in b.elements() {
                eps[el] = UNSET;
            }
        }
    }
    Ok(out)
}

/// The internal product as the tensor square restricted to `Δ(G)`.
pub fn ring_product_oracle(x: &FibredElement, y: &FibredElement) -> Result<FibredElement> {
    check_same(x, y)?;
    let space = x.space();
    let ambient = space.ambient_arc().clone();
    let n = ambient.order();
    let square = ProductGroup::pair(ambient.clone(), ambient.clone());
    let set = x.to_monomial_set()?.tensor(&y.to_monomial_set()?, square.group_arc().clone())?;
    let diagonal = set.restrict(ambient, |g| g * n + g);
    FibredElement::from_monomial_set(space.clone(), &diagonal)
}
