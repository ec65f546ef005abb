//! The quotient algebra `Â(G) = B¹_C(G×G)/I(G)` and its structure for a
//! fibre of prime order.
//!
//! For `|C| = p` prime, `Â(G)` has basis
//!
//! * `X_{t,σ}` for `t ∈ Hom(G, C)` and `σ` an out-class representative,
//!   the class of `D = {(σ(g), g)}` with `δ(σ(g), g) = t(g)⁻¹`;
//! * `Y_{ω,ζ}` for `ω` an out-class representative and `ζ: C → Z(G) ∩ Φ(G)`
//!   injective, the class of `D = {(ω(g)ζ(c), g)}` with `δ = c⁻¹` there.

mod ideal;
mod report;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fibred::{FibredSpace, Space, Subcharacter};
use crate::group::{automorphisms, homomorphisms, Automorphisms, Elem, FiniteGroup, GroupHom, Subgroup};

pub use ideal::{hat_dimension, is_in_ideal, FactorizationWitness, HatDimension, IdealSearch, WitnessRoute};
pub use report::{
    character_from_generators, counterexample_verify, frattini_criterion, seed_index, verify_hat_vs_quotient,
    y_vanishing, CounterexampleReport, FrattiniRow, HatReport, Mismatch, SeedEntry, Step, YVanishingRow,
};

/// A basis symbol of `Â(G)`. Maps are stored as full image tuples so that
/// equality is syntactic once representatives are normalised.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum HatGenerator {
    X { t: Vec<Elem>, sigma: Vec<Elem> },
    Y { omega: Vec<Elem>, zeta: Vec<Elem> },
}

/// A rational combination of generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HatElement {
    terms: BTreeMap<HatGenerator, Rational64>,
}

impl HatElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(g: HatGenerator) -> Self {
        let mut out = Self::zero();
        out.add_term(g, Rational64::one());
        out
    }

    pub fn terms(&self) -> &BTreeMap<HatGenerator, Rational64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, g: HatGenerator, c: Rational64) {
        let entry = self.terms.entry(g).or_insert_with(Rational64::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), *c);
        }
        out
    }

    pub fn scale(&self, k: Rational64) -> Self {
        let mut out = Self::zero();
        for (g, c) in &self.terms {
            out.add_term(g.clone(), c * k);
        }
        out
    }
}

/// `Hom(G, C)`, `Out(G)` and the admissible `ζ` for one `(G, C)` with `|C|`
/// prime, plus the `G×G` space the generators live in.
pub struct PrimeStructure {
    group: Arc<FiniteGroup>,
    fibre: Arc<FiniteGroup>,
    auts: Automorphisms,
    characters: Vec<Vec<Elem>>,
    zetas: Vec<Vec<Elem>>,
    square: Space,
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Injective homomorphisms `C → G` landing in `target`.
fn injections_into(fibre: &FiniteGroup, group: &FiniteGroup, target: &Subgroup) -> Vec<Vec<Elem>> {
    let whole = Subgroup::whole(fibre);
    let (sub, embedding) = group.subgroup_as_group(target, "T");
    homomorphisms(fibre, &whole, &sub)
        .into_iter()
        .filter(GroupHom::is_injective)
        .map(|h| fibre.elements().map(|c| embedding[h.apply(c)]).collect())
        .collect()
}

impl PrimeStructure {
    pub fn new(group: Arc<FiniteGroup>, fibre: Arc<FiniteGroup>) -> Result<Self> {
        if !is_prime(fibre.order()) {
            return Err(Error::NotPrime(fibre.order()));
        }
        let whole = Subgroup::whole(&group);
        let characters = homomorphisms(&group, &whole, &fibre).iter().map(GroupHom::images).collect();
        let centre_phi = group.center().intersection(&group.frattini()?);
        let zetas = if group.center().order().is_multiple_of(fibre.order()) {
            injections_into(&fibre, &group, &centre_phi)
        } else {
            Vec::new()
        };
        let square = FibredSpace::biset(group.clone(), group.clone(), fibre.clone())?;
        Ok(Self { auts: automorphisms(&group), group, fibre, characters, zetas, square })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn fibre(&self) -> &Arc<FiniteGroup> {
        &self.fibre
    }

    pub fn square(&self) -> &Space {
        &self.square
    }

    pub fn automorphisms(&self) -> &Automorphisms {
        &self.auts
    }

    pub fn characters(&self) -> &[Vec<Elem>] {
        &self.characters
    }

    /// `Y_G`: injective `ζ: C → Z(G) ∩ Φ(G)`.
    pub fn zetas(&self) -> &[Vec<Elem>] {
        &self.zetas
    }

    /// `|Hom(G,C)|·|Out(G)| + [p divides |Z(G)|]·|Out(G)|·|Y_G|`.
    pub fn formula_dimension(&self) -> usize {
        let out = self.auts.out_order();
        let y = if self.group.center().order().is_multiple_of(self.fibre.order()) { out * self.zetas.len() } else { 0 };
        self.characters.len() * out + y
    }

    fn hom(&self, images: &[Elem]) -> GroupHom {
        GroupHom::from_fn(&Subgroup::whole(&self.group), self.group.order(), |x| images[x])
    }

    fn out_rep(&self, images: &[Elem]) -> Vec<Elem> {
        self.auts.out_rep(&self.hom(images)).images()
    }

    fn is_automorphism(&self, images: &[Elem]) -> bool {
        let h = self.hom(images);
        h.is_injective() && h.is_homomorphism(&self.group, &self.group)
    }

    /// Replaces `σ` and `ω` by their out-class representatives.
    pub fn normalize(&self, g: &HatGenerator) -> HatGenerator {
        match g {
            HatGenerator::X { t, sigma } => HatGenerator::X { t: t.clone(), sigma: self.out_rep(sigma) },
            HatGenerator::Y { omega, zeta } => HatGenerator::Y { omega: self.out_rep(omega), zeta: zeta.clone() },
        }
    }

    /// All generators, `X` before `Y`, each block in lexicographic order.
    pub fn basis(&self) -> Vec<HatGenerator> {
        let mut out = Vec::new();
        for t in &self.characters {
            for sigma in &self.auts.outer_reps {
                out.push(HatGenerator::X { t: t.clone(), sigma: sigma.images() });
            }
        }
        for omega in &self.auts.outer_reps {
            for zeta in &self.zetas {
                out.push(HatGenerator::Y { omega: omega.images(), zeta: zeta.clone() });
            }
        }
        out.sort();
        out
    }

    /// The canonical transitive class over `G×G` of a generator.
    pub fn class_of(&self, g: &HatGenerator) -> Subcharacter {
        let (gr, c) = (&self.group, &self.fibre);
        let n = gr.order();
        let pairs = match g {
            HatGenerator::X { t, sigma } => gr.elements().map(|x| (sigma[x] * n + x, c.inv(t[x]))).collect(),
            HatGenerator::Y { omega, zeta } => gr
                .elements()
                .flat_map(|x| c.elements().map(move |z| (gr.mul(omega[x], zeta[z]) * n + x, c.inv(z))))
                .collect(),
        };
        self.square.canonicalize(&Subcharacter::from_pairs(pairs))
    }

    /// The product of two generators by the closed rules:
    ///
    /// * `X_{t₁,σ₁} X_{t₂,σ₂} = X_{(t₁σ₂)t₂, σ₁σ₂}`;
    /// * `X_{t,σ} Y_{ω,ζ}`: with `r(c) = tζ(c)·c`, zero unless `r` is an
    ///   automorphism of `C`; then `Y_{ω′,σζr⁻¹}` where
    ///   `ω′(g) = σ(ω(g)·ζ(c_g)⁻¹)` and `r(c_g) = tω(g)`;
    /// * `Y_{ω,ζ} X_{t,σ} = Y_{ω′,ζ}` with `ω′(g) = ωσ(g)·ζ(t(g))⁻¹`, zero
    ///   unless `ω′` is an automorphism;
    /// * `Y_{ω,ζ} Y_{α,χ} = Y_{ωα,ωχ}` if `ζ = ωχ`, else zero.
    pub fn multiply(&self, a: &HatGenerator, b: &HatGenerator) -> HatElement {
        let g = &self.group;
        let c = &self.fibre;
        let result = match (a, b) {
            (HatGenerator::X { t: t1, sigma: s1 }, HatGenerator::X { t: t2, sigma: s2 }) => Some(HatGenerator::X {
                t: g.elements().map(|x| c.mul(t1[s2[x]], t2[x])).collect(),
                sigma: g.elements().map(|x| s1[s2[x]]).collect(),
            }),
            (HatGenerator::X { t, sigma }, HatGenerator::Y { omega, zeta }) => {
                let r: Vec<Elem> = c.elements().map(|z| c.mul(t[zeta[z]], z)).collect();
                let mut r_inv = vec![usize::MAX; c.order()];
                for z in c.elements() {
                    r_inv[r[z]] = z;
                }
                if r_inv.contains(&usize::MAX) {
                    None
                } else {
                    let omega2 = g
                        .elements()
                        .map(|x| {
                            let cg = r_inv[t[omega[x]]];
                            sigma[g.mul(omega[x], g.inv(zeta[cg]))]
                        })
                        .collect();
                    let zeta2 = c.elements().map(|z| sigma[zeta[r_inv[z]]]).collect();
                    Some(HatGenerator::Y { omega: omega2, zeta: zeta2 })
                }
            }
            (HatGenerator::Y { omega, zeta }, HatGenerator::X { t, sigma }) => {
                let omega2: Vec<Elem> = g.elements().map(|x| g.mul(omega[sigma[x]], g.inv(zeta[t[x]]))).collect();
                self.is_automorphism(&omega2).then(|| HatGenerator::Y { omega: omega2, zeta: zeta.clone() })
            }
            (HatGenerator::Y { omega, zeta }, HatGenerator::Y { omega: alpha, zeta: chi }) => {
                let omega_chi: Vec<Elem> = c.elements().map(|z| omega[chi[z]]).collect();
                (*zeta == omega_chi).then(|| HatGenerator::Y {
                    omega: g.elements().map(|x| omega[alpha[x]]).collect(),
                    zeta: omega_chi,
                })
            }
        };
        match result {
            Some(r) => HatElement::generator(self.normalize(&r)),
            None => HatElement::zero(),
        }
    }

    /// Bilinear extension of [`Self::multiply`].
    pub fn multiply_elements(&self, a: &HatElement, b: &HatElement) -> HatElement {
        let mut out = HatElement::zero();
        for (x, cx) in a.terms() {
            for (y, cy) in b.terms() {
                out = out.add(&self.multiply(x, y).scale(cx * cy));
            }
        }
        out
    }

    /// `X_{1, id}`, the identity class `Δ(G)`.
    pub fn identity(&self) -> HatGenerator {
        HatGenerator::X { t: vec![self.fibre.identity(); self.group.order()], sigma: self.group.elements().collect() }
    }

    /// A short label such as `X(t=[1,c], σ=#0)`.
    pub fn describe(&self, g: &HatGenerator) -> String {
        let gens = Subgroup::whole(&self.group).generators(&self.group);
        let on_gens = |img: &[Elem], target: &FiniteGroup, of: &[Elem]| -> String {
            of.iter().map(|&x| target.label(img[x]).to_string()).collect::<Vec<_>>().join(",")
        };
        match g {
            HatGenerator::X { t, sigma } => {
                format!("X(t=[{}], σ=#{})", on_gens(t, &self.fibre, &gens), self.auts.out_index(&self.hom(sigma)))
            }
            HatGenerator::Y { omega, zeta } => {
                let cgens = Subgroup::whole(&self.fibre).generators(&self.fibre);
                format!("Y(ω=#{}, ζ=[{}])", self.auts.out_index(&self.hom(omega)), on_gens(zeta, &self.group, &cgens))
            }
        }
    }
}

impl fmt::Display for HatGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HatGenerator::X { t, sigma } => write!(f, "X{t:?}{sigma:?}"),
            HatGenerator::Y { omega, zeta } => write!(f, "Y{omega:?}{zeta:?}"),
        }
    }
}

/// The generators of `Â(G)` for `|C|` prime.
pub fn hat_basis_prime(group: Arc<FiniteGroup>, fibre: Arc<FiniteGroup>) -> Result<Vec<HatGenerator>> {
    Ok(PrimeStructure::new(group, fibre)?.basis())
}

/// Product of two generators of the same `(G, C)`.
pub fn hat_multiply(structure: &PrimeStructure, a: &HatGenerator, b: &HatGenerator) -> HatElement {
    structure.multiply(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::group_from_spec;

    fn arc(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(group_from_spec(spec).unwrap())
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(hat_basis_prime(arc("S3"), arc("C2")).unwrap().len(), 2);
        let q8 = hat_basis_prime(arc("Q8"), arc("C2")).unwrap();
        assert_eq!(q8.iter().filter(|g| matches!(g, HatGenerator::X { .. })).count(), 24);
        assert_eq!(q8.iter().filter(|g| matches!(g, HatGenerator::Y { .. })).count(), 6);
        assert_eq!(hat_basis_prime(arc("C4"), arc("C3")).unwrap().len(), 2);
        assert_eq!(hat_basis_prime(arc("C4"), arc("C2")).unwrap().len(), 6);
        assert_eq!(hat_basis_prime(arc("C4"), arc("C4")).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn identity_and_associativity() {
        for (g, c) in [("C4", "C2"), ("Q8", "C2"), ("C2xC2", "C2"), ("S3", "C3"), ("D8", "C2")] {
            let s = PrimeStructure::new(arc(g), arc(c)).unwrap();
            let basis = s.basis();
            let one = s.identity();
            assert!(basis.contains(&one));
            for a in &basis {
                assert_eq!(s.multiply(&one, a), HatElement::generator(a.clone()));
                assert_eq!(s.multiply(a, &one), HatElement::generator(a.clone()));
            }
            for a in &basis {
                for b in &basis {
                    let ab = HatElement::generator(a.clone());
                    let ab = s.multiply_elements(&ab, &HatElement::generator(b.clone()));
                    for x in basis.iter().step_by(3) {
                        let left = s.multiply_elements(&ab, &HatElement::generator(x.clone()));
                        let bx = s.multiply(b, x);
                        let right = s.multiply_elements(&HatElement::generator(a.clone()), &bx);
                        assert_eq!(left, right, "{g} {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn classes_are_distinct_and_canonical() {
        let s = PrimeStructure::new(arc("Q8"), arc("C2")).unwrap();
        let mut classes: Vec<Subcharacter> = s.basis().iter().map(|g| s.class_of(g)).collect();
        for c in &classes {
            s.square().validate(c).unwrap();
        }
        classes.sort();
        classes.dedup();
        assert_eq!(classes.len(), 30);
        assert_eq!(s.class_of(&s.identity()), s.square().diagonal_class().unwrap());
    }
}
