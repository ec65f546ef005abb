//! Class counts and composition structure constants against brute force.

use std::collections::BTreeSet;
use std::sync::Arc;

use fibred::fibred::{compose_oracle, FibredElement, FibredSpace, Space};
use fibred::group::{group_from_spec, FiniteGroup};
use fibred::json::space_from_spec;

fn arc(spec: &str) -> Arc<FiniteGroup> {
    Arc::new(group_from_spec(spec).unwrap())
}

fn closure(g: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    let mut members = vec![false; g.order()];
    members[g.identity()] = true;
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if !members[y] {
                members[y] = true;
                frontier.push(y);
            }
        }
    }
    g.elements().filter(|&x| members[x]).collect()
}

/// `(D, δ)` pairs up to conjugacy, from subgroups generated by at most three
/// elements and characters found by trying every map on those generators.
fn brute_class_count(space: &FibredSpace) -> usize {
    let g = space.ambient();
    let c = space.fibre();
    let n = g.order();
    let mut subgroups = BTreeSet::new();
    for a in 0..n {
        for b in a..n {
            for d in b..n {
                subgroups.insert(closure(g, &[a, b, d]));
            }
        }
    }
    let mut orbits = BTreeSet::new();
    for d in &subgroups {
        // A small generating set of d.
        let mut gens = Vec::new();
        for &x in d {
            if closure(g, &gens).len() == d.len() {
                break;
            }
            if !closure(g, &gens).contains(&x) {
                gens.push(x);
            }
        }
        let k = gens.len() as u32;
        for code in 0..c.order().pow(k) {
            let images: Vec<usize> = (0..k).map(|i| code / c.order().pow(i) % c.order()).collect();
            let mut value = vec![usize::MAX; n];
            value[g.identity()] = c.identity();
            let mut frontier = vec![g.identity()];
            let mut ok = true;
            while let Some(x) = frontier.pop() {
                for (&s, &t) in gens.iter().zip(&images) {
                    let (y, v) = (g.mul(x, s), c.mul(value[x], t));
                    if value[y] == usize::MAX {
                        value[y] = v;
                        frontier.push(y);
                    } else if value[y] != v {
                        ok = false;
                    }
                }
            }
            if !ok {
                continue;
            }
            let orbit: BTreeSet<Vec<(usize, usize)>> = g
                .elements()
                .map(|a| {
                    let mut pairs: Vec<(usize, usize)> = d.iter().map(|&x| (g.conj(a, x), value[x])).collect();
                    pairs.sort_unstable();
                    pairs
                })
                .collect();
            orbits.insert(orbit.into_iter().next().unwrap());
        }
    }
    orbits.len()
}

/// (space, fibre, number of classes), frozen from the oracle above.
const COUNTS: &[(&str, &str, usize)] = &[
    ("C2", "C2", 3),
    ("C1", "C5", 1),
    ("C4", "C2", 5),
    ("S3", "C2", 6),
    ("Q8", "C2", 13),
    ("D8", "C4", 20),
    ("C2|C2", "C2", 11),
    ("C2|C3", "C3", 8),
    ("S3|C2", "C2", 22),
    ("C4|C2", "C4", 27),
    ("C3|S3", "C3", 23),
    ("C2xC2|C2", "C2", 51),
];

#[test]
fn class_counts_match_brute_force() {
    for &(spec, fibre, expected) in COUNTS {
        let space = space_from_spec(spec, arc(fibre)).unwrap();
        let brute = brute_class_count(&space);
        assert_eq!(brute, expected, "{spec} over {fibre}: oracle disagrees with the frozen count");
        assert_eq!(space.classes().unwrap().len(), brute, "{spec} over {fibre}");
    }
}

/// Over `S×S` with all classes `X, Y`: the number of (X, Y, Z) with `Z` a
/// summand of `X∘Y` and the sum of all coefficients, computed by the set
/// oracle only.
fn structure_checksum(space: &Space) -> (usize, i64) {
    let classes = space.classes().unwrap();
    let mut terms = 0;
    let mut total = 0;
    for x in classes {
        for y in classes {
            let xy = compose_oracle(&FibredElement::basis(space.clone(), x), &FibredElement::basis(space.clone(), y))
                .unwrap();
            terms += xy.len();
            total += xy.terms().values().sum::<i64>();
        }
    }
    (terms, total)
}

#[test]
fn structure_constants_are_frozen() {
    for (g, c, expected) in [("C2", "C2", (103, 112)), ("C3", "C3", (388, 420)), ("C2", "C4", (103, 112))] {
        let space = FibredSpace::biset(arc(g), arc(g), arc(c)).unwrap();
        let oracle = structure_checksum(&space);
        let mut formula = (0, 0);
        for x in space.classes().unwrap() {
            for y in space.classes().unwrap() {
                let xy = fibred::fibred::compose(
                    &FibredElement::basis(space.clone(), x),
                    &FibredElement::basis(space.clone(), y),
                )
                .unwrap();
                formula.0 += xy.len();
                formula.1 += xy.terms().values().sum::<i64>();
            }
        }
        assert_eq!(oracle, formula, "{g} over {c}");
        assert_eq!(oracle, expected, "{g} over {c}: frozen checksum");
    }
}
