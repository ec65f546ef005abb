//! Fixed constructions for the named families. Each puts the identity at 0.

use super::{Elem, FiniteGroup, GroupHom, Subgroup};

fn power_label(base: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{k}"),
    }
}

fn word_label(parts: &[String]) -> String {
    let word: String = parts.concat();
    if word.is_empty() {
        "1".to_string()
    } else {
        word
    }
}

/// Cyclic group `⟨c⟩` of order `n`; element `k` is `c^k`.
pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n > 0, "cyclic group of order 0");
    let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
    let labels = (0..n).map(|k| word_label(&[power_label("c", k)])).collect();
    FiniteGroup::assemble(format!("C{n}"), n, table, labels)
}

/// Dihedral group of the given (even) order `2n`,
/// `⟨a, b | aⁿ = b² = 1, bab⁻¹ = a⁻¹⟩`. Element `j·n + i` is `aⁱbʲ`.
pub fn dihedral(order: usize) -> FiniteGroup {
    assert!(order >= 2 && order.is_multiple_of(2), "dihedral order must be even");
    let n = order / 2;
    let decode = |e: Elem| (e % n, e / n);
    let mut table = Vec::with_capacity(order * order);
    for x in 0..order {
        let (i, j) = decode(x);
        for y in 0..order {
            let (k, l) = decode(y);
            // aⁱbʲ·aᵏbˡ = a^(i ± k) b^(j+l)
            let exp = if j == 0 { (i + k) % n } else { (i + n - k) % n };
            table.push(((j + l) % 2) * n + exp);
        }
    }
    let labels = (0..order)
        .map(|e| {
            let (i, j) = decode(e);
            word_label(&[power_label("a", i), power_label("b", j)])
        })
        .collect();
    FiniteGroup::assemble(format!("D{order}"), order, table, labels)
}

/// Dicyclic group of order `4n`, `⟨x, y | x²ⁿ = 1, y² = xⁿ, yxy⁻¹ = x⁻¹⟩`.
/// Order 8 is the quaternion group `Q8`. Element `j·2n + i` is `xⁱyʲ`.
pub fn dicyclic(order: usize) -> FiniteGroup {
    assert!(order >= 4 && order.is_multiple_of(4), "dicyclic order must be a multiple of 4");
    let m = order / 2; // order of x
    let n = order / 4;
    let decode = |e: Elem| (e % m, e / m);
    let mut table = Vec::with_capacity(order * order);
    for u in 0..order {
        let (i, j) = decode(u);
        for v in 0..order {
            let (k, l) = decode(v);
            let mut exp = if j == 0 { i + k } else { i + m - k };
            if j == 1 && l == 1 {
                exp += n;
            }
            table.push(((j + l) % 2) * m + exp % m);
        }
    }
    let labels = (0..order)
        .map(|e| {
            let (i, j) = decode(e);
            word_label(&[power_label("x", i), power_label("y", j)])
        })
        .collect();
    let name = if order == 8 { "Q8".to_string() } else { format!("Dic{order}") };
    FiniteGroup::assemble(name, order, table, labels)
}

fn permutation_group(name: String, perms: Vec<Vec<usize>>) -> FiniteGroup {
    let order = perms.len();
    let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed set");
    let mut table = Vec::with_capacity(order * order);
    for p in &perms {
        for q in &perms {
            // (pq)(i) = p(q(i))
            let pq: Vec<usize> = q.iter().map(|&i| p[i]).collect();
            table.push(index(&pq));
        }
    }
    let labels = perms.iter().map(|p| cycle_notation(p)).collect();
    FiniteGroup::assemble(name, order, table, labels)
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start + 1];
        seen[start] = true;
        let mut i = p[start];
        while i != start {
            seen[i] = true;
            cycle.push(i + 1);
            i = p[i];
        }
        let body: Vec<String> = cycle.iter().map(usize::to_string).collect();
        out.push_str(&format!("({})", body.join(" ")));
    }
    if out.is_empty() {
        "()".to_string()
    } else {
        out
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    // Lexicographic order, identity first.
    fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !prefix.contains(&i) {
                prefix.push(i);
                rec(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, &mut out);
    out
}

fn is_even(p: &[usize]) -> bool {
    let inversions =
        (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    inversions % 2 == 0
}

/// Symmetric group on `n` points, permutations in lexicographic order.
pub fn symmetric(n: usize) -> FiniteGroup {
    assert!(n >= 1, "symmetric group on zero points");
    permutation_group(format!("S{n}"), permutations(n))
}

/// Alternating group on `n` points.
pub fn alternating(n: usize) -> FiniteGroup {
    assert!(n >= 1, "alternating group on zero points");
    let perms = permutations(n).into_iter().filter(|p| is_even(p)).collect();
    permutation_group(format!("A{n}"), perms)
}

/// `G × H` with pairs ordered lexicographically: `(g, h)` has index
/// `g·|H| + h`. Returns the two coordinate projections as well.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> (FiniteGroup, GroupHom, GroupHom) {
    let (m, n) = (g.order(), h.order());
    let order = m * n;
    let mut table = Vec::with_capacity(order * order);
    for x in 0..order {
        let (x1, x2) = (x / n, x % n);
        for y in 0..order {
            let (y1, y2) = (y / n, y % n);
            table.push(g.mul(x1, y1) * n + h.mul(x2, y2));
        }
    }
    let labels = (0..order).map(|x| format!("({},{})", g.label(x / n), h.label(x % n))).collect();
    let product = FiniteGroup::assemble(format!("{}x{}", g.name(), h.name()), order, table, labels);
    let whole = Subgroup::whole(&product);
    let p1 = GroupHom::from_fn(&whole, order, |x| x / n);
    let p2 = GroupHom::from_fn(&whole, order, |x| x % n);
    (product, p1, p2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn census(g: &FiniteGroup) -> Vec<usize> {
        g.order_census()
    }

    fn assert_group_axioms(g: &FiniteGroup) {
        // Re-validate through the checked constructor.
        let checked = FiniteGroup::from_table(g.name(), g.order(), g.table().to_vec(), None).unwrap();
        assert_eq!(checked.identity(), 0);
    }

    #[test]
    fn constructions_satisfy_axioms() {
        for g in [
            cyclic(1),
            cyclic(6),
            dihedral(2),
            dihedral(8),
            dihedral(14),
            dicyclic(8),
            dicyclic(12),
            symmetric(3),
            symmetric(4),
            alternating(4),
        ] {
            assert_group_axioms(&g);
        }
    }

    #[test]
    fn dihedral_relations() {
        let d = dihedral(8);
        let a = d.element_by_label("a").unwrap();
        let b = d.element_by_label("b").unwrap();
        assert_eq!(d.element_order(a), 4);
        assert_eq!(d.element_order(b), 2);
        assert_eq!(d.conj(b, a), d.inv(a));
    }

    #[test]
    fn quaternion_relations_and_census() {
        let q = dicyclic(8);
        let x = q.element_by_label("x").unwrap();
        let y = q.element_by_label("y").unwrap();
        assert_eq!(q.element_order(x), 4);
        assert_eq!(q.conj(y, x), q.inv(x));
        assert_eq!(q.mul(x, x), q.mul(y, y));
        assert!(!q.is_abelian());
        // Exactly one element of order 2.
        assert_eq!(census(&q).iter().filter(|&&o| o == 2).count(), 1);
    }

    #[test]
    fn product_orders_and_projections() {
        let (k, p1, p2) = direct_product(&cyclic(2), &cyclic(2));
        assert_eq!(census(&k), vec![1, 2, 2, 2]);
        assert!(p1.is_homomorphism(&k, &cyclic(2)));
        assert!(p2.is_homomorphism(&k, &cyclic(2)));
        let (big, _, _) = direct_product(&dicyclic(8), &dihedral(8));
        assert_eq!(big.order(), 64);
        assert_group_axioms(&big);
    }

    #[test]
    fn symmetric_sizes() {
        assert_eq!(symmetric(4).order(), 24);
        assert_eq!(alternating(4).order(), 12);
        assert_eq!(symmetric(3).label(0), "()");
    }
}
