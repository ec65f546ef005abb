//! The group-spec mini-language: atoms joined by `x` (direct product).
//!
//! Atoms: `Cn` (cyclic), `D2n` (dihedral of order 2n), `Q8`, `Sn` (n ≤ 4),
//! plus `A4` and `Dic4n` (dicyclic) so that every catalog group has a spec.

use super::{alternating, cyclic, dicyclic, dihedral, direct_product, symmetric, FiniteGroup};
use crate::error::{Error, Result};

fn parse_error(spec: &str, reason: impl Into<String>) -> Error {
    Error::Parse { spec: spec.to_string(), reason: reason.into() }
}

fn parse_number(spec: &str, atom: &str, digits: &str) -> Result<usize> {
    let n: usize = digits.parse().map_err(|_| parse_error(spec, format!("bad number in atom {atom:?}")))?;
    if n == 0 {
        return Err(parse_error(spec, format!("zero order in atom {atom:?}")));
    }
    Ok(n)
}

fn parse_atom(spec: &str, atom: &str) -> Result<FiniteGroup> {
    if atom.is_empty() {
        return Err(parse_error(spec, "empty factor"));
    }
    if atom == "Q8" {
        return Ok(dicyclic(8));
    }
    if atom == "A4" {
        return Ok(alternating(4));
    }
    if let Some(rest) = atom.strip_prefix("Dic") {
        let n = parse_number(spec, atom, rest)?;
        if n % 4 != 0 {
            return Err(Error::UnsupportedAtom(atom.to_string()));
        }
        return Ok(dicyclic(n));
    }
    let (head, digits) = atom.split_at(1);
    let n = parse_number(spec, atom, digits)?;
    match head {
        "C" => Ok(cyclic(n)),
        "D" if n % 2 == 0 => Ok(dihedral(n)),
        "S" if n <= 4 => Ok(symmetric(n)),
        _ => Err(Error::UnsupportedAtom(atom.to_string())),
    }
}

/// Parses a spec such as `"Q8"` or `"C2xC4"`. Products associate to the left
/// and carry the normalised expression as their name.
pub fn group_from_spec(spec: &str) -> Result<FiniteGroup> {
    let cleaned: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(parse_error(spec, "empty spec"));
    }
    let mut factors = cleaned.split(['x', '×']);
    let first = parse_atom(spec, factors.next().unwrap_or_default())?;
    let group = factors.try_fold(first, |acc, atom| {
        let next = parse_atom(spec, atom)?;
        Ok::<_, Error>(direct_product(&acc, &next).0)
    })?;
    Ok(group.with_name(cleaned))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms() {
        assert_eq!(group_from_spec("C1").unwrap().order(), 1);
        assert_eq!(group_from_spec("D8").unwrap().order(), 8);
        assert_eq!(group_from_spec("S4").unwrap().order(), 24);
        assert_eq!(group_from_spec("Dic12").unwrap().order(), 12);
        assert_eq!(group_from_spec(" C2 x C4 ").unwrap().name(), "C2xC4");
    }

    #[test]
    fn element_order_census() {
        let q8 = group_from_spec("Q8").unwrap();
        assert_eq!(q8.order(), 8);
        assert!(!q8.is_abelian());
        assert_eq!(q8.order_census().iter().filter(|&&o| o == 2).count(), 1);

        let c2c4 = group_from_spec("C2xC4").unwrap();
        assert!(c2c4.is_abelian());
        assert_eq!(c2c4.order_census(), vec![1, 2, 2, 2, 4, 4, 4, 4]);
    }

    #[test]
    fn errors() {
        assert!(matches!(group_from_spec(""), Err(Error::Parse { .. })));
        assert!(matches!(group_from_spec("C2x"), Err(Error::Parse { .. })));
        assert!(matches!(group_from_spec("Cq"), Err(Error::Parse { .. })));
        assert!(matches!(group_from_spec("C0"), Err(Error::Parse { .. })));
        assert_eq!(group_from_spec("S5"), Err(Error::UnsupportedAtom("S5".into())));
        assert_eq!(group_from_spec("D7"), Err(Error::UnsupportedAtom("D7".into())));
        assert_eq!(group_from_spec("M11"), Err(Error::UnsupportedAtom("M11".into())));
    }
}
