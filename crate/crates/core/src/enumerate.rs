//! Enumeration of all simple supersingular isogeny classes of dimension `g`
//! over `F_q`, by running over every `pi = sqrt(q) * zeta_L^k` with
//! `phi(L) <= 4g`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::hondatate::{dimension, predicted_dimension, IsogenyClass};
use crate::numtheory::{phi_at_most, units};
use crate::weil::{min_poly_with, normalized_coefficients, stabilizer, WeilNumber};
use crate::{IntPoly, PrimePower};

/// Every `L` with `phi(L) <= 4g`, ascending.
pub fn candidate_orders(g: u32) -> Vec<u64> {
    phi_at_most(4 * g as u64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    pub q: PrimePower,
    pub g: u32,
    pub classes: Vec<IsogenyClass>,
    pub scanned_orders: Vec<u64>,
}

impl EnumerationResult {
    pub fn weil_polys(&self) -> Vec<&IntPoly> {
        self.classes.iter().map(|c| &c.weil_poly).collect()
    }
}

/// Classes of dimension `g` reachable from roots of unity of exact order `l`.
fn classes_at_order(q: &PrimePower, g: u32, l: u64) -> Vec<IsogenyClass> {
    let mut covered = BTreeSet::new();
    let mut found = Vec::new();
    for k in units(l) {
        if covered.contains(&k) {
            continue;
        }
        let w = WeilNumber::new(q.clone(), l, k as i64).expect("k is a unit");
        covered.extend(
            w.conjugate_labels()
                .into_iter()
                .filter(|&(order, _)| order == l)
                .map(|(_, k2)| k2),
        );
        let stab = stabilizer(&w);
        let (_, _, dim) = predicted_dimension(&w, &stab);
        if dim == g {
            found.push(dimension(&min_poly_with(&w, stab), q));
        }
    }
    found
}

pub fn enumerate_simple_ss(q: &PrimePower, g: u32) -> EnumerationResult {
    assert!(g >= 1, "dimension must be positive");
    let orders = candidate_orders(g);
    let mut classes: Vec<IsogenyClass> = orders
        .par_iter()
        .flat_map_iter(|&l| classes_at_order(q, g, l))
        .collect();
    classes.sort_by(|a, b| {
        a.h.cmp_lex(&b.h)
            .then(a.order.cmp(&b.order))
            .then(a.exponent.cmp(&b.exponent))
    });
    classes.dedup_by(|b, a| a.h == b.h);
    EnumerationResult {
        q: q.clone(),
        g,
        classes,
        scanned_orders: orders,
    }
}

/// One coefficient shape shared by several fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    /// `c_i` in `a_i = c_i * q^(i/2) * sqrt(pq)^(i mod 2)`, with the first
    /// nonzero odd entry positive.
    pub pattern: Vec<BigInt>,
    /// Present with both signs on the odd terms.
    pub signed: bool,
    pub fields: Vec<PrimePower>,
}

impl Family {
    pub fn render(&self) -> String {
        render_pattern(&self.pattern, self.signed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    pub g: u32,
    pub families: Vec<Family>,
    /// Classes whose `P` does not fit the normalized pattern.
    pub residuals: Vec<(PrimePower, IntPoly)>,
}

fn flip_odd(c: &[BigInt]) -> Vec<BigInt> {
    c.iter()
        .enumerate()
        .map(|(i, x)| if i % 2 == 1 { -x } else { x.clone() })
        .collect()
}

/// Representative of `c` up to the odd-term sign, plus whether it had one.
pub fn canonical_pattern(c: &[BigInt]) -> (Vec<BigInt>, bool) {
    let first_odd = c
        .iter()
        .enumerate()
        .find(|(i, x)| i % 2 == 1 && !x.is_zero());
    match first_odd {
        None => (c.to_vec(), false),
        Some((_, x)) if x.is_positive() => (c.to_vec(), true),
        Some(_) => (flip_odd(c), true),
    }
}

/// Group the classes of every `(p, n)` by normalized coefficient shape.
pub fn family_scan(primes: &[u64], exponents: &[u32], g: u32) -> FamilyReport {
    let mut shapes: BTreeMap<Vec<BigInt>, (bool, Vec<PrimePower>)> = BTreeMap::new();
    let mut residuals = Vec::new();
    for &p in primes {
        for &n in exponents {
            let q = PrimePower::new(p, n).expect("odd exponent and prime");
            let result = enumerate_simple_ss(&q, g);
            let mut seen: BTreeMap<Vec<BigInt>, BTreeSet<Vec<BigInt>>> = BTreeMap::new();
            for class in &result.classes {
                match normalized_coefficients(&class.weil_poly, &q) {
                    Some(c) => {
                        let (key, _) = canonical_pattern(&c);
                        seen.entry(key).or_default().insert(c);
                    }
                    None => residuals.push((q.clone(), class.weil_poly.clone())),
                }
            }
            for (key, variants) in seen {
                let entry = shapes.entry(key).or_insert((false, Vec::new()));
                entry.0 |= variants.len() == 2;
                entry.1.push(q.clone());
            }
        }
    }
    let mut families: Vec<Family> = shapes
        .into_iter()
        .map(|(pattern, (signed, fields))| Family {
            pattern,
            signed,
            fields,
        })
        .collect();
    families.sort_by(|a, b| {
        IntPoly::new(a.pattern.iter().rev().cloned().collect())
            .cmp_lex(&IntPoly::new(b.pattern.iter().rev().cloned().collect()))
    });
    FamilyReport {
        g,
        families,
        residuals,
    }
}

/// `X^2 +- sqrt(pq)*X + q` style rendering of a normalized pattern.
pub fn render_pattern(c: &[BigInt], signed: bool) -> String {
    let d = c.len() - 1;
    let mut out = String::new();
    for (i, ci) in c.iter().enumerate() {
        if ci.is_zero() {
            continue;
        }
        let odd = i % 2 == 1;
        let sign = match (out.is_empty(), odd && signed, ci.is_negative()) {
            (true, false, false) => "",
            (true, false, true) => "-",
            (_, true, false) => if out.is_empty() { "±" } else { " ± " },
            (_, true, true) => if out.is_empty() { "∓" } else { " ∓ " },
            (false, false, false) => " + ",
            (false, false, true) => " - ",
        };
        out.push_str(sign);
        let mut factors = Vec::new();
        let mag = ci.abs();
        if !mag.is_one() {
            factors.push(mag.to_string());
        }
        match i / 2 {
            0 => {}
            1 => factors.push("q".into()),
            e => factors.push(format!("q^{e}")),
        }
        if odd {
            factors.push("sqrt(pq)".into());
        }
        match d - i {
            0 => {}
            1 => factors.push("X".into()),
            e => factors.push(format!("X^{e}")),
        }
        if factors.is_empty() {
            factors.push("1".into());
        }
        let _ = write!(out, "{}", factors.join("*"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::{euler_phi, is_weil_palindromic};
    use crate::weil::weil_root_check;

    fn pp(p: u64, n: u32) -> PrimePower {
        PrimePower::new(p, n).unwrap()
    }

    fn polys(r: &EnumerationResult) -> BTreeSet<String> {
        r.weil_polys().iter().map(|p| p.to_csv()).collect()
    }

    fn csv_set(v: &[&[i64]]) -> BTreeSet<String> {
        v.iter().map(|c| IntPoly::from_i64(c).to_csv()).collect()
    }

    #[test]
    fn candidate_order_examples() {
        assert_eq!(candidate_orders(1), vec![1, 2, 3, 4, 5, 6, 8, 10, 12]);
        let four: Vec<u64> = candidate_orders(1)
            .into_iter()
            .filter(|&l| euler_phi(l) == 4)
            .collect();
        assert_eq!(four, vec![5, 8, 10, 12]);
        let seven = candidate_orders(7);
        assert!(seven.contains(&29) && seven.contains(&58));
    }

    #[test]
    fn enumeration_examples() {
        let r = enumerate_simple_ss(&pp(2, 1), 1);
        assert_eq!(polys(&r), csv_set(&[&[2, 0, 1], &[2, 2, 1], &[2, -2, 1]]));
        let r = enumerate_simple_ss(&pp(7, 1), 2);
        assert_eq!(
            polys(&r),
            csv_set(&[
                &[49, 0, -7, 0, 1],
                &[49, 0, 7, 0, 1],
                &[49, 0, 0, 0, 1],
                &[49, 0, -14, 0, 1],
            ])
        );
        assert!(enumerate_simple_ss(&pp(3, 1), 7).classes.is_empty());
    }

    #[test]
    fn emitted_classes_are_weil_polynomials() {
        for (p, n) in [(2, 1), (2, 3), (3, 1), (5, 1), (7, 1), (11, 1), (13, 1)] {
            let q = pp(p, n);
            for g in 1..=4 {
                let r = enumerate_simple_ss(&q, g);
                let mut hs = BTreeSet::new();
                for c in &r.classes {
                    assert_eq!(c.g, g);
                    assert_eq!(c.weil_poly.deg(), Some(2 * g as usize));
                    assert!(hs.insert(c.h.to_csv()), "duplicate h");
                    assert!(is_weil_palindromic(&c.weil_poly, &q).unwrap());
                    assert!(weil_root_check(&c.weil_poly, &q), "{}", c.weil_poly);
                }
            }
        }
    }

    #[test]
    fn deterministic() {
        let a = enumerate_simple_ss(&pp(3, 1), 6);
        let b = enumerate_simple_ss(&pp(3, 1), 6);
        assert_eq!(a, b);
    }

    #[test]
    fn family_scan_examples() {
        let r = family_scan(&[2], &[1, 3], 1);
        assert!(r.residuals.is_empty());
        let rendered: Vec<String> = r.families.iter().map(Family::render).collect();
        assert_eq!(rendered, vec!["X^2 + q", "X^2 ± sqrt(pq)*X + q"]);
        for f in &r.families {
            assert_eq!(f.fields, vec![pp(2, 1), pp(2, 3)]);
        }

        let r = family_scan(&[11], &[1], 5);
        assert_eq!(r.families.len(), 1);
        assert!(r.families[0].signed);

        assert!(family_scan(&[5], &[1], 3).families.is_empty());
    }
}
